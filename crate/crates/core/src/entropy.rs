//! Entropic quantities in bits, plus the complementarity terms built from
//! basis overlaps.
//!
//! All logarithms are base 2 and `0 log 0 = 0`. Relative entropy is the only
//! quantity that can be `+∞`.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, inner, log2_of_spectrum, ComplexMatrix, SUPPORT_CUTOFF};
use crate::measure::{outcome_distribution, OutcomeDistribution, ProjectiveMeasurement};
use crate::qstate::{reduced, DensityMatrix};

/// An entropy value in bits.
pub type Bits = f64;

/// Support violations larger than this make relative entropy infinite.
pub const SUPPORT_TOL: f64 = 1e-9;

/// `−x log₂ x` with the `0 log 0 = 0` convention.
pub fn neg_xlog2x(x: f64) -> f64 {
    if x > SUPPORT_CUTOFF {
        -x * x.log2()
    } else {
        0.0
    }
}

pub fn von_neumann(rho: &DensityMatrix) -> Bits {
    rho.eigenvalues().into_iter().map(neg_xlog2x).sum()
}

pub fn shannon(p: &OutcomeDistribution) -> Bits {
    p.probs().iter().copied().map(neg_xlog2x).sum()
}

/// `H(A|B) = H(ρ_AB) − H(ρ_B)`.
pub fn conditional(rho_ab: &DensityMatrix) -> Result<Bits> {
    if !rho_ab.is_bipartite() {
        return Err(Error::InvalidInput(
            "conditional entropy requires a bipartite state".into(),
        ));
    }
    Ok(von_neumann(rho_ab) - von_neumann(&reduced(rho_ab, 1)?))
}

/// `H(ρ‖σ) = tr ρ (log₂ ρ − log₂ σ)`, or `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Bits> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between states with dims {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let sigma_spec = eig_hermitian(sigma.matrix())?;
    let kernel = &ComplexMatrix::identity(sigma.dim()) - &sigma_spec.support_projector();
    let leak = &(&kernel * rho.matrix()) * &kernel;
    if leak.max_abs() > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let rho_spec = eig_hermitian(rho.matrix())?;
    let log_rho = log2_of_spectrum(&rho_spec)?;
    let log_sigma = log2_of_spectrum(&sigma_spec)?;
    Ok(rho.matrix().trace_product_re(&(&log_rho - &log_sigma)))
}

/// `c = max_{k,l} |⟨a_k|b_l⟩|²`.
pub fn overlap_c(m1: &ProjectiveMeasurement, m2: &ProjectiveMeasurement) -> Result<f64> {
    let table = overlap_table(m1, m2)?;
    Ok(table.iter().flatten().copied().fold(0.0, f64::max))
}

/// `table[a][b] = |⟨first_a|second_b⟩|²`.
pub fn overlap_table(
    first: &ProjectiveMeasurement,
    second: &ProjectiveMeasurement,
) -> Result<Vec<Vec<f64>>> {
    if first.d() != second.d() {
        return Err(Error::DimensionMismatch(format!(
            "overlap of a {}-outcome and a {}-outcome measurement",
            first.d(),
            second.d()
        )));
    }
    Ok(first
        .basis()
        .iter()
        .map(|a| {
            second
                .basis()
                .iter()
                .map(|b| inner(a, b).norm_sqr())
                .collect()
        })
        .collect())
}

/// For each outcome `α_N` of the last measurement in `ordering`, the bracket
/// `Σ_{α_2..α_{N−1}} max_{α_1} Π_n |⟨ε_n^{α_n}|ε_{n+1}^{α_{n+1}}⟩|²`.
///
/// Only the first factor depends on `α_1`, so the max collapses to a vector
/// of column maxima that is then pushed through the remaining overlap
/// tables as a vector–matrix chain.
pub fn chain_brackets(ordering: &[&ProjectiveMeasurement]) -> Result<Vec<f64>> {
    if ordering.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least two measurements, got {}",
            ordering.len()
        )));
    }
    let first = overlap_table(ordering[0], ordering[1])?;
    let d = ordering[0].d();
    let mut acc: Vec<f64> = (0..d)
        .map(|b| first.iter().map(|row| row[b]).fold(0.0, f64::max))
        .collect();
    for pair in ordering[1..].windows(2) {
        let t = overlap_table(pair[0], pair[1])?;
        acc = (0..d)
            .map(|b| acc.iter().zip(&t).map(|(w, row)| w * row[b]).sum())
            .collect();
    }
    Ok(acc)
}

fn check_state_dim(ordering: &[&ProjectiveMeasurement], rho: &DensityMatrix) -> Result<()> {
    let d = ordering.first().map_or(0, |m| m.d());
    if rho.measured_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "{d}-outcome measurements on a subsystem of dimension {}",
            rho.measured_dim()
        )));
    }
    Ok(())
}

/// State-dependent complementarity `ℓ_ε^U` for a fixed ordering; the
/// probabilities are those of the last measurement.
pub fn ell_u(ordering: &[&ProjectiveMeasurement], rho: &DensityMatrix) -> Result<Bits> {
    let brackets = chain_brackets(ordering)?;
    check_state_dim(ordering, rho)?;
    let last = ordering[ordering.len() - 1];
    let p = outcome_distribution(last, rho)?;
    Ok(p.probs()
        .iter()
        .zip(&brackets)
        .filter(|(&p, _)| p > 0.0)
        .map(|(p, b)| -p * b.log2())
        .sum())
}

/// State-independent `ℓ̃ = −max_{α_N} log₂ bracket(α_N)`; a lower bound on
/// [`ell_u`] for every state.
pub fn ell_u_tilde(ordering: &[&ProjectiveMeasurement]) -> Result<Bits> {
    let brackets = chain_brackets(ordering)?;
    let worst = brackets.iter().copied().fold(0.0, f64::max);
    Ok(-worst.log2())
}

/// `−Σ_{α₂} p(α₂) log₂ max_{α₁} |⟨first_{α₁}|second_{α₂}⟩|²`, with `p` the
/// outcome distribution of `second`.
pub fn pair_bound_b(
    first: &ProjectiveMeasurement,
    second: &ProjectiveMeasurement,
    rho: &DensityMatrix,
) -> Result<Bits> {
    ell_u(&[first, second], rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{computational_basis, haar_random_basis, pi2_basis, qubit_basis};
    use crate::qstate::{bell, product, pure, random_density, werner, WernerParams};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dist(p: &[f64]) -> OutcomeDistribution {
        OutcomeDistribution::new(p.to_vec()).unwrap()
    }

    /// Exhaustive oracle for the bracket: loops every index tuple explicitly.
    fn brute_force_brackets(ordering: &[&ProjectiveMeasurement]) -> Vec<f64> {
        let n = ordering.len();
        let d = ordering[0].d();
        let ov = |k: usize, a: usize, b: usize| {
            inner(&ordering[k].basis()[a], &ordering[k + 1].basis()[b]).norm_sqr()
        };
        (0..d)
            .map(|last| {
                let middle = n - 2;
                let mut total = 0.0;
                for code in 0..d.pow(middle as u32) {
                    let mut idx = Vec::with_capacity(n);
                    idx.push(0);
                    let mut rest = code;
                    for _ in 0..middle {
                        idx.push(rest % d);
                        rest /= d;
                    }
                    idx.push(last);
                    let mut best: f64 = 0.0;
                    for a1 in 0..d {
                        idx[0] = a1;
                        let prod: f64 = (0..n - 1).map(|k| ov(k, idx[k], idx[k + 1])).product();
                        best = best.max(prod);
                    }
                    total += best;
                }
                total
            })
            .collect()
    }

    #[test]
    fn von_neumann_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = pure(&[c(h), c(0.3), c(0.1), c(0.5)], Some(vec![2, 2])).unwrap();
        assert!(von_neumann(&psi).abs() < 1e-12);
        let mixed = DensityMatrix::new(vec![2, 2], ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert!((von_neumann(&mixed) - 2.0).abs() < 1e-14);
        let w = werner(WernerParams::new(0.5).unwrap());
        let expect = -0.625 * 0.625f64.log2() - 3.0 * (0.125 * 0.125f64.log2());
        assert!((von_neumann(&w) - expect).abs() < 1e-12);
        assert!((expect - 1.54879).abs() < 1e-5);
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&dist(&[1.0, 0.0])), 0.0);
        assert!((shannon(&dist(&[0.5, 0.5])) - 1.0).abs() < 1e-15);
        let expect = -0.8 * 0.8f64.log2() - 0.2 * 0.2f64.log2();
        assert!((shannon(&dist(&[0.8, 0.2])) - expect).abs() < 1e-15);
        assert!((expect - 0.721928).abs() < 1e-6);
    }

    #[test]
    fn conditional_examples() {
        assert!((conditional(&bell()).unwrap() + 1.0).abs() < 1e-10);
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(3, 2, 2).unwrap();
        let p = product(&a, &b).unwrap();
        assert!((conditional(&p).unwrap() - von_neumann(&a)).abs() < 1e-10);
        assert!(conditional(&a).is_err());
    }

    #[test]
    fn relative_examples() {
        let rho = random_density(3, 3, 8).unwrap();
        assert!(relative(&rho, &rho).unwrap().abs() < 1e-10);
        let zero = pure(&[c(1.0), c(0.0)], None).unwrap();
        let half = DensityMatrix::single(ComplexMatrix::identity(2).scale(0.5)).unwrap();
        assert!((relative(&zero, &half).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(relative(&half, &zero).unwrap(), f64::INFINITY);
        let w = werner(WernerParams::new(0.5).unwrap());
        assert!(matches!(
            relative(&half, &w),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn overlap_examples() {
        let z = computational_basis(2);
        assert!((overlap_c(&z, &z).unwrap() - 1.0).abs() < 1e-15);
        let x = qubit_basis(PI / 2.0, 0.0);
        assert!((overlap_c(&x, &z).unwrap() - 0.5).abs() < 1e-15);
        let y = pi2_basis();
        assert!((overlap_c(&qubit_basis(0.0, 0.0), &y).unwrap() - 0.75).abs() < 1e-15);
        let expect = (2.0 + 3f64.sqrt()) / 4.0;
        assert!((overlap_c(&x, &y).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.93301).abs() < 1e-5);
        assert!(overlap_c(&z, &computational_basis(3)).is_err());
    }

    #[test]
    fn overlap_in_range_for_random_pairs() {
        for seed in 0..50 {
            let a = haar_random_basis(2, 2 * seed).unwrap();
            let b = haar_random_basis(2, 2 * seed + 1).unwrap();
            let cval = overlap_c(&a, &b).unwrap();
            assert!((0.5 - 1e-12..1.0).contains(&cval));
        }
    }

    #[test]
    fn ell_u_two_mub_bases() {
        let z = computational_basis(2);
        let x = qubit_basis(PI / 2.0, 0.0);
        for seed in 0..5 {
            let rho = random_density(2, 2, seed).unwrap();
            assert!((ell_u(&[&z, &x], &rho).unwrap() - 1.0).abs() < 1e-14);
            assert!((pair_bound_b(&x, &z, &rho).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((ell_u_tilde(&[&z, &x]).unwrap() - 1.0).abs() < 1e-14);
        assert!(ell_u_tilde(&[&z, &z]).unwrap().abs() < 1e-14);
        assert!(ell_u(&[&z], &random_density(2, 1, 0).unwrap()).is_err());
    }

    #[test]
    fn ell_u_n2_structural_reduction() {
        let a = haar_random_basis(2, 100).unwrap();
        let b = haar_random_basis(2, 101).unwrap();
        let rho = random_density(2, 2, 102).unwrap();
        let p = outcome_distribution(&b, &rho).unwrap();
        let expect: f64 = (0..2)
            .map(|a2| {
                let best = (0..2)
                    .map(|a1| inner(&a.basis()[a1], &b.basis()[a2]).norm_sqr())
                    .fold(0.0, f64::max);
                -p.probs()[a2] * best.log2()
            })
            .sum();
        assert!((ell_u(&[&a, &b], &rho).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn chain_brackets_match_exhaustive_oracle() {
        for (n, d) in [(3, 2), (4, 2), (3, 3), (5, 2), (4, 3)] {
            let ms: Vec<_> = (0..n)
                .map(|i| haar_random_basis(d, 500 + i as u64).unwrap())
                .collect();
            let refs: Vec<&ProjectiveMeasurement> = ms.iter().collect();
            let fast = chain_brackets(&refs).unwrap();
            let slow = brute_force_brackets(&refs);
            for (f, s) in fast.iter().zip(&slow) {
                assert!((f - s).abs() < 1e-14, "n={n} d={d}: {fast:?} vs {slow:?}");
            }
        }
    }

    #[test]
    fn ell_u_three_random_qubit_bases_matches_brute_force() {
        let ms: Vec<_> = (0..3)
            .map(|i| haar_random_basis(2, 40 + i).unwrap())
            .collect();
        let refs: Vec<&ProjectiveMeasurement> = ms.iter().collect();
        let rho = random_density(2, 2, 77).unwrap();
        let p = outcome_distribution(&ms[2], &rho).unwrap();
        let expect: f64 = brute_force_brackets(&refs)
            .iter()
            .zip(p.probs())
            .map(|(b, p)| -p * b.log2())
            .sum();
        assert!((ell_u(&refs, &rho).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn ell_u_dominates_ell_u_tilde() {
        let ms: Vec<_> = (0..3)
            .map(|i| haar_random_basis(2, 900 + i).unwrap())
            .collect();
        let refs: Vec<&ProjectiveMeasurement> = ms.iter().collect();
        let tilde = ell_u_tilde(&refs).unwrap();
        for seed in 0..100 {
            let rho = random_density(2, 1 + (seed as usize % 2), seed).unwrap();
            assert!(ell_u(&refs, &rho).unwrap() >= tilde - 1e-9);
        }
    }

    #[test]
    fn pair_bound_examples() {
        let z = computational_basis(2);
        let rho = random_density(2, 2, 3).unwrap();
        assert!(pair_bound_b(&z, &z, &rho).unwrap().abs() < 1e-15);
        let half = DensityMatrix::single(ComplexMatrix::identity(2).scale(0.5)).unwrap();
        let v = pair_bound_b(&qubit_basis(PI / 2.0, 0.0), &pi2_basis(), &half).unwrap();
        let expect = -((2.0 + 3f64.sqrt()) / 4.0).log2();
        assert!((v - expect).abs() < 1e-14);
        assert!((v - 0.10000).abs() < 1e-4);
    }
}
