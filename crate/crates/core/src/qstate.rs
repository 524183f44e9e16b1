//! Density matrices and the named state families.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, kron, partial_trace, ComplexMatrix, HERMITIAN_TOL};
use crate::sampling::{self, complex_gaussian};

pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// A validated quantum state on one or two subsystems.
///
/// Bipartite basis order is `|a b⟩` with the A index most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(dims: Vec<usize>, mat: ComplexMatrix) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 || dims.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "dims must list one or two positive subsystem dimensions, got {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if total != mat.dim() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} imply dimension {total}, matrix has {}",
                mat.dim()
            )));
        }
        let asym = mat.hermiticity_residual();
        if asym > HERMITIAN_TOL {
            return Err(Error::Invariant {
                invariant: "hermiticity",
                residual: asym,
            });
        }
        let trace_residual = mat.trace().re - 1.0;
        if trace_residual.abs() > TRACE_TOL {
            return Err(Error::Invariant {
                invariant: "trace",
                residual: trace_residual,
            });
        }
        let min = eig_hermitian(&mat)?.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::Invariant {
                invariant: "positivity",
                residual: min,
            });
        }
        Ok(Self { dims, mat })
    }

    /// Single-system state from a matrix.
    pub fn single(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.dim();
        Self::new(vec![d], mat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    /// Dimension of the subsystem a measurement acts on (A, or the whole system).
    pub fn measured_dim(&self) -> usize {
        self.dims[0]
    }

    /// Dimension of the untouched memory subsystem (1 for single systems).
    pub fn memory_dim(&self) -> usize {
        self.dims.get(1).copied().unwrap_or(1)
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product_re(&self.mat)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        // cannot fail: hermiticity was checked on construction
        eig_hermitian(&self.mat)
            .expect("density matrix is Hermitian")
            .eigenvalues
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    eta: f64,
}

impl WernerParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidInput(format!(
                "Werner eta {eta} outside [0, 1]"
            )));
        }
        Ok(Self { eta })
    }

    pub fn eta(self) -> f64 {
        self.eta
    }
}

/// Bloch vector `(0, 0, r3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    r3: f64,
}

impl BlochParams {
    pub fn new(r3: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&r3) {
            return Err(Error::InvalidInput(format!(
                "Bloch r3 {r3} outside [-1, 1]"
            )));
        }
        Ok(Self { r3 })
    }

    pub fn r3(self) -> f64 {
        self.r3
    }
}

fn from_parts(dims: Vec<usize>, mat: ComplexMatrix) -> DensityMatrix {
    debug_assert!(
        DensityMatrix::new(dims.clone(), mat.clone()).is_ok(),
        "internal constructor produced an invalid state"
    );
    DensityMatrix { dims, mat }
}

/// `v v† / ‖v‖²`. `dims` defaults to a single system when `None`.
pub fn pure(v: &[Complex64], dims: Option<Vec<usize>>) -> Result<DensityMatrix> {
    let n = linalg::norm(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::InvalidInput("pure state from a zero vector".into()));
    }
    let mat = ComplexMatrix::outer(v).scale(1.0 / (n * n));
    DensityMatrix::new(dims.unwrap_or_else(|| vec![v.len()]), mat)
}

/// `(|00⟩ + |11⟩)/√2` as a projector.
pub fn bell() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let v = [Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)];
    from_parts(vec![2, 2], ComplexMatrix::outer(&v))
}

/// `η |ψ⁺⟩⟨ψ⁺| + (1 − η) I/4`.
pub fn werner(p: WernerParams) -> DensityMatrix {
    let eta = p.eta();
    let bell = bell();
    let mixed = ComplexMatrix::identity(4).scale((1.0 - eta) / 4.0);
    from_parts(vec![2, 2], &bell.mat.scale(eta) + &mixed)
}

/// `½(I + r3 σ_z)`.
pub fn bloch_qubit(p: BlochParams) -> DensityMatrix {
    let r3 = p.r3();
    from_parts(
        vec![2],
        ComplexMatrix::from_real_diag(&[(1.0 + r3) / 2.0, (1.0 - r3) / 2.0]),
    )
}

pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    if a.is_bipartite() || b.is_bipartite() {
        return Err(Error::InvalidInput(
            "product requires two single-subsystem states".into(),
        ));
    }
    Ok(from_parts(vec![a.dim(), b.dim()], kron(&a.mat, &b.mat)))
}

/// Reduced state of subsystem `keep` (0 = A, 1 = B).
pub fn reduced(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    if !rho.is_bipartite() {
        return Err(Error::InvalidInput(
            "reduced state requires a bipartite input".into(),
        ));
    }
    let m = partial_trace(&rho.mat, &rho.dims, keep)?;
    let d = m.dim();
    Ok(from_parts(vec![d], m))
}

/// `G G† / tr(G G†)` for a `d × rank` complex Gaussian `G` drawn from `rng`.
pub fn random_density_with(
    d: usize,
    rank: usize,
    dims: Option<Vec<usize>>,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidInput(format!("rank {rank} outside 1..={d}")));
    }
    let g: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..rank).map(|_| complex_gaussian(rng)).collect())
        .collect();
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = (0..rank).map(|k| g[i][k] * g[j][k].conj()).sum();
        }
    }
    let t = m.trace().re;
    let dims = dims.unwrap_or_else(|| vec![d]);
    if dims.iter().product::<usize>() != d {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not multiply to {d}"
        )));
    }
    Ok(from_parts(dims, m.scale(1.0 / t)))
}

/// Seeded single-system random state; see [`random_density_with`].
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(d, rank, None, &mut sampling::stream(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pure_examples() {
        let r = pure(&[c(1.0), c(0.0)], None).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0]))
                < 1e-15
        );

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = pure(&[c(h), c(h)], None).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.matrix()[(i, j)] - c(0.5)).norm() < 1e-15);
            }
        }

        let r = pure(&[c(2.0), c(0.0), c(0.0), c(2.0)], Some(vec![2, 2])).unwrap();
        assert!(r.matrix().max_abs_diff(bell().matrix()) < 1e-15);
        assert_eq!(r.dims(), &[2, 2]);
    }

    #[test]
    fn pure_rejects_zero_vector() {
        assert!(pure(&[c(0.0), c(0.0)], None).is_err());
    }

    #[test]
    fn werner_limits_and_spectrum() {
        let w1 = werner(WernerParams::new(1.0).unwrap());
        assert!(w1.matrix().max_abs_diff(bell().matrix()) < 1e-15);
        let w0 = werner(WernerParams::new(0.0).unwrap());
        assert!(
            w0.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale(0.25))
                < 1e-15
        );

        for &eta in &[0.0, 0.3, 0.5, 0.9, 1.0] {
            let mut ev = werner(WernerParams::new(eta).unwrap()).eigenvalues();
            ev.sort_by(f64::total_cmp);
            let mut expect = vec![
                (1.0 + 3.0 * eta) / 4.0,
                (1.0 - eta) / 4.0,
                (1.0 - eta) / 4.0,
                (1.0 - eta) / 4.0,
            ];
            expect.sort_by(f64::total_cmp);
            for (a, b) in ev.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-12, "eta={eta}: {ev:?} vs {expect:?}");
            }
        }
        let ev = werner(WernerParams::new(0.5).unwrap()).eigenvalues();
        assert!((ev[3] - 0.625).abs() < 1e-12);
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(WernerParams::new(1.01).is_err());
        assert!(WernerParams::new(-0.1).is_err());
        assert!(BlochParams::new(1.5).is_err());
        assert!(BlochParams::new(-1.0).is_ok());
    }

    #[test]
    fn bloch_examples() {
        let pole = bloch_qubit(BlochParams::new(1.0).unwrap());
        assert!(
            pole.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0]))
                < 1e-15
        );
        let mixed = bloch_qubit(BlochParams::new(0.0).unwrap());
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5))
                < 1e-15
        );
        let r = bloch_qubit(BlochParams::new(0.6).unwrap());
        assert!(
            r.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.8, 0.2]))
                < 1e-15
        );
    }

    #[test]
    fn product_and_reduced() {
        let zero = pure(&[c(1.0), c(0.0)], None).unwrap();
        let half = bloch_qubit(BlochParams::new(0.0).unwrap());
        let p = product(&zero, &half).unwrap();
        assert_eq!(p.dims(), &[2, 2]);
        assert!(
            p.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0]))
                < 1e-15
        );
        assert!(reduced(&p, 0).unwrap().matrix().max_abs_diff(zero.matrix()) < 1e-12);
        assert!(product(&p, &zero).is_err());
        assert!(reduced(&zero, 0).is_err());
    }

    #[test]
    fn werner_marginal_is_maximally_mixed() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        for i in 0..=10 {
            let w = werner(WernerParams::new(i as f64 / 10.0).unwrap());
            let b = reduced(&w, 1).unwrap();
            assert!(b.matrix().max_abs_diff(&half) < 1e-15);
        }
        assert!(reduced(&bell(), 1).unwrap().matrix().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn random_density_properties() {
        let r = random_density(3, 1, 5).unwrap();
        assert!((r.purity() - 1.0).abs() < 1e-10);

        let r = random_density(4, 4, 6).unwrap();
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(r.eigenvalues()[0] > -1e-12);

        let a = random_density(4, 2, 77).unwrap();
        let b = random_density(4, 2, 77).unwrap();
        assert_eq!(a, b);
        assert!(random_density(2, 3, 0).is_err());
        assert!(random_density(2, 0, 0).is_err());
    }

    #[test]
    fn new_reports_trace_residual() {
        let m = ComplexMatrix::from_real_diag(&[0.7, 0.5]);
        match DensityMatrix::new(vec![2], m) {
            Err(Error::Invariant {
                invariant,
                residual,
            }) => {
                assert_eq!(invariant, "trace");
                assert!((residual - 0.2).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        let neg = ComplexMatrix::from_real_diag(&[1.1, -0.1]);
        assert!(matches!(
            DensityMatrix::new(vec![2], neg),
            Err(Error::Invariant {
                invariant: "positivity",
                ..
            })
        ));
        assert!(DensityMatrix::new(vec![2, 3], ComplexMatrix::identity(4).scale(0.25)).is_err());
    }
}
