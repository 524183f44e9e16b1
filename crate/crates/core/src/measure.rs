//! Rank-one projective measurements and the dephasing (pinching) channel.
//!
//! A measurement always acts on the first subsystem of a bipartite state, or
//! on the whole system of a single-subsystem state; which case applies is read
//! off the state's `dims`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{inner, kron, ComplexMatrix};
use crate::qstate::DensityMatrix;
use crate::sampling::{self, complex_gaussian};

pub const ORTHONORMAL_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// An orthonormal basis `{|b_k⟩}` defining projectors `Π_k = |b_k⟩⟨b_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: Vec<Vec<Complex64>>,
}

impl ProjectiveMeasurement {
    pub fn new(basis: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 {
            return Err(Error::InvalidInput("measurement basis is empty".into()));
        }
        if let Some(v) = basis.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "basis vector of length {} in a {d}-dimensional basis",
                v.len()
            )));
        }
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(&basis[i], &basis[j]) - delta).norm());
            }
        }
        if worst > ORTHONORMAL_TOL {
            return Err(Error::Invariant {
                invariant: "orthonormality",
                residual: worst,
            });
        }
        let m = Self { basis };
        let sum = (0..d).fold(ComplexMatrix::zeros(d), |acc, k| &acc + &m.projector(k));
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if completeness > COMPLETENESS_TOL {
            return Err(Error::Invariant {
                invariant: "completeness",
                residual: completeness,
            });
        }
        Ok(m)
    }

    pub fn d(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    pub fn projector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.basis[k])
    }

    /// `Π_k ⊗ I_memory`.
    fn lifted_projector(&self, k: usize, memory_dim: usize) -> ComplexMatrix {
        let p = self.projector(k);
        if memory_dim == 1 {
            p
        } else {
            kron(&p, &ComplexMatrix::identity(memory_dim))
        }
    }
}

/// Outcome probabilities of a measurement; tiny negatives are clamped to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some(&p) = probs
            .iter()
            .find(|&&p| p.is_nan() || p < -PROBABILITY_FLOOR)
        {
            return Err(Error::InvalidInput(format!("negative probability {p:e}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Invariant {
                invariant: "normalization",
                residual: sum - 1.0,
            });
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Qubit basis parametrized by polar angle `theta` and azimuth `phi`:
/// `{(cos θ/2, −e^{iφ} sin θ/2), (e^{−iφ} sin θ/2, cos θ/2)}`.
pub fn qubit_basis(theta: f64, phi: f64) -> ProjectiveMeasurement {
    let phi = phi.rem_euclid(2.0 * PI);
    // θ and 2π − θ describe the same axis; fold into [0, π]
    let mut theta = theta.rem_euclid(2.0 * PI);
    if theta > PI {
        theta = 2.0 * PI - theta;
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let basis = vec![
        vec![Complex64::new(c, 0.0), -e * s],
        vec![e.conj() * s, Complex64::new(c, 0.0)],
    ];
    ProjectiveMeasurement { basis }
}

/// `{(1/2, √3/2), (√3/2, −1/2)}`.
pub fn pi2_basis() -> ProjectiveMeasurement {
    let r = 3f64.sqrt() / 2.0;
    let basis = vec![
        vec![Complex64::new(0.5, 0.0), Complex64::new(r, 0.0)],
        vec![Complex64::new(r, 0.0), Complex64::new(-0.5, 0.0)],
    ];
    ProjectiveMeasurement { basis }
}

/// The computational basis of dimension `d`.
pub fn computational_basis(d: usize) -> ProjectiveMeasurement {
    let basis = (0..d)
        .map(|k| {
            (0..d)
                .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    ProjectiveMeasurement { basis }
}

/// Haar-distributed basis: Gram–Schmidt on the columns of a complex Gaussian
/// matrix, keeping the positive-diagonal convention for `R`.
pub fn haar_random_basis_with(d: usize, rng: &mut impl Rng) -> Result<ProjectiveMeasurement> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("basis dimension {d} < 2")));
    }
    let cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| complex_gaussian(rng)).collect())
        .collect();
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for mut v in cols {
        // modified Gram–Schmidt, twice for stability
        for _ in 0..2 {
            for u in &q {
                let proj = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let n = crate::linalg::norm(&v);
        q.push(v.into_iter().map(|z| z / n).collect());
    }
    ProjectiveMeasurement::new(q)
}

pub fn haar_random_basis(d: usize, seed: u64) -> Result<ProjectiveMeasurement> {
    haar_random_basis_with(d, &mut sampling::stream(seed))
}

fn check_dims(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<()> {
    if m.d() != rho.measured_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-outcome measurement on a subsystem of dimension {}",
            m.d(),
            rho.measured_dim()
        )));
    }
    Ok(())
}

/// `p_k = tr((Π_k ⊗ I) ρ)`.
pub fn outcome_distribution(
    m: &ProjectiveMeasurement,
    rho: &DensityMatrix,
) -> Result<OutcomeDistribution> {
    check_dims(m, rho)?;
    let db = rho.memory_dim();
    let mat = rho.matrix();
    let probs = m
        .basis()
        .iter()
        .map(|b| {
            // ⟨b, j| ρ |b, j⟩ summed over the memory index j
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..db {
                for (x, bx) in b.iter().enumerate() {
                    for (y, by) in b.iter().enumerate() {
                        acc += bx.conj() * mat[(x * db + j, y * db + j)] * by;
                    }
                }
            }
            acc.re
        })
        .collect();
    OutcomeDistribution::new(probs)
}

/// Unselective post-measurement state `Σ_k (Π_k ⊗ I) ρ (Π_k ⊗ I)`.
pub fn dephase(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(m, rho)?;
    let db = rho.memory_dim();
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..m.d() {
        let p = m.lifted_projector(k, db);
        out = &out + &(&(&p * rho.matrix()) * &p);
    }
    DensityMatrix::new(rho.dims().to_vec(), out)
}
