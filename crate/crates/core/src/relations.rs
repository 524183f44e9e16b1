//! Evaluates the uncertainty/disturbance identities and inequalities as
//! [`RelationReport`]s.
//!
//! Naming used below: the *uncertainty* of a measurement is `H(Π|B)` (or
//! `H(ρ_Π)` without memory), its *disturbance* is `H(ρ‖ρ_Π)` where `ρ_Π` is
//! the dephased state.

use std::fmt;

use crate::entropy::{conditional, ell_u, overlap_c, pair_bound_b, relative, von_neumann, Bits};
use crate::error::{Error, Result};
use crate::measure::{dephase, ProjectiveMeasurement};
use crate::qstate::{reduced, DensityMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest measurement count accepted by the ordering search (N! orderings).
pub const MAX_ORDERED_MEASUREMENTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Identity,
    Inequality,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Identity => "identity",
            RelationKind::Inequality => "inequality",
        })
    }
}

/// One evaluated relation `lhs (=|≥) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub name: String,
    pub kind: RelationKind,
    pub lhs: Bits,
    pub rhs: Bits,
    /// `lhs − rhs`
    pub slack: Bits,
    pub satisfied: bool,
    pub tol: f64,
    /// Report-only relations never count as violations.
    pub asserted: bool,
    /// Auxiliary named values (candidate bounds and the like).
    pub aux: Vec<(String, f64)>,
}

impl RelationReport {
    fn build(name: impl Into<String>, kind: RelationKind, lhs: Bits, rhs: Bits) -> Self {
        let mut r = Self {
            name: name.into(),
            kind,
            lhs,
            rhs,
            slack: lhs - rhs,
            satisfied: false,
            tol: DEFAULT_TOL,
            asserted: true,
            aux: Vec::new(),
        };
        r.satisfied = r.judge();
        r
    }

    pub fn identity(name: impl Into<String>, lhs: Bits, rhs: Bits) -> Self {
        Self::build(name, RelationKind::Identity, lhs, rhs)
    }

    pub fn inequality(name: impl Into<String>, lhs: Bits, rhs: Bits) -> Self {
        Self::build(name, RelationKind::Inequality, lhs, rhs)
    }

    fn judge(&self) -> bool {
        match self.kind {
            RelationKind::Identity => self.slack.abs() <= self.tol,
            // +∞ slack (infinite disturbance) satisfies any lower bound
            RelationKind::Inequality => self.slack >= -self.tol,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.satisfied = self.judge();
        self
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    fn with_aux(mut self, key: &str, value: f64) -> Self {
        self.aux.push((key.to_string(), value));
        self
    }

    pub fn aux_value(&self, key: &str) -> Option<f64> {
        self.aux.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn violated(&self) -> bool {
        self.asserted && !self.satisfied
    }
}

/// Per-state quantities shared by every relation on that state.
struct Scenario<'a> {
    rho: &'a DensityMatrix,
    /// `H(ρ_B)` with memory, 0 without.
    memory_entropy: Bits,
    /// `H(A|B)` with memory, `H(ρ)` without.
    cond: Bits,
}

#[derive(Debug, Clone, Copy)]
struct Terms {
    uncertainty: Bits,
    disturbance: Bits,
}

impl<'a> Scenario<'a> {
    fn with_memory(rho: &'a DensityMatrix) -> Result<Self> {
        if !rho.is_bipartite() {
            return Err(Error::InvalidInput(
                "relation with quantum memory requires a bipartite state".into(),
            ));
        }
        let memory_entropy = von_neumann(&reduced(rho, 1)?);
        Ok(Self {
            rho,
            memory_entropy,
            cond: conditional(rho)?,
        })
    }

    fn without_memory(rho: &'a DensityMatrix) -> Result<Self> {
        if rho.is_bipartite() {
            return Err(Error::InvalidInput(
                "relation without quantum memory requires a single-system state".into(),
            ));
        }
        Ok(Self {
            rho,
            memory_entropy: 0.0,
            cond: von_neumann(rho),
        })
    }

    fn new(rho: &'a DensityMatrix, memory: bool) -> Result<Self> {
        if memory {
            Self::with_memory(rho)
        } else {
            Self::without_memory(rho)
        }
    }

    fn terms(&self, m: &ProjectiveMeasurement) -> Result<Terms> {
        let post = dephase(m, self.rho)?;
        Ok(Terms {
            uncertainty: von_neumann(&post) - self.memory_entropy,
            disturbance: relative(self.rho, &post)?,
        })
    }
}

fn neg_log2_c(m1: &ProjectiveMeasurement, m2: &ProjectiveMeasurement) -> Result<Bits> {
    Ok(-overlap_c(m1, m2)?.log2())
}

/// `H(ρ_AB‖ρ_ΠB) − H(Π|B) = −H(A|B)`.
pub fn uncertainty_disturbance_identity(
    rho_ab: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::with_memory(rho_ab)?;
    let t = s.terms(m)?;
    Ok(RelationReport::identity(
        "uncertainty-disturbance",
        t.disturbance - t.uncertainty,
        -s.cond,
    )
    .with_aux("disturbance", t.disturbance)
    .with_aux("uncertainty", t.uncertainty))
}

/// Memory-assisted M-M: `H(Π¹|B) + H(Π²|B) ≥ −log₂ c + H(A|B)`.
pub fn mm_memory(
    rho_ab: &DensityMatrix,
    m1: &ProjectiveMeasurement,
    m2: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::with_memory(rho_ab)?;
    let bound = neg_log2_c(m1, m2)?;
    let lhs = s.terms(m1)?.uncertainty + s.terms(m2)?.uncertainty;
    Ok(RelationReport::inequality("mm", lhs, bound + s.cond))
}

/// M-D: `H(ρ_AB‖ρ_{Π_d B}) + H(Π_m|B) ≥ −log₂ c`.
pub fn md_memory(
    rho_ab: &DensityMatrix,
    m_disturbed: &ProjectiveMeasurement,
    m_measured: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::with_memory(rho_ab)?;
    let bound = neg_log2_c(m_disturbed, m_measured)?;
    let lhs = s.terms(m_disturbed)?.disturbance + s.terms(m_measured)?.uncertainty;
    Ok(RelationReport::inequality("md", lhs, bound))
}

/// D-D: `H(ρ_AB‖ρ_{Π¹B}) + H(ρ_AB‖ρ_{Π²B}) ≥ −log₂ c − H(A|B)`.
pub fn dd_memory(
    rho_ab: &DensityMatrix,
    m1: &ProjectiveMeasurement,
    m2: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::with_memory(rho_ab)?;
    let bound = neg_log2_c(m1, m2)?;
    let lhs = s.terms(m1)?.disturbance + s.terms(m2)?.disturbance;
    Ok(RelationReport::inequality("dd", lhs, bound - s.cond))
}

/// `H(ρ‖ρ_Π) = H(ρ_Π) − H(ρ)` for a single system.
pub fn entropy_increment_identity(
    rho: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::without_memory(rho)?;
    let t = s.terms(m)?;
    Ok(RelationReport::identity(
        "entropy-increment",
        t.disturbance,
        t.uncertainty - s.cond,
    ))
}

/// The memory-free relations for a pair of measurements.
///
/// Returns, in order: `nomem-mm` (`≥ −log₂ c + H(ρ)`), `nomem-md12`,
/// `nomem-md21`, `nomem-dd`, and the two links of the chain
/// `MM = MD + H(ρ) = DD + 2H(ρ)` as identities `chain-md`, `chain-dd`.
pub fn memoryless_pair(
    rho: &DensityMatrix,
    m1: &ProjectiveMeasurement,
    m2: &ProjectiveMeasurement,
) -> Result<Vec<RelationReport>> {
    let s = Scenario::without_memory(rho)?;
    let bound = neg_log2_c(m1, m2)?;
    let t1 = s.terms(m1)?;
    let t2 = s.terms(m2)?;
    let h = s.cond;
    let mm = t1.uncertainty + t2.uncertainty;
    let md12 = t1.disturbance + t2.uncertainty;
    let md21 = t2.disturbance + t1.uncertainty;
    let dd = t1.disturbance + t2.disturbance;
    Ok(vec![
        RelationReport::inequality("nomem-mm", mm, bound + h),
        RelationReport::inequality("nomem-md12", md12, bound),
        RelationReport::inequality("nomem-md21", md21, bound),
        RelationReport::inequality("nomem-dd", dd, bound - h),
        RelationReport::identity("chain-md", mm, md12 + h),
        RelationReport::identity("chain-dd", mm, dd + 2.0 * h),
    ])
}

/// The memory-free M-M bound with the `−2 log₂ c` coefficient; report-only,
/// since pure states with a mutually unbiased pair violate it.
pub fn memoryless_mm_double_log(
    rho: &DensityMatrix,
    m1: &ProjectiveMeasurement,
    m2: &ProjectiveMeasurement,
) -> Result<RelationReport> {
    let s = Scenario::without_memory(rho)?;
    let bound = neg_log2_c(m1, m2)?;
    let mm = s.terms(m1)?.uncertainty + s.terms(m2)?.uncertainty;
    Ok(RelationReport::inequality("nomem-mm-double-log", mm, 2.0 * bound + s.cond).report_only())
}

/// Which measurements contribute uncertainties (`gamma`) and which
/// contribute disturbances (`beta`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    gamma: Vec<usize>,
    beta: Vec<usize>,
}

impl SplitSpec {
    pub fn new(mut gamma: Vec<usize>, mut beta: Vec<usize>, n: usize) -> Result<Self> {
        gamma.sort_unstable();
        beta.sort_unstable();
        let mut all: Vec<usize> = gamma.iter().chain(&beta).copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!(
                "split gamma={gamma:?} beta={beta:?} is not a partition of 0..{n}"
            )));
        }
        Ok(Self { gamma, beta })
    }

    /// Every measurement contributes an uncertainty.
    pub fn all_uncertainty(n: usize) -> Self {
        Self {
            gamma: (0..n).collect(),
            beta: Vec::new(),
        }
    }

    /// Bit `i` of `mask` set puts measurement `i` in the disturbance set.
    pub fn from_mask(mask: u32, n: usize) -> Self {
        let (beta, gamma): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| mask >> i & 1 == 1);
        Self { gamma, beta }
    }

    /// The `2^n − 2` splits with both sets non-empty.
    pub fn nontrivial(n: usize) -> Vec<Self> {
        (1..(1u32 << n) - 1)
            .map(|m| Self::from_mask(m, n))
            .collect()
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn n(&self) -> usize {
        self.gamma.len() + self.beta.len()
    }

    fn label(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        format!("g[{}]b[{}]", join(&self.gamma), join(&self.beta))
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&x| x > p[i])
        .expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// `max_ε ℓ_ε^U` over all orderings, with the lexicographically first argmax.
pub fn ordering_max_ell(
    measurements: &[ProjectiveMeasurement],
    rho: &DensityMatrix,
) -> Result<(Bits, Vec<usize>)> {
    let n = measurements.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least two measurements, got {n}"
        )));
    }
    if n > MAX_ORDERED_MEASUREMENTS {
        return Err(Error::InvalidInput(format!(
            "{n} measurements exceed the ordering-search limit of {MAX_ORDERED_MEASUREMENTS}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(Bits, Vec<usize>)> = None;
    loop {
        let ordering: Vec<&ProjectiveMeasurement> =
            perm.iter().map(|&i| &measurements[i]).collect();
        let v = ell_u(&ordering, rho)?;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, perm.clone()));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("at least one ordering"))
}

fn matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    match items {
        [] => vec![Vec::new()],
        [first, rest @ ..] => {
            let mut out = Vec::new();
            for (k, &partner) in rest.iter().enumerate() {
                let remaining: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &x)| x)
                    .collect();
                for mut tail in matchings(&remaining) {
                    tail.insert(0, (*first, partner));
                    out.push(tail);
                }
            }
            out
        }
    }
}

/// A pairing term and the matching that attains it.
pub type Pairing = (Bits, Vec<(usize, usize)>);

/// Best pairing term: over all perfect matchings of the measurements into
/// unordered pairs, the sum of each pair's `max` over both orders of
/// [`pair_bound_b`]. `None` for an odd count.
pub fn max_pairing_b(
    measurements: &[ProjectiveMeasurement],
    rho: &DensityMatrix,
) -> Result<Option<Pairing>> {
    let n = measurements.len();
    if n < 2 || n % 2 == 1 {
        return Ok(None);
    }
    let mut pair_value = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = pair_bound_b(&measurements[i], &measurements[j], rho)?.max(pair_bound_b(
                &measurements[j],
                &measurements[i],
                rho,
            )?);
            pair_value[i][j] = v;
            pair_value[j][i] = v;
        }
    }
    let items: Vec<usize> = (0..n).collect();
    let mut best: Option<Pairing> = None;
    for m in matchings(&items) {
        let v: f64 = m.iter().map(|&(a, b)| pair_value[a][b]).sum();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, m));
        }
    }
    Ok(best)
}

/// Precomputed per-state quantities for evaluating many splits of the same
/// measurement set.
pub struct MultiContext {
    memory: bool,
    n: usize,
    cond: Bits,
    terms: Vec<Terms>,
    max_ell: Bits,
    ordering: Vec<usize>,
    pairing: Option<Pairing>,
}

impl MultiContext {
    pub fn new(
        state: &DensityMatrix,
        measurements: &[ProjectiveMeasurement],
        memory: bool,
    ) -> Result<Self> {
        let s = Scenario::new(state, memory)?;
        let (max_ell, ordering) = ordering_max_ell(measurements, state)?;
        let terms = measurements
            .iter()
            .map(|m| s.terms(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            memory,
            n: measurements.len(),
            cond: s.cond,
            terms,
            max_ell,
            ordering,
            pairing: max_pairing_b(measurements, state)?,
        })
    }

    /// `H(A|B)` with memory, `H(ρ)` without.
    pub fn cond(&self) -> Bits {
        self.cond
    }

    pub fn max_ell(&self) -> (Bits, &[usize]) {
        (self.max_ell, &self.ordering)
    }

    pub fn uncertainty(&self, i: usize) -> Bits {
        self.terms[i].uncertainty
    }

    pub fn disturbance(&self, i: usize) -> Bits {
        self.terms[i].disturbance
    }

    /// The split relation: plain sums on the left, `max{L₁', 0}` on the right.
    /// The pairing candidate `L_opt'` travels in `aux` (see [`l_opt_report`]).
    pub fn evaluate(&self, split: &SplitSpec, name: &str) -> Result<RelationReport> {
        if split.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "split covers {} measurements, context has {}",
                split.n(),
                self.n
            )));
        }
        let mut lhs = 0.0;
        for i in 0..self.n {
            lhs += if split.beta.contains(&i) {
                self.terms[i].disturbance
            } else {
                self.terms[i].uncertainty
            };
        }
        let n = self.n as f64;
        let beta = split.beta.len() as f64;
        let l1 = (n - 1.0 - beta) * self.cond + self.max_ell;
        let mut report = RelationReport::inequality(name, lhs, l1.max(0.0))
            .with_aux("l1", l1)
            .with_aux("max_ell", self.max_ell)
            .with_aux("cond", self.cond);
        if let Some((b, _)) = &self.pairing {
            report = report.with_aux("l_opt", (n / 2.0 - beta) * self.cond + b);
        }
        Ok(report)
    }

    pub fn split(&self, split: &SplitSpec) -> Result<RelationReport> {
        let prefix = if self.memory {
            "split-mem"
        } else {
            "split-nomem"
        };
        self.evaluate(split, &format!("{prefix}-{}", split.label()))
    }
}

/// `Σ_i H(Π_i|B) ≥ max{L₁, 0}` with `L₁ = (N−1) H(A|B) + max_ε ℓ_ε^U`.
pub fn multi_mm(
    rho_ab: &DensityMatrix,
    measurements: &[ProjectiveMeasurement],
) -> Result<RelationReport> {
    MultiContext::new(rho_ab, measurements, true)?
        .evaluate(&SplitSpec::all_uncertainty(measurements.len()), "multi-mm")
}

/// Split relation mixing `γ` uncertainties with `β` disturbances, with
/// (`memory = true`, bipartite state) or without (single-system state)
/// quantum memory.
pub fn split_relation(
    state: &DensityMatrix,
    measurements: &[ProjectiveMeasurement],
    split: &SplitSpec,
    memory: bool,
) -> Result<RelationReport> {
    if split.n() != measurements.len() {
        return Err(Error::InvalidInput(format!(
            "split covers {} measurements, {} given",
            split.n(),
            measurements.len()
        )));
    }
    MultiContext::new(state, measurements, memory)?.split(split)
}

/// Report-only variant with the pairing candidate included:
/// `lhs ≥ max{L₁, L_opt, 0}`. `None` when no pairing bound exists (odd N).
pub fn l_opt_report(report: &RelationReport) -> Option<RelationReport> {
    let l_opt = report.aux_value("l_opt")?;
    let l1 = report.aux_value("l1")?;
    Some(
        RelationReport::inequality(
            format!("{}-lopt", report.name),
            report.lhs,
            l1.max(l_opt).max(0.0),
        )
        .with_tol(report.tol)
        .with_aux("l1", l1)
        .with_aux("l_opt", l_opt)
        .report_only(),
    )
}
