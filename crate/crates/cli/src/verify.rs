//! Seeded Monte Carlo verification campaigns.
//!
//! Trial `t` on dimension pair `k` draws everything from
//! `substream(seed, [t, k])`, so a trial's inputs do not depend on how many
//! other trials run or on which worker runs it.

use std::fmt::Write;

use rand::Rng;

use entropic_core::exec::{map_indexed, Execution};
use entropic_core::measure::{computational_basis, haar_random_basis_with, qubit_basis};
use entropic_core::qstate::{product, pure, random_density_with, DensityMatrix};
use entropic_core::relations::{
    dd_memory, entropy_increment_identity, l_opt_report, md_memory, memoryless_mm_double_log,
    memoryless_pair, mm_memory, uncertainty_disturbance_identity, MultiContext, SplitSpec,
};
use entropic_core::sampling::substream;
use entropic_core::{ProjectiveMeasurement, RelationKind, RelationReport};
use num_complex::Complex64;

use crate::error::{CliError, Result};
use crate::format::{e12, table, Format};
use crate::select::{DimsList, Relation, RelationSet};

/// Measurements per trial: three for the multi-measurement relations, a
/// fourth for the pairing bound, which needs an even count.
const BASES_PER_TRIAL: usize = 4;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub dims: DimsList,
    pub tol: f64,
    pub relations: RelationSet,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Usage(
                "--tol must be a finite non-negative number".into(),
            ));
        }
        Ok(())
    }
}

/// Random inputs of one trial.
pub struct Sample {
    /// Bipartite state on `dA ⊗ dB`.
    pub rho_ab: DensityMatrix,
    /// Single-system state on `dA`.
    pub rho_a: DensityMatrix,
    /// State on `dB`, paired with `rho_a` into a memory-free product state.
    pub sigma_b: DensityMatrix,
    pub bases: Vec<ProjectiveMeasurement>,
}

/// Draws the inputs of trial `trial` on dimension pair number `k`.
pub fn draw_sample(seed: u64, trial: usize, k: usize, (da, db): (usize, usize)) -> Result<Sample> {
    let mut rng = substream(seed, &[trial as u64, k as u64]);
    let d = da * db;
    let rank = rng.random_range(1..=d);
    let rho_ab = random_density_with(d, rank, Some(vec![da, db]), &mut rng)?;
    let rank = rng.random_range(1..=da);
    let rho_a = random_density_with(da, rank, None, &mut rng)?;
    let bases = (0..BASES_PER_TRIAL)
        .map(|_| haar_random_basis_with(da, &mut rng))
        .collect::<entropic_core::Result<Vec<_>>>()?;
    let rank = rng.random_range(1..=db);
    let sigma_b = random_density_with(db, rank, None, &mut rng)?;
    Ok(Sample {
        rho_ab,
        rho_a,
        sigma_b,
        bases,
    })
}

fn push_splits(
    out: &mut Vec<RelationReport>,
    ctx: &MultiContext,
    n: usize,
    substitution_name: &str,
) -> Result<()> {
    for split in SplitSpec::nontrivial(n) {
        let report = ctx.split(&split)?;
        // each disturbance is its uncertainty minus the conditional entropy
        let all_uncertainty: f64 = (0..n).map(|i| ctx.uncertainty(i)).sum();
        let substituted = all_uncertainty - split.beta().len() as f64 * ctx.cond();
        out.push(RelationReport::identity(
            substitution_name,
            report.lhs,
            substituted,
        ));
        out.push(report);
    }
    Ok(())
}

/// Evaluates the selected relations on one sample, in a fixed order.
pub fn evaluate_sample(sample: &Sample, relations: &RelationSet) -> Result<Vec<RelationReport>> {
    let Sample {
        rho_ab,
        rho_a,
        sigma_b,
        bases,
    } = sample;
    let (m1, m2) = (&bases[0], &bases[1]);
    let three = &bases[..3];
    let mut out = Vec::new();

    if relations.contains(Relation::UncertaintyDisturbance) {
        out.push(uncertainty_disturbance_identity(rho_ab, m1)?);
    }
    if relations.contains(Relation::Mm) {
        out.push(mm_memory(rho_ab, m1, m2)?);
    }
    if relations.contains(Relation::Md) {
        out.push(md_memory(rho_ab, m1, m2)?);
        out.push(md_memory(rho_ab, m2, m1)?);
    }
    if relations.contains(Relation::Dd) {
        out.push(dd_memory(rho_ab, m1, m2)?);
    }
    if relations.contains(Relation::Memoryless) {
        out.extend(memoryless_pair(rho_a, m1, m2)?);
    }
    if relations.contains(Relation::Increment) {
        out.push(entropy_increment_identity(rho_a, m1)?);
    }
    let needs_three = relations.contains(Relation::Multi) || relations.contains(Relation::Split);
    if needs_three {
        let with_memory = MultiContext::new(rho_ab, three, true)?;
        let without = MultiContext::new(rho_a, three, false)?;
        if relations.contains(Relation::Multi) {
            let all = SplitSpec::all_uncertainty(3);
            out.push(with_memory.evaluate(&all, "multi-mm")?);
            out.push(without.evaluate(&all, "multi-nomem")?);
            let prod = product(rho_a, sigma_b)?;
            out.push(MultiContext::new(&prod, three, true)?.evaluate(&all, "multi-mm-product")?);
        }
        if relations.contains(Relation::Split) {
            push_splits(&mut out, &with_memory, 3, "split-mem-substitution")?;
            push_splits(&mut out, &without, 3, "split-nomem-substitution")?;
        }
    }
    if relations.contains(Relation::MultiLopt) {
        let all = SplitSpec::all_uncertainty(BASES_PER_TRIAL);
        for (state, memory, name) in [(rho_ab, true, "multi4-mm"), (rho_a, false, "multi4-nomem")] {
            let base = MultiContext::new(state, bases, memory)?.evaluate(&all, name)?;
            out.extend(l_opt_report(&base));
        }
    }
    if relations.contains(Relation::DoubleLog) {
        out.push(memoryless_mm_double_log(rho_a, m1, m2)?);
    }
    Ok(out)
}

/// The pure-state, mutually-unbiased-pair instance that breaks the
/// doubled-coefficient bound: `|0⟩⟨0|` with the computational and Hadamard
/// bases gives `lhs = 1`, `rhs = 2`.
pub fn double_log_counterexample() -> Result<RelationReport> {
    let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let rho = pure(&zero, None)?;
    let hadamard = qubit_basis(std::f64::consts::FRAC_PI_2, 0.0);
    Ok(memoryless_mm_double_log(
        &rho,
        &computational_basis(2),
        &hadamard,
    )?)
}

/// Aggregate over every evaluation of one named relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationSummary {
    pub name: String,
    pub kind: RelationKind,
    pub asserted: bool,
    pub evaluations: usize,
    pub min_slack: f64,
    pub max_abs_slack: f64,
    /// Evaluations outside tolerance (violations when asserted).
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub trial: usize,
    pub dims: (usize, usize),
    pub report: RelationReport,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub config: VerifyConfig,
    pub summaries: Vec<RelationSummary>,
    /// Out-of-tolerance evaluations in (trial, dims, evaluation) order,
    /// asserted and report-only alike.
    pub violations: Vec<Violation>,
    pub counterexample: Option<RelationReport>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.summaries
            .iter()
            .all(|s| !s.asserted || s.failures == 0)
    }

    pub fn summary(&self, name: &str) -> Option<&RelationSummary> {
        self.summaries.iter().find(|s| s.name == name)
    }

    pub fn render(&self, format: Format) -> String {
        let c = &self.config;
        let mut out = String::new();
        writeln!(
            out,
            "# verify trials={} seed={} dims={} tol={} relations={}",
            c.trials,
            c.seed,
            c.dims,
            e12(c.tol),
            c.relations
        )
        .unwrap();
        for v in &self.violations {
            let r = &v.report;
            writeln!(
                out,
                "{} relation={} trial={} dims={}x{} seed={} lhs={} rhs={} slack={}{}",
                if r.asserted {
                    "violation"
                } else {
                    "report-only"
                },
                r.name,
                v.trial,
                v.dims.0,
                v.dims.1,
                c.seed,
                e12(r.lhs),
                e12(r.rhs),
                e12(r.slack),
                aux_suffix(r)
            )
            .unwrap();
        }
        if let Some(r) = &self.counterexample {
            writeln!(
                out,
                "counterexample relation={} state=|0><0| bases=computational,hadamard lhs={} rhs={} slack={} satisfied={}",
                r.name,
                e12(r.lhs),
                e12(r.rhs),
                e12(r.slack),
                r.satisfied
            )
            .unwrap();
        }
        let rows: Vec<Vec<String>> = self
            .summaries
            .iter()
            .map(|s| {
                vec![
                    s.name.clone(),
                    s.kind.to_string(),
                    s.asserted.to_string(),
                    s.evaluations.to_string(),
                    e12(s.min_slack),
                    e12(s.max_abs_slack),
                    s.failures.to_string(),
                ]
            })
            .collect();
        out.push_str(&table(
            &[
                "relation",
                "kind",
                "asserted",
                "evaluations",
                "min_slack",
                "max_abs_slack",
                "failures",
            ],
            &rows,
            format,
        ));
        let asserted_failures: usize = self
            .summaries
            .iter()
            .filter(|s| s.asserted)
            .map(|s| s.failures)
            .sum();
        writeln!(
            out,
            "# result={} asserted_violations={}",
            if self.passed() { "pass" } else { "fail" },
            asserted_failures
        )
        .unwrap();
        out
    }
}

fn aux_suffix(r: &RelationReport) -> String {
    r.aux
        .iter()
        .map(|(k, v)| format!(" {k}={}", e12(*v)))
        .collect()
}

fn summarize(summaries: &mut Vec<RelationSummary>, r: &RelationReport) {
    let idx = match summaries.iter().position(|s| s.name == r.name) {
        Some(i) => i,
        None => {
            summaries.push(RelationSummary {
                name: r.name.clone(),
                kind: r.kind,
                asserted: r.asserted,
                evaluations: 0,
                min_slack: f64::INFINITY,
                max_abs_slack: 0.0,
                failures: 0,
            });
            summaries.len() - 1
        }
    };
    let s = &mut summaries[idx];
    s.evaluations += 1;
    // NaN slack must surface rather than vanish inside min/max
    s.min_slack = if r.slack.is_nan() {
        f64::NAN
    } else {
        s.min_slack.min(r.slack)
    };
    s.max_abs_slack = if r.slack.is_nan() || s.max_abs_slack.is_nan() {
        f64::NAN
    } else {
        s.max_abs_slack.max(r.slack.abs())
    };
    if !r.satisfied {
        s.failures += 1;
    }
}

pub fn run_verify(cfg: &VerifyConfig, exec: Execution) -> Result<VerifyOutcome> {
    cfg.validate()?;
    let dims = &cfg.dims.0;
    let jobs = cfg.trials * dims.len();
    let results = map_indexed(exec, jobs, |i| {
        let (t, k) = (i / dims.len(), i % dims.len());
        let sample = draw_sample(cfg.seed, t, k, dims[k])?;
        let reports = evaluate_sample(&sample, &cfg.relations)?
            .into_iter()
            .map(|r| r.with_tol(cfg.tol))
            .collect::<Vec<_>>();
        Ok::<_, CliError>(reports)
    });

    let mut summaries = Vec::new();
    let mut violations = Vec::new();
    for (i, reports) in results.into_iter().enumerate() {
        let (t, k) = (i / dims.len(), i % dims.len());
        for r in reports? {
            summarize(&mut summaries, &r);
            if !r.satisfied {
                violations.push(Violation {
                    trial: t,
                    dims: dims[k],
                    report: r,
                });
            }
        }
    }
    let counterexample = if cfg.relations.contains(Relation::DoubleLog) {
        Some(double_log_counterexample()?.with_tol(cfg.tol))
    } else {
        None
    };
    Ok(VerifyOutcome {
        config: cfg.clone(),
        summaries,
        violations,
        counterexample,
    })
}
