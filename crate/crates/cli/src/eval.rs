//! One-shot evaluation of a user-supplied state and measurement list.

use std::fmt::Write;

use entropic_core::relations::{
    dd_memory, entropy_increment_identity, l_opt_report, md_memory, memoryless_mm_double_log,
    memoryless_pair, mm_memory, uncertainty_disturbance_identity, MultiContext, SplitSpec,
    MAX_ORDERED_MEASUREMENTS,
};
use entropic_core::RelationReport;

use crate::error::Result;
use crate::format::{e12, table, Format};
use crate::input::Problem;
use crate::select::{Relation, RelationSet};

fn tagged(mut r: RelationReport, tag: &str) -> RelationReport {
    r.name = format!("{}[{tag}]", r.name);
    r
}

/// Every selected relation that applies to the problem: the memory-assisted
/// family for a bipartite state, the memory-free family for a single system.
pub fn evaluate_problem(
    problem: &Problem,
    relations: &RelationSet,
    tol: f64,
) -> Result<Vec<RelationReport>> {
    let Problem {
        state,
        measurements: ms,
    } = problem;
    let memory = state.is_bipartite();
    let pairs: Vec<(usize, usize)> = (0..ms.len())
        .flat_map(|i| (i + 1..ms.len()).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();

    if memory {
        for (i, m) in ms.iter().enumerate() {
            if relations.contains(Relation::UncertaintyDisturbance) {
                out.push(tagged(
                    uncertainty_disturbance_identity(state, m)?,
                    &i.to_string(),
                ));
            }
        }
        for &(i, j) in &pairs {
            let tag = format!("{i},{j}");
            if relations.contains(Relation::Mm) {
                out.push(tagged(mm_memory(state, &ms[i], &ms[j])?, &tag));
            }
            if relations.contains(Relation::Md) {
                out.push(tagged(md_memory(state, &ms[i], &ms[j])?, &tag));
                out.push(tagged(
                    md_memory(state, &ms[j], &ms[i])?,
                    &format!("{j},{i}"),
                ));
            }
            if relations.contains(Relation::Dd) {
                out.push(tagged(dd_memory(state, &ms[i], &ms[j])?, &tag));
            }
        }
    } else {
        for (i, m) in ms.iter().enumerate() {
            if relations.contains(Relation::Increment) {
                out.push(tagged(
                    entropy_increment_identity(state, m)?,
                    &i.to_string(),
                ));
            }
        }
        for &(i, j) in &pairs {
            let tag = format!("{i},{j}");
            if relations.contains(Relation::Memoryless) {
                for r in memoryless_pair(state, &ms[i], &ms[j])? {
                    out.push(tagged(r, &tag));
                }
            }
            if relations.contains(Relation::DoubleLog) {
                out.push(tagged(
                    memoryless_mm_double_log(state, &ms[i], &ms[j])?,
                    &tag,
                ));
            }
        }
    }

    let multi = relations.contains(Relation::Multi)
        || relations.contains(Relation::Split)
        || relations.contains(Relation::MultiLopt);
    if multi && (2..=MAX_ORDERED_MEASUREMENTS).contains(&ms.len()) {
        let n = ms.len();
        let ctx = MultiContext::new(state, ms, memory)?;
        let name = if memory { "multi-mm" } else { "multi-nomem" };
        let all = ctx.evaluate(&SplitSpec::all_uncertainty(n), name)?;
        if relations.contains(Relation::MultiLopt) {
            out.extend(l_opt_report(&all));
        }
        if relations.contains(Relation::Multi) {
            out.push(all);
        }
        if relations.contains(Relation::Split) {
            for split in SplitSpec::nontrivial(n) {
                out.push(ctx.split(&split)?);
            }
        }
    }
    Ok(out.into_iter().map(|r| r.with_tol(tol)).collect())
}

pub fn render_reports(reports: &[RelationReport], format: Format) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.kind.to_string(),
                r.asserted.to_string(),
                e12(r.lhs),
                e12(r.rhs),
                e12(r.slack),
                r.satisfied.to_string(),
            ]
        })
        .collect();
    let mut out = table(
        &[
            "relation",
            "kind",
            "asserted",
            "lhs",
            "rhs",
            "slack",
            "satisfied",
        ],
        &rows,
        format,
    );
    let violations = reports.iter().filter(|r| r.violated()).count();
    writeln!(
        out,
        "# result={} asserted_violations={violations}",
        if violations == 0 { "pass" } else { "fail" }
    )
    .unwrap();
    out
}
