//! `--relations` selector parsing.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    /// disturbance − uncertainty = −H(A|B)
    UncertaintyDisturbance,
    Mm,
    Md,
    Dd,
    /// the memory-free pair relations plus their chain identity
    Memoryless,
    /// H(ρ‖ρ_Π) = H(ρ_Π) − H(ρ)
    Increment,
    Multi,
    Split,
    /// pairing candidate bound, report-only
    MultiLopt,
    /// memory-free M-M with a doubled −log c, report-only
    DoubleLog,
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::UncertaintyDisturbance,
        Relation::Mm,
        Relation::Md,
        Relation::Dd,
        Relation::Memoryless,
        Relation::Increment,
        Relation::Multi,
        Relation::Split,
        Relation::MultiLopt,
        Relation::DoubleLog,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Relation::UncertaintyDisturbance => "uncertainty-disturbance",
            Relation::Mm => "mm",
            Relation::Md => "md",
            Relation::Dd => "dd",
            Relation::Memoryless => "memoryless",
            Relation::Increment => "increment",
            Relation::Multi => "multi",
            Relation::Split => "split",
            Relation::MultiLopt => "multi-lopt",
            Relation::DoubleLog => "mm-double-log",
        }
    }

    fn from_token(s: &str) -> Option<Self> {
        // "eq17-as-printed" is kept as an alias for the double-log variant
        if s == "eq17-as-printed" {
            return Some(Relation::DoubleLog);
        }
        Self::ALL.into_iter().find(|r| r.token() == s)
    }
}

/// A non-empty, sorted, de-duplicated set of relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet(Vec<Relation>);

impl RelationSet {
    /// Everything except the report-only double-log variant.
    pub fn default_set() -> Self {
        Self(
            Relation::ALL
                .into_iter()
                .filter(|r| *r != Relation::DoubleLog)
                .collect(),
        )
    }

    pub fn contains(&self, r: Relation) -> bool {
        self.0.contains(&r)
    }
}

impl FromStr for RelationSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                out.extend(Self::default_set().0);
                continue;
            }
            match Relation::from_token(tok) {
                Some(r) => out.push(r),
                None => {
                    let known: Vec<&str> = Relation::ALL.iter().map(|r| r.token()).collect();
                    return Err(format!(
                        "unknown relation '{tok}' (expected 'all' or any of: {})",
                        known.join(", ")
                    ));
                }
            }
        }
        if out.is_empty() {
            return Err("no relations selected".into());
        }
        out.sort();
        out.dedup();
        Ok(Self(out))
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<&str> = self.0.iter().map(|r| r.token()).collect();
        f.write_str(&toks.join(","))
    }
}

/// Bipartite dimension list such as `2x2,2x3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimsList(pub Vec<(usize, usize)>);

impl FromStr for DimsList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok
                .split_once('x')
                .ok_or_else(|| format!("dimension pair '{tok}' is not of the form AxB"))?;
            let a: usize = a.parse().map_err(|_| format!("bad dimension in '{tok}'"))?;
            let b: usize = b.parse().map_err(|_| format!("bad dimension in '{tok}'"))?;
            if a < 2 || b < 1 || a * b > 16 {
                return Err(format!(
                    "dimension pair '{tok}' needs A ≥ 2, B ≥ 1 and A·B ≤ 16"
                ));
            }
            out.push((a, b));
        }
        if out.is_empty() {
            return Err("empty dimension list".into());
        }
        Ok(Self(out))
    }
}

impl fmt::Display for DimsList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.0.iter().map(|(a, b)| format!("{a}x{b}")).collect();
        f.write_str(&toks.join(","))
    }
}
