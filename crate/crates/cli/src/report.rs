//! Reports: one ordered list of items, rendered as text for people and as
//! JSON for scripts. The text is derived from the same data, so the two
//! never disagree.

use std::fmt::Write as _;
use std::sync::Arc;

use codiff::coalgebra::{BasisCoderivation, Cochain, GradedSpace, Parity};
use codiff::linalg::{parse_scalar, Matrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub inputs: Vec<String>,
    pub output: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainRecord {
    /// `psi[I -> i]` notation, 1-based.
    pub display: String,
    pub terms: Vec<TermRecord>,
}

impl CochainRecord {
    pub fn of(c: &Cochain) -> Self {
        let space = c.space();
        let terms = c
            .terms()
            .iter()
            .map(|(b, x)| TermRecord {
                inputs: b
                    .inputs()
                    .iter()
                    .map(|&i| space.name(i).to_string())
                    .collect(),
                output: space.name(b.output()).to_string(),
                coeff: x.to_string(),
            })
            .collect();
        CochainRecord {
            display: c.to_string(),
            terms,
        }
    }

    /// Rebuilds the cochain on `space`; `None` on unknown names or bad
    /// coefficients.
    pub fn rebuild(&self, space: &Arc<GradedSpace>) -> Option<Cochain> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let inputs = t
                    .inputs
                    .iter()
                    .map(|n| space.index_of(n))
                    .collect::<Option<Vec<_>>>()?;
                Some((
                    BasisCoderivation::new(inputs, space.index_of(&t.output)?),
                    parse_scalar(&t.coeff)?,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        Cochain::from_terms(space, terms).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Item {
    Cochain {
        label: String,
        cochain: CochainRecord,
    },
    Dimension {
        label: String,
        value: usize,
    },
    Check {
        label: String,
        passed: bool,
        residual: CochainRecord,
    },
    Flag {
        label: String,
        value: bool,
    },
    Matrix {
        label: String,
        rows: Vec<Vec<String>>,
    },
    Note {
        label: String,
        text: String,
    },
}

impl Item {
    pub fn cochain(label: impl Into<String>, c: &Cochain) -> Self {
        Item::Cochain {
            label: label.into(),
            cochain: CochainRecord::of(c),
        }
    }

    pub fn dim(label: impl Into<String>, value: usize) -> Self {
        Item::Dimension {
            label: label.into(),
            value,
        }
    }

    pub fn check(label: impl Into<String>, residual: &Cochain) -> Self {
        Item::Check {
            label: label.into(),
            passed: residual.is_zero(),
            residual: CochainRecord::of(residual),
        }
    }

    pub fn flag(label: impl Into<String>, value: bool) -> Self {
        Item::Flag {
            label: label.into(),
            value,
        }
    }

    pub fn matrix(label: impl Into<String>, m: &Matrix) -> Self {
        let rows = (0..m.rows())
            .map(|r| m.row(r).iter().map(ToString::to_string).collect())
            .collect();
        Item::Matrix {
            label: label.into(),
            rows,
        }
    }

    pub fn note(label: impl Into<String>, text: impl Into<String>) -> Self {
        Item::Note {
            label: label.into(),
            text: text.into(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Item::Cochain { label, .. }
            | Item::Dimension { label, .. }
            | Item::Check { label, .. }
            | Item::Flag { label, .. }
            | Item::Matrix { label, .. }
            | Item::Note { label, .. } => label,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    CheckFailed,
    DistinctUnproven,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::CheckFailed => 1,
            Outcome::DistinctUnproven => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub ideal: Option<Vec<String>>,
}

impl SpaceRecord {
    pub fn rebuild(&self) -> Option<Arc<GradedSpace>> {
        let names = self.even.iter().chain(&self.odd).cloned().collect();
        let parities = std::iter::repeat_n(Parity::Even, self.even.len())
            .chain(std::iter::repeat_n(Parity::Odd, self.odd.len()))
            .collect();
        GradedSpace::new(names, parities).ok().map(Arc::new)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub space: SpaceRecord,
    pub grid: Vec<String>,
    pub restricted: bool,
    pub results: Vec<Item>,
    pub outcome: Outcome,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Ok
    }

    pub fn find(&self, label: &str) -> Option<&Item> {
        self.results.iter().find(|i| i.label() == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let s = &self.space;
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(
            out,
            "space: {}|{} even [{}] odd [{}]",
            s.even.len(),
            s.odd.len(),
            s.even.join(" "),
            s.odd.join(" ")
        );
        if let Some(ideal) = &s.ideal {
            let _ = writeln!(out, "ideal M: [{}]", ideal.join(" "));
        }
        if !self.grid.is_empty() {
            let _ = writeln!(out, "grid: {{{}}}", self.grid.join(", "));
        }
        if self.restricted {
            let _ = writeln!(out, "complex: restricted");
        }
        for item in &self.results {
            let _ = match item {
                Item::Cochain { label, cochain } => writeln!(out, "{label}: {}", cochain.display),
                Item::Dimension { label, value } => writeln!(out, "{label}: {value}"),
                Item::Check {
                    label,
                    passed,
                    residual,
                } => {
                    if *passed {
                        writeln!(out, "{label}: ok")
                    } else {
                        writeln!(out, "{label}: FAILED, residual {}", residual.display)
                    }
                }
                Item::Flag { label, value } => {
                    writeln!(out, "{label}: {}", if *value { "yes" } else { "no" })
                }
                Item::Matrix { label, rows } => {
                    let body: Vec<String> =
                        rows.iter().map(|r| format!("[{}]", r.join(" "))).collect();
                    writeln!(out, "{label}: [{}]", body.join(" "))
                }
                Item::Note { label, text } => writeln!(out, "{label}: {text}"),
            };
        }
        let _ = writeln!(
            out,
            "outcome: {}",
            match self.outcome {
                Outcome::Ok => "ok",
                Outcome::CheckFailed => "check failed",
                Outcome::DistinctUnproven => "distinct-unproven classes",
            }
        );
        out
    }
}
