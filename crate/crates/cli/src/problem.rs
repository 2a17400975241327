//! Problem files: TOML with a fixed set of tables.
//!
//! ```toml
//! command = "classify-extensions"
//!
//! [space]
//! even = []
//! odd = ["f1", "f2"]
//!
//! [split]
//! ideal = ["f2"]          # basis of M, the rest spans W
//!
//! grid = ["-1", "0", "1"]  # must come before the first table
//!
//! [cochains.delta]
//! terms = [{ inputs = ["f1", "f1"], output = "f1", coeff = "1" }]
//!
//! [cochains.beta]
//! parity = "even"         # auxiliary cochains only
//! terms = [{ inputs = ["f1"], output = "f2", coeff = "1/2" }]
//!
//! [params]
//! delta = "delta"
//! ```
//!
//! Coefficients are `"p"`, `"p/q"` or a TOML integer.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use codiff::coalgebra::{BasisCoderivation, Cochain, GradedSpace, Parity, SplitSpace};
use codiff::extensions::ScalarGrid;
use codiff::linalg::{parse_scalar, Scalar};
use serde::Deserialize;
use toml::Spanned;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Bracket,
    Square,
    Validate,
    Cohomology,
    ClassifyExtensions,
    ClassifyInfinitesimal,
    BimoduleClasses,
    DeformExtension,
    DeformRepA,
    DeformRepB,
    Equivalence,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Bracket,
        Command::Square,
        Command::Validate,
        Command::Cohomology,
        Command::ClassifyExtensions,
        Command::ClassifyInfinitesimal,
        Command::BimoduleClasses,
        Command::DeformExtension,
        Command::DeformRepA,
        Command::DeformRepB,
        Command::Equivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bracket => "bracket",
            Command::Square => "square",
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::ClassifyExtensions => "classify-extensions",
            Command::ClassifyInfinitesimal => "classify-infinitesimal",
            Command::BimoduleClasses => "bimodule-classes",
            Command::DeformExtension => "deform-extension",
            Command::DeformRepA => "deform-rep-a",
            Command::DeformRepB => "deform-rep-b",
            Command::Equivalence => "equivalence",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownBasisName,
    MalformedRational,
    ParityViolation,
    DuplicateName,
    Invalid,
}

/// A problem-file error with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, column)
}

/// A parameter value from `[params]`, with where it came from.
#[derive(Clone, Debug)]
pub struct Param {
    pub value: toml::Value,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub command: Option<Command>,
    pub space: Arc<GradedSpace>,
    pub split: Option<SplitSpace>,
    pub grid: Option<ScalarGrid>,
    pub cochains: BTreeMap<String, Cochain>,
    pub params: BTreeMap<String, Param>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    command: Option<Spanned<String>>,
    grid: Option<Vec<Spanned<toml::Value>>>,
    space: RawSpace,
    split: Option<RawSplit>,
    #[serde(default)]
    cochains: BTreeMap<String, Spanned<RawCochain>>,
    #[serde(default)]
    params: BTreeMap<String, Spanned<toml::Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    #[serde(default)]
    even: Vec<Spanned<String>>,
    #[serde(default)]
    odd: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplit {
    ideal: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCochain {
    parity: Option<Spanned<String>>,
    #[serde(default)]
    terms: Vec<Spanned<RawTerm>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    inputs: Vec<Spanned<String>>,
    output: Spanned<String>,
    coeff: Spanned<toml::Value>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(
        &self,
        kind: ParseErrorKind,
        span: Range<usize>,
        message: impl Into<String>,
    ) -> ParseError {
        let (line, column) = position(self.text, span.start);
        ParseError {
            kind,
            line,
            column,
            message: message.into(),
        }
    }

    fn scalar(&self, v: &Spanned<toml::Value>) -> Result<Scalar, ParseError> {
        let parsed = match v.get_ref() {
            toml::Value::Integer(n) => Some(Scalar::from_integer((*n).into())),
            toml::Value::String(s) => parse_scalar(s),
            _ => None,
        };
        parsed.ok_or_else(|| {
            self.err(
                ParseErrorKind::MalformedRational,
                v.span(),
                format!("malformed rational {}", v.get_ref()),
            )
        })
    }

    fn basis(&self, space: &GradedSpace, name: &Spanned<String>) -> Result<usize, ParseError> {
        space.index_of(name.get_ref()).ok_or_else(|| {
            self.err(
                ParseErrorKind::UnknownBasisName,
                name.span(),
                format!("unknown basis name `{}`", name.get_ref()),
            )
        })
    }
}

pub fn parse(text: &str) -> Result<Problem, ParseError> {
    let ctx = Ctx { text };
    let raw: RawProblem = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        let kind = if e.message().contains("duplicate") {
            ParseErrorKind::DuplicateName
        } else {
            ParseErrorKind::Syntax
        };
        ctx.err(kind, span, e.message().trim().to_string())
    })?;

    let command = raw
        .command
        .map(|c| {
            c.get_ref()
                .parse()
                .map_err(|m| ctx.err(ParseErrorKind::Invalid, c.span(), m))
        })
        .transpose()?;

    let mut names = Vec::new();
    let mut parities = Vec::new();
    let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
    for (list, parity) in [
        (&raw.space.even, Parity::Even),
        (&raw.space.odd, Parity::Odd),
    ] {
        for n in list {
            if seen.insert(n.get_ref(), ()).is_some() {
                return Err(ctx.err(
                    ParseErrorKind::DuplicateName,
                    n.span(),
                    format!("duplicate basis name `{}`", n.get_ref()),
                ));
            }
            names.push(n.get_ref().clone());
            parities.push(parity);
        }
    }
    let space = Arc::new(
        GradedSpace::new(names, parities)
            .map_err(|e| ctx.err(ParseErrorKind::Invalid, 0..0, e.to_string()))?,
    );

    let split = raw
        .split
        .map(|s| {
            let ideal = s
                .ideal
                .iter()
                .map(|n| ctx.basis(&space, n))
                .collect::<Result<Vec<_>, _>>()?;
            let at = s.ideal.first().map_or(0..0, Spanned::span);
            SplitSpace::with_ideal(Arc::clone(&space), &ideal)
                .map_err(|e| ctx.err(ParseErrorKind::Invalid, at, e.to_string()))
        })
        .transpose()?;

    let grid = raw
        .grid
        .map(|values| {
            let xs = values
                .iter()
                .map(|v| ctx.scalar(v))
                .collect::<Result<Vec<_>, _>>()?;
            let at = values.first().map_or(0..0, Spanned::span);
            ScalarGrid::new(xs).map_err(|e| ctx.err(ParseErrorKind::Invalid, at, e.to_string()))
        })
        .transpose()?;

    let mut cochains = BTreeMap::new();
    for (name, raw_c) in &raw.cochains {
        let wanted = match raw_c.get_ref().parity.as_ref() {
            None => Parity::Odd,
            Some(p) => match p.get_ref().as_str() {
                "odd" => Parity::Odd,
                "even" => Parity::Even,
                other => {
                    return Err(ctx.err(
                        ParseErrorKind::Invalid,
                        p.span(),
                        format!("parity must be \"odd\" or \"even\", got `{other}`"),
                    ))
                }
            },
        };
        let mut c = Cochain::zero(&space);
        for t in &raw_c.get_ref().terms {
            let term = t.get_ref();
            if term.inputs.is_empty() {
                return Err(ctx.err(
                    ParseErrorKind::Invalid,
                    t.span(),
                    "a term needs at least one input",
                ));
            }
            let inputs = term
                .inputs
                .iter()
                .map(|n| ctx.basis(&space, n))
                .collect::<Result<Vec<_>, _>>()?;
            let output = ctx.basis(&space, &term.output)?;
            let b = BasisCoderivation::new(inputs, output);
            if b.parity(&space) != wanted {
                return Err(ctx.err(
                    ParseErrorKind::ParityViolation,
                    t.span(),
                    format!(
                        "term {b} of `{name}` is {}, expected {}",
                        b.parity(&space).name(),
                        wanted.name()
                    ),
                ));
            }
            let x = ctx.scalar(&term.coeff)?;
            c = &c + &Cochain::from_terms(&space, [(b, x)]).expect("indices were resolved");
        }
        cochains.insert(name.clone(), c);
    }

    let params = raw
        .params
        .into_iter()
        .map(|(k, v)| {
            let (line, column) = position(text, v.span().start);
            (
                k,
                Param {
                    value: v.into_inner(),
                    line,
                    column,
                },
            )
        })
        .collect();

    Ok(Problem {
        command,
        space,
        split,
        grid,
        cochains,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "[space]\nodd = [\"f1\", \"f2\"]\n";

    #[test]
    fn parses_a_single_term() {
        let text = format!(
            "{HEAD}[cochains.d]\nterms = [{{ inputs = [\"f1\", \"f1\"], output = \"f2\", coeff = \"1\" }}]\n"
        );
        let p = parse(&text).unwrap();
        let d = &p.cochains["d"];
        assert_eq!(d.to_string(), "psi[1,1 -> 2]");
        assert!(d.has_parity(Parity::Odd));
    }

    #[test]
    fn exact_fraction() {
        let text = format!(
            "{HEAD}[cochains.d]\nterms = [{{ inputs = [\"f1\", \"f1\"], output = \"f2\", coeff = \"1/3\" }}]\n"
        );
        let p = parse(&text).unwrap();
        let (_, x) = p.cochains["d"].terms().iter().next().unwrap();
        assert_eq!(*x, codiff::linalg::ratio(1, 3));
    }

    #[test]
    fn errors_carry_positions() {
        let bad_name = format!("{HEAD}[cochains.d]\nterms = [{{ inputs = [\"f1\", \"f9\"], output = \"f2\", coeff = 1 }}]\n");
        let e = parse(&bad_name).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownBasisName);
        assert_eq!((e.line, e.column), (4, 28));

        let bad_coeff = format!("{HEAD}[cochains.d]\nterms = [{{ inputs = [\"f1\", \"f1\"], output = \"f2\", coeff = \"1/0\" }}]\n");
        let e = parse(&bad_coeff).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedRational);
        assert_eq!(e.line, 4);

        let even = format!(
            "{HEAD}[cochains.d]\nterms = [{{ inputs = [\"f1\"], output = \"f2\", coeff = 1 }}]\n"
        );
        assert_eq!(
            parse(&even).unwrap_err().kind,
            ParseErrorKind::ParityViolation
        );

        let dup = format!("{HEAD}[cochains.d]\nterms = []\n[cochains.d]\nterms = []\n");
        let e = parse(&dup).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateName);
        assert_eq!(e.line, 5);
    }

    #[test]
    fn even_override() {
        let text = format!(
            "{HEAD}[cochains.beta]\nparity = \"even\"\nterms = [{{ inputs = [\"f1\"], output = \"f2\", coeff = 1 }}]\n"
        );
        assert!(parse(&text).unwrap().cochains["beta"].has_parity(Parity::Even));
    }
}
