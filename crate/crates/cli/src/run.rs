//! Dispatch from a parsed problem to the library.

use std::fmt;

use codiff::coalgebra::{bracket, square, Bidegree, Cochain, Parity, SplitSpace};
use codiff::cohomology::{cohomology, cohomology_at, CochainSpace, CohomologySpace, Tower};
use codiff::deformations::{
    check_deformation, classify_infinitesimal_deformations, eta_admissible, module_identity_holds,
    rep_deform_a, rep_deform_b, Admissibility, DeformationDirection, RepDeformationA,
    RepDeformationB,
};
use codiff::extensions::{
    classify_bimodule_extensions, classify_extensions, classify_infinitesimal_extensions,
    equivalent_general, equivalent_restricted, find_isomorphism, ClassifyOptions,
    ExtensionStructure, Relation, ScalarGrid,
};

use crate::problem::{Command, Param, ParseError, ParseErrorKind, Problem};
use crate::report::{Item, Outcome, Report, SpaceRecord};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub grid_override: Option<ScalarGrid>,
    pub parallel: bool,
    pub restricted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Parse(ParseError),
    Precondition(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error at {e}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<codiff::Error> for CliError {
    fn from(e: codiff::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn param_error(p: &Param, message: String) -> CliError {
    CliError::Parse(ParseError {
        kind: ParseErrorKind::Invalid,
        line: p.line,
        column: p.column,
        message,
    })
}

struct Ctx<'a> {
    problem: &'a Problem,
    options: &'a RunOptions,
    items: Vec<Item>,
    outcome: Outcome,
}

impl<'a> Ctx<'a> {
    fn param_str(&self, key: &str) -> Result<Option<&'a str>> {
        match self.problem.params.get(key) {
            None => Ok(None),
            Some(p) => match &p.value {
                toml::Value::String(s) => Ok(Some(s.as_str())),
                other => Err(param_error(
                    p,
                    format!("parameter `{key}` must be a string, got {other}"),
                )),
            },
        }
    }

    /// The cochain named by parameter `key`, falling back to a cochain
    /// literally called `key`.
    fn named(&self, key: &str) -> Result<Option<Cochain>> {
        let name = self.param_str(key)?;
        match name {
            Some(n) => match self.problem.cochains.get(n) {
                Some(c) => Ok(Some(c.clone())),
                None => Err(param_error(
                    &self.problem.params[key],
                    format!("no cochain named `{n}`"),
                )),
            },
            None => Ok(self.problem.cochains.get(key).cloned()),
        }
    }

    fn required(&self, key: &str) -> Result<Cochain> {
        self.named(key)?.ok_or_else(|| {
            CliError::Precondition(format!(
                "the command needs a cochain `{key}` (or params.{key})"
            ))
        })
    }

    fn or_zero(&self, key: &str) -> Result<Cochain> {
        Ok(self
            .named(key)?
            .unwrap_or_else(|| Cochain::zero(&self.problem.space)))
    }

    fn split(&self) -> Result<&'a SplitSpace> {
        self.problem
            .split
            .as_ref()
            .ok_or_else(|| CliError::Precondition("the command needs a [split] table".into()))
    }

    fn grid(&self) -> ScalarGrid {
        self.options
            .grid_override
            .clone()
            .or_else(|| self.problem.grid.clone())
            .unwrap_or_default()
    }

    fn extension(&self, key: &str) -> Result<ExtensionStructure> {
        Ok(ExtensionStructure::from_codifferential(
            self.split()?,
            &self.required(key)?,
        )?)
    }

    fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    fn check(&mut self, label: impl Into<String>, residual: &Cochain) {
        if !residual.is_zero() {
            self.fail();
        }
        self.push(Item::check(label, residual));
    }

    fn relations(&mut self, prefix: &str, rs: &[Relation]) {
        for r in rs {
            self.check(format!("{prefix}{}", r.name), &r.residual);
        }
    }

    fn fail(&mut self) {
        if self.outcome == Outcome::Ok {
            self.outcome = Outcome::CheckFailed;
        }
    }

    fn group(&mut self, label: &str, g: &CohomologySpace) {
        self.push(Item::dim(format!("dim {label}"), g.dim()));
        for (i, c) in g.representatives().iter().enumerate() {
            self.push(Item::cochain(format!("{label} class {}", i + 1), c));
        }
    }

    fn parity(&self) -> Result<Parity> {
        match self.param_str("parity")? {
            None | Some("odd") => Ok(Parity::Odd),
            Some("even") => Ok(Parity::Even),
            Some(other) => Err(param_error(
                &self.problem.params["parity"],
                format!("parity must be \"odd\" or \"even\", got `{other}`"),
            )),
        }
    }

    fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        let Some(p) = self.problem.params.get(key) else {
            return Ok(None);
        };
        let as_usize = |v: &toml::Value| v.as_integer().and_then(|n| usize::try_from(n).ok());
        let out = match &p.value {
            toml::Value::Array(xs) => xs.iter().map(as_usize).collect::<Option<Vec<_>>>(),
            v => as_usize(v).map(|n| vec![n]),
        };
        out.map(Some).ok_or_else(|| {
            param_error(
                p,
                format!("parameter `{key}` must be a non-negative integer or a list of them"),
            )
        })
    }
}

pub fn run(problem: &Problem, command: Command, options: &RunOptions) -> Result<Report> {
    let mut ctx = Ctx {
        problem,
        options,
        items: Vec::new(),
        outcome: Outcome::Ok,
    };
    match command {
        Command::Bracket => {
            let (l, r) = (ctx.required("left")?, ctx.required("right")?);
            let lname = ctx.param_str("left")?.unwrap_or("left");
            let rname = ctx.param_str("right")?.unwrap_or("right");
            ctx.push(Item::cochain(
                format!("[{lname},{rname}]"),
                &bracket(&l, &r)?,
            ));
        }
        Command::Square => {
            let d = ctx.required("d")?;
            ctx.check("[d,d] = 0", &square(&d));
        }
        Command::Validate => validate(&mut ctx)?,
        Command::Cohomology => run_cohomology(&mut ctx)?,
        Command::ClassifyExtensions => {
            let split = ctx.split()?;
            let (delta, mu) = (ctx.or_zero("delta")?, ctx.or_zero("mu")?);
            let opts = ClassifyOptions {
                grid: ctx.grid(),
                parallel: options.parallel,
            };
            let out = classify_extensions(&delta, &mu, split, &opts)?;
            ctx.push(Item::dim("candidates", out.candidates));
            ctx.push(Item::dim("obstructed lambda", out.obstructed.len()));
            ctx.push(Item::dim("classes", out.classes.len()));
            for (i, class) in out.classes.iter().enumerate() {
                ctx.push(Item::cochain(
                    format!("class {}", i + 1),
                    &class.codifferential(),
                ));
                ctx.push(Item::dim(
                    format!("class {} merged candidates", i + 1),
                    class.merged.len(),
                ));
                if !class.is_proven_distinct() {
                    let others: Vec<String> = class
                        .unresolved_with
                        .iter()
                        .map(|j| (j + 1).to_string())
                        .collect();
                    ctx.push(Item::note(
                        format!("class {} unresolved", i + 1),
                        format!(
                            "same invariants as class {}, no witness on the grid",
                            others.join(", ")
                        ),
                    ));
                }
            }
            if !out.fully_resolved() {
                ctx.outcome = Outcome::DistinctUnproven;
            }
        }
        Command::ClassifyInfinitesimal => {
            let split = ctx.split()?;
            let (delta, mu) = (ctx.or_zero("delta")?, ctx.or_zero("mu")?);
            let out = classify_infinitesimal_extensions(&delta, &mu, split, &ctx.grid())?;
            ctx.group("H11_mu", &out.lambda_group);
            ctx.push(Item::dim(
                "dim obstruction group",
                out.obstruction_group.dim(),
            ));
            ctx.push(Item::dim("dim admissible lambda", out.admissible.len()));
            for (i, c) in out.admissible.iter().enumerate() {
                ctx.push(Item::cochain(format!("admissible lambda {}", i + 1), c));
            }
            ctx.group("H02_mu_delta", &out.tau);
            for (i, s) in out.samples.iter().enumerate() {
                ctx.push(Item::cochain(format!("sample {} lambda", i + 1), &s.lambda));
                ctx.push(Item::cochain(format!("sample {} psi", i + 1), &s.psi));
            }
        }
        Command::BimoduleClasses => {
            let split = ctx.split()?;
            let (delta, mu, lambda) = (
                ctx.or_zero("delta")?,
                ctx.or_zero("mu")?,
                ctx.or_zero("lambda")?,
            );
            let out = classify_bimodule_extensions(&delta, &mu, &lambda, split)?;
            ctx.push(Item::cochain("left action", &out.left));
            ctx.push(Item::cochain("right action", &out.right));
            ctx.group("H02", &out.classes);
        }
        Command::DeformExtension => deform_extension(&mut ctx)?,
        Command::DeformRepA | Command::DeformRepB => deform_rep(&mut ctx, command)?,
        Command::Equivalence => equivalence(&mut ctx)?,
    }

    let grid_used = matches!(
        command,
        Command::ClassifyExtensions | Command::ClassifyInfinitesimal | Command::Equivalence
    );
    Ok(Report {
        command: command.name().to_string(),
        space: SpaceRecord {
            even: (0..problem.space.dim())
                .filter(|&i| !problem.space.parity(i).is_odd())
                .map(|i| problem.space.name(i).to_string())
                .collect(),
            odd: (0..problem.space.dim())
                .filter(|&i| problem.space.parity(i).is_odd())
                .map(|i| problem.space.name(i).to_string())
                .collect(),
            ideal: problem.split.as_ref().map(|s| {
                s.indices(codiff::coalgebra::Side::M)
                    .into_iter()
                    .map(|i| problem.space.name(i).to_string())
                    .collect()
            }),
        },
        grid: if grid_used {
            ctx.grid()
                .values()
                .iter()
                .map(ToString::to_string)
                .collect()
        } else {
            Vec::new()
        },
        restricted: options.restricted,
        results: ctx.items,
        outcome: ctx.outcome,
    })
}

fn validate(ctx: &mut Ctx) -> Result<()> {
    let d = ctx.required("d")?;
    ctx.check("[d,d] = 0", &square(&d));
    if ctx.problem.split.is_none() {
        return Ok(());
    }
    let e = match ExtensionStructure::from_codifferential(ctx.split()?, &d) {
        Ok(e) => e,
        Err(err) => {
            ctx.push(Item::note("extension", err.to_string()));
            ctx.fail();
            return Ok(());
        }
    };
    for (label, c) in [
        ("delta", e.delta()),
        ("mu", e.mu()),
        ("lambda", e.lambda()),
        ("psi", e.psi()),
    ] {
        ctx.push(Item::cochain(label, c));
    }
    let report = e.validate();
    ctx.relations("", &report.relations);
    ctx.relations("automatic: ", &report.automatic);
    ctx.push(Item::flag("relations match [d,d]", report.consistent()));
    Ok(())
}

fn run_cohomology(ctx: &mut Ctx) -> Result<()> {
    let parity = ctx.parity()?;
    let kind = ctx.param_str("kind")?.unwrap_or("single");
    let bidegree = ctx.usize_list("bidegree")?;
    let base = ctx.usize_list("base")?;
    let piece = match (bidegree.as_deref(), base.as_deref()) {
        (Some([k, l]), None) => Some(Bidegree::mixed(*k, *l)),
        (None, Some([l])) => Some(Bidegree::base(*l)),
        (None, None) => None,
        _ => {
            return Err(CliError::Precondition(
                "give either bidegree = [k, l] or base = l".into(),
            ))
        }
    };
    let restricted = ctx.options.restricted;
    match kind {
        "single" => {
            let alpha = ctx.required("operator")?;
            let g = match piece {
                Some(b) => cohomology_at(&alpha, ctx.split()?, b, parity, restricted)?,
                None => {
                    let n = match ctx.usize_list("arity")?.as_deref() {
                        Some([n]) if *n >= 1 => *n,
                        _ => {
                            return Err(CliError::Precondition(
                                "give bidegree, base or arity = n".into(),
                            ))
                        }
                    };
                    let grow = alpha
                        .arities()
                        .into_iter()
                        .max()
                        .unwrap_or(1)
                        .saturating_sub(1);
                    let flip = parity + alpha.parity().unwrap_or(Parity::Odd);
                    let space = &ctx.problem.space;
                    let prev = match n.checked_sub(grow) {
                        Some(m) if m >= 1 => CochainSpace::full(space, m, Some(flip)),
                        _ => CochainSpace::empty(space),
                    };
                    cohomology(
                        &alpha,
                        &prev,
                        &CochainSpace::full(space, n, Some(parity)),
                        &CochainSpace::full(space, n + grow, Some(flip)),
                    )?
                }
            };
            ctx.group("H", &g);
        }
        "iterated" | "triple" => {
            let Some(b) = piece.filter(Bidegree::is_mixed) else {
                return Err(CliError::Precondition(
                    "iterated and triple cohomology need bidegree = [k, l]".into(),
                ));
            };
            let e = ctx.extension("extension")?;
            let dl = e.dl();
            let tower = Tower::standard(e.split(), e.mu(), &dl, e.psi()).restricted(restricted);
            let g = if kind == "iterated" {
                tower.iterated(b, parity)?
            } else {
                tower.triple(b, parity)?
            };
            ctx.group("H", &g);
        }
        other => {
            return Err(param_error(
                &ctx.problem.params["kind"],
                format!("kind must be single, iterated or triple, got `{other}`"),
            ))
        }
    }
    Ok(())
}

fn deform_extension(ctx: &mut Ctx) -> Result<()> {
    let e = ctx.extension("d")?;
    let split = e.split().clone();
    let out = classify_infinitesimal_deformations(&e)?;
    ctx.group("H11_triple", &out.eta_group);
    ctx.group("H02_triple", &out.tau_group);
    ctx.push(Item::dim("dim valid directions", out.valid.dim()));
    ctx.push(Item::dim("dim trivial directions", out.trivial.dim()));
    ctx.push(Item::dim("dim deformation classes", out.dim()));
    for (i, v) in out.directions.cochains(&out.valid).iter().enumerate() {
        ctx.push(Item::cochain(format!("valid direction {}", i + 1), v));
    }
    for (i, c) in out.eta_classes.iter().enumerate() {
        ctx.push(Item::cochain(format!("eta class {} eta", i + 1), &c.eta));
        ctx.push(Item::cochain(format!("eta class {} zeta", i + 1), &c.zeta));
    }
    let eta = ctx.named("eta")?;
    let zeta = ctx.named("zeta")?;
    if eta.is_none() && zeta.is_none() {
        return Ok(());
    }
    if let Some(eta) = &eta {
        match eta_admissible(&e, eta)? {
            Admissibility::Admissible { zeta: z, .. } => {
                ctx.push(Item::flag("eta admissible", true));
                ctx.push(Item::cochain("completing zeta", &z));
            }
            Admissibility::Rejected { stage, reason } => {
                ctx.push(Item::flag("eta admissible", false));
                ctx.push(Item::note("rejected at", format!("{stage}: {reason}")));
            }
        }
    }
    let zero = || Cochain::zero(split.space());
    let dir =
        DeformationDirection::new(&split, eta.unwrap_or_else(zero), zeta.unwrap_or_else(zero))?;
    let report = check_deformation(&e, &dir);
    ctx.relations("", &report.conditions);
    ctx.push(Item::cochain(
        "t-coefficient of [d_t,d_t]",
        &report.first_order,
    ));
    if report.passed() {
        let c = out.canonicalize(&dir)?;
        ctx.push(Item::cochain("canonical eta", &c.eta));
        ctx.push(Item::cochain("canonical zeta", &c.zeta));
    }
    Ok(())
}

fn deform_rep(ctx: &mut Ctx, command: Command) -> Result<()> {
    if !ctx.options.restricted {
        return Err(CliError::Precondition(
            "deformations of a representation live on the restricted complex; pass --restricted-complex".into(),
        ));
    }
    let e = ctx.extension("d")?;
    let split = e.split().clone();
    ctx.push(Item::flag("module identity", module_identity_holds(&e, 2)));
    if command == Command::DeformRepA {
        let dir = RepDeformationA::new(&split, ctx.or_zero("delta1")?, ctx.or_zero("lambda1")?)?;
        let out = rep_deform_a(&e, &dir)?;
        ctx.relations("", &out.conditions);
        ctx.group("H2_delta", &out.h2_delta);
        ctx.push(Item::dim("dim admissible delta1", out.admissible.len()));
        for (i, c) in out.admissible.iter().enumerate() {
            ctx.push(Item::cochain(format!("admissible delta1 {}", i + 1), c));
        }
        ctx.group("tau", &out.tau_group);
        rep_tail(ctx, &out.obstruction, &out.particular, &out.tau_class);
        if let Some(c) = out.canonical {
            ctx.push(Item::cochain("canonical delta1", &c.delta1));
            ctx.push(Item::cochain("canonical lambda1", &c.lambda1));
        }
    } else {
        let dir = RepDeformationB::new(&split, ctx.or_zero("lambda1")?, ctx.or_zero("mu1")?)?;
        let out = rep_deform_b(&e, &dir)?;
        ctx.relations("", &out.conditions);
        ctx.group("H20_mu", &out.h20_mu);
        ctx.push(Item::dim("dim admissible mu1", out.admissible.len()));
        for (i, c) in out.admissible.iter().enumerate() {
            ctx.push(Item::cochain(format!("admissible mu1 {}", i + 1), c));
        }
        ctx.group("tau", &out.tau_group);
        rep_tail(ctx, &out.obstruction, &out.particular, &out.tau_class);
        if let Some(c) = out.canonical {
            ctx.push(Item::cochain("canonical lambda1", &c.lambda1));
            ctx.push(Item::cochain("canonical mu1", &c.mu1));
        }
    }
    Ok(())
}

fn rep_tail(
    ctx: &mut Ctx,
    obstruction: &Option<Cochain>,
    particular: &Option<Cochain>,
    tau: &Option<Cochain>,
) {
    if let Some(o) = obstruction {
        ctx.push(Item::cochain("obstruction class", o));
    }
    if let Some(p) = particular {
        ctx.push(Item::cochain("particular lambda1", p));
    }
    if let Some(t) = tau {
        ctx.push(Item::cochain("tau class", t));
    }
}

fn equivalence(ctx: &mut Ctx) -> Result<()> {
    let (d1, d2) = (ctx.required("left")?, ctx.required("right")?);
    let grid = ctx.grid();
    let mut found = false;
    match find_isomorphism(&d1, &d2, &grid)? {
        Some(g) => {
            found = true;
            ctx.push(Item::flag("isomorphic", true));
            ctx.push(Item::matrix("g", &g));
        }
        None => ctx.push(Item::flag("isomorphic", false)),
    }
    if let Some(split) = ctx.problem.split.as_ref() {
        let e1 = ExtensionStructure::from_codifferential(split, &d1)?;
        let e2 = ExtensionStructure::from_codifferential(split, &d2)?;
        if e1.delta() == e2.delta() && e1.mu() == e2.mu() {
            match equivalent_restricted(&e1, &e2)? {
                Some(beta) => {
                    found = true;
                    ctx.push(Item::flag("restricted equivalent", true));
                    ctx.push(Item::cochain("beta", &beta));
                }
                None => ctx.push(Item::flag("restricted equivalent", false)),
            }
        } else {
            ctx.push(Item::note(
                "restricted equivalent",
                "not applicable, delta or mu differ",
            ));
        }
        match equivalent_general(&e1, &e2, &grid)? {
            Some(w) => {
                found = true;
                ctx.push(Item::flag("equivalent as extensions", true));
                ctx.push(Item::matrix("witness g", &w.g));
                ctx.push(Item::cochain("witness beta", &w.beta));
            }
            None => ctx.push(Item::flag("equivalent as extensions", false)),
        }
    }
    if !found {
        ctx.fail();
    }
    Ok(())
}
