//! The property suites, runnable with any number of cases so that both the
//! property tests and the acceptance run can use them.

use std::sync::Arc;

use codiff::coalgebra::space::bracket_bidegree;
use codiff::coalgebra::{
    bidegree_split, bracket, pullback_exp_beta, square, Bidegree, Cochain, GradedSpace, Parity,
    SplitSpace,
};
use codiff::linalg::Scalar;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use super::*;

fn br(a: &Cochain, b: &Cochain) -> Cochain {
    bracket(a, b).unwrap()
}

fn koszul(a: &Cochain, b: &Cochain) -> bool {
    a.parity().is_some_and(Parity::is_odd) && b.parity().is_some_and(Parity::is_odd)
}

/// Spaces with `1 ≤ dim ≤ 3`.
fn dims() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=3, 0usize..=3).prop_filter("1 <= dim <= 3", |(e, o)| (1..=3).contains(&(e + o)))
}

fn picks() -> impl Strategy<Value = Vec<(u16, i8)>> {
    prop::collection::vec((any::<u16>(), -2i8..=2), 0..5)
}

fn entries() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(-2i8..=2, 9)
}

/// Random homogeneous cochain: arity in 1..=3 and a parity bit.
fn homogeneous() -> impl Strategy<Value = (usize, bool, Vec<(u16, i8)>)> {
    (1usize..=3, any::<bool>(), picks())
}

fn build(v: &Arc<GradedSpace>, (arity, odd, p): &(usize, bool, Vec<(u16, i8)>)) -> Cochain {
    cochain(v, *arity, Some(parity_of(*odd)), p)
}

fn split_of(v: &Arc<GradedSpace>, mask: u8) -> SplitSpace {
    let m: Vec<usize> = (0..v.dim()).filter(|i| mask >> i & 1 == 1).collect();
    SplitSpace::with_ideal(Arc::clone(v), &m).unwrap()
}

pub fn graded_antisymmetry(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), homogeneous(), homogeneous());
    runner
        .run(&strategy, |((e, o), f, g)| {
            let v = space(e, o);
            let (f, g) = (build(&v, &f), build(&v, &g));
            let swapped = br(&g, &f);
            let expected = if koszul(&f, &g) { swapped } else { -&swapped };
            prop_assert_eq!(br(&f, &g), expected);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn graded_jacobi(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), homogeneous(), homogeneous(), homogeneous());
    runner
        .run(&strategy, |((e, o), f, g, h)| {
            let v = space(e, o);
            let (f, g, h) = (build(&v, &f), build(&v, &g), build(&v, &h));
            let lhs = br(&f, &br(&g, &h));
            let second = br(&g, &br(&f, &h));
            let second = if koszul(&f, &g) { -&second } else { second };
            prop_assert_eq!(lhs, &br(&br(&f, &g), &h) + &second);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn bracket_respects_bidegrees(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), any::<u8>(), homogeneous(), homogeneous());
    runner
        .run(&strategy, |((e, o), mask, f, g)| {
            let v = space(e, o);
            let split = split_of(&v, mask);
            let (f, g) = (build(&v, &f), build(&v, &g));
            for (x, fx) in bidegree_split(&f, &split) {
                for (y, gy) in bidegree_split(&g, &split) {
                    if x.is_ideal_violating() || y.is_ideal_violating() {
                        continue;
                    }
                    let b = br(&fx, &gy);
                    match bracket_bidegree(x, y) {
                        Some(target) => {
                            for t in b.terms().keys() {
                                prop_assert_eq!(
                                    t.bidegree(&split),
                                    target,
                                    "[{}, {}] = {}",
                                    fx,
                                    gy,
                                    b
                                );
                            }
                        }
                        None => prop_assert!(b.is_zero()),
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn coboundary_squares_to_zero(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), any::<u32>(), entries(), homogeneous());
    runner
        .run(&strategy, |((e, o), choice, g, phi)| {
            let v = space(e, o);
            let idx: Vec<usize> = (0..v.dim()).collect();
            let d = codifferential_on(&v, &idx, choice, &g);
            prop_assert!(square(&d).is_zero());
            let phi = build(&v, &phi);
            prop_assert!(br(&d, &br(&d, &phi)).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn commuting_coboundaries_anticommute(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        dims(),
        any::<u8>(),
        any::<u32>(),
        any::<u32>(),
        entries(),
        homogeneous(),
    );
    runner
        .run(&strategy, |((e, o), mask, c1, c2, g, phi)| {
            let v = space(e, o);
            let split = split_of(&v, mask);
            let m = split.indices(codiff::coalgebra::Side::M);
            let w = split.indices(codiff::coalgebra::Side::W);
            let mu = codifferential_on(&v, &m, c1, &g);
            let delta = codifferential_on(&v, &w, c2, &g);
            prop_assert!(br(&delta, &mu).is_zero());
            let phi = build(&v, &phi);
            prop_assert!((&br(&delta, &br(&mu, &phi)) + &br(&mu, &br(&delta, &phi))).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn beta_cubed_vanishes(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), any::<u8>(), picks(), picks());
    runner
        .run(&strategy, |((e, o), mask, d, b)| {
            let v = space(e, o);
            let split = split_of(&v, mask);
            // arity-two cochains that keep M an ideal
            let d = cochain_where(&v, 2, Some(Parity::Odd), &d, |c| {
                !c.bidegree(&split).is_ideal_violating()
            });
            let beta = cochain_where(&v, 1, Some(Parity::Even), &b, |c| {
                c.bidegree(&split) == Bidegree::mixed(0, 1)
            });
            prop_assert!(br(&br(&br(&d, &beta), &beta), &beta).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn pullback_keeps_codifferentials(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), any::<u8>(), any::<u32>(), entries(), picks());
    runner
        .run(&strategy, |((e, o), mask, choice, g, b)| {
            let v = space(e, o);
            let split = split_of(&v, mask);
            let idx: Vec<usize> = (0..v.dim()).collect();
            let d = codifferential_on(&v, &idx, choice, &g);
            let beta = cochain_where(&v, 1, Some(Parity::Even), &b, |c| {
                c.bidegree(&split) == Bidegree::mixed(0, 1)
            });
            let pulled = pullback_exp_beta(&d, &beta, &split).unwrap();
            prop_assert!(square(&pulled).is_zero());
            // same thing as conjugating by the linear map 1 + β
            let f = codiff::coalgebra::action::exp_beta_matrix(&beta);
            prop_assert_eq!(
                pulled,
                codiff::coalgebra::apply_linear_map(&d, &f, &split).unwrap()
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn bracket_matches_evaluation(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (dims(), homogeneous(), homogeneous());
    runner
        .run(&strategy, |((e, o), f, g)| {
            let v = space(e, o);
            let (f, g) = (build(&v, &f), build(&v, &g));
            let b = br(&f, &g);
            let n = f.arities().iter().next().copied().unwrap_or(1)
                + g.arities().iter().next().copied().unwrap_or(1)
                - 1;
            let sign = if koszul(&f, &g) { -1 } else { 1 };
            for args in tuples(v.dim(), n) {
                let fg = circle_eval(&f, &g, &args);
                let gf = circle_eval(&g, &f, &args);
                let expected: Vec<Scalar> = fg
                    .iter()
                    .zip(&gf)
                    .map(|(x, y)| if sign == 1 { x - y } else { x + y })
                    .collect();
                let got = if b.is_zero() {
                    vec![Scalar::zero(); v.dim()]
                } else {
                    b.evaluate(&args).unwrap()
                };
                prop_assert_eq!(got, expected, "args {:?}", args);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub const ALL: [(&str, fn(u32) -> Result<(), String>); 8] = [
    ("graded antisymmetry", graded_antisymmetry),
    ("graded jacobi", graded_jacobi),
    ("bracket respects bidegrees", bracket_respects_bidegrees),
    ("coboundary squares to zero", coboundary_squares_to_zero),
    (
        "commuting coboundaries anticommute",
        commuting_coboundaries_anticommute,
    ),
    ("beta cubed vanishes", beta_cubed_vanishes),
    (
        "pullback keeps codifferentials",
        pullback_keeps_codifferentials,
    ),
    ("bracket matches evaluation", bracket_matches_evaluation),
];
