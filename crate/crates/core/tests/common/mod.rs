//! Generators and oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub mod props;

use codiff::coalgebra::{
    apply_linear_map, cochain_basis, square, BasisCoderivation, Cochain, GradedSpace, Parity,
    SplitSpace,
};
use codiff::linalg::{scalar, Matrix, Scalar};
use num_traits::Zero;

pub fn space(even: usize, odd: usize) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::with_dims(even, odd))
}

pub fn parity_of(bit: bool) -> Parity {
    if bit {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Sparse cochain: each pick selects a basis coderivation (index taken
/// modulo the basis size) and an integer coefficient.
pub fn cochain(
    space: &Arc<GradedSpace>,
    arity: usize,
    parity: Option<Parity>,
    picks: &[(u16, i8)],
) -> Cochain {
    let basis = cochain_basis(space, arity, parity);
    if basis.is_empty() {
        return Cochain::zero(space);
    }
    let terms = picks
        .iter()
        .map(|&(i, x)| (basis[i as usize % basis.len()].clone(), scalar(x as i64)));
    Cochain::from_terms(space, terms).unwrap()
}

/// Sparse cochain built from the basis coderivations accepted by `keep`.
pub fn cochain_where(
    space: &Arc<GradedSpace>,
    arity: usize,
    parity: Option<Parity>,
    picks: &[(u16, i8)],
    keep: impl Fn(&BasisCoderivation) -> bool,
) -> Cochain {
    let basis: Vec<_> = cochain_basis(space, arity, parity)
        .into_iter()
        .filter(|b| keep(b))
        .collect();
    if basis.is_empty() {
        return Cochain::zero(space);
    }
    let terms = picks
        .iter()
        .map(|&(i, x)| (basis[i as usize % basis.len()].clone(), scalar(x as i64)));
    Cochain::from_terms(space, terms).unwrap()
}

/// Parity-preserving matrix from raw entries; `None` if singular.
pub fn even_matrix(space: &GradedSpace, entries: &[i8]) -> Option<Matrix> {
    let n = space.dim();
    let mut m = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            if space.parity(r) == space.parity(c) {
                m.set(r, c, scalar(entries[(r * n + c) % entries.len()] as i64));
            }
        }
    }
    m.inverse().map(|_| m)
}

/// All codifferentials with coefficients in {-1,0,1} on a two-dimensional
/// space with the given parities, as `(inputs, output, coeff)` lists.
fn two_dim_catalog(parities: [Parity; 2]) -> Vec<Vec<(Vec<usize>, usize, i64)>> {
    static CACHE: OnceLock<Mutex<HashMap<[u8; 2], Vec<Vec<(Vec<usize>, usize, i64)>>>>> =
        OnceLock::new();
    let key = [parities[0].bit(), parities[1].bit()];
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(GradedSpace::new(vec!["a".into(), "b".into()], parities.to_vec()).unwrap());
    let basis = cochain_basis(&v, 2, Some(Parity::Odd));
    let mut out = Vec::new();
    let total = 3usize.pow(basis.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut terms = Vec::new();
        for b in &basis {
            let x = (c % 3) as i64 - 1;
            c /= 3;
            if x != 0 {
                terms.push((b.clone(), scalar(x)));
            }
        }
        let d = Cochain::from_terms(&v, terms).unwrap();
        if square(&d).is_zero() {
            out.push(
                d.terms()
                    .iter()
                    .map(|(b, x)| {
                        (
                            b.inputs().to_vec(),
                            b.output(),
                            if x.is_zero() {
                                0
                            } else if *x > Scalar::zero() {
                                1
                            } else {
                                -1
                            },
                        )
                    })
                    .collect(),
            );
        }
    }
    cache.lock().unwrap().insert(key, out.clone());
    out
}

/// A codifferential on `idx ⊂ V` (at most three indices), built as a direct
/// sum of catalogued pieces and then moved by an even change of basis of `V`
/// that is the identity off `idx`.
pub fn codifferential_on(
    space: &Arc<GradedSpace>,
    idx: &[usize],
    choice: u32,
    entries: &[i8],
) -> Cochain {
    let mut d = Cochain::zero(space);
    let mut choice = choice as usize;
    let (pair, rest) = idx.split_at(idx.len().min(2));
    if pair.len() == 2 {
        let catalog = two_dim_catalog([space.parity(pair[0]), space.parity(pair[1])]);
        let pick = &catalog[choice % catalog.len()];
        choice /= catalog.len();
        for (ins, out, x) in pick {
            let b = BasisCoderivation::new(ins.iter().map(|&i| pair[i]).collect(), pair[*out]);
            d = &d + &Cochain::from_terms(space, [(b, scalar(*x))]).unwrap();
        }
    }
    let singles = if pair.len() == 2 { rest } else { pair };
    for &r in singles {
        if space.parity(r).is_odd() && choice % 2 == 1 {
            d = &d
                + &Cochain::from_terms(space, [(BasisCoderivation::new(vec![r, r], r), scalar(1))])
                    .unwrap();
        }
        choice /= 2;
    }
    let n = space.dim();
    let mut g = Matrix::identity(n);
    for (a, &r) in idx.iter().enumerate() {
        for (b, &c) in idx.iter().enumerate() {
            if space.parity(r) == space.parity(c) {
                g.set(
                    r,
                    c,
                    scalar(entries[(a * idx.len() + b) % entries.len()] as i64),
                );
            }
        }
    }
    if g.inverse().is_none() {
        return d;
    }
    let split = SplitSpace::with_ideal(Arc::clone(space), &[]).unwrap();
    let moved = apply_linear_map(&d, &g, &split).unwrap();
    assert!(square(&moved).is_zero());
    moved
}

/// `(f∘g)(e_args)` computed by feeding basis tensors through `g` and then
/// `f`, with the Koszul sign for moving `g` past the earlier arguments.
/// Independent of the structure-constant insertion in the library.
pub fn circle_eval(f: &Cochain, g: &Cochain, args: &[usize]) -> Vec<Scalar> {
    let space = f.space();
    let n = space.dim();
    let mut out = vec![Scalar::zero(); n];
    let Some(&m) = g.arities().iter().next() else {
        return out;
    };
    let g_odd = g.parity().is_some_and(Parity::is_odd);
    if m > args.len() {
        return out;
    }
    let f_arity = args.len() - m + 1;
    if !f.arities().contains(&f_arity) {
        return out;
    }
    let mut passed_odd = false;
    for p in 0..=args.len() - m {
        if p > 0 {
            passed_odd ^= space.parity(args[p - 1]).is_odd();
        }
        let sign = if g_odd && passed_odd { -1 } else { 1 };
        let inner = g.evaluate(&args[p..p + m]).unwrap();
        for (j, y) in inner.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let mut new_args = args[..p].to_vec();
            new_args.push(j);
            new_args.extend_from_slice(&args[p + m..]);
            let outer = f.evaluate(&new_args).unwrap();
            for (k, z) in outer.iter().enumerate() {
                out[k] += y * z * scalar(sign);
            }
        }
    }
    out
}

/// All basis tuples of length `n`.
pub fn tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}
