//! Shared helpers for the acceptance suite: fixture rings, seeded instance
//! streams, and small independent utilities (Jacobian minors) used by the
//! invariant checks.

use std::sync::Arc;

use charp::groebner::SubmodulePresentation;
use charp::oracle::InstanceSpec;
use charp::ring::{parse_polynomial, OrderSpec, Polynomial, RingCtx};

pub fn ring(p: u32, vars: &[&str]) -> Arc<RingCtx> {
    RingCtx::new(p, vars, OrderSpec::default()).unwrap()
}

pub fn poly(ctx: &Arc<RingCtx>, s: &str) -> Polynomial {
    parse_polynomial(ctx, s).unwrap()
}

pub fn ideal(ctx: &Arc<RingCtx>, gens: &[&str]) -> SubmodulePresentation {
    SubmodulePresentation::ideal(ctx, gens.iter().map(|s| poly(ctx, s)).collect())
}

/// Drops constant terms so the generated ideal is proper.
pub fn strip_constant(f: &Polynomial) -> Polynomial {
    let ctx = f.ctx().clone();
    let raw = f
        .terms()
        .iter()
        .filter(|t| !t.mono.is_one())
        .map(|t| (t.coeff, t.mono.clone()))
        .collect();
    Polynomial::from_terms(&ctx, raw)
}

/// A deterministic stream of instance bounds cycling over p in {2,3,5},
/// n <= 3 variables and small degrees, with the seed recorded per index.
pub fn instance_stream(base_seed: u64, count: usize, rank: usize) -> Vec<InstanceSpec> {
    (0..count)
        .map(|i| InstanceSpec {
            p: [2, 3, 5][i % 3],
            n: 1 + (i / 3) % 3,
            max_degree: 2 + ((i / 9) % 3) as u32,
            ambient_rank: rank,
            generator_count: 1 + (i / 5) % 2,
            seed: base_seed + i as u64,
        })
        .collect()
}

/// The h x h minors of the Jacobian matrix of the given generators, computed
/// independently of the library's test-element search.
pub fn jacobian_minors(ctx: &Arc<RingCtx>, gens: &[Polynomial], h: usize) -> Vec<Polynomial> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k)
            .into_iter()
            .collect::<Vec<_>>();
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    fn det(ctx: &Arc<RingCtx>, m: &[Vec<Polynomial>]) -> Polynomial {
        let n = m.len();
        if n == 0 {
            return Polynomial::one(ctx);
        }
        let mut acc = Polynomial::zero(ctx);
        for (j, pivot) in m[0].iter().enumerate() {
            if pivot.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, f)| f.clone())
                        .collect()
                })
                .collect();
            let term = pivot.mul(&det(ctx, &minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    let n = ctx.nvars();
    let jac: Vec<Vec<Polynomial>> = (0..n)
        .map(|v| gens.iter().map(|g| g.partial_derivative(v)).collect())
        .collect();
    let mut minors = Vec::new();
    for rows in subsets(n, h) {
        for cols in subsets(gens.len(), h) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                .collect();
            let m = det(ctx, &sub);
            if !m.is_zero() && !minors.contains(&m) {
                minors.push(m);
            }
        }
    }
    minors
}

/// Prints the per-criterion pass line required by the acceptance protocol.
pub fn pass(criterion: &str, detail: &str) {
    println!("acceptance {criterion}: PASS ({detail})");
}
