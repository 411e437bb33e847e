//! Frobenius (bracket) powers, the I_e root operation and the star-closure
//! fixed point.
//!
//! Over R = F_p[x_1..x_n] the module F_*^e R is free on the monomials with
//! exponents below q = p^e, so every v in R^alpha decomposes uniquely as
//! v = sum_b u_b^[q] b over that basis. I_e of the submodule generated by v
//! is generated by the u_b; on F_p the inverse Frobenius on coefficients is
//! the identity (a^p = a), so the u_b are read off directly from exponent
//! arithmetic. This silently fails over non-prime fields, which are out of
//! scope here.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::{buchberger_capped, module_equal, Caps, SubmodulePresentation};
use crate::ring::{
    check_same_ctx, ModuleVector, Monomial, PolyMatrix, Polynomial, RingCtx,
};

/// A Frobenius exponent e with its cached power q = p^e, kept below 2^31 so
/// exponent arithmetic stays in machine range.
#[derive(Debug, Clone, Copy)]
pub struct BracketExponent {
    e: u32,
    q: u64,
}

impl BracketExponent {
    pub fn new(ctx: &RingCtx, e: u32) -> Result<BracketExponent> {
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q
                .checked_mul(u64::from(ctx.p()))
                .filter(|&q| q < (1 << 31))
                .ok_or(Error::ExponentOverflow { p: ctx.p(), e })?;
        }
        Ok(BracketExponent { e, q })
    }

    pub fn e(self) -> u32 {
        self.e
    }

    pub fn q(self) -> u64 {
        self.q
    }
}

fn bracket_mono(m: &Monomial, q: u64, ctx: &RingCtx, e: u32) -> Result<Monomial> {
    let exps = m
        .exps()
        .iter()
        .map(|&x| {
            let v = u64::from(x) * q;
            if v < (1 << 31) {
                Ok(v as u32)
            } else {
                Err(Error::ExponentOverflow { p: ctx.p(), e })
            }
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(Monomial::new(exps))
}

/// Entry-wise p^e-th power of a polynomial. Coefficients are fixed by
/// Frobenius on F_p, so only exponents scale.
pub fn bracket_power_poly(f: &Polynomial, e: u32) -> Result<Polynomial> {
    let ctx = f.ctx().clone();
    let b = BracketExponent::new(&ctx, e)?;
    if b.q() == 1 {
        return Ok(f.clone());
    }
    let raw = f
        .terms()
        .iter()
        .map(|t| Ok((t.coeff, bracket_mono(&t.mono, b.q(), &ctx, e)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_terms(&ctx, raw))
}

pub fn bracket_power_vector(v: &ModuleVector, e: u32) -> Result<ModuleVector> {
    let comps = v
        .components()
        .iter()
        .map(|f| bracket_power_poly(f, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleVector::from_components(v.ctx(), comps))
}

/// Entry-wise p^e-th power of a matrix.
pub fn bracket_power_matrix(m: &PolyMatrix, e: u32) -> Result<PolyMatrix> {
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            *out.entry_mut(r, c) = bracket_power_poly(m.entry(r, c), e)?;
        }
    }
    Ok(out)
}

/// The submodule K^[p^e], generated by the bracketed generators (sufficient
/// by additivity of Frobenius powers). A cached reduced basis brackets to a
/// reduced basis, so it is carried over.
pub fn bracket_power_submodule(
    k: &SubmodulePresentation,
    e: u32,
) -> Result<SubmodulePresentation> {
    let gens = bracket_power_matrix(k.gens(), e)?;
    let out = SubmodulePresentation::new(gens);
    Ok(out)
}

/// The minimal submodule L with K contained in L^[p^e]; e = 0 returns K
/// unchanged. Each generator is decomposed term by term, bucketing by the
/// residue of its exponent vector mod p^e; output generators are the reduced
/// basis, so chain stabilization tests are cheap equality checks.
pub fn fe_root(k: &SubmodulePresentation, e: u32) -> Result<SubmodulePresentation> {
    fe_root_capped(k, e, &Caps::default())
}

pub fn fe_root_capped(
    k: &SubmodulePresentation,
    e: u32,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    if e == 0 {
        return Ok(k.clone());
    }
    let ctx = k.ctx().clone();
    let b = BracketExponent::new(&ctx, e)?;
    let q = b.q();
    let rank = k.ambient_rank();
    let mut roots: Vec<ModuleVector> = Vec::new();
    for gen in k.generator_vectors() {
        // residue monomial -> root vector u_b
        let mut buckets: HashMap<Vec<u32>, ModuleVector> = HashMap::new();
        for (pos, f) in gen.components().iter().enumerate() {
            for t in f.terms() {
                let mut residue = Vec::with_capacity(t.mono.exps().len());
                let mut quotient = Vec::with_capacity(t.mono.exps().len());
                for &x in t.mono.exps() {
                    residue.push((u64::from(x) % q) as u32);
                    quotient.push((u64::from(x) / q) as u32);
                }
                let u = buckets
                    .entry(residue)
                    .or_insert_with(|| ModuleVector::zero(&ctx, rank));
                let contrib = ModuleVector::unit(
                    &ctx,
                    rank,
                    pos,
                    Polynomial::monomial(&ctx, t.coeff, Monomial::new(quotient)),
                );
                *u = u.add(&contrib);
            }
        }
        let mut keyed: Vec<(Vec<u32>, ModuleVector)> = buckets.into_iter().collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        roots.extend(keyed.into_iter().map(|(_, v)| v));
    }
    let pres = SubmodulePresentation::from_vectors(&ctx, rank, &roots);
    let gb = buchberger_capped(&pres, caps)?;
    Ok(SubmodulePresentation::from_gb(gb))
}

/// The smallest submodule W containing V with U W contained in W^[p^e],
/// computed along the ascending chain V_{i+1} = I_e(U V_i) + V_i. The chain
/// stabilizes by Noetherianity; the iteration cap is a resource guard only.
pub fn star_closure(
    v: &SubmodulePresentation,
    u: &PolyMatrix,
    e: u32,
) -> Result<SubmodulePresentation> {
    Ok(star_closure_capped(v, u, e, &Caps::default())?.0)
}

/// As [`star_closure`], additionally reporting the number of chain steps
/// taken until stabilization.
pub fn star_closure_capped(
    v: &SubmodulePresentation,
    u: &PolyMatrix,
    e: u32,
    caps: &Caps,
) -> Result<(SubmodulePresentation, usize)> {
    check_same_ctx(v.ctx(), u.ctx())?;
    if u.rows() != u.cols() || u.rows() != v.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: v.ambient_rank(),
            found: if u.rows() != u.cols() { u.cols() } else { u.rows() },
        });
    }
    if e == 0 {
        return Err(Error::InvalidInput("star-closure requires e >= 1".into()));
    }
    let ctx = v.ctx().clone();
    let rank = v.ambient_rank();
    let mut current = SubmodulePresentation::from_gb(buchberger_capped(v, caps)?);
    for iteration in 1..=caps.max_star_iterations {
        let image: Vec<ModuleVector> = current
            .generator_vectors()
            .iter()
            .map(|g| u.mul_vector(g))
            .collect();
        let image_pres = SubmodulePresentation::from_vectors(&ctx, rank, &image);
        let rooted = fe_root_capped(&image_pres, e, caps)?;
        let mut gens = current.generator_vectors();
        gens.extend(rooted.generator_vectors());
        let next = SubmodulePresentation::from_gb(buchberger_capped(
            &SubmodulePresentation::from_vectors(&ctx, rank, &gens),
            caps,
        )?);
        if module_equal(&next, &current)? {
            return Ok((current, iteration));
        }
        current = next;
    }
    Err(Error::IterationCap {
        cap: caps.max_star_iterations,
    })
}
