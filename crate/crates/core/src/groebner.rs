//! Groebner-basis engine over free modules R^alpha and the derived module
//! operations: normal forms, Buchberger with Gebauer-Moller pair elimination,
//! syzygies, membership and equality, intersections, colons, annihilators of
//! cokernels, combinatorial Krull dimension and radical membership.
//!
//! Syzygies, colons and lifts all go through one construction: the reduced
//! basis of the doubled module {(M e_j, e_j)} under a position-over-term
//! order in which the first block of positions dominates. Elements whose
//! first block vanishes are exactly the syzygies of the columns of M, and
//! division of (w, 0) recovers a coefficient vector u with M u = w.


use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{
    check_same_ctx, FieldElement, ModuleOrder, ModuleVector, Monomial, OrderSpec, PolyMatrix,
    Polynomial, RingCtx,
};

/// Resource guards for basis computations and closure chains. Exceeding a
/// cap raises an error, never a wrong answer.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum size of the critical-pair queue.
    pub max_pairs: usize,
    /// Maximum term count of any vector handled during reduction.
    pub max_terms: usize,
    /// Maximum number of star-closure iterations.
    pub max_star_iterations: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_pairs: 200_000,
            max_terms: 2_000_000,
            max_star_iterations: 64,
        }
    }
}

/// A Groebner basis of a submodule of R^alpha, tagged with the order it was
/// computed under. Elements are monic and canonically sorted (descending
/// leading terms).
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    ctx: Arc<RingCtx>,
    ambient_rank: usize,
    elements: Vec<ModuleVector>,
    order: OrderSpec,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn elements(&self) -> &[ModuleVector] {
        &self.elements
    }

    pub fn order(&self) -> OrderSpec {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// For ideals: whether the basis generates the unit ideal.
    pub fn contains_unit(&self) -> bool {
        self.elements.iter().any(|g| {
            g.components()
                .iter()
                .any(|f| f.leading_term().is_some_and(|t| t.mono.is_one()))
        })
    }
}

/// A finitely generated submodule of R^alpha, presented by a generator
/// matrix whose columns are the generators. May carry its reduced Groebner
/// basis; the cache is write-once (attaching produces a new value).
#[derive(Debug, Clone)]
pub struct SubmodulePresentation {
    ambient_rank: usize,
    gens: PolyMatrix,
    cached_gb: Option<GroebnerBasis>,
}

impl SubmodulePresentation {
    pub fn new(gens: PolyMatrix) -> SubmodulePresentation {
        SubmodulePresentation {
            ambient_rank: gens.rows(),
            gens,
            cached_gb: None,
        }
    }

    /// An ideal of R presented as a rank-1 submodule.
    pub fn ideal(ctx: &Arc<RingCtx>, gens: Vec<Polynomial>) -> SubmodulePresentation {
        let cols: Vec<ModuleVector> = gens
            .into_iter()
            .map(|f| ModuleVector::from_components(ctx, vec![f]))
            .collect();
        SubmodulePresentation::new(PolyMatrix::from_columns(ctx, 1, &cols))
    }

    pub fn from_vectors(
        ctx: &Arc<RingCtx>,
        rank: usize,
        vectors: &[ModuleVector],
    ) -> SubmodulePresentation {
        SubmodulePresentation::new(PolyMatrix::from_columns(ctx, rank, vectors))
    }

    pub fn zero_module(ctx: &Arc<RingCtx>, rank: usize) -> SubmodulePresentation {
        SubmodulePresentation::new(PolyMatrix::zero(ctx, rank, 0))
    }

    /// The full ambient module R^rank, presented by the identity.
    pub fn full_module(ctx: &Arc<RingCtx>, rank: usize) -> SubmodulePresentation {
        SubmodulePresentation::new(PolyMatrix::identity(ctx, rank))
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        self.gens.ctx()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn gens(&self) -> &PolyMatrix {
        &self.gens
    }

    pub fn generator_vectors(&self) -> Vec<ModuleVector> {
        self.gens.columns()
    }

    pub fn cached_gb(&self) -> Option<&GroebnerBasis> {
        self.cached_gb.as_ref()
    }

    /// The reduced Groebner basis under the ctx order, from the cache when
    /// present.
    pub fn gb(&self) -> Result<GroebnerBasis> {
        if let Some(gb) = &self.cached_gb {
            return Ok(gb.clone());
        }
        buchberger(self)
    }

    /// Attaches the reduced Groebner basis, producing a new value.
    pub fn with_gb(mut self) -> Result<SubmodulePresentation> {
        if self.cached_gb.is_none() {
            self.cached_gb = Some(buchberger(&self)?);
        }
        Ok(self)
    }

    /// A presentation whose generators are the reduced basis elements
    /// themselves; the canonical form of the submodule.
    pub fn canonicalize(&self) -> Result<SubmodulePresentation> {
        let gb = self.gb()?;
        Ok(SubmodulePresentation::from_gb(gb))
    }

    pub fn from_gb(gb: GroebnerBasis) -> SubmodulePresentation {
        let gens = PolyMatrix::from_columns(gb.ctx(), gb.ambient_rank(), gb.elements());
        SubmodulePresentation {
            ambient_rank: gb.ambient_rank(),
            gens,
            cached_gb: Some(gb),
        }
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        Ok(self.gb()?.elements().is_empty())
    }

    /// For rank 1: whether the ideal is the unit ideal.
    pub fn contains_unit(&self) -> Result<bool> {
        Ok(self.gb()?.contains_unit())
    }
}

// ----- leading terms and division -----

fn leading_of(
    v: &ModuleVector,
    ctx: &RingCtx,
    module: ModuleOrder,
) -> Option<(usize, Monomial, FieldElement)> {
    v.leading(ctx, module)
        .map(|(pos, t)| (pos, t.mono.clone(), t.coeff))
}

fn make_monic(v: &ModuleVector, ctx: &Arc<RingCtx>, module: ModuleOrder) -> ModuleVector {
    match leading_of(v, ctx, module) {
        None => v.clone(),
        Some((_, _, c)) => {
            if c == FieldElement::ONE {
                v.clone()
            } else {
                v.mul_term(ctx.f_inv(c), &Monomial::one(ctx.nvars()))
            }
        }
    }
}

/// Full reduction of `v` by monic `basis` under the given module order.
/// Returns the remainder and, when `track` is set, the quotient polynomial
/// for each basis element (v = sum q_i b_i + r).
fn divide_impl(
    v: &ModuleVector,
    basis: &[ModuleVector],
    leads: &[(usize, Monomial)],
    ctx: &Arc<RingCtx>,
    module: ModuleOrder,
    caps: &Caps,
    track: bool,
) -> Result<(ModuleVector, Vec<Polynomial>)> {
    let mut remainder = ModuleVector::zero(ctx, v.rank());
    let mut h = v.clone();
    let mut quotients = if track {
        (0..basis.len()).map(|_| Polynomial::zero(ctx)).collect()
    } else {
        Vec::new()
    };
    let mut steps = 0usize;
    while let Some((pos, t)) = h.leading(ctx, module) {
        let (coeff, mono) = (t.coeff, t.mono.clone());
        let mut reduced = false;
        for (i, (bpos, bmono)) in leads.iter().enumerate() {
            if *bpos == pos && bmono.divides(&mono) {
                let q = bmono.quotient_into(&mono);
                h = h.sub(&basis[i].mul_term(coeff, &q));
                if track {
                    let qi: &mut Polynomial = &mut quotients[i];
                    *qi = qi.add(&Polynomial::monomial(ctx, coeff, q));
                }
                reduced = true;
                break;
            }
        }
        if !reduced {
            let lt = ModuleVector::unit(ctx, v.rank(), pos, Polynomial::monomial(ctx, coeff, mono));
            remainder = remainder.add(&lt);
            h = h.sub(&lt);
        }
        steps += 1;
        if steps.is_multiple_of(64) && h.num_terms() > caps.max_terms {
            return Err(Error::ResourceCap(format!(
                "vector grew past {} terms during reduction",
                caps.max_terms
            )));
        }
    }
    Ok((remainder, quotients))
}

/// Remainder of `v` on division by the basis: no term of the result is
/// divisible by any leading term of `basis`, and v - result lies in the
/// module generated by it.
pub fn normal_form(v: &ModuleVector, basis: &GroebnerBasis) -> Result<ModuleVector> {
    check_same_ctx(v.ctx(), basis.ctx())?;
    if v.rank() != basis.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: basis.ambient_rank(),
            found: v.rank(),
        });
    }
    let ctx = v.ctx().clone();
    let module = basis.order().module;
    let leads: Vec<(usize, Monomial)> = basis
        .elements()
        .iter()
        .map(|g| {
            let (pos, m, _) = leading_of(g, &ctx, module).expect("basis elements are nonzero");
            (pos, m)
        })
        .collect();
    let (r, _) = divide_impl(
        v,
        basis.elements(),
        &leads,
        &ctx,
        module,
        &Caps::default(),
        false,
    )?;
    Ok(r)
}

/// Division with quotient tracking against a Groebner basis; the remainder
/// must vanish. Used for lifting elements through known presentations.
pub(crate) fn divide_exact(
    v: &ModuleVector,
    basis: &[ModuleVector],
    ctx: &Arc<RingCtx>,
    module: ModuleOrder,
) -> Result<Vec<Polynomial>> {
    let leads: Vec<(usize, Monomial)> = basis
        .iter()
        .map(|g| {
            let (pos, m, _) = leading_of(g, ctx, module).expect("basis elements are nonzero");
            (pos, m)
        })
        .collect();
    let (r, q) = divide_impl(v, basis, &leads, ctx, module, &Caps::default(), true)?;
    if !r.is_zero() {
        return Err(Error::InvariantViolation(
            "exact division left a nonzero remainder".into(),
        ));
    }
    Ok(q)
}

// ----- Buchberger with Gebauer-Moller pair elimination -----

struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
}

/// Reduced Groebner basis of the module generated by `gens` inside R^rank,
/// under the ctx monomial order with the given module extension.
pub(crate) fn reduced_basis(
    ctx: &Arc<RingCtx>,
    rank: usize,
    gens: &[ModuleVector],
    module: ModuleOrder,
    caps: &Caps,
) -> Result<Vec<ModuleVector>> {
    let mut basis: Vec<ModuleVector> = Vec::new();
    let mut leads: Vec<(usize, Monomial)> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let install = |g: ModuleVector,
                       basis: &mut Vec<ModuleVector>,
                       leads: &mut Vec<(usize, Monomial)>,
                       pairs: &mut Vec<Pair>|
     -> Result<()> {
        let t = basis.len();
        let (pos_t, mono_t, _) =
            leading_of(&g, ctx, module).expect("attempted to install a zero vector");

        // candidate pairs with the new element
        let cand: Vec<(usize, Monomial)> = (0..t)
            .filter(|&i| leads[i].0 == pos_t)
            .map(|i| (i, leads[i].1.lcm(&mono_t)))
            .collect();

        // Gebauer-Moller M criterion: drop (i,t) when another new pair's lcm
        // strictly divides its lcm.
        let mut keep: Vec<bool> = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a != b
                    && cand[b].1.divides(&cand[a].1)
                    && cand[b].1 != cand[a].1
                {
                    keep[a] = false;
                    break;
                }
            }
        }

        // F criterion: one representative per lcm value; a class containing a
        // coprime pair (rank 1 only) is dropped entirely by the product
        // criterion.
        let mut chosen: Vec<(usize, Monomial)> = Vec::new();
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            if chosen.iter().any(|(_, l)| *l == cand[a].1) {
                continue;
            }
            let class_coprime = rank == 1
                && (0..cand.len()).any(|b| {
                    keep[b] && cand[b].1 == cand[a].1 && leads[cand[b].0].1.coprime(&mono_t)
                });
            if !class_coprime {
                // prefer the smallest index in the class for determinism
                let rep = (0..cand.len())
                    .filter(|&b| keep[b] && cand[b].1 == cand[a].1)
                    .min_by_key(|&b| cand[b].0)
                    .unwrap();
                chosen.push((cand[rep].0, cand[rep].1.clone()));
            }
        }

        // chain criterion on surviving old pairs
        pairs.retain(|p| {
            if p.pos != pos_t || !mono_t.divides(&p.lcm) {
                return true;
            }
            let l_it = leads[p.i].1.lcm(&mono_t);
            let l_jt = leads[p.j].1.lcm(&mono_t);
            l_it == p.lcm || l_jt == p.lcm
        });

        for (i, lcm) in chosen {
            pairs.push(Pair {
                i,
                j: t,
                pos: pos_t,
                lcm,
            });
        }
        if pairs.len() > caps.max_pairs {
            return Err(Error::ResourceCap(format!(
                "critical pair queue grew past {}",
                caps.max_pairs
            )));
        }
        basis.push(g);
        leads.push((pos_t, mono_t));
        Ok(())
    };

    // Each element is fully reduced against its predecessors before being
    // installed, so no lead ever divides an earlier lead and minimalization
    // below cannot drop two elements that divide each other.
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let (r, _) = divide_impl(g, &basis, &leads, ctx, module, caps, false)?;
        if r.is_zero() {
            continue;
        }
        install(make_monic(&r, ctx, module), &mut basis, &mut leads, &mut pairs)?;
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm in the module term order
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                ctx.cmp_module_term(pairs[a].pos, &pairs[a].lcm, pairs[b].pos, &pairs[b].lcm)
                    .then_with(|| pairs[a].i.cmp(&pairs[b].i))
                    .then_with(|| pairs[a].j.cmp(&pairs[b].j))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);

        let (pi, pj) = (pair.i, pair.j);
        let qi = leads[pi].1.quotient_into(&pair.lcm);
        let qj = leads[pj].1.quotient_into(&pair.lcm);
        let s = basis[pi]
            .mul_term(FieldElement::ONE, &qi)
            .sub(&basis[pj].mul_term(FieldElement::ONE, &qj));
        let (r, _) = divide_impl(&s, &basis, &leads, ctx, module, caps, false)?;
        if !r.is_zero() {
            let monic = make_monic(&r, ctx, module);
            install(monic, &mut basis, &mut leads, &mut pairs)?;
        }
    }

    // minimalize: drop elements whose lead is divisible by another lead
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let divisible = (0..basis.len())
            .any(|j| j != i && leads[j].0 == leads[i].0 && leads[j].1.divides(&leads[i].1));
        if !divisible {
            kept.push(i);
        }
    }
    let min_basis: Vec<ModuleVector> = kept.iter().map(|&i| basis[i].clone()).collect();
    let min_leads: Vec<(usize, Monomial)> = kept.iter().map(|&i| leads[i].clone()).collect();

    // tail-reduce each element against the others
    let mut reduced: Vec<ModuleVector> = Vec::with_capacity(min_basis.len());
    for i in 0..min_basis.len() {
        let others: Vec<ModuleVector> = (0..min_basis.len())
            .filter(|&j| j != i)
            .map(|j| min_basis[j].clone())
            .collect();
        let other_leads: Vec<(usize, Monomial)> = (0..min_basis.len())
            .filter(|&j| j != i)
            .map(|j| min_leads[j].clone())
            .collect();
        let (r, _) = divide_impl(
            &min_basis[i],
            &others,
            &other_leads,
            ctx,
            module,
            caps,
            false,
        )?;
        debug_assert!(!r.is_zero(), "minimal basis element reduced to zero");
        reduced.push(make_monic(&r, ctx, module));
    }

    reduced.sort_by(|a, b| {
        let (pa, ma, _) = leading_of(a, ctx, module).unwrap();
        let (pb, mb, _) = leading_of(b, ctx, module).unwrap();
        ctx.cmp_module_term(pb, &mb, pa, &ma)
    });
    Ok(reduced)
}

/// Reduced Groebner basis of a presented submodule under the ctx order.
/// Deterministic: identical inputs produce identical bases.
pub fn buchberger(w: &SubmodulePresentation) -> Result<GroebnerBasis> {
    buchberger_capped(w, &Caps::default())
}

pub fn buchberger_capped(w: &SubmodulePresentation, caps: &Caps) -> Result<GroebnerBasis> {
    let ctx = w.ctx().clone();
    let module = ctx.order().module;
    let elements = reduced_basis(&ctx, w.ambient_rank(), &w.generator_vectors(), module, caps)?;
    Ok(GroebnerBasis {
        ctx: ctx.clone(),
        ambient_rank: w.ambient_rank(),
        elements,
        order: ctx.order(),
        reduced: true,
    })
}

// ----- doubled-module elimination: syzygies and lifts -----

/// Reduced basis of {(M e_j, e_j)} in R^{rows+cols} under position-over-term
/// order, with the original positions dominating the tag positions. Supports
/// extracting syzygies of the columns of M and solving M u = w.
pub(crate) struct ImageSolver {
    ctx: Arc<RingCtx>,
    rows: usize,
    cols: usize,
    basis: Vec<ModuleVector>,
    leads: Vec<(usize, Monomial)>,
}

impl ImageSolver {
    pub fn new(m: &PolyMatrix, caps: &Caps) -> Result<ImageSolver> {
        let ctx = m.ctx().clone();
        let (rows, cols) = (m.rows(), m.cols());
        let doubled_rank = rows + cols;
        let gens: Vec<ModuleVector> = (0..cols)
            .map(|j| {
                let mut comps: Vec<Polynomial> = (0..rows)
                    .map(|i| m.entry(i, j).clone())
                    .collect();
                comps.extend((0..cols).map(|k| {
                    if k == j {
                        Polynomial::one(&ctx)
                    } else {
                        Polynomial::zero(&ctx)
                    }
                }));
                ModuleVector::from_components(&ctx, comps)
            })
            .collect();
        let basis = reduced_basis(
            &ctx,
            doubled_rank,
            &gens,
            ModuleOrder::PositionOverTerm,
            caps,
        )?;
        let leads = basis
            .iter()
            .map(|g| {
                let (pos, m, _) =
                    leading_of(g, &ctx, ModuleOrder::PositionOverTerm).expect("nonzero");
                (pos, m)
            })
            .collect();
        Ok(ImageSolver {
            ctx,
            rows,
            cols,
            basis,
            leads,
        })
    }

    /// Generators of {u : M u = 0}: the basis elements supported entirely on
    /// the tag block.
    pub fn syzygy_columns(&self) -> Vec<ModuleVector> {
        self.basis
            .iter()
            .filter(|g| (0..self.rows).all(|i| g.component(i).is_zero()))
            .map(|g| {
                ModuleVector::from_components(
                    &self.ctx,
                    (self.rows..self.rows + self.cols)
                        .map(|i| g.component(i).clone())
                        .collect(),
                )
            })
            .collect()
    }

    /// Solves M u = w, or returns None when w is not in the image of M.
    pub fn solve(&self, w: &ModuleVector) -> Result<Option<ModuleVector>> {
        debug_assert_eq!(w.rank(), self.rows);
        let mut comps: Vec<Polynomial> = w.components().to_vec();
        comps.extend((0..self.cols).map(|_| Polynomial::zero(&self.ctx)));
        let padded = ModuleVector::from_components(&self.ctx, comps);
        let (r, _) = divide_impl(
            &padded,
            &self.basis,
            &self.leads,
            &self.ctx,
            ModuleOrder::PositionOverTerm,
            &Caps::default(),
            false,
        )?;
        if (0..self.rows).any(|i| !r.component(i).is_zero()) {
            return Ok(None);
        }
        let u = ModuleVector::from_components(
            &self.ctx,
            (self.rows..self.rows + self.cols)
                .map(|i| r.component(i).neg())
                .collect(),
        );
        Ok(Some(u))
    }
}

/// Matrix whose columns generate {w : M w = 0}; M times the result is zero
/// exactly.
pub fn syzygy_matrix(m: &PolyMatrix) -> Result<PolyMatrix> {
    syzygy_matrix_capped(m, &Caps::default())
}

pub fn syzygy_matrix_capped(m: &PolyMatrix, caps: &Caps) -> Result<PolyMatrix> {
    let solver = ImageSolver::new(m, caps)?;
    let cols = solver.syzygy_columns();
    Ok(PolyMatrix::from_columns(m.ctx(), m.cols(), &cols))
}

// ----- membership, equality, intersection, colon, annihilator -----

/// True iff the normal form of `v` against the basis of `w` vanishes.
pub fn membership(v: &ModuleVector, w: &SubmodulePresentation) -> Result<bool> {
    if v.rank() != w.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: w.ambient_rank(),
            found: v.rank(),
        });
    }
    check_same_ctx(v.ctx(), w.ctx())?;
    let gb = w.gb()?;
    Ok(normal_form(v, &gb)?.is_zero())
}

/// Submodule equality, decided on canonical reduced bases.
pub fn module_equal(w1: &SubmodulePresentation, w2: &SubmodulePresentation) -> Result<bool> {
    if w1.ambient_rank() != w2.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: w1.ambient_rank(),
            found: w2.ambient_rank(),
        });
    }
    check_same_ctx(w1.ctx(), w2.ctx())?;
    let a = w1.gb()?;
    let b = w2.gb()?;
    Ok(a.elements() == b.elements())
}

/// Generators of W1 cap W2, by elimination on the doubled module generated
/// by {(u, u) : u in W1} and {(v, 0) : v in W2}.
pub fn intersect(
    w1: &SubmodulePresentation,
    w2: &SubmodulePresentation,
) -> Result<SubmodulePresentation> {
    intersect_capped(w1, w2, &Caps::default())
}

pub fn intersect_capped(
    w1: &SubmodulePresentation,
    w2: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    if w1.ambient_rank() != w2.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: w1.ambient_rank(),
            found: w2.ambient_rank(),
        });
    }
    check_same_ctx(w1.ctx(), w2.ctx())?;
    let ctx = w1.ctx().clone();
    let rank = w1.ambient_rank();
    let mut gens: Vec<ModuleVector> = Vec::new();
    for u in w1.generator_vectors() {
        let mut comps = u.components().to_vec();
        comps.extend(u.components().iter().cloned());
        gens.push(ModuleVector::from_components(&ctx, comps));
    }
    for v in w2.generator_vectors() {
        let mut comps = v.components().to_vec();
        comps.extend((0..rank).map(|_| Polynomial::zero(&ctx)));
        gens.push(ModuleVector::from_components(&ctx, comps));
    }
    let basis = reduced_basis(&ctx, 2 * rank, &gens, ModuleOrder::PositionOverTerm, caps)?;
    let cols: Vec<ModuleVector> = basis
        .iter()
        .filter(|g| (0..rank).all(|i| g.component(i).is_zero()))
        .map(|g| {
            ModuleVector::from_components(
                &ctx,
                (rank..2 * rank).map(|i| g.component(i).clone()).collect(),
            )
        })
        .collect();
    SubmodulePresentation::from_vectors(&ctx, rank, &cols).canonicalize()
}

/// The ideal (W : v) = {r in R : r v in W}.
pub fn colon_by_vector(
    w: &SubmodulePresentation,
    v: &ModuleVector,
) -> Result<SubmodulePresentation> {
    colon_by_vector_capped(w, v, &Caps::default())
}

pub fn colon_by_vector_capped(
    w: &SubmodulePresentation,
    v: &ModuleVector,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    if v.rank() != w.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: w.ambient_rank(),
            found: v.rank(),
        });
    }
    check_same_ctx(v.ctx(), w.ctx())?;
    let ctx = w.ctx().clone();
    let mut cols = w.generator_vectors();
    cols.push(v.clone());
    let m = PolyMatrix::from_columns(&ctx, w.ambient_rank(), &cols);
    let solver = ImageSolver::new(&m, caps)?;
    let k = m.cols() - 1;
    let gens: Vec<Polynomial> = solver
        .syzygy_columns()
        .into_iter()
        .map(|s| s.component(k).clone())
        .filter(|f| !f.is_zero())
        .collect();
    SubmodulePresentation::ideal(&ctx, gens).canonicalize()
}

/// The annihilator (0 :_R R^alpha / Image A), as an ideal presentation.
pub fn ann_cokernel(a: &PolyMatrix) -> Result<SubmodulePresentation> {
    ann_cokernel_capped(a, &Caps::default())
}

pub fn ann_cokernel_capped(a: &PolyMatrix, caps: &Caps) -> Result<SubmodulePresentation> {
    let ctx = a.ctx().clone();
    if a.rows() == 0 {
        // the zero module is annihilated by everything
        return SubmodulePresentation::ideal(&ctx, vec![Polynomial::one(&ctx)]).canonicalize();
    }
    let w = SubmodulePresentation::new(a.clone()).with_gb()?;
    let mut result: Option<SubmodulePresentation> = None;
    for i in 0..a.rows() {
        let e_i = ModuleVector::unit(&ctx, a.rows(), i, Polynomial::one(&ctx));
        let colon = colon_by_vector_capped(&w, &e_i, caps)?;
        result = Some(match result {
            None => colon,
            Some(acc) => intersect_capped(&acc, &colon, caps)?,
        });
    }
    Ok(result.expect("at least one row"))
}

/// Krull dimension of R/I, computed combinatorially from the leading-term
/// ideal: the largest set of variables supporting no lead monomial. The unit
/// ideal has dimension -1 by convention.
pub fn krull_dim(ideal: &SubmodulePresentation) -> Result<i64> {
    if ideal.ambient_rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: ideal.ambient_rank(),
        });
    }
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    if n > 24 {
        return Err(Error::ResourceCap(
            "combinatorial dimension supports at most 24 variables".into(),
        ));
    }
    let gb = ideal.gb()?;
    let leads: Vec<u32> = gb
        .elements()
        .iter()
        .map(|g| {
            let (_, m, _) = leading_of(g, &ctx, ctx.order().module).unwrap();
            let mut mask = 0u32;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect();
    if leads.contains(&0) {
        return Ok(-1); // a unit leads the basis
    }
    let mut best: i64 = 0;
    for subset in 0u32..(1 << n) {
        // independent iff no lead monomial is supported inside the subset
        if leads.iter().all(|&m| m & !subset != 0) {
            best = best.max(i64::from(subset.count_ones()));
        }
    }
    Ok(best)
}

/// Radical membership by the Rabinowitsch trick: g lies in the radical of I
/// iff 1 lies in I + (1 - t g) after adjoining a fresh variable t.
pub fn radical_membership(g: &Polynomial, ideal: &SubmodulePresentation) -> Result<bool> {
    if ideal.ambient_rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: ideal.ambient_rank(),
        });
    }
    check_same_ctx(g.ctx(), ideal.ctx())?;
    if g.is_zero() {
        return Ok(true);
    }
    let ctx = ideal.ctx().clone();
    let mut fresh = "t".to_string();
    let mut counter = 0;
    while ctx.var_index(&fresh).is_some() {
        fresh = format!("t{counter}");
        counter += 1;
    }
    let ext = ctx.extended(&fresh)?;
    let mut gens: Vec<Polynomial> = ideal
        .generator_vectors()
        .iter()
        .map(|v| v.component(0).lift_to(&ext))
        .collect();
    let t = Polynomial::var(&ext, ext.nvars() - 1);
    let one = Polynomial::one(&ext);
    gens.push(one.sub(&t.mul(&g.lift_to(&ext))));
    SubmodulePresentation::ideal(&ext, gens).contains_unit()
}
