//! Independent, deliberately naive verifiers used by the test suite to
//! validate the fast paths on small instances, plus seeded random instance
//! generation. The dense computations here share no algorithmic code with
//! the sparse engine: they work on flat coefficient grids with mixed-radix
//! index arithmetic and Gaussian elimination over F_p.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frobenius::{bracket_power_poly, bracket_power_submodule, star_closure};
use crate::groebner::{membership, SubmodulePresentation};
use crate::ring::{FieldElement, ModuleVector, Monomial, PolyMatrix, Polynomial, RingCtx};

const MAX_DENSE_CELLS: usize = 1 << 20;

/// Bounds for a randomly generated test instance. All bounds must stay small
/// enough that the dense computations below remain feasible.
#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub p: u32,
    pub n: usize,
    pub max_degree: u32,
    pub ambient_rank: usize,
    pub generator_count: usize,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn ring(&self) -> Arc<RingCtx> {
        const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
        assert!(self.n <= NAMES.len(), "instance spec supports up to 6 variables");
        RingCtx::new(self.p, &NAMES[..self.n], Default::default()).expect("valid instance ring")
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Feasibility of dense root extraction at exponent e:
    /// p^e * max_degree <= 16 per variable.
    pub fn dense_feasible(&self, e: u32) -> bool {
        let mut q: u64 = 1;
        for _ in 0..e {
            q *= u64::from(self.p);
        }
        q * u64::from(self.max_degree) <= 16
    }

    pub fn random_monomial(&self, ctx: &Arc<RingCtx>, rng: &mut ChaCha8Rng) -> Monomial {
        let mut exps = vec![0u32; ctx.nvars()];
        let degree = rng.gen_range(0..=self.max_degree);
        for _ in 0..degree {
            exps[rng.gen_range(0..ctx.nvars())] += 1;
        }
        Monomial::new(exps)
    }

    pub fn random_polynomial(&self, ctx: &Arc<RingCtx>, rng: &mut ChaCha8Rng) -> Polynomial {
        let terms = rng.gen_range(1..=3usize);
        let raw: Vec<(FieldElement, Monomial)> = (0..terms)
            .map(|_| {
                let c = ctx.felt(i64::from(rng.gen_range(0..ctx.p())));
                (c, self.random_monomial(ctx, rng))
            })
            .collect();
        Polynomial::from_terms(ctx, raw)
    }

    /// A random homogeneous polynomial of the given degree.
    pub fn random_form(
        &self,
        ctx: &Arc<RingCtx>,
        degree: u32,
        rng: &mut ChaCha8Rng,
    ) -> Polynomial {
        let terms = rng.gen_range(1..=3usize);
        let raw: Vec<(FieldElement, Monomial)> = (0..terms)
            .map(|_| {
                let mut exps = vec![0u32; ctx.nvars()];
                for _ in 0..degree {
                    exps[rng.gen_range(0..ctx.nvars())] += 1;
                }
                let c = ctx.felt(i64::from(rng.gen_range(1..ctx.p().max(2))));
                (c, Monomial::new(exps))
            })
            .collect();
        Polynomial::from_terms(ctx, raw)
    }

    pub fn random_vector(&self, ctx: &Arc<RingCtx>, rng: &mut ChaCha8Rng) -> ModuleVector {
        let comps = (0..self.ambient_rank)
            .map(|_| self.random_polynomial(ctx, rng))
            .collect();
        ModuleVector::from_components(ctx, comps)
    }

    pub fn random_submodule(
        &self,
        ctx: &Arc<RingCtx>,
        rng: &mut ChaCha8Rng,
    ) -> SubmodulePresentation {
        let gens: Vec<ModuleVector> = (0..self.generator_count)
            .map(|_| self.random_vector(ctx, rng))
            .collect();
        SubmodulePresentation::from_vectors(ctx, self.ambient_rank, &gens)
    }

    pub fn random_ideal(&self, ctx: &Arc<RingCtx>, rng: &mut ChaCha8Rng) -> SubmodulePresentation {
        let gens: Vec<Polynomial> = (0..self.generator_count)
            .map(|_| self.random_polynomial(ctx, rng))
            .collect();
        SubmodulePresentation::ideal(ctx, gens)
    }
}

// ----- dense coefficient grids -----

struct Grid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    cells: Vec<u32>,
}

impl Grid {
    fn new(dims: Vec<usize>) -> Result<Grid> {
        let mut total = 1usize;
        for &d in &dims {
            total = total.saturating_mul(d);
        }
        if total > MAX_DENSE_CELLS {
            return Err(Error::BoundsExceeded(format!(
                "dense grid would hold {total} cells"
            )));
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        Ok(Grid {
            cells: vec![0; total],
            dims,
            strides,
        })
    }

    fn index_of(&self, exps: &[u32]) -> usize {
        exps.iter()
            .zip(self.strides.iter())
            .map(|(&e, &s)| e as usize * s)
            .sum()
    }

    fn exps_of(&self, mut idx: usize) -> Vec<u32> {
        let mut exps = vec![0u32; self.dims.len()];
        for (e, &stride) in exps.iter_mut().zip(self.strides.iter()) {
            *e = (idx / stride) as u32;
            idx %= stride;
        }
        exps
    }

    fn from_poly(f: &Polynomial, dims: Vec<usize>) -> Result<Grid> {
        let mut g = Grid::new(dims)?;
        for t in f.terms() {
            let idx = g.index_of(t.mono.exps());
            g.cells[idx] = t.coeff.value();
        }
        Ok(g)
    }

    fn to_poly(&self, ctx: &Arc<RingCtx>) -> Polynomial {
        let raw: Vec<(FieldElement, Monomial)> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| (ctx.felt(i64::from(c)), Monomial::new(self.exps_of(idx))))
            .collect();
        Polynomial::from_terms(ctx, raw)
    }
}

fn required_dims(gen: &ModuleVector, n: usize) -> Vec<usize> {
    let mut dims = vec![1usize; n];
    for f in gen.components() {
        for t in f.terms() {
            for (i, &x) in t.mono.exps().iter().enumerate() {
                dims[i] = dims[i].max(x as usize + 1);
            }
        }
    }
    dims
}

/// Second, structurally independent Frobenius root: every generator is laid
/// out on a dense coefficient grid, the grid is regrouped by residue classes
/// of the exponent vector mod p^e, and root vectors are read off. Must agree
/// with the sparse `fe_root` on every instance within bounds.
pub fn dense_fe_root(k: &SubmodulePresentation, e: u32) -> Result<SubmodulePresentation> {
    if e == 0 {
        return Ok(k.clone());
    }
    let ctx = k.ctx().clone();
    let n = ctx.nvars();
    let rank = k.ambient_rank();
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q
            .checked_mul(u64::from(ctx.p()))
            .filter(|&q| q <= 1 << 16)
            .ok_or_else(|| Error::BoundsExceeded("p^e too large for dense grids".into()))?;
    }
    let q = q as usize;
    let mut roots: Vec<ModuleVector> = Vec::new();
    for gen in k.generator_vectors() {
        let dims = required_dims(&gen, n);
        let grids = gen
            .components()
            .iter()
            .map(|f| Grid::from_poly(f, dims.clone()))
            .collect::<Result<Vec<_>>>()?;
        let qdims: Vec<usize> = dims.iter().map(|&d| d.div_ceil(q)).collect();
        // residue index -> per-component quotient grid
        let mut buckets: HashMap<Vec<u32>, Vec<Grid>> = HashMap::new();
        for (comp, grid) in grids.iter().enumerate() {
            for idx in 0..grid.cells.len() {
                let c = grid.cells[idx];
                if c == 0 {
                    continue;
                }
                let exps = grid.exps_of(idx);
                let residue: Vec<u32> = exps.iter().map(|&x| x % q as u32).collect();
                let quotient: Vec<u32> = exps.iter().map(|&x| x / q as u32).collect();
                let bucket = match buckets.get_mut(&residue) {
                    Some(b) => b,
                    None => {
                        let fresh = (0..rank)
                            .map(|_| Grid::new(qdims.clone()))
                            .collect::<Result<Vec<_>>>()?;
                        buckets.entry(residue.clone()).or_insert(fresh)
                    }
                };
                let qidx = bucket[comp].index_of(&quotient);
                bucket[comp].cells[qidx] = c;
            }
        }
        let mut keyed: Vec<(Vec<u32>, Vec<Grid>)> = buckets.into_iter().collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, grids) in keyed {
            let comps: Vec<Polynomial> = grids.iter().map(|g| g.to_poly(&ctx)).collect();
            roots.push(ModuleVector::from_components(&ctx, comps));
        }
    }
    Ok(SubmodulePresentation::from_vectors(&ctx, rank, &roots))
}

/// Checks that a candidate W contains V, is U-stable and contains the
/// computed star-closure; the defining properties of the unique minimal
/// stable overmodule.
pub fn verify_star_minimality(
    v: &SubmodulePresentation,
    u: &PolyMatrix,
    w_candidate: &SubmodulePresentation,
) -> Result<bool> {
    if w_candidate.ambient_rank() != v.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: v.ambient_rank(),
            found: w_candidate.ambient_rank(),
        });
    }
    let w = w_candidate.clone().with_gb()?;
    for g in v.generator_vectors() {
        if !membership(&g, &w)? {
            return Ok(false);
        }
    }
    let bracket = bracket_power_submodule(&w, 1)?.with_gb()?;
    for g in w.generator_vectors() {
        if !membership(&u.mul_vector(&g), &bracket)? {
            return Ok(false);
        }
    }
    let star = star_closure(v, u, 1)?;
    for g in star.generator_vectors() {
        if !membership(&g, &w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff z^{p^e} lies in I^[p^e] for some e <= e_max; membership in the
/// Frobenius closure up to the stated level.
pub fn frobenius_closure_membership(
    z: &Polynomial,
    ideal: &SubmodulePresentation,
    e_max: u32,
) -> Result<bool> {
    let ctx = ideal.ctx().clone();
    for e in 0..=e_max {
        let z_power = bracket_power_poly(z, e)?;
        let bracket = bracket_power_submodule(ideal, e)?;
        let v = ModuleVector::from_components(&ctx, vec![z_power]);
        if membership(&v, &bracket)? {
            return Ok(true);
        }
    }
    Ok(false)
}

// ----- dense linear algebra over F_p -----

/// Row-reduces `rows` over F_p in place and returns a basis of the nullspace
/// of the matrix whose rows are the input vectors... columns are unknowns.
fn dense_nullspace(p: u32, rows: Vec<Vec<u32>>, ncols: usize) -> Vec<Vec<u32>> {
    let pm = u64::from(p);
    let inv = |a: u32| -> u32 {
        // Fermat inverse
        let mut acc: u64 = 1;
        let mut base = u64::from(a) % pm;
        let mut e = pm - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % pm;
            }
            base = base * base % pm;
            e >>= 1;
        }
        acc as u32
    };
    let mut m: Vec<Vec<u32>> = rows;
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let iv = inv(m[rank][col]);
        for cell in m[rank][col..ncols].iter_mut() {
            *cell = (u64::from(*cell) * u64::from(iv) % pm) as u32;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..ncols {
                    let sub = u64::from(factor) * u64::from(m[rank][c]) % pm;
                    m[r][c] = ((u64::from(m[r][c]) + pm - sub) % pm) as u32;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![0u32; ncols];
            v[fc] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                // x_pc = -sum m[r][free] x_free
                v[pc] = ((pm - u64::from(m[r][fc])) % pm) as u32;
            }
            v
        })
        .collect()
}

fn module_monomials(n: usize, rank: usize, degree_bound: u32) -> Vec<(usize, Monomial)> {
    fn monos(n: usize, bound: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for lead in 0..=bound {
            for mut tail in monos(n - 1, bound - lead) {
                let mut v = vec![lead];
                v.append(&mut tail);
                out.push(v);
            }
        }
        out
    }
    let mut out = Vec::new();
    for pos in 0..rank {
        for exps in monos(n, degree_bound) {
            out.push((pos, Monomial::new(exps)));
        }
    }
    out
}

fn span_vectors(
    w: &SubmodulePresentation,
    degree_bound: u32,
    coords: &HashMap<(usize, Vec<u32>), usize>,
) -> Result<Vec<Vec<u32>>> {
    let ctx = w.ctx().clone();
    let n = ctx.nvars();
    let dim = coords.len();
    let mut out = Vec::new();
    for g in w.generator_vectors() {
        let gdeg = g
            .components()
            .iter()
            .filter_map(|f| f.total_degree())
            .max()
            .unwrap_or(0) as u32;
        if u64::from(gdeg) > u64::from(degree_bound) {
            continue;
        }
        for exps in all_monos_upto(n, degree_bound - gdeg) {
            let m = Monomial::new(exps);
            let shifted = g.mul_term(FieldElement::ONE, &m);
            let mut row = vec![0u32; dim];
            let mut fits = true;
            for (pos, f) in shifted.components().iter().enumerate() {
                for t in f.terms() {
                    match coords.get(&(pos, t.mono.exps().to_vec())) {
                        Some(&i) => row[i] = t.coeff.value(),
                        None => {
                            fits = false;
                            break;
                        }
                    }
                }
            }
            if fits {
                out.push(row);
            }
        }
    }
    Ok(out)
}

fn all_monos_upto(n: usize, bound: u32) -> Vec<Vec<u32>> {
    module_monomials(n, 1, bound)
        .into_iter()
        .map(|(_, m)| m.exps().to_vec())
        .collect()
}

/// All intersection elements of degree <= bound, by dense kernel computation
/// over the coefficient grid: the F_p span of degree-bounded generator
/// multiples of each side is intersected as a vector space. Used to certify
/// the Groebner intersection on small instances.
pub fn brute_intersect(
    w1: &SubmodulePresentation,
    w2: &SubmodulePresentation,
    degree_bound: u32,
) -> Result<SubmodulePresentation> {
    if w1.ambient_rank() != w2.ambient_rank() {
        return Err(Error::RankMismatch {
            expected: w1.ambient_rank(),
            found: w2.ambient_rank(),
        });
    }
    let ctx = w1.ctx().clone();
    let n = ctx.nvars();
    let rank = w1.ambient_rank();
    let basis = module_monomials(n, rank, degree_bound);
    if basis.len() > 4096 {
        return Err(Error::BoundsExceeded(format!(
            "{} module monomials up to degree {degree_bound}",
            basis.len()
        )));
    }
    let coords: HashMap<(usize, Vec<u32>), usize> = basis
        .iter()
        .enumerate()
        .map(|(i, (pos, m))| ((*pos, m.exps().to_vec()), i))
        .collect();
    let span1 = span_vectors(w1, degree_bound, &coords)?;
    let span2 = span_vectors(w2, degree_bound, &coords)?;
    let (k1, k2) = (span1.len(), span2.len());
    if k1 == 0 || k2 == 0 {
        return Ok(SubmodulePresentation::zero_module(&ctx, rank));
    }
    // nullspace of the transpose system: a*span1 - b*span2 = 0, unknowns (a, b)
    let dim = basis.len();
    let p = ctx.p();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(dim);
    for coord in 0..dim {
        let mut row = vec![0u32; k1 + k2];
        for (j, v) in span1.iter().enumerate() {
            row[j] = v[coord];
        }
        for (j, v) in span2.iter().enumerate() {
            row[k1 + j] = (p - v[coord]) % p;
        }
        rows.push(row);
    }
    let null = dense_nullspace(p, rows, k1 + k2);
    let mut gens: Vec<ModuleVector> = Vec::new();
    for sol in null {
        // the intersection element is the span1 combination
        let mut coeffs = vec![0u64; dim];
        for (j, v) in span1.iter().enumerate() {
            if sol[j] == 0 {
                continue;
            }
            for coord in 0..dim {
                coeffs[coord] =
                    (coeffs[coord] + u64::from(sol[j]) * u64::from(v[coord])) % u64::from(p);
            }
        }
        let mut comps: Vec<Vec<(FieldElement, Monomial)>> = vec![Vec::new(); rank];
        for (coord, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let (pos, m) = &basis[coord];
                comps[*pos].push((ctx.felt(c as i64), m.clone()));
            }
        }
        let v = ModuleVector::from_components(
            &ctx,
            comps
                .into_iter()
                .map(|raw| Polynomial::from_terms(&ctx, raw))
                .collect(),
        );
        if !v.is_zero() {
            gens.push(v);
        }
    }
    Ok(SubmodulePresentation::from_vectors(&ctx, rank, &gens))
}

/// Random elements of {w : M w = 0} with entries of degree <= bound, found
/// by dense kernel computation on the coefficient grid. Certifies syzygy
/// completeness: every such element must lie in the image of the computed
/// syzygy matrix.
pub fn dense_kernel_elements(m: &PolyMatrix, degree_bound: u32) -> Result<Vec<ModuleVector>> {
    let ctx = m.ctx().clone();
    let n = ctx.nvars();
    let unknown_monos = all_monos_upto(n, degree_bound);
    let cols = m.cols();
    if unknown_monos.len() * cols > 4096 {
        return Err(Error::BoundsExceeded("too many unknowns".into()));
    }
    // unknowns: coefficient of each monomial in each entry of w
    let unknowns: Vec<(usize, Vec<u32>)> = (0..cols)
        .flat_map(|j| unknown_monos.iter().map(move |e| (j, e.clone())))
        .collect();
    let max_deg_m = (0..m.rows())
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .filter_map(|(r, c)| m.entry(r, c).total_degree())
        .max()
        .unwrap_or(0) as u32;
    let eq_monos = all_monos_upto(n, degree_bound + max_deg_m);
    let eq_index: HashMap<Vec<u32>, usize> = eq_monos
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let p = ctx.p();
    // one equation row per (matrix row, product monomial)
    let mut rows: Vec<Vec<u32>> = vec![vec![0u32; unknowns.len()]; m.rows() * eq_monos.len()];
    for (uidx, (j, e)) in unknowns.iter().enumerate() {
        let mono = Monomial::new(e.clone());
        for r in 0..m.rows() {
            let prod = m.entry(r, *j).mul_term(FieldElement::ONE, &mono);
            for t in prod.terms() {
                let eq = eq_index[&t.mono.exps().to_vec()];
                let row = &mut rows[r * eq_monos.len() + eq];
                row[uidx] = ((u64::from(row[uidx]) + u64::from(t.coeff.value())) % u64::from(p))
                    as u32;
            }
        }
    }
    let null = dense_nullspace(p, rows, unknowns.len());
    Ok(null
        .into_iter()
        .map(|sol| {
            let mut comps: Vec<Vec<(FieldElement, Monomial)>> = vec![Vec::new(); cols];
            for (uidx, &c) in sol.iter().enumerate() {
                if c != 0 {
                    let (j, e) = &unknowns[uidx];
                    comps[*j].push((ctx.felt(i64::from(c)), Monomial::new(e.clone())));
                }
            }
            ModuleVector::from_components(
                &ctx,
                comps
                    .into_iter()
                    .map(|raw| Polynomial::from_terms(&ctx, raw))
                    .collect(),
            )
        })
        .filter(|v| !v.is_zero())
        .collect())
}
