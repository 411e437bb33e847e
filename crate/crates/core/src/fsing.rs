//! Test elements, global parameter test ideals, colon-killer bounds, and HSL
//! numbers with their loci.
//!
//! For S = R/I with codimension h, the pair (A, U) presenting the Frobenius
//! action on Ext^h(R/I, R) yields the ideal
//! Z = (0 : R^alpha / (Image A + c R^alpha)^*U) for a test element c; its
//! localization at every prime in the Cohen-Macaulay locus of S is the
//! parameter test ideal there. Away from the CM case the artifact brackets
//! the truth instead: J^d Z <= tau <= Z, with J the product of the
//! annihilators of the low local cohomology modules (computed by local
//! duality as annihilators of high Ext modules). Exact local test ideals at
//! non-CM points are out of scope.
//!
//! HSL indexing note: `HslReport.j` is the Ext degree of the global
//! presentation. After localizing at a prime P the corresponding local
//! cohomology module sits in cohomological degree dim R_P - j.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frobenius::{bracket_power_matrix, fe_root_capped, star_closure_capped};
use crate::groebner::{
    ann_cokernel_capped, buchberger_capped, colon_by_vector_capped, intersect_capped,
    krull_dim, module_equal, Caps, SubmodulePresentation,
};
use crate::homology::{ext_data, free_resolution_capped, induced_frobenius_from, ExtFrobeniusData};
use crate::ring::{ModuleVector, PolyMatrix, Polynomial, RingCtx};

/// Fixed default seed for the random-minor-combination fallback, recorded in
/// certificates for reproducibility.
pub const DEFAULT_TEST_ELEMENT_SEED: u64 = 0x5eed;

/// How many random minor combinations are tried before giving up.
pub const TEST_ELEMENT_ATTEMPTS: u32 = 32;

/// Where a test element came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// An h x h minor of the Jacobian matrix, by enumeration index.
    JacobianMinor { index: usize },
    /// A random F_p-combination of the minors.
    RandomCombination { seed: u64, attempt: u32 },
    UserSupplied,
}

/// A candidate test element c together with the record of how it was found
/// and whether (I : c) = I was verified.
#[derive(Debug, Clone)]
pub struct TestElementCertificate {
    pub c: Polynomial,
    pub provenance: Provenance,
    pub nzd_checked: bool,
}

/// Output of the global parameter test ideal computation in the CM case.
#[derive(Debug, Clone)]
pub struct PtiResult {
    /// Z = Ann(R^alpha / (Image A + c R^alpha)^*U). An ideal of R; only its
    /// behavior on V(I) is meaningful.
    pub z: SubmodulePresentation,
    pub c: TestElementCertificate,
    /// Codimension of I in R.
    pub h: usize,
    /// The stabilized submodule (Image A + c R^alpha)^*U.
    pub star_module: SubmodulePresentation,
    /// Star-closure chain length.
    pub iterations: usize,
}

/// The two-sided bound J^d Z <= tau <= Z reported for inputs that need not
/// be Cohen-Macaulay.
#[derive(Debug, Clone)]
pub struct SandwichResult {
    pub lower: SubmodulePresentation,
    pub upper: SubmodulePresentation,
    pub j_ideal: SubmodulePresentation,
    pub d: usize,
}

/// The descending chain B_{j,e} = Image A_j + I_e(Image U^[p^{e-1}] .. U),
/// its stabilization index and the locus ideals of each strict step.
#[derive(Debug, Clone)]
pub struct HslReport {
    /// Ext degree of the global presentation.
    pub j: usize,
    /// B_{j,0}, B_{j,1}, ...; B_{j,0} is the full ambient module.
    pub chain: Vec<SubmodulePresentation>,
    /// Smallest e with B_{j,e} = B_{j,e+1}; None when the cap was hit.
    pub eta: Option<usize>,
    /// Ann(B_{j,e-1} / B_{j,e}) for e = 1..eta.
    pub loci: Vec<SubmodulePresentation>,
}

fn proper_ideal_dim(ideal: &SubmodulePresentation) -> Result<usize> {
    let dim = krull_dim(ideal)?;
    if dim < 0 {
        return Err(Error::InvalidInput("the ideal must be proper".into()));
    }
    Ok(dim as usize)
}

/// (I : c) = I, the nonzerodivisor check enforced on every candidate.
fn is_nzd(ideal: &SubmodulePresentation, c: &Polynomial, caps: &Caps) -> Result<bool> {
    if c.is_zero() {
        return Ok(false);
    }
    let ctx = ideal.ctx().clone();
    let v = ModuleVector::from_components(&ctx, vec![c.clone()]);
    let colon = colon_by_vector_capped(ideal, &v, caps)?;
    module_equal(&colon, ideal)
}

fn det(ctx: &Arc<RingCtx>, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(ctx);
    }
    if n == 1 {
        return m[0][0].clone();
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
        let cofactor = pivot.mul(&det(ctx, &minor));
        acc = if j % 2 == 0 {
            acc.add(&cofactor)
        } else {
            acc.sub(&cofactor)
        };
    }
    acc
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance the combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// A completely stable test element for a geometrically reduced S = R/I, as
/// an h x h minor of the Jacobian matrix of the reduced basis of I (or a
/// random combination of such minors), passing the (I : c) = I check.
/// Radicality of I is the caller's assertion and is not verified.
pub fn jacobian_test_element(ideal: &SubmodulePresentation) -> Result<TestElementCertificate> {
    jacobian_test_element_seeded(ideal, DEFAULT_TEST_ELEMENT_SEED, &Caps::default())
}

pub fn jacobian_test_element_seeded(
    ideal: &SubmodulePresentation,
    seed: u64,
    caps: &Caps,
) -> Result<TestElementCertificate> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    let dim = proper_ideal_dim(ideal)?;
    let h = n - dim;
    let canonical = ideal.canonicalize()?;
    let gens: Vec<Polynomial> = canonical
        .generator_vectors()
        .iter()
        .map(|v| v.component(0).clone())
        .collect();
    // Jacobian: rows indexed by variables, columns by generators
    let jac: Vec<Vec<Polynomial>> = (0..n)
        .map(|v| gens.iter().map(|g| g.partial_derivative(v)).collect())
        .collect();

    let mut minors: Vec<Polynomial> = Vec::new();
    for rows in index_subsets(n, h) {
        for cols in index_subsets(gens.len(), h) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                .collect();
            let m = det(&ctx, &sub);
            if !m.is_zero() && !minors.contains(&m) {
                minors.push(m);
            }
        }
    }
    for (index, m) in minors.iter().enumerate() {
        if is_nzd(&canonical, m, caps)? {
            return Ok(TestElementCertificate {
                c: m.clone(),
                provenance: Provenance::JacobianMinor { index },
                nzd_checked: true,
            });
        }
    }
    if !minors.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..TEST_ELEMENT_ATTEMPTS {
            let mut c = Polynomial::zero(&ctx);
            for m in &minors {
                let coeff = ctx.felt(i64::from(rng.gen_range(0..ctx.p())));
                c = c.add(&m.scale(coeff));
            }
            if is_nzd(&canonical, &c, caps)? {
                return Ok(TestElementCertificate {
                    c,
                    provenance: Provenance::RandomCombination { seed, attempt },
                    nzd_checked: true,
                });
            }
        }
    }
    Err(Error::NoTestElement)
}

fn resolve_test_element(
    ideal: &SubmodulePresentation,
    c: Option<&Polynomial>,
    seed: u64,
    caps: &Caps,
) -> Result<TestElementCertificate> {
    match c {
        Some(c) => {
            if !is_nzd(&ideal.canonicalize()?, c, caps)? {
                return Err(Error::NoTestElement);
            }
            Ok(TestElementCertificate {
                c: c.clone(),
                provenance: Provenance::UserSupplied,
                nzd_checked: true,
            })
        }
        None => jacobian_test_element_seeded(ideal, seed, caps),
    }
}

/// The global parameter test ideal Z for Cohen-Macaulay loci:
/// Z = Ann(R^alpha / (Image A + c R^alpha)^*U) with (A, U) the Frobenius
/// presentation of Ext^h(R/I, R) at e = 1. Its localization at every prime
/// in the CM locus of S is the parameter test ideal of the localization.
pub fn global_pti_cm(
    ideal: &SubmodulePresentation,
    c: Option<&Polynomial>,
) -> Result<PtiResult> {
    global_pti_cm_seeded(ideal, c, DEFAULT_TEST_ELEMENT_SEED, &Caps::default())
}

pub fn global_pti_cm_seeded(
    ideal: &SubmodulePresentation,
    c: Option<&Polynomial>,
    seed: u64,
    caps: &Caps,
) -> Result<PtiResult> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    let dim = proper_ideal_dim(ideal)?;
    let h = n - dim;
    let cert = resolve_test_element(ideal, c, seed, caps)?;
    let res = free_resolution_capped(ideal, caps)?;
    let data = ext_data(&res, h, caps)?;
    let efd = induced_frobenius_from(&res, &data, h, 1, caps)?;
    let alpha = efd.a.rows();
    let mut gens = efd.a.columns();
    for t in 0..alpha {
        gens.push(ModuleVector::unit(&ctx, alpha, t, cert.c.clone()));
    }
    let v = SubmodulePresentation::from_vectors(&ctx, alpha, &gens);
    let (star, iterations) = star_closure_capped(&v, &efd.u, 1, caps)?;
    let z = ann_cokernel_capped(star.gens(), caps)?;
    Ok(PtiResult {
        z,
        c: cert,
        h,
        star_module: star,
        iterations,
    })
}

/// The computable colon-killer bound J = prod_{i=0}^{d-1} Ann H^i_m(S),
/// realized by local duality as the product of the annihilators of
/// Ext^{n-i}(R/I, R). Equals (1) when S is Cohen-Macaulay.
pub fn colon_killer_ideal(ideal: &SubmodulePresentation) -> Result<SubmodulePresentation> {
    colon_killer_ideal_capped(ideal, &Caps::default())
}

pub fn colon_killer_ideal_capped(
    ideal: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    let d = proper_ideal_dim(ideal)?;
    let res = free_resolution_capped(ideal, caps)?;
    let mut j_ideal =
        SubmodulePresentation::ideal(&ctx, vec![Polynomial::one(&ctx)]).canonicalize()?;
    for i in 0..d {
        let a = ext_data(&res, n - i, caps)?.a;
        let ann = ann_cokernel_capped(&a, caps)?;
        j_ideal = ideal_product(&j_ideal, &ann, caps)?;
    }
    Ok(j_ideal)
}

fn ideal_product(
    a: &SubmodulePresentation,
    b: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    let ctx = a.ctx().clone();
    let mut gens: Vec<Polynomial> = Vec::new();
    for u in a.generator_vectors() {
        for v in b.generator_vectors() {
            let prod = u.component(0).mul(v.component(0));
            if !prod.is_zero() {
                gens.push(prod);
            }
        }
    }
    let pres = SubmodulePresentation::ideal(&ctx, gens);
    Ok(SubmodulePresentation::from_gb(buchberger_capped(
        &pres, caps,
    )?))
}

/// The two-sided bound on the parameter test ideal: lower = J^d Z and
/// upper = Z. When S is Cohen-Macaulay the two coincide.
pub fn pti_sandwich(
    ideal: &SubmodulePresentation,
    c: Option<&Polynomial>,
) -> Result<SandwichResult> {
    pti_sandwich_seeded(ideal, c, DEFAULT_TEST_ELEMENT_SEED, &Caps::default())
}

pub fn pti_sandwich_seeded(
    ideal: &SubmodulePresentation,
    c: Option<&Polynomial>,
    seed: u64,
    caps: &Caps,
) -> Result<SandwichResult> {
    let d = proper_ideal_dim(ideal)?;
    let pti = global_pti_cm_seeded(ideal, c, seed, caps)?;
    let j_ideal = colon_killer_ideal_capped(ideal, caps)?;
    let mut lower = pti.z.clone();
    for _ in 0..d {
        lower = ideal_product(&lower, &j_ideal, caps)?;
    }
    Ok(SandwichResult {
        lower,
        upper: pti.z,
        j_ideal,
        d,
    })
}

/// Ann(B_{e-1}/B_e) = (B_e : B_{e-1}), the ideal cutting out the locus where
/// the HSL number is at least e.
fn ann_quotient(
    sub: &SubmodulePresentation,
    sup: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    let ctx = sub.ctx().clone();
    let mut acc: Option<SubmodulePresentation> = None;
    for g in sup.generator_vectors() {
        let colon = colon_by_vector_capped(sub, &g, caps)?;
        acc = Some(match acc {
            None => colon,
            Some(prev) => intersect_capped(&prev, &colon, caps)?,
        });
    }
    match acc {
        Some(ideal) => Ok(ideal),
        None => SubmodulePresentation::ideal(&ctx, vec![Polynomial::one(&ctx)]).canonicalize(),
    }
}

pub(crate) struct HslEngine {
    pub efd: ExtFrobeniusData,
    ctx: Arc<RingCtx>,
}

impl HslEngine {
    pub fn new(efd: ExtFrobeniusData, ctx: Arc<RingCtx>) -> HslEngine {
        HslEngine { efd, ctx }
    }

    /// B_{j,e} for the running product P_e = U^[p^{e-1}] P_{e-1}; P is
    /// updated in place to the next power.
    fn step(
        &self,
        product: &mut PolyMatrix,
        e: u32,
        caps: &Caps,
    ) -> Result<SubmodulePresentation> {
        let alpha = self.efd.a.rows();
        let image = SubmodulePresentation::from_vectors(&self.ctx, alpha, &product.columns());
        let rooted = fe_root_capped(&image, e, caps)?;
        let mut gens = self.efd.a.columns();
        gens.extend(rooted.generator_vectors());
        let b = SubmodulePresentation::from_vectors(&self.ctx, alpha, &gens);
        let out = SubmodulePresentation::from_gb(buchberger_capped(&b, caps)?);
        *product = bracket_power_matrix(product, 1)?.matmul(&self.efd.u);
        Ok(out)
    }

    pub fn chain(&self, j: usize, e_max: usize, caps: &Caps) -> Result<HslReport> {
        let alpha = self.efd.a.rows();
        let b0 = SubmodulePresentation::full_module(&self.ctx, alpha).canonicalize()?;
        let mut chain = vec![b0];
        let mut product = self.efd.u.clone();
        let mut eta: Option<usize> = None;
        for e in 1..=e_max {
            let b_e = self.step(&mut product, e as u32, caps)?;
            let stabilized = module_equal(&b_e, chain.last().unwrap())?;
            chain.push(b_e);
            if stabilized {
                eta = Some(e - 1);
                break;
            }
        }
        if eta.is_none() {
            return Err(Error::StabilizationCapExceeded {
                j,
                e_max,
                partial: Box::new(HslReport {
                    j,
                    chain,
                    eta: None,
                    loci: Vec::new(),
                }),
            });
        }
        // persistence: one step beyond stabilization must stay constant
        let next_e = chain.len() as u32;
        let beyond = self.step(&mut product, next_e, caps)?;
        if !module_equal(&beyond, chain.last().unwrap())? {
            return Err(Error::InvariantViolation(
                "HSL chain moved again after stabilizing".into(),
            ));
        }
        let loci = (1..=eta.unwrap())
            .map(|e| ann_quotient(&chain[e], &chain[e - 1], caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(HslReport {
            j,
            chain,
            eta,
            loci,
        })
    }
}

/// The descending chain B_{j,e} for Ext degree j, its stabilization index
/// eta and the locus ideals Ann(B_{j,e-1}/B_{j,e}).
pub fn hsl_chain(ideal: &SubmodulePresentation, j: usize, e_max: usize) -> Result<HslReport> {
    hsl_chain_capped(ideal, j, e_max, &Caps::default())
}

pub fn hsl_chain_capped(
    ideal: &SubmodulePresentation,
    j: usize,
    e_max: usize,
    caps: &Caps,
) -> Result<HslReport> {
    if e_max == 0 {
        return Err(Error::InvalidInput("hsl chains require e_max >= 1".into()));
    }
    proper_ideal_dim(ideal)?;
    let ctx = ideal.ctx().clone();
    let res = free_resolution_capped(ideal, caps)?;
    let data = ext_data(&res, j, caps)?;
    let efd = induced_frobenius_from(&res, &data, j, 1, caps)?;
    HslEngine::new(efd, ctx).chain(j, e_max, caps)
}

/// HSL chains for every Ext degree j = 0..n, sharing one resolution.
pub fn hsl_all_degrees(ideal: &SubmodulePresentation, e_max: usize) -> Result<Vec<HslReport>> {
    hsl_all_degrees_capped(ideal, e_max, &Caps::default())
}

pub fn hsl_all_degrees_capped(
    ideal: &SubmodulePresentation,
    e_max: usize,
    caps: &Caps,
) -> Result<Vec<HslReport>> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    proper_ideal_dim(ideal)?;
    let res = free_resolution_capped(ideal, caps)?;
    (0..=n)
        .map(|j| {
            let data = ext_data(&res, j, caps)?;
            let efd = induced_frobenius_from(&res, &data, j, 1, caps)?;
            HslEngine::new(efd, ctx.clone()).chain(j, e_max, caps)
        })
        .collect()
}

/// The largest HSL stabilization index over all Ext degrees j = 0..n.
pub fn hsl_global_bound(ideal: &SubmodulePresentation, e_max: usize) -> Result<usize> {
    hsl_global_bound_capped(ideal, e_max, &Caps::default())
}

pub fn hsl_global_bound_capped(
    ideal: &SubmodulePresentation,
    e_max: usize,
    caps: &Caps,
) -> Result<usize> {
    let reports = hsl_all_degrees_capped(ideal, e_max, caps)?;
    Ok(reports
        .iter()
        .map(|r| r.eta.expect("stabilized chains carry eta"))
        .max()
        .unwrap_or(0))
}

/// The F-injectivity locus ideal: the intersection over j of
/// Ann(B_{j,0}/B_{j,1}). A prime containing I avoids its vanishing locus iff
/// every local HSL number there is zero.
pub fn f_injective_locus(ideal: &SubmodulePresentation) -> Result<SubmodulePresentation> {
    f_injective_locus_capped(ideal, &Caps::default())
}

pub fn f_injective_locus_capped(
    ideal: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    proper_ideal_dim(ideal)?;
    let res = free_resolution_capped(ideal, caps)?;
    let mut acc =
        SubmodulePresentation::ideal(&ctx, vec![Polynomial::one(&ctx)]).canonicalize()?;
    for j in 0..=n {
        let data = ext_data(&res, j, caps)?;
        let efd = induced_frobenius_from(&res, &data, j, 1, caps)?;
        let alpha = efd.a.rows();
        let image = SubmodulePresentation::from_vectors(&ctx, alpha, &efd.u.columns());
        let rooted = fe_root_capped(&image, 1, caps)?;
        let mut gens = efd.a.columns();
        gens.extend(rooted.generator_vectors());
        let b1 = SubmodulePresentation::from_vectors(&ctx, alpha, &gens);
        // B_0 is the full ambient, so Ann(B_0/B_1) is the cokernel annihilator
        let ann = ann_cokernel_capped(b1.gens(), caps)?;
        acc = intersect_capped(&acc, &ann, caps)?;
    }
    Ok(acc)
}
