//! Free resolutions over R, Ext^i(R/I, R) as cokernel presentations, and the
//! Frobenius matrices these cokernels carry.
//!
//! The pair (A_i, U_i) produced here presents the map
//! Ext^i(R/I, R) -> Ext^i(R/I^[p^e], R) induced by the surjection
//! R/I^[p^e] -> R/I: the resolution of R/I is bracketed entry-wise (which
//! resolves R/I^[p^e] by flatness of Frobenius over the regular ambient), the
//! identity on R lifts to a chain map between the two resolutions, and the
//! dualized lift is transported through the subquotient-to-cokernel
//! presentations on both sides. All computations happen over the polynomial
//! ring itself; the local and Artinian objects this data stands for are never
//! materialized.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frobenius::{bracket_power_matrix, bracket_power_vector};
use crate::groebner::{
    ann_cokernel_capped, buchberger_capped, divide_exact, intersect_capped, krull_dim, membership,
    Caps, ImageSolver, SubmodulePresentation,
};
use crate::ring::{ModuleOrder, ModuleVector, PolyMatrix, Polynomial, RingCtx};

/// A free resolution of R/I: the differentials d_1 .. d_k with d_1 a row of
/// generators of I and Image(d_{i+1}) = kernel(d_i) exactly.
#[derive(Debug, Clone)]
pub struct ResolutionData {
    differentials: Vec<PolyMatrix>,
    ideal: SubmodulePresentation,
}

impl ResolutionData {
    /// The number of differentials (the length of the resolution).
    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// d_i for 1 <= i <= length.
    pub fn differential(&self, i: usize) -> &PolyMatrix {
        &self.differentials[i - 1]
    }

    /// Rank of the i-th free module F_i; F_0 = R.
    pub fn rank(&self, i: usize) -> usize {
        if i == 0 {
            1
        } else {
            self.differentials[i - 1].cols()
        }
    }

    pub fn ideal(&self) -> &SubmodulePresentation {
        &self.ideal
    }

    /// Checks d_i d_{i+1} = 0 and Image(d_{i+1}) = kernel(d_i) on every step;
    /// exercised by the test suite on every constructed resolution.
    pub fn validate(&self) -> Result<()> {
        let caps = Caps::default();
        for i in 1..self.length() {
            let composite = self.differential(i).matmul(self.differential(i + 1));
            if !composite.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "d_{} . d_{} is nonzero",
                    i,
                    i + 1
                )));
            }
            let kernel = ImageSolver::new(self.differential(i), &caps)?.syzygy_columns();
            let image = SubmodulePresentation::new(self.differential(i + 1).clone()).with_gb()?;
            for v in &kernel {
                if !membership(v, &image)? {
                    return Err(Error::InvariantViolation(format!(
                        "kernel of d_{i} is not covered by the image of d_{}",
                        i + 1
                    )));
                }
            }
        }
        if self.length() > 1 {
            let last = self.differential(self.length());
            let syz = ImageSolver::new(last, &caps)?.syzygy_columns();
            if !syz.is_empty() {
                return Err(Error::InvariantViolation(
                    "final differential has nonzero syzygies".into(),
                ));
            }
        }
        Ok(())
    }
}

/// The pair (A, U) presenting Ext^i(R/I, R) = Coker A together with the
/// induced e-step Frobenius matrix U, satisfying
/// Image(U A) <= Image(A^[p^e]).
#[derive(Debug, Clone)]
pub struct ExtFrobeniusData {
    pub i: usize,
    pub a: PolyMatrix,
    pub u: PolyMatrix,
    pub e: u32,
}

/// Drops generators contained in the module generated by the others; the
/// greedy pass keeps the presentation small and, for graded input, minimal.
fn trim_generators(
    ctx: &Arc<RingCtx>,
    rank: usize,
    gens: &[ModuleVector],
    caps: &Caps,
) -> Result<Vec<ModuleVector>> {
    let mut kept: Vec<ModuleVector> = gens.to_vec();
    let mut i = 0;
    while i < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let candidate = kept[i].clone();
        let others: Vec<ModuleVector> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let others_pres = SubmodulePresentation::from_gb(buchberger_capped(
            &SubmodulePresentation::from_vectors(ctx, rank, &others),
            caps,
        )?);
        if membership(&candidate, &others_pres)? {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// A free resolution of R/I by iterated syzygies, starting from the reduced
/// basis of I and stopping at the first zero syzygy module.
pub fn free_resolution(ideal: &SubmodulePresentation) -> Result<ResolutionData> {
    free_resolution_capped(ideal, &Caps::default())
}

pub fn free_resolution_capped(
    ideal: &SubmodulePresentation,
    caps: &Caps,
) -> Result<ResolutionData> {
    if ideal.ambient_rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: ideal.ambient_rank(),
        });
    }
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    let gb = buchberger_capped(ideal, caps)?;
    if gb.contains_unit() {
        return Err(Error::InvalidInput(
            "free resolutions require a proper ideal".into(),
        ));
    }
    let canonical = SubmodulePresentation::from_gb(gb);
    let d1 = canonical.gens().clone();
    let mut differentials = vec![d1];
    loop {
        let last = differentials.last().unwrap();
        let solver = ImageSolver::new(last, caps)?;
        let syz = solver.syzygy_columns();
        if syz.is_empty() {
            break;
        }
        let trimmed = trim_generators(&ctx, last.cols(), &syz, caps)?;
        let next = PolyMatrix::from_columns(&ctx, last.cols(), &trimmed);
        differentials.push(next);
        if differentials.len() > n {
            return Err(Error::ResourceCap(format!(
                "resolution exceeded the Hilbert bound of {n} steps"
            )));
        }
    }
    Ok(ResolutionData {
        differentials,
        ideal: canonical,
    })
}

/// The kernel generators and cokernel presentation of
/// Ext^i = ker(d_{i+1}^T) / im(d_i^T).
pub(crate) struct ExtData {
    /// Reduced basis of ker(d_{i+1}^T), as columns in R^{r_i}; empty when the
    /// Ext module is zero.
    pub kernel: Vec<ModuleVector>,
    /// Presentation matrix: Coker(a) = Ext^i(R/I, R). The zero module is
    /// presented by the 1x1 identity.
    pub a: PolyMatrix,
}

pub(crate) fn ext_data(res: &ResolutionData, i: usize, caps: &Caps) -> Result<ExtData> {
    let ctx = res.ideal().ctx().clone();
    let k = res.length();
    if i > k {
        return Ok(ExtData {
            kernel: Vec::new(),
            a: PolyMatrix::identity(&ctx, 1),
        });
    }
    let r_i = res.rank(i);
    // generators of ker(d_{i+1}^T): the full module at the end of the
    // resolution, the syzygies of the transpose otherwise
    let kernel: Vec<ModuleVector> = if i == k {
        (0..r_i)
            .map(|t| ModuleVector::unit(&ctx, r_i, t, Polynomial::one(&ctx)))
            .collect()
    } else {
        let dual_next = res.differential(i + 1).transpose();
        ImageSolver::new(&dual_next, caps)?.syzygy_columns()
    };
    if kernel.is_empty() {
        return Ok(ExtData {
            kernel,
            a: PolyMatrix::identity(&ctx, 1),
        });
    }
    let s = kernel.len();

    // image of d_i^T written in kernel coordinates (for i = 0 there is none)
    let mut relation_cols: Vec<ModuleVector> = Vec::new();
    if i >= 1 {
        let dual_prev = res.differential(i).transpose();
        for col in dual_prev.columns() {
            let q = divide_exact(&col, &kernel, &ctx, ModuleOrder::PositionOverTerm)?;
            relation_cols.push(ModuleVector::from_components(&ctx, q));
        }
    }
    // relations among the kernel generators themselves
    let kernel_matrix = PolyMatrix::from_columns(&ctx, r_i, &kernel);
    let kernel_syz = ImageSolver::new(&kernel_matrix, caps)?.syzygy_columns();
    relation_cols.extend(kernel_syz);

    Ok(ExtData {
        kernel,
        a: PolyMatrix::from_columns(&ctx, s, &relation_cols),
    })
}

/// Presentation matrix A_i with Coker(A_i) isomorphic to Ext^i(R/I, R).
pub fn ext_presentation(ideal: &SubmodulePresentation, i: usize) -> Result<PolyMatrix> {
    let caps = Caps::default();
    let res = free_resolution_capped(ideal, &caps)?;
    Ok(ext_data(&res, i, &caps)?.a)
}

/// Lifts the identity of R through the bracketed and plain resolutions to a
/// chain map phi_0 .. phi_upto (phi_0 = [1], d_j phi_j = phi_{j-1} d_j^[q]).
fn chain_map(
    res: &ResolutionData,
    e: u32,
    upto: usize,
    caps: &Caps,
) -> Result<Vec<PolyMatrix>> {
    let ctx = res.ideal().ctx().clone();
    let mut phis: Vec<PolyMatrix> = vec![PolyMatrix::identity(&ctx, 1)];
    for j in 1..=upto {
        let d_j = res.differential(j);
        let d_j_bracket = bracket_power_matrix(d_j, e)?;
        let target = phis[j - 1].matmul(&d_j_bracket);
        let solver = ImageSolver::new(d_j, caps)?;
        let mut cols: Vec<ModuleVector> = Vec::with_capacity(target.cols());
        for c in target.columns() {
            let u = solver.solve(&c)?.ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "chain map lift failed at step {j}: column not in the image"
                ))
            })?;
            cols.push(u);
        }
        let phi_j = PolyMatrix::from_columns(&ctx, d_j.cols(), &cols);
        debug_assert!(
            d_j.matmul(&phi_j) == target,
            "chain map identity d_j phi_j = phi_(j-1) d_j^[q] failed at step {j}"
        );
        phis.push(phi_j);
    }
    Ok(phis)
}

/// The matrix pair (A_i, U) for the e-step Frobenius action on
/// Ext^i(R/I, R); deterministic for a fixed input.
pub fn induced_frobenius_matrix(
    ideal: &SubmodulePresentation,
    i: usize,
    e: u32,
) -> Result<ExtFrobeniusData> {
    let caps = Caps::default();
    let res = free_resolution_capped(ideal, &caps)?;
    let data = ext_data(&res, i, &caps)?;
    induced_frobenius_from(&res, &data, i, e, &caps)
}

pub(crate) fn induced_frobenius_from(
    res: &ResolutionData,
    data: &ExtData,
    i: usize,
    e: u32,
    caps: &Caps,
) -> Result<ExtFrobeniusData> {
    if e == 0 {
        return Err(Error::InvalidInput(
            "induced Frobenius requires e >= 1".into(),
        ));
    }
    let ctx = res.ideal().ctx().clone();
    if data.kernel.is_empty() {
        // the zero module: any U is well defined; fix the identity
        return Ok(ExtFrobeniusData {
            i,
            a: data.a.clone(),
            u: PolyMatrix::identity(&ctx, 1),
            e,
        });
    }
    let s = data.kernel.len();
    let phis = chain_map(res, e, i.min(res.length()), caps)?;
    let phi_i_t = phis[i].transpose();
    let kernel_bracket: Vec<ModuleVector> = data
        .kernel
        .iter()
        .map(|v| bracket_power_vector(v, e))
        .collect::<Result<Vec<_>>>()?;
    let mut u = PolyMatrix::zero(&ctx, s, s);
    for (t, k_t) in data.kernel.iter().enumerate() {
        let w = phi_i_t.mul_vector(k_t);
        let q = divide_exact(&w, &kernel_bracket, &ctx, ModuleOrder::PositionOverTerm)?;
        for (row, coeff) in q.into_iter().enumerate() {
            *u.entry_mut(row, t) = coeff;
        }
    }
    let efd = ExtFrobeniusData {
        i,
        a: data.a.clone(),
        u,
        e,
    };
    verify_well_defined(&efd)?;
    Ok(efd)
}

/// Asserts Image(U A) <= Image(A^[p^e]), the well-definedness of the map
/// Coker A -> Coker A^[p^e].
pub fn verify_well_defined(efd: &ExtFrobeniusData) -> Result<()> {
    let bracket =
        SubmodulePresentation::new(bracket_power_matrix(&efd.a, efd.e)?).with_gb()?;
    let ua = efd.u.matmul(&efd.a);
    for col in ua.columns() {
        if !membership(&col, &bracket)? {
            return Err(Error::InvariantViolation(
                "Image(U A) is not contained in Image(A^[p^e])".into(),
            ));
        }
    }
    Ok(())
}

/// An ideal whose vanishing locus inside V(I) is the non-Cohen-Macaulay
/// locus of S = R/I: the intersection over i != codim of the annihilators of
/// Ext^i(R/I, R). Returns the unit ideal when S is Cohen-Macaulay.
pub fn non_cm_locus(ideal: &SubmodulePresentation) -> Result<SubmodulePresentation> {
    non_cm_locus_capped(ideal, &Caps::default())
}

pub fn non_cm_locus_capped(
    ideal: &SubmodulePresentation,
    caps: &Caps,
) -> Result<SubmodulePresentation> {
    let ctx = ideal.ctx().clone();
    let n = ctx.nvars();
    let dim = krull_dim(ideal)?;
    if dim < 0 {
        return Err(Error::InvalidInput(
            "the non-CM locus requires a proper ideal".into(),
        ));
    }
    let h = n - dim as usize;
    let res = free_resolution_capped(ideal, caps)?;
    let mut acc =
        SubmodulePresentation::ideal(&ctx, vec![Polynomial::one(&ctx)]).canonicalize()?;
    for i in 0..=res.length().min(n) {
        if i == h {
            continue;
        }
        let a = ext_data(&res, i, caps)?.a;
        let ann = ann_cokernel_capped(&a, caps)?;
        acc = intersect_capped(&acc, &ann, caps)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::module_equal;
    use crate::ring::{parse_polynomial, OrderSpec};

    fn ctx2() -> Arc<RingCtx> {
        RingCtx::new(2, &["x", "y"], OrderSpec::default()).unwrap()
    }

    fn p(ctx: &Arc<RingCtx>, s: &str) -> Polynomial {
        parse_polynomial(ctx, s).unwrap()
    }

    fn ideal(ctx: &Arc<RingCtx>, gens: &[&str]) -> SubmodulePresentation {
        SubmodulePresentation::ideal(ctx, gens.iter().map(|s| p(ctx, s)).collect())
    }

    #[test]
    fn hypersurface_resolution_has_length_one() {
        let ctx = ctx2();
        let res = free_resolution(&ideal(&ctx, &["y^2 + x^3"])).unwrap();
        assert_eq!(res.length(), 1);
        assert_eq!(res.differential(1).cols(), 1);
        res.validate().unwrap();
    }

    #[test]
    fn koszul_resolution_of_the_maximal_ideal() {
        let ctx = ctx2();
        let res = free_resolution(&ideal(&ctx, &["x", "y"])).unwrap();
        assert_eq!(res.length(), 2);
        let d2 = res.differential(2);
        assert_eq!((d2.rows(), d2.cols()), (2, 1));
        assert_eq!(d2.entry(0, 0), &p(&ctx, "y"));
        assert_eq!(d2.entry(1, 0), &p(&ctx, "x"));
        res.validate().unwrap();
    }

    #[test]
    fn resolution_with_hand_syzygy() {
        let ctx = ctx2();
        let res = free_resolution(&ideal(&ctx, &["x^2", "x*y"])).unwrap();
        assert_eq!(res.length(), 2);
        let d2 = res.differential(2);
        assert_eq!(d2.entry(0, 0), &p(&ctx, "y"));
        assert_eq!(d2.entry(1, 0), &p(&ctx, "x"));
        res.validate().unwrap();
    }

    #[test]
    fn unit_ideal_is_rejected() {
        let ctx = ctx2();
        assert!(matches!(
            free_resolution(&ideal(&ctx, &["1"])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn ext_zero_vanishes_for_nonzero_ideals() {
        let ctx = ctx2();
        let a = ext_presentation(&ideal(&ctx, &["y^2 + x^3"]), 0).unwrap();
        // zero module presented by the identity
        assert!(ann_cokernel_capped(&a, &Caps::default())
            .unwrap()
            .contains_unit()
            .unwrap());
    }

    #[test]
    fn ext_one_of_a_hypersurface() {
        let ctx = ctx2();
        let f = p(&ctx, "y^2 + x^3");
        let a = ext_presentation(&ideal(&ctx, &["y^2 + x^3"]), 1).unwrap();
        assert_eq!((a.rows(), a.cols()), (1, 1));
        assert_eq!(a.entry(0, 0), &f);
    }

    #[test]
    fn ext_two_of_the_origin() {
        let ctx = ctx2();
        // Ext^2(R/(x,y), R) is R/(x,y) again by Koszul self-duality
        let a = ext_presentation(&ideal(&ctx, &["x", "y"]), 2).unwrap();
        let ann = ann_cokernel_capped(&a, &Caps::default()).unwrap();
        assert!(module_equal(&ann, &ideal(&ctx, &["x", "y"]).canonicalize().unwrap()).unwrap());
    }

    #[test]
    fn hypersurface_frobenius_matrix() {
        let ctx = ctx2();
        let f = p(&ctx, "y^2 + x^3");
        let efd = induced_frobenius_matrix(&ideal(&ctx, &["y^2 + x^3"]), 1, 1).unwrap();
        // U = [f^{p-1}] = [f] at p = 2
        assert_eq!((efd.u.rows(), efd.u.cols()), (1, 1));
        assert_eq!(efd.u.entry(0, 0), &f);
    }

    #[test]
    fn hypersurface_frobenius_matrix_two_steps() {
        let ctx = ctx2();
        let f = p(&ctx, "y^2 + x^3");
        let efd = induced_frobenius_matrix(&ideal(&ctx, &["y^2 + x^3"]), 1, 2).unwrap();
        // U_2 = [f^{p^2 - 1}] = [f^3] at p = 2, which is U^[p] U
        assert_eq!(efd.u.entry(0, 0), &f.pow(3));
    }

    #[test]
    fn koszul_frobenius_matrix() {
        let ctx = ctx2();
        let efd = induced_frobenius_matrix(&ideal(&ctx, &["x", "y"]), 2, 1).unwrap();
        assert_eq!((efd.u.rows(), efd.u.cols()), (1, 1));
        assert_eq!(efd.u.entry(0, 0), &p(&ctx, "x*y"));
    }

    #[test]
    fn non_cm_locus_of_cm_quotients_is_unit() {
        let ctx = ctx2();
        assert!(non_cm_locus(&ideal(&ctx, &["y^2 + x^3"]))
            .unwrap()
            .contains_unit()
            .unwrap());
        assert!(non_cm_locus(&ideal(&ctx, &["x", "y"]))
            .unwrap()
            .contains_unit()
            .unwrap());
    }

    #[test]
    fn resolution_of_zero_ideal() {
        let ctx = ctx2();
        let res = free_resolution(&ideal(&ctx, &["0"])).unwrap();
        assert_eq!(res.length(), 1);
        assert_eq!(res.differential(1).cols(), 0);
        let a = ext_presentation(&ideal(&ctx, &["0"]), 0).unwrap();
        // Ext^0(R, R) = R: annihilator is the zero ideal
        let ann = ann_cokernel_capped(&a, &Caps::default()).unwrap();
        assert!(ann.is_zero_module().unwrap());
    }
}
