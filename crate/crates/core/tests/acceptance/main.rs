//! Acceptance suite: hand-derived instances (criteria 1-6) and the seeded
//! property suites (criterion 7, in `props`). Every test prints one pass line.
//!
//! Runtime bounds are asserted with wall-clock measurements.

mod props;
mod support;

use std::time::{Duration, Instant};

use charp::fsing::{
    colon_killer_ideal, f_injective_locus, global_pti_cm, hsl_chain, hsl_global_bound,
    pti_sandwich,
};
use charp::groebner::{krull_dim, membership, module_equal, radical_membership, SubmodulePresentation};
use charp::homology::non_cm_locus;
use charp::oracle::frobenius_closure_membership;
use charp::ring::Polynomial;

use support::{ideal, jacobian_minors, pass, poly, ring};

fn ideal_sum(
    a: &SubmodulePresentation,
    b: &SubmodulePresentation,
) -> SubmodulePresentation {
    let mut gens = a.generator_vectors();
    gens.extend(b.generator_vectors());
    SubmodulePresentation::from_vectors(a.ctx(), a.ambient_rank(), &gens)
}

#[test]
fn criterion_1_cusp_parameter_test_ideal() {
    let start = Instant::now();
    let ctx = ring(2, &["x", "y"]);
    let cusp = ideal(&ctx, &["y^2 + x^3"]);
    let result = global_pti_cm(&cusp, None).unwrap();
    assert!(
        module_equal(&result.z, &ideal(&ctx, &["x", "y"])).unwrap(),
        "tau of the cusp must be exactly (x, y), got {:?}",
        result.z.gens()
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass("criterion 1", &format!("cusp tau = (x, y) in {elapsed:?}"));
}

#[test]
fn criterion_2_regular_quotients() {
    let ctx = ring(2, &["x", "y"]);
    for gens in [vec!["x"], vec!["0"]] {
        let start = Instant::now();
        let i = ideal(&ctx, &gens);
        let result = global_pti_cm(&i, None).unwrap();
        assert!(result.z.contains_unit().unwrap(), "Z must be (1) for {gens:?}");
        assert_eq!(hsl_global_bound(&i, 5).unwrap(), 0, "eta must be 0 for {gens:?}");
        assert!(
            f_injective_locus(&i).unwrap().contains_unit().unwrap(),
            "F-injective locus must be (1) for {gens:?}"
        );
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(1), "took {elapsed:?} for {gens:?}");
    }
    pass("criterion 2", "regular quotients: Z = (1), eta = 0, locus (1)");
}

#[test]
fn criterion_3_cusp_hsl() {
    let start = Instant::now();
    let ctx = ring(2, &["x", "y"]);
    let cusp = ideal(&ctx, &["y^2 + x^3"]);
    let report = hsl_chain(&cusp, 1, 5).unwrap();
    assert_eq!(report.eta, Some(1));
    let m = ideal(&ctx, &["x", "y"]);
    assert_eq!(report.loci.len(), 1);
    assert!(module_equal(&report.loci[0], &m).unwrap());
    // one step past stabilization: B_2 = B_1 = (x, y)
    assert!(module_equal(&report.chain[1], &m).unwrap());
    assert!(module_equal(&report.chain[2], &m).unwrap());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass("criterion 3", &format!("cusp eta = 1, locus (x, y) in {elapsed:?}"));
}

#[test]
fn criterion_4_f_pure_hypersurface() {
    let start = Instant::now();
    let ctx = ring(2, &["x", "y"]);
    let i = ideal(&ctx, &["x*y"]);
    let report = hsl_chain(&i, 1, 5).unwrap();
    assert_eq!(report.eta, Some(0));
    assert!(report.chain[1].contains_unit().unwrap(), "B_1 must be (1)");
    // Frobenius-closure sanity checks on the oracle
    let x = poly(&ctx, "x");
    assert!(frobenius_closure_membership(&x, &ideal(&ctx, &["x"]), 0).unwrap());
    assert!(!frobenius_closure_membership(&x, &ideal(&ctx, &["x^2"]), 3).unwrap());
    assert!(
        frobenius_closure_membership(&poly(&ctx, "x + y"), &ideal(&ctx, &["x", "y"]), 0).unwrap()
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass("criterion 4", &format!("xy: eta = 0, B_1 = (1) in {elapsed:?}"));
}

#[test]
fn criterion_5_fermat_cubic_cone() {
    let start = Instant::now();
    let ctx = ring(7, &["x", "y", "z"]);
    let fermat = ideal(&ctx, &["x^3 + y^3 + z^3"]);
    let result = global_pti_cm(&fermat, None).unwrap();
    assert!(
        !result.z.contains_unit().unwrap(),
        "the non-F-rational locus is nonempty"
    );
    let z_plus_i = ideal_sum(&result.z, &fermat);
    assert_eq!(
        krull_dim(&z_plus_i).unwrap(),
        0,
        "the non-F-rational locus is zero-dimensional"
    );
    for g in ["3*x^2", "3*y^2", "3*z^2"] {
        assert!(
            radical_membership(&poly(&ctx, g), &z_plus_i).unwrap(),
            "Jacobian generator {g} must vanish on the non-F-rational locus"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(
        "criterion 5",
        &format!("Fermat cubic: Z proper, dim(Z+I) = 0, inside singular locus in {elapsed:?}"),
    );
}

#[test]
fn criterion_6_two_planes() {
    let start = Instant::now();
    let ctx = ring(2, &["x", "y", "u", "v"]);
    let planes = ideal(&ctx, &["x*u", "x*v", "y*u", "y*v"]);
    let noncm = non_cm_locus(&planes).unwrap();
    assert_eq!(krull_dim(&noncm).unwrap(), 0, "non-CM locus is the origin");
    let killer = colon_killer_ideal(&planes).unwrap();
    assert_eq!(krull_dim(&killer).unwrap(), 0, "colon-killer ideal is primary");
    let sandwich = pti_sandwich(&planes, None).unwrap();
    for g in sandwich.lower.generator_vectors() {
        assert!(
            membership(&g, &sandwich.upper).unwrap(),
            "lower bound must sit inside the upper bound"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    pass(
        "criterion 6",
        &format!("two planes: zero-dimensional loci, sandwich holds in {elapsed:?}"),
    );
}

/// Z is contained in the singular locus: every Jacobian generator lies in
/// the radical of Z + I, across the acceptance corpus.
#[test]
fn invariant_z_inside_singular_locus() {
    let corpus: Vec<(u32, Vec<&str>, Vec<&str>)> = vec![
        (2, vec!["x", "y"], vec!["x"]),
        (2, vec!["x", "y"], vec!["y^2 + x^3"]),
        (2, vec!["x", "y"], vec!["x*y"]),
        (7, vec!["x", "y", "z"], vec!["x^3 + y^3 + z^3"]),
        (2, vec!["x", "y", "u", "v"], vec!["x*u", "x*v", "y*u", "y*v"]),
    ];
    for (p, vars, gens) in corpus {
        let ctx = ring(p, &vars);
        let i = ideal(&ctx, &gens);
        let result = global_pti_cm(&i, None).unwrap();
        let z_plus_i = ideal_sum(&result.z, &i);
        let n = ctx.nvars();
        let h = (n as i64 - krull_dim(&i).unwrap()) as usize;
        let gen_polys: Vec<Polynomial> = gens.iter().map(|s| poly(&ctx, s)).collect();
        for minor in jacobian_minors(&ctx, &gen_polys, h) {
            assert!(
                radical_membership(&minor, &z_plus_i).unwrap(),
                "p={p}, I={gens:?}: minor {minor} escapes the radical of Z + I"
            );
        }
    }
    pass("invariant", "V(Z + I) inside the singular locus on the corpus");
}

/// CM consistency: when the non-CM locus is trivial the sandwich collapses.
#[test]
fn invariant_cm_consistency() {
    let corpus: Vec<(u32, Vec<&str>, Vec<&str>)> = vec![
        (2, vec!["x", "y"], vec!["x"]),
        (2, vec!["x", "y"], vec!["y^2 + x^3"]),
        (2, vec!["x", "y"], vec!["x*y"]),
        (7, vec!["x", "y", "z"], vec!["x^3 + y^3 + z^3"]),
        (3, vec!["x", "y"], vec!["x^2 + y^2"]),
    ];
    for (p, vars, gens) in corpus {
        let ctx = ring(p, &vars);
        let i = ideal(&ctx, &gens);
        if non_cm_locus(&i).unwrap().contains_unit().unwrap() {
            let s = pti_sandwich(&i, None).unwrap();
            assert!(
                module_equal(&s.lower, &s.upper).unwrap(),
                "CM input {gens:?} must collapse the sandwich"
            );
        }
    }
    pass("invariant", "CM inputs collapse the sandwich");
}
