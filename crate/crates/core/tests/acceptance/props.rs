//! Criterion 7: seeded property suites, each run on at least 200 random
//! instances over p in {2, 3, 5}, up to 3 variables, degree <= 4 and e <= 2.
//! Base seeds are recorded in the test names.

use std::sync::Arc;

use charp::frobenius::{bracket_power_matrix, bracket_power_submodule, fe_root, star_closure};
use charp::fsing::hsl_chain;
use charp::groebner::{
    intersect, krull_dim, membership, module_equal, normal_form, syzygy_matrix, GroebnerBasis,
    SubmodulePresentation,
};
use charp::homology::{free_resolution, induced_frobenius_matrix, verify_well_defined};
use charp::oracle::{brute_intersect, dense_fe_root, dense_kernel_elements, InstanceSpec};
use charp::ring::{ModuleVector, PolyMatrix, Polynomial, RingCtx};
use rand_chacha::ChaCha8Rng;

use crate::support::{instance_stream, pass, strip_constant};

fn contains(outer: &SubmodulePresentation, inner: &SubmodulePresentation) -> bool {
    inner
        .generator_vectors()
        .iter()
        .all(|g| membership(g, outer).unwrap())
}

fn sum(a: &SubmodulePresentation, b: &SubmodulePresentation) -> SubmodulePresentation {
    let mut gens = a.generator_vectors();
    gens.extend(b.generator_vectors());
    SubmodulePresentation::from_vectors(a.ctx(), a.ambient_rank(), &gens)
}

fn random_square_matrix(
    spec: &InstanceSpec,
    ctx: &Arc<RingCtx>,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> PolyMatrix {
    let mut u = PolyMatrix::zero(ctx, rank, rank);
    for r in 0..rank {
        for c in 0..rank {
            *u.entry_mut(r, c) = spec.random_polynomial(ctx, rng);
        }
    }
    u
}

fn random_proper_ideal(
    spec: &InstanceSpec,
    ctx: &Arc<RingCtx>,
    rng: &mut ChaCha8Rng,
) -> SubmodulePresentation {
    let gens: Vec<Polynomial> = (0..spec.generator_count)
        .map(|_| strip_constant(&spec.random_polynomial(ctx, rng)))
        .collect();
    SubmodulePresentation::ideal(ctx, gens)
}

#[test]
fn criterion_7_fe_root_adjunction_seed_0xa110() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for (i, spec) in instance_stream(0xa110 + rank as u64 * 1000, 105, rank)
            .iter()
            .enumerate()
        {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let k = spec.random_submodule(&ctx, &mut rng);
            let l = spec.random_submodule(&ctx, &mut rng);
            let e = 1 + (i as u32 % 2);
            let root = fe_root(&k, e).unwrap();
            let lhs = contains(&l, &root);
            let rhs = contains(&bracket_power_submodule(&l, e).unwrap().with_gb().unwrap(), &k);
            assert_eq!(
                lhs, rhs,
                "adjunction failed: p={}, n={}, rank={rank}, e={e}, seed={}",
                spec.p, spec.n, spec.seed
            );
            // the defining containment of the root itself
            assert!(contains(
                &bracket_power_submodule(&root, e).unwrap().with_gb().unwrap(),
                &k
            ));
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass("criterion 7a", &format!("I_e adjunction on {checked} instances"));
}

#[test]
fn criterion_7_fe_root_roundtrip_seed_0xb220() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for (i, spec) in instance_stream(0xb220 + rank as u64 * 1000, 105, rank)
            .iter()
            .enumerate()
        {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let k = spec.random_submodule(&ctx, &mut rng);
            let e = 1 + (i as u32 % 2);
            let bracket = bracket_power_submodule(&k, e).unwrap();
            let back = fe_root(&bracket, e).unwrap();
            assert!(
                module_equal(&back, &k).unwrap(),
                "roundtrip failed: p={}, rank={rank}, e={e}, seed={}",
                spec.p,
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass("criterion 7b", &format!("I_e roundtrip on {checked} instances"));
}

#[test]
fn criterion_7_fe_root_additivity_seed_0xc330() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for (i, spec) in instance_stream(0xc330 + rank as u64 * 1000, 105, rank)
            .iter()
            .enumerate()
        {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let k1 = spec.random_submodule(&ctx, &mut rng);
            let k2 = spec.random_submodule(&ctx, &mut rng);
            let e = 1 + (i as u32 % 2);
            let joint = fe_root(&sum(&k1, &k2), e).unwrap();
            let split = sum(&fe_root(&k1, e).unwrap(), &fe_root(&k2, e).unwrap());
            assert!(
                module_equal(&joint, &split).unwrap(),
                "additivity failed: p={}, rank={rank}, e={e}, seed={}",
                spec.p,
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass("criterion 7c", &format!("I_e additivity on {checked} instances"));
}

#[test]
fn criterion_7_fe_root_composition_seed_0xd440() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for spec in instance_stream(0xd440 + rank as u64 * 1000, 105, rank) {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let k = spec.random_submodule(&ctx, &mut rng);
            let nested = fe_root(&fe_root(&k, 1).unwrap(), 1).unwrap();
            let direct = fe_root(&k, 2).unwrap();
            assert!(
                module_equal(&nested, &direct).unwrap(),
                "composition failed: p={}, rank={rank}, seed={}",
                spec.p,
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7d",
        &format!("I_1 of I_1 equals I_2 on {checked} instances"),
    );
}

#[test]
fn criterion_7_star_closure_properties_seed_0xe550() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for spec in instance_stream(0xe550 + rank as u64 * 1000, 105, rank) {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let v = spec.random_submodule(&ctx, &mut rng);
            let u = random_square_matrix(&spec, &ctx, rank, &mut rng);
            let star = star_closure(&v, &u, 1).unwrap();

            // containment
            assert!(contains(&star, &v), "V inside V*: seed={}", spec.seed);
            // stability
            let bracket = bracket_power_submodule(&star, 1).unwrap().with_gb().unwrap();
            for g in star.generator_vectors() {
                assert!(
                    membership(&u.mul_vector(&g), &bracket).unwrap(),
                    "U V* inside (V*)^[p]: seed={}",
                    spec.seed
                );
            }
            // idempotence
            let again = star_closure(&star, &u, 1).unwrap();
            assert!(
                module_equal(&again, &star).unwrap(),
                "idempotence: seed={}",
                spec.seed
            );
            // already-stable inputs are fixed points
            let v_bracket = bracket_power_submodule(&v, 1).unwrap().with_gb().unwrap();
            let v_stable = v
                .generator_vectors()
                .iter()
                .all(|g| membership(&u.mul_vector(g), &v_bracket).unwrap());
            if v_stable {
                assert!(
                    module_equal(&star, &v.canonicalize().unwrap()).unwrap(),
                    "stable V must be its own closure: seed={}",
                    spec.seed
                );
            }
            // minimality and monotonicity against a stable overmodule
            let extra = spec.random_vector(&ctx, &mut rng);
            let bigger = sum(&v, &SubmodulePresentation::from_vectors(&ctx, rank, &[extra]));
            let w = star_closure(&bigger, &u, 1).unwrap();
            assert!(
                contains(&w, &star),
                "minimality against a larger stable candidate: seed={}",
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7e",
        &format!("star-closure properties on {checked} instances"),
    );
}

fn check_buchberger_criterion(gb: &GroebnerBasis) {
    let ctx = gb.ctx().clone();
    let module = gb.order().module;
    let elems = gb.elements();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (pi, ti) = elems[i].leading(&ctx, module).unwrap();
            let (pj, tj) = elems[j].leading(&ctx, module).unwrap();
            if pi != pj {
                continue;
            }
            let lcm = ti.mono.lcm(&tj.mono);
            let s = elems[i]
                .mul_term(ctx.f_inv(ti.coeff), &ti.mono.quotient_into(&lcm))
                .sub(&elems[j].mul_term(ctx.f_inv(tj.coeff), &tj.mono.quotient_into(&lcm)));
            assert!(
                normal_form(&s, gb).unwrap().is_zero(),
                "S-vector of elements {i}, {j} does not reduce to zero"
            );
        }
    }
}

#[test]
fn criterion_7_buchberger_and_nf_seed_0xf660() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for spec in instance_stream(0xf660 + rank as u64 * 1000, 105, rank) {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let w = spec.random_submodule(&ctx, &mut rng).with_gb().unwrap();
            let gb = w.gb().unwrap();
            check_buchberger_criterion(&gb);
            // NF soundness: v - NF(v) lies in the module
            let v = spec.random_vector(&ctx, &mut rng);
            let nf = normal_form(&v, &gb).unwrap();
            assert!(
                membership(&v.sub(&nf), &w).unwrap(),
                "NF soundness: seed={}",
                spec.seed
            );
            // members reduce to zero
            let inside = w
                .generator_vectors()
                .first()
                .map(|g| g.scale_poly(&spec.random_polynomial(&ctx, &mut rng)));
            if let Some(inside) = inside {
                assert!(normal_form(&inside, &gb).unwrap().is_zero());
            }
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7f",
        &format!("Buchberger criterion and NF soundness on {checked} instances"),
    );
}

#[test]
fn criterion_7_resolution_and_syzygy_seed_0x0770() {
    let mut checked = 0;
    for spec in instance_stream(0x0770, 210, 1) {
        let ctx = spec.ring();
        let mut rng = spec.rng();
        let ideal = random_proper_ideal(&spec, &ctx, &mut rng);
        let res = free_resolution(&ideal).unwrap();
        res.validate().unwrap();

        // syzygy exactness on the first differential
        let d1 = res.differential(1);
        if d1.cols() > 0 {
            let syz = syzygy_matrix(d1).unwrap();
            assert!(d1.matmul(&syz).is_zero(), "M Syz(M) = 0: seed={}", spec.seed);
            if syz.cols() > 0 {
                // random combinations of syzygy columns are killed by M
                let combo = syz.mul_vector(&ModuleVector::from_components(
                    &ctx,
                    (0..syz.cols())
                        .map(|_| spec.random_polynomial(&ctx, &mut rng))
                        .collect(),
                ));
                assert!(d1.mul_vector(&combo).is_zero());
            }
            // completeness against dense kernel elements
            if let Ok(kernel) = dense_kernel_elements(d1, 2) {
                let image = SubmodulePresentation::new(syz.clone()).with_gb().unwrap();
                for w in kernel {
                    assert!(
                        membership(&w, &image).unwrap(),
                        "dense kernel element escapes Image Syz: seed={}",
                        spec.seed
                    );
                }
            }
        }
        checked += 1;
    }
    assert!(checked >= 200);
    pass(
        "criterion 7g",
        &format!("resolution exactness and syzygy completeness on {checked} instances"),
    );
}

#[test]
fn criterion_7_frobenius_action_seed_0x1880() {
    let mut checked = 0;
    for spec in instance_stream(0x1880, 210, 1) {
        let ctx = spec.ring();
        let mut rng = spec.rng();
        let ideal = random_proper_ideal(&spec, &ctx, &mut rng);
        let n = ctx.nvars();
        let h = (n as i64 - krull_dim(&ideal).unwrap()) as usize;
        let one_step = induced_frobenius_matrix(&ideal, h, 1).unwrap();
        verify_well_defined(&one_step).unwrap();
        let two_step = induced_frobenius_matrix(&ideal, h, 2).unwrap();
        verify_well_defined(&two_step).unwrap();
        // e-step product consistency: U_2 and U^[p] U present the same map
        let product = bracket_power_matrix(&one_step.u, 1)
            .unwrap()
            .matmul(&one_step.u);
        let diff = two_step.u.sub(&product);
        let bracket2 = SubmodulePresentation::new(
            bracket_power_matrix(&two_step.a, 2).unwrap(),
        )
        .with_gb()
        .unwrap();
        for col in diff.columns() {
            assert!(
                membership(&col, &bracket2).unwrap(),
                "difference columns must die in Coker A^[p^2]: seed={}",
                spec.seed
            );
        }
        for col in diff.matmul(&two_step.a).columns() {
            assert!(
                membership(&col, &bracket2).unwrap(),
                "difference must map Image A into Image A^[p^2]: seed={}",
                spec.seed
            );
        }
        checked += 1;
    }
    assert!(checked >= 200);
    pass(
        "criterion 7h",
        &format!("Frobenius action well-definedness and e-step consistency on {checked} instances"),
    );
}

#[test]
fn criterion_7_hsl_chains_seed_0x2990() {
    let mut checked = 0;
    for spec in instance_stream(0x2990, 210, 1) {
        let ctx = spec.ring();
        let mut rng = spec.rng();
        let ideal = random_proper_ideal(&spec, &ctx, &mut rng);
        let n = ctx.nvars();
        let h = (n as i64 - krull_dim(&ideal).unwrap()) as usize;
        // hsl_chain internally verifies persistence one step beyond
        let report = hsl_chain(&ideal, h, 10).unwrap();
        let eta = report.eta.expect("chains must stabilize");
        assert_eq!(report.chain.len(), eta + 2);
        for w in report.chain.windows(2) {
            assert!(
                contains(&w[0], &w[1]),
                "chain must descend: seed={}",
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7i",
        &format!("HSL chains descend and stabilize persistently ({checked} steps checked)"),
    );
}

#[test]
fn criterion_7_oracle_fe_root_agreement_seed_0x3aa0() {
    // (p, e, max_degree) kept within the dense feasibility bound
    let combos: [(u32, u32, u32); 5] = [(2, 1, 4), (2, 2, 4), (3, 1, 4), (5, 1, 3), (3, 2, 1)];
    let mut checked = 0;
    for rank in [1usize, 2] {
        for i in 0..105usize {
            let (p, e, max_degree) = combos[i % combos.len()];
            let spec = InstanceSpec {
                p,
                n: 1 + i % 3,
                max_degree,
                ambient_rank: rank,
                generator_count: 1 + i % 2,
                seed: 0x3aa0 + rank as u64 * 1000 + i as u64,
            };
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let k = spec.random_submodule(&ctx, &mut rng);
            let fast = fe_root(&k, e).unwrap();
            let slow = dense_fe_root(&k, e).unwrap();
            assert!(
                module_equal(&fast, &slow).unwrap(),
                "fe_root disagreement: p={p}, e={e}, rank={rank}, seed={}",
                spec.seed
            );
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7j",
        &format!("dense and sparse Frobenius roots agree on {checked} instances"),
    );
}

fn random_homogeneous_submodule(
    spec: &InstanceSpec,
    ctx: &Arc<RingCtx>,
    rng: &mut ChaCha8Rng,
) -> SubmodulePresentation {
    let gens: Vec<ModuleVector> = (0..spec.generator_count)
        .map(|_| {
            let degree = 1 + spec.seed as u32 % 2;
            let comps: Vec<Polynomial> = (0..spec.ambient_rank)
                .map(|_| spec.random_form(ctx, degree, rng))
                .collect();
            ModuleVector::from_components(ctx, comps)
        })
        .collect();
    SubmodulePresentation::from_vectors(ctx, spec.ambient_rank, &gens)
}

#[test]
fn criterion_7_oracle_intersect_agreement_seed_0x4bb0() {
    let mut checked = 0;
    for rank in [1usize, 2] {
        for spec in instance_stream(0x4bb0 + rank as u64 * 1000, 105, rank) {
            let ctx = spec.ring();
            let mut rng = spec.rng();
            let w1 = random_homogeneous_submodule(&spec, &ctx, &mut rng);
            let w2 = random_homogeneous_submodule(&spec, &ctx, &mut rng);
            let fast = intersect(&w1, &w2).unwrap();
            let fast_degree = fast
                .generator_vectors()
                .iter()
                .flat_map(|v| v.components().iter().filter_map(|f| f.total_degree()))
                .max()
                .unwrap_or(0) as u32;
            let fallback = 2 * (1 + spec.seed as u32 % 2);
            let bound = fast_degree.max(fallback);
            if bound <= 6 {
                let slow = brute_intersect(&w1, &w2, bound).unwrap();
                assert!(
                    module_equal(&fast, &slow).unwrap(),
                    "intersection disagreement: p={}, rank={rank}, bound={bound}, seed={}",
                    spec.p,
                    spec.seed
                );
            } else {
                // out of dense range: still require the sound direction
                let slow = brute_intersect(&w1, &w2, 6).unwrap();
                assert!(contains(&fast, &slow));
            }
            checked += 1;
        }
    }
    assert!(checked >= 200);
    pass(
        "criterion 7k",
        &format!("Groebner and dense intersections agree on {checked} instances"),
    );
}

/// Ring axioms and the Frobenius homomorphism law on randomized samples, and
/// canonical-form stability of the text grammar.
#[test]
fn invariant_ring_axioms_seed_0x5cc0() {
    use charp::ring::{parse_polynomial, poly_add, poly_mul};
    let mut triples = 0;
    for spec in instance_stream(0x5cc0, 120, 1) {
        let ctx = spec.ring();
        let mut rng = spec.rng();
        for _ in 0..10 {
            let f = spec.random_polynomial(&ctx, &mut rng);
            let g = spec.random_polynomial(&ctx, &mut rng);
            let h = spec.random_polynomial(&ctx, &mut rng);
            // associativity, commutativity, distributivity
            assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            assert_eq!(poly_add(&f, &g).unwrap(), poly_add(&g, &f).unwrap());
            assert_eq!(poly_mul(&f, &g).unwrap(), poly_mul(&g, &f).unwrap());
            assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            // Frobenius is additive: (f + g)^p = f^p + g^p
            let p = ctx.p();
            assert_eq!(f.add(&g).pow(p), f.pow(p).add(&g.pow(p)));
            // canonical form survives printing
            let printed = f.to_string();
            assert_eq!(parse_polynomial(&ctx, &printed).unwrap(), f);
            triples += 1;
        }
    }
    assert!(triples >= 1000);
    pass(
        "invariant",
        &format!("ring axioms and Frobenius additivity on {triples} random triples"),
    );
}

/// Presentation invariance: permuted generators, a redundant extra generator
/// and the lex order all leave annihilators, HSL data and tau unchanged.
#[test]
fn invariant_presentation_independence() {
    use charp::fsing::global_pti_cm;
    use charp::groebner::ann_cokernel;
    use charp::homology::ext_presentation;
    use charp::ring::{parse_polynomial, MonomialOrder, OrderSpec};

    let samples: Vec<(u32, Vec<&str>, Vec<&str>)> = vec![
        (2, vec!["x", "y"], vec!["x"]),
        (2, vec!["x", "y"], vec!["y^2 + x^3"]),
        (2, vec!["x", "y"], vec!["x*y"]),
        (2, vec!["x", "y"], vec!["x^2", "x*y"]),
        (2, vec!["x", "y"], vec!["x", "y"]),
        (3, vec!["x", "y"], vec!["x^2 + y^2"]),
        (3, vec!["x", "y"], vec!["x^3 + y^2", "x*y"]),
        (5, vec!["x", "y"], vec!["x^2 + 4*y^3"]),
        (2, vec!["x", "y", "z"], vec!["x*y", "y*z"]),
        (2, vec!["x", "y", "z"], vec!["x^2 + y*z"]),
        (2, vec!["x", "y", "u", "v"], vec!["x*u", "x*v", "y*u", "y*v"]),
    ];
    for (p, vars, gens) in &samples {
        let ctx = RingCtx::new(*p, vars, OrderSpec::default()).unwrap();
        let parse =
            |ctx: &Arc<RingCtx>, ss: &[&str]| -> Vec<Polynomial> {
                ss.iter().map(|s| parse_polynomial(ctx, s).unwrap()).collect()
            };
        let base_polys = parse(&ctx, gens);
        let base = SubmodulePresentation::ideal(&ctx, base_polys.clone());

        // permuted generators and a redundant extra generator
        let mut permuted_polys = base_polys.clone();
        permuted_polys.reverse();
        let permuted = SubmodulePresentation::ideal(&ctx, permuted_polys);
        let mut padded_polys = base_polys.clone();
        padded_polys.push(base_polys[0].mul(&base_polys[base_polys.len() - 1]));
        let padded = SubmodulePresentation::ideal(&ctx, padded_polys);

        let n = ctx.nvars();
        for variant in [&permuted, &padded] {
            for i in 0..=n {
                let a1 = ext_presentation(&base, i).unwrap();
                let a2 = ext_presentation(variant, i).unwrap();
                assert!(
                    module_equal(&ann_cokernel(&a1).unwrap(), &ann_cokernel(&a2).unwrap())
                        .unwrap(),
                    "Ext^{i} annihilator changed for {gens:?}"
                );
            }
            let r1 = hsl_chain(&base, n - krull_dim(&base).unwrap() as usize, 8).unwrap();
            let r2 = hsl_chain(variant, n - krull_dim(variant).unwrap() as usize, 8).unwrap();
            assert_eq!(r1.eta, r2.eta, "eta changed for {gens:?}");
            for (l1, l2) in r1.loci.iter().zip(r2.loci.iter()) {
                assert!(module_equal(l1, l2).unwrap(), "locus changed for {gens:?}");
            }
            let z1 = global_pti_cm(&base, None);
            let z2 = global_pti_cm(variant, None);
            match (z1, z2) {
                (Ok(z1), Ok(z2)) => {
                    assert!(module_equal(&z1.z, &z2.z).unwrap(), "tau changed for {gens:?}")
                }
                (Err(charp::Error::NoTestElement), Err(charp::Error::NoTestElement)) => {}
                other => panic!("tau computability changed for {gens:?}: {other:?}"),
            }
        }

        // order variation: recompute everything under lex and map back
        let lex_ctx = ctx.with_order(OrderSpec {
            monomial: MonomialOrder::Lex,
            ..OrderSpec::default()
        });
        let lex_ideal = SubmodulePresentation::ideal(
            &lex_ctx,
            base_polys.iter().map(|f| f.reorder_to(&lex_ctx)).collect(),
        );
        if let (Ok(z), Ok(z_lex)) = (global_pti_cm(&base, None), global_pti_cm(&lex_ideal, None))
        {
            let z_back = SubmodulePresentation::ideal(
                &ctx,
                z_lex
                    .z
                    .generator_vectors()
                    .iter()
                    .map(|v| v.component(0).reorder_to(&ctx))
                    .collect(),
            );
            assert!(
                module_equal(&z.z, &z_back).unwrap(),
                "tau depends on the order for {gens:?}"
            );
        }
    }
    pass(
        "invariant",
        &format!(
            "presentation independence on {} sample ideals (permutation, redundancy, order)",
            samples.len()
        ),
    );
}
