mod common;

use frob_core::algebra::{AlgRef, Algebra};
use frob_core::bimodule::{frobenius_check, AdjointPair, Bimodule};
use frob_core::exactla::Matrix;
use frob_core::fixtures;
use frob_core::frobanalysis::{
    category_decomposition_check, classify, constant_rank_partition, equivalence_test, glue,
    injective_tripartition, rank_report, restrict, support_map, GlueTask,
};
use frob_core::module::{IsoSearch, Representation, StandardCatalog};
use frob_core::spectrum::LocalizingSubcat;
use frob_core::FrobError;
use proptest::prelude::*;

fn cfg() -> IsoSearch {
    IsoSearch::default()
}

fn kk() -> AlgRef {
    let k = Algebra::ground(fixtures::field(5)).unwrap();
    Algebra::product(&k, &k).unwrap()
}

/// `S1 (x) S1 + (S2 (x) S2)^2` over `(k x k, k x k)`: rank one at the first point, two at the second.
fn mixed_rank() -> Bimodule {
    let a = kk();
    let f = a.field();
    let diag = |d: [i64; 3]| {
        Matrix::from_rows(f, &[vec![d[0], 0, 0], vec![0, d[1], 0], vec![0, 0, d[2]]], 3).unwrap()
    };
    let act = vec![diag([1, 0, 0]), diag([0, 1, 1])];
    Bimodule::new(a.clone(), a, 3, act.clone(), act).unwrap()
}

#[test]
fn triangular_ranks() {
    let pair = AdjointPair::new(&fixtures::triangular().unwrap()).unwrap();
    let r = rank_report(&pair).unwrap();
    assert_eq!(r.rrk, [[1], [1]]);
    assert_eq!(r.lrk, [[0, 1]]);
    assert_eq!(r.rho, [1, 1]);
    assert_eq!(r.lambda, [1]);
    // F kills S1, so only the second point is in the support
    assert_eq!(r.supp_f, [1]);
    assert_eq!(r.kernels.f, [0]);
    assert!(r.kernels.g.is_empty());
    assert!(r.decompositions_verified());
}

#[test]
fn triangular_support_map() {
    let pair = AdjointPair::new(&fixtures::triangular().unwrap()).unwrap();
    let s = support_map(&pair).unwrap();
    assert_eq!(s.map, [(1, 0, 1)]);
    assert!(s.homeomorphism && s.left_localizing && s.cross_check);
}

#[test]
fn morita_support_map_is_a_homeomorphism() {
    let pair = AdjointPair::new(&fixtures::morita(5, 2).unwrap()).unwrap();
    let s = support_map(&pair).unwrap();
    assert!(s.homeomorphism && s.left_localizing && s.cross_check);
}

#[test]
fn equivalences() {
    for m in [Bimodule::regular(fixtures::triangular_algebra()), fixtures::morita(5, 2).unwrap()] {
        let e = equivalence_test(&AdjointPair::new(&m).unwrap()).unwrap();
        assert!(e.equivalent);
        assert_eq!((e.unit_invertible, e.counit_invertible), (Some(true), Some(true)));
    }
    for m in [fixtures::triangular().unwrap(), fixtures::delta(5).unwrap(), mixed_rank()] {
        assert!(!equivalence_test(&AdjointPair::new(&m).unwrap()).unwrap().equivalent);
    }
}

#[test]
fn mixed_rank_partition() {
    let m = mixed_rank();
    let pair = AdjointPair::new(&m).unwrap();
    let r = rank_report(&pair).unwrap();
    assert_eq!(r.rrk, [[1, 0], [0, 2]]);
    assert_eq!(r.lambda, [1, 2]);
    let p = constant_rank_partition(&pair, &cfg()).unwrap();
    assert_eq!(p.lambdas, [1, 2]);
    assert_eq!(p.blocks.len(), 2);
    assert!(p.disjoint && p.cover);
    assert_eq!(p.decomposition, Some(true));
    for b in &p.blocks {
        assert!(b.frobenius && b.constant_rank);
    }
}

#[test]
fn restriction_of_the_mixed_bimodule() {
    let m = mixed_rank();
    let pair = AdjointPair::new(&m).unwrap();
    let u = LocalizingSubcat::new(m.right_algebra().clone(), &[0]).unwrap();
    let r = restrict(&pair, &u, &cfg()).unwrap();
    assert!(r.hypothesis && r.frobenius);
    assert_eq!(r.killed_a, [0]);
    assert_eq!(r.restricted_dim, 2);
}

#[test]
fn tripartition_of_a_cogenerator() {
    let a = kk();
    let cat = StandardCatalog::new(&a).unwrap();
    let t1 = LocalizingSubcat::new(a.clone(), &[0]).unwrap();
    let t2 = LocalizingSubcat::new(a.clone(), &[1]).unwrap();
    let e = Representation::direct_sum_all(a.clone(), &[cat.injectives[0].clone(), cat.injectives[1].clone(), cat.injectives[1].clone()]);
    let t = injective_tripartition(&cat, &e, &t1, &t2).unwrap();
    assert!(t.verified);
    let total: usize = t.parts.iter().map(|p| p.dim()).sum();
    assert_eq!(total, e.dim());
    assert!(matches!(
        injective_tripartition(&cat, &e, &t1, &t1),
        Err(FrobError::HypothesisFailure(_))
    ));

    // killing S1 over the triangular algebra is not envelope-closed
    let a = fixtures::triangular_algebra();
    let cat = StandardCatalog::new(&a).unwrap();
    let t1 = LocalizingSubcat::new(a.clone(), &[0]).unwrap();
    let t2 = LocalizingSubcat::new(a.clone(), &[1]).unwrap();
    let e = Representation::direct_sum_all(a, &cat.injectives);
    let err = injective_tripartition(&cat, &e, &t1, &t2).unwrap_err();
    assert!(err.to_string().contains("not closed under injective envelopes"), "{err}");
}

#[test]
fn glue_recovers_the_mixed_bimodule() {
    let m = mixed_rank();
    let task = GlueTask::from_global(&m, [vec![0], vec![1]]).unwrap();
    let out = glue(&task, &cfg()).unwrap();
    assert!(out.right_localizing);
    assert_eq!(out.restrictions_agree, [true, true]);
    assert!(out.bimodule.iso_test(&m, &cfg()).unwrap().is_iso());
}

#[test]
fn product_decomposes_but_triangular_does_not() {
    let a = kk();
    let parts = [
        LocalizingSubcat::new(a.clone(), &[0]).unwrap(),
        LocalizingSubcat::new(a.clone(), &[1]).unwrap(),
    ];
    assert!(category_decomposition_check(&a, &parts).unwrap().decomposes());
    let t = fixtures::triangular_algebra();
    let parts = [
        LocalizingSubcat::new(t.clone(), &[0]).unwrap(),
        LocalizingSubcat::new(t.clone(), &[1]).unwrap(),
    ];
    let d = category_decomposition_check(&t, &parts).unwrap();
    assert!(!d.decomposes());
    assert!(d.obstruction.is_some());
}

#[test]
fn classification_of_fixtures() {
    let pair = AdjointPair::new(&Bimodule::regular(fixtures::triangular_algebra())).unwrap();
    let c = classify(&pair, false).unwrap();
    assert!(c.faithful_f.holds && c.right_localizing.holds && c.left_localizing.holds);
    assert!(c.brute_force_agrees());
    let pair = AdjointPair::new(&mixed_rank()).unwrap();
    let c = classify(&pair, false).unwrap();
    assert!(c.centralizing.unwrap().holds);
    assert!(c.localizing.unwrap().holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kernel_of_fg_is_kernel_of_g(seed in 0u64..100_000) {
        let inst = common::random_instance(seed);
        let Ok(pair) = AdjointPair::new(&inst.bimodule) else { return Ok(()) };
        let r = rank_report(&pair).unwrap();
        prop_assert_eq!(&r.kernels.fg, &r.kernels.g, "{:?}", inst);
        prop_assert_eq!(&r.kernels.gf, &r.kernels.f, "{:?}", inst);
    }

    #[test]
    fn verdicts_are_consistent(seed in 0u64..100_000) {
        let inst = common::random_instance(seed);
        let Ok(cert) = frobenius_check(&inst.bimodule, &cfg()) else { return Ok(()) };
        let c = classify(&cert, false).unwrap();
        prop_assert!(c.brute_force_agrees(), "{:?}", inst);
        if let Some(v) = &c.centralizing {
            if v.holds {
                prop_assert!(c.dual_centralizing.as_ref().is_some_and(|d| d.holds), "{:?}", inst);
                if cert.bimodule.left_algebra().is_commutative() {
                    prop_assert!(c.localizing.as_ref().is_some_and(|l| l.holds), "{:?}", inst);
                }
            }
        }
        // a right-localizing pair has a well-defined support map
        if c.right_localizing.holds {
            let r = rank_report(&cert).unwrap();
            prop_assert!(r.f_well_defined, "{:?}", inst);
            prop_assert!(r.reciprocity_holds(), "{:?}", inst);
            let s = support_map(&cert).unwrap();
            prop_assert!(s.cross_check, "{:?}", inst);
        }
    }
}
