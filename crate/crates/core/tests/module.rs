mod common;

use frob_core::algebra::{frobenius_map, AlgRef, Algebra};
use frob_core::bimodule::Bimodule;
use frob_core::exactla::{invert, rank, Matrix, Subspace};
use frob_core::fixtures;
use frob_core::module::{
    hom_space, injective_decompose, injective_hull, is_projective, iso_test, IsoOutcome, IsoSearch,
    Representation, StandardCatalog,
};
use frob_core::FrobError;
use proptest::prelude::*;
use rand::Rng;

fn lt2() -> AlgRef {
    Algebra::lower_triangular(fixtures::field(5), 2).unwrap()
}

fn dims(v: &[Representation]) -> Vec<usize> {
    v.iter().map(|m| m.dim()).collect()
}

#[test]
fn triangular_catalog() {
    let cat = StandardCatalog::new(&lt2()).unwrap();
    assert_eq!(dims(&cat.simples), [1, 1]);
    assert_eq!(dims(&cat.projectives), [1, 2]);
    assert_eq!(dims(&cat.injectives), [2, 1]);
    assert_eq!(cat.endo_dims, [1, 1]);
    for x in 0..2 {
        assert!(cat.simples[x].is_hom(&cat.injectives[x], &cat.socles[x]));
        assert!(cat.projectives[x].is_hom(&cat.simples[x], &cat.tops[x]));
        assert_eq!(rank(&cat.socles[x]), 1);
    }
}

#[test]
fn catalog_of_fields_and_products() {
    let k = Algebra::ground(fixtures::field(5)).unwrap();
    let cat = StandardCatalog::new(&k).unwrap();
    assert_eq!(cat.len(), 1);
    assert_eq!(cat.simples[0].dim(), 1);
    let kk = Algebra::product(&k, &k).unwrap();
    let cat = StandardCatalog::new(&kk).unwrap();
    for x in 0..2 {
        assert!(iso_test(&cat.simples[x], &cat.injectives[x], &IsoSearch::default()).unwrap().is_iso());
    }
    let f49 = StandardCatalog::new(&fixtures::f49().unwrap()).unwrap();
    assert_eq!(f49.simples[0].dim(), 2);
    assert_eq!(f49.endo_dims, [2]);
}

#[test]
fn hom_dimensions() {
    let a = lt2();
    let cat = StandardCatalog::new(&a).unwrap();
    assert_eq!(hom_space(&cat.simples[0], &cat.injectives[0]).unwrap().len(), 1);
    assert_eq!(hom_space(&cat.simples[0], &cat.simples[1]).unwrap().len(), 0);
    for m in cat.injectives.iter().chain(&cat.projectives) {
        assert_eq!(hom_space(&Representation::regular(a.clone()), m).unwrap().len(), m.dim());
    }
}

#[test]
fn structure_series_of_an_injective() {
    let cat = StandardCatalog::new(&lt2()).unwrap();
    let e1 = &cat.injectives[0];
    let s = e1.structure_series().unwrap();
    assert_eq!(s.factors, [1, 1]);
    assert_eq!(s.socle_series, [1, 2]);
    assert_eq!(s.socle_layers[0], [1, 0]);
    assert_eq!(e1.socle().dim(), 1);
    let semisimple = cat.simples[0].direct_sum(&cat.simples[1]);
    let s = semisimple.structure_series().unwrap();
    assert_eq!(s.socle_series.len(), 1);
    assert_eq!(s.radical_series, [2, 0]);
}

#[test]
fn injective_hulls() {
    let cat = StandardCatalog::new(&lt2()).unwrap();
    let h = injective_hull(&cat, &cat.simples[0]).unwrap();
    assert_eq!(h.multiplicities, [1, 0]);
    assert!(iso_test(&h.hull, &cat.injectives[0], &IsoSearch::default()).unwrap().is_iso());
    assert!(cat.simples[0].is_hom(&h.hull, &h.embed));

    let path = fixtures::linear_quiver(7, 3).unwrap();
    let cat = StandardCatalog::new(&path).unwrap();
    let p2 = &cat.projectives[1];
    let h = injective_hull(&cat, p2).unwrap();
    assert_eq!(rank(&h.embed), p2.dim());
    assert!(p2.is_hom(&h.hull, &h.embed));
}

#[test]
fn decomposition_counts_summands() {
    let a = lt2();
    let cat = StandardCatalog::new(&a).unwrap();
    let (e1, e2) = (&cat.injectives[0], &cat.injectives[1]);
    let e = Representation::direct_sum_all(a, &[e1.clone(), e1.clone(), e2.clone()]);
    let d = injective_decompose(&cat, &e).unwrap();
    assert_eq!(d.multiplicities, [2, 1]);
    assert!(e.is_hom(&d.target, &d.iso));
    assert!(invert(&d.iso).is_ok());
}

#[test]
fn isomorphism_tests() {
    let k = fixtures::f49().unwrap();
    let twisted = Bimodule::twist(k.clone(), &frobenius_map(&k)).unwrap();
    let cfg = IsoSearch::default();
    let out = iso_test(&twisted.right_module(), &Representation::regular(k), &cfg).unwrap();
    assert!(out.is_iso());

    let cat = StandardCatalog::new(&lt2()).unwrap();
    let out = iso_test(&cat.simples[0], &cat.simples[1], &cfg).unwrap();
    assert!(matches!(out, IsoOutcome::NotIsomorphic(_)));
}

#[test]
fn projectivity() {
    let cat = StandardCatalog::new(&lt2()).unwrap();
    let p2 = &cat.projectives[1];
    let s = is_projective(p2).unwrap().expect("P2 is projective");
    assert!(s.section.mul(&s.cover).is_identity());
    assert!(is_projective(&cat.simples[1]).unwrap().is_none());
    assert!(is_projective(&Representation::regular(lt2())).unwrap().is_some());
}

#[test]
fn torsion_of_an_injective() {
    let cat = StandardCatalog::new(&lt2()).unwrap();
    let e1 = &cat.injectives[0];
    let (t, inc) = e1.torsion_submodule(&[0]).unwrap();
    assert_eq!(t.dim(), 1);
    assert!(Subspace::span(&inc).equals(&e1.socle()));
    assert_eq!(e1.torsion_submodule(&[0, 1]).unwrap().0.dim(), 2);
    assert_eq!(e1.torsion_submodule(&[]).unwrap().0.dim(), 0);
    assert_eq!(e1.torsion_submodule(&[1]).unwrap().0.dim(), 0);
}

#[test]
fn perturbed_action_is_rejected() {
    let a = lt2();
    let m = Representation::regular(a.clone());
    assert!(m.validate().ok());
    let mut action = m.action().to_vec();
    let mut bad = action[1].clone();
    bad.set(0, 0, (bad.get(0, 0) + 1) % 5);
    action[1] = bad;
    assert!(matches!(
        Representation::new(a, m.dim(), action),
        Err(FrobError::InvalidRepresentation(_))
    ));
}

/// A random module over a random pool algebra: a catalog member, a sum, or a quotient of one.
fn random_module(seed: u64) -> (String, Representation) {
    let mut r = common::rng(seed);
    let p = common::PRIMES[r.gen_range(0..3)];
    let (name, a) = common::random_algebra(p, &mut r);
    let cat = StandardCatalog::new(&a).unwrap();
    let all: Vec<Representation> = cat
        .simples
        .iter()
        .chain(&cat.projectives)
        .chain(&cat.injectives)
        .cloned()
        .collect();
    let parts: Vec<Representation> = (0..r.gen_range(1..=3))
        .map(|_| all[r.gen_range(0..all.len())].clone())
        .collect();
    let mut m = Representation::direct_sum_all(a.clone(), &parts);
    if r.gen_bool(0.3) && m.dim() > 0 {
        let v: Vec<u32> = (0..m.dim()).map(|_| r.gen_range(0..p as u32)).collect();
        let sub = m.generated(&Matrix::row_vector(m.field(), &v));
        m = m.quotient(&sub).0;
    }
    (format!("seed {seed} over {name}"), m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn factors_are_additive(seed in any::<u64>()) {
        let (label, m) = random_module(seed);
        let cat = StandardCatalog::new(m.algebra()).unwrap();
        let total = m.composition_factors().unwrap();
        let weighted: usize = total.iter().zip(&cat.simples).map(|(n, s)| n * s.dim()).sum();
        prop_assert_eq!(weighted, m.dim(), "{}", label);
        let sub = m.socle();
        let (s, _) = m.submodule_on(&sub).unwrap();
        let (q, _) = m.quotient(&sub);
        let sum: Vec<usize> = s.composition_factors().unwrap().iter()
            .zip(q.composition_factors().unwrap())
            .map(|(a, b)| a + b)
            .collect();
        prop_assert_eq!(sum, total, "{}", label);
    }

    #[test]
    fn hulls_are_essential(seed in any::<u64>()) {
        let (label, m) = random_module(seed);
        let cat = StandardCatalog::new(m.algebra()).unwrap();
        let h = injective_hull(&cat, &m).unwrap();
        prop_assert!(m.is_hom(&h.hull, &h.embed), "{}", label);
        prop_assert_eq!(rank(&h.embed), m.dim());
        // the socle of the hull sits inside the image
        let image = Subspace::span(&h.embed);
        prop_assert!(h.hull.socle().intersect(&image).equals(&h.hull.socle()), "{}", label);
        let socle_dim: usize = h.multiplicities.iter().zip(&cat.simples).map(|(n, s)| n * s.dim()).sum();
        prop_assert_eq!(socle_dim, m.socle().dim());
    }

    #[test]
    fn torsion_factors_lie_in_the_killed_set(seed in any::<u64>(), mask in 0u32..8) {
        let (label, m) = random_module(seed);
        let n = m.algebra().num_points();
        let killed: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let (t, inc) = m.torsion_submodule(&killed).unwrap();
        prop_assert!(t.is_hom(&m, &inc));
        for x in t.support().unwrap() {
            prop_assert!(killed.contains(&x), "{}", label);
        }
        // the quotient has no killed simple in its socle
        let (q, _) = m.quotient(&Subspace::span(&inc));
        let qt = q.torsion_submodule(&killed).unwrap().0;
        prop_assert_eq!(qt.dim(), 0, "{}", label);
    }

    #[test]
    fn iso_certificates_are_invertible_intertwiners(seed in any::<u64>()) {
        let (label, m) = random_module(seed);
        let mut r = common::rng(seed ^ 0xabc);
        let g = common::random_invertible(m.field(), m.dim(), &mut r);
        let ginv = invert(&g).unwrap();
        let action: Vec<Matrix> = m.action().iter().map(|a| ginv.mul(a).mul(&g)).collect();
        let n = Representation::new(m.algebra().clone(), m.dim(), action).unwrap();
        let cert = iso_test(&m, &n, &IsoSearch::with_seed(seed)).unwrap().certificate();
        let cert = cert.unwrap_or_else(|| panic!("{label}: conjugate not recognised"));
        prop_assert!(m.is_hom(&n, &cert));
        prop_assert!(invert(&cert).is_ok());
    }
}
