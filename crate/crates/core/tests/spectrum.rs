mod common;

use frob_core::algebra::Algebra;
use frob_core::bimodule::{AdjointPair, Functor};
use frob_core::fixtures;
use frob_core::module::{iso_test, IsoSearch, StandardCatalog};
use frob_core::spectrum::{gabriel_topology, lattice, locality_report, LocalizingSubcat};
use proptest::prelude::*;

#[test]
fn killed_sets_from_torsionfree_and_kernels() {
    let a = fixtures::triangular_algebra();
    let t = LocalizingSubcat::from_torsionfree(a.clone(), &[1]).unwrap();
    assert_eq!(t.killed, [0]);
    assert_eq!(t.surviving(), [1]);
    let pair = AdjointPair::new(&fixtures::triangular().unwrap()).unwrap();
    let k = LocalizingSubcat::from_kernel(&pair, Functor::F).unwrap();
    assert_eq!(k.killed, [0]);
}

#[test]
fn envelope_closure_on_the_triangular_algebra() {
    let a = fixtures::triangular_algebra();
    let cat = StandardCatalog::new(&a).unwrap();
    let c = LocalizingSubcat::new(a.clone(), &[1]).unwrap().closed_under_envelopes(&cat).unwrap();
    assert!(c.closed && c.witness.is_none());
    let c = LocalizingSubcat::new(a, &[0]).unwrap().closed_under_envelopes(&cat).unwrap();
    assert!(!c.closed);
    assert_eq!(c.witness, Some((0, 1)));
}

#[test]
fn triangular_lattice() {
    let a = fixtures::triangular_algebra();
    let t0 = LocalizingSubcat::new(a.clone(), &[0]).unwrap();
    let t1 = LocalizingSubcat::new(a, &[1]).unwrap();
    let l = lattice(&t0, &t1).unwrap();
    assert_eq!(l.gabriel_product_class, [0, 1]);
    assert_eq!(l.open_intersection, [0, 1]);
    assert!(l.open_union.is_empty());
    assert!(l.is_cover && l.is_disjoint);
    let l = lattice(&t0, &t0).unwrap();
    assert!(!l.is_cover && !l.is_disjoint);
}

#[test]
fn twisted_corner_is_the_field_of_order_49() {
    let a = fixtures::twisted_algebra().unwrap();
    let u = LocalizingSubcat::new(a, &[0]).unwrap().weakly_open().unwrap();
    let c = &u.corner.algebra;
    // a reduced commutative local algebra of dim 2 over F_7
    assert_eq!((c.field().p(), c.dim()), (7, 2));
    assert!(c.is_commutative());
    assert!(c.locality_report().is_local);
    assert_eq!(c.radical_space().unwrap().dim(), 0);
}

#[test]
fn triangular_open_subspace() {
    let a = fixtures::triangular_algebra();
    let u = LocalizingSubcat::new(a.clone(), &[0]).unwrap().weakly_open().unwrap();
    assert_eq!(u.corner.algebra.dim(), 1);
    assert!(u.pushforward_exact().unwrap());
    assert!(u.checks(&IsoSearch::default()).unwrap().all());

    let cat = StandardCatalog::new(&a).unwrap();
    let corner_cat = StandardCatalog::new(&u.corner.algebra).unwrap();
    assert_eq!(u.restrict(&cat.simples[0]).unwrap().dim(), 0);
    let r = u.restrict(&cat.injectives[1]).unwrap();
    assert!(iso_test(&r, &corner_cat.injectives[0], &IsoSearch::default()).unwrap().is_iso());
    // E_1 e_2 is one-dimensional
    assert_eq!(u.restrict(&cat.injectives[0]).unwrap().dim(), 1);
}

#[test]
fn topology_is_discrete() {
    let a = fixtures::triangular_algebra();
    let t = gabriel_topology(&a).unwrap();
    assert!(t.discrete);
    assert_eq!(t.closed_sets, 4);
    assert_eq!(t.injective_supports[0], [0, 1]);
    assert_eq!(t.injective_supports[1], [1]);
}

#[test]
fn locality_reports() {
    let k49 = fixtures::f49().unwrap();
    let l = locality_report(&k49).unwrap();
    assert!(l.is_local && l.cogenerates);
    let a = fixtures::triangular_algebra();
    let l = locality_report(&a).unwrap();
    assert!(!l.is_local && l.is_semilocal);
    assert_eq!(l.cogenerator_homs, [1, 1]);
    let k = Algebra::ground(fixtures::field(5)).unwrap();
    assert!(locality_report(&Algebra::product(&k, &k).unwrap()).unwrap().cogenerates);
}

fn algebra_and_sets() -> impl Strategy<Value = (u64, [u32; 3])> {
    (any::<u64>(), [any::<u32>(), any::<u32>(), any::<u32>()])
}

fn pick(seed: u64) -> frob_core::algebra::AlgRef {
    let mut r = common::rng(seed);
    let p = common::PRIMES[(seed % 3) as usize];
    common::random_algebra(p, &mut r).1
}

fn sub(a: &frob_core::algebra::AlgRef, mask: u32) -> LocalizingSubcat {
    let killed: Vec<usize> = (0..a.num_points()).filter(|i| mask >> i & 1 == 1).collect();
    LocalizingSubcat::new(a.clone(), &killed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn lattice_laws((seed, masks) in algebra_and_sets()) {
        let a = pick(seed);
        let [x, y, z] = masks.map(|m| sub(&a, m));
        let join = |s: &LocalizingSubcat, t: &LocalizingSubcat| {
            LocalizingSubcat::new(a.clone(), &lattice(s, t).unwrap().gabriel_product_class).unwrap()
        };
        prop_assert_eq!(lattice(&x, &y).unwrap(), lattice(&y, &x).unwrap());
        prop_assert_eq!(join(&x, &x).killed.clone(), x.killed.clone());
        prop_assert_eq!(join(&join(&x, &y), &z).killed.clone(), join(&x, &join(&y, &z)).killed.clone());
        let l = lattice(&x, &y).unwrap();
        prop_assert_eq!(l.is_cover, l.open_union.is_empty());
        prop_assert_eq!(l.is_disjoint, l.open_intersection.len() == a.num_points());
    }

    #[test]
    fn closed_subcategories_give_open_subspaces((seed, masks) in algebra_and_sets()) {
        let a = pick(seed);
        let t = sub(&a, masks[0]);
        let cat = StandardCatalog::new(&a).unwrap();
        if !t.closed_under_envelopes(&cat).unwrap().closed || t.surviving().is_empty() {
            return Ok(());
        }
        let u = t.weakly_open().unwrap();
        prop_assert!(u.checks(&IsoSearch::default()).unwrap().all());
        // the kernel of restriction is exactly the subcategory
        for s in &cat.simples {
            prop_assert_eq!(u.restrict(s).unwrap().is_zero(), t.contains(s).unwrap());
        }
    }

    #[test]
    fn closure_witnesses_are_genuine((seed, masks) in algebra_and_sets()) {
        let a = pick(seed);
        let t = sub(&a, masks[0]);
        let cat = StandardCatalog::new(&a).unwrap();
        let c = t.closed_under_envelopes(&cat).unwrap();
        match c.witness {
            Some((j, x)) => {
                prop_assert!(!c.closed && t.killed.contains(&j) && !t.killed.contains(&x));
                prop_assert!(cat.injectives[j].support().unwrap().contains(&x));
            }
            None => prop_assert!(c.closed),
        }
    }
}
