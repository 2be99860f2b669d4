//! Seeded generator of small algebras and bimodules shared by the integration tests.
#![allow(dead_code)]

use frob_core::algebra::{AlgRef, Algebra};
use frob_core::bimodule::Bimodule;
use frob_core::exactla::{invert, solve_left, Field, Matrix};
use frob_core::fixtures;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PRIMES: [u64; 3] = [5, 7, 11];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64) -> Field {
    fixtures::field(p)
}

/// A non-square modulo `p`, so `t^2 - c` is irreducible.
fn non_square(p: u64) -> i64 {
    (2..p)
        .find(|&c| (1..p).all(|x| x * x % p != c))
        .expect("odd primes have non-squares") as i64
}

/// Named small algebras over `F_p` with `dim < p`.
pub fn algebra_pool(p: u64) -> Vec<(String, AlgRef)> {
    let f = field(p);
    let k = Algebra::ground(f).unwrap();
    let lt2 = Algebra::lower_triangular(f, 2).unwrap();
    let kk = Algebra::product(&k, &k).unwrap();
    let c = non_square(p);
    let mut out = vec![
        ("k".to_string(), k.clone()),
        ("k x k".into(), kk.clone()),
        ("lt2".into(), lt2.clone()),
        ("A2 quiver".into(), fixtures::linear_quiver(p, 2).unwrap()),
        ("k x lt2".into(), Algebra::product(&k, &lt2).unwrap()),
        ("M2(k)".into(), Algebra::matrix_over(&k, 2).unwrap()),
        ("F_p^2".into(), Algebra::field_extension(f, &[-c, 0, 1]).unwrap()),
        ("loop quiver".into(), fixtures::loop_quiver(p).unwrap()),
    ];
    if p > 5 {
        out.push(("lt3".into(), Algebra::lower_triangular(f, 3).unwrap()));
        out.push(("A3 quiver".into(), fixtures::linear_quiver(p, 3).unwrap()));
        out.push((
            "twisted triangular".into(),
            Algebra::triangular_extension(f, &[-c, 0, 1]).unwrap(),
        ));
        out.push(("lt2 (x) kxk".into(), Algebra::tensor(&lt2, &kk).unwrap()));
    }
    if p > 7 {
        out.push((
            "lt2 x M2(k) x k".into(),
            Algebra::product(
                &Algebra::product(&lt2, &Algebra::matrix_over(&k, 2).unwrap()).unwrap(),
                &k,
            )
            .unwrap(),
        ));
    }
    out
}

pub fn random_invertible(f: Field, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.p())).collect();
        let m = Matrix::from_data(f, n, n, data);
        if invert(&m).is_ok() {
            return m;
        }
    }
}

/// The same algebra written in a random basis: row `i` of `P` is the new `b_i`.
pub fn rebase(a: &Algebra, rng: &mut impl Rng) -> AlgRef {
    let f = a.field();
    let d = a.dim();
    let p = random_invertible(f, d, rng);
    let pinv = invert(&p).unwrap();
    let to_new = |v: &[u32]| pinv.vec_mul(v);
    let mut table = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            table.extend(to_new(&a.mul(p.row(i), p.row(j))));
        }
    }
    let labels = (1..=d).map(|i| format!("c{i}")).collect();
    let idem = a.idempotents().iter().map(|e| to_new(e)).collect();
    Algebra::new(f, labels, table, to_new(a.unit()), idem).expect("rebased algebra is valid")
}

pub fn inverse_of(a: &Algebra, u: &[u32]) -> Option<Vec<u32>> {
    let unit = Matrix::row_vector(a.field(), a.unit());
    let v = solve_left(&a.left_mul(u), &unit).ok()??;
    let v = v.row(0).to_vec();
    (a.mul(&v, u) == a.unit()).then_some(v)
}

/// `x -> u x u^{-1}` for a random unit `u`.
pub fn inner_automorphism(a: &Algebra, rng: &mut impl Rng) -> Matrix {
    let f = a.field();
    loop {
        let u: Vec<u32> = (0..a.dim()).map(|_| rng.gen_range(0..f.p())).collect();
        if let Some(v) = inverse_of(a, &u) {
            let rows: Vec<Vec<u32>> = (0..a.dim())
                .map(|i| a.mul(&a.mul(&u, &a.basis_vec(i)), &v))
                .collect();
            return Matrix::from_row_vectors(f, a.dim(), &rows);
        }
    }
}

pub fn random_algebra(p: u64, rng: &mut impl Rng) -> (String, AlgRef) {
    let pool = algebra_pool(p);
    let (name, a) = pool.choose(rng).unwrap().clone();
    if rng.gen_bool(0.5) {
        (format!("{name} (rebased)"), rebase(&a, rng))
    } else {
        (name, a)
    }
}

#[derive(Clone)]
pub struct Instance {
    pub label: String,
    pub bimodule: Bimodule,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label)
    }
}

/// One seeded bimodule: regular, inner twist, sum, external product, Morita or corner.
pub fn random_instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let p = *PRIMES.choose(&mut r).unwrap();
    let (name, a) = random_algebra(p, &mut r);
    let kind = r.gen_range(0..6);
    let (what, m) = match kind {
        0 => ("regular", Bimodule::regular(a.clone())),
        1 => {
            let phi = inner_automorphism(&a, &mut r);
            ("inner twist", Bimodule::twist(a.clone(), &phi).unwrap())
        }
        2 => {
            let phi = inner_automorphism(&a, &mut r);
            let t = Bimodule::twist(a.clone(), &phi).unwrap();
            ("regular + twist", Bimodule::regular(a.clone()).direct_sum(&t).unwrap())
        }
        3 => {
            // the product algebras must keep dim < p
            let a = if a.dim() + 1 < p as usize { a.clone() } else { Algebra::ground(a.field()).unwrap() };
            let small: Vec<_> = algebra_pool(p)
                .into_iter()
                .filter(|(_, b)| a.dim() + b.dim() < p as usize)
                .collect();
            let (_, b) = small.choose(&mut r).unwrap().clone();
            let m = Bimodule::external(&Bimodule::regular(a), &Bimodule::regular(b)).unwrap();
            ("external", m)
        }
        4 => ("morita", fixtures::morita(p, 2).unwrap()),
        _ => {
            let n = a.num_points();
            let mut keep: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.6)).collect();
            if keep.is_empty() {
                keep.push(r.gen_range(0..n));
            }
            let c = a.corner(&keep).unwrap();
            let m = Bimodule::regular(a.clone()).corner_slice(&c, &c).unwrap();
            ("corner", m)
        }
    };
    Instance {
        label: format!("seed {seed}: {what} over {name}, F_{p}"),
        bimodule: m,
    }
}

pub fn suite(seed: u64, count: usize) -> Vec<Instance> {
    (0..count as u64).map(|i| random_instance(seed.wrapping_mul(1000) + i)).collect()
}

/// Every killed set on `n` points, the empty one included.
pub fn killed_sets(n: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}
