use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bimodule::{AdjointPair, Bimodule, FrobeniusCertificate, Functor};
use crate::error::{FrobError, Result};
use crate::exactla::{invert, Matrix};
use crate::module::{Representation, StandardCatalog};

/// Which adjunction the duality formula runs through: `F -| G` (star) or `G -| F` (dagger).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Star,
    Dagger,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub direction: Direction,
    /// The dual transformation `F_1 -> F_2` read off at the regular module, as a map `M_1 -> M_2`.
    pub encoded: Matrix,
    /// The same morphism as a `(B, A)`-bimodule map `M_2* -> M_1*`.
    pub dual_hom: Matrix,
    /// At every catalog module of `A`, the formula agrees with tensoring by `encoded`.
    pub natural: bool,
    /// Dualizing back through the other formula recovers the original at every catalog module of `B`.
    pub inverse_law: bool,
    pub modules_checked: usize,
}

fn catalog(alg: &crate::algebra::AlgRef) -> Result<Vec<Representation>> {
    let c = StandardCatalog::new(alg)?;
    Ok(c.simples
        .into_iter()
        .chain(c.projectives)
        .chain(c.injectives)
        .collect())
}

fn id(m: &Representation) -> Matrix {
    Matrix::identity(m.field(), m.dim())
}

/// `G_2 N -> G_1 N` induced by `u: M_1 -> M_2`.
fn tau_at(p1: &AdjointPair, p2: &AdjointPair, u_dual: &Matrix, n: &Representation) -> Result<Matrix> {
    let s = p2.apply_tensor(Functor::G, n)?;
    let t = p1.apply_tensor(Functor::G, n)?;
    Ok(s.tensor.map_pair(&id(n), u_dual, &t.tensor))
}

/// `F_1 X -> F_2 X` induced by `w: M_1 -> M_2`.
fn sigma_at(p1: &AdjointPair, p2: &AdjointPair, w: &Matrix, x: &Representation) -> Result<Matrix> {
    let s = p1.apply_tensor(Functor::F, x)?;
    let t = p2.apply_tensor(Functor::F, x)?;
    Ok(s.tensor.map_pair(&id(x), w, &t.tensor))
}

fn dual_of(p1: &AdjointPair, p2: &AdjointPair, u: &Matrix) -> Result<Matrix> {
    p2.right_dual
        .pullback(u, &p1.right_dual)
        .ok_or_else(|| FrobError::VerificationFailed("pullback leaves the dual".into()))
}

/// `eps^1_{F_2 X} . F_1(tau_{F_2 X} . eta^2_X)`.
pub fn star_at(p1: &AdjointPair, p2: &AdjointPair, u: &Matrix, x: &Representation) -> Result<Matrix> {
    let u_dual = dual_of(p1, p2, u)?;
    let eta2 = p2.unit_at(x)?;
    let f2x = eta2.inner_module();
    let g1f2x = p1.apply_tensor(Functor::G, &f2x)?;
    let tau = eta2
        .outer
        .tensor
        .map_pair(&id(&f2x), &u_dual, &g1f2x.tensor);
    let h = eta2.map.mul(&tau);
    let f1h = p1.apply_hom(Functor::F, &h, x, &g1f2x.bimodule.right_module())?;
    let eps1 = p1.counit_at(&f2x)?;
    Ok(f1h.mul(&eps1.map))
}

/// `F_2(xi^1_X . tau_{F_1 X}) . theta^2_{F_1 X}`.
pub fn dagger_at(
    c1: &FrobeniusCertificate,
    c2: &FrobeniusCertificate,
    u: &Matrix,
    x: &Representation,
) -> Result<Matrix> {
    let u_dual = dual_of(c1, c2, u)?;
    let f1x = c1.apply(Functor::F, x)?;
    let th = c2.theta_unit_at(&f1x)?;
    let xi = c1.xi_at(x)?;
    let tau = th.inner.tensor.map_pair(&id(&f1x), &u_dual, &xi.outer.tensor);
    let h = tau.mul(&xi.map);
    let f2h = c2.apply_hom(Functor::F, &h, &th.inner_module(), x)?;
    Ok(th.map.mul(&f2h))
}

/// `G_1(eps^2_N . sigma_{G_2 N}) . eta^1_{G_2 N}` for `sigma = id (x) w`.
fn undo_star(p1: &AdjointPair, p2: &AdjointPair, w: &Matrix, n: &Representation) -> Result<Matrix> {
    let eps2 = p2.counit_at(n)?;
    let g2n = eps2.inner_module();
    let eta1 = p1.unit_at(&g2n)?;
    let sigma = eta1.inner.tensor.map_pair(&id(&g2n), w, &eps2.outer.tensor);
    let h = sigma.mul(&eps2.map);
    let g1h = p1.apply_hom(Functor::G, &h, &eta1.inner_module(), n)?;
    Ok(eta1.map.mul(&g1h))
}

/// `xi^2_{G_1 N} . G_2(sigma_{G_1 N} . theta^1_N)` for `sigma = id (x) w`.
fn undo_dagger(
    c1: &FrobeniusCertificate,
    c2: &FrobeniusCertificate,
    w: &Matrix,
    n: &Representation,
) -> Result<Matrix> {
    let th1 = c1.theta_unit_at(n)?;
    let g1n = th1.inner_module();
    let xi2 = c2.xi_at(&g1n)?;
    let sigma = th1.outer.tensor.map_pair(&id(&g1n), w, &xi2.inner.tensor);
    let h = th1.map.mul(&sigma);
    let g2h = c2.apply_hom(Functor::G, &h, n, &xi2.inner_module())?;
    Ok(g2h.mul(&xi2.map))
}

fn at(
    c1: &FrobeniusCertificate,
    c2: &FrobeniusCertificate,
    u: &Matrix,
    x: &Representation,
    direction: Direction,
) -> Result<Matrix> {
    match direction {
        Direction::Star => star_at(c1, c2, u, x),
        Direction::Dagger => dagger_at(c1, c2, u, x),
    }
}

/// Reads `F_1(A) -> F_2(A)` back as a map `M_1 -> M_2` through `m -> 1 (x) m`.
fn encode(p1: &AdjointPair, p2: &AdjointPair, at_regular: &Matrix) -> Result<Matrix> {
    let a = p1.left_algebra().clone();
    let reg = Representation::regular(a.clone());
    let embed = |p: &AdjointPair| -> Result<Matrix> {
        let t = p.apply_tensor(Functor::F, &reg)?;
        let f = reg.field();
        let n = p.bimodule.dim();
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                t.tensor.pure(a.unit(), &e)
            })
            .collect();
        Ok(Matrix::from_row_vectors(f, t.dim(), &rows))
    };
    let (e1, e2) = (embed(p1)?, embed(p2)?);
    Ok(e1.mul(at_regular).mul(&invert(&e2)?))
}

pub fn dualize_morphism(
    c1: &FrobeniusCertificate,
    c2: &FrobeniusCertificate,
    u: &Matrix,
    direction: Direction,
) -> Result<DualityReport> {
    if !c1.bimodule.is_hom(&c2.bimodule, u) {
        return Err(FrobError::VerificationFailed("u is not a bimodule map".into()));
    }
    let a = c1.left_algebra().clone();
    let reg = Representation::regular(a.clone());
    let encoded = encode(c1, c2, &at(c1, c2, u, &reg, direction)?)?;
    let mut natural = true;
    let mut count = 0;
    for x in catalog(&a)? {
        natural &= at(c1, c2, u, &x, direction)? == sigma_at(c1, c2, &encoded, &x)?;
        count += 1;
    }
    let u_dual = dual_of(c1, c2, u)?;
    let mut inverse_law = true;
    for n in catalog(c1.right_algebra())? {
        let back = match direction {
            Direction::Star => undo_star(c1, c2, &encoded, &n)?,
            Direction::Dagger => undo_dagger(c1, c2, &encoded, &n)?,
        };
        inverse_law &= back == tau_at(c1, c2, &u_dual, &n)?;
        count += 1;
    }
    Ok(DualityReport {
        direction,
        dual_hom: dual_of(c1, c2, &encoded)?,
        encoded,
        natural,
        inverse_law,
        modules_checked: count,
    })
}

/// `(uv)^* = u^* v^*` (first `u^*`, then `v^*`) at every catalog module of `A`.
pub fn composition_law(
    c: [&FrobeniusCertificate; 3],
    u: &Matrix,
    v: &Matrix,
    direction: Direction,
) -> Result<bool> {
    let uv = u.mul(v);
    let mut ok = true;
    for x in catalog(c[0].left_algebra())? {
        let lhs = at(c[0], c[2], &uv, &x, direction)?;
        let rhs = at(c[0], c[1], u, &x, direction)?.mul(&at(c[1], c[2], v, &x, direction)?);
        ok &= lhs == rhs;
    }
    Ok(ok)
}

/// A uniformly random bimodule map `m1 -> m2`.
pub fn random_morphism(m1: &Bimodule, m2: &Bimodule, seed: u64) -> Result<Matrix> {
    let f = m1.field();
    let basis = m1.hom_space(m2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Matrix::zeros(f, m1.dim(), m2.dim());
    for b in &basis {
        out.add_scaled(rng.gen_range(0..f.p()), b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::frobenius_check;
    use crate::fixtures;
    use crate::module::IsoSearch;

    fn cert(m: &Bimodule) -> FrobeniusCertificate {
        frobenius_check(m, &IsoSearch::default()).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let m = Bimodule::regular(fixtures::triangular_algebra());
        let c = cert(&m);
        let f = m.field();
        for dir in [Direction::Star, Direction::Dagger] {
            let r = dualize_morphism(&c, &c, &Matrix::identity(f, 3), dir).unwrap();
            assert!(r.encoded.is_identity() && r.natural && r.inverse_law);
            let r = dualize_morphism(&c, &c, &Matrix::zeros(f, 3, 3), dir).unwrap();
            assert!(r.encoded.is_zero() && r.natural && r.inverse_law);
        }
    }

    #[test]
    fn twisted_field_random_draws() {
        let m = fixtures::twisted_field().unwrap();
        let c = cert(&m);
        for seed in 0..5 {
            let u = random_morphism(&m, &m, seed).unwrap();
            let v = random_morphism(&m, &m, seed + 100).unwrap();
            for dir in [Direction::Star, Direction::Dagger] {
                let r = dualize_morphism(&c, &c, &u, dir).unwrap();
                assert!(r.natural && r.inverse_law, "seed {seed} {dir:?}");
                if dir == Direction::Star {
                    assert_eq!(r.encoded, u, "seed {seed}");
                }
                assert!(composition_law([&c, &c, &c], &u, &v, dir).unwrap());
            }
        }
    }
}
