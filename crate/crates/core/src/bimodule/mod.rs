//! Bimodules, balanced tensor products, duals and Frobenius certificates.
//!
//! Row-vector conventions: `a . m = m lambda(a)` with `lambda(ab) = lambda(b) lambda(a)`, and
//! `m . b = m rho(b)` with `rho(ab) = rho(a) rho(b)`.

mod dual;
mod frobenius;
mod tensor;

use std::fmt;

use serde::Serialize;

use crate::algebra::{check_same, AlgRef, Algebra, Corner};
use crate::error::{FrobError, Result};
use crate::exactla::{invert, Field, Matrix, Subspace};
use crate::module::{intertwiners, search_iso, IsoOutcome, IsoSearch, Representation};

pub use dual::{Dual, Side};
pub use frobenius::{
    endomorphism_extension, frobenius_check, hom_functor, AdjointPair, AdjunctionSystem, Component,
    EndomorphismExtension, FrobeniusCertificate, Functor, ZigZagReport,
};
pub use tensor::{associator, tensor, tensor_module, Tensor, TensorProduct};

/// An `(A, B)`-bimodule.
#[derive(Clone)]
pub struct Bimodule {
    left: AlgRef,
    right: AlgRef,
    dim: usize,
    lambda: Vec<Matrix>,
    rho: Vec<Matrix>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BimoduleReport {
    pub shape_ok: bool,
    pub left_unit_ok: bool,
    pub right_unit_ok: bool,
    pub left_failures: Vec<(usize, usize)>,
    pub right_failures: Vec<(usize, usize)>,
    /// `(i, j)` with `lambda(a_i) rho(b_j) != rho(b_j) lambda(a_i)`.
    pub commute_failures: Vec<(usize, usize)>,
}

impl BimoduleReport {
    pub fn ok(&self) -> bool {
        self.shape_ok
            && self.left_unit_ok
            && self.right_unit_ok
            && self.left_failures.is_empty()
            && self.right_failures.is_empty()
            && self.commute_failures.is_empty()
    }
}

impl Bimodule {
    pub fn new(
        left: AlgRef,
        right: AlgRef,
        dim: usize,
        lambda: Vec<Matrix>,
        rho: Vec<Matrix>,
    ) -> Result<Self> {
        if left.field() != right.field() {
            return Err(FrobError::FieldMismatch(
                left.field().p(),
                right.field().p(),
            ));
        }
        let m = Bimodule {
            left,
            right,
            dim,
            lambda,
            rho,
        };
        let r = m.validate();
        if !r.shape_ok {
            return Err(FrobError::InvalidBimodule(
                "action matrices have the wrong shape".into(),
            ));
        }
        if let Some((i, j)) = r.commute_failures.first() {
            return Err(FrobError::ActionsDoNotCommute(format!(
                "{} and {}",
                m.left.labels()[*i],
                m.right.labels()[*j]
            )));
        }
        if !r.ok() {
            return Err(FrobError::InvalidBimodule(format!(
                "left unit {}, right unit {}, left failures {:?}, right failures {:?}",
                r.left_unit_ok, r.right_unit_ok, r.left_failures, r.right_failures
            )));
        }
        Ok(m)
    }

    pub(crate) fn unchecked(
        left: AlgRef,
        right: AlgRef,
        dim: usize,
        lambda: Vec<Matrix>,
        rho: Vec<Matrix>,
    ) -> Self {
        Bimodule {
            left,
            right,
            dim,
            lambda,
            rho,
        }
    }

    pub fn validate(&self) -> BimoduleReport {
        let (a, b, d) = (&self.left, &self.right, self.dim);
        let shape_ok = self.lambda.len() == a.dim()
            && self.rho.len() == b.dim()
            && self
                .lambda
                .iter()
                .chain(&self.rho)
                .all(|m| m.rows() == d && m.cols() == d);
        if !shape_ok {
            return BimoduleReport::default();
        }
        let left_unit_ok = d == 0 || self.left_act(a.unit()).is_identity();
        let right_unit_ok = d == 0 || self.right_act(b.unit()).is_identity();
        let mut left_failures = Vec::new();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if self.lambda[j].mul(&self.lambda[i]) != self.left_act(a.basis_product(i, j)) {
                    left_failures.push((i, j));
                }
            }
        }
        let mut right_failures = Vec::new();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if self.rho[i].mul(&self.rho[j]) != self.right_act(b.basis_product(i, j)) {
                    right_failures.push((i, j));
                }
            }
        }
        let mut commute_failures = Vec::new();
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                if self.lambda[i].mul(&self.rho[j]) != self.rho[j].mul(&self.lambda[i]) {
                    commute_failures.push((i, j));
                }
            }
        }
        BimoduleReport {
            shape_ok,
            left_unit_ok,
            right_unit_ok,
            left_failures,
            right_failures,
            commute_failures,
        }
    }

    pub fn left_algebra(&self) -> &AlgRef {
        &self.left
    }
    pub fn right_algebra(&self) -> &AlgRef {
        &self.right
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> Field {
        self.left.field()
    }
    pub fn lambda(&self) -> &[Matrix] {
        &self.lambda
    }
    pub fn rho(&self) -> &[Matrix] {
        &self.rho
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn left_act(&self, x: &[u32]) -> Matrix {
        combine(self.field(), self.dim, &self.lambda, x)
    }

    pub fn right_act(&self, y: &[u32]) -> Matrix {
        combine(self.field(), self.dim, &self.rho, y)
    }

    /// `A` over `(A, A)`.
    pub fn regular(alg: AlgRef) -> Self {
        let lambda = (0..alg.dim()).map(|i| alg.left_mul_basis(i)).collect();
        let rho = (0..alg.dim()).map(|j| alg.right_mul_basis(j)).collect();
        let d = alg.dim();
        Bimodule {
            left: alg.clone(),
            right: alg,
            dim: d,
            lambda,
            rho,
        }
    }

    /// `1_A_phi`: `a . m . b = a m phi(b)`; `phi` has row `i` equal to `phi(b_i)`.
    pub fn twist(alg: AlgRef, phi: &Matrix) -> Result<Self> {
        check_automorphism(&alg, phi)?;
        let lambda = (0..alg.dim()).map(|i| alg.left_mul_basis(i)).collect();
        let rho = (0..alg.dim()).map(|j| alg.right_mul(phi.row(j))).collect();
        let d = alg.dim();
        Ok(Bimodule {
            left: alg.clone(),
            right: alg,
            dim: d,
            lambda,
            rho,
        })
    }

    /// `A / I` for a left ideal `I` (rows of `ideal`), with `B` acting on the right through an
    /// algebra map `psi: B -> A` (row `k` = `psi(b_k)`) that must satisfy `I psi(B) <= I`.
    /// Without `psi`, `B` must be the ground field acting by scalars.
    pub fn quotient_by_ideal(
        alg: AlgRef,
        ideal: &Matrix,
        target: AlgRef,
        psi: Option<&Matrix>,
    ) -> Result<Self> {
        check_same_field(&alg, &target)?;
        let f = alg.field();
        let psi = match psi {
            Some(p) => p.clone(),
            None if target.dim() == 1 => Matrix::row_vector(f, alg.unit()),
            None => {
                return Err(FrobError::InvalidBimodule(
                    "a structure map B -> A is required".into(),
                ))
            }
        };
        check_homomorphism(&target, &alg, &psi)?;
        let sub = Subspace::span(ideal);
        for v in sub.echelon().row_vecs() {
            for k in 0..alg.dim() {
                if !sub.contains(&alg.mul(&alg.basis_vec(k), &v)) {
                    return Err(FrobError::InvalidBimodule(
                        "ideal is not a left ideal".into(),
                    ));
                }
            }
            for k in 0..target.dim() {
                if !sub.contains(&alg.mul(&v, psi.row(k))) {
                    return Err(FrobError::InvalidBimodule(
                        "ideal is not stable under the right action".into(),
                    ));
                }
            }
        }
        let q = crate::exactla::Quotient::new(sub);
        let lambda = (0..alg.dim())
            .map(|i| q.induced(&alg.left_mul_basis(i), &q))
            .collect();
        let rho = (0..target.dim())
            .map(|k| q.induced(&alg.right_mul(psi.row(k)), &q))
            .collect();
        Bimodule::new(alg, target, q.dim(), lambda, rho)
    }

    /// `e' M e''` over `(e'Ae', e''Be'')`.
    pub fn corner_slice(&self, left: &Corner, right: &Corner) -> Result<Bimodule> {
        let f = self.field();
        let proj = self
            .left_act(&left.idempotent)
            .mul(&self.right_act(&right.idempotent));
        let space = Subspace::span(&proj);
        let basis = space.echelon().clone();
        let coords = Subspace::with_basis(&basis).expect("echelon basis");
        let k = basis.rows();
        let restrict = |m: &Matrix| -> Matrix {
            let img = basis.mul(m);
            let mut out = Matrix::zeros(f, k, k);
            for i in 0..k {
                out.row_mut(i)
                    .copy_from_slice(&coords.coords(img.row(i)).expect("corner slice is stable"));
            }
            out
        };
        let lambda = (0..left.algebra.dim())
            .map(|c| restrict(&self.left_act(left.inclusion.row(c))))
            .collect();
        let rho = (0..right.algebra.dim())
            .map(|c| restrict(&self.right_act(right.inclusion.row(c))))
            .collect();
        Bimodule::new(left.algebra.clone(), right.algebra.clone(), k, lambda, rho)
    }

    /// `M1 + M2` over `(A1 x A2, B1 x B2)`, with `A_i` acting only on `M_i`.
    pub fn external(m1: &Bimodule, m2: &Bimodule) -> Result<Bimodule> {
        let a = Algebra::product(&m1.left, &m2.left)?;
        let b = Algebra::product(&m1.right, &m2.right)?;
        let f = m1.field();
        let z1 = Matrix::zeros(f, m1.dim, m1.dim);
        let z2 = Matrix::zeros(f, m2.dim, m2.dim);
        let mut lambda: Vec<Matrix> = m1.lambda.iter().map(|x| x.direct_sum(&z2)).collect();
        lambda.extend(m2.lambda.iter().map(|x| z1.direct_sum(x)));
        let mut rho: Vec<Matrix> = m1.rho.iter().map(|x| x.direct_sum(&z2)).collect();
        rho.extend(m2.rho.iter().map(|x| z1.direct_sum(x)));
        Bimodule::new(a, b, m1.dim + m2.dim, lambda, rho)
    }

    /// Restriction of the left action along an algebra map `psi: C -> A` (row `k` = `psi(c_k)`).
    pub fn restrict_left(&self, source: AlgRef, psi: &Matrix) -> Result<Bimodule> {
        check_homomorphism(&source, &self.left, psi)?;
        let lambda = (0..source.dim())
            .map(|k| self.left_act(psi.row(k)))
            .collect();
        Bimodule::new(
            source,
            self.right.clone(),
            self.dim,
            lambda,
            self.rho.clone(),
        )
    }

    /// Restriction of the right action along an algebra map `psi: D -> B`.
    pub fn restrict_right(&self, source: AlgRef, psi: &Matrix) -> Result<Bimodule> {
        check_homomorphism(&source, &self.right, psi)?;
        let rho = (0..source.dim())
            .map(|k| self.right_act(psi.row(k)))
            .collect();
        Bimodule::new(
            self.left.clone(),
            source,
            self.dim,
            self.lambda.clone(),
            rho,
        )
    }

    /// `A x A` as an `(A, A x A)`-bimodule with `A` acting diagonally.
    pub fn diagonal(alg: AlgRef) -> Result<Bimodule> {
        let prod = Algebra::product(&alg, &alg)?;
        let d = alg.dim();
        let mut psi = Matrix::zeros(alg.field(), d, 2 * d);
        for i in 0..d {
            psi.set(i, i, 1);
            psi.set(i, d + i, 1);
        }
        Bimodule::regular(prod).restrict_left(alg, &psi)
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        check_same(&self.left, &other.left, "left algebras differ")?;
        check_same(&self.right, &other.right, "right algebras differ")?;
        Ok(Bimodule {
            left: self.left.clone(),
            right: self.right.clone(),
            dim: self.dim + other.dim,
            lambda: self
                .lambda
                .iter()
                .zip(&other.lambda)
                .map(|(x, y)| x.direct_sum(y))
                .collect(),
            rho: self
                .rho
                .iter()
                .zip(&other.rho)
                .map(|(x, y)| x.direct_sum(y))
                .collect(),
        })
    }

    pub fn zero(left: AlgRef, right: AlgRef) -> Bimodule {
        let f = left.field();
        let lambda = (0..left.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        let rho = (0..right.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Bimodule {
            left,
            right,
            dim: 0,
            lambda,
            rho,
        }
    }

    /// A right module `X` over `A` viewed as a `(k, A)`-bimodule.
    pub fn from_right_module(x: &Representation) -> Result<Bimodule> {
        let k = Algebra::ground(x.field())?;
        let lambda = vec![Matrix::identity(x.field(), x.dim())];
        Ok(Bimodule::unchecked(
            k,
            x.algebra().clone(),
            x.dim(),
            lambda,
            x.action().to_vec(),
        ))
    }

    /// The right `B`-module underlying `M`.
    pub fn right_module(&self) -> Representation {
        Representation::unchecked(self.right.clone(), self.dim, self.rho.clone())
    }

    /// The left `A`-module underlying `M`, as a right module over `A^op`.
    pub fn left_module(&self) -> Representation {
        Representation::unchecked(Algebra::opposite(&self.left), self.dim, self.lambda.clone())
    }

    /// Right module over `A^op (x) B` with `rho(a (x) b) = lambda(a) rho(b)`.
    pub fn as_module_over_enveloping(&self) -> Result<Representation> {
        let env = Algebra::enveloping(&self.left, &self.right)?;
        let mut action = Vec::with_capacity(env.dim());
        for l in &self.lambda {
            for r in &self.rho {
                action.push(l.mul(r));
            }
        }
        Representation::new(env, self.dim, action)
    }

    /// Inverse of [`Bimodule::as_module_over_enveloping`].
    pub fn from_enveloping_module(
        m: &Representation,
        left: AlgRef,
        right: AlgRef,
    ) -> Result<Bimodule> {
        let (da, db) = (left.dim(), right.dim());
        if m.algebra().dim() != da * db {
            return Err(FrobError::AlgebraMismatch(
                "module is not over the enveloping algebra".into(),
            ));
        }
        let lambda = (0..da)
            .map(|i| {
                let mut x = vec![0; da * db];
                for (j, &c) in right.unit().iter().enumerate() {
                    x[i * db + j] = c;
                }
                m.act(&x)
            })
            .collect();
        let rho = (0..db)
            .map(|j| {
                let mut x = vec![0; da * db];
                for (i, &c) in left.unit().iter().enumerate() {
                    x[i * db + j] = c;
                }
                m.act(&x)
            })
            .collect();
        Bimodule::new(left, right, m.dim(), lambda, rho)
    }

    fn generator_pairs(&self, other: &Bimodule) -> Vec<(Matrix, Matrix)> {
        let mut pairs: Vec<(Matrix, Matrix)> = self
            .left
            .generators()
            .iter()
            .map(|g| (self.left_act(g), other.left_act(g)))
            .collect();
        pairs.extend(
            self.right
                .generators()
                .iter()
                .map(|g| (self.right_act(g), other.right_act(g))),
        );
        pairs
    }

    fn same_algebras(&self, other: &Bimodule) -> Result<()> {
        check_same(&self.left, &other.left, "left algebras differ")?;
        check_same(&self.right, &other.right, "right algebras differ")
    }

    /// Basis of bimodule homomorphisms `self -> other`.
    pub fn hom_space(&self, other: &Bimodule) -> Result<Vec<Matrix>> {
        self.same_algebras(other)?;
        Ok(intertwiners(
            self.field(),
            self.dim,
            other.dim,
            &self.generator_pairs(other),
        ))
    }

    pub fn is_hom(&self, other: &Bimodule, x: &Matrix) -> bool {
        x.rows() == self.dim
            && x.cols() == other.dim
            && self
                .generator_pairs(other)
                .iter()
                .all(|(a, b)| a.mul(x) == x.mul(b))
    }

    pub fn iso_test(&self, other: &Bimodule, cfg: &IsoSearch) -> Result<IsoOutcome> {
        self.same_algebras(other)?;
        if self.dim != other.dim {
            return Ok(IsoOutcome::NotIsomorphic(format!(
                "dimensions {} and {} differ",
                self.dim, other.dim
            )));
        }
        if self.dim == 0 {
            return Ok(IsoOutcome::Isomorphic(Matrix::zeros(self.field(), 0, 0)));
        }
        let hom = self.hom_space(other)?;
        if hom.is_empty() {
            return Ok(IsoOutcome::NotIsomorphic(
                "no nonzero bimodule homomorphisms".into(),
            ));
        }
        let end = self.hom_space(self)?;
        if end.len() != hom.len() {
            return Ok(IsoOutcome::NotIsomorphic(format!(
                "dim End = {} but dim Hom = {}",
                end.len(),
                hom.len()
            )));
        }
        Ok(match search_iso(self.field(), &hom, cfg) {
            Some(x) => IsoOutcome::Isomorphic(x),
            None => IsoOutcome::Unknown,
        })
    }

    /// Transport of structure along an invertible matrix `p`: the result has actions
    /// `p^-1 lambda p` and `p^-1 rho p`, so `p` is an isomorphism from it to `self`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Bimodule> {
        let pinv = invert(p)?;
        Ok(Bimodule {
            left: self.left.clone(),
            right: self.right.clone(),
            dim: self.dim,
            lambda: self.lambda.iter().map(|l| p.mul(l).mul(&pinv)).collect(),
            rho: self.rho.iter().map(|r| p.mul(r).mul(&pinv)).collect(),
        })
    }
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bimodule(dim {} over ({:?}, {:?}))",
            self.dim, self.left, self.right
        )
    }
}

pub(crate) fn combine(f: Field, d: usize, mats: &[Matrix], x: &[u32]) -> Matrix {
    let mut out = Matrix::zeros(f, d, d);
    for (k, &c) in x.iter().enumerate() {
        if c != 0 {
            out.add_scaled(c, &mats[k]);
        }
    }
    out
}

fn check_same_field(a: &Algebra, b: &Algebra) -> Result<()> {
    if a.field() != b.field() {
        return Err(FrobError::FieldMismatch(a.field().p(), b.field().p()));
    }
    Ok(())
}

/// Checks that `psi` (row `k` = image of the `k`-th basis element) is a unital algebra map.
pub fn check_homomorphism(source: &Algebra, target: &Algebra, psi: &Matrix) -> Result<()> {
    check_same_field(source, target)?;
    if psi.rows() != source.dim() || psi.cols() != target.dim() {
        return Err(FrobError::DimensionMismatch(
            "algebra map has the wrong shape".into(),
        ));
    }
    let apply = |x: &[u32]| psi.vec_mul(x);
    if apply(source.unit()) != target.unit() {
        return Err(FrobError::NotAutomorphism("unit is not preserved".into()));
    }
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            if apply(source.basis_product(i, j)) != target.mul(psi.row(i), psi.row(j)) {
                return Err(FrobError::NotAutomorphism(format!(
                    "product {} * {} is not preserved",
                    source.labels()[i],
                    source.labels()[j]
                )));
            }
        }
    }
    Ok(())
}

pub fn check_automorphism(alg: &Algebra, phi: &Matrix) -> Result<()> {
    check_homomorphism(alg, alg, phi)?;
    invert(phi).map_err(|_| FrobError::NotAutomorphism("map is not bijective".into()))?;
    Ok(())
}
