//! Right modules as matrix representations.

mod catalog;
mod hom;
mod injective;

use std::fmt;

use serde::Serialize;

use crate::algebra::{check_same, AlgRef};
use crate::error::{FrobError, Result};
use crate::exactla::{Field, Matrix, Quotient, Subspace};

pub use catalog::{StandardCatalog, StructureSeries};
pub use hom::{hom_space, intertwiners, iso_test, search_iso, IsoOutcome, IsoSearch};
pub use injective::{
    injective_decompose, injective_hull, is_projective, Decomposition, Hull, Splitting,
};

/// A right module: `m . a = m rho(a)` with `rho(ab) = rho(a) rho(b)`.
#[derive(Clone)]
pub struct Representation {
    alg: AlgRef,
    dim: usize,
    action: Vec<Matrix>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RepresentationReport {
    /// `(i, j)` pairs with `rho(b_i) rho(b_j) != rho(b_i b_j)`.
    pub product_failures: Vec<(usize, usize)>,
    pub unit_ok: bool,
    pub shape_ok: bool,
}

impl RepresentationReport {
    pub fn ok(&self) -> bool {
        self.product_failures.is_empty() && self.unit_ok && self.shape_ok
    }
}

impl Representation {
    /// Validated construction from one matrix per basis element.
    pub fn new(alg: AlgRef, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let m = Self::unchecked(alg, dim, action);
        let r = m.validate();
        if !r.shape_ok {
            return Err(FrobError::InvalidRepresentation(
                "action matrices have the wrong shape".into(),
            ));
        }
        if !r.unit_ok {
            return Err(FrobError::InvalidRepresentation(
                "unit does not act as the identity".into(),
            ));
        }
        if let Some((i, j)) = r.product_failures.first() {
            return Err(FrobError::InvalidRepresentation(format!(
                "rho(b{i}) rho(b{j}) != rho(b{i} b{j})"
            )));
        }
        Ok(m)
    }

    pub(crate) fn unchecked(alg: AlgRef, dim: usize, action: Vec<Matrix>) -> Self {
        Representation { alg, dim, action }
    }

    pub fn zero(alg: AlgRef) -> Self {
        let f = alg.field();
        let action = (0..alg.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Representation {
            alg,
            dim: 0,
            action,
        }
    }

    /// `A_A` with `rho(a)` = right multiplication.
    pub fn regular(alg: AlgRef) -> Self {
        let action = (0..alg.dim()).map(|j| alg.right_mul_basis(j)).collect();
        let dim = alg.dim();
        Representation { alg, dim, action }
    }

    pub fn free(alg: AlgRef, rank: usize) -> Self {
        let reg = Self::regular(alg.clone());
        Self::direct_sum_all(alg, &vec![reg; rank])
    }

    pub fn algebra(&self) -> &AlgRef {
        &self.alg
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn action(&self) -> &[Matrix] {
        &self.action
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `rho(x)` for an arbitrary element given in coordinates.
    pub fn act(&self, x: &[u32]) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.dim, self.dim);
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                out.add_scaled(c, &self.action[k]);
            }
        }
        out
    }

    pub fn validate(&self) -> RepresentationReport {
        let a = &self.alg;
        let d = self.dim;
        let shape_ok = self.action.len() == a.dim()
            && self.action.iter().all(|m| m.rows() == d && m.cols() == d);
        if !shape_ok {
            return RepresentationReport {
                shape_ok,
                ..Default::default()
            };
        }
        let unit_ok = self.act(a.unit()).is_identity() || d == 0;
        let mut product_failures = Vec::new();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = self.act(a.basis_product(i, j));
                if lhs != rhs {
                    product_failures.push((i, j));
                }
            }
        }
        RepresentationReport {
            product_failures,
            unit_ok,
            shape_ok,
        }
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Representation {
            alg: self.alg.clone(),
            dim: self.dim + other.dim,
            action,
        }
    }

    pub fn direct_sum_all(alg: AlgRef, parts: &[Representation]) -> Representation {
        parts
            .iter()
            .fold(Representation::zero(alg), |acc, m| acc.direct_sum(m))
    }

    /// Smallest submodule containing the given rows.
    pub fn generated(&self, rows: &Matrix) -> Subspace {
        let mut s = Subspace::span(rows);
        let gens = self.alg.generators().to_vec();
        let gmats: Vec<Matrix> = gens.iter().map(|g| self.act(g)).collect();
        loop {
            let basis = s.echelon().clone();
            let mut grew = false;
            for g in &gmats {
                let img = basis.mul(g);
                for i in 0..img.rows() {
                    grew |= s.insert(img.row(i));
                }
            }
            if !grew {
                return s;
            }
        }
    }

    /// Submodule on the rows of `basis` (which must be independent and invariant).
    /// Returns the module together with the inclusion matrix (= `basis`).
    pub fn submodule(&self, basis: &Matrix) -> Result<(Representation, Matrix)> {
        let f = self.field();
        let k = basis.rows();
        let coords = Subspace::with_basis(basis).ok_or_else(|| {
            FrobError::InvalidRepresentation("submodule basis is dependent".into())
        })?;
        let mut action = Vec::with_capacity(self.action.len());
        for rho in &self.action {
            let img = basis.mul(rho);
            let mut m = Matrix::zeros(f, k, k);
            for i in 0..k {
                let c = coords.coords(img.row(i)).ok_or_else(|| {
                    FrobError::InvalidRepresentation("subspace is not invariant".into())
                })?;
                m.row_mut(i).copy_from_slice(&c);
            }
            action.push(m);
        }
        Ok((
            Representation {
                alg: self.alg.clone(),
                dim: k,
                action,
            },
            basis.clone(),
        ))
    }

    /// Submodule on a subspace, using its echelon basis.
    pub fn submodule_on(&self, s: &Subspace) -> Result<(Representation, Matrix)> {
        self.submodule(s.echelon())
    }

    /// Quotient by an invariant subspace; returns the module and the projection matrix.
    pub fn quotient(&self, sub: &Subspace) -> (Representation, Matrix) {
        let q = Quotient::new(sub.clone());
        let action = self.action.iter().map(|rho| q.induced(rho, &q)).collect();
        let proj = q.projection();
        (
            Representation {
                alg: self.alg.clone(),
                dim: q.dim(),
                action,
            },
            proj,
        )
    }

    /// Image of a hom as a submodule of the target.
    pub fn image_of(&self, hom: &Matrix) -> Subspace {
        Subspace::span(hom)
    }

    /// Same matrices over another algebra with identical structure (e.g. a rebuilt copy).
    pub fn with_algebra(&self, alg: AlgRef) -> Result<Representation> {
        if alg.dim() != self.alg.dim() {
            return Err(FrobError::AlgebraMismatch("dimension differs".into()));
        }
        Representation::new(alg, self.dim, self.action.clone())
    }

    /// Restriction along a corner: `M e'` over `e'Ae'`.
    pub fn corner_restriction(
        &self,
        corner: &crate::algebra::Corner,
    ) -> Result<(Representation, Matrix)> {
        let e = self.act(&corner.idempotent);
        let s = Subspace::span(&e);
        let basis = s.echelon().clone();
        let coords = Subspace::with_basis(&basis).expect("echelon basis");
        let f = self.field();
        let k = basis.rows();
        let mut action = Vec::with_capacity(corner.algebra.dim());
        for c in 0..corner.algebra.dim() {
            let rho = self.act(corner.inclusion.row(c));
            let img = basis.mul(&rho);
            let mut m = Matrix::zeros(f, k, k);
            for i in 0..k {
                m.row_mut(i)
                    .copy_from_slice(&coords.coords(img.row(i)).expect("M e' is e'Ae'-stable"));
            }
            action.push(m);
        }
        Ok((
            Representation {
                alg: corner.algebra.clone(),
                dim: k,
                action,
            },
            basis,
        ))
    }

    pub(crate) fn same_algebra(&self, other: &Representation) -> Result<()> {
        check_same(
            &self.alg,
            &other.alg,
            "modules live over different algebras",
        )
    }

    /// Checks `hom` intertwines the two actions.
    pub fn is_hom(&self, target: &Representation, hom: &Matrix) -> bool {
        if hom.rows() != self.dim || hom.cols() != target.dim {
            return false;
        }
        self.alg
            .generators()
            .iter()
            .all(|g| self.act(g).mul(hom) == hom.mul(&target.act(g)))
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation(dim {} over {:?})", self.dim, self.alg)
    }
}
