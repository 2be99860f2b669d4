use super::Bimodule;
use crate::algebra::check_same;
use crate::error::{FrobError, Result};
use crate::exactla::{Field, Matrix, Quotient, Subspace};
use crate::module::Representation;

/// `X (x)_A N` as the quotient of `X (x) N` (index `i * dim N + j`) by the balancing relations.
#[derive(Clone, Debug)]
pub struct Tensor {
    left_dim: usize,
    right_dim: usize,
    relations: Subspace,
    proj: Matrix,
    sec: Matrix,
}

impl Tensor {
    /// `pairs` holds `(rho_X(g), lambda_N(g))` for generators `g` of the middle algebra.
    pub fn new(
        field: Field,
        left_dim: usize,
        right_dim: usize,
        pairs: &[(Matrix, Matrix)],
    ) -> Tensor {
        let v = left_dim * right_dim;
        let il = Matrix::identity(field, left_dim);
        let ir = Matrix::identity(field, right_dim);
        let mut rel = Subspace::zero(field, v);
        for (rx, ln) in pairs {
            let r = rx.kron(&ir).sub(&il.kron(ln));
            for i in 0..r.rows() {
                rel.insert(r.row(i));
            }
        }
        let q = Quotient::new(rel.clone());
        Tensor {
            left_dim,
            right_dim,
            proj: q.projection(),
            sec: q.section(),
            relations: rel,
        }
    }

    pub fn dim(&self) -> usize {
        self.sec.rows()
    }
    pub fn left_dim(&self) -> usize {
        self.left_dim
    }
    pub fn right_dim(&self) -> usize {
        self.right_dim
    }
    /// `X (x) N -> X (x)_A N`.
    pub fn projection(&self) -> &Matrix {
        &self.proj
    }
    /// A linear section of the projection.
    pub fn section(&self) -> &Matrix {
        &self.sec
    }
    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        self.proj.vec_mul(v)
    }

    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        self.sec.vec_mul(q)
    }

    /// Class of `x (x) n`.
    pub fn pure(&self, x: &[u32], n: &[u32]) -> Vec<u32> {
        let f = self.proj.field();
        let k = Matrix::row_vector(f, x).kron(&Matrix::row_vector(f, n));
        self.project(k.row(0))
    }

    /// Map on quotients induced by `op` on the underlying tensor spaces.
    pub fn induced(&self, op: &Matrix, target: &Tensor) -> Matrix {
        self.sec.mul(op).mul(&target.proj)
    }

    /// `f (x) g` between balanced tensor products.
    pub fn map_pair(&self, f: &Matrix, g: &Matrix, target: &Tensor) -> Matrix {
        self.induced(&f.kron(g), target)
    }

    /// Factors a linear map on `X (x) N` (one row per basis tensor) through the quotient,
    /// after checking that it kills the relations.
    pub fn map_out(&self, table: &Matrix) -> Result<Matrix> {
        if table.rows() != self.left_dim * self.right_dim {
            return Err(FrobError::DimensionMismatch(
                "table rows must match the tensor space".into(),
            ));
        }
        if !self.relations.echelon().mul(table).is_zero() {
            return Err(FrobError::VerificationFailed("map is not balanced".into()));
        }
        Ok(self.sec.mul(table))
    }
}

/// A balanced tensor product together with its quotient data.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub bimodule: Bimodule,
    pub tensor: Tensor,
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.bimodule.dim()
    }
}

/// `X (x)_A M` for an `(C, A)`-bimodule `X` and an `(A, B)`-bimodule `M`.
pub fn tensor(x: &Bimodule, m: &Bimodule) -> Result<TensorProduct> {
    check_same(&x.right, &m.left, "middle algebras differ")?;
    let f = x.field();
    let mid = &m.left;
    let pairs: Vec<(Matrix, Matrix)> = mid
        .generators()
        .iter()
        .map(|g| (x.right_act(g), m.left_act(g)))
        .collect();
    let t = Tensor::new(f, x.dim, m.dim, &pairs);
    let ix = Matrix::identity(f, x.dim);
    let im = Matrix::identity(f, m.dim);
    let lambda = x
        .lambda
        .iter()
        .map(|l| t.induced(&l.kron(&im), &t))
        .collect();
    let rho = m.rho.iter().map(|r| t.induced(&ix.kron(r), &t)).collect();
    let b = Bimodule::new(x.left.clone(), m.right.clone(), t.dim(), lambda, rho)?;
    Ok(TensorProduct {
        bimodule: b,
        tensor: t,
    })
}

/// `X (x)_A M` for a right module `X`, as a right `B`-module.
pub fn tensor_module(x: &Representation, m: &Bimodule) -> Result<(Representation, TensorProduct)> {
    let tp = tensor(&Bimodule::from_right_module(x)?, m)?;
    Ok((tp.bimodule.right_module(), tp))
}

/// `(X (x) Y) (x) Z -> X (x) (Y (x) Z)`.
pub fn associator(xy: &Tensor, yz: &Tensor, xy_z: &Tensor, x_yz: &Tensor) -> Matrix {
    let f = xy.proj.field();
    let iz = Matrix::identity(f, yz.right_dim);
    let ix = Matrix::identity(f, xy.left_dim);
    xy_z.sec
        .mul(&xy.sec.kron(&iz))
        .mul(&ix.kron(&yz.proj))
        .mul(&x_yz.proj)
}

impl Bimodule {
    pub fn tensor(&self, other: &Bimodule) -> Result<TensorProduct> {
        tensor(self, other)
    }
}
