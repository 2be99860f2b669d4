use super::Bimodule;
use crate::error::Result;
use crate::exactla::{Matrix, Subspace};
use crate::module::intertwiners;

/// Which one-sided dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    /// `Hom_A(M, A)`.
    Left,
    /// `Hom_B(M, B)`.
    Right,
}

/// A one-sided dual of an `(A, B)`-bimodule, as a `(B, A)`-bimodule on an explicit basis of maps.
#[derive(Clone, Debug)]
pub struct Dual {
    pub side: Side,
    pub bimodule: Bimodule,
    /// Each basis map as a `dim M x dim(A or B)` matrix.
    pub basis: Vec<Matrix>,
    coords: Subspace,
    shape: (usize, usize),
}

impl Dual {
    pub fn new(m: &Bimodule, side: Side) -> Result<Dual> {
        let f = m.field();
        let n = m.dim();
        let (alg, pairs): (_, Vec<(Matrix, Matrix)>) = match side {
            Side::Left => {
                let a = m.left_algebra();
                (
                    a.clone(),
                    a.generators()
                        .iter()
                        .map(|g| (m.left_act(g), a.left_mul(g)))
                        .collect(),
                )
            }
            Side::Right => {
                let b = m.right_algebra();
                (
                    b.clone(),
                    b.generators()
                        .iter()
                        .map(|g| (m.right_act(g), b.right_mul(g)))
                        .collect(),
                )
            }
        };
        let basis = intertwiners(f, n, alg.dim(), &pairs);
        let k = basis.len();
        let flat = Matrix::from_row_vectors(
            f,
            n * alg.dim(),
            &basis.iter().map(|b| b.flatten()).collect::<Vec<_>>(),
        );
        let coords = Subspace::with_basis(&flat).expect("hom basis is independent");
        let coords_of = |x: &Matrix| {
            coords
                .coords(&x.flatten())
                .expect("dual is closed under the actions")
        };
        let (b_alg, a_alg) = (m.right_algebra().clone(), m.left_algebra().clone());
        let mut lambda = Vec::with_capacity(b_alg.dim());
        let mut rho = Vec::with_capacity(a_alg.dim());
        match side {
            Side::Left => {
                // (b . phi)(m) = phi(m b), (phi . a)(m) = phi(m) a
                for j in 0..b_alg.dim() {
                    let rows: Vec<Vec<u32>> = basis
                        .iter()
                        .map(|p| coords_of(&m.rho()[j].mul(p)))
                        .collect();
                    lambda.push(Matrix::from_row_vectors(f, k, &rows));
                }
                for i in 0..a_alg.dim() {
                    let ra = a_alg.right_mul_basis(i);
                    let rows: Vec<Vec<u32>> =
                        basis.iter().map(|p| coords_of(&p.mul(&ra))).collect();
                    rho.push(Matrix::from_row_vectors(f, k, &rows));
                }
            }
            Side::Right => {
                // (b . psi)(m) = b psi(m), (psi . a)(m) = psi(a m)
                for j in 0..b_alg.dim() {
                    let lb = b_alg.left_mul_basis(j);
                    let rows: Vec<Vec<u32>> =
                        basis.iter().map(|p| coords_of(&p.mul(&lb))).collect();
                    lambda.push(Matrix::from_row_vectors(f, k, &rows));
                }
                for i in 0..a_alg.dim() {
                    let rows: Vec<Vec<u32>> = basis
                        .iter()
                        .map(|p| coords_of(&m.lambda()[i].mul(p)))
                        .collect();
                    rho.push(Matrix::from_row_vectors(f, k, &rows));
                }
            }
        }
        let bimodule = Bimodule::new(b_alg, a_alg, k, lambda, rho)?;
        Ok(Dual {
            side,
            bimodule,
            basis,
            coords,
            shape: (n, alg.dim()),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a map, if it lies in the dual.
    pub fn coords(&self, map: &Matrix) -> Option<Vec<u32>> {
        self.coords.coords(&map.flatten())
    }

    /// The map with the given coordinates.
    pub fn element(&self, c: &[u32]) -> Matrix {
        let f = self.bimodule.field();
        let mut out = Matrix::zeros(f, self.shape.0, self.shape.1);
        for (ci, b) in c.iter().zip(&self.basis) {
            if *ci != 0 {
                out.add_scaled(*ci, b);
            }
        }
        out
    }

    /// `f(m)` for `f` in coordinates.
    pub fn eval(&self, c: &[u32], m: &[u32]) -> Vec<u32> {
        self.element(c).vec_mul(m)
    }

    /// Matrix of `f -> f o u` from `Hom(N, -)` (this dual, of `N`) to `Hom(M, -)` (`target`, of `M`)
    /// for a bimodule map `u: M -> N`.
    pub fn pullback(&self, u: &Matrix, target: &Dual) -> Option<Matrix> {
        let f = self.bimodule.field();
        let rows: Option<Vec<Vec<u32>>> = self
            .basis
            .iter()
            .map(|p| target.coords(&u.mul(p)))
            .collect();
        Some(Matrix::from_row_vectors(f, target.dim(), &rows?))
    }
}

impl Bimodule {
    pub fn dual(&self, side: Side) -> Result<Dual> {
        Dual::new(self, side)
    }
}
