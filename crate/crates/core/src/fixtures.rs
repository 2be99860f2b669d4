//! Small algebras and bimodules used by the CLI examples, the tests and the bindings.

use crate::algebra::{frobenius_map, AlgRef, Algebra, Quiver};
use crate::bimodule::Bimodule;
use crate::error::Result;
use crate::exactla::{Field, Matrix};

pub fn field(p: u64) -> Field {
    Field::new(p).expect("fixture moduli are prime")
}

/// Lower triangular 2x2 matrices over `F_5`.
pub fn triangular_algebra() -> AlgRef {
    Algebra::lower_triangular(field(5), 2).expect("valid")
}

/// `R / I` for `R` lower triangular and `I` the first column, as an `(R, k)`-bimodule.
pub fn triangular() -> Result<Bimodule> {
    let r = triangular_algebra();
    let f = r.field();
    // basis E11, E21, E22
    let ideal = Matrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]], 3)?;
    Bimodule::quotient_by_ideal(r, &ideal, Algebra::ground(f)?, None)
}

/// `F_p x F_p` over `(F_p, F_p x F_p)` with the diagonal left action.
pub fn delta(p: u64) -> Result<Bimodule> {
    Bimodule::diagonal(Algebra::ground(field(p))?)
}

/// `F_49 = F_7[t] / (t^2 - 3)`.
pub fn f49() -> Result<AlgRef> {
    Algebra::field_extension(field(7), &[-3, 0, 1])
}

/// `[[F_7, 0], [F_49, F_49]]`.
pub fn twisted_algebra() -> Result<AlgRef> {
    Algebra::triangular_extension(field(7), &[-3, 0, 1])
}

/// The automorphism of `[[F_7, 0], [F_49, F_49]]` applying the Frobenius of `F_49` entrywise.
pub fn twisted_automorphism(r: &Algebra) -> Result<Matrix> {
    let k = f49()?;
    let sigma = frobenius_map(&k);
    let m = k.dim();
    let mut phi = Matrix::zeros(r.field(), r.dim(), r.dim());
    phi.set(0, 0, 1);
    for block in [1, 1 + m] {
        for i in 0..m {
            for j in 0..m {
                phi.set(block + i, block + j, sigma.get(i, j));
            }
        }
    }
    Ok(phi)
}

/// `1_R_phi` over the twisted algebra.
pub fn twisted_extension() -> Result<Bimodule> {
    let r = twisted_algebra()?;
    let phi = twisted_automorphism(&r)?;
    Bimodule::twist(r, &phi)
}

/// `1_K_phi` for `K = F_49` and the Frobenius `phi`.
pub fn twisted_field() -> Result<Bimodule> {
    let k = f49()?;
    let phi = frobenius_map(&k);
    Bimodule::twist(k, &phi)
}

/// Row vectors `F_p^{1 x n}` over `(F_p, M_n(F_p))`.
pub fn morita(p: u64, n: usize) -> Result<Bimodule> {
    let f = field(p);
    let k = Algebra::ground(f)?;
    let mn = Algebra::matrix_over(&k, n)?;
    let rho = (0..n * n)
        .map(|idx| {
            let mut e = Matrix::zeros(f, n, n);
            e.set(idx / n, idx % n, 1);
            e
        })
        .collect();
    Bimodule::new(k, mn, n, vec![Matrix::identity(f, n)], rho)
}

/// Path algebra of `1 -> 2 -> ... -> n` (arrows `a1..`) with no relations.
pub fn linear_quiver(p: u64, n: usize) -> Result<AlgRef> {
    let mut q = Quiver::new(n);
    for i in 0..n.saturating_sub(1) {
        q = q.arrow(i, i + 1, &format!("a{}", i + 1));
    }
    Algebra::path_algebra(field(p), &q, n)
}

/// Loop `x` at vertex 1 and an arrow `a: 2 -> 1`, with `x^2 = 0` and `a x = 0`.
pub fn loop_quiver(p: u64) -> Result<AlgRef> {
    let q = Quiver::new(2)
        .arrow(0, 0, "x")
        .arrow(1, 0, "a")
        .relation(vec![(1, vec![0, 0])])
        .relation(vec![(1, vec![1, 0])]);
    Algebra::path_algebra(field(p), &q, 3)
}

/// The diagonal bimodule over the loop quiver algebra.
pub fn loop_delta(p: u64) -> Result<Bimodule> {
    Bimodule::diagonal(loop_quiver(p)?)
}
