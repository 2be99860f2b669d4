use super::{rref, Field, Matrix};

/// A subspace of F_p^n held in reduced row-echelon form.
///
/// When built with [`Subspace::with_basis`] it also remembers how each echelon row is
/// expressed in the supplied basis, so coordinates relative to that basis are available.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    echelon: Matrix,
    pivots: Vec<usize>,
    to_basis: Option<Matrix>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            echelon: Matrix::zeros(field, 0, ambient),
            pivots: vec![],
            to_basis: None,
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            echelon: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
            to_basis: None,
        }
    }

    /// Row span of `m`.
    pub fn span(m: &Matrix) -> Self {
        let (reduced, pivots) = rref::rref_only(m);
        let echelon = reduced.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        Subspace {
            field: m.field(),
            ambient: m.cols(),
            echelon,
            pivots,
            to_basis: None,
        }
    }

    /// Row span of `basis`, whose rows must be independent.
    pub fn with_basis(basis: &Matrix) -> Option<Self> {
        let r = rref::rref(basis);
        if r.rank != basis.rows() {
            return None;
        }
        Some(Subspace {
            field: basis.field(),
            ambient: basis.cols(),
            echelon: r.reduced,
            pivots: r.pivots,
            to_basis: Some(r.transform),
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn echelon(&self) -> &Matrix {
        &self.echelon
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Eliminates pivot columns of `v`; returns (coefficients on echelon rows, residual).
    pub fn decompose(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = v.to_vec();
        let mut coeffs = vec![0u32; self.dim()];
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = r[pc];
            if c == 0 {
                continue;
            }
            coeffs[k] = c;
            let nc = f.neg(c);
            for (x, &e) in r.iter_mut().zip(self.echelon.row(k)) {
                if e != 0 {
                    *x = f.mul_add(*x, nc, e);
                }
            }
        }
        (coeffs, r)
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        self.decompose(v).1
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_all(&self, m: &Matrix) -> bool {
        (0..m.rows()).all(|i| self.contains(m.row(i)))
    }

    /// Coordinates of `v` relative to the basis given at construction.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        let (c, r) = self.decompose(v);
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        Some(match &self.to_basis {
            Some(t) => t.vec_mul(&c),
            None => c,
        })
    }

    /// Non-pivot columns: the standard vectors on these columns span a complement.
    pub fn complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Adds `v`; returns true when the dimension grew. Forgets any basis tracking.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let r = self.reduce(v);
        if r.iter().all(|&x| x == 0) {
            return false;
        }
        self.to_basis = None;
        let stacked = self.echelon.vstack(&Matrix::row_vector(self.field, &r));
        *self = Subspace::span(&stacked);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.echelon.vstack(&other.echelon))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x = u*A = w*B  <=>  [u | w] * [A; -B] = 0
        let f = self.field;
        let stacked = self.echelon.vstack(&other.echelon.scale(f.neg(1 % f.p())));
        let k = rref::left_kernel(&stacked);
        let u = k.submatrix(0, 0, k.rows(), self.dim());
        Subspace::span(&u.mul(&self.echelon))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.pivots == other.pivots && self.echelon == other.echelon
    }
}

/// Quotient `V / W` with coordinates on the complement columns of `W`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub sub: Subspace,
    pub complement: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let complement = sub.complement();
        Quotient { sub, complement }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let r = self.sub.reduce(v);
        self.complement.iter().map(|&j| r[j]).collect()
    }

    /// Lift of a quotient coordinate vector to the ambient space.
    pub fn lift(&self, q: &[u32]) -> Vec<u32> {
        let mut v = vec![0u32; self.sub.ambient()];
        for (&j, &x) in self.complement.iter().zip(q) {
            v[j] = x;
        }
        v
    }

    /// Matrix of the map induced on the quotient by `m` (ambient -> ambient' / sub').
    pub fn induced(&self, m: &Matrix, target: &Quotient) -> Matrix {
        let f = m.field();
        let rows: Vec<Vec<u32>> = self
            .complement
            .iter()
            .map(|&j| target.project(m.row(j)))
            .collect();
        Matrix::from_row_vectors(f, target.dim(), &rows)
    }

    /// Projection matrix ambient -> quotient.
    pub fn projection(&self) -> Matrix {
        let f = self.sub.field();
        let n = self.sub.ambient();
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                self.project(&e)
            })
            .collect();
        Matrix::from_row_vectors(f, self.dim(), &rows)
    }

    /// Lift matrix quotient -> ambient (standard vectors on complement columns).
    pub fn section(&self) -> Matrix {
        let f = self.sub.field();
        let rows: Vec<Vec<u32>> = (0..self.dim())
            .map(|k| {
                let mut e = vec![0u32; self.dim()];
                e[k] = 1;
                self.lift(&e)
            })
            .collect();
        Matrix::from_row_vectors(f, self.sub.ambient(), &rows)
    }
}
