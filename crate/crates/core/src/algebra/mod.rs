//! Finite-dimensional associative algebras given by structure constants.

mod construct;
mod quiver;
mod structure;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{FrobError, Result};
use crate::exactla::{Field, Matrix, Subspace};

pub use construct::{frobenius_map, AlgebraSpec};
pub use quiver::{Quiver, Relation};
pub use structure::{Corner, LocalityReport};

pub type AlgRef = Arc<Algebra>;

/// Basis `b_0..b_{d-1}` with products `b_i b_j = sum_k table[(i*d+j)*d+k] b_k`.
pub struct Algebra {
    field: Field,
    dim: usize,
    labels: Vec<String>,
    table: Vec<u32>,
    unit: Vec<u32>,
    idempotents: Vec<Vec<u32>>,
    primitive: bool,
    radical: OnceLock<Result<Matrix>>,
    generators: OnceLock<Vec<Vec<u32>>>,
    points: OnceLock<Vec<Vec<usize>>>,
    weights: OnceLock<Result<Vec<usize>>>,
}

/// One failed axiom, with the basis indices that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomFailure {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    NotIdempotent { i: usize },
    NotOrthogonal { i: usize, j: usize },
    SumNotUnit,
    NotLocal { i: usize },
    ZeroIdempotent { i: usize },
    SmallCharacteristic { p: u32, dim: usize },
    RadicalNotNilpotent,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::Associativity { i, j, k } => {
                write!(f, "associativity fails at ({i},{j},{k})")
            }
            AxiomFailure::LeftUnit { i } => write!(f, "unit*b{i} != b{i}"),
            AxiomFailure::RightUnit { i } => write!(f, "b{i}*unit != b{i}"),
            AxiomFailure::NotIdempotent { i } => write!(f, "e{i}^2 != e{i}"),
            AxiomFailure::NotOrthogonal { i, j } => write!(f, "e{i}*e{j} != 0"),
            AxiomFailure::SumNotUnit => write!(f, "sum of idempotents != unit"),
            AxiomFailure::NotLocal { i } => write!(f, "e{i} A e{i} is not local"),
            AxiomFailure::ZeroIdempotent { i } => write!(f, "e{i} is zero"),
            AxiomFailure::SmallCharacteristic { p, dim } => {
                write!(f, "p = {p} does not exceed dim = {dim}")
            }
            AxiomFailure::RadicalNotNilpotent => write!(f, "trace-form radical is not nilpotent"),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AlgebraReport {
    pub failures: Vec<AxiomFailure>,
}

impl AlgebraReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Algebra {
    /// Validates every axiom and rejects the data on the first failure.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        table: Vec<u32>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
    ) -> Result<AlgRef> {
        let a = Self::raw(field, labels, table, unit, idempotents, true)?;
        let report = a.validate();
        if let Some(fail) = report.failures.first() {
            return Err(match fail {
                AxiomFailure::RadicalNotNilpotent => FrobError::RadicalNotNilpotent,
                AxiomFailure::NotIdempotent { .. }
                | AxiomFailure::NotOrthogonal { .. }
                | AxiomFailure::SumNotUnit
                | AxiomFailure::NotLocal { .. }
                | AxiomFailure::ZeroIdempotent { .. } => {
                    FrobError::InvalidIdempotents(fail.to_string())
                }
                _ => FrobError::InvalidAlgebra(fail.to_string()),
            });
        }
        Ok(Arc::new(a))
    }

    /// Builds without validation. Shapes are still checked.
    pub(crate) fn raw(
        field: Field,
        labels: Vec<String>,
        table: Vec<u32>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
        primitive: bool,
    ) -> Result<Self> {
        let dim = labels.len();
        if table.len() != dim * dim * dim {
            return Err(FrobError::DimensionMismatch(format!(
                "structure table has {} entries, expected {}",
                table.len(),
                dim * dim * dim
            )));
        }
        if unit.len() != dim || idempotents.iter().any(|e| e.len() != dim) {
            return Err(FrobError::DimensionMismatch(
                "unit or idempotent length != dim".into(),
            ));
        }
        let p = field.p();
        let table = table.into_iter().map(|x| x % p).collect();
        Ok(Algebra {
            field,
            dim,
            labels,
            table,
            unit,
            idempotents,
            primitive,
            radical: OnceLock::new(),
            generators: OnceLock::new(),
            points: OnceLock::new(),
            weights: OnceLock::new(),
        })
    }

    pub(crate) fn set_radical(&self, r: Matrix) {
        let _ = self.radical.set(Ok(r));
    }

    pub(crate) fn set_generators(&self, g: Vec<Vec<u32>>) {
        let _ = self.generators.set(g);
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    pub fn idempotents(&self) -> &[Vec<u32>] {
        &self.idempotents
    }
    pub fn num_idempotents(&self) -> usize {
        self.idempotents.len()
    }
    /// False when the distinguished idempotents are not known to be primitive.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Coordinates of `b_i b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let d = self.dim;
        &self.table[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn zero_vec(&self) -> Vec<u32> {
        vec![0; self.dim]
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let p = f.p() as u64;
        let d = self.dim;
        let mut out = vec![0u64; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj) as u64;
                for (o, &t) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if t != 0 {
                        *o = (*o + c * t as u64) % p;
                    }
                }
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect()
    }

    pub fn scale(&self, c: u32, x: &[u32]) -> Vec<u32> {
        x.iter().map(|&a| self.field.mul(c, a)).collect()
    }

    pub fn pow(&self, x: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = self.unit.clone();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of `y -> x y` in the row convention.
    pub fn left_mul(&self, x: &[u32]) -> Matrix {
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|j| self.mul(x, &self.basis_vec(j)))
            .collect();
        Matrix::from_row_vectors(self.field, self.dim, &rows)
    }

    /// Matrix of `y -> y x` in the row convention.
    pub fn right_mul(&self, x: &[u32]) -> Matrix {
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|j| self.mul(&self.basis_vec(j), x))
            .collect();
        Matrix::from_row_vectors(self.field, self.dim, &rows)
    }

    /// Matrix with rows `(b_i b_j)` for fixed `j` as `i` varies, i.e. right multiplication by `b_j`.
    pub fn right_mul_basis(&self, j: usize) -> Matrix {
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|i| self.basis_product(i, j).to_vec())
            .collect();
        Matrix::from_row_vectors(self.field, self.dim, &rows)
    }

    pub fn left_mul_basis(&self, i: usize) -> Matrix {
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|j| self.basis_product(i, j).to_vec())
            .collect();
        Matrix::from_row_vectors(self.field, self.dim, &rows)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Checks every axiom and lists failures with witnesses.
    pub fn validate(&self) -> AlgebraReport {
        let mut failures = Vec::new();
        let d = self.dim;
        'assoc: for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..d {
                    let lhs = self.mul(&ij, &self.basis_vec(k));
                    let rhs = self.mul(&self.basis_vec(i), self.basis_product(j, k));
                    if lhs != rhs {
                        failures.push(AxiomFailure::Associativity { i, j, k });
                        break 'assoc;
                    }
                }
            }
        }
        for i in 0..d {
            let b = self.basis_vec(i);
            if self.mul(&self.unit, &b) != b {
                failures.push(AxiomFailure::LeftUnit { i });
                break;
            }
        }
        for i in 0..d {
            let b = self.basis_vec(i);
            if self.mul(&b, &self.unit) != b {
                failures.push(AxiomFailure::RightUnit { i });
                break;
            }
        }
        let n = self.idempotents.len();
        for i in 0..n {
            let e = &self.idempotents[i];
            if e.iter().all(|&x| x == 0) {
                failures.push(AxiomFailure::ZeroIdempotent { i });
            }
            if &self.mul(e, e) != e {
                failures.push(AxiomFailure::NotIdempotent { i });
            }
            for j in 0..n {
                if i != j && self.mul(e, &self.idempotents[j]).iter().any(|&x| x != 0) {
                    failures.push(AxiomFailure::NotOrthogonal { i, j });
                }
            }
        }
        let sum = self
            .idempotents
            .iter()
            .fold(self.zero_vec(), |acc, e| self.add(&acc, e));
        if sum != self.unit {
            failures.push(AxiomFailure::SumNotUnit);
        }
        if self.field.p() as usize <= d {
            failures.push(AxiomFailure::SmallCharacteristic {
                p: self.field.p(),
                dim: d,
            });
        }
        if failures.is_empty() {
            match self.radical() {
                Err(FrobError::RadicalNotNilpotent) => {
                    failures.push(AxiomFailure::RadicalNotNilpotent)
                }
                Err(_) => {}
                Ok(_) => {
                    for i in 0..n {
                        if !self.corner_is_local(&self.idempotents[i]) {
                            failures.push(AxiomFailure::NotLocal { i });
                        }
                    }
                }
            }
        }
        AlgebraReport { failures }
    }

    /// Span of the given elements as a subspace of coordinate space.
    pub fn span(&self, elems: &[Vec<u32>]) -> Subspace {
        Subspace::span(&Matrix::from_row_vectors(self.field, self.dim, elems))
    }

    /// Structural fingerprint used for cheap mismatch checks.
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field
                && self.dim == other.dim
                && self.table == other.table
                && self.unit == other.unit
                && self.idempotents == other.idempotents)
    }

    pub fn format_element(&self, x: &[u32]) -> String {
        let f = self.field;
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let s = f.signed(c);
                if s == 1 {
                    self.labels[i].clone()
                } else {
                    format!("{}*{}", s, self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Algebra<{:?}, dim {}, {:?}>",
            self.field, self.dim, self.labels
        )
    }
}

pub(crate) fn check_same(a: &Algebra, b: &Algebra, what: &str) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(FrobError::AlgebraMismatch(what.to_string()))
    }
}
