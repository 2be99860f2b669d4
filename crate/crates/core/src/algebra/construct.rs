use std::sync::Arc;

use super::{AlgRef, Algebra, Quiver};
use crate::error::{FrobError, Result};
use crate::exactla::{Field, Matrix};

/// Ways to build an algebra.
#[derive(Clone, Debug)]
pub enum AlgebraSpec {
    Raw {
        labels: Vec<String>,
        table: Vec<u32>,
        unit: Vec<u32>,
        idempotents: Vec<Vec<u32>>,
    },
    Ground,
    Path {
        quiver: Quiver,
        max_length: usize,
    },
    FieldExtension {
        poly: Vec<i64>,
    },
    Product(AlgRef, AlgRef),
    Opposite(AlgRef),
    MatrixOver(AlgRef, usize),
    LowerTriangular(usize),
    /// `[[F_p, 0], [K, K]]` with `K = F_p[t]/(poly)`.
    TriangularExtension {
        poly: Vec<i64>,
    },
}

impl AlgebraSpec {
    pub fn build(&self, field: Field) -> Result<AlgRef> {
        match self {
            AlgebraSpec::Raw {
                labels,
                table,
                unit,
                idempotents,
            } => Algebra::new(
                field,
                labels.clone(),
                table.clone(),
                unit.clone(),
                idempotents.clone(),
            ),
            AlgebraSpec::Ground => Algebra::ground(field),
            AlgebraSpec::Path { quiver, max_length } => {
                Algebra::path_algebra(field, quiver, *max_length)
            }
            AlgebraSpec::FieldExtension { poly } => Algebra::field_extension(field, poly),
            AlgebraSpec::Product(a, b) => Algebra::product(a, b),
            AlgebraSpec::Opposite(a) => Ok(Algebra::opposite(a)),
            AlgebraSpec::MatrixOver(a, n) => Algebra::matrix_over(a, *n),
            AlgebraSpec::LowerTriangular(n) => Algebra::lower_triangular(field, *n),
            AlgebraSpec::TriangularExtension { poly } => Algebra::triangular_extension(field, poly),
        }
    }
}

fn table_from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Vec<u32>) -> Vec<u32> {
    let mut t = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            t.extend(f(i, j));
        }
    }
    t
}

fn one_hot(d: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

impl Algebra {
    /// The ground field as a 1-dimensional algebra.
    pub fn ground(field: Field) -> Result<AlgRef> {
        Algebra::new(field, vec!["1".into()], vec![1], vec![1], vec![vec![1]])
    }

    /// Lower triangular `n x n` matrices; basis `E_ij` (i >= j) in row-major order.
    pub fn lower_triangular(field: Field, n: usize) -> Result<AlgRef> {
        let mut idx = Vec::new();
        for i in 0..n {
            for j in 0..=i {
                idx.push((i, j));
            }
        }
        let d = idx.len();
        let pos = |i: usize, j: usize| idx.iter().position(|&x| x == (i, j));
        let labels = idx
            .iter()
            .map(|(i, j)| format!("E{}{}", i + 1, j + 1))
            .collect();
        let table = table_from_fn(d, |a, b| {
            let (i, j) = idx[a];
            let (k, l) = idx[b];
            if j == k {
                one_hot(d, pos(i, l).unwrap())
            } else {
                vec![0; d]
            }
        });
        let idems: Vec<Vec<u32>> = (0..n).map(|i| one_hot(d, pos(i, i).unwrap())).collect();
        let unit = idems.iter().fold(vec![0; d], |acc, e| {
            acc.iter().zip(e).map(|(a, b)| a + b).collect()
        });
        Algebra::new(field, labels, table, unit, idems)
    }

    /// `F_p[t]/(poly)`; `poly` lists coefficients from the constant term up and must be monic.
    pub fn field_extension(field: Field, poly: &[i64]) -> Result<AlgRef> {
        let poly: Vec<u32> = poly.iter().map(|&c| field.from_i64(c)).collect();
        let m = poly.len().saturating_sub(1);
        if m == 0 || poly[m] != 1 {
            return Err(FrobError::InvalidAlgebra(
                "extension polynomial must be monic of degree >= 1".into(),
            ));
        }
        if !poly_irreducible(field, &poly) {
            return Err(FrobError::ReduciblePolynomial(field.p()));
        }
        let labels: Vec<String> = (0..m)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t{k}"),
            })
            .collect();
        let table = table_from_fn(m, |i, j| {
            poly_mulmod(field, &one_hot(m, i), &one_hot(m, j), &poly)
        });
        Algebra::new(field, labels, table, one_hot(m, 0), vec![one_hot(m, 0)])
    }

    pub fn product(a: &Algebra, b: &Algebra) -> Result<AlgRef> {
        if a.field != b.field {
            return Err(FrobError::FieldMismatch(a.field.p(), b.field.p()));
        }
        let (da, db) = (a.dim, b.dim);
        let d = da + db;
        let mut labels: Vec<String> = a.labels.iter().map(|l| format!("{l}'1")).collect();
        labels.extend(b.labels.iter().map(|l| format!("{l}'2")));
        let table = table_from_fn(d, |i, j| {
            let mut v = vec![0; d];
            if i < da && j < da {
                v[..da].copy_from_slice(a.basis_product(i, j));
            } else if i >= da && j >= da {
                v[da..].copy_from_slice(b.basis_product(i - da, j - da));
            }
            v
        });
        let mut unit = a.unit.clone();
        unit.extend(&b.unit);
        let mut idems: Vec<Vec<u32>> = a
            .idempotents
            .iter()
            .map(|e| {
                let mut v = e.clone();
                v.extend(vec![0; db]);
                v
            })
            .collect();
        idems.extend(b.idempotents.iter().map(|e| {
            let mut v = vec![0; da];
            v.extend(e);
            v
        }));
        Algebra::new(a.field, labels, table, unit, idems)
    }

    /// Same basis with reversed multiplication.
    pub fn opposite(a: &Algebra) -> AlgRef {
        let d = a.dim;
        let table = table_from_fn(d, |i, j| a.basis_product(j, i).to_vec());
        let alg = Algebra::raw(
            a.field,
            a.labels.clone(),
            table,
            a.unit.clone(),
            a.idempotents.clone(),
            a.primitive,
        )
        .expect("shapes copied from a valid algebra");
        if let Some(Ok(r)) = a.radical.get() {
            alg.set_radical(r.clone());
        }
        if let Some(g) = a.generators.get() {
            alg.set_generators(g.clone());
        }
        Arc::new(alg)
    }

    /// `M_n(A)`; basis `E_rs (x) b_k` at index `(r*n+s)*dim(A)+k`.
    pub fn matrix_over(a: &Algebra, n: usize) -> Result<AlgRef> {
        let da = a.dim;
        let d = n * n * da;
        let idx = |r: usize, s: usize, k: usize| (r * n + s) * da + k;
        let mut labels = Vec::with_capacity(d);
        for r in 0..n {
            for s in 0..n {
                for k in 0..da {
                    labels.push(if da == 1 {
                        format!("E{}{}", r + 1, s + 1)
                    } else {
                        format!("E{}{}.{}", r + 1, s + 1, a.labels[k])
                    });
                }
            }
        }
        let table = table_from_fn(d, |i, j| {
            let (rs, k) = (i / da, i % da);
            let (tu, l) = (j / da, j % da);
            let (r, s) = (rs / n, rs % n);
            let (t, u) = (tu / n, tu % n);
            let mut v = vec![0; d];
            if s == t {
                for (m, &c) in a.basis_product(k, l).iter().enumerate() {
                    v[idx(r, u, m)] = c;
                }
            }
            v
        });
        let mut unit = vec![0; d];
        for r in 0..n {
            for (k, &c) in a.unit.iter().enumerate() {
                unit[idx(r, r, k)] = c;
            }
        }
        let mut idems = Vec::new();
        for r in 0..n {
            for e in &a.idempotents {
                let mut v = vec![0; d];
                for (k, &c) in e.iter().enumerate() {
                    v[idx(r, r, k)] = c;
                }
                idems.push(v);
            }
        }
        Algebra::new(a.field, labels, table, unit, idems)
    }

    /// `[[F_p, 0], [K, K]]` with `K = F_p[t]/(poly)`. Basis `E11, E21, E21t.., E22, E22t..`.
    pub fn triangular_extension(field: Field, poly: &[i64]) -> Result<AlgRef> {
        let k = Algebra::field_extension(field, poly)?;
        let m = k.dim;
        let d = 1 + 2 * m;
        let suffix = |j: usize| {
            if j == 0 {
                String::new()
            } else {
                k.labels[j].clone()
            }
        };
        let mut labels = vec!["E11".to_string()];
        labels.extend((0..m).map(|j| format!("E21{}", suffix(j))));
        labels.extend((0..m).map(|j| format!("E22{}", suffix(j))));
        // entries: (a, b, c) <-> [[a,0],[b,c]], a in F_p, b, c in K
        let split = |i: usize| -> (u32, Vec<u32>, Vec<u32>) {
            let mut b = vec![0; m];
            let mut c = vec![0; m];
            let mut a = 0;
            if i == 0 {
                a = 1;
            } else if i <= m {
                b[i - 1] = 1;
            } else {
                c[i - 1 - m] = 1;
            }
            (a, b, c)
        };
        let table = table_from_fn(d, |i, j| {
            let (a1, b1, c1) = split(i);
            let (a2, b2, c2) = split(j);
            // [[a1,0],[b1,c1]] [[a2,0],[b2,c2]] = [[a1a2,0],[b1 a2 + c1 b2, c1 c2]]
            let a = field.mul(a1, a2);
            let b: Vec<u32> = {
                let c1b2 = k.mul(&c1, &b2);
                b1.iter()
                    .zip(&c1b2)
                    .map(|(&x, &y)| field.add(field.mul(x, a2), y))
                    .collect()
            };
            let c = k.mul(&c1, &c2);
            let mut v = vec![a];
            v.extend(b);
            v.extend(c);
            v
        });
        let e1 = one_hot(d, 0);
        let e2 = one_hot(d, 1 + m);
        let unit: Vec<u32> = e1.iter().zip(&e2).map(|(a, b)| a + b).collect();
        Algebra::new(field, labels, table, unit, vec![e1, e2])
    }

    /// `A (x) B` with basis `a_i (x) b_j` at index `i*dim(B)+j`; primitivity of `e_i (x) f_j` is
    /// re-verified and the result is flagged non-primitive when it fails.
    pub fn tensor(a: &Algebra, b: &Algebra) -> Result<AlgRef> {
        if a.field != b.field {
            return Err(FrobError::FieldMismatch(a.field.p(), b.field.p()));
        }
        let f = a.field;
        let (da, db) = (a.dim, b.dim);
        let d = da * db;
        let kron = |x: &[u32], y: &[u32]| -> Vec<u32> {
            let mut v = vec![0; d];
            for (i, &xi) in x.iter().enumerate() {
                if xi != 0 {
                    for (j, &yj) in y.iter().enumerate() {
                        v[i * db + j] = f.mul(xi, yj);
                    }
                }
            }
            v
        };
        let mut labels = Vec::with_capacity(d);
        for la in &a.labels {
            for lb in &b.labels {
                labels.push(format!("{la}|{lb}"));
            }
        }
        let table = table_from_fn(d, |i, j| {
            kron(
                a.basis_product(i / db, j / db),
                b.basis_product(i % db, j % db),
            )
        });
        let unit = kron(&a.unit, &b.unit);
        let mut idems = Vec::new();
        for e in &a.idempotents {
            for g in &b.idempotents {
                idems.push(kron(e, g));
            }
        }
        let alg = Algebra::raw(f, labels, table, unit.clone(), idems, true)?;
        let mut gens: Vec<Vec<u32>> = a.generators().iter().map(|g| kron(g, &b.unit)).collect();
        gens.extend(b.generators().iter().map(|h| kron(&a.unit, h)));
        alg.set_generators(gens);
        // rad(A (x) B) = rad A (x) B + A (x) rad B over a perfect field
        if let (Ok(ra), Ok(rb)) = (a.radical(), b.radical()) {
            let mut rows = Vec::new();
            for r in ra.row_vecs() {
                for j in 0..db {
                    rows.push(kron(&r, &one_hot(db, j)));
                }
            }
            for r in rb.row_vecs() {
                for i in 0..da {
                    rows.push(kron(&one_hot(da, i), &r));
                }
            }
            let rad = alg.span(&rows).echelon().clone();
            alg.set_radical(rad);
            let primitive = alg.idempotents.iter().all(|e| alg.corner_is_local(e));
            let alg = Algebra { primitive, ..alg };
            return Ok(Arc::new(alg));
        }
        Ok(Arc::new(Algebra {
            primitive: false,
            ..alg
        }))
    }

    /// `A^op (x) B`, acting on (A,B)-bimodules by `m (a (x) b) = a m b`.
    pub fn enveloping(a: &Algebra, b: &Algebra) -> Result<AlgRef> {
        let op = Algebra::opposite(a);
        Algebra::tensor(&op, b)
    }
}

/// Matrix of `x -> x^p` on a commutative algebra (an automorphism when the algebra is a
/// product of fields).
pub fn frobenius_map(a: &Algebra) -> Matrix {
    let p = a.field.p() as u64;
    let rows: Vec<Vec<u32>> = (0..a.dim).map(|i| a.pow(&a.basis_vec(i), p)).collect();
    Matrix::from_row_vectors(a.field, a.dim, &rows)
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_rem(f: Field, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - dm + k;
            r[idx] = f.sub(r[idx], f.mul(c, mk));
        }
        r = trim(r);
    }
    r
}

fn poly_mul(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.mul_add(out[i + j], x, y);
        }
    }
    trim(out)
}

/// Product modulo `m`, padded to `deg m` coefficients.
fn poly_mulmod(f: Field, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = poly_rem(f, &poly_mul(f, a, b), m);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_gcd(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `gcd(f, x^(p^i) - x) = 1` for all `i <= deg/2`.
fn poly_irreducible(f: Field, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..deg / 2 {
        // xp <- xp^p mod m
        let mut acc = vec![1];
        let mut base = xp.clone();
        let mut e = f.p() as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = trim(poly_mulmod(f, &acc, &base, m));
            }
            base = trim(poly_mulmod(f, &base, &base, m));
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = f.sub(diff[1], 1);
        let g = poly_gcd(f, m, &diff);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        let f = Field::new(7).unwrap();
        // t^2 - 3: 3 is not a square mod 7
        assert!(poly_irreducible(f, &[4, 0, 1]));
        // t^2 - 2 = (t-3)(t+3) mod 7
        assert!(!poly_irreducible(f, &[5, 0, 1]));
        let f5 = Field::new(5).unwrap();
        // t^3 + t + 1 over F_5 has no roots
        assert!(poly_irreducible(f5, &[1, 1, 0, 1]));
    }
}
