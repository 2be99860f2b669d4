use std::sync::Arc;

use serde::Serialize;

use super::{AlgRef, Algebra};
use crate::error::{FrobError, Result};
use crate::exactla::{left_kernel, Matrix, Quotient, Subspace};

/// A corner algebra `e' A e'` with its embedding data.
#[derive(Clone, Debug)]
pub struct Corner {
    pub algebra: AlgRef,
    /// Points of the ambient algebra that survive (sorted).
    pub surviving: Vec<usize>,
    /// `e'` in ambient coordinates.
    pub idempotent: Vec<u32>,
    /// Corner basis, one ambient coordinate vector per row.
    pub inclusion: Matrix,
    /// `x -> e' x e'` from ambient coordinates to corner coordinates.
    pub compression: Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityReport {
    pub is_local: bool,
    pub is_semilocal: bool,
    pub points: usize,
}

impl Algebra {
    /// Rows form a basis of the Jacobson radical.
    pub fn radical(&self) -> Result<&Matrix> {
        self.radical
            .get_or_init(|| self.compute_radical())
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn compute_radical(&self) -> Result<Matrix> {
        let f = self.field;
        let d = self.dim;
        if f.p() as usize <= d {
            return Err(FrobError::InvalidAlgebra(format!(
                "trace-form radical needs p > dim (p = {}, dim = {})",
                f.p(),
                d
            )));
        }
        let traces: Vec<u32> = (0..d).map(|k| self.left_mul_basis(k).trace()).collect();
        let mut gram = Matrix::zeros(f, d, d);
        for i in 0..d {
            for j in 0..d {
                let v = self
                    .basis_product(i, j)
                    .iter()
                    .zip(&traces)
                    .fold(0, |acc, (&c, &t)| f.mul_add(acc, c, t));
                gram.set(i, j, v);
            }
        }
        let rad = left_kernel(&gram);
        if !self.is_nilpotent_span(&rad) {
            return Err(FrobError::RadicalNotNilpotent);
        }
        Ok(rad)
    }

    fn is_nilpotent_span(&self, basis: &Matrix) -> bool {
        if basis.rows() == 0 {
            return true;
        }
        let gens = basis.row_vecs();
        let mut power = gens.clone();
        for _ in 0..=self.dim {
            let mut next = Vec::new();
            for x in &power {
                for g in &gens {
                    next.push(self.mul(x, g));
                }
            }
            let s = self.span(&next);
            if s.dim() == 0 {
                return true;
            }
            power = s.echelon().row_vecs();
        }
        false
    }

    /// Basis of the radical as a subspace.
    pub fn radical_space(&self) -> Result<Subspace> {
        Ok(Subspace::span(self.radical()?))
    }

    /// `e x e` for every basis element, as rows spanning `e A e`.
    pub fn compress_basis(&self, e: &[u32], e2: &[u32]) -> Vec<Vec<u32>> {
        (0..self.dim)
            .map(|k| self.mul(&self.mul(e, &self.basis_vec(k)), e2))
            .collect()
    }

    /// `eAe` local: its semisimple quotient is a field.
    pub(crate) fn corner_is_local(&self, e: &[u32]) -> bool {
        let Ok(rad) = self.radical() else {
            return false;
        };
        let corner = self.span(&self.compress_basis(e, e));
        if corner.dim() == 0 {
            return false;
        }
        let rad_rows: Vec<Vec<u32>> = rad
            .row_vecs()
            .iter()
            .map(|r| self.mul(&self.mul(e, r), e))
            .collect();
        let crad = self.span(&rad_rows);
        // quotient D = eAe / eJe, with coordinates on a complement of eJe inside eAe
        let cbasis = corner.echelon().row_vecs();
        let to_corner = |v: &[u32]| corner.decompose(v).0;
        let crad_coords: Vec<Vec<u32>> = crad
            .echelon()
            .row_vecs()
            .iter()
            .map(|v| to_corner(v))
            .collect();
        let q = Quotient::new(Subspace::span(&Matrix::from_row_vectors(
            self.field,
            corner.dim(),
            &crad_coords,
        )));
        let dq = q.dim();
        if dq == 0 {
            return false;
        }
        let lift = |c: &[u32]| -> Vec<u32> {
            let cc = q.lift(c);
            let mut v = vec![0; self.dim];
            for (k, &x) in cc.iter().enumerate() {
                if x != 0 {
                    for (o, &b) in v.iter_mut().zip(&cbasis[k]) {
                        *o = self.field.mul_add(*o, x, b);
                    }
                }
            }
            v
        };
        let project = |v: &[u32]| q.project(&to_corner(v));
        let dbasis: Vec<Vec<u32>> = (0..dq)
            .map(|k| {
                let mut u = vec![0; dq];
                u[k] = 1;
                lift(&u)
            })
            .collect();
        // commutativity of D
        for i in 0..dq {
            for j in 0..i {
                let ab = self.mul(&dbasis[i], &dbasis[j]);
                let ba = self.mul(&dbasis[j], &dbasis[i]);
                if project(&self.sub(&ab, &ba)).iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        // Frobenius fixed space of a product of r finite fields has dimension r
        let p = self.field.p() as u64;
        let mut frob = Matrix::zeros(self.field, dq, dq);
        for (k, b) in dbasis.iter().enumerate() {
            let x = self.pow(b, p);
            frob.row_mut(k).copy_from_slice(&project(&x));
        }
        let fixed = left_kernel(&frob.sub(&Matrix::identity(self.field, dq)));
        fixed.rows() == 1
    }

    /// Groups idempotent indices into isomorphism classes of simples.
    pub fn points(&self) -> &[Vec<usize>] {
        self.points.get_or_init(|| self.compute_points())
    }

    fn compute_points(&self) -> Vec<Vec<usize>> {
        let n = self.idempotents.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        if let Ok(rad) = self.radical_space() {
            for i in 0..n {
                for j in (i + 1)..n {
                    let cross = self.compress_basis(&self.idempotents[i], &self.idempotents[j]);
                    if cross.iter().any(|v| !rad.contains(v)) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[b.max(a)] = a.min(b);
                    }
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match root_of[r] {
                Some(c) => classes[c].push(i),
                None => {
                    root_of[r] = Some(classes.len());
                    classes.push(vec![i]);
                }
            }
        }
        classes
    }

    /// `dim(S_x e_x)` for each point, i.e. `dim e_x A e_x - dim e_x J e_x`.
    pub fn simple_weights(&self) -> Result<&[usize]> {
        self.weights
            .get_or_init(|| {
                let rad = self.radical()?;
                Ok((0..self.num_points())
                    .map(|x| {
                        let e = self.point_idempotent(x);
                        let whole = self.span(&self.compress_basis(e, e)).dim();
                        let rows: Vec<Vec<u32>> = rad
                            .row_vecs()
                            .iter()
                            .map(|r| self.mul(&self.mul(e, r), e))
                            .collect();
                        whole - self.span(&rows).dim()
                    })
                    .collect())
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    pub fn num_points(&self) -> usize {
        self.points().len()
    }

    /// Representative idempotent of a point.
    pub fn point_idempotent(&self, x: usize) -> &[u32] {
        &self.idempotents[self.points()[x][0]]
    }

    /// Sum of all idempotents belonging to the given points.
    pub fn points_idempotent(&self, pts: &[usize]) -> Vec<u32> {
        let mut e = self.zero_vec();
        for &x in pts {
            for &i in &self.points()[x] {
                e = self.add(&e, &self.idempotents[i]);
            }
        }
        e
    }

    /// Generators: the idempotents plus basis elements added greedily.
    pub fn generators(&self) -> &[Vec<u32>] {
        self.generators.get_or_init(|| {
            let mut gens: Vec<Vec<u32>> = self.idempotents.clone();
            if gens.is_empty() && self.dim > 0 {
                gens.push(self.unit.clone());
            }
            let mut closure = self.closure(&gens);
            for k in 0..self.dim {
                let b = self.basis_vec(k);
                if !closure.contains(&b) {
                    gens.push(b);
                    closure = self.closure(&gens);
                }
            }
            gens
        })
    }

    /// Subalgebra generated by `gens` (with the unit).
    pub fn closure(&self, gens: &[Vec<u32>]) -> Subspace {
        let mut s = self.span(std::slice::from_ref(&self.unit));
        for g in gens {
            s.insert(g);
        }
        loop {
            let mut grew = false;
            let basis = s.echelon().row_vecs();
            for x in &basis {
                for g in gens {
                    if s.insert(&self.mul(x, g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return s;
            }
        }
    }

    /// Rows form a basis of the center.
    pub fn center(&self) -> Matrix {
        let mut blocks = Matrix::zeros(self.field, self.dim, 0);
        for g in self.generators() {
            blocks = blocks.hstack(&self.right_mul(g).sub(&self.left_mul(g)));
        }
        if self.dim > 0 && blocks.cols() == 0 {
            return Matrix::identity(self.field, self.dim);
        }
        left_kernel(&blocks)
    }

    /// `e' A e'` for the given surviving points.
    pub fn corner(&self, surviving: &[usize]) -> Result<Corner> {
        let mut surviving = surviving.to_vec();
        surviving.sort_unstable();
        surviving.dedup();
        if let Some(&x) = surviving.iter().find(|&&x| x >= self.num_points()) {
            return Err(FrobError::InvalidIdempotents(format!(
                "point {} out of range",
                x + 1
            )));
        }
        let e = self.points_idempotent(&surviving);
        let compressed = self.compress_basis(&e, &e);
        let span = self.span(&compressed);
        let basis = span.echelon().clone();
        let r = basis.rows();
        let f = self.field;
        let coords = Subspace::with_basis(&basis).expect("echelon rows are independent");
        let labels: Vec<String> = (0..r)
            .map(|k| {
                let row = basis.row(k);
                let nz: Vec<usize> = (0..self.dim).filter(|&j| row[j] != 0).collect();
                if nz.len() == 1 && row[nz[0]] == 1 {
                    self.labels[nz[0]].clone()
                } else {
                    format!("c{}", k + 1)
                }
            })
            .collect();
        let mut table = Vec::with_capacity(r * r * r);
        for i in 0..r {
            for j in 0..r {
                let prod = self.mul(basis.row(i), basis.row(j));
                table.extend(
                    coords
                        .coords(&prod)
                        .expect("corner is closed under products"),
                );
            }
        }
        let unit = if r == 0 {
            vec![]
        } else {
            coords.coords(&e).expect("e' lies in the corner")
        };
        let mut idems = Vec::new();
        for &x in &surviving {
            for &i in &self.points()[x] {
                idems.push(
                    coords
                        .coords(&self.idempotents[i])
                        .expect("idempotent lies in the corner"),
                );
            }
        }
        let alg = Algebra::raw(f, labels, table, unit, idems, self.primitive)?;
        if let Ok(rad) = self.radical() {
            let rows: Vec<Vec<u32>> = rad
                .row_vecs()
                .iter()
                .map(|v| self.mul(&self.mul(&e, v), &e))
                .collect();
            let cr = self.span(&rows);
            let rc: Vec<Vec<u32>> = cr
                .echelon()
                .row_vecs()
                .iter()
                .map(|v| coords.coords(v).unwrap())
                .collect();
            alg.set_radical(Matrix::from_row_vectors(f, r, &rc));
        }
        let compression = Matrix::from_row_vectors(
            f,
            r,
            &compressed
                .iter()
                .map(|v| coords.coords(v).unwrap())
                .collect::<Vec<_>>(),
        );
        Ok(Corner {
            algebra: Arc::new(alg),
            surviving,
            idempotent: e,
            inclusion: basis,
            compression,
        })
    }

    pub fn locality_report(&self) -> LocalityReport {
        let n = self.num_points();
        LocalityReport {
            is_local: n == 1,
            is_semilocal: true,
            points: n,
        }
    }
}
