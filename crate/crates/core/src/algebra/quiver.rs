use std::collections::HashMap;

use super::{AlgRef, Algebra};
use crate::error::{FrobError, Result};
use crate::exactla::{Field, Matrix, Quotient, Subspace};

/// A finite quiver with relations. Vertices are `0..vertices`; paths compose left to right,
/// so an arrow `i -> j` satisfies `a = e_i a e_j`.
#[derive(Clone, Debug, Default)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize, String)>,
    pub relations: Vec<Relation>,
}

/// A linear combination of paths, each path a list of arrow indices.
#[derive(Clone, Debug, Default)]
pub struct Relation {
    pub terms: Vec<(i64, Vec<usize>)>,
}

type Path = (usize, Vec<usize>);

impl Quiver {
    pub fn new(vertices: usize) -> Self {
        Quiver {
            vertices,
            ..Default::default()
        }
    }

    pub fn arrow(mut self, from: usize, to: usize, label: &str) -> Self {
        self.arrows.push((from, to, label.to_string()));
        self
    }

    pub fn relation(mut self, terms: Vec<(i64, Vec<usize>)>) -> Self {
        self.relations.push(Relation { terms });
        self
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.2 == label)
    }

    fn endpoints(&self, path: &Path) -> (usize, usize) {
        match path.1.first() {
            None => (path.0, path.0),
            Some(&a) => (self.arrows[a].0, self.arrows[*path.1.last().unwrap()].1),
        }
    }

    fn validate(&self) -> Result<()> {
        for (i, (s, t, _)) in self.arrows.iter().enumerate() {
            if *s >= self.vertices || *t >= self.vertices {
                return Err(FrobError::InvalidAlgebra(format!(
                    "arrow {} has an endpoint out of range",
                    i
                )));
            }
        }
        for (ri, r) in self.relations.iter().enumerate() {
            let mut ends = None;
            for (_, path) in &r.terms {
                if path.is_empty() {
                    return Err(FrobError::InvalidAlgebra(format!(
                        "relation {} contains a trivial path",
                        ri + 1
                    )));
                }
                for w in path.windows(2) {
                    if self.arrows[w[0]].1 != self.arrows[w[1]].0 {
                        return Err(FrobError::InvalidAlgebra(format!(
                            "relation {} has a non-composable path",
                            ri + 1
                        )));
                    }
                }
                let e = self.endpoints(&(0, path.clone()));
                if *ends.get_or_insert(e) != e {
                    return Err(FrobError::InvalidAlgebra(format!(
                        "relation {} mixes paths with different endpoints",
                        ri + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// All paths of length `0..=max_len`.
    fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.vertices).map(|v| (v, vec![])).collect();
        let mut frontier: Vec<Path> = (0..self.arrows.len())
            .map(|a| (self.arrows[a].0, vec![a]))
            .collect();
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for p in &frontier {
                let end = self.arrows[*p.1.last().unwrap()].1;
                for (a, arr) in self.arrows.iter().enumerate() {
                    if arr.0 == end {
                        let mut q = p.1.clone();
                        q.push(a);
                        next.push((p.0, q));
                    }
                }
            }
            out.append(&mut frontier);
            frontier = next;
        }
        out
    }

    fn concat(&self, p: &Path, q: &Path) -> Option<Path> {
        if self.endpoints(p).1 != self.endpoints(q).0 {
            return None;
        }
        let mut v = p.1.clone();
        v.extend(&q.1);
        Some((p.0, v))
    }

    fn label(&self, p: &Path) -> String {
        if p.1.is_empty() {
            format!("e{}", p.0 + 1)
        } else {
            p.1.iter()
                .map(|&a| self.arrows[a].2.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl Algebra {
    /// `kQ / I`. Fails with `InfiniteDimensional` when no `N <= max_length` has every
    /// length-`N` path in the ideal.
    pub fn path_algebra(field: Field, q: &Quiver, max_length: usize) -> Result<AlgRef> {
        q.validate()?;
        let r = q
            .relations
            .iter()
            .flat_map(|r| r.terms.iter().map(|t| t.1.len()))
            .max()
            .unwrap_or(0);
        for n in 1..=max_length {
            if let Some(alg) = try_truncation(field, q, n, r)? {
                return Ok(alg);
            }
        }
        Err(FrobError::InfiniteDimensional(max_length))
    }
}

fn try_truncation(field: Field, q: &Quiver, n: usize, r: usize) -> Result<Option<AlgRef>> {
    let window = n + r;
    let mut paths = q.paths_up_to(window);
    // long paths first, so pivots of the ideal land on long paths
    paths.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.cmp(b)));
    if paths.len() > 4000 {
        return Ok(None);
    }
    let index: HashMap<Path, usize> = paths
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let total = paths.len();
    let short: Vec<&Path> = paths.iter().filter(|p| p.1.len() < n).collect();
    let mut ideal_rows: Vec<Vec<u32>> = Vec::new();
    let mut trunc_rows: Vec<Vec<u32>> = Vec::new();
    for rel in &q.relations {
        let rel_paths: Vec<(u32, Path)> = rel
            .terms
            .iter()
            .map(|(c, p)| (field.from_i64(*c), (q.arrows[p[0]].0, p.clone())))
            .collect();
        let (s, t) = q.endpoints(&rel_paths[0].1);
        for u in paths.iter().filter(|u| q.endpoints(u).1 == s) {
            for v in paths
                .iter()
                .filter(|v| q.endpoints(v).0 == t && u.1.len() + v.1.len() <= n)
            {
                let mut row = vec![0u32; total];
                let mut trow = vec![0u32; total];
                for (c, p) in &rel_paths {
                    let w = q.concat(&q.concat(u, p).unwrap(), v).unwrap();
                    let len = w.1.len();
                    let i = index[&w];
                    row[i] = field.add(row[i], *c);
                    if len < n {
                        trow[i] = field.add(trow[i], *c);
                    }
                }
                ideal_rows.push(row);
                trow.iter().any(|&x| x != 0).then(|| trunc_rows.push(trow));
            }
        }
    }
    let ideal = Subspace::span(&Matrix::from_row_vectors(field, total, &ideal_rows));
    let all_long_killed = paths.iter().filter(|p| p.1.len() == n).all(|p| {
        let mut e = vec![0u32; total];
        e[index[p]] = 1;
        ideal.contains(&e)
    });
    if !all_long_killed {
        return Ok(None);
    }
    // restrict to paths of length < n
    let short_cols: Vec<usize> = short.iter().map(|p| index[*p]).collect();
    let m = short_cols.len();
    let sub_rows: Vec<Vec<u32>> = trunc_rows
        .iter()
        .map(|row| short_cols.iter().map(|&c| row[c]).collect())
        .collect();
    let quot = Quotient::new(Subspace::span(&Matrix::from_row_vectors(
        field, m, &sub_rows,
    )));
    let basis_paths: Vec<&Path> = quot.complement.iter().map(|&k| short[k]).collect();
    let d = basis_paths.len();
    let short_index: HashMap<&Path, usize> =
        short.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut table = Vec::with_capacity(d * d * d);
    for a in &basis_paths {
        for b in &basis_paths {
            let mut v = vec![0u32; m];
            if let Some(w) = q.concat(a, b) {
                if w.1.len() < n {
                    v[short_index[&w]] = 1;
                }
            }
            table.extend(quot.project(&v));
        }
    }
    let labels: Vec<String> = basis_paths.iter().map(|p| q.label(p)).collect();
    let idems: Vec<Vec<u32>> = (0..q.vertices)
        .map(|vtx| {
            let mut v = vec![0u32; m];
            v[short_index[&(vtx, vec![])]] = 1;
            quot.project(&v)
        })
        .collect();
    let mut unit = vec![0u32; d];
    for e in &idems {
        for (u, &x) in unit.iter_mut().zip(e) {
            *u = field.add(*u, x);
        }
    }
    Algebra::new(field, labels, table, unit, idems).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_a3_has_dim_six() {
        let f = Field::new(7).unwrap();
        let q = Quiver::new(3).arrow(0, 1, "a").arrow(1, 2, "b");
        let a = Algebra::path_algebra(f, &q, 8).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.radical().unwrap().rows(), 3);
    }

    #[test]
    fn loop_without_relation_is_infinite() {
        let f = Field::new(7).unwrap();
        let q = Quiver::new(1).arrow(0, 0, "x");
        assert_eq!(
            Algebra::path_algebra(f, &q, 5).unwrap_err(),
            FrobError::InfiniteDimensional(5)
        );
    }

    #[test]
    fn loop_with_square_zero() {
        let f = Field::new(7).unwrap();
        let q = Quiver::new(2)
            .arrow(0, 0, "x")
            .arrow(1, 0, "a")
            .relation(vec![(1, vec![0, 0])])
            .relation(vec![(1, vec![1, 0])]);
        let a = Algebra::path_algebra(f, &q, 6).unwrap();
        // e1, e2, x, a
        assert_eq!(a.dim(), 4);
    }
}
