use std::collections::BTreeMap;

use super::{classify::classify_in, restrict::restrict_bimodule, Setting};
use crate::algebra::{check_same, AlgRef, Corner};
use crate::bimodule::{frobenius_check, AdjointPair, Bimodule, FrobeniusCertificate};
use crate::error::{FrobError, Result};
use crate::exactla::{invert, Matrix, Subspace};
use crate::module::{intertwiners, search_iso, IsoSearch, StandardCatalog};
use crate::spectrum::{complement, LocalizingSubcat};

/// Local bimodules `M_t` over `(corner of V_t, corner of U_t)` for covers `{V_1, V_2}` of the
/// points of `A` and `{U_1, U_2}` of the points of `B`, each given by its killed set.
#[derive(Clone, Debug)]
pub struct GlueTask {
    pub left: AlgRef,
    pub right: AlgRef,
    pub cover_a: [Vec<usize>; 2],
    pub cover_b: [Vec<usize>; 2],
    pub local: [Bimodule; 2],
}

impl GlueTask {
    /// The restrictions of a global bimodule to `U_t` and `V_t = F^{-1} U_t`.
    pub fn from_global(m: &Bimodule, cover_b: [Vec<usize>; 2]) -> Result<GlueTask> {
        let pair = AdjointPair::new(m)?;
        let st = Setting::new(&pair)?;
        let (na, nb) = (st.points_a(), st.points_b());
        let cover_a = [st.preimage(&cover_b[0]), st.preimage(&cover_b[1])];
        let local = [0, 1].map(|t| {
            restrict_bimodule(
                m,
                &complement(na, &cover_a[t]),
                &complement(nb, &cover_b[t]),
            )
        });
        let [l0, l1] = local;
        Ok(GlueTask {
            left: m.left_algebra().clone(),
            right: m.right_algebra().clone(),
            cover_a,
            cover_b,
            local: [l0?, l1?],
        })
    }
}

#[derive(Debug)]
pub struct GlueOutcome {
    pub bimodule: Bimodule,
    pub certificate: FrobeniusCertificate,
    /// The glued bimodule restricts to each input.
    pub restrictions_agree: [bool; 2],
    pub right_localizing: bool,
}

fn hypothesis(msg: String) -> FrobError {
    FrobError::HypothesisFailure(msg)
}

fn closure_check(alg: &AlgRef, cover: &[Vec<usize>; 2], side: &str) -> Result<()> {
    let cat = StandardCatalog::new(alg)?;
    for (t, k) in cover.iter().enumerate() {
        let c = LocalizingSubcat::new(alg.clone(), k)?.closed_under_envelopes(&cat)?;
        if let Some((j, x)) = c.witness {
            return Err(hypothesis(format!(
                "T{} ({} side) not closed under injective envelopes: E{} has composition factor S{}",
                t + 1,
                side,
                j + 1,
                x + 1
            )));
        }
    }
    Ok(())
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

/// One local bimodule cut into pieces `e_i M e_j` indexed by global points.
struct Local<'a> {
    m: &'a Bimodule,
    ca: Corner,
    cb: Corner,
    pieces: BTreeMap<(usize, usize), (Matrix, Subspace)>,
    /// Basis and coordinates of the overlap part.
    overlap: (Matrix, Subspace),
}

impl<'a> Local<'a> {
    fn new(m: &'a Bimodule, ca: Corner, cb: Corner, ov_a: &[usize], ov_b: &[usize]) -> Result<Self> {
        let f = m.field();
        let mut pieces = BTreeMap::new();
        let mut overlap = Matrix::zeros(f, 0, m.dim());
        for (p, &i) in ca.surviving.iter().enumerate() {
            let lp = m.left_act(&ca.algebra.points_idempotent(&[p]));
            for (q, &j) in cb.surviving.iter().enumerate() {
                let proj = lp.mul(&m.right_act(&cb.algebra.points_idempotent(&[q])));
                let s = Subspace::span(&proj);
                let basis = s.echelon().clone();
                if ov_a.contains(&i) && ov_b.contains(&j) {
                    overlap = overlap.vstack(&basis);
                }
                pieces.insert((i, j), (basis, s));
            }
        }
        let ov = Subspace::with_basis(&overlap).expect("pieces are independent");
        Ok(Local {
            m,
            ca,
            cb,
            pieces,
            overlap: (overlap, ov),
        })
    }

    fn has(&self, i: usize, j: usize) -> bool {
        self.pieces.contains_key(&(i, j))
    }

    /// Action of an ambient element on the overlap, in overlap coordinates.
    fn on_overlap(&self, act: &Matrix) -> Matrix {
        let (basis, coords) = &self.overlap;
        let img = basis.mul(act);
        let rows: Vec<Vec<u32>> = (0..img.rows())
            .map(|r| coords.coords(img.row(r)).expect("overlap is stable"))
            .collect();
        Matrix::from_row_vectors(act.field(), basis.rows(), &rows)
    }
}

pub fn glue(task: &GlueTask, cfg: &IsoSearch) -> Result<GlueOutcome> {
    let (a, b) = (&task.left, &task.right);
    let (na, nb) = (a.num_points(), b.num_points());
    let sv = [0, 1].map(|t| complement(na, &task.cover_a[t]));
    let su = [0, 1].map(|t| complement(nb, &task.cover_b[t]));
    if let Some(x) = (0..na).find(|x| task.cover_a.iter().all(|k| k.contains(x))) {
        return Err(hypothesis(format!("V1, V2 do not cover point {} of A", x + 1)));
    }
    if let Some(y) = (0..nb).find(|y| task.cover_b.iter().all(|k| k.contains(y))) {
        return Err(hypothesis(format!("U1, U2 do not cover point {} of B", y + 1)));
    }
    closure_check(b, &task.cover_b, "B")?;
    closure_check(a, &task.cover_a, "A")?;

    let ov_a = intersect(&sv[0], &sv[1]);
    let ov_b = intersect(&su[0], &su[1]);
    let mut locals = Vec::new();
    for t in 0..2 {
        let m = &task.local[t];
        let ca = a.corner(&sv[t])?;
        let cb = b.corner(&su[t])?;
        check_same(m.left_algebra(), &ca.algebra, "")
            .and_then(|_| check_same(m.right_algebra(), &cb.algebra, ""))
            .map_err(|_| hypothesis(format!("M{} is not over the corner algebras of V{0}, U{0}", t + 1)))?;
        let pair = AdjointPair::new(m).map_err(|e| hypothesis(format!("M{}: {e}", t + 1)))?;
        frobenius_check(m, cfg).map_err(|e| hypothesis(format!("M{} is not Frobenius: {e}", t + 1)))?;
        let st = Setting::new(&pair)?;
        if let Some(w) = classify_in(&st, false)?.right_localizing.witness {
            return Err(hypothesis(format!("M{} is not right localizing: {w:?}", t + 1)));
        }
        // F_t^{-1}(U_1 n U_2), computed in the corner's own point indices
        let killed: Vec<usize> = (0..su[t].len()).filter(|&q| !ov_b.contains(&su[t][q])).collect();
        let pre = st.preimage(&killed);
        let surv: Vec<usize> = (0..sv[t].len())
            .filter(|p| !pre.contains(p))
            .map(|p| sv[t][p])
            .collect();
        if surv != ov_a {
            return Err(hypothesis(format!(
                "F{}^-1(U1 n U2) differs from V1 n V2",
                t + 1
            )));
        }
        locals.push(Local::new(m, ca, cb, &ov_a, &ov_b)?);
    }
    let theta = overlap_iso(a, b, &locals, &ov_a, &ov_b, cfg)?;
    let theta_inv = invert(&theta)?;
    let glued = assemble(a, b, &locals, &theta, &theta_inv)?;

    let certificate = frobenius_check(&glued, cfg)
        .map_err(|e| FrobError::VerificationFailed(format!("glued bimodule is not Frobenius: {e}")))?;
    let mut restrictions_agree = [false; 2];
    for t in 0..2 {
        let r = restrict_bimodule(&glued, &sv[t], &su[t])?;
        restrictions_agree[t] = r.iso_test(&task.local[t], cfg)?.is_iso();
    }
    let st = Setting::new(&certificate)?;
    let right_localizing = classify_in(&st, false)?.right_localizing.holds;
    Ok(GlueOutcome {
        bimodule: glued,
        certificate,
        restrictions_agree,
        right_localizing,
    })
}

/// An isomorphism between the overlap parts of the two local bimodules.
fn overlap_iso(
    a: &AlgRef,
    b: &AlgRef,
    locals: &[Local],
    ov_a: &[usize],
    ov_b: &[usize],
    cfg: &IsoSearch,
) -> Result<Matrix> {
    let f = a.field();
    let (d0, d1) = (locals[0].overlap.0.rows(), locals[1].overlap.0.rows());
    if d0 != d1 {
        return Err(hypothesis(format!(
            "restrictions to the overlap have dimensions {d0} and {d1}"
        )));
    }
    if ov_a.is_empty() || ov_b.is_empty() || d0 == 0 {
        return Ok(Matrix::identity(f, d0));
    }
    let oa = a.corner(ov_a)?;
    let ob = b.corner(ov_b)?;
    let mut pairs = Vec::new();
    for g in oa.algebra.generators() {
        let x = oa.inclusion.vec_mul(g);
        let acts: Vec<Matrix> = locals
            .iter()
            .map(|l| l.on_overlap(&l.m.left_act(&l.ca.compression.vec_mul(&x))))
            .collect();
        pairs.push((acts[0].clone(), acts[1].clone()));
    }
    for g in ob.algebra.generators() {
        let y = ob.inclusion.vec_mul(g);
        let acts: Vec<Matrix> = locals
            .iter()
            .map(|l| l.on_overlap(&l.m.right_act(&l.cb.compression.vec_mul(&y))))
            .collect();
        pairs.push((acts[0].clone(), acts[1].clone()));
    }
    let homs = intertwiners(f, d0, d1, &pairs);
    search_iso(f, &homs, cfg)
        .ok_or_else(|| hypothesis("restrictions to the overlap are not isomorphic".into()))
}

/// The glued space: each piece `(i, j)` is taken from the first local bimodule containing it.
struct Glued<'a> {
    locals: &'a [Local<'a>],
    theta: &'a Matrix,
    theta_inv: &'a Matrix,
    owner: BTreeMap<(usize, usize), (usize, usize)>,
    dim: usize,
}

impl Glued<'_> {
    fn transfer(&self, from: usize, v: &[u32]) -> Vec<u32> {
        let (src, to) = (&self.locals[from], &self.locals[1 - from]);
        let w = src.overlap.1.coords(v).expect("vector lies in the overlap");
        let t = if from == 0 { self.theta } else { self.theta_inv };
        to.overlap.0.vec_mul(&t.vec_mul(&w))
    }

    fn to_local(&self, s: usize, piece: (usize, usize), coeffs: &[u32]) -> Vec<u32> {
        let (o, _) = self.owner[&piece];
        let v = self.locals[o].pieces[&piece].0.vec_mul(coeffs);
        if o == s {
            v
        } else {
            self.transfer(o, &v)
        }
    }

    fn lift_local(&self, s: usize, piece: (usize, usize), v: &[u32]) -> Vec<u32> {
        let (o, _) = self.owner[&piece];
        let v = if o == s { v.to_vec() } else { self.transfer(s, v) };
        self.locals[o].pieces[&piece]
            .1
            .coords(&v)
            .expect("vector lies in the piece")
    }
}

fn assemble(
    a: &AlgRef,
    b: &AlgRef,
    locals: &[Local],
    theta: &Matrix,
    theta_inv: &Matrix,
) -> Result<Bimodule> {
    let f = a.field();
    let mut owner = BTreeMap::new();
    let mut dim = 0;
    for i in 0..a.num_points() {
        for j in 0..b.num_points() {
            if let Some(o) = (0..2).find(|&t| locals[t].has(i, j)) {
                owner.insert((i, j), (o, dim));
                dim += locals[o].pieces[&(i, j)].0.rows();
            }
        }
    }
    let g = Glued {
        locals,
        theta,
        theta_inv,
        owner,
        dim,
    };
    let ea: Vec<Vec<u32>> = (0..a.num_points()).map(|i| a.points_idempotent(&[i])).collect();
    let eb: Vec<Vec<u32>> = (0..b.num_points()).map(|j| b.points_idempotent(&[j])).collect();
    let mut lambda = Vec::with_capacity(a.dim());
    for c in 0..a.dim() {
        let x = a.basis_vec(c);
        lambda.push(act_on(&g, f, &ea, &x, |alg_x, l, v| {
            l.m.left_act(&l.ca.compression.vec_mul(alg_x)).vec_mul(v)
        }, a, true));
    }
    let mut rho = Vec::with_capacity(b.dim());
    for c in 0..b.dim() {
        let y = b.basis_vec(c);
        rho.push(act_on(&g, f, &eb, &y, |alg_y, l, v| {
            l.m.right_act(&l.cb.compression.vec_mul(alg_y)).vec_mul(v)
        }, b, false));
    }
    Bimodule::new(a.clone(), b.clone(), g.dim, lambda, rho)
        .map_err(|e| FrobError::VerificationFailed(format!("local data do not assemble: {e}")))
}

/// Matrix of one algebra element on the glued space; `left` selects which index moves.
fn act_on(
    g: &Glued,
    f: crate::exactla::Field,
    idem: &[Vec<u32>],
    x: &[u32],
    apply: impl Fn(&[u32], &Local, &[u32]) -> Vec<u32>,
    alg: &AlgRef,
    left: bool,
) -> Matrix {
    let mut out = Matrix::zeros(f, g.dim, g.dim);
    for (&(i, j), &(o, off)) in &g.owner {
        let d = g.locals[o].pieces[&(i, j)].0.rows();
        // the moving index and the fixed one
        let (from, fixed) = if left { (i, j) } else { (j, i) };
        for (to, e_to) in idem.iter().enumerate() {
            // left: e_to x e_from acting on piece (from, j); right: e_from x e_to on (i, from)
            let part = if left {
                alg.mul(&alg.mul(e_to, x), &idem[from])
            } else {
                alg.mul(&alg.mul(&idem[from], x), e_to)
            };
            if part.iter().all(|&v| v == 0) {
                continue;
            }
            let target = if left { (to, fixed) } else { (fixed, to) };
            let usable = |s: usize| {
                let l = &g.locals[s];
                l.has(i, j) && l.has(target.0, target.1)
                    && if left {
                        l.ca.surviving.contains(&to)
                    } else {
                        l.cb.surviving.contains(&to)
                    }
            };
            let Some(s) = [o, 1 - o].into_iter().find(|&s| usable(s)) else {
                continue;
            };
            let (_, toff) = g.owner[&target];
            for r in 0..d {
                let mut e = vec![0; d];
                e[r] = 1;
                let v = g.to_local(s, (i, j), &e);
                let y = apply(&part, &g.locals[s], &v);
                let coeffs = g.lift_local(s, target, &y);
                let row = out.row_mut(off + r);
                for (k, c) in coeffs.into_iter().enumerate() {
                    row[toff + k] = f.add(row[toff + k], c);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::fixtures;

    fn k5() -> AlgRef {
        Algebra::ground(fixtures::field(5)).unwrap()
    }

    #[test]
    fn obstruction_is_envelope_closure() {
        let a = fixtures::triangular_algebra();
        let c1 = a.corner(&[0]).unwrap();
        let c2 = a.corner(&[1]).unwrap();
        let task = GlueTask {
            left: a.clone(),
            right: a.clone(),
            cover_a: [vec![1], vec![0]],
            cover_b: [vec![1], vec![0]],
            local: [
                Bimodule::regular(c1.algebra.clone()),
                Bimodule::zero(c2.algebra.clone(), c2.algebra.clone()),
            ],
        };
        match glue(&task, &IsoSearch::default()) {
            Err(FrobError::HypothesisFailure(m)) => {
                assert!(m.contains("not closed under injective envelopes"), "{m}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_inputs_glue_to_zero() {
        let a = Algebra::product(&k5(), &k5()).unwrap();
        let c1 = a.corner(&[0]).unwrap();
        let c2 = a.corner(&[1]).unwrap();
        let task = GlueTask {
            left: a.clone(),
            right: a.clone(),
            cover_a: [vec![1], vec![0]],
            cover_b: [vec![1], vec![0]],
            local: [
                Bimodule::zero(c1.algebra.clone(), c1.algebra.clone()),
                Bimodule::zero(c2.algebra.clone(), c2.algebra.clone()),
            ],
        };
        let g = glue(&task, &IsoSearch::default()).unwrap();
        assert_eq!(g.bimodule.dim(), 0);
    }

    #[test]
    fn round_trip_with_overlap() {
        let k = Algebra::ground(fixtures::field(7)).unwrap();
        let t = fixtures::linear_quiver(7, 2).unwrap();
        let kt = Algebra::product(&k, &t).unwrap();
        let a = Algebra::product(&kt, &k).unwrap();
        let m = Bimodule::regular(a.clone());
        // points: k | two of the triangular block | k
        let task = GlueTask::from_global(&m, [vec![3], vec![0]]).unwrap();
        let g = glue(&task, &IsoSearch::default()).unwrap();
        assert_eq!(g.restrictions_agree, [true, true]);
        assert!(g.right_localizing);
        assert!(g.bimodule.iso_test(&m, &IsoSearch::default()).unwrap().is_iso());
    }
}
