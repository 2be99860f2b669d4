use serde::Serialize;

use super::{classify::classify_in, ranks::rank_report_in, subset, Setting};
use crate::algebra::AlgRef;
use crate::bimodule::{frobenius_check, hom_functor, tensor_module, AdjointPair, Bimodule, FrobeniusCertificate};
use crate::error::{FrobError, Result};
use crate::exactla::{invert, rank, Matrix, Subspace};
use crate::module::{injective_decompose, iso_test, IsoSearch, Representation, StandardCatalog};
use crate::spectrum::{complement, lattice, EnvelopeClosure, LocalizingSubcat};

/// `e' M e''` over `(e'Ae', e''Be'')` for the given surviving points.
pub fn restrict_bimodule(m: &Bimodule, surviving_a: &[usize], surviving_b: &[usize]) -> Result<Bimodule> {
    let ca = m.left_algebra().corner(surviving_a)?;
    let cb = m.right_algebra().corner(surviving_b)?;
    Bimodule::corner_slice(m, &ca, &cb)
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    /// Killed set of `U` on the `B` side.
    pub killed_b: Vec<usize>,
    /// Killed set of `F^{-1} U` on the `A` side.
    pub killed_a: Vec<usize>,
    pub surviving_b: Vec<usize>,
    pub surviving_a: Vec<usize>,
    /// `T_U` is contained in `G^{-1} F^{-1} T_U`.
    pub hypothesis: bool,
    pub restricted_dim: usize,
    pub frobenius: bool,
    pub failure: Option<String>,
    /// `j_*` exact on each side.
    pub pushforward_exact_a: bool,
    pub pushforward_exact_b: bool,
    /// Both projection formulas on the corner catalogs, checked when the restriction is Frobenius.
    pub projection_formulas: Option<[bool; 2]>,
    #[serde(skip)]
    pub restricted: Option<Bimodule>,
    #[serde(skip)]
    pub certificate: Option<Box<FrobeniusCertificate>>,
}

pub fn restrict(pair: &AdjointPair, u: &LocalizingSubcat, cfg: &IsoSearch) -> Result<RestrictionReport> {
    restrict_in(&Setting::new(pair)?, &u.killed, cfg)
}

pub(crate) fn restrict_in(st: &Setting, killed_b: &[usize], cfg: &IsoSearch) -> Result<RestrictionReport> {
    let m = &st.pair.bimodule;
    let (a, b) = (m.left_algebra().clone(), m.right_algebra().clone());
    let killed_b = LocalizingSubcat::new(b.clone(), killed_b)?.killed;
    let killed_a = st.preimage(&killed_b);
    let surviving_b = complement(st.points_b(), &killed_b);
    let surviving_a = complement(st.points_a(), &killed_a);
    let hypothesis = killed_b.iter().all(|&j| subset(&st.fg_supp[j], &killed_b));
    let ua = LocalizingSubcat::new(a.clone(), &killed_a)?.weakly_open()?;
    let ub = LocalizingSubcat::new(b.clone(), &killed_b)?.weakly_open()?;
    let restricted = Bimodule::corner_slice(m, &ua.corner, &ub.corner)?;
    let (certificate, failure) = match frobenius_check(&restricted, cfg) {
        Ok(c) => (Some(Box::new(c)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let projection_formulas = match &certificate {
        Some(_) if !surviving_a.is_empty() && !surviving_b.is_empty() => {
            Some(projection_formulas(st, &restricted, &ua.corner, &ub.corner, cfg)?)
        }
        _ => None,
    };
    Ok(RestrictionReport {
        hypothesis,
        restricted_dim: restricted.dim(),
        frobenius: certificate.is_some(),
        failure,
        pushforward_exact_a: ua.pushforward_exact()?,
        pushforward_exact_b: ub.pushforward_exact()?,
        projection_formulas,
        killed_a,
        killed_b,
        surviving_a,
        surviving_b,
        restricted: Some(restricted),
        certificate,
    })
}

fn projection_formulas(
    st: &Setting,
    restricted: &Bimodule,
    ca: &crate::algebra::Corner,
    cb: &crate::algebra::Corner,
    cfg: &IsoSearch,
) -> Result<[bool; 2]> {
    let mut first = true;
    for x in st.cat_a.simples.iter().chain(&st.cat_a.projectives).chain(&st.cat_a.injectives) {
        let lhs = st.f_of(x)?.corner_restriction(cb)?.0;
        let rhs = tensor_module(&x.corner_restriction(ca)?.0, restricted)?.0;
        first &= iso_test(&lhs, &rhs, cfg)?.is_iso();
    }
    let mut second = true;
    for n in st.cat_b.simples.iter().chain(&st.cat_b.projectives).chain(&st.cat_b.injectives) {
        let lhs = hom_functor(&st.pair.bimodule, n)?.0.corner_restriction(ca)?.0;
        let rhs = hom_functor(restricted, &n.corner_restriction(cb)?.0)?.0;
        second &= iso_test(&lhs, &rhs, cfg)?.is_iso();
    }
    Ok([first, second])
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionBlock {
    pub lambda: usize,
    pub killed_b: Vec<usize>,
    pub killed_a: Vec<usize>,
    pub surviving_b: Vec<usize>,
    pub surviving_a: Vec<usize>,
    pub restricted_dim: usize,
    pub frobenius: bool,
    /// The restricted pair has total left rank `lambda` at every point.
    pub constant_rank: bool,
    pub envelope_closed_b: EnvelopeClosure,
    pub envelope_closed_a: EnvelopeClosure,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub lambdas: Vec<usize>,
    pub blocks: Vec<PartitionBlock>,
    pub disjoint: bool,
    pub cover: bool,
    /// `M` is the direct sum of its blocks as a bimodule; checked when every block is envelope-closed.
    pub decomposition: Option<bool>,
}

fn disjoint_and_cover(alg: &AlgRef, killed: &[Vec<usize>]) -> Result<(bool, bool)> {
    let n = alg.num_points();
    let mut disjoint = true;
    for i in 0..killed.len() {
        for j in (i + 1)..killed.len() {
            let l = lattice(
                &LocalizingSubcat::new(alg.clone(), &killed[i])?,
                &LocalizingSubcat::new(alg.clone(), &killed[j])?,
            )?;
            disjoint &= l.is_disjoint;
        }
    }
    let cover = (0..n).all(|x| killed.iter().any(|k| !k.contains(&x)));
    Ok((disjoint, cover))
}

pub fn constant_rank_partition(pair: &AdjointPair, cfg: &IsoSearch) -> Result<PartitionReport> {
    let st = Setting::new(pair)?;
    let c = classify_in(&st, false)?;
    if let Some(w) = c.faithful_f.witness.as_ref().or(c.faithful_g.witness.as_ref()) {
        return Err(FrobError::NotFaithful(format!("{w:?}")));
    }
    if let Some(w) = c.right_localizing.witness {
        return Err(FrobError::NotRightLocalizing(format!("{w:?}")));
    }
    let r = rank_report_in(&st)?;
    let mut lambdas = r.lambda.clone();
    lambdas.sort_unstable();
    lambdas.dedup();
    let (a, b) = (pair.left_algebra().clone(), pair.right_algebra().clone());
    let mut blocks = Vec::new();
    for &lam in &lambdas {
        let killed_b: Vec<usize> = (0..st.points_b()).filter(|&y| r.lambda[y] != lam).collect();
        let rr = restrict_in(&st, &killed_b, cfg)?;
        let constant_rank = match rr.restricted.as_ref().map(AdjointPair::new) {
            Some(Ok(p)) => super::rank_report(&p)?.lambda.iter().all(|&v| v == lam),
            _ => false,
        };
        blocks.push(PartitionBlock {
            lambda: lam,
            envelope_closed_b: LocalizingSubcat::new(b.clone(), &rr.killed_b)?
                .closed_under_envelopes(&st.cat_b)?,
            envelope_closed_a: LocalizingSubcat::new(a.clone(), &rr.killed_a)?
                .closed_under_envelopes(&st.cat_a)?,
            killed_b: rr.killed_b,
            killed_a: rr.killed_a,
            surviving_b: rr.surviving_b,
            surviving_a: rr.surviving_a,
            restricted_dim: rr.restricted_dim,
            frobenius: rr.frobenius,
            constant_rank,
        });
    }
    let kb: Vec<Vec<usize>> = blocks.iter().map(|b| b.killed_b.clone()).collect();
    let ka: Vec<Vec<usize>> = blocks.iter().map(|b| b.killed_a.clone()).collect();
    let (db, cb) = disjoint_and_cover(&b, &kb)?;
    let (da, ca) = disjoint_and_cover(&a, &ka)?;
    let closed = blocks
        .iter()
        .all(|b| b.envelope_closed_a.closed && b.envelope_closed_b.closed);
    let decomposition = closed
        .then(|| block_decomposition(&pair.bimodule, &blocks))
        .transpose()?;
    Ok(PartitionReport {
        lambdas,
        blocks,
        disjoint: db && da,
        cover: cb && ca,
        decomposition,
    })
}

/// The pieces `e'_l M e''_l` are sub-bimodules and `M` is their direct sum.
fn block_decomposition(m: &Bimodule, blocks: &[PartitionBlock]) -> Result<bool> {
    let f = m.field();
    let (a, b) = (m.left_algebra(), m.right_algebra());
    let mut total = Subspace::zero(f, m.dim());
    let mut dims = 0;
    for blk in blocks {
        let proj = m
            .left_act(&a.points_idempotent(&blk.surviving_a))
            .mul(&m.right_act(&b.points_idempotent(&blk.surviving_b)));
        let piece = Subspace::span(&proj);
        let stable = m
            .lambda()
            .iter()
            .chain(m.rho())
            .all(|act| piece.contains_all(&piece.echelon().mul(act)));
        if !stable {
            return Ok(false);
        }
        dims += piece.dim();
        total = total.sum(&piece);
    }
    Ok(dims == m.dim() && total.dim() == m.dim())
}

/// How a part fails to split off: `E_point` is indecomposable with factors in several blocks.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub part: usize,
    pub point: usize,
    pub factor: usize,
    pub indecomposable: bool,
    pub factors: Vec<usize>,
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CategoryDecomposition {
    pub envelope_closed: Vec<EnvelopeClosure>,
    /// `A -> prod e_i A e_i` is an algebra isomorphism; checked when every part is envelope-closed.
    pub algebra_iso: Option<bool>,
    pub obstruction: Option<Obstruction>,
}

impl CategoryDecomposition {
    pub fn decomposes(&self) -> bool {
        self.algebra_iso == Some(true)
    }
}

pub fn category_decomposition_check(a: &AlgRef, parts: &[LocalizingSubcat]) -> Result<CategoryDecomposition> {
    let n = a.num_points();
    for p in parts {
        crate::algebra::check_same(a, &p.algebra, "part over another algebra")?;
    }
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            if !lattice(&parts[i], &parts[j])?.is_disjoint {
                return Err(FrobError::NotDisjoint(format!("parts {} and {}", i + 1, j + 1)));
            }
        }
    }
    if let Some(x) = (0..n).find(|x| parts.iter().all(|p| p.killed.contains(x))) {
        return Err(FrobError::NotCover(format!("point {} is killed by every part", x + 1)));
    }
    let cat = StandardCatalog::new(a)?;
    let envelope_closed = parts
        .iter()
        .map(|p| p.closed_under_envelopes(&cat))
        .collect::<Result<Vec<_>>>()?;
    let block_of = |x: usize| parts.iter().position(|p| !p.killed.contains(&x)).expect("cover");
    if let Some((part, w)) = envelope_closed.iter().enumerate().find(|(_, e)| !e.closed) {
        let (point, factor) = w.witness.expect("failing closure has a witness");
        let e = &cat.injectives[point];
        let indecomposable = injective_decompose(&cat, e)?.multiplicities.iter().sum::<usize>() == 1;
        let factors = e.support()?;
        let mut blocks: Vec<usize> = factors.iter().map(|&x| block_of(x)).collect();
        blocks.dedup();
        return Ok(CategoryDecomposition {
            envelope_closed,
            algebra_iso: None,
            obstruction: Some(Obstruction {
                part,
                point,
                factor,
                indecomposable,
                factors,
                blocks,
            }),
        });
    }
    let corners = parts
        .iter()
        .map(|p| a.corner(&p.surviving()))
        .collect::<Result<Vec<_>>>()?;
    let f = a.field();
    let image = |x: &[u32]| -> Vec<Vec<u32>> {
        corners.iter().map(|c| c.compression.vec_mul(x)).collect()
    };
    let map = corners
        .iter()
        .fold(Matrix::zeros(f, a.dim(), 0), |acc, c| acc.hstack(&c.compression));
    let mut ok = map.is_square() && invert(&map).is_ok();
    'outer: for i in 0..a.dim() {
        for j in 0..a.dim() {
            let (xi, xj) = (image(&a.basis_vec(i)), image(&a.basis_vec(j)));
            let prod = image(a.basis_product(i, j));
            for (k, c) in corners.iter().enumerate() {
                if c.algebra.mul(&xi[k], &xj[k]) != prod[k] {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    ok &= image(a.unit())
        .iter()
        .zip(&corners)
        .all(|(u, c)| u.as_slice() == c.algebra.unit());
    Ok(CategoryDecomposition {
        envelope_closed,
        algebra_iso: Some(ok),
        obstruction: None,
    })
}

/// `e = E1 + E2 + Q` with `E1` in `T_2` and `T_1`-torsionfree, `E2` the other way round, and
/// `Q` torsionfree for the class killing both.
#[derive(Clone, Debug)]
pub struct Tripartition {
    pub parts: [Representation; 3],
    /// Rows span each part inside `e`.
    pub inclusions: [Matrix; 3],
    pub multiplicities: [Vec<usize>; 3],
    pub verified: bool,
}

pub fn injective_tripartition(
    cat: &StandardCatalog,
    e: &Representation,
    t1: &LocalizingSubcat,
    t2: &LocalizingSubcat,
) -> Result<Tripartition> {
    let d = injective_decompose(cat, e)?;
    if !lattice(t1, t2)?.is_cover {
        return Err(FrobError::HypothesisFailure(
            "the two subcategories do not cover".into(),
        ));
    }
    for (i, t) in [t1, t2].iter().enumerate() {
        let c = t.closed_under_envelopes(cat)?;
        if let Some((j, x)) = c.witness {
            return Err(FrobError::HypothesisFailure(format!(
                "T{} is not closed under injective envelopes: E{} has composition factor S{}",
                i + 1,
                j + 1,
                x + 1
            )));
        }
    }
    let group = |x: usize| {
        if t2.killed.contains(&x) {
            0
        } else if t1.killed.contains(&x) {
            1
        } else {
            2
        }
    };
    let inv = invert(&d.iso)?;
    let f = e.field();
    let mut rows: [Vec<Vec<u32>>; 3] = Default::default();
    let mut mults: [Vec<usize>; 3] = std::array::from_fn(|_| vec![0; cat.len()]);
    let mut offset = 0;
    for (x, &m) in d.multiplicities.iter().enumerate() {
        let g = group(x);
        mults[g][x] = m;
        for _ in 0..m {
            for r in 0..cat.injectives[x].dim() {
                rows[g].push(inv.row(offset + r).to_vec());
            }
            offset += cat.injectives[x].dim();
        }
    }
    let mut parts = Vec::new();
    let mut inclusions = Vec::new();
    for r in &rows {
        let basis = Matrix::from_row_vectors(f, e.dim(), r);
        let (sub, inc) = e.submodule(&basis)?;
        parts.push(sub);
        inclusions.push(inc);
    }
    let parts: [Representation; 3] = parts.try_into().expect("three parts");
    let inclusions: [Matrix; 3] = inclusions.try_into().expect("three parts");
    let both: Vec<usize> = {
        let mut k = t1.killed.clone();
        k.extend(&t2.killed);
        k
    };
    let torsionfree = |m: &Representation, k: &[usize]| -> Result<bool> {
        Ok(m.torsion_submodule(k)?.0.dim() == 0)
    };
    let mut verified = torsionfree(&parts[0], &t1.killed)?
        && t2.contains(&parts[0])?
        && torsionfree(&parts[1], &t2.killed)?
        && t1.contains(&parts[1])?
        && torsionfree(&parts[2], &both)?;
    let stacked = inclusions
        .iter()
        .fold(Matrix::zeros(f, 0, e.dim()), |acc, m| acc.vstack(m));
    verified &= rank(&stacked) == e.dim();
    for (p, m) in parts.iter().zip(&mults) {
        verified &= &injective_decompose(cat, p)?.multiplicities == m;
    }
    Ok(Tripartition {
        parts,
        inclusions,
        multiplicities: mults,
        verified,
    })
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
    fn regular_restricts_to_regular_corner() {
        let a = fixtures::triangular_algebra();
        let pair = AdjointPair::new(&Bimodule::regular(a.clone())).unwrap();
        for killed in [vec![], vec![0], vec![1]] {
            let u = LocalizingSubcat::new(a.clone(), &killed).unwrap();
            let r = restrict(&pair, &u, &IsoSearch::default()).unwrap();
            assert!(r.hypothesis && r.frobenius);
            assert_eq!(r.killed_a, killed);
            assert_eq!(r.projection_formulas, Some([true, true]));
            let c = a.corner(&r.surviving_b).unwrap();
            assert_eq!(r.restricted_dim, c.algebra.dim());
        }
    }

    #[test]
    fn delta_over_loop_quiver_restriction_is_not_frobenius() {
        let m = fixtures::loop_delta(11).unwrap();
        let pair = AdjointPair::new(&m).unwrap();
        let u = LocalizingSubcat::new(m.right_algebra().clone(), &[1]).unwrap();
        let r = restrict(&pair, &u, &IsoSearch::default()).unwrap();
        assert!(!r.hypothesis);
        assert!(!r.frobenius);
        assert!(!r.pushforward_exact_b);
        assert!(r.failure.is_some());
    }

    #[test]
    fn twisted_restriction_to_the_field() {
        let pair = AdjointPair::new(&fixtures::twisted_extension().unwrap()).unwrap();
        let u = LocalizingSubcat::new(pair.right_algebra().clone(), &[0]).unwrap();
        let r = restrict(&pair, &u, &IsoSearch::default()).unwrap();
        assert!(r.frobenius && r.hypothesis);
        assert_eq!(r.restricted_dim, 2);
        let c = super::super::classify(r.certificate.as_ref().unwrap(), false).unwrap();
        assert!(!c.centralizing.unwrap().holds);
    }

    #[test]
    fn partition_of_rank_two_over_a_field() {
        let r = Bimodule::regular(k5());
        let m = r.direct_sum(&r).unwrap();
        let pair = AdjointPair::new(&m).unwrap();
        let p = constant_rank_partition(&pair, &IsoSearch::default()).unwrap();
        assert_eq!(p.lambdas, vec![2]);
        assert_eq!(p.decomposition, Some(true));
    }

    #[test]
    fn partition_with_two_ranks() {
        let r = Bimodule::regular(k5());
        let m = Bimodule::external(&r, &r.direct_sum(&r).unwrap()).unwrap();
        let pair = AdjointPair::new(&m).unwrap();
        let p = constant_rank_partition(&pair, &IsoSearch::default()).unwrap();
        assert_eq!(p.lambdas, vec![1, 2]);
        assert_eq!(p.blocks.len(), 2);
        assert!(p.disjoint && p.cover);
        assert!(p.blocks.iter().all(|b| b.constant_rank && b.frobenius));
        assert_eq!(p.decomposition, Some(true));
    }

    #[test]
    fn twisted_partition_single_block() {
        let pair = AdjointPair::new(&fixtures::twisted_extension().unwrap()).unwrap();
        let p = constant_rank_partition(&pair, &IsoSearch::default()).unwrap();
        assert_eq!(p.lambdas, vec![1]);
    }

    #[test]
    fn triangular_category_does_not_split() {
        let a = fixtures::triangular_algebra();
        let parts = [
            LocalizingSubcat::new(a.clone(), &[0]).unwrap(),
            LocalizingSubcat::new(a.clone(), &[1]).unwrap(),
        ];
        let d = category_decomposition_check(&a, &parts).unwrap();
        assert!(!d.decomposes());
        let o = d.obstruction.unwrap();
        assert_eq!((o.point, o.factors.clone()), (0, vec![0, 1]));
        assert!(o.indecomposable);
        assert_eq!(o.blocks.len(), 2);
    }

    #[test]
    fn product_category_splits() {
        let a = Algebra::product(&k5(), &k5()).unwrap();
        let parts = [
            LocalizingSubcat::new(a.clone(), &[1]).unwrap(),
            LocalizingSubcat::new(a.clone(), &[0]).unwrap(),
        ];
        assert!(category_decomposition_check(&a, &parts).unwrap().decomposes());
        let bad = [parts[0].clone(), parts[0].clone()];
        assert!(matches!(
            category_decomposition_check(&a, &bad),
            Err(FrobError::NotDisjoint(_))
        ));
    }

    #[test]
    fn tripartition_over_product() {
        let a = Algebra::product(&k5(), &k5()).unwrap();
        let cat = StandardCatalog::new(&a).unwrap();
        let e = cat.cogenerator();
        let t1 = LocalizingSubcat::new(a.clone(), &[0]).unwrap();
        let t2 = LocalizingSubcat::new(a.clone(), &[1]).unwrap();
        let t = injective_tripartition(&cat, &e, &t1, &t2).unwrap();
        assert!(t.verified);
        assert_eq!(t.multiplicities[0], vec![0, 1]);
        assert_eq!(t.multiplicities[1], vec![1, 0]);
        assert_eq!(t.parts[2].dim(), 0);
    }
}
