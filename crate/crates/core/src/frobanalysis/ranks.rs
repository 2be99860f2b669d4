use serde::Serialize;

use super::{classify::right_localizing_witness, Setting};
use crate::bimodule::AdjointPair;
use crate::error::{FrobError, Result};
use crate::exactla::{invert, Matrix};
use crate::module::{injective_decompose, Representation, StandardCatalog};

/// `image = E_1^{m_1} + ... + E_n^{m_n}` with the explicit isomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct InjectiveImage {
    pub point: usize,
    pub dim: usize,
    pub multiplicities: Vec<usize>,
    pub iso: Matrix,
    pub verified: bool,
}

impl InjectiveImage {
    fn new(point: usize, cat: &StandardCatalog, m: &Representation) -> Result<Self> {
        let d = injective_decompose(cat, m)?;
        let verified = m.is_hom(&d.target, &d.iso) && invert(&d.iso).is_ok();
        Ok(InjectiveImage {
            point,
            dim: m.dim(),
            multiplicities: d.multiplicities,
            iso: d.iso,
            verified,
        })
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `Some(n)` when the image is `E_point^n` with `n > 0`.
    pub fn isotypic_at(&self, y: usize) -> Option<usize> {
        let n = self.multiplicities[y];
        let rest = self.total() - n;
        (n > 0 && rest == 0).then_some(n)
    }
}

/// Killed sets of `F`, `G`, `GF` and `FG`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Kernels {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub gf: Vec<usize>,
    pub fg: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub supp_f: Vec<usize>,
    pub supp_g: Vec<usize>,
    /// `rrk[x][y]`: multiplicity of `E(y)` in `F(E(x))`.
    pub rrk: Vec<Vec<usize>>,
    /// `lrk[y][x]`: multiplicity of `E(x)` in `G(E(y))`.
    pub lrk: Vec<Vec<usize>>,
    pub rho: Vec<usize>,
    pub lambda: Vec<usize>,
    /// On `Supp(F)`: the unique `y` with `rrk(x, y) > 0`, when it is unique.
    pub f: Vec<Option<usize>>,
    pub f_well_defined: bool,
    /// On `Supp(G)`: `n` with `FG(E(y)) = E(y)^n`, when `FG(E(y))` is isotypic.
    pub n_y: Vec<Option<usize>>,
    pub f_images: Vec<InjectiveImage>,
    pub g_images: Vec<InjectiveImage>,
    pub fg_images: Vec<InjectiveImage>,
    /// Per `y`: total multiplicity of `FG(E(y))` and `sum_{f(x) = y} lrk(y, x) rrk(x, y)`.
    pub additivity: Option<Vec<(usize, usize)>>,
    /// `(x, y)` with `x` in `Supp(F)`, `rrk(x, y) > 0` and `lrk(y, x) = 0`.
    pub reciprocity_failures: Vec<(usize, usize)>,
    pub kernels: Kernels,
}

impl RankReport {
    pub fn additivity_holds(&self) -> Option<bool> {
        self.additivity
            .as_ref()
            .map(|v| v.iter().all(|(l, r)| l == r))
    }

    pub fn reciprocity_holds(&self) -> bool {
        self.reciprocity_failures.is_empty()
    }

    pub fn decompositions_verified(&self) -> bool {
        self.f_images
            .iter()
            .chain(&self.g_images)
            .chain(&self.fg_images)
            .all(|i| i.verified)
    }
}

fn zero_points(supp: &[Vec<usize>]) -> Vec<usize> {
    supp.iter()
        .enumerate()
        .filter(|(_, s)| s.is_empty())
        .map(|(i, _)| i)
        .collect()
}

pub fn rank_report(pair: &AdjointPair) -> Result<RankReport> {
    rank_report_in(&Setting::new(pair)?)
}

pub(crate) fn rank_report_in(st: &Setting) -> Result<RankReport> {
    let (na, nb) = (st.points_a(), st.points_b());
    let kernels = Kernels {
        f: zero_points(&st.f_supp),
        g: zero_points(&st.g_supp),
        gf: zero_points(&st.gf_supp),
        fg: zero_points(&st.fg_supp),
    };
    let supp_f: Vec<usize> = (0..na).filter(|i| !kernels.f.contains(i)).collect();
    let supp_g: Vec<usize> = (0..nb).filter(|j| !kernels.g.contains(j)).collect();

    let mut f_images = Vec::with_capacity(na);
    for (x, e) in st.cat_a.injectives.iter().enumerate() {
        f_images.push(InjectiveImage::new(x, &st.cat_b, &st.f_of(e)?)?);
    }
    let mut g_images = Vec::with_capacity(nb);
    let mut fg_images = Vec::with_capacity(nb);
    for (y, e) in st.cat_b.injectives.iter().enumerate() {
        let ge = st.g_of(e)?;
        g_images.push(InjectiveImage::new(y, &st.cat_a, &ge)?);
        fg_images.push(InjectiveImage::new(y, &st.cat_b, &st.f_of(&ge)?)?);
    }
    let rrk: Vec<Vec<usize>> = f_images.iter().map(|i| i.multiplicities.clone()).collect();
    let lrk: Vec<Vec<usize>> = g_images.iter().map(|i| i.multiplicities.clone()).collect();
    let rho = rrk.iter().map(|r| r.iter().sum()).collect();
    let lambda = lrk.iter().map(|r| r.iter().sum()).collect();

    let mut f = vec![None; na];
    let mut f_well_defined = true;
    for &x in &supp_f {
        let targets: Vec<usize> = (0..nb).filter(|&y| rrk[x][y] > 0).collect();
        if targets.len() == 1 {
            f[x] = Some(targets[0]);
        } else {
            f_well_defined = false;
        }
    }
    let mut n_y = vec![None; nb];
    for &y in &supp_g {
        n_y[y] = fg_images[y].isotypic_at(y);
    }
    let additivity = f_well_defined.then(|| {
        (0..nb)
            .map(|y| {
                let rhs = supp_f
                    .iter()
                    .filter(|&&x| f[x] == Some(y))
                    .map(|&x| lrk[y][x] * rrk[x][y])
                    .sum();
                (fg_images[y].total(), rhs)
            })
            .collect()
    });
    let mut reciprocity_failures = Vec::new();
    for &x in &supp_f {
        for y in 0..nb {
            if rrk[x][y] > 0 && lrk[y][x] == 0 {
                reciprocity_failures.push((x, y));
            }
        }
    }
    Ok(RankReport {
        supp_f,
        supp_g,
        rrk,
        lrk,
        rho,
        lambda,
        f,
        f_well_defined,
        n_y,
        f_images,
        g_images,
        fg_images,
        additivity,
        reciprocity_failures,
        kernels,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportMap {
    /// `(x, f(x), m_x)` with `F(E(x)) = E(f(x))^{m_x}`.
    pub map: Vec<(usize, usize, usize)>,
    pub supp_g: Vec<usize>,
    pub surjective: bool,
    pub injective: bool,
    /// The topology is discrete, so continuity holds automatically.
    pub continuous: bool,
    pub homeomorphism: bool,
    pub left_localizing: bool,
    /// Left localizing exactly when `f` is injective.
    pub cross_check: bool,
}

pub fn support_map(pair: &AdjointPair) -> Result<SupportMap> {
    let st = Setting::new(pair)?;
    if let Some((j, y)) = right_localizing_witness(&st.fg_supp) {
        return Err(FrobError::NotRightLocalizing(format!(
            "FG(S{}) has composition factor S{}",
            j + 1,
            y + 1
        )));
    }
    let r = rank_report_in(&st)?;
    let mut map = Vec::new();
    for &x in &r.supp_f {
        match r.f[x] {
            Some(y) => map.push((x, y, r.rrk[x][y])),
            None => {
                return Err(FrobError::NotRightLocalizing(format!(
                    "F(E{}) involves more than one indecomposable injective",
                    x + 1
                )))
            }
        }
    }
    let mut image: Vec<usize> = map.iter().map(|m| m.1).collect();
    image.sort_unstable();
    let injective = image.windows(2).all(|w| w[0] != w[1]);
    image.dedup();
    let surjective = image == r.supp_g;
    let left_localizing = right_localizing_witness(&st.gf_supp).is_none();
    Ok(SupportMap {
        map,
        supp_g: r.supp_g,
        surjective,
        injective,
        continuous: true,
        homeomorphism: injective && surjective,
        left_localizing,
        cross_check: left_localizing == injective,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub faithful_f: bool,
    pub faithful_g: bool,
    pub rho_one: bool,
    pub lambda_one: bool,
    /// When equivalent: the unit `X -> GF(X)` is invertible on every catalog module of `A`.
    pub unit_invertible: Option<bool>,
    /// When equivalent: the counit `FG(Y) -> Y` is invertible on every catalog module of `B`.
    pub counit_invertible: Option<bool>,
}

fn catalog_modules(cat: &StandardCatalog) -> impl Iterator<Item = &Representation> {
    cat.simples
        .iter()
        .chain(&cat.projectives)
        .chain(&cat.injectives)
}

pub fn equivalence_test(pair: &AdjointPair) -> Result<EquivalenceReport> {
    let st = Setting::new(pair)?;
    let r = rank_report_in(&st)?;
    let faithful_f = r.kernels.f.is_empty();
    let faithful_g = r.kernels.g.is_empty();
    let rho_one = r.rho.iter().all(|&v| v == 1);
    let lambda_one = r.lambda.iter().all(|&v| v == 1);
    let equivalent = faithful_f && faithful_g && rho_one && lambda_one;
    let (mut unit_invertible, mut counit_invertible) = (None, None);
    if equivalent {
        let mut ok = true;
        for x in catalog_modules(&st.cat_a) {
            ok &= invert(&pair.unit_at(x)?.map).is_ok();
        }
        unit_invertible = Some(ok);
        let mut ok = true;
        for y in catalog_modules(&st.cat_b) {
            ok &= invert(&pair.counit_at(y)?.map).is_ok();
        }
        counit_invertible = Some(ok);
    }
    Ok(EquivalenceReport {
        equivalent,
        faithful_f,
        faithful_g,
        rho_one,
        lambda_one,
        unit_invertible,
        counit_invertible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::Bimodule;
    use crate::fixtures;

    #[test]
    fn triangular_ranks() {
        let pair = AdjointPair::new(&fixtures::triangular().unwrap()).unwrap();
        let r = rank_report(&pair).unwrap();
        assert_eq!(r.rrk, vec![vec![1], vec![1]]);
        assert_eq!(r.lrk, vec![vec![0, 1]]);
        assert_eq!(r.rho, vec![1, 1]);
        assert_eq!(r.lambda, vec![1]);
        assert_eq!(r.supp_f, vec![1]);
        assert_eq!(r.f, vec![None, Some(0)]);
        assert_eq!(r.additivity_holds(), Some(true));
        assert!(r.reciprocity_holds());
        assert!(r.decompositions_verified());
        assert_eq!(r.kernels.f, r.kernels.gf);
        let s = support_map(&pair).unwrap();
        assert_eq!(s.map, vec![(1, 0, 1)]);
        assert!(s.surjective);
        assert!(!equivalence_test(&pair).unwrap().equivalent);
    }

    #[test]
    fn regular_is_identity() {
        let a = fixtures::triangular_algebra();
        let pair = AdjointPair::new(&Bimodule::regular(a)).unwrap();
        let r = rank_report(&pair).unwrap();
        assert_eq!(r.rrk, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(r.lrk, r.rrk);
        assert_eq!(r.n_y, vec![Some(1), Some(1)]);
        let s = support_map(&pair).unwrap();
        assert_eq!(s.map, vec![(0, 0, 1), (1, 1, 1)]);
        assert!(s.homeomorphism && s.cross_check);
        let e = equivalence_test(&pair).unwrap();
        assert!(e.equivalent);
        assert_eq!(e.unit_invertible, Some(true));
        assert_eq!(e.counit_invertible, Some(true));
    }

    #[test]
    fn delta_ranks() {
        let pair = AdjointPair::new(&fixtures::delta(5).unwrap()).unwrap();
        let r = rank_report(&pair).unwrap();
        assert_eq!(r.rrk, vec![vec![1, 1]]);
        assert!(!r.f_well_defined);
        // FG(E(y1)) = E(y1) + E(y2)
        assert_eq!(r.fg_images[0].multiplicities, vec![1, 1]);
        assert_eq!(r.n_y, vec![None, None]);
        assert!(matches!(
            support_map(&pair),
            Err(FrobError::NotRightLocalizing(_))
        ));
    }

    #[test]
    fn morita_support_map() {
        let pair = AdjointPair::new(&fixtures::morita(5, 2).unwrap()).unwrap();
        let s = support_map(&pair).unwrap();
        assert_eq!(s.map, vec![(0, 0, 1)]);
        assert!(s.homeomorphism);
        let e = equivalence_test(&pair).unwrap();
        assert!(e.equivalent && e.unit_invertible == Some(true));
    }
}
