use serde::Serialize;

use super::{subset, Setting};
use crate::algebra::check_same;
use crate::bimodule::{AdjointPair, Bimodule};
use crate::error::Result;
use crate::spectrum::subsets;

/// Why a predicate fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// A simple sent to zero.
    Simple(usize),
    /// `FG(S_simple)` (or `GF(S_simple)`) has the composition factor `factor`.
    Factor { simple: usize, factor: usize },
    /// A killed set `K` whose class is not preserved.
    KilledSet(Vec<usize>),
    /// A central element (coordinates in the algebra) acting differently on the two sides.
    Central(Vec<u32>),
    /// A corner on `surviving` with a central element of the corner.
    Corner {
        surviving: Vec<usize>,
        element: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_witness(w: Option<Witness>) -> Self {
        Verdict {
            holds: w.is_none(),
            witness: w,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub faithful_f: Verdict,
    pub faithful_g: Verdict,
    pub right_localizing: Verdict,
    pub left_localizing: Verdict,
    /// All-subsets recomputation of the two previous verdicts (run for at most 10 points).
    pub right_brute_force: Option<bool>,
    pub left_brute_force: Option<bool>,
    pub include_zero_subcategory: bool,
    /// The reading selected by `include_zero_subcategory`; `None` unless `A = B`.
    pub localizing: Option<Verdict>,
    pub localizing_with_zero: Option<Verdict>,
    pub localizing_without_zero: Option<Verdict>,
    pub centralizing: Option<Verdict>,
    pub locally_centralizing: Option<Verdict>,
    /// Centralizing verdict for the right dual.
    pub dual_centralizing: Option<Verdict>,
}

impl ClassificationReport {
    pub fn brute_force_agrees(&self) -> bool {
        self.right_brute_force
            .is_none_or(|b| b == self.right_localizing.holds)
            && self
                .left_brute_force
                .is_none_or(|b| b == self.left_localizing.holds)
    }
}

/// First `(j, y)` with `y != j` a factor of the image of `S_j`.
pub(crate) fn right_localizing_witness(images: &[Vec<usize>]) -> Option<(usize, usize)> {
    images.iter().enumerate().find_map(|(j, s)| {
        s.iter().find(|&&y| y != j).map(|&y| (j, y))
    })
}

/// `T_K` is sent into itself for every `K`.
fn brute_force(images: &[Vec<usize>]) -> bool {
    subsets(images.len())
        .iter()
        .all(|k| k.iter().all(|&j| subset(&images[j], k)))
}

fn zero_witness(supp: &[Vec<usize>]) -> Option<Witness> {
    supp.iter().position(|s| s.is_empty()).map(Witness::Simple)
}

fn localizing_witness(st: &Setting, with_zero: bool) -> Option<Witness> {
    subsets(st.points_a())
        .into_iter()
        .filter(|k| with_zero || !k.is_empty())
        .find(|k| !subset(&st.preimage(k), k) || !subset(&st.preimage_g(k), k))
        .map(Witness::KilledSet)
}

/// Central element of the algebra whose two actions on `m` differ.
fn centralizing_witness(m: &Bimodule) -> Option<Vec<u32>> {
    let z = m.left_algebra().center();
    z.row_vecs()
        .into_iter()
        .find(|c| m.left_act(c) != m.right_act(c))
}

fn corner_witness(m: &Bimodule) -> Result<Option<Witness>> {
    let a = m.left_algebra();
    for s in subsets(a.num_points()).into_iter().skip(1) {
        let c = a.corner(&s)?;
        let r = Bimodule::corner_slice(m, &c, &c)?;
        if let Some(element) = centralizing_witness(&r) {
            return Ok(Some(Witness::Corner {
                surviving: s,
                element,
            }));
        }
    }
    Ok(None)
}

pub fn classify(pair: &AdjointPair, include_zero_subcategory: bool) -> Result<ClassificationReport> {
    let st = Setting::new(pair)?;
    classify_in(&st, include_zero_subcategory)
}

pub(crate) fn classify_in(st: &Setting, include_zero_subcategory: bool) -> Result<ClassificationReport> {
    let factor = |w: Option<(usize, usize)>| {
        Verdict::from_witness(w.map(|(simple, factor)| Witness::Factor { simple, factor }))
    };
    let right_localizing = factor(right_localizing_witness(&st.fg_supp));
    let left_localizing = factor(right_localizing_witness(&st.gf_supp));
    let right_brute_force = (st.points_b() <= 10).then(|| brute_force(&st.fg_supp));
    let left_brute_force = (st.points_a() <= 10).then(|| brute_force(&st.gf_supp));

    let m = &st.pair.bimodule;
    let same = check_same(m.left_algebra(), m.right_algebra(), "").is_ok();
    let (mut with_zero, mut without_zero, mut centralizing, mut locally, mut dual) =
        (None, None, None, None, None);
    if same {
        with_zero = Some(Verdict::from_witness(localizing_witness(st, true)));
        without_zero = Some(Verdict::from_witness(localizing_witness(st, false)));
        centralizing = Some(Verdict::from_witness(
            centralizing_witness(m).map(Witness::Central),
        ));
        locally = Some(Verdict::from_witness(corner_witness(m)?));
        dual = Some(Verdict::from_witness(
            centralizing_witness(&st.pair.right_dual.bimodule).map(Witness::Central),
        ));
    }
    let localizing = if include_zero_subcategory {
        with_zero.clone()
    } else {
        without_zero.clone()
    };
    Ok(ClassificationReport {
        faithful_f: Verdict::from_witness(zero_witness(&st.f_supp)),
        faithful_g: Verdict::from_witness(zero_witness(&st.g_supp)),
        right_localizing,
        left_localizing,
        right_brute_force,
        left_brute_force,
        include_zero_subcategory,
        localizing,
        localizing_with_zero: with_zero,
        localizing_without_zero: without_zero,
        centralizing,
        locally_centralizing: locally,
        dual_centralizing: dual,
    })
}
