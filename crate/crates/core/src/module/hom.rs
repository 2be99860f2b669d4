use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Representation;
use crate::error::Result;
use crate::exactla::{invert, left_kernel, rref, Field, Matrix};

/// Budget and seed for randomized isomorphism search.
#[derive(Clone, Copy, Debug)]
pub struct IsoSearch {
    pub seed: u64,
    pub samples: usize,
    /// Exhaustive enumeration runs when `p^dim(Hom) <= exhaustive_limit`.
    pub exhaustive_limit: u64,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch {
            seed: 0x5eed,
            samples: 64,
            exhaustive_limit: 3125,
        }
    }
}

impl IsoSearch {
    pub fn with_seed(seed: u64) -> Self {
        IsoSearch {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An invertible intertwiner.
    Isomorphic(Matrix),
    NotIsomorphic(String),
    /// Search budget exhausted; callers must treat this as a failure.
    Unknown,
}

impl IsoOutcome {
    pub fn certificate(self) -> Option<Matrix> {
        match self {
            IsoOutcome::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Basis of the space of `X` (m x n) with `a_i X = X b_i` for every pair.
pub fn intertwiners(field: Field, m: usize, n: usize, pairs: &[(Matrix, Matrix)]) -> Vec<Matrix> {
    let mut basis = Matrix::identity(field, m * n);
    for (a, b) in pairs {
        if basis.rows() == 0 {
            break;
        }
        let mut z = Matrix::zeros(field, basis.rows(), m * n);
        for t in 0..basis.rows() {
            let x = Matrix::unflatten(field, m, n, basis.row(t));
            let d = a.mul(&x).sub(&x.mul(b));
            z.row_mut(t).copy_from_slice(d.data());
        }
        let k = left_kernel(&z);
        basis = k.mul(&basis);
    }
    let (reduced, pivots) = rref::rref_only(&basis);
    (0..pivots.len())
        .map(|t| Matrix::unflatten(field, m, n, reduced.row(t)))
        .collect()
}

/// Basis of `Hom_A(m, n)` as `dim m x dim n` matrices, in reduced echelon order.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<Vec<Matrix>> {
    m.same_algebra(n)?;
    let gens = m.algebra().generators();
    let pairs: Vec<(Matrix, Matrix)> = gens.iter().map(|g| (m.act(g), n.act(g))).collect();
    Ok(intertwiners(m.field(), m.dim(), n.dim(), &pairs))
}

/// Looks for an invertible element in the span of `homs`.
pub fn search_iso(field: Field, homs: &[Matrix], cfg: &IsoSearch) -> Option<Matrix> {
    if homs.is_empty() {
        return None;
    }
    let try_combo = |coeffs: &[u32]| -> Option<Matrix> {
        let mut x = Matrix::zeros(field, homs[0].rows(), homs[0].cols());
        for (c, h) in coeffs.iter().zip(homs) {
            x.add_scaled(*c, h);
        }
        invert(&x).ok().map(|_| x)
    };
    let p = field.p() as u64;
    let d = homs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let coeffs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..field.p())).collect();
        if let Some(x) = try_combo(&coeffs) {
            return Some(x);
        }
    }
    let total = p.checked_pow(d as u32);
    if matches!(total, Some(t) if t <= cfg.exhaustive_limit) {
        let t = total.unwrap();
        for code in 1..t {
            let mut c = code;
            let coeffs: Vec<u32> = (0..d)
                .map(|_| {
                    let r = (c % p) as u32;
                    c /= p;
                    r
                })
                .collect();
            if let Some(x) = try_combo(&coeffs) {
                return Some(x);
            }
        }
    }
    None
}

/// Decides whether `m` and `n` are isomorphic, returning a certificate when they are.
pub fn iso_test(m: &Representation, n: &Representation, cfg: &IsoSearch) -> Result<IsoOutcome> {
    m.same_algebra(n)?;
    if m.dim() != n.dim() {
        return Ok(IsoOutcome::NotIsomorphic(format!(
            "dimensions {} and {} differ",
            m.dim(),
            n.dim()
        )));
    }
    if m.dim() == 0 {
        return Ok(IsoOutcome::Isomorphic(Matrix::zeros(m.field(), 0, 0)));
    }
    if let (Ok(cm), Ok(cn)) = (m.composition_factors(), n.composition_factors()) {
        if cm != cn {
            return Ok(IsoOutcome::NotIsomorphic(format!(
                "composition factors {:?} and {:?} differ",
                cm, cn
            )));
        }
    }
    let hmn = hom_space(m, n)?;
    if hmn.is_empty() {
        return Ok(IsoOutcome::NotIsomorphic("no nonzero homomorphisms".into()));
    }
    let hmm = hom_space(m, m)?;
    if hmm.len() != hmn.len() {
        return Ok(IsoOutcome::NotIsomorphic(format!(
            "dim End(M) = {} but dim Hom(M, N) = {}",
            hmm.len(),
            hmn.len()
        )));
    }
    Ok(match search_iso(m.field(), &hmn, cfg) {
        Some(x) => IsoOutcome::Isomorphic(x),
        None => IsoOutcome::Unknown,
    })
}
