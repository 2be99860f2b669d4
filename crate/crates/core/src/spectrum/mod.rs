//! Points, localizing subcategories and weakly open subspaces of a finite-dimensional algebra.
//!
//! Every localizing subcategory of `Mod A` is determined by the simples it contains, so it is
//! stored as a killed set of points. Quotient categories are realized on corner algebras.

use serde::Serialize;

use crate::algebra::{AlgRef, Corner};
use crate::bimodule::{hom_functor, tensor_module, AdjointPair, Bimodule, Functor};
use crate::error::{FrobError, Result};
use crate::module::{hom_space, iso_test, is_projective, IsoSearch, Representation, StandardCatalog};

/// The localizing subcategory of modules whose composition factors all lie in `killed`.
#[derive(Clone, Debug)]
pub struct LocalizingSubcat {
    pub algebra: AlgRef,
    pub killed: Vec<usize>,
}

/// Outcome of the envelope-closure test; `witness` is `(j, factor)` with `j` killed and
/// `E_j` having the surviving composition factor `factor`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeClosure {
    pub closed: bool,
    pub witness: Option<(usize, usize)>,
}

fn normalize(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&x) = v.iter().find(|&&x| x >= n) {
        return Err(FrobError::InvalidIdempotents(format!(
            "point {} out of range 1..{}",
            x + 1,
            n
        )));
    }
    Ok(v)
}

pub(crate) fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|x| !set.contains(x)).collect()
}

impl LocalizingSubcat {
    pub fn new(algebra: AlgRef, killed: &[usize]) -> Result<Self> {
        let killed = normalize(algebra.num_points(), killed)?;
        Ok(LocalizingSubcat { algebra, killed })
    }

    /// The zero subcategory.
    pub fn zero(algebra: AlgRef) -> Self {
        LocalizingSubcat {
            algebra,
            killed: vec![],
        }
    }

    /// `T(E)` for `E` the sum of the indecomposable injectives at the points `sigma`:
    /// `S_j` is killed exactly when `Hom(S_j, E_x) = 0` for all `x` in `sigma`.
    pub fn from_torsionfree(algebra: AlgRef, sigma: &[usize]) -> Result<Self> {
        let sigma = normalize(algebra.num_points(), sigma)?;
        let killed = complement(algebra.num_points(), &sigma);
        Ok(LocalizingSubcat { algebra, killed })
    }

    /// Kernel of `F` or `G`: the points whose simple is sent to zero.
    pub fn from_kernel(pair: &AdjointPair, which: Functor) -> Result<Self> {
        let alg = match which {
            Functor::F => pair.left_algebra().clone(),
            Functor::G => pair.right_algebra().clone(),
        };
        let cat = StandardCatalog::new(&alg)?;
        let mut killed = Vec::new();
        for (j, s) in cat.simples.iter().enumerate() {
            if pair.apply(which, s)?.dim() == 0 {
                killed.push(j);
            }
        }
        Ok(LocalizingSubcat {
            algebra: alg,
            killed,
        })
    }

    pub fn points(&self) -> usize {
        self.algebra.num_points()
    }

    pub fn surviving(&self) -> Vec<usize> {
        complement(self.points(), &self.killed)
    }

    pub fn contains(&self, m: &Representation) -> Result<bool> {
        Ok(m.support()?.iter().all(|x| self.killed.contains(x)))
    }

    /// Largest submodule of `m` in the class, with its inclusion.
    pub fn torsion(&self, m: &Representation) -> Result<(Representation, crate::exactla::Matrix)> {
        m.torsion_submodule(&self.killed)
    }

    pub fn closed_under_envelopes(&self, cat: &StandardCatalog) -> Result<EnvelopeClosure> {
        for &j in &self.killed {
            for x in cat.injectives[j].support()? {
                if !self.killed.contains(&x) {
                    return Ok(EnvelopeClosure {
                        closed: false,
                        witness: Some((j, x)),
                    });
                }
            }
        }
        Ok(EnvelopeClosure {
            closed: true,
            witness: None,
        })
    }

    pub fn weakly_open(&self) -> Result<WeaklyOpenSubspace> {
        WeaklyOpenSubspace::new(self)
    }
}

/// Killed-set bookkeeping for two localizing subcategories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    /// Killed set of the localizing closure of the Gabriel product.
    pub gabriel_product_class: Vec<usize>,
    /// Killed set of `U_1 n U_2`.
    pub open_intersection: Vec<usize>,
    /// Killed set of `U_1 u U_2`.
    pub open_union: Vec<usize>,
    pub is_cover: bool,
    pub is_disjoint: bool,
}

pub fn lattice(t1: &LocalizingSubcat, t2: &LocalizingSubcat) -> Result<Lattice> {
    crate::algebra::check_same(&t1.algebra, &t2.algebra, "subcategories of different algebras")?;
    let n = t1.points();
    let mut union: Vec<usize> = t1.killed.iter().chain(&t2.killed).copied().collect();
    union.sort_unstable();
    union.dedup();
    let inter: Vec<usize> = t1
        .killed
        .iter()
        .filter(|x| t2.killed.contains(x))
        .copied()
        .collect();
    Ok(Lattice {
        is_cover: inter.is_empty(),
        is_disjoint: union.len() == n,
        gabriel_product_class: union.clone(),
        open_intersection: union,
        open_union: inter,
    })
}

/// `Mod A / T` realized as modules over the corner `e'Ae'`.
#[derive(Clone, Debug)]
pub struct WeaklyOpenSubspace {
    pub algebra: AlgRef,
    pub killed: Vec<usize>,
    pub surviving: Vec<usize>,
    pub corner: Corner,
    /// `Ae'` as an `(A, e'Ae')`-bimodule; `j_*` is `Hom` out of it.
    pub ae: Bimodule,
    /// `e'A` as an `(e'Ae', A)`-bimodule; `j_!` is the tensor with it.
    pub ea: Bimodule,
}

/// What `weakly_open` verified about the corner realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenChecks {
    /// `S_j e' = 0` exactly for the killed `j`.
    pub kernel_matches: bool,
    /// `j^* j_* S = S` on every corner simple.
    pub restriction_of_pushforward: bool,
    /// `j^* j_! S = S` on every corner simple.
    pub restriction_of_extension: bool,
    /// `Ae'` is projective over the corner, i.e. `j_*` is exact.
    pub pushforward_exact: bool,
}

impl OpenChecks {
    pub fn all(&self) -> bool {
        self.kernel_matches && self.restriction_of_pushforward && self.restriction_of_extension
    }
}

impl WeaklyOpenSubspace {
    pub fn new(t: &LocalizingSubcat) -> Result<Self> {
        let a = t.algebra.clone();
        let surviving = t.surviving();
        let corner = a.corner(&surviving)?;
        let whole = a.corner(&(0..a.num_points()).collect::<Vec<_>>())?;
        let ae = Bimodule::corner_slice(&Bimodule::regular(a.clone()), &whole, &corner)?
            .restrict_left(a.clone(), &whole.compression)?;
        let ea = Bimodule::corner_slice(&Bimodule::regular(a.clone()), &corner, &whole)?
            .restrict_right(a.clone(), &whole.compression)?;
        Ok(WeaklyOpenSubspace {
            algebra: a,
            killed: t.killed.clone(),
            surviving,
            corner,
            ae,
            ea,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.surviving.is_empty()
    }

    /// `j^*(M) = M e'`.
    pub fn restrict(&self, m: &Representation) -> Result<Representation> {
        Ok(m.corner_restriction(&self.corner)?.0)
    }

    /// `j_*(Y) = Hom_{e'Ae'}(Ae', Y)`.
    pub fn pushforward(&self, y: &Representation) -> Result<Representation> {
        Ok(hom_functor(&self.ae, y)?.0)
    }

    /// `j_!(Y) = Y (x) e'A`.
    pub fn extend(&self, y: &Representation) -> Result<Representation> {
        Ok(tensor_module(y, &self.ea)?.0)
    }

    /// `j_*` on a homomorphism `h: Y -> Z`, as post-composition.
    pub fn pushforward_hom(
        &self,
        h: &crate::exactla::Matrix,
        y: &Representation,
        z: &Representation,
    ) -> Result<crate::exactla::Matrix> {
        let (_, by) = hom_functor(&self.ae, y)?;
        let (jz, bz) = hom_functor(&self.ae, z)?;
        let f = h.field();
        let flat = crate::exactla::Matrix::from_row_vectors(
            f,
            self.ae.dim() * z.dim(),
            &bz.iter().map(|b| b.flatten()).collect::<Vec<_>>(),
        );
        let coords = crate::exactla::Subspace::with_basis(&flat).expect("independent basis");
        let rows: Vec<Vec<u32>> = by
            .iter()
            .map(|p| coords.coords(&p.mul(h).flatten()).expect("composite is a hom"))
            .collect();
        Ok(crate::exactla::Matrix::from_row_vectors(f, jz.dim(), &rows))
    }

    /// `j_!` on a homomorphism.
    pub fn extend_hom(
        &self,
        h: &crate::exactla::Matrix,
        y: &Representation,
        z: &Representation,
    ) -> Result<crate::exactla::Matrix> {
        let (_, ty) = tensor_module(y, &self.ea)?;
        let (_, tz) = tensor_module(z, &self.ea)?;
        let id = crate::exactla::Matrix::identity(h.field(), self.ea.dim());
        Ok(ty.tensor.map_pair(h, &id, &tz.tensor))
    }

    pub fn checks(&self, cfg: &IsoSearch) -> Result<OpenChecks> {
        let cat = StandardCatalog::new(&self.algebra)?;
        let kernel_matches = cat
            .simples
            .iter()
            .enumerate()
            .map(|(j, s)| Ok((self.restrict(s)?.dim() == 0) == self.killed.contains(&j)))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        let mut push = true;
        let mut ext = true;
        if !self.is_empty() {
            let ccat = StandardCatalog::new(&self.corner.algebra)?;
            for s in &ccat.simples {
                let back = self.restrict(&self.pushforward(s)?.with_algebra(self.algebra.clone())?)?;
                push &= iso_test(&back, s, cfg)?.is_iso();
                let back = self.restrict(&self.extend(s)?.with_algebra(self.algebra.clone())?)?;
                ext &= iso_test(&back, s, cfg)?.is_iso();
            }
        }
        Ok(OpenChecks {
            kernel_matches,
            restriction_of_pushforward: push,
            restriction_of_extension: ext,
            pushforward_exact: self.pushforward_exact()?,
        })
    }

    /// `j_*` is exact iff `Ae'` is projective as a right module over the corner.
    pub fn pushforward_exact(&self) -> Result<bool> {
        if self.is_empty() {
            return Ok(true);
        }
        Ok(is_projective(&self.ae.right_module())?.is_some())
    }
}

/// Closed sets `V(M)` (composition-factor supports) on the finite point set.
#[derive(Clone, Debug, Serialize)]
pub struct TopologyReport {
    pub points: usize,
    /// `V(S_j)` for each `j`; all singletons, which makes the topology discrete.
    pub simple_supports: Vec<Vec<usize>>,
    pub injective_supports: Vec<Vec<usize>>,
    pub discrete: bool,
    /// Every subset is closed, being a union of the closed singletons.
    pub closed_sets: usize,
}

pub fn gabriel_topology(a: &AlgRef) -> Result<TopologyReport> {
    let cat = StandardCatalog::new(a)?;
    let simple_supports = cat
        .simples
        .iter()
        .map(|s| s.support())
        .collect::<Result<Vec<_>>>()?;
    let injective_supports = cat
        .injectives
        .iter()
        .map(|e| e.support())
        .collect::<Result<Vec<_>>>()?;
    let discrete = simple_supports
        .iter()
        .enumerate()
        .all(|(j, v)| v.as_slice() == [j]);
    let n = cat.len();
    Ok(TopologyReport {
        points: n,
        simple_supports,
        injective_supports,
        discrete,
        closed_sets: if discrete { 1usize << n.min(63) } else { 0 },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Locality {
    pub is_local: bool,
    pub is_semilocal: bool,
    /// `dim Hom(S_j, E_1 + ... + E_n)` for each `j`; all positive.
    pub cogenerator_homs: Vec<usize>,
    pub cogenerates: bool,
}

pub fn locality_report(a: &AlgRef) -> Result<Locality> {
    let cat = StandardCatalog::new(a)?;
    let cog = cat.cogenerator();
    let cogenerator_homs = cat
        .simples
        .iter()
        .map(|s| Ok(hom_space(s, &cog)?.len()))
        .collect::<Result<Vec<_>>>()?;
    let lr = a.locality_report();
    Ok(Locality {
        is_local: lr.is_local,
        is_semilocal: lr.is_semilocal,
        cogenerates: cogenerator_homs.iter().all(|&d| d > 0),
        cogenerator_homs,
    })
}

/// All subsets of `0..n` as sorted vectors, by increasing size then lexicographically.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0..1u64 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    all.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::fixtures;

    fn tri() -> AlgRef {
        fixtures::triangular_algebra()
    }

    #[test]
    fn torsionfree_mode_complements() {
        let t = LocalizingSubcat::from_torsionfree(tri(), &[1]).unwrap();
        assert_eq!(t.killed, vec![0]);
        let t = LocalizingSubcat::from_torsionfree(tri(), &[0, 1]).unwrap();
        assert!(t.killed.is_empty());
    }

    #[test]
    fn triangular_kernel_of_f() {
        let pair = AdjointPair::new(&fixtures::triangular().unwrap()).unwrap();
        let t = LocalizingSubcat::from_kernel(&pair, Functor::F).unwrap();
        assert_eq!(t.killed, vec![0]);
    }

    #[test]
    fn envelope_closure_on_triangular() {
        let cat = StandardCatalog::new(&tri()).unwrap();
        let c = LocalizingSubcat::new(tri(), &[1]).unwrap();
        assert!(c.closed_under_envelopes(&cat).unwrap().closed);
        let c = LocalizingSubcat::new(tri(), &[0]).unwrap();
        let r = c.closed_under_envelopes(&cat).unwrap();
        assert_eq!(r.witness, Some((0, 1)));
        assert!(LocalizingSubcat::zero(tri())
            .closed_under_envelopes(&cat)
            .unwrap()
            .closed);
    }

    #[test]
    fn lattice_cases() {
        let t1 = LocalizingSubcat::new(tri(), &[0]).unwrap();
        let t2 = LocalizingSubcat::new(tri(), &[1]).unwrap();
        let l = lattice(&t1, &t2).unwrap();
        assert!(l.is_cover && l.is_disjoint);
        let l = lattice(&t1, &t1).unwrap();
        assert_eq!(l.open_intersection, t1.killed);
        assert_eq!(l.open_union, t1.killed);
        let t3 = LocalizingSubcat::new(tri(), &[0, 1]).unwrap();
        assert!(!lattice(&t1, &t3).unwrap().is_cover);
    }

    #[test]
    fn corners() {
        let r = fixtures::twisted_algebra().unwrap();
        let u = LocalizingSubcat::new(r, &[0]).unwrap().weakly_open().unwrap();
        assert_eq!(u.corner.algebra.dim(), 2);
        assert!(u.corner.algebra.locality_report().is_local);
        assert!(u.checks(&IsoSearch::default()).unwrap().all());

        let u = LocalizingSubcat::new(tri(), &[1]).unwrap().weakly_open().unwrap();
        assert_eq!(u.corner.algebra.dim(), 1);
        let c = u.checks(&IsoSearch::default()).unwrap();
        assert!(c.all() && c.pushforward_exact);

        let u = LocalizingSubcat::zero(tri()).weakly_open().unwrap();
        assert_eq!(u.corner.algebra.dim(), 3);
        assert!(u.checks(&IsoSearch::default()).unwrap().all());
    }

    #[test]
    fn loop_corner_pushforward_not_exact() {
        let a = fixtures::loop_quiver(5).unwrap();
        let u = LocalizingSubcat::new(a, &[1]).unwrap().weakly_open().unwrap();
        assert!(!u.pushforward_exact().unwrap());
    }

    #[test]
    fn topology_and_locality() {
        let t = gabriel_topology(&tri()).unwrap();
        assert!(t.discrete);
        assert_eq!(t.injective_supports[0], vec![0, 1]);
        let l = locality_report(&tri()).unwrap();
        assert!(!l.is_local && l.cogenerates);
        assert!(locality_report(&fixtures::f49().unwrap()).unwrap().is_local);
        let k = Algebra::ground(fixtures::field(5)).unwrap();
        let p = Algebra::product(&k, &k).unwrap();
        assert!(gabriel_topology(&p).unwrap().discrete);
    }

    #[test]
    fn subset_order() {
        assert_eq!(
            subsets(2),
            vec![vec![], vec![0], vec![1], vec![0, 1]]
        );
    }
}
