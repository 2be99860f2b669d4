//! Ranks, supports, classification, restriction, partitions, gluing and duality of morphisms.
//!
//! The analyses take an [`AdjointPair`], which exists as soon as `M` is projective over `B`;
//! a [`crate::bimodule::FrobeniusCertificate`] dereferences to one.

mod classify;
mod duality;
mod glue;
mod ranks;
mod restrict;

pub use classify::{classify, ClassificationReport, Verdict, Witness};
pub use duality::{
    composition_law, dagger_at, dualize_morphism, random_morphism, star_at, Direction,
    DualityReport,
};
pub use glue::{glue, GlueOutcome, GlueTask};
pub use ranks::{
    equivalence_test, rank_report, support_map, EquivalenceReport, InjectiveImage, Kernels,
    RankReport, SupportMap,
};
pub use restrict::{
    category_decomposition_check, constant_rank_partition, injective_tripartition, restrict,
    restrict_bimodule, CategoryDecomposition, Obstruction, PartitionBlock, PartitionReport, RestrictionReport,
    Tripartition,
};

use crate::bimodule::{AdjointPair, Functor};
use crate::error::Result;
use crate::module::{Representation, StandardCatalog};

/// An adjoint pair with both catalogs and the supports of `F`, `G`, `FG`, `GF` on simples.
pub struct Setting<'a> {
    pub pair: &'a AdjointPair,
    pub cat_a: StandardCatalog,
    pub cat_b: StandardCatalog,
    /// Composition-factor support of `F(S_i)`.
    pub f_supp: Vec<Vec<usize>>,
    pub g_supp: Vec<Vec<usize>>,
    pub fg_supp: Vec<Vec<usize>>,
    pub gf_supp: Vec<Vec<usize>>,
}

impl<'a> Setting<'a> {
    pub fn new(pair: &'a AdjointPair) -> Result<Self> {
        let cat_a = StandardCatalog::new(pair.left_algebra())?;
        let cat_b = StandardCatalog::new(pair.right_algebra())?;
        let mut f_supp = Vec::new();
        let mut gf_supp = Vec::new();
        for s in &cat_a.simples {
            let fs = pair.apply(Functor::F, s)?;
            f_supp.push(fs.support()?);
            gf_supp.push(pair.apply(Functor::G, &fs)?.support()?);
        }
        let mut g_supp = Vec::new();
        let mut fg_supp = Vec::new();
        for s in &cat_b.simples {
            let gs = pair.apply(Functor::G, s)?;
            g_supp.push(gs.support()?);
            fg_supp.push(pair.apply(Functor::F, &gs)?.support()?);
        }
        Ok(Setting {
            pair,
            cat_a,
            cat_b,
            f_supp,
            g_supp,
            fg_supp,
            gf_supp,
        })
    }

    pub fn points_a(&self) -> usize {
        self.cat_a.len()
    }

    pub fn points_b(&self) -> usize {
        self.cat_b.len()
    }

    /// Killed set of `F^{-1}(T_K)` for a killed set `K` of `B`.
    pub fn preimage(&self, killed_b: &[usize]) -> Vec<usize> {
        preimage_of(&self.f_supp, killed_b)
    }

    /// Killed set of `G^{-1}(T_K)` for a killed set `K` of `A`.
    pub fn preimage_g(&self, killed_a: &[usize]) -> Vec<usize> {
        preimage_of(&self.g_supp, killed_a)
    }

    pub fn f_of(&self, x: &Representation) -> Result<Representation> {
        self.pair.apply(Functor::F, x)
    }

    pub fn g_of(&self, y: &Representation) -> Result<Representation> {
        self.pair.apply(Functor::G, y)
    }
}

fn preimage_of(supports: &[Vec<usize>], killed: &[usize]) -> Vec<usize> {
    supports
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().all(|x| killed.contains(x)))
        .map(|(i, _)| i)
        .collect()
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}
