use serde::Serialize;

use super::{hom_space, Representation};
use crate::algebra::AlgRef;
use crate::error::{FrobError, Result};
use crate::exactla::{left_kernel, rank, Matrix, Subspace};

/// Simples, indecomposable projectives and indecomposable injectives, one per point.
#[derive(Clone, Debug)]
pub struct StandardCatalog {
    pub algebra: AlgRef,
    pub simples: Vec<Representation>,
    pub projectives: Vec<Representation>,
    pub injectives: Vec<Representation>,
    /// `P_x -> S_x`.
    pub tops: Vec<Matrix>,
    /// `S_x -> E_x`.
    pub socles: Vec<Matrix>,
    /// `dim End(S_x)`.
    pub endo_dims: Vec<usize>,
}

/// Loewy data of a module.
#[derive(Clone, Debug, Serialize)]
pub struct StructureSeries {
    /// Dimensions of `soc^1 M < soc^2 M < ... = M`.
    pub socle_series: Vec<usize>,
    /// Dimensions of `M > MJ > MJ^2 > ... > 0`.
    pub radical_series: Vec<usize>,
    /// Composition factor multiplicities per point.
    pub factors: Vec<usize>,
    /// Factor multiplicities of each socle layer.
    pub socle_layers: Vec<Vec<usize>>,
}

impl StandardCatalog {
    pub fn new(alg: &AlgRef) -> Result<Self> {
        if !alg.is_primitive() {
            return Err(FrobError::NonPrimitiveIdempotents);
        }
        let reg = Representation::regular(alg.clone());
        let rad = alg.radical()?.clone();
        let n = alg.num_points();
        let (mut simples, mut projectives, mut injectives) = (vec![], vec![], vec![]);
        let (mut tops, mut socles, mut endo_dims) = (vec![], vec![], vec![]);
        for x in 0..n {
            let e = alg.point_idempotent(x).to_vec();
            // P = eA
            let p_rows: Vec<Vec<u32>> = (0..alg.dim())
                .map(|k| alg.mul(&e, &alg.basis_vec(k)))
                .collect();
            let p_space = alg.span(&p_rows);
            let (p, p_incl) = reg.submodule_on(&p_space)?;
            // eJ inside P
            let ej_rows: Vec<Vec<u32>> = rad.row_vecs().iter().map(|r| alg.mul(&e, r)).collect();
            let pc = Subspace::with_basis(&p_incl).expect("echelon basis");
            let ej_coords: Vec<Vec<u32>> = ej_rows
                .iter()
                .map(|v| pc.coords(v).expect("eJ lies in eA"))
                .collect();
            let ej = Subspace::span(&Matrix::from_row_vectors(alg.field(), p.dim(), &ej_coords));
            let (s, top) = p.quotient(&ej);
            // E = D(Ae)
            let ae_rows: Vec<Vec<u32>> = (0..alg.dim())
                .map(|k| alg.mul(&alg.basis_vec(k), &e))
                .collect();
            let ae = alg.span(&ae_rows);
            let ae_basis = ae.echelon().clone();
            let aec = Subspace::with_basis(&ae_basis).expect("echelon basis");
            let d = ae_basis.rows();
            let mut action = Vec::with_capacity(alg.dim());
            for k in 0..alg.dim() {
                let b = alg.basis_vec(k);
                let mut l = Matrix::zeros(alg.field(), d, d);
                for j in 0..d {
                    let v = alg.mul(&b, ae_basis.row(j));
                    l.row_mut(j)
                        .copy_from_slice(&aec.coords(&v).expect("Ae is a left ideal"));
                }
                action.push(l.transpose());
            }
            let inj = Representation::new(alg.clone(), d, action)?;
            let s_to_e = hom_space(&s, &inj)?;
            let soc = s_to_e.into_iter().next().ok_or_else(|| {
                FrobError::VerificationFailed(format!("no socle embedding for point {}", x + 1))
            })?;
            endo_dims.push(hom_space(&s, &s)?.len());
            simples.push(s);
            projectives.push(p);
            injectives.push(inj);
            tops.push(top);
            socles.push(soc);
        }
        let cat = StandardCatalog {
            algebra: alg.clone(),
            simples,
            projectives,
            injectives,
            tops,
            socles,
            endo_dims,
        };
        cat.verify()?;
        Ok(cat)
    }

    fn verify(&self) -> Result<()> {
        let n = self.simples.len();
        for x in 0..n {
            let soc = self.injectives[x].socle();
            if soc.dim() != self.simples[x].dim() {
                return Err(FrobError::VerificationFailed(format!(
                    "socle of E{} is not simple",
                    x + 1
                )));
            }
            if rank(&self.socles[x]) != self.simples[x].dim() {
                return Err(FrobError::VerificationFailed(format!(
                    "S{} -> E{} is not monic",
                    x + 1,
                    x + 1
                )));
            }
            for y in 0..n {
                if hom_space(&self.simples[y], &self.injectives[x])?.is_empty() != (x != y) {
                    return Err(FrobError::VerificationFailed(format!(
                        "Hom(S{}, E{}) has the wrong vanishing",
                        y + 1,
                        x + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    /// The injective cogenerator `E_1 + ... + E_n`.
    pub fn cogenerator(&self) -> Representation {
        Representation::direct_sum_all(self.algebra.clone(), &self.injectives)
    }
}

impl Representation {
    /// Multiplicity of each simple: `dim(M e_x) / dim(S_x e_x)`.
    pub fn composition_factors(&self) -> Result<Vec<usize>> {
        let alg = self.algebra();
        if !alg.is_primitive() {
            return Err(FrobError::NonPrimitiveIdempotents);
        }
        let w = alg.simple_weights()?;
        (0..alg.num_points())
            .map(|x| {
                let r = rank(&self.act(alg.point_idempotent(x)));
                if !r.is_multiple_of(w[x]) {
                    return Err(FrobError::VerificationFailed(format!(
                        "dim(M e{}) = {} is not a multiple of {}",
                        x + 1,
                        r,
                        w[x]
                    )));
                }
                Ok(r / w[x])
            })
            .collect()
    }

    /// Points occurring as composition factors.
    pub fn support(&self) -> Result<Vec<usize>> {
        Ok(self
            .composition_factors()?
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(x, _)| x)
            .collect())
    }

    fn radical_actions(&self) -> Result<Vec<Matrix>> {
        Ok(self
            .algebra()
            .radical()?
            .row_vecs()
            .iter()
            .map(|r| self.act(r))
            .collect())
    }

    /// `{v : v J = 0}`.
    pub fn socle(&self) -> Subspace {
        let f = self.field();
        let Ok(acts) = self.radical_actions() else {
            return Subspace::zero(f, self.dim());
        };
        if acts.is_empty() {
            return Subspace::full(f, self.dim());
        }
        let stacked = acts
            .iter()
            .fold(Matrix::zeros(f, self.dim(), 0), |acc, m| acc.hstack(m));
        Subspace::span(&left_kernel(&stacked))
    }

    /// `MJ`.
    pub fn radical(&self) -> Subspace {
        let f = self.field();
        let acts = self.radical_actions().unwrap_or_default();
        let stacked = acts
            .iter()
            .fold(Matrix::zeros(f, 0, self.dim()), |acc, m| acc.vstack(m));
        Subspace::span(&stacked)
    }

    /// Socle series, radical series and composition factors.
    pub fn structure_series(&self) -> Result<StructureSeries> {
        let factors = self.composition_factors()?;
        let f = self.field();
        let mut socle_series = Vec::new();
        let mut socle_layers = Vec::new();
        let mut current = Subspace::zero(f, self.dim());
        while current.dim() < self.dim() {
            let (q, _) = self.quotient(&current);
            let soc = q.socle();
            let (layer, _) = q.submodule_on(&soc)?;
            socle_layers.push(layer.composition_factors()?);
            let qt = crate::exactla::Quotient::new(current.clone());
            let mut next = current.clone();
            for i in 0..soc.dim() {
                next.insert(&qt.lift(soc.echelon().row(i)));
            }
            current = next;
            socle_series.push(current.dim());
        }
        let mut radical_series = vec![self.dim()];
        let mut m = self.clone();
        loop {
            let r = m.radical();
            if r.dim() == 0 {
                break;
            }
            radical_series.push(r.dim());
            if r.dim() == m.dim() {
                return Err(FrobError::VerificationFailed(
                    "radical series does not terminate".into(),
                ));
            }
            m = m.submodule_on(&r)?.0;
        }
        radical_series.push(0);
        Ok(StructureSeries {
            socle_series,
            radical_series,
            factors,
            socle_layers,
        })
    }

    /// Largest submodule whose composition factors all lie in `killed`.
    pub fn torsion_submodule(&self, killed: &[usize]) -> Result<(Representation, Matrix)> {
        let alg = self.algebra();
        let surviving: Vec<usize> = (0..alg.num_points())
            .filter(|x| !killed.contains(x))
            .collect();
        let e = alg.points_idempotent(&surviving);
        let f = self.field();
        let mut stacked = Matrix::zeros(f, self.dim(), 0);
        for k in 0..alg.dim() {
            let be = alg.mul(&alg.basis_vec(k), &e);
            stacked = stacked.hstack(&self.act(&be));
        }
        let t = if stacked.cols() == 0 {
            Subspace::full(f, self.dim())
        } else {
            Subspace::span(&left_kernel(&stacked))
        };
        self.submodule_on(&t)
    }
}
