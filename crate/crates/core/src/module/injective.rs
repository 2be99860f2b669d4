use super::{hom_space, Representation, StandardCatalog};
use crate::error::{FrobError, Result};
use crate::exactla::{rank, solve_left, Matrix, Subspace};

/// `M -> E` with `E = sum E_x^{m_x}` and the embedding monic.
#[derive(Clone, Debug)]
pub struct Hull {
    pub hull: Representation,
    pub embed: Matrix,
    pub multiplicities: Vec<usize>,
}

/// `e = sum E_x^{m_x}` with an explicit isomorphism `e -> sum E_x^{m_x}`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub multiplicities: Vec<usize>,
    pub iso: Matrix,
    pub target: Representation,
}

/// Free cover `pi: A^d -> M` and a section `sigma` with `sigma pi = id`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub cover: Matrix,
    pub section: Matrix,
    pub rank: usize,
}

/// Greedy choice of homs `S_x -> M` whose images are independent; they span the socle.
fn socle_components(cat: &StandardCatalog, m: &Representation) -> Result<Vec<(usize, Matrix)>> {
    let mut chosen = Vec::new();
    let mut span = Subspace::zero(m.field(), m.dim());
    for (x, s) in cat.simples.iter().enumerate() {
        for h in hom_space(s, m)? {
            let before = span.dim();
            let joint = span.sum(&Subspace::span(&h));
            if joint.dim() == before + s.dim() {
                span = joint;
                chosen.push((x, h));
            }
        }
    }
    Ok(chosen)
}

pub fn injective_hull(cat: &StandardCatalog, m: &Representation) -> Result<Hull> {
    let n = cat.len();
    let comps = socle_components(cat, m)?;
    let mut multiplicities = vec![0; n];
    for (x, _) in &comps {
        multiplicities[*x] += 1;
    }
    let parts: Vec<Representation> = comps
        .iter()
        .map(|(x, _)| cat.injectives[*x].clone())
        .collect();
    let hull = Representation::direct_sum_all(m.algebra().clone(), &parts);
    if m.dim() == 0 {
        return Ok(Hull {
            embed: Matrix::zeros(m.field(), 0, 0),
            hull,
            multiplicities,
        });
    }
    // target values: component t must go to the socle of its own summand
    let mut offsets = Vec::with_capacity(comps.len());
    let mut off = 0;
    for p in &parts {
        offsets.push(off);
        off += p.dim();
    }
    let homs = hom_space(m, &hull)?;
    if homs.is_empty() {
        return Err(FrobError::ExtensionFailure);
    }
    // unknown coefficients c with sum_s c_s (h_t * phi_s) = iota_t for all t
    let f = m.field();
    let mut rows = Vec::with_capacity(homs.len());
    for phi in &homs {
        let mut row = Vec::new();
        for (_, h) in &comps {
            row.extend(h.mul(phi).flatten());
        }
        rows.push(row);
    }
    let width = rows[0].len();
    let system = Matrix::from_row_vectors(f, width, &rows);
    let mut target = Vec::with_capacity(width);
    for (t, (x, _)) in comps.iter().enumerate() {
        let mut iota = Matrix::zeros(f, cat.simples[*x].dim(), hull.dim());
        let soc = &cat.socles[*x];
        for i in 0..soc.rows() {
            for j in 0..soc.cols() {
                iota.set(i, offsets[t] + j, soc.get(i, j));
            }
        }
        target.extend(iota.flatten());
    }
    let c =
        solve_left(&system, &Matrix::row_vector(f, &target))?.ok_or(FrobError::ExtensionFailure)?;
    let mut embed = Matrix::zeros(f, m.dim(), hull.dim());
    for (s, phi) in homs.iter().enumerate() {
        embed.add_scaled(c.get(0, s), phi);
    }
    if rank(&embed) != m.dim() {
        return Err(FrobError::ExtensionFailure);
    }
    Ok(Hull {
        hull,
        embed,
        multiplicities,
    })
}

/// Multiplicities of the indecomposable injectives in `e`, with an explicit isomorphism.
pub fn injective_decompose(cat: &StandardCatalog, e: &Representation) -> Result<Decomposition> {
    let h = injective_hull(cat, e)?;
    if h.hull.dim() != e.dim() {
        return Err(FrobError::NotInjective);
    }
    Ok(Decomposition {
        multiplicities: h.multiplicities,
        iso: h.embed,
        target: h.hull,
    })
}

/// Returns a splitting of a free cover when `m` is projective.
pub fn is_projective(m: &Representation) -> Result<Option<Splitting>> {
    let alg = m.algebra().clone();
    let f = m.field();
    let da = alg.dim();
    if m.dim() == 0 {
        return Ok(Some(Splitting {
            cover: Matrix::zeros(f, 0, 0),
            section: Matrix::zeros(f, 0, 0),
            rank: 0,
        }));
    }
    // generators: lifts of a basis of the top M / MJ, or the whole basis without a radical
    let gens: Vec<usize> = match alg.radical() {
        Ok(_) => m.radical().complement(),
        Err(_) => (0..m.dim()).collect(),
    };
    let d = gens.len();
    let mut cover = Matrix::zeros(f, d * da, m.dim());
    for (t, &g) in gens.iter().enumerate() {
        for k in 0..da {
            cover
                .row_mut(t * da + k)
                .copy_from_slice(m.action()[k].row(g));
        }
    }
    let reg = Representation::regular(alg.clone());
    let homs = hom_space(m, &reg)?;
    if homs.is_empty() {
        return Ok(None);
    }
    let mut rows = Vec::with_capacity(d * homs.len());
    for t in 0..d {
        let block = cover.submatrix(t * da, 0, da, m.dim());
        for h in &homs {
            rows.push(h.mul(&block).flatten());
        }
    }
    let system = Matrix::from_row_vectors(f, m.dim() * m.dim(), &rows);
    let target = Matrix::identity(f, m.dim()).flatten();
    let Some(c) = solve_left(&system, &Matrix::row_vector(f, &target))? else {
        return Ok(None);
    };
    let mut section = Matrix::zeros(f, m.dim(), d * da);
    for t in 0..d {
        let mut sigma_t = Matrix::zeros(f, m.dim(), da);
        for (s, h) in homs.iter().enumerate() {
            sigma_t.add_scaled(c.get(0, t * homs.len() + s), h);
        }
        for i in 0..m.dim() {
            section.row_mut(i)[t * da..(t + 1) * da].copy_from_slice(sigma_t.row(i));
        }
    }
    debug_assert!(section.mul(&cover).is_identity());
    Ok(Some(Splitting {
        cover,
        section,
        rank: d,
    }))
}
