use std::sync::Arc;

use serde::Serialize;

use super::{associator, tensor, Bimodule, Dual, Side, TensorProduct};
use crate::algebra::{AlgRef, Algebra};
use crate::error::{FrobError, Result};
use crate::exactla::{invert, solve_left, Matrix, Subspace};
use crate::module::{
    intertwiners, is_projective, IsoOutcome, IsoSearch, Representation, Splitting,
};

/// `F = - (x)_A M` on right `A`-modules, `G = - (x)_B M*` on right `B`-modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Functor {
    F,
    G,
}

/// The four triangle identities, each checked as an exact matrix identity.
#[derive(Clone, Debug, Serialize)]
pub struct ZigZagReport {
    /// `M -> M (x) M* (x) M -> M` through the unit and counit of `F -| G`.
    pub unit_counit_on_m: bool,
    /// `M* -> M* (x) M (x) M* -> M*` through the unit and counit of `F -| G`.
    pub unit_counit_on_dual: bool,
    /// `M* -> M*` through the unit and counit of `G -| F`.
    pub theta_xi_on_dual: bool,
    /// `M -> M` through the unit and counit of `G -| F`.
    pub theta_xi_on_m: bool,
}

impl ZigZagReport {
    pub fn all(&self) -> bool {
        self.unit_counit_on_m
            && self.unit_counit_on_dual
            && self.theta_xi_on_dual
            && self.theta_xi_on_m
    }
}

/// `F -| G` for an `(A, B)`-bimodule `M` that is projective over `B`, with `G = - (x)_B M*`.
#[derive(Clone, Debug)]
pub struct AdjointPair {
    pub bimodule: Bimodule,
    pub right_splitting: Splitting,
    /// `Hom_B(M, B)`.
    pub right_dual: Dual,
    /// `M (x)_B M*`, an `(A, A)`-bimodule.
    pub mm: TensorProduct,
    /// `M* (x)_A M`, a `(B, B)`-bimodule.
    pub dm: TensorProduct,
    /// The coevaluation element of `M (x)_B M*`.
    pub coevaluation: Vec<u32>,
    /// `A -> M (x)_B M*`.
    pub unit: Matrix,
    /// `M* (x)_A M -> B`.
    pub counit: Matrix,
    coev_lift: Vec<u32>,
    eps_table: Matrix,
}

/// The adjunction `G -| F` transported through theta, with the triangle report for both adjunctions.
#[derive(Clone, Debug)]
pub struct AdjunctionSystem {
    /// The element of `M* (x)_A M` transported from the left dual through theta.
    pub theta_element: Vec<u32>,
    /// `B -> M* (x)_A M`.
    pub theta_unit: Matrix,
    /// `M (x)_B M* -> A`.
    pub xi: Matrix,
    theta_lift: Vec<u32>,
    xi_table: Matrix,
    pub zigzags: ZigZagReport,
}

/// Everything produced by a successful Frobenius check.
#[derive(Clone, Debug)]
pub struct FrobeniusCertificate {
    pub pair: AdjointPair,
    pub left_splitting: Splitting,
    /// `Hom_A(M, A)`.
    pub left_dual: Dual,
    /// `(B, A)`-bimodule isomorphism from the left dual to the right dual.
    pub theta: Matrix,
    pub theta_inverse: Matrix,
    pub adjunction: AdjunctionSystem,
}

impl std::ops::Deref for FrobeniusCertificate {
    type Target = AdjointPair;
    fn deref(&self) -> &AdjointPair {
        &self.pair
    }
}

pub fn frobenius_check(m: &Bimodule, cfg: &IsoSearch) -> Result<FrobeniusCertificate> {
    let left_splitting = is_projective(&m.left_module())?.ok_or(FrobError::NotLeftProjective)?;
    let pair = AdjointPair::new(m)?;
    let left_dual = Dual::new(m, Side::Left)?;
    let theta = match left_dual
        .bimodule
        .iso_test(&pair.right_dual.bimodule, cfg)?
    {
        IsoOutcome::Isomorphic(x) => x,
        IsoOutcome::NotIsomorphic(why) => return Err(FrobError::DualsNotIsomorphic(why)),
        IsoOutcome::Unknown => return Err(FrobError::Unknown),
    };
    if !left_dual.bimodule.is_hom(&pair.right_dual.bimodule, &theta) {
        return Err(FrobError::VerificationFailed(
            "theta is not a bimodule map".into(),
        ));
    }
    let theta_inverse = invert(&theta)?;
    let adjunction = AdjunctionSystem::build(&pair, &left_dual, &theta, &theta_inverse)?;
    if !adjunction.zigzags.all() {
        return Err(FrobError::VerificationFailed(format!(
            "triangle identities: {:?}",
            adjunction.zigzags
        )));
    }
    Ok(FrobeniusCertificate {
        pair,
        left_splitting,
        left_dual,
        theta,
        theta_inverse,
        adjunction,
    })
}

/// `(k, i) -> e_i lambda_X(a_k)` for `A (x) X -> X`.
fn left_unitor(tp: &TensorProduct, x: &Bimodule) -> Result<Matrix> {
    let f = x.field();
    let rows: Vec<Vec<u32>> = x
        .lambda()
        .iter()
        .flat_map(|l| (0..x.dim()).map(move |i| l.row(i).to_vec()))
        .collect();
    tp.tensor
        .map_out(&Matrix::from_row_vectors(f, x.dim(), &rows))
}

/// `(i, k) -> e_i rho_X(b_k)` for `X (x) B -> X`.
fn right_unitor(tp: &TensorProduct, x: &Bimodule) -> Result<Matrix> {
    let f = x.field();
    let rows: Vec<Vec<u32>> = (0..x.dim())
        .flat_map(|i| x.rho().iter().map(move |r| r.row(i).to_vec()))
        .collect();
    tp.tensor
        .map_out(&Matrix::from_row_vectors(f, x.dim(), &rows))
}

fn left_unitor_inverse(tp: &TensorProduct, x: &Bimodule) -> Matrix {
    let f = x.field();
    let one = x.left_algebra().unit().to_vec();
    let rows: Vec<Vec<u32>> = (0..x.dim())
        .map(|i| tp.tensor.pure(&one, &unit_vec(x.dim(), i)))
        .collect();
    Matrix::from_row_vectors(f, tp.dim(), &rows)
}

fn right_unitor_inverse(tp: &TensorProduct, x: &Bimodule) -> Matrix {
    let f = x.field();
    let one = x.right_algebra().unit().to_vec();
    let rows: Vec<Vec<u32>> = (0..x.dim())
        .map(|i| tp.tensor.pure(&unit_vec(x.dim(), i), &one))
        .collect();
    Matrix::from_row_vectors(f, tp.dim(), &rows)
}

fn unit_vec(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Solves for the element `c` of the quotient with `omega(c) = I`, where `omega` is given on basis tensors.
fn solve_for_identity(
    tp: &TensorProduct,
    omega: &Matrix,
    n: usize,
    what: &str,
) -> Result<Vec<u32>> {
    let f = omega.field();
    let om = tp.tensor.map_out(omega)?;
    let target = Matrix::row_vector(f, &Matrix::identity(f, n).flatten());
    let c = solve_left(&om, &target)?
        .ok_or_else(|| FrobError::VerificationFailed(format!("no {what}")))?;
    Ok(c.row(0).to_vec())
}

fn is_central(tp: &TensorProduct, c: &[u32]) -> bool {
    let b = &tp.bimodule;
    let gens = b.left_algebra().generators();
    gens.iter()
        .all(|g| b.left_act(g).vec_mul(c) == b.right_act(g).vec_mul(c))
}

/// `x -> x . c` for a central element `c`, as a map from the regular bimodule.
fn element_map(tp: &TensorProduct, c: &[u32]) -> Matrix {
    let f = tp.bimodule.field();
    let rows: Vec<Vec<u32>> = tp.bimodule.lambda().iter().map(|l| l.vec_mul(c)).collect();
    Matrix::from_row_vectors(f, tp.dim(), &rows)
}

fn is_map_to_regular(tp: &TensorProduct, map: &Matrix, alg: &AlgRef) -> bool {
    tp.bimodule.is_hom(&Bimodule::regular(alg.clone()), map)
}

impl AdjointPair {
    /// Fails with `NotRightProjective` when `M` is not projective over `B`.
    pub fn new(m: &Bimodule) -> Result<AdjointPair> {
        let right_splitting =
            is_projective(&m.right_module())?.ok_or(FrobError::NotRightProjective)?;
        let r = Dual::new(m, Side::Right)?;
        let f = m.field();
        let b = m.right_algebra().clone();
        let n = m.dim();
        let s = r.dim();
        let mm = tensor(m, &r.bimodule)?;
        let dm = tensor(&r.bimodule, m)?;

        // dual basis of M over B: sum_t m_t (x) psi_t acting as the identity
        let mut omega = Matrix::zeros(f, n * s, n * n);
        for i in 0..n {
            for (t, psi) in r.basis.iter().enumerate() {
                let row = omega.row_mut(i * s + t);
                for rr in 0..n {
                    let v = m.right_act(psi.row(rr));
                    row[rr * n..(rr + 1) * n].copy_from_slice(v.row(i));
                }
            }
        }
        let coevaluation = solve_for_identity(&mm, &omega, n, "dual basis of M over B")?;
        if !is_central(&mm, &coevaluation) {
            return Err(FrobError::VerificationFailed(
                "coevaluation is not central".into(),
            ));
        }
        let unit = element_map(&mm, &coevaluation);

        let mut eps_rows = Vec::with_capacity(s * n);
        for psi in &r.basis {
            for i in 0..n {
                eps_rows.push(psi.row(i).to_vec());
            }
        }
        let eps_table = Matrix::from_row_vectors(f, b.dim(), &eps_rows);
        let counit = dm.tensor.map_out(&eps_table)?;
        if !is_map_to_regular(&dm, &counit, &b) {
            return Err(FrobError::VerificationFailed(
                "evaluation is not a bimodule map".into(),
            ));
        }
        let coev_lift = mm.tensor.lift(&coevaluation);
        Ok(AdjointPair {
            bimodule: m.clone(),
            right_splitting,
            right_dual: r,
            mm,
            dm,
            coevaluation,
            unit,
            counit,
            coev_lift,
            eps_table,
        })
    }
}

impl AdjunctionSystem {
    fn build(
        pair: &AdjointPair,
        l: &Dual,
        theta: &Matrix,
        theta_inv: &Matrix,
    ) -> Result<AdjunctionSystem> {
        let m = &pair.bimodule;
        let f = m.field();
        let a = m.left_algebra().clone();
        let n = m.dim();
        let s = pair.right_dual.dim();
        let lm = tensor(&l.bimodule, m)?;

        // dual basis of M over A from the left dual, moved to M* (x) M through theta
        let lk = l.dim();
        let mut omega_l = Matrix::zeros(f, lk * n, n * n);
        for (u, phi) in l.basis.iter().enumerate() {
            for i in 0..n {
                let row = omega_l.row_mut(u * n + i);
                for rr in 0..n {
                    let v = m.left_act(phi.row(rr));
                    row[rr * n..(rr + 1) * n].copy_from_slice(v.row(i));
                }
            }
        }
        let d_left = solve_for_identity(&lm, &omega_l, n, "dual basis of M over A")?;
        let theta_lift = theta
            .kron(&Matrix::identity(f, n))
            .vec_mul(&lm.tensor.lift(&d_left));
        let theta_element = pair.dm.tensor.project(&theta_lift);
        if !is_central(&pair.dm, &theta_element) {
            return Err(FrobError::VerificationFailed(
                "transported coevaluation is not central".into(),
            ));
        }
        let theta_unit = element_map(&pair.dm, &theta_element);

        let mut xi_rows = Vec::with_capacity(n * s);
        let phis: Vec<Matrix> = (0..s).map(|t| l.element(theta_inv.row(t))).collect();
        for i in 0..n {
            for phi in &phis {
                xi_rows.push(phi.row(i).to_vec());
            }
        }
        let xi_table = Matrix::from_row_vectors(f, a.dim(), &xi_rows);
        let xi = pair.mm.tensor.map_out(&xi_table)?;
        if !is_map_to_regular(&pair.mm, &xi, &a) {
            return Err(FrobError::VerificationFailed(
                "transported evaluation is not a bimodule map".into(),
            ));
        }
        let zigzags = triangles(pair, &theta_unit, &xi)?;
        Ok(AdjunctionSystem {
            theta_element,
            theta_unit,
            xi,
            theta_lift,
            xi_table,
            zigzags,
        })
    }
}

fn triangles(pair: &AdjointPair, theta_unit: &Matrix, xi: &Matrix) -> Result<ZigZagReport> {
    let m = &pair.bimodule;
    let ms = &pair.right_dual.bimodule;
    let f = m.field();
    let (a, b) = (m.left_algebra().clone(), m.right_algebra().clone());
    let (ra, rb) = (Bimodule::regular(a), Bimodule::regular(b));
    let (im, is) = (Matrix::identity(f, m.dim()), Matrix::identity(f, ms.dim()));
    let am = tensor(&ra, m)?;
    let mb = tensor(m, &rb)?;
    let msa = tensor(ms, &ra)?;
    let bms = tensor(&rb, ms)?;
    let mm_m = tensor(&pair.mm.bimodule, m)?;
    let m_dm = tensor(m, &pair.dm.bimodule)?;
    let dm_ms = tensor(&pair.dm.bimodule, ms)?;
    let ms_mm = tensor(ms, &pair.mm.bimodule)?;
    let alpha_m = associator(&pair.mm.tensor, &pair.dm.tensor, &mm_m.tensor, &m_dm.tensor);
    let alpha_d = associator(
        &pair.dm.tensor,
        &pair.mm.tensor,
        &dm_ms.tensor,
        &ms_mm.tensor,
    );
    let alpha_m_inv = invert(&alpha_m)?;
    let alpha_d_inv = invert(&alpha_d)?;

    let z1 = left_unitor_inverse(&am, m)
        .mul(&am.tensor.map_pair(&pair.unit, &im, &mm_m.tensor))
        .mul(&alpha_m)
        .mul(&m_dm.tensor.map_pair(&im, &pair.counit, &mb.tensor))
        .mul(&right_unitor(&mb, m)?);
    let z2 = right_unitor_inverse(&msa, ms)
        .mul(&msa.tensor.map_pair(&is, &pair.unit, &ms_mm.tensor))
        .mul(&alpha_d_inv)
        .mul(&dm_ms.tensor.map_pair(&pair.counit, &is, &bms.tensor))
        .mul(&left_unitor(&bms, ms)?);
    let z3 = left_unitor_inverse(&bms, ms)
        .mul(&bms.tensor.map_pair(theta_unit, &is, &dm_ms.tensor))
        .mul(&alpha_d)
        .mul(&ms_mm.tensor.map_pair(&is, xi, &msa.tensor))
        .mul(&right_unitor(&msa, ms)?);
    let z4 = right_unitor_inverse(&mb, m)
        .mul(&mb.tensor.map_pair(&im, theta_unit, &m_dm.tensor))
        .mul(&alpha_m_inv)
        .mul(&mm_m.tensor.map_pair(xi, &im, &am.tensor))
        .mul(&left_unitor(&am, m)?);
    Ok(ZigZagReport {
        unit_counit_on_m: z1.is_identity(),
        unit_counit_on_dual: z2.is_identity(),
        theta_xi_on_dual: z3.is_identity(),
        theta_xi_on_m: z4.is_identity(),
    })
}

/// `X -> (X (x) P) (x) Q` sending `x` to `x (x) w` for a fixed element `w` of `P (x) Q`.
fn insert_element(
    x: &Representation,
    xp: &TensorProduct,
    xpq: &TensorProduct,
    w: &[u32],
) -> Matrix {
    let f = x.field();
    let q = xpq.tensor.right_dim();
    let step1 = Matrix::identity(f, x.dim()).kron(&Matrix::row_vector(f, w));
    step1
        .mul(&xp.tensor.projection().kron(&Matrix::identity(f, q)))
        .mul(xpq.tensor.projection())
}

/// `(Y (x) P) (x) Q -> Y` from a balanced pairing `value(j, r)` in the algebra acting on `Y`.
fn contract(
    y: &Representation,
    yp: &TensorProduct,
    ypq: &TensorProduct,
    value: impl Fn(usize, usize) -> Vec<u32>,
) -> Result<Matrix> {
    let f = y.field();
    let (dy, pj, qr) = (y.dim(), yp.tensor.right_dim(), ypq.tensor.right_dim());
    let acts: Vec<Vec<Matrix>> = (0..pj)
        .map(|j| (0..qr).map(|r| y.act(&value(j, r))).collect())
        .collect();
    let sec = yp.tensor.section();
    let mut table = Matrix::zeros(f, yp.dim() * qr, dy);
    for qi in 0..yp.dim() {
        for r in 0..qr {
            let mut acc = vec![0u32; dy];
            for yy in 0..dy {
                for (j, acts_j) in acts.iter().enumerate() {
                    let c = sec.get(qi, yy * pj + j);
                    if c != 0 {
                        for (o, &v) in acc.iter_mut().zip(acts_j[r].row(yy)) {
                            *o = f.mul_add(*o, c, v);
                        }
                    }
                }
            }
            table.row_mut(qi * qr + r).copy_from_slice(&acc);
        }
    }
    ypq.tensor.map_out(&table)
}

/// A unit or counit at one module, with the intermediate tensor products it is defined on.
#[derive(Clone, Debug)]
pub struct Component {
    pub map: Matrix,
    /// The first tensor product (`X (x) M` or `Y (x) M*`).
    pub inner: TensorProduct,
    /// The composite functor applied to the module.
    pub outer: TensorProduct,
}

impl Component {
    /// The composite functor's value as a right module.
    pub fn outer_module(&self) -> Representation {
        self.outer.bimodule.right_module()
    }
    pub fn inner_module(&self) -> Representation {
        self.inner.bimodule.right_module()
    }
}

impl AdjointPair {
    pub fn left_algebra(&self) -> &AlgRef {
        self.bimodule.left_algebra()
    }
    pub fn right_algebra(&self) -> &AlgRef {
        self.bimodule.right_algebra()
    }

    /// The bimodule a functor tensors with.
    pub fn kernel(&self, which: Functor) -> &Bimodule {
        match which {
            Functor::F => &self.bimodule,
            Functor::G => &self.right_dual.bimodule,
        }
    }

    pub fn apply_tensor(&self, which: Functor, x: &Representation) -> Result<TensorProduct> {
        tensor(&Bimodule::from_right_module(x)?, self.kernel(which))
    }

    pub fn apply(&self, which: Functor, x: &Representation) -> Result<Representation> {
        Ok(self.apply_tensor(which, x)?.bimodule.right_module())
    }

    /// The functor on a homomorphism `h: X -> Y`.
    pub fn apply_hom(
        &self,
        which: Functor,
        h: &Matrix,
        x: &Representation,
        y: &Representation,
    ) -> Result<Matrix> {
        let tx = self.apply_tensor(which, x)?;
        let ty = self.apply_tensor(which, y)?;
        let id = Matrix::identity(h.field(), self.kernel(which).dim());
        Ok(tx.tensor.map_pair(h, &id, &ty.tensor))
    }

    /// `eta_X: X -> GF(X)`.
    pub fn unit_at(&self, x: &Representation) -> Result<Component> {
        let inner = self.apply_tensor(Functor::F, x)?;
        let outer = tensor(&inner.bimodule, &self.right_dual.bimodule)?;
        let map = insert_element(x, &inner, &outer, &self.coev_lift);
        Ok(Component { map, inner, outer })
    }

    /// `eps_Y: FG(Y) -> Y`.
    pub fn counit_at(&self, y: &Representation) -> Result<Component> {
        let inner = self.apply_tensor(Functor::G, y)?;
        let outer = tensor(&inner.bimodule, &self.bimodule)?;
        let r = &self.right_dual;
        let map = contract(y, &inner, &outer, |t, row| r.basis[t].row(row).to_vec())?;
        Ok(Component { map, inner, outer })
    }

    /// `eps_{FX} . F(eta_X) = id` and `G(eps_Y) . eta_{GY} = id` at the given modules.
    pub fn module_triangles(&self, x: &Representation, y: &Representation) -> Result<bool> {
        let f = x.field();
        let eta = self.unit_at(x)?;
        let fx = eta.inner_module();
        let gfx = eta.outer_module();
        let f_eta = self.apply_hom(Functor::F, &eta.map, x, &gfx)?;
        let eps = self.counit_at(&fx)?;
        let left = f_eta.mul(&eps.map);
        let eps_y = self.counit_at(y)?;
        let gy = eps_y.inner_module();
        let eta_g = self.unit_at(&gy)?;
        let g_eps = self.apply_hom(Functor::G, &eps_y.map, &eps_y.outer_module(), y)?;
        let right = eta_g.map.mul(&g_eps);
        Ok(left == Matrix::identity(f, fx.dim()) && right == Matrix::identity(f, gy.dim()))
    }

    /// `Hom_B(M, N)` as a right `A`-module via `(phi . a)(m) = phi(a m)`.
    pub fn hom_functor(&self, n: &Representation) -> Result<(Representation, Vec<Matrix>)> {
        hom_functor(&self.bimodule, n)
    }

    pub fn eps_table(&self) -> &Matrix {
        &self.eps_table
    }
}

impl FrobeniusCertificate {
    pub fn pair(&self) -> &AdjointPair {
        &self.pair
    }

    /// `Z -> FG(Z)` for the adjunction `G -| F`.
    pub fn theta_unit_at(&self, z: &Representation) -> Result<Component> {
        let inner = self.apply_tensor(Functor::G, z)?;
        let outer = tensor(&inner.bimodule, &self.bimodule)?;
        let map = insert_element(z, &inner, &outer, &self.adjunction.theta_lift);
        Ok(Component { map, inner, outer })
    }

    /// `GF(X) -> X` for the adjunction `G -| F`.
    pub fn xi_at(&self, x: &Representation) -> Result<Component> {
        let inner = self.apply_tensor(Functor::F, x)?;
        let outer = tensor(&inner.bimodule, &self.right_dual.bimodule)?;
        let s = self.right_dual.dim();
        let table = &self.adjunction.xi_table;
        let map = contract(x, &inner, &outer, |i, t| table.row(i * s + t).to_vec())?;
        Ok(Component { map, inner, outer })
    }
}

/// `Hom_B(M, N)` with basis maps `n x dim N`, as a right `A`-module.
pub fn hom_functor(m: &Bimodule, n: &Representation) -> Result<(Representation, Vec<Matrix>)> {
    let f = m.field();
    let b = m.right_algebra();
    let pairs: Vec<(Matrix, Matrix)> = b
        .generators()
        .iter()
        .map(|g| (m.right_act(g), n.act(g)))
        .collect();
    let basis = intertwiners(f, m.dim(), n.dim(), &pairs);
    let k = basis.len();
    let a = m.left_algebra().clone();
    let flat = Matrix::from_row_vectors(
        f,
        m.dim() * n.dim(),
        &basis.iter().map(|x| x.flatten()).collect::<Vec<_>>(),
    );
    let coords = Subspace::with_basis(&flat).expect("hom basis is independent");
    let mut action = Vec::with_capacity(a.dim());
    for l in m.lambda() {
        let rows: Vec<Vec<u32>> = basis
            .iter()
            .map(|p| {
                coords
                    .coords(&l.mul(p).flatten())
                    .expect("Hom_B(M, N) is an A-module")
            })
            .collect();
        action.push(Matrix::from_row_vectors(f, k, &rows));
    }
    Ok((Representation::new(a, k, action)?, basis))
}

/// `E = End_A(M*)` with the embedding `B -> E` given by the left action on `M*`.
#[derive(Clone, Debug)]
pub struct EndomorphismExtension {
    pub algebra: AlgRef,
    /// Row `k` is the image of `b_k`.
    pub embedding: Matrix,
    /// `E` as an `(E, B)`-bimodule.
    pub bimodule: Bimodule,
    pub right_projective: bool,
    /// `Hom_B(E, B)` is isomorphic to `E` as a `(B, E)`-bimodule.
    pub dual_matches: bool,
}

impl EndomorphismExtension {
    pub fn ok(&self) -> bool {
        self.right_projective && self.dual_matches
    }
}

pub fn endomorphism_extension(
    cert: &FrobeniusCertificate,
    cfg: &IsoSearch,
) -> Result<EndomorphismExtension> {
    let ms = &cert.right_dual.bimodule;
    let f = ms.field();
    let a = ms.right_algebra();
    let b = ms.left_algebra().clone();
    let pairs: Vec<(Matrix, Matrix)> = a
        .generators()
        .iter()
        .map(|g| (ms.right_act(g), ms.right_act(g)))
        .collect();
    let basis = intertwiners(f, ms.dim(), ms.dim(), &pairs);
    let d = basis.len();
    let flat = Matrix::from_row_vectors(
        f,
        ms.dim() * ms.dim(),
        &basis.iter().map(|x| x.flatten()).collect::<Vec<_>>(),
    );
    let coords = Subspace::with_basis(&flat).expect("endomorphism basis is independent");
    let coords_of = |x: &Matrix| {
        coords
            .coords(&x.flatten())
            .ok_or_else(|| FrobError::VerificationFailed("not an endomorphism".into()))
    };
    // x * y acts as "y then x" on row vectors, matching left actions
    let mut table = Vec::with_capacity(d * d * d);
    for x in &basis {
        for y in &basis {
            table.extend(coords_of(&y.mul(x))?);
        }
    }
    let unit = coords_of(&Matrix::identity(f, ms.dim()))?;
    let labels = (0..d).map(|i| format!("x{}", i + 1)).collect();
    let e: AlgRef = Arc::new(Algebra::raw(
        f,
        labels,
        table,
        unit.clone(),
        vec![unit],
        false,
    )?);
    let rows: Vec<Vec<u32>> = ms.lambda().iter().map(coords_of).collect::<Result<_>>()?;
    let embedding = Matrix::from_row_vectors(f, d, &rows);
    super::check_homomorphism(&b, &e, &embedding)?;
    let lambda = (0..d).map(|i| e.left_mul_basis(i)).collect();
    let rho = (0..b.dim())
        .map(|k| e.right_mul(embedding.row(k)))
        .collect();
    let n = Bimodule::new(e.clone(), b.clone(), d, lambda, rho)?;
    let right_projective = is_projective(&n.right_module())?.is_some();
    let dual = Dual::new(&n, Side::Right)?;
    let reg = Bimodule::regular(e.clone()).restrict_left(b, &embedding)?;
    let dual_matches = match dual.bimodule.iso_test(&reg, cfg)? {
        IsoOutcome::Isomorphic(_) => true,
        IsoOutcome::NotIsomorphic(_) => false,
        IsoOutcome::Unknown => return Err(FrobError::Unknown),
    };
    Ok(EndomorphismExtension {
        algebra: e,
        embedding,
        bimodule: n,
        right_projective,
        dual_matches,
    })
}
