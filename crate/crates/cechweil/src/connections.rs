//! Local and simplicial connections in frames: the barycentric construction
//! generated in degree zero, pullback connections, curvature, true-morphism
//! and admissibility checks.
//!
//! A connection is always `d + A` in a frame. A simplicial connection is a
//! per-degree family of such matrices over `N_p × Δ^p` whose comparison
//! maps are true morphisms; the barycentric one is `Σ t_i π*∇̃_{α_i}` with
//! each degree-zero local connection extended through the Green splittings,
//! placing the tagged generator's connection on both legs of every
//! elementary summand.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{columns_in_span, Matrix, Poly, RatFunc, Var};
use crate::bundles::{ComplexOnNerve, GreenStructure};
use crate::cover::{Cover, Tuple};
use crate::error::Error;
use crate::forms::{
    generator_coefficients, matrix_differential, matrix_pullback_coface, matrix_pullback_nerve,
    ratfunc_matrix_to_forms, Form,
};
use crate::report::CheckReport;

/// Connection matrices on one open set, one per internal degree of the
/// complex; entries are type-(1,0) forms with no simplex dependence.
#[derive(Clone, Debug)]
pub struct LocalConnection {
    pub mats: Vec<Matrix<Form>>,
}

/// Connection matrices of one simplicial connection on `𝓔^{•,star}`:
/// total-degree-1 forms on `N_p × Δ^p`, one matrix per tuple.
#[derive(Clone, Debug)]
pub struct SimplicialConnection {
    pub star: usize,
    pub mats: BTreeMap<Tuple, Matrix<Form>>,
}

impl SimplicialConnection {
    pub fn at(&self, t: &Tuple) -> Result<&Matrix<Form>, Error> {
        self.mats
            .get(t)
            .ok_or_else(|| Error::MissingComponent(alloc::format!("connection at {t}")))
    }

    /// Curvature matrices `κ = dA + A ∧ A`, per tuple.
    pub fn curvature(&self) -> Result<BTreeMap<Tuple, Matrix<Form>>, Error> {
        let mut out = BTreeMap::new();
        for (t, a) in &self.mats {
            let da = matrix_differential(a);
            let asq = a.mul(a)?;
            out.insert(t.clone(), da.add(&asq)?);
        }
        Ok(out)
    }
}

/// Pullback of the connection `d + a` along the frame isomorphism `f`:
/// `d + f^{-1} a f + f^{-1} df`.
pub fn pullback_connection(
    f: &Matrix<RatFunc>,
    a: &Matrix<Form>,
) -> Result<Matrix<Form>, Error> {
    let f_inv = f.inverse()?;
    let f_forms = ratfunc_matrix_to_forms(f, None);
    let f_inv_forms = ratfunc_matrix_to_forms(&f_inv, None);
    let df = matrix_differential(&f_forms);
    let conjugated = f_inv_forms.mul(a)?.mul(&f_forms)?;
    let gauge = f_inv_forms.mul(&df)?;
    conjugated.add(&gauge)
}

/// True-morphism defect of `f : (A, d + a_src) → (B, d + a_tgt)` on a single
/// chart: `df + a_tgt f - f a_src`, which must vanish exactly.
pub fn true_morphism_defect(
    f: &Matrix<Form>,
    a_src: &Matrix<Form>,
    a_tgt: &Matrix<Form>,
) -> Result<Matrix<Form>, Error> {
    let df = matrix_differential(f);
    df.add(&a_tgt.mul(f)?)?.sub(&f.mul(a_src)?)
}

pub fn check_true_morphism(
    f: &Matrix<Form>,
    a_src: &Matrix<Form>,
    a_tgt: &Matrix<Form>,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    let defect = true_morphism_defect(f, a_src, a_tgt)?;
    if !defect.is_zero() {
        report.violation("true-morphism defect is nonzero".into());
    }
    Ok(report)
}

/// The extension of the degree-zero connection of `open = α_i` to `𝓔_α`
/// through the splitting along `(α_i) ≤ α`: `S^{-1} blk S + S^{-1} dS`,
/// where `blk` places the local connection on the first summand and the
/// tagged generators' connections on both legs of each elementary summand.
fn extended_local(
    cx: &ComplexOnNerve,
    gs: &GreenStructure,
    cover: &Cover,
    locals: &BTreeMap<u8, LocalConnection>,
    alpha: &Tuple,
    open: u8,
    star: usize,
) -> Result<Matrix<Form>, Error> {
    let gamma = Tuple(alloc::vec![open]);
    let local_of = |o: u8, s: usize| -> Result<&Matrix<Form>, Error> {
        locals
            .get(&o)
            .and_then(|l| l.mats.get(s))
            .ok_or_else(|| {
                Error::MissingComponent(alloc::format!(
                    "local connection for open {o} at level {s}"
                ))
            })
    };
    let restrict_local = |o: u8, s: usize| -> Result<Matrix<Form>, Error> {
        let sub = cover.restriction_between(&Tuple(alloc::vec![o]), alpha)?;
        matrix_pullback_nerve(local_of(o, s)?, &sub)
    };
    if &gamma == alpha {
        return local_of(open, star).cloned();
    }
    let sp = gs.splitting(alpha, &gamma)?;
    let s_mat = &sp.mats[star];
    // block diagonal: the γ-part, then one block per elementary summand
    // present at this internal degree
    let gamma_rank = cx.ranks_at(&gamma)?[star];
    let mut blocks: Vec<Matrix<Form>> = Vec::new();
    let head = restrict_local(open, star)?;
    if head.rows() != gamma_rank || head.cols() != gamma_rank {
        return Err(Error::WitnessShapeMismatch(alloc::format!(
            "local connection for open {open} at level {star} has wrong rank"
        )));
    }
    blocks.push(head);
    for summand in &sp.witness.summands {
        if summand.low == star || summand.low + 1 == star {
            let tag = restrict_local(summand.tag_open, summand.tag_star)?;
            if tag.rows() != summand.rank || tag.cols() != summand.rank {
                return Err(Error::WitnessShapeMismatch(alloc::format!(
                    "tagged generator of open {} level {} has rank {} ≠ summand rank {}",
                    summand.tag_open, summand.tag_star,
                    tag.rows(),
                    summand.rank
                )));
            }
            blocks.push(tag);
        }
    }
    let block_refs: Vec<&Matrix<Form>> = blocks.iter().collect();
    let blk = Matrix::block_diag(&block_refs);
    let s_forms = ratfunc_matrix_to_forms(s_mat, None);
    let s_inv_forms = ratfunc_matrix_to_forms(&s_mat.inverse()?, None);
    let ds = matrix_differential(&s_forms);
    let conj = s_inv_forms.mul(&blk)?.mul(&s_forms)?;
    let gauge = s_inv_forms.mul(&ds)?;
    conj.add(&gauge)
}

/// Barycentric simplicial connections on every internal degree of a Green
/// complex: `A_p = Σ_i t_i · A_ext(α_i)` with `t_0` eliminated.
pub fn barycentric(
    cx: &ComplexOnNerve,
    gs: &GreenStructure,
    cover: &Cover,
    locals: &BTreeMap<u8, LocalConnection>,
) -> Result<Vec<SimplicialConnection>, Error> {
    let mut out = Vec::new();
    for star in 0..cx.stars() {
        let mut mats = BTreeMap::new();
        for p in 0..=cover.depth {
            for alpha in cover.tuples(p) {
                let r = cx.ranks_at(&alpha)?[star];
                let mut total: Matrix<Form> = Matrix::zeros(r, r);
                for i in 0..=p {
                    let ext =
                        extended_local(cx, gs, cover, locals, &alpha, alpha.0[i], star)?;
                    let t_coeff = if i == 0 {
                        // t_0 = 1 - Σ_{k>=1} t_k
                        let mut poly = Poly::one();
                        for k in 1..=p {
                            poly = poly.sub(&Poly::var(Var::T(k as u8)));
                        }
                        RatFunc::from_poly_free(poly)
                    } else {
                        RatFunc::t(i as u8)
                    };
                    let scaled = ext.try_map(|f| f.scale(&t_coeff))?;
                    total = total.add(&scaled)?;
                }
                let total = total.try_map(|f| Ok(f.clone().with_degree(p)))?;
                mats.insert(alpha, total);
            }
        }
        out.push(SimplicialConnection { star, mats });
    }
    Ok(out)
}

/// The simplicial-connection condition: every comparison map is a true
/// morphism between the two pulled-back connections.
pub fn check_simplicial(
    conn: &SimplicialConnection,
    cx: &ComplexOnNerve,
    cover: &Cover,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    let level = &cx.levels[conn.star];
    for p in 1..=cover.depth {
        for t in cover.tuples(p) {
            let a_here = conn.at(&t)?;
            for i in 0..=p {
                let (face, sub) = cover.nerve_face(&t, i)?;
                let comparison = level.comparison_map(&t, i)?;
                let a_face = matrix_pullback_nerve(conn.at(&face)?, &sub)?;
                let a_pulled = matrix_pullback_coface(a_here, i)?;
                let defect = true_morphism_defect(&comparison, &a_face, &a_pulled)?;
                if !defect.is_zero() {
                    report.violation(alloc::format!(
                        "comparison at {} face {i} (level {}) is not a true morphism",
                        cover.render_tuple(&t),
                        conn.star
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Witness sub-bundles for the admissibility of one comparison map: the
/// inclusions `A^{p-1} ↪ 𝓔^{p-1}(face)` and `B^p ↪ 𝓔^p(tuple)`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub a_incl: Matrix<RatFunc>,
    pub b_incl: Matrix<RatFunc>,
}

/// Admissibility witnesses for one internal degree, keyed by
/// (tuple of degree p, coface index i).
#[derive(Clone, Debug, Default)]
pub struct AdmissibilityWitness {
    pub pairs: BTreeMap<(Tuple, usize), WitnessPair>,
}

/// The canonical witnesses: for the comparison `(α, i)` choose the smallest
/// `j ≠ i` and take the elementary complements of the splittings along
/// `γ = (α_j)`, i.e. `A^{p-1} = 𝓛_{∂_i α, γ}` and `B^p = 𝓛_{α, γ}`.
pub fn canonical_witnesses(
    cx: &ComplexOnNerve,
    gs: &GreenStructure,
    cover: &Cover,
    star: usize,
) -> Result<AdmissibilityWitness, Error> {
    let mut pairs = BTreeMap::new();
    for p in 1..=cover.depth {
        for alpha in cover.tuples(p) {
            for i in 0..=p {
                let j = if i == 0 { 1 } else { 0 };
                let gamma = Tuple(alloc::vec![alpha.0[j]]);
                let face = alpha.face(i)?;
                let r_gamma = cx.ranks_at(&gamma)?[star];
                let b_incl = gs.complement_inclusion(&alpha, &gamma, star, r_gamma)?;
                let a_incl = if face == gamma {
                    // 𝓛_{β,β} = 0: the zero-width inclusion
                    Matrix::zeros(cx.ranks_at(&face)?[star], 0)
                } else {
                    gs.complement_inclusion(&face, &gamma, star, r_gamma)?
                };
                pairs.insert((alpha.clone(), i), WitnessPair { a_incl, b_incl });
            }
        }
    }
    Ok(AdmissibilityWitness { pairs })
}

/// Does the connection preserve the sub-bundle `w`, i.e. is `dW + A·W`
/// contained in the column span of `W` generator by generator?
fn preserves_subbundle(
    a: &Matrix<Form>,
    w: &Matrix<RatFunc>,
    p: usize,
) -> Result<bool, Error> {
    if w.cols() == 0 {
        return Ok(true);
    }
    let w_forms = ratfunc_matrix_to_forms(w, Some(p));
    let m = matrix_differential(&w_forms).add(&a.mul(&w_forms)?)?;
    for (_, coeffs) in generator_coefficients(&m) {
        if !columns_in_span(w, &coeffs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the base-type part (the component seen by fibrewise evaluation
/// against base vectors) of `ω · W` exactly zero?
fn kills_witness(omega: &Matrix<Form>, w: &Matrix<RatFunc>, p: usize) -> Result<bool, Error> {
    if w.cols() == 0 {
        return Ok(true);
    }
    let w_forms = ratfunc_matrix_to_forms(w, Some(p));
    let product = omega.mul(&w_forms)?;
    Ok(product.map(|f| f.base_type_part()).is_zero())
}

struct QuotientData {
    restricts: bool,
    iso: bool,
}

/// Conditions (ii) and (iii) of the witness criterion for one comparison:
/// the comparison map carries `A^{p-1}` into `B^p` and induces an
/// isomorphism on the quotients, over the ring with simplex variables
/// adjoined.
fn quotient_conditions(
    cover: &Cover,
    t_mat: &Matrix<RatFunc>,
    pair: &WitnessPair,
    face: &Tuple,
    tuple: &Tuple,
    i: usize,
) -> Result<QuotientData, Error> {
    let sub = cover.restriction_between(face, tuple)?;
    let p = tuple.degree();
    // restrict A-witness to this tuple's chart, pull the B-witness back
    // along the simplex coface
    let w_a = pair.a_incl.try_map(|r| sub.apply(r))?;
    let w_b_forms = ratfunc_matrix_to_forms(&pair.b_incl, Some(p));
    let w_b_pulled_forms = matrix_pullback_coface(&w_b_forms, i)?;
    let w_b = w_b_pulled_forms.try_map(|f| {
        f.as_ratfunc()
            .cloned()
            .or_else(|| if f.is_zero() { Some(RatFunc::zero()) } else { None })
            .ok_or_else(|| Error::WitnessShapeMismatch("witness entries must be functions".into()))
    })?;
    let ta = t_mat.mul(&w_a)?;
    let restricts = columns_in_span(&w_b, &ta)?;
    // quotient iso: rank [T | W_B] = r_p and = r_{p-1} + rk W_B - rk W_A
    let r_p = t_mat.rows();
    let r_prev = t_mat.cols();
    let aug = t_mat.hcat(&w_b)?;
    let rk_aug = aug.rank()?;
    let iso = rk_aug == r_p
        && rk_aug + w_a.rank()? == r_prev + w_b.rank()?;
    Ok(QuotientData { restricts, iso })
}

/// Admissibility of a simplicial connection with respect to witness
/// sub-bundles: (i) each witness is preserved and killed by the base-type
/// part of the curvature, (ii) comparison maps carry `A` into `B`,
/// (iii) the induced quotient maps are isomorphisms.
pub fn check_admissible(
    conn: &SimplicialConnection,
    witness: &AdmissibilityWitness,
    cx: &ComplexOnNerve,
    cover: &Cover,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    let curv = conn.curvature()?;
    let level = &cx.levels[conn.star];
    for p in 1..=cover.depth {
        for t in cover.tuples(p) {
            for i in 0..=p {
                let face = t.face(i)?;
                let pair = match witness.pairs.get(&(t.clone(), i)) {
                    Some(pair) => pair,
                    None => {
                        report.violation(alloc::format!(
                            "missing witness pair at {} face {i}",
                            cover.render_tuple(&t)
                        ));
                        continue;
                    }
                };
                // (i) flatness of both witnesses under their own connections
                let a_face = conn.at(&face)?;
                let a_here = conn.at(&t)?;
                let k_face = &curv[&face];
                let k_here = &curv[&t];
                if !preserves_subbundle(a_face, &pair.a_incl, face.degree())? {
                    report.violation(alloc::format!(
                        "witness A at {} face {i}: not preserved by the connection",
                        cover.render_tuple(&t)
                    ));
                }
                if !preserves_subbundle(a_here, &pair.b_incl, p)? {
                    report.violation(alloc::format!(
                        "witness B at {} face {i}: not preserved by the connection",
                        cover.render_tuple(&t)
                    ));
                }
                if !kills_witness(k_face, &pair.a_incl, face.degree())? {
                    report.violation(alloc::format!(
                        "witness A at {} face {i}: curvature does not vanish on it",
                        cover.render_tuple(&t)
                    ));
                }
                if !kills_witness(k_here, &pair.b_incl, p)? {
                    report.violation(alloc::format!(
                        "witness B at {} face {i}: curvature does not vanish on it",
                        cover.render_tuple(&t)
                    ));
                }
                // (ii) + (iii)
                let t_mat = level.transition(&t, i)?;
                let q = quotient_conditions(cover, t_mat, pair, &face, &t, i)?;
                if !q.restricts {
                    report.violation(alloc::format!(
                        "comparison at {} face {i} does not carry witness A into witness B",
                        cover.render_tuple(&t)
                    ));
                }
                if !q.iso {
                    report.violation(alloc::format!(
                        "comparison at {} face {i} does not induce a quotient isomorphism",
                        cover.render_tuple(&t)
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Compatibility of two simplicial connections: their difference must be an
/// endomorphism-valued simplicial 1-form (gluing through the comparison
/// maps) that respects the witness sub-bundles and induces quotient
/// isomorphisms. The strict pointwise-kernel condition is reported as a
/// note, not a failure: it provably cannot hold across rank-jumping
/// comparisons.
pub fn check_compatible_difference(
    conn_a: &SimplicialConnection,
    conn_b: &SimplicialConnection,
    witness: &AdmissibilityWitness,
    cx: &ComplexOnNerve,
    cover: &Cover,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    if conn_a.star != conn_b.star {
        return Err(Error::DegreeMismatch("connections on different levels".into()));
    }
    let level = &cx.levels[conn_a.star];
    // η_p = A'_p - A_p per tuple
    let mut eta: BTreeMap<Tuple, Matrix<Form>> = BTreeMap::new();
    for (t, a) in &conn_a.mats {
        let b = conn_b.at(t)?;
        eta.insert(t.clone(), b.sub(a)?);
    }
    let mut strict_kernel_ok = true;
    for p in 1..=cover.depth {
        for t in cover.tuples(p) {
            for i in 0..=p {
                let (face, sub) = cover.nerve_face(&t, i)?;
                // endomorphism-valued gluing through the comparison map
                let comparison = level.comparison_map(&t, i)?;
                let eta_face = matrix_pullback_nerve(&eta[&face], &sub)?;
                let eta_here = matrix_pullback_coface(&eta[&t], i)?;
                let lhs = comparison.mul(&eta_face)?;
                let rhs = eta_here.mul(&comparison)?;
                if lhs != rhs {
                    report.violation(alloc::format!(
                        "difference does not glue at {} face {i}",
                        cover.render_tuple(&t)
                    ));
                }
                let pair = match witness.pairs.get(&(t.clone(), i)) {
                    Some(pair) => pair,
                    None => {
                        report.violation(alloc::format!(
                            "missing witness pair at {} face {i}",
                            cover.render_tuple(&t)
                        ));
                        continue;
                    }
                };
                // witness invariance: η restricts to an endomorphism of
                // each witness sub-bundle
                let inv_a = eta_subbundle_invariant(&eta[&face], &pair.a_incl, face.degree())?;
                let inv_b = eta_subbundle_invariant(&eta[&t], &pair.b_incl, p)?;
                if !inv_a || !inv_b {
                    report.violation(alloc::format!(
                        "difference does not preserve the witness at {} face {i}",
                        cover.render_tuple(&t)
                    ));
                }
                let t_mat = level.transition(&t, i)?;
                let q = quotient_conditions(cover, t_mat, pair, &face, &t, i)?;
                if !q.restricts || !q.iso {
                    report.violation(alloc::format!(
                        "witness quotient conditions fail at {} face {i}",
                        cover.render_tuple(&t)
                    ));
                }
                if !kills_witness(&eta[&t], &pair.b_incl, p)?
                    || !kills_witness(&eta[&face], &pair.a_incl, face.degree())?
                {
                    strict_kernel_ok = false;
                }
            }
        }
    }
    if !strict_kernel_ok {
        report.note(
            "difference is nonzero on some witness sub-bundle (pointwise-kernel condition not met)"
                .into(),
        );
    }
    Ok(report)
}

fn eta_subbundle_invariant(
    eta: &Matrix<Form>,
    w: &Matrix<RatFunc>,
    p: usize,
) -> Result<bool, Error> {
    if w.cols() == 0 {
        return Ok(true);
    }
    let w_forms = ratfunc_matrix_to_forms(w, Some(p));
    let m = eta.mul(&w_forms)?;
    for (_, coeffs) in generator_coefficients(&m) {
        if !columns_in_span(w, &coeffs)? {
            return Ok(false);
        }
    }
    Ok(true)
}
