//! Fibre integration over the simplex into the Čech total complex,
//! invariant polynomials of curvature, and assembly of Chern-class
//! representatives.
//!
//! Fibre integration takes the type-(r-p, p) part of the level-p form,
//! commutes the `dt` block to the front (a Koszul sign `(-1)^{(r-p)p}`),
//! and integrates the simplex monomials exactly. With the orientation
//! `∫_{Δ^1} dt_1 = +1` this makes integration a chain map onto the total
//! complex with differential `D = δ + (-1)^p d`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{Matrix, RatFunc, Rational};
use crate::bundles::ComplexOnNerve;
use crate::connections::SimplicialConnection;
use crate::cover::{Cover, Tuple};
use crate::error::Error;
use crate::forms::{Form, SimplicialFormFamily};
use crate::report::CheckReport;
use crate::simplex::simplex_monomial_integral;

/// A cochain in the Čech total complex: for each `p ≤ r` and each
/// (p+1)-tuple, a base-only form of degree `r - p` on the tuple's chart.
/// Missing components are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CechCochain {
    pub degree: usize,
    pub components: BTreeMap<(usize, Tuple), Form>,
}

impl CechCochain {
    pub fn new(degree: usize) -> Self {
        CechCochain {
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn component(&self, p: usize, t: &Tuple) -> Form {
        self.components
            .get(&(p, t.clone()))
            .cloned()
            .unwrap_or_else(Form::zero)
    }

    pub fn set(&mut self, p: usize, t: Tuple, f: Form) {
        if f.is_zero() {
            self.components.remove(&(p, t));
        } else {
            self.components.insert((p, t), f);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Form::is_zero)
    }
}

/// Dupont fibre integration of a gluing-compatible family into the Čech
/// total complex.
pub fn fibre_integrate(
    family: &SimplicialFormFamily,
    cover: &Cover,
) -> Result<CechCochain, Error> {
    let gluing = family.check_gluing(cover)?;
    if !gluing.pass() {
        return Err(Error::GluingViolation(
            gluing.first_violation().unwrap_or("gluing fails").into(),
        ));
    }
    let r = family.degree;
    let mut out = CechCochain::new(r);
    for p in 0..=r.min(cover.depth) {
        for t in cover.tuples(p) {
            let omega = family.component(&t)?;
            let part = omega.type_part(r - p, p);
            let mut acc = Form::zero();
            for ((base, simp), coeff) in part.terms() {
                debug_assert_eq!(simp.len(), p);
                // the only increasing p-word in t_1..t_p is (1,…,p)
                let mut total = RatFunc::zero();
                for (texps, zcoeff) in coeff.split_t_monomials() {
                    let mut exps = alloc::vec![0u32; p + 1];
                    for (k, e) in texps {
                        exps[k as usize] = e;
                    }
                    let weight = simplex_monomial_integral(&exps);
                    total = total.add(&zcoeff.scale(&weight))?;
                }
                if ((r - p) * p) % 2 == 1 {
                    total = total.neg();
                }
                // base-only output: leave the simplicial degree unpinned so
                // the cochain component can be reused at any level
                let term = Form::term(
                    None,
                    omega.chart().cloned(),
                    total,
                    base.clone(),
                    Vec::new(),
                )?;
                acc = acc.add(&term)?;
            }
            out.set(p, t, acc);
        }
    }
    Ok(out)
}

/// Total differential `D = δ + (-1)^p d` on the Čech total complex, with
/// the full alternating-sum Čech differential `δ`.
pub fn total_differential(c: &CechCochain, cover: &Cover) -> Result<CechCochain, Error> {
    let r = c.degree;
    let mut out = CechCochain::new(r + 1);
    for p in 0..=(r + 1) {
        for t in cover.tuples(p) {
            let mut acc = Form::zero();
            // Čech part from the (p-1)-components
            if p >= 1 {
                for i in 0..=p {
                    let (face, sub) = cover.nerve_face(&t, i)?;
                    let piece = c.component(p - 1, &face).pullback_nerve(&sub)?;
                    acc = if i % 2 == 0 {
                        acc.add(&piece)?
                    } else {
                        acc.sub(&piece)?
                    };
                }
            }
            // de Rham part of the p-component, with sign (-1)^p
            if p <= r {
                let d = c.component(p, &t).differential();
                acc = if p % 2 == 0 { acc.add(&d)? } else { acc.sub(&d)? };
            }
            out.set(p, t, acc);
        }
    }
    Ok(out)
}

/// Is the cochain closed under the total differential?
pub fn check_cocycle(c: &CechCochain, cover: &Cover) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    let d = total_differential(c, cover)?;
    for ((p, t), f) in &d.components {
        if !f.is_zero() {
            report.violation(alloc::format!(
                "total differential is nonzero at p={p}, tuple {}",
                cover.render_tuple(t)
            ));
        }
    }
    Ok(report)
}

/// Trace of the k-fold wedge power of an endomorphism-valued curvature
/// family; entries have even degree, so the trace is well defined.
pub fn invariant_trace_power(
    curv: &BTreeMap<Tuple, Matrix<Form>>,
    k: usize,
) -> Result<SimplicialFormFamily, Error> {
    let mut fam = SimplicialFormFamily::new(2 * k);
    for (t, m) in curv {
        let mut power = m.clone();
        for _ in 1..k {
            power = power.mul(m)?;
        }
        let mut tr = Form::zero();
        for d in 0..power.rows().min(power.cols()) {
            tr = tr.add(power.at(d, d))?;
        }
        if m.rows() == 0 {
            tr = Form::zero();
        }
        fam.components
            .insert(t.clone(), tr.with_degree(t.degree()));
    }
    Ok(fam)
}

/// Čech representative of the degree-2k curvature-trace class of a complex
/// with simplicial connections: `Σ_j (-1)^j tr(κ(∇^j)^∧k)`, fibre
/// integrated. Unnormalized (no 2πi factors).
pub fn chern_representative(
    cx: &ComplexOnNerve,
    conns: &[SimplicialConnection],
    k: usize,
    cover: &Cover,
) -> Result<CechCochain, Error> {
    if conns.len() != cx.stars() {
        return Err(Error::ShapeMismatch(
            "one simplicial connection per internal degree is required".into(),
        ));
    }
    let mut total = SimplicialFormFamily::new(2 * k);
    for t in (0..=cover.depth).flat_map(|p| cover.tuples(p)) {
        total
            .components
            .insert(t.clone(), Form::zero().with_degree(t.degree()));
    }
    for conn in conns {
        let curv = conn.curvature()?;
        let tr = invariant_trace_power(&curv, k)?;
        let signed = if conn.star % 2 == 1 { tr.scale_int(-1) } else { tr };
        total = total.add(&signed)?;
    }
    fibre_integrate(&total, cover)
}

/// The Whitney/elementary-form extension: a right inverse to fibre
/// integration, carrying Čech data to a gluing-compatible simplicial
/// family. Used to generate gluing-compatible families (for example in the
/// chain-map tests for fibre integration).
pub fn cech_to_simplicial(
    c: &CechCochain,
    cover: &Cover,
) -> Result<SimplicialFormFamily, Error> {
    let r = c.degree;
    let mut fam = SimplicialFormFamily::new(r);
    for p in 0..=cover.depth {
        for t in cover.tuples(p) {
            let mut acc = Form::zero().with_degree(p);
            for q in 0..=r.min(p) {
                // strictly increasing position maps [q] -> [p]
                for phi in increasing_maps(q, p) {
                    let sub_tuple = Tuple(phi.iter().map(|&j| t.0[j]).collect());
                    let comp = c.component(q, &sub_tuple);
                    if comp.is_zero() {
                        continue;
                    }
                    let sub = cover.restriction_between(&sub_tuple, &t)?;
                    let pulled = comp.pullback_nerve(&sub)?;
                    let w = whitney_form(&phi, p)?;
                    // simplex part first, then base part
                    acc = acc.add(&w.wedge(&pulled)?)?;
                }
            }
            fam.components.insert(t, acc);
        }
    }
    Ok(fam)
}

/// The elementary form `q! Σ_j (-1)^j t_{φ(j)} dt_{φ(0)} ∧ … ĵ … ∧ dt_{φ(q)}`
/// on `Δ^p`, expressed in the reduced coordinates (`t_0`, `dt_0`
/// eliminated).
fn whitney_form(phi: &[usize], p: usize) -> Result<Form, Error> {
    let q = phi.len() - 1;
    let t_of = |idx: usize| -> Form {
        if idx == 0 {
            // t_0 = 1 - Σ t_k
            let mut acc = Form::one();
            for k in 1..=p {
                acc = acc
                    .sub(&Form::from_ratfunc(RatFunc::t(k as u8)))
                    .expect("chart-free");
            }
            acc.with_degree(p)
        } else {
            Form::from_ratfunc(RatFunc::t(idx as u8)).with_degree(p)
        }
    };
    let dt_of = |idx: usize| -> Form {
        if idx == 0 {
            let mut acc = Form::zero();
            for k in 1..=p {
                acc = acc.sub(&Form::dt(k as u8)).expect("chart-free");
            }
            acc.with_degree(p)
        } else {
            Form::dt(idx as u8).with_degree(p)
        }
    };
    let mut acc = Form::zero().with_degree(p);
    for j in 0..=q {
        let mut term = t_of(phi[j]);
        for (m, &idx) in phi.iter().enumerate() {
            if m == j {
                continue;
            }
            term = term.wedge(&dt_of(idx))?;
        }
        acc = if j % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    let factorial = Rational::factorial(q as u32);
    acc.scale(&RatFunc::constant(factorial))
}

fn increasing_maps(q: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..=q).collect();
    if q > p {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next strictly increasing sequence in 0..=p
        let mut k = q + 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= p - (q - k) {
                for m in k + 1..=q {
                    cur[m] = cur[m - 1] + 1;
                }
                break;
            }
        }
    }
}
