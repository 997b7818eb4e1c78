//! Vector bundles and complexes of bundles on the nerve: transition data
//! along coface maps, comparison maps, cartesian checks, elementary
//! sequences, and verification of the splitting/cocycle structure that
//! makes a complex Green.
//!
//! Bundles are frames and matrices, not abstract sheaves: every check is an
//! exact matrix identity or an exact rank computation over the fraction
//! field of the chart ring. Ranks are stored per tuple; they are constant
//! across tuples of one degree for pullbacks of global bundles but genuinely
//! jump for resolutions of torsion sheaves.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::algebra::{Matrix, RatFunc};
use crate::cover::{Cover, Tuple};
use crate::error::Error;
use crate::forms::{ratfunc_matrix_to_forms, Form};
use crate::report::CheckReport;

/// A locally free sheaf on the nerve, in chosen frames: a rank for every
/// tuple and, for every coface, the matrix of `𝓔(f_p^i)` over the finer
/// tuple's chart.
#[derive(Clone, Debug, Default)]
pub struct BundleOnNerve {
    pub ranks: BTreeMap<Tuple, usize>,
    /// Keyed by (tuple of degree p, coface index i): the map from the
    /// bundle on the i-th face, restricted to this tuple, into the bundle
    /// here. Shape rank(tuple) × rank(face).
    pub transitions: BTreeMap<(Tuple, usize), Matrix<RatFunc>>,
}

impl BundleOnNerve {
    pub fn rank(&self, t: &Tuple) -> Result<usize, Error> {
        self.ranks
            .get(t)
            .copied()
            .ok_or_else(|| Error::TupleNotInNerve(t.to_string()))
    }

    pub fn transition(&self, t: &Tuple, i: usize) -> Result<&Matrix<RatFunc>, Error> {
        self.transitions
            .get(&(t.clone(), i))
            .ok_or_else(|| Error::MissingTransition(alloc::format!("{t} face {i}")))
    }

    /// The `i`-th comparison map at `t`: the transition matrix reinterpreted
    /// over the product with `Δ^{p-1}`, ready to compose with simplex-
    /// dependent data.
    pub fn comparison_map(&self, t: &Tuple, i: usize) -> Result<Matrix<Form>, Error> {
        let m = self.transition(t, i)?;
        let p = t.degree();
        Ok(ratfunc_matrix_to_forms(m, Some(p - 1)))
    }

    /// Functoriality on generators: for `i < j` the two coface paths from a
    /// double face into `t` must give equal composites.
    pub fn check_functorial(&self, cover: &Cover) -> Result<CheckReport, Error> {
        let mut report = CheckReport::new();
        for p in 2..=cover.depth {
            for t in cover.tuples(p) {
                for j in 1..=p {
                    for i in 0..j {
                        // 𝓔(f_p^j ∘ f_{p-1}^i) = 𝓔(f_p^i ∘ f_{p-1}^{j-1})
                        let via_j = self.composite_two(cover, &t, j, i)?;
                        let via_i = self.composite_two(cover, &t, i, j - 1)?;
                        if via_j != via_i {
                            report.violation(alloc::format!(
                                "functoriality fails at {} with faces ({i},{j})",
                                cover.render_tuple(&t)
                            ));
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// `𝓔(f^outer) ∘ restrict(𝓔(f^inner))` for the face pair.
    fn composite_two(
        &self,
        cover: &Cover,
        t: &Tuple,
        outer: usize,
        inner: usize,
    ) -> Result<Matrix<RatFunc>, Error> {
        let (face, sub) = cover.nerve_face(t, outer)?;
        let t_outer = self.transition(t, outer)?;
        let t_inner = self.transition(&face, inner)?;
        let lifted = t_inner.try_map(|r| sub.apply(r))?;
        t_outer.mul(&lifted)
    }
}

/// Pullback of a global vector bundle to the nerve: identity transitions in
/// matching frames, or frame-change matrices when per-support frames are
/// supplied.
pub fn pullback_global(
    cover: &Cover,
    rank: usize,
    frames: &BTreeMap<usize, Matrix<RatFunc>>,
) -> Result<BundleOnNerve, Error> {
    let mut b = BundleOnNerve::default();
    for p in 0..=cover.depth {
        for t in cover.tuples(p) {
            b.ranks.insert(t.clone(), rank);
            if p == 0 {
                continue;
            }
            for i in 0..=p {
                let (face, sub) = cover.nerve_face(&t, i)?;
                let here = cover.support_of(&t)?;
                let there = cover.support_of(&face)?;
                let m = match (frames.get(&here), frames.get(&there)) {
                    (None, None) => Matrix::identity(rank),
                    (ft, ff) => {
                        let ft = ft.cloned().unwrap_or_else(|| Matrix::identity(rank));
                        let ff = ff.cloned().unwrap_or_else(|| Matrix::identity(rank));
                        let ff_here = ff.try_map(|r| sub.apply(r))?;
                        ft.inverse()?.mul(&ff_here)?
                    }
                };
                b.transitions.insert((t.clone(), i), m);
            }
        }
    }
    Ok(b)
}

/// A bounded complex `0 → 𝓔^{•,n} → … → 𝓔^{•,0}` of bundles on the nerve.
/// `levels[s]` is the bundle in internal degree `s`; `diffs[t][s]` is the
/// differential from level `s+1` to level `s` over the tuple `t`.
#[derive(Clone, Debug)]
pub struct ComplexOnNerve {
    pub levels: Vec<BundleOnNerve>,
    pub diffs: BTreeMap<Tuple, Vec<Matrix<RatFunc>>>,
}

impl ComplexOnNerve {
    pub fn stars(&self) -> usize {
        self.levels.len()
    }

    /// A single bundle, as the complex concentrated in degree zero.
    pub fn from_bundle(b: BundleOnNerve) -> Self {
        let diffs = b.ranks.keys().map(|t| (t.clone(), Vec::new())).collect();
        ComplexOnNerve {
            levels: alloc::vec![b],
            diffs,
        }
    }

    pub fn ranks_at(&self, t: &Tuple) -> Result<Vec<usize>, Error> {
        self.levels.iter().map(|l| l.rank(t)).collect()
    }

    pub fn diff(&self, t: &Tuple, s: usize) -> Result<&Matrix<RatFunc>, Error> {
        self.diffs
            .get(t)
            .and_then(|v| v.get(s))
            .ok_or_else(|| Error::MissingComponent(alloc::format!("differential {s} at {t}")))
    }

    /// Shape and d² checks plus the chain-map property of all transitions.
    pub fn validate(&self, cover: &Cover) -> Result<CheckReport, Error> {
        let mut report = CheckReport::new();
        let n = self.stars();
        for p in 0..=cover.depth {
            for t in cover.tuples(p) {
                let ranks = self.ranks_at(&t)?;
                let ds = self
                    .diffs
                    .get(&t)
                    .ok_or_else(|| Error::MissingComponent(alloc::format!("diffs at {t}")))?;
                if ds.len() + 1 != n {
                    report.violation(alloc::format!(
                        "expected {} differentials at {}, found {}",
                        n - 1,
                        cover.render_tuple(&t),
                        ds.len()
                    ));
                    continue;
                }
                for s in 0..n - 1 {
                    if ds[s].rows() != ranks[s] || ds[s].cols() != ranks[s + 1] {
                        report.violation(alloc::format!(
                            "differential {s} at {} has shape {}x{}, expected {}x{}",
                            cover.render_tuple(&t),
                            ds[s].rows(),
                            ds[s].cols(),
                            ranks[s],
                            ranks[s + 1]
                        ));
                    }
                }
                for s in 0..n.saturating_sub(2) {
                    if !ds[s].mul(&ds[s + 1])?.is_zero() {
                        report.violation(alloc::format!(
                            "d∘d ≠ 0 at {} between levels {} and {}",
                            cover.render_tuple(&t),
                            s + 2,
                            s
                        ));
                    }
                }
                if p == 0 {
                    continue;
                }
                for i in 0..=p {
                    let (face, sub) = cover.nerve_face(&t, i)?;
                    for s in 0..n - 1 {
                        let t_hi = self.levels[s + 1].transition(&t, i)?;
                        let t_lo = self.levels[s].transition(&t, i)?;
                        let d_face = self.diff(&face, s)?.try_map(|r| sub.apply(r))?;
                        let lhs = ds[s].mul(t_hi)?;
                        let rhs = t_lo.mul(&d_face)?;
                        if lhs != rhs {
                            report.violation(alloc::format!(
                                "transition at {} face {i} is not a chain map at level {s}",
                                cover.render_tuple(&t)
                            ));
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Cartesian check: every transition is a quasi-isomorphism over the
    /// fraction field (mapping-cone acyclicity by exact rank computation).
    /// The strong variant asks for genuine isomorphisms on the chart.
    pub fn check_cartesian(&self, cover: &Cover, strong: bool) -> Result<CheckReport, Error> {
        let mut report = CheckReport::new();
        let n = self.stars();
        for p in 1..=cover.depth {
            for t in cover.tuples(p) {
                for i in 0..=p {
                    let (face, sub) = cover.nerve_face(&t, i)?;
                    let here: Vec<usize> = self.ranks_at(&t)?;
                    let there: Vec<usize> = self.ranks_at(&face)?;
                    if strong {
                        for s in 0..n {
                            let tr = self.levels[s].transition(&t, i)?;
                            let ok = tr.rows() == here[s]
                                && tr.cols() == there[s]
                                && tr.is_square()
                                && (tr.rows() == 0 || tr.inverse().is_ok());
                            if !ok {
                                report.violation(alloc::format!(
                                    "transition at {} face {i} level {s} is not an isomorphism",
                                    cover.render_tuple(&t)
                                ));
                            }
                        }
                        continue;
                    }
                    // mapping cone of (face complex restricted) → (complex here);
                    // the transition is a quasi-isomorphism iff the cone is exact
                    let mut cone_dims: Vec<usize> = Vec::with_capacity(n + 1);
                    for s in 0..=n {
                        let d_here = if s < n { here[s] } else { 0 };
                        let c_prev = if s >= 1 { there[s - 1] } else { 0 };
                        cone_dims.push(d_here + c_prev);
                    }
                    let mut cone_ranks: Vec<usize> = Vec::with_capacity(n);
                    for s in 0..n {
                        // M_{s+1} = D_{s+1} ⊕ C_s  →  M_s = D_s ⊕ C_{s-1}
                        let dd = if s + 1 < n {
                            self.diff(&t, s)?.clone()
                        } else {
                            Matrix::zeros(here[s], 0)
                        };
                        let f = self.levels[s].transition(&t, i)?.clone();
                        let top = dd.hcat(&f)?;
                        let c_lo = if s >= 1 { there[s - 1] } else { 0 };
                        let bottom_left = Matrix::zeros(c_lo, dd.cols());
                        let dc = if s >= 1 {
                            self.diff(&face, s - 1)?.try_map(|r| sub.apply(r))?.neg()
                        } else {
                            Matrix::zeros(0, there[s])
                        };
                        let bottom = bottom_left.hcat(&dc)?;
                        cone_ranks.push(top.vcat(&bottom)?.rank()?);
                    }
                    let mut exact = true;
                    for s in 0..=n {
                        let below = if s >= 1 { cone_ranks[s - 1] } else { 0 };
                        let above = if s < n { cone_ranks[s] } else { 0 };
                        if below + above != cone_dims[s] {
                            exact = false;
                        }
                    }
                    if !exact {
                        report.violation(alloc::format!(
                            "transition at {} face {i} is not a quasi-isomorphism",
                            cover.render_tuple(&t)
                        ));
                    }
                }
            }
        }
        Ok(report)
    }
}

/// One elementary summand `(0 → N → N → 0)[low]`: `rank` copies of the
/// generator module of `tag_open` in internal degree `tag_star`, placed in
/// levels `low` and `low + 1` with the identity differential between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementarySummand {
    pub rank: usize,
    pub low: usize,
    pub tag_open: u8,
    pub tag_star: usize,
}

/// A decomposition of a complex as a direct sum of shifted two-term
/// identity complexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ElementaryWitness {
    pub summands: Vec<ElementarySummand>,
}

impl ElementaryWitness {
    pub fn rank_at(&self, star: usize) -> usize {
        self.summands
            .iter()
            .filter(|s| s.low == star || s.low + 1 == star)
            .map(|s| s.rank)
            .sum()
    }

    /// Differential of the witness complex from level `star + 1` to `star`:
    /// identity blocks exactly on summands spanning these two levels.
    pub fn diff_at(&self, star: usize) -> Matrix<RatFunc> {
        let rows = self.rank_at(star);
        let cols = self.rank_at(star + 1);
        let mut m = Matrix::zeros(rows, cols);
        let mut r0 = 0usize;
        for (idx, s_row) in self.summands.iter().enumerate() {
            if !(s_row.low == star || s_row.low + 1 == star) {
                continue;
            }
            if s_row.low == star {
                // also occupies star + 1: identity block between its slots
                let mut c0 = 0usize;
                for (jdx, s_col) in self.summands.iter().enumerate() {
                    if !(s_col.low == star + 1 || s_col.low + 1 == star + 1) {
                        continue;
                    }
                    if idx == jdx {
                        for k in 0..s_row.rank {
                            m.set(r0 + k, c0 + k, RatFunc::one());
                        }
                        break;
                    }
                    c0 += s_col.rank;
                }
            }
            r0 += s_row.rank;
        }
        m
    }

    pub fn total_rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank).sum()
    }
}

/// Splitting datum for one nested pair `β ≤ α`: the elementary complement
/// and the chain isomorphism `𝓔_α → 𝓔_β|α ⊕ 𝓛_{α,β}` per internal degree.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub witness: ElementaryWitness,
    pub mats: Vec<Matrix<RatFunc>>,
}

/// Green structure: splittings for nested tuple pairs and cocycle
/// isomorphisms `𝓛_{α,γ} → 𝓛_{β,γ}|α ⊕ 𝓛_{α,β}` for nested triples.
#[derive(Clone, Debug, Default)]
pub struct GreenStructure {
    pub splittings: BTreeMap<(Tuple, Tuple), Splitting>,
    pub cocycles: BTreeMap<(Tuple, Tuple, Tuple), Vec<Matrix<RatFunc>>>,
}

impl GreenStructure {
    pub fn splitting(&self, alpha: &Tuple, beta: &Tuple) -> Result<&Splitting, Error> {
        self.splittings
            .get(&(alpha.clone(), beta.clone()))
            .ok_or_else(|| {
                Error::MissingGreenStructure(alloc::format!("splitting for {beta} ≤ {alpha}"))
            })
    }

    /// Inclusion matrix of the elementary complement `𝓛_{α,β} ↪ 𝓔_α` at
    /// internal degree `star`: the last columns of `S^{-1}`.
    pub fn complement_inclusion(
        &self,
        alpha: &Tuple,
        beta: &Tuple,
        star: usize,
        rank_beta: usize,
    ) -> Result<Matrix<RatFunc>, Error> {
        let sp = self.splitting(alpha, beta)?;
        let s = sp
            .mats
            .get(star)
            .ok_or_else(|| Error::MissingGreenStructure(alloc::format!("S at star {star}")))?;
        let l = sp.witness.rank_at(star);
        if s.rows() == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let sinv = s.inverse()?;
        Ok(sinv.submatrix(0, rank_beta, sinv.rows(), l))
    }
}

/// All distinct proper subtuple values of `t` (every way of deleting at
/// least one entry, deduplicated), sorted.
pub fn proper_subtuples(t: &Tuple) -> Vec<Tuple> {
    let n = t.0.len();
    let mut out: Vec<Tuple> = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let kept: Vec<u8> = (0..n)
            .filter(|&k| mask & (1 << k) != 0)
            .map(|k| t.0[k])
            .collect();
        let cand = Tuple(kept);
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out.sort();
    out
}

/// Verifies the Green conditions: (iv) the splittings are chain
/// isomorphisms onto `𝓔_β|α ⊕ 𝓛_{α,β}`, (v) the cocycle isomorphisms hold,
/// (vi) the comparison diagram commutes, and the derived coface property:
/// transitions are injective with elementary cokernel.
pub fn check_green(
    cx: &ComplexOnNerve,
    gs: &GreenStructure,
    cover: &Cover,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new();
    let n = cx.stars();
    for p in 0..=cover.depth {
        for alpha in cover.tuples(p) {
            let ranks_a = cx.ranks_at(&alpha)?;
            for beta in proper_subtuples(&alpha) {
                if !cover.contains(&beta) {
                    report.violation(alloc::format!(
                        "subtuple {} of {} is not in the nerve",
                        cover.render_tuple(&beta),
                        cover.render_tuple(&alpha)
                    ));
                    continue;
                }
                let sp = match gs.splittings.get(&(alpha.clone(), beta.clone())) {
                    Some(sp) => sp,
                    None => {
                        report.violation(alloc::format!(
                            "missing splitting for {} ≤ {}",
                            cover.render_tuple(&beta),
                            cover.render_tuple(&alpha)
                        ));
                        continue;
                    }
                };
                let sub = cover.restriction_between(&beta, &alpha)?;
                let ranks_b = cx.ranks_at(&beta)?;
                // (iv) shape, invertibility, chain-map property
                let mut shapes_ok = sp.mats.len() == n;
                for s in 0..n.min(sp.mats.len()) {
                    let m = &sp.mats[s];
                    let want_rows = ranks_b[s] + sp.witness.rank_at(s);
                    if m.rows() != want_rows || m.cols() != ranks_a[s] || !m.is_square() {
                        shapes_ok = false;
                    }
                }
                if !shapes_ok {
                    report.violation(alloc::format!(
                        "splitting for {} ≤ {} has wrong shape (rank bookkeeping)",
                        cover.render_tuple(&beta),
                        cover.render_tuple(&alpha)
                    ));
                    continue;
                }
                let mut invertible = true;
                for s in 0..n {
                    if sp.mats[s].rows() > 0 && sp.mats[s].inverse().is_err() {
                        invertible = false;
                    }
                }
                if !invertible {
                    report.violation(alloc::format!(
                        "splitting for {} ≤ {} is not invertible on the chart",
                        cover.render_tuple(&beta),
                        cover.render_tuple(&alpha)
                    ));
                    continue;
                }
                for s in 0..n.saturating_sub(1) {
                    let d_alpha = cx.diff(&alpha, s)?;
                    let d_beta = cx.diff(&beta, s)?.try_map(|r| sub.apply(r))?;
                    let d_target = Matrix::block_diag(&[&d_beta, &sp.witness.diff_at(s)]);
                    let lhs = sp.mats[s].mul(d_alpha)?;
                    let rhs = d_target.mul(&sp.mats[s + 1])?;
                    if lhs != rhs {
                        report.violation(alloc::format!(
                            "splitting for {} ≤ {} is not a chain map at level {s}",
                            cover.render_tuple(&beta),
                            cover.render_tuple(&alpha)
                        ));
                    }
                }
            }
            // derived coface property (injective with elementary cokernel):
            // S_{α,∂_i α} ∘ T_i = [U; W] with U invertible
            if p >= 1 {
                for i in 0..=p {
                    let face = alpha.face(i)?;
                    let sp = match gs.splittings.get(&(alpha.clone(), face.clone())) {
                        Some(sp) => sp,
                        None => continue, // already reported above
                    };
                    let ranks_f = cx.ranks_at(&face)?;
                    for s in 0..n {
                        let t_mat = cx.levels[s].transition(&alpha, i)?;
                        let m = sp.mats[s].mul(t_mat)?;
                        let u = m.submatrix(0, 0, ranks_f[s], m.cols());
                        if !u.is_square() || (u.rows() > 0 && u.inverse().is_err()) {
                            report.violation(alloc::format!(
                                "coface at {} face {i} level {s}: not injective with elementary cokernel",
                                cover.render_tuple(&alpha)
                            ));
                        }
                    }
                }
            }
            // (v) and (vi) over strict chains γ < β < α
            for beta in proper_subtuples(&alpha) {
                if !cover.contains(&beta) {
                    continue;
                }
                for gamma in proper_subtuples(&beta) {
                    if !cover.contains(&gamma) {
                        continue;
                    }
                    check_green_chain(cx, gs, cover, &alpha, &beta, &gamma, &mut report)?;
                }
            }
        }
    }
    Ok(report)
}

/// The projective-line example data: the two-open cover, the length-two
/// Green complex resolving the skyscraper at the origin, its splitting
/// structure, trivial local connections, and the twisting data. Used
/// across the crate's tests.
#[cfg(test)]
pub(crate) mod testdata {
    use super::*;
    use crate::connections::LocalConnection;
    use crate::cover::testcover::p1_cover;
    use crate::cover::Cover;
    use crate::forms::Form;
    use alloc::vec;

    pub struct P1 {
        pub cover: Cover,
        pub complex: ComplexOnNerve,
        pub green: GreenStructure,
        pub locals: BTreeMap<u8, LocalConnection>,
    }

    fn z_mat(cover: &Cover, support: usize) -> Matrix<RatFunc> {
        let chart = &cover.supports[support].chart;
        Matrix::from_rows(vec![vec![RatFunc::coord(chart, 0)]]).unwrap()
    }

    pub fn p1_data() -> P1 {
        let cover = p1_cover();
        // ranks: U1-supported tuples carry the rank-1 resolution 𝒪 --z--> 𝒪,
        // U2 carries zero; both internal degrees look the same.
        let mut level0 = BundleOnNerve::default();
        let mut level1 = BundleOnNerve::default();
        let mut diffs: BTreeMap<Tuple, Vec<Matrix<RatFunc>>> = BTreeMap::new();
        let rank_of = |t: &Tuple| -> usize {
            if t.support().contains(&0) {
                1
            } else {
                0
            }
        };
        for p in 0..=1 {
            for t in cover.tuples(p) {
                let r = rank_of(&t);
                level0.ranks.insert(t.clone(), r);
                level1.ranks.insert(t.clone(), r);
                let d = if r == 1 {
                    z_mat(&cover, cover.support_of(&t).unwrap())
                } else {
                    Matrix::zeros(0, 0)
                };
                diffs.insert(t.clone(), vec![d]);
            }
        }
        for t in cover.tuples(1) {
            for i in 0..=1usize {
                let face = t.face(i).unwrap();
                let m = Matrix::from_fn(rank_of(&t), rank_of(&face), |_, _| RatFunc::one());
                level0.transitions.insert((t.clone(), i), m.clone());
                level1.transitions.insert((t.clone(), i), m);
            }
        }
        let complex = ComplexOnNerve {
            levels: vec![level0, level1],
            diffs,
        };
        // splittings: identity against U1-faces; against the zero bundle on
        // U2 the whole fibre is the elementary complement, with S = (1, z·)
        let mut green = GreenStructure::default();
        for t in cover.tuples(1) {
            for beta in proper_subtuples(&t) {
                let r_alpha = rank_of(&t);
                let r_beta = rank_of(&beta);
                if r_alpha == r_beta {
                    let witness = ElementaryWitness::default();
                    let mats = vec![Matrix::identity(r_alpha), Matrix::identity(r_alpha)];
                    green
                        .splittings
                        .insert((t.clone(), beta.clone()), Splitting { witness, mats });
                } else {
                    // 𝓔_α ≅ 0 ⊕ 𝓛 with 𝓛 = (0 → 𝒪 → 𝒪 → 0) via (id, z·)
                    let witness = ElementaryWitness {
                        summands: vec![ElementarySummand {
                            rank: 1,
                            low: 0,
                            tag_open: 0,
                            tag_star: 0,
                        }],
                    };
                    let s0 = Matrix::identity(1);
                    let s1 = z_mat(&cover, cover.support_of(&t).unwrap());
                    green
                        .splittings
                        .insert((t.clone(), beta.clone()), Splitting { witness, mats: vec![s0, s1] });
                }
            }
        }
        // trivial local connections in the chosen frames
        let mut locals = BTreeMap::new();
        locals.insert(
            0u8,
            LocalConnection {
                mats: vec![
                    Matrix::from_rows(vec![vec![Form::zero()]]).unwrap(),
                    Matrix::from_rows(vec![vec![Form::zero()]]).unwrap(),
                ],
            },
        );
        locals.insert(
            1u8,
            LocalConnection {
                mats: vec![Matrix::zeros(0, 0), Matrix::zeros(0, 0)],
            },
        );
        P1 {
            cover,
            complex,
            green,
            locals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testdata::p1_data;
    use super::*;
    use crate::algebra::matrix_rank;
    use alloc::vec;

    #[test]
    fn p1_complex_validates() {
        let d = p1_data();
        assert!(d.complex.validate(&d.cover).unwrap().pass());
        assert!(d.complex.levels[0].check_functorial(&d.cover).unwrap().pass());
    }

    #[test]
    fn p1_green_check_passes() {
        let d = p1_data();
        let report = check_green(&d.complex, &d.green, &d.cover).unwrap();
        assert!(report.pass(), "{report}");
    }

    #[test]
    fn broken_splitting_is_caught() {
        let mut d = p1_data();
        // zero out the degree-1 part of the (U1,U2)/(U2) splitting: no
        // longer an isomorphism
        let key = (Tuple(vec![0, 1]), Tuple(vec![1]));
        let sp = d.green.splittings.get_mut(&key).unwrap();
        sp.mats[1] = Matrix::zeros(1, 1);
        let report = check_green(&d.complex, &d.green, &d.cover).unwrap();
        assert!(!report.pass());
    }

    #[test]
    fn p1_is_cartesian_not_strongly() {
        let d = p1_data();
        assert!(d.complex.check_cartesian(&d.cover, false).unwrap().pass());
        // the transition out of the zero bundle on U2 is not an isomorphism
        assert!(!d.complex.check_cartesian(&d.cover, true).unwrap().pass());
    }

    #[test]
    fn zero_map_between_nonzero_homology_fails_cartesian() {
        let mut d = p1_data();
        // replace the differential on (U1,U2) by zero: homology jumps and
        // the identity transition from U1 is no longer a quasi-isomorphism
        d.complex
            .diffs
            .insert(Tuple(vec![0, 1]), vec![Matrix::zeros(1, 1)]);
        assert!(!d.complex.check_cartesian(&d.cover, false).unwrap().pass());
    }

    #[test]
    fn global_pullback_is_strongly_cartesian() {
        let d = p1_data();
        let b = pullback_global(&d.cover, 2, &BTreeMap::new()).unwrap();
        for t in d.cover.tuples(1) {
            for i in 0..=1 {
                assert_eq!(*b.transition(&t, i).unwrap(), Matrix::identity(2));
            }
        }
        let cx = ComplexOnNerve::from_bundle(b);
        assert!(cx.check_cartesian(&d.cover, true).unwrap().pass());
        assert!(cx.check_cartesian(&d.cover, false).unwrap().pass());
    }

    #[test]
    fn framed_pullback_conjugates_transitions() {
        // a line bundle presented with frame z on the overlap: the
        // transition from U1 becomes multiplication by 1/z
        let d = p1_data();
        let overlap = d.cover.support_index(&Tuple(vec![0, 1]).support()).unwrap();
        let chart = &d.cover.supports[overlap].chart;
        let mut frames = BTreeMap::new();
        frames.insert(
            overlap,
            Matrix::from_rows(vec![vec![RatFunc::coord(chart, 0)]]).unwrap(),
        );
        let b = pullback_global(&d.cover, 1, &frames).unwrap();
        let t = b.transition(&Tuple(vec![0, 1]), 1).unwrap();
        let inv_z = RatFunc::one().div(&RatFunc::coord(chart, 0)).unwrap();
        assert_eq!(*t.at(0, 0), inv_z);
        // framed pullbacks stay strongly cartesian
        let cx = ComplexOnNerve::from_bundle(b);
        assert!(cx.check_cartesian(&d.cover, true).unwrap().pass());
    }

    #[test]
    fn comparison_map_examples() {
        let d = p1_data();
        // pullbacks of global bundles have identity comparison maps
        let b = pullback_global(&d.cover, 2, &BTreeMap::new()).unwrap();
        let m = b.comparison_map(&Tuple(vec![0, 1]), 1).unwrap();
        assert_eq!(m.rows(), 2);
        for r in 0..2 {
            for c in 0..2 {
                let expected = if r == c { Form::one() } else { Form::zero() };
                assert_eq!(*m.at(r, c), expected);
            }
        }
        // degree-1 piece of the worked example: identity from U1
        let m = d.complex.levels[1]
            .comparison_map(&Tuple(vec![0, 1]), 1)
            .unwrap();
        assert_eq!(*m.at(0, 0), Form::one());
        // degenerate rank-zero face gives a 1x0 matrix
        let m = d.complex.levels[1]
            .comparison_map(&Tuple(vec![0, 1]), 0)
            .unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 0));
        // a transition that was never declared is an error
        let empty = BundleOnNerve::default();
        assert!(matches!(
            empty.comparison_map(&Tuple(vec![0, 1]), 0),
            Err(Error::MissingTransition(_))
        ));
    }

    #[test]
    fn comparison_maps_of_green_complex_inject() {
        let d = p1_data();
        for t in d.cover.tuples(1) {
            for i in 0..=1 {
                for level in &d.complex.levels {
                    let m = level.transition(&t, i).unwrap();
                    assert_eq!(matrix_rank(m).unwrap(), m.cols(), "not injective");
                }
            }
        }
    }

    #[test]
    fn elementary_witness_diff_shapes() {
        let w = ElementaryWitness {
            summands: vec![
                ElementarySummand {
                    rank: 1,
                    low: 0,
                    tag_open: 0,
                    tag_star: 0,
                },
                ElementarySummand {
                    rank: 2,
                    low: 1,
                    tag_open: 1,
                    tag_star: 0,
                },
            ],
        };
        assert_eq!(w.rank_at(0), 1);
        assert_eq!(w.rank_at(1), 3);
        assert_eq!(w.rank_at(2), 2);
        let d0 = w.diff_at(0);
        assert_eq!((d0.rows(), d0.cols()), (1, 3));
        let d1 = w.diff_at(1);
        assert_eq!((d1.rows(), d1.cols()), (3, 2));
        // d ∘ d = 0
        assert!(d0.mul(&d1).unwrap().is_zero());
    }
}

fn check_green_chain(
    cx: &ComplexOnNerve,
    gs: &GreenStructure,
    cover: &Cover,
    alpha: &Tuple,
    beta: &Tuple,
    gamma: &Tuple,
    report: &mut CheckReport,
) -> Result<(), Error> {
    let n = cx.stars();
    let key = (alpha.clone(), beta.clone(), gamma.clone());
    let sp_ag = gs.splitting(alpha, gamma)?;
    let sp_ab = gs.splitting(alpha, beta)?;
    let sp_bg = gs.splitting(beta, gamma)?;
    let all_zero_width = (0..n).all(|s| {
        sp_ag.witness.rank_at(s) == 0
            && sp_ab.witness.rank_at(s) == 0
            && sp_bg.witness.rank_at(s) == 0
    });
    let forced: Vec<Matrix<RatFunc>>;
    let coc = match gs.cocycles.get(&key) {
        Some(c) => c,
        // the unique zero-size isomorphism needs no data
        None if all_zero_width => {
            forced = (0..n).map(|_| Matrix::zeros(0, 0)).collect();
            &forced
        }
        None => {
            report.violation(alloc::format!(
                "missing cocycle isomorphism for {} < {} < {}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
            return Ok(());
        }
    };
    let sub_ba = cover.restriction_between(beta, alpha)?;
    let ranks_b = cx.ranks_at(beta)?;
    let ranks_g = cx.ranks_at(gamma)?;
    // (v): C : 𝓛_{α,γ} → 𝓛_{β,γ}|α ⊕ 𝓛_{α,β} invertible chain map
    for s in 0..n {
        let want_rows = sp_bg.witness.rank_at(s) + sp_ab.witness.rank_at(s);
        let want_cols = sp_ag.witness.rank_at(s);
        let c = match coc.get(s) {
            Some(c) => c,
            None => {
                report.violation(alloc::format!(
                    "cocycle for {} < {} < {} missing level {s}",
                    cover.render_tuple(gamma),
                    cover.render_tuple(beta),
                    cover.render_tuple(alpha)
                ));
                return Ok(());
            }
        };
        if c.rows() != want_rows || c.cols() != want_cols || !c.is_square() {
            report.violation(alloc::format!(
                "cocycle for {} < {} < {} has wrong shape at level {s}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
            return Ok(());
        }
        if c.rows() > 0 && c.inverse().is_err() {
            report.violation(alloc::format!(
                "cocycle for {} < {} < {} is not invertible at level {s}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
        }
    }
    for s in 0..n.saturating_sub(1) {
        let d_src = sp_ag.witness.diff_at(s);
        let d_tgt = Matrix::block_diag(&[&sp_bg.witness.diff_at(s), &sp_ab.witness.diff_at(s)]);
        let lhs = coc[s].mul(&d_src)?;
        let rhs = d_tgt.mul(&coc[s + 1])?;
        if lhs != rhs {
            report.violation(alloc::format!(
                "cocycle for {} < {} < {} is not a chain map at level {s}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
        }
    }
    // (vi): with inc = S_{α,β}^{-1}[I;0] and pr = [0 I]S_{α,β}, the two
    // squares against the γ-decompositions commute.
    for s in 0..n {
        let s_ab = &sp_ab.mats[s];
        let s_ag = &sp_ag.mats[s];
        let s_bg_here = sp_bg.mats[s].try_map(|r| sub_ba.apply(r))?;
        let l_ab = sp_ab.witness.rank_at(s);
        let l_ag = sp_ag.witness.rank_at(s);
        let l_bg = sp_bg.witness.rank_at(s);
        let s_ab_inv = if s_ab.rows() > 0 {
            s_ab.inverse()?
        } else {
            s_ab.clone()
        };
        let inc = s_ab_inv.submatrix(0, 0, s_ab.rows(), ranks_b[s]);
        // left square: S_{α,γ} ∘ inc = (id_γ ⊕ C^{-1}[I;0]) ∘ S_{β,γ}|α
        let lhs = s_ag.mul(&inc)?;
        let c_inv = if coc[s].rows() > 0 {
            coc[s].inverse()?
        } else {
            coc[s].clone()
        };
        let include_bg = c_inv.submatrix(0, 0, l_ag, l_bg);
        let block = Matrix::block_diag(&[&Matrix::identity(ranks_g[s]), &include_bg]);
        let rhs = block.mul(&s_bg_here)?;
        if lhs != rhs {
            report.violation(alloc::format!(
                "diagram (vi) left square fails for {} < {} < {} at level {s}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
        }
        // right square: pr_{𝓛_{α,β}} ∘ S_{α,β} = [0 I] ∘ C ∘ pr_{𝓛_{α,γ}} ∘ S_{α,γ}
        let pr_ab = s_ab.submatrix(ranks_b[s], 0, l_ab, s_ab.cols());
        let pr_ag = s_ag.submatrix(ranks_g[s], 0, l_ag, s_ag.cols());
        let take_ab = coc[s].submatrix(l_bg, 0, l_ab, coc[s].cols());
        let rhs2 = take_ab.mul(&pr_ag)?;
        if pr_ab != rhs2 {
            report.violation(alloc::format!(
                "diagram (vi) right square fails for {} < {} < {} at level {s}",
                cover.render_tuple(gamma),
                cover.render_tuple(beta),
                cover.render_tuple(alpha)
            ));
        }
    }
    Ok(())
}
