//! Bigraded differential forms on (a chart of) `N_p × Δ^p` with polynomial
//! dependence on the simplex coordinates, and families of such forms over
//! the nerve with the coface gluing check.
//!
//! Normal form: `t_0` and `dt_0` are eliminated via `Σ t_i = 1` and
//! `Σ dt_i = 0`; generators are strictly increasing within each wedge with
//! base generators before simplex generators; no zero coefficients are
//! stored. Equality is therefore coefficient comparison.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{ChartRef, Entry, Matrix, Poly, RatFunc, Rational, Var};
use crate::cover::{Cover, Substitution, Tuple};
use crate::error::Error;
use crate::report::CheckReport;

/// Wedge word of one term: base 1-form generators (chart variable indices)
/// and simplex generators (`dt_i`, `i >= 1`), each strictly increasing.
pub type GenKey = (Vec<u16>, Vec<u8>);

/// A differential form with rational-function coefficients that may depend
/// polynomially on the simplex coordinates.
#[derive(Clone, Debug)]
pub struct Form {
    /// Simplicial degree of the underlying level, when pinned. Constants
    /// are degree-agnostic and unify with anything.
    p: Option<usize>,
    chart: Option<ChartRef>,
    terms: BTreeMap<GenKey, RatFunc>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Form {}

/// Sign of sorting `v` into strictly increasing order; `None` on duplicates.
fn sort_sign<T: Ord + Copy>(v: &mut [T]) -> Option<bool> {
    let mut neg = false;
    // insertion sort, counting adjacent transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

fn unify_p(a: Option<usize>, b: Option<usize>) -> Result<Option<usize>, Error> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::DegreeMismatch(alloc::format!(
            "simplicial degree {x} vs {y}"
        ))),
        (Some(x), _) => Ok(Some(x)),
        (_, y) => Ok(y),
    }
}

impl Form {
    pub fn zero() -> Self {
        Form {
            p: None,
            chart: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Form::from_ratfunc(RatFunc::one())
    }

    pub fn from_ratfunc(c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        let chart = c.chart().cloned();
        if !c.is_zero() {
            terms.insert((Vec::new(), Vec::new()), c);
        }
        Form {
            p: None,
            chart,
            terms,
        }
    }

    pub fn constant(c: Rational) -> Self {
        Form::from_ratfunc(RatFunc::constant(c))
    }

    /// A single term `c · dz_{b} ∧ dt_{s}` (generators must be strictly
    /// increasing).
    pub fn term(
        p: Option<usize>,
        chart: Option<ChartRef>,
        c: RatFunc,
        base: Vec<u16>,
        simp: Vec<u8>,
    ) -> Result<Self, Error> {
        if base.windows(2).any(|w| w[0] >= w[1]) || simp.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ShapeMismatch("generators must be increasing".into()));
        }
        if !base.is_empty() && chart.is_none() {
            return Err(Error::ChartMismatch(
                "base generators need a chart".into(),
            ));
        }
        let chart = crate::algebra::unify_charts_pub(&chart, &c.chart().cloned())?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((base, simp), c);
        }
        Ok(Form { p, chart, terms })
    }

    /// The base 1-form `dz_v` on `chart`.
    pub fn base_one_form(chart: &ChartRef, v: u16) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((alloc::vec![v], Vec::new()), RatFunc::one());
        Form {
            p: None,
            chart: Some(chart.clone()),
            terms,
        }
    }

    /// The simplex 1-form `dt_i`, `i >= 1`.
    pub fn dt(i: u8) -> Self {
        assert!(i >= 1, "dt_0 is eliminated");
        let mut terms = BTreeMap::new();
        terms.insert((Vec::new(), alloc::vec![i]), RatFunc::one());
        Form {
            p: None,
            chart: None,
            terms,
        }
    }

    pub fn with_degree(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn degree_hint(&self) -> Option<usize> {
        self.p
    }

    pub fn chart(&self) -> Option<&ChartRef> {
        self.chart.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GenKey, &RatFunc)> {
        self.terms.iter()
    }

    /// Is this a pure chart function (no generators, no t-dependence)?
    pub fn is_base_function(&self) -> bool {
        self.terms
            .iter()
            .all(|((b, s), c)| b.is_empty() && s.is_empty() && !c.has_t_vars())
    }

    /// No simplex generators and no t-dependence in coefficients.
    pub fn is_base_only(&self) -> bool {
        self.terms
            .iter()
            .all(|((_, s), c)| s.is_empty() && !c.has_t_vars())
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        if self.terms.len() == 1 {
            let ((b, s), c) = self.terms.iter().next().unwrap();
            if b.is_empty() && s.is_empty() {
                return Some(c);
            }
        }
        None
    }

    /// Total degrees present, as (base, simplex) pairs.
    pub fn types(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .terms
            .keys()
            .map(|(b, s)| (b.len(), s.len()))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The type-(i, j) part.
    pub fn type_part(&self, i: usize, j: usize) -> Form {
        Form {
            p: self.p,
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((b, s), _)| b.len() == i && s.len() == j)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// The part with no `dt` generators (coefficients may still involve t).
    pub fn base_type_part(&self) -> Form {
        Form {
            p: self.p,
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((_, s), _)| s.is_empty())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    fn insert_term(&mut self, key: GenKey, c: RatFunc) -> Result<(), Error> {
        if c.is_zero() {
            return Ok(());
        }
        self.chart = crate::algebra::unify_charts_pub(&self.chart, &c.chart().cloned())?;
        match self.terms.get(&key) {
            Some(prev) => {
                let sum = prev.add(&c)?;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form, Error> {
        let mut out = Form {
            p: unify_p(self.p, other.p)?,
            chart: crate::algebra::unify_charts_pub(&self.chart, &other.chart)?,
            terms: self.terms.clone(),
        };
        for (k, c) in &other.terms {
            out.insert_term(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            p: self.p,
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Result<Form, Error> {
        self.wedge(&Form::from_ratfunc(c.clone()))
    }

    /// Exterior product. Reordering generators introduces Koszul signs;
    /// repeated generators kill the term.
    pub fn wedge(&self, other: &Form) -> Result<Form, Error> {
        let mut out = Form {
            p: unify_p(self.p, other.p)?,
            chart: crate::algebra::unify_charts_pub(&self.chart, &other.chart)?,
            terms: BTreeMap::new(),
        };
        for ((b1, s1), c1) in &self.terms {
            for ((b2, s2), c2) in &other.terms {
                // cross sign: dt-block of the left factor passes the
                // base-block of the right factor
                let cross_neg = (s1.len() * b2.len()) % 2 == 1;
                let mut base: Vec<u16> = b1.iter().chain(b2.iter()).copied().collect();
                let mut simp: Vec<u8> = s1.iter().chain(s2.iter()).copied().collect();
                let nb = match sort_sign(&mut base) {
                    Some(n) => n,
                    None => continue,
                };
                let ns = match sort_sign(&mut simp) {
                    Some(n) => n,
                    None => continue,
                };
                let mut c = c1.mul(c2)?;
                if nb ^ ns ^ cross_neg {
                    c = c.neg();
                }
                out.insert_term((base, simp), c)?;
            }
        }
        Ok(out)
    }

    /// Koszul differential `d = d_base + (-1)^{|base|} d_simplex`, where the
    /// base part differentiates chart variables into `dz` generators and the
    /// simplex part differentiates `t` variables into `dt` generators.
    pub fn differential(&self) -> Form {
        let mut out = Form {
            p: self.p,
            chart: self.chart.clone(),
            terms: BTreeMap::new(),
        };
        for ((b, s), c) in &self.terms {
            // base directions
            if let Some(chart) = &self.chart {
                for v in 0..chart.vars.len() as u16 {
                    let dc = c.derivative(Var::Coord(v));
                    if dc.is_zero() {
                        continue;
                    }
                    let mut base: Vec<u16> = core::iter::once(v).chain(b.iter().copied()).collect();
                    let neg = match sort_sign(&mut base) {
                        Some(n) => n,
                        None => continue,
                    };
                    let coeff = if neg { dc.neg() } else { dc };
                    out.insert_term((base, s.clone()), coeff)
                        .expect("chart fixed");
                }
            }
            // simplex directions; the new dt passes the whole base block
            let tvars: Vec<u8> = c
                .numerator()
                .vars()
                .iter()
                .filter_map(|v| match v {
                    Var::T(i) => Some(*i),
                    _ => None,
                })
                .collect();
            for m in tvars {
                let dc = c.derivative(Var::T(m));
                if dc.is_zero() {
                    continue;
                }
                let base_sign = b.len() % 2 == 1;
                let mut simp: Vec<u8> = core::iter::once(m).chain(s.iter().copied()).collect();
                let neg = match sort_sign(&mut simp) {
                    Some(n) => n,
                    None => continue,
                };
                let coeff = if neg ^ base_sign { dc.neg() } else { dc };
                out.insert_term((b.clone(), simp), coeff).expect("chart fixed");
            }
        }
        out
    }

    /// Generic substitution: every base generator and simplex generator is
    /// replaced by a linear combination, coefficients are mapped. Used by
    /// both pullbacks.
    fn substitute_generators(
        &self,
        new_p: Option<usize>,
        new_chart: Option<ChartRef>,
        coeff_map: &dyn Fn(&RatFunc) -> Result<RatFunc, Error>,
        base_image: &dyn Fn(u16) -> Result<Vec<(u16, RatFunc)>, Error>,
        simp_image: &dyn Fn(u8) -> Vec<(u8, Rational)>,
    ) -> Result<Form, Error> {
        let mut out = Form {
            p: new_p,
            chart: new_chart,
            terms: BTreeMap::new(),
        };
        for ((b, s), c) in &self.terms {
            let c0 = coeff_map(c)?;
            if c0.is_zero() {
                continue;
            }
            // expand the product of images; choices[k] enumerates the
            // summands of generator k's image
            let base_imgs: Vec<Vec<(u16, RatFunc)>> = b
                .iter()
                .map(|&v| base_image(v))
                .collect::<Result<_, _>>()?;
            let simp_imgs: Vec<Vec<(u8, Rational)>> =
                s.iter().map(|&m| simp_image(m)).collect();
            expand_choices(&base_imgs, &mut |bchoice, bcoeff| {
                expand_choices_simp(&simp_imgs, &mut |schoice, scoeff| {
                    let mut base: Vec<u16> = bchoice.to_vec();
                    let mut simp: Vec<u8> = schoice.to_vec();
                    let nb = match sort_sign(&mut base) {
                        Some(n) => n,
                        None => return Ok(()),
                    };
                    let ns = match sort_sign(&mut simp) {
                        Some(n) => n,
                        None => return Ok(()),
                    };
                    let mut coeff = c0.mul(bcoeff)?.scale(scoeff);
                    if nb ^ ns {
                        coeff = coeff.neg();
                    }
                    out.insert_term((base, simp), coeff)
                })
            })?;
        }
        Ok(out)
    }

    /// Pullback along `id × f_p^i`: substitutes `t_i := 0`, `dt_i := 0`,
    /// renumbers the remaining simplex coordinates and re-eliminates the
    /// new `t_0`, `dt_0`. Degree-agnostic constants pull back to themselves.
    pub fn pullback_coface(&self, i: usize) -> Result<Form, Error> {
        let p = match self.p {
            Some(p) => p,
            None => {
                // no simplex content may be present without a pinned degree
                if self.terms.keys().all(|(_, s)| s.is_empty())
                    && self.terms.values().all(|c| !c.has_t_vars())
                {
                    return Ok(self.clone());
                }
                return Err(Error::DegreeMismatch(
                    "coface pullback of unpinned simplex-dependent form".into(),
                ));
            }
        };
        if i > p {
            return Err(Error::IndexOutOfRange(alloc::format!(
                "coface index {i} at degree {p}"
            )));
        }
        let new_p = p.checked_sub(1).ok_or_else(|| {
            Error::IndexOutOfRange("coface pullback at degree 0".into())
        })?;
        // polynomial images of the t variables
        let t_image = |m: u8| -> Poly {
            let m = m as usize;
            if i == 0 {
                if m == 1 {
                    // new t_0 = 1 - Σ_{k=1}^{p-1} t_k
                    let mut acc = Poly::one();
                    for k in 1..=new_p {
                        acc = acc.sub(&Poly::var(Var::T(k as u8)));
                    }
                    acc
                } else {
                    Poly::var(Var::T((m - 1) as u8))
                }
            } else if m == i {
                Poly::zero()
            } else if m > i {
                Poly::var(Var::T((m - 1) as u8))
            } else {
                Poly::var(Var::T(m as u8))
            }
        };
        let coeff_map = |c: &RatFunc| -> Result<RatFunc, Error> {
            c.substitute_t(&t_image)
        };
        let simp_image = |m: u8| -> Vec<(u8, Rational)> {
            let m = m as usize;
            if i == 0 {
                if m == 1 {
                    // new dt_0 = -Σ dt_k
                    (1..=new_p)
                        .map(|k| (k as u8, -Rational::one()))
                        .collect()
                } else {
                    alloc::vec![((m - 1) as u8, Rational::one())]
                }
            } else if m == i {
                Vec::new()
            } else if m > i {
                alloc::vec![((m - 1) as u8, Rational::one())]
            } else {
                alloc::vec![(m as u8, Rational::one())]
            }
        };
        let base_image =
            |v: u16| -> Result<Vec<(u16, RatFunc)>, Error> { Ok(alloc::vec![(v, RatFunc::one())]) };
        self.substitute_generators(
            Some(new_p),
            self.chart.clone(),
            &coeff_map,
            &base_image,
            &simp_image,
        )
    }

    /// Pullback along a nerve map: applies the variable substitution to all
    /// coefficients and base generators (chain rule); the simplex part is
    /// untouched.
    pub fn pullback_nerve(&self, sub: &Substitution) -> Result<Form, Error> {
        if let Some(c) = &self.chart {
            if c.name != sub.from.name {
                return Err(Error::ChartMismatch(alloc::format!(
                    "form on {} pulled along {} -> {}",
                    c.name, sub.from.name, sub.to.name
                )));
            }
        }
        if sub.is_identity() && self.chart.is_none() {
            return Ok(self.clone());
        }
        let coeff_map = |c: &RatFunc| -> Result<RatFunc, Error> { sub.apply(c) };
        let base_image = |v: u16| -> Result<Vec<(u16, RatFunc)>, Error> {
            // d(image of z_v) = Σ_k ∂(image)/∂w_k dw_k
            let img = &sub.images[v as usize];
            let mut out = Vec::new();
            for k in 0..sub.to.vars.len() as u16 {
                let dk = img.derivative(Var::Coord(k));
                if !dk.is_zero() {
                    out.push((k, dk));
                }
            }
            Ok(out)
        };
        let simp_image = |m: u8| -> Vec<(u8, Rational)> { alloc::vec![(m, Rational::one())] };
        self.substitute_generators(
            self.p,
            Some(sub.to.clone()),
            &coeff_map,
            &base_image,
            &simp_image,
        )
    }

    /// Canonical rendering, e.g. `t1/z dz ^ dt1`.
    pub fn render(&self, namer: &dyn Fn(Var) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, ((b, s), c)) in self.terms.iter().enumerate() {
            let neg = c.leading_is_negative();
            let mag = if neg { c.neg() } else { c.clone() };
            let mut gens: Vec<String> = Vec::new();
            for &v in b {
                gens.push(alloc::format!("d{}", namer(Var::Coord(v))));
            }
            for &m in s {
                gens.push(alloc::format!("dt{m}"));
            }
            let coeff_str = mag.render(namer);
            let body = if gens.is_empty() {
                coeff_str
            } else if mag.is_one() {
                gens.join(" ^ ")
            } else {
                let wrapped = if coeff_str.contains(' ') {
                    alloc::format!("({coeff_str})")
                } else {
                    coeff_str
                };
                alloc::format!("{} {}", wrapped, gens.join(" ^ "))
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn expand_choices(
    imgs: &[Vec<(u16, RatFunc)>],
    f: &mut dyn FnMut(&[u16], &RatFunc) -> Result<(), Error>,
) -> Result<(), Error> {
    fn go(
        imgs: &[Vec<(u16, RatFunc)>],
        k: usize,
        picked: &mut Vec<u16>,
        coeff: RatFunc,
        f: &mut dyn FnMut(&[u16], &RatFunc) -> Result<(), Error>,
    ) -> Result<(), Error> {
        if k == imgs.len() {
            return f(picked, &coeff);
        }
        for (v, c) in &imgs[k] {
            picked.push(*v);
            go(imgs, k + 1, picked, coeff.mul(c)?, f)?;
            picked.pop();
        }
        Ok(())
    }
    go(imgs, 0, &mut Vec::new(), RatFunc::one(), f)
}

fn expand_choices_simp(
    imgs: &[Vec<(u8, Rational)>],
    f: &mut dyn FnMut(&[u8], &Rational) -> Result<(), Error>,
) -> Result<(), Error> {
    fn go(
        imgs: &[Vec<(u8, Rational)>],
        k: usize,
        picked: &mut Vec<u8>,
        coeff: Rational,
        f: &mut dyn FnMut(&[u8], &Rational) -> Result<(), Error>,
    ) -> Result<(), Error> {
        if k == imgs.len() {
            return f(picked, &coeff);
        }
        for (m, c) in &imgs[k] {
            picked.push(*m);
            go(imgs, k + 1, picked, &coeff * c, f)?;
            picked.pop();
        }
        Ok(())
    }
    go(imgs, 0, &mut Vec::new(), Rational::one(), f)
}

impl Entry for Form {
    fn zero() -> Self {
        Form::zero()
    }
    fn is_zero(&self) -> bool {
        Form::is_zero(self)
    }
    fn add(&self, o: &Self) -> Result<Self, Error> {
        Form::add(self, o)
    }
    fn neg(&self) -> Self {
        Form::neg(self)
    }
    fn mul(&self, o: &Self) -> Result<Self, Error> {
        Form::wedge(self, o)
    }
}

/// Entry-wise Koszul differential of a matrix of forms.
pub fn matrix_differential(m: &Matrix<Form>) -> Matrix<Form> {
    m.map(|f| f.differential())
}

pub fn matrix_pullback_coface(m: &Matrix<Form>, i: usize) -> Result<Matrix<Form>, Error> {
    m.try_map(|f| f.pullback_coface(i))
}

pub fn matrix_pullback_nerve(m: &Matrix<Form>, sub: &Substitution) -> Result<Matrix<Form>, Error> {
    m.try_map(|f| f.pullback_nerve(sub))
}

pub fn ratfunc_matrix_to_forms(m: &Matrix<RatFunc>, p: Option<usize>) -> Matrix<Form> {
    m.map(|r| {
        let f = Form::from_ratfunc(r.clone());
        match p {
            Some(p) => f.with_degree(p),
            None => f,
        }
    })
}

/// Collects, for every generator word appearing in `m`, the matrix of its
/// rational-function coefficients. Used to reduce form-matrix identities to
/// fraction-field linear algebra.
pub fn generator_coefficients(m: &Matrix<Form>) -> BTreeMap<GenKey, Matrix<RatFunc>> {
    let mut keys: Vec<GenKey> = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            for (k, _) in m.at(r, c).terms() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for key in keys {
        let mat = Matrix::from_fn(m.rows(), m.cols(), |r, c| {
            m.at(r, c)
                .terms()
                .find(|(k, _)| **k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(RatFunc::zero)
        });
        out.insert(key, mat);
    }
    out
}

/// A family `ω_p`, `p = 0..=depth`, of forms over the nerve, one per tuple,
/// all of one total degree.
#[derive(Clone, Debug)]
pub struct SimplicialFormFamily {
    pub degree: usize,
    pub components: BTreeMap<Tuple, Form>,
}

impl SimplicialFormFamily {
    pub fn new(degree: usize) -> Self {
        SimplicialFormFamily {
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn component(&self, t: &Tuple) -> Result<&Form, Error> {
        self.components
            .get(t)
            .ok_or_else(|| Error::MissingComponent(alloc::format!("family at {t}")))
    }

    /// The simplicial gluing condition: for every `p`, coface `i`, and
    /// tuple, the nerve restriction of `ω_{p-1}` equals the simplex
    /// pullback of `ω_p`, exactly.
    pub fn check_gluing(&self, cover: &Cover) -> Result<CheckReport, Error> {
        let mut report = CheckReport::new();
        for p in 1..=cover.depth {
            for t in cover.tuples(p) {
                let omega_p = match self.components.get(&t) {
                    Some(f) => f,
                    None => {
                        return Err(Error::MissingComponent(alloc::format!(
                            "family at {}",
                            cover.render_tuple(&t)
                        )))
                    }
                };
                for i in 0..=p {
                    let (face, sub) = cover.nerve_face(&t, i)?;
                    let omega_prev = self.component(&face)?;
                    let lhs = omega_prev.pullback_nerve(&sub)?;
                    let rhs = omega_p.pullback_coface(i)?;
                    if lhs != rhs {
                        report.violation(alloc::format!(
                            "gluing fails at p={p}, i={i}, tuple {}",
                            cover.render_tuple(&t)
                        ));
                    }
                }
            }
        }
        Ok(report)
    }

    /// Entry-wise differential; the total degree goes up by one.
    pub fn differential(&self) -> SimplicialFormFamily {
        SimplicialFormFamily {
            degree: self.degree + 1,
            components: self
                .components
                .iter()
                .map(|(t, f)| (t.clone(), f.differential()))
                .collect(),
        }
    }

    pub fn add(&self, other: &SimplicialFormFamily) -> Result<SimplicialFormFamily, Error> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch("family addition".into()));
        }
        let mut components = self.components.clone();
        for (t, f) in &other.components {
            let cur = components.get(t).cloned().unwrap_or_else(Form::zero);
            components.insert(t.clone(), cur.add(f)?);
        }
        Ok(SimplicialFormFamily {
            degree: self.degree,
            components,
        })
    }

    pub fn scale_int(&self, k: i64) -> SimplicialFormFamily {
        SimplicialFormFamily {
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(t, f)| {
                    (
                        t.clone(),
                        f.scale(&RatFunc::constant(Rational::from_int(k)))
                            .expect("integer scaling cannot fail"),
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Chart;
    use crate::cover::testcover::p1_cover;
    use crate::testutil::{random_form, Rng};
    use alloc::vec;

    fn u12() -> ChartRef {
        Chart::new("U12", &["z"], vec![Poly::var(Var::Coord(0))]).unwrap()
    }

    /// `dz/z` on the overlap chart.
    fn dz_over_z(c: &ChartRef) -> Form {
        let inv_z = RatFunc::one().div(&RatFunc::coord(c, 0)).unwrap();
        Form::base_one_form(c, 0).scale(&inv_z).unwrap()
    }

    #[test]
    fn wedge_squares_vanish() {
        let c = u12();
        let dz = Form::base_one_form(&c, 0);
        assert!(dz.wedge(&dz).unwrap().is_zero());
        // (t1 dz/z) ∧ (t1 dz/z) = 0
        let a = dz_over_z(&c)
            .scale(&RatFunc::t(1))
            .unwrap()
            .with_degree(1);
        assert!(a.wedge(&a).unwrap().is_zero());
        // dt1 ∧ dz = -(dz ∧ dt1)
        let dt1 = Form::dt(1);
        let lhs = dt1.wedge(&dz).unwrap();
        let rhs = dz.wedge(&dt1).unwrap().neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_examples() {
        let c = u12();
        // d(t1 dz/z) = dt1 ∧ dz/z = -(1/z) dz ^ dt1 in normal form
        let a = dz_over_z(&c).scale(&RatFunc::t(1)).unwrap().with_degree(1);
        let d = a.differential();
        let expected = Form::dt(1)
            .wedge(&dz_over_z(&c))
            .unwrap()
            .with_degree(1);
        assert_eq!(d, expected);
        // explicit normal form: coefficient -1/z on dz ^ dt1
        let inv_z = RatFunc::one().div(&RatFunc::coord(&c, 0)).unwrap();
        let nf = Form::term(
            Some(1),
            Some(c.clone()),
            inv_z.neg(),
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(d, nf);
        // d(z^2) = 2z dz
        let z2 = Form::from_ratfunc(RatFunc::from_poly(&c, Poly::var(Var::Coord(0)).pow(2)));
        let expected = Form::base_one_form(&c, 0)
            .scale(&RatFunc::from_poly(
                &c,
                Poly::var(Var::Coord(0)).scale(&Rational::from_int(2)),
            ))
            .unwrap();
        assert_eq!(z2.differential(), expected);
        // d(d(t1 z)) = 0
        let t1z = Form::from_ratfunc(
            RatFunc::coord(&c, 0).mul(&RatFunc::t(1)).unwrap(),
        )
        .with_degree(1);
        assert!(t1z.differential().differential().is_zero());
    }

    #[test]
    fn coface_pullback_examples() {
        let c = u12();
        // dt1 ∧ dz/z at p=1, pulled along i=1: t1 := 0 kills dt1
        let omega = Form::dt(1).wedge(&dz_over_z(&c)).unwrap().with_degree(1);
        assert!(omega.pullback_coface(1).unwrap().is_zero());
        // t1 dz at p=1, i=0: t1 becomes 1, leaving dz
        let t1dz = Form::base_one_form(&c, 0)
            .scale(&RatFunc::t(1))
            .unwrap()
            .with_degree(1);
        let pulled = t1dz.pullback_coface(0).unwrap();
        assert_eq!(pulled, Form::base_one_form(&c, 0).with_degree(0));
        // constants of unpinned degree pull back unchanged
        let k = Form::constant(Rational::from_int(7));
        assert_eq!(k.pullback_coface(0).unwrap(), k);
        assert_eq!(k.pullback_coface(3).unwrap(), k);
    }

    #[test]
    fn nerve_pullback_examples() {
        let cover = p1_cover();
        let u12c = cover.supports[2].chart.clone();
        // identity restriction leaves dz/z alone
        let ident = Substitution::identity(&u12c);
        let f = dz_over_z(&u12c);
        assert_eq!(f.pullback_nerve(&ident).unwrap(), f);
        // dz on U1 restricts to dz on U12
        let (_, sub) = cover.nerve_face(&Tuple(vec![0, 1]), 1).unwrap();
        let u1c = cover.supports[0].chart.clone();
        let dz1 = Form::base_one_form(&u1c, 0);
        assert_eq!(
            dz1.pullback_nerve(&sub).unwrap(),
            Form::base_one_form(&u12c, 0)
        );
        // w -> 1/z sends dw to -(1/z^2) dz
        let (_, sub2) = cover.nerve_face(&Tuple(vec![0, 1]), 0).unwrap();
        let u2c = cover.supports[1].chart.clone();
        let dw = Form::base_one_form(&u2c, 0);
        let img = dw.pullback_nerve(&sub2).unwrap();
        let expected = Form::base_one_form(&u12c, 0)
            .scale(
                &RatFunc::normalize(
                    &u12c,
                    Poly::constant(Rational::from_int(-1)),
                    Poly::var(Var::Coord(0)).pow(2),
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(img, expected);
    }

    #[test]
    fn gluing_check_examples() {
        let cover = p1_cover();
        let u12c = cover.supports[2].chart.clone();
        // the curvature family of the projective-line example:
        // 0 at both opens, dt1 ∧ dz/z on (0,1), -(dt1 ∧ dz/z) on (1,0),
        // 0 on the degenerate pairs
        let kappa = Form::dt(1).wedge(&dz_over_z(&u12c)).unwrap().with_degree(1);
        let mut fam = SimplicialFormFamily::new(2);
        fam.components.insert(Tuple(vec![0]), Form::zero().with_degree(0));
        fam.components.insert(Tuple(vec![1]), Form::zero().with_degree(0));
        fam.components.insert(Tuple(vec![0, 0]), Form::zero().with_degree(1));
        fam.components.insert(Tuple(vec![1, 1]), Form::zero().with_degree(1));
        fam.components.insert(Tuple(vec![0, 1]), kappa.clone());
        fam.components.insert(Tuple(vec![1, 0]), kappa.neg());
        assert!(fam.check_gluing(&cover).unwrap().pass());
        // breaking one component is caught with its location
        let mut bad = fam.clone();
        let u1c = cover.supports[0].chart.clone();
        bad.components
            .insert(Tuple(vec![0]), Form::base_one_form(&u1c, 0).with_degree(0));
        let report = bad.check_gluing(&cover).unwrap();
        assert!(!report.pass());
        // the mixed pair fails at the face keeping U1, as located output
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("i=1") && v.contains("(U1,U2)")));
        // the all-zero family passes
        let mut zero = SimplicialFormFamily::new(2);
        for p in 0..=1 {
            for t in cover.tuples(p) {
                zero.components.insert(t, Form::zero().with_degree(p));
            }
        }
        assert!(zero.check_gluing(&cover).unwrap().pass());
    }

    #[test]
    fn d_squared_zero_sampled() {
        let c = Chart::new("C2", &["x", "y"], vec![]).unwrap();
        let mut rng = Rng(0x5eed_0001);
        for p in 0..=3usize {
            for _ in 0..12 {
                let f = random_form(&mut rng, &c, p, 3);
                assert!(f.differential().differential().is_zero(), "d² != 0");
            }
        }
    }

    #[test]
    fn graded_commutativity_sampled() {
        let c = Chart::new("C2", &["x", "y"], vec![]).unwrap();
        let mut rng = Rng(0x5eed_0002);
        for p in 1..=3usize {
            for _ in 0..10 {
                let a = random_form(&mut rng, &c, p, 2);
                let b = random_form(&mut rng, &c, p, 2);
                // compare homogeneous pieces: a∧b = (-1)^{|a||b|} b∧a
                for (i, j) in a.types() {
                    for (k, l) in b.types() {
                        let ap = a.type_part(i, j);
                        let bp = b.type_part(k, l);
                        let lhs = ap.wedge(&bp).unwrap();
                        let sign = ((i + j) * (k + l)) % 2;
                        let rhs0 = bp.wedge(&ap).unwrap();
                        let rhs = if sign == 1 { rhs0.neg() } else { rhs0 };
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_sampled() {
        let c = Chart::new("C2", &["x", "y"], vec![]).unwrap();
        let mut rng = Rng(0x5eed_0003);
        for p in 1..=3usize {
            for _ in 0..10 {
                let a = random_form(&mut rng, &c, p, 2);
                let b = random_form(&mut rng, &c, p, 2);
                for (i, j) in a.types() {
                    let ap = a.type_part(i, j);
                    let lhs = ap.wedge(&b).unwrap().differential();
                    let sign = (i + j) % 2 == 1;
                    let db = b.differential();
                    let term2 = if sign {
                        ap.wedge(&db).unwrap().neg()
                    } else {
                        ap.wedge(&db).unwrap()
                    };
                    let rhs = ap.differential().wedge(&b).unwrap().add(&term2).unwrap();
                    assert_eq!(lhs, rhs, "Leibniz fails");
                }
            }
        }
    }

    #[test]
    fn coface_pullback_commutes_with_d_and_wedge() {
        let c = Chart::new("C2", &["x", "y"], vec![]).unwrap();
        let mut rng = Rng(0x5eed_0004);
        for p in 1..=3usize {
            for _ in 0..10 {
                let a = random_form(&mut rng, &c, p, 2);
                let b = random_form(&mut rng, &c, p, 2);
                for i in 0..=p {
                    let pd = a.differential().pullback_coface(i).unwrap();
                    let dp = a.pullback_coface(i).unwrap().differential();
                    assert_eq!(pd, dp, "pullback does not chain-commute with d");
                    let pw = a.wedge(&b).unwrap().pullback_coface(i).unwrap();
                    let wp = a
                        .pullback_coface(i)
                        .unwrap()
                        .wedge(&b.pullback_coface(i).unwrap())
                        .unwrap();
                    assert_eq!(pw, wp, "pullback does not respect wedge");
                }
            }
        }
    }

    #[test]
    fn render_is_deterministic_and_readable() {
        let c = u12();
        let a = Form::dt(1).wedge(&dz_over_z(&c)).unwrap();
        let namer = |v: Var| -> String {
            match v {
                Var::Coord(i) => c.var_name(i).into(),
                Var::T(i) => alloc::format!("t{i}"),
            }
        };
        assert_eq!(a.render(&namer), "-1/z dz ^ dt1");
        let b = dz_over_z(&c).scale(&RatFunc::t(1)).unwrap();
        assert_eq!(b.render(&namer), "t1/z dz");
    }
}
