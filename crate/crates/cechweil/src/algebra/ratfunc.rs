use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::poly::{Poly, Var};
use super::rational::Rational;
use crate::error::Error;

/// A chart: the coordinate ring of one (intersection of) open set(s),
/// together with the polynomials declared invertible on it. Division is
/// only permitted by units, i.e. by rational multiples of products of the
/// declared factors. Charts are identified by name.
#[derive(Debug)]
pub struct Chart {
    pub name: String,
    pub vars: Vec<String>,
    pub invertible: Vec<Poly>,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    /// `vars` in canonical order; `invertible` monic, non-constant, in the
    /// chart coordinates only.
    pub fn new(name: &str, vars: &[&str], invertible: Vec<Poly>) -> Result<ChartRef, Error> {
        for f in &invertible {
            if f.as_constant().is_some() {
                return Err(Error::NotInvertibleOnChart(
                    "declared invertible must be non-constant".into(),
                ));
            }
            if !f.is_monic() {
                return Err(Error::NotInvertibleOnChart(
                    "declared invertible must be monic".into(),
                ));
            }
            if f.has_t_vars() || f.vars().iter().any(|v| matches!(v, Var::T(_))) {
                return Err(Error::NotInvertibleOnChart(
                    "declared invertible must not involve simplex coordinates".into(),
                ));
            }
        }
        Ok(Arc::new(Chart {
            name: name.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            invertible,
        }))
    }

    pub fn var_name(&self, i: u16) -> &str {
        &self.vars[i as usize]
    }

    pub fn var_index(&self, name: &str) -> Option<u16> {
        self.vars.iter().position(|v| v == name).map(|i| i as u16)
    }
}

fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || a.name == b.name
}

/// Unify optional charts; `None` is the chart-agnostic constant case.
pub(crate) fn unify_charts(
    a: &Option<ChartRef>,
    b: &Option<ChartRef>,
) -> Result<Option<ChartRef>, Error> {
    match (a, b) {
        (None, None) => Ok(None),
        (Some(c), None) | (None, Some(c)) => Ok(Some(c.clone())),
        (Some(c), Some(d)) => {
            if same_chart(c, d) {
                Ok(Some(c.clone()))
            } else {
                Err(Error::ChartMismatch(alloc::format!(
                    "{} vs {}",
                    c.name, d.name
                )))
            }
        }
    }
}

/// Denominator in factored form: exponents of the chart's declared
/// invertible polynomials, sorted by factor index. The denominator is
/// always monic by construction since declared factors are monic.
pub(crate) type Den = Vec<(u16, u32)>;

fn den_mul(a: &Den, b: &Den) -> Den {
    let mut out: Den = a.clone();
    for &(i, e) in b {
        match out.iter_mut().find(|(j, _)| *j == i) {
            Some((_, acc)) => *acc += e,
            None => out.push((i, e)),
        }
    }
    out.sort_unstable();
    out.retain(|&(_, e)| e > 0);
    out
}

fn den_lcm(a: &Den, b: &Den) -> Den {
    let mut out: Den = a.clone();
    for &(i, e) in b {
        match out.iter_mut().find(|(j, _)| *j == i) {
            Some((_, acc)) => *acc = (*acc).max(e),
            None => out.push((i, e)),
        }
    }
    out.sort_unstable();
    out
}

fn den_div(a: &Den, b: &Den) -> Den {
    let mut out: Den = a.clone();
    for &(i, e) in b {
        let slot = out
            .iter_mut()
            .find(|(j, _)| *j == i)
            .expect("den_div: not a sub-multiset");
        assert!(slot.1 >= e, "den_div: not a sub-multiset");
        slot.1 -= e;
    }
    out.retain(|&(_, e)| e > 0);
    out
}

fn den_poly(den: &Den, chart: &Chart) -> Poly {
    let mut acc = Poly::one();
    for &(i, e) in den {
        acc = acc.mul(&chart.invertible[i as usize].pow(e));
    }
    acc
}

/// Exact rational function on a chart: a polynomial numerator (which may
/// involve simplex coordinates `t_i`) over a monic product of the chart's
/// declared invertible factors. Canonical form: no declared factor divides
/// the numerator while appearing in the denominator.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub(crate) chart: Option<ChartRef>,
    pub(crate) num: Poly,
    pub(crate) den: Den,
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        let charts_ok = match (&self.chart, &other.chart) {
            (Some(a), Some(b)) => same_chart(a, b),
            (None, None) => true,
            // A chart-agnostic constant equals the same constant on any chart.
            _ => true,
        };
        charts_ok && self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            chart: None,
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc {
            chart: None,
            num: Poly::constant(c),
            den: Vec::new(),
        }
    }

    /// A chart-agnostic polynomial value (simplex variables and constants
    /// only; no chart coordinates).
    pub fn from_poly_free(p: Poly) -> Self {
        debug_assert!(
            p.vars().iter().all(|v| matches!(v, Var::T(_))),
            "chart-free polynomials may only involve simplex variables"
        );
        RatFunc {
            chart: None,
            num: p,
            den: Vec::new(),
        }
    }

    pub fn from_poly(chart: &ChartRef, p: Poly) -> Self {
        RatFunc {
            chart: if p.as_constant().is_some() {
                None
            } else {
                Some(chart.clone())
            },
            num: p,
            den: Vec::new(),
        }
    }

    /// Chart coordinate by index.
    pub fn coord(chart: &ChartRef, i: u16) -> Self {
        RatFunc {
            chart: Some(chart.clone()),
            num: Poly::var(Var::Coord(i)),
            den: Vec::new(),
        }
    }

    /// Simplex coordinate `t_i`, `i >= 1`.
    pub fn t(i: u8) -> Self {
        assert!(i >= 1, "t_0 is eliminated and cannot be constructed");
        RatFunc {
            chart: None,
            num: Poly::var(Var::T(i)),
            den: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn chart(&self) -> Option<&ChartRef> {
        self.chart.as_ref()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn has_t_vars(&self) -> bool {
        self.num.has_t_vars()
    }

    /// Canonical reduction: cancel declared factors between numerator and
    /// denominator, and drop the chart tag on constants.
    fn canon(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
        }
        if let Some(chart) = self.chart.clone() {
            let mut den = Vec::new();
            for (i, mut e) in self.den {
                let f = &chart.invertible[i as usize];
                while e > 0 {
                    match self.num.div_exact(f) {
                        Some(q) => {
                            self.num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
                if e > 0 {
                    den.push((i, e));
                }
            }
            self.den = den;
            if self.den.is_empty() && self.num.as_constant().is_some() {
                self.chart = None;
            }
        }
        self
    }

    /// Normalization entry point: exact `n / d` on `chart`,
    /// requiring every irreducible factor of `d` to be declared invertible.
    pub fn normalize(chart: &ChartRef, n: Poly, d: Poly) -> Result<Self, Error> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (c, den) = factor_as_unit(chart, &d)?;
        let num = n.scale(&c.recip());
        Ok(RatFunc {
            chart: Some(chart.clone()),
            num,
            den,
        }
        .canon())
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc, Error> {
        let chart = unify_charts(&self.chart, &other.chart)?;
        let den = den_lcm(&self.den, &other.den);
        let num = match &chart {
            Some(ch) => {
                let la = den_poly(&den_div(&den, &self.den), ch);
                let lb = den_poly(&den_div(&den, &other.den), ch);
                self.num.mul(&la).add(&other.num.mul(&lb))
            }
            None => self.num.add(&other.num),
        };
        Ok(RatFunc { chart, num, den }.canon())
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            chart: self.chart.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc, Error> {
        let chart = unify_charts(&self.chart, &other.chart)?;
        Ok(RatFunc {
            chart,
            num: self.num.mul(&other.num),
            den: den_mul(&self.den, &other.den),
        }
        .canon())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc {
            chart: self.chart.clone(),
            num: self.num.scale(c),
            den: if c.is_zero() { Vec::new() } else { self.den.clone() },
        }
    }

    /// Multiplicative inverse; fails unless the numerator is a unit on the
    /// chart (a rational multiple of declared invertible factors).
    pub fn invert(&self) -> Result<RatFunc, Error> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        match &self.chart {
            None => {
                let c = self.num.as_constant().expect("chartless non-constant");
                Ok(RatFunc::constant(c.recip()))
            }
            Some(chart) => {
                let (c, g) = factor_as_unit(chart, &self.num)?;
                let num = den_poly(&self.den, chart).scale(&c.recip());
                Ok(RatFunc {
                    chart: Some(chart.clone()),
                    num,
                    den: g,
                }
                .canon())
            }
        }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, Error> {
        self.mul(&other.invert()?)
    }

    pub fn derivative(&self, v: Var) -> RatFunc {
        match &self.chart {
            None => RatFunc {
                chart: None,
                num: self.num.derivative(v),
                den: Vec::new(),
            },
            Some(chart) => {
                // d(n / ∏ f_i^{e_i}) = [n' ∏ f_i  -  n Σ e_i f_i' ∏_{j≠i} f_j]
                //                      / ∏ f_i^{e_i+1}
                let mut fprod = Poly::one();
                for &(i, _) in &self.den {
                    fprod = fprod.mul(&chart.invertible[i as usize]);
                }
                let mut num = self.num.derivative(v).mul(&fprod);
                for &(i, e) in &self.den {
                    let f = &chart.invertible[i as usize];
                    let rest = fprod.div_exact(f).expect("factor divides product");
                    let c = Rational::from_int(e as i64);
                    num = num.sub(&self.num.mul(&f.derivative(v)).mul(&rest).scale(&c));
                }
                let den: Den = self.den.iter().map(|&(i, e)| (i, e + 1)).collect();
                RatFunc {
                    chart: Some(chart.clone()),
                    num,
                    den,
                }
                .canon()
            }
        }
    }

    /// Substitutes simplex variables by polynomials in simplex variables
    /// (chart coordinates untouched). Denominators never involve `t`, so
    /// this stays within the same chart.
    pub fn substitute_t(&self, image: &dyn Fn(u8) -> Poly) -> Result<RatFunc, Error> {
        let num = self.num.substitute(&|v| match v {
            Var::T(i) => Some(image(i)),
            Var::Coord(_) => None,
        });
        Ok(RatFunc {
            chart: self.chart.clone(),
            num,
            den: self.den.clone(),
        }
        .canon())
    }

    /// Does the graded-lex leading coefficient of the numerator have a
    /// negative sign? Used only for rendering.
    pub fn leading_is_negative(&self) -> bool {
        self.num.leading_coeff().is_negative()
    }

    /// Splits the numerator by simplex-monomial: returns pairs of the
    /// `t`-exponent assignment and the `t`-free rational function carrying
    /// it.
    pub fn split_t_monomials(&self) -> Vec<(Vec<(u8, u32)>, RatFunc)> {
        use alloc::collections::BTreeMap;
        let mut groups: BTreeMap<Vec<(u8, u32)>, Poly> = BTreeMap::new();
        for (e, c) in self.num.sorted_terms() {
            let mut tkey: Vec<(u8, u32)> = Vec::new();
            let mut zpart = Poly::constant(c);
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                match self.num.vars()[i] {
                    Var::T(k) => tkey.push((k, exp)),
                    Var::Coord(k) => {
                        zpart = zpart.mul(&Poly::monomial(Var::Coord(k), exp, Rational::one()))
                    }
                }
            }
            tkey.sort_unstable();
            let slot = groups.entry(tkey).or_insert_with(Poly::zero);
            *slot = slot.add(&zpart);
        }
        groups
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| {
                (
                    k,
                    RatFunc {
                        chart: self.chart.clone(),
                        num: p,
                        den: self.den.clone(),
                    }
                    .canon(),
                )
            })
            .collect()
    }

    /// Substitutes each chart coordinate by the given rational function
    /// (all over the target chart); `t` variables are untouched.
    pub fn substitute(
        &self,
        image: &dyn Fn(u16) -> Result<RatFunc, Error>,
        target: &ChartRef,
    ) -> Result<RatFunc, Error> {
        let chart = match &self.chart {
            None => return Ok(self.clone()),
            Some(c) => c,
        };
        let num = eval_poly(&self.num, image, target)?;
        let mut out = num;
        for &(i, e) in &self.den {
            let f = eval_poly(&chart.invertible[i as usize], image, target)?;
            let finv = f.invert().map_err(|_| {
                Error::NotInvertibleOnChart(alloc::format!(
                    "image of declared factor of {} is not a unit on {}",
                    chart.name, target.name
                ))
            })?;
            for _ in 0..e {
                out = out.mul(&finv)?;
            }
        }
        Ok(out)
    }

    /// Canonical rendering: integer-primitive numerator over an explicit
    /// denominator, e.g. `(z + 1)/2`, `1/z`, `t1/z`.
    pub fn render(&self, namer: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let content = self.num.content();
        let prim = self
            .num
            .scale(&content.recip());
        let (int_num, int_den) = (content.numer().clone(), content.denom().clone());
        let num_scaled = prim.scale(&Rational::from_bigint(int_num));
        let num_str = num_scaled.render(namer);
        let mut den_parts: Vec<String> = Vec::new();
        use num_traits::One as _;
        if !int_den.is_one() {
            den_parts.push(int_den.to_string());
        }
        if let Some(chart) = &self.chart {
            for &(i, e) in &self.den {
                let f = chart.invertible[i as usize].render(namer);
                let wrapped = if f.contains(' ') {
                    alloc::format!("({f})")
                } else {
                    f
                };
                if e == 1 {
                    den_parts.push(wrapped);
                } else {
                    den_parts.push(alloc::format!("{wrapped}^{e}"));
                }
            }
        }
        if den_parts.is_empty() {
            num_str
        } else {
            let num_wrapped = if num_str.contains(' ') || num_str.contains('*') {
                alloc::format!("({num_str})")
            } else {
                num_str
            };
            alloc::format!("{}/{}", num_wrapped, den_parts.join("/"))
        }
    }
}

/// Materializes the factored denominator of `r` as a polynomial (for rank
/// computations that clear denominators).
pub(crate) fn den_as_poly(r: &RatFunc) -> Poly {
    match &r.chart {
        None => Poly::one(),
        Some(chart) => den_poly(&r.den, chart),
    }
}

/// Writes `p` as `c · ∏ declared_i^{e_i}` by trial division, or fails with
/// `NotInvertibleOnChart`.
fn factor_as_unit(chart: &ChartRef, p: &Poly) -> Result<(Rational, Den), Error> {
    let mut rem = p.clone();
    let mut den: Den = Vec::new();
    for (i, f) in chart.invertible.iter().enumerate() {
        let mut e = 0u32;
        while let Some(q) = rem.div_exact(f) {
            rem = q;
            e += 1;
        }
        if e > 0 {
            den.push((i as u16, e));
        }
    }
    match rem.as_constant() {
        Some(c) if !c.is_zero() => Ok((c, den)),
        Some(_) => Err(Error::ZeroDenominator),
        None => Err(Error::NotInvertibleOnChart(alloc::format!(
            "a factor of the denominator is not declared invertible on {}",
            chart.name
        ))),
    }
}

fn eval_poly(
    p: &Poly,
    image: &dyn Fn(u16) -> Result<RatFunc, Error>,
    target: &ChartRef,
) -> Result<RatFunc, Error> {
    let mut acc = RatFunc::zero();
    for (e, c) in p.sorted_terms() {
        let mut term = RatFunc::constant(c);
        for (i, &exp) in e.iter().enumerate() {
            if exp == 0 {
                continue;
            }
            let base = match p.vars()[i] {
                Var::Coord(k) => image(k)?,
                Var::T(k) => RatFunc::t(k),
            };
            for _ in 0..exp {
                term = term.mul(&base)?;
            }
        }
        acc = acc.add(&term)?;
    }
    // Pin the chart so downstream unification sees the target.
    if acc.chart.is_none() && acc.num.as_constant().is_none() {
        acc.chart = Some(target.clone());
    }
    Ok(acc)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let namer = |v: Var| -> String {
            match (v, &self.chart) {
                (Var::Coord(i), Some(c)) => c.var_name(i).into(),
                (Var::Coord(i), None) => alloc::format!("x{i}"),
                (Var::T(i), _) => alloc::format!("t{i}"),
            }
        };
        write!(f, "{}", self.render(&namer))
    }
}
