use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use super::rational::Rational;

/// A polynomial variable: either a chart coordinate (index into the chart's
/// variable list) or a simplex coordinate `t_i`, `i >= 1` (`t_0` is always
/// eliminated via `Σ t_i = 1` and never stored).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Coord(u16),
    T(u8),
}

/// Sparse multivariate polynomial over ℚ. The variable list is sorted and
/// deduplicated; exponent vectors have the same arity. No zero coefficients
/// are stored, so structural equality is semantic equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    vars: Vec<Var>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(alloc::vec![1u32], Rational::one());
        Poly {
            vars: alloc::vec![v],
            terms,
        }
    }

    pub fn monomial(v: Var, e: u32, c: Rational) -> Self {
        if c.is_zero() || e == 0 {
            return Poly::constant(c);
        }
        let mut terms = BTreeMap::new();
        terms.insert(alloc::vec![e], c);
        Poly {
            vars: alloc::vec![v],
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn uses_var(&self, v: Var) -> bool {
        match self.vars.iter().position(|&w| w == v) {
            None => false,
            Some(i) => self.terms.keys().any(|e| e[i] > 0),
        }
    }

    pub fn has_t_vars(&self) -> bool {
        self.vars.iter().enumerate().any(|(i, v)| {
            matches!(v, Var::T(_)) && self.terms.keys().any(|e| e[i] > 0)
        })
    }

    /// Drops variables with no occurrence and trims zero coefficients.
    fn compact(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self;
        }
        let vars: Vec<Var> = used.iter().map(|&i| self.vars[i]).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms {
            let ne: Vec<u32> = used.iter().map(|&i| e[i]).collect();
            terms.insert(ne, c);
        }
        Poly { vars, terms }
    }

    /// Re-expresses both polynomials over the union of their variable lists.
    fn align(a: &Poly, b: &Poly) -> (Vec<Var>, Poly, Poly) {
        let mut vars: Vec<Var> = a.vars.iter().chain(b.vars.iter()).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        (vars.clone(), a.reindex(&vars), b.reindex(&vars))
    }

    fn reindex(&self, vars: &[Var]) -> Poly {
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = alloc::vec![0u32; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[pos[i]] = x;
            }
            terms.insert(ne, c.clone());
        }
        Poly {
            vars: vars.to_vec(),
            terms,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (vars, a, b) = Poly::align(self, other);
        let mut terms = a.terms;
        for (e, c) in b.terms {
            match terms.get_mut(&e) {
                Some(acc) => *acc += c,
                None => {
                    terms.insert(e, c);
                }
            }
        }
        Poly { vars, terms }.compact()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (vars, a, b) = Poly::align(self, other);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match terms.get_mut(&e) {
                    Some(acc) => *acc += c,
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        Poly { vars, terms }.compact()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let i = match self.vars.iter().position(|&w| w == v) {
            Some(i) => i,
            None => return Poly::zero(),
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            let nc = c * &Rational::from_int(e[i] as i64);
            let prev = terms.insert(ne, nc);
            debug_assert!(prev.is_none());
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
        .compact()
    }

    /// Substitutes polynomials for a subset of the variables. Variables
    /// absent from `images` are kept as themselves.
    pub fn substitute(&self, images: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let v = self.vars[i];
                let base = match images(v) {
                    Some(img) => img,
                    None => Poly::var(v),
                };
                term = term.mul(&base.pow(exp));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Graded-lexicographic comparison of exponent vectors over an aligned
    /// variable list: higher total degree first, ties broken by the earlier
    /// variable having the larger exponent.
    fn cmp_grlex(a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    }

    /// Leading (exponent, coefficient) in graded-lex order.
    pub fn leading(&self) -> Option<(Vec<u32>, Rational)> {
        self.terms
            .iter()
            .max_by(|(e1, _), (e2, _)| Poly::cmp_grlex(e1, e2))
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c).unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    /// Exact division: `Some(q)` with `self = q * d` or `None` when `d`
    /// does not divide `self`. Reduction by the single divisor's leading
    /// term under graded-lex.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (vars, mut r, d) = Poly::align(self, d);
        let (dl, dc) = d.leading().unwrap();
        let mut q = Poly::zero();
        while !r.is_zero() {
            // arithmetic compacts variable lists, so re-align each round
            r = r.reindex(&vars);
            let (rl, rc) = r.leading().unwrap();
            let mut e = alloc::vec![0u32; vars.len()];
            for i in 0..vars.len() {
                if rl[i] < dl[i] {
                    return None;
                }
                e[i] = rl[i] - dl[i];
            }
            let mut terms = BTreeMap::new();
            terms.insert(e, &rc / &dc);
            let qt = Poly {
                vars: vars.clone(),
                terms,
            };
            q = q.add(&qt);
            r = r.sub(&qt.mul(&d));
        }
        Some(q)
    }

    /// All terms, sorted descending in graded-lex order. Used for rendering
    /// and for deterministic iteration.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut ts: Vec<(Vec<u32>, Rational)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        ts.sort_by(|(e1, _), (e2, _)| Poly::cmp_grlex(e2, e1));
        ts
    }

    /// Content: positive rational `c` such that `self / c` has coprime
    /// integer coefficients. Zero polynomial has content 1.
    pub fn content(&self) -> Rational {
        use num_bigint::BigInt;
        use num_integer::Integer as _;
        use num_traits::{One, Zero as _};
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::ZERO;
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return Rational::one();
        }
        Rational::from_bigint(num_gcd) * Rational::from_bigint(den_lcm).recip()
    }

    /// Renders the polynomial with `namer` supplying variable names, terms
    /// in descending graded-lex order.
    pub fn render(&self, namer: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(mag.render());
            }
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let name = namer(self.vars[i]);
                if exp == 1 {
                    factors.push(name);
                } else {
                    let mut s = name;
                    let _ = write!(s, "^{exp}");
                    factors.push(s);
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}
