//! Combinatorics of the simplex category Δ and closed-form integration of
//! monomials over the topological simplex.
//!
//! Orientation convention: `dt_1 ∧ … ∧ dt_p` is positive on `Δ^p`, so
//! `∫_{Δ^1} dt_1 = +1`. The sign of odd-degree representatives downstream
//! depends on this choice.

use alloc::vec::Vec;

use crate::algebra::Rational;
use crate::error::Error;

/// An order-preserving map `[p] -> [q]` between finite ordinals, stored by
/// its value list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexMap {
    target: usize,
    values: Vec<usize>,
}

impl SimplexMap {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, Error> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::IndexOutOfRange("not monotone".into()));
        }
        if values.iter().any(|&v| v > target) {
            return Err(Error::IndexOutOfRange("value exceeds target".into()));
        }
        Ok(SimplexMap { target, values })
    }

    pub fn identity(p: usize) -> Self {
        SimplexMap {
            target: p,
            values: (0..=p).collect(),
        }
    }

    /// Source arity `p` of `[p] -> [q]`.
    pub fn source_arity(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_arity(&self) -> usize {
        self.target
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `other ∘ self` where `self: [p] -> [q]` and `other: [q] -> [r]`.
    pub fn then(&self, other: &SimplexMap) -> Result<SimplexMap, Error> {
        if self.target != other.source_arity() {
            return Err(Error::DegreeMismatch("simplex map composition".into()));
        }
        Ok(SimplexMap {
            target: other.target,
            values: self.values.iter().map(|&v| other.values[v]).collect(),
        })
    }
}

/// The coface `f_p^i : [p-1] -> [p]`, the injection omitting `i`.
pub fn coface(p: usize, i: usize) -> Result<SimplexMap, Error> {
    if i > p || p == 0 {
        return Err(Error::IndexOutOfRange(alloc::format!(
            "coface({p}, {i})"
        )));
    }
    let values = (0..=p).filter(|&v| v != i).collect();
    Ok(SimplexMap { target: p, values })
}

/// The codegeneracy `s_i^p : [p+1] -> [p]`, the surjection hitting `i`
/// twice.
pub fn codegeneracy(p: usize, i: usize) -> Result<SimplexMap, Error> {
    if i > p {
        return Err(Error::IndexOutOfRange(alloc::format!(
            "codegeneracy({p}, {i})"
        )));
    }
    let values = (0..=p + 1)
        .map(|v| if v <= i { v } else { v - 1 })
        .collect();
    Ok(SimplexMap { target: p, values })
}

/// Exact integral of `t_0^{a_0} ⋯ t_p^{a_p}` over `Δ^p` in the coordinates
/// `t_1 … t_p` (with `t_0 = 1 - Σ t_i`): `(∏ a_i!) / (p + Σ a_i)!`.
pub fn simplex_monomial_integral(exponents: &[u32]) -> Rational {
    assert!(!exponents.is_empty(), "exponent tuple for Δ^p has p+1 entries");
    let p = (exponents.len() - 1) as u32;
    let total: u32 = exponents.iter().sum();
    let mut num = Rational::one();
    for &a in exponents {
        num *= Rational::factorial(a);
    }
    num * Rational::factorial(p + total).recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn coface_examples() {
        // omit 0: [0] -> [1] sends 0 to 1
        assert_eq!(coface(1, 0).unwrap().values(), &[1]);
        // omit 1 from [2]: 0 -> 0, 1 -> 2
        assert_eq!(coface(2, 1).unwrap().values(), &[0, 2]);
        assert!(coface(2, 3).is_err());
    }

    #[test]
    fn coface_composition() {
        // f_2^0 ∘ f_1^0 : [0] -> [2] sends 0 to 2
        let f10 = coface(1, 0).unwrap();
        let f20 = coface(2, 0).unwrap();
        let comp = f10.then(&f20).unwrap();
        assert_eq!(comp.values(), &[2]);
    }

    #[test]
    fn cosimplicial_identities_exhaustive() {
        // All identities among cofaces and codegeneracies up to arity 4.
        for p in 1..=4usize {
            for i in 0..=p {
                for j in 0..=p {
                    if i < j && p >= 2 {
                        // f_p^j f_{p-1}^i = f_p^i f_{p-1}^{j-1}
                        let lhs = coface(p - 1, i)
                            .unwrap()
                            .then(&coface(p, j).unwrap())
                            .unwrap();
                        let rhs = coface(p - 1, j - 1)
                            .unwrap()
                            .then(&coface(p, i).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        for p in 0..=3usize {
            for i in 0..=p {
                for j in 0..=p {
                    // s_j s_i = s_i s_{j+1} for i <= j   (maps [p+2] -> [p])
                    if i <= j {
                        let lhs = codegeneracy(p + 1, i)
                            .unwrap()
                            .then(&codegeneracy(p, j).unwrap())
                            .unwrap();
                        let rhs = codegeneracy(p + 1, j + 1)
                            .unwrap()
                            .then(&codegeneracy(p, i).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        // mixed identities: s_j f_i
        for p in 1..=3usize {
            for i in 0..=p {
                for j in 0..=(p - 1) {
                    let lhs = coface(p, i)
                        .unwrap()
                        .then(&codegeneracy(p - 1, j).unwrap())
                        .unwrap();
                    let rhs = if i < j {
                        // s_j f_i = f_i s_{j-1}
                        codegeneracy(p - 2, j - 1)
                            .unwrap()
                            .then(&coface(p - 1, i).unwrap())
                            .unwrap()
                    } else if i > j + 1 {
                        // s_j f_i = f_{i-1} s_j
                        codegeneracy(p - 2, j)
                            .unwrap()
                            .then(&coface(p - 1, i - 1).unwrap())
                            .unwrap()
                    } else {
                        SimplexMap::identity(p - 1)
                    };
                    assert_eq!(lhs, rhs, "s_{j} f_{i} at p={p}");
                }
            }
        }
    }

    #[test]
    fn monomial_integral_base_cases() {
        // length of the unit interval
        assert_eq!(
            simplex_monomial_integral(&[0, 0]),
            Rational::one()
        );
        // ∫_0^1 t dt = 1/2
        assert_eq!(simplex_monomial_integral(&[0, 1]), Rational::new(1, 2));
        // ∫_{Δ^2} t0 t1 t2 = 1/120
        assert_eq!(
            simplex_monomial_integral(&[1, 1, 1]),
            Rational::new(1, 120)
        );
        // area of the triangle
        assert_eq!(
            simplex_monomial_integral(&[0, 0, 0]),
            Rational::new(1, 2)
        );
    }

    #[test]
    fn monomial_integral_matches_quadrature() {
        // Independent oracle: iterated 8-point Gauss–Legendre quadrature,
        // exact to machine precision for the polynomial degrees involved.
        fn gl8() -> ([f64; 8], [f64; 8]) {
            // nodes/weights on [-1, 1]
            (
                [
                    -0.9602898564975363,
                    -0.7966664774136267,
                    -0.5255324099163290,
                    -0.1834346424956498,
                    0.1834346424956498,
                    0.5255324099163290,
                    0.7966664774136267,
                    0.9602898564975363,
                ],
                [
                    0.1012285362903763,
                    0.2223810344533745,
                    0.3137066458778873,
                    0.3626837833783620,
                    0.3626837833783620,
                    0.3137066458778873,
                    0.2223810344533745,
                    0.1012285362903763,
                ],
            )
        }

        fn integrate(p: usize, exps: &[u32]) -> f64 {
            // recursively integrate t_1 ... t_p over the simplex
            fn go(level: usize, p: usize, exps: &[u32], ts: &mut [f64]) -> f64 {
                let (xs, ws) = gl8();
                let remaining: f64 = 1.0 - ts[..level].iter().sum::<f64>();
                if level == p {
                    let t0 = remaining;
                    let mut v = t0.powi(exps[0] as i32);
                    for k in 1..=p {
                        v *= ts[k - 1].powi(exps[k] as i32);
                    }
                    return v;
                }
                let mut acc = 0.0;
                for (x, w) in xs.iter().zip(ws.iter()) {
                    // map [-1,1] to [0, remaining]
                    let t = remaining * 0.5 * (x + 1.0);
                    ts[level] = t;
                    acc += w * remaining * 0.5 * go(level + 1, p, exps, ts);
                }
                acc
            }
            let mut ts = [0.0f64; 4];
            go(0, p, exps, &mut ts)
        }

        for p in 1..=3usize {
            // all exponent tuples with sum <= 4
            let mut tuples: Vec<Vec<u32>> = vec![vec![]];
            for _ in 0..=p {
                let mut next = Vec::new();
                for t in &tuples {
                    let used: u32 = t.iter().sum();
                    for a in 0..=(4 - used) {
                        let mut n = t.clone();
                        n.push(a);
                        next.push(n);
                    }
                }
                tuples = next;
            }
            for t in tuples {
                let exact = simplex_monomial_integral(&t).to_f64();
                let approx = integrate(p, &t);
                assert!(
                    (exact - approx).abs() < 1e-9,
                    "p={p} exps={t:?} exact={exact} approx={approx}"
                );
            }
        }
    }
}
