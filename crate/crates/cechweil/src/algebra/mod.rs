//! Exact scalar arithmetic: rationals, multivariate polynomials, rational
//! functions with chart-declared invertibility, and matrices over them.
//!
//! The base field is ℚ with named chart variables standing in for ℂ; every
//! construction downstream only uses field operations, so the identities
//! checked here are field-agnostic. Chart-invertibility is declarative: a
//! chart lists the monic polynomials invertible on it, and every division
//! is checked against that list.

mod matrix;
mod poly;
mod ratfunc;
mod rational;

pub use matrix::{columns_in_span, render_matrix, Entry, Matrix};
pub use poly::{Poly, Var};
pub use ratfunc::{Chart, ChartRef, RatFunc};
pub use rational::Rational;

use crate::error::Error;

/// Chart unification for composite values built over rational functions.
pub(crate) fn unify_charts_pub(
    a: &Option<ChartRef>,
    b: &Option<ChartRef>,
) -> Result<Option<ChartRef>, Error> {
    ratfunc::unify_charts(a, b)
}

/// Rank of a matrix over the fraction field of its chart ring, by exact
/// fraction-free elimination.
pub fn matrix_rank(m: &Matrix<RatFunc>) -> Result<usize, Error> {
    m.rank()
}

/// Canonical form of `n / d` on `chart`: declared factors cancelled, the
/// denominator a monic product of declared invertibles.
pub fn ratfunc_normalize(chart: &ChartRef, n: Poly, d: Poly) -> Result<RatFunc, Error> {
    RatFunc::normalize(chart, n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn chart_u1() -> ChartRef {
        Chart::new("U1", &["z"], vec![]).unwrap()
    }

    fn chart_u12() -> ChartRef {
        Chart::new("U12", &["z"], vec![Poly::var(Var::Coord(0))]).unwrap()
    }

    fn z(chart: &ChartRef) -> RatFunc {
        RatFunc::coord(chart, 0)
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // z^2 / z on a chart where z is invertible reduces to z.
        let c = chart_u12();
        let zsq = Poly::var(Var::Coord(0)).pow(2);
        let r = ratfunc_normalize(&c, zsq, Poly::var(Var::Coord(0))).unwrap();
        assert_eq!(r, z(&c));
    }

    #[test]
    fn normalize_rejects_undeclared_factor() {
        // 1/z is not holomorphic on a chart containing the origin.
        let c = chart_u1();
        let r = ratfunc_normalize(&c, Poly::one(), Poly::var(Var::Coord(0)));
        assert!(matches!(r, Err(Error::NotInvertibleOnChart(_))));
    }

    #[test]
    fn normalize_zero_denominator() {
        let c = chart_u1();
        let r = ratfunc_normalize(&c, Poly::one(), Poly::zero());
        assert!(matches!(r, Err(Error::ZeroDenominator)));
    }

    #[test]
    fn normalize_gcd_example() {
        // (2z + 2) / 4 = (z + 1)/2; oracle: cross-multiplied equality of the
        // two presentations, plus the canonical rendering.
        let c = chart_u1();
        let n = Poly::var(Var::Coord(0))
            .scale(&Rational::from_int(2))
            .add(&Poly::constant(Rational::from_int(2)));
        let r = ratfunc_normalize(&c, n.clone(), Poly::constant(Rational::from_int(4))).unwrap();
        let expected = ratfunc_normalize(
            &c,
            Poly::var(Var::Coord(0)).add(&Poly::one()),
            Poly::constant(Rational::from_int(2)),
        )
        .unwrap();
        assert_eq!(r, expected);
        // cross-multiplication oracle: (2z+2) * 2 == 4 * (z+1)
        let lhs = n.scale(&Rational::from_int(2));
        let rhs = Poly::var(Var::Coord(0))
            .add(&Poly::one())
            .scale(&Rational::from_int(4));
        assert_eq!(lhs, rhs);
        let namer = |v: Var| -> alloc::string::String {
            match v {
                Var::Coord(_) => "z".into(),
                Var::T(i) => alloc::format!("t{i}"),
            }
        };
        assert_eq!(r.render(&namer), "(z + 1)/2");
    }

    #[test]
    fn normalize_idempotent() {
        let c = chart_u12();
        let n = Poly::var(Var::Coord(0)).pow(3).add(&Poly::one());
        let d = Poly::var(Var::Coord(0)).pow(2);
        let r = ratfunc_normalize(&c, n, d).unwrap();
        // Re-normalizing the canonical pieces is the identity.
        let again =
            ratfunc_normalize(&c, r.numerator().clone(), super::ratfunc::den_as_poly(&r)).unwrap();
        assert_eq!(r, again);
    }

    fn xorshift(state: &mut u64) -> u64 {
        let mut x = *state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        *state = x;
        x
    }

    fn random_ratfunc(c: &ChartRef, state: &mut u64) -> RatFunc {
        let mut num = Poly::zero();
        for e in 0..3u32 {
            let k = (xorshift(state) % 7) as i64 - 3;
            num = num.add(&Poly::monomial(Var::Coord(0), e, Rational::from_int(k)));
        }
        let de = (xorshift(state) % 3) as u32;
        let den = Poly::var(Var::Coord(0)).pow(de);
        ratfunc_normalize(c, num, den).unwrap()
    }

    #[test]
    fn field_axioms_sampled() {
        let c = chart_u12();
        let mut st = 0x8d2f_3a1c_55aa_77eeu64;
        for _ in 0..120 {
            let a = random_ratfunc(&c, &mut st);
            let b = random_ratfunc(&c, &mut st);
            let d = random_ratfunc(&c, &mut st);
            let assoc_l = a.add(&b).unwrap().add(&d).unwrap();
            let assoc_r = a.add(&b.add(&d).unwrap()).unwrap();
            assert_eq!(assoc_l, assoc_r);
            let distr_l = a.mul(&b.add(&d).unwrap()).unwrap();
            let distr_r = a.mul(&b).unwrap().add(&a.mul(&d).unwrap()).unwrap();
            assert_eq!(distr_l, distr_r);
            if !a.is_zero() {
                let inv = a.invert();
                if let Ok(inv) = inv {
                    assert!(a.mul(&inv).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let c = chart_u12();
        // 2x2 identity has rank 2
        assert_eq!(Matrix::identity(2).rank().unwrap(), 2);
        // [[z, z^2], [1, z]] has rank 1: second row is the first divided by z
        let m = Matrix::from_rows(vec![
            vec![z(&c), z(&c).mul(&z(&c)).unwrap()],
            vec![RatFunc::one(), z(&c)],
        ])
        .unwrap();
        assert_eq!(m.rank().unwrap(), 1);
        // 0x0 matrix has rank 0
        let e: Matrix<RatFunc> = Matrix::zeros(0, 0);
        assert_eq!(e.rank().unwrap(), 0);
    }

    #[test]
    fn rank_transpose_sampled() {
        let c = chart_u12();
        let mut st = 0xdead_beef_1234_5678u64;
        for _ in 0..40 {
            let m = Matrix::from_fn(3, 3, |_, _| random_ratfunc(&c, &mut st));
            assert_eq!(m.rank().unwrap(), m.transpose().rank().unwrap());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let c = chart_u12();
        let m = Matrix::from_rows(vec![
            vec![z(&c), RatFunc::one()],
            vec![RatFunc::zero(), z(&c)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        // det = z^2 is a unit on U12 but not on U1
        let c1 = chart_u1();
        let m1 = Matrix::from_rows(vec![vec![z(&c1)]]).unwrap();
        assert!(matches!(
            m1.inverse(),
            Err(Error::NotInvertibleOnChart(_))
        ));
    }

    #[test]
    fn substitution_into_inverse_coordinate() {
        // w -> 1/z carries w^2 + 1 to (1 + z^2)/z^2.
        let u2 = Chart::new("U2", &["w"], vec![]).unwrap();
        let u12 = chart_u12();
        let f = RatFunc::from_poly(&u2, Poly::var(Var::Coord(0)).pow(2).add(&Poly::one()));
        let img = |_: u16| -> Result<RatFunc, Error> {
            RatFunc::one().div(&RatFunc::coord(&u12, 0))
        };
        let g = f.substitute(&img, &u12).unwrap();
        let expected = ratfunc_normalize(
            &u12,
            Poly::var(Var::Coord(0)).pow(2).add(&Poly::one()),
            Poly::var(Var::Coord(0)).pow(2),
        )
        .unwrap();
        assert_eq!(g, expected);
    }
}
