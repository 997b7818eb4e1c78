//! Exact symbolic engine for Čech–de Rham computations over a finite cover:
//! simplicial differential forms on the nerve, vector bundles and complexes
//! on the nerve with their splitting structure, barycentric simplicial
//! connections and their curvature, twisting cochains with the Maurer–Cartan
//! check, and Dupont fibre integration into the Čech total complex.
//!
//! Everything is computed over ℚ with named chart variables; no floating
//! point is used anywhere. All values are immutable after construction and
//! every operation is pure, so concurrent evaluation needs no coordination.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod bundles;
pub mod cech;
pub mod connections;
pub mod cover;
pub mod error;
pub mod finite_model;
pub mod forms;
pub mod report;
pub mod simplex;
pub mod twisting;

pub use error::Error;
pub use report::CheckReport;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::algebra::{ChartRef, Poly, RatFunc, Rational, Var};
    use crate::forms::Form;
    use alloc::vec::Vec;

    pub struct Rng(pub u64);

    impl Rng {
        pub fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }

        pub fn below(&mut self, n: u64) -> u64 {
            self.next() % n
        }

        pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
            lo + (self.below((hi - lo + 1) as u64) as i64)
        }
    }

    /// Random polynomial in the chart coordinates and `t_1..t_p`, with
    /// small integer coefficients and total degree at most `deg`.
    pub fn random_poly(rng: &mut Rng, nvars: u16, p: usize, deg: u32) -> Poly {
        let mut acc = Poly::zero();
        let nterms = rng.below(4) + 1;
        for _ in 0..nterms {
            let mut term = Poly::constant(Rational::from_int(rng.int(-3, 3)));
            let mut budget = deg;
            for v in 0..nvars {
                let e = rng.below((budget + 1) as u64) as u32;
                term = term.mul(&Poly::monomial(Var::Coord(v), e, Rational::one()));
                budget -= e;
            }
            for k in 1..=p {
                let e = rng.below((budget + 1) as u64) as u32;
                term = term.mul(&Poly::monomial(Var::T(k as u8), e, Rational::one()));
                budget -= e;
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Random form of pinned simplicial degree `p` on `chart`, total form
    /// degree unconstrained (mixes types).
    pub fn random_form(rng: &mut Rng, chart: &ChartRef, p: usize, deg: u32) -> Form {
        let nvars = chart.vars.len() as u16;
        let mut acc = Form::zero().with_degree(p);
        let nterms = rng.below(3) + 1;
        for _ in 0..nterms {
            let coeff = RatFunc::from_poly(chart, random_poly(rng, nvars, p, deg));
            let mut base: Vec<u16> = Vec::new();
            for v in 0..nvars {
                if rng.below(2) == 0 {
                    base.push(v);
                }
            }
            let mut simp: Vec<u8> = Vec::new();
            for k in 1..=p {
                if rng.below(2) == 0 {
                    simp.push(k as u8);
                }
            }
            let t = Form::term(Some(p), Some(chart.clone()), coeff, base, simp).unwrap();
            acc = acc.add(&t).unwrap();
        }
        acc
    }
}
