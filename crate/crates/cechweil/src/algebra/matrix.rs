use alloc::string::String;
use alloc::vec::Vec;

use super::poly::Poly;
use super::ratfunc::{den_as_poly, RatFunc};
use crate::error::Error;

/// Entries that a matrix can hold: a commutative-ring flavour with
/// fallible operations (chart unification can fail).
pub trait Entry: Clone + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Result<Self, Error>;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Result<Self, Error>;
}

impl Entry for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Result<Self, Error> {
        RatFunc::add(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, o: &Self) -> Result<Self, Error> {
        RatFunc::mul(self, o)
    }
}

/// Dense row-major matrix. Zero-sized matrices (0×n, n×0) are legal and
/// show up as transitions into and out of rank-zero bundle components.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, f: impl Fn(&T) -> Result<U, Error>) -> Result<Matrix<U>, Error> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(f(x)?);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: alloc::vec![T::zero(); rows * cols],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::ShapeMismatch(alloc::format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for (a, b) in self.data.iter().zip(&o.data) {
            data.push(a.add(b)?);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        if self.cols != o.rows {
            return Err(Error::ShapeMismatch(alloc::format!(
                "mul {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(o.at(k, c))?)?;
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | o]`.
    pub fn hcat(&self, o: &Self) -> Result<Self, Error> {
        if self.rows != o.rows {
            return Err(Error::ShapeMismatch("hcat row mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                o.at(r, c - self.cols).clone()
            }
        }))
    }

    /// Vertical concatenation.
    pub fn vcat(&self, o: &Self) -> Result<Self, Error> {
        if self.cols != o.cols {
            return Err(Error::ShapeMismatch("vcat col mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows + o.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                o.at(r - self.rows, c).clone()
            }
        }))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    /// Block diagonal of the given matrices.
    pub fn block_diag(blocks: &[&Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl Matrix<RatFunc> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                RatFunc::one()
            } else {
                RatFunc::zero()
            }
        })
    }

    pub fn scale(&self, s: &RatFunc) -> Result<Self, Error> {
        self.try_map(|x| x.mul(s))
    }

    /// Determinant by cofactor expansion; fine at the ranks this engine
    /// meets (≤ 6).
    pub fn det(&self) -> Result<RatFunc, Error> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("det of non-square".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RatFunc::one());
        }
        if n == 1 {
            return Ok(self.at(0, 0).clone());
        }
        let mut acc = RatFunc::zero();
        for c in 0..n {
            if self.at(0, c).is_zero() {
                continue;
            }
            let minor = Matrix::from_fn(n - 1, n - 1, |r, k| {
                self.at(r + 1, if k < c { k } else { k + 1 }).clone()
            });
            let term = self.at(0, c).mul(&minor.det()?)?;
            acc = if c % 2 == 0 {
                acc.add(&term)?
            } else {
                acc.sub(&term)?
            };
        }
        Ok(acc)
    }

    /// Inverse via the adjugate; the single division is by the determinant,
    /// which must be a unit on the chart.
    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let det = self.det()?;
        let det_inv = det.invert().map_err(|e| match e {
            Error::ZeroDenominator => Error::NotInvertibleOnChart("singular matrix".into()),
            other => other,
        })?;
        let mut adj = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                    self.at(if i < r { i } else { i + 1 }, if j < c { j } else { j + 1 })
                        .clone()
                });
                let mut cof = minor.det()?;
                if (r + c) % 2 == 1 {
                    cof = cof.neg();
                }
                // adjugate is the transpose of the cofactor matrix
                adj.set(c, r, cof.mul(&det_inv)?);
            }
        }
        Ok(adj)
    }

    /// Rank over the fraction field of the chart ring (with any simplex
    /// variables adjoined): clears denominators row by row, then runs
    /// fraction-free Bareiss elimination with full pivoting.
    pub fn rank(&self) -> Result<usize, Error> {
        // Unify charts across entries first so mismatches surface here.
        let mut chart = None;
        for x in &self.data {
            chart = super::ratfunc::unify_charts(&chart, &x.chart().cloned())?;
        }
        let cleared = self.cleared_rows();
        Ok(poly_rank(cleared, self.rows, self.cols))
    }

    /// Clears denominators by scaling each row with the product of its
    /// entries' denominators (a nonzero polynomial), preserving rank.
    fn cleared_rows(&self) -> Vec<Poly> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            let mut lcm = Poly::one();
            for c in 0..self.cols {
                let d = den_as_poly(self.at(r, c));
                // Factored denominators make a true lcm cheap to compute,
                // but the plain product keeps this independent of chart
                // internals; Bareiss does not care about the extra factor.
                lcm = lcm.mul(&d);
            }
            for c in 0..self.cols {
                let e = self.at(r, c);
                let d = den_as_poly(e);
                let scaled = e
                    .numerator()
                    .mul(&lcm.div_exact(&d).expect("denominator divides row lcm"));
                out.push(scaled);
            }
        }
        out
    }
}

/// Bareiss elimination rank of a dense polynomial matrix.
fn poly_rank(mut a: Vec<Poly>, rows: usize, cols: usize) -> usize {
    let at = |a: &Vec<Poly>, r: usize, c: usize| -> Poly { a[r * cols + c].clone() };
    let mut rank = 0;
    let mut prev = Poly::one();
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    for k in 0..rows.min(cols) {
        // full pivot search in the remaining submatrix
        let mut pivot = None;
        'search: for r in k..rows {
            for c in k..cols {
                if !at(&a, row_perm[r], col_perm[c]).is_zero() {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let (pr, pc) = match pivot {
            Some(p) => p,
            None => break,
        };
        row_perm.swap(k, pr);
        col_perm.swap(k, pc);
        rank += 1;
        let pivot_val = at(&a, row_perm[k], col_perm[k]);
        for r in (k + 1)..rows {
            for c in (k + 1)..cols {
                let num = at(&a, row_perm[r], col_perm[c])
                    .mul(&pivot_val)
                    .sub(&at(&a, row_perm[r], col_perm[k]).mul(&at(&a, row_perm[k], col_perm[c])));
                let q = num
                    .div_exact(&prev)
                    .expect("Bareiss: previous pivot divides exactly");
                a[row_perm[r] * cols + col_perm[c]] = q;
            }
            a[row_perm[r] * cols + col_perm[k]] = Poly::zero();
        }
        prev = pivot_val;
    }
    rank
}

/// `rank([w | m]) == rank(w)`: every column of `m` lies in the column span
/// of `w` over the fraction field.
pub fn columns_in_span(w: &Matrix<RatFunc>, m: &Matrix<RatFunc>) -> Result<bool, Error> {
    if w.rows() != m.rows() {
        return Err(Error::ShapeMismatch("columns_in_span row mismatch".into()));
    }
    if m.cols() == 0 || m.is_zero() {
        return Ok(true);
    }
    let aug = w.hcat(m)?;
    Ok(aug.rank()? == w.rank()?)
}

pub fn render_matrix<T>(m: &Matrix<T>, render: impl Fn(&T) -> String) -> String {
    let mut rows = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let mut row = Vec::with_capacity(m.cols);
        for c in 0..m.cols {
            row.push(render(m.at(r, c)));
        }
        rows.push(row.join(", "));
    }
    alloc::format!("[{}]", rows.join("; "))
}
