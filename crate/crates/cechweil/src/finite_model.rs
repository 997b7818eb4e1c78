//! The finite motivating model: pairs `(V, φ)` of a vector space with an
//! endomorphism, the quotient functor `E : (V, φ) ↦ (V/ker φ, φ̄)`, weak
//! equivalences, brute-force admissibility witnesses over a prime field,
//! and the rational-canonical-form class invariant.

use alloc::vec::Vec;

use crate::algebra::Rational;
use crate::error::Error;

/// Element operations needed for exact Gaussian elimination.
pub trait FieldScalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl FieldScalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> FieldScalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp((self.0 * o.0) % P)
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        // P is small; brute force
        for k in 1..P {
            if (self.0 * k) % P == 1 {
                return Fp(k);
            }
        }
        unreachable!("P must be prime")
    }
}

// Dense field matrices with plain Vec storage; the generic `Matrix` is
// reserved for the symbolic side.
#[derive(Clone, PartialEq, Debug)]
pub struct FMat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: FieldScalar> FMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FMat {
            rows,
            cols,
            data: alloc::vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(FMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = FMat::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc = F::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(o.at(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut out = FMat::zeros(self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..o.cols {
                out.set(r, self.cols + c, o.at(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut pr = None;
            for r in row..m.rows {
                if !m.at(r, col).is_zero() {
                    pr = Some(r);
                    break;
                }
            }
            let pr = match pr {
                Some(pr) => pr,
                None => continue,
            };
            for c in 0..m.cols {
                let tmp = m.at(row, c).clone();
                let v = m.at(pr, c).clone();
                m.set(row, c, v);
                m.set(pr, c, tmp);
            }
            let inv = m.at(row, col).inv();
            for c in 0..m.cols {
                m.set(row, c, m.at(row, c).mul(&inv));
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c).sub(&factor.mul(m.at(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning the kernel.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FMat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, F::one());
            for (prow, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, F::zero().sub(r.at(prow, fc)));
            }
        }
        out
    }

    /// Solves `self · x = rhs` column by column; `None` if inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FMat::zeros(self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.at(prow, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// A finite-dimensional vector space with an endomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoPair<F> {
    pub phi: FMat<F>,
}

impl<F: FieldScalar> EndoPair<F> {
    pub fn new(phi: FMat<F>) -> Result<Self, Error> {
        if !phi.is_square() {
            return Err(Error::ShapeMismatch("endomorphism must be square".into()));
        }
        Ok(EndoPair { phi })
    }

    pub fn dim(&self) -> usize {
        self.phi.rows
    }
}

impl<F> FMat<F> {
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// A morphism `(V, φ) → (W, ψ)`: a matrix with `f φ = ψ f`.
#[derive(Clone, Debug)]
pub struct PairMorphism<F> {
    pub source: EndoPair<F>,
    pub target: EndoPair<F>,
    pub f: FMat<F>,
}

impl<F: FieldScalar> PairMorphism<F> {
    pub fn new(source: EndoPair<F>, target: EndoPair<F>, f: FMat<F>) -> Result<Self, Error> {
        if f.rows != target.dim() || f.cols != source.dim() {
            return Err(Error::ShapeMismatch("morphism shape".into()));
        }
        if f.mul(&source.phi) != target.phi.mul(&f) {
            return Err(Error::ShapeMismatch(
                "not a morphism of pairs: f φ ≠ ψ f".into(),
            ));
        }
        Ok(PairMorphism { source, target, f })
    }
}

/// Quotient presentation: a kernel basis `k`, a complement `c` of standard
/// basis vectors, and the matrix of the induced endomorphism on `V/ker φ`
/// in the complement coordinates.
struct Quotient<F> {
    kernel: FMat<F>,
    complement: FMat<F>,
    induced: FMat<F>,
}

fn quotient_of<F: FieldScalar>(x: &EndoPair<F>) -> Quotient<F> {
    let kernel = x.phi.kernel();
    let n = x.dim();
    let k = kernel.cols;
    // greedily complete the kernel basis with standard basis vectors
    let mut complement = FMat::zeros(n, 0);
    let mut span = kernel.clone();
    for i in 0..n {
        if span.cols == n {
            break;
        }
        let mut e = FMat::zeros(n, 1);
        e.set(i, 0, F::one());
        let cand = span.hcat(&e);
        if cand.rank() > span.rank() {
            span = cand;
            complement = complement.hcat(&e);
        }
    }
    debug_assert_eq!(complement.cols, n - k);
    // express φ·C in the basis [K | C]; the quotient coordinates are the
    // bottom rows
    let basis = kernel.hcat(&complement);
    let phic = x.phi.mul(&complement);
    let coords = basis.solve(&phic).expect("basis spans the space");
    let q = n - k;
    let mut induced = FMat::zeros(q, q);
    for r in 0..q {
        for c in 0..q {
            induced.set(r, c, coords.at(k + r, c).clone());
        }
    }
    Quotient {
        kernel,
        complement,
        induced,
    }
}

/// The functor `E`: `(V, φ) ↦ (V/ker φ, φ̄)`. The dimension drops to
/// `rank φ`.
pub fn apply_e<F: FieldScalar>(x: &EndoPair<F>) -> EndoPair<F> {
    EndoPair {
        phi: quotient_of(x).induced,
    }
}

/// The induced map of `f` on the quotients `V/ker φ → W/ker ψ`, in the
/// complement coordinates chosen by `quotient_of`.
fn induced_on_quotients<F: FieldScalar>(m: &PairMorphism<F>) -> FMat<F> {
    let qs = quotient_of(&m.source);
    let qt = quotient_of(&m.target);
    let fc = m.f.mul(&qs.complement);
    let basis = qt.kernel.hcat(&qt.complement);
    let coords = basis.solve(&fc).expect("basis spans the target");
    let k = qt.kernel.cols;
    let q = qt.complement.cols;
    let mut out = FMat::zeros(q, fc.cols);
    for r in 0..q {
        for c in 0..fc.cols {
            out.set(r, c, coords.at(k + r, c).clone());
        }
    }
    out
}

/// Does `f` become an isomorphism after applying `E`?
pub fn is_weak_equivalence<F: FieldScalar>(m: &PairMorphism<F>) -> bool {
    induced_on_quotients(m).is_invertible()
}

/// An admissibility witness: sub-spaces `V₁ ⊆ ker φ` and `W₁ ⊆ ker ψ` with
/// `f(V₁) ⊆ W₁` and an induced isomorphism `V/V₁ → W/W₁`, given by their
/// basis matrices.
#[derive(Clone, Debug)]
pub struct SubspaceWitness<F> {
    pub v1: FMat<F>,
    pub w1: FMat<F>,
}

/// Enumerates all subspaces of the column space of `ambient` (a basis
/// matrix), as basis matrices, by enumerating reduced echelon forms in the
/// coordinate space.
fn subspaces_of<const P: u64>(ambient: &FMat<Fp<P>>) -> Vec<FMat<Fp<P>>> {
    let k = ambient.cols;
    let mut out = Vec::new();
    for d in 0..=k {
        enumerate_rref::<P>(d, k, &mut |rows| {
            // basis = ambient · (rrefᵀ)
            let mut b = FMat::zeros(k, d);
            for (r, row) in rows.iter().enumerate() {
                for c in 0..k {
                    b.set(c, r, row[c]);
                }
            }
            out.push(ambient.mul(&b));
        });
    }
    out
}

/// Enumerates the reduced row-echelon d×k matrices over F_P.
fn enumerate_rref<const P: u64>(d: usize, k: usize, f: &mut dyn FnMut(&[Vec<Fp<P>>])) {
    if d == 0 {
        f(&[]);
        return;
    }
    if d > k {
        return;
    }
    // choose pivot columns, then fill free entries
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free positions: (r, c) with c > pivots[r], c not a pivot column
        let mut free: Vec<(usize, usize)> = Vec::new();
        for r in 0..d {
            for c in (pivots[r] + 1)..k {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let total = (P as usize).pow(free.len() as u32);
        for code in 0..total {
            let mut rows = alloc::vec![alloc::vec![Fp::<P>(0); k]; d];
            for (r, p) in pivots.iter().enumerate() {
                rows[r][*p] = Fp(1);
            }
            let mut rem = code;
            for &(r, c) in &free {
                rows[r][c] = Fp((rem % P as usize) as u64);
                rem /= P as usize;
            }
            f(&rows);
        }
        // next pivot combination
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pivots[i] += 1;
            if pivots[i] <= k - (d - i) {
                for m in i + 1..d {
                    pivots[m] = pivots[m - 1] + 1;
                }
                break;
            }
        }
    }
}

fn columns_in_colspan<F: FieldScalar>(span: &FMat<F>, m: &FMat<F>) -> bool {
    if m.cols == 0 {
        return true;
    }
    span.solve(m).is_some()
}

/// Brute-force witness search over a prime field: enumerates all subspace
/// pairs `(V₁ ⊆ ker φ, W₁ ⊆ ker ψ)` and returns the first one making `f`
/// admissible, if any. Dimensions above 4 are refused.
pub fn admissibility_witness_search<const P: u64>(
    m: &PairMorphism<Fp<P>>,
) -> Result<Option<SubspaceWitness<Fp<P>>>, Error> {
    if m.source.dim() > 4 || m.target.dim() > 4 {
        return Err(Error::DimensionTooLarge(
            "witness enumeration is limited to dimension 4".into(),
        ));
    }
    let ker_phi = m.source.phi.kernel();
    let ker_psi = m.target.phi.kernel();
    let n_v = m.source.dim();
    let n_w = m.target.dim();
    for v1 in subspaces_of(&ker_phi) {
        for w1 in subspaces_of(&ker_psi) {
            // f(V₁) ⊆ W₁
            let fv1 = m.f.mul(&v1);
            if !columns_in_colspan(&w1, &fv1) {
                continue;
            }
            // induced V/V₁ → W/W₁ must be an isomorphism: equal quotient
            // dimensions, surjective (rank [W₁ | f] = dim W), injective
            // (f⁻¹(W₁) no larger than V₁)
            if n_v - v1.rank() != n_w - w1.rank() {
                continue;
            }
            let aug = w1.hcat(&m.f);
            if aug.rank() == n_w && preimage_dim(&m.f, &w1) == v1.rank() {
                return Ok(Some(SubspaceWitness { v1, w1 }));
            }
        }
    }
    Ok(None)
}

/// dim { x : f x ∈ span(w) }.
fn preimage_dim<F: FieldScalar>(f: &FMat<F>, w: &FMat<F>) -> usize {
    // kernel of [f | w] projected to the x-block:
    // dim ker [f | w] - (w.cols - rank w) ... computed via ranks
    let aug = f.hcat(w);
    let total_kernel = f.cols + w.cols - aug.rank();
    let w_kernel = w.cols - w.rank();
    total_kernel - w_kernel
}

/// Univariate polynomials over ℚ, coefficients ascending, used for the
/// invariant-factor computation.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly(pub Vec<Rational>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            UniPoly::zero()
        } else {
            UniPoly(alloc::vec![c])
        }
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut out = alloc::vec![Rational::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c.clone();
        }
        for (i, c) in o.0.iter().enumerate() {
            out[i] += c.clone();
        }
        UniPoly(out).trim()
    }

    pub fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = alloc::vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly(out).trim()
    }

    pub fn divmod(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.clone();
        let mut q = UniPoly::zero();
        while !r.is_zero() && r.degree() >= d.degree() {
            let k = r.degree() - d.degree();
            let c = &r.0[r.degree()] / &d.0[d.degree()];
            let mut term = alloc::vec![Rational::zero(); k + 1];
            term[k] = c;
            let term = UniPoly(term);
            q = q.add(&term);
            r = r.sub(&term.mul(d));
        }
        (q, r)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let lead = self.0[self.degree()].clone();
        UniPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn render(&self, var: &str) -> alloc::string::String {
        use alloc::string::String;
        use core::fmt::Write as _;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                out.push('-');
            }
            let mag = c.abs();
            if k == 0 {
                let _ = write!(out, "{mag}");
            } else {
                if !mag.is_one() {
                    let _ = write!(out, "{mag}*");
                }
                if k == 1 {
                    let _ = write!(out, "{var}");
                } else {
                    let _ = write!(out, "{var}^{k}");
                }
            }
        }
        out
    }
}

/// Invariant factors of `xI - φ̄` over the univariate polynomial ring, for
/// the induced endomorphism of
/// `E(x)`: the rational canonical form data, a complete isomorphism
/// invariant of the image class. Flat summands collapse to nothing.
pub fn class_invariant(x: &EndoPair<Rational>) -> Vec<UniPoly> {
    let e = apply_e(x);
    let n = e.dim();
    // xI - A as a matrix of univariate polynomials
    let mut m: Vec<Vec<UniPoly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let a = UniPoly::constant(-e.phi.at(r, c).clone());
                    if r == c {
                        a.add(&UniPoly(alloc::vec![Rational::zero(), Rational::one()]))
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    // Smith normal form over the PID ℚ[x]
    let mut factors: Vec<UniPoly> = Vec::new();
    let mut top = 0usize;
    while top < n {
        // find the nonzero entry of least degree in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for r in top..n {
            for c in top..n {
                if !m[r][c].is_zero()
                    && best
                        .map(|(br, bc)| m[r][c].degree() < m[br][bc].degree())
                        .unwrap_or(true)
                {
                    best = Some((r, c));
                }
            }
        }
        let (br, bc) = match best {
            Some(b) => b,
            None => break,
        };
        m.swap(top, br);
        for row in m.iter_mut() {
            row.swap(top, bc);
        }
        // clear the row and column by division with remainder; repeat until
        // the pivot divides everything it meets
        let mut dirty = true;
        while dirty {
            dirty = false;
            for r in top + 1..n {
                if m[r][top].is_zero() {
                    continue;
                }
                let (q, rem) = m[r][top].divmod(&m[top][top]);
                for c in top..n {
                    let sub = q.mul(&m[top][c]);
                    m[r][c] = m[r][c].sub(&sub);
                }
                if !rem.is_zero() {
                    m.swap(top, r);
                    dirty = true;
                }
            }
            for c in top + 1..n {
                if m[top][c].is_zero() {
                    continue;
                }
                let (q, rem) = m[top][c].divmod(&m[top][top]);
                for row in m.iter_mut().skip(top) {
                    let sub = q.mul(&row[top]);
                    row[c] = row[c].sub(&sub);
                }
                if !rem.is_zero() {
                    for row in m.iter_mut() {
                        row.swap(top, c);
                    }
                    dirty = true;
                }
            }
        }
        factors.push(m[top][top].monic());
        top += 1;
    }
    // enforce the divisibility chain and drop unit factors
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let (_, rem) = factors[j].divmod(&factors[i]);
                if !rem.is_zero() {
                    // replace by gcd and lcm
                    let g = gcd_poly(&factors[i], &factors[j]);
                    let (l, _) = factors[i].mul(&factors[j]).divmod(&g);
                    factors[i] = g.monic();
                    factors[j] = l.monic();
                    changed = true;
                }
            }
        }
    }
    factors.retain(|f| f.degree() >= 1);
    factors.sort_by_key(|f| f.degree());
    factors
}

fn gcd_poly(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.divmod(&y);
        x = y;
        y = r;
    }
    x.monic()
}
