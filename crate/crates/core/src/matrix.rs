//! Dense matrices over Gaussian rationals with exact solvers.
//!
//! Everything a finite-dimensional operator algebra needs, done exactly:
//! products, adjoints, projection predicates and the commuting-projection
//! lattice, reduced row echelon form, span membership, nullspaces, minimal
//! polynomials, and spectral decompositions for matrices whose spectrum is
//! rational. No floating point: equality is structural equality of reduced
//! rationals.

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense row-major matrix over [`GaussianRational`].
#[derive(Clone, PartialEq, Eq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries; errors when the entry count
    /// does not match `rows * cols` or a dimension is zero.
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(CMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        CMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer-entry convenience constructor used heavily by tests/fixtures.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        CMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&k| GaussianRational::from_int(k)).collect())
                .collect(),
        )
        .expect("from_ints: ragged or empty rows")
    }

    pub fn diag(values: &[GaussianRational]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zero(n, n);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Diagonal matrix with exact rational (real) diagonal.
    pub fn diag_rational(values: &[Rational]) -> Self {
        let entries: Vec<GaussianRational> = values
            .iter()
            .map(|r| GaussianRational::from_rational(r.clone()))
            .collect();
        CMatrix::diag(&entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.entries[i * self.cols + j] = v;
    }

    /// Row-major flattening; the coordinate vector used by span solvers.
    pub fn flatten(&self) -> Vec<GaussianRational> {
        self.entries.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_same_shape(&self, rhs: &CMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.check_same_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.check_same_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn neg(&self) -> CMatrix {
        let entries = self.entries.iter().map(|a| -a).collect();
        CMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &GaussianRational) -> CMatrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        CMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.entry(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let acc = out.entry(i, j) + &(aik * rhs.entry(k, j));
                    out.set(i, j, acc);
                }
            }
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let mut out = CMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::Dimension("trace of a non-square matrix".into()));
        }
        let mut t = GaussianRational::zero();
        for i in 0..self.rows {
            t += self.entry(i, i);
        }
        Ok(t)
    }

    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if *self.entry(i, j) != self.entry(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact test for `p* = p` and `p^2 = p`.
    pub fn is_projection(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        match self.mul(self) {
            Ok(sq) => sq == *self,
            Err(_) => false,
        }
    }

    pub fn commutes_with(&self, rhs: &CMatrix) -> Result<bool> {
        Ok(self.mul(rhs)? == rhs.mul(self)?)
    }

    /// Projection rank = trace, an exact nonnegative integer.
    pub fn proj_rank(&self) -> Result<usize> {
        if !self.is_projection() {
            return Err(Error::NotProjection);
        }
        let t = self.trace()?;
        debug_assert!(t.is_real() && t.re.is_integer());
        Ok(t.re.to_integer().try_into().expect("projection rank fits usize"))
    }

    /// Order on projections: `p <= q` iff `q p = p`.
    pub fn proj_leq(p: &CMatrix, q: &CMatrix) -> Result<bool> {
        if !p.is_projection() || !q.is_projection() {
            return Err(Error::NotProjection);
        }
        Ok(q.mul(p)? == *p)
    }

    /// Meet of commuting projections: `p ∧ q = p q`.
    pub fn proj_meet(p: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
        if !p.is_projection() || !q.is_projection() {
            return Err(Error::NotProjection);
        }
        if !p.commutes_with(q)? {
            return Err(Error::NonCommuting);
        }
        p.mul(q)
    }

    /// Join of commuting projections: `p ∨ q = p + q - p q`.
    pub fn proj_join(p: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
        if !p.is_projection() || !q.is_projection() {
            return Err(Error::NotProjection);
        }
        if !p.commutes_with(q)? {
            return Err(Error::NonCommuting);
        }
        p.add(q)?.sub(&p.mul(q)?)
    }

    /// Orthocomplement `1 - p`.
    pub fn proj_complement(&self) -> Result<CMatrix> {
        if !self.is_projection() {
            return Err(Error::NotProjection);
        }
        CMatrix::identity(self.rows).sub(self)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<GaussianRational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        let mut m = rows;
        rref_in_place(&mut m).len()
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Deterministic: columns are scanned left to right and the first row with
/// a nonzero entry is chosen as pivot (no magnitude pivoting — arithmetic
/// is exact).
pub fn rref_in_place(m: &mut [Vec<GaussianRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        for x in m[rank].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                let delta = &factor * p;
                *x = &*x - &delta;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

/// Exact coefficients of `v` in `span(basis)`, or `None` when `v` is not in
/// the span. Free coordinates are fixed to zero, so the answer is unique
/// and deterministic even for linearly dependent spanning sets.
pub fn solve_linear_membership(
    v: &[GaussianRational],
    basis: &[Vec<GaussianRational>],
) -> Result<Option<Vec<GaussianRational>>> {
    let dim = v.len();
    for (idx, b) in basis.iter().enumerate() {
        if b.len() != dim {
            return Err(Error::Dimension(format!(
                "basis vector {idx} has length {}, expected {dim}",
                b.len()
            )));
        }
    }
    let k = basis.len();
    // augmented system: columns are the basis vectors, last column is v
    let mut m: Vec<Vec<GaussianRational>> = (0..dim)
        .map(|row| {
            let mut r: Vec<GaussianRational> =
                basis.iter().map(|b| b[row].clone()).collect();
            r.push(v[row].clone());
            r
        })
        .collect();
    let pivots = rref_in_place(&mut m);
    if pivots.contains(&k) {
        return Ok(None); // inconsistent: pivot in the augmented column
    }
    let mut coeffs = vec![GaussianRational::zero(); k];
    for (row, &col) in pivots.iter().enumerate() {
        coeffs[col] = m[row][k].clone();
    }
    Ok(Some(coeffs))
}

/// Span membership for matrices, via row-major flattening.
pub fn matrix_membership(m: &CMatrix, basis: &[CMatrix]) -> Result<Option<Vec<GaussianRational>>> {
    for b in basis {
        if b.rows() != m.rows() || b.cols() != m.cols() {
            return Err(Error::Dimension("span basis shape mismatch".into()));
        }
    }
    let flat: Vec<Vec<GaussianRational>> = basis.iter().map(|b| b.flatten()).collect();
    solve_linear_membership(&m.flatten(), &flat)
}

/// Basis of `{x : A x = 0}` for the matrix given as rows.
///
/// One basis vector per free column, in ascending column order: the free
/// coordinate is 1 and pivot coordinates are read off the reduced form.
pub fn nullspace(mut rows: Vec<Vec<GaussianRational>>) -> Vec<Vec<GaussianRational>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let pivots = rref_in_place(&mut rows);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![GaussianRational::zero(); cols];
        v[free] = GaussianRational::one();
        for (row, &pcol) in pivots.iter().enumerate() {
            v[pcol] = -&rows[row][free];
        }
        basis.push(v);
    }
    basis
}

/// Monic minimal polynomial of a square matrix, coefficients in ascending
/// degree order (last coefficient is 1).
///
/// Found as the first linear dependence among `I, a, a^2, ...` — exact and
/// degree at most `rows^2`, in practice at most `rows` for the
/// diagonalizable matrices this crate cares about.
pub fn min_poly(a: &CMatrix) -> Result<Vec<GaussianRational>> {
    if !a.is_square() {
        return Err(Error::Dimension("minimal polynomial of a non-square matrix".into()));
    }
    let mut powers: Vec<CMatrix> = vec![CMatrix::identity(a.rows())];
    loop {
        let next = powers.last().unwrap().mul(a)?;
        let flats: Vec<Vec<GaussianRational>> = powers.iter().map(|p| p.flatten()).collect();
        if let Some(coeffs) = solve_linear_membership(&next.flatten(), &flats)? {
            // a^d = sum coeffs[j] a^j  =>  x^d - sum coeffs[j] x^j
            let mut poly: Vec<GaussianRational> = coeffs.iter().map(|c| -c).collect();
            poly.push(GaussianRational::one());
            return Ok(poly);
        }
        powers.push(next);
    }
}

/// Demotes a polynomial with Gaussian-rational coefficients to rational
/// coefficients; errors if any coefficient has a nonzero imaginary part.
pub fn real_coefficients(poly: &[GaussianRational]) -> Result<Vec<Rational>> {
    poly.iter()
        .map(|c| {
            if c.is_real() {
                Ok(c.re.clone())
            } else {
                Err(Error::IrrationalSpectrum(
                    "polynomial has non-real coefficients".into(),
                ))
            }
        })
        .collect()
}

fn eval_poly(poly: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division of `poly` by `(x - r)`; requires `r` to be a root.
fn deflate(poly: &[Rational], r: &Rational) -> Vec<Rational> {
    let d = poly.len() - 1;
    let mut out = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for k in (0..d).rev() {
        carry = &poly[k + 1] + &(&carry * r);
        out[k] = carry.clone();
    }
    debug_assert!((&poly[0] + &(&carry * r)).is_zero(), "deflation by a non-root");
    out
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            large.push(&n / &d);
        }
        d += 1;
    }
    if small.last() == large.last() {
        large.pop();
    }
    large.reverse();
    small.extend(large);
    small
}

/// All rational roots of a nonzero rational polynomial, with multiplicity,
/// sorted ascending. Errors with [`Error::IrrationalSpectrum`] when the
/// polynomial does not split into rational linear factors.
pub fn rational_roots(poly: &[Rational]) -> Result<Vec<Rational>> {
    let mut poly: Vec<Rational> = poly.to_vec();
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    if poly.is_empty() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let mut roots = Vec::new();
    // factor out x^k
    while poly.len() > 1 && poly[0].is_zero() {
        roots.push(Rational::zero());
        poly.remove(0);
    }
    if poly.len() > 1 {
        // clear denominators and divide by content -> primitive integer poly
        let lcm_den = poly
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = poly
            .iter()
            .map(|c| (c * Rational::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        let a0 = ints[0].clone(); // nonzero: x factors were stripped
        let ad = ints.last().unwrap().clone();
        let mut candidates: Vec<Rational> = Vec::new();
        for q in positive_divisors(&ad) {
            for p in positive_divisors(&a0) {
                let c = Rational::new(p.clone(), q.clone());
                candidates.push(-&c);
                candidates.push(c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for cand in candidates {
            while poly.len() > 1 && eval_poly(&poly, &cand).is_zero() {
                roots.push(cand.clone());
                poly = deflate(&poly, &cand);
            }
        }
        if poly.len() > 1 {
            return Err(Error::IrrationalSpectrum(format!(
                "irreducible factor of degree {} remains",
                poly.len() - 1
            )));
        }
    }
    roots.sort();
    Ok(roots)
}

/// Exact spectral decomposition of a hermitian matrix with rational
/// spectrum: the ascending eigenvalues paired with their spectral
/// projections, obtained by Lagrange interpolation on the minimal
/// polynomial. Errors when the input is not hermitian or the spectrum is
/// not rational.
pub fn rational_eigen_decomposition(a: &CMatrix) -> Result<Vec<(Rational, CMatrix)>> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let mp = real_coefficients(&min_poly(a)?)?;
    let eigenvalues = rational_roots(&mp)?;
    // hermitian => diagonalizable => squarefree minimal polynomial
    debug_assert!(eigenvalues.windows(2).all(|w| w[0] != w[1]));
    let n = a.rows();
    let mut decomposition = Vec::with_capacity(eigenvalues.len());
    for lam in &eigenvalues {
        let mut proj = CMatrix::identity(n);
        for mu in &eigenvalues {
            if mu == lam {
                continue;
            }
            let shifted = a.sub(&CMatrix::identity(n).scale(&GaussianRational::from_rational(mu.clone())))?;
            let denom = GaussianRational::from_rational(lam - mu);
            proj = proj.mul(&shifted.scale(&denom.inv()?))?;
        }
        debug_assert!(proj.is_projection());
        decomposition.push((lam.clone(), proj));
    }
    debug_assert_eq!(
        decomposition
            .iter()
            .try_fold(CMatrix::zero(n, n), |acc, (_, p)| acc.add(p))
            .unwrap(),
        CMatrix::identity(n)
    );
    Ok(decomposition)
}
