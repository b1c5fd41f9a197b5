//! Exact integer linear algebra: Hermite and Smith normal forms, lattices in
//! `Z^n` and the structure of lattice quotients.
//!
//! Everything here works over [`BigInt`]; there is no floating point and no
//! modular shortcut anywhere in the module.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice inclusion violated: basis vector {vector:?} of the small lattice is not in the big lattice")]
    NotSublattice { vector: Vec<BigInt> },
    #[error("{0} is not prime")]
    NotPrime(BigInt),
}

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(rows: usize, columns: &[Vec<T>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    got: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        Ok(m)
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m[(ii, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self[(r, src)] * factor;
            self[(r, dst)] += v;
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self[(src, c)] * factor;
            self[(dst, c)] += v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// Replaces columns `(a, b)` by `(a*p + b*q, a*r + b*s)`; unimodular when `ps - qr = ±1`.
    fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = self[(i, a)].clone();
            let y = self[(i, b)].clone();
            self[(i, a)] = &x * p + &y * q;
            self[(i, b)] = &x * r + &y * s;
        }
    }

    /// Replaces rows `(a, b)` by `(p*a + q*b, r*a + s*b)`.
    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for j in 0..self.cols {
            let x = self[(a, j)].clone();
            let y = self[(b, j)].clone();
            self[(a, j)] = p * &x + q * &y;
            self[(b, j)] = r * &x + s * &y;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

/// Column Hermite normal form. Returns `(h, u)` with `m * u = h`, `u` unimodular.
///
/// Shape of `h`: the first `rank` columns are nonzero; column `j` has its pivot
/// (first nonzero entry) at a row strictly below the pivot of column `j - 1`;
/// pivots are positive and every entry to the left of a pivot lies in
/// `[0, pivot)`. The trailing columns are zero.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols);
    let mut k = 0;
    for i in 0..m.rows {
        if k == m.cols {
            break;
        }
        // gcd-eliminate row i across columns k..
        for j in k + 1..m.cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, k)].clone();
            let b = h[(i, j)].clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            // [col_k col_j] * [[x, -b/g], [y, a/g]] has determinant 1
            let p = eg.x;
            let q = eg.y;
            let r = -(&b / &g);
            let s = &a / &g;
            h.combine_cols(k, j, &p, &q, &r, &s);
            u.combine_cols(k, j, &p, &q, &r, &s);
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
            u.negate_col(k);
        }
        let pivot = h[(i, k)].clone();
        for j in 0..k {
            let f = h[(i, j)].div_floor(&pivot);
            if !f.is_zero() {
                let nf = -f;
                h.add_col_multiple(j, k, &nf);
                u.add_col_multiple(j, k, &nf);
            }
        }
        k += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(s, u, v)` with `u * m * v = s`, `u` and `v`
/// unimodular, `s` diagonal with nonnegative entries `d1 | d2 | ...`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let lim = m.rows.min(m.cols);
    let mut t = 0;
    while t < lim {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..m.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(i, t)].clone();
                if b.is_multiple_of(&a) {
                    let f = -(&b / &a);
                    s.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                } else {
                    let eg = a.extended_gcd(&b);
                    let g = eg.gcd;
                    let (p, q, r, sc) = (eg.x, eg.y, -(&b / &g), &a / &g);
                    s.combine_rows(t, i, &p, &q, &r, &sc);
                    u.combine_rows(t, i, &p, &q, &r, &sc);
                    dirty = true;
                }
            }
            for j in t + 1..m.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(t, j)].clone();
                if b.is_multiple_of(&a) {
                    let f = -(&b / &a);
                    s.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                } else {
                    let eg = a.extended_gcd(&b);
                    let g = eg.gcd;
                    let (p, q, r, sc) = (eg.x, eg.y, -(&b / &g), &a / &g);
                    s.combine_cols(t, j, &p, &q, &r, &sc);
                    v.combine_cols(t, j, &p, &q, &r, &sc);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// A subgroup of `Z^n`, stored as the nonzero columns of its column HNF.
///
/// Two lattices are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
    pivot_rows: Vec<usize>,
}

impl Lattice {
    pub fn zero(ambient_dim: usize) -> Self {
        Lattice {
            ambient_dim,
            basis: IntMatrix::zeros(ambient_dim, 0),
            pivot_rows: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_hnf(&IntMatrix::identity(ambient_dim))
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let (h, _) = hnf(m);
        Self::from_hnf(&h)
    }

    fn from_hnf(h: &IntMatrix) -> Self {
        let mut pivot_rows = Vec::new();
        let mut row = 0;
        for j in 0..h.cols() {
            while row < h.rows() && h[(row, j)].is_zero() {
                row += 1;
            }
            if row == h.rows() {
                break;
            }
            pivot_rows.push(row);
            row += 1;
        }
        let rank = pivot_rows.len();
        let cols: Vec<usize> = (0..rank).collect();
        Lattice {
            ambient_dim: h.rows(),
            basis: h.select_columns(&cols),
            pivot_rows,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Basis vectors as matrix columns, in canonical HNF.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    /// Coefficients `c` with `basis * c = v`, or `None` when `v` is not in the lattice.
    pub fn contains(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let mut residual = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (j, &p) in self.pivot_rows.iter().enumerate() {
            // residual is zero above row p by the echelon shape
            if residual[..p].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let pivot = &self.basis[(p, j)];
            let (c, rem) = residual[p].div_rem(pivot);
            if !rem.is_zero() {
                return Ok(None);
            }
            if !c.is_zero() {
                for (i, r) in residual.iter_mut().enumerate().skip(p) {
                    *r -= &c * &self.basis[(i, j)];
                }
            }
            coeffs.push(c);
        }
        if residual.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coeffs))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool, LinalgError> {
        for v in other.basis_vectors() {
            if self.contains(&v)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lattice spanned by the given vectors of length `ambient_dim`.
pub fn lattice_from_generators<T: Into<BigInt> + Clone>(
    ambient_dim: usize,
    vectors: &[Vec<T>],
) -> Result<Lattice, LinalgError> {
    let m = IntMatrix::from_columns(ambient_dim, vectors)?;
    Ok(Lattice::from_matrix(&m))
}

pub fn lattice_contains(l: &Lattice, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    l.contains(v)
}

/// Integer coefficients expressing `v` in terms of the generators themselves
/// (not the HNF basis), if `v` lies in their span.
pub fn express_in_generators<T: Into<BigInt> + Clone>(
    ambient_dim: usize,
    generators: &[Vec<T>],
    v: &[BigInt],
) -> Result<Option<Vec<BigInt>>, LinalgError> {
    let m = IntMatrix::from_columns(ambient_dim, generators)?;
    let (h, u) = hnf(&m);
    let l = Lattice::from_hnf(&h);
    let Some(c) = l.contains(v)? else {
        return Ok(None);
    };
    // m * u = h, so v = h[:, ..rank] c = m * (u[:, ..rank] c)
    let cols: Vec<usize> = (0..l.rank()).collect();
    Ok(Some(u.select_columns(&cols).mul_vec(&c)?))
}

/// Structure of `big / small` for lattices `small ⊆ big`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure {
    pub free_rank_defect: usize,
    /// Nontrivial invariant factors (all ≥ 2), each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn is_finite(&self) -> bool {
        self.free_rank_defect == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank_defect == 0 && self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }
}

/// Computes `big / small`. The small lattice's basis is expressed in the big
/// lattice's basis coordinates and the invariant factors are read off its SNF.
pub fn lattice_quotient(big: &Lattice, small: &Lattice) -> Result<QuotientStructure, LinalgError> {
    if big.ambient_dim != small.ambient_dim {
        return Err(LinalgError::DimensionMismatch {
            expected: big.ambient_dim,
            got: small.ambient_dim,
        });
    }
    let mut coords = Vec::with_capacity(small.rank());
    for v in small.basis_vectors() {
        match big.contains(&v)? {
            Some(c) => coords.push(c),
            None => return Err(LinalgError::NotSublattice { vector: v }),
        }
    }
    let free_rank_defect = big.rank() - small.rank();
    let cm = IntMatrix::from_columns(big.rank(), &coords)?;
    let (s, _, _) = snf(&cm);
    let invariant_factors = (0..s.rows().min(s.cols()))
        .map(|i| s[(i, i)].clone())
        .filter(|d| d > &BigInt::one())
        .collect();
    Ok(QuotientStructure {
        free_rank_defect,
        invariant_factors,
    })
}

pub fn is_prime(p: &BigInt) -> bool {
    if p < &BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *p {
        if p.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether `n > 0` is a power of `p` (including `p^0 = 1`).
pub fn is_power_of(n: &BigInt, p: &BigInt) -> bool {
    if !n.is_positive() {
        return false;
    }
    let mut n = n.clone();
    while n.is_multiple_of(p) {
        n /= p;
    }
    n.is_one()
}

/// True iff the quotient is finite and every invariant factor is a power of `p`.
pub fn is_finite_p_group(q: &QuotientStructure, p: &BigInt) -> Result<bool, LinalgError> {
    if !is_prime(p) {
        return Err(LinalgError::NotPrime(p.clone()));
    }
    Ok(q.is_finite() && q.invariant_factors.iter().all(|d| is_power_of(d, p)))
}

/// Minimal number of generators of `Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dt`.
pub fn abelian_group_rank<T: Into<BigInt> + Clone>(free_rank: usize, torsion_orders: &[T]) -> usize {
    let (s, _, _) = snf(&IntMatrix::diagonal(torsion_orders));
    let torsion_rank = (0..s.rows()).filter(|&i| s[(i, i)] > BigInt::one()).count();
    free_rank + torsion_rank
}

/// Invariant factors (≥ 2, divisibility order) of `Z/d1 ⊕ ... ⊕ Z/dt`.
pub fn torsion_invariant_factors<T: Into<BigInt> + Clone>(torsion_orders: &[T]) -> Vec<BigInt> {
    let (s, _, _) = snf(&IntMatrix::diagonal(torsion_orders));
    (0..s.rows())
        .map(|i| s[(i, i)].clone())
        .filter(|d| d > &BigInt::one())
        .collect()
}

/// Checks the canonical column HNF shape described on [`hnf`].
pub fn is_column_hnf(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for j in 0..h.cols() {
        let pivot = (0..h.rows()).find(|&i| !h[(i, j)].is_zero());
        match pivot {
            None => seen_zero = true,
            Some(p) => {
                if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !h[(p, j)].is_positive() {
                    return false;
                }
                for jj in 0..j {
                    let x = &h[(p, jj)];
                    if x.is_negative() || x >= &h[(p, j)] {
                        return false;
                    }
                }
                last_pivot = Some(p);
            }
        }
    }
    true
}
