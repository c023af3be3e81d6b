//! Exact linear algebra over the rationals.
//!
//! Everything here works on dense `Vec<Q>` storage but skips zero entries in
//! the inner loops, which keeps the partial-permutation matrices that dominate
//! this crate cheap to multiply and eliminate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        QMatrix { rows: r, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i * columns.len() + j] = x.clone();
                }
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    t.set(j, i, x.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Block-diagonal sum.
    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let (r2, c2) = (other.rows, other.cols);
        let mut out = QMatrix::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let c = self.get(i, k);
                if c.is_zero() {
                    continue;
                }
                for j in 0..r2 {
                    for l in 0..c2 {
                        let d = other.get(j, l);
                        if !d.is_zero() {
                            out.set(i * r2 + j, k * c2 + l, c * d);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn direct_sum(blocks: &[&QMatrix]) -> QMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = QMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    let x = b.get(i, j);
                    if !x.is_zero() {
                        m.set(r0 + i, c0 + j, x.clone());
                    }
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Stack matrices with equal column count on top of each other.
    pub fn vstack(blocks: &[QMatrix]) -> QMatrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        QMatrix { rows, cols, data }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Q>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rref(&mut rows, self.cols).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Q>> {
        let mut rows: Vec<Vec<Q>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = rref(&mut rows, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(self.cols);
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                let x = &rows[r][free];
                if !x.is_zero() {
                    v[p] = -x.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn column_space(&self) -> Subspace {
        Subspace::from_vectors(self.rows, self.columns())
    }

    /// Solve `self * x = b` for one particular solution.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut rows: Vec<Vec<Q>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Some(x)
    }

    /// Inverse by Gauss-Jordan, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vec(n, i));
                r
            })
            .collect();
        let pivots = rref(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMatrix::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect(), n))
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| q_to_f64(self.get(i, j)))
    }
}

/// In-place reduced row echelon form. Zero rows are dropped; the returned
/// vector holds the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Vec<Q>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        if !inv.is_one() {
            for x in rows[rank].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (col..cols).filter(|&c| !rows[rank][c].is_zero()).collect();
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &c in &support {
                let delta = &factor * &pivot_row[c];
                row[c] -= delta;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// A linear subspace of `Q^n` held in reduced echelon form, so coordinates of
/// a member are read off at the pivot positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Q>>,
    {
        let mut rows: Vec<Vec<Q>> = vectors.into_iter().filter(|v| !is_zero_vec(v)).collect();
        let pivots = rref(&mut rows, ambient);
        Subspace { ambient, basis: rows, pivots }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: (0..n).map(|i| unit_vec(n, i)).collect(), pivots: (0..n).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates with respect to `basis()`, or `None` if `v` is not a member.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient);
        let c: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(&mut rest, &-ci.clone(), b);
        }
        is_zero_vec(&rest).then_some(c)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    pub fn embed(&self, coords: &[Q]) -> Vec<Q> {
        assert_eq!(coords.len(), self.dim());
        let mut v = zero_vec(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            axpy(&mut v, c, b);
        }
        v
    }

    /// Matrix (ambient x dim) mapping coordinates to ambient vectors.
    pub fn embedding_matrix(&self) -> QMatrix {
        QMatrix::from_columns(&self.basis, self.ambient)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Restrict a linear map on the ambient space to this subspace, expressed
    /// in coordinates of `target`. `None` if some image leaves `target`.
    pub fn restrict_map(&self, map: &QMatrix, target: &Subspace) -> Option<QMatrix> {
        let mut cols = Vec::with_capacity(self.dim());
        for b in &self.basis {
            cols.push(target.coords(&map.mul_vec(b))?);
        }
        Some(QMatrix::from_columns(&cols, target.dim()))
    }
}

/// Outcome of an exact positive-semidefiniteness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdOutcome {
    /// `P A Pᵀ = L D Lᵀ` with `D ≥ 0`; `rank` nonzero pivots.
    Psd { rank: usize, pivots: Vec<Q> },
    /// Elimination met a negative pivot, or a zero pivot with a nonzero
    /// off-diagonal entry in its row.
    NotPsd { step: usize, index: usize, value: Q },
}

impl PsdOutcome {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdOutcome::Psd { .. })
    }
}

/// Symmetric LDLᵀ with complete (diagonal) pivoting in exact arithmetic.
///
/// At each step the largest remaining diagonal entry is eliminated. Once all
/// remaining diagonal entries are `≤ 0`, the matrix is PSD iff the remaining
/// Schur complement vanishes.
pub fn ldlt_psd(m: &QMatrix) -> PsdOutcome {
    assert_eq!(m.rows(), m.cols(), "LDLᵀ needs a square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Q>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    for step in 0..n {
        let (pos, &best) =
            active.iter().enumerate().max_by(|(_, &x), (_, &y)| a[x][x].cmp(&a[y][y])).expect("active set is nonempty");
        let d = a[best][best].clone();
        if d.is_negative() {
            return PsdOutcome::NotPsd { step, index: best, value: d };
        }
        if d.is_zero() {
            for &i in &active {
                for &j in &active {
                    if !a[i][j].is_zero() {
                        return PsdOutcome::NotPsd { step, index: i, value: a[i][j].clone() };
                    }
                }
            }
            return PsdOutcome::Psd { rank: pivots.len(), pivots };
        }
        active.remove(pos);
        let col: Vec<(usize, Q)> =
            active.iter().filter(|&&i| !a[i][best].is_zero()).map(|&i| (i, &a[i][best] / &d)).collect();
        for (i, li) in &col {
            for &j in &active {
                let abj = &a[best][j];
                if !abj.is_zero() {
                    let delta = li * abj;
                    a[*i][j] -= delta;
                }
            }
        }
        pivots.push(d);
    }
    PsdOutcome::Psd { rank: pivots.len(), pivots }
}

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Divide by `(x - r)`, assuming `r` is a root.
    pub fn deflate(&self, r: &Q) -> QPoly {
        let n = self.0.len();
        if n <= 1 {
            return QPoly(vec![Q::one()]);
        }
        let mut out = vec![Q::zero(); n - 1];
        let mut carry = Q::zero();
        for k in (1..n).rev() {
            carry = &self.0[k] + carry * r;
            out[k - 1] = carry.clone();
        }
        QPoly(out)
    }

    /// Scale to a primitive integer polynomial with positive leading term.
    pub fn to_integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.to_integer_coeffs();
        let mut first = true;
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Minimal polynomial of a square matrix by Krylov iteration on its powers.
pub fn minimal_polynomial(m: &QMatrix) -> QPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut powers: Vec<Vec<Q>> = Vec::new();
    let mut current = QMatrix::identity(n);
    loop {
        powers.push(current.data.clone());
        let k = powers.len();
        // Dependency among I, M, ..., M^{k-1}?
        let basis = QMatrix::from_columns(&powers, n * n);
        let kernel = basis.null_space();
        if let Some(v) = kernel.into_iter().next() {
            let lead = v[k - 1].clone();
            if !lead.is_zero() {
                return QPoly(v.iter().map(|c| c / &lead).collect());
            }
        }
        current = current.mul(m);
        if k > n + 1 {
            unreachable!("Cayley-Hamilton bounds the minimal polynomial degree");
        }
    }
}

/// Rational roots of a polynomial among the given real approximations.
/// Each candidate is snapped to the nearest fraction with a small denominator
/// and then verified exactly.
pub fn certified_rational_roots(p: &QPoly, approx: &[f64]) -> Vec<Q> {
    let mut roots: Vec<Q> = Vec::new();
    for &x in approx {
        if !x.is_finite() {
            continue;
        }
        for r in rational_candidates(x) {
            if !roots.contains(&r) && p.eval(&r).is_zero() {
                roots.push(r);
                break;
            }
        }
    }
    roots.sort();
    roots
}

fn rational_candidates(x: f64) -> Vec<Q> {
    // Continued-fraction convergents of x up to a modest denominator.
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut frac = x;
    for _ in 0..40 {
        let a = frac.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        out.push(Q::new(h2.clone(), k2.clone()));
        if k2 > BigInt::from(1_000_000_000i64) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = frac - a;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    out
}

impl Subspace {
    /// Remainder of `v` after clearing the pivot positions with the basis.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut rest = v.to_vec();
        for (&p, b) in self.pivots.iter().zip(&self.basis) {
            let c = rest[p].clone();
            if !c.is_zero() {
                axpy(&mut rest, &-c, b);
            }
        }
        rest
    }

    /// Ambient positions that are not pivots; they index a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut cols: Vec<Vec<Q>> = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| b.iter().map(|x| -x.clone()).collect()));
        let m = QMatrix::from_columns(&cols, self.ambient);
        let vectors = m.null_space().into_iter().map(|x| {
            let mut v = zero_vec(self.ambient);
            for (c, b) in x.iter().zip(&self.basis) {
                axpy(&mut v, c, b);
            }
            v
        });
        Subspace::from_vectors(self.ambient, vectors.collect::<Vec<_>>())
    }
}

/// Real parts of the complex roots of `p`, via its companion matrix.
pub fn numeric_roots(p: &QPoly) -> Vec<f64> {
    let d = p.degree();
    if d == 0 {
        return Vec::new();
    }
    let lead = &p.0[d];
    let mut c = nalgebra::DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        c[(i, d - 1)] = -q_to_f64(&(&p.0[i] / lead));
    }
    c.complex_eigenvalues().iter().map(|z| z.re).collect()
}

/// The rational eigenvalues of `m` if its minimal polynomial splits over the
/// rationals; otherwise the non-split factor as witness.
pub fn rational_eigenvalues(m: &QMatrix) -> Result<Vec<Q>, QPoly> {
    let minpoly = minimal_polynomial(m);
    let roots = certified_rational_roots(&minpoly, &numeric_roots(&minpoly));
    let mut rest = minpoly;
    for r in &roots {
        while rest.degree() > 0 && rest.eval(r).is_zero() {
            rest = rest.deflate(r);
        }
    }
    if rest.degree() > 0 {
        return Err(rest);
    }
    Ok(roots)
}

pub fn eigenspace(m: &QMatrix, lambda: &Q) -> Subspace {
    let shifted = m.sub(&QMatrix::identity(m.rows()).scale(lambda));
    Subspace::from_vectors(m.rows(), shifted.null_space())
}

/// Split `space` into the joint eigenspaces of commuting operators that leave
/// it invariant. Fails with the witness polynomial when an operator does not
/// split over the rationals.
pub fn simultaneous_eigenspaces(ops: &[QMatrix], space: &Subspace) -> Result<Vec<Subspace>, QPoly> {
    let mut parts = vec![space.clone()];
    for op in ops {
        let mut next = Vec::new();
        for w in parts {
            let local = w.restrict_map(op, &w).expect("operators leave the space invariant");
            if local.is_zero() || local.is_identity() {
                next.push(w);
                continue;
            }
            for lambda in rational_eigenvalues(&local)? {
                let e = eigenspace(&local, &lambda);
                next.push(Subspace::from_vectors(
                    w.ambient_dim(),
                    e.basis().iter().map(|c| w.embed(c)).collect::<Vec<_>>(),
                ));
            }
        }
        parts = next;
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::from_vectors(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]]);
        assert_eq!(s.dim(), 2);
        let v = vec![q(2), q(5), q(3)];
        let c = s.coords(&v).unwrap();
        assert_eq!(s.embed(&c), v);
        assert!(s.coords(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(QMatrix::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn ldlt_accepts_psd_and_rejects_indefinite() {
        let ones = QMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(ldlt_psd(&ones), PsdOutcome::Psd { rank: 1, pivots: vec![q(1)] });
        let corner = QMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(ldlt_psd(&corner).is_psd());
        let indefinite = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(!ldlt_psd(&indefinite).is_psd());
        let negative = QMatrix::from_i64(&[&[1, 2], &[2, 1]]);
        assert!(!ldlt_psd(&negative).is_psd());
    }

    #[test]
    fn minimal_polynomial_of_cyclic_shift() {
        let shift = QMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let p = minimal_polynomial(&shift);
        assert_eq!(p, QPoly(vec![q(-1), q(0), q(0), q(1)]));
        let roots = certified_rational_roots(&p, &[1.0, -0.5]);
        assert_eq!(roots, vec![q(1)]);
        assert_eq!(p.deflate(&q(1)).to_string(), "x^2 + x + 1");
    }

    #[test]
    fn rational_root_snapping() {
        let p = QPoly(vec![qfrac(-1, 3), q(1)]);
        assert_eq!(certified_rational_roots(&p, &[0.333_333_333_3]), vec![qfrac(1, 3)]);
    }

    #[test]
    fn eigen_split_and_witness() {
        let shift = QMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let err = rational_eigenvalues(&shift).unwrap_err();
        assert_eq!(err.to_string(), "x^2 + x + 1");
        let diag = QMatrix::from_i64(&[&[2, 0, 0], &[0, -1, 0], &[0, 0, 2]]);
        assert_eq!(rational_eigenvalues(&diag).unwrap(), vec![q(-1), q(2)]);
        let parts = simultaneous_eigenspaces(&[diag], &Subspace::full(3)).unwrap();
        let mut dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }

    #[test]
    fn subspace_intersection_and_reduce() {
        let a = Subspace::from_vectors(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::from_vectors(3, vec![vec![q(1), q(1), q(1)], vec![q(0), q(1), q(0)]]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[q(0), q(3), q(0)]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert_eq!(a.reduce(&[q(4), q(5), q(6)]), vec![q(0), q(0), q(6)]);
        assert_eq!(a.complement_indices(), vec![2]);
    }
}
