//! Dense exact matrices, minors, determinants and cofactors.
//!
//! Indices are 1-based throughout, matching vertex labels `1..=n`.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::text::{content_lines, parse_count};

/// Dense `n x n` matrix of exact rationals, row-major.
///
/// `n = 0` is allowed; it is what [`SquareMatrix::minor`] returns for a
/// `1 x 1` input.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    /// Builds a matrix from a 1-based entry function.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: r + 1,
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| scalar::from_int(rows[i - 1][j - 1]))
    }

    /// Reads the matrix file format: `n`, then `n` rows of `n` rationals.
    /// `#` comment lines and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing dimension".into(),
        })?;
        let n = parse_count(header, line)?;
        let mut rows = Vec::with_capacity(n);
        for (line, content) in lines {
            if rows.len() == n {
                return Err(Error::Parse {
                    line,
                    message: format!("more than {n} rows"),
                });
            }
            let row = content
                .split_whitespace()
                .map(|tok| scalar::parse_at(tok, line))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        let k = self.offset(i, j);
        self.entries[k] = value;
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index ({i}, {j}) out of range for {0}x{0} matrix",
            self.n
        );
        (i - 1) * self.n + (j - 1)
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if (1..=self.n).contains(&i) && (1..=self.n).contains(&j) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                n: self.n,
            })
        }
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        assert!((1..=self.n).contains(&i), "row {i} out of range");
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        // chunks(0) panics, and a 0x0 matrix has no rows anyway.
        self.entries.chunks(self.n.max(1))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.entry(j, i).clone())
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: &Scalar) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b * t)
            .collect();
        Ok(Self { n: self.n, entries })
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (i + 1..=self.n).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn row_sums(&self) -> Vec<Scalar> {
        self.rows().take(self.n).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Scalar> {
        (1..=self.n)
            .map(|j| (1..=self.n).map(|i| self.entry(i, j)).sum())
            .collect()
    }

    /// `M_ij`: delete row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i, j)?;
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for r in (1..=self.n).filter(|&r| r != i) {
            for c in (1..=self.n).filter(|&c| c != j) {
                entries.push(self.entry(r, c).clone());
            }
        }
        Ok(Self { n, entries })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled to integers by the lcm of its denominators;
    /// the product of those scales is divided back out at the end.
    pub fn determinant(&self) -> Scalar {
        let n = self.n;
        if n == 0 {
            return Scalar::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = self
            .rows()
            .map(|row| {
                let d = scalar::common_denominator(row);
                let ints = row
                    .iter()
                    .map(|x| x.numer() * (&d / x.denom()))
                    .collect();
                scale *= d;
                ints
            })
            .collect();

        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Scalar::zero(),
                }
            }
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in bottom.iter_mut() {
                for c in k + 1..n {
                    // Exact division: Sylvester's identity guarantees it.
                    row[c] = (&row[c] * pivot - &row[k] * &pivot_row[c]) / &prev;
                }
            }
            prev = pivot.clone();
        }
        let det = Scalar::new(a[n - 1][n - 1].clone(), scale);
        if negate {
            -det
        } else {
            det
        }
    }

    /// `C_ij = (-1)^(i+j) det M_ij`.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<Scalar> {
        let det = self.minor(i, j)?.determinant();
        Ok(scalar::sign_power(i + j) * det)
    }

    /// Computes all `n^2` cofactors and returns their common value, or the
    /// first pair (in row-major order) that disagrees.
    pub fn uniform_cofactor(&self) -> Result<Scalar> {
        if self.n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        let reference = self.cofactor(1, 1)?;
        for i in 1..=self.n {
            for j in 1..=self.n {
                let c = self.cofactor(i, j)?;
                if c != reference {
                    return Err(Error::CofactorMismatch {
                        first: (1, 1, scalar::format(&reference)),
                        second: (i, j, scalar::format(&c)),
                    });
                }
            }
        }
        Ok(reference)
    }

    fn check_zero_row_sums(&self) -> Result<()> {
        for (i, s) in self.row_sums().iter().enumerate() {
            if !s.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "row {} sums to {}",
                    i + 1,
                    s
                )));
            }
        }
        Ok(())
    }

    fn check_zero_col_sums(&self) -> Result<()> {
        for (j, s) in self.col_sums().iter().enumerate() {
            if !s.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "column {} sums to {}",
                    j + 1,
                    s
                )));
            }
        }
        Ok(())
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if self.entry(i, j) != self.entry(j, i) {
                    return Err(Error::InvariantViolation(format!(
                        "entry ({i}, {j}) = {} differs from ({j}, {i}) = {}",
                        self.entry(i, j),
                        self.entry(j, i)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_laplace_like(&self) -> bool {
        self.check_symmetric().is_ok() && self.check_zero_row_sums().is_ok()
    }

    pub fn is_doubly_balanced(&self) -> bool {
        self.check_zero_row_sums().is_ok() && self.check_zero_col_sums().is_ok()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = Scalar;

    /// 1-based `(row, column)`.
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        self.entry(i, j)
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .take(self.n)
            .map(|r| r.iter().map(scalar::format).collect())
            .collect();
        write!(f, "SquareMatrix{rows:?}")
    }
}

/// Matrix file format: `n`, then `n` whitespace-separated rows.
impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for row in self.rows().take(self.n) {
            let cells: Vec<String> = row.iter().map(scalar::format).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Symmetric matrix with every row summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplaceLikeMatrix(SquareMatrix);

impl LaplaceLikeMatrix {
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        matrix.check_symmetric()?;
        matrix.check_zero_row_sums()?;
        Ok(Self(matrix))
    }

    /// Builds `L` from its strict upper triangle, given row by row:
    /// `(1,2), (1,3), ..., (1,n), (2,3), ...`. The diagonal is the negated
    /// off-diagonal row sum.
    pub fn from_upper_triangle(n: usize, upper: &[Scalar]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        if upper.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: upper.len(),
            });
        }
        let mut m = SquareMatrix::zeros(n);
        let mut values = upper.iter();
        for i in 1..=n {
            for j in i + 1..=n {
                let v = values.next().expect("length checked").clone();
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        for i in 1..=n {
            let off: Scalar = (1..=n).filter(|&j| j != i).map(|j| m.entry(i, j)).sum();
            m.set(i, i, -off);
        }
        Self::new(m)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(SquareMatrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    /// `C(L)`, read off as `C_11`.
    pub fn common_cofactor(&self) -> Scalar {
        self.0.cofactor(1, 1).expect("n >= 1")
    }

    /// `C(L)` after computing and comparing all `n^2` cofactors.
    pub fn common_cofactor_checked(&self) -> Result<Scalar> {
        self.0.uniform_cofactor()
    }
}

impl AsRef<SquareMatrix> for LaplaceLikeMatrix {
    fn as_ref(&self) -> &SquareMatrix {
        &self.0
    }
}

/// Zero row sums and zero column sums; symmetry not required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublyBalancedMatrix(SquareMatrix);

impl DoublyBalancedMatrix {
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        matrix.check_zero_row_sums()?;
        matrix.check_zero_col_sums()?;
        Ok(Self(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }

    pub fn common_cofactor(&self) -> Scalar {
        self.0.cofactor(1, 1).expect("n >= 1")
    }

    pub fn common_cofactor_checked(&self) -> Result<Scalar> {
        self.0.uniform_cofactor()
    }
}

impl AsRef<SquareMatrix> for DoublyBalancedMatrix {
    fn as_ref(&self) -> &SquareMatrix {
        &self.0
    }
}

impl From<LaplaceLikeMatrix> for DoublyBalancedMatrix {
    fn from(l: LaplaceLikeMatrix) -> Self {
        Self(l.0)
    }
}
