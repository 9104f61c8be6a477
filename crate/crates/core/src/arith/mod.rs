//! Exact scalars, dense matrices and integer lattice normal forms.
//!
//! Everything in the crate is computed over the integers or the rationals;
//! floating point never enters a decision path.

mod snf;

pub use snf::{smith_normal_form, torsion_of_quotient, LatticeNormalForm};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

pub fn int(v: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_scalar(v: &ExactScalar) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn scalar_to_i64(v: &ExactScalar) -> Option<i64> {
    if v.is_integer() {
        v.numer().to_i64()
    } else {
        None
    }
}

pub fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter().zip(b).fold(ExactScalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_mixed(a: &[ExactScalar], b: &[i64]) -> ExactScalar {
    a.iter()
        .zip(b)
        .fold(ExactScalar::zero(), |acc, (x, &y)| acc + x * BigInt::from(y))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Divides out the content of an integer vector; the zero vector is left alone.
pub fn make_primitive_i64(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Least common multiple of the denominators of a rational vector.
pub fn denominator_lcm(v: &[ExactScalar]) -> BigInt {
    v.iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Scales a rational vector to the unique primitive integer vector with the
/// same direction.
pub fn primitive_integer_vector(v: &[ExactScalar]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = out.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in out.iter_mut() {
            *x = &*x / &g;
        }
    }
    out
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_scalar).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(ExactMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged matrix rows"));
        }
        let entries = rows.iter().flatten().map(|&x| int(x)).collect();
        Self::new(rows.len(), cols, entries)
    }

    /// Builds the `n x q` matrix whose columns are the given vectors.
    pub fn from_columns_i64(n: usize, columns: &[Vec<i64>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::domain(format!("every column must have length {n}")));
        }
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, int(x));
            }
        }
        Ok(m)
    }

    pub fn from_bigint_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged matrix rows"));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return Err(Error::domain("matrix has a non-integer entry"));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_integer()).collect())
            .collect())
    }

    /// Columns as machine integers; fails on fractional or oversized entries.
    pub fn integer_columns(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| {
                        scalar_to_i64(self.get(i, j)).ok_or_else(|| {
                            Error::domain(format!(
                                "entry ({}, {}) = {} is not a machine integer",
                                i + 1,
                                j + 1,
                                fmt_scalar(self.get(i, j))
                            ))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks the standing hypotheses on an input matrix `A`: entries are
    /// non-negative integers and no row or column is zero.
    pub fn validate_input(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::domain("input matrix must be non-empty"));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_integer() || x.is_negative() {
                    return Err(Error::domain(format!(
                        "entry ({}, {}) = {} is not a non-negative integer",
                        i + 1,
                        j + 1,
                        fmt_scalar(x)
                    )));
                }
            }
        }
        if let Some(i) = (0..self.rows).find(|&i| self.row(i).iter().all(Zero::is_zero)) {
            return Err(Error::domain(format!("row {} is zero", i + 1)));
        }
        if let Some(j) = (0..self.cols).find(|&j| (0..self.rows).all(|i| self.get(i, j).is_zero())) {
            return Err(Error::domain(format!("column {} is zero", j + 1)));
        }
        Ok(())
    }

    pub fn is_zero_one(&self) -> bool {
        self.entries
            .iter()
            .all(|x| x.is_zero() || x.is_one())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<ExactScalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        row_echelon(rows, self.cols).1.len()
    }

    /// Inverse over the rationals, if square and non-singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !aug[r][c].is_zero())?;
            aug.swap(c, p);
            let inv = aug[c][c].recip();
            for x in aug[c].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = aug[c].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x -= p * &f;
                    }
                }
            }
        }
        let entries = aug.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        ExactMatrix::new(n, n, entries).ok()
    }
}

/// Reduced row echelon form. Returns the reduced rows and the pivot columns.
pub(crate) fn row_echelon(
    mut rows: Vec<Vec<ExactScalar>>,
    cols: usize,
) -> (Vec<Vec<ExactScalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : Mx = 0}` for the given rows, as primitive integer vectors.
pub(crate) fn kernel_basis(rows: &[Vec<ExactScalar>], cols: usize) -> Vec<Vec<BigInt>> {
    let (rref, pivots) = row_echelon(rows.to_vec(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); cols];
            v[f] = ExactScalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref[r][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

/// Rank of a set of integer vectors.
pub fn rank_i64(vectors: &[Vec<i64>], dim: usize) -> usize {
    let rows: Vec<Vec<ExactScalar>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| int(x)).collect())
        .collect();
    row_echelon(rows, dim).1.len()
}

/// Solves `x = sum_i lambda_i g_i` for linearly independent `g_i`; returns
/// `None` when `x` is outside their span.
pub(crate) fn solve_in_span(gens: &[Vec<i64>], x: &[i64]) -> Option<Vec<ExactScalar>> {
    let d = x.len();
    let k = gens.len();
    // rows: coordinates; columns: generators | rhs
    let rows: Vec<Vec<ExactScalar>> = (0..d)
        .map(|i| {
            let mut r: Vec<ExactScalar> = gens.iter().map(|g| int(g[i])).collect();
            r.push(int(x[i]));
            r
        })
        .collect();
    let (rref, pivots) = row_echelon(rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut lambda = vec![ExactScalar::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        lambda[p] = rref[r][k].clone();
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_canonical_form() {
        let x = frac(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(fmt_scalar(&x), "-3/2");
        assert_eq!(fmt_scalar(&frac(0, 7)), "0");
        assert_eq!(frac(0, 7).denom(), &BigInt::from(1));
    }

    #[test]
    fn validate_rejects_zero_rows_and_columns() {
        let a = ExactMatrix::from_rows_i64(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(matches!(a.validate_input(), Err(Error::Domain(m)) if m.contains("row 2")));
        let b = ExactMatrix::from_rows_i64(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert!(matches!(b.validate_input(), Err(Error::Domain(m)) if m.contains("column 2")));
        let c = ExactMatrix::from_rows_i64(&[vec![1, -1], vec![1, 1]]).unwrap();
        assert!(c.validate_input().is_err());
    }

    #[test]
    fn inverse_and_rank() {
        let m = ExactMatrix::from_rows_i64(&[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2));
        let s = ExactMatrix::from_rows_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.rank(), 1);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn kernel_of_c4_incidence_transpose() {
        // x A = 0 for the 4-cycle: alternating signs
        let a = ExactMatrix::from_columns_i64(4, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 1]])
            .unwrap();
        let t = a.transpose();
        let rows: Vec<Vec<ExactScalar>> = (0..t.rows()).map(|i| t.row(i).to_vec()).collect();
        let k = kernel_basis(&rows, 4);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == vec![1, -1, 1, -1] || v == vec![-1, 1, -1, 1]);
    }

    #[test]
    fn primitive_vector_from_rationals() {
        let v = vec![frac(1, 2), frac(1, 3), int(0)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(2), BigInt::from(0)]);
        assert_eq!(denominator_lcm(&v), BigInt::from(6));
    }
}
