use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactMatrix;
use crate::error::Result;

/// Smith normal form `U * M * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeNormalForm {
    /// Invariant factors `d_1 | d_2 | ...`, followed by zeros, of length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub left: ExactMatrix,
    pub right: ExactMatrix,
}

impl LatticeNormalForm {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

type Grid = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Grid {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_cols(m: &mut Grid, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[dst] -= f * row[src]`
fn row_axpy(m: &mut Grid, dst: usize, src: usize, f: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x -= f * y;
    }
}

/// `col[dst] -= f * col[src]`
fn col_axpy(m: &mut Grid, dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let v = f * &row[src];
        row[dst] -= v;
    }
}

/// Smallest absolute nonzero entry in the trailing block, ties to the least
/// (row, col).
fn pick_pivot(a: &Grid, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of an integer matrix together with the
/// unimodular transforms.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<LatticeNormalForm> {
    let mut a = m.integer_rows()?;
    let (n, q) = (m.rows(), m.cols());
    let mut u = identity(n);
    let mut v = identity(q);

    for t in 0..n.min(q) {
        while let Some((pi, pj)) = pick_pivot(&a, t) {
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..q {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let p = a[t][t].clone();
            let bad = (t + 1..n).find(|&i| (t + 1..q).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    let diagonal = (0..n.min(q)).map(|i| a[i][i].clone()).collect();
    Ok(LatticeNormalForm {
        diagonal,
        left: ExactMatrix::from_bigint_rows(&u)?,
        right: ExactMatrix::from_bigint_rows(&v)?,
    })
}

/// Invariant factors greater than one of `Z^n / ZA`, where `ZA` is spanned by
/// the columns of `A`.
pub fn torsion_of_quotient(a: &ExactMatrix) -> Result<Vec<BigInt>> {
    let snf = smith_normal_form(a)?;
    Ok(snf
        .diagonal
        .into_iter()
        .filter(|d| *d > BigInt::one())
        .collect())
}
