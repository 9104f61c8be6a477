use num_traits::ToPrimitive;

use crate::arith::{smith_normal_form, ExactMatrix};
use crate::error::{Error, Result};

/// Which lattice the lattice points of a cone are taken in.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Lattice {
    /// `Z^d`.
    #[default]
    Full,
    /// The group generated by the cone's generators.
    Generated,
    /// The group spanned by the given integer vectors (linearly independent).
    Basis(Vec<Vec<i64>>),
}

/// Integer coordinates on `L ∩ span(G)` for a lattice `L`.
///
/// `forward` sends a point of the ambient space to coordinates in `Z^rank`;
/// `inverse` is its left inverse on the lattice.
#[derive(Clone, Debug)]
pub(crate) struct LatticeEmbedding {
    pub ambient: usize,
    pub rank: usize,
    /// Rows of `U` from `U M V = D`; rows past `rank` cut out the span.
    rows: Vec<Vec<i64>>,
    /// Row divisors (the invariant factors for the generated lattice, else 1).
    divisors: Vec<i64>,
    /// Columns of the inverse map, one per coordinate.
    columns: Vec<Vec<i64>>,
    /// For a custom basis: the basis columns and their rank.
    basis: Option<(Vec<Vec<i64>>, ExactMatrix)>,
}

fn to_i64_rows(m: &ExactMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| {
                    x.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::resource("arithmetic_width", 64, "lattice transform entry exceeds 64 bits"))
                })
                .collect()
        })
        .collect()
}

impl LatticeEmbedding {
    pub fn new(ambient: usize, generators: &[Vec<i64>], lattice: &Lattice) -> Result<Self> {
        match lattice {
            Lattice::Full => Self::from_snf(ambient, generators, false),
            Lattice::Generated => Self::from_snf(ambient, generators, true),
            Lattice::Basis(b) => {
                let m = b.len();
                if b.iter().any(|v| v.len() != ambient) {
                    return Err(Error::domain("lattice basis vectors have the wrong length"));
                }
                if crate::arith::rank_i64(b, ambient) != m {
                    return Err(Error::domain("lattice basis is not linearly independent"));
                }
                let bm = ExactMatrix::from_columns_i64(ambient, b)?;
                let mut coords = Vec::with_capacity(generators.len());
                for g in generators {
                    let y = solve_integral(b, g).ok_or_else(|| {
                        Error::domain(format!("generator {g:?} does not lie in the lattice"))
                    })?;
                    coords.push(y);
                }
                let mut inner = Self::from_snf(m, &coords, false)?;
                inner.ambient = ambient;
                inner.basis = Some((b.clone(), bm));
                Ok(inner)
            }
        }
    }

    fn from_snf(ambient: usize, generators: &[Vec<i64>], generated: bool) -> Result<Self> {
        if generators.is_empty() {
            return Ok(LatticeEmbedding {
                ambient,
                rank: 0,
                rows: identity(ambient),
                divisors: vec![1; ambient],
                columns: Vec::new(),
                basis: None,
            });
        }
        let m = ExactMatrix::from_columns_i64(ambient, generators)?;
        let snf = smith_normal_form(&m)?;
        let rank = snf.rank();
        let u = to_i64_rows(&snf.left)?;
        let u_inv = snf
            .left
            .inverse()
            .ok_or_else(|| Error::soundness("unimodular transform is singular"))?;
        let u_inv = to_i64_rows(&u_inv)?;
        let mut divisors = vec![1i64; ambient];
        if generated {
            for (slot, f) in divisors.iter_mut().zip(&snf.diagonal).take(rank) {
                *slot = f
                    .to_i64()
                    .ok_or_else(|| Error::resource("arithmetic_width", 64, "invariant factor exceeds 64 bits"))?;
            }
        }
        let columns = (0..rank)
            .map(|j| (0..ambient).map(|i| u_inv[i][j] * divisors[j]).collect())
            .collect();
        Ok(LatticeEmbedding {
            ambient,
            rank,
            rows: u,
            divisors,
            columns,
            basis: None,
        })
    }

    /// Coordinates of `x`, or `None` if `x` is outside the lattice or the span.
    pub fn forward(&self, x: &[i64]) -> Option<Vec<i64>> {
        let owned;
        let x = match &self.basis {
            Some((b, _)) => {
                owned = solve_integral(b, x)?;
                &owned[..]
            }
            None => x,
        };
        let ux: Vec<i128> = self
            .rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum())
            .collect();
        if ux[self.rank..].iter().any(|&v| v != 0) {
            return None;
        }
        (0..self.rank)
            .map(|i| {
                let d = self.divisors[i] as i128;
                if ux[i] % d != 0 {
                    None
                } else {
                    i64::try_from(ux[i] / d).ok()
                }
            })
            .collect()
    }

    pub fn inverse(&self, y: &[i64]) -> Vec<i64> {
        let dim = self.columns.first().map_or(0, Vec::len);
        let mut x = vec![0i64; dim];
        for (c, &yi) in self.columns.iter().zip(y) {
            for (xi, &ci) in x.iter_mut().zip(c) {
                *xi += ci * yi;
            }
        }
        match &self.basis {
            Some((b, _)) => {
                let mut out = vec![0i64; self.ambient];
                for (bj, &xj) in b.iter().zip(&x) {
                    for (o, &v) in out.iter_mut().zip(bj) {
                        *o += v * xj;
                    }
                }
                out
            }
            None => x,
        }
    }

    /// Pulls a linear functional on coordinates back to the ambient space,
    /// scaled to be integral.
    #[cfg(test)]
    pub fn pull_back(&self, c: &[i64]) -> Vec<num_rational::BigRational> {
        use crate::arith::int;
        let mut f = vec![int(0); self.basis.as_ref().map_or(self.ambient, |(b, _)| b.len())];
        for (i, &ci) in c.iter().enumerate() {
            for (fj, &u) in f.iter_mut().zip(&self.rows[i]) {
                *fj += int(ci) * int(u) / int(self.divisors[i]);
            }
        }
        match &self.basis {
            Some((_, bm)) => {
                // f acts on basis coordinates; solve f = g B for g on the ambient space
                let bt = bm.transpose();
                let rows: Vec<Vec<num_rational::BigRational>> = (0..bt.rows()).map(|i| bt.row(i).to_vec()).collect();
                solve_rational_rows(&rows, &f, self.ambient)
            }
            None => f,
        }
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Integer coefficients `y` with `sum y_j b_j = x`, if any.
fn solve_integral(b: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
    let lambda = crate::arith::solve_in_span(b, x)?;
    lambda.iter().map(crate::arith::scalar_to_i64).collect()
}

/// Some `g` with `g . b_j = f_j` for the rows `b_j` of `B^T` given as columns of length `ambient`.
#[cfg(test)]
fn solve_rational_rows(
    bt_rows: &[Vec<num_rational::BigRational>],
    f: &[num_rational::BigRational],
    ambient: usize,
) -> Vec<num_rational::BigRational> {
    use crate::arith::row_echelon;
    // system: for each j, sum_i g_i B[i][j] = f_j, i.e. B^T g = f
    let rows: Vec<Vec<num_rational::BigRational>> = bt_rows
        .iter()
        .zip(f)
        .map(|(r, fj)| {
            let mut r = r.clone();
            r.push(fj.clone());
            r
        })
        .collect();
    let (rref, pivots) = row_echelon(rows, ambient + 1);
    let mut g = vec![crate::arith::int(0); ambient];
    for (r, &p) in pivots.iter().enumerate() {
        if p < ambient {
            g[p] = rref[r][ambient].clone();
        }
    }
    g
}
