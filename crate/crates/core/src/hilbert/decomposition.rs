use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::arith::{int, ExactScalar};
use crate::error::{Error, Result};
use crate::polyhedra::{dd_convert, PolyhedronRep};

/// Default cap on lattice points enumerated per dilation.
pub const DEFAULT_POINT_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionVerdict {
    pub verdict: bool,
    /// First `(k, a)` with `a` a lattice point of `kQ` that is not a sum of
    /// `k` lattice points of `Q`.
    pub counterexample: Option<(u32, Vec<i64>)>,
    pub k_max: u32,
}

fn box_points(lo: &[i64], hi: &[i64], cap: u64) -> Result<Vec<Vec<i64>>> {
    let mut count: u64 = 1;
    for (l, h) in lo.iter().zip(hi) {
        if h < l {
            return Ok(Vec::new());
        }
        count = count.saturating_mul((h - l + 1) as u64);
    }
    if count > cap {
        return Err(Error::resource(
            "lattice_point_cap",
            cap,
            format!("bounding box holds {count} lattice points"),
        ));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut x = lo.to_vec();
    loop {
        out.push(x.clone());
        let mut i = 0;
        while i < x.len() && x[i] == hi[i] {
            x[i] = lo[i];
            i += 1;
        }
        if i == x.len() {
            return Ok(out);
        }
        x[i] += 1;
    }
}

/// Lattice points of `kQ` in lexicographic order.
pub(crate) fn dilate_points(q: &PolyhedronRep, k: u32, cap: u64) -> Result<Vec<Vec<i64>>> {
    let d = q.ambient_dim;
    let kk = int(i64::from(k));
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for v in &q.vertices {
        for i in 0..d {
            let x: ExactScalar = &v[i] * &kk;
            let f = x.floor().to_integer().to_i64().ok_or_else(|| Error::resource("lattice_point_cap", cap, "coordinate too large"))?;
            let c = x.ceil().to_integer().to_i64().ok_or_else(|| Error::resource("lattice_point_cap", cap, "coordinate too large"))?;
            lo[i] = lo[i].min(f);
            hi[i] = hi[i].max(c);
        }
    }
    let pts = box_points(&lo, &hi, cap)?;
    Ok(pts
        .into_iter()
        .filter(|a| {
            let a: Vec<ExactScalar> = a.iter().map(|&x| int(x)).collect();
            q.inequalities
                .iter()
                .all(|h| crate::arith::dot(&h.normal, &a) <= &h.offset * &kk)
        })
        .collect())
}

/// Checks that for every `k <= k_max` each lattice point of `kQ` is a sum
/// of `k` lattice points of `Q`.
pub fn integer_decomposition_check(q: &PolyhedronRep, k_max: u32, cap: u64) -> Result<DecompositionVerdict> {
    let q = if q.vertices.is_empty() || q.inequalities.is_empty() {
        dd_convert(q)?
    } else {
        q.clone()
    };
    if !q.is_bounded() {
        return Err(Error::domain("integer decomposition needs a bounded polytope"));
    }
    let base = dilate_points(&q, 1, cap)?;
    let mut sums: BTreeSet<Vec<i64>> = base.iter().cloned().collect();
    for k in 1..=k_max {
        if k > 1 {
            let mut next = BTreeSet::new();
            for s in &sums {
                for p in &base {
                    next.insert(s.iter().zip(p).map(|(a, b)| a + b).collect::<Vec<_>>());
                }
                if next.len() as u64 > cap {
                    return Err(Error::resource("lattice_point_cap", cap, format!("too many {k}-fold sums")));
                }
            }
            sums = next;
        }
        for a in dilate_points(&q, k, cap)? {
            if !sums.contains(&a) {
                return Ok(DecompositionVerdict {
                    verdict: false,
                    counterexample: Some((k, a)),
                    k_max,
                });
            }
        }
    }
    Ok(DecompositionVerdict {
        verdict: true,
        counterexample: None,
        k_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, ExactMatrix};
    use crate::polyhedra::{antiblocker_from_matrix, packing_polytope};

    fn pts(v: &[&[i64]]) -> Vec<Vec<ExactScalar>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn unit_square() {
        let q = packing_polytope(&ExactMatrix::identity(2)).unwrap();
        let v = integer_decomposition_check(&q, 3, DEFAULT_POINT_CAP).unwrap();
        assert!(v.verdict);
    }

    #[test]
    fn pentagon_antiblocker() {
        let cols: Vec<Vec<i64>> = (0..5)
            .map(|k| {
                let mut c = vec![0; 5];
                c[k] = 1;
                c[(k + 1) % 5] = 1;
                c
            })
            .collect();
        let a = ExactMatrix::from_columns_i64(5, &cols).unwrap();
        let t = antiblocker_from_matrix(&a, 1000).unwrap();
        assert!(integer_decomposition_check(&t, 3, DEFAULT_POINT_CAP).unwrap().verdict);
    }

    #[test]
    fn reeve_tetrahedron_fails_at_two() {
        let q = PolyhedronRep::from_generators(3, pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]), vec![]);
        let v = integer_decomposition_check(&q, 3, DEFAULT_POINT_CAP).unwrap();
        assert!(!v.verdict);
        assert_eq!(v.counterexample, Some((2, vec![1, 1, 1])));
    }

    #[test]
    fn rational_segment_fails_at_two() {
        let q = PolyhedronRep::from_generators(1, vec![vec![int(0)], vec![frac(1, 2)]], vec![]);
        let v = integer_decomposition_check(&q, 2, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(v.counterexample, Some((2, vec![1])));
    }

    #[test]
    fn lattice_segment_has_the_property() {
        // conv{0, (1,2)} contains no other lattice point; neither does 2Q
        // besides 0, (1,2), (2,4)
        let q = PolyhedronRep::from_generators(2, pts(&[&[0, 0], &[1, 2]]), vec![]);
        assert!(integer_decomposition_check(&q, 3, DEFAULT_POINT_CAP).unwrap().verdict);
    }

    #[test]
    fn unbounded_input_rejected() {
        let q = PolyhedronRep::from_generators(1, vec![vec![int(0)]], vec![vec![num_bigint::BigInt::from(1)]]);
        assert!(matches!(integer_decomposition_check(&q, 2, 100), Err(Error::Domain(_))));
    }
}
