//! Incremental double description for cones `{x : a_j . x >= 0}`.
//!
//! Arithmetic runs on `i64` with checked operations and transparently moves
//! to `BigInt` the first time a step would overflow.

use std::fmt::Debug;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

pub(crate) trait DdInt:
    Clone + Debug + Ord + Integer + Signed + CheckedAdd + CheckedMul + CheckedSub + Send + Sync
{
    fn to_big(&self) -> BigInt;
}

impl DdInt for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl DdInt for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn dot<T: DdInt>(a: &[T], b: &[T]) -> Option<T> {
    a.iter()
        .zip(b)
        .try_fold(T::zero(), |acc, (x, y)| acc.checked_add(&x.checked_mul(y)?))
}

fn make_primitive<T: DdInt>(v: &mut [T]) {
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = x.clone() / g.clone();
        }
    }
}

/// Primitive form of `alpha * x - beta * y`.
fn combine<T: DdInt>(alpha: &T, x: &[T], beta: &T, y: &[T]) -> Option<Vec<T>> {
    let mut out = Vec::with_capacity(x.len());
    for (xi, yi) in x.iter().zip(y) {
        out.push(alpha.checked_mul(xi)?.checked_sub(&beta.checked_mul(yi)?)?);
    }
    make_primitive(&mut out);
    Some(out)
}

#[derive(Clone, Debug)]
struct Ray<T> {
    v: Vec<T>,
    zeros: FixedBitSet,
}

#[derive(Clone, Debug)]
struct State<T> {
    dim: usize,
    ineqs: Vec<Vec<T>>,
    lineality: Vec<Vec<T>>,
    rays: Vec<Ray<T>>,
    rank_check: bool,
}

impl<T: DdInt> State<T> {
    fn new(dim: usize, rank_check: bool) -> Self {
        let lineality = (0..dim)
            .map(|i| {
                let mut e = vec![T::zero(); dim];
                e[i] = T::one();
                e
            })
            .collect();
        State {
            dim,
            ineqs: Vec::new(),
            lineality,
            rays: Vec::new(),
            rank_check,
        }
    }

    fn step(&self, a: &[T]) -> Option<State<T>> {
        let k = self.ineqs.len();
        let mut ineqs = self.ineqs.clone();
        ineqs.push(a.to_vec());

        let lin_dots: Vec<T> = self
            .lineality
            .iter()
            .map(|l| dot(a, l))
            .collect::<Option<_>>()?;

        if let Some(pos) = lin_dots.iter().position(|s| !s.is_zero()) {
            let (mut l0, mut s0) = (self.lineality[pos].clone(), lin_dots[pos].clone());
            if s0.is_negative() {
                l0 = l0.into_iter().map(|x| -x).collect();
                s0 = -s0;
            }
            let mut lineality = Vec::with_capacity(self.lineality.len() - 1);
            for (i, l) in self.lineality.iter().enumerate() {
                if i == pos {
                    continue;
                }
                if lin_dots[i].is_zero() {
                    lineality.push(l.clone());
                } else {
                    lineality.push(combine(&s0, l, &lin_dots[i], &l0)?);
                }
            }
            let mut rays = Vec::with_capacity(self.rays.len() + 1);
            for r in &self.rays {
                let s = dot(a, &r.v)?;
                let v = if s.is_zero() {
                    r.v.clone()
                } else {
                    combine(&s0, &r.v, &s, &l0)?
                };
                let mut zeros = r.zeros.clone();
                zeros.grow(k + 1);
                zeros.insert(k);
                rays.push(Ray { v, zeros });
            }
            let mut zeros = FixedBitSet::with_capacity(k + 1);
            zeros.insert_range(..k);
            make_primitive(&mut l0);
            rays.push(Ray { v: l0, zeros });
            return Some(State {
                dim: self.dim,
                ineqs,
                lineality,
                rays,
                rank_check: self.rank_check,
            });
        }

        let dots: Vec<T> = self
            .rays
            .iter()
            .map(|r| dot(a, &r.v))
            .collect::<Option<_>>()?;
        let mut rays = Vec::with_capacity(self.rays.len());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            let mut zeros = r.zeros.clone();
            zeros.grow(k + 1);
            if dots[i].is_zero() {
                zeros.insert(k);
            }
            if dots[i].is_positive() {
                pos.push(i);
            } else if dots[i].is_negative() {
                neg.push(i);
                continue;
            }
            rays.push(Ray {
                v: r.v.clone(),
                zeros,
            });
        }
        // a 2-face has codimension dim - lin - 2, which bounds its tight set from below
        let need = self.dim.saturating_sub(self.lineality.len() + 2);
        for &p in &pos {
            for &n in &neg {
                let (rp, rn) = (&self.rays[p], &self.rays[n]);
                if rp.zeros.intersection_count(&rn.zeros) < need {
                    continue;
                }
                let mut common = rp.zeros.clone();
                common.intersect_with(&rn.zeros);
                let adjacent = !self
                    .rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && common.is_subset(&r.zeros));
                if self.rank_check {
                    self.assert_rank_agrees(&common, adjacent);
                }
                if !adjacent {
                    continue;
                }
                let v = combine(&dots[p], &rn.v, &dots[n], &rp.v)?;
                common.grow(k + 1);
                common.insert(k);
                rays.push(Ray { v, zeros: common });
            }
        }
        Some(State {
            dim: self.dim,
            ineqs,
            lineality: self.lineality.clone(),
            rays,
            rank_check: self.rank_check,
        })
    }

    /// Algebraic adjacency: the tight constraints of the 2-face have rank
    /// `dim - lin - 2`.
    fn assert_rank_agrees(&self, common: &FixedBitSet, adjacent: bool) {
        let rows: Vec<Vec<i64>> = common
            .ones()
            .map(|j| {
                self.ineqs[j]
                    .iter()
                    .map(|x| x.to_big().to_i64().expect("rank check needs small entries"))
                    .collect()
            })
            .collect();
        let rank = crate::arith::rank_i64(&rows, self.dim);
        let by_rank = rank + self.lineality.len() + 2 == self.dim;
        assert_eq!(by_rank, adjacent, "combinatorial and rank adjacency tests disagree");
    }

    fn widen(&self) -> State<BigInt> {
        let conv = |v: &Vec<T>| v.iter().map(DdInt::to_big).collect::<Vec<_>>();
        State {
            dim: self.dim,
            ineqs: self.ineqs.iter().map(conv).collect(),
            lineality: self.lineality.iter().map(conv).collect(),
            rays: self
                .rays
                .iter()
                .map(|r| Ray {
                    v: conv(&r.v),
                    zeros: r.zeros.clone(),
                })
                .collect(),
            rank_check: self.rank_check,
        }
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Small(State<i64>),
    Big(State<BigInt>),
}

/// A cone `{x : a_j . x >= 0}` maintained as lineality space plus extreme
/// rays, with each ray's set of tight constraints.
#[derive(Clone, Debug)]
pub struct ConeDd {
    inner: Inner,
}

impl ConeDd {
    /// The whole space `R^dim`.
    pub fn new(dim: usize) -> Self {
        ConeDd {
            inner: Inner::Small(State::new(dim, false)),
        }
    }

    /// Also verifies every adjacency decision against the rank criterion.
    #[cfg(test)]
    pub(crate) fn with_rank_check(dim: usize) -> Self {
        ConeDd {
            inner: Inner::Small(State::new(dim, true)),
        }
    }

    pub fn from_inequalities(dim: usize, ineqs: &[Vec<BigInt>]) -> Self {
        let mut c = Self::new(dim);
        for a in ineqs {
            c.add(a);
        }
        c
    }

    pub fn from_inequalities_i64(dim: usize, ineqs: &[Vec<i64>]) -> Self {
        let mut c = Self::new(dim);
        for a in ineqs {
            c.add_i64(a);
        }
        c
    }

    pub fn dim(&self) -> usize {
        match &self.inner {
            Inner::Small(s) => s.dim,
            Inner::Big(s) => s.dim,
        }
    }

    /// Intersects with the half-space `a . x >= 0`.
    pub fn add(&mut self, a: &[BigInt]) {
        if let Inner::Small(s) = &self.inner {
            if let Some(small) = a.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() {
                if let Some(next) = s.step(&small) {
                    self.inner = Inner::Small(next);
                    return;
                }
            }
            self.inner = Inner::Big(s.widen());
        }
        if let Inner::Big(s) = &self.inner {
            let next = s.step(a).expect("big-integer arithmetic cannot overflow");
            self.inner = Inner::Big(next);
        }
    }

    pub fn add_i64(&mut self, a: &[i64]) {
        if let Inner::Small(s) = &self.inner {
            if let Some(next) = s.step(a) {
                self.inner = Inner::Small(next);
                return;
            }
        }
        let big: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        self.add(&big);
    }

    pub fn rays(&self) -> Vec<Vec<BigInt>> {
        match &self.inner {
            Inner::Small(s) => s.rays.iter().map(|r| r.v.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            Inner::Big(s) => s.rays.iter().map(|r| r.v.clone()).collect(),
        }
    }

    /// Rays as machine integers, if they all fit.
    pub fn rays_i64(&self) -> Option<Vec<Vec<i64>>> {
        match &self.inner {
            Inner::Small(s) => Some(s.rays.iter().map(|r| r.v.clone()).collect()),
            Inner::Big(s) => s
                .rays
                .iter()
                .map(|r| r.v.iter().map(ToPrimitive::to_i64).collect())
                .collect(),
        }
    }

    pub fn lineality(&self) -> Vec<Vec<BigInt>> {
        match &self.inner {
            Inner::Small(s) => s.lineality.iter().map(|l| l.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            Inner::Big(s) => s.lineality.clone(),
        }
    }

    pub fn lineality_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.lineality()
            .iter()
            .map(|l| l.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// For each ray, the indices of the constraints it satisfies with equality.
    pub fn ray_zero_sets(&self) -> Vec<FixedBitSet> {
        match &self.inner {
            Inner::Small(s) => s.rays.iter().map(|r| r.zeros.clone()).collect(),
            Inner::Big(s) => s.rays.iter().map(|r| r.zeros.clone()).collect(),
        }
    }

    pub fn constraint_count(&self) -> usize {
        match &self.inner {
            Inner::Small(s) => s.ineqs.len(),
            Inner::Big(s) => s.ineqs.len(),
        }
    }

    pub fn is_pointed(&self) -> bool {
        match &self.inner {
            Inner::Small(s) => s.lineality.is_empty(),
            Inner::Big(s) => s.lineality.is_empty(),
        }
    }

    pub fn is_big(&self) -> bool {
        matches!(self.inner, Inner::Big(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        v.sort();
        v
    }

    #[test]
    fn orthant() {
        let c = ConeDd::from_inequalities_i64(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(c.is_pointed());
        assert_eq!(
            sorted(c.rays_i64().unwrap()),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let c = ConeDd::from_inequalities_i64(2, &[vec![1, 1]]);
        assert_eq!(c.lineality().len(), 1);
        assert_eq!(c.rays().len(), 1);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // x3 >= |x1|, x3 >= |x2|
        let c = ConeDd::with_rank_check(3);
        let mut c = c;
        for a in [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]] {
            c.add_i64(&a);
        }
        assert_eq!(
            sorted(c.rays_i64().unwrap()),
            vec![vec![-1, -1, 1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, 1]]
        );
    }

    #[test]
    fn overflow_switches_to_big_integers() {
        let big = i64::MAX / 2;
        let mut c = ConeDd::new(2);
        c.add_i64(&[big, 1]);
        c.add_i64(&[1, big]);
        c.add_i64(&[big - 1, big - 3]);
        let rays = c.rays();
        for r in &rays {
            let ineqs = [[big, 1], [1, big], [big - 1, big - 3]];
            for a in ineqs {
                let v = BigInt::from(a[0]) * &r[0] + BigInt::from(a[1]) * &r[1];
                assert!(!v.is_negative());
            }
        }
        assert_eq!(rays.len(), 2);
    }

    /// Exhaustive oracle: extreme rays of a pointed cone are exactly the
    /// primitive solutions of rank-(d-1) tight subsystems that satisfy all
    /// constraints.
    fn brute_force_rays(dim: usize, ineqs: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let m = ineqs.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            let rows: Vec<Vec<crate::arith::ExactScalar>> = (0..m)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| ineqs[j].iter().map(|&x| crate::arith::int(x)).collect())
                .collect();
            let ker = crate::arith::kernel_basis(&rows, dim);
            if ker.len() != 1 {
                continue;
            }
            let k: Vec<i64> = ker[0].iter().map(|x| x.to_i64().unwrap()).collect();
            for sign in [1i64, -1] {
                let v: Vec<i64> = k.iter().map(|x| x * sign).collect();
                if ineqs.iter().all(|a| crate::arith::dot_i64(a, &v) >= 0) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn rays_match_brute_force(
            dim in 2usize..=4,
            raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 1..=7),
        ) {
            let mut ineqs: Vec<Vec<i64>> = raw.into_iter().map(|r| r[..dim].to_vec()).collect();
            // pointed by construction
            for i in 0..dim {
                let mut e = vec![0; dim];
                e[i] = 1;
                ineqs.push(e);
            }
            let mut c = ConeDd::with_rank_check(dim);
            for a in &ineqs {
                c.add_i64(a);
            }
            prop_assert!(c.is_pointed());
            let got = sorted(c.rays_i64().unwrap());
            prop_assert_eq!(got, brute_force_rays(dim, &ineqs));
            for (r, z) in c.rays_i64().unwrap().iter().zip(c.ray_zero_sets()) {
                for (j, a) in ineqs.iter().enumerate() {
                    prop_assert_eq!(crate::arith::dot_i64(a, r) == 0, z.contains(j));
                }
            }
        }

        #[test]
        fn general_cones_contain_their_generators(
            dim in 1usize..=4,
            raw in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 0..=6),
        ) {
            let ineqs: Vec<Vec<i64>> = raw.into_iter().map(|r| r[..dim].to_vec()).collect();
            let mut c = ConeDd::with_rank_check(dim);
            for a in &ineqs {
                c.add_i64(a);
            }
            let rays = c.rays_i64().unwrap();
            let lin = c.lineality_i64().unwrap();
            for a in &ineqs {
                for r in &rays {
                    prop_assert!(crate::arith::dot_i64(a, r) >= 0);
                }
                for l in &lin {
                    prop_assert_eq!(crate::arith::dot_i64(a, l), 0);
                }
            }
            // lineality plus rays span a space of the same dimension as the cone
            let mut all = rays.clone();
            all.extend(lin.iter().cloned());
            let cone_dim = crate::arith::rank_i64(&all, dim);
            let implicit: Vec<Vec<i64>> = ineqs
                .iter()
                .filter(|a| all.iter().all(|r| crate::arith::dot_i64(a, r) == 0))
                .cloned()
                .collect();
            prop_assert_eq!(cone_dim + crate::arith::rank_i64(&implicit, dim), dim);
        }
    }
}
