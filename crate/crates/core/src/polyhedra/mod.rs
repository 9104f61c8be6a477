//! Rational polyhedra in both representations, and the packing, covering,
//! antiblocking and blocking polyhedra attached to a non-negative matrix.

mod dd;

pub use dd::ConeDd;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{dot, int, primitive_integer_vector, ExactMatrix, ExactScalar};
use crate::error::{Error, Result};

/// Default cap on the number of down-set vectors materialized.
pub const DEFAULT_DOWN_SET_CAP: u64 = 200_000;

/// The half-space `<normal, x> <= offset`, stored as a primitive integer row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub normal: Vec<ExactScalar>,
    pub offset: ExactScalar,
}

impl Inequality {
    /// Scales `(normal, offset)` to the unique primitive integer multiple.
    pub fn new(normal: Vec<ExactScalar>, offset: ExactScalar) -> Self {
        let mut all = normal;
        all.push(offset);
        let p = primitive_integer_vector(&all);
        let mut normal: Vec<ExactScalar> = p.into_iter().map(BigRational::from_integer).collect();
        let offset = normal.pop().unwrap();
        Inequality { normal, offset }
    }

    pub fn from_i64(normal: &[i64], offset: i64) -> Self {
        Self::new(normal.iter().map(|&x| int(x)).collect(), int(offset))
    }

    pub fn holds(&self, x: &[ExactScalar]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    pub fn is_tight(&self, x: &[ExactScalar]) -> bool {
        dot(&self.normal, x) == self.offset
    }

    fn is_trivial(&self) -> bool {
        self.normal.iter().all(Zero::is_zero) && !self.offset.is_negative()
    }
}

/// A rational polyhedron `conv(vertices) + cone(rays) + span(lines)`, also
/// described by its inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronRep {
    pub ambient_dim: usize,
    pub inequalities: Vec<Inequality>,
    pub vertices: Vec<Vec<ExactScalar>>,
    pub rays: Vec<Vec<BigInt>>,
    pub lines: Vec<Vec<BigInt>>,
}

impl PolyhedronRep {
    pub fn from_inequalities(ambient_dim: usize, inequalities: Vec<Inequality>) -> Self {
        PolyhedronRep {
            ambient_dim,
            inequalities,
            vertices: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn from_generators(
        ambient_dim: usize,
        vertices: Vec<Vec<ExactScalar>>,
        rays: Vec<Vec<BigInt>>,
    ) -> Self {
        PolyhedronRep {
            ambient_dim,
            inequalities: Vec::new(),
            vertices,
            rays,
            lines: Vec::new(),
        }
    }

    /// Meaningful only once the generator side is populated.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// Membership via the inequality side.
    pub fn contains(&self, x: &[ExactScalar]) -> bool {
        self.inequalities.iter().all(|h| h.holds(x))
    }

    pub fn contains_i64(&self, x: &[i64]) -> bool {
        let x: Vec<ExactScalar> = x.iter().map(|&v| int(v)).collect();
        self.contains(&x)
    }

    fn check_dims(&self) -> Result<()> {
        let d = self.ambient_dim;
        let bad = self.inequalities.iter().any(|h| h.normal.len() != d)
            || self.vertices.iter().any(|v| v.len() != d)
            || self.rays.iter().any(|v| v.len() != d)
            || self.lines.iter().any(|v| v.len() != d);
        if bad {
            return Err(Error::domain(format!(
                "polyhedron data does not live in dimension {d}"
            )));
        }
        Ok(())
    }
}

fn canonical_inequalities(mut ineqs: Vec<Inequality>) -> Vec<Inequality> {
    ineqs.retain(|h| !h.is_trivial());
    ineqs.sort();
    ineqs.dedup();
    ineqs
}

fn canonical_points(mut pts: Vec<Vec<ExactScalar>>) -> Vec<Vec<ExactScalar>> {
    pts.sort();
    pts.dedup();
    pts
}

fn canonical_rays(mut rays: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    rays.sort();
    rays.dedup();
    rays
}

/// Homogenizes `<n, x> <= b` to `b t - <n, x> >= 0` over `(x, t)`.
fn homogenized_rows(dim: usize, ineqs: &[Inequality]) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::with_capacity(ineqs.len() + 1);
    let mut t = vec![BigInt::zero(); dim + 1];
    t[dim] = BigInt::one();
    rows.push(t);
    for h in ineqs {
        // canonical inequalities are integral
        let mut r: Vec<BigInt> = h.normal.iter().map(|x| -x.to_integer()).collect();
        r.push(h.offset.to_integer());
        rows.push(r);
    }
    rows
}

/// Vertices, rays and lines of `{x : <n_j, x> <= b_j}`.
fn h_to_v(dim: usize, ineqs: Vec<Inequality>) -> PolyhedronRep {
    let ineqs: Vec<Inequality> = ineqs
        .into_iter()
        .map(|h| Inequality::new(h.normal, h.offset))
        .collect();
    let ineqs = canonical_inequalities(ineqs);
    let cone = ConeDd::from_inequalities(dim + 1, &homogenized_rows(dim, &ineqs));
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in cone.rays() {
        let t = &r[dim];
        if t.is_positive() {
            let t = BigRational::from_integer(t.clone());
            vertices.push(
                r[..dim]
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()) / &t)
                    .collect(),
            );
        } else {
            rays.push(r[..dim].to_vec());
        }
    }
    let mut lines: Vec<Vec<BigInt>> = cone.lineality().into_iter().map(|l| l[..dim].to_vec()).collect();
    if vertices.is_empty() {
        rays.clear();
        lines.clear();
    }
    for l in lines.iter_mut() {
        canonical_line_sign(l);
    }
    PolyhedronRep {
        ambient_dim: dim,
        inequalities: ineqs,
        vertices: canonical_points(vertices),
        rays: canonical_rays(rays),
        lines: canonical_rays(lines),
    }
}

fn canonical_line_sign(l: &mut [BigInt]) {
    if l.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in l.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Irredundant inequalities of `conv(V) + cone(R) + span(L)`.
fn v_to_h(
    dim: usize,
    vertices: Vec<Vec<ExactScalar>>,
    rays: Vec<Vec<BigInt>>,
    lines: Vec<Vec<BigInt>>,
) -> PolyhedronRep {
    let vertices = canonical_points(vertices);
    let rays: Vec<Vec<BigInt>> = rays
        .into_iter()
        .map(|r| primitive_integer_vector(&r.into_iter().map(BigRational::from_integer).collect::<Vec<_>>()))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let rays = canonical_rays(rays);
    if vertices.is_empty() {
        let normal = vec![ExactScalar::zero(); dim];
        return PolyhedronRep {
            ambient_dim: dim,
            inequalities: vec![Inequality::new(normal, int(-1))],
            vertices,
            rays: Vec::new(),
            lines: Vec::new(),
        };
    }
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for v in &vertices {
        let mut h: Vec<ExactScalar> = v.clone();
        h.push(ExactScalar::one());
        gens.push(primitive_integer_vector(&h));
    }
    for r in &rays {
        let mut g = r.clone();
        g.push(BigInt::zero());
        gens.push(g);
    }
    for l in &lines {
        let mut g = l.clone();
        g.push(BigInt::zero());
        gens.push(g.clone());
        gens.push(g.into_iter().map(|x| -x).collect());
    }
    let dual = ConeDd::from_inequalities(dim + 1, &gens);
    let to_ineq = |y: &[BigInt]| {
        let normal = y[..dim].iter().map(|x| BigRational::from_integer(-x.clone())).collect();
        Inequality::new(normal, BigRational::from_integer(y[dim].clone()))
    };
    let mut ineqs: Vec<Inequality> = dual.rays().iter().map(|y| to_ineq(y)).collect();
    for l in dual.lineality() {
        let neg: Vec<BigInt> = l.iter().map(|x| -x.clone()).collect();
        ineqs.push(to_ineq(&l));
        ineqs.push(to_ineq(&neg));
    }
    let mut lines = lines;
    for l in lines.iter_mut() {
        canonical_line_sign(l);
    }
    PolyhedronRep {
        ambient_dim: dim,
        inequalities: canonical_inequalities(ineqs),
        vertices,
        rays,
        lines: canonical_rays(lines),
    }
}

/// Completes whichever side of the representation is missing.
///
/// If both sides are present they are checked against each other. The empty
/// polyhedron comes back with no vertices and the single inequality `0 <= -1`.
pub fn dd_convert(rep: &PolyhedronRep) -> Result<PolyhedronRep> {
    rep.check_dims()?;
    let has_h = !rep.inequalities.is_empty();
    let has_v = !rep.vertices.is_empty() || !rep.rays.is_empty() || !rep.lines.is_empty();
    match (has_h, has_v) {
        (true, false) => Ok(h_to_v(rep.ambient_dim, rep.inequalities.clone())),
        (false, true) => {
            if rep.vertices.is_empty() {
                return Err(Error::domain(
                    "generator side has rays but no vertex; a nonempty polyhedron needs a point",
                ));
            }
            Ok(v_to_h(
                rep.ambient_dim,
                rep.vertices.clone(),
                rep.rays.clone(),
                rep.lines.clone(),
            ))
        }
        (true, true) => {
            let from_h = h_to_v(rep.ambient_dim, rep.inequalities.clone());
            let from_v = v_to_h(
                rep.ambient_dim,
                rep.vertices.clone(),
                rep.rays.clone(),
                rep.lines.clone(),
            );
            if !same_polyhedron(&from_h, &from_v) {
                return Err(Error::domain("inequality and generator sides describe different polyhedra"));
            }
            Ok(from_h)
        }
        (false, false) => Err(Error::domain("polyhedron has neither inequalities nor generators")),
    }
}

/// Both arguments must carry both representations.
fn same_polyhedron(a: &PolyhedronRep, b: &PolyhedronRep) -> bool {
    let inside = |p: &PolyhedronRep, q: &PolyhedronRep| {
        p.vertices.iter().all(|v| q.contains(v))
            && p.rays.iter().chain(&p.lines).all(|r| {
                let r: Vec<ExactScalar> = r.iter().cloned().map(BigRational::from_integer).collect();
                q.inequalities
                    .iter()
                    .all(|h| !dot(&h.normal, &r).is_positive())
            })
            && p.lines.iter().all(|l| {
                let l: Vec<ExactScalar> = l.iter().cloned().map(BigRational::from_integer).collect();
                q.inequalities.iter().all(|h| dot(&h.normal, &l).is_zero())
            })
    };
    a.is_empty() == b.is_empty() && (a.is_empty() || (inside(a, b) && inside(b, a)))
}

/// `{x >= 0 : xA <= 1}` with both sides populated.
pub fn packing_polytope(a: &ExactMatrix) -> Result<PolyhedronRep> {
    a.validate_input()?;
    let n = a.rows();
    let mut ineqs = nonnegativity(n);
    for v in a.integer_columns()? {
        ineqs.push(Inequality::from_i64(&v, 1));
    }
    Ok(h_to_v(n, ineqs))
}

/// `Q(A) = {x >= 0 : xA >= 1}` with both sides populated.
pub fn covering_polyhedron(a: &ExactMatrix) -> Result<PolyhedronRep> {
    a.validate_input()?;
    let n = a.rows();
    let mut ineqs = nonnegativity(n);
    for v in a.integer_columns()? {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        ineqs.push(Inequality::from_i64(&neg, -1));
    }
    Ok(h_to_v(n, ineqs))
}

fn nonnegativity(n: usize) -> Vec<Inequality> {
    (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = -1;
            Inequality::from_i64(&e, 0)
        })
        .collect()
}

/// All `alpha` in `N^n` with `alpha <= v` for some column `v` of `A`, sorted.
pub fn down_set(a: &ExactMatrix, cap: u64) -> Result<Vec<Vec<i64>>> {
    a.validate_input()?;
    let cols = a.integer_columns()?;
    let mut bound: u64 = 0;
    for v in &cols {
        let size = v
            .iter()
            .try_fold(1u64, |acc, &x| acc.checked_mul(x as u64 + 1))
            .unwrap_or(u64::MAX);
        bound = bound.saturating_add(size);
    }
    let mut seen = BTreeSet::new();
    for v in &cols {
        let mut alpha = vec![0i64; v.len()];
        loop {
            seen.insert(alpha.clone());
            if seen.len() as u64 > cap {
                return Err(Error::resource(
                    "down_set_cap",
                    cap,
                    format!("down-set has more than {cap} vectors (box volume bound {bound})"),
                ));
            }
            // odometer over the box [0, v]
            let mut i = 0;
            while i < v.len() && alpha[i] == v[i] {
                alpha[i] = 0;
                i += 1;
            }
            if i == v.len() {
                break;
            }
            alpha[i] += 1;
        }
    }
    Ok(seen.into_iter().collect())
}

/// The antiblocking polyhedron `T(P)` of `P = {x >= 0 : xA <= 1}`.
///
/// Built twice, as `conv(w_1, ..., w_r)` over the down-set and as
/// `{x >= 0 : <x, l_i> <= 1}` over the maximal vertices of `P`; the two must
/// have the same vertices.
pub fn antiblocker_from_matrix(a: &ExactMatrix, down_set_cap: u64) -> Result<PolyhedronRep> {
    let n = a.rows();
    let w = down_set(a, down_set_cap)?;
    let pts: Vec<Vec<ExactScalar>> = w.iter().map(|x| x.iter().map(|&v| int(v)).collect()).collect();
    let hull = v_to_h(n, pts, Vec::new(), Vec::new());
    let hull = h_to_v(n, hull.inequalities);

    let p = packing_polytope(a)?;
    let data = maximal_vertex_data(&p)?;
    let mut ineqs = nonnegativity(n);
    for l in &data.maximal_vertices {
        ineqs.push(Inequality::new(l.clone(), int(1)));
    }
    let dual = h_to_v(n, ineqs);
    if dual.vertices != hull.vertices {
        return Err(Error::soundness(
            "down-set hull and maximal-vertex inequalities give different antiblockers",
        ));
    }
    Ok(PolyhedronRep {
        ambient_dim: n,
        inequalities: dual.inequalities,
        vertices: hull.vertices,
        rays: Vec::new(),
        lines: Vec::new(),
    })
}

/// The blocking polyhedron `B(Q)` of `Q = Q(A)`, i.e. `R_+^n + conv(v_i)`.
pub fn blocker_from_matrix(a: &ExactMatrix) -> Result<PolyhedronRep> {
    a.validate_input()?;
    let n = a.rows();
    let pts: Vec<Vec<ExactScalar>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let units: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            e
        })
        .collect();
    let h = v_to_h(n, pts, units, Vec::new());
    let full = h_to_v(n, h.inequalities);
    let generated: BTreeSet<Vec<ExactScalar>> = (0..a.cols()).map(|j| a.column(j)).collect();
    if full.vertices.iter().any(|v| !generated.contains(v)) {
        return Err(Error::soundness("blocker has a vertex outside the columns of A"));
    }
    Ok(full)
}

/// Maximal vertices `l_i` of `P`, their denominators `d_i` and norms `|l_i|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalVertexData {
    pub maximal_vertices: Vec<Vec<ExactScalar>>,
    pub denominators: Vec<BigInt>,
    pub norms: Vec<ExactScalar>,
}

impl MaximalVertexData {
    pub fn max_denominator(&self) -> BigInt {
        self.denominators.iter().cloned().max().unwrap_or_else(BigInt::one)
    }
}

fn dominated(x: &[ExactScalar], y: &[ExactScalar]) -> bool {
    x != y && x.iter().zip(y).all(|(a, b)| a <= b)
}

/// Requires a bounded polyhedron with the origin among its vertices.
pub fn maximal_vertex_data(p: &PolyhedronRep) -> Result<MaximalVertexData> {
    let p = if p.vertices.is_empty() && !p.inequalities.is_empty() {
        dd_convert(p)?
    } else {
        p.clone()
    };
    if !p.is_bounded() {
        return Err(Error::domain("maximal vertex data needs a bounded polyhedron"));
    }
    if !p.vertices.iter().any(|v| v.iter().all(Zero::is_zero)) {
        return Err(Error::domain("the origin is not a vertex"));
    }
    let maximal: Vec<Vec<ExactScalar>> = p
        .vertices
        .iter()
        .filter(|v| !p.vertices.iter().any(|w| dominated(v, w)))
        .cloned()
        .collect();
    let denominators = maximal
        .iter()
        .map(|v| v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
        .collect();
    let norms = maximal
        .iter()
        .map(|v| v.iter().fold(ExactScalar::zero(), |s, x| s + x))
        .collect();
    Ok(MaximalVertexData {
        maximal_vertices: maximal,
        denominators,
        norms,
    })
}

/// True iff every vertex is integral.
pub fn is_integral_polytope(p: &PolyhedronRep) -> Result<bool> {
    let p = if p.vertices.is_empty() && !p.inequalities.is_empty() {
        dd_convert(p)?
    } else {
        p.clone()
    };
    Ok(p.vertices.iter().all(|v| v.iter().all(|x| x.is_integer())))
}

/// Integral vertices as machine integers; fails on a fractional vertex.
pub fn integer_points(points: &[Vec<ExactScalar>]) -> Option<Vec<Vec<i64>>> {
    points
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                .collect()
        })
        .collect()
}
