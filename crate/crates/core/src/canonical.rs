//! Canonical modules and a-invariants of normal monomial subrings, the
//! Gorenstein property of `S = K[x^w t : w in down-set]`, and the complete
//! intersection test for graphs.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebras::{build_algebra, is_normal, AlgebraKind};
use crate::arith::{dot_mixed, int, ExactMatrix, ExactScalar};
use crate::clutters::{alexander_dual, primitive_cycles, Graph};
use crate::error::{Error, Result};
use crate::hilbert::is_hilbert_basis;
use crate::polyhedra::{
    dd_convert, down_set, is_integral_polytope, maximal_vertex_data, packing_polytope, ConeDd, Inequality,
    MaximalVertexData, PolyhedronRep, DEFAULT_DOWN_SET_CAP,
};
use crate::rounding::{irp_check, lp_opt_exact, Constraint, LinearProgram, LpOutcome, Relation, RoundingSystem, Sense};

/// Default cap on lattice points of the canonical module visited.
pub const DEFAULT_OMEGA_POINT_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GorensteinRoute {
    /// `omega` has a single minimal generator.
    PrincipalOmega,
    /// `-a(S) = 1/d_i + |l_i|` for every maximal vertex.
    SufficientCondition,
    /// `P` is integral and `a(S) = -(|l_i| + 1)` for every maximal vertex.
    IntegralPolytope,
}

impl GorensteinRoute {
    pub fn name(self) -> &'static str {
        match self {
            GorensteinRoute::PrincipalOmega => "principal_omega",
            GorensteinRoute::SufficientCondition => "sufficient_condition",
            GorensteinRoute::IntegralPolytope => "integral_polytope",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinReport {
    /// `-a(S) = 1/d_i + |l_i|` for all `i`.
    pub sufficient_condition: bool,
    pub packing_integral: bool,
    /// When `P` is integral: `a(S) = -(|l_i| + 1)` for all `i`.
    pub integral_condition: Option<bool>,
    /// When `S` is Gorenstein and `c_0 = max |l_i|` is an integer: every
    /// integral `l_k` has `|l_k| = c_0`.
    pub necessary_condition: Option<bool>,
    pub gorenstein: bool,
    pub route: GorensteinRoute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalModuleReport {
    pub maximal_vertex_data: MaximalVertexData,
    /// `(a, b) <= 0` form over `(a, b)` in `Z^{n+1}`.
    pub omega_inequalities: Vec<Inequality>,
    /// Minimal generators `(a, b)` in increasing degree `b`, then lexicographic.
    pub omega_generators: Vec<(Vec<i64>, i64)>,
    /// `-max_i ceil(1/d_i + |l_i|)`.
    pub a_invariant: i64,
    /// `-min{b : (a, b) in omega}`.
    pub a_invariant_from_omega: i64,
    /// Whether `-a(S) = max_i floor(|l_i|) + 1` also holds.
    pub floor_form_agrees: bool,
    /// Highest degree scanned for generators.
    pub degree_bound: i64,
    pub gorenstein: GorensteinReport,
}

/// Integer data of the omega inequalities: `D_i b - <L_i, a> >= 1` with
/// `L_i = d_i l_i`, together with `a_j >= 1`.
struct OmegaSystem {
    n: usize,
    normals: Vec<Vec<i64>>,
    scales: Vec<i64>,
}

impl OmegaSystem {
    fn new(mvd: &MaximalVertexData) -> Result<Self> {
        let overflow = || Error::resource("arithmetic_width", 64, "maximal vertex data exceeds 64 bits");
        let mut normals = Vec::new();
        let mut scales = Vec::new();
        for (l, d) in mvd.maximal_vertices.iter().zip(&mvd.denominators) {
            let dd = ExactScalar::from_integer(d.clone());
            let row: Option<Vec<i64>> = l.iter().map(|x| (x * &dd).to_integer().to_i64()).collect();
            normals.push(row.ok_or_else(overflow)?);
            scales.push(d.to_i64().ok_or_else(overflow)?);
        }
        let n = mvd.maximal_vertices.first().map_or(0, Vec::len);
        Ok(OmegaSystem { n, normals, scales })
    }

    fn contains(&self, a: &[i64], b: i64) -> bool {
        a.iter().all(|&x| x >= 1)
            && self
                .normals
                .iter()
                .zip(&self.scales)
                .all(|(l, &d)| d * b - l.iter().zip(a).map(|(x, y)| x * y).sum::<i64>() >= 1)
    }

    fn inequalities(&self) -> Vec<Inequality> {
        let n = self.n;
        let mut out = Vec::new();
        for j in 0..n {
            let mut e = vec![0; n + 1];
            e[j] = -1;
            out.push(Inequality::from_i64(&e, -1));
        }
        for (l, &d) in self.normals.iter().zip(&self.scales) {
            let mut row = l.clone();
            row.push(-d);
            out.push(Inequality::from_i64(&row, -1));
        }
        out.sort();
        out
    }

    /// Lattice points of degree `b`, lexicographic.
    fn slice(&self, b: i64) -> Vec<Vec<i64>> {
        let n = self.n;
        let budget: Vec<i64> = self.scales.iter().map(|&d| d * b - 1).collect();
        // minimal contribution of coordinates k.. when each is 1
        let mut tail = vec![vec![0i64; self.normals.len()]; n + 1];
        for k in (0..n).rev() {
            for (i, l) in self.normals.iter().enumerate() {
                tail[k][i] = tail[k + 1][i] + l[k];
            }
        }
        let mut out = Vec::new();
        let mut a = vec![0i64; n];
        let mut used = vec![0i64; self.normals.len()];
        self.fill(0, &mut a, &mut used, &budget, &tail, &mut out);
        out
    }

    fn fill(
        &self,
        k: usize,
        a: &mut [i64],
        used: &mut [i64],
        budget: &[i64],
        tail: &[Vec<i64>],
        out: &mut Vec<Vec<i64>>,
    ) {
        if k == self.n {
            out.push(a.to_vec());
            return;
        }
        let mut v = 1;
        loop {
            let fits = self
                .normals
                .iter()
                .enumerate()
                .all(|(i, l)| used[i] + l[k] * v + tail[k + 1][i] <= budget[i]);
            if !fits {
                return;
            }
            a[k] = v;
            for (i, l) in self.normals.iter().enumerate() {
                used[i] += l[k] * v;
            }
            self.fill(k + 1, a, used, budget, tail, out);
            for (i, l) in self.normals.iter().enumerate() {
                used[i] -= l[k] * v;
            }
            v += 1;
        }
    }
}

fn ceil_div(num: &ExactScalar) -> BigInt {
    num.ceil().to_integer()
}

fn require_rounding(a: &ExactMatrix) -> Result<()> {
    let s = build_algebra(AlgebraKind::SDownset, a, DEFAULT_DOWN_SET_CAP)?;
    if !is_normal(&s)?.verdict {
        return Err(Error::domain(
            "system lacks rounding property: x >= 0; xA <= 1 fails integer rounding",
        ));
    }
    Ok(())
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::resource("arithmetic_width", 64, "value exceeds 64 bits"))
}

/// Canonical module of `S` through the maximal vertices of the packing
/// polytope, with minimal generators found by a degree-by-degree scan.
///
/// The scan covers degrees up to `-a(S) + n max d_i`; if a minimal
/// generator appears in the top degree the slack doubles and the scan
/// continues.
pub fn canonical_module_s(a: &ExactMatrix, point_cap: u64) -> Result<CanonicalModuleReport> {
    a.validate_input()?;
    require_rounding(a)?;
    let n = a.rows();
    let p = packing_polytope(a)?;
    let mvd = maximal_vertex_data(&p)?;
    let system = OmegaSystem::new(&mvd)?;
    let one = ExactScalar::one();
    let b0 = mvd
        .denominators
        .iter()
        .zip(&mvd.norms)
        .map(|(d, l)| ceil_div(&(&one / ExactScalar::from_integer(d.clone()) + l)))
        .max()
        .expect("packing polytope has a maximal vertex");
    let b0 = small(&b0)?;
    let floor_form = mvd.norms.iter().map(|l| l.floor().to_integer()).max().unwrap() + BigInt::one();
    let downs = down_set(a, DEFAULT_DOWN_SET_CAP)?;
    let max_d = small(&mvd.max_denominator())?;

    let mut slack = n as i64 * max_d;
    let mut scanned = 0i64;
    let mut bound = b0 + slack;
    let mut visited = 0u64;
    let mut generators: Vec<(Vec<i64>, i64)> = Vec::new();
    let mut lowest: Option<i64> = None;
    loop {
        let degrees: Vec<i64> = (scanned + 1..=bound).collect();
        let slices: Vec<(i64, Vec<Vec<i64>>)> = degrees.par_iter().map(|&b| (b, system.slice(b))).collect();
        for (b, pts) in slices {
            visited += pts.len() as u64;
            if visited > point_cap {
                return Err(Error::resource(
                    "omega_point_cap",
                    point_cap,
                    format!("canonical module scan reached degree {b}"),
                ));
            }
            if lowest.is_none() && !pts.is_empty() {
                lowest = Some(b);
            }
            for x in pts {
                let reducible = downs.iter().any(|w| {
                    let y: Vec<i64> = x.iter().zip(w).map(|(p, q)| p - q).collect();
                    system.contains(&y, b - 1)
                });
                if !reducible {
                    generators.push((x, b));
                }
            }
        }
        scanned = bound;
        if generators.iter().any(|(_, b)| *b == bound) {
            slack *= 2;
            bound = b0 + slack;
        } else {
            break;
        }
    }
    let a_from_omega = -lowest.ok_or_else(|| Error::soundness("canonical module has no lattice point"))?;
    if a_from_omega != -b0 {
        return Err(Error::soundness(format!(
            "a-invariant by formula is {} but the lowest degree of omega gives {a_from_omega}",
            -b0
        )));
    }
    let gorenstein = evaluate_gorenstein(a, &mvd, -b0, generators.len() == 1)?;
    Ok(CanonicalModuleReport {
        maximal_vertex_data: mvd,
        omega_inequalities: system.inequalities(),
        omega_generators: generators,
        a_invariant: -b0,
        a_invariant_from_omega: a_from_omega,
        floor_form_agrees: BigInt::from(b0) == floor_form,
        degree_bound: scanned,
        gorenstein,
    })
}

fn evaluate_gorenstein(
    a: &ExactMatrix,
    mvd: &MaximalVertexData,
    a_inv: i64,
    principal: bool,
) -> Result<GorensteinReport> {
    let one = ExactScalar::one();
    let minus_a = int(-a_inv);
    let sufficient = mvd
        .denominators
        .iter()
        .zip(&mvd.norms)
        .all(|(d, l)| &one / ExactScalar::from_integer(d.clone()) + l == minus_a);
    let packing_integral = is_integral_polytope(&packing_polytope(a)?)?;
    let integral_condition = packing_integral.then(|| mvd.norms.iter().all(|l| int(a_inv) == -(l + &one)));
    let c0 = mvd.norms.iter().max().cloned().unwrap_or_else(ExactScalar::zero);
    let necessary_condition = (principal && c0.is_integer()).then(|| {
        mvd.maximal_vertices
            .iter()
            .zip(&mvd.norms)
            .filter(|(l, _)| l.iter().all(|x| x.is_integer()))
            .all(|(_, n)| *n == c0)
    });
    if sufficient && !principal {
        return Err(Error::soundness("sufficient Gorenstein condition holds but omega is not principal"));
    }
    if integral_condition.is_some_and(|c| c != principal) {
        return Err(Error::soundness("integral-polytope Gorenstein criterion disagrees with omega"));
    }
    if necessary_condition == Some(false) {
        return Err(Error::soundness("Gorenstein ring violates the norm condition on integral maximal vertices"));
    }
    let route = if sufficient {
        GorensteinRoute::SufficientCondition
    } else if integral_condition.is_some() {
        GorensteinRoute::IntegralPolytope
    } else {
        GorensteinRoute::PrincipalOmega
    };
    Ok(GorensteinReport {
        sufficient_condition: sufficient,
        packing_integral,
        integral_condition,
        necessary_condition,
        gorenstein: principal,
        route,
    })
}

pub fn gorenstein_tests(a: &ExactMatrix) -> Result<GorensteinReport> {
    Ok(canonical_module_s(a, DEFAULT_OMEGA_POINT_CAP)?.gorenstein)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualConeBasisData {
    pub grading: Vec<ExactScalar>,
    /// Primitive extreme rays of the dual cone, then both signs of each
    /// lineality generator.
    pub integral_basis: Vec<Vec<i64>>,
    /// `0` where `c_j` vanishes on the cone, `-1` otherwise.
    pub b_vector: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualConeCanonical {
    pub data: DualConeBasisData,
    /// `<c_j, x> >= -b_j` written as `<-c_j, x> <= b_j`.
    pub omega_inequalities: Vec<Inequality>,
    pub a_invariant: i64,
    /// A lattice point of least degree in the canonical module.
    pub minimizer: Vec<i64>,
}

fn lp_bound(constraints: &[Constraint], objective: Vec<ExactScalar>, sense: Sense) -> Result<Option<ExactScalar>> {
    let lp = LinearProgram {
        sense,
        objective,
        constraints: constraints.to_vec(),
        nonnegative: false,
    };
    Ok(match lp_opt_exact(&lp)? {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Unbounded => return Err(Error::soundness("degree slice of a pointed cone is unbounded")),
        LpOutcome::Infeasible => None,
    })
}

/// Canonical module and a-invariant of `K[x^v : v in generators]` from an
/// integral basis of the dual cone.
pub fn canonical_via_dual_cone(generators: &[Vec<i64>], grading: &[ExactScalar]) -> Result<DualConeCanonical> {
    let n = grading.len();
    if generators.is_empty() || generators.iter().any(|g| g.len() != n) {
        return Err(Error::domain(format!("generators must be nonempty vectors of length {n}")));
    }
    if let Some(g) = generators.iter().find(|g| dot_mixed(grading, g) != ExactScalar::one()) {
        return Err(Error::domain(format!("grading vector does not give generator {g:?} degree 1")));
    }
    let cert = is_hilbert_basis(generators)?;
    if !cert.verdict {
        return Err(Error::domain(format!(
            "generators are not a Hilbert basis of the lattice points of their cone; {:?} is missing",
            cert.witness.unwrap_or_default()
        )));
    }
    let dual = ConeDd::from_inequalities_i64(n, generators);
    let width = || Error::resource("arithmetic_width", 64, "dual cone basis exceeds 64 bits");
    let mut rays = dual.rays_i64().ok_or_else(width)?;
    rays.sort();
    let mut basis = rays.clone();
    let mut lineality = dual.lineality_i64().ok_or_else(width)?;
    lineality.sort();
    for l in &lineality {
        basis.push(l.clone());
        basis.push(l.iter().map(|x| -x).collect());
    }
    let b_vector: Vec<i64> = basis
        .iter()
        .map(|c| {
            let vanishes = generators.iter().all(|v| c.iter().zip(v).map(|(x, y)| x * y).sum::<i64>() == 0);
            if vanishes {
                0
            } else {
                -1
            }
        })
        .collect();
    let omega_inequalities: Vec<Inequality> = basis
        .iter()
        .zip(&b_vector)
        .map(|(c, &b)| Inequality::from_i64(&c.iter().map(|x| -x).collect::<Vec<_>>(), b))
        .collect();

    let mut constraints: Vec<Constraint> = basis
        .iter()
        .zip(&b_vector)
        .map(|(c, &b)| Constraint {
            coeffs: c.iter().map(|&x| int(x)).collect(),
            relation: Relation::Ge,
            rhs: int(-b),
        })
        .collect();
    let low = lp_bound(&constraints, grading.to_vec(), Sense::Min)?
        .ok_or_else(|| Error::soundness("canonical module polyhedron is empty"))?;
    // the sum of all generators is an interior lattice point
    let high = generators.len() as i64;
    let start = small(&low.ceil().to_integer())?;
    constraints.push(Constraint {
        coeffs: grading.to_vec(),
        relation: Relation::Eq,
        rhs: ExactScalar::zero(),
    });
    for k in start..=high {
        constraints.last_mut().unwrap().rhs = int(k);
        if let Some(x) = slice_point(&constraints, n)? {
            return Ok(DualConeCanonical {
                data: DualConeBasisData {
                    grading: grading.to_vec(),
                    integral_basis: basis,
                    b_vector,
                },
                omega_inequalities,
                a_invariant: -k,
                minimizer: x,
            });
        }
    }
    Err(Error::soundness("no lattice point of the canonical module up to the degree of the generator sum"))
}

/// Least lattice point, lexicographically, in a bounded polyhedron.
fn slice_point(constraints: &[Constraint], n: usize) -> Result<Option<Vec<i64>>> {
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![ExactScalar::zero(); n];
        e[j] = ExactScalar::one();
        let (Some(l), Some(h)) = (
            lp_bound(constraints, e.clone(), Sense::Min)?,
            lp_bound(constraints, e, Sense::Max)?,
        ) else {
            return Ok(None);
        };
        lo.push(small(&l.ceil().to_integer())?);
        hi.push(small(&h.floor().to_integer())?);
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(None);
    }
    let feasible = |x: &[i64]| {
        constraints.iter().all(|c| {
            let v = dot_mixed(&c.coeffs, x);
            match c.relation {
                Relation::Le => v <= c.rhs,
                Relation::Ge => v >= c.rhs,
                Relation::Eq => v == c.rhs,
            }
        })
    };
    let mut x = lo.clone();
    loop {
        if feasible(&x) {
            return Ok(Some(x));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

/// Same polyhedron for two inequality systems.
pub fn same_inequality_polyhedron(dim: usize, a: &[Inequality], b: &[Inequality]) -> Result<bool> {
    let pa = dd_convert(&PolyhedronRep::from_inequalities(dim, a.to_vec()))?;
    let pb = dd_convert(&PolyhedronRep::from_inequalities(dim, b.to_vec()))?;
    Ok(pa.vertices == pb.vertices && pa.rays == pb.rays && pa.lines == pb.lines)
}

/// Whether `K[x^v t, t]` is a complete intersection for a connected graph
/// whose system `xA <= 1` has the integer rounding property: the graph is
/// bipartite and has exactly `q - n + 1` chordless cycles.
pub fn complete_intersection_check(g: &Graph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::domain("graph must be connected"));
    }
    let a = g.incidence_matrix()?;
    let v = irp_check(RoundingSystem::Eq1, &a, None, DEFAULT_DOWN_SET_CAP)?;
    if !v.theorem_route {
        return Err(Error::domain("system lacks rounding property: xA <= 1 fails integer rounding"));
    }
    let cycles = primitive_cycles(g).len() as i64;
    let betti = g.edges().len() as i64 - g.vertex_count() as i64 + 1;
    Ok(g.is_bipartite() && cycles == betti)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinObservation {
    pub graph: Graph,
    pub gorenstein: bool,
    /// `-a(S) = 1/d_i + |l_i|` for all `i`.
    pub norm_condition: bool,
    pub mismatch: bool,
    /// All minimal vertex covers have the same size.
    pub unmixed: bool,
    pub denominators_in_one_two: bool,
    pub floor_form_agrees: bool,
}

/// Gorenstein comparison for one connected graph; `None` when the system
/// `x >= 0; xA <= 1` lacks the rounding property. Nothing is asserted.
pub fn observe_gorenstein(g: &Graph) -> Result<Option<GorensteinObservation>> {
    if !g.is_connected() {
        return Err(Error::domain("graph must be connected"));
    }
    let a = g.incidence_matrix()?;
    let r = match canonical_module_s(&a, DEFAULT_OMEGA_POINT_CAP) {
        Ok(r) => r,
        Err(Error::Domain(m)) if m.starts_with("system lacks rounding property") => return Ok(None),
        Err(e) => return Err(e),
    };
    let covers = alexander_dual(&g.as_clutter())?;
    let size = covers.edges().first().map_or(0, Vec::len);
    let two = BigInt::from(2);
    Ok(Some(GorensteinObservation {
        gorenstein: r.gorenstein.gorenstein,
        norm_condition: r.gorenstein.sufficient_condition,
        mismatch: r.gorenstein.gorenstein != r.gorenstein.sufficient_condition,
        unmixed: covers.edges().iter().all(|c| c.len() == size),
        denominators_in_one_two: r.maximal_vertex_data.denominators.iter().all(|d| d.is_one() || *d == two),
        floor_form_agrees: r.floor_form_agrees,
        graph: g.clone(),
    }))
}

/// Runs [`observe_gorenstein`] on every connected graph with at most
/// `max_vertices` vertices.
pub fn gorenstein_experiment(max_vertices: usize) -> Result<Vec<GorensteinObservation>> {
    let mut graphs = Vec::new();
    for n in 2..=max_vertices {
        graphs.extend(crate::clutters::connected_graphs_up_to_isomorphism(n)?);
    }
    graphs
        .par_iter()
        .map(observe_gorenstein)
        .filter_map(|r| r.transpose())
        .collect()
}
