//! Integer rounding properties of `x >= 0; xA <= 1`, `x >= 0; xA >= 1` and
//! `xA <= 1`, and the max-flow min-cut property, each decided twice: through
//! normality of an attached semigroup and through an LP/IP comparison over a
//! box of right-hand sides.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebras::{build_algebra, ehrhart_equality, is_normal, AlgebraKind};
use crate::arith::{dot, dot_mixed, int, torsion_of_quotient, ExactMatrix, ExactScalar};
use crate::error::{Error, Result};
use crate::polyhedra::{covering_polyhedron, dd_convert, is_integral_polytope, packing_polytope, ConeDd, Inequality, PolyhedronRep};

/// Largest LP handled by vertex enumeration.
pub const LP_VARIABLE_CAP: usize = 24;
/// Default cap on integer points visited by `ip_opt_exact`.
pub const DEFAULT_IP_POINT_CAP: u64 = 5_000_000;
/// Default cap on right-hand sides probed by the oracle route.
pub const DEFAULT_ORACLE_GRID_CAP: u64 = 1_000_000;
pub const DEFAULT_ORACLE_BOX: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<ExactScalar>,
    pub relation: Relation,
    pub rhs: ExactScalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<ExactScalar>,
    pub constraints: Vec<Constraint>,
    /// Adds `y >= 0`.
    pub nonnegative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: ExactScalar, point: Vec<ExactScalar> },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&ExactScalar> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpOutcome {
    Optimal { value: ExactScalar, point: Vec<i64>, lower: Vec<i64>, upper: Vec<i64> },
    Infeasible { lower: Vec<i64>, upper: Vec<i64> },
}

impl IpOutcome {
    pub fn value(&self) -> Option<&ExactScalar> {
        match self {
            IpOutcome::Optimal { value, .. } => Some(value),
            IpOutcome::Infeasible { .. } => None,
        }
    }
}

fn row_constraints(a: &ExactMatrix, rhs: &[i64], relation: Relation) -> Vec<Constraint> {
    (0..a.rows())
        .map(|i| Constraint {
            coeffs: a.row(i).to_vec(),
            relation,
            rhs: int(rhs[i]),
        })
        .collect()
}

impl LinearProgram {
    fn ones(q: usize) -> Vec<ExactScalar> {
        vec![ExactScalar::one(); q]
    }

    /// `min{<y,1> : y >= 0, Ay >= a}`.
    pub fn covering(a: &ExactMatrix, rhs: &[i64]) -> Self {
        LinearProgram {
            sense: Sense::Min,
            objective: Self::ones(a.cols()),
            constraints: row_constraints(a, rhs, Relation::Ge),
            nonnegative: true,
        }
    }

    /// `max{<y,1> : y >= 0, Ay <= a}`.
    pub fn packing(a: &ExactMatrix, rhs: &[i64]) -> Self {
        LinearProgram {
            sense: Sense::Max,
            objective: Self::ones(a.cols()),
            constraints: row_constraints(a, rhs, Relation::Le),
            nonnegative: true,
        }
    }

    /// `min{<y,1> : y >= 0, Ay = a}`.
    pub fn equality(a: &ExactMatrix, rhs: &[i64]) -> Self {
        LinearProgram {
            sense: Sense::Min,
            objective: Self::ones(a.cols()),
            constraints: row_constraints(a, rhs, Relation::Eq),
            nonnegative: true,
        }
    }

    /// `min{<a,x> : x >= 0, xA >= 1}`.
    pub fn weighted_cover(a: &ExactMatrix, weights: &[i64]) -> Self {
        LinearProgram {
            sense: Sense::Min,
            objective: weights.iter().map(|&w| int(w)).collect(),
            constraints: row_constraints(&a.transpose(), &vec![1; a.cols()], Relation::Ge),
            nonnegative: true,
        }
    }

    fn dim(&self) -> usize {
        self.objective.len()
    }

    fn inequalities(&self) -> Result<Vec<Inequality>> {
        let d = self.dim();
        let mut out = Vec::new();
        for c in &self.constraints {
            if c.coeffs.len() != d {
                return Err(Error::domain(format!("constraint has {} coefficients, expected {d}", c.coeffs.len())));
            }
            let neg: Vec<ExactScalar> = c.coeffs.iter().map(|x| -x).collect();
            match c.relation {
                Relation::Le => out.push(Inequality::new(c.coeffs.clone(), c.rhs.clone())),
                Relation::Ge => out.push(Inequality::new(neg, -&c.rhs)),
                Relation::Eq => {
                    out.push(Inequality::new(c.coeffs.clone(), c.rhs.clone()));
                    out.push(Inequality::new(neg, -&c.rhs));
                }
            }
        }
        if self.nonnegative {
            for i in 0..d {
                let mut n = vec![ExactScalar::zero(); d];
                n[i] = int(-1);
                out.push(Inequality::new(n, ExactScalar::zero()));
            }
        }
        if out.is_empty() {
            // the whole space
            out.push(Inequality::new(vec![ExactScalar::zero(); d], ExactScalar::zero()));
        }
        Ok(out)
    }

    fn is_feasible_int(&self, y: &[i64]) -> bool {
        if self.nonnegative && y.iter().any(|&v| v < 0) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = dot_mixed(&c.coeffs, y);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }

    fn better(&self, x: &ExactScalar, y: &ExactScalar) -> bool {
        match self.sense {
            Sense::Min => x < y,
            Sense::Max => x > y,
        }
    }
}

/// Exact LP optimum by enumerating the vertices, extreme rays and lines of
/// the feasible region.
pub fn lp_opt_exact(lp: &LinearProgram) -> Result<LpOutcome> {
    let d = lp.dim();
    if d > LP_VARIABLE_CAP {
        return Err(Error::resource(
            "lp_variable_cap",
            LP_VARIABLE_CAP as u64,
            format!("LP has {d} variables"),
        ));
    }
    let region = dd_convert(&PolyhedronRep::from_inequalities(d, lp.inequalities()?))?;
    if region.is_empty() {
        return Ok(LpOutcome::Infeasible);
    }
    let improving = |r: &[BigInt]| {
        let r: Vec<ExactScalar> = r.iter().cloned().map(ExactScalar::from_integer).collect();
        let v = dot(&lp.objective, &r);
        match lp.sense {
            Sense::Min => v.is_negative(),
            Sense::Max => v.is_positive(),
        }
    };
    let moves_along = |l: &[BigInt]| {
        let l: Vec<ExactScalar> = l.iter().cloned().map(ExactScalar::from_integer).collect();
        !dot(&lp.objective, &l).is_zero()
    };
    if region.rays.iter().any(|r| improving(r)) || region.lines.iter().any(|l| moves_along(l)) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut best: Option<(ExactScalar, Vec<ExactScalar>)> = None;
    for v in &region.vertices {
        let val = dot(&lp.objective, v);
        if best.as_ref().is_none_or(|(b, _)| lp.better(&val, b)) {
            best = Some((val, v.clone()));
        }
    }
    let (value, point) = best.expect("nonempty region has a vertex");
    Ok(LpOutcome::Optimal { value, point })
}

fn lp_extreme(lp: &LinearProgram, var: usize, sense: Sense) -> Result<Option<ExactScalar>> {
    let mut objective = vec![ExactScalar::zero(); lp.dim()];
    objective[var] = ExactScalar::one();
    let probe = LinearProgram {
        sense,
        objective,
        constraints: lp.constraints.clone(),
        nonnegative: lp.nonnegative,
    };
    Ok(lp_opt_exact(&probe)?.value().cloned())
}

/// Exact integer optimum with every variable integral, by exhaustive search
/// of a box derived from the LP relaxation.
///
/// For a minimization whose LP optimum rounds up to a feasible point, the
/// objective value of that point cuts the region first. The box bounds are
/// returned with the outcome.
pub fn ip_opt_exact(lp: &LinearProgram, point_cap: u64) -> Result<IpOutcome> {
    let d = lp.dim();
    let relaxed = lp_opt_exact(lp)?;
    let point = match relaxed {
        LpOutcome::Infeasible => {
            return Ok(IpOutcome::Infeasible { lower: Vec::new(), upper: Vec::new() });
        }
        LpOutcome::Unbounded => {
            return Err(Error::resource("ip_search_bound", 0, "LP relaxation is unbounded"));
        }
        LpOutcome::Optimal { point, .. } => point,
    };
    let mut cut = lp.clone();
    let rounded: Vec<i64> = point
        .iter()
        .map(|x| x.ceil().to_integer().to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::resource("ip_search_bound", 0, "LP optimum too large"))?;
    let mut incumbent = None;
    if lp.is_feasible_int(&rounded) {
        let val = dot_mixed(&lp.objective, &rounded);
        let relation = match lp.sense {
            Sense::Min => Relation::Le,
            Sense::Max => Relation::Ge,
        };
        cut.constraints.push(Constraint {
            coeffs: lp.objective.clone(),
            relation,
            rhs: val.clone(),
        });
        incumbent = Some((val, rounded));
    }
    let mut lower = Vec::with_capacity(d);
    let mut upper = Vec::with_capacity(d);
    for j in 0..d {
        let lo = lp_extreme(&cut, j, Sense::Min)?;
        let hi = lp_extreme(&cut, j, Sense::Max)?;
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::resource(
                "ip_search_bound",
                0,
                format!("variable {} is unbounded on the search region", j + 1),
            ));
        };
        let to = |x: ExactScalar| x.to_integer().to_i64().ok_or_else(|| Error::resource("ip_search_bound", 0, "bound too large"));
        lower.push(to(lo.ceil())?);
        upper.push(to(hi.floor())?);
    }
    let mut count: u64 = 1;
    for (l, h) in lower.iter().zip(&upper) {
        count = count.saturating_mul((h - l + 1).max(0) as u64);
    }
    if count > point_cap {
        return Err(Error::resource("ip_point_cap", point_cap, format!("search box holds {count} points")));
    }
    let mut best = incumbent;
    if count > 0 {
        let mut y = lower.clone();
        'outer: loop {
            if lp.is_feasible_int(&y) {
                let val = dot_mixed(&lp.objective, &y);
                if best.as_ref().is_none_or(|(b, _)| lp.better(&val, b)) {
                    best = Some((val, y.clone()));
                }
            }
            let mut i = d;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if y[i] < upper[i] {
                    y[i] += 1;
                    break;
                }
                y[i] = lower[i];
            }
        }
    }
    Ok(match best {
        Some((value, point)) => IpOutcome::Optimal { value, point, lower, upper },
        None => IpOutcome::Infeasible { lower, upper },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoundingSystem {
    /// `x >= 0; xA <= 1`
    Leq1,
    /// `x >= 0; xA >= 1`
    Geq1,
    /// `xA <= 1` with equality duals
    Eq1,
}

impl RoundingSystem {
    pub const ALL: [RoundingSystem; 3] = [RoundingSystem::Leq1, RoundingSystem::Geq1, RoundingSystem::Eq1];

    pub fn name(self) -> &'static str {
        match self {
            RoundingSystem::Leq1 => "leq1",
            RoundingSystem::Geq1 => "geq1",
            RoundingSystem::Eq1 => "eq1",
        }
    }
}

impl fmt::Display for RoundingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RoundingSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leq1" => Ok(RoundingSystem::Leq1),
            "geq1" => Ok(RoundingSystem::Geq1),
            "eq1" => Ok(RoundingSystem::Eq1),
            _ => Err(Error::domain(format!("unknown rounding system `{s}`; expected leq1, geq1 or eq1"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingCounterexample {
    pub a: Vec<i64>,
    pub lp_value: ExactScalar,
    /// The LP value rounded up (rounded down for `geq1`).
    pub rounded: BigInt,
    /// `None` when the integer program is infeasible.
    pub ip_value: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingVerdict {
    pub system: RoundingSystem,
    pub theorem_route: bool,
    /// For `eq1`: the verdict implied by normality of `K[F]` and torsion of
    /// `Z^n / ZA`, when those data decide it.
    pub torsion_route: Option<bool>,
    pub oracle_route: Option<bool>,
    pub oracle_box: Option<u32>,
    /// First failure inside the box; otherwise the failure read off the
    /// normality witness.
    pub counterexample: Option<RoundingCounterexample>,
}

/// Right-hand sides `[0, bound]^n` in lexicographic order.
pub(crate) struct Grid {
    pub bound: i64,
    pub points: Vec<Vec<i64>>,
}

impl Grid {
    pub fn new(n: usize, bound: u32, cap: u64) -> Result<Self> {
        let side = u64::from(bound) + 1;
        let size = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(side)).filter(|&s| s <= cap);
        let Some(size) = size else {
            return Err(Error::resource("oracle_grid_cap", cap, format!("box {bound} in dimension {n} is too large")));
        };
        let bound = i64::from(bound);
        let mut points = Vec::with_capacity(size as usize);
        let mut x = vec![0i64; n];
        loop {
            points.push(x.clone());
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(Grid { bound, points });
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = 0;
            }
        }
    }

    pub fn index(&self, x: &[i64]) -> usize {
        x.iter().fold(0usize, |acc, &v| acc * (self.bound as usize + 1) + v as usize)
    }

}

/// Integer optima over the grid by dynamic programming; `None` is infeasible.
pub(crate) fn ip_table(system: RoundingSystem, cols: &[Vec<i64>], grid: &Grid) -> Vec<Option<i64>> {
    let mut t: Vec<Option<i64>> = vec![None; grid.points.len()];
    for (k, a) in grid.points.iter().enumerate() {
        if a.iter().all(|&x| x == 0) {
            t[k] = Some(0);
            continue;
        }
        t[k] = match system {
            // min |y| with Ay >= a: some used column meets supp(a)
            RoundingSystem::Leq1 => cols
                .iter()
                .filter(|v| v.iter().zip(a).any(|(&vi, &ai)| vi > 0 && ai > 0))
                .filter_map(|v| {
                    let rest: Vec<i64> = a.iter().zip(v).map(|(ai, vi)| (ai - vi).max(0)).collect();
                    t[grid.index(&rest)].map(|x| x + 1)
                })
                .min(),
            // max |y| with Ay <= a
            RoundingSystem::Geq1 => Some(
                cols.iter()
                    .filter(|v| v.iter().zip(a).all(|(vi, ai)| vi <= ai))
                    .filter_map(|v| {
                        let rest: Vec<i64> = a.iter().zip(v).map(|(ai, vi)| ai - vi).collect();
                        t[grid.index(&rest)].map(|x| x + 1)
                    })
                    .max()
                    .unwrap_or(0),
            ),
            // min |y| with Ay = a
            RoundingSystem::Eq1 => cols
                .iter()
                .filter(|v| v.iter().zip(a).all(|(vi, ai)| vi <= ai))
                .filter_map(|v| {
                    let rest: Vec<i64> = a.iter().zip(v).map(|(ai, vi)| ai - vi).collect();
                    t[grid.index(&rest)].map(|x| x + 1)
                })
                .min(),
        };
    }
    t
}

/// LP optima as functions of the right-hand side, through the dual
/// polyhedra: `max <a,x>` over the packing polytope, `min <a,x>` over the
/// covering polyhedron, and the height of the cone over `{(v_i,1),(0,1)}`.
pub(crate) enum LpValues {
    Vertices { sense: Sense, vertices: Vec<Vec<ExactScalar>> },
    Cone { facets: Vec<Vec<BigInt>>, lineality: Vec<Vec<BigInt>> },
}

impl LpValues {
    pub fn new(system: RoundingSystem, a: &ExactMatrix, cols: &[Vec<i64>]) -> Result<Self> {
        Ok(match system {
            RoundingSystem::Leq1 => LpValues::Vertices {
                sense: Sense::Max,
                vertices: packing_polytope(a)?.vertices,
            },
            RoundingSystem::Geq1 => LpValues::Vertices {
                sense: Sense::Min,
                vertices: covering_polyhedron(a)?.vertices,
            },
            RoundingSystem::Eq1 => {
                let mut gens: Vec<Vec<i64>> = cols.iter().map(|v| [v.as_slice(), &[1]].concat()).collect();
                let mut t = vec![0; a.rows() + 1];
                t[a.rows()] = 1;
                gens.push(t);
                let dual = ConeDd::from_inequalities_i64(a.rows() + 1, &gens);
                LpValues::Cone {
                    facets: dual.rays(),
                    lineality: dual.lineality(),
                }
            }
        })
    }

    /// `None` when the LP is infeasible.
    pub fn value(&self, a: &[i64]) -> Option<ExactScalar> {
        match self {
            LpValues::Vertices { sense, vertices } => {
                let vals = vertices.iter().map(|v| dot_mixed(v, a));
                match sense {
                    Sense::Max => vals.max(),
                    Sense::Min => vals.min(),
                }
            }
            LpValues::Cone { facets, lineality } => {
                let n = a.len();
                let lin = |c: &[BigInt]| -> BigInt { c[..n].iter().zip(a).map(|(x, &y)| x * y).sum() };
                if lineality.iter().any(|l| !lin(l).is_zero()) {
                    return None;
                }
                let mut t = ExactScalar::zero();
                for c in facets {
                    let ca = lin(c);
                    if c[n].is_zero() {
                        if ca.is_negative() {
                            return None;
                        }
                    } else {
                        let bound = ExactScalar::new(-ca, c[n].clone());
                        if bound > t {
                            t = bound;
                        }
                    }
                }
                Some(t)
            }
        }
    }
}

fn rounded(system: RoundingSystem, lp: &ExactScalar) -> BigInt {
    match system {
        RoundingSystem::Geq1 => lp.floor().to_integer(),
        _ => lp.ceil().to_integer(),
    }
}

fn failure(system: RoundingSystem, a: &[i64], lp: Option<ExactScalar>, ip: Option<i64>) -> Option<RoundingCounterexample> {
    let lp = lp?;
    let r = rounded(system, &lp);
    if ip.map(BigInt::from) == Some(r.clone()) {
        return None;
    }
    Some(RoundingCounterexample {
        a: a.to_vec(),
        lp_value: lp,
        rounded: r,
        ip_value: ip,
    })
}

fn program(system: RoundingSystem, a: &ExactMatrix, rhs: &[i64]) -> LinearProgram {
    match system {
        RoundingSystem::Leq1 => LinearProgram::covering(a, rhs),
        RoundingSystem::Geq1 => LinearProgram::packing(a, rhs),
        RoundingSystem::Eq1 => LinearProgram::equality(a, rhs),
    }
}

/// Compares rounded LP and IP at one right-hand side with the generic
/// solvers.
pub fn probe_rounding(system: RoundingSystem, a: &ExactMatrix, rhs: &[i64]) -> Result<Option<RoundingCounterexample>> {
    let lp = program(system, a, rhs);
    let lp_val = lp_opt_exact(&lp)?.value().cloned();
    if lp_val.is_none() {
        return Ok(None);
    }
    let ip = ip_opt_exact(&lp, DEFAULT_IP_POINT_CAP)?;
    let ip = ip.value().map(|v| v.to_integer().to_i64().expect("small IP value"));
    Ok(failure(system, rhs, lp_val, ip))
}

/// First failing right-hand side in `[0, bound]^n`, or `None`.
pub(crate) fn oracle_sweep(
    system: RoundingSystem,
    a: &ExactMatrix,
    bound: u32,
) -> Result<Option<RoundingCounterexample>> {
    let cols = a.integer_columns()?;
    let grid = Grid::new(a.rows(), bound, DEFAULT_ORACLE_GRID_CAP)?;
    let ip = ip_table(system, &cols, &grid);
    let lp = LpValues::new(system, a, &cols)?;
    Ok(grid
        .points
        .par_iter()
        .enumerate()
        .find_map_first(|(k, x)| failure(system, x, lp.value(x), ip[k])))
}

fn theorem_route(system: RoundingSystem, a: &ExactMatrix, down_set_cap: u64) -> Result<(bool, Option<Vec<i64>>)> {
    let cert = match system {
        RoundingSystem::Leq1 => is_normal(&build_algebra(AlgebraKind::SDownset, a, down_set_cap)?)?,
        RoundingSystem::Geq1 => is_normal(&build_algebra(AlgebraKind::Rees, a, down_set_cap)?)?,
        RoundingSystem::Eq1 => ehrhart_equality(a)?,
    };
    Ok((cert.verdict, cert.witness))
}

fn torsion_route(a: &ExactMatrix) -> Result<Option<bool>> {
    let kf = is_normal(&build_algebra(AlgebraKind::Kf, a, 0)?)?.verdict;
    let torsion_free = torsion_of_quotient(a)?.is_empty();
    let necessary = kf && torsion_free;
    let cols = a.integer_columns()?;
    let equal_sums = cols.windows(2).all(|w| w[0].iter().sum::<i64>() == w[1].iter().sum::<i64>());
    Ok(if equal_sums || !necessary { Some(necessary) } else { None })
}

/// Decides the integer rounding property of `system` for `A`.
///
/// The theorem route is authoritative. The oracle route, when `oracle_box`
/// is given, proves failures but only shows the absence of failures up to
/// the box. A failing theorem route is confirmed by evaluating the rounding
/// gap at its witness. Contradictory routes are a soundness error.
pub fn irp_check(
    system: RoundingSystem,
    a: &ExactMatrix,
    oracle_box: Option<u32>,
    down_set_cap: u64,
) -> Result<RoundingVerdict> {
    a.validate_input()?;
    let n = a.rows();
    let (theorem, witness) = theorem_route(system, a, down_set_cap)?;
    let torsion = if system == RoundingSystem::Eq1 {
        torsion_route(a)?
    } else {
        None
    };
    if let Some(t) = torsion {
        if t != theorem {
            return Err(Error::soundness(format!(
                "eq1 on {a:?}: Hilbert-basis route gives {theorem}, torsion route gives {t}"
            )));
        }
    }
    let found = match oracle_box {
        Some(b) => oracle_sweep(system, a, b)?,
        None => None,
    };
    if theorem && found.is_some() {
        return Err(Error::soundness(format!(
            "{system}: normality route holds but the oracle fails at {:?}",
            found.as_ref().map(|c| &c.a)
        )));
    }
    let mut counterexample = found.clone();
    if !theorem {
        let w = witness.ok_or_else(|| Error::soundness("failing normality route without witness"))?;
        let rhs = &w[..n];
        let confirmed = probe_rounding(system, a, rhs)?;
        if confirmed.is_none() {
            return Err(Error::soundness(format!(
                "{system}: normality witness {w:?} does not give a rounding failure"
            )));
        }
        if counterexample.is_none() {
            counterexample = confirmed;
        }
    }
    Ok(RoundingVerdict {
        system,
        theorem_route: theorem,
        torsion_route: torsion,
        oracle_route: oracle_box.map(|_| found.is_none()),
        oracle_box,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfmcCounterexample {
    pub a: Vec<i64>,
    pub lp_value: ExactScalar,
    /// `min <a,x>` over integral `x >= 0` with `xA >= 1`.
    pub cover_ip: i64,
    /// `max <y,1>` over integral `y >= 0` with `Ay <= a`.
    pub pack_ip: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfmcVerdict {
    pub theorem_route: bool,
    pub covering_integral: bool,
    pub rees_normal: bool,
    /// A fractional vertex of `Q(A)`, if any.
    pub fractional_vertex: Option<Vec<ExactScalar>>,
    pub oracle_route: Option<bool>,
    pub oracle_box: Option<u32>,
    pub counterexample: Option<MfmcCounterexample>,
}

/// Max-flow min-cut for the clutter with incidence matrix `A`.
pub fn mfmc_check(a: &ExactMatrix, oracle_box: Option<u32>) -> Result<MfmcVerdict> {
    a.validate_input()?;
    if !a.is_zero_one() {
        return Err(Error::domain("max-flow min-cut needs a 0/1 incidence matrix"));
    }
    let n = a.rows();
    if n > 20 {
        return Err(Error::resource("clutter_vertex_cap", 20, format!("{n} vertices")));
    }
    let q = dd_convert(&covering_polyhedron(a)?)?;
    let fractional_vertex = q.vertices.iter().find(|v| v.iter().any(|x| !x.is_integer())).cloned();
    let covering_integral = is_integral_polytope(&q)?;
    let rees = is_normal(&build_algebra(AlgebraKind::Rees, a, 0)?)?;
    let theorem = covering_integral && rees.verdict;
    let cols = a.integer_columns()?;

    let found = match oracle_box {
        None => None,
        Some(b) => {
            let grid = Grid::new(n, b, DEFAULT_ORACLE_GRID_CAP)?;
            let pack = ip_table(RoundingSystem::Geq1, &cols, &grid);
            let lp = LpValues::new(RoundingSystem::Geq1, a, &cols)?;
            // integral covers: 0/1 vectors meeting every edge
            let covers: Vec<Vec<i64>> = (0u32..1 << n)
                .map(|m| (0..n).map(|i| i64::from((m >> i) & 1)).collect::<Vec<i64>>())
                .filter(|x| cols.iter().all(|v| crate::arith::dot_i64(x, v) >= 1))
                .collect();
            grid.points.par_iter().enumerate().find_map_first(|(k, w)| {
                let lp = lp.value(w).expect("covering LP is feasible");
                let cover = covers.iter().map(|x| crate::arith::dot_i64(x, w)).min().expect("all-ones covers");
                let packed = pack[k].expect("packing IP is feasible");
                (lp != int(cover) || lp != int(packed)).then(|| MfmcCounterexample {
                    a: w.clone(),
                    lp_value: lp,
                    cover_ip: cover,
                    pack_ip: packed,
                })
            })
        }
    };
    if theorem && found.is_some() {
        return Err(Error::soundness("max-flow min-cut: theorem route holds but the oracle fails"));
    }
    if !rees.verdict {
        let w = rees.witness.ok_or_else(|| Error::soundness("failing normality route without witness"))?;
        if probe_rounding(RoundingSystem::Geq1, a, &w[..n])?.is_none() {
            return Err(Error::soundness(format!("Rees witness {w:?} does not break packing integrality")));
        }
    }
    Ok(MfmcVerdict {
        theorem_route: theorem,
        covering_integral,
        rees_normal: rees.verdict,
        fractional_vertex,
        oracle_route: oracle_box.map(|_| found.is_none()),
        oracle_box,
        counterexample: found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::tests::{cycle, graph_matrix};
    use crate::arith::frac;
    use crate::polyhedra::DEFAULT_DOWN_SET_CAP;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows_i64(rows).unwrap()
    }

    #[test]
    fn lp_examples() {
        let lp = LinearProgram::covering(&ExactMatrix::identity(2), &[1, 1]);
        assert_eq!(
            lp_opt_exact(&lp).unwrap(),
            LpOutcome::Optimal { value: int(2), point: vec![int(1), int(1)] }
        );
        let c3 = cycle(3);
        let LpOutcome::Optimal { value, point } = lp_opt_exact(&LinearProgram::covering(&c3, &[1, 1, 1])).unwrap() else {
            panic!()
        };
        assert_eq!(value, frac(3, 2));
        assert_eq!(point, vec![frac(1, 2); 3]);
        assert_eq!(
            lp_opt_exact(&LinearProgram::packing(&c3, &[1, 1, 1])).unwrap().value(),
            Some(&frac(3, 2))
        );
    }

    #[test]
    fn lp_unbounded_and_infeasible() {
        let up = LinearProgram {
            sense: Sense::Max,
            objective: vec![int(1)],
            constraints: vec![],
            nonnegative: true,
        };
        assert_eq!(lp_opt_exact(&up).unwrap(), LpOutcome::Unbounded);
        let free = LinearProgram {
            sense: Sense::Min,
            objective: vec![int(1), int(0)],
            constraints: vec![Constraint { coeffs: vec![int(0), int(1)], relation: Relation::Eq, rhs: int(2) }],
            nonnegative: false,
        };
        assert_eq!(lp_opt_exact(&free).unwrap(), LpOutcome::Unbounded);
        let none = LinearProgram::equality(&m(&[vec![2]]), &[-1]);
        assert_eq!(lp_opt_exact(&none).unwrap(), LpOutcome::Infeasible);
        let big = LinearProgram::covering(&ExactMatrix::identity(LP_VARIABLE_CAP + 1), &[1; LP_VARIABLE_CAP + 1]);
        assert!(matches!(lp_opt_exact(&big), Err(Error::Resource { cap: "lp_variable_cap", .. })));
    }

    #[test]
    fn ip_examples() {
        let two = m(&[vec![2]]);
        assert_eq!(ip_opt_exact(&LinearProgram::covering(&two, &[3]), 1000).unwrap().value(), Some(&int(2)));
        let c3 = cycle(3);
        assert_eq!(ip_opt_exact(&LinearProgram::covering(&c3, &[1, 1, 1]), 1000).unwrap().value(), Some(&int(2)));
        assert_eq!(ip_opt_exact(&LinearProgram::packing(&c3, &[1, 1, 1]), 1000).unwrap().value(), Some(&int(1)));
        assert_eq!(ip_opt_exact(&LinearProgram::equality(&c3, &[1, 1, 1]), 1000).unwrap().value(), None);
        let up = LinearProgram {
            sense: Sense::Max,
            objective: vec![int(1)],
            constraints: vec![],
            nonnegative: true,
        };
        assert!(matches!(ip_opt_exact(&up, 10), Err(Error::Resource { cap: "ip_search_bound", .. })));
    }

    #[test]
    fn grid_is_lexicographic() {
        let g = Grid::new(2, 1, 100).unwrap();
        assert_eq!(g.points, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(g.index(&[1, 0]), 2);
        assert!(Grid::new(10, 9, 1000).is_err());
    }

    fn check(system: RoundingSystem, a: &ExactMatrix, b: u32) -> RoundingVerdict {
        irp_check(system, a, Some(b), DEFAULT_DOWN_SET_CAP).unwrap()
    }

    #[test]
    fn pentagon_leq1() {
        let v = check(RoundingSystem::Leq1, &cycle(5), 3);
        assert!(v.theorem_route);
        assert_eq!(v.oracle_route, Some(true));
        assert!(v.counterexample.is_none());
    }

    #[test]
    fn triangle_eq1_fails() {
        let v = check(RoundingSystem::Eq1, &cycle(3), 3);
        assert!(!v.theorem_route);
        assert_eq!(v.oracle_route, Some(false));
        assert_eq!(v.torsion_route, Some(false));
        assert_eq!(torsion_of_quotient(&cycle(3)).unwrap(), vec![BigInt::from(2)]);
        let c = v.counterexample.unwrap();
        assert_eq!(c.a.len(), 3);
        assert!(c.ip_value.is_none_or(|ip| BigInt::from(ip) > c.rounded));
    }

    #[test]
    fn square_eq1_holds() {
        let v = check(RoundingSystem::Eq1, &cycle(4), 3);
        assert!(v.theorem_route);
        assert_eq!(v.oracle_route, Some(true));
        assert_eq!(v.torsion_route, Some(true));
    }

    #[test]
    fn two_pentagons_geq1_fails_by_witness() {
        let two = graph_matrix(
            10,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 8), (8, 9), (9, 5)],
        );
        let v = irp_check(RoundingSystem::Geq1, &two, None, 10).unwrap();
        assert!(!v.theorem_route);
        let c = v.counterexample.unwrap();
        assert!(BigInt::from(c.ip_value.unwrap()) < c.rounded);
    }

    #[test]
    fn fast_tables_match_generic_solvers() {
        let cases = [cycle(3), cycle(4), m(&[vec![2, 1, 0], vec![0, 1, 2]]), m(&[vec![1, 2], vec![2, 1], vec![1, 0]])];
        for a in &cases {
            let cols = a.integer_columns().unwrap();
            let grid = Grid::new(a.rows(), 2, 1000).unwrap();
            for system in RoundingSystem::ALL {
                let ip = ip_table(system, &cols, &grid);
                let lp = LpValues::new(system, a, &cols).unwrap();
                for (k, x) in grid.points.iter().enumerate() {
                    let prog = program(system, a, x);
                    let generic_lp = lp_opt_exact(&prog).unwrap().value().cloned();
                    assert_eq!(lp.value(x), generic_lp, "{system} LP at {x:?} for {a:?}");
                    if generic_lp.is_some() {
                        let generic_ip = ip_opt_exact(&prog, 100_000).unwrap();
                        assert_eq!(ip[k].map(int), generic_ip.value().cloned(), "{system} IP at {x:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn mfmc_examples() {
        let v = mfmc_check(&cycle(4), Some(3)).unwrap();
        assert!(v.theorem_route);
        assert_eq!(v.oracle_route, Some(true));
        let v = mfmc_check(&cycle(3), Some(3)).unwrap();
        assert!(!v.theorem_route);
        assert!(!v.covering_integral);
        assert_eq!(v.fractional_vertex, Some(vec![frac(1, 2); 3]));
        assert_eq!(v.oracle_route, Some(false));
        assert!(matches!(mfmc_check(&m(&[vec![2]]), None), Err(Error::Domain(_))));
    }

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..=5, 1usize..=5)
            .prop_flat_map(|(n, q)| proptest::collection::vec(proptest::collection::vec(0i64..=2, q), n))
            .prop_filter_map("zero row or column", |rows| {
                let a = ExactMatrix::from_rows_i64(&rows).ok()?;
                a.validate_input().ok()?;
                Some(a)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn routes_agree(a in small_matrix()) {
            for system in RoundingSystem::ALL {
                let v = irp_check(system, &a, Some(3), DEFAULT_DOWN_SET_CAP).unwrap();
                prop_assert_eq!(Some(v.theorem_route), v.oracle_route, "{} on {:?}", system, a);
            }
        }

        #[test]
        fn rounding_gap_has_the_right_sign(a in small_matrix(), seed in 0u64..1000) {
            let n = a.rows();
            let rhs: Vec<i64> = (0..n).map(|i| ((seed >> (2 * i)) & 3) as i64).collect();
            for system in RoundingSystem::ALL {
                let prog = program(system, &a, &rhs);
                let Some(lp) = lp_opt_exact(&prog).unwrap().value().cloned() else { continue };
                if let Some(ip) = ip_opt_exact(&prog, 100_000).unwrap().value() {
                    match system {
                        RoundingSystem::Geq1 => prop_assert!(ip <= &lp.floor()),
                        _ => prop_assert!(ip >= &lp.ceil()),
                    }
                }
            }
        }

        #[test]
        fn covering_and_packing_lp_values_coincide(a in small_matrix(), seed in 0u64..1000) {
            let n = a.rows();
            let w: Vec<i64> = (0..n).map(|i| ((seed >> (2 * i)) & 3) as i64).collect();
            let cover = lp_opt_exact(&LinearProgram::weighted_cover(&a, &w)).unwrap();
            let pack = lp_opt_exact(&LinearProgram::packing(&a, &w)).unwrap();
            prop_assert_eq!(cover.value(), pack.value());
        }
    }
}
