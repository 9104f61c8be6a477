//! Clutters and simple graphs: incidence matrices, duals, minimal vertex
//! covers, matroid bases, chordless cycles, enumeration up to isomorphism,
//! and the duality checks that tie them to normality and rounding.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebras::{build_algebra, is_normal, AlgebraKind};
use crate::arith::{int, ExactMatrix, ExactScalar};
use crate::error::{Error, Result};
use crate::hilbert::is_hilbert_basis;
use crate::rounding::{irp_check, RoundingSystem, DEFAULT_ORACLE_BOX};
use crate::polyhedra::DEFAULT_DOWN_SET_CAP;

/// Largest vertex count for subset enumeration.
pub const SUBSET_VERTEX_CAP: usize = 20;
/// Default cap on candidate subsets examined when listing matroid bases.
pub const DEFAULT_BASIS_CAP: u64 = 2_000_000;

/// A clutter on vertices `0..n`. Each edge is stored sorted; edge order is
/// the order of construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clutter {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

fn mask(edge: &[usize]) -> u64 {
    edge.iter().fold(0u64, |m, &v| m | 1 << v)
}

fn unmask(m: u64) -> Vec<usize> {
    (0..64).filter(|&i| m >> i & 1 == 1).collect()
}

impl Clutter {
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if vertex_count > 64 {
            return Err(Error::domain("clutters are limited to 64 vertices"));
        }
        let mut out = Vec::with_capacity(edges.len());
        for (k, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("edge {} repeats a vertex", k + 1)));
            }
            if let Some(v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::domain(format!("edge {} uses vertex {} outside 1..{vertex_count}", k + 1, v + 1)));
            }
            out.push(e);
        }
        let masks: Vec<u64> = out.iter().map(|e| mask(e)).collect();
        for i in 0..masks.len() {
            for j in 0..masks.len() {
                if i != j && masks[i] & masks[j] == masks[i] {
                    return Err(Error::domain(format!(
                        "edge {} is contained in edge {}; not a clutter",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Clutter { vertex_count, edges: out })
    }

    /// Columns of a 0/1 matrix as edges.
    pub fn from_incidence(a: &ExactMatrix) -> Result<Self> {
        if !a.is_zero_one() {
            return Err(Error::domain("incidence matrix must have 0/1 entries"));
        }
        let edges = (0..a.cols())
            .map(|j| (0..a.rows()).filter(|&i| !num_traits::Zero::is_zero(a.get(i, j))).collect())
            .collect();
        Clutter::new(a.rows(), edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Edges in lexicographic order.
    pub fn sorted(&self) -> Clutter {
        let mut edges = self.edges.clone();
        edges.sort();
        Clutter { vertex_count: self.vertex_count, edges }
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        let used = self.edges.iter().fold(0u64, |m, e| m | mask(e));
        (0..self.vertex_count).filter(|&v| used >> v & 1 == 0).collect()
    }

    fn masks(&self) -> Vec<u64> {
        self.edges.iter().map(|e| mask(e)).collect()
    }
}

/// Vertex-edge incidence matrix, one column per edge in edge order.
pub fn incidence_matrix(c: &Clutter) -> Result<ExactMatrix> {
    if c.edges.is_empty() {
        return Err(Error::domain("clutter has no edges"));
    }
    let cols: Vec<Vec<i64>> = c
        .edges
        .iter()
        .map(|e| {
            let mut col = vec![0; c.vertex_count];
            for &v in e {
                col[v] = 1;
            }
            col
        })
        .collect();
    ExactMatrix::from_columns_i64(c.vertex_count, &cols)
}

/// Entrywise `1 - a_ij`.
pub fn dual_matrix(a: &ExactMatrix) -> Result<ExactMatrix> {
    if !a.is_zero_one() {
        return Err(Error::domain("dual matrix needs 0/1 entries"));
    }
    let entries: Vec<ExactScalar> = (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .map(|(i, j)| int(1) - a.get(i, j))
        .collect();
    ExactMatrix::new(a.rows(), a.cols(), entries)
}

/// Clutter of minimal vertex covers, in lexicographic order.
pub fn alexander_dual(c: &Clutter) -> Result<Clutter> {
    let n = c.vertex_count;
    if n > SUBSET_VERTEX_CAP {
        return Err(Error::resource(
            "subset_vertex_cap",
            SUBSET_VERTEX_CAP as u64,
            format!("{n} vertices"),
        ));
    }
    let edges = c.masks();
    let covers = |m: u64| edges.iter().all(|&e| e & m != 0);
    let mut minimal: Vec<u64> = Vec::new();
    // increasing size, so any cover containing a recorded one is skipped
    let mut by_size: Vec<u64> = (0u64..1 << n).collect();
    by_size.sort_by_key(|m| (m.count_ones(), *m));
    for m in by_size {
        if minimal.iter().any(|&s| s & !m == 0) {
            continue;
        }
        if covers(m) {
            minimal.push(m);
        }
    }
    let mut out: Vec<Vec<usize>> = minimal.into_iter().map(unmask).collect();
    out.sort();
    Clutter::new(n, out)
}

/// Simple graph on vertices `0..n`; edges stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count > 64 {
            return Err(Error::domain("graphs are limited to 64 vertices"));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (k, (u, v)) in edges.into_iter().enumerate() {
            if u == v {
                return Err(Error::domain(format!("edge {} is a loop", k + 1)));
            }
            if u.max(v) >= vertex_count {
                return Err(Error::domain(format!("edge {} leaves the vertex set", k + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::domain(format!("edge {} is repeated", k + 1)));
            }
            out.push(e);
        }
        Ok(Graph { vertex_count, edges: out })
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()).unwrap()
    }

    pub fn complete_bipartite(p: usize, q: usize) -> Self {
        Graph::new(p + q, (0..p).flat_map(|i| (p..p + q).map(move |j| (i, j))).collect()).unwrap()
    }

    /// Vertex-disjoint union, the second graph shifted past the first.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let s = self.vertex_count;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + s, v + s)));
        Graph::new(s + other.vertex_count, edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn complement(&self) -> Graph {
        let adj = self.adjacency();
        let n = self.vertex_count;
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| adj[i] >> j & 1 == 0)
            .collect();
        Graph::new(n, edges).unwrap()
    }

    pub fn as_clutter(&self) -> Clutter {
        Clutter::new(self.vertex_count, self.edges.iter().map(|&(u, v)| vec![u, v]).collect()).unwrap()
    }

    pub fn incidence_matrix(&self) -> Result<ExactMatrix> {
        incidence_matrix(&self.as_clutter())
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adjacency().contains(&0)
    }

    pub fn components(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = 0u64;
        let mut count = 0;
        for s in 0..self.vertex_count {
            if seen >> s & 1 == 1 {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen |= 1 << s;
            while let Some(u) = stack.pop() {
                for w in unmask(adj[u] & !seen) {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count];
        for s in 0..self.vertex_count {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = colour[u].unwrap();
                for w in unmask(adj[u]) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn has_triangle(&self) -> bool {
        let adj = self.adjacency();
        self.edges.iter().any(|&(u, v)| adj[u] & adj[v] != 0)
    }

    /// Canonical relabelling: the lexicographically least sorted edge list
    /// over all vertex permutations.
    pub fn canonical_form(&self) -> Graph {
        let best = permutations(self.vertex_count)
            .into_iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = self
                    .edges
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap_or_default();
        Graph { vertex_count: self.vertex_count, edges: best }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// All graphs on `n <= 7` vertices up to isomorphism, in canonical form.
pub fn graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::resource("graph_enumeration_cap", 7, format!("{n} vertices")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let index = |u: usize, v: usize| pairs.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let m = pairs.len();
    let canon: BTreeSet<u64> = (0u64..1 << m)
        .into_par_iter()
        .filter_map(|g| {
            // keep g only if it is the least relabelling of itself
            let least = images
                .iter()
                .map(|img| (0..m).filter(|&k| g >> k & 1 == 1).fold(0u64, |acc, k| acc | 1 << img[k]))
                .min()
                .unwrap();
            (least == g).then_some(g)
        })
        .collect();
    Ok(canon
        .into_iter()
        .map(|g| Graph::new(n, (0..m).filter(|&k| g >> k & 1 == 1).map(|k| pairs[k]).collect()).unwrap())
        .collect())
}

pub fn connected_graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>> {
    Ok(graphs_up_to_isomorphism(n)?.into_iter().filter(Graph::is_connected).collect())
}

/// Clutters on exactly `n <= 6` vertices, none isolated, with between 1 and
/// `max_edges` edges, up to isomorphism. Edges are listed lexicographically.
pub fn clutters_up_to_isomorphism(n: usize, max_edges: usize) -> Result<Vec<Clutter>> {
    if n > 6 {
        return Err(Error::resource("clutter_enumeration_cap", 6, format!("{n} vertices")));
    }
    let perms = permutations(n);
    let full: u64 = (1u64 << n) - 1;
    let subsets: Vec<u64> = (1u64..=full).collect();
    let relabel = |m: u64, p: &[usize]| unmask(m).into_iter().fold(0u64, |acc, v| acc | 1 << p[v]);
    let image: Vec<Vec<u64>> = perms.iter().map(|p| (0..=full).map(|m| relabel(m, p)).collect()).collect();

    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, Vec::new())];
    let mut families: Vec<Vec<u64>> = Vec::new();
    while let Some((start, fam)) = stack.pop() {
        if !fam.is_empty() && fam.iter().fold(0, |m, e| m | e) == full {
            families.push(fam.clone());
        }
        if fam.len() == max_edges {
            continue;
        }
        for (k, &s) in subsets.iter().enumerate().skip(start) {
            if fam.iter().all(|&e| e & s != e && e & s != s) {
                let mut next = fam.clone();
                next.push(s);
                stack.push((k + 1, next));
            }
        }
    }
    let canon: Vec<Vec<u64>> = families
        .par_iter()
        .map(|fam| {
            image
                .iter()
                .map(|img| {
                    let mut f: Vec<u64> = fam.iter().map(|&e| img[e as usize]).collect();
                    f.sort_unstable();
                    f
                })
                .min()
                .unwrap()
        })
        .collect();
    found.extend(canon);
    let mut out: Vec<Clutter> = found
        .into_iter()
        .map(|fam| {
            let mut edges: Vec<Vec<usize>> = fam.into_iter().map(unmask).collect();
            edges.sort();
            Clutter::new(n, edges).unwrap()
        })
        .collect();
    out.sort_by(|a, b| (a.edges.len(), &a.edges).cmp(&(b.edges.len(), &b.edges)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElVegetarianoReport {
    pub triangle_free: bool,
    /// Whether the minimal vertex covers of the complement are exactly the
    /// complements of the edges.
    pub ideals_equal: bool,
}

/// Compares the Alexander dual of the complement graph with the edge
/// complements `X \ e`; the two must coincide exactly for triangle-free
/// graphs.
pub fn check_el_vegetariano(g: &Graph) -> Result<ElVegetarianoReport> {
    if g.has_isolated_vertex() {
        return Err(Error::domain("graph has an isolated vertex"));
    }
    let n = g.vertex_count;
    let dual = alexander_dual(&g.complement().as_clutter())?;
    let lhs: BTreeSet<Vec<usize>> = dual.edges.into_iter().collect();
    let rhs: BTreeSet<Vec<usize>> = g
        .edges
        .iter()
        .map(|&(u, v)| (0..n).filter(|&w| w != u && w != v).collect())
        .collect();
    let report = ElVegetarianoReport {
        triangle_free: !g.has_triangle(),
        ideals_equal: lhs == rhs,
    };
    if report.triangle_free != report.ideals_equal {
        return Err(Error::soundness(format!("triangle test and cover comparison disagree on {g:?}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// Normality of the Rees algebra of `I`.
    pub rees_normal: bool,
    /// Normality of `K[x^w t]` over the down-set of `A*`.
    pub dual_downset_normal: bool,
    /// `{-e_i} ∪ {(v_i*, 1)}` is a Hilbert basis.
    pub gamma_hilbert_basis: bool,
    /// No rounding failure for `x >= 0; xA >= 1`.
    pub geq1_rounding: bool,
    /// No rounding failure for `x >= 0; xA* <= 1`.
    pub dual_leq1_rounding: bool,
    pub verdict: bool,
    pub oracle_box: Option<u32>,
}

impl DualityReport {
    pub fn conditions(&self) -> [bool; 5] {
        [
            self.rees_normal,
            self.dual_downset_normal,
            self.gamma_hilbert_basis,
            self.geq1_rounding,
            self.dual_leq1_rounding,
        ]
    }
}

fn dualize(a: &ExactMatrix) -> Result<ExactMatrix> {
    let d = dual_matrix(a)?;
    d.validate_input().map_err(|e| match e {
        Error::Domain(m) => Error::domain(format!("dual matrix is not admissible: {m}")),
        other => other,
    })?;
    Ok(d)
}

/// Evaluates the five equivalent conditions on a clutter. The rounding
/// conditions hold when neither the box oracle, if any, nor the confirmed
/// normality witness exhibits a failure. Any disagreement is a soundness error.
pub fn verify_duality_theorem(c: &Clutter, oracle_box: Option<u32>) -> Result<DualityReport> {
    let a = incidence_matrix(c)?;
    a.validate_input()?;
    let star = dualize(&a)?;
    let n = a.rows();
    let rees = is_normal(&build_algebra(AlgebraKind::Rees, &a, 0)?)?.verdict;
    let downset = is_normal(&build_algebra(AlgebraKind::SDownset, &star, DEFAULT_DOWN_SET_CAP)?)?.verdict;
    let mut gamma: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n + 1];
            e[i] = -1;
            e
        })
        .collect();
    for v in star.integer_columns()? {
        let mut g = v;
        g.push(1);
        gamma.push(g);
    }
    let gamma = is_hilbert_basis(&gamma)?.verdict;
    let geq1 = irp_check(RoundingSystem::Geq1, &a, oracle_box, DEFAULT_DOWN_SET_CAP)?
        .counterexample
        .is_none();
    let leq1 = irp_check(RoundingSystem::Leq1, &star, oracle_box, DEFAULT_DOWN_SET_CAP)?
        .counterexample
        .is_none();
    let report = DualityReport {
        rees_normal: rees,
        dual_downset_normal: downset,
        gamma_hilbert_basis: gamma,
        geq1_rounding: geq1,
        dual_leq1_rounding: leq1,
        verdict: rees,
        oracle_box,
    };
    if report.conditions().iter().any(|&x| x != rees) {
        return Err(Error::soundness(format!(
            "duality conditions disagree on {:?}: {:?}",
            c.edges,
            report.conditions()
        )));
    }
    Ok(report)
}

pub fn verify_duality_theorem_default(c: &Clutter) -> Result<DualityReport> {
    verify_duality_theorem(c, Some(DEFAULT_ORACLE_BOX))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphDualNormality {
    pub rees_i: bool,
    pub rees_istar: bool,
}

/// Rees normality of the edge ideal and of the ideal of edge complements.
/// Vertices lying on every edge give zero rows of `A*`; they do not occur in
/// `I*` and are dropped, which does not change normality.
pub fn graph_dual_normality(g: &Graph) -> Result<GraphDualNormality> {
    if !g.is_connected() {
        return Err(Error::domain("graph must be connected"));
    }
    let a = g.incidence_matrix()?;
    let star = dual_matrix(&a)?;
    let keep: Vec<usize> = (0..star.rows())
        .filter(|&i| star.row(i).iter().any(|x| !num_traits::Zero::is_zero(x)))
        .collect();
    let rows: Vec<Vec<ExactScalar>> = keep.iter().map(|&i| star.row(i).to_vec()).collect();
    let star = ExactMatrix::new(rows.len(), star.cols(), rows.concat())?;
    star.validate_input().map_err(|e| match e {
        Error::Domain(m) => Error::domain(format!("dual matrix is not admissible: {m}")),
        other => other,
    })?;
    let rees_i = is_normal(&build_algebra(AlgebraKind::Rees, &a, 0)?)?.verdict;
    let rees_istar = is_normal(&build_algebra(AlgebraKind::Rees, &star, 0)?)?.verdict;
    if rees_i != rees_istar {
        return Err(Error::soundness(format!("Rees normality of I and I* differ on {g:?}")));
    }
    Ok(GraphDualNormality { rees_i, rees_istar })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidKind {
    Uniform { n: usize, k: usize },
    /// Ground set is the edge list of the graph.
    Graphic(Graph),
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Clutter of the bases: all `k`-subsets of an `n`-set, or all maximal
/// spanning forests of a graph (spanning trees when connected).
pub fn matroid_basis_clutter(kind: &MatroidKind, cap: u64) -> Result<Clutter> {
    match kind {
        MatroidKind::Uniform { n, k } => {
            if k > n {
                return Err(Error::domain(format!("uniform matroid needs k <= n, got k={k}, n={n}")));
            }
            let count = binomial(*n, *k);
            if count > cap {
                return Err(Error::resource("matroid_basis_cap", cap, format!("{count} bases")));
            }
            Clutter::new(*n, k_subsets(*n, *k))
        }
        MatroidKind::Graphic(g) => {
            let m = g.edges.len();
            let rank = g.vertex_count - g.components();
            let count = binomial(m, rank);
            if count > cap {
                return Err(Error::resource("matroid_basis_cap", cap, format!("{count} candidate edge sets")));
            }
            let bases = k_subsets(m, rank)
                .into_iter()
                .filter(|s| is_forest(g.vertex_count, &s.iter().map(|&i| g.edges[i]).collect::<Vec<_>>()))
                .collect();
            Clutter::new(m, bases)
        }
    }
}

/// Chordless cycles of length at least three. Each cycle starts at its
/// least vertex and runs in the direction with the smaller second vertex.
pub fn primitive_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    fn extend(s: usize, path: &mut Vec<usize>, on_path: u64, adj: &[u64], out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        // vertices strictly inside the path, which a new vertex must avoid
        let inner = on_path & !(1 << s) & !(1 << last);
        for v in unmask(adj[last]) {
            if v <= s || on_path >> v & 1 == 1 || adj[v] & inner != 0 {
                continue;
            }
            if path.len() >= 2 && adj[v] >> s & 1 == 1 {
                if path[1] < v {
                    let mut c = path.clone();
                    c.push(v);
                    out.push(c);
                }
                continue;
            }
            path.push(v);
            extend(s, path, on_path | 1 << v, adj, out);
            path.pop();
        }
    }
    for s in 0..g.vertex_count {
        let mut path = vec![s];
        extend(s, &mut path, 1 << s, &adj, &mut out);
    }
    out.sort();
    out
}
