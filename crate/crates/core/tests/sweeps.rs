//! Exhaustive small-instance sweeps checked against independent brute force.

use monalg::algebras::{build_algebra, is_normal, AlgebraKind};
use monalg::clutters::{alexander_dual, graphs_up_to_isomorphism, incidence_matrix, Clutter, Graph};
use monalg::hilbert::{is_hilbert_basis, lineality_witness, ConeSpec};
use monalg::polyhedra::ConeDd;
use proptest::prelude::*;
use rayon::prelude::*;

/// Facet normals of a full-dimensional cone spanned by `gens`.
fn facets(dim: usize, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let dd = ConeDd::from_inequalities_i64(dim, gens);
    assert!(dd.lineality().is_empty(), "cone is not full-dimensional");
    dd.rays_i64().expect("facet normal overflows i64")
}

/// Lattice points of the box `0 <= x <= top` reachable as non-negative
/// integer combinations of `gens` (all non-negative vectors).
struct BoxSemigroup {
    top: Vec<i64>,
    reach: Vec<bool>,
}

impl BoxSemigroup {
    fn new(gens: &[Vec<i64>], top: Vec<i64>) -> Self {
        let size: usize = top.iter().map(|&t| t as usize + 1).product();
        let mut reach = vec![false; size];
        reach[0] = true;
        let mut s = BoxSemigroup { top, reach: Vec::new() };
        // mixed radix with the first coordinate least significant, so x - g precedes x
        for idx in 1..size {
            let x = s.point(idx);
            reach[idx] = gens.iter().any(|g| {
                let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
                y.iter().all(|&v| v >= 0) && reach[s.index(&y)]
            });
        }
        s.reach = reach;
        s
    }

    fn index(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.top).rev().fold(0, |acc, (&v, &t)| acc * (t as usize + 1) + v as usize)
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        self.top
            .iter()
            .map(|&t| {
                let r = (idx % (t as usize + 1)) as i64;
                idx /= t as usize + 1;
                r
            })
            .collect()
    }
}

/// A cone with non-negative generators is normal iff every lattice point of the
/// cone below the generator sum lies in the semigroup: each lattice point is a
/// semigroup element plus a point of the half-open zonotope, which sits in that box.
fn brute_force_normal(gens: &[Vec<i64>]) -> bool {
    let dim = gens[0].len();
    let top: Vec<i64> = (0..dim).map(|k| gens.iter().map(|g| g[k]).sum()).collect();
    let normals = facets(dim, gens);
    let s = BoxSemigroup::new(gens, top);
    (0..s.reach.len()).all(|idx| {
        if s.reach[idx] {
            return true;
        }
        let x = s.point(idx);
        !normals.iter().all(|f| f.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() >= 0)
    })
}

fn rees_generators(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..=n).map(|k| i64::from(k == i)).collect())
        .collect();
    for e in edges {
        let mut v: Vec<i64> = (0..n).map(|k| i64::from(e.contains(&k))).collect();
        v.push(1);
        gens.push(v);
    }
    gens
}

fn graphs_without_isolated_vertices(max_n: usize) -> Vec<Graph> {
    (2..=max_n)
        .flat_map(|n| graphs_up_to_isomorphism(n).unwrap())
        .filter(|g| !g.has_isolated_vertex())
        .collect()
}

fn rees_normal(c: &Clutter) -> bool {
    let a = incidence_matrix(c).unwrap();
    is_normal(&build_algebra(AlgebraKind::Rees, &a, 0).unwrap()).unwrap().verdict
}

/// Relabels onto the vertices that occur in some edge.
fn on_support(c: &Clutter) -> Clutter {
    let mut used: Vec<usize> = c.edges().iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let edges = c
        .edges()
        .iter()
        .map(|e| e.iter().map(|v| used.binary_search(v).unwrap()).collect())
        .collect();
    Clutter::new(used.len(), edges).unwrap()
}

#[test]
fn rees_normality_of_edge_ideals_matches_box_enumeration() {
    let graphs = graphs_without_isolated_vertices(6);
    let verdicts: Vec<(bool, bool)> = graphs
        .par_iter()
        .map(|g| {
            let c = g.as_clutter();
            let brute = brute_force_normal(&rees_generators(g.vertex_count(), c.edges()));
            (rees_normal(&c), brute)
        })
        .collect();
    for (g, (fast, brute)) in graphs.iter().zip(&verdicts) {
        assert_eq!(fast, brute, "{g:?}");
    }
    // two disjoint triangles
    assert!(verdicts.iter().any(|&(v, _)| !v));
}

#[test]
fn triangle_free_graphs_and_dual_of_complement() {
    let mut checked = 0;
    for g in graphs_without_isolated_vertices(6) {
        let complement = g.complement();
        if g.has_triangle() || complement.edges().is_empty() {
            continue;
        }
        let dual = on_support(&alexander_dual(&complement.as_clutter()).unwrap());
        assert_eq!(rees_normal(&g.as_clutter()), rees_normal(&dual), "{g:?}");
        checked += 1;
    }
    assert!(checked > 20);
}

fn random_cone() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=3)
        .prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-3i64..=3, d), 2..=5))
        .prop_filter("pointed, full-dimensional, nonzero", |g| {
            g.iter().all(|v| v.iter().any(|&x| x != 0))
                && lineality_witness(&ConeSpec::from_vectors(g).unwrap()).unwrap().is_none()
                && ConeDd::from_inequalities_i64(g[0].len(), g).lineality().is_empty()
        })
}

/// Non-negative integer combination search, bounded by a positive grading.
fn in_semigroup(gens: &[Vec<i64>], grading: &[i64], x: &[i64]) -> bool {
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    let deg = |v: &[i64]| v.iter().zip(grading).map(|(a, b)| a * b).sum::<i64>();
    if deg(x) <= 0 {
        return false;
    }
    gens.iter().any(|g| {
        let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        deg(&y) >= 0 && in_semigroup(gens, grading, &y)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn hilbert_certificates_are_sound(gens in random_cone()) {
        let dim = gens[0].len();
        let cert = is_hilbert_basis(&gens).unwrap();
        let normals = facets(dim, &gens);
        // interior point of the dual cone
        let grading: Vec<i64> = (0..dim).map(|k| normals.iter().map(|r| r[k]).sum()).collect();
        prop_assert!(gens.iter().all(|g| g.iter().zip(&grading).map(|(a, b)| a * b).sum::<i64>() > 0));
        match &cert.witness {
            Some(w) => {
                prop_assert!(!cert.verdict);
                prop_assert!(normals.iter().all(|f| f.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() >= 0));
                prop_assert!(!in_semigroup(&gens, &grading, w));
            }
            None => prop_assert!(cert.verdict),
        }
        if let Some(basis) = &cert.basis {
            prop_assert!(basis.iter().all(|b| normals.iter().all(|f| f.iter().zip(b).map(|(a, c)| a * c).sum::<i64>() >= 0)));
            prop_assert!(is_hilbert_basis(basis).unwrap().verdict);
        }
    }
}
