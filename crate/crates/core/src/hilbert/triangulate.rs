
use crate::error::{Error, Result};
use crate::polyhedra::ConeDd;

/// Placing triangulation of a cone together with the facet data of the
/// cone it covers.
#[derive(Clone, Debug)]
pub(crate) struct Triangulation {
    /// Each simplex as sorted generator indices.
    pub simplices: Vec<Vec<usize>>,
    /// Inner facet normals `c` (with `c . x >= 0` on the cone).
    pub facets: Vec<Vec<i64>>,
    /// Basis of the orthogonal complement of the cone's span.
    pub complement: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn width_error() -> Error {
    Error::resource("arithmetic_width", 64, "facet normal entry exceeds 64 bits")
}

/// Inserts the generators in the given order. A generator outside the
/// current span is coned over every simplex; otherwise it is joined to every
/// boundary face that it sees. Generators already in the cone are skipped.
pub(crate) fn placing_triangulation(dim: usize, gens: &[Vec<i64>]) -> Result<Triangulation> {
    let mut dual = ConeDd::new(dim);
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let complement = dual.lineality_i64().ok_or_else(width_error)?;
        let raises_rank = complement.iter().any(|l| dot(l, g) != 0);
        if raises_rank {
            if simplices.is_empty() {
                simplices.push(vec![k]);
            } else {
                for s in simplices.iter_mut() {
                    s.push(k);
                }
            }
        } else {
            let rays = dual.rays_i64().ok_or_else(width_error)?;
            let zeros = dual.ray_zero_sets();
            let mut added = Vec::new();
            for (c, z) in rays.iter().zip(&zeros) {
                if dot(c, g) >= 0 {
                    continue;
                }
                for s in &simplices {
                    let outside: Vec<usize> = s.iter().copied().filter(|&i| !z.contains(i)).collect();
                    if outside.len() == 1 {
                        let mut t: Vec<usize> = s.iter().copied().filter(|&i| i != outside[0]).collect();
                        t.push(k);
                        added.push(t);
                    }
                }
            }
            simplices.extend(added);
        }
        dual.add_i64(g);
    }
    let facets = dual.rays_i64().ok_or_else(width_error)?;
    let complement = dual.lineality_i64().ok_or_else(width_error)?;
    Ok(Triangulation {
        simplices,
        facets,
        complement,
    })
}
