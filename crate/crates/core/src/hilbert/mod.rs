//! Hilbert bases of pointed rational cones, semigroup membership and the
//! integer decomposition property.

mod decomposition;
mod lattice;
mod membership;
mod triangulate;

pub use decomposition::{integer_decomposition_check, DecompositionVerdict, DEFAULT_POINT_CAP};
pub use lattice::Lattice;
pub use membership::{semigroup_membership, Membership, DEFAULT_MEMBERSHIP_STATE_CAP};

pub(crate) use lattice::LatticeEmbedding;
pub(crate) use triangulate::Triangulation;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::{int, kernel_basis, smith_normal_form, ExactMatrix, ExactScalar};
use crate::error::{Error, Result};

/// Largest simplex volume whose parallelepiped is enumerated.
pub const DEFAULT_SIMPLEX_VOLUME_CAP: u64 = 2_000_000;

/// Generators of a rational cone together with the lattice its points are
/// counted in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub ambient_dim: usize,
    /// Nonzero, duplicate-free, sorted lexicographically.
    pub generators: Vec<Vec<i64>>,
    pub lattice: Lattice,
}

impl ConeSpec {
    /// Zero vectors are dropped since they generate nothing.
    pub fn new(ambient_dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_dim) {
            return Err(Error::domain(format!(
                "generator {g:?} does not have length {ambient_dim}"
            )));
        }
        let mut generators: Vec<Vec<i64>> = generators
            .into_iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        generators.sort();
        generators.dedup();
        Ok(ConeSpec {
            ambient_dim,
            generators,
            lattice: Lattice::Full,
        })
    }

    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = lattice;
        self
    }

    /// Infers the ambient dimension from the first vector.
    pub fn from_vectors(vectors: &[Vec<i64>]) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        Self::new(d, vectors.to_vec())
    }
}

/// Outcome of a Hilbert-basis test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertCertificate {
    pub verdict: bool,
    /// A lattice point of the cone that is not a non-negative integer
    /// combination of the generators.
    pub witness: Option<Vec<i64>>,
    pub basis: Option<Vec<Vec<i64>>>,
}

/// A cone expressed in integer coordinates on its lattice, triangulated,
/// with its facets and a positive grading.
#[derive(Clone, Debug)]
pub(crate) struct EmbeddedCone {
    pub embedding: LatticeEmbedding,
    /// Generators in lattice coordinates, in input order.
    pub coords: Vec<Vec<i64>>,
    pub triangulation: Triangulation,
    /// Sum of the facet normals; positive on every nonzero point of the cone.
    pub grading: Vec<i64>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

impl EmbeddedCone {
    pub fn build(spec: &ConeSpec) -> Result<Self> {
        let embedding = LatticeEmbedding::new(spec.ambient_dim, &spec.generators, &spec.lattice)?;
        let coords: Vec<Vec<i64>> = spec
            .generators
            .iter()
            .map(|g| {
                embedding
                    .forward(g)
                    .ok_or_else(|| Error::domain(format!("generator {g:?} is not a lattice point")))
            })
            .collect::<Result<_>>()?;
        let r = embedding.rank;
        let triangulation = triangulate::placing_triangulation(r, &coords)?;
        if !triangulation.complement.is_empty() {
            return Err(Error::soundness("cone does not span its own coordinate space"));
        }
        let facet_rows: Vec<Vec<ExactScalar>> = triangulation
            .facets
            .iter()
            .map(|c| c.iter().map(|&x| int(x)).collect())
            .collect();
        let lin = kernel_basis(&facet_rows, r);
        if let Some(l) = lin.first() {
            let l: Vec<i64> = l
                .iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::resource("arithmetic_width", 64, "lineality witness")))
                .collect::<Result<_>>()?;
            let w = embedding.inverse(&l);
            return Err(Error::domain(format!(
                "cone is not pointed: both {w:?} and its negative lie in it"
            )));
        }
        let mut grading = vec![0i64; r];
        for c in &triangulation.facets {
            for (g, &x) in grading.iter_mut().zip(c) {
                *g = g
                    .checked_add(x)
                    .ok_or_else(|| Error::resource("arithmetic_width", 64, "grading overflow"))?;
            }
        }
        Ok(EmbeddedCone {
            embedding,
            coords,
            triangulation,
            grading,
        })
    }

    pub fn rank(&self) -> usize {
        self.embedding.rank
    }

    pub fn degree(&self, y: &[i64]) -> i128 {
        dot(&self.grading, y)
    }

    pub fn facet_values(&self, y: &[i64]) -> Vec<i128> {
        self.triangulation.facets.iter().map(|c| dot(c, y)).collect()
    }

    pub fn contains_coords(&self, y: &[i64]) -> bool {
        self.triangulation.facets.iter().all(|c| dot(c, y) >= 0)
    }

    /// Locally irreducible nonzero points of the half-open parallelepiped of
    /// one simplex, in coordinates.
    fn parallelepiped_candidates(&self, simplex: &[usize], cap: u64) -> Result<Vec<Vec<i64>>> {
        let r = self.rank();
        let cols: Vec<Vec<i64>> = simplex.iter().map(|&i| self.coords[i].clone()).collect();
        let g = ExactMatrix::from_columns_i64(r, &cols)?;
        let snf = smith_normal_form(&g)?;
        let diag: Vec<i64> = snf
            .diagonal
            .iter()
            .map(|d| d.to_i64().ok_or_else(|| Error::resource("simplex_volume_cap", cap, "volume exceeds 64 bits")))
            .collect::<Result<_>>()?;
        let volume: i64 = diag.iter().try_fold(1i64, |a, &d| a.checked_mul(d)).ok_or_else(|| {
            Error::resource("simplex_volume_cap", cap, "simplex volume exceeds 64 bits")
        })?;
        if volume == 1 {
            return Ok(Vec::new());
        }
        if volume as u64 > cap {
            return Err(Error::resource(
                "simplex_volume_cap",
                cap,
                format!("a simplicial subcone has volume {volume}"),
            ));
        }
        let u_inv = snf.left.inverse().expect("unimodular");
        let u_inv = int_rows(&u_inv)?;
        let scaled_inv = g.inverse().ok_or_else(|| Error::soundness("simplex is singular"))?;
        // |det| * G^{-1} is integral
        let n = BigInt::from(volume);
        let adj: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                scaled_inv
                    .row(i)
                    .iter()
                    .map(|x| {
                        let v = x * num_rational::BigRational::from_integer(n.clone());
                        v.to_integer()
                            .to_i64()
                            .ok_or_else(|| Error::resource("arithmetic_width", 64, "adjugate entry"))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;

        let vol = volume as i128;
        let mut points: Vec<(Vec<i128>, Vec<i64>)> = Vec::new();
        let mut k = vec![0i64; r];
        loop {
            // x = U^{-1} k runs over coset representatives of Z^r / G Z^r
            let x: Vec<i128> = (0..r)
                .map(|i| (0..r).map(|j| u_inv[i][j] as i128 * k[j] as i128).sum())
                .collect();
            let mu: Vec<i128> = adj
                .iter()
                .map(|row| row.iter().zip(&x).map(|(&a, &b)| a as i128 * b).sum::<i128>().rem_euclid(vol))
                .collect();
            if mu.iter().any(|&m| m != 0) {
                let p: Vec<i64> = (0..r)
                    .map(|i| {
                        let s: i128 = cols.iter().zip(&mu).map(|(c, &m)| c[i] as i128 * m).sum();
                        debug_assert_eq!(s % vol, 0);
                        i64::try_from(s / vol).map_err(|_| Error::resource("arithmetic_width", 64, "parallelepiped point"))
                    })
                    .collect::<Result<_>>()?;
                points.push((mu, p));
            }
            let mut i = 0;
            while i < r && k[i] + 1 == diag[i] {
                k[i] = 0;
                i += 1;
            }
            if i == r {
                break;
            }
            k[i] += 1;
        }
        let irreducible = points
            .iter()
            .enumerate()
            .filter(|(i, (mu, _))| {
                !points
                    .iter()
                    .enumerate()
                    .any(|(j, (nu, _))| j != *i && nu.iter().zip(mu).all(|(a, b)| a <= b))
            })
            .map(|(_, (_, p))| p.clone())
            .collect();
        Ok(irreducible)
    }

    /// Minimal Hilbert basis in coordinates, sorted by degree then lexicographically.
    pub fn hilbert_basis_coords(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        let per_simplex: Vec<Vec<Vec<i64>>> = self
            .triangulation
            .simplices
            .par_iter()
            .map(|s| self.parallelepiped_candidates(s, cap))
            .collect::<Result<_>>()?;
        let mut candidates: Vec<Vec<i64>> = self.coords.clone();
        candidates.extend(per_simplex.into_iter().flatten());
        let mut keyed: Vec<(i128, Vec<i64>)> = candidates.into_iter().map(|y| (self.degree(&y), y)).collect();
        keyed.sort();
        keyed.dedup();
        let mut basis: Vec<(i128, Vec<i128>, Vec<i64>)> = Vec::new();
        for (deg, y) in keyed {
            let fv = self.facet_values(&y);
            let reducible = basis
                .iter()
                .any(|(d, hv, _)| *d < deg && hv.iter().zip(&fv).all(|(h, x)| h <= x));
            if !reducible {
                basis.push((deg, fv, y));
            }
        }
        Ok(basis.into_iter().map(|(_, _, y)| y).collect())
    }
}

fn int_rows(m: &ExactMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_integer().to_i64().ok_or_else(|| Error::resource("arithmetic_width", 64, "transform entry")))
                .collect()
        })
        .collect()
}

/// The unique minimal generating set of the monoid of lattice points in the
/// cone, sorted lexicographically.
pub fn hilbert_basis(cone: &ConeSpec) -> Result<Vec<Vec<i64>>> {
    hilbert_basis_with_cap(cone, DEFAULT_SIMPLEX_VOLUME_CAP)
}

pub fn hilbert_basis_with_cap(cone: &ConeSpec, volume_cap: u64) -> Result<Vec<Vec<i64>>> {
    let e = EmbeddedCone::build(cone)?;
    let mut out: Vec<Vec<i64>> = e
        .hilbert_basis_coords(volume_cap)?
        .iter()
        .map(|y| e.embedding.inverse(y))
        .collect();
    out.sort();
    Ok(out)
}

/// Tests whether the generators of `cone` already form a Hilbert basis of
/// the cone's lattice points.
pub fn hilbert_certificate(cone: &ConeSpec) -> Result<HilbertCertificate> {
    let basis = hilbert_basis(cone)?;
    let witness = basis
        .iter()
        .find(|h| cone.generators.binary_search(h).is_err())
        .cloned();
    Ok(HilbertCertificate {
        verdict: witness.is_none(),
        witness,
        basis: Some(basis),
    })
}

/// Tests whether `vectors` form a Hilbert basis in `Z^d`.
pub fn is_hilbert_basis(vectors: &[Vec<i64>]) -> Result<HilbertCertificate> {
    hilbert_certificate(&ConeSpec::from_vectors(vectors)?)
}

/// Some nonzero `v` with `v` and `-v` in the cone, if the cone is not pointed.
pub fn lineality_witness(cone: &ConeSpec) -> Result<Option<Vec<i64>>> {
    let embedding = LatticeEmbedding::new(cone.ambient_dim, &cone.generators, &Lattice::Full)?;
    let coords: Vec<Vec<i64>> = cone
        .generators
        .iter()
        .map(|g| embedding.forward(g).expect("saturated lattice contains the generators"))
        .collect();
    let t = triangulate::placing_triangulation(embedding.rank, &coords)?;
    let rows: Vec<Vec<ExactScalar>> = t.facets.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
    Ok(kernel_basis(&rows, embedding.rank).first().map(|l| {
        let l: Vec<i64> = l.iter().map(|x| x.to_i64().expect("small lineality vector")).collect();
        embedding.inverse(&l)
    }))
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hb(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        hilbert_basis(&ConeSpec::from_vectors(gens).unwrap()).unwrap()
    }

    #[test]
    fn two_dimensional_examples() {
        assert_eq!(hb(&[vec![1, 0], vec![1, 2]]), vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(hb(&[vec![0, 1], vec![1, 1], vec![2, 1]]), vec![vec![0, 1], vec![1, 1], vec![2, 1]]);
        let c = is_hilbert_basis(&[vec![1, 0], vec![1, 2]]).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.witness, Some(vec![1, 1]));
        assert!(is_hilbert_basis(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap().verdict);
    }

    #[test]
    fn unimodular_cone() {
        let e: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| i64::from(i == j)).collect()).collect();
        assert_eq!(hb(&e), {
            let mut s = e.clone();
            s.sort();
            s
        });
    }

    #[test]
    fn gamma_of_triangle_is_a_hilbert_basis() {
        let gamma = vec![
            vec![-1, 0, 0, 0],
            vec![0, -1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 1],
        ];
        let c = is_hilbert_basis(&gamma).unwrap();
        assert!(c.verdict);
        // the cone is pointed although it contains negative vectors
        assert_eq!(lineality_witness(&ConeSpec::from_vectors(&gamma).unwrap()).unwrap(), None);
    }

    #[test]
    fn non_pointed_cone_is_rejected_with_witness() {
        let gens = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
        let spec = ConeSpec::from_vectors(&gens).unwrap();
        match hilbert_basis(&spec) {
            Err(Error::Domain(m)) => assert!(m.contains("not pointed")),
            other => panic!("{other:?}"),
        }
        let w = lineality_witness(&spec).unwrap().unwrap();
        assert!(w == vec![1, 0] || w == vec![-1, 0]);
    }

    #[test]
    fn lower_dimensional_cone_in_saturated_lattice() {
        // the plane x3 = x1 + x2 in Z^3
        let gens = vec![vec![1, 0, 1], vec![1, 2, 3]];
        assert_eq!(hb(&gens), vec![vec![1, 0, 1], vec![1, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn generated_lattice() {
        let gens = vec![vec![1, 0], vec![1, 2]];
        let spec = ConeSpec::from_vectors(&gens).unwrap().with_lattice(Lattice::Generated);
        // (1,1) is not in the lattice spanned by the generators
        assert!(hilbert_certificate(&spec).unwrap().verdict);
        let odd = vec![vec![2, 0], vec![1, 1], vec![0, 2]];
        let spec = ConeSpec::from_vectors(&odd).unwrap().with_lattice(Lattice::Generated);
        assert!(hilbert_certificate(&spec).unwrap().verdict);
        let c = is_hilbert_basis(&odd).unwrap();
        assert!(!c.verdict);
    }

    #[test]
    fn empty_cone() {
        let spec = ConeSpec::new(3, vec![vec![0, 0, 0]]).unwrap();
        assert!(hilbert_basis(&spec).unwrap().is_empty());
    }

    #[test]
    fn oracle_sanity() {
        let o = oracle::ConeOracle::new(&[vec![1, 0], vec![1, 2]]);
        assert!(o.contains(&[1, 1]));
        assert!(!o.contains(&[0, 1]));
        assert_eq!(
            oracle::irreducibles(&[vec![1, 0], vec![1, 2]], 3),
            vec![vec![1, 0], vec![1, 1], vec![1, 2]]
        );
    }

    fn random_pointed_cone() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (2usize..=3)
            .prop_flat_map(|d| proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), 1..=4))
            .prop_filter("pointed, nonzero", |g| {
                g.iter().all(|v| v.iter().any(|&x| x != 0))
                    && lineality_witness(&ConeSpec::from_vectors(g).unwrap()).unwrap().is_none()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn matches_brute_force(gens in random_pointed_cone()) {
            let d = gens[0].len() as i64;
            // Hilbert basis elements lie in parallelepipeds spanned by at most d generators
            let got = hb(&gens);
            prop_assert_eq!(got.clone(), oracle::irreducibles(&gens, 3 * d - 1));
            let cert = is_hilbert_basis(&got).unwrap();
            prop_assert!(cert.verdict);
        }
    }
}
