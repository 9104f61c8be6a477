//! Exponent-vector generators of the monomial algebras attached to a
//! non-negative integer matrix, and their normality.

use std::fmt;
use std::str::FromStr;

use crate::arith::ExactMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_certificate, ConeSpec, HilbertCertificate, Lattice};
use crate::polyhedra::down_set;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    /// `R[It]`: `{e_i} ∪ {(v_i, 1)}`.
    Rees,
    /// `R[It, t^-1]`: the Rees generators and `(0, -1)`.
    ExtendedRees,
    /// `K[F]`: `{v_i}` in the lattice they generate.
    Kf,
    /// `K[Ft]`: `{(v_i, 1)}`.
    Kft,
    /// `K[Ft ∪ {t}]`: `{(v_i, 1)} ∪ {(0, 1)}`.
    KftT,
    /// `S`: `{(w, 1)}` over the down-set of the columns.
    SDownset,
    /// The Ehrhart ring of `conv(0, v_1, ..., v_q)`, kept as a cone and lattice.
    Ehrhart,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 7] = [
        AlgebraKind::Rees,
        AlgebraKind::ExtendedRees,
        AlgebraKind::Kf,
        AlgebraKind::Kft,
        AlgebraKind::KftT,
        AlgebraKind::SDownset,
        AlgebraKind::Ehrhart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Rees => "rees",
            AlgebraKind::ExtendedRees => "extended_rees",
            AlgebraKind::Kf => "kf",
            AlgebraKind::Kft => "kft",
            AlgebraKind::KftT => "kft_t",
            AlgebraKind::SDownset => "S_downset",
            AlgebraKind::Ehrhart => "ehrhart",
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        let kind = match key.as_str() {
            "a" | "rees" => AlgebraKind::Rees,
            "b" | "extended_rees" => AlgebraKind::ExtendedRees,
            "c" | "kf" => AlgebraKind::Kf,
            "d" | "kft" => AlgebraKind::Kft,
            "e" | "kft_t" => AlgebraKind::KftT,
            "f" | "s_downset" | "s" => AlgebraKind::SDownset,
            "g" | "ehrhart" => AlgebraKind::Ehrhart,
            _ => return Err(Error::domain(format!("unknown algebra kind `{s}`"))),
        };
        Ok(kind)
    }
}

/// Semigroup data of one of the algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub kind: AlgebraKind,
    pub source: ExactMatrix,
    /// Semigroup generators; empty for the Ehrhart ring.
    pub generators: Vec<Vec<i64>>,
    /// Generators of the cone the algebra lives over.
    pub cone_generators: Vec<Vec<i64>>,
    pub lattice: Lattice,
}

impl AlgebraSpec {
    pub fn ambient_dim(&self) -> usize {
        self.cone_generators.first().map_or(0, Vec::len)
    }

    pub fn cone(&self) -> Result<ConeSpec> {
        Ok(ConeSpec::new(self.ambient_dim(), self.cone_generators.clone())?.with_lattice(self.lattice.clone()))
    }
}

fn lift(v: &[i64], last: i64) -> Vec<i64> {
    let mut out = v.to_vec();
    out.push(last);
    out
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn canonical(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v.dedup();
    v
}

pub fn build_algebra(kind: AlgebraKind, a: &ExactMatrix, down_set_cap: u64) -> Result<AlgebraSpec> {
    a.validate_input()?;
    let n = a.rows();
    let cols = a.integer_columns()?;
    let rees = || {
        let mut g: Vec<Vec<i64>> = (0..n).map(|i| unit(n + 1, i)).collect();
        g.extend(cols.iter().map(|v| lift(v, 1)));
        g
    };
    let kft_t = || {
        let mut g: Vec<Vec<i64>> = cols.iter().map(|v| lift(v, 1)).collect();
        g.push(unit(n + 1, n));
        g
    };
    let (generators, lattice) = match kind {
        AlgebraKind::Rees => (rees(), Lattice::Full),
        AlgebraKind::ExtendedRees => {
            let mut g = rees();
            g.push(lift(&vec![0; n], -1));
            (g, Lattice::Full)
        }
        AlgebraKind::Kf => (cols.clone(), Lattice::Generated),
        AlgebraKind::Kft => (cols.iter().map(|v| lift(v, 1)).collect(), Lattice::Generated),
        AlgebraKind::KftT => (kft_t(), Lattice::Generated),
        AlgebraKind::SDownset => (
            down_set(a, down_set_cap)?.iter().map(|w| lift(w, 1)).collect(),
            Lattice::Full,
        ),
        AlgebraKind::Ehrhart => {
            let cone = canonical(kft_t());
            return Ok(AlgebraSpec {
                kind,
                source: a.clone(),
                generators: Vec::new(),
                cone_generators: cone,
                lattice: Lattice::Full,
            });
        }
    };
    let generators = canonical(generators);
    Ok(AlgebraSpec {
        kind,
        source: a.clone(),
        cone_generators: generators.clone(),
        generators,
        lattice,
    })
}

/// Normality of the algebra: the generators form a Hilbert basis of the
/// cone's points in the algebra's lattice. The Ehrhart ring is normal by
/// construction and is answered without computation.
pub fn is_normal(spec: &AlgebraSpec) -> Result<HilbertCertificate> {
    if spec.kind == AlgebraKind::Ehrhart {
        return Ok(HilbertCertificate {
            verdict: true,
            witness: None,
            basis: None,
        });
    }
    hilbert_certificate(&spec.cone()?)
}

/// Normality of the extended Rees algebra, answered through the Rees
/// algebra since the two are normal together.
pub fn extended_rees_normal(a: &ExactMatrix, down_set_cap: u64) -> Result<bool> {
    Ok(is_normal(&build_algebra(AlgebraKind::Rees, a, down_set_cap)?)?.verdict)
}

/// Whether `K[Ft ∪ {t}]` equals the Ehrhart ring of `conv(0, v_1, ..., v_q)`,
/// i.e. whether `{(v_i, 1), (0, 1)}` is a Hilbert basis of `Z^{n+1}`.
pub fn ehrhart_equality(a: &ExactMatrix) -> Result<HilbertCertificate> {
    let spec = build_algebra(AlgebraKind::Ehrhart, a, 0)?;
    hilbert_certificate(&ConeSpec::new(spec.ambient_dim(), spec.cone_generators)?)
}
