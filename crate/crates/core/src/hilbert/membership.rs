use std::collections::HashSet;

use super::{ConeSpec, EmbeddedCone};
use crate::error::{Error, Result};

/// Default cap on search states visited by the membership search.
pub const DEFAULT_MEMBERSHIP_STATE_CAP: u64 = 5_000_000;

/// Result of a semigroup membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Coefficients, one per input generator in input order.
    Member(Vec<u64>),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

struct Search<'a> {
    cone: &'a EmbeddedCone,
    /// Generators in coordinates with their degrees, descending by degree.
    gens: Vec<(usize, Vec<i64>, i128)>,
    dead: HashSet<(usize, Vec<i64>)>,
    visited: u64,
    cap: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize, rest: &[i64], coeffs: &mut [u64]) -> Result<bool> {
        if rest.iter().all(|&v| v == 0) {
            return Ok(true);
        }
        if i == self.gens.len() || !self.cone.contains_coords(rest) {
            return Ok(false);
        }
        let key = (i, rest.to_vec());
        if self.dead.contains(&key) {
            return Ok(false);
        }
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::resource(
                "membership_state_cap",
                self.cap,
                "membership search did not finish",
            ));
        }
        let (idx, g, deg) = self.gens[i].clone();
        let max = (self.cone.degree(rest) / deg) as u64;
        for m in (0..=max).rev() {
            let next: Vec<i64> = rest.iter().zip(&g).map(|(r, x)| r - m as i64 * x).collect();
            coeffs[idx] = m;
            if self.run(i + 1, &next, coeffs)? {
                return Ok(true);
            }
        }
        coeffs[idx] = 0;
        self.dead.insert(key);
        Ok(false)
    }
}

/// Decides whether `target` is a non-negative integer combination of
/// `generators`, returning one such combination.
///
/// Complete when the cone is pointed: every generator then has positive
/// degree under the facet grading, which bounds each multiplicity by
/// `deg(target) / deg(g)`.
pub fn semigroup_membership(target: &[i64], generators: &[Vec<i64>], state_cap: u64) -> Result<Membership> {
    let d = target.len();
    if let Some(g) = generators.iter().find(|g| g.len() != d) {
        return Err(Error::domain(format!("generator {g:?} does not have length {d}")));
    }
    if target.iter().all(|&x| x == 0) {
        return Ok(Membership::Member(vec![0; generators.len()]));
    }
    let spec = ConeSpec::new(d, generators.to_vec())?;
    let cone = match EmbeddedCone::build(&spec) {
        Ok(c) => c,
        Err(Error::Domain(m)) if m.contains("not pointed") => {
            return Err(Error::resource(
                "membership_grading",
                0,
                format!("no positive grading bounds the search ({m})"),
            ))
        }
        Err(e) => return Err(e),
    };
    let Some(y) = cone.embedding.forward(target) else {
        return Ok(Membership::NotMember);
    };
    // cone generators are deduplicated; remember one input index for each
    let mut gens: Vec<(usize, Vec<i64>, i128)> = spec
        .generators
        .iter()
        .zip(&cone.coords)
        .map(|(g, c)| {
            let idx = generators.iter().position(|h| h == g).unwrap();
            (idx, c.clone(), cone.degree(c))
        })
        .collect();
    gens.sort_by(|a, b| b.2.cmp(&a.2).then(a.1.cmp(&b.1)));
    let mut search = Search {
        cone: &cone,
        gens,
        dead: HashSet::new(),
        visited: 0,
        cap: state_cap,
    };
    let mut coeffs = vec![0u64; generators.len()];
    if search.run(0, &y, &mut coeffs)? {
        Ok(Membership::Member(coeffs))
    } else {
        Ok(Membership::NotMember)
    }
}
