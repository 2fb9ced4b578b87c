//! Stars, heavy stars and their cores, the `ĥn` threshold, and iterative
//! star extraction.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::counting::{binomial, binomial_big};
use crate::error::{Error, Result};
use crate::hypergraph::{canonicalize, Hypergraph};
use crate::profiles::{is_jrt_member, JrtParams};
use crate::structure::build_structure;
use crate::vertex_set::VertexSet;

/// Edges sharing a common `centre`, with the rest of each edge in `body`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub centre: VertexSet,
    pub body: VertexSet,
    pub edges: Vec<VertexSet>,
}

impl Star {
    /// The star on `edges` with the given centre; the body is the union of
    /// the edges outside the centre.
    pub fn new(centre: VertexSet, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut edges: Vec<VertexSet> = edges.into_iter().collect();
        canonicalize(&mut edges);
        let body = edges.iter().fold(VertexSet::EMPTY, |acc, &e| acc | (e - centre));
        let star = Star { centre, body, edges };
        star.validate()?;
        Ok(star)
    }

    pub fn empty(centre: VertexSet) -> Self {
        Star {
            centre,
            body: VertexSet::EMPTY,
            edges: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.centre.is_disjoint(self.body) {
            return Err(Error::Precondition(format!(
                "centre {} meets body {}",
                self.centre, self.body
            )));
        }
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| !self.centre.is_subset(**e) || !(**e - self.centre).is_subset(self.body))
        {
            return Err(Error::Precondition(format!(
                "edge {e} does not consist of the centre {} and body vertices",
                self.centre
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.body.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }
}

/// `2r²t³ N^(rt-2)`, saturating at `u128::MAX`.
pub fn heavy_threshold(p: &JrtParams, body_size: usize) -> u128 {
    let (r, t) = (p.r() as u128, p.t() as u128);
    let base = 2 * r * r * t * t * t;
    let exp = (p.ell() - 2) as u32;
    (body_size as u128)
        .checked_pow(exp)
        .and_then(|x| x.checked_mul(base))
        .unwrap_or(u128::MAX)
}

/// Every body vertex has star degree at least the heavy threshold for the
/// body size. The empty star is heavy.
pub fn is_heavy(p: &JrtParams, s: &Star) -> bool {
    let threshold = heavy_threshold(p, s.body.len());
    s.body.iter().all(|v| s.degree(v) as u128 >= threshold)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub vertex: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCore {
    pub core: Star,
    pub removed_order: Vec<Removal>,
}

/// Repeatedly deletes the smallest-id body vertex of minimum degree (and
/// every edge through it) until the remaining star is heavy or empty.
pub fn core(p: &JrtParams, s: &Star) -> StarCore {
    let mut star = s.clone();
    let mut removed_order = Vec::new();
    while !is_heavy(p, &star) {
        let (degree, vertex) = star
            .body
            .iter()
            .map(|v| (star.degree(v), v))
            .min()
            .expect("a star that is not heavy has a body vertex");
        removed_order.push(Removal { vertex, degree });
        star.body.remove(vertex);
        star.edges.retain(|e| !e.contains(vertex));
    }
    StarCore {
        core: star,
        removed_order,
    }
}

/// `ĥn(n, m)`: the least `N >= 1` with
/// `C(N-1, rt-1) >= rt·m/n - rt·n^(rt-2)`, compared exactly.
pub fn hat_n(p: &JrtParams, n: u64, m: u128) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParams("hat_n needs n >= 1".into()));
    }
    let rt = p.ell() as u64;
    // n·C(N-1, rt-1) >= rt·m - rt·n^(rt-1)
    let rhs = BigInt::from(rt) * BigInt::from(m) - BigInt::from(rt) * BigInt::from(n).pow((rt - 1) as u32);
    let holds = |big_n: u64| -> bool {
        let lhs = BigInt::from(binomial_big(big_n - 1, rt - 1) * BigUint::from(n));
        lhs >= rhs
    };
    if holds(1) {
        return Ok(1);
    }
    let mut hi = 2u64;
    while !holds(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::InvalidParams("hat_n overflow".into()))?;
    }
    let mut lo = hi / 2; // fails
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Checks that every edge of `h` meeting the body of the heavy star `s`
/// contains its centre. Returns the colex-first violating edge, if any.
pub fn centre_containment_check(p: &JrtParams, h: &Hypergraph, s: &Star) -> Result<Option<VertexSet>> {
    if let Some(e) = s.edges.iter().find(|e| !h.contains_edge(**e)) {
        return Err(Error::Precondition(format!("star edge {e} is not an edge of the hypergraph")));
    }
    if !is_heavy(p, s) {
        return Err(Error::Precondition("star is not heavy".into()));
    }
    if !is_jrt_member(p, h) {
        return Err(Error::Precondition("hypergraph is not in J(r,t)".into()));
    }
    Ok(h
        .edges()
        .iter()
        .copied()
        .find(|e| !e.is_disjoint(s.body) && !s.centre.is_subset(*e)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// All current edges containing the chosen centre.
    pub star: Star,
    pub core: StarCore,
    /// Vertex and edge counts before this extraction.
    pub vertices_before: usize,
    pub edges_before: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub hat_n: u64,
    pub extractions: Vec<Extraction>,
    pub residual: Hypergraph,
    pub active: VertexSet,
    pub stop: String,
}

/// Pulls heavy star cores out of `h` one at a time while the active vertex
/// count is at least `ĥn(n, m)` and the edge count exceeds
/// `C(⌊n_i/t⌋, rt)`. Each round runs the structure decomposition, takes its
/// largest star, extends it to every current edge through that centre, and
/// deletes the core's body together with the star's edges.
pub fn extract_stars(p: &JrtParams, h: &Hypergraph) -> Result<ExtractionTrace> {
    if !is_jrt_member(p, h) {
        return Err(Error::Precondition("hypergraph is not in J(r,t)".into()));
    }
    let threshold = hat_n(p, h.n().max(1) as u64, h.len() as u128)?;
    let mut active = h.universe();
    let mut current = h.clone();
    let mut extractions = Vec::new();
    let stop = loop {
        let (n_i, m_i) = (active.len(), current.len());
        if (n_i as u64) < threshold {
            break format!("{n_i} active vertices, below hat_n = {threshold}");
        }
        let cap = binomial((n_i / p.t()) as u64, p.ell() as u64);
        if m_i as u128 <= cap {
            break format!("{m_i} edges, at most C({}, {}) = {cap}", n_i / p.t(), p.ell());
        }
        let out = build_structure(p, &current)?;
        let Some(best) = out
            .certificate
            .stars
            .iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then(b.centre.cmp(&a.centre)))
        else {
            break "no stars in the structure decomposition".into();
        };
        let star = Star::new(
            best.centre,
            current.edges().iter().copied().filter(|e| best.centre.is_subset(*e)),
        )?;
        let peeled = core(p, &star);
        if peeled.core.is_empty() {
            break format!("core of the star on {} is empty", star.centre);
        }
        if let Some(e) = centre_containment_check(p, &current, &peeled.core)? {
            return Err(Error::assertion(
                "centre-containment",
                format!("edge {e} meets the core body but misses centre {}", star.centre),
            ));
        }
        let gone = peeled.core.body;
        current = current.filter(|e| !star.edges.contains(&e));
        if let Some(e) = current.edges().iter().find(|e| !e.is_disjoint(gone)) {
            return Err(Error::assertion(
                "extraction",
                format!("edge {e} outside the star touches deleted vertices"),
            ));
        }
        active = active - gone;
        extractions.push(Extraction {
            star,
            core: peeled,
            vertices_before: n_i,
            edges_before: m_i,
        });
    };
    Ok(ExtractionTrace {
        hat_n: threshold,
        extractions,
        residual: current,
        active,
        stop,
    })
}
