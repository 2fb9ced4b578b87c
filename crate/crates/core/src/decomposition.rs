//! Divisible set systems: saturation to a maximal `q`-divisible extension,
//! its antichain of minimal members, and disjoint-union decompositions.
//!
//! A pair `(F, G)` is `q`-divisible when `q` divides `|f ∩ g|` for all
//! `f ∈ F`, `g ∈ G`. Starting from `(F, F ∪ G)` we add every admissible set of
//! size at most `k` (sizes ascending, colex within a size), then read off the
//! minimal nonempty members. Each member of `F` splits into disjoint minimal
//! members because removing a minimal member from a closure member leaves a
//! closure member.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::canonicalize;
use crate::profiles::{divisibility_witness, DivisiblePairParams};
use crate::vertex_set::{k_subsets_of, VertexSet};

/// Largest number of candidate subsets a saturation will scan.
pub const SATURATION_CANDIDATE_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    /// The maximal extension `F*`, colex sorted.
    pub closure: Vec<VertexSet>,
    /// Maximality holds among subsets of this set.
    pub support: VertexSet,
    pub candidates: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub set: VertexSet,
    pub parts: Vec<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub closure: Vec<VertexSet>,
    pub basis: Vec<VertexSet>,
    pub decompositions: Vec<Decomposition>,
    pub support: VertexSet,
    /// Maximum vertex degree of the basis.
    pub basis_max_degree: usize,
}

fn check_sizes(params: &DivisiblePairParams, sets: &[VertexSet]) -> Result<()> {
    match sets.iter().find(|s| s.len() > params.k) {
        Some(s) => Err(Error::Precondition(format!(
            "set {s} has size {} > k = {}",
            s.len(),
            params.k
        ))),
        None => Ok(()),
    }
}

fn check_pair(q: usize, f: &[VertexSet], g: &[VertexSet]) -> Result<()> {
    let all: Vec<VertexSet> = f.iter().chain(g).copied().collect();
    match divisibility_witness(q, f, &all) {
        Some((first, second)) => Err(Error::NotDivisible {
            first,
            second,
            size: first.intersection_size(second),
            q,
        }),
        None => Ok(()),
    }
}

pub fn saturate(params: &DivisiblePairParams, f: &[VertexSet], g: &[VertexSet]) -> Result<Saturation> {
    let q = params.q;
    check_sizes(params, f)?;
    check_sizes(params, g)?;
    check_pair(q, f, g)?;

    let mut closure = f.to_vec();
    canonicalize(&mut closure);
    let support = f.iter().chain(g).fold(VertexSet::EMPTY, |acc, &s| acc | s);
    let width = support.len() as u64;
    let top = params.k.min(support.len());
    let candidates: u128 = (0..=top as u64).map(|i| binomial(width, i)).sum();
    if candidates > SATURATION_CANDIDATE_CAP {
        return Err(Error::SaturationCap {
            candidates,
            cap: SATURATION_CANDIDATE_CAP,
        });
    }

    // Anything admissible must pair divisibly with G and with the initial F;
    // that test is independent per candidate.
    let fixed: Vec<VertexSet> = f.iter().chain(g).copied().collect();
    let mut added: Vec<VertexSet> = Vec::new();
    for size in (0..=top).filter(|s| s % q == 0) {
        let layer: Vec<VertexSet> = k_subsets_of(support, size).collect();
        let admissible: Vec<VertexSet> = layer
            .into_par_iter()
            .filter(|c| fixed.iter().all(|x| c.intersection_size(*x) % q == 0))
            .collect();
        for c in admissible {
            if closure.binary_search(&c).is_ok() {
                continue;
            }
            if added.iter().all(|a| c.intersection_size(*a) % q == 0) {
                added.push(c);
            }
        }
    }
    closure.extend(added);
    canonicalize(&mut closure);
    Ok(Saturation {
        closure,
        support,
        candidates,
    })
}

/// Nonempty members with no nonempty proper subset in the system.
pub fn minimal_members(system: &[VertexSet]) -> Vec<VertexSet> {
    let nonempty: Vec<VertexSet> = system.iter().copied().filter(|s| !s.is_empty()).collect();
    let mut basis: Vec<VertexSet> = nonempty
        .iter()
        .copied()
        .filter(|s| !nonempty.iter().any(|o| o != s && o.is_subset(*s)))
        .collect();
    canonicalize(&mut basis);
    basis
}

/// Splits `set` greedily into disjoint basis members, taking the colex-least
/// member contained in what remains.
fn split(set: VertexSet, basis: &[VertexSet]) -> Option<Vec<VertexSet>> {
    let mut rest = set;
    let mut parts = Vec::new();
    while !rest.is_empty() {
        let h = *basis.iter().find(|h| h.is_subset(rest))?;
        parts.push(h);
        rest = rest - h;
    }
    Some(parts)
}

pub fn decompose(params: &DivisiblePairParams, f: &[VertexSet], g: &[VertexSet]) -> Result<DecompositionResult> {
    let sat = saturate(params, f, g)?;
    let basis = minimal_members(&sat.closure);
    let mut sources = f.to_vec();
    canonicalize(&mut sources);
    let decompositions = sources
        .iter()
        .map(|&s| {
            split(s, &basis)
                .map(|parts| Decomposition { set: s, parts })
                .ok_or_else(|| Error::assertion("disjoint-union", format!("{s} is not a disjoint union of basis members")))
        })
        .collect::<Result<Vec<_>>>()?;
    let result = DecompositionResult {
        basis_max_degree: max_degree(&basis),
        closure: sat.closure,
        basis,
        decompositions,
        support: sat.support,
    };
    if let Some(v) = verify_decomposition(params, f, g, &result).into_iter().next() {
        return Err(Error::assertion(v.clause, v.detail));
    }
    Ok(result)
}

fn max_degree(sets: &[VertexSet]) -> usize {
    let mut deg = [0usize; 128];
    for s in sets {
        for v in s.iter() {
            deg[v] += 1;
        }
    }
    deg.into_iter().max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseViolation {
    pub clause: String,
    pub detail: String,
}

/// Checks the four guarantees of a decomposition: bounded basis degree
/// (`Δ ≤ k^(2k)`), antichain, disjoint-union decompositions of every member
/// of `F`, and divisibility of `(basis, basis ∪ G)`.
pub fn verify_decomposition(
    params: &DivisiblePairParams,
    f: &[VertexSet],
    g: &[VertexSet],
    result: &DecompositionResult,
) -> Vec<ClauseViolation> {
    let mut out = Vec::new();
    let mut fail = |clause: &str, detail: String| {
        out.push(ClauseViolation {
            clause: clause.to_string(),
            detail,
        })
    };
    let basis = &result.basis;

    let k = BigUint::from(params.k);
    let bound = k.pow(2 * params.k as u32);
    let degree = max_degree(basis);
    if BigUint::from(degree) > bound {
        fail("degree", format!("basis max degree {degree} exceeds k^(2k)"));
    }

    for (i, a) in basis.iter().enumerate() {
        if let Some(b) = basis.iter().skip(i + 1).find(|b| a.is_subset(**b) || b.is_subset(*a)) {
            fail("antichain", format!("{a} and {b} are comparable"));
        }
    }

    let mut sources = f.to_vec();
    canonicalize(&mut sources);
    for s in &sources {
        match result.decompositions.iter().find(|d| d.set == *s) {
            None => fail("disjoint-union", format!("no decomposition recorded for {s}")),
            Some(d) => {
                let union = d.parts.iter().fold(VertexSet::EMPTY, |acc, &p| acc | p);
                let total: usize = d.parts.iter().map(|p| p.len()).sum();
                let members = d.parts.iter().all(|p| basis.binary_search(p).is_ok());
                if union != *s || total != s.len() || !members {
                    fail("disjoint-union", format!("parts of {s} are not disjoint basis members covering it"));
                }
            }
        }
    }

    if let Err(Error::NotDivisible { first, second, size, q }) = check_pair(params.q, basis, g) {
        fail("divisible", format!("|{first} ∩ {second}| = {size} is not divisible by {q}"));
    }
    out
}
