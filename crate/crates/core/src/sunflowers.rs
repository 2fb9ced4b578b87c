//! Sunflower (Δ-system) detection and the red colouring of a hypergraph.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::{adjacency, greedy_clique, max_clique};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::profiles::JrtParams;
use crate::vertex_set::VertexSet;

/// Branch-and-bound node budget for one kernel.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// A family of sets whose pairwise intersections all equal `kernel`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sunflower {
    pub kernel: VertexSet,
    pub petals: Vec<VertexSet>,
    /// `true` when no larger sunflower with this kernel exists; `false` marks
    /// the size as a lower bound only.
    pub maximum: bool,
}

impl Sunflower {
    pub fn size(&self) -> usize {
        self.petals.len()
    }

    pub fn is_valid(&self) -> bool {
        self.petals.iter().all(|p| self.kernel.is_subset(*p))
            && self.petals.iter().enumerate().all(|(i, a)| {
                self.petals[i + 1..]
                    .iter()
                    .all(|b| a.intersection(*b) == self.kernel)
            })
    }
}

/// Largest sunflower with the given kernel among `sets`, stopping as soon as
/// `target` petals are found.
fn sunflower_search(sets: &[VertexSet], kernel: VertexSet, target: usize, budget: u64) -> Sunflower {
    let petals: Vec<VertexSet> = sets.iter().copied().filter(|s| kernel.is_subset(*s)).collect();
    // a petal equal to the kernel has an empty remainder and packs with anything
    let rest: Vec<VertexSet> = petals.iter().map(|p| *p - kernel).collect();
    let adj = adjacency(rest.len(), |i, j| rest[i].is_disjoint(rest[j]));
    let outcome = max_clique(&adj, greedy_clique(&adj), target, budget);
    let sf = Sunflower {
        kernel,
        petals: outcome.clique.iter().map(|&i| petals[i]).collect(),
        maximum: outcome.proved_maximum,
    };
    debug_assert!(sf.is_valid());
    sf
}

/// Maximum sunflower with kernel `f` among edges of `sets` containing `f`.
pub fn max_sunflower_with_kernel(sets: &[VertexSet], f: VertexSet, node_budget: u64) -> Sunflower {
    sunflower_search(sets, f, usize::MAX, node_budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunflowerSearch {
    /// A sunflower of size greater than `a`, if one was found.
    pub found: Option<Sunflower>,
    /// Every candidate kernel was searched to completion, so `found == None`
    /// proves absence.
    pub exhaustive: bool,
    /// `|F| > b! a^(b+1)`, so a sunflower is guaranteed to exist.
    pub guaranteed: bool,
}

/// Candidate kernels: pairwise intersections, the sets themselves and the
/// empty set, in colex order.
fn candidate_kernels(family: &[VertexSet]) -> Vec<VertexSet> {
    let mut kernels: BTreeSet<VertexSet> = family.iter().copied().collect();
    kernels.insert(VertexSet::EMPTY);
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            kernels.insert(a.intersection(*b));
        }
    }
    kernels.into_iter().collect()
}

fn erdos_rado_bound(a: usize, b: usize) -> Option<u128> {
    let fact = (1..=b as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))?;
    let pow = (a as u128).checked_pow(b as u32 + 1)?;
    fact.checked_mul(pow)
}

/// Looks for a sunflower with more than `a` members in a family of distinct
/// sets of size at most `b`.
pub fn find_sunflower(family: &[VertexSet], a: usize, b: usize, node_budget: u64) -> Result<SunflowerSearch> {
    if let Some(s) = family.iter().find(|s| s.len() > b) {
        return Err(Error::Precondition(format!(
            "set {s} has size {} > b = {b}",
            s.len()
        )));
    }
    let mut family = family.to_vec();
    crate::hypergraph::canonicalize(&mut family);
    let guaranteed = erdos_rado_bound(a, b).is_some_and(|bound| family.len() as u128 > bound);
    let mut exhaustive = true;
    for kernel in candidate_kernels(&family) {
        let sf = sunflower_search(&family, kernel, a + 1, node_budget);
        if sf.size() > a {
            return Ok(SunflowerSearch {
                found: Some(sf),
                exhaustive,
                guaranteed,
            });
        }
        exhaustive &= sf.maximum;
    }
    if guaranteed && exhaustive {
        return Err(Error::assertion(
            "erdos-rado",
            format!("no sunflower of size > {a} among {} sets of size <= {b}", family.len()),
        ));
    }
    Ok(SunflowerSearch {
        found: None,
        exhaustive,
        guaranteed,
    })
}

/// The largest sunflower over all candidate kernels; ties go to the
/// colex-least kernel.
pub fn largest_sunflower(family: &[VertexSet], node_budget: u64) -> Sunflower {
    let mut family = family.to_vec();
    crate::hypergraph::canonicalize(&mut family);
    let mut best = Sunflower {
        kernel: VertexSet::EMPTY,
        petals: Vec::new(),
        maximum: true,
    };
    let mut all_exact = true;
    for kernel in candidate_kernels(&family) {
        let sf = max_sunflower_with_kernel(&family, kernel, node_budget);
        all_exact &= sf.maximum;
        if sf.size() > best.size() {
            best = sf;
        }
    }
    best.maximum = all_exact;
    best
}

/// Sets of size at most `rt(t-1)+1` that are kernels of sunflowers of at
/// least `rt²` edges, split by whether their size is exactly `rt(t-1)+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedColouring {
    pub red: Vec<VertexSet>,
    pub h_star_red: Hypergraph,
    pub h_hat_red: Vec<VertexSet>,
    /// One certifying sunflower per red set.
    #[serde(skip)]
    pub witnesses: BTreeMap<VertexSet, Sunflower>,
}

impl RedColouring {
    pub fn is_red(&self, f: VertexSet) -> bool {
        self.red.binary_search(&f).is_ok()
    }
}

/// Kernels of sunflowers with at least `petals` members among `sets`, taken
/// from `candidates`. Returns the witnesses keyed by kernel.
pub(crate) fn kernels_with_petals(
    sets: &[VertexSet],
    candidates: &[VertexSet],
    petals: usize,
    node_budget: u64,
) -> Result<BTreeMap<VertexSet, Sunflower>> {
    let decided: Vec<Result<Option<Sunflower>>> = candidates
        .par_iter()
        .map(|&f| {
            if sets.iter().filter(|s| f.is_subset(**s)).count() < petals {
                return Ok(None);
            }
            let sf = sunflower_search(sets, f, petals, node_budget);
            if sf.size() >= petals {
                Ok(Some(sf))
            } else if sf.maximum {
                Ok(None)
            } else {
                Err(Error::Undecided(format!(
                    "sunflower search for kernel {f} exceeded {node_budget} nodes"
                )))
            }
        })
        .collect();
    let mut out = BTreeMap::new();
    for d in decided {
        if let Some(sf) = d? {
            out.insert(sf.kernel, sf);
        }
    }
    Ok(out)
}

pub fn red_colouring(p: &JrtParams, h: &Hypergraph) -> Result<RedColouring> {
    red_colouring_with_budget(p, h, DEFAULT_NODE_BUDGET)
}

pub fn red_colouring_with_budget(p: &JrtParams, h: &Hypergraph, node_budget: u64) -> Result<RedColouring> {
    let size = p.red_size();
    let petals = p.k();
    let mut candidates: BTreeSet<VertexSet> = BTreeSet::new();
    candidates.insert(VertexSet::EMPTY);
    if h.len() >= petals {
        for e in h.edges() {
            candidates.extend(e.subsets().filter(|s| s.len() <= size));
        }
    }
    let candidates: Vec<VertexSet> = candidates.into_iter().collect();
    let witnesses = kernels_with_petals(h.edges(), &candidates, petals, node_budget)?;
    let red: Vec<VertexSet> = witnesses.keys().copied().collect();
    let (star, hat): (Vec<VertexSet>, Vec<VertexSet>) = red.iter().partition(|f| f.len() == size);
    Ok(RedColouring {
        h_star_red: Hypergraph::uniform(h.n(), size.min(h.n()), star)?,
        h_hat_red: hat,
        red,
        witnesses,
    })
}
