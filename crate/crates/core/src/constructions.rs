//! Generators for thick cliques, full stars, the two-star gadget and random
//! members of `J(r,t)`.
//!
//! All deterministic generators place teams and centres on the lowest vertex
//! ids, so fixtures are reproducible and easy to diff.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::profiles::JrtParams;
use crate::vertex_set::{k_subsets, k_subsets_of, VertexSet, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamPartition {
    pub teams: Vec<VertexSet>,
    pub leftovers: VertexSet,
}

impl TeamPartition {
    /// Consecutive blocks `{0..t-1}, {t..2t-1}, ...` of `0..n`.
    pub fn consecutive(n: usize, t: usize) -> Self {
        let teams: Vec<VertexSet> = (0..n / t).map(|i| VertexSet::range(i * t, (i + 1) * t)).collect();
        TeamPartition {
            leftovers: VertexSet::range((n / t) * t, n),
            teams,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSpec {
    pub centre: VertexSet,
    pub body: VertexSet,
    pub k: usize,
}

fn check_universe(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::UniverseTooLarge(n))
    } else {
        Ok(())
    }
}

/// All unions of `k/t` teams, with teams in a given order.
pub(crate) fn unions_of_teams(teams: &[VertexSet], count: usize) -> Vec<VertexSet> {
    k_subsets(teams.len(), count)
        .map(|pick| pick.iter().fold(VertexSet::EMPTY, |acc, i| acc | teams[i]))
        .collect()
}

/// The thick `(k, n, t)`-clique on consecutive teams.
pub fn thick_clique(n: usize, k: usize, t: usize) -> Result<(Hypergraph, TeamPartition)> {
    check_universe(n)?;
    if t == 0 || k == 0 || k % t != 0 {
        return Err(Error::InvalidParams(format!("need t | k with k, t >= 1, got k={k}, t={t}")));
    }
    if k > n {
        return Err(Error::InvalidParams(format!("edge size {k} exceeds n={n}")));
    }
    let teams = TeamPartition::consecutive(n, t);
    let h = Hypergraph::uniform(n, k, unions_of_teams(&teams.teams, k / t))?;
    Ok((h, teams))
}

/// The full `s`-star: every `k`-set containing the centre `{0, ..., s-1}`.
pub fn full_star(n: usize, k: usize, s: usize) -> Result<(Hypergraph, StarSpec)> {
    check_universe(n)?;
    if s > k || k > n {
        return Err(Error::InvalidParams(format!("need s <= k <= n, got s={s}, k={k}, n={n}")));
    }
    let centre = VertexSet::range(0, s);
    let rest = VertexSet::range(s, n);
    let edges: Vec<VertexSet> = k_subsets_of(rest, k - s).map(|b| b | centre).collect();
    let body = edges.iter().fold(VertexSet::EMPTY, |acc, &e| acc | (e - centre));
    Ok((Hypergraph::uniform(n, k, edges)?, StarSpec { centre, body, k }))
}

/// The gadget with two stars on centres `C1`, `C2` bridged by a team `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub hypergraph: Hypergraph,
    pub u1: VertexSet,
    pub u2: VertexSet,
    pub c1: VertexSet,
    pub c2: VertexSet,
    pub team: VertexSet,
}

/// Builds the two-star gadget on `n = 2u + 2rt(t-1) + t` vertices.
///
/// Layout: `T` first, then `C1`, `C2`, `U1`, `U2`. Edges are the five
/// classes `C1 ∪ A` (A an `rt`-subset of `U1`), `C2 ∪ A` likewise, `T ∪ C1 ∪ B`
/// (B an `(r-1)t`-subset of `U1`), `T ∪ C2 ∪ B` likewise, and the thick clique
/// on `T ∪ C1 ∪ C2` whose teams are `T` and the consecutive `t`-blocks of
/// `C1` and `C2`. Coinciding edges across classes are merged.
pub fn two_star_gadget(p: &JrtParams, u: usize) -> Result<Gadget> {
    let (r, t) = (p.r(), p.t());
    let c = p.centre_size();
    if u < p.ell() {
        return Err(Error::InvalidParams(format!("need u >= rt = {}, got {u}", p.ell())));
    }
    let n = 2 * u + 2 * c + t;
    check_universe(n)?;
    let team = VertexSet::range(0, t);
    let c1 = VertexSet::range(t, t + c);
    let c2 = VertexSet::range(t + c, t + 2 * c);
    let u1 = VertexSet::range(t + 2 * c, t + 2 * c + u);
    let u2 = VertexSet::range(t + 2 * c + u, n);

    let mut edges = Vec::new();
    for (centre, pool) in [(c1, u1), (c2, u2)] {
        edges.extend(k_subsets_of(pool, p.ell()).map(|a| centre | a));
    }
    for (centre, pool) in [(c1, u1), (c2, u2)] {
        edges.extend(k_subsets_of(pool, (r - 1) * t).map(|b| team | centre | b));
    }
    // T, C1 and C2 are consecutive, so their t-blocks are the teams
    let teams = TeamPartition::consecutive(t + 2 * c, t).teams;
    edges.extend(unions_of_teams(&teams, p.ell()));

    Ok(Gadget {
        hypergraph: Hypergraph::uniform(n, p.k(), edges)?,
        u1,
        u2,
        c1,
        c2,
        team,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomInstance {
    pub hypergraph: Hypergraph,
    pub target_m: usize,
    /// False when the rejection budget ran out before `target_m` edges.
    pub reached_target: bool,
    pub draws: usize,
}

/// Randomised greedy member of `J(r,t)`: draw uniform `k`-sets and keep each
/// one that is new and compatible with everything kept so far. Gives up after
/// `1000 * target_m` draws.
pub fn random_jrt(p: &JrtParams, n: usize, target_m: usize, seed: u64) -> Result<RandomInstance> {
    check_universe(n)?;
    let k = p.k();
    if n < k {
        return Err(Error::InvalidParams(format!("need n >= k = {k}, got n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<VertexSet> = Vec::with_capacity(target_m);
    let budget = 1000usize.saturating_mul(target_m);
    let mut draws = 0;
    while kept.len() < target_m && draws < budget {
        draws += 1;
        let e: VertexSet = sample(&mut rng, n, k).into_iter().collect();
        if kept
            .iter()
            .all(|&f| f != e && p.in_profile(f.intersection_size(e)))
        {
            kept.push(e);
        }
    }
    Ok(RandomInstance {
        reached_target: kept.len() == target_m,
        hypergraph: Hypergraph::uniform(n, k, kept)?,
        target_m,
        draws,
    })
}

/// Grows `base` by random compatible `k`-sets, as [`random_jrt`] does from
/// scratch. Used to plant structures inside random instances.
pub fn extend_random(
    p: &JrtParams,
    base: &Hypergraph,
    extra: usize,
    seed: u64,
) -> Result<Hypergraph> {
    let (n, k) = (base.n(), p.k());
    if n < k {
        return Err(Error::InvalidParams(format!("need n >= k = {k}, got n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<VertexSet> = base.edges().to_vec();
    let mut added = 0;
    for _ in 0..1000usize.saturating_mul(extra) {
        if added == extra {
            break;
        }
        let e: VertexSet = sample(&mut rng, n, k).into_iter().collect();
        if kept
            .iter()
            .all(|&f| f != e && p.in_profile(f.intersection_size(e)))
        {
            kept.push(e);
            added += 1;
        }
    }
    Hypergraph::uniform(n, k, kept)
}
