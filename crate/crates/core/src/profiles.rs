//! Intersection profiles: the permitted-intersection predicate of `J(r,t)`,
//! divisibility of set systems, and the rank bound for divisible families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Parameters `(r, t)` of the family `J(r,t)` of `rt²`-uniform hypergraphs
/// whose pairwise intersections lie in `{s : t | s or s >= rt(t-1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JrtParams {
    r: usize,
    t: usize,
}

impl JrtParams {
    pub fn new(r: usize, t: usize) -> Result<Self> {
        if r < 1 || t < 2 {
            return Err(Error::InvalidParams(format!(
                "need r >= 1 and t >= 2, got r={r}, t={t}"
            )));
        }
        match r.checked_mul(t * t) {
            Some(k) if k <= MAX_VERTICES => Ok(JrtParams { r, t }),
            _ => Err(Error::InvalidParams(format!(
                "edge size r*t^2 for r={r}, t={t} exceeds {MAX_VERTICES}"
            ))),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Edge size `rt²`.
    pub fn k(&self) -> usize {
        self.r * self.t * self.t
    }

    /// `rt`, the number of teams in a thick-clique edge.
    pub fn ell(&self) -> usize {
        self.r * self.t
    }

    /// `rt(t-1)`, the star centre size and the intersection threshold.
    pub fn centre_size(&self) -> usize {
        self.r * self.t * (self.t - 1)
    }

    /// Red-set size bound `rt(t-1) + 1`.
    pub fn red_size(&self) -> usize {
        self.centre_size() + 1
    }

    #[inline]
    pub fn in_profile(&self, s: usize) -> bool {
        s % self.t == 0 || s >= self.centre_size()
    }
}

/// Parameters of a `q`-divisible pair with members of size at most `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisiblePairParams {
    pub q: usize,
    pub k: usize,
}

impl DivisiblePairParams {
    pub fn new(q: usize, k: usize) -> Result<Self> {
        if q < 1 || k < 1 {
            return Err(Error::InvalidParams(format!(
                "need q >= 1 and k >= 1, got q={q}, k={k}"
            )));
        }
        Ok(DivisiblePairParams { q, k })
    }
}

/// Why a hypergraph fails to be a member of `J(r,t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JrtViolation {
    NotUniform {
        edge: VertexSet,
        expected: usize,
        found: usize,
    },
    Intersection {
        first: VertexSet,
        second: VertexSet,
        size: usize,
    },
}

/// Membership test; on failure reports uniformity problems before
/// intersection problems, and for the latter the colex-first offending pair
/// (pairs ordered by their larger edge, then their smaller edge).
pub fn check_jrt(p: &JrtParams, h: &Hypergraph) -> std::result::Result<(), JrtViolation> {
    let k = p.k();
    if let Some(&e) = h.edges().iter().find(|e| e.len() != k) {
        return Err(JrtViolation::NotUniform {
            edge: e,
            expected: k,
            found: e.len(),
        });
    }
    if h.len() < 2 || certified_by_common_core(p, h) || certified_by_twin_classes(p.t(), h) {
        return Ok(());
    }
    let edges = h.edges();
    let found = (1..edges.len()).into_par_iter().find_map_first(|j| {
        let b = edges[j];
        edges[..j].iter().find_map(|&a| {
            let s = a.intersection_size(b);
            (!p.in_profile(s)).then_some(JrtViolation::Intersection {
                first: a,
                second: b,
                size: s,
            })
        })
    });
    match found {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

pub fn is_jrt_member(p: &JrtParams, h: &Hypergraph) -> bool {
    check_jrt(p, h).is_ok()
}

/// Every pairwise intersection contains the common intersection of all
/// edges; if that alone reaches the threshold, every pair is permitted.
fn certified_by_common_core(p: &JrtParams, h: &Hypergraph) -> bool {
    let common = h
        .edges()
        .iter()
        .fold(VertexSet::full(h.n()), |acc, &e| acc & e);
    common.len() >= p.centre_size()
}

/// Vertices with identical edge incidence ("twins") are inseparable, so every
/// intersection is a union of twin classes. When all classes inside the
/// support have size divisible by `t`, every intersection is too.
fn certified_by_twin_classes(t: usize, h: &Hypergraph) -> bool {
    twin_classes(h).iter().all(|c| c.len() % t == 0)
}

/// Classes of non-isolated vertices with identical incidence, in order of
/// their least vertex.
pub fn twin_classes(h: &Hypergraph) -> Vec<VertexSet> {
    let words = h.len().div_ceil(64);
    let mut incidence: Vec<Vec<u64>> = vec![vec![0; words]; h.n()];
    for (i, e) in h.edges().iter().enumerate() {
        for v in e.iter() {
            incidence[v][i / 64] |= 1 << (i % 64);
        }
    }
    let support = h.support();
    let mut order: Vec<usize> = support.iter().collect();
    order.sort_by(|&a, &b| incidence[a].cmp(&incidence[b]).then(a.cmp(&b)));
    let mut classes: Vec<VertexSet> = Vec::new();
    let mut prev: Option<usize> = None;
    for v in order {
        match prev {
            Some(u) if incidence[u] == incidence[v] => {
                classes.last_mut().unwrap().insert(v);
            }
            _ => classes.push(VertexSet::singleton(v)),
        }
        prev = Some(v);
    }
    classes.sort_by_key(|c| VertexSet::min(*c));
    classes
}

/// All distinct pairs intersect in a multiple of `t`.
pub fn is_t_divisible(t: usize, s: &Hypergraph) -> bool {
    first_non_divisible_pair(t, s.edges()).is_none()
}

pub(crate) fn first_non_divisible_pair(
    t: usize,
    edges: &[VertexSet],
) -> Option<(VertexSet, VertexSet)> {
    (1..edges.len()).find_map(|j| {
        edges[..j]
            .iter()
            .find(|a| a.intersection_size(edges[j]) % t != 0)
            .map(|&a| (a, edges[j]))
    })
}

/// `q` divides `|f ∩ g|` for every `f` in `f_sys` and `g` in `g_sys`,
/// including `f = g` when a set lies in both.
pub fn is_divisible_pair(q: usize, f_sys: &[VertexSet], g_sys: &[VertexSet]) -> bool {
    divisibility_witness(q, f_sys, g_sys).is_none()
}

pub(crate) fn divisibility_witness(
    q: usize,
    f_sys: &[VertexSet],
    g_sys: &[VertexSet],
) -> Option<(VertexSet, VertexSet)> {
    f_sys.iter().find_map(|&f| {
        g_sys
            .iter()
            .find(|g| f.intersection_size(**g) % q != 0)
            .map(|&g| (f, g))
    })
}

/// Outcome of checking the rank bound for a `t`-divisible family whose
/// members all have size `1 mod t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    /// Prime field characteristic: the smallest prime factor of `t`.
    pub prime: usize,
    /// Every member has size congruent to 1 modulo `t`.
    pub sizes_ok: bool,
    /// Distinct members intersect in multiples of `t`.
    pub divisible: bool,
    pub rank: usize,
    pub edge_count: usize,
    pub vertex_count: usize,
    /// The characteristic vectors are linearly independent over GF(prime).
    pub independent: bool,
    pub within_bound: bool,
}

impl RankReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.sizes_ok && self.divisible
    }
}

pub fn rank_bound_check(t: usize, s: &Hypergraph) -> Result<RankReport> {
    if t < 2 {
        return Err(Error::InvalidParams(format!("need t >= 2, got {t}")));
    }
    let prime = smallest_prime_factor(t);
    let rank = gf_rank(prime, s.n(), s.edges());
    Ok(RankReport {
        prime,
        sizes_ok: s.edges().iter().all(|e| e.len() % t == 1 % t),
        divisible: is_t_divisible(t, s),
        rank,
        edge_count: s.len(),
        vertex_count: s.n(),
        independent: rank == s.len(),
        within_bound: s.len() <= s.n(),
    })
}

pub fn smallest_prime_factor(t: usize) -> usize {
    (2..).find(|d| d * d > t || t % d == 0).map_or(t, |d| if t % d == 0 { d } else { t })
}

/// Rank over GF(p) of the characteristic vectors of `rows` in `F_p^n`.
pub fn gf_rank(p: usize, n: usize, rows: &[VertexSet]) -> usize {
    if p == 2 {
        gf2_rank(rows)
    } else {
        gfp_rank(p as u64, n, rows)
    }
}

/// Word-parallel elimination; pivots are taken in increasing vertex order.
fn gf2_rank(rows: &[VertexSet]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for row in rows {
        let mut x = row.bits();
        for &b in &basis {
            if x & (b & b.wrapping_neg()) != 0 {
                x ^= b;
            }
        }
        if x != 0 {
            let pivot = x & x.wrapping_neg();
            for b in basis.iter_mut() {
                if *b & pivot != 0 {
                    *b ^= x;
                }
            }
            basis.push(x);
        }
    }
    basis.len()
}

fn gfp_rank(p: u64, n: usize, rows: &[VertexSet]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| (0..n).map(|v| r.contains(v) as u64).collect())
        .collect();
    let inv = |a: u64| pow_mod(a, p - 2, p);
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let scale = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = *x * scale % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let factor = m[i][col];
                for j in col..n {
                    m[i][j] = (m[i][j] + p * p - factor * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}
