//! Exhaustive search for the least possible maximum degree of a member of
//! `J(r,t)` with `n` vertices and `m` edges, extremal witnesses, and scans
//! across the thick-clique threshold `m* = C(⌊n/t⌋, rt)`.
//!
//! Members on `n` vertices are exactly the cliques of the compatibility graph
//! whose vertices are all `k`-subsets of `0..n` (colex order), two being
//! adjacent when their intersection size is permitted.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clique::{adjacency, colour_bound, Bits};
use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::profiles::JrtParams;
use crate::vertex_set::{k_subsets, VertexSet};

/// Largest compatibility graph the search will build.
pub const MAX_CANDIDATES: usize = 20_000;

pub struct CompatibilityGraph {
    pub candidates: Vec<VertexSet>,
    pub adjacency: Vec<Bits>,
    /// `through[v]`: candidates containing vertex `v`.
    through: Vec<Bits>,
}

impl CompatibilityGraph {
    pub fn new(p: &JrtParams, n: usize) -> Result<Self> {
        let count = binomial(n as u64, p.k() as u64);
        if count > MAX_CANDIDATES as u128 {
            return Err(Error::InvalidParams(format!(
                "C({n}, {}) = {count} candidate edges exceeds the search limit {MAX_CANDIDATES}",
                p.k()
            )));
        }
        let candidates: Vec<VertexSet> = k_subsets(n, p.k()).collect();
        let adjacency = adjacency(candidates.len(), |i, j| {
            p.in_profile(candidates[i].intersection_size(candidates[j]))
        });
        let mut through = vec![Bits::new(candidates.len()); n];
        for (i, c) in candidates.iter().enumerate() {
            for v in c.iter() {
                through[v].insert(i);
            }
        }
        Ok(CompatibilityGraph {
            candidates,
            adjacency,
            through,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub nodes: Option<u64>,
    /// Wall-clock cap. Results that hit it depend on machine speed.
    pub secs: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    ProvedOptimal,
    Bounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub r: usize,
    pub t: usize,
    pub n: usize,
    pub m: usize,
    /// The optimum, when proved.
    pub value: Option<u64>,
    pub witness: Option<Hypergraph>,
    /// `⌈rt² m / n⌉`.
    pub lower_bound: u64,
    /// Best maximum degree known, from constructions or the search.
    pub upper_bound: Option<u64>,
    /// Best maximum degree among the constructions used as a warm start.
    pub construction_bound: Option<u64>,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub time_budget_hit: bool,
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn max_degree(n: usize, edges: &[VertexSet]) -> u64 {
    let mut deg = vec![0u64; n];
    for e in edges {
        for v in e.iter() {
            deg[v] += 1;
        }
    }
    deg.into_iter().max().unwrap_or(0)
}

/// `m` edges of the thick clique on consecutive teams, picked greedily to
/// keep team degrees balanced (colex-least among the best choices).
pub fn balanced_thick_edges(p: &JrtParams, n: usize, m: usize) -> Option<Vec<VertexSet>> {
    let teams = n / p.t();
    let picks: Vec<VertexSet> = k_subsets(teams, p.ell()).collect();
    if m > picks.len() {
        return None;
    }
    let mut used = vec![false; picks.len()];
    let mut deg = vec![0usize; teams];
    let mut chosen = Vec::with_capacity(m);
    for _ in 0..m {
        let (best, _) = picks
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, s)| {
                let peak = s.iter().map(|x| deg[x] + 1).max().unwrap_or(0);
                let load: usize = s.iter().map(|x| deg[x]).sum();
                (i, (peak, load))
            })
            .min_by_key(|&(i, key)| (key, i))?;
        used[best] = true;
        for x in picks[best].iter() {
            deg[x] += 1;
        }
        chosen.push(picks[best]);
    }
    let t = p.t();
    Some(
        chosen
            .into_iter()
            .map(|s| s.iter().fold(VertexSet::EMPTY, |acc, x| acc | VertexSet::range(x * t, (x + 1) * t)))
            .collect(),
    )
}

/// The first `m` edges (colex) of the full `rt(t-1)`-star centred on the
/// lowest vertices.
fn star_edges(p: &JrtParams, n: usize, m: usize) -> Option<Vec<VertexSet>> {
    let centre = VertexSet::range(0, p.centre_size());
    if n < p.k() {
        return None;
    }
    let edges: Vec<VertexSet> = k_subsets(n - p.centre_size(), p.ell())
        .take(m)
        .map(|b| centre | VertexSet::from_bits(b.bits() << p.centre_size()))
        .collect();
    (edges.len() == m).then_some(edges)
}

struct MinMaxSearch<'a> {
    g: &'a CompatibilityGraph,
    n: usize,
    k: usize,
    m: usize,
    lower: u64,
    best: Option<(u64, Vec<usize>)>,
    nodes: u64,
    node_cap: u64,
    deadline: Option<Instant>,
    out_of_budget: bool,
    time_hit: bool,
}

impl MinMaxSearch<'_> {
    fn incumbent(&self) -> u64 {
        self.best.as_ref().map_or(u64::MAX, |b| b.0)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.out_of_budget = true;
        }
        if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.out_of_budget = true;
                    self.time_hit = true;
                }
            }
        }
        !self.out_of_budget
    }

    fn done(&self) -> bool {
        self.out_of_budget || self.incumbent() <= self.lower
    }

    /// Extends `chosen` with candidates from `p` (all compatible with
    /// `chosen` and later in colex order than its last member).
    fn expand(&mut self, chosen: &mut Vec<usize>, deg: &mut [u64], p: Bits) {
        if !self.tick() {
            return;
        }
        let current_max = deg.iter().copied().max().unwrap_or(0);
        if chosen.len() == self.m {
            if current_max < self.incumbent() {
                self.best = Some((current_max, chosen.clone()));
            }
            return;
        }
        let cap = self.incumbent();
        let remaining = self.m - chosen.len();
        let mut p = p;
        if cap != u64::MAX {
            if current_max >= cap {
                return;
            }
            // vertices at cap - 1 cannot take another edge
            for v in 0..self.n {
                if deg[v] + 1 >= cap {
                    p.and_not_assign(&self.g.through[v]);
                }
            }
            let room: u64 = deg.iter().map(|&d| cap - 1 - d).sum();
            if room < (self.k * remaining) as u64 {
                return;
            }
        }
        if p.count() < remaining || colour_bound(&p, &self.g.adjacency) < remaining {
            return;
        }
        let order: Vec<usize> = p.iter().collect();
        for c in order {
            if self.done() {
                return;
            }
            if !p.contains(c) {
                continue;
            }
            let edge = self.g.candidates[c];
            let mut next = p.clone();
            next.and_assign(&self.g.adjacency[c]);
            next.clear_through(c);
            chosen.push(c);
            for v in edge.iter() {
                deg[v] += 1;
            }
            self.expand(chosen, deg, next);
            for v in edge.iter() {
                deg[v] -= 1;
            }
            chosen.pop();
            // the incumbent may have dropped; re-filter saturated vertices
            let cap = self.incumbent();
            if cap != u64::MAX {
                for v in 0..self.n {
                    if deg[v] + 1 >= cap {
                        p.and_not_assign(&self.g.through[v]);
                    }
                }
            }
        }
    }
}

/// Least maximum degree over members of `J(r,t)` with `n` vertices and `m` edges.
pub fn min_max_degree(p: &JrtParams, n: usize, m: usize, budget: &SearchBudget) -> Result<SearchReport> {
    if n < p.k() {
        return Err(Error::InvalidParams(format!("need n >= k = {}, got n = {n}", p.k())));
    }
    let lower = ceil_div((p.k() * m) as u64, n as u64);
    let mut report = SearchReport {
        r: p.r(),
        t: p.t(),
        n,
        m,
        value: None,
        witness: None,
        lower_bound: lower,
        upper_bound: None,
        construction_bound: None,
        status: SearchStatus::Bounded,
        nodes_explored: 0,
        time_budget_hit: false,
    };
    if m == 0 {
        report.value = Some(0);
        report.upper_bound = Some(0);
        report.construction_bound = Some(0);
        report.witness = Some(Hypergraph::uniform(n, p.k(), [])?);
        report.status = SearchStatus::ProvedOptimal;
        return Ok(report);
    }
    let g = CompatibilityGraph::new(p, n)?;
    let index_of = |e: &VertexSet| g.candidates.binary_search(e).expect("construction edges are k-subsets");

    let mut warm: Option<(u64, Vec<usize>)> = None;
    for edges in [balanced_thick_edges(p, n, m), star_edges(p, n, m)].into_iter().flatten() {
        let d = max_degree(n, &edges);
        if warm.as_ref().is_none_or(|w| d < w.0) {
            let mut idx: Vec<usize> = edges.iter().map(index_of).collect();
            idx.sort_unstable();
            warm = Some((d, idx));
        }
    }
    report.construction_bound = warm.as_ref().map(|w| w.0);

    let mut search = MinMaxSearch {
        g: &g,
        n,
        k: p.k(),
        m,
        lower,
        best: warm,
        nodes: 0,
        node_cap: budget.nodes.unwrap_or(u64::MAX),
        deadline: budget.secs.map(|s| Instant::now() + Duration::from_secs(s)),
        out_of_budget: false,
        time_hit: false,
    };
    if !search.done() {
        // every member is isomorphic to one containing the colex-least k-set
        let mut deg = vec![0u64; n];
        for v in g.candidates[0].iter() {
            deg[v] += 1;
        }
        let mut p0 = g.adjacency[0].clone();
        p0.clear_through(0);
        search.expand(&mut vec![0], &mut deg, p0);
    }
    report.nodes_explored = search.nodes;
    report.time_budget_hit = search.time_hit;
    let proved = !search.out_of_budget || search.incumbent() <= lower;
    match search.best {
        Some((d, idx)) => {
            report.upper_bound = Some(d);
            report.witness = Some(Hypergraph::uniform(n, p.k(), idx.iter().map(|&i| g.candidates[i]))?);
            if proved {
                report.value = Some(d);
                report.status = SearchStatus::ProvedOptimal;
            }
        }
        None if proved => report.status = SearchStatus::Infeasible,
        None => {}
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessList {
    pub value: Option<u64>,
    pub witnesses: Vec<Hypergraph>,
    /// Enumeration stopped at the node budget; the list is incomplete.
    pub partial: bool,
    /// Witnesses were reduced to one per isomorphism class.
    pub canonical: bool,
    pub status: SearchStatus,
    pub nodes_explored: u64,
}

/// Permutation count above which canonical forms are not attempted.
pub const MAX_CANONICAL_PERMUTATIONS: u128 = 2_000_000;

/// Lexicographically least relabelled edge list over all relabellings that
/// sort vertices by decreasing degree. `None` when that is too many.
pub fn canonical_form(h: &Hypergraph) -> Option<Vec<VertexSet>> {
    let n = h.n();
    let deg = h.degrees();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in by_degree {
        match cells.last_mut() {
            Some(cell) if deg[cell[0]] == deg[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let count = cells.iter().try_fold(1u128, |acc, c| {
        let f = (1..=c.len() as u128).product::<u128>();
        acc.checked_mul(f)
    })?;
    if count > MAX_CANONICAL_PERMUTATIONS {
        return None;
    }
    let mut label = vec![0usize; n];
    let mut best: Option<Vec<VertexSet>> = None;
    fn permute(cells: &mut [Vec<usize>], i: usize, j: usize, next: usize, label: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if i == cells.len() {
            visit(label);
            return;
        }
        if j == cells[i].len() {
            permute(cells, i + 1, 0, next, label, visit);
            return;
        }
        for s in j..cells[i].len() {
            cells[i].swap(j, s);
            label[cells[i][j]] = next;
            permute(cells, i, j + 1, next + 1, label, visit);
            cells[i].swap(j, s);
        }
    }
    let mut visit = |label: &[usize]| {
        let mut edges: Vec<VertexSet> = h
            .edges()
            .iter()
            .map(|e| e.iter().map(|v| label[v]).collect())
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
    };
    permute(&mut cells, 0, 0, 0, &mut label, &mut visit);
    best
}

/// All members attaining the optimum `f(r,t;n,m)`, optionally one per
/// isomorphism class.
pub fn extremal_witnesses(p: &JrtParams, n: usize, m: usize, budget: &SearchBudget, canonical: bool) -> Result<WitnessList> {
    let report = min_max_degree(p, n, m, budget)?;
    let mut out = WitnessList {
        value: report.value,
        witnesses: Vec::new(),
        partial: false,
        canonical,
        status: report.status,
        nodes_explored: report.nodes_explored,
    };
    match report.status {
        SearchStatus::Infeasible => return Ok(out),
        SearchStatus::Bounded => {
            return Err(Error::Precondition(format!(
                "optimum at n = {n}, m = {m} is unresolved within the budget"
            )))
        }
        SearchStatus::ProvedOptimal => {}
    }
    let value = report.value.expect("proved optimum has a value");
    if m == 0 {
        out.witnesses.push(Hypergraph::uniform(n, p.k(), [])?);
        return Ok(out);
    }
    let g = CompatibilityGraph::new(p, n)?;
    let node_cap = budget.nodes.unwrap_or(u64::MAX);
    let mut nodes = 0u64;
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<u64>, Bits)> = vec![(Vec::new(), vec![0; n], Bits::full(g.candidates.len()))];
    // depth-first, candidates in colex order
    while let Some((chosen, deg, pool)) = stack.pop() {
        nodes += 1;
        if nodes > node_cap {
            out.partial = true;
            break;
        }
        if chosen.len() == m {
            found.push(chosen);
            continue;
        }
        let mut pool = pool;
        for v in 0..n {
            if deg[v] >= value {
                pool.and_not_assign(&g.through[v]);
            }
        }
        if pool.count() < m - chosen.len() {
            continue;
        }
        let order: Vec<usize> = pool.iter().collect();
        for &c in order.iter().rev() {
            let mut next = pool.clone();
            next.and_assign(&g.adjacency[c]);
            next.clear_through(c);
            let mut d = deg.clone();
            for v in g.candidates[c].iter() {
                d[v] += 1;
            }
            let mut ch = chosen.clone();
            ch.push(c);
            stack.push((ch, d, next));
        }
    }
    out.nodes_explored += nodes;
    let mut witnesses: Vec<Hypergraph> = found
        .into_iter()
        .map(|idx| Hypergraph::uniform(n, p.k(), idx.into_iter().map(|i| g.candidates[i])))
        .collect::<Result<_>>()?;
    if canonical {
        let forms: Option<Vec<Vec<VertexSet>>> = witnesses.iter().map(canonical_form).collect();
        match forms {
            Some(mut forms) => {
                forms.sort();
                forms.dedup();
                witnesses = forms
                    .into_iter()
                    .map(|edges| Hypergraph::uniform(n, p.k(), edges))
                    .collect::<Result<_>>()?;
            }
            None => out.canonical = false,
        }
    }
    out.witnesses = witnesses;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub m_star: u128,
    pub thick_delta: u128,
    pub star_edges: u128,
    /// `(m* + 1) / (3t)` as a reduced fraction.
    pub bound_m_over_3t: String,
    pub f_below: Option<u64>,
    pub f_above: Option<u64>,
    pub status: String,
}

pub const SCAN_HEADER: &str = "n,m_star,thick_delta,star_edges,bound_m_over_3t,f_below,f_above,status";

fn fraction(num: u128, den: u128) -> String {
    let r = Ratio::new(num, den);
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Searched value for a scan cell: the optimum when proved, otherwise blank.
fn scan_point(p: &JrtParams, n: usize, m: u128, budget: &SearchBudget) -> Result<(Option<u64>, bool)> {
    let Ok(m) = usize::try_from(m) else {
        return Ok((None, false));
    };
    if binomial(n as u64, p.k() as u64) > MAX_CANDIDATES as u128 {
        return Ok((None, false));
    }
    let rep = min_max_degree(p, n, m, budget)?;
    Ok((rep.value, rep.status != SearchStatus::Bounded))
}

pub fn scan_row(p: &JrtParams, n: usize, budget: &SearchBudget) -> Result<ScanRow> {
    if n < p.k() {
        return Ok(ScanRow {
            n,
            m_star: 0,
            thick_delta: 0,
            star_edges: 0,
            bound_m_over_3t: "0".into(),
            f_below: Some(0),
            f_above: Some(0),
            status: "trivial".into(),
        });
    }
    let (t, ell) = (p.t() as u64, p.ell() as u64);
    let teams = n as u64 / t;
    let m_star = binomial(teams, ell);
    let thick_delta = binomial(teams.saturating_sub(1), ell - 1);
    let star_edges = binomial((n - p.k() + p.ell()) as u64, ell);
    let (f_below, below_ok) = scan_point(p, n, m_star, budget)?;
    let (f_above, above_ok) = scan_point(p, n, m_star + 1, budget)?;
    let status = match (below_ok, above_ok) {
        (true, true) => "proved",
        _ if budget.nodes == Some(0) => "skipped",
        _ => "bounded",
    };
    Ok(ScanRow {
        n,
        m_star,
        thick_delta,
        star_edges,
        bound_m_over_3t: fraction(m_star + 1, 3 * t as u128),
        f_below,
        f_above,
        status: status.into(),
    })
}

/// One row per `n`; rows are computed in parallel and returned in input order.
pub fn phase_scan(p: &JrtParams, ns: &[usize], budget: &SearchBudget) -> Result<Vec<ScanRow>> {
    ns.par_iter().map(|&n| scan_row(p, n, budget)).collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m_star,
            r.thick_delta,
            r.star_edges,
            r.bound_m_over_3t,
            cell(r.f_below),
            cell(r.f_above),
            r.status
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::thick_clique;
    use crate::profiles::is_jrt_member;

    fn p12() -> JrtParams {
        JrtParams::new(1, 2).unwrap()
    }

    fn unlimited() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn small_values() {
        let p = p12();
        for (m, want) in [(0, 0), (1, 1), (2, 1), (6, 3)] {
            let rep = min_max_degree(&p, 8, m, &unlimited()).unwrap();
            assert_eq!(rep.status, SearchStatus::ProvedOptimal, "m={m}");
            assert_eq!(rep.value, Some(want), "m={m}");
            let w = rep.witness.unwrap();
            assert_eq!(w.len(), m);
            assert_eq!(w.max_degree() as u64, want);
            assert!(is_jrt_member(&p, &w));
        }
    }

    #[test]
    fn balanced_thick_edges_are_thick() {
        let p = p12();
        for n in [8, 10, 12] {
            let teams = n / 2;
            let (thick, _) = thick_clique(n, 4, 2).unwrap();
            for m in 1..=binomial(teams as u64, 2) as usize {
                let edges = balanced_thick_edges(&p, n, m).unwrap();
                assert_eq!(edges.len(), m);
                assert!(edges.iter().all(|e| thick.contains_edge(*e)));
                assert!(max_degree(n, &edges) >= ceil_div(2 * m as u64, teams as u64));
            }
        }
    }

    #[test]
    fn witnesses() {
        let p = p12();
        let one = extremal_witnesses(&p, 4, 1, &unlimited(), true).unwrap();
        assert_eq!(one.witnesses.len(), 1);
        assert_eq!(one.witnesses[0].edges(), &[VertexSet::range(0, 4)]);

        let none = extremal_witnesses(&p, 4, 2, &unlimited(), true).unwrap();
        assert_eq!(none.status, SearchStatus::Infeasible);
        assert!(none.witnesses.is_empty());

        let six = extremal_witnesses(&p, 8, 6, &unlimited(), true).unwrap();
        let (thick, _) = thick_clique(8, 4, 2).unwrap();
        let form = canonical_form(&thick).unwrap();
        assert!(six.witnesses.iter().any(|w| w.edges() == form.as_slice()));
        assert!(!six.partial);
    }

    #[test]
    fn scan_columns() {
        let p = p12();
        let rows = phase_scan(&p, &[3, 8], &SearchBudget { nodes: Some(0), secs: None }).unwrap();
        assert_eq!(rows[0].status, "trivial");
        assert_eq!((rows[1].m_star, rows[1].thick_delta, rows[1].star_edges), (6, 3, 15));
        assert_eq!(rows[1].bound_m_over_3t, "7/6");
        let csv = scan_csv(&rows);
        assert!(csv.starts_with(SCAN_HEADER));
        assert!(csv.contains("\n3,0,0,0,0,0,0,trivial\n"));
    }
}
