//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jrt_core::constructions::{extend_random, full_star, random_jrt, thick_clique, two_star_gadget};
use jrt_core::decomposition::{decompose, verify_decomposition};
use jrt_core::profiles::{is_jrt_member, rank_bound_check};
use jrt_core::search::{min_max_degree, phase_scan, scan_csv, SearchBudget, SearchStatus, SCAN_HEADER};
use jrt_core::stars::{centre_containment_check, core, is_heavy, Star};
use jrt_core::structure::{build_structure_with, verify_certificate, AssertLevel, StructureOptions};
use jrt_core::sunflowers::{find_sunflower, DEFAULT_NODE_BUDGET};
use jrt_core::vertex_set::{k_subsets, k_subsets_of};
use jrt_core::{DivisiblePairParams, Hypergraph, JrtParams, VertexSet};

type Outcome = Result<String, String>;

const FAMILIES: [(usize, usize); 4] = [(1, 2), (1, 3), (1, 4), (2, 2)];

fn params(r: usize, t: usize) -> JrtParams {
    JrtParams::new(r, t).expect("valid parameters")
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Pairwise intersection test, independent of the library's fast paths.
fn brute_member(p: &JrtParams, h: &Hypergraph) -> bool {
    let (k, t, floor) = (p.k(), p.t(), p.centre_size());
    let edges = h.edges();
    edges.iter().all(|e| e.len() == k)
        && edges.iter().enumerate().all(|(i, a)| {
            edges[i + 1..].iter().all(|b| {
                let s = a.intersection_size(*b);
                s % t == 0 || s >= floor
            })
        })
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (r, t) in FAMILIES {
        let p = params(r, t);
        let (k, ell) = (p.k(), p.ell());
        for n in k..=64 {
            let (h, _) = thick_clique(n, k, t).map_err(|e| e.to_string())?;
            let teams = n / t;
            ensure(h.len() as u128 == binom(teams, ell), || {
                format!("thick ({r},{t}) n={n}: {} edges, want C({teams},{ell})", h.len())
            })?;
            ensure(h.max_degree() as u128 == binom(teams - 1, ell - 1), || {
                format!("thick ({r},{t}) n={n}: max degree {}", h.max_degree())
            })?;
            let (s, _) = full_star(n, k, p.centre_size()).map_err(|e| e.to_string())?;
            ensure(s.len() as u128 == binom(n - k + ell, ell), || {
                format!("star ({r},{t}) n={n}: {} edges", s.len())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (r,t,n) points"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for (r, t) in FAMILIES {
        let p = params(r, t);
        let k = p.k();
        for n in k..=64 {
            let (thick, _) = thick_clique(n, k, t).map_err(|e| e.to_string())?;
            let mut sub: Vec<VertexSet> = thick.edges().to_vec();
            sub.shuffle(&mut rng);
            sub.truncate(rng.gen_range(0..=sub.len().min(400)));
            let sub = Hypergraph::uniform(n, k, sub).map_err(|e| e.to_string())?;
            let (star, _) = full_star(n, k, p.centre_size()).map_err(|e| e.to_string())?;
            for (name, h) in [("thick", &thick), ("thick subgraph", &sub), ("star", &star)] {
                ensure(is_jrt_member(&p, h), || format!("{name} ({r},{t}) n={n} rejected"))?;
                checked += 1;
            }
            if n <= 24 {
                ensure(brute_member(&p, &thick) && brute_member(&p, &sub), || {
                    format!("pairwise oracle rejects thick ({r},{t}) n={n}")
                })?;
            }
        }
        let mut u = p.ell();
        while 2 * u + 2 * p.centre_size() + t <= 64 {
            let g = two_star_gadget(&p, u).map_err(|e| e.to_string())?;
            ensure(is_jrt_member(&p, &g.hypergraph), || format!("gadget ({r},{t}) u={u} rejected"))?;
            ensure(brute_member(&p, &g.hypergraph), || format!("pairwise oracle rejects gadget ({r},{t}) u={u}"))?;
            checked += 1;
            u += 1;
        }
    }
    for seed in 0..1000u64 {
        let (r, t) = FAMILIES[(seed % 4) as usize];
        let p = params(r, t);
        let n = rng.gen_range(p.k()..=p.k() + 16);
        let m = rng.gen_range(1..=20);
        let inst = random_jrt(&p, n, m, seed).map_err(|e| e.to_string())?;
        let h = &inst.hypergraph;
        ensure(is_jrt_member(&p, h) && brute_member(&p, h), || {
            format!("random_jrt ({r},{t}) n={n} m={m} seed={seed} is not a member")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} hypergraphs"))
}

/// Rank of 0/1 rows over GF(p) by plain Gaussian elimination.
fn rank_mod_p(prime: usize, n: usize, rows: &[VertexSet]) -> usize {
    let mut m: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| (0..n).map(|v| usize::from(r.contains(v))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = (1..prime).find(|x| x * m[rank][col] % prime == 1).expect("prime field");
        for x in m[rank].iter_mut() {
            *x = *x * inv % prime;
        }
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for c in 0..n {
                    m[i][c] = (m[i][c] + prime * prime - f * m[rank][c]) % prime;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Either greedy random sets of size `1 mod t`, or one private vertex plus a
/// union of random teams per set.
fn divisible_system(rng: &mut ChaCha8Rng, t: usize, n: usize) -> Vec<VertexSet> {
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    if rng.gen_bool(0.5) {
        let singles = rng.gen_range(1..=n / 2);
        let teams: Vec<VertexSet> = verts[singles..].chunks_exact(t).map(|c| c.iter().collect()).collect();
        (0..singles)
            .map(|i| {
                let mut s = VertexSet::singleton(verts[i]);
                for team in &teams {
                    if rng.gen_bool(0.4) {
                        s = s | *team;
                    }
                }
                s
            })
            .collect()
    } else {
        let mut kept: Vec<VertexSet> = Vec::new();
        for _ in 0..400 {
            let size = t * rng.gen_range(0..=(n - 1) / t / 2) + 1;
            verts.shuffle(rng);
            let s: VertexSet = verts[..size].iter().collect();
            if kept.iter().all(|&x| x != s && x.intersection_size(s) % t == 0) {
                kept.push(s);
            }
        }
        kept
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut largest = 0;
    for trial in 0..1000 {
        let t = [2, 3][trial % 2];
        let n = rng.gen_range(4..=64);
        let sets = divisible_system(&mut rng, t, n);
        let h = Hypergraph::new(n, sets).map_err(|e| e.to_string())?;
        let rep = rank_bound_check(t, &h).map_err(|e| e.to_string())?;
        ensure(rep.hypotheses_hold(), || format!("trial {trial}: generator broke the hypotheses"))?;
        ensure(rep.within_bound && rep.independent, || {
            format!("trial {trial}: t={t} n={n} |E|={} rank={}", rep.edge_count, rep.rank)
        })?;
        let oracle = rank_mod_p(rep.prime, n, h.edges());
        ensure(oracle == h.len(), || format!("trial {trial}: oracle rank {oracle} < {}", h.len()))?;
        largest = largest.max(h.len());
    }
    Ok(format!("1000 systems, largest has {largest} sets"))
}

fn has_sunflower_of_three(family: &[VertexSet]) -> Result<bool, String> {
    let res = find_sunflower(family, 2, 2, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    Ok(res.found.is_some_and(|s| s.size() >= 3 && s.is_valid() && s.petals.iter().all(|x| family.contains(x))))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..200 {
        let n = rng.gen_range(6..=20);
        let mut pool: Vec<VertexSet> = (0..=2).flat_map(|s| k_subsets(n, s)).collect();
        pool.shuffle(&mut rng);
        pool.truncate(17);
        ensure(has_sunflower_of_three(&pool)?, || format!("random family {trial} on {n} vertices: {pool:?}"))?;
    }
    let pool: Vec<VertexSet> = (0..=2).flat_map(|s| k_subsets(6, s)).collect();
    let mut exhaustive = 0;
    for pick in k_subsets(pool.len(), 17) {
        let family: Vec<VertexSet> = pick.iter().map(|i| pool[i]).collect();
        ensure(has_sunflower_of_three(&family)?, || format!("exhaustive family {family:?}"))?;
        exhaustive += 1;
    }
    Ok(format!("200 random + {exhaustive} exhaustive families"))
}

/// A random q-divisible pair: F from unions of teams (plus greedy extras),
/// G from sets meeting every member of F in a multiple of q.
fn divisible_pair(rng: &mut ChaCha8Rng, q: usize, k: usize) -> (usize, Vec<VertexSet>, Vec<VertexSet>) {
    let n = rng.gen_range(q.max(k)..=16);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let teams: Vec<VertexSet> = verts.chunks_exact(q).map(|c| c.iter().collect()).collect();
    let per = k / q;
    let mut f: Vec<VertexSet> = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let mut pick = teams.clone();
        pick.shuffle(rng);
        let take = rng.gen_range(0..=per.min(pick.len()));
        f.push(pick[..take].iter().fold(VertexSet::EMPTY, |a, &b| a | b));
    }
    let mut g: Vec<VertexSet> = Vec::new();
    let loose = rng.gen_range(0..=2);
    for _ in 0..200 {
        let structured = g.len() >= loose || rng.gen_bool(0.5);
        let s: VertexSet = if structured {
            let mut pick = teams.clone();
            pick.shuffle(rng);
            let take = rng.gen_range(0..=per.min(pick.len()));
            pick[..take].iter().fold(VertexSet::EMPTY, |a, &b| a | b)
        } else {
            let size = rng.gen_range(0..=k);
            verts.shuffle(rng);
            verts[..size.min(n)].iter().collect()
        };
        let fits = f.iter().all(|x| x.intersection_size(s) % q == 0);
        if fits {
            if s.len() % q == 0 && rng.gen_bool(0.3) {
                if f.iter().chain(&g).all(|x| x.intersection_size(s) % q == 0) {
                    f.push(s);
                }
            } else if g.len() < 8 {
                g.push(s);
            }
        }
    }
    (n, f, g)
}

/// Returns the closure size.
fn check_decomposition(q: usize, k: usize, f: &[VertexSet], g: &[VertexSet]) -> Result<usize, String> {
    let params = DivisiblePairParams::new(q, k).map_err(|e| e.to_string())?;
    let res = decompose(&params, f, g).map_err(|e| format!("q={q} k={k} F={f:?} G={g:?}: {e}"))?;
    let violations = verify_decomposition(&params, f, g, &res);
    ensure(violations.is_empty(), || format!("q={q} k={k}: {violations:?}"))?;
    let cap = BigUint::from(k).pow(2 * k as u32);
    ensure(BigUint::from(res.basis_max_degree) <= cap, || format!("basis degree {} > k^2k", res.basis_max_degree))?;
    Ok(res.closure.len())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut closures, mut largest) = (0, 0);
    for trial in 0..200 {
        let q = [2, 3][trial % 2];
        let k = rng.gen_range(q..=6);
        let (_, f, g) = divisible_pair(&mut rng, q, k);
        let size = check_decomposition(q, k, &f, &g).map_err(|e| format!("trial {trial}: {e}"))?;
        closures += size;
        largest = largest.max(size);
    }
    let p = params(1, 2);
    let (thick, teams) = thick_clique(8, 4, 2).map_err(|e| e.to_string())?;
    check_decomposition(2, 4, &teams.teams, thick.edges())?;
    let (star, spec) = full_star(8, 4, 2).map_err(|e| e.to_string())?;
    check_decomposition(2, 4, &[spec.centre], star.edges())?;
    let g = two_star_gadget(&p, 4).map_err(|e| e.to_string())?;
    check_decomposition(2, 4, &[g.c1, g.team], g.hypergraph.edges())?;
    Ok(format!("200 random pairs + 3 fixtures, closures average {} sets, largest {largest}", closures / 200))
}

fn structure_holds(p: &JrtParams, h: &Hypergraph, what: &str) -> Result<usize, String> {
    let opts = StructureOptions {
        assert_level: AssertLevel::Soft,
        node_budget: DEFAULT_NODE_BUDGET,
    };
    let out = build_structure_with(p, h, &opts).map_err(|e| format!("{what}: {e}"))?;
    let report = verify_certificate(p, h, &out.certificate);
    ensure(report.valid, || format!("{what}: {:?}", report.violations))?;
    Ok(out.trace.soft_checks.iter().filter(|c| !c.holds).count())
}

fn criterion_6() -> Outcome {
    let mut instances = 0;
    let mut soft_misses = 0;
    for (r, t) in [(1, 2), (1, 3)] {
        let p = params(r, t);
        for n in p.k()..=20 {
            let (thick, _) = thick_clique(n, p.k(), t).map_err(|e| e.to_string())?;
            soft_misses += structure_holds(&p, &thick, &format!("thick ({r},{t}) n={n}"))?;
            let (star, _) = full_star(n, p.k(), p.centre_size()).map_err(|e| e.to_string())?;
            soft_misses += structure_holds(&p, &star, &format!("star ({r},{t}) n={n}"))?;
            instances += 2;
        }
    }
    let p = params(1, 2);
    let g = two_star_gadget(&p, 4).map_err(|e| e.to_string())?;
    soft_misses += structure_holds(&p, &g.hypergraph, "gadget u=4")?;
    instances += 1;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..200u64 {
        let n = rng.gen_range(4..=16);
        let m = rng.gen_range(1..=40);
        let h = random_jrt(&p, n, m, seed).map_err(|e| e.to_string())?.hypergraph;
        soft_misses += structure_holds(&p, &h, &format!("random n={n} m={m} seed={seed}"))?;
        instances += 1;
    }
    Ok(format!("{instances} instances, {soft_misses} asymptotic soft checks not met"))
}

fn criterion_7() -> Outcome {
    let mut fixtures = 0;
    for (r, t) in [(1, 2), (1, 3), (2, 2)] {
        let p = params(r, t);
        for n in p.k()..=40 {
            let (h, spec) = full_star(n, p.k(), p.centre_size()).map_err(|e| e.to_string())?;
            let star = Star::new(spec.centre, h.edges().iter().copied()).map_err(|e| e.to_string())?;
            let c = core(&p, &star);
            ensure(c.core.is_empty() || is_heavy(&p, &c.core), || format!("({r},{t}) n={n}: core neither heavy nor empty"))?;
            fixtures += 1;
        }
    }
    let p = params(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut planted = 0;
    let mut seed = 0u64;
    while planted < 100 {
        seed += 1;
        ensure(seed < 1000, || format!("only {planted} heavy planted stars in 1000 draws"))?;
        let body = rng.gen_range(18..=24);
        let n = 2 + body + rng.gen_range(4..=12);
        let centre = VertexSet::range(0, 2);
        let edges: Vec<VertexSet> = k_subsets_of(VertexSet::range(2, 2 + body), 2)
            .filter(|_| rng.gen_bool(0.9))
            .map(|e| e | centre)
            .collect();
        let base = Hypergraph::uniform(n, 4, edges).map_err(|e| e.to_string())?;
        let h = extend_random(&p, &base, rng.gen_range(1..=30), seed).map_err(|e| e.to_string())?;
        let through: Vec<VertexSet> = h.edges().iter().copied().filter(|e| centre.is_subset(*e)).collect();
        let star = Star::new(centre, through).map_err(|e| e.to_string())?;
        let c = core(&p, &star).core;
        if c.is_empty() {
            continue;
        }
        ensure(is_heavy(&p, &c), || format!("seed {seed}: core is not heavy"))?;
        let bad = centre_containment_check(&p, &h, &c).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(bad.is_none(), || format!("seed {seed}: edge {:?} meets the body but misses the centre", bad))?;
        planted += 1;
    }
    Ok(format!("{fixtures} star fixtures, {planted} planted instances"))
}

/// Least maximum degree over all `m`-edge members of J(1,2) on 8 vertices,
/// by direct depth-first enumeration.
fn brute_f_1_2_8(m: usize) -> Option<u64> {
    let cands: Vec<VertexSet> = k_subsets(8, 4).collect();
    fn go(cands: &[VertexSet], from: usize, chosen: &mut Vec<VertexSet>, deg: &mut [u64; 8], m: usize, best: &mut Option<u64>) {
        let current = *deg.iter().max().unwrap();
        if best.is_some_and(|b| current >= b) {
            return;
        }
        if chosen.len() == m {
            *best = Some(current);
            return;
        }
        for i in from..cands.len() {
            if cands.len() - i < m - chosen.len() {
                break;
            }
            let e = cands[i];
            if chosen.iter().all(|&f| f.intersection_size(e) != 1) {
                chosen.push(e);
                e.iter().for_each(|v| deg[v] += 1);
                go(cands, i + 1, chosen, deg, m, best);
                e.iter().for_each(|v| deg[v] -= 1);
                chosen.pop();
            }
        }
    }
    let mut best = None;
    go(&cands, 0, &mut Vec::new(), &mut [0; 8], m, &mut best);
    best
}

fn criterion_8() -> Outcome {
    let p = params(1, 2);
    let budget = SearchBudget {
        nodes: None,
        secs: Some(600),
    };
    let mut values = Vec::new();
    for m in 0..=6usize {
        let rep = min_max_degree(&p, 8, m, &budget).map_err(|e| e.to_string())?;
        ensure(rep.status == SearchStatus::ProvedOptimal, || format!("m={m}: status {:?}", rep.status))?;
        let f = rep.value.ok_or(format!("m={m}: no value"))?;
        let lower = (4 * m as u64).div_ceil(8);
        let upper = (2 * m as u64).div_ceil(4);
        ensure(lower <= f && f <= upper, || format!("m={m}: {lower} <= {f} <= {upper} fails"))?;
        let oracle = brute_f_1_2_8(m).unwrap_or(0);
        ensure(f == oracle, || format!("m={m}: search {f}, enumeration {oracle}"))?;
        let w = rep.witness.ok_or(format!("m={m}: no witness"))?;
        ensure(w.len() == m && w.max_degree() as u64 == f && brute_member(&p, &w), || format!("m={m}: bad witness"))?;
        if m == 6 {
            ensure(f == 3 && lower == 3 && upper == 3, || format!("m=6: f={f}, bounds {lower}, {upper}"))?;
        }
        values.push(f);
    }
    Ok(format!("f(1,2;8,0..6) = {values:?}"))
}

fn criterion_9() -> Outcome {
    let p = params(1, 2);
    let ns = [8, 10, 12, 14, 16];
    let budget = SearchBudget {
        nodes: Some(5_000_000),
        secs: None,
    };
    let csv = scan_csv(&phase_scan(&p, &ns, &budget).map_err(|e| e.to_string())?);
    let mut lines = csv.lines();
    ensure(lines.next() == Some(SCAN_HEADER), || "header mismatch".into())?;
    ensure(SCAN_HEADER == "n,m_star,thick_delta,star_edges,bound_m_over_3t,f_below,f_above,status", || "header text".into())?;
    let mut ratios = Vec::new();
    for (row, &n) in lines.by_ref().zip(&ns) {
        let cols: Vec<&str> = row.split(',').collect();
        ensure(cols.len() == 8, || format!("row `{row}` has {} columns", cols.len()))?;
        let (m_star, delta, star) = (binom(n / 2, 2), binom(n / 2 - 1, 1), binom(n - 2, 2));
        ensure(cols[0] == n.to_string(), || format!("row `{row}`: n"))?;
        ensure(cols[1] == m_star.to_string(), || format!("row `{row}`: m_star"))?;
        ensure(cols[2] == delta.to_string(), || format!("row `{row}`: thick_delta"))?;
        ensure(cols[3] == star.to_string(), || format!("row `{row}`: star_edges"))?;
        let (num, den) = (m_star + 1, 6u128);
        let g = (1..=den).rev().find(|d| num % d == 0 && den % d == 0).unwrap();
        let frac = if den / g == 1 { format!("{}", num / g) } else { format!("{}/{}", num / g, den / g) };
        ensure(cols[4] == frac, || format!("row `{row}`: bound, want {frac}"))?;
        for (col, m) in [(cols[5], m_star), (cols[6], m_star + 1)] {
            if col.is_empty() {
                continue;
            }
            let f: u128 = col.parse().map_err(|_| format!("row `{row}`: f value `{col}`"))?;
            let lower = (4 * m).div_ceil(n as u128);
            ensure(f >= lower, || format!("row `{row}`: f({m}) = {f} below {lower}"))?;
        }
        ensure(cols[5] == delta.to_string(), || format!("row `{row}`: f at m* should equal thick delta"))?;
        ensure(["proved", "bounded"].contains(&cols[7]), || format!("row `{row}`: status"))?;
        ensure((cols[7] == "proved") == (!cols[5].is_empty() && !cols[6].is_empty()), || format!("row `{row}`: status vs blanks"))?;
        ratios.push(star as f64 / delta as f64);
    }
    ensure(lines.next().is_none() && ratios.len() == ns.len(), || "row count".into())?;
    ensure(ratios.windows(2).all(|w| w[0] < w[1]), || format!("ratios not increasing: {ratios:?}"))?;
    Ok(format!("star/thick ratios {ratios:?}"))
}

fn jrt(args: &[&str], threads: usize, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_jrt"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("-o")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!("jrt {args:?}: {}", String::from_utf8_lossy(&status.stderr))
    })?;
    fs::read(out).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let setup: &[(&str, &[&str])] = &[
        ("thick.json", &["generate", "--kind", "thick", "--n", "12", "--k", "4", "--t", "2"]),
        ("star.json", &["generate", "--kind", "star", "--n", "21", "--k", "4", "--s", "2"]),
        ("random.json", &["generate", "--kind", "random", "--r", "1", "--t", "2", "--n", "14", "--m", "25", "--seed", "9"]),
        ("teams.json", &["generate", "--kind", "thick", "--n", "8", "--k", "2", "--t", "2"]),
    ];
    for (file, args) in setup {
        jrt(args, 1, Path::new(&path(file)))?;
    }
    let star_text = fs::read_to_string(path("star.json")).map_err(|e| e.to_string())?;
    let star_h = Hypergraph::from_json(&star_text).map_err(|e| e.to_string())?;
    let star = Star::new(VertexSet::range(0, 2), star_h.edges().iter().copied()).map_err(|e| e.to_string())?;
    fs::write(path("star-spec.json"), serde_json::to_string(&star).unwrap()).map_err(|e| e.to_string())?;

    let (thick, teams, starf, random, spec) =
        (path("thick.json"), path("teams.json"), path("star.json"), path("random.json"), path("star-spec.json"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["generate", "--kind", "gadget", "--r", "1", "--t", "2", "--u", "5"],
        vec!["generate", "--kind", "random", "--r", "1", "--t", "2", "--n", "16", "--m", "30", "--seed", "3"],
        vec!["verify", &random, "--r", "1", "--t", "2"],
        vec!["sunflower", &starf, "--auto"],
        vec!["sunflower", &thick, "--kernel", "0,1"],
        vec!["decompose-lemma", "--q", "2", "--k", "4", &teams, &thick],
        vec!["core", &spec, "--r", "1", "--t", "2"],
        vec!["extract", &starf, "--r", "1", "--t", "2"],
        vec!["structure", &random, "--r", "1", "--t", "2"],
        vec!["structure", &starf, "--r", "1", "--t", "2"],
        vec!["search", "--r", "1", "--t", "2", "--n", "10", "--m", "11"],
        vec!["search", "--r", "1", "--t", "2", "--n", "8", "--m", "6", "--witnesses", "--canonical"],
        vec!["scan", "--r", "1", "--t", "2", "--n", "8,10,12", "--budget-nodes", "1000000"],
    ];
    for args in &runs {
        let a = jrt(args, 1, Path::new(&path("a.out")))?;
        let b = jrt(args, 4, Path::new(&path("b.out")))?;
        let c = jrt(args, 4, Path::new(&path("c.out")))?;
        ensure(a == b && b == c, || format!("jrt {args:?} differs across runs"))?;
    }
    Ok(format!("{} verb invocations, 3 runs each", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("construction edge counts", criterion_1, Duration::from_secs(60)),
        ("membership of constructions", criterion_2, Duration::from_secs(120)),
        ("rank bound for divisible systems", criterion_3, Duration::from_secs(60)),
        ("sunflowers in 2-bounded families", criterion_4, Duration::from_secs(120)),
        ("decomposition clauses", criterion_5, Duration::from_secs(300)),
        ("structure certificates", criterion_6, Duration::from_secs(600)),
        ("cores and centre containment", criterion_7, Duration::from_secs(120)),
        ("minimum maximum degree on 8 vertices", criterion_8, Duration::from_secs(600)),
        ("phase scan CSV", criterion_9, Duration::from_secs(60)),
        ("determinism across runs and threads", criterion_10, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed > *limit {
                Err(format!("{d}; took {elapsed:.1?}, limit {limit:?}"))
            } else {
                Ok(d)
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {elapsed:.1?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
