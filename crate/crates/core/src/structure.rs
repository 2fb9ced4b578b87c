//! The structure decomposition of a member of `J(r,t)`.
//!
//! Stages, in order:
//!
//! 1. Red sets: kernels (of size at most `rt(t-1)+1`) of sunflowers with at
//!    least `rt²` edges. `H*_red` holds those of size exactly `rt(t-1)+1`.
//! 2. Green sets: the basis obtained by decomposing the smaller red sets with
//!    `q = t` against `H*_red ∪ H`. Green `t`-sets are the teams.
//! 3. `V_T` is the union of the teams, `H_T = H[V_T]`.
//! 4. Purple sets: `rt(t-1)`-sets that are kernels of sunflowers with at least
//!    `rt²` members of `H*_red`.
//! 5. `H_S`: edges `h` with a purple `Y_h ⊆ h` such that `Y_h ∪ {v}` is in
//!    `H*_red` for every `v ∈ h \ Y_h` (the colex-least such `Y_h` is used).
//!    `V_S` is the union of the sets `h \ Y_h`.
//! 6. `V_R` and `H_R` are what is left.
//!
//! Every intermediate identity that holds for genuine members is checked at
//! run time and reported as [`Error::Assertion`] if it fails. The residual
//! edges are then classified and the resulting certificate is verified
//! independently by [`verify_certificate`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::counting::binomial;
use crate::decomposition::{decompose, ClauseViolation};
use crate::error::{Error, Result};
use crate::hypergraph::{canonicalize, Hypergraph};
use crate::profiles::{check_jrt, rank_bound_check, DivisiblePairParams, JrtParams};
use crate::stars::Star;
use crate::sunflowers::{kernels_with_petals, red_colouring_with_budget, RedColouring, DEFAULT_NODE_BUDGET};
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssertLevel {
    /// Checks that only hold asymptotically are recorded, not enforced.
    #[default]
    Soft,
    Hard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureOptions {
    pub assert_level: AssertLevel,
    pub node_budget: u64,
}

impl Default for StructureOptions {
    fn default() -> Self {
        StructureOptions {
            assert_level: AssertLevel::Soft,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// `(rt²)^(r³t⁶)`.
pub fn structure_constant(p: &JrtParams) -> BigUint {
    let (r, t) = (p.r() as u32, p.t() as u32);
    BigUint::from(p.k()).pow(r.pow(3) * t.pow(6))
}

mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub t: usize,
    pub ell: usize,
    #[serde(with = "decimal")]
    pub a: BigUint,
}

impl CertificateParams {
    pub fn for_params(p: &JrtParams) -> Self {
        CertificateParams {
            t: p.t(),
            ell: p.ell(),
            a: structure_constant(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCertificate {
    pub params: CertificateParams,
    pub v_t: VertexSet,
    pub v_s: VertexSet,
    pub v_r: VertexSet,
    pub h_t: Vec<VertexSet>,
    pub h_s: Vec<VertexSet>,
    pub h_r: Vec<VertexSet>,
    pub teams: Vec<VertexSet>,
    pub stars: Vec<Star>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenSets {
    pub sets: Vec<VertexSet>,
    pub teams: Vec<VertexSet>,
    /// Maximality of the underlying saturation is relative to this support.
    pub support: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarAssignment {
    pub edge: VertexSet,
    pub centre: VertexSet,
    /// How many purple sets qualified; the colex-least was taken.
    pub choices: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResidualClass {
    /// Meets a star body and contains a team avoiding that vertex's red set.
    #[serde(rename = "H_ST")]
    StarTeam,
    /// Not a union of its red and green subsets.
    #[serde(rename = "H1")]
    NotRedGreen,
    /// The union of its green subsets.
    #[serde(rename = "H2")]
    Green,
    /// Contains a set of `H*_red` and is the union of such sets.
    #[serde(rename = "H3x")]
    StarRedUnion,
    /// Contains a set of `H*_red` but is not the union of such sets.
    #[serde(rename = "H3y")]
    StarRedPartial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub edge: VertexSet,
    pub class: ResidualClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoftCheck {
    pub name: String,
    pub applies: bool,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub red: RedColouring,
    pub green: GreenSets,
    pub purple: Vec<VertexSet>,
    pub star_assignments: Vec<StarAssignment>,
    pub residual_classes: Vec<ResidualEntry>,
    pub checks: Vec<String>,
    pub soft_checks: Vec<SoftCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureOutput {
    pub certificate: StructureCertificate,
    pub trace: PipelineTrace,
}

pub fn build_structure(p: &JrtParams, h: &Hypergraph) -> Result<StructureOutput> {
    build_structure_with(p, h, &StructureOptions::default())
}

fn ensure(cond: bool, check: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::assertion(check, detail()))
    }
}

fn union_of<'a>(sets: impl IntoIterator<Item = &'a VertexSet>) -> VertexSet {
    sets.into_iter().fold(VertexSet::EMPTY, |acc, &s| acc | s)
}

/// Colex-first pair `(f, f')`, possibly equal, whose intersection size is not
/// permitted.
fn bad_intersection(p: &JrtParams, sets: &[VertexSet]) -> Option<(VertexSet, VertexSet)> {
    (0..sets.len()).into_par_iter().find_map_first(|j| {
        sets[..=j]
            .iter()
            .find(|a| !p.in_profile(a.intersection_size(sets[j])))
            .map(|&a| (a, sets[j]))
    })
}

pub fn build_structure_with(p: &JrtParams, h: &Hypergraph, opts: &StructureOptions) -> Result<StructureOutput> {
    if let Err(v) = check_jrt(p, h) {
        return Err(Error::NotMember {
            r: p.r(),
            t: p.t(),
            reason: serde_json::to_string(&v).unwrap_or_default(),
        });
    }
    let (t, ell, n) = (p.t(), p.ell(), h.n());
    let mut checks: Vec<String> = Vec::new();
    let mut passed = |name: &str| checks.push(name.to_string());

    // red
    let red = red_colouring_with_budget(p, h, opts.node_budget)?;
    let h_star: &[VertexSet] = red.h_star_red.edges();
    {
        let mut all: Vec<VertexSet> = h.edges().iter().chain(&red.red).copied().collect();
        canonicalize(&mut all);
        if let Some((a, b)) = bad_intersection(p, &all) {
            return Err(Error::assertion(
                "red-intersections",
                format!("|{a} ∩ {b}| = {} is not permitted", a.intersection_size(b)),
            ));
        }
        passed("red-intersections");
        let rank = rank_bound_check(t, &red.h_star_red)?;
        ensure(rank.hypotheses_hold() && rank.independent && rank.within_bound, "red-rank", || {
            format!("H*_red has {} members on {} vertices, rank {}", rank.edge_count, n, rank.rank)
        })?;
        passed("red-rank");
    }

    // green
    let mut g_sys: Vec<VertexSet> = h_star.iter().chain(h.edges()).copied().collect();
    canonicalize(&mut g_sys);
    let dec = decompose(&DivisiblePairParams::new(t, p.k())?, &red.h_hat_red, &g_sys)?;
    let green = dec.basis;
    let teams: Vec<VertexSet> = green.iter().copied().filter(|g| g.len() == t).collect();
    for team in &teams {
        if let Some(other) = green.iter().find(|g| *g != team && !g.is_disjoint(*team)) {
            return Err(Error::assertion("teams-disjoint", format!("team {team} meets green set {other}")));
        }
    }
    passed("teams-disjoint");
    let v_t = union_of(&teams);
    let h_t = h.induced(v_t);

    // purple
    let centre = p.centre_size();
    let mut candidates: Vec<VertexSet> = h_star
        .iter()
        .flat_map(|f| f.iter().map(move |v| *f - VertexSet::singleton(v)))
        .collect();
    canonicalize(&mut candidates);
    let purple: Vec<VertexSet> = kernels_with_petals(h_star, &candidates, p.k(), opts.node_budget)?
        .into_keys()
        .filter(|y| y.len() == centre)
        .collect();
    for y in &purple {
        for other in purple.iter().chain(h_star).chain(h.edges()) {
            ensure(p.in_profile(y.intersection_size(*other)), "purple-intersections", || {
                format!("|{y} ∩ {other}| = {} is not permitted", y.intersection_size(*other))
            })?;
        }
    }
    passed("purple-intersections");

    // stars
    let mut assignments: Vec<StarAssignment> = Vec::new();
    for &e in h.edges() {
        let mut fits = purple.iter().filter(|y| {
            y.is_subset(e) && (e - **y).iter().all(|v| red.h_star_red.contains_edge(**y | VertexSet::singleton(v)))
        });
        if let Some(&y) = fits.next() {
            assignments.push(StarAssignment {
                edge: e,
                centre: y,
                choices: 1 + fits.count(),
            });
        }
    }
    let v_s = union_of(&assignments.iter().map(|a| a.edge - a.centre).collect::<Vec<_>>());
    let h_s: Vec<VertexSet> = assignments.iter().map(|a| a.edge).collect();
    let mut by_centre: BTreeMap<VertexSet, Vec<VertexSet>> = BTreeMap::new();
    for a in &assignments {
        by_centre.entry(a.centre).or_default().push(a.edge);
    }
    let stars: Vec<Star> = by_centre
        .into_iter()
        .map(|(c, edges)| Star::new(c, edges))
        .collect::<Result<_>>()?;

    ensure(v_s.is_disjoint(v_t), "stars-avoid-teams", || {
        format!("V_S and V_T share {}", v_s & v_t)
    })?;
    passed("stars-avoid-teams");
    for a in &assignments {
        ensure(a.centre.is_disjoint(v_s), "centres-avoid-bodies", || {
            format!("centre {} of {} meets V_S", a.centre, a.edge)
        })?;
    }
    passed("centres-avoid-bodies");
    for a in &assignments {
        let body = a.edge - a.centre;
        if let Some(f) = h.edges().iter().find(|f| !f.is_disjoint(body) && !a.centre.is_subset(**f)) {
            return Err(Error::assertion(
                "centre-containment",
                format!("{f} meets {} in V_S but misses its centre {}", a.edge, a.centre),
            ));
        }
    }
    passed("centre-containment");
    for (i, s) in stars.iter().enumerate() {
        if let Some(o) = stars[i + 1..].iter().find(|o| !o.body.is_disjoint(s.body)) {
            return Err(Error::assertion(
                "semi-disjoint",
                format!("stars on {} and {} share body vertices", s.centre, o.centre),
            ));
        }
    }
    passed("semi-disjoint");
    let by_count: Vec<VertexSet> = h.edges().iter().copied().filter(|e| e.intersection_size(v_s) == ell).collect();
    ensure(by_count == h_s, "star-edges-by-count", || {
        "H_S differs from the edges meeting V_S in rt vertices".into()
    })?;
    passed("star-edges-by-count");
    ensure(h_t.edges().iter().all(|e| h_s.binary_search(e).is_err()), "team-star-disjoint", || {
        "an edge lies in both H_T and H_S".into()
    })?;
    passed("team-star-disjoint");

    // residual
    let v_r = h.universe() - v_t - v_s;
    let h_r: Vec<VertexSet> = h
        .edges()
        .iter()
        .copied()
        .filter(|e| !h_t.contains_edge(*e) && h_s.binary_search(e).is_err())
        .collect();
    let star_of_vertex = |v: usize| stars.iter().find(|s| s.body.contains(v)).map(|s| s.centre | VertexSet::singleton(v));
    let mut residual_classes = Vec::with_capacity(h_r.len());
    for &e in &h_r {
        let star_team = (e & v_s).iter().any(|v| {
            let y_v = star_of_vertex(v).expect("V_S vertices lie in a star body");
            teams.iter().any(|g| g.is_subset(e) && g.is_disjoint(y_v))
        });
        let class = if star_team {
            ResidualClass::StarTeam
        } else {
            let reds = union_of(red.red.iter().filter(|f| f.is_subset(e)));
            let greens = union_of(green.iter().filter(|g| g.is_subset(e)));
            let star_reds: Vec<VertexSet> = h_star.iter().copied().filter(|f| f.is_subset(e)).collect();
            if reds | greens != e {
                ResidualClass::NotRedGreen
            } else if greens == e {
                ResidualClass::Green
            } else if !star_reds.is_empty() {
                if union_of(&star_reds) == e {
                    ResidualClass::StarRedUnion
                } else {
                    ResidualClass::StarRedPartial
                }
            } else {
                return Err(Error::assertion("residual-cover", format!("residual edge {e} fits no class")));
            }
        };
        if e.is_disjoint(v_r) {
            ensure(class == ResidualClass::StarTeam, "residual-meets-vr", || {
                format!("residual edge {e} avoids V_R but is not in H_ST")
            })?;
        }
        residual_classes.push(ResidualEntry { edge: e, class });
    }
    passed("residual-cover");
    passed("residual-meets-vr");

    let mut soft_checks = Vec::new();
    {
        let applies = v_s.is_empty();
        let cap = binomial((n / t) as u64, ell as u64);
        let holds = !applies || (h_r.is_empty() && h.len() as u128 <= cap);
        soft_checks.push(SoftCheck {
            name: "no-stars-means-no-residual".into(),
            applies,
            holds,
            detail: format!("|H_R| = {}, |H| = {}, C({}, {}) = {cap}", h_r.len(), h.len(), n / t, ell),
        });
    }
    if opts.assert_level == AssertLevel::Hard {
        if let Some(c) = soft_checks.iter().find(|c| !c.holds) {
            return Err(Error::assertion(c.name.clone(), c.detail.clone()));
        }
    }

    let certificate = StructureCertificate {
        params: CertificateParams::for_params(p),
        v_t,
        v_s,
        v_r,
        h_t: h_t.edges().to_vec(),
        h_s,
        h_r,
        teams: teams.clone(),
        stars,
    };
    let report = verify_certificate(p, h, &certificate);
    if let Some(v) = report.violations.first() {
        return Err(Error::assertion(format!("certificate-{}", v.clause), v.detail.clone()));
    }
    checks.push("certificate".into());

    Ok(StructureOutput {
        certificate,
        trace: PipelineTrace {
            red,
            green: GreenSets {
                sets: green,
                teams,
                support: dec.support,
            },
            purple,
            star_assignments: assignments,
            residual_classes,
            checks,
            soft_checks,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub violations: Vec<ClauseViolation>,
}

fn rational_power(n: usize, exp: i64) -> BigRational {
    let base = BigInt::from(n);
    if exp >= 0 {
        BigRational::from_integer(base.pow(exp as u32))
    } else {
        BigRational::new(BigInt::one(), base.pow((-exp) as u32))
    }
}

/// `|V_T||V_S| n^(ℓ-3) + |V_R| a n^(ℓ-2)`, exactly. Zero when `n = 0`.
pub fn residual_bound(n: usize, v_t: usize, v_s: usize, v_r: usize, ell: usize, a: &BigUint) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    let ell = ell as i64;
    let first = BigRational::from_integer(BigInt::from(v_t * v_s)) * rational_power(n, ell - 3);
    let second = BigRational::from_integer(BigInt::from(v_r) * BigInt::from(a.clone())) * rational_power(n, ell - 2);
    first + second
}

/// Checks a certificate against `h` from scratch: partition well-formedness
/// and the four structural clauses. Every violation is listed.
pub fn verify_certificate(p: &JrtParams, h: &Hypergraph, c: &StructureCertificate) -> CertificateReport {
    let mut violations = Vec::new();
    let mut fail = |clause: &str, detail: String| {
        violations.push(ClauseViolation {
            clause: clause.into(),
            detail,
        })
    };
    let t = c.params.t;
    let ell = c.params.ell;

    if c.params.t != p.t() || c.params.ell != p.ell() || c.params.a != structure_constant(p) {
        fail("params", format!("expected t={}, ell={} and a=(rt²)^(r³t⁶)", p.t(), p.ell()));
    }

    // partition
    let universe = h.universe();
    if !c.v_t.is_disjoint(c.v_s) || !c.v_t.is_disjoint(c.v_r) || !c.v_s.is_disjoint(c.v_r) {
        fail("partition", "vertex parts overlap".into());
    }
    if c.v_t | c.v_s | c.v_r != universe {
        fail("partition", "vertex parts do not cover the vertex set".into());
    }
    let mut listed: Vec<VertexSet> = c.h_t.iter().chain(&c.h_s).chain(&c.h_r).copied().collect();
    let total = listed.len();
    canonicalize(&mut listed);
    if listed.len() != total {
        fail("partition", "edge parts overlap".into());
    }
    if listed != h.edges() {
        fail("partition", "edge parts do not match the edges of the hypergraph".into());
    }

    // (i)
    let mut team_union = VertexSet::EMPTY;
    for (i, w) in c.teams.iter().enumerate() {
        if w.len() != t {
            fail("i", format!("team {w} does not have {t} vertices"));
        }
        if c.teams[..i].iter().any(|o| !o.is_disjoint(*w)) {
            fail("i", format!("team {w} overlaps an earlier team"));
        }
        if let Some(e) = h.edges().iter().find(|e| {
            let cut = e.intersection_size(*w);
            cut != 0 && cut != w.len()
        }) {
            fail("i", format!("team {w} is split by edge {e}"));
        }
        team_union = team_union | *w;
    }
    if team_union != c.v_t {
        fail("i", "V_T is not the union of the teams".into());
    }
    if h.induced(c.v_t).edges() != c.h_t.as_slice() {
        fail("i", "H_T is not H[V_T]".into());
    }

    // (ii)
    let mut h_s = c.h_s.clone();
    canonicalize(&mut h_s);
    let by_count: Vec<VertexSet> = h.edges().iter().copied().filter(|e| e.intersection_size(c.v_s) == ell).collect();
    if h_s != by_count {
        fail("ii", format!("H_S is not the set of edges meeting V_S in {ell} vertices"));
    }
    let mut star_edges: Vec<VertexSet> = Vec::new();
    for (i, s) in c.stars.iter().enumerate() {
        if s.centre.len() != ell * (t - 1) {
            fail("ii", format!("centre {} does not have {} vertices", s.centre, ell * (t - 1)));
        }
        if !s.centre.is_subset(c.v_t | c.v_r) {
            fail("ii", format!("centre {} is not inside V_T ∪ V_R", s.centre));
        }
        if !s.body.is_subset(c.v_s) {
            fail("ii", format!("body of the star on {} is not inside V_S", s.centre));
        }
        if let Some(e) = s
            .edges
            .iter()
            .find(|e| !s.centre.is_subset(**e) || !(**e - s.centre).is_subset(s.body) || !h.contains_edge(**e))
        {
            fail("ii", format!("{e} is not an edge of the star on {}", s.centre));
        }
        for o in &c.stars[..i] {
            if o.centre == s.centre {
                fail("ii", format!("two stars share the centre {}", s.centre));
            }
            if !o.body.is_disjoint(s.body) {
                fail("ii", format!("stars on {} and {} have overlapping bodies", o.centre, s.centre));
            }
        }
        star_edges.extend(&s.edges);
    }
    let star_total = star_edges.len();
    canonicalize(&mut star_edges);
    if star_edges.len() != star_total || star_edges != h_s {
        fail("ii", "the stars do not partition H_S".into());
    }

    // (iii)
    for s in &c.stars {
        if let Some(e) = h.edges().iter().find(|e| !e.is_disjoint(s.body) && !s.centre.is_subset(**e)) {
            fail("iii", format!("edge {e} meets the body of the star on {} but misses its centre", s.centre));
        }
    }

    // (iv)
    let bound = residual_bound(h.n(), c.v_t.len(), c.v_s.len(), c.v_r.len(), ell, &c.params.a);
    if BigRational::from_integer(BigInt::from(c.h_r.len())) > bound {
        fail("iv", format!("|H_R| = {} exceeds the residual bound", c.h_r.len()));
    }

    CertificateReport {
        valid: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{full_star, thick_clique};

    fn p12() -> JrtParams {
        JrtParams::new(1, 2).unwrap()
    }

    #[test]
    fn thick_clique_is_all_teams() {
        let (h, teams) = thick_clique(16, 4, 2).unwrap();
        let out = build_structure(&p12(), &h).unwrap();
        let c = &out.certificate;
        assert_eq!(c.v_t, h.universe());
        assert!(c.v_s.is_empty() && c.v_r.is_empty());
        assert_eq!(c.h_t, h.edges());
        assert!(c.h_s.is_empty() && c.h_r.is_empty());
        assert_eq!(c.teams, teams.teams);
        assert!(out.trace.purple.is_empty());
    }

    #[test]
    fn full_star_is_one_star() {
        let (h, spec) = full_star(12, 4, 2).unwrap();
        let out = build_structure(&p12(), &h).unwrap();
        let c = &out.certificate;
        assert_eq!(c.v_t, spec.centre);
        assert_eq!(c.v_s, spec.body);
        assert!(c.v_r.is_empty());
        assert_eq!(c.h_s, h.edges());
        assert!(c.h_t.is_empty() && c.h_r.is_empty());
        assert_eq!(out.trace.purple, vec![spec.centre]);
        assert_eq!(out.trace.green.sets, vec![spec.centre]);
    }

    #[test]
    fn empty_hypergraph() {
        let h = Hypergraph::empty(6);
        let out = build_structure(&p12(), &h).unwrap();
        assert!(out.certificate.h_r.is_empty());
        assert_eq!(out.certificate.v_r, h.universe());
        assert!(verify_certificate(&p12(), &h, &out.certificate).valid);
    }

    #[test]
    fn constant_for_smallest_case() {
        assert_eq!(structure_constant(&p12()), BigUint::from(4u32).pow(64));
    }

    #[test]
    fn negative_exponent_bound() {
        // ell = 2: |V_T||V_S|/n + |V_R|a
        let b = residual_bound(10, 2, 5, 3, 2, &BigUint::from(7u32));
        assert_eq!(b, BigRational::new(BigInt::from(10 + 210), BigInt::from(10)));
    }

    #[test]
    fn rejects_non_members() {
        let h = Hypergraph::new(7, [VertexSet::range(0, 4), VertexSet::range(3, 7)]).unwrap();
        assert!(matches!(build_structure(&p12(), &h), Err(Error::NotMember { .. })));
    }
}
