//! Verification suites: run every check that applies to one instance and
//! collect the outcomes in a [`Report`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::bounds::{edge_monotonicity_check, extreme_zero_check, star_bounds_check};
use crate::classify::{
    algebraic_to_json, decompose, gallai_check, internal_frontier_checks, matched_condition_check,
    multiplicity_formula_check, sign_table_check_with, stability2_check, stability_check, zero_crossing_check,
    ThetaContext,
};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, AlgebraicNumber};
use crate::graph::{to_json, VertexPath};
use crate::matchpoly::{
    christoffel_darboux_check, contraction_identity_check, contraction_weight_by_cross_difference,
    derivative_identity_check, interlacing_check, real_rootedness_check, real_roots, MatchingTable,
};
use crate::oracle::{crosscheck_theta_zero, ge_structure_check};
use crate::pathtree::{
    build_path_tree, godsil_identity_check, path_difference_check, plus_count, plus_sign_monotonicity_check,
    sign_annotation_check, sylvester_count, zero_path_check,
};
use crate::report::Report;
use crate::verdict::Verdict;
use crate::{RatGraph, Rational};

/// Path trees larger than this are not annotated inside suites.
pub const SUITE_TREE_NODES: usize = 2_000;
/// Paths per `θ` checked for the 0-path laws.
pub const SUITE_PATHS_PER_THETA: usize = 64;

pub mod laws {
    use crate::report::Law;

    macro_rules! law {
        ($name:ident, $id:literal, $text:literal) => {
            pub const $name: Law = Law { id: $id, statement: $text };
        };
    }

    law!(REAL_ROOTS, "real_rootedness", "mu(G) has n real roots with multiplicity, all inside [min r - 2 sqrt B, max r + 2 sqrt B]");
    law!(DERIVATIVE, "derivative", "mu(G)' = sum_j mu(G\\j)");
    law!(INTERLACING, "interlacing", "zeros of mu(G\\i) interlace those of mu(G); multiplicities differ by at most one");
    law!(CHRISTOFFEL_DARBOUX, "christoffel_darboux", "mu(G\\i)mu(G\\j) - mu(G\\i,j)mu(G) = sum over i-j paths c of lambda_c mu(G\\c)^2");
    law!(CONTRACTION, "contraction", "alpha_i(G) = alpha_i(G\\j) + lambda_{i~j} / alpha_j(G\\i) with -lambda_{i~j} a sum of squares");
    law!(DECOMPOSITION, "decomposition", "D, A, N, P partition the vertices, A lies in the inf class and m = c(D) - |A|");
    law!(SIGN_TABLE, "sign_table", "the class of lambda_{i~j}(theta) constrains the classes of i and j in G, G\\i and G\\j");
    law!(FRONTIER, "internal_frontier", "D is non-empty iff theta is a root; inf iff a neighbour is 0 after deletion; A in inf; deleting A keeps +/- classes and values");
    law!(ZERO_CROSSING, "zero_crossing", "class-0 continued fractions pass from - to + at theta");
    law!(MULTIPLICITY, "multiplicity_formula", "m_theta(G) = c(D) - |A|");
    law!(MATCHED, "matched_condition", "every non-empty S in A meets at least |S|+1 critical components");
    law!(STABILITY, "stability", "deleting i in A keeps every other class and every finite value at theta");
    law!(STABILITY_REWEIGHT, "stability_reweight", "reweighting j in A keeps every value at theta while each S in A still reaches |S|+1 critical components");
    law!(GALLAI, "gallai", "a connected theta-critical graph has m_theta = 1");
    law!(SYLVESTER, "sylvester", "plus counts along a Hamiltonian path and its reverse equal the number of roots below theta; the roots are simple");
    law!(PLUS_SIGNS, "plus_sign_count", "plus count along c = roots of mu(G) below theta - roots of mu(G\\c) below theta, jumping by at most one per root");
    law!(ZERO_PATH, "zero_path", "m_theta(G) - m_theta(G\\c) <= 1 and 0-path endpoints are of class 0");
    law!(HAMILTONIAN_ZERO_PATH, "hamiltonian_zero_path", "a Hamiltonian path is a 0-path at every root");
    law!(PATH_DIFFERENCE, "path_difference", "#0 - #inf along c and along its reverse both equal m_theta(G) - m_theta(G\\c)");
    law!(GODSIL, "path_tree_identity", "mu(G) mu(T\\root) = mu(G\\i) mu(T) for the path tree T at i");
    law!(TREE_SIGNS, "path_tree_signs", "every 0 node of the annotated path tree hangs below an inf node");
    law!(EXTREME_ZERO, "extreme_zero", "at the extreme zeros of a connected graph every vertex is of class 0 and the zero is simple");
    law!(EDGE_MONOTONICITY, "edge_monotonicity", "raising an edge weight towards 0 strictly lowers the largest zero");
    law!(STAR_BOUNDS, "star_bounds", "r_max < z* <= z_G, (z_G - r_max)^2 < 4B, z* solves the star fixed point, z_G^2 >= max weighted degree for zero offsets");
    law!(GE_STRUCTURE, "gallai_edmonds", "classical structure: factor-critical D components, perfect C, |S|+1 condition, matching shape, deficiency");
    law!(CROSSCHECK_ZERO, "crosscheck_zero", "at theta = 0 with unit weights the decomposition is the classical one and m_0 is the deficiency");
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Hl,
    Interlace,
    Cd,
    Contraction,
    Signs,
    Stability,
    Gallai,
    Sylvester,
    Pathtree,
    Bounds,
    Classical,
}

impl Suite {
    pub const EVERY: [Suite; 11] = [
        Suite::Hl,
        Suite::Interlace,
        Suite::Cd,
        Suite::Contraction,
        Suite::Signs,
        Suite::Stability,
        Suite::Gallai,
        Suite::Sylvester,
        Suite::Pathtree,
        Suite::Bounds,
        Suite::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Hl => "hl",
            Suite::Interlace => "interlace",
            Suite::Cd => "cd",
            Suite::Contraction => "contraction",
            Suite::Signs => "signs",
            Suite::Stability => "stability",
            Suite::Gallai => "gallai",
            Suite::Sylvester => "sylvester",
            Suite::Pathtree => "pathtree",
            Suite::Bounds => "bounds",
            Suite::Classical => "classical",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EVERY)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// `rat:<p/q>` for a rational, `root:<k>` for the `k`-th distinct root of
/// `μ(G)` in increasing order (1-based).
pub fn parse_theta_spec(g: &RatGraph, spec: &str) -> Result<AlgebraicNumber> {
    if let Some(r) = spec.strip_prefix("rat:") {
        return Ok(AlgebraicNumber::from_rational(parse_rational(r)?));
    }
    if let Some(k) = spec.strip_prefix("root:") {
        let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("bad root index {k:?}")))?;
        let roots = real_roots(g)?;
        if k == 0 || k > roots.len() {
            return Err(Error::Parse(format!("root index {k} out of range 1..={}", roots.len())));
        }
        return Ok(roots[k - 1].clone());
    }
    Err(Error::Parse(format!("theta must be rat:<p/q> or root:<k>, got {spec:?}")))
}

/// Rationals strictly between consecutive distinct roots.
pub fn midpoints(roots: &[AlgebraicNumber]) -> Vec<Rational> {
    roots
        .windows(2)
        .map(|w| (w[0].interval().hi() + w[1].interval().lo()) / Rational::from_integer(2.into()))
        .collect()
}

/// One rational in every gap between consecutive distinct roots and one
/// beyond each end, each chosen so that no term of the plus count along `c`
/// or its reverse vanishes.
pub fn generic_points(g: &RatGraph, c: &VertexPath) -> Result<Vec<Rational>> {
    let roots = real_roots(g)?;
    let table = MatchingTable::new(g);
    let one = Rational::from_integer(1.into());
    let mut gaps: Vec<(Rational, Rational)> = Vec::new();
    match (roots.first(), roots.last()) {
        (Some(first), Some(last)) => {
            gaps.push((first.interval().lo() - Rational::from_integer(2.into()), first.interval().lo().clone()));
            for w in roots.windows(2) {
                gaps.push((w[0].interval().hi().clone(), w[1].interval().lo().clone()));
            }
            gaps.push((last.interval().hi().clone(), last.interval().hi() + Rational::from_integer(2.into())));
        }
        _ => gaps.push((-one.clone(), one.clone())),
    }
    let reverse = c.reversed();
    let mut out = Vec::new();
    for (lo, hi) in gaps {
        let found = (2i64..200).flat_map(|m| (1..m).map(move |k| (k, m))).find_map(|(k, m)| {
            let t = &lo + (&hi - &lo) * Rational::new(k.into(), m.into());
            (plus_count(&table, c, &t).is_ok() && plus_count(&table, &reverse, &t).is_ok()).then_some(t)
        });
        out.push(found.ok_or_else(|| Error::Degenerate("no generic point found in a root gap".into()))?);
    }
    Ok(out)
}

/// Every live vertex pair `(i, j)` with `i < j`.
fn pairs(g: &RatGraph) -> Vec<(usize, usize)> {
    let vs: Vec<usize> = g.vertices().iter().collect();
    vs.iter().enumerate().flat_map(|(k, &i)| vs[k + 1..].iter().map(move |&j| (i, j))).collect()
}

fn ids(i: usize, j: usize) -> Value {
    json!({"i": i + 1, "j": j + 1})
}

fn instance_json(g: &RatGraph, name: Option<&str>) -> Value {
    json!({"name": name, "graph": to_json(g)})
}

/// Runs `suite` on `g`; `name` only labels the report.
pub fn run_suite(g: &RatGraph, suite: Suite, name: Option<&str>) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(instance_json(g, name), suite.name());
    let roots = real_roots(g)?;
    let mut thetas: Vec<AlgebraicNumber> = roots.clone();
    thetas.extend(midpoints(&roots).into_iter().map(AlgebraicNumber::from_rational));
    let list: Vec<Suite> = if suite == Suite::All { Suite::EVERY.to_vec() } else { vec![suite] };
    for s in list {
        match s {
            Suite::Hl => hl(g, &mut report),
            Suite::Interlace => interlace(g, &mut report),
            Suite::Cd => cd(g, &mut report),
            Suite::Contraction => contraction(g, &mut report),
            Suite::Signs => signs(g, &roots, &thetas, &mut report),
            Suite::Stability => stability(g, &roots, &mut report),
            Suite::Gallai => gallai(g, &roots, &mut report),
            Suite::Sylvester => sylvester(g, &roots, &mut report),
            Suite::Pathtree => pathtree(g, &roots, &mut report),
            Suite::Bounds => bounds(g, &mut report),
            Suite::Classical => classical(g, &mut report),
            Suite::All => unreachable!("expanded above"),
        }
    }
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn hl(g: &RatGraph, report: &mut Report) {
    report.push_result(laws::REAL_ROOTS, None, json!({}), real_rootedness_check(g));
}

fn interlace(g: &RatGraph, report: &mut Report) {
    report.push(laws::DERIVATIVE, None, json!({}), derivative_identity_check(g));
    for i in g.vertices().iter() {
        report.push_result(laws::INTERLACING, None, json!({"i": i + 1}), interlacing_check(g, i));
    }
}

fn cd(g: &RatGraph, report: &mut Report) {
    for (i, j) in pairs(g) {
        report.push_result(laws::CHRISTOFFEL_DARBOUX, None, ids(i, j), christoffel_darboux_check(g, i, j));
    }
}

fn contraction(g: &RatGraph, report: &mut Report) {
    for (i, j) in pairs(g) {
        report.push_result(laws::CONTRACTION, None, ids(i, j), contraction_identity_check(g, i, j));
    }
}

/// Decomposition invariants, the sign table on every ordered pair, frontier
/// lemmas, and sign changes of class-0 vertices.
pub fn signs(g: &RatGraph, roots: &[AlgebraicNumber], thetas: &[AlgebraicNumber], report: &mut Report) {
    let table = MatchingTable::new(g);
    let weights: Vec<((usize, usize), _)> = pairs(g)
        .into_iter()
        .flat_map(|(i, j)| [(i, j), (j, i)])
        .map(|(i, j)| ((i, j), contraction_weight_by_cross_difference(&table, i, j)))
        .collect();
    for theta in thetas {
        let ctx = ThetaContext::new(g, theta.clone());
        let tj = Some(algebraic_to_json(theta));
        report.push_result(laws::DECOMPOSITION, tj.clone(), json!({}), decompose(&ctx).map(|_| Verdict::Pass));
        for ((i, j), w) in &weights {
            report.push_result(laws::SIGN_TABLE, tj.clone(), ids(*i, *j), sign_table_check_with(&ctx, *i, *j, w));
        }
        report.push_result(laws::FRONTIER, tj.clone(), json!({}), internal_frontier_checks(&ctx));
        if roots.contains(theta) {
            report.push_result(laws::ZERO_CROSSING, tj, json!({}), zero_crossing_check(&ctx));
        }
    }
}

/// Multiplicity formula, the `|S|+1` condition, and both stability laws at
/// every root.
pub fn stability(g: &RatGraph, roots: &[AlgebraicNumber], report: &mut Report) {
    for theta in roots {
        let ctx = ThetaContext::new(g, theta.clone());
        let tj = Some(algebraic_to_json(theta));
        report.push_result(laws::MULTIPLICITY, tj.clone(), json!({}), multiplicity_formula_check(&ctx));
        report.push_result(laws::MATCHED, tj.clone(), json!({}), matched_condition_check(&ctx));
        let dec = match decompose(&ctx) {
            Ok(d) => d,
            Err(e) => {
                report.push_result(laws::STABILITY, tj, json!({}), Err(e));
                continue;
            }
        };
        if dec.a.is_empty() {
            let na = Verdict::not_applicable("frontier of the zero set is empty");
            report.push(laws::STABILITY, tj.clone(), json!({}), na.clone());
            report.push(laws::STABILITY_REWEIGHT, tj, json!({}), na);
            continue;
        }
        for i in dec.a.iter() {
            report.push_result(laws::STABILITY, tj.clone(), json!({"i": i + 1}), stability_check(&ctx, i));
            for (r, lambdas) in reweightings(g, i) {
                let params = json!({
                    "j": i + 1,
                    "r": crate::exact::format_rational(&r),
                    "lambdas": lambdas.iter().map(|(k, w)| json!([k + 1, crate::exact::format_rational(w)])).collect::<Vec<_>>(),
                });
                report.push_result(laws::STABILITY_REWEIGHT, tj.clone(), params, stability2_check(&ctx, i, r, &lambdas));
            }
        }
    }
}

/// Deterministic weight changes at `j`: shift the offset by one and double
/// every edge weight; drop the edge to the lowest neighbour; add an edge of
/// weight -1 to the lowest non-neighbour.
pub fn reweightings(g: &RatGraph, j: usize) -> Vec<(Rational, Vec<(usize, Rational)>)> {
    let two = Rational::from_integer(2.into());
    let r = g.offset(j).clone();
    let nbrs: Vec<usize> = g.neighbors(j).iter().collect();
    let mut out = vec![(
        &r + Rational::from_integer(1.into()),
        nbrs.iter().map(|&k| (k, g.weight(j, k) * &two)).collect(),
    )];
    if let Some(&k) = nbrs.first() {
        out.push((r.clone(), vec![(k, Rational::zero())]));
    }
    if let Some(k) = g.vertices().without(j).difference(g.neighbors(j)).first() {
        out.push((r, vec![(k, Rational::from_integer((-1).into()))]));
    }
    out
}

/// Gallai's analogue on the whole graph when it is critical, and on every
/// critical component, which stays critical on its own.
pub fn gallai(g: &RatGraph, roots: &[AlgebraicNumber], report: &mut Report) {
    for theta in roots {
        let ctx = ThetaContext::new(g, theta.clone());
        let tj = Some(algebraic_to_json(theta));
        let dec = match decompose(&ctx) {
            Ok(d) => d,
            Err(e) => {
                report.push_result(laws::GALLAI, tj, json!({}), Err(e));
                continue;
            }
        };
        if g.is_connected() && dec.d == g.vertices() {
            report.push_result(laws::GALLAI, tj.clone(), json!({"component": "whole graph"}), gallai_check(&ctx));
        }
        for comp in &dec.critical_components {
            let sub = g.restrict(*comp);
            let sub_ctx = ThetaContext::new(&sub, theta.clone());
            let params = json!({"component": comp.ids()});
            let verdict = match decompose(&sub_ctx) {
                Ok(d) if d.d == *comp => gallai_check(&sub_ctx),
                Ok(d) => Ok(Verdict::fail(format!("component is not critical on its own: 0 set {:?}", d.d))),
                Err(e) => Err(e),
            };
            report.push_result(laws::GALLAI, tj.clone(), params, verdict);
        }
    }
}

/// Sign counts along a Hamiltonian path at generic points, the plus-count
/// law on that grid, and the path being a 0-path at every root.
pub fn sylvester(g: &RatGraph, roots: &[AlgebraicNumber], report: &mut Report) {
    let Some(c) = g.hamiltonian_path() else {
        report.push(laws::SYLVESTER, None, json!({}), Verdict::not_applicable("no Hamiltonian path"));
        return;
    };
    let path = json!({"path": c.vertices().iter().map(|v| v + 1).collect::<Vec<_>>()});
    let points = match generic_points(g, &c) {
        Ok(p) => p,
        Err(e) => {
            report.push_result(laws::SYLVESTER, None, path, Err(e));
            return;
        }
    };
    for t in &points {
        let tj = Some(algebraic_to_json(&AlgebraicNumber::from_rational(t.clone())));
        report.push_result(laws::SYLVESTER, tj, path.clone(), sylvester_count(g, &c, t).map(|s| s.verdict));
    }
    report.push_result(laws::PLUS_SIGNS, None, path.clone(), plus_sign_monotonicity_check(g, &c, &points));
    for theta in roots {
        let ctx = ThetaContext::new(g, theta.clone());
        let verdict = zero_path_check(&ctx, &c).map(|(is_zero_path, v)| {
            Verdict::all([v, Verdict::ensure(is_zero_path, || format!("{c} is not a 0-path"))])
        });
        report.push_result(laws::HAMILTONIAN_ZERO_PATH, Some(algebraic_to_json(theta)), path.clone(), verdict);
    }
}

/// Path-tree identity at every vertex, sign annotations, and 0-path laws on
/// a bounded number of paths per root.
pub fn pathtree(g: &RatGraph, roots: &[AlgebraicNumber], report: &mut Report) {
    let mut small_roots = Vec::new();
    for i in g.vertices().iter() {
        report.push_result(laws::GODSIL, None, json!({"i": i + 1}), godsil_identity_check(g, i));
        if build_path_tree(g, i).map(|t| t.len() <= SUITE_TREE_NODES).unwrap_or(false) {
            small_roots.push(i);
        }
    }
    let paths: Vec<VertexPath> =
        pairs(g).into_iter().flat_map(|(i, j)| g.enumerate_paths(i, j)).take(SUITE_PATHS_PER_THETA).collect();
    for theta in roots {
        let ctx = ThetaContext::new(g, theta.clone());
        let tj = Some(algebraic_to_json(theta));
        for &i in &small_roots {
            report.push_result(laws::TREE_SIGNS, tj.clone(), json!({"i": i + 1}), sign_annotation_check(&ctx, i));
        }
        for c in &paths {
            let params = json!({"path": c.vertices().iter().map(|v| v + 1).collect::<Vec<_>>()});
            report.push_result(laws::ZERO_PATH, tj.clone(), params.clone(), zero_path_check(&ctx, c).map(|(_, v)| v));
            report.push_result(laws::PATH_DIFFERENCE, tj.clone(), params, path_difference_check(&ctx, c));
        }
    }
}

/// Extreme zeros, star bounds, and halving or removing each edge.
pub fn bounds(g: &RatGraph, report: &mut Report) {
    report.push_result(laws::EXTREME_ZERO, None, json!({}), extreme_zero_check(g));
    report.push_result(laws::STAR_BOUNDS, None, json!({}), star_bounds_check(g).map(|(_, v)| v));
    let half = Rational::new(1.into(), 2.into());
    let edges: Vec<(usize, usize, Rational)> = g.edges().map(|(u, v, w)| (u, v, w.clone())).collect();
    for (u, v, w) in edges {
        for new in [&w * &half, Rational::zero()] {
            let params = json!({"i": u + 1, "j": v + 1, "lambda_new": crate::exact::format_rational(&new)});
            report.push_result(laws::EDGE_MONOTONICITY, None, params, edge_monotonicity_check(g, u, v, &new));
        }
    }
}

fn classical(g: &RatGraph, report: &mut Report) {
    if !g.is_unit() {
        let na = Verdict::not_applicable("classical structure needs unit weights");
        report.push(laws::GE_STRUCTURE, None, json!({}), na.clone());
        report.push(laws::CROSSCHECK_ZERO, None, json!({}), na);
        return;
    }
    report.push_result(laws::GE_STRUCTURE, None, json!({}), ge_structure_check(g));
    report.push_result(laws::CROSSCHECK_ZERO, None, json!({}), crosscheck_theta_zero(g));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn theta_specs() {
        let g: RatGraph = star(3);
        assert_eq!(parse_theta_spec(&g, "root:2").unwrap().cmp_rational(&Rational::zero()), std::cmp::Ordering::Equal);
        assert!(parse_theta_spec(&g, "root:4").is_err());
        assert!(parse_theta_spec(&g, "root:0").is_err());
        assert!(parse_theta_spec(&g, "rat:1/2").is_ok());
        assert!(parse_theta_spec(&g, "1/2").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EVERY {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn all_suites_pass_on_small_graphs() {
        for g in [star::<Rational>(3), path(3), complete(3), cycle(5), cycle(4)] {
            let r = run_suite(&g, Suite::All, None).unwrap();
            assert!(r.passed(), "{}", r.render_text());
            assert!(r.summary.passed > 0);
        }
    }

    #[test]
    fn generic_points_avoid_degeneracy() {
        let g: RatGraph = path(3);
        let c = g.hamiltonian_path().unwrap();
        let pts = generic_points(&g, &c).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|t| !t.is_zero()));
    }
}
