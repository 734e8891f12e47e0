//! Brute-force ground truth: matchings by enumeration and the classical
//! Gallai-Edmonds structure.
//!
//! Naming follows the convention where `D` is the set of vertices that some
//! maximum matching leaves uncovered. Much of the matching literature calls
//! these vertices inessential; here they are the essential ones.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::classify::{decompose, ThetaContext};
use crate::error::{Error, Result};
use crate::exact::AlgebraicNumber;
use crate::graph::{VertexSet, WeightedGraph};
use crate::scalar::Scalar;
use crate::verdict::Verdict;
use crate::{RatGraph, Rational};

pub const MAX_ENUMERATION_VERTICES: usize = 16;
pub const MAX_DECOMPOSITION_VERTICES: usize = 14;
pub const MAX_STRUCTURE_VERTICES: usize = 12;

/// A set of pairwise disjoint edges, each stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
    covered: VertexSet,
}

impl Matching {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self) -> VertexSet {
        self.covered
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.edges.iter().find_map(|&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::Guard(format!("{what} needs at most {limit} vertices, got {n}")));
    }
    Ok(())
}

/// All matchings of the live graph, the empty one first. The lowest open
/// vertex is left uncovered before it is matched to each neighbour in
/// increasing order.
pub fn enumerate_matchings<T: Scalar>(g: &WeightedGraph<T>) -> Result<Vec<Matching>> {
    guard(g.order(), MAX_ENUMERATION_VERTICES, "matching enumeration")?;
    let mut out = Vec::new();
    let mut current = Matching::default();
    extend(g, g.vertices(), &mut current, &mut out);
    Ok(out)
}

fn extend<T: Scalar>(g: &WeightedGraph<T>, open: VertexSet, cur: &mut Matching, out: &mut Vec<Matching>) {
    let Some(v) = open.first() else {
        let mut m = cur.clone();
        m.edges.sort_unstable();
        out.push(m);
        return;
    };
    let rest = open.without(v);
    extend(g, rest, cur, out);
    for u in g.neighbors(v).intersection(rest).iter() {
        cur.edges.push((v, u));
        cur.covered = cur.covered.with(v).with(u);
        extend(g, rest.without(u), cur, out);
        cur.edges.pop();
        cur.covered = cur.covered.without(v).without(u);
    }
}

/// Maximum matching sizes of induced subgraphs, memoized by subset.
struct MatchingNumbers<'g, T> {
    g: &'g WeightedGraph<T>,
    memo: HashMap<u64, usize>,
}

impl<'g, T: Scalar> MatchingNumbers<'g, T> {
    fn new(g: &'g WeightedGraph<T>) -> Self {
        MatchingNumbers { g, memo: HashMap::new() }
    }

    fn nu(&mut self, s: VertexSet) -> usize {
        let Some(v) = s.first() else { return 0 };
        if let Some(&k) = self.memo.get(&s.bits()) {
            return k;
        }
        let rest = s.without(v);
        let mut best = self.nu(rest);
        for u in self.g.neighbors(v).intersection(rest).iter() {
            best = best.max(1 + self.nu(rest.without(u)));
        }
        self.memo.insert(s.bits(), best);
        best
    }
}

/// Size of a maximum matching of the live graph.
pub fn matching_number<T: Scalar>(g: &WeightedGraph<T>) -> usize {
    MatchingNumbers::new(g).nu(g.vertices())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalDecomposition {
    /// Vertices left uncovered by some maximum matching.
    pub d: VertexSet,
    pub a: VertexSet,
    pub c: VertexSet,
    pub d_components: Vec<VertexSet>,
    pub matching_number: usize,
    /// Vertices uncovered by a maximum matching.
    pub deficiency: usize,
}

pub fn classical_decomposition<T: Scalar>(g: &WeightedGraph<T>) -> Result<ClassicalDecomposition> {
    guard(g.order(), MAX_DECOMPOSITION_VERTICES, "classical decomposition")?;
    let mut nums = MatchingNumbers::new(g);
    let all = g.vertices();
    let nu = nums.nu(all);
    let d: VertexSet = all.iter().filter(|&v| nums.nu(all.without(v)) == nu).collect();
    let a = g.frontier(d);
    let c = all.difference(d).difference(a);
    Ok(ClassicalDecomposition {
        d,
        a,
        c,
        d_components: g.components(d),
        matching_number: nu,
        deficiency: g.order() - 2 * nu,
    })
}

/// Gallai-Edmonds structure items (a)-(e) and Gallai's lemma, all by
/// enumeration.
pub fn ge_structure_check<T: Scalar>(g: &WeightedGraph<T>) -> Result<Verdict> {
    guard(g.order(), MAX_STRUCTURE_VERTICES, "structure check")?;
    let cd = classical_decomposition(g)?;
    let mut nums = MatchingNumbers::new(g);
    let mut vs = Vec::new();

    // (a) every D-component is factor-critical
    for h in &cd.d_components {
        for v in h.iter() {
            let rest = h.without(v);
            let ok = rest.len() % 2 == 0 && 2 * nums.nu(rest) == rest.len();
            vs.push(Verdict::ensure(ok, || {
                format!("(a) component {:?} minus {} has no perfect matching", h, v + 1)
            }));
        }
    }
    // (b) C has a perfect matching
    let c_ok = cd.c.len() % 2 == 0 && 2 * nums.nu(cd.c) == cd.c.len();
    vs.push(Verdict::ensure(c_ok, || format!("(b) C = {:?} has no perfect matching", cd.c)));

    // (c) every non-empty S ⊆ A touches at least |S|+1 components of D
    let a_list: Vec<usize> = cd.a.iter().collect();
    for mask in 1u64..(1u64 << a_list.len()) {
        let s: VertexSet = a_list.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect();
        let touched = touched_components(g, &cd.d_components, s);
        vs.push(Verdict::ensure(touched > s.len(), || {
            format!("(c) S = {:?} touches {touched} components of D", s)
        }));
    }

    // (d) shape of every maximum matching
    let maximum: Vec<Matching> =
        enumerate_matchings(g)?.into_iter().filter(|m| m.len() == cd.matching_number).collect();
    for m in &maximum {
        for h in &cd.d_components {
            let inside = m.edges().iter().filter(|&&(u, v)| h.contains(u) && h.contains(v)).count();
            vs.push(Verdict::ensure(2 * inside + 1 == h.len(), || {
                format!("(d) {m} is not near-perfect on component {:?}", h)
            }));
        }
        let inside_c = m.edges().iter().filter(|&&(u, v)| cd.c.contains(u) && cd.c.contains(v)).count();
        vs.push(Verdict::ensure(2 * inside_c == cd.c.len(), || format!("(d) {m} is not perfect on C")));
        let mut used = Vec::new();
        for a in cd.a.iter() {
            let target = m.partner(a).and_then(|p| cd.d_components.iter().position(|h| h.contains(p)));
            match target {
                Some(k) if !used.contains(&k) => used.push(k),
                _ => vs.push(Verdict::fail(format!(
                    "(d) {m} does not match {} into its own component of D",
                    a + 1
                ))),
            }
        }
    }

    // (e) deficiency identity
    let rhs = cd.d_components.len() as i64 - cd.a.len() as i64;
    vs.push(Verdict::ensure(cd.deficiency as i64 == rhs, || {
        format!("(e) def = {} but c(D) - |A| = {rhs}", cd.deficiency)
    }));

    // Gallai's lemma on connected factor-critical pieces: each maximum
    // matching leaves exactly one vertex uncovered
    let mut pieces = cd.d_components.clone();
    if g.is_connected() && cd.d == g.vertices() && g.order() > 0 {
        pieces.push(g.vertices());
    }
    for h in pieces {
        let sub = g.restrict(h);
        let nu = matching_number(&sub);
        for m in enumerate_matchings(&sub)?.into_iter().filter(|m| m.len() == nu) {
            let uncovered = h.difference(m.covered()).len();
            vs.push(Verdict::ensure(uncovered == 1, || {
                format!("Gallai: {m} leaves {uncovered} vertices of {:?} uncovered", h)
            }));
        }
    }
    Ok(Verdict::all(vs))
}

/// Number of components in `components` with a vertex adjacent to `s`.
pub fn touched_components<T: Scalar>(g: &WeightedGraph<T>, components: &[VertexSet], s: VertexSet) -> usize {
    let reach = s.iter().fold(VertexSet::empty(), |acc, v| acc.union(g.neighbors(v)));
    components.iter().filter(|h| !h.intersection(reach).is_empty()).count()
}

/// At `θ = 0` with unit weights the root-based decomposition coincides with
/// the classical one and `m_0` is the deficiency.
pub fn crosscheck_theta_zero(g: &RatGraph) -> Result<Verdict> {
    if !g.is_unit() {
        return Err(Error::Precondition("cross-check at 0 needs unit weights".into()));
    }
    guard(g.order(), MAX_STRUCTURE_VERTICES, "cross-check at 0")?;
    let cd = classical_decomposition(g)?;
    let zero = AlgebraicNumber::from_rational(Rational::from_integer(0.into()));
    let ctx = ThetaContext::new(g, zero);
    let dec = decompose(&ctx)?;
    let n_and_p = dec.n_minus.union(dec.n_plus).union(dec.p);
    Ok(Verdict::all([
        Verdict::ensure(dec.d == cd.d, || format!("D: {:?} vs classical {:?}", dec.d, cd.d)),
        Verdict::ensure(dec.a == cd.a, || format!("A: {:?} vs classical {:?}", dec.a, cd.a)),
        Verdict::ensure(n_and_p == cd.c, || format!("N and P: {:?} vs classical C {:?}", n_and_p, cd.c)),
        Verdict::ensure(dec.m == cd.deficiency, || format!("m_0 = {} but deficiency = {}", dec.m, cd.deficiency)),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn enumeration_examples() {
        let k2 = enumerate_matchings(&complete::<Rational>(2)).unwrap();
        assert_eq!(k2.len(), 2);
        assert!(k2[0].is_empty());
        assert_eq!(k2[1].edges(), &[(0, 1)]);
        assert_eq!(enumerate_matchings(&complete::<Rational>(3)).unwrap().len(), 4);
        assert_eq!(enumerate_matchings(&edgeless::<Rational>(4)).unwrap().len(), 1);
        assert!(enumerate_matchings(&edgeless::<Rational>(17)).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let cd = classical_decomposition(&star::<Rational>(3)).unwrap();
        assert_eq!(cd.d, [1, 2, 3].into_iter().collect());
        assert_eq!(cd.a, VertexSet::singleton(0));
        assert!(cd.c.is_empty());
        assert_eq!(cd.deficiency, 2);

        let cd = classical_decomposition(&complete::<Rational>(2)).unwrap();
        assert!(cd.d.is_empty() && cd.a.is_empty());
        assert_eq!(cd.c, VertexSet::full(2));
        assert_eq!(cd.deficiency, 0);

        let cd = classical_decomposition(&complete::<Rational>(3)).unwrap();
        assert_eq!(cd.d, VertexSet::full(3));
        assert_eq!(cd.deficiency, 1);
    }

    #[test]
    fn structure_examples() {
        for g in [star::<Rational>(3), cycle(5), cycle(4), path(5), complete(4)] {
            assert!(ge_structure_check(&g).unwrap().is_pass(), "{g:?}");
        }
    }

    #[test]
    fn crosscheck_examples() {
        for g in [star::<Rational>(3), cycle(5), cycle(4)] {
            assert!(crosscheck_theta_zero(&g).unwrap().is_pass());
        }
        let weighted = complete::<Rational>(2).with_edge_weight(0, 1, Rational::from_integer((-2).into())).unwrap();
        assert!(crosscheck_theta_zero(&weighted).is_err());
    }
}
