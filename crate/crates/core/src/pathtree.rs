//! Rooted path trees, the identity tying their continued fraction to the
//! graph's, sign annotations, 0-paths, and sign counts along Hamiltonian
//! paths.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::classify::{SignClass, ThetaContext};
use crate::error::{Error, Result};
use crate::exact::{gcd, sign};
use crate::graph::{VertexPath, VertexSet};
use crate::matchpoly::{roots_with_multiplicity, MatchingTable};
use crate::verdict::Verdict;
use crate::{RatGraph, RatPoly, Rational};

pub const MAX_TREE_NODES: usize = 100_000;

/// Trees up to this many nodes get their matching polynomials expanded in
/// full; larger ones are compared through reduced continued fractions.
pub const LITERAL_TREE_NODES: usize = 160;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathNode {
    /// Last vertex of the path.
    pub vertex: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
    /// Vertices of the path.
    pub visited: VertexSet,
}

/// The tree of simple paths of a graph starting at one vertex, a path's
/// parent being the path with its last vertex removed. Node `0` is the
/// trivial path; nodes are stored in depth-first order with children in
/// increasing vertex order.
#[derive(Clone, Debug)]
pub struct PathTree {
    nodes: Vec<PathNode>,
}

pub fn build_path_tree(g: &RatGraph, i: usize) -> Result<PathTree> {
    if !g.vertices().contains(i) {
        return Err(Error::Precondition(format!("vertex {} is not in the graph", i + 1)));
    }
    let mut nodes = vec![PathNode {
        vertex: i,
        parent: None,
        children: Vec::new(),
        depth: 0,
        visited: VertexSet::singleton(i),
    }];
    grow(g, 0, &mut nodes)?;
    Ok(PathTree { nodes })
}

fn grow(g: &RatGraph, at: usize, nodes: &mut Vec<PathNode>) -> Result<()> {
    let (v, visited, depth) = (nodes[at].vertex, nodes[at].visited, nodes[at].depth);
    for w in g.neighbors(v).difference(visited).iter() {
        if nodes.len() >= MAX_TREE_NODES {
            return Err(Error::Guard(format!("path tree exceeds {MAX_TREE_NODES} nodes")));
        }
        let id = nodes.len();
        nodes.push(PathNode { vertex: w, parent: Some(at), children: Vec::new(), depth: depth + 1, visited: visited.with(w) });
        nodes[at].children.push(id);
        grow(g, id, nodes)?;
    }
    Ok(())
}

impl PathTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[PathNode] {
        &self.nodes
    }

    pub fn root_vertex(&self) -> usize {
        self.nodes[0].vertex
    }

    /// Vertices of the path labelling `node`, from the root.
    pub fn path(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[node].depth + 1);
        let mut cur = Some(node);
        while let Some(k) = cur {
            out.push(self.nodes[k].vertex);
            cur = self.nodes[k].parent;
        }
        out.reverse();
        out
    }

    /// Path of `node` as `1-2-3` with 1-based ids.
    pub fn label(&self, node: usize) -> String {
        self.path(node).iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join("-")
    }

    /// One node per line, two spaces of indentation per level.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "{}{}", "  ".repeat(n.depth), self.label(k));
        }
        out
    }

    pub fn render_json(&self) -> Value {
        self.node_json(0)
    }

    fn node_json(&self, node: usize) -> Value {
        json!({
            "path": self.path(node).iter().map(|v| v + 1).collect::<Vec<_>>(),
            "children": self.nodes[node].children.iter().map(|&c| self.node_json(c)).collect::<Vec<_>>(),
        })
    }

    /// `(μ(T_v), μ(T_v \ v))` for the subtree at `node`, expanded exactly.
    pub fn subtree_polynomials(&self, g: &RatGraph, node: usize) -> (RatPoly, RatPoly) {
        self.subtree_polynomials_memo(g, node, &mut HashMap::new())
    }

    fn subtree_polynomials_memo(
        &self,
        g: &RatGraph,
        node: usize,
        memo: &mut HashMap<(VertexSet, usize), (RatPoly, RatPoly)>,
    ) -> (RatPoly, RatPoly) {
        let n = &self.nodes[node];
        let key = (n.visited, n.vertex);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let kids: Vec<(RatPoly, RatPoly)> =
            n.children.iter().map(|&c| self.subtree_polynomials_memo(g, c, memo)).collect();
        let without = kids.iter().fold(RatPoly::one(), |acc, (a, _)| &acc * a);
        let mut with = &RatPoly::linear(g.offset(n.vertex).clone()) * &without;
        for (k, &c) in n.children.iter().enumerate() {
            let others = kids.iter().enumerate().filter(|&(m, _)| m != k).fold(RatPoly::one(), |acc, (_, (a, _))| &acc * a);
            let term = (&kids[k].1 * &others).scale(g.weight(n.vertex, self.nodes[c].vertex));
            with = &with + &term;
        }
        memo.insert(key, (with.clone(), without.clone()));
        (with, without)
    }

    /// Continued fraction at `node` of its subtree as a reduced fraction
    /// `(num, den)`, built bottom-up as `x - r_v + Σ_c λ_vc / α_c`.
    pub fn reduced_alpha(&self, g: &RatGraph, node: usize) -> (RatPoly, RatPoly) {
        self.reduced_alpha_memo(g, node, &mut HashMap::new())
    }

    /// The subtree at a node depends only on its vertex and visited set.
    fn reduced_alpha_memo(
        &self,
        g: &RatGraph,
        node: usize,
        memo: &mut HashMap<(VertexSet, usize), (RatPoly, RatPoly)>,
    ) -> (RatPoly, RatPoly) {
        let n = &self.nodes[node];
        let key = (n.visited, n.vertex);
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let mut num = RatPoly::linear(g.offset(n.vertex).clone());
        let mut den = RatPoly::one();
        for &c in &n.children {
            let (cn, cd) = self.reduced_alpha_memo(g, c, memo);
            let lam = g.weight(n.vertex, self.nodes[c].vertex);
            num = &(&num * &cn) + &(&cd * &den).scale(lam);
            den = &den * &cn;
            let common = gcd(&num, &den).expect("denominator is non-zero");
            if !common.is_constant() {
                num = num.exact_div(&common);
                den = den.exact_div(&common);
            }
        }
        memo.insert(key, (num.clone(), den.clone()));
        (num, den)
    }
}

/// `μ(G) μ(T \ root) = μ(G \ i) μ(T)` for `T` the path tree at `i`. Large
/// trees compare `α_root(T)` and `α_i(G)` as reduced fractions instead of
/// expanding `μ(T)`.
pub fn godsil_identity_check(g: &RatGraph, i: usize) -> Result<Verdict> {
    let tree = build_path_tree(g, i)?;
    if tree.len() <= LITERAL_TREE_NODES {
        godsil_literal(g, &tree, i)
    } else {
        godsil_reduced(g, &tree, i)
    }
}

fn godsil_literal(g: &RatGraph, tree: &PathTree, i: usize) -> Result<Verdict> {
    let table = MatchingTable::new(g);
    let (mu_t, mu_t_root) = tree.subtree_polynomials(g, 0);
    let lhs = &*table.mu_without(VertexSet::empty()) * &mu_t_root;
    let rhs = &*table.mu_without(VertexSet::singleton(i)) * &mu_t;
    Ok(Verdict::ensure(lhs == rhs, || format!("tree identity fails at root {}: {lhs} vs {rhs}", i + 1)))
}

pub fn godsil_reduced(g: &RatGraph, tree: &PathTree, i: usize) -> Result<Verdict> {
    let table = MatchingTable::new(g);
    let (num, den) = tree.reduced_alpha(g, 0);
    let lhs = &num * &*table.mu_without(VertexSet::singleton(i));
    let rhs = &den * &*table.mu_without(VertexSet::empty());
    Ok(Verdict::ensure(lhs == rhs, || format!("tree continued fraction differs at root {}", i + 1)))
}

pub fn godsil_literal_check(g: &RatGraph, i: usize) -> Result<Verdict> {
    let tree = build_path_tree(g, i)?;
    godsil_literal(g, &tree, i)
}

/// Class of every node of a path tree at `θ`: the node for `i_1 … i_k`
/// carries the class of `α_{i_k}(G \ i_1 … i_{k-1})`.
#[derive(Clone, Debug)]
pub struct SignAnnotation {
    pub tree: PathTree,
    pub classes: Vec<SignClass>,
}

pub fn annotate_signs(ctx: &ThetaContext<'_>, i: usize) -> Result<SignAnnotation> {
    let tree = build_path_tree(ctx.graph(), i)?;
    let all = ctx.all();
    let classes = tree
        .nodes()
        .iter()
        .map(|n| ctx.class_in(all.difference(n.visited.without(n.vertex)), n.vertex))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignAnnotation { tree, classes })
}

impl SignAnnotation {
    /// A `0` node always sits directly below an `inf` node.
    pub fn structure_verdict(&self) -> Verdict {
        Verdict::all(self.tree.nodes().iter().enumerate().filter_map(|(k, n)| {
            let parent = n.parent?;
            (self.classes[k] == SignClass::Zero).then(|| {
                Verdict::ensure(self.classes[parent] == SignClass::Inf, || {
                    format!("node {} is 0 under a {} node", self.label(k), self.classes[parent])
                })
            })
        }))
    }

    fn label(&self, node: usize) -> String {
        self.tree.label(node)
    }

    /// One node per line, two spaces of indentation per level.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, n) in self.tree.nodes().iter().enumerate() {
            let _ = writeln!(out, "{}{} {}", "  ".repeat(n.depth), self.label(k), self.classes[k]);
        }
        out
    }

    pub fn render_json(&self) -> Value {
        self.node_json(0)
    }

    fn node_json(&self, node: usize) -> Value {
        json!({
            "path": self.tree.path(node).iter().map(|v| v + 1).collect::<Vec<_>>(),
            "class": self.classes[node].name(),
            "children": self.tree.nodes()[node].children.iter().map(|&c| self.node_json(c)).collect::<Vec<_>>(),
        })
    }
}

pub fn sign_annotation_check(ctx: &ThetaContext<'_>, i: usize) -> Result<Verdict> {
    Ok(annotate_signs(ctx, i)?.structure_verdict())
}

/// `m_θ(G) - m_θ(G\c)`.
pub fn path_multiplicity_drop(ctx: &ThetaContext<'_>, c: &VertexPath) -> i64 {
    ctx.multiplicity(ctx.all()) as i64 - ctx.multiplicity(ctx.all().difference(c.as_set())) as i64
}

/// Whether `c` is a 0-path at `θ`, with a verdict on the drop being at most
/// one and, for 0-paths, on both endpoints being of class `0`.
pub fn zero_path_check(ctx: &ThetaContext<'_>, c: &VertexPath) -> Result<(bool, Verdict)> {
    let drop = path_multiplicity_drop(ctx, c);
    let is_zero_path = drop == 1;
    let mut vs = vec![Verdict::ensure(drop <= 1, || format!("path {c} lowers the multiplicity by {drop}"))];
    if is_zero_path {
        for v in [c.first(), c.last()] {
            let cls = ctx.class(v)?;
            vs.push(Verdict::ensure(cls == SignClass::Zero, || {
                format!("0-path {c} has endpoint {} of class {cls}", v + 1)
            }));
        }
    }
    Ok((is_zero_path, Verdict::all(vs)))
}

/// `#0 - #inf` over the nodes of `c` in the path tree at its first vertex.
pub fn zeros_minus_infinities(ctx: &ThetaContext<'_>, c: &VertexPath) -> Result<i64> {
    let mut remaining = ctx.all();
    let mut total = 0;
    for &v in c.vertices() {
        total += match ctx.class_in(remaining, v)? {
            SignClass::Zero => 1,
            SignClass::Inf => -1,
            _ => 0,
        };
        remaining = remaining.without(v);
    }
    Ok(total)
}

/// Along `c` and along its reverse, the number of `0` nodes minus the number
/// of `inf` nodes both equal `m_θ(G) - m_θ(G\c)`.
pub fn path_difference_check(ctx: &ThetaContext<'_>, c: &VertexPath) -> Result<Verdict> {
    let forward = zeros_minus_infinities(ctx, c)?;
    let backward = zeros_minus_infinities(ctx, &c.reversed())?;
    let drop = path_multiplicity_drop(ctx, c);
    Ok(Verdict::ensure(forward == drop && backward == drop, || {
        format!("path {c}: forward {forward}, reverse {backward}, multiplicity drop {drop}")
    }))
}

/// Number of positive terms `μ(G\i_1…i_{k-1})(θ) / μ(G\i_1…i_k)(θ)`,
/// `k = 1..len(c)`. Errors when some term is `0` or infinite.
pub fn plus_count(table: &MatchingTable<'_, Rational>, c: &VertexPath, theta: &Rational) -> Result<usize> {
    let all = table.graph().vertices();
    let mut prev_sign = sign(&table.mu(all).eval(theta));
    if prev_sign == 0 {
        return Err(Error::Degenerate(format!("mu(G) vanishes at {theta}")));
    }
    let mut count = 0;
    for k in 1..=c.len() {
        let s = sign(&table.mu(all.difference(c.prefix_set(k))).eval(theta));
        if s == 0 {
            let removed: Vec<String> = c.vertices()[..k].iter().map(|v| (v + 1).to_string()).collect();
            return Err(Error::Degenerate(format!("mu(G \\ {{{}}}) vanishes at {theta}", removed.join(","))));
        }
        if prev_sign * s > 0 {
            count += 1;
        }
        prev_sign = s;
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SylvesterCount {
    pub forward: usize,
    pub reverse: usize,
    pub roots_below: usize,
    pub distinct_roots: usize,
    pub verdict: Verdict,
}

/// Sign counts along a Hamiltonian path and its reverse at a rational `θ`,
/// compared with the number of roots of `μ(G)` below `θ`.
pub fn sylvester_count(g: &RatGraph, c: &VertexPath, theta: &Rational) -> Result<SylvesterCount> {
    if c.len() != g.order() || c.as_set() != g.vertices() {
        return Err(Error::Precondition(format!("path {c} is not Hamiltonian")));
    }
    let table = MatchingTable::new(g);
    let forward = plus_count(&table, c, theta)?;
    let reverse = plus_count(&table, &c.reversed(), theta)?;
    let roots = roots_with_multiplicity(g)?;
    let roots_below =
        roots.iter().filter(|(t, _)| t.cmp_rational(theta) == std::cmp::Ordering::Less).map(|(_, m)| m).sum();
    let distinct_roots = roots.len();
    let verdict = Verdict::all([
        Verdict::ensure(forward == roots_below && reverse == roots_below, || {
            format!("counts {forward} / {reverse} but {roots_below} roots below {theta}")
        }),
        Verdict::ensure(distinct_roots == g.order(), || {
            format!("{distinct_roots} distinct roots for {} vertices", g.order())
        }),
    ]);
    Ok(SylvesterCount { forward, reverse, roots_below, distinct_roots, verdict })
}

/// At every grid point the plus count along `c` equals the number of roots
/// of `μ(G)` below it minus those of `μ(G\c)`. Between consecutive points
/// each root contributes `m_x(G) - m_x(G\c) ≤ 1`, which is `1` exactly when
/// `c` is a 0-path there; for Hamiltonian `c` the count never decreases.
pub fn plus_sign_monotonicity_check(g: &RatGraph, c: &VertexPath, grid: &[Rational]) -> Result<Verdict> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be strictly increasing".into()));
    }
    let table = MatchingTable::new(g);
    let all = g.vertices();
    let rest = all.difference(c.as_set());
    let mu = table.mu(all);
    let mu_c = table.mu(rest);
    let counts = grid.iter().map(|t| plus_count(&table, c, t)).collect::<Result<Vec<_>>>()?;
    let roots = roots_with_multiplicity(g)?;
    let mut vs = vec![Verdict::Pass];
    for (t, &k) in grid.iter().zip(&counts) {
        let expected = count_below(&mu, t) as i64 - count_below(&mu_c, t) as i64;
        vs.push(Verdict::ensure(k as i64 == expected, || {
            format!("at {t}: {k} plus signs, expected {expected}")
        }));
    }
    let hamiltonian = rest.is_empty();
    for (w, kw) in grid.windows(2).zip(counts.windows(2)) {
        for (x, m) in &roots {
            let inside = x.cmp_rational(&w[0]).is_gt() && x.cmp_rational(&w[1]).is_lt();
            if !inside {
                continue;
            }
            let jump = *m as i64 - x.multiplicity_at(&mu_c) as i64;
            vs.push(Verdict::ensure(jump <= 1, || format!("root {x}: multiplicity drops by {jump} along {c}")));
        }
        if hamiltonian {
            vs.push(Verdict::ensure(kw[1] >= kw[0], || {
                format!("plus count falls from {} to {} between {} and {}", kw[0], kw[1], w[0], w[1])
            }));
        }
    }
    Ok(Verdict::all(vs))
}

/// Roots of `p` below `t`, with multiplicity.
fn count_below(p: &RatPoly, t: &Rational) -> usize {
    let lo = -(crate::exact::cauchy_bound(p) + Rational::one());
    let mut total = 0;
    let mut rest = p.clone();
    // p = s_1 s_2 ... with each s_k squarefree; count each layer once
    while !rest.is_constant() {
        let s = crate::exact::squarefree_part(&rest).expect("non-zero");
        let mut layer = s.clone();
        if layer.eval(t).is_zero() {
            layer = layer.exact_div(&RatPoly::linear(t.clone()));
        }
        if !layer.is_constant() && &lo < t {
            total += crate::exact::SturmChain::new(&layer).expect("non-zero").count(&lo, t);
        }
        rest = rest.exact_div(&s);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::AlgebraicNumber;
    use crate::graph::named::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn tree_sizes() {
        assert_eq!(build_path_tree(&path(3), 0).unwrap().len(), 3);
        assert_eq!(build_path_tree(&complete(3), 0).unwrap().len(), 5);
        assert_eq!(build_path_tree(&cycle(4), 0).unwrap().len(), 7);
        assert_eq!(build_path_tree(&edgeless(1), 0).unwrap().len(), 1);
        let t = build_path_tree(&complete(3), 0).unwrap();
        assert_eq!(t.path(2), vec![0, 1, 2]);
    }

    #[test]
    fn godsil_examples() {
        assert!(godsil_identity_check(&complete(3), 0).unwrap().is_pass());
        assert!(godsil_identity_check(&cycle(4), 0).unwrap().is_pass());
        assert!(godsil_identity_check(&path(4), 1).unwrap().is_pass());
        let g: RatGraph = complete(5);
        let tree = build_path_tree(&g, 0).unwrap();
        assert!(godsil_reduced(&g, &tree, 0).unwrap().is_pass());
        assert!(godsil_literal(&g, &tree, 0).unwrap().is_pass());
    }

    #[test]
    fn annotation_on_p3() {
        let g = path(3);
        let ctx = ThetaContext::new(&g, AlgebraicNumber::from_rational(q(0, 1)));
        let ann = annotate_signs(&ctx, 0).unwrap();
        assert_eq!(ann.classes, vec![SignClass::Zero, SignClass::Inf, SignClass::Zero]);
        assert!(ann.structure_verdict().is_pass());
        assert_eq!(ann.render_text(), "1 0\n  1-2 inf\n    1-2-3 0\n");
        assert_eq!(ann.render_json()["children"][0]["path"], json!([1, 2]));

        let ctx = ThetaContext::new(&g, AlgebraicNumber::from_rational(q(-10, 1)));
        assert!(annotate_signs(&ctx, 0).unwrap().classes.iter().all(|&c| c == SignClass::Neg));
        let ctx = ThetaContext::new(&g, AlgebraicNumber::from_rational(q(10, 1)));
        assert!(annotate_signs(&ctx, 0).unwrap().classes.iter().all(|&c| c == SignClass::Pos));
    }

    #[test]
    fn zero_paths_on_p3() {
        let g = path(3);
        let ctx = ThetaContext::new(&g, AlgebraicNumber::from_rational(q(0, 1)));
        let full = VertexPath::new(&g, vec![0, 1, 2]).unwrap();
        let (is, v) = zero_path_check(&ctx, &full).unwrap();
        assert!(is && v.is_pass());
        let mid = VertexPath::new(&g, vec![1]).unwrap();
        let (is, v) = zero_path_check(&ctx, &mid).unwrap();
        assert!(!is && v.is_pass());
        assert!(path_difference_check(&ctx, &full).unwrap().is_pass());
    }

    #[test]
    fn sylvester_on_p3() {
        let g = path(3);
        let c = VertexPath::new(&g, vec![0, 1, 2]).unwrap();
        let s = sylvester_count(&g, &c, &q(6, 5)).unwrap();
        assert_eq!((s.forward, s.reverse, s.roots_below), (2, 2, 2));
        assert!(s.verdict.is_pass());
        assert_eq!(sylvester_count(&g, &c, &q(-5, 1)).unwrap().forward, 0);
        assert_eq!(sylvester_count(&g, &c, &q(5, 1)).unwrap().forward, 3);
        assert!(matches!(sylvester_count(&g, &c, &q(0, 1)), Err(Error::Degenerate(_))));
        let short = VertexPath::new(&g, vec![0, 1]).unwrap();
        assert!(sylvester_count(&g, &short, &q(1, 1)).is_err());
    }

    #[test]
    fn plus_sign_counts_on_p3() {
        let g = path(3);
        let grid = [q(-2, 1), q(-1, 2), q(1, 2), q(2, 1)];
        let full = VertexPath::new(&g, vec![0, 1, 2]).unwrap();
        let table = MatchingTable::new(&g);
        let counts: Vec<usize> = grid.iter().map(|t| plus_count(&table, &full, t).unwrap()).collect();
        assert_eq!(counts, vec![0, 1, 2, 3]);
        assert!(plus_sign_monotonicity_check(&g, &full, &grid).unwrap().is_pass());
        let single = VertexPath::new(&g, vec![0]).unwrap();
        assert!(plus_sign_monotonicity_check(&g, &single, &grid).unwrap().is_pass());
        assert!(plus_sign_monotonicity_check(&g, &full, &[]).unwrap().is_pass());
    }

    #[test]
    fn counting_roots_below() {
        let p = RatPoly::from_ints(&[0, 0, -2, 0, 1]); // x^2 (x^2 - 2)
        assert_eq!(count_below(&p, &q(0, 1)), 1);
        assert_eq!(count_below(&p, &q(1, 1)), 3);
        assert_eq!(count_below(&p, &q(2, 1)), 4);
    }
}
