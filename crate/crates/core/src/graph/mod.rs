//! Weighted graphs on a fixed vertex universe.
//!
//! Vertices are `0..n` internally and `1..=n` in every text format. Deleting
//! vertices keeps the universe and the weights, only the set of live vertices
//! shrinks, so classes computed in a subgraph line up with the parent graph.

mod json;

pub use json::{parse_graph, to_json, to_json_string};

use std::fmt;


use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_VERTICES: usize = 64;

/// Subset of a graph's vertex universe as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    /// Members as 1-based ids.
    pub fn ids(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::empty(), VertexSet::with)
    }
}

/// Serialized as the sorted list of 1-based ids.
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.ids())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

/// Simple path, as a sequence of distinct vertices with consecutive ones
/// adjacent. A single vertex is the trivial path.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPath(Vec<usize>);

impl VertexPath {
    pub fn new<T: Scalar>(g: &WeightedGraph<T>, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition("a path needs at least one vertex".into()));
        }
        let mut seen = VertexSet::empty();
        for (k, &v) in vertices.iter().enumerate() {
            if !g.vertices().contains(v) {
                return Err(Error::Precondition(format!("vertex {} is not in the graph", v + 1)));
            }
            if seen.contains(v) {
                return Err(Error::Precondition(format!("vertex {} repeats in the path", v + 1)));
            }
            seen = seen.with(v);
            if k > 0 && !g.adjacent(vertices[k - 1], v) {
                return Err(Error::Precondition(format!(
                    "{} and {} are not adjacent",
                    vertices[k - 1] + 1,
                    v + 1
                )));
            }
        }
        Ok(VertexPath(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("paths are non-empty")
    }

    pub fn reversed(&self) -> Self {
        VertexPath(self.0.iter().rev().copied().collect())
    }

    pub fn as_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// The first `k` vertices.
    pub fn prefix_set(&self, k: usize) -> VertexSet {
        self.0[..k].iter().copied().collect()
    }
}

impl fmt::Debug for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{}", ids.join("-"))
    }
}

impl fmt::Display for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Graph with vertex weights `x - r_i` and edge weights `λ_jk ≤ 0`; a zero
/// edge weight means no edge.
#[derive(Clone, PartialEq)]
pub struct WeightedGraph<T> {
    n: usize,
    offsets: Vec<T>,
    weights: Vec<T>,
    adj: Vec<VertexSet>,
    alive: VertexSet,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Edgeless graph with the given offsets `r_i`.
    pub fn edgeless(offsets: Vec<T>) -> Result<Self> {
        let n = offsets.len();
        if n > MAX_VERTICES {
            return Err(Error::Guard(format!("{n} vertices, at most {MAX_VERTICES} supported")));
        }
        Ok(WeightedGraph {
            n,
            offsets,
            weights: vec![T::zero(); n * n],
            adj: vec![VertexSet::empty(); n],
            alive: VertexSet::full(n),
        })
    }

    pub fn from_edges(offsets: Vec<T>, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut g = Self::edgeless(offsets)?;
        for (u, v, w) in edges {
            if g.adjacent(*u, *v) {
                return Err(Error::Precondition(format!("duplicate edge {}-{}", u + 1, v + 1)));
            }
            g.set_weight(*u, *v, w.clone())?;
        }
        Ok(g)
    }

    /// Offsets 0 and weight -1 on every listed edge.
    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let edges: Vec<_> = edges.iter().map(|&(u, v)| (u, v, -T::one())).collect();
        Self::from_edges(vec![T::zero(); n], &edges)
    }

    fn set_weight(&mut self, u: usize, v: usize, w: T) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Precondition(format!("edge {}-{} out of range", u + 1, v + 1)));
        }
        if u == v {
            return Err(Error::Precondition(format!("self-loop at {}", u + 1)));
        }
        if w.is_positive() {
            return Err(Error::Precondition("edge weight must be non-positive".into()));
        }
        if w.is_zero() {
            self.adj[u] = self.adj[u].without(v);
            self.adj[v] = self.adj[v].without(u);
        } else {
            self.adj[u] = self.adj[u].with(v);
            self.adj[v] = self.adj[v].with(u);
        }
        self.weights[u * self.n + v] = w.clone();
        self.weights[v * self.n + u] = w;
        Ok(())
    }

    /// Copy with one edge weight replaced (0 removes the edge).
    pub fn with_edge_weight(&self, u: usize, v: usize, w: T) -> Result<Self> {
        let mut g = self.clone();
        g.set_weight(u, v, w)?;
        Ok(g)
    }

    /// Copy with the offset of `j` and the weights of the listed edges at `j`
    /// replaced.
    pub fn with_vertex_weights(&self, j: usize, r: T, lambdas: &[(usize, T)]) -> Result<Self> {
        let mut g = self.clone();
        g.offsets[j] = r;
        for (k, w) in lambdas {
            g.set_weight(j, *k, w.clone())?;
        }
        Ok(g)
    }

    /// Size of the vertex universe (live and deleted).
    pub fn universe(&self) -> usize {
        self.n
    }

    /// Live vertices.
    pub fn vertices(&self) -> VertexSet {
        self.alive
    }

    /// Number of live vertices.
    pub fn order(&self) -> usize {
        self.alive.len()
    }

    pub fn offset(&self, v: usize) -> &T {
        &self.offsets[v]
    }

    /// Offsets of the whole universe, deleted vertices included.
    pub fn offsets_vec(&self) -> Vec<T> {
        self.offsets.clone()
    }

    pub fn weight(&self, u: usize, v: usize) -> &T {
        &self.weights[u * self.n + v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.alive.contains(u) && self.alive.contains(v) && self.adj[u].contains(v)
    }

    /// Live neighbours of a vertex.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v].intersection(self.alive)
    }

    /// Neighbours in the full universe, ignoring deletions.
    pub(crate) fn raw_neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// Live edges `(u, v, λ)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.alive.iter().flat_map(move |u| {
            self.neighbors(u).iter().filter(move |&v| v > u).map(move |v| (u, v, self.weight(u, v)))
        })
    }

    /// Induced subgraph on the live vertices outside `s`.
    pub fn delete_vertices(&self, s: VertexSet) -> Self {
        self.restrict(self.alive.difference(s))
    }

    /// Induced subgraph on `keep ∩ live`.
    pub fn restrict(&self, keep: VertexSet) -> Self {
        WeightedGraph { alive: self.alive.intersection(keep), ..self.clone() }
    }

    /// Connected components of the subgraph induced on `within`, ordered by
    /// smallest member.
    pub fn components(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within.intersection(self.alive);
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::empty();
                for v in frontier.iter() {
                    next = next.union(self.adj[v]);
                }
                next = next.intersection(rest).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.alive).len() <= 1
    }

    /// Live vertices outside `s` with a neighbour in `s`.
    pub fn frontier(&self, s: VertexSet) -> VertexSet {
        let s = s.intersection(self.alive);
        let mut out = VertexSet::empty();
        for v in s.iter() {
            out = out.union(self.adj[v]);
        }
        out.intersection(self.alive).difference(s)
    }

    /// All simple paths from `i` to `j` in lexicographic order.
    pub fn enumerate_paths(&self, i: usize, j: usize) -> Vec<VertexPath> {
        let mut out = Vec::new();
        if i == j || !self.alive.contains(i) || !self.alive.contains(j) {
            return out;
        }
        let mut stack = vec![i];
        self.paths_dfs(j, &mut stack, VertexSet::singleton(i), &mut out);
        out
    }

    fn paths_dfs(&self, target: usize, stack: &mut Vec<usize>, used: VertexSet, out: &mut Vec<VertexPath>) {
        let tip = *stack.last().expect("non-empty");
        for v in self.neighbors(tip).difference(used).iter() {
            stack.push(v);
            if v == target {
                out.push(VertexPath(stack.clone()));
            } else {
                self.paths_dfs(target, stack, used.with(v), out);
            }
            stack.pop();
        }
    }

    /// Product of `-λ_e` along the path; 1 for a trivial path.
    pub fn path_weight(&self, c: &VertexPath) -> T {
        c.0.windows(2).fold(T::one(), |acc, e| acc * -self.weight(e[0], e[1]).clone())
    }

    /// A Hamiltonian path of the live subgraph, if there is one; the
    /// lexicographically first is returned.
    pub fn hamiltonian_path(&self) -> Option<VertexPath> {
        let target = self.alive.len();
        if target == 0 {
            return None;
        }
        fn go<T: Scalar>(g: &WeightedGraph<T>, stack: &mut Vec<usize>, used: VertexSet, target: usize) -> bool {
            if stack.len() == target {
                return true;
            }
            let tip = *stack.last().expect("non-empty");
            for v in g.neighbors(tip).difference(used).iter() {
                stack.push(v);
                if go(g, stack, used.with(v), target) {
                    return true;
                }
                stack.pop();
            }
            false
        }
        for start in self.alive.iter() {
            let mut stack = vec![start];
            if go(self, &mut stack, VertexSet::singleton(start), target) {
                return Some(VertexPath(stack));
            }
        }
        None
    }

    /// Copy with vertex `v` renamed to `perm[v]` (a permutation of the
    /// universe).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut offsets = vec![T::zero(); self.n];
        let mut g = WeightedGraph::edgeless(vec![T::zero(); self.n]).expect("same size");
        for v in 0..self.n {
            offsets[perm[v]] = self.offsets[v].clone();
        }
        g.offsets = offsets;
        for u in 0..self.n {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                g.set_weight(perm[u], perm[v], self.weight(u, v).clone()).expect("valid weight");
            }
        }
        g.alive = self.alive.iter().map(|v| perm[v]).collect();
        g
    }

    /// Change of scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> WeightedGraph<U> {
        WeightedGraph {
            n: self.n,
            offsets: self.offsets.iter().map(&f).collect(),
            weights: self.weights.iter().map(&f).collect(),
            adj: self.adj.clone(),
            alive: self.alive,
        }
    }

    /// Every live offset 0 and every live edge weight -1.
    pub fn is_unit(&self) -> bool {
        self.alive.iter().all(|v| self.offsets[v].is_zero())
            && self.edges().all(|(_, _, w)| (-w.clone()).is_one())
    }
}

impl<T: Scalar> fmt::Debug for WeightedGraph<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(V={:?}, r=[", self.alive)?;
        for (k, v) in self.alive.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.offsets[v])?;
        }
        write!(f, "], E=[")?;
        for (k, (u, v, w)) in self.edges().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}:{}", u + 1, v + 1, w)?;
        }
        write!(f, "])")
    }
}

/// Named small graphs used throughout tests and examples.
pub mod named {
    use super::*;

    pub fn path<T: Scalar>(n: usize) -> WeightedGraph<T> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        WeightedGraph::unit(n, &edges).expect("valid")
    }

    pub fn cycle<T: Scalar>(n: usize) -> WeightedGraph<T> {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        WeightedGraph::unit(n, &edges).expect("valid")
    }

    pub fn complete<T: Scalar>(n: usize) -> WeightedGraph<T> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        WeightedGraph::unit(n, &edges).expect("valid")
    }

    /// Centre 0, leaves `1..=leaves`.
    pub fn star<T: Scalar>(leaves: usize) -> WeightedGraph<T> {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        WeightedGraph::unit(leaves + 1, &edges).expect("valid")
    }

    pub fn edgeless<T: Scalar>(n: usize) -> WeightedGraph<T> {
        WeightedGraph::edgeless(vec![T::zero(); n]).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;
    use crate::{RatGraph, Rational};

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().copied().collect()
    }

    #[test]
    fn delete_examples() {
        let p3: RatGraph = path(3);
        let g = p3.delete_vertices(set(&[1]));
        assert_eq!(g.order(), 2);
        assert_eq!(g.edges().count(), 0);
        assert_eq!(p3.delete_vertices(VertexSet::empty()), p3);
        assert_eq!(p3.delete_vertices(set(&[0, 1, 2])).order(), 0);
    }

    #[test]
    fn components_examples() {
        let k13: RatGraph = star(3);
        assert_eq!(k13.components(set(&[1, 2, 3])).len(), 3);
        let p3: RatGraph = path(3);
        assert_eq!(p3.components(p3.vertices()), vec![set(&[0, 1, 2])]);
        let e: RatGraph = edgeless(4);
        assert_eq!(e.components(e.vertices()).len(), 4);
    }

    #[test]
    fn frontier_examples() {
        let k13: RatGraph = star(3);
        assert_eq!(k13.frontier(set(&[1, 2, 3])), set(&[0]));
        assert_eq!(k13.frontier(k13.vertices()), VertexSet::empty());
        let p3: RatGraph = path(3);
        assert_eq!(p3.frontier(set(&[0])), set(&[1]));
    }

    #[test]
    fn path_enumeration_examples() {
        let p3: RatGraph = path(3);
        let ps = p3.enumerate_paths(0, 2);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].vertices(), &[0, 1, 2]);
        let k3: RatGraph = complete(3);
        let ps: Vec<Vec<usize>> = k3.enumerate_paths(0, 1).iter().map(|p| p.vertices().to_vec()).collect();
        assert_eq!(ps, vec![vec![0, 1], vec![0, 2, 1]]);
        let e: RatGraph = edgeless(2);
        assert!(e.enumerate_paths(0, 1).is_empty());
    }

    #[test]
    fn path_weight_examples() {
        let q = |n: i64| Rational::from_integer(n.into());
        let g = RatGraph::from_edges(vec![q(0); 3], &[(0, 1, q(-2)), (1, 2, q(-3))]).unwrap();
        let c = VertexPath::new(&g, vec![0, 1]).unwrap();
        assert_eq!(g.path_weight(&c), q(2));
        let c = VertexPath::new(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(g.path_weight(&c), q(6));
        let c = VertexPath::new(&g, vec![2]).unwrap();
        assert_eq!(g.path_weight(&c), q(1));
    }

    #[test]
    fn invalid_paths_rejected() {
        let p3: RatGraph = path(3);
        assert!(VertexPath::new(&p3, vec![0, 2]).is_err());
        assert!(VertexPath::new(&p3, vec![0, 1, 0]).is_err());
        assert!(VertexPath::new(&p3, vec![]).is_err());
    }

    #[test]
    fn positive_weight_rejected() {
        let q = |n: i64| Rational::from_integer(n.into());
        assert!(RatGraph::from_edges(vec![q(0); 2], &[(0, 1, q(1))]).is_err());
        assert!(RatGraph::from_edges(vec![q(0); 2], &[(0, 0, q(-1))]).is_err());
    }

    #[test]
    fn hamiltonian_paths() {
        let k13: RatGraph = star(3);
        assert!(k13.hamiltonian_path().is_none());
        let c5: RatGraph = cycle(5);
        assert_eq!(c5.hamiltonian_path().unwrap().len(), 5);
    }
}
