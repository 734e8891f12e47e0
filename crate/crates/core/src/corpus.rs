//! Test instances: connected unit graphs up to isomorphism and seeded random
//! weighted graphs.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::{RatGraph, Rational};

/// xorshift64* generator.
#[derive(Clone, Debug)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    /// A zero seed is replaced by a fixed non-zero state.
    pub fn new(seed: u64) -> Self {
        Xorshift64Star { state: if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }
}

pub const MAX_RANDOM_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    pub weighted: bool,
}

/// Each pair `u < v` in lexicographic order becomes an edge when a uniform
/// draw falls below `density`. Weighted instances then draw `λ = -k/d` with
/// `d ∈ 1..=8`, `k ∈ ⌈d/3⌉..=3d` per edge, and after all edges `r = k/d` with
/// `k ∈ -2d..=2d` per vertex; unit instances use `λ = -1`, `r = 0`.
pub fn random_graph(spec: &RandomSpec) -> Result<RatGraph> {
    if spec.n > MAX_RANDOM_VERTICES {
        return Err(Error::Guard(format!("random graphs have at most {MAX_RANDOM_VERTICES} vertices")));
    }
    let mut rng = Xorshift64Star::new(spec.seed);
    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            if rng.next_f64() < spec.density {
                let lambda = if spec.weighted {
                    let d = rng.range(1, 8);
                    let k = rng.range((d + 2) / 3, 3 * d);
                    Rational::new((-k).into(), d.into())
                } else {
                    Rational::from_integer((-1).into())
                };
                edges.push((u, v, lambda));
            }
        }
    }
    let offsets = (0..spec.n)
        .map(|_| {
            if spec.weighted {
                let d = rng.range(1, 8);
                Rational::new(rng.range(-2 * d, 2 * d).into(), d.into())
            } else {
                Rational::zero()
            }
        })
        .collect();
    WeightedGraph::from_edges(offsets, &edges)
}

/// A connected random graph: seeds `seed, seed+1, …` are tried in turn and
/// the one that succeeded is returned with the graph.
pub fn random_connected_graph(n: usize, density: f64, seed: u64, weighted: bool) -> Result<(RandomSpec, RatGraph)> {
    for attempt in 0..10_000u64 {
        let spec = RandomSpec { n, density, seed: seed.wrapping_add(attempt), weighted };
        let g = random_graph(&spec)?;
        if g.is_connected() {
            return Ok((spec, g));
        }
    }
    Err(Error::Guard("no connected instance found".into()))
}

/// `count` random instances with sizes in `n_range` and densities in
/// `[0.3, 0.8)`, all drawn from one master seed.
pub fn random_corpus(
    count: usize,
    n_range: (usize, usize),
    master_seed: u64,
    weighted: bool,
    connected: bool,
) -> Result<Vec<(RandomSpec, RatGraph)>> {
    let mut rng = Xorshift64Star::new(master_seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.range(n_range.0 as i64, n_range.1 as i64) as usize;
        let density = 0.3 + 0.5 * rng.next_f64();
        let seed = rng.next_u64();
        if connected {
            out.push(random_connected_graph(n, density, seed, weighted)?);
        } else {
            let spec = RandomSpec { n, density, seed, weighted };
            out.push((spec, random_graph(&spec)?));
        }
    }
    Ok(out)
}

/// Adjacency rows as bit masks.
type Rows = Vec<u64>;

fn rows_of(n: usize, edges: &[(usize, usize)]) -> Rows {
    let mut rows = vec![0u64; n];
    for &(u, v) in edges {
        rows[u] |= 1 << v;
        rows[v] |= 1 << u;
    }
    rows
}

/// Vertex colours from iterated degree refinement; isomorphism invariant.
fn refined_colours(rows: &Rows) -> Vec<usize> {
    let n = rows.len();
    let mut colours: Vec<usize> = rows.iter().map(|r| r.count_ones() as usize).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&u| rows[v] >> u & 1 == 1).map(|u| colours[u]).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let ranked: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = sigs.iter().map(|s| ranked.binary_search(&s).expect("present")).collect();
        let before = colours.iter().collect::<BTreeSet<_>>().len();
        let after = next.iter().collect::<BTreeSet<_>>().len();
        colours = next;
        if after == before {
            return colours;
        }
    }
}

/// Smallest upper-triangle code over vertex orders that list colour
/// classes in increasing colour.
fn canonical_code(rows: &Rows) -> u64 {
    let n = rows.len();
    let colours = refined_colours(rows);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colours[v]);
    for v in order {
        match classes.last_mut() {
            Some(c) if colours[c[0]] == colours[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    search(rows, &mut classes, 0, &mut perm, &mut best);
    best
}

fn search(rows: &Rows, classes: &mut [Vec<usize>], k: usize, perm: &mut Vec<usize>, best: &mut u64) {
    if k == classes.len() {
        let n = perm.len();
        let mut code = 0u64;
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                if rows[perm[a]] >> perm[b] & 1 == 1 {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        *best = (*best).min(code);
        return;
    }
    let class = classes[k].clone();
    permute(&class, &mut Vec::new(), &mut vec![false; class.len()], &mut |p| {
        let base = perm.len();
        perm.extend_from_slice(p);
        search(rows, classes, k + 1, perm, best);
        perm.truncate(base);
    });
}

fn permute(items: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == items.len() {
        f(cur);
        return;
    }
    for k in 0..items.len() {
        if !used[k] {
            used[k] = true;
            cur.push(items[k]);
            permute(items, cur, used, f);
            cur.pop();
            used[k] = false;
        }
    }
}

/// Connected unit graphs on `n` vertices, one per isomorphism class, each a
/// connected graph on `n - 1` vertices plus a vertex joined to a non-empty
/// subset (every connected graph has a vertex whose removal keeps it
/// connected). Limited to `n ≤ 8`.
pub fn connected_unit_graphs(n: usize) -> Result<Vec<RatGraph>> {
    if n > 8 {
        return Err(Error::Guard("isomorphism-free generation is limited to 8 vertices".into()));
    }
    let mut level: Vec<Vec<(usize, usize)>> = if n == 0 { return Ok(Vec::new()) } else { vec![Vec::new()] };
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &level {
            for mask in 1u64..(1 << (m - 1)) {
                let mut e = edges.clone();
                e.extend((0..m - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, m - 1)));
                if seen.insert(canonical_code(&rows_of(m, &e))) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|e| WeightedGraph::unit(n, &e)).collect()
}

/// All connected unit graphs with `1..=max_n` vertices up to isomorphism.
pub fn all_connected_unit_graphs(max_n: usize) -> Result<Vec<RatGraph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(connected_unit_graphs(n)?);
    }
    Ok(out)
}

/// Unit graphs on `n ≤ 5` vertices, one per edge subset, isomorphic copies
/// included.
pub fn labelled_unit_graphs(n: usize) -> Result<Vec<RatGraph>> {
    if n > 5 {
        return Err(Error::Guard("labelled enumeration is limited to 5 vertices".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..(1 << pairs.len()))
        .map(|mask| {
            let e: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
            WeightedGraph::unit(n, &e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_unit_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = RandomSpec { n: 6, density: 0.5, seed: 42, weighted: true };
        assert_eq!(random_graph(&spec).unwrap(), random_graph(&spec).unwrap());
        let empty = random_graph(&RandomSpec { density: 0.0, ..spec }).unwrap();
        assert_eq!(empty.edges().count(), 0);
        let full = random_graph(&RandomSpec { density: 1.0, ..spec }).unwrap();
        assert_eq!(full.edges().count(), 15);
    }

    #[test]
    fn weights_stay_in_range() {
        let g = random_graph(&RandomSpec { n: 10, density: 1.0, seed: 7, weighted: true }).unwrap();
        let (lo, hi) = (Rational::from_integer((-3).into()), Rational::new((-1).into(), 3.into()));
        assert!(g.edges().all(|(_, _, w)| w >= &lo && w <= &hi && *w.denom() <= 8.into()));
        let two = Rational::from_integer(2.into());
        assert!(g.vertices().iter().all(|v| g.offset(v) >= &-two.clone() && g.offset(v) <= &two));
    }

    #[test]
    fn corpus_records_reproducing_seeds() {
        for (spec, g) in random_corpus(5, (3, 8), 1, true, true).unwrap() {
            assert!(g.is_connected());
            assert_eq!(random_graph(&spec).unwrap(), g);
        }
    }

    #[test]
    fn labelled_counts() {
        assert_eq!(labelled_unit_graphs(4).unwrap().len(), 64);
    }
}
