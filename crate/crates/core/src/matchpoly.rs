//! Matching polynomials and the polynomial identities they satisfy.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::classify::SignClass;
use crate::error::{Error, Result};
use crate::exact::{isolate_roots_in, AlgebraicNumber, Interval, Polynomial};
use crate::graph::{VertexSet, WeightedGraph};
use crate::oracle;
use crate::scalar::Scalar;
use crate::verdict::Verdict;
use crate::{RatGraph, RatPoly, Rational};

/// Memoized matching polynomials of the induced subgraphs of one graph,
/// keyed by vertex subset.
///
/// Uses `μ(S) = (x - r_i) μ(S\i) + Σ_j λ_ij μ(S\i,j)` with `i` the lowest
/// vertex of `S`.
pub struct MatchingTable<'g, T: Scalar> {
    graph: &'g WeightedGraph<T>,
    cache: RefCell<HashMap<u64, Rc<Polynomial<T>>>>,
}

impl<'g, T: Scalar> MatchingTable<'g, T> {
    pub fn new(graph: &'g WeightedGraph<T>) -> Self {
        MatchingTable { graph, cache: RefCell::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g WeightedGraph<T> {
        self.graph
    }

    /// `μ` of the subgraph induced on `s ∩ live`.
    pub fn mu(&self, s: VertexSet) -> Rc<Polynomial<T>> {
        let s = s.intersection(self.graph.vertices());
        self.mu_inner(s)
    }

    /// `μ(G \ s)` for the whole live graph `G`.
    pub fn mu_without(&self, s: VertexSet) -> Rc<Polynomial<T>> {
        self.mu(self.graph.vertices().difference(s))
    }

    fn mu_inner(&self, s: VertexSet) -> Rc<Polynomial<T>> {
        if let Some(p) = self.cache.borrow().get(&s.bits()) {
            return p.clone();
        }
        let p = match s.first() {
            None => Polynomial::one(),
            Some(i) => {
                let rest = s.without(i);
                let mut acc = &Polynomial::linear(self.graph.offset(i).clone()) * &*self.mu_inner(rest);
                for j in self.graph.raw_neighbors(i).intersection(rest).iter() {
                    let term = self.mu_inner(rest.without(j)).scale(self.graph.weight(i, j));
                    acc = &acc + &term;
                }
                acc
            }
        };
        let p = Rc::new(p);
        self.cache.borrow_mut().insert(s.bits(), p.clone());
        p
    }

    pub fn cached_subsets(&self) -> usize {
        self.cache.borrow().len()
    }
}

pub fn matching_polynomial<T: Scalar>(g: &WeightedGraph<T>) -> Polynomial<T> {
    MatchingTable::new(g).mu(g.vertices()).as_ref().clone()
}

/// Same recurrence with a caller-chosen pivot in every subset; the result
/// does not depend on the choice.
pub fn matching_polynomial_with_pivot<T: Scalar>(
    g: &WeightedGraph<T>,
    pivot: impl Fn(VertexSet) -> usize,
) -> Polynomial<T> {
    fn go<T: Scalar>(
        g: &WeightedGraph<T>,
        s: VertexSet,
        pivot: &dyn Fn(VertexSet) -> usize,
        memo: &mut HashMap<u64, Polynomial<T>>,
    ) -> Polynomial<T> {
        if s.is_empty() {
            return Polynomial::one();
        }
        if let Some(p) = memo.get(&s.bits()) {
            return p.clone();
        }
        let i = pivot(s);
        assert!(s.contains(i), "pivot must belong to the subset");
        let rest = s.without(i);
        let mut acc = &Polynomial::linear(g.offset(i).clone()) * &go(g, rest, pivot, memo);
        for j in g.neighbors(i).intersection(rest).iter() {
            acc = &acc + &go(g, rest.without(j), pivot, memo).scale(g.weight(i, j));
        }
        memo.insert(s.bits(), acc.clone());
        acc
    }
    go(g, g.vertices(), &pivot, &mut HashMap::new())
}

/// Direct sum over all matchings; at most 16 vertices.
pub fn matching_polynomial_bruteforce<T: Scalar>(g: &WeightedGraph<T>) -> Result<Polynomial<T>> {
    let matchings = oracle::enumerate_matchings(g)?;
    let mut total = Polynomial::zero();
    for m in &matchings {
        let covered = m.covered();
        let mut term = Polynomial::one();
        for v in g.vertices().difference(covered).iter() {
            term = &term * &Polynomial::linear(g.offset(v).clone());
        }
        for &(u, v) in m.edges() {
            term = term.scale(g.weight(u, v));
        }
        total = &total + &term;
    }
    Ok(total)
}

/// `μ(G)' = Σ_j μ(G\j)`.
pub fn derivative_identity_check(g: &RatGraph) -> Verdict {
    let table = MatchingTable::new(g);
    let lhs = table.mu(g.vertices()).derivative();
    let rhs = g
        .vertices()
        .iter()
        .fold(RatPoly::zero(), |acc, j| &acc + &*table.mu_without(VertexSet::singleton(j)));
    let residual = &lhs - &rhs;
    Verdict::ensure(residual.is_zero(), || format!("residual {residual}"))
}

fn distinct_live(g: &RatGraph, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::Precondition("vertices must be distinct".into()));
    }
    for v in [i, j] {
        if !g.vertices().contains(v) {
            return Err(Error::Precondition(format!("vertex {} is not in the graph", v + 1)));
        }
    }
    Ok(())
}

/// `Σ_{c ∈ [i→j]} λ_c μ(G\c)²` over all simple paths from `i` to `j`.
pub fn path_square_sum(table: &MatchingTable<'_, Rational>, i: usize, j: usize) -> RatPoly {
    let g = table.graph();
    g.enumerate_paths(i, j).iter().fold(RatPoly::zero(), |acc, c| {
        let m = table.mu_without(c.as_set());
        &acc + &(&*m * &*m).scale(&g.path_weight(c))
    })
}

/// `μ(G\i)μ(G\j) - μ(G\i,j)μ(G)`.
pub fn cross_difference(table: &MatchingTable<'_, Rational>, i: usize, j: usize) -> RatPoly {
    let si = VertexSet::singleton(i);
    let sj = VertexSet::singleton(j);
    let lhs = &*table.mu_without(si) * &*table.mu_without(sj);
    let rhs = &*table.mu_without(si.with(j)) * &*table.mu_without(VertexSet::empty());
    &lhs - &rhs
}

/// `μ(G\i)μ(G\j) - μ(G\i,j)μ(G) = Σ_{c ∈ [i→j]} λ_c μ(G\c)²`.
pub fn christoffel_darboux_check(g: &RatGraph, i: usize, j: usize) -> Result<Verdict> {
    distinct_live(g, i, j)?;
    let table = MatchingTable::new(g);
    let lhs = cross_difference(&table, i, j);
    let rhs = path_square_sum(&table, i, j);
    Ok(Verdict::ensure(lhs == rhs, || format!("lhs {lhs} != path sum {rhs}")))
}

/// The effective coupling `λ_{i∼j} = num / den` left after contracting
/// every path between two vertices. Stored unreduced.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionWeight {
    /// `-Σ_c λ_c μ(G\c)²`, non-positive on the reals.
    pub num: RatPoly,
    /// `μ(G\i,j)²`.
    pub den: RatPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionClass {
    Zero,
    FiniteNegative,
    MinusInfinity,
}

impl ContractionWeight {
    pub fn is_identically_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value class at `θ` from the orders of vanishing of numerator and
    /// denominator.
    pub fn class_at(&self, theta: &AlgebraicNumber) -> ContractionClass {
        if self.num.is_zero() {
            return ContractionClass::Zero;
        }
        let a = theta.multiplicity_at(&self.num);
        let b = theta.multiplicity_at(&self.den);
        match a.cmp(&b) {
            Ordering::Less => ContractionClass::MinusInfinity,
            Ordering::Greater => ContractionClass::Zero,
            Ordering::Equal => ContractionClass::FiniteNegative,
        }
    }
}

pub fn contraction_weight_in(table: &MatchingTable<'_, Rational>, i: usize, j: usize) -> ContractionWeight {
    let num = -path_square_sum(table, i, j);
    let d = table.mu_without(VertexSet::singleton(i).with(j));
    ContractionWeight { num, den: &*d * &*d }
}

/// Same weight with the numerator taken from the cross difference
/// `μ(G\i,j)μ(G) - μ(G\i)μ(G\j)`, which equals the path sum; avoids
/// enumerating paths.
pub fn contraction_weight_by_cross_difference(
    table: &MatchingTable<'_, Rational>,
    i: usize,
    j: usize,
) -> ContractionWeight {
    let num = -cross_difference(table, i, j);
    let d = table.mu_without(VertexSet::singleton(i).with(j));
    ContractionWeight { num, den: &*d * &*d }
}

pub fn contraction_weight(g: &RatGraph, i: usize, j: usize) -> Result<ContractionWeight> {
    distinct_live(g, i, j)?;
    Ok(contraction_weight_in(&MatchingTable::new(g), i, j))
}

pub fn contraction_class_at(w: &ContractionWeight, theta: &AlgebraicNumber) -> ContractionClass {
    w.class_at(theta)
}

/// `α_i(G) = α_i(G\j) + λ_{i∼j} / α_j(G\i)` with every denominator cleared:
/// `μ(G) μ(G\i,j) den = μ(G\j) μ(G\i) den + num μ(G\i,j)²`.
pub fn contraction_identity_check(g: &RatGraph, i: usize, j: usize) -> Result<Verdict> {
    distinct_live(g, i, j)?;
    let table = MatchingTable::new(g);
    let w = contraction_weight_in(&table, i, j);
    let si = VertexSet::singleton(i);
    let sj = VertexSet::singleton(j);
    let mu = table.mu_without(VertexSet::empty());
    let mu_i = table.mu_without(si);
    let mu_j = table.mu_without(sj);
    let mu_ij = table.mu_without(si.with(j));
    let lhs = &(&*mu * &*mu_ij) * &w.den;
    let rhs = &(&(&*mu_j * &*mu_i) * &w.den) + &(&w.num * &(&*mu_ij * &*mu_ij));
    let mut verdicts = vec![Verdict::ensure(lhs == rhs, || format!("contraction identity residual {}", &lhs - &rhs))];
    // -λ_{i∼j} is a sum of squares: spot-check non-positivity of num
    for k in -4i64..=4 {
        let x = Rational::new(k.into(), 2.into());
        let v = w.num.eval(&x);
        verdicts.push(Verdict::ensure(!v.is_positive(), || format!("numerator positive at {x}: {v}")));
    }
    Ok(Verdict::all(verdicts))
}

/// A ratio of polynomials, e.g. a graph continued fraction
/// `α_i(G) = μ(G)/μ(G\i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RationalFunction {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial("denominator of a rational function"));
        }
        Ok(RationalFunction { num, den })
    }

    /// Graph continued fraction of `g` rooted at `i`.
    pub fn alpha(table: &MatchingTable<'_, Rational>, within: VertexSet, i: usize) -> Self {
        RationalFunction { num: (*table.mu(within)).clone(), den: (*table.mu(within.without(i))).clone() }
    }

    /// Sign class of the value at `θ`; `θ` may come back with a narrower
    /// interval.
    pub fn class_at(&self, theta: &mut AlgebraicNumber) -> SignClass {
        if self.num.is_zero() {
            return SignClass::Zero;
        }
        let a = theta.multiplicity_at(&self.num);
        let b = theta.multiplicity_at(&self.den);
        match a.cmp(&b) {
            Ordering::Greater => SignClass::Zero,
            Ordering::Less => SignClass::Inf,
            Ordering::Equal => {
                let s = sign_right_of(theta, &[&self.num, &self.den]);
                if s > 0 {
                    SignClass::Pos
                } else {
                    SignClass::Neg
                }
            }
        }
    }

    /// Order of the values at `θ`, or `None` when either is infinite.
    ///
    /// With `d = m_θ(den)` and finite value, `num/den` at `θ` equals
    /// `num⁽ᵈ⁾(θ) / den⁽ᵈ⁾(θ)`, and `den⁽ᵈ⁾(θ) ≠ 0`; the two values are
    /// compared through those derivatives.
    pub fn cmp_at(&self, other: &Self, theta: &mut AlgebraicNumber) -> Option<Ordering> {
        let a = self.at_theta(theta)?;
        let b = other.at_theta(theta)?;
        Some(cmp_derived(theta, &a, &b))
    }

    /// `(num⁽ᵈ⁾, den⁽ᵈ⁾)` for `d = m_θ(den)`, or `None` if the value is
    /// infinite.
    fn at_theta(&self, theta: &AlgebraicNumber) -> Option<(RatPoly, RatPoly)> {
        let d = theta.multiplicity_at(&self.den);
        if !self.num.is_zero() && theta.multiplicity_at(&self.num) < d {
            return None;
        }
        let (mut p, mut q) = (self.num.clone(), self.den.clone());
        for _ in 0..d {
            p = p.derivative();
            q = q.derivative();
        }
        Some((p, q))
    }

    /// Sign of the value at `θ` when finite and non-zero.
    pub fn eval_rational(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

/// Order of `p1(θ)/q1(θ)` and `p2(θ)/q2(θ)` for `q1(θ), q2(θ) ≠ 0`.
pub fn cmp_derived(theta: &AlgebraicNumber, a: &(RatPoly, RatPoly), b: &(RatPoly, RatPoly)) -> Ordering {
    let ((p1, q1), (p2, q2)) = (a, b);
    let diff = &(p1 * q2) - &(p2 * q1);
    if diff.is_zero() || theta.is_root_of(&diff) {
        return Ordering::Equal;
    }
    let s = theta.sign_at(&diff) * theta.sign_at(q1) * theta.sign_at(q2);
    if s > 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Product of the signs of `ps` on `(θ, θ+ε)`.
pub fn sign_right_of(theta: &mut AlgebraicNumber, ps: &[&RatPoly]) -> i8 {
    ps.iter().fold(1i8, |acc, p| acc * theta.sign_just_right(p))
}

/// `B_G` from the real-rootedness bracket and a rational bracket around
/// `[min r - 2√B, max r + 2√B]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeilmannLiebBound {
    pub b: Rational,
    /// A rational upper approximation of `2√B`, at most `2·10⁻⁶` above.
    pub radius: Rational,
    pub r_min: Rational,
    pub r_max: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

pub fn heilmann_lieb_bound(g: &RatGraph) -> HeilmannLiebBound {
    let live: Vec<usize> = g.vertices().iter().collect();
    let n = live.len();
    let b = match n {
        0 | 1 => Rational::zero(),
        2 => -g.weight(live[0], live[1]).clone() / Rational::from_integer(4.into()),
        _ => live
            .iter()
            .map(|&j| {
                let ws: Vec<Rational> = live.iter().filter(|&&k| k != j).map(|&k| -g.weight(j, k).clone()).collect();
                let total = ws.iter().fold(Rational::zero(), |a, w| a + w);
                let min = ws.iter().min().cloned().unwrap_or_else(Rational::zero);
                total - min
            })
            .max()
            .unwrap_or_else(Rational::zero),
    };
    let root = sqrt_upper(&b);
    let radius = &root * Rational::from_integer(2.into());
    let offsets = live.iter().map(|&v| g.offset(v).clone());
    let r_min = offsets.clone().min().unwrap_or_else(Rational::zero);
    let r_max = offsets.max().unwrap_or_else(Rational::zero);
    HeilmannLiebBound { lo: &r_min - &radius, hi: &r_max + &radius, b, radius, r_min, r_max }
}

/// Rational `s ≥ √b` with `s - √b ≤ 10⁻⁶`.
fn sqrt_upper(b: &Rational) -> Rational {
    if b.is_zero() {
        return Rational::zero();
    }
    let step = Rational::new(1.into(), 1_000_000.into());
    let approx = crate::exact::rational_to_f64(b).sqrt();
    let micro = (approx * 1e6).floor() as i64 - 1;
    let mut s = Rational::new(micro.max(0).into(), 1_000_000.into());
    while &(&s * &s) < b {
        s = &s + &step;
    }
    s
}

impl HeilmannLiebBound {
    /// Isolation bracket: the rational bracket widened by 1 on each side.
    pub fn search_interval(&self) -> Interval {
        Interval::new(&self.lo - Rational::one(), &self.hi + Rational::one()).expect("lo - 1 < hi + 1")
    }

    /// Exact test of `min r - 2√B ≤ θ ≤ max r + 2√B`, comparing squares.
    pub fn contains(&self, theta: &AlgebraicNumber) -> bool {
        let four_b = &self.b * Rational::from_integer(4.into());
        let upper_ok = theta.cmp_rational(&self.r_max) != Ordering::Greater || {
            let q = &RatPoly::linear(self.r_max.clone()).pow(2) - &RatPoly::constant(four_b.clone());
            theta.sign_at(&q) <= 0
        };
        let lower_ok = theta.cmp_rational(&self.r_min) != Ordering::Less || {
            let q = &RatPoly::linear(self.r_min.clone()).pow(2) - &RatPoly::constant(four_b);
            theta.sign_at(&q) <= 0
        };
        upper_ok && lower_ok
    }
}

/// Distinct real roots of `μ(G)`, ascending, isolated inside the widened
/// real-rootedness bracket.
pub fn real_roots(g: &RatGraph) -> Result<Vec<AlgebraicNumber>> {
    let mu = matching_polynomial(g);
    if mu.is_constant() {
        return Ok(Vec::new());
    }
    isolate_roots_in(&mu, &heilmann_lieb_bound(g).search_interval())
}

/// Distinct real roots with their multiplicities in `μ(G)`.
pub fn roots_with_multiplicity(g: &RatGraph) -> Result<Vec<(AlgebraicNumber, usize)>> {
    let mu = matching_polynomial(g);
    Ok(real_roots(g)?
        .into_iter()
        .map(|t| {
            let m = t.multiplicity_at(&mu);
            (t, m)
        })
        .collect())
}

/// Real-rootedness and the bracket: multiplicities of the isolated roots sum
/// to `n`, and every root lies in the closed bracket.
pub fn real_rootedness_check(g: &RatGraph) -> Result<Verdict> {
    let roots = roots_with_multiplicity(g)?;
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    let hl = heilmann_lieb_bound(g);
    let mut vs = vec![Verdict::ensure(total == g.order(), || {
        format!("multiplicities sum to {total}, expected {}", g.order())
    })];
    for (t, _) in &roots {
        vs.push(Verdict::ensure(hl.contains(t), || format!("root {t} outside the bracket (B = {})", hl.b)));
    }
    Ok(Verdict::all(vs))
}

/// Zeros of `μ(G)` and `μ(G\i)` interlace, and multiplicities differ by at
/// most one everywhere.
pub fn interlacing_check(g: &RatGraph, i: usize) -> Result<Verdict> {
    if !g.vertices().contains(i) {
        return Err(Error::Precondition(format!("vertex {} is not in the graph", i + 1)));
    }
    let gi = g.delete_vertices(VertexSet::singleton(i));
    let mu = matching_polynomial(g);
    let mu_i = matching_polynomial(&gi);
    let roots = real_roots(g)?;
    let roots_i = real_roots(&gi)?;
    let mut vs = Vec::new();
    for t in roots.iter().chain(roots_i.iter()) {
        let (a, b) = (t.multiplicity_at(&mu), t.multiplicity_at(&mu_i));
        vs.push(Verdict::ensure(a.abs_diff(b) <= 1, || format!("at {t}: m(G) = {a}, m(G\\i) = {b}")));
    }
    if !mu_i.is_constant() {
        let chain = crate::exact::SturmChain::new(&mu_i)?;
        for w in roots.windows(2) {
            if w[0].is_root_of(&mu_i) || w[1].is_root_of(&mu_i) {
                continue;
            }
            let a = w[0].refine(&mu_i);
            let b = w[1].refine(&mu_i);
            let between = if a.interval().hi() < b.interval().lo() {
                chain.count(a.interval().hi(), b.interval().lo())
            } else {
                0
            };
            vs.push(Verdict::ensure(between >= 1, || {
                format!("no zero of mu(G\\{}) between {} and {}", i + 1, w[0], w[1])
            }));
        }
    } else {
        vs.push(Verdict::ensure(roots.len() <= 1, || "several zeros but mu(G\\i) is constant".into()));
    }
    Ok(Verdict::all(vs))
}
