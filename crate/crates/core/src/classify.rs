//! Sign classes of graph continued fractions at a real algebraic `θ`, the
//! resulting decomposition, and checks of the structure theorems built on it.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, AlgebraicNumber};
use crate::graph::VertexSet;
use crate::matchpoly::{
    cmp_derived, contraction_weight_by_cross_difference, sign_right_of, ContractionClass, ContractionWeight, MatchingTable,
    RationalFunction,
};
use crate::oracle::touched_components;
use crate::verdict::Verdict;
use crate::{RatGraph, RatPoly, Rational};

/// Subset enumeration limit for conditions quantified over subsets of `A`.
pub const MAX_FRONTIER_SUBSETS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Neg,
    Zero,
    Pos,
    Inf,
}

impl SignClass {
    pub fn is_finite(self) -> bool {
        self != SignClass::Inf
    }

    /// `-`, `0`, `+` or `inf`.
    pub fn symbol(self) -> &'static str {
        match self {
            SignClass::Neg => "-",
            SignClass::Zero => "0",
            SignClass::Pos => "+",
            SignClass::Inf => "inf",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignClass::Neg => "neg",
            SignClass::Zero => "zero",
            SignClass::Pos => "pos",
            SignClass::Inf => "inf",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One graph and one `θ`, with matching polynomials and root multiplicities
/// of induced subgraphs cached by vertex subset. `θ` is narrowed in place as
/// sign evaluations demand; it always denotes the same number.
pub struct ThetaContext<'g> {
    table: MatchingTable<'g, Rational>,
    theta: RefCell<AlgebraicNumber>,
    mults: RefCell<HashMap<u64, usize>>,
}

impl<'g> ThetaContext<'g> {
    pub fn new(graph: &'g RatGraph, theta: AlgebraicNumber) -> Self {
        let theta = theta.refine_to_width(&Rational::new(1.into(), (1u64 << 40).into()));
        ThetaContext { table: MatchingTable::new(graph), theta: RefCell::new(theta), mults: RefCell::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g RatGraph {
        self.table.graph()
    }

    pub fn table(&self) -> &MatchingTable<'g, Rational> {
        &self.table
    }

    pub fn theta(&self) -> AlgebraicNumber {
        self.theta.borrow().clone()
    }

    pub fn all(&self) -> VertexSet {
        self.graph().vertices()
    }

    pub fn mu(&self, s: VertexSet) -> Rc<RatPoly> {
        self.table.mu(s)
    }

    /// `m_θ` of the subgraph induced on `s`.
    pub fn multiplicity(&self, s: VertexSet) -> usize {
        let s = s.intersection(self.all());
        if let Some(&m) = self.mults.borrow().get(&s.bits()) {
            return m;
        }
        let m = self.theta.borrow().multiplicity_at(&self.mu(s));
        self.mults.borrow_mut().insert(s.bits(), m);
        m
    }

    pub fn multiplicity_of(&self, p: &RatPoly) -> usize {
        self.theta.borrow().multiplicity_at(p)
    }

    /// Class of `α_i` of the subgraph induced on `s` (which must contain `i`).
    pub fn class_in(&self, s: VertexSet, i: usize) -> Result<SignClass> {
        if !s.contains(i) || !self.all().contains(i) {
            return Err(Error::Precondition(format!("vertex {} is not in the graph", i + 1)));
        }
        let m = self.multiplicity(s);
        let mi = self.multiplicity(s.without(i));
        if mi + 1 == m {
            Ok(SignClass::Zero)
        } else if mi == m + 1 {
            Ok(SignClass::Inf)
        } else if mi == m {
            // both vanish to order m: the value is the ratio of m-th derivatives
            let (mut mu, mut mu_i) = ((*self.mu(s)).clone(), (*self.mu(s.without(i))).clone());
            for _ in 0..m {
                mu = mu.derivative();
                mu_i = mu_i.derivative();
            }
            let theta = self.theta.borrow();
            let sign = theta.sign_at(&mu) * theta.sign_at(&mu_i);
            Ok(if sign > 0 { SignClass::Pos } else { SignClass::Neg })
        } else {
            Err(Error::Invariant(format!(
                "interlacing breach at vertex {}: m = {m}, m after deletion = {mi}",
                i + 1
            )))
        }
    }

    pub fn class(&self, i: usize) -> Result<SignClass> {
        self.class_in(self.all(), i)
    }

    /// `α_i` of the subgraph induced on `s` as a ratio of polynomials.
    pub fn alpha(&self, s: VertexSet, i: usize) -> RationalFunction {
        RationalFunction::alpha(&self.table, s, i)
    }

    /// Order of two values at `θ`; `None` if either is infinite.
    pub fn cmp_values(&self, f: &RationalFunction, g: &RationalFunction) -> Option<Ordering> {
        f.cmp_at(g, &mut self.theta.borrow_mut())
    }

    /// `α_i(G[s])` at `θ` as `(num⁽ᵈ⁾, den⁽ᵈ⁾)` with `d = m_θ(G[s \ i])`, whose
    /// ratio at `θ` is the value; `None` when the value is infinite.
    pub fn alpha_at(&self, s: VertexSet, i: usize) -> Option<(RatPoly, RatPoly)> {
        let d = self.multiplicity(s.without(i));
        if self.multiplicity(s) < d {
            return None;
        }
        let (mut p, mut q) = ((*self.mu(s)).clone(), (*self.mu(s.without(i))).clone());
        for _ in 0..d {
            p = p.derivative();
            q = q.derivative();
        }
        Some((p, q))
    }

    /// Order of `α_i(G[s])` and `α_j(G[t])` at `θ`; `None` if either is infinite.
    pub fn cmp_alpha(&self, s: VertexSet, i: usize, t: VertexSet, j: usize) -> Option<Ordering> {
        let (a, b) = (self.alpha_at(s, i)?, self.alpha_at(t, j)?);
        Some(cmp_derived(&self.theta.borrow(), &a, &b))
    }

    /// Whether `α_i(G[s])` and `α_j(G[t])` agree at `θ`: same class, and
    /// equal values when finite.
    pub fn alpha_values_agree(&self, s: VertexSet, i: usize, t: VertexSet, j: usize) -> Result<bool> {
        let (a, b) = (self.class_in(s, i)?, self.class_in(t, j)?);
        if a != b {
            return Ok(false);
        }
        if a == SignClass::Inf {
            return Ok(true);
        }
        Ok(self.cmp_alpha(s, i, t, j) == Some(Ordering::Equal))
    }

    pub fn sign_right(&self, ps: &[&RatPoly]) -> i8 {
        sign_right_of(&mut self.theta.borrow_mut(), ps)
    }
}

pub fn alpha_class(g: &RatGraph, i: usize, theta: &AlgebraicNumber) -> Result<SignClass> {
    ThetaContext::new(g, theta.clone()).class(i)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaDecomposition {
    pub theta: AlgebraicNumber,
    /// Indexed by vertex; `None` for deleted vertices.
    pub classes: Vec<Option<SignClass>>,
    pub d: VertexSet,
    pub a: VertexSet,
    pub n_minus: VertexSet,
    pub n_plus: VertexSet,
    pub p: VertexSet,
    pub critical_components: Vec<VertexSet>,
    pub m: usize,
}

impl ThetaDecomposition {
    pub fn class_of(&self, v: usize) -> Option<SignClass> {
        self.classes.get(v).copied().flatten()
    }

    pub fn set_of(&self, c: SignClass) -> VertexSet {
        (0..self.classes.len()).filter(|&v| self.classes[v] == Some(c)).collect()
    }

    pub fn to_json(&self) -> Value {
        let classes: serde_json::Map<String, Value> = self
            .classes
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| ((v + 1).to_string(), Value::from(c.name()))))
            .collect();
        json!({
            "theta": algebraic_to_json(&self.theta),
            "m": self.m,
            "classes": classes,
            "D": self.d.ids(),
            "A": self.a.ids(),
            "N_minus": self.n_minus.ids(),
            "N_plus": self.n_plus.ids(),
            "P": self.p.ids(),
            "critical_components": self.critical_components.iter().map(|c| c.ids()).collect::<Vec<_>>(),
        })
    }
}

/// `{"witness": [coefficients, constant first], "interval": [lo, hi]}`.
pub fn algebraic_to_json(theta: &AlgebraicNumber) -> Value {
    json!({
        "witness": theta.witness().coeffs().iter().map(format_rational).collect::<Vec<_>>(),
        "interval": [format_rational(theta.interval().lo()), format_rational(theta.interval().hi())],
        "approx": theta.approx(),
    })
}

/// Classes and sets without re-checking the structural invariants.
fn classify_all(ctx: &ThetaContext<'_>) -> Result<ThetaDecomposition> {
    let g = ctx.graph();
    let mut classes = vec![None; g.universe()];
    for v in ctx.all().iter() {
        classes[v] = Some(ctx.class(v)?);
    }
    let set = |c: SignClass| -> VertexSet { ctx.all().iter().filter(|&v| classes[v] == Some(c)).collect() };
    let d = set(SignClass::Zero);
    let a = g.frontier(d);
    let p = set(SignClass::Inf).difference(a);
    Ok(ThetaDecomposition {
        theta: ctx.theta(),
        n_minus: set(SignClass::Neg),
        n_plus: set(SignClass::Pos),
        critical_components: g.components(d),
        m: ctx.multiplicity(ctx.all()),
        classes,
        d,
        a,
        p,
    })
}

/// Full decomposition at `θ`. Fails with [`Error::Invariant`] when the
/// frontier is not contained in the `inf` class, the sets do not partition
/// the vertices, or the multiplicity differs from `c(D) - |A|`.
pub fn decompose(ctx: &ThetaContext<'_>) -> Result<ThetaDecomposition> {
    let dec = classify_all(ctx)?;
    let inf = dec.set_of(SignClass::Inf);
    if !dec.a.is_subset(inf) {
        return Err(Error::Invariant(format!("frontier {:?} not inside the inf class {:?}", dec.a, inf)));
    }
    let parts = [dec.d, dec.a, dec.n_minus.union(dec.n_plus), dec.p];
    let total: usize = parts.iter().map(|s| s.len()).sum();
    let union = parts.iter().fold(VertexSet::empty(), |acc, s| acc.union(*s));
    if total != ctx.all().len() || union != ctx.all() {
        return Err(Error::Invariant("D, A, N, P do not partition the vertices".into()));
    }
    if dec.m as i64 != dec.critical_components.len() as i64 - dec.a.len() as i64 {
        return Err(Error::Invariant(format!(
            "multiplicity {} but {} critical components and |A| = {}",
            dec.m,
            dec.critical_components.len(),
            dec.a.len()
        )));
    }
    Ok(dec)
}

pub fn decompose_at(g: &RatGraph, theta: &AlgebraicNumber) -> Result<ThetaDecomposition> {
    decompose(&ThetaContext::new(g, theta.clone()))
}

/// Deleting a frontier vertex `i` leaves every other class, and every finite
/// value, unchanged.
pub fn stability_check(ctx: &ThetaContext<'_>, i: usize) -> Result<Verdict> {
    let dec = classify_all(ctx)?;
    if !dec.a.contains(i) {
        return Err(Error::Precondition("vertex not in frontier of zero set".into()));
    }
    let all = ctx.all();
    let rest = all.without(i);
    let mut vs = Vec::new();
    for j in rest.iter() {
        let before = dec.class_of(j).expect("live vertex");
        let after = ctx.class_in(rest, j)?;
        vs.push(Verdict::ensure(before == after, || {
            format!("vertex {}: class {before} in G but {after} after deleting {}", j + 1, i + 1)
        }));
        if before == after && before.is_finite() {
            let ord = ctx.cmp_alpha(rest, j, all, j);
            vs.push(Verdict::ensure(ord == Some(Ordering::Equal), || {
                format!("vertex {}: value changes after deleting {} ({ord:?})", j + 1, i + 1)
            }));
        }
    }
    Ok(Verdict::all(vs))
}

/// Replacing the weights at a frontier vertex `j` keeps every value at `θ`
/// as long as each non-empty `S ⊆ A` still reaches `|S|+1` critical
/// components in the modified graph.
pub fn stability2_check(
    ctx: &ThetaContext<'_>,
    j: usize,
    r: Rational,
    lambdas: &[(usize, Rational)],
) -> Result<Verdict> {
    let g = ctx.graph();
    let dec = classify_all(ctx)?;
    if !dec.a.contains(j) {
        return Err(Error::Precondition("vertex not in frontier of zero set".into()));
    }
    if dec.a.len() > MAX_FRONTIER_SUBSETS {
        return Err(Error::Guard(format!("frontier has {} vertices", dec.a.len())));
    }
    for (k, w) in lambdas {
        if *k == j || !ctx.all().contains(*k) {
            return Err(Error::Precondition(format!("invalid edge partner {}", k + 1)));
        }
        if *w > Rational::from_integer(0.into()) {
            return Err(Error::Precondition("edge weight must be non-positive".into()));
        }
    }
    let g2 = g.with_vertex_weights(j, r, lambdas)?;
    let a_list: Vec<usize> = dec.a.iter().collect();
    for mask in 1u64..(1u64 << a_list.len()) {
        let s: VertexSet = a_list.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect();
        let touched = touched_components(&g2, &dec.critical_components, s);
        if touched <= s.len() {
            return Ok(Verdict::not_applicable(format!(
                "hypothesis not satisfied: S = {:?} reaches {touched} critical components",
                s
            )));
        }
    }
    let ctx2 = ThetaContext::new(&g2, ctx.theta());
    let mut vs = Vec::new();
    for i in ctx.all().iter() {
        let (before, after) = (ctx.class(i)?, ctx2.class(i)?);
        vs.push(Verdict::ensure(before == after, || {
            format!("vertex {}: class {before} before and {after} after reweighting {}", i + 1, j + 1)
        }));
        if before == after && before.is_finite() {
            let ord = match (ctx.alpha_at(ctx.all(), i), ctx2.alpha_at(ctx2.all(), i)) {
                (Some(a), Some(b)) => Some(cmp_derived(&ctx.theta.borrow(), &a, &b)),
                _ => None,
            };
            vs.push(Verdict::ensure(ord == Some(Ordering::Equal), || {
                format!("vertex {}: value changes after reweighting {}", i + 1, j + 1)
            }));
        }
    }
    Ok(Verdict::all(vs))
}

/// A connected graph whose vertices are all of class `0` has a simple root.
pub fn gallai_check(ctx: &ThetaContext<'_>) -> Result<Verdict> {
    let g = ctx.graph();
    if !g.is_connected() {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    let dec = classify_all(ctx)?;
    if dec.d != ctx.all() || ctx.all().is_empty() {
        return Err(Error::Precondition("graph is not critical at this θ".into()));
    }
    Ok(Verdict::ensure(dec.m == 1, || format!("critical connected graph with multiplicity {}", dec.m)))
}

/// `m_θ(G) = c(D) - |A|`.
pub fn multiplicity_formula_check(ctx: &ThetaContext<'_>) -> Result<Verdict> {
    let dec = classify_all(ctx)?;
    let rhs = dec.critical_components.len() as i64 - dec.a.len() as i64;
    Ok(Verdict::ensure(dec.m as i64 == rhs, || {
        format!("m = {} but c(D) - |A| = {} - {} = {rhs}", dec.m, dec.critical_components.len(), dec.a.len())
    }))
}

/// Every non-empty `S ⊆ A` has at least `|S|+1` neighbouring critical
/// components.
pub fn matched_condition_check(ctx: &ThetaContext<'_>) -> Result<Verdict> {
    let dec = classify_all(ctx)?;
    if dec.m == 0 {
        return Err(Error::Precondition("θ is not a root of the matching polynomial".into()));
    }
    if dec.a.len() > MAX_FRONTIER_SUBSETS {
        return Err(Error::Guard(format!("frontier has {} vertices", dec.a.len())));
    }
    let a_list: Vec<usize> = dec.a.iter().collect();
    let mut vs = vec![Verdict::Pass];
    for mask in 1u64..(1u64 << a_list.len()) {
        let s: VertexSet = a_list.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v).collect();
        let touched = touched_components(ctx.graph(), &dec.critical_components, s);
        vs.push(Verdict::ensure(touched > s.len(), || {
            format!("S = {:?} reaches only {touched} critical components", s)
        }));
    }
    Ok(Verdict::all(vs))
}

/// The six classes attached to an ordered pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairClasses {
    pub i_in_g: SignClass,
    pub j_in_g: SignClass,
    pub i_without_j: SignClass,
    pub j_without_i: SignClass,
}

/// The implications tying the contraction weight `λ_{i∼j}(θ)` to the classes
/// of `i` and `j` in `G`, `G\j` and `G\i`.
pub fn sign_table_check(ctx: &ThetaContext<'_>, i: usize, j: usize) -> Result<Verdict> {
    if i == j {
        return Err(Error::Precondition("vertices must be distinct".into()));
    }
    let w = contraction_weight_by_cross_difference(ctx.table(), i, j);
    sign_table_check_with(ctx, i, j, &w)
}

/// [`sign_table_check`] with a precomputed contraction weight for `(i, j)`.
pub fn sign_table_check_with(ctx: &ThetaContext<'_>, i: usize, j: usize, w: &ContractionWeight) -> Result<Verdict> {
    use SignClass::*;
    if i == j {
        return Err(Error::Precondition("vertices must be distinct".into()));
    }
    let all = ctx.all();
    let (gi, gj) = (all.without(i), all.without(j));
    let pc = PairClasses {
        i_in_g: ctx.class(i)?,
        j_in_g: ctx.class(j)?,
        i_without_j: ctx.class_in(gj, i)?,
        j_without_i: ctx.class_in(gi, j)?,
    };
    // den is μ(G\ij)², whose multiplicity is already cached
    let lambda = if w.num.is_zero() {
        ContractionClass::Zero
    } else {
        let den = 2 * ctx.multiplicity(all.without(i).without(j));
        match ctx.multiplicity_of(&w.num).cmp(&den) {
            Ordering::Less => ContractionClass::MinusInfinity,
            Ordering::Greater => ContractionClass::Zero,
            Ordering::Equal => ContractionClass::FiniteNegative,
        }
    };
    let (a, b) = (i + 1, j + 1);
    let mut vs = Vec::new();
    match lambda {
        ContractionClass::MinusInfinity => {
            vs.push(Verdict::ensure(pc.i_without_j == Inf && pc.j_without_i == Inf, || {
                format!("λ = -inf at ({a},{b}) but deleted-graph classes are {pc:?}")
            }));
            vs.push(Verdict::ensure(pc.i_in_g == pc.j_in_g, || {
                format!("λ = -inf at ({a},{b}) but classes in G differ: {pc:?}")
            }));
        }
        ContractionClass::Zero => {
            vs.push(Verdict::ensure(ctx.alpha_values_agree(all, i, gj, i)?, || {
                format!("λ = 0 at ({a},{b}) but α_{a} changes when {b} is deleted")
            }));
            vs.push(Verdict::ensure(ctx.alpha_values_agree(all, j, gi, j)?, || {
                format!("λ = 0 at ({a},{b}) but α_{b} changes when {a} is deleted")
            }));
        }
        ContractionClass::FiniteNegative => {
            let expect = |cond: bool, case: &str| {
                Verdict::ensure(cond, || format!("finite λ at ({a},{b}), case {case}: {pc:?}"))
            };
            match (pc.i_without_j, pc.j_without_i) {
                (Pos, Pos) | (Neg, Neg) => {
                    vs.push(expect(pc.i_in_g == pc.j_in_g && pc.i_in_g.is_finite(), "(a)"))
                }
                (Pos, Neg) => vs.push(expect(pc.i_in_g == Pos && pc.j_in_g == Neg, "(b)")),
                (Zero, Zero) => vs.push(expect(pc.i_in_g == Inf && pc.j_in_g == Inf, "(c)")),
                (Zero, Pos) => vs.push(expect(pc.i_in_g == Neg && pc.j_in_g == Inf, "(d)")),
                (Zero, Neg) => vs.push(expect(pc.i_in_g == Pos && pc.j_in_g == Inf, "(e)")),
                _ => {}
            }
            if pc.i_without_j == Inf {
                vs.push(expect(pc.i_in_g == Inf, "(f)"));
                vs.push(Verdict::ensure(ctx.alpha_values_agree(gi, j, all, j)?, || {
                    format!("finite λ at ({a},{b}), case (f): α_{b} changes when {a} is deleted")
                }));
            }
            vs.push(strict_orderings(ctx, i, j, &pc));
        }
    }
    Ok(if vs.is_empty() { Verdict::not_applicable("case not covered") } else { Verdict::all(vs) })
}

/// Strict value orderings for a finite negative contraction weight. Class
/// combinations outside the three listed cases are not covered.
fn strict_orderings(ctx: &ThetaContext<'_>, i: usize, j: usize, pc: &PairClasses) -> Verdict {
    use SignClass::*;
    let all = ctx.all();
    let (ai, ai_j) = ((all, i), (all.without(j), i));
    let (aj, aj_i) = ((all, j), (all.without(i), j));
    let lt = |x: &(VertexSet, usize), y: &(VertexSet, usize)| ctx.cmp_alpha(x.0, x.1, y.0, y.1) == Some(Ordering::Less);
    let (a, b) = (i + 1, j + 1);
    let fail = |case: &str| Verdict::fail(format!("ordering case {case} fails at ({a},{b}): {pc:?}"));
    let all_are = |c| pc.i_in_g == c && pc.j_in_g == c && pc.i_without_j == c && pc.j_without_i == c;
    if all_are(Pos) {
        // signs are already fixed by the classes
        if lt(&ai, &ai_j) && lt(&aj, &aj_i) { Verdict::Pass } else { fail("(a)") }
    } else if all_are(Neg) {
        if lt(&ai_j, &ai) && lt(&aj_i, &aj) { Verdict::Pass } else { fail("(b)") }
    } else if pc.i_without_j == Pos && pc.i_in_g == Pos && pc.j_without_i == Neg && pc.j_in_g == Neg {
        if lt(&ai_j, &ai) && lt(&aj, &aj_i) { Verdict::Pass } else { fail("(c)") }
    } else {
        Verdict::not_applicable("case not covered by the strict orderings")
    }
}

/// Root detection by the zero class, the inf class via neighbours, the
/// frontier inside the inf class, and preservation of `±` classes and values
/// when a frontier vertex is deleted.
pub fn internal_frontier_checks(ctx: &ThetaContext<'_>) -> Result<Verdict> {
    let g = ctx.graph();
    let dec = classify_all(ctx)?;
    let all = ctx.all();
    let mut vs = vec![Verdict::ensure((dec.m >= 1) == !dec.d.is_empty(), || {
        format!("m = {} but D = {:?}", dec.m, dec.d)
    })];
    for i in all.iter() {
        let is_inf = dec.class_of(i) == Some(SignClass::Inf);
        let mut zero_neighbor = false;
        for j in g.neighbors(i).iter() {
            if ctx.class_in(all.without(i), j)? == SignClass::Zero {
                zero_neighbor = true;
                break;
            }
        }
        vs.push(Verdict::ensure(is_inf == zero_neighbor, || {
            format!("vertex {}: inf = {is_inf} but zero neighbour after deletion = {zero_neighbor}", i + 1)
        }));
    }
    let inf = dec.set_of(SignClass::Inf);
    vs.push(Verdict::ensure(dec.a.is_subset(inf), || format!("frontier {:?} not inside {:?}", dec.a, inf)));
    for i in dec.a.iter() {
        let rest = all.without(i);
        for j in rest.iter() {
            let before = dec.class_of(j).expect("live vertex");
            let after = ctx.class_in(rest, j)?;
            let signed = |c: SignClass| matches!(c, SignClass::Neg | SignClass::Pos);
            if signed(before) || signed(after) {
                vs.push(Verdict::ensure(before == after, || {
                    format!("vertex {}: {before} in G, {after} after deleting frontier vertex {}", j + 1, i + 1)
                }));
            }
            if signed(before) && before == after {
                let ord = ctx.cmp_alpha(rest, j, all, j);
                vs.push(Verdict::ensure(ord == Some(Ordering::Equal), || {
                    format!("vertex {}: value moves after deleting frontier vertex {}", j + 1, i + 1)
                }));
            }
        }
    }
    Ok(Verdict::all(vs))
}

/// Every class-`0` vertex crosses from `-` just left of `θ` to `+` just right.
pub fn zero_crossing_check(ctx: &ThetaContext<'_>) -> Result<Verdict> {
    let dec = classify_all(ctx)?;
    let all = ctx.all();
    let mut vs = Vec::new();
    for i in dec.d.iter() {
        let (mu, mu_i) = (ctx.mu(all), ctx.mu(all.without(i)));
        let right = ctx.sign_right(&[&mu, &mu_i]);
        // (x-θ)^k flips sign across θ exactly when k is odd
        let parity = ctx.multiplicity(all) + ctx.multiplicity(all.without(i));
        let left = if parity % 2 == 1 { -right } else { right };
        vs.push(Verdict::ensure(left < 0 && right > 0, || {
            format!("vertex {}: signs {left} / {right} around θ", i + 1)
        }));
    }
    Ok(Verdict::all(vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::matchpoly::real_roots;

    fn q(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(Rational::from_integer(n.into()))
    }

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn classes_on_p3() {
        let g: RatGraph = path(3);
        assert_eq!(alpha_class(&g, 0, &q(0)).unwrap(), SignClass::Zero);
        assert_eq!(alpha_class(&g, 1, &q(0)).unwrap(), SignClass::Inf);
    }

    #[test]
    fn class_away_from_roots() {
        let g: RatGraph = complete(2);
        let sqrt2 = AlgebraicNumber::new(
            &RatPoly::from_ints(&[-2, 0, 1]),
            crate::Interval::new(Rational::from_integer(1.into()), Rational::from_integer(2.into())).unwrap(),
        )
        .unwrap();
        assert_eq!(alpha_class(&g, 0, &sqrt2).unwrap(), SignClass::Pos);
        let dec = decompose_at(&g, &q(5)).unwrap();
        assert!(dec.d.is_empty());
        assert_eq!(dec.n_plus, VertexSet::full(2));
    }

    #[test]
    fn decompositions_at_zero() {
        let dec = decompose_at(&star(3), &q(0)).unwrap();
        assert_eq!(dec.d, set(&[2, 3, 4]));
        assert_eq!(dec.a, set(&[1]));
        assert_eq!(dec.m, 2);
        let dec = decompose_at(&complete(3), &q(0)).unwrap();
        assert_eq!(dec.d, VertexSet::full(3));
        assert!(dec.a.is_empty());
        assert_eq!(dec.m, 1);
        let dec = decompose_at(&path(3), &q(0)).unwrap();
        assert_eq!((dec.d, dec.a, dec.m), (set(&[1, 3]), set(&[2]), 1));
    }

    #[test]
    fn stability_examples() {
        let g = star(3);
        let ctx = ThetaContext::new(&g, q(0));
        assert!(stability_check(&ctx, 0).unwrap().is_pass());
        let g = path(3);
        let ctx = ThetaContext::new(&g, q(0));
        assert!(stability_check(&ctx, 1).unwrap().is_pass());
        let g = complete(2);
        let ctx = ThetaContext::new(&g, q(1));
        assert!(stability_check(&ctx, 0).is_err());
    }

    #[test]
    fn stability2_examples() {
        let g = star(3);
        let ctx = ThetaContext::new(&g, q(0));
        let m2 = Rational::from_integer((-2).into());
        let zero = Rational::from_integer(0.into());
        let heavy: Vec<_> = (1..4).map(|k| (k, m2.clone())).collect();
        assert!(stability2_check(&ctx, 0, zero.clone(), &heavy).unwrap().is_pass());
        let cut = vec![(1, zero.clone()), (2, zero.clone())];
        assert!(matches!(stability2_check(&ctx, 0, zero.clone(), &cut).unwrap(), Verdict::NotApplicable { .. }));
        assert!(stability2_check(&ctx, 0, zero, &[]).unwrap().is_pass());
    }

    #[test]
    fn gallai_examples() {
        let g = complete(3);
        assert!(gallai_check(&ThetaContext::new(&g, q(0))).unwrap().is_pass());
        let g = path(3);
        let sqrt2 = real_roots(&g).unwrap().pop().unwrap();
        assert!(gallai_check(&ThetaContext::new(&g, sqrt2)).unwrap().is_pass());
        let g = star(3);
        assert!(gallai_check(&ThetaContext::new(&g, q(0))).is_err());
    }

    #[test]
    fn formula_and_matched_condition() {
        for g in [star(3), complete(3), path(3)] {
            let ctx = ThetaContext::new(&g, q(0));
            assert!(multiplicity_formula_check(&ctx).unwrap().is_pass());
            assert!(matched_condition_check(&ctx).unwrap().is_pass());
        }
        let g = complete(2);
        let ctx = ThetaContext::new(&g, q(3));
        assert!(multiplicity_formula_check(&ctx).unwrap().is_pass());
        assert!(matched_condition_check(&ctx).is_err());
    }

    #[test]
    fn sign_table_examples() {
        let g = path(3);
        let ctx = ThetaContext::new(&g, q(0));
        assert!(sign_table_check(&ctx, 0, 2).unwrap().is_pass());
        let g = complete(2);
        assert!(sign_table_check(&ThetaContext::new(&g, q(0)), 0, 1).unwrap().is_pass());
        let g = edgeless(2);
        assert!(sign_table_check(&ThetaContext::new(&g, q(0)), 0, 1).unwrap().is_pass());
    }

    #[test]
    fn frontier_checks() {
        for g in [star(3), path(3), cycle(5)] {
            let ctx = ThetaContext::new(&g, q(0));
            assert!(internal_frontier_checks(&ctx).unwrap().is_pass());
            assert!(zero_crossing_check(&ctx).unwrap().is_pass());
        }
        let g = complete(2);
        assert!(internal_frontier_checks(&ThetaContext::new(&g, q(7))).unwrap().is_pass());
    }

    #[test]
    fn decomposition_json_shape() {
        let dec = decompose_at(&path(3), &q(0)).unwrap();
        let v = dec.to_json();
        assert_eq!(v["D"], json!([1, 3]));
        assert_eq!(v["A"], json!([2]));
        assert_eq!(v["classes"]["2"], json!("inf"));
        assert_eq!(v["m"], json!(1));
    }
}
