//! Extreme zeros: criticality and simplicity, strict monotonicity under
//! weakening an edge, and two-sided bounds on the largest zero through the
//! star at a maximal-offset vertex.

use std::cmp::Ordering;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::classify::{algebraic_to_json, decompose, ThetaContext};
use crate::error::{Error, Result};
use crate::exact::{format_rational, AlgebraicNumber};
use crate::graph::WeightedGraph;
use crate::matchpoly::{heilmann_lieb_bound, matching_polynomial, real_roots};
use crate::verdict::Verdict;
use crate::{RatGraph, RatPoly, Rational};

#[derive(Clone, Debug)]
pub struct ZeroBounds {
    pub z_g: AlgebraicNumber,
    pub z_star: AlgebraicNumber,
    pub b: Rational,
    pub r_max: Rational,
    /// The vertex whose star was kept.
    pub center: usize,
}

impl ZeroBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "z_G": algebraic_to_json(&self.z_g),
            "z_star": algebraic_to_json(&self.z_star),
            "B": format_rational(&self.b),
            "r_max": format_rational(&self.r_max),
            "center": self.center + 1,
        })
    }
}

fn require_connected(g: &RatGraph) -> Result<()> {
    if g.order() == 0 || !g.is_connected() {
        return Err(Error::Precondition("graph must be connected and non-empty".into()));
    }
    Ok(())
}

pub fn largest_root(g: &RatGraph) -> Result<AlgebraicNumber> {
    real_roots(g)?.pop().ok_or_else(|| Error::Precondition("matching polynomial has no roots".into()))
}

/// At the smallest and the largest zero of a connected graph every vertex
/// is of class `0` and the zero is simple.
pub fn extreme_zero_check(g: &RatGraph) -> Result<Verdict> {
    require_connected(g)?;
    let roots = real_roots(g)?;
    let extremes = [roots.first(), roots.last()];
    let mut vs = Vec::new();
    for theta in extremes.into_iter().flatten() {
        let ctx = ThetaContext::new(g, theta.clone());
        let dec = decompose(&ctx)?;
        vs.push(Verdict::ensure(dec.d == g.vertices(), || {
            format!("at {theta} only {:?} are of class 0", dec.d)
        }));
        vs.push(Verdict::ensure(dec.m == 1, || format!("extreme zero {theta} has multiplicity {}", dec.m)));
    }
    Ok(Verdict::all(vs))
}

/// Raising `λ_ij` to `λ_new` (closer to 0) strictly lowers the largest zero.
pub fn edge_monotonicity_check(g: &RatGraph, i: usize, j: usize, lambda_new: &Rational) -> Result<Verdict> {
    require_connected(g)?;
    if i == j || !g.vertices().contains(i) || !g.vertices().contains(j) {
        return Err(Error::Precondition("need two distinct vertices of the graph".into()));
    }
    let old = g.weight(i, j);
    if !(old < lambda_new && lambda_new <= &Rational::zero()) {
        return Err(Error::Precondition(format!(
            "need λ_ij < λ_new ≤ 0, got {} and {}",
            format_rational(old),
            format_rational(lambda_new)
        )));
    }
    let weaker = g.with_edge_weight(i, j, lambda_new.clone())?;
    let (z, z_new) = (largest_root(g)?, largest_root(&weaker)?);
    Ok(Verdict::ensure(z_new.cmp_algebraic(&z) == Ordering::Less, || {
        format!("largest zero {z_new} after weakening edge {}-{} is not below {z}", i + 1, j + 1)
    }))
}

/// Lowest vertex attaining the largest offset.
pub fn max_offset_vertex(g: &RatGraph) -> Option<usize> {
    g.vertices().iter().fold(None, |best: Option<usize>, v| match best {
        Some(b) if g.offset(b) >= g.offset(v) => Some(b),
        _ => Some(v),
    })
}

/// `r_max < z* ≤ z_G`, `(z_G - r_max)² < 4B`, the fixed-point equation for
/// `z*`, and with all offsets zero `z_G² ≥ max_j Σ_k -λ_jk`. Here `z*` is the
/// largest zero of the graph keeping only the edges at `center`.
pub fn star_bounds_check_at(g: &RatGraph, center: usize) -> Result<(ZeroBounds, Verdict)> {
    require_connected(g)?;
    if g.order() < 3 {
        return Err(Error::Precondition("need at least three vertices".into()));
    }
    let r_max = g.vertices().iter().map(|v| g.offset(v).clone()).max().expect("non-empty");
    if !g.vertices().contains(center) || g.offset(center) != &r_max {
        return Err(Error::Precondition(format!("vertex {} does not attain the largest offset", center + 1)));
    }
    let star_edges: Vec<(usize, usize, Rational)> =
        g.neighbors(center).iter().map(|k| (center, k, g.weight(center, k).clone())).collect();
    let star = WeightedGraph::from_edges(g.offsets_vec(), &star_edges)?.restrict(g.vertices());
    let z_g = largest_root(g)?;
    let z_star = largest_root(&star)?;
    let b = heilmann_lieb_bound(g).b;

    let four_b = &b * Rational::from_integer(4.into());
    let gap = &RatPoly::linear(r_max.clone()).pow(2) - &RatPoly::constant(four_b);
    let mut vs = vec![
        Verdict::ensure(z_star.cmp_rational(&r_max) == Ordering::Greater, || {
            format!("z* = {z_star} is not above r_max = {r_max}")
        }),
        Verdict::ensure(z_star.cmp_algebraic(&z_g) != Ordering::Greater, || format!("z* = {z_star} exceeds z_G = {z_g}")),
        Verdict::ensure(z_g.cmp_rational(&r_max) == Ordering::Greater && z_g.sign_at(&gap) < 0, || {
            format!("(z_G - r_max)^2 < 4B fails for z_G = {z_g}, B = {b}")
        }),
    ];

    // z* - r_i = Σ_j (-λ_ij)/(z* - r_j) with denominators cleared
    let nbrs: Vec<usize> = g.neighbors(center).iter().collect();
    let prod_except = |skip: Option<usize>| {
        nbrs.iter()
            .filter(|&&k| Some(k) != skip)
            .fold(RatPoly::one(), |acc, &k| &acc * &RatPoly::linear(g.offset(k).clone()))
    };
    let mut fixed = &RatPoly::linear(g.offset(center).clone()) * &prod_except(None);
    for &j in &nbrs {
        fixed = &fixed + &prod_except(Some(j)).scale(g.weight(center, j));
    }
    vs.push(Verdict::ensure(z_star.multiplicity_at(&fixed) >= 1, || format!("z* = {z_star} misses the fixed-point equation")));

    if g.vertices().iter().all(|v| g.offset(v).is_zero()) {
        let degree_sum = g
            .vertices()
            .iter()
            .map(|j| g.neighbors(j).iter().fold(Rational::zero(), |acc, k| acc - g.weight(j, k)))
            .max()
            .expect("non-empty");
        let lower = &RatPoly::from_ints(&[0, 0, 1]) - &RatPoly::constant(degree_sum.clone());
        vs.push(Verdict::ensure(z_g.sign_at(&lower) >= 0, || {
            format!("z_G^2 = {z_g}^2 is below max weighted degree {degree_sum}")
        }));
    }
    Ok((ZeroBounds { z_g, z_star, b, r_max, center }, Verdict::all(vs)))
}

pub fn star_bounds_check(g: &RatGraph) -> Result<(ZeroBounds, Verdict)> {
    let center = max_offset_vertex(g).ok_or_else(|| Error::Precondition("empty graph".into()))?;
    star_bounds_check_at(g, center)
}

/// `μ` of the star at `center`, kept for reference in reports.
pub fn star_polynomial(g: &RatGraph, center: usize) -> Result<RatPoly> {
    let star_edges: Vec<(usize, usize, Rational)> =
        g.neighbors(center).iter().map(|k| (center, k, g.weight(center, k).clone())).collect();
    Ok(matching_polynomial(&WeightedGraph::from_edges(g.offsets_vec(), &star_edges)?.restrict(g.vertices())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn extreme_zeros() {
        assert!(extreme_zero_check(&complete(3)).unwrap().is_pass());
        assert!(extreme_zero_check(&star(3)).unwrap().is_pass());
        assert!(extreme_zero_check(&RatGraph::edgeless(vec![q(2, 1)]).unwrap()).unwrap().is_pass());
        assert!(extreme_zero_check(&edgeless(2)).is_err());
    }

    #[test]
    fn monotonicity() {
        assert!(edge_monotonicity_check(&complete(2), 0, 1, &q(-1, 2)).unwrap().is_pass());
        assert!(edge_monotonicity_check(&complete(3), 0, 1, &q(0, 1)).unwrap().is_pass());
        assert!(edge_monotonicity_check(&complete(3), 0, 1, &q(-1, 1)).is_err());
    }

    #[test]
    fn star_bounds() {
        let (b, v) = star_bounds_check(&star(3)).unwrap();
        assert!(v.is_pass());
        assert_eq!(b.z_star.cmp_algebraic(&b.z_g), Ordering::Equal);
        // the centre sees three unit edges; the two largest sum to 2
        assert_eq!(b.b, q(2, 1));

        let (b, v) = star_bounds_check(&complete(3)).unwrap();
        assert!(v.is_pass());
        assert_eq!(b.z_star.multiplicity_at(&RatPoly::from_ints(&[-2, 0, 1])), 1);
        assert_eq!(b.z_g.multiplicity_at(&RatPoly::from_ints(&[-3, 0, 1])), 1);

        let (b, v) = star_bounds_check_at(&path(3), 1).unwrap();
        assert!(v.is_pass());
        assert_eq!(b.z_star.cmp_algebraic(&b.z_g), Ordering::Equal);
        assert!(star_bounds_check(&complete(2)).is_err());
    }
}
