use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{count_roots, format_rational, gcd, squarefree_part, Interval, SturmChain};
use crate::error::{Error, Result};
use crate::{RatPoly, Rational};

/// A real algebraic number: the unique root of a monic square-free witness
/// polynomial inside an open interval with rational endpoints.
///
/// Endpoints are never roots of the witness. Refinement returns a new value
/// with a narrower interval around the same root.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    witness: RatPoly,
    interval: Interval,
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

impl AlgebraicNumber {
    /// Checked constructor; the witness is reduced to its square-free part.
    pub fn new(witness: &RatPoly, interval: Interval) -> Result<Self> {
        let w = squarefree_part(witness)?;
        let n = count_roots(&w, &interval)?;
        if n != 1 {
            return Err(Error::InvalidInterval(format!(
                "{interval} holds {n} roots of {w}, expected exactly one"
            )));
        }
        Ok(AlgebraicNumber { witness: w, interval })
    }

    pub(crate) fn new_unchecked(witness: RatPoly, interval: Interval) -> Self {
        AlgebraicNumber { witness, interval }
    }

    pub fn from_rational(r: Rational) -> Self {
        let interval = Interval { lo: &r - Rational::one(), hi: &r + Rational::one() };
        AlgebraicNumber { witness: RatPoly::linear(r), interval }
    }

    pub fn witness(&self) -> &RatPoly {
        &self.witness
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// The exact value when the root is known to be rational.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.witness.degree() == Some(1)).then(|| -self.witness.coeffs()[0].clone())
    }

    /// Nearest double, roughly; for display only.
    pub fn approx(&self) -> f64 {
        match self.as_rational() {
            Some(r) => super::rational_to_f64(&r),
            None => {
                let fine = self.refine_to_width(&Rational::new(1.into(), (1u64 << 52).into()));
                super::rational_to_f64(&fine.interval.midpoint()) + 0.0
            }
        }
    }

    /// One halving step. Split points avoid the roots of `avoid` by moving
    /// towards the left endpoint; a split point that turns out to be the root
    /// itself collapses the witness to a linear one.
    fn step(&self, avoid: Option<&RatPoly>) -> Self {
        if let Some(r) = self.as_rational() {
            let half = self.interval.width() / Rational::from_integer(4.into());
            return AlgebraicNumber {
                witness: self.witness.clone(),
                interval: Interval { lo: &r - &half, hi: &r + &half },
            };
        }
        let (lo, hi) = (&self.interval.lo, &self.interval.hi);
        let mut mid = self.interval.midpoint();
        loop {
            if self.witness.eval(&mid).is_zero() {
                let half = (hi - lo) / Rational::from_integer(4.into());
                let interval = Interval { lo: &mid - &half, hi: &mid + &half };
                return AlgebraicNumber { witness: RatPoly::linear(mid), interval };
            }
            if avoid.is_some_and(|a| a.eval(&mid).is_zero()) {
                mid = (lo + &mid) / two();
                continue;
            }
            break;
        }
        // one simple root inside, endpoints non-roots: the half with a sign
        // change holds it
        let interval = if sign(&self.witness.eval(lo)) != sign(&self.witness.eval(&mid)) {
            Interval { lo: lo.clone(), hi: mid }
        } else {
            Interval { lo: mid, hi: hi.clone() }
        };
        AlgebraicNumber { witness: self.witness.clone(), interval }
    }

    /// Halves the isolating interval.
    pub fn bisect(&self) -> Self {
        self.step(None)
    }

    /// Sign of `p` here when the interval alone proves it: `|p(c)|` at the
    /// midpoint `c` exceeds a bound on `|p'|` over the interval times half
    /// its width. `None` means undecided, not zero.
    fn interval_sign(&self, p: &RatPoly) -> Option<i8> {
        let (lo, hi) = (&self.interval.lo, &self.interval.hi);
        let c = self.interval.midpoint();
        let v = p.eval(&c);
        if v.is_zero() {
            return None;
        }
        let m = lo.abs().max(hi.abs());
        let mut slope = Rational::zero();
        let mut power = Rational::one();
        for (k, a) in p.coeffs().iter().enumerate().skip(1) {
            slope += a.abs() * Rational::from_integer(k.into()) * &power;
            power *= &m;
        }
        let reach = slope * (hi - lo) / two();
        (v.abs() > reach).then(|| sign(&v))
    }

    /// Sign of `p` here when it can be proved without a gcd from the
    /// current interval; narrow intervals decide more often.
    pub fn nonzero_sign(&self, p: &RatPoly) -> Option<i8> {
        if let Some(r) = self.as_rational() {
            let v = p.eval(&r);
            return (!v.is_zero()).then(|| sign(&v));
        }
        self.interval_sign(p)
    }

    /// Does `q` vanish at this number? `q` must be non-zero.
    pub fn is_root_of(&self, q: &RatPoly) -> bool {
        assert!(!q.is_zero(), "is_root_of: zero polynomial");
        if let Some(r) = self.as_rational() {
            return q.eval(&r).is_zero();
        }
        if self.nonzero_sign(q).is_some() {
            return false;
        }
        let g = gcd(q, &self.witness).expect("non-zero inputs");
        if g.is_constant() {
            return false;
        }
        // endpoints are non-roots of the witness, hence of g
        divisor_vanishes_in(&g, &self.interval)
    }

    /// Narrows the interval until `avoid` has no root in the closed interval
    /// other than possibly this number. Endpoints end up as non-roots of
    /// `avoid`.
    pub fn refine(&self, avoid: &RatPoly) -> Self {
        assert!(!avoid.is_zero(), "refine: zero polynomial");
        let allowed = usize::from(self.is_root_of(avoid));
        let chain = SturmChain::new(avoid).expect("non-zero");
        let mut cur = self.clone();
        loop {
            let (lo, hi) = (&cur.interval.lo, &cur.interval.hi);
            if !avoid.eval(lo).is_zero()
                && !avoid.eval(hi).is_zero()
                && chain.count(lo, hi) == allowed
            {
                return cur;
            }
            cur = cur.step(Some(avoid));
        }
    }

    /// Bisects until the interval is at most `width` wide.
    pub fn refine_to_width(&self, width: &Rational) -> Self {
        let mut cur = self.clone();
        while &cur.interval.width() > width {
            cur = cur.bisect();
        }
        cur
    }

    /// Sign of `p` at this number: -1, 0 or 1.
    pub fn sign_at(&self, p: &RatPoly) -> i8 {
        if let Some(s) = self.nonzero_sign(p) {
            return s;
        }
        if self.is_root_of(p) {
            return 0;
        }
        // p(θ) ≠ 0, so the bound decides once the interval is narrow enough
        let mut cur = self.bisect();
        loop {
            if let Some(s) = cur.nonzero_sign(p) {
                return s;
            }
            cur = cur.bisect();
        }
    }

    /// Sign of non-zero `p` on `(θ, θ+ε)`: with `m` the multiplicity here,
    /// `p = (x-θ)^m h` and the sign is that of `h(θ)`, i.e. of `p⁽ᵐ⁾(θ)`.
    pub fn sign_just_right(&self, p: &RatPoly) -> i8 {
        let m = self.multiplicity_at(p);
        let mut d = p.clone();
        for _ in 0..m {
            d = d.derivative();
        }
        self.sign_at(&d)
    }

    /// Sign of `p` just right of this number (the sign on `(θ, θ+ε)`).
    /// Returns the refined number together with the sign so callers can keep
    /// the narrower interval.
    pub fn sign_right_of(&self, p: &RatPoly) -> (Self, i8) {
        let r = self.refine(p);
        let s = sign(&p.eval(&r.interval.hi));
        (r, s)
    }

    /// Multiplicity of this number as a root of `p` (non-zero).
    pub fn multiplicity_at(&self, p: &RatPoly) -> usize {
        assert!(!p.is_zero(), "multiplicity_at: zero polynomial");
        let mut k = 0;
        let mut q = p.clone();
        loop {
            if self.nonzero_sign(&q).is_some() {
                return k;
            }
            let g = gcd(&q, &self.witness).expect("non-zero inputs");
            if g.is_constant() || !divisor_vanishes_in(&g, &self.interval) {
                return k;
            }
            k += 1;
            q = q.exact_div(&g);
        }
    }

    /// Exact order against a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(r);
        }
        if self.interval.contains(r) && self.witness.eval(r).is_zero() {
            return Ordering::Equal;
        }
        let mut cur = self.clone();
        loop {
            if r <= &cur.interval.lo {
                return Ordering::Greater;
            }
            if r >= &cur.interval.hi {
                return Ordering::Less;
            }
            cur = cur.bisect();
        }
    }

    /// Exact order between two algebraic numbers; equality is detected
    /// through the gcd of the witnesses.
    pub fn cmp_algebraic(&self, other: &Self) -> Ordering {
        if let Some(r) = other.as_rational() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.cmp_rational(&r).reverse();
        }
        let lo = self.interval.lo.clone().max(other.interval.lo.clone());
        let hi = self.interval.hi.clone().min(other.interval.hi.clone());
        if lo < hi {
            let g = gcd(&self.witness, &other.witness).expect("non-zero");
            if !g.is_constant() {
                let overlap = Interval { lo, hi };
                if divisor_vanishes_in(&g, &overlap) {
                    return Ordering::Equal;
                }
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.interval.hi <= b.interval.lo {
                return Ordering::Less;
            }
            if b.interval.hi <= a.interval.lo {
                return Ordering::Greater;
            }
            a = a.bisect();
            b = b.bisect();
        }
    }
}

/// Root test for a divisor `g` of a witness on an interval where the
/// witness has at most one root, simple, and neither endpoint is a root:
/// `g` then has a root inside iff it changes sign.
fn divisor_vanishes_in(g: &RatPoly, iv: &Interval) -> bool {
    sign(&g.eval(&iv.lo)) != sign(&g.eval(&iv.hi))
}

/// `-1`, `0` or `1`.
pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {}", self.witness, self.interval)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", format_rational(&r)),
            None => write!(f, "{:.6} (root of {} in {})", self.approx(), self.witness, self.interval),
        }
    }
}
