//! Exact rational polynomial kernel: gcds, Sturm chains, root counting and
//! isolation, and real algebraic numbers given by isolating intervals.

mod algebraic;
mod poly;

pub use algebraic::{sign, AlgebraicNumber};
pub use poly::Polynomial;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{RatPoly, Rational};

/// Monic greatest common divisor.
pub fn gcd<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Result<Polynomial<T>> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
    }
    let (mut a, mut b) = (p.monic(), q.monic());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    Ok(a)
}

/// `p / gcd(p, p')`, made monic: same roots as `p`, all simple.
pub fn squarefree_part<T: Scalar>(p: &Polynomial<T>) -> Result<Polynomial<T>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree part of zero"));
    }
    let g = gcd(p, &p.derivative())?;
    Ok(p.exact_div(&g).monic())
}

/// `p, p', -rem(p, p'), ...` down to the last non-zero remainder.
///
/// Entries are rescaled by positive constants (leading coefficient ±1),
/// which leaves every sign variation count unchanged.
#[derive(Clone, PartialEq)]
pub struct SturmChain<T> {
    polys: Vec<Polynomial<T>>,
}

impl<T: Scalar> fmt::Debug for SturmChain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.polys).finish()
    }
}

impl<T: Scalar> SturmChain<T> {
    pub fn new(p: &Polynomial<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial("Sturm chain of zero"));
        }
        let mut polys = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            polys.push(normalize_positive(&d));
            loop {
                let n = polys.len();
                let (_, r) = polys[n - 2].div_rem(&polys[n - 1]);
                if r.is_zero() {
                    break;
                }
                polys.push(normalize_positive(&-r));
            }
        }
        Ok(SturmChain { polys })
    }

    pub fn polys(&self) -> &[Polynomial<T>] {
        &self.polys
    }

    /// Sign changes in the chain evaluated at `x`, zeros skipped.
    pub fn variations(&self, x: &T) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.polys {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in the open interval `(lo, hi)`.
    pub fn count(&self, lo: &T, hi: &T) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

fn normalize_positive<T: Scalar>(p: &Polynomial<T>) -> Polynomial<T> {
    match p.leading() {
        Some(lc) => p.scale(&(T::one() / lc.abs())),
        None => p.clone(),
    }
}

/// Open interval with rational endpoints, `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInterval(format!("({lo}, {hi}) is empty")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Number of distinct real roots of `p` in the open interval.
pub fn count_roots(p: &RatPoly, iv: &Interval) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("count_roots"));
    }
    for e in [iv.lo(), iv.hi()] {
        if p.eval(e).is_zero() {
            return Err(Error::EndpointIsRoot(e.to_string()));
        }
    }
    Ok(SturmChain::new(p)?.count(iv.lo(), iv.hi()))
}

/// Strict upper bound on the absolute value of every root (Cauchy).
pub fn cauchy_bound(p: &RatPoly) -> Rational {
    let Some(lc) = p.leading() else { return Rational::one() };
    let n = p.coeffs().len() - 1;
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| (c / lc).abs())
        .fold(Rational::zero(), |m, c| if c > m { c } else { m });
    Rational::one() + max
}

/// Every distinct real root of `p`, ascending.
pub fn isolate_roots(p: &RatPoly) -> Result<Vec<AlgebraicNumber>> {
    let b = cauchy_bound(p) + Rational::one();
    isolate_roots_in(p, &Interval::new(-b.clone(), b)?)
}

/// Distinct real roots of `p` inside `iv`, ascending, by bisection over
/// Sturm counts of the square-free part. Endpoints must not be roots.
pub fn isolate_roots_in(p: &RatPoly, iv: &Interval) -> Result<Vec<AlgebraicNumber>> {
    let sqf = squarefree_part(p)?;
    if sqf.is_constant() {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sqf)?;
    let total = count_roots(&sqf, iv)?;
    let mut out = Vec::with_capacity(total);
    // depth-first, left half first, so output is ascending
    let mut stack = vec![(iv.lo.clone(), iv.hi.clone(), total)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(AlgebraicNumber::new_unchecked(sqf.clone(), Interval { lo, hi })),
            _ => {
                let mut mid = (&lo + &hi) / Rational::from_integer(2.into());
                while sqf.eval(&mid).is_zero() {
                    mid = (&lo + &mid) / Rational::from_integer(2.into());
                }
                let left = chain.count(&lo, &mid);
                stack.push((mid.clone(), hi, n - left));
                stack.push((lo, mid, left));
            }
        }
    }
    Ok(out)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

pub fn sign_of(r: &Rational) -> Ordering {
    r.cmp(&Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn iv(lo: Rational, hi: Rational) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        // x^3-2x = x*x^2 + (-2x); x^2 = (-2x)(-x/2) + 0 -> x
        assert_eq!(gcd(&p(&[0, -2, 0, 1]), &p(&[0, 0, 1])).unwrap(), p(&[0, 1]));
        assert_eq!(gcd(&p(&[1, 0, 1]), &p(&[0, 1])).unwrap(), p(&[1]));
        assert!(gcd(&RatPoly::zero(), &RatPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p(&[0, 0, -3, 0, 1])).unwrap(), p(&[0, -3, 0, 1]));
        assert_eq!(squarefree_part(&p(&[-1, 0, 1])).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(squarefree_part(&p(&[-1, 3, -3, 1])).unwrap(), p(&[-1, 1]));
        assert!(squarefree_part(&RatPoly::zero()).is_err());
    }

    #[test]
    fn sturm_chain_degrees_strictly_decrease() {
        let c = SturmChain::new(&p(&[1, -4, 0, 3, 0, 1])).unwrap();
        let degs: Vec<_> = c.polys().iter().map(|p| p.degree().unwrap()).collect();
        assert!(degs.windows(2).all(|w| w[0] > w[1]), "{degs:?}");
    }

    #[test]
    fn count_roots_examples() {
        assert_eq!(count_roots(&p(&[-1, 0, 1]), &iv(q(-2, 1), q(2, 1))).unwrap(), 2);
        assert_eq!(count_roots(&p(&[0, -3, 0, 1]), &iv(q(1, 1), q(2, 1))).unwrap(), 1);
        assert_eq!(count_roots(&p(&[1, 0, 1]), &iv(q(-10, 1), q(10, 1))).unwrap(), 0);
        assert!(matches!(
            count_roots(&p(&[-1, 0, 1]), &iv(q(-1, 1), q(2, 1))),
            Err(Error::EndpointIsRoot(_))
        ));
    }

    #[test]
    fn isolate_examples() {
        let r = isolate_roots(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].cmp_rational(&q(-1, 1)), Ordering::Equal);
        assert_eq!(r[1].cmp_rational(&q(1, 1)), Ordering::Equal);

        let r = isolate_roots(&p(&[0, -2, 0, 1])).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0].cmp_rational(&q(-141, 100)), Ordering::Less);
        assert_eq!(r[0].cmp_rational(&q(-142, 100)), Ordering::Greater);
        assert_eq!(r[1].cmp_rational(&q(0, 1)), Ordering::Equal);
        assert_eq!(r[2].cmp_rational(&q(141, 100)), Ordering::Greater);

        let r = isolate_roots(&p(&[0, 0, 1])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].witness(), &p(&[0, 1]));
        assert!(isolate_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn intervals_are_disjoint_and_sorted() {
        // (x-1)(x-2)(x-3)(x-1/2)
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &(&p(&[-3, 1]) * &RatPoly::linear(q(1, 2)));
        let r = isolate_roots(&f).unwrap();
        assert_eq!(r.len(), 4);
        for w in r.windows(2) {
            assert!(w[0].interval().hi() <= w[1].interval().lo());
        }
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }
}
