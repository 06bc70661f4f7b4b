//! Certified real arithmetic.
//!
//! [`CertifiedReal`] keeps values exact wherever the closure properties allow
//! (rationals, and quadratic irrationals `a + b sqrt(D)` over one fixed
//! square-free `D`) and falls back to adaptively evaluated expression trees
//! otherwise. Floors and comparisons are never decided by floating point:
//! exact variants use integer arithmetic, adaptive ones escalate interval
//! precision until the answer is certified or a cap is hit.

mod expr;
mod interval;
mod parse;

pub use expr::Expr;
pub use interval::{EvalError, Interval};
pub use parse::parse_real;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use interval::{rat_to_f64, Rat};

/// Precision-escalation cap, in bits. Doubling from 64 bits up to here covers
/// every boundary gap reachable by the algebraic numbers this crate handles.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// An exactly represented real number.
#[derive(Clone)]
pub enum CertifiedReal {
    /// Exact rational in lowest terms.
    Rational(BigRational),
    /// `a + b sqrt(d)` with `b != 0` and `d` square-free, `d >= 2`.
    Quadratic { a: BigRational, b: BigRational, d: u64 },
    /// Expression tree evaluated by interval refinement.
    Adaptive(Arc<Expr>),
}

use CertifiedReal::{Adaptive, Quadratic, Rational};

fn quad(a: Rat, b: Rat, d: u64) -> CertifiedReal {
    if b.is_zero() {
        Rational(a)
    } else {
        Quadratic { a, b, d }
    }
}

/// Sign of `a + b sqrt(d)` by exact integer arithmetic.
fn quad_sign(a: &Rat, b: &Rat, d: u64) -> Ordering {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Ordering::Equal,
        (false, true) => a.cmp(&Rat::zero()),
        (true, false) => b.cmp(&Rat::zero()),
        (false, false) => {
            let sa = a.is_positive();
            let sb = b.is_positive();
            if sa && sb {
                return Ordering::Greater;
            }
            if !sa && !sb {
                return Ordering::Less;
            }
            // Opposite signs: compare a^2 with b^2 d (equality is impossible
            // for square-free d >= 2).
            let lhs = a * a;
            let rhs = b * b * Rat::from_integer(BigInt::from(d));
            debug_assert_ne!(lhs, rhs, "sqrt({d}) cannot be rational");
            if sa {
                lhs.cmp(&rhs)
            } else {
                rhs.cmp(&lhs)
            }
        }
    }
}

/// Square-free decomposition `n = f^2 * k`; `None` when `n` is too large to
/// factor by trial division at desk scale.
fn squarefree_decompose(n: &BigInt) -> Option<(BigInt, u64)> {
    debug_assert!(!n.is_negative());
    let n_u64 = n.to_u64()?;
    if n_u64 == 0 {
        return Some((BigInt::zero(), 1));
    }
    let mut rem = n_u64;
    let mut f: u64 = 1;
    let mut k: u64 = 1;
    let mut p: u64 = 2;
    while p.saturating_mul(p) <= rem {
        if rem % p == 0 {
            let mut e = 0u32;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            f = f.checked_mul(p.pow(e / 2))?;
            if e % 2 == 1 {
                k = k.checked_mul(p)?;
            }
        }
        p += 1;
    }
    if rem > 1 {
        k = k.checked_mul(rem)?;
    }
    Some((BigInt::from(f), k))
}

impl CertifiedReal {
    pub fn from_integer(n: i64) -> Self {
        Rational(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(Rat::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Rational(q)
    }

    /// sqrt(d) for an integer d >= 0, kept exact via square-free decomposition.
    pub fn sqrt_int(d: u64) -> Self {
        CertifiedReal::from_integer(d as i64)
            .sqrt()
            .expect("nonnegative")
    }

    pub fn zero() -> Self {
        CertifiedReal::from_integer(0)
    }

    pub fn one() -> Self {
        CertifiedReal::from_integer(1)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Rational(q) => Some(q),
            _ => None,
        }
    }

    /// True for the exactly represented variants (rational or quadratic).
    pub fn is_exact(&self) -> bool {
        !matches!(self, Adaptive(_))
    }

    pub fn to_expr(&self) -> Arc<Expr> {
        match self {
            Rational(q) => Arc::new(Expr::Const(q.clone())),
            Quadratic { a, b, d } => Arc::new(Expr::Add(
                Arc::new(Expr::Const(a.clone())),
                Arc::new(Expr::Mul(
                    Arc::new(Expr::Const(b.clone())),
                    Arc::new(Expr::Sqrt(Arc::new(Expr::Const(Rat::from_integer(
                        BigInt::from(*d),
                    ))))),
                )),
            )),
            Adaptive(e) => e.clone(),
        }
    }

    /// Force the value onto the adaptive path (used for backend cross-checks).
    pub fn to_adaptive(&self) -> Self {
        Adaptive(self.to_expr())
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational(x), Rational(y)) => Rational(x + y),
            (Rational(r), Quadratic { a, b, d }) | (Quadratic { a, b, d }, Rational(r)) => {
                quad(a + r, b.clone(), *d)
            }
            (Quadratic { a: a1, b: b1, d: d1 }, Quadratic { a: a2, b: b2, d: d2 })
                if d1 == d2 =>
            {
                quad(a1 + a2, b1 + b2, *d1)
            }
            _ => Adaptive(Arc::new(Expr::Add(self.to_expr(), other.to_expr()))),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational(q) => Rational(-q),
            Quadratic { a, b, d } => Quadratic { a: -a, b: -b, d: *d },
            Adaptive(e) => Adaptive(Arc::new(Expr::Neg(e.clone()))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Rational(x), Rational(y)) => Rational(x * y),
            (Rational(r), Quadratic { a, b, d }) | (Quadratic { a, b, d }, Rational(r)) => {
                quad(a * r, b * r, *d)
            }
            (Quadratic { a: a1, b: b1, d: d1 }, Quadratic { a: a2, b: b2, d: d2 })
                if d1 == d2 =>
            {
                let dd = Rat::from_integer(BigInt::from(*d1));
                quad(a1 * a2 + b1 * b2 * &dd, a1 * b2 + a2 * b1, *d1)
            }
            _ => Adaptive(Arc::new(Expr::Mul(self.to_expr(), other.to_expr()))),
        }
    }

    /// Exact reciprocal; panics on an exactly-zero exact value.
    pub fn recip(&self) -> Self {
        match self {
            Rational(q) => {
                assert!(!q.is_zero(), "reciprocal of zero");
                Rational(q.recip())
            }
            Quadratic { a, b, d } => {
                // 1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d)
                let dd = Rat::from_integer(BigInt::from(*d));
                let denom = a * a - b * b * dd;
                debug_assert!(!denom.is_zero());
                quad(a / &denom, -b / &denom, *d)
            }
            Adaptive(e) => Adaptive(Arc::new(Expr::Div(
                Arc::new(Expr::Const(Rat::one())),
                e.clone(),
            ))),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        match (self, other) {
            (_, Rational(q)) if !q.is_zero() => self.mul(&Rational(q.recip())),
            (_, o @ Quadratic { .. }) => self.mul(&o.recip()),
            _ => Adaptive(Arc::new(Expr::Div(self.to_expr(), other.to_expr()))),
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.mul(&CertifiedReal::from_integer(n))
    }

    pub fn sqrt(&self) -> Result<Self> {
        match self {
            Rational(q) => {
                if q.is_negative() {
                    return Err(Error::InvalidParam("sqrt of a negative value".into()));
                }
                if q.is_zero() {
                    return Ok(CertifiedReal::zero());
                }
                // sqrt(n/m) = sqrt(n m) / m
                let s = q.numer() * q.denom();
                match squarefree_decompose(&s) {
                    Some((f, 1)) => Ok(Rational(Rat::new(f, q.denom().clone()))),
                    Some((f, k)) => Ok(quad(
                        Rat::zero(),
                        Rat::new(f, q.denom().clone()),
                        k,
                    )),
                    None => Ok(Adaptive(Arc::new(Expr::Sqrt(self.to_expr())))),
                }
            }
            _ => Ok(Adaptive(Arc::new(Expr::Sqrt(self.to_expr())))),
        }
    }

    /// `x^(p/q)` with q >= 1; exact when the result stays rational, adaptive
    /// otherwise.
    pub fn pow_rat(&self, p: i64, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParam("power denominator must be >= 1".into()));
        }
        let g = (p.unsigned_abs()).gcd(&(q as u64));
        let (p, q) = ((p / g as i64), (q / g as u32).max(1));
        if p == 0 {
            return Ok(CertifiedReal::one());
        }
        if q == 1 {
            return Ok(self.powi(p));
        }
        if let Rational(x) = self {
            if x.is_negative() {
                return Err(Error::InvalidParam("rational power of negative base".into()));
            }
            // Exact when numerator and denominator are both perfect q-th powers.
            let rn = x.numer().nth_root(q);
            let rd = x.denom().nth_root(q);
            if &rn.clone().pow(q) == x.numer() && &rd.clone().pow(q) == x.denom() {
                return Ok(Rational(Rat::new(rn, rd)).powi(p));
            }
            if q == 2 {
                return Ok(Rational(x.clone()).sqrt()?.powi(p));
            }
        }
        Ok(Adaptive(Arc::new(Expr::PowRat(self.to_expr(), p, q))))
    }

    fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return CertifiedReal::one();
        }
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc: Option<CertifiedReal> = None;
        loop {
            if exp & 1 == 1 {
                acc = Some(match &acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            exp >>= 1;
            if exp == 0 {
                return acc.unwrap();
            }
            base = base.mul(&base);
        }
    }

    pub fn ln(&self) -> Self {
        if let Rational(q) = self {
            if q.is_one() {
                return CertifiedReal::zero();
            }
        }
        Adaptive(Arc::new(Expr::Ln(self.to_expr())))
    }

    pub fn exp(&self) -> Self {
        if let Rational(q) = self {
            if q.is_zero() {
                return CertifiedReal::one();
            }
        }
        Adaptive(Arc::new(Expr::Exp(self.to_expr())))
    }

    /// Rigorous enclosure with width at most `2^(1-bits)`.
    pub fn eval_interval(&self, bits: u32, cap: u32) -> Result<Interval> {
        match self {
            Rational(q) => Ok(Interval::point(q.clone())),
            _ => self
                .to_expr()
                .eval_to_width(bits, cap)
                .map_err(|e| match e {
                    EvalError::NeedMorePrecision => Error::PrecisionExhausted { bits: cap },
                    EvalError::Domain(msg) => Error::InvalidParam(msg.into()),
                    EvalError::Overflow => Error::InvalidParam("magnitude overflow".into()),
                }),
        }
    }

    /// Approximate value (midpoint of a 96-bit enclosure for inexact variants).
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Rational(q) => Ok(rat_to_f64(q)),
            _ => Ok(self.eval_interval(96, DEFAULT_PRECISION_CAP)?.mid_f64()),
        }
    }
}

/// `floor(x)`, certified. Exact integer arithmetic for rational and quadratic
/// values; interval refinement up to `DEFAULT_PRECISION_CAP` bits otherwise.
pub fn certified_floor(x: &CertifiedReal) -> Result<BigInt> {
    certified_floor_with_cap(x, DEFAULT_PRECISION_CAP)
}

pub fn certified_floor_with_cap(x: &CertifiedReal, cap: u32) -> Result<BigInt> {
    match x {
        Rational(q) => Ok(q.floor().to_integer()),
        Quadratic { a, b, d } => {
            // Interval hint, then exact verification by quadratic sign tests.
            let hint = x
                .eval_interval(48, cap)
                .map(|iv| iv.lo.floor().to_integer())
                .unwrap_or_else(|_| BigInt::zero());
            // x - n has sign quad_sign(a - n, b, d)
            let cmp_with = |n: &BigInt| -> Ordering {
                quad_sign(&(a - Rat::from_integer(n.clone())), b, *d)
            };
            let mut n = hint;
            while cmp_with(&n) == Ordering::Less {
                n -= 1;
            }
            loop {
                let next = &n + 1;
                if cmp_with(&next) == Ordering::Less {
                    return Ok(n);
                }
                n = next;
            }
        }
        Adaptive(e) => {
            let mut w = 64u32;
            loop {
                match e.eval(w) {
                    Ok(iv) => {
                        if let Some(f) = iv.floor_certain() {
                            return Ok(f);
                        }
                    }
                    Err(EvalError::NeedMorePrecision) => {}
                    Err(EvalError::Domain(msg)) => return Err(Error::InvalidParam(msg.into())),
                    Err(EvalError::Overflow) => {
                        return Err(Error::InvalidParam("magnitude overflow".into()))
                    }
                }
                if w >= cap {
                    return Err(Error::AmbiguousFloor { bits: cap });
                }
                w = (w * 2).min(cap);
            }
        }
    }
}

/// Exact ordering of two certified reals.
pub fn certified_compare(x: &CertifiedReal, y: &CertifiedReal) -> Result<Ordering> {
    certified_compare_with_cap(x, y, DEFAULT_PRECISION_CAP)
}

pub fn certified_compare_with_cap(
    x: &CertifiedReal,
    y: &CertifiedReal,
    cap: u32,
) -> Result<Ordering> {
    let diff = x.sub(y);
    match &diff {
        Rational(q) => Ok(q.cmp(&Rat::zero())),
        Quadratic { a, b, d } => Ok(quad_sign(a, b, *d)),
        Adaptive(e) => {
            let mut w = 64u32;
            loop {
                match e.eval(w) {
                    Ok(iv) => {
                        if let Some(s) = iv.sign() {
                            return Ok(s);
                        }
                    }
                    Err(EvalError::NeedMorePrecision) => {}
                    Err(EvalError::Domain(msg)) => return Err(Error::InvalidParam(msg.into())),
                    Err(EvalError::Overflow) => {
                        return Err(Error::InvalidParam("magnitude overflow".into()))
                    }
                }
                if w >= cap {
                    return Err(Error::AmbiguousCompare { bits: cap });
                }
                w = (w * 2).min(cap);
            }
        }
    }
}

/// `floor(n^(p/q))` for integers by an exact q-th root of `n^p`.
pub fn floor_power(n: u64, p: u32, q: u32) -> BigInt {
    assert!(n >= 1 && p >= 1 && q >= 1);
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    BigInt::from(n).pow(p).nth_root(q)
}

/// `ceil(n^(p/q))` plus an exactness flag (`true` when `n^(p/q)` is integral).
pub fn ceil_power(n: u64, p: u32, q: u32) -> (BigInt, bool) {
    assert!(n >= 1 && p >= 1 && q >= 1);
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    let npow = BigInt::from(n).pow(p);
    let r = npow.nth_root(q);
    if r.clone().pow(q) == npow {
        (r, true)
    } else {
        (r + 1, false)
    }
}

/// Sawtooth value `x - floor(x) - 1/2` as an exact certified real.
pub fn psi_certified(x: &CertifiedReal) -> Result<CertifiedReal> {
    let f = certified_floor(x)?;
    Ok(x
        .sub(&CertifiedReal::from_bigint(f))
        .sub(&CertifiedReal::from_ratio(1, 2)))
}

/// Distance from `x` to the nearest integer, exact for exact variants.
pub fn nearest_int_distance(x: &CertifiedReal) -> Result<CertifiedReal> {
    let half = CertifiedReal::from_ratio(1, 2);
    let round = certified_floor(&x.add(&half))?;
    let diff = x.sub(&CertifiedReal::from_bigint(round));
    let sign = match &diff {
        Rational(q) => q.cmp(&Rat::zero()),
        Quadratic { a, b, d } => quad_sign(a, b, *d),
        Adaptive(_) => certified_compare(&diff, &CertifiedReal::zero())?,
    };
    Ok(if sign == Ordering::Less { diff.neg() } else { diff })
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational(q) => write!(f, "Rational({q})"),
            Quadratic { a, b, d } => write!(f, "Quadratic({a} + {b}*sqrt({d}))"),
            Adaptive(_) => write!(f, "Adaptive(..)"),
        }
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational(q) => write!(f, "{q}"),
            Quadratic { a, b, d } => {
                if a.is_zero() {
                    write!(f, "{b}*sqrt({d})")
                } else {
                    write!(f, "{a} + {b}*sqrt({d})")
                }
            }
            Adaptive(_) => write!(f, "<adaptive>"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> CertifiedReal {
        CertifiedReal::from_ratio(n, d)
    }

    #[test]
    fn floor_rational() {
        assert_eq!(certified_floor(&rat(3, 2)).unwrap(), BigInt::from(1));
        assert_eq!(certified_floor(&rat(5, 1)).unwrap(), BigInt::from(5));
        assert_eq!(certified_floor(&rat(-3, 2)).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn floor_ten_sqrt_two() {
        // 14^2 = 196 <= 200 = (10 sqrt 2)^2 < 225 = 15^2
        let x = CertifiedReal::sqrt_int(2).mul_int(10);
        assert_eq!(certified_floor(&x).unwrap(), BigInt::from(14));
        // Same through the adaptive route.
        assert_eq!(certified_floor(&x.to_adaptive()).unwrap(), BigInt::from(14));
    }

    #[test]
    fn floor_power_examples() {
        assert_eq!(floor_power(1, 3, 2), BigInt::from(1));
        assert_eq!(floor_power(2, 3, 2), BigInt::from(2));
        assert_eq!(floor_power(3, 3, 2), BigInt::from(5));
        // independent check: r^q <= n^p < (r+1)^q
        for (n, p, q) in [(10u64, 5u32, 4u32), (123, 7, 3), (999, 25, 24)] {
            let r = floor_power(n, p, q);
            let npow = BigInt::from(n).pow(p);
            assert!(r.clone().pow(q) <= npow);
            assert!((r + 1).pow(q) > npow);
        }
    }

    #[test]
    fn compare_examples() {
        let sqrt2 = CertifiedReal::sqrt_int(2);
        assert_eq!(
            certified_compare(&sqrt2, &rat(3, 2)).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            certified_compare(&rat(7, 5), &rat(7, 5)).unwrap(),
            Ordering::Equal
        );
        let golden = CertifiedReal::sqrt_int(5)
            .add(&CertifiedReal::one())
            .div(&rat(2, 1));
        assert_eq!(
            certified_compare(&golden, &rat(809, 500)).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn golden_ratio_is_quadratic() {
        let golden = CertifiedReal::sqrt_int(5)
            .add(&CertifiedReal::one())
            .div(&rat(2, 1));
        match &golden {
            Quadratic { a, b, d } => {
                assert_eq!(*d, 5);
                assert_eq!(a, &Rat::new(BigInt::one(), BigInt::from(2)));
                assert_eq!(b, &Rat::new(BigInt::one(), BigInt::from(2)));
            }
            other => panic!("expected quadratic, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_normalizes_square_part() {
        // sqrt(12) = 2 sqrt(3)
        match CertifiedReal::sqrt_int(12) {
            Quadratic { a, b, d } => {
                assert!(a.is_zero());
                assert_eq!(b, Rat::from_integer(BigInt::from(2)));
                assert_eq!(d, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        // sqrt(49/4) stays rational
        assert_eq!(
            rat(49, 4).sqrt().unwrap().as_rational().unwrap(),
            &Rat::new(BigInt::from(7), BigInt::from(2))
        );
    }

    #[test]
    fn recip_is_exact_inverse() {
        let sqrt2 = CertifiedReal::sqrt_int(2);
        let inv = sqrt2.recip();
        let prod = sqrt2.mul(&inv);
        assert_eq!(prod.as_rational().unwrap(), &Rat::one());
    }

    #[test]
    fn ambiguous_floor_on_exact_integer_expression() {
        // exp(ln 2) is exactly 2, but the tree cannot certify it.
        let two = rat(2, 1);
        let e = two.ln().exp();
        match certified_floor_with_cap(&e, 512) {
            Err(Error::AmbiguousFloor { bits: 512 }) => {}
            other => panic!("expected AmbiguousFloor, got {other:?}"),
        }
    }

    #[test]
    fn mixed_radicals_fall_back_to_adaptive() {
        let x = CertifiedReal::sqrt_int(2).add(&CertifiedReal::sqrt_int(3));
        assert!(!x.is_exact());
        // sqrt2 + sqrt3 = 3.1462643...
        assert_eq!(certified_floor(&x).unwrap(), BigInt::from(3));
        assert!((x.to_f64().unwrap() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn interval_width_contract() {
        let x = CertifiedReal::sqrt_int(2).add(&CertifiedReal::sqrt_int(3));
        for bits in [64, 128, 256] {
            let iv = x.eval_interval(bits, DEFAULT_PRECISION_CAP).unwrap();
            assert!(iv.width_within(bits));
        }
    }

    #[test]
    fn psi_certified_matches_definition() {
        let x = CertifiedReal::sqrt_int(2).mul_int(10);
        let p = psi_certified(&x).unwrap();
        let expect = 10.0 * 2f64.sqrt() - 14.0 - 0.5;
        assert!((p.to_f64().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn nearest_int_distance_quadratic() {
        let x = CertifiedReal::sqrt_int(2).mul_int(5); // 7.0710678
        let d = nearest_int_distance(&x).unwrap();
        assert!((d.to_f64().unwrap() - 0.0710678).abs() < 1e-6);
    }
}
