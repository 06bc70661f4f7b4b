//! Rational-endpoint interval arithmetic with directed dyadic rounding.
//!
//! Every operation takes a working precision `w` and rounds the resulting
//! endpoints outward onto the grid `2^-w * Z`, so endpoint sizes stay bounded
//! no matter how deep an expression tree is. Enclosures are rigorous: the true
//! value of the operation applied to any points of the input intervals lies in
//! the output interval.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

pub(crate) type Rat = BigRational;

/// Why an interval operation could not produce a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalError {
    /// The enclosure is too wide to decide a sign / domain condition;
    /// re-evaluating at higher precision may succeed.
    NeedMorePrecision,
    /// The operand is certainly outside the operation's domain.
    Domain(&'static str),
    /// Argument magnitude is beyond the supported range (e.g. exp of 2^20).
    Overflow,
}

pub type EvalResult<T> = std::result::Result<T, EvalError>;

/// Closed interval `[lo, hi]` certified to contain the true value.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// floor(q * 2^w) / 2^w
fn round_down(q: &Rat, w: u32) -> Rat {
    let scaled = q.numer() << w;
    Rat::new(scaled.div_floor(q.denom()), BigInt::one() << w)
}

/// ceil(q * 2^w) / 2^w
fn round_up(q: &Rat, w: u32) -> Rat {
    let scaled = q.numer() << w;
    Rat::new(scaled.div_ceil(q.denom()), BigInt::one() << w)
}

impl Interval {
    pub fn point(q: Rat) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// True if the width is at most `2^(1-bits)`.
    pub fn width_within(&self, bits: u32) -> bool {
        let w = self.width();
        // width <= 2^(1-bits)  <=>  width * 2^(bits-1) <= 1
        if bits == 0 {
            return w <= rat_int(2);
        }
        (w.numer() << (bits - 1)) <= *w.denom()
    }

    pub fn round_out(&self, w: u32) -> Self {
        Interval::new(round_down(&self.lo, w), round_up(&self.hi, w))
    }

    pub fn neg(&self) -> Self {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add(&self, o: &Interval, w: u32) -> Self {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi).round_out(w)
    }

    pub fn sub(&self, o: &Interval, w: u32) -> Self {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo).round_out(w)
    }

    pub fn mul(&self, o: &Interval, w: u32) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi).round_out(w)
    }

    /// Multiply by an exact rational (no rounding besides `round_out`).
    pub fn scale(&self, q: &Rat, w: u32) -> Self {
        let a = &self.lo * q;
        let b = &self.hi * q;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(lo, hi).round_out(w)
    }

    pub fn recip(&self, w: u32) -> EvalResult<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Ok(Interval::new(self.hi.recip(), self.lo.recip()).round_out(w))
        } else {
            Err(EvalError::NeedMorePrecision)
        }
    }

    pub fn div(&self, o: &Interval, w: u32) -> EvalResult<Self> {
        Ok(self.mul(&o.recip(w + 8)?, w))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign relative to zero, if decidable from the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// The common floor of both endpoints, when they agree.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let f_lo = self.lo.floor().to_integer();
        let f_hi = self.hi.floor().to_integer();
        if f_lo == f_hi {
            Some(f_lo)
        } else {
            None
        }
    }

    pub fn sqrt(&self, w: u32) -> EvalResult<Self> {
        self.nth_root(2, w)
    }

    pub fn nth_root(&self, k: u32, w: u32) -> EvalResult<Self> {
        debug_assert!(k >= 1);
        if self.hi.is_negative() {
            return Err(EvalError::Domain("root of a negative value"));
        }
        if self.lo.is_negative() {
            // True value might still be nonnegative; ask for a tighter enclosure.
            return Err(EvalError::NeedMorePrecision);
        }
        Ok(Interval::new(
            root_down(&self.lo, k, w),
            root_up(&self.hi, k, w),
        ))
    }

    pub fn powi(&self, e: i64, w: u32) -> EvalResult<Self> {
        if e == 0 {
            return Ok(Interval::point(Rat::one()));
        }
        let mut base = self.clone();
        let mut exp = e.unsigned_abs();
        let mut acc: Option<Interval> = None;
        loop {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, w + 8),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            base = base.mul(&base, w + 8);
        }
        let r = acc.unwrap();
        if e < 0 {
            r.recip(w)
        } else {
            Ok(r.round_out(w))
        }
    }

    /// `x^(p/q)` via integer powers and roots; requires `x >= 0` when `q > 1`.
    pub fn pow_ratio(&self, p: i64, q: u32, w: u32) -> EvalResult<Self> {
        if q == 1 {
            return self.powi(p, w);
        }
        let t = self.powi(p.abs(), w + 8)?;
        let r = t.nth_root(q, w + 8)?;
        if p < 0 {
            r.recip(w)
        } else {
            Ok(r.round_out(w))
        }
    }

    pub fn ln(&self, w: u32) -> EvalResult<Self> {
        if !self.hi.is_positive() {
            return Err(EvalError::Domain("log of a nonpositive value"));
        }
        if !self.lo.is_positive() {
            return Err(EvalError::NeedMorePrecision);
        }
        let lo = ln_rat(&self.lo, w)?.lo;
        let hi = ln_rat(&self.hi, w)?.hi;
        Ok(Interval::new(lo, hi))
    }

    pub fn exp(&self, w: u32) -> EvalResult<Self> {
        let lo = exp_rat(&self.lo, w)?.lo;
        let hi = exp_rat(&self.hi, w)?.hi;
        Ok(Interval::new(lo, hi))
    }

    /// Midpoint converted to `f64`.
    pub fn mid_f64(&self) -> f64 {
        let two = rat_int(2);
        rat_to_f64(&((&self.lo + &self.hi) / two))
    }
}

/// Lower bound for `q^(1/k)` on the `2^-w` grid (`q >= 0`).
fn root_down(q: &Rat, k: u32, w: u32) -> Rat {
    if q.is_zero() {
        return Rat::zero();
    }
    // floor(q * 2^(k w)) has k-th root r with r <= q^(1/k) * 2^w.
    let scaled = (q.numer() << (k as usize * w as usize)).div_floor(q.denom());
    Rat::new(scaled.nth_root(k), BigInt::one() << w)
}

/// Upper bound for `q^(1/k)` on the `2^-w` grid (`q >= 0`).
fn root_up(q: &Rat, k: u32, w: u32) -> Rat {
    if q.is_zero() {
        return Rat::zero();
    }
    let scaled = (q.numer() << (k as usize * w as usize)).div_ceil(q.denom());
    Rat::new(scaled.nth_root(k) + BigInt::one(), BigInt::one() << w)
}

/// 2^-g as a rational.
fn grid(g: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << g)
}

/// atanh(u) enclosure for exact rational `0 <= u <= 1/2`, by the odd series.
fn atanh_small(u: &Rat, w: u32) -> Interval {
    debug_assert!(!u.is_negative() && u * rat_int(2) <= Rat::one());
    let wg = w + 16;
    let u2 = Interval::point(u * u).round_out(wg);
    let mut power = Interval::point(u.clone()).round_out(wg);
    let mut sum = power.clone();
    let mut i: i64 = 1;
    loop {
        power = power.mul(&u2, wg);
        let term = power.scale(&Rat::new(BigInt::one(), BigInt::from(2 * i + 1)), wg);
        sum = sum.add(&term, wg);
        // Tail <= u^(2i+3) / ((2i+3)(1-u^2)) <= next_power * 4/3 for u <= 1/2.
        let tail = &power.hi * &u2.hi * Rat::new(BigInt::from(4), BigInt::from(3));
        if tail < grid(w + 8) {
            sum.hi += tail;
            return sum;
        }
        i += 1;
    }
}

static LN2_CACHE: Lazy<Mutex<BTreeMap<u32, Interval>>> = Lazy::new(|| Mutex::new(BTreeMap::new()));

/// Enclosure of ln 2 at working precision `w`: ln 2 = 2 atanh(1/3).
pub(crate) fn ln2(w: u32) -> Interval {
    if let Some(iv) = LN2_CACHE.lock().unwrap().get(&w) {
        return iv.clone();
    }
    let third = Rat::new(BigInt::one(), BigInt::from(3));
    let iv = atanh_small(&third, w).scale(&rat_int(2), w);
    LN2_CACHE.lock().unwrap().insert(w, iv.clone());
    iv
}

/// Enclosure of the natural log of an exact positive rational.
fn ln_rat(q: &Rat, w: u32) -> EvalResult<Interval> {
    debug_assert!(q.is_positive());
    if q.is_one() {
        return Ok(Interval::point(Rat::zero()));
    }
    // Normalize q = m * 2^k with m in [1, 2).
    let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
    let pow2 = |e: i64| -> Rat {
        if e >= 0 {
            Rat::from_integer(BigInt::one() << e as usize)
        } else {
            Rat::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let mut m = q / pow2(k);
    while m < Rat::one() {
        k -= 1;
        m = &m * rat_int(2);
    }
    while m >= rat_int(2) {
        k += 1;
        m = m / rat_int(2);
    }
    // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3].
    let u = (&m - Rat::one()) / (&m + Rat::one());
    let ln_m = atanh_small(&u, w).scale(&rat_int(2), w);
    let ln2k = ln2(w).scale(&rat_int(k), w);
    Ok(ln_m.add(&ln2k, w))
}

/// Maximum |argument| accepted by `exp_rat`.
const EXP_ARG_CAP: f64 = 1.0e6;

/// Enclosure of e^q for an exact rational q.
fn exp_rat(q: &Rat, w: u32) -> EvalResult<Interval> {
    if q.is_zero() {
        return Ok(Interval::point(Rat::one()));
    }
    let qf = rat_to_f64(q);
    if !qf.is_finite() || qf.abs() > EXP_ARG_CAP {
        return Err(EvalError::Overflow);
    }
    let wg = w + 16;
    let k = (qf / std::f64::consts::LN_2).round() as i64;
    let r = Interval::point(q.clone()).sub(&ln2(wg).scale(&rat_int(k), wg), wg);
    debug_assert!(r.lo > rat_int(-1) && r.hi < Rat::one());
    // exp(r) by Taylor series; |r| <= 0.37 so terms decay fast.
    let r_mag = if r.lo.abs() > r.hi.abs() {
        r.lo.abs()
    } else {
        r.hi.abs()
    };
    let mut term = Interval::point(Rat::one());
    let mut sum = term.clone();
    let mut i: i64 = 1;
    loop {
        term = term.mul(&r, wg).scale(&Rat::new(BigInt::one(), BigInt::from(i)), wg);
        sum = sum.add(&term, wg);
        let mag = if term.lo.abs() > term.hi.abs() {
            term.lo.abs()
        } else {
            term.hi.abs()
        };
        // Tail <= 2 * |next term| once |r|/(i+1) <= 1/2.
        let tail = &mag * &r_mag * Rat::new(BigInt::from(2), BigInt::from(i + 1));
        if i > 1 && tail < grid(w + 8) {
            sum.lo -= &tail;
            sum.hi += tail;
            break;
        }
        i += 1;
    }
    let pow2k = if k >= 0 {
        Rat::from_integer(BigInt::one() << k as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-k) as usize)
    };
    Ok(sum.scale(&pow2k, w))
}

/// Robust `BigRational -> f64` via a 64-bit dyadic quotient.
pub(crate) fn rat_to_f64(q: &Rat) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let num = q.numer();
    let den = q.denom();
    let shift = 63i64 - (num.bits() as i64 - den.bits() as i64);
    let m = if shift >= 0 {
        (num << shift as usize).div_floor(den)
    } else {
        num.div_floor(&(den << (-shift) as usize))
    };
    let mf = m.to_f64().unwrap_or(0.0);
    mf * 2f64.powi(-shift as i32)
}
