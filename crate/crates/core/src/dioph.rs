//! Continued fractions, convergents and irrationality-measure estimates.
//!
//! Expansion is exact for rational and quadratic values (the Gauss map stays
//! inside the same field, so every partial quotient is a certified floor) and
//! interval-certified for adaptive values: the Gauss map is applied to an
//! enclosure of the value and quotients are emitted only while both endpoints
//! agree, restarting at doubled precision otherwise.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactreal::{
    certified_floor, nearest_int_distance, CertifiedReal, DEFAULT_PRECISION_CAP,
};

/// A continued-fraction prefix with its convergents.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    /// `(p_k, q_k)` pairs; `p_k / q_k` in lowest terms with q strictly
    /// increasing from k = 2 on.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Set when the expansion is finite (the value is rational).
    pub terminated: bool,
    /// For quadratic inputs: `(preperiod_start, period_length)` once the
    /// Gauss-map state repeats.
    pub period: Option<(usize, usize)>,
}

impl ContinuedFraction {
    fn from_quotients(quotients: Vec<BigInt>, terminated: bool, period: Option<(usize, usize)>) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
        let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
        // (p_prev, q_prev) = (p_{k-1}, q_{k-1}) after each step
        for a in &quotients {
            let p_next = a * &p_prev + &p;
            let q_next = a * &q_prev + &q;
            p = std::mem::replace(&mut p_prev, p_next);
            q = std::mem::replace(&mut q_prev, q_next);
            convergents.push((p_prev.clone(), q_prev.clone()));
        }
        ContinuedFraction {
            quotients,
            convergents,
            terminated,
            period,
        }
    }
}

/// First `k` partial quotients of `x` (fewer if the expansion terminates).
pub fn cf_expand(x: &CertifiedReal, k: usize) -> Result<ContinuedFraction> {
    match x {
        CertifiedReal::Rational(q) => Ok(cf_rational(q, k)),
        CertifiedReal::Quadratic { .. } => cf_quadratic(x, k),
        CertifiedReal::Adaptive(_) => cf_adaptive(x, k),
    }
}

fn cf_rational(q: &BigRational, k: usize) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    while !den.is_zero() && quotients.len() < k {
        let (quot, rem) = num_integer::Integer::div_mod_floor(&num, &den);
        quotients.push(quot);
        num = std::mem::replace(&mut den, rem);
    }
    let terminated = den.is_zero();
    ContinuedFraction::from_quotients(quotients, terminated, None)
}

fn cf_quadratic(x: &CertifiedReal, k: usize) -> Result<ContinuedFraction> {
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut period = None;
    let mut seen: HashMap<(BigRational, BigRational), usize> = HashMap::new();
    let mut cur = x.clone();
    while quotients.len() < k {
        if let CertifiedReal::Quadratic { a, b, d: _ } = &cur {
            match seen.entry((a.clone(), b.clone())) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    let start = *e.get();
                    period = Some((start, quotients.len() - start));
                    // The tail repeats; fill the rest from the cycle.
                    while quotients.len() < k {
                        let idx = start + (quotients.len() - start) % (period.unwrap().1);
                        quotients.push(quotients[idx].clone());
                    }
                    break;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(quotients.len());
                }
            }
        }
        let a = certified_floor(&cur)?;
        let frac = cur.sub(&CertifiedReal::from_bigint(a.clone()));
        quotients.push(a);
        if quotients.len() == k {
            break;
        }
        // frac is irrational here (quadratic with b != 0 minus an integer),
        // so it is never zero.
        cur = frac.recip();
    }
    Ok(ContinuedFraction::from_quotients(quotients, false, period))
}

fn cf_adaptive(x: &CertifiedReal, k: usize) -> Result<ContinuedFraction> {
    let mut bits: u32 = 128;
    loop {
        let iv = x.eval_interval(bits.min(DEFAULT_PRECISION_CAP), DEFAULT_PRECISION_CAP)?;
        let mut lo = iv.lo.clone();
        let mut hi = iv.hi.clone();
        let mut quotients = Vec::new();
        let mut ok = true;
        while quotients.len() < k {
            let f_lo = lo.floor();
            let f_hi = hi.floor();
            if f_lo != f_hi {
                ok = false;
                break;
            }
            quotients.push(f_lo.to_integer());
            let frac_lo = &lo - &f_lo;
            let frac_hi = &hi - &f_lo;
            if frac_lo.is_zero() {
                // Endpoint collapse; cannot invert certifiably.
                ok = quotients.len() == k;
                break;
            }
            // Gauss map flips the interval.
            let new_lo = frac_hi.recip();
            let new_hi = frac_lo.recip();
            lo = new_lo;
            hi = new_hi;
        }
        if ok && quotients.len() == k {
            return Ok(ContinuedFraction::from_quotients(quotients, false, None));
        }
        if bits >= DEFAULT_PRECISION_CAP {
            return Err(Error::PrecisionExhausted {
                bits: DEFAULT_PRECISION_CAP,
            });
        }
        bits *= 2;
    }
}

/// Expand until some convergent denominator exceeds `bound` (that convergent
/// is included), or the expansion terminates.
fn cf_expand_past_denominator(x: &CertifiedReal, bound: &BigInt) -> Result<ContinuedFraction> {
    // Denominators grow at least like Fibonacci numbers, so the number of
    // quotients needed is about 1.45 * bits(bound) + a margin.
    let mut k = 16usize.max(3 * bound.bits() as usize / 2 + 8);
    loop {
        let cf = cf_expand(x, k)?;
        if cf.terminated || cf.convergents.last().map(|(_, q)| q > bound).unwrap_or(false) {
            // Trim to the first convergent past the bound.
            if let Some(pos) = cf.convergents.iter().position(|(_, q)| q > bound) {
                let quotients = cf.quotients[..=pos].to_vec();
                return Ok(ContinuedFraction::from_quotients(
                    quotients,
                    cf.terminated && pos + 1 == cf.convergents.len(),
                    cf.period,
                ));
            }
            return Ok(cf);
        }
        k *= 2;
    }
}

/// The convergent of `x` with the largest denominator not exceeding `m`.
pub fn best_convergent_below(x: &CertifiedReal, m: &BigInt) -> Result<(BigInt, BigInt)> {
    if m < &BigInt::one() {
        return Err(Error::InvalidParam("denominator bound must be >= 1".into()));
    }
    let cf = cf_expand_past_denominator(x, m)?;
    let mut best: Option<(BigInt, BigInt)> = None;
    for (p, q) in &cf.convergents {
        if q <= m {
            best = Some((p.clone(), q.clone()));
        }
    }
    best.ok_or_else(|| Error::InvalidParam("no convergent below bound".into()))
}

/// A finite-scale irrationality-measure estimate.
#[derive(Clone, Debug)]
pub struct TypeEstimate {
    /// max of log(q_{k+1}) / log(q_k) over convergent denominators
    /// q_floor <= q_k <= search_bound.
    pub tau_hat: f64,
    /// `(q_k, |q_k x - p_k|)` achieving the estimate.
    pub witness: (BigInt, f64),
    pub search_bound: BigInt,
    /// Denominators below this are ignored as pre-asymptotic.
    pub q_floor: BigInt,
}

/// Estimate the irrationality type of `x` from convergent growth up to `n`.
///
/// Convergents are the extremal witnesses for `liminf q^t ||q x||`
/// (`||q_k x||` is within a factor 2 of `1/q_{k+1}`), so the scan over all
/// integers reduces to the quotient ratios. Denominators below `n^(1/3)` are
/// discarded: the first few convergents of any number show spuriously large
/// ratios that say nothing about the asymptotic measure.
pub fn type_estimate(x: &CertifiedReal, n: &BigInt) -> Result<TypeEstimate> {
    if x.is_rational() {
        return Err(Error::RationalInput);
    }
    if n < &BigInt::from(10) {
        return Err(Error::InvalidParam("search bound must be >= 10".into()));
    }
    let q_floor = n.nth_root(3).max(BigInt::from(2));
    let cf = cf_expand_past_denominator(x, n)?;
    if cf.terminated {
        return Err(Error::RationalInput);
    }
    let mut tau_hat = 1.0f64;
    let mut witness_q = BigInt::one();
    for win in cf.convergents.windows(2) {
        let (_, q1) = &win[0];
        let (_, q2) = &win[1];
        if q1 >= &q_floor && q1 <= n {
            let ratio = bigint_log(q2) / bigint_log(q1);
            if ratio > tau_hat {
                tau_hat = ratio;
                witness_q = q1.clone();
            }
        }
    }
    // ||q x|| at the witness
    let dist = nearest_int_distance(&x.mul(&CertifiedReal::from_bigint(witness_q.clone())))?;
    Ok(TypeEstimate {
        tau_hat,
        witness: (witness_q, dist.to_f64()?),
        search_bound: n.clone(),
        q_floor,
    })
}

fn bigint_log(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 52 {
        (n.to_f64().unwrap()).ln()
    } else {
        let top = (n >> (bits - 52)).to_f64().unwrap();
        top.ln() + (bits - 52) as f64 * std::f64::consts::LN_2
    }
}

/// `min over 1 <= n <= N of ||x n|| * n^rho` — the best admissible constant
/// in the inequality `||x n|| > c n^(-rho)` at scale `N`.
pub fn type_inequality_constant(x: &CertifiedReal, rho: f64, n_max: u64) -> Result<f64> {
    if x.is_rational() {
        return Err(Error::RationalInput);
    }
    if n_max < 1 {
        return Err(Error::InvalidParam("scan bound must be >= 1".into()));
    }
    let mut best = f64::INFINITY;
    for n in 1..=n_max {
        let dist = nearest_int_distance(&x.mul_int(n as i64))?.to_f64()?;
        let v = dist * (n as f64).powf(rho);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Check the two structural convergent invariants on an expansion:
/// the determinant identity and the approximation quality bound.
pub fn check_convergent_invariants(x: &CertifiedReal, cf: &ContinuedFraction) -> Result<()> {
    for win in cf.convergents.windows(2) {
        let (p1, q1) = &win[0];
        let (p2, q2) = &win[1];
        let det = p2 * q1 - p1 * q2;
        if det.abs() != BigInt::one() {
            return Err(Error::InvalidParam(format!("determinant {det} is not ±1")));
        }
        // |x - p1/q1| < 1/(q1 q2)
        let approx = CertifiedReal::from_rational(BigRational::new(p1.clone(), q1.clone()));
        let diff = x.sub(&approx);
        let bound = CertifiedReal::from_rational(BigRational::new(BigInt::one(), q1 * q2));
        let abs_diff = match crate::exactreal::certified_compare(&diff, &CertifiedReal::zero())? {
            Ordering::Less => diff.neg(),
            _ => diff,
        };
        if crate::exactreal::certified_compare(&abs_diff, &bound)? != Ordering::Less {
            return Err(Error::InvalidParam(format!(
                "convergent {p1}/{q1} violates the 1/(q_k q_(k+1)) bound"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sqrt2_expansion() {
        let x = CertifiedReal::sqrt_int(2);
        let cf = cf_expand(&x, 5).unwrap();
        assert_eq!(cf.quotients, vec![big(1), big(2), big(2), big(2), big(2)]);
        let expect = [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)];
        for (got, want) in cf.convergents.iter().zip(expect) {
            assert_eq!(got, &(big(want.0), big(want.1)));
        }
        check_convergent_invariants(&x, &cf).unwrap();
    }

    #[test]
    fn golden_expansion() {
        let x = CertifiedReal::sqrt_int(5)
            .add(&CertifiedReal::one())
            .div(&CertifiedReal::from_integer(2));
        let cf = cf_expand(&x, 4).unwrap();
        assert_eq!(cf.quotients, vec![big(1); 4]);
        check_convergent_invariants(&x, &cf).unwrap();
    }

    #[test]
    fn rational_terminates() {
        let x = CertifiedReal::from_ratio(3, 7);
        let cf = cf_expand(&x, 10).unwrap();
        assert_eq!(cf.quotients, vec![big(0), big(2), big(3)]);
        assert!(cf.terminated);
    }

    #[test]
    fn period_detection() {
        let cases = [
            (CertifiedReal::sqrt_int(2), vec![big(2)]),
            (CertifiedReal::sqrt_int(3), vec![big(1), big(2)]),
            (
                CertifiedReal::sqrt_int(5)
                    .add(&CertifiedReal::one())
                    .div(&CertifiedReal::from_integer(2)),
                vec![big(1)],
            ),
        ];
        for (x, cycle) in cases {
            let cf = cf_expand(&x, 30).unwrap();
            let (start, len) = cf.period.expect("period detected");
            assert_eq!(len, cycle.len(), "{x}");
            assert_eq!(&cf.quotients[start..start + len], &cycle[..], "{x}");
        }
    }

    #[test]
    fn adaptive_expansion_of_e() {
        // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, 1, ...]
        let e = CertifiedReal::one().exp();
        let cf = cf_expand(&e, 10).unwrap();
        let expect: Vec<BigInt> = [2i64, 1, 2, 1, 1, 4, 1, 1, 6, 1].iter().map(|&v| big(v)).collect();
        assert_eq!(cf.quotients, expect);
        check_convergent_invariants(&e, &cf).unwrap();
    }

    #[test]
    fn best_convergent_examples() {
        let x = CertifiedReal::sqrt_int(2);
        assert_eq!(best_convergent_below(&x, &big(10)).unwrap(), (big(7), big(5)));
        assert_eq!(
            best_convergent_below(&x, &big(12)).unwrap(),
            (big(17), big(12))
        );
        let r = CertifiedReal::from_ratio(3, 7);
        assert_eq!(best_convergent_below(&r, &big(100)).unwrap(), (big(3), big(7)));
    }

    #[test]
    fn best_convergent_quality() {
        // |x - p/q| <= 1/(q M) for the best convergent with q <= M
        let x = CertifiedReal::sqrt_int(2);
        for m in [10i64, 100, 10_000] {
            let (p, q) = best_convergent_below(&x, &big(m)).unwrap();
            let approx = BigRational::new(p, q.clone());
            let xf = x.to_f64().unwrap();
            let err = (xf - approx.to_f64().unwrap()).abs();
            let bound = 1.0 / (q.to_f64().unwrap() * m as f64);
            assert!(err <= bound * (1.0 + 1e-9), "m={m}: {err} > {bound}");
        }
    }

    #[test]
    fn type_estimate_algebraic() {
        let n = big(1_000_000);
        let sqrt2 = type_estimate(&CertifiedReal::sqrt_int(2), &n).unwrap();
        assert!(sqrt2.tau_hat >= 1.0);
        assert!(sqrt2.tau_hat <= 1.2, "sqrt2 tau_hat = {}", sqrt2.tau_hat);
        let golden = type_estimate(
            &CertifiedReal::sqrt_int(5)
                .add(&CertifiedReal::one())
                .div(&CertifiedReal::from_integer(2)),
            &n,
        )
        .unwrap();
        assert!(golden.tau_hat >= 1.0);
        assert!(golden.tau_hat <= 1.1, "golden tau_hat = {}", golden.tau_hat);
    }

    #[test]
    fn type_estimate_rejects_rational() {
        assert!(matches!(
            type_estimate(&CertifiedReal::from_ratio(22, 7), &big(1000)),
            Err(Error::RationalInput)
        ));
    }

    #[test]
    fn liouville_like_value_has_large_type() {
        // Truncation of sum 10^(-k!) (k <= 4) made irrational by a tiny
        // quadratic perturbation; the early convergents are untouched.
        let base = BigRational::new(
            BigInt::from(10).pow(23) + BigInt::from(10).pow(22) + BigInt::from(10).pow(18)
                + BigInt::one(),
            BigInt::from(10).pow(24),
        );
        let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(100));
        let x = CertifiedReal::from_rational(base)
            .add(&CertifiedReal::sqrt_int(2).mul(&CertifiedReal::from_rational(eps)));
        let n = BigInt::from(10).pow(19);
        let est = type_estimate(&x, &n).unwrap();
        assert!(est.tau_hat > 3.0, "tau_hat = {}", est.tau_hat);
    }

    #[test]
    fn type_inequality_examples() {
        let sqrt2 = CertifiedReal::sqrt_int(2);
        let c = type_inequality_constant(&sqrt2, 1.01, 10_000).unwrap();
        assert!(c > 0.2, "constant {c} not bounded away from zero");
        let c_small_n = type_inequality_constant(&sqrt2, 0.5, 100).unwrap();
        let c_big_n = type_inequality_constant(&sqrt2, 0.5, 10_000).unwrap();
        assert!(c_big_n < c_small_n, "rho < 1 must decay");
        assert!(c_big_n < 0.01);
        // N = 1 returns ||x|| itself
        let d = type_inequality_constant(&sqrt2, 2.0, 1).unwrap();
        assert!((d - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }
}
