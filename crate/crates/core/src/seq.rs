//! Floor-of-linear and floor-of-power sequences and their membership
//! indicators.
//!
//! A value `m` is hit by the linear sequence `floor(alpha n + beta)` exactly
//! when the unit-length window `[-a(m - beta), -a(m - beta) + a)` contains an
//! integer (`a = 1/alpha`), and by the power sequence `floor(n^c)` when
//! `[m^gamma, (m+1)^gamma)` does (`gamma = 1/c`). Both indicators are
//! computed as differences of certified floors, so membership is bit-exact.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::SieveTable;
use crate::error::{Error, Result};
use crate::exactreal::{
    ceil_power, certified_compare, certified_floor, floor_power, psi_certified, CertifiedReal,
};

/// Parameters of the sequence `floor(alpha n + beta)`, n >= 1.
#[derive(Clone, Debug)]
pub struct BeattyParams {
    alpha: CertifiedReal,
    beta: CertifiedReal,
    /// Cached reciprocal of alpha; exact (`a * alpha = 1`) for the exact
    /// variants.
    a: CertifiedReal,
}

impl BeattyParams {
    pub fn new(alpha: CertifiedReal, beta: CertifiedReal) -> Result<Self> {
        if certified_compare(&alpha, &CertifiedReal::one())? != std::cmp::Ordering::Greater {
            return Err(Error::InvalidParam("alpha must exceed 1".into()));
        }
        let a = alpha.recip();
        Ok(BeattyParams { alpha, beta, a })
    }

    pub fn alpha(&self) -> &CertifiedReal {
        &self.alpha
    }

    pub fn beta(&self) -> &CertifiedReal {
        &self.beta
    }

    pub fn inv_alpha(&self) -> &CertifiedReal {
        &self.a
    }
}

/// `floor(alpha n + beta)`.
pub fn beatty_term(params: &BeattyParams, n: u64) -> Result<BigInt> {
    let x = params.alpha.mul_int(n as i64).add(&params.beta);
    certified_floor(&x)
}

/// Raw membership indicator
/// `floor(-a (m - beta)) - floor(-a (m + 1 - beta))`, always 0 or 1.
///
/// "Raw" means the witness integer `n` with `floor(alpha n + beta) = m` may
/// be <= 0; use [`beatty_witness`] / [`beatty_member_natural`] to insist on
/// n >= 1 (the two agree once `m >= alpha + beta`).
pub fn beatty_indicator(params: &BeattyParams, m: i64) -> Result<u8> {
    let f1 = floor_neg_a_shift(params, m, 0)?;
    let f2 = floor_neg_a_shift(params, m, 1)?;
    let chi = f1 - f2;
    debug_assert!(chi == BigInt::from(0) || chi == BigInt::from(1));
    Ok(chi.to_u8().unwrap_or(0))
}

/// floor(-a (m + shift - beta))
fn floor_neg_a_shift(params: &BeattyParams, m: i64, shift: i64) -> Result<BigInt> {
    let arg = CertifiedReal::from_integer(m + shift).sub(&params.beta);
    certified_floor(&params.a.mul(&arg).neg())
}

/// The witness index: when the indicator is 1, the unique integer `n` with
/// `floor(alpha n + beta) = m`.
pub fn beatty_witness(params: &BeattyParams, m: i64) -> Result<Option<BigInt>> {
    let f1 = floor_neg_a_shift(params, m, 0)?;
    let f2 = floor_neg_a_shift(params, m, 1)?;
    if f1 - &f2 == BigInt::from(1) {
        // n = ceil(a (m - beta)) = -floor(-a (m - beta))
        Ok(Some(-floor_neg_a_shift(params, m, 0)?))
    } else {
        Ok(None)
    }
}

/// Membership with the sequence convention n >= 1.
pub fn beatty_member_natural(params: &BeattyParams, m: i64) -> Result<bool> {
    Ok(matches!(beatty_witness(params, m)?, Some(n) if n >= BigInt::from(1)))
}

/// The smoothed form `a + psi(-a(p+1-beta)) - psi(-a(p-beta))`, which equals
/// the indicator pointwise. Requires irrational `alpha` (for rational alpha
/// the identity is still arithmetic, but every downstream use assumes the
/// equidistributed case; fail loudly instead).
pub fn beatty_psi_form(params: &BeattyParams, p: i64) -> Result<f64> {
    if params.alpha.is_rational() {
        return Err(Error::RationalInput);
    }
    let arg = |shift: i64| -> CertifiedReal {
        params
            .a
            .mul(&CertifiedReal::from_integer(p + shift).sub(&params.beta))
            .neg()
    };
    let a = params.a.to_f64()?;
    let psi1 = psi_certified(&arg(1))?.to_f64()?;
    let psi0 = psi_certified(&arg(0))?.to_f64()?;
    Ok(a + psi1 - psi0)
}

/// Parameters of the sequence `floor(n^c)` for non-integer c > 1.
#[derive(Clone, Debug)]
pub struct PSParams {
    c: CertifiedReal,
    gamma: CertifiedReal,
    /// `(p, q)` when c = p/q exactly; enables the integer-root fast path.
    rational_c: Option<(u32, u32)>,
}

impl PSParams {
    pub fn new(c: CertifiedReal) -> Result<Self> {
        if certified_compare(&c, &CertifiedReal::one())? != std::cmp::Ordering::Greater {
            return Err(Error::InvalidParam("c must exceed 1".into()));
        }
        let rational_c = match c.as_rational() {
            Some(q) => {
                if q.denom() == &BigInt::from(1) {
                    return Err(Error::InvalidParam("c must not be an integer".into()));
                }
                let p = q.numer().to_u32().ok_or_else(|| {
                    Error::InvalidParam("rational c too large".into())
                })?;
                let qq = q.denom().to_u32().ok_or_else(|| {
                    Error::InvalidParam("rational c too large".into())
                })?;
                Some((p, qq))
            }
            None => None,
        };
        let gamma = c.recip();
        Ok(PSParams { c, gamma, rational_c })
    }

    /// Force the adaptive-precision floor backend even for rational c.
    pub fn with_adaptive_backend(mut self) -> Self {
        self.c = self.c.to_adaptive();
        self.gamma = self.gamma.to_adaptive();
        self.rational_c = None;
        self
    }

    pub fn c(&self) -> &CertifiedReal {
        &self.c
    }

    pub fn gamma(&self) -> &CertifiedReal {
        &self.gamma
    }

    pub fn rational_c(&self) -> Option<(u32, u32)> {
        self.rational_c
    }

    pub fn gamma_f64(&self) -> f64 {
        self.gamma.to_f64().expect("gamma evaluates")
    }
}

/// `floor(n^c)`.
pub fn ps_term(params: &PSParams, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidParam("n must be >= 1".into()));
    }
    match params.rational_c {
        Some((p, q)) => Ok(floor_power(n, p, q)),
        None => {
            let base = CertifiedReal::from_integer(n as i64);
            let x = pow_adaptive(&base, &params.c)?;
            certified_floor(&x)
        }
    }
}

/// x^c for adaptive c: exact exponent when c is a small rational, otherwise
/// exp(c ln x).
fn pow_adaptive(base: &CertifiedReal, c: &CertifiedReal) -> Result<CertifiedReal> {
    Ok(c.mul(&base.ln()).exp())
}

/// Membership indicator `floor(-m^gamma) - floor(-(m+1)^gamma)`, 0 or 1.
pub fn ps_indicator(params: &PSParams, m: u64) -> Result<u8> {
    if m == 0 {
        return Err(Error::InvalidParam("m must be >= 1".into()));
    }
    match params.rational_c {
        // floor(-t) = -ceil(t): chi = ceil((m+1)^gamma) - ceil(m^gamma)
        Some((p, q)) => {
            let (lo, _) = ceil_power(m, q, p);
            let (hi, _) = ceil_power(m + 1, q, p);
            let chi = hi - lo;
            debug_assert!(chi == BigInt::from(0) || chi == BigInt::from(1));
            Ok(chi.to_u8().unwrap_or(0))
        }
        None => {
            let g = &params.gamma;
            let t0 = pow_adaptive(&CertifiedReal::from_integer(m as i64), g)?;
            let t1 = pow_adaptive(&CertifiedReal::from_integer(m as i64 + 1), g)?;
            let chi = certified_floor(&t0.neg())? - certified_floor(&t1.neg())?;
            debug_assert!(chi == BigInt::from(0) || chi == BigInt::from(1));
            Ok(chi.to_u8().unwrap_or(0))
        }
    }
}

/// Defect of the smoothed expansion of the indicator:
/// `chi(m) - gamma m^(gamma-1) - psi(-(m+1)^gamma) + psi(-m^gamma)`.
///
/// Algebraically this telescopes to `(m+1)^gamma - m^gamma - gamma m^(gamma-1)`,
/// so its absolute value is bounded by the exact second-order Taylor constant
/// `gamma(1-gamma)/2 * m^(gamma-2)`.
pub fn ps_expansion_residual(params: &PSParams, m: u64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParam("m must be >= 2".into()));
    }
    let chi = ps_indicator(params, m)? as f64;
    let gamma = params.gamma_f64();
    let main = gamma * (m as f64).powf(gamma - 1.0);
    let psi_at = |mm: u64| -> Result<f64> {
        // psi(-mm^gamma) with the floor taken exactly
        let (ceil, exact) = match params.rational_c {
            Some((p, q)) => ceil_power(mm, q, p),
            None => {
                let t = pow_adaptive(&CertifiedReal::from_integer(mm as i64), &params.gamma)?;
                let f = certified_floor(&t.neg())?;
                (-f, false)
            }
        };
        let frac = if exact {
            0.0
        } else {
            ceil.to_f64().unwrap() - (mm as f64).powf(gamma)
        };
        Ok(frac - 0.5)
    };
    Ok(chi - main - psi_at(m + 1)? + psi_at(m)?)
}

/// Upper bound for `|ps_expansion_residual|` from the exact Taylor remainder.
pub fn ps_residual_bound(params: &PSParams, m: u64) -> f64 {
    let gamma = params.gamma_f64();
    gamma * (1.0 - gamma) / 2.0 * (m as f64).powf(gamma - 2.0)
}

/// Count of primes `p <= x` hit by the power sequence, via the indicator.
pub fn pi_c_count(params: &PSParams, x: u64, primes: &SieveTable) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    assert!(primes.lo() <= 2 && primes.hi() >= x, "sieve window must cover [2, x]");
    use rayon::prelude::*;
    // Fixed blocks; exact integer reduction is order-independent.
    let blocks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut a = 2u64;
        while a <= x {
            let b = (a + (1 << 16) - 1).min(x);
            v.push((a, b));
            a = b + 1;
        }
        v
    };
    blocks
        .par_iter()
        .map(|&(a, b)| -> Result<u64> {
            let mut s = 0u64;
            for p in a..=b {
                if primes.is_prime(p) {
                    s += ps_indicator(params, p)? as u64;
                }
            }
            Ok(s)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Count of distinct primes `<= x` among the generated terms — the
/// generator-side route of the counting identity.
pub fn pi_c_count_generator(params: &PSParams, x: u64, primes: &SieveTable) -> Result<u64> {
    let mut count = 0u64;
    let mut n = 1u64;
    loop {
        let t = ps_term(params, n)?;
        let t = match t.to_u64() {
            Some(v) => v,
            None => break,
        };
        if t > x {
            break;
        }
        // floor(n^c) is strictly increasing for c > 1, so no deduplication
        // is needed.
        if t >= 2 && primes.is_prime(t) {
            count += 1;
        }
        n += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::parse_real;

    fn sqrt2_params() -> BeattyParams {
        BeattyParams::new(CertifiedReal::sqrt_int(2), CertifiedReal::zero()).unwrap()
    }

    fn ps_3_2() -> PSParams {
        PSParams::new(CertifiedReal::from_ratio(3, 2)).unwrap()
    }

    #[test]
    fn beatty_terms_sqrt2() {
        let p = sqrt2_params();
        assert_eq!(beatty_term(&p, 1).unwrap(), BigInt::from(1));
        assert_eq!(beatty_term(&p, 2).unwrap(), BigInt::from(2));
        assert_eq!(beatty_term(&p, 3).unwrap(), BigInt::from(4));
    }

    #[test]
    fn beatty_indicator_vs_generator() {
        let p = sqrt2_params();
        let members: Vec<i64> = (1..=10)
            .map(|n| beatty_term(&p, n).unwrap().to_i64().unwrap())
            .collect();
        assert_eq!(beatty_indicator(&p, 1).unwrap(), 1);
        assert_eq!(beatty_indicator(&p, 3).unwrap(), 0);
        assert_eq!(beatty_indicator(&p, 4).unwrap(), 1);
        for m in 1..=12i64 {
            let expect = members.contains(&m) as u8;
            assert_eq!(beatty_indicator(&p, m).unwrap(), expect, "m={m}");
        }
    }

    #[test]
    fn alpha_must_exceed_one() {
        assert!(BeattyParams::new(CertifiedReal::one(), CertifiedReal::zero()).is_err());
        assert!(
            BeattyParams::new(CertifiedReal::from_ratio(1, 2), CertifiedReal::zero()).is_err()
        );
    }

    #[test]
    fn inv_alpha_is_exact() {
        let p = sqrt2_params();
        let prod = p.inv_alpha().mul(p.alpha());
        assert_eq!(prod.as_rational().unwrap(), &num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn psi_form_matches_indicator() {
        let p = sqrt2_params();
        for m in [3i64, 4] {
            let chi = beatty_indicator(&p, m).unwrap() as f64;
            let smooth = beatty_psi_form(&p, m).unwrap();
            assert!((smooth - chi).abs() < 1e-10, "m={m}: {smooth} vs {chi}");
        }
    }

    #[test]
    fn psi_form_rejects_rational_alpha() {
        let p = BeattyParams::new(CertifiedReal::from_integer(2), CertifiedReal::zero()).unwrap();
        assert!(matches!(beatty_psi_form(&p, 4), Err(Error::RationalInput)));
    }

    #[test]
    fn ps_terms_c_3_2() {
        let p = ps_3_2();
        assert_eq!(ps_term(&p, 1).unwrap(), BigInt::from(1));
        assert_eq!(ps_term(&p, 2).unwrap(), BigInt::from(2));
        assert_eq!(ps_term(&p, 4).unwrap(), BigInt::from(8));
    }

    #[test]
    fn ps_indicator_examples() {
        let p = ps_3_2();
        assert_eq!(ps_indicator(&p, 2).unwrap(), 1);
        assert_eq!(ps_indicator(&p, 3).unwrap(), 0);
        assert_eq!(ps_indicator(&p, 5).unwrap(), 1);
    }

    #[test]
    fn ps_indicator_adaptive_backend_agrees() {
        let exact = ps_3_2();
        let adaptive = ps_3_2().with_adaptive_backend();
        for m in 1..=60u64 {
            assert_eq!(
                ps_indicator(&exact, m).unwrap(),
                ps_indicator(&adaptive, m).unwrap(),
                "m={m}"
            );
        }
        for n in 1..=40u64 {
            assert_eq!(ps_term(&exact, n).unwrap(), ps_term(&adaptive, n).unwrap());
        }
    }

    #[test]
    fn residual_bound_examples() {
        let p = ps_3_2();
        for m in [2u64, 10, 1000, 1_000_000] {
            let r = ps_expansion_residual(&p, m).unwrap();
            let bound = ps_residual_bound(&p, m);
            assert!(
                r.abs() <= bound + 1e-12,
                "m={m}: residual {r} exceeds bound {bound}"
            );
        }
        // order-of-magnitude checks from the contract
        assert!(ps_residual_bound(&p, 10) < 0.0025);
        assert!(ps_residual_bound(&p, 1_000_000) < 1e-8);
    }

    #[test]
    fn pi_c_count_small() {
        let p = ps_3_2();
        let primes = SieveTable::build(2, 100).unwrap();
        // terms <= 10: 1, 2, 5, 8 ; primes among them: 2, 5
        assert_eq!(pi_c_count(&p, 10, &primes).unwrap(), 2);
        assert_eq!(pi_c_count(&p, 2, &primes).unwrap(), 1);
        assert_eq!(pi_c_count(&p, 1, &primes).unwrap(), 0);
    }

    #[test]
    fn counting_identity_small() {
        let primes = SieveTable::build(2, 20_000).unwrap();
        for c in [parse_real("3/2").unwrap(), parse_real("5/4").unwrap()] {
            let p = PSParams::new(c).unwrap();
            let lhs = pi_c_count(&p, 20_000, &primes).unwrap();
            let rhs = pi_c_count_generator(&p, 20_000, &primes).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn beatty_huge_beta_has_no_natural_members() {
        let p = BeattyParams::new(
            CertifiedReal::sqrt_int(2),
            CertifiedReal::from_integer(1_000_000_000),
        )
        .unwrap();
        for m in [2i64, 97, 1000] {
            assert!(!beatty_member_natural(&p, m).unwrap());
        }
    }
}
