//! The divisor-slice census: build the target set, count its slices two
//! independent ways, estimate the main term, and evaluate the admissibility
//! arithmetic for almost-prime sieving.
//!
//! The target set collects `n` with `n^c <= x`, `floor(n^c)` prime, and that
//! prime a member of the linear floor sequence (with witness index >= 1).
//! Slices are counted from the n-side (enumerate the set, test divisibility)
//! and from the p-side (for each prime, decide whether `[p^gamma/d,
//! (p+1)^gamma/d)` contains an admissible integer); the two must agree
//! exactly, integer for integer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::SieveTable;
use crate::error::{Error, Result};
use crate::exactreal::{ceil_power, certified_floor, CertifiedReal};
use crate::seq::{beatty_member_natural, BeattyParams, PSParams};

/// Desk cap on the census range.
pub const X_CAP: u64 = 100_000_000;

/// Parameters of one census run.
#[derive(Clone)]
pub struct ExperimentConfig {
    pub x: u64,
    pub beatty: BeattyParams,
    pub ps: PSParams,
    /// Almost-prime threshold R (0 admits only n = 1, which never counts).
    pub r: u32,
    pub d_max: u64,
    pub eps: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.x < 100 {
            return Err(Error::InvalidParam("x must be >= 100".into()));
        }
        if self.x > X_CAP {
            return Err(Error::RangeTooLarge { hi: self.x, cap: X_CAP });
        }
        if self.d_max < 1 {
            return Err(Error::InvalidParam("D must be >= 1".into()));
        }
        let c = self.ps.c();
        let two = CertifiedReal::from_integer(2);
        if crate::exactreal::certified_compare(c, &two)? != std::cmp::Ordering::Less {
            return Err(Error::InvalidParam("c must lie in (1, 2)".into()));
        }
        Ok(())
    }

    pub fn build_primes(&self) -> Result<SieveTable> {
        SieveTable::build(2, self.x)
    }

    /// Largest admissible n: `floor(x^gamma)` (equivalently `n^c <= x`).
    pub fn n_max(&self) -> Result<u64> {
        match self.ps.rational_c() {
            Some((p, q)) => Ok(crate::exactreal::floor_power(self.x, q, p)
                .to_u64()
                .ok_or_else(|| Error::InvalidParam("x^gamma overflows".into()))?),
            None => {
                let x = CertifiedReal::from_integer(self.x as i64);
                let t = self.ps.gamma().mul(&x.ln()).exp();
                certified_floor(&t)?
                    .to_u64()
                    .ok_or_else(|| Error::InvalidParam("x^gamma overflows".into()))
            }
        }
    }
}

/// Exact rational `c_R = (96R - 12)/(88R + 85)`, the admissible exponent sup.
pub fn c_r(r: u64) -> BigRational {
    BigRational::new(
        BigInt::from(96) * BigInt::from(r) - BigInt::from(12),
        BigInt::from(88) * BigInt::from(r) + BigInt::from(85),
    )
}

/// `c_R` truncated (not rounded) to four decimals, as the reference table
/// prints it: 1236/1229 -> "1.0056".
pub fn c_r_display(r: u64) -> String {
    let v = c_r(r);
    let scaled = (v.numer() * BigInt::from(10_000)).div_floor(v.denom());
    let int = scaled.clone() / BigInt::from(10_000);
    let frac = scaled % BigInt::from(10_000);
    format!("{int}.{:04}", frac.to_u64().unwrap())
}

/// Sieve parameters: degree `g = (8R-1)/8` against the threshold `R - delta_R`
/// with `delta_R = 0.124820`, and the exponent window
/// `(8/(8R-1), gamma - 11/12)`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub r: u32,
    pub c_r: String,
    pub c_r_exact: (String, String),
    pub g: (i64, i64),
    pub delta_r: f64,
    pub sieve_ok: bool,
    pub window: Option<(f64, f64)>,
}

pub const DELTA_R: f64 = 0.124820;

pub fn admissibility(r: u32, gamma: f64) -> AdmissibilityReport {
    let r64 = r as i64;
    // g < R - delta_R checked in exact rationals (delta_R is a 6-digit decimal)
    let g = BigRational::new(BigInt::from(8 * r64 - 1), BigInt::from(8));
    let delta = BigRational::new(BigInt::from(124_820), BigInt::from(1_000_000));
    let sieve_ok = g < BigRational::from_integer(BigInt::from(r64)) - delta;
    // window nonempty iff gamma > (88R + 85)/(96R - 12), checked exactly
    // (f64 gamma is a dyadic rational).
    let threshold = BigRational::new(BigInt::from(88 * r64 + 85), BigInt::from(96 * r64 - 12));
    let gamma_exact = BigRational::from_float(gamma).unwrap_or_else(|| BigRational::from_integer(0.into()));
    let window = if threshold.is_positive() && gamma_exact > threshold {
        Some((8.0 / (8.0 * r as f64 - 1.0), gamma - 11.0 / 12.0))
    } else {
        None
    };
    let cr = c_r(r as u64);
    AdmissibilityReport {
        r,
        c_r: c_r_display(r as u64),
        c_r_exact: (cr.numer().to_string(), cr.denom().to_string()),
        g: (8 * r64 - 1, 8),
        delta_r: DELTA_R,
        sieve_ok,
        window,
    }
}

/// Per-prime census data: the unique admissible `n` with `floor(n^c) = p`
/// (if any) and the membership flag. Built once per `(x, c, alpha, beta)`,
/// reused by every slice count.
pub struct SliceCensus {
    /// (p, n_window) for every prime p <= x with the window already clipped
    /// to n <= n_max; `None` when the window is empty.
    entries: Vec<(u64, Option<u64>)>,
    member: Vec<bool>,
    pub n_max: u64,
}

impl SliceCensus {
    pub fn build(config: &ExperimentConfig, primes: &SieveTable) -> Result<SliceCensus> {
        config.validate()?;
        let n_max = config.n_max()?;
        let plist: Vec<u64> = primes.primes().take_while(|&p| p <= config.x).collect();
        let windows: Vec<Option<u64>> = plist
            .par_iter()
            .map(|&p| prime_window(&config.ps, p, n_max))
            .collect::<Result<_>>()?;
        // Membership is cached per prime; the certified floors dominate the
        // cost and are identical across d.
        let member: Vec<bool> = plist
            .par_iter()
            .map(|&p| beatty_member_natural(&config.beatty, p as i64))
            .collect::<Result<_>>()?;
        let entries = plist.into_iter().zip(windows).collect();
        Ok(SliceCensus {
            entries,
            member,
            n_max,
        })
    }

    /// p-side slice count: primes whose admissible window contains a multiple
    /// of d.
    pub fn count_dual(&self, d: u64) -> u64 {
        debug_assert!(d >= 1);
        self.entries
            .iter()
            .zip(&self.member)
            .filter(|((_, window), &m)| {
                m && matches!(window, Some(n) if n % d == 0)
            })
            .count() as u64
    }

    /// Members of the target set, ascending (the windows are disjoint and
    /// increasing in p).
    pub fn target_set(&self) -> Vec<u64> {
        self.entries
            .iter()
            .zip(&self.member)
            .filter_map(|((_, w), &m)| if m { *w } else { None })
            .collect()
    }
}

/// The integer window `[ceil(p^gamma), ceil((p+1)^gamma) - 1]` clipped to
/// `n <= n_max`, which has at most one element since `(p+1)^gamma - p^gamma < 1`.
fn prime_window(ps: &PSParams, p: u64, n_max: u64) -> Result<Option<u64>> {
    let (m_lo, m_hi) = match ps.rational_c() {
        Some((cp, cq)) => {
            let (lo, _) = ceil_power(p, cq, cp);
            let (hi, _) = ceil_power(p + 1, cq, cp);
            (lo, hi - 1)
        }
        None => {
            let root = |m: u64| -> Result<BigInt> {
                let t = ps
                    .gamma()
                    .mul(&CertifiedReal::from_integer(m as i64).ln())
                    .exp();
                // ceil(t) = -floor(-t)
                Ok(-certified_floor(&t.neg())?)
            };
            (root(p)?, root(p + 1)? - 1)
        }
    };
    if m_lo > m_hi {
        return Ok(None);
    }
    debug_assert_eq!(&m_lo, &m_hi, "window longer than one integer");
    let n = m_lo.to_u64().ok_or_else(|| Error::InvalidParam("window overflows u64".into()))?;
    Ok(if n <= n_max && n >= 1 { Some(n) } else { None })
}

/// n-side construction of the target set: enumerate n, take `p = floor(n^c)`,
/// keep primes that are sequence members. Computationally independent of the
/// p-side windows in [`SliceCensus`].
pub fn build_a(config: &ExperimentConfig, primes: &SieveTable) -> Result<Vec<u64>> {
    config.validate()?;
    let n_max = config.n_max()?;
    let chunk = 1u64 << 14;
    let bounds: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut a = 1u64;
        while a <= n_max {
            v.push((a, (a + chunk - 1).min(n_max)));
            a = v.last().unwrap().1 + 1;
        }
        v
    };
    // Membership answers are shared across chunks via a per-chunk local pass;
    // distinct n map to distinct p, so there is no cross-chunk reuse to miss.
    let chunks: Vec<Vec<u64>> = bounds
        .par_iter()
        .map(|&(a, b)| -> Result<Vec<u64>> {
            let mut out = Vec::new();
            for n in a..=b {
                let p = match ps_floor(&config.ps, n)? {
                    Some(p) if p >= 2 && p <= config.x => p,
                    _ => continue,
                };
                if primes.is_prime(p) && beatty_member_natural(&config.beatty, p as i64)? {
                    out.push(n);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

fn ps_floor(ps: &PSParams, n: u64) -> Result<Option<u64>> {
    let t = crate::seq::ps_term(ps, n)?;
    Ok(t.to_u64())
}

/// Both slice counts for one modulus; errors loudly when they disagree.
pub fn count_a_d(
    _config: &ExperimentConfig,
    d: u64,
    target: &[u64],
    census: &SliceCensus,
) -> Result<(u64, u64)> {
    if d < 1 {
        return Err(Error::InvalidParam("d must be >= 1".into()));
    }
    let direct = target.iter().filter(|&&n| n % d == 0).count() as u64;
    let dual = census.count_dual(d);
    if direct != dual {
        return Err(Error::MismatchedCounts { d, direct, dual });
    }
    Ok((direct, dual))
}

/// Main-term pair: the finite sum `a gamma sum_{p<=x} p^(gamma-1)` and the
/// asymptotic form `x^gamma / (alpha log x)`.
pub fn main_term(config: &ExperimentConfig, primes: &SieveTable) -> Result<(f64, f64)> {
    let a = config.beatty.inv_alpha().to_f64()?;
    let gamma = config.ps.gamma_f64();
    let x_hat = main_term_sum(a, gamma, config.x, primes);
    let xf = config.x as f64;
    let x_asym = xf.powf(gamma) * a / xf.ln();
    Ok((x_hat, x_asym))
}

/// `a * gamma * sum_{p <= x} p^(gamma - 1)`; separated out so the
/// `gamma -> 1` sanity limit (`pi(x) * a`) can be exercised directly.
pub fn main_term_sum(a: f64, gamma: f64, x: u64, primes: &SieveTable) -> f64 {
    // Fixed blocks, sequential combine: deterministic under any worker count.
    let blocks: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut lo = 2u64;
        while lo <= x {
            let hi = (lo + (1 << 16) - 1).min(x);
            v.push((lo, hi));
            lo = hi + 1;
        }
        v
    };
    let partials: Vec<f64> = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut s = 0.0;
            for p in lo..=hi {
                if primes.is_prime(p) {
                    s += (p as f64).powf(gamma - 1.0);
                }
            }
            s
        })
        .collect();
    a * gamma * partials.iter().sum::<f64>()
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceRow {
    pub d: u64,
    pub count_direct: u64,
    pub count_dual: u64,
    pub main_term: f64,
    pub error: f64,
}

/// Full census report over `d <= D`.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub schema: String,
    pub x: u64,
    pub alpha: String,
    pub beta: String,
    pub c: String,
    pub r: u32,
    pub eps: f64,
    pub n_max: u64,
    pub target_size: u64,
    pub per_d: Vec<SliceRow>,
    pub x_hat: f64,
    pub x_asym: f64,
    pub total_error: f64,
    /// The exponent-budget value `x^(gamma - 11/12 - eps)` reported next to
    /// the user's D; no inequality is asserted at desk scale.
    pub d_budget: f64,
    pub boundary_convention: String,
}

pub fn discrepancy_scan(
    config: &ExperimentConfig,
    primes: &SieveTable,
) -> Result<DiscrepancyReport> {
    config.validate()?;
    let census = SliceCensus::build(config, primes)?;
    let target = build_a(config, primes)?;
    let (x_hat, x_asym) = main_term(config, primes)?;
    let rows: Vec<SliceRow> = (1..=config.d_max)
        .into_par_iter()
        .map(|d| -> Result<SliceRow> {
            let (direct, dual) = count_a_d(config, d, &target, &census)?;
            let main = x_hat / d as f64;
            Ok(SliceRow {
                d,
                count_direct: direct,
                count_dual: dual,
                main_term: main,
                error: (direct as f64 - main).abs(),
            })
        })
        .collect::<Result<_>>()?;
    let total_error = rows.iter().map(|r| r.error).sum();
    let gamma = config.ps.gamma_f64();
    Ok(DiscrepancyReport {
        schema: crate::REPORT_SCHEMA.to_string(),
        x: config.x,
        alpha: format!("{}", config.beatty.alpha()),
        beta: format!("{}", config.beatty.beta()),
        c: format!("{}", config.ps.c()),
        r: config.r,
        eps: config.eps,
        n_max: census.n_max,
        target_size: target.len() as u64,
        per_d: rows,
        x_hat,
        x_asym,
        total_error,
        d_budget: (config.x as f64).powf(gamma - 11.0 / 12.0 - config.eps),
        boundary_convention: "n admitted iff n^c <= x (exact power comparison)".to_string(),
    })
}

/// Count of primes `p <= x` of the form `floor(n^c)` with `Omega(n) <= R`
/// and `p` a natural member of the linear sequence. Distinct n give distinct
/// p (the power floor is strictly increasing for c > 1), so this equals the
/// count of qualifying n.
pub fn theorem_count(config: &ExperimentConfig, primes: &SieveTable) -> Result<u64> {
    config.validate()?;
    let n_max = config.n_max()?;
    let omega_table = SieveTable::build(2, n_max.max(2))?;
    let target = build_a(config, primes)?;
    Ok(target
        .iter()
        .filter(|&&n| n >= 2 && omega_table.big_omega(n) <= config.r)
        .count() as u64)
}

/// Rows of the admissible-exponent table.
#[derive(Clone, Debug, Serialize)]
pub struct CrRow {
    pub r: u64,
    pub c_r: String,
    pub numer: String,
    pub denom: String,
}

pub fn crtable(rmin: u64, rmax: u64) -> Result<Vec<CrRow>> {
    if rmin < 1 || rmin > rmax {
        return Err(Error::InvalidParam("need 1 <= rmin <= rmax".into()));
    }
    Ok((rmin..=rmax)
        .map(|r| {
            let v = c_r(r);
            CrRow {
                r,
                c_r: c_r_display(r),
                numer: v.numer().to_string(),
                denom: v.denom().to_string(),
            }
        })
        .collect())
}

/// Aggregate slice counts keyed by modulus, for divisor-sum cross-checks.
pub fn slice_count_map(census: &SliceCensus, d_max: u64) -> BTreeMap<u64, u64> {
    (1..=d_max).map(|d| (d, census.count_dual(d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::parse_real;

    fn config(x: u64, c: &str, alpha: &str, beta: &str, r: u32, d_max: u64) -> ExperimentConfig {
        ExperimentConfig {
            x,
            beatty: BeattyParams::new(parse_real(alpha).unwrap(), parse_real(beta).unwrap())
                .unwrap(),
            ps: PSParams::new(parse_real(c).unwrap()).unwrap(),
            r,
            d_max,
            eps: 0.01,
        }
    }

    #[test]
    fn c_r_reference_values() {
        assert_eq!(c_r(13), BigRational::new(1236.into(), 1229.into()));
        assert_eq!(c_r(16), BigRational::new(1524.into(), 1493.into()));
        assert_eq!(c_r(21), BigRational::new(2004.into(), 1933.into()));
        assert_eq!(c_r_display(13), "1.0056");
        assert_eq!(c_r_display(16), "1.0207");
        assert_eq!(c_r_display(21), "1.0367");
    }

    #[test]
    fn c_r_monotone_and_bounded() {
        // difference has the closed-form numerator 9216, so it is positive;
        // 12/11 - c_R = 1152 / (11 (88R + 85)) is positive as well
        let mut prev = c_r(1);
        for r in 2..=1000u64 {
            let cur = c_r(r);
            let diff = &cur - &prev;
            let expect = BigRational::new(
                BigInt::from(9216),
                (BigInt::from(88) * BigInt::from(r - 1) + BigInt::from(85))
                    * (BigInt::from(88) * BigInt::from(r) + BigInt::from(85)),
            );
            assert_eq!(diff, expect, "difference formula at r={r}");
            prev = cur;
        }
        for r in [1u64, 13, 100, 1_000_000] {
            assert!(c_r(r) < BigRational::new(12.into(), 11.into()));
        }
    }

    #[test]
    fn admissibility_cases() {
        let rep = admissibility(13, 0.997);
        assert!(rep.sieve_ok);
        let (lo, hi) = rep.window.expect("window nonempty");
        assert!((lo - 8.0 / 103.0).abs() < 1e-12);
        assert!((hi - (0.997 - 11.0 / 12.0)).abs() < 1e-12);

        // R = 12: c_R < 1, so no gamma < 1 opens the window
        for gamma in [0.5, 0.9, 0.999, 0.9999999] {
            assert!(admissibility(12, gamma).window.is_none());
        }
        // below the threshold the window closes
        assert!(admissibility(13, 0.99).window.is_none());
        // g < R - delta_R reduces to 1/8 > 0.124820, true for every R
        for r in [1u32, 2, 13, 100] {
            assert!(admissibility(r, 0.5).sieve_ok);
        }
    }

    #[test]
    fn build_a_tiny() {
        let cfg = config(100, "3/2", "sqrt(2)", "0", 3, 10);
        let primes = cfg.build_primes().unwrap();
        // hand-enumerable at x = 100
        let a = build_a(&cfg, &primes).unwrap();
        assert_eq!(a, vec![2, 3, 5, 10, 12, 20]);
    }

    #[test]
    fn build_a_x10_equivalent() {
        // x = 100 restricted to n^c <= 10 reproduces the x = 10 case {2, 3};
        // (the config floor x >= 100 keeps tiny x out of the public surface)
        let cfg = config(100, "3/2", "sqrt(2)", "0", 3, 10);
        let primes = cfg.build_primes().unwrap();
        let a = build_a(&cfg, &primes).unwrap();
        let n_max_10 = crate::exactreal::floor_power(10, 2, 3).to_u64().unwrap();
        let restricted: Vec<u64> = a.into_iter().filter(|&n| n <= n_max_10).collect();
        assert_eq!(restricted, vec![2, 3]);
    }

    #[test]
    fn huge_beta_empties_the_set() {
        let cfg = config(10_000, "3/2", "sqrt(2)", "100000", 3, 10);
        let primes = cfg.build_primes().unwrap();
        assert!(build_a(&cfg, &primes).unwrap().is_empty());
    }

    #[test]
    fn dual_counts_agree_small() {
        let cfg = config(10_000, "25/24", "sqrt(2)", "0", 21, 50);
        let primes = cfg.build_primes().unwrap();
        let census = SliceCensus::build(&cfg, &primes).unwrap();
        let target = build_a(&cfg, &primes).unwrap();
        assert_eq!(target.len(), 585);
        let (direct, dual) = count_a_d(&cfg, 3, &target, &census).unwrap();
        assert_eq!(direct, 195);
        assert_eq!(dual, 195);
        let (d1, _) = count_a_d(&cfg, 1, &target, &census).unwrap();
        assert_eq!(d1, target.len() as u64);
        // d beyond n_max: both zero
        let (z1, z2) = count_a_d(&cfg, census.n_max + 1, &target, &census).unwrap();
        assert_eq!((z1, z2), (0, 0));
    }

    #[test]
    fn census_matches_n_side_set() {
        let cfg = config(10_000, "25/24", "sqrt(2)", "1/3", 21, 50);
        let primes = cfg.build_primes().unwrap();
        let census = SliceCensus::build(&cfg, &primes).unwrap();
        let target = build_a(&cfg, &primes).unwrap();
        assert_eq!(census.target_set(), target);
    }

    #[test]
    fn divisor_sum_over_slices() {
        // sum over d <= D of |A_d| counts each n once per divisor <= D
        let cfg = config(10_000, "25/24", "sqrt(2)", "0", 21, 30);
        let primes = cfg.build_primes().unwrap();
        let census = SliceCensus::build(&cfg, &primes).unwrap();
        let target = build_a(&cfg, &primes).unwrap();
        let total: u64 = slice_count_map(&census, 30).values().sum();
        let oracle: u64 = target
            .iter()
            .map(|&n| (1..=30u64).filter(|d| n % d == 0).count() as u64)
            .sum();
        assert_eq!(total, oracle);
    }

    #[test]
    fn main_term_scaling() {
        let cfg = config(100_000, "25/24", "sqrt(2)", "0", 21, 10);
        let primes = cfg.build_primes().unwrap();
        let (x_hat, x_asym) = main_term(&cfg, &primes).unwrap();
        assert!(x_hat > 0.0 && x_asym > 0.0);
        // halving a halves the finite sum bit-exactly (linear in a, and
        // scaling by a power of two commutes with every rounding step)
        let a = cfg.beatty.inv_alpha().to_f64().unwrap();
        let gamma = cfg.ps.gamma_f64();
        let half = main_term_sum(a / 2.0, gamma, cfg.x, &primes);
        assert_eq!(half, main_term_sum(a, gamma, cfg.x, &primes) / 2.0);
        // doubling alpha at the config level agrees to rounding
        let cfg2 = config(100_000, "25/24", "2*sqrt(2)", "0", 21, 10);
        let (x_hat2, x_asym2) = main_term(&cfg2, &primes).unwrap();
        assert!((x_hat2 - x_hat / 2.0).abs() <= 1e-12 * x_hat);
        assert!((x_asym2 - x_asym / 2.0).abs() <= 1e-12 * x_asym);
    }

    #[test]
    fn gamma_one_limit_is_prime_count() {
        let primes = SieveTable::build(2, 10_000).unwrap();
        let a = 0.25;
        let got = main_term_sum(a, 1.0, 10_000, &primes);
        let pi = primes.prime_count() as f64;
        assert!((got - a * pi).abs() < 1e-9);
    }

    #[test]
    fn theorem_count_hand_case() {
        let cfg = config(100, "3/2", "sqrt(2)", "0", 3, 10);
        let primes = cfg.build_primes().unwrap();
        assert_eq!(theorem_count(&cfg, &primes).unwrap(), 6);
        // R = 0 admits nothing
        let cfg0 = config(100, "3/2", "sqrt(2)", "0", 0, 10);
        assert_eq!(theorem_count(&cfg0, &primes).unwrap(), 0);
        // monotone in R
        let cfg1 = config(100, "3/2", "sqrt(2)", "0", 1, 10);
        let cfg2 = config(100, "3/2", "sqrt(2)", "0", 2, 10);
        let c1 = theorem_count(&cfg1, &primes).unwrap();
        let c2 = theorem_count(&cfg2, &primes).unwrap();
        let c3 = theorem_count(&cfg, &primes).unwrap();
        assert!(c1 <= c2 && c2 <= c3);
    }

    #[test]
    fn discrepancy_report_shape() {
        let cfg = config(10_000, "25/24", "sqrt(2)", "0", 21, 20);
        let primes = cfg.build_primes().unwrap();
        let rep = discrepancy_scan(&cfg, &primes).unwrap();
        assert_eq!(rep.per_d.len(), 20);
        assert!(rep.per_d.iter().all(|r| r.count_direct == r.count_dual));
        assert_eq!(rep.schema, crate::REPORT_SCHEMA);
        assert!(rep.total_error.is_finite());
        assert!(rep.d_budget > 0.0);
    }

    #[test]
    fn crtable_bounds() {
        assert!(crtable(0, 5).is_err());
        assert!(crtable(5, 4).is_err());
        let t = crtable(13, 21).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t[0].c_r, "1.0056");
    }
}
