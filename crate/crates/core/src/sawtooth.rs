//! Sawtooth function, its trigonometric-polynomial approximation with a
//! nonnegative majorant, and a posynomial parameter-optimization bound.
//!
//! The primary construction uses the extremal coefficients
//! `a_h = -W(h/(H+1)) / (2 pi i h)` with `W(t) = pi t (1-t) cot(pi t) + t`,
//! whose approximation error is majorized pointwise by the Fejer kernel
//! scaled by `1/(2H+2)`. A plain Fejer-smoothed construction is kept behind
//! [`VaalerKind::FejerFallback`] as a cross-check; it shares the coefficient
//! decay but not the pointwise majorant contract.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Sawtooth `psi(t) = t - floor(t) - 1/2`, with values in `[-1/2, 1/2)`.
pub fn psi(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// Which construction to use for the approximation coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VaalerKind {
    /// Extremal construction satisfying the majorant inequality.
    Vaaler,
    /// Fejer (Cesaro) smoothing of the Fourier series; same decay, weaker
    /// pointwise control. For cross-checks only.
    FejerFallback,
}

/// Decay constants asserted on construction: `|a_h| <= C_A / |h|` and
/// `b_h <= C_B / H`.
pub const C_A: f64 = 1.0;
pub const C_B: f64 = 2.0;

/// Coefficients of the degree-`H` approximation of the sawtooth.
#[derive(Clone, Debug)]
pub struct VaalerApprox {
    pub h_max: u32,
    /// `a_h` for `0 < |h| <= H`; conjugate-symmetric.
    pub a: BTreeMap<i64, Complex64>,
    /// `b_h >= 0` for `|h| <= H`; even in h. The polynomial
    /// `sum b_h e(th)` is a scaled Fejer kernel, hence nonnegative.
    pub b: BTreeMap<i64, f64>,
    pub kind: VaalerKind,
}

/// `W(t) = pi t (1-t) cot(pi t) + t` on (0, 1); takes values in [0, 1].
fn vaaler_weight(t: f64) -> f64 {
    debug_assert!(t > 0.0 && t < 1.0);
    let pt = std::f64::consts::PI * t;
    pt * (1.0 - t) * (pt.cos() / pt.sin()) + t
}

/// Build the coefficient family for a given `H`.
pub fn vaaler_build(h_max: u32) -> VaalerApprox {
    vaaler_build_kind(h_max, VaalerKind::Vaaler)
}

pub fn vaaler_build_kind(h_max: u32, kind: VaalerKind) -> VaalerApprox {
    assert!(h_max >= 1);
    let hp1 = (h_max + 1) as f64;
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    for h in 1..=h_max as i64 {
        let weight = match kind {
            VaalerKind::Vaaler => vaaler_weight(h as f64 / hp1),
            VaalerKind::FejerFallback => 1.0 - h as f64 / hp1,
        };
        // -W/(2 pi i h) = i W/(2 pi h)
        let coeff = Complex64::new(0.0, weight / (2.0 * std::f64::consts::PI * h as f64));
        a.insert(h, coeff);
        a.insert(-h, coeff.conj());
    }
    for h in 0..=h_max as i64 {
        let bh = (1.0 - h as f64 / hp1) / (2.0 * hp1);
        b.insert(h, bh);
        b.insert(-h, bh);
    }
    debug_assert!(a.iter().all(|(h, c)| c.norm() <= C_A / h.unsigned_abs() as f64));
    debug_assert!(b.values().all(|&v| v >= 0.0 && v <= C_B / h_max as f64));
    VaalerApprox {
        h_max,
        a,
        b,
        kind,
    }
}

impl VaalerApprox {
    /// `sum_{0<|h|<=H} a_h e(th)` (real up to rounding).
    pub fn eval_approx(&self, t: f64) -> Complex64 {
        // e(th) by recurrence over h to avoid 2H sin/cos calls.
        let step = e_unit(t);
        let mut cur = step;
        let mut acc = Complex64::new(0.0, 0.0);
        for h in 1..=self.h_max as i64 {
            let ah = self.a[&h];
            // a_h e(th) + conj(a_h) e(-th) = 2 Re(a_h e(th))
            acc += Complex64::new(2.0 * (ah * cur).re, 0.0);
            cur *= step;
        }
        acc
    }

    /// `sum_{|h|<=H} b_h e(th)` (real and nonnegative up to rounding).
    pub fn eval_majorant(&self, t: f64) -> f64 {
        let step = e_unit(t);
        let mut cur = step;
        let mut acc = self.b[&0];
        for h in 1..=self.h_max as i64 {
            acc += 2.0 * self.b[&h] * cur.re;
            cur *= step;
        }
        acc
    }
}

/// e(t) = exp(2 pi i t)
pub fn e_unit(t: f64) -> Complex64 {
    let arg = 2.0 * std::f64::consts::PI * t.rem_euclid(1.0);
    Complex64::new(arg.cos(), arg.sin())
}

/// Numerical slack for the pointwise check: the inequality holds with
/// equality exactly at integers (error and majorant are both 1/2 there), so
/// a few ulps of headroom are needed; a genuine construction bug violates at
/// the 1/H scale, far above this.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct VaalerCheckReport {
    pub h_max: u32,
    pub points: usize,
    pub max_err: f64,
    pub max_majorant: f64,
    pub mean_abs_err: f64,
    pub violations: u64,
    pub worst_margin: f64,
}

/// Verify `|psi(t) - sum a_h e(th)| <= sum b_h e(th)` on a grid.
pub fn vaaler_check(approx: &VaalerApprox, grid: &[f64]) -> Result<VaalerCheckReport> {
    if grid.is_empty() {
        return Err(Error::InvalidParam("empty grid".into()));
    }
    let mut max_err: f64 = 0.0;
    let mut max_majorant: f64 = 0.0;
    let mut mean_abs_err = 0.0;
    let mut violations = 0u64;
    let mut worst_margin = f64::INFINITY;
    let mut worst = None;
    for &t in grid {
        let ap = approx.eval_approx(t);
        debug_assert!(ap.im.abs() <= 1e-10);
        let err = (psi(t) - ap.re).abs();
        let maj = approx.eval_majorant(t);
        let margin = maj - err;
        if margin < worst_margin {
            worst_margin = margin;
        }
        if err > maj + CHECK_SLACK {
            violations += 1;
            worst = Some((t, err, maj));
        }
        max_err = max_err.max(err);
        max_majorant = max_majorant.max(maj);
        mean_abs_err += err;
    }
    mean_abs_err /= grid.len() as f64;
    if let Some((t, err, majorant)) = worst {
        return Err(Error::InequalityViolated { t, err, majorant });
    }
    Ok(VaalerCheckReport {
        h_max: approx.h_max,
        points: grid.len(),
        max_err,
        max_majorant,
        mean_abs_err,
        violations,
    worst_margin,
    })
}

/// Uniform grid of `n` points on [0, 1).
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64).collect()
}

/// Points crowding the sawtooth jump from both sides.
pub fn adversarial_grid(n: usize) -> Vec<f64> {
    let mut pts = Vec::with_capacity(n);
    let mut k = 1u32;
    let mut u = 1u64;
    while pts.len() < n {
        let t = u as f64 * 10f64.powi(-(k as i32));
        if t < 1.0 {
            pts.push(t);
            if pts.len() < n {
                pts.push(1.0 - t);
            }
        }
        k += 1;
        if k > 12 {
            k = 1;
            u = u * 3 + 1;
        }
    }
    pts.truncate(n);
    pts
}

/// A two-sided power law `L(H) = sum A_i H^(a_i) + sum B_j H^(-b_j)` together
/// with the admissible window `[h1, h2]`.
#[derive(Clone, Debug)]
pub struct SrinivasanBound {
    /// `(A_i, a_i)` pairs, all positive.
    pub increasing: Vec<(f64, f64)>,
    /// `(B_j, b_j)` pairs, all positive.
    pub decreasing: Vec<(f64, f64)>,
    pub h1: f64,
    pub h2: f64,
}

impl SrinivasanBound {
    pub fn validate(&self) -> Result<()> {
        if self.h1 <= 0.0 || self.h2 < self.h1 {
            return Err(Error::InvalidParam("need 0 < H1 <= H2".into()));
        }
        let all_pos = self
            .increasing
            .iter()
            .chain(&self.decreasing)
            .all(|&(c, e)| c > 0.0 && e > 0.0);
        if !all_pos {
            return Err(Error::InvalidParam(
                "coefficients and exponents must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn eval(&self, h: f64) -> f64 {
        let inc: f64 = self.increasing.iter().map(|&(c, e)| c * h.powf(e)).sum();
        let dec: f64 = self.decreasing.iter().map(|&(c, e)| c * h.powf(-e)).sum();
        inc + dec
    }
}

/// The three-part bound: value of the best `L(H)` achievable inside
/// `[H1, H2]` up to a constant depending only on the term counts.
pub fn srinivasan_bound(spec: &SrinivasanBound) -> Result<f64> {
    spec.validate()?;
    let part1: f64 = spec
        .increasing
        .iter()
        .map(|&(c, e)| c * spec.h1.powf(e))
        .sum();
    let part2: f64 = spec
        .decreasing
        .iter()
        .map(|&(c, e)| c * spec.h2.powf(-e))
        .sum();
    let part3: f64 = spec
        .increasing
        .iter()
        .flat_map(|&(ai_c, ai_e)| {
            spec.decreasing.iter().map(move |&(bj_c, bj_e)| {
                (ai_c.powf(bj_e) * bj_c.powf(ai_e)).powf(1.0 / (ai_e + bj_e))
            })
        })
        .sum();
    Ok(part1 + part2 + part3)
}

/// Contract constant for the witness check: `L(H*) <= witness_constant * bound`.
pub fn witness_constant(spec: &SrinivasanBound) -> f64 {
    (2 * spec.increasing.len().max(1) * spec.decreasing.len().max(1)) as f64
}

/// Grid minimizer of `L` over a log-uniform grid on `[H1, H2]`.
pub fn srinivasan_witness(spec: &SrinivasanBound, grid_size: usize) -> Result<(f64, f64)> {
    spec.validate()?;
    if grid_size < 2 {
        return Err(Error::InvalidParam("grid size must be >= 2".into()));
    }
    if spec.h1 == spec.h2 {
        return Ok((spec.h1, spec.eval(spec.h1)));
    }
    let (l1, l2) = (spec.h1.ln(), spec.h2.ln());
    let mut best_h = spec.h1;
    let mut best_l = f64::INFINITY;
    for i in 0..grid_size {
        let h = (l1 + (l2 - l1) * i as f64 / (grid_size - 1) as f64).exp();
        let l = spec.eval(h);
        if l < best_l {
            best_l = l;
            best_h = h;
        }
    }
    Ok((best_h, best_l))
}

/// Seeded random bound specs for the witness-contract suite.
pub fn random_srinivasan_specs(seed: u64, count: usize) -> Vec<SrinivasanBound> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=3);
            let coeff = |rng: &mut rand_chacha::ChaCha8Rng| {
                10f64.powf(rng.gen_range(-3.0..3.0))
            };
            let expo = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(0.25..3.0);
            let increasing = (0..m).map(|_| (coeff(&mut rng), expo(&mut rng))).collect();
            let decreasing = (0..n).map(|_| (coeff(&mut rng), expo(&mut rng))).collect();
            let h1 = 10f64.powf(rng.gen_range(-2.0..2.0));
            let h2 = h1 * 10f64.powf(rng.gen_range(0.0..4.0));
            SrinivasanBound {
                increasing,
                decreasing,
                h1,
                h2,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.25), -0.25);
        assert_eq!(psi(0.0), -0.5);
        assert_eq!(psi(1.75), 0.25);
        for t in [-2.5f64, -0.1, 0.0, 0.3, 7.9] {
            let v = psi(t);
            assert!((-0.5..0.5).contains(&v), "psi({t}) = {v}");
        }
    }

    #[test]
    fn build_h1_shapes() {
        let v = vaaler_build(1);
        assert_eq!(v.a.len(), 2);
        assert_eq!(v.b.len(), 3);
        assert!(v.b[&0] <= C_B);
    }

    #[test]
    fn coefficient_decay() {
        let v = vaaler_build(16);
        let max_ha = v
            .a
            .iter()
            .map(|(h, c)| h.unsigned_abs() as f64 * c.norm())
            .fold(0.0f64, f64::max);
        assert!(max_ha <= C_A);
        let v = vaaler_build(64);
        assert!(v.b.values().all(|&bh| bh <= C_B / 64.0));
    }

    #[test]
    fn check_small_grid() {
        let v = vaaler_build(4);
        let report = vaaler_check(&v, &uniform_grid(10_000)).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.mean_abs_err <= 2.0 / 4.0);
    }

    #[test]
    fn jump_point_has_half_majorant() {
        let v = vaaler_build(16);
        let maj = v.eval_majorant(0.0);
        assert!(maj >= 0.49, "majorant at the jump is {maj}");
        let err = (psi(0.0) - v.eval_approx(0.0).re).abs();
        assert!(err <= maj + CHECK_SLACK);
        // smooth point: comfortable slack
        let maj_half = v.eval_majorant(0.5);
        let err_half = (psi(0.5) - v.eval_approx(0.5).re).abs();
        assert!(err_half < maj_half);
    }

    #[test]
    fn fallback_decays_but_is_not_extremal() {
        let v = vaaler_build_kind(64, VaalerKind::FejerFallback);
        let grid = uniform_grid(2000);
        let mut mean = 0.0;
        let mut max_err = 0.0f64;
        for &t in &grid {
            let err = (psi(t) - v.eval_approx(t).re).abs();
            mean += err;
            max_err = max_err.max(err);
        }
        mean /= grid.len() as f64;
        // L1 rate of Fejer means for a bounded-variation function
        assert!(mean <= 10.0 * (66f64).ln() / 64.0, "mean {mean}");
        assert!(max_err <= 0.51);
    }

    #[test]
    fn srinivasan_examples() {
        let s1 = SrinivasanBound {
            increasing: vec![(1.0, 1.0)],
            decreasing: vec![(1.0, 1.0)],
            h1: 1.0,
            h2: 100.0,
        };
        assert!((srinivasan_bound(&s1).unwrap() - 2.01).abs() < 1e-12);
        let (h_star, l_star) = srinivasan_witness(&s1, 10_000).unwrap();
        assert!((l_star - 2.0).abs() < 1e-3, "min of H + 1/H is 2, got {l_star}");
        assert!(h_star < 1.1);
        assert!(l_star <= witness_constant(&s1) * srinivasan_bound(&s1).unwrap());

        let s2 = SrinivasanBound {
            increasing: vec![(1.0, 2.0)],
            decreasing: vec![(64.0, 1.0)],
            h1: 1.0,
            h2: 100.0,
        };
        assert!((srinivasan_bound(&s2).unwrap() - 17.64).abs() < 1e-12);
        let (_, l_star) = srinivasan_witness(&s2, 10_000).unwrap();
        assert!((l_star - 30.2381059).abs() < 1e-3);
        assert!(l_star <= 2.0 * 17.64);
    }

    #[test]
    fn srinivasan_empty_decreasing() {
        let s = SrinivasanBound {
            increasing: vec![(2.0, 1.5)],
            decreasing: vec![],
            h1: 3.0,
            h2: 50.0,
        };
        let b = srinivasan_bound(&s).unwrap();
        assert!((b - 2.0 * 3f64.powf(1.5)).abs() < 1e-12);
        let (h_star, l_star) = srinivasan_witness(&s, 1000).unwrap();
        assert!((h_star - 3.0).abs() < 1e-9);
        assert!(l_star <= witness_constant(&s) * b);
    }

    #[test]
    fn srinivasan_degenerate_window() {
        let s = SrinivasanBound {
            increasing: vec![(1.0, 1.0)],
            decreasing: vec![(1.0, 1.0)],
            h1: 7.0,
            h2: 7.0,
        };
        let (h_star, _) = srinivasan_witness(&s, 100).unwrap();
        assert_eq!(h_star, 7.0);
    }

    #[test]
    fn witness_contract_random_suite() {
        for spec in random_srinivasan_specs(7, 100) {
            let bound = srinivasan_bound(&spec).unwrap();
            let (_, l_star) = srinivasan_witness(&spec, 10_000).unwrap();
            assert!(
                l_star <= witness_constant(&spec) * bound * (1.0 + 1e-9),
                "witness contract failed: L*={l_star} bound={bound}"
            );
        }
    }

    #[test]
    fn majorant_is_real() {
        let v = vaaler_build(32);
        for &t in &uniform_grid(100) {
            // the b-side evaluation is a cosine sum by construction; check the
            // a-side imaginary part instead
            assert!(v.eval_approx(t).im.abs() <= 1e-10);
        }
    }
}
