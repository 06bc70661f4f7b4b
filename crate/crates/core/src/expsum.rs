//! Weighted exponential sums, the combinatorial decomposition of the von
//! Mangoldt function, and calculators for the explicit upper-bound formulas.
//!
//! The direct evaluator reduces phases modulo 1 in double precision with
//! compensated accumulation; a high-precision recompute path (interval
//! arithmetic on the phase) validates it on small ranges. Bound calculators
//! return a per-term breakdown so reports can show which term dominates.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, SieveTable};
use crate::error::{Error, Result};
use crate::exactreal::{CertifiedReal, Interval};
use crate::sawtooth::e_unit;

/// Default epsilon for the bound formulas; every report states the value used.
pub const DEFAULT_EPS: f64 = 0.01;

/// Range cap for direct summation.
pub const RANGE_CAP: u64 = 1_000_000_000;

/// Summand weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weight {
    Lambda,
    Unit,
    Log,
}

/// One of the exponential sums `sum_{lo < n <= hi} w(n) e(j/d * n^gamma + m1 n)`.
#[derive(Clone, Debug)]
pub struct ExpSumSpec {
    pub lo: u64,
    pub hi: u64,
    /// Frequency of the power phase; the harness requires `j != 0`, the raw
    /// evaluator tolerates 0 (pure linear phase) for cross-checks.
    pub j: i64,
    pub d: u64,
    pub gamma: f64,
    pub m1: f64,
    pub weight: Weight,
}

impl ExpSumSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::InvalidParam("lo must be <= hi".into()));
        }
        if self.hi > RANGE_CAP {
            return Err(Error::RangeTooLarge { hi: self.hi, cap: RANGE_CAP });
        }
        if self.d == 0 {
            return Err(Error::InvalidParam("d must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) || self.gamma == 0.0 {
            return Err(Error::InvalidParam("gamma must lie in (0,1)".into()));
        }
        if self.j == 0 {
            return Err(Error::InvalidParam("j must be nonzero".into()));
        }
        Ok(())
    }

    fn phase(&self, n: u64) -> f64 {
        let jd = self.j as f64 / self.d as f64;
        let power = (jd * (n as f64).powf(self.gamma)).rem_euclid(1.0);
        let linear = (self.m1 * n as f64).rem_euclid(1.0);
        power + linear
    }
}

#[derive(Clone, Copy, Default)]
struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

const BLOCK: u64 = 1 << 16;

fn blocks(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    let mut a = lo;
    while a <= hi {
        let b = (a + BLOCK - 1).min(hi);
        v.push((a, b));
        a = b + 1;
    }
    v
}

/// Direct evaluation of the sum over `(lo, hi]`. Parallel over fixed blocks;
/// the block partials are combined in index order, so the result does not
/// depend on the worker count.
pub fn exp_sum(spec: &ExpSumSpec) -> Result<Complex64> {
    if spec.hi > RANGE_CAP {
        return Err(Error::RangeTooLarge { hi: spec.hi, cap: RANGE_CAP });
    }
    if spec.lo >= spec.hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Lambda vanishes below 2; skipping keeps sieve windows valid.
    let start = match spec.weight {
        Weight::Lambda => (spec.lo + 1).max(2),
        _ => spec.lo + 1,
    };
    if start > spec.hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let parts: Vec<Result<Complex64>> = blocks(start, spec.hi)
        .par_iter()
        .map(|&(a, b)| -> Result<Complex64> {
            let weights = block_weights(spec.weight, a, b)?;
            let mut acc = KahanComplex::default();
            for n in a..=b {
                let w = weights.get(n);
                if w == 0.0 {
                    continue;
                }
                acc.add(e_unit(spec.phase(n)) * w);
            }
            Ok(acc.sum)
        })
        .collect();
    let mut total = KahanComplex::default();
    for p in parts {
        total.add(p?);
    }
    Ok(total.sum)
}

enum BlockWeights {
    Table(SieveTable),
    Unit,
    Log,
}

impl BlockWeights {
    fn get(&self, n: u64) -> f64 {
        match self {
            BlockWeights::Table(t) => t.von_mangoldt(n),
            BlockWeights::Unit => 1.0,
            BlockWeights::Log => (n as f64).ln(),
        }
    }
}

fn block_weights(weight: Weight, a: u64, b: u64) -> Result<BlockWeights> {
    Ok(match weight {
        Weight::Lambda => BlockWeights::Table(SieveTable::build(a.max(2), b)?),
        Weight::Unit => BlockWeights::Unit,
        Weight::Log => BlockWeights::Log,
    })
}

/// High-precision recompute path: phases are reduced modulo 1 by interval
/// arithmetic before the only floating-point step (sin/cos). Restricted to
/// small ranges; used to validate [`exp_sum`].
pub fn exp_sum_hp(spec: &ExpSumSpec) -> Result<Complex64> {
    const HP_CAP: u64 = 10_000;
    if spec.hi - spec.lo > HP_CAP {
        return Err(Error::RangeTooLarge { hi: spec.hi - spec.lo, cap: HP_CAP });
    }
    if spec.lo >= spec.hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Treat the f64 parameters as exact dyadic rationals so both paths target
    // the same mathematical sum.
    let gamma = BigRational::from_float(spec.gamma)
        .ok_or_else(|| Error::InvalidParam("gamma must be finite".into()))?;
    let m1 = BigRational::from_float(spec.m1)
        .ok_or_else(|| Error::InvalidParam("m1 must be finite".into()))?;
    let jd = BigRational::new(spec.j.into(), spec.d.into());
    let start = match spec.weight {
        Weight::Lambda => (spec.lo + 1).max(2),
        _ => spec.lo + 1,
    };
    if start > spec.hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let weights = block_weights(spec.weight, start, spec.hi)?;
    let mut acc = KahanComplex::default();
    for n in start..=spec.hi {
        let w = weights.get(n);
        if w == 0.0 {
            continue;
        }
        let frac = hp_phase_fraction(n, &jd, &gamma, &m1)?;
        acc.add(e_unit(frac) * w);
    }
    Ok(acc.sum)
}

fn hp_phase_fraction(
    n: u64,
    jd: &BigRational,
    gamma: &BigRational,
    m1: &BigRational,
) -> Result<f64> {
    let mut bits = 192u32;
    loop {
        let base = CertifiedReal::from_integer(n as i64);
        // n^gamma = exp(gamma ln n)
        let power = base
            .ln()
            .mul(&CertifiedReal::from_rational(gamma.clone()))
            .exp();
        let phase = power
            .mul(&CertifiedReal::from_rational(jd.clone()))
            .add(&CertifiedReal::from_rational(m1 * BigRational::from_integer(n.into())));
        let iv: Interval = phase.eval_interval(bits, 4096)?;
        if let Some(f) = iv.floor_certain() {
            let frac = iv.mid_f64() - f.to_f64().unwrap();
            return Ok(frac);
        }
        if bits >= 1024 {
            return Err(Error::AmbiguousFloor { bits });
        }
        bits *= 2;
    }
}

/// One aggregated term of the von Mangoldt decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct HBTerm {
    pub j: u32,
    pub binomial: u64,
    /// The inner sum over ordered factorizations for this j.
    pub inner_sum: f64,
    /// `(-1)^(j-1) * C(k, j) * inner_sum`.
    pub contribution: f64,
}

/// Decomposition of `Lambda(n)` into the `k`-fold identity terms with
/// truncation parameter `z`.
#[derive(Clone, Debug, Serialize)]
pub struct HBDecomposition {
    pub n: u64,
    pub k: u32,
    pub z: f64,
    pub terms: Vec<HBTerm>,
    pub total: f64,
}

/// Enumeration cap for ordered factorizations.
const HB_NODE_CAP: u64 = 100_000_000;
/// Largest n accepted for enumeration.
const HB_N_CAP: u64 = 100_000;

/// Expand `Lambda(n)` by the alternating identity
/// `sum_j (-1)^(j-1) C(k,j) sum_{n_1...n_{2j} = n, n_{j+1..2j} <= z} log(n_1) mu(n_{j+1})...mu(n_{2j})`,
/// by exhaustive ordered-divisor enumeration.
pub fn heath_brown(n: u64, k: u32, z: f64) -> Result<HBDecomposition> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParam("k must be in 1..=3".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParam("n must be >= 2".into()));
    }
    if n > HB_N_CAP {
        return Err(Error::RangeTooLarge { hi: n, cap: HB_N_CAP });
    }
    if z < 1.0 {
        return Err(Error::InvalidParam("z must be >= 1".into()));
    }
    if (n as f64) > 2.0 * z.powi(k as i32) {
        return Err(Error::HypothesisViolated(format!(
            "n = {n} exceeds 2 z^k = {}",
            2.0 * z.powi(k as i32)
        )));
    }
    let divisors = sorted_divisors(n)?;
    let mu: Vec<i8> = divisors
        .iter()
        .map(|&d| arith::mobius(d))
        .collect::<Result<_>>()?;
    let mut budget = HB_NODE_CAP;
    let mut terms = Vec::new();
    let mut total = 0.0;
    for j in 1..=k {
        let inner = hb_inner_sum(&divisors, &mu, n, j, z, &mut budget)?;
        let binomial = binom(k as u64, j as u64);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let contribution = sign * binomial as f64 * inner;
        total += contribution;
        terms.push(HBTerm {
            j,
            binomial,
            inner_sum: inner,
            contribution,
        });
    }
    Ok(HBDecomposition { n, k, z, terms, total })
}

fn binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn sorted_divisors(n: u64) -> Result<Vec<u64>> {
    let mut divs = vec![1u64];
    for (p, e) in arith::factorize(n)? {
        let snapshot = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            divs.extend(snapshot.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Sum over ordered tuples `(n_1, ..., n_{2j})` with product n: slots
/// `j+1..2j` are restricted to square-free values `<= z`, slot 1 carries the
/// log factor. Slots 2..=2j are enumerated; slot 1 takes the leftover, so
/// tuples with `n_1 = 1` contribute nothing automatically.
fn hb_inner_sum(
    divisors: &[u64],
    mu: &[i8],
    n: u64,
    j: u32,
    z: f64,
    budget: &mut u64,
) -> Result<f64> {
    fn rec(
        divisors: &[u64],
        mu: &[i8],
        slot: u32,
        two_j: u32,
        j: u32,
        rem: u64,
        mu_prod: i64,
        z: f64,
        budget: &mut u64,
        acc: &mut f64,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::TooManyFactorizations { cap: HB_NODE_CAP });
        }
        *budget -= 1;
        if slot > two_j {
            // leftover is n_1
            if rem > 1 {
                *acc += (rem as f64).ln() * mu_prod as f64;
            }
            return Ok(());
        }
        let constrained = slot > j;
        for (i, &d) in divisors.iter().enumerate() {
            if d > rem {
                break;
            }
            if rem % d != 0 {
                continue;
            }
            let mut factor = 1i64;
            if constrained {
                if d as f64 > z {
                    break;
                }
                if mu[i] == 0 {
                    continue;
                }
                factor = mu[i] as i64;
            }
            rec(
                divisors,
                mu,
                slot + 1,
                two_j,
                j,
                rem / d,
                mu_prod * factor,
                z,
                budget,
                acc,
            )?;
        }
        Ok(())
    }

    let mut acc = 0.0;
    // Enumerate constrained slots first (they prune hardest).
    rec(divisors, mu, j + 1, 2 * j, j, n, 1, z, budget, &mut acc)?;
    Ok(acc)
}

/// `(N q^(-1/2) + N^(4/5) + N^(1/2) q^(1/2)) log(N)^4`
pub fn vinogradov_bound(n: u64, q: u64) -> f64 {
    let nf = n as f64;
    let qf = q as f64;
    (nf / qf.sqrt() + nf.powf(0.8) + nf.sqrt() * qf.sqrt()) * nf.ln().powi(4)
}

/// `h^(1/2) M^(1 - 1/(2 tau) + eps) + M^(1 - eps)`
pub fn type_bound(m: u64, h: u64, tau: f64, eps: f64) -> f64 {
    let mf = m as f64;
    (h as f64).sqrt() * mf.powf(1.0 - 1.0 / (2.0 * tau) + eps) + mf.powf(1.0 - eps)
}

/// Second-derivative test: `a lambda2^(1/2) + lambda2^(-1/2)`
pub fn deriv_bound_2(a: f64, lambda2: f64) -> f64 {
    a * lambda2.sqrt() + 1.0 / lambda2.sqrt()
}

/// Third-derivative test: `a lambda3^(1/6) + lambda3^(-1/3)`
pub fn deriv_bound_3(a: f64, lambda3: f64) -> f64 {
    a * lambda3.powf(1.0 / 6.0) + lambda3.powf(-1.0 / 3.0)
}

/// A bound value with its per-term breakdown.
#[derive(Clone, Debug, Serialize)]
pub struct BoundBreakdown {
    pub terms: BTreeMap<String, f64>,
    pub total: f64,
}

impl BoundBreakdown {
    fn from_terms(terms: Vec<(String, f64)>) -> Self {
        let total = terms.iter().map(|(_, v)| v).sum();
        BoundBreakdown {
            terms: terms.into_iter().collect(),
            total,
        }
    }
}

/// Smooth-coefficient bilinear bound (valid for `K <= x^(1/2)`):
/// `|j|^(1/6) d^(-1/6) x^(gamma/6 + 3/4 + eps) + |j|^(-1/3) d^(1/3) x^(1 - gamma/3 + eps)`
pub fn type_i_bound(j: i64, d: u64, x: f64, gamma: f64, eps: f64) -> BoundBreakdown {
    let ja = j.unsigned_abs() as f64;
    let df = d as f64;
    BoundBreakdown::from_terms(vec![
        (
            "j^(1/6) d^(-1/6) x^(g/6+3/4+eps)".into(),
            ja.powf(1.0 / 6.0) * df.powf(-1.0 / 6.0) * x.powf(gamma / 6.0 + 0.75 + eps),
        ),
        (
            "j^(-1/3) d^(1/3) x^(1-g/3+eps)".into(),
            ja.powf(-1.0 / 3.0) * df.powf(1.0 / 3.0) * x.powf(1.0 - gamma / 3.0 + eps),
        ),
    ])
}

/// Rough-coefficient bilinear bound (valid for `x^(1/2) <= K <= x^(39/50)`);
/// the displayed value is independent of K.
pub fn type_ii_bound(j: i64, d: u64, x: f64, gamma: f64) -> BoundBreakdown {
    let ja = j.unsigned_abs() as f64;
    let df = d as f64;
    BoundBreakdown::from_terms(vec![
        (
            "j^(1/4) d^(-1/4) x^(g/4+5/8)".into(),
            ja.powf(0.25) * df.powf(-0.25) * x.powf(gamma / 4.0 + 0.625),
        ),
        (
            "j^(-1/4) d^(1/4) x^(1-g/4)".into(),
            ja.powf(-0.25) * df.powf(0.25) * x.powf(1.0 - gamma / 4.0),
        ),
        ("x^(89/100)".into(), x.powf(0.89)),
        (
            "j^(1/6) d^(-1/6) x^(g/6+3/4)".into(),
            ja.powf(1.0 / 6.0) * df.powf(-1.0 / 6.0) * x.powf(gamma / 6.0 + 0.75),
        ),
    ])
}

/// Five-term combined bound for the Lambda-weighted sum, all terms scaled by
/// `x^eps`.
pub fn combined_bound(j: i64, d: u64, x: f64, gamma: f64, eps: f64) -> BoundBreakdown {
    let ja = j.unsigned_abs() as f64;
    let df = d as f64;
    let xe = x.powf(eps);
    BoundBreakdown::from_terms(vec![
        (
            "j^(1/6) d^(-1/6) x^(g/6+3/4)".into(),
            xe * ja.powf(1.0 / 6.0) * df.powf(-1.0 / 6.0) * x.powf(gamma / 6.0 + 0.75),
        ),
        (
            "j^(-1/3) d^(1/3) x^(1-g/3)".into(),
            xe * ja.powf(-1.0 / 3.0) * df.powf(1.0 / 3.0) * x.powf(1.0 - gamma / 3.0),
        ),
        (
            "j^(1/4) d^(-1/4) x^(g/4+5/8)".into(),
            xe * ja.powf(0.25) * df.powf(-0.25) * x.powf(gamma / 4.0 + 0.625),
        ),
        (
            "j^(-1/4) d^(1/4) x^(1-g/4)".into(),
            xe * ja.powf(-0.25) * df.powf(0.25) * x.powf(1.0 - gamma / 4.0),
        ),
        ("x^(89/100)".into(), xe * x.powf(0.89)),
    ])
}

/// Which displayed bound to compare an empirical sum against.
#[derive(Clone, Copy, Debug)]
pub enum BoundSelector {
    TypeI,
    TypeII,
    Combined,
    Vinogradov { q: u64 },
    TypeTau { tau: f64 },
}

/// Empirical magnitude next to a selected bound, with metadata.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub empirical: f64,
    pub bound_terms: BTreeMap<String, f64>,
    pub total_bound: f64,
    pub ratio: f64,
    /// Auxiliary quantities: eps, the truncation caps H and J, etc.
    pub meta: BTreeMap<String, f64>,
}

/// Evaluate the sum and compare with the selected bound at `x = spec.hi`.
pub fn empirical_vs_bound(
    spec: &ExpSumSpec,
    which: BoundSelector,
    eps: f64,
) -> Result<BoundReport> {
    spec.validate()?;
    let empirical = exp_sum(spec)?.norm();
    let x = spec.hi as f64;
    let breakdown = match which {
        BoundSelector::TypeI => type_i_bound(spec.j, spec.d, x, spec.gamma, eps),
        BoundSelector::TypeII => type_ii_bound(spec.j, spec.d, x, spec.gamma),
        BoundSelector::Combined => combined_bound(spec.j, spec.d, x, spec.gamma, eps),
        BoundSelector::Vinogradov { q } => BoundBreakdown::from_terms(vec![(
            "vinogradov".into(),
            vinogradov_bound(spec.hi, q),
        )]),
        BoundSelector::TypeTau { tau } => BoundBreakdown::from_terms(vec![(
            "type_tau".into(),
            type_bound(spec.hi, spec.j.unsigned_abs().max(1), tau, eps),
        )]),
    };
    let mut meta = BTreeMap::new();
    meta.insert("eps".into(), eps);
    meta.insert("x".into(), x);
    meta.insert("h_cap".into(), h_cap(x, eps));
    meta.insert("j_cap".into(), j_cap(x, eps, spec.gamma, spec.d));
    Ok(BoundReport {
        empirical,
        ratio: empirical / breakdown.total,
        bound_terms: breakdown.terms,
        total_bound: breakdown.total,
        meta,
    })
}

/// Truncation length `H = x^eps` for the linear-phase expansion.
pub fn h_cap(x: f64, eps: f64) -> f64 {
    x.powf(eps)
}

/// Truncation length `J = x^(1 - gamma + eps) d` for the power-phase expansion.
pub fn j_cap(x: f64, eps: f64, gamma: f64, d: u64) -> f64 {
    x.powf(1.0 - gamma + eps) * d as f64
}

/// `theta_h = e(a h) - 1`, the linear-difference factor.
pub fn theta_h(a: f64, h: i64) -> Complex64 {
    e_unit(a * h as f64) - Complex64::new(1.0, 0.0)
}

/// `phi_j(t) = e(j/d ((t+1)^gamma - t^gamma)) - 1`, the power-difference factor.
pub fn phi_j(t: f64, j: i64, d: u64, gamma: f64) -> Complex64 {
    let delta = (t + 1.0).powf(gamma) - t.powf(gamma);
    e_unit(j as f64 / d as f64 * delta) - Complex64::new(1.0, 0.0)
}

/// Unit-weight monomial-phase case `sum_{a < n <= 2a} e(A n^gamma)` for the
/// derivative-test suites.
#[derive(Clone, Copy, Debug)]
pub struct MonomialCase {
    pub amplitude: f64,
    pub a: u64,
    pub gamma: f64,
}

impl MonomialCase {
    pub fn sum_magnitude(&self) -> f64 {
        let mut acc = KahanComplex::default();
        for n in (self.a + 1)..=(2 * self.a) {
            acc.add(e_unit(
                (self.amplitude * (n as f64).powf(self.gamma)).rem_euclid(1.0),
            ));
        }
        acc.sum.norm()
    }

    /// sup of |f''| over [a, 2a] (attained at the left endpoint).
    pub fn lambda2(&self) -> f64 {
        self.amplitude
            * self.gamma
            * (1.0 - self.gamma)
            * (self.a as f64).powf(self.gamma - 2.0)
    }

    /// sup of |f'''| over [a, 2a].
    pub fn lambda3(&self) -> f64 {
        self.amplitude
            * self.gamma
            * (1.0 - self.gamma)
            * (2.0 - self.gamma)
            * (self.a as f64).powf(self.gamma - 3.0)
    }
}

/// Seeded random cases with `a` log-uniform in [10^2, 10^4].
pub fn monomial_cases(seed: u64, count: usize) -> Vec<MonomialCase> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| MonomialCase {
            amplitude: 10f64.powf(rng.gen_range(-2.0..2.0)),
            a: 10f64.powf(rng.gen_range(2.0..4.0)) as u64,
            gamma: rng.gen_range(0.1..0.9),
        })
        .collect()
}
