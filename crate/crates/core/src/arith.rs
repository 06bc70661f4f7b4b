//! Segmented sieve and multiplicative-function tables.
//!
//! [`SieveTable`] carries, for every integer of a window, primality plus
//! enough factor data to evaluate the von Mangoldt, Moebius and
//! prime-factor-count functions. Construction is segmented internally so
//! concatenated windows are bit-identical to a one-shot build.

use num_integer::Roots;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest allowed window length for a full table.
pub const WINDOW_CAP: u64 = 1 << 26;
/// Largest window end: base primes are sieved up to sqrt of this.
pub const HI_CAP: u64 = 1_000_000_000_000;
/// Internal segment length.
const SEGMENT: u64 = 1 << 20;

/// Primes up to 10^6, enough base primes for any window below [`HI_CAP`].
static BASE_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| simple_sieve(1_000_000));

fn simple_sieve(n: u32) -> Vec<u32> {
    let mut composite = vec![false; (n + 1) as usize];
    let mut primes = Vec::new();
    for i in 2..=n as usize {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Exact primality and factor data over an integer window `[lo, hi]`.
pub struct SieveTable {
    lo: u64,
    hi: u64,
    is_prime: Vec<u64>,
    /// Moebius value in {-1, 0, 1}.
    mu: Vec<i8>,
    /// Number of prime factors with multiplicity.
    omega: Vec<u8>,
    /// For n = p^k with k >= 2: the base prime p (fits: p <= sqrt(hi)); else 0.
    /// Primes themselves are read off the primality bitset.
    prime_power_base: Vec<u32>,
}

struct Segment {
    is_prime: Vec<u64>,
    mu: Vec<i8>,
    omega: Vec<u8>,
    prime_power_base: Vec<u32>,
}

fn sieve_segment(lo: u64, hi: u64) -> Segment {
    let len = (hi - lo + 1) as usize;
    let mut acc: Vec<u64> = vec![1; len];
    let mut mu: Vec<i8> = vec![1; len];
    let mut omega: Vec<u8> = vec![0; len];
    let mut first: Vec<u32> = vec![0; len];
    let mut multi: Vec<bool> = vec![false; len];
    let root = hi.sqrt();
    for &p in BASE_PRIMES.iter() {
        let p = p as u64;
        if p > root {
            break;
        }
        let mut m = if lo % p == 0 { lo } else { lo + (p - lo % p) };
        while m <= hi {
            let i = (m - lo) as usize;
            let mut e = 0u8;
            let mut v = m;
            while v % p == 0 {
                v /= p;
                e += 1;
                acc[i] = acc[i].saturating_mul(p);
            }
            omega[i] += e;
            mu[i] = if e >= 2 { 0 } else { -mu[i] };
            if first[i] == 0 {
                first[i] = p as u32;
            } else {
                multi[i] = true;
            }
            m += p;
        }
    }
    let mut is_prime = vec![0u64; (len + 63) / 64];
    let mut ppow = vec![0u32; len];
    for i in 0..len {
        let n = lo + i as u64;
        if n < 2 {
            mu[i] = if n == 1 { 1 } else { 0 };
            omega[i] = 0;
            continue;
        }
        if acc[i] < n {
            // one leftover prime factor > sqrt(hi)
            omega[i] += 1;
            mu[i] = -mu[i];
            if first[i] == 0 {
                // n itself is prime
                is_prime[i / 64] |= 1 << (i % 64);
            }
        } else if !multi[i] && omega[i] >= 2 {
            // n = p^k with k >= 2, p small
            ppow[i] = first[i];
        } else if omega[i] == 1 {
            // n = p with p <= sqrt(hi)
            is_prime[i / 64] |= 1 << (i % 64);
        }
    }
    Segment {
        is_prime,
        mu,
        omega,
        prime_power_base: ppow,
    }
}

impl SieveTable {
    /// Build the table for `[lo, hi]`, both inclusive.
    pub fn build(lo: u64, hi: u64) -> Result<SieveTable> {
        if lo < 2 || lo > hi {
            return Err(Error::InvalidParam(format!("bad window [{lo}, {hi}]")));
        }
        if hi > HI_CAP {
            return Err(Error::RangeTooLarge { hi, cap: HI_CAP });
        }
        let len = hi - lo + 1;
        if len > WINDOW_CAP {
            return Err(Error::WindowTooLarge { len, cap: WINDOW_CAP });
        }
        Lazy::force(&BASE_PRIMES);
        // Fixed segment boundaries make the build independent of worker count.
        let seg_bounds: Vec<(u64, u64)> = {
            let mut v = Vec::new();
            let mut a = lo;
            while a <= hi {
                let b = (a + SEGMENT - 1).min(hi);
                v.push((a, b));
                a = b + 1;
            }
            v
        };
        let segments: Vec<Segment> = seg_bounds
            .par_iter()
            .map(|&(a, b)| sieve_segment(a, b))
            .collect();
        let mut table = SieveTable {
            lo,
            hi,
            is_prime: vec![0u64; ((len as usize) + 63) / 64],
            mu: Vec::with_capacity(len as usize),
            omega: Vec::with_capacity(len as usize),
            prime_power_base: Vec::with_capacity(len as usize),
        };
        for (seg, &(a, _)) in segments.iter().zip(&seg_bounds) {
            let base = (a - lo) as usize;
            for i in 0..seg.mu.len() {
                if seg.is_prime[i / 64] >> (i % 64) & 1 == 1 {
                    let idx = base + i;
                    table.is_prime[idx / 64] |= 1 << (idx % 64);
                }
            }
            table.mu.extend_from_slice(&seg.mu);
            table.omega.extend_from_slice(&seg.omega);
            table.prime_power_base.extend_from_slice(&seg.prime_power_base);
        }
        Ok(table)
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    fn idx(&self, n: u64) -> usize {
        assert!(
            n >= self.lo && n <= self.hi,
            "{} outside sieve window [{}, {}]",
            n,
            self.lo,
            self.hi
        );
        (n - self.lo) as usize
    }

    pub fn is_prime(&self, n: u64) -> bool {
        let i = self.idx(n);
        self.is_prime[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn mobius(&self, n: u64) -> i8 {
        self.mu[self.idx(n)]
    }

    pub fn big_omega(&self, n: u64) -> u32 {
        self.omega[self.idx(n)] as u32
    }

    pub fn von_mangoldt(&self, n: u64) -> f64 {
        let i = self.idx(n);
        if self.is_prime[i / 64] >> (i % 64) & 1 == 1 {
            (n as f64).ln()
        } else if self.prime_power_base[i] != 0 {
            (self.prime_power_base[i] as f64).ln()
        } else {
            0.0
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (self.lo..=self.hi).filter(move |&n| self.is_prime(n))
    }

    pub fn prime_count(&self) -> u64 {
        self.is_prime.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Deterministic Miller-Rabin for u64 (the standard 12-witness base set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow_mod = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc: u128 = 1;
        let m = n as u128;
        let mut b = base as u128 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        base = acc as u64;
        base
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `n` by trial division over the cached base primes. Exact for
/// `n <= 10^12`; the leftover after trial division is then prime or the
/// square of a prime.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n > HI_CAP {
        return Err(Error::RangeTooLarge { hi: n, cap: HI_CAP });
    }
    let mut out = Vec::new();
    let mut rem = n;
    for &p in BASE_PRIMES.iter() {
        let p = p as u64;
        if p * p > rem {
            break;
        }
        if rem % p == 0 {
            let mut e = 0;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if rem > 1 {
        let r = rem.sqrt();
        if r * r == rem {
            out.push((r, 2));
        } else {
            debug_assert!(is_prime_u64(rem));
            out.push((rem, 1));
        }
    }
    Ok(out)
}

/// Von Mangoldt function: `log p` when `n = p^k`, else 0. Valid for any u64
/// via exact k-th root extraction.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    for k in 1..=63u32 {
        let r = n.nth_root(k);
        if r < 2 {
            break;
        }
        if r.pow(k) == n && is_prime_u64(r) {
            return (r as f64).ln();
        }
    }
    0.0
}

pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidParam("mobius(0)".into()));
    }
    let mut m = 1i8;
    for (_, e) in factorize(n)? {
        if e >= 2 {
            return Ok(0);
        }
        m = -m;
    }
    Ok(m)
}

pub fn big_omega(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParam("big_omega(0)".into()));
    }
    Ok(factorize(n)?.iter().map(|&(_, e)| e).sum())
}

/// True when `n` has at most `r` prime factors counted with multiplicity.
pub fn is_almost_prime(n: u64, r: u32) -> Result<bool> {
    Ok(big_omega(n)? <= r)
}

/// Prime counting function pi(x), by a segmented bitset count.
pub fn prime_count(x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    if x > HI_CAP {
        return Err(Error::RangeTooLarge { hi: x, cap: HI_CAP });
    }
    Lazy::force(&BASE_PRIMES);
    let seg_bounds: Vec<(u64, u64)> = {
        let mut v = Vec::new();
        let mut a = 2u64;
        while a <= x {
            let b = (a + (SEGMENT * 8) - 1).min(x);
            v.push((a, b));
            a = b + 1;
        }
        v
    };
    let total = seg_bounds
        .par_iter()
        .map(|&(a, b)| count_primes_segment(a, b))
        .sum();
    Ok(total)
}

fn count_primes_segment(lo: u64, hi: u64) -> u64 {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    let root = hi.sqrt();
    for &p in BASE_PRIMES.iter() {
        let p = p as u64;
        if p > root {
            break;
        }
        let mut m = (lo + p - 1) / p * p;
        if m == p {
            m = p * 2;
        }
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i] && lo + i as u64 >= 2)
        .count() as u64
}
