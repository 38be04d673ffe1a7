//! Segmented sieve and deterministic 64-bit primality.
//!
//! The sieve is odd-only and segmented so that arbitrary windows
//! `[lo, hi]` up to the configured budget can be enumerated without
//! materializing anything proportional to `hi`. Primality of individual
//! 64-bit integers uses Miller–Rabin with a base set proven deterministic
//! for all `n < 2^64`, so every "prime" answer is a certificate, not a
//! probabilistic claim.

use crate::error::{Error, Result};

/// Sieve segment length (odd numbers per block * 2).
const SEGMENT: u64 = 1 << 21;

/// Largest window length `sieve_range` accepts before reporting a
/// resource error (the output vector is the binding constraint).
pub const MAX_RANGE: u64 = 2_000_000_000;

/// Largest upper endpoint (base primes up to sqrt of this are sieved
/// eagerly; 10^14 keeps that under 10^7).
pub const MAX_HI: u64 = 100_000_000_000_000;

/// All primes `<= limit` by a plain odd-only sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut primes = vec![2u64];
    if limit < 3 {
        return primes;
    }
    // index i represents the odd number 2i + 3
    let n_odd = ((limit - 1) / 2) as usize;
    let mut composite = vec![false; n_odd];
    let mut i = 0usize;
    while {
        let p = 2 * i as u64 + 3;
        p * p <= limit
    } {
        if !composite[i] {
            let p = 2 * i as u64 + 3;
            let mut j = (p * p - 3) / 2;
            while (j as usize) < n_odd {
                composite[j as usize] = true;
                j += p;
            }
        }
        i += 1;
    }
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

/// Streams every prime in `[lo, hi]` (inclusive) to `f`, ascending.
pub fn for_each_prime(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi < 2 || hi < lo {
        return;
    }
    let lo = lo.max(2);
    if lo <= 2 {
        f(2);
    }
    let isqrt = hi.isqrt();
    let base: Vec<u64> = small_primes(isqrt).into_iter().skip(1).collect(); // odd base primes
    let mut seg_lo = lo.max(3) | 1; // first odd candidate
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 2).min(hi);
        let n_odd = ((seg_hi - seg_lo) / 2 + 1) as usize;
        let mut composite = vec![false; n_odd];
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            // first odd multiple of p in [max(p*p, seg_lo), seg_hi]
            let mut start = p * p;
            if start < seg_lo {
                let k = (seg_lo + p - 1) / p;
                start = k * p;
                if start % 2 == 0 {
                    start += p;
                }
            }
            let mut m = start;
            while m <= seg_hi {
                composite[((m - seg_lo) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                let n = seg_lo + 2 * i as u64;
                if n >= lo {
                    f(n);
                }
            }
        }
        seg_lo = seg_hi + 2;
    }
}

/// Ordered list of the primes in an interval.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

/// Exactly the primes in `[lo, hi]`.
pub fn sieve_range(lo: u64, hi: u64) -> Result<PrimeTable> {
    if lo < 2 || lo > hi {
        return Err(Error::Domain(format!(
            "sieve_range requires 2 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if hi > MAX_HI {
        return Err(Error::Resource(format!("hi = {hi} exceeds {MAX_HI}")));
    }
    if hi - lo > MAX_RANGE {
        return Err(Error::Resource(format!(
            "range length {} exceeds segment budget {MAX_RANGE}",
            hi - lo
        )));
    }
    let mut primes = Vec::new();
    for_each_prime(lo, hi, |p| primes.push(p));
    Ok(PrimeTable { lo, hi, primes })
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all `n < 2^64`
/// (Sinclair's seven-base set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for &a in &[2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    assert!(n % 2 == 1 && n > 0);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Floor of the `k`-th root of `n`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n <= 1 {
        return if k == 1 { n } else { n.min(1) };
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    // float seed, then correct by neighbors
    while r > 0 && checked_pow(r, k).map_or(true, |v| v > n) {
        r -= 1;
    }
    while checked_pow(r + 1, k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_primes() {
        let t = sieve_range(2, 10).unwrap();
        assert_eq!(t.primes, vec![2, 3, 5, 7]);
    }

    #[test]
    fn window_90_100() {
        // oracle: trial division
        let by_trial: Vec<u64> = (90..=100)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(by_trial, vec![97]);
        assert_eq!(sieve_range(90, 100).unwrap().primes, by_trial);
    }

    #[test]
    fn window_at_1e9_matches_miller_rabin_scan() {
        let lo = 1_000_000_000u64;
        let hi = lo + 100;
        let by_mr: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve_range(lo, hi).unwrap().primes, by_mr);
        assert!(!by_mr.is_empty());
    }

    #[test]
    fn small_window_cross_check_two_methods() {
        // segmented sieve vs the plain sieve on [2, 20000]
        let plain = small_primes(20_000);
        let seg = sieve_range(2, 20_000).unwrap().primes;
        assert_eq!(plain, seg);
    }

    #[test]
    fn domain_and_resource_errors() {
        assert!(matches!(sieve_range(1, 10), Err(Error::Domain(_))));
        assert!(matches!(
            sieve_range(2, MAX_HI + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn mr_against_sieve() {
        let primes = small_primes(10_000);
        let mut idx = 0;
        for n in 0..=10_000u64 {
            let in_sieve = idx < primes.len() && primes[idx] == n;
            if in_sieve {
                idx += 1;
            }
            assert_eq!(is_prime(n), in_sieve, "disagree at {n}");
        }
    }

    #[test]
    fn jacobi_matches_legendre_for_prime_modulus() {
        for &p in &[3u64, 5, 7, 11, 13, 101] {
            for a in 1..p {
                let euler = powmod(a, (p - 1) / 2, p);
                let want = if euler == 1 { 1 } else { -1 };
                assert_eq!(jacobi(a, p), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn iroot_exact() {
        assert_eq!(iroot(8, 3), 2);
        assert_eq!(iroot(9, 3), 2);
        assert_eq!(iroot(1 << 62, 62), 2);
        assert_eq!(iroot(u64::MAX, 2), 4294967295);
    }
}
