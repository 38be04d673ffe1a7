//! Core arithmetic: primes, multiplicative functions, Diophantine
//! approximation, and Dirichlet characters.
//!
//! Everything here is a pure function of its inputs; the sieve is segmented
//! and mergeable so callers can data-parallelize over windows.

mod cf;
mod characters;
mod primes;

pub use cf::{best_approx, switch_approx, RationalApprox};
pub use characters::{characters_mod, DirichletCharacter, CHARACTER_MODULUS_LIMIT};
pub use primes::{
    for_each_prime, iroot, is_prime, jacobi, mulmod, powmod, sieve_range, small_primes,
    PrimeTable, MAX_HI, MAX_RANGE,
};

/// Prime factorization `n = prod p_i^{a_i}`, `p_i` ascending.
///
/// Trial division by a small wheel, then Brent–Pollard rho for what
/// remains; every reported prime is certified by the deterministic
/// Miller–Rabin test.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
    }
    let mut d = 7u64;
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6]; // 7,11,13,17,19,23,29,31,...
    let mut w = 0usize;
    while d * d <= n && d < 100_000 {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut found: Vec<u64> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                found.push(m);
            } else {
                let f = pollard_rho(m);
                stack.push(f);
                stack.push(m / f);
            }
        }
        found.sort_unstable();
        let mut i = 0;
        while i < found.len() {
            let p = found[i];
            let mut a = 0;
            while i < found.len() && found[i] == p {
                a += 1;
                i += 1;
            }
            out.push((p, a));
        }
    }
    out.sort_unstable();
    out
}

fn pollard_rho(n: u64) -> u64 {
    assert!(n > 1 && n % 2 != 0);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Von Mangoldt function: `log p` when `n = p^a`, else 0.
pub fn mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let f = factorize(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}

/// Möbius function in `{-1, 0, 1}`.
pub fn moebius(n: u64) -> i32 {
    if n == 1 {
        return 1;
    }
    let f = factorize(n);
    if f.iter().any(|&(_, a)| a > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient.
pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Möbius values for all `n <= limit` as a sieved table (`mu[0]` unused).
pub fn moebius_sieve(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut lpf = vec![0u32; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    if limit >= 1 {
        mu[0] = 0;
    }
    for i in 2..=limit {
        if lpf[i] == 0 {
            lpf[i] = i as u32;
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            if p > lpf[i] as usize || i * p > limit {
                break;
            }
            lpf[i * p] = p as u32;
            mu[i * p] = if p == lpf[i] as usize { 0 } else { -mu[i] };
        }
    }
    mu
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, a) in factorize(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mangoldt_examples() {
        assert_eq!(mangoldt(1), 0.0);
        assert!((mangoldt(8) - 2f64.ln()).abs() < 1e-15); // 8 = 2^3
        assert_eq!(mangoldt(6), 0.0);
        assert!((mangoldt(97) - 97f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        for &p in &[2u64, 3, 97, 65537] {
            assert_eq!(totient(p), p - 1);
        }
        // oracle: count coprime residues
        for n in 1..=200u64 {
            let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(totient(n), count, "phi({n})");
        }
    }

    #[test]
    fn mangoldt_dirichlet_sum_is_log() {
        // sum_{d|n} Lambda(d) = log n, for n <= 10^5
        for n in 1..=100_000u64 {
            let s: f64 = divisors(n).iter().map(|&d| mangoldt(d)).sum();
            assert!(
                (s - (n as f64).ln()).abs() < 1e-9,
                "n={n}: {s} vs {}",
                (n as f64).ln()
            );
        }
    }

    #[test]
    fn moebius_dirichlet_sum_is_delta() {
        // sum_{d|n} mu(d) = [n = 1], exact integers, n <= 10^5
        let mu = moebius_sieve(100_000);
        let mut acc = vec![0i32; 100_001];
        for d in 1..=100_000usize {
            let mut m = d;
            while m <= 100_000 {
                acc[m] += mu[d] as i32;
                m += d;
            }
        }
        assert_eq!(acc[1], 1);
        for n in 2..=100_000usize {
            assert_eq!(acc[n], 0, "n={n}");
        }
    }

    #[test]
    fn moebius_sieve_matches_pointwise() {
        let mu = moebius_sieve(2000);
        for n in 1..=2000u64 {
            assert_eq!(mu[n as usize] as i32, moebius(n), "n={n}");
        }
    }

    #[test]
    fn factorize_semiprime_past_wheel() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(factorize(p * q), vec![(p, 1), (q, 1)]);
    }
}
