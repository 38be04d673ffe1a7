//! Direct evaluation of the smoothed prime exponential sums
//! `S_eta(alpha, x) = sum Lambda(n) e(alpha n) eta(n/x)`, their
//! character-twisted versions, exact representation counting by DFT
//! convolution, and arc integrals on the DFT grid.
//!
//! Summation contract: terms are accumulated in ascending `n` with
//! compensated summation, in fixed chunks of [`CHUNK`] integers; chunk
//! partials are folded in chunk order. Results are bit-identical for every
//! worker count.

mod dft;

pub use dft::{fft_forward, fft_inverse, mangoldt_sequence, prime_indicator_sequence};

use crate::arith::{self, DirichletCharacter};
use crate::error::{Error, Result};
use crate::majorarc::ArcSet;
use crate::report::BoundReport;
use crate::smoothing::Smoothing;
use crate::util::{e, run_chunked, KahanComplex};
use num_complex::Complex64;

/// Fixed chunk width for deterministic parallel summation.
pub const CHUNK: u64 = 1 << 20;

/// Largest admissible summation endpoint (resource guard).
pub const MAX_TERMS_END: u64 = 2_000_000_000;

/// An evaluated exponential sum with its metadata.
#[derive(Debug, Clone)]
pub struct ExpSum {
    pub value: Complex64,
    pub x: f64,
    pub alpha: f64,
    pub eta: String,
    /// count of nonzero summands (prime powers inside the support window)
    pub terms: u64,
    /// the support cutoff that defined the window
    pub cutoff: f64,
}

/// The summation window `[2, n_hi]` for `eta(n/x)`.
fn window(eta: &Smoothing, x: f64) -> Result<(u64, u64)> {
    let (lo_t, hi_t) = eta.support();
    let n_lo = ((lo_t * x).ceil() as u64).max(2);
    let n_hi = (hi_t * x).floor() as u64;
    if n_hi > MAX_TERMS_END {
        return Err(Error::Resource(format!(
            "summation endpoint {n_hi} over budget {MAX_TERMS_END}"
        )));
    }
    Ok((n_lo, n_hi))
}

/// Sums `Lambda(n) w(n, log p)` over prime powers `n` in `[lo, hi]`,
/// ascending, chunked deterministically. `w` must be pure.
fn mangoldt_sum<W>(lo: u64, hi: u64, workers: usize, w: W) -> (Complex64, u64)
where
    W: Fn(u64, f64) -> Complex64 + Sync,
{
    if hi < lo {
        return (Complex64::new(0.0, 0.0), 0);
    }
    let n_items = (hi - lo + 1) as usize;
    let partials = run_chunked(n_items, CHUNK as usize, workers, |range| {
        let c_lo = lo + range.start as u64;
        let c_hi = lo + range.end as u64 - 1;
        let mut acc = KahanComplex::new();
        let mut terms = 0u64;
        // prime powers p^k (k >= 2) in this chunk, merged in ascending order
        let mut powers: Vec<(u64, f64)> = Vec::new();
        for p in arith::small_primes(c_hi.isqrt()) {
            let lp = (p as f64).ln();
            let mut m = p * p;
            while m <= c_hi {
                if m >= c_lo {
                    powers.push((m, lp));
                }
                match m.checked_mul(p) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        powers.sort_unstable_by_key(|&(m, _)| m);
        let mut pi = 0usize;
        let mut push = |acc: &mut KahanComplex, terms: &mut u64, n: u64, lp: f64| {
            let v = w(n, lp);
            if v != Complex64::new(0.0, 0.0) {
                acc.add(v);
                *terms += 1;
            }
        };
        arith::for_each_prime(c_lo, c_hi, |p| {
            while pi < powers.len() && powers[pi].0 < p {
                let (m, lp) = powers[pi];
                push(&mut acc, &mut terms, m, lp);
                pi += 1;
            }
            push(&mut acc, &mut terms, p, (p as f64).ln());
        });
        while pi < powers.len() {
            let (m, lp) = powers[pi];
            push(&mut acc, &mut terms, m, lp);
            pi += 1;
        }
        (acc.value(), terms)
    });
    let mut total = KahanComplex::new();
    let mut terms = 0u64;
    for (v, t) in partials {
        total.add(v);
        terms += t;
    }
    (total.value(), terms)
}

/// `S_eta(alpha, x) = sum Lambda(n) e(alpha n) eta(n/x)`.
pub fn s_eta(eta: &Smoothing, alpha: f64, x: f64, workers: usize) -> Result<ExpSum> {
    if x < 2.0 {
        return Err(Error::Domain("x must be at least 2".into()));
    }
    let (lo, hi) = window(eta, x)?;
    let (value, terms) = mangoldt_sum(lo, hi, workers, |n, lp| {
        let w = eta.eval(n as f64 / x);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            e(alpha * n as f64) * (lp * w)
        }
    });
    Ok(ExpSum {
        value,
        x,
        alpha,
        eta: eta.name(),
        terms,
        cutoff: crate::smoothing::SUPPORT_CUTOFF,
    })
}

/// `S_{eta,chi}(delta/x, x) = sum Lambda(n) chi(n) e(delta n/x) eta(n/x)`.
pub fn s_eta_chi(
    eta: &Smoothing,
    chi: &DirichletCharacter,
    delta: f64,
    x: f64,
    workers: usize,
) -> Result<ExpSum> {
    if x < 2.0 {
        return Err(Error::Domain("x must be at least 2".into()));
    }
    let (lo, hi) = window(eta, x)?;
    let (value, terms) = mangoldt_sum(lo, hi, workers, |n, lp| match chi.eval_index(n) {
        None => Complex64::new(0.0, 0.0),
        Some((k, ord)) => {
            let w = eta.eval(n as f64 / x);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                e(k as f64 / ord as f64 + delta * n as f64 / x) * (lp * w)
            }
        }
    });
    Ok(ExpSum {
        value,
        x,
        alpha: delta / x,
        eta: eta.name(),
        terms,
        cutoff: crate::smoothing::SUPPORT_CUTOFF,
    })
}

/// Checks the character decomposition `S_eta(a/q + delta/x, x) =
/// sum_chi c_chi S_{eta,chi*}(delta/x, x) + (terms with gcd(n,q) > 1)`,
/// where `chi*` is the primitive character inducing the conjugate of
/// `chi` and `c_chi = G(a, chi)/phi(q)`, `G(a, chi) = sum_m chi(m)
/// e(am/q)`.
///
/// The report's `measured` is the two-sided discrepancy; its `bound` is
/// the budget for the dropped gcd terms. `|c_chi| <= sqrt(cond)/phi(q)`
/// is asserted along the way.
pub fn linear_combination_check(
    eta: &Smoothing,
    a: i64,
    q: u64,
    delta: f64,
    x: f64,
    workers: usize,
) -> Result<BoundReport> {
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    if q > 1 && arith::gcd(a.rem_euclid(q as i64) as u64, q) != 1 {
        return Err(Error::Domain("need gcd(a, q) = 1".into()));
    }
    let chars = arith::characters_mod(q)?;
    let phi = chars.len() as f64;
    let alpha = (a as f64 / q as f64 + delta / x).rem_euclid(1.0);
    let lhs = s_eta(eta, alpha, x, workers)?.value;

    let mut rhs = Complex64::new(0.0, 0.0);
    let mut c_bound_ok = true;
    let mut worst_c_slack = 0.0f64;
    for chi in &chars {
        let mut g = Complex64::new(0.0, 0.0);
        for m in 0..q.max(1) {
            let v = chi.eval(m);
            if v != Complex64::new(0.0, 0.0) {
                g += v * e((a as f64 * m as f64) / q as f64);
            }
        }
        let c = g / phi;
        let cap = (chi.conductor as f64).sqrt() / phi;
        worst_c_slack = worst_c_slack.max(c.norm() / cap);
        if c.norm() > cap + 1e-9 {
            c_bound_ok = false;
        }
        // the sum is weighted by conj(chi)(n); its values are e(-k/ord)
        // of the primitive character inducing chi
        let star = chi.primitive_character();
        let (lo, hi) = window(eta, x)?;
        let (twisted, _) = mangoldt_sum(lo, hi, workers, |n, lp| match star.eval_index(n) {
            None => Complex64::new(0.0, 0.0),
            Some((k, ord)) => {
                let w = eta.eval(n as f64 / x);
                if w == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    e(-(k as f64) / ord as f64 + delta * n as f64 / x) * (lp * w)
                }
            }
        });
        rhs += c * twisted;
    }

    // budget for the dropped terms: prime powers dividing q, appearing
    // once on the left and at most sqrt(q) total across the right
    let (_, hi) = window(eta, x)?;
    let mut budget = 0.0f64;
    for (p, _) in arith::factorize(q) {
        let lp = (p as f64).ln();
        let mut m = p;
        while m <= hi {
            budget += lp * eta.eval(m as f64 / x).abs();
            match m.checked_mul(p) {
                Some(next) => m = next,
                None => break,
            }
        }
    }
    let budget = budget * (1.0 + (q as f64).sqrt()) + 1e-7;

    let mut rep = BoundReport::new(
        format!("character-decomposition(q={q},a={a},delta={delta},x={x})"),
        budget,
        (lhs - rhs).norm(),
    )
    .with_term("lhs_abs", lhs.norm())
    .with_term("rhs_abs", rhs.norm())
    .with_term("worst_c_chi_slack", worst_c_slack);
    if !c_bound_ok {
        rep = rep.with_flag("C_CHI_BOUND_VIOLATION");
    }
    Ok(rep)
}

/// Exact ordered-triple representation counts.
#[derive(Debug, Clone, Copy)]
pub struct RepCount {
    pub n: u64,
    /// Lambda-weighted triple convolution (when computed)
    pub weighted: f64,
    /// ordered triples of primes summing to n
    pub unweighted: u64,
}

/// Memory guard for DFT buffers.
fn check_fft_budget(len: usize, buffers: usize) -> Result<()> {
    let need_mb = (len * 16 * buffers) as u64 / (1 << 20);
    let cap_mb = std::env::var("GOLDBACH_LAB_BUDGET_MB")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(4096);
    if need_mb > cap_mb {
        return Err(Error::Resource(format!(
            "DFT needs ~{need_mb} MB > budget {cap_mb} MB (set GOLDBACH_LAB_BUDGET_MB)"
        )));
    }
    Ok(())
}

/// Ordered triples of primes summing to `n`, by cubing the prime
/// indicator's DFT (length `N = 2^k > 3n`, so the additive convolution is
/// alias-free), cross-checked against the brute-force double loop for
/// `n <= brute_limit`.
pub fn count_reps(n: u64, brute_limit: u64) -> Result<RepCount> {
    if n < 7 {
        return Err(Error::Domain("need n >= 7".into()));
    }
    if n > 10_000_000 {
        return Err(Error::Resource("n over DFT budget 10^7".into()));
    }
    let len = crate::util::next_pow2(3 * n as usize);
    check_fft_budget(len, 1)?;
    let mut f = prime_indicator_sequence((n + 1) as usize);
    f.resize(len, Complex64::new(0.0, 0.0));
    fft_forward(&mut f);
    for v in f.iter_mut() {
        *v = *v * *v * *v;
    }
    fft_inverse(&mut f);
    let raw = f[n as usize].re;
    let count = raw.round();
    if (raw - count).abs() > 1e-3 {
        return Err(Error::Precision {
            msg: format!("DFT count at n={n} not near an integer: {raw}"),
            achieved: (raw - count).abs(),
        });
    }
    let unweighted = count as u64;
    if n <= brute_limit {
        let brute = count_reps_brute(n);
        if brute != unweighted {
            return Err(Error::MathFailure(format!(
                "count_reps disagree at n={n}: DFT {unweighted} vs brute {brute}"
            )));
        }
    }
    Ok(RepCount {
        n,
        weighted: 0.0,
        unweighted,
    })
}

/// Brute-force ordered-triple count (double loop over primes with a
/// primality bitmap lookup).
pub fn count_reps_brute(n: u64) -> u64 {
    let primes = arith::small_primes(n);
    let mut is_p = vec![false; (n + 1) as usize];
    for &p in &primes {
        is_p[p as usize] = true;
    }
    let mut count = 0u64;
    for &p1 in &primes {
        if p1 + 4 > n {
            break;
        }
        for &p2 in &primes {
            if p1 + p2 + 2 > n {
                break;
            }
            if is_p[(n - p1 - p2) as usize] {
                count += 1;
            }
        }
    }
    count
}

/// Lambda-weighted triple convolution `(f1 * f2 * f3)(n)` with
/// `f_i(m) = Lambda(m) eta_i(m/x)`, by DFT; brute-force double loop when
/// `n <= brute_limit`, asserted to 1e-6 relative.
pub fn count_reps_weighted(
    n: u64,
    etas: [&Smoothing; 3],
    x: f64,
    brute_limit: u64,
) -> Result<RepCount> {
    let len = crate::util::next_pow2(3 * n as usize);
    check_fft_budget(len, 2)?;
    let seq_len = ((n as usize) + 1).min(len);
    let mut prod: Vec<Complex64> = Vec::new();
    for (i, eta) in etas.iter().enumerate() {
        let mut f = mangoldt_sequence(eta, x, seq_len);
        f.resize(len, Complex64::new(0.0, 0.0));
        fft_forward(&mut f);
        if i == 0 {
            prod = f;
        } else {
            for (p, v) in prod.iter_mut().zip(f.iter()) {
                *p *= *v;
            }
        }
    }
    fft_inverse(&mut prod);
    let weighted = prod[n as usize].re;
    if n <= brute_limit {
        let brute = weighted_brute(n, etas, x);
        let scale = brute.abs().max(weighted.abs()).max(1e-12);
        if (weighted - brute).abs() / scale > 1e-6 {
            return Err(Error::MathFailure(format!(
                "weighted count_reps disagree at n={n}: DFT {weighted} vs brute {brute}"
            )));
        }
    }
    Ok(RepCount {
        n,
        weighted,
        unweighted: 0,
    })
}

fn weighted_brute(n: u64, etas: [&Smoothing; 3], x: f64) -> f64 {
    let mut lam = vec![0.0f64; (n + 1) as usize];
    arith::for_each_prime(2, n, |p| {
        let lp = (p as f64).ln();
        let mut m = p;
        while m <= n {
            lam[m as usize] = lp;
            match m.checked_mul(p) {
                Some(next) => m = next,
                None => break,
            }
        }
    });
    let mut acc = crate::util::Kahan::new();
    for a in 1..n {
        if lam[a as usize] == 0.0 {
            continue;
        }
        let fa = lam[a as usize] * etas[0].eval(a as f64 / x);
        if fa == 0.0 {
            continue;
        }
        for b in 1..(n - a) {
            if lam[b as usize] == 0.0 {
                continue;
            }
            let fb = lam[b as usize] * etas[1].eval(b as f64 / x);
            if fb == 0.0 {
                continue;
            }
            let c = n - a - b;
            if lam[c as usize] == 0.0 {
                continue;
            }
            let fc = lam[c as usize] * etas[2].eval(c as f64 / x);
            if fc != 0.0 {
                acc.add(fa * fb * fc);
            }
        }
    }
    acc.value()
}

/// `int_{arcs} S_{eta+}(alpha,x)^2 S_{eta*}(alpha,x) e(-alpha n) d alpha`
/// on the DFT grid of length `N = 2^k > 3x` (aligned so the full-circle
/// case reproduces the exact convolution), plus an error estimate from
/// comparing against the half-density grid.
pub fn arc_integral(
    eta_plus: &Smoothing,
    eta_star: &Smoothing,
    n: u64,
    arcs: &ArcSet,
    x: f64,
) -> Result<(Complex64, f64)> {
    let len = crate::util::next_pow2((3.0 * x) as usize);
    check_fft_budget(len, 2)?;
    let seq_len = ((eta_plus.support().1.max(eta_star.support().1) * x) as usize + 2).min(len);
    let mut fp = mangoldt_sequence(eta_plus, x, seq_len);
    fp.resize(len, Complex64::new(0.0, 0.0));
    fft_forward(&mut fp);
    let mut fs = mangoldt_sequence(eta_star, x, seq_len);
    fs.resize(len, Complex64::new(0.0, 0.0));
    fft_forward(&mut fs);
    // S(k/N) = conj(F[k]) for real sequences
    let mut full = KahanComplex::new();
    let mut half = KahanComplex::new();
    for k in 0..len {
        let alpha = k as f64 / len as f64;
        if arcs.contains(alpha) {
            let sp = fp[k].conj();
            let ss = fs[k].conj();
            let v = sp * sp * ss * e(-(k as f64) * n as f64 / len as f64);
            full.add(v);
            if k % 2 == 0 {
                half.add(v);
            }
        }
    }
    let value = full.value() / len as f64;
    let coarse = half.value() / (len / 2) as f64;
    let err = (value - coarse).norm();
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::Smoothing;

    #[test]
    fn sharp_cutoff_at_alpha_zero_recovers_psi() {
        // psi(100) = 94.0453... (direct Mangoldt summation as oracle);
        // eta1 doubles the indicator of [x/2, x]
        let psi100: f64 = (2..=100u64).map(crate::arith::mangoldt).sum();
        assert!((psi100 - 94.045).abs() < 1e-3);
        let x = 100.0;
        let s = s_eta(&Smoothing::Eta1, 0.0, x, 1).unwrap();
        let direct: f64 = (50..=100u64).map(|n| 2.0 * crate::arith::mangoldt(n)).sum();
        assert!(
            (s.value.re - direct).abs() < 1e-9,
            "{} vs {direct}",
            s.value.re
        );
        assert!(s.value.im.abs() < 1e-12);
    }

    #[test]
    fn alpha_zero_is_real() {
        let s = s_eta(&Smoothing::Gaussian, 0.0, 1000.0, 1).unwrap();
        assert!(s.value.im.abs() < 1e-12 * s.value.re.abs());
        assert!(s.value.re > 0.0);
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let a = s_eta(&Smoothing::Gaussian, 0.37, 3_000_000.0, 1).unwrap();
        let b = s_eta(&Smoothing::Gaussian, 0.37, 3_000_000.0, 5).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.terms, b.terms);
    }

    #[test]
    fn reversed_order_oracle_at_1e4() {
        // second implementation summing in reversed order, 1e-9 relative
        let x = 10_000.0;
        let alpha = 0.5;
        let s = s_eta(&Smoothing::Gaussian, alpha, x, 1).unwrap();
        let (lo, hi) = window(&Smoothing::Gaussian, x).unwrap();
        let mut terms: Vec<Complex64> = Vec::new();
        for n in lo..=hi {
            let l = crate::arith::mangoldt(n);
            if l != 0.0 {
                let w = Smoothing::Gaussian.eval(n as f64 / x);
                if w != 0.0 {
                    terms.push(crate::util::e(alpha * n as f64) * (l * w));
                }
            }
        }
        let rev: Complex64 = terms.iter().rev().sum();
        assert!(
            (s.value - rev).norm() <= 1e-9 * s.value.norm().max(1.0),
            "{} vs {rev}",
            s.value
        );
        assert_eq!(s.terms as usize, terms.len());
    }

    #[test]
    fn trivial_bound_holds() {
        let x = 30_000.0;
        let peak = s_eta(&Smoothing::Eta2, 0.0, x, 1).unwrap().value.norm();
        for alpha in [0.1, 0.33, 0.5, 0.777] {
            let v = s_eta(&Smoothing::Eta2, alpha, x, 1).unwrap().value.norm();
            assert!(v <= peak * (1.0 + 1e-12), "alpha={alpha}");
        }
    }

    #[test]
    fn chi_mod_1_reduces_to_plain_sum() {
        let chi = crate::arith::characters_mod(1).unwrap().pop().unwrap();
        let x = 5000.0;
        let delta = 2.5;
        let a = s_eta_chi(&Smoothing::Gaussian, &chi, delta, x, 1).unwrap();
        let b = s_eta(&Smoothing::Gaussian, delta / x, x, 1).unwrap();
        assert!((a.value - b.value).norm() < 1e-9 * b.value.norm());
    }

    #[test]
    fn real_character_gives_real_sum_at_delta_zero() {
        let chars = crate::arith::characters_mod(3).unwrap();
        let chi = chars.iter().find(|c| !c.is_principal()).unwrap();
        assert!(chi.is_real());
        let s = s_eta_chi(&Smoothing::Gaussian, chi, 0.0, 1000.0, 1).unwrap();
        assert!(s.value.im.abs() < 1e-10 * s.value.re.abs().max(1.0));
    }

    #[test]
    fn twisted_sum_regroups_by_residue_class() {
        let chars = crate::arith::characters_mod(3).unwrap();
        let chi = chars.iter().find(|c| !c.is_principal()).unwrap();
        let x = 1000.0;
        let s = s_eta_chi(&Smoothing::Gaussian, chi, 0.0, x, 1).unwrap();
        let mut by_class = [0.0f64; 3];
        let hi = (Smoothing::Gaussian.support().1 * x) as u64;
        for n in 2..=hi {
            let l = crate::arith::mangoldt(n);
            if l != 0.0 {
                by_class[(n % 3) as usize] += l * Smoothing::Gaussian.eval(n as f64 / x);
            }
        }
        let want = by_class[1] * chi.eval(1).re + by_class[2] * chi.eval(2).re;
        assert!((s.value.re - want).abs() < 1e-8 * want.abs().max(1.0));
    }

    #[test]
    fn character_decomposition_q1_exact() {
        let rep = linear_combination_check(&Smoothing::Gaussian, 0, 1, 1.0, 10_000.0, 1).unwrap();
        assert!(rep.measured < 1e-9, "{rep:?}");
    }

    #[test]
    fn character_decomposition_q3() {
        let rep = linear_combination_check(&Smoothing::Gaussian, 1, 3, 0.0, 10_000.0, 1).unwrap();
        assert!(
            rep.holds(),
            "discrepancy {} over budget {}",
            rep.measured,
            rep.bound
        );
        assert!(!rep.flags.iter().any(|f| f == "C_CHI_BOUND_VIOLATION"));
    }

    #[test]
    fn gauss_coefficient_bound_up_to_50() {
        for q in 1..=50u64 {
            let a = (1..q.max(2))
                .find(|&a| crate::arith::gcd(a, q) == 1)
                .unwrap_or(1);
            let rep =
                linear_combination_check(&Smoothing::Eta2, a as i64, q, 0.5, 2_000.0, 1).unwrap();
            assert!(
                !rep.flags.iter().any(|f| f == "C_CHI_BOUND_VIOLATION"),
                "q={q}: {rep:?}"
            );
        }
    }

    #[test]
    fn count_examples_from_brute_force() {
        // oracle-first: the brute force fixes 3, 4, 6 ordered triples
        assert_eq!(count_reps_brute(7), 3); // {2,2,3} permutations
        assert_eq!(count_reps_brute(9), 4); // {3,3,3}, {2,2,5} x 3
        assert_eq!(count_reps_brute(11), 6); // {3,3,5} x 3, {2,2,7} x 3
        for n in [7u64, 9, 11, 101, 999] {
            let r = count_reps(n, 10_000).unwrap();
            assert_eq!(r.unweighted, count_reps_brute(n), "n={n}");
        }
    }

    #[test]
    fn weighted_count_dft_vs_brute() {
        let eta = Smoothing::Eta2;
        let n = 2001u64;
        let x = n as f64 / 2.0;
        let r = count_reps_weighted(n, [&eta, &eta, &eta], x, 10_000).unwrap();
        assert!(r.weighted > 0.0);
    }

    #[test]
    fn plancherel_identity_on_dft_grid() {
        // (1/N) sum_k |S(k/N)|^2 = sum_n (Lambda(n) eta(n/x))^2 exactly
        let x = 10_000.0;
        let eta = Smoothing::Eta2;
        let len = crate::util::next_pow2(x as usize + 1);
        let mut f = mangoldt_sequence(&eta, x, x as usize + 1);
        let rhs: f64 = f.iter().map(|v| v.re * v.re).sum();
        f.resize(len, Complex64::new(0.0, 0.0));
        fft_forward(&mut f);
        let lhs: f64 = f.iter().map(|v| v.norm_sqr()).sum::<f64>() / len as f64;
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "{lhs} vs {rhs}");
    }
}
