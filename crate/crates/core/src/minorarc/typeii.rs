//! Type-II (bilinear) machinery: the exact Cauchy–Schwarz factors
//! `S1(U, W)` and `S2(V, W)` and their large-sieve bounds, including the
//! delta-scattered branch.

use crate::arith;
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::util::{e, Kahan, KahanComplex};

/// `S1(U, W) = sum_{x/2W < m <= x/W} |sum_{d|m, d>U} mu(d)|^2` by divisor
/// sieve over the window, compared to the `(3/pi^2)(x/W)` main term
/// (`(2/pi^2)(x/W)` when restricted to odd `m`).
pub fn type_ii_s1(u: f64, w: f64, x: f64, odd_only: bool) -> Result<BoundReport> {
    if x / (2.0 * w) < 1.0 {
        return Err(Error::Domain("need x/(2W) >= 1".into()));
    }
    let m_lo = (x / (2.0 * w)).floor() as u64 + 1;
    let m_hi = (x / w).floor() as u64;
    if m_hi > 20_000_000 {
        return Err(Error::Resource("S1 window over budget".into()));
    }
    let mu = arith::moebius_sieve(m_hi as usize);
    let len = (m_hi - m_lo + 1) as usize;
    let mut acc = vec![0i64; len];
    for d in 1..=m_hi {
        if mu[d as usize] == 0 || d as f64 <= u {
            continue;
        }
        let mut m = m_lo.div_ceil(d) * d;
        while m <= m_hi {
            acc[(m - m_lo) as usize] += mu[d as usize] as i64;
            m += d;
        }
    }
    let mut s1 = 0.0f64;
    for (i, &v) in acc.iter().enumerate() {
        let m = m_lo + i as u64;
        if odd_only && m % 2 == 0 {
            continue;
        }
        s1 += (v * v) as f64;
    }
    let main = if odd_only {
        2.0 / std::f64::consts::PI.powi(2) * x / w
    } else {
        3.0 / std::f64::consts::PI.powi(2) * x / w
    };
    Ok(
        BoundReport::new(format!("S1(U={u},W={w},x={x},odd={odd_only})"), main, s1)
            .with_term("window_lo", m_lo as f64)
            .with_term("window_hi", m_hi as f64),
    )
}

/// `S2(V, W) = sum_{x/2W <= m <= x/W} |sum_{max(V, W/2) <= n <= W}
/// Lambda(n) e(alpha m n)|^2`, exactly, against the weighted large-sieve
/// bound `(log W / log(W/2q)) (x/(4 phi(q)) + q W/phi(q)) W/2` — or, when
/// `|delta| > 4`, the delta-scattered variant
/// `(log W / log(W/(|delta| q))) (x/(|delta| phi(q)) + (q/phi(q)) W/2)
/// W/2`.
pub fn type_ii_s2(
    v: f64,
    w: f64,
    alpha: f64,
    q: u64,
    delta: f64,
    x: f64,
) -> Result<BoundReport> {
    if x / (2.0 * w) < 1.0 {
        return Err(Error::Domain("need x/(2W) >= 1".into()));
    }
    if x > 2e7 {
        return Err(Error::Resource("exact S2 budget is x <= 2e7".into()));
    }
    let m_lo = (x / (2.0 * w)).ceil() as u64;
    let m_hi = (x / w).floor() as u64;
    let n_lo = (v.max(w / 2.0)).ceil() as u64;
    let n_hi = w.floor() as u64;
    // Lambda on [n_lo, n_hi]
    let mut lam: Vec<(u64, f64)> = Vec::new();
    {
        let mut powers: Vec<(u64, f64)> = Vec::new();
        for p in arith::small_primes(n_hi.isqrt()) {
            let lp = (p as f64).ln();
            let mut m = p * p;
            while m <= n_hi {
                if m >= n_lo {
                    powers.push((m, lp));
                }
                match m.checked_mul(p) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        arith::for_each_prime(n_lo.max(2), n_hi, |p| lam.push((p, (p as f64).ln())));
        lam.extend(powers);
        lam.sort_unstable_by_key(|&(n, _)| n);
    }
    let mut s2 = Kahan::new();
    for m in m_lo..=m_hi {
        let mut inner = KahanComplex::new();
        for &(n, lp) in &lam {
            inner.add(e(alpha * (m as f64) * (n as f64)) * lp);
        }
        s2.add(inner.value().norm_sqr());
    }
    let measured = s2.value();
    let phi = arith::totient(q) as f64;
    let qf = q as f64;
    let scattered_ok = delta.abs() > 4.0 && w > delta.abs() * qf;
    let (bound, branch) = if scattered_ok {
        let gain = w.ln() / (w / (delta.abs() * qf)).ln();
        (
            gain * (x / (delta.abs() * phi) + (qf / phi) * w / 2.0) * (w / 2.0),
            "delta-scattered",
        )
    } else if w > 2.0 * qf {
        let gain = w.ln() / (w / (2.0 * qf)).ln();
        (
            gain * (x / (4.0 * phi) + qf * w / phi) * (w / 2.0),
            "weighted-large-sieve",
        )
    } else {
        // W <= 2q: choose not to gain the log factor
        ((x / (4.0 * phi) + qf * w / phi) * (w / 2.0), "no-gain")
    };
    Ok(BoundReport::new(
        format!("S2(V={v},W={w},q={q},delta={delta},x={x})"),
        bound,
        measured,
    )
    .with_term("m_window", (m_hi - m_lo + 1) as f64)
    .with_flag(branch))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_odd_subset_is_smaller() {
        let all = type_ii_s1(10.0, 100.0, 1e5, false).unwrap();
        let odd = type_ii_s1(10.0, 100.0, 1e5, true).unwrap();
        assert!(odd.measured <= all.measured);
        assert!(all.measured > 0.0);
    }

    #[test]
    fn s1_large_u_degenerates() {
        // U >= x/W: only d = m survives with m > U... no divisor d > U
        // except m itself when mu(m) != 0
        let rep = type_ii_s1(1000.0, 100.0, 1e5, false).unwrap();
        // every m in (500, 1000] has m <= 1000 = U, so inner sums vanish
        assert_eq!(rep.measured, 0.0);
    }

    #[test]
    fn s1_example_reported_constant() {
        let rep = type_ii_s1(10.0, 100.0, 1e5, false).unwrap();
        let c = rep.measured / (1e5 / 100.0);
        // reported, and in the study range observed well under 3/pi^2
        assert!(c > 0.0, "constant {c}");
    }

    #[test]
    fn s2_bounded_at_spec_point() {
        let x = 1e5;
        let q = 101u64;
        let alpha = 1.0 / q as f64 + 2.0 / x;
        let rep = type_ii_s2(10.0, 1e3, alpha, q, 2.0, x).unwrap();
        assert!(rep.holds(), "{} vs {}", rep.measured, rep.bound);
        assert!(rep.flags.iter().any(|f| f == "weighted-large-sieve"));
    }

    #[test]
    fn s2_branch_selection() {
        let x = 1e5;
        let q = 11u64;
        let alpha = 1.0 / q as f64 + 8.0 / x;
        let rep = type_ii_s2(10.0, 1e3, alpha, q, 8.0, x).unwrap();
        assert!(rep.flags.iter().any(|f| f == "delta-scattered"), "{rep:?}");
        let rep2 = type_ii_s2(10.0, 1e3, alpha, q, 2.0, x).unwrap();
        assert!(rep2.flags.iter().any(|f| f == "weighted-large-sieve"));
        // W <= 2q: no-gain branch
        let rep3 = type_ii_s2(10.0, 18.0, alpha, 11, 2.0, 100.0).unwrap();
        assert!(rep3.flags.iter().any(|f| f == "no-gain"));
    }

    #[test]
    fn s2_invariant_under_alpha_shift_and_negation() {
        let x = 2e4;
        let alpha = 0.2371;
        let a = type_ii_s2(10.0, 200.0, alpha, 7, 2.0, x).unwrap().measured;
        let b = type_ii_s2(10.0, 200.0, alpha + 1.0, 7, 2.0, x)
            .unwrap()
            .measured;
        let c = type_ii_s2(10.0, 200.0, -alpha, 7, 2.0, x).unwrap().measured;
        assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
        assert!((a - c).abs() < 1e-6 * a, "{a} vs {c}");
    }
}
