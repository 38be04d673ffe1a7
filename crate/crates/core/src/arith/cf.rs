//! Diophantine approximation by continued fractions.

/// A rational approximation `a/q` to an angle `alpha`, with the Dirichlet
/// guarantee `|alpha - a/q| <= 1/(q*Q)` for the denominator cap `Q`.
///
/// `delta` is stored at full double precision together with its scale `x`,
/// so that `alpha = a/q + delta/x` is exactly reconstructible. When no scale
/// is attached, `scale = 1` and `delta` is the raw difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub a: i64,
    pub q: u64,
    pub delta: f64,
    pub scale: f64,
    pub cap: u64,
}

impl RationalApprox {
    pub fn alpha(&self) -> f64 {
        self.a as f64 / self.q as f64 + self.delta / self.scale
    }

    /// Re-expresses the offset against a new scale: `delta = (alpha - a/q) x`.
    pub fn with_scale(mut self, x: f64) -> Self {
        let diff = self.delta / self.scale;
        self.delta = diff * x;
        self.scale = x;
        self
    }

    /// Contract check `|alpha - a/q| <= 1/(q*Q)`.
    pub fn satisfies_contract(&self) -> bool {
        (self.delta / self.scale).abs() <= 1.0 / (self.q as f64 * self.cap as f64) + 1e-18
    }
}

/// Best rational approximation with denominator at most `cap`, computed by
/// continued-fraction convergents. The returned `a/q` satisfies
/// `gcd(a,q) = 1`, `q <= cap` and `|alpha - a/q| <= 1/(q*cap)`.
///
/// Ties between equally good convergents resolve toward smaller `q`
/// (the convergent sequence is taken in order, so the first denominator
/// within the cap wins).
pub fn best_approx(alpha: f64, cap: u64) -> RationalApprox {
    assert!((0.0..1.0).contains(&alpha), "alpha must lie in [0,1)");
    assert!(cap >= 1);
    // Convergents h_i/k_i of the continued fraction of alpha,
    // seeded with h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1.
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut x = alpha;
    loop {
        let a_i = x.floor();
        let frac = x - a_i;
        let a_i = a_i as i64;
        let h_next = a_i
            .checked_mul(h)
            .and_then(|v| v.checked_add(h_prev));
        let k_next = (a_i as u64)
            .checked_mul(k)
            .and_then(|v| v.checked_add(k_prev));
        match (h_next, k_next) {
            (Some(hn), Some(kn)) if kn <= cap => {
                h_prev = h;
                h = hn;
                k_prev = k;
                k = kn;
            }
            _ => break,
        }
        // Exact rational reached (within f64): stop before dividing by ~0.
        if frac < 1e-15 * x.abs().max(1.0) {
            break;
        }
        x = 1.0 / frac;
    }
    let delta = alpha - h as f64 / k as f64;
    RationalApprox {
        a: h,
        q: k,
        delta,
        scale: 1.0,
        cap,
    }
}

/// Switches to a finer approximation with cap `Q' > current.cap`.
///
/// If the new fraction differs from the old one, the separation
/// `|a/q - a'/q'| >= 1/(q q')` holds automatically for distinct reduced
/// fractions and is asserted in exact integer arithmetic.
pub fn switch_approx(alpha: f64, new_cap: u64, current: &RationalApprox) -> RationalApprox {
    assert!(new_cap > current.cap, "switch_approx requires Q' > Q");
    let next = best_approx(alpha, new_cap);
    if next.q != current.q || next.a != current.a {
        // |a/q - a'/q'| = |a q' - a' q| / (q q') >= 1/(q q')
        let num = (current.a as i128 * next.q as i128 - next.a as i128 * current.q as i128).abs();
        assert!(num >= 1, "distinct reduced fractions must separate");
    }
    next
}
