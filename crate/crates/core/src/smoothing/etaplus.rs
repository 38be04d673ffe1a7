//! Construction of the band-limited weight `eta_plus`.
//!
//! `h(t) = t^2 (2-t)^3 e^{t-1/2}` on `[0,2]` is approximated by `h_R`, the
//! inverse Mellin transform of the truncation of `Mh` to `[-iR, iR]`;
//! equivalently the Dirichlet-kernel smoothing
//! `h_R(t) = int_0^inf h(t/y) sin(R log y)/(pi log y) dy/y`.
//! The weight is then `eta_plus(t) = h_R(t) t e^{-t^2/2}`.
//!
//! Two evaluation routes are implemented. [`h_r_direct`] computes the
//! kernel integral (with the removable singularity at `y = 1` handled by a
//! 3-term Taylor expansion), and is the reference. [`EtaPlusTable`]
//! precomputes `Mh(iu)` on a frequency grid once, then fills a dense `t`
//! table of `h_R(t) = (1/pi) Re int_0^R Mh(iu) t^{-iu} du` — the same
//! object by the substitution `u = R log y` — so that million-term prime
//! sums can evaluate the weight cheaply. The table is what `eval` uses;
//! tests hold the two routes against each other.

use super::quad;
use crate::error::{Error, Result};
use crate::smoothing::Smoothing;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// End of the tabulated `t` range. Beyond it `t e^{-t^2/2}` times the
/// ringing tail of `h_R` is far below the support cutoff.
const T_MAX: f64 = 8.5;
/// Dense-table resolution.
const N_TABLE: usize = 1 << 16;
/// Frequency-grid step for `Mh(iu)` (resolves `e^{-iu log t}` for
/// `|log t| <= 12` with >10 points per period).
const DU: f64 = 0.05;

/// `h(t) = t^2 (2-t)^3 e^{t-1/2}` on `[0,2]`.
pub fn h_exact(t: f64) -> f64 {
    if !(0.0..=2.0).contains(&t) {
        return 0.0;
    }
    t * t * (2.0 - t).powi(3) * (t - 0.5).exp()
}

/// Precomputed `h_R` evaluator shared by the `h_R` and `eta_plus` kinds.
#[derive(Debug)]
pub struct EtaPlusTable {
    pub r: f64,
    step: f64,
    values: Vec<f64>,
    /// Mellin-line distance `|h_R - h|_{L2(dt/t)}`, computed at build time.
    pub l2_distance: f64,
}

impl EtaPlusTable {
    pub fn t_max(&self) -> f64 {
        T_MAX
    }

    /// Cubic 4-point interpolation of `h_R(t)` from the dense table.
    pub fn h_r(&self, t: f64) -> f64 {
        if !(0.0..=T_MAX).contains(&t) {
            return 0.0;
        }
        let pos = t / self.step;
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - i as f64;
        let n = self.values.len();
        let y0 = self.values[i.saturating_sub(1)];
        let y1 = self.values[i];
        let y2 = self.values[i + 1];
        let y3 = self.values[(i + 2).min(n - 1)];
        // Catmull-Rom
        let a = -0.5 * y0 + 1.5 * y1 - 1.5 * y2 + 0.5 * y3;
        let b = y0 - 2.5 * y1 + 2.0 * y2 - 0.5 * y3;
        let c = -0.5 * y0 + 0.5 * y2;
        ((a * s + b) * s + c) * s + y1
    }
}

/// `Mh(iu) = int_0^2 h(w) w^{iu-1} dw`, via `w = e^z`.
fn mh_at(u: f64) -> num_complex::Complex64 {
    // integrand h(e^z) e^{iuz}; h(e^z) < 1e-18 below z = -20
    let z_lo = -20.0;
    let z_hi = std::f64::consts::LN_2;
    let pts = quad::oscillation_breakpoints(z_lo, z_hi, u / (2.0 * std::f64::consts::PI), 4000);
    quad::adaptive_complex(
        |z| crate::util::e(u * z / (2.0 * std::f64::consts::PI)) * h_exact(z.exp()),
        &pts,
        1e-12,
        1e-10,
        8192,
    )
    .value
}

fn build_table(r: f64) -> Arc<EtaPlusTable> {
    // 1. Mh on the frequency grid [0, R], Simpson spacing DU
    let n_u = ((r / DU).ceil() as usize).max(8) | 1; // odd panel count + 1 nodes
    let n_u = n_u + (1 - n_u % 2); // even number of panels for Simpson
    let du = r / n_u as f64;
    let mh: Vec<num_complex::Complex64> = (0..=n_u).map(|k| mh_at(k as f64 * du)).collect();

    // 2. h_R(t) = (1/pi) Re int_0^R Mh(iu) e^{-iu ln t} du on a dense grid
    let step = T_MAX / (N_TABLE - 1) as f64;
    let mut values = vec![0.0f64; N_TABLE];
    for (j, v) in values.iter_mut().enumerate().skip(1) {
        let t = j as f64 * step;
        let lnt = t.ln();
        // incremental rotation e^{-i du ln t}
        let rot = num_complex::Complex64::from_polar(1.0, -du * lnt);
        let mut phase = num_complex::Complex64::new(1.0, 0.0);
        let mut acc = 0.0f64;
        for (k, m) in mh.iter().enumerate() {
            let w = if k == 0 || k == n_u {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * (m * phase).re;
            phase *= rot;
        }
        *v = acc * du / 3.0 / std::f64::consts::PI;
    }
    // linear extrapolation into the first cell; eta_plus vanishes there
    // anyway through the factor t
    values[0] = 2.0 * values[1] - values[2];

    // 3. Mellin-line distance |h_R - h| in L2(dt/t). (The plain L2(dt)
    // norm of (h_R - h)/t diverges at 0: the truncated inverse Mellin
    // transform decays only like 1/|log t|. The isometry argument lives on
    // the Mellin line, i.e. in L2(dt/t), and that is the norm reported.)
    let table = EtaPlusTable {
        r,
        step,
        values,
        l2_distance: 0.0,
    };
    let dist2 = quad::adaptive(
        |t| {
            let d = table.h_r(t) - h_exact(t);
            d * d / t
        },
        1e-6,
        T_MAX,
        1e-14,
        1e-6,
    )
    .value
    .re;
    Arc::new(EtaPlusTable {
        l2_distance: dist2.max(0.0).sqrt(),
        ..table
    })
}

fn table_cache(r: f64) -> Result<Arc<EtaPlusTable>> {
    if !(r > 0.0) || r > 2000.0 {
        return Err(Error::Domain(format!("eta_plus needs 0 < R <= 2000, got {r}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<EtaPlusTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    Ok(Arc::clone(
        guard.entry(r.to_bits()).or_insert_with(|| build_table(r)),
    ))
}

/// Builds `eta_plus(t) = h_R(t) t e^{-t^2/2}` (default `R = 200`).
pub fn build_eta_plus(r: f64) -> Result<Smoothing> {
    Ok(Smoothing::EtaPlus(table_cache(r)?))
}

/// Builds the bare band-limited factor `h_R` as a weight.
pub fn build_h_r(r: f64) -> Result<Smoothing> {
    Ok(Smoothing::HR(table_cache(r)?))
}

/// Reference evaluation of `h_R(t)` by the Dirichlet-kernel integral
/// `int h(t e^{-v}) sin(R v)/(pi v) dv`, with the removable singularity at
/// `v = 0` expanded to three Taylor terms. Slow; used to validate the
/// table route.
pub fn h_r_direct(r: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    // support of h(t e^{-v}): t e^{-v} in (0, 2) => v > ln(t/2);
    // h(w) < 1e-18 for w < 1e-9 => v < ln(t) + 21
    let v_lo = (t / 2.0).ln();
    let v_hi = t.ln() + 21.0;
    let kernel = |v: f64| -> f64 {
        if v.abs() < 1e-4 {
            let x = r * v;
            (r / std::f64::consts::PI) * (1.0 - x * x / 6.0 + x * x * x * x / 120.0)
        } else {
            (r * v).sin() / (std::f64::consts::PI * v)
        }
    };
    // break at kernel zeros k pi / R and at the singular point
    let mut pts: Vec<f64> = Vec::new();
    let k_lo = (v_lo * r / std::f64::consts::PI).ceil() as i64;
    let k_hi = (v_hi * r / std::f64::consts::PI).floor() as i64;
    pts.push(v_lo);
    // cap the presplit count; adaptive refinement handles the rest
    let stride = (((k_hi - k_lo).max(1)) as usize / 4000).max(1);
    let mut k = k_lo;
    while k <= k_hi {
        let v = k as f64 * std::f64::consts::PI / r;
        if v > v_lo && v < v_hi {
            pts.push(v);
        }
        k += stride as i64;
    }
    pts.push(v_hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    quad::adaptive_complex(
        |v| num_complex::Complex64::new(h_exact(t * (-v).exp()) * kernel(v), 0.0),
        &pts,
        1e-10,
        1e-9,
        32768,
    )
    .value
    .re
}
