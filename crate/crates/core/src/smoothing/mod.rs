//! The smoothing weights `eta` and their transforms.
//!
//! Weights are applied to prime sums as `eta(n/x)`; which weight a bound
//! needs depends on where it lives. The Gaussian family has precisely
//! controlled Mellin transforms (major arcs); `eta2 = eta1 *_M eta1` is the
//! compactly supported weight of the minor-arc machinery; `eta_plus` is a
//! band-limited approximant usable on both; `eta_star` is a Mellin
//! convolution squeezed near zero by a large `kappa`.
//!
//! Conventions: weights are functions on `[0, infinity)` and `eval` is only
//! defined there. `fourier` for the Gaussian family uses the standard even
//! extension (so the Gaussian is self-dual: `sqrt(2 pi) e^{-2 pi^2 t^2}`);
//! every other kind is integrated over its actual support. The half-line
//! transform, which is what prime sums actually see, is exposed separately
//! as [`fourier_halfline`](Smoothing::fourier_halfline).

mod etaplus;
mod mellin;
pub mod quad;
pub mod special;

pub use etaplus::{build_eta_plus, build_h_r, h_r_direct, EtaPlusTable};
pub use mellin::{check_fdelta_bound, mellin_fdelta, MellinPoint};

use crate::error::{Error, Result};
use crate::util::e;
use num_complex::Complex64;
use std::sync::Arc;

/// Values of `|eta(t)|` below this are treated as outside the effective
/// support. Reported in sum metadata.
pub const SUPPORT_CUTOFF: f64 = 1e-15;

/// `t` beyond which `e^{-t^2/2}` drops under [`SUPPORT_CUTOFF`].
const GAUSS_HI: f64 = 8.311293;
/// Same for `t^2 e^{-t^2/2}`.
const T2GAUSS_HI: f64 = 8.830337;

#[derive(Debug, Clone)]
pub enum Smoothing {
    /// `e^{-t^2/2}`
    Gaussian,
    /// `t^2 e^{-t^2/2}`
    T2Gaussian,
    /// `2 * 1_{[1/2, 1]}`, the brutal truncation
    Eta1,
    /// `eta1 *_M eta1`: `4 log 4t` on `[1/4,1/2]`, `4 log 1/t` on `[1/2,1]`
    Eta2,
    /// `t^3 (2-t)^3 e^{-(t-1)^2/2}` on `[0,2]`, symmetric about 1; equals
    /// `h(t) t e^{-t^2/2}` exactly
    EtaCirc,
    /// `t^2 (2-t)^3 e^{t-1/2}` on `[0,2]`
    H,
    /// band-limited approximation `h_R` to `H` (truncated inverse Mellin)
    HR(Arc<EtaPlusTable>),
    /// `h_R(t) t e^{-t^2/2}`
    EtaPlus(Arc<EtaPlusTable>),
    /// `(t^2 e^{-t^2/2} *_M eta2)(kappa t)`
    EtaStar { kappa: f64 },
}

impl Smoothing {
    pub fn name(&self) -> String {
        match self {
            Smoothing::Gaussian => "gaussian".into(),
            Smoothing::T2Gaussian => "t2-gaussian".into(),
            Smoothing::Eta1 => "eta1".into(),
            Smoothing::Eta2 => "eta2".into(),
            Smoothing::EtaCirc => "eta-circ".into(),
            Smoothing::H => "h".into(),
            Smoothing::HR(t) => format!("h-r({})", t.r),
            Smoothing::EtaPlus(t) => format!("eta-plus({})", t.r),
            Smoothing::EtaStar { kappa } => format!("eta-star({kappa})"),
        }
    }

    /// Parses a CLI weight name; `r` and `kappa` supply the parameters of
    /// the constructed kinds.
    pub fn from_name(name: &str, r: f64, kappa: f64) -> Result<Smoothing> {
        Ok(match name {
            "gaussian" => Smoothing::Gaussian,
            "t2-gaussian" => Smoothing::T2Gaussian,
            "eta1" => Smoothing::Eta1,
            "eta2" => Smoothing::Eta2,
            "eta-circ" => Smoothing::EtaCirc,
            "h" => Smoothing::H,
            "h-r" => build_h_r(r)?,
            "eta-plus" => build_eta_plus(r)?,
            "eta-star" => {
                if kappa <= 0.0 {
                    return Err(Error::Usage("eta-star needs kappa > 0".into()));
                }
                Smoothing::EtaStar { kappa }
            }
            other => return Err(Error::Usage(format!("unknown smoothing '{other}'"))),
        })
    }

    /// Declared effective support `[lo, hi]`; `eval` returns exactly 0
    /// outside it.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Smoothing::Gaussian => (0.0, GAUSS_HI),
            Smoothing::T2Gaussian => (0.0, T2GAUSS_HI),
            Smoothing::Eta1 => (0.5, 1.0),
            Smoothing::Eta2 => (0.25, 1.0),
            Smoothing::EtaCirc | Smoothing::H => (0.0, 2.0),
            Smoothing::HR(t) => (0.0, t.t_max()),
            Smoothing::EtaPlus(t) => (0.0, t.t_max().min(7.0)),
            Smoothing::EtaStar { kappa } => (0.0, T2GAUSS_HI / kappa),
        }
    }

    /// `eta(t)` for `t >= 0`; exactly 0 outside the declared support.
    pub fn eval(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return 0.0;
        }
        match self {
            Smoothing::Gaussian => (-t * t / 2.0).exp(),
            Smoothing::T2Gaussian => t * t * (-t * t / 2.0).exp(),
            Smoothing::Eta1 => 2.0,
            Smoothing::Eta2 => {
                if t < 0.5 {
                    4.0 * (4.0 * t).ln()
                } else {
                    4.0 * (1.0 / t).ln()
                }
            }
            Smoothing::EtaCirc => {
                t * t * t * (2.0 - t).powi(3) * (-(t - 1.0) * (t - 1.0) / 2.0).exp()
            }
            Smoothing::H => t * t * (2.0 - t).powi(3) * (t - 0.5).exp(),
            Smoothing::HR(tab) => tab.h_r(t),
            Smoothing::EtaPlus(tab) => tab.h_r(t) * t * (-t * t / 2.0).exp(),
            Smoothing::EtaStar { kappa } => eta_star(*kappa, t),
        }
    }

    /// Kink locations (support endpoints and interior corners), used to
    /// pre-split quadratures.
    fn kinks(&self) -> Vec<f64> {
        match self {
            Smoothing::Eta1 => vec![0.5, 1.0],
            Smoothing::Eta2 => vec![0.25, 0.5, 1.0],
            _ => {
                let (lo, hi) = self.support();
                vec![lo, hi]
            }
        }
    }

    /// Fourier transform `eta_hat(tau) = int e(-t tau) eta(t) dt`.
    ///
    /// Gaussian-family kinds use the even extension (the standard
    /// convention for them): the Gaussian is self-dual, `sqrt(2 pi)
    /// e^{-2 pi^2 tau^2}`. Compactly supported kinds integrate over their
    /// support, to 1e-9 absolute.
    pub fn fourier(&self, tau: f64) -> Result<Complex64> {
        let pi = std::f64::consts::PI;
        match self {
            Smoothing::Gaussian => Ok(Complex64::new(
                (2.0 * pi).sqrt() * (-2.0 * pi * pi * tau * tau).exp(),
                0.0,
            )),
            Smoothing::T2Gaussian => Ok(Complex64::new(
                (2.0 * pi).sqrt()
                    * (-2.0 * pi * pi * tau * tau).exp()
                    * (1.0 - 4.0 * pi * pi * tau * tau),
                0.0,
            )),
            Smoothing::Eta1 => {
                if tau == 0.0 {
                    Ok(Complex64::new(1.0, 0.0))
                } else {
                    // 2 int_{1/2}^1 e(-tau t) dt
                    let d = Complex64::new(0.0, -2.0 * pi * tau);
                    Ok(2.0 * (d.exp() - (d * 0.5).exp()) / d)
                }
            }
            _ => {
                let (lo, hi) = self.support();
                let mut pts = quad::oscillation_breakpoints(lo, hi, tau, 2000);
                for k in self.kinks() {
                    if k > lo && k < hi {
                        pts.push(k);
                    }
                }
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                let q = quad::adaptive_complex(
                    |t| e(-tau * t) * self.eval(t),
                    &pts,
                    1e-10,
                    1e-10,
                    8192,
                );
                if q.err > 1e-9 {
                    return Err(Error::Precision {
                        msg: format!("fourier({}, {tau})", self.name()),
                        achieved: q.err,
                    });
                }
                Ok(q.value)
            }
        }
    }

    /// Half-line transform `int_0^inf e(-tau t) eta(t) dt` — what a prime
    /// sum with this weight actually sees. Closed form for the Gaussian
    /// (Dawson integral); identical to `fourier` for kinds supported in
    /// `(0, inf)`.
    pub fn fourier_halfline(&self, tau: f64) -> Result<Complex64> {
        match self {
            Smoothing::Gaussian => Ok(special::gaussian_fourier_halfline(-tau)),
            Smoothing::T2Gaussian => {
                let (lo, hi) = self.support();
                let pts = quad::oscillation_breakpoints(lo, hi, tau, 2000);
                let q = quad::adaptive_complex(
                    |t| e(-tau * t) * self.eval(t),
                    &pts,
                    1e-11,
                    1e-11,
                    8192,
                );
                Ok(q.value)
            }
            _ => self.fourier(tau),
        }
    }

    /// `|eta|_1` over the support.
    pub fn norm_l1(&self) -> Option<f64> {
        let closed = match self {
            Smoothing::Gaussian => Some((std::f64::consts::PI / 2.0).sqrt()),
            Smoothing::T2Gaussian => Some((std::f64::consts::PI / 2.0).sqrt()),
            Smoothing::Eta1 | Smoothing::Eta2 => Some(1.0),
            _ => None,
        };
        closed.or_else(|| Some(self.integral_of(|v| v)))
    }

    /// `|eta|_2`.
    pub fn norm_l2(&self) -> Option<f64> {
        Some(self.integral_of(|v| v * v).sqrt())
    }

    /// `|eta'|_1` (total variation for the piecewise-constant kind).
    pub fn norm_l1_deriv(&self) -> Option<f64> {
        match self {
            Smoothing::Gaussian => Some(1.0),
            // d/dt t^2 e^{-t^2/2} changes sign at sqrt(2); TV = 2 * peak
            Smoothing::T2Gaussian => Some(2.0 * 2.0 * (-1.0f64).exp()),
            Smoothing::Eta1 => Some(4.0),
            Smoothing::Eta2 => Some(8.0 * 2f64.ln()),
            Smoothing::EtaCirc | Smoothing::H => {
                let d = |t: f64| self.derivative(t).abs();
                Some(quad::adaptive(d, 0.0, 2.0, 1e-10, 1e-9).value.re)
            }
            _ => None,
        }
    }

    /// `sup_tau |fourier(eta'')(tau)| = sup_tau (2 pi tau)^2 |eta_hat(tau)|`.
    pub fn sup_fourier_second_deriv(&self) -> Option<f64> {
        let pi = std::f64::consts::PI;
        match self {
            // maximize 4 pi^2 tau^2 sqrt(2 pi) e^{-2 pi^2 tau^2}: at
            // tau^2 = 1/(2 pi^2) the value is 2 sqrt(2 pi) / e
            Smoothing::Gaussian => Some(2.0 * (2.0 * pi).sqrt() / std::f64::consts::E),
            Smoothing::Eta2 | Smoothing::EtaCirc => {
                let mut sup: f64 = 0.0;
                let mut tau = 0.0;
                while tau <= 400.0 {
                    if let Ok(v) = self.fourier(tau) {
                        sup = sup.max((2.0 * pi * tau).powi(2) * v.norm());
                    }
                    tau += 0.25;
                }
                Some(sup)
            }
            _ => None,
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self {
            Smoothing::EtaCirc => {
                let g = (-(t - 1.0) * (t - 1.0) / 2.0).exp();
                let p = t.powi(3) * (2.0 - t).powi(3);
                let dp = 3.0 * t * t * (2.0 - t).powi(3) - 3.0 * t.powi(3) * (2.0 - t).powi(2);
                dp * g + p * g * (1.0 - t)
            }
            Smoothing::H => {
                let g = (t - 0.5).exp();
                let p = t * t * (2.0 - t).powi(3);
                let dp = 2.0 * t * (2.0 - t).powi(3) - 3.0 * t * t * (2.0 - t).powi(2);
                (dp + p) * g
            }
            _ => unimplemented!("derivative only needed for eta-circ and h"),
        }
    }

    fn integral_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = self.support();
        let mut pts = self.kinks();
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        quad::adaptive_complex(
            |t| Complex64::new(f(self.eval(t)), 0.0),
            &pts,
            1e-12,
            1e-10,
            8192,
        )
        .value
        .re
    }
}

/// Numerical Mellin convolution `(eta_a *_M eta_b)(t) = int eta_a(r)
/// eta_b(t/r) dr/r`.
pub fn mellin_convolve(eta_a: &Smoothing, eta_b: &Smoothing, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let (alo, ahi) = eta_a.support();
    let (blo, bhi) = eta_b.support();
    // r ranges over supp(a) intersected with t / supp(b)
    let lo = alo.max(if bhi > 0.0 { t / bhi } else { 0.0 }).max(1e-300);
    let hi = if blo > 0.0 { (t / blo).min(ahi) } else { ahi };
    if lo >= hi {
        return 0.0;
    }
    // integrate in v = ln r; split at kinks of either factor
    let mut pts: Vec<f64> = vec![lo.ln(), hi.ln()];
    for k in eta_a.kinks() {
        if k > lo && k < hi {
            pts.push(k.ln());
        }
    }
    for k in eta_b.kinks() {
        if k > 0.0 {
            let r = t / k;
            if r > lo && r < hi {
                pts.push(r.ln());
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    quad::adaptive_complex(
        |v| {
            let r = v.exp();
            Complex64::new(eta_a.eval(r) * eta_b.eval(t / r), 0.0)
        },
        &pts,
        1e-12,
        1e-11,
        8192,
    )
    .value
    .re
}

/// `eta_*(t) = (t^2 e^{-t^2/2} *_M eta2)(kappa t)`.
pub fn eta_star(kappa: f64, t: f64) -> f64 {
    assert!(kappa > 0.0, "kappa must be positive");
    mellin_convolve(&Smoothing::T2Gaussian, &Smoothing::Eta2, kappa * t)
}
