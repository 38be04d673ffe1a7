//! DFT plumbing for exact convolution counts and grid evaluation of
//! exponential sums (backed by rustfft).

use crate::arith;
use crate::smoothing::Smoothing;
use num_complex::Complex64;
use rustfft::FftPlanner;

pub fn fft_forward(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(buf.len());
    fft.process(buf);
}

pub fn fft_inverse(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(buf.len());
    fft.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// `f[m] = Lambda(m) eta(m/x)` for `m < len`, as a complex buffer ready
/// for the FFT. With the forward transform, `F[k] = S_eta(-k/N, x)`
/// restricted to `m < len`.
pub fn mangoldt_sequence(eta: &Smoothing, x: f64, len: usize) -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); len];
    let hi = len as u64 - 1;
    arith::for_each_prime(2, hi, |p| {
        let lp = (p as f64).ln();
        let mut m = p;
        loop {
            let w = eta.eval(m as f64 / x);
            if w != 0.0 {
                f[m as usize] = Complex64::new(lp * w, 0.0);
            }
            match m.checked_mul(p) {
                Some(next) if next <= hi => m = next,
                _ => break,
            }
        }
    });
    f
}

/// Prime indicator sequence for exact unweighted counts.
pub fn prime_indicator_sequence(len: usize) -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); len];
    if len > 2 {
        arith::for_each_prime(2, len as u64 - 1, |p| {
            f[p as usize] = Complex64::new(1.0, 0.0);
        });
    }
    f
}
