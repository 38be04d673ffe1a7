//! Special functions backing the transform code: the Dawson integral and a
//! complex log-gamma.
//!
//! Dawson's function enters through the half-line Fourier transform of the
//! Gaussian: `int_0^inf e(delta t) e^{-t^2/2} dt = sqrt(pi/2) e^{-2 pi^2
//! delta^2} + i sqrt(2) D(sqrt(2) pi delta)`. Log-gamma provides the
//! closed-form Mellin transform of the Gaussian at `delta = 0`,
//! `2^{s/2 - 1} Gamma(s/2)`, used as an independent oracle.

use num_complex::Complex64;

/// Dawson's integral `D(y) = e^{-y^2} int_0^y e^{t^2} dt`.
///
/// Maclaurin series below `|y| = 4.5` (worst-case cancellation there loses
/// ~9 digits, leaving ~7), asymptotic series beyond (error below 1e-9 at the
/// crossover and falling fast).
pub fn dawson(y: f64) -> f64 {
    let a = y.abs();
    let s = if a < 4.5 {
        // sum (-1)^k 2^k y^(2k+1) / (1*3*...*(2k+1))
        let mut term = a;
        let mut sum = a;
        let mut k = 0u32;
        while term.abs() > 1e-18 * sum.abs().max(1e-300) && k < 200 {
            k += 1;
            term *= -2.0 * a * a / (2 * k + 1) as f64;
            sum += term;
        }
        sum
    } else {
        // D(y) ~ 1/(2y) * sum (2k-1)!! / (2y^2)^k, truncated at the
        // smallest term
        let inv2y2 = 1.0 / (2.0 * a * a);
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut k = 0u32;
        loop {
            let next = term * (2 * k + 1) as f64 * inv2y2;
            if next >= term || next < 1e-18 {
                if next < term {
                    sum += next;
                }
                break;
            }
            term = next;
            sum += term;
            k += 1;
        }
        sum / (2.0 * a)
    };
    if y < 0.0 {
        -s
    } else {
        s
    }
}

/// Half-line Fourier transform of the Gaussian weight:
/// `int_0^inf e(delta t) e^{-t^2/2} dt`.
pub fn gaussian_fourier_halfline(delta: f64) -> Complex64 {
    let re = (std::f64::consts::PI / 2.0).sqrt() * (-2.0 * std::f64::consts::PI.powi(2) * delta * delta).exp();
    let im = std::f64::consts::SQRT_2 * dawson(std::f64::consts::SQRT_2 * std::f64::consts::PI * delta);
    Complex64::new(re, im)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Principal-branch log-gamma by the Lanczos approximation (g = 7, n = 9);
/// ~13 correct digits over the strip we use. The imaginary part may be off
/// by multiples of 2 pi; magnitudes and ratios are unaffected.
pub fn lgamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: ln Gamma(z) = ln(pi / sin(pi z)) - ln Gamma(1 - z)
        let pi = std::f64::consts::PI;
        let sin = (Complex64::new(pi, 0.0) * z).sin();
        return Complex64::new(pi, 0.0).ln() - sin.ln() - lgamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + 0.5 * (2.0 * std::f64::consts::PI).ln() + x.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dawson_known_values() {
        // Reference values (Abramowitz & Stegun style, 10 digits)
        assert!((dawson(0.0)).abs() < 1e-18);
        assert!((dawson(1.0) - 0.5380795069).abs() < 1e-9);
        assert!((dawson(2.0) - 0.3013403889).abs() < 1e-9);
        assert!((dawson(5.0) - 0.1021340744).abs() < 1e-9);
        assert!((dawson(10.0) - 0.05025384718).abs() < 1e-10);
        assert_eq!(dawson(-1.0), -dawson(1.0));
    }

    #[test]
    fn dawson_series_continuous_at_crossover() {
        // both branches near 4.5 agree
        let eps = 1e-9;
        let lo = dawson(4.5 - eps);
        let hi = dawson(4.5 + eps);
        assert!((lo - hi).abs() < 1e-7, "{lo} vs {hi}");
    }

    #[test]
    fn lgamma_real_axis() {
        for (z, want) in [(1.0, 0.0), (2.0, 0.0), (5.0, 24.0f64.ln()), (0.5, std::f64::consts::PI.sqrt().ln())] {
            let got = lgamma_complex(Complex64::new(z, 0.0));
            assert!((got.re - want).abs() < 1e-11, "z={z}: {got}");
            assert!(got.im.abs() < 1e-11);
        }
    }

    #[test]
    fn lgamma_functional_equation() {
        // Gamma(z+1) = z Gamma(z) on complex points
        for &(re, im) in &[(0.3, 7.0), (1.2, -40.0), (0.05, 120.0)] {
            let z = Complex64::new(re, im);
            let lhs = lgamma_complex(z + 1.0);
            let rhs = lgamma_complex(z) + z.ln();
            // compare exp to dodge branch 2*pi*k offsets
            let d = (lhs - rhs).exp();
            assert!((d - Complex64::new(1.0, 0.0)).norm() < 1e-9, "z={z} d={d}");
        }
    }

    #[test]
    fn lgamma_magnitude_large_imag() {
        // |Gamma(1/2 + it)| = sqrt(pi / cosh(pi t))
        let t = 30.0f64;
        let got = lgamma_complex(Complex64::new(0.5, t)).re;
        let want = 0.5 * (std::f64::consts::PI / (std::f64::consts::PI * t).cosh()).ln();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}
