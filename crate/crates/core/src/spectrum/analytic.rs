//! Closed-form mass exponents and spectra of deterministic multiplicative
//! cascades.
//!
//! For a cascade that splits mass by the proportions `p_i` at every level
//! (two halves in 1D, four quadrants in 2D):
//!
//! ```text
//! tau(q)   = -ln(sum_i p_i^q) / ln 2
//! alpha(q) = -sum_i p_i^q ln p_i / (sum_i p_i^q ln 2)
//! f(q)     = q alpha(q) - tau(q)
//! ```
//!
//! Zero proportions are dropped from the sums: the corresponding cells carry
//! no mass and are not part of the measure's support.

use core::f64::consts::LN_2;

/// `ln(sum_i p_i^q)` and the normalised weights' contribution to alpha,
/// evaluated with a max shift so extreme q does not overflow.
fn moments(weights: &[f64], q: f64) -> (f64, f64) {
    let mut shift = f64::NEG_INFINITY;
    for &p in weights.iter().filter(|&&p| p > 0.0) {
        shift = shift.max(q * libm::log(p));
    }
    let mut z = 0.0;
    let mut zl = 0.0;
    for &p in weights.iter().filter(|&&p| p > 0.0) {
        let lp = libm::log(p);
        let w = libm::exp(q * lp - shift);
        z += w;
        zl += w * lp;
    }
    (shift + libm::log(z), zl / z)
}

/// Mass exponent of a cascade with the given proportions.
pub fn cascade_tau(weights: &[f64], q: f64) -> f64 {
    -moments(weights, q).0 / LN_2
}

/// Singularity strength of a cascade with the given proportions.
pub fn cascade_alpha(weights: &[f64], q: f64) -> f64 {
    -moments(weights, q).1 / LN_2
}

/// Singularity spectrum `f(q) = q alpha(q) - tau(q)`.
pub fn cascade_f(weights: &[f64], q: f64) -> f64 {
    q * cascade_alpha(weights, q) - cascade_tau(weights, q)
}

/// `tau(q)` of the binomial p-model.
pub fn analytic_tau_1d(p1: f64, q: f64) -> f64 {
    cascade_tau(&[p1, 1.0 - p1], q)
}

/// `alpha(q)` of the binomial p-model.
pub fn analytic_alpha_1d(p1: f64, q: f64) -> f64 {
    cascade_alpha(&[p1, 1.0 - p1], q)
}

/// `f(alpha(q))` of the binomial p-model.
pub fn analytic_f_1d(p1: f64, q: f64) -> f64 {
    cascade_f(&[p1, 1.0 - p1], q)
}

/// `tau(q)` of the four-quadrant cascade.
pub fn analytic_tau_2d(weights: &[f64; 4], q: f64) -> f64 {
    cascade_tau(weights, q)
}

/// `alpha(q)` of the four-quadrant cascade.
pub fn analytic_alpha_2d(weights: &[f64; 4], q: f64) -> f64 {
    cascade_alpha(weights, q)
}

/// `f(alpha(q))` of the four-quadrant cascade.
pub fn analytic_f_2d(weights: &[f64; 4], q: f64) -> f64 {
    cascade_f(weights, q)
}

/// Generalized Hurst exponent implied by `tau`: `(tau(q) + D_f) / q`, with
/// the `q -> 0` limit `alpha(0)`.
pub fn cascade_hurst(weights: &[f64], q: f64, fractal_dim: f64) -> f64 {
    if q == 0.0 {
        cascade_alpha(weights, 0.0)
    } else {
        (cascade_tau(weights, q) + fractal_dim) / q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W2: [f64; 4] = [0.1, 0.2, 0.3, 0.4];

    #[test]
    fn fixed_points() {
        for p in [0.1, 0.3, 0.5, 0.77] {
            assert!((analytic_tau_1d(p, 0.0) + 1.0).abs() < 1e-15);
            assert!(analytic_tau_1d(p, 1.0).abs() < 1e-15);
        }
        assert!((analytic_tau_2d(&W2, 0.0) + 2.0).abs() < 1e-15);
        assert!(analytic_tau_2d(&W2, 1.0).abs() < 1e-15);
    }

    #[test]
    fn tabulated_values() {
        // mpmath, 40 digits
        assert!((analytic_tau_1d(0.3, 2.0) - 0.785_875_194_647_152_6).abs() < 1e-13);
        assert!((analytic_tau_2d(&W2, 2.0) - 1.736_965_594_166_206).abs() < 1e-13);
        assert!((analytic_alpha_1d(0.3, 0.0) - 1.125_769_383_497_982_2).abs() < 1e-13);
        assert!((analytic_f_1d(0.3, 0.0) - 1.0).abs() < 1e-13);
        assert!((analytic_alpha_2d(&W2, 0.0) - 2.175_687_469_707_073).abs() < 1e-13);
        assert!((analytic_f_2d(&W2, 0.0) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn hurst_values_match_table_columns() {
        let h = |q| cascade_hurst(&[0.3, 0.7], q, 1.0);
        for (q, expected) in [(-4.0, 1.499), (-2.0, 1.359), (0.0, 1.126), (2.0, 0.893), (4.0, 0.753)] {
            assert!((h(q) - expected).abs() < 5e-4, "q = {q}");
        }
        // the tabulated 2D value at q = 2 is 1.869 against an exact 1.86848
        let h2 = |q| cascade_hurst(&W2, q, 2.0);
        for (q, expected) in [(-4.0, 2.849), (-2.0, 2.577), (0.0, 2.176), (2.0, 1.869), (4.0, 1.705)] {
            assert!((h2(q) - expected).abs() < 1e-3, "q = {q}");
        }
    }

    #[test]
    fn uniform_measure_is_monofractal() {
        for q in [-5.0, -1.0, 0.0, 0.5, 3.0, 20.0] {
            assert!((analytic_alpha_1d(0.5, q) - 1.0).abs() < 1e-14);
            assert!((analytic_f_1d(0.5, q) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn large_q_limit() {
        let limit = -(0.7f64).ln() / LN_2;
        assert!((limit - 0.514_573_172_829_758_3).abs() < 1e-15);
        assert!((analytic_alpha_1d(0.3, 50.0) - limit).abs() < 1e-12);
        assert!((analytic_alpha_1d(0.3, 5000.0) - limit).abs() < 1e-15);
    }

    #[test]
    fn width_over_default_range() {
        // alpha(-4) - alpha(4), mpmath: 1.697072851971100 - 0.554465915024864
        let w = analytic_alpha_1d(0.3, -4.0) - analytic_alpha_1d(0.3, 4.0);
        assert!((w - 1.142_606_936_946_236_6).abs() < 1e-12);
    }

    #[test]
    fn zero_weights_drop_out_of_support() {
        let w = [0.5, 0.5, 0.0, 0.0];
        assert!((analytic_tau_2d(&w, 0.0) + 1.0).abs() < 1e-15);
        assert!(analytic_tau_2d(&w, -2.0).is_finite());
    }
}
