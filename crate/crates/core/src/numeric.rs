//! Small numeric kernels: double-double accumulation, compensated sums and
//! ordinary least squares on short vectors.
//!
//! Sliding-window sums are taken as differences of prefix sums. With plain
//! `f64` prefixes the difference loses everything below `eps * |prefix|`,
//! which is fatal for cascade measures whose local mass spans ten orders of
//! magnitude. Prefixes are therefore kept in double-double form ([`Dd`]), so
//! every window sum is accurate to roughly `eps` of its own magnitude and no
//! drift builds up along the sweep.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    // Dekker split; inputs here are bounded far below the overflow threshold.
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    /// Exact product of two doubles.
    #[inline(always)]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline(always)]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline(always)]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.sub(Dd::from_prod(q1, b));
        let q2 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero when fewer than three points.
    pub slope_se: f64,
}

/// Ordinary least squares using centred two-pass sums.
///
/// Callers guarantee at least two points with distinct abscissae.
pub(crate) fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    debug_assert_eq!(xs.len(), ys.len());
    let m = xs.len() as f64;
    let x_mean = compensated_sum(xs.iter().copied()) / m;
    let y_mean = compensated_sum(ys.iter().copied()) / m;
    let mut sxx = CompensatedSum::default();
    let mut sxy = CompensatedSum::default();
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_mean;
        sxx.add(dx * dx);
        sxy.add(dx * (y - y_mean));
    }
    let sxx = sxx.value();
    let slope = sxy.value() / sxx;
    let intercept = y_mean - slope * x_mean;
    let slope_se = if xs.len() > 2 {
        let mut sse = CompensatedSum::default();
        for (&x, &y) in xs.iter().zip(ys) {
            let r = y - (intercept + slope * x);
            sse.add(r * r);
        }
        libm::sqrt(sse.value() / (m - 2.0) / sxx)
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        slope_se,
    }
}

/// `floor(x)`, snapping values within `1e-9` of an integer onto it first, so
/// that products like `9 * 0.1 * 10 / 10` do not fall a hair under an integer.
pub(crate) fn floor_snapped(x: f64) -> f64 {
    let r = libm::round(x);
    if libm::fabs(x - r) <= 1e-9 * libm::fmax(1.0, libm::fabs(x)) {
        r
    } else {
        libm::floor(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_small_window_under_large_prefix() {
        let mut acc = Dd::ZERO;
        acc = acc.add_f64(1.0e8);
        let before = acc;
        acc = acc.add_f64(3.0e-9);
        assert_eq!(acc.sub(before).to_f64(), 3.0e-9);
    }

    #[test]
    fn dd_exact_products_and_division() {
        let p = Dd::from_prod(0.1, 3.0);
        assert_eq!(p.div_f64(3.0).to_f64(), 0.1);
        let x = Dd::ZERO.add_f64(7.0).mul_f64(1.0 / 3.0).mul_f64(3.0);
        assert!((x.to_f64() - 7.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn fit_line_on_exact_data() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let fit = fit_line(&xs, &ys);
        assert_eq!(fit.slope, 2.0);
        assert_eq!(fit.intercept, 1.0);
        assert_eq!(fit.slope_se, 0.0);
    }

    #[test]
    fn fit_line_standard_error_matches_hand_value() {
        // residuals of y = [0, 1, 1, 2] on x = [0, 1, 2, 3]: slope 0.6, sse 0.2
        let fit = fit_line(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 1.0, 2.0]);
        assert!((fit.slope - 0.6).abs() < 1e-15);
        let expected = (0.2f64 / 2.0 / 5.0).sqrt();
        assert!((fit.slope_se - expected).abs() < 1e-15);
    }

    #[test]
    fn floor_snapping() {
        assert_eq!(floor_snapped(2.9999999999999996), 3.0);
        assert_eq!(floor_snapped(2.5), 2.0);
        assert_eq!(floor_snapped(0.0), 0.0);
    }
}
