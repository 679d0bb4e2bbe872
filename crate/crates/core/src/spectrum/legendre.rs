use alloc::vec::Vec;

use super::fit::ScalingEstimate;
use crate::error::{invalid, Result};
use crate::numeric::fit_line;

/// Half-width of the local regression window used for `d tau / d q`
/// (seven points in total).
pub const DEFAULT_HALF_WINDOW: usize = 3;

/// Singularity strengths and spectrum on the interior of the q grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingularitySpectrum {
    pub qs: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    /// `alpha_max - alpha_min`.
    pub width: f64,
}

/// Numerical Legendre transform of `tau(q)`.
///
/// `alpha(q_i)` is the slope of the least-squares line through the
/// `2 * half_window + 1` points centred on `q_i`; `f = q alpha - tau`.
/// Only interior points with a full window are reported.
pub fn legendre_spectrum(est: &ScalingEstimate, half_window: usize) -> Result<SingularitySpectrum> {
    legendre_from_tau(est.qs.values(), &est.tau, half_window, est.qs.uniform_step().is_some())
}

pub(crate) fn legendre_from_tau(
    qs: &[f64],
    tau: &[f64],
    half_window: usize,
    uniform: bool,
) -> Result<SingularitySpectrum> {
    if half_window == 0 {
        return Err(invalid!("Legendre half-window must be at least 1"));
    }
    let window = 2 * half_window + 1;
    if qs.len() < window {
        return Err(invalid!(
            "q grid has {} points, the Legendre window needs {window}",
            qs.len()
        ));
    }
    if !uniform {
        return Err(invalid!("Legendre transform requires a uniformly spaced q grid"));
    }
    let interior = half_window..qs.len() - half_window;
    let mut out_q = Vec::with_capacity(interior.len());
    let mut alpha = Vec::with_capacity(interior.len());
    let mut f = Vec::with_capacity(interior.len());
    for i in interior {
        let span = i - half_window..=i + half_window;
        let slope = fit_line(&qs[span.clone()], &tau[span]).slope;
        out_q.push(qs[i]);
        alpha.push(slope);
        f.push(qs[i] * slope - tau[i]);
    }
    let width = width_of(&alpha);
    Ok(SingularitySpectrum {
        qs: out_q,
        alpha,
        f,
        width,
    })
}

fn width_of(alpha: &[f64]) -> f64 {
    let max = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = alpha.iter().copied().fold(f64::INFINITY, f64::min);
    if alpha.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// `alpha_max - alpha_min` over the computed interior q range.
pub fn spectrum_width(spec: &SingularitySpectrum) -> f64 {
    width_of(&spec.alpha)
}
