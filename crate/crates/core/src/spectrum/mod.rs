//! From fluctuation tables to scaling exponents and singularity spectra.

mod analytic;
mod fit;
mod grid;
mod legendre;
mod table;

pub use analytic::{
    analytic_alpha_1d, analytic_alpha_2d, analytic_f_1d, analytic_f_2d, analytic_tau_1d,
    analytic_tau_2d, cascade_alpha, cascade_f, cascade_hurst, cascade_tau,
};
pub use fit::{fit_scaling, tau_error, tau_error_with, FitRange, ScalingEstimate};
pub use grid::{build_scale_grid, QGrid, ScaleGrid};
pub use legendre::{legendre_spectrum, spectrum_width, SingularitySpectrum, DEFAULT_HALF_WINDOW};
pub use table::FluctuationTable;
