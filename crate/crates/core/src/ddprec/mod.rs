//! Double-double arithmetic, divided differences and the discretization-error model.

mod disc;
mod divdiff;
mod double_double;
mod testfn;

pub use disc::{disc_error, disc_error_asym, interp_error_est, interp_error_measured, DiscError};
pub use divdiff::{divdiff, divdiff_f64, DivDiffTable};
pub use double_double::{dd_add, dd_div, dd_mul, two_prod, two_sum, DoubleDouble, DD_EPSILON};
pub use testfn::{TestFunction, MAX_DERIVATIVE_ORDER};
