//! Bigraded Hilbert-series arithmetic and truncated CDGA homology over
//! the rationals.

mod cdga;
mod poly;
mod series;

pub use cdga::{cdga_homology, FreeCdgaPresentation};
pub use poly::{parse_polynomial, Monomial, Polynomial};
pub use series::{
    free_gca_series, quotient_by_slope_zero_generator, vanishing_line_check, BigradedSeries,
    GenSpec, Parity,
};
