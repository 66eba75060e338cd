//! Numerical engine for the triple correlation of Riemann zeros predicted by
//! the ratios conjecture, together with its unitary-group counterpart.
//!
//! Layers, bottom up: [`zeta`] (zeta and its logarithmic derivatives),
//! [`primes`] (prime sums and Euler products), [`ratios`] (closed-form
//! t-integrated moments), [`triple`] (the assembled density, grids, PV
//! integration and the sine-kernel limit), [`rmt`] (U(N) analogue) and
//! [`zeros`] (empirical statistics from zero tables).

pub mod cmath;
pub mod config;
pub mod error;
pub mod grid;
mod kahan;
pub mod primes;
pub mod ratios;
pub mod rmt;
pub mod triple;
pub mod zeros;
pub mod zeta;

pub use num_complex::Complex64;

/// Complex scalar used for every argument and special-function value.
pub type ComplexValue = Complex64;

pub use config::EngineConfig;
pub use error::{Error, Result};
pub use grid::{CorrelationGrid, GridStats, Normalization};
pub use primes::{PrimeTable, TailEstimate};
pub use ratios::Deps;
pub use ratios::MomentResult;
pub use rmt::RmtParams;
pub use zeros::{DiffStats, Histogram1D, Histogram2D, ZeroDataset};
pub use zeta::EulerMaclaurinParams;
