//! Ionization of a one-dimensional δ-potential atom in a monochromatic field.
//!
//! Two independent rate engines are provided: a semiclassical formula built from
//! interfering complex-time tunnelling bursts ([`semiclassical`]) and an exact
//! solution of the time-dependent problem as a Volterra integral equation for
//! the wave function at the origin ([`oracle`]). [`analysis`] turns sampled
//! rate curves into smoothed series, modulation periods and output files.

pub mod adiabatic;
pub mod analysis;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod semiclassical;
pub mod volkov;

pub use error::{Error, Result};
pub use model::{channel_threshold, energy_balance, Drive, GroundState, ModelParams};
pub use scalar::Scalar;

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type QuasiEnergy64 = adiabatic::QuasiEnergy<f64>;
pub type ComplexPath64 = semiclassical::ComplexPath<f64>;
pub type SurvivalAmplitude64 = semiclassical::SurvivalAmplitude<f64>;
