//! Stroboscopic beam-splitter collision model of open-system dynamics.
//!
//! A system mode collides sequentially with environmental modes on an array
//! of beam splitters (reflectivity `r1` for system-environment collisions,
//! `r2` for intra-environment ones, phase `phi` between steps, thermal
//! occupation `n_T` of the environment). After `L` collisions the induced
//! channel on the system is fully determined by a single complex coefficient
//! `c_L`, the (S,S) element of the scattering matrix.
//!
//! The crate computes `c_L` by independent routes ([`scattering`]), applies
//! the induced thermal attenuation channel to Gaussian states ([`gaussian`])
//! and to the one-photon qubit reduction ([`qubit`]), classifies the dynamics
//! as Markovian or non-Markovian by CP-divisibility and by several
//! revival-based witnesses ([`witnesses`]), and scans parameter planes for
//! region maps and phase boundaries ([`sweep`]).
//!
//! Conventions: symmetric operator ordering, vacuum covariance `(1/2) I`.
//! Core numerics are generic over the scalar type; `f64` aliases are exported
//! at the crate root for everyday use.

pub mod error;
pub mod gaussian;
pub mod qubit;
pub mod scalar;
pub mod scattering;
pub mod sweep;
pub mod tol;
pub mod witnesses;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default working scalar.
pub type Real = f64;
/// Complex number over the default scalar.
pub type Cplx = num_complex::Complex<f64>;

pub type ChannelParams64 = scattering::ChannelParams<f64>;
pub type CoefficientSeries64 = scattering::CoefficientSeries<f64>;
pub type ComplexMatrix64 = scattering::ComplexMatrix<f64>;
pub type GaussianState64 = gaussian::GaussianState<f64>;
pub type ChannelAction64 = gaussian::ChannelAction<f64>;
pub type WitnessSeries64 = witnesses::WitnessSeries<f64>;
pub type IntermediateMap64 = witnesses::IntermediateMap<f64>;
