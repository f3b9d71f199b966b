//! Tolerance constants used throughout the crate.
//!
//! | Constant       | Value  | Used for                                         |
//! |----------------|--------|--------------------------------------------------|
//! | `ALGEBRAIC`    | 1e-12  | exact algebraic identities (unitarity, traces)   |
//! | `COEFFICIENT`  | 1e-9   | cross-route comparisons of channel coefficients  |
//! | `MONOTONICITY` | 1e-10  | revival detection in witness series              |
//! | `DEGENERACY`   | 1e-9   | spectral degeneracy cutoff for the closed form   |
//! | `UNCERTAINTY`  | 1e-10  | slack on the cov + (i/2) Omega eigenvalue check  |
//! | `SINGULAR`     | 1e-14  | |c_(L-1)| below which the intermediate map is    |
//! |                |        | undefined                                        |

/// Exact algebraic identities at double precision.
pub const ALGEBRAIC: f64 = 1e-12;

/// Comparisons between independent routes to the channel coefficient.
pub const COEFFICIENT: f64 = 1e-9;

/// Default absolute tolerance for monotonicity violations in witness series.
pub const MONOTONICITY: f64 = 1e-10;

/// Eigenvalue gap below which the closed-form coefficient is refused.
pub const DEGENERACY: f64 = 1e-9;

/// Allowed negativity of the smallest eigenvalue of cov + (i/2) Omega.
pub const UNCERTAINTY: f64 = 1e-10;

/// Coefficient magnitude below which the channel is not invertible.
pub const SINGULAR: f64 = 1e-14;
