//! Solver for the Born-Infeld Abelian Higgs BPS domain-wall equation
//!
//! ```text
//! u'' = (e^u - 1) / sqrt(1 - (beta/4)(e^u - 1)^2),    0 <= beta < 4
//! ```
//!
//! written for `u = 2 ln f` where `f` is the Higgs amplitude. The library
//! constructs the unique wall profiles for the two boundary conditions
//! (Higgs phase to magnetic phase, and magnetic phase on both ends) by a
//! dynamical shooting method, cross-checks every solve against an
//! independent first-integral quadrature oracle, reconstructs the gauge
//! fields and energy density, and verifies the BPS, Euler-Lagrange, and
//! pointwise energy identities to controlled accuracy.
//!
//! Module map:
//! - [`model`]: equation right-hand side, Born-Infeld potential, first
//!   integral `G`, parameter validation.
//! - [`quad`]: adaptive Gauss-Kronrod (7, 15) quadrature.
//! - [`integrate`]: embedded Dormand-Prince 5(4) integration with dense
//!   output and event detection.
//! - [`shoot`]: slope classification into undershoot/overshoot sets and
//!   bisection to the critical slope.
//! - [`profile`]: full-line wall assembly, quadrature-constructed profile
//!   oracle, tail fits, bracket-inequality checks.
//! - [`fields`]: Higgs/gauge field reconstruction and residual checks.

pub mod error;
pub mod fields;
pub mod integrate;
pub mod model;
pub mod numdiff;
pub mod profile;
pub mod quad;
pub mod shoot;

pub use error::{Result, SolverError};
pub use fields::{
    bps_residual, el_residual, energy_identity, far_field_energy_density, reconstruct,
    FieldProfile, ResidualMax,
};
pub use integrate::{
    integrate, ode_residual, ode_residual_on_grid, Direction, EventKind, EventRecord, EventSet,
    IvpSpec, StepStats, Trajectory,
};
pub use model::{
    first_integral, first_integral_diff, potential, rhs, validate, FirstIntegralTable, ModelParams,
    SignBranch, State, Tolerances,
};
pub use profile::{
    check_brackets, first_integral_residual, first_integral_residual_on, fit_tails,
    profile_by_quadrature, solve_higgs_to_magnetic, solve_magnetic_to_magnetic, BoundaryCondition,
    BracketReport, TailFit, WallProfile,
};
pub use shoot::{
    classify_grid, classify_slope, classify_slope_with, critical_slope_oracle, find_critical_slope,
    find_critical_slope_with, ClassWitness, ShootingOutcome, SlopeClass, SlopeClassKind,
};
