//! Semi-analytic solver for the ion-acoustic system
//!
//! ```text
//! u_t + (u^2 - v)_x     = 0
//! v_t + (u^3/3 - u)_x   = 0
//! ```
//!
//! The system admits classical shocks and rarefactions, and for some Riemann
//! data only a *singular shock*: a discontinuity carrying a delta measure in
//! `v` whose strength evolves linearly in time. This crate provides
//!
//! * [`states`]: phase-space states, fluxes and characteristic speeds
//! * [`curves`]: wave curves and classification of right states
//! * [`singular`]: singular-shock speed, growth rate and split coefficients
//! * [`riemann`]: exact Riemann solver including singular and composite fans
//! * [`fanode`]: curved singular-shock paths through rarefaction fans
//! * [`interact`]: event-driven interaction engine producing a [`interact::Timeline`]
//! * [`fvoracle`]: an independent Lax–Friedrichs finite-volume solver
//! * [`cli`]: scenario files, JSON descriptors, CSV and SVG output
//!
//! All solutions are represented by their distributional limit: piecewise
//! constant fields plus delta strengths carried along trajectories.

pub mod cli;
pub mod curves;
mod error;
pub mod fanode;
pub mod fvoracle;
pub mod interact;
pub mod riemann;
pub mod singular;
pub mod states;

pub use error::{Error, Result};
pub use states::{DeltaState, Flux, State};
