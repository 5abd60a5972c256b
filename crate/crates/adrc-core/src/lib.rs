//! Linear active disturbance rejection control as transfer functions.
//!
//! The crate covers the full path from tuning parameters to a running
//! digital controller:
//!
//! - [`design`]: bandwidth-parameterized gains and the realizable
//!   continuous-time three-block controller (feedback, prefilter,
//!   feedforward), derived both from closed-form tables and from a generic
//!   matrix/resolvent path.
//! - [`discrete`]: ZOH discretization, current-observer gains, the exact
//!   two-block discrete controller and the factored accumulator.
//! - [`runtime`]: step-by-step execution in transfer-function form (with
//!   clamped-accumulator windup protection) and in state-space form.
//! - [`freq`]: rational transfer functions, gang-of-six closed-loop
//!   analysis, feedback-controller poles/zeros and crossover-based
//!   estimation of the critical gain.
//! - [`sim`]: ZOH-exact closed-loop simulation of arbitrary LTI plants with
//!   reference steps, input disturbance and measurement noise.

pub mod design;
pub mod discrete;
pub mod error;
pub mod fmt;
pub mod freq;
pub mod poly;
pub mod resolvent;
pub mod runtime;
pub mod sim;

mod exact;

pub use num_complex::Complex64;

pub use design::{
    build_system_matrices, continuous_tf_bandwidth, continuous_tf_general, controller_gains,
    observer_gains_ct, ContinuousAdrcTf, ContinuousTuning, GainSet, PlantSpec, SystemMatrices,
};
pub use discrete::{
    current_observer_matrices, discrete_tf_bandwidth, discrete_tf_general, factor_accumulator,
    observer_gains_dt, zoh_integrator_chain, DiscreteAdrcTf, DiscreteObserverMatrices,
    DiscreteTuning,
};
pub use error::{Error, Result};
pub use freq::{
    estimate_b0_crossover, fb_poles_zeros, gang_of_six, ControllerTfs, Domain, GangOfSix,
    PoleZeroSet, RationalTf,
};
pub use resolvent::{resolvent_polynomials, Resolvent};
pub use runtime::{Controller, SsController, TfController};
pub use sim::{
    default_sample_time, metrics, plant_from_tf, run_closed_loop, zoh_discretize_plant,
    DiscretePlant, LtiPlant, Scenario, Segment, SimTrace, StepMetrics, TraceRow,
};
