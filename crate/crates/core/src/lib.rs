//! Deterministic 2D ray tracing of a room with a rotatable reflecting
//! surface (RIS), plus the policies that drive the surface and the metrics
//! used to judge them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the scenario
//! parser and the command line live in the `risray` companion crate.
//!
//! Module layout, bottom up:
//!
//! - [`geometry`]: points, segments, rays, mirroring and occlusion tests.
//! - [`scene`]: walls, the RIS panel, transmitter and receivers.
//! - [`propagation`]: image-source path enumeration and the link budget.
//! - [`control`]: static, sweep and context-aware RIS schedules.
//! - [`simulation`]: probe reports and time-stepped traces.
//! - [`metrics`]: satisfaction fractions and dB statistics.

#![no_std]

extern crate alloc;

pub mod control;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod propagation;
pub mod scene;
pub mod simulation;

pub use control::{
    best_setting, context_schedule, static_schedule, sweep_schedule, Objective, Policy,
    ProbeReport, RisSchedule, Sense,
};
pub use error::{Error, Result};
pub use geometry::{Point2, Ray, Segment, Vec2, EPSILON};
pub use metrics::{compare_traces, db_statistics, satisfaction_fraction, DbStats, StatDeltas};
pub use propagation::{
    enumerate_paths, path_power, power_map, received_power, ImageTracer, PowerMap,
    PropagationParams, PropagationPath, Summation,
};
pub use scene::{Bounds, Receiver, RisPanel, Role, Scene, Transmitter, Violation, Wall};
pub use simulation::{probe_reports, run_simulation, SimulationTrace};
