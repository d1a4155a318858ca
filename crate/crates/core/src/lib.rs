//! Wireless gathering under an interference-radius model.
//!
//! Packets released over time at nodes of a multi-hop network must be gathered
//! at a single sink. In each round a set of pairwise-compatible calls is
//! executed; calls `(u, v)` and `(u', v')` interfere when `d(u', v) <= d_I` or
//! `d(u, v') <= d_I`. The crate provides
//!
//! - the data model, schedule replay and JSON file formats ([`model`],
//!   [`validate`], [`format`]);
//! - Priority Greedy, FIFO and sped-up FIFO ([`schedulers`]);
//! - the blocking forest and per-packet completion bounds ([`bounds`]);
//! - an exact branch-and-bound solver for maximum completion and maximum flow
//!   time on small instances, and an exact induced-matching solver
//!   ([`oracle`], [`matching`]);
//! - benchmark and adversarial instance generators ([`generators`]).

pub mod bounds;
pub mod format;
pub mod generators;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod report;
pub mod schedulers;
pub mod validate;

pub use model::{compatible, Call, Instance, Network, NodeId, Packet, PacketId, Schedule, Time};
pub use validate::{validate_schedule, ScheduleError, ScheduleMetrics};
