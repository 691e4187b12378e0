//! Random planar graphs, their local limits, and the electrical and
//! circle-packing machinery used to study recurrence of those limits.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] — plane graphs as rotation systems, rooted balls, canonical codes
//!   and the local distance between rooted graphs.
//! * [`electric`] — networks, effective resistance, current flows and energies.
//! * [`pack`] — circle packings of disk triangulations and supported-point counts.
//! * [`startree`] — the star-tree transform and its flow lifting.
//! * [`walks`] — random-walk simulation and exact hitting quantities.
//! * [`generators`] — graph families, including a flip-chain triangulation sampler.
//! * [`limits`] — empirical ball distributions of random rootings and degree tails.
//! * [`experiment`] — recipe-driven experiments behind the `pll` binary.

pub mod electric;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod limits;
pub mod linalg;
pub mod pack;
pub mod rng;
pub mod startree;
pub mod stats;
pub mod walks;

pub use electric::{effective_resistance, Network};
pub use error::{Error, Result};
pub use graph::{PlanarGraph, RootedGraph};
