//! Degrees-of-freedom analysis for a multiple-access channel whose users
//! transmit in bursts, assisted by a cognitive MIMO relay that overhears
//! collisions and forwards them when the receiver has spare dimensions.
//!
//! The crate computes the DoF region under arbitrary activity laws, the
//! relay gain over a relay-less baseline, the collision-free threshold,
//! and checks the analysis with a slot-level simulator and a
//! linear-algebra decodability oracle.

pub mod cli;
pub mod csv;
pub mod figures;
pub mod error;
pub mod gains;
pub mod model;
pub mod oracle;
pub mod region;
pub mod rng;
pub mod sim;
pub mod threshold;
pub mod traffic;

pub use error::{Error, Result};
pub use model::{AntennaConfig, DofVector, UserSet};
pub use region::{region, sum_dof, DofRegion};
pub use traffic::ActivityDistribution;
