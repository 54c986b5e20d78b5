//! Independent checks of the closed forms: an explicit-matrix rank count
//! of the relaying scheme, finite-power cut-set values whose `log P` slope
//! gives the DoF bounds, and the relay's compression rate penalty.

pub mod channel;
pub mod cutset;
pub mod field;
pub mod penalty;
pub mod rank;

pub use channel::{ChannelInstance, Field};
pub use cutset::{cutset_evaluate, cutset_slope, CutsetBits, DEFAULT_POWER_GRID};
pub use penalty::{rate_penalty, rate_penalty_at, rate_penalty_monte_carlo, rate_penalty_monte_carlo_independent};
pub use rank::rank_decode_count;
