//! Explicit-matrix realisation of the receive-and-forward scheme.
//!
//! Each transmitted symbol is a column. Every slot adds `N` receiver rows:
//! the active users' channels on their fresh columns, plus the relay
//! transmit channel applied to generic combinations of what the relay has
//! stored. In a collision slot the relay stores `captured` generic
//! projections of its own `L`-dimensional observation. The number of
//! decodable symbols is the rank of the stacked receiver rows.

use crate::error::{Error, Result};
use crate::model::AntennaConfig;
use crate::oracle::channel::{ChannelInstance, ChannelMatrices};
use crate::oracle::field::{DenseMatrix, Scalar};
use crate::rng::{stream_rng, COMBINER_STREAM};
use crate::sim::{ActivityTrace, SimState};

pub const MAX_ORACLE_USERS: usize = 4;
pub const MAX_ORACLE_SLOTS: usize = 200;

/// Rank of the receiver's observations over the whole trace, with relay
/// decisions taken from the simulator's policy.
pub fn rank_decode_count(config: &AntennaConfig, trace: &ActivityTrace, channel: &ChannelInstance) -> Result<usize> {
    if config.users() > MAX_ORACLE_USERS {
        return Err(Error::Validation(format!("rank oracle supports K ≤ {MAX_ORACLE_USERS}, got {}", config.users())));
    }
    if trace.len() > MAX_ORACLE_SLOTS {
        return Err(Error::Validation(format!("rank oracle supports at most {MAX_ORACLE_SLOTS} slots, got {}", trace.len())));
    }
    if trace.users() != config.users() {
        return Err(Error::DimensionMismatch { expected: config.users(), actual: trace.users() });
    }
    match channel {
        ChannelInstance::Prime(ch) => decode_rank(config, trace, ch),
        ChannelInstance::Real(ch) => decode_rank(config, trace, ch),
    }
}

fn decode_rank<T: Scalar>(config: &AntennaConfig, trace: &ActivityTrace, ch: &ChannelMatrices<T>) -> Result<usize> {
    ch.check_shape(config)?;
    let n = config.rx_antennas() as usize;
    let l = config.relay_antennas() as usize;
    let total_cols: usize = trace.slots().iter().map(|&s| config.antennas_in(s) as usize).sum();
    if total_cols == 0 {
        return Ok(0);
    }
    let mut rng = stream_rng(ch.seed, COMBINER_STREAM);
    let mut received = DenseMatrix::<T>::zeros(trace.len() * n, total_cols);
    // Relay-stored combinations, one row each, over all symbol columns.
    let mut stored: Vec<Vec<T>> = Vec::new();
    let mut state = SimState::new();
    let mut next_col = 0;

    for (t, &active) in trace.slots().iter().enumerate() {
        let row0 = t * n;
        let mut relay_obs = DenseMatrix::<T>::zeros(l, total_cols);
        for user in active.users() {
            received.add_block(row0, next_col, &ch.receive[user]);
            relay_obs.add_block(0, next_col, &ch.relay_receive[user]);
            next_col += ch.receive[user].cols();
        }

        let outcome = state.step(active, config);
        let relayed = outcome.relayed as usize;
        if relayed > 0 {
            // Forwarded signal: H_R · V · S · stored, with S (relayed × stored)
            // and V (L × relayed) fresh generic draws.
            let mix = DenseMatrix::<T>::generic(relayed, stored.len(), &mut rng);
            let spread = DenseMatrix::<T>::generic(l, relayed, &mut rng);
            let stored_matrix = DenseMatrix::from_rows(stored.len(), total_cols, stored.concat());
            let injected = ch.relay_transmit.mul(&spread).mul(&mix).mul(&stored_matrix);
            received.add_block(row0, 0, &injected);
        }
        let captured = outcome.captured as usize;
        if captured > 0 {
            let projection = DenseMatrix::<T>::generic(captured, l, &mut rng);
            let kept = projection.mul(&relay_obs);
            stored.extend((0..captured).map(|r| kept.row(r).to_vec()));
        }
    }
    Ok(received.rank())
}
