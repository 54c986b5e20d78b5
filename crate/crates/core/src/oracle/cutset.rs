//! Finite-power cut-set values with Gaussian inputs.
//!
//! For power `P` and the active set `A ∩ S`:
//!
//! * relay-receive cut: `log2 det(I + P·G Gᵀ)`, `G` stacking the receiver
//!   and relay channels of the active users (`(N+L) × ∑M`);
//! * relay-transmit cut: `log2 det(I + P·F Fᵀ)`, `F = [H_k.., H_R]`
//!   (`N × (∑M + L)`).
//!
//! Both are averaged exactly over the activity law. Their slope in
//! `log2 P` recovers the DoF cut bounds.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{AntennaConfig, UserSet};
use crate::oracle::channel::{ChannelInstance, ChannelMatrices};
use crate::traffic::ActivityDistribution;

pub const DEFAULT_POWER_GRID: [f64; 2] = [1e6, 1e8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutsetBits {
    pub receive_cut: f64,
    pub transmit_cut: f64,
}

impl CutsetBits {
    pub fn bound(&self) -> f64 {
        self.receive_cut.min(self.transmit_cut)
    }
}

fn real_channel<'a>(channel: &'a ChannelInstance, config: &AntennaConfig) -> Result<&'a ChannelMatrices<f64>> {
    match channel {
        ChannelInstance::Real(ch) => {
            ch.check_shape(config)?;
            Ok(ch)
        }
        ChannelInstance::Prime(_) => Err(Error::Domain("cut-set evaluation needs a real-valued channel".into())),
    }
}

/// `log2 det(I + P·A Aᵀ)`, via the smaller Gram matrix.
fn log2_det_gain(a: &DMatrix<f64>, power: f64) -> Result<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let gram = if a.ncols() <= a.nrows() { a.transpose() * a } else { a * a.transpose() };
    let dim = gram.nrows();
    let m = DMatrix::identity(dim, dim) + gram * power;
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Internal("I + P·A Aᵀ failed Cholesky".into()))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.log2()).sum::<f64>())
}

fn receive_matrix(ch: &ChannelMatrices<f64>, active: UserSet) -> DMatrix<f64> {
    let n = ch.relay_transmit.rows();
    let l = ch.relay_transmit.cols();
    let blocks: Vec<DMatrix<f64>> = active
        .users()
        .map(|u| {
            let mut g = DMatrix::zeros(n + l, ch.receive[u].cols());
            g.rows_mut(0, n).copy_from(&ch.receive[u].to_nalgebra());
            g.rows_mut(n, l).copy_from(&ch.relay_receive[u].to_nalgebra());
            g
        })
        .collect();
    hstack(n + l, &blocks)
}

fn transmit_matrix(ch: &ChannelMatrices<f64>, active: UserSet) -> DMatrix<f64> {
    let n = ch.relay_transmit.rows();
    let mut blocks: Vec<DMatrix<f64>> = active.users().map(|u| ch.receive[u].to_nalgebra()).collect();
    blocks.push(ch.relay_transmit.to_nalgebra());
    hstack(n, &blocks)
}

fn hstack(rows: usize, blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks.iter().map(DMatrix::ncols).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        out.columns_mut(c, b.ncols()).copy_from(b);
        c += b.ncols();
    }
    out
}

/// Expected cut values in bits for the users in `subset` at power `power`.
pub fn cutset_evaluate(
    config: &AntennaConfig,
    dist: &ActivityDistribution,
    subset: UserSet,
    power: f64,
    channel: &ChannelInstance,
) -> Result<CutsetBits> {
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::Domain(format!("power must be positive and finite, got {power}")));
    }
    if dist.users() != config.users() {
        return Err(Error::DimensionMismatch { expected: config.users(), actual: dist.users() });
    }
    if subset.is_empty() || !subset.fits(config.users()) {
        return Err(Error::Validation(format!("subset {subset} is not a nonempty subset of the {} users", config.users())));
    }
    let ch = real_channel(channel, config)?;
    let mut bits = CutsetBits { receive_cut: 0.0, transmit_cut: 0.0 };
    for (pattern, mass) in dist.marginalize(subset)?.iter() {
        bits.receive_cut += mass * log2_det_gain(&receive_matrix(ch, pattern), power)?;
        bits.transmit_cut += mass * log2_det_gain(&transmit_matrix(ch, pattern), power)?;
    }
    Ok(bits)
}

/// Least-squares slope of `min(cut1, cut2)` against `log2 P`.
pub fn cutset_slope(
    config: &AntennaConfig,
    dist: &ActivityDistribution,
    subset: UserSet,
    powers: &[f64],
    channel: &ChannelInstance,
) -> Result<f64> {
    if powers.len() < 2 {
        return Err(Error::Validation(format!("slope fit needs at least 2 powers, got {}", powers.len())));
    }
    let points = powers
        .iter()
        .map(|&p| Ok((p.log2(), cutset_evaluate(config, dist, subset, p, channel)?.bound())))
        .collect::<Result<Vec<_>>>()?;
    least_squares_slope(&points)
}

fn least_squares_slope(points: &[(f64, f64)]) -> Result<f64> {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Validation("powers must not all be equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(sxy / sxx)
}
