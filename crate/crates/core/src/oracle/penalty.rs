//! Rate lost to the relay's compression noise.
//!
//! The relay quantises its observation `Y_R = ... + Z_R` with independent
//! unit-variance compression noise `Ẑ_R`. The loss is
//! `h(Z_R + Ẑ_R) − h(Ẑ_R)` with both terms circularly-symmetric complex
//! Gaussians in `L` dimensions, covariances `2I` and `I`, which is exactly
//! `L` bits whatever the transmit power. A constant rate loss vanishes
//! once divided by `log P`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, PENALTY_STREAM};

/// The penalty in bits for `L` relay antennas.
pub fn rate_penalty(relay_antennas: u32) -> f64 {
    f64::from(relay_antennas)
}

/// The penalty at transmit power `power`, which only has to be positive.
pub fn rate_penalty_at(relay_antennas: u32, power: f64) -> Result<f64> {
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::Domain(format!("power must be positive and finite, got {power}")));
    }
    Ok(rate_penalty(relay_antennas))
}

/// Differential entropy in bits of a circularly-symmetric complex Gaussian,
/// given the covariance of its real representation (`2L × 2L`).
pub fn complex_gaussian_entropy_bits(real_cov: &DMatrix<f64>) -> Result<f64> {
    let dim = real_cov.nrows();
    let chol = real_cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Domain("covariance is not positive definite".into()))?;
    let log2_det: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.log2()).sum::<f64>();
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    Ok(0.5 * (dim as f64 * two_pi_e.log2() + log2_det))
}

fn sample_covariance(samples: &DMatrix<f64>) -> DMatrix<f64> {
    samples.transpose() * samples / samples.nrows() as f64
}

/// Draws `samples` rows of a `2L`-dim real vector, each coordinate
/// standard normal scaled by `std_dev`.
fn draw(rng: &mut crate::rng::StreamRng, samples: usize, dim: usize, std_dev: f64) -> DMatrix<f64> {
    DMatrix::from_fn(samples, dim, |_, _| std_dev * rng.sample::<f64, _>(StandardNormal))
}

fn check_mc(relay_antennas: u32, samples: usize) -> Result<()> {
    if relay_antennas == 0 {
        return Ok(());
    }
    if samples < 4 * relay_antennas as usize {
        return Err(Error::Validation(format!("need at least {} samples", 4 * relay_antennas)));
    }
    Ok(())
}

/// Entropy difference from sample covariances, with `Z_R + Ẑ_R` drawn as
/// `√2` times the same normals used for `Ẑ_R`.
///
/// Sampling error cancels in the ratio of determinants, so the estimate
/// equals `L` to rounding while still running the covariance and entropy
/// code on random data.
pub fn rate_penalty_monte_carlo(relay_antennas: u32, samples: usize, seed: u64) -> Result<f64> {
    check_mc(relay_antennas, samples)?;
    if relay_antennas == 0 {
        return Ok(0.0);
    }
    let dim = 2 * relay_antennas as usize;
    let mut rng = stream_rng(seed, PENALTY_STREAM);
    // Unit complex variance is 1/2 per real coordinate.
    let compression = draw(&mut rng, samples, dim, std::f64::consts::FRAC_1_SQRT_2);
    let combined = &compression * std::f64::consts::SQRT_2;
    Ok(complex_gaussian_entropy_bits(&sample_covariance(&combined))?
        - complex_gaussian_entropy_bits(&sample_covariance(&compression))?)
}

/// The same estimate with `Z_R`, `Ẑ_R` and the reference `Ẑ_R` sample all
/// drawn independently. Its error is of order `L/√samples`.
pub fn rate_penalty_monte_carlo_independent(relay_antennas: u32, samples: usize, seed: u64) -> Result<f64> {
    check_mc(relay_antennas, samples)?;
    if relay_antennas == 0 {
        return Ok(0.0);
    }
    let dim = 2 * relay_antennas as usize;
    let mut rng = stream_rng(seed, PENALTY_STREAM);
    let std_dev = std::f64::consts::FRAC_1_SQRT_2;
    let relay_noise = draw(&mut rng, samples, dim, std_dev);
    let compression = draw(&mut rng, samples, dim, std_dev);
    let reference = draw(&mut rng, samples, dim, std_dev);
    let combined = relay_noise + compression;
    Ok(complex_gaussian_entropy_bits(&sample_covariance(&combined))?
        - complex_gaussian_entropy_bits(&sample_covariance(&reference))?)
}
