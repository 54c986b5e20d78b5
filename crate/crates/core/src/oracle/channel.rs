//! Static channel realisations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::AntennaConfig;
use crate::oracle::field::{DenseMatrix, Fp, Scalar};
use crate::rng::{stream_rng, CHANNEL_STREAM};

/// Draws allowed before a rank-deficient channel is reported.
pub const MAX_CHANNEL_ATTEMPTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Prime,
    Real,
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prime" => Ok(Field::Prime),
            "real" => Ok(Field::Real),
            other => Err(Error::Validation(format!("unknown field {other:?}, expected prime or real"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Prime => "prime",
            Field::Real => "real",
        })
    }
}

/// Receiver channels `N×M_k`, relay receive channels `L×M_k` and the relay
/// transmit channel `N×L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrices<T> {
    pub receive: Vec<DenseMatrix<T>>,
    pub relay_receive: Vec<DenseMatrix<T>>,
    pub relay_transmit: DenseMatrix<T>,
    pub seed: u64,
}

impl<T: Scalar> ChannelMatrices<T> {
    fn draw(config: &AntennaConfig, rng: &mut crate::rng::StreamRng, seed: u64) -> Self {
        let n = config.rx_antennas() as usize;
        let l = config.relay_antennas() as usize;
        let receive = config.tx_antennas().iter().map(|&m| DenseMatrix::generic(n, m as usize, rng)).collect();
        let relay_receive = config.tx_antennas().iter().map(|&m| DenseMatrix::generic(l, m as usize, rng)).collect();
        let relay_transmit = DenseMatrix::generic(n, l, rng);
        ChannelMatrices { receive, relay_receive, relay_transmit, seed }
    }

    fn all_full_rank(&self) -> bool {
        self.receive.iter().chain(&self.relay_receive).all(DenseMatrix::is_full_rank) && self.relay_transmit.is_full_rank()
    }

    pub fn users(&self) -> usize {
        self.receive.len()
    }

    /// Checks that the shapes are those of `config`.
    pub fn check_shape(&self, config: &AntennaConfig) -> Result<()> {
        let n = config.rx_antennas() as usize;
        let l = config.relay_antennas() as usize;
        if self.users() != config.users() || self.relay_receive.len() != config.users() {
            return Err(Error::DimensionMismatch { expected: config.users(), actual: self.users() });
        }
        let shape_ok = config.tx_antennas().iter().enumerate().all(|(k, &m)| {
            let m = m as usize;
            (self.receive[k].rows(), self.receive[k].cols()) == (n, m)
                && (self.relay_receive[k].rows(), self.relay_receive[k].cols()) == (l, m)
        }) && (self.relay_transmit.rows(), self.relay_transmit.cols()) == (n, l);
        if !shape_ok {
            return Err(Error::Validation(format!("channel matrix shapes do not match {config}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelInstance {
    Prime(ChannelMatrices<Fp>),
    Real(ChannelMatrices<f64>),
}

impl ChannelInstance {
    /// Draws a channel with every matrix full rank, redrawing on deficiency.
    pub fn sample(config: &AntennaConfig, field: Field, seed: u64) -> Result<Self> {
        fn sample_in<T: Scalar>(config: &AntennaConfig, seed: u64) -> Result<ChannelMatrices<T>> {
            let mut rng = stream_rng(seed, CHANNEL_STREAM);
            for _ in 0..MAX_CHANNEL_ATTEMPTS {
                let ch = ChannelMatrices::draw(config, &mut rng, seed);
                if ch.all_full_rank() {
                    return Ok(ch);
                }
            }
            Err(Error::DegenerateChannel(MAX_CHANNEL_ATTEMPTS))
        }
        Ok(match field {
            Field::Prime => ChannelInstance::Prime(sample_in(config, seed)?),
            Field::Real => ChannelInstance::Real(sample_in(config, seed)?),
        })
    }

    /// A caller-supplied real channel. Every matrix must be full rank.
    pub fn real_from_matrices(
        config: &AntennaConfig,
        receive: Vec<DenseMatrix<f64>>,
        relay_receive: Vec<DenseMatrix<f64>>,
        relay_transmit: DenseMatrix<f64>,
    ) -> Result<Self> {
        let ch = ChannelMatrices { receive, relay_receive, relay_transmit, seed: 0 };
        ch.check_shape(config)?;
        if !ch.all_full_rank() {
            return Err(Error::Validation("channel matrices must be full rank".into()));
        }
        Ok(ChannelInstance::Real(ch))
    }

    pub fn field(&self) -> Field {
        match self {
            ChannelInstance::Prime(_) => Field::Prime,
            ChannelInstance::Real(_) => Field::Real,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ChannelInstance::Prime(c) => c.seed,
            ChannelInstance::Real(c) => c.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_channels_have_expected_shapes() {
        let c = AntennaConfig::new(vec![1, 2, 3], 2, 1).unwrap();
        for field in [Field::Prime, Field::Real] {
            let ch = ChannelInstance::sample(&c, field, 4).unwrap();
            assert_eq!(ch.field(), field);
            match &ch {
                ChannelInstance::Prime(m) => m.check_shape(&c).unwrap(),
                ChannelInstance::Real(m) => m.check_shape(&c).unwrap(),
            }
            assert_eq!(ChannelInstance::sample(&c, field, 4).unwrap(), ch);
        }
    }

    #[test]
    fn explicit_channel_validation() {
        let c = AntennaConfig::symmetric(2, 1, 1, 1).unwrap();
        let one = || DenseMatrix::from_rows(1, 1, vec![1.0]);
        assert!(ChannelInstance::real_from_matrices(&c, vec![one(), one()], vec![one(), one()], one()).is_ok());
        let zero = DenseMatrix::from_rows(1, 1, vec![0.0]);
        assert!(ChannelInstance::real_from_matrices(&c, vec![one(), zero], vec![one(), one()], one()).is_err());
        assert!(ChannelInstance::real_from_matrices(&c, vec![one()], vec![one()], one()).is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!("prime".parse::<Field>().unwrap(), Field::Prime);
        assert_eq!("real".parse::<Field>().unwrap(), Field::Real);
        assert!("complex".parse::<Field>().is_err());
    }
}
