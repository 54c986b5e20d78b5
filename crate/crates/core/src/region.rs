//! The DoF region: one subset-sum constraint per nonempty user subset.
//!
//! For a subset `S` the bound is the smaller of two expectations over the
//! activity pattern `A` restricted to `S`:
//!
//! ```text
//! receive cut:  E[ min( ∑_{i∈A} M_i,     N + L ) ]   (relay grouped with the receiver)
//! transmit cut: E[ min( ∑_{i∈A} M_i + L, N     ) ]   (relay grouped with the transmitters)
//! ```

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{check_cap, AntennaConfig, DofVector, UserSet, DEFAULT_ENUMERATION_CAP};
use crate::traffic::ActivityDistribution;

/// Slack used when testing region membership.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingSide {
    RelayReceiveCut,
    RelayTransmitCut,
}

impl fmt::Display for BindingSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BindingSide::RelayReceiveCut => "relay-receive-cut",
            BindingSide::RelayTransmitCut => "relay-transmit-cut",
        })
    }
}

/// Both arguments of the min for one subset, before taking the min.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPair {
    pub receive: f64,
    pub transmit: f64,
}

impl CutPair {
    pub fn bound(&self) -> f64 {
        self.receive.min(self.transmit)
    }

    /// Ties go to the receive cut.
    pub fn binding_side(&self) -> BindingSide {
        if self.receive <= self.transmit + MEMBERSHIP_TOLERANCE {
            BindingSide::RelayReceiveCut
        } else {
            BindingSide::RelayTransmitCut
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutConstraint {
    pub subset: UserSet,
    pub bound: f64,
    pub binding_side: BindingSide,
}

#[derive(Debug, Clone)]
pub struct DofRegion {
    config: AntennaConfig,
    constraints: Vec<CutConstraint>,
}

fn check_dims(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<()> {
    if config.users() != dist.users() {
        return Err(Error::DimensionMismatch { expected: config.users(), actual: dist.users() });
    }
    Ok(())
}

/// Evaluates both cut expectations for `subset`, with `relay` antennas at
/// the relay. Patterns are pooled onto `A ∩ subset` implicitly.
fn cut_expectations(config: &AntennaConfig, dist: &ActivityDistribution, subset: UserSet, relay: u32) -> CutPair {
    let n = f64::from(config.rx_antennas());
    let l = f64::from(relay);
    let mut receive = 0.0;
    let mut transmit = 0.0;
    for (pattern, p) in dist.iter() {
        let s = config.antennas_in(pattern.intersection(subset)) as f64;
        receive += p * s.min(n + l);
        transmit += p * (s + l).min(n);
    }
    CutPair { receive, transmit }
}

/// Both min arguments of the subset-sum bound for `subset`.
pub fn cut_pair(config: &AntennaConfig, dist: &ActivityDistribution, subset: UserSet) -> Result<CutPair> {
    check_dims(config, dist)?;
    if subset.is_empty() {
        return Err(Error::Domain("cut bound of the empty subset".into()));
    }
    if !subset.fits(config.users()) {
        return Err(Error::Domain(format!("subset {subset} not within K = {}", config.users())));
    }
    Ok(cut_expectations(config, dist, subset, config.relay_antennas()))
}

/// Upper bound on `∑_{k∈subset} d_k`.
pub fn cut_bound(config: &AntennaConfig, dist: &ActivityDistribution, subset: UserSet) -> Result<f64> {
    cut_pair(config, dist, subset).map(|c| c.bound())
}

/// Full region with the default enumeration cap.
pub fn region(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<DofRegion> {
    region_with_cap(config, dist, DEFAULT_ENUMERATION_CAP)
}

/// Full region, enumerating subsets of up to `cap` users.
pub fn region_with_cap(config: &AntennaConfig, dist: &ActivityDistribution, cap: usize) -> Result<DofRegion> {
    check_dims(config, dist)?;
    check_cap(config.users(), cap)?;
    let constraints = UserSet::nonempty_subsets(config.users())
        .map(|subset| {
            let pair = cut_expectations(config, dist, subset, config.relay_antennas());
            CutConstraint { subset, bound: pair.bound(), binding_side: pair.binding_side() }
        })
        .collect();
    Ok(DofRegion { config: config.clone(), constraints })
}

/// Sum DoF: the bound on the full user set.
pub fn sum_dof(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<f64> {
    cut_bound(config, dist, UserSet::full(config.users()))
}

/// Sum DoF with the relay removed, `E[min(∑_{i∈A} M_i, N)]`.
pub fn sum_dof_no_relay(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<f64> {
    check_dims(config, dist)?;
    Ok(cut_expectations(config, dist, UserSet::full(config.users()), 0).bound())
}

impl DofRegion {
    pub fn config(&self) -> &AntennaConfig {
        &self.config
    }

    /// One constraint per nonempty subset, ordered by subset mask.
    pub fn constraints(&self) -> &[CutConstraint] {
        &self.constraints
    }

    pub fn constraint(&self, subset: UserSet) -> Option<&CutConstraint> {
        let idx = (subset.mask() as usize).checked_sub(1)?;
        self.constraints.get(idx)
    }

    pub fn sum_bound(&self) -> f64 {
        self.constraints.last().map(|c| c.bound).unwrap_or(0.0)
    }

    pub fn contains(&self, d: &DofVector) -> Result<bool> {
        if d.len() != self.config.users() {
            return Err(Error::DimensionMismatch { expected: self.config.users(), actual: d.len() });
        }
        Ok(self
            .constraints
            .iter()
            .all(|c| d.sum_over(c.subset) <= c.bound + MEMBERSHIP_TOLERANCE))
    }

    /// CSV rows `subset_mask,subset_size,bound,binding_side`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "# DoF region constraints, (K,M,N,L)={}", self.config)?;
        writeln!(out, "subset_mask,subset_size,bound,binding_side")?;
        for c in &self.constraints {
            writeln!(
                out,
                "{},{},{},{}",
                c.subset.mask(),
                c.subset.len(),
                crate::csv::fmt_num(c.bound),
                c.binding_side
            )?;
        }
        Ok(())
    }
}
