//! Additive sum-DoF gain from adding the relay.
//!
//! The gain is `sum_dof(with relay) - sum_dof(without relay)`. For the two
//! extreme traffic laws it has closed forms in terms of the binomial pmf
//! `B_K(i)`, and each closed form is the min of a receive-cut term (what the
//! relay can overhear during collisions) and a transmit-cut term (what it can
//! push into idle receive dimensions).

use std::fmt;

use crate::error::{Error, Result};
use crate::model::AntennaConfig;
use crate::region::{sum_dof, sum_dof_no_relay};
use crate::traffic::ActivityDistribution;

/// Default number of points in a p sweep over `[0, 1]`.
pub const DEFAULT_GRID_POINTS: usize = 1001;

/// Second differences above `-CONVEXITY_SLACK` count as convex.
pub const CONVEXITY_SLACK: f64 = 1e-9;

const ENDPOINT_TOLERANCE: f64 = 1e-12;
const DOMINANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficMode {
    Dependent,
    Independent,
}

impl fmt::Display for TrafficMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrafficMode::Dependent => "dependent",
            TrafficMode::Independent => "independent",
        })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// `B_K(i) = C(K, i) p^i (1-p)^(K-i)`.
pub fn binom_pmf(k: usize, i: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if i > k {
        return Err(Error::Domain(format!("binomial index {i} exceeds K = {k}")));
    }
    Ok(binom(k, i) * p.powi(i as i32) * (1.0 - p).powi((k - i) as i32))
}

/// `B_K(0), .., B_K(K)` with coefficients built incrementally.
pub fn binom_pmf_row(k: usize, p: f64) -> Result<Vec<f64>> {
    check_probability(p)?;
    let mut coeff = 1.0;
    Ok((0..=k)
        .map(|i| {
            if i > 0 {
                coeff = coeff * (k - i + 1) as f64 / i as f64;
            }
            coeff * p.powi(i as i32) * (1.0 - p).powi((k - i) as i32)
        })
        .collect())
}

fn binom(k: usize, i: usize) -> f64 {
    let i = i.min(k - i);
    (1..=i).fold(1.0, |c, j| c * (k - i + j) as f64 / j as f64)
}

/// `(M, N, L)` as reals, rejecting asymmetric configurations.
fn symmetric_params(config: &AntennaConfig) -> Result<(f64, f64, f64)> {
    let m = config.symmetric_m()?;
    Ok((f64::from(m), f64::from(config.rx_antennas()), f64::from(config.relay_antennas())))
}

/// `⌊N/M⌋`, the largest number of simultaneously active users the receiver
/// resolves alone.
fn receiver_capacity_users(config: &AntennaConfig) -> Result<usize> {
    let m = config.symmetric_m()?;
    Ok((config.rx_antennas() / m) as usize)
}

/// Relay gain for any configuration and law, from the region bounds.
pub fn relay_gain(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<f64> {
    Ok(sum_dof(config, dist)? - sum_dof_no_relay(config, dist)?)
}

/// Relay gain of a symmetric configuration under an arbitrary law.
pub fn delta_dof(config: &AntennaConfig, dist: &ActivityDistribution) -> Result<f64> {
    config.symmetric_m()?;
    relay_gain(config, dist)
}

/// The receive-cut and transmit-cut terms of both closed forms at one `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainTerms {
    pub dep_receive: f64,
    pub dep_transmit: f64,
    pub ind_receive: f64,
    pub ind_transmit: f64,
}

impl GainTerms {
    pub fn dependent(&self) -> f64 {
        self.dep_receive.min(self.dep_transmit)
    }

    pub fn independent(&self) -> f64 {
        self.ind_receive.min(self.ind_transmit)
    }
}

pub fn gain_terms(config: &AntennaConfig, p: f64) -> Result<GainTerms> {
    check_probability(p)?;
    let (m, n, l) = symmetric_params(config)?;
    let k = config.users();
    let km = k as f64 * m;
    let (dep_receive, dep_transmit) = if km <= n {
        (0.0, 0.0)
    } else {
        (p * (km - n).min(l), (1.0 - p) * l.min(n))
    };
    let i_star = receiver_capacity_users(config)?;
    let mut ind_receive = 0.0;
    let mut ind_transmit = 0.0;
    for (i, b) in binom_pmf_row(k, p)?.into_iter().enumerate() {
        let im = i as f64 * m;
        if i > i_star {
            ind_receive += b * (im - n).min(l);
        } else {
            ind_transmit += b * l.min(n - im);
        }
    }
    Ok(GainTerms { dep_receive, dep_transmit, ind_receive, ind_transmit })
}

/// Closed-form gain under fully dependent traffic,
/// `min[p·min(KM−N, L), (1−p)·min(L, N)]`, and 0 when `KM ≤ N`.
pub fn delta_dof_dep(config: &AntennaConfig, p: f64) -> Result<f64> {
    gain_terms(config, p).map(|t| t.dependent())
}

/// Closed-form gain under independent traffic,
/// `min[∑_{i>i*} B_K(i)·min(iM−N, L), ∑_{i≤i*} B_K(i)·min(L, N−iM)]` with `i* = ⌊N/M⌋`.
pub fn delta_dof_ind(config: &AntennaConfig, p: f64) -> Result<f64> {
    gain_terms(config, p).map(|t| t.independent())
}

pub fn delta_dof_mode(config: &AntennaConfig, mode: TrafficMode, p: f64) -> Result<f64> {
    match mode {
        TrafficMode::Dependent => delta_dof_dep(config, p),
        TrafficMode::Independent => delta_dof_ind(config, p),
    }
}

/// `n` evenly spaced points on `[0, 1]`, computed as `i / (n-1)` so that
/// round fractions land exactly.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakMethod {
    /// `p* = N/(KM)`, proven when `L ≥ KM−N` and `L ≥ N`.
    ClosedForm,
    /// Best point of a uniform grid; no optimality claim.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakGain {
    pub p_star: f64,
    pub value: f64,
    pub method: PeakMethod,
}

/// Whether `config` satisfies `KM > N`, `L ≥ KM−N` and `L ≥ N`.
pub fn in_peak_regime(config: &AntennaConfig) -> Result<bool> {
    let (m, n, l) = symmetric_params(config)?;
    let km = config.users() as f64 * m;
    Ok(km > n && l >= km - n && l >= n)
}

/// Peak gain over `p` for relays with enough antennas.
pub fn peak_gain(config: &AntennaConfig, mode: TrafficMode) -> Result<PeakGain> {
    if !in_peak_regime(config)? {
        return Err(Error::UnsupportedRegime(format!(
            "peak location is only known in closed form for KM > N, L >= KM-N and L >= N; got {config}"
        )));
    }
    let (m, n, _) = symmetric_params(config)?;
    let p_star = n / (config.users() as f64 * m);
    Ok(PeakGain { p_star, value: delta_dof_mode(config, mode, p_star)?, method: PeakMethod::ClosedForm })
}

/// [`peak_gain`], falling back to a grid search outside the closed-form regime.
pub fn peak_gain_or_numeric(config: &AntennaConfig, mode: TrafficMode, grid_points: usize) -> Result<PeakGain> {
    match peak_gain(config, mode) {
        Err(Error::UnsupportedRegime(_)) => numeric_peak(config, mode, &uniform_grid(grid_points)),
        other => other,
    }
}

/// Grid argmax of the closed-form gain. The first maximiser wins ties.
pub fn numeric_peak(config: &AntennaConfig, mode: TrafficMode, grid: &[f64]) -> Result<PeakGain> {
    let mut best = PeakGain { p_star: 0.0, value: f64::NEG_INFINITY, method: PeakMethod::Numeric };
    for &p in grid {
        let v = delta_dof_mode(config, mode, p)?;
        if v > best.value {
            best = PeakGain { p_star: p, value: v, method: PeakMethod::Numeric };
        }
    }
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    DependentGreater,
    IndependentGreater,
    Equal,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::DependentGreater => "dep>ind",
            Dominance::IndependentGreater => "ind>dep",
            Dominance::Equal => "equal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceRow {
    pub p: f64,
    pub dependent: f64,
    pub independent: f64,
    pub sign: Dominance,
}

/// Compares both closed forms at each grid point. Gains within 1e-12 of each
/// other are reported as equal.
pub fn dominance_report(config: &AntennaConfig, grid: &[f64]) -> Result<Vec<DominanceRow>> {
    grid.iter()
        .map(|&p| {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain(format!("dominance grid must lie inside (0, 1), got {p}")));
            }
            let t = gain_terms(config, p)?;
            let (dependent, independent) = (t.dependent(), t.independent());
            let sign = if dependent > independent + DOMINANCE_TOLERANCE {
                Dominance::DependentGreater
            } else if independent > dependent + DOMINANCE_TOLERANCE {
                Dominance::IndependentGreater
            } else {
                Dominance::Equal
            };
            Ok(DominanceRow { p, dependent, independent, sign })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainTerm {
    ReceiveCut,
    TransmitCut,
}

/// Checks that the independent-traffic `term` is convex over `grid` (second
/// differences ≥ −1e-9) and meets the matching dependent-traffic line at
/// `p = 0` and `p = 1`.
///
/// Only defined where the term is provably convex: `L ≥ KM−N` for the
/// receive cut, `L ≥ N` and `KM ≥ N` for the transmit cut.
pub fn convexity_check(config: &AntennaConfig, term: GainTerm, grid: &[f64]) -> Result<bool> {
    let (m, n, l) = symmetric_params(config)?;
    let km = config.users() as f64 * m;
    let in_regime = match term {
        GainTerm::ReceiveCut => l >= km - n,
        GainTerm::TransmitCut => l >= n && km >= n,
    };
    if !in_regime {
        return Err(Error::UnsupportedRegime(format!("{term:?} term is not convex-by-construction for {config}")));
    }
    if grid.len() < 3 {
        return Err(Error::Domain("convexity check needs at least 3 grid points".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let ind = |p: f64| -> Result<f64> {
        let t = gain_terms(config, p)?;
        Ok(match term {
            GainTerm::ReceiveCut => t.ind_receive,
            GainTerm::TransmitCut => t.ind_transmit,
        })
    };
    let line = |p: f64| match term {
        GainTerm::ReceiveCut => p * (km - n).max(0.0).min(l),
        GainTerm::TransmitCut => (1.0 - p) * l.min(n),
    };
    let values = grid.iter().map(|&p| ind(p)).collect::<Result<Vec<_>>>()?;
    let convex = grid.windows(3).zip(values.windows(3)).all(|(x, y)| {
        // Divided second difference, valid for non-uniform grids.
        let left = (y[1] - y[0]) / (x[1] - x[0]);
        let right = (y[2] - y[1]) / (x[2] - x[1]);
        let h = 0.5 * (x[2] - x[0]);
        (right - left) * h >= -CONVEXITY_SLACK
    });
    let endpoints = [0.0, 1.0]
        .iter()
        .map(|&p| ind(p).map(|v| (v - line(p)).abs() <= ENDPOINT_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;
    Ok(convex && endpoints.into_iter().all(|ok| ok))
}

/// Which law a [`GainProfile`] was computed under.
#[derive(Debug, Clone, PartialEq)]
pub enum GainMode {
    Dependent,
    Independent,
    Custom(ActivityDistribution),
}

/// Gain samples along a traffic sweep.
#[derive(Debug, Clone)]
pub struct GainProfile {
    pub config: AntennaConfig,
    pub mode: GainMode,
    /// `(p, gain)`; for a custom law, `p` is the mean per-user activity.
    pub samples: Vec<(f64, f64)>,
}

impl GainProfile {
    pub fn sweep(config: &AntennaConfig, mode: GainMode, grid: &[f64]) -> Result<Self> {
        let samples = match &mode {
            GainMode::Dependent => grid
                .iter()
                .map(|&p| delta_dof_dep(config, p).map(|g| (p, g)))
                .collect::<Result<Vec<_>>>()?,
            GainMode::Independent => grid
                .iter()
                .map(|&p| delta_dof_ind(config, p).map(|g| (p, g)))
                .collect::<Result<Vec<_>>>()?,
            GainMode::Custom(dist) => {
                let p = mean_activity(dist);
                vec![(p, delta_dof(config, dist)?)]
            }
        };
        Ok(GainProfile { config: config.clone(), mode, samples })
    }
}

/// Average of the per-user marginals.
pub fn mean_activity(dist: &ActivityDistribution) -> f64 {
    let k = dist.users();
    (0..k).map(|u| dist.marginal_activity_prob(u).unwrap_or(0.0)).sum::<f64>() / k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(k: usize, m: u32, n: u32, l: u32) -> AntennaConfig {
        AntennaConfig::symmetric(k, m, n, l).unwrap()
    }

    #[test]
    fn binom_pmf_examples() {
        assert!((binom_pmf(4, 2, 0.5).unwrap() - 0.375).abs() < 1e-15);
        assert!((binom_pmf(4, 0, 0.25).unwrap() - 0.31640625).abs() < 1e-15);
        let total: f64 = (0..=7).map(|i| binom_pmf(7, i, 0.3).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(binom_pmf(3, 4, 0.5).is_err());
        assert!(binom_pmf(3, 1, 1.5).is_err());
    }

    #[test]
    fn binom_coefficients_are_exact_for_k_64() {
        assert_eq!(binom(64, 1), 64.0);
        assert_eq!(binom(64, 2), 2016.0);
        assert_eq!(binom(10, 5), 252.0);
        assert_eq!(binom(5, 0), 1.0);
    }

    #[test]
    fn no_relay_means_no_gain() {
        let c = sym(3, 1, 1, 0);
        for p in [0.0, 0.3, 0.8, 1.0] {
            assert_eq!(delta_dof(&c, &ActivityDistribution::independent(p, 3).unwrap()).unwrap(), 0.0);
            assert_eq!(delta_dof_dep(&c, p).unwrap(), 0.0);
            assert_eq!(delta_dof_ind(&c, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn delta_dof_peak_examples() {
        let c = sym(4, 1, 1, 3);
        let ind = ActivityDistribution::independent(0.25, 4).unwrap();
        let dep = ActivityDistribution::dependent(0.25, 4).unwrap();
        assert!((delta_dof(&c, &ind).unwrap() - 0.31640625).abs() < 1e-12);
        assert!((delta_dof(&c, &dep).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn delta_dof_rejects_asymmetric() {
        let c = AntennaConfig::new(vec![1, 2], 1, 1).unwrap();
        let d = ActivityDistribution::independent(0.5, 2).unwrap();
        assert!(matches!(delta_dof(&c, &d), Err(Error::Asymmetric(_))));
        assert!(matches!(delta_dof_dep(&c, 0.5), Err(Error::Asymmetric(_))));
        assert!(matches!(delta_dof_ind(&c, 0.5), Err(Error::Asymmetric(_))));
        // The general route still works.
        assert!(relay_gain(&c, &d).unwrap() > 0.0);
    }

    #[test]
    fn dependent_closed_form_examples() {
        assert!((delta_dof_dep(&sym(4, 2, 7, 1), 0.9).unwrap() - 0.1).abs() < 1e-12);
        assert!((delta_dof_dep(&sym(2, 1, 1, 1), 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(delta_dof_dep(&sym(2, 1, 1, 1), 0.0).unwrap(), 0.0);
        assert_eq!(delta_dof_dep(&sym(2, 1, 3, 4), 0.4).unwrap(), 0.0);
    }

    #[test]
    fn independent_closed_form_examples() {
        assert!((delta_dof_ind(&sym(4, 2, 7, 1), 0.9).unwrap() - 0.3439).abs() < 1e-12);
        assert!((delta_dof_ind(&sym(4, 2, 1, 1), 0.1).unwrap() - 0.3439).abs() < 1e-12);
        assert_eq!(delta_dof_ind(&sym(4, 2, 7, 1), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn peak_gain_examples() {
        let c = sym(4, 1, 1, 3);
        let dep = peak_gain(&c, TrafficMode::Dependent).unwrap();
        assert_eq!(dep.p_star, 0.25);
        assert!((dep.value - 0.75).abs() < 1e-15);
        assert_eq!(dep.method, PeakMethod::ClosedForm);
        let ind = peak_gain(&c, TrafficMode::Independent).unwrap();
        assert!((ind.value - 0.31640625).abs() < 1e-15);
        let two = peak_gain(&sym(2, 1, 1, 1), TrafficMode::Independent).unwrap();
        assert_eq!(two.p_star, 0.5);
        assert!((two.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn peak_gain_matches_grid_maximiser() {
        for c in [sym(4, 1, 1, 3), sym(2, 1, 1, 1), sym(3, 2, 2, 4)] {
            for mode in [TrafficMode::Dependent, TrafficMode::Independent] {
                let exact = peak_gain(&c, mode).unwrap();
                let grid = numeric_peak(&c, mode, &uniform_grid(100_001)).unwrap();
                assert!((exact.p_star - grid.p_star).abs() < 1e-5, "{c} {mode}");
                assert!(exact.value >= grid.value - 1e-12);
            }
        }
    }

    #[test]
    fn peak_gain_outside_regime() {
        let c = sym(4, 2, 7, 1);
        assert!(matches!(peak_gain(&c, TrafficMode::Dependent), Err(Error::UnsupportedRegime(_))));
        let numeric = peak_gain_or_numeric(&c, TrafficMode::Dependent, 1001).unwrap();
        assert_eq!(numeric.method, PeakMethod::Numeric);
        // min(p, 1-p) peaks at one half.
        assert!((numeric.p_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dominance_examples() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let rows = dominance_report(&sym(2, 1, 1, 1), &grid).unwrap();
        assert!(rows.iter().all(|r| r.sign == Dominance::DependentGreater));
        let r = dominance_report(&sym(4, 2, 7, 1), &[0.9]).unwrap()[0];
        assert_eq!(r.sign, Dominance::IndependentGreater);
        let r = dominance_report(&sym(4, 2, 1, 1), &[0.1]).unwrap()[0];
        assert_eq!(r.sign, Dominance::IndependentGreater);
        assert!(dominance_report(&sym(2, 1, 1, 1), &[0.0]).is_err());
    }

    #[test]
    fn convexity_examples() {
        let c = sym(4, 1, 1, 3);
        let grid = uniform_grid(101);
        assert!(convexity_check(&c, GainTerm::ReceiveCut, &grid).unwrap());
        assert!(convexity_check(&c, GainTerm::TransmitCut, &grid).unwrap());
        let t0 = gain_terms(&c, 0.0).unwrap();
        let t1 = gain_terms(&c, 1.0).unwrap();
        assert_eq!(t0.ind_transmit, 1.0);
        assert_eq!(t1.ind_transmit, 0.0);
        assert!(convexity_check(&sym(1, 2, 1, 1), GainTerm::ReceiveCut, &grid).unwrap());
        assert!(convexity_check(&sym(1, 2, 1, 1), GainTerm::TransmitCut, &grid).unwrap());
        assert!(convexity_check(&sym(1, 1, 1, 1), GainTerm::TransmitCut, &grid).unwrap());
    }

    #[test]
    fn convexity_regime_violations() {
        let grid = uniform_grid(11);
        assert!(matches!(
            convexity_check(&sym(4, 2, 1, 1), GainTerm::ReceiveCut, &grid),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            convexity_check(&sym(4, 2, 7, 1), GainTerm::TransmitCut, &grid),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(convexity_check(&sym(4, 1, 1, 3), GainTerm::ReceiveCut, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn fixed_p_relay_antenna_scaling() {
        // K=4, M=N=1, p=0.25: dependent gains grow in equal steps up to
        // L=KM-N=3; independent gains grow in shrinking steps.
        let dep: Vec<f64> = (0..=5).map(|l| delta_dof_dep(&sym(4, 1, 1, l), 0.25).unwrap()).collect();
        let expect = [0.0, 0.25, 0.5, 0.75, 0.75, 0.75];
        for (a, b) in dep.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let ind: Vec<f64> = (0..=5).map(|l| delta_dof_ind(&sym(4, 1, 1, l), 0.25).unwrap()).collect();
        let steps: Vec<f64> = ind.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps[0] > steps[1] && steps[1] > steps[2] && steps[2] > 0.0);
        assert!(steps[3].abs() < 1e-15 && steps[4].abs() < 1e-15);
    }

    #[test]
    fn custom_profile_uses_general_form() {
        let c = sym(2, 1, 1, 1);
        let d = ActivityDistribution::dependent(0.5, 2).unwrap();
        let prof = GainProfile::sweep(&c, GainMode::Custom(d), &[]).unwrap();
        assert_eq!(prof.samples, vec![(0.5, 0.5)]);
    }

    #[test]
    fn binom_row_matches_pointwise_pmf() {
        for k in [0, 1, 5, 20, 64] {
            for p in [0.0, 0.013, 0.5, 0.77, 1.0] {
                let row = binom_pmf_row(k, p).unwrap();
                for (i, b) in row.iter().enumerate() {
                    assert!((b - binom_pmf(k, i, p).unwrap()).abs() < 1e-15, "k={k} i={i} p={p}");
                }
            }
        }
    }

    #[test]
    fn peaks_grow_with_users_toward_limits() {
        let mut last = (0.0, 0.0, 0.0);
        for k in 2..=100usize {
            let c = sym(k, 1, 1, k as u32 - 1);
            let dep = peak_gain(&c, TrafficMode::Dependent).unwrap().value;
            let ind = peak_gain(&c, TrafficMode::Independent).unwrap().value;
            assert!(dep > last.0 && ind > last.1 && dep - ind > last.2, "K={k}");
            last = (dep, ind, dep - ind);
        }
        assert!(last.0 < 1.0 && 1.0 - last.0 < 0.011);
        let inv_e = (-1.0f64).exp();
        assert!(last.1 < inv_e && inv_e - last.1 < 0.002);
    }

    /// Symmetric configurations with `K ≥ 2`, `KM > N` and `L ≥ max(KM−N, N)`.
    fn large_relay() -> impl Strategy<Value = AntennaConfig> {
        (2usize..=8, 1u32..=8, 1u32..=8, 0u32..=3)
            .prop_filter("KM > N", |&(k, m, n, _)| k as u32 * m > n)
            .prop_map(|(k, m, n, extra)| sym(k, m, n, (k as u32 * m - n).max(n) + extra))
    }

    proptest! {
        #[test]
        fn closed_forms_match_general_form(k in 1usize..=6, m in 1u32..=4, n in 1u32..=8, l in 0u32..=6,
                                           pi in 0u32..=100) {
            let p = f64::from(pi) / 100.0;
            let c = sym(k, m, n, l);
            let dep = ActivityDistribution::dependent(p, k).unwrap();
            let ind = ActivityDistribution::independent(p, k).unwrap();
            prop_assert!((delta_dof_dep(&c, p).unwrap() - delta_dof(&c, &dep).unwrap()).abs() < 1e-12);
            prop_assert!((delta_dof_ind(&c, p).unwrap() - delta_dof(&c, &ind).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn gains_are_non_negative(k in 1usize..=8, m in 1u32..=4, n in 1u32..=8, l in 0u32..=6, p in 0.0f64..=1.0) {
            let c = sym(k, m, n, l);
            prop_assert!(delta_dof_dep(&c, p).unwrap() >= 0.0);
            prop_assert!(delta_dof_ind(&c, p).unwrap() >= -1e-15);
        }

        #[test]
        fn dependent_gain_saturates_in_relay_antennas(k in 1usize..=6, m in 1u32..=4, n in 1u32..=8, p in 0.0f64..=1.0) {
            let km = k as u32 * m;
            let sat = km.saturating_sub(n).max(n);
            let gains: Vec<f64> = (0..=sat + 3).map(|l| delta_dof_dep(&sym(k, m, n, l), p).unwrap()).collect();
            prop_assert!(gains.windows(2).all(|w| w[1] >= w[0]));
            let top = gains[sat as usize];
            prop_assert!(gains[sat as usize..].iter().all(|&g| g == top));
        }

        #[test]
        fn dependent_dominates_with_large_relay(c in large_relay()) {
            let grid: Vec<f64> = (1..100).map(|i| f64::from(i) / 100.0).collect();
            let report = dominance_report(&c, &grid).unwrap();
            prop_assert!(report.iter().all(|r| r.sign == Dominance::DependentGreater));
        }

        #[test]
        fn gain_terms_convex_with_large_relay(c in large_relay()) {
            let grid = uniform_grid(DEFAULT_GRID_POINTS);
            prop_assert!(convexity_check(&c, GainTerm::ReceiveCut, &grid).unwrap());
            prop_assert!(convexity_check(&c, GainTerm::TransmitCut, &grid).unwrap());
        }
    }
}
