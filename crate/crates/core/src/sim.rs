//! Slot-level simulator of the relay's receive-and-forward scheme.
//!
//! Accounting is by dimension counts. In a slot where the active users
//! offer more streams than the receiver has antennas, the relay keeps up to
//! `L` extra linear combinations of what it overheard. In a slot with spare
//! receive dimensions it forwards buffered combinations into them. With
//! generic channels every count is a rank, which [`crate::oracle`] checks
//! against explicit matrices.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AntennaConfig, UserSet};
use crate::region::sum_dof;
use crate::rng::{stream_rng, StreamRng, TRACE_STREAM};
use crate::traffic::ActivityDistribution;

/// Relay buffer and cumulative delivery counters, in symbols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimState {
    pub buffer: u64,
    pub delivered_direct: u64,
    pub delivered_relayed: u64,
    pub offered: u64,
    pub slot_index: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepOutcome {
    pub direct: u64,
    pub relayed: u64,
    pub captured: u64,
}

impl SimState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances one slot with the users in `active` transmitting.
    ///
    /// Capture needs `fresh > N` and forwarding needs `fresh < N`, so the
    /// relay never does both in the same slot.
    pub fn step(&mut self, active: UserSet, config: &AntennaConfig) -> StepOutcome {
        debug_assert!(active.fits(config.users()), "pattern {active} outside K={}", config.users());
        let fresh = config.antennas_in(active);
        let n = u64::from(config.rx_antennas());
        let l = u64::from(config.relay_antennas());
        let direct = fresh.min(n);
        let relayed = l.min(n - direct).min(self.buffer);
        let captured = l.min(fresh.saturating_sub(n));
        self.buffer = self.buffer + captured - relayed;
        self.delivered_direct += direct;
        self.delivered_relayed += relayed;
        self.offered += fresh;
        self.slot_index += 1;
        StepOutcome { direct, relayed, captured }
    }

    pub fn delivered(&self) -> u64 {
        self.delivered_direct + self.delivered_relayed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSource {
    Sampled,
    Explicit,
}

/// A sequence of per-slot activity patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityTrace {
    users: usize,
    slots: Vec<UserSet>,
    seed: u64,
    source: TraceSource,
}

impl ActivityTrace {
    pub fn explicit(users: usize, slots: Vec<UserSet>) -> Result<Self> {
        if let Some(bad) = slots.iter().find(|s| !s.fits(users)) {
            return Err(Error::Validation(format!("pattern {bad} outside K={users}")));
        }
        Ok(ActivityTrace { users, slots, seed: 0, source: TraceSource::Explicit })
    }

    /// Draws `slots` i.i.d. patterns from `dist`.
    pub fn sample(dist: &ActivityDistribution, slots: usize, seed: u64) -> Self {
        let mut sampler = PatternSampler::new(dist, seed);
        let patterns = (0..slots).map(|_| sampler.next_pattern()).collect();
        ActivityTrace { users: dist.users(), slots: patterns, seed, source: TraceSource::Sampled }
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn slots(&self) -> &[UserSet] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn source(&self) -> TraceSource {
        self.source
    }

    /// Relative frequency of each pattern in the trace.
    pub fn empirical_distribution(&self) -> Result<ActivityDistribution> {
        ActivityDistribution::empirical(self.users, &self.slots)
    }

    /// Parses the trace file format: one line per slot, one `0`/`1` flag
    /// per user separated by commas. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut users = None;
        let mut slots = Vec::new();
        for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
            if line.is_empty() {
                continue;
            }
            let flags: Vec<&str> = line.split(',').map(str::trim).collect();
            let k = *users.get_or_insert(flags.len());
            if flags.len() != k {
                return Err(Error::Validation(format!("trace line {lineno}: {} flags, expected {k}", flags.len())));
            }
            if k > crate::model::HARD_USER_LIMIT {
                return Err(Error::EnumerationCap { users: k, cap: crate::model::HARD_USER_LIMIT });
            }
            let mut mask = 0u32;
            for (u, flag) in flags.iter().enumerate() {
                match *flag {
                    "0" => {}
                    "1" => mask |= 1 << u,
                    other => {
                        return Err(Error::Validation(format!("trace line {lineno}: flag {other:?} is not 0 or 1")));
                    }
                }
            }
            slots.push(UserSet::from_mask(mask));
        }
        let users = users.ok_or_else(|| Error::Validation("trace file has no slots".into()))?;
        Self::explicit(users, slots)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.slots.len() * (2 * self.users + 1));
        for s in &self.slots {
            let flags: Vec<&str> = (0..self.users).map(|u| if s.contains(u) { "1" } else { "0" }).collect();
            let _ = writeln!(out, "{}", flags.join(","));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Inverse-CDF sampler over a distribution's mass table.
struct PatternSampler {
    cumulative: Vec<(UserSet, f64)>,
    total: f64,
    rng: StreamRng,
}

impl PatternSampler {
    fn new(dist: &ActivityDistribution, seed: u64) -> Self {
        let cumulative = dist.cumulative();
        let total = cumulative.last().map_or(1.0, |&(_, c)| c);
        PatternSampler { cumulative, total, rng: stream_rng(seed, TRACE_STREAM) }
    }

    fn next_pattern(&mut self) -> UserSet {
        let u = self.rng.random::<f64>() * self.total;
        let i = self.cumulative.partition_point(|&(_, c)| c <= u);
        self.cumulative[i.min(self.cumulative.len() - 1)].0
    }
}

/// One slot of a recorded run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRecord {
    pub active: UserSet,
    pub outcome: StepOutcome,
    pub buffer_after: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Delivered symbols per slot.
    pub throughput: f64,
    /// Sum DoF of the law the trace was drawn from (or of the trace's
    /// empirical law for explicit traces).
    pub formula_value: f64,
    pub deviation: f64,
    pub buffer_high_water: u64,
    pub slots: u64,
    pub seed: u64,
    pub final_state: SimState,
    /// Trace averages of `min(fresh, N+L)` and `min(fresh+L, N)`.
    pub empirical_receive_cut: f64,
    pub empirical_transmit_cut: f64,
    pub slot_log: Option<Vec<SlotRecord>>,
}

#[derive(Serialize)]
struct ReportFile {
    throughput: f64,
    formula: f64,
    deviation: f64,
    buffer_high_water: u64,
    slots: u64,
    seed: u64,
}

impl SimReport {
    pub fn empirical_bound(&self) -> f64 {
        self.empirical_receive_cut.min(self.empirical_transmit_cut)
    }

    pub fn to_json(&self) -> String {
        let file = ReportFile {
            throughput: self.throughput,
            formula: self.formula_value,
            deviation: self.deviation,
            buffer_high_water: self.buffer_high_water,
            slots: self.slots,
            seed: self.seed,
        };
        serde_json::to_string_pretty(&file).expect("report serializes")
    }
}

struct Run {
    state: SimState,
    high_water: u64,
    receive_cut: u64,
    transmit_cut: u64,
    log: Option<Vec<SlotRecord>>,
}

impl Run {
    fn new(record: bool) -> Self {
        Run { state: SimState::new(), high_water: 0, receive_cut: 0, transmit_cut: 0, log: record.then(Vec::new) }
    }

    fn advance(&mut self, active: UserSet, config: &AntennaConfig) {
        let fresh = config.antennas_in(active);
        let n = u64::from(config.rx_antennas());
        let l = u64::from(config.relay_antennas());
        self.receive_cut += fresh.min(n + l);
        self.transmit_cut += (fresh + l).min(n);
        let outcome = self.state.step(active, config);
        self.high_water = self.high_water.max(self.state.buffer);
        if let Some(log) = &mut self.log {
            log.push(SlotRecord { active, outcome, buffer_after: self.state.buffer });
        }
    }

    fn finish(self, formula_value: f64, seed: u64) -> SimReport {
        let slots = self.state.slot_index;
        let per_slot = |x: u64| x as f64 / slots as f64;
        let throughput = per_slot(self.state.delivered());
        SimReport {
            throughput,
            formula_value,
            deviation: (throughput - formula_value).abs(),
            buffer_high_water: self.high_water,
            slots,
            seed,
            final_state: self.state,
            empirical_receive_cut: per_slot(self.receive_cut),
            empirical_transmit_cut: per_slot(self.transmit_cut),
            slot_log: self.log,
        }
    }
}

fn check_inputs(config: &AntennaConfig, users: usize, slots: usize) -> Result<()> {
    if slots == 0 {
        return Err(Error::Domain("slots must be at least 1".into()));
    }
    if users != config.users() {
        return Err(Error::DimensionMismatch { expected: config.users(), actual: users });
    }
    Ok(())
}

/// Runs `slots` slots with patterns drawn i.i.d. from `dist`.
pub fn simulate(config: &AntennaConfig, dist: &ActivityDistribution, slots: usize, seed: u64) -> Result<SimReport> {
    check_inputs(config, dist.users(), slots)?;
    let formula = sum_dof(config, dist)?;
    let mut sampler = PatternSampler::new(dist, seed);
    let mut run = Run::new(false);
    for _ in 0..slots {
        run.advance(sampler.next_pattern(), config);
    }
    Ok(run.finish(formula, seed))
}

/// Runs over a fixed trace, optionally keeping a per-slot log.
pub fn simulate_trace(config: &AntennaConfig, trace: &ActivityTrace, record: bool) -> Result<SimReport> {
    check_inputs(config, trace.users(), trace.len())?;
    let formula = sum_dof(config, &trace.empirical_distribution()?)?;
    let mut run = Run::new(record);
    for &active in trace.slots() {
        run.advance(active, config);
    }
    Ok(run.finish(formula, trace.seed()))
}

/// Independent runs, one per seed, in parallel, merged into one report.
pub fn simulate_many(config: &AntennaConfig, dist: &ActivityDistribution, slots: usize, seeds: &[u64]) -> Result<SimReport> {
    let reports = seeds
        .par_iter()
        .map(|&seed| simulate(config, dist, slots, seed))
        .collect::<Result<Vec<_>>>()?;
    merge_reports(&reports)
}

/// Slot-weighted merge. Counters add; the high-water mark is the largest
/// seen; the seed is that of the first report.
pub fn merge_reports(reports: &[SimReport]) -> Result<SimReport> {
    let first = reports.first().ok_or_else(|| Error::Domain("nothing to merge".into()))?;
    let slots: u64 = reports.iter().map(|r| r.slots).sum();
    let weighted = |f: fn(&SimReport) -> f64| reports.iter().map(|r| f(r) * r.slots as f64).sum::<f64>() / slots as f64;
    let throughput = weighted(|r| r.throughput);
    let mut state = SimState::new();
    for r in reports {
        let s = r.final_state;
        state.buffer += s.buffer;
        state.delivered_direct += s.delivered_direct;
        state.delivered_relayed += s.delivered_relayed;
        state.offered += s.offered;
        state.slot_index += s.slot_index;
    }
    Ok(SimReport {
        throughput,
        formula_value: first.formula_value,
        deviation: (throughput - first.formula_value).abs(),
        buffer_high_water: reports.iter().map(|r| r.buffer_high_water).max().unwrap_or(0),
        slots,
        seed: first.seed,
        final_state: state,
        empirical_receive_cut: weighted(|r| r.empirical_receive_cut),
        empirical_transmit_cut: weighted(|r| r.empirical_transmit_cut),
        slot_log: None,
    })
}

/// Signed `throughput − sum_dof(config, dist)`.
pub fn compare_to_formula(report: &SimReport, config: &AntennaConfig, dist: &ActivityDistribution) -> Result<f64> {
    Ok(report.throughput - sum_dof(config, dist)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex1() -> AntennaConfig {
        AntennaConfig::new(vec![1, 1], 1, 1).unwrap()
    }

    #[test]
    fn step_examples() {
        let c = ex1();
        let mut s = SimState::new();
        let o = s.step(UserSet::from_users([0, 1]), &c);
        assert_eq!(o, StepOutcome { direct: 1, relayed: 0, captured: 1 });
        assert_eq!(s.buffer, 1);
        let o = s.step(UserSet::EMPTY, &c);
        assert_eq!(o, StepOutcome { direct: 0, relayed: 1, captured: 0 });
        assert_eq!(s.buffer, 0);
        let o = s.step(UserSet::EMPTY, &c);
        assert_eq!(o, StepOutcome::default());
        assert_eq!(s.offered, 2);
        assert_eq!(s.delivered(), 2);
    }

    #[test]
    fn explicit_collision_then_idle() {
        let trace = ActivityTrace::explicit(2, vec![UserSet::from_users([0, 1]), UserSet::EMPTY]).unwrap();
        let r = simulate_trace(&ex1(), &trace, true).unwrap();
        assert_eq!(r.throughput, 1.0);
        assert_eq!(r.formula_value, 1.0);
        assert_eq!(r.deviation, 0.0);
        assert_eq!(r.buffer_high_water, 1);
        assert_eq!(r.slot_log.unwrap().len(), 2);
    }

    #[test]
    fn independent_and_dependent_convergence() {
        let c = ex1();
        let r = simulate(&c, &ActivityDistribution::independent(0.25, 2).unwrap(), 1_000_000, 1).unwrap();
        assert!((r.formula_value - 0.5).abs() < 1e-15);
        assert!(r.deviation < 0.01, "{r:?}");
        let r = simulate(&c, &ActivityDistribution::dependent(0.5, 2).unwrap(), 1_000_000, 1).unwrap();
        assert!((r.throughput - 1.0).abs() < 0.01);
    }

    #[test]
    fn deviation_within_three_sigma() {
        let c = AntennaConfig::symmetric(3, 1, 2, 1).unwrap();
        let dist = ActivityDistribution::independent(0.3, 3).unwrap();
        let slots = 1_000_000;
        let r = simulate(&c, &dist, slots, 42).unwrap();
        // Per-slot credit is min(fresh, N+L) = fresh here, a Bin(3, 0.3)
        // variable; the leftover buffer is credit not yet delivered.
        let sigma = (3.0 * 0.3 * 0.7 / slots as f64).sqrt();
        let leftover = r.final_state.buffer as f64 / slots as f64;
        let gap = compare_to_formula(&r, &c, &dist).unwrap();
        assert!(gap.abs() < 3.0 * sigma + leftover, "gap {gap}, sigma {sigma}");
    }

    #[test]
    fn degenerate_traffic_is_exact() {
        let c = ex1();
        for p in [0.0, 1.0] {
            let dist = ActivityDistribution::independent(p, 2).unwrap();
            let r = simulate(&c, &dist, 1000, 3).unwrap();
            assert_eq!(compare_to_formula(&r, &c, &dist).unwrap(), 0.0);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let c = AntennaConfig::symmetric(4, 2, 7, 1).unwrap();
        let dist = ActivityDistribution::independent(0.6, 4).unwrap();
        let a = simulate(&c, &dist, 20_000, 11).unwrap();
        let b = simulate(&c, &dist, 20_000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let other = simulate(&c, &dist, 20_000, 12).unwrap();
        assert_ne!(a.final_state, other.final_state);
    }

    #[test]
    fn sampled_trace_matches_streaming_run() {
        let c = AntennaConfig::symmetric(3, 1, 2, 1).unwrap();
        let dist = ActivityDistribution::dependent(0.4, 3).unwrap();
        let streamed = simulate(&c, &dist, 5000, 9).unwrap();
        let trace = ActivityTrace::sample(&dist, 5000, 9);
        let replay = simulate_trace(&c, &trace, false).unwrap();
        assert_eq!(streamed.final_state, replay.final_state);
    }

    #[test]
    fn merge_weights_by_slots() {
        let c = ex1();
        let dist = ActivityDistribution::independent(0.4, 2).unwrap();
        let a = simulate(&c, &dist, 1000, 1).unwrap();
        let b = simulate(&c, &dist, 3000, 2).unwrap();
        let m = merge_reports(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(m.slots, 4000);
        let expect = (a.final_state.delivered() + b.final_state.delivered()) as f64 / 4000.0;
        assert!((m.throughput - expect).abs() < 1e-15);
        let many = simulate_many(&c, &dist, 1000, &[1, 2, 3]).unwrap();
        assert_eq!(many.slots, 3000);
    }

    #[test]
    fn trace_file_round_trip() {
        let trace = ActivityTrace::explicit(3, vec![UserSet::from_users([0, 2]), UserSet::EMPTY]).unwrap();
        let text = trace.to_text();
        assert_eq!(text, "1,0,1\n0,0,0\n");
        assert_eq!(ActivityTrace::parse(&text).unwrap(), trace);
        assert!(ActivityTrace::parse("1,0\n1\n").is_err());
        assert!(ActivityTrace::parse("1,2\n").is_err());
        assert!(ActivityTrace::parse("\n").is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = ex1();
        let dist = ActivityDistribution::independent(0.4, 3).unwrap();
        assert!(matches!(simulate(&c, &dist, 10, 0), Err(Error::DimensionMismatch { .. })));
        let dist = ActivityDistribution::independent(0.4, 2).unwrap();
        assert!(simulate(&c, &dist, 0, 0).is_err());
    }

    fn config_strategy() -> impl Strategy<Value = AntennaConfig> {
        (1usize..=4, 1u32..=4, 0u32..=4)
            .prop_flat_map(|(k, n, l)| (prop::collection::vec(1u32..=4, k), Just(n), Just(l)))
            .prop_map(|(tx, n, l)| AntennaConfig::new(tx, n, l).unwrap())
    }

    proptest! {
        #[test]
        fn per_slot_and_cumulative_bounds(config in config_strategy(), masks in prop::collection::vec(any::<u32>(), 1..200)) {
            let k = config.users();
            let n = u64::from(config.rx_antennas());
            let l = u64::from(config.relay_antennas());
            let mut state = SimState::new();
            let mut credit = 0u64;
            for m in masks {
                let active = UserSet::from_mask(m & ((1 << k) - 1));
                let fresh = config.antennas_in(active);
                let before = state.buffer;
                let o = state.step(active, &config);
                prop_assert!(o.direct + o.relayed <= (fresh + l).min(n));
                prop_assert!(o.captured <= l.min(fresh.saturating_sub(n)));
                prop_assert!(o.captured == 0 || o.relayed == 0);
                prop_assert_eq!(state.buffer, before + o.captured - o.relayed);
                credit += o.direct + o.captured;
                prop_assert!(o.direct + o.captured <= fresh.min(n + l));
            }
            prop_assert_eq!(state.delivered() + state.buffer, credit);
            prop_assert!(state.delivered() <= state.offered);
        }

        #[test]
        fn throughput_below_empirical_cuts(config in config_strategy(), p in 0.0f64..=1.0, seed in any::<u64>()) {
            let dist = ActivityDistribution::independent(p, config.users()).unwrap();
            let r = simulate(&config, &dist, 500, seed).unwrap();
            prop_assert!(r.throughput >= 0.0);
            prop_assert!(r.throughput <= r.empirical_bound() + 1e-12);
        }
    }
}
