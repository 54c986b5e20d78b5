//! Command-line front end.
//!
//! Argument problems (unparsable flags, invalid configurations, unreadable
//! or inconsistent traffic and trace files) exit with 2, failures during a
//! computation with 1. Output is written whole, atomically when `--out` is
//! given.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::csv::fmt_num;
use crate::error::{Error, Result};
use crate::figures::{figure, FigureName};
use crate::gains::relay_gain;
use crate::model::{AntennaConfig, UserSet};
use crate::oracle::{cutset_evaluate, cutset_slope, rank_decode_count, ChannelInstance, Field, DEFAULT_POWER_GRID};
use crate::region::{cut_bound, region, sum_dof, sum_dof_no_relay};
use crate::sim::{simulate, simulate_trace, ActivityTrace};
use crate::threshold::{classify, collision_free_threshold};
use crate::traffic::ActivityDistribution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SIM_SLOTS: usize = 1_000_000;
pub const DEFAULT_ORACLE_SLOTS: usize = 50;

#[derive(Parser, Debug)]
#[command(name = "bursty-relay", version, about = "DoF region, relay gains and simulation for the bursty MIMO MAC with a relay")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cut constraints of the DoF region, one row per user subset.
    Region(LawArgs),
    /// Sum DoF with and without the relay.
    Sumdof(SweepArgs),
    /// Sum-DoF gain from the relay.
    Gain(SweepArgs),
    /// Collision-free regime and threshold (symmetric configurations).
    Threshold(ConfigOnlyArgs),
    /// Slot-level simulation of the relaying scheme.
    Simulate(SimulateArgs),
    /// Rank of the explicit-matrix scheme against the simulator count.
    OracleRank(OracleRankArgs),
    /// Finite-power cut-set slope against the DoF cut bound.
    OracleSlope(OracleSlopeArgs),
    /// Reproduce a fixed figure table as CSV.
    Figure(FigureArgs),
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Number of users.
    #[arg(long = "K")]
    users: usize,
    /// Transmit antennas: one value for all users, or one per user.
    #[arg(long = "M", value_delimiter = ',', required = true)]
    tx: Vec<u32>,
    /// Receiver antennas.
    #[arg(long = "N")]
    rx: u32,
    /// Relay antennas.
    #[arg(long = "L")]
    relay: u32,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LawArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// independent:<p> | dependent:<p> | file:<path.json>
    #[arg(long)]
    traffic: TrafficArg,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    traffic: TrafficArg,
    /// start:step:end, replacing the traffic level of --traffic.
    #[arg(long)]
    sweep: Option<Sweep>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct ConfigOnlyArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
    traffic: Option<TrafficArg>,
    /// Explicit trace file; replaces --traffic and --slots.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIM_SLOTS)]
    slots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OracleRankArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
    traffic: Option<TrafficArg>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_SLOTS)]
    slots: usize,
    /// Seeds both the sampled trace and the channel.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// prime | real
    #[arg(long, default_value = "prime")]
    field: Field,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OracleSlopeArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    traffic: TrafficArg,
    /// Transmit powers for the fit, comma separated.
    #[arg(long = "P-grid", value_delimiter = ',', default_values_t = DEFAULT_POWER_GRID)]
    powers: Vec<f64>,
    /// 1-based users, comma separated; defaults to all users.
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    /// Seeds the real-valued channel.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// fig2, fig5, fig6, fig7, fig8, fig9, fig12a, fig12b or fig13.
    name: FigureName,
    #[command(flatten)]
    out: OutArgs,
}

/// Traffic law as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum TrafficArg {
    Independent(f64),
    Dependent(f64),
    File(PathBuf),
}

impl FromStr for TrafficArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::Validation(format!("traffic {s:?} is not kind:value")))?;
        let prob = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("traffic level {value:?} is not a number")))
        };
        match kind {
            "independent" => Ok(TrafficArg::Independent(prob()?)),
            "dependent" => Ok(TrafficArg::Dependent(prob()?)),
            "file" => Ok(TrafficArg::File(PathBuf::from(value))),
            other => Err(Error::Validation(format!("unknown traffic kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for TrafficArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrafficArg::Independent(p) => write!(f, "independent:{}", fmt_num(*p)),
            TrafficArg::Dependent(p) => write!(f, "dependent:{}", fmt_num(*p)),
            TrafficArg::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

/// An inclusive traffic sweep `start:step:end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, step, end] = parts[..] else {
            return Err(Error::Validation(format!("sweep {s:?} is not start:step:end")));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| Error::Validation(format!("sweep value {v:?} is not a number")));
        let sweep = Sweep { start: num(start)?, step: num(step)?, end: num(end)? };
        if sweep.step.is_nan() || sweep.step <= 0.0 {
            return Err(Error::Validation("sweep step must be positive".into()));
        }
        if !(0.0..=1.0).contains(&sweep.start) || !(0.0..=1.0).contains(&sweep.end) || sweep.end < sweep.start {
            return Err(Error::Validation(format!("sweep {s:?} must satisfy 0 <= start <= end <= 1")));
        }
        Ok(sweep)
    }
}

impl Sweep {
    /// Sweep points, each snapped to the 12-digit value it is printed as,
    /// so `0:0.01:1` computes at exactly 0.07 rather than `7 × 0.01`.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| {
                let p = self.start + i as f64 * self.step;
                fmt_num(p).parse::<f64>().expect("formatted number parses").min(1.0)
            })
            .collect()
    }
}

/// A traffic law resolved against the configuration.
#[derive(Debug, Clone)]
pub struct Traffic {
    pub arg: TrafficArg,
    pub dist: ActivityDistribution,
}

impl Traffic {
    fn resolve(arg: TrafficArg, users: usize) -> Result<Self> {
        let dist = match &arg {
            TrafficArg::Independent(p) => ActivityDistribution::independent(*p, users)?,
            TrafficArg::Dependent(p) => ActivityDistribution::dependent(*p, users)?,
            TrafficArg::File(path) => {
                let dist = ActivityDistribution::from_json(&std::fs::read_to_string(path)?)?;
                if dist.users() != users {
                    return Err(Error::DimensionMismatch { expected: users, actual: dist.users() });
                }
                dist
            }
        };
        Ok(Traffic { arg, dist })
    }

    /// The law at each sweep level, or just this law without a sweep.
    /// Rows are labelled with the mean per-user activity.
    fn points(&self, sweep: Option<Sweep>, users: usize) -> Result<Vec<(f64, ActivityDistribution)>> {
        let Some(sweep) = sweep else {
            return Ok(vec![(crate::gains::mean_activity(&self.dist), self.dist.clone())]);
        };
        sweep
            .points()
            .into_iter()
            .map(|p| {
                let dist = match self.arg {
                    TrafficArg::Independent(_) => ActivityDistribution::independent(p, users)?,
                    TrafficArg::Dependent(_) => ActivityDistribution::dependent(p, users)?,
                    TrafficArg::File(_) => {
                        return Err(Error::Validation("--sweep needs independent or dependent traffic".into()));
                    }
                };
                Ok((p, dist))
            })
            .collect()
    }
}

/// A fully validated invocation.
#[derive(Debug)]
pub struct RunSpec {
    pub task: Task,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Task {
    Region { config: AntennaConfig, traffic: Traffic },
    SumDof { config: AntennaConfig, label: String, points: Vec<(f64, ActivityDistribution)> },
    Gain { config: AntennaConfig, label: String, points: Vec<(f64, ActivityDistribution)> },
    Threshold { config: AntennaConfig },
    Simulate { config: AntennaConfig, source: SimSource },
    OracleRank { config: AntennaConfig, trace: ActivityTrace, field: Field, seed: u64 },
    OracleSlope { config: AntennaConfig, traffic: Traffic, subset: UserSet, powers: Vec<f64>, seed: u64 },
    Figure(FigureName),
}

#[derive(Debug)]
pub enum SimSource {
    Law { dist: ActivityDistribution, slots: usize, seed: u64 },
    Trace(ActivityTrace),
}

impl ConfigArgs {
    fn build(&self) -> Result<AntennaConfig> {
        if self.users == 0 {
            return Err(Error::Domain("K must be at least 1".into()));
        }
        let tx = match self.tx.as_slice() {
            [m] => vec![*m; self.users],
            many if many.len() == self.users => many.to_vec(),
            many => return Err(Error::DimensionMismatch { expected: self.users, actual: many.len() }),
        };
        AntennaConfig::new(tx, self.rx, self.relay)
    }
}

fn read_trace(path: &Path, users: usize) -> Result<ActivityTrace> {
    let trace = ActivityTrace::read(path)?;
    if trace.users() != users {
        return Err(Error::DimensionMismatch { expected: users, actual: trace.users() });
    }
    Ok(trace)
}

impl RunSpec {
    fn from_cli(cli: Cli) -> Result<Self> {
        let (task, output) = match cli.command {
            Command::Region(a) => {
                let config = a.config.build()?;
                let traffic = Traffic::resolve(a.traffic, config.users())?;
                (Task::Region { config, traffic }, a.out.out)
            }
            Command::Sumdof(a) => {
                let (config, label, points) = sweep_task(&a)?;
                (Task::SumDof { config, label, points }, a.out.out)
            }
            Command::Gain(a) => {
                let (config, label, points) = sweep_task(&a)?;
                (Task::Gain { config, label, points }, a.out.out)
            }
            Command::Threshold(a) => (Task::Threshold { config: a.config.build()? }, a.out.out),
            Command::Simulate(a) => {
                let config = a.config.build()?;
                let source = match (&a.trace, a.traffic) {
                    (Some(path), _) => SimSource::Trace(read_trace(path, config.users())?),
                    (None, Some(arg)) => {
                        if a.slots == 0 {
                            return Err(Error::Validation("--slots must be at least 1".into()));
                        }
                        let dist = Traffic::resolve(arg, config.users())?.dist;
                        SimSource::Law { dist, slots: a.slots, seed: a.seed }
                    }
                    (None, None) => return Err(Error::Validation("give --traffic or --trace".into())),
                };
                (Task::Simulate { config, source }, a.out.out)
            }
            Command::OracleRank(a) => {
                let config = a.config.build()?;
                let trace = match (&a.trace, a.traffic) {
                    (Some(path), _) => read_trace(path, config.users())?,
                    (None, Some(arg)) => {
                        let dist = Traffic::resolve(arg, config.users())?.dist;
                        ActivityTrace::sample(&dist, a.slots, a.seed)
                    }
                    (None, None) => return Err(Error::Validation("give --traffic or --trace".into())),
                };
                (Task::OracleRank { config, trace, field: a.field, seed: a.seed }, a.out.out)
            }
            Command::OracleSlope(a) => {
                let config = a.config.build()?;
                let traffic = Traffic::resolve(a.traffic, config.users())?;
                let subset = match &a.subset {
                    Some(users) => UserSet::from_one_based(users, config.users())?,
                    None => UserSet::full(config.users()),
                };
                if subset.is_empty() {
                    return Err(Error::Validation("--subset must name at least one user".into()));
                }
                if a.powers.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
                    return Err(Error::Validation("--P-grid powers must be positive".into()));
                }
                (Task::OracleSlope { config, traffic, subset, powers: a.powers, seed: a.seed }, a.out.out)
            }
            Command::Figure(a) => (Task::Figure(a.name), a.out.out),
        };
        Ok(RunSpec { task, output })
    }
}

/// Configuration, header label and `(p, law)` points of a swept subcommand.
type SweepPlan = (AntennaConfig, String, Vec<(f64, ActivityDistribution)>);

fn sweep_task(a: &SweepArgs) -> Result<SweepPlan> {
    let config = a.config.build()?;
    let traffic = Traffic::resolve(a.traffic.clone(), config.users())?;
    let points = traffic.points(a.sweep, config.users())?;
    let label = match a.sweep {
        Some(s) => {
            let kind = if matches!(traffic.arg, TrafficArg::Dependent(_)) { "dependent" } else { "independent" };
            format!("{kind} traffic, p={}:{}:{}", fmt_num(s.start), fmt_num(s.step), fmt_num(s.end))
        }
        None => format!("traffic={}", traffic.arg),
    };
    Ok((config, label, points))
}

#[derive(Serialize)]
struct SimulateFile<'a> {
    throughput: f64,
    formula: f64,
    deviation: f64,
    buffer_high_water: u64,
    slots: u64,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a str>,
}

#[derive(Serialize)]
struct RankFile {
    rank: usize,
    delivered: u64,
    matches_simulator: bool,
    slots: usize,
    field: String,
    seed: u64,
}

#[derive(Serialize)]
struct SlopePoint {
    #[serde(rename = "P")]
    power: f64,
    cut1_bits: f64,
    cut2_bits: f64,
}

#[derive(Serialize)]
struct SlopeFile {
    subset: Vec<usize>,
    slope: f64,
    cut_bound: f64,
    points: Vec<SlopePoint>,
    seed: u64,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn execute(task: &Task) -> Result<String> {
    match task {
        Task::Region { config, traffic } => {
            let r = region(config, &traffic.dist)?;
            let mut buf = Vec::new();
            r.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
        }
        Task::SumDof { config, label, points } => {
            let mut out = format!("# sum DoF, (K,M,N,L)={config}, {label}\np,sumdof_with_relay,sumdof_without_relay\n");
            for (p, dist) in points {
                let row = [*p, sum_dof(config, dist)?, sum_dof_no_relay(config, dist)?];
                out.push_str(&csv_row(&row));
            }
            Ok(out)
        }
        Task::Gain { config, label, points } => {
            let mut out =
                format!("# relay DoF gain, (K,M,N,L)={config}, {label}\np,gain,sumdof_with_relay,sumdof_without_relay\n");
            for (p, dist) in points {
                let with = sum_dof(config, dist)?;
                let without = sum_dof_no_relay(config, dist)?;
                out.push_str(&csv_row(&[*p, relay_gain(config, dist)?, with, without]));
            }
            Ok(out)
        }
        Task::Threshold { config } => {
            let label = classify(config)?;
            let p_star = match collision_free_threshold(config)? {
                Some(p) => fmt_num(p),
                None => "none".to_string(),
            };
            Ok(format!("case={} collision_free={} p_star={p_star}\n", label.case_id, label.collision_free_possible))
        }
        Task::Simulate { config, source } => {
            let (report, trace) = match source {
                SimSource::Law { dist, slots, seed } => (simulate(config, dist, *slots, *seed)?, None),
                SimSource::Trace(trace) => (simulate_trace(config, trace, false)?, Some("explicit")),
            };
            Ok(to_json(&SimulateFile {
                throughput: report.throughput,
                formula: report.formula_value,
                deviation: report.deviation,
                buffer_high_water: report.buffer_high_water,
                slots: report.slots,
                seed: report.seed,
                trace,
            }))
        }
        Task::OracleRank { config, trace, field, seed } => {
            let channel = ChannelInstance::sample(config, *field, *seed)?;
            let rank = rank_decode_count(config, trace, &channel)?;
            let delivered = simulate_trace(config, trace, false)?.final_state.delivered();
            Ok(to_json(&RankFile {
                rank,
                delivered,
                matches_simulator: rank as u64 == delivered,
                slots: trace.len(),
                field: field.to_string(),
                seed: *seed,
            }))
        }
        Task::OracleSlope { config, traffic, subset, powers, seed } => {
            let channel = ChannelInstance::sample(config, Field::Real, *seed)?;
            let points = powers
                .iter()
                .map(|&power| {
                    let bits = cutset_evaluate(config, &traffic.dist, *subset, power, &channel)?;
                    Ok(SlopePoint { power, cut1_bits: bits.receive_cut, cut2_bits: bits.transmit_cut })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(to_json(&SlopeFile {
                subset: subset.one_based(),
                slope: cutset_slope(config, &traffic.dist, *subset, powers, &channel)?,
                cut_bound: cut_bound(config, &traffic.dist, *subset)?,
                points,
                seed: *seed,
            }))
        }
        Task::Figure(name) => figure(*name),
    }
}

fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
    format!("{}\n", cells.join(","))
}

/// Replaces `path` with `contents` through a temporary file in the same
/// directory.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Runs with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs with explicit output streams; `argv[0]` is the program name.
pub fn run_with_output<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let spec = match RunSpec::from_cli(cli) {
        Ok(spec) => spec,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = execute(&spec.task).and_then(|text| match &spec.output {
        Some(path) => write_atomically(path, &text),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_COMPUTATION
        }
    }
}
