//! Fixed-parameter CSV tables for each plotted curve.
//!
//! Every table is built from public library calls only, starts with one
//! `#` line naming the curve and its parameters, and is byte-stable.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::csv::fmt_num;
use crate::error::{Error, Result};
use crate::gains::{delta_dof_dep, delta_dof_ind, gain_terms, peak_gain, TrafficMode};
use crate::model::AntennaConfig;
use crate::region::{sum_dof, sum_dof_no_relay};
use crate::traffic::ActivityDistribution;

/// Traffic sweeps use `p = i/100`, `i = 0..=100`.
pub const SWEEP_STEPS: usize = 100;

/// Relay sizes shown in the gain-versus-`L` tables.
pub const RELAY_SIZES: std::ops::RangeInclusive<u32> = 0..=5;

/// Activity level of the low-traffic gain-versus-`L` tables.
pub const LOW_TRAFFIC_P: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    /// Sum DoF with and without a relay, `(2,1,1,1)`, independent traffic.
    Fig2,
    /// Peak gains for `M=N=1`, `L=K−1`, `K=2..64`.
    Fig5,
    /// Dependent-traffic gain against `L`, `K=4`, `M=N=1`.
    Fig6,
    /// Independent-traffic gain against `L`, `K=4`, `M=N=1`.
    Fig7,
    /// Both gains against `L` at `p = 0.25`.
    Fig8,
    /// Both gains against `p` for `(2,1,1,1)`.
    Fig9,
    /// Both gains against `p` for `(4,2,7,1)`.
    Fig12a,
    /// Both gains against `p` for `(4,2,1,1)`.
    Fig12b,
    /// Cut terms of both gains against `p` for `(4,1,1,3)`.
    Fig13,
}

impl FigureName {
    pub const ALL: [FigureName; 9] = [
        FigureName::Fig2,
        FigureName::Fig5,
        FigureName::Fig6,
        FigureName::Fig7,
        FigureName::Fig8,
        FigureName::Fig9,
        FigureName::Fig12a,
        FigureName::Fig12b,
        FigureName::Fig13,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig2 => "fig2",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6 => "fig6",
            FigureName::Fig7 => "fig7",
            FigureName::Fig8 => "fig8",
            FigureName::Fig9 => "fig9",
            FigureName::Fig12a => "fig12a",
            FigureName::Fig12b => "fig12b",
            FigureName::Fig13 => "fig13",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown figure {s:?}")))
    }
}

pub fn sweep_grid() -> Vec<f64> {
    (0..=SWEEP_STEPS).map(|i| i as f64 / SWEEP_STEPS as f64).collect()
}

struct Table {
    text: String,
}

impl Table {
    fn new(comment: &str, columns: &[&str]) -> Self {
        Table { text: format!("# {comment}\n{}\n", columns.join(",")) }
    }

    fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }
}

pub fn figure(name: FigureName) -> Result<String> {
    match name {
        FigureName::Fig2 => fig2(),
        FigureName::Fig5 => fig5(),
        FigureName::Fig6 => gain_vs_relay(name, TrafficMode::Dependent),
        FigureName::Fig7 => gain_vs_relay(name, TrafficMode::Independent),
        FigureName::Fig8 => fig8(),
        FigureName::Fig9 => gain_vs_p(name, AntennaConfig::symmetric(2, 1, 1, 1)?),
        FigureName::Fig12a => gain_vs_p(name, AntennaConfig::symmetric(4, 2, 7, 1)?),
        FigureName::Fig12b => gain_vs_p(name, AntennaConfig::symmetric(4, 2, 1, 1)?),
        FigureName::Fig13 => fig13(),
    }
}

fn fig2() -> Result<String> {
    let config = AntennaConfig::symmetric(2, 1, 1, 1)?;
    let mut t = Table::new(
        &format!("fig2: sum DoF with and without relay, (K,M,N,L)={config}, independent traffic, p=0:0.01:1"),
        &["p", "sumdof_with_relay", "sumdof_without_relay"],
    );
    for p in sweep_grid() {
        let dist = ActivityDistribution::independent(p, 2)?;
        t.row(&[p, sum_dof(&config, &dist)?, sum_dof_no_relay(&config, &dist)?]);
    }
    Ok(t.text)
}

fn fig5() -> Result<String> {
    let mut t = Table::new(
        "fig5: peak relay gain, M=1, N=1, L=K-1, K=2..64, gap=peak_dep-peak_ind",
        &["K", "p_star", "peak_dep", "peak_ind", "gap"],
    );
    for k in 2..=64u32 {
        let config = AntennaConfig::symmetric(k as usize, 1, 1, k - 1)?;
        let dep = peak_gain(&config, TrafficMode::Dependent)?;
        let ind = peak_gain(&config, TrafficMode::Independent)?;
        t.row(&[f64::from(k), dep.p_star, dep.value, ind.value, dep.value - ind.value]);
    }
    Ok(t.text)
}

fn gain_vs_relay(name: FigureName, mode: TrafficMode) -> Result<String> {
    let mut t = Table::new(
        &format!("{name}: relay gain vs L, {mode} traffic, K=4, M=1, N=1, L=0..5, p=0:0.01:1"),
        &["L", "p", "gain"],
    );
    for l in RELAY_SIZES {
        let config = AntennaConfig::symmetric(4, 1, 1, l)?;
        for p in sweep_grid() {
            let gain = match mode {
                TrafficMode::Dependent => delta_dof_dep(&config, p)?,
                TrafficMode::Independent => delta_dof_ind(&config, p)?,
            };
            t.row(&[f64::from(l), p, gain]);
        }
    }
    Ok(t.text)
}

fn fig8() -> Result<String> {
    let mut t = Table::new(
        &format!("fig8: relay gain vs L at low traffic, K=4, M=1, N=1, L=0..5, p={LOW_TRAFFIC_P}"),
        &["L", "gain_dep", "gain_ind"],
    );
    for l in RELAY_SIZES {
        let config = AntennaConfig::symmetric(4, 1, 1, l)?;
        t.row(&[f64::from(l), delta_dof_dep(&config, LOW_TRAFFIC_P)?, delta_dof_ind(&config, LOW_TRAFFIC_P)?]);
    }
    Ok(t.text)
}

fn gain_vs_p(name: FigureName, config: AntennaConfig) -> Result<String> {
    let mut t = Table::new(
        &format!("{name}: relay gain vs p, (K,M,N,L)={config}, p=0:0.01:1"),
        &["p", "gain_dep", "gain_ind"],
    );
    for p in sweep_grid() {
        t.row(&[p, delta_dof_dep(&config, p)?, delta_dof_ind(&config, p)?]);
    }
    Ok(t.text)
}

fn fig13() -> Result<String> {
    let config = AntennaConfig::symmetric(4, 1, 1, 3)?;
    let mut t = Table::new(
        &format!("fig13: relay gain cut terms vs p, (K,M,N,L)={config}, p=0:0.01:1"),
        &["p", "dep_receive", "dep_transmit", "ind_receive", "ind_transmit", "gain_dep", "gain_ind"],
    );
    for p in sweep_grid() {
        let g = gain_terms(&config, p)?;
        t.row(&[p, g.dep_receive, g.dep_transmit, g.ind_receive, g.ind_transmit, g.dependent(), g.independent()]);
    }
    Ok(t.text)
}
