//! Collision-free DoF under independent traffic.
//!
//! Every user attains its contention-free DoF `pM` exactly when the vector
//! `(pM, .., pM)` lies in the region. That is possible for small enough `p`
//! iff `KM ≤ N + L`, and the largest such `p` is the threshold `p*`.
//! Symmetric configurations fall into six mutually exclusive cases:
//!
//! | case | condition                           | collision-free for |
//! |------|-------------------------------------|--------------------|
//! | C-A  | KM > N+L, M ≤ N                     | no p               |
//! | C-B  | KM > N+L, M > N+L, L = 0            | no p               |
//! | C-C  | KM > N+L, M > N+L, L ≥ 1            | no p               |
//! | C-D  | KM > N+L, N < M ≤ N+L, L ≥ 1        | no p               |
//! | C-E  | KM ≤ N                              | all p              |
//! | C-F  | N < KM ≤ N+L, L ≥ 1                 | p ≤ p_s            |

use std::fmt;

use crate::error::{Error, Result};
use crate::gains::binom_pmf_row;
use crate::model::AntennaConfig;
use crate::region::MEMBERSHIP_TOLERANCE;

pub const BISECTION_MAX_ITERATIONS: usize = 200;
pub const BISECTION_TOLERANCE: f64 = 1e-12;
const BRACKET: (f64, f64) = (1e-15, 1.0 - 1e-15);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CaseId::A => 'A',
            CaseId::B => 'B',
            CaseId::C => 'C',
            CaseId::D => 'D',
            CaseId::E => 'E',
            CaseId::F => 'F',
        };
        write!(f, "C-{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PStarKind {
    /// Collision-free for every p (`KM ≤ N`).
    AllP,
    /// `p* = N/(KM)` exactly (`L ≥ N`).
    ExactNOverKm,
    /// `p* < N/(KM)`, found numerically (`1 ≤ L < N`).
    StrictlyBelow,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeLabel {
    pub case_id: CaseId,
    pub collision_free_possible: bool,
    pub p_star_kind: PStarKind,
}

struct Params {
    k: usize,
    m: u64,
    n: u64,
    l: u64,
}

impl Params {
    fn of(config: &AntennaConfig) -> Result<Self> {
        Ok(Params {
            k: config.users(),
            m: u64::from(config.symmetric_m()?),
            n: u64::from(config.rx_antennas()),
            l: u64::from(config.relay_antennas()),
        })
    }

    fn km(&self) -> u64 {
        self.k as u64 * self.m
    }
}

pub fn classify(config: &AntennaConfig) -> Result<RegimeLabel> {
    let Params { m, n, l, .. } = Params::of(config)?;
    let km = Params::of(config)?.km();
    let (case_id, p_star_kind) = if km <= n {
        (CaseId::E, PStarKind::AllP)
    } else if km <= n + l {
        let kind = if l >= n { PStarKind::ExactNOverKm } else { PStarKind::StrictlyBelow };
        (CaseId::F, kind)
    } else if m <= n {
        (CaseId::A, PStarKind::None)
    } else if m > n + l {
        (if l == 0 { CaseId::B } else { CaseId::C }, PStarKind::None)
    } else {
        (CaseId::D, PStarKind::None)
    };
    Ok(RegimeLabel { case_id, collision_free_possible: km <= n + l, p_star_kind })
}

/// `K·pM − ∑_i B_K(i)·min(iM + L, N)`: sum demand minus the transmit-cut
/// sum bound. Its root in (0, 1) is `p_s`.
pub fn sum_crossing_gap(config: &AntennaConfig, p: f64) -> Result<f64> {
    let Params { k, m, n, l } = Params::of(config)?;
    let supply: f64 = binom_pmf_row(k, p)?
        .into_iter()
        .enumerate()
        .map(|(i, b)| b * (i as u64 * m + l).min(n) as f64)
        .sum();
    Ok(k as f64 * p * m as f64 - supply)
}

/// Largest `p` up to which collision-free DoF is attainable, or `None` when
/// it is not attainable for any `p` in (0, 1).
pub fn collision_free_threshold(config: &AntennaConfig) -> Result<Option<f64>> {
    let label = classify(config)?;
    let params = Params::of(config)?;
    let n_over_km = params.n as f64 / params.km() as f64;
    match label.p_star_kind {
        PStarKind::None => Ok(None),
        PStarKind::AllP => Ok(Some(1.0)),
        PStarKind::ExactNOverKm => Ok(Some(n_over_km)),
        PStarKind::StrictlyBelow => {
            let root = bisect(|p| sum_crossing_gap(config, p), BRACKET.0, BRACKET.1)?;
            if root >= n_over_km {
                return Err(Error::Internal(format!("root {root} not below N/(KM) = {n_over_km} for {config}")));
            }
            Ok(Some(root))
        }
    }
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Internal(format!("no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})")));
    }
    for _ in 0..BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if v.abs() < BISECTION_TOLERANCE {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Internal(format!("bisection did not reach |f| < {BISECTION_TOLERANCE}")))
}

/// Whether every user attains `pM` at once under independent traffic, that
/// is, whether `(pM, .., pM)` lies in the region.
///
/// By symmetry a subset's constraint depends only on its size `s`, with
/// `X = M·Bin(s, p)` antennas active. The two cut slacks are evaluated
/// without cancellation where possible:
///
/// * relay-receive cut: `E[min(X, N+L)] − E[X] = −E[(X − N − L)^+]`, which
///   is exactly zero or strictly negative, so it is tested strictly. For
///   `KM > N+L` and small `p` the violation is of order `p^K`, far below
///   any absolute tolerance on the bounds themselves.
/// * relay-transmit cut: `E[min(X + L, N)] − s·pM`, which is zero at the
///   threshold, tested against [`MEMBERSHIP_TOLERANCE`].
pub fn is_collision_free(config: &AntennaConfig, p: f64) -> Result<bool> {
    let Params { k, m, n, l } = Params::of(config)?;
    for s in 1..=k {
        let mut receive_excess = 0.0;
        let mut transmit_bound = 0.0;
        for (i, b) in binom_pmf_row(s, p)?.into_iter().enumerate() {
            let active = i as u64 * m;
            receive_excess += b * active.saturating_sub(n + l) as f64;
            transmit_bound += b * (active + l).min(n) as f64;
        }
        let demand = s as f64 * p * m as f64;
        if receive_excess > 0.0 || transmit_bound - demand < -MEMBERSHIP_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Traffic level where the single-user bound switches from `pM` to the
/// relay-limited expression `p·min(M+L, N) + (1−p)·min(L, N)`.
///
/// Defined for cases C-C, C-D and C-F; `None` elsewhere, and `None` in C-F
/// when `M ≤ N` since `pM` binds for every p.
pub fn p_i_crossover(config: &AntennaConfig) -> Result<Option<f64>> {
    let label = classify(config)?;
    let Params { m, n, l, .. } = Params::of(config)?;
    let relay_fill = l.min(n) as f64;
    match label.case_id {
        CaseId::C => Ok(Some(relay_fill / (l as f64 + relay_fill))),
        CaseId::D | CaseId::F if m > n => {
            // pM = p·min(M+L, N) + (1−p)·min(L, N), linear in p.
            let slope = m as f64 - (m + l).min(n) as f64 + relay_fill;
            Ok(Some(relay_fill / slope))
        }
        _ => Ok(None),
    }
}
