//! Antenna configurations, user sets and DoF vectors.

use std::fmt;

use crate::error::{Error, Result};

/// Largest K for which operations enumerate all 2^K activity patterns
/// unless the caller passes an explicit cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Patterns are stored as `u32` bit masks, so no cap may exceed this.
pub const HARD_USER_LIMIT: usize = 30;

pub(crate) fn check_cap(users: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_USER_LIMIT);
    if users > cap {
        return Err(Error::EnumerationCap { users, cap });
    }
    Ok(())
}

/// A subset of the users `{0, .., K-1}`, encoded as a bit mask.
///
/// Doubles as an activity pattern (the set of transmitters active in a slot)
/// and as the user subset of a cut constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UserSet(u32);

impl UserSet {
    pub const EMPTY: UserSet = UserSet(0);

    pub fn from_mask(mask: u32) -> Self {
        UserSet(mask)
    }

    /// All of `{0, .., users-1}`.
    pub fn full(users: usize) -> Self {
        assert!(users <= HARD_USER_LIMIT, "user set limited to {HARD_USER_LIMIT} users");
        UserSet(((1u64 << users) - 1) as u32)
    }

    /// Builds a set from 0-based user indices.
    pub fn from_users<I: IntoIterator<Item = usize>>(users: I) -> Self {
        UserSet(users.into_iter().fold(0u32, |acc, u| {
            assert!(u < HARD_USER_LIMIT, "user index {u} beyond {HARD_USER_LIMIT}");
            acc | (1 << u)
        }))
    }

    /// Builds a set from 1-based indices, the convention of the JSON and
    /// trace file formats.
    pub fn from_one_based(indices: &[usize], users: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > users {
                return Err(Error::IndexOutOfRange { index: i, users });
            }
            mask |= 1 << (i - 1);
        }
        Ok(UserSet(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, user: usize) -> bool {
        user < 32 && self.0 & (1 << user) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: UserSet) -> UserSet {
        UserSet(self.0 & other.0)
    }

    pub fn union(self, other: UserSet) -> UserSet {
        UserSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: UserSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Whether every member is a valid index for a K-user system.
    pub fn fits(self, users: usize) -> bool {
        users >= 32 || self.0 >> users == 0
    }

    /// 0-based members in increasing order.
    pub fn users(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&u| self.0 & (1 << u) != 0)
    }

    /// 1-based members, for file formats.
    pub fn one_based(self) -> Vec<usize> {
        self.users().map(|u| u + 1).collect()
    }

    /// Every nonempty subset of `{0, .., users-1}` in increasing mask order.
    pub fn nonempty_subsets(users: usize) -> impl Iterator<Item = UserSet> {
        assert!(users <= HARD_USER_LIMIT);
        (1..(1u64 << users)).map(|m| UserSet(m as u32))
    }
}

impl fmt::Display for UserSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.one_based().iter().map(|u| u.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

/// The antenna tuple `(K, M_1..M_K, N, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntennaConfig {
    tx: Vec<u32>,
    rx: u32,
    relay: u32,
}

impl AntennaConfig {
    /// General configuration with per-user transmit antenna counts.
    pub fn new(tx: Vec<u32>, rx: u32, relay: u32) -> Result<Self> {
        if tx.is_empty() {
            return Err(Error::Domain("K must be at least 1".into()));
        }
        if tx.contains(&0) {
            return Err(Error::Domain(format!("every M_k must be positive, got {tx:?}")));
        }
        if rx == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        Ok(AntennaConfig { tx, rx, relay })
    }

    /// `K` users with `m` transmit antennas each.
    pub fn symmetric(users: usize, m: u32, rx: u32, relay: u32) -> Result<Self> {
        Self::new(vec![m; users], rx, relay)
    }

    pub fn users(&self) -> usize {
        self.tx.len()
    }

    pub fn tx_antennas(&self) -> &[u32] {
        &self.tx
    }

    pub fn rx_antennas(&self) -> u32 {
        self.rx
    }

    pub fn relay_antennas(&self) -> u32 {
        self.relay
    }

    pub fn is_symmetric(&self) -> bool {
        self.tx.windows(2).all(|w| w[0] == w[1])
    }

    /// The common `M` of a symmetric configuration.
    pub fn symmetric_m(&self) -> Result<u32> {
        if self.is_symmetric() {
            Ok(self.tx[0])
        } else {
            Err(Error::Asymmetric(self.tx.clone()))
        }
    }

    /// Same transmitters and receiver, different relay.
    pub fn with_relay_antennas(&self, relay: u32) -> Self {
        AntennaConfig { relay, ..self.clone() }
    }

    /// Total transmit antennas of the users in `set`.
    pub fn antennas_in(&self, set: UserSet) -> u64 {
        set.users()
            .take_while(|&u| u < self.tx.len())
            .map(|u| u64::from(self.tx[u]))
            .sum()
    }

    /// `∑_k M_k`.
    pub fn total_tx(&self) -> u64 {
        self.tx.iter().map(|&m| u64::from(m)).sum()
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_symmetric() {
            write!(f, "({},{},{},{})", self.users(), self.tx[0], self.rx, self.relay)
        } else {
            let m: Vec<String> = self.tx.iter().map(u32::to_string).collect();
            write!(f, "({},({}),{},{})", self.users(), m.join(","), self.rx, self.relay)
        }
    }
}

/// Per-user degrees of freedom `(d_1, .., d_K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofVector(Vec<f64>);

impl DofVector {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if let Some(bad) = d.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Domain(format!("DoF entries must be finite and >= 0, got {bad}")));
        }
        Ok(DofVector(d))
    }

    /// The same DoF `value` for each of `users` users.
    pub fn uniform(users: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; users])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum_over(&self, set: UserSet) -> f64 {
        set.users().filter(|&u| u < self.0.len()).map(|u| self.0[u]).sum()
    }
}
