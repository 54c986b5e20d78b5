//! Joint laws of the per-slot transmitter activity pattern.
//!
//! An [`ActivityDistribution`] assigns a probability to every subset of the
//! K transmitters. Slots draw their activity pattern i.i.d. from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_cap, UserSet, DEFAULT_ENUMERATION_CAP, HARD_USER_LIMIT};

/// Masses must sum to one within this tolerance.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Marginals further apart than this trigger [`DistributionWarning::NonIdenticalMarginals`].
pub const MARGINAL_SPREAD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionWarning {
    /// The per-user activity probabilities are not all equal. The symmetric
    /// results (gain closed forms, thresholds) assume they are.
    NonIdenticalMarginals { min: f64, max: f64 },
}

/// Probability mass over the 2^K activity patterns.
///
/// Only patterns with positive mass are stored, sorted by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityDistribution {
    users: usize,
    mass: Vec<(UserSet, f64)>,
    warnings: Vec<DistributionWarning>,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

impl ActivityDistribution {
    /// Each user active independently with probability `p`.
    pub fn independent(p: f64, users: usize) -> Result<Self> {
        Self::independent_with_cap(p, users, DEFAULT_ENUMERATION_CAP)
    }

    /// [`independent`](Self::independent) with an explicit enumeration cap.
    pub fn independent_with_cap(p: f64, users: usize, cap: usize) -> Result<Self> {
        check_probability(p)?;
        check_users(users)?;
        check_cap(users, cap)?;
        let mut dense = vec![1.0f64];
        for j in 0..users {
            let half = dense.len();
            dense.resize(2 * half, 0.0);
            for mask in 0..half {
                let m = dense[mask];
                dense[mask] = m * (1.0 - p);
                dense[mask | (1 << j)] = m * p;
            }
        }
        let mass = dense
            .into_iter()
            .enumerate()
            .filter(|(_, m)| *m > 0.0)
            .map(|(mask, m)| (UserSet::from_mask(mask as u32), m))
            .collect();
        Ok(ActivityDistribution { users, mass, warnings: Vec::new() })
    }

    /// All users active together with probability `p`, otherwise all idle.
    pub fn dependent(p: f64, users: usize) -> Result<Self> {
        check_probability(p)?;
        check_users(users)?;
        let mut mass = Vec::with_capacity(2);
        if p < 1.0 {
            mass.push((UserSet::EMPTY, 1.0 - p));
        }
        if p > 0.0 {
            mass.push((UserSet::full(users), p));
        }
        Ok(ActivityDistribution { users, mass, warnings: Vec::new() })
    }

    /// Arbitrary joint law. Patterns not listed get zero mass.
    pub fn custom<I>(users: usize, table: I) -> Result<Self>
    where
        I: IntoIterator<Item = (UserSet, f64)>,
    {
        check_users(users)?;
        let mut mass: Vec<(UserSet, f64)> = Vec::new();
        for (pattern, p) in table {
            if !pattern.fits(users) {
                return Err(Error::Validation(format!("pattern {pattern} not a subset of the {users} users")));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Validation(format!("pattern {pattern} has invalid mass {p}")));
            }
            mass.push((pattern, p));
        }
        mass.sort_by_key(|(s, _)| *s);
        if let Some(w) = mass.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation(format!("duplicate pattern {}", w[0].0)));
        }
        let total: f64 = mass.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Validation(format!("masses sum to {total}, not 1")));
        }
        mass.retain(|(_, p)| *p > 0.0);
        let mut dist = ActivityDistribution { users, mass, warnings: Vec::new() };
        let marginals: Vec<f64> = (0..users).map(|u| dist.marginal(u)).collect();
        let min = marginals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = marginals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max - min > MARGINAL_SPREAD_TOLERANCE {
            dist.warnings.push(DistributionWarning::NonIdenticalMarginals { min, max });
        }
        Ok(dist)
    }

    /// Convex combination of laws over the same users.
    pub fn mixture(components: &[(f64, &ActivityDistribution)]) -> Result<Self> {
        let users = components
            .first()
            .map(|(_, d)| d.users)
            .ok_or_else(|| Error::Domain("mixture needs at least one component".into()))?;
        let mut table: Vec<(UserSet, f64)> = Vec::new();
        for (w, d) in components {
            if d.users != users {
                return Err(Error::DimensionMismatch { expected: users, actual: d.users });
            }
            check_probability(*w)?;
            for &(s, p) in &d.mass {
                match table.iter_mut().find(|(t, _)| *t == s) {
                    Some(entry) => entry.1 += w * p,
                    None => table.push((s, w * p)),
                }
            }
        }
        Self::custom(users, table)
    }

    /// Empirical law of a sequence of patterns.
    pub fn empirical(users: usize, patterns: &[UserSet]) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Domain("empirical law of an empty trace".into()));
        }
        let mut counts: std::collections::BTreeMap<UserSet, usize> = Default::default();
        for &s in patterns {
            *counts.entry(s).or_default() += 1;
        }
        let n = patterns.len() as f64;
        let mass: Vec<(UserSet, f64)> = counts.into_iter().map(|(s, c)| (s, c as f64 / n)).collect();
        // Re-normalise exactly: c/n rounding can leave the sum a few ulps off.
        let total: f64 = mass.iter().map(|(_, p)| p).sum();
        Self::custom(users, mass.into_iter().map(|(s, p)| (s, p / total)))
    }

    /// Parses the JSON custom-distribution format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DistributionFile = serde_json::from_str(text)?;
        file.into_distribution()
    }

    pub fn to_json(&self) -> String {
        let file = DistributionFile {
            users: self.users,
            mass: self.mass.iter().map(|&(s, p)| MassEntry { pattern: s.one_based(), p }).collect(),
        };
        serde_json::to_string_pretty(&file).expect("distribution serialises")
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Patterns with positive mass, sorted by mask.
    pub fn iter(&self) -> impl Iterator<Item = (UserSet, f64)> + '_ {
        self.mass.iter().copied()
    }

    pub fn mass_of(&self, pattern: UserSet) -> f64 {
        self.mass
            .binary_search_by_key(&pattern, |(s, _)| *s)
            .map(|i| self.mass[i].1)
            .unwrap_or(0.0)
    }

    pub fn warnings(&self) -> &[DistributionWarning] {
        &self.warnings
    }

    fn marginal(&self, user: usize) -> f64 {
        self.mass.iter().filter(|(s, _)| s.contains(user)).map(|(_, p)| p).sum()
    }

    /// Probability that 0-based `user` is active in a slot.
    pub fn marginal_activity_prob(&self, user: usize) -> Result<f64> {
        if user >= self.users {
            return Err(Error::IndexOutOfRange { index: user, users: self.users });
        }
        Ok(self.marginal(user))
    }

    /// Law of `A ∩ subset`, kept on the original K users. Patterns that agree
    /// on `subset` are pooled.
    pub fn marginalize(&self, subset: UserSet) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::Domain("cannot marginalize onto the empty set".into()));
        }
        if !subset.fits(self.users) {
            return Err(Error::Domain(format!("subset {subset} not within the {} users", self.users)));
        }
        let mut pooled: Vec<(UserSet, f64)> = Vec::new();
        for &(s, p) in &self.mass {
            let key = s.intersection(subset);
            match pooled.binary_search_by_key(&key, |(t, _)| *t) {
                Ok(i) => pooled[i].1 += p,
                Err(i) => pooled.insert(i, (key, p)),
            }
        }
        Ok(ActivityDistribution { users: self.users, mass: pooled, warnings: Vec::new() })
    }

    /// Marginalizes onto `subset` and renumbers its members `0..|subset|`,
    /// giving a law over `|subset|` users.
    pub fn restrict(&self, subset: UserSet) -> Result<Self> {
        let marginal = self.marginalize(subset)?;
        let members: Vec<usize> = subset.users().collect();
        let relabel = |s: UserSet| {
            UserSet::from_users(members.iter().enumerate().filter(|(_, u)| s.contains(**u)).map(|(i, _)| i))
        };
        let mut mass: Vec<(UserSet, f64)> = marginal.mass.iter().map(|&(s, p)| (relabel(s), p)).collect();
        mass.sort_by_key(|(s, _)| *s);
        Ok(ActivityDistribution { users: members.len(), mass, warnings: Vec::new() })
    }

    /// Mass-wise comparison with absolute tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.users != other.users {
            return false;
        }
        let mut patterns: Vec<UserSet> = self.mass.iter().chain(&other.mass).map(|(s, _)| *s).collect();
        patterns.sort();
        patterns.dedup();
        patterns.into_iter().all(|s| (self.mass_of(s) - other.mass_of(s)).abs() <= tol)
    }

    /// Cumulative mass table for inverse-CDF sampling, in mask order.
    pub(crate) fn cumulative(&self) -> Vec<(UserSet, f64)> {
        let mut acc = 0.0;
        self.mass
            .iter()
            .map(|&(s, p)| {
                acc += p;
                (s, acc)
            })
            .collect()
    }
}

fn check_users(users: usize) -> Result<()> {
    if users == 0 {
        return Err(Error::Domain("K must be at least 1".into()));
    }
    if users > HARD_USER_LIMIT {
        return Err(Error::EnumerationCap { users, cap: HARD_USER_LIMIT });
    }
    Ok(())
}

/// On-disk shape: `{"K": 2, "mass": [{"pattern": [1], "p": 0.25}, ...]}`,
/// 1-based user indices.
#[derive(Debug, Serialize, Deserialize)]
struct DistributionFile {
    #[serde(rename = "K")]
    users: usize,
    mass: Vec<MassEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MassEntry {
    pattern: Vec<usize>,
    p: f64,
}

impl DistributionFile {
    fn into_distribution(self) -> Result<ActivityDistribution> {
        let users = self.users;
        check_users(users)?;
        let table = self
            .mass
            .into_iter()
            .map(|e| {
                let mut idx = e.pattern.clone();
                idx.sort_unstable();
                if idx.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Validation(format!("pattern {:?} repeats a user", e.pattern)));
                }
                UserSet::from_one_based(&idx, users)
                    .map(|s| (s, e.p))
                    .map_err(|_| Error::Validation(format!("pattern {:?} out of range for K = {users}", e.pattern)))
            })
            .collect::<Result<Vec<_>>>()?;
        ActivityDistribution::custom(users, table)
    }
}
