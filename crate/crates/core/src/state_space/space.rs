use serde::{Deserialize, Serialize};

use super::SiteId;
use crate::error::{Error, Result};

/// Sorted, duplicate-free set of sites.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SiteSet(Vec<SiteId>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = SiteId>) -> Self {
        let mut v: Vec<SiteId> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SiteSet(v)
    }

    pub fn empty() -> Self {
        SiteSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> SiteId {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[SiteId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.0.iter().copied()
    }

    pub fn position(&self, site: SiteId) -> Option<usize> {
        self.0.binary_search(&site).ok()
    }

    pub fn contains(&self, site: SiteId) -> bool {
        self.position(site).is_some()
    }

    pub fn is_subset_of(&self, other: &SiteSet) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.iter().filter(|&s| other.contains(s)).collect())
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.iter().filter(|&s| !other.contains(s)).collect())
    }

    /// Subset selected by a bitmask over positions (bit `i` is the `i`-th site).
    pub fn subset_by_mask(&self, mask: u64) -> SiteSet {
        SiteSet(
            self.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, s)| s)
                .collect(),
        )
    }

    /// Bitmask of `sub` relative to this set's positions.
    pub fn mask_of(&self, sub: &SiteSet) -> Result<u64> {
        sub.iter().try_fold(0u64, |mask, s| {
            self.position(s)
                .map(|i| mask | 1 << i)
                .ok_or(Error::NotSubset)
        })
    }
}

impl FromIterator<SiteId> for SiteSet {
    fn from_iter<I: IntoIterator<Item = SiteId>>(iter: I) -> Self {
        SiteSet::new(iter)
    }
}

/// Limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of configurations `|S|^|Λ|` of any enumerated window.
    pub state_cap: usize,
    /// Maximum `|Λ|` for Martingale expansions (which visit all `2^|Λ|` subsets).
    pub subset_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            state_cap: 1 << 20,
            subset_cap: 16,
        }
    }
}

/// The configuration space `S^Λ`, indexed in mixed radix.
///
/// The digit of the `i`-th site (in ascending site order) has weight
/// `|S|^i`, so the first site is the least-significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSpace {
    sites: SiteSet,
    states: usize,
    strides: Vec<usize>,
    size: usize,
}

/// An assignment of state indices to the sites of a [`SiteSet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Config {
    pub sites: SiteSet,
    pub values: Vec<usize>,
}

impl Config {
    pub fn new(sites: SiteSet, values: Vec<usize>) -> Result<Self> {
        if sites.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "configuration has {} values for {} sites",
                values.len(),
                sites.len()
            )));
        }
        Ok(Config { sites, values })
    }

    pub fn state_at(&self, site: SiteId) -> Option<usize> {
        self.sites.position(site).map(|i| self.values[i])
    }
}

impl ConfigSpace {
    pub fn new(sites: SiteSet, states: usize, cap: usize) -> Result<Self> {
        let too_large = || Error::SpaceTooLarge {
            states,
            sites: sites.len(),
            cap,
        };
        let mut strides = Vec::with_capacity(sites.len());
        let mut size = 1usize;
        for _ in 0..sites.len() {
            strides.push(size);
            size = size.checked_mul(states).ok_or_else(too_large)?;
            if size > cap {
                return Err(too_large());
            }
        }
        if states == 0 {
            return Err(Error::InvalidInput("empty state set".into()));
        }
        Ok(ConfigSpace {
            sites,
            states,
            strides,
            size,
        })
    }

    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    #[inline]
    pub fn digit(&self, index: usize, position: usize) -> usize {
        index / self.strides[position] % self.states
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.sites.len())
            .map(|p| self.digit(index, p))
            .collect()
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn encode(&self, config: &Config) -> Result<usize> {
        if config.sites != self.sites {
            return Err(Error::SiteSetMismatch);
        }
        if let Some(&bad) = config.values.iter().find(|&&v| v >= self.states) {
            return Err(Error::InvalidInput(format!(
                "state index {bad} out of range"
            )));
        }
        Ok(self.index_of(&config.values))
    }

    pub fn decode(&self, index: usize) -> Config {
        Config {
            sites: self.sites.clone(),
            values: self.digits(index),
        }
    }

    /// For every configuration of `self`, the index of its restriction to `sub`.
    pub fn projection_map(&self, sub: &ConfigSpace) -> Result<Vec<usize>> {
        if !sub.sites.is_subset_of(&self.sites) || sub.states != self.states {
            return Err(Error::NotSubset);
        }
        let positions: Vec<usize> = sub
            .sites
            .iter()
            .map(|s| self.sites.position(s).expect("subset"))
            .collect();
        Ok((0..self.size)
            .map(|idx| {
                positions
                    .iter()
                    .zip(&sub.strides)
                    .map(|(&p, &st)| self.digit(idx, p) * st)
                    .sum()
            })
            .collect())
    }

    /// Index of `digits` with the state at `position` replaced.
    #[inline]
    pub fn with_digit(&self, index: usize, position: usize, value: usize) -> usize {
        let old = self.digit(index, position);
        index - old * self.strides[position] + value * self.strides[position]
    }
}
