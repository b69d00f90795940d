use serde::Serialize;

use crate::error::{Error, Result};

/// A finite state set with a base state and a pair map `φ: S×S → S×S`.
///
/// States are addressed by their index into `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    labels: Vec<String>,
    base: usize,
    phi: Vec<(usize, usize)>,
}

/// One failure of `î∘φ∘î∘φ(s) = s` on a pair moved by `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionViolation {
    pub pair: (usize, usize),
    pub image: (usize, usize),
    pub round_trip: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionReport {
    pub valid: bool,
    pub changed_pairs: usize,
    pub violations: Vec<InteractionViolation>,
}

impl Interaction {
    /// Builds `φ` from its changed pairs; every other pair is fixed.
    pub fn new(
        labels: Vec<String>,
        base: usize,
        changes: impl IntoIterator<Item = ((usize, usize), (usize, usize))>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInteraction("empty state set".into()));
        }
        if base >= n {
            return Err(Error::InvalidInteraction(format!(
                "base state {base} out of range"
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidInteraction("duplicate state label".into()));
        }
        let mut phi: Vec<(usize, usize)> = (0..n * n).map(|i| (i / n, i % n)).collect();
        let mut seen = vec![false; n * n];
        for ((a, b), (c, d)) in changes {
            if [a, b, c, d].iter().any(|&s| s >= n) {
                return Err(Error::InvalidInteraction(format!(
                    "pair ({a},{b}) -> ({c},{d}) references an unknown state"
                )));
            }
            if std::mem::replace(&mut seen[a * n + b], true) {
                return Err(Error::InvalidInteraction(format!(
                    "pair ({a},{b}) given twice"
                )));
            }
            phi[a * n + b] = (c, d);
        }
        Ok(Interaction { labels, base, phi })
    }

    /// Symmetric simple exclusion: `S = {0, 1}`, `φ` swaps the two states.
    pub fn exclusion() -> Self {
        Self::swap(2)
    }

    /// Multi-species exclusion: `φ(s1, s2) = (s2, s1)` on `n` states.
    pub fn swap(n: usize) -> Self {
        let changes = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| ((a, b), (b, a)));
        Interaction::new(numbered(n), 0, changes).expect("valid by construction")
    }

    /// The interaction with no transitions.
    pub fn identity(n: usize) -> Self {
        Interaction::new(numbered(n), 0, []).expect("valid by construction")
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn apply(&self, a: usize, b: usize) -> (usize, usize) {
        self.phi[a * self.labels.len() + b]
    }

    /// Pairs with `φ(s1, s2) ≠ (s1, s2)`, with their images, in index order.
    pub fn changed_pairs(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        let n = self.labels.len();
        self.phi.iter().enumerate().filter_map(move |(i, &img)| {
            let pair = (i / n, i % n);
            (img != pair).then_some((pair, img))
        })
    }

    /// Checks `î∘φ∘î∘φ(s1,s2) = (s1,s2)` on every changed pair.
    pub fn validate(&self) -> InteractionReport {
        let mut changed_pairs = 0;
        let violations: Vec<_> = self
            .changed_pairs()
            .inspect(|_| changed_pairs += 1)
            .filter_map(|(pair, image)| {
                let (c, d) = self.apply(image.1, image.0);
                let round_trip = (d, c);
                (round_trip != pair).then_some(InteractionViolation {
                    pair,
                    image,
                    round_trip,
                })
            })
            .collect();
        InteractionReport {
            valid: violations.is_empty(),
            changed_pairs,
            violations,
        }
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}
