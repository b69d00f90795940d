use rayon::prelude::*;

use super::{Caps, Config, ConfigSpace, Edge, Interaction, Locale, SiteSet};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A locale together with an interaction and enumeration caps.
///
/// This is the ambient context of almost every operation in the crate.
#[derive(Debug, Clone)]
pub struct System {
    locale: Locale,
    interaction: Interaction,
    caps: Caps,
}

impl System {
    pub fn new(locale: Locale, interaction: Interaction) -> Self {
        System {
            locale,
            interaction,
            caps: Caps::default(),
        }
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn locale(&self) -> &Locale {
        &self.locale
    }

    pub fn interaction(&self) -> &Interaction {
        &self.interaction
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn num_states(&self) -> usize {
        self.interaction.num_states()
    }

    /// Enumerates `S^Λ`; `Λ` must consist of locale sites.
    pub fn space(&self, sites: &SiteSet) -> Result<ConfigSpace> {
        if let Some(s) = sites.iter().find(|&s| !self.locale.sites().contains(s)) {
            return Err(Error::UnknownSite(s));
        }
        ConfigSpace::new(sites.clone(), self.num_states(), self.caps.state_cap)
    }

    /// `η^e` for a single configuration.
    pub fn apply_transition(&self, config: &Config, e: Edge) -> Result<Config> {
        let (po, pt) = match (
            config.sites.position(e.origin),
            config.sites.position(e.target),
        ) {
            (Some(po), Some(pt)) if self.locale.has_edge(e) => (po, pt),
            _ => return Err(Error::EdgeOutsideSiteSet(e.origin, e.target)),
        };
        let mut values = config.values.clone();
        let (a, b) = self.interaction.apply(values[po], values[pt]);
        values[po] = a;
        values[pt] = b;
        Ok(Config {
            sites: config.sites.clone(),
            values,
        })
    }

    /// `η^e` on indices; `positions` are the site positions of `e` in the space.
    #[inline]
    pub fn step(&self, space: &ConfigSpace, index: usize, positions: (usize, usize)) -> usize {
        let (po, pt) = positions;
        let (a, b) = (space.digit(index, po), space.digit(index, pt));
        let (a2, b2) = self.interaction.apply(a, b);
        if (a2, b2) == (a, b) {
            return index;
        }
        let idx = space.with_digit(index, po, a2);
        space.with_digit(idx, pt, b2)
    }

    pub fn transition_graph(&self, sites: &SiteSet) -> Result<TransitionGraph> {
        let space = self.space(sites)?;
        TransitionGraph::build(self, space)
    }
}

/// One record `(η, η^e)` with `η^e ≠ η`; `edge` indexes [`TransitionGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
}

/// The configuration graph `(S^Λ, Φ_Λ)`, one record per `(η, e)` pair.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    space: ConfigSpace,
    edges: Vec<Edge>,
    positions: Vec<(usize, usize)>,
    records: Vec<Transition>,
    offsets: Vec<usize>,
}

/// Connected components of a transition graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component of each configuration; components are numbered by their
    /// smallest configuration index.
    pub labels: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

impl TransitionGraph {
    fn build(system: &System, space: ConfigSpace) -> Result<Self> {
        let edges = system.locale().edges_within(space.sites());
        let positions: Vec<(usize, usize)> = edges
            .iter()
            .map(|e| {
                (
                    space.sites().position(e.origin).expect("edge within"),
                    space.sites().position(e.target).expect("edge within"),
                )
            })
            .collect();
        let per_config: Vec<Vec<Transition>> = (0..space.size())
            .into_par_iter()
            .map(|from| {
                positions
                    .iter()
                    .enumerate()
                    .filter_map(|(edge, &pos)| {
                        let to = system.step(&space, from, pos);
                        (to != from).then_some(Transition { from, to, edge })
                    })
                    .collect()
            })
            .collect();
        let mut offsets = Vec::with_capacity(space.size() + 1);
        offsets.push(0);
        let mut records = Vec::new();
        for list in per_config {
            records.extend(list);
            offsets.push(records.len());
        }
        Ok(TransitionGraph {
            space,
            edges,
            positions,
            records,
            offsets,
        })
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    /// The directed edges `E_Λ`, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn edge_positions(&self, edge: usize) -> (usize, usize) {
        self.positions[edge]
    }

    pub fn records(&self) -> &[Transition] {
        &self.records
    }

    pub fn outgoing(&self, from: usize) -> &[Transition] {
        &self.records[self.offsets[from]..self.offsets[from + 1]]
    }

    /// `η^e` for the edge with index `edge` (may equal `η`).
    pub fn step(&self, system: &System, from: usize, edge: usize) -> usize {
        system.step(&self.space, from, self.positions[edge])
    }

    pub fn components(&self) -> Components {
        let mut uf = UnionFind::new(self.space.size());
        for t in &self.records {
            uf.union(t.from, t.to);
        }
        let (labels, count) = uf.labels();
        let mut members = vec![Vec::new(); count];
        for (idx, &c) in labels.iter().enumerate() {
            members[c].push(idx);
        }
        Components { labels, members }
    }
}
