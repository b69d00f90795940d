use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::{SiteId, SiteSet};
use crate::error::{Error, Result};

/// A directed edge `(origin, target)` of a locale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub origin: SiteId,
    pub target: SiteId,
}

impl Edge {
    pub fn new(origin: SiteId, target: SiteId) -> Self {
        Edge { origin, target }
    }

    pub fn reverse(self) -> Self {
        Edge::new(self.target, self.origin)
    }

    /// Stored orientation of the undirected pair: origin < target.
    pub fn is_canonical(self) -> bool {
        self.origin < self.target
    }

    pub fn canonical(self) -> Self {
        if self.is_canonical() {
            self
        } else {
            self.reverse()
        }
    }

    pub fn pair(self) -> (SiteId, SiteId) {
        (self.origin, self.target)
    }
}

impl From<(SiteId, SiteId)> for Edge {
    fn from((o, t): (SiteId, SiteId)) -> Self {
        Edge::new(o, t)
    }
}

/// A finite, connected, simple, symmetric directed graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Locale {
    sites: SiteSet,
    edges: BTreeSet<Edge>,
    neighbors: BTreeMap<SiteId, Vec<SiteId>>,
    lattice: Option<Lattice>,
}

impl Locale {
    pub fn new(
        sites: impl IntoIterator<Item = SiteId>,
        edges: impl IntoIterator<Item = Edge>,
        lattice: Option<Lattice>,
    ) -> Result<Self> {
        let raw_sites: Vec<SiteId> = sites.into_iter().collect();
        let site_set = SiteSet::new(raw_sites.iter().copied());
        if site_set.len() != raw_sites.len() {
            return Err(Error::NotSimple("duplicate site".into()));
        }
        if site_set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut edge_set = BTreeSet::new();
        for e in edges {
            for s in [e.origin, e.target] {
                if !site_set.contains(s) {
                    return Err(Error::UnknownSite(s));
                }
            }
            if e.origin == e.target {
                return Err(Error::NotSimple(format!("self-loop at {}", e.origin)));
            }
            if !edge_set.insert(e) {
                return Err(Error::NotSimple(format!(
                    "duplicate edge ({}, {})",
                    e.origin, e.target
                )));
            }
        }
        if let Some(e) = edge_set.iter().find(|e| !edge_set.contains(&e.reverse())) {
            return Err(Error::NotSymmetric(e.origin, e.target));
        }
        let mut neighbors: BTreeMap<SiteId, Vec<SiteId>> =
            site_set.iter().map(|s| (s, Vec::new())).collect();
        for e in &edge_set {
            neighbors
                .get_mut(&e.origin)
                .expect("checked")
                .push(e.target);
        }
        let locale = Locale {
            sites: site_set,
            edges: edge_set,
            neighbors,
            lattice,
        };
        let root = locale.sites.get(0);
        let dist = locale.distances_from(root);
        if let Some(s) = locale.sites.iter().find(|s| !dist.contains_key(s)) {
            return Err(Error::NotConnected(s, root));
        }
        Ok(locale)
    }

    /// Nearest-neighbour window `{-r..r}^d`.
    pub fn lattice_window(dim: usize, radius: i64) -> Result<Self> {
        Self::from_lattice(Lattice::window(dim, radius)?)
    }

    /// Nearest-neighbour torus with the given side lengths (each at least 3).
    pub fn lattice_torus(sizes: Vec<i64>) -> Result<Self> {
        Self::from_lattice(Lattice::torus(sizes)?)
    }

    pub fn from_lattice(lattice: Lattice) -> Result<Self> {
        let points = lattice.points();
        let sites: Vec<SiteId> = points.iter().map(|p| lattice.site(p)).collect();
        let edges: Vec<Edge> = points
            .iter()
            .flat_map(|p| {
                let from = lattice.site(p);
                lattice
                    .neighbors(p)
                    .into_iter()
                    .map(move |q| Edge::new(from, super::lattice::encode_point(&q)))
            })
            .collect();
        Locale::new(sites, edges, Some(lattice))
    }

    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn neighbors(&self, site: SiteId) -> &[SiteId] {
        self.neighbors.get(&site).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Directed edges with both endpoints in `sites` (the set `E_Λ`), sorted.
    pub fn edges_within(&self, sites: &SiteSet) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|e| sites.contains(e.origin) && sites.contains(e.target))
            .collect()
    }

    /// Sub-locale induced on `sites`; fails with `NotConnected` if the induced graph is.
    pub fn induced(&self, sites: &SiteSet) -> Result<Locale> {
        if !sites.is_subset_of(&self.sites) {
            return Err(Error::NotSubset);
        }
        Locale::new(sites.iter(), self.edges_within(sites), None)
    }

    fn distances_from(&self, root: SiteId) -> BTreeMap<SiteId, usize> {
        let mut dist = BTreeMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            let d = dist[&s];
            for &n in self.neighbors(s) {
                dist.entry(n).or_insert_with(|| {
                    queue.push_back(n);
                    d + 1
                });
            }
        }
        dist
    }

    /// Graph distance in the locale.
    pub fn distance(&self, a: SiteId, b: SiteId) -> Result<usize> {
        for s in [a, b] {
            if !self.sites.contains(s) {
                return Err(Error::UnknownSite(s));
            }
        }
        Ok(self.distances_from(a)[&b])
    }

    /// Largest locale distance between two sites of `sites` (paths may leave `sites`).
    pub fn site_diameter(&self, sites: &SiteSet) -> Result<usize> {
        if sites.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(s) = sites.iter().find(|s| !self.sites.contains(*s)) {
            return Err(Error::UnknownSite(s));
        }
        Ok(sites
            .iter()
            .map(|a| {
                let dist = self.distances_from(a);
                sites.iter().map(|b| dist[&b]).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_space::lattice::encode_point;

    fn e(a: SiteId, b: SiteId) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn single_edge_locale() {
        let l = Locale::new([0, 1], [e(0, 1), e(1, 0)], None).unwrap();
        assert_eq!(l.edge_count(), 2);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert_eq!(
            Locale::new([0, 1], [e(0, 1)], None),
            Err(Error::NotSymmetric(0, 1))
        );
        assert!(matches!(
            Locale::new([0], [e(0, 0)], None),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            Locale::new([0, 1], [e(0, 1), e(1, 0), e(0, 1)], None),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            Locale::new([0, 1, 2], [e(0, 1), e(1, 0)], None),
            Err(Error::NotConnected(2, 0))
        ));
        assert_eq!(
            Locale::new([0, 1], [e(0, 5), e(5, 0)], None),
            Err(Error::UnknownSite(5))
        );
    }

    #[test]
    fn lattice_windows_count_edges() {
        let path = Locale::lattice_window(1, 2).unwrap();
        assert_eq!(path.sites().len(), 5);
        assert_eq!(path.edge_count(), 8);
        let l = Locale::lattice_window(1, 1).unwrap();
        assert_eq!((l.sites().len(), l.edge_count()), (3, 4));
        let sq = Locale::lattice_window(2, 1).unwrap();
        assert_eq!((sq.sites().len(), sq.edge_count()), (9, 24));
        assert_eq!(Locale::lattice_window(1, 0).unwrap().edge_count(), 0);
    }

    #[test]
    fn torus_sizes() {
        assert_eq!(Locale::lattice_torus(vec![2]), Err(Error::SizeTooSmall(2)));
        let ring = Locale::lattice_torus(vec![3]).unwrap();
        assert_eq!(ring.edge_count(), 6);
        let t = Locale::lattice_torus(vec![3, 4]).unwrap();
        assert_eq!(t.edge_count(), 2 * 2 * 12);
    }

    #[test]
    fn diameters() {
        let path = Locale::lattice_window(1, 2).unwrap();
        assert_eq!(path.site_diameter(&SiteSet::new([0])).unwrap(), 0);
        assert_eq!(path.site_diameter(&SiteSet::new([-1, 1])).unwrap(), 2);
        assert_eq!(path.site_diameter(&SiteSet::new([])), Err(Error::EmptySet));
        let sq = Locale::lattice_window(2, 2).unwrap();
        let set = SiteSet::new([encode_point(&[0, 0]), encode_point(&[1, 1])]);
        assert_eq!(sq.site_diameter(&set).unwrap(), 2);
    }
}
