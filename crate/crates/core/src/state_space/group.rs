use std::collections::{BTreeMap, BTreeSet};

use super::{Config, ConfigSpace, Edge, Locale, SiteId, SiteSet, System};
use crate::error::{Error, Result};

/// A locale automorphism: a lattice translation or an explicit site bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symmetry {
    Translation(Vec<i64>),
    Permutation(BTreeMap<SiteId, SiteId>),
}

impl Symmetry {
    pub fn translation(shift: impl Into<Vec<i64>>) -> Self {
        Symmetry::Translation(shift.into())
    }

    /// Unit translation along `axis` in a `dim`-dimensional lattice.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        Symmetry::Translation(v)
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Symmetry::Translation(v) => v.iter().all(|&x| x == 0),
            Symmetry::Permutation(m) => m.iter().all(|(a, b)| a == b),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Symmetry::Translation(v) => Symmetry::Translation(v.iter().map(|x| -x).collect()),
            Symmetry::Permutation(m) => {
                Symmetry::Permutation(m.iter().map(|(&a, &b)| (b, a)).collect())
            }
        }
    }

    pub fn apply_site(&self, locale: &Locale, site: SiteId) -> Result<SiteId> {
        if !locale.sites().contains(site) {
            return Err(Error::UnknownSite(site));
        }
        match self {
            Symmetry::Translation(shift) => {
                let lattice = locale.lattice().ok_or_else(|| {
                    Error::InvalidInput("translations need a lattice locale".into())
                })?;
                if shift.len() != lattice.dim {
                    return Err(Error::InvalidInput(format!(
                        "translation of dimension {} on a {}-dimensional lattice",
                        shift.len(),
                        lattice.dim
                    )));
                }
                lattice
                    .translate(&lattice.coords(site), shift)
                    .map(|p| lattice.site(&p))
                    .ok_or(Error::ActionLeavesWindow(site))
            }
            Symmetry::Permutation(map) => Ok(map.get(&site).copied().unwrap_or(site)),
        }
    }

    pub fn apply_edge(&self, locale: &Locale, e: Edge) -> Result<Edge> {
        Ok(Edge::new(
            self.apply_site(locale, e.origin)?,
            self.apply_site(locale, e.target)?,
        ))
    }

    pub fn map_sites(&self, locale: &Locale, sites: &SiteSet) -> Result<SiteMapping> {
        let images: Vec<SiteId> = sites
            .iter()
            .map(|s| self.apply_site(locale, s))
            .collect::<Result<_>>()?;
        let image = SiteSet::new(images.iter().copied());
        if image.len() != sites.len() {
            return Err(Error::InvalidInput("symmetry is not injective".into()));
        }
        let image_pos = images
            .iter()
            .map(|&s| image.position(s).expect("image"))
            .collect();
        Ok(SiteMapping {
            source: sites.clone(),
            image,
            image_pos,
        })
    }
}

/// The restriction of a symmetry to a finite site set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteMapping {
    pub source: SiteSet,
    pub image: SiteSet,
    /// Position in `image` of the image of the `i`-th source site.
    pub image_pos: Vec<usize>,
}

impl SiteMapping {
    /// Index of `σ(η)` in `S^{σΛ}` for `η` with index `index` in `S^Λ`.
    pub fn map_index(&self, source: &ConfigSpace, image: &ConfigSpace, index: usize) -> usize {
        self.image_pos
            .iter()
            .enumerate()
            .map(|(p, &q)| source.digit(index, p) * image.stride(q))
            .sum()
    }
}

/// A finitely generated group acting on a locale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub generators: Vec<Symmetry>,
}

impl GroupAction {
    /// The unit translations `e_1, .., e_d` of `Z^d`.
    pub fn lattice_translations(dim: usize) -> Self {
        GroupAction {
            generators: (0..dim).map(|axis| Symmetry::unit(dim, axis)).collect(),
        }
    }

    /// Explicit generators; each must be a bijection of the locale preserving its edges.
    pub fn permutations(locale: &Locale, maps: Vec<BTreeMap<SiteId, SiteId>>) -> Result<Self> {
        for map in &maps {
            let sym = Symmetry::Permutation(map.clone());
            let images: BTreeSet<SiteId> = locale
                .sites()
                .iter()
                .map(|s| sym.apply_site(locale, s))
                .collect::<Result<_>>()?;
            if images.len() != locale.sites().len()
                || !images.iter().all(|&s| locale.sites().contains(s))
            {
                return Err(Error::InvalidInput(
                    "generator is not a bijection of the locale".into(),
                ));
            }
            for e in locale.edges() {
                if !locale.has_edge(sym.apply_edge(locale, e)?) {
                    return Err(Error::InvalidInput(format!(
                        "generator does not preserve edge ({}, {})",
                        e.origin, e.target
                    )));
                }
            }
        }
        Ok(GroupAction {
            generators: maps.into_iter().map(Symmetry::Permutation).collect(),
        })
    }
}

/// Objects carried along by a locale automorphism.
pub trait GroupActable: Sized {
    fn act(&self, sigma: &Symmetry, system: &System) -> Result<Self>;
}

/// `σ(target)`: relabels a configuration, function or form onto `σ(Λ)`.
pub fn group_act<T: GroupActable>(sigma: &Symmetry, target: &T, system: &System) -> Result<T> {
    target.act(sigma, system)
}

impl GroupActable for Config {
    /// `(ση)_{σx} = η_x`.
    fn act(&self, sigma: &Symmetry, system: &System) -> Result<Self> {
        let mapping = sigma.map_sites(system.locale(), &self.sites)?;
        let mut values = vec![0; self.values.len()];
        for (p, &q) in mapping.image_pos.iter().enumerate() {
            values[q] = self.values[p];
        }
        Ok(Config {
            sites: mapping.image,
            values,
        })
    }
}
