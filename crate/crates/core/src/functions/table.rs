use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::state_space::{Config, ConfigSpace, GroupActable, SiteId, SiteSet, Symmetry, System};

/// A scalar function on `S^Λ`, stored densely in mixed-radix order.
#[derive(Debug, Clone, PartialEq)]
pub struct FnTable<T = Q> {
    space: ConfigSpace,
    values: Vec<T>,
}

impl<T: Scalar> FnTable<T> {
    pub fn new(space: ConfigSpace, values: Vec<T>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::InvalidInput(format!(
                "table has {} values, space has {} configurations",
                values.len(),
                space.size()
            )));
        }
        Ok(FnTable { space, values })
    }

    /// Tabulates `f` evaluated on the digit vector of every configuration.
    pub fn from_fn(space: ConfigSpace, f: impl Fn(&[usize]) -> T) -> Self {
        let values = (0..space.size()).map(|i| f(&space.digits(i))).collect();
        FnTable { space, values }
    }

    pub fn from_index_fn(space: ConfigSpace, f: impl Fn(usize) -> T) -> Self {
        let values = (0..space.size()).map(f).collect();
        FnTable { space, values }
    }

    pub fn constant(space: ConfigSpace, c: T) -> Self {
        let values = vec![c; space.size()];
        FnTable { space, values }
    }

    pub fn zero(space: ConfigSpace) -> Self {
        Self::constant(space, T::zero())
    }

    /// `η ↦ g(η_x)` for a single site `x ∈ Λ`.
    pub fn single_site(space: ConfigSpace, site: SiteId, g: &[T]) -> Result<Self> {
        let p = space
            .sites()
            .position(site)
            .ok_or(Error::UnknownSite(site))?;
        if g.len() != space.num_states() {
            return Err(Error::InvalidInput("one value per state expected".into()));
        }
        Ok(Self::from_index_fn(space.clone(), |i| {
            g[space.digit(i, p)].clone()
        }))
    }

    /// `η ↦ Π_{x ∈ sites} η_x` with states read as integers (occupation products).
    pub fn occupation_product(space: ConfigSpace, sites: &[SiteId]) -> Result<Self> {
        let pos: Vec<usize> = sites
            .iter()
            .map(|&s| space.sites().position(s).ok_or(Error::UnknownSite(s)))
            .collect::<Result<_>>()?;
        Ok(Self::from_fn(space, |d| {
            T::from_int(pos.iter().map(|&p| d[p] as i64).product())
        }))
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    pub fn sites(&self) -> &SiteSet {
        self.space.sites()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn value(&self, index: usize) -> &T {
        &self.values[index]
    }

    pub fn eval(&self, config: &Config) -> Result<T> {
        Ok(self.values[self.space.encode(config)?].clone())
    }

    /// `f ∘ pr_Λ` as a function on a larger window.
    pub fn lift(&self, bigger: &ConfigSpace) -> Result<Self> {
        if bigger.sites() == self.sites() {
            return Ok(self.clone());
        }
        let map = bigger.projection_map(&self.space)?;
        Ok(FnTable {
            space: bigger.clone(),
            values: map.into_iter().map(|j| self.values[j].clone()).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        FnTable {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.sites() != other.sites() {
            return Err(Error::SiteSetMismatch);
        }
        Ok(FnTable {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// Adds `other` after lifting both operands to the union of their site sets.
    pub fn add_lifted(&self, other: &Self, ambient: &ConfigSpace) -> Result<Self> {
        self.lift(ambient)?.add(&other.lift(ambient)?)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_negligible)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sites() == other.sites()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// Whether the function is constant.
    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| v.approx_eq(&self.values[0]))
    }

    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FnTable<U> {
        FnTable {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl FnTable<Q> {
    pub fn to_float(&self) -> FnTable<f64> {
        self.convert(|q| q.to_f64())
    }
}

impl<T: Scalar> GroupActable for FnTable<T> {
    /// `σ(f)(η) = f(σ^{-1}η)` on `S^{σΛ}`.
    fn act(&self, sigma: &Symmetry, system: &System) -> Result<Self> {
        let mapping = sigma.map_sites(system.locale(), self.sites())?;
        let image = system.space(&mapping.image)?;
        let mut values = vec![T::zero(); image.size()];
        for (idx, v) in self.values.iter().enumerate() {
            values[mapping.map_index(&self.space, &image, idx)] = v.clone();
        }
        Ok(FnTable {
            space: image,
            values,
        })
    }
}
