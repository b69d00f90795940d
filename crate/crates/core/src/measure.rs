//! Probability measures on `S` and `S^Λ`, expectations and conditional expectations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::functions::FnTable;
use crate::scalar::{Scalar, Q};
use crate::state_space::{ConfigSpace, Edge, SiteId, SiteSet, System};

/// A probability measure on `S` with full support.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMeasure<T = Q> {
    weights: Vec<T>,
}

impl<T: Scalar> StateMeasure<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("no states".into()));
        }
        if let Some(i) = weights.iter().position(|w| *w <= T::zero()) {
            return Err(Error::InvalidMeasure(format!(
                "weight of state {i} is not positive"
            )));
        }
        let total: T = weights.iter().cloned().sum();
        if !total.approx_eq(&T::one()) {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(StateMeasure { weights })
    }

    pub fn uniform(n: usize) -> Self {
        StateMeasure {
            weights: vec![T::ratio(1, n as i64); n],
        }
    }

    /// Two-state measure with `ν(1) = p`.
    pub fn bernoulli(p: T) -> Result<Self> {
        Self::new(vec![T::one() - p.clone(), p])
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, state: usize) -> &T {
        &self.weights[state]
    }

    pub fn num_states(&self) -> usize {
        self.weights.len()
    }

    pub fn expectation(&self, g: &[T]) -> T {
        g.iter()
            .zip(&self.weights)
            .map(|(a, w)| a.clone() * w.clone())
            .sum()
    }
}

/// A product measure `⊗_x ν_x`, represented symbolically.
#[derive(Debug, Clone, PartialEq)]
pub enum ProductMeasure<T = Q> {
    Homogeneous(StateMeasure<T>),
    PerSite(BTreeMap<SiteId, StateMeasure<T>>),
}

impl<T: Scalar> ProductMeasure<T> {
    pub fn homogeneous(nu: StateMeasure<T>) -> Self {
        ProductMeasure::Homogeneous(nu)
    }

    pub fn factor(&self, site: SiteId) -> Result<&StateMeasure<T>> {
        match self {
            ProductMeasure::Homogeneous(nu) => Ok(nu),
            ProductMeasure::PerSite(map) => map.get(&site).ok_or(Error::UnknownSite(site)),
        }
    }

    /// The common single-site law, if the measure is homogeneous.
    pub fn homogeneous_factor(&self) -> Option<&StateMeasure<T>> {
        match self {
            ProductMeasure::Homogeneous(nu) => Some(nu),
            ProductMeasure::PerSite(_) => None,
        }
    }

    fn factors(&self, space: &ConfigSpace) -> Result<Vec<&StateMeasure<T>>> {
        space
            .sites()
            .iter()
            .map(|s| {
                let f = self.factor(s)?;
                if f.num_states() != space.num_states() {
                    return Err(Error::InvalidMeasure(format!(
                        "factor at site {s} has {} states, expected {}",
                        f.num_states(),
                        space.num_states()
                    )));
                }
                Ok(f)
            })
            .collect()
    }

    pub fn weight(&self, space: &ConfigSpace, index: usize) -> Result<T> {
        let factors = self.factors(space)?;
        Ok(product_weight(space, &factors, index, None))
    }

    pub fn materialize(&self, space: &ConfigSpace) -> Result<WindowMeasure<T>> {
        let factors = self.factors(space)?;
        let weights = (0..space.size())
            .map(|i| product_weight(space, &factors, i, None))
            .collect();
        Ok(WindowMeasure {
            space: space.clone(),
            weights,
        })
    }
}

fn product_weight<T: Scalar>(
    space: &ConfigSpace,
    factors: &[&StateMeasure<T>],
    index: usize,
    only: Option<&[bool]>,
) -> T {
    factors
        .iter()
        .enumerate()
        .filter(|(p, _)| only.is_none_or(|mask| mask[*p]))
        .fold(T::one(), |acc, (p, f)| {
            acc * f.weight(space.digit(index, p)).clone()
        })
}

/// A strictly positive probability measure on `S^Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowMeasure<T = Q> {
    space: ConfigSpace,
    weights: Vec<T>,
}

impl<T: Scalar> WindowMeasure<T> {
    pub fn new(space: ConfigSpace, weights: Vec<T>) -> Result<Self> {
        if weights.len() != space.size() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for {} configurations",
                weights.len(),
                space.size()
            )));
        }
        if let Some(i) = weights.iter().position(|w| *w <= T::zero()) {
            return Err(Error::InvalidMeasure(format!(
                "weight of configuration {i} is not positive"
            )));
        }
        let total: T = weights.iter().cloned().sum();
        if !total.approx_eq(&T::one()) {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(WindowMeasure { space, weights })
    }

    /// Normalizes positive weights to total mass one.
    pub fn from_unnormalized(space: ConfigSpace, weights: Vec<T>) -> Result<Self> {
        let total: T = weights.iter().cloned().sum();
        if total <= T::zero() {
            return Err(Error::InvalidMeasure("total mass is not positive".into()));
        }
        Self::new(
            space,
            weights.into_iter().map(|w| w / total.clone()).collect(),
        )
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    pub fn sites(&self) -> &SiteSet {
        self.space.sites()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// Anything that can report its marginal on a window.
pub trait Measure<T: Scalar> {
    /// Weights of the marginal on `space`.
    fn weights_on(&self, space: &ConfigSpace) -> Result<Vec<T>>;

    fn as_product(&self) -> Option<&ProductMeasure<T>> {
        None
    }
}

impl<T: Scalar> Measure<T> for ProductMeasure<T> {
    fn weights_on(&self, space: &ConfigSpace) -> Result<Vec<T>> {
        Ok(self.materialize(space)?.weights)
    }

    fn as_product(&self) -> Option<&ProductMeasure<T>> {
        Some(self)
    }
}

impl<T: Scalar> Measure<T> for WindowMeasure<T> {
    fn weights_on(&self, space: &ConfigSpace) -> Result<Vec<T>> {
        Ok(pushforward(self, space)?.weights)
    }
}

/// Marginal of `μ` on a sub-window: `μ(η) = Σ_{η' ↦ η} μ(η')`.
pub fn pushforward<T: Scalar>(
    mu: &WindowMeasure<T>,
    target: &ConfigSpace,
) -> Result<WindowMeasure<T>> {
    if target.sites() == mu.sites() {
        return Ok(mu.clone());
    }
    let map = mu.space.projection_map(target)?;
    let mut weights = vec![T::zero(); target.size()];
    for (idx, w) in mu.weights.iter().enumerate() {
        weights[map[idx]] = weights[map[idx]].clone() + w.clone();
    }
    Ok(WindowMeasure {
        space: target.clone(),
        weights,
    })
}

/// `E_μ[f]`.
pub fn expectation<T: Scalar, M: Measure<T> + ?Sized>(f: &FnTable<T>, mu: &M) -> Result<T> {
    let w = mu.weights_on(f.space())?;
    Ok(f.values()
        .iter()
        .zip(&w)
        .map(|(a, b)| a.clone() * b.clone())
        .sum())
}

/// `⟨f, g⟩_μ = E_μ[fg]`; both functions must live on the same window.
pub fn inner<T: Scalar, M: Measure<T> + ?Sized>(
    f: &FnTable<T>,
    g: &FnTable<T>,
    mu: &M,
) -> Result<T> {
    if f.sites() != g.sites() {
        return Err(Error::SiteSetMismatch);
    }
    let w = mu.weights_on(f.space())?;
    Ok(f.values()
        .iter()
        .zip(g.values())
        .zip(&w)
        .map(|((a, b), m)| a.clone() * b.clone() * m.clone())
        .sum())
}

/// The conditional expectation `π^Λ f` onto a sub-window `Λ ⊂ Λ'`.
///
/// Product measures are integrated factor by factor; any other measure goes
/// through [`conditional_expectation_by_weights`].
pub fn conditional_expectation<T: Scalar, M: Measure<T> + ?Sized>(
    f: &FnTable<T>,
    target: &ConfigSpace,
    mu: &M,
) -> Result<FnTable<T>> {
    if !target.sites().is_subset_of(f.sites()) {
        return Err(Error::NotSubset);
    }
    if target.sites() == f.sites() {
        return Ok(f.clone());
    }
    match mu.as_product() {
        Some(product) => conditional_expectation_product(f, target, product),
        None => conditional_expectation_by_weights(f, target, mu),
    }
}

fn conditional_expectation_product<T: Scalar>(
    f: &FnTable<T>,
    target: &ConfigSpace,
    mu: &ProductMeasure<T>,
) -> Result<FnTable<T>> {
    let space = f.space();
    let map = space.projection_map(target)?;
    let factors = mu.factors(space)?;
    let outside: Vec<bool> = space
        .sites()
        .iter()
        .map(|s| !target.sites().contains(s))
        .collect();
    let mut out = vec![T::zero(); target.size()];
    for (idx, v) in f.values().iter().enumerate() {
        if v.is_negligible() && T::is_exact() {
            continue;
        }
        let w = product_weight(space, &factors, idx, Some(&outside));
        out[map[idx]] = out[map[idx]].clone() + v.clone() * w;
    }
    FnTable::new(target.clone(), out)
}

/// `(π^Λ f)(η) = μ(η)^{-1} Σ_{pr(η') = η} f(η') μ(η')`, for any strictly positive `μ`.
pub fn conditional_expectation_by_weights<T: Scalar, M: Measure<T> + ?Sized>(
    f: &FnTable<T>,
    target: &ConfigSpace,
    mu: &M,
) -> Result<FnTable<T>> {
    if !target.sites().is_subset_of(f.sites()) {
        return Err(Error::NotSubset);
    }
    let weights = mu.weights_on(f.space())?;
    let map = f.space().projection_map(target)?;
    let mut num = vec![T::zero(); target.size()];
    let mut den = vec![T::zero(); target.size()];
    for (idx, (v, w)) in f.values().iter().zip(&weights).enumerate() {
        num[map[idx]] = num[map[idx]].clone() + v.clone() * w.clone();
        den[map[idx]] = den[map[idx]].clone() + w.clone();
    }
    let values = num.into_iter().zip(den).map(|(n, d)| n / d).collect();
    FnTable::new(target.clone(), values)
}

/// `π^V f` for any window `V` under a product measure.
///
/// By the intersection law this is `π^{V ∩ Λ} f`, viewed as a function on `V`.
pub fn project_product<T: Scalar>(
    system: &System,
    f: &FnTable<T>,
    target: &SiteSet,
    mu: &ProductMeasure<T>,
) -> Result<FnTable<T>> {
    let common = system.space(&target.intersection(f.sites()))?;
    let projected = conditional_expectation(f, &common, mu)?;
    projected.lift(&system.space(target)?)
}

/// One failure of `μ(η^e) μ(η') = μ(η) μ(η'^e)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinaryViolation<T = Q> {
    /// The configuration `η'` on the larger window.
    pub config: Vec<usize>,
    pub edge: Edge,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrdinaryReport<T = Q> {
    pub ordinary: bool,
    pub checked: usize,
    pub violations: Vec<OrdinaryViolation<T>>,
}

/// Checks the ordinary-measure identity on the pair of windows `Λ ⊂ Λ'`.
pub fn is_ordinary<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    mu: &M,
    inner_sites: &SiteSet,
    outer_sites: &SiteSet,
) -> Result<OrdinaryReport<T>> {
    if !inner_sites.is_subset_of(outer_sites) {
        return Err(Error::NotSubset);
    }
    let outer = system.space(outer_sites)?;
    let inner_space = system.space(inner_sites)?;
    let w_outer = mu.weights_on(&outer)?;
    let w_inner = mu.weights_on(&inner_space)?;
    let map = outer.projection_map(&inner_space)?;
    let edges = system.locale().edges_within(inner_sites);
    let mut violations = Vec::new();
    let mut checked = 0;
    for e in edges {
        let p_in = (
            inner_sites.position(e.origin).expect("within"),
            inner_sites.position(e.target).expect("within"),
        );
        let p_out = (
            outer_sites.position(e.origin).expect("within"),
            outer_sites.position(e.target).expect("within"),
        );
        for idx in 0..outer.size() {
            let eta = map[idx];
            let eta_e = system.step(&inner_space, eta, p_in);
            if eta_e == eta {
                continue;
            }
            checked += 1;
            let idx_e = system.step(&outer, idx, p_out);
            let lhs = w_inner[eta_e].clone() * w_outer[idx].clone();
            let rhs = w_inner[eta].clone() * w_outer[idx_e].clone();
            if !lhs.approx_eq(&rhs) {
                violations.push(OrdinaryViolation {
                    config: outer.digits(idx),
                    edge: e,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(OrdinaryReport {
        ordinary: violations.is_empty(),
        checked,
        violations,
    })
}
