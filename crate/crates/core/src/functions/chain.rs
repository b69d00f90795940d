use crate::error::{Error, Result};
use crate::measure::{conditional_expectation, ProductMeasure};
use crate::scalar::Scalar;
use crate::state_space::{SiteSet, System};

use super::FnTable;

/// `ι^Λ f`: evaluates `f` on the extension of `η ∈ S^Λ` by the base state.
pub fn iota_restrict<T: Scalar>(
    system: &System,
    f: &FnTable<T>,
    target: &SiteSet,
) -> Result<FnTable<T>> {
    if !target.is_subset_of(f.sites()) {
        return Err(Error::NotSubset);
    }
    let small = system.space(target)?;
    let big = f.space();
    let base = system.interaction().base();
    let base_index = big.index_of(&vec![base; big.sites().len()]);
    let positions: Vec<usize> = target
        .iter()
        .map(|s| big.sites().position(s).expect("subset"))
        .collect();
    Ok(FnTable::from_index_fn(small.clone(), |i| {
        let idx = positions
            .iter()
            .enumerate()
            .fold(base_index, |acc, (p, &q)| {
                big.with_digit(acc, q, small.digit(i, p))
            });
        f.value(idx).clone()
    }))
}

/// Finite truncation `(f^{Λ_1}, .., f^{Λ_n})` of a co-local function.
#[derive(Debug, Clone, PartialEq)]
pub struct CoLocalChain<T> {
    pub windows: Vec<SiteSet>,
    pub tables: Vec<FnTable<T>>,
    pub measure: ProductMeasure<T>,
}

impl<T: Scalar> CoLocalChain<T> {
    /// Whether `π^{Λ_i} f^{Λ_j} = f^{Λ_i}` for all `i < j`.
    pub fn is_compatible(&self, system: &System) -> Result<bool> {
        for j in 0..self.tables.len() {
            for i in 0..j {
                let space = system.space(&self.windows[i])?;
                let p = conditional_expectation(&self.tables[j], &space, &self.measure)?;
                if !p.approx_eq(&self.tables[i]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Checks that `chain` is increasing and contained in `ambient`.
pub(crate) fn check_nested(chain: &[SiteSet], ambient: &SiteSet) -> Result<()> {
    if chain.is_empty() {
        return Err(Error::InvalidInput("empty chain".into()));
    }
    if chain.windows(2).any(|w| !w[0].is_subset_of(&w[1])) {
        return Err(Error::NotSubset);
    }
    if !chain.last().expect("nonempty").is_subset_of(ambient) {
        return Err(Error::NotSubset);
    }
    Ok(())
}

/// Projects `f` onto every window of a nested chain.
pub fn build_chain<T: Scalar>(
    system: &System,
    f: &FnTable<T>,
    chain: &[SiteSet],
    mu: &ProductMeasure<T>,
) -> Result<CoLocalChain<T>> {
    check_nested(chain, f.sites())?;
    let tables = chain
        .iter()
        .map(|w| conditional_expectation(f, &system.space(w)?, mu))
        .collect::<Result<_>>()?;
    Ok(CoLocalChain {
        windows: chain.to_vec(),
        tables,
        measure: mu.clone(),
    })
}
