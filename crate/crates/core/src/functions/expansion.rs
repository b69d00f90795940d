use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measure::{conditional_expectation, Measure, ProductMeasure};
use crate::scalar::Scalar;
use crate::state_space::{Locale, SiteSet, System};

use super::FnTable;

/// The unique decomposition `f = Σ_{A ⊂ Λ} f_A` with `π^{Λ'} f_A ≡ 0` whenever `A ⊄ Λ'`.
///
/// Components are keyed by the bitmask of `A` over the positions of `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<T> {
    pub sites: SiteSet,
    pub components: BTreeMap<u64, FnTable<T>>,
}

impl<T: Scalar> Expansion<T> {
    pub fn component(&self, subset: &SiteSet) -> Result<&FnTable<T>> {
        let mask = self.sites.mask_of(subset)?;
        Ok(&self.components[&mask])
    }

    /// Components that are not identically zero.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, &FnTable<T>)> {
        self.components
            .iter()
            .filter(|(_, t)| !t.is_zero())
            .map(|(&m, t)| (m, t))
    }

    /// `Σ_A f_A`, lifted to `Λ`.
    pub fn reconstruct(&self, system: &System) -> Result<FnTable<T>> {
        let space = system.space(&self.sites)?;
        self.components
            .values()
            .try_fold(FnTable::zero(space.clone()), |acc, c| {
                acc.add(&c.lift(&space)?)
            })
    }
}

fn subsets_by_size(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Builds the Martingale expansion of `f` under a product measure.
///
/// Subsets are visited by increasing size; each component is
/// `f_A = π^A f − Σ_{B ⊊ A} f_B`.
pub fn expand_martingale<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    f: &FnTable<T>,
    mu: &M,
) -> Result<Expansion<T>> {
    let product: &ProductMeasure<T> = mu.as_product().ok_or(Error::NonProductMeasure)?;
    let sites = f.sites().clone();
    let cap = system.caps().subset_cap;
    if sites.len() > cap {
        return Err(Error::TooManySubsets {
            sites: sites.len(),
            cap,
        });
    }
    let mut components: BTreeMap<u64, FnTable<T>> = BTreeMap::new();
    for mask in subsets_by_size(sites.len()) {
        let subset = sites.subset_by_mask(mask);
        let space = system.space(&subset)?;
        let mut comp = conditional_expectation(f, &space, product)?;
        for (&sub_mask, table) in &components {
            if sub_mask & mask == sub_mask && sub_mask != mask {
                comp = comp.sub(&table.lift(&space)?)?;
            }
        }
        components.insert(mask, comp);
    }
    Ok(Expansion { sites, components })
}

/// Minimal `R` such that every component supported on a set of diameter
/// greater than `R` vanishes. Always finite on a finite connected locale.
pub fn uniform_radius<T: Scalar>(expansion: &Expansion<T>, locale: &Locale) -> Result<usize> {
    expansion
        .nonzero()
        .map(|(mask, _)| {
            let subset = expansion.sites.subset_by_mask(mask);
            if subset.is_empty() {
                Ok(0)
            } else {
                locale.site_diameter(&subset)
            }
        })
        .try_fold(0, |acc, d| Ok(acc.max(d?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{StateMeasure, WindowMeasure};
    use crate::scalar::Q;
    use crate::state_space::{Caps, Interaction};

    fn sys() -> System {
        System::new(
            Locale::lattice_window(1, 2).unwrap(),
            Interaction::exclusion(),
        )
    }

    fn half() -> ProductMeasure {
        ProductMeasure::homogeneous(StateMeasure::bernoulli(Q::ratio(1, 2)).unwrap())
    }

    #[test]
    fn worked_pair_example() {
        let sys = sys();
        let xy = sys.space(&SiteSet::new([0, 1])).unwrap();
        let f: FnTable = FnTable::occupation_product(xy.clone(), &[0, 1]).unwrap();
        let exp = expand_martingale(&sys, &f, &half()).unwrap();
        let h = Q::ratio(1, 2);
        let q = Q::ratio(1, 4);
        assert_eq!(
            exp.component(&SiteSet::empty()).unwrap().values(),
            std::slice::from_ref(&q)
        );
        let fx = exp.component(&SiteSet::new([0])).unwrap();
        assert_eq!(fx.values(), &[-q.clone(), q.clone()]);
        let fy = exp.component(&SiteSet::new([1])).unwrap();
        assert_eq!(fy.values(), &[-q.clone(), q.clone()]);
        let fxy = exp.component(&SiteSet::new([0, 1])).unwrap();
        let expected = FnTable::from_fn(xy, |d| {
            (Q::from_int(d[0] as i64) - h.clone()) * (Q::from_int(d[1] as i64) - h.clone())
        });
        assert_eq!(fxy, &expected);
        assert_eq!(exp.reconstruct(&sys).unwrap(), f);
        assert_eq!(uniform_radius(&exp, sys.locale()).unwrap(), 1);
    }

    #[test]
    fn constant_has_only_empty_component() {
        let sys = sys();
        let space = sys.space(&SiteSet::new([-1, 0, 2])).unwrap();
        let f = FnTable::constant(space, Q::from_int(5));
        let exp = expand_martingale(&sys, &f, &half()).unwrap();
        let nz: Vec<u64> = exp.nonzero().map(|(m, _)| m).collect();
        assert_eq!(nz, vec![0]);
        assert_eq!(uniform_radius(&exp, sys.locale()).unwrap(), 0);
    }

    #[test]
    fn caps_and_measure_checks() {
        let sys = System::new(
            Locale::lattice_window(1, 10).unwrap(),
            Interaction::exclusion(),
        )
        .with_caps(Caps {
            state_cap: 1 << 20,
            subset_cap: 4,
        });
        let space = sys.space(&SiteSet::new(0..5)).unwrap();
        let f: FnTable = FnTable::zero(space.clone());
        assert_eq!(
            expand_martingale(&sys, &f, &half()),
            Err(Error::TooManySubsets { sites: 5, cap: 4 })
        );
        let small = sys.space(&SiteSet::new([0])).unwrap();
        let mu = WindowMeasure::new(small.clone(), vec![Q::ratio(1, 2), Q::ratio(1, 2)]).unwrap();
        assert_eq!(
            expand_martingale(&sys, &FnTable::zero(small), &mu),
            Err(Error::NonProductMeasure)
        );
    }
}
