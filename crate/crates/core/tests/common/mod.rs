#![allow(dead_code)]

use colocal::{
    ConfigSpace, Edge, FnTable, Interaction, Locale, ProductMeasure, Scalar, SiteSet, StateMeasure,
    System, Q,
};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

pub fn half() -> StateMeasure {
    StateMeasure::bernoulli(q(1, 2)).unwrap()
}

pub fn path(n: i64) -> Locale {
    let edges = (0..n - 1).flat_map(|i| [Edge::new(i, i + 1), Edge::new(i + 1, i)]);
    Locale::new(0..n, edges, None).unwrap()
}

pub fn triangle() -> Locale {
    let edges = [(0, 1), (1, 2), (2, 0)]
        .into_iter()
        .flat_map(|(a, b)| [Edge::new(a, b), Edge::new(b, a)]);
    Locale::new([0, 1, 2], edges, None).unwrap()
}

pub fn exclusion_on(locale: Locale) -> System {
    System::new(locale, Interaction::exclusion())
}

pub fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

pub fn probability() -> impl Strategy<Value = Q> {
    (2i64..=8).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

pub fn table(space: ConfigSpace) -> impl Strategy<Value = FnTable> {
    proptest::collection::vec(rational(), space.size())
        .prop_map(move |v| FnTable::new(space.clone(), v).unwrap())
}

/// A subset of `sites` from a bit mask.
pub fn subset(sites: &SiteSet, mask: u64) -> SiteSet {
    sites.subset_by_mask(mask & ((1 << sites.len()) - 1))
}

pub fn per_site(sites: &SiteSet, ps: &[Q]) -> ProductMeasure {
    ProductMeasure::PerSite(
        sites
            .iter()
            .zip(ps)
            .map(|(s, p)| (s, StateMeasure::bernoulli(p.clone()).unwrap()))
            .collect(),
    )
}

pub fn int(n: i64) -> Q {
    Q::from_int(n)
}
