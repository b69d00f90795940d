//! Benchmark fixtures.

use colocal::{
    conserved_quantities, Cocycle, ConfigSpace, Edge, FnTable, Interaction, InvariantForm, Locale,
    ProductMeasure, Scalar, SiteSet, StateMeasure, System, Q,
};

pub fn half() -> StateMeasure {
    StateMeasure::bernoulli(Q::ratio(1, 2)).unwrap()
}

pub fn path_system(n: i64) -> System {
    let edges = (0..n - 1).flat_map(|i| [Edge::new(i, i + 1), Edge::new(i + 1, i)]);
    System::new(
        Locale::new(0..n, edges, None).unwrap(),
        Interaction::exclusion(),
    )
}

pub fn lattice_system(dim: usize, radius: i64) -> System {
    System::new(
        Locale::lattice_window(dim, radius).unwrap(),
        Interaction::exclusion(),
    )
}

pub fn product() -> ProductMeasure {
    ProductMeasure::homogeneous(half())
}

/// A deterministic dense function on `space`.
pub fn dense_table(space: &ConfigSpace) -> FnTable {
    FnTable::from_index_fn(space.clone(), |i| {
        Q::ratio(((i * 7919) % 23) as i64 - 11, 1 + (i % 5) as i64)
    })
}

pub fn full_space(system: &System) -> ConfigSpace {
    system.space(system.locale().sites()).unwrap()
}

/// Density gradient plus a nearest-neighbour potential.
pub fn mixture(dim: usize) -> InvariantForm<Q> {
    let basis = conserved_quantities(&Interaction::exclusion(), &half());
    let coefs = (0..dim).map(|i| vec![Q::from_int(i as i64 + 1)]).collect();
    let rho = Cocycle::new(basis, coefs).unwrap();
    let pair = ConfigSpace::new(SiteSet::new([0, 1]), 2, usize::MAX).unwrap();
    let h = FnTable::occupation_product(pair, &[0, 1]).unwrap();
    let one = Q::from_int(1);
    InvariantForm::Sum(vec![
        (one.clone(), InvariantForm::Cocycle(rho)),
        (one, InvariantForm::Potential(h)),
    ])
}
