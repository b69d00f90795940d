mod common;

use colocal::{
    cycle_basis, differential, expectation, is_closed, kernel_basis, path_integral, project_form,
    project_form_unchecked, solve_potential, ConfigSpace, Edge, Error, FnTable, Form, Path,
    ProductMeasure, SiteSet, WindowMeasure,
};
use common::*;
use proptest::prelude::*;

fn full_space(sys: &colocal::System) -> ConfigSpace {
    sys.space(sys.locale().sites()).unwrap()
}

#[test]
fn forms_must_alternate() {
    let sys = exclusion_on(path(2));
    let space = full_space(&sys);
    let err = Form::from_fn(&sys, &space, |_, _| int(1)).unwrap_err();
    assert!(matches!(err, Error::MalformedForm(_)));
}

#[test]
fn non_ordinary_measure_is_refused() {
    let sys = exclusion_on(path(3));
    let space = full_space(&sys);
    let raw: Vec<_> = (0..8)
        .map(|i| int(1 << (space.digit(i, 1) * space.digit(i, 2))))
        .collect();
    let mu = WindowMeasure::from_unnormalized(space.clone(), raw).unwrap();
    let f = FnTable::occupation_product(space, &[0, 2]).unwrap();
    let w = differential(&sys, &f).unwrap();
    let target = SiteSet::new([0, 1]);
    assert_eq!(
        project_form(&sys, &w, &target, &mu).unwrap_err(),
        Error::NotOrdinary
    );
    let err = project_form_unchecked(&sys, &w, &target, &mu).unwrap_err();
    assert!(matches!(err, Error::MalformedForm(_)));
}

#[test]
fn potentials_are_rooted_at_the_lexicographically_smallest_configuration() {
    let sys = exclusion_on(path(2));
    let space = full_space(&sys);
    let f = FnTable::occupation_product(space.clone(), &[0]).unwrap();
    let w = differential(&sys, &f).unwrap();
    let g = solve_potential(&sys, &w, &ProductMeasure::homogeneous(half())).unwrap();
    let at = |d: [usize; 2]| g.value(space.index_of(&d)).clone();
    assert_eq!(at([0, 1]), q(-1, 4));
    assert_eq!(at([1, 0]), q(3, 4));
    assert_eq!(at([0, 0]), q(-1, 4));
}

#[test]
fn single_edge_dimensions() {
    let sys = exclusion_on(path(2));
    let d = kernel_basis::<colocal::Q, _>(
        &sys,
        sys.locale().sites(),
        &ProductMeasure::homogeneous(half()),
    )
    .unwrap()
    .dimensions();
    assert_eq!(
        (
            d.configurations,
            d.components,
            d.dim_c0,
            d.dim_kernel_c0,
            d.dim_z1
        ),
        (4, 3, 3, 2, 1)
    );
}

#[test]
fn triangle_cycle_basis_is_not_empty() {
    let sys = exclusion_on(triangle());
    let cycles = cycle_basis(&sys, sys.locale().sites()).unwrap();
    let space = full_space(&sys);
    assert!(!cycles.is_empty());
    assert!(cycles.iter().all(|c| c.is_closed(&sys, &space).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_forms_round_trip(f in table(full_space(&exclusion_on(triangle()))), p in probability()) {
        let sys = exclusion_on(triangle());
        let mu = ProductMeasure::homogeneous(colocal::StateMeasure::bernoulli(p).unwrap());
        let w = differential(&sys, &f).unwrap();
        prop_assert!(is_closed(&sys, &w).unwrap());
        let g = solve_potential(&sys, &w, &mu).unwrap();
        prop_assert_eq!(&differential(&sys, &g).unwrap(), &w);
        prop_assert!(expectation(&g, &mu).unwrap() == int(0));
        for c in cycle_basis(&sys, sys.locale().sites()).unwrap() {
            prop_assert_eq!(path_integral(&sys, &w, &c).unwrap(), int(0));
        }
    }

    #[test]
    fn reversal_negates_integrals(f in table(full_space(&exclusion_on(path(4)))), start in 0usize..16, hops in proptest::collection::vec(0i64..3, 1..8)) {
        let sys = exclusion_on(path(4));
        let space = full_space(&sys);
        let w = differential(&sys, &f).unwrap().scale(&int(2));
        let mut cur = start;
        let mut edges = Vec::new();
        for &h in &hops {
            let (a, b) = (h as usize, h as usize + 1);
            if space.digit(cur, a) != space.digit(cur, b) {
                let (s, t) = (space.digit(cur, a), space.digit(cur, b));
                cur = space.with_digit(space.with_digit(cur, a, t), b, s);
                edges.push(Edge::new(h, h + 1));
            }
        }
        let path = Path::new(start, edges);
        let reversed = path.reversed(&sys, &space).unwrap();
        prop_assert_eq!(path_integral(&sys, &w, &path).unwrap(), -path_integral(&sys, &w, &reversed).unwrap());
        let end = *path.configurations(&sys, &space).unwrap().last().unwrap();
        prop_assert_eq!(path_integral(&sys, &w, &path).unwrap(), f.value(end).clone() * int(2) - f.value(start).clone() * int(2));
    }

    #[test]
    fn projection_commutes_with_differential(f in table(full_space(&exclusion_on(path(4)))), ps in proptest::collection::vec(probability(), 4), mask in any::<u64>()) {
        let sys = exclusion_on(path(4));
        let mu = per_site(sys.locale().sites(), &ps);
        let target = subset(sys.locale().sites(), mask);
        let small = sys.space(&target).unwrap();
        let lhs = project_form(&sys, &differential(&sys, &f).unwrap(), &target, &mu).unwrap();
        let rhs = differential(&sys, &colocal::conditional_expectation(&f, &small, &mu).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_vectors_are_centred_and_closed(p in probability(), n in 2i64..5) {
        let sys = exclusion_on(path(n));
        let mu = ProductMeasure::homogeneous(colocal::StateMeasure::bernoulli(p).unwrap());
        let kb = kernel_basis(&sys, sys.locale().sites(), &mu).unwrap();
        for v in &kb.mean_zero {
            prop_assert_eq!(expectation(v, &mu).unwrap(), int(0));
            prop_assert!(differential(&sys, v).unwrap().is_zero());
        }
        let d = kb.dimensions();
        prop_assert_eq!(d.dim_z1 + d.dim_kernel_c0, d.dim_c0);
    }
}
