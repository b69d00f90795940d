mod common;

use colocal::lattice::encode_point;
use colocal::{
    cocycle_identity_at, conserved_quantities, decompose_invariant_form, differential,
    fundamental_domain, omega_from_cocycle, theta_from_cocycle, verify_cocycle_identity, BoxWindow,
    Cocycle, ConfigSpace, DecomposeOptions, Error, FnTable, Interaction, InvariantForm, Locale,
    SiteSet, Strategy, System, Q,
};
use common::*;
use proptest::prelude::*;

fn line() -> System {
    System::new(
        Locale::lattice_window(1, 6).unwrap(),
        Interaction::exclusion(),
    )
}

fn rho(coefs: Vec<Vec<Q>>) -> Cocycle<Q> {
    Cocycle::new(
        conserved_quantities(&Interaction::exclusion(), &half()),
        coefs,
    )
    .unwrap()
}

#[test]
fn interior_needs_room() {
    let w = BoxWindow::new(1, 1).unwrap();
    assert!(matches!(w.interior(2), Err(Error::WindowTooSmall(_))));
    assert!(matches!(w.interior(0), Err(Error::WindowTooSmall(_))));
}

#[test]
fn empty_sets_have_no_representative() {
    assert_eq!(
        fundamental_domain(2)
            .unwrap()
            .representative(&SiteSet::empty())
            .unwrap_err(),
        Error::EmptySet
    );
}

#[test]
fn cocycle_forms_are_exact_on_finite_windows() {
    let sys = line();
    let r = rho(vec![vec![int(3)]]);
    let sites = BoxWindow::new(1, 3).unwrap().sites();
    let theta = theta_from_cocycle(&sys, &r, &sites).unwrap();
    assert_eq!(
        differential(&sys, &theta).unwrap(),
        omega_from_cocycle(&sys, &r, &sites).unwrap()
    );
}

#[test]
fn strategies_agree() {
    let sys = line();
    let space = ConfigSpace::new(SiteSet::new([0, 1]), 2, usize::MAX).unwrap();
    let h = FnTable::from_fn(space, |d| int((d[0] * 5 + d[1] * 2) as i64));
    let form = InvariantForm::Sum(vec![
        (int(2), InvariantForm::Cocycle(rho(vec![vec![int(1)]]))),
        (int(1), InvariantForm::Potential(h)),
    ]);
    let w = BoxWindow::new(1, 4).unwrap();
    let run = |strategy| {
        decompose_invariant_form(
            &sys,
            &form,
            w,
            &half(),
            DecomposeOptions {
                strategy,
                ..Default::default()
            },
        )
        .unwrap()
    };
    let (a, b) = (run(Strategy::Patch), run(Strategy::FullWindow));
    assert_eq!(a.cocycle.coefficients(), b.cocycle.coefficients());
    assert_eq!(a.exact_form, b.exact_form);
    assert_eq!(a.cocycle.coefficients(), [vec![int(2)]]);
}

#[test]
fn translated_templates_are_not_invariant() {
    let sys = line();
    let space = sys.space(&BoxWindow::new(1, 4).unwrap().sites()).unwrap();
    let f = FnTable::occupation_product(space, &[0]).unwrap();
    let template = InvariantForm::Template(differential(&sys, &f).unwrap());
    let err = decompose_invariant_form(
        &sys,
        &template,
        BoxWindow::new(1, 4).unwrap(),
        &half(),
        Default::default(),
    );
    assert!(matches!(err, Err(Error::NotInvariant { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn decomposition_recovers_random_mixtures(c in rational(), h in table(ConfigSpace::new(SiteSet::new([0, 1]), 2, usize::MAX).unwrap())) {
        let sys = line();
        let potential = InvariantForm::Potential(h);
        let form = InvariantForm::Sum(vec![
            (int(1), InvariantForm::Cocycle(rho(vec![vec![c.clone()]]))),
            (int(1), potential.clone()),
        ]);
        let d = decompose_invariant_form(&sys, &form, BoxWindow::new(1, 4).unwrap(), &half(), Default::default()).unwrap();
        prop_assert_eq!(d.cocycle.coefficients(), &[vec![c]]);
        prop_assert_eq!(&d.exact_form, &potential.restrict(&sys, &d.interior, &half()).unwrap());
    }

    #[test]
    fn cocycle_identity_holds_on_the_plane(a in rational(), b in rational(), tx in -1i64..=1, ty in -1i64..=1) {
        let sys = System::new(Locale::lattice_window(2, 4).unwrap(), Interaction::exclusion());
        let r = rho(vec![vec![a], vec![b]]);
        let w = BoxWindow::new(2, 3).unwrap();
        prop_assert!(verify_cocycle_identity(&sys, &r, w, 2).unwrap().holds);
        prop_assert!(cocycle_identity_at(&sys, &r, w, 2, &[tx, ty]).unwrap());
        let image = r.image(&[tx, ty]);
        let sum = r.image(&[1, 0]).iter().map(|v| v * int(tx)).zip(r.image(&[0, 1]).iter().map(|v| v * int(ty))).map(|(x, y)| x + y).collect::<Vec<_>>();
        prop_assert_eq!(image, sum);
    }

    #[test]
    fn representatives_sit_in_the_domain(points in proptest::collection::vec((-20i64..20, -20i64..20), 1..6)) {
        let fd = fundamental_domain(2).unwrap();
        let sites = SiteSet::new(points.iter().map(|&(x, y)| encode_point(&[x, y])));
        let (tau, rep) = fd.representative(&sites).unwrap();
        prop_assert!(fd.contains(&rep));
        let back = SiteSet::new(rep.iter().map(|s| {
            let p = colocal::lattice::decode_point(s, 2);
            encode_point(&[p[0] + tau[0], p[1] + tau[1]])
        }));
        prop_assert_eq!(back, sites);
    }
}
