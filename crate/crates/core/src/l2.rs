//! `L²(μ)` norms and Martingale chains.

use crate::error::Result;
use crate::functions::{build_chain, FnTable};
use crate::measure::{inner, Measure, ProductMeasure};
use crate::scalar::Scalar;
use crate::state_space::{SiteSet, System};

/// `‖f‖²_μ` exactly, with its square root as a float.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Norm<T> {
    pub squared: T,
    pub root: f64,
}

impl<T: Scalar> L2Norm<T> {
    fn new(squared: T) -> Self {
        let root = squared.to_f64().max(0.0).sqrt();
        L2Norm { squared, root }
    }
}

pub fn l2_norm<T: Scalar, M: Measure<T> + ?Sized>(f: &FnTable<T>, mu: &M) -> Result<L2Norm<T>> {
    Ok(L2Norm::new(inner(f, f, mu)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleReport<T> {
    pub windows: Vec<SiteSet>,
    /// `‖f_n‖_μ` with `f_n = π^{Λ_n} f`.
    pub norms: Vec<L2Norm<T>>,
    /// `‖f_{n+1} - f_n‖_μ`.
    pub gaps: Vec<L2Norm<T>>,
    /// `max_n ‖f_n‖_μ`.
    pub sup_norm: L2Norm<T>,
    pub monotone: bool,
    /// `‖f_m‖² = ‖f_n‖² + ‖f_m - f_n‖²` for every `n < m`.
    pub pythagoras: bool,
    /// First index from which every later gap vanishes.
    pub stable_from: Option<usize>,
}

pub fn martingale_chain_report<T: Scalar>(
    system: &System,
    f: &FnTable<T>,
    chain: &[SiteSet],
    mu: &ProductMeasure<T>,
) -> Result<MartingaleReport<T>> {
    let built = build_chain(system, f, chain, mu)?;
    let tables = &built.tables;
    let norms: Vec<L2Norm<T>> = tables
        .iter()
        .map(|t| l2_norm(t, mu))
        .collect::<Result<_>>()?;
    let gap = |n: usize, m: usize| -> Result<L2Norm<T>> {
        let lifted = tables[n].lift(tables[m].space())?;
        l2_norm(&tables[m].sub(&lifted)?, mu)
    };
    let gaps: Vec<L2Norm<T>> = (1..tables.len())
        .map(|m| gap(m - 1, m))
        .collect::<Result<_>>()?;
    let monotone = norms
        .windows(2)
        .all(|w| w[0].squared <= w[1].squared || w[0].squared.approx_eq(&w[1].squared));
    let mut pythagoras = true;
    for m in 0..tables.len() {
        for n in 0..m {
            let g = gap(n, m)?;
            let sum = norms[n].squared.clone() + g.squared;
            pythagoras &= sum.approx_eq(&norms[m].squared);
        }
    }
    let sup_norm = norms.iter().fold(L2Norm::new(T::zero()), |best, n| {
        if n.squared > best.squared {
            n.clone()
        } else {
            best
        }
    });
    let stable_from =
        (0..tables.len()).find(|&n| gaps[n..].iter().all(|g| g.squared.is_negligible()));
    Ok(MartingaleReport {
        windows: chain.to_vec(),
        norms,
        gaps,
        sup_norm,
        monotone,
        pythagoras,
        stable_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::StateMeasure;
    use crate::scalar::Q;
    use crate::state_space::{Interaction, Locale};

    fn half() -> ProductMeasure {
        ProductMeasure::homogeneous(StateMeasure::bernoulli(Q::ratio(1, 2)).unwrap())
    }

    fn sys() -> System {
        System::new(
            Locale::lattice_window(1, 2).unwrap(),
            Interaction::exclusion(),
        )
    }

    #[test]
    fn norm_examples() {
        let sys = sys();
        let space = sys.space(&SiteSet::new([0, 1])).unwrap();
        let x: FnTable = FnTable::occupation_product(space.clone(), &[0]).unwrap();
        assert_eq!(l2_norm(&x, &half()).unwrap().squared, Q::ratio(1, 2));
        let xy: FnTable = FnTable::occupation_product(space.clone(), &[0, 1]).unwrap();
        assert_eq!(l2_norm(&xy, &half()).unwrap().squared, Q::ratio(1, 4));
        assert_eq!(l2_norm(&xy, &half()).unwrap().root, 0.5);
        assert_eq!(
            l2_norm(&FnTable::zero(space), &half()).unwrap().squared,
            Q::from_int(0)
        );
    }

    #[test]
    fn chain_examples() {
        let sys = sys();
        let space = sys.space(&SiteSet::new([0, 1])).unwrap();
        let f: FnTable = FnTable::occupation_product(space.clone(), &[0, 1]).unwrap();
        let chain = [SiteSet::new([0]), SiteSet::new([0, 1])];
        let r = martingale_chain_report(&sys, &f, &chain, &half()).unwrap();
        let sq: Vec<Q> = r.norms.iter().map(|n| n.squared.clone()).collect();
        assert_eq!(sq, vec![Q::ratio(1, 8), Q::ratio(1, 4)]);
        assert_eq!(r.gaps[0].squared, Q::ratio(1, 8));
        assert!(r.monotone && r.pythagoras);
        assert_eq!(r.sup_norm.squared, Q::ratio(1, 4));

        let long = [
            SiteSet::new([0, 1]),
            SiteSet::new([-1, 0, 1]),
            SiteSet::new(-2..=2),
        ];
        let big = sys.space(&long[2]).unwrap();
        let local = f.lift(&big).unwrap();
        let r = martingale_chain_report(&sys, &local, &long, &half()).unwrap();
        assert_eq!(r.stable_from, Some(0));
        assert!(r.norms.iter().all(|n| n.squared == Q::ratio(1, 4)));

        let c = FnTable::constant(big, Q::from_int(3));
        let r = martingale_chain_report(&sys, &c, &long, &half()).unwrap();
        assert!(r.norms.iter().all(|n| n.squared == Q::from_int(9)));
    }
}
