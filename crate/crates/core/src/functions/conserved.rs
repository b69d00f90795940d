use crate::error::Result;
use crate::linalg::Matrix;
use crate::measure::StateMeasure;
use crate::scalar::Scalar;
use crate::state_space::{ConfigSpace, Interaction, Locale, SiteSet, System};

use super::FnTable;

/// A `ν`-regularized conserved quantity `ξ: S → R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservedQuantity<T> {
    pub xi: Vec<T>,
}

impl<T: Scalar> ConservedQuantity<T> {
    pub fn new(xi: Vec<T>) -> Self {
        ConservedQuantity { xi }
    }

    /// Whether `ξ(s1') + ξ(s2') = ξ(s1) + ξ(s2)` for every pair and `E_ν[ξ] = 0`.
    pub fn is_conserved(&self, interaction: &Interaction, nu: &StateMeasure<T>) -> bool {
        let xi = &self.xi;
        xi.len() == interaction.num_states()
            && nu.expectation(xi).is_negligible()
            && interaction.changed_pairs().all(|((a, b), (c, d))| {
                (xi[c].clone() + xi[d].clone()).approx_eq(&(xi[a].clone() + xi[b].clone()))
            })
    }

    /// `ξ^Λ = Σ_{x ∈ Λ} ξ(η_x)`.
    pub fn colocal(&self, space: &ConfigSpace) -> FnTable<T> {
        let n = space.sites().len();
        FnTable::from_fn(space.clone(), |d| {
            (0..n).map(|p| self.xi[d[p]].clone()).sum()
        })
    }
}

/// Basis of the `ν`-regularized conserved quantities.
///
/// The conservation equations are solved with `ξ(base) = 0` (reduced row
/// echelon form, one basis vector per free state set to 1), then each vector
/// is recentred to `E_ν[ξ] = 0`. Constants always solve the conservation
/// equations, so this recentring is a bijection onto the mean-zero solutions.
pub fn conserved_quantities<T: Scalar>(
    interaction: &Interaction,
    nu: &StateMeasure<T>,
) -> Vec<ConservedQuantity<T>> {
    let n = interaction.num_states();
    let mut rows: Vec<Vec<T>> = interaction
        .changed_pairs()
        .map(|((a, b), (c, d))| {
            let mut row = vec![T::zero(); n];
            for (s, sign) in [(c, 1), (d, 1), (a, -1), (b, -1)] {
                row[s] = row[s].clone() + T::from_int(sign);
            }
            row
        })
        .filter(|row| row.iter().any(|v| !v.is_negligible()))
        .collect();
    let mut base_row = vec![T::zero(); n];
    base_row[interaction.base()] = T::one();
    rows.push(base_row);
    Matrix::from_rows(n, rows)
        .nullspace()
        .into_iter()
        .map(|v| {
            let mean = nu.expectation(&v);
            ConservedQuantity::new(v.into_iter().map(|x| x - mean.clone()).collect())
        })
        .collect()
}

/// `ξ^Λ` as a table.
pub fn conserved_colocal<T: Scalar>(xi: &ConservedQuantity<T>, space: &ConfigSpace) -> FnTable<T> {
    xi.colocal(space)
}

/// A pair of configurations with equal conserved totals in different components.
#[derive(Debug, Clone, PartialEq)]
pub struct IqWitness<T> {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub totals: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqLocaleReport<T> {
    pub sites: SiteSet,
    pub configurations: usize,
    pub components: usize,
    pub level_sets: usize,
    pub holds: bool,
    pub witnesses: Vec<IqWitness<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IqReport<T> {
    pub basis_size: usize,
    pub holds: bool,
    pub locales: Vec<IqLocaleReport<T>>,
}

/// Refutes irreducible quantification on a family of finite locales.
///
/// On each locale, configurations are grouped by their conserved totals
/// `(ξ_X(η))_ξ`; every group must lie inside a single component of the
/// transition graph. One witness is reported per split group.
pub fn check_iq<T: Scalar>(
    interaction: &Interaction,
    nu: &StateMeasure<T>,
    locales: &[Locale],
) -> Result<IqReport<T>> {
    let basis = conserved_quantities(interaction, nu);
    let mut reports = Vec::new();
    for locale in locales {
        let system = System::new(locale.clone(), interaction.clone());
        let graph = system.transition_graph(locale.sites())?;
        let space = graph.space();
        let comps = graph.components();
        let totals: Vec<FnTable<T>> = basis.iter().map(|xi| xi.colocal(space)).collect();
        let key = |i: usize| -> Vec<T> { totals.iter().map(|t| t.value(i).clone()).collect() };
        let mut order: Vec<usize> = (0..space.size()).collect();
        order.sort_by(|&a, &b| {
            key(a)
                .partial_cmp(&key(b))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for idx in order {
            match groups.last_mut() {
                Some(g) if key(g[0]).iter().zip(key(idx)).all(|(a, b)| a.approx_eq(&b)) => {
                    g.push(idx)
                }
                _ => groups.push(vec![idx]),
            }
        }
        let mut witnesses = Vec::new();
        for g in &groups {
            let first = *g.iter().min().expect("nonempty");
            let c = comps.labels[first];
            let mut others: Vec<usize> = g
                .iter()
                .copied()
                .filter(|&i| comps.labels[i] != c)
                .collect();
            others.sort();
            if let Some(&second) = others.first() {
                witnesses.push(IqWitness {
                    first: space.digits(first),
                    second: space.digits(second),
                    totals: key(first),
                });
            }
        }
        reports.push(IqLocaleReport {
            sites: locale.sites().clone(),
            configurations: space.size(),
            components: comps.count(),
            level_sets: groups.len(),
            holds: witnesses.is_empty(),
            witnesses,
        });
    }
    Ok(IqReport {
        basis_size: basis.len(),
        holds: reports.iter().all(|r| r.holds),
        locales: reports,
    })
}
