//! Translation-invariant closed forms on `Z^d` lattice windows.
//!
//! Functions of the form `Σ_x g_x(η_x)` (the section `θ_ρ`, the images
//! `ρ(σ)`) are handled as site sums, so they never need a table on the whole
//! window. The decomposition solves `∂θ = ω` on the patch `V = I ∪ σ^{-1} I`
//! for each generator `σ` and reads off `ρ(σ)|_I = π^I θ^V - σ(π^{σ^{-1} I} θ^V)`.
//! Elements of `Ker ∂_V` are functions of the conserved totals on `V`, which
//! cancel in that difference, so the result does not depend on which
//! potential is chosen.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{differential, kernel_basis, project_form, solve_potential, Form};
use crate::functions::{conserved_quantities, ConservedQuantity, FnTable};
use crate::linalg::Matrix;
use crate::measure::{conditional_expectation, ProductMeasure, StateMeasure};
use crate::scalar::Scalar;
use crate::state_space::lattice::{decode_point, encode_point, MAX_DIM};
use crate::state_space::{ConfigSpace, Lattice, SiteId, SiteSet, System};

/// Site sets whose lexicographically smallest point is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub dim: usize,
}

pub fn fundamental_domain(dim: usize) -> Result<FundamentalDomain> {
    check_dim(dim)?;
    Ok(FundamentalDomain { dim })
}

impl FundamentalDomain {
    pub fn contains(&self, sites: &SiteSet) -> bool {
        !sites.is_empty() && lex_min(sites, self.dim).iter().all(|&x| x == 0)
    }

    /// The translation `τ` and representative `Λ_0` with `Λ = τ Λ_0`.
    pub fn representative(&self, sites: &SiteSet) -> Result<(Vec<i64>, SiteSet)> {
        if sites.is_empty() {
            return Err(Error::EmptySet);
        }
        let tau = lex_min(sites, self.dim);
        let back: Vec<i64> = tau.iter().map(|x| -x).collect();
        Ok((tau, shift_sites(sites, &back, self.dim)))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "lattice dimension {dim} not in 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

fn lex_min(sites: &SiteSet, dim: usize) -> Vec<i64> {
    sites
        .iter()
        .map(|s| decode_point(s, dim))
        .min()
        .expect("nonempty site set")
}

fn shift_site(site: SiteId, shift: &[i64], dim: usize) -> SiteId {
    let p: Vec<i64> = decode_point(site, dim)
        .iter()
        .zip(shift)
        .map(|(x, s)| x + s)
        .collect();
    encode_point(&p)
}

fn shift_sites(sites: &SiteSet, shift: &[i64], dim: usize) -> SiteSet {
    SiteSet::new(sites.iter().map(|s| shift_site(s, shift, dim)))
}

/// `σ(f)` for a translation; site order is preserved, so values carry over unchanged.
fn shift_table<T: Scalar>(f: &FnTable<T>, shift: &[i64], dim: usize) -> Result<FnTable<T>> {
    let space = ConfigSpace::new(
        shift_sites(f.sites(), shift, dim),
        f.space().num_states(),
        usize::MAX,
    )?;
    FnTable::new(space, f.values().to_vec())
}

fn shift_form<T: Scalar>(
    system: &System,
    form: &Form<T>,
    shift: &[i64],
    dim: usize,
) -> Result<Form<T>> {
    let space = system.space(&shift_sites(form.sites(), shift, dim))?;
    Ok(form.relabel(space, |s| shift_site(s, shift, dim)))
}

fn unit(dim: usize, axis: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[axis] = 1;
    v
}

/// The box `{-r..r}^d` of a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxWindow {
    pub dim: usize,
    pub radius: i64,
}

impl BoxWindow {
    pub fn new(dim: usize, radius: i64) -> Result<Self> {
        check_dim(dim)?;
        if radius < 0 {
            return Err(Error::WindowTooSmall(format!("negative radius {radius}")));
        }
        Ok(BoxWindow { dim, radius })
    }

    pub fn sites(&self) -> SiteSet {
        let lattice = Lattice::window(self.dim, self.radius).expect("checked");
        SiteSet::new(lattice.points().iter().map(|p| encode_point(p)))
    }

    /// Sites at distance at least `margin` from the outside.
    pub fn interior(&self, margin: i64) -> Result<BoxWindow> {
        if margin < 1 || margin > self.radius {
            return Err(Error::WindowTooSmall(format!(
                "radius {} leaves no interior at margin {margin}",
                self.radius
            )));
        }
        BoxWindow::new(self.dim, self.radius - margin)
    }
}

fn lattice_dim(system: &System) -> Result<usize> {
    system
        .locale()
        .lattice()
        .map(|l| l.dim)
        .ok_or_else(|| Error::InvalidInput("invariant forms need a lattice locale".into()))
}

/// `ρ: Z^d → H^0` with `ρ(σ_i) = Σ_j c_ij ξ_{j,X}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle<T> {
    basis: Vec<ConservedQuantity<T>>,
    coefficients: Vec<Vec<T>>,
}

impl<T: Scalar> Cocycle<T> {
    /// `coefficients[i][j]` is the coefficient of `ξ_j` in `ρ(σ_i)`.
    pub fn new(basis: Vec<ConservedQuantity<T>>, coefficients: Vec<Vec<T>>) -> Result<Self> {
        check_dim(coefficients.len())?;
        if let Some(first) = basis.first() {
            if basis.iter().any(|b| b.xi.len() != first.xi.len()) {
                return Err(Error::InvalidInput(
                    "conserved quantities of different lengths".into(),
                ));
            }
        }
        if coefficients.iter().any(|row| row.len() != basis.len()) {
            return Err(Error::InvalidInput(format!(
                "each generator needs {} coefficients",
                basis.len()
            )));
        }
        Ok(Cocycle {
            basis,
            coefficients,
        })
    }

    pub fn zero(dim: usize, basis: Vec<ConservedQuantity<T>>) -> Result<Self> {
        let row = vec![T::zero(); basis.len()];
        Cocycle::new(basis, vec![row; dim])
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn basis(&self) -> &[ConservedQuantity<T>] {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Vec<T>] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients
            .iter()
            .flatten()
            .all(Scalar::is_negligible)
    }

    /// `ρ(τ)` as a single-site function `Σ_i τ_i Σ_j c_ij ξ_j`.
    pub fn image(&self, tau: &[i64]) -> Vec<T> {
        let n = self.basis.first().map_or(0, |b| b.xi.len());
        let mut out = vec![T::zero(); n];
        for (t, row) in tau.iter().zip(&self.coefficients) {
            if *t == 0 {
                continue;
            }
            for (c, b) in row.iter().zip(&self.basis) {
                let w = T::from_int(*t) * c.clone();
                for (o, x) in out.iter_mut().zip(&b.xi) {
                    *o = o.clone() + w.clone() * x.clone();
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.basis != other.basis || self.dim() != other.dim() {
            return Err(Error::InvalidInput("cocycles over different bases".into()));
        }
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Cocycle {
            basis: self.basis.clone(),
            coefficients,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Cocycle {
            basis: self.basis.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
                .collect(),
        }
    }

    fn check(&self, system: &System) -> Result<usize> {
        let dim = lattice_dim(system)?;
        if dim != self.dim() {
            return Err(Error::InvalidInput(format!(
                "cocycle has {} generators on a {dim}-dimensional lattice",
                self.dim()
            )));
        }
        let interaction = system.interaction();
        for b in &self.basis {
            if b.xi.len() != interaction.num_states() {
                return Err(Error::InvalidInput(
                    "conserved quantity has the wrong number of states".into(),
                ));
            }
            let conserved = interaction.changed_pairs().all(|((a, c), (a2, c2))| {
                (b.xi[a2].clone() + b.xi[c2].clone())
                    .approx_eq(&(b.xi[a].clone() + b.xi[c].clone()))
            });
            if !conserved {
                return Err(Error::InvalidInput(
                    "cocycle image is not a conserved quantity".into(),
                ));
            }
        }
        Ok(dim)
    }

    /// Site terms of `θ_ρ` on `sites`: `⟨x, c⟩ ξ(η_x)` for every `x`.
    fn theta_terms(&self, sites: &SiteSet) -> Vec<(SiteId, Vec<T>)> {
        sites
            .iter()
            .map(|s| (s, self.image(&decode_point(s, self.dim()))))
            .collect()
    }
}

/// `Σ_x g_x(η_x)` over the sites of `space` that carry a term.
fn site_sum_table<T: Scalar>(space: &ConfigSpace, terms: &[(SiteId, Vec<T>)]) -> FnTable<T> {
    let placed: Vec<(usize, &[T])> = terms
        .iter()
        .filter_map(|(s, g)| space.sites().position(*s).map(|p| (p, g.as_slice())))
        .collect();
    FnTable::from_fn(space.clone(), |d| {
        placed.iter().map(|(p, g)| g[d[*p]].clone()).sum()
    })
}

/// `θ_ρ` truncated to `window`.
pub fn theta_from_cocycle<T: Scalar>(
    system: &System,
    rho: &Cocycle<T>,
    window: &SiteSet,
) -> Result<FnTable<T>> {
    rho.check(system)?;
    let space = system.space(window)?;
    Ok(site_sum_table(&space, &rho.theta_terms(window)))
}

/// `ω_ρ = ∂θ_ρ` on `window`.
pub fn omega_from_cocycle<T: Scalar>(
    system: &System,
    rho: &Cocycle<T>,
    window: &SiteSet,
) -> Result<Form<T>> {
    differential(system, &theta_from_cocycle(system, rho, window)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleCheck {
    pub interior: SiteSet,
    /// Outcome per generator.
    pub generators: Vec<bool>,
    pub holds: bool,
}

/// Checks `θ - σ(θ) = ρ(σ)` on the interior of `window` for each generator.
///
/// Both sides are restricted to the interior by dropping terms outside it,
/// which is the conditional expectation when the basis is `ν`-centred.
pub fn verify_cocycle_identity<T: Scalar>(
    system: &System,
    rho: &Cocycle<T>,
    window: BoxWindow,
    margin: i64,
) -> Result<CocycleCheck> {
    let dim = rho.check(system)?;
    let interior = window.interior(margin)?.sites();
    let generators = (0..dim)
        .map(|i| cocycle_identity_at(system, rho, window, margin, &unit(dim, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CocycleCheck {
        interior,
        holds: generators.iter().all(|&b| b),
        generators,
    })
}

/// The identity `θ - τ(θ) = ρ(τ)` for one translation `τ` with `|τ|_∞ ≤ margin`.
pub fn cocycle_identity_at<T: Scalar>(
    system: &System,
    rho: &Cocycle<T>,
    window: BoxWindow,
    margin: i64,
    tau: &[i64],
) -> Result<bool> {
    let dim = rho.check(system)?;
    if tau.len() != dim || window.dim != dim {
        return Err(Error::InvalidInput(
            "translation of the wrong dimension".into(),
        ));
    }
    let interior = window.interior(margin)?.sites();
    if tau.iter().any(|t| t.abs() > margin) {
        return Err(Error::WindowTooSmall(format!(
            "translation {tau:?} exceeds margin {margin}"
        )));
    }
    let space = system.space(&interior)?;
    let full = window.sites();
    let theta = rho.theta_terms(&full);
    let moved: Vec<(SiteId, Vec<T>)> = theta
        .iter()
        .map(|(s, g)| (shift_site(*s, tau, dim), g.clone()))
        .collect();
    let lhs = site_sum_table(&space, &theta).sub(&site_sum_table(&space, &moved))?;
    let image = rho.image(tau);
    let rhs_terms: Vec<(SiteId, Vec<T>)> = interior.iter().map(|s| (s, image.clone())).collect();
    Ok(lhs.approx_eq(&site_sum_table(&space, &rhs_terms)))
}

/// A translation-invariant co-local form, described by data from which its
/// projection onto any window can be computed.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantForm<T> {
    /// `ω^W` on a template window `W`; windows must fit inside a translate of `W`.
    Template(Form<T>),
    /// `ω_ρ = ∂θ_ρ`.
    Cocycle(Cocycle<T>),
    /// `∂g` for `g = Σ_τ τ(h)` with `h` local.
    Potential(FnTable<T>),
    Sum(Vec<(T, InvariantForm<T>)>),
}

impl<T: Scalar> InvariantForm<T> {
    /// `π^V ω` under the product measure `ν^{⊗V}`.
    pub fn restrict(
        &self,
        system: &System,
        sites: &SiteSet,
        nu: &StateMeasure<T>,
    ) -> Result<Form<T>> {
        let dim = lattice_dim(system)?;
        let space = system.space(sites)?;
        let product = ProductMeasure::homogeneous(nu.clone());
        match self {
            InvariantForm::Template(template) => {
                if sites.is_empty() {
                    return Ok(Form::zero(system, &space));
                }
                let low = lex_min(sites, dim);
                let tau = template
                    .sites()
                    .iter()
                    .map(|w| {
                        let wp = decode_point(w, dim);
                        low.iter()
                            .zip(&wp)
                            .map(|(a, b)| a - b)
                            .collect::<Vec<i64>>()
                    })
                    .find(|tau| {
                        let back: Vec<i64> = tau.iter().map(|x| -x).collect();
                        shift_sites(sites, &back, dim).is_subset_of(template.sites())
                    })
                    .ok_or_else(|| {
                        Error::WindowTooSmall(
                            "window does not fit inside a translate of the template".into(),
                        )
                    })?;
                let back: Vec<i64> = tau.iter().map(|x| -x).collect();
                let pulled =
                    project_form(system, template, &shift_sites(sites, &back, dim), &product)?;
                shift_form(system, &pulled, &tau, dim)
            }
            InvariantForm::Cocycle(rho) => omega_from_cocycle(system, rho, sites),
            InvariantForm::Potential(h) => {
                let mut shifts = BTreeSet::new();
                for v in sites.iter() {
                    let vp = decode_point(v, dim);
                    for w in h.sites().iter() {
                        let wp = decode_point(w, dim);
                        shifts.insert(vp.iter().zip(&wp).map(|(a, b)| a - b).collect::<Vec<i64>>());
                    }
                }
                let mut g = FnTable::zero(space.clone());
                for tau in shifts {
                    let back: Vec<i64> = tau.iter().map(|x| -x).collect();
                    let common = shift_sites(sites, &back, dim).intersection(h.sites());
                    let target = ConfigSpace::new(common, h.space().num_states(), usize::MAX)?;
                    let projected = conditional_expectation(h, &target, &product)?;
                    g = g.add(&shift_table(&projected, &tau, dim)?.lift(&space)?)?;
                }
                differential(system, &g)
            }
            InvariantForm::Sum(parts) => {
                let mut acc = Form::zero(system, &space);
                for (c, part) in parts {
                    acc = acc.add(&part.restrict(system, sites, nu)?.scale(c))?;
                }
                Ok(acc)
            }
        }
    }

    /// Checks `σ(ω) = ω` for each unit translation where the data can disagree.
    ///
    /// Cocycle and potential parts are invariant by construction; a template is
    /// compared with its own translate on their overlap.
    pub fn check_invariance(&self, system: &System, nu: &StateMeasure<T>) -> Result<()> {
        let dim = lattice_dim(system)?;
        match self {
            InvariantForm::Template(template) => {
                let product = ProductMeasure::homogeneous(nu.clone());
                let w = template.sites();
                for i in 0..dim {
                    let e = unit(dim, i);
                    let back: Vec<i64> = e.iter().map(|x| -x).collect();
                    let overlap = w.intersection(&shift_sites(w, &e, dim));
                    if overlap.is_empty() {
                        continue;
                    }
                    let direct = project_form(system, template, &overlap, &product)?;
                    let pulled = project_form(
                        system,
                        template,
                        &shift_sites(&overlap, &back, dim),
                        &product,
                    )?;
                    if !direct.approx_eq(&shift_form(system, &pulled, &e, dim)?) {
                        return Err(Error::NotInvariant { generator: i });
                    }
                }
                Ok(())
            }
            InvariantForm::Cocycle(rho) => rho.check(system).map(|_| ()),
            InvariantForm::Potential(_) => Ok(()),
            InvariantForm::Sum(parts) => parts
                .iter()
                .try_for_each(|(_, p)| p.check_invariance(system, nu)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Solve on `I ∪ σ^{-1} I` for each generator.
    #[default]
    Patch,
    /// Solve once on the whole window; only feasible for small windows.
    FullWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub margin: i64,
    pub strategy: Strategy,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            margin: 2,
            strategy: Strategy::Patch,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T> {
    pub cocycle: Cocycle<T>,
    pub interior: SiteSet,
    /// `ω - ω_ρ` on the interior.
    pub exact_form: Form<T>,
    /// Mean-zero potential of `exact_form`, unique up to functions of the conserved totals.
    pub potential: FnTable<T>,
    /// `ω - ω_ρ` as an invariant form.
    pub exact_part: InvariantForm<T>,
}

/// Splits an invariant closed form into `ω_ρ` and an exact remainder.
pub fn decompose_invariant_form<T: Scalar>(
    system: &System,
    omega: &InvariantForm<T>,
    window: BoxWindow,
    nu: &StateMeasure<T>,
    options: DecomposeOptions,
) -> Result<Decomposition<T>> {
    let dim = lattice_dim(system)?;
    if window.dim != dim {
        return Err(Error::InvalidInput(format!(
            "{}-dimensional window on a {dim}-dimensional lattice",
            window.dim
        )));
    }
    let interior_box = window.interior(options.margin)?;
    let interior = interior_box.sites();
    let full = window.sites();
    if !full.is_subset_of(system.locale().sites()) {
        return Err(Error::WindowTooSmall(
            "window is not contained in the locale".into(),
        ));
    }
    omega.check_invariance(system, nu)?;

    let basis = conserved_quantities(system.interaction(), nu);
    let interior_space = system.space(&interior)?;
    let columns: Vec<FnTable<T>> = basis.iter().map(|b| b.colocal(&interior_space)).collect();
    let product = ProductMeasure::homogeneous(nu.clone());

    let coefficients = (0..dim)
        .into_par_iter()
        .map(|i| {
            let e = unit(dim, i);
            let back: Vec<i64> = e.iter().map(|x| -x).collect();
            let pulled = shift_sites(&interior, &back, dim);
            let patch = match options.strategy {
                Strategy::Patch => interior.union(&pulled),
                Strategy::FullWindow => full.clone(),
            };
            let theta = solve_potential(system, &omega.restrict(system, &patch, nu)?, &product)?;
            let here = conditional_expectation(&theta, &interior_space, &product)?;
            let there = conditional_expectation(&theta, &system.space(&pulled)?, &product)?;
            let residue = here.sub(&shift_table(&there, &e, dim)?.lift(&interior_space)?)?;
            let rows: Vec<Vec<T>> = (0..interior_space.size())
                .map(|r| columns.iter().map(|c| c.value(r).clone()).collect())
                .collect();
            Matrix::from_rows(columns.len(), rows)
                .solve(residue.values())
                .ok_or(Error::ResidueNotConserved { generator: i })
        })
        .collect::<Result<Vec<_>>>()?;
    let cocycle = Cocycle::new(basis, coefficients)?;

    let exact_part = InvariantForm::Sum(vec![
        (T::one(), omega.clone()),
        (-T::one(), InvariantForm::Cocycle(cocycle.clone())),
    ]);
    let exact_form = exact_part.restrict(system, &interior, nu)?;
    let potential = solve_potential(system, &exact_form, &product)?;
    Ok(Decomposition {
        cocycle,
        interior,
        exact_form,
        potential,
        exact_part,
    })
}

/// Checks `π^I k = τ(π^{τ^{-1} I} k)` for every component indicator `k` on `V`.
///
/// This is the finite form of the statement that `G` acts trivially on
/// `Ker ∂`; it holds when kernel elements depend only on conserved totals.
pub fn trivial_action_holds<T: Scalar>(
    system: &System,
    patch: &SiteSet,
    interior: &SiteSet,
    tau: &[i64],
    nu: &StateMeasure<T>,
) -> Result<bool> {
    let dim = lattice_dim(system)?;
    let back: Vec<i64> = tau.iter().map(|x| -x).collect();
    let pulled = shift_sites(interior, &back, dim);
    if !interior.is_subset_of(patch) || !pulled.is_subset_of(patch) {
        return Err(Error::NotSubset);
    }
    let product = ProductMeasure::homogeneous(nu.clone());
    let here_space = system.space(interior)?;
    let there_space = system.space(&pulled)?;
    let kb = kernel_basis(system, patch, &product)?;
    for k in &kb.indicators {
        let here = conditional_expectation(k, &here_space, &product)?;
        let there = shift_table(
            &conditional_expectation(k, &there_space, &product)?,
            tau,
            dim,
        )?;
        if !here.approx_eq(&there) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::is_closed;
    use crate::scalar::Q;
    use crate::state_space::{Edge, Interaction, Locale};

    fn half() -> StateMeasure {
        StateMeasure::bernoulli(Q::ratio(1, 2)).unwrap()
    }

    fn lattice(dim: usize, radius: i64) -> System {
        System::new(
            Locale::lattice_window(dim, radius).unwrap(),
            Interaction::exclusion(),
        )
    }

    fn density(coeffs: Vec<i64>) -> Cocycle<Q> {
        let basis = conserved_quantities(&Interaction::exclusion(), &half());
        Cocycle::new(
            basis,
            coeffs.into_iter().map(|c| vec![Q::from_int(c)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn fundamental_domain_examples() {
        let d1 = fundamental_domain(1).unwrap();
        assert_eq!(
            d1.representative(&SiteSet::new([3])).unwrap(),
            (vec![3], SiteSet::new([0]))
        );
        assert_eq!(
            d1.representative(&SiteSet::new([2, 4])).unwrap(),
            (vec![2], SiteSet::new([0, 2]))
        );
        let d2 = fundamental_domain(2).unwrap();
        let s = SiteSet::new([encode_point(&[1, 1]), encode_point(&[1, 2])]);
        let (tau, rep) = d2.representative(&s).unwrap();
        assert_eq!(tau, vec![1, 1]);
        assert_eq!(
            rep,
            SiteSet::new([encode_point(&[0, 0]), encode_point(&[0, 1])])
        );
        assert!(d2.contains(&rep));
        assert_eq!(d1.representative(&SiteSet::empty()), Err(Error::EmptySet));
    }

    #[test]
    fn theta_and_omega_in_one_dimension() {
        let sys = lattice(1, 2);
        let rho = density(vec![1]);
        let window = SiteSet::new(-2..=2);
        let theta = theta_from_cocycle(&sys, &rho, &window).unwrap();
        let space = theta.space().clone();
        for idx in 0..space.size() {
            let expect: Q = (0..5)
                .map(|p| {
                    Q::from_int(p as i64 - 2)
                        * (Q::from_int(space.digit(idx, p) as i64) - Q::ratio(1, 2))
                })
                .sum();
            assert_eq!(theta.value(idx), &expect);
        }
        let omega = omega_from_cocycle(&sys, &rho, &window).unwrap();
        for idx in 0..space.size() {
            for n in -2..2 {
                let v = omega.value(&sys, Edge::new(n, n + 1), idx);
                let a = space.digit(idx, (n + 2) as usize) as i64;
                let b = space.digit(idx, (n + 3) as usize) as i64;
                assert_eq!(v, Q::from_int(a - b));
            }
        }
        assert!(is_closed(&sys, &omega).unwrap());
        assert!(theta_from_cocycle(&sys, &density(vec![0]), &window)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn cocycle_identity() {
        let sys = lattice(1, 4);
        let w = BoxWindow::new(1, 4).unwrap();
        assert!(
            verify_cocycle_identity(&sys, &density(vec![1]), w, 2)
                .unwrap()
                .holds
        );
        assert!(cocycle_identity_at(&sys, &density(vec![1]), w, 2, &[0]).unwrap());
        assert!(cocycle_identity_at(&sys, &density(vec![3]), w, 2, &[-2]).unwrap());
        assert!(matches!(
            verify_cocycle_identity(&sys, &density(vec![1]), BoxWindow::new(1, 1).unwrap(), 2),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn round_trip_in_one_dimension() {
        let sys = lattice(1, 4);
        let w = BoxWindow::new(1, 4).unwrap();
        for strategy in [Strategy::Patch, Strategy::FullWindow] {
            let opts = DecomposeOptions {
                margin: 2,
                strategy,
            };
            let d = decompose_invariant_form(
                &sys,
                &InvariantForm::Cocycle(density(vec![1])),
                w,
                &half(),
                opts,
            )
            .unwrap();
            assert_eq!(d.cocycle.coefficients(), &[vec![Q::from_int(1)]]);
            assert!(d.exact_form.is_zero());
            assert!(d.potential.is_zero());
        }
    }

    #[test]
    fn exact_invariant_form_has_zero_cocycle() {
        let sys = lattice(1, 4);
        let h_space = ConfigSpace::new(SiteSet::new([0, 1]), 2, usize::MAX).unwrap();
        let h: FnTable = FnTable::occupation_product(h_space, &[0, 1]).unwrap();
        let omega = InvariantForm::Potential(h);
        let d = decompose_invariant_form(
            &sys,
            &omega,
            BoxWindow::new(1, 4).unwrap(),
            &half(),
            Default::default(),
        )
        .unwrap();
        assert!(d.cocycle.is_zero());
        assert_eq!(
            d.exact_form,
            omega.restrict(&sys, &d.interior, &half()).unwrap()
        );
    }

    #[test]
    fn non_invariant_template_is_rejected() {
        let sys = lattice(1, 3);
        let space = sys.space(&SiteSet::new(-3..=3)).unwrap();
        let f: FnTable = FnTable::occupation_product(space, &[0]).unwrap();
        let template = InvariantForm::Template(differential(&sys, &f).unwrap());
        assert_eq!(
            template.check_invariance(&sys, &half()),
            Err(Error::NotInvariant { generator: 0 })
        );
    }

    #[test]
    fn kernel_is_translation_trivial() {
        let sys = lattice(1, 3);
        assert!(trivial_action_holds(
            &sys,
            &SiteSet::new(-1..=1),
            &SiteSet::new([0, 1]),
            &[1],
            &half()
        )
        .unwrap());
        let id = System::new(sys.locale().clone(), Interaction::identity(2));
        assert!(!trivial_action_holds(
            &id,
            &SiteSet::new(-1..=1),
            &SiteSet::new([0, 1]),
            &[1],
            &half()
        )
        .unwrap());
    }
}
