//! Degree-one forms on configuration graphs.
//!
//! A [`Form`] stores `ω_e` only for the canonical orientation `e = (x, y)`
//! with `x < y`; the reverse orientation is recovered from the alternating
//! rule `ω_ē(η) = -ω_e(η^ē)` (and `0` where `η^ē = η`).

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::functions::FnTable;
use crate::measure::{conditional_expectation, expectation, is_ordinary, Measure};
use crate::scalar::Scalar;
use crate::state_space::{
    Components, ConfigSpace, Edge, GroupActable, SiteId, SiteSet, Symmetry, System, TransitionGraph,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Form<T> {
    space: ConfigSpace,
    edges: Vec<Edge>,
    tables: Vec<Vec<T>>,
}

/// A start configuration and a sequence of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<Edge>,
}

impl Path {
    pub fn new(start: usize, edges: Vec<Edge>) -> Self {
        Path { start, edges }
    }

    /// The configurations visited, starting with `start`.
    pub fn configurations(&self, system: &System, space: &ConfigSpace) -> Result<Vec<usize>> {
        let mut out = vec![self.start];
        if self.start >= space.size() {
            return Err(Error::InvalidPath(format!(
                "start {} out of range",
                self.start
            )));
        }
        let mut cur = self.start;
        for e in &self.edges {
            let pos = edge_positions(system, space, *e).map_err(|_| {
                Error::InvalidPath(format!("edge ({}, {}) not in E_Λ", e.origin, e.target))
            })?;
            let next = system.step(space, cur, pos);
            if next == cur {
                return Err(Error::InvalidPath(format!(
                    "edge ({}, {}) fixes configuration {cur}",
                    e.origin, e.target
                )));
            }
            out.push(next);
            cur = next;
        }
        Ok(out)
    }

    pub fn is_closed(&self, system: &System, space: &ConfigSpace) -> Result<bool> {
        Ok(self.configurations(system, space)?.last() == Some(&self.start))
    }

    /// The path run backwards.
    pub fn reversed(&self, system: &System, space: &ConfigSpace) -> Result<Path> {
        let configs = self.configurations(system, space)?;
        Ok(Path {
            start: *configs.last().expect("nonempty"),
            edges: self.edges.iter().rev().map(|e| e.reverse()).collect(),
        })
    }
}

fn edge_positions(system: &System, space: &ConfigSpace, e: Edge) -> Result<(usize, usize)> {
    match (
        space.sites().position(e.origin),
        space.sites().position(e.target),
    ) {
        (Some(a), Some(b)) if system.locale().has_edge(e) => Ok((a, b)),
        _ => Err(Error::EdgeOutsideSiteSet(e.origin, e.target)),
    }
}

impl<T: Scalar> Form<T> {
    /// Canonical edges `(x, y)`, `x < y`, of `E_Λ`.
    fn canonical_edges(system: &System, sites: &SiteSet) -> Vec<Edge> {
        system
            .locale()
            .edges_within(sites)
            .into_iter()
            .filter(|e| e.is_canonical())
            .collect()
    }

    pub fn zero(system: &System, space: &ConfigSpace) -> Self {
        let edges = Self::canonical_edges(system, space.sites());
        let tables = vec![vec![T::zero(); space.size()]; edges.len()];
        Form {
            space: space.clone(),
            edges,
            tables,
        }
    }

    /// Builds a form from values on every directed edge and checks all
    /// form invariants (zero on fixed points, alternating, consistent).
    pub fn from_fn(
        system: &System,
        space: &ConfigSpace,
        f: impl Fn(Edge, usize) -> T,
    ) -> Result<Self> {
        let edges = Self::canonical_edges(system, space.sites());
        let mut tables = Vec::with_capacity(edges.len());
        for &e in &edges {
            let pos = edge_positions(system, space, e)?;
            let rev = (pos.1, pos.0);
            let mut table = Vec::with_capacity(space.size());
            for idx in 0..space.size() {
                let to = system.step(space, idx, pos);
                let v = f(e, idx);
                if to == idx {
                    if !v.is_negligible() {
                        return Err(Error::MalformedForm(format!(
                            "nonzero value on fixed configuration {idx} for edge ({}, {})",
                            e.origin, e.target
                        )));
                    }
                    table.push(T::zero());
                    continue;
                }
                let back = system.step(space, to, rev);
                let alt = f(e.reverse(), to);
                if back != idx || !(alt.clone() + v.clone()).is_negligible() {
                    return Err(Error::MalformedForm(format!(
                        "not alternating at configuration {idx}, edge ({}, {}): {v} vs {alt}",
                        e.origin, e.target
                    )));
                }
                table.push(v);
            }
            tables.push(table);
        }
        let form = Form {
            space: space.clone(),
            edges,
            tables,
        };
        form.check_consistency(system)?;
        Ok(form)
    }

    /// Builds a form from its stored (canonical-orientation) tables.
    pub fn from_stored(
        system: &System,
        space: &ConfigSpace,
        tables: Vec<(Edge, Vec<T>)>,
    ) -> Result<Self> {
        let edges = Self::canonical_edges(system, space.sites());
        let mut ordered: Vec<Option<Vec<T>>> = vec![None; edges.len()];
        for (e, values) in tables {
            if !e.is_canonical() {
                return Err(Error::MalformedForm(format!(
                    "edge ({}, {}) is not in stored orientation (origin < target)",
                    e.origin, e.target
                )));
            }
            let i = edges
                .binary_search(&e)
                .map_err(|_| Error::EdgeOutsideSiteSet(e.origin, e.target))?;
            if values.len() != space.size() {
                return Err(Error::MalformedForm(format!(
                    "edge ({}, {}) has {} values, expected {}",
                    e.origin,
                    e.target,
                    values.len(),
                    space.size()
                )));
            }
            if ordered[i].replace(values).is_some() {
                return Err(Error::MalformedForm(format!(
                    "edge ({}, {}) given twice",
                    e.origin, e.target
                )));
            }
        }
        let mut tables = Vec::with_capacity(edges.len());
        for (e, t) in edges.iter().zip(ordered) {
            let t = t.unwrap_or_else(|| vec![T::zero(); space.size()]);
            let pos = edge_positions(system, space, *e)?;
            for (idx, v) in t.iter().enumerate() {
                if system.step(space, idx, pos) == idx && !v.is_negligible() {
                    return Err(Error::MalformedForm(format!(
                        "nonzero value on fixed configuration {idx} for edge ({}, {})",
                        e.origin, e.target
                    )));
                }
            }
            tables.push(t);
        }
        let form = Form {
            space: space.clone(),
            edges,
            tables,
        };
        form.check_consistency(system)?;
        Ok(form)
    }

    /// `ω_e(η) = ω_{e'}(η)` whenever `η^e = η^{e'}`.
    fn check_consistency(&self, system: &System) -> Result<()> {
        let directed = system.locale().edges_within(self.space.sites());
        let positions: Vec<(usize, usize)> = directed
            .iter()
            .map(|&e| edge_positions(system, &self.space, e))
            .collect::<Result<_>>()?;
        for idx in 0..self.space.size() {
            let mut seen: Vec<(usize, T, Edge)> = Vec::new();
            for (&e, &pos) in directed.iter().zip(&positions) {
                let to = system.step(&self.space, idx, pos);
                if to == idx {
                    continue;
                }
                let v = self.value(system, e, idx);
                if let Some((_, w, e2)) = seen.iter().find(|(t, _, _)| *t == to) {
                    if !w.approx_eq(&v) {
                        return Err(Error::MalformedForm(format!(
                            "edges ({}, {}) and ({}, {}) lead to the same configuration from {idx} with different values",
                            e2.origin, e2.target, e.origin, e.target
                        )));
                    }
                } else {
                    seen.push((to, v, e));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    /// The same tables on renamed sites; `rename` must preserve site order.
    pub(crate) fn relabel(&self, space: ConfigSpace, rename: impl Fn(SiteId) -> SiteId) -> Self {
        Form {
            space,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(rename(e.origin), rename(e.target)))
                .collect(),
            tables: self.tables.clone(),
        }
    }

    pub fn sites(&self) -> &SiteSet {
        self.space.sites()
    }

    /// Stored edges with their tables.
    pub fn stored(&self) -> impl Iterator<Item = (Edge, &[T])> {
        self.edges
            .iter()
            .copied()
            .zip(self.tables.iter().map(Vec::as_slice))
    }

    /// `ω_e(η)` for any directed edge `e ∈ E_Λ`.
    pub fn value(&self, system: &System, e: Edge, index: usize) -> T {
        if let Ok(i) = self.edges.binary_search(&e) {
            return self.tables[i][index].clone();
        }
        let i = self
            .edges
            .binary_search(&e.reverse())
            .expect("edge within the window");
        let pos = edge_positions(system, &self.space, e).expect("edge within the window");
        let to = system.step(&self.space, index, pos);
        if to == index {
            T::zero()
        } else {
            -self.tables[i][to].clone()
        }
    }

    /// `η ↦ ω_e(η)` as a table.
    pub fn edge_table(&self, system: &System, e: Edge) -> Result<FnTable<T>> {
        edge_positions(system, &self.space, e)?;
        Ok(FnTable::from_index_fn(self.space.clone(), |i| {
            self.value(system, e, i)
        }))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.sites() != other.sites() || self.edges != other.edges {
            return Err(Error::SiteSetMismatch);
        }
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Form {
            space: self.space.clone(),
            edges: self.edges.clone(),
            tables,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Form {
            space: self.space.clone(),
            edges: self.edges.clone(),
            tables: self
                .tables
                .iter()
                .map(|t| t.iter().map(|v| v.clone() * c.clone()).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.tables.iter().flatten().all(Scalar::is_negligible)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sites() == other.sites()
            && self.edges == other.edges
            && self
                .tables
                .iter()
                .flatten()
                .zip(other.tables.iter().flatten())
                .all(|(a, b)| a.approx_eq(b))
    }
}

impl<T: Scalar> GroupActable for Form<T> {
    /// `σ(ω)_{σe}(σζ) = ω_e(ζ)`.
    fn act(&self, sigma: &Symmetry, system: &System) -> Result<Self> {
        let mapping = sigma.map_sites(system.locale(), self.sites())?;
        let image = system.space(&mapping.image)?;
        let inverse = sigma.inverse();
        let back = inverse.map_sites(system.locale(), &mapping.image)?;
        let edges = Form::<T>::canonical_edges(system, image.sites());
        let mut tables = Vec::with_capacity(edges.len());
        for &e in &edges {
            let pre = inverse.apply_edge(system.locale(), e)?;
            if !system.locale().has_edge(pre) {
                return Err(Error::InvalidInput(
                    "symmetry does not preserve edges".into(),
                ));
            }
            let table = (0..image.size())
                .map(|idx| self.value(system, pre, back.map_index(&image, &self.space, idx)))
                .collect();
            tables.push(table);
        }
        Ok(Form {
            space: image,
            edges,
            tables,
        })
    }
}

/// `∂f = (∇_e f)_e` with `∇_e f(η) = f(η^e) - f(η)`.
pub fn differential<T: Scalar>(system: &System, f: &FnTable<T>) -> Result<Form<T>> {
    let space = f.space();
    let edges = Form::<T>::canonical_edges(system, space.sites());
    let tables = edges
        .iter()
        .map(|&e| {
            let pos = edge_positions(system, space, e)?;
            Ok((0..space.size())
                .map(|idx| {
                    let to = system.step(space, idx, pos);
                    f.value(to).clone() - f.value(idx).clone()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(Form {
        space: space.clone(),
        edges,
        tables,
    })
}

/// `∫_γ ω = Σ_i ω_{e_i}(η^{i-1})`.
pub fn path_integral<T: Scalar>(system: &System, form: &Form<T>, path: &Path) -> Result<T> {
    let configs = path.configurations(system, form.space())?;
    Ok(path
        .edges
        .iter()
        .zip(&configs)
        .map(|(&e, &idx)| form.value(system, e, idx))
        .sum())
}

/// Breadth-first spanning forest of a transition graph, rooted at the
/// lexicographically smallest configuration of each component.
struct SpanningForest {
    /// `(parent, edge index)` for every non-root configuration.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

/// Configuration indices sorted by their digit tuples, first site most significant.
fn lex_order(space: &ConfigSpace) -> impl Iterator<Item = usize> + '_ {
    let m = space.sites().len();
    let b = space.num_states();
    (0..space.size()).map(move |k| {
        let mut rest = k;
        let mut digits = vec![0; m];
        for p in (0..m).rev() {
            digits[p] = rest % b;
            rest /= b;
        }
        space.index_of(&digits)
    })
}

impl SpanningForest {
    fn build(graph: &TransitionGraph) -> Self {
        let n = graph.space().size();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in lex_order(graph.space()) {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(cur) = queue.pop_front() {
                order.push(cur);
                for t in graph.outgoing(cur) {
                    if !visited[t.to] {
                        visited[t.to] = true;
                        parent[t.to] = Some((cur, t.edge));
                        depth[t.to] = depth[cur] + 1;
                        queue.push_back(t.to);
                    }
                }
            }
        }
        SpanningForest {
            parent,
            depth,
            order,
        }
    }

    /// Edges leading from `ancestor` down to `node`.
    fn path_down(&self, graph: &TransitionGraph, ancestor: usize, node: usize) -> Vec<Edge> {
        let mut edges = Vec::new();
        let mut cur = node;
        while cur != ancestor {
            let (p, e) = self.parent[cur].expect("below ancestor");
            edges.push(graph.edges()[e]);
            cur = p;
        }
        edges.reverse();
        edges
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a].expect("same component").0;
            } else {
                b = self.parent[b].expect("same component").0;
            }
        }
        a
    }

    /// Fundamental cycle closed by the transition `from -e-> to`, starting at their LCA.
    fn cycle(&self, graph: &TransitionGraph, from: usize, edge: usize, to: usize) -> Path {
        let top = self.lca(from, to);
        let mut edges = self.path_down(graph, top, from);
        edges.push(graph.edges()[edge]);
        let back: Vec<Edge> = self
            .path_down(graph, top, to)
            .into_iter()
            .rev()
            .map(Edge::reverse)
            .collect();
        edges.extend(back);
        Path::new(top, edges)
    }
}

/// Solves `∂f = ω`.
///
/// Potentials are propagated along a spanning forest from the root of each
/// component (value 0); every non-forest transition is then checked. The
/// result is shifted to `E_μ[f] = 0`. A violated transition yields
/// [`Error::NotClosed`] with its fundamental cycle.
pub fn solve_potential<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    form: &Form<T>,
    mu: &M,
) -> Result<FnTable<T>> {
    let graph = system.transition_graph(form.sites())?;
    let forest = SpanningForest::build(&graph);
    let n = graph.space().size();
    let mut pot = vec![T::zero(); n];
    for &node in &forest.order {
        if let Some((p, e)) = forest.parent[node] {
            pot[node] = pot[p].clone() + form.value(system, graph.edges()[e], p);
        }
    }
    for t in graph.records() {
        let w = form.value(system, graph.edges()[t.edge], t.from);
        let mismatch = pot[t.from].clone() + w - pot[t.to].clone();
        if !mismatch.is_negligible() {
            let cycle = forest.cycle(&graph, t.from, t.edge, t.to);
            return Err(Error::NotClosed {
                start: cycle.start,
                edges: cycle.edges.iter().map(|e| e.pair()).collect(),
                integral: mismatch.to_string(),
            });
        }
    }
    let f = FnTable::new(graph.space().clone(), pot)?;
    let mean = expectation(&f, mu)?;
    Ok(f.map(|v| v.clone() - mean.clone()))
}

/// Fundamental cycles of the transition graph (one per non-forest
/// configuration pair, duplicate records collapsed).
pub fn cycle_basis(system: &System, sites: &SiteSet) -> Result<Vec<Path>> {
    let graph = system.transition_graph(sites)?;
    let forest = SpanningForest::build(&graph);
    let mut tree_pairs = BTreeSet::new();
    for (node, p) in forest.parent.iter().enumerate() {
        if let Some((parent, _)) = p {
            tree_pairs.insert((node.min(*parent), node.max(*parent)));
        }
    }
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for t in graph.records() {
        let key = (t.from.min(t.to), t.from.max(t.to));
        if tree_pairs.contains(&key) || !seen.insert(key) {
            continue;
        }
        cycles.push(forest.cycle(&graph, t.from, t.edge, t.to));
    }
    Ok(cycles)
}

/// Whether every fundamental cycle has zero integral.
pub fn is_closed<T: Scalar>(system: &System, form: &Form<T>) -> Result<bool> {
    for cycle in cycle_basis(system, form.sites())? {
        if !path_integral(system, form, &cycle)?.is_negligible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ker ∂_Λ` (component indicators) and its intersection with `C^0(S^Λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBasis<T> {
    pub components: Components,
    pub indicators: Vec<FnTable<T>>,
    /// `1_{C_i} - μ(C_i)` for all components but the last.
    pub mean_zero: Vec<FnTable<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormDimensions {
    pub configurations: usize,
    pub components: usize,
    pub dim_c0: usize,
    pub dim_kernel_c0: usize,
    pub dim_z1: usize,
}

impl<T: Scalar> KernelBasis<T> {
    /// Dimension count of `0 → Ker ∂ ∩ C^0 → C^0 → Z^1 → 0`.
    pub fn dimensions(&self) -> FormDimensions {
        let n = self.components.labels.len();
        let k = self.components.count();
        FormDimensions {
            configurations: n,
            components: k,
            dim_c0: n - 1,
            dim_kernel_c0: k - 1,
            dim_z1: (n - 1) - (k - 1),
        }
    }
}

pub fn kernel_basis<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    sites: &SiteSet,
    mu: &M,
) -> Result<KernelBasis<T>> {
    let graph = system.transition_graph(sites)?;
    let components = graph.components();
    let space = graph.space().clone();
    let indicators: Vec<FnTable<T>> = (0..components.count())
        .map(|c| {
            FnTable::from_index_fn(space.clone(), |i| {
                if components.labels[i] == c {
                    T::one()
                } else {
                    T::zero()
                }
            })
        })
        .collect();
    let mut mean_zero = Vec::new();
    for ind in indicators.iter().take(components.count().saturating_sub(1)) {
        let m = expectation(ind, mu)?;
        mean_zero.push(ind.map(|v| v.clone() - m.clone()));
    }
    Ok(KernelBasis {
        components,
        indicators,
        mean_zero,
    })
}

/// `(π^Λ ω)_e = π^Λ(ω_e)` for `e ∈ E_Λ`; requires `μ` to be ordinary on `Λ ⊂ Λ'`.
pub fn project_form<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    form: &Form<T>,
    target: &SiteSet,
    mu: &M,
) -> Result<Form<T>> {
    if !target.is_subset_of(form.sites()) {
        return Err(Error::NotSubset);
    }
    if mu.as_product().is_none() && !is_ordinary(system, mu, target, form.sites())?.ordinary {
        return Err(Error::NotOrdinary);
    }
    project_form_unchecked(system, form, target, mu)
}

/// Projects every directed edge table without checking that `μ` is ordinary.
///
/// The result is validated as a form, so non-ordinary measures typically
/// surface as [`Error::MalformedForm`].
pub fn project_form_unchecked<T: Scalar, M: Measure<T> + ?Sized>(
    system: &System,
    form: &Form<T>,
    target: &SiteSet,
    mu: &M,
) -> Result<Form<T>> {
    if !target.is_subset_of(form.sites()) {
        return Err(Error::NotSubset);
    }
    let small = system.space(target)?;
    let directed = system.locale().edges_within(target);
    let projected: Vec<(Edge, FnTable<T>)> = directed
        .iter()
        .map(|&e| {
            let table = form.edge_table(system, e)?;
            Ok((e, conditional_expectation(&table, &small, mu)?))
        })
        .collect::<Result<_>>()?;
    Form::from_fn(system, &small, |e, idx| {
        let i = directed.binary_search(&e).expect("edge within target");
        projected[i].1.value(idx).clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{ProductMeasure, StateMeasure, WindowMeasure};
    use crate::scalar::Q;
    use crate::state_space::{group_act, Interaction, Locale};

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn half() -> ProductMeasure {
        ProductMeasure::homogeneous(StateMeasure::bernoulli(Q::ratio(1, 2)).unwrap())
    }

    fn single_edge() -> System {
        let l = Locale::new([0, 1], [Edge::new(0, 1), Edge::new(1, 0)], None).unwrap();
        System::new(l, Interaction::exclusion())
    }

    fn triangle() -> System {
        let edges = [(0, 1), (1, 2), (2, 0)]
            .into_iter()
            .flat_map(|(a, b)| [Edge::new(a, b), Edge::new(b, a)]);
        System::new(
            Locale::new([0, 1, 2], edges, None).unwrap(),
            Interaction::exclusion(),
        )
    }

    #[test]
    fn differential_of_occupation() {
        let sys = single_edge();
        let space = sys.space(&SiteSet::new([0, 1])).unwrap();
        let f: FnTable = FnTable::occupation_product(space.clone(), &[0]).unwrap();
        let w = differential(&sys, &f).unwrap();
        let e = Edge::new(0, 1);
        assert_eq!(w.value(&sys, e, 1), q(-1));
        assert_eq!(w.value(&sys, e, 2), q(1));
        assert_eq!(w.value(&sys, e.reverse(), 1), q(-1));
        let path = Path::new(1, vec![e]);
        assert_eq!(path_integral(&sys, &w, &path).unwrap(), q(-1));
        assert!(differential(&sys, &FnTable::constant(space, q(3)))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn invalid_paths() {
        let sys = single_edge();
        let space = sys.space(&SiteSet::new([0, 1])).unwrap();
        let w: Form<Q> = Form::zero(&sys, &space);
        let fixed = Path::new(0, vec![Edge::new(0, 1)]);
        assert!(matches!(
            path_integral(&sys, &w, &fixed),
            Err(Error::InvalidPath(_))
        ));
        let foreign = Path::new(1, vec![Edge::new(0, 5)]);
        assert!(matches!(
            path_integral(&sys, &w, &foreign),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn malformed_forms_are_rejected() {
        let sys = single_edge();
        let space = sys.space(&SiteSet::new([0, 1])).unwrap();
        // Nonzero on a fixed configuration.
        let bad = Form::<Q>::from_stored(
            &sys,
            &space,
            vec![(Edge::new(0, 1), vec![q(1), q(0), q(0), q(0)])],
        );
        assert!(matches!(bad, Err(Error::MalformedForm(_))));
        // (x,y) and (y,x) give the same swap, so their values must agree.
        let inconsistent = Form::<Q>::from_stored(
            &sys,
            &space,
            vec![(Edge::new(0, 1), vec![q(0), q(1), q(2), q(0)])],
        );
        assert!(matches!(inconsistent, Err(Error::MalformedForm(_))));
        let ok = Form::<Q>::from_stored(
            &sys,
            &space,
            vec![(Edge::new(0, 1), vec![q(0), q(1), q(-1), q(0)])],
        );
        assert!(ok.is_ok());
        let not_alt = Form::<Q>::from_fn(
            &sys,
            &space,
            |_, i| if i == 1 || i == 2 { q(1) } else { q(0) },
        );
        assert!(matches!(not_alt, Err(Error::MalformedForm(_))));
    }

    #[test]
    fn potential_round_trip_and_zero() {
        let sys = triangle();
        let space = sys.space(&SiteSet::new([0, 1, 2])).unwrap();
        let f: FnTable = FnTable::occupation_product(space.clone(), &[0, 1]).unwrap();
        let w = differential(&sys, &f).unwrap();
        let g = solve_potential(&sys, &w, &half()).unwrap();
        assert_eq!(differential(&sys, &g).unwrap(), w);
        let diff = g.sub(&f).unwrap();
        let comps = sys
            .transition_graph(&SiteSet::new([0, 1, 2]))
            .unwrap()
            .components();
        for m in &comps.members {
            assert!(m.iter().all(|&i| diff.value(i) == diff.value(m[0])));
        }
        let z = solve_potential(&sys, &Form::<Q>::zero(&sys, &space), &half()).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn circulation_on_triangle_is_not_closed() {
        let sys = triangle();
        let space = sys.space(&SiteSet::new([0, 1, 2])).unwrap();
        // One particle hopping 0 -> 1 -> 2 -> 0 earns +1, the reverse hop -1.
        let w = Form::from_fn(&sys, &space, |e, idx| {
            let d = space.digits(idx);
            if d.iter().sum::<usize>() != 1 {
                return q(0);
            }
            let (a, b) = (e.origin as usize, e.target as usize);
            let particle = d.iter().position(|&v| v == 1).unwrap();
            if particle != a && particle != b {
                return q(0);
            }
            let (from, to) = if particle == a { (a, b) } else { (b, a) };
            if (from + 1) % 3 == to {
                q(1)
            } else {
                q(-1)
            }
        })
        .unwrap();
        let err = solve_potential(&sys, &w, &half()).unwrap_err();
        let Error::NotClosed {
            start,
            edges,
            integral,
        } = err
        else {
            panic!("{err:?}")
        };
        assert_eq!(integral, "3");
        let path = Path::new(start, edges.into_iter().map(Edge::from).collect());
        assert_eq!(path.edges.len(), 3);
        assert!(path.is_closed(&sys, &space).unwrap());
        assert_eq!(path_integral(&sys, &w, &path).unwrap(), q(3));
        assert!(!is_closed(&sys, &w).unwrap());
    }

    #[test]
    fn kernel_dimensions() {
        let sys = single_edge();
        let kb: KernelBasis<Q> = kernel_basis(&sys, &SiteSet::new([0, 1]), &half()).unwrap();
        let d = kb.dimensions();
        assert_eq!((d.components, d.dim_kernel_c0, d.dim_z1), (3, 2, 1));
        for k in &kb.indicators {
            assert!(differential(&sys, k).unwrap().is_zero());
        }
        for k in &kb.mean_zero {
            assert_eq!(expectation(k, &half()).unwrap(), q(0));
        }
        let id = System::new(sys.locale().clone(), Interaction::identity(2));
        let kb: KernelBasis<Q> = kernel_basis(&id, &SiteSet::new([0, 1]), &half()).unwrap();
        assert_eq!(kb.dimensions().components, 4);
        assert_eq!(kb.dimensions().dim_z1, 0);
    }

    #[test]
    fn projection_commutes_with_differential() {
        let sys = System::new(
            Locale::lattice_window(1, 1).unwrap(),
            Interaction::exclusion(),
        );
        let big = sys.space(&SiteSet::new([-1, 0, 1])).unwrap();
        let small = SiteSet::new([-1, 0]);
        let f = FnTable::from_index_fn(big.clone(), |i| Q::ratio((i * 5 % 7) as i64, 3));
        let w = differential(&sys, &f).unwrap();
        let pw = project_form(&sys, &w, &small, &half()).unwrap();
        let pf = conditional_expectation(&f, &sys.space(&small).unwrap(), &half()).unwrap();
        assert_eq!(pw, differential(&sys, &pf).unwrap());
        let zero: Form<Q> = Form::zero(&sys, &big);
        assert!(project_form(&sys, &zero, &small, &half())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn non_ordinary_measure_breaks_projection() {
        let edges = [(0, 1), (1, 0), (1, 2), (2, 1)].map(Edge::from);
        let sys = System::new(
            Locale::new([0, 1, 2], edges, None).unwrap(),
            Interaction::exclusion(),
        );
        let big = sys.space(&SiteSet::new([0, 1, 2])).unwrap();
        let w8 = (0..8)
            .map(|i| {
                q(if big.digit(i, 1) * big.digit(i, 2) == 1 {
                    2
                } else {
                    1
                })
            })
            .collect();
        let mu = WindowMeasure::from_unnormalized(big.clone(), w8).unwrap();
        let f: FnTable = FnTable::occupation_product(big.clone(), &[1, 2]).unwrap();
        let w = differential(&sys, &f).unwrap();
        let small = SiteSet::new([0, 1]);
        assert_eq!(project_form(&sys, &w, &small, &mu), Err(Error::NotOrdinary));
        assert!(matches!(
            project_form_unchecked(&sys, &w, &small, &mu),
            Err(Error::MalformedForm(_))
        ));
    }

    #[test]
    fn forms_follow_translations() {
        let sys = System::new(
            Locale::lattice_window(1, 2).unwrap(),
            Interaction::exclusion(),
        );
        let space = sys.space(&SiteSet::new([-1, 0])).unwrap();
        let f: FnTable = FnTable::occupation_product(space, &[-1]).unwrap();
        let w = differential(&sys, &f).unwrap();
        let sigma = Symmetry::translation([1]);
        let moved = group_act(&sigma, &w, &sys).unwrap();
        let fm = group_act(&sigma, &f, &sys).unwrap();
        assert_eq!(moved, differential(&sys, &fm).unwrap());
        assert_eq!(group_act(&sigma.inverse(), &moved, &sys).unwrap(), w);
    }
}
