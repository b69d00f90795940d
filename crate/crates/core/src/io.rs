//! JSON documents for the command-line tool.
//!
//! Scalars are read from `"p/q"` strings, integers or decimals, and written
//! with [`Scalar::json`] (`"p/q"` strings for exact rationals). Sites are
//! integers; on lattices of dimension two or more a site may also be given as
//! a coordinate array. Objects are emitted with sorted keys.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forms::{Form, FormDimensions};
use crate::functions::{ConservedQuantity, Expansion, FnTable, IqReport};
use crate::l2::{L2Norm, MartingaleReport};
use crate::measure::{Measure, ProductMeasure, StateMeasure, WindowMeasure};
use crate::scalar::{rational_from_json, Scalar};
use crate::state_space::lattice::{decode_point, encode_point};
use crate::state_space::{
    ConfigSpace, Edge, Interaction, Lattice, Locale, SiteId, SiteSet, System,
};
use crate::varadhan::{Cocycle, Decomposition, InvariantForm};

pub const SCHEMA_VERSION: u64 = 1;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Rejects documents whose `schema_version` is missing or unsupported.
pub fn check_schema(doc: &Value) -> Result<()> {
    match doc.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(invalid(format!("unsupported schema_version {v}"))),
        None => Err(invalid("missing schema_version")),
    }
}

pub fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| invalid(format!("missing field `{name}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("`{what}` must be an array")))
}

pub fn scalar<T: Scalar>(v: &Value) -> Result<T> {
    Ok(T::from_rational(&rational_from_json(v)?))
}

fn scalars<T: Scalar>(v: &Value, what: &str) -> Result<Vec<T>> {
    array(v, what)?.iter().map(scalar).collect()
}

fn integer(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| invalid(format!("`{what}` must be an integer")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| invalid(format!("`{what}` must be a non-negative integer")))
}

fn site(v: &Value) -> Result<SiteId> {
    match v {
        Value::Array(coords) => {
            let c: Vec<i64> = coords
                .iter()
                .map(|x| integer(x, "coordinate"))
                .collect::<Result<_>>()?;
            Ok(encode_point(&c))
        }
        _ => integer(v, "site"),
    }
}

pub fn parse_sites(v: &Value) -> Result<SiteSet> {
    Ok(SiteSet::new(
        array(v, "siteset")?
            .iter()
            .map(site)
            .collect::<Result<Vec<_>>>()?,
    ))
}

fn lattice_dim(locale: &Locale) -> usize {
    locale.lattice().map_or(1, |l| l.dim)
}

pub fn site_json(site: SiteId, locale: &Locale) -> Value {
    match lattice_dim(locale) {
        1 => json!(site),
        d => json!(decode_point(site, d)),
    }
}

pub fn sites_json(sites: &SiteSet, locale: &Locale) -> Value {
    Value::Array(sites.iter().map(|s| site_json(s, locale)).collect())
}

fn scalars_json<T: Scalar>(values: &[T]) -> Value {
    Value::Array(values.iter().map(Scalar::json).collect())
}

/// `{"lattice": {"dim", "radius"} | {"sizes"}}` or `{"sites", "edges", "undirected"?}`.
pub fn parse_locale(v: &Value) -> Result<Locale> {
    if let Some(l) = v.get("lattice") {
        let lattice = if let Some(sizes) = l.get("sizes") {
            let sizes = array(sizes, "sizes")?
                .iter()
                .map(|x| integer(x, "size"))
                .collect::<Result<_>>()?;
            Lattice::torus(sizes)?
        } else {
            Lattice::window(
                index(field(l, "dim")?, "dim")?,
                integer(field(l, "radius")?, "radius")?,
            )?
        };
        return Locale::from_lattice(lattice);
    }
    let sites: Vec<SiteId> = array(field(v, "sites")?, "sites")?
        .iter()
        .map(site)
        .collect::<Result<_>>()?;
    let undirected = v
        .get("undirected")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let mut edges = Vec::new();
    for e in array(field(v, "edges")?, "edges")? {
        let pair = array(e, "edge")?;
        if pair.len() != 2 {
            return Err(invalid("an edge is a pair of sites"));
        }
        let edge = Edge::new(site(&pair[0])?, site(&pair[1])?);
        edges.push(edge);
        if undirected {
            edges.push(edge.reverse());
        }
    }
    Locale::new(sites, edges, None)
}

/// `{"preset": "exclusion"}` or `{"states": n | [labels], "base", "phi": [[[a, b], [a', b']], ..]}`.
pub fn parse_interaction(v: &Value) -> Result<Interaction> {
    if let Some(p) = v.get("preset") {
        let n = v.get("states").and_then(Value::as_u64).unwrap_or(2) as usize;
        return match p.as_str() {
            Some("exclusion") => Ok(Interaction::exclusion()),
            Some("swap") => Ok(Interaction::swap(n)),
            Some("identity") => Ok(Interaction::identity(n)),
            _ => Err(invalid("preset must be exclusion, swap or identity")),
        };
    }
    let states = field(v, "states")?;
    let labels: Vec<String> = match states {
        Value::Number(_) => (0..index(states, "states")?)
            .map(|i| i.to_string())
            .collect(),
        _ => array(states, "states")?
            .iter()
            .map(|s| match s {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect(),
    };
    let base = match v.get("base") {
        Some(b) => state_index(b, &labels)?,
        None => 0,
    };
    let mut changes = Vec::new();
    for c in array(v.get("phi").unwrap_or(&json!([])), "phi")? {
        let c = array(c, "phi entry")?;
        if c.len() != 2 {
            return Err(invalid("a phi entry is [[s1, s2], [s1', s2']]"));
        }
        let pair = |p: &Value| -> Result<(usize, usize)> {
            let p = array(p, "state pair")?;
            if p.len() != 2 {
                return Err(invalid("a state pair has two entries"));
            }
            Ok((state_index(&p[0], &labels)?, state_index(&p[1], &labels)?))
        };
        changes.push((pair(&c[0])?, pair(&c[1])?));
    }
    Interaction::new(labels, base, changes)
}

fn state_index(v: &Value, labels: &[String]) -> Result<usize> {
    match v {
        Value::String(s) => labels
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| invalid(format!("unknown state `{s}`"))),
        _ => {
            let i = index(v, "state")?;
            if i < labels.len() {
                Ok(i)
            } else {
                Err(invalid(format!("state {i} out of range")))
            }
        }
    }
}

/// `{"bernoulli": p}`, `[w_0, ..]`, or `{label: weight}`.
pub fn parse_state_measure<T: Scalar>(
    v: &Value,
    interaction: &Interaction,
) -> Result<StateMeasure<T>> {
    if let Some(p) = v.get("bernoulli") {
        if interaction.num_states() != 2 {
            return Err(Error::InvalidMeasure("bernoulli needs two states".into()));
        }
        return StateMeasure::bernoulli(scalar(p)?);
    }
    let weights = match v {
        Value::Array(_) => scalars(v, "weights")?,
        Value::Object(map) => {
            let mut w = vec![None; interaction.num_states()];
            for (label, weight) in map {
                let i = state_index(&Value::String(label.clone()), interaction.labels())?;
                w[i] = Some(scalar(weight)?);
            }
            w.into_iter()
                .enumerate()
                .map(|(i, x)| {
                    x.ok_or_else(|| Error::InvalidMeasure(format!("no weight for state {i}")))
                })
                .collect::<Result<_>>()?
        }
        _ => return Err(Error::InvalidMeasure("unrecognised state measure".into())),
    };
    if weights.len() != interaction.num_states() {
        return Err(Error::InvalidMeasure(format!(
            "{} weights for {} states",
            weights.len(),
            interaction.num_states()
        )));
    }
    StateMeasure::new(weights)
}

/// A measure read from a document: a product measure or an explicit window measure.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMeasure<T> {
    Product(ProductMeasure<T>),
    Window(WindowMeasure<T>),
}

impl<T: Scalar> AnyMeasure<T> {
    pub fn homogeneous_factor(&self) -> Result<&StateMeasure<T>> {
        match self {
            AnyMeasure::Product(p) => p.homogeneous_factor(),
            AnyMeasure::Window(_) => None,
        }
        .ok_or_else(|| Error::InvalidMeasure("a homogeneous product measure is required".into()))
    }
}

impl<T: Scalar> Measure<T> for AnyMeasure<T> {
    fn weights_on(&self, space: &ConfigSpace) -> Result<Vec<T>> {
        match self {
            AnyMeasure::Product(p) => p.weights_on(space),
            AnyMeasure::Window(w) => w.weights_on(space),
        }
    }

    fn as_product(&self) -> Option<&ProductMeasure<T>> {
        match self {
            AnyMeasure::Product(p) => Some(p),
            AnyMeasure::Window(_) => None,
        }
    }
}

/// A state measure (homogeneous product), `{"per_site": {site: state measure}}`,
/// or `{"window": {"siteset", "weights": [..] | {index: weight}, "normalize"?}}`.
pub fn parse_measure<T: Scalar>(v: &Value, system: &System) -> Result<AnyMeasure<T>> {
    let interaction = system.interaction();
    if let Some(w) = v.get("window") {
        let space = system.space(&parse_sites(field(w, "siteset")?)?)?;
        let weights_v = field(w, "weights")?;
        let weights: Vec<T> = match weights_v {
            Value::Object(map) => {
                let mut out = vec![T::zero(); space.size()];
                for (k, x) in map {
                    let i: usize = k
                        .parse()
                        .map_err(|_| invalid(format!("bad configuration index `{k}`")))?;
                    if i >= space.size() {
                        return Err(Error::InvalidMeasure(format!(
                            "configuration {i} out of range"
                        )));
                    }
                    out[i] = scalar(x)?;
                }
                out
            }
            _ => scalars(weights_v, "weights")?,
        };
        let normalize = w.get("normalize").and_then(Value::as_bool).unwrap_or(false);
        let m = if normalize {
            WindowMeasure::from_unnormalized(space, weights)?
        } else {
            WindowMeasure::new(space, weights)?
        };
        return Ok(AnyMeasure::Window(m));
    }
    if let Some(map) = v.get("per_site") {
        let map = map
            .as_object()
            .ok_or_else(|| invalid("`per_site` must be an object"))?;
        let mut factors = BTreeMap::new();
        for (k, nu) in map {
            let s: SiteId = k.parse().map_err(|_| invalid(format!("bad site `{k}`")))?;
            factors.insert(s, parse_state_measure(nu, interaction)?);
        }
        return Ok(AnyMeasure::Product(ProductMeasure::PerSite(factors)));
    }
    Ok(AnyMeasure::Product(ProductMeasure::homogeneous(
        parse_state_measure(v, interaction)?,
    )))
}

/// `{"siteset", "values"}` or `{"siteset", "occupation": [sites]}` (product of
/// indicators of the non-base states, i.e. `Π η_x` for exclusion).
pub fn parse_table<T: Scalar>(v: &Value, system: &System) -> Result<FnTable<T>> {
    let space = system.space(&parse_sites(field(v, "siteset")?)?)?;
    if let Some(occ) = v.get("occupation") {
        let sites: Vec<SiteId> = array(occ, "occupation")?
            .iter()
            .map(site)
            .collect::<Result<_>>()?;
        return FnTable::occupation_product(space, &sites);
    }
    FnTable::new(space, scalars(field(v, "values")?, "values")?)
}

pub fn table_json<T: Scalar>(f: &FnTable<T>, locale: &Locale) -> Value {
    json!({"siteset": sites_json(f.sites(), locale), "values": scalars_json(f.values())})
}

/// `{"siteset", "edges": [{"edge": [x, y], "values"}]}`, stored orientation `x < y`.
pub fn parse_form<T: Scalar>(v: &Value, system: &System) -> Result<Form<T>> {
    let space = system.space(&parse_sites(field(v, "siteset")?)?)?;
    let mut tables = Vec::new();
    for e in array(field(v, "edges")?, "edges")? {
        let pair = array(field(e, "edge")?, "edge")?;
        if pair.len() != 2 {
            return Err(invalid("an edge is a pair of sites"));
        }
        tables.push((
            Edge::new(site(&pair[0])?, site(&pair[1])?),
            scalars(field(e, "values")?, "values")?,
        ));
    }
    Form::from_stored(system, &space, tables)
}

pub fn form_json<T: Scalar>(form: &Form<T>, locale: &Locale) -> Value {
    let edges: Vec<Value> = form
        .stored()
        .map(|(e, values)| {
            json!({
                "edge": [site_json(e.origin, locale), site_json(e.target, locale)],
                "values": scalars_json(values),
            })
        })
        .collect();
    json!({"siteset": sites_json(form.sites(), locale), "edges": edges})
}

/// `[[c_00, ..], [c_10, ..]]` or `{"0": [..], "1": [..]}`, one row per generator.
pub fn parse_cocycle<T: Scalar>(
    v: &Value,
    basis: &[ConservedQuantity<T>],
    dim: usize,
) -> Result<Cocycle<T>> {
    let rows: Vec<Vec<T>> = match v {
        Value::Object(map) => (0..dim)
            .map(|i| match map.get(&i.to_string()) {
                Some(r) => scalars(r, "cocycle row"),
                None => Ok(vec![T::zero(); basis.len()]),
            })
            .collect::<Result<_>>()?,
        _ => array(v, "cocycle")?
            .iter()
            .map(|r| scalars(r, "cocycle row"))
            .collect::<Result<_>>()?,
    };
    if rows.len() != dim {
        return Err(invalid(format!("cocycle needs {dim} generator rows")));
    }
    Cocycle::new(basis.to_vec(), rows)
}

pub fn cocycle_json<T: Scalar>(rho: &Cocycle<T>) -> Value {
    let mut map = Map::new();
    for (i, row) in rho.coefficients().iter().enumerate() {
        map.insert(i.to_string(), scalars_json(row));
    }
    Value::Object(map)
}

/// `{"template": form}`, `{"cocycle": ..}`, `{"potential": table}` or
/// `{"sum": [{"coef", "form"}]}`.
pub fn parse_invariant_form<T: Scalar>(
    v: &Value,
    system: &System,
    basis: &[ConservedQuantity<T>],
) -> Result<InvariantForm<T>> {
    let dim = system.locale().lattice().map_or(1, |l| l.dim);
    if let Some(t) = v.get("template") {
        return Ok(InvariantForm::Template(parse_form(t, system)?));
    }
    if let Some(c) = v.get("cocycle") {
        return Ok(InvariantForm::Cocycle(parse_cocycle(c, basis, dim)?));
    }
    if let Some(p) = v.get("potential") {
        let space = ConfigSpace::new(
            parse_sites(field(p, "siteset")?)?,
            system.num_states(),
            system.caps().state_cap,
        )?;
        let h = match p.get("occupation") {
            Some(occ) => {
                let sites: Vec<SiteId> = array(occ, "occupation")?
                    .iter()
                    .map(site)
                    .collect::<Result<_>>()?;
                FnTable::occupation_product(space, &sites)?
            }
            None => FnTable::new(space, scalars(field(p, "values")?, "values")?)?,
        };
        return Ok(InvariantForm::Potential(h));
    }
    if let Some(parts) = v.get("sum") {
        let parts = array(parts, "sum")?
            .iter()
            .map(|p| {
                Ok((
                    scalar(field(p, "coef")?)?,
                    parse_invariant_form(field(p, "form")?, system, basis)?,
                ))
            })
            .collect::<Result<_>>()?;
        return Ok(InvariantForm::Sum(parts));
    }
    Err(invalid(
        "invariant form needs one of template, cocycle, potential, sum",
    ))
}

pub fn basis_json<T: Scalar>(basis: &[ConservedQuantity<T>]) -> Value {
    Value::Array(basis.iter().map(|b| scalars_json(&b.xi)).collect())
}

/// Components keyed by their bitmask over the expansion's site set.
pub fn expansion_json<T: Scalar>(e: &Expansion<T>, locale: &Locale) -> Value {
    let mut components = Map::new();
    for (mask, table) in &e.components {
        components.insert(mask.to_string(), table_json(table, locale));
    }
    json!({"siteset": sites_json(&e.sites, locale), "components": components})
}

pub fn iq_json<T: Scalar>(report: &IqReport<T>, locale_of: impl Fn(usize) -> Locale) -> Value {
    let locales: Vec<Value> = report
        .locales
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let locale = locale_of(i);
            let witnesses: Vec<Value> = l
                .witnesses
                .iter()
                .map(|w| json!({"first": w.first, "second": w.second, "totals": scalars_json(&w.totals)}))
                .collect();
            json!({
                "siteset": sites_json(&l.sites, &locale),
                "configurations": l.configurations,
                "components": l.components,
                "level_sets": l.level_sets,
                "holds": l.holds,
                "witnesses": witnesses,
            })
        })
        .collect();
    json!({"basis_size": report.basis_size, "holds": report.holds, "locales": locales})
}

pub fn dims_json(d: &FormDimensions) -> Value {
    json!({
        "configurations": d.configurations,
        "components": d.components,
        "dim_C0": d.dim_c0,
        "dim_kernel_C0": d.dim_kernel_c0,
        "dim_Z1": d.dim_z1,
    })
}

fn norm_json<T: Scalar>(n: &L2Norm<T>) -> Value {
    json!({"squared": n.squared.json(), "root": n.root})
}

pub fn martingale_json<T: Scalar>(r: &MartingaleReport<T>, locale: &Locale) -> Value {
    json!({
        "windows": r.windows.iter().map(|w| sites_json(w, locale)).collect::<Vec<_>>(),
        "norms": r.norms.iter().map(norm_json).collect::<Vec<_>>(),
        "gaps": r.gaps.iter().map(norm_json).collect::<Vec<_>>(),
        "sup_norm": norm_json(&r.sup_norm),
        "monotone": r.monotone,
        "pythagoras": r.pythagoras,
        "stable_from": r.stable_from,
    })
}

pub fn decomposition_json<T: Scalar>(d: &Decomposition<T>, locale: &Locale) -> Value {
    json!({
        "basis": basis_json(d.cocycle.basis()),
        "cocycle": cocycle_json(&d.cocycle),
        "interior": sites_json(&d.interior, locale),
        "exact_form_zero": d.exact_form.is_zero(),
        "exact_form": form_json(&d.exact_form, locale),
        "potential": table_json(&d.potential, locale),
    })
}

/// `{"schema_version", "error": {"kind", "message", ..}}`.
pub fn error_json(err: &Error) -> Value {
    let mut body = Map::new();
    body.insert("kind".into(), json!(err.kind()));
    body.insert("message".into(), json!(err.to_string()));
    if let Error::NotClosed {
        start,
        edges,
        integral,
    } = err
    {
        body.insert(
            "witness".into(),
            json!({"start": start, "edges": edges, "integral": integral}),
        );
    }
    json!({"schema_version": SCHEMA_VERSION, "error": body})
}
