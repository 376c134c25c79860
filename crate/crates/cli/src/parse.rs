//! Textual syntax for command-line inputs.

use wkt_core::blocks::{parse_element_key, Block};
use wkt_core::decide::{DomainDescriptor, DomainFlags, MonoidDescriptor};
use wkt_core::groups::{GroupElement, Rank1GroupDescriptor, TorsionFreeGroupDescriptor};
use wkt_core::{AffineSumMonoid, FiniteAbelianGroup, NumericalMonoid};

use crate::CliError;

fn input<E: std::fmt::Display>(what: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{what}: {e}"))
}

/// Goes through `Value` so that integer map keys written as JSON strings
/// survive tagged and flattened representations.
fn from_json<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, CliError> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(input(what))?;
    serde_json::from_value(v).map_err(input(what))
}

pub fn u64_list(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<u64>().map_err(input(what))).collect()
}

pub fn i64_list(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(input(what))).collect()
}

pub fn numerical(gens: &str) -> Result<NumericalMonoid, CliError> {
    NumericalMonoid::from_generators(&u64_list(gens, "--gens")?).map_err(CliError::from_numon)
}

/// `2,3/3,5`: components separated by `/`.
pub fn affine(s: &str) -> Result<AffineSumMonoid, CliError> {
    let comps = s.split('/').map(numerical).collect::<Result<Vec<_>, _>>()?;
    AffineSumMonoid::direct_sum(comps).map_err(input("monoid"))
}

/// `3` or `2,4`: cyclic orders, normalized to invariant factors.
pub fn group(s: &str) -> Result<FiniteAbelianGroup, CliError> {
    let orders = u64_list(s, "--group")?;
    if orders.contains(&0) {
        return Err(CliError::Input("--group: cyclic orders must be positive".into()));
    }
    Ok(FiniteAbelianGroup::from_cyclic_orders(&orders))
}

/// Elements separated by `;`, coordinates by `,`.
pub fn elements(g: &FiniteAbelianGroup, s: &str) -> Result<Vec<GroupElement>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|e| {
            let v = parse_element_key(e).map_err(input("element"))?;
            g.check(&v).map_err(input("element"))?;
            Ok(v)
        })
        .collect()
}

pub fn block(g: &FiniteAbelianGroup, s: &str) -> Result<Block, CliError> {
    Ok(Block::from_elements(elements(g, s)?))
}

/// `z`, `z^n`, `frac:p` (the group `⋃ p^{-k} Z`) or a JSON descriptor.
pub fn torsion_free(s: &str) -> Result<TorsionFreeGroupDescriptor, CliError> {
    let t = s.trim();
    if t == "z" {
        return Ok(TorsionFreeGroupDescriptor::free(1));
    }
    if let Some(n) = t.strip_prefix("z^") {
        let n: usize = n.parse().map_err(input("group"))?;
        if n == 0 {
            return Err(CliError::Input("group: rank must be positive".into()));
        }
        return Ok(TorsionFreeGroupDescriptor::free(n));
    }
    if let Some(p) = t.strip_prefix("frac:") {
        let p: u64 = p.parse().map_err(input("group"))?;
        let c = Rank1GroupDescriptor::p_power_fractions(p).map_err(input("group"))?;
        return Ok(TorsionFreeGroupDescriptor::rank1(c));
    }
    from_json(t, "group")
}

/// `z`, `q`, `fp:P`, `field:C[:ph]`, `order:LABEL`, `custom:{flags}` or a
/// JSON descriptor.
pub fn domain(s: &str) -> Result<DomainDescriptor, CliError> {
    let t = s.trim();
    let bad = input("--domain");
    if t == "z" {
        return Ok(DomainDescriptor::integers());
    }
    if t == "q" {
        return DomainDescriptor::symbolic_field(0, true, true).map_err(bad);
    }
    if let Some(p) = t.strip_prefix("fp:") {
        return DomainDescriptor::prime_field(p.parse().map_err(input("--domain"))?).map_err(bad);
    }
    if let Some(rest) = t.strip_prefix("field:") {
        let (c, ph) = match rest.strip_suffix(":ph") {
            Some(c) => (c, true),
            None => (rest, false),
        };
        return DomainDescriptor::symbolic_field(c.parse().map_err(input("--domain"))?, true, ph).map_err(bad);
    }
    if let Some(label) = t.strip_prefix("order:") {
        return Ok(DomainDescriptor::order_in_number_field(label));
    }
    if let Some(json) = t.strip_prefix("custom:") {
        let flags: DomainFlags = from_json(json, "--domain")?;
        return DomainDescriptor::custom(flags).map_err(bad);
    }
    if t.starts_with('{') {
        return from_json(t, "--domain");
    }
    Err(CliError::Input(format!("--domain: unrecognized {t:?}")))
}

/// `numerical:2,3`, `n0`, `affine:2,3/3,5`, `custom:{flags, group}` or a
/// JSON descriptor.
pub fn monoid(s: &str) -> Result<MonoidDescriptor, CliError> {
    let t = s.trim();
    if t == "n0" {
        return Ok(MonoidDescriptor::numerical(NumericalMonoid::naturals()));
    }
    if let Some(g) = t.strip_prefix("numerical:") {
        return Ok(MonoidDescriptor::numerical(numerical(g)?));
    }
    if let Some(g) = t.strip_prefix("affine:") {
        return Ok(MonoidDescriptor::AffineSum { monoid: affine(g)? });
    }
    if let Some(json) = t.strip_prefix("custom:") {
        let mut v: serde_json::Value = serde_json::from_str(json).map_err(input("--monoid"))?;
        if let Some(obj) = v.as_object_mut() {
            obj.insert("kind".into(), "custom".into());
        }
        return serde_json::from_value(v).map_err(input("--monoid"));
    }
    if t.starts_with('{') {
        return from_json(t, "--monoid");
    }
    Err(CliError::Input(format!("--monoid: unrecognized {t:?}")))
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|r| i64_list(r, "--relations")).collect()
}
