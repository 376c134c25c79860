//! Each subcommand becomes a [`Plan`]: an operation name, a normalized input
//! used as the cache key, and a deferred computation producing the payload.

use serde::Serialize;
use serde_json::{json, Value};

use wkt_core::blocks::{self, TBlockCaps, TBlockElement, TBlockSpec};
use wkt_core::classgrp::{self, BaseField};
use wkt_core::decide::{self, MonoidDescriptor};
use wkt_core::factor::{self, LengthSet};
use wkt_core::groups::{self, FiniteAbelianGroup};
use wkt_core::hilbertian::{self, PrimePolynomial};
use wkt_core::numon::MonoidIdeal;
use wkt_core::NumericalMonoid;

use crate::{
    parse, AffineCmd, BlocksCmd, ClassgroupCmd, CliError, Command, DecideCmd, FactorCmd, GroupArgs, GroupsCmd,
};
use crate::{HilbertianCmd, NumonCmd, TBlockArgs};

type Compute = Box<dyn FnOnce() -> Result<Value, CliError>>;

pub struct Plan {
    pub op: String,
    pub input: Value,
    pub compute: Compute,
}

fn mk(op: &str, input: Value, compute: impl FnOnce() -> Result<Value, CliError> + 'static) -> Plan {
    Plan { op: op.to_owned(), input, compute: Box::new(compute) }
}

fn val<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload types serialize")
}

pub fn plan(cmd: &Command) -> Result<Plan, CliError> {
    match cmd {
        Command::Numon(c) => numon(c),
        Command::Affine(c) => affine(c),
        Command::Factor(c) => factor(c),
        Command::Blocks(c) => blocks(c),
        Command::Classgroup(c) => classgroup(c),
        Command::Decide(c) => decide(c),
        Command::Hilbertian(c) => hilbertian(c),
        Command::Groups(c) => groups(c),
    }
}

fn ideal_json(i: &MonoidIdeal) -> Value {
    json!({
        "elements_below_threshold": i.elements_below_threshold(),
        "threshold": i.threshold(),
        "minimal_generators": i.minimal_generators(),
    })
}

fn numon(c: &NumonCmd) -> Result<Plan, CliError> {
    Ok(match c {
        NumonCmd::Info(g) => {
            let s = parse::numerical(&g.gens)?;
            mk("numon.info", json!({"atoms": s.atoms()}), move || {
                Ok(json!({
                    "monoid": s.to_string(),
                    "atoms": s.atoms(),
                    "multiplicity": s.multiplicity(),
                    "embedding_dimension": s.embedding_dimension(),
                    "frobenius": s.frobenius(),
                    "conductor": s.conductor(),
                    "gaps": s.gaps(),
                    "genus": s.genus(),
                    "seminormal": s.is_seminormal(),
                    "seminormality_witness": s.seminormality_witness(),
                    "valuation": s.is_valuation(),
                    "non_valuation_pair": s.non_valuation_pair(),
                    "root_closure": val(&s.root_closure()),
                }))
            })
        }
        NumonCmd::Apery { gens, element } => {
            let s = parse::numerical(&gens.gens)?;
            let n = *element;
            mk("numon.apery", json!({"atoms": s.atoms(), "element": n}), move || {
                Ok(json!({"monoid": s.to_string(), "element": n, "apery": s.apery_set(n)?}))
            })
        }
        NumonCmd::Ideal { gens, ideal } => {
            let s = parse::numerical(&gens.gens)?;
            let i = MonoidIdeal::generated_by(s.clone(), &parse::i64_list(ideal, "--ideal")?)?;
            let input = json!({"atoms": s.atoms(), "ideal": i.minimal_generators()});
            mk("numon.ideal", input, move || {
                Ok(json!({
                    "monoid": s.to_string(),
                    "ideal": ideal_json(&i),
                    "dual": ideal_json(&i.dual()),
                    "v_closure": ideal_json(&i.v_closure()),
                    "t_closure": ideal_json(&i.t_closure()),
                    "divisorial": i.is_divisorial(),
                    "t_invertible": i.is_t_invertible(),
                    "principal": i.is_principal(),
                    "integral": i.is_integral(),
                    "prime": i.is_prime(),
                }))
            })
        }
    })
}

fn affine(c: &AffineCmd) -> Result<Plan, CliError> {
    Ok(match c {
        AffineCmd::Info { monoid } => {
            let g = parse::affine(monoid)?;
            mk("affine.info", val(&g), move || {
                Ok(json!({"monoid": val(&g), "atoms": g.atoms(), "report": val(&g.properties_report())}))
            })
        }
        AffineCmd::Lengths { monoid, element } => {
            let g = parse::affine(monoid)?;
            let v = parse::i64_list(element, "--element")?;
            mk("affine.lengths", json!({"monoid": val(&g), "element": v}), move || {
                let total = factor::affine_length_set(&g, &v)?;
                let per: Vec<LengthSet> =
                    g.components().iter().zip(&v).map(|(s, &x)| factor::length_set(s, x)).collect::<Result<_, _>>()?;
                Ok(json!({"element": v, "lengths": val(&total), "component_lengths": val(&per)}))
            })
        }
    })
}

fn factor(c: &FactorCmd) -> Result<Plan, CliError> {
    Ok(match c {
        FactorCmd::Factorizations { gens, element } => {
            let s = parse::numerical(&gens.gens)?;
            let n = *element as i64;
            mk("factor.factorizations", json!({"atoms": s.atoms(), "element": n}), move || {
                let f = factor::factorizations(&s, n)?;
                let exps: Vec<&[u64]> = f.iter().map(|z| z.exponents()).collect();
                Ok(json!({"atoms": s.atoms(), "element": n, "factorizations": exps, "count": f.len()}))
            })
        }
        FactorCmd::Lengths { gens, element } => {
            let s = parse::numerical(&gens.gens)?;
            let n = *element as i64;
            mk("factor.lengths", json!({"atoms": s.atoms(), "element": n}), move || {
                let l = factor::length_set(&s, n)?;
                Ok(json!({"atoms": s.atoms(), "element": n, "lengths": val(&l), "delta": val(&l.delta())}))
            })
        }
        FactorCmd::Delta { gens, bound } => {
            let s = parse::numerical(&gens.gens)?;
            let b = *bound;
            mk("factor.delta", json!({"atoms": s.atoms(), "bound": b}), move || {
                let d = factor::delta_monoid_bounded(&s, b)?;
                Ok(json!({
                    "delta": val(&d.values),
                    "cap": d.bound,
                    "complete": d.complete,
                    "atom_difference_gcd": d.atom_difference_gcd,
                }))
            })
        }
        FactorCmd::Uk { gens, k, bound } => {
            let s = parse::numerical(&gens.gens)?;
            let (k, b) = (*k, *bound);
            mk("factor.uk", json!({"atoms": s.atoms(), "k": k, "bound": b}), move || {
                let u = factor::uk_bounded(&s, k, b);
                Ok(json!({"k": k, "uk": val(&u.values), "cap": u.bound, "complete": u.complete}))
            })
        }
    })
}

fn group_and_g0(a: &GroupArgs) -> Result<(FiniteAbelianGroup, Vec<Vec<u64>>), CliError> {
    let g = parse::group(&a.group)?;
    let g0 = match &a.g0 {
        Some(s) => {
            let mut v = parse::elements(&g, s)?;
            v.sort();
            v.dedup();
            v
        }
        None => {
            if g.order() > blocks::GROUP_CAP {
                return Err(CliError::Cap(format!("group order {} exceeds {}", g.order(), blocks::GROUP_CAP)));
            }
            g.elements()
        }
    };
    Ok((g, g0))
}

fn tblock_spec(s: &str) -> Result<TBlockSpec, CliError> {
    let raw: TBlockSpec = serde_json::from_str(s).map_err(|e| CliError::Input(format!("--spec: {e}")))?;
    Ok(TBlockSpec::new(raw.group, raw.g0, raw.components)?)
}

fn tblock_element(s: &str) -> Result<TBlockElement, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Input(format!("--element: {e}")))
}

fn caps(a: &TBlockArgs) -> TBlockCaps {
    TBlockCaps { block_length: a.cap, t_max: a.t_max }
}

fn blocks(c: &BlocksCmd) -> Result<Plan, CliError> {
    Ok(match c {
        BlocksCmd::Atoms(a) => {
            let (g, g0) = group_and_g0(a)?;
            mk("blocks.atoms", json!({"group": val(&g), "g0": g0}), move || {
                let atoms = blocks::minimal_zero_sum_atoms(&g, &g0)?;
                Ok(json!({"group": val(&g), "count": atoms.len(), "atoms": val(&atoms)}))
            })
        }
        BlocksCmd::Davenport { group } => {
            let g = parse::group(group)?;
            mk("blocks.davenport", json!({"group": val(&g)}), move || {
                Ok(json!({"group": val(&g), "davenport": blocks::davenport_constant(&g)?}))
            })
        }
        BlocksCmd::Lengths { group, block } => {
            let (g, g0) = group_and_g0(group)?;
            let b = parse::block(&g, block)?;
            mk("blocks.lengths", json!({"group": val(&g), "g0": g0, "block": val(&b)}), move || {
                let l = blocks::block_length_set(&g, &g0, &b)?;
                Ok(json!({"group": val(&g), "multiplicities": val(&b), "lengths": val(&l)}))
            })
        }
        BlocksCmd::Factorizations { group, block } => {
            let (g, g0) = group_and_g0(group)?;
            let b = parse::block(&g, block)?;
            mk("blocks.factorizations", json!({"group": val(&g), "g0": g0, "block": val(&b)}), move || {
                let f = blocks::block_factorizations(&g, &g0, &b)?;
                Ok(json!({"group": val(&g), "multiplicities": val(&b), "count": f.len(), "factorizations": val(&f)}))
            })
        }
        BlocksCmd::Delta { group, cap } => {
            let g = parse::group(group)?;
            let cap = *cap;
            mk("blocks.delta", json!({"group": val(&g), "cap": cap}), move || {
                let d = blocks::delta_block_monoid(&g, cap)?;
                Ok(json!({"group": val(&g), "delta": val(&d.values), "cap": d.cap, "complete": d.complete}))
            })
        }
        BlocksCmd::Uk { group, k, cap } => {
            let g = parse::group(group)?;
            let (k, cap) = (*k, *cap);
            mk("blocks.uk", json!({"group": val(&g), "k": k, "cap": cap}), move || {
                let u = blocks::uk_block_monoid(&g, k, cap)?;
                let interval = u.values.is_interval();
                Ok(json!({
                    "group": val(&g),
                    "k": k,
                    "uk": val(&u.values),
                    "interval": interval,
                    "cap": u.cap,
                    "complete": u.complete,
                }))
            })
        }
        BlocksCmd::TblockValidate { spec, element } => {
            let spec = tblock_spec(spec)?;
            let e = tblock_element(element)?;
            mk("blocks.tblock_validate", json!({"spec": val(&spec), "element": val(&e)}), move || {
                let r = spec.validate(&e);
                Ok(json!({"valid": r.is_ok(), "reason": r.err().map(|e| e.to_string())}))
            })
        }
        BlocksCmd::TblockAtoms(a) => {
            let spec = tblock_spec(&a.spec)?;
            let caps = caps(a);
            mk("blocks.tblock_atoms", json!({"spec": val(&spec), "caps": val(&caps)}), move || {
                let r = spec.atoms_bounded(caps)?;
                Ok(json!({
                    "surrogate": true,
                    "atoms": val(&r.atoms),
                    "count": r.atoms.len(),
                    "cap": val(&r.caps),
                    "complete": r.complete,
                }))
            })
        }
        BlocksCmd::TblockLengths { args, element } => {
            let spec = tblock_spec(&args.spec)?;
            let caps = caps(args);
            let e = tblock_element(element)?;
            let input = json!({"spec": val(&spec), "caps": val(&caps), "element": val(&e)});
            mk("blocks.tblock_lengths", input, move || {
                let l = spec.length_set(&e, caps)?;
                Ok(json!({"surrogate": true, "element": val(&e), "lengths": val(&l)}))
            })
        }
    })
}

fn monoid_components(s: &str) -> Result<Vec<NumericalMonoid>, CliError> {
    match parse::monoid(s)? {
        MonoidDescriptor::Numerical { monoid } => Ok(vec![monoid]),
        MonoidDescriptor::AffineSum { monoid } => Ok(monoid.components().to_vec()),
        MonoidDescriptor::Custom { .. } => {
            Err(CliError::Input("--monoid: class groups need numerical or affine monoids".into()))
        }
    }
}

fn base_field(s: &str) -> Result<BaseField, CliError> {
    let t = s.trim();
    if let Some(p) = t.strip_prefix("fp:") {
        let p: u64 = p.parse().map_err(|e| CliError::Input(format!("--field: {e}")))?;
        if !wkt_core::arith::is_prime(p) {
            return Err(CliError::Input(format!("--field: {p} is not prime")));
        }
        return Ok(BaseField::Prime { p });
    }
    if t == "q" {
        return Ok(BaseField::Infinite { label: "Q".into() });
    }
    if let Some(label) = t.strip_prefix("field:") {
        return Ok(BaseField::Infinite { label: label.into() });
    }
    Err(CliError::Input(format!("--field: unrecognized {t:?}")))
}

fn classgroup(c: &ClassgroupCmd) -> Result<Plan, CliError> {
    Ok(match c {
        ClassgroupCmd::Numerical { p, gens } => {
            let s = parse::numerical(&gens.gens)?;
            let p = *p;
            mk("classgroup.numerical", json!({"p": p, "atoms": s.atoms()}), move || {
                let r = classgrp::cv_numerical_ring(p, &s)?;
                let order = r.group.order();
                Ok(json!({"result": val(&r), "order": order, "structure": r.group.to_string()}))
            })
        }
        ClassgroupCmd::Sum { field, monoid } => {
            let f = base_field(field)?;
            let comps = monoid_components(monoid)?;
            mk("classgroup.sum", json!({"field": val(&f), "components": val(&comps)}), move || {
                let e = classgrp::cv_semigroup_ring_sum(&f, &comps)?;
                Ok(json!({
                    "expression": val(&e),
                    "rendered": e.to_string(),
                    "infinite": e.is_infinite(),
                    "order": e.order(),
                    "decomposition": classgrp::DIRECT_SUM_CITATION,
                }))
            })
        }
    })
}

fn decide(c: &DecideCmd) -> Result<Plan, CliError> {
    Ok(match c {
        DecideCmd::Kg { characteristic, group } => {
            let g = parse::torsion_free(group)?;
            let ch = *characteristic;
            mk("decide.kg", json!({"char": ch, "group": val(&g)}), move || Ok(val(&decide::kg_weakly_krull(ch, &g)?)))
        }
        DecideCmd::WeaklyKrull(p) | DecideCmd::Wfd(p) | DecideCmd::GeneralizedKrull(p) => {
            let d = parse::domain(&p.domain)?;
            let m = parse::monoid(&p.monoid)?;
            let (op, f): (&str, fn(&decide::DomainDescriptor, &MonoidDescriptor) -> decide::Verdict) = match c {
                DecideCmd::WeaklyKrull(_) => ("decide.weakly_krull", decide::decide_weakly_krull),
                DecideCmd::Wfd(_) => ("decide.wfd", decide::decide_wfd),
                _ => ("decide.generalized_krull", decide::decide_generalized_krull),
            };
            mk(op, json!({"domain": val(&d), "monoid": val(&m)}), move || Ok(val(&f(&d, &m))))
        }
    })
}

fn hilbertian(c: &HilbertianCmd) -> Result<Plan, CliError> {
    Ok(match c {
        HilbertianCmd::Find { p, prefix, max_degree } => {
            let prefix = parse::u64_list(prefix, "--prefix")?;
            let (p, max_degree) = (*p, *max_degree);
            mk("hilbertian.find", json!({"p": p, "prefix": prefix, "max_degree": max_degree}), move || {
                let w = hilbertian::find_irreducible_with_prefix(p, &prefix, max_degree)?;
                let rabin = hilbertian::is_irreducible_rabin(&w.polynomial)?;
                Ok(json!({
                    "polynomial": val(&w.polynomial),
                    "degree": w.polynomial.degree(),
                    "rendered": w.polynomial.to_string(),
                    "candidates_tried": w.candidates_tried,
                    "rabin_check": rabin,
                }))
            })
        }
        HilbertianCmd::Irreducible { p, coeffs } => {
            let f = PrimePolynomial::new(*p, parse::u64_list(coeffs, "--coeffs")?)?;
            mk("hilbertian.irreducible", val(&f), move || {
                Ok(json!({
                    "polynomial": val(&f),
                    "degree": f.degree(),
                    "irreducible": hilbertian::is_irreducible(&f)?,
                    "rabin_check": hilbertian::is_irreducible_rabin(&f)?,
                }))
            })
        }
    })
}

fn groups(c: &GroupsCmd) -> Result<Plan, CliError> {
    Ok(match c {
        GroupsCmd::Snf { relations, generators } => {
            let rows = parse::matrix(relations)?;
            let n = *generators;
            mk("groups.snf", json!({"relations": rows, "generators": n}), move || {
                let f = groups::smith_normal_form(&rows, n)?;
                Ok(json!({"invariant_factors": f.invariant_factors, "free_rank": f.free_rank}))
            })
        }
        GroupsCmd::Quotient { group, subgroup } => {
            let g = parse::group(group)?;
            let gens = parse::elements(&g, subgroup)?;
            mk("groups.quotient", json!({"group": val(&g), "subgroup": gens}), move || {
                let carrier = g.elements();
                let q = groups::quotient_structure(&carrier, |a, b| g.add(a, b), &g.zero(), &gens)?;
                Ok(json!({
                    "quotient": val(&q.group),
                    "structure": q.group.to_string(),
                    "carrier_order": q.carrier_order,
                    "subgroup_order": q.subgroup_order,
                }))
            })
        }
        GroupsCmd::Type { group, p } => {
            let g = parse::torsion_free(group)?;
            let p = *p;
            mk("groups.type", json!({"group": val(&g), "p": p}), move || {
                let except = match p {
                    Some(p) => Some(val(&groups::is_type_000_except_p(&g, p)?)),
                    None => None,
                };
                Ok(json!({
                    "type_000": val(&groups::is_type_000(&g)),
                    "type_000_except_p": except,
                    "p": p,
                    "i_prime": groups::satisfies_i_prime(&g),
                }))
            })
        }
    })
}
