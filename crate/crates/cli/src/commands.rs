use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use skeinlab::curves::{
    brute_force_states, enumerate_admissible_states, injective_mod, support_bounds_check, MappingClass,
    MappingClassJson,
};
use skeinlab::detect::{self as det, reduced_character_space, DetectionRequest};
use skeinlab::exact::{sublattice_index, Cyclotomic};
use skeinlab::qtorus::{build_irrep, chebyshev_apply, frobenius, CentralCharacter, QuantumTorus, TorusElement};
use skeinlab::repvar::{
    check_jacobi, classify_double_leaf, classify_sts_leaf, orbit_closure, sl2::parse_matrix, torus_twists,
    verify_r_matrix_expansion, Cell, Variant,
};
use skeinlab::selftest;
use skeinlab::surface::{
    balanced_lattice, central_sublattice, definitional_kernel, k_boundary, pi_degree_from_index, refined_lattice,
    wp_form, wp_pair, Triangulation, TriangulationJson,
};

use crate::config::SessionConfig;
use crate::input::{self, err, parse_ints};
use crate::{CellArg, CurveArgs, RepSource, RouteArg};

fn to_value<T: Serialize>(x: &T) -> Result<Value, String> {
    serde_json::to_value(x).map_err(err)
}

pub fn surface_info(cfg: &SessionConfig, genus: Option<usize>, file: Option<&Path>) -> Result<Value, String> {
    let t = match file {
        Some(p) => {
            let j: TriangulationJson = input::read_json(cfg, p)?;
            std::sync::Arc::new(Triangulation::from_json(&j).map_err(err)?)
        }
        None => input::triangulation(cfg.genus(genus))?,
    };
    Ok(json!({
        "genus": t.genus(),
        "faces": t.num_faces(),
        "edges": t.num_edges(),
        "innerEdges": t.num_inner_edges(),
        "boundaryArcs": t.boundary_edges().len(),
        "vertices": t.vertices(),
        "eulerCharacteristic": t.euler_characteristic(),
        "h1Rank": t.h1_rank(),
        "labels": t.labels(),
    }))
}

pub fn surface_export(cfg: &SessionConfig, genus: Option<usize>) -> Result<Value, String> {
    to_value(&input::triangulation(cfg.genus(genus))?.to_json())
}

pub fn lattice_info(cfg: &SessionConfig, genus: Option<usize>, n: Option<u64>) -> Result<Value, String> {
    let g = cfg.genus(genus);
    let n = cfg.n(n)?;
    let t = input::triangulation(g)?;
    let b = balanced_lattice(t.clone());
    let k0 = definitional_kernel(&b, n as i128);
    let report = pi_degree_from_index(sublattice_index(&b.lattice, &k0).map_err(err)?);
    let expected = (n as u128).pow(3 * g as u32 - 1);
    let w = wp_form(&t);
    let kb = k_boundary(&t);
    Ok(json!({
        "genus": g,
        "N": n,
        "rank": b.rank(),
        "index": report.index,
        "piDegreeReduced": report.pi_degree,
        "expectedPiDegree": expected,
        "indexOK": report.pi_degree == Some(expected),
        "eqK0Match": central_sublattice(&b, n as i128).equal,
        "boundaryCentral": b.lattice.basis().iter().all(|k| wp_pair(&w, &kb, k) == 0),
    }))
}

pub fn lattice_refined(cfg: &SessionConfig, genus: Option<usize>, n: Option<u64>) -> Result<Value, String> {
    let n = cfg.n(n)?;
    let r = refined_lattice(input::triangulation(cfg.genus(genus))?).map_err(err)?;
    to_value(&r.report(n as i128))
}

pub fn qtorus_irrep(
    cfg: &SessionConfig,
    genus: Option<usize>,
    n: Option<u64>,
    character: Option<&str>,
) -> Result<Value, String> {
    let n = cfg.n(n)?;
    let b = balanced_lattice(input::triangulation(cfg.genus(genus))?);
    let torus = QuantumTorus::new(b.skew.clone(), n).map_err(err)?;
    let chi = match character {
        None => CentralCharacter::trivial(&torus),
        Some(s) => {
            let values = parse_ints(s)?.into_iter().map(|v| Cyclotomic::from_int(torus.order, v)).collect();
            CentralCharacter::from_values(&torus, values).map_err(err)?
        }
    };
    let rep = build_irrep(&torus, &chi).map_err(err)?;
    let check = rep.verify().map_err(err)?;
    Ok(json!({ "N": n, "rank": b.rank(), "dimension": rep.dimension, "check": check, "ok": check.ok() }))
}

pub fn qtorus_frobenius(cfg: &SessionConfig, genus: Option<usize>, n: Option<u64>, a: &str) -> Result<Value, String> {
    let n = cfg.n(n)?;
    let b = balanced_lattice(input::triangulation(cfg.genus(genus))?);
    let a = parse_ints(a)?;
    if a.len() != b.rank() {
        return Err(format!("a needs {} lattice coordinates", b.rank()));
    }
    let torus = QuantumTorus::new(b.skew.clone(), n).map_err(err)?;
    let neg: Vec<i64> = a.iter().map(|x| -x).collect();
    let x = TorusElement::monomial(&torus, &a)
        .and_then(|p| p.add(&TorusElement::monomial(&torus, &neg)?))
        .map_err(err)?;
    let cheb = chebyshev_apply(&x, n).map_err(err)?;
    let fr = frobenius(&x, n);
    Ok(json!({ "N": n, "a": a, "terms": cheb.terms().len(), "equal": cheb.terms() == fr.terms() }))
}

pub fn qtrace(
    cfg: &SessionConfig,
    genus: Option<usize>,
    curve: &CurveArgs,
    n: Option<u64>,
    cap: Option<usize>,
    brute: bool,
) -> Result<Value, String> {
    let t = input::triangulation(cfg.genus(genus))?;
    let c = input::curve(cfg, &t, curve)?;
    let s = enumerate_admissible_states(&c, cfg.state_cap(cap)).map_err(err)?;
    let mut out = json!({
        "curve": c.to_json(),
        "maxIntersection": c.max_intersection(),
        "support": s,
        "boundsOK": support_bounds_check(&s, &c),
    });
    if brute {
        out["bruteForceAgrees"] = json!(brute_force_states(&c).map_err(err)? == s);
    }
    if let Some(n) = n.or(cfg.n) {
        crate::config::check_n(n)?;
        let k0 = definitional_kernel(&balanced_lattice(t), n as i128);
        out["N"] = json!(n);
        out["injectiveModK0"] = json!(injective_mod(&s, &k0));
    }
    Ok(out)
}

pub fn orbit(
    cfg: &SessionConfig,
    source: &RepSource,
    generators: Option<&Path>,
    n: Option<u64>,
    cap: Option<usize>,
    points: bool,
) -> Result<Value, String> {
    let rho = input::rep(cfg, source)?;
    let gens = match generators {
        None if rho.genus == 1 => torus_twists(),
        None => return Err("--generators is required above genus 1".into()),
        Some(p) => {
            let list: Vec<MappingClassJson> = input::read_json(cfg, p)?;
            list.iter()
                .map(|j| match MappingClass::from_json(j).map_err(err)? {
                    MappingClass::Words(w) => Ok(w),
                    MappingClass::Matrix(_) => Err("orbit generators must be given as words".to_string()),
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let n = match n.or(cfg.n) {
        Some(n) => Some(cfg.n(Some(n))?),
        None => None,
    };
    let o = orbit_closure(&[rho], &gens, cfg.orbit_cap(cap)).map_err(err)?;
    let mut out = to_value(&o.summary(n))?;
    if points {
        out["points"] = json!(o.points.iter().map(|p| p.to_json()).collect::<Vec<_>>());
    }
    Ok(out)
}

pub fn leaf_classify(cfg: &SessionConfig, matrix: &str, order: Option<u32>, second: Option<&str>) -> Result<Value, String> {
    let order = cfg.order(order);
    let m = parse_matrix(matrix, order).map_err(err)?;
    let mut out = json!({ "sts": classify_sts_leaf(&m) });
    if let Some(s) = second {
        let m2 = parse_matrix(s, order).map_err(err)?;
        let (left, right) = classify_double_leaf(&m, &m2);
        out["double"] = json!({ "cells": [left, right] });
    }
    Ok(out)
}

pub fn leaf_jacobi() -> Value {
    let reports: Vec<_> = [Variant::Drinfeld, Variant::SemenovTianShansky].into_iter().map(check_jacobi).collect();
    let ok = reports.iter().all(|r| r.failures.is_empty());
    json!({ "reports": reports, "ok": ok })
}

pub fn leaf_rmatrix() -> Value {
    let r = verify_r_matrix_expansion();
    json!({ "report": r, "ok": r.flip_squared_is_identity && r.half_hbar.holds() })
}

pub fn rep_info(cfg: &SessionConfig, source: &RepSource) -> Result<Value, String> {
    let rho = input::rep(cfg, source)?;
    let mu = rho.moment_map();
    Ok(json!({
        "genus": rho.genus,
        "cyclotomicOrder": rho.order(),
        "cell": rho.cell(),
        "moment": mu.entries().map(|c| c.to_string()),
        "rep": rho.to_json(),
    }))
}

pub fn rep_lifts(cfg: &SessionConfig, source: &RepSource, n: Option<u64>) -> Result<Value, String> {
    let rho = input::rep(cfg, source)?;
    to_value(&reduced_character_space(&rho, cfg.n(n)?).map_err(err)?)
}

pub struct DetectInput<'a> {
    pub genus: Option<usize>,
    pub n: Option<u64>,
    pub curve: &'a CurveArgs,
    pub phi: Option<&'a str>,
    pub phi_file: Option<&'a Path>,
    pub cell: CellArg,
    pub beta: Option<&'a Path>,
    pub route: RouteArg,
    pub cap: Option<usize>,
}

pub fn detect(cfg: &SessionConfig, a: &DetectInput) -> Result<Value, String> {
    let n = cfg.n(a.n)?;
    let phi = input::mapping_class(cfg, a.phi, a.phi_file)?;
    let t = input::triangulation(a.genus.or(cfg.genus).unwrap_or(phi.genus()))?;
    let alpha = input::curve(cfg, &t, a.curve)?;
    let cell = match a.cell {
        CellArg::Reduced => Cell::Reduced,
        CellArg::Big => Cell::Big,
    };
    let mut req = DetectionRequest::new(n, cell, alpha, phi).with_cap(cfg.state_cap(a.cap));
    if let Some(p) = a.beta {
        req = req.with_beta(input::curve_from_file(cfg, &t, p)?);
    }
    let cert = match a.route {
        RouteArg::Auto => det::detect(&req),
        RouteArg::Bound => det::detect_within_bound(&req),
        RouteArg::Support => det::detect_support(&req),
    }
    .map_err(err)?;
    to_value(&cert)
}

pub fn selftest(only: Option<&str>, timings: bool) -> Result<(Value, bool), String> {
    let ids: Vec<u32> = match only {
        None => selftest::CRITERIA.iter().map(|c| c.0).collect(),
        Some(s) => parse_ints(s)?.into_iter().map(|x| x as u32).collect(),
    };
    let mut rows = Vec::new();
    let mut all = true;
    for id in ids {
        let r = selftest::run_criterion(id).ok_or_else(|| format!("no criterion {id}"))?;
        eprintln!("{}", r.line());
        all &= r.pass;
        let mut row = to_value(&r)?;
        if timings {
            row["elapsedMs"] = json!(r.elapsed.as_secs_f64() * 1e3);
        }
        rows.push(row);
    }
    Ok((json!({ "criteria": rows, "allPassed": all }), all))
}
