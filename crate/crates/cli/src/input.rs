use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;

use skeinlab::curves::normal::triangulation_id;
use skeinlab::curves::{curve_in_class, CurveJson, MappingClass, MappingClassJson, NormalCurve};
use skeinlab::repvar::{reduced_cell_example, RepJson, SL2Mat, SL2Rep};
use skeinlab::surface::{standard_triangulation, Triangulation};

use crate::config::SessionConfig;
use crate::{CurveArgs, Example, RepSource};

pub fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn read_json<T: DeserializeOwned>(cfg: &SessionConfig, p: &Path) -> Result<T, String> {
    let path = cfg.resolve(p);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("{x:?} is not an integer in {s:?}")))
        .collect()
}

pub fn triangulation(genus: usize) -> Result<Arc<Triangulation>, String> {
    if genus == 0 {
        return Err("genus must be at least 1".into());
    }
    standard_triangulation(genus).map_err(err)
}

pub fn curve_from_file(cfg: &SessionConfig, t: &Arc<Triangulation>, p: &Path) -> Result<NormalCurve, String> {
    let j: CurveJson = read_json(cfg, p)?;
    if j.triangulation != triangulation_id(t) {
        return Err(format!("curve is on {:?}, expected {:?}", j.triangulation, triangulation_id(t)));
    }
    NormalCurve::from_json(t.clone(), &j).map_err(err)
}

pub fn curve(cfg: &SessionConfig, t: &Arc<Triangulation>, a: &CurveArgs) -> Result<NormalCurve, String> {
    match (&a.curve, &a.coords, &a.curve_file) {
        (Some(s), None, None) => {
            let class = parse_ints(s)?;
            if class.len() != 2 * t.genus() {
                return Err(format!("--curve needs {} entries in genus {}", 2 * t.genus(), t.genus()));
            }
            curve_in_class(t, &class).map_err(err)
        }
        (None, Some(s), None) => {
            let coords = parse_ints(s)?
                .into_iter()
                .map(|x| u64::try_from(x).map_err(|_| format!("negative coordinate {x}")))
                .collect::<Result<Vec<_>, _>>()?;
            NormalCurve::new(t.clone(), coords).map_err(err)
        }
        (None, None, Some(p)) => curve_from_file(cfg, t, p),
        _ => Err("give exactly one of --curve, --coords, --curve-file".into()),
    }
}

pub fn rep(cfg: &SessionConfig, s: &RepSource) -> Result<SL2Rep, String> {
    match (&s.rep, s.example) {
        (Some(p), None) => {
            let j: RepJson = read_json(cfg, p)?;
            SL2Rep::from_json(&j).map_err(err)
        }
        (None, Some(Example::Trivial)) => Ok(SL2Rep::trivial(1, 4)),
        (None, Some(Example::Reduced)) => Ok(reduced_cell_example()),
        (None, Some(Example::Quaternion)) => {
            let j = SL2Mat::from_ints(4, [[0, 1], [-1, 0]]).map_err(err)?;
            SL2Rep::new(1, vec![j.clone(), j]).map_err(err)
        }
        _ => Err("give exactly one of --rep, --example".into()),
    }
}

pub fn mapping_class(cfg: &SessionConfig, phi: Option<&str>, file: Option<&Path>) -> Result<MappingClass, String> {
    match (phi, file) {
        (Some(s), None) => MappingClass::parse_matrix(s).map_err(err),
        (None, Some(p)) => {
            let j: MappingClassJson = read_json(cfg, p)?;
            MappingClass::from_json(&j).map_err(err)
        }
        _ => Err("give exactly one of --phi, --phi-file".into()),
    }
}
