//! The acceptance checks as data: each criterion runs independently and
//! reports pass/fail with a JSON detail record.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curves::{
    brute_force_states, closed_curves_up_to, enumerate_admissible_states, injective_mod, support_bounds_check,
    torus_curve, FreeAutomorphism, MappingClass,
};
use crate::detect::{detect, reduced_character_space, DetectionRequest, Reason, Verdict};
use crate::error::Result;
use crate::exact::{sublattice_index, Cyclotomic, Index};
use crate::qtorus::{build_irrep, chebyshev_apply, frobenius, CentralCharacter, QuantumTorus, TorusElement};
use crate::repvar::{
    check_jacobi, moment_map, orbit_closure, reduced_cell_example, rep_dimension, rep_dimension_formula, torus_twists,
    verify_r_matrix_expansion, Cell, SL2Mat, SL2Rep, Variant,
};
use crate::surface::{
    balanced_lattice, central_sublattice, definitional_kernel, k_boundary, refined_lattice, standard_triangulation,
    wp_form, wp_pair,
};

/// Curves whose supports are checked against the bound, parity and
/// boundary constraints.
pub const SUPPORT_FIXTURES: [(i64, i64); 5] = [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2)];

pub const INJECTIVITY_FIXTURES: [(i64, i64); 9] =
    [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 2), (4, 1), (1, 4)];

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = fn() -> Result<(bool, Value)>;

pub const CRITERIA: [(u32, &str, Check); 11] = [
    (1, "pi-degree-table", pi_degree_table),
    (2, "central-sublattice-formula", central_sublattice_formula),
    (3, "boundary-vector-central", boundary_vector_central),
    (4, "azumaya-by-dimension", azumaya_by_dimension),
    (5, "chebyshev-frobenius", chebyshev_frobenius),
    (6, "support-bounds", support_bounds),
    (7, "support-injectivity", support_injectivity),
    (8, "dp-equals-brute-force", dp_equals_brute_force),
    (9, "end-to-end-detection", end_to_end_detection),
    (10, "classical-suite", classical_suite),
    (11, "refined-lattice-report", refined_lattice_report),
];

pub fn run_criterion(id: u32) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (pass, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    Some(CriterionResult { id, name, pass, detail, elapsed: start.elapsed() })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

const GRID: [(usize, u64); 6] = [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5), (2, 7)];

fn pi_degree_table() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (g, n) in GRID {
        let b = balanced_lattice(standard_triangulation(g)?);
        let k0 = definitional_kernel(&b, n as i128);
        let index = sublattice_index(&b.lattice, &k0)?;
        let expected = (n as u128).pow(3 * g as u32 - 1);
        let ok = index == Index::Finite(expected * expected);
        pass &= ok;
        rows.push(json!({ "genus": g, "N": n, "index": index, "expected": expected, "ok": ok }));
    }
    Ok((pass, json!(rows)))
}

fn central_sublattice_formula() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (g, n) in GRID {
        let cs = central_sublattice(&balanced_lattice(standard_triangulation(g)?), n as i128);
        pass &= cs.equal;
        rows.push(json!({ "genus": g, "N": n, "equal": cs.equal }));
    }
    Ok((pass, json!(rows)))
}

fn boundary_vector_central() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for g in 1..=3 {
        let t = standard_triangulation(g)?;
        let b = balanced_lattice(t.clone());
        let w = wp_form(&t);
        let kb = k_boundary(&t);
        let ok = b.lattice.contains(&kb) && b.lattice.basis().iter().all(|k| wp_pair(&w, &kb, k) == 0);
        pass &= ok;
        rows.push(json!({ "genus": g, "basisSize": b.lattice.rank(), "ok": ok }));
    }
    Ok((pass, json!(rows)))
}

fn azumaya_by_dimension() -> Result<(bool, Value)> {
    let b = balanced_lattice(standard_triangulation(1)?);
    let mut rows = Vec::new();
    let mut pass = true;
    for n in [3u64, 5] {
        let torus = QuantumTorus::new(b.skew.clone(), n)?;
        let trivial = CentralCharacter::trivial(&torus);
        // a character whose values are N-th powers of rationals
        let mut values = trivial.values.clone();
        values[0] = Cyclotomic::from_int(torus.order, 2i64.pow(n as u32));
        for (label, chi) in [("trivial", trivial), ("scaled", CentralCharacter::from_values(&torus, values)?)] {
            let rep = build_irrep(&torus, &chi)?;
            let check = rep.verify()?;
            let ok = rep.dimension as u64 == n * n && check.ok();
            pass &= ok;
            rows.push(json!({ "N": n, "character": label, "check": check, "ok": ok }));
        }
    }
    Ok((pass, json!(rows)))
}

fn chebyshev_frobenius() -> Result<(bool, Value)> {
    let b = balanced_lattice(standard_triangulation(1)?);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rows = Vec::new();
    let mut pass = true;
    for n in [3u64, 5, 7] {
        let torus = QuantumTorus::new(b.skew.clone(), n)?;
        let mut ok_count = 0;
        for _ in 0..20 {
            let a: Vec<i64> = loop {
                let v: Vec<i64> = (0..b.rank()).map(|_| rng.gen_range(-2..=2)).collect();
                if v.iter().any(|&x| x != 0) {
                    break v;
                }
            };
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            let x = TorusElement::monomial(&torus, &a)?.add(&TorusElement::monomial(&torus, &neg)?)?;
            if chebyshev_apply(&x, n)?.terms() == frobenius(&x, n).terms() {
                ok_count += 1;
            }
        }
        pass &= ok_count == 20;
        rows.push(json!({ "N": n, "samples": 20, "identities": ok_count }));
    }
    Ok((pass, json!(rows)))
}

fn support_bounds() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (p, q) in SUPPORT_FIXTURES {
        let c = torus_curve(p, q)?;
        let s = enumerate_admissible_states(&c, crate::curves::DEFAULT_STATE_CAP)?;
        let ok = support_bounds_check(&s, &c);
        pass &= ok;
        rows.push(json!({ "class": [p, q], "supportSize": s.len(), "states": s.admissible_states, "ok": ok }));
    }
    Ok((pass, json!(rows)))
}

fn support_injectivity() -> Result<(bool, Value)> {
    let n = 7;
    let t = standard_triangulation(1)?;
    let k0 = definitional_kernel(&balanced_lattice(t), n);
    let mut rows = Vec::new();
    let mut pass = true;
    for (p, q) in INJECTIVITY_FIXTURES {
        let c = torus_curve(p, q)?;
        if c.max_intersection() > n as u64 - 1 {
            rows.push(json!({ "class": [p, q], "skipped": "over bound" }));
            continue;
        }
        let s = enumerate_admissible_states(&c, crate::curves::DEFAULT_STATE_CAP)?;
        let ok = injective_mod(&s, &k0);
        pass &= ok;
        rows.push(json!({ "class": [p, q], "supportSize": s.len(), "injective": ok }));
    }
    Ok((pass, json!(rows)))
}

fn dp_equals_brute_force() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (g, max) in [(1usize, 12u64), (2, 12)] {
        let t = standard_triangulation(g)?;
        let curves = closed_curves_up_to(&t, max);
        let mismatches = curves
            .iter()
            .filter(|c| {
                let dp = enumerate_admissible_states(c, 12);
                let bf = brute_force_states(c);
                !matches!((dp, bf), (Ok(a), Ok(b)) if a == b)
            })
            .count();
        pass &= mismatches == 0;
        rows.push(json!({ "genus": g, "maxPoints": max, "curves": curves.len(), "mismatches": mismatches }));
    }
    Ok((pass, json!(rows)))
}

fn end_to_end_detection() -> Result<(bool, Value)> {
    let twist = MappingClass::matrix([[1, 1], [0, 1]])?;
    let req = DetectionRequest::torus(5, 0, 1, twist)?;
    let cert = detect(&req)?;
    let again = detect(&req)?;
    let bytes_equal = serde_json::to_string(&cert).ok() == serde_json::to_string(&again).ok();
    let reverified = cert.reverification.as_ref().is_some_and(|r| r.ok && r.method == "brute-force");
    let identity = detect(&DetectionRequest::torus(5, 0, 1, MappingClass::matrix([[1, 0], [0, 1]])?)?)?;
    let pass = cert.verdict == Verdict::CertifiedNontrivial
        && reverified
        && bytes_equal
        && identity.verdict == Verdict::Inconclusive
        && identity.reasons == vec![Reason::IsotopicCurves];
    Ok((pass, json!({ "twist": cert, "identity": identity, "deterministic": bytes_equal })))
}

fn random_walk_moment(seed: &SL2Rep, steps: usize, rng: &mut ChaCha8Rng) -> bool {
    let moves = [
        FreeAutomorphism::twist_alpha(),
        FreeAutomorphism::twist_beta(),
        FreeAutomorphism::twist_alpha_inverse(),
        FreeAutomorphism::twist_beta_inverse(),
    ];
    let mu = moment_map(seed);
    let mut rho = seed.clone();
    for _ in 0..steps {
        rho = rho.act(&moves[rng.gen_range(0..moves.len())]);
        if moment_map(&rho) != mu {
            return false;
        }
    }
    true
}

fn classical_suite() -> Result<(bool, Value)> {
    let jacobi: Vec<_> = [Variant::Drinfeld, Variant::SemenovTianShansky].map(check_jacobi).into();
    let jacobi_ok = jacobi.iter().all(|r| r.failures.is_empty() && r.triples_checked == 64);
    let r = verify_r_matrix_expansion();
    let r_ok = r.flip_squared_is_identity && r.half_hbar.holds();

    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let hyperbolic = SL2Rep::new(1, vec![
        SL2Mat::from_ints(4, [[2, 1], [1, 1]])?,
        SL2Mat::from_ints(4, [[1, 2], [0, 1]])?,
    ])?;
    let walks_ok = [reduced_cell_example(), hyperbolic].iter().all(|s| random_walk_moment(s, 50, &mut rng));

    let trivial = orbit_closure(&[SL2Rep::trivial(1, 1)], &torus_twists(), 10)?;
    let dim = rep_dimension(&trivial, 3);
    let dim_ok = trivial.len() == 1 && trivial.cell == Cell::Big && dim == 27 && rep_dimension_formula(1, 3, Cell::Big, 1) == 27;

    let lifts = reduced_character_space(&reduced_cell_example(), 3)?;
    let lifts_ok = lifts.lifts.len() == 3 && lifts.unit_lifts;

    let pass = jacobi_ok && r_ok && walks_ok && dim_ok && lifts_ok;
    Ok((
        pass,
        json!({
            "jacobi": jacobi,
            "rMatrix": r,
            "momentConstant": walks_ok,
            "trivialOrbitDimension": dim,
            "reducedLifts": lifts.lifts.len(),
        }),
    ))
}

fn refined_lattice_report() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in [3u64, 5] {
        let refined = refined_lattice(standard_triangulation(1)?)?;
        let report = refined.report(n as i128);
        let target = (n as u128).pow(3);
        let consistent = match report.definitional_index {
            Index::Finite(i) if i == target * target => {
                report.index_is_target_square && report.pi_degree_asserted == Some(target)
            }
            _ => !report.index_is_target_square && report.pi_degree_asserted.is_none(),
        };
        pass &= consistent;
        rows.push(json!({ "report": report, "consistent": consistent }));
    }
    Ok((pass, json!(rows)))
}
