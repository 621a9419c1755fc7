//! Full states on a normal curve, admissibility, and the support of the
//! quantum trace as a set of balanced maps with fiber sizes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::normal::{CornerArc, NormalCurve};
use crate::error::{Error, Result};
use crate::exact::Lattice;

pub const DEFAULT_STATE_CAP: usize = 24;
const HARD_CAP: usize = 62;
const BRUTE_FORCE_MAX: usize = 26;

/// A corner arc whose a-side endpoint is + and b-side endpoint is − is bad.
pub fn arc_allowed(a: i8, b: i8) -> bool {
    !(a == 1 && b == -1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceSupport {
    pub intersection_points: usize,
    pub admissible_states: u64,
    /// balanced map k(ŝ) in edge coordinates -> number of admissible states
    #[serde(serialize_with = "ser_fibers")]
    pub fibers: BTreeMap<Vec<i128>, u64>,
}

fn ser_fibers<S: serde::Serializer>(f: &BTreeMap<Vec<i128>, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        k: &'a [i128],
        fiber: u64,
    }
    s.collect_seq(f.iter().map(|(k, &fiber)| Entry { k, fiber }))
}

impl TraceSupport {
    pub fn elements(&self) -> impl Iterator<Item = &Vec<i128>> {
        self.fibers.keys()
    }

    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap.min(HARD_CAP) {
        return Err(Error::CapExceeded { got: m, cap: cap.min(HARD_CAP) });
    }
    Ok(())
}

/// One strand of the curve: consecutive points joined by corner arcs.
struct Strand {
    points: Vec<usize>,
    /// arc i joins points[i] and points[i+1] (cyclically when closed);
    /// true if points[i] is its a-side endpoint
    forward: Vec<bool>,
    closed: bool,
}

fn strands(c: &NormalCurve, arcs: &[CornerArc]) -> Vec<Strand> {
    let m = c.num_points();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, a) in arcs.iter().enumerate() {
        incident[a.a_point].push(i);
        incident[a.b_point].push(i);
    }
    let mut used = vec![false; arcs.len()];
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    let order: Vec<usize> =
        (0..m).filter(|&p| incident[p].len() < 2).chain((0..m).filter(|&p| incident[p].len() == 2)).collect();
    for start in order {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut points = vec![start];
        let mut forward = Vec::new();
        let mut cur = start;
        let mut closed = false;
        while let Some(&ai) = incident[cur].iter().find(|&&i| !used[i]) {
            used[ai] = true;
            let a = arcs[ai];
            let (next, fwd) = if a.a_point == cur { (a.b_point, true) } else { (a.a_point, false) };
            forward.push(fwd);
            if next == start {
                closed = true;
                break;
            }
            seen[next] = true;
            points.push(next);
            cur = next;
        }
        out.push(Strand { points, forward, closed });
    }
    out
}

type Partial = BTreeMap<Vec<i128>, u64>;

fn strand_support(s: &Strand, point_edge: &[usize], edges: usize) -> Partial {
    // (first sign, current sign, partial k) -> count
    let mut layer: BTreeMap<(i8, i8, Vec<i128>), u64> = BTreeMap::new();
    for sign in [1i8, -1] {
        let mut k = vec![0i128; edges];
        k[point_edge[s.points[0]]] += sign as i128;
        layer.insert((sign, sign, k), 1);
    }
    for (i, &pt) in s.points.iter().enumerate().skip(1) {
        let fwd = s.forward[i - 1];
        let mut next: BTreeMap<(i8, i8, Vec<i128>), u64> = BTreeMap::new();
        for ((first, cur, k), n) in &layer {
            for sign in [1i8, -1] {
                let ok = if fwd { arc_allowed(*cur, sign) } else { arc_allowed(sign, *cur) };
                if ok {
                    let mut k2 = k.clone();
                    k2[point_edge[pt]] += sign as i128;
                    *next.entry((*first, sign, k2)).or_default() += n;
                }
            }
        }
        layer = next;
    }
    let mut out = Partial::new();
    for ((first, last, k), n) in layer {
        if s.closed {
            let fwd = *s.forward.last().unwrap();
            let ok = if fwd { arc_allowed(last, first) } else { arc_allowed(first, last) };
            if !ok {
                continue;
            }
        }
        *out.entry(k).or_default() += n;
    }
    out
}

fn convolve(a: &Partial, b: &Partial) -> Partial {
    let mut out = Partial::new();
    for (ka, na) in a {
        for (kb, nb) in b {
            let k: Vec<i128> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *out.entry(k).or_default() += na * nb;
        }
    }
    out
}

/// Admissible states by a transfer pass along each strand, combined across
/// strands by convolution.
pub fn enumerate_admissible_states(c: &NormalCurve, cap: usize) -> Result<TraceSupport> {
    let m = c.num_points();
    check_cap(m, cap)?;
    let edges = c.triangulation().num_edges();
    let point_edge = c.point_edges();
    let arcs = c.corner_arcs();
    let parts: Vec<Partial> = strands(c, &arcs)
        .par_iter()
        .map(|s| strand_support(s, &point_edge, edges))
        .collect();
    let mut acc = Partial::new();
    acc.insert(vec![0; edges], 1);
    for p in &parts {
        acc = convolve(&acc, p);
    }
    let admissible = acc.values().sum();
    Ok(TraceSupport { intersection_points: m, admissible_states: admissible, fibers: acc })
}

/// Reference enumeration over all 2^m full states.
pub fn brute_force_states(c: &NormalCurve) -> Result<TraceSupport> {
    let m = c.num_points();
    check_cap(m, BRUTE_FORCE_MAX)?;
    let edges = c.triangulation().num_edges();
    let point_edge = c.point_edges();
    let arcs = c.corner_arcs();
    let mut fibers = Partial::new();
    let mut signs = vec![0i8; m];
    for mask in 0u64..(1u64 << m) {
        for (i, s) in signs.iter_mut().enumerate() {
            *s = if mask >> i & 1 == 1 { -1 } else { 1 };
        }
        if arcs.iter().all(|a| arc_allowed(signs[a.a_point], signs[a.b_point])) {
            let mut k = vec![0i128; edges];
            for (i, &s) in signs.iter().enumerate() {
                k[point_edge[i]] += s as i128;
            }
            *fibers.entry(k).or_default() += 1;
        }
    }
    let admissible = fibers.values().sum();
    Ok(TraceSupport { intersection_points: m, admissible_states: admissible, fibers })
}

/// The three support constraints: |k(e)| ≤ |γ∩e|, matching parity, and
/// k vanishing on boundary arcs.
pub fn support_bounds_check(s: &TraceSupport, c: &NormalCurve) -> bool {
    let t = c.triangulation();
    s.elements().all(|k| {
        k.len() == c.coords().len()
            && k.iter().zip(c.coords()).enumerate().all(|(e, (&ke, &x))| {
                let x = x as i128;
                -x <= ke && ke <= x && (ke - x) % 2 == 0 && (!t.is_boundary(e) || ke == 0)
            })
    })
}

/// Support elements grouped by their class modulo `sub`, with the summed
/// fiber size of each class.
pub fn coset_fibers(s: &TraceSupport, sub: &Lattice) -> BTreeMap<Vec<i128>, (Vec<Vec<i128>>, u64)> {
    let mut out: BTreeMap<Vec<i128>, (Vec<Vec<i128>>, u64)> = BTreeMap::new();
    for (k, &n) in &s.fibers {
        let e = out.entry(sub.reduce(k)).or_default();
        e.0.push(k.clone());
        e.1 += n;
    }
    out
}

/// True iff distinct support elements stay distinct modulo `sub`.
pub fn injective_mod(s: &TraceSupport, sub: &Lattice) -> bool {
    let elems: Vec<&Vec<i128>> = s.elements().collect();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let d: Vec<i128> = elems[i].iter().zip(elems[j]).map(|(a, b)| a - b).collect();
            if sub.contains(&d) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::curves::normal::{closed_curves_up_to, torus_curve};
    use crate::surface::{
        balanced_lattice, definitional_kernel, is_balanced, standard_triangulation, Triangulation,
    };

    fn lone_triangle() -> Arc<Triangulation> {
        Arc::new(
            Triangulation::new(vec![[0, 1, 2]], vec![true; 3], vec!["e1".into(), "e2".into(), "e3".into()], 0)
                .unwrap(),
        )
    }

    #[test]
    fn single_corner_arc() {
        let t = lone_triangle();
        for corner in 0..3 {
            // arc at corner j crosses sides j-1 and j
            let mut x = vec![0u64; 3];
            x[(corner + 2) % 3] = 1;
            x[corner] = 1;
            let c = NormalCurve::new(t.clone(), x).unwrap();
            let s = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(s.admissible_states, 3);
            let mut k_pp = vec![1i128; 3];
            k_pp[(corner + 1) % 3] = 0;
            assert_eq!(s.fibers.get(&k_pp), Some(&1));
            // (+,-) on (a-side, b-side) is the one that dies
            let mut k_bad = vec![0i128; 3];
            k_bad[(corner + 2) % 3] = 1;
            k_bad[corner] = -1;
            assert!(!s.fibers.contains_key(&k_bad));
            assert_eq!(brute_force_states(&c).unwrap(), s);
        }
    }

    #[test]
    fn empty_curve_support() {
        let c = NormalCurve::empty(standard_triangulation(1).unwrap());
        let s = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(s.fibers, BTreeMap::from([(vec![0; 5], 1)]));
        assert!(support_bounds_check(&s, &c));
    }

    #[test]
    fn dp_equals_brute_force_on_all_small_curves() {
        let t = standard_triangulation(1).unwrap();
        for c in closed_curves_up_to(&t, 12) {
            let dp = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(dp, brute_force_states(&c).unwrap(), "{:?}", c.coords());
        }
    }

    #[test]
    fn torus_supports_obey_bounds_and_balance() {
        let t = standard_triangulation(1).unwrap();
        for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2)] {
            let c = torus_curve(p, q).unwrap();
            let s = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
            assert!(support_bounds_check(&s, &c));
            assert!(s.elements().all(|k| is_balanced(&t, k)));
        }
    }

    #[test]
    fn corrupted_support_fails_bounds() {
        let c = torus_curve(1, 0).unwrap();
        let mut s = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
        let k = c.triangulation().unique_boundary_arc().unwrap();
        let mut bad = s.elements().next().unwrap().clone();
        bad[k] = 2;
        s.fibers.insert(bad, 1);
        assert!(!support_bounds_check(&s, &c));
    }

    #[test]
    fn injective_below_n() {
        let b = balanced_lattice(standard_triangulation(1).unwrap());
        for n in [3i128, 5, 7] {
            let k0 = definitional_kernel(&b, n);
            for (p, q) in [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2)] {
                let c = torus_curve(p, q).unwrap();
                if c.max_intersection() as i128 <= n - 1 {
                    let s = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
                    assert!(injective_mod(&s, &k0), "({p},{q}) N={n}");
                    assert!(coset_fibers(&s, &k0).values().all(|(ks, _)| ks.len() == 1));
                }
            }
        }
    }

    #[test]
    fn cap_enforced() {
        let c = torus_curve(1, 2).unwrap();
        assert!(matches!(
            enumerate_admissible_states(&c, 2),
            Err(Error::CapExceeded { cap: 2, .. })
        ));
    }

    #[test]
    fn dp_matches_brute_force_genus_two() {
        let t = standard_triangulation(2).unwrap();
        for c in closed_curves_up_to(&t, 6) {
            let dp = enumerate_admissible_states(&c, DEFAULT_STATE_CAP).unwrap();
            assert!(dp.elements().all(|k| is_balanced(&t, k)));
            assert_eq!(dp, brute_force_states(&c).unwrap());
        }
    }
}
