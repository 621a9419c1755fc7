//! Curves in normal position: per-edge intersection numbers, the arcs they
//! induce inside each face, tracing into components, and homology classes.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::intmat::gcd;
use crate::surface::{standard_triangulation, Slot, Triangulation};

#[derive(Clone, Debug)]
pub struct NormalCurve {
    triangulation: Arc<Triangulation>,
    coords: Vec<u64>,
}

impl PartialEq for NormalCurve {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.triangulation, &other.triangulation) || *self.triangulation == *other.triangulation)
            && self.coords == other.coords
    }
}

impl Eq for NormalCurve {}

/// One arc of the curve inside a face, at corner j between sides j-1 and j.
/// Endpoints are global intersection-point ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerArc {
    pub face: usize,
    pub corner: usize,
    /// endpoint on side j-1
    pub a_point: usize,
    /// endpoint on side j
    pub b_point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub closed: bool,
    pub points: Vec<usize>,
    /// algebraic intersection with each oriented edge
    pub signed: Vec<i64>,
}

impl NormalCurve {
    pub fn new(t: Arc<Triangulation>, coords: Vec<u64>) -> Result<Self> {
        if coords.len() != t.num_edges() {
            return Err(Error::InvalidCurve(format!(
                "expected {} coordinates, got {}",
                t.num_edges(),
                coords.len()
            )));
        }
        for (f, face) in t.faces().iter().enumerate() {
            let x = face.map(|e| coords[e] as i64);
            if (x[0] + x[1] + x[2]) % 2 != 0 {
                return Err(Error::InvalidCurve(format!("odd total on face {f}")));
            }
            for j in 0..3 {
                if x[(j + 2) % 3] + x[j] < x[(j + 1) % 3] {
                    return Err(Error::InvalidCurve(format!("negative corner count on face {f}")));
                }
            }
        }
        Ok(NormalCurve { triangulation: t, coords })
    }

    pub fn empty(t: Arc<Triangulation>) -> Self {
        let n = t.num_edges();
        NormalCurve { triangulation: t, coords: vec![0; n] }
    }

    pub fn triangulation(&self) -> &Arc<Triangulation> {
        &self.triangulation
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn weight(&self) -> u64 {
        self.coords.iter().sum()
    }

    pub fn max_intersection(&self) -> u64 {
        self.coords.iter().copied().max().unwrap_or(0)
    }

    /// Number of arcs at corner j of face f.
    pub fn corner_count(&self, face: usize, corner: usize) -> u64 {
        let x = self.triangulation.faces()[face].map(|e| self.coords[e]);
        (x[(corner + 2) % 3] + x[corner] - x[(corner + 1) % 3]) / 2
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.coords.len() + 1);
        let mut acc = 0usize;
        for &x in &self.coords {
            off.push(acc);
            acc += x as usize;
        }
        off.push(acc);
        off
    }

    pub fn num_points(&self) -> usize {
        self.weight() as usize
    }

    /// Edge carrying each global point id.
    pub fn point_edges(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_points());
        for (e, &x) in self.coords.iter().enumerate() {
            out.extend(std::iter::repeat(e).take(x as usize));
        }
        out
    }

    fn point_at(&self, off: &[usize], s: Slot, local: u64) -> usize {
        let t = &self.triangulation;
        let e = t.edge_at(s);
        let x = self.coords[e];
        let q = if t.slot_sign(s) == 1 { local } else { x - 1 - local };
        off[e] + q as usize
    }

    fn local_of(&self, s: Slot, point_pos: u64) -> u64 {
        let x = self.coords[self.triangulation.edge_at(s)];
        if self.triangulation.slot_sign(s) == 1 {
            point_pos
        } else {
            x - 1 - point_pos
        }
    }

    /// All corner arcs, face by face; the innermost arc at each corner first.
    pub fn corner_arcs(&self) -> Vec<CornerArc> {
        let off = self.offsets();
        let mut out = Vec::new();
        for face in 0..self.triangulation.num_faces() {
            for corner in 0..3 {
                let a_side = Slot { face, side: (corner + 2) % 3 };
                let b_side = Slot { face, side: corner };
                let xa = self.coords[self.triangulation.edge_at(a_side)];
                for k in 0..self.corner_count(face, corner) {
                    out.push(CornerArc {
                        face,
                        corner,
                        a_point: self.point_at(&off, a_side, xa - 1 - k),
                        b_point: self.point_at(&off, b_side, k),
                    });
                }
            }
        }
        out
    }

    /// Follows the arc through the face of `s` starting at local position
    /// `p` on side s; returns the exit side and local position there.
    fn through_face(&self, s: Slot, p: u64) -> (Slot, u64) {
        let n_here = self.corner_count(s.face, s.side);
        if p < n_here {
            let prev = s.prev();
            let x = self.coords[self.triangulation.edge_at(prev)];
            (prev, x - 1 - p)
        } else {
            let x = self.coords[self.triangulation.edge_at(s)];
            (s.next(), x - 1 - p)
        }
    }

    pub fn components(&self) -> Vec<Component> {
        let t = &self.triangulation;
        let off = self.offsets();
        let edges = self.point_edges();
        let mut visited = vec![false; self.num_points()];
        let mut out = Vec::new();
        // arcs first, starting from boundary points, then closed loops
        let mut starts: Vec<(usize, Slot)> = Vec::new();
        for pass in 0..2 {
            for (pt, &e) in edges.iter().enumerate() {
                if t.is_boundary(e) == (pass == 0) {
                    starts.push((pt, t.slots_of(e)[0]));
                }
            }
        }
        for (start, s0) in starts {
            if visited[start] {
                continue;
            }
            let closed = !t.is_boundary(edges[start]);
            let mut signed = vec![0i64; t.num_edges()];
            let mut points = vec![start];
            visited[start] = true;
            let (mut s, mut pt) = (s0, start);
            loop {
                let p = self.local_of(s, (pt - off[edges[pt]]) as u64);
                let (exit, q) = self.through_face(s, p);
                let next = self.point_at(&off, exit, q);
                signed[t.edge_at(exit)] += t.slot_sign(exit);
                if next == start {
                    break;
                }
                visited[next] = true;
                points.push(next);
                match t.partner(exit) {
                    Some(other) => {
                        s = other;
                        pt = next;
                    }
                    None => break,
                }
            }
            out.push(Component { closed, points, signed });
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.triangulation.boundary_edges().iter().all(|&e| self.coords[e] == 0)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Homology class of a connected closed curve in the standard basis
    /// (α_1, β_1, ..., α_g, β_g) of Δ_g, up to orientation.
    pub fn homology(&self) -> Result<Vec<i64>> {
        if !self.is_closed() {
            return Err(Error::InvalidCurve("curve meets the boundary".into()));
        }
        let comps = self.components();
        let [comp] = &comps[..] else {
            return Err(Error::InvalidCurve(format!("{} components", comps.len())));
        };
        let class = homology_of_signed(&self.triangulation, &comp.signed)?;
        Ok(normalize_sign(class))
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            triangulation: triangulation_id(&self.triangulation),
            coords: self.coords.iter().enumerate().map(|(e, &x)| (self.triangulation.label(e).to_string(), x)).collect(),
        }
    }

    /// Curve on `t` from JSON; keys are edge ids or edge labels, missing
    /// edges default to 0.
    pub fn from_json(t: Arc<Triangulation>, j: &CurveJson) -> Result<Self> {
        let mut coords = vec![0u64; t.num_edges()];
        for (key, &x) in &j.coords {
            let e = match key.parse::<usize>() {
                Ok(e) if e < t.num_edges() => e,
                _ => t
                    .edge_by_label(key)
                    .ok_or_else(|| Error::InvalidCurve(format!("unknown edge {key}")))?,
            };
            coords[e] = x;
        }
        NormalCurve::new(t, coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub triangulation: String,
    pub coords: BTreeMap<String, u64>,
}

pub fn triangulation_id(t: &Triangulation) -> String {
    format!("delta-{}", t.genus())
}

pub fn normalize_sign(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

fn copy_edges(t: &Triangulation, copy: usize) -> Result<[usize; 4]> {
    let get = |name: &str| {
        t.edge_by_label(&format!("{name}{copy}"))
            .ok_or_else(|| Error::Unsupported("homology needs the standard triangulation".into()))
    };
    Ok([get("u")?, get("v")?, get("a")?, get("b")?])
}

/// Signed intersection vectors of the basis curves α_i, β_i, oriented so
/// that α_i crosses u_i and β_i crosses a_i positively.
pub fn basis_signed_vectors(t: &Arc<Triangulation>) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for copy in 1..=t.genus() {
        let [u, v, a, b] = copy_edges(t, copy)?;
        for (support, key) in [(vec![u, v], u), (vec![a, b, v], a)] {
            let mut coords = vec![0u64; t.num_edges()];
            support.iter().for_each(|&e| coords[e] = 1);
            let c = NormalCurve::new(t.clone(), coords)?;
            let comps = c.components();
            let mut s = comps[0].signed.clone();
            if s[key] < 0 {
                s.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(s);
        }
    }
    Ok(out)
}

fn homology_of_signed(t: &Arc<Triangulation>, signed: &[i64]) -> Result<Vec<i64>> {
    let basis = basis_signed_vectors(t)?;
    let mut class = Vec::with_capacity(basis.len());
    for copy in 1..=t.genus() {
        let [u, _, a, _] = copy_edges(t, copy)?;
        class.push(signed[u]);
        class.push(signed[a]);
    }
    let mut recon = vec![0i64; signed.len()];
    for (c, b) in class.iter().zip(&basis) {
        for (r, x) in recon.iter_mut().zip(b) {
            *r += c * x;
        }
    }
    if recon != signed {
        return Err(Error::InvalidCurve("intersection vector outside the homology image".into()));
    }
    Ok(class)
}

/// Signed intersection vector of the class p·α + q·β on Δ_1 (and, for
/// longer classes, on Δ_g).
pub fn signed_vector_of_class(t: &Arc<Triangulation>, class: &[i64]) -> Result<Vec<i64>> {
    let basis = basis_signed_vectors(t)?;
    if class.len() != basis.len() {
        return Err(Error::Dimension(format!("class of length {} on genus {}", class.len(), t.genus())));
    }
    let mut v = vec![0i64; t.num_edges()];
    for (c, b) in class.iter().zip(&basis) {
        for (r, x) in v.iter_mut().zip(b) {
            *r += c * x;
        }
    }
    Ok(v)
}

const SEARCH_SLACK: u64 = 8;

/// Minimal-weight connected curve in a given primitive class, searched over
/// coordinate vectors dominating the class's signed intersection vector.
pub fn curve_in_class(t: &Arc<Triangulation>, class: &[i64]) -> Result<NormalCurve> {
    let target = normalize_sign(class.to_vec());
    let v = signed_vector_of_class(t, class)?;
    let low: Vec<u64> = v.iter().map(|x| x.unsigned_abs()).collect();
    let base: u64 = low.iter().sum();
    let free: Vec<usize> = (0..t.num_edges()).filter(|&e| !t.is_boundary(e)).collect();
    for extra in (0..=SEARCH_SLACK).step_by(2) {
        let mut found = None;
        let mut coords = low.clone();
        search(t, &free, 0, extra, &mut coords, &mut |c| {
            if let Ok(curve) = NormalCurve::new(t.clone(), c.to_vec()) {
                if curve.homology().is_ok_and(|h| h == target) {
                    found = Some(curve);
                    return true;
                }
            }
            false
        });
        if let Some(c) = found {
            return Ok(c);
        }
    }
    Err(Error::InvalidCurve(format!(
        "no connected curve in class {class:?} within weight {}",
        base + SEARCH_SLACK
    )))
}

/// Distributes `extra` (even pieces of 2) over the free edges in
/// lexicographic order; stops when `visit` returns true.
fn search(
    t: &Triangulation,
    free: &[usize],
    i: usize,
    extra: u64,
    coords: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if i == free.len() {
        return extra == 0 && visit(coords);
    }
    let e = free[i];
    let mut add = 0;
    while add <= extra {
        coords[e] += add;
        let done = search(t, free, i + 1, extra - add, coords, visit);
        coords[e] -= add;
        if done {
            return true;
        }
        add += 2;
    }
    false
}

/// The (p,q) simple closed curve on Δ_1.
pub fn torus_curve(p: i64, q: i64) -> Result<NormalCurve> {
    if gcd(p as i128, q as i128) != 1 {
        return Err(Error::NotPrimitive(p, q));
    }
    let key = normalize_sign(vec![p, q]);
    static CACHE: OnceLock<Mutex<HashMap<Vec<i64>, NormalCurve>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let c = curve_in_class(&standard_triangulation(1)?, &key)?;
    cache.lock().unwrap().insert(key, c.clone());
    Ok(c)
}

/// Every closed normal curve on `t` of total weight at most `max_weight`,
/// in increasing weight.
pub fn closed_curves_up_to(t: &Arc<Triangulation>, max_weight: u64) -> Vec<NormalCurve> {
    let free: Vec<usize> = (0..t.num_edges()).filter(|&e| !t.is_boundary(e)).collect();
    let mut out = Vec::new();
    for w in 0..=max_weight {
        let mut coords = vec![0u64; t.num_edges()];
        fill(&free, 0, w, &mut coords, &mut |c| {
            if let Ok(curve) = NormalCurve::new(t.clone(), c.to_vec()) {
                out.push(curve);
            }
        });
    }
    out
}

fn fill(free: &[usize], i: usize, rest: u64, coords: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if i == free.len() {
        if rest == 0 {
            visit(coords);
        }
        return;
    }
    for x in 0..=rest {
        coords[free[i]] = x;
        fill(free, i + 1, rest - x, coords, visit);
    }
    coords[free[i]] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta1() -> Arc<Triangulation> {
        standard_triangulation(1).unwrap()
    }

    fn by_label(c: &NormalCurve, l: &str) -> u64 {
        c.coords()[c.triangulation().edge_by_label(l).unwrap()]
    }

    #[test]
    fn face_conditions_enforced() {
        let t = delta1();
        // u alone leaves odd totals
        let mut c = vec![0; 5];
        c[t.edge_by_label("u1").unwrap()] = 1;
        assert!(matches!(NormalCurve::new(t.clone(), c), Err(Error::InvalidCurve(_))));
        assert!(NormalCurve::new(t, vec![0; 4]).is_err());
    }

    #[test]
    fn basis_curves_are_connected_and_dual() {
        let t = delta1();
        let b = basis_signed_vectors(&t).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(homology_of_signed(&t, &b[0]).unwrap(), vec![1, 0]);
        assert_eq!(homology_of_signed(&t, &b[1]).unwrap(), vec![0, 1]);
    }

    /// Exhaustive oracle: every connected closed curve up to weight 8, the
    /// lightest one per class.
    fn oracle() -> BTreeMap<Vec<i64>, Vec<NormalCurve>> {
        let mut best: BTreeMap<Vec<i64>, Vec<NormalCurve>> = BTreeMap::new();
        for c in closed_curves_up_to(&delta1(), 8) {
            if !c.is_connected() {
                continue;
            }
            let Ok(h) = c.homology() else { continue };
            let entry = best.entry(h).or_default();
            match entry.first().map(|b| b.weight()) {
                Some(w) if w < c.weight() => {}
                Some(w) if w == c.weight() => entry.push(c),
                _ => *entry = vec![c],
            }
        }
        best
    }

    #[test]
    fn torus_curves_match_exhaustive_oracle() {
        let best = oracle();
        for (p, q) in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)] {
            let c = torus_curve(p, q).unwrap();
            let lightest = &best[&normalize_sign(vec![p, q])];
            assert_eq!(lightest.len(), 1, "class ({p},{q}) has a unique lightest curve");
            assert_eq!(c, lightest[0]);
        }
    }

    #[test]
    fn every_connected_curve_has_a_primitive_class() {
        for c in closed_curves_up_to(&delta1(), 8) {
            if c.is_connected() && c.weight() > 0 {
                let h = c.homology().unwrap();
                // zero class: the boundary-parallel loop
                assert!(h == vec![0, 0] || gcd(h[0] as i128, h[1] as i128) == 1, "{h:?}");
            }
        }
    }

    #[test]
    fn torus_fixture_coordinates() {
        let c10 = torus_curve(1, 0).unwrap();
        let c01 = torus_curve(0, 1).unwrap();
        let c11 = torus_curve(1, 1).unwrap();
        assert_eq!((by_label(&c10, "u1"), by_label(&c10, "v1"), by_label(&c10, "a1")), (1, 1, 0));
        assert_eq!((by_label(&c01, "a1"), by_label(&c01, "b1"), by_label(&c01, "u1")), (1, 1, 0));
        for e in 0..5 {
            assert!(c11.coords()[e] <= c10.coords()[e] + c01.coords()[e]);
        }
        assert_eq!(by_label(&c10, "k1") + by_label(&c01, "k1") + by_label(&c11, "k1"), 0);
    }

    #[test]
    fn non_primitive_rejected() {
        assert!(matches!(torus_curve(2, 2), Err(Error::NotPrimitive(2, 2))));
        assert!(matches!(torus_curve(0, 0), Err(Error::NotPrimitive(0, 0))));
    }

    #[test]
    fn tracing_counts_components() {
        let t = delta1();
        let c = torus_curve(1, 0).unwrap();
        let doubled: Vec<u64> = c.coords().iter().map(|x| 2 * x).collect();
        let d = NormalCurve::new(t.clone(), doubled).unwrap();
        assert_eq!(d.components().len(), 2);
        assert!(d.homology().is_err());
        assert!(NormalCurve::empty(t).components().is_empty());
    }

    #[test]
    fn corner_arcs_cover_each_point_twice() {
        let c = torus_curve(2, 1).unwrap();
        let mut deg = vec![0; c.num_points()];
        for a in c.corner_arcs() {
            deg[a.a_point] += 1;
            deg[a.b_point] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
    }

    #[test]
    fn higher_genus_basis() {
        let t = standard_triangulation(2).unwrap();
        let b = basis_signed_vectors(&t).unwrap();
        assert_eq!(b.len(), 4);
        for (i, s) in b.iter().enumerate() {
            let mut e = vec![0; 4];
            e[i] = 1;
            assert_eq!(homology_of_signed(&t, s).unwrap(), e);
        }
        let c = curve_in_class(&t, &[1, 0, 1, 0]).unwrap();
        assert!(c.is_connected());
    }

    #[test]
    fn json_round_trip_with_labels() {
        let t = delta1();
        let c = torus_curve(1, 2).unwrap();
        let back = NormalCurve::from_json(t.clone(), &c.to_json()).unwrap();
        assert_eq!(back, c);
        let j: CurveJson =
            serde_json::from_str(r#"{"triangulation":"delta-1","coords":{"u1":1,"v1":1}}"#).unwrap();
        assert_eq!(NormalCurve::from_json(t, &j).unwrap(), torus_curve(1, 0).unwrap());
    }
}
