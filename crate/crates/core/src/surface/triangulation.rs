//! Combinatorial triangulations of marked surfaces.
//!
//! A face lists the edges on its three sides in counter-clockwise order;
//! side j runs from corner j to corner j+1. An inner edge occupies two
//! sides which are glued orientation-reversingly, a boundary arc one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{smith_normal_form, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub face: usize,
    pub side: usize,
}

impl Slot {
    pub fn next(self) -> Slot {
        Slot { face: self.face, side: (self.side + 1) % 3 }
    }

    pub fn prev(self) -> Slot {
        Slot { face: self.face, side: (self.side + 2) % 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    faces: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    labels: Vec<String>,
    genus: usize,
    /// slots of each edge; the first one fixes the edge's orientation
    slots: Vec<Vec<Slot>>,
    vertex_of_corner: Vec<[usize; 3]>,
    vertices: usize,
    boundary_components: usize,
    euler: i64,
    h1_rank: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

impl Triangulation {
    /// Validates the combinatorics and topology of a face list.
    pub fn new(
        faces: Vec<[usize; 3]>,
        boundary: Vec<bool>,
        labels: Vec<String>,
        genus: usize,
    ) -> Result<Self> {
        let ne = boundary.len();
        if labels.len() != ne {
            return Err(Error::InvalidTriangulation("label count differs from edge count".into()));
        }
        let mut slots = vec![Vec::new(); ne];
        for (f, face) in faces.iter().enumerate() {
            for (side, &e) in face.iter().enumerate() {
                if e >= ne {
                    return Err(Error::InvalidTriangulation(format!("face {f} uses unknown edge {e}")));
                }
                slots[e].push(Slot { face: f, side });
            }
        }
        for (e, s) in slots.iter().enumerate() {
            let want = if boundary[e] { 1 } else { 2 };
            if s.len() != want {
                return Err(Error::InvalidTriangulation(format!(
                    "edge {e} ({}) occupies {} sides, expected {want}",
                    labels[e],
                    s.len()
                )));
            }
        }
        let inner = boundary.iter().filter(|&&b| !b).count();
        let arcs = ne - inner;
        if 3 * faces.len() != 2 * inner + arcs {
            return Err(Error::InvalidTriangulation("3F != 2E_inner + arcs".into()));
        }

        // corners: start points of sides
        let nf = faces.len();
        let corner = |s: Slot| 3 * s.face + s.side;
        let mut uf = UnionFind((0..3 * nf).collect());
        for s in &slots {
            if let [s1, s2] = s[..] {
                uf.union(corner(s1), corner(s2.next()));
                uf.union(corner(s1.next()), corner(s2));
            }
        }
        let mut ids = std::collections::BTreeMap::new();
        let mut vertex_of_corner = vec![[0usize; 3]; nf];
        for f in 0..nf {
            for j in 0..3 {
                let root = uf.find(3 * f + j);
                let next = ids.len();
                vertex_of_corner[f][j] = *ids.entry(root).or_insert(next);
            }
        }
        let nv = ids.len();
        let euler = nv as i64 - ne as i64 + nf as i64;

        // boundary components: components of the graph formed by boundary arcs,
        // plus vertices untouched by any arc (interior punctures)
        let mut buf = UnionFind((0..nv).collect());
        let mut touched = vec![false; nv];
        for e in 0..ne {
            if boundary[e] {
                let s = slots[e][0];
                let u = vertex_of_corner[s.face][s.side];
                let v = vertex_of_corner[s.face][(s.side + 1) % 3];
                touched[u] = true;
                touched[v] = true;
                buf.union(u, v);
            }
        }
        let mut roots = std::collections::BTreeSet::new();
        let mut punctures = 0;
        for v in 0..nv {
            if touched[v] {
                roots.insert(buf.find(v));
            } else {
                punctures += 1;
            }
        }
        let boundary_components = roots.len() + punctures;

        // H1 of the glued CW complex over Q
        let mut d1 = IntMatrix::zeros(nv, ne);
        let mut d2 = IntMatrix::zeros(ne, nf);
        for e in 0..ne {
            let s = slots[e][0];
            let u = vertex_of_corner[s.face][s.side];
            let v = vertex_of_corner[s.face][(s.side + 1) % 3];
            d1[(u, e)] -= 1;
            d1[(v, e)] += 1;
            for (k, s) in slots[e].iter().enumerate() {
                d2[(e, s.face)] += if k == 0 { 1 } else { -1 };
            }
        }
        let r1 = smith_normal_form(&d1).rank();
        let r2 = smith_normal_form(&d2).rank();
        let h1_rank = ne - r1 - r2;

        let t = Triangulation {
            faces,
            boundary,
            labels,
            genus,
            slots,
            vertex_of_corner,
            vertices: nv,
            boundary_components,
            euler,
            h1_rank,
        };
        t.check_topology()?;
        Ok(t)
    }

    fn check_topology(&self) -> Result<()> {
        let g = self.genus as i64;
        let b = self.boundary_components as i64;
        let punctures = (0..self.vertices)
            .filter(|&v| !self.boundary_vertices().contains(&v))
            .count() as i64;
        let expect_euler = 2 - 2 * g - b + punctures;
        if self.euler != expect_euler {
            return Err(Error::InvalidTriangulation(format!(
                "Euler characteristic {} does not match genus {} with {} boundary components",
                self.euler, g, b
            )));
        }
        let closed_up = b - punctures;
        let expect_h1 = if closed_up == 0 { 2 * g } else { 2 * g + closed_up - 1 };
        if self.h1_rank as i64 != expect_h1 {
            return Err(Error::InvalidTriangulation(format!(
                "first homology has rank {}, expected {}",
                self.h1_rank, expect_h1
            )));
        }
        Ok(())
    }

    fn boundary_vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for e in 0..self.num_edges() {
            if self.boundary[e] {
                let s = self.slots[e][0];
                out.push(self.vertex_of_corner[s.face][s.side]);
                out.push(self.vertex_of_corner[s.face][(s.side + 1) % 3]);
            }
        }
        out
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.boundary.len()
    }

    pub fn num_inner_edges(&self) -> usize {
        self.boundary.iter().filter(|&&b| !b).count()
    }

    pub fn is_boundary(&self, e: usize) -> bool {
        self.boundary[e]
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.boundary[e]).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn edge_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn h1_rank(&self) -> usize {
        self.h1_rank
    }

    pub fn boundary_components(&self) -> usize {
        self.boundary_components
    }

    pub fn edge_at(&self, s: Slot) -> usize {
        self.faces[s.face][s.side]
    }

    pub fn slots_of(&self, e: usize) -> &[Slot] {
        &self.slots[e]
    }

    /// +1 if the side runs along the edge's orientation, -1 otherwise.
    pub fn slot_sign(&self, s: Slot) -> i64 {
        if self.slots[self.edge_at(s)][0] == s {
            1
        } else {
            -1
        }
    }

    /// The side glued to `s`, if the edge is inner.
    pub fn partner(&self, s: Slot) -> Option<Slot> {
        let e = self.edge_at(s);
        match self.slots[e][..] {
            [a, b] => Some(if a == s { b } else { a }),
            _ => None,
        }
    }

    /// Glued side pairs as [face, side, face, side], in edge order.
    pub fn gluing(&self) -> Vec<[usize; 4]> {
        self.slots
            .iter()
            .filter_map(|s| match s[..] {
                [a, b] => Some([a.face, a.side, b.face, b.side]),
                _ => None,
            })
            .collect()
    }

    /// The unique boundary arc of a Σ_g* triangulation.
    pub fn unique_boundary_arc(&self) -> Result<usize> {
        match self.boundary_edges()[..] {
            [e] => Ok(e),
            ref other => Err(Error::InvalidTriangulation(format!(
                "expected exactly one boundary arc, found {}",
                other.len()
            ))),
        }
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson {
            faces: self.faces.iter().map(|f| f.to_vec()).collect(),
            edges: (0..self.num_edges())
                .map(|e| EdgeJson { id: e, label: Some(self.labels[e].clone()), boundary: self.boundary[e] })
                .collect(),
            gluing: self.gluing().iter().map(|g| g.to_vec()).collect(),
            genus: self.genus,
            check: Some(CheckJson { euler: self.euler, h1rank: self.h1_rank }),
        }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self> {
        let mut faces = Vec::with_capacity(j.faces.len());
        for f in &j.faces {
            let arr: [usize; 3] = f
                .as_slice()
                .try_into()
                .map_err(|_| Error::InvalidTriangulation("faces need exactly three sides".into()))?;
            faces.push(arr);
        }
        let mut edges = j.edges.clone();
        edges.sort_by_key(|e| e.id);
        if edges.iter().enumerate().any(|(i, e)| e.id != i) {
            return Err(Error::InvalidTriangulation("edge ids must be 0..E-1".into()));
        }
        let labels = edges
            .iter()
            .map(|e| e.label.clone().unwrap_or_else(|| format!("e{}", e.id)))
            .collect();
        let t = Triangulation::new(faces, edges.iter().map(|e| e.boundary).collect(), labels, j.genus)?;
        let mut given: Vec<[usize; 4]> = Vec::new();
        for g in &j.gluing {
            let arr: [usize; 4] = g
                .as_slice()
                .try_into()
                .map_err(|_| Error::InvalidTriangulation("gluing entries have four indices".into()))?;
            let (a, b) = ((arr[0], arr[1]), (arr[2], arr[3]));
            given.push(if a <= b { arr } else { [arr[2], arr[3], arr[0], arr[1]] });
        }
        given.sort();
        let mut derived = t.gluing();
        derived.sort();
        if !j.gluing.is_empty() && given != derived {
            return Err(Error::InvalidTriangulation("gluing disagrees with face edge labels".into()));
        }
        if let Some(c) = &j.check {
            if c.euler != t.euler || c.h1rank != t.h1_rank {
                return Err(Error::InvalidTriangulation("stated check values do not match".into()));
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub euler: i64,
    pub h1rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub faces: Vec<Vec<usize>>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub gluing: Vec<Vec<usize>>,
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckJson>,
}

/// Raw face data used while assembling Δ_g before validation.
#[derive(Clone, Debug)]
struct Raw {
    faces: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    labels: Vec<String>,
}

impl Raw {
    fn add_edge(&mut self, label: String, boundary: bool) -> usize {
        self.boundary.push(boundary);
        self.labels.push(label);
        self.boundary.len() - 1
    }

    /// Glue arcs x and y to two sides of a new triangle; its third side is
    /// a new boundary arc, which is returned.
    fn fuse(&mut self, x: usize, y: usize, label: String) -> usize {
        assert!(self.boundary[x] && self.boundary[y] && x != y);
        self.boundary[x] = false;
        self.boundary[y] = false;
        let k = self.add_edge(label, true);
        self.faces.push([x, y, k]);
        k
    }

    fn disjoint_union(&mut self, other: &Raw) -> usize {
        let off = self.boundary.len();
        self.boundary.extend(&other.boundary);
        self.labels.extend(other.labels.iter().cloned());
        self.faces
            .extend(other.faces.iter().map(|f| [f[0] + off, f[1] + off, f[2] + off]));
        off
    }
}

/// The annulus with one arc on each boundary circle, split into two
/// triangles, then fused along its two arcs. Returns the raw data and
/// its boundary arc.
fn genus_one(copy: usize) -> (Raw, usize) {
    let mut r = Raw { faces: vec![], boundary: vec![], labels: vec![] };
    let b = r.add_edge(format!("b{copy}"), true);
    let u = r.add_edge(format!("u{copy}"), false);
    let v = r.add_edge(format!("v{copy}"), false);
    let a = r.add_edge(format!("a{copy}"), true);
    // unit square with x = 0 and x = 1 identified; bottom side b, top side a,
    // vertical side u, diagonal v
    r.faces.push([b, u, v]);
    r.faces.push([v, a, u]);
    let k = r.fuse(a, b, format!("k{copy}"));
    (r, k)
}

/// Δ_g: the triangulation of Σ_g* obtained by wedging g copies of Δ_1.
pub fn build_sigma_g_star(g: usize) -> Result<Triangulation> {
    if g == 0 {
        return Err(Error::InvalidTriangulation("genus must be positive".into()));
    }
    let (mut raw, mut arc) = genus_one(1);
    for copy in 2..=g {
        let (other, other_arc) = genus_one(copy);
        let off = raw.disjoint_union(&other);
        arc = raw.fuse(arc, other_arc + off, format!("w{copy}"));
    }
    Triangulation::new(raw.faces, raw.boundary, raw.labels, g)
}

/// Shared copy of Δ_g, built once per genus.
pub fn standard_triangulation(g: usize) -> Result<Arc<Triangulation>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Triangulation>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&g) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_sigma_g_star(g)?);
    cache.lock().unwrap().insert(g, t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_one_star() {
        let t = build_sigma_g_star(1).unwrap();
        assert_eq!(t.num_faces(), 3);
        assert_eq!(t.num_edges(), 5);
        assert_eq!(t.num_inner_edges(), 4);
        assert_eq!(t.boundary_edges().len(), 1);
        assert_eq!(t.vertices(), 1);
        assert_eq!(t.euler_characteristic(), -1);
        assert_eq!(t.h1_rank(), 2);
    }

    #[test]
    fn higher_genus_counts() {
        for g in 1..=4 {
            let t = build_sigma_g_star(g).unwrap();
            assert_eq!(t.num_faces(), 4 * g - 1);
            assert_eq!(t.num_edges(), 6 * g - 1);
            assert_eq!(3 * t.num_faces(), 2 * t.num_inner_edges() + 1);
            assert_eq!(t.h1_rank(), 2 * g);
            assert_eq!(t.euler_characteristic(), 1 - 2 * g as i64);
            assert_eq!(t.boundary_edges().len(), 1);
        }
    }

    #[test]
    fn lone_triangle_is_a_disk() {
        let t = Triangulation::new(
            vec![[0, 1, 2]],
            vec![true; 3],
            vec!["e1".into(), "e2".into(), "e3".into()],
            0,
        )
        .unwrap();
        assert_eq!(t.vertices(), 3);
        assert_eq!(t.boundary_components(), 1);
        assert_eq!(t.h1_rank(), 0);
    }

    #[test]
    fn wrong_genus_rejected() {
        let t = build_sigma_g_star(1).unwrap();
        let r = Triangulation::new(t.faces.clone(), t.boundary.clone(), t.labels.clone(), 2);
        assert!(matches!(r, Err(Error::InvalidTriangulation(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = build_sigma_g_star(2).unwrap();
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back = Triangulation::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn partners_reverse_orientation() {
        let t = build_sigma_g_star(2).unwrap();
        for e in 0..t.num_edges() {
            if let [s1, s2] = t.slots_of(e)[..] {
                assert_eq!(t.partner(s1), Some(s2));
                assert_eq!(t.slot_sign(s1), 1);
                assert_eq!(t.slot_sign(s2), -1);
            }
        }
    }
}
