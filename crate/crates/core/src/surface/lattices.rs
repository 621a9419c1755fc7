//! Balanced lattices, the Weil–Petersson form, central sublattices and
//! the refined lattice of a Σ_g* triangulation.

use std::sync::Arc;

use serde::Serialize;

use super::triangulation::{Slot, Triangulation};
use crate::error::{Error, Result};
use crate::exact::{form_kernel_mod, kernel_mod, sublattice_index, Index, IntMatrix, Lattice, SkewLattice};

/// a_{e,e'}: ordered ccw-adjacent side pairs per face.
pub fn adjacency_counts(t: &Triangulation) -> IntMatrix {
    let n = t.num_edges();
    let mut a = IntMatrix::zeros(n, n);
    for f in t.faces() {
        for j in 0..3 {
            a[(f[j], f[(j + 1) % 3])] += 1;
        }
    }
    a
}

/// Weil–Petersson form on Z^E.
pub fn wp_form(t: &Triangulation) -> IntMatrix {
    let a = adjacency_counts(t);
    let mut w = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            w[(i, j)] = a[(i, j)] - a[(j, i)];
        }
    }
    w
}

pub fn wp_pair(w: &IntMatrix, x: &[i128], y: &[i128]) -> i128 {
    let wy = w.mul_vec(y);
    x.iter().zip(&wy).map(|(a, b)| a * b).sum()
}

/// Face-by-edge incidence, counting sides.
pub fn face_incidence(t: &Triangulation) -> IntMatrix {
    let mut m = IntMatrix::zeros(t.num_faces(), t.num_edges());
    for (i, f) in t.faces().iter().enumerate() {
        for &e in f {
            m[(i, e)] += 1;
        }
    }
    m
}

pub fn is_balanced(t: &Triangulation, k: &[i128]) -> bool {
    t.faces().iter().all(|f| (k[f[0]] + k[f[1]] + k[f[2]]).rem_euclid(2) == 0)
}

/// k_∂: every edge ↦ 2.
pub fn k_boundary(t: &Triangulation) -> Vec<i128> {
    vec![2; t.num_edges()]
}

#[derive(Clone, Debug)]
pub struct BalancedLattice {
    pub triangulation: Arc<Triangulation>,
    /// K_Δ ⊂ Z^E
    pub lattice: Lattice,
    /// WP on Z^E
    pub wp: IntMatrix,
    /// WP restricted to the HNF basis of K_Δ
    pub skew: SkewLattice,
}

pub fn balanced_lattice(t: Arc<Triangulation>) -> BalancedLattice {
    let lattice = kernel_mod(&face_incidence(&t), 2);
    let wp = wp_form(&t);
    let b = lattice.basis_matrix();
    let form = b.mul(&wp).mul(&b.transpose());
    let labels = (1..=lattice.rank()).map(|i| format!("k{i}")).collect();
    let skew = SkewLattice::new(format!("K(genus {})", t.genus()), labels, form)
        .expect("pullback of a skew form is skew");
    BalancedLattice { triangulation: t, lattice, wp, skew }
}

impl BalancedLattice {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Ambient edge vector of a coordinate vector on the HNF basis.
    pub fn to_ambient(&self, coords: &[i128]) -> Vec<i128> {
        self.lattice.combine(coords)
    }

    pub fn to_coords(&self, v: &[i128]) -> Option<Vec<i128>> {
        self.lattice.coords(v)
    }
}

/// Both descriptions of K⁰ inside Z^E.
#[derive(Clone, Debug)]
pub struct CentralSublattice {
    pub definitional: Lattice,
    pub formula: Lattice,
    pub equal: bool,
}

/// The mod-N kernel of the WP form on K_Δ, as a lattice in Z^E.
pub fn definitional_kernel(b: &BalancedLattice, n: i128) -> Lattice {
    let k = form_kernel_mod(&b.skew, n);
    let bm = b.lattice.basis_matrix();
    let gens: Vec<Vec<i128>> = k.basis().iter().map(|c| bm.vec_mul(c)).collect();
    Lattice::from_generators(&gens, b.lattice.ambient())
}

pub fn central_sublattice(b: &BalancedLattice, n: i128) -> CentralSublattice {
    let definitional = definitional_kernel(b, n);
    let mut gens: Vec<Vec<i128>> =
        b.lattice.basis().iter().map(|r| r.iter().map(|x| x * n).collect()).collect();
    gens.push(k_boundary(&b.triangulation));
    let formula = Lattice::from_generators(&gens, b.lattice.ambient());
    let equal = definitional == formula;
    CentralSublattice { definitional, formula, equal }
}

/// √[lattice : kernel], or the reason it is not an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PiDegreeReport {
    pub index: Index,
    pub pi_degree: Option<u128>,
    pub perfect_square: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn pi_degree_from_index(index: Index) -> PiDegreeReport {
    match index {
        Index::Infinite => PiDegreeReport {
            index,
            pi_degree: None,
            perfect_square: false,
            note: Some("kernel has lower rank than the lattice".into()),
        },
        Index::Finite(i) => {
            let r = isqrt(i);
            if r * r == i {
                PiDegreeReport { index, pi_degree: Some(r), perfect_square: true, note: None }
            } else {
                PiDegreeReport {
                    index,
                    pi_degree: None,
                    perfect_square: false,
                    note: Some(format!("index {i} is not a perfect square")),
                }
            }
        }
    }
}

/// PI-degree of the quantum torus on a skew lattice at an odd root of unity of order N.
pub fn pi_degree(l: &SkewLattice, n: i128) -> PiDegreeReport {
    let full = Lattice::full(l.rank());
    let k = form_kernel_mod(l, n);
    pi_degree_from_index(sublattice_index(&full, &k).expect("kernel lies in the lattice"))
}

/// K̄_Δ = K_Δ ⊕ Z·k̂ with its form pulled back from Δ*.
#[derive(Clone, Debug)]
pub struct RefinedLattice {
    pub base: BalancedLattice,
    /// Δ* = Δ plus the triangle (a_∂, a'_∂, a''_∂)
    pub star: Arc<Triangulation>,
    pub boundary_arc: usize,
    /// K̄_Δ inside Z^{E+1}; the last coordinate is the value on â_∂
    pub lattice: Lattice,
    /// i : Z^{E+1} → Z^{E+2} as a matrix acting on row vectors
    pub embedding: IntMatrix,
    pub skew: SkewLattice,
}

fn star_triangulation(t: &Triangulation, arc: usize) -> Result<Triangulation> {
    let mut faces = t.faces().to_vec();
    let mut boundary: Vec<bool> = (0..t.num_edges()).map(|e| t.is_boundary(e)).collect();
    let mut labels = t.labels().to_vec();
    boundary[arc] = false;
    let a1 = boundary.len();
    boundary.push(true);
    labels.push("bd1".into());
    let a2 = boundary.len();
    boundary.push(true);
    labels.push("bd2".into());
    faces.push([arc, a1, a2]);
    Triangulation::new(faces, boundary, labels, t.genus())
}

pub fn refined_lattice(t: Arc<Triangulation>) -> Result<RefinedLattice> {
    let arc = t.unique_boundary_arc()?;
    let base = balanced_lattice(t.clone());
    let star = Arc::new(star_triangulation(&t, arc)?);
    let ne = t.num_edges();
    let (hat, a1) = (ne, ne);
    let mut emb = IntMatrix::zeros(ne + 1, ne + 2);
    for e in 0..ne {
        emb[(e, e)] = 1;
    }
    // k'(a_∂) = k(a_∂) + k(â_∂), k'(a'_∂) = -k(a_∂), k'(a''_∂) = 0
    emb[(hat, arc)] = 1;
    emb[(arc, a1)] = -1;

    let mut gens: Vec<Vec<i128>> = base
        .lattice
        .basis()
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.push(0);
            v
        })
        .collect();
    let mut khat = vec![0i128; ne + 1];
    khat[hat] = 2;
    gens.push(khat);
    let lattice = Lattice::from_generators(&gens, ne + 1);

    let wp_star = wp_form(&star);
    let b = lattice.basis_matrix().mul(&emb);
    for row in b.to_rows() {
        if !is_balanced(&star, &row) {
            return Err(Error::InvalidTriangulation("embedding leaves the balanced lattice".into()));
        }
    }
    let form = b.mul(&wp_star).mul(&b.transpose());
    let labels = (1..=lattice.rank()).map(|i| format!("kbar{i}")).collect();
    let skew = SkewLattice::new(format!("Kbar(genus {})", t.genus()), labels, form)?;
    Ok(RefinedLattice { base, star, boundary_arc: arc, lattice, embedding: emb, skew })
}

impl RefinedLattice {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// i applied to an ambient vector of Z^{E+1}.
    pub fn embed(&self, v: &[i128]) -> Vec<i128> {
        self.embedding.vec_mul(v)
    }

    /// ⟨x, y⟩ for ambient vectors, evaluated through i on Δ*.
    pub fn pair(&self, x: &[i128], y: &[i128]) -> i128 {
        let w = wp_form(&self.star);
        wp_pair(&w, &self.embed(x), &self.embed(y))
    }

    pub fn khat(&self) -> Vec<i128> {
        let mut v = vec![0i128; self.lattice.ambient()];
        v[self.lattice.ambient() - 1] = 2;
        v
    }

    pub fn definitional_kernel(&self, n: i128) -> Lattice {
        let k = form_kernel_mod(&self.skew, n);
        let bm = self.lattice.basis_matrix();
        let gens: Vec<Vec<i128>> = k.basis().iter().map(|c| bm.vec_mul(c)).collect();
        Lattice::from_generators(&gens, self.lattice.ambient())
    }

    /// K⁰ ⊕ NZ·k̂ with K⁰ the formula N·K_Δ + Z·k_∂.
    pub fn closed_formula_kernel(&self, n: i128) -> Lattice {
        let cs = central_sublattice(&self.base, n);
        let mut gens: Vec<Vec<i128>> = cs
            .formula
            .basis()
            .iter()
            .map(|r| {
                let mut v = r.clone();
                v.push(0);
                v
            })
            .collect();
        gens.push(self.khat().iter().map(|x| x * n).collect());
        Lattice::from_generators(&gens, self.lattice.ambient())
    }

    pub fn report(&self, n: i128) -> RefinedReport {
        let genus = self.base.triangulation.genus() as u32;
        let def = self.definitional_kernel(n);
        let formula = self.closed_formula_kernel(n);
        let def_index = sublattice_index(&self.lattice, &def).expect("kernel inside lattice");
        let formula_index = sublattice_index(&self.lattice, &formula).expect("formula inside lattice");
        let pi = pi_degree_from_index(def_index);
        let target_index = (n as u128).pow(6 * genus);
        let expected_pi = (n as u128).pow(3 * genus);
        let square_target = def_index == Index::Finite(target_index);
        RefinedReport {
            genus: genus as usize,
            n: n as u64,
            rank: self.rank(),
            definitional_index: def_index,
            formula_index,
            kernels_equal: def == formula,
            pi_degree: pi,
            expected_pi_degree: expected_pi,
            index_is_target_square: square_target,
            pi_degree_asserted: square_target.then_some(expected_pi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinedReport {
    pub genus: usize,
    pub n: u64,
    pub rank: usize,
    pub definitional_index: Index,
    pub formula_index: Index,
    pub kernels_equal: bool,
    pub pi_degree: PiDegreeReport,
    pub expected_pi_degree: u128,
    pub index_is_target_square: bool,
    pub pi_degree_asserted: Option<u128>,
}

/// Sides of a face in ccw order, for callers walking faces.
pub fn face_slots(face: usize) -> [Slot; 3] {
    [0, 1, 2].map(|side| Slot { face, side })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_sigma_g_star;

    fn lone_triangle() -> Arc<Triangulation> {
        Arc::new(
            Triangulation::new(vec![[0, 1, 2]], vec![true; 3], vec!["e1".into(), "e2".into(), "e3".into()], 0)
                .unwrap(),
        )
    }

    #[test]
    fn lone_triangle_adjacency() {
        let a = adjacency_counts(&lone_triangle());
        assert_eq!(a, IntMatrix::from_rows(&[vec![0i64, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]));
    }

    #[test]
    fn lone_triangle_balanced() {
        let b = balanced_lattice(lone_triangle());
        assert_eq!(b.lattice.basis(), &[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2]]);
        let expected = Lattice::from_generators(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 2]], 3);
        assert_eq!(b.lattice, expected);
        assert_eq!(sublattice_index(&Lattice::full(3), &b.lattice).unwrap(), Index::Finite(2));
    }

    /// Independent count of a_{e,e'} by walking every face corner.
    fn adjacency_by_corners(t: &Triangulation) -> IntMatrix {
        let n = t.num_edges();
        let mut a = IntMatrix::zeros(n, n);
        for f in 0..t.num_faces() {
            for s in face_slots(f) {
                // the corner at the end of side s sits between s and its successor
                a[(t.edge_at(s), t.edge_at(s.next()))] += 1;
            }
        }
        a
    }

    #[test]
    fn wp_delta1_fixture() {
        let t = build_sigma_g_star(1).unwrap();
        assert_eq!(adjacency_counts(&t), adjacency_by_corners(&t));
        let w = wp_form(&t);
        assert!(w.is_skew_symmetric());
        // edges: b1, u1, v1, a1, k1; faces [b,u,v], [v,a,u], [a,b,k]
        let expect = IntMatrix::from_rows(&[
            vec![0i64, 1, -1, -1, 1],
            vec![-1, 0, 2, -1, 0],
            vec![1, -2, 0, 1, 0],
            vec![1, 1, -1, 0, -1],
            vec![-1, 0, 0, 1, 0],
        ]);
        assert_eq!(w, expect);
    }

    #[test]
    fn boundary_vector_is_central() {
        for g in 1..=3 {
            let b = balanced_lattice(Arc::new(build_sigma_g_star(g).unwrap()));
            let kd = k_boundary(&b.triangulation);
            assert!(b.lattice.contains(&kd));
            for k in b.lattice.basis() {
                assert_eq!(wp_pair(&b.wp, &kd, k), 0);
            }
        }
    }

    #[test]
    fn central_sublattice_delta1() {
        let b = balanced_lattice(Arc::new(build_sigma_g_star(1).unwrap()));
        assert_eq!(b.rank(), 5);
        let cs = central_sublattice(&b, 3);
        assert!(cs.equal);
        let cs5 = central_sublattice(&b, 5);
        assert_eq!(sublattice_index(&b.lattice, &cs5.definitional).unwrap(), Index::Finite(625));
        assert_eq!(definitional_kernel(&b, 1), b.lattice);
        assert_eq!(pi_degree(&b.skew, 5).pi_degree, Some(25));
    }

    #[test]
    fn pi_degree_delta2() {
        let b = balanced_lattice(Arc::new(build_sigma_g_star(2).unwrap()));
        assert_eq!(pi_degree(&b.skew, 3).pi_degree, Some(243));
    }

    #[test]
    fn non_square_index_is_reported() {
        let l = SkewLattice::unlabeled("zero", IntMatrix::zeros(1, 1)).unwrap();
        let r = pi_degree(&l, 3);
        assert_eq!(r.pi_degree, Some(1));
        let r = pi_degree_from_index(Index::Finite(27));
        assert!(!r.perfect_square);
        assert!(r.note.is_some());
    }

    #[test]
    fn refined_lattice_shape() {
        let t = Arc::new(build_sigma_g_star(1).unwrap());
        let r = refined_lattice(t).unwrap();
        assert_eq!(r.rank(), 6);
        assert!(r.skew.form.is_skew_symmetric());
        for v in r.lattice.basis() {
            let img = r.embed(v);
            assert_eq!(img[img.len() - 1], 0);
        }
        // i is injective on K̄
        let imgs: Vec<Vec<i128>> = r.lattice.basis().iter().map(|v| r.embed(v)).collect();
        assert_eq!(Lattice::from_generators(&imgs, r.star.num_edges()).rank(), 6);
    }

    #[test]
    fn refined_rejects_two_arcs() {
        assert!(refined_lattice(lone_triangle()).is_err());
    }
}
