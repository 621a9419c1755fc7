//! Integer lattices in HNF, skew-symmetric forms, kernels mod N and
//! sublattice indices.

use serde::{Deserialize, Serialize};

use super::intmat::{gcd, hermite_rows, round_div, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// A sublattice of Z^n stored by its row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<i128>>,
}

impl Lattice {
    pub fn from_generators(gens: &[Vec<i128>], ambient: usize) -> Self {
        Lattice { ambient, basis: hermite_rows(gens, ambient) }
    }

    pub fn full(n: usize) -> Self {
        Self::from_generators(&IntMatrix::identity(n).to_rows(), n)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_with_cols(&self.basis, self.ambient)
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("HNF rows are nonzero"))
            .collect()
    }

    /// Coordinates of `v` in the HNF basis, or None when v ∉ L.
    pub fn coords(&self, v: &[i128]) -> Option<Vec<i128>> {
        assert_eq!(v.len(), self.ambient);
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            if rest[p] % row[p] != 0 {
                return None;
            }
            let c = rest[p] / row[p];
            if c != 0 {
                for (x, y) in rest.iter_mut().zip(row) {
                    *x -= c * y;
                }
            }
            out.push(c);
        }
        rest.iter().all(|&x| x == 0).then_some(out)
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn combine(&self, coords: &[i128]) -> Vec<i128> {
        self.basis_matrix().vec_mul(coords)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        let gens: Vec<Vec<i128>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Lattice::from_generators(&gens, self.ambient)
    }

    pub fn scaled(&self, k: i128) -> Lattice {
        let gens: Vec<Vec<i128>> =
            self.basis.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        Lattice::from_generators(&gens, self.ambient)
    }

    /// Canonical representative of v + L, for a lattice of full rank.
    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.rank(), self.ambient, "reduction needs a full-rank lattice");
        let mut out = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivots()) {
            let q = out[p].div_euclid(row[p]);
            if q != 0 {
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        out
    }
}

/// Index of a sublattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Index {
    Finite(u128),
    Infinite,
}

impl Index {
    pub fn finite(self) -> Option<u128> {
        match self {
            Index::Finite(x) => Some(x),
            Index::Infinite => None,
        }
    }
}

/// [L : S] as the product of the Smith invariants of S's coordinates in L.
pub fn sublattice_index(l: &Lattice, s: &Lattice) -> Result<Index> {
    let mut coords = Vec::with_capacity(s.rank());
    for b in s.basis() {
        coords.push(l.coords(b).ok_or(Error::NotContained)?);
    }
    if s.rank() < l.rank() {
        return Ok(Index::Infinite);
    }
    let m = IntMatrix::from_rows_with_cols(&coords, l.rank());
    let inv = smith_normal_form(&m).invariants();
    if inv.iter().any(|&x| x == 0) {
        return Ok(Index::Infinite);
    }
    Ok(Index::Finite(inv.iter().map(|&x| x as u128).product()))
}

/// {x ∈ Z^cols : M x ≡ 0 (mod n)} as a lattice in Z^cols.
pub fn kernel_mod(m: &IntMatrix, n: i128) -> Lattice {
    assert!(n >= 1, "modulus must be positive");
    let cols = m.cols();
    let s = smith_normal_form(m);
    let inv = s.invariants();
    let mut gens = Vec::with_capacity(cols);
    for i in 0..cols {
        let d = inv.get(i).copied().unwrap_or(0);
        let step = n / gcd(d, n);
        gens.push((0..cols).map(|r| s.v[(r, i)] * step).collect());
    }
    Lattice::from_generators(&gens, cols)
}

/// A free Z-module with a skew-symmetric integer pairing on its basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewLattice {
    pub id: String,
    pub labels: Vec<String>,
    pub form: IntMatrix,
}

impl SkewLattice {
    pub fn new(id: impl Into<String>, labels: Vec<String>, form: IntMatrix) -> Result<Self> {
        if form.rows() != labels.len() || form.cols() != labels.len() {
            return Err(Error::Dimension("form size does not match label count".into()));
        }
        if !form.is_skew_symmetric() {
            return Err(Error::Dimension("form is not skew-symmetric".into()));
        }
        Ok(SkewLattice { id: id.into(), labels, form })
    }

    /// Lattice with generic labels e1, e2, ...
    pub fn unlabeled(id: impl Into<String>, form: IntMatrix) -> Result<Self> {
        let labels = (1..=form.rows()).map(|i| format!("e{i}")).collect();
        Self::new(id, labels, form)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i128 {
        let mut s = 0i128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    s += x as i128 * y as i128 * self.form[(i, j)];
                }
            }
        }
        s
    }
}

/// E⁰ = {a : (a, b) ≡ 0 mod N for all b}, in the lattice's own coordinates.
pub fn form_kernel_mod(l: &SkewLattice, n: i128) -> Lattice {
    kernel_mod(&l.form.transpose(), n)
}

/// Congruence normal form of a skew-symmetric integer matrix: `p` is
/// unimodular with pᵀ·W·p block diagonal, blocks [[0,d],[-d,0]] with
/// d > 0 first, zeros after. `p_inv` is the exact inverse of `p`.
#[derive(Clone, Debug)]
pub struct SkewNormalForm {
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub blocks: Vec<i128>,
    pub radical: usize,
}

pub fn skew_normal_form(w: &IntMatrix) -> SkewNormalForm {
    assert!(w.is_skew_symmetric(), "skew normal form needs a skew matrix");
    let n = w.rows();
    let mut a = w.clone();
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    // basis vector swap i <-> j
    let swap = |a: &mut IntMatrix, p: &mut IntMatrix, q: &mut IntMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        a.swap_cols(i, j);
        p.swap_cols(i, j);
        q.swap_rows(i, j);
    };
    // f_dst += k f_src
    let add = |a: &mut IntMatrix, p: &mut IntMatrix, q: &mut IntMatrix, dst: usize, src: usize, k: i128| {
        a.add_row(dst, src, k);
        a.add_col(dst, src, k);
        p.add_col(dst, src, k);
        q.add_row(src, dst, -k);
    };
    let mut blocks = Vec::new();
    let mut s = 0;
    while s + 1 < n {
        let mut best: Option<(usize, usize)> = None;
        for i in s..n {
            for j in s..n {
                let x = a[(i, j)].abs();
                if x != 0 && best.map_or(true, |(bi, bj)| x < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap(&mut a, &mut p, &mut q, s, bi);
        let bj = if bj == s { bi } else { bj };
        swap(&mut a, &mut p, &mut q, s + 1, bj);
        loop {
            if a[(s, s + 1)] < 0 {
                swap(&mut a, &mut p, &mut q, s, s + 1);
            }
            let d = a[(s, s + 1)];
            let mut clean = true;
            for l in s + 2..n {
                // (f_s, f_l) -= k (f_s, f_{s+1}) when f_l -= k f_{s+1}
                let k = round_div(a[(s, l)], d);
                add(&mut a, &mut p, &mut q, l, s + 1, -k);
                // (f_{s+1}, f_l) -= k (f_{s+1}, f_s) = k d when f_l -= k f_s
                let k2 = round_div(a[(s + 1, l)], -d);
                add(&mut a, &mut p, &mut q, l, s, -k2);
                clean &= a[(s, l)] == 0 && a[(s + 1, l)] == 0;
            }
            if clean {
                break;
            }
            // a smaller pairing appeared in rows s or s+1
            let mut bv = d.abs();
            let mut pick = None;
            for r in [s, s + 1] {
                for l in s + 2..n {
                    let x = a[(r, l)].abs();
                    if x != 0 && x < bv {
                        bv = x;
                        pick = Some((r, l));
                    }
                }
            }
            let (r, l) = pick.expect("remainders are smaller than the pivot");
            if r == s {
                swap(&mut a, &mut p, &mut q, s + 1, l);
            } else {
                swap(&mut a, &mut p, &mut q, s, l);
            }
        }
        blocks.push(a[(s, s + 1)]);
        s += 2;
    }
    SkewNormalForm { p, p_inv: q, radical: n - 2 * blocks.len(), blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl(k: i64) -> SkewLattice {
        SkewLattice::unlabeled("weyl", IntMatrix::from_rows(&[vec![0, k], vec![-k, 0]])).unwrap()
    }

    #[test]
    fn weyl_kernel() {
        let k = form_kernel_mod(&weyl(1), 5);
        assert_eq!(k, Lattice::full(2).scaled(5));
        assert_eq!(form_kernel_mod(&weyl(1), 1), Lattice::full(2));
        assert_eq!(form_kernel_mod(&weyl(2), 2), Lattice::full(2));
    }

    #[test]
    fn indices() {
        let z2 = Lattice::full(2);
        assert_eq!(sublattice_index(&z2, &z2.scaled(5)).unwrap(), Index::Finite(25));
        assert_eq!(sublattice_index(&z2, &z2).unwrap(), Index::Finite(1));
        let line = Lattice::from_generators(&[vec![1, 0]], 2);
        assert_eq!(sublattice_index(&z2, &line).unwrap(), Index::Infinite);
        assert_eq!(sublattice_index(&line, &z2), Err(Error::NotContained));
    }

    #[test]
    fn reduce_is_canonical() {
        let l = Lattice::from_generators(&[vec![2, 1], vec![0, 3]], 2);
        let a = l.reduce(&[5, 7]);
        let b = l.reduce(&[5 + 2 * 3, 7 + 3 + 3 * 2]);
        assert_eq!(a, b);
        assert!(l.contains(&[a[0] - 5, a[1] - 7]));
    }

    #[test]
    fn skew_form_blocks() {
        let w = IntMatrix::from_rows(&[
            vec![0i64, 2, 4, 1],
            vec![-2, 0, 6, 3],
            vec![-4, -6, 0, 5],
            vec![-1, -3, -5, 0],
        ]);
        let nf = skew_normal_form(&w);
        let t = nf.p.transpose().mul(&w).mul(&nf.p);
        assert_eq!(nf.p.mul(&nf.p_inv), IntMatrix::identity(4));
        for (k, &d) in nf.blocks.iter().enumerate() {
            assert!(d > 0);
            assert_eq!(t[(2 * k, 2 * k + 1)], d);
        }
        let mut expect = IntMatrix::zeros(4, 4);
        for (k, &d) in nf.blocks.iter().enumerate() {
            expect[(2 * k, 2 * k + 1)] = d;
            expect[(2 * k + 1, 2 * k)] = -d;
        }
        assert_eq!(t, expect);
        // Pfaffian 2*5 - 4*3 + 1*6 = 4 up to sign
        assert_eq!(nf.blocks.iter().product::<i128>(), 4);
    }
}
