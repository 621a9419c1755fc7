//! Central characters and the irreducible representation of T_q(E) lying
//! over each of them, built from clock and shift matrices.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::element::QuantumTorus;
use crate::error::{Error, Result};
use crate::exact::{form_kernel_mod, skew_normal_form, Cyclotomic, Lattice};

pub const MAX_IRREP_DIMENSION: u128 = 2000;

/// Square matrix over Q(ζ_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    size: usize,
    order: u32,
    data: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zeros(size: usize, order: u32) -> Self {
        CycloMatrix { size, order, data: vec![Cyclotomic::zero(order); size * size] }
    }

    pub fn identity(size: usize, order: u32) -> Self {
        Self::scalar(size, Cyclotomic::one(order))
    }

    pub fn scalar(size: usize, c: Cyclotomic) -> Self {
        let mut m = Self::zeros(size, c.order());
        for i in 0..size {
            m.data[i * size + i] = c.clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.size + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut out = Self::zeros(n, self.order);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = &out.data[i * n + j];
                        out.data[i * n + j] = cur + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        CycloMatrix {
            size: self.size,
            order: self.order,
            data: self.data.iter().map(|x| if x.is_zero() { x.clone() } else { x * c }).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.size, other.size);
        let mut out = Self::zeros(n * m, self.order);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * m + k, j * m + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a matrix with exactly one nonzero entry per row and column.
    pub fn monomial_inverse(&self) -> Result<Self> {
        let n = self.size;
        let mut out = Self::zeros(n, self.order);
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| !self.get(i, j).is_zero()).collect();
            match nz[..] {
                [j] => out.set(j, i, self.get(i, j).inv()?),
                _ => return Err(Error::Unsupported("inverse of a non-monomial matrix".into())),
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.monomial_inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.size, self.order);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The scalar c if the matrix equals c·I.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        let c = self.get(0, 0).clone();
        (*self == Self::scalar(self.size, c.clone())).then_some(c)
    }
}

/// A character of the central subalgebra spanned by E⁰, given by its
/// values on the HNF basis of E⁰.
#[derive(Clone, Debug)]
pub struct CentralCharacter {
    pub lattice_id: String,
    pub kernel: Lattice,
    pub values: Vec<Cyclotomic>,
}

impl CentralCharacter {
    pub fn trivial(torus: &QuantumTorus) -> Self {
        let kernel = form_kernel_mod(&torus.lattice, torus.n as i128);
        let values = vec![Cyclotomic::one(torus.order); kernel.rank()];
        CentralCharacter { lattice_id: torus.lattice.id.clone(), kernel, values }
    }

    pub fn from_values(torus: &QuantumTorus, values: Vec<Cyclotomic>) -> Result<Self> {
        let kernel = form_kernel_mod(&torus.lattice, torus.n as i128);
        if values.len() != kernel.rank() {
            return Err(Error::Dimension(format!(
                "character needs {} values, got {}",
                kernel.rank(),
                values.len()
            )));
        }
        for v in &values {
            if v.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if v.order() != torus.order {
                return Err(Error::OrderMismatch(v.order(), torus.order));
            }
        }
        Ok(CentralCharacter { lattice_id: torus.lattice.id.clone(), kernel, values })
    }

    /// χ(Z_x) for x ∈ E⁰, extended through the Weyl-ordered product.
    pub fn value(&self, torus: &QuantumTorus, x: &[i128]) -> Result<Cyclotomic> {
        let c = self.kernel.coords(x).ok_or(Error::NotContained)?;
        let basis: Vec<Vec<i64>> = self
            .kernel
            .basis()
            .iter()
            .map(|b| b.iter().map(|&v| v as i64).collect())
            .collect();
        let mut twist = 0i128;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                twist += c[i] * c[j] * torus.pair(&basis[i], &basis[j]);
            }
        }
        let mut acc = torus.a_quarter_pow(twist);
        for (ci, v) in c.iter().zip(&self.values) {
            if *ci != 0 {
                acc = &acc * &v.pow(*ci as i64)?;
            }
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct TorusIrrep {
    pub torus: Arc<QuantumTorus>,
    pub dimension: usize,
    /// images of Z_{e_i} for the lattice's own basis
    pub generators: Vec<CycloMatrix>,
    pub character: CentralCharacter,
}

fn clock(size: usize, mu: &Cyclotomic) -> CycloMatrix {
    let mut m = CycloMatrix::zeros(size, mu.order());
    let mut p = Cyclotomic::one(mu.order());
    for j in 0..size {
        m.set(j, j, p.clone());
        p = &p * mu;
    }
    m
}

fn shift(size: usize, order: u32) -> CycloMatrix {
    let mut m = CycloMatrix::zeros(size, order);
    for j in 0..size {
        m.set((j + 1) % size, j, Cyclotomic::one(order));
    }
    m
}

/// Weyl-ordered image A^{(1/4)Σ_{i<j} c_i c_j (f_i,f_j)} ∏ M_i^{c_i}.
fn weyl_product(
    torus: &QuantumTorus,
    mats: &[CycloMatrix],
    pairing: impl Fn(usize, usize) -> i128,
    c: &[i128],
) -> Result<CycloMatrix> {
    let mut twist = 0i128;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i] != 0 && c[j] != 0 {
                twist += c[i] * c[j] * pairing(i, j);
            }
        }
    }
    let size = mats[0].size();
    let mut acc = CycloMatrix::scalar(size, torus.a_quarter_pow(twist));
    for (m, &ci) in mats.iter().zip(c) {
        if ci != 0 {
            acc = acc.mul(&m.pow(ci as i64)?);
        }
    }
    Ok(acc)
}

pub fn build_irrep(torus: &Arc<QuantumTorus>, chi: &CentralCharacter) -> Result<TorusIrrep> {
    let n = torus.n as i128;
    let order = torus.order;
    let rank = torus.rank();
    if chi.lattice_id != torus.lattice.id {
        return Err(Error::LatticeMismatch);
    }
    if rank == 0 {
        return Ok(TorusIrrep { torus: torus.clone(), dimension: 1, generators: vec![], character: chi.clone() });
    }
    let nf = skew_normal_form(&torus.lattice.form);
    let normal = nf.p.transpose().mul(&torus.lattice.form).mul(&nf.p);

    let sizes: Vec<usize> = nf
        .blocks
        .iter()
        .map(|&d| (n / crate::exact::intmat::gcd(d, n)) as usize)
        .collect();
    let dimension: u128 = sizes.iter().map(|&s| s as u128).product();
    if dimension > MAX_IRREP_DIMENSION {
        return Err(Error::DimensionCap(dimension, MAX_IRREP_DIMENSION));
    }
    let dim = dimension as usize;

    // images of Z_{f_j} on the tensor product of the block factors
    let factor_mats = |k: usize, m: CycloMatrix| -> CycloMatrix {
        let mut acc = CycloMatrix::identity(1, order);
        for (l, &s) in sizes.iter().enumerate() {
            acc = acc.kron(&if l == k { m.clone() } else { CycloMatrix::identity(s, order) });
        }
        acc
    };
    let col = |j: usize| -> Vec<i128> { (0..rank).map(|i| nf.p[(i, j)]).collect() };
    let mut f_images = Vec::with_capacity(rank);
    for (k, &d) in nf.blocks.iter().enumerate() {
        let s = sizes[k];
        let mu = torus.a_half_pow(-d);
        let (c, sh) = (clock(s, &mu), shift(s, order));
        for (j, base) in [(2 * k, c), (2 * k + 1, sh)] {
            // scale so that (t·M)^s = χ(s·f_j)
            let target: Vec<i128> = col(j).iter().map(|x| x * s as i128).collect();
            let t = chi.value(torus, &target)?.try_root(s as u64)?;
            f_images.push(factor_mats(k, base).scale(&t));
        }
    }
    for j in 2 * nf.blocks.len()..rank {
        let t = chi.value(torus, &col(j))?;
        f_images.push(CycloMatrix::scalar(dim, t));
    }

    let mut generators = Vec::with_capacity(rank);
    for i in 0..rank {
        let c: Vec<i128> = (0..rank).map(|j| nf.p_inv[(j, i)]).collect();
        generators.push(weyl_product(torus, &f_images, |a, b| normal[(a, b)], &c)?);
    }
    Ok(TorusIrrep { torus: torus.clone(), dimension: dim, generators, character: chi.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IrrepCheck {
    pub dimension: usize,
    pub relations_checked: usize,
    pub relations_ok: bool,
    pub kernel_generators_checked: usize,
    pub character_ok: bool,
}

impl IrrepCheck {
    pub fn ok(&self) -> bool {
        self.relations_ok && self.character_ok
    }
}

impl TorusIrrep {
    /// Image of Z_x for x in the lattice's coordinates.
    pub fn image(&self, x: &[i128]) -> Result<CycloMatrix> {
        if self.generators.is_empty() {
            return Ok(CycloMatrix::identity(1, self.torus.order));
        }
        let form = &self.torus.lattice.form;
        weyl_product(&self.torus, &self.generators, |a, b| form[(a, b)], x)
    }

    /// Checks every pairwise generator relation and the action of the HNF
    /// generators of E⁰. Pairs are checked in parallel and aggregated in
    /// index order.
    pub fn verify(&self) -> Result<IrrepCheck> {
        let rank = self.generators.len();
        let pairs: Vec<(usize, usize)> =
            (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j))).collect();
        let form = &self.torus.lattice.form;
        let results: Vec<bool> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let lhs = self.generators[i].mul(&self.generators[j]);
                let rhs = self.generators[j]
                    .mul(&self.generators[i])
                    .scale(&self.torus.a_half_pow(-form[(i, j)]));
                lhs == rhs
            })
            .collect();
        let kernel = self.character.kernel.basis().to_vec();
        let chars: Vec<Result<bool>> = kernel
            .par_iter()
            .map(|b| {
                let img = self.image(b)?;
                let want = self.character.value(&self.torus, b)?;
                Ok(img == CycloMatrix::scalar(self.dimension, want))
            })
            .collect();
        let mut character_ok = true;
        for c in chars {
            character_ok &= c?;
        }
        Ok(IrrepCheck {
            dimension: self.dimension,
            relations_checked: pairs.len(),
            relations_ok: results.iter().all(|&b| b),
            kernel_generators_checked: kernel.len(),
            character_ok,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{IntMatrix, SkewLattice};
    use crate::surface::{balanced_lattice, build_sigma_g_star, pi_degree};

    fn torus(rows: &[Vec<i64>], n: u64) -> Arc<QuantumTorus> {
        QuantumTorus::new(SkewLattice::unlabeled("t", IntMatrix::from_rows(rows)).unwrap(), n).unwrap()
    }

    #[test]
    fn weyl_pair_n3() {
        let t = torus(&[vec![0, 1], vec![-1, 0]], 3);
        let chi = CentralCharacter::trivial(&t);
        assert_eq!(chi.kernel, Lattice::full(2).scaled(3));
        let rep = build_irrep(&t, &chi).unwrap();
        assert_eq!(rep.dimension, 3);
        let check = rep.verify().unwrap();
        assert!(check.ok());
        // explicit relation Z1 Z2 = A^{-1/2} Z2 Z1
        let (x, z) = (&rep.generators[0], &rep.generators[1]);
        assert_eq!(x.mul(z), z.mul(x).scale(&t.a_half_pow(-1)));
    }

    #[test]
    fn rank_one_is_scalar() {
        let t = torus(&[vec![0]], 5);
        let rep = build_irrep(&t, &CentralCharacter::trivial(&t)).unwrap();
        assert_eq!(rep.dimension, 1);
        assert!(rep.verify().unwrap().ok());
    }

    #[test]
    fn nontrivial_character_needs_roots() {
        let l = SkewLattice::unlabeled("w", IntMatrix::from_rows(&[vec![0i64, 1], vec![-1, 0]])).unwrap();
        let t = QuantumTorus::with_order(l.clone(), 3, 9).unwrap();
        let values = vec![Cyclotomic::zeta_pow(9, 3), Cyclotomic::from_int(9, 8)];
        let chi = CentralCharacter::from_values(&t, values).unwrap();
        let rep = build_irrep(&t, &chi).unwrap();
        assert!(rep.verify().unwrap().ok());
        // ζ_3 has no cube root in Q(ζ_3)
        let t3 = QuantumTorus::new(l, 3).unwrap();
        let chi3 = CentralCharacter::from_values(&t3, vec![Cyclotomic::zeta(3), Cyclotomic::one(3)]).unwrap();
        assert!(matches!(build_irrep(&t3, &chi3), Err(Error::NoRoot(3, 3))));
    }

    #[test]
    fn degenerate_block_mod_n() {
        // pairing 3 is invisible mod 3 on the first block
        let t = torus(
            &[vec![0, 3, 0, 0], vec![-3, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]],
            3,
        );
        let rep = build_irrep(&t, &CentralCharacter::trivial(&t)).unwrap();
        assert_eq!(rep.dimension, 3);
        assert!(rep.verify().unwrap().ok());
    }

    #[test]
    fn delta1_n3_dimension_nine() {
        let b = balanced_lattice(Arc::new(build_sigma_g_star(1).unwrap()));
        let t = QuantumTorus::new(b.skew.clone(), 3).unwrap();
        let rep = build_irrep(&t, &CentralCharacter::trivial(&t)).unwrap();
        assert_eq!(rep.dimension, 9);
        assert_eq!(pi_degree(&b.skew, 3).pi_degree, Some(9));
        assert!(rep.verify().unwrap().ok());
    }
}
