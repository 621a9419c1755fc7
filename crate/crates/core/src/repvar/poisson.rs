//! Poisson brackets on O[SL2] (Drinfeld and Semenov-Tian-Shansky tables),
//! and the first-order expansion of the quantum R-matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{rat, DualNumber};

/// Exponents of (a, b, c, d).
pub type Monomial = [u32; 4];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(BTreeMap<Monomial, BigRational>);

pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term([0; 4], c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0; 4];
        m[i] = 1;
        let mut p = Poly::zero();
        p.add_term(m, BigRational::one());
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let e = self.0.entry(m).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.0 {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            out.add_term(*m, c * k);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1, 1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                let m = [0, 1, 2, 3].map(|i| m1[i] + m2[i]);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            if m[i] > 0 {
                let mut m2 = *m;
                m2[i] -= 1;
                out.add_term(m2, c * BigRational::from_integer(m[i].into()));
            }
        }
        out
    }

    /// Normal form modulo ad − bc − 1: every a·d is rewritten as bc + 1.
    pub fn reduce_det(&self) -> Self {
        let mut out = Poly::zero();
        let mut work: Vec<(Monomial, BigRational)> = self.0.iter().map(|(m, c)| (*m, c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            if m[A] > 0 && m[D] > 0 {
                let mut base = m;
                base[A] -= 1;
                base[D] -= 1;
                let mut bc = base;
                bc[B] += 1;
                bc[C] += 1;
                work.push((bc, c.clone()));
                work.push((base, c));
            } else {
                out.add_term(m, c);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let names = ["a", "b", "c", "d"];
        let mut first = true;
        for (m, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "{}", names[i])?,
                    _ => write!(f, "{}^{e}", names[i])?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    #[serde(rename = "D")]
    Drinfeld,
    #[serde(rename = "STS")]
    SemenovTianShansky,
}

fn p(c: i64, m: Monomial) -> Poly {
    Poly::monomial(m, rat(c, 1))
}

/// {x_i, x_j} on generators, filled in from the displayed half-table by
/// antisymmetry.
pub fn generator_bracket(v: Variant, i: usize, j: usize) -> Poly {
    let table: Vec<(usize, usize, Poly)> = match v {
        Variant::Drinfeld => vec![
            (A, B, p(-1, [1, 1, 0, 0])),
            (A, C, p(-1, [1, 0, 1, 0])),
            (B, C, Poly::zero()),
            (D, B, p(1, [0, 1, 0, 1])),
            (D, C, p(1, [0, 0, 1, 1])),
            (A, D, p(-2, [0, 1, 1, 0])),
        ],
        Variant::SemenovTianShansky => vec![
            (C, D, p(2, [1, 0, 1, 0])),
            (D, B, p(2, [1, 1, 0, 0])),
            (D, A, Poly::zero()),
            (B, A, p(2, [1, 1, 0, 0])),
            (A, C, p(2, [1, 0, 1, 0])),
            (C, B, p(2, [2, 0, 0, 0]).add(&p(-2, [1, 0, 0, 1]))),
        ],
    };
    if i == j {
        return Poly::zero();
    }
    for (x, y, val) in table {
        if (x, y) == (i, j) {
            return val;
        }
        if (y, x) == (i, j) {
            return val.scale(&rat(-1, 1));
        }
    }
    unreachable!("bracket table covers every pair")
}

/// Leibniz extension: {f, h} = Σ ∂_i f ∂_j h {x_i, x_j}.
pub fn poisson_bracket(v: Variant, f: &Poly, h: &Poly, reduce: bool) -> Poly {
    let mut out = Poly::zero();
    for i in 0..4 {
        let fi = f.derivative(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..4 {
            let hj = h.derivative(j);
            if hj.is_zero() || i == j {
                continue;
            }
            out = out.add(&fi.mul(&hj).mul(&generator_bracket(v, i, j)));
        }
    }
    if reduce {
        out.reduce_det()
    } else {
        out
    }
}

pub fn jacobiator(v: Variant, x: &Poly, y: &Poly, z: &Poly) -> Poly {
    let br = |f: &Poly, h: &Poly| poisson_bracket(v, f, h, false);
    br(&br(x, y), z).add(&br(&br(y, z), x)).add(&br(&br(z, x), y))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JacobiReport {
    pub variant: Variant,
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

/// Jacobi identity on every ordered triple of generators, as exact
/// polynomials (no reduction modulo the determinant).
pub fn check_jacobi(v: Variant) -> JacobiReport {
    let names = ["a", "b", "c", "d"];
    let mut failures = Vec::new();
    let mut n = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                n += 1;
                let jac = jacobiator(v, &Poly::var(i), &Poly::var(j), &Poly::var(k));
                if !jac.is_zero() {
                    failures.push(format!("({},{},{}): {jac}", names[i], names[j], names[k]));
                }
            }
        }
    }
    JacobiReport { variant: v, triples_checked: n, failures }
}

/// 4×4 matrix over Q[ℏ]/(ℏ²) in the basis (++, +−, −+, −−).
pub type DualMat = [[DualNumber; 4]; 4];

fn dm_zero() -> DualMat {
    std::array::from_fn(|_| std::array::from_fn(|_| DualNumber::zero()))
}

fn dm_identity() -> DualMat {
    let mut m = dm_zero();
    (0..4).for_each(|i| m[i][i] = DualNumber::one());
    m
}

fn dm_mul(x: &DualMat, y: &DualMat) -> DualMat {
    let mut m = dm_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                m[i][j] = &m[i][j] + &(&x[i][k] * &y[k][j]);
            }
        }
    }
    m
}

fn dm_add(x: &DualMat, y: &DualMat) -> DualMat {
    std::array::from_fn(|i| std::array::from_fn(|j| &x[i][j] + &y[i][j]))
}

fn dm_scale(x: &DualMat, s: &DualNumber) -> DualMat {
    std::array::from_fn(|i| std::array::from_fn(|j| &x[i][j] * s))
}

fn kron(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> DualMat {
    std::array::from_fn(|r| std::array::from_fn(|c| DualNumber::from_int(x[r / 2][c / 2] * y[r % 2][c % 2])))
}

const E_MAT: [[i64; 2]; 2] = [[0, 0], [1, 0]];
const F_MAT: [[i64; 2]; 2] = [[0, 1], [0, 0]];
const H_MAT: [[i64; 2]; 2] = [[1, 0], [0, -1]];

fn flip() -> DualMat {
    let mut m = dm_zero();
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        m[i][j] = DualNumber::one();
    }
    m
}

/// r⁺ = ½ H⊗H + 2 E⊗F and r⁻ = ½ H⊗H + 2 F⊗E.
pub fn classical_r(plus: bool) -> DualMat {
    let hh = dm_scale(&kron(H_MAT, H_MAT), &DualNumber::constant(rat(1, 2)));
    let ef = if plus { kron(E_MAT, F_MAT) } else { kron(F_MAT, E_MAT) };
    dm_add(&hh, &dm_scale(&ef, &DualNumber::from_int(2)))
}

/// 𝓡 = τ ∘ q^{H⊗H/2} ∘ (1 + (q − q⁻¹) E⊗F) for a given first-order value of A.
pub fn quantum_r(a: &DualNumber) -> DualMat {
    let a_inv = a.inv().expect("A is a unit");
    let q = a * a;
    let q_inv = &a_inv * &a_inv;
    let mut diag = dm_zero();
    for (i, (e1, e2)) in [(1, 1), (1, -1), (-1, 1), (-1, -1)].into_iter().enumerate() {
        diag[i][i] = if e1 * e2 == 1 { a.clone() } else { a_inv.clone() };
    }
    let ef = dm_scale(&kron(E_MAT, F_MAT), &(&q - &q_inv));
    dm_mul(&flip(), &dm_mul(&diag, &dm_add(&dm_identity(), &ef)))
}

fn dm_inverse(m: &DualMat) -> Option<DualMat> {
    let mut a = m.clone();
    let mut inv = dm_identity();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].value.is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv().ok()?;
        for j in 0..4 {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..4 {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RMatrixCheck {
    /// first-order value used for A, as "1 + (c)hbar"
    pub a_expansion: String,
    pub r_is_flip_times_plus: bool,
    pub r_is_minus_times_flip: bool,
    pub r_inverse_is_plus_times_flip: bool,
    pub r_inverse_is_flip_times_minus: bool,
}

impl RMatrixCheck {
    pub fn holds(&self) -> bool {
        self.r_is_flip_times_plus
            && self.r_is_minus_times_flip
            && self.r_inverse_is_plus_times_flip
            && self.r_inverse_is_flip_times_minus
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RMatrixReport {
    pub flip_squared_is_identity: bool,
    /// A = 1 + ℏ/2, i.e. q = A² = 1 + ℏ to first order
    pub half_hbar: RMatrixCheck,
    /// A = 1 + ℏ, the literal reading of A^{1/2} = exp(ℏ/2)
    pub full_hbar: RMatrixCheck,
}

fn check_with(a_eps: BigRational) -> RMatrixCheck {
    let a = DualNumber::new(BigRational::one(), a_eps.clone());
    let r = quantum_r(&a);
    let r_inv = dm_inverse(&r).expect("R is invertible");
    let hbar = DualNumber::hbar();
    let one = dm_identity();
    let plus = dm_scale(&classical_r(true), &hbar);
    let minus = dm_scale(&classical_r(false), &hbar);
    let neg = DualNumber::from_int(-1);
    let tau = flip();
    RMatrixCheck {
        a_expansion: format!("1 + ({a_eps})hbar"),
        r_is_flip_times_plus: r == dm_mul(&tau, &dm_add(&one, &plus)),
        r_is_minus_times_flip: r == dm_mul(&dm_add(&one, &minus), &tau),
        r_inverse_is_plus_times_flip: r_inv == dm_mul(&dm_add(&one, &dm_scale(&plus, &neg)), &tau),
        r_inverse_is_flip_times_minus: r_inv == dm_mul(&tau, &dm_add(&one, &dm_scale(&minus, &neg))),
    }
}

pub fn verify_r_matrix_expansion() -> RMatrixReport {
    RMatrixReport {
        flip_squared_is_identity: dm_mul(&flip(), &flip()) == dm_identity(),
        half_hbar: check_with(rat(1, 2)),
        full_hbar: check_with(rat(1, 1)),
    }
}
