//! Exact SL2 matrices over Q(ζ_m), representations of the free group
//! π_1(Σ_g,1), the moment map and the cell and leaf classifications.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curves::{FreeAutomorphism, FreeWord};
use crate::error::{Error, Result};
use crate::exact::cyclotomic::parse_rational;
use crate::exact::Cyclotomic;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SL2Mat {
    pub a: Cyclotomic,
    pub b: Cyclotomic,
    pub c: Cyclotomic,
    pub d: Cyclotomic,
}

impl fmt::Debug for SL2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl SL2Mat {
    pub fn new(a: Cyclotomic, b: Cyclotomic, c: Cyclotomic, d: Cyclotomic) -> Result<Self> {
        let order = a.order();
        for x in [&b, &c, &d] {
            if x.order() != order {
                return Err(Error::OrderMismatch(x.order(), order));
            }
        }
        let m = SL2Mat { a, b, c, d };
        if !m.det().is_one() {
            return Err(Error::NotSl2(format!("{m:?} has determinant {}", m.det())));
        }
        Ok(m)
    }

    pub fn from_ints(order: u32, m: [[i64; 2]; 2]) -> Result<Self> {
        let f = |v| Cyclotomic::from_int(order, v);
        Self::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn identity(order: u32) -> Self {
        let (o, z) = (Cyclotomic::one(order), Cyclotomic::zero(order));
        SL2Mat { a: o.clone(), b: z.clone(), c: z, d: o }
    }

    pub fn order(&self) -> u32 {
        self.a.order()
    }

    pub fn det(&self) -> Cyclotomic {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> Cyclotomic {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Self) -> Self {
        SL2Mat {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn inverse(&self) -> Self {
        SL2Mat { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn commutator(x: &Self, y: &Self) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn embed(&self, order: u32) -> Result<Self> {
        Ok(SL2Mat { a: self.a.embed(order)?, b: self.b.embed(order)?, c: self.c.embed(order)?, d: self.d.embed(order)? })
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn entries(&self) -> [&Cyclotomic; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Big,
    Reduced,
}

/// Bruhat cell index: 0 when the upper-left entry is nonzero, else 1.
pub fn cell_index(m: &SL2Mat) -> usize {
    usize::from(m.a.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SL2Rep {
    pub genus: usize,
    /// (A_1, B_1, ..., A_g, B_g)
    pub images: Vec<SL2Mat>,
}

impl SL2Rep {
    pub fn new(genus: usize, images: Vec<SL2Mat>) -> Result<Self> {
        if images.len() != 2 * genus {
            return Err(Error::Dimension(format!("{} images for genus {genus}", images.len())));
        }
        if let Some(first) = images.first() {
            if let Some(bad) = images.iter().find(|m| m.order() != first.order()) {
                return Err(Error::OrderMismatch(bad.order(), first.order()));
            }
        }
        Ok(SL2Rep { genus, images })
    }

    pub fn trivial(genus: usize, order: u32) -> Self {
        SL2Rep { genus, images: vec![SL2Mat::identity(order); 2 * genus] }
    }

    pub fn order(&self) -> u32 {
        self.images.first().map_or(1, |m| m.order())
    }

    pub fn eval(&self, w: &FreeWord) -> SL2Mat {
        w.0.iter().fold(SL2Mat::identity(self.order()), |acc, &(g, e)| {
            let m = &self.images[g];
            acc.mul(&if e > 0 { m.clone() } else { m.inverse() })
        })
    }

    /// (φ·ρ)(γ) = ρ(φ(γ))
    pub fn act(&self, phi: &FreeAutomorphism) -> Self {
        SL2Rep { genus: self.genus, images: phi.images.iter().map(|w| self.eval(w)).collect() }
    }

    pub fn moment_map(&self) -> SL2Mat {
        moment_map(self)
    }

    pub fn cell(&self) -> Cell {
        classify_cell(self)
    }
}

/// μ(ρ) = ρ(γ_∂), the ordered product of the commutators [A_i, B_i].
pub fn moment_map(rho: &SL2Rep) -> SL2Mat {
    (0..rho.genus).fold(SL2Mat::identity(rho.order()), |acc, i| {
        acc.mul(&SL2Mat::commutator(&rho.images[2 * i], &rho.images[2 * i + 1]))
    })
}

pub fn classify_cell(rho: &SL2Rep) -> Cell {
    if moment_map(rho).a.is_zero() {
        Cell::Reduced
    } else {
        Cell::Big
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConjugacyKind {
    CentralPlus,
    CentralMinus,
    Parabolic,
    Semisimple,
}

/// Symplectic leaf of SL2 with the STS bracket: a cell index and the
/// conjugacy data; in the small cell the leaf is the point itself and
/// `dressing_b` records the C_b it lies in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StsLeaf {
    pub cell: usize,
    pub trace: Cyclotomic,
    pub kind: ConjugacyKind,
    pub singleton: bool,
    pub dressing_b: Option<Cyclotomic>,
}

pub fn conjugacy_kind(m: &SL2Mat) -> ConjugacyKind {
    let two = Cyclotomic::from_int(m.order(), 2);
    let t = m.trace();
    if m.is_scalar() {
        if m.a.is_one() {
            ConjugacyKind::CentralPlus
        } else {
            ConjugacyKind::CentralMinus
        }
    } else if t == two || t == -&two {
        ConjugacyKind::Parabolic
    } else {
        ConjugacyKind::Semisimple
    }
}

pub fn classify_sts_leaf(m: &SL2Mat) -> StsLeaf {
    let cell = cell_index(m);
    StsLeaf {
        cell,
        trace: m.trace(),
        kind: conjugacy_kind(m),
        singleton: cell == 1,
        dressing_b: (cell == 1).then(|| m.b.clone()),
    }
}

/// Equivariant leaf: the cell index with the conjugacy data only.
pub fn equivariant_sts_leaf(m: &SL2Mat) -> (usize, Cyclotomic, ConjugacyKind) {
    (cell_index(m), m.trace(), conjugacy_kind(m))
}

/// (i, j) with g2⁻¹g1 in cell i and g2g1⁻¹ in cell j.
pub fn classify_double_leaf(g1: &SL2Mat, g2: &SL2Mat) -> (usize, usize) {
    (cell_index(&g2.inverse().mul(g1)), cell_index(&g2.mul(&g1.inverse())))
}

/// z·[[a,b],[c,d]] = [[a, z²b], [z⁻²c, d]]
pub fn toric_action(z: &Cyclotomic, m: &SL2Mat) -> Result<SL2Mat> {
    let z2 = z * z;
    let z2inv = z2.inv()?;
    Ok(SL2Mat { a: m.a.clone(), b: &z2 * &m.b, c: &z2inv * &m.c, d: m.d.clone() })
}

/// An entry: an integer, a rational string, or power-basis coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Int(i64),
    Rational(String),
    Coeffs(Vec<String>),
}

impl EntryJson {
    pub fn to_cyclotomic(&self, order: u32) -> Result<Cyclotomic> {
        match self {
            EntryJson::Int(v) => Ok(Cyclotomic::from_int(order, *v)),
            EntryJson::Rational(s) => Ok(Cyclotomic::from_rational(order, &parse_rational(s)?)),
            EntryJson::Coeffs(cs) => {
                let c: Vec<BigRational> = cs.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                Cyclotomic::from_coeffs(order, &c)
            }
        }
    }

    pub fn from_cyclotomic(c: &Cyclotomic) -> Self {
        match c.as_rational() {
            Some(r) => EntryJson::Rational(r.to_string()),
            None => EntryJson::Coeffs(c.coeffs().iter().map(|x| x.to_string()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldJson {
    pub cyclotomic_order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub genus: usize,
    pub field: FieldJson,
    pub images: Vec<[EntryJson; 4]>,
}

pub fn mat_from_json(order: u32, e: &[EntryJson; 4]) -> Result<SL2Mat> {
    SL2Mat::new(e[0].to_cyclotomic(order)?, e[1].to_cyclotomic(order)?, e[2].to_cyclotomic(order)?, e[3].to_cyclotomic(order)?)
}

pub fn mat_to_json(m: &SL2Mat) -> [EntryJson; 4] {
    m.entries().map(EntryJson::from_cyclotomic)
}

impl SL2Rep {
    pub fn to_json(&self) -> RepJson {
        RepJson {
            genus: self.genus,
            field: FieldJson { cyclotomic_order: self.order() },
            images: self.images.iter().map(mat_to_json).collect(),
        }
    }

    pub fn from_json(j: &RepJson) -> Result<Self> {
        let order = j.field.cyclotomic_order;
        let images = j.images.iter().map(|e| mat_from_json(order, e)).collect::<Result<_>>()?;
        Self::new(j.genus, images)
    }
}

/// Parses "[[a,b],[c,d]]" with integer or rational-string entries.
pub fn parse_matrix(s: &str, order: u32) -> Result<SL2Mat> {
    let rows: [[EntryJson; 2]; 2] = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let [[a, b], [c, d]] = rows;
    mat_from_json(order, &[a, b, c, d])
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::exact::rat;

    fn m(v: [[i64; 2]; 2]) -> SL2Mat {
        SL2Mat::from_ints(4, v).unwrap()
    }

    #[test]
    fn determinant_enforced() {
        assert!(matches!(SL2Mat::from_ints(1, [[2, 0], [0, 1]]), Err(Error::NotSl2(_))));
    }

    #[test]
    fn moment_map_examples() {
        assert_eq!(moment_map(&SL2Rep::trivial(2, 1)), SL2Mat::identity(1));
        let rho = SL2Rep::new(1, vec![m([[0, 1], [-1, 0]]), m([[1, 1], [0, 1]])]).unwrap();
        // by hand: AB = [[0,1],[-1,-1]], ABA⁻¹ = [[1,0],[-1,1]], times B⁻¹
        assert_eq!(moment_map(&rho), m([[1, -1], [-1, 2]]));
        let half = Cyclotomic::from_rational(4, &rat(1, 2));
        let two = Cyclotomic::from_int(4, 2);
        let three = Cyclotomic::from_int(4, 3);
        let third = Cyclotomic::from_rational(4, &rat(1, 3));
        let z = Cyclotomic::zero(4);
        let diag = SL2Rep::new(
            1,
            vec![
                SL2Mat::new(two, z.clone(), z.clone(), half).unwrap(),
                SL2Mat::new(three, z.clone(), z, third).unwrap(),
            ],
        )
        .unwrap();
        assert!(moment_map(&diag).is_scalar() && moment_map(&diag).a.is_one());
    }

    #[test]
    fn cells() {
        assert_eq!(classify_cell(&SL2Rep::trivial(1, 4)), Cell::Big);
        assert_eq!(cell_index(&m([[0, -1], [1, 0]])), 1);
        assert_eq!(cell_index(&m([[1, -1], [-1, 2]])), 0);
    }

    #[test]
    fn sts_leaves() {
        let half = Cyclotomic::from_rational(1, &rat(1, 2));
        let z = Cyclotomic::zero(1);
        let d = SL2Mat::new(Cyclotomic::from_int(1, 2), z.clone(), z, half).unwrap();
        let leaf = classify_sts_leaf(&d);
        assert_eq!((leaf.cell, leaf.kind), (0, ConjugacyKind::Semisimple));
        assert_eq!(leaf.trace, Cyclotomic::from_rational(1, &rat(5, 2)));

        let w = SL2Mat::from_ints(1, [[0, 1], [-1, 0]]).unwrap();
        let leaf = classify_sts_leaf(&w);
        assert_eq!(leaf.cell, 1);
        assert!(leaf.singleton);
        assert_eq!(leaf.dressing_b, Some(Cyclotomic::one(1)));

        let leaf = classify_sts_leaf(&SL2Mat::identity(1));
        assert_eq!((leaf.cell, leaf.kind), (0, ConjugacyKind::CentralPlus));
        let p = SL2Mat::from_ints(1, [[1, 1], [0, 1]]).unwrap();
        assert_eq!(conjugacy_kind(&p), ConjugacyKind::Parabolic);
        assert_eq!(conjugacy_kind(&SL2Mat::from_ints(1, [[-1, 0], [0, -1]]).unwrap()), ConjugacyKind::CentralMinus);
    }

    #[test]
    fn double_leaves() {
        let id = SL2Mat::identity(1);
        assert_eq!(classify_double_leaf(&id, &id), (0, 0));
        let w = SL2Mat::from_ints(1, [[0, 1], [-1, 0]]).unwrap();
        assert_eq!(classify_double_leaf(&w, &id), (1, 1));
        let u = SL2Mat::from_ints(1, [[1, 1], [0, 1]]).unwrap();
        assert_eq!(classify_double_leaf(&u, &id), (0, 0));
    }

    #[test]
    fn toric_examples() {
        let w = SL2Mat::from_ints(5, [[0, 1], [-1, 0]]).unwrap();
        let z = Cyclotomic::zeta(5);
        let out = toric_action(&z, &w).unwrap();
        assert_eq!(out.b, Cyclotomic::zeta_pow(5, 2));
        assert_eq!(out.c, -Cyclotomic::zeta_pow(5, -2));
        assert_eq!(toric_action(&Cyclotomic::one(5), &w).unwrap(), w);
        let diag = SL2Mat::new(z.clone(), Cyclotomic::zero(5), Cyclotomic::zero(5), z.inv().unwrap()).unwrap();
        assert_eq!(toric_action(&z, &diag).unwrap(), diag);
    }

    #[test]
    fn json_round_trip() {
        let rho = SL2Rep::new(1, vec![m([[0, 1], [-1, 0]]), SL2Mat::new(
            Cyclotomic::zeta(4), Cyclotomic::zero(4), Cyclotomic::zero(4), -Cyclotomic::zeta(4)).unwrap()]).unwrap();
        let s = serde_json::to_string(&rho.to_json()).unwrap();
        let back = SL2Rep::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, rho);
        assert_eq!(parse_matrix("[[1,\"1/2\"],[0,1]]", 1).unwrap().b, Cyclotomic::from_rational(1, &rat(1, 2)));
    }

    fn small_mat() -> impl Strategy<Value = SL2Mat> {
        (-3i64..=3, -3i64..=3, -3i64..=3).prop_filter_map("need a unit corner", |(a, b, c)| {
            // choose d so that ad - bc = 1 when a divides 1 + bc
            (a != 0 && (1 + b * c) % a == 0).then(|| SL2Mat::from_ints(5, [[a, b], [c, (1 + b * c) / a]]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn det_and_cell_preserved(x in small_mat(), y in small_mat(), k in 0i64..5) {
            let rho = SL2Rep::new(1, vec![x.clone(), y]).unwrap();
            prop_assert!(moment_map(&rho).det().is_one());
            let z = Cyclotomic::zeta_pow(5, k);
            let t = toric_action(&z, &x).unwrap();
            prop_assert!(t.det().is_one());
            prop_assert_eq!(cell_index(&t), cell_index(&x));
        }
    }
}
