//! Elements of the quantum torus T_q(E) with Z_a·Z_b = A^{-(a,b)/4} Z_{a+b}.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{form_kernel_mod, Cyclotomic, SkewLattice};

/// A skew lattice together with the root of unity A = ζ_N, realised
/// inside Q(ζ_m) for some multiple m of N.
#[derive(Debug, PartialEq, Eq)]
pub struct QuantumTorus {
    pub lattice: SkewLattice,
    pub n: u64,
    pub order: u32,
}

pub fn check_odd(n: u64, min: u64) -> Result<()> {
    if n % 2 == 0 || n < min {
        Err(Error::BadN { got: n, min })
    } else {
        Ok(())
    }
}

impl QuantumTorus {
    pub fn new(lattice: SkewLattice, n: u64) -> Result<Arc<Self>> {
        Self::with_order(lattice, n, n as u32)
    }

    /// Coefficients in Q(ζ_order); `order` must be a multiple of N.
    pub fn with_order(lattice: SkewLattice, n: u64, order: u32) -> Result<Arc<Self>> {
        check_odd(n, 1)?;
        if order == 0 || order as u64 % n != 0 {
            return Err(Error::OrderMismatch(n as u32, order));
        }
        Ok(Arc::new(QuantumTorus { lattice, n, order }))
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// A^k.
    pub fn a_pow(&self, k: i128) -> Cyclotomic {
        let step = (self.order as u64 / self.n) as i128;
        let e = (k * step).rem_euclid(self.order as i128);
        Cyclotomic::zeta_pow(self.order, e as i64)
    }

    /// A^{k/2} := A^{k(N+1)/2}.
    pub fn a_half_pow(&self, k: i128) -> Cyclotomic {
        let h = ((self.n + 1) / 2) as i128;
        self.a_pow((k.rem_euclid(self.n as i128)) * h)
    }

    /// A^{k/4} := A^{k((N+1)/2)^2}.
    pub fn a_quarter_pow(&self, k: i128) -> Cyclotomic {
        let h = ((self.n + 1) / 2) as i128;
        let h2 = (h * h).rem_euclid(self.n as i128);
        self.a_pow(k.rem_euclid(self.n as i128) * h2)
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i128 {
        self.lattice.pair(a, b)
    }
}

#[derive(Clone, Debug)]
pub struct TorusElement {
    torus: Arc<QuantumTorus>,
    terms: BTreeMap<Vec<i64>, Cyclotomic>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.torus, &other.torus) || *self.torus == *other.torus)
            && self.terms == other.terms
    }
}

impl TorusElement {
    pub fn zero(torus: &Arc<QuantumTorus>) -> Self {
        TorusElement { torus: torus.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(torus: &Arc<QuantumTorus>, c: Cyclotomic) -> Result<Self> {
        Self::term(torus, vec![0; torus.rank()], c)
    }

    pub fn one(torus: &Arc<QuantumTorus>) -> Self {
        Self::monomial(torus, &vec![0; torus.rank()]).expect("zero vector has the right length")
    }

    pub fn monomial(torus: &Arc<QuantumTorus>, a: &[i64]) -> Result<Self> {
        Self::term(torus, a.to_vec(), Cyclotomic::one(torus.order))
    }

    pub fn term(torus: &Arc<QuantumTorus>, a: Vec<i64>, c: Cyclotomic) -> Result<Self> {
        if a.len() != torus.rank() {
            return Err(Error::Dimension(format!(
                "exponent of length {} in a rank {} lattice",
                a.len(),
                torus.rank()
            )));
        }
        if c.order() != torus.order {
            return Err(Error::OrderMismatch(c.order(), torus.order));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        Ok(TorusElement { torus: torus.clone(), terms })
    }

    pub fn torus(&self) -> &Arc<QuantumTorus> {
        &self.torus
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.torus, &other.torus) || self.torus == other.torus {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    fn accumulate(terms: &mut BTreeMap<Vec<i64>, Cyclotomic>, a: Vec<i64>, c: Cyclotomic) {
        use std::collections::btree_map::Entry;
        match terms.entry(a) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            Self::accumulate(&mut terms, a.clone(), c.clone());
        }
        Ok(TorusElement { torus: self.torus.clone(), terms })
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<Self> {
        if c.order() != self.torus.order {
            return Err(Error::OrderMismatch(c.order(), self.torus.order));
        }
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            Self::accumulate(&mut terms, a.clone(), x * c);
        }
        Ok(TorusElement { torus: self.torus.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Cyclotomic::from_int(self.torus.order, -1))?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let twist = self.torus.a_quarter_pow(-self.torus.pair(a, b));
                let sum: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                Self::accumulate(&mut terms, sum, &(x * y) * &twist);
            }
        }
        Ok(TorusElement { torus: self.torus.clone(), terms })
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::one(&self.torus);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse of a single monomial c·Z_a.
    pub fn monomial_inverse(&self) -> Result<Self> {
        let (a, c) = match self.terms.iter().collect::<Vec<_>>()[..] {
            [(a, c)] => (a, c),
            _ => return Err(Error::Unsupported("inverse of a non-monomial element".into())),
        };
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        Self::term(&self.torus, neg, c.inv()?)
    }
}

/// Linear extension of Z_a ↦ Z_{Na}.
pub fn frobenius(x: &TorusElement, n: u64) -> TorusElement {
    let terms = x
        .terms
        .iter()
        .map(|(a, c)| (a.iter().map(|v| v * n as i64).collect(), c.clone()))
        .collect();
    TorusElement { torus: x.torus.clone(), terms }
}

/// T_n(x) with T_0 = 2, T_1 = x, T_{k+1} = x·T_k − T_{k−1}.
pub fn chebyshev_apply(x: &TorusElement, n: u64) -> Result<TorusElement> {
    let torus = x.torus.clone();
    let two = TorusElement::scalar(&torus, Cyclotomic::from_int(torus.order, 2))?;
    if n == 0 {
        return Ok(two);
    }
    let mut prev = two;
    let mut cur = x.clone();
    for _ in 1..n {
        let next = x.mul(&cur)?.sub(&prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Integer coefficients of T_n as a polynomial, lowest degree first.
pub fn chebyshev_coefficients(n: usize) -> Vec<i64> {
    let mut prev = vec![2i64];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0i64, 1];
    for _ in 1..n {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// True iff every exponent lies in the mod-N kernel of the form.
pub fn is_central(x: &TorusElement, n: u64) -> bool {
    let kernel = form_kernel_mod(&x.torus.lattice, n as i128);
    x.terms.keys().all(|a| {
        let v: Vec<i128> = a.iter().map(|&t| t as i128).collect();
        kernel.contains(&v)
    })
}

#[derive(Serialize)]
struct TermJson<'a> {
    exp: &'a [i64],
    coeff: &'a Cyclotomic,
}

impl Serialize for TorusElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            lattice: &'a str,
            terms: Vec<TermJson<'a>>,
        }
        Doc {
            lattice: &self.torus.lattice.id,
            terms: self.terms.iter().map(|(a, c)| TermJson { exp: a, coeff: c }).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;
    use proptest::prelude::*;

    fn weyl(n: u64) -> Arc<QuantumTorus> {
        let l = SkewLattice::unlabeled("weyl", IntMatrix::from_rows(&[vec![0i64, 1], vec![-1, 0]])).unwrap();
        QuantumTorus::new(l, n).unwrap()
    }

    fn rank3(n: u64) -> Arc<QuantumTorus> {
        let l = SkewLattice::unlabeled(
            "r3",
            IntMatrix::from_rows(&[vec![0i64, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]),
        )
        .unwrap();
        QuantumTorus::new(l, n).unwrap()
    }

    #[test]
    fn quarter_powers_are_consistent() {
        for n in [3u64, 5, 7, 9] {
            let t = weyl(n);
            let a = t.a_pow(1);
            assert_eq!(t.a_quarter_pow(1).pow(4).unwrap(), a);
            assert_eq!(t.a_half_pow(1).pow(2).unwrap(), a);
            assert_eq!(t.a_quarter_pow(2), t.a_half_pow(1));
            assert!(a.pow(n as i64).unwrap().is_one());
        }
    }

    #[test]
    fn pairing_two_gives_inverse_half_power() {
        let l = SkewLattice::unlabeled("p", IntMatrix::from_rows(&[vec![0i64, 2], vec![-2, 0]])).unwrap();
        let t = QuantumTorus::new(l, 5).unwrap();
        let za = TorusElement::monomial(&t, &[1, 0]).unwrap();
        let zb = TorusElement::monomial(&t, &[0, 1]).unwrap();
        let expect = TorusElement::term(&t, vec![1, 1], t.a_half_pow(-1)).unwrap();
        assert_eq!(za.mul(&zb).unwrap().terms, expect.terms);
    }

    #[test]
    fn inverse_monomials_multiply_to_one() {
        let t = rank3(5);
        let za = TorusElement::monomial(&t, &[2, -1, 3]).unwrap();
        let zm = TorusElement::monomial(&t, &[-2, 1, -3]).unwrap();
        assert_eq!(za.mul(&zm).unwrap().terms, TorusElement::one(&t).terms);
        assert_eq!(za.monomial_inverse().unwrap().terms, zm.terms);
    }

    #[test]
    fn weyl_normalized_powers() {
        for n in [3u64, 5, 7] {
            let t = rank3(n);
            let a = [1i64, -2, 1];
            let za = TorusElement::monomial(&t, &a).unwrap();
            let na: Vec<i64> = a.iter().map(|x| x * n as i64).collect();
            assert_eq!(za.pow(n).unwrap().terms, TorusElement::monomial(&t, &na).unwrap().terms);
        }
    }

    #[test]
    fn chebyshev_polynomials() {
        assert_eq!(chebyshev_coefficients(3), vec![0, -3, 0, 1]);
        assert_eq!(chebyshev_coefficients(1), vec![0, 1]);
        assert_eq!(chebyshev_coefficients(2), vec![-2, 0, 1]);
    }

    #[test]
    fn chebyshev_matches_frobenius_on_symmetric_sum() {
        for n in [1u64, 3, 5] {
            let t = rank3(n);
            let a = [1i64, 1, -2];
            let x = TorusElement::monomial(&t, &a)
                .unwrap()
                .add(&TorusElement::monomial(&t, &[-1, -1, 2]).unwrap())
                .unwrap();
            assert_eq!(chebyshev_apply(&x, n).unwrap().terms, frobenius(&x, n).terms);
        }
    }

    #[test]
    fn centrality() {
        let t = weyl(5);
        assert!(!is_central(&TorusElement::monomial(&t, &[1, 0]).unwrap(), 5));
        assert!(is_central(&TorusElement::monomial(&t, &[5, -10]).unwrap(), 5));
        let x = TorusElement::monomial(&t, &[1, 2]).unwrap();
        assert!(is_central(&frobenius(&x, 5), 5));
        assert!(is_central(&TorusElement::one(&t), 5));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = TorusElement::one(&weyl(3));
        let b = TorusElement::one(&weyl(5));
        assert_eq!(a.mul(&b).unwrap_err(), Error::LatticeMismatch);
    }

    #[test]
    fn json_terms_sorted() {
        let t = weyl(3);
        let x = TorusElement::monomial(&t, &[1, 0])
            .unwrap()
            .add(&TorusElement::monomial(&t, &[-1, 2]).unwrap())
            .unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with(r#"{"lattice":"weyl","terms":[{"exp":[-1,2]"#), "{s}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn monomial_relation_matches_form(a in proptest::collection::vec(-4i64..=4, 3),
                                          b in proptest::collection::vec(-4i64..=4, 3),
                                          n in prop::sample::select(vec![3u64, 5, 7])) {
            let t = rank3(n);
            let za = TorusElement::monomial(&t, &a).unwrap();
            let zb = TorusElement::monomial(&t, &b).unwrap();
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let pairing = t.pair(&a, &b);
            let expect = TorusElement::term(&t, sum, t.a_quarter_pow(-pairing)).unwrap();
            let ab = za.mul(&zb).unwrap();
            prop_assert_eq!(&ab.terms, &expect.terms);
            // commutation with the half power
            let ba = zb.mul(&za).unwrap().scale(&t.a_half_pow(-pairing)).unwrap();
            prop_assert_eq!(&ab.terms, &ba.terms);
        }

        #[test]
        fn multiplication_is_associative(a in proptest::collection::vec(-3i64..=3, 3),
                                         b in proptest::collection::vec(-3i64..=3, 3),
                                         c in proptest::collection::vec(-3i64..=3, 3)) {
            let t = rank3(7);
            let x = TorusElement::monomial(&t, &a).unwrap().add(&TorusElement::one(&t)).unwrap();
            let y = TorusElement::monomial(&t, &b).unwrap();
            let z = TorusElement::monomial(&t, &c).unwrap().add(&TorusElement::monomial(&t, &a).unwrap()).unwrap();
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l.terms, r.terms);
        }
    }
}
