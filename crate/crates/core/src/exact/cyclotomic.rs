//! Exact arithmetic in the cyclotomic field Q(ζ_m).
//!
//! Values are stored as residues modulo the m-th cyclotomic polynomial,
//! written over a common denominator so that equality is coefficientwise.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Integer coefficients of Φ_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    debug_assert!(lead == 1);
    let qlen = rem.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Reduction data for one cyclotomic order.
#[derive(Debug)]
pub struct Field {
    order: u32,
    degree: usize,
    /// x^k mod Φ_m for k in 0..m
    powers: Vec<Vec<i64>>,
}

impl Field {
    fn new(order: u32) -> Field {
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 0 {
            unreachable!("cyclotomic polynomials have positive degree");
        }
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for i in 0..degree {
                cur[i] -= top * phi[i];
            }
        }
        Field { order, degree, powers }
    }

    pub fn get(order: u32) -> Arc<Field> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("field cache poisoned");
        map.entry(order)
            .or_insert_with(|| Arc::new(Field::new(order)))
            .clone()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// An element of Q(ζ_m).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        let field = Field::get(order);
        let num = vec![BigInt::zero(); field.degree];
        Cyclotomic { field, num, den: BigInt::one() }
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = BigInt::from(v);
        z.normalize();
        z
    }

    pub fn from_rational(order: u32, v: &BigRational) -> Self {
        let mut z = Self::zero(order);
        z.num[0] = v.numer().clone();
        z.den = v.denom().clone();
        z.normalize();
        z
    }

    /// ζ_m^k for any integer k.
    pub fn zeta_pow(order: u32, k: i64) -> Self {
        let field = Field::get(order);
        let idx = k.rem_euclid(order as i64) as usize;
        let num = field.powers[idx].iter().map(|&c| BigInt::from(c)).collect();
        Cyclotomic { field, num, den: BigInt::one() }
    }

    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// Builds from rational coefficients on 1, ζ, ..., ζ^{φ(m)-1}.
    pub fn from_coeffs(order: u32, coeffs: &[BigRational]) -> Result<Self> {
        let field = Field::get(order);
        if coeffs.len() != field.degree {
            return Err(Error::Dimension(format!(
                "expected {} coefficients for order {}, got {}",
                field.degree,
                order,
                coeffs.len()
            )));
        }
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut z = Cyclotomic { field, num, den };
        z.normalize();
        Ok(z)
    }

    fn normalize(&mut self) {
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c = &*c / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::OrderMismatch(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let num = if self.den == other.den {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        let den = if self.den == other.den {
            self.den.clone()
        } else {
            &self.den * &other.den
        };
        let mut z = Cyclotomic { field: self.field.clone(), num, den };
        z.normalize();
        z
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.field.degree;
        let m = self.field.order as usize;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (i, &p) in self.field.powers[k % m].iter().enumerate() {
                if p != 0 {
                    num[i] += c * p;
                }
            }
        }
        let mut z = Cyclotomic {
            field: self.field.clone(),
            num,
            den: &self.den * &other.den,
        };
        z.normalize();
        z
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let mut z = self.clone();
        for c in &mut z.num {
            *c *= k;
        }
        z.normalize();
        z
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order(), &r.recip()));
        }
        // Solve (self * x^j) u = 1 over Q.
        let d = self.field.degree;
        let order = self.order();
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let xj = Self::zeta_pow(order, j as i64);
            cols.push(self.mul_unchecked(&xj).coeffs());
        }
        let mut rows: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..d {
            let p = (c..d)
                .find(|&r| !rows[r][c].is_zero())
                .ok_or(Error::DivisionByZero)?;
            rows.swap(c, p);
            let piv = rows[c][c].clone();
            for v in rows[c].iter_mut() {
                *v = &*v / &piv;
            }
            for r in 0..d {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    for k in c..=d {
                        let t = &rows[c][k] * &f;
                        rows[r][k] -= t;
                    }
                }
            }
        }
        let u: Vec<BigRational> = rows.into_iter().map(|r| r[d].clone()).collect();
        Self::from_coeffs(order, &u)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        Ok(acc)
    }

    /// Image under Q(ζ_m) ⊂ Q(ζ_M), sending ζ_m to ζ_M^{M/m}.
    pub fn embed(&self, target: u32) -> Result<Self> {
        let m = self.order();
        if target % m != 0 {
            return Err(Error::OrderMismatch(m, target));
        }
        if target == m {
            return Ok(self.clone());
        }
        let step = (target / m) as i64;
        let mut acc = Self::zero(target);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = Self::zeta_pow(target, step * i as i64);
            let mut scaled = term;
            for v in &mut scaled.num {
                *v *= c;
            }
            acc = acc.add_unchecked(&scaled, false);
        }
        acc.den = &acc.den * &self.den;
        acc.normalize();
        Ok(acc)
    }

    /// Finds (r, k) with self = r·ζ^k, r rational, if such a decomposition exists.
    pub fn rational_times_root(&self) -> Option<(BigRational, i64)> {
        let m = self.order() as i64;
        for k in 0..m {
            let shifted = self.mul_unchecked(&Self::zeta_pow(self.order(), -k));
            if let Some(r) = shifted.as_rational() {
                return Some((r, k));
            }
        }
        None
    }

    /// An n-th root inside the same field, when one is visible as a
    /// rational perfect power times a root of unity.
    pub fn try_root(&self, n: u64) -> Result<Self> {
        let order = self.order();
        let no_root = Error::NoRoot(n, order);
        if n == 0 {
            return Err(no_root);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (mut r, mut k) = self.rational_times_root().ok_or(no_root.clone())?;
        let m = order as i64;
        if r.is_negative() && n % 2 == 0 {
            if m % 2 != 0 {
                return Err(no_root);
            }
            r = -r;
            k += m / 2;
        }
        let s = rational_nth_root(&r, n).ok_or(no_root.clone())?;
        // need n·j ≡ k (mod m)
        let j = (0..m)
            .find(|j| (j * n as i64 - k).rem_euclid(m) == 0)
            .ok_or(no_root)?;
        Ok(Self::from_rational(order, &s).mul_unchecked(&Self::zeta_pow(order, j)))
    }
}

fn int_nth_root(v: &BigInt, n: u64) -> Option<BigInt> {
    if v.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return int_nth_root(&-v, n).map(|r| -r);
    }
    let r = v.nth_root(n as u32);
    if num_traits::pow(r.clone(), n as usize) == *v {
        Some(r)
    } else {
        None
    }
}

fn rational_nth_root(r: &BigRational, n: u64) -> Option<BigRational> {
    let p = int_nth_root(r.numer(), n)?;
    let q = int_nth_root(r.denom(), n)?;
    Some(BigRational::new(p, q))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .order
            .cmp(&other.field.order)
            .then_with(|| self.coeffs().cmp(&other.coeffs()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$inner(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl std::ops::$tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$inner(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale_int(-1)
    }
}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale_int(-1)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("z{}", self.order()),
                _ => format!("z{}^{}", self.order(), i),
            };
            parts.push(if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if *c == -BigRational::one() {
                format!("-{mono}")
            } else {
                format!("({c})*{mono}")
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicJson {
            order: self.order(),
            coeffs: self.coeffs().iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CyclotomicJson::deserialize(d)?;
        if raw.order == 0 {
            return Err(D::Error::custom("cyclotomic order must be positive"));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(raw.order, &coeffs).map_err(D::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(p))
    }
}

/// Small helper used throughout for rational literals.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(15).len() - 1, 8);
        assert_eq!(euler_phi(20), 8);
    }

    #[test]
    fn zeta3_identities() {
        let z = Cyclotomic::zeta(3);
        let z2 = Cyclotomic::zeta_pow(3, 2);
        assert!((&z * &z2).is_one());
        let one = Cyclotomic::one(3);
        let prod = (&one + &z) * (&one + &z2);
        assert!(prod.is_one());
        assert!((one.clone() + z.clone() + z2).is_zero());
        let z5 = Cyclotomic::zeta(5);
        assert_eq!(&z5 + &Cyclotomic::zero(5), z5);
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [1u32, 2, 3, 4, 5, 7, 9, 12, 15, 20] {
            let z = Cyclotomic::zeta(m);
            assert!(z.pow(m as i64).unwrap().is_one(), "m={m}");
            if m > 1 {
                assert!(!z.pow(1).unwrap().is_one() || m == 1);
            }
        }
    }

    #[test]
    fn errors() {
        let a = Cyclotomic::zeta(3);
        let b = Cyclotomic::zeta(5);
        assert_eq!(a.try_mul(&b), Err(Error::OrderMismatch(3, 5)));
        assert_eq!(Cyclotomic::zero(7).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_nonrational() {
        let one = Cyclotomic::one(7);
        let x = &one + &Cyclotomic::zeta(7).scale_int(3);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let a = Cyclotomic::zeta(3) + Cyclotomic::from_int(3, 2);
        let b = Cyclotomic::zeta_pow(3, 2);
        let ab = (&a * &b).embed(12).unwrap();
        let prod = a.embed(12).unwrap() * b.embed(12).unwrap();
        assert_eq!(ab, prod);
        assert_eq!(Cyclotomic::zeta(3).embed(12).unwrap(), Cyclotomic::zeta_pow(12, 4));
    }

    #[test]
    fn roots() {
        let z9 = Cyclotomic::zeta_pow(9, 3);
        let r = z9.try_root(3).unwrap();
        assert_eq!(r.pow(3).unwrap(), z9);
        let eight = Cyclotomic::from_int(4, -8);
        assert_eq!(eight.try_root(3).unwrap().pow(3).unwrap(), eight);
        let minus_one = Cyclotomic::from_int(4, -1);
        assert_eq!(minus_one.try_root(2).unwrap().pow(2).unwrap(), minus_one);
        assert!(Cyclotomic::from_int(3, 2).try_root(2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = Cyclotomic::from_coeffs(5, &[rat(1, 2), rat(0, 1), rat(-3, 1), rat(2, 3)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"order":5,"coeffs":["1/2","0","-3","2/3"]}"#);
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
