//! Mapping classes of Σ_g,1: automorphisms of the free group on
//! α_1, β_1, ..., α_g, β_g fixing the boundary word, or SL(2,Z) matrices
//! when g = 1.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::normal::{curve_in_class, normalize_sign, torus_curve, NormalCurve};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;

/// A letter is (generator index, ±1); generator 2i is α_{i+1}, 2i+1 is β_{i+1}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(pub Vec<(usize, i8)>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        FreeWord(vec![(i, 1)])
    }

    pub fn reduced(letters: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut out: Vec<(usize, i8)> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        FreeWord(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduced(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn commutator(x: &Self, y: &Self) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// [α_1,β_1]⋯[α_g,β_g]
    pub fn boundary(genus: usize) -> Self {
        (0..genus).fold(Self::identity(), |acc, i| {
            acc.mul(&Self::commutator(&Self::generator(2 * i), &Self::generator(2 * i + 1)))
        })
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.0).max()
    }

    /// Letters a, A, b, B with an optional 1-based index; "1" or "" is the
    /// empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::identity());
        }
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (kind, exp) = match chars[i] {
                'a' => (0, 1),
                'A' => (0, -1),
                'b' => (1, 1),
                'B' => (1, -1),
                c => return Err(Error::Parse(format!("unexpected '{c}' in word {s:?}"))),
            };
            i += 1;
            let mut idx = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                idx.push(chars[i]);
                i += 1;
            }
            let index: usize = if idx.is_empty() { 1 } else { idx.parse().map_err(|_| Error::Parse(idx.clone()))? };
            if index == 0 {
                return Err(Error::Parse(format!("generator index 0 in {s:?}")));
            }
            letters.push((2 * (index - 1) + kind, exp));
        }
        Ok(Self::reduced(letters))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &(g, e) in &self.0 {
            let c = match (g % 2, e > 0) {
                (0, true) => 'a',
                (0, false) => 'A',
                (_, true) => 'b',
                (_, false) => 'B',
            };
            write!(f, "{c}{}", g / 2 + 1)?;
        }
        Ok(())
    }
}

/// Endomorphism of the free group given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    pub genus: usize,
    pub images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn new(genus: usize, images: Vec<FreeWord>) -> Result<Self> {
        if images.len() != 2 * genus {
            return Err(Error::InvalidMappingClass(format!("{} images for genus {genus}", images.len())));
        }
        if images.iter().any(|w| w.max_generator().is_some_and(|m| m >= 2 * genus)) {
            return Err(Error::InvalidMappingClass("generator index out of range".into()));
        }
        Ok(FreeAutomorphism { genus, images })
    }

    pub fn identity(genus: usize) -> Self {
        FreeAutomorphism { genus, images: (0..2 * genus).map(FreeWord::generator).collect() }
    }

    /// Dehn twist along α on the torus: (α, β) ↦ (α, βα).
    pub fn twist_alpha() -> Self {
        FreeAutomorphism { genus: 1, images: vec![FreeWord::generator(0), FreeWord(vec![(1, 1), (0, 1)])] }
    }

    /// Dehn twist along β on the torus: (α, β) ↦ (αβ⁻¹, β).
    pub fn twist_beta() -> Self {
        FreeAutomorphism { genus: 1, images: vec![FreeWord(vec![(0, 1), (1, -1)]), FreeWord::generator(1)] }
    }

    /// (α, β) ↦ (α, βα⁻¹)
    pub fn twist_alpha_inverse() -> Self {
        FreeAutomorphism { genus: 1, images: vec![FreeWord::generator(0), FreeWord(vec![(1, 1), (0, -1)])] }
    }

    /// (α, β) ↦ (αβ, β)
    pub fn twist_beta_inverse() -> Self {
        FreeAutomorphism { genus: 1, images: vec![FreeWord(vec![(0, 1), (1, 1)]), FreeWord::generator(1)] }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        FreeWord::reduced(w.0.iter().flat_map(|&(g, e)| {
            let img = if e > 0 { self.images[g].clone() } else { self.images[g].inverse() };
            img.0
        }))
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        FreeAutomorphism { genus: self.genus, images: other.images.iter().map(|w| self.apply(w)).collect() }
    }

    /// Action on H_1: column j holds the exponent sums of the image of
    /// generator j.
    pub fn abelianization(&self) -> IntMatrix {
        let n = 2 * self.genus;
        let mut m = IntMatrix::zeros(n, n);
        for (j, w) in self.images.iter().enumerate() {
            for &(g, e) in &w.0 {
                m[(g, j)] += e as i128;
            }
        }
        m
    }

    pub fn fixes_boundary(&self) -> bool {
        self.apply(&FreeWord::boundary(self.genus)) == FreeWord::boundary(self.genus)
    }

    /// Boundary word fixed exactly and unimodular on homology.
    pub fn validate(&self) -> bool {
        self.fixes_boundary() && self.abelianization().det().abs() == 1
    }

    /// Parses `{"a1": "...", "b1": "...", ...}`; missing generators map to
    /// themselves.
    pub fn from_words(genus: usize, words: &BTreeMap<String, String>) -> Result<Self> {
        let mut images: Vec<FreeWord> = (0..2 * genus).map(FreeWord::generator).collect();
        for (key, w) in words {
            let g = FreeWord::parse(key)?;
            match g.0[..] {
                [(i, 1)] if i < 2 * genus => images[i] = FreeWord::parse(w)?,
                _ => return Err(Error::InvalidMappingClass(format!("bad generator key {key:?}"))),
            }
        }
        Self::new(genus, images)
    }

    pub fn to_words(&self) -> BTreeMap<String, String> {
        self.images
            .iter()
            .enumerate()
            .map(|(i, w)| (FreeWord::generator(i).to_string(), w.to_string()))
            .collect()
    }
}

pub fn validate_automorphism(phi: &FreeAutomorphism) -> bool {
    phi.validate()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MappingClass {
    /// action on (p, q) = p·α + q·β for the torus; columns are the images
    Matrix([[i64; 2]; 2]),
    Words(FreeAutomorphism),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MappingClassJson {
    Matrix { matrix: [[i64; 2]; 2] },
    Words { words: BTreeMap<String, String>, genus: Option<usize> },
}

impl MappingClass {
    pub fn matrix(m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
            return Err(Error::NotSl2(format!("{m:?}")));
        }
        Ok(MappingClass::Matrix(m))
    }

    pub fn words(phi: FreeAutomorphism) -> Result<Self> {
        if !phi.validate() {
            return Err(Error::InvalidMappingClass("does not fix the boundary word".into()));
        }
        Ok(MappingClass::Words(phi))
    }

    pub fn genus(&self) -> usize {
        match self {
            MappingClass::Matrix(_) => 1,
            MappingClass::Words(w) => w.genus,
        }
    }

    pub fn homology_matrix(&self) -> IntMatrix {
        match self {
            MappingClass::Matrix(m) => IntMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]),
            MappingClass::Words(w) => w.abelianization(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            MappingClass::Matrix(m) => *m == [[1, 0], [0, 1]],
            MappingClass::Words(w) => *w == FreeAutomorphism::identity(w.genus),
        }
    }

    pub fn from_json(j: &MappingClassJson) -> Result<Self> {
        match j {
            MappingClassJson::Matrix { matrix } => Self::matrix(*matrix),
            MappingClassJson::Words { words, genus } => {
                let g = genus.unwrap_or_else(|| {
                    words.keys().filter_map(|k| FreeWord::parse(k).ok()?.max_generator()).max().map_or(1, |m| m / 2 + 1)
                });
                Self::words(FreeAutomorphism::from_words(g, words)?)
            }
        }
    }

    pub fn to_json(&self) -> MappingClassJson {
        match self {
            MappingClass::Matrix(m) => MappingClassJson::Matrix { matrix: *m },
            MappingClass::Words(w) => MappingClassJson::Words { words: w.to_words(), genus: Some(w.genus) },
        }
    }

    /// Parses "[[a,b],[c,d]]" as a matrix.
    pub fn parse_matrix(s: &str) -> Result<Self> {
        let m: [[i64; 2]; 2] = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::matrix(m)
    }
}

fn apply_to_class(m: &IntMatrix, class: &[i64]) -> Vec<i64> {
    let v: Vec<i128> = class.iter().map(|&x| x as i128).collect();
    m.mul_vec(&v).into_iter().map(|x| x as i64).collect()
}

/// Image of a torus curve under a mapping class, re-traced to normal
/// coordinates on Δ_1.
pub fn act_on_curve(phi: &MappingClass, c: &NormalCurve) -> Result<NormalCurve> {
    if phi.genus() != 1 || c.triangulation().genus() != 1 {
        return Err(Error::Unsupported(
            "curve action is only computed for genus 1; supply both curves for higher genus".into(),
        ));
    }
    let class = c.homology()?;
    let image = apply_to_class(&phi.homology_matrix(), &class);
    torus_curve(image[0], image[1])
}

/// For a supplied pair (α, β), checks that β lies in the homology class
/// φ(α) (up to orientation).
pub fn check_supplied_image(phi: &MappingClass, alpha: &NormalCurve, beta: &NormalCurve) -> Result<bool> {
    let a = alpha.homology()?;
    let b = beta.homology()?;
    let m = phi.homology_matrix();
    if m.rows() != a.len() {
        return Err(Error::Dimension(format!("mapping class of rank {} on class of length {}", m.rows(), a.len())));
    }
    Ok(normalize_sign(apply_to_class(&m, &a)) == b)
}

/// Curve in the class φ(α) on any Δ_g, by search.
pub fn image_by_search(phi: &MappingClass, alpha: &NormalCurve) -> Result<NormalCurve> {
    let class = apply_to_class(&phi.homology_matrix(), &alpha.homology()?);
    curve_in_class(alpha.triangulation(), &class)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::surface::standard_triangulation;

    #[test]
    fn builtin_twists_fix_the_commutator() {
        for phi in [FreeAutomorphism::twist_alpha(), FreeAutomorphism::twist_beta()] {
            assert!(phi.fixes_boundary());
            assert!(validate_automorphism(&phi));
        }
        let m = FreeAutomorphism::twist_alpha().abelianization();
        assert_eq!(m, IntMatrix::from_rows(&[vec![1i64, 1], vec![0, 1]]));
        for (t, inv) in [
            (FreeAutomorphism::twist_alpha(), FreeAutomorphism::twist_alpha_inverse()),
            (FreeAutomorphism::twist_beta(), FreeAutomorphism::twist_beta_inverse()),
        ] {
            assert_eq!(t.compose(&inv), FreeAutomorphism::identity(1));
            assert_eq!(inv.compose(&t), FreeAutomorphism::identity(1));
        }
        let m = FreeAutomorphism::twist_beta().abelianization();
        assert_eq!(m, IntMatrix::from_rows(&[vec![1i64, 0], vec![-1, 1]]));
    }

    #[test]
    fn degenerate_endomorphism_rejected() {
        let phi = FreeAutomorphism::new(1, vec![FreeWord::generator(0), FreeWord::generator(0)]).unwrap();
        assert!(!validate_automorphism(&phi));
        assert!(MappingClass::words(phi).is_err());
    }

    #[test]
    fn parse_and_print_words() {
        let w = FreeWord::parse("a1 b2 B2 A").unwrap();
        assert_eq!(w, FreeWord::identity());
        let w = FreeWord::parse("aB2").unwrap();
        assert_eq!(w.to_string(), "a1B2");
        assert!(FreeWord::parse("c").is_err());
        let words = BTreeMap::from([("b1".to_string(), "b1a1".to_string())]);
        let phi = FreeAutomorphism::from_words(1, &words).unwrap();
        assert_eq!(phi, FreeAutomorphism::twist_alpha());
    }

    #[test]
    fn higher_genus_validation() {
        // twist along α_2 in genus 2
        let mut phi = FreeAutomorphism::identity(2);
        phi.images[3] = FreeWord(vec![(3, 1), (2, 1)]);
        assert!(phi.validate());
        let mut bad = FreeAutomorphism::identity(2);
        bad.images[0] = FreeWord::generator(2);
        bad.images[2] = FreeWord::generator(0);
        assert!(!bad.fixes_boundary());
    }

    #[test]
    fn matrix_actions_on_torus_curves() {
        let t_alpha = MappingClass::matrix([[1, 1], [0, 1]]).unwrap();
        let s = MappingClass::matrix([[0, -1], [1, 0]]).unwrap();
        let id = MappingClass::matrix([[1, 0], [0, 1]]).unwrap();
        let c01 = torus_curve(0, 1).unwrap();
        let c10 = torus_curve(1, 0).unwrap();
        assert_eq!(act_on_curve(&t_alpha, &c01).unwrap(), torus_curve(1, 1).unwrap());
        assert_eq!(act_on_curve(&s, &c10).unwrap(), c01);
        assert_eq!(act_on_curve(&id, &c10).unwrap(), c10);
        let words = MappingClass::words(FreeAutomorphism::twist_alpha()).unwrap();
        assert_eq!(act_on_curve(&words, &c01).unwrap(), torus_curve(1, 1).unwrap());
        assert!(MappingClass::matrix([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn higher_genus_action_is_verified_not_computed() {
        let t = standard_triangulation(2).unwrap();
        let mut phi = FreeAutomorphism::identity(2);
        phi.images[1] = FreeWord(vec![(1, 1), (0, 1)]);
        let phi = MappingClass::words(phi).unwrap();
        let alpha = curve_in_class(&t, &[0, 1, 0, 0]).unwrap();
        assert!(matches!(act_on_curve(&phi, &alpha), Err(Error::Unsupported(_))));
        let beta = curve_in_class(&t, &[1, 1, 0, 0]).unwrap();
        assert!(check_supplied_image(&phi, &alpha, &beta).unwrap());
        assert!(!check_supplied_image(&phi, &alpha, &alpha).unwrap());
        assert_eq!(image_by_search(&phi, &alpha).unwrap(), beta);
    }

    #[test]
    fn json_forms() {
        let j: MappingClassJson = serde_json::from_str(r#"{"matrix":[[1,1],[0,1]]}"#).unwrap();
        assert_eq!(MappingClass::from_json(&j).unwrap(), MappingClass::Matrix([[1, 1], [0, 1]]));
        let j: MappingClassJson = serde_json::from_str(r#"{"words":{"a1":"a1B1"}}"#).unwrap();
        assert_eq!(
            MappingClass::from_json(&j).unwrap(),
            MappingClass::Words(FreeAutomorphism::twist_beta())
        );
    }

    fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    }

    fn word_matrix(w: &[u8]) -> [[i64; 2]; 2] {
        let gens = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [-1, 1]], [[1, 0], [1, 1]]];
        w.iter().fold([[1, 0], [0, 1]], |acc, &i| mat_mul(acc, gens[i as usize]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn action_respects_composition(
            w1 in proptest::collection::vec(0u8..4, 0..=5),
            w2 in proptest::collection::vec(0u8..4, 0..=5),
            start in 0usize..3,
        ) {
            let (m1, m2) = (word_matrix(&w1), word_matrix(&w2));
            let c = [torus_curve(1, 0), torus_curve(0, 1), torus_curve(1, 1)][start].clone().unwrap();
            let g1 = MappingClass::matrix(m1).unwrap();
            let g2 = MappingClass::matrix(m2).unwrap();
            let g12 = MappingClass::matrix(mat_mul(m1, m2)).unwrap();
            let lhs = act_on_curve(&g12, &c).unwrap();
            let rhs = act_on_curve(&g1, &act_on_curve(&g2, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
