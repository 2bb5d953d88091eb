//! The Picard lattice `Z H + Z E_1 + ... + Z E_r` of the plane blown up in
//! `r` points, its intersection form, and the Weyl group generated by index
//! permutations and quadratic transformations.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest number of blown-up points the lattice supports.
pub const MAX_POINTS: usize = 9;

/// Default cap on the size of a Weyl group closure.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// The divisor class `d H - sum m_i E_i`, stored as `[d, m_1, ..., m_r]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PicClass {
    coeffs: Vec<i64>,
}

impl PicClass {
    /// Builds a class from `[d, m_1, ..., m_r]`.
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_POINTS + 1 {
            return invalid(format!("class needs between 1 and {} coefficients", MAX_POINTS + 1));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec(coeffs: Vec<i64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero(r: usize) -> Self {
        Self { coeffs: vec![0; r + 1] }
    }

    /// The pullback of a line.
    pub fn hyperplane(r: usize) -> Self {
        let mut c = vec![0; r + 1];
        c[0] = 1;
        Self { coeffs: c }
    }

    /// The exceptional class `E_i`, `1 <= i <= r`.
    pub fn exceptional(r: usize, i: usize) -> Self {
        assert!((1..=r).contains(&i), "exceptional index out of range");
        let mut c = vec![0; r + 1];
        c[i] = -1;
        Self { coeffs: c }
    }

    /// `K = -3H + sum E_i`.
    pub fn canonical(r: usize) -> Self {
        let mut c = vec![-1; r + 1];
        c[0] = -3;
        Self { coeffs: c }
    }

    pub fn anticanonical(r: usize) -> Self {
        Self::canonical(r).scale(-1)
    }

    pub fn r(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> i64 {
        self.coeffs[0]
    }

    pub fn mults(&self) -> &[i64] {
        &self.coeffs[1..]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The intersection number. Panics on a rank mismatch; see [`pair`].
    pub fn dot(&self, other: &PicClass) -> i64 {
        assert_eq!(self.r(), other.r(), "rank mismatch in intersection pairing");
        self.coeffs[0] * other.coeffs[0]
            - self.coeffs[1..].iter().zip(&other.coeffs[1..]).map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    /// `(-K) . D = 3d - sum m_i`.
    pub fn anticanonical_degree(&self) -> i64 {
        3 * self.coeffs[0] - self.coeffs[1..].iter().sum::<i64>()
    }

    pub fn add(&self, other: &PicClass) -> PicClass {
        PicClass::from_vec(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &PicClass) -> PicClass {
        PicClass::from_vec(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> PicClass {
        PicClass::from_vec(self.coeffs.iter().map(|a| a * k).collect())
    }

    /// Extends the class to a lattice with more points (pullback under
    /// blowing up further points).
    pub fn pad_to(&self, r: usize) -> PicClass {
        assert!(r >= self.r());
        let mut c = self.coeffs.clone();
        c.resize(r + 1, 0);
        PicClass::from_vec(c)
    }
}

/// Intersection pairing with a rank check.
pub fn pair(a: &PicClass, b: &PicClass) -> Result<i64> {
    if a.r() != b.r() {
        return invalid(format!("rank mismatch: r = {} vs r = {}", a.r(), b.r()));
    }
    Ok(a.dot(b))
}

impl fmt::Debug for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, name: &str| -> fmt::Result {
            if c == 0 {
                return Ok(());
            }
            let sign = if c < 0 {
                "-"
            } else if wrote {
                "+"
            } else {
                ""
            };
            let mag = c.unsigned_abs();
            wrote = true;
            if mag == 1 {
                write!(f, "{sign}{name}")
            } else {
                write!(f, "{sign}{mag}{name}")
            }
        };
        term(f, self.coeffs[0], "H")?;
        for (i, &m) in self.coeffs[1..].iter().enumerate() {
            term(f, -m, &format!("E{}", i + 1))?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A lattice automorphism acting on coefficient vectors `[d, m_1, ..., m_r]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylElement {
    matrix: Vec<Vec<i64>>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

impl WeylElement {
    pub fn identity(r: usize) -> Self {
        Self { matrix: (0..=r).map(|i| (0..=r).map(|j| i64::from(i == j)).collect()).collect() }
    }

    /// Builds the element from the images of the basis `H, E_1, ..., E_r`.
    fn from_basis_images(r: usize, images: &[PicClass]) -> Self {
        // Column j holds the coefficient vector of the image of the j-th
        // coordinate direction. The coordinate direction e_0 is H, and e_i
        // (i >= 1) is -E_i because the coefficient of E_i is stored negated.
        let mut matrix = vec![vec![0; r + 1]; r + 1];
        for (j, img) in images.iter().enumerate() {
            let sign = if j == 0 { 1 } else { -1 };
            for i in 0..=r {
                matrix[i][j] = sign * img.coeffs[i];
            }
        }
        Self { matrix }
    }

    /// The permutation action `H -> H`, `E_l -> E_sigma(l)`.
    /// `sigma` is a permutation of `1..=r` given as `sigma[l-1]`.
    pub fn permutation(r: usize, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), r);
        let mut images = vec![PicClass::hyperplane(r)];
        images.extend(sigma.iter().map(|&s| PicClass::exceptional(r, s)));
        Self::from_basis_images(r, &images)
    }

    /// The quadratic transformation centred at `E_a, E_b, E_c`.
    pub fn quadratic(r: usize, a: usize, b: usize, c: usize) -> Self {
        assert!(a != b && b != c && a != c);
        let h = PicClass::hyperplane(r);
        let e = |i| PicClass::exceptional(r, i);
        let mut images = vec![h.scale(2).sub(&e(a)).sub(&e(b)).sub(&e(c))];
        for i in 1..=r {
            let img = if i == a {
                h.sub(&e(b)).sub(&e(c))
            } else if i == b {
                h.sub(&e(c)).sub(&e(a))
            } else if i == c {
                h.sub(&e(a)).sub(&e(b))
            } else {
                e(i)
            };
            images.push(img);
        }
        Self::from_basis_images(r, &images)
    }

    pub fn r(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, d: &PicClass) -> PicClass {
        PicClass::from_vec(self.apply_coeffs(d.coeffs()))
    }

    pub(crate) fn apply_coeffs(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.matrix.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum()).collect())
            .collect();
        WeylElement { matrix }
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.r())
    }

    fn flat(&self) -> Vec<i64> {
        self.matrix.iter().flatten().copied().collect()
    }
}

/// Adjacent transpositions plus every quadratic transformation `phi_abc`,
/// sorted lexicographically by matrix entries.
pub fn weyl_generators(r: usize) -> Vec<WeylElement> {
    let mut gens = Vec::new();
    for i in 1..r {
        let mut sigma: Vec<usize> = (1..=r).collect();
        sigma.swap(i - 1, i);
        gens.push(WeylElement::permutation(r, &sigma));
    }
    for a in 1..=r {
        for b in a + 1..=r {
            for c in b + 1..=r {
                gens.push(WeylElement::quadratic(r, a, b, c));
            }
        }
    }
    gens.sort_by_key(|g| g.flat());
    gens
}

/// A finite matrix group closed under multiplication.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    r: usize,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylGroup {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn index_of(&self, g: &WeylElement) -> Option<usize> {
        self.index.get(&g.flat()).copied()
    }

    /// Index of `elements[i] . elements[j]`.
    pub fn multiply(&self, i: usize, j: usize) -> usize {
        let prod = self.elements[i].compose(&self.elements[j]);
        self.index_of(&prod).expect("group not closed under multiplication")
    }
}

/// Breadth-first closure of [`weyl_generators`]. Fails with
/// [`Error::Infeasible`] once more than `element_cap` elements are found.
pub fn weyl_group(r: usize, element_cap: usize) -> Result<WeylGroup> {
    if r > MAX_POINTS {
        return invalid(format!("r = {r} exceeds {MAX_POINTS}"));
    }
    let gens = weyl_generators(r);
    let id = WeylElement::identity(r);
    let mut index = HashMap::new();
    index.insert(id.flat(), 0);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next = g.compose(&elements[i]);
            let key = next.flat();
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= element_cap {
                return Err(Error::Infeasible(format!(
                    "group too large: Weyl group for r = {r} exceeds {element_cap} elements"
                )));
            }
            index.insert(key, elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(WeylGroup { r, elements, index })
}

/// Smallest `q > r` with `1/p + 1/r + 1/(q - r) <= 1`, in exact arithmetic.
pub fn mukai_q0(r: i64, p: i64) -> Result<i64> {
    if r < 3 || p < 2 {
        return invalid("mukai_q0 needs r >= 3 and p >= 2");
    }
    let one = Ratio::from_integer(1i64);
    let base = Ratio::new(1, p) + Ratio::new(1, r);
    let mut q = r + 1;
    loop {
        if base + Ratio::new(1, q - r) <= one {
            return Ok(q);
        }
        q += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> PicClass {
        PicClass::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let h = PicClass::hyperplane(0);
        assert_eq!(pair(&h, &h).unwrap(), 1);
        // (2H - E1) . (H - E1 - E2) = 2 - 1
        assert_eq!(pair(&cls(&[2, 1, 0]), &cls(&[1, 1, 1])).unwrap(), 1);
        let k = PicClass::canonical(4);
        assert_eq!(k.square(), 5);
        assert_eq!(k.to_string(), "-3H+E1+E2+E3+E4");
        assert_eq!(k.anticanonical_degree(), -5);
        assert!(pair(&cls(&[1, 0]), &cls(&[1])).is_err());
    }

    #[test]
    fn quadratic_transform_images() {
        let phi = WeylElement::quadratic(4, 1, 2, 3);
        assert_eq!(phi.apply(&PicClass::hyperplane(4)), cls(&[2, 1, 1, 1, 0]));
        assert_eq!(phi.apply(&PicClass::exceptional(4, 4)), PicClass::exceptional(4, 4));
        assert_eq!(phi.apply(&PicClass::exceptional(4, 1)), cls(&[1, 0, 1, 1, 0]));
        assert!(phi.compose(&phi).is_identity());
    }

    #[test]
    fn generators_preserve_form_and_canonical_class() {
        for r in 0..=8 {
            let k = PicClass::canonical(r);
            for g in weyl_generators(r) {
                assert_eq!(g.apply(&k), k);
                for i in 0..=r {
                    for j in 0..=r {
                        let mut a = vec![0; r + 1];
                        let mut b = vec![0; r + 1];
                        a[i] = 1;
                        b[j] = 1;
                        let (a, b) = (cls(&a), cls(&b));
                        assert_eq!(g.apply(&a).dot(&g.apply(&b)), a.dot(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn small_rank_has_only_permutations() {
        assert_eq!(weyl_generators(2).len(), 1);
        assert_eq!(weyl_group(2, 10).unwrap().order(), 2);
        assert_eq!(weyl_group(1, 10).unwrap().order(), 1);
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group(3, DEFAULT_ELEMENT_CAP).unwrap().order(), 12);
        assert_eq!(weyl_group(4, DEFAULT_ELEMENT_CAP).unwrap().order(), 120);
        assert_eq!(weyl_group(5, DEFAULT_ELEMENT_CAP).unwrap().order(), 1920);
    }

    #[test]
    fn cap_is_reported() {
        let err = weyl_group(4, 50).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn multiplication_table_is_consistent() {
        let g = weyl_group(3, 100).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.multiply(0, i), i);
            assert_eq!(g.multiply(i, 0), i);
        }
    }

    #[test]
    fn mukai_examples() {
        assert_eq!(mukai_q0(3, 2).unwrap(), 9);
        assert_eq!(mukai_q0(3, 3).unwrap(), 6);
        assert_eq!(mukai_q0(4, 2).unwrap(), 8);
        assert!(mukai_q0(2, 2).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(cls(&[2, 1, 0, 1]).to_string(), "2H-E1-E3");
        assert_eq!(cls(&[0, -2]).to_string(), "2E1");
        assert_eq!(PicClass::zero(2).to_string(), "0");
    }
}
