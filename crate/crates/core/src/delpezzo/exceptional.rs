//! (-1)-classes and sets of pairwise disjoint ones.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice_pic::PicClass;
use crate::linalg::integer_kernel;

/// Largest degree a (-1)-class can have on `P_r`: Cauchy-Schwarz applied to
/// `sum m_i = 3d - 1` and `sum m_i^2 = d^2 + 1` gives `(3d-1)^2 <= r (d^2+1)`.
pub fn degree_bound(r: usize) -> Option<i64> {
    let r = r as i64;
    if r >= 9 {
        return None;
    }
    let mut d: i64 = 0;
    let mut best = None;
    while d <= 64 {
        if (3 * d - 1).pow(2) <= r * (d * d + 1) {
            best = Some(d);
        }
        d += 1;
    }
    best
}

/// All `D = dH - sum m_i E_i` with `d >= 0`, `D^2 = -1` and `-K.D = 1`,
/// sorted. Complete for `r <= 8`; for `r = 9` a degree cap is mandatory.
pub fn minus_one_classes(r: usize, d_max: Option<i64>) -> Result<Vec<PicClass>> {
    if r > 9 {
        return invalid(format!("r = {r} is outside 0..=9"));
    }
    let top = match (degree_bound(r), d_max) {
        (None, None) => return invalid("r = 9 has infinitely many (-1)-classes; supply a degree cap"),
        (None, Some(d)) => d,
        (Some(b), None) => b,
        (Some(b), Some(d)) => b.min(d),
    };
    let mut out = Vec::new();
    for d in 0..=top {
        let mut shapes = Vec::new();
        let mut cur = Vec::with_capacity(r);
        nonincreasing(r, 3 * d - 1, d * d + 1, i64::MAX, &mut cur, &mut shapes);
        for shape in shapes {
            let mut perm: Vec<i64> = shape.into_iter().rev().collect();
            loop {
                let mut c = vec![d];
                c.extend(&perm);
                out.push(PicClass::from_vec(c));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Nonincreasing integer sequences of length `k` with the given sum and sum
/// of squares, each entry at most `cap`.
fn nonincreasing(k: usize, sum: i64, sq: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if k == 0 {
        if sum == 0 && sq == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if sq < 0 || sum * sum > k as i64 * sq {
        return;
    }
    let root = (sq as f64).sqrt() as i64 + 1;
    let hi = cap.min(root);
    let mut v = hi;
    while v >= -root {
        if v * v <= sq {
            // Remaining entries are all <= v, so their sum is at most (k-1) v.
            let rest = sum - v;
            if rest <= (k as i64 - 1) * v || k == 1 {
                cur.push(v);
                nonincreasing(k - 1, rest, sq - v * v, v, cur, out);
                cur.pop();
            }
        }
        v -= 1;
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// What contracting a disjoint set of (-1)-curves produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Blowdown {
    /// The plane blown up in the given number of points.
    Plane(usize),
    /// The quadric surface `P^1 x P^1`.
    Quadric,
}

/// A set of pairwise orthogonal (-1)-classes with its blow-down type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DisjointExceptionalSet {
    classes: Vec<PicClass>,
    blowdown: Blowdown,
}

impl DisjointExceptionalSet {
    /// Validates the members and classifies the blow-down.
    pub fn new(r: usize, mut classes: Vec<PicClass>) -> Result<Self> {
        for c in &classes {
            if c.r() != r || c.square() != -1 || c.anticanonical_degree() != 1 {
                return invalid(format!("{c} is not a (-1)-class on P_{r}"));
            }
        }
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                if a.dot(b) != 0 {
                    return invalid(format!("{a} and {b} meet"));
                }
            }
        }
        classes.sort();
        classes.dedup();
        let blowdown = if orthogonal_lattice_is_even(r, &classes) {
            Blowdown::Quadric
        } else {
            Blowdown::Plane(r - classes.len())
        };
        Ok(Self { classes, blowdown })
    }

    pub fn classes(&self) -> &[PicClass] {
        &self.classes
    }

    pub fn blowdown(&self) -> Blowdown {
        self.blowdown
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether `D . I = 0` for every member.
    pub fn is_orthogonal_to(&self, d: &PicClass) -> bool {
        self.classes.iter().all(|i| i.dot(d) == 0)
    }
}

/// Integer basis of `S^perp = {D : D.I = 0 for I in S}`.
pub fn orthogonal_lattice(r: usize, set: &[PicClass]) -> Vec<PicClass> {
    // D.I = d d_I - sum m_i m_{I,i}: a row (d_I, -m_I) against coefficients of D.
    let rows: Vec<Vec<i64>> = set
        .iter()
        .map(|i| {
            let c = i.coeffs();
            std::iter::once(c[0]).chain(c[1..].iter().map(|m| -m)).collect()
        })
        .collect();
    if rows.is_empty() {
        return (0..=r).map(|k| PicClass::from_vec((0..=r).map(|j| i64::from(j == k)).collect())).collect();
    }
    integer_kernel(&rows, r + 1).into_iter().map(PicClass::from_vec).collect()
}

/// An integral lattice is even iff every basis vector has even square.
fn orthogonal_lattice_is_even(r: usize, set: &[PicClass]) -> bool {
    orthogonal_lattice(r, set).iter().all(|b| b.square() % 2 == 0)
}

/// Every set of pairwise disjoint (-1)-classes on `P_r`, including the empty
/// set. Sets are listed in depth-first order over the sorted class list.
/// `r >= 7` is refused unless `allow_large` is set.
pub fn disjoint_exceptional_sets(
    r: usize,
    classes: &[PicClass],
    allow_large: bool,
) -> Result<Vec<DisjointExceptionalSet>> {
    if r > 8 {
        return invalid("disjoint sets are only enumerated for r <= 8");
    }
    if r >= 7 && !allow_large {
        return Err(Error::Infeasible(format!("disjoint-set enumeration for r = {r} needs allow_large")));
    }
    let n = classes.len();
    let meets: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| classes[i].dot(&classes[j]) != 0).collect()).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        r: usize,
        classes: &[PicClass],
        meets: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<DisjointExceptionalSet>,
    ) -> Result<()> {
        out.push(DisjointExceptionalSet::new(r, chosen.iter().map(|&i| classes[i].clone()).collect())?);
        for j in start..classes.len() {
            if chosen.iter().all(|&i| !meets[i][j]) {
                chosen.push(j);
                rec(j + 1, r, classes, meets, chosen, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(0, r, classes, &meets, &mut chosen, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> PicClass {
        PicClass::new(v.to_vec()).unwrap()
    }

    #[test]
    fn classes_for_two_points() {
        let c = minus_one_classes(2, None).unwrap();
        assert_eq!(c, vec![cls(&[0, -1, 0]), cls(&[0, 0, -1]), cls(&[1, 1, 1])]);
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(degree_bound(8), Some(7));
        assert_eq!(degree_bound(6), Some(2));
        assert_eq!(degree_bound(9), None);
    }

    #[test]
    fn counts() {
        let counts: Vec<usize> = (1..=8).map(|r| minus_one_classes(r, None).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 6, 10, 16, 27, 56, 240]);
    }

    #[test]
    fn r9_needs_cap() {
        assert!(minus_one_classes(9, None).is_err());
        assert_eq!(minus_one_classes(9, Some(0)).unwrap().len(), 9);
        assert_eq!(minus_one_classes(9, Some(1)).unwrap().len(), 45);
    }

    #[test]
    fn sets_for_two_points() {
        let classes = minus_one_classes(2, None).unwrap();
        let sets = disjoint_exceptional_sets(2, &classes, false).unwrap();
        assert_eq!(sets.len(), 5);
        assert!(sets[0].is_empty());
        let t = sets.iter().find(|s| s.classes() == [cls(&[1, 1, 1])]).unwrap();
        assert_eq!(t.blowdown(), Blowdown::Quadric);
    }

    #[test]
    fn classification_on_three_points() {
        let t = DisjointExceptionalSet::new(3, vec![cls(&[1, 1, 1, 0]), cls(&[0, 0, 0, -1])]).unwrap();
        assert_eq!(t.blowdown(), Blowdown::Quadric);
        let p = DisjointExceptionalSet::new(3, vec![cls(&[1, 1, 1, 0]), cls(&[1, 1, 0, 1])]).unwrap();
        assert_eq!(p.blowdown(), Blowdown::Plane(1));
        assert!(DisjointExceptionalSet::new(3, vec![cls(&[1, 1, 1, 0]), cls(&[0, -1, 0, 0])]).is_err());
    }

    #[test]
    fn large_rank_is_gated() {
        let classes = minus_one_classes(7, None).unwrap();
        assert!(matches!(disjoint_exceptional_sets(7, &classes, false), Err(Error::Infeasible(_))));
    }
}
