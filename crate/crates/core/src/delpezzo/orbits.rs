//! Weyl orbits of disjoint sets and the orbit-sum form of the Euler-Chow series.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{disjoint_exceptional_sets, DelPezzo, DisjointExceptionalSet};
use crate::error::{invalid, Error, Result};
use crate::lattice_pic::{weyl_generators, weyl_group, PicClass, WeylElement, WeylGroup, DEFAULT_ELEMENT_CAP};
use crate::series_algebra::{GradedTruncation, Grading};

/// Orbit data of one standard set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub name: String,
    pub set: DisjointExceptionalSet,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
}

/// `S_k = {E_{k+1}, .., E_r}` for `k = 0..=r`, then `T = {H - E_1 - E_2, E_3, .., E_r}`
/// when `r >= 2`.
pub fn standard_sets(r: usize) -> Result<Vec<(String, DisjointExceptionalSet)>> {
    let mut out = Vec::new();
    for k in 0..=r {
        let classes = (k + 1..=r).map(|j| PicClass::exceptional(r, j)).collect();
        out.push((format!("S{k}"), DisjointExceptionalSet::new(r, classes)?));
    }
    if r >= 2 {
        let mut line = vec![0; r + 1];
        line[0] = 1;
        line[1] = 1;
        line[2] = 1;
        let mut classes = vec![PicClass::from_vec(line)];
        classes.extend((3..=r).map(|j| PicClass::exceptional(r, j)));
        out.push(("T".to_string(), DisjointExceptionalSet::new(r, classes)?));
    }
    Ok(out)
}

fn image(phi: &WeylElement, s: &DisjointExceptionalSet) -> Vec<PicClass> {
    let mut v: Vec<PicClass> = s.classes().iter().map(|c| phi.apply(c)).collect();
    v.sort();
    v
}

fn group_for(r: usize) -> Result<WeylGroup> {
    if !(1..=5).contains(&r) {
        return invalid(format!("orbit computations need 1 <= r <= 5, got {r}"));
    }
    weyl_group(r, DEFAULT_ELEMENT_CAP)
}

fn stabilizer_order(group: &WeylGroup, s: &DisjointExceptionalSet) -> usize {
    group.elements().iter().filter(|phi| image(phi, s) == s.classes()).count()
}

/// Orbits of the standard sets. Checks orbit-stabilizer, that the orbits
/// partition all disjoint sets, and that each orbit has one blow-down type.
pub fn orbit_classification(r: usize) -> Result<Vec<OrbitSummary>> {
    let group = group_for(r)?;
    let x = DelPezzo::new(r)?;
    let all = disjoint_exceptional_sets(r, x.minus_one_classes(), false)?;
    let mut seen: BTreeSet<Vec<PicClass>> = BTreeSet::new();
    let mut out = Vec::new();
    for (name, s) in standard_sets(r)? {
        let orbit: BTreeSet<Vec<PicClass>> = group.elements().iter().map(|phi| image(phi, &s)).collect();
        let stab = stabilizer_order(&group, &s);
        if orbit.len() * stab != group.order() {
            return Err(Error::Inconsistent(format!("orbit-stabilizer fails for {name}")));
        }
        for member in &orbit {
            let m = DisjointExceptionalSet::new(r, member.clone())?;
            if m.blowdown() != s.blowdown() {
                return Err(Error::Inconsistent(format!("orbit of {name} mixes blow-down types")));
            }
            if !seen.insert(member.clone()) {
                return Err(Error::Inconsistent(format!("orbit of {name} meets another standard orbit")));
            }
        }
        out.push(OrbitSummary { name, set: s, orbit_size: orbit.len(), stabilizer_order: stab });
    }
    if seen.len() != all.len() || all.iter().any(|s| !seen.contains(s.classes())) {
        return Err(Error::Inconsistent("standard orbits do not cover every disjoint set".into()));
    }
    Ok(out)
}

fn pad(t: &GradedTruncation, grading: &Grading) -> Result<GradedTruncation> {
    let n = grading.rank();
    t.map_points(
        |p| {
            let mut q = p.to_vec();
            q.resize(n, 0);
            q
        },
        grading.clone(),
    )
}

/// `(1/|Phi_S|) sum_{phi in Phi} phi(term)`.
fn orbit_sum(group: &WeylGroup, term: &GradedTruncation, stab: usize) -> Result<GradedTruncation> {
    let grading = term.grading().clone();
    let bound = term.bound();
    let total = group
        .elements()
        .par_iter()
        .fold(
            || GradedTruncation::new(grading.clone(), bound),
            |mut acc, phi| {
                for (p, c) in term.iter() {
                    acc.add_unchecked(phi.apply_coeffs(p), c.clone());
                }
                acc
            },
        )
        .reduce(|| GradedTruncation::new(grading.clone(), bound), |a, b| a.add(&b).expect("same grading"));
    total.div_exact(&BigInt::from(stab))
}

/// The Euler-Chow series as orbit sums of the standard terms over the Weyl
/// group, each divided by its stabilizer order. The grading must be
/// Weyl-invariant, which holds for the (-K)-degree.
pub fn weyl_orbit_form(r: usize, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
    let group = group_for(r)?;
    if grading.rank() != r + 1 {
        return invalid("grading rank mismatch");
    }
    for phi in weyl_generators(r) {
        let moved: Vec<i64> =
            (0..=r).map(|j| (0..=r).map(|i| grading.weights()[i] * phi.matrix()[i][j]).sum()).collect();
        if moved != grading.weights() {
            return invalid("grading is not Weyl-invariant");
        }
    }
    let mut total = GradedTruncation::new(grading.clone(), bound);
    for (name, s) in standard_sets(r)? {
        let mut term = if name == "T" {
            let mut a = vec![0; r + 1];
            a[0] = 1;
            a[1] = 1;
            let mut b = vec![0; r + 1];
            b[0] = 1;
            b[2] = 1;
            let mut q = GradedTruncation::new(grading.clone(), bound);
            q.add_at(vec![0; r + 1], BigInt::from(1))?;
            for v in [&a, &a, &b, &b] {
                q = q.mul_geometric(v)?;
            }
            q
        } else {
            let k = r - s.len();
            let sub = DelPezzo::new(k)?;
            let g = Grading::new(grading.weights()[..=k].to_vec());
            pad(&sub.weighted_nef_series_n(&g, bound)?, grading)?
        };
        for i in s.classes() {
            term = term.shift(i.coeffs())?.mul_geometric(i.coeffs())?;
        }
        let stab = stabilizer_order(&group, &s);
        total = total.add(&orbit_sum(&group, &term, stab)?)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delpezzo::Blowdown;

    #[test]
    fn orbits_on_three_points() {
        let orbits = orbit_classification(3).unwrap();
        let s2 = orbits.iter().find(|o| o.name == "S2").unwrap();
        assert_eq!(s2.orbit_size * s2.stabilizer_order, 12);
        assert_eq!(s2.orbit_size, 6);
        let t = orbits.iter().find(|o| o.name == "T").unwrap();
        assert_eq!(t.set.blowdown(), Blowdown::Quadric);
        let x = DelPezzo::new(3).unwrap();
        let quadric = disjoint_exceptional_sets(3, x.minus_one_classes(), false)
            .unwrap()
            .iter()
            .filter(|s| s.blowdown() == Blowdown::Quadric)
            .count();
        assert_eq!(t.orbit_size, quadric);
    }

    #[test]
    fn orbit_form_matches_direct_sum() {
        for r in 1..=3 {
            let x = DelPezzo::new(r).unwrap();
            let g = x.anticanonical_grading();
            assert_eq!(weyl_orbit_form(r, &g, 6).unwrap(), x.euler_chow(&g, 6, false).unwrap(), "r = {r}");
        }
    }
}
