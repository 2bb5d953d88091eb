//! Del Pezzo surfaces `P_r`: the plane blown up in `r <= 8` general points.
//!
//! Classes are written `dH - sum m_i E_i` with coefficients `[d, m_1, .., m_r]`.

mod exceptional;
mod explorer;
mod orbits;
mod series;

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cone_engine::{dual_extreme_rays, RationalCone};
use crate::error::{invalid, Error, Result};
use crate::lattice_pic::PicClass;
use crate::series_algebra::Grading;

pub use exceptional::{
    degree_bound, disjoint_exceptional_sets, minus_one_classes, orthogonal_lattice, Blowdown, DisjointExceptionalSet,
};
pub use explorer::{minus_one_explorer_r9, ExplorerEntry};
pub use orbits::{orbit_classification, standard_sets, weyl_orbit_form, OrbitSummary};
pub use series::{closed_form_nef_series, riemann_roch_operator, riemann_roch_polynomial, to_exponent_coords};

/// Extreme rays and facet normals of the nef cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NefConeDescription {
    pub rays: Vec<PicClass>,
    pub facets: Vec<PicClass>,
}

impl NefConeDescription {
    pub fn to_json(&self) -> Value {
        let v = |c: &[PicClass]| c.iter().map(|x| crate::json::vector(x.coeffs())).collect::<Vec<_>>();
        json!({ "rays": v(&self.rays), "facets": v(&self.facets) })
    }
}

/// Nef part and fixed components of an effective class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub nef: PicClass,
    pub fixed: Vec<(PicClass, i64)>,
}

/// A Del Pezzo surface with its (-1)-classes; the nef cone is computed on
/// first use.
#[derive(Debug)]
pub struct DelPezzo {
    r: usize,
    minus_one: Vec<PicClass>,
    effective: Vec<PicClass>,
    nef: OnceLock<NefConeDescription>,
}

/// The generators of the effective cone.
pub fn effective_generators(r: usize) -> Result<Vec<PicClass>> {
    match r {
        0 => Ok(vec![PicClass::hyperplane(0)]),
        1 => Ok(vec![PicClass::exceptional(1, 1), PicClass::from_vec(vec![1, 1])]),
        2..=8 => minus_one_classes(r, None),
        _ => invalid(format!("r = {r} is outside 0..=8")),
    }
}

/// The nef cone as the dual of the effective cone.
pub fn nef_cone(r: usize) -> Result<NefConeDescription> {
    Ok(DelPezzo::new(r)?.nef_cone().clone())
}

/// `D . G` as the standard dot product of `J G` with the coefficients of `D`.
fn pairing_row(g: &PicClass) -> Vec<i64> {
    let c = g.coeffs();
    std::iter::once(c[0]).chain(c[1..].iter().map(|m| -m)).collect()
}

impl DelPezzo {
    pub fn new(r: usize) -> Result<Self> {
        let effective = effective_generators(r)?;
        let minus_one = if r == 0 { Vec::new() } else { minus_one_classes(r, None)? };
        Ok(Self { r, minus_one, effective, nef: OnceLock::new() })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn minus_one_classes(&self) -> &[PicClass] {
        &self.minus_one
    }

    pub fn effective_generators(&self) -> &[PicClass] {
        &self.effective
    }

    /// The (-K)-degree grading.
    pub fn anticanonical_grading(&self) -> Grading {
        anticanonical_grading(self.r)
    }

    pub fn nef_cone(&self) -> &NefConeDescription {
        self.nef.get_or_init(|| {
            let rows: Vec<Vec<i64>> = self.effective.iter().map(pairing_row).collect();
            let mut rays: Vec<PicClass> = dual_extreme_rays(&rows)
                .expect("effective generators span the lattice")
                .into_iter()
                .map(PicClass::from_vec)
                .collect();
            rays.sort();
            NefConeDescription { rays, facets: self.effective.clone() }
        })
    }

    /// The nef cone as a cone in coefficient space.
    pub fn nef_rational_cone(&self) -> RationalCone {
        let gens = self.nef_cone().rays.iter().map(|c| c.coeffs().to_vec()).collect();
        RationalCone::new(self.r + 1, gens).expect("nef cone is pointed")
    }

    fn check(&self, d: &PicClass) -> Result<()> {
        if d.r() != self.r {
            return invalid(format!("{d} does not live on P_{}", self.r));
        }
        Ok(())
    }

    /// `D . G >= 0` for every effective generator.
    pub fn is_nef(&self, d: &PicClass) -> bool {
        d.r() == self.r && self.effective.iter().all(|g| d.dot(g) >= 0)
    }

    /// `D . N >= 0` for every nef ray.
    pub fn is_effective(&self, d: &PicClass) -> bool {
        d.r() == self.r && self.nef_cone().rays.iter().all(|n| d.dot(n) >= 0)
    }

    /// Zariski-type decomposition `D = A + sum m_I I` with `A` nef.
    pub fn decompose(&self, d: &PicClass) -> Result<Decomposition> {
        self.check(d)?;
        if !self.is_effective(d) {
            return invalid(format!("{d} is not effective"));
        }
        let fixed: Vec<(PicClass, i64)> = self
            .minus_one
            .iter()
            .filter_map(|i| {
                let p = d.dot(i);
                (p < 0).then(|| (i.clone(), -p))
            })
            .collect();
        let mut a = d.clone();
        for (i, m) in &fixed {
            a = a.sub(&i.scale(*m));
        }
        let fail = |why: String| Err(Error::Inconsistent(format!("decomposition of {d} failed: {why}")));
        if !self.is_nef(&a) {
            return fail(format!("{a} is not nef"));
        }
        for (k, (i, _)) in fixed.iter().enumerate() {
            if a.dot(i) != 0 {
                return fail(format!("{a} meets {i}"));
            }
            if fixed[k + 1..].iter().any(|(j, _)| i.dot(j) != 0) {
                return fail(format!("fixed component {i} meets another"));
            }
        }
        Ok(Decomposition { nef: a, fixed })
    }

    /// `h^0(D)`: 0 off the effective cone, otherwise Riemann-Roch on the nef part.
    pub fn h0(&self, d: &PicClass) -> Result<i64> {
        self.check(d)?;
        if !self.is_effective(d) {
            return Ok(0);
        }
        Ok(riemann_roch(&self.decompose(d)?.nef))
    }

    pub fn grading_is_positive(&self, grading: &Grading) -> Result<()> {
        if grading.rank() != self.r + 1 {
            return invalid("grading rank mismatch");
        }
        if let Some(g) = self.effective.iter().find(|g| grading.eval(g.coeffs()) <= 0) {
            return invalid(format!("grading is not positive on effective generator {g}"));
        }
        Ok(())
    }
}

/// `(A - K) A / 2 + 1`.
pub fn riemann_roch(a: &PicClass) -> i64 {
    (a.square() + a.anticanonical_degree()) / 2 + 1
}

/// The (-K)-degree grading `3d - sum m_i`.
pub fn anticanonical_grading(r: usize) -> Grading {
    let mut w = vec![-1; r + 1];
    w[0] = 3;
    Grading::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> PicClass {
        PicClass::new(v.to_vec()).unwrap()
    }

    #[test]
    fn effective_generators_small() {
        assert_eq!(effective_generators(0).unwrap(), vec![cls(&[1])]);
        assert_eq!(effective_generators(1).unwrap(), vec![cls(&[0, -1]), cls(&[1, 1])]);
        assert_eq!(effective_generators(3).unwrap().len(), 6);
    }

    #[test]
    fn nef_rays_low_rank() {
        assert_eq!(nef_cone(1).unwrap().rays, vec![cls(&[1, 0]), cls(&[1, 1])]);
        assert_eq!(nef_cone(2).unwrap().rays, vec![cls(&[1, 0, 0]), cls(&[1, 0, 1]), cls(&[1, 1, 0])]);
        let r3 = nef_cone(3).unwrap().rays;
        assert_eq!(
            r3,
            vec![cls(&[1, 0, 0, 0]), cls(&[1, 0, 0, 1]), cls(&[1, 0, 1, 0]), cls(&[1, 1, 0, 0]), cls(&[2, 1, 1, 1])]
        );
    }

    #[test]
    fn nef_and_effective() {
        let x4 = DelPezzo::new(4).unwrap();
        assert!(x4.is_nef(&PicClass::anticanonical(4)));
        let x1 = DelPezzo::new(1).unwrap();
        assert!(!x1.is_effective(&cls(&[2, 3])));
        let x2 = DelPezzo::new(2).unwrap();
        assert!(x2.is_nef(&cls(&[2, 2, 0])));
    }

    #[test]
    fn decompositions() {
        let x1 = DelPezzo::new(1).unwrap();
        let d = x1.decompose(&cls(&[1, -2])).unwrap();
        assert_eq!(d.nef, cls(&[1, 0]));
        assert_eq!(d.fixed, vec![(cls(&[0, -1]), 2)]);
        assert_eq!(x1.h0(&cls(&[1, -2])).unwrap(), 3);
        let x2 = DelPezzo::new(2).unwrap();
        let d = x2.decompose(&cls(&[3, 3, 0])).unwrap();
        assert!(d.fixed.is_empty());
        assert!(x2.decompose(&cls(&[1, 2, 0])).is_err());
    }

    #[test]
    fn h0_values() {
        let x0 = DelPezzo::new(0).unwrap();
        for d in 0..6 {
            assert_eq!(x0.h0(&cls(&[d])).unwrap(), (d + 1) * (d + 2) / 2);
        }
        assert_eq!(x0.h0(&cls(&[-1])).unwrap(), 0);
        let x3 = DelPezzo::new(3).unwrap();
        assert_eq!(x3.h0(&PicClass::anticanonical(3)).unwrap(), 7);
        assert_eq!(x3.h0(&PicClass::zero(3)).unwrap(), 1);
    }
}
