//! A general quartic K3 surface blown up at a general point.
//!
//! `C` is the strict transform of the hyperplane section singular at the
//! point and `E` the exceptional curve: `C^2 = 0`, `E^2 = -1`, `C.E = 2`,
//! and `K = E`. The effective cone is spanned by `C` and `E`; classes
//! `aC + bE` are written `(a, b)` and graded by `a + b`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::cone_engine::{expand_sum, weighted_cone_series, ConeRationalFunction, HalfOpenSimplicialCone};
use crate::error::{invalid, Result};
use crate::series_algebra::{GradedTruncation, Grading, LaurentPoly, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct K3Class {
    pub a: i64,
    pub b: i64,
}

impl K3Class {
    pub fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn canonical() -> Self {
        Self { a: 0, b: 1 }
    }

    pub fn dot(&self, o: &K3Class) -> i64 {
        2 * (self.a * o.b + self.b * o.a) - self.b * o.b
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }
}

/// `h^0(aC + bE)` for `a, b >= 0`.
pub fn h0_k3(a: i64, b: i64) -> Result<i64> {
    if a < 0 || b < 0 {
        return invalid(format!("({a}, {b}) has a negative coefficient"));
    }
    Ok(if a == 0 || b == 0 {
        1
    } else if b >= 2 * a {
        2 * a * a + 2
    } else {
        2 * a * b - a - b * (b - 1) / 2 + 2
    })
}

pub fn k3_grading() -> Grading {
    Grading::new(vec![1, 1])
}

/// Coefficients `h^0(aC + bE)` on `a + b <= bound`.
pub fn euler_chow_k3(bound: i64) -> Result<GradedTruncation> {
    if bound < 0 {
        return invalid("bound must be nonnegative");
    }
    let mut out = GradedTruncation::new(k3_grading(), bound);
    for s in 0..=bound {
        for a in 0..=s {
            out.add_at(vec![a, s - a], BigInt::from(h0_k3(a, s - a)?))?;
        }
    }
    Ok(out)
}

fn poly(terms: &[(u32, u32, i64, i64)]) -> Polynomial {
    let mut p = Polynomial::zero(2);
    for &(i, j, num, den) in terms {
        p.add_term(vec![i, j], BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
    p
}

fn cone(gens: &[[i64; 2]], open: &[bool]) -> HalfOpenSimplicialCone {
    HalfOpenSimplicialCone::new(2, gens.iter().map(|g| g.to_vec()).collect(), open.to_vec())
        .expect("independent generators")
}

/// The series as a sum of rational functions over four regions:
/// `b = 0`; `a = 0 < b`; `b >= 2a > 0`; `2a > b > 0`. The last is the closed
/// cone on `(1, 0), (1, 2)` minus its two boundary rays plus the origin.
pub fn euler_chow_k3_rational() -> Result<Vec<ConeRationalFunction>> {
    let one = poly(&[(0, 0, 1, 1)]);
    // 2a^2 + 2
    let steep = poly(&[(2, 0, 2, 1), (0, 0, 2, 1)]);
    // 2ab - a - b(b-1)/2 + 2
    let shallow = poly(&[(1, 1, 2, 1), (1, 0, -1, 1), (0, 2, -1, 2), (0, 1, 1, 2), (0, 0, 2, 1)]);
    let mut parts = vec![
        weighted_cone_series(&cone(&[[1, 0]], &[false]), &one)?,
        weighted_cone_series(&cone(&[[0, 1]], &[true]), &one)?,
        weighted_cone_series(&cone(&[[1, 2], [0, 1]], &[true, false]), &steep)?,
        weighted_cone_series(&cone(&[[1, 0], [1, 2]], &[false, false]), &shallow)?,
        weighted_cone_series(&cone(&[[1, 0]], &[false]), &shallow)?.neg(),
        weighted_cone_series(&cone(&[[1, 2]], &[false]), &shallow)?.neg(),
    ];
    parts.push(ConeRationalFunction::new(LaurentPoly::monomial(vec![0, 0], BigInt::from(2)), Vec::new()));
    Ok(parts)
}

/// Whether every denominator factor is one of `1 - t^v` for
/// `v in {(1,0), (0,1), (1,2), (2,1)}`.
pub fn denominators_are_expected(parts: &[ConeRationalFunction]) -> bool {
    let allowed = [vec![1, 0], vec![0, 1], vec![1, 2], vec![2, 1]];
    parts.iter().all(|p| p.denominator().iter().all(|v| allowed.contains(v)))
}

/// Expansion of [`euler_chow_k3_rational`].
pub fn euler_chow_k3_expanded(bound: i64) -> Result<GradedTruncation> {
    expand_sum(&euler_chow_k3_rational()?, &k3_grading(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing() {
        let c = K3Class::new(1, 0);
        let e = K3Class::new(0, 1);
        assert_eq!((c.square(), e.square(), c.dot(&e)), (0, -1, 2));
        assert_eq!(K3Class::canonical(), e);
    }

    #[test]
    fn h0_values() {
        assert_eq!(h0_k3(7, 0).unwrap(), 1);
        assert_eq!(h0_k3(1, 5).unwrap(), 4);
        assert_eq!(h0_k3(3, 2).unwrap(), 10);
        assert_eq!(h0_k3(2, 4).unwrap(), 10);
        assert_eq!(h0_k3(10, 7).unwrap(), 111);
        assert!(h0_k3(-1, 0).is_err());
    }

    #[test]
    fn rational_form_expands_to_h0() {
        let parts = euler_chow_k3_rational().unwrap();
        assert!(denominators_are_expected(&parts));
        assert_eq!(euler_chow_k3_expanded(12).unwrap(), euler_chow_k3(12).unwrap());
    }
}
