//! Nef-cone series `L`, the weighted series `N = Q(L)`, and the Euler-Chow
//! series as a sum over disjoint sets of (-1)-classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::{disjoint_exceptional_sets, riemann_roch, DelPezzo};
use crate::cone_engine::{
    cone_rational_pieces, expand_sum, half_open_decompose, triangulate, weighted_cone_series, ConeRationalFunction,
    RationalCone,
};
use crate::error::{invalid, Error, Result};
use crate::lattice_pic::PicClass;
use crate::series_algebra::{apply_diff_op, DiffOperator, GradedTruncation, Grading, LaurentPoly, Point, Polynomial};

/// Class coefficients `[d, m_1, ..]` to monomial exponents `[d, -m_1, ..]`
/// in `t_0 = t^H`, `t_i = t^{E_i}`. The map is an involution.
pub fn to_exponent_coords(p: &[i64]) -> Point {
    p.iter().enumerate().map(|(i, &x)| if i == 0 { x } else { -x }).collect()
}

/// `(A - K) A / 2 + 1` as a polynomial in the class coefficients.
pub fn riemann_roch_polynomial(r: usize) -> Polynomial {
    let n = r + 1;
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut p = Polynomial::constant(n, BigRational::one());
    let mut e = vec![0u32; n];
    e[0] = 2;
    p.add_term(e.clone(), q(1, 2));
    e[0] = 1;
    p.add_term(e, q(3, 2));
    for i in 1..n {
        let mut e = vec![0u32; n];
        e[i] = 2;
        p.add_term(e.clone(), q(-1, 2));
        e[i] = 1;
        p.add_term(e, q(-1, 2));
    }
    p
}

/// `Q = (t_0^2 d_0^2 + 4 t_0 d_0 - sum_k t_k^2 d_k^2 + 2) / 2` in exponent
/// coordinates; `Q t^A = ((A - K) A / 2 + 1) t^A`.
pub fn riemann_roch_operator(r: usize) -> DiffOperator {
    let n = r + 1;
    let unit = |i: usize, k: u32| -> Vec<u32> {
        let mut v = vec![0u32; n];
        v[i] = k;
        v
    };
    let mono =
        |ord: &[u32], c: i64| LaurentPoly::monomial(ord.iter().map(|&o| i64::from(o)).collect(), BigInt::from(c));
    let mut terms = vec![(mono(&unit(0, 2), 1), unit(0, 2)), (mono(&unit(0, 1), 4), unit(0, 1))];
    for k in 1..n {
        terms.push((mono(&unit(k, 2), -1), unit(k, 2)));
    }
    terms.push((mono(&vec![0; n], 2), vec![0; n]));
    DiffOperator::new(n, terms, BigInt::from(2)).expect("well-formed operator")
}

fn exponent_grading(g: &Grading) -> Grading {
    Grading::new(to_exponent_coords(g.weights()))
}

/// `t^shift / prod_v (1 - t^v)` truncated, in class coefficients.
fn geometric(grading: &Grading, bound: i64, shift: &[i64], vs: &[Vec<i64>]) -> Result<GradedTruncation> {
    let mut t = GradedTruncation::new(grading.clone(), bound);
    if t.in_range(shift) {
        t.add_at(shift.to_vec(), BigInt::one())?;
    }
    for v in vs {
        t = t.mul_geometric(v)?;
    }
    Ok(t)
}

fn h_minus_e(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r + 1];
    v[0] = 1;
    v[i] = 1;
    v
}

/// The printed closed forms of the nef-cone series for `r = 1..=4`,
/// expanded to `delta <= bound`.
pub fn closed_form_nef_series(r: usize, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
    if grading.rank() != r + 1 {
        return invalid("grading rank mismatch");
    }
    let zero = vec![0; r + 1];
    let h = PicClass::hyperplane(r).into_coeffs();
    let lines: Vec<Vec<i64>> = (1..=r).map(|i| h_minus_e(r, i)).collect();
    let with = |mut extra: Vec<Vec<i64>>, base: &[Vec<i64>]| {
        extra.extend(base.iter().cloned());
        extra
    };
    match r {
        1 | 2 => geometric(grading, bound, &zero, &with(vec![h], &lines)),
        3 => {
            let conic = vec![2, 1, 1, 1];
            let a = geometric(grading, bound, &zero, &with(vec![conic], &lines))?;
            let b = geometric(grading, bound, &zero, &with(vec![h], &lines))?;
            let c = geometric(grading, bound, &zero, &lines)?;
            a.add(&b)?.sub(&c)
        }
        4 => {
            let ak = PicClass::anticanonical(4).into_coeffs();
            let akh = vec![2, 1, 1, 1, 1];
            let subsets = |k: usize| -> Vec<Vec<Vec<i64>>> {
                crate::cone_engine::combinations(4, k)
                    .into_iter()
                    .map(|s| s.into_iter().map(|i| lines[i].clone()).collect())
                    .collect()
            };
            // (1/(1 - t0) + t^{-K}/(1 - t^{-K})) e4
            let mut total = geometric(grading, bound, &zero, &with(vec![h.clone()], &lines))?;
            total = total.add(&geometric(grading, bound, &ak, &with(vec![ak.clone()], &lines))?)?;
            // t^{-K-H} (e3 - e2 + e1 - e0) / ((1 - t^{-K})(1 - t^{-K-H}))
            for k in 0..=3 {
                for s in subsets(k) {
                    let term = geometric(grading, bound, &akh, &with(vec![ak.clone(), akh.clone()], &s))?;
                    total = if k % 2 == 1 { total.add(&term)? } else { total.sub(&term)? };
                }
            }
            // sum_i t^{-K-H+E_i} / ((1 - t^{-K-H})(1 - t^{-K-H+E_i})) prod_{j != i} x_j
            for i in 1..=4 {
                let mut shift = akh.clone();
                shift[i] = 0;
                let others: Vec<Vec<i64>> = (1..=4).filter(|&j| j != i).map(|j| lines[j - 1].clone()).collect();
                let term = geometric(grading, bound, &shift, &with(vec![akh.clone(), shift.clone()], &others))?;
                total = total.add(&term)?;
            }
            Ok(total)
        }
        _ => invalid(format!("no closed form for r = {r}")),
    }
}

impl DelPezzo {
    /// Rational generating function of the nef lattice points.
    pub fn nef_series_rational(&self) -> Result<Vec<ConeRationalFunction>> {
        cone_rational_pieces(&self.nef_rational_cone())
    }

    /// `L = sum_{A nef} t^A` truncated.
    pub fn nef_series_l(&self, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
        self.grading_is_positive(grading)?;
        expand_sum(&self.nef_series_rational()?, grading, bound)
    }

    /// `N = Q(L)`, checked point by point against Riemann-Roch.
    pub fn weighted_nef_series_n(&self, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
        let l = self.nef_series_l(grading, bound)?;
        let eg = exponent_grading(grading);
        let lt = l.map_points(to_exponent_coords, eg)?;
        let nt = apply_diff_op(&riemann_roch_operator(self.r()), &lt)?;
        let n = nt.map_points(to_exponent_coords, grading.clone())?;
        if n.len() != l.len() {
            return Err(Error::Inconsistent("Q(L) and L have different supports".into()));
        }
        for (p, c) in n.iter() {
            let expect = riemann_roch(&PicClass::from_vec(p.clone()));
            if l.get(p) != BigInt::one() || *c != BigInt::from(expect) {
                return Err(Error::Inconsistent(format!("Q(L) at {p:?} is {c}, Riemann-Roch gives {expect}")));
            }
        }
        Ok(n)
    }

    fn check_euler_chow_scope(&self, allow_large: bool) -> Result<()> {
        if self.r() > 4 && !allow_large {
            return Err(Error::Infeasible(format!("euler_chow for r = {} needs allow_large", self.r())));
        }
        Ok(())
    }

    /// The Euler-Chow series: a sum over disjoint sets `S` of (-1)-classes of
    /// `prod_{I in S} t^I/(1 - t^I)` times `N` restricted to `S^perp`.
    pub fn euler_chow(&self, grading: &Grading, bound: i64, allow_large: bool) -> Result<GradedTruncation> {
        self.check_euler_chow_scope(allow_large)?;
        let n = self.weighted_nef_series_n(grading, bound)?;
        let sets = disjoint_exceptional_sets(self.r(), self.minus_one_classes(), allow_large)?;
        let terms: Vec<GradedTruncation> = sets
            .par_iter()
            .map(|s| {
                let mut term = n.filter(|p| s.is_orthogonal_to(&PicClass::from_vec(p.to_vec())));
                for i in s.classes() {
                    term = term.shift(i.coeffs())?.mul_geometric(i.coeffs())?;
                }
                Ok(term)
            })
            .collect::<Result<_>>()?;
        let mut total = GradedTruncation::new(grading.clone(), bound);
        for t in &terms {
            total = total.add(t)?;
        }
        Ok(total)
    }

    /// The Euler-Chow series as a sum of rational functions, one group per
    /// disjoint set, with Riemann-Roch weighted face series.
    pub fn euler_chow_rational(&self, allow_large: bool) -> Result<Vec<ConeRationalFunction>> {
        self.check_euler_chow_scope(allow_large)?;
        let rr = riemann_roch_polynomial(self.r());
        let rank = self.r() + 1;
        let sets = disjoint_exceptional_sets(self.r(), self.minus_one_classes(), allow_large)?;
        let rays = &self.nef_cone().rays;
        let parts: Vec<Vec<ConeRationalFunction>> = sets
            .par_iter()
            .map(|s| {
                let face: Vec<Point> =
                    rays.iter().filter(|n| s.is_orthogonal_to(n)).map(|n| n.coeffs().to_vec()).collect();
                let mut pieces = if face.is_empty() {
                    vec![ConeRationalFunction::new(LaurentPoly::one(rank), Vec::new())]
                } else {
                    let cone = RationalCone::new(rank, face)?;
                    half_open_decompose(&triangulate(&cone)?)?
                        .iter()
                        .map(|h| weighted_cone_series(h, &rr))
                        .collect::<Result<Vec<_>>>()?
                };
                for i in s.classes() {
                    pieces = pieces.iter().map(|p| p.times_shifted_geometric(i.coeffs())).collect();
                }
                Ok(pieces)
            })
            .collect::<Result<_>>()?;
        Ok(parts.into_iter().flatten().collect())
    }

    /// Brute force: `h^0(D)` summed over every class in the graded window.
    pub fn euler_chow_oracle(&self, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
        if self.r() > 6 {
            return invalid("the brute-force oracle is limited to r <= 6");
        }
        self.grading_is_positive(grading)?;
        let n = self.r() + 1;
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for g in self.effective_generators() {
            let dg = grading.eval(g.coeffs());
            for k in 0..n {
                let scaled = bound * g.coeffs()[k];
                lo[k] = lo[k].min(scaled.div_euclid(dg));
                hi[k] = hi[k].max(-((-scaled).div_euclid(dg)));
            }
        }
        let w = grading.weights();
        let mut out = GradedTruncation::new(grading.clone(), bound);
        let mut x = lo.clone();
        loop {
            // Solve the last coordinate from 0 <= delta <= bound when possible.
            let partial: i64 = (0..n - 1).map(|k| w[k] * x[k]).sum();
            let (a, b) = if w[n - 1] > 0 {
                ((-partial).div_euclid(w[n - 1]) - 1, (bound - partial).div_euclid(w[n - 1]) + 1)
            } else if w[n - 1] < 0 {
                let v = -w[n - 1];
                ((partial - bound).div_euclid(v) - 1, partial.div_euclid(v) + 1)
            } else {
                (lo[n - 1], hi[n - 1])
            };
            for last in a.max(lo[n - 1])..=b.min(hi[n - 1]) {
                x[n - 1] = last;
                if !(0..=bound).contains(&grading.eval(&x)) {
                    continue;
                }
                let d = PicClass::from_vec(x.clone());
                let h = self.h0(&d)?;
                if h != 0 {
                    out.add_at(x.clone(), BigInt::from(h))?;
                }
            }
            let mut k = n - 1;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                x[k] += 1;
                if x[k] <= hi[k] {
                    break;
                }
                x[k] = lo[k];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::anticanonical_grading;
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn rr_polynomial_and_operator_agree() {
        let p = riemann_roch_polynomial(3);
        for c in [[0, 0, 0, 0], [1, 0, 0, 0], [3, 1, 1, 1], [2, -1, 0, 1], [5, 2, 2, 0]] {
            let rr = riemann_roch(&PicClass::from_vec(c.to_vec()));
            assert_eq!(p.eval_integer(&c).unwrap(), big(rr));
        }
        let g = anticanonical_grading(3);
        let mut t = GradedTruncation::new(g.clone(), 9);
        t.add_at(vec![3, 1, 1, 1], big(1)).unwrap();
        let tt = t.map_points(to_exponent_coords, exponent_grading(&g)).unwrap();
        let out = apply_diff_op(&riemann_roch_operator(3), &tt).unwrap();
        assert_eq!(out.get(&[3, -1, -1, -1]), big(7));
    }

    #[test]
    fn n_small_values() {
        let x = DelPezzo::new(3).unwrap();
        let g = x.anticanonical_grading();
        let n = x.weighted_nef_series_n(&g, 6).unwrap();
        assert_eq!(n.get(&[0, 0, 0, 0]), big(1));
        assert_eq!(n.get(&[1, 0, 0, 0]), big(3));
        assert_eq!(n.get(&[3, 1, 1, 1]), big(7));
    }

    #[test]
    fn closed_forms_low_rank() {
        for r in 1..=3 {
            let x = DelPezzo::new(r).unwrap();
            let g = x.anticanonical_grading();
            assert_eq!(closed_form_nef_series(r, &g, 7).unwrap(), x.nef_series_l(&g, 7).unwrap(), "r = {r}");
        }
    }

    #[test]
    fn euler_chow_small() {
        let x = DelPezzo::new(2).unwrap();
        let g = x.anticanonical_grading();
        let f = x.euler_chow(&g, 6, false).unwrap();
        assert_eq!(f.get(&[1, 0, 0]), big(3));
        assert_eq!(f.get(&[0, -1, 0]), big(1));
        assert_eq!(f, x.euler_chow_oracle(&g, 6).unwrap());
        assert_eq!(f, expand_sum(&x.euler_chow_rational(false).unwrap(), &g, 6).unwrap());
    }

    #[test]
    fn oracle_on_plane_and_one_point() {
        let x = DelPezzo::new(0).unwrap();
        let f = x.euler_chow_oracle(&x.anticanonical_grading(), 9).unwrap();
        for d in 0..=3 {
            assert_eq!(f.get(&[d]), big((d + 1) * (d + 2) / 2));
        }
        let x = DelPezzo::new(1).unwrap();
        assert_eq!(x.euler_chow_oracle(&x.anticanonical_grading(), 4).unwrap().get(&[1, 1]), big(2));
        let x = DelPezzo::new(2).unwrap();
        assert_eq!(x.euler_chow_oracle(&x.anticanonical_grading(), 6).unwrap().get(&[2, 2, 0]), big(3));
    }
}
