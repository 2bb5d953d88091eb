//! Rational generating functions of polynomial-weighted cones.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{fundamental_domain, ConeRationalFunction, HalfOpenSimplicialCone};
use crate::error::Result;
use crate::series_algebra::{LaurentPoly, Point, Polynomial};

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// All multi-indices in `{0, ..., top}^m`.
fn grid(m: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=top).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// `sum_{x in c} P(x) t^x` as a single rational function.
///
/// Along `x = w + sum k_l v_l` the weight is a polynomial in `k` of degree
/// at most `deg P`; its Newton expansion `sum_j Delta^j P(w) prod_l C(k_l, j_l)`
/// has integer coefficients, and `sum_k C(k, j) x^k = x^j / (1 - x)^(j+1)`.
/// Everything is put over the common denominator `prod_l (1 - t^v_l)^(deg+1)`.
pub fn weighted_cone_series(c: &HalfOpenSimplicialCone, weight: &Polynomial) -> Result<ConeRationalFunction> {
    let rank = c.rank();
    let gens = c.generators();
    let m = gens.len();
    let deg = weight.degree();
    let shift_of = |w: &[i64], idx: &[u32]| -> Point {
        (0..rank).map(|k| w[k] + idx.iter().zip(gens).map(|(&i, v)| i64::from(i) * v[k]).sum::<i64>()).collect()
    };
    let powers: Vec<Vec<LaurentPoly>> = gens
        .iter()
        .map(|v| {
            let base = LaurentPoly::one_minus(v);
            let mut p = vec![LaurentPoly::one(rank)];
            for _ in 0..deg {
                let next = p.last().unwrap().mul(&base);
                p.push(next);
            }
            p
        })
        .collect();
    let indices = grid(m, deg);
    let mut numerator = LaurentPoly::zero(rank);
    for w in fundamental_domain(c) {
        let values: Vec<BigInt> =
            indices.iter().map(|i| weight.eval_integer(&shift_of(&w, i))).collect::<Result<_>>()?;
        for j in indices.iter().filter(|j| j.iter().sum::<u32>() <= deg) {
            let mut diff = BigInt::zero();
            for (i, val) in indices.iter().zip(&values) {
                if i.iter().zip(j).any(|(a, b)| a > b) {
                    continue;
                }
                let mut term = val.clone();
                for (&a, &b) in i.iter().zip(j) {
                    term *= binomial(b, a);
                }
                let parity: u32 = j.iter().sum::<u32>() - i.iter().sum::<u32>();
                if parity % 2 == 1 {
                    diff -= term;
                } else {
                    diff += term;
                }
            }
            if diff.is_zero() {
                continue;
            }
            let mut piece = LaurentPoly::monomial(shift_of(&w, j), diff);
            for (l, &jl) in j.iter().enumerate() {
                piece = piece.mul(&powers[l][(deg - jl) as usize]);
            }
            numerator = numerator.add(&piece);
        }
    }
    let denominator = gens.iter().flat_map(|v| std::iter::repeat_n(v.clone(), deg as usize + 1)).collect();
    Ok(ConeRationalFunction::new(numerator, denominator))
}
