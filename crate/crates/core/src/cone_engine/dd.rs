//! Double description: extreme rays of `{y : a . y >= 0 for every row a}`.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{invalid, Result};
use crate::linalg::{independent_subset, inverse, primitive_from_rational};

#[derive(Clone)]
struct Ray {
    v: Vec<i64>,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn is_subset(small: &[u64], big: &[u64]) -> bool {
    small.iter().zip(big).all(|(s, b)| s & !b == 0)
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|b| b.count_ones() as usize).sum()
}

fn eval(a: &[i64], v: &[i64]) -> i128 {
    a.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn normalize(v: Vec<i128>) -> Vec<i64> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    v.into_iter().map(|x| i64::try_from(if g == 0 { x } else { x / g }).expect("ray entry exceeds i64")).collect()
}

/// Extreme rays of the polyhedral cone cut out by `constraints`, which must
/// span the ambient space so that the cone is pointed. Rays are primitive
/// and returned in sorted order.
pub(crate) fn dual_extreme_rays(constraints: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let Some(n) = constraints.first().map(Vec::len) else {
        return invalid("double description needs at least one constraint");
    };
    let basis = independent_subset(constraints);
    if basis.len() < n {
        return invalid("constraints do not span the ambient space");
    }
    let words = constraints.len().div_ceil(64);
    let a0: Vec<Vec<i64>> = basis.iter().map(|&i| constraints[i].clone()).collect();
    let inv = inverse(&a0).expect("independent rows form a nonsingular matrix");
    let mut rays: Vec<Ray> = (0..n)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|row| row[j].clone()).collect();
            let mut zeros = vec![0u64; words];
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    set_bit(&mut zeros, row);
                }
            }
            Ray { v: primitive_from_rational(&col), zeros }
        })
        .collect();

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    let threshold = n.saturating_sub(2);
    for (idx, a) in constraints.iter().enumerate() {
        if in_basis.contains(&idx) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| eval(a, &r.v)).collect();
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    set_bit(&mut r.zeros, idx);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (r, &s) in rays.iter().zip(&vals) {
            if s > 0 {
                next.push(r.clone());
            } else if s == 0 {
                let mut r = r.clone();
                set_bit(&mut r.zeros, idx);
                next.push(r);
            }
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(x, y)| x & y).collect();
                if popcount(&common) < threshold {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, r)| k == p || k == q || !is_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let combo: Vec<i128> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(&y, &x)| vals[p] * y as i128 - vals[q] * x as i128)
                    .collect();
                let v = normalize(combo);
                if seen.insert(v.clone()) {
                    let mut zeros = common;
                    set_bit(&mut zeros, idx);
                    next.push(Ray { v, zeros });
                }
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<i64>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_is_self_dual() {
        let rays = dual_extreme_rays(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(rays, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn square_pyramid_has_four_facets() {
        let gens = vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, 1]];
        let facets = dual_extreme_rays(&gens).unwrap();
        assert_eq!(facets.len(), 4);
        for f in &facets {
            let zeros = gens.iter().filter(|g| eval(f, g) == 0).count();
            assert_eq!(zeros, 2);
            assert!(gens.iter().all(|g| eval(f, g) >= 0));
        }
    }

    #[test]
    fn line_has_no_pointed_dual_interior() {
        let rays = dual_extreme_rays(&[vec![1], vec![-1]]).unwrap();
        assert!(rays.is_empty());
    }

    #[test]
    fn rank_deficient_constraints_are_rejected() {
        assert!(dual_extreme_rays(&[vec![1, 0], vec![2, 0]]).is_err());
    }
}
