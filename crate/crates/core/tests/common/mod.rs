#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chowforge::cone_engine::RationalCone;

/// Solves `sum l_i g_i = x` exactly; `None` when inconsistent. The
/// generators must be linearly independent.
fn solve(gens: &[&Vec<i64>], x: &[i64]) -> Option<Vec<BigRational>> {
    let n = x.len();
    let k = gens.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            let mut v: Vec<BigRational> =
                gens.iter().map(|g| BigRational::from_integer(BigInt::from(g[row]))).collect();
            v.push(BigRational::from_integer(BigInt::from(x[row])));
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row_r = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&row_r) {
                    *a = &*a - &f * b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != k {
        return None;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn rank_of(vs: &[&Vec<i64>]) -> usize {
    let zero = vec![0; vs.first().map_or(0, |v| v.len())];
    (0..=vs.len())
        .rev()
        .find(|&k| {
            subsets(vs.len(), k).iter().any(|s| {
                let sel: Vec<&Vec<i64>> = s.iter().map(|&i| vs[i]).collect();
                solve(&sel, &zero).is_some()
            })
        })
        .unwrap_or(0)
}

/// Cone membership by Caratheodory: `x` lies in the cone iff it is a
/// nonnegative combination of some linearly independent subset.
pub fn in_cone(gens: &[Vec<i64>], x: &[i64]) -> bool {
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    let refs: Vec<&Vec<i64>> = gens.iter().collect();
    for k in 1..=gens.len().min(x.len()) {
        for s in subsets(gens.len(), k) {
            let sel: Vec<&Vec<i64>> = s.iter().map(|&i| refs[i]).collect();
            if let Some(l) = solve(&sel, x) {
                if l.iter().all(|v| !v.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// Every integer point `x` with `0 <= grading . x <= bound` inside the box
/// spanned by the slice vertices `bound g / (grading . g)`.
pub fn window_points(gens: &[Vec<i64>], grading: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let n = grading.len();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for g in gens {
        let s: i64 = g.iter().zip(grading).map(|(a, b)| a * b).sum();
        assert!(s > 0, "grading must be positive on generators");
        for k in 0..n {
            lo[k] = lo[k].min((bound * g[k]).div_euclid(s));
            hi[k] = hi[k].max(-(-(bound * g[k])).div_euclid(s));
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let d: i64 = x.iter().zip(grading).map(|(a, b)| a * b).sum();
        if (0..=bound).contains(&d) {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            x[k] += 1;
            if x[k] <= hi[k] {
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

/// A seeded stream of pointed cones of rank `1..=4` with entries in `-5..=5`.
pub fn random_cones(count: usize, seed: u64) -> Vec<RationalCone> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let rank = rng.gen_range(1..=4);
        let ngens = rng.gen_range(1..=rank + 2);
        let gens: Vec<Vec<i64>> = (0..ngens).map(|_| (0..rank).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        if let Ok(c) = RationalCone::new(rank, gens) {
            out.push(c);
        }
    }
    out
}

pub fn dim(gens: &[Vec<i64>]) -> usize {
    let refs: Vec<&Vec<i64>> = gens.iter().collect();
    rank_of(&refs)
}

/// `h^0` on the blown-up K3 straight from the three cases.
pub fn k3_h0(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        1
    } else if b >= 2 * a {
        2 * a * a + 2
    } else {
        2 * a * b - a - b * (b - 1) / 2 + 2
    }
}

/// `(A - K) A / 2 + 1` from coefficients `[d, m_1, ..]`.
pub fn riemann_roch(c: &[i64]) -> i64 {
    let d = c[0];
    let sq: i64 = d * d - c[1..].iter().map(|m| m * m).sum::<i64>();
    let ak: i64 = 3 * d - c[1..].iter().sum::<i64>();
    (sq + ak) / 2 + 1
}

/// Intersection pairing on `[d, m_1, ..]`.
pub fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

pub fn anticanonical(r: usize) -> Vec<i64> {
    let mut w = vec![-1; r + 1];
    w[0] = 3;
    w
}

/// (-1)-classes by direct search over a generous box.
pub fn minus_one_brute(r: usize, d_max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in 0..=d_max {
        let mut m = vec![-1i64; r];
        loop {
            let mut c = vec![d];
            c.extend(&m);
            if pairing(&c, &c) == -1 && 3 * d - m.iter().sum::<i64>() == 1 {
                out.push(c);
            }
            let mut k = 0;
            loop {
                if k == r {
                    break;
                }
                m[k] += 1;
                if m[k] <= d {
                    break;
                }
                m[k] = -1;
                k += 1;
            }
            if k == r {
                break;
            }
        }
    }
    out.sort();
    out
}
