//! `h^0` of `dH - sum m_i E_i` by interpolation: the dimension of the space
//! of plane curves of degree `d` with multiplicity at least `m_i` at random
//! points, computed as a matrix rank over large prime fields.
//!
//! The rank is exact with overwhelming probability (Schwartz-Zippel), not
//! with certainty.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::lattice_pic::PicClass;

/// The two prime fields used for every query.
pub const PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 62) - 57];

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Rank of a matrix over `Z/p` by Gaussian elimination.
fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = mul(*x, inv, p);
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = (*x + p - mul(f, y, p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn falling(n: u64, k: u64, p: u64) -> u64 {
    (0..k).fold(1, |acc, i| mul(acc, (n - i) % p, p))
}

/// Rows: for each point and each `(alpha, beta)` with `alpha + beta < m`,
/// the derivative `d^alpha_x d^beta_y` of every monomial `x^i y^j` at the point.
fn condition_matrix(d: u64, mults: &[u64], points: &[(u64, u64)], p: u64) -> Vec<Vec<u64>> {
    let monomials: Vec<(u64, u64)> = (0..=d).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect();
    let mut rows = Vec::new();
    for (&m, &(x, y)) in mults.iter().zip(points) {
        for order in 0..m {
            for alpha in 0..=order {
                let beta = order - alpha;
                rows.push(
                    monomials
                        .iter()
                        .map(|&(i, j)| {
                            if i < alpha || j < beta {
                                0
                            } else {
                                let c = mul(falling(i, alpha, p), falling(j, beta, p), p);
                                mul(c, mul(pow(x, i - alpha, p), pow(y, j - beta, p), p), p)
                            }
                        })
                        .collect(),
                );
            }
        }
    }
    rows
}

/// Ranks per trial and prime, and the resulting dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolationReport {
    pub h0: i64,
    /// `ranks[t][k]` is the rank in trial `t` over `PRIMES[k]`.
    pub ranks: Vec<[usize; 2]>,
    pub disagreements: usize,
}

/// Interpolation-rank `h^0` with a full report. A trial in which the two
/// fields disagree triggers one extra trial and a warning. Special
/// positions can only lower the rank, so the largest rank seen is used.
pub fn h0_interpolation_report(d: i64, mults: &[i64], trials: usize, seed: u64) -> Result<InterpolationReport> {
    if d < 0 {
        return invalid("degree must be nonnegative");
    }
    if mults.iter().any(|&m| m < 0) {
        return invalid("multiplicities must be nonnegative");
    }
    if trials == 0 {
        return invalid("at least one trial is required");
    }
    let du = d as u64;
    let mu: Vec<u64> = mults.iter().map(|&m| m as u64).collect();
    let total = (d + 1) * (d + 2) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks = Vec::new();
    let mut disagreements = 0;
    let mut remaining = trials;
    while remaining > 0 {
        remaining -= 1;
        let mut pair = [0usize; 2];
        for (k, &p) in PRIMES.iter().enumerate() {
            let points: Vec<(u64, u64)> = mu.iter().map(|_| (rng.gen_range(0..p), rng.gen_range(0..p))).collect();
            pair[k] = rank_mod(condition_matrix(du, &mu, &points, p), p);
        }
        if pair[0] != pair[1] {
            warn!("interpolation ranks disagree across prime fields for d = {d}, mults = {mults:?}: {pair:?}");
            disagreements += 1;
            if disagreements == 1 {
                remaining += 1;
            }
        }
        ranks.push(pair);
    }
    let best = ranks.iter().flat_map(|r| r.iter()).copied().max().unwrap_or(0) as i64;
    Ok(InterpolationReport { h0: (total - best).max(0), ranks, disagreements })
}

/// `h^0` of the curves of degree `d` through random points with the given
/// multiplicities.
pub fn h0_interpolation(d: i64, mults: &[i64], trials: usize, seed: u64) -> Result<i64> {
    Ok(h0_interpolation_report(d, mults, trials, seed)?.h0)
}

/// Drops positive multiples of exceptional curves, which are fixed
/// components: negative `m_i` become 0.
pub fn reduce_exceptional(d: &PicClass) -> PicClass {
    let mut c = d.coeffs().to_vec();
    for m in &mut c[1..] {
        *m = (*m).max(0);
    }
    PicClass::new(c).expect("same rank")
}

/// `h^0` of an arbitrary class through the oracle; zero when `d < 0`.
pub fn h0_class(d: &PicClass, trials: usize, seed: u64) -> Result<i64> {
    let reduced = reduce_exceptional(d);
    if reduced.degree() < 0 {
        return Ok(0);
    }
    h0_interpolation(reduced.degree(), reduced.mults(), trials, seed)
}
