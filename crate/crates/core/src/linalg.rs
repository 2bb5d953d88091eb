//! Exact linear algebra over the integers and the rationals.
//!
//! Everything here is small-dimensional (ambient rank at most ten), so the
//! routines favour clarity over asymptotics. Integer routines run on `i128`
//! internally and fail loudly on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type QMatrix = Vec<Vec<BigRational>>;

pub(crate) fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_qmatrix(rows: &[Vec<i64>]) -> QMatrix {
    rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

/// Reduces `m` to reduced row echelon form in place, returning pivot columns.
pub(crate) fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m = to_qmatrix(rows);
    rref(&mut m).len()
}

/// Greedy maximal linearly independent subset, in input order.
pub(crate) fn independent_subset(vectors: &[Vec<i64>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Solves `sum_j x_j * cols[j] = target`. Returns `None` when the target is
/// outside the column span. Columns are assumed independent.
pub(crate) fn solve_columns(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = cols.len();
    let mut m: QMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| q(c[i])).collect();
            row.push(q(target[i]));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = m[row][k].clone();
    }
    Some(x)
}

/// Inverse of a square integer matrix, if nonsingular.
pub(crate) fn inverse(m: &[Vec<i64>]) -> Option<QMatrix> {
    let n = m.len();
    let mut aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&v| q(v)).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a = to_qmatrix(m);
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    det.to_integer()
}

pub(crate) fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content of a nonzero integer vector.
pub(crate) fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Clears denominators of a rational vector by a positive factor and
/// returns the primitive integer vector on the same ray.
pub(crate) fn primitive_from_rational(v: &[BigRational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("primitive vector entry exceeds i64")
        })
        .collect()
}

/// Column-style echelon form `A U = H` with `U` unimodular.
///
/// Returns `(H, U, rank)`. Columns `rank..` of `H` are zero, so the matching
/// columns of `U` form a basis of the integer kernel of `A`.
pub(crate) fn column_echelon(a: &[Vec<i64>], ncols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize) {
    let mut h: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| i128::from(i == j)).collect()).collect();
    let swap_cols = |m: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    let axpy_col = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in m.iter_mut() {
            row[dst] = row[dst].checked_sub(f.checked_mul(row[src]).expect("overflow")).expect("overflow");
        }
    };
    let mut p = 0;
    for r in 0..h.len() {
        if p == ncols {
            break;
        }
        loop {
            let best = (p..ncols).filter(|&c| h[r][c] != 0).min_by_key(|&c| h[r][c].abs());
            let Some(best) = best else { break };
            swap_cols(&mut h, p, best);
            swap_cols(&mut u, p, best);
            let mut done = true;
            for c in p + 1..ncols {
                if h[r][c] != 0 {
                    let f = h[r][c].div_euclid(h[r][p]);
                    axpy_col(&mut h, c, p, f);
                    axpy_col(&mut u, c, p, f);
                    if h[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][p] != 0 {
            if h[r][p] < 0 {
                for row in h.iter_mut() {
                    row[p] = -row[p];
                }
                for row in u.iter_mut() {
                    row[p] = -row[p];
                }
            }
            p += 1;
        }
    }
    (h, u, p)
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("lattice entry exceeds i64")
}

/// A Z-basis of `{x in Z^n : row . x = 0 for every row}`.
pub(crate) fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let (_, u, rank) = column_echelon(rows, n);
    (rank..n).map(|c| (0..n).map(|i| narrow(u[i][c])).collect()).collect()
}

/// Lower-triangular Hermite-style basis of the lattice spanned by the
/// columns of a nonsingular square matrix. Diagonal entries are positive.
pub(crate) fn lower_hermite(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let (h, _, rank) = column_echelon(m, n);
    assert_eq!(rank, n, "lower_hermite needs a nonsingular matrix");
    h.iter().map(|r| r.iter().map(|&v| narrow(v)).collect()).collect()
}

/// Exact phase-one simplex: is `target` a nonnegative combination of `gens`?
///
/// Bland's rule guarantees termination.
pub(crate) fn cone_contains(gens: &[Vec<i64>], target: &[i64]) -> bool {
    let n = target.len();
    let k = gens.len();
    if target.iter().all(|&v| v == 0) {
        return true;
    }
    if k == 0 {
        return false;
    }
    let width = k + n + 1;
    let mut t: QMatrix = (0..n)
        .map(|i| {
            let sign = if target[i] < 0 { -1 } else { 1 };
            let mut row = vec![BigRational::zero(); width];
            for (j, g) in gens.iter().enumerate() {
                row[j] = q(sign * g[i]);
            }
            row[k + i] = BigRational::one();
            row[width - 1] = q(sign * target[i]);
            row
        })
        .collect();
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..k {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (k..k + n).collect();
    while let Some(enter) = (0..k + n).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..n {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded direction; cannot happen for a phase-one objective.
            break;
        };
        let inv = t[r][enter].recip();
        for v in t[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let s = &t[r][j] * &f;
                    t[i][j] -= s;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..width {
                let s = &t[r][j] * &f;
                obj[j] -= s;
            }
        }
        basis[r] = enter;
    }
    obj[width - 1].is_zero()
}
