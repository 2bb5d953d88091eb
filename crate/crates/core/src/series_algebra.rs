//! Truncated series in the monoid ring: convolution, differential operators
//! with polynomial weights, rationality checks, and Macdonald's formula.
//!
//! A series is only ever held as a [`GradedTruncation`]: its coefficients at
//! every lattice point `D` with `0 <= delta(D) <= bound` for a grading
//! functional `delta` that is strictly positive on the support monoid.
//! Rational functions are compared by expansion, never symbolically.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::json;

/// An exponent vector.
pub type Point = Vec<i64>;

/// An integer linear functional used to grade series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grading(Vec<i64>);

impl Grading {
    pub fn new(weights: Vec<i64>) -> Self {
        Self(weights)
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, p: &[i64]) -> i64 {
        debug_assert_eq!(p.len(), self.0.len());
        self.0.iter().zip(p).map(|(a, b)| a * b).sum()
    }
}

/// A Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Point, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank], BigInt::one())
    }

    pub fn monomial(exp: Point, coeff: BigInt) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// `1 - t^v`.
    pub fn one_minus(v: &[i64]) -> Self {
        let mut p = Self::one(v.len());
        p.add_term(v.to_vec(), -BigInt::one());
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, exp: Point, coeff: BigInt) {
        assert_eq!(exp.len(), self.rank, "exponent rank mismatch");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Point = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, by: &[i64]) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| json!([json::vector(e), json::int(c)])).collect())
    }
}

/// Coefficients of a monoid series on every point with `0 <= delta <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTruncation {
    grading: Grading,
    bound: i64,
    coeffs: BTreeMap<Point, BigInt>,
}

impl GradedTruncation {
    pub fn new(grading: Grading, bound: i64) -> Self {
        Self { grading, bound, coeffs: BTreeMap::new() }
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn rank(&self) -> usize {
        self.grading.rank()
    }

    /// Whether a point lies in the graded window of this truncation.
    pub fn in_range(&self, p: &[i64]) -> bool {
        let d = self.grading.eval(p);
        (0..=self.bound).contains(&d)
    }

    /// Adds `c` at `p`. Points outside the window are rejected.
    pub fn add_at(&mut self, p: Point, c: BigInt) -> Result<()> {
        if !self.in_range(&p) {
            return invalid(format!("point {p:?} outside graded window 0..={}", self.bound));
        }
        self.add_unchecked(p, c);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, p: Point, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, p: &[i64]) -> BigInt {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &BigInt)> {
        self.coeffs.iter()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &GradedTruncation) -> Result<()> {
        if self.grading != other.grading {
            return invalid("truncations carry different gradings");
        }
        Ok(())
    }

    /// Restricts to `delta <= bound`.
    pub fn truncate(&self, bound: i64) -> GradedTruncation {
        let bound = bound.min(self.bound);
        GradedTruncation {
            grading: self.grading.clone(),
            bound,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(p, _)| self.grading.eval(p) <= bound)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &GradedTruncation) -> Result<GradedTruncation> {
        self.check_compatible(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = self.truncate(bound);
        for (p, c) in other.truncate(bound).coeffs {
            out.add_unchecked(p, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedTruncation) -> Result<GradedTruncation> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> GradedTruncation {
        let mut out = GradedTruncation::new(self.grading.clone(), self.bound);
        for (p, c) in &self.coeffs {
            out.add_unchecked(p.clone(), c * k);
        }
        out
    }

    /// Divides every coefficient by `k`, failing when any division is inexact.
    pub fn div_exact(&self, k: &BigInt) -> Result<GradedTruncation> {
        let mut out = GradedTruncation::new(self.grading.clone(), self.bound);
        for (p, c) in &self.coeffs {
            let (quo, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return Err(Error::Inconsistent(format!("coefficient {c} at {p:?} not divisible by {k}")));
            }
            out.add_unchecked(p.clone(), quo);
        }
        Ok(out)
    }

    /// Keeps only the points satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> GradedTruncation {
        GradedTruncation {
            grading: self.grading.clone(),
            bound: self.bound,
            coeffs: self.coeffs.iter().filter(|(p, _)| keep(p)).map(|(p, c)| (p.clone(), c.clone())).collect(),
        }
    }

    /// Re-expresses the series in new coordinates through an invertible map
    /// of exponents. `grading` must be the old grading expressed in the new
    /// coordinates, so the graded window is preserved.
    pub fn map_points(&self, f: impl Fn(&[i64]) -> Point, grading: Grading) -> Result<GradedTruncation> {
        let mut out = GradedTruncation::new(grading, self.bound);
        for (p, c) in &self.coeffs {
            let q = f(p);
            if out.grading.eval(&q) != self.grading.eval(p) {
                return invalid("coordinate change does not preserve the grading");
            }
            out.add_unchecked(q, c.clone());
        }
        Ok(out)
    }

    /// Multiplies by a Laurent polynomial, keeping the window where the
    /// product is exact: `delta <= bound - max(0, max delta(support))`.
    pub fn mul_poly(&self, g: &LaurentPoly) -> GradedTruncation {
        let lift = g.terms().map(|(e, _)| self.grading.eval(e)).max().unwrap_or(0).max(0);
        let bound = self.bound - lift;
        let mut out = GradedTruncation::new(self.grading.clone(), bound);
        for (p, c) in &self.coeffs {
            for (e, k) in g.terms() {
                let q: Point = p.iter().zip(e).map(|(a, b)| a + b).collect();
                if out.in_range(&q) {
                    out.add_unchecked(q, c * k);
                }
            }
        }
        out
    }

    /// Multiplies by the monomial `t^v`, which must have nonnegative degree.
    pub fn shift(&self, v: &[i64]) -> Result<GradedTruncation> {
        if self.grading.eval(v) < 0 {
            return invalid(format!("shift by {v:?} lowers the grading"));
        }
        let mut out = GradedTruncation::new(self.grading.clone(), self.bound);
        for (p, c) in &self.coeffs {
            let q: Point = p.iter().zip(v).map(|(a, b)| a + b).collect();
            if out.in_range(&q) {
                out.add_unchecked(q, c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies by `1 / (1 - t^v)`, i.e. sums the shifts by every multiple of `v`.
    pub fn mul_geometric(&self, v: &[i64]) -> Result<GradedTruncation> {
        let step = self.grading.eval(v);
        if step <= 0 {
            return invalid(format!("grading is not positive on denominator vector {v:?}"));
        }
        let mut out = GradedTruncation::new(self.grading.clone(), self.bound);
        for (p, c) in &self.coeffs {
            let mut q = p.clone();
            let mut deg = self.grading.eval(&q);
            while deg <= self.bound {
                out.add_unchecked(q.clone(), c.clone());
                for (a, b) in q.iter_mut().zip(v) {
                    *a += b;
                }
                deg += step;
            }
        }
        Ok(out)
    }

    /// Sorted `[[point, coefficient], ...]` together with grading and bound.
    pub fn to_json(&self) -> Value {
        json!({
            "grading": json::vector(self.grading.weights()),
            "bound": self.bound,
            "coefficients": self
                .coeffs
                .iter()
                .map(|(p, c)| json!([json::vector(p), json::int(c)]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Cauchy product of two truncations on the smaller of their windows.
pub fn convolve(f: &GradedTruncation, g: &GradedTruncation) -> Result<GradedTruncation> {
    f.check_compatible(g)?;
    let bound = f.bound.min(g.bound);
    let mut out = GradedTruncation::new(f.grading.clone(), bound);
    let by_degree = |t: &GradedTruncation| {
        let mut levels: BTreeMap<i64, Vec<(Point, BigInt)>> = BTreeMap::new();
        for (p, c) in t.truncate(bound).coeffs {
            levels.entry(t.grading.eval(&p)).or_default().push((p, c));
        }
        levels
    };
    let fl = by_degree(f);
    let gl = by_degree(g);
    for (df, fs) in &fl {
        for (_, gs) in gl.range(..=bound - df) {
            for (p, a) in fs {
                for (q, b) in gs {
                    let s: Point = p.iter().zip(q).map(|(x, y)| x + y).collect();
                    out.add_unchecked(s, a * b);
                }
            }
        }
    }
    Ok(out)
}

/// A polynomial with rational coefficients in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: BigRational) {
        assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, p: &[i64]) -> BigRational {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in p.iter().zip(e) {
                v *= BigRational::from_integer(BigInt::from(*x).pow(k));
            }
            total += v;
        }
        total
    }

    /// Evaluates where the value is known to be an integer.
    pub fn eval_integer(&self, p: &[i64]) -> Result<BigInt> {
        let v = self.eval(p);
        if !v.is_integer() {
            return Err(Error::InvalidInput(format!("polynomial is not integral at {p:?}")));
        }
        Ok(v.to_integer())
    }
}

/// `S(n, k)`, the Stirling numbers of the second kind.
fn stirling2(n: u32, k: u32) -> BigInt {
    let mut row = vec![BigInt::one()];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i as usize + 1];
        for j in 1..=i as usize {
            let keep = if j < row.len() { &row[j] * BigInt::from(j) } else { BigInt::zero() };
            next[j] = keep + &row[j - 1];
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_default()
}

/// A differential operator `(1/denominator) sum_i f_i(t) d^{D_i}/dt^{D_i}`
/// with Laurent polynomial coefficients `f_i` and multi-orders `D_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    rank: usize,
    terms: Vec<(LaurentPoly, Vec<u32>)>,
    denominator: BigInt,
}

impl DiffOperator {
    pub fn new(rank: usize, terms: Vec<(LaurentPoly, Vec<u32>)>, denominator: BigInt) -> Result<Self> {
        if !denominator.is_positive() {
            return invalid("operator denominator must be positive");
        }
        for (f, ord) in &terms {
            if f.rank() != rank || ord.len() != rank {
                return invalid("operator term has the wrong rank");
            }
        }
        Ok(Self { rank, terms, denominator })
    }

    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: Vec::new(), denominator: BigInt::one() }
    }

    pub fn terms(&self) -> &[(LaurentPoly, Vec<u32>)] {
        &self.terms
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    /// The operator whose action on `t^D` is multiplication by `P(D)`.
    ///
    /// Each monomial `x^k` is rewritten in falling factorials,
    /// `x^k = sum_j S(k, j) x^(j)`, and `x^(j) t^x = t^j d^j/dt^j t^x`.
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let n = p.nvars();
        let denominator = p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let mut by_order: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exp, c) in p.terms() {
            let scaled = (c * BigRational::from_integer(denominator.clone())).to_integer();
            // Expand prod_i x_i^{k_i} into prod_i sum_j S(k_i, j) x_i^(j).
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), scaled)];
            for &k in exp {
                let mut next = Vec::new();
                for (ord, coef) in &partial {
                    for j in 0..=k {
                        let s = stirling2(k, j);
                        if s.is_zero() {
                            continue;
                        }
                        let mut o = ord.clone();
                        o.push(j);
                        next.push((o, coef * s));
                    }
                }
                partial = next;
            }
            for (ord, coef) in partial {
                *by_order.entry(ord).or_default() += coef;
            }
        }
        let terms = by_order
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(ord, c)| {
                let exp: Point = ord.iter().map(|&o| i64::from(o)).collect();
                (LaurentPoly::monomial(exp, c), ord)
            })
            .collect();
        Self { rank: n, terms, denominator }
    }
}

fn falling_factorial(x: i64, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(x - i64::from(i)))
}

/// Applies a differential operator to a truncated series.
///
/// `t^D` maps to `f(t) * prod_i D_i (D_i - 1) ... (D_i - k_i + 1) * t^(D - k)`
/// for each term `(f, k)`. The window shrinks by the largest amount any
/// term lowers the grading.
pub fn apply_diff_op(op: &DiffOperator, f: &GradedTruncation) -> Result<GradedTruncation> {
    if op.rank != f.rank() {
        return invalid("operator and series have different ranks");
    }
    let grading = f.grading();
    let mut drop = 0i64;
    for (coef, ord) in &op.terms {
        let ord_deg = grading.eval(&ord.iter().map(|&o| i64::from(o)).collect::<Vec<_>>());
        for (e, _) in coef.terms() {
            drop = drop.max(ord_deg - grading.eval(e));
        }
    }
    let bound = f.bound() - drop;
    let mut out = GradedTruncation::new(grading.clone(), bound);
    for (p, c) in f.iter() {
        for (coef, ord) in &op.terms {
            let w = p.iter().zip(ord).fold(BigInt::one(), |acc, (&x, &k)| acc * falling_factorial(x, k));
            if w.is_zero() {
                continue;
            }
            for (e, k) in coef.terms() {
                let q: Point = p.iter().zip(ord).zip(e).map(|((x, &o), s)| x - i64::from(o) + s).collect();
                let deg = grading.eval(&q);
                if deg < 0 {
                    return invalid(format!("operator maps {p:?} below the graded window"));
                }
                if deg <= bound {
                    out.add_unchecked(q, &w * k * c);
                }
            }
        }
    }
    out.div_exact(&op.denominator)
}

/// Checks `g * f = h` on every point with `delta <= bound - max delta(g)`.
pub fn rationality_check(f: &GradedTruncation, g: &LaurentPoly, h: &LaurentPoly) -> bool {
    let product = f.mul_poly(g);
    let window = product.bound();
    for (p, c) in h.terms() {
        let d = f.grading().eval(p);
        if d > window {
            continue;
        }
        if d < 0 || product.get(p) != *c {
            return false;
        }
    }
    let agrees = product.iter().all(|(p, c)| h.coeff(p) == *c);
    agrees
}

/// `sum_{D in cone} P(D) t^D` computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSum {
    /// Direct evaluation of `P` at every lattice point.
    pub direct: GradedTruncation,
    /// The differential operator of `P` applied to the expanded cone series.
    pub via_operator: GradedTruncation,
}

/// Polynomial-weighted lattice-point sum over a cone. The two routes must
/// agree; a mismatch is reported as an internal inconsistency.
pub fn polynomial_weighted_sum(
    cone: &crate::cone_engine::RationalCone,
    p: &Polynomial,
    grading: &Grading,
    bound: i64,
) -> Result<WeightedSum> {
    use crate::cone_engine::{cone_lattice_points, cone_truncation};
    if p.nvars() != cone.rank() {
        return invalid("polynomial and cone have different ranks");
    }
    let mut direct = GradedTruncation::new(grading.clone(), bound);
    for x in cone_lattice_points(cone, grading, bound)? {
        let v = p.eval_integer(&x)?;
        direct.add_unchecked(x, v);
    }
    let op = DiffOperator::from_polynomial(p);
    let via_operator = apply_diff_op(&op, &cone_truncation(cone, grading, bound)?)?;
    if via_operator != direct {
        return Err(Error::Inconsistent("weighted cone sum: evaluation and operator routes disagree".into()));
    }
    Ok(WeightedSum { direct, via_operator })
}

/// Truncation of `(1 - t)^(-chi)` in rank one, graded by the exponent.
pub fn macdonald_e0(chi: i64, bound: i64) -> Result<GradedTruncation> {
    if bound < 0 {
        return invalid("bound must be nonnegative");
    }
    let mut out = GradedTruncation::new(Grading::new(vec![1]), bound);
    // Coefficient of t^d is (-1)^d binom(-chi, d) = prod_{i<d} (chi + i) / d!.
    let mut c = BigInt::one();
    for d in 0..=bound {
        out.add_unchecked(vec![d], c.clone());
        c = c * BigInt::from(chi + d) / BigInt::from(d + 1);
    }
    Ok(out)
}
