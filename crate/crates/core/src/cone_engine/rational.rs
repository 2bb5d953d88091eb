use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::json;
use crate::series_algebra::{GradedTruncation, Grading, LaurentPoly, Point};

/// `numerator / prod_v (1 - t^v)` over a multiset of denominator vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRationalFunction {
    numerator: LaurentPoly,
    denominator: Vec<Point>,
}

impl ConeRationalFunction {
    pub fn new(numerator: LaurentPoly, mut denominator: Vec<Point>) -> Self {
        denominator.sort();
        Self { numerator, denominator }
    }

    pub fn rank(&self) -> usize {
        self.numerator.rank()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Point] {
        &self.denominator
    }

    /// `prod_v (1 - t^v)` as a Laurent polynomial.
    pub fn denominator_product(&self) -> LaurentPoly {
        self.denominator.iter().fold(LaurentPoly::one(self.rank()), |acc, v| acc.mul(&LaurentPoly::one_minus(v)))
    }

    pub fn neg(&self) -> Self {
        Self { numerator: self.numerator.neg(), denominator: self.denominator.clone() }
    }

    /// Multiplies by `t^v / (1 - t^v)`.
    pub fn times_shifted_geometric(&self, v: &[i64]) -> Self {
        let mut denominator = self.denominator.clone();
        denominator.push(v.to_vec());
        Self::new(self.numerator.shift(v), denominator)
    }

    /// Series coefficients on `0 <= delta <= bound`, by iterated geometric
    /// expansion of each denominator factor.
    pub fn expand(&self, grading: &Grading, bound: i64) -> Result<GradedTruncation> {
        if grading.rank() != self.rank() {
            return invalid("grading rank mismatch");
        }
        if let Some(v) = self.denominator.iter().find(|v| grading.eval(v) <= 0) {
            return invalid(format!("grading is not positive on denominator vector {v:?}"));
        }
        let mut acc = GradedTruncation::new(grading.clone(), bound);
        for (w, c) in self.numerator.terms() {
            let d = grading.eval(w);
            if d < 0 {
                return invalid(format!("numerator term {w:?} has negative degree"));
            }
            if d <= bound {
                acc.add_at(w.clone(), c.clone())?;
            }
        }
        for v in &self.denominator {
            acc = acc.mul_geometric(v)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.iter().map(|v| json::vector(v)).collect::<Vec<_>>(),
        })
    }
}

/// Expands and sums a list of rational functions.
pub fn expand_sum(parts: &[ConeRationalFunction], grading: &Grading, bound: i64) -> Result<GradedTruncation> {
    let mut total = GradedTruncation::new(grading.clone(), bound);
    for p in parts {
        total = total.add(&p.expand(grading, bound)?)?;
    }
    Ok(total)
}
