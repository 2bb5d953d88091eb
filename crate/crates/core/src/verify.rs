//! Cross-checks for one Del Pezzo surface, as run by `chowforge verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::delpezzo::{
    closed_form_nef_series, minus_one_classes, orbit_classification, riemann_roch_polynomial, weyl_orbit_form, DelPezzo,
};
use crate::error::{invalid, Result};
use crate::lattice_pic::{weyl_group, PicClass, DEFAULT_ELEMENT_CAP};
use crate::oracle::h0_class;
use crate::series_algebra::polynomial_weighted_sum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn run(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, e.to_string()),
    };
    Check { name: name.to_string(), passed, detail }
}

pub const MINUS_ONE_COUNTS: [usize; 9] = [0, 1, 3, 6, 10, 16, 27, 56, 240];
pub const WEYL_ORDERS: [(usize, usize); 4] = [(3, 12), (4, 120), (5, 1920), (6, 51840)];

/// Random effective classes with `0 <= d <= d_max` and `-2 <= m_i <= d`.
pub fn random_effective_classes(x: &DelPezzo, count: usize, d_max: i64, seed: u64) -> Vec<PicClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(0..=d_max);
        let mut c = vec![d];
        c.extend((0..x.r()).map(|_| rng.gen_range(-2..=d)));
        let class = PicClass::new(c).expect("rank within range");
        if x.is_effective(&class) {
            out.push(class);
        }
    }
    out
}

/// Every check that applies to `P_r`.
pub fn verify(r: usize) -> Result<Vec<Check>> {
    if r > 8 {
        return invalid("verify covers 0 <= r <= 8");
    }
    let mut checks = Vec::new();
    if r >= 1 {
        checks.push(run("minus_one_count", || {
            let n = minus_one_classes(r, None)?.len();
            Ok((n == MINUS_ONE_COUNTS[r], format!("{n} classes, expected {}", MINUS_ONE_COUNTS[r])))
        }));
    }
    if let Some(&(_, order)) = WEYL_ORDERS.iter().find(|(k, _)| *k == r) {
        checks.push(run("weyl_order", || {
            let n = weyl_group(r, DEFAULT_ELEMENT_CAP)?.order();
            Ok((n == order, format!("order {n}, expected {order}")))
        }));
    }
    if r >= 7 {
        return Ok(checks);
    }
    let x = DelPezzo::new(r)?;
    let g = x.anticanonical_grading();
    if (1..=4).contains(&r) {
        checks.push(run("nef_closed_form", || {
            let bound = if r == 4 { 8 } else { 12 };
            let same = closed_form_nef_series(r, &g, bound)? == x.nef_series_l(&g, bound)?;
            Ok((same, format!("(-K)-degree <= {bound}")))
        }));
    }
    checks.push(run("riemann_roch_weighting", || {
        let bound = if r <= 4 { 10 } else { 6 };
        let n = x.weighted_nef_series_n(&g, bound)?;
        let direct = polynomial_weighted_sum(&x.nef_rational_cone(), &riemann_roch_polynomial(r), &g, bound)?;
        Ok((n == direct.direct, format!("{} nef classes, (-K)-degree <= {bound}", n.len())))
    }));
    checks.push(run("euler_chow_equivalence", || {
        let bound = match r {
            0..=4 => 10,
            5 => 5,
            _ => 4,
        };
        let f = x.euler_chow(&g, bound, true)?;
        let oracle = x.euler_chow_oracle(&g, bound)?;
        let mut same = f == oracle;
        let mut detail = format!("B = {bound}, {} coefficients, oracle agrees: {same}", f.len());
        if (1..=5).contains(&r) {
            let orbit = weyl_orbit_form(r, &g, bound)?;
            detail.push_str(&format!(", orbit form agrees: {}", orbit == f));
            same &= orbit == f;
        }
        Ok((same, detail))
    }));
    if (1..=5).contains(&r) {
        checks.push(run("orbit_classification", || {
            let orbits = orbit_classification(r)?;
            Ok((true, format!("{} standard orbits", orbits.len())))
        }));
    }
    checks.push(run("interpolation_concordance", || {
        let classes = random_effective_classes(&x, 20, 8, 7 + r as u64);
        let mut bad = 0;
        for (k, c) in classes.iter().enumerate() {
            if x.h0(c)? != h0_class(c, 2, k as u64)? {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{bad} mismatches on {} classes", classes.len())))
    }));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_small() {
        for r in 0..=2 {
            let checks = verify(r).unwrap();
            assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        }
        assert!(verify(9).is_err());
    }
}
