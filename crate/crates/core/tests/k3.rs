mod common;

use chowforge::k3_blowup::{
    denominators_are_expected, euler_chow_k3, euler_chow_k3_expanded, euler_chow_k3_rational, h0_k3, k3_grading,
    K3Class,
};
use chowforge::series_algebra::rationality_check;
use proptest::prelude::*;

#[test]
fn formula_is_continuous_across_the_boundary() {
    for a in 1..=40 {
        let b = 2 * a;
        let shallow = 2 * a * b - a - b * (b - 1) / 2 + 2;
        assert_eq!(shallow, 2 * a * a + 2);
        assert_eq!(h0_k3(a, b).unwrap(), shallow);
    }
}

#[test]
fn one_exceptional_curve_gives_a_plus_two() {
    for a in 1..=50 {
        assert_eq!(h0_k3(a, 1).unwrap(), a + 2);
    }
}

#[test]
fn known_values() {
    assert_eq!(h0_k3(10, 7).unwrap(), 111);
    assert_eq!(h0_k3(3, 2).unwrap(), 10);
    assert_eq!(K3Class::new(1, 0).square(), 0);
    assert_eq!(K3Class::canonical().square(), -1);
}

#[test]
fn rational_form() {
    let parts = euler_chow_k3_rational().unwrap();
    assert!(denominators_are_expected(&parts));
    for p in &parts {
        let f = p.expand(&k3_grading(), 25).unwrap();
        assert!(rationality_check(&f, &p.denominator_product(), p.numerator()));
    }
    assert_eq!(euler_chow_k3_expanded(40).unwrap(), euler_chow_k3(40).unwrap());
}

proptest! {
    #[test]
    fn h0_matches_test_formula(a in 0i64..200, b in 0i64..200) {
        prop_assert_eq!(h0_k3(a, b).unwrap(), common::k3_h0(a, b));
    }

    #[test]
    fn h0_is_monotone(a in 0i64..100, b in 0i64..100) {
        let h = h0_k3(a, b).unwrap();
        prop_assert!(h0_k3(a + 1, b).unwrap() >= h);
        prop_assert!(h0_k3(a, b + 1).unwrap() >= h);
    }
}
