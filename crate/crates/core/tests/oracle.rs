use chowforge::delpezzo::DelPezzo;
use chowforge::oracle::{
    h0_class, h0_interpolation, h0_interpolation_report, is_prime_u64, reduce_exceptional, PRIMES,
};
use chowforge::PicClass;
use proptest::prelude::*;

#[test]
fn primes() {
    assert!(PRIMES.iter().all(|&p| is_prime_u64(p)));
}

#[test]
fn plane_curves_without_conditions() {
    for d in 0..=12 {
        assert_eq!(h0_interpolation(d, &[], 1, 3).unwrap(), (d + 1) * (d + 2) / 2);
    }
}

#[test]
fn expected_dimension_can_fail() {
    // Quartics singular at five points: only the doubled conic through them.
    assert_eq!(h0_interpolation(4, &[2; 5], 2, 5).unwrap(), 1);
    assert_eq!(h0_interpolation(2, &[1; 5], 2, 5).unwrap(), 1);
    assert_eq!(h0_interpolation(2, &[1; 6], 2, 5).unwrap(), 0);
}

#[test]
fn bad_input() {
    assert!(h0_interpolation(-1, &[], 1, 0).is_err());
    assert!(h0_interpolation(3, &[-1], 1, 0).is_err());
    assert!(h0_interpolation(3, &[1], 0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn agrees_with_delpezzo(r in 1usize..=6, d in 0i64..=8, seed in any::<u64>(), raw in prop::collection::vec(-2i64..=8, 6)) {
        let mut c = vec![d];
        c.extend(raw.iter().take(r).map(|&m| m.min(d)));
        let class = PicClass::new(c).unwrap();
        let x = DelPezzo::new(r).unwrap();
        prop_assert_eq!(h0_class(&class, 2, seed).unwrap(), x.h0(&class).unwrap());
    }

    #[test]
    fn reduction_is_idempotent(d in -2i64..=6, m in prop::collection::vec(-3i64..=6, 0..=5)) {
        let mut c = vec![d];
        c.extend(m);
        let class = PicClass::new(c).unwrap();
        let once = reduce_exceptional(&class);
        prop_assert_eq!(reduce_exceptional(&once), once.clone());
        prop_assert!(once.mults().iter().all(|&x| x >= 0));
    }

    #[test]
    fn reports_are_reproducible(d in 0i64..=6, m in prop::collection::vec(0i64..=3, 0..=4), seed in any::<u64>()) {
        let a = h0_interpolation_report(d, &m, 2, seed).unwrap();
        prop_assert_eq!(a.disagreements, 0);
        prop_assert_eq!(a, h0_interpolation_report(d, &m, 2, seed).unwrap());
    }
}
