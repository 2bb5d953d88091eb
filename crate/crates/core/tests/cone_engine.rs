mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use chowforge::cone_engine::{
    cone_lattice_points, cone_rational_pieces, cone_truncation, fundamental_domain, half_open_decompose, lattice_index,
    triangulate, HalfOpenSimplicialCone, RationalCone,
};
use chowforge::series_algebra::Grading;

fn cone_strategy() -> impl Strategy<Value = RationalCone> {
    (1usize..=4)
        .prop_flat_map(|rank| {
            prop::collection::vec(prop::collection::vec(-4i64..=4, rank), 1..=rank + 2).prop_map(move |g| (rank, g))
        })
        .prop_filter_map("not a pointed cone", |(rank, g)| RationalCone::new(rank, g).ok())
}

#[test]
fn orthant_series() {
    let cone = RationalCone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
    let f = cone_truncation(&cone, &Grading::new(vec![1, 1]), 6).unwrap();
    assert_eq!(f.len(), 28);
    assert!(f.iter().all(|(_, c)| *c == BigInt::from(1)));
}

#[test]
fn index_of_a_sublattice_cone() {
    let gens = vec![vec![1, 0], vec![1, 2]];
    assert_eq!(lattice_index(&gens), BigInt::from(2));
    let c = HalfOpenSimplicialCone::new(2, gens, vec![false, false]).unwrap();
    let mut dom = fundamental_domain(&c);
    dom.sort();
    assert_eq!(dom, vec![vec![0, 0], vec![1, 1]]);
}

#[test]
fn placing_triangulation_of_three_rays() {
    let cone = RationalCone::new(2, vec![vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap();
    let mut pieces: Vec<Vec<Vec<i64>>> = triangulate(&cone)
        .unwrap()
        .iter()
        .map(|c| {
            let mut g = c.generators().to_vec();
            g.sort();
            g
        })
        .collect();
    pieces.sort();
    assert_eq!(pieces, vec![vec![vec![1, 0], vec![1, 1]], vec![vec![1, 1], vec![1, 2]]]);
    let halves = half_open_decompose(&triangulate(&cone).unwrap()).unwrap();
    assert_eq!(halves.iter().filter(|h| h.open_flags().iter().any(|&o| o)).count(), 1);
}

#[test]
fn fundamental_domains() {
    let dom = |gens: Vec<Vec<i64>>| {
        let n = gens.len();
        let mut d = fundamental_domain(&HalfOpenSimplicialCone::new(2, gens, vec![false; n]).unwrap());
        d.sort();
        d
    };
    assert_eq!(dom(vec![vec![1, 0], vec![0, 1]]), vec![vec![0, 0]]);
    assert_eq!(dom(vec![vec![2, 0], vec![0, 2]]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    let open_ray = HalfOpenSimplicialCone::new(1, vec![vec![1]], vec![true]).unwrap();
    assert_eq!(fundamental_domain(&open_ray), vec![vec![1]]);
}

#[test]
fn expansion_of_an_index_two_cone() {
    let cone = RationalCone::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
    let g = Grading::new(vec![1, 0]);
    let f = chowforge::cone_engine::expand_sum(&cone_rational_pieces(&cone).unwrap(), &g, 2).unwrap();
    let mut support: Vec<Vec<i64>> = f.iter().map(|(p, _)| p.clone()).collect();
    support.sort();
    let want = vec![[0, 0], [1, 0], [1, 1], [1, 2], [2, 0], [2, 1], [2, 2], [2, 3], [2, 4]];
    assert_eq!(support, want.iter().map(|p| p.to_vec()).collect::<Vec<_>>());
    assert_eq!(cone_lattice_points(&cone, &g, 2).unwrap().len(), 9);
    assert!(f.iter().all(|(_, c)| *c == BigInt::from(1)));
}

#[test]
fn rejects_cones_containing_lines() {
    assert!(RationalCone::new(2, vec![vec![1, 0], vec![-1, 0]]).is_err());
    assert!(RationalCone::new(1, vec![vec![0]]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn half_open_pieces_partition_the_cone(cone in cone_strategy()) {
        let pieces = half_open_decompose(&triangulate(&cone).unwrap()).unwrap();
        let psi = cone.positive_functional();
        for x in common::window_points(cone.generators(), &psi, 6) {
            let hits = pieces.iter().filter(|p| p.contains(&x)).count();
            let inside = common::in_cone(cone.generators(), &x);
            prop_assert_eq!(hits, usize::from(inside), "{:?} at {:?}", cone.generators(), x);
            prop_assert_eq!(cone.contains(&x), inside);
        }
    }

    #[test]
    fn fundamental_domain_has_index_many_points(cone in cone_strategy()) {
        for simplex in triangulate(&cone).unwrap() {
            let c = HalfOpenSimplicialCone::closed(&simplex).unwrap();
            let dom = fundamental_domain(&c);
            prop_assert_eq!(BigInt::from(dom.len()), lattice_index(simplex.generators()));
            prop_assert!(dom.iter().all(|x| c.contains(x)));
        }
    }

    #[test]
    fn rational_and_enumerated_series_agree(cone in cone_strategy()) {
        let g = Grading::new(cone.positive_functional());
        let expanded = chowforge::cone_engine::expand_sum(&cone_rational_pieces(&cone).unwrap(), &g, 8).unwrap();
        let points = cone_lattice_points(&cone, &g, 8).unwrap();
        prop_assert_eq!(expanded.len(), points.len());
        prop_assert!(points.iter().all(|p| expanded.get(p) == BigInt::from(1)));
        prop_assert_eq!(expanded, cone_truncation(&cone, &g, 8).unwrap());
    }
}
