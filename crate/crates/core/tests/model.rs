mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flexcycle::grid::{generate_grid, GridSpec, PropertyPattern};
use flexcycle::model::{build_graph, build_graph_with, classify_members, cycle_rank, member_weight, WeightVariant};
use flexcycle::Error;

use support::{cycle_space_rank_brute, random_connected_graph};

#[test]
fn betti_number_matches_enumerated_cycle_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let nodes = rng.random_range(3..=7);
        let members = rng.random_range(nodes - 1..=12);
        let g = random_connected_graph(&mut rng, nodes, members, true);
        if g.member_count() > 12 {
            continue;
        }
        assert_eq!(cycle_rank(&g), cycle_space_rank_brute(&g));
    }
}

#[test]
fn grid_betti_numbers() {
    for (s, b) in [(1, 1), (2, 3), (3, 4), (5, 5)] {
        let g = build_graph(&generate_grid(&GridSpec::new(s, b)).unwrap()).unwrap();
        assert_eq!(cycle_rank(&g), s * b);
    }
}

#[test]
fn weight_is_monotone_in_section_and_length() {
    let light = flexcycle::grid::light_section();
    let heavy = flexcycle::grid::heavy_section();
    for v in [WeightVariant::Sum, WeightVariant::SqrtSum] {
        assert!(member_weight(&heavy, 3.0, v).unwrap() > member_weight(&light, 3.0, v).unwrap());
        assert!(member_weight(&heavy, 3.0, v).unwrap() > member_weight(&heavy, 6.0, v).unwrap());
    }
    assert!(matches!(member_weight(&heavy, 0.0, WeightVariant::Sum), Err(Error::Domain(_))));
}

#[test]
fn admissible_set_grows_with_alpha() {
    let m = generate_grid(&GridSpec::new(3, 4).with_pattern(PropertyPattern::WeakBeams)).unwrap();
    let g = build_graph_with(&m, WeightVariant::Sum).unwrap();
    let mut prev = 0;
    for alpha in 1..=8 {
        let p = classify_members(&g, alpha).unwrap();
        assert_eq!(p.admissible.len() + p.inadmissible.len(), g.member_count());
        assert!(p.admissible.len() >= prev);
        prev = p.admissible.len();
    }
    assert_eq!(prev, g.member_count());
    assert!(classify_members(&g, 0).is_err());
}

#[test]
fn homogeneous_frame_is_all_admissible() {
    let g = build_graph(&generate_grid(&GridSpec::new(2, 2)).unwrap()).unwrap();
    assert!(classify_members(&g, 1).unwrap().inadmissible.is_empty());
}
