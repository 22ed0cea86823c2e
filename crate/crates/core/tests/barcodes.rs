mod oracles;

use pers_core::category::F2Vec;
use pers_core::filtered::vietoris_rips;
use pers_core::invariants::{barcode, homology, pi0};
use pers_core::persist::PersistentObject;
use pers_core::sample::{random_filtered_complex, random_points};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn h_barcode(k: &pers_core::filtered::FilteredComplex, dim: usize) -> pers_core::invariants::Barcode {
    barcode(&homology(&k.to_persistent().unwrap(), dim).unwrap()).unwrap()
}

#[test]
fn four_cycle_has_one_loop() {
    let k = pers_core::filtered::FilteredComplex::from_grades(
        1,
        [
            (vec![0], 0), (vec![1], 0), (vec![2], 0), (vec![3], 0),
            (vec![0, 1], 1), (vec![1, 2], 1), (vec![2, 3], 1), (vec![0, 3], 1),
            (vec![0, 2], 2), (vec![1, 3], 2),
            (vec![0, 1, 2], 2), (vec![0, 1, 3], 2), (vec![0, 2, 3], 2), (vec![1, 2, 3], 2),
        ]
        .into_iter()
        .map(|(s, g)| (s, pers_core::Grade::from_ints(&[g]))),
    )
    .unwrap();
    assert_eq!(h_barcode(&k, 1).to_string(), "{[1, 2)}");
    assert_eq!(h_barcode(&k, 1), oracles::reduction_barcode(&k, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_formula_matches_column_reduction(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_filtered_complex(&mut rng, n, 2, 1).unwrap();
        for dim in 0..3 {
            prop_assert_eq!(h_barcode(&k, dim), oracles::reduction_barcode(&k, dim));
        }
        let rips = vietoris_rips(&random_points(&mut rng, n, 2, 4).unwrap(), 2).unwrap();
        for dim in 0..2 {
            prop_assert_eq!(h_barcode(&rips, dim), oracles::reduction_barcode(&rips, dim));
        }
    }

    #[test]
    fn components_match_bfs_and_degree_zero_rank(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_filtered_complex(&mut rng, n, 2, 1).unwrap().to_persistent().unwrap();
        let p = pi0(&x).unwrap();
        let h0: PersistentObject<F2Vec> = homology(&x, 0).unwrap();
        for (i, k) in x.objects().iter().enumerate() {
            prop_assert_eq!(p.objects()[i], oracles::bfs_components(k));
            prop_assert_eq!(p.objects()[i], h0.objects()[i]);
        }
    }
}
