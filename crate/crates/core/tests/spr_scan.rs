mod common;

use mulrf::oracle::neighborhood_naive_check;
use mulrf::rf::rf_multree_supertree;
use mulrf::spr::{apply_move, distinct_neighbors, scan_cut_edge, scan_cut_edge_traced, spr_search};
use mulrf::{MulTree, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn scan_matches_recomputation_per_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let n = rng.gen_range(4..=10);
        let s = common::random_tree(n, &mut rng);
        let t = common::random_multree(n, 3, 3, &mut rng);
        for (u, v) in s.edges() {
            for (x, y) in [(u, v), (v, u)] {
                if s.is_leaf(x) {
                    continue;
                }
                for (mv, rf) in scan_cut_edge(&s, &t, x, y).unwrap() {
                    let moved = apply_move(&s, &mv).unwrap();
                    assert_eq!(rf, rf_multree_supertree(&t, &moved).unwrap());
                }
            }
        }
    }
}

#[test]
fn steps_touch_few_vertices_and_move_by_even_amounts() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..60 {
        let n = rng.gen_range(5..=12);
        let s = common::random_tree(n, &mut rng);
        let t = common::random_multree(n, 2, 3, &mut rng);
        for (u, v) in s.edges() {
            if s.is_leaf(u) {
                continue;
            }
            let steps = scan_cut_edge_traced(&s, &t, u, v).unwrap();
            for w in steps.windows(2) {
                let (a, b) = (w[0].rf as i64, w[1].rf as i64);
                assert!(b.abs_diff(a) % 2 == 0);
                assert_eq!(b - a, 2 * (w[1].lost as i64 - w[1].gained as i64));
                assert!(w[1].touched <= 4 && w[1].gained <= 4 && w[1].lost <= 4);
            }
        }
    }
}

#[test]
fn labels_on_one_side_give_constant_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let s = common::random_tree(9, &mut rng);
    // Cut a pendant edge whose leaf the gene tree does not carry.
    let leaf = s.leaves().next().unwrap();
    let x = s.neighbors(leaf)[0];
    let taxon = s.label(leaf).unwrap();
    let others: Vec<_> = s.taxa().iter().filter(|&t| t != taxon).collect();
    let t = MulTree::new(mulrf::tree::random_binary_tree(&others, &mut rng).unwrap());
    let base = rf_multree_supertree(&t, &s).unwrap();
    let row = scan_cut_edge(&s, &t, x, leaf).unwrap();
    assert!(!row.is_empty());
    assert!(row.iter().all(|&(_, rf)| rf == base));
}

#[test]
fn whole_neighborhood_matches_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..25 {
        let n = rng.gen_range(4..=10);
        let k = rng.gen_range(1..=5);
        let p = common::random_profile(n, k, &mut rng);
        let s = common::random_tree(n, &mut rng);
        let report = neighborhood_naive_check(&p, &s).unwrap();
        assert!(report.agree, "{}", report.description);
    }
}

#[test]
fn single_quartet_profile_best_neighbor_scores_two() {
    let p = Profile::parse("((a,b),(c,d));").unwrap();
    let s = p.trees()[0].tree().clone();
    let best = spr_search(&p, &s).unwrap();
    assert_eq!(best.current_score, 0);
    assert_eq!(best.best_score, 2);
    assert_eq!(distinct_neighbors(&s).unwrap().len(), 2);
}
