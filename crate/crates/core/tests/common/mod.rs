#![allow(dead_code)]

use mulrf::tree::random_binary_tree;
use mulrf::{MulTree, Profile, TaxonId, TaxonTable, UnrootedTree};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn table(n: usize) -> TaxonTable {
    TaxonTable::from_names((0..n).map(|i| format!("t{i}")))
}

pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> UnrootedTree {
    let ids: Vec<TaxonId> = (0..n as u32).map(TaxonId).collect();
    random_binary_tree(&ids, rng).unwrap()
}

/// A random binary mul-tree over a random subset of `0..n`, with up to
/// `max_dup` labels carrying two or three copies.
pub fn random_multree<R: Rng>(n: usize, max_dup: usize, max_copies: usize, rng: &mut R) -> MulTree {
    let mut ids: Vec<TaxonId> = (0..n as u32).map(TaxonId).collect();
    ids.shuffle(rng);
    let keep = rng.gen_range(1..=n);
    let mut labels: Vec<TaxonId> = ids[..keep].to_vec();
    let dups = rng.gen_range(0..=max_dup.min(keep));
    for &t in &ids[..dups] {
        for _ in 1..rng.gen_range(2..=max_copies.max(2)) {
            labels.push(t);
        }
    }
    MulTree::new(random_binary_tree(&labels, rng).unwrap())
}

pub fn random_profile<R: Rng>(n: usize, k: usize, rng: &mut R) -> Profile {
    let trees = (0..k).map(|_| random_multree(n, 2, 3, rng)).collect();
    Profile::new(table(n), trees).unwrap()
}
