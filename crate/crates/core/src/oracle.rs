//! Brute-force reference computations for checking the fast paths.
//!
//! Everything here is exponential or quadratic on purpose and guarded by
//! size limits.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::rf::{copy_indices, extend_supertree, rf_profile, rf_unrooted};
use crate::spr::{apply_move, score_moves, ProfileIndex};
use crate::taxa::TaxonId;
use crate::tree::{MulTree, TreeGrower, UnrootedTree, VertexId};

/// Outcome of comparing an engine result with its oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub description: String,
    pub oracle: Vec<usize>,
    pub engine: Vec<usize>,
    pub agree: bool,
}

const MAX_COPIES: usize = 3;
const MAX_DUPLICATED_LEAVES: usize = 10;

/// RF distance between two mul-trees with identical label multisets,
/// minimized over every consistent pair of full differentiations. Returns
/// the minimum and the set of all values.
pub fn rf_mul_pair_exhaustive(t1: &MulTree, t2: &MulTree) -> Result<(usize, BTreeSet<usize>)> {
    let c1 = t1.tree().label_counts();
    let c2 = t2.tree().label_counts();
    for (&taxon, &k) in c1.iter().chain(c2.iter()) {
        let (l, r) = (
            c1.get(&taxon).copied().unwrap_or(0),
            c2.get(&taxon).copied().unwrap_or(0),
        );
        if l != r {
            return Err(Error::MultiplicityMismatch {
                taxon,
                left: l,
                right: r,
            });
        }
        if k > MAX_COPIES {
            return Err(Error::TooLarge(format!("{k} copies of {taxon}")));
        }
    }
    let multi: Vec<(TaxonId, usize)> = c1.iter().filter(|(_, &k)| k > 1).map(|(&t, &k)| (t, k)).collect();
    let duplicated: usize = multi.iter().map(|(_, k)| k).sum();
    if duplicated > MAX_DUPLICATED_LEAVES {
        return Err(Error::TooLarge(format!("{duplicated} duplicated leaves")));
    }

    // Local label per (taxon, copy); copies of t2 are fixed, those of t1
    // are permuted per taxon.
    let mut local: BTreeMap<(TaxonId, usize), TaxonId> = BTreeMap::new();
    for (&taxon, &k) in &c1 {
        for c in 1..=k {
            let id = TaxonId(local.len() as u32);
            local.insert((taxon, c), id);
        }
    }
    let i2 = copy_indices(t2.tree());
    let fixed = t2.tree().relabel(|v, taxon| local[&(taxon, i2[v])]);
    let i1 = copy_indices(t1.tree());

    let perms: Vec<Vec<Vec<usize>>> = multi.iter().map(|&(_, k)| permutations(k)).collect();
    let mut values = BTreeSet::new();
    let mut choice = vec![0usize; multi.len()];
    loop {
        let moved = t1.tree().relabel(|v, taxon| {
            let c = i1[v];
            let c = match multi.iter().position(|&(t, _)| t == taxon) {
                Some(j) => perms[j][choice[j]][c - 1] + 1,
                None => c,
            };
            local[&(taxon, c)]
        });
        values.insert(rf_unrooted(&moved, &fixed)?);
        // Odometer over the per-label permutations.
        let mut j = 0;
        while j < choice.len() {
            choice[j] += 1;
            if choice[j] < perms[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
        if j == choice.len() {
            break;
        }
    }
    Ok((*values.iter().next().unwrap(), values))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// All consistent differentiations of `t` against the extension of `s`
/// restricted to `t`'s labels.
pub fn rf_differentiation_exhaustive(t: &MulTree, s: &UnrootedTree) -> Result<(usize, BTreeSet<usize>)> {
    let restricted = s.restrict_to_taxa(&t.label_set())?;
    let ext = extend_supertree(&restricted, t)?;
    rf_mul_pair_exhaustive(t, &ext)
}

/// Every unrooted binary tree on `taxa`, each exactly once.
pub fn enumerate_binary_supertrees(taxa: &[TaxonId]) -> Result<Vec<UnrootedTree>> {
    if taxa.len() < 3 || taxa.len() > 8 {
        return Err(Error::TooLarge(format!(
            "enumeration supports 3 to 8 taxa, got {}",
            taxa.len()
        )));
    }
    let mut out = Vec::new();
    grow(TreeGrower::new(&taxa[..3])?, &taxa[3..], &mut out);
    Ok(out)
}

fn grow(g: TreeGrower, rest: &[TaxonId], out: &mut Vec<UnrootedTree>) {
    match rest.split_first() {
        None => out.push(g.build()),
        Some((&t, tail)) => {
            for e in 0..g.edges().len() {
                let mut h = g.clone();
                h.insert_leaf(e, t);
                grow(h, tail, out);
            }
        }
    }
}

/// Global optimum of the profile score over all binary supertrees, with
/// every tree attaining it.
pub fn exhaustive_optimum(p: &Profile) -> Result<(usize, Vec<UnrootedTree>)> {
    let taxa: Vec<TaxonId> = p.label_universe().iter().collect();
    if taxa.len() > 7 {
        return Err(Error::TooLarge(format!("{} taxa", taxa.len())));
    }
    let trees = enumerate_binary_supertrees(&taxa)?;
    let scores: Vec<usize> = trees
        .par_iter()
        .map(|s| rf_profile(p, s).map(|d| d.total))
        .collect::<Result<_>>()?;
    let best = *scores.iter().min().unwrap();
    let optimal = trees
        .into_iter()
        .zip(scores)
        .filter(|(_, sc)| *sc == best)
        .map(|(t, _)| t)
        .collect();
    Ok((best, optimal))
}

/// Recomputes the profile score of every SPR move from scratch and
/// compares with the incremental scan.
pub fn neighborhood_naive_check(p: &Profile, s: &UnrootedTree) -> Result<OracleReport> {
    let index = ProfileIndex::new(p);
    let ms = score_moves(&index, s)?;
    let oracle: Vec<usize> = ms
        .moves
        .par_iter()
        .map(|mv| {
            let t = apply_move(s, mv)?;
            rf_profile(p, &t).map(|d| d.total)
        })
        .collect::<Result<_>>()?;
    let agree = oracle == ms.scores;
    Ok(OracleReport {
        description: format!(
            "{} moves on a {}-leaf supertree against {} trees",
            ms.moves.len(),
            s.num_leaves(),
            p.len()
        ),
        oracle,
        engine: ms.scores,
        agree,
    })
}

/// Labeled isomorphism of mul-trees through canonical forms rooted at the
/// tree center.
pub fn multree_isomorphic(t1: &MulTree, t2: &MulTree) -> bool {
    t1.num_leaves() == t2.num_leaves()
        && t1.tree().num_vertices() == t2.tree().num_vertices()
        && canonical_form(t1.tree()) == canonical_form(t2.tree())
}

/// Center-rooted canonical string of a labeled tree. A bicentral tree is
/// rooted on its central edge with the two halves sorted.
pub fn canonical_form(t: &UnrootedTree) -> String {
    let n = t.num_vertices();
    if n == 1 {
        return format!("{}", t.label(0).unwrap().0);
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<VertexId> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        for &v in &layer {
            degree[v] = 0;
        }
        let mut next = Vec::new();
        for &v in &layer {
            for &u in t.neighbors(v) {
                if degree[u] > 1 {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    match layer.as_slice() {
        [c] => encode(t, *c, usize::MAX),
        [a, b] => {
            let mut halves = [encode(t, *a, *b), encode(t, *b, *a)];
            halves.sort();
            format!("[{}|{}]", halves[0], halves[1])
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

fn encode(t: &UnrootedTree, v: VertexId, parent: VertexId) -> String {
    if let Some(l) = t.label(v) {
        return l.0.to_string();
    }
    let mut parts: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| encode(t, u, v))
        .collect();
    parts.sort();
    format!("({})", parts.join(","))
}

/// Splits of a mul-tree as pairs of sorted label lists, the smaller list
/// first.
pub fn multree_splits(t: &MulTree) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let tree = t.tree();
    let mut out = BTreeSet::new();
    for (u, v) in tree.internal_edges() {
        let mut a = side_labels(tree, u, v);
        let mut b = side_labels(tree, v, u);
        a.sort_unstable();
        b.sort_unstable();
        out.insert(if a <= b { (a, b) } else { (b, a) });
    }
    out
}

fn side_labels(t: &UnrootedTree, v: VertexId, away: VertexId) -> Vec<u32> {
    let mut out = Vec::new();
    let mut stack = vec![(v, away)];
    while let Some((w, p)) = stack.pop() {
        if let Some(l) = t.label(w) {
            out.push(l.0);
        }
        for &u in t.neighbors(w) {
            if u != p {
                stack.push((u, w));
            }
        }
    }
    out
}

/// Rooted binary trees `T` and `T'` on `k + 2` leaves whose cluster sets
/// are disjoint, encoded as unrooted trees by hanging the root from an
/// extra leaf (taxon `k + 2`). `T` is balanced over taxa `0..k+2`; `T'`
/// sends the first leaf of every cherry of `T` to its left root subtree
/// and the second to its right.
pub fn doubling_fixture(k: usize) -> Result<(UnrootedTree, UnrootedTree)> {
    let leaves = k + 2;
    if k < 2 || !leaves.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "k + 2 must be a power of two with k >= 2, got k = {k}"
        )));
    }
    let ids: Vec<TaxonId> = (0..leaves as u32).map(TaxonId).collect();
    let first: Vec<TaxonId> = ids.iter().copied().step_by(2).collect();
    let second: Vec<TaxonId> = ids.iter().copied().skip(1).step_by(2).collect();
    let extra = TaxonId(leaves as u32);
    let t = rooted_balanced(&[ids.as_slice()], extra);
    let t2 = rooted_balanced(&[first.as_slice(), second.as_slice()], extra);
    Ok((t?, t2?))
}

/// Joins balanced subtrees over each group under one root, which hangs
/// from a leaf labeled `root`.
fn rooted_balanced(groups: &[&[TaxonId]], root: TaxonId) -> Result<UnrootedTree> {
    let mut parent: Vec<Option<VertexId>> = Vec::new();
    let mut labels: Vec<Option<TaxonId>> = Vec::new();
    let top = push(&mut parent, &mut labels, None, None);
    let r = push(&mut parent, &mut labels, Some(top), Some(root));
    debug_assert_eq!(r, 1);
    if groups.len() == 1 {
        build_balanced(groups[0], top, &mut parent, &mut labels);
    } else {
        let hub = push(&mut parent, &mut labels, Some(top), None);
        for g in groups {
            build_balanced(g, hub, &mut parent, &mut labels);
        }
    }
    let mut adj = vec![Vec::new(); parent.len()];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[v].push(p);
            adj[p].push(v);
        }
    }
    UnrootedTree::normalize(adj, labels)
}

fn push(
    parent: &mut Vec<Option<VertexId>>,
    labels: &mut Vec<Option<TaxonId>>,
    p: Option<VertexId>,
    l: Option<TaxonId>,
) -> VertexId {
    parent.push(p);
    labels.push(l);
    parent.len() - 1
}

fn build_balanced(
    taxa: &[TaxonId],
    under: VertexId,
    parent: &mut Vec<Option<VertexId>>,
    labels: &mut Vec<Option<TaxonId>>,
) {
    if let [t] = taxa {
        push(parent, labels, Some(under), Some(*t));
        return;
    }
    let v = push(parent, labels, Some(under), None);
    let (a, b) = taxa.split_at(taxa.len() / 2);
    build_balanced(a, v, parent, labels);
    build_balanced(b, v, parent, labels);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_single;
    use crate::rf::rf_multree_supertree;
    use crate::taxa::TaxonTable;

    fn mul(s: &str, taxa: &mut TaxonTable) -> MulTree {
        parse_single(s, taxa).unwrap()
    }

    #[test]
    fn two_copy_example_is_a_singleton() {
        let mut taxa = TaxonTable::new();
        let t = mul("((a,b),(a,c));", &mut taxa);
        let s = mul("(a,b,c);", &mut taxa).into_tree();
        let (min, all) = rf_differentiation_exhaustive(&t, &s).unwrap();
        assert_eq!(min, 2);
        assert_eq!(all.into_iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(rf_multree_supertree(&t, &s).unwrap(), 2);
    }

    #[test]
    fn singly_labeled_pair_has_one_value() {
        let mut taxa = TaxonTable::new();
        let a = mul("(a,b,(c,d));", &mut taxa);
        let b = mul("(a,c,(b,d));", &mut taxa);
        let (min, all) = rf_mul_pair_exhaustive(&a, &b).unwrap();
        assert_eq!((min, all.len()), (2, 1));
    }

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(3).len(), 6);
        let set: BTreeSet<_> = permutations(3).into_iter().collect();
        assert_eq!(set.len(), 6);
    }

    #[test]
    fn too_many_copies_is_rejected() {
        let mut taxa = TaxonTable::new();
        let t = mul("((a,a),(a,(a,b)));", &mut taxa);
        assert!(matches!(rf_mul_pair_exhaustive(&t, &t), Err(Error::TooLarge(_))));
    }

    #[test]
    fn enumeration_counts() {
        for (n, count) in [(3, 1), (4, 3), (5, 15), (6, 105), (7, 945)] {
            let taxa: Vec<_> = (0..n).map(TaxonId).collect();
            let trees = enumerate_binary_supertrees(&taxa).unwrap();
            assert_eq!(trees.len(), count);
            let distinct: BTreeSet<_> = trees.iter().map(|t| t.splits().unwrap()).collect();
            assert_eq!(distinct.len(), count);
        }
    }

    #[test]
    fn two_quartets_optimum() {
        let p = Profile::parse("((a,b),(c,d));\n((a,c),(b,d));\n").unwrap();
        let (score, optimal) = exhaustive_optimum(&p).unwrap();
        assert_eq!(score, 2);
        assert_eq!(optimal.len(), 2);
    }

    #[test]
    fn canonical_form_ignores_vertex_numbering() {
        let mut taxa = TaxonTable::new();
        let a = mul("((a,b),(a,c),d);", &mut taxa);
        let b = mul("(d,(c,a),(b,a));", &mut taxa);
        let c = mul("((a,c),(a,d),b);", &mut taxa);
        assert!(multree_isomorphic(&a, &a));
        assert!(multree_isomorphic(&a, &b));
        assert!(!multree_isomorphic(&a, &c));
    }

    #[test]
    fn doubling_fixture_distances() {
        for (k, d) in [(2, 4), (6, 12), (14, 28)] {
            let (t, t2) = doubling_fixture(k).unwrap();
            assert_eq!(t.num_leaves(), k + 3);
            assert!(t.is_binary() && t2.is_binary());
            assert_eq!(rf_unrooted(&t, &t2).unwrap(), d);
        }
        assert!(doubling_fixture(4).is_err());
    }
}
