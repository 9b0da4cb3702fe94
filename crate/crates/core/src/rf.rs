//! Robinson-Foulds distance kernels.
//!
//! Two routes are provided. The split route compares canonical split sets
//! directly. The rooted route roots both trees at the same taxon and counts
//! unmatched clusters of the reference through an LCA mapping, touching
//! each vertex once. The search engine builds on the rooted route; the
//! split route is the reference it is checked against.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lca::LcaIndex;
use crate::profile::Profile;
use crate::taxa::TaxonId;
use crate::tree::{MulTree, RootedTree, UnrootedTree, VertexId};

/// Split-based RF distance. `t1`'s taxa must be contained in `t2`'s; `t2`
/// is restricted to them first.
pub fn rf_unrooted(t1: &UnrootedTree, t2: &UnrootedTree) -> Result<usize> {
    if !t1.is_singly_labeled() || !t2.is_singly_labeled() {
        return Err(Error::NotSinglyLabeled);
    }
    let taxa = t1.taxa();
    let other = t2.taxa();
    if !taxa.is_subset(&other) {
        return Err(Error::LabelsNotContained);
    }
    let restricted;
    let t2 = if taxa == other {
        t2
    } else {
        restricted = t2.restrict_to_taxa(&taxa)?;
        &restricted
    };
    let a = t1.splits()?;
    let b = t2.splits()?;
    Ok(a.symmetric_difference(&b).count())
}

/// Replaces each leaf `a` of `s` whose taxon occurs `k > 1` times in `t`
/// by an internal vertex carrying `k` leaves labeled `a`.
pub fn extend_supertree(s: &UnrootedTree, t: &MulTree) -> Result<MulTree> {
    if !s.is_singly_labeled() {
        return Err(Error::NotSinglyLabeled);
    }
    if !t.label_set().is_subset(&s.taxa()) {
        return Err(Error::LabelsNotContained);
    }
    let counts = t.tree().label_counts();
    let mut adj: Vec<Vec<VertexId>> = (0..s.num_vertices()).map(|v| s.neighbors(v).to_vec()).collect();
    let mut labels = s.labels().to_vec();
    for v in s.leaves() {
        let taxon = s.label(v).unwrap();
        let k = counts.get(&taxon).copied().unwrap_or(0);
        if k > 1 {
            labels[v] = None;
            for _ in 0..k {
                let c = adj.len();
                adj.push(vec![v]);
                labels.push(Some(taxon));
                adj[v].push(c);
            }
        }
    }
    UnrootedTree::normalize(adj, labels).map(MulTree::new)
}

/// A pair of mutually consistent full differentiations.
///
/// Both trees are relabeled into a fresh local label space where every
/// leaf is unique; `copies[id]` gives the original taxon and the 1-based
/// copy index behind local label `id`.
#[derive(Clone, Debug)]
pub struct Differentiation {
    pub gene: UnrootedTree,
    pub species: UnrootedTree,
    pub copies: Vec<(TaxonId, usize)>,
}

impl Differentiation {
    /// Local label of copy `copy` (1-based) of `taxon`.
    pub fn local(&self, taxon: TaxonId, copy: usize) -> Option<TaxonId> {
        self.copies
            .iter()
            .position(|&c| c == (taxon, copy))
            .map(|i| TaxonId(i as u32))
    }
}

/// Copy index of every leaf, numbering copies of a label in depth-first
/// order from the lowest-id vertex.
pub(crate) fn copy_indices(tree: &UnrootedTree) -> Vec<usize> {
    let (order, _) = tree.dfs_order(0);
    let mut seen: HashMap<TaxonId, usize> = HashMap::new();
    let mut out = vec![0; tree.num_vertices()];
    for v in order {
        if let Some(t) = tree.label(v) {
            let c = seen.entry(t).or_insert(0);
            *c += 1;
            out[v] = *c;
        }
    }
    out
}

/// Numbers the copies of every label `a_1, a_2, ...` in both trees.
pub fn differentiate(t: &MulTree, s_ext: &MulTree) -> Result<Differentiation> {
    let tc = t.tree().label_counts();
    let sc = s_ext.tree().label_counts();
    for (&taxon, &k) in &tc {
        if let Some(&m) = sc.get(&taxon) {
            if m != k {
                return Err(Error::MultiplicityMismatch {
                    taxon,
                    left: k,
                    right: m,
                });
            }
        }
    }
    let mut all: BTreeMap<TaxonId, usize> = sc.clone();
    for (&taxon, &k) in &tc {
        all.entry(taxon).or_insert(k);
    }
    let mut copies = Vec::new();
    let mut local: HashMap<(TaxonId, usize), TaxonId> = HashMap::new();
    for (&taxon, &k) in &all {
        for c in 1..=k {
            local.insert((taxon, c), TaxonId(copies.len() as u32));
            copies.push((taxon, c));
        }
    }
    let relabel = |tree: &UnrootedTree| {
        let idx = copy_indices(tree);
        tree.relabel(|v, taxon| local[&(taxon, idx[v])])
    };
    Ok(Differentiation {
        gene: relabel(t.tree()),
        species: relabel(s_ext.tree()),
        copies,
    })
}

/// Image of every vertex of a rooted tree `S` in a reference tree `T`:
/// the LCA in `T` of the `T`-leaves below it, or `None` when there are none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcaMapping {
    pub map: Vec<Option<VertexId>>,
}

/// Per-vertex bookkeeping for the rooted distance.
#[derive(Clone, Debug)]
pub struct VertexFunction {
    /// `f[u]` for each internal vertex `u` of the reference (0 elsewhere).
    pub f: Vec<u32>,
    /// Number of internal reference vertices with `f = 0`.
    pub fzero_count: usize,
    /// `|Ĉ(v)|` for every vertex `v` of the other tree.
    pub restricted_sizes: Vec<usize>,
    /// Non-root vertices of the other tree with at least two children that
    /// see reference leaves; equals the number of clusters of its
    /// restriction to the reference's leaf set.
    pub branching: usize,
}

fn leaf_index(tree: &RootedTree) -> Result<HashMap<TaxonId, VertexId>> {
    let mut out = HashMap::new();
    for v in tree.leaves() {
        if let Some(t) = tree.label(v) {
            if out.insert(t, v).is_some() {
                return Err(Error::NotSinglyLabeled);
            }
        }
    }
    Ok(out)
}

/// Bottom-up LCA mapping from `sub` into `reference`.
pub fn lca_mapping(sub: &RootedTree, reference: &RootedTree, idx: &LcaIndex) -> LcaMapping {
    let leaves: HashMap<TaxonId, VertexId> = reference
        .leaves()
        .filter_map(|v| reference.label(v).map(|t| (t, v)))
        .collect();
    let mut map = vec![None; sub.num_vertices()];
    for v in sub.post_order() {
        map[v] = if sub.children(v).is_empty() {
            sub.label(v).and_then(|t| leaves.get(&t).copied())
        } else {
            sub.children(v).iter().fold(None, |acc, &c| idx.lca_opt(acc, map[c]))
        };
    }
    LcaMapping { map }
}

/// Vertex function of `sub` relative to `reference`, counting for each
/// internal `u` the vertices mapped onto it whose restricted cluster has
/// the same size as `u`'s cluster.
pub fn vertex_function(sub: &RootedTree, reference: &RootedTree, mapping: &LcaMapping) -> VertexFunction {
    let mut csize = vec![0usize; reference.num_vertices()];
    for u in reference.post_order() {
        csize[u] = if reference.children(u).is_empty() {
            1
        } else {
            reference.children(u).iter().map(|&c| csize[c]).sum()
        };
    }
    let mut sizes = vec![0usize; sub.num_vertices()];
    let mut branching = 0;
    let mut f = vec![0u32; reference.num_vertices()];
    for v in sub.post_order() {
        if sub.children(v).is_empty() {
            sizes[v] = usize::from(mapping.map[v].is_some());
            continue;
        }
        sizes[v] = sub.children(v).iter().map(|&c| sizes[c]).sum();
        if v == sub.root() {
            continue;
        }
        if sub.children(v).iter().filter(|&&c| sizes[c] > 0).count() >= 2 {
            branching += 1;
        }
        if let Some(u) = mapping.map[v] {
            if reference.is_internal(u) && csize[u] == sizes[v] {
                f[u] += 1;
            }
        }
    }
    let fzero_count = reference.internal_vertices().filter(|&u| f[u] == 0).count();
    VertexFunction {
        f,
        fzero_count,
        restricted_sizes: sizes,
        branching,
    }
}

/// Rooted RF distance between `reference` and `sub` restricted to the
/// reference's leaves, both rooted at the same taxon.
///
/// Evaluates `|H(S|L(T))| + 2|F| - |I(T)|`. When the restriction of `sub`
/// is binary its cluster count is `|L(T)| - 2`, giving the familiar
/// `|L(T)| - |I(T)| + 2|F| - 2`; counting clusters directly also covers
/// multifurcating restrictions such as extended supertrees with three or
/// more copies of a label.
pub fn rf_rooted(reference: &RootedTree, sub: &RootedTree) -> Result<usize> {
    let ref_leaves = leaf_index(reference)?;
    let sub_leaves = leaf_index(sub)?;
    if !ref_leaves.keys().all(|t| sub_leaves.contains_key(t)) {
        return Err(Error::LabelsNotContained);
    }
    let root_taxon = |rt: &RootedTree| {
        rt.children(rt.root())
            .iter()
            .find(|&&c| rt.children(c).is_empty())
            .and_then(|&c| rt.label(c))
    };
    match (root_taxon(reference), root_taxon(sub)) {
        (Some(a), Some(b)) if a == b => {}
        (Some(a), _) => return Err(Error::MissingTaxon(a)),
        (None, _) => return Err(Error::InvalidTree("reference is not rooted at a taxon".into())),
    }
    let idx = LcaIndex::new(reference);
    let mapping = lca_mapping(sub, reference, &idx);
    let vf = vertex_function(sub, reference, &mapping);
    let internal = reference.internal_vertices().count();
    let value = vf.branching as i64 + 2 * vf.fzero_count as i64 - internal as i64;
    debug_assert!(value >= 0, "negative rooted distance");
    Ok(value.max(0) as usize)
}

/// RF distance between a mul-tree and a singly-labeled supertree: restrict,
/// extend, differentiate once and evaluate the rooted formula rooted at
/// copy 1 of the smallest shared taxon.
pub fn rf_multree_supertree(t: &MulTree, s: &UnrootedTree) -> Result<usize> {
    if !s.is_singly_labeled() {
        return Err(Error::NotSinglyLabeled);
    }
    let labels = t.label_set();
    if !labels.is_subset(&s.taxa()) {
        return Err(Error::LabelsNotContained);
    }
    if t.num_leaves() < 4 {
        return Ok(0);
    }
    let restricted = s.restrict_to_taxa(&labels)?;
    let ext = extend_supertree(&restricted, t)?;
    let d = differentiate(t, &ext)?;
    let root = d.local(labels.first().unwrap(), 1).unwrap();
    let gene = d.gene.root_at_taxon(root)?;
    let species = d.species.root_at_taxon(root)?;
    rf_rooted(&gene, &species)
}

/// Profile score with its per-tree breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileDistance {
    pub total: usize,
    pub per_tree: Vec<usize>,
}

/// `RF(P, S)`: the sum of per-tree distances.
pub fn rf_profile(p: &Profile, s: &UnrootedTree) -> Result<ProfileDistance> {
    let per_tree = p
        .trees()
        .par_iter()
        .map(|t| rf_multree_supertree(t, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfileDistance {
        total: per_tree.iter().sum(),
        per_tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_single;
    use crate::taxa::TaxonTable;

    fn tree(s: &str, taxa: &mut TaxonTable) -> UnrootedTree {
        parse_single(s, taxa).unwrap().into_tree()
    }

    #[test]
    fn unrooted_examples() {
        let mut taxa = TaxonTable::new();
        let a = tree("(a,b,(c,d));", &mut taxa);
        let b = tree("(a,c,(b,d));", &mut taxa);
        assert_eq!(rf_unrooted(&a, &a).unwrap(), 0);
        assert_eq!(rf_unrooted(&a, &b).unwrap(), 2);
        let big = tree("((a,b),e,(c,d));", &mut taxa);
        assert_eq!(rf_unrooted(&a, &big).unwrap(), 0);
        assert_eq!(rf_unrooted(&big, &a), Err(Error::LabelsNotContained));
    }

    #[test]
    fn extension_example() {
        let mut taxa = TaxonTable::new();
        let s = tree("(a,b,c);", &mut taxa);
        let t = MulTree::new(tree("((a,b),(a,c));", &mut taxa));
        let ext = extend_supertree(&s, &t).unwrap();
        let expect = tree("((a,a),b,c);", &mut taxa);
        assert_eq!(ext.num_leaves(), 4);
        assert_eq!(ext.multiplicity(taxa.get("a").unwrap()), 2);
        let d1 = differentiate(&MulTree::new(expect), &ext).unwrap();
        assert!(d1.gene.is_isomorphic(&d1.species).unwrap());
        let single = MulTree::new(tree("(a,b,c);", &mut taxa));
        assert_eq!(extend_supertree(&s, &single).unwrap().tree(), &s);
    }

    #[test]
    fn multiplicity_mismatch_is_reported() {
        let mut taxa = TaxonTable::new();
        let t = MulTree::new(tree("((a,b),(a,c));", &mut taxa));
        let s = MulTree::new(tree("(a,b,c);", &mut taxa));
        assert!(matches!(
            differentiate(&t, &s),
            Err(Error::MultiplicityMismatch { left: 2, right: 1, .. })
        ));
    }

    #[test]
    fn multree_example_distance() {
        let mut taxa = TaxonTable::new();
        let t = MulTree::new(tree("((a,b),(a,c));", &mut taxa));
        let s = tree("(a,b,c);", &mut taxa);
        assert_eq!(rf_multree_supertree(&t, &s).unwrap(), 2);
        let same = MulTree::new(s.clone());
        assert_eq!(rf_multree_supertree(&same, &s).unwrap(), 0);
    }

    #[test]
    fn mapping_sends_foreign_subtrees_to_null() {
        let mut taxa = TaxonTable::new();
        let s = tree("((a,b),c,(d,e));", &mut taxa);
        let t = tree("(c,d,e);", &mut taxa);
        let c = taxa.get("c").unwrap();
        let ss = s.root_at_taxon(c).unwrap();
        let tt = t.root_at_taxon(c).unwrap();
        let idx = LcaIndex::new(&tt);
        let m = lca_mapping(&ss, &tt, &idx);
        let a = s.leaf_of(taxa.get("a").unwrap()).unwrap();
        let ab = s.neighbors(a)[0];
        assert_eq!(m.map[a], None);
        assert_eq!(m.map[ab], None);
        let d = s.leaf_of(taxa.get("d").unwrap()).unwrap();
        assert_eq!(m.map[d], Some(t.leaf_of(taxa.get("d").unwrap()).unwrap()));
        assert_eq!(rf_rooted(&tt, &ss).unwrap(), 0);
    }

    #[test]
    fn rooted_rejects_mismatched_roots() {
        let mut taxa = TaxonTable::new();
        let s = tree("((a,b),c,(d,e));", &mut taxa);
        let ss = s.root_at_taxon(taxa.get("a").unwrap()).unwrap();
        let tt = s.root_at_taxon(taxa.get("b").unwrap()).unwrap();
        assert!(rf_rooted(&tt, &ss).is_err());
    }

    #[test]
    fn star_reference_against_binary() {
        let mut taxa = TaxonTable::new();
        let star = tree("(a,b,c,d,e);", &mut taxa);
        let bin = tree("((a,b),c,(d,e));", &mut taxa);
        let a = taxa.get("a").unwrap();
        let r = rf_rooted(&star.root_at_taxon(a).unwrap(), &bin.root_at_taxon(a).unwrap()).unwrap();
        assert_eq!(r, rf_unrooted(&star, &bin).unwrap());
        assert_eq!(r, 2);
    }
}
