//! Unrooted and rooted leaf-labeled trees and their structural operations.
//!
//! An [`UnrootedTree`] stores plain adjacency lists. Leaves are exactly the
//! labeled vertices; every internal vertex has degree at least three. Labels
//! may repeat at the structural level, which is how multi-labeled gene trees
//! ([`MulTree`]) are carried. Operations that only make sense for
//! singly-labeled trees (splits, rooting at a taxon) check for it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::taxa::{TaxonId, TaxonSet};

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedTree {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<Option<TaxonId>>,
}

/// A gene tree in which several leaves may carry the same taxon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTree {
    tree: UnrootedTree,
}

/// Bipartition of a leaf set induced by an internal edge.
///
/// Stored as the part that does not contain the smallest taxon of the leaf
/// set, which makes the representation unique per bipartition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split(TaxonSet);

/// Leaf set below a vertex of a rooted tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cluster(TaxonSet);

impl Split {
    /// Canonical split for `side | leaves \ side`.
    pub fn new(side: &TaxonSet, leaves: &TaxonSet) -> Split {
        match leaves.first() {
            Some(m) if side.contains(m) => Split(side.complement_in(leaves)),
            _ => Split(side.clone()),
        }
    }

    pub fn part(&self) -> &TaxonSet {
        &self.0
    }
}

impl Cluster {
    pub fn new(members: TaxonSet) -> Cluster {
        Cluster(members)
    }

    pub fn members(&self) -> &TaxonSet {
        &self.0
    }
}

impl UnrootedTree {
    /// Builds a tree from adjacency lists and leaf labels, checking that the
    /// result is a phylogenetic tree.
    pub fn from_parts(adj: Vec<Vec<VertexId>>, labels: Vec<Option<TaxonId>>) -> Result<Self> {
        let tree = UnrootedTree { adj, labels };
        tree.validate()?;
        Ok(tree)
    }

    pub fn from_edges(labels: Vec<Option<TaxonId>>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); labels.len()];
        for &(u, v) in edges {
            if u >= labels.len() || v >= labels.len() {
                return Err(Error::InvalidTree(format!("edge {u}-{v} out of range")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_parts(adj, labels)
    }

    pub fn single_leaf(taxon: TaxonId) -> Self {
        UnrootedTree {
            adj: vec![Vec::new()],
            labels: vec![Some(taxon)],
        }
    }

    /// Cleans up an arbitrary labeled tree graph: unlabeled vertices of
    /// degree at most one are pruned, unlabeled degree-two vertices are
    /// suppressed and the survivors are renumbered in their original order.
    pub fn normalize(mut adj: Vec<Vec<VertexId>>, labels: Vec<Option<TaxonId>>) -> Result<Self> {
        let n = adj.len();
        let mut alive = vec![true; n];
        let mut queue: VecDeque<VertexId> = (0..n).filter(|&v| labels[v].is_none() && adj[v].len() <= 1).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for u in std::mem::take(&mut adj[v]) {
                adj[u].retain(|&w| w != v);
                if alive[u] && labels[u].is_none() && adj[u].len() <= 1 {
                    queue.push_back(u);
                }
            }
        }
        for v in 0..n {
            if alive[v] && labels[v].is_none() && adj[v].len() == 2 {
                let (a, b) = (adj[v][0], adj[v][1]);
                for x in adj[a].iter_mut() {
                    if *x == v {
                        *x = b;
                    }
                }
                for x in adj[b].iter_mut() {
                    if *x == v {
                        *x = a;
                    }
                }
                adj[v].clear();
                alive[v] = false;
            }
        }
        let mut new_id = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if alive[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        if next == 0 {
            return Err(Error::InvalidTree("no leaves".into()));
        }
        let mut out_adj = Vec::with_capacity(next);
        let mut out_labels = Vec::with_capacity(next);
        for v in 0..n {
            if alive[v] {
                out_adj.push(adj[v].iter().map(|&u| new_id[u]).collect());
                out_labels.push(labels[v]);
            }
        }
        Self::from_parts(out_adj, out_labels)
    }

    fn validate(&self) -> Result<()> {
        let n = self.adj.len();
        if n == 0 || self.labels.len() != n {
            return Err(Error::InvalidTree("empty tree".into()));
        }
        if n == 1 {
            return if self.labels[0].is_some() {
                Ok(())
            } else {
                Err(Error::InvalidTree("lone vertex without label".into()))
            };
        }
        let mut degree_sum = 0;
        for v in 0..n {
            let d = self.adj[v].len();
            degree_sum += d;
            match self.labels[v] {
                Some(_) if d != 1 => {
                    return Err(Error::InvalidTree(format!("leaf {v} has degree {d}")));
                }
                None if d < 3 => {
                    return Err(Error::InvalidTree(format!("internal vertex {v} has degree {d}")));
                }
                _ => {}
            }
            for &u in &self.adj[v] {
                if u >= n || u == v || !self.adj[u].contains(&v) {
                    return Err(Error::InvalidTree(format!("bad adjacency {v}-{u}")));
                }
            }
        }
        if degree_sum != 2 * (n - 1) {
            return Err(Error::InvalidTree("not a tree".into()));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidTree("disconnected".into()));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.labels[v].is_some()
    }

    pub fn label(&self, v: VertexId) -> Option<TaxonId> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<TaxonId>] {
        &self.labels
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len()).filter(move |&v| self.labels[v].is_some())
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len()).filter(move |&v| self.labels[v].is_none())
    }

    /// All edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = (0..self.adj.len())
            .flat_map(|v| self.adj[v].iter().filter(move |&&u| v < u).map(move |&u| (v, u)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn internal_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| !self.is_leaf(u) && !self.is_leaf(v))
            .collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    pub fn is_binary(&self) -> bool {
        self.internal_vertices().all(|v| self.adj[v].len() == 3)
    }

    pub fn is_singly_labeled(&self) -> bool {
        let mut seen = TaxonSet::new();
        for t in self.labels.iter().flatten() {
            if seen.contains(*t) {
                return false;
            }
            seen.insert(*t);
        }
        true
    }

    /// Set of distinct taxa on the leaves.
    pub fn taxa(&self) -> TaxonSet {
        self.labels.iter().flatten().copied().collect()
    }

    /// Number of leaves per taxon.
    pub fn label_counts(&self) -> BTreeMap<TaxonId, usize> {
        let mut out = BTreeMap::new();
        for t in self.labels.iter().flatten() {
            *out.entry(*t).or_insert(0) += 1;
        }
        out
    }

    pub fn leaves_with(&self, taxon: TaxonId) -> Vec<VertexId> {
        self.leaves().filter(|&v| self.labels[v] == Some(taxon)).collect()
    }

    /// The unique leaf labeled `taxon`.
    pub fn leaf_of(&self, taxon: TaxonId) -> Result<VertexId> {
        let hits = self.leaves_with(taxon);
        match hits.len() {
            0 => Err(Error::MissingTaxon(taxon)),
            1 => Ok(hits[0]),
            k => Err(Error::AmbiguousTaxon(taxon, k)),
        }
    }

    /// Minimal subtree connecting `keep` with degree-two vertices suppressed.
    pub fn restrict(&self, keep: &[VertexId]) -> Result<UnrootedTree> {
        if keep.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        let mut kept = vec![false; self.adj.len()];
        for &v in keep {
            if v >= self.adj.len() || !self.is_leaf(v) {
                return Err(Error::NotALeaf(v));
            }
            kept[v] = true;
        }
        let labels = (0..self.adj.len())
            .map(|v| if kept[v] { self.labels[v] } else { None })
            .collect();
        Self::normalize(self.adj.clone(), labels)
    }

    /// Restriction to every leaf whose taxon is in `taxa`.
    pub fn restrict_to_taxa(&self, taxa: &TaxonSet) -> Result<UnrootedTree> {
        let keep: Vec<_> = self
            .leaves()
            .filter(|&v| taxa.contains(self.labels[v].unwrap()))
            .collect();
        self.restrict(&keep)
    }

    /// Replaces every leaf label through `f`.
    pub fn relabel(&self, mut f: impl FnMut(VertexId, TaxonId) -> TaxonId) -> UnrootedTree {
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, l)| l.map(|t| f(v, t)))
            .collect();
        UnrootedTree {
            adj: self.adj.clone(),
            labels,
        }
    }

    /// Canonical splits of all internal edges. Requires a singly-labeled tree.
    pub fn splits(&self) -> Result<BTreeSet<Split>> {
        if !self.is_singly_labeled() {
            return Err(Error::NotSinglyLabeled);
        }
        let mut out = BTreeSet::new();
        if self.adj.len() < 4 {
            return Ok(out);
        }
        let all = self.taxa();
        let start = self.leaf_of(all.first().unwrap())?;
        // Rooted at the leaf with the smallest taxon, every subtree below an
        // internal edge is already the canonical side.
        let (order, parent) = self.dfs_order(start);
        let mut below: Vec<TaxonSet> = vec![TaxonSet::new(); self.adj.len()];
        for &v in order.iter().rev() {
            if let Some(t) = self.labels[v] {
                below[v].insert(t);
            }
            if let Some(p) = parent[v] {
                let mine = std::mem::take(&mut below[v]);
                if !self.is_leaf(v) && !self.is_leaf(p) {
                    out.insert(Split(mine.clone()));
                }
                below[p].union_with(&mine);
                below[v] = mine;
            }
        }
        Ok(out)
    }

    /// Preorder from `start` along with each vertex's parent in that traversal.
    pub(crate) fn dfs_order(&self, start: VertexId) -> (Vec<VertexId>, Vec<Option<VertexId>>) {
        let n = self.adj.len();
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &u in self.adj[v].iter().rev() {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    stack.push(u);
                }
            }
        }
        (order, parent)
    }

    /// Roots the tree by subdividing the pendant edge of the unique leaf
    /// labeled `r`. The new vertex (id `num_vertices()`) is the root and `r`
    /// stays a leaf.
    pub fn root_at_taxon(&self, r: TaxonId) -> Result<RootedTree> {
        let leaf = self.leaf_of(r)?;
        Ok(self.root_at_leaf(leaf))
    }

    /// Same as [`root_at_taxon`](Self::root_at_taxon) but addressed by vertex.
    pub fn root_at_leaf(&self, leaf: VertexId) -> RootedTree {
        let n = self.adj.len();
        let root = n;
        let mut parent = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        let mut labels = self.labels.clone();
        labels.push(None);
        children[root].push(leaf);
        parent[leaf] = Some(root);
        if let Some(&w) = self.adj[leaf].first() {
            children[root].push(w);
            parent[w] = Some(root);
            let mut stack = vec![w];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if Some(u) != parent[v] && u != leaf {
                        parent[u] = Some(v);
                        children[v].push(u);
                        stack.push(u);
                    }
                }
            }
        }
        RootedTree {
            root,
            parent,
            children,
            labels,
        }
    }

    /// Collapses the internal edge `{u, v}`, identifying its endpoints.
    pub fn contract_edge(&self, u: VertexId, v: VertexId) -> Result<UnrootedTree> {
        if !self.has_edge(u, v) {
            return Err(Error::NoSuchEdge(u, v));
        }
        if self.is_leaf(u) || self.is_leaf(v) {
            return Err(Error::NotInternalEdge(u, v));
        }
        let mut adj = self.adj.clone();
        let moved: Vec<_> = adj[v].iter().copied().filter(|&w| w != u).collect();
        adj[u].retain(|&w| w != v);
        for &w in &moved {
            for x in adj[w].iter_mut() {
                if *x == v {
                    *x = u;
                }
            }
            adj[u].push(w);
        }
        adj[v].clear();
        // v is now isolated and unlabeled; normalize drops it.
        Self::normalize(adj, self.labels.clone())
    }

    /// Expands `v` into two adjacent vertices; the neighbors in `side` move
    /// to the new vertex, which gets id `num_vertices()`.
    pub fn refine_vertex(&self, v: VertexId, side: &[VertexId]) -> Result<UnrootedTree> {
        let d = self.adj.get(v).map_or(0, |a| a.len());
        if self.labels.get(v).copied().flatten().is_some() || d < 4 {
            return Err(Error::InvalidRefinement(format!(
                "vertex {v} has degree {d}, need at least 4"
            )));
        }
        let side_set: BTreeSet<_> = side.iter().copied().collect();
        if side_set.len() != side.len() || side.len() < 2 || side.len() > d - 2 {
            return Err(Error::InvalidRefinement(format!(
                "side of size {} for a vertex of degree {d}",
                side.len()
            )));
        }
        if !side.iter().all(|w| self.adj[v].contains(w)) {
            return Err(Error::InvalidRefinement("side contains a non-neighbor".into()));
        }
        let mut adj = self.adj.clone();
        let mut labels = self.labels.clone();
        let w = adj.len();
        adj.push(Vec::new());
        labels.push(None);
        adj[v].retain(|u| !side_set.contains(u));
        for &s in side {
            for x in adj[s].iter_mut() {
                if *x == v {
                    *x = w;
                }
            }
            adj[w].push(s);
        }
        adj[v].push(w);
        adj[w].push(v);
        Self::from_parts(adj, labels)
    }

    /// Isomorphism of singly-labeled trees: same taxa and same splits.
    pub fn is_isomorphic(&self, other: &UnrootedTree) -> Result<bool> {
        Ok(self.taxa() == other.taxa() && self.splits()? == other.splits()?)
    }
}

impl MulTree {
    pub fn new(tree: UnrootedTree) -> Self {
        MulTree { tree }
    }

    pub fn tree(&self) -> &UnrootedTree {
        &self.tree
    }

    pub fn into_tree(self) -> UnrootedTree {
        self.tree
    }

    /// Distinct labels `M` of the mul-tree.
    pub fn label_set(&self) -> TaxonSet {
        self.tree.taxa()
    }

    pub fn multiplicity(&self, taxon: TaxonId) -> usize {
        self.tree.labels.iter().filter(|l| **l == Some(taxon)).count()
    }

    pub fn num_leaves(&self) -> usize {
        self.tree.num_leaves()
    }
}

impl From<UnrootedTree> for MulTree {
    fn from(tree: UnrootedTree) -> Self {
        MulTree { tree }
    }
}

/// Rooted tree with explicit parent and child lists.
///
/// The root is not counted as internal: `I(T)` is the set of non-root,
/// non-leaf vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    labels: Vec<Option<TaxonId>>,
}

impl RootedTree {
    /// Builds a rooted tree from a parent array. Children keep the order of
    /// increasing vertex id.
    pub fn from_parents(parent: Vec<Option<VertexId>>, labels: Vec<Option<TaxonId>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || labels.len() != n {
            return Err(Error::InvalidTree("empty rooted tree".into()));
        }
        let roots: Vec<_> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidTree(format!("{} roots", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (v, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                if p >= n {
                    return Err(Error::InvalidTree(format!("parent {p} out of range")));
                }
                children[p].push(v);
            }
        }
        let rt = RootedTree {
            root: roots[0],
            parent,
            children,
            labels,
        };
        if rt.post_order().len() != n {
            return Err(Error::InvalidTree("parent array has a cycle".into()));
        }
        Ok(rt)
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn children_lists(&self) -> &[Vec<VertexId>] {
        &self.children
    }

    pub fn label(&self, v: VertexId) -> Option<TaxonId> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<TaxonId>] {
        &self.labels
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v != self.root && self.children[v].is_empty()
    }

    pub fn is_internal(&self, v: VertexId) -> bool {
        v != self.root && !self.children[v].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.parent.len()).filter(move |&v| self.is_leaf(v))
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.parent.len()).filter(move |&v| self.is_internal(v))
    }

    pub fn leaf_taxa(&self) -> TaxonSet {
        self.leaves().filter_map(|v| self.labels[v]).collect()
    }

    /// Vertices reachable from the root, children before parents.
    pub fn post_order(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.parent.len());
        let mut stack = vec![(self.root, false)];
        let mut guard = 0;
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
                continue;
            }
            guard += 1;
            if guard > self.parent.len() {
                break;
            }
            stack.push((v, true));
            for &c in self.children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Cluster of every internal (non-root, non-leaf) vertex.
    pub fn clusters(&self) -> Vec<(VertexId, Cluster)> {
        let mut below: Vec<TaxonSet> = vec![TaxonSet::new(); self.parent.len()];
        let mut out = Vec::new();
        for v in self.post_order() {
            if self.is_leaf(v) {
                if let Some(t) = self.labels[v] {
                    below[v].insert(t);
                }
            } else {
                let mut acc = TaxonSet::new();
                for &c in &self.children[v] {
                    acc.union_with(&below[c]);
                }
                below[v] = acc;
                if v != self.root {
                    out.push((v, Cluster(below[v].clone())));
                }
            }
        }
        out.sort_by_key(|(v, _)| *v);
        out
    }

    /// Forgets the root, suppressing it when it has degree two.
    pub fn unroot(&self) -> Result<UnrootedTree> {
        let n = self.parent.len();
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = self.parent[v] {
                adj[v].push(p);
                adj[p].push(v);
            }
        }
        UnrootedTree::normalize(adj, self.labels.clone())
    }
}

/// Incrementally grows a binary tree by attaching leaves to edges.
#[derive(Clone, Debug)]
pub struct TreeGrower {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<Option<TaxonId>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl TreeGrower {
    /// Starts from the unique tree on up to three leaves.
    pub fn new(first: &[TaxonId]) -> Result<Self> {
        let mut g = TreeGrower {
            adj: Vec::new(),
            labels: Vec::new(),
            edges: Vec::new(),
        };
        match first.len() {
            1 => {
                g.push(Some(first[0]));
            }
            2 => {
                let a = g.push(Some(first[0]));
                let b = g.push(Some(first[1]));
                g.link(a, b);
            }
            3 => {
                let c = g.push(None);
                for &t in first {
                    let l = g.push(Some(t));
                    g.link(c, l);
                }
            }
            k => {
                return Err(Error::InvalidParameter(format!(
                    "a grown tree starts from 1 to 3 leaves, got {k}"
                )))
            }
        }
        Ok(g)
    }

    fn push(&mut self, label: Option<TaxonId>) -> VertexId {
        self.adj.push(Vec::new());
        self.labels.push(label);
        self.adj.len() - 1
    }

    fn link(&mut self, a: VertexId, b: VertexId) {
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edges.push((a, b));
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn num_leaves(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Subdivides edge `edges()[edge]` and hangs a new leaf from it.
    pub fn insert_leaf(&mut self, edge: usize, taxon: TaxonId) {
        if self.adj.len() == 1 {
            let l = self.push(Some(taxon));
            self.link(0, l);
            return;
        }
        let (u, v) = self.edges[edge];
        let w = self.push(None);
        let l = self.push(Some(taxon));
        for x in self.adj[u].iter_mut() {
            if *x == v {
                *x = w;
            }
        }
        for x in self.adj[v].iter_mut() {
            if *x == u {
                *x = w;
            }
        }
        self.adj[w].extend([u, v]);
        self.edges[edge] = (u, w);
        self.edges.push((w, v));
        self.link(w, l);
    }

    pub fn build(&self) -> UnrootedTree {
        UnrootedTree::normalize(self.adj.clone(), self.labels.clone()).expect("grown trees are valid")
    }
}

/// Uniform random sequential leaf insertion. Repeated labels give a mul-tree.
pub fn random_binary_tree<R: Rng + ?Sized>(labels: &[TaxonId], rng: &mut R) -> Result<UnrootedTree> {
    if labels.is_empty() {
        return Err(Error::EmptyRestriction);
    }
    let mut order = labels.to_vec();
    order.shuffle(rng);
    let head = order.len().min(3);
    let mut g = TreeGrower::new(&order[..head])?;
    for &t in &order[head..] {
        let e = rng.gen_range(0..g.edges().len());
        g.insert_leaf(e, t);
    }
    Ok(g.build())
}
