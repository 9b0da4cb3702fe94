//! Constant-time lowest common ancestor queries over a rooted tree.
//!
//! Euler tour plus a sparse table of minimum-depth positions:
//! `O(n log n)` build, `O(1)` per query.

use crate::tree::{RootedTree, VertexId};

#[derive(Clone, Debug)]
pub struct LcaIndex {
    euler: Vec<u32>,
    first: Vec<u32>,
    depth: Vec<u32>,
    parent: Vec<Option<VertexId>>,
    /// `table[k][i]` is the tour position of minimum depth in `[i, i + 2^k)`.
    table: Vec<Vec<u32>>,
}

impl LcaIndex {
    pub fn new(tree: &RootedTree) -> Self {
        Self::from_children(tree.root(), tree.children_lists())
    }

    /// Builds the index from a root and per-vertex child lists. Vertices not
    /// reachable from `root` get no tour position and must not be queried.
    pub fn from_children(root: VertexId, children: &[Vec<VertexId>]) -> Self {
        let n = children.len();
        let mut euler = Vec::with_capacity(2 * n);
        let mut first = vec![u32::MAX; n];
        let mut depth = vec![0u32; n];
        let mut parent = vec![None; n];
        // (vertex, index of next child to descend into)
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        first[root] = 0;
        euler.push(root as u32);
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            if i < children[v].len() {
                top.1 += 1;
                let c = children[v][i];
                depth[c] = depth[v] + 1;
                parent[c] = Some(v);
                first[c] = euler.len() as u32;
                euler.push(c as u32);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p as u32);
                }
            }
        }

        let m = euler.len();
        let mut table: Vec<Vec<u32>> = vec![(0..m as u32).collect()];
        let mut k = 1;
        while (1 << k) <= m {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<u32> = (0..=m - (1 << k))
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + half]);
                    if depth[euler[a as usize] as usize] <= depth[euler[b as usize] as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            k += 1;
        }
        LcaIndex {
            euler,
            first,
            depth,
            parent,
            table,
        }
    }

    pub fn lca(&self, u: VertexId, v: VertexId) -> VertexId {
        let (mut a, mut b) = (self.first[u] as usize, self.first[v] as usize);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let len = b - a + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let (x, y) = (self.table[k][a], self.table[k][b + 1 - (1 << k)]);
        let (vx, vy) = (self.euler[x as usize] as usize, self.euler[y as usize] as usize);
        if self.depth[vx] <= self.depth[vy] {
            vx
        } else {
            vy
        }
    }

    /// LCA where either side may be absent.
    #[inline]
    pub fn lca_opt(&self, u: Option<VertexId>, v: Option<VertexId>) -> Option<VertexId> {
        match (u, v) {
            (Some(a), Some(b)) => Some(self.lca(a, b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.first.get(v).is_some_and(|&f| f != u32::MAX)
    }

    /// LCA of `u` and `v` in the same tree re-rooted at vertex `r`: the
    /// deepest of the three pairwise LCAs (the median of `u`, `v`, `r`).
    #[inline]
    pub fn lca_rerooted(&self, u: VertexId, v: VertexId, r: VertexId) -> VertexId {
        let a = self.lca(u, v);
        let b = self.lca(u, r);
        let c = self.lca(v, r);
        let mut best = a;
        if self.depth[b] > self.depth[best] {
            best = b;
        }
        if self.depth[c] > self.depth[best] {
            best = c;
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxa::TaxonId;
    use crate::tree::random_binary_tree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_lca(idx: &LcaIndex, mut u: VertexId, mut v: VertexId) -> VertexId {
        while idx.depth(u) > idx.depth(v) {
            u = idx.parent(u).unwrap();
        }
        while idx.depth(v) > idx.depth(u) {
            v = idx.parent(v).unwrap();
        }
        while u != v {
            u = idx.parent(u).unwrap();
            v = idx.parent(v).unwrap();
        }
        u
    }

    #[test]
    fn matches_parent_climbing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1u32, 2, 3, 5, 17, 40] {
            let taxa: Vec<_> = (0..n).map(TaxonId).collect();
            let t = random_binary_tree(&taxa, &mut rng).unwrap();
            let rt = t.root_at_taxon(TaxonId(0)).unwrap();
            let idx = LcaIndex::new(&rt);
            let m = rt.num_vertices();
            for _ in 0..200 {
                let (u, v) = (rng.gen_range(0..m), rng.gen_range(0..m));
                let l = idx.lca(u, v);
                assert_eq!(l, naive_lca(&idx, u, v));
                assert_eq!(l, idx.lca(v, u));
                assert!(idx.depth(l) <= idx.depth(u).min(idx.depth(v)));
            }
            for u in 0..m {
                assert_eq!(idx.lca(u, u), u);
            }
        }
    }

    #[test]
    fn rerooted_queries_match_a_fresh_rooting() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let taxa: Vec<_> = (0..15).map(TaxonId).collect();
        let t = random_binary_tree(&taxa, &mut rng).unwrap();
        let base = LcaIndex::new(&t.root_at_taxon(TaxonId(0)).unwrap());
        for r in 1..15 {
            let rt = t.root_at_taxon(TaxonId(r)).unwrap();
            let fresh = LcaIndex::new(&rt);
            let rleaf = t.leaf_of(TaxonId(r)).unwrap();
            for u in 0..t.num_vertices() {
                for v in 0..t.num_vertices() {
                    if u == rleaf || v == rleaf {
                        continue;
                    }
                    assert_eq!(base.lca_rerooted(u, v, rleaf), fresh.lca(u, v));
                }
            }
        }
    }
}
