//! SPR neighborhoods and the incremental neighborhood scan.
//!
//! A move cuts the edge `{x, y}`, prunes the subtree `Y` on the `y` side,
//! suppresses `x` and re-inserts it on an edge of the remaining subtree
//! `X`. Vertex ids are preserved by [`apply_move`].
//!
//! The scan scores every regraft of `Y` for one gene tree in a single pass.
//! `X` is rooted at a leaf `r` whose taxon the gene tree carries, and the
//! gene tree is rooted at a copy of that taxon. Regraft positions are
//! visited along the depth-first edge tour of `X`, so consecutive
//! positions share a vertex and at most two vertices of the supertree
//! change their LCA image per step. Each step touches at most four gene
//! vertices and moves the distance by `2 (|L| - |G|)`, where `G` and `L`
//! are the gene vertices that gain and lose their last match.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lca::LcaIndex;
use crate::profile::Profile;
use crate::rf::rf_multree_supertree;
use crate::tree::{MulTree, Split, UnrootedTree, VertexId};

const NONE: u32 = u32::MAX;

/// Prune the subtree hanging from `pruned` across the edge
/// `{attach, pruned}` and regraft it, through `attach`, onto `regraft`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SprMove {
    pub attach: VertexId,
    pub pruned: VertexId,
    pub regraft: (VertexId, VertexId),
}

/// Vertices of the component of `s - {x, y}` containing `x`.
fn side_of(s: &UnrootedTree, x: VertexId, y: VertexId) -> Vec<bool> {
    let mut mark = vec![false; s.num_vertices()];
    mark[x] = true;
    let mut stack = vec![x];
    while let Some(v) = stack.pop() {
        for &u in s.neighbors(v) {
            if !mark[u] && !(v == x && u == y) {
                mark[u] = true;
                stack.push(u);
            }
        }
    }
    mark
}

/// Applies a move. The result keeps every vertex id of `s`.
pub fn apply_move(s: &UnrootedTree, mv: &SprMove) -> Result<UnrootedTree> {
    let (x, y) = (mv.attach, mv.pruned);
    let (u, v) = mv.regraft;
    if !s.has_edge(x, y) {
        return Err(Error::NoSuchEdge(x, y));
    }
    if !s.has_edge(u, v) {
        return Err(Error::NoSuchEdge(u, v));
    }
    if s.is_leaf(x) || s.degree(x) != 3 {
        return Err(Error::NotBinary);
    }
    let side = side_of(s, x, y);
    if !side[u] || !side[v] || u == x || v == x {
        return Err(Error::InvalidTree(format!(
            "regraft edge {u}-{v} is not in the retained component"
        )));
    }
    let mut adj: Vec<Vec<VertexId>> = (0..s.num_vertices()).map(|w| s.neighbors(w).to_vec()).collect();
    let rest: Vec<VertexId> = adj[x].iter().copied().filter(|&w| w != y).collect();
    let (x1, x2) = (rest[0], rest[1]);
    replace(&mut adj[x1], x, x2);
    replace(&mut adj[x2], x, x1);
    replace(&mut adj[u], v, x);
    replace(&mut adj[v], u, x);
    adj[x] = vec![y, u, v];
    UnrootedTree::from_parts(adj, s.labels().to_vec())
}

fn replace(list: &mut [VertexId], from: VertexId, to: VertexId) {
    for w in list.iter_mut() {
        if *w == from {
            *w = to;
        }
    }
}

/// Edge table and rooting helpers for a binary supertree.
#[derive(Clone, Debug)]
pub struct SupertreeView<'a> {
    tree: &'a UnrootedTree,
    edges: Vec<(VertexId, VertexId)>,
    /// `eid[v][i]` is the id of the edge to `tree.neighbors(v)[i]`.
    eid: Vec<Vec<u32>>,
    /// Rooting at vertex 0, used for side counts.
    parent0: Vec<u32>,
    order0: Vec<u32>,
}

impl<'a> SupertreeView<'a> {
    pub fn new(tree: &'a UnrootedTree) -> Result<Self> {
        if !tree.is_binary() {
            return Err(Error::NotBinary);
        }
        if !tree.is_singly_labeled() {
            return Err(Error::NotSinglyLabeled);
        }
        let edges = tree.edges();
        let mut eid: Vec<Vec<u32>> = (0..tree.num_vertices()).map(|v| vec![NONE; tree.degree(v)]).collect();
        for (i, &(a, b)) in edges.iter().enumerate() {
            let pa = tree.neighbors(a).iter().position(|&w| w == b).unwrap();
            let pb = tree.neighbors(b).iter().position(|&w| w == a).unwrap();
            eid[a][pa] = i as u32;
            eid[b][pb] = i as u32;
        }
        let (order, parent) = tree.dfs_order(0);
        Ok(SupertreeView {
            tree,
            edges,
            eid,
            parent0: parent.iter().map(|p| p.map_or(NONE, |p| p as u32)).collect(),
            order0: order.iter().map(|&v| v as u32).collect(),
        })
    }

    pub fn tree(&self) -> &UnrootedTree {
        self.tree
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Number of directed cuts, `2 |E|`. Cut `2e` prunes the larger-id
    /// endpoint's side of edge `e`, cut `2e + 1` the smaller one's.
    pub fn num_cuts(&self) -> usize {
        2 * self.edges.len()
    }

    /// `(attach, pruned)` of a directed cut.
    pub fn cut(&self, dc: usize) -> (VertexId, VertexId) {
        let (a, b) = self.edges[dc / 2];
        if dc.is_multiple_of(2) {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let i = self.tree.neighbors(u).iter().position(|&w| w == v)?;
        Some(self.eid[u][i] as usize)
    }

    /// Legal regraft edge ids for a directed cut, ascending.
    pub fn targets(&self, dc: usize) -> Vec<usize> {
        let (x, y) = self.cut(dc);
        if self.tree.is_leaf(x) {
            return Vec::new();
        }
        let side = side_of(self.tree, x, y);
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                side[a] && side[b] && a != x && b != x
            })
            .collect()
    }

    /// Every legal move in directed-cut order, then edge-id order.
    pub fn moves(&self) -> Vec<SprMove> {
        let mut out = Vec::new();
        for dc in 0..self.num_cuts() {
            let (x, y) = self.cut(dc);
            for e in self.targets(dc) {
                out.push(SprMove {
                    attach: x,
                    pruned: y,
                    regraft: self.edges[e],
                });
            }
        }
        out
    }
}

/// Every SPR move of a binary tree, including ones that land on an
/// isomorphic tree.
pub fn spr_moves(s: &UnrootedTree) -> Result<Vec<SprMove>> {
    Ok(SupertreeView::new(s)?.moves())
}

/// All moves with their resulting trees, minus those that reproduce the
/// topology of `s`.
pub fn spr_neighborhood(s: &UnrootedTree) -> Result<Vec<(SprMove, UnrootedTree)>> {
    let own = s.splits()?;
    let mut out = Vec::new();
    for mv in spr_moves(s)? {
        let t = apply_move(s, &mv)?;
        if t.splits()? != own {
            out.push((mv, t));
        }
    }
    Ok(out)
}

/// Distinct neighbor topologies, one representative each.
pub fn distinct_neighbors(s: &UnrootedTree) -> Result<Vec<UnrootedTree>> {
    let mut seen: BTreeSet<BTreeSet<Split>> = BTreeSet::new();
    let mut out = Vec::new();
    for (_, t) in spr_neighborhood(s)? {
        if seen.insert(t.splits()?) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Depth-first edge tour of `tree` from the leaf `start`: the edge between
/// each pair of consecutive vertices of the walk that explores every branch
/// before backtracking. Every edge appears twice, once on the way down and
/// once on the way back.
pub fn aleph_order(tree: &UnrootedTree, start: VertexId) -> Result<Vec<(VertexId, VertexId)>> {
    if start >= tree.num_vertices() || !tree.is_leaf(start) {
        return Err(Error::NotALeaf(start));
    }
    let mut out = Vec::with_capacity(2 * tree.num_vertices());
    let mut stack: Vec<(VertexId, VertexId, usize)> = vec![(start, usize::MAX, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, p, i) = *top;
        if i < tree.degree(v) {
            top.2 += 1;
            let u = tree.neighbors(v)[i];
            if u != p {
                out.push((v, u));
                stack.push((u, v, 0));
            }
        } else {
            stack.pop();
            if p != usize::MAX {
                out.push((v, p));
            }
        }
    }
    Ok(out)
}

/// Gene-tree data shared by every scan against any supertree.
#[derive(Clone, Debug)]
pub struct GeneIndex {
    tree: MulTree,
    lca: LcaIndex,
    /// Parent in the base rooting; the virtual root has id `n`.
    parent: Vec<u32>,
    size0: Vec<u32>,
    internal: Vec<bool>,
    copies: Vec<Vec<u32>>,
    n_leaves: u32,
    n_internal: u32,
    /// `|M| - 2 + #{labels with several copies}`: the number of branching
    /// vertices of any rooted, extended supertree restricted to `M`.
    branching: i64,
}

impl GeneIndex {
    pub fn new(tree: &MulTree) -> Self {
        let t = tree.tree();
        let n = t.num_vertices();
        let first = t.leaves().next().expect("trees have leaves");
        let rooted = t.root_at_leaf(first);
        let lca = LcaIndex::new(&rooted);
        let mut size0 = vec![0u32; n + 1];
        for v in rooted.post_order() {
            size0[v] = if rooted.children(v).is_empty() {
                1
            } else {
                rooted.children(v).iter().map(|&c| size0[c]).sum()
            };
        }
        let parent = (0..n).map(|v| rooted.parent(v).map_or(NONE, |p| p as u32)).collect();
        let mut copies: Vec<Vec<u32>> = Vec::new();
        for v in t.leaves() {
            let i = t.label(v).unwrap().index();
            if copies.len() <= i {
                copies.resize(i + 1, Vec::new());
            }
            copies[i].push(v as u32);
        }
        let labels = copies.iter().filter(|c| !c.is_empty()).count() as i64;
        let multi = copies.iter().filter(|c| c.len() > 1).count() as i64;
        GeneIndex {
            tree: tree.clone(),
            lca,
            parent,
            size0,
            internal: (0..n).map(|v| !t.is_leaf(v)).collect(),
            copies,
            n_leaves: t.num_leaves() as u32,
            n_internal: t.internal_vertices().count() as u32,
            branching: labels - 2 + multi,
        }
    }

    pub fn tree(&self) -> &MulTree {
        &self.tree
    }

    fn copies_of(&self, s: &UnrootedTree, v: VertexId) -> &[u32] {
        s.label(v)
            .and_then(|t| self.copies.get(t.index()))
            .map_or(&[], |c| c.as_slice())
    }

    fn num_vertices(&self) -> usize {
        self.internal.len()
    }
}

/// Statistics of one scan position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanStep {
    /// Regraft edge id in the supertree, `None` for the edge that merges
    /// the two former neighbors of `x` (which reproduces the supertree).
    pub edge: Option<usize>,
    /// Set when the tour returns to an edge it has already scored.
    pub revisit: bool,
    pub rf: usize,
    /// Gene vertices whose match count became positive.
    pub gained: usize,
    /// Gene vertices whose match count dropped to zero.
    pub lost: usize,
    /// Gene vertices whose match count changed.
    pub touched: usize,
}

/// Reusable buffers for scans of one gene tree.
struct Scratch {
    map: Vec<u32>,
    size: Vec<u32>,
    xpar: Vec<u32>,
    from: Vec<u32>,
    pedge: Vec<u32>,
    on_path: Vec<bool>,
    counts: Vec<bool>,
    order: Vec<u32>,
    tour: Vec<u32>,
    stack: Vec<(u32, u32)>,
    cnt: Vec<u32>,
    over: Vec<u32>,
}

impl Scratch {
    fn new(ns: usize, nt: usize) -> Self {
        Scratch {
            map: vec![NONE; ns],
            size: vec![0; ns],
            xpar: vec![NONE; ns],
            from: vec![NONE; ns],
            pedge: vec![NONE; ns],
            on_path: vec![false; ns],
            counts: vec![false; ns],
            order: Vec::with_capacity(ns),
            tour: Vec::with_capacity(2 * ns),
            stack: Vec::with_capacity(ns),
            cnt: vec![0; nt + 1],
            over: vec![NONE; nt + 1],
        }
    }
}

/// State of one directed-cut scan of one gene tree.
struct Scan<'g> {
    g: &'g GeneIndex,
    root_copy: u32,
    ymap: u32,
    ysize: u32,
    fzero: i64,
}

impl Scan<'_> {
    #[inline]
    fn meet(&self, a: u32, b: u32) -> u32 {
        if a == NONE {
            b
        } else if b == NONE {
            a
        } else {
            self.g.lca.lca_rerooted(a as usize, b as usize, self.root_copy as usize) as u32
        }
    }

    #[inline]
    fn csize(&self, sc: &Scratch, u: u32) -> u32 {
        let o = sc.over[u as usize];
        if o != NONE {
            o
        } else {
            self.g.size0[u as usize]
        }
    }

    /// Gene vertex matched by a supertree vertex with this image and size.
    #[inline]
    fn matched(&self, sc: &Scratch, m: u32, size: u32) -> Option<u32> {
        (m != NONE && self.g.internal[m as usize] && self.csize(sc, m) == size).then_some(m)
    }

    fn contribution(&self, sc: &Scratch, v: u32, on_path: bool) -> Option<u32> {
        let v = v as usize;
        if !sc.counts[v] {
            return None;
        }
        if on_path {
            self.matched(sc, self.meet(sc.map[v], self.ymap), sc.size[v] + self.ysize)
        } else {
            self.matched(sc, sc.map[v], sc.size[v])
        }
    }

    fn x_contribution(&self, sc: &Scratch, child: u32) -> Option<u32> {
        let c = child as usize;
        self.matched(sc, self.meet(sc.map[c], self.ymap), sc.size[c] + self.ysize)
    }

    fn value(&self) -> usize {
        let v = self.g.branching + 2 * self.fzero - self.g.n_internal as i64;
        debug_assert!(v >= 0, "negative distance {v}");
        v.max(0) as usize
    }

    /// Removes the matches in `old`, adds those in `new`, and returns
    /// `(gained, lost, touched)`.
    fn update(&mut self, sc: &mut Scratch, old: [Option<u32>; 2], new: [Option<u32>; 2]) -> (usize, usize, usize) {
        let mut seen: [(u32, u32); 4] = [(NONE, 0); 4];
        let mut k = 0;
        for m in old.iter().chain(new.iter()).flatten() {
            if !seen[..k].iter().any(|&(u, _)| u == *m) {
                seen[k] = (*m, sc.cnt[*m as usize]);
                k += 1;
            }
        }
        for m in old.into_iter().flatten() {
            sc.cnt[m as usize] -= 1;
        }
        for m in new.into_iter().flatten() {
            sc.cnt[m as usize] += 1;
        }
        let (mut gained, mut lost, mut touched) = (0, 0, 0);
        for &(u, before) in &seen[..k] {
            let after = sc.cnt[u as usize];
            if after != before {
                touched += 1;
            }
            if before == 0 && after > 0 {
                gained += 1;
            } else if before > 0 && after == 0 {
                lost += 1;
            }
        }
        self.fzero += lost as i64 - gained as i64;
        (gained, lost, touched)
    }
}

/// Scans every regraft of the `y` side onto the `x` side for one gene
/// tree. Requires `x` internal, gene leaves on both sides and at least four
/// gene leaves; `emit` receives the positions in tour order.
fn scan_directed(
    g: &GeneIndex,
    sv: &SupertreeView,
    x: usize,
    y: usize,
    sc: &mut Scratch,
    mut emit: impl FnMut(ScanStep),
) {
    let s = sv.tree;
    let x32 = x as u32;

    // Root leaf of X carrying a gene taxon.
    sc.stack.clear();
    sc.stack.push((x32, y as u32));
    let mut r = NONE;
    while let Some((v, p)) = sc.stack.pop() {
        let v = v as usize;
        if s.is_leaf(v) && !g.copies_of(s, v).is_empty() {
            r = v as u32;
            break;
        }
        for &u in s.neighbors(v) {
            if u as u32 != p {
                sc.stack.push((u as u32, v as u32));
            }
        }
    }
    debug_assert!(r != NONE);
    let r = r as usize;
    let rcopies = g.copies_of(s, r);
    let root_copy = rcopies[0];

    // Cluster sizes of the gene tree rerooted at `root_copy`.
    let vroot = g.num_vertices() as u32;
    {
        let (mut prev, mut p) = (root_copy, g.parent[root_copy as usize]);
        while p != vroot {
            sc.over[p as usize] = g.n_leaves - g.size0[prev as usize];
            prev = p;
            p = g.parent[p as usize];
        }
    }

    let mut scan = Scan {
        g,
        root_copy,
        ymap: NONE,
        ysize: 0,
        fzero: 0,
    };

    // Y rooted at y: images and sizes bottom-up, matches are static.
    sc.order.clear();
    sc.stack.clear();
    sc.stack.push((y as u32, x32));
    while let Some((v, p)) = sc.stack.pop() {
        sc.order.push(v);
        sc.xpar[v as usize] = p;
        for &u in s.neighbors(v as usize) {
            if u as u32 != p {
                sc.stack.push((u as u32, v));
            }
        }
    }
    init_vertices(&scan, s, sc, None);
    for i in (0..sc.order.len()).rev() {
        let v = sc.order[i];
        if let Some(m) = scan.contribution(sc, v, false) {
            sc.cnt[m as usize] += 1;
        }
        if v as usize != y {
            fold_into_parent(&scan, sc, v);
        }
    }
    scan.ymap = sc.map[y];
    scan.ysize = sc.size[y];

    // X rooted at r with x suppressed; the tour lists regraft positions by
    // the child endpoint of their edge.
    sc.order.clear();
    sc.tour.clear();
    sc.stack.clear();
    sc.xpar[r] = NONE;
    sc.from[r] = NONE;
    sc.order.push(r as u32);
    sc.stack.push((r as u32, 0));
    while let Some(top) = sc.stack.last_mut() {
        let (v, i) = (top.0 as usize, top.1 as usize);
        if i < s.degree(v) {
            top.1 += 1;
            let u = s.neighbors(v)[i];
            if u as u32 == sc.from[v] {
                continue;
            }
            let (w, pe, from) = if u == x {
                let w = *s.neighbors(x).iter().find(|&&w| w != v && w != y).unwrap();
                (w, NONE, x32)
            } else {
                (u, sv.eid[v][i], v as u32)
            };
            sc.xpar[w] = v as u32;
            sc.from[w] = from;
            sc.pedge[w] = pe;
            sc.order.push(w as u32);
            sc.tour.push(w as u32);
            sc.stack.push((w as u32, 0));
        } else {
            sc.stack.pop();
            if v != r && sc.tour.last() != Some(&(v as u32)) {
                sc.tour.push(v as u32);
            }
        }
    }
    init_vertices(&scan, s, sc, Some(r));
    for i in (1..sc.order.len()).rev() {
        let v = sc.order[i];
        fold_into_parent(&scan, sc, v);
    }

    // Initial position: the edge below r. The path above x is {r}.
    sc.on_path[r] = true;
    for i in 0..sc.order.len() {
        let v = sc.order[i];
        if let Some(m) = scan.contribution(sc, v, v as usize == r) {
            sc.cnt[m as usize] += 1;
        }
    }
    let first = sc.tour[0];
    if let Some(m) = scan.x_contribution(sc, first) {
        sc.cnt[m as usize] += 1;
    }
    scan.fzero = (0..g.num_vertices())
        .filter(|&u| g.internal[u] && sc.cnt[u] == 0)
        .count() as i64;
    let edge_of = |sc: &Scratch, c: u32| {
        let e = sc.pedge[c as usize];
        (e != NONE).then_some(e as usize)
    };
    emit(ScanStep {
        edge: edge_of(sc, first),
        revisit: false,
        rf: scan.value(),
        gained: 0,
        lost: 0,
        touched: 0,
    });

    for i in 1..sc.tour.len() {
        let (c1, c2) = (sc.tour[i - 1], sc.tour[i]);
        let old_x = scan.x_contribution(sc, c1);
        let new_x = scan.x_contribution(sc, c2);
        let revisit = sc.xpar[c1 as usize] == c2;
        let (gained, lost, touched) = if sc.xpar[c2 as usize] == c1 {
            // Descend: c1 joins the path above x.
            let old = scan.contribution(sc, c1, false);
            let new = scan.contribution(sc, c1, true);
            sc.on_path[c1 as usize] = true;
            scan.update(sc, [old_x, old], [new_x, new])
        } else if sc.xpar[c1 as usize] == c2 {
            // Ascend: c2 leaves the path.
            let old = scan.contribution(sc, c2, true);
            let new = scan.contribution(sc, c2, false);
            sc.on_path[c2 as usize] = false;
            scan.update(sc, [old_x, old], [new_x, new])
        } else {
            // Siblings: only x changes.
            debug_assert_eq!(sc.xpar[c1 as usize], sc.xpar[c2 as usize]);
            scan.update(sc, [old_x, None], [new_x, None])
        };
        emit(ScanStep {
            edge: edge_of(sc, c2),
            revisit,
            rf: scan.value(),
            gained,
            lost,
            touched,
        });
    }

    // Reset the buffers touched by this scan.
    for &v in &sc.order {
        sc.on_path[v as usize] = false;
    }
    sc.cnt.iter_mut().for_each(|c| *c = 0);
    let (mut p, vroot) = (g.parent[root_copy as usize], vroot);
    while p != vroot {
        sc.over[p as usize] = NONE;
        p = g.parent[p as usize];
    }
}

/// Leaf images and sizes for every vertex in `sc.order`; internal vertices
/// start empty. `root` excludes its first gene copy, which roots the gene
/// tree.
fn init_vertices(scan: &Scan, s: &UnrootedTree, sc: &mut Scratch, root: Option<usize>) {
    for i in 0..sc.order.len() {
        let v = sc.order[i] as usize;
        if s.is_leaf(v) {
            let mut cp = scan.g.copies_of(s, v);
            let is_root = root == Some(v);
            if is_root {
                cp = &cp[1..];
            }
            let mut m = NONE;
            for &c in cp {
                m = scan.meet(m, c);
            }
            sc.map[v] = m;
            sc.size[v] = cp.len() as u32;
            // A label with several copies becomes an internal vertex of
            // the extended tree; so does the root leaf when it has any
            // copies left.
            sc.counts[v] = if is_root { !cp.is_empty() } else { cp.len() >= 2 };
        } else {
            sc.map[v] = NONE;
            sc.size[v] = 0;
            sc.counts[v] = true;
        }
    }
}

fn fold_into_parent(scan: &Scan, sc: &mut Scratch, v: u32) {
    let p = sc.xpar[v as usize] as usize;
    let v = v as usize;
    sc.map[p] = scan.meet(sc.map[p], sc.map[v]);
    sc.size[p] += sc.size[v];
}

/// Whether a directed cut needs a real scan for this gene tree; otherwise
/// every regraft keeps the current distance.
fn needs_scan(g: &GeneIndex, sv: &SupertreeView, hits: &[u32], total: u32, x: usize, y: usize) -> bool {
    if g.n_leaves < 4 || sv.tree.is_leaf(x) {
        return false;
    }
    let below_y = if sv.parent0[y] == x as u32 {
        hits[y]
    } else {
        total - hits[x]
    };
    below_y > 0 && below_y < total
}

/// Number of gene taxa in each subtree of the supertree rooted at vertex 0.
fn gene_hits(g: &GeneIndex, sv: &SupertreeView) -> (Vec<u32>, u32) {
    let s = sv.tree;
    let mut hits = vec![0u32; s.num_vertices()];
    for &v in sv.order0.iter().rev() {
        let v = v as usize;
        if s.is_leaf(v) && !g.copies_of(s, v).is_empty() {
            hits[v] += 1;
        }
        let p = sv.parent0[v];
        if p != NONE {
            hits[p as usize] += hits[v];
        }
    }
    let total = hits[0];
    (hits, total)
}

/// Distance from one gene tree to every regraft of the `pruned` side of the
/// cut `{attach, pruned}`, in tour order. The move onto the merged edge,
/// which reproduces `s`, is left out.
pub fn scan_cut_edge(
    s: &UnrootedTree,
    t: &MulTree,
    attach: VertexId,
    pruned: VertexId,
) -> Result<Vec<(SprMove, usize)>> {
    let steps = scan_cut_edge_traced(s, t, attach, pruned)?;
    let sv = SupertreeView::new(s)?;
    Ok(steps
        .into_iter()
        .filter(|st| !st.revisit)
        .filter_map(|st| {
            st.edge.map(|e| {
                (
                    SprMove {
                        attach,
                        pruned,
                        regraft: sv.edges[e],
                    },
                    st.rf,
                )
            })
        })
        .collect())
}

/// Like [`scan_cut_edge`] but reports every tour position with its update
/// statistics. Cuts that need no scan report each legal target once, in
/// edge order, with zero statistics.
pub fn scan_cut_edge_traced(
    s: &UnrootedTree,
    t: &MulTree,
    attach: VertexId,
    pruned: VertexId,
) -> Result<Vec<ScanStep>> {
    let sv = SupertreeView::new(s)?;
    let e = sv.edge_id(attach, pruned).ok_or(Error::NoSuchEdge(attach, pruned))?;
    if !t.label_set().is_subset(&s.taxa()) {
        return Err(Error::LabelsNotContained);
    }
    let g = GeneIndex::new(t);
    let (hits, total) = gene_hits(&g, &sv);
    if !needs_scan(&g, &sv, &hits, total, attach, pruned) {
        let base = rf_multree_supertree(t, s)?;
        let dc = 2 * e + usize::from(sv.edges[e].0 != attach);
        return Ok(sv
            .targets(dc)
            .into_iter()
            .map(|e| ScanStep {
                edge: Some(e),
                revisit: false,
                rf: base,
                gained: 0,
                lost: 0,
                touched: 0,
            })
            .collect());
    }
    let mut sc = Scratch::new(s.num_vertices(), g.num_vertices());
    let mut out = Vec::new();
    scan_directed(&g, &sv, attach, pruned, &mut sc, |st| out.push(st));
    Ok(out)
}

/// Gene indices for a whole profile, built once and reused across
/// supertrees.
#[derive(Clone, Debug)]
pub struct ProfileIndex {
    genes: Vec<GeneIndex>,
}

impl ProfileIndex {
    pub fn new(p: &Profile) -> Self {
        Self::from_trees(p.trees())
    }

    pub fn from_trees(trees: &[MulTree]) -> Self {
        ProfileIndex {
            genes: trees.par_iter().map(GeneIndex::new).collect(),
        }
    }

    pub fn genes(&self) -> &[GeneIndex] {
        &self.genes
    }
}

/// Profile score of every legal move of a supertree.
#[derive(Clone, Debug)]
pub struct MoveScores {
    /// `RF(P, S)` of the supertree itself.
    pub current: usize,
    pub per_tree: Vec<usize>,
    /// Moves in directed-cut order, then edge-id order.
    pub moves: Vec<SprMove>,
    pub scores: Vec<usize>,
}

/// Scores the whole SPR neighborhood of `s` against the profile.
pub fn score_moves(index: &ProfileIndex, s: &UnrootedTree) -> Result<MoveScores> {
    let sv = SupertreeView::new(s)?;
    let universe = s.taxa();
    let ncut = sv.num_cuts();
    let ne = sv.edges.len();
    let per_tree: Vec<usize> = index
        .genes
        .par_iter()
        .map(|g| {
            if !g.tree.label_set().is_subset(&universe) {
                return Err(Error::LabelsNotContained);
            }
            rf_multree_supertree(&g.tree, s)
        })
        .collect::<Result<_>>()?;
    // table[dc * ne + e] accumulates scanned values; offset[dc] the
    // constant contributions of cuts that need no scan.
    let zero = || (vec![0u64; ncut * ne], vec![0u64; ncut]);
    let (table, offset) = index
        .genes
        .par_iter()
        .zip(per_tree.par_iter())
        .fold(zero, |(mut table, mut offset), (g, &base)| {
            let (hits, total) = gene_hits(g, &sv);
            let mut sc = Scratch::new(s.num_vertices(), g.num_vertices());
            for dc in 0..ncut {
                let (x, y) = sv.cut(dc);
                if sv.tree.is_leaf(x) {
                    continue;
                }
                if needs_scan(g, &sv, &hits, total, x, y) {
                    let row = &mut table[dc * ne..(dc + 1) * ne];
                    scan_directed(g, &sv, x, y, &mut sc, |st| {
                        if let (Some(e), false) = (st.edge, st.revisit) {
                            row[e] += st.rf as u64;
                        }
                    });
                } else {
                    offset[dc] += base as u64;
                }
            }
            (table, offset)
        })
        .reduce(zero, |(mut ta, mut oa), (tb, ob)| {
            ta.iter_mut().zip(tb).for_each(|(a, b)| *a += b);
            oa.iter_mut().zip(ob).for_each(|(a, b)| *a += b);
            (ta, oa)
        });
    let mut moves = Vec::new();
    let mut scores = Vec::new();
    for dc in 0..ncut {
        let (x, y) = sv.cut(dc);
        for e in sv.targets(dc) {
            moves.push(SprMove {
                attach: x,
                pruned: y,
                regraft: sv.edges[e],
            });
            scores.push((table[dc * ne + e] + offset[dc]) as usize);
        }
    }
    Ok(MoveScores {
        current: per_tree.iter().sum(),
        per_tree,
        moves,
        scores,
    })
}

/// Best neighbor found by one SPR search step.
#[derive(Clone, Debug)]
pub struct SprSearchResult {
    pub best_move: SprMove,
    pub best_tree: UnrootedTree,
    pub best_score: usize,
    pub current_score: usize,
}

/// A minimum-score SPR neighbor of `s`; ties go to the first move in
/// directed-cut, edge-id order.
pub fn spr_search(p: &Profile, s: &UnrootedTree) -> Result<SprSearchResult> {
    spr_search_indexed(&ProfileIndex::new(p), s)
}

pub fn spr_search_indexed(index: &ProfileIndex, s: &UnrootedTree) -> Result<SprSearchResult> {
    let ms = score_moves(index, s)?;
    let best = (0..ms.moves.len())
        .min_by_key(|&i| (ms.scores[i], i))
        .ok_or_else(|| Error::InvalidTree("tree has no SPR neighbors".into()))?;
    let best_move = ms.moves[best];
    Ok(SprSearchResult {
        best_tree: apply_move(s, &best_move)?,
        best_move,
        best_score: ms.scores[best],
        current_score: ms.current,
    })
}

/// Distances from the profile to every way of hanging the new leaf `leaf`
/// (attached through `attach`) elsewhere in `s`, keyed by the edges of `s`
/// with `leaf` and `attach` removed. Used by greedy leaf insertion.
pub(crate) fn scan_leaf_positions(
    genes: &[GeneIndex],
    s: &UnrootedTree,
    attach: VertexId,
    leaf: VertexId,
    base: &[usize],
    merged: (VertexId, VertexId),
) -> Result<Vec<((VertexId, VertexId), u64)>> {
    let sv = SupertreeView::new(s)?;
    let e = sv.edge_id(attach, leaf).ok_or(Error::NoSuchEdge(attach, leaf))?;
    let dc = 2 * e + usize::from(sv.edges[e].0 != attach);
    let targets = sv.targets(dc);
    let nt = sv.edges.len();
    let norm = |(a, b): (VertexId, VertexId)| if a < b { (a, b) } else { (b, a) };
    let (row, offset) = genes
        .par_iter()
        .zip(base.par_iter())
        .fold(
            || (vec![0u64; nt], 0u64),
            |(mut row, mut offset), (g, &b)| {
                let (hits, total) = gene_hits(g, &sv);
                if needs_scan(g, &sv, &hits, total, attach, leaf) {
                    let mut sc = Scratch::new(s.num_vertices(), g.num_vertices());
                    let mut merged_rf = 0;
                    scan_directed(g, &sv, attach, leaf, &mut sc, |st| match (st.edge, st.revisit) {
                        (_, true) => {}
                        (Some(e), false) => row[e] += st.rf as u64,
                        (None, false) => merged_rf = st.rf as u64,
                    });
                    // The merged edge is the current placement.
                    debug_assert_eq!(merged_rf, b as u64);
                } else {
                    offset += b as u64;
                }
                (row, offset)
            },
        )
        .reduce(
            || (vec![0u64; nt], 0u64),
            |(mut a, oa), (b, ob)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                (a, oa + ob)
            },
        );
    let here: u64 = base.iter().map(|&b| b as u64).sum();
    let mut out = vec![(norm(merged), here)];
    out.extend(targets.into_iter().map(|e| (sv.edges[e], row[e] + offset)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_single;
    use crate::taxa::{TaxonId, TaxonTable};
    use crate::tree::random_binary_tree;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tree(s: &str, taxa: &mut TaxonTable) -> UnrootedTree {
        parse_single(s, taxa).unwrap().into_tree()
    }

    #[test]
    fn quartet_has_two_neighbors() {
        let mut taxa = TaxonTable::new();
        let s = tree("((a,b),(c,d));", &mut taxa);
        assert_eq!(distinct_neighbors(&s).unwrap().len(), 2);
    }

    #[test]
    fn moves_keep_ids_and_leaves() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let taxa: Vec<_> = (0..9).map(TaxonId).collect();
        let s = random_binary_tree(&taxa, &mut rng).unwrap();
        for mv in spr_moves(&s).unwrap() {
            let t = apply_move(&s, &mv).unwrap();
            assert!(t.is_binary());
            assert_eq!(t.num_vertices(), s.num_vertices());
            assert_eq!(t.labels(), s.labels());
            assert!(t.has_edge(mv.attach, mv.pruned));
        }
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let mut taxa = TaxonTable::new();
        let s = tree("((a,b),(c,d));", &mut taxa);
        let a = s.leaf_of(taxa.get("a").unwrap()).unwrap();
        let x = s.neighbors(a)[0];
        let mv = SprMove {
            attach: x,
            pruned: a,
            regraft: (a, x),
        };
        assert!(apply_move(&s, &mv).is_err());
        let star = tree("(a,b,c,d);", &mut taxa);
        assert_eq!(spr_moves(&star), Err(Error::NotBinary));
    }

    #[test]
    fn aleph_covers_each_edge_twice_and_steps_are_adjacent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let taxa: Vec<_> = (0..12).map(TaxonId).collect();
        let s = random_binary_tree(&taxa, &mut rng).unwrap();
        let start = s.leaves().next().unwrap();
        let order = aleph_order(&s, start).unwrap();
        assert_eq!(order.len(), 2 * s.edges().len());
        for w in order.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert_eq!(order.first().unwrap().0, start);
        assert_eq!(order.last().unwrap().1, start);
    }

    #[test]
    fn scan_matches_recomputation_on_a_multree() {
        let mut taxa = TaxonTable::new();
        let s = tree("(((a,b),c),(d,(e,f)),g);", &mut taxa);
        let t = MulTree::new(tree("((a,(b,a)),((c,d),(e,(a,f))));", &mut taxa));
        for (x, y) in s.edges().into_iter().flat_map(|(u, v)| [(u, v), (v, u)]) {
            if s.is_leaf(x) {
                continue;
            }
            for (mv, rf) in scan_cut_edge(&s, &t, x, y).unwrap() {
                let moved = apply_move(&s, &mv).unwrap();
                assert_eq!(rf, rf_multree_supertree(&t, &moved).unwrap(), "{mv:?}");
            }
        }
    }

    #[test]
    fn search_matches_naive_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let names: Vec<String> = (0..8).map(|i| format!("t{i}")).collect();
        let mut table = TaxonTable::from_names(&names);
        for _ in 0..10 {
            let ids: Vec<_> = table.ids().collect();
            let s = random_binary_tree(&ids, &mut rng).unwrap();
            let trees: Vec<MulTree> = (0..3)
                .map(|_| {
                    let mut labels: Vec<_> = ids.iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
                    labels.push(ids[rng.gen_range(0..ids.len())]);
                    while labels.len() < 4 {
                        labels.push(ids[rng.gen_range(0..ids.len())]);
                    }
                    MulTree::new(random_binary_tree(&labels, &mut rng).unwrap())
                })
                .collect();
            let p = Profile::new(std::mem::take(&mut table), trees).unwrap();
            let best = spr_search(&p, &s).unwrap();
            let naive = spr_moves(&s)
                .unwrap()
                .into_iter()
                .map(|mv| {
                    let t = apply_move(&s, &mv).unwrap();
                    crate::rf::rf_profile(&p, &t).unwrap().total
                })
                .min()
                .unwrap();
            assert_eq!(best.best_score, naive);
            assert_eq!(crate::rf::rf_profile(&p, &best.best_tree).unwrap().total, naive);
            table = p.taxa().clone();
        }
    }
}
