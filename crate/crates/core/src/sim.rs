//! Simulated species trees and gene-tree profiles.
//!
//! Species trees come from a Yule process scaled to a fixed height. Gene
//! trees evolve inside them under independent Poisson duplication and loss
//! processes, may then receive subtree transfers, lose a random fraction
//! of their taxa and pick up NNI noise standing in for estimation error.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::newick::write_newick;
use crate::rf::rf_unrooted;
use crate::taxa::{TaxonId, TaxonSet, TaxonTable};
use crate::tree::{MulTree, UnrootedTree, VertexId};

/// Which evolutionary processes act on the gene trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    None,
    Dl,
    Lgt,
    Both,
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Condition::None),
            "dl" => Ok(Condition::Dl),
            "lgt" => Ok(Condition::Lgt),
            "both" => Ok(Condition::Both),
            _ => Err(Error::InvalidParameter(format!("unknown condition {s:?}"))),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::None => "none",
            Condition::Dl => "dl",
            Condition::Lgt => "lgt",
            Condition::Both => "both",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SimParams {
    pub n_taxa: usize,
    /// Root-to-leaf depth of the species tree; see [`default_height`].
    pub tree_height: f64,
    /// Rate of duplication and, separately, of loss per unit time.
    pub dl_rate: f64,
    /// Maximum transfers per gene tree; the count is uniform in `0..=lgt_count`.
    pub lgt_count: usize,
    /// Upper bound of the per-gene deletion fraction, which is uniform in
    /// `[0, deletion_fraction]`.
    pub deletion_fraction: f64,
    pub n_genes: usize,
    /// Random NNI moves applied to each gene tree.
    pub nni_moves: usize,
    pub condition: Condition,
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            n_taxa: 16,
            tree_height: default_height(16),
            dl_rate: 0.002,
            lgt_count: 2,
            deletion_fraction: 0.0,
            n_genes: 20,
            nni_moves: 0,
            condition: Condition::None,
            seed: 0,
        }
    }
}

/// Species tree height growing linearly with the taxon count, 4.4 time
/// units per taxon (220 for 50 taxa, 440 for 100).
pub fn default_height(n_taxa: usize) -> f64 {
    4.4 * n_taxa as f64
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.n_taxa < 4 {
            return bad("at least 4 taxa are needed");
        }
        if self.n_genes == 0 {
            return bad("at least one gene tree is needed");
        }
        if !(self.tree_height > 0.0 && self.tree_height.is_finite()) {
            return bad("tree height must be positive");
        }
        if !(self.dl_rate >= 0.0 && self.dl_rate.is_finite()) {
            return bad("duplication-loss rate must be non-negative");
        }
        if !(0.0..=0.25).contains(&self.deletion_fraction) {
            return bad("deletion fraction must lie in [0, 0.25]");
        }
        Ok(())
    }

    fn effective_dl(&self) -> f64 {
        match self.condition {
            Condition::Dl | Condition::Both => self.dl_rate,
            _ => 0.0,
        }
    }

    fn effective_lgt(&self) -> usize {
        match self.condition {
            Condition::Lgt | Condition::Both => self.lgt_count,
            _ => 0,
        }
    }
}

/// Rooted tree with a depth (time from the root) on every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct TimedTree {
    pub parent: Vec<Option<VertexId>>,
    pub children: Vec<Vec<VertexId>>,
    pub labels: Vec<Option<TaxonId>>,
    pub time: Vec<f64>,
    pub root: VertexId,
}

impl TimedTree {
    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.parent.len()).filter(move |&v| self.children[v].is_empty())
    }

    pub fn unrooted(&self) -> UnrootedTree {
        let mut adj = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                adj[v].push(p);
                adj[p].push(v);
            }
        }
        UnrootedTree::normalize(adj, self.labels.clone()).expect("timed trees are valid")
    }
}

/// Pure-birth tree on taxa `0..n`: every extant lineage splits at rate one,
/// and the times are scaled so that all leaves sit at depth `height`.
pub fn yule_tree<R: Rng + ?Sized>(n: usize, height: f64, rng: &mut R) -> Result<TimedTree> {
    if n < 2 {
        return Err(Error::InvalidParameter("a Yule tree needs at least 2 leaves".into()));
    }
    let mut parent = vec![None];
    let mut children = vec![Vec::new()];
    let mut time = vec![0.0];
    let mut alive: Vec<VertexId> = Vec::new();
    for _ in 0..2 {
        parent.push(Some(0));
        children.push(Vec::new());
        time.push(0.0);
        let v = parent.len() - 1;
        children[0].push(v);
        alive.push(v);
    }
    let mut now = 0.0;
    while alive.len() < n {
        now += Exp::new(alive.len() as f64).unwrap().sample(rng);
        let i = rng.gen_range(0..alive.len());
        let v = alive.swap_remove(i);
        time[v] = now;
        for _ in 0..2 {
            parent.push(Some(v));
            children.push(Vec::new());
            time.push(now);
            let c = parent.len() - 1;
            children[v].push(c);
            alive.push(c);
        }
    }
    let end = now + Exp::new(alive.len() as f64).unwrap().sample(rng);
    let scale = height / end;
    for t in time.iter_mut() {
        *t *= scale;
    }
    let mut labels = vec![None; parent.len()];
    alive.sort_unstable();
    for (i, &v) in alive.iter().enumerate() {
        time[v] = height;
        labels[v] = Some(TaxonId(i as u32));
    }
    Ok(TimedTree {
        parent,
        children,
        labels,
        time,
        root: 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    Duplication,
    Loss,
    Transfer,
    TransferSkipped,
    Deletion,
    Nni,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Duplication => "duplication",
            EventKind::Loss => "loss",
            EventKind::Transfer => "transfer",
            EventKind::TransferSkipped => "transfer_skipped",
            EventKind::Deletion => "deletion",
            EventKind::Nni => "nni",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub detail: String,
}

/// Rooted, binary gene tree whose leaves carry species labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneTree {
    pub parent: Vec<Option<VertexId>>,
    pub children: Vec<Vec<VertexId>>,
    pub labels: Vec<Option<TaxonId>>,
    pub root: VertexId,
}

impl GeneTree {
    pub fn num_leaves(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    pub fn to_multree(&self) -> Result<MulTree> {
        let mut adj = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                adj[v].push(p);
                adj[p].push(v);
            }
        }
        UnrootedTree::normalize(adj, self.labels.clone()).map(MulTree::new)
    }

    /// Vertices in the subtree of `v`, `v` included.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children[out[i]].iter().copied());
            i += 1;
        }
        out
    }

    /// `v` and its ancestors up to the root.
    pub fn path_to_root(&self, mut v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        while let Some(p) = self.parent[v] {
            out.push(p);
            v = p;
        }
        out
    }

    fn reachable(&self) -> Vec<VertexId> {
        self.subtree(self.root)
    }
}

/// A simulated gene tree with the events that shaped it.
#[derive(Clone, Debug)]
pub struct GeneTreeRecord {
    pub gene: MulTree,
    pub events: Vec<Event>,
    pub duplications: usize,
    pub losses: usize,
    /// Gene lineages that reached an internal species vertex and split.
    pub speciations: usize,
    pub transfers: usize,
}

const MAX_REDRAWS: usize = 10_000;

/// Evolves one gene family down the species tree. Along every branch,
/// duplications and losses each occur at rate `dl_rate`; a gene lineage at
/// an internal species vertex follows both child branches. Families with
/// fewer than four surviving copies are re-drawn.
pub fn evolve_duplication_loss<R: Rng + ?Sized>(
    species: &TimedTree,
    taxa: &TaxonTable,
    dl_rate: f64,
    rng: &mut R,
) -> Result<(GeneTree, GeneTreeRecord)> {
    if !(dl_rate >= 0.0 && dl_rate.is_finite()) {
        return Err(Error::InvalidParameter(
            "duplication-loss rate must be non-negative".into(),
        ));
    }
    for _ in 0..MAX_REDRAWS {
        let (gene, dup, loss, spec, events) = draw_family(species, taxa, dl_rate, rng);
        if gene.num_leaves() >= 4 {
            let record = GeneTreeRecord {
                gene: gene.to_multree()?,
                events,
                duplications: dup,
                losses: loss,
                speciations: spec,
                transfers: 0,
            };
            return Ok((gene, record));
        }
    }
    Err(Error::InvalidParameter(
        "gene families keep going extinct; lower the loss rate".into(),
    ))
}

type Family = (GeneTree, usize, usize, usize, Vec<Event>);

fn draw_family<R: Rng + ?Sized>(species: &TimedTree, taxa: &TaxonTable, rate: f64, rng: &mut R) -> Family {
    let mut parent: Vec<Option<VertexId>> = vec![None];
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut labels: Vec<Option<TaxonId>> = vec![None];
    let mut dead: Vec<bool> = vec![false];
    let (mut dup, mut loss, mut spec) = (0, 0, 0);
    let mut events = Vec::new();
    let total = Exp::new(2.0 * rate.max(f64::MIN_POSITIVE)).unwrap();
    // (gene vertex, species vertex at the bottom of the branch, start time)
    let mut work: Vec<(VertexId, VertexId, f64)> = Vec::new();
    let push = |parent: &mut Vec<Option<VertexId>>,
                children: &mut Vec<Vec<VertexId>>,
                labels: &mut Vec<Option<TaxonId>>,
                dead: &mut Vec<bool>,
                p: VertexId| {
        parent.push(Some(p));
        children.push(Vec::new());
        labels.push(None);
        dead.push(false);
        let v = parent.len() - 1;
        children[p].push(v);
        v
    };
    // The family starts at the species root, which splits at once.
    spec += 1;
    for &c in &species.children[species.root] {
        let g = push(&mut parent, &mut children, &mut labels, &mut dead, 0);
        work.push((g, c, species.time[species.root]));
    }
    while let Some((g, sp, mut t)) = work.pop() {
        let end = species.time[sp];
        let mut g = g;
        loop {
            let w = if rate > 0.0 { total.sample(rng) } else { f64::INFINITY };
            if t + w >= end {
                break;
            }
            t += w;
            let name = species_label(species, taxa, sp);
            if rng.gen_bool(0.5) {
                dup += 1;
                events.push(Event {
                    kind: EventKind::Duplication,
                    detail: format!("branch={name} time={t:.3}"),
                });
                let a = push(&mut parent, &mut children, &mut labels, &mut dead, g);
                let b = push(&mut parent, &mut children, &mut labels, &mut dead, g);
                work.push((b, sp, t));
                g = a;
            } else {
                loss += 1;
                events.push(Event {
                    kind: EventKind::Loss,
                    detail: format!("branch={name} time={t:.3}"),
                });
                dead[g] = true;
                break;
            }
        }
        if dead[g] {
            continue;
        }
        if species.children[sp].is_empty() {
            labels[g] = species.labels[sp];
        } else {
            spec += 1;
            for &c in &species.children[sp] {
                let h = push(&mut parent, &mut children, &mut labels, &mut dead, g);
                work.push((h, c, end));
            }
        }
    }
    let gene = compact(parent, children, labels, &dead);
    (gene, dup, loss, spec, events)
}

fn species_label(species: &TimedTree, taxa: &TaxonTable, v: VertexId) -> String {
    match species.labels[v] {
        Some(t) if t.index() < taxa.len() => taxa.name(t).to_string(),
        Some(t) => t.to_string(),
        None => format!("node{v}"),
    }
}

/// Drops dead and leafless lineages and suppresses unary vertices.
fn compact(
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    labels: Vec<Option<TaxonId>>,
    dead: &[bool],
) -> GeneTree {
    let n = parent.len();
    // Post-order liveness: a vertex survives if it is a labeled leaf or has
    // a surviving child.
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        order.extend(children[order[i]].iter().copied());
        i += 1;
    }
    let mut alive = vec![false; n];
    for &v in order.iter().rev() {
        alive[v] = !dead[v] && (labels[v].is_some() || children[v].iter().any(|&c| alive[c]));
    }
    // Collapse unary chains, mapping every kept vertex to a new id.
    let mut out = GeneTree {
        parent: Vec::new(),
        children: Vec::new(),
        labels: Vec::new(),
        root: 0,
    };
    if !alive[0] {
        return out;
    }
    let mut stack: Vec<(VertexId, Option<VertexId>)> = vec![(0, None)];
    while let Some((mut v, p)) = stack.pop() {
        loop {
            let live: Vec<VertexId> = children[v].iter().copied().filter(|&c| alive[c]).collect();
            if live.len() == 1 && labels[v].is_none() {
                v = live[0];
            } else {
                break;
            }
        }
        let id = out.parent.len();
        out.parent.push(p);
        out.children.push(Vec::new());
        out.labels.push(labels[v]);
        if let Some(p) = p {
            out.children[p].push(id);
        }
        for &c in children[v].iter().rev() {
            if alive[c] {
                stack.push((c, Some(id)));
            }
        }
    }
    out
}

/// One transfer: the subtree at `moved` is pruned and regrafted onto the
/// edge from `above` to `below`, ids as in the tree before the transfer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub moved: VertexId,
    pub above: VertexId,
    pub below: VertexId,
}

/// Edges `(a, b)` that may receive the subtree at `c`: `b` outside the
/// subtree, not an ancestor of `c` (so `a` and `b` are not both on the
/// root-to-`c` path) and not `c`'s sibling, which would change nothing.
pub fn legal_targets(g: &GeneTree, c: VertexId) -> Vec<(VertexId, VertexId)> {
    let Some(pc) = g.parent[c] else {
        return Vec::new();
    };
    let mut blocked = vec![false; g.parent.len()];
    for v in g.subtree(c) {
        blocked[v] = true;
    }
    for v in g.path_to_root(c) {
        blocked[v] = true;
    }
    g.reachable()
        .into_iter()
        .filter(|&b| !blocked[b])
        .filter_map(|b| g.parent[b].map(|a| (a, b)))
        .filter(|&(a, _)| a != pc)
        .collect()
}

/// Applies up to `count` random subtree transfers. A draw with no legal
/// target is skipped and reported as `None`.
pub fn apply_lgt<R: Rng + ?Sized>(g: &mut GeneTree, count: usize, rng: &mut R) -> Vec<Option<Transfer>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let candidates: Vec<(VertexId, Vec<(VertexId, VertexId)>)> = g
            .reachable()
            .into_iter()
            .map(|c| (c, legal_targets(g, c)))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        if candidates.is_empty() {
            out.push(None);
            continue;
        }
        let (c, targets) = &candidates[rng.gen_range(0..candidates.len())];
        let (a, b) = targets[rng.gen_range(0..targets.len())];
        transfer(g, *c, a, b);
        out.push(Some(Transfer {
            moved: *c,
            above: a,
            below: b,
        }));
    }
    out
}

fn transfer(g: &mut GeneTree, c: VertexId, a: VertexId, b: VertexId) {
    let p = g.parent[c].expect("moved subtree has a parent");
    let sib = *g.children[p].iter().find(|&&w| w != c).unwrap();
    // Splice p out.
    match g.parent[p] {
        Some(pp) => {
            for w in g.children[pp].iter_mut() {
                if *w == p {
                    *w = sib;
                }
            }
            g.parent[sib] = Some(pp);
        }
        None => {
            g.parent[sib] = None;
            g.root = sib;
        }
    }
    // Reuse p to subdivide (a, b).
    for w in g.children[a].iter_mut() {
        if *w == b {
            *w = p;
        }
    }
    g.parent[p] = Some(a);
    g.children[p] = vec![b, c];
    g.parent[b] = Some(p);
}

/// Removes every copy of `floor(fraction * |M|)` uniformly chosen taxa.
pub fn delete_taxa<R: Rng + ?Sized>(gene: &MulTree, fraction: f64, rng: &mut R) -> Result<(MulTree, Vec<TaxonId>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "deletion fraction {fraction} outside [0, 1]"
        )));
    }
    let mut labels: Vec<TaxonId> = gene.label_set().iter().collect();
    let d = (fraction * labels.len() as f64).floor() as usize;
    if d == 0 {
        return Ok((gene.clone(), Vec::new()));
    }
    if d >= labels.len() {
        return Err(Error::InvalidParameter("deletion would remove every taxon".into()));
    }
    labels.shuffle(rng);
    let mut gone = labels[..d].to_vec();
    gone.sort_unstable();
    let keep: TaxonSet = labels[d..].iter().copied().collect();
    Ok((MulTree::new(gene.tree().restrict_to_taxa(&keep)?), gone))
}

/// Applies `moves` random nearest-neighbor interchanges.
pub fn nni_perturb<R: Rng + ?Sized>(t: &UnrootedTree, moves: usize, rng: &mut R) -> Result<UnrootedTree> {
    let mut cur = t.clone();
    for _ in 0..moves {
        let inner = cur.internal_edges();
        if inner.is_empty() {
            break;
        }
        let (u, v) = inner[rng.gen_range(0..inner.len())];
        let us: Vec<_> = cur.neighbors(u).iter().copied().filter(|&w| w != v).collect();
        let vs: Vec<_> = cur.neighbors(v).iter().copied().filter(|&w| w != u).collect();
        let a = us[rng.gen_range(0..us.len())];
        let b = vs[rng.gen_range(0..vs.len())];
        let mut adj: Vec<Vec<VertexId>> = (0..cur.num_vertices()).map(|w| cur.neighbors(w).to_vec()).collect();
        for (x, from, to) in [(u, a, b), (v, b, a), (a, u, v), (b, v, u)] {
            for w in adj[x].iter_mut() {
                if *w == from {
                    *w = to;
                }
            }
        }
        cur = UnrootedTree::from_parts(adj, cur.labels().to_vec())?;
    }
    Ok(cur)
}

/// Average topological error in percent: RF distance over the number of
/// internal edges of both trees, 0 when neither has one.
pub fn ate(truth: &UnrootedTree, estimate: &UnrootedTree) -> Result<f64> {
    if truth.taxa() != estimate.taxa() {
        return Err(Error::LabelsNotContained);
    }
    let rf = rf_unrooted(truth, estimate)?;
    let edges = truth.internal_edges().len() + estimate.internal_edges().len();
    Ok(if edges == 0 {
        0.0
    } else {
        100.0 * rf as f64 / edges as f64
    })
}

/// A simulated data set: the species tree and one record per gene.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub taxa: TaxonTable,
    pub species: UnrootedTree,
    pub genes: Vec<GeneTreeRecord>,
    pub params: SimParams,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs the full pipeline. The species tree uses stream 0 of the seed and
/// gene `i` stream `i + 1`, so output does not depend on thread count.
pub fn simulate(params: &SimParams) -> Result<Dataset> {
    params.validate()?;
    let taxa = TaxonTable::from_names((1..=params.n_taxa).map(|i| format!("t{i}")));
    let mut rng = rng_for(params.seed, 0);
    let species = yule_tree(params.n_taxa, params.tree_height, &mut rng)?;
    let dl = params.effective_dl();
    let lgt = params.effective_lgt();
    let genes = (0..params.n_genes)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(params.seed, i as u64 + 1);
            let (mut gene, mut rec) = evolve_duplication_loss(&species, &taxa, dl, &mut rng)?;
            if lgt > 0 {
                let count = rng.gen_range(0..=lgt);
                for tr in apply_lgt(&mut gene, count, &mut rng) {
                    rec.events.push(match tr {
                        Some(t) => {
                            rec.transfers += 1;
                            let moved = leaf_names(&gene, t.moved, &taxa);
                            let below = leaf_names(&gene, t.below, &taxa);
                            Event {
                                kind: EventKind::Transfer,
                                detail: format!("moved={moved} onto_above={below}"),
                            }
                        }
                        None => Event {
                            kind: EventKind::TransferSkipped,
                            detail: "no legal target".into(),
                        },
                    });
                }
                rec.gene = gene.to_multree()?;
            }
            if params.deletion_fraction > 0.0 {
                let f = rng.gen_range(0.0..=params.deletion_fraction);
                let (g, gone) = delete_taxa(&rec.gene, f, &mut rng)?;
                rec.gene = g;
                for t in gone {
                    rec.events.push(Event {
                        kind: EventKind::Deletion,
                        detail: format!("taxon={}", taxa.name(t)),
                    });
                }
            }
            if params.nni_moves > 0 {
                rec.gene = MulTree::new(nni_perturb(rec.gene.tree(), params.nni_moves, &mut rng)?);
                rec.events.push(Event {
                    kind: EventKind::Nni,
                    detail: format!("moves={}", params.nni_moves),
                });
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        taxa,
        species: species.unrooted(),
        genes,
        params: params.clone(),
    })
}

fn leaf_names(g: &GeneTree, v: VertexId, taxa: &TaxonTable) -> String {
    let mut names: Vec<&str> = g
        .subtree(v)
        .into_iter()
        .filter_map(|w| g.labels[w])
        .map(|t| taxa.name(t))
        .collect();
    names.sort_unstable();
    names.join(",")
}

impl Dataset {
    pub fn profile_newick(&self) -> String {
        let mut out = String::new();
        for g in &self.genes {
            out.push_str(&write_newick(g.gene.tree(), &self.taxa));
            out.push('\n');
        }
        out
    }

    /// `gene_id\tevent\tdetail` lines, genes numbered from 1.
    pub fn event_log(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.genes.iter().enumerate() {
            for e in &g.events {
                out.push_str(&format!("{}\t{}\t{}\n", i + 1, e.kind, e.detail));
            }
        }
        out
    }

    /// Writes `species.nwk`, `genes.nwk` and `events.tsv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("species.nwk"), write_newick(&self.species, &self.taxa) + "\n")?;
        std::fs::write(dir.join("genes.nwk"), self.profile_newick())?;
        std::fs::write(dir.join("events.tsv"), self.event_log())
    }
}
