//! Hill-climbing supertree search with random restarts.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::rf::{rf_multree_supertree, rf_profile};
use crate::spr::{apply_move, scan_leaf_positions, spr_search_indexed, GeneIndex, ProfileIndex, SprMove};
use crate::taxa::{TaxonId, TaxonSet};
use crate::tree::{random_binary_tree, MulTree, TreeGrower, UnrootedTree, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitStrategy {
    /// Uniform sequential random leaf insertion.
    Random,
    /// Taxa in decreasing profile frequency, each at its best edge.
    Greedy,
    /// Greedy for the first restart, random for the others.
    GreedyThenRandom,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub init: InitStrategy,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 10,
            max_iterations: 1000,
            seed: 0,
            init: InitStrategy::GreedyThenRandom,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RestartTrace {
    /// Profile score of the initial tree and after every accepted move.
    pub scores: Vec<usize>,
    /// False when the iteration cap stopped the climb.
    pub converged: bool,
    pub elapsed: Duration,
    pub spr_searches: usize,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_tree: UnrootedTree,
    pub best_score: usize,
    pub best_restart: usize,
    pub restarts: Vec<RestartTrace>,
    pub elapsed: Duration,
}

impl SearchResult {
    /// Mean wall time of one full neighborhood search.
    pub fn mean_spr_search(&self) -> Duration {
        let n: usize = self.restarts.iter().map(|r| r.spr_searches).sum();
        let t: Duration = self.restarts.iter().map(|r| r.elapsed).sum();
        if n == 0 {
            Duration::ZERO
        } else {
            t / n as u32
        }
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Builds a binary tree on every taxon of the profile.
pub fn initial_supertree(p: &Profile, strategy: InitStrategy, rng: &mut ChaCha8Rng) -> Result<UnrootedTree> {
    let universe: Vec<TaxonId> = p.label_universe().iter().collect();
    match strategy {
        InitStrategy::Random => random_binary_tree(&universe, rng),
        InitStrategy::Greedy | InitStrategy::GreedyThenRandom => greedy_supertree(p),
    }
}

/// Inserts taxa by decreasing number of trees containing them, each on the
/// edge that minimizes the score against the profile restricted to the
/// taxa placed so far.
pub fn greedy_supertree(p: &Profile) -> Result<UnrootedTree> {
    let mut freq: Vec<(usize, TaxonId)> = p
        .label_universe()
        .iter()
        .map(|t| (p.trees().iter().filter(|g| g.multiplicity(t) > 0).count(), t))
        .collect();
    freq.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let order: Vec<TaxonId> = freq.into_iter().map(|(_, t)| t).collect();
    if order.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let head = order.len().min(3);
    let mut s = TreeGrower::new(&order[..head])?.build();
    let mut placed: TaxonSet = order[..head].iter().copied().collect();
    for &taxon in &order[head..] {
        placed.insert(taxon);
        let (grown, attach, leaf) = hang_leaf(&s, s.edges()[0], taxon);
        let restricted: Vec<MulTree> = p
            .trees()
            .iter()
            .filter(|t| !t.label_set().intersection(&placed).is_empty())
            .map(|t| t.tree().restrict_to_taxa(&placed).map(MulTree::new))
            .collect::<Result<_>>()?;
        let base: Vec<usize> = restricted
            .par_iter()
            .map(|t| rf_multree_supertree(t, &grown))
            .collect::<Result<_>>()?;
        let genes: Vec<GeneIndex> = restricted.par_iter().map(GeneIndex::new).collect();
        let merged = s.edges()[0];
        let options = scan_leaf_positions(&genes, &grown, attach, leaf, &base, merged)?;
        let mut best = 0;
        for (i, o) in options.iter().enumerate() {
            if o.1 < options[best].1 {
                best = i;
            }
        }
        s = if best == 0 {
            grown
        } else {
            let mv = SprMove {
                attach,
                pruned: leaf,
                regraft: options[best].0,
            };
            apply_move(&grown, &mv)?
        };
    }
    Ok(s)
}

/// Subdivides `edge` and hangs a leaf labeled `taxon` from the new vertex.
/// Returns the tree with the ids of the new internal vertex and leaf.
fn hang_leaf(s: &UnrootedTree, edge: (VertexId, VertexId), taxon: TaxonId) -> (UnrootedTree, VertexId, VertexId) {
    let n = s.num_vertices();
    let (u, v) = edge;
    let mut adj: Vec<Vec<VertexId>> = (0..n).map(|w| s.neighbors(w).to_vec()).collect();
    let mut labels = s.labels().to_vec();
    for w in adj[u].iter_mut() {
        if *w == v {
            *w = n;
        }
    }
    for w in adj[v].iter_mut() {
        if *w == u {
            *w = n;
        }
    }
    adj.push(vec![u, v, n + 1]);
    adj.push(vec![n]);
    labels.push(None);
    labels.push(Some(taxon));
    let t = UnrootedTree::from_parts(adj, labels).expect("subdividing an edge keeps a valid tree");
    (t, n, n + 1)
}

/// Repeated SPR search from one starting tree until no neighbor improves.
pub fn climb(index: &ProfileIndex, start: UnrootedTree, max_iterations: usize) -> Result<(UnrootedTree, RestartTrace)> {
    let t0 = Instant::now();
    let mut current = start;
    let mut scores = Vec::new();
    let mut converged = false;
    let mut searches = 0;
    if current.num_leaves() < 4 {
        let score = index
            .genes()
            .iter()
            .map(|g| rf_multree_supertree(g.tree(), &current))
            .sum::<Result<usize>>()?;
        scores.push(score);
        converged = true;
    } else {
        for _ in 0..max_iterations {
            let step = spr_search_indexed(index, &current)?;
            searches += 1;
            if scores.is_empty() {
                scores.push(step.current_score);
            }
            if step.best_score < step.current_score {
                current = step.best_tree;
                scores.push(step.best_score);
            } else {
                converged = true;
                break;
            }
        }
    }
    Ok((
        current,
        RestartTrace {
            scores,
            converged,
            elapsed: t0.elapsed(),
            spr_searches: searches,
        },
    ))
}

/// Hill climbing from `cfg.restarts` starting trees; returns the best local
/// optimum. Results depend only on the configuration, not on scheduling.
pub fn local_search(p: &Profile, cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.restarts == 0 || cfg.max_iterations == 0 {
        return Err(Error::InvalidParameter(
            "restarts and max_iterations must be at least 1".into(),
        ));
    }
    if cfg.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        pool.install(|| run(p, cfg))
    } else {
        run(p, cfg)
    }
}

fn run(p: &Profile, cfg: &SearchConfig) -> Result<SearchResult> {
    let t0 = Instant::now();
    let index = ProfileIndex::new(p);
    let outcomes: Vec<(UnrootedTree, RestartTrace)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(cfg.seed, i);
            let strategy = match (cfg.init, i) {
                (InitStrategy::GreedyThenRandom, 0) => InitStrategy::Greedy,
                (InitStrategy::GreedyThenRandom, _) => InitStrategy::Random,
                (s, _) => s,
            };
            let start = initial_supertree(p, strategy, &mut rng)?;
            climb(&index, start, cfg.max_iterations)
        })
        .collect::<Result<_>>()?;
    let best_restart = (0..outcomes.len())
        .min_by_key(|&i| (*outcomes[i].1.scores.last().unwrap(), i))
        .unwrap();
    let best_tree = outcomes[best_restart].0.clone();
    let best_score = *outcomes[best_restart].1.scores.last().unwrap();
    debug_assert_eq!(rf_profile(p, &best_tree).map(|d| d.total), Ok(best_score));
    Ok(SearchResult {
        best_tree,
        best_score,
        best_restart,
        restarts: outcomes.into_iter().map(|(_, r)| r).collect(),
        elapsed: t0.elapsed(),
    })
}
