use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use mulrf::oracle::{rf_differentiation_exhaustive, rf_mul_pair_exhaustive};
use mulrf::rf::{rf_multree_supertree, rf_profile, rf_unrooted};
use mulrf::search::{local_search, InitStrategy, SearchConfig};
use mulrf::sim::{ate, default_height, simulate, Condition, SimParams};
use mulrf::{parse_newick, write_newick, MulTree, Profile, TaxonTable};

const EXIT_INPUT: u8 = 2;
const EXIT_LEAVES: u8 = 3;
const EXIT_HARD: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mulrf",
    version,
    about = "Robinson-Foulds supertrees from multi-labeled gene trees"
)]
struct Cli {
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a binary supertree minimizing the total RF distance to a profile.
    Supertree(SupertreeArgs),
    /// RF distance between two trees.
    Rfdist(RfdistArgs),
    /// Simulate a species tree and a gene-tree profile.
    Simulate(SimulateArgs),
    /// Average topological error between a true and an estimated tree.
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Init {
    Random,
    Greedy,
    GreedyRandom,
}

#[derive(clap::Args)]
struct SupertreeArgs {
    /// Profile of Newick gene trees, one per `;`.
    #[arg(short, long)]
    input: PathBuf,
    /// Where to write the supertree; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,
    /// Random seed; drawn from the clock when absent and always echoed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Init::GreedyRandom)]
    init: Init,
    /// Write `iteration\tscore` lines for the best restart.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Also report the distance to every input tree.
    #[arg(long)]
    per_tree: bool,
}

#[derive(clap::Args)]
struct RfdistArgs {
    a: PathBuf,
    b: PathBuf,
    /// Cross-check against exhaustive enumeration of differentiations.
    #[arg(long)]
    oracle: bool,
    /// Allow two mul-trees by brute force over copy assignments.
    #[arg(long)]
    oracle_small: bool,
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 16)]
    taxa: usize,
    #[arg(long, default_value_t = 20)]
    genes: usize,
    #[arg(long, default_value = "none", value_parser = parse_condition)]
    condition: Condition,
    /// Duplication rate, and separately loss rate, per unit time.
    #[arg(long, default_value_t = 0.002)]
    dl_rate: f64,
    /// Maximum transfers per gene tree.
    #[arg(long, default_value_t = 2)]
    lgt: usize,
    /// Maximum fraction of each gene tree's taxa to delete, at most 0.25.
    #[arg(long, default_value_t = 0.0)]
    delete: f64,
    /// Species tree height; 4.4 per taxon when absent.
    #[arg(long)]
    height: Option<f64>,
    /// Random NNI moves applied to each gene tree.
    #[arg(long, default_value_t = 0)]
    nni: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    truth: PathBuf,
    estimate: PathBuf,
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    s.parse().map_err(|e: mulrf::Error| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Supertree(a) => cmd_supertree(a, cli.verbose),
        Command::Rfdist(a) => cmd_rfdist(a),
        Command::Simulate(a) => cmd_simulate(a, cli.verbose),
        Command::Evaluate(a) => cmd_evaluate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn read_trees(path: &Path, taxa: &mut TaxonTable) -> Result<Vec<MulTree>, Failure> {
    let text = read(path)?;
    let doc = parse_newick(&text, taxa).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    if doc.is_empty() {
        return Err(Failure::new(EXIT_INPUT, format!("{}: no trees", path.display())));
    }
    Ok(doc.trees)
}

fn read_one(path: &Path, taxa: &mut TaxonTable) -> Result<MulTree, Failure> {
    let mut trees = read_trees(path, taxa)?;
    if trees.len() > 1 {
        return Err(Failure::new(
            EXIT_INPUT,
            format!("{}: expected one tree, found {}", path.display(), trees.len()),
        ));
    }
    Ok(trees.pop().unwrap())
}

fn clock_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0)
}

fn cmd_supertree(a: SupertreeArgs, verbose: bool) -> CmdResult {
    let mut taxa = TaxonTable::new();
    let trees = read_trees(&a.input, &mut taxa)?;
    let profile = Profile::new(taxa, trees).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    let universe = profile.label_universe().len();
    if universe < 4 {
        return Err(Failure::new(
            EXIT_LEAVES,
            format!("the profile has {universe} taxa; a supertree needs at least 4"),
        ));
    }
    let seed = a.seed.unwrap_or_else(clock_seed);
    let cfg = SearchConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        seed,
        init: match a.init {
            Init::Random => InitStrategy::Random,
            Init::Greedy => InitStrategy::Greedy,
            Init::GreedyRandom => InitStrategy::GreedyThenRandom,
        },
        workers: a.workers,
    };
    if verbose {
        eprintln!(
            "{} trees, {universe} taxa, {} restarts, seed {seed}",
            profile.len(),
            cfg.restarts
        );
    }
    let result = local_search(&profile, &cfg).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    let newick = write_newick(&result.best_tree, profile.taxa());
    let mut out = String::new();
    match &a.output {
        Some(path) => write(path, &(newick + "\n"))?,
        None => writeln!(out, "{newick}").unwrap(),
    }
    writeln!(out, "score\t{}", result.best_score).unwrap();
    writeln!(out, "seed\t{seed}").unwrap();
    if a.per_tree {
        let d = rf_profile(&profile, &result.best_tree).map_err(|e| Failure::new(1, e.to_string()))?;
        for (i, s) in d.per_tree.iter().enumerate() {
            writeln!(out, "tree\t{}\t{s}", i + 1).unwrap();
        }
    }
    print!("{out}");
    if let Some(path) = &a.trace {
        let mut t = String::from("iteration\tscore\n");
        for (i, s) in result.restarts[result.best_restart].scores.iter().enumerate() {
            writeln!(t, "{i}\t{s}").unwrap();
        }
        write(path, &t)?;
    }
    let searches: usize = result.restarts.iter().map(|r| r.spr_searches).sum();
    eprintln!(
        "elapsed {:.3}s, best restart {}, {searches} SPR searches, mean {:.3}ms each",
        result.elapsed.as_secs_f64(),
        result.best_restart,
        result.mean_spr_search().as_secs_f64() * 1e3
    );
    Ok(())
}

fn cmd_rfdist(a: RfdistArgs) -> CmdResult {
    let mut taxa = TaxonTable::new();
    let ta = read_one(&a.a, &mut taxa)?;
    let tb = read_one(&a.b, &mut taxa)?;
    let single_a = ta.tree().is_singly_labeled();
    let single_b = tb.tree().is_singly_labeled();
    let internal = |e: mulrf::Error| Failure::new(1, e.to_string());
    let (dist, oracle) = if !single_a && !single_b {
        if !a.oracle_small {
            return Err(Failure::new(
                EXIT_HARD,
                "both trees are multi-labeled; the RF distance between two mul-trees is NP-hard \
                 to compute. Pass --oracle-small to brute-force small instances",
            ));
        }
        let (d, _) = rf_mul_pair_exhaustive(&ta, &tb).map_err(|e| Failure::new(EXIT_HARD, e.to_string()))?;
        (d, None)
    } else {
        // Put the mul-tree (or the tree with fewer labels) first.
        let (t, s) = if !single_a || (single_b && ta.label_set().is_subset(&tb.label_set())) {
            (&ta, &tb)
        } else {
            (&tb, &ta)
        };
        if !t.label_set().is_subset(&s.label_set()) {
            return Err(Failure::new(
                EXIT_LEAVES,
                "the labels of one tree must be contained in the other's",
            ));
        }
        let d = if single_a && single_b && ta.label_set() == tb.label_set() {
            rf_unrooted(ta.tree(), tb.tree()).map_err(internal)?
        } else {
            rf_multree_supertree(t, s.tree()).map_err(internal)?
        };
        let oracle = if a.oracle {
            Some(rf_differentiation_exhaustive(t, s.tree()).map_err(|e| Failure::new(EXIT_HARD, e.to_string()))?)
        } else {
            None
        };
        (d, oracle)
    };
    println!("{dist}");
    if let Some((min, values)) = oracle {
        let all: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        println!("oracle\t{min}");
        println!("differentiations\t{}", all.join(","));
        println!("agree\t{}", min == dist && values.len() == 1);
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, verbose: bool) -> CmdResult {
    let params = SimParams {
        n_taxa: a.taxa,
        tree_height: a.height.unwrap_or_else(|| default_height(a.taxa)),
        dl_rate: a.dl_rate,
        lgt_count: a.lgt,
        deletion_fraction: a.delete,
        n_genes: a.genes,
        nni_moves: a.nni,
        condition: a.condition,
        seed: a.seed.unwrap_or_else(clock_seed),
    };
    params.validate().map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    let start = Instant::now();
    let data = simulate(&params).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    data.write_to(&a.output)
        .map_err(|e| Failure::new(1, format!("{}: {e}", a.output.display())))?;
    println!("seed\t{}", params.seed);
    println!("species\t{}", a.output.join("species.nwk").display());
    println!("genes\t{}", a.output.join("genes.nwk").display());
    println!("events\t{}", a.output.join("events.tsv").display());
    if verbose {
        let dup: usize = data.genes.iter().map(|g| g.duplications).sum();
        let loss: usize = data.genes.iter().map(|g| g.losses).sum();
        let lgt: usize = data.genes.iter().map(|g| g.transfers).sum();
        eprintln!("{dup} duplications, {loss} losses, {lgt} transfers");
    }
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs) -> CmdResult {
    let mut taxa = TaxonTable::new();
    let truth = read_one(&a.truth, &mut taxa)?;
    let est = read_one(&a.estimate, &mut taxa)?;
    if !truth.tree().is_singly_labeled() || !est.tree().is_singly_labeled() {
        return Err(Failure::new(EXIT_LEAVES, "both trees must be singly labeled"));
    }
    if truth.label_set() != est.label_set() {
        return Err(Failure::new(EXIT_LEAVES, "the trees have different leaf sets"));
    }
    let v = ate(truth.tree(), est.tree()).map_err(|e| Failure::new(EXIT_LEAVES, e.to_string()))?;
    println!("{v:.2}");
    Ok(())
}
