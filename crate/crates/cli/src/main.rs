use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fitch_core::completion::{reduce_mas_to_fc, solve_exact, solve_exact_capped, CompletionError, WeightTable, DEFAULT_CAP};
use fitch_core::format::{
    export_dot, parse_instance, render_cotree, render_decimal, render_edge_labeled_tree, render_instance, render_tuple,
    Instance,
};
use fitch_core::oracle::{
    brute_force_best_fitch, brute_force_sat, numbered_names, random_partial_tuple, random_satisfiable_tuple,
    random_weight_table,
};
use fitch_core::recognition::{recognize, Recognition};
use fitch_core::relations::{Digraph, PartialTuple};
use fitch_core::satisfiability::{build_fitch_cotree, complete_tuple, SatError, SatResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const YES: u8 = 0;
const NO: u8 = 1;
const INVALID: u8 = 2;
const LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "fitch", version, about = "Fitch graph completion of partial xenology relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide Fitch-satisfiability of a partial tuple and print an explaining cotree
    Check {
        /// Instance file, `-` for stdin
        input: PathBuf,
        #[arg(long)]
        newick: Option<PathBuf>,
        /// Write the completed Fitch graph as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the full tuple explained by the cotree of `check`
    Complete {
        input: PathBuf,
        #[arg(long)]
        newick: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Test whether a digraph (`vertices` + `arcs`) is a Fitch graph
    Recognize {
        input: PathBuf,
        #[arg(long)]
        newick: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Find a maximum-weight Fitch graph for a weight table
    Solve {
        input: PathBuf,
        /// Largest vertex count accepted by the exact solver
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Emit the weighted completion instance of a digraph's maximum acyclic subgraph problem
    ReduceMas { input: PathBuf },
    /// Cross-check the algorithms against brute force on random instances
    Oracle {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per check
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl ToString) -> Failure {
    Failure {
        code: INVALID,
        message: message.to_string(),
    }
}

fn read_input(path: &Path) -> Result<Instance, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| invalid(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?
    };
    parse_instance(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn read_tuple(path: &Path) -> Result<PartialTuple, Failure> {
    match read_input(path)? {
        Instance::Tuple(t) => Ok(t),
        _ => Err(invalid(format!("{}: expected a tuple instance (vertices, E0, E1, Efwd)", path.display()))),
    }
}

fn read_digraph(path: &Path) -> Result<Digraph, Failure> {
    match read_input(path)? {
        Instance::Digraph(g) => Ok(g),
        _ => Err(invalid(format!("{}: expected a digraph instance (vertices, arcs)", path.display()))),
    }
}

fn write_artifact(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: INVALID,
            message: format!("{}: {e}", p.display()),
        }),
        None => Ok(()),
    }
}

fn check(input: &Path, newick: &Option<PathBuf>, dot: &Option<PathBuf>) -> Result<u8, Failure> {
    let t = read_tuple(input)?;
    match build_fitch_cotree(&t).map_err(invalid)? {
        SatResult::Satisfiable(tree) => {
            let text = render_cotree(&tree);
            println!("satisfiable");
            println!("cotree: {text}");
            if let Ok(e) = tree.to_edge_labeled_tree() {
                println!("edge-labeled tree: {}", render_edge_labeled_tree(&e));
            }
            write_artifact(newick, &format!("{text}\n"))?;
            let full = tree.evaluate().map_err(invalid)?;
            write_artifact(dot, &export_dot(&full.digraph()))?;
            Ok(YES)
        }
        SatResult::Unsatisfiable(r) => {
            println!("unsatisfiable: {r}");
            Ok(NO)
        }
    }
}

fn complete(input: &Path, newick: &Option<PathBuf>, dot: &Option<PathBuf>) -> Result<u8, Failure> {
    let t = read_tuple(input)?;
    match complete_tuple(&t) {
        Ok(full) => {
            println!("{}", render_tuple(&full));
            if newick.is_some() {
                if let Ok(SatResult::Satisfiable(tree)) = build_fitch_cotree(&t) {
                    write_artifact(newick, &format!("{}\n", render_cotree(&tree)))?;
                }
            }
            write_artifact(dot, &export_dot(&full.digraph()))?;
            Ok(YES)
        }
        Err(SatError::Unsatisfiable(r)) => {
            eprintln!("unsatisfiable: {r}");
            Ok(NO)
        }
        Err(SatError::Invalid(report)) => Err(invalid(report)),
    }
}

fn recognize_cmd(input: &Path, newick: &Option<PathBuf>, dot: &Option<PathBuf>) -> Result<u8, Failure> {
    let g = read_digraph(input)?;
    write_artifact(dot, &export_dot(&g))?;
    match recognize(&g, true) {
        Recognition::Fitch { cotree } => {
            println!("fitch");
            if let Some(tree) = cotree {
                let text = render_cotree(&tree);
                println!("cotree: {text}");
                write_artifact(newick, &format!("{text}\n"))?;
            }
            Ok(YES)
        }
        Recognition::NotFitch { triple: [x, y, z], class } => {
            println!("not fitch: forbidden triple ({x}, {y}, {z}) of class {class}");
            Ok(NO)
        }
    }
}

fn solve(input: &Path, cap: usize, dot: &Option<PathBuf>) -> Result<u8, Failure> {
    let (weights, base) = match read_input(input)? {
        Instance::Weighted { weights, base } => (weights, base),
        _ => return Err(invalid(format!("{}: expected a weighted instance", input.display()))),
    };
    let base = (base.classified_count() > 0).then_some(base);
    match solve_exact_capped(&weights, base.as_ref(), cap) {
        Ok(solution) => {
            println!("objective: {}", render_decimal(solution.objective, weights.decimals));
            println!("{}", render_instance(&Instance::Digraph(solution.graph.clone())));
            write_artifact(dot, &export_dot(&solution.graph))?;
            Ok(YES)
        }
        Err(e @ CompletionError::CapExceeded { .. }) => Err(Failure {
            code: LIMIT,
            message: e.to_string(),
        }),
        Err(e @ CompletionError::BaseUnsatisfiable(_)) => {
            println!("{e}");
            Ok(NO)
        }
        Err(e) => Err(invalid(e)),
    }
}

fn reduce_mas(input: &Path) -> Result<u8, Failure> {
    let g = read_digraph(input)?;
    let weights = reduce_mas_to_fc(&g);
    let base = PartialTuple::empty(g.names().iter().cloned());
    println!("{}", render_instance(&Instance::Weighted { weights, base }));
    Ok(YES)
}

fn oracle(seed: u64, count: usize) -> Result<u8, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0;
    for k in 0..count {
        let names = numbered_names(rng.gen_range(1..=5));
        let t = if k % 2 == 0 {
            random_partial_tuple(&mut rng, &names)
        } else {
            let keep = rng.gen_range(0.0..1.0);
            random_satisfiable_tuple(&mut rng, &names, keep)
        };
        let fast = build_fitch_cotree(&t).map_err(invalid)?.is_satisfiable();
        let slow = brute_force_sat(&t).map_err(invalid)?;
        if fast != slow {
            disagreements += 1;
            eprintln!("satisfiability disagrees on {}", render_tuple(&t));
        }
    }
    println!("satisfiability: {count} random tuples checked");
    for _ in 0..count {
        let names = numbered_names(rng.gen_range(1..=4));
        let w: WeightTable = random_weight_table(&mut rng, &names, 10);
        let fast = solve_exact(&w, None).map_err(invalid)?;
        let slow = brute_force_best_fitch(&w, None).map_err(invalid)?.expect("edgeless graph is Fitch");
        if fast.objective != slow.objective || fast.graph != slow.graph {
            disagreements += 1;
            eprintln!("solver disagrees on {}", render_instance(&Instance::Weighted { weights: w, base: PartialTuple::empty(names) }));
        }
    }
    println!("completion: {count} random weight tables checked");
    println!("seed {seed}: {disagreements} disagreements");
    Ok(if disagreements == 0 { YES } else { NO })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { input, newick, dot } => check(input, newick, dot),
        Command::Complete { input, newick, dot } => complete(input, newick, dot),
        Command::Recognize { input, newick, dot } => recognize_cmd(input, newick, dot),
        Command::Solve { input, cap, dot } => solve(input, *cap, dot),
        Command::ReduceMas { input } => reduce_mas(input),
        Command::Oracle { seed, count } => oracle(*seed, *count),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
