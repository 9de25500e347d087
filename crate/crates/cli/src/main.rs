use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filtop::actions::{MeklerMode, MeklerParams};
use filtop::report::{self, RunReport};
use filtop::Error;

/// Finite and windowed checks for invariant topologies and filters.
///
/// Every command prints a JSON report on stdout. Exit codes: 0 when no
/// verdict fails, 1 when some verdict fails, 2 on usage or parse errors,
/// 3 on resource limits or exhausted bounded searches.
#[derive(Parser, Debug)]
#[command(name = "filtop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite topologies and preorders.
    #[command(subcommand)]
    Topo(TopoCommand),
    /// Primitivity and invariant topologies of a permutation group.
    Group {
        #[arg(long)]
        degree: usize,
        /// Generators in cycle notation, e.g. "(0 1 2),(0 1)".
        #[arg(long)]
        gens: String,
    },
    /// Neighbourhood filters of countable graphs.
    #[command(subcommand)]
    Rado(RadoCommand),
    /// Translates of a moiety under a group action.
    Mekler {
        #[arg(long, default_value = "shift")]
        action: String,
        #[arg(long, default_value = "even")]
        moiety: String,
        #[arg(long, value_enum, default_value_t = Mode::Topology)]
        mode: Mode,
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        /// Largest subfamily of translates intersected.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, env = "FILTOP_WINDOW", default_value_t = 10_000)]
        window: u64,
        /// Members needed inside the window to call an intersection infinite.
        #[arg(long, default_value_t = 100)]
        threshold: u64,
    },
    /// Stages of the generic poset and its inflated preorder.
    Poset {
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 2)]
        max_config: usize,
        #[arg(long, default_value_t = 1)]
        config_size: usize,
        /// Window of the inflated preorder to materialize; 0 skips it.
        #[arg(long, default_value_t = 50)]
        window: u64,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Large classes of the Cantor unpairing partition.
    Partition {
        #[arg(long, env = "FILTOP_WINDOW", default_value_t = 10_000)]
        window: u64,
        #[arg(long, default_value_t = 50)]
        min_size: u64,
        #[arg(long, default_value_t = 50)]
        min_classes: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TopoCommand {
    /// Enumerate preorders on n points and round-trip them.
    Roundtrip {
        #[arg(long)]
        n: usize,
    },
    /// Dense-open and discrete-complement filters of a topology.
    Filters {
        /// "n; opens" with opens as comma-separated points, e.g. "3; 0; 0,1".
        #[arg(long)]
        topology: String,
    },
}

#[derive(Args, Debug)]
struct GraphArg {
    /// bitrado, bernoulli:seed=S,p=A/B, colour:seed=S,k=K,colours=..,
    /// file:PATH or periodic:PATH.
    #[arg(long, default_value = "bitrado")]
    graph: String,
}

#[derive(Subcommand, Debug)]
enum RadoCommand {
    /// A vertex joined to all of U and none of W.
    Extension {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        u: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        w: Vec<u64>,
        #[arg(long, env = "FILTOP_BOUND", default_value_t = 1_000_000)]
        bound: u64,
    },
    /// Forth-only embedding of R onto the graph.
    Embed {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, env = "FILTOP_BOUND", default_value_t = 1_000_000)]
        bound: u64,
        /// Write "source target" lines here.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Chain of neighbourhood filters from a k-colouring.
    Chain {
        #[arg(long, default_value_t = 3)]
        colours: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_ws: usize,
        #[arg(long, env = "FILTOP_WINDOW", default_value_t = 100_000)]
        window: u64,
    },
    /// Neighbourhood filter and the closed/open neighbourhood check.
    Nbhd {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        vertices: Vec<u64>,
        #[arg(long, env = "FILTOP_WINDOW", default_value_t = 4096)]
        window: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Non-adjacent pairs sampled for the closed/open check.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The three equivalent conditions side by side.
    Spanning {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, env = "FILTOP_WINDOW", default_value_t = 4096)]
        window: u64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, env = "FILTOP_BOUND", default_value_t = 1_000_000)]
        bound: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Topology,
    Filter,
}

fn write_file(path: &PathBuf, text: &str) -> filtop::Result<()> {
    fs::write(path, text).map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli, argv: Vec<String>) -> filtop::Result<RunReport> {
    let mut rep = match cli.command {
        Command::Topo(TopoCommand::Roundtrip { n }) => report::cmd_topo_roundtrip(n)?,
        Command::Topo(TopoCommand::Filters { topology }) => report::cmd_topo_filters(&topology)?,
        Command::Group { degree, gens } => report::cmd_group_analyze(degree, &gens)?,
        Command::Rado(RadoCommand::Extension { graph, u, w, bound }) => report::cmd_rado_extension(&graph.graph, &u, &w, bound)?,
        Command::Rado(RadoCommand::Embed {
            graph,
            steps,
            bound,
            pairs,
            dot,
        }) => {
            let (rep, e) = report::cmd_rado_embed(&graph.graph, steps, bound)?;
            if let Some(p) = pairs {
                write_file(&p, &e.to_pairs_text())?;
            }
            if let Some(p) = dot {
                write_file(&p, &e.to_dot())?;
            }
            rep
        }
        Command::Rado(RadoCommand::Chain {
            colours,
            seed,
            trials,
            max_ws,
            window,
        }) => report::cmd_rado_chain(colours, seed, trials, max_ws, window)?,
        Command::Rado(RadoCommand::Nbhd {
            graph,
            vertices,
            window,
            depth,
            pairs,
            seed,
        }) => report::cmd_rado_nbhd(&graph.graph, &vertices, window, depth, pairs, seed)?,
        Command::Rado(RadoCommand::Spanning {
            graph,
            depth,
            window,
            steps,
            bound,
        }) => report::cmd_rado_spanning(&graph.graph, depth, window, steps, bound)?,
        Command::Mekler {
            action,
            moiety,
            mode,
            max_word_len,
            max_n,
            window,
            threshold,
        } => {
            let mode = match mode {
                Mode::Topology => MeklerMode::Topology,
                Mode::Filter => MeklerMode::Filter,
            };
            let params = MeklerParams {
                max_word_len,
                max_n,
                window,
                inf_threshold: threshold,
            };
            report::cmd_mekler(&action, &moiety, mode, params)?
        }
        Command::Poset {
            stages,
            max_config,
            config_size,
            window,
            dot,
        } => {
            let (rep, p) = report::cmd_poset(stages, max_config, config_size, window)?;
            if let Some(path) = dot {
                write_file(&path, &p.to_dot())?;
            }
            rep
        }
        Command::Partition {
            window,
            min_size,
            min_classes,
        } => report::cmd_partition(window, min_size, min_classes)?,
    };
    rep.command = argv;
    Ok(rep)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(rep) => {
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{}", rep.to_json_pretty());
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("filtop: {e}");
            ExitCode::from(match e {
                Error::Usage(_) | Error::Parse(_) => 2,
                Error::Resource(_) | Error::SearchExhausted { .. } => 3,
            })
        }
    }
}
