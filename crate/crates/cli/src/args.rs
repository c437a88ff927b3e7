use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "twr",
    version,
    about = "Small separators, constrained cuts and bipartization solvers"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(flatten)]
    Solve(Problem),
    /// Print a generated graph in the text format.
    Gen(GenArgs),
    /// Solve, then compare with the brute-force oracle; exit 4 on disagreement.
    Verify {
        #[command(subcommand)]
        problem: Problem,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Graph file in the text format (`-` for stdin).
    #[arg(long)]
    pub graph: String,
    /// Seed used to pick terminals when --s/--t are absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cross-check with the brute-force oracle when the instance is small enough.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Terminals {
    /// Source vertex (1-based).
    #[arg(long)]
    pub s: Option<usize>,
    /// Sink vertex (1-based).
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Problem {
    /// Minimum s-t vertex separator, optionally bounded by --k.
    Mincut {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Chain of all minimum s-t separators.
    Chain {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
    },
    /// Torso of the vertex set --c.
    Torso {
        #[command(flatten)]
        common: Common,
        /// Comma-separated 1-based ids.
        #[arg(long)]
        c: String,
        /// Write a tree decomposition of the torso here.
        #[arg(long)]
        emit_td: Option<String>,
    },
    /// Treewidth reduction for a terminal set (default: the pair --s/--t).
    Reduce {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        /// Comma-separated 1-based terminal ids.
        #[arg(long)]
        terminals: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Write a tree decomposition of the reduced graph here.
        #[arg(long)]
        emit_td: Option<String>,
        /// Write the reduced graph here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Independent s-t separator of size at most --k.
    StableCut {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        #[arg(long)]
        k: Option<usize>,
    },
    /// s-t separator inducing a graph of --class.
    HereditaryCut {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        #[arg(long)]
        k: Option<usize>,
        /// Builtin class name or a member file.
        #[arg(long)]
        class: String,
    },
    /// s-t separator covered by at most --k edges.
    Eivc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        #[arg(long)]
        k: Option<usize>,
    },
    /// s-t separator inducing a connected graph.
    ConnectedCut {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        term: Terminals,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Multicut with uncut pairs read from --pairs.
    Multicut {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// Odd cycle transversal whose graph lies in --class (default: all graphs).
    Bipartize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        class: Option<String>,
    },
    /// Independent odd cycle transversal.
    StableBipartize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, hide = true)]
        class: Option<String>,
    },
    /// Independent odd cycle transversal of exactly --k vertices.
    ExactStableBipartize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Edge set whose removal leaves a bipartite graph and whose graph lies in --class.
    EdgeBipartize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        class: Option<String>,
    },
    /// At most --k edges whose contraction leaves a bipartite graph.
    ContractBipartite {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
    },
    /// List homomorphism with cardinality caps, target read from --target.
    Hck {
        #[command(flatten)]
        common: Common,
        /// JSON file with the target graph H, capped vertices C, caps K and optional lists.
        #[arg(long)]
        target: String,
    },
}

impl Problem {
    pub fn common(&self) -> &Common {
        match self {
            Problem::Mincut { common, .. }
            | Problem::Chain { common, .. }
            | Problem::Torso { common, .. }
            | Problem::Reduce { common, .. }
            | Problem::StableCut { common, .. }
            | Problem::HereditaryCut { common, .. }
            | Problem::Eivc { common, .. }
            | Problem::ConnectedCut { common, .. }
            | Problem::Multicut { common, .. }
            | Problem::Bipartize { common, .. }
            | Problem::StableBipartize { common, .. }
            | Problem::ExactStableBipartize { common, .. }
            | Problem::EdgeBipartize { common, .. }
            | Problem::ContractBipartite { common, .. }
            | Problem::Hck { common, .. } => common,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Family {
    Gnp,
    Gnm,
    Path,
    Cycle,
    Complete,
    Star,
    Hypercube,
    Tree,
    Paths,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Vertices; leaves for `star`, dimension for `hypercube`, path count for `paths`.
    #[arg(long)]
    pub n: usize,
    /// Edges for `gnm`, internal path length for `paths`.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Edge probability for `gnp`.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
