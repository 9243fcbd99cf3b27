use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "eqpart", version, about = "Equitable partitions and perfect sets of regular graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adjacency spectrum, plus the character-derived spectrum for normal Cayley graphs.
    Spectrum(SpectrumArgs),
    /// Check that a partition is equitable and print its quotient matrix.
    CheckPartition(CheckPartitionArgs),
    /// Enumerate (a,b)-perfect sets.
    FindPerfect(FindPerfectArgs),
    /// Gate and search every (a,b) with 0 <= a < k and 1 <= b <= k.
    Scan(ScanArgs),
    /// Evaluate the necessary conditions that apply to the given inputs.
    Conditions(ConditionsArgs),
    /// Classify perfect sets of Cay(D_2n, {r, r^-1} and all reflections).
    DihedralDemo(DihedralDemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Edge-list file: `n m` then `m` lines `u v`.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<String>,
    /// dihedral:N, cyclic:N, elementary:Q,N or table:PATH.
    #[arg(long, value_name = "FAMILY:PARAMS")]
    pub cayley: Option<String>,
    /// Connection set: rot1, rot:I, reflections, class:I, basis, all or element indices.
    #[arg(long, value_name = "SPEC")]
    pub conn: Option<String>,
    /// Character table CSV.
    #[arg(long, value_name = "FILE")]
    pub chars: Option<String>,
    /// Generators of a subgroup H.
    #[arg(long, value_name = "ELEMS")]
    pub subgroup: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Emit the machine-readable report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, value_name = "N")]
    pub max_results: Option<usize>,
    /// Seconds.
    #[arg(long, value_name = "S")]
    pub time_budget: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    /// Blocks separated by `;`, vertices by spaces.
    #[arg(long, value_name = "BLOCKS")]
    pub blocks: Option<String>,
    /// Partition file, one block per line.
    #[arg(long, value_name = "FILE")]
    pub partition: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(short = 'a', value_name = "A")]
    pub a: usize,
    #[arg(short = 'b', value_name = "B")]
    pub b: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckPartitionArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub part: PartitionArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FindPerfectArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// One set per right-translation class (Cayley input).
    #[arg(long)]
    pub canonical: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long)]
    pub canonical: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConditionsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    /// The perfect set W1.
    #[arg(long, value_name = "VERTICES")]
    pub w1: Option<String>,
    /// Equitable partition pi.
    #[command(flatten)]
    pub part: PartitionArgs,
    /// Second equitable partition tau, inline.
    #[arg(long, value_name = "BLOCKS")]
    pub tau_blocks: Option<String>,
    /// Second equitable partition tau, as a file.
    #[arg(long, value_name = "FILE")]
    pub tau_partition: Option<String>,
    /// Parameter of the eigenvector family, `p` or `p/q`.
    #[arg(long, value_name = "P/Q")]
    pub alpha: Option<String>,
    /// Automorphisms, one permutation per line.
    #[arg(long, value_name = "FILE")]
    pub autos: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DihedralDemoArgs {
    /// Odd n; the group has order 2n.
    pub n: usize,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}
