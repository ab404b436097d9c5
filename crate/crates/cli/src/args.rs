use crate::values::{parse_count, parse_number, Grid, IntRange, NumList};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "semithermo", version, about = "Entropy, pressure and specification probes for semigroup actions on the circle")]
pub struct Cli {
    /// Flat key=value file mirroring the flags; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = parse_count)]
    pub threads: Option<usize>,
    /// Seed for the sampling probes.
    #[arg(long, global = true, default_value = "0", value_parser = parse_count)]
    pub seed: usize,
    /// Output prefix: writes PREFIX.csv and PREFIX.json.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Grid,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Averaged topological entropy.
    Entropy(ScheduleArgs),
    /// Topological pressure, or the pressure curve t -> P(t phi) with its regularity checks.
    Pressure(PressureArgs),
    /// Growth of sets separated by some word of length at most n.
    Glw(ScheduleArgs),
    /// Both entropies and the growth-normalised quotient.
    Compare(CompareArgs),
    /// Mean growth of fixed-point counts.
    Periodic(PeriodicArgs),
    /// Shadow points for orbit segments joined by bridges.
    SpecWitness(WitnessArgs),
    /// Refute strong specification for an expanding map plus a rotation.
    SpecFalsify(FalsifyArgs),
    /// Bridge-word census and hypothesis (H).
    Census(CensusArgs),
    /// Bounded distortion of Birkhoff sums on dynamical balls.
    Distortion(DistortionArgs),
    /// Subadditivity of the unnormalised partition sums.
    Subadditivity(SubadditivityArgs),
    /// Local entropy on small arcs against the global value.
    EntropyPoint(EntropyPointArgs),
    /// Sampled strong-expansiveness check.
    Expansiveness(ExpansivenessArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Entropy(_) => "entropy",
            Command::Pressure(_) => "pressure",
            Command::Glw(_) => "glw",
            Command::Compare(_) => "compare",
            Command::Periodic(_) => "periodic",
            Command::SpecWitness(_) => "spec-witness",
            Command::SpecFalsify(_) => "spec-falsify",
            Command::Census(_) => "census",
            Command::Distortion(_) => "distortion",
            Command::Subadditivity(_) => "subadditivity",
            Command::EntropyPoint(_) => "entropy-point",
            Command::Expansiveness(_) => "expansiveness",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GeneratorArgs {
    /// Comma-separated generators: lin:<k>, rot:<alpha|p/q|golden>, mp:<beta>.
    #[arg(long, short = 'g')]
    pub generators: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScheduleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    /// Scales, e.g. 1/32,1/64.
    #[arg(long, default_value = "1/64")]
    pub eps: NumList,
    #[arg(long, default_value = "1", value_parser = parse_count)]
    pub nmin: usize,
    #[arg(long, default_value = "6", value_parser = parse_count)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    /// Grid resolution M for the grid method.
    #[arg(long, default_value = "2^16", value_parser = parse_count)]
    pub grid: usize,
    /// Number of trailing lengths in the slope fit.
    #[arg(long, default_value = "3", value_parser = parse_count)]
    pub fit_k: usize,
    /// Largest number of words enumerated at one length.
    #[arg(long, default_value = "1e8", value_parser = parse_count)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PressureArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,
    /// const:<c>, cos:<a>,<k>, table:<path> or zero.
    #[arg(long, default_value = "cos:1,1")]
    pub potential: String,
    /// Inverse temperatures, e.g. 1 or -1,0,1.
    #[arg(long, conflicts_with = "t_grid", allow_hyphen_values = true)]
    pub t: Option<NumList>,
    /// Evenly spaced temperatures, lo..hi:count.
    #[arg(long, allow_hyphen_values = true)]
    pub t_grid: Option<Grid>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,
    /// Length at which the growth-normalised quotient is reported (default: nmax).
    #[arg(long, value_parser = parse_count)]
    pub bis_n: Option<usize>,
    /// Method for the GLW estimate (default: same as --method).
    #[arg(long, value_enum)]
    pub glw_method: Option<MethodArg>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PeriodicArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value = "1", value_parser = parse_count)]
    pub nmin: usize,
    #[arg(long, default_value = "15", value_parser = parse_count)]
    pub nmax: usize,
    /// Scale of the entropy estimate the growth rate is compared against.
    #[arg(long, default_value = "1/64", value_parser = parse_number)]
    pub eps: f64,
    /// Largest length of that entropy estimate.
    #[arg(long, default_value = "6", value_parser = parse_count)]
    pub entropy_nmax: usize,
    /// Allowed shortfall of the growth rate below the entropy estimate.
    #[arg(long, default_value = "0.05", value_parser = parse_number)]
    pub margin_tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WitnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value = "0.05", value_parser = parse_number)]
    pub eps: f64,
    /// Orbit segment x@letters, letters 1-based and comma-separated (e.g. 0.2@2,2,2). Repeatable.
    #[arg(long)]
    pub segment: Vec<String>,
    /// Bridge word, 1-based comma-separated letters. One fewer than the segments.
    #[arg(long)]
    pub bridge: Vec<String>,
    /// Also construct and re-verify this many random instances.
    #[arg(long, default_value = "0", value_parser = parse_count)]
    pub random: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FalsifyArgs {
    #[arg(long, short = 'g', default_value = "lin:2,rot:golden")]
    pub generators: String,
    #[arg(long, default_value = "0.01", value_parser = parse_number)]
    pub eps: f64,
    /// Length of both orbit segments f^n.
    #[arg(long, default_value = "10", value_parser = parse_count)]
    pub n: usize,
    #[arg(long, default_value = "0", value_parser = parse_number)]
    pub x1: f64,
    #[arg(long, default_value = "0.5", value_parser = parse_number)]
    pub x2: f64,
    /// Candidates p(eps) = 1..=this are refuted.
    #[arg(long, default_value = "20", value_parser = parse_count)]
    pub candidates: usize,
    #[arg(long, default_value = "50", value_parser = parse_count)]
    pub p_max: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CensusArgs {
    #[arg(long, default_value = "2", value_parser = parse_count)]
    pub m: usize,
    /// Expanding-letter threshold.
    #[arg(long = "K", default_value = "3", value_parser = parse_count)]
    #[serde(rename = "K")]
    pub k: usize,
    #[arg(long, default_value = "10..40")]
    pub p: IntRange,
    /// One or more exponents in (0,1).
    #[arg(long, default_value = "0.5")]
    pub gamma: NumList,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DistortionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value = "cos:1,1")]
    pub potential: String,
    #[arg(long, default_value = "0.01,0.005")]
    pub eps: NumList,
    #[arg(long, default_value = "8", value_parser = parse_count)]
    pub nmax: usize,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SubadditivityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value = "zero")]
    pub potential: String,
    #[arg(long, default_value = "1/64", value_parser = parse_number)]
    pub eps: f64,
    #[arg(long, default_value = "8", value_parser = parse_count)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    #[arg(long, default_value = "2^16", value_parser = parse_count)]
    pub grid: usize,
    #[arg(long, default_value = "1e-9", value_parser = parse_number)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EntropyPointArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,
    /// Arc centers; when omitted, --random-centers points are drawn from --seed.
    #[arg(long)]
    pub centers: Option<NumList>,
    #[arg(long, default_value = "5", value_parser = parse_count)]
    pub random_centers: usize,
    #[arg(long, default_value = "0.05", value_parser = parse_number)]
    pub radius: f64,
    /// Largest acceptable local-vs-global gap.
    #[arg(long, default_value = "0.1", value_parser = parse_number)]
    pub max_gap: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExpansivenessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value = "0.1", value_parser = parse_number)]
    pub gamma: f64,
    /// Default: delta0 / 2 for linear generators, 0.1 otherwise.
    #[arg(long, value_parser = parse_number)]
    pub delta_star: Option<f64>,
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    pub pairs: usize,
    /// Skip the delta* <= delta0/2 precondition.
    #[arg(long)]
    pub raw: bool,
}
