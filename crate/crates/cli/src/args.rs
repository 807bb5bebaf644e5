use clap::{Args, Parser, Subcommand, ValueEnum};
use kneser::Exact;

/// Kneser-type sumset computations: finite certificates and sweeps, exact
/// densities of structured subsets of ℕ, and the density theorem checkers.
///
/// Sets of ℕ use the set DSL, for example `periodic(0,1;5)`,
/// `blocks(superexp(10),1/2,1)`, `interval(3,9) | shift(periodic(0;2),4)`.
/// Prefixes are `intervals:SCHED`, `suffix:SCHED:FRAC`, `boxes:D:SCHED`,
/// `symboxes:D:SCHED` or `explicit:a-b,c-d;e-f`. Finite groups are written
/// `6` or `2x4`, finite sets `0,1,3` or `(0,1);(1,3)`.
///
/// Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
/// 3 hypothesis not satisfied, 4 capacity or budget exceeded.
#[derive(Debug, Parser)]
#[command(name = "kneser", version)]
pub struct Cli {
    /// Print one JSON record instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kneser certificate and the coset and gap checks for one pair in a finite group.
    Analyze(AnalyzeArgs),
    /// Exhaustive or seeded random sweeps of all checks over finite groups.
    Sweep(SweepArgs),
    /// Densities of a set along a Følner prefix, with optional defects.
    Density(DensityArgs),
    /// Exact prefix-density scan |A ∩ [1,n]|/n up to a bound.
    Lad(LadArgs),
    /// Upper-density estimate and the full refinement chain for A+A.
    Ubd(UbdArgs),
    /// Search for a refined prefix Ψ ⊆ F and check it independently.
    Refine(RefineArgs),
    /// Check the lower-asymptotic-density form of Kneser's theorem.
    KneserLad(KneserLadArgs),
    /// KJ-stabilizer of a periodic pair, or the KJ reduction in a finite group.
    Kj(KjArgs),
    /// Sublattices of Z^d of a given index in Hermite normal form.
    Hnf(HnfArgs),
    /// Reproduce the three fixed constructions with a pass/fail summary.
    Examples(ExamplesArgs),
}

pub fn exact(s: &str) -> Result<Exact, String> {
    Exact::parse(s).ok_or_else(|| format!("expected a rational like 1/50 or 0.02, found {s:?}"))
}

/// Accepts `1000000`, `1_000_000` or `2^36`.
pub fn big(s: &str) -> Result<u128, String> {
    let s = s.trim().replace('_', "");
    let err = || format!("expected a nonnegative integer or b^e, found {s:?}");
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u128 = b.parse().map_err(|_| err())?;
            let e: u32 = e.parse().map_err(|_| err())?;
            b.checked_pow(e)
                .ok_or_else(|| format!("{s} does not fit in 128 bits"))
        }
        None => s.parse().map_err(|_| err()),
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, short)]
    pub group: String,
    #[arg(long, short, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, short, allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Group to sweep; repeat for several.
    #[arg(long, short, required = true)]
    pub group: Vec<String>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: SweepMode,
    /// Pairs drawn per group in random mode.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// First arguments drawn for exhaustive sweeps of order 11 and 12.
    #[arg(long, default_value_t = 256)]
    pub sample_a: usize,
}

#[derive(Debug, Args)]
pub struct SetInput {
    /// DSL expression, or residue tuples `(x,y);...` with --torus.
    #[arg(long, short, allow_hyphen_values = true)]
    pub set: String,
    /// Read --set as residues modulo P·Z^d.
    #[arg(long, value_name = "P")]
    pub torus: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub input: SetInput,
    #[arg(long, short)]
    pub prefix: String,
    /// Trailing terms used for the tail estimates (default: last half).
    #[arg(long)]
    pub tail_terms: Option<usize>,
    /// Shift for the defect report, e.g. `1` or `1,-2`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Vec<String>,
}

#[derive(Debug, Args)]
pub struct LadArgs {
    #[arg(long, short, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, short = 'n', value_parser = big)]
    pub bound: u128,
    /// Start of the tail (default ⌊√N⌋).
    #[arg(long, value_parser = big)]
    pub tail_from: Option<u128>,
}

#[derive(Debug, Args)]
pub struct UbdArgs {
    #[arg(long, short, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, short = 'n', value_parser = big)]
    pub bound: u128,
    #[arg(long, value_parser = exact, default_value = "1/50")]
    pub eps: Exact,
    /// Index used when the set has no periodic part.
    #[arg(long)]
    pub k: Option<usize>,
    /// Maximum number of prefix terms.
    #[arg(long, default_value_t = 10)]
    pub terms: usize,
    /// Extra candidate prefix for the estimate; repeatable.
    #[arg(long)]
    pub candidate: Vec<String>,
    /// Only report the estimate, skip the refinement chain.
    #[arg(long)]
    pub estimate_only: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Suffix,
    Coset,
    SubBox,
}

#[derive(Debug, Args)]
pub struct PairInput {
    /// DSL expression, or residue tuples `(x,y);...` with --torus.
    #[arg(long, short, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, short, allow_hyphen_values = true)]
    pub b: String,
    /// Read --a and --b as residues modulo P·Z^d.
    #[arg(long, value_name = "P")]
    pub torus: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub input: PairInput,
    #[arg(long, short)]
    pub prefix: String,
    #[arg(long, short, default_value_t = 1)]
    pub k: usize,
    /// Defaults to d(A) + d(B) - d(A+B) along the prefix.
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub delta: Option<Exact>,
    #[arg(long, value_parser = exact, default_value = "1/50")]
    pub eps: Exact,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FamilyArg::Suffix, FamilyArg::Coset, FamilyArg::SubBox])]
    pub families: Vec<FamilyArg>,
    #[arg(long, default_value_t = 16)]
    pub alpha_denominator: u128,
}

#[derive(Debug, Args)]
pub struct KneserLadArgs {
    #[arg(long, short, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, short, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, short)]
    pub k: usize,
    #[arg(long, short = 'n', value_parser = big)]
    pub bound: u128,
    #[arg(long, value_parser = exact, default_value = "1/50")]
    pub eps: Exact,
}

#[derive(Debug, Args)]
pub struct KjArgs {
    /// Finite group for the KJ reduction; --a and --b are then literals.
    #[arg(long, short, conflicts_with_all = ["modulus", "lattice"])]
    pub group: Option<String>,
    /// Generators of K0 in the finite group (default: trivial).
    #[arg(long, requires = "group")]
    pub k0: Option<String>,
    /// Period of the DSL sets --a and --b.
    #[arg(long, short, value_parser = big, conflicts_with = "lattice")]
    pub modulus: Option<u128>,
    /// HNF rows `a,b;0,c` of a period lattice; needs --torus.
    #[arg(long, requires = "torus")]
    pub lattice: Option<String>,
    #[arg(long, short, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, short, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, value_name = "P")]
    pub torus: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HnfArgs {
    #[arg(long, short, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, short = 'n', required_unless_present = "matrix")]
    pub index: Option<u64>,
    /// Reduce this matrix (`a,b;c,d`) instead of enumerating.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "index")]
    pub matrix: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "half-blocks", alias = "remark-folner")]
    HalfBlocks,
    Tower,
    Rec3,
    All,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long, short, value_enum, default_value = "all")]
    pub which: Which,
    /// Schedule length (default 10, or 5 for the tower).
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long, value_parser = exact, default_value = "0.02")]
    pub eps: Exact,
}
