use std::path::PathBuf;

use cglmp_core::quantum::{CglmpContext, Offset};
use cglmp_core::{ArithmeticMode, SettingPair, ShiftVector};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cglmp",
    version,
    about = "CGLMP and CHSH Bell quantities: quantum values, hidden-variable bounds, audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum S for the maximally entangled state, with its four terms
    QuantumS(QuantumSArgs),
    /// Shift-requirement bound next to the exact hidden-variable maximum
    Bound(BoundArgs),
    /// Compare quantum S with the exact hidden-variable maximum in both modes
    Audit(AuditArgs),
    /// Audit every shift vector in a range
    Scan(ScanArgs),
    /// Singlet CHSH value, deterministic bound and PR-box value
    Chsh(FormatOnly),
    /// Monte Carlo estimate of S
    Sample(SampleArgs),
    /// Joint outcome probabilities for one setting pair
    ProbTable(ProbTableArgs),
    /// S of a hidden-variable model or box loaded from a file
    HvtS(HvtSArgs),
    /// The singular matrix equations behind the requirement lists
    Matrices(FormatOnly),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "mod-d")]
    ModD,
    Integer,
}

impl From<ModeArg> for ArithmeticMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ModD => ArithmeticMode::ModD,
            ModeArg::Integer => ArithmeticMode::PlainInteger,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum CiArg {
    #[default]
    Normal,
    Exact,
}

/// `a,b` with settings 1 or 2.
pub fn parse_pair(s: &str) -> Result<SettingPair, String> {
    let err = || format!("expected a setting pair like 1,2, got {s:?}");
    let (a, b) = s.split_once(',').ok_or_else(err)?;
    let a: u8 = a.trim().parse().map_err(|_| err())?;
    let b: u8 = b.trim().parse().map_err(|_| err())?;
    SettingPair::new(a, b).map_err(|_| err())
}

/// `θ1,θ2,φ1,φ2` as integers or fractions like `1/4`.
pub fn parse_offsets(s: &str) -> Result<[Offset; 4], String> {
    let err = || format!("expected four offsets like 0,1/2,1/4,-1/4, got {s:?}");
    let parts: Vec<Offset> = s
        .split(',')
        .map(|p| p.trim().parse::<Offset>().map_err(|_| err()))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| err())
}

/// Standard context, or one with explicit offsets.
pub fn context(d: usize, offsets: Option<[Offset; 4]>) -> cglmp_core::Result<CglmpContext> {
    match offsets {
        None => CglmpContext::new(d),
        Some([t1, t2, p1, p2]) => CglmpContext::with_offsets(d, [t1, t2], [p1, p2]),
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShiftArgs {
    /// Number of outcomes per observable
    #[arg(long = "d")]
    pub d: usize,
    /// Outcome shifts Δ11,Δ12,Δ22,Δ21
    #[arg(long, allow_hyphen_values = true)]
    pub shifts: ShiftVector,
    #[arg(long, value_enum, default_value = "mod-d")]
    pub mode: ModeArg,
}

impl ShiftArgs {
    pub fn shifts(&self) -> ShiftVector {
        self.shifts.with_mode(self.mode.into())
    }
}

#[derive(Debug, Clone, Args)]
pub struct FormatOnly {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct QuantumSArgs {
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Measurement phase offsets θ1,θ2,φ1,φ2 (default 0,1/2,1/4,-1/4)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_offsets)]
    pub offsets: Option<[Offset; 4]>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub shift: ShiftArgs,
    /// Past the exhaustive cap, sample this many random assignments instead
    /// (lower bound only)
    #[arg(long)]
    pub random_search: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(long = "d")]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub shifts: ShiftVector,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Smallest d, or the only d when --d-max is absent
    #[arg(long = "d")]
    pub d: usize,
    #[arg(long)]
    pub d_max: Option<usize>,
    /// Smallest shift value (default 0)
    #[arg(long, allow_hyphen_values = true)]
    pub shift_min: Option<i64>,
    /// Largest shift value (default d - 1)
    #[arg(long, allow_hyphen_values = true)]
    pub shift_max: Option<i64>,
    #[arg(long, value_enum, default_value = "mod-d")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Required for the quantum source; must match the model file otherwise
    #[arg(long = "d")]
    pub d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub shifts: ShiftVector,
    #[arg(long, value_enum, default_value = "mod-d")]
    pub mode: ModeArg,
    /// Trials per setting pair
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// Sample a model file instead of the quantum distribution
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "normal")]
    pub ci: CiArg,
    /// Phase offsets θ1,θ2,φ1,φ2 for the quantum source (default 0,1/2,1/4,-1/4)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_offsets)]
    pub offsets: Option<[Offset; 4]>,
    /// Write one CSV record per trial here
    #[arg(long)]
    pub trial_log: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ProbTableArgs {
    #[arg(long = "d")]
    pub d: usize,
    /// Setting pair a,b
    #[arg(long, value_parser = parse_pair)]
    pub pair: SettingPair,
    /// Evaluate by explicit vector algebra instead of the closed form
    #[arg(long)]
    pub direct: bool,
    /// Measurement phase offsets θ1,θ2,φ1,φ2 (default 0,1/2,1/4,-1/4)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_offsets)]
    pub offsets: Option<[Offset; 4]>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct HvtSArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub shifts: ShiftVector,
    #[arg(long, value_enum, default_value = "mod-d")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}
