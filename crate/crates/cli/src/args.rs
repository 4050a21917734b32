use crate::grid::Grid;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Divisibility, correlation and primality statistics of integer random walks.
#[derive(Debug, Parser)]
#[command(name = "walkarith", version, args_override_self = true)]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "WALKARITH_THREADS")]
    pub threads: Option<usize>,
    /// key = value file whose flags override the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the effective configuration to this file.
    #[arg(long, global = true)]
    pub echo_config: Option<PathBuf>,
    /// Output format; compute and simulate default to json, audit to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Audit summary file instead of stderr.
    #[arg(long, global = true)]
    pub summary: Option<PathBuf>,
    /// Pin file of golden constants; defaults to the pins built into the binary.
    #[arg(long, global = true)]
    pub pins: Option<PathBuf>,
    /// Relative slack above a pin before an audit counts as regressed.
    #[arg(long, global = true, default_value_t = walkarith_core::report::GOLDEN_SLACK)]
    pub slack: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-point evaluations.
    Compute {
        #[command(subcommand)]
        target: ComputeTarget,
    },
    /// Error-bound audits over grids: CSV rows plus a JSON summary.
    Audit {
        #[command(subcommand)]
        audit: AuditName,
    },
    /// Seeded simulations, one JSON line per seed.
    Simulate {
        #[command(subcommand)]
        target: SimTarget,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Bernoulli,
    Fair,
    Rademacher,
    Cramer,
    CramerPrimed,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "fair")]
    pub model: ModelName,
    #[arg(long, value_parser = crate::grid::parse_u64)]
    pub n: u64,
    /// P(step = 1) for the Bernoulli walk.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Shift applied by divisibility queries.
    #[arg(long, default_value_t = 0)]
    pub u: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThetaKind {
    Plain,
    Shifted,
    RademacherEven,
    RademacherOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Positive,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetName {
    All,
    Evens,
    Primes,
    Kfree,
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PascalFn {
    Id,
    Squares,
    Cubes,
    Mobius,
    Divisors,
}

#[derive(Debug, Subcommand)]
pub enum ComputeTarget {
    /// P(d | W_n + u): exact, spectral and Theta values.
    Div {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1e-16)]
        tail_tol: f64,
    },
    /// A Theta series value.
    Theta {
        #[arg(long)]
        d: u64,
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        u: u64,
        #[arg(long, value_enum, default_value = "plain")]
        variant: ThetaKind,
        #[arg(long, default_value_t = 1e-16)]
        tail_tol: f64,
    },
    /// P(W_n prime).
    Prime {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "positive")]
        sign: Sign,
    },
    /// P(P^-(B_n) > y) with the Mobius identity and the Mertens gap.
    Pminus {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long)]
        y: u64,
    },
    /// P(B_n(rho) is k-free).
    Kfree {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// P(gcd(B_n, B_m) = 1), m < n.
    Coprime {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long, value_parser = crate::grid::parse_u64)]
        m: u64,
    },
    /// P(D | B_n B_m) with its main term and upper bounds.
    ProductDiv {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long, value_parser = crate::grid::parse_u64)]
        m: u64,
        #[arg(long = "D")]
        dd: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Constant of the remainder; the pinned fit when omitted.
        #[arg(long)]
        c_eps: Option<f64>,
    },
    /// Divisor-function expectations of B_n.
    Expectations {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
    },
    /// P(S'_n is z-quasiprime) and its lower envelope.
    Quasiprime {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long)]
        z: u64,
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
    },
    /// Characteristic function of the Cramer walk.
    Charfn {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 3)]
        start: u64,
    },
    /// Cesaro, Euler, Borel and window densities of an integer set.
    Density {
        #[arg(long, value_enum)]
        set: SetName,
        #[arg(long, value_parser = crate::grid::parse_u64)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        /// Borel parameter; n when omitted.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// k for k-free sets.
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// y for y-smooth sets.
        #[arg(long, default_value_t = 10)]
        y: u64,
    },
    /// Pascal inversion f(i) from E f(B_j), j <= i.
    Pascal {
        #[arg(long, value_enum)]
        f: PascalFn,
        #[arg(long)]
        i: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleName {
    Polylog,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmallMode {
    Alpha,
    Rho,
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiName {
    One,
    Log,
    Sqrt,
}

#[derive(Debug, Subcommand)]
pub enum AuditName {
    /// sup_d |P(d | B_n + u) - Theta_u(d, n)/d| over 2 <= d <= n.
    ThetaUniform {
        #[arg(long)]
        n: Grid,
        #[arg(long, default_value_t = 0)]
        u: u64,
        #[arg(long, value_enum, default_value = "polylog")]
        scale: ScaleName,
    },
    /// Small-divisor estimates against their envelopes.
    SmallDivisor {
        #[arg(long)]
        n: Grid,
        #[arg(long, value_enum, default_value = "alpha")]
        mode: SmallMode,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        rho_hat: f64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// P(d | S_n) against the Gaussian main term.
    CramerDiv {
        #[arg(long)]
        n: Grid,
        #[arg(long, default_value = "2,3,5,7")]
        d: Grid,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Uniformity of W_n mod h.
    ModUniformity {
        #[arg(long, value_enum, default_value = "fair")]
        model: ModelName,
        #[arg(long)]
        n: Grid,
        #[arg(long)]
        h: Grid,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, value_enum, default_value = "log")]
        phi: PhiName,
    },
    /// P(D | B_n B_m) against E rho_K(D)/D.
    ProductDiv {
        #[arg(long)]
        n: Grid,
        #[arg(long, default_value = "4,8,16")]
        gap: Grid,
        #[arg(long = "D", default_value = "2:36:1")]
        dd: Grid,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// P(P^-(B_n) > y) against e^{-gamma}/log y.
    Mertens {
        #[arg(long)]
        n: Grid,
        #[arg(long)]
        y: Grid,
    },
    /// P(delta | R_M) against Theta_1, Theta_2 and the one-harmonic forms.
    RademacherDiv {
        #[arg(long = "M")]
        m: Grid,
        /// Moduli; 3..=M when omitted.
        #[arg(long)]
        delta: Option<Grid>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// N P(N | R_{N^2}) against s.
    ExtremalS {
        #[arg(long = "N")]
        nn: Grid,
    },
    /// P(S_n prime) against the Gaussian prime window.
    PrimeWindow {
        #[arg(long)]
        n: Grid,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Number of seeds, taken consecutively from --seed.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Subcommand)]
pub enum SimTarget {
    /// Cramer jump counts up to x against li(x).
    CramerPnt {
        #[arg(long, value_parser = crate::grid::parse_u64)]
        x: u64,
        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// One sampled path.
    Path {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// The indicators N | R_{N^2} along one path, N <= n-max.
    NkSequence {
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        seeds: SeedArgs,
    },
}
