use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "fekete", version, about = "Capacity, Chebyshev polynomials and integer polynomial lifts of compact sets")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory receiving the result files.
    #[arg(long, global = true, default_value = "fekete-out")]
    pub output_dir: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Exit with code 3 when a lift is not certified.
    #[arg(long, global = true)]
    pub require_certified: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// The compact set a command works on.
#[derive(Args, Debug, Clone, Default)]
pub struct SetArgs {
    /// A single interval [A, B].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,

    /// Band endpoints e1 < e2 < ... < e2r, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub bands: Option<Vec<f64>>,

    /// JSON file holding band endpoints `[e1, ..., e2r]` or points `[[re, im], ...]`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Periodic Jacobi input: inline JSON `{r, a[], b[]}` or a path to such a file.
#[derive(Args, Debug, Clone, Default)]
pub struct JacobiArg {
    #[arg(long, value_name = "JSON|FILE")]
    pub jacobi: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Extrapolated transfinite diameters.
    Fekete,
    /// Robin constant of a band set.
    Robin,
    /// Exact formula for the spectrum of a periodic Jacobi matrix.
    Jacobi,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Logarithmic capacity of a compact set.
    Capacity {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        jacobi: JacobiArg,
        /// Largest number of Fekete points.
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Scheme::Fekete)]
        scheme: Scheme,
    },
    /// Fekete points and the transfinite diameter d_n.
    Fekete {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
    /// Monic Chebyshev polynomial of an interval, a Jacobi spectrum or a band set.
    Chebyshev {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        jacobi: JacobiArg,
        /// Use the Remez exchange on the band set instead of an exact construction.
        #[arg(long)]
        remez: bool,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
    },
    /// Discriminant, bands and capacity of a periodic Jacobi matrix.
    Jacobi {
        /// Inline JSON `{r, a[], b[]}`.
        #[arg(long)]
        json: Option<String>,
        /// File with the same JSON.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Move band edges so every band carries a rational share of mass m_k / m.
    Calibrate {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        m: usize,
    },
    /// Lift a monic polynomial to one with Gaussian integer coefficients.
    Lift {
        /// Ascending coefficients as a JSON array, e.g. '["-1/2", 1]'.
        #[arg(long)]
        poly: Option<String>,
        /// File with the same JSON array.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of protected blocks; searched over 1..=max-a when omitted.
        #[arg(long)]
        a: Option<usize>,
        /// Power of P; the smallest admissible one when omitted.
        #[arg(long)]
        c: Option<usize>,
        /// Lemniscate level |P| = R2 (default 1 + 1/deg P).
        #[arg(long)]
        r2: Option<f64>,
        #[arg(long, default_value_t = 4)]
        max_a: usize,
        #[arg(long, default_value_t = 2048)]
        max_degree: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Integer polynomials whose zeros equidistribute on a set of capacity > 1.
    Pipeline {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        jacobi: JacobiArg,
        #[arg(long, default_value_t = 64)]
        degree_budget: usize,
        #[arg(long, default_value_t = 1_000_000)]
        denom_bound: u64,
        #[arg(long)]
        r2: Option<f64>,
        /// Calibration degree for band input.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 4)]
        moments: usize,
        #[arg(long, default_value_t = 4)]
        max_a: usize,
        #[arg(long, default_value_t = 2048)]
        max_degree: usize,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Integer polynomials of sup norm below 1, or the nearest conjugate set.
    Search {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        degree: usize,
        /// Uniform coefficient bound.
        #[arg(long, conflicts_with = "rho")]
        bound: Option<u64>,
        /// Binomial box for sets inside the disk of radius rho.
        #[arg(long)]
        rho: Option<f64>,
        /// Conjugation-closed targets `[[re, im], ...]`: find the nearest integer conjugate set.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long, default_value_t = fekete_core::diophantine::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Monic integer polynomials with all zeros in a disk or a band set.
    Enumerate {
        #[command(flatten)]
        set: SetArgs,
        /// Closed disk of this radius about 0.
        #[arg(long)]
        disk: Option<f64>,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = fekete_core::diophantine::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Monte Carlo volume of the coefficient region of polynomials bounded by 1 on the set.
    Volume {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        degree: usize,
        /// Sweep every degree from `degree` to this one.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
    },
    /// Exact Bernstein polynomial of sampled values on [0, 1].
    Bernstein {
        #[arg(long)]
        degree: usize,
        /// Approximate x^k.
        #[arg(long, conflicts_with = "values")]
        power: Option<u32>,
        /// The n + 1 values f(j/n), comma separated rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<String>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Capacity { .. } => "capacity",
            Command::Fekete { .. } => "fekete",
            Command::Chebyshev { .. } => "chebyshev",
            Command::Jacobi { .. } => "jacobi",
            Command::Calibrate { .. } => "calibrate",
            Command::Lift { .. } => "lift",
            Command::Pipeline { .. } => "pipeline",
            Command::Search { .. } => "search",
            Command::Enumerate { .. } => "enumerate",
            Command::Volume { .. } => "volume",
            Command::Bernstein { .. } => "bernstein",
        }
    }
}
