mod cone;
mod input;
mod poly;
mod report;
mod steiner;
mod su3;
mod twist;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use curvcone::SolverConfig;

use report::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "curvcone", version, about = "Curvature cones, polyhedral curvature and twist embeddings")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Verdict and residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub multistarts: Option<usize>,
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
    /// Record per-iteration solver traces.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Built-in input instead of a file: su3, sphere:<m>, s2xr:<m> for
    /// tensors, or a complex name for poly-report.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a tensor for membership in a curvature cone.
    ConeCheck {
        /// Tensor JSON file (`-` for stdin).
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = cone::ConeName::Costar)]
        cone: cone::ConeName,
    },
    /// Bisection bounds for the cosectional curvature.
    CosecBounds { file: Option<PathBuf> },
    /// Hyperedge angles, singular curvature measure and the curvature ≥ 0 check.
    PolyReport {
        /// OFF or JSON complex file (`-` for stdin).
        file: Option<PathBuf>,
    },
    /// Steiner shell coefficients across an approximating family.
    SteinerStudy {
        /// sphere, cube, tetrahedron, octahedron or icosphere:<level>.
        body: String,
        /// Subdivision levels for `sphere`: `1..5`, `1..=5`, `4` or `1,3,5`.
        #[arg(long, default_value = "1..5")]
        levels: String,
        #[arg(long, value_enum, default_value_t = steiner::WeightName::One)]
        weight: steiner::WeightName,
        /// Radii for the polynomial fit.
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
        radii: Vec<f64>,
    },
    /// Build a twist map and verify its metric and E tensor numerically.
    TwistVerify {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 32)]
        points: usize,
        /// Allow the composed frame for q > 3.
        #[arg(long)]
        compose: bool,
    },
    /// The SU(3) bi-invariant curvature operator, step by step.
    Su3,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ConeCheck { .. } => "cone-check",
            Command::CosecBounds { .. } => "cosec-bounds",
            Command::PolyReport { .. } => "poly-report",
            Command::SteinerStudy { .. } => "steiner-study",
            Command::TwistVerify { .. } => "twist-verify",
            Command::Su3 => "su3",
        }
    }
}

impl GlobalArgs {
    pub fn solver_config(&self) -> Result<SolverConfig, Failure> {
        let mut config = SolverConfig::default().with_seed(self.seed).with_tol(self.tol);
        if let Some(k) = self.multistarts {
            if k == 0 {
                return Err(Failure::usage("--multistarts must be at least 1"));
            }
            config = config.with_multistarts(k);
        }
        if let Some(n) = self.max_iterations {
            config.max_iterations = n;
        }
        config.trace = self.trace;
        config.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(config)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CURVCONE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::usage(format!("CURVCONE_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::usage(e.to_string()))
}

fn run(cli: Cli, start: Instant) -> Result<Outcome, Failure> {
    configure_threads()?;
    let config = cli.global.solver_config()?;
    let ctx = report::Context::new(cli.command.name(), &cli.global, config, start);
    let g = &cli.global;
    match cli.command {
        Command::ConeCheck { file, cone } => cone::cone_check(ctx, g, file.as_deref(), cone),
        Command::CosecBounds { file } => cone::cosec_bounds(ctx, g, file.as_deref()),
        Command::PolyReport { file } => poly::poly_report(ctx, g, file.as_deref()),
        Command::SteinerStudy { body, levels, weight, radii } => steiner::steiner_study(ctx, g, &body, &levels, weight, &radii),
        Command::TwistVerify { q, c, step, points, compose } => twist::twist_verify(ctx, g, twist::TwistArgs { q, c, step, points, compose }),
        Command::Su3 => su3::su3(ctx, g),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => report::EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, start) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
