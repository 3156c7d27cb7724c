//! `a2k`: triangle presentations over PG(2,q) and their abelian groups `A_T`.

mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use a2k_core::coinv::{analyze, AnalysisConfig, SchemeChoice};
use a2k_core::gf::PrimePower;
use a2k_core::plane::PlaneContext;
use a2k_core::presentation::{
    gen_t0, gen_t0_dual, read_presentation, twist, validate, write_presentation,
    TrianglePresentation, DEFAULT_BACKTRACK_BUDGET,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "a2k", version, about = "Tits-type triangle presentations and the groups A_T")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated presentation in the a2tp format.
    Gen {
        #[command(flatten)]
        source: Generated,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the triangle axioms of a presentation file.
    Validate {
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Compute A_T and the order of eps.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Compare computed groups with the closed-form table over a range of q.
    Table {
        #[arg(long)]
        q_min: Option<u64>,
        #[arg(long)]
        q_max: Option<u64>,
        /// Sweep 17..=32 instead of 2..=16.
        #[arg(long)]
        extended: bool,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
    /// Run every plane, axiom and group check and print one line per check.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        opts: AnalysisOpts,
    },
}

#[derive(Args)]
struct Generated {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = Variant::T0)]
    variant: Variant,
    /// Presentation that twisted variants start from.
    #[arg(long, value_enum, default_value_t = Base::T0)]
    base: Base,
}

#[derive(Args)]
struct Source {
    #[arg(long, required_unless_present = "file")]
    q: Option<u64>,
    #[arg(long, value_enum, requires = "q")]
    variant: Option<Variant>,
    #[arg(long, value_enum, requires = "q")]
    base: Option<Base>,
    #[arg(long, value_name = "PATH", conflicts_with = "q")]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct AnalysisOpts {
    #[arg(long, value_enum, default_value_t = Scheme::Both)]
    scheme: Scheme,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Node cap for the M-subset exact-cover search.
    #[arg(long, env = "A2K_BACKTRACK_BUDGET", default_value_t = DEFAULT_BACKTRACK_BUDGET)]
    budget: u64,
}

impl AnalysisOpts {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            scheme: match self.scheme {
                Scheme::Acb => SchemeChoice::Acb,
                Scheme::Bcd => SchemeChoice::Bcd,
                Scheme::Both => SchemeChoice::Both,
            },
            backtrack_budget: self.budget,
            ..AnalysisConfig::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    T0,
    T0dual,
    Frob1,
    Frob2,
    Omega,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    T0,
    T0dual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Acb,
    Bcd,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Output {
    Text,
    Json,
}

pub(crate) enum Failure {
    /// A mathematical check failed.
    Check,
    /// Bad arguments or input.
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub(crate) fn generate(q: u64, variant: Variant, base: Base) -> Result<TrianglePresentation, Failure> {
    let pp = PrimePower::new(q)?;
    if variant == Variant::Omega && q % 3 != 1 {
        return Err(Failure::Usage(format!(
            "variant omega needs q = 1 mod 3, but {q} = {} mod 3",
            q % 3
        )));
    }
    let plane = PlaneContext::new(pp)?;
    let start = match (variant, base) {
        (Variant::T0, _) => return Ok(gen_t0(&plane)),
        (Variant::T0dual, _) => return Ok(gen_t0_dual(&plane)),
        (_, Base::T0) => gen_t0(&plane),
        (_, Base::T0dual) => gen_t0_dual(&plane),
    };
    let phi = match variant {
        Variant::Frob1 => plane.frobenius(),
        Variant::Frob2 => plane.frobenius_sq(),
        _ => plane.omega()?,
    };
    Ok(twist(&start, phi)?)
}

impl Source {
    fn load(&self) -> Result<TrianglePresentation, Failure> {
        match (&self.file, self.q) {
            (Some(path), _) => Ok(read_presentation(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?),
            (None, Some(q)) => generate(
                q,
                self.variant.unwrap_or(Variant::T0),
                self.base.unwrap_or(Base::T0),
            ),
            (None, None) => Err(Failure::Usage("give --q or --file".into())),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { source, out } => {
            let t = generate(source.q, source.variant, source.base)?;
            match out {
                Some(path) => write_presentation(&t, &path)?,
                None => print!("{t}"),
            }
            Ok(())
        }
        Command::Validate { file, output } => {
            let t = read_presentation(&file)
                .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let report = validate(&t);
            match output {
                Output::Json => println!("{}", to_json(&report)),
                Output::Text => match report.first_failure() {
                    None => println!(
                        "valid: q={} n={} |T|={}",
                        t.q(),
                        t.n(),
                        report.size
                    ),
                    Some(msg) => println!("invalid: {msg}"),
                },
            }
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Usage(report.first_failure().unwrap_or_default()))
            }
        }
        Command::Analyze { source, opts } => {
            let t = source.load()?;
            let report = analyze(&t, &opts.config())?;
            match opts.output {
                Output::Json => println!("{}", to_json(&report)),
                Output::Text => print!("{report}"),
            }
            if report.checks.all_passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Table {
            q_min,
            q_max,
            extended,
            jobs,
            opts,
        } => {
            let (lo, hi) = if extended { (17, 32) } else { (2, 16) };
            table::run(q_min.unwrap_or(lo), q_max.unwrap_or(hi), jobs, &opts)
        }
        Command::Verify { source, opts } => {
            let t = source.load()?;
            verify::run(&t, &opts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
