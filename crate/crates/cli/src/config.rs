use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use unital_lab_core::field::Backend;
use unital_lab_core::{FieldCtx, Fq, Fq2, Plane, Point};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Pedal,
    Census,
    Orbit,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Pedal => "pedal",
            Command::Census => "census",
            Command::Orbit => "orbit",
            Command::Scan => "scan",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    FourLines,
    Conics,
    OrbitCensus,
    SecantPartition,
    IncidenceStructure,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::FourLines => "four-lines",
            Problem::Conics => "conics",
            Problem::OrbitCensus => "orbit-census",
            Problem::SecantPartition => "secant-partition",
            Problem::IncidenceStructure => "incidence-structure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Verify unitals of the form U_{α,β} in PG(2, q²) and scan their pedals.
///
/// Field elements are written `A`, `A+e*B`, `e*B` or `e`, where `A` and `B`
/// are integer codes of GF(q) elements and `e` is the adjoined square root of
/// the smallest non-square `w`. Omitting `--alpha` or `--beta` sweeps it.
#[derive(Clone, Debug, Parser)]
#[command(name = "unital-lab", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Characteristic (odd prime).
    #[arg(long, env = "UNITAL_LAB_P")]
    pub p: u32,
    /// Extension degree, q = p^n.
    #[arg(long, env = "UNITAL_LAB_N", default_value_t = 1)]
    pub n: u32,
    /// Code of a non-square of GF(q) to use instead of the smallest one.
    #[arg(long, env = "UNITAL_LAB_W")]
    pub w: Option<u32>,
    #[arg(long, env = "UNITAL_LAB_ALPHA", allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, env = "UNITAL_LAB_BETA", allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Canonical base point P_λ = [0, λε, 1]; 1 or w, repeatable.
    #[arg(long, env = "UNITAL_LAB_LAMBDA", value_delimiter = ',')]
    pub lambda: Vec<String>,
    /// Base point as X,Y,Z (overrides --lambda).
    #[arg(long, env = "UNITAL_LAB_POINT", allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, env = "UNITAL_LAB_PROBLEM", value_enum)]
    pub problem: Option<Problem>,
    #[arg(long, env = "UNITAL_LAB_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, env = "UNITAL_LAB_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "UNITAL_LAB_JOBS")]
    pub jobs: Option<usize>,
}

/// Which base points a pedal-oriented command looks at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Lambda(Fq),
    Point(Point),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub problem: Option<Problem>,
    pub field: Arc<FieldCtx>,
    pub plane: Arc<Plane>,
    pub alpha: Option<Fq2>,
    pub beta: Option<Fq2>,
    pub targets: Vec<Target>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let field = Arc::new(FieldCtx::with_options(
            cli.p,
            cli.n,
            cli.w,
            Backend::Tables,
        )?);
        let plane = Arc::new(Plane::new(field.clone())?);
        let alpha = cli.alpha.as_deref().map(|s| field.parse(s)).transpose()?;
        let beta = cli.beta.as_deref().map(|s| field.parse(s)).transpose()?;
        let targets = match &cli.point {
            Some(text) => vec![Target::Point(plane.parse_point(text)?)],
            None if cli.lambda.is_empty() => {
                vec![Target::Lambda(Fq::ONE), Target::Lambda(field.w())]
            }
            None => {
                let mut out = Vec::new();
                for text in &cli.lambda {
                    let lambda = match text.trim() {
                        "w" => field.w(),
                        other => field.parse_fq(other)?,
                    };
                    if lambda != Fq::ONE && lambda != field.w() {
                        return Err(CliError::Usage(format!(
                            "--lambda must be 1 or w (= {}), got {text}",
                            field.w()
                        )));
                    }
                    if !out.contains(&Target::Lambda(lambda)) {
                        out.push(Target::Lambda(lambda));
                    }
                }
                out
            }
        };
        if cli.command == Command::Scan && cli.problem.is_none() {
            return Err(CliError::Usage("scan needs --problem".into()));
        }
        if cli.jobs == Some(0) {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            command: cli.command,
            problem: cli.problem,
            field,
            plane,
            alpha,
            beta,
            targets,
            format: cli.format,
            out: cli.out.clone(),
            jobs: cli.jobs,
        })
    }

    /// Parameter tuples in sweep order (α major, β minor, by encoding).
    pub fn tuples(&self) -> Vec<(Fq2, Fq2)> {
        let all: Vec<Fq2> = self.field.elements().collect();
        let alphas = self.alpha.map_or(all.clone(), |a| vec![a]);
        let betas = self.beta.map_or(all, |b| vec![b]);
        alphas
            .iter()
            .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn single_tuple(&self) -> bool {
        self.alpha.is_some() && self.beta.is_some()
    }
}
