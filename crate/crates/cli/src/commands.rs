//! Subcommand implementations. Each returns `Ok(())` or a [`CliError`]
//! carrying the exit status.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use trpca::fitting::FitConfig;
use trpca::models::{sample, ModelKind};
use trpca::pipeline::{compute_scores, ridge_pca, ModelChoice, PipelineConfig};
use trpca::ridge::defaults;
use trpca::scenarios::Scenario;
use trpca::{BsvmParams, BwcParams, BwnParams, ModelParams, TorusPoint};

use crate::artifacts::{self, ConfigDoc, FitDoc};
use crate::ingest::{read_sample_file, write_sample};
use crate::plot::{render, Figure};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Auto,
    Bsvm,
    Bwc,
}

impl From<ModelArg> for ModelChoice {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Auto => ModelChoice::Auto,
            ModelArg::Bsvm => ModelChoice::Bsvm,
            ModelArg::Bwc => ModelChoice::Bwc,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// CSV with header `theta1,theta2`, angles in radians.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Directory receiving fit.json, scores.csv, ridge.csv and summary.txt.
    #[arg(short, long, default_value = "trpca-out")]
    pub output_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Auto)]
    pub model: ModelArg,
    /// Level of the homogeneity and independence tests, in (0, 0.5).
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Number of Fourier terms of the ridge curve.
    #[arg(long, default_value_t = 15)]
    pub fourier_m: usize,
    /// Resolution of the ridge search grid.
    #[arg(long, default_value_t = 500)]
    pub grid_n: usize,
    /// Seed of the optimizer restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            output_dir: output_dir.into(),
            model: ModelArg::Auto,
            alpha: 0.05,
            fourier_m: 15,
            grid_n: defaults::GRID_N,
            seed: 0,
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            model: self.model.into(),
            alpha: self.alpha,
            fourier_m: self.fourier_m,
            grid_n: self.grid_n,
            fit: FitConfig { seed: self.seed, ..FitConfig::default() },
        }
    }
}

pub fn cmd_fit(config: &RunConfig) -> CliResult<()> {
    let pipeline = config.pipeline();
    pipeline.validate()?;
    let data = read_sample_file(&config.input)?;
    log::info!("read {} observations from {}", data.points.len(), config.input.display());
    let fit = ridge_pca(&data.points, &pipeline)?;
    let doc = FitDoc::new(
        &fit,
        Some(&config.input),
        ConfigDoc {
            model: pipeline.model,
            alpha: config.alpha,
            fourier_m: config.fourier_m,
            grid_n: config.grid_n,
            seed: config.seed,
        },
    );
    artifacts::write_all(&config.output_dir, &fit, &doc)?;
    if !fit.selected.converged {
        log::warn!("selected fit did not meet the convergence tolerance");
    }
    log::info!("selected {} with PVE {:.4}", doc.model, doc.pve);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleModel {
    Bsvm,
    Bwc,
    Bwn,
}

/// Model for `sample`: either an illustrative scenario or explicit parameters.
#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, required_unless_present = "scenario")]
    pub model: Option<SampleModel>,
    /// One of the four illustrative scenarios (1-4); overrides the parameter flags.
    #[arg(long, conflicts_with = "model")]
    pub scenario: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xi1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xi2: f64,
    /// Dependence of the wrapped Cauchy or wrapped normal model.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma1_sq: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2_sq: f64,
    #[arg(short, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl SampleArgs {
    pub fn params(&self) -> CliResult<ModelParams> {
        Ok(match self.model {
            Some(SampleModel::Bsvm) => {
                ModelParams::Bsvm(BsvmParams::new(self.mu1, self.mu2, self.kappa1, self.kappa2, self.lambda)?)
            }
            Some(SampleModel::Bwc) => ModelParams::Bwc(BwcParams::new(self.mu1, self.mu2, self.xi1, self.xi2, self.rho)?),
            Some(SampleModel::Bwn) => ModelParams::Bwn(BwnParams::new(
                TorusPoint::new(self.mu1, self.mu2),
                self.sigma1_sq,
                self.sigma2_sq,
                self.rho,
            )?),
            None => return Err(CliError::Data("either --model or --scenario is required".into())),
        })
    }

    pub fn draw(&self) -> CliResult<Vec<TorusPoint>> {
        if let Some(k) = self.scenario {
            let scenario =
                Scenario::from_number(k).ok_or_else(|| CliError::Data(format!("scenario must be 1-4, got {k}")))?;
            return Ok(scenario.sample(self.n, self.seed)?.0);
        }
        Ok(sample(&self.params()?, self.n, self.seed)?)
    }
}

pub fn cmd_sample(args: &SampleArgs) -> CliResult<()> {
    let points = args.draw()?;
    let result = match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display())))?;
            write_sample(std::io::BufWriter::new(file), &points)
        }
        None => write_sample(std::io::stdout().lock(), &points),
    };
    result.map_err(|e| CliError::Other(e.into()))
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Directory written by `fit`.
    #[arg(long)]
    pub fit_dir: PathBuf,
    /// Sample to draw; defaults to the input recorded in fit.json.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long, default_value = "trpca.svg")]
    pub output: PathBuf,
}

fn require(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Data(format!("missing artifact {}", path.display())))
    }
}

pub fn cmd_plot(args: &PlotArgs) -> CliResult<()> {
    let dir = &args.fit_dir;
    for name in [artifacts::FIT_JSON, artifacts::SCORES_CSV, artifacts::RIDGE_CSV] {
        require(&dir.join(name))?;
    }
    let doc = artifacts::read_fit_doc(dir)?;
    let params = doc.params()?;
    let input = match (&args.input, &doc.input) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => return Err(CliError::Data("no sample given and none recorded in fit.json".into())),
    };
    let data = read_sample_file(&input)?;
    let ridge: Vec<TorusPoint> = artifacts::read_ridge_table(&dir.join(artifacts::RIDGE_CSV))?
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let scores = artifacts::read_scores(&dir.join(artifacts::SCORES_CSV))?;
    let title = format!(
        "{} ridge, PVE {:.3}",
        match doc.model {
            ModelKind::Bsvm => "sine von Mises",
            ModelKind::Bwc => "wrapped Cauchy",
            ModelKind::Bwn => "wrapped normal",
        },
        doc.pve
    );
    let svg = render(&Figure { title, params: &params, sample: &data.points, ridge: &ridge, scores: &scores });
    std::fs::write(&args.output, svg).map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", args.output.display())))
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// `ridge.csv` written by `fit`.
    #[arg(long)]
    pub ridge: PathBuf,
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 15)]
    pub fourier_m: usize,
    /// Output CSV; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Scores a sample against a previously exported ridge.
pub fn cmd_score(args: &ScoreArgs) -> CliResult<()> {
    require(&args.ridge)?;
    let rows = artifacts::read_ridge_table(&args.ridge)?;
    let curve = trpca::curve::curve_from_table(&rows, args.fourier_m)?;
    let data = read_sample_file(&args.input)?;
    let scores = compute_scores(&curve, &data.points)?;
    let result = match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Other(anyhow::anyhow!("{}: {e}", path.display())))?;
            artifacts::write_scores(std::io::BufWriter::new(file), &scores)
        }
        None => artifacts::write_scores(std::io::stdout().lock(), &scores),
    };
    result.map_err(|e| CliError::Other(e.into()))
}
