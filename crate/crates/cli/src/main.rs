use clap::{Parser, Subcommand};
use trpca_cli::commands::{cmd_fit, cmd_plot, cmd_sample, cmd_score, PlotArgs, RunConfig, SampleArgs, ScoreArgs};

/// Toroidal ridge PCA for bivariate angular data.
#[derive(Parser)]
#[command(name = "trpca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model, extract its ridge and score the sample.
    Fit(RunConfig),
    /// Draw a sample from a toroidal model.
    Sample(SampleArgs),
    /// Render fit artifacts as SVG.
    Plot(PlotArgs),
    /// Score a sample against an exported ridge.
    Score(ScoreArgs),
}

fn init_threads() {
    let Ok(v) = std::env::var("TRPCA_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) => {
            // 0 lets rayon choose
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("cannot configure thread pool: {e}");
            }
        }
        Err(_) => log::warn!("ignoring TRPCA_THREADS={v}: not a count"),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(c) => cmd_fit(c),
        Command::Sample(a) => cmd_sample(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Score(a) => cmd_score(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
