//! Files written by `fit` and read back by `plot` and `score`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use trpca::curve::fmt17;
use trpca::fitting::{FitResult, LrtResult, Restriction};
use trpca::models::ModelKind;
use trpca::pipeline::{EdgeFlag, ModelChoice, Scores, TrpcaFit};
use trpca::{ModelParams, TorusPoint};

use crate::{CliError, CliResult};

pub const FIT_JSON: &str = "fit.json";
pub const SCORES_CSV: &str = "scores.csv";
pub const RIDGE_CSV: &str = "ridge.csv";
pub const SUMMARY_TXT: &str = "summary.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDoc {
    pub model: ModelKind,
    pub parameters: BTreeMap<String, f64>,
    pub restrictions: Vec<Restriction>,
    pub loglik: f64,
    pub bic: f64,
    pub converged: bool,
}

impl From<&FitResult> for CandidateDoc {
    fn from(f: &FitResult) -> Self {
        CandidateDoc {
            model: f.kind(),
            parameters: f.params.parameter_map(),
            restrictions: f.restrictions.iter().copied().collect(),
            loglik: f.loglik,
            bic: f.bic,
            converged: f.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtDoc {
    pub homogeneity: LrtResult,
    pub independence: LrtResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDoc {
    /// 1 or 2.
    pub index_coord: usize,
    pub mu: [f64; 2],
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub total_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub model: ModelChoice,
    pub alpha: f64,
    pub fourier_m: usize,
    pub grid_n: usize,
    pub seed: u64,
}

/// Contents of `fit.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDoc {
    pub input: Option<String>,
    pub n: usize,
    pub model: ModelKind,
    pub parameters: BTreeMap<String, f64>,
    pub restrictions: Vec<Restriction>,
    pub loglik: f64,
    pub bic: f64,
    pub converged: bool,
    pub lrt: LrtDoc,
    pub edge_flags: Vec<EdgeFlag>,
    pub pve: f64,
    pub m2: f64,
    pub curve: CurveDoc,
    pub candidates: Vec<CandidateDoc>,
    pub config: ConfigDoc,
    pub diagnostics: BTreeMap<String, String>,
}

impl FitDoc {
    pub fn new(fit: &TrpcaFit, input: Option<&Path>, config: ConfigDoc) -> Self {
        let sel = CandidateDoc::from(&fit.selected);
        let fr = fit.curve.fourier();
        FitDoc {
            input: input.map(|p| p.display().to_string()),
            n: fit.selected.n,
            model: sel.model,
            parameters: sel.parameters,
            restrictions: sel.restrictions,
            loglik: sel.loglik,
            bic: sel.bic,
            converged: sel.converged,
            lrt: LrtDoc { homogeneity: fit.tests.homogeneity, independence: fit.tests.independence },
            edge_flags: fit.edge_flags.iter().copied().collect(),
            pve: fit.pve,
            m2: fit.scores.m2,
            curve: CurveDoc {
                index_coord: fr.index_coord.index(),
                mu: [fr.mu.theta1(), fr.mu.theta2()],
                a: fr.a().to_vec(),
                b: fr.b().to_vec(),
                total_length: fit.curve.total_length(),
            },
            candidates: fit.rejected_candidates.iter().map(CandidateDoc::from).collect(),
            config,
            diagnostics: fit.diagnostics.clone(),
        }
    }

    pub fn params(&self) -> CliResult<ModelParams> {
        Ok(ModelParams::from_parameter_map(self.model, &self.parameters)?)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Other(anyhow::anyhow!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path).map(std::io::BufWriter::new).map_err(|e| io_err(path, e))
}

pub fn write_scores<W: Write>(mut out: W, scores: &Scores) -> std::io::Result<()> {
    writeln!(out, "index,s1,s2")?;
    for (i, (a, b)) in scores.s1.iter().zip(&scores.s2).enumerate() {
        writeln!(out, "{i},{},{}", fmt17(*a), fmt17(*b))?;
    }
    out.flush()
}

/// Writes `fit.json`, `scores.csv`, `ridge.csv` and `summary.txt` into `dir`.
pub fn write_all(dir: &Path, fit: &TrpcaFit, doc: &FitDoc) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(FIT_JSON);
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| io_err(&path, e))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| io_err(&path, e))?;

    let path = dir.join(SCORES_CSV);
    write_scores(create(&path)?, &fit.scores).map_err(|e| io_err(&path, e))?;

    let path = dir.join(RIDGE_CSV);
    let mut out = create(&path)?;
    fit.curve.write_csv(&mut out).and_then(|_| out.flush()).map_err(|e| io_err(&path, e))?;

    let path = dir.join(SUMMARY_TXT);
    std::fs::write(&path, summary(doc)).map_err(|e| io_err(&path, e))?;
    Ok(())
}

pub fn summary(doc: &FitDoc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Toroidal ridge PCA");
    if let Some(input) = &doc.input {
        let _ = writeln!(s, "input: {input}");
    }
    let _ = writeln!(s, "observations: {}", doc.n);
    let _ = writeln!(s);
    let restr = if doc.restrictions.is_empty() {
        "none".to_string()
    } else {
        doc.restrictions.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
    };
    let _ = writeln!(s, "selected model: {} (restrictions: {restr})", doc.model);
    for (k, v) in &doc.parameters {
        let _ = writeln!(s, "  {k:<10} {v:>12.6}");
    }
    let _ = writeln!(s, "  log-likelihood {:.4}, BIC {:.4}", doc.loglik, doc.bic);
    let _ = writeln!(s);
    for (name, t) in [("homogeneity", &doc.lrt.homogeneity), ("independence", &doc.lrt.independence)] {
        let _ = writeln!(
            s,
            "{name} test: statistic {:.4} vs {:.4} at alpha {} -> {}",
            t.statistic,
            t.critical,
            t.alpha,
            if t.rejected { "rejected" } else { "not rejected" }
        );
    }
    if !doc.edge_flags.is_empty() {
        let flags: Vec<String> = doc
            .edge_flags
            .iter()
            .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
            .collect();
        let _ = writeln!(s, "edge flags: {}", flags.join(", "));
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "ridge: indexed by theta{}, length {:.6}, {} Fourier terms",
        doc.curve.index_coord,
        doc.curve.total_length,
        doc.curve.a.len() - 1
    );
    let _ = writeln!(s, "score scale m2: {:.6}", doc.m2);
    let _ = writeln!(s, "proportion of variance explained by the first score: {:.4}", doc.pve);
    if !doc.candidates.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "other candidates:");
        for c in &doc.candidates {
            let r = if c.restrictions.is_empty() {
                "full".to_string()
            } else {
                c.restrictions.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("+")
            };
            let _ = writeln!(s, "  {:<5} {:<24} BIC {:.4}", c.model.to_string(), r, c.bic);
        }
    }
    s
}

pub fn read_fit_doc(dir: &Path) -> CliResult<FitDoc> {
    let path = dir.join(FIT_JSON);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn numeric_rows(path: &Path, header: &[&str]) -> CliResult<Vec<Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let found = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .iter()
        .map(String::from)
        .collect::<Vec<_>>();
    if found != header {
        return Err(CliError::Data(format!("{}: expected header `{}`", path.display(), header.join(","))));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let row: Result<Vec<f64>, _> = rec.iter().map(|c| c.parse::<f64>()).collect();
        rows.push(row.map_err(|_| CliError::Data(format!("{}: line {line}: not a number", path.display())))?);
    }
    Ok(rows)
}

/// Rows `(α, r̃(α))` of an exported ridge table.
pub fn read_ridge_table(path: &Path) -> CliResult<Vec<(f64, TorusPoint)>> {
    Ok(numeric_rows(path, &["alpha", "theta1", "theta2"])?
        .into_iter()
        .map(|r| (r[0], TorusPoint::new(r[1], r[2])))
        .collect())
}

/// `(s1, s2)` pairs of a scores file, in index order.
pub fn read_scores(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    Ok(numeric_rows(path, &["index", "s1", "s2"])?.into_iter().map(|r| (r[1], r[2])).collect())
}
