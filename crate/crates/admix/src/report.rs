//! Serializable records and CSV/JSON writers for every command.

use std::io::Write;
use std::time::{Duration, Instant};

use admix_core::asymptotics::{table2_row, Table2Row};
use admix_core::criteria::{CriterionReport, GridAgreement};
use admix_core::lemmas::LemmaReport;
use admix_core::{BigCount, MarginSpec};
use serde::Serialize;

use crate::constraints::ConstraintFile;
use crate::error::{Error, Result};
use crate::parallel::count_a12_within;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    A1,
    A2,
    A12,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountRecord {
    pub family: FamilyArg,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub count: String,
    pub log2_count: f64,
    pub constraints: ConstraintFile,
}

impl CountRecord {
    pub fn new(family: FamilyArg, spec: &MarginSpec, count: &BigCount) -> Self {
        Self {
            family,
            n: spec.n(),
            p: spec.p(),
            count: count.to_string(),
            log2_count: count.log2(),
            constraints: ConstraintFile::from(spec),
        }
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match format {
            Format::Json => json_line(out, self),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["family", "N", "P", "count", "log2_count"])?;
                let family = serde_json::to_value(self.family)?;
                w.write_record([
                    family.as_str().unwrap_or_default().to_string(),
                    self.n.to_string(),
                    self.p.to_string(),
                    self.count.clone(),
                    self.log2_count.to_string(),
                ])?;
                Ok(w.flush().map_err(io_err)?)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionRecord {
    pub exact_decision: bool,
    pub approx_decision: bool,
    pub score: f64,
    pub agree: bool,
    #[serde(rename = "H1")]
    pub h1: f64,
    #[serde(rename = "H2")]
    pub h2: f64,
    pub fbar: f64,
    pub constraints: ConstraintFile,
}

impl CriterionRecord {
    pub fn new(spec: &MarginSpec, report: &CriterionReport) -> Self {
        Self {
            exact_decision: report.exact_decision,
            approx_decision: report.approx_decision,
            score: report.score,
            agree: report.agree,
            h1: report.summary.h1,
            h2: report.summary.h2,
            fbar: report.summary.fbar,
            constraints: ConstraintFile::from(spec),
        }
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match format {
            Format::Json => json_line(out, self),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["exactDecision", "approxDecision", "score", "agree", "H1", "H2", "fbar"])?;
                w.write_record([
                    self.exact_decision.to_string(),
                    self.approx_decision.to_string(),
                    self.score.to_string(),
                    self.agree.to_string(),
                    self.h1.to_string(),
                    self.h2.to_string(),
                    self.fbar.to_string(),
                ])?;
                Ok(w.flush().map_err(io_err)?)
            }
        }
    }
}

/// Rows `2..=max_exact` with exact counts, then the `large` sizes with the
/// asymptotic columns only. The whole exact part shares one `budget`.
pub fn table2(
    max_exact: u64,
    large: &[u64],
    workers: usize,
    budget: Option<Duration>,
) -> Result<Vec<Table2Row>> {
    if max_exact < 2 {
        return Err(Error::Usage(format!("--max-exact must be at least 2, got {max_exact}")));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    for n in 2..=max_exact {
        let spec = MarginSpec::semiregular_half(n as usize, n as usize)?;
        let left = budget.map(|b| b.saturating_sub(start.elapsed()));
        let count = count_a12_within(&spec, workers, left).map_err(|e| match e {
            Error::Budget(_) => Error::Budget(budget.unwrap_or_default()),
            other => other,
        })?;
        rows.push(table2_row(n, Some(&count)));
    }
    rows.extend(large.iter().map(|&n| table2_row(n, None)));
    Ok(rows)
}

#[derive(Serialize)]
struct Table2Json {
    n: u64,
    alpha12_exact: Option<f64>,
    spa: f64,
    diff_vs_indep: f64,
}

pub fn write_table2(rows: &[Table2Row], out: &mut dyn Write, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<Table2Json> = rows
                .iter()
                .map(|r| Table2Json {
                    n: r.n,
                    alpha12_exact: r.alpha12_exact,
                    spa: r.spa,
                    diff_vs_indep: r.diff_vs_indep,
                })
                .collect();
            json_line(out, &rows)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "alpha12_exact", "spa", "diff_vs_indep"])?;
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    r.alpha12_exact.map(|v| format!("{v:.8}")).unwrap_or_default(),
                    format!("{:.8}", r.spa),
                    format!("{:.8}", r.diff_vs_indep),
                ])?;
            }
            Ok(w.flush().map_err(io_err)?)
        }
    }
}

#[derive(Serialize)]
struct BinJson {
    abar_bin_lo: f64,
    f_bin_lo: f64,
    points: u32,
    fraction_a1_larger: Option<f64>,
    approx_pred: Option<f64>,
    exact_frac: Option<f64>,
    disagree_frac: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GridJson {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "P")]
    p: u64,
    points: u64,
    agreeing: u64,
    fraction: f64,
    fitted_constant: f64,
    bins: Vec<BinJson>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Heat-map bins, one row per bin.
pub fn write_fig2(grid: &GridAgreement, out: &mut dyn Write, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let bins = grid
                .bins
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let (abar_bin_lo, f_bin_lo) = GridAgreement::bin_origin(i);
                    BinJson {
                        abar_bin_lo,
                        f_bin_lo,
                        points: b.points,
                        fraction_a1_larger: b.fraction_a1_larger(),
                        approx_pred: b.approx_pred(),
                        exact_frac: b.exact_frac(),
                        disagree_frac: b.disagree_frac(),
                    }
                })
                .collect();
            json_line(
                out,
                &GridJson {
                    n: grid.n,
                    p: grid.p,
                    points: grid.points,
                    agreeing: grid.agreeing,
                    fraction: grid.fraction,
                    fitted_constant: grid.fitted_constant(),
                    bins,
                },
            )
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "abar_bin_lo",
                "f_bin_lo",
                "fraction_a1_larger",
                "approx_pred",
                "exact_frac",
                "disagree_frac",
            ])?;
            for (i, b) in grid.bins.iter().enumerate() {
                let (abar, f) = GridAgreement::bin_origin(i);
                w.write_record([
                    abar.to_string(),
                    f.to_string(),
                    opt(b.fraction_a1_larger()),
                    opt(b.approx_pred()),
                    opt(b.exact_frac()),
                    opt(b.disagree_frac()),
                ])?;
            }
            Ok(w.flush().map_err(io_err)?)
        }
    }
}

#[derive(Serialize)]
struct CheckJson<'a> {
    lemma: &'a str,
    location: &'a str,
    residual: f64,
    tolerance: f64,
    passed: bool,
    informational: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MatrixJson {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "P")]
    p: usize,
    det_b: String,
    sigma_diag_row: f64,
    sigma_diag_col: Option<f64>,
    off_diags: [Option<f64>; 3],
}

#[derive(Serialize)]
struct LemmaJson<'a> {
    passed: bool,
    checks: Vec<CheckJson<'a>>,
    matrices: Vec<MatrixJson>,
}

pub fn write_lemmas(report: &LemmaReport, out: &mut dyn Write, format: Format) -> Result<()> {
    let checks = report.checks.iter().map(|c| CheckJson {
        lemma: c.lemma.name(),
        location: &c.location,
        residual: c.residual,
        tolerance: c.tolerance,
        passed: c.passed,
        informational: c.informational,
    });
    match format {
        Format::Json => json_line(
            out,
            &LemmaJson {
                passed: report.passed(),
                checks: checks.collect(),
                matrices: report
                    .matrices
                    .iter()
                    .map(|m| MatrixJson {
                        n: m.n,
                        p: m.p,
                        det_b: m.det_b.to_string(),
                        sigma_diag_row: m.sigma_diag_row,
                        sigma_diag_col: m.sigma_diag_col,
                        off_diags: m.off_diags,
                    })
                    .collect(),
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for c in checks {
                w.serialize(c)?;
            }
            Ok(w.flush().map_err(io_err)?)
        }
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(io_err)
}

fn io_err(source: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source,
    }
}
