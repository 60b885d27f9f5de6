//! Serialized forms of campaign reports and detection matrices.

use std::io::Write;

use intramorph::harness::{CampaignReport, DetectionMatrix, MatrixCell};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleDocument {
    pub input: String,
    pub output_original: String,
    pub output_variant: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatisticsDocument {
    pub k: u32,
    pub median_original: f64,
    pub median_variant: f64,
}

/// JSON layout of a single campaign run. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub campaign: String,
    pub seed: u64,
    pub mutant: Option<String>,
    pub iterations_run: u64,
    pub violations: u64,
    pub first_violation_iteration: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDocument>,
    pub execution_errors: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistics: Option<StatisticsDocument>,
    pub wall_time_ms: u64,
}

impl From<&CampaignReport> for ReportDocument {
    fn from(r: &CampaignReport) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            campaign: r.campaign.clone(),
            seed: r.seed,
            mutant: r.mutant.clone(),
            iterations_run: r.iterations_run,
            violations: r.violations,
            first_violation_iteration: r.first_violation_iteration,
            counterexample: r.counterexample.as_ref().map(|c| CounterexampleDocument {
                input: c.input.clone(),
                output_original: c.output_original.clone(),
                output_variant: c.output_variant.clone(),
            }),
            execution_errors: r.execution_errors,
            statistics: r.statistics.map(|s| StatisticsDocument {
                k: s.repetitions,
                median_original: s.median_original,
                median_variant: s.median_variant,
            }),
            wall_time_ms: r.wall_time_ms,
        }
    }
}

// CSV cannot nest, so the optional groups are flattened into columns.
#[derive(Serialize)]
struct ReportRow<'a> {
    schema_version: &'a str,
    campaign: &'a str,
    seed: u64,
    mutant: Option<&'a str>,
    iterations_run: u64,
    violations: u64,
    first_violation_iteration: Option<u64>,
    counterexample_input: Option<&'a str>,
    counterexample_output_original: Option<&'a str>,
    counterexample_output_variant: Option<&'a str>,
    execution_errors: u64,
    statistics_k: Option<u32>,
    statistics_median_original: Option<f64>,
    statistics_median_variant: Option<f64>,
    wall_time_ms: u64,
}

impl ReportDocument {
    fn row(&self) -> ReportRow<'_> {
        let cx = self.counterexample.as_ref();
        let st = self.statistics.as_ref();
        ReportRow {
            schema_version: self.schema_version,
            campaign: &self.campaign,
            seed: self.seed,
            mutant: self.mutant.as_deref(),
            iterations_run: self.iterations_run,
            violations: self.violations,
            first_violation_iteration: self.first_violation_iteration,
            counterexample_input: cx.map(|c| c.input.as_str()),
            counterexample_output_original: cx.map(|c| c.output_original.as_str()),
            counterexample_output_variant: cx.map(|c| c.output_variant.as_str()),
            execution_errors: self.execution_errors,
            statistics_k: st.map(|s| s.k),
            statistics_median_original: st.map(|s| s.median_original),
            statistics_median_variant: st.map(|s| s.median_variant),
            wall_time_ms: self.wall_time_ms,
        }
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Json => write_json(self, out),
            Format::Csv => write_csv(std::iter::once(self.row()), out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixRow {
    pub campaign: String,
    pub technique: &'static str,
    /// `control` for the unmutated column.
    pub mutant: String,
    pub detected: bool,
    pub expected_detected: bool,
    pub as_expected: bool,
    pub violations: u64,
    pub iterations_run: u64,
    pub first_violation_iteration: Option<u64>,
}

impl From<&MatrixCell> for MatrixRow {
    fn from(c: &MatrixCell) -> Self {
        MatrixRow {
            campaign: c.campaign.clone(),
            technique: c.technique.name(),
            mutant: c.mutant.clone().unwrap_or_else(|| "control".into()),
            detected: c.detected,
            expected_detected: c.expected_detected,
            as_expected: c.as_expected(),
            violations: c.violations,
            iterations_run: c.iterations_run,
            first_violation_iteration: c.first_violation_iteration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDocument {
    pub schema_version: &'static str,
    pub seed: u64,
    pub iterations: u64,
    pub cells: Vec<MatrixRow>,
}

impl From<&DetectionMatrix> for MatrixDocument {
    fn from(m: &DetectionMatrix) -> Self {
        MatrixDocument {
            schema_version: SCHEMA_VERSION,
            seed: m.seed,
            iterations: m.iterations,
            cells: m.cells.iter().map(MatrixRow::from).collect(),
        }
    }
}

impl MatrixDocument {
    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Json => write_json(self, out),
            Format::Csv => write_csv(self.cells.iter(), out),
        }
    }
}

fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}

fn write_csv<T: Serialize, W: Write>(rows: impl Iterator<Item = T>, out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
