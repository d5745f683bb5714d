//! Serializable per-input reports and their flat CSV rows.

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::concurrence::{is_coherent, ConcurrenceResult, Method};
use crate::error::Result;
use crate::projector::HealthReport;
use crate::roof::{Decomposition, RoofEstimate};
use crate::state::{schmidt_coefficients, MixedState, PureState};
use crate::tensor::ParticleKind;

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One flat row per report.
pub trait CsvRecord {
    fn header() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn to_csv<T: CsvRecord>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(T::header()).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.fields()).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_f64(*v))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcurrenceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub concurrence: f64,
    pub expectation: f64,
    pub method: Method,
    pub coherent: bool,
    pub tolerance: f64,
    /// `(1 − tr ρ_i²)/2` per site, in site order.
    pub bipartition_values: Vec<f64>,
}

impl ConcurrenceReport {
    pub fn new(psi: &PureState, result: ConcurrenceResult, tol: f64) -> Result<Self> {
        let verdict = is_coherent(psi, tol)?;
        let shape = psi.shape();
        Ok(Self {
            source: None,
            kind: shape.kind(),
            particles: shape.particles(),
            modes: shape.modes(),
            concurrence: result.value,
            expectation: result.expectation,
            method: result.method,
            coherent: result.value <= tol,
            tolerance: tol,
            bipartition_values: verdict.bipartition_values,
        })
    }
}

impl CsvRecord for ConcurrenceReport {
    fn header() -> &'static [&'static str] {
        &[
            "source",
            "kind",
            "L",
            "N",
            "concurrence",
            "expectation",
            "method",
            "coherent",
            "tolerance",
            "bipartition_values",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.source.clone().unwrap_or_default(),
            self.kind.to_string(),
            self.particles.to_string(),
            self.modes.to_string(),
            fmt_f64(self.concurrence),
            fmt_f64(self.expectation),
            self.method.to_string(),
            self.coherent.to_string(),
            fmt_f64(self.tolerance),
            join(&self.bipartition_values),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    #[serde(flatten)]
    pub report: BoundReport,
}

impl BoundSummary {
    pub fn new(rho: &MixedState, report: BoundReport) -> Self {
        let shape = rho.shape();
        Self {
            source: None,
            particles: shape.particles(),
            modes: shape.modes(),
            report,
        }
    }
}

impl CsvRecord for BoundSummary {
    fn header() -> &'static [&'static str] {
        &[
            "source",
            "kind",
            "L",
            "N",
            "witness",
            "lower_bound",
            "detected",
            "form",
        ]
    }

    fn fields(&self) -> Vec<String> {
        let r = &self.report;
        vec![
            self.source.clone().unwrap_or_default(),
            r.kind.to_string(),
            self.particles.to_string(),
            self.modes.to_string(),
            fmt_f64(r.witness),
            fmt_f64(r.lower_bound),
            r.detected.to_string(),
            r.form.to_string(),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoofReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    pub value: f64,
    pub restarts_used: usize,
    pub converged: bool,
    pub decomposition: Decomposition,
}

impl RoofReport {
    pub fn new(rho: &MixedState, est: RoofEstimate) -> Self {
        let shape = rho.shape();
        Self {
            source: None,
            kind: shape.kind(),
            particles: shape.particles(),
            modes: shape.modes(),
            value: est.value,
            restarts_used: est.restarts_used,
            converged: est.converged,
            decomposition: est.decomposition,
        }
    }
}

impl CsvRecord for RoofReport {
    fn header() -> &'static [&'static str] {
        &[
            "source",
            "kind",
            "L",
            "N",
            "value",
            "restarts_used",
            "converged",
            "members",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.source.clone().unwrap_or_default(),
            self.kind.to_string(),
            self.particles.to_string(),
            self.modes.to_string(),
            fmt_f64(self.value),
            self.restarts_used.to_string(),
            self.converged.to_string(),
            self.decomposition.len().to_string(),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchmidtReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub kind: ParticleKind,
    #[serde(rename = "L")]
    pub particles: usize,
    #[serde(rename = "N")]
    pub modes: usize,
    /// 1-based.
    pub site: usize,
    /// Nonincreasing.
    pub coefficients: Vec<f64>,
    /// Coefficients above `1e-12`.
    pub rank: usize,
}

impl SchmidtReport {
    /// `site` is 1-based.
    pub fn new(psi: &PureState, site: usize) -> Result<Self> {
        if site == 0 {
            return Err(crate::Error::Validation("sites are numbered from 1".into()));
        }
        let coefficients = schmidt_coefficients(psi, site - 1)?;
        let shape = psi.shape();
        Ok(Self {
            source: None,
            kind: shape.kind(),
            particles: shape.particles(),
            modes: shape.modes(),
            site,
            rank: coefficients.iter().filter(|c| **c > 1e-12).count(),
            coefficients,
        })
    }
}

impl CsvRecord for SchmidtReport {
    fn header() -> &'static [&'static str] {
        &["source", "kind", "L", "N", "site", "rank", "coefficients"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.source.clone().unwrap_or_default(),
            self.kind.to_string(),
            self.particles.to_string(),
            self.modes.to_string(),
            self.site.to_string(),
            self.rank.to_string(),
            join(&self.coefficients),
        ]
    }
}

impl CsvRecord for HealthReport {
    fn header() -> &'static [&'static str] {
        &[
            "tag",
            "kind",
            "L",
            "N",
            "alpha",
            "idempotence_defect",
            "hermiticity_defect",
            "highest_weight_defect",
            "subspace_defect",
            "passed",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            format!("{:?}", self.tag),
            self.kind.to_string(),
            self.particles.to_string(),
            self.modes.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.idempotence_defect),
            fmt_f64(self.hermiticity_defect),
            self.highest_weight_defect.map(fmt_f64).unwrap_or_default(),
            fmt_f64(self.subspace_defect),
            self.passed.to_string(),
        ]
    }
}

/// Labeled source path, attached after computation.
pub trait Sourced {
    fn set_source(&mut self, source: String);
}

macro_rules! sourced {
    ($($t:ty),*) => {$(
        impl Sourced for $t {
            fn set_source(&mut self, source: String) {
                self.source = Some(source);
            }
        }
    )*};
}

sourced!(ConcurrenceReport, BoundSummary, RoofReport, SchmidtReport);
