use std::path::PathBuf;

use loqc::analysis::{threshold, Mode};
use serde::Serialize;

use crate::error::CliResult;
use crate::output::write_json;

#[derive(Debug, Serialize)]
pub struct ThresholdReport {
    pub target: f64,
    pub mode: String,
    pub l_required: f64,
    pub l_reported: f64,
    pub n_required: usize,
    pub n_at_l_required: usize,
    pub n_max: usize,
}

pub fn cmd_threshold(target: f64, mode: Mode, n_max: usize, out: Option<&PathBuf>) -> CliResult<ThresholdReport> {
    let t = threshold(target, mode, n_max)?;
    let report = ThresholdReport {
        target,
        mode: mode.to_string(),
        l_required: t.l_required,
        l_reported: t.l_reported,
        n_required: t.n_required,
        n_at_l_required: t.n_at_l_required,
        n_max,
    };
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    Ok(report)
}
