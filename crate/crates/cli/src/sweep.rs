use std::path::PathBuf;
use std::str::FromStr;

use loqc::analysis::{find_nc, Mode, TeleportAnalysis};
use loqc::detector::DetectorModel;
use loqc::protocols::ProtocolName;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::input::{default_input, parse_grid, parse_input};
use crate::output::{num, write_csv};
use crate::simulation::simulate;

/// What a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Simulated protocol over an `l × g` grid.
    Protocol(ProtocolName),
    /// Closed-form critical resource size over an `l` grid.
    TeleportNc,
    /// Closed-form probabilities against `n` at fixed loss.
    PfVsN,
}

impl FromStr for SweepKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "teleport-nc" => Ok(SweepKind::TeleportNc),
            "pf-vs-n" => Ok(SweepKind::PfVsN),
            other => other.parse().map(SweepKind::Protocol).map_err(|e: loqc::Error| {
                CliError::invalid(format!("{e}; sweeps also accept teleport-nc and pf-vs-n"))
            }),
        }
    }
}

impl SweepKind {
    pub fn name(&self) -> String {
        match self {
            SweepKind::Protocol(p) => p.to_string(),
            SweepKind::TeleportNc => "teleport-nc".into(),
            SweepKind::PfVsN => "pf-vs-n".into(),
        }
    }
}

pub struct SweepSettings {
    pub kind: SweepKind,
    pub input: Option<String>,
    pub l: Option<String>,
    pub g: Option<String>,
    pub n: Option<usize>,
    pub mode: Mode,
    pub n_max: usize,
    pub log: bool,
    pub out: PathBuf,
}

/// Default `l` and `g` range of the protocol surfaces.
pub const DEFAULT_SURFACE_GRID: &str = "0:0.2:21";
/// Default loss range of the critical-point sweep, log spaced.
pub const DEFAULT_NC_GRID: &str = "1e-5:0.2:60";
/// Default loss of the `pf-vs-n` sweep.
pub const DEFAULT_PF_LOSS: &str = "0.01";

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn cmd_sweep(settings: &SweepSettings) -> CliResult<usize> {
    let table = sweep_table(settings)?;
    write_csv(&settings.out, &table.header, &table.rows)?;
    Ok(table.rows.len())
}

pub fn sweep_table(settings: &SweepSettings) -> CliResult<Table> {
    match settings.kind {
        SweepKind::Protocol(protocol) => protocol_sweep(settings, protocol),
        SweepKind::TeleportNc => nc_sweep(settings),
        SweepKind::PfVsN => pf_vs_n(settings),
    }
}

fn protocol_sweep(settings: &SweepSettings, protocol: ProtocolName) -> CliResult<Table> {
    let ls = parse_grid("l", settings.l.as_deref().unwrap_or(DEFAULT_SURFACE_GRID), settings.log)?;
    let gs = parse_grid("g", settings.g.as_deref().unwrap_or(DEFAULT_SURFACE_GRID), settings.log)?;
    let input = settings.input.as_deref().unwrap_or(default_input(protocol));
    let n = settings.n.unwrap_or(1);
    if protocol.uses_n() && n < 1 {
        return Err(CliError::invalid("--n must be at least 1"));
    }
    let sim = simulate(protocol, &parse_input(protocol, input)?, n)?;
    let points: Vec<(f64, f64)> = ls.iter().flat_map(|&l| gs.iter().map(move |&g| (l, g))).collect();
    let rows = points
        .par_iter()
        .map(|&(l, g)| {
            let s = sim.stats(&DetectorModel::new(l, g)?)?;
            Ok(vec![num(l), num(g), num(s.p_s), num(s.p_d), num(s.p_f)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table { header: vec!["l", "g", "p_s", "p_d", "p_f"], rows })
}

fn nc_sweep(settings: &SweepSettings) -> CliResult<Table> {
    let (spec, log) = match &settings.l {
        Some(spec) => (spec.as_str(), settings.log),
        None => (DEFAULT_NC_GRID, true),
    };
    let ls = parse_grid("l", spec, log)?;
    let rows = ls
        .par_iter()
        .map(|&l| {
            let cp = find_nc(l, settings.n_max, settings.mode)?;
            Ok(vec![num(l), cp.n_c.to_string(), num(cp.p_s_max), num(cp.p_f_at_nc), cp.converged.to_string()])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table { header: vec!["l", "n_c", "p_s_max", "p_f_at_nc", "converged"], rows })
}

fn pf_vs_n(settings: &SweepSettings) -> CliResult<Table> {
    let ls = parse_grid("l", settings.l.as_deref().unwrap_or(DEFAULT_PF_LOSS), settings.log)?;
    let mut points = Vec::new();
    for &l in &ls {
        let upto = match settings.n {
            Some(n) if n >= 1 => n,
            Some(_) => return Err(CliError::invalid("--n must be at least 1")),
            None if l > 0.0 => find_nc(l, settings.n_max, settings.mode)?.n_c,
            None => settings.n_max,
        };
        points.extend((1..=upto).map(|n| (l, n)));
    }
    let mode = settings.mode;
    let rows = points
        .par_iter()
        .map(|&(l, n)| {
            let s = TeleportAnalysis::new(n, l)?.for_mode(mode);
            Ok(vec![num(l), n.to_string(), num(s.p_s), num(s.p_d), num(s.p_f)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table { header: vec!["l", "n", "p_s", "p_d", "p_f"], rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(kind: SweepKind) -> SweepSettings {
        SweepSettings {
            kind,
            input: None,
            l: None,
            g: None,
            n: None,
            mode: Mode::Teleport,
            n_max: 1000,
            log: false,
            out: PathBuf::from("unused.csv"),
        }
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("pf-vs-n".parse::<SweepKind>().unwrap(), SweepKind::PfVsN);
        assert_eq!("cz16".parse::<SweepKind>().unwrap(), SweepKind::Protocol(ProtocolName::Cz16));
        assert!("bogus".parse::<SweepKind>().is_err());
    }

    #[test]
    fn protocol_rows_follow_grid_order() {
        let mut s = settings(SweepKind::Protocol(ProtocolName::Ns));
        s.l = Some("0,0.1".into());
        s.g = Some("0,0.05,0.1".into());
        let t = sweep_table(&s).unwrap();
        let coords: Vec<(String, String)> = t.rows.iter().map(|r| (r[0].clone(), r[1].clone())).collect();
        assert_eq!(coords.len(), 6);
        assert_eq!(coords[0], (num(0.0), num(0.0)));
        assert_eq!(coords[2], (num(0.0), num(0.1)));
        assert_eq!(coords[3], (num(0.1), num(0.0)));
        assert_eq!(t.rows[0][2], num(0.25));
    }

    #[test]
    fn pf_vs_n_stops_at_critical_n() {
        let t = sweep_table(&settings(SweepKind::PfVsN)).unwrap();
        let nc = find_nc(0.01, 1000, Mode::Teleport).unwrap().n_c;
        assert_eq!(t.rows.len(), nc);
        let pf: Vec<f64> = t.rows.iter().map(|r| r[4].parse().unwrap()).collect();
        assert!(pf.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn nc_sweep_defaults_to_log_grid() {
        let t = sweep_table(&settings(SweepKind::TeleportNc)).unwrap();
        assert_eq!(t.rows.len(), 60);
        let first: f64 = t.rows[0][0].parse().unwrap();
        assert!((first - 1e-5).abs() < 1e-17);
    }
}
