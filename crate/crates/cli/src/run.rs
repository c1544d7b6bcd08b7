use std::path::PathBuf;

use loqc::detector::DetectorModel;
use loqc::protocols::ProtocolName;
use loqc::Stats;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::input::{default_input, parse_input, parse_single};
use crate::output::{sibling, write_file, write_json};
use crate::simulation::{mode_table, simulate, Simulation};

pub struct RunSettings {
    pub protocol: ProtocolName,
    pub input: String,
    pub l: f64,
    pub g: f64,
    pub n: usize,
    pub out: PathBuf,
    pub verbose: bool,
}

impl RunSettings {
    pub fn resolve(
        protocol: ProtocolName,
        input: Option<String>,
        l: Option<String>,
        g: Option<String>,
        n: Option<usize>,
        out: Option<PathBuf>,
        verbose: bool,
    ) -> CliResult<Self> {
        Ok(Self {
            protocol,
            input: input.unwrap_or_else(|| default_input(protocol).to_string()),
            l: l.map(|s| parse_single("l", &s)).transpose()?.unwrap_or(0.0),
            g: g.map(|s| parse_single("g", &s)).transpose()?.unwrap_or(0.0),
            n: n.unwrap_or(1),
            out: out.unwrap_or_else(|| PathBuf::from(format!("{protocol}-report.json"))),
            verbose,
        })
    }
}

#[derive(Debug, Serialize)]
struct StatsReport {
    p_s: f64,
    p_d: f64,
    p_f: f64,
}

impl From<Stats> for StatsReport {
    fn from(s: Stats) -> Self {
        Self { p_s: s.p_s, p_d: s.p_d, p_f: s.p_f }
    }
}

#[derive(Debug, Serialize)]
struct StageReport {
    preparation: StatsReport,
    teleportation: StatsReport,
    preparation_table_path: String,
}

#[derive(Debug, Serialize)]
struct RunReport {
    protocol: String,
    input: String,
    l: f64,
    g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    p_s: f64,
    p_d: f64,
    p_f: f64,
    degenerate: bool,
    ideal_probability: f64,
    outcome_table_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<StageReport>,
}

pub fn cmd_run(settings: &RunSettings) -> CliResult<()> {
    let inputs = parse_input(settings.protocol, &settings.input)?;
    if settings.protocol.uses_n() && settings.n < 1 {
        return Err(CliError::invalid("--n must be at least 1"));
    }
    let sim = simulate(settings.protocol, &inputs, settings.n)?;
    let model = DetectorModel::new(settings.l, settings.g)?;
    let stats = sim.stats(&model)?;

    if settings.verbose {
        let input_modes: usize = inputs.iter().map(|k| k.mode_count()).sum();
        for (title, run) in sim.stages() {
            let modes = if title == "preparation" { 4 } else { input_modes };
            eprintln!("{title} ({}):\n{}", run.name, mode_table(run, modes));
        }
    }

    let table_path = sibling(&settings.out, "outcomes.csv");
    write_file(&table_path, |w| sim.outcomes().write_csv(w))?;
    let stages = match &sim {
        Simulation::Composite(run) => {
            let prep_path = sibling(&settings.out, "preparation.csv");
            write_file(&prep_path, |w| run.preparation.outcomes.write_csv(w))?;
            let s = run.stats(&model)?;
            Some(StageReport {
                preparation: s.preparation.into(),
                teleportation: s.teleportation.into(),
                preparation_table_path: prep_path.display().to_string(),
            })
        }
        Simulation::Single(_) => None,
    };
    let report = RunReport {
        protocol: settings.protocol.to_string(),
        input: settings.input.clone(),
        l: settings.l,
        g: settings.g,
        n: settings.protocol.uses_n().then_some(settings.n),
        p_s: stats.p_s,
        p_d: stats.p_d,
        p_f: stats.p_f,
        degenerate: stats.degenerate,
        ideal_probability: sim.ideal_probability(),
        outcome_table_path: table_path.display().to_string(),
        stages,
    };
    write_json(&settings.out, &report)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
