//! Protocol dispatch shared by `run` and `sweep`.

use loqc::detector::DetectorModel;
use loqc::protocols::{self, CompositeRun, ProtocolName};
use loqc::{Ket, Outcomes, Run, Stats};

use crate::error::{CliError, CliResult};

pub enum Simulation {
    Single(Box<Run>),
    Composite(Box<CompositeRun<f64>>),
}

pub fn simulate(protocol: ProtocolName, inputs: &[Ket], n: usize) -> CliResult<Simulation> {
    let one = || inputs.first().ok_or_else(|| CliError::invalid("missing input"));
    let two = || match inputs {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::invalid(format!("{protocol} takes two qubits"))),
    };
    let single = |run: loqc::Result<Run>| -> CliResult<Simulation> { Ok(Simulation::Single(Box::new(run?))) };
    match protocol {
        ProtocolName::Ns => single(protocols::run_ns(one()?)),
        ProtocolName::Teleport1 => single(protocols::run_teleport_basic(one()?)),
        ProtocolName::TeleportN => single(protocols::run_teleport_n(one()?, n)),
        ProtocolName::Cz16 => {
            let (a, b) = two()?;
            single(protocols::run_cz_1_16(a, b))
        }
        ProtocolName::CzN => {
            let (a, b) = two()?;
            single(protocols::run_cz_teleported(a, b, n))
        }
        ProtocolName::Cz4 => {
            let (a, b) = two()?;
            Ok(Simulation::Composite(Box::new(protocols::run_cz_quarter(a, b)?)))
        }
    }
}

impl Simulation {
    pub fn ideal_probability(&self) -> f64 {
        match self {
            Simulation::Single(run) => run.ideal_probability(),
            Simulation::Composite(run) => run.ideal_probability(),
        }
    }

    pub fn stats(&self, model: &DetectorModel<f64>) -> CliResult<Stats> {
        Ok(match self {
            Simulation::Single(run) => run.stats(model)?,
            Simulation::Composite(run) => run.stats(model)?.composite,
        })
    }

    /// Outcome table of the final measurement.
    pub fn outcomes(&self) -> &Outcomes {
        match self {
            Simulation::Single(run) => &run.outcomes,
            Simulation::Composite(run) => &run.teleportation.outcomes,
        }
    }

    /// Each measured network with a title, for the verbose mode table.
    pub fn stages(&self) -> Vec<(&'static str, &Run)> {
        match self {
            Simulation::Single(run) => vec![("network", run.as_ref())],
            Simulation::Composite(run) => vec![("preparation", &run.preparation), ("teleportation", &run.teleportation)],
        }
    }
}

/// Table of register modes: index, label, and whether each is detected.
pub fn mode_table(run: &Run, input_modes: usize) -> String {
    let mut out = format!("{:<6}{:<8}{}\n", "mode", "label", "role");
    for (mode, label) in run.mode_labels.iter().enumerate() {
        let source = if mode < input_modes { "input" } else { "ancilla" };
        let role = if run.measured_modes().contains(&mode) { format!("{source}, detected") } else { source.to_string() };
        out.push_str(&format!("{mode:<6}{label:<8}{role}\n"));
    }
    out
}
