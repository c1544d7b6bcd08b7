//! Parsing of `--input` and grid specifications.

use loqc::fock::{DualRailQubit, FockState, SparseKet};
use loqc::protocols::ProtocolName;
use loqc::{Amplitude, Ket};

use crate::error::{CliError, CliResult};

/// Default logical input for each protocol.
pub fn default_input(protocol: ProtocolName) -> &'static str {
    match protocol {
        ProtocolName::Ns => "2",
        ProtocolName::Teleport1 | ProtocolName::TeleportN => "1",
        ProtocolName::Cz16 | ProtocolName::Cz4 | ProtocolName::CzN => "11",
    }
}

fn single_rail(symbol: char) -> CliResult<Ket> {
    let (a, b) = qubit_amplitudes(symbol).ok_or_else(|| CliError::invalid(format!("unknown qubit symbol '{symbol}'")))?;
    SparseKet::from_terms(1, [(FockState::new(vec![0]), a), (FockState::new(vec![1]), b)]).map_err(CliError::from)
}

fn qubit_amplitudes(symbol: char) -> Option<(Amplitude, Amplitude)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Amplitude::new(1.0, 0.0);
    let zero = Amplitude::new(0.0, 0.0);
    match symbol {
        '0' => Some((one, zero)),
        '1' => Some((zero, one)),
        '+' => Some((one * h, one * h)),
        '-' => Some((one * h, -one * h)),
        _ => None,
    }
}

/// Kets handed to the protocol for an input specification.
///
/// * `ns`: photon numbers joined by `+`, e.g. `2` or `0+2`, giving an equal
///   superposition of those Fock states on one mode.
/// * `teleport1`, `teleportn`: one of `0`, `1`, `+`, `-` for a single-rail
///   qubit (photon number 0 or 1 in one mode).
/// * `cz16`, `cz4`, `czn`: two such symbols, one dual-rail qubit each.
pub fn parse_input(protocol: ProtocolName, spec: &str) -> CliResult<Vec<Ket>> {
    let spec = spec.trim();
    match protocol {
        ProtocolName::Ns => {
            let mut terms = Vec::new();
            for part in spec.split('+') {
                let n: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| CliError::invalid(format!("ns input '{spec}' must be photon numbers joined by '+'")))?;
                terms.push((FockState::new(vec![n]), Amplitude::new(1.0, 0.0)));
            }
            let ket = SparseKet::from_terms(1, terms)?.normalized()?;
            Ok(vec![ket])
        }
        ProtocolName::Teleport1 | ProtocolName::TeleportN => {
            let mut chars = spec.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(vec![single_rail(c)?]),
                _ => Err(CliError::invalid(format!("{protocol} input '{spec}' must be one of 0, 1, +, -"))),
            }
        }
        ProtocolName::Cz16 | ProtocolName::Cz4 | ProtocolName::CzN => {
            let symbols: Vec<char> = spec.chars().collect();
            if symbols.len() != 2 {
                return Err(CliError::invalid(format!("{protocol} input '{spec}' must be two qubit symbols such as 11 or +0")));
            }
            symbols
                .into_iter()
                .map(|c| {
                    let (a, b) = qubit_amplitudes(c)
                        .ok_or_else(|| CliError::invalid(format!("unknown qubit symbol '{c}' in '{spec}'")))?;
                    Ok(DualRailQubit::encode(a, b))
                })
                .collect()
        }
    }
}

/// Grid of parameter values.
///
/// Accepted forms: a single number, a comma-separated list, or
/// `start:stop:count` for `count` points from `start` to `stop` inclusive,
/// spaced evenly or, with `log`, geometrically.
pub fn parse_grid(name: &str, spec: &str, log: bool) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::invalid(format!("--{name} '{spec}': {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let (start, stop) = (number(parts[0])?, number(parts[1])?);
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        if count == 0 {
            return Err(bad("count must be a positive integer"));
        }
        if log && (start <= 0.0 || stop <= 0.0) {
            return Err(bad("log spacing needs positive endpoints"));
        }
        (0..count)
            .map(|i| {
                let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                if log {
                    (start.ln() + t * (stop.ln() - start.ln())).exp()
                } else {
                    start + t * (stop - start)
                }
            })
            .collect()
    } else {
        spec.split(',').map(number).collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
        return Err(bad(&format!("value {v} outside [0, 1]")));
    }
    Ok(values)
}

/// A grid that must hold exactly one value.
pub fn parse_single(name: &str, spec: &str) -> CliResult<f64> {
    match parse_grid(name, spec, false)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(CliError::invalid(format!("--{name} takes a single value here, got '{spec}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_inputs() {
        let k = &parse_input(ProtocolName::Ns, "2").unwrap()[0];
        assert_eq!(k.amplitude(&FockState::new(vec![2])).re, 1.0);
        let k = &parse_input(ProtocolName::Ns, "0+2").unwrap()[0];
        assert!((k.amplitude(&FockState::new(vec![0])).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(parse_input(ProtocolName::Ns, "x").is_err());
    }

    #[test]
    fn qubit_inputs() {
        let ks = parse_input(ProtocolName::Cz16, "1+").unwrap();
        assert_eq!(ks.len(), 2);
        assert_eq!(ks[0].amplitude(&FockState::new(vec![1, 0])).re, 1.0);
        assert_eq!(ks[1].len(), 2);
        assert!(parse_input(ProtocolName::Cz16, "1").is_err());
        assert!(parse_input(ProtocolName::Cz4, "12").is_err());
        let t = parse_input(ProtocolName::TeleportN, "-").unwrap();
        assert!(t[0].amplitude(&FockState::new(vec![1])).re < 0.0);
        assert!(parse_input(ProtocolName::Teleport1, "11").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("l", "0.1", false).unwrap(), vec![0.1]);
        assert_eq!(parse_grid("l", "0,0.5,1", false).unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid("l", "0:0.2:5", false).unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[4] - 0.2).abs() < 1e-15);
        let g = parse_grid("l", "1e-5:0.1:5", true).unwrap();
        assert!((g[0] - 1e-5).abs() < 1e-18);
        assert!((g[2] - 1e-3).abs() < 1e-15);
        assert!(parse_grid("l", "0:0.2:0", false).is_err());
        assert!(parse_grid("l", "0:0.2:3", true).is_err());
        assert!(parse_grid("l", "1.5", false).is_err());
        assert!(parse_single("l", "0.1,0.2").is_err());
    }
}
