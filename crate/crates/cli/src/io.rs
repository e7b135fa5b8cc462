//! Output files. CSV numbers carry 17 significant digits; every file starts
//! with the resolved configuration so the run can be repeated from it.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use stochgrav_core::background::{BackgroundEnsemble, FourVector, PlaneWaveMode, SpectrumParams, Tensor4};

use crate::config::Settings;
use crate::{CliError, Subcommand, VERSION};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# stochgrav <version> <subcommand>` followed by one `# key=value` line per
/// resolved setting.
pub fn csv_preamble(command: Subcommand, settings: &Settings) -> String {
    let mut s = format!("# stochgrav {VERSION} {}\n", command.name());
    for (k, v) in settings.echo() {
        let _ = writeln!(s, "# {k}={v}");
    }
    s
}

pub fn csv_table(command: Subcommand, settings: &Settings, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut s = csv_preamble(command, settings);
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.into_iter().map(num).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

pub fn config_object(settings: &Settings) -> Value {
    Value::Object(settings.echo().into_iter().map(|(k, v)| (k, Value::String(v))).collect())
}

/// `{version, command, config, warnings}` merged with `payload`'s fields.
pub fn record(command: Subcommand, settings: &Settings, warnings: &[String], payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!("stochgrav"));
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command.name()));
    m.insert("config".into(), config_object(settings));
    m.insert("warnings".into(), json!(warnings));
    if let Value::Object(p) = payload {
        m.extend(p);
    }
    Value::Object(m)
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpectrumRecord {
    pub f_min: f64,
    pub f_max: f64,
    pub exponent: f64,
    pub rms: f64,
    pub h_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModeRecord {
    pub id: u64,
    /// Polarization `e_μν`, row-major.
    pub e: Vec<f64>,
    /// Covariant wave vector `k_μ` in 1/m.
    pub k: Vec<f64>,
    pub phase0: f64,
}

/// Ensemble file written by `background` and read by `deviate`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EnsembleRecord {
    pub seed: u64,
    pub spectrum: SpectrumRecord,
    pub modes: Vec<ModeRecord>,
}

impl EnsembleRecord {
    pub fn from_ensemble(ens: &BackgroundEnsemble) -> Self {
        let s = ens.spectrum();
        EnsembleRecord {
            seed: ens.seed(),
            spectrum: SpectrumRecord { f_min: s.f_min, f_max: s.f_max, exponent: s.exponent, rms: s.rms, h_max: s.h_max },
            modes: ens
                .modes()
                .iter()
                .map(|m| ModeRecord {
                    id: m.mode_id(),
                    e: m.polarization().iter().flatten().copied().collect(),
                    k: m.wave_vector().0.to_vec(),
                    phase0: m.phase0(),
                })
                .collect(),
        }
    }

    /// Rebuilds the ensemble, re-checking every mode.
    pub fn to_ensemble(&self) -> Result<BackgroundEnsemble, CliError> {
        let s = &self.spectrum;
        let spectrum = SpectrumParams { f_min: s.f_min, f_max: s.f_max, exponent: s.exponent, rms: s.rms, h_max: s.h_max };
        let modes = self
            .modes
            .iter()
            .map(|m| {
                if m.e.len() != 16 || m.k.len() != 4 {
                    return Err(CliError::Config(format!("mode {} needs 16 polarization and 4 wave-vector entries", m.id)));
                }
                let mut e: Tensor4 = [[0.0; 4]; 4];
                for (i, x) in m.e.iter().enumerate() {
                    e[i / 4][i % 4] = *x;
                }
                let k = FourVector([m.k[0], m.k[1], m.k[2], m.k[3]]);
                Ok(PlaneWaveMode::new(e, k, m.phase0, m.id, spectrum.h_max)?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(BackgroundEnsemble::from_modes(modes, self.seed, spectrum)?)
    }
}

/// Reads the `modes`, `seed` and `spectrum` fields of an ensemble file.
pub fn read_ensemble(path: &Path) -> Result<BackgroundEnsemble, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read ensemble {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("ensemble {}: {e}", path.display())))?;
    let pick = |k: &str| v.get(k).cloned().unwrap_or(Value::Null);
    let rec: EnsembleRecord = serde_json::from_value(json!({
        "seed": pick("seed"),
        "spectrum": pick("spectrum"),
        "modes": pick("modes"),
    }))
    .map_err(|e| CliError::Config(format!("ensemble {}: {e}", path.display())))?;
    rec.to_ensemble()
}

#[cfg(test)]
mod tests {
    use super::*;
    use stochgrav_core::background::sample_background;

    #[test]
    fn ensemble_record_round_trips() {
        let ens = sample_background(6, 3, SpectrumParams::new(10.0, 100.0, -0.5, 1e-5)).unwrap();
        let rec = EnsembleRecord::from_ensemble(&ens);
        let text = serde_json::to_string(&rec).unwrap();
        let back: EnsembleRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_ensemble().unwrap(), ens);
    }

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
