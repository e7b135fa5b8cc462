use std::path::PathBuf;

use serde_json::json;
use stochgrav_core::deviation::{
    accumulate_phase, integrate_deviation, oscillator_energy, BackgroundTidal, ConstantTidal, DeviationState,
    PhaseMode, StochasticForcing, TidalSignal,
};

use crate::config::{key, Key, Kind};
use crate::io::{csv_table, num, read_ensemble, record, to_json_text, write_text};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    key("tidal", Kind::Choice(&["constant", "ensemble"]), "constant"),
    key("r", Kind::Float, "0"),
    key("ensemble", Kind::Text, ""),
    key("x", Kind::Float, "0"),
    key("y", Kind::Float, "0"),
    key("z", Kind::Float, "0"),
    key("f_sigma", Kind::Float, "0"),
    key("dt", Kind::Float, "0.001"),
    key("steps", Kind::Count, "1000"),
    key("ell0", Kind::Float, "1"),
    key("ell_rate0", Kind::Float, "0"),
    key("phase_mode", Kind::Choice(&["integral", "literal"]), "integral"),
    key("phase_output", Kind::Text, ""),
    key("seed", Kind::Unsigned, "0"),
    key("format", Kind::Choice(&["csv", "json"]), "csv"),
];

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let (dt, steps) = (s.float("dt"), s.count("steps"));
    if dt <= 0.0 {
        return Err(CliError::Config(format!("dt must be > 0, got {dt}")));
    }
    if steps == 0 {
        return Err(CliError::Config("steps must be >= 1".into()));
    }
    let forcing = StochasticForcing::draw(s.float("f_sigma"), s.unsigned("seed"))?;
    let initial = DeviationState::new(s.float("ell0"), s.float("ell_rate0"), 0.0);
    let mode = if s.text("phase_mode") == "literal" { PhaseMode::Literal } else { PhaseMode::Integral };

    let ensemble = match s.text("tidal") {
        "ensemble" => {
            let path = s.text("ensemble");
            if path.is_empty() {
                return Err(CliError::Config("tidal=ensemble needs ensemble=<file>".into()));
            }
            Some(read_ensemble(path.as_ref())?)
        }
        _ => None,
    };
    let constant = ConstantTidal(s.float("r"));
    let tidal: Box<dyn TidalSignal + '_> = match &ensemble {
        Some(ens) => Box::new(BackgroundTidal { ensemble: ens, position: [s.float("x"), s.float("y"), s.float("z")] }),
        None => Box::new(constant),
    };

    let traj = integrate_deviation(tidal.as_ref(), &forcing, initial, dt, steps)?;
    let times: Vec<f64> = traj.iter().map(|st| st.tau).collect();
    let trace = accumulate_phase(tidal.as_ref(), &times, mode)?;

    let mut warnings = Vec::new();
    if trace.clipped_fraction > 0.0 {
        warnings.push(format!("R < 0 clipped at {:.6} of phase grid points", trace.clipped_fraction));
    }
    let drift = match ensemble {
        None => {
            let r0 = constant.0;
            let e0 = oscillator_energy(r0, &traj[0]);
            (e0 > 0.0).then(|| traj.iter().map(|st| (oscillator_energy(r0, st) - e0).abs() / e0).fold(0.0, f64::max))
        }
        Some(_) => None,
    };

    let path = run.output_or("deviate.csv");
    let text = if s.text("format") == "json" {
        to_json_text(&record(
            run.command,
            s,
            &warnings,
            json!({
                "tidal": tidal.describe(),
                "forcing": forcing.value,
                "tau": times,
                "ell": traj.iter().map(|st| st.ell).collect::<Vec<_>>(),
                "ell_rate": traj.iter().map(|st| st.ell_rate).collect::<Vec<_>>(),
                "energy_drift": drift,
            }),
        ))
    } else {
        csv_table(run.command, s, &["tau_s", "ell_m", "ell_rate_m_per_s"], traj.iter().map(|st| vec![st.tau, st.ell, st.ell_rate]))
    };
    write_text(&path, &text)?;

    let phase_path = s.text("phase_output");
    if !phase_path.is_empty() {
        let rows = trace.times.iter().zip(&trace.phi).map(|(&t, &p)| vec![t, p]);
        write_text(&PathBuf::from(phase_path), &csv_table(run.command, s, &["t_s", "phi_rad"], rows))?;
    }

    writeln!(run.out, "tidal={}", tidal.describe())?;
    writeln!(run.out, "forcing={}", num(forcing.value))?;
    writeln!(run.out, "final_ell={}", num(traj[steps].ell))?;
    writeln!(run.out, "final_phase={}", num(trace.final_phase()))?;
    match drift {
        Some(d) => writeln!(run.out, "energy_drift={}", num(d))?,
        None => writeln!(run.out, "energy_drift=n/a")?,
    }
    for w in &warnings {
        writeln!(run.out, "warning: {w}")?;
    }
    writeln!(run.out, "output={}", path.display())?;
    Ok(())
}
