use std::path::PathBuf;

use serde_json::{json, Value};
use stochgrav_core::background::SpectrumParams;
use stochgrav_core::interference::{
    single_slit_control, two_slit_intensity, visibility, BackgroundPhaseModel, PathPhaseModel, Slit, SlitGeometry,
};

use crate::config::{key, Key, Kind, Settings};
use crate::io::{csv_table, num, record, to_json_text, write_text};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    key("slit_separation", Kind::Float, "1e-6"),
    key("screen_distance", Kind::Float, "1"),
    key("wavelength", Kind::Float, "5e-11"),
    key("screen_points", Kind::Count, "2001"),
    key("screen_half_width", Kind::Float, "0.00025"),
    key("slits", Kind::Choice(&["both", "1", "2"]), "both"),
    key("model", Kind::Choice(&["gaussian", "uniform", "background"]), "gaussian"),
    key("sigma", Kind::Float, "0"),
    key("half_width", Kind::Float, "0"),
    key("bg_n_modes", Kind::Count, "8"),
    key("bg_f_min_hz", Kind::Float, "1"),
    key("bg_f_max_hz", Kind::Float, "2"),
    key("bg_exponent", Kind::Float, "0"),
    key("bg_rms", Kind::Float, "0"),
    key("bg_window", Kind::Float, "1"),
    key("bg_grid_steps", Kind::Count, "64"),
    key("n_realizations", Kind::Count, "10000"),
    key("seed", Kind::Unsigned, "0"),
    key("format", Kind::Choice(&["csv", "json"]), "csv"),
];

pub fn geometry(s: &Settings) -> SlitGeometry {
    SlitGeometry {
        slit_separation: s.float("slit_separation"),
        screen_distance: s.float("screen_distance"),
        de_broglie_wavelength: s.float("wavelength"),
        screen_points: s.count("screen_points"),
        screen_half_width: s.float("screen_half_width"),
    }
}

pub fn phase_model(s: &Settings) -> PathPhaseModel {
    match s.text("model") {
        "uniform" => PathPhaseModel::Uniform { half_width: s.float("half_width") },
        "background" => PathPhaseModel::FromBackground(BackgroundPhaseModel {
            n_modes: s.count("bg_n_modes"),
            spectrum: SpectrumParams::new(s.float("bg_f_min_hz"), s.float("bg_f_max_hz"), s.float("bg_exponent"), s.float("bg_rms")),
            window: s.float("bg_window"),
            grid_steps: s.count("bg_grid_steps"),
        }),
        _ => PathPhaseModel::Gaussian { sigma: s.float("sigma") },
    }
}

fn model_json(m: &PathPhaseModel) -> Value {
    match m {
        PathPhaseModel::Gaussian { sigma } => json!({ "kind": "gaussian", "sigma": sigma }),
        PathPhaseModel::Uniform { half_width } => json!({ "kind": "uniform", "half_width": half_width }),
        PathPhaseModel::FromBackground(b) => json!({
            "kind": "background",
            "n_modes": b.n_modes,
            "f_min_hz": b.spectrum.f_min,
            "f_max_hz": b.spectrum.f_max,
            "exponent": b.spectrum.exponent,
            "rms": b.spectrum.rms,
            "window_s": b.window,
            "grid_steps": b.grid_steps,
        }),
    }
}

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let g = geometry(s);
    g.validate()?;
    let model = phase_model(s);
    model.validate()?;
    let n = s.count("n_realizations");
    let seed = s.unsigned("seed");
    let profile = match s.text("slits") {
        "1" => single_slit_control(&g, Slit::One)?,
        "2" => single_slit_control(&g, Slit::Two)?,
        _ => two_slit_intensity(&g, &model, n, seed, &run.exec)?,
    };
    let v = visibility(&profile)?;

    let summary = json!({
        "geometry": {
            "slit_separation_m": g.slit_separation,
            "screen_distance_m": g.screen_distance,
            "de_broglie_wavelength_m": g.de_broglie_wavelength,
            "screen_points": g.screen_points,
            "screen_half_width_m": g.screen_half_width,
        },
        "slits": s.text("slits"),
        "phase_model": model_json(&model),
        "n_realizations": profile.n_realizations,
        "seed": profile.seed,
        "visibility": v,
        "coherence": [profile.coherence.re, profile.coherence.im],
        "coherence_std_error": profile.coherence_std_error,
        "fringe_period_m": profile.fringe_period,
        "integrated_intensity": profile.integrated(),
    });

    let path = run.output_or("twoslit.csv");
    if s.text("format") == "json" {
        let mut rec = record(run.command, s, &[], summary);
        rec["positions_m"] = json!(profile.positions);
        rec["intensity"] = json!(profile.intensity);
        write_text(&path, &to_json_text(&rec))?;
    } else {
        let rows = profile.positions.iter().zip(&profile.intensity).map(|(&x, &i)| vec![x, i]);
        write_text(&path, &csv_table(run.command, s, &["x_m", "intensity"], rows))?;
        let mut side = path.clone().into_os_string();
        side.push(".run.json");
        write_text(&PathBuf::from(side), &to_json_text(&record(run.command, s, &[], summary)))?;
    }

    writeln!(run.out, "visibility={}", num(v))?;
    writeln!(run.out, "coherence_std_error={}", num(profile.coherence_std_error))?;
    writeln!(run.out, "fringe_period_m={}", num(profile.fringe_period))?;
    writeln!(run.out, "output={}", path.display())?;
    Ok(())
}
