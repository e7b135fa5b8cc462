use serde_json::json;
use stochgrav_core::background::{
    field_equation_residual, harmonic_gauge_residual, sample_background, SourceTensor, SpectrumParams,
};

use crate::config::{key, required, Key, Kind};
use crate::io::{csv_table, num, record, to_json_text, write_text, EnsembleRecord};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    required("n_modes", Kind::Count),
    required("f_min_hz", Kind::Float),
    required("f_max_hz", Kind::Float),
    required("rms", Kind::Float),
    key("exponent", Kind::Float, "0"),
    key("h_max", Kind::Float, "0.01"),
    required("seed", Kind::Unsigned),
    key("format", Kind::Choice(&["json", "csv"]), "json"),
];

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let spectrum = SpectrumParams {
        h_max: s.float("h_max"),
        ..SpectrumParams::new(s.float("f_min_hz"), s.float("f_max_hz"), s.float("exponent"), s.float("rms"))
    };
    spectrum.validate()?;
    let ens = sample_background(s.count("n_modes"), s.unsigned("seed"), spectrum)?;

    let vacuum = SourceTensor::vacuum();
    let (mut gauge, mut field) = (0.0_f64, 0.0_f64);
    for m in ens.modes() {
        let scale = m.residual_scale();
        gauge = gauge.max(harmonic_gauge_residual(m) / scale);
        field = field.max(field_equation_residual(m, &vacuum) / (scale * m.wave_vector().euclidean_norm()));
    }

    let path = run.output_or("background.json");
    let text = if s.text("format") == "csv" {
        let mut header = vec!["id".to_string()];
        header.extend((0..16).map(|i| format!("e{}{}", i / 4, i % 4)));
        header.extend((0..4).map(|i| format!("k{i}")));
        header.push("phase0".into());
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = ens.modes().iter().map(|m| {
            let mut r = vec![m.mode_id() as f64];
            r.extend(m.polarization().iter().flatten());
            r.extend(m.wave_vector().0);
            r.push(m.phase0());
            r
        });
        csv_table(run.command, s, &header, rows)
    } else {
        let payload = serde_json::to_value(EnsembleRecord::from_ensemble(&ens)).expect("ensemble serializes");
        let mut rec = record(run.command, s, &[], payload);
        rec["residuals"] = json!({ "max_gauge_scaled": gauge, "max_field_equation_scaled": field });
        to_json_text(&rec)
    };
    write_text(&path, &text)?;
    writeln!(run.out, "modes={}", ens.len())?;
    writeln!(run.out, "max_gauge_residual_scaled={}", num(gauge))?;
    writeln!(run.out, "max_field_equation_residual_scaled={}", num(field))?;
    writeln!(run.out, "output={}", path.display())?;
    Ok(())
}
