
use serde_json::{json, Value};
use stochgrav_core::bell::{
    bell_observable, BellResult, CorrelationModel, MeasurementSettings, Method, ModelKind, PhaseDistribution,
};

use crate::config::{key, Key, Kind};
use crate::io::{csv_table, record, to_json_text, write_text};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    key("model", Kind::Choice(&["cosine-projection", "deterministic-sign", "quantum-reference"]), "cosine-projection"),
    key("rho", Kind::Float, "2"),
    key("a", Kind::Float, "0"),
    key("a_prime", Kind::Float, "1.5707963267948966"),
    key("b", Kind::Float, "0.7853981633974483"),
    key("b_prime", Kind::Float, "-0.7853981633974483"),
    key("method", Kind::Choice(&["analytic", "montecarlo"]), "analytic"),
    key("n", Kind::Count, "1000000"),
    key("seed", Kind::Unsigned, "0"),
    key("format", Kind::Choice(&["json", "csv"]), "json"),
];

pub fn result_json(r: &BellResult) -> Value {
    json!({
        "settings": { "a": r.settings.a, "a_prime": r.settings.a_prime, "b": r.settings.b, "b_prime": r.settings.b_prime },
        "model": r.model.name(),
        "method": r.method.name(),
        "n_samples": r.n_samples(),
        "seed": r.seed(),
        "correlations": r.correlations,
        "s_value": r.s_value,
        "std_error": r.std_error,
        "bound": r.bound,
        "pass": r.passes(),
    })
}

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let kind: ModelKind = s.text("model").parse()?;
    let model = CorrelationModel::with_distribution(kind, PhaseDistribution::Constant { rho: s.float("rho") })?;
    let settings = MeasurementSettings::new(s.float("a"), s.float("a_prime"), s.float("b"), s.float("b_prime"))?;
    let method = match s.text("method") {
        "montecarlo" => Method::MonteCarlo { n: s.count("n"), seed: s.unsigned("seed") },
        _ => Method::Analytic,
    };
    if let Method::MonteCarlo { n, .. } = method {
        if n < stochgrav_core::bell::MIN_SAMPLES {
            return Err(CliError::Config(format!("montecarlo needs n >= {}, got {n}", stochgrav_core::bell::MIN_SAMPLES)));
        }
    }
    let r = bell_observable(&settings, &model, method, &run.exec)?;
    let normalization = model.distribution.normalization();
    let warnings = if (normalization - 1.0).abs() > 1e-12 {
        vec![format!("phase weight (1/2pi) * integral of rho = {normalization}, not 1")]
    } else {
        Vec::new()
    };

    let path = run.output_or("bell.json");
    let text = if s.text("format") == "csv" {
        let header = ["a", "a_prime", "b", "b_prime", "m_ab", "m_a_prime_b", "m_ab_prime", "m_a_prime_b_prime", "s_value", "std_error", "bound", "pass"];
        let mut row = settings.as_array().to_vec();
        row.extend(r.correlations);
        row.extend([r.s_value, r.std_error, r.bound, if r.passes() { 1.0 } else { 0.0 }]);
        csv_table(run.command, s, &header, std::iter::once(row))
    } else {
        to_json_text(&record(run.command, s, &warnings, result_json(&r)))
    };
    write_text(&path, &text)?;

    writeln!(run.out, "model={}", r.model)?;
    writeln!(run.out, "method={}", r.method.name())?;
    writeln!(run.out, "s_value={:.6}", r.s_value)?;
    writeln!(run.out, "std_error={:.6}", r.std_error)?;
    writeln!(run.out, "bound={:.6}", r.bound)?;
    writeln!(run.out, "verdict={}", if r.passes() { "within bound" } else { "BOUND VIOLATED" })?;
    for w in &warnings {
        writeln!(run.out, "warning: {w}")?;
    }
    writeln!(run.out, "output={}", path.display())?;
    if r.passes() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("S = {} exceeds bound {}", r.s_value, r.bound)))
    }
}
