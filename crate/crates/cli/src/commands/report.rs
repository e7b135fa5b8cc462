use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use serde_json::json;
use stochgrav_core::background::SPEED_OF_LIGHT;
use stochgrav_core::bell::{
    bell_observable, bound_check, correlation_analytic, maximize_bell, CorrelationModel, MeasurementSettings, Method,
    ModelKind, PhaseDistribution,
};
use stochgrav_core::deviation::{
    analytic_oscillator, integrate_deviation, oscillator_energy, ConstantTidal, DeviationState, StochasticForcing,
};
use stochgrav_core::interference::{visibility_curve, SigmaLaw, SlitGeometry};

use crate::config::{key, Key, Kind};
use crate::exec::Threaded;
use crate::io::{csv_preamble, num, record, to_json_text, write_text};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    key("seed", Kind::Unsigned, "0"),
    key("bell_samples", Kind::Count, "1000000"),
    key("bound_settings", Kind::Count, "10000"),
    key("n_realizations", Kind::Count, "100000"),
    key("format", Kind::Choice(&["markdown", "csv", "json"]), "markdown"),
];

pub struct Row {
    pub check: String,
    pub value: Result<f64, String>,
    pub target: String,
    pub pass: bool,
}

fn row(check: impl Into<String>, value: Result<f64, CliError>, target: impl Into<String>, ok: impl Fn(f64) -> bool) -> Row {
    let value = value.map_err(|e| e.to_string());
    let pass = value.as_ref().map(|&v| ok(v)).unwrap_or(false);
    Row { check: check.into(), value, target: target.into(), pass }
}

fn oscillator_errors(dt_div: f64) -> Result<(f64, f64), CliError> {
    let period = 1.0;
    let omega = 2.0 * PI / period;
    let r0 = (omega / SPEED_OF_LIGHT).powi(2);
    let steps = (10.0 * dt_div) as usize;
    let traj = integrate_deviation(&ConstantTidal(r0), &StochasticForcing::none(), DeviationState::new(1.0, 0.0, 0.0), period / dt_div, steps)?;
    let mut err = 0.0_f64;
    for st in &traj {
        err = err.max((st.ell - analytic_oscillator(r0, 1.0, st.tau)?).abs());
    }
    let e0 = oscillator_energy(r0, &traj[0]);
    let drift = traj.iter().map(|st| (oscillator_energy(r0, st) - e0).abs() / e0).fold(0.0, f64::max);
    Ok((err, drift))
}

pub fn build(seed: u64, bell_samples: usize, bound_settings: usize, n_realizations: usize, exec: &Threaded) -> Vec<Row> {
    let mut rows = Vec::new();
    let reference = MeasurementSettings::default();
    let cosine = CorrelationModel::new(ModelKind::CosineProjection);
    let sign = CorrelationModel::new(ModelKind::DeterministicSign);

    let s_of = |m: &CorrelationModel, method| bell_observable(&reference, m, method, exec).map(|r| r.s_value).map_err(CliError::from);
    rows.push(row("S, cosine-projection, analytic", s_of(&cosine, Method::Analytic), "sqrt(2) +- 1e-9", |v| (v - SQRT_2).abs() <= 1e-9));
    rows.push(row("S, deterministic-sign, analytic", s_of(&sign, Method::Analytic), "1 +- 1e-9", |v| (v - 1.0).abs() <= 1e-9));

    let mc = bell_observable(&reference, &cosine, Method::MonteCarlo { n: bell_samples, seed }, exec).map_err(CliError::from);
    let se = mc.as_ref().map(|r| r.std_error).unwrap_or(0.0);
    rows.push(row(
        format!("S, cosine-projection, Monte Carlo n={bell_samples}"),
        mc.map(|r| r.s_value),
        format!("sqrt(2) +- 3se ({})", num(3.0 * se)),
        |v| (v - SQRT_2).abs() <= 3.0 * se,
    ));

    for (label, theta) in [("0", 0.0), ("pi/4", FRAC_PI_4), ("pi/2", FRAC_PI_2), ("3pi/4", 3.0 * FRAC_PI_4), ("pi", PI)] {
        rows.push(row(
            format!("M(theta={label}), rho=2"),
            correlation_analytic(theta, &PhaseDistribution::default()).map_err(CliError::from),
            format!("cos(theta) = {:.12}", theta.cos()),
            move |v| (v - theta.cos()).abs() <= 1e-12,
        ));
    }

    let max_of = |m: &CorrelationModel| maximize_bell(m, 32).map(|o| o.s_value).map_err(CliError::from);
    rows.push(row("max S, cosine-projection", max_of(&cosine), "sqrt(2) +- 1e-6", |v| (v - SQRT_2).abs() <= 1e-6));
    rows.push(row("max S, deterministic-sign", max_of(&sign), "1 +- 1e-6", |v| (v - 1.0).abs() <= 1e-6));

    for (m, target) in [(&sign, "<= 1 + 1e-9"), (&cosine, "<= sqrt(2) + 1e-9")] {
        let r = bound_check(m, bound_settings, seed).map_err(CliError::from);
        let pass = r.as_ref().map(|r| r.pass).unwrap_or(false);
        rows.push(row(
            format!("largest S over {bound_settings} random settings, {}", m.kind),
            r.map(|r| r.max_observed),
            target,
            move |_| pass,
        ));
    }

    let sigmas = [0.0, 0.5, 1.0, 1.5, 2.0];
    match visibility_curve(&SlitGeometry::default(), SigmaLaw::Gaussian, &sigmas, n_realizations, seed, exec) {
        Ok(curve) => {
            for p in curve {
                let expect = (-0.5 * p.sigma * p.sigma).exp();
                let tol = 3.0 * p.std_error + 1e-9;
                rows.push(row(
                    format!("visibility, gaussian sigma={}", p.sigma),
                    Ok(p.visibility),
                    format!("exp(-sigma^2/2) = {expect:.12} +- {}", num(tol)),
                    move |v| (v - expect).abs() <= tol,
                ));
            }
        }
        Err(e) => rows.push(row("visibility curve", Err(e.into()), "exp(-sigma^2/2)", |_| false)),
    }

    let coarse = oscillator_errors(200.0);
    let fine = oscillator_errors(400.0);
    let order = match (&coarse, &fine) {
        (Ok((a, _)), Ok((b, _))) => Ok((a / b).log2()),
        (Err(e), _) | (_, Err(e)) => Err(CliError::Config(e.to_string())),
    };
    rows.push(row("RK4 order under dt halving", order, "4 +- 0.3", |v| (v - 4.0).abs() <= 0.3));
    rows.push(row("oscillator energy drift, 10 periods, dt=T/200", coarse.map(|c| c.1), "< 1e-6", |v| v < 1e-6));
    rows
}

fn markdown(rows: &[Row]) -> String {
    let mut s = String::from("| check | value | target | result |\n|---|---|---|---|\n");
    for r in rows {
        let value = match &r.value {
            Ok(v) => format!("{v:.12}"),
            Err(e) => format!("error: {e}"),
        };
        s.push_str(&format!("| {} | {} | {} | {} |\n", r.check, value, r.target, if r.pass { "pass" } else { "FAIL" }));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    s.push_str(&format!("\n{passed}/{} checks pass\n", rows.len()));
    s
}

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let rows = build(s.unsigned("seed"), s.count("bell_samples"), s.count("bound_settings"), s.count("n_realizations"), &run.exec);
    let table = markdown(&rows);
    write!(run.out, "{table}")?;
    if let Some(path) = &run.output {
        let text = match s.text("format") {
            "json" => {
                let items: Vec<_> = rows
                    .iter()
                    .map(|r| json!({ "check": r.check, "value": r.value.as_ref().ok(), "error": r.value.as_ref().err(), "target": r.target, "pass": r.pass }))
                    .collect();
                to_json_text(&record(run.command, s, &[], json!({ "rows": items })))
            }
            "csv" => {
                let mut t = csv_preamble(run.command, s);
                t.push_str("check,value,target,pass\n");
                for r in &rows {
                    let v = r.value.as_ref().map(|v| num(*v)).unwrap_or_else(|_| "nan".into());
                    t.push_str(&format!("\"{}\",{v},\"{}\",{}\n", r.check, r.target, r.pass));
                }
                t
            }
            _ => {
                let mut t = String::new();
                for (k, v) in s.echo() {
                    t.push_str(&format!("<!-- {k}={v} -->\n"));
                }
                t.push('\n');
                t.push_str(&table);
                t
            }
        };
        write_text(path, &text)?;
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} report rows failed")))
    }
}
