use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde_json::json;
use stochgrav_core::hilbert::{
    decompose_inner_product, perturbed_metric, probability_form, simplex_volume, ComplexStateVector,
    ProHilbertMetric, SimplexPointSet,
};
use stochgrav_core::rng::stream_rng;
use stochgrav_core::Error;

use crate::config::{key, Key, Kind};
use crate::io::{csv_preamble, num, record, to_json_text, write_text};
use crate::{CliError, Run};

pub const KEYS: &[Key] = &[
    key("n_pairs", Kind::Count, "1000"),
    key("dim", Kind::Count, "4"),
    key("seed", Kind::Unsigned, "0"),
    key("format", Kind::Choice(&["csv", "json"]), "csv"),
];

pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &'static str, value: f64, tolerance: f64) -> Check {
    Check { name, value, tolerance, pass: value <= tolerance }
}

fn flag(name: &'static str, ok: bool) -> Check {
    Check { name, value: if ok { 0.0 } else { 1.0 }, tolerance: 0.0, pass: ok }
}

fn random_state(rng: &mut impl Rng, d: usize) -> ComplexStateVector {
    let mut draw = || (0..d).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect::<Vec<f64>>();
    let (u, v) = (draw(), draw());
    ComplexStateVector::new(u, v).expect("finite components")
}

/// `Σ conj(ψ₁)ψ₂` in complex arithmetic.
fn hermitian(a: &ComplexStateVector, b: &ComplexStateVector) -> Complex<f64> {
    let z = |s: &ComplexStateVector| -> Vec<Complex<f64>> {
        s.real().iter().zip(s.imag()).map(|(&u, &v)| Complex::new(u, v)).collect()
    };
    z(a).iter().zip(z(b)).map(|(x, y)| x.conj() * y).sum()
}

pub fn self_checks(n_pairs: usize, dim: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    if n_pairs == 0 || dim == 0 {
        return Err(CliError::Config("n_pairs and dim must be >= 1".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let (mut recon, mut sym, mut anti) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..n_pairs {
        let a = random_state(&mut rng, dim);
        let b = random_state(&mut rng, dim);
        let ab = decompose_inner_product(&a, &b)?;
        let ba = decompose_inner_product(&b, &a)?;
        let (re, im) = ab.reconstruct();
        let z = hermitian(&a, &b);
        let scale = (a.norm_sqr() * b.norm_sqr()).sqrt();
        recon = recon.max((re - z.re).abs().max((im - z.im).abs()) / scale);
        sym = sym.max((ab.g_part - ba.g_part).abs() / scale);
        anti = anti.max((ab.omega_part + ba.omega_part).abs() / scale);
    }

    let unit = simplex_volume(&SimplexPointSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]])?);
    let singular = simplex_volume(&SimplexPointSet::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]])?);

    let psi: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let flat = perturbed_metric(DMatrix::zeros(dim, dim))?;
    let p = probability_form(&flat, &psi)?;
    let direct: f64 = psi.iter().map(|x| x * x).sum();

    let too_large = matches!(perturbed_metric(DMatrix::identity(2, 2) * 2.0), Err(Error::PerturbationTooLarge { .. }));
    let indefinite = matches!(
        ProHilbertMetric::from_parts(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.01])), DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, -0.5]))),
        Err(Error::Metric { .. })
    );
    let warned = perturbed_metric(DMatrix::identity(2, 2) * 0.5)?.weak_warning().is_some();

    Ok(vec![
        check("inner_product_reconstruction", recon, 1e-12),
        check("g_symmetry", sym, 1e-12),
        check("omega_antisymmetry", anti, 1e-12),
        check("unit_simplex_volume_error", (unit - 0.5).abs(), 0.0),
        check("singular_simplex_volume", singular, 0.0),
        check("identity_metric_probability_error", (p.value - direct).abs(), 0.0),
        flag("rejects_large_perturbation", too_large),
        flag("rejects_indefinite_metric", indefinite),
        flag("warns_on_non_weak_perturbation", warned),
    ])
}

pub fn run(run: &mut Run<'_>) -> Result<(), CliError> {
    let s = &run.settings;
    let checks = self_checks(s.count("n_pairs"), s.count("dim"), s.unsigned("seed"))?;
    for c in &checks {
        writeln!(run.out, "{:<36} {} (tol {}) {}", c.name, num(c.value), num(c.tolerance), if c.pass { "pass" } else { "FAIL" })?;
    }
    if let Some(path) = &run.output {
        let text = if s.text("format") == "json" {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| json!({ "check": c.name, "value": c.value, "tolerance": c.tolerance, "pass": c.pass }))
                .collect();
            to_json_text(&record(run.command, s, &[], json!({ "checks": rows })))
        } else {
            let mut t = csv_preamble(run.command, s);
            t.push_str("check,value,tolerance,pass\n");
            for c in &checks {
                t.push_str(&format!("{},{},{},{}\n", c.name, num(c.value), num(c.tolerance), c.pass));
            }
            t
        };
        write_text(path, &text)?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("geometry checks failed: {}", failed.join(", "))))
    }
}
