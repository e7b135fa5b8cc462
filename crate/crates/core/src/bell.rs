//! Hidden-variable correlations over the stochastic phase and the
//! ½-normalized CHSH observable
//!
//! ```text
//! S = ½·|M(a−b) + M(a′−b) + M(a−b′) − M(a′−b′)|
//! ```
//!
//! Correlators return signed values; the absolute value is taken once, on
//! `S`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use core::fmt;
use core::str::FromStr;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::deviation::{end_phases, PhaseStatsParams};
use crate::error::{Error, Result};
use crate::exec::{blocks, pairwise_reduce, Executor, Moments};
use crate::rng::{stream_rng, sub_seed};
use crate::stats::{kuiper_v, wrap_angle};

/// Fewest Monte Carlo samples accepted per correlator.
pub const MIN_SAMPLES: usize = 100;
/// Fewest random settings accepted by [`bound_check`].
pub const MIN_BOUND_SETTINGS: usize = 1000;
/// Slack added to a model's bound before a value counts as a violation.
pub const BOUND_SLACK: f64 = 1e-9;
/// Absolute tolerance of the table-density quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Coordinate-descent stopping tolerance on the angles.
pub const ANGLE_TOLERANCE: f64 = 1e-6;

/// Polarizer angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for MeasurementSettings {
    /// `a = 0, a′ = π/2, b = π/4, b′ = −π/4`.
    fn default() -> Self {
        MeasurementSettings { a: 0.0, a_prime: FRAC_PI_2, b: FRAC_PI_4, b_prime: -FRAC_PI_4 }
    }
}

impl MeasurementSettings {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<Self> {
        let s = MeasurementSettings { a, a_prime, b, b_prime };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::Config(format!("polarizer angles must be finite, got {self:?}")))
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        MeasurementSettings { a: v[0], a_prime: v[1], b: v[2], b_prime: v[3] }
    }

    /// `[a−b, a′−b, a−b′, a′−b′]`.
    pub fn thetas(&self) -> [f64; 4] {
        [self.a - self.b, self.a_prime - self.b, self.a - self.b_prime, self.a_prime - self.b_prime]
    }

    pub fn rotated(&self, delta: f64) -> Self {
        MeasurementSettings::from_array(self.as_array().map(|x| x + delta))
    }
}

/// `½·|m₀ + m₁ + m₂ − m₃|`.
pub fn chsh(m: [f64; 4]) -> f64 {
    0.5 * (m[0] + m[1] + m[2] - m[3]).abs()
}

/// Density `ρ(Φ)` of the hidden phase on one period.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseDistribution {
    Constant { rho: f64 },
    /// Periodic, piecewise-linear through `(phi[i], rho[i])`; `phi` strictly
    /// increasing inside `[0, 2π)`.
    Table { phi: Vec<f64>, rho: Vec<f64> },
}

impl Default for PhaseDistribution {
    fn default() -> Self {
        PhaseDistribution::Constant { rho: 2.0 }
    }
}

impl PhaseDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            PhaseDistribution::Constant { rho } => {
                if *rho >= 0.0 && rho.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Distribution(format!("rho must be finite and >= 0, got {rho}")))
                }
            }
            PhaseDistribution::Table { phi, rho } => {
                if phi.is_empty() || phi.len() != rho.len() {
                    return Err(Error::Distribution(format!(
                        "table needs matching non-empty columns, got {} phases and {} densities",
                        phi.len(),
                        rho.len()
                    )));
                }
                if let Some(r) = rho.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
                    return Err(Error::Distribution(format!("table density {r} is negative or not finite")));
                }
                if !phi.iter().all(|p| (0.0..TAU).contains(p)) {
                    return Err(Error::Distribution("table phases must lie in [0, 2pi)".into()));
                }
                if phi.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Distribution("table phases must be strictly increasing".into()));
                }
                Ok(())
            }
        }
    }

    /// `ρ(Φ)` for any real `Φ`.
    pub fn density(&self, phi: f64) -> f64 {
        match self {
            PhaseDistribution::Constant { rho } => *rho,
            PhaseDistribution::Table { phi: xs, rho: ys } => {
                let n = xs.len();
                if n == 1 {
                    return ys[0];
                }
                let mut p = wrap_angle(phi);
                if p < xs[0] {
                    p += TAU;
                }
                let i = xs.partition_point(|&x| x <= p) - 1;
                let (x0, y0) = (xs[i], ys[i]);
                let (x1, y1) = if i + 1 < n { (xs[i + 1], ys[i + 1]) } else { (xs[0] + TAU, ys[0]) };
                y0 + (y1 - y0) * (p - x0) / (x1 - x0)
            }
        }
    }

    /// `(1/2π)∫ ρ(Φ) f(Φ) dΦ` over one period.
    fn period_average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        match self {
            PhaseDistribution::Constant { rho } => {
                rho * integrate(&f, 0.0, TAU, QUADRATURE_TOLERANCE * TAU) / TAU
            }
            PhaseDistribution::Table { phi, .. } => {
                let start = phi[0];
                let mut knots: Vec<f64> = phi.clone();
                knots.push(start + TAU);
                let g = |x: f64| self.density(x) * f(x);
                let tol = QUADRATURE_TOLERANCE * TAU / (knots.len() - 1) as f64;
                knots.windows(2).map(|w| integrate(&g, w[0], w[1], tol)).sum::<f64>() / TAU
            }
        }
    }

    /// `(1/2π)∫ρ dΦ`; `2` for the default `ρ = 2`.
    pub fn normalization(&self) -> f64 {
        match self {
            PhaseDistribution::Constant { rho } => *rho,
            PhaseDistribution::Table { .. } => self.period_average(|_| 1.0),
        }
    }
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    // Four starting panels so a symmetric integrand cannot fool the first
    // error estimate.
    let q = 0.25 * (b - a);
    (0..4)
        .map(|i| {
            let lo = a + q * i as f64;
            let hi = if i == 3 { b } else { lo + q };
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            adapt(f, lo, hi, flo, fmid, fhi, simpson(flo, fmid, fhi, lo, hi), 0.25 * tol, 48)
        })
        .sum()
}

/// Signed `(1/2π)∫ρ(Φ)·cosΦ·cos(Φ+θ) dΦ`; `(ρ/2)·cosθ` for constant `ρ`.
pub fn correlation_analytic(theta: f64, dist: &PhaseDistribution) -> Result<f64> {
    dist.validate()?;
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    Ok(match dist {
        PhaseDistribution::Constant { rho } => 0.5 * rho * theta.cos(),
        PhaseDistribution::Table { .. } => dist.period_average(|p| p.cos() * (p + theta).cos()),
    })
}

/// Same integral as [`correlation_analytic`] but always by quadrature.
pub fn correlation_quadrature(theta: f64, dist: &PhaseDistribution) -> Result<f64> {
    dist.validate()?;
    Ok(dist.period_average(|p| p.cos() * (p + theta).cos()))
}

/// `1 − 2|θ|/π` with `θ` wrapped into `[−π, π]`.
pub fn sawtooth(theta: f64) -> f64 {
    let w = wrap_angle(theta);
    let w = if w > PI { TAU - w } else { w };
    1.0 - 2.0 * w / PI
}

/// `+1` for non-negative arguments, `−1` otherwise.
fn sign(x: f64) -> f64 {
    if x >= 0.0 { 1.0 } else { -1.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Outcomes are the projections `cosΦ`, `cos(Φ+θ)` weighted by `ρ(Φ)`.
    CosineProjection,
    /// Outcomes are the signs of the projections. The density is ignored;
    /// the phase is uniform.
    DeterministicSign,
    /// `E(θ) = cosθ`, no sampling.
    QuantumReference,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::CosineProjection, ModelKind::DeterministicSign, ModelKind::QuantumReference];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::CosineProjection => "cosine-projection",
            ModelKind::DeterministicSign => "deterministic-sign",
            ModelKind::QuantumReference => "quantum-reference",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown model '{s}' (expected cosine-projection, deterministic-sign or quantum-reference)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationModel {
    pub kind: ModelKind,
    pub distribution: PhaseDistribution,
}

impl CorrelationModel {
    pub fn new(kind: ModelKind) -> Self {
        CorrelationModel { kind, distribution: PhaseDistribution::default() }
    }

    pub fn with_distribution(kind: ModelKind, distribution: PhaseDistribution) -> Result<Self> {
        distribution.validate()?;
        Ok(CorrelationModel { kind, distribution })
    }

    /// Analytic correlation `M(θ)`.
    pub fn correlation(&self, theta: f64) -> Result<f64> {
        match self.kind {
            ModelKind::CosineProjection => correlation_analytic(theta, &self.distribution),
            ModelKind::DeterministicSign => Ok(sawtooth(theta)),
            ModelKind::QuantumReference => Ok(theta.cos()),
        }
    }

    /// Largest `S` the model can reach: `1` for signs, `√2·R` for a
    /// correlation of the form `R·cos(θ + δ)`.
    pub fn bound(&self) -> Result<f64> {
        Ok(match self.kind {
            ModelKind::DeterministicSign => 1.0,
            ModelKind::QuantumReference => SQRT_2,
            ModelKind::CosineProjection => SQRT_2 * self.harmonic()?.0.hypot(self.harmonic()?.1),
        })
    }

    /// `(p, q)` with `M(θ) = p·cosθ − q·sinθ`; every density gives this form.
    fn harmonic(&self) -> Result<(f64, f64)> {
        match &self.distribution {
            PhaseDistribution::Constant { rho } => Ok((0.5 * rho, 0.0)),
            d => Ok((correlation_analytic(0.0, d)?, -correlation_analytic(FRAC_PI_2, d)?)),
        }
    }

    /// Cheap evaluator of `M(θ)` for sweeps.
    fn evaluator(&self) -> Result<impl Fn(f64) -> f64> {
        self.distribution.validate()?;
        let kind = self.kind;
        let (p, q) = if kind == ModelKind::CosineProjection { self.harmonic()? } else { (0.0, 0.0) };
        Ok(move |t: f64| match kind {
            ModelKind::CosineProjection => p * t.cos() - q * t.sin(),
            ModelKind::DeterministicSign => sawtooth(t),
            ModelKind::QuantumReference => t.cos(),
        })
    }

    fn sample(&self, phi: f64, theta: f64) -> f64 {
        match self.kind {
            ModelKind::CosineProjection => self.distribution.density(phi) * phi.cos() * (phi + theta).cos(),
            ModelKind::DeterministicSign => sign(phi.cos()) * sign((phi + theta).cos()),
            ModelKind::QuantumReference => theta.cos(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

fn mc_block(model: &CorrelationModel, theta: f64, seed: u64, block: usize, len: usize) -> Moments {
    let mut rng = stream_rng(seed, block as u64);
    let mut m = Moments::default();
    for _ in 0..len {
        let phi = TAU * rng.random::<f64>();
        m.push(model.sample(phi, theta));
    }
    m
}

/// Monte Carlo correlator with `Φ` uniform on `[0, 2π)`. The
/// quantum-reference model returns `cosθ` with zero error.
pub fn correlation_montecarlo<E: Executor>(theta: f64, model: &CorrelationModel, n: usize, seed: u64, exec: &E) -> Result<Estimate> {
    if n < MIN_SAMPLES {
        return Err(Error::SampleSize { got: n, min: MIN_SAMPLES });
    }
    model.distribution.validate()?;
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    if model.kind == ModelKind::QuantumReference {
        return Ok(Estimate { value: theta.cos(), std_error: 0.0 });
    }
    let spans: Vec<(usize, usize)> = blocks(n).collect();
    let parts = exec.map_indexed(spans.len(), |b| mc_block(model, theta, seed, b, spans[b].1));
    let m = pairwise_reduce(parts, Moments::merge).unwrap_or_default();
    Ok(Estimate { value: m.mean, std_error: m.std_error() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    /// `n` samples per correlator, each with its own sub-seed of `seed`.
    MonteCarlo { n: usize, seed: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::MonteCarlo { .. } => "montecarlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellResult {
    pub settings: MeasurementSettings,
    pub model: ModelKind,
    pub method: Method,
    /// `[M_AB, M_A′B, M_AB′, M_A′B′]`.
    pub correlations: [f64; 4],
    pub s_value: f64,
    pub std_error: f64,
    pub bound: f64,
}

impl BellResult {
    pub fn n_samples(&self) -> usize {
        match self.method {
            Method::Analytic => 0,
            Method::MonteCarlo { n, .. } => n,
        }
    }

    pub fn seed(&self) -> u64 {
        match self.method {
            Method::Analytic => 0,
            Method::MonteCarlo { seed, .. } => seed,
        }
    }

    /// `S` from the stored correlations.
    pub fn recompute(&self) -> f64 {
        chsh(self.correlations)
    }

    /// Within the bound plus slack, and three standard errors for sampled
    /// results.
    pub fn passes(&self) -> bool {
        self.s_value <= self.bound + BOUND_SLACK + 3.0 * self.std_error
    }
}

pub fn bell_observable<E: Executor>(settings: &MeasurementSettings, model: &CorrelationModel, method: Method, exec: &E) -> Result<BellResult> {
    settings.validate()?;
    let thetas = settings.thetas();
    let mut correlations = [0.0; 4];
    let mut var = 0.0;
    match method {
        Method::Analytic => {
            for (m, t) in correlations.iter_mut().zip(thetas) {
                *m = model.correlation(t)?;
            }
        }
        Method::MonteCarlo { n, seed } => {
            for (i, t) in thetas.into_iter().enumerate() {
                let e = correlation_montecarlo(t, model, n, sub_seed(seed, i as u64), exec)?;
                correlations[i] = e.value;
                var += e.std_error * e.std_error;
            }
        }
    }
    Ok(BellResult {
        settings: *settings,
        model: model.kind,
        method,
        correlations,
        s_value: chsh(correlations),
        std_error: 0.5 * var.sqrt(),
        bound: model.bound()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOptimum {
    pub settings: MeasurementSettings,
    pub s_value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 { (x1, f1) } else { (x2, f2) }
}

/// Grid search over `[0, 2π)⁴` with `resolution` points per angle, then
/// golden-section coordinate descent down to [`ANGLE_TOLERANCE`].
pub fn maximize_bell(model: &CorrelationModel, resolution: usize) -> Result<BellOptimum> {
    if resolution < 32 {
        return Err(Error::Config(format!("resolution must be >= 32 points per angle, got {resolution}")));
    }
    let m = model.evaluator()?;
    let step = TAU / resolution as f64;
    // Every grid difference is itself a grid angle.
    let table: Vec<f64> = (0..resolution).map(|i| m(step * i as f64)).collect();
    let at = |i: usize, j: usize| table[(i + resolution - j) % resolution];
    let mut best = (f64::NEG_INFINITY, [0usize; 4]);
    for a in 0..resolution {
        for ap in 0..resolution {
            for b in 0..resolution {
                let (mab, mapb) = (at(a, b), at(ap, b));
                for bp in 0..resolution {
                    let s = 0.5 * (mab + mapb + at(a, bp) - at(ap, bp)).abs();
                    if s > best.0 {
                        best = (s, [a, ap, b, bp]);
                    }
                }
            }
        }
    }
    let mut x = best.1.map(|i| step * i as f64);
    let s_of = |v: &[f64; 4]| chsh(MeasurementSettings::from_array(*v).thetas().map(&m));
    let mut s = s_of(&x);
    let mut width = step;
    for _ in 0..200 {
        let before = x;
        for k in 0..4 {
            let probe = |t: f64| {
                let mut y = x;
                y[k] = t;
                s_of(&y)
            };
            let (t, v) = golden_max(probe, x[k] - width, x[k] + width, ANGLE_TOLERANCE);
            if v > s {
                x[k] = t;
                s = v;
            }
        }
        let moved = x.iter().zip(before).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if moved < ANGLE_TOLERANCE {
            break;
        }
        width = (2.0 * moved).max(ANGLE_TOLERANCE);
    }
    Ok(BellOptimum { settings: MeasurementSettings::from_array(x), s_value: s })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub model: ModelKind,
    pub n_settings: usize,
    pub seed: u64,
    pub max_observed: f64,
    pub argmax: MeasurementSettings,
    pub bound: f64,
    pub pass: bool,
}

/// Largest analytic `S` over `n_settings` uniform random settings, judged
/// against the model's bound plus [`BOUND_SLACK`].
pub fn bound_check(model: &CorrelationModel, n_settings: usize, seed: u64) -> Result<BoundReport> {
    if n_settings < MIN_BOUND_SETTINGS {
        return Err(Error::SampleSize { got: n_settings, min: MIN_BOUND_SETTINGS });
    }
    let m = model.evaluator()?;
    let mut rng = stream_rng(seed, 0);
    let mut max_observed = f64::NEG_INFINITY;
    let mut argmax = MeasurementSettings::default();
    for _ in 0..n_settings {
        let s = MeasurementSettings::from_array(core::array::from_fn(|_| TAU * rng.random::<f64>()));
        let v = chsh(s.thetas().map(&m));
        if v > max_observed {
            max_observed = v;
            argmax = s;
        }
    }
    let bound = model.bound()?;
    Ok(BoundReport {
        model: model.kind,
        n_settings,
        seed,
        max_observed,
        argmax,
        bound,
        pass: max_observed <= bound + BOUND_SLACK,
    })
}

/// Source of hidden phases, one per realization.
pub trait PhaseProvider {
    fn phases(&self, n: usize, seed: u64) -> Result<Vec<f64>>;
    fn describe(&self) -> String;
}

/// Phases drawn uniformly from `[0, 2π)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformPhases;

impl PhaseProvider for UniformPhases {
    fn phases(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = stream_rng(seed, 0);
        Ok((0..n).map(|_| TAU * rng.random::<f64>()).collect())
    }

    fn describe(&self) -> String {
        "uniform".into()
    }
}

/// The same phase every time.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPhase(pub f64);

impl PhaseProvider for ConstantPhase {
    fn phases(&self, n: usize, _seed: u64) -> Result<Vec<f64>> {
        Ok(vec![self.0; n])
    }

    fn describe(&self) -> String {
        format!("constant {}", self.0)
    }
}

/// End-of-window phases of the deviation oscillator, one fresh background
/// per realization. The `seed` and `n` passed to
/// [`PhaseProvider::phases`] replace those in `params`.
#[derive(Debug)]
pub struct BackgroundPhases<'a, E> {
    pub params: PhaseStatsParams,
    pub exec: &'a E,
}

impl<E: Executor> PhaseProvider for BackgroundPhases<'_, E> {
    fn phases(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        end_phases(&PhaseStatsParams { n_realizations: n, seed, ..self.params }, self.exec)
    }

    fn describe(&self) -> String {
        format!("background n_modes={} window={} s", self.params.n_modes, self.params.window)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeResult {
    pub estimate: Estimate,
    /// Kuiper `V` of the supplied phases against the uniform law.
    pub uniformity: f64,
    pub n: usize,
}

/// Cosine-projection correlator at `theta` with the phases taken from
/// `provider` instead of a uniform draw.
pub fn phase_source_bridge<P: PhaseProvider + ?Sized>(
    provider: &P,
    dist: &PhaseDistribution,
    theta: f64,
    n: usize,
    seed: u64,
) -> Result<BridgeResult> {
    if n < MIN_SAMPLES {
        return Err(Error::SampleSize { got: n, min: MIN_SAMPLES });
    }
    dist.validate()?;
    let phases = provider.phases(n, seed)?;
    if phases.len() < n {
        return Err(Error::SampleSize { got: phases.len(), min: n });
    }
    let phases: Vec<f64> = phases[..n].iter().map(|&p| wrap_angle(p)).collect();
    if phases.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("provider returned a non-finite phase".into()));
    }
    let model = CorrelationModel { kind: ModelKind::CosineProjection, distribution: dist.clone() };
    let values: Vec<f64> = phases.iter().map(|&p| model.sample(p, theta)).collect();
    let m = Moments::from_slice(&values);
    Ok(BridgeResult {
        estimate: Estimate { value: m.mean, std_error: m.std_error() },
        uniformity: kuiper_v(&phases),
        n,
    })
}
