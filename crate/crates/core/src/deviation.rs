//! Relative motion of a pair of test particles under the background's tidal
//! field, reduced to the single excited separation component:
//!
//! ```text
//! d²ℓ/dτ² + c²·R(τ)·ℓ = F
//! ```
//!
//! with `R = R¹₀₁₀`. For constant `R > 0` the pair oscillates at
//! `ω = c√R`; the accumulated phase `Φ(t)` of that oscillation is the hidden
//! variable used by the interference and Bell modules.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand_distr::{Distribution, StandardNormal};

use crate::background::{sample_background, BackgroundEnsemble, FourVector, SpectrumParams, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::exec::{Executor, Moments};
use crate::rng::{stream_rng, sub_seed};
use crate::stats::{kuiper_v, variance_std_error};

/// `dt·ω_max` must stay below this for the fixed-step integrator.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Separation `ℓ` (m), its rate (m/s) and proper time `τ` (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationState {
    pub ell: f64,
    pub ell_rate: f64,
    pub tau: f64,
}

impl DeviationState {
    pub fn new(ell: f64, ell_rate: f64, tau: f64) -> Self {
        DeviationState { ell, ell_rate, tau }
    }

    pub fn is_finite(&self) -> bool {
        self.ell.is_finite() && self.ell_rate.is_finite() && self.tau.is_finite()
    }
}

/// A time-dependent tidal component `R¹₀₁₀(t)` in 1/m².
pub trait TidalSignal {
    fn riemann(&self, t: f64) -> f64;
    fn describe(&self) -> String;
}

/// Time-independent `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTidal(pub f64);

impl TidalSignal for ConstantTidal {
    fn riemann(&self, _t: f64) -> f64 {
        self.0
    }

    fn describe(&self) -> String {
        format!("constant R = {:e} 1/m^2", self.0)
    }
}

/// `R(t)` of a background ensemble at a fixed spatial point.
#[derive(Debug, Clone, Copy)]
pub struct BackgroundTidal<'a> {
    pub ensemble: &'a BackgroundEnsemble,
    pub position: [f64; 3],
}

impl TidalSignal for BackgroundTidal<'_> {
    fn riemann(&self, t: f64) -> f64 {
        riemann_from_background(self.ensemble, t, self.position)
    }

    fn describe(&self) -> String {
        format!(
            "background seed {} ({} modes) at ({:e}, {:e}, {:e}) m",
            self.ensemble.seed(),
            self.ensemble.len(),
            self.position[0],
            self.position[1],
            self.position[2]
        )
    }
}

/// Any pure closure as a tidal signal.
pub struct FnTidal<F> {
    pub sampler: F,
    pub description: String,
}

impl<F: Fn(f64) -> f64> TidalSignal for FnTidal<F> {
    fn riemann(&self, t: f64) -> f64 {
        (self.sampler)(t)
    }

    fn describe(&self) -> String {
        self.description.clone()
    }
}

/// Per-realization constant acceleration `F` (m/s²), drawn from
/// `N(0, sigma²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochasticForcing {
    pub value: f64,
    pub rng_seed: u64,
    pub sigma: f64,
}

impl StochasticForcing {
    pub fn none() -> Self {
        StochasticForcing { value: 0.0, rng_seed: 0, sigma: 0.0 }
    }

    /// A fixed value, bypassing the draw.
    pub fn constant(value: f64) -> Self {
        StochasticForcing { value, rng_seed: 0, sigma: 0.0 }
    }

    pub fn draw(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::Config(format!("forcing sigma must be finite and >= 0, got {sigma}")));
        }
        let value = if sigma == 0.0 {
            0.0
        } else {
            let z: f64 = StandardNormal.sample(&mut stream_rng(seed, 0));
            sigma * z
        };
        Ok(StochasticForcing { value, rng_seed: seed, sigma })
    }
}

/// `R¹₀₁₀ = −(1/2c²)·∂²h₁₁/∂t²`, differentiated in closed form: each mode
/// contributes `k₀²·e₁₁·cos(k_γ x^γ + φ₀)`.
pub fn riemann_from_background(ensemble: &BackgroundEnsemble, t: f64, x: [f64; 3]) -> f64 {
    let event = FourVector::event(t, x);
    ensemble
        .modes()
        .iter()
        .map(|m| {
            let k0 = m.wave_vector().0[0];
            k0 * k0 * m.polarization()[1][1] * m.phase_at(&event).cos()
        })
        .sum()
}

fn check_stability(r: f64, dt: f64) -> Result<()> {
    let product = dt * (SPEED_OF_LIGHT * SPEED_OF_LIGHT * r.abs()).sqrt();
    if !(product < STABILITY_LIMIT) {
        return Err(Error::StepSize { dt, product });
    }
    Ok(())
}

/// Classic fixed-step fourth-order Runge–Kutta for
/// `ℓ̈ = −c²R(τ)ℓ + F`. Returns `steps + 1` states starting with `initial`.
/// Fails with [`Error::StepSize`] as soon as any sampled `R` breaks the
/// stability guard.
pub fn integrate_deviation<T: TidalSignal + ?Sized>(
    tidal: &T,
    forcing: &StochasticForcing,
    initial: DeviationState,
    dt: f64,
    steps: usize,
) -> Result<Vec<DeviationState>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("dt must be finite and > 0, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::Config("steps must be >= 1".into()));
    }
    if !initial.is_finite() {
        return Err(Error::Domain("initial state must be finite".into()));
    }
    let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    let f = forcing.value;
    let accel = |r: f64, ell: f64| -c2 * r * ell + f;

    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial);
    let (mut ell, mut rate) = (initial.ell, initial.ell_rate);
    let mut r_start = tidal.riemann(initial.tau);
    check_stability(r_start, dt)?;
    for i in 0..steps {
        let t = initial.tau + i as f64 * dt;
        let r_mid = tidal.riemann(t + 0.5 * dt);
        let r_end = tidal.riemann(t + dt);
        check_stability(r_mid, dt)?;
        check_stability(r_end, dt)?;

        let k1x = rate;
        let k1v = accel(r_start, ell);
        let k2x = rate + 0.5 * dt * k1v;
        let k2v = accel(r_mid, ell + 0.5 * dt * k1x);
        let k3x = rate + 0.5 * dt * k2v;
        let k3v = accel(r_mid, ell + 0.5 * dt * k2x);
        let k4x = rate + dt * k3v;
        let k4v = accel(r_end, ell + dt * k3x);

        ell += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        rate += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push(DeviationState::new(ell, rate, initial.tau + (i + 1) as f64 * dt));
        r_start = r_end;
    }
    Ok(out)
}

/// `ℓ₀·cos(c√R₀·t)`, the real part of the oscillating solution at the
/// origin.
pub fn analytic_oscillator(r0: f64, ell0: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("oscillator needs R0 > 0, got {r0}")));
    }
    Ok(ell0 * (SPEED_OF_LIGHT * r0.sqrt() * t).cos())
}

/// `ℓ̇² + c²Rℓ²`, conserved for constant `R` and `F = 0`.
pub fn oscillator_energy(r0: f64, state: &DeviationState) -> f64 {
    state.ell_rate * state.ell_rate + SPEED_OF_LIGHT * SPEED_OF_LIGHT * r0 * state.ell * state.ell
}

/// How `Φ` is built from the instantaneous frequency `ω(t) = c√max(R, 0)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PhaseMode {
    /// `Φ(tᵢ) = ω(tᵢ)·(tᵢ − t₀)`.
    Literal,
    /// `Φ(tᵢ) = ∫_{t₀}^{tᵢ} ω(s) ds`, trapezoid rule on the grid.
    #[default]
    Integral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace {
    pub times: Vec<f64>,
    pub phi: Vec<f64>,
    pub mode: PhaseMode,
    /// Fraction of grid points where `R < 0` was clipped to zero.
    pub clipped_fraction: f64,
}

impl PhaseTrace {
    pub fn final_phase(&self) -> f64 {
        *self.phi.last().unwrap_or(&0.0)
    }
}

/// Accumulated oscillation phase over `t_grid`. Negative `R` (tidal
/// stretching) contributes zero frequency and is counted in
/// `clipped_fraction`.
pub fn accumulate_phase<T: TidalSignal + ?Sized>(tidal: &T, t_grid: &[f64], mode: PhaseMode) -> Result<PhaseTrace> {
    if t_grid.is_empty() {
        return Err(Error::Grid("time grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Grid("time grid contains non-finite values".into()));
    }
    if let Some(i) = t_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::Grid(format!("time grid not strictly increasing at index {}", i + 1)));
    }
    let mut clipped = 0usize;
    let omega: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let r = tidal.riemann(t);
            if r < 0.0 {
                clipped += 1;
            }
            SPEED_OF_LIGHT * r.max(0.0).sqrt()
        })
        .collect();
    let t0 = t_grid[0];
    let phi = match mode {
        PhaseMode::Literal => {
            let mut phi: Vec<f64> = omega.iter().zip(t_grid).map(|(w, t)| w * (t - t0)).collect();
            phi[0] = 0.0;
            phi
        }
        PhaseMode::Integral => {
            let mut phi = Vec::with_capacity(t_grid.len());
            let mut acc = 0.0;
            phi.push(0.0);
            for i in 1..t_grid.len() {
                acc += 0.5 * (omega[i - 1] + omega[i]) * (t_grid[i] - t_grid[i - 1]);
                phi.push(acc);
            }
            phi
        }
    };
    Ok(PhaseTrace {
        times: t_grid.to_vec(),
        phi,
        mode,
        clipped_fraction: clipped as f64 / t_grid.len() as f64,
    })
}

/// `n + 1` evenly spaced points on `[t0, t1]`, end point exact.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| if i == n { t1 } else { t0 + (t1 - t0) * (i as f64 / n as f64) })
        .collect()
}

/// Background realizations and the window over which each one's phase is
/// accumulated.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStatsParams {
    pub n_modes: usize,
    pub spectrum: SpectrumParams,
    /// Accumulation window in seconds.
    pub window: f64,
    /// Trapezoid intervals over the window.
    pub grid_steps: usize,
    pub position: [f64; 3],
    pub n_realizations: usize,
    pub seed: u64,
    /// Reuse the first sub-seed for every realization.
    pub fixed_sub_seed: bool,
}

impl PhaseStatsParams {
    pub fn validate(&self) -> Result<()> {
        self.spectrum.validate()?;
        if self.n_modes == 0 {
            return Err(Error::Config("n_modes must be >= 1".into()));
        }
        if !(self.window > 0.0) || !self.window.is_finite() {
            return Err(Error::Config(format!("window must be > 0 s, got {}", self.window)));
        }
        if self.grid_steps == 0 {
            return Err(Error::Config("grid_steps must be >= 1".into()));
        }
        Ok(())
    }

    fn realization_seed(&self, r: usize) -> u64 {
        sub_seed(self.seed, if self.fixed_sub_seed { 0 } else { r as u64 })
    }
}

/// End-of-window phases of realization `r`, one per spatial point, all
/// sharing that realization's background.
pub fn realization_phases(params: &PhaseStatsParams, r: usize, positions: &[[f64; 3]]) -> Result<Vec<f64>> {
    let ensemble = sample_background(params.n_modes, params.realization_seed(r), params.spectrum)?;
    let grid = uniform_grid(0.0, params.window, params.grid_steps);
    positions
        .iter()
        .map(|&position| {
            let tidal = BackgroundTidal { ensemble: &ensemble, position };
            accumulate_phase(&tidal, &grid, PhaseMode::Integral).map(|tr| tr.final_phase())
        })
        .collect()
}

/// End-of-window phases of all realizations, in realization order.
pub fn end_phases<E: Executor>(params: &PhaseStatsParams, exec: &E) -> Result<Vec<f64>> {
    params.validate()?;
    exec.map_indexed(params.n_realizations, |r| realization_phases(params, r, &[params.position]).map(|v| v[0]))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStatistics {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub variance_std_error: f64,
    /// Kuiper `V` of the phases mod 2π against the uniform circle law.
    pub kuiper_v: f64,
    pub n_realizations: usize,
}

/// Mean and variance of the end-of-window phase across independent
/// background realizations.
pub fn phase_statistics<E: Executor>(params: &PhaseStatsParams, exec: &E) -> Result<PhaseStatistics> {
    if params.n_realizations < 2 {
        return Err(Error::SampleSize { got: params.n_realizations, min: 2 });
    }
    let phases = end_phases(params, exec)?;
    let moments = Moments::from_slice(&phases);
    Ok(PhaseStatistics {
        mean: moments.mean,
        variance: moments.variance(),
        variance_std_error: variance_std_error(&phases),
        kuiper_v: kuiper_v(&phases),
        n_realizations: phases.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::{metric_perturbation_at, PlaneWaveMode, DEFAULT_H_MAX, ZERO_TENSOR};
    use crate::exec::Sequential;
    use core::f64::consts::PI;

    const C: f64 = SPEED_OF_LIGHT;

    fn r_for_omega(omega: f64) -> f64 {
        (omega / C).powi(2)
    }

    #[test]
    fn free_pair_stays_put() {
        let traj = integrate_deviation(&ConstantTidal(0.0), &StochasticForcing::none(), DeviationState::new(1.0, 0.0, 0.0), 0.1, 100).unwrap();
        assert_eq!(traj.len(), 101);
        assert!(traj.iter().all(|s| s.ell == 1.0 && s.ell_rate == 0.0));
        assert!((traj[100].tau - 10.0).abs() < 1e-12);
    }

    #[test]
    fn constant_forcing_is_uniform_acceleration() {
        let f0 = 0.3;
        let traj = integrate_deviation(&ConstantTidal(0.0), &StochasticForcing::constant(f0), DeviationState::new(2.0, 0.0, 0.0), 0.05, 400).unwrap();
        for s in &traj {
            let exact = 2.0 + 0.5 * f0 * s.tau * s.tau;
            assert!((s.ell - exact).abs() < 1e-12 * exact, "tau {}", s.tau);
        }
    }

    #[test]
    fn constant_curvature_oscillates_at_c_sqrt_r() {
        let omega = 3.0;
        let r0 = r_for_omega(omega);
        let period = 2.0 * PI / omega;
        let steps = 2000;
        let traj = integrate_deviation(&ConstantTidal(r0), &StochasticForcing::none(), DeviationState::new(0.7, 0.0, 0.0), period / 200.0, steps).unwrap();
        let worst = traj
            .iter()
            .map(|s| (s.ell - analytic_oscillator(r0, 0.7, s.tau).unwrap()).abs() / 0.7)
            .fold(0.0, f64::max);
        // Phase error of RK4 at ω·dt = 2π/200 accumulates to ~5e-7 over 10 periods.
        assert!(worst < 1e-6, "max relative error {worst:e}");
    }

    #[test]
    fn stability_guard() {
        let r0 = r_for_omega(10.0);
        let err = integrate_deviation(&ConstantTidal(r0), &StochasticForcing::none(), DeviationState::new(1.0, 0.0, 0.0), 0.02, 10);
        assert!(matches!(err, Err(Error::StepSize { .. })));
        assert!(integrate_deviation(&ConstantTidal(r0), &StochasticForcing::none(), DeviationState::new(1.0, 0.0, 0.0), 0.009, 10).is_ok());
    }

    #[test]
    fn oscillator_closed_form() {
        let r0 = r_for_omega(1.0);
        assert_eq!(analytic_oscillator(r0, 1.5, 0.0).unwrap(), 1.5);
        assert!((analytic_oscillator(r0, 1.5, PI).unwrap() + 1.5).abs() < 1e-12);
        let v = analytic_oscillator(1.0 / (C * C), 2.0, PI / 3.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(matches!(analytic_oscillator(0.0, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(analytic_oscillator(-1.0, 1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn constant_frequency_phase_modes_agree() {
        let w0 = 4.0;
        let grid = uniform_grid(0.0, 3.0, 30);
        let tidal = ConstantTidal(r_for_omega(w0));
        for mode in [PhaseMode::Literal, PhaseMode::Integral] {
            let tr = accumulate_phase(&tidal, &grid, mode).unwrap();
            assert_eq!(tr.phi[0], 0.0);
            for (t, p) in tr.times.iter().zip(&tr.phi) {
                assert!((p - w0 * t).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ramped_frequency_phase_modes() {
        let (w0, big_t) = (2.0, 5.0);
        // ω(t) = ω₀(1 + t/T) ⇒ R = (ω/c)².
        let tidal = FnTidal { sampler: |t: f64| r_for_omega(w0 * (1.0 + t / big_t)), description: "ramp".into() };
        let grid = uniform_grid(0.0, 4.0, 4000);
        let integral = accumulate_phase(&tidal, &grid, PhaseMode::Integral).unwrap();
        let literal = accumulate_phase(&tidal, &grid, PhaseMode::Literal).unwrap();
        for i in (0..grid.len()).step_by(500) {
            let t = grid[i];
            // Trapezoid is exact for a linear integrand.
            assert!((integral.phi[i] - w0 * (t + t * t / (2.0 * big_t))).abs() < 1e-9);
            assert!((literal.phi[i] - w0 * (t + t * t / big_t)).abs() < 1e-9);
        }
    }

    #[test]
    fn single_point_grid() {
        let tr = accumulate_phase(&ConstantTidal(1e-16), &[0.0], PhaseMode::Integral).unwrap();
        assert_eq!(tr.phi, alloc::vec![0.0]);
    }

    #[test]
    fn bad_grids() {
        let t = ConstantTidal(0.0);
        assert!(matches!(accumulate_phase(&t, &[0.0, 1.0, 1.0], PhaseMode::Integral), Err(Error::Grid(_))));
        assert!(matches!(accumulate_phase(&t, &[0.0, 2.0, 1.0], PhaseMode::Literal), Err(Error::Grid(_))));
        assert!(matches!(accumulate_phase(&t, &[], PhaseMode::Literal), Err(Error::Grid(_))));
    }

    #[test]
    fn negative_curvature_is_clipped() {
        let tidal = FnTidal { sampler: |t: f64| if t < 0.5 { -1e-16 } else { 1e-16 }, description: "step".into() };
        let tr = accumulate_phase(&tidal, &uniform_grid(0.0, 1.0, 10), PhaseMode::Integral).unwrap();
        assert!((tr.clipped_fraction - 5.0 / 11.0).abs() < 1e-15);
        assert_eq!(tr.phi[3], 0.0);
    }

    fn x_plus_mode(a: f64, k0: f64, phase0: f64) -> PlaneWaveMode {
        // Travels along z; e₁₁ = a.
        let mut e = ZERO_TENSOR;
        e[1][1] = a;
        e[2][2] = -a;
        PlaneWaveMode::new(e, FourVector([k0, 0.0, 0.0, -k0]), phase0, 0, DEFAULT_H_MAX).unwrap()
    }

    fn ensemble(modes: alloc::vec::Vec<PlaneWaveMode>) -> BackgroundEnsemble {
        BackgroundEnsemble::from_modes(modes, 0, SpectrumParams::new(1.0, 2.0, 0.0, 1e-3)).unwrap()
    }

    #[test]
    fn riemann_closed_form_single_mode() {
        let a = 1e-3;
        let omega_g = 2.0 * PI * 50.0;
        let m = x_plus_mode(a, omega_g / C, 0.0);
        let r = riemann_from_background(&ensemble(alloc::vec![m.clone()]), 0.0, [0.0; 3]);
        let expected = a * omega_g * omega_g / (C * C);
        assert!((r - expected).abs() < 1e-12 * expected);

        // 5-point finite-difference second derivative of h₁₁ in t.
        let h11 = |t: f64| metric_perturbation_at(&m, &FourVector::event(t, [0.0; 3]))[1][1];
        let dt = 1e-4 / omega_g;
        let d2 = (-h11(2.0 * dt) + 16.0 * h11(dt) - 30.0 * h11(0.0) + 16.0 * h11(-dt) - h11(-2.0 * dt)) / (12.0 * dt * dt);
        let fd = -d2 / (2.0 * C * C);
        assert!((fd - r).abs() < 1e-6 * r.abs());
    }

    #[test]
    fn riemann_superposes() {
        let m1 = x_plus_mode(1e-3, 1e-6, 0.2);
        let m2 = x_plus_mode(-4e-4, 3e-6, 1.1);
        let t = 0.37;
        let r1 = riemann_from_background(&ensemble(alloc::vec![m1.clone()]), t, [0.0; 3]);
        let r2 = riemann_from_background(&ensemble(alloc::vec![m2.clone()]), t, [0.0; 3]);
        let r12 = riemann_from_background(&ensemble(alloc::vec![m1, m2]), t, [0.0; 3]);
        assert!((r12 - (r1 + r2)).abs() <= 1e-14 * (r1.abs() + r2.abs()));
        assert_eq!(riemann_from_background(&ensemble(alloc::vec![]), t, [0.0; 3]), 0.0);
    }

    fn stats_params(rms: f64) -> PhaseStatsParams {
        PhaseStatsParams {
            n_modes: 3,
            spectrum: SpectrumParams::new(5.0, 20.0, 0.0, rms),
            window: 1.0,
            grid_steps: 200,
            position: [0.0; 3],
            n_realizations: 8,
            seed: 42,
            fixed_sub_seed: false,
        }
    }

    #[test]
    fn zero_amplitude_background_has_no_phase() {
        let s = phase_statistics(&stats_params(0.0), &Sequential).unwrap();
        assert_eq!(s.mean, 0.0);
        assert_eq!(s.variance, 0.0);
    }

    #[test]
    fn forced_sub_seed_has_no_spread() {
        let mut p = stats_params(1e-3);
        p.fixed_sub_seed = true;
        let s = phase_statistics(&p, &Sequential).unwrap();
        assert!(s.mean != 0.0, "{s:?}");
        assert_eq!(s.variance, 0.0);
        p.fixed_sub_seed = false;
        assert!(phase_statistics(&p, &Sequential).unwrap().variance > 0.0);
    }

    #[test]
    fn needs_two_realizations() {
        let mut p = stats_params(1e-3);
        p.n_realizations = 1;
        assert!(matches!(phase_statistics(&p, &Sequential), Err(Error::SampleSize { .. })));
    }

    #[test]
    fn forcing_draw() {
        assert_eq!(StochasticForcing::draw(0.0, 5).unwrap().value, 0.0);
        let a = StochasticForcing::draw(2.0, 5).unwrap();
        assert_eq!(a, StochasticForcing::draw(2.0, 5).unwrap());
        assert!(a.value != 0.0);
        assert!(StochasticForcing::draw(-1.0, 5).is_err());
    }
}
