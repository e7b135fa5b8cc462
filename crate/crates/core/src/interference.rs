//! Two-slit interference with a stochastic relative phase between the paths.
//!
//! Each path's metric perturbation is reduced to a single extra phase. Per
//! realization the screen sees `|A₁(x) + A₂(x)·e^{iΔΦ}|²`; averaging over
//! realizations gives
//!
//! ```text
//! I(x) = |A₁|² + |A₂|² + 2·Re(conj(A₁)·A₂·C),   C = mean(e^{iΔΦ})
//! ```
//!
//! so only the empirical characteristic function `C` of the phase draws has
//! to be accumulated. Symmetric phase laws are drawn in antithetic pairs
//! `(ΔΦ, −ΔΦ)`, which makes `C` exactly real and the profile exactly
//! mirror-symmetric.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use nalgebra::Complex;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::background::SpectrumParams;
use crate::deviation::{realization_phases, PhaseStatsParams};
use crate::error::{Error, Result};
use crate::exec::{blocks, pairwise_reduce, Executor, Moments};
use crate::rng::stream_rng;

/// Smallest allowed `screen_distance / slit_separation`.
pub const MIN_DISTANCE_RATIO: f64 = 10.0;

/// Point slits at `±d/2` on the transverse axis, a point source on the axis
/// at the same distance in front of the slits as the screen is behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    pub slit_separation: f64,
    pub screen_distance: f64,
    pub de_broglie_wavelength: f64,
    pub screen_points: usize,
    pub screen_half_width: f64,
}

impl Default for SlitGeometry {
    /// 1 µm slits, 1 m to the screen, 50 pm wavelength, 2001 points over
    /// ±0.25 mm (ten fringes).
    fn default() -> Self {
        SlitGeometry {
            slit_separation: 1e-6,
            screen_distance: 1.0,
            de_broglie_wavelength: 50e-12,
            screen_points: 2001,
            screen_half_width: 2.5e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slit {
    /// At `+d/2`.
    One,
    /// At `−d/2`.
    Two,
}

impl Slit {
    pub fn from_index(i: u8) -> Result<Slit> {
        match i {
            1 => Ok(Slit::One),
            2 => Ok(Slit::Two),
            _ => Err(Error::Range(format!("slit index must be 1 or 2, got {i}"))),
        }
    }
}

/// `√(L² + u²) − L` without cancellation.
fn leg_excess(u: f64, l: f64) -> f64 {
    u * u / ((l * l + u * u).sqrt() + l)
}

impl SlitGeometry {
    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("slit_separation", self.slit_separation),
            ("screen_distance", self.screen_distance),
            ("de_broglie_wavelength", self.de_broglie_wavelength),
            ("screen_half_width", self.screen_half_width),
        ];
        for (name, v) in lengths {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        let ratio = self.screen_distance / self.slit_separation;
        if ratio < MIN_DISTANCE_RATIO {
            return Err(Error::Config(format!(
                "screen_distance / slit_separation = {ratio} is below {MIN_DISTANCE_RATIO}"
            )));
        }
        if self.screen_points < 2 {
            return Err(Error::Config("screen_points must be >= 2".into()));
        }
        Ok(())
    }

    /// Fringe spacing `λL/d` on the screen.
    pub fn fringe_period(&self) -> f64 {
        self.de_broglie_wavelength * self.screen_distance / self.slit_separation
    }

    pub fn slit_position(&self, slit: Slit) -> f64 {
        match slit {
            Slit::One => 0.5 * self.slit_separation,
            Slit::Two => -0.5 * self.slit_separation,
        }
    }

    /// Evenly spaced screen points with `x[n−1−i] == −x[i]` exactly.
    pub fn positions(&self) -> Vec<f64> {
        let n = self.screen_points;
        let span = (n - 1) as f64;
        (0..n)
            .map(|i| self.screen_half_width * ((2 * i) as f64 - span) / span)
            .collect()
    }

    /// Source → slit → screen-point length minus the on-axis length `2L`.
    pub fn path_excess(&self, slit: Slit, screen_x: f64) -> f64 {
        let y = self.slit_position(slit);
        leg_excess(y, self.screen_distance) + leg_excess(screen_x - y, self.screen_distance)
    }
}

/// `(1/√2)·exp(i·(2π/λ)·Δpath + i·extra_phase)`. The common on-axis path
/// length is dropped; it only contributes a global phase.
pub fn path_amplitude(geometry: &SlitGeometry, slit: Slit, screen_x: f64, extra_phase: f64) -> Result<Complex<f64>> {
    if !(screen_x.abs() <= geometry.screen_half_width * (1.0 + 1e-12)) {
        return Err(Error::Range(format!(
            "screen position {screen_x:e} m outside ±{:e} m",
            geometry.screen_half_width
        )));
    }
    let phase = TAU / geometry.de_broglie_wavelength * geometry.path_excess(slit, screen_x) + extra_phase;
    let (s, c) = phase.sin_cos();
    Ok(Complex::new(FRAC_1_SQRT_2 * c, FRAC_1_SQRT_2 * s))
}

/// Background-driven relative phase: per realization a fresh background is
/// drawn and `ΔΦ = Φ(slit 2) − Φ(slit 1)` is the difference of the phases
/// accumulated at the two slit positions over `window` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundPhaseModel {
    pub n_modes: usize,
    pub spectrum: SpectrumParams,
    pub window: f64,
    pub grid_steps: usize,
}

/// Law of the relative phase `ΔΦ` between the two paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPhaseModel {
    Gaussian { sigma: f64 },
    /// Uniform on `[−half_width, half_width]`.
    Uniform { half_width: f64 },
    FromBackground(BackgroundPhaseModel),
}

impl PathPhaseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            PathPhaseModel::Gaussian { sigma } if !(*sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::Config(format!("sigma must be finite and >= 0, got {sigma}")))
            }
            PathPhaseModel::Uniform { half_width } if !(*half_width >= 0.0 && half_width.is_finite()) => {
                Err(Error::Config(format!("uniform half width must be finite and >= 0, got {half_width}")))
            }
            PathPhaseModel::FromBackground(bg) => {
                stats_params(bg, 0, 1).validate()
            }
            _ => Ok(()),
        }
    }

    /// Standard deviation of `ΔΦ` where the law fixes it.
    pub fn sigma_rel(&self) -> Option<f64> {
        match self {
            PathPhaseModel::Gaussian { sigma } => Some(*sigma),
            PathPhaseModel::Uniform { half_width } => Some(half_width / 3.0.sqrt()),
            PathPhaseModel::FromBackground(_) => None,
        }
    }

    fn is_symmetric(&self) -> bool {
        !matches!(self, PathPhaseModel::FromBackground(_))
    }
}

fn stats_params(bg: &BackgroundPhaseModel, seed: u64, n: usize) -> PhaseStatsParams {
    PhaseStatsParams {
        n_modes: bg.n_modes,
        spectrum: bg.spectrum,
        window: bg.window,
        grid_steps: bg.grid_steps,
        position: [0.0; 3],
        n_realizations: n,
        seed,
        fixed_sub_seed: false,
    }
}

/// Averaged screen intensity and the phase statistics behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    pub positions: Vec<f64>,
    pub intensity: Vec<f64>,
    pub n_realizations: usize,
    pub seed: u64,
    pub fringe_period: f64,
    /// `mean(e^{iΔΦ})` over the realizations; `1` for a single slit.
    pub coherence: Complex<f64>,
    /// Monte Carlo standard error of `Re(coherence)`.
    pub coherence_std_error: f64,
}

impl IntensityProfile {
    /// Trapezoid integral of the intensity across the screen.
    pub fn integrated(&self) -> f64 {
        self.positions
            .windows(2)
            .zip(self.intensity.windows(2))
            .map(|(x, i)| 0.5 * (i[0] + i[1]) * (x[1] - x[0]))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct CoherenceSums {
    re: f64,
    im: f64,
    weight: f64,
    /// Per independent draw (a pair counts once).
    draws: Moments,
}

impl CoherenceSums {
    fn merge(self, o: CoherenceSums) -> CoherenceSums {
        CoherenceSums {
            re: self.re + o.re,
            im: self.im + o.im,
            weight: self.weight + o.weight,
            draws: self.draws.merge(o.draws),
        }
    }
}

fn symmetric_block(model: &PathPhaseModel, seed: u64, block: usize, start: usize, len: usize, n: usize) -> CoherenceSums {
    let mut rng = stream_rng(seed, block as u64);
    let mut acc = CoherenceSums::default();
    for d in start..start + len {
        let delta = match *model {
            PathPhaseModel::Gaussian { sigma } => {
                let z: f64 = StandardNormal.sample(&mut rng);
                sigma * z
            }
            PathPhaseModel::Uniform { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
            PathPhaseModel::FromBackground(_) => unreachable!("background phases are not symmetric draws"),
        };
        let c = delta.cos();
        // Draw d covers realizations 2d and 2d+1; an odd final one is
        // averaged over ±ΔΦ on its own.
        let w = if 2 * d + 1 < n { 2.0 } else { 1.0 };
        acc.re += w * c;
        acc.weight += w;
        acc.draws.push(c);
    }
    acc
}

fn coherence<E: Executor>(model: &PathPhaseModel, geometry: &SlitGeometry, n: usize, seed: u64, exec: &E) -> Result<CoherenceSums> {
    let parts: Vec<CoherenceSums> = if model.is_symmetric() {
        let n_draws = n.div_ceil(2);
        let spans: Vec<(usize, usize)> = blocks(n_draws).collect();
        exec.map_indexed(spans.len(), |b| symmetric_block(model, seed, b, spans[b].0, spans[b].1, n))
    } else {
        let PathPhaseModel::FromBackground(bg) = model else { unreachable!() };
        let params = stats_params(bg, seed, n);
        let slits = [
            [geometry.slit_position(Slit::One), 0.0, 0.0],
            [geometry.slit_position(Slit::Two), 0.0, 0.0],
        ];
        let per: Vec<Result<f64>> = exec.map_indexed(n, |r| {
            realization_phases(&params, r, &slits).map(|p| p[1] - p[0])
        });
        per.into_iter()
            .map(|delta| {
                let (s, c) = delta?.sin_cos();
                let mut draws = Moments::default();
                draws.push(c);
                Ok(CoherenceSums { re: c, im: s, weight: 1.0, draws })
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(pairwise_reduce(parts, CoherenceSums::merge).unwrap_or_default())
}

/// Ensemble-averaged two-slit pattern for `n_realizations` draws of the
/// relative phase. Deterministic in `seed` and independent of the executor.
pub fn two_slit_intensity<E: Executor>(
    geometry: &SlitGeometry,
    phase_model: &PathPhaseModel,
    n_realizations: usize,
    seed: u64,
    exec: &E,
) -> Result<IntensityProfile> {
    geometry.validate()?;
    phase_model.validate()?;
    if n_realizations == 0 {
        return Err(Error::SampleSize { got: 0, min: 1 });
    }
    let sums = coherence(phase_model, geometry, n_realizations, seed, exec)?;
    let c = Complex::new(sums.re / sums.weight, sums.im / sums.weight);
    let positions = geometry.positions();
    let intensity = positions
        .iter()
        .map(|&x| {
            let a1 = path_amplitude(geometry, Slit::One, x, 0.0)?;
            let a2 = path_amplitude(geometry, Slit::Two, x, 0.0)?;
            let cross = a1.conj() * a2 * c;
            Ok((a1.norm_sqr() + a2.norm_sqr() + 2.0 * cross.re).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    // Antithetic pairs are perfectly anti-correlated in sin; the spread of
    // the per-pair cos values is what remains.
    let se = sums.draws.std_error();
    Ok(IntensityProfile {
        positions,
        intensity,
        n_realizations,
        seed,
        fringe_period: geometry.fringe_period(),
        coherence: c,
        coherence_std_error: se,
    })
}

/// Only one slit open: `I(x) = |A_slit(x)|²`, no fringes.
pub fn single_slit_control(geometry: &SlitGeometry, slit: Slit) -> Result<IntensityProfile> {
    geometry.validate()?;
    let positions = geometry.positions();
    let intensity = positions
        .iter()
        .map(|&x| path_amplitude(geometry, slit, x, 0.0).map(|a| a.norm_sqr()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(IntensityProfile {
        positions,
        intensity,
        n_realizations: 1,
        seed: 0,
        fringe_period: geometry.fringe_period(),
        coherence: Complex::new(1.0, 0.0),
        coherence_std_error: 0.0,
    })
}

/// `(I_max − I_min)/(I_max + I_min)` over the central two fringe periods.
pub fn visibility(profile: &IntensityProfile) -> Result<f64> {
    let p = profile.fringe_period;
    let (lo, hi) = profile
        .positions
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(p > 0.0) || !(lo <= -p * (1.0 - 1e-9) && hi >= p * (1.0 - 1e-9)) {
        return Err(Error::Range(format!(
            "profile spans [{lo:e}, {hi:e}] m, need at least two fringe periods of {p:e} m"
        )));
    }
    let mut i_max = f64::NEG_INFINITY;
    let mut i_min = f64::INFINITY;
    for (&x, &i) in profile.positions.iter().zip(&profile.intensity) {
        if x.abs() <= p * (1.0 + 1e-9) {
            i_max = i_max.max(i);
            i_min = i_min.min(i);
        }
    }
    if !(i_max + i_min > 0.0) {
        return Ok(0.0);
    }
    Ok(((i_max - i_min) / (i_max + i_min)).clamp(0.0, 1.0))
}

/// Family of symmetric phase laws parameterized by their standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaLaw {
    #[default]
    Gaussian,
    Uniform,
}

impl SigmaLaw {
    pub fn model(&self, sigma: f64) -> PathPhaseModel {
        match self {
            SigmaLaw::Gaussian => PathPhaseModel::Gaussian { sigma },
            SigmaLaw::Uniform => PathPhaseModel::Uniform { half_width: sigma * 3.0.sqrt() },
        }
    }

    /// `|E[e^{iΔΦ}]|` for standard deviation `sigma`.
    pub fn expected_coherence(&self, sigma: f64) -> f64 {
        match self {
            SigmaLaw::Gaussian => (-0.5 * sigma * sigma).exp(),
            SigmaLaw::Uniform => {
                let a = sigma * 3.0.sqrt();
                if a == 0.0 { 1.0 } else { (a.sin() / a).abs() }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityPoint {
    pub sigma: f64,
    pub visibility: f64,
    pub std_error: f64,
}

/// Visibility for each requested phase spread, in input order. Every sigma
/// reuses `seed`, so the curve is built from common random numbers.
pub fn visibility_curve<E: Executor>(
    geometry: &SlitGeometry,
    law: SigmaLaw,
    sigmas: &[f64],
    n_realizations: usize,
    seed: u64,
    exec: &E,
) -> Result<Vec<VisibilityPoint>> {
    if let Some(bad) = sigmas.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::Config(format!("sigmas must be >= 0, got {bad}")));
    }
    sigmas
        .iter()
        .map(|&sigma| {
            let profile = two_slit_intensity(geometry, &law.model(sigma), n_realizations, seed, exec)?;
            Ok(VisibilityPoint { sigma, visibility: visibility(&profile)?, std_error: profile.coherence_std_error })
        })
        .collect()
}

/// Uniform half width that fully dephases the two paths.
pub const FULL_DEPHASING: f64 = PI;
