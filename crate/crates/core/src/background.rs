//! Random gravitational-wave background in the linearized (weak-field)
//! regime.
//!
//! Coordinates are SI: `x⁰ = c·t` in metres, spatial `xⁱ` in metres, and wave
//! vectors are stored covariantly (`k_γ`, 1/m) so the phase is the plain
//! contraction `k_γ x^γ`. The flat metric has signature `(+,−,−,−)`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, SimRng};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Newtonian constant of gravitation, m³/(kg·s²).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Default cap on polarization entries keeping the linearization valid.
pub const DEFAULT_H_MAX: f64 = 1e-2;
/// Relative tolerance for the transverse-traceless and null-vector checks.
pub const MODE_TOLERANCE: f64 = 1e-12;

/// 4×4 real matrix indexed `[μ][ν]`.
pub type Tensor4 = [[f64; 4]; 4];

pub const ZERO_TENSOR: Tensor4 = [[0.0; 4]; 4];

/// Four real components, index 0 the time component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        FourVector([x0, x1, x2, x3])
    }

    /// Event at time `t` (seconds) and spatial position `pos` (metres).
    pub fn event(t: f64, pos: [f64; 3]) -> Self {
        FourVector([SPEED_OF_LIGHT * t, pos[0], pos[1], pos[2]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Plain Euclidean length of the component array.
    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `Σ_γ self_γ other^γ`, no metric involved.
    pub fn contract(&self, other: &FourVector) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }
}

/// The flat metric `η = diag(+1, −1, −1, −1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinkowskiMetric;

impl MinkowskiMetric {
    pub const SIGNATURE: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

    pub fn tensor(&self) -> Tensor4 {
        let mut m = ZERO_TENSOR;
        for (mu, s) in Self::SIGNATURE.iter().enumerate() {
            m[mu][mu] = *s;
        }
        m
    }

    /// `η^μν a_μ b_ν` for two covariant vectors.
    pub fn dot(&self, a: &FourVector, b: &FourVector) -> f64 {
        (0..4).map(|mu| Self::SIGNATURE[mu] * a.0[mu] * b.0[mu]).sum()
    }
}

fn max_abs(t: &Tensor4) -> f64 {
    t.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn scale_tensor(t: &Tensor4, s: f64) -> Tensor4 {
    let mut out = *t;
    out.iter_mut().flatten().for_each(|x| *x *= s);
    out
}

/// One linearized plane wave `h_μν = 2 e_μν cos(k_γ x^γ + φ₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveMode {
    polarization: Tensor4,
    wave_vector: FourVector,
    phase0: f64,
    mode_id: u64,
}

impl PlaneWaveMode {
    /// Builds a mode after checking symmetry, the transverse-traceless
    /// conditions, nullity of `k` and the strain cap `h_max`.
    pub fn new(
        polarization: Tensor4,
        wave_vector: FourVector,
        phase0: f64,
        mode_id: u64,
        h_max: f64,
    ) -> Result<Self> {
        let mode = Self::from_parts_unchecked(polarization, wave_vector, phase0, mode_id);
        mode.validate(h_max)?;
        Ok(mode)
    }

    /// Builds a mode with no invariant checks. Used to probe the residual
    /// diagnostics with deliberately invalid modes.
    pub fn from_parts_unchecked(
        polarization: Tensor4,
        wave_vector: FourVector,
        phase0: f64,
        mode_id: u64,
    ) -> Self {
        PlaneWaveMode { polarization, wave_vector, phase0, mode_id }
    }

    pub fn validate(&self, h_max: f64) -> Result<()> {
        let e = &self.polarization;
        let k = &self.wave_vector;
        if !k.is_finite() || !self.phase0.is_finite() || e.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("mode {} has non-finite components", self.mode_id)));
        }
        let amp = max_abs(e);
        if amp > h_max {
            return Err(Error::Config(format!(
                "mode {} strain {amp:e} exceeds h_max {h_max:e}",
                self.mode_id
            )));
        }
        let tol = MODE_TOLERANCE * amp;
        for mu in 0..4 {
            for nu in 0..4 {
                if (e[mu][nu] - e[nu][mu]).abs() > tol {
                    return Err(Error::Symmetry { max_asymmetry: (e[mu][nu] - e[nu][mu]).abs() });
                }
            }
            if e[0][mu].abs() > tol {
                return Err(Error::Domain(format!("mode {}: e_0{mu} != 0", self.mode_id)));
            }
        }
        let trace: f64 = (1..4).map(|a| e[a][a]).sum();
        if trace.abs() > tol {
            return Err(Error::Domain(format!("mode {}: spatial trace {trace:e}", self.mode_id)));
        }
        let knorm = k.euclidean_norm();
        for b in 1..4 {
            let t: f64 = (1..4).map(|a| k.0[a] * e[a][b]).sum();
            if t.abs() > tol * knorm {
                return Err(Error::Domain(format!("mode {}: not transverse", self.mode_id)));
            }
        }
        let kk = MinkowskiMetric.dot(k, k);
        if kk.abs() > MODE_TOLERANCE * knorm * knorm {
            return Err(Error::Domain(format!("mode {}: wave vector not null (k.k = {kk:e})", self.mode_id)));
        }
        Ok(())
    }

    pub fn polarization(&self) -> &Tensor4 {
        &self.polarization
    }

    /// Covariant wave vector `k_γ`.
    pub fn wave_vector(&self) -> &FourVector {
        &self.wave_vector
    }

    pub fn phase0(&self) -> f64 {
        self.phase0
    }

    pub fn mode_id(&self) -> u64 {
        self.mode_id
    }

    /// `k_γ x^γ + φ₀`.
    pub fn phase_at(&self, x: &FourVector) -> f64 {
        self.wave_vector.contract(x) + self.phase0
    }

    /// Temporal angular frequency `c·k₀` in rad/s.
    pub fn angular_frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wave_vector.0[0]
    }

    /// Largest absolute polarization entry.
    pub fn strain_amplitude(&self) -> f64 {
        max_abs(&self.polarization)
    }

    /// `|k|·max|e|`, the natural size of the gauge residual.
    pub fn residual_scale(&self) -> f64 {
        self.wave_vector.euclidean_norm() * self.strain_amplitude()
    }
}

/// Sampling parameters of the background. Frequencies in Hz; each mode's
/// amplitude follows `f^exponent` before the ensemble is scaled to `rms`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumParams {
    pub f_min: f64,
    pub f_max: f64,
    pub exponent: f64,
    pub rms: f64,
    pub h_max: f64,
}

impl SpectrumParams {
    pub fn new(f_min: f64, f_max: f64, exponent: f64, rms: f64) -> Self {
        SpectrumParams { f_min, f_max, exponent, rms, h_max: DEFAULT_H_MAX }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.f_min, self.f_max, self.exponent, self.rms, self.h_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Config("spectrum parameters must be finite".into()));
        }
        if !(self.f_min > 0.0) {
            return Err(Error::Config(format!("f_min must be > 0 Hz, got {}", self.f_min)));
        }
        if !(self.f_min < self.f_max) {
            return Err(Error::Config(format!(
                "f_min ({}) must be below f_max ({})",
                self.f_min, self.f_max
            )));
        }
        if self.rms < 0.0 {
            return Err(Error::Config(format!("rms strain must be >= 0, got {}", self.rms)));
        }
        if !(self.h_max > 0.0) || self.rms > self.h_max {
            return Err(Error::Config(format!(
                "rms strain {} must not exceed h_max {}",
                self.rms, self.h_max
            )));
        }
        Ok(())
    }
}

/// Energy–momentum of sources. Only the vacuum value is simulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceTensor(Tensor4);

impl SourceTensor {
    pub fn vacuum() -> Self {
        SourceTensor(ZERO_TENSOR)
    }

    pub fn new(s: Tensor4) -> Result<Self> {
        for mu in 0..4 {
            for nu in 0..4 {
                if s[mu][nu] != s[nu][mu] {
                    return Err(Error::Symmetry { max_asymmetry: (s[mu][nu] - s[nu][mu]).abs() });
                }
            }
        }
        Ok(SourceTensor(s))
    }

    pub fn components(&self) -> &Tensor4 {
        &self.0
    }
}

/// A seeded set of modes `j = 0..N` sharing one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundEnsemble {
    modes: Vec<PlaneWaveMode>,
    seed: u64,
    spectrum: SpectrumParams,
}

impl BackgroundEnsemble {
    /// Wraps already-built modes, checking each against the spectrum's cap.
    pub fn from_modes(modes: Vec<PlaneWaveMode>, seed: u64, spectrum: SpectrumParams) -> Result<Self> {
        for m in &modes {
            m.validate(spectrum.h_max)?;
        }
        Ok(BackgroundEnsemble { modes, seed, spectrum })
    }

    /// An ensemble with no modes: the flat background.
    pub fn empty(spectrum: SpectrumParams) -> Self {
        BackgroundEnsemble { modes: Vec::new(), seed: 0, spectrum }
    }

    pub fn modes(&self) -> &[PlaneWaveMode] {
        &self.modes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spectrum(&self) -> &SpectrumParams {
        &self.spectrum
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Unit TT basis tensors `(e⁺, e×)` for propagation direction `(θ, φ)`.
fn tt_basis(cos_theta: f64, phi: f64) -> (Tensor4, Tensor4) {
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let (sp, cp) = phi.sin_cos();
    let p = [cos_theta * cp, cos_theta * sp, -sin_theta];
    let q = [-sp, cp, 0.0];
    let mut plus = ZERO_TENSOR;
    let mut cross = ZERO_TENSOR;
    for a in 0..3 {
        for b in 0..3 {
            plus[a + 1][b + 1] = p[a] * p[b] - q[a] * q[b];
            cross[a + 1][b + 1] = p[a] * q[b] + q[a] * p[b];
        }
    }
    (plus, cross)
}

/// `E[ε₁₁²]` for a unit TT polarization (`ε:ε = 2`) under isotropic
/// orientation; time-averaged `h₁₁²` per mode is `2A²·E[ε₁₁²] = 8A²/15`.
const MEAN_EPS11_SQ: f64 = 4.0 / 15.0;

struct RawMode {
    cos_theta: f64,
    phi: f64,
    freq: f64,
    phase0: f64,
    psi: f64,
}

fn draw_raw(rng: &mut SimRng, spectrum: &SpectrumParams) -> RawMode {
    let u_dir: f64 = rng.random();
    let u_az: f64 = rng.random();
    let u_f: f64 = rng.random();
    let u_ph: f64 = rng.random();
    let u_pol: f64 = rng.random();
    RawMode {
        cos_theta: 2.0 * u_dir - 1.0,
        phi: 2.0 * PI * u_az,
        freq: spectrum.f_min * (spectrum.f_max / spectrum.f_min).powf(u_f),
        phase0: 2.0 * PI * u_ph,
        psi: PI * u_pol,
    }
}

/// Draws `n_modes` plane waves: isotropic directions, log-uniform
/// frequencies, uniform phases, and a random `+`/`×` mix in each wave frame.
/// Amplitudes follow `f^exponent` and are scaled so the expected
/// time-averaged per-mode `h₁₁²` equals `rms²`.
pub fn sample_background(n_modes: usize, seed: u64, spectrum: SpectrumParams) -> Result<BackgroundEnsemble> {
    if n_modes == 0 {
        return Err(Error::Config("n_modes must be >= 1".into()));
    }
    spectrum.validate()?;
    let mut rng = stream_rng(seed, 0);
    let raw: Vec<RawMode> = (0..n_modes).map(|_| draw_raw(&mut rng, &spectrum)).collect();

    let weights: Vec<f64> = raw.iter().map(|r| (r.freq / spectrum.f_min).powf(spectrum.exponent)).collect();
    let mean_w2 = weights.iter().map(|w| w * w).sum::<f64>() / n_modes as f64;
    let base = spectrum.rms / (2.0 * MEAN_EPS11_SQ).sqrt();

    let mut modes = Vec::with_capacity(n_modes);
    for (j, (r, w)) in raw.iter().zip(&weights).enumerate() {
        let amplitude = base * w / mean_w2.sqrt();
        let (plus, cross) = tt_basis(r.cos_theta, r.phi);
        let (s, c) = r.psi.sin_cos();
        let mut e = ZERO_TENSOR;
        for mu in 0..4 {
            for nu in 0..4 {
                e[mu][nu] = amplitude * (c * plus[mu][nu] + s * cross[mu][nu]);
            }
        }
        let k0 = 2.0 * PI * r.freq / SPEED_OF_LIGHT;
        let sin_theta = (1.0 - r.cos_theta * r.cos_theta).max(0.0).sqrt();
        let (sp, cp) = r.phi.sin_cos();
        let dir = [sin_theta * cp, sin_theta * sp, r.cos_theta];
        // Covariant k_γ = (ω/c, −(ω/c)·n) so that k_γ x^γ = ωt − k·x.
        let k = FourVector([k0, -k0 * dir[0], -k0 * dir[1], -k0 * dir[2]]);
        let mode = PlaneWaveMode::from_parts_unchecked(e, k, r.phase0, j as u64);
        mode.validate(spectrum.h_max).map_err(|err| match err {
            Error::Config(msg) => Error::Config(format!("amplitude law pushes {msg}")),
            other => other,
        })?;
        modes.push(mode);
    }
    Ok(BackgroundEnsemble { modes, seed, spectrum })
}

/// Real plane-wave perturbation `2 e_μν cos(k_γ x^γ + φ₀)`.
pub fn metric_perturbation_at(mode: &PlaneWaveMode, x: &FourVector) -> Tensor4 {
    scale_tensor(&mode.polarization, 2.0 * mode.phase_at(x).cos())
}

/// `η_μν + Σ_j h_μν(j)(x)`, summed in mode order.
pub fn total_metric(ensemble: &BackgroundEnsemble, x: &FourVector) -> Tensor4 {
    let mut g = MinkowskiMetric.tensor();
    for mode in &ensemble.modes {
        let f = 2.0 * mode.phase_at(x).cos();
        for mu in 0..4 {
            for nu in 0..4 {
                g[mu][nu] += mode.polarization[mu][nu] * f;
            }
        }
    }
    g
}

/// `ds² = g_μν dx^μ dx^ν`.
pub fn interval(metric: &Tensor4, dx: &FourVector) -> f64 {
    let mut s = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            s += metric[mu][nu] * dx.0[mu] * dx.0[nu];
        }
    }
    s
}

/// Harmonic-gauge violation of a plane wave, `max_n |k_m e^m_n − ½ k_n e^m_m|`
/// with indices raised by η.
pub fn harmonic_gauge_residual(mode: &PlaneWaveMode) -> f64 {
    let eta = MinkowskiMetric::SIGNATURE;
    let e = &mode.polarization;
    let k = &mode.wave_vector.0;
    let trace: f64 = (0..4).map(|m| eta[m] * e[m][m]).sum();
    (0..4)
        .map(|n| {
            let div: f64 = (0..4).map(|m| k[m] * eta[m] * e[m][n]).sum();
            (div - 0.5 * k[n] * trace).abs()
        })
        .fold(0.0, f64::max)
}

/// `max_mn |□h_mn + 16πG/c⁴·S_mn|` at an event where the wave's cosine is 1.
/// For a plane wave `□h = −(η^μν k_μ k_ν)·h`. `S` is in J/m³.
pub fn field_equation_residual(mode: &PlaneWaveMode, source: &SourceTensor) -> f64 {
    let kk = MinkowskiMetric.dot(&mode.wave_vector, &mode.wave_vector);
    let coupling = 16.0 * PI * GRAVITATIONAL_CONSTANT / SPEED_OF_LIGHT.powi(4);
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let box_h = -kk * 2.0 * mode.polarization[mu][nu];
            worst = worst.max((box_h + coupling * source.0[mu][nu]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_mode_along_z(a: f64, k0: f64, phase0: f64) -> PlaneWaveMode {
        let mut e = ZERO_TENSOR;
        e[1][1] = a;
        e[2][2] = -a;
        PlaneWaveMode::new(e, FourVector([k0, 0.0, 0.0, -k0]), phase0, 0, DEFAULT_H_MAX).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = SpectrumParams::new(10.0, 1000.0, 0.0, 1e-6);
        let a = sample_background(1, 7, s).unwrap();
        let b = sample_background(1, 7, s).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_background(1, 8, s).unwrap());
    }

    #[test]
    fn degenerate_band_rejected() {
        let s = SpectrumParams::new(50.0, 50.0, 0.0, 1e-6);
        assert!(matches!(sample_background(3, 1, s), Err(Error::Config(_))));
        let s = SpectrumParams::new(100.0, 10.0, 0.0, 1e-6);
        assert!(matches!(sample_background(3, 1, s), Err(Error::Config(_))));
        let s = SpectrumParams::new(10.0, 100.0, 0.0, 0.5);
        assert!(matches!(sample_background(3, 1, s), Err(Error::Config(_))));
        let s = SpectrumParams::new(10.0, 100.0, 0.0, 1e-6);
        assert!(matches!(sample_background(0, 1, s), Err(Error::Config(_))));
    }

    #[test]
    fn steep_amplitude_law_hits_cap() {
        let s = SpectrumParams::new(1.0, 1e6, 3.0, 5e-3);
        assert!(matches!(sample_background(200, 3, s), Err(Error::Config(_))));
    }

    #[test]
    fn per_mode_rms_at_origin() {
        let s = SpectrumParams::new(10.0, 1000.0, 0.0, 1e-6);
        let ens = sample_background(1000, 11, s).unwrap();
        let origin = FourVector::new(0.0, 0.0, 0.0, 0.0);
        let ms: f64 = ens
            .modes()
            .iter()
            .map(|m| metric_perturbation_at(m, &origin)[1][1].powi(2))
            .sum::<f64>()
            / 1000.0;
        let rms = ms.sqrt();
        assert!((rms / 1e-6 - 1.0).abs() < 0.1, "sample rms {rms:e}");
    }

    #[test]
    fn perturbation_at_phase_zero_and_quarter() {
        let m = plus_mode_along_z(1e-3, 2.0, 0.0);
        let h = metric_perturbation_at(&m, &FourVector::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(h[1][1], 2e-3);
        assert_eq!(h[2][2], -2e-3);
        let q = plus_mode_along_z(1e-3, 2.0, PI / 2.0);
        let h = metric_perturbation_at(&q, &FourVector::new(0.0, 0.0, 0.0, 0.0));
        assert!(h.iter().flatten().all(|x| x.abs() < 1e-18));
    }

    #[test]
    fn empty_ensemble_is_flat() {
        let ens = BackgroundEnsemble::empty(SpectrumParams::new(1.0, 2.0, 0.0, 0.0));
        assert_eq!(total_metric(&ens, &FourVector::new(1.0, 2.0, 3.0, 4.0)), MinkowskiMetric.tensor());
    }

    #[test]
    fn single_mode_metric_at_origin() {
        let m = plus_mode_along_z(1e-3, 2.0, 0.0);
        let ens = BackgroundEnsemble::from_modes(alloc::vec![m], 0, SpectrumParams::new(1.0, 2.0, 0.0, 1e-3)).unwrap();
        let g = total_metric(&ens, &FourVector::new(0.0, 0.0, 0.0, 0.0));
        assert_eq!(g[0][0], 1.0);
        assert_eq!(g[1][1], -1.0 + 2e-3);
        assert_eq!(g[2][2], -1.0 - 2e-3);
        assert_eq!(g[3][3], -1.0);
    }

    #[test]
    fn flat_intervals() {
        let eta = MinkowskiMetric.tensor();
        assert_eq!(interval(&eta, &FourVector::new(1.0, 0.0, 0.0, 0.0)), 1.0);
        assert_eq!(interval(&eta, &FourVector::new(1.0, 1.0, 0.0, 0.0)), 0.0);
        assert_eq!(interval(&eta, &FourVector::new(0.0, 0.0, 2.0, 0.0)), -4.0);
    }

    #[test]
    fn tt_modes_satisfy_gauge_and_vacuum_equation() {
        let s = SpectrumParams::new(10.0, 1000.0, -0.5, 1e-4);
        let ens = sample_background(200, 5, s).unwrap();
        for m in ens.modes() {
            let scale = m.residual_scale();
            assert!(harmonic_gauge_residual(m) < 1e-12 * scale);
            assert!(field_equation_residual(m, &SourceTensor::vacuum()) < 1e-12 * scale);
        }
    }

    #[test]
    fn injected_time_space_entry_breaks_gauge() {
        let eps = 1e-4;
        let k0 = 3.0;
        let mut e = ZERO_TENSOR;
        e[0][1] = eps;
        e[1][0] = eps;
        let m = PlaneWaveMode::from_parts_unchecked(e, FourVector([k0, -k0, 0.0, 0.0]), 0.0, 0);
        assert!(m.validate(DEFAULT_H_MAX).is_err());
        // n = 0: k_1 η^11 e_10 = (−k0)(−1)ε; n = 1: k_0 η^00 e_01 = k0 ε.
        assert!((harmonic_gauge_residual(&m) - k0 * eps).abs() < 1e-18);
    }

    #[test]
    fn zero_mode_residuals_vanish() {
        let m = PlaneWaveMode::new(ZERO_TENSOR, FourVector([1.0, 0.0, 1.0, 0.0]), 0.3, 0, DEFAULT_H_MAX).unwrap();
        assert_eq!(harmonic_gauge_residual(&m), 0.0);
        assert_eq!(field_equation_residual(&m, &SourceTensor::vacuum()), 0.0);
    }

    #[test]
    fn non_null_wave_vector_violates_field_equation() {
        let a = 2e-3;
        let mut e = ZERO_TENSOR;
        e[1][1] = a;
        e[2][2] = -a;
        // k·k = 1 with k spatial along z.
        let m = PlaneWaveMode::from_parts_unchecked(e, FourVector([1.0, 0.0, 0.0, 0.0]), 0.0, 0);
        assert!(m.validate(DEFAULT_H_MAX).is_err());
        let r = field_equation_residual(&m, &SourceTensor::vacuum());
        assert!((r - 2.0 * a).abs() < 1e-18);
    }

    #[test]
    fn rejects_invalid_modes() {
        let mut e = ZERO_TENSOR;
        e[1][1] = 1e-3;
        let k = FourVector([1.0, 0.0, 0.0, -1.0]);
        assert!(PlaneWaveMode::new(e, k, 0.0, 0, DEFAULT_H_MAX).is_err()); // trace
        e[2][2] = -1e-3;
        assert!(PlaneWaveMode::new(e, FourVector([1.0, -1.0, 0.0, 0.0]), 0.0, 0, DEFAULT_H_MAX).is_err()); // longitudinal
        assert!(PlaneWaveMode::new(e, k, 0.0, 0, 1e-4).is_err()); // above cap
        assert!(PlaneWaveMode::new(e, k, 0.0, 0, DEFAULT_H_MAX).is_ok());
    }
}
