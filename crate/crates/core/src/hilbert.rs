//! State-space geometry: the real/imaginary split of the Hermitian inner
//! product into a Riemannian part `G` and a symplectic part `Ω`, weakly
//! perturbed metrics `G = H + Π`, the quadratic probability form and the
//! simplex volume used as a non-flatness flag.

use alloc::format;
use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest eigenvalue tolerated before a metric counts as indefinite.
pub const PSD_TOLERANCE: f64 = -1e-10;
/// `‖Π‖/‖H‖` above which a perturbation is flagged as no longer weak.
pub const WEAK_WARNING_RATIO: f64 = 0.1;
/// Slack on `P <= 1` before a [`NormalizationWarning`] is attached.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

/// `ψ = u + i v` stored as its real and imaginary component vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStateVector {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl ComplexStateVector {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Dimension(format!(
                "real part has {} components, imaginary part {}",
                u.len(),
                v.len()
            )));
        }
        if u.is_empty() {
            return Err(Error::Dimension("state vector must have d >= 1".into()));
        }
        if u.iter().chain(v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Domain("state vector components must be finite".into()));
        }
        Ok(ComplexStateVector { u, v })
    }

    pub fn real(&self) -> &[f64] {
        &self.u
    }

    pub fn imag(&self) -> &[f64] {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// `a·self + b·other` for real coefficients.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        let lin = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
        };
        Self::new(lin(&self.u, &other.u), lin(&self.v, &other.v))
    }

    pub fn norm_sqr(&self) -> f64 {
        dot(&self.u, &self.u) + dot(&self.v, &self.v)
    }
}

/// `⟨ψ₁|ψ₂⟩ = G − iΩ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProductDecomposition {
    pub g_part: f64,
    pub omega_part: f64,
}

impl InnerProductDecomposition {
    /// Real and imaginary parts of the inner product rebuilt as `G − iΩ`.
    pub fn reconstruct(&self) -> (f64, f64) {
        (self.g_part, -self.omega_part)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Splits the Hermitian inner product into `G = (u₁,u₂)+(v₁,v₂)` and
/// `Ω = (v₁,u₂)−(u₁,v₂)`.
pub fn decompose_inner_product(
    psi1: &ComplexStateVector,
    psi2: &ComplexStateVector,
) -> Result<InnerProductDecomposition> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::Dimension(format!(
            "cannot pair states of dimension {} and {}",
            psi1.dim(),
            psi2.dim()
        )));
    }
    Ok(InnerProductDecomposition {
        g_part: dot(&psi1.u, &psi2.u) + dot(&psi1.v, &psi2.v),
        omega_part: dot(&psi1.v, &psi2.u) - dot(&psi1.u, &psi2.v),
    })
}

/// Raised when `‖Π‖/‖H‖` exceeds [`WEAK_WARNING_RATIO`] but is still below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakPerturbationWarning {
    pub ratio: f64,
}

/// State-space metric `G_ik = H_ik + Π_ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProHilbertMetric {
    h_flat: DMatrix<f64>,
    pi_perturbation: DMatrix<f64>,
    total: DMatrix<f64>,
    ratio: f64,
    min_eigenvalue: f64,
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(1.0);
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for k in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, k)] - m[(k, i)]).abs());
        }
    }
    if worst > 1e-12 * scale {
        return Err(Error::Symmetry { max_asymmetry: worst });
    }
    Ok(())
}

/// Operator 2-norm of a symmetric matrix: its largest absolute eigenvalue.
fn sym_operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.amax()
}

impl ProHilbertMetric {
    /// Assembles and validates `H + Π` for an arbitrary symmetric base metric.
    pub fn from_parts(h_flat: DMatrix<f64>, pi_perturbation: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&h_flat)?;
        check_symmetric(&pi_perturbation)?;
        if h_flat.shape() != pi_perturbation.shape() {
            return Err(Error::Dimension(format!(
                "base metric is {}x{}, perturbation {}x{}",
                h_flat.nrows(),
                h_flat.ncols(),
                pi_perturbation.nrows(),
                pi_perturbation.ncols()
            )));
        }
        if h_flat.nrows() == 0 {
            return Err(Error::Dimension("metric must have N >= 1".into()));
        }
        let h_norm = sym_operator_norm(&h_flat);
        let ratio = sym_operator_norm(&pi_perturbation) / h_norm;
        if !(ratio < 1.0) {
            return Err(Error::PerturbationTooLarge { ratio });
        }
        let total = &h_flat + &pi_perturbation;
        let min_eigenvalue = SymmetricEigen::new(total.clone()).eigenvalues.min();
        if min_eigenvalue < PSD_TOLERANCE {
            return Err(Error::Metric { min_eigenvalue });
        }
        Ok(ProHilbertMetric { h_flat, pi_perturbation, total, ratio, min_eigenvalue })
    }

    pub fn dim(&self) -> usize {
        self.total.nrows()
    }

    pub fn h_flat(&self) -> &DMatrix<f64> {
        &self.h_flat
    }

    pub fn pi_perturbation(&self) -> &DMatrix<f64> {
        &self.pi_perturbation
    }

    /// `G = H + Π`.
    pub fn total(&self) -> &DMatrix<f64> {
        &self.total
    }

    /// `‖Π‖₂ / ‖H‖₂`.
    pub fn perturbation_ratio(&self) -> f64 {
        self.ratio
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn weak_warning(&self) -> Option<WeakPerturbationWarning> {
        (self.ratio > WEAK_WARNING_RATIO).then_some(WeakPerturbationWarning { ratio: self.ratio })
    }
}

/// Flat identity base metric plus the symmetric perturbation `pi`.
pub fn perturbed_metric(pi: DMatrix<f64>) -> Result<ProHilbertMetric> {
    let n = pi.nrows();
    ProHilbertMetric::from_parts(DMatrix::identity(n, pi.ncols()), pi)
}

/// `P` exceeded one by more than [`NORMALIZATION_SLACK`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationWarning {
    pub excess: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    pub value: f64,
    pub warning: Option<NormalizationWarning>,
}

/// `P = Σ_ik G_ik ψ_i ψ_k`, the stored metric applied directly to the
/// supplied components (no index raising).
pub fn probability_form(metric: &ProHilbertMetric, psi: &[f64]) -> Result<Probability> {
    if psi.len() != metric.dim() {
        return Err(Error::Dimension(format!(
            "state has {} components, metric is {}x{}",
            psi.len(),
            metric.dim(),
            metric.dim()
        )));
    }
    if metric.min_eigenvalue < PSD_TOLERANCE {
        return Err(Error::Metric { min_eigenvalue: metric.min_eigenvalue });
    }
    let g = &metric.total;
    let mut value = 0.0;
    for i in 0..psi.len() {
        let mut row = 0.0;
        for k in 0..psi.len() {
            row += g[(i, k)] * psi[k];
        }
        value += psi[i] * row;
    }
    // PSD within tolerance; clamp the rounding residue.
    let value = value.max(0.0);
    let warning = (value > 1.0 + NORMALIZATION_SLACK)
        .then_some(NormalizationWarning { excess: value - 1.0 });
    Ok(Probability { value, warning })
}

/// `N` points in `N` dimensions, row `l` holding the components of point `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPointSet {
    points: Vec<Vec<f64>>,
}

impl SimplexPointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::Dimension("point set is empty".into()));
        }
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::Dimension(format!(
                "{n} points need {n} components each, found {}",
                bad.len()
            )));
        }
        Ok(SimplexPointSet { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `V_N = |det ψ| / N!`. Non-zero marks a non-Euclidean configuration.
pub fn simplex_volume(points: &SimplexPointSet) -> f64 {
    let n = points.len();
    let m = DMatrix::from_fn(n, n, |r, c| points.points[r][c]);
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    m.determinant().abs() / factorial
}
