//! Small statistics helpers shared by the Monte Carlo modules.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::TAU;

/// `a` reduced into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU { 0.0 } else { r }
}

/// Kuiper's `V = D⁺ + D⁻` of angles (radians, any range) reduced mod 2π,
/// against the uniform law on the circle. Near `1/√n` for uniform samples,
/// near 1 for a point mass. Zero for an empty sample.
pub fn kuiper_v(angles: &[f64]) -> f64 {
    if angles.is_empty() {
        return 0.0;
    }
    let mut u: Vec<f64> = angles.iter().map(|a| wrap_angle(*a) / TAU).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    let mut d_plus = 0.0_f64;
    let mut d_minus = 0.0_f64;
    for (i, &x) in u.iter().enumerate() {
        d_plus = d_plus.max((i + 1) as f64 / n - x);
        d_minus = d_minus.max(x - i as f64 / n);
    }
    d_plus + d_minus
}

/// Standard error of the unbiased sample variance, from the fourth central
/// moment: `sqrt((m₄ − s⁴(n−3)/(n−1)) / n)`.
pub fn variance_std_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 4 {
        return 0.0;
    }
    let nf = n as f64;
    let mean = xs.iter().sum::<f64>() / nf;
    let s2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    ((m4 - s2 * s2 * (nf - 3.0) / (nf - 1.0)).max(0.0) / nf).sqrt()
}
