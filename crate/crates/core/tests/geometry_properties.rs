use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use stochgrav_core::hilbert::*;

fn state(d: usize) -> impl Strategy<Value = ComplexStateVector> {
    (prop::collection::vec(-10.0..10.0f64, d), prop::collection::vec(-10.0..10.0f64, d))
        .prop_map(|(u, v)| ComplexStateVector::new(u, v).unwrap())
}

fn pair() -> impl Strategy<Value = (ComplexStateVector, ComplexStateVector)> {
    (1usize..12).prop_flat_map(|d| (state(d), state(d)))
}

fn triple() -> impl Strategy<Value = (ComplexStateVector, ComplexStateVector, ComplexStateVector)> {
    (1usize..12).prop_flat_map(|d| (state(d), state(d), state(d)))
}

/// `Σ conj(ψ₁)·ψ₂` on complex numbers.
fn hermitian(a: &ComplexStateVector, b: &ComplexStateVector) -> Complex<f64> {
    let za = a.real().iter().zip(a.imag()).map(|(&u, &v)| Complex::new(u, v));
    let zb = b.real().iter().zip(b.imag()).map(|(&u, &v)| Complex::new(u, v));
    za.zip(zb).map(|(x, y)| x.conj() * y).sum()
}

fn close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * scale.max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reconstructs_complex_inner_product((a, b) in pair()) {
        let d = decompose_inner_product(&a, &b).unwrap();
        let (re, im) = d.reconstruct();
        let z = hermitian(&a, &b);
        let scale = a.norm_sqr().sqrt() * b.norm_sqr().sqrt();
        prop_assert!(close(re, z.re, 1e-12, scale), "{re} vs {}", z.re);
        prop_assert!(close(im, z.im, 1e-12, scale), "{im} vs {}", z.im);
    }

    #[test]
    fn g_symmetric_omega_antisymmetric((a, b) in pair()) {
        let ab = decompose_inner_product(&a, &b).unwrap();
        let ba = decompose_inner_product(&b, &a).unwrap();
        let scale = a.norm_sqr().sqrt() * b.norm_sqr().sqrt();
        prop_assert!(close(ab.g_part, ba.g_part, 1e-14, scale));
        prop_assert!(close(ab.omega_part, -ba.omega_part, 1e-14, scale));
    }

    #[test]
    fn bilinear_in_first_slot((p1, p2, p3) in triple(), a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let lhs = decompose_inner_product(&p1.combine(a, &p3, b).unwrap(), &p2).unwrap();
        let d12 = decompose_inner_product(&p1, &p2).unwrap();
        let d32 = decompose_inner_product(&p3, &p2).unwrap();
        let scale = 1.0 + (p1.norm_sqr() + p3.norm_sqr()).sqrt() * p2.norm_sqr().sqrt() * 10.0;
        prop_assert!((lhs.g_part - (a * d12.g_part + b * d32.g_part)).abs() < 1e-10 * scale);
        prop_assert!((lhs.omega_part - (a * d12.omega_part + b * d32.omega_part)).abs() < 1e-10 * scale);
    }

    #[test]
    fn identity_metric_gives_squared_norm(psi in prop::collection::vec(-3.0..3.0f64, 1..9)) {
        let n = psi.len();
        let m = perturbed_metric(DMatrix::zeros(n, n)).unwrap();
        let p = probability_form(&m, &psi).unwrap();
        let direct: f64 = psi.iter().map(|x| x * x).sum();
        prop_assert_eq!(p.value, direct);
    }

    #[test]
    fn simplex_volume_permutation_and_scaling(
        flat in prop::collection::vec(-2.0..2.0f64, 16),
        c in -3.0..3.0f64,
        swap in (0usize..4, 0usize..4),
    ) {
        let pts: Vec<Vec<f64>> = flat.chunks(4).map(|r| r.to_vec()).collect();
        let v = simplex_volume(&SimplexPointSet::new(pts.clone()).unwrap());
        let mut permuted = pts.clone();
        permuted.swap(swap.0, swap.1);
        let vp = simplex_volume(&SimplexPointSet::new(permuted).unwrap());
        prop_assert!((v - vp).abs() <= 1e-12 * (1.0 + v));
        let scaled: Vec<Vec<f64>> = pts.iter().map(|r| r.iter().map(|x| c * x).collect()).collect();
        let vs = simplex_volume(&SimplexPointSet::new(scaled).unwrap());
        prop_assert!((vs - c.abs().powi(4) * v).abs() <= 1e-10 * (1.0 + vs));
    }
}

#[test]
fn unit_simplex_and_singular_volumes() {
    let id = SimplexPointSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(simplex_volume(&id), 0.5);
    let singular = SimplexPointSet::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
    assert_eq!(simplex_volume(&singular), 0.0);
}
