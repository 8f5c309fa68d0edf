//! FFT paths against the brute-force sums in `common`, closed-form values, and
//! frozen baselines measured with the default experiment grids.

mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tflab::grid::{band_limited_interpolate, forward_fourier, inverse_fourier, lp_norm};
use tflab::operators::{
    beurling_helson_growth, canonical_transform, fourier_multiplier, gabor_synthesize, kohn_nirenberg_apply, ChangeOfVariables,
    GaborSystem, HomogeneousReflection, KnSymbol, SymbolTag,
};
use tflab::profiles::bump;
use tflab::spaces::{fourier_lebesgue_norm, mixed_norm, modulation_norm, wiener_norm, NormSpec};
use tflab::stft::{check_fourier_covariance, stft, StftArray, Window};
use tflab::torus::{torus_canonical_transform, torus_norm, LatticeBijection, TorusCoefficients};
use tflab::weights::{check_moderate, Weight};
use tflab::{Exponent, GridSpec, Point, SampledField};

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    max_abs_diff(a, b) / max_abs(b)
}

#[test]
fn forward_and_inverse_transforms_match_direct_quadrature() {
    for spec in [GridSpec::new(1, 6.0, 32).unwrap(), GridSpec::new(2, 6.0, 16).unwrap()] {
        let f = random_packet(spec, 3);
        let fhat = forward_fourier(&f);
        assert!(rel(fhat.values(), &dft(&f)) < 1e-10);
        assert!(rel(inverse_fourier(&fhat).values(), &idft(&fhat)) < 1e-10);
        assert!(rel(inverse_fourier(&fhat).values(), f.values()) < 1e-12);
    }
}

#[test]
fn interpolant_matches_direct_series() {
    let spec = GridSpec::new(1, 6.0, 32).unwrap();
    let f = random_packet(spec, 5);
    let fhat = dft(&f);
    let dual = spec.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let points: Vec<Point> = (0..10).map(|_| Point::new(&[rng.gen_range(-6.0..6.0)])).collect();
    let got = band_limited_interpolate(&f, &points).unwrap();
    let c = dual.cell_measure() / (2.0 * PI);
    let want: Vec<Complex64> = points
        .iter()
        .map(|p| (0..dual.len()).map(|k| fhat[k] * Complex64::from_polar(c, p[0] * dual.coordinate(k))).sum())
        .collect();
    assert!(rel(&got, &want) < 1e-10);
}

#[test]
fn lebesgue_norm_matches_direct_sum() {
    let spec = GridSpec::new(1, 4.0, 16).unwrap();
    let f = random_packet(spec, 1);
    let h = spec.spacing();
    let want = (f.values().iter().map(|v| v.norm().powi(3)).sum::<f64>() * h).cbrt();
    assert!((lp_norm(&f, e(3.0)) - want).abs() / want < 1e-12);
}

#[test]
fn stft_matches_double_sum() {
    for spec in [GridSpec::new(1, 5.0, 16).unwrap(), GridSpec::new(2, 5.0, 8).unwrap()] {
        let f = random_packet(spec, 8);
        let v = stft(&f, &Window::gaussian(spec)).unwrap();
        assert!(rel(v.values(), &stft_double_sum(&f, gaussian)) < 1e-10, "dim {}", spec.dim());
    }
}

#[test]
fn mixed_norms_match_nested_loops() {
    let spec = GridSpec::new(1, 3.0, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let values: Vec<Complex64> = (0..64).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let arr = StftArray::new(spec, values.clone(), "random").unwrap();
    let (dx, dxi) = (spec.cell_measure(), spec.dual().cell_measure());
    for (p, q) in [(2.0, 3.0), (1.0, f64::INFINITY), (f64::INFINITY, 1.5), (4.0, 4.0 / 3.0)] {
        let m = mixed_norm(&arr, &NormSpec::modulation(e(p), e(q))).unwrap();
        let w = mixed_norm(&arr, &NormSpec::wiener(e(p), e(q))).unwrap();
        let (m0, w0) = (nested_mixed_norm(&values, 8, 8, p, q, dx, dxi, true), nested_mixed_norm(&values, 8, 8, p, q, dx, dxi, false));
        assert!((m - m0).abs() / m0 < 1e-12 && (w - w0).abs() / w0 < 1e-12, "({p},{q})");
    }
}

#[test]
fn fourier_lebesgue_norm_matches_quadrature() {
    let spec = GridSpec::new(1, 6.0, 32).unwrap();
    let f = random_packet(spec, 2);
    let d = spec.dual().spacing();
    let want = (dft(&f).iter().map(|v| v.norm().powi(4)).sum::<f64>() * d).powf(0.25);
    assert!((fourier_lebesgue_norm(&f, e(4.0), None).unwrap() - want).abs() / want < 1e-10);
}

#[test]
fn gabor_synthesis_matches_direct_summation() {
    for spec in [GridSpec::new(1, 8.0, 64).unwrap(), GridSpec::new(2, 6.0, 24).unwrap()] {
        let sys = GaborSystem::with_default_lattice(Window::gaussian(spec), 2).unwrap();
        let c = sys.random_coefficients(17);
        let got = gabor_synthesize(&sys, &c).unwrap();
        let want = gabor_sum(&spec, |x| gaussian(x).re, sys.alpha(), sys.beta(), 2, c.values());
        assert!(rel(got.values(), &want) < 1e-10);
    }
}

#[test]
fn kohn_nirenberg_matches_double_sum() {
    let symbol = |x: &[f64], xi: &[f64]| Complex64::from_polar(1.0 + 0.3 * x[0].sin(), 0.5 * xi.iter().sum::<f64>().cos());
    for spec in [GridSpec::new(1, 5.0, 32).unwrap(), GridSpec::new(2, 5.0, 8).unwrap()] {
        let f = random_packet(spec, 6);
        let a = KnSymbol::from_fn(spec, SymbolTag::General, symbol).unwrap();
        let got = kohn_nirenberg_apply(&a, &f).unwrap();
        assert!(rel(got.values(), &kn_double_sum(&f, symbol)) < 1e-9);
    }
}

#[test]
fn fourier_multiplier_matches_direct_composition() {
    let spec = GridSpec::new(1, 6.0, 32).unwrap();
    let f = random_packet(spec, 12);
    let m = |xi: &[f64]| Complex64::new(1.0 / (1.0 + xi[0] * xi[0]), xi[0].sin());
    let dual = spec.dual();
    let g = SampledField::new(dual, dft(&f).iter().enumerate().map(|(k, v)| v * m(&dual.point(k))).collect()).unwrap();
    assert!(rel(fourier_multiplier(m, &f).unwrap().values(), &idft(&g)) < 1e-10);
}

#[test]
fn gaussian_closed_forms() {
    let spec = GridSpec::new(1, 10.0, 128).unwrap();
    let g = SampledField::from_fn(spec, |p| gaussian(p)).unwrap();
    let ghat = forward_fourier(&g);
    let exact: Vec<Complex64> = spec.dual().points().map(|xi| gaussian(&xi) * (2.0 * PI).sqrt()).collect();
    assert!(max_abs_diff(ghat.values(), &exact) < 1e-12);
    let w = Window::gaussian(spec);
    assert!(check_fourier_covariance(&g, &w).unwrap() < 1e-7);
    // |V_g g(x, xi)| = sqrt(pi) e^{-(x^2 + xi^2)/4}.
    let m = |p, q| modulation_norm(&g, &w, e(p), e(q), None).unwrap();
    let inf = f64::INFINITY;
    for (got, want) in [(m(1.0, 1.0), 4.0 * PI.powf(1.5)), (m(2.0, 2.0), PI * 2f64.sqrt()), (m(inf, inf), PI.sqrt()), (m(1.0, inf), 2.0 * PI)] {
        assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
    }
    let w1 = wiener_norm(&g, &w, e(1.0), e(inf), None).unwrap();
    assert!((w1 - 2.0 * PI).abs() / (2.0 * PI) < 1e-6);
}

#[test]
fn dilation_canonical_transform() {
    // I_psi with psi(xi) = 2 xi sends f to f(x/2)/2.
    let spec = GridSpec::new(1, 16.0, 256).unwrap();
    let f = SampledField::from_fn(spec, |p| gaussian(p)).unwrap();
    let got = canonical_transform(&ChangeOfVariables::scaling(1, 2.0).unwrap(), &f).unwrap();
    let want: Vec<Complex64> = spec.points().map(|x| gaussian(&[x[0] / 2.0]) * 0.5).collect();
    assert!(max_abs_diff(got.values(), &want) < 1e-8);
}

#[test]
fn full_fold_is_even_reflection() {
    let spec = GridSpec::new(1, 8.0, 128).unwrap();
    let f = random_packet(spec, 21);
    let folded = HomogeneousReflection::new(tflab::linalg::Matrix::zero(1), tflab::linalg::Matrix::identity(1)).unwrap().apply(&f).unwrap();
    let n = spec.points_per_axis();
    for m in 1..n {
        let mirror = if m < n / 2 { n - m } else { m };
        assert!((folded.values()[m] - f.values()[mirror]).norm() < 1e-12);
    }
}

#[test]
fn torus_isometry_examples() {
    let f = TorusCoefficients::from_entries(1, [(vec![0], Complex64::new(1.0, 0.0)), (vec![1], 2.0.into()), (vec![2], 3.0.into())]).unwrap();
    let g = torus_canonical_transform(&LatticeBijection::negation(1), &f).unwrap();
    assert_eq!(g.get(&[-2]), Complex64::new(3.0, 0.0));
    assert_eq!(torus_norm(&f, e(2.0)), 14f64.sqrt());
    assert_eq!(torus_norm(&g, e(2.0)), 14f64.sqrt());
    let f = TorusCoefficients::random(2, 30, 6, 2).unwrap();
    let g = torus_canonical_transform(&LatticeBijection::shear(1), &f).unwrap();
    assert!((torus_norm(&g, e(3.0)) - torus_norm(&f, e(3.0))).abs() <= 1e-15 * torus_norm(&f, e(3.0)));
}

#[test]
fn moderate_weights() {
    let m = check_moderate(&Weight::bracket_power(2.0), &Weight::bracket_power(2.0), 1, 4000, 50.0, 3).unwrap();
    assert!(m.holds && m.best_c <= 4.0);
    let small = check_moderate(&Weight::Exponential { rate: 1.0 }, &Weight::bracket_power(4.0), 1, 4000, 5.0, 3).unwrap();
    let large = check_moderate(&Weight::Exponential { rate: 1.0 }, &Weight::bracket_power(4.0), 1, 4000, 40.0, 3).unwrap();
    assert!(large.best_c > 100.0 * small.best_c);
}

/// Growth of `||chi e^{i 64 x^2}||_{FL^1} / ||chi e^{i x^2}||_{FL^1}` at N = 4096, L = 16.
const QUADRATIC_FL1_GROWTH: f64 = 5.652;

#[test]
fn frozen_beurling_helson_baseline() {
    let spec = GridSpec::new(1, 16.0, 4096).unwrap();
    let chi = SampledField::from_real_fn(spec, |p| bump(p[0] / 1.5)).unwrap();
    let curve = beurling_helson_growth(|x| x * x, &chi, Exponent::ONE, &[1.0, 64.0]).unwrap();
    let growth = curve[1].1 / curve[0].1;
    assert!((growth - QUADRATIC_FL1_GROWTH).abs() < 5e-3, "{growth}");
}

fn seed_field(spec: GridSpec) -> impl Strategy<Value = SampledField> {
    any::<u64>().prop_map(move |s| random_packet(spec, s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plancherel_on_the_grid(f in seed_field(GridSpec::new(1, 6.0, 64).unwrap())) {
        let fhat = forward_fourier(&f);
        let lhs = lp_norm(&f, Exponent::TWO);
        let rhs = lp_norm(&fhat, Exponent::TWO) / (2.0 * PI).sqrt();
        prop_assert!((lhs - rhs).abs() < 1e-12 * lhs);
    }

    #[test]
    fn diagonal_mixed_norms_coincide(f in seed_field(GridSpec::new(1, 6.0, 32).unwrap()), p in 1.0f64..6.0) {
        let v = stft(&f, &Window::gaussian(*f.spec())).unwrap();
        let m = mixed_norm(&v, &NormSpec::modulation(e(p), e(p))).unwrap();
        let w = mixed_norm(&v, &NormSpec::wiener(e(p), e(p))).unwrap();
        prop_assert!((m - w).abs() < 1e-12 * m);
    }

    #[test]
    fn wiener_is_dual_modulation(f in seed_field(GridSpec::new(1, 6.0, 32).unwrap()), p in 1.0f64..5.0, q in 1.0f64..5.0) {
        let w = Window::gaussian(*f.spec());
        let lhs = wiener_norm(&f, &w, e(p), e(q), None).unwrap();
        let rhs = modulation_norm(&forward_fourier(&f), &w.fourier_image(), e(q), e(p), None).unwrap() / (2.0 * PI);
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs);
    }

    #[test]
    fn torus_shears_are_isometries(seed in any::<u64>(), s in -4i64..5, q in 1.0f64..8.0) {
        let f = TorusCoefficients::random(2, 25, 6, seed).unwrap();
        let g = torus_canonical_transform(&LatticeBijection::shear(s), &f).unwrap();
        prop_assert_eq!(torus_norm(&g, e(q)), torus_norm(&f, e(q)));
    }

    #[test]
    fn conjugation_is_an_involution(p in 1.0f64..100.0) {
        let c = e(p).conjugate().conjugate().value();
        prop_assert!((c - p).abs() < 1e-9 * p);
    }
}
