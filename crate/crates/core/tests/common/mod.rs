//! Brute-force reference computations. Each one sums the defining quadrature directly from
//! node coordinates, without the sign-flip FFT factorisation or any library reduction.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tflab::{Exponent, GridSpec, SampledField};

pub fn e(v: f64) -> Exponent {
    Exponent::new(v).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `h^n sum_m f(x_m) e^{-i x_m . xi_k}`.
pub fn dft(f: &SampledField) -> Vec<Complex64> {
    let spec = *f.spec();
    let dual = spec.dual();
    let h = spec.cell_measure();
    (0..dual.len())
        .map(|k| {
            let xi = dual.point(k);
            (0..spec.len()).map(|m| f.values()[m] * Complex64::from_polar(h, -dot(&spec.point(m), &xi))).sum()
        })
        .collect()
}

/// `(2 pi)^{-n} (pi/L)^n sum_k g(xi_k) e^{i x_m . xi_k}`, on the dual of `g`'s grid.
pub fn idft(g: &SampledField) -> Vec<Complex64> {
    let spec = *g.spec();
    let out = spec.dual();
    let c = spec.cell_measure() / (2.0 * PI).powi(spec.dim() as i32);
    (0..out.len())
        .map(|m| {
            let x = out.point(m);
            (0..spec.len()).map(|k| g.values()[k] * Complex64::from_polar(c, dot(&x, &spec.point(k)))).sum()
        })
        .collect()
}

/// `u` reduced to `[-L, L)` per axis.
pub fn wrap(spec: &GridSpec, u: &[f64]) -> Vec<f64> {
    let l = spec.half_width();
    u.iter().map(|&v| (v + l).rem_euclid(2.0 * l) - l).collect()
}

/// `V_w f(x_m, xi_k) = h^n sum_j f(t_j) conj(w(t_j - x_m)) e^{-i t_j . xi_k}` with the window
/// evaluated from its formula at the periodically wrapped offset. Row-major in `m`.
pub fn stft_double_sum(f: &SampledField, w: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
    let spec = *f.spec();
    let dual = spec.dual();
    let h = spec.cell_measure();
    let len = spec.len();
    let mut out = Vec::with_capacity(len * len);
    for m in 0..len {
        let x = spec.point(m);
        let wc: Vec<Complex64> = (0..len)
            .map(|j| {
                let t = spec.point(j);
                let d: Vec<f64> = t.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
                w(&wrap(&spec, &d)).conj()
            })
            .collect();
        for k in 0..len {
            let xi = dual.point(k);
            out.push((0..len).map(|j| f.values()[j] * wc[j] * Complex64::from_polar(h, -dot(&spec.point(j), &xi))).sum());
        }
    }
    out
}

fn lq(values: &[f64], p: f64, measure: f64) -> f64 {
    if p.is_infinite() {
        values.iter().copied().fold(0.0, f64::max)
    } else {
        (values.iter().map(|v| v.powf(p)).sum::<f64>() * measure).powf(1.0 / p)
    }
}

/// Nested mixed norm of `|F|` stored row-major as `rows x cols` (rows are `x`).
/// `x_first` takes `L^p` over rows inside `L^q` over columns; otherwise the reverse.
#[allow(clippy::too_many_arguments)]
pub fn nested_mixed_norm(values: &[Complex64], rows: usize, cols: usize, p: f64, q: f64, dx: f64, dxi: f64, x_first: bool) -> f64 {
    let abs = |r: usize, c: usize| values[r * cols + c].norm();
    if x_first {
        let inner: Vec<f64> = (0..cols).map(|c| lq(&(0..rows).map(|r| abs(r, c)).collect::<Vec<_>>(), p, dx)).collect();
        lq(&inner, q, dxi)
    } else {
        let inner: Vec<f64> = (0..rows).map(|r| lq(&(0..cols).map(|c| abs(r, c)).collect::<Vec<_>>(), q, dxi)).collect();
        lq(&inner, p, dx)
    }
}

/// `sum_{j,k} c_{jk} e^{i x . k beta} chi(x - j alpha)` with translates wrapped onto the box.
pub fn gabor_sum(spec: &GridSpec, chi: impl Fn(&[f64]) -> f64, alpha: f64, beta: f64, radius: i64, c: &[Complex64]) -> Vec<Complex64> {
    let dim = spec.dim();
    let index: Vec<Vec<i64>> = match dim {
        1 => (-radius..=radius).map(|a| vec![a]).collect(),
        _ => (-radius..=radius).flat_map(|a| (-radius..=radius).map(move |b| vec![a, b])).collect(),
    };
    let count = index.len();
    (0..spec.len())
        .map(|i| {
            let x = spec.point(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, jj) in index.iter().enumerate() {
                let shifted: Vec<f64> = x.iter().zip(jj).map(|(a, b)| a - *b as f64 * alpha).collect();
                let atom = chi(&wrap(spec, &shifted));
                for (k, kk) in index.iter().enumerate() {
                    let xi: Vec<f64> = kk.iter().map(|v| *v as f64 * beta).collect();
                    acc += c[j * count + k] * Complex64::from_polar(atom, dot(&x, &xi));
                }
            }
            acc
        })
        .collect()
}

/// `(2 pi)^{-n} (pi/L)^n sum_k a(x_m, xi_k) e^{i x_m . xi_k} F f(xi_k)` with `F f` from [`dft`].
pub fn kn_double_sum(f: &SampledField, a: impl Fn(&[f64], &[f64]) -> Complex64) -> Vec<Complex64> {
    let spec = *f.spec();
    let dual = spec.dual();
    let fhat = dft(f);
    let c = dual.cell_measure() / (2.0 * PI).powi(spec.dim() as i32);
    (0..spec.len())
        .map(|m| {
            let x = spec.point(m);
            (0..dual.len())
                .map(|k| {
                    let xi = dual.point(k);
                    a(&x, &xi) * fhat[k] * Complex64::from_polar(c, dot(&x, &xi))
                })
                .sum()
        })
        .collect()
}

/// Sum of a few random modulated Gaussians, decayed at the box edge for `L >= 6`.
pub fn random_packet(spec: GridSpec, seed: u64) -> SampledField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.dim();
    let packets: Vec<(Vec<f64>, Vec<f64>, Complex64)> = (0..3)
        .map(|_| {
            let c = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eta = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            (c, eta, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    SampledField::from_fn(spec, |x| {
        packets
            .iter()
            .map(|(c, eta, a)| {
                let r2: f64 = x.iter().zip(c).map(|(u, v)| (u - v).powi(2)).sum();
                a * Complex64::from_polar((-r2).exp(), dot(x, eta))
            })
            .sum()
    })
    .unwrap()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn gaussian(x: &[f64]) -> Complex64 {
    Complex64::new((-0.5 * dot(x, x)).exp(), 0.0)
}
