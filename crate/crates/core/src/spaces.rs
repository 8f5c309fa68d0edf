//! Mixed Lebesgue norms of time-frequency arrays and the modulation, Wiener amalgam,
//! Fourier-Lebesgue and partition-of-unity norms built on them.

use std::str::FromStr;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{forward_fourier, inverse_fourier, GridSpec, SampledField, SupportBox, DECAY_THRESHOLD};
use crate::profiles;
use crate::stft::{stft, StftArray, Window, WindowKind};
use crate::weights::Weight;

/// Rows reduced per parallel task; fixed so that summation order never depends on the pool.
const ROW_BLOCK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `L^{p,q}_1`: `L^p` in `x` first, then `L^q` in `xi`.
    InnerXOuterXi,
    /// `L^{p,q}_2`: `L^q` in `xi` first, then `L^p` in `x`.
    InnerXiOuterX,
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner_x_outer_xi" | "1" => Ok(Ordering::InnerXOuterXi),
            "inner_xi_outer_x" | "2" => Ok(Ordering::InnerXiOuterX),
            other => Err(Error::Config(format!("unknown ordering `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormSpec {
    pub p: Exponent,
    pub q: Exponent,
    pub ordering: Ordering,
    /// Evaluated at `(x, xi)` and multiplied into `|F|` before reduction.
    pub weight: Option<Weight>,
}

impl NormSpec {
    pub fn new(p: Exponent, q: Exponent, ordering: Ordering) -> Self {
        NormSpec { p, q, ordering, weight: None }
    }

    pub fn modulation(p: Exponent, q: Exponent) -> Self {
        Self::new(p, q, Ordering::InnerXOuterXi)
    }

    pub fn wiener(p: Exponent, q: Exponent) -> Self {
        Self::new(p, q, Ordering::InnerXiOuterX)
    }

    pub fn with_weight(mut self, weight: Option<Weight>) -> Self {
        self.weight = weight;
        self
    }
}

#[inline]
fn power(p: Exponent, v: f64) -> f64 {
    match p.value() {
        x if x == 1.0 => v,
        x if x == 2.0 => v * v,
        x if x.is_infinite() => v,
        x => v.powf(x),
    }
}

#[inline]
fn accumulate(p: Exponent, acc: f64, term: f64) -> f64 {
    if p.is_infinite() {
        acc.max(term)
    } else {
        acc + term
    }
}

#[inline]
fn finish(p: Exponent, acc: f64, measure: f64) -> f64 {
    match p.value() {
        x if x.is_infinite() => acc,
        x if x == 1.0 => acc * measure,
        x if x == 2.0 => (acc * measure).sqrt(),
        x => (acc * measure).powf(1.0 / x),
    }
}

/// Lattice values `|F(x_m, xi_k)| w(x_m, xi_k)` of one row.
fn weighted_row(spec: &GridSpec, dual: &GridSpec, m: usize, row: &[Complex64], weight: Option<&Weight>, out: &mut [f64]) {
    match weight {
        None => out.iter_mut().zip(row).for_each(|(o, v)| *o = v.norm()),
        Some(w) => {
            let n = spec.dim();
            let x = spec.point(m);
            let mut z = [0.0; 4];
            z[..n].copy_from_slice(&x);
            for (k, (o, v)) in out.iter_mut().zip(row).enumerate() {
                z[n..2 * n].copy_from_slice(&dual.point(k));
                *o = v.norm() * w.eval(&z[..2 * n]);
            }
        }
    }
}

/// Nested quadrature of `|F| w` over the spatial/dual lattice in the requested order.
pub fn mixed_norm(f: &StftArray, spec: &NormSpec) -> Result<f64> {
    if let Some(w) = &spec.weight {
        // Positivity on the lattice corners is checked once; eval is trusted in the loop.
        let g = f.spec();
        let d = f.dual_spec();
        let corner: Vec<f64> = std::iter::repeat_n(-g.half_width(), g.dim()).chain(std::iter::repeat_n(-d.half_width(), g.dim())).collect();
        w.checked_eval(&corner)?;
    }
    Ok(mixed_norm_values(f.spec(), f.values(), spec))
}

fn mixed_norm_values(grid: &GridSpec, values: &[Complex64], spec: &NormSpec) -> f64 {
    let dual = grid.dual();
    let len = grid.len();
    let (p, q) = (spec.p, spec.q);
    let (dx, dxi) = (grid.cell_measure(), dual.cell_measure());
    let weight = spec.weight.as_ref();
    match spec.ordering {
        Ordering::InnerXOuterXi => {
            let partials: Vec<Vec<f64>> = values
                .par_chunks(len * ROW_BLOCK)
                .enumerate()
                .map(|(b, block)| {
                    let mut acc = vec![0.0; len];
                    let mut buf = vec![0.0; len];
                    for (r, row) in block.chunks_exact(len).enumerate() {
                        weighted_row(grid, &dual, b * ROW_BLOCK + r, row, weight, &mut buf);
                        for (a, &v) in acc.iter_mut().zip(&buf) {
                            *a = accumulate(p, *a, power(p, v));
                        }
                    }
                    acc
                })
                .collect();
            let mut cols = vec![0.0; len];
            for part in &partials {
                for (c, &v) in cols.iter_mut().zip(part) {
                    *c = accumulate(p, *c, v);
                }
            }
            let outer = cols.iter().fold(0.0, |acc, &c| accumulate(q, acc, power(q, finish(p, c, dx))));
            finish(q, outer, dxi)
        }
        Ordering::InnerXiOuterX => {
            let rows: Vec<f64> = values
                .par_chunks(len)
                .enumerate()
                .map(|(m, row)| {
                    let mut buf = vec![0.0; len];
                    weighted_row(grid, &dual, m, row, weight, &mut buf);
                    let inner = buf.iter().fold(0.0, |acc, &v| accumulate(q, acc, power(q, v)));
                    finish(q, inner, dxi)
                })
                .collect();
            let outer = rows.iter().fold(0.0, |acc, &r| accumulate(p, acc, power(p, r)));
            finish(p, outer, dx)
        }
    }
}

/// `||V_w f * weight||_{L^{p,q}_1}`.
pub fn modulation_norm(f: &SampledField, w: &Window, p: Exponent, q: Exponent, weight: Option<&Weight>) -> Result<f64> {
    mixed_norm(&stft(f, w)?, &NormSpec::modulation(p, q).with_weight(weight.cloned()))
}

/// `||V_w f * weight||_{L^{p,q}_2}`.
pub fn wiener_norm(f: &SampledField, w: &Window, p: Exponent, q: Exponent, weight: Option<&Weight>) -> Result<f64> {
    mixed_norm(&stft(f, w)?, &NormSpec::wiener(p, q).with_weight(weight.cloned()))
}

fn weighted_lp(f: &SampledField, p: Exponent, weight: Option<&Weight>) -> Result<f64> {
    let spec = f.spec();
    let mut acc = 0.0;
    for (i, v) in f.values().iter().enumerate() {
        let w = match weight {
            Some(w) => w.checked_eval(&spec.point(i))?,
            None => 1.0,
        };
        acc = accumulate(p, acc, power(p, v.norm() * w));
    }
    Ok(finish(p, acc, spec.cell_measure()))
}

/// `||f w0||_{L^p}` for a weight on `R^n`.
pub fn lp_norm_weighted(f: &SampledField, p: Exponent, weight: Option<&Weight>) -> Result<f64> {
    weighted_lp(f, p, weight)
}

/// `||F f * w0||_{L^q}` on the dual grid.
pub fn fourier_lebesgue_norm(f: &SampledField, q: Exponent, weight: Option<&Weight>) -> Result<f64> {
    weighted_lp(&forward_fourier(f), q, weight)
}

/// Translates `Phi(xi - k)` of the tensor triangle over integer `k` covering the dual box.
#[derive(Clone, Debug)]
pub struct UniformPartition {
    dual: GridSpec,
    radius: i64,
}

impl UniformPartition {
    /// Partition for fields on `spec`; translates reach one unit past the frequency box.
    pub fn new(spec: &GridSpec) -> Self {
        let dual = spec.dual();
        UniformPartition { dual, radius: dual.half_width().ceil() as i64 + 1 }
    }

    pub fn profile(xi: &[f64]) -> f64 {
        xi.iter().map(|&t| profiles::triangle(t)).product()
    }

    /// All translates `k` with `|k_i| <= radius`.
    pub fn translates(&self) -> Vec<[i64; 2]> {
        let r = self.radius;
        let axis: Vec<i64> = (-r..=r).collect();
        match self.dual.dim() {
            1 => axis.iter().map(|&k| [k, 0]).collect(),
            _ => axis.iter().flat_map(|&a| axis.iter().map(move |&b| [a, b])).collect(),
        }
    }

    /// Largest `|sum_k Phi(xi - k) - 1|` over the dual nodes.
    pub fn unity_defect(&self) -> f64 {
        let n = self.dual.dim();
        self.dual
            .points()
            .map(|xi| {
                let s: f64 = self.translates().iter().map(|k| Self::profile_at(&xi, k, n)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    fn profile_at(xi: &[f64], k: &[i64; 2], n: usize) -> f64 {
        (0..n).map(|a| profiles::triangle(xi[a] - k[a] as f64)).product()
    }

    /// The localised piece `Phi(D - k) f`, or `None` if `Phi(. - k) F f` is negligible.
    fn piece(&self, fhat: &SampledField, k: &[i64; 2], floor: f64) -> Option<SampledField> {
        let n = self.dual.dim();
        let localized = fhat.mul_fn(|xi| Complex64::new(Self::profile_at(xi, k, n), 0.0));
        (localized.max_abs() > floor).then(|| inverse_fourier(&localized))
    }

    /// The pieces `Phi(D - k) f` that carry non-negligible frequency content.
    pub fn pieces(&self, f: &SampledField) -> Result<Vec<([i64; 2], SampledField)>> {
        f.spec().dual().ensure_compatible(&self.dual, "partition")?;
        let fhat = forward_fourier(f);
        if fhat.boundary_decay() > DECAY_THRESHOLD {
            warn!("frequency content reaches the edge of the dual box (relative {:.2e}); partition norms are truncated", fhat.boundary_decay());
        }
        let floor = DECAY_THRESHOLD * fhat.max_abs();
        let ks = self.translates();
        Ok(ks.par_iter().filter_map(|k| self.piece(&fhat, k, floor).map(|g| (*k, g))).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionNorms {
    /// `|| ||Phi(D-k) f||_{L^p} ||_{l^q_k}`.
    pub m: f64,
    /// `|| ||Phi(D-k) f(x)||_{l^q_k} ||_{L^p_x}`.
    pub w: f64,
    pub active_translates: usize,
}

/// Both partition-of-unity norms from one set of localised pieces.
pub fn partition_norms(f: &SampledField, p: Exponent, q: Exponent) -> Result<PartitionNorms> {
    let part = UniformPartition::new(f.spec());
    let pieces = part.pieces(f)?;
    let spec = *f.spec();
    let m_acc = pieces.iter().fold(0.0, |acc, (_, g)| accumulate(q, acc, power(q, crate::grid::lp_norm(g, p))));
    let m = finish(q, m_acc, 1.0);
    let mut pointwise = vec![0.0; spec.len()];
    for (_, g) in &pieces {
        for (acc, v) in pointwise.iter_mut().zip(g.values()) {
            *acc = accumulate(q, *acc, power(q, v.norm()));
        }
    }
    let w_acc = pointwise.iter().fold(0.0, |acc, &s| accumulate(p, acc, power(p, finish(q, s, 1.0))));
    let w = finish(p, w_acc, spec.cell_measure());
    Ok(PartitionNorms { m, w, active_translates: pieces.len() })
}

pub fn partition_norm_m(f: &SampledField, p: Exponent, q: Exponent) -> Result<f64> {
    Ok(partition_norms(f, p, q)?.m)
}

pub fn partition_norm_w(f: &SampledField, p: Exponent, q: Exponent) -> Result<f64> {
    Ok(partition_norms(f, p, q)?.w)
}

/// One member of the support-scaling experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaRow {
    pub fattened_measure: f64,
    pub m_norm: f64,
    pub w_norm: f64,
}

impl OmegaRow {
    pub fn m_over_w(&self) -> f64 {
        self.m_norm / self.w_norm
    }

    pub fn w_over_m(&self) -> f64 {
        self.w_norm / self.m_norm
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaTable {
    pub p: Exponent,
    pub q: Exponent,
    pub rows: Vec<OmegaRow>,
    /// Least-squares slope of `log(M/W)` against `log |Omega~|`.
    pub slope_m_over_w: f64,
    /// Least-squares slope of `log(W/M)` against `log |Omega~|`.
    pub slope_w_over_m: f64,
}

impl OmegaTable {
    /// `max(0, 1/q - 1/p)`, the exponent bounding `M/W`.
    pub fn exponent_m_over_w(&self) -> f64 {
        (self.q.reciprocal() - self.p.reciprocal()).max(0.0)
    }

    /// `max(0, 1/p - 1/q)`, the exponent bounding `W/M`.
    pub fn exponent_w_over_m(&self) -> f64 {
        (self.p.reciprocal() - self.q.reciprocal()).max(0.0)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs at least two points".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("slope fit over a single abscissa".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Ratios of modulation and Wiener norms of fields supported in growing boxes.
///
/// The window must be a compact bump of radius at most one so that each slice
/// `V f(., xi)` stays inside the fattened box.
pub fn theorem1_ratio_experiment(
    members: &[(SupportBox, SampledField)],
    window: &Window,
    p: Exponent,
    q: Exponent,
    weight: Option<&Weight>,
) -> Result<OmegaTable> {
    match (window.kind(), window.support_radius()) {
        (WindowKind::CompactBump, Some(r)) if r <= 1.0 => {}
        _ => return Err(Error::InvalidArgument("support scaling needs a compact bump window of radius <= 1".into())),
    }
    let rows = members
        .par_iter()
        .map(|(omega, f)| {
            omega.check_support(f)?;
            let v = stft(f, window)?;
            let m_norm = mixed_norm(&v, &NormSpec::modulation(p, q).with_weight(weight.cloned()))?;
            let w_norm = mixed_norm(&v, &NormSpec::wiener(p, q).with_weight(weight.cloned()))?;
            if m_norm == 0.0 || w_norm == 0.0 {
                return Err(Error::Degenerate("zero field in support scaling family".into()));
            }
            Ok(OmegaRow { fattened_measure: omega.fattened_measure(), m_norm, w_norm })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope_m_over_w = log_log_slope(&rows.iter().map(|r| (r.fattened_measure, r.m_over_w())).collect::<Vec<_>>())?;
    let slope_w_over_m = log_log_slope(&rows.iter().map(|r| (r.fattened_measure, r.w_over_m())).collect::<Vec<_>>())?;
    Ok(OmegaTable { p, q, rows, slope_m_over_w, slope_w_over_m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn random_array(spec: GridSpec, seed: u64) -> StftArray {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..spec.len() * spec.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        StftArray::new(spec, v, "random").unwrap()
    }

    #[test]
    fn single_cell_reduces_to_cell_measures() {
        let s = GridSpec::new(1, 4.0, 8).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 64];
        v[3 * 8 + 5] = Complex64::new(1.0, 0.0);
        let f = StftArray::new(s, v, "cell").unwrap();
        let (h, d) = (s.spacing(), s.frequency_spacing());
        let one = mixed_norm(&f, &NormSpec::modulation(Exponent::ONE, Exponent::ONE)).unwrap();
        assert!((one - h * d).abs() < 1e-15);
        let pq = mixed_norm(&f, &NormSpec::modulation(e(2.0), e(3.0))).unwrap();
        assert!((pq - h.powf(0.5) * d.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn fubini_for_equal_exponents() {
        let s = GridSpec::new(1, 3.0, 16).unwrap();
        let f = random_array(s, 4);
        for p in [e(1.0), e(1.5), e(2.0), Exponent::INFINITY] {
            let a = mixed_norm(&f, &NormSpec::modulation(p, p)).unwrap();
            let b = mixed_norm(&f, &NormSpec::wiener(p, p)).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn unit_weight_is_exact() {
        let s = GridSpec::new(1, 3.0, 16).unwrap();
        let f = random_array(s, 5);
        let w = Weight::separable(Weight::bracket_power(0.0), Weight::one());
        for ord in [Ordering::InnerXOuterXi, Ordering::InnerXiOuterX] {
            let a = mixed_norm(&f, &NormSpec::new(e(2.0), e(3.0), ord)).unwrap();
            let b = mixed_norm(&f, &NormSpec::new(e(2.0), e(3.0), ord).with_weight(Some(w.clone()))).unwrap();
            assert!((a - b).abs() <= 1e-15 * a);
        }
    }

    #[test]
    fn fourier_lebesgue_of_gaussian() {
        let s = GridSpec::new(1, 16.0, 512).unwrap();
        let g = SampledField::from_real_fn(s, |p| (-0.5 * p[0] * p[0]).exp()).unwrap();
        let v = fourier_lebesgue_norm(&g, Exponent::TWO, None).unwrap();
        assert!((v - (2.0 * PI).sqrt() * PI.powf(0.25)).abs() < 1e-6);
        assert_eq!(fourier_lebesgue_norm(&SampledField::zeros(s), e(3.0), None).unwrap(), 0.0);
    }

    #[test]
    fn partition_of_unity() {
        for spec in [GridSpec::new(1, 4.0, 32).unwrap(), GridSpec::new(2, 3.0, 16).unwrap()] {
            let part = UniformPartition::new(&spec);
            assert!(part.unity_defect() < 1e-12);
            let f = SampledField::from_real_fn(spec, |p| (-p.iter().map(|v| v * v).sum::<f64>()).exp()).unwrap();
            let sum = part.pieces(&f).unwrap().into_iter().fold(SampledField::zeros(spec), |acc, (_, g)| acc.add(&g).unwrap());
            assert!(sum.max_abs_diff(&f) < 1e-9);
        }
    }

    #[test]
    fn narrow_spectrum_uses_few_translates() {
        // A modulated wide Gaussian has F f concentrated well inside [k0 - 1/2, k0 + 1/2].
        let s = GridSpec::new(1, 200.0, 1024).unwrap();
        let k0 = 3.0;
        let f = SampledField::from_fn(s, |p| Complex64::from_polar((-(p[0] / 20.0).powi(2)).exp(), k0 * p[0])).unwrap();
        let n = partition_norms(&f, e(2.0), e(2.0)).unwrap();
        assert!(n.active_translates <= 3, "{}", n.active_translates);
        let z = partition_norms(&SampledField::zeros(s), e(2.0), e(2.0)).unwrap();
        assert_eq!((z.m, z.w, z.active_translates), (0.0, 0.0, 0));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((log_log_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert!(log_log_slope(&pts[..1]).is_err());
    }

    #[test]
    fn ratio_experiment_requires_compact_window() {
        let s = GridSpec::new(1, 8.0, 64).unwrap();
        let f = SampledField::zeros(s);
        let omega = SupportBox::centered(1, 1.0).unwrap();
        let r = theorem1_ratio_experiment(&[(omega, f)], &Window::gaussian(s), e(2.0), e(2.0), None);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}
