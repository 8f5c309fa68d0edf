//! Uniform grids on boxes `[-L, L)^n`, sampled fields, the Fourier pair
//! `F f(xi) = int e^{-i x.xi} f(x) dx`, `F^{-1} g(x) = (2 pi)^{-n} int e^{i x.xi} g(xi) dxi`
//! realised by Riemann sums, trigonometric interpolation and quadrature norms.
//!
//! A grid with `N` points per axis and half width `L` has spacing `h = 2L/N` and nodes
//! `x_m = -L + m h`. Its dual grid has spacing `pi/L` and covers `[-N pi/(2L), N pi/(2L))`,
//! which is again a grid of the same shape, so [`GridSpec::dual`] is an involution.
//! Fields are periodic on the box; functions on `R^n` are represented by fields that
//! decay below `1e-12` near the boundary.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::ops::Deref;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, PowerSum};

/// Relative threshold below which a field counts as vanished near the box boundary.
pub const DECAY_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Dimension(dim));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width {half_width} must be positive")));
        }
        if points_per_axis < 8 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis {points_per_axis} must be even and at least 8"
            )));
        }
        Ok(GridSpec { dim, half_width, points_per_axis })
    }

    /// Self-dual grid: the frequency box has the same half width as the spatial box.
    pub fn balanced(dim: usize, points_per_axis: usize) -> Result<Self> {
        Self::new(dim, (points_per_axis as f64 * PI / 2.0).sqrt(), points_per_axis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Spacing of the dual grid, `pi / L`.
    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_width
    }

    /// Total number of nodes, `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one node, `h^n`.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn dual(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            half_width: self.points_per_axis as f64 * PI / (2.0 * self.half_width),
            points_per_axis: self.points_per_axis,
        }
    }

    /// Same grid up to rounding in the half width.
    pub fn compatible(&self, other: &GridSpec) -> bool {
        self.dim == other.dim
            && self.points_per_axis == other.points_per_axis
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }

    pub(crate) fn ensure_compatible(&self, other: &GridSpec, what: &str) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{what}: {self:?} vs {other:?}")))
        }
    }

    /// Coordinate of node `i` along one axis.
    #[inline]
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Per-axis indices of a flat node index (row-major, axis 0 slowest).
    #[inline]
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        let n = self.points_per_axis;
        match self.dim {
            1 => [flat, 0],
            _ => [flat / n, flat % n],
        }
    }

    #[inline]
    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        match self.dim {
            1 => idx[0],
            _ => idx[0] * self.points_per_axis + idx[1],
        }
    }

    /// Node coordinates of a flat index.
    #[inline]
    pub fn point(&self, flat: usize) -> Point {
        let idx = self.unflatten(flat);
        let mut coords = [0.0; 2];
        for (axis, c) in coords.iter_mut().enumerate().take(self.dim) {
            *c = self.coordinate(idx[axis]);
        }
        Point { coords, dim: self.dim }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Index of the node at the reflected position `-x`, with `-(-L)` wrapped onto `-L`.
    #[inline]
    pub fn reflect_index(&self, flat: usize) -> usize {
        let n = self.points_per_axis;
        let idx = self.unflatten(flat);
        let mut r = [0; 2];
        for axis in 0..self.dim {
            r[axis] = (n - idx[axis]) % n;
        }
        self.flatten(r)
    }

    /// Whether `p` lies in the closed box `[-L, L]^n`.
    pub fn contains(&self, p: &[f64]) -> bool {
        let lim = self.half_width * (1.0 + 1e-12);
        p.iter().all(|v| v.abs() <= lim)
    }

    /// Whether `value` is an integer multiple of `step` (to relative accuracy `1e-9`).
    pub fn is_multiple(value: f64, step: f64) -> Option<i64> {
        let r = value / step;
        let k = r.round();
        if (r - k).abs() <= 1e-9 * r.abs().max(1.0) {
            Some(k as i64)
        } else {
            None
        }
    }
}

/// A point of `R^1` or `R^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    dim: usize,
}

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        let mut c = [0.0; 2];
        c[..coords.len()].copy_from_slice(coords);
        Point { coords: c, dim: coords.len() }
    }

    pub fn norm(&self) -> f64 {
        self.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.coords[..self.dim]
    }
}

/// Complex samples of a function on the nodes of a [`GridSpec`].
#[derive(Clone, Debug)]
pub struct SampledField {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::ShapeMismatch { expected: spec.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(format!("sample {i}")));
        }
        Ok(SampledField { spec, values })
    }

    /// Internal constructor for values known to be finite and correctly sized.
    pub(crate) fn from_parts(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        SampledField { spec, values }
    }

    pub fn zeros(spec: GridSpec) -> Self {
        SampledField { spec, values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    /// Samples `f` at every node. Fails if `f` returns a non-finite value.
    pub fn from_fn<F>(spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&Point) -> Complex64,
    {
        let values = (0..spec.len()).map(|i| f(&spec.point(i))).collect();
        Self::new(spec, values)
    }

    pub fn from_real_fn<F>(spec: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&Point) -> f64,
    {
        Self::from_fn(spec, |p| Complex64::new(f(p), 0.0))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> SampledField {
        self.map(|v| v * c)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> SampledField {
        SampledField { spec: self.spec, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &SampledField, b: Complex64) -> Result<SampledField> {
        self.spec.ensure_compatible(&other.spec, "linear combination")?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| a * x + b * y).collect();
        Ok(SampledField { spec: self.spec, values })
    }

    pub fn add(&self, other: &SampledField) -> Result<SampledField> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SampledField) -> Result<SampledField> {
        self.spec.ensure_compatible(&other.spec, "pointwise product")?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| x * y).collect();
        Ok(SampledField { spec: self.spec, values })
    }

    /// Pointwise product with a function of the node position.
    pub fn mul_fn<F: Fn(&Point) -> Complex64>(&self, f: F) -> SampledField {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| v * f(&self.spec.point(i)))
            .collect();
        SampledField { spec: self.spec, values }
    }

    /// Largest nodewise deviation from `other`.
    pub fn max_abs_diff(&self, other: &SampledField) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Relative discrete l2 distance `|self - other| / |other|` (absolute when `other` vanishes).
    pub fn relative_l2_error(&self, reference: &SampledField) -> f64 {
        let num: f64 = self.values.iter().zip(&reference.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = reference.values.iter().map(|b| b.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// Largest modulus over the outer band of nodes (width `max(1, N/32)` per side),
    /// relative to the field's sup norm. Zero for the zero field.
    pub fn boundary_decay(&self) -> f64 {
        let sup = self.max_abs();
        if sup == 0.0 {
            return 0.0;
        }
        let n = self.spec.points_per_axis;
        let band = (n / 32).max(1);
        let mut edge = 0.0_f64;
        for (i, v) in self.values.iter().enumerate() {
            let idx = self.spec.unflatten(i);
            let on_edge = (0..self.spec.dim).any(|a| idx[a] < band || idx[a] >= n - band);
            if on_edge {
                edge = edge.max(v.norm());
            }
        }
        edge / sup
    }

    pub fn is_well_decayed(&self) -> bool {
        self.boundary_decay() < DECAY_THRESHOLD
    }

    /// Serialises to the columnar blob format described in [`write_blob`].
    pub fn to_blob(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 16 * self.values.len());
        write_blob(&mut out, self.spec.dim as u32, &self.spec, &self.values).expect("in-memory write");
        out
    }

    pub fn from_blob(bytes: &[u8]) -> Result<Self> {
        let (rank, spec, values) = read_blob(&mut &bytes[..])?;
        if rank as usize != spec.dim {
            return Err(Error::InvalidArgument(format!("blob rank {rank} is not a field rank")));
        }
        Self::new(spec, values)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn plan(len: usize, direction: Direction) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match direction {
            Direction::Forward => p.plan_fft_forward(len),
            Direction::Inverse => p.plan_fft_inverse(len),
        }
    })
}

/// Reusable transform kernel for one grid shape.
///
/// With `x_m = -L + m h` and `xi_k = -K + k pi/L` the phase `x_m xi_k` reduces to
/// `N pi/2 - pi k - pi m + 2 pi m k / N`, so each axis is an FFT sandwiched between
/// `(-1)^m` and `(-1)^k (-1)^{N/2}` sign flips.
pub(crate) struct Transform {
    spec: GridSpec,
    fft: Arc<dyn Fft<f64>>,
    direction: Direction,
    axis_scale: f64,
}

impl Transform {
    pub(crate) fn new(spec: &GridSpec, direction: Direction) -> Self {
        let n = spec.points_per_axis;
        let h = spec.spacing();
        let axis_scale = match direction {
            Direction::Forward => h,
            Direction::Inverse => h / (2.0 * PI),
        };
        Transform { spec: *spec, fft: plan(n, direction), direction, axis_scale }
    }

    pub(crate) fn output_spec(&self) -> GridSpec {
        self.spec.dual()
    }

    fn line(&self, line: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = line.len();
        let half_sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        for v in line.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
        self.fft.process_with_scratch(line, scratch);
        let s = half_sign * self.axis_scale;
        for (k, v) in line.iter_mut().enumerate() {
            *v *= if k % 2 == 0 { s } else { -s };
        }
    }

    pub(crate) fn apply_in_place(&self, data: &mut [Complex64]) {
        let n = self.spec.points_per_axis;
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        debug_assert!(matches!(self.direction, Direction::Forward | Direction::Inverse));
        match self.spec.dim {
            1 => self.line(data, &mut scratch),
            _ => {
                for row in data.chunks_mut(n) {
                    self.line(row, &mut scratch);
                }
                let mut col = vec![Complex64::new(0.0, 0.0); n];
                for j in 0..n {
                    for i in 0..n {
                        col[i] = data[i * n + j];
                    }
                    self.line(&mut col, &mut scratch);
                    for i in 0..n {
                        data[i * n + j] = col[i];
                    }
                }
            }
        }
    }
}

/// Riemann-sum Fourier transform `F f(xi_k) = h^n sum_m e^{-i x_m . xi_k} f(x_m)` on the dual grid.
pub fn forward_fourier(f: &SampledField) -> SampledField {
    let t = Transform::new(&f.spec, Direction::Forward);
    let mut data = f.values.clone();
    t.apply_in_place(&mut data);
    SampledField::from_parts(t.output_spec(), data)
}

/// Inverse transform with the `(2 pi)^{-n}` factor; exact inverse of [`forward_fourier`].
pub fn inverse_fourier(g: &SampledField) -> SampledField {
    let t = Transform::new(&g.spec, Direction::Inverse);
    let mut data = g.values.clone();
    t.apply_in_place(&mut data);
    SampledField::from_parts(t.output_spec(), data)
}

/// Quadrature `L^p` norm: `(sum |f(x_m)|^p h^n)^{1/p}`, or the sample maximum for `p = inf`.
pub fn lp_norm(f: &SampledField, p: Exponent) -> f64 {
    let mut acc = PowerSum::new(p);
    for v in &f.values {
        acc.push(v.norm());
    }
    acc.finish(f.spec.cell_measure())
}

/// Trigonometric interpolant of a field: the finite Fourier series whose frequencies
/// are the dual-grid nodes, evaluated anywhere in the box.
pub struct BandLimited {
    spec: GridSpec,
    dual: GridSpec,
    coefficients: Vec<Complex64>,
}

impl BandLimited {
    pub fn new(f: &SampledField) -> Self {
        let fhat = forward_fourier(f);
        let dual = *fhat.spec();
        let c = (dual.spacing() / (2.0 * PI)).powi(f.spec.dim as i32);
        let coefficients = fhat.values.iter().map(|v| v * c).collect();
        BandLimited { spec: f.spec, dual, coefficients }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn exponentials(&self, x: f64, out: &mut [Complex64]) {
        let n = self.dual.points_per_axis;
        let step = Complex64::from_polar(1.0, x * self.dual.spacing());
        let mut k = 0;
        while k < n {
            let mut e = Complex64::from_polar(1.0, x * self.dual.coordinate(k));
            for slot in out.iter_mut().skip(k).take(64) {
                *slot = e;
                e *= step;
            }
            k += 64;
        }
    }

    /// Value of the interpolant; fails outside the closed box.
    pub fn eval(&self, p: &[f64]) -> Result<Complex64> {
        if !self.spec.contains(p) {
            return Err(Error::OutsideBox { point: p.to_vec(), half_width: self.spec.half_width });
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: &[f64]) -> Complex64 {
        let n = self.dual.points_per_axis;
        let mut e0 = vec![Complex64::new(0.0, 0.0); n];
        self.exponentials(p[0], &mut e0);
        match self.spec.dim {
            1 => e0.iter().zip(&self.coefficients).map(|(e, c)| e * c).sum(),
            _ => {
                let mut e1 = vec![Complex64::new(0.0, 0.0); n];
                self.exponentials(p[1], &mut e1);
                self.coefficients
                    .chunks(n)
                    .zip(&e0)
                    .map(|(row, a)| a * row.iter().zip(&e1).map(|(c, b)| c * b).sum::<Complex64>())
                    .sum()
            }
        }
    }

    pub fn eval_many(&self, points: &[Point]) -> Result<Vec<Complex64>> {
        points.par_iter().map(|p| self.eval(p)).collect()
    }
}

/// Evaluates the trigonometric interpolant of `f` at each point.
pub fn band_limited_interpolate(f: &SampledField, points: &[Point]) -> Result<Vec<Complex64>> {
    BandLimited::new(f).eval_many(points)
}

/// Axis-aligned box `Omega` with its unit sup-distance fattening `Omega~`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SupportBox {
    pub fn new(lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() || lower.len() > 2 {
            return Err(Error::Dimension(lower.len()));
        }
        if lower.iter().zip(upper).any(|(l, u)| !(l < u)) {
            return Err(Error::InvalidArgument(format!("box lower {lower:?} must be below upper {upper:?}")));
        }
        Ok(SupportBox { lower: lower.to_vec(), upper: upper.to_vec() })
    }

    /// The symmetric interval or square `[-r, r]^n`.
    pub fn centered(dim: usize, radius: f64) -> Result<Self> {
        Self::new(&vec![-radius; dim], &vec![radius; dim])
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn measure(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    /// `|Omega~| = prod (upper_i - lower_i + 2)`.
    pub fn fattened_measure(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l + 2.0).product()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    /// Checks `|f| < 1e-12` at every node outside the box.
    pub fn check_support(&self, f: &SampledField) -> Result<()> {
        let spec = f.spec();
        for (i, v) in f.values().iter().enumerate() {
            if v.norm() >= DECAY_THRESHOLD && !self.contains(&spec.point(i)) {
                return Err(Error::Support(format!(
                    "|f| = {:e} at {:?} outside {:?}..{:?}",
                    v.norm(),
                    &*spec.point(i),
                    self.lower,
                    self.upper
                )));
            }
        }
        Ok(())
    }
}

/// Writes the columnar blob: `dim: u32`, `rank: u32`, `L: f64`, `N: u32` (all little
/// endian), then `N^rank` interleaved `re, im` little-endian `f64` pairs.
///
/// `rank` equals `dim` for fields and `2 dim` for time-frequency arrays over the same grid.
pub fn write_blob<W: Write>(w: &mut W, rank: u32, spec: &GridSpec, values: &[Complex64]) -> Result<()> {
    w.write_all(&(spec.dim as u32).to_le_bytes())?;
    w.write_all(&rank.to_le_bytes())?;
    w.write_all(&spec.half_width.to_le_bytes())?;
    w.write_all(&(spec.points_per_axis as u32).to_le_bytes())?;
    for v in values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a blob written by [`write_blob`]; returns `(rank, spatial grid, values)`.
pub fn read_blob<R: Read>(r: &mut R) -> Result<(u32, GridSpec, Vec<Complex64>)> {
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b4)?;
    let dim = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let rank = u32::from_le_bytes(b4);
    r.read_exact(&mut b8)?;
    let half_width = f64::from_le_bytes(b8);
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    let spec = GridSpec::new(dim, half_width, n)?;
    if rank as usize != dim && rank as usize != 2 * dim {
        return Err(Error::InvalidArgument(format!("blob rank {rank} does not fit dimension {dim}")));
    }
    let count = n.pow(rank);
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        values.push(Complex64::new(re, im));
    }
    Ok((rank, spec, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_field(spec: GridSpec, seed: u64) -> SampledField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..spec.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        SampledField::new(spec, values).unwrap()
    }

    #[test]
    fn spec_invariants() {
        assert!(GridSpec::new(1, 1.0, 7).is_err());
        assert!(GridSpec::new(1, 1.0, 6).is_err());
        assert!(GridSpec::new(3, 1.0, 8).is_err());
        assert!(GridSpec::new(1, -1.0, 8).is_err());
        let s = GridSpec::new(1, 4.0, 16).unwrap();
        assert_eq!(s.spacing(), 0.5);
        let d = s.dual();
        assert!((d.spacing() - PI / 4.0).abs() < 1e-15);
        assert!((d.coordinate(0) + 16.0 * PI / 8.0).abs() < 1e-13);
        assert!(d.dual().compatible(&s));
    }

    #[test]
    fn wrong_length_is_rejected() {
        let s = GridSpec::new(1, 4.0, 16).unwrap();
        assert!(matches!(SampledField::new(s, vec![c(0.0); 15]), Err(Error::ShapeMismatch { .. })));
        let mut v = vec![c(0.0); 16];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(SampledField::new(s, v), Err(Error::NonFinite(_))));
    }

    #[test]
    fn gaussian_self_transform() {
        let s = GridSpec::new(1, 16.0, 512).unwrap();
        let f = SampledField::from_real_fn(s, |p| (-p[0] * p[0] / 2.0).exp()).unwrap();
        let fh = forward_fourier(&f);
        let expect =
            SampledField::from_real_fn(*fh.spec(), |p| (2.0 * PI).sqrt() * (-p[0] * p[0] / 2.0).exp()).unwrap();
        assert!(fh.relative_l2_error(&expect) < 1e-8);
    }

    #[test]
    fn zero_maps_to_zero() {
        let s = GridSpec::new(2, 3.0, 8).unwrap();
        assert!(forward_fourier(&SampledField::zeros(s)).is_zero());
        assert!(inverse_fourier(&SampledField::zeros(s)).is_zero());
    }

    #[test]
    fn roundtrip_random() {
        for (dim, n) in [(1, 64), (2, 16)] {
            let s = GridSpec::new(dim, 2.5, n).unwrap();
            let f = random_field(s, 3);
            let back = inverse_fourier(&forward_fourier(&f));
            assert!(back.spec().compatible(&s));
            assert!(back.relative_l2_error(&f) < 1e-12);
        }
    }

    #[test]
    fn parseval() {
        let s = GridSpec::new(2, 6.0, 32).unwrap();
        let f = SampledField::from_fn(s, |p| {
            Complex64::from_polar((-(p[0] * p[0] + 2.0 * p[1] * p[1])).exp(), 0.7 * p[0])
        })
        .unwrap();
        let lhs = lp_norm(&f, Exponent::TWO);
        let rhs = lp_norm(&forward_fourier(&f), Exponent::TWO) / (2.0 * PI);
        assert!((lhs - rhs).abs() / lhs < 1e-9);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_exponentials() {
        let s = GridSpec::new(1, 3.0, 32).unwrap();
        let f = random_field(s, 11);
        let pts: Vec<Point> = s.points().collect();
        let vals = band_limited_interpolate(&f, &pts).unwrap();
        for (a, b) in vals.iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-10);
        }
        let xi0 = s.dual().coordinate(21);
        let e = SampledField::from_fn(s, |p| Complex64::from_polar(1.0, xi0 * p[0])).unwrap();
        let x = 0.123_456;
        let v = BandLimited::new(&e).eval(&[x]).unwrap();
        assert!((v - Complex64::from_polar(1.0, xi0 * x)).norm() < 1e-9);
        assert!(BandLimited::new(&e).eval(&[3.5]).is_err());
    }

    #[test]
    fn interpolation_2d_exponential() {
        let s = GridSpec::new(2, 2.0, 16).unwrap();
        let d = s.dual();
        let (a, b) = (d.coordinate(3), d.coordinate(12));
        let e = SampledField::from_fn(s, |p| Complex64::from_polar(1.0, a * p[0] + b * p[1])).unwrap();
        let v = BandLimited::new(&e).eval(&[0.31, -1.7]).unwrap();
        assert!((v - Complex64::from_polar(1.0, a * 0.31 - b * 1.7)).norm() < 1e-9);
    }

    #[test]
    fn indicator_lp_norm_is_one() {
        let s = GridSpec::new(1, 4.0, 64).unwrap();
        let f = SampledField::from_real_fn(s, |p| if p[0] >= 0.0 && p[0] < 1.0 { 1.0 } else { 0.0 }).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            assert!((lp_norm(&f, Exponent::new(p).unwrap()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lp_norm_homogeneous() {
        let s = GridSpec::new(1, 4.0, 32).unwrap();
        let f = random_field(s, 5);
        let cst = Complex64::new(-1.3, 2.1);
        for p in [1.0, 2.5, f64::INFINITY] {
            let p = Exponent::new(p).unwrap();
            let lhs = lp_norm(&f.scale(cst), p);
            assert!((lhs - cst.norm() * lp_norm(&f, p)).abs() < 1e-12 * lhs);
        }
    }

    #[test]
    fn support_box_measures() {
        let b = SupportBox::new(&[-1.0, 0.0], &[1.0, 0.5]).unwrap();
        assert_eq!(b.fattened_measure(), 4.0 * 2.5);
        assert!(SupportBox::new(&[1.0], &[0.0]).is_err());
        let s = GridSpec::new(1, 4.0, 32).unwrap();
        let f = SampledField::from_real_fn(s, |p| if p[0].abs() < 2.0 { 1.0 } else { 0.0 }).unwrap();
        assert!(SupportBox::centered(1, 2.0).unwrap().check_support(&f).is_ok());
        assert!(SupportBox::centered(1, 1.0).unwrap().check_support(&f).is_err());
    }

    #[test]
    fn blob_roundtrip() {
        let s = GridSpec::new(2, 1.5, 8).unwrap();
        let f = random_field(s, 8);
        let back = SampledField::from_blob(&f.to_blob()).unwrap();
        assert!(back.spec().compatible(&s));
        assert_eq!(back.values(), f.values());
        assert_eq!(&f.to_blob()[..8], &[2, 0, 0, 0, 2, 0, 0, 0]);
    }
}
