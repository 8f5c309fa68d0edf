//! Windows and the short-time Fourier transform
//! `V_w f(x, xi) = int f(t) conj(w(t - x)) e^{-i xi.t} dt` on the full product lattice
//! (every spatial node times every dual node).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, forward_fourier, inverse_fourier, BandLimited, Direction, GridSpec, SampledField, Transform};
use crate::profiles;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Gaussian,
    CompactBump,
    Triangular,
    /// Obtained from another window, e.g. its Fourier image.
    Derived,
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(WindowKind::Gaussian),
            "compact_bump" | "bump" => Ok(WindowKind::CompactBump),
            "triangular" | "triangle" => Ok(WindowKind::Triangular),
            other => Err(Error::Config(format!("unknown window kind `{other}`"))),
        }
    }
}

/// A nonzero window sampled on the grid, centred at the origin.
#[derive(Clone, Debug)]
pub struct Window {
    kind: WindowKind,
    field: SampledField,
    support_radius: Option<f64>,
    tag: String,
}

impl Window {
    /// `e^{-|t|^2/2}`.
    pub fn gaussian(spec: GridSpec) -> Self {
        let field = SampledField::from_real_fn(spec, |p| (-0.5 * p.iter().map(|v| v * v).sum::<f64>()).exp())
            .expect("gaussian samples are finite");
        Window { kind: WindowKind::Gaussian, field, support_radius: None, tag: "gaussian".into() }
    }

    /// Smooth bump supported in the Euclidean ball of the given radius.
    pub fn compact_bump(spec: GridSpec, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < spec.half_width()) {
            return Err(Error::InvalidArgument(format!("bump radius {radius} must lie in (0, L)")));
        }
        let field = SampledField::from_real_fn(spec, |p| profiles::bump(p.norm() / radius))?;
        Self::checked(WindowKind::CompactBump, field, Some(radius), format!("compact_bump(r={radius})"))
    }

    /// Tensor triangle `prod max(1 - |t_i|, 0)`.
    pub fn triangular(spec: GridSpec) -> Self {
        let field = SampledField::from_real_fn(spec, |p| p.iter().map(|&t| profiles::triangle(t)).product())
            .expect("triangle samples are finite");
        Window { kind: WindowKind::Triangular, field, support_radius: Some(1.0), tag: "triangular".into() }
    }

    pub fn new(kind: WindowKind, spec: GridSpec, radius: Option<f64>) -> Result<Self> {
        match kind {
            WindowKind::Gaussian => Ok(Self::gaussian(spec)),
            WindowKind::CompactBump => Self::compact_bump(spec, radius.unwrap_or(1.0)),
            WindowKind::Triangular => Ok(Self::triangular(spec)),
            WindowKind::Derived => Err(Error::InvalidArgument("derived windows come from from_field".into())),
        }
    }

    /// Wraps an arbitrary nonzero field as a window.
    pub fn from_field(field: SampledField, tag: impl Into<String>) -> Result<Self> {
        Self::checked(WindowKind::Derived, field, None, tag.into())
    }

    fn checked(kind: WindowKind, field: SampledField, support_radius: Option<f64>, tag: String) -> Result<Self> {
        if field.is_zero() {
            return Err(Error::Degenerate(format!("window `{tag}` vanishes on the grid")));
        }
        Ok(Window { kind, field, support_radius, tag })
    }

    /// The window `F w` on the dual grid.
    pub fn fourier_image(&self) -> Window {
        Window {
            kind: WindowKind::Derived,
            field: forward_fourier(&self.field),
            support_radius: None,
            tag: format!("F[{}]", self.tag),
        }
    }

    /// The window `F^{-1} w` on the dual grid.
    pub fn inverse_fourier_image(&self) -> Window {
        Window {
            kind: WindowKind::Derived,
            field: inverse_fourier(&self.field),
            support_radius: None,
            tag: format!("F^-1[{}]", self.tag),
        }
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn field(&self) -> &SampledField {
        &self.field
    }

    pub fn spec(&self) -> &GridSpec {
        self.field.spec()
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }
}

/// `V_w f` sampled at `(x_m, xi_k)`, stored row-major with one row per spatial node.
#[derive(Clone, Debug)]
pub struct StftArray {
    spec: GridSpec,
    values: Vec<Complex64>,
    window_tag: String,
}

impl StftArray {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, window_tag: impl Into<String>) -> Result<Self> {
        let expected = spec.len() * spec.len();
        if values.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: values.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("stft entry".into()));
        }
        Ok(StftArray { spec, values, window_tag: window_tag.into() })
    }

    /// Spatial grid; frequencies live on `spec().dual()`.
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn dual_spec(&self) -> GridSpec {
        self.spec.dual()
    }

    pub fn window_tag(&self) -> &str {
        &self.window_tag
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of spatial (equivalently frequency) nodes.
    pub fn nodes(&self) -> usize {
        self.spec.len()
    }

    #[inline]
    pub fn get(&self, x_node: usize, xi_node: usize) -> Complex64 {
        self.values[x_node * self.spec.len() + xi_node]
    }

    pub fn row(&self, x_node: usize) -> &[Complex64] {
        let n = self.spec.len();
        &self.values[x_node * n..(x_node + 1) * n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, Complex64> {
        self.values.chunks_exact(self.spec.len())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    /// Blob with a `2n`-dimensional shape header.
    pub fn to_blob(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(20 + 16 * self.values.len());
        grid::write_blob(&mut out, 2 * self.spec.dim() as u32, &self.spec, &self.values).expect("in-memory write");
        out
    }

    pub fn from_blob(bytes: &[u8], window_tag: impl Into<String>) -> Result<Self> {
        let (rank, spec, values) = grid::read_blob(&mut &bytes[..])?;
        if rank as usize != 2 * spec.dim() {
            return Err(Error::InvalidArgument(format!("blob rank {rank} is not a time-frequency rank")));
        }
        Self::new(spec, values, window_tag)
    }
}

/// Index of the node `t_j - x_m` relative to a window centred at node `N/2` (periodic).
#[inline]
pub(crate) fn shifted_index(spec: &GridSpec, j: usize, m: usize) -> usize {
    let n = spec.points_per_axis();
    let (ji, mi) = (spec.unflatten(j), spec.unflatten(m));
    let mut idx = [0; 2];
    for a in 0..spec.dim() {
        idx[a] = (ji[a] + n + n / 2 - mi[a]) % n;
    }
    spec.flatten(idx)
}

/// Computes `V_w f` with one FFT per spatial node (rows run in parallel).
pub fn stft(f: &SampledField, w: &Window) -> Result<StftArray> {
    let spec = *f.spec();
    spec.ensure_compatible(w.spec(), "stft window")?;
    let len = spec.len();
    let wc: Vec<Complex64> = w.field.values().iter().map(|v| v.conj()).collect();
    let fv = f.values();
    let transform = Transform::new(&spec, Direction::Forward);
    let mut values = vec![Complex64::new(0.0, 0.0); len * len];
    values.par_chunks_mut(len).enumerate().for_each(|(m, row)| {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = fv[j] * wc[shifted_index(&spec, j, m)];
        }
        transform.apply_in_place(row);
    });
    Ok(StftArray { spec, values, window_tag: w.tag.clone() })
}

/// `max | |V_w f(x, xi)| - (2 pi)^{-n} |V_{F w} F f(xi, -x)| |` over the lattice.
pub fn check_fourier_covariance(f: &SampledField, w: &Window) -> Result<f64> {
    let direct = stft(f, w)?;
    let dual = stft(&forward_fourier(f), &w.fourier_image())?;
    let spec = direct.spec;
    let len = spec.len();
    let c = (2.0 * PI).powi(-(spec.dim() as i32));
    let dev = (0..len)
        .into_par_iter()
        .map(|m| {
            let refl = spec.reflect_index(m);
            (0..len).fold(0.0_f64, |acc, k| acc.max((direct.get(m, k).norm() - c * dual.get(k, refl).norm()).abs()))
        })
        .reduce(|| 0.0, f64::max);
    Ok(dev)
}

/// `M_eta T_y f`, i.e. `t -> e^{i eta.t} f(t - y)`.
///
/// `eta` must be a multiple of the dual spacing. `y` must be a multiple of the grid
/// spacing unless `interpolate` is set, in which case the periodic trigonometric
/// interpolant supplies the off-grid values.
pub fn time_frequency_shift(f: &SampledField, y: &[f64], eta: &[f64], interpolate: bool) -> Result<SampledField> {
    let spec = *f.spec();
    if y.len() != spec.dim() || eta.len() != spec.dim() {
        return Err(Error::Dimension(y.len()));
    }
    for &e in eta {
        if GridSpec::is_multiple(e, spec.frequency_spacing()).is_none() {
            return Err(Error::OffGrid(format!("modulation {e} is not on the dual lattice")));
        }
    }
    let steps: Option<Vec<i64>> = y.iter().map(|&v| GridSpec::is_multiple(v, spec.spacing())).collect();
    let n = spec.points_per_axis() as i64;
    let translated = match steps {
        Some(steps) => {
            let values = (0..spec.len())
                .map(|j| {
                    let ji = spec.unflatten(j);
                    let mut src = [0; 2];
                    for a in 0..spec.dim() {
                        src[a] = (ji[a] as i64 - steps[a]).rem_euclid(n) as usize;
                    }
                    f.values()[spec.flatten(src)]
                })
                .collect();
            SampledField::from_parts(spec, values)
        }
        None if interpolate => {
            let interp = BandLimited::new(f);
            let period = 2.0 * spec.half_width();
            let values = (0..spec.len())
                .into_par_iter()
                .map(|j| {
                    let p = spec.point(j);
                    let mut q = [0.0; 2];
                    for a in 0..spec.dim() {
                        q[a] = (p[a] - y[a] + spec.half_width()).rem_euclid(period) - spec.half_width();
                    }
                    interp.eval_unchecked(&q[..spec.dim()])
                })
                .collect();
            SampledField::from_parts(spec, values)
        }
        None => return Err(Error::OffGrid(format!("translation {y:?} is not a multiple of the grid spacing"))),
    };
    Ok(translated.mul_fn(|p| Complex64::from_polar(1.0, p.dot(eta))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::lp_norm;
    use crate::Exponent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn packet(spec: GridSpec, c: f64, xi: f64) -> SampledField {
        SampledField::from_fn(spec, |p| Complex64::from_polar((-(p[0] - c).powi(2)).exp(), xi * p[0])).unwrap()
    }

    #[test]
    fn window_invariants() {
        let s = GridSpec::new(1, 8.0, 64).unwrap();
        let tri = Window::triangular(s);
        for (i, v) in tri.field().values().iter().enumerate() {
            let t = s.coordinate(i);
            assert!((v.re - (1.0 - t.abs()).max(0.0)).abs() < 1e-15);
        }
        let b = Window::compact_bump(s, 1.0).unwrap();
        for (i, v) in b.field().values().iter().enumerate() {
            if s.coordinate(i).abs() >= 1.0 {
                assert!(v.norm() < 1e-14);
            }
        }
        assert!(Window::compact_bump(s, 0.0).is_err());
        let zero = SampledField::zeros(s);
        assert!(Window::from_field(zero, "zero").is_err());
    }

    #[test]
    fn stft_at_origin_is_window_energy() {
        let s = GridSpec::new(1, 10.0, 128).unwrap();
        let w = Window::gaussian(s);
        let v = stft(w.field(), &w).unwrap();
        let origin = s.points_per_axis() / 2;
        let xi0 = s.points_per_axis() / 2;
        let energy = lp_norm(w.field(), Exponent::TWO).powi(2);
        assert!((v.get(origin, xi0) - energy).norm() < 1e-8);
    }

    #[test]
    fn stft_of_zero() {
        let s = GridSpec::new(2, 4.0, 8).unwrap();
        let v = stft(&SampledField::zeros(s), &Window::gaussian(s)).unwrap();
        assert_eq!(v.max_abs(), 0.0);
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let s = GridSpec::new(1, 4.0, 16).unwrap();
        let t = GridSpec::new(1, 5.0, 16).unwrap();
        assert!(matches!(stft(&SampledField::zeros(s), &Window::gaussian(t)), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn linear_in_f_conjugate_linear_in_window() {
        let s = GridSpec::new(1, 6.0, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = packet(s, 0.5, 1.0);
        let g = packet(s, -1.0, -2.0);
        let a = Complex64::new(rng.gen(), rng.gen());
        let b = Complex64::new(rng.gen(), rng.gen());
        let w = Window::gaussian(s);
        let u = Window::compact_bump(s, 2.0).unwrap();
        let lhs = stft(&f.combine(a, &g, b).unwrap(), &w).unwrap();
        let (vf, vg) = (stft(&f, &w).unwrap(), stft(&g, &w).unwrap());
        let wu = Window::from_field(w.field().combine(a, u.field(), b).unwrap(), "mix").unwrap();
        let lhs_w = stft(&f, &wu).unwrap();
        let vu = stft(&f, &u).unwrap();
        for i in 0..lhs.values().len() {
            let rhs = a * vf.values()[i] + b * vg.values()[i];
            assert!((lhs.values()[i] - rhs).norm() < 1e-12);
            let rhs_w = a.conj() * vf.values()[i] + b.conj() * vu.values()[i];
            assert!((lhs_w.values()[i] - rhs_w).norm() < 1e-12);
        }
    }

    #[test]
    fn covariance_for_gaussians() {
        let s = GridSpec::balanced(1, 128).unwrap();
        let f = packet(s, 1.0, 0.5);
        assert!(check_fourier_covariance(&f, &Window::gaussian(s)).unwrap() < 1e-7);
        assert_eq!(check_fourier_covariance(&SampledField::zeros(s), &Window::gaussian(s)).unwrap(), 0.0);
    }

    #[test]
    fn shifts() {
        let s = GridSpec::new(1, 8.0, 64).unwrap();
        let f = packet(s, 0.0, 0.0);
        let same = time_frequency_shift(&f, &[0.0], &[0.0], false).unwrap();
        assert_eq!(same.values(), f.values());
        let h = s.spacing();
        let once = time_frequency_shift(&time_frequency_shift(&f, &[3.0 * h], &[0.0], false).unwrap(), &[5.0 * h], &[0.0], false).unwrap();
        let direct = time_frequency_shift(&f, &[8.0 * h], &[0.0], false).unwrap();
        assert_eq!(once.values(), direct.values());
        assert!(matches!(time_frequency_shift(&f, &[0.3 * h], &[0.0], false), Err(Error::OffGrid(_))));
        assert!(matches!(time_frequency_shift(&f, &[0.0], &[0.1], false), Err(Error::OffGrid(_))));
        let interp = time_frequency_shift(&f, &[0.3], &[0.0], true).unwrap();
        let exact = packet(s, 0.3, 0.0);
        assert!(interp.max_abs_diff(&exact) < 1e-9);
    }

    #[test]
    fn stft_covariance_under_shifts() {
        let s = GridSpec::new(1, 8.0, 32).unwrap();
        let f = packet(s, 0.5, 1.0);
        let w = Window::gaussian(s);
        let (dy, dk) = (3usize, 2usize);
        let y = dy as f64 * s.spacing();
        let eta = dk as f64 * s.frequency_spacing();
        let shifted = stft(&time_frequency_shift(&f, &[y], &[eta], false).unwrap(), &w).unwrap();
        let base = stft(&f, &w).unwrap();
        let n = s.points_per_axis();
        for m in 0..n {
            for k in 0..n {
                let a = shifted.get(m, k).norm();
                let b = base.get((m + n - dy) % n, (k + n - dk) % n).norm();
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn blob_roundtrip() {
        let s = GridSpec::new(1, 4.0, 8).unwrap();
        let v = stft(&packet(s, 0.0, 0.0), &Window::gaussian(s)).unwrap();
        let back = StftArray::from_blob(&v.to_blob(), "gaussian").unwrap();
        assert_eq!(back.values(), v.values());
        assert!(SampledField::from_blob(&v.to_blob()).is_err());
    }
}
