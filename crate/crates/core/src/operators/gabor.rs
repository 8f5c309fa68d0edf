//! Gabor synthesis `sum c_{j,k} e^{i x . xi_k} chi(x - x_j)` over finite lattice boxes and the
//! mixed coefficient norms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{GridSpec, SampledField};
use crate::spaces::modulation_norm;
use crate::stft::Window;

/// Lattices `x_j = alpha j`, `xi_k = beta k` for `j, k` in `{-J, ..., J}^n`, with an atom `chi`.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    spec: GridSpec,
    alpha: f64,
    beta: f64,
    radius: usize,
    alpha_steps: i64,
    atom: Window,
}

impl GaborSystem {
    pub fn new(atom: Window, alpha: f64, beta: f64, radius: usize) -> Result<Self> {
        let spec = *atom.spec();
        let alpha_steps = GridSpec::is_multiple(alpha, spec.spacing())
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::OffGrid(format!("translation step {alpha} is not a positive multiple of h")))?;
        GridSpec::is_multiple(beta, spec.frequency_spacing())
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::OffGrid(format!("modulation step {beta} is not a positive multiple of pi/L")))?;
        Ok(GaborSystem { spec, alpha, beta, radius, alpha_steps, atom })
    }

    /// Default lattice: `alpha = 1` rounded to the grid, `beta` the dual-grid multiple nearest 1.
    pub fn with_default_lattice(atom: Window, radius: usize) -> Result<Self> {
        let spec = *atom.spec();
        let alpha = (1.0 / spec.spacing()).round().max(1.0) * spec.spacing();
        let beta = (1.0 / spec.frequency_spacing()).round().max(1.0) * spec.frequency_spacing();
        Self::new(atom, alpha, beta, radius)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn atom(&self) -> &Window {
        &self.atom
    }

    /// Number of lattice points per index set, `(2J + 1)^n`.
    pub fn index_count(&self) -> usize {
        (2 * self.radius + 1).pow(self.spec.dim() as u32)
    }

    /// Multi-index of a flat lattice index.
    pub fn index(&self, flat: usize) -> [i64; 2] {
        let side = 2 * self.radius + 1;
        let r = self.radius as i64;
        match self.spec.dim() {
            1 => [flat as i64 - r, 0],
            _ => [(flat / side) as i64 - r, (flat % side) as i64 - r],
        }
    }

    pub fn random_coefficients(&self, seed: u64) -> GaborCoefficients {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.index_count();
        let values = (0..m * m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        GaborCoefficients { count: m, values }
    }
}

/// `c_{j,k}` stored with `j` (translation) as the slow index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaborCoefficients {
    count: usize,
    values: Vec<Complex64>,
}

impl GaborCoefficients {
    pub fn new(sys: &GaborSystem, values: Vec<Complex64>) -> Result<Self> {
        let count = sys.index_count();
        if values.len() != count * count {
            return Err(Error::ShapeMismatch { expected: count * count, got: values.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("gabor coefficient".into()));
        }
        Ok(GaborCoefficients { count, values })
    }

    pub fn zeros(sys: &GaborSystem) -> Self {
        let count = sys.index_count();
        GaborCoefficients { count, values: vec![Complex64::new(0.0, 0.0); count * count] }
    }

    /// Coefficient with `c_{0,0} = 1` and all others zero.
    pub fn unit(sys: &GaborSystem) -> Self {
        let mut c = Self::zeros(sys);
        let centre = c.count / 2;
        c.values[centre * c.count + centre] = Complex64::new(1.0, 0.0);
        c
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.count + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: Complex64) {
        self.values[j * self.count + k] = v;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        GaborCoefficients { count: self.count, values }
    }
}

/// `sum_{j,k} c_{j,k} e^{i x . xi_k} chi(x - x_j)` on the atom's grid (translates wrap periodically).
pub fn gabor_synthesize(sys: &GaborSystem, c: &GaborCoefficients) -> Result<SampledField> {
    if c.count != sys.index_count() {
        return Err(Error::ShapeMismatch { expected: sys.index_count(), got: c.count });
    }
    let spec = sys.spec;
    let (dim, n) = (spec.dim(), spec.points_per_axis() as i64);
    let chi = sys.atom.field().values();
    let m = sys.index_count();
    let freqs: Vec<[f64; 2]> = (0..m).map(|k| {
        let idx = sys.index(k);
        [idx[0] as f64 * sys.beta, idx[1] as f64 * sys.beta]
    }).collect();
    let values = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let x = spec.point(i);
            let xi_idx = spec.unflatten(i);
            let waves: Vec<Complex64> = freqs.iter().map(|f| Complex64::from_polar(1.0, x.dot(&f[..dim]))).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                let shift = sys.index(j);
                let mut src = [0usize; 2];
                for a in 0..dim {
                    src[a] = (xi_idx[a] as i64 - shift[a] * sys.alpha_steps).rem_euclid(n) as usize;
                }
                let atom = chi[spec.flatten(src)];
                if atom.norm() == 0.0 {
                    continue;
                }
                let row = &c.values[j * m..(j + 1) * m];
                let s: Complex64 = row.iter().zip(&waves).map(|(cv, w)| cv * w).sum();
                acc += s * atom;
            }
            acc
        })
        .collect();
    SampledField::new(spec, values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientOrdering {
    /// `(sum_k (sum_j |c|^p)^{q/p})^{1/q}`.
    L1,
    /// `(sum_j (sum_k |c|^q)^{p/q})^{1/p}`.
    L2,
}

fn lq(values: impl Iterator<Item = f64>, p: Exponent) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        values.map(|v| v.powf(p.value())).sum::<f64>().powf(p.reciprocal())
    }
}

pub fn gabor_coeff_norm(c: &GaborCoefficients, p: Exponent, q: Exponent, ordering: CoefficientOrdering) -> f64 {
    let m = c.count;
    match ordering {
        CoefficientOrdering::L1 => lq((0..m).map(|k| lq((0..m).map(|j| c.get(j, k).norm()), p)), q),
        CoefficientOrdering::L2 => lq((0..m).map(|j| lq((0..m).map(|k| c.get(j, k).norm()), q)), p),
    }
}

/// `||synthesis||_{M^{p,q}} / (||c||_{l_1^{p,q}} ||chi||_{M^{p0}})` with `p0 = min(p, p', q, q')`.
pub fn gabor_bound_ratio(sys: &GaborSystem, c: &GaborCoefficients, window: &Window, p: Exponent, q: Exponent) -> Result<f64> {
    let p0 = p.min(p.conjugate()).min(q).min(q.conjugate());
    let cn = gabor_coeff_norm(c, p, q, CoefficientOrdering::L1);
    if cn == 0.0 {
        return Err(Error::Degenerate("zero coefficient array".into()));
    }
    let atom = modulation_norm(sys.atom.field(), window, p0, p0, None)?;
    let synth = modulation_norm(&gabor_synthesize(sys, c)?, window, p, q, None)?;
    Ok(synth / (cn * atom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(dim: usize, n: usize, radius: usize) -> GaborSystem {
        let spec = GridSpec::new(dim, 8.0, n).unwrap();
        GaborSystem::with_default_lattice(Window::gaussian(spec), radius).unwrap()
    }

    #[test]
    fn unit_coefficient_reproduces_atom() {
        let sys = system(1, 64, 2);
        let c = GaborCoefficients::unit(&sys);
        let g = gabor_synthesize(&sys, &c).unwrap();
        assert!(g.max_abs_diff(sys.atom().field()) < 1e-15);
        for ord in [CoefficientOrdering::L1, CoefficientOrdering::L2] {
            assert_eq!(gabor_coeff_norm(&c, Exponent::TWO, Exponent::new(3.0).unwrap(), ord), 1.0);
        }
    }

    #[test]
    fn off_grid_lattice_is_rejected() {
        let spec = GridSpec::new(1, 8.0, 64).unwrap();
        assert!(matches!(GaborSystem::new(Window::gaussian(spec), 0.3, 1.0, 1), Err(Error::OffGrid(_))));
    }

    #[test]
    fn synthesis_is_linear_and_orderings_agree_for_equal_exponents() {
        let sys = system(2, 16, 1);
        let (a, b) = (sys.random_coefficients(1), sys.random_coefficients(2));
        let (x, y) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let lhs = gabor_synthesize(&sys, &a.combine(x, &b, y)).unwrap();
        let rhs = gabor_synthesize(&sys, &a).unwrap().combine(x, &gabor_synthesize(&sys, &b).unwrap(), y).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let p = Exponent::new(1.7).unwrap();
        let (l1, l2) = (gabor_coeff_norm(&a, p, p, CoefficientOrdering::L1), gabor_coeff_norm(&a, p, p, CoefficientOrdering::L2));
        assert!((l1 - l2).abs() < 1e-12 * l1);
    }
}
