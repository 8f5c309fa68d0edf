//! Positive weights on `R^d` (typically `d = 2n`, arguments `(x, xi)`), sampled
//! moderateness checks, and the weighted embedding / product / convolution tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{forward_fourier, inverse_fourier, SampledField};
use crate::spaces::{fourier_lebesgue_norm, lp_norm_weighted, modulation_norm, wiener_norm};
use crate::stft::Window;

fn euclid(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Constant(f64),
    /// `(1 + |z|)^s` on the whole argument.
    BracketPower { s: f64 },
    /// `w_x(x) * w_xi(xi)`, the argument split in half.
    Separable { x: Box<Weight>, xi: Box<Weight> },
    /// `w(-b, a)` at `(a, b)`: the weight attached to the Fourier side.
    Swapped(Box<Weight>),
    /// `e^{rate |z|}`; moderate only with an exponential moderator.
    Exponential { rate: f64 },
}

impl Weight {
    pub fn constant(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(Weight::Constant(c))
        } else {
            Err(Error::Weight(format!("constant weight must be positive, got {c}")))
        }
    }

    pub fn one() -> Self {
        Weight::Constant(1.0)
    }

    pub fn bracket_power(s: f64) -> Self {
        Weight::BracketPower { s }
    }

    pub fn separable(x: Weight, xi: Weight) -> Self {
        Weight::Separable { x: Box::new(x), xi: Box::new(xi) }
    }

    /// `w(x, xi) = w0(x)`.
    pub fn spatial(w0: Weight) -> Self {
        Self::separable(w0, Weight::one())
    }

    /// `w(x, xi) = w0(xi)`.
    pub fn frequency(w0: Weight) -> Self {
        Self::separable(Weight::one(), w0)
    }

    /// The weight `w0` with `w0(xi, -x) = w(x, xi)`.
    pub fn swapped(self) -> Self {
        Weight::Swapped(Box::new(self))
    }

    pub fn is_one(&self) -> bool {
        match self {
            Weight::Constant(c) => *c == 1.0,
            Weight::BracketPower { s } => *s == 0.0,
            Weight::Separable { x, xi } => x.is_one() && xi.is_one(),
            Weight::Swapped(w) => w.is_one(),
            Weight::Exponential { rate } => *rate == 0.0,
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        match self {
            Weight::Constant(c) => *c,
            Weight::BracketPower { s } => (1.0 + euclid(z)).powf(*s),
            Weight::Separable { x, xi } => {
                let (a, b) = z.split_at(z.len() / 2);
                x.eval(a) * xi.eval(b)
            }
            Weight::Swapped(w) => {
                let half = z.len() / 2;
                let mut buf = [0.0; 4];
                for i in 0..half {
                    buf[i] = -z[half + i];
                    buf[half + i] = z[i];
                }
                w.eval(&buf[..z.len()])
            }
            Weight::Exponential { rate } => (rate * euclid(z)).exp(),
        }
    }

    /// Declared polynomial envelope `(c, d)`: `c^{-1} (1+|z|)^{-d} <= w(z) <= c (1+|z|)^d`.
    pub fn polynomial_envelope(&self) -> Option<(f64, f64)> {
        match self {
            Weight::Constant(c) => Some((c.max(1.0 / c), 0.0)),
            Weight::BracketPower { s } => Some((1.0, s.abs())),
            Weight::Separable { x, xi } => {
                let (cx, dx) = x.polynomial_envelope()?;
                let (cy, dy) = xi.polynomial_envelope()?;
                Some((cx * cy, dx + dy))
            }
            Weight::Swapped(w) => w.polynomial_envelope(),
            Weight::Exponential { rate } if *rate == 0.0 => Some((1.0, 0.0)),
            Weight::Exponential { .. } => None,
        }
    }

    /// Checks the declared envelope at random points of `[-radius, radius]^dim`.
    pub fn check_polynomial_bound(&self, dim: usize, samples: usize, radius: f64, seed: u64) -> Result<bool> {
        let Some((c, d)) = self.polynomial_envelope() else {
            return Ok(false);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = vec![0.0; dim];
        for _ in 0..samples {
            z.iter_mut().for_each(|v| *v = rng.gen_range(-radius..=radius));
            let w = self.checked_eval(&z)?;
            let p = c * (1.0 + euclid(&z)).powf(d);
            if w > p * (1.0 + 1e-12) || w * p < 1.0 - 1e-12 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn checked_eval(&self, z: &[f64]) -> Result<f64> {
        let w = self.eval(z);
        if w > 0.0 && w.is_finite() {
            Ok(w)
        } else {
            Err(Error::Weight(format!("weight value {w} at {z:?} is not positive and finite")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moderation {
    /// No sampled pair violated `w(z+y) <= C w(z) v(y)` for a finite `C`.
    pub holds: bool,
    /// Largest sampled `w(z+y) / (w(z) v(y))`.
    pub best_c: f64,
}

/// Samples `(z, y)` pairs in `[-radius, radius]^dim` and records the largest moderateness ratio.
pub fn check_moderate(w: &Weight, v: &Weight, dim: usize, samples: usize, radius: f64, seed: u64) -> Result<Moderation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut z, mut y, mut zy) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut best = 0.0_f64;
    for _ in 0..samples {
        for i in 0..dim {
            z[i] = rng.gen_range(-radius..=radius);
            y[i] = rng.gen_range(-radius..=radius);
            zy[i] = z[i] + y[i];
        }
        let ratio = w.checked_eval(&zy)? / (w.checked_eval(&z)? * v.checked_eval(&y)?);
        best = best.max(ratio);
    }
    Ok(Moderation { holds: best.is_finite(), best_c: best })
}

/// Which family of embeddings in the weighted chain to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainLine {
    /// `M^{p,q1}_(w) in L^p_(w0) in M^{p,q2}_(w)` with `w(x, xi) = w0(x)`.
    ModulationLebesgue,
    /// `M^{p1,q}_(w) in FL^q_(w0) in M^{p2,q}_(w)` with `w(x, xi) = w0(xi)`.
    ModulationFourierLebesgue,
    /// `W^{p,q1}_(w) in L^p_(w0) in W^{p,q2}_(w)` with `w(x, xi) = w0(x)`.
    WienerLebesgue,
    /// `W^{p1,q}_(w) in FL^q_(w0) in W^{p2,q}_(w)` with `w(x, xi) = w0(xi)`.
    WienerFourierLebesgue,
}

impl ChainLine {
    pub const ALL: [ChainLine; 4] = [
        ChainLine::ModulationLebesgue,
        ChainLine::ModulationFourierLebesgue,
        ChainLine::WienerLebesgue,
        ChainLine::WienerFourierLebesgue,
    ];

    fn spatial(self) -> bool {
        matches!(self, ChainLine::ModulationLebesgue | ChainLine::WienerLebesgue)
    }
}

/// Exponents of one chain: `fixed` is the shared exponent (`p` on the Lebesgue lines,
/// `q` on the Fourier-Lebesgue lines), `inner <= min(e, e')` and `outer >= max(e, e')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainExponents {
    pub fixed: Exponent,
    pub inner: Exponent,
    pub outer: Exponent,
}

impl ChainExponents {
    pub fn new(fixed: Exponent, inner: Exponent, outer: Exponent) -> Result<Self> {
        let (lo, hi) = (fixed.min(fixed.conjugate()), fixed.max(fixed.conjugate()));
        if inner.value() > lo.value() * (1.0 + 1e-12) {
            return Err(Error::ExponentLaw(format!("inner exponent {inner} exceeds min({fixed}, {})", fixed.conjugate())));
        }
        if outer.value() < hi.value() * (1.0 - 1e-12) {
            return Err(Error::ExponentLaw(format!("outer exponent {outer} is below max({fixed}, {})", fixed.conjugate())));
        }
        Ok(ChainExponents { fixed, inner, outer })
    }

    /// The extremal admissible choice `inner = min(e, e')`, `outer = max(e, e')`.
    pub fn sharp(fixed: Exponent) -> Self {
        ChainExponents { fixed, inner: fixed.min(fixed.conjugate()), outer: fixed.max(fixed.conjugate()) }
    }
}

/// Norms of one field along one chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainRow {
    pub small: f64,
    pub middle: f64,
    pub large: f64,
}

impl ChainRow {
    /// `middle / small`, bounded when the left embedding holds.
    pub fn left_ratio(&self) -> f64 {
        self.middle / self.small
    }

    /// `large / middle`, bounded when the right embedding holds.
    pub fn right_ratio(&self) -> f64 {
        self.large / self.middle
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainTable {
    pub line: ChainLine,
    pub exponents: ChainExponents,
    pub rows: Vec<ChainRow>,
}

impl ChainTable {
    pub fn max_left(&self) -> f64 {
        self.rows.iter().map(ChainRow::left_ratio).fold(0.0, f64::max)
    }

    pub fn max_right(&self) -> f64 {
        self.rows.iter().map(ChainRow::right_ratio).fold(0.0, f64::max)
    }
}

/// Evaluates the three norms of one embedding chain for each corpus member; `w0` is the
/// weight on `R^n` and is placed on `x` or `xi` as the line requires.
pub fn weighted_embedding_chain_test(
    corpus: &[SampledField],
    window: &Window,
    line: ChainLine,
    exponents: ChainExponents,
    w0: &Weight,
) -> Result<ChainTable> {
    ChainExponents::new(exponents.fixed, exponents.inner, exponents.outer)?;
    let w = if line.spatial() { Weight::spatial(w0.clone()) } else { Weight::frequency(w0.clone()) };
    let ChainExponents { fixed, inner, outer } = exponents;
    let rows = corpus
        .iter()
        .map(|f| {
            let (small, large) = match line {
                ChainLine::ModulationLebesgue => {
                    (modulation_norm(f, window, fixed, inner, Some(&w))?, modulation_norm(f, window, fixed, outer, Some(&w))?)
                }
                ChainLine::WienerLebesgue => {
                    (wiener_norm(f, window, fixed, inner, Some(&w))?, wiener_norm(f, window, fixed, outer, Some(&w))?)
                }
                ChainLine::ModulationFourierLebesgue => {
                    (modulation_norm(f, window, inner, fixed, Some(&w))?, modulation_norm(f, window, outer, fixed, Some(&w))?)
                }
                ChainLine::WienerFourierLebesgue => {
                    (wiener_norm(f, window, inner, fixed, Some(&w))?, wiener_norm(f, window, outer, fixed, Some(&w))?)
                }
            };
            let middle = if line.spatial() {
                lp_norm_weighted(f, fixed, Some(w0))?
            } else {
                fourier_lebesgue_norm(f, fixed, Some(w0))?
            };
            if small == 0.0 || middle == 0.0 {
                return Err(Error::Degenerate("zero field in embedding corpus".into()));
            }
            Ok(ChainRow { small, middle, large })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainTable { line, exponents, rows })
}

fn pair_sum(pairs: &[(Exponent, Exponent)]) -> (f64, f64) {
    pairs.iter().fold((0.0, 0.0), |(a, b), (p, q)| (a + p.reciprocal(), b + q.reciprocal()))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Checks `sum 1/p_j = 1/p0` and `sum 1/q_j = N - 1 + 1/q0`.
pub fn check_product_exponents(factors: &[(Exponent, Exponent)], target: (Exponent, Exponent)) -> Result<()> {
    let (sp, sq) = pair_sum(factors);
    let n = factors.len() as f64;
    if !close(sp, target.0.reciprocal()) || !close(sq, n - 1.0 + target.1.reciprocal()) {
        return Err(Error::ExponentLaw(format!("product exponents {factors:?} do not yield ({}, {})", target.0, target.1)));
    }
    Ok(())
}

/// Checks `sum 1/p_j = N - 1 + 1/p0` and `sum 1/q_j = 1/q0`.
pub fn check_convolution_exponents(factors: &[(Exponent, Exponent)], target: (Exponent, Exponent)) -> Result<()> {
    let (sp, sq) = pair_sum(factors);
    let n = factors.len() as f64;
    if !close(sp, n - 1.0 + target.0.reciprocal()) || !close(sq, target.1.reciprocal()) {
        return Err(Error::ExponentLaw(format!("convolution exponents {factors:?} do not yield ({}, {})", target.0, target.1)));
    }
    Ok(())
}

fn target_from(r0: f64, r1: f64) -> Result<(Exponent, Exponent)> {
    Ok((Exponent::from_reciprocal(r0)?, Exponent::from_reciprocal(r1)?))
}

/// The target `(p0, q0)` forced by the product law, if it lies in `[1, inf]^2`.
pub fn product_target(factors: &[(Exponent, Exponent)]) -> Result<(Exponent, Exponent)> {
    let (sp, sq) = pair_sum(factors);
    target_from(sp, sq - (factors.len() as f64 - 1.0))
}

/// The target `(p0, q0)` forced by the convolution law, if it lies in `[1, inf]^2`.
pub fn convolution_target(factors: &[(Exponent, Exponent)]) -> Result<(Exponent, Exponent)> {
    let (sp, sq) = pair_sum(factors);
    target_from(sp - (factors.len() as f64 - 1.0), sq)
}

/// Largest sampled `w0(a) / (w1(b) w2(c))` over the compatibility pattern of the bound
/// (`xi` split for products, `x` split for convolutions), on `R^{2n}` with the given `n`.
pub fn weight_compatibility(
    w0: &Weight,
    w1: &Weight,
    w2: &Weight,
    n: usize,
    convolution: bool,
    samples: usize,
    radius: f64,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    let (mut z0, mut z1, mut z2) = (vec![0.0; 2 * n], vec![0.0; 2 * n], vec![0.0; 2 * n]);
    // The shared half (x for products, xi for convolutions) starts at `shared`.
    let (shared, split) = if convolution { (n, 0) } else { (0, n) };
    for _ in 0..samples {
        for i in 0..n {
            let s = rng.gen_range(-radius..=radius);
            let (a, b) = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
            z0[shared + i] = s;
            z1[shared + i] = s;
            z2[shared + i] = s;
            z0[split + i] = a + b;
            z1[split + i] = a;
            z2[split + i] = b;
        }
        best = best.max(w0.checked_eval(&z0)? / (w1.checked_eval(&z1)? * w2.checked_eval(&z2)?));
    }
    Ok(best)
}

/// One factor of a bilinear bound: a field with its exponents and weight.
#[derive(Clone, Debug)]
pub struct Factor<'a> {
    pub field: &'a SampledField,
    pub p: Exponent,
    pub q: Exponent,
    pub weight: Option<&'a Weight>,
}

/// Which norm family the bilinear bound is evaluated in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Modulation,
    Wiener,
}

fn family_norm(family: Family, f: &SampledField, w: &Window, p: Exponent, q: Exponent, weight: Option<&Weight>) -> Result<f64> {
    match family {
        Family::Modulation => modulation_norm(f, w, p, q, weight),
        Family::Wiener => wiener_norm(f, w, p, q, weight),
    }
}

fn bilinear_ratio(
    family: Family,
    combined: &SampledField,
    window: &Window,
    target: (Exponent, Exponent, Option<&Weight>),
    a: &Factor<'_>,
    b: &Factor<'_>,
) -> Result<f64> {
    let na = family_norm(family, a.field, window, a.p, a.q, a.weight)?;
    let nb = family_norm(family, b.field, window, b.p, b.q, b.weight)?;
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Degenerate("zero factor in bilinear bound".into()));
    }
    Ok(family_norm(family, combined, window, target.0, target.1, target.2)? / (na * nb))
}

/// `||f1 f2||_(p0,q0,w0) / (||f1||_(p1,q1,w1) ||f2||_(p2,q2,w2))` after validating the product law.
pub fn product_bound_test(
    family: Family,
    window: &Window,
    a: &Factor<'_>,
    b: &Factor<'_>,
    target: (Exponent, Exponent),
    target_weight: Option<&Weight>,
) -> Result<f64> {
    check_product_exponents(&[(a.p, a.q), (b.p, b.q)], target)?;
    let product = a.field.mul(b.field)?;
    bilinear_ratio(family, &product, window, (target.0, target.1, target_weight), a, b)
}

/// Periodic grid convolution `(f1 * f2)(x_m) = h^n sum_j f1(x_j) f2(x_m - x_j)`.
pub fn grid_convolution(f1: &SampledField, f2: &SampledField) -> Result<SampledField> {
    f1.spec().ensure_compatible(f2.spec(), "convolution")?;
    // Node sums x_j + x_l wrap onto the grid because e^{-i 2L xi_k} = 1 for even N.
    Ok(inverse_fourier(&forward_fourier(f1).mul(&forward_fourier(f2))?))
}

/// Like [`product_bound_test`] for `f1 * f2` and the convolution law.
pub fn convolution_bound_test(
    family: Family,
    window: &Window,
    a: &Factor<'_>,
    b: &Factor<'_>,
    target: (Exponent, Exponent),
    target_weight: Option<&Weight>,
) -> Result<f64> {
    check_convolution_exponents(&[(a.p, a.q), (b.p, b.q)], target)?;
    let conv = grid_convolution(a.field, b.field)?;
    bilinear_ratio(family, &conv, window, (target.0, target.1, target_weight), a, b)
}
