//! Finitely supported Fourier coefficients on `Z^n`. Every norm here is an exact `l^q` sum,
//! so lattice bijections and unimodular phases are isometries up to rounding of `|c|`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;

pub type LatticePoint = Vec<i64>;

#[derive(Clone, Debug, PartialEq)]
pub struct TorusCoefficients {
    dim: usize,
    entries: BTreeMap<LatticePoint, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Line {
    index: LatticePoint,
    re: f64,
    im: f64,
}

impl TorusCoefficients {
    pub fn new(dim: usize) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::Dimension(dim));
        }
        Ok(TorusCoefficients { dim, entries: BTreeMap::new() })
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (LatticePoint, Complex64)>) -> Result<Self> {
        let mut c = Self::new(dim)?;
        for (k, v) in entries {
            c.insert(k, v)?;
        }
        Ok(c)
    }

    /// `n`-dimensional coefficients with `count` distinct indices in `[-radius, radius]^n`, entries uniform in the unit square.
    pub fn random(dim: usize, count: usize, radius: i64, seed: u64) -> Result<Self> {
        let side = (2 * radius + 1).pow(dim as u32) as usize;
        if count > side {
            return Err(Error::InvalidArgument(format!("{count} indices do not fit in radius {radius}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Self::new(dim)?;
        while c.entries.len() < count {
            let k: LatticePoint = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            c.entries.insert(k, v);
        }
        Ok(c)
    }

    /// Zero values are dropped so that the support stays the set of nonzero entries.
    pub fn insert(&mut self, index: LatticePoint, value: Complex64) -> Result<()> {
        if index.len() != self.dim {
            return Err(Error::ShapeMismatch { expected: self.dim, got: index.len() });
        }
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient at {index:?}")));
        }
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: &[i64]) -> Complex64 {
        self.entries.get(index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Complex64)> {
        self.entries.iter()
    }

    /// `sum_xi c(xi) e^{i x . xi}`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.entries.iter().map(|(k, v)| v * Complex64::from_polar(1.0, k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum())).sum()
    }

    /// One JSON object `{"index": [...], "re": .., "im": ..}` per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.entries {
            let line = serde_json::to_string(&Line { index: k.clone(), re: v.re, im: v.im })?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(dim: usize, r: R) -> Result<Self> {
        let mut c = Self::new(dim)?;
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let l: Line = serde_json::from_str(&line)?;
            c.insert(l.index, Complex64::new(l.re, l.im))?;
        }
        Ok(c)
    }
}

/// `||c||_{l^q}`; the moduli are summed in increasing order so that permuted inputs give
/// bitwise-equal results.
pub fn torus_norm(f: &TorusCoefficients, q: Exponent) -> f64 {
    let mut mags: Vec<f64> = f.entries.values().map(|v| v.norm()).collect();
    if q.is_infinite() {
        return mags.into_iter().fold(0.0, f64::max);
    }
    mags.sort_by(f64::total_cmp);
    mags.iter().map(|m| m.powf(q.value())).sum::<f64>().powf(q.reciprocal())
}

pub type LatticeMap = Arc<dyn Fn(&[i64]) -> LatticePoint + Send + Sync>;

/// A bijection of `Z^n` given with its inverse; the pair is checked on each support it meets.
#[derive(Clone)]
pub struct LatticeBijection {
    dim: usize,
    name: String,
    forward: LatticeMap,
    inverse: LatticeMap,
}

impl std::fmt::Debug for LatticeBijection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LatticeBijection").field("dim", &self.dim).field("name", &self.name).finish()
    }
}

impl LatticeBijection {
    pub fn new(dim: usize, name: impl Into<String>, forward: LatticeMap, inverse: LatticeMap) -> Self {
        LatticeBijection { dim, name: name.into(), forward, inverse }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, "identity", Arc::new(|k| k.to_vec()), Arc::new(|k| k.to_vec()))
    }

    pub fn negation(dim: usize) -> Self {
        let neg: LatticeMap = Arc::new(|k| k.iter().map(|v| -v).collect());
        Self::new(dim, "negation", neg.clone(), neg)
    }

    /// Flips the sign of the coordinates selected by `mask`.
    pub fn sign_flip(dim: usize, mask: u32) -> Self {
        let flip: LatticeMap = Arc::new(move |k| k.iter().enumerate().map(|(i, v)| if mask >> i & 1 == 1 { -v } else { *v }).collect());
        Self::new(dim, format!("sign-flip-{mask:b}"), flip.clone(), flip)
    }

    /// `(a, b) -> (b, a)`.
    pub fn swap() -> Self {
        let s: LatticeMap = Arc::new(|k| vec![k[1], k[0]]);
        Self::new(2, "swap", s.clone(), s)
    }

    /// `(a, b) -> (a + s b, b)`.
    pub fn shear(s: i64) -> Self {
        Self::new(2, format!("shear-{s}"), Arc::new(move |k| vec![k[0] + s * k[1], k[1]]), Arc::new(move |k| vec![k[0] - s * k[1], k[1]]))
    }

    pub fn translation(shift: LatticePoint) -> Self {
        let (a, b) = (shift.clone(), shift.clone());
        Self::new(
            shift.len(),
            format!("translation-{shift:?}"),
            Arc::new(move |k| k.iter().zip(&a).map(|(x, y)| x + y).collect()),
            Arc::new(move |k| k.iter().zip(&b).map(|(x, y)| x - y).collect()),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn forward(&self, k: &[i64]) -> LatticePoint {
        (self.forward)(k)
    }

    pub fn inverse(&self, k: &[i64]) -> LatticePoint {
        (self.inverse)(k)
    }
}

/// `(psi^* c)(xi) = c(psi(xi))`: the entry at `k` moves to `psi^{-1}(k)`.
pub fn torus_canonical_transform(psi: &LatticeBijection, f: &TorusCoefficients) -> Result<TorusCoefficients> {
    if psi.dim != f.dim {
        return Err(Error::Dimension(psi.dim));
    }
    let mut out = BTreeMap::new();
    for (k, v) in &f.entries {
        let pre = psi.inverse(k);
        if pre.len() != f.dim || psi.forward(&pre) != *k {
            return Err(Error::Bijection(format!("{} does not invert at {k:?}", psi.name)));
        }
        if out.insert(pre, *v).is_some() {
            return Err(Error::Bijection(format!("{} is not injective on the support", psi.name)));
        }
    }
    Ok(TorusCoefficients { dim: f.dim, entries: out })
}

/// Multiplies `c(xi)` by `e^{i t |xi|^alpha}`, with the factor 1 at `xi = 0`.
pub fn torus_propagator(alpha: f64, t: f64, f: &TorusCoefficients) -> Result<TorusCoefficients> {
    if !(alpha.is_finite() && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("propagator parameters ({alpha}, {t}) must be finite")));
    }
    let entries = f
        .entries
        .iter()
        .map(|(k, v)| {
            let r = (k.iter().map(|a| (a * a) as f64).sum::<f64>()).sqrt();
            let phase = if r == 0.0 { 0.0 } else { t * r.powf(alpha) };
            (k.clone(), v * Complex64::from_polar(1.0, phase))
        })
        .collect();
    Ok(TorusCoefficients { dim: f.dim, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> TorusCoefficients {
        TorusCoefficients::from_entries(1, [(vec![0], 1.0), (vec![1], 2.0), (vec![2], 3.0)].map(|(k, v)| (k, Complex64::new(v, 0.0)))).unwrap()
    }

    #[test]
    fn closed_form_norms() {
        let f = example();
        assert_eq!(torus_norm(&f, Exponent::ONE), 6.0);
        assert_eq!(torus_norm(&f, Exponent::INFINITY), 3.0);
        let g = torus_canonical_transform(&LatticeBijection::negation(1), &f).unwrap();
        assert_eq!(g.get(&[-2]), Complex64::new(3.0, 0.0));
        assert!((torus_norm(&g, Exponent::TWO) - 14f64.sqrt()).abs() < 1e-15);
        let spike = TorusCoefficients::from_entries(2, [(vec![3, -1], Complex64::new(0.0, 1.0))]).unwrap();
        for q in [1.0, 1.5, 2.0, 7.0] {
            assert_eq!(torus_norm(&spike, Exponent::new(q).unwrap()), 1.0);
        }
    }

    #[test]
    fn bijections_are_exact_isometries() {
        let f = TorusCoefficients::random(2, 40, 6, 3).unwrap();
        for psi in [LatticeBijection::shear(2), LatticeBijection::swap(), LatticeBijection::sign_flip(2, 0b10), LatticeBijection::translation(vec![4, -7])] {
            let g = torus_canonical_transform(&psi, &f).unwrap();
            for q in [1.0, 1.5, 3.0] {
                let q = Exponent::new(q).unwrap();
                assert_eq!(torus_norm(&g, q), torus_norm(&f, q));
            }
            assert_eq!(torus_canonical_transform(&LatticeBijection::new(2, "inv", psi.inverse.clone(), psi.forward.clone()), &g).unwrap(), f);
        }
    }

    #[test]
    fn broken_bijection_is_rejected() {
        let bad = LatticeBijection::new(1, "skew", Arc::new(|k| vec![k[0] + 1]), Arc::new(|k| k.to_vec()));
        assert!(matches!(torus_canonical_transform(&bad, &example()), Err(Error::Bijection(_))));
    }

    #[test]
    fn propagator_group_law() {
        let f = TorusCoefficients::random(1, 20, 30, 9).unwrap();
        assert_eq!(torus_propagator(1.5, 0.0, &f).unwrap(), f);
        let ab = torus_propagator(2.0, 0.3, &torus_propagator(2.0, 0.4, &f).unwrap()).unwrap();
        let c = torus_propagator(2.0, 0.7, &f).unwrap();
        assert!(ab.iter().all(|(k, v)| (v - c.get(k)).norm() < 1e-12));
        let q = Exponent::new(4.0).unwrap();
        assert!((torus_norm(&c, q) - torus_norm(&f, q)).abs() <= 1e-15 * torus_norm(&f, q));
    }

    #[test]
    fn jsonl_round_trip() {
        let f = TorusCoefficients::random(2, 10, 3, 1).unwrap();
        let mut buf = Vec::new();
        f.write_jsonl(&mut buf).unwrap();
        assert_eq!(TorusCoefficients::read_jsonl(2, buf.as_slice()).unwrap(), f);
    }
}
