//! Seeded families of analytic test fields. Members are closed-form functions on `R^n`,
//! so one corpus can be sampled on a grid and on its refinement.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledField, SupportBox};
use crate::profiles::plateau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFamily {
    /// `exp(-|x - c|^2 / (2 s^2))`.
    Gaussians,
    /// Gaussians times `e^{i eta . x}`.
    ModulatedGaussians,
    /// Smooth plateaus with compact support, times a plane wave.
    BumpPlateaus,
    /// Sums of three modulated Gaussian packets with random amplitudes.
    RandomBandlimited,
    /// Short random Gabor series over a Gaussian atom.
    GaborRandom,
}

impl CorpusFamily {
    pub const ALL: [CorpusFamily; 5] = [
        CorpusFamily::Gaussians,
        CorpusFamily::ModulatedGaussians,
        CorpusFamily::BumpPlateaus,
        CorpusFamily::RandomBandlimited,
        CorpusFamily::GaborRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorpusFamily::Gaussians => "gaussians",
            CorpusFamily::ModulatedGaussians => "modulated_gaussians",
            CorpusFamily::BumpPlateaus => "bump_plateaus",
            CorpusFamily::RandomBandlimited => "random_bandlimited",
            CorpusFamily::GaborRandom => "gabor_random",
        }
    }
}

impl fmt::Display for CorpusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorpusFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown corpus family `{s}`")))
    }
}

type Profile = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// One analytic corpus member.
#[derive(Clone)]
pub struct Member {
    id: String,
    dim: usize,
    support: Option<SupportBox>,
    profile: Profile,
}

impl fmt::Debug for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Member").field("id", &self.id).field("dim", &self.dim).field("support", &self.support).finish()
    }
}

impl Member {
    pub fn new(id: impl Into<String>, dim: usize, support: Option<SupportBox>, profile: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Member { id: id.into(), dim, support, profile: Arc::new(profile) }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Closed box outside which the member vanishes identically, if any.
    pub fn support(&self) -> Option<&SupportBox> {
        self.support.as_ref()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        (self.profile)(x)
    }

    /// Samples on `spec`; fails with a coverage error unless the samples decay at the box edge.
    pub fn sample(&self, spec: GridSpec) -> Result<SampledField> {
        if spec.dim() != self.dim {
            return Err(Error::Dimension(spec.dim()));
        }
        let f = SampledField::from_fn(spec, |p| (self.profile)(p))?;
        if !f.is_well_decayed() {
            return Err(Error::Coverage(format!("member {} has boundary decay {:e} on {spec:?}", self.id, f.boundary_decay())));
        }
        Ok(f)
    }
}

/// A seeded corpus; equal `(family, dim, size, seed)` give identical members.
#[derive(Clone, Debug)]
pub struct Corpus {
    family: CorpusFamily,
    seed: u64,
    members: Vec<Member>,
}

fn gaussian(x: &[f64], c: &[f64], s: f64) -> f64 {
    let r2: f64 = x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum();
    (-r2 / (2.0 * s * s)).exp()
}

fn wave(x: &[f64], eta: &[f64]) -> Complex64 {
    Complex64::from_polar(1.0, x.iter().zip(eta).map(|(a, b)| a * b).sum())
}

fn draw(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

impl Corpus {
    pub fn build(family: CorpusFamily, dim: usize, size: usize, seed: u64) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::Dimension(dim));
        }
        if size == 0 {
            return Err(Error::InvalidArgument("corpus size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((family as u64) << 32));
        let members = (0..size).map(|i| Self::member(family, dim, i, &mut rng)).collect();
        Ok(Corpus { family, seed, members })
    }

    fn member(family: CorpusFamily, dim: usize, i: usize, rng: &mut ChaCha8Rng) -> Member {
        let id = format!("{}-{i}", family.name());
        match family {
            CorpusFamily::Gaussians => {
                let (c, s) = (draw(rng, dim, -1.0, 1.0), rng.gen_range(0.6..1.2));
                Member::new(id, dim, None, move |x| Complex64::new(gaussian(x, &c, s), 0.0))
            }
            CorpusFamily::ModulatedGaussians => {
                let (c, s, eta) = (draw(rng, dim, -1.0, 1.0), rng.gen_range(0.6..1.2), draw(rng, dim, -3.0, 3.0));
                Member::new(id, dim, None, move |x| wave(x, &eta) * gaussian(x, &c, s))
            }
            CorpusFamily::BumpPlateaus => {
                let c = draw(rng, dim, -0.5, 0.5);
                let w = rng.gen_range(1.0..2.5);
                let eta = draw(rng, dim, -2.0, 2.0);
                let lower: Vec<f64> = c.iter().map(|v| v - w).collect();
                let upper: Vec<f64> = c.iter().map(|v| v + w).collect();
                let support = SupportBox::new(&lower, &upper).expect("positive width");
                Member::new(id, dim, Some(support), move |x| {
                    let p: f64 = x.iter().zip(&c).map(|(a, b)| plateau(*a, *b, w, 0.75)).product();
                    wave(x, &eta) * p
                })
            }
            CorpusFamily::RandomBandlimited => {
                let packets: Vec<(Vec<f64>, f64, Vec<f64>, Complex64)> = (0..3)
                    .map(|_| {
                        let amp = Complex64::from_polar(rng.gen_range(0.3..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
                        (draw(rng, dim, -1.5, 1.5), rng.gen_range(0.6..1.0), draw(rng, dim, -3.0, 3.0), amp)
                    })
                    .collect();
                Member::new(id, dim, None, move |x| packets.iter().map(|(c, s, eta, a)| a * wave(x, eta) * gaussian(x, c, *s)).sum())
            }
            CorpusFamily::GaborRandom => {
                // sum_{|j|, |k| <= 1} c_{jk} e^{i x . k} g(x - j), g a unit Gaussian atom.
                let side = 3usize.pow(dim as u32);
                let lattice: Vec<Vec<f64>> = (0..side)
                    .map(|f| if dim == 1 { vec![f as f64 - 1.0] } else { vec![(f / 3) as f64 - 1.0, (f % 3) as f64 - 1.0] })
                    .collect();
                let coeffs: Vec<Complex64> = (0..side * side).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                Member::new(id, dim, None, move |x| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, xj) in lattice.iter().enumerate() {
                        let g = gaussian(x, xj, 0.75);
                        for (k, xik) in lattice.iter().enumerate() {
                            acc += coeffs[j * side + k] * wave(x, xik) * g;
                        }
                    }
                    acc
                })
            }
        }
    }

    /// Plateaus `prod_i plateau(x_i, 0, w, ramp)` of half-widths `w`, supported in `[-w, w]^n`.
    pub fn plateau_family(dim: usize, half_widths: &[f64], ramp: f64) -> Result<Self> {
        let members = half_widths
            .iter()
            .map(|&w| {
                if !(ramp > 0.0 && ramp <= w) {
                    return Err(Error::InvalidArgument(format!("ramp {ramp} must lie in (0, {w}]")));
                }
                let support = SupportBox::centered(dim, w)?;
                Ok(Member::new(format!("plateau-{w}"), dim, Some(support), move |x| {
                    Complex64::new(x.iter().map(|&t| plateau(t, 0.0, w, ramp)).product(), 0.0)
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Corpus { family: CorpusFamily::BumpPlateaus, seed: 0, members })
    }

    pub fn from_members(family: CorpusFamily, members: Vec<Member>) -> Self {
        Corpus { family, seed: 0, members }
    }

    pub fn family(&self) -> CorpusFamily {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Samples every member, failing on the first coverage violation.
    pub fn sample(&self, spec: GridSpec) -> Result<Vec<SampledField>> {
        self.members.iter().map(|m| m.sample(spec)).collect()
    }
}
