//! Declarative experiment configuration, read from TOML and layered over per-experiment
//! defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusFamily;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::GridSpec;
use crate::stft::{Window, WindowKind};

use super::registry::{lookup, ExperimentInfo};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    /// `None` selects the self-dual box `L = sqrt(N pi / 2)`.
    pub half_width: Option<f64>,
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        match self.half_width {
            Some(l) => GridSpec::new(self.dim, l, self.n),
            None => GridSpec::balanced(self.dim, self.n),
        }
    }

    /// The same box with twice as many nodes per axis.
    pub fn refined(&self) -> Result<GridSpec> {
        let coarse = self.spec()?;
        GridSpec::new(self.dim, coarse.half_width(), 2 * self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub family: CorpusFamily,
    pub seed: u64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub grid: GridConfig,
    pub window: WindowKind,
    pub window_radius: Option<f64>,
    pub exponents: Vec<(Exponent, Exponent)>,
    pub corpus: CorpusConfig,
    pub thresholds: BTreeMap<String, f64>,
    pub output_dir: Option<PathBuf>,
}

/// The file form: every field optional, unknown keys rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConfig {
    experiment: String,
    grid: Option<PartialGrid>,
    window: Option<WindowKind>,
    window_radius: Option<f64>,
    exponents: Option<Vec<(Exponent, Exponent)>>,
    corpus: Option<PartialCorpus>,
    #[serde(default)]
    thresholds: BTreeMap<String, f64>,
    output_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialGrid {
    dim: Option<usize>,
    n: Option<usize>,
    half_width: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialCorpus {
    family: Option<CorpusFamily>,
    seed: Option<u64>,
    size: Option<usize>,
}

/// Experiments whose exponents are fixed by the experiment itself.
const FIXED_EXPONENTS: [&str; 3] = ["fourier-covariance", "hilbert-identities", "product-bounds"];

fn e(v: f64) -> Exponent {
    Exponent::new(v).expect("default exponents are valid")
}

fn pairs(list: &[(f64, f64)]) -> Vec<(Exponent, Exponent)> {
    list.iter().map(|&(p, q)| (e(p), e(q))).collect()
}

impl ExperimentConfig {
    /// Built-in defaults for a registered experiment.
    pub fn defaults(name: &str) -> Result<Self> {
        let info = lookup(name)?;
        let inf = f64::INFINITY;
        let grid = |dim, n, l| GridConfig { dim, n, half_width: l };
        let corpus = |family, size| CorpusConfig { family, seed: 7, size };
        let (g, window, radius, exps, c) = match name {
            "thm1-equivalence" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (4.0, 4.0 / 3.0), (1.5, 3.0)]), corpus(CorpusFamily::BumpPlateaus, 10)),
            "omega-scaling" => (grid(1, 2048, Some(16.0)), WindowKind::CompactBump, Some(1.0), pairs(&[(1.0, inf), (inf, 1.0), (1.0, 1.0), (2.0, 2.0), (4.0, 4.0)]), corpus(CorpusFamily::BumpPlateaus, 4)),
            "fourier-covariance" => (grid(1, 256, None), WindowKind::Gaussian, None, vec![], corpus(CorpusFamily::Gaussians, 10)),
            "bh-growth" => (grid(1, 4096, Some(16.0)), WindowKind::Gaussian, None, pairs(&[(1.0, 1.0), (2.0, 2.0)]), corpus(CorpusFamily::Gaussians, 1)),
            "local-canonical" | "propagator-local" | "pert-linear" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(2.0, 2.0), (1.5, 2.0), (3.0, 1.5)]), corpus(CorpusFamily::RandomBandlimited, 10)),
            "fio-compose" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(1.0, 1.0), (2.0, 2.0), (4.0, 4.0)]), corpus(CorpusFamily::RandomBandlimited, 10)),
            "hom-reflection" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(2.0, 3.0)]), corpus(CorpusFamily::RandomBandlimited, 10)),
            "gabor-bounds" => (grid(1, 128, Some(8.0)), WindowKind::Gaussian, None, pairs(&[(2.0, 2.0), (3.0, 1.5), (4.0, 4.0)]), corpus(CorpusFamily::GaborRandom, 20)),
            "step-multiplier" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(2.0, 2.0), (1.5, 2.0), (3.0, 3.0)]), corpus(CorpusFamily::RandomBandlimited, 10)),
            "hilbert-identities" => (grid(1, 256, Some(4.0 * std::f64::consts::PI)), WindowKind::Gaussian, None, vec![], corpus(CorpusFamily::RandomBandlimited, 10)),
            "duality" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(1.0, 2.0), (2.0, 2.0), (3.0, 1.5)]), corpus(CorpusFamily::ModulatedGaussians, 10)),
            "torus-isometry" => (grid(2, 8, None), WindowKind::Gaussian, None, pairs(&[(1.0, 1.0), (1.0, 1.5), (1.0, 2.0), (1.0, 4.0), (1.0, inf)]), corpus(CorpusFamily::Gaussians, 100)),
            "weighted-embeddings" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, pairs(&[(4.0, 4.0 / 3.0), (2.0, 2.0), (3.0, 1.5)]), corpus(CorpusFamily::ModulatedGaussians, 10)),
            "product-bounds" => (grid(1, 256, Some(12.0)), WindowKind::Gaussian, None, vec![], corpus(CorpusFamily::ModulatedGaussians, 10)),
            _ => unreachable!("registry and defaults list the same experiments"),
        };
        Ok(ExperimentConfig {
            experiment: info.name.to_string(),
            grid: g,
            window,
            window_radius: radius,
            exponents: exps,
            corpus: c,
            thresholds: info.thresholds.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            output_dir: None,
        })
    }

    /// Parses a TOML document and layers it over the defaults of the experiment it names.
    pub fn from_toml(text: &str) -> Result<Self> {
        let partial: PartialConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Self::defaults(&partial.experiment)?;
        if let Some(g) = partial.grid {
            cfg.grid.dim = g.dim.unwrap_or(cfg.grid.dim);
            cfg.grid.n = g.n.unwrap_or(cfg.grid.n);
            if g.half_width.is_some() {
                cfg.grid.half_width = g.half_width;
            }
        }
        if let Some(w) = partial.window {
            cfg.window = w;
        }
        if partial.window_radius.is_some() {
            cfg.window_radius = partial.window_radius;
        }
        if let Some(x) = partial.exponents {
            cfg.exponents = x;
        }
        if let Some(c) = partial.corpus {
            cfg.corpus.family = c.family.unwrap_or(cfg.corpus.family);
            cfg.corpus.seed = c.seed.unwrap_or(cfg.corpus.seed);
            cfg.corpus.size = c.size.unwrap_or(cfg.corpus.size);
        }
        cfg.thresholds.extend(partial.thresholds);
        if partial.output_dir.is_some() {
            cfg.output_dir = partial.output_dir;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn info(&self) -> Result<&'static ExperimentInfo> {
        lookup(&self.experiment)
    }

    /// Checks the experiment name, grid, window and threshold keys.
    pub fn validate(&self) -> Result<()> {
        let info = self.info()?;
        self.grid.spec()?;
        if self.exponents.is_empty() && !FIXED_EXPONENTS.contains(&info.name) {
            return Err(Error::Config(format!("{} needs at least one exponent pair", info.name)));
        }
        if self.window == WindowKind::Derived {
            return Err(Error::Config("derived windows cannot be configured by name".into()));
        }
        if self.corpus.size == 0 {
            return Err(Error::Config("corpus size must be positive".into()));
        }
        for key in self.thresholds.keys() {
            if !info.thresholds.iter().any(|(k, _)| k == key) {
                return Err(Error::Config(format!("unknown threshold `{key}` for {}", info.name)));
            }
        }
        Ok(())
    }

    pub fn threshold(&self, key: &str) -> f64 {
        self.thresholds.get(key).copied().unwrap_or_else(|| {
            self.info().ok().and_then(|i| i.thresholds.iter().find(|(k, _)| *k == key)).map_or(f64::NAN, |&(_, v)| v)
        })
    }

    pub fn window_on(&self, spec: GridSpec) -> Result<Window> {
        Window::new(self.window, spec, self.window_radius)
    }
}
