//! The fixed table of named experiments.

use serde::Serialize;

use crate::error::{Error, Result};

/// A registered experiment: its key, owning module, a one-line description, the result it
/// exercises, and the acceptance thresholds it enforces by default.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub module: &'static str,
    pub description: &'static str,
    pub citation: &'static str,
    #[serde(skip)]
    pub thresholds: &'static [(&'static str, f64)],
}

pub const REGISTRY: [ExperimentInfo; 16] = [
    ExperimentInfo {
        name: "thm1-equivalence",
        module: "spaces",
        description: "modulation, Wiener and partition norms of compactly supported fields are mutually bounded",
        citation: "local equivalence of modulation and Wiener amalgam norms",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10), ("l2_cv_max", 0.01)],
    },
    ExperimentInfo {
        name: "omega-scaling",
        module: "spaces",
        description: "growth of the M/W norm ratios with the measure of the fattened support box",
        citation: "support-size dependence of the norm-equivalence constants",
        thresholds: &[("slope_excess_max", 0.1), ("slope_diagonal_abs_max", 0.05)],
    },
    ExperimentInfo {
        name: "fourier-covariance",
        module: "stft",
        description: "|V_w f(x, xi)| = (2 pi)^-n |V_(F w) (F f)(xi, -x)| on the lattice",
        citation: "Fourier covariance of the short-time Fourier transform",
        thresholds: &[("deviation_max", 1e-6)],
    },
    ExperimentInfo {
        name: "bh-growth",
        module: "operators",
        description: "Fourier-Lebesgue growth of chi e^{i lambda psi} for affine and quadratic phases",
        citation: "Beurling-Helson rigidity of changes of variables on Fourier-Lebesgue spaces",
        thresholds: &[("affine_flatness_max", 1.05), ("quadratic_growth_min", 2.0), ("l2_flatness_max", 1.01)],
    },
    ExperimentInfo {
        name: "local-canonical",
        module: "operators",
        description: "localized canonical transforms for a perturbed identity are bounded on M^{p,q}",
        citation: "local boundedness of canonical transforms of smooth changes of variables",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "fio-compose",
        module: "operators",
        description: "a(x, D) composed with canonical transforms, localized on Fourier-Lebesgue spaces",
        citation: "local continuity of Fourier integral operators with affine-perturbed phases",
        thresholds: &[("identity_error_max", 1e-9), ("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "hom-reflection",
        module: "operators",
        description: "f(S x + T |x|) via its orthant decomposition, and the fold norm ratio",
        citation: "boundedness of positively homogeneous reflections",
        thresholds: &[("decomposition_error_max", 1e-9), ("even_ratio_error_max", 1e-9), ("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "gabor-bounds",
        module: "operators",
        description: "Gabor synthesis norm against the mixed coefficient norm times the atom norm",
        citation: "modulation-space bounds for Gabor superpositions",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "step-multiplier",
        module: "operators",
        description: "piecewise-constant multipliers over unit cubes acting on M^{p,q}",
        citation: "boundedness of step-function multipliers for interior exponents",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10), ("l2_excess_max", 1e-9)],
    },
    ExperimentInfo {
        name: "hilbert-identities",
        module: "operators",
        description: "H^2 = -I, H cos = sin and the half-line projector splitting",
        citation: "Hilbert transform and half-line Fourier projectors",
        thresholds: &[("identity_error_max", 1e-10)],
    },
    ExperimentInfo {
        name: "duality",
        module: "operators",
        description: "multiplication on M^{p,q} against the Fourier multiplier on W^{q,p}",
        citation: "equivalence of multiplication and Fourier-multiplier boundedness",
        thresholds: &[("cv_max", 0.02)],
    },
    ExperimentInfo {
        name: "propagator-local",
        module: "operators",
        description: "localized wave and Schroedinger propagators on M^{p,q}",
        citation: "local boundedness of propagators e^{it|D|^alpha}",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "torus-isometry",
        module: "torus",
        description: "lattice bijections and propagators preserve the l^q norm of Fourier coefficients",
        citation: "isometries of modulation spaces on the torus",
        thresholds: &[("deviation_max", 1e-15)],
    },
    ExperimentInfo {
        name: "weighted-embeddings",
        module: "weights",
        description: "weighted chains M in L^p (or FL^q) in M, and the weighted Fourier reflection",
        citation: "weighted embeddings between modulation, Lebesgue and Fourier-Lebesgue spaces",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10), ("unit_weight_error_max", 1e-15), ("cv_max", 0.02)],
    },
    ExperimentInfo {
        name: "product-bounds",
        module: "weights",
        description: "products and convolutions in weighted modulation and Wiener spaces",
        citation: "Hoelder and Young type bounds in weighted modulation spaces",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10)],
    },
    ExperimentInfo {
        name: "pert-linear",
        module: "operators",
        description: "canonical transforms whose inverse is a linear map plus a small smooth perturbation",
        citation: "perturbations of linear canonical transforms",
        thresholds: &[("sup_cap", 1e6), ("drift_max", 0.10)],
    },
];

pub fn lookup(name: &str) -> Result<&'static ExperimentInfo> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

/// Registry entries, optionally restricted to one module.
pub fn list_experiments(module: Option<&str>) -> Vec<&'static ExperimentInfo> {
    REGISTRY.iter().filter(|e| module.is_none_or(|m| e.module == m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CITATIONS: [(&str, &str); 16] = [
        ("thm1-equivalence", "local equivalence of modulation and Wiener amalgam norms"),
        ("omega-scaling", "support-size dependence of the norm-equivalence constants"),
        ("fourier-covariance", "Fourier covariance of the short-time Fourier transform"),
        ("bh-growth", "Beurling-Helson rigidity of changes of variables on Fourier-Lebesgue spaces"),
        ("local-canonical", "local boundedness of canonical transforms of smooth changes of variables"),
        ("fio-compose", "local continuity of Fourier integral operators with affine-perturbed phases"),
        ("hom-reflection", "boundedness of positively homogeneous reflections"),
        ("gabor-bounds", "modulation-space bounds for Gabor superpositions"),
        ("step-multiplier", "boundedness of step-function multipliers for interior exponents"),
        ("hilbert-identities", "Hilbert transform and half-line Fourier projectors"),
        ("duality", "equivalence of multiplication and Fourier-multiplier boundedness"),
        ("propagator-local", "local boundedness of propagators e^{it|D|^alpha}"),
        ("torus-isometry", "isometries of modulation spaces on the torus"),
        ("weighted-embeddings", "weighted embeddings between modulation, Lebesgue and Fourier-Lebesgue spaces"),
        ("product-bounds", "Hoelder and Young type bounds in weighted modulation spaces"),
        ("pert-linear", "perturbations of linear canonical transforms"),
    ];

    #[test]
    fn registry_matches_static_citation_table() {
        assert_eq!(REGISTRY.len(), CITATIONS.len());
        for (name, citation) in CITATIONS {
            assert_eq!(lookup(name).unwrap().citation, citation);
        }
    }

    #[test]
    fn module_filter_and_unknown_names() {
        assert_eq!(list_experiments(None).len(), 16);
        assert_eq!(list_experiments(Some("torus")).len(), 1);
        assert!(list_experiments(Some("spaces")).iter().all(|e| e.module == "spaces"));
        assert!(matches!(lookup("nope"), Err(Error::UnknownExperiment(_))));
    }
}
