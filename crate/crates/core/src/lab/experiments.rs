//! One runner per registered experiment. Runners record measurements and threshold checks;
//! "bounded" means a finite corpus supremum whose value moves by less than the drift budget
//! when the grid is refined at a fixed box.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::corpus::{Corpus, Member};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{inverse_fourier, lp_norm, GridSpec, SampledField, SupportBox};
use crate::linalg::Matrix;
use crate::operators::bh::flatness;
use crate::operators::change::localized_ratio;
use crate::operators::{
    beurling_helson_growth, canonical_transform, cutoff, fourier_multiplier, gabor_bound_ratio, half_line_multiplier_wiener_test,
    half_line_projector, hilbert_transform, localized_canonical_norm_test, localized_fio_ratio, perturbed_linear_test, propagator,
    relative_drift, step_multiplier_ratio, ChangeOfVariables, GaborSystem, HalfLine, HomogeneousReflection, KnSymbol, Perturbation,
    StepMultiplier,
};
use crate::profiles::bump;
use crate::spaces::{
    lp_norm_weighted, mixed_norm, modulation_norm, partition_norms, theorem1_ratio_experiment, wiener_norm, NormSpec,
};
use crate::stft::{check_fourier_covariance, stft, Window};
use crate::torus::{torus_canonical_transform, torus_norm, torus_propagator, LatticeBijection, TorusCoefficients};
use crate::weights::{
    convolution_bound_test, product_bound_test, weight_compatibility, weighted_embedding_chain_test, ChainExponents, ChainLine,
    Factor, Family, Weight,
};

use super::config::ExperimentConfig;
use super::report::Recorder;

type Pq = Option<(Exponent, Exponent)>;

fn e(v: f64) -> Exponent {
    Exponent::new(v).expect("literal exponents are valid")
}

/// Corpus, window and samples on one grid.
struct Level {
    spec: GridSpec,
    window: Window,
    fields: Vec<SampledField>,
}

fn level(cfg: &ExperimentConfig, corpus: &Corpus, spec: GridSpec) -> Result<Level> {
    Ok(Level { spec, window: cfg.window_on(spec)?, fields: corpus.sample(spec)? })
}

fn levels(cfg: &ExperimentConfig) -> Result<(Corpus, [Level; 2])> {
    let corpus = Corpus::build(cfg.corpus.family, cfg.grid.dim, cfg.corpus.size, cfg.corpus.seed)?;
    let coarse = level(cfg, &corpus, cfg.grid.spec()?)?;
    let fine = level(cfg, &corpus, cfg.grid.refined()?)?;
    Ok((corpus, [coarse, fine]))
}

fn ids(corpus: &Corpus) -> Vec<String> {
    corpus.members().iter().map(|m| m.id().to_string()).collect()
}

/// Per-level values of one ratio over the corpus.
fn per_member<F>(lv: &Level, f: F) -> Result<Vec<f64>>
where
    F: Fn(&SampledField) -> Result<f64> + Sync + Send,
{
    lv.fields.par_iter().map(f).collect()
}

/// Records members and suprema at both levels and checks finiteness and refinement drift.
/// With `two_sided`, the reciprocal infimum is held to the same cap and drift.
#[allow(clippy::too_many_arguments)]
fn bounded(rec: &mut Recorder, cfg: &ExperimentConfig, pq: Pq, label: &str, ids: &[String], coarse: &[f64], fine: &[f64], two_sided: bool) {
    for (id, v) in ids.iter().zip(coarse) {
        rec.value(pq, label, id, *v);
    }
    for (id, v) in ids.iter().zip(fine) {
        rec.value(pq, &format!("{label}@2N"), id, *v);
    }
    let sup = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let inv_inf = |v: &[f64]| v.iter().map(|x| 1.0 / x).fold(0.0, f64::max);
    let cap = cfg.threshold("sup_cap");
    let drift = cfg.threshold("drift_max");
    let finite = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
    let (a, b) = (sup(coarse), sup(fine));
    rec.at_most(pq, &format!("{label}:sup"), "corpus", finite(a), cap);
    rec.value(pq, &format!("{label}:sup@2N"), "corpus", b);
    rec.at_most(pq, &format!("{label}:sup_drift"), "corpus", relative_drift(a, b), drift);
    if two_sided {
        let (a, b) = (inv_inf(coarse), inv_inf(fine));
        rec.at_most(pq, &format!("{label}:inv_inf"), "corpus", finite(a), cap);
        rec.at_most(pq, &format!("{label}:inv_inf_drift"), "corpus", relative_drift(a, b), drift);
    }
}

fn coefficient_of_variation(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean.abs()
}

pub(crate) fn run_experiment(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    match cfg.experiment.as_str() {
        "thm1-equivalence" => thm1_equivalence(cfg, rec),
        "omega-scaling" => omega_scaling(cfg, rec),
        "fourier-covariance" => fourier_covariance(cfg, rec),
        "bh-growth" => bh_growth(cfg, rec),
        "local-canonical" => local_canonical(cfg, rec),
        "fio-compose" => fio_compose_experiment(cfg, rec),
        "hom-reflection" => hom_reflection(cfg, rec),
        "gabor-bounds" => gabor_bounds(cfg, rec),
        "step-multiplier" => step_multiplier(cfg, rec),
        "hilbert-identities" => hilbert_identities(cfg, rec),
        "duality" => duality(cfg, rec),
        "propagator-local" => propagator_local(cfg, rec),
        "torus-isometry" => torus_isometry(cfg, rec),
        "weighted-embeddings" => weighted_embeddings(cfg, rec),
        "product-bounds" => product_bounds(cfg, rec),
        "pert-linear" => pert_linear(cfg, rec),
        other => Err(Error::UnknownExperiment(other.to_string())),
    }
}

fn thm1_equivalence(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    for (m, f) in corpus.members().iter().zip(&lv[0].fields) {
        if let Some(b) = m.support() {
            b.check_support(f)?;
        }
    }
    let weights: Vec<(String, Option<Weight>)> = std::iter::once(("".to_string(), None))
        .chain([-1.0, 0.0, 1.0].map(|s| (format!("weighted(s={s})"), Some(Weight::frequency(Weight::bracket_power(s))))))
        .collect();
    for &(p, q) in &cfg.exponents {
        let pq = Some((p, q));
        // Per level and member: M/W, M/M_part, W/W_part, and the weighted M/W ratios.
        let table: Vec<Vec<Vec<f64>>> = lv
            .iter()
            .map(|l| {
                l.fields
                    .par_iter()
                    .map(|f| {
                        let v = stft(f, &l.window)?;
                        let part = partition_norms(f, p, q)?;
                        let m = mixed_norm(&v, &NormSpec::modulation(p, q))?;
                        let w = mixed_norm(&v, &NormSpec::wiener(p, q))?;
                        let mut out = vec![m / w, m / part.m, w / part.w];
                        for (_, wt) in weights.iter().skip(1) {
                            let mw = mixed_norm(&v, &NormSpec::modulation(p, q).with_weight(wt.clone()))?;
                            let ww = mixed_norm(&v, &NormSpec::wiener(p, q).with_weight(wt.clone()))?;
                            out.push(mw / ww);
                        }
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut labels = vec!["M/W".to_string(), "M/M_partition".to_string(), "W/W_partition".to_string()];
        labels.extend(weights.iter().skip(1).map(|(n, _)| format!("M/W {n}")));
        for (i, label) in labels.iter().enumerate() {
            let col = |l: usize| table[l].iter().map(|r| r[i]).collect::<Vec<_>>();
            bounded(rec, cfg, pq, label, &ids, &col(0), &col(1), true);
        }
    }
    let two = Exponent::TWO;
    let ratios = per_member(&lv[0], |f| Ok(modulation_norm(f, &lv[0].window, two, two, None)? / lp_norm(f, two)))?;
    for (id, r) in ids.iter().zip(&ratios) {
        rec.value(Some((two, two)), "M22/L2", id, *r);
    }
    rec.at_most(Some((two, two)), "M22/L2:cv", "corpus", coefficient_of_variation(&ratios), cfg.threshold("l2_cv_max"));
    Ok(())
}

fn omega_scaling(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let spec = cfg.grid.spec()?;
    let window = cfg.window_on(spec)?;
    let widths = [1.0, 2.0, 4.0, 8.0];
    let family = Corpus::plateau_family(cfg.grid.dim, &widths, 0.5)?;
    let members: Vec<(SupportBox, SampledField)> = family
        .members()
        .iter()
        .map(|m| Ok((m.support().cloned().expect("plateaus are compactly supported"), m.sample(spec)?)))
        .collect::<Result<_>>()?;
    for &(p, q) in &cfg.exponents {
        let pq = Some((p, q));
        let table = theorem1_ratio_experiment(&members, &window, p, q, None)?;
        for (row, m) in table.rows.iter().zip(family.members()) {
            rec.value(pq, "fattened_measure", m.id(), row.fattened_measure);
            rec.value(pq, "M", m.id(), row.m_norm);
            rec.value(pq, "W", m.id(), row.w_norm);
        }
        if p == q {
            let tol = cfg.threshold("slope_diagonal_abs_max");
            rec.at_most(pq, "slope(W/M):abs", "family", table.slope_w_over_m.abs(), tol);
        } else {
            let tol = cfg.threshold("slope_excess_max");
            rec.value(pq, "slope(W/M)", "family", table.slope_w_over_m);
            rec.value(pq, "slope(M/W)", "family", table.slope_m_over_w);
            rec.at_most(pq, "slope(W/M)-bound", "family", table.slope_w_over_m - table.exponent_w_over_m(), tol);
            rec.at_most(pq, "slope(M/W)-bound", "family", table.slope_m_over_w - table.exponent_m_over_w(), tol);
        }
    }
    Ok(())
}

fn fourier_covariance(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let corpus = Corpus::build(cfg.corpus.family, cfg.grid.dim, cfg.corpus.size, cfg.corpus.seed)?;
    let lv = level(cfg, &corpus, cfg.grid.spec()?)?;
    let dev = per_member(&lv, |f| check_fourier_covariance(f, &lv.window))?;
    for (id, d) in ids(&corpus).iter().zip(&dev) {
        rec.value(None, "deviation", id, *d);
    }
    rec.at_most(None, "deviation:max", "corpus", dev.iter().copied().fold(0.0, f64::max), cfg.threshold("deviation_max"));
    Ok(())
}

fn bh_growth(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let spec = cfg.grid.spec()?;
    if spec.dim() != 1 {
        return Err(Error::Config("bh-growth runs on the line".into()));
    }
    let chi = SampledField::from_real_fn(spec, |p| bump(p[0] / 1.5))?;
    let lambdas: Vec<f64> = (1..=64).map(f64::from).collect();
    let mut qs: Vec<Exponent> = cfg.exponents.iter().map(|x| x.1).collect();
    qs.dedup();
    for q in qs {
        let pq = Some((q, q));
        let affine = beurling_helson_growth(|x| 2.0 * x + 1.0, &chi, q, &lambdas)?;
        let quad = beurling_helson_growth(|x| x * x, &chi, q, &lambdas)?;
        for (&(l, a), &(_, b)) in affine.iter().zip(&quad) {
            let id = format!("lambda={l}");
            rec.value(pq, "affine", &id, a);
            rec.value(pq, "quadratic", &id, b);
        }
        let growth = quad.last().expect("nonempty").1 / quad[0].1;
        if q == Exponent::TWO {
            let tol = cfg.threshold("l2_flatness_max");
            rec.at_most(pq, "affine:flatness", "curve", flatness(&affine), tol);
            rec.at_most(pq, "quadratic:flatness", "curve", flatness(&quad), tol);
        } else {
            rec.at_most(pq, "affine:flatness", "curve", flatness(&affine), cfg.threshold("affine_flatness_max"));
            rec.at_least(pq, "quadratic:growth", "curve", growth, cfg.threshold("quadratic_growth_min"));
        }
    }
    Ok(())
}

/// Smooth cutoffs `chi1` (radius 4) and `chi2` (radius 3).
fn cutoffs(spec: GridSpec) -> Result<(SampledField, SampledField)> {
    Ok((cutoff(spec, 4.0, 1.0)?, cutoff(spec, 3.0, 1.0)?))
}

/// A localized operator ratio measured for every exponent pair at both levels.
fn localized_sweep<F>(cfg: &ExperimentConfig, rec: &mut Recorder, label: &str, ratio: F) -> Result<()>
where
    F: Fn(&Level, &SampledField, &SampledField, &SampledField, Exponent, Exponent) -> Result<f64> + Sync,
{
    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    let cuts = [cutoffs(lv[0].spec)?, cutoffs(lv[1].spec)?];
    for &(p, q) in &cfg.exponents {
        let vals: Vec<Vec<f64>> = (0..2)
            .map(|i| per_member(&lv[i], |f| ratio(&lv[i], f, &cuts[i].0, &cuts[i].1, p, q)))
            .collect::<Result<_>>()?;
        bounded(rec, cfg, Some((p, q)), label, &ids, &vals[0], &vals[1], false);
    }
    Ok(())
}

fn local_canonical(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let psi = ChangeOfVariables::arctan_perturbation(cfg.grid.dim, 0.1)?;
    localized_sweep(cfg, rec, "|chi1 I_psi chi2 f|/|chi2 f|", |l, f, c1, c2, p, q| {
        localized_canonical_norm_test(&psi, f, c1, c2, &l.window, p, q)
    })
}

/// `a(x, xi) = (1 + cos(x_1) / 2) e^{i sin(xi_1)} / (1 + |xi|^2)^{1/2}`, a bounded smooth symbol.
fn fio_symbol(spec: GridSpec) -> Result<KnSymbol> {
    KnSymbol::s000(spec, 10.0, |x, xi| {
        let r2: f64 = xi.iter().map(|v| v * v).sum();
        Complex64::from_polar((1.0 + 0.5 * x[0].cos()) / (1.0 + r2).sqrt(), xi[0].sin())
    })
}

fn fio_compose_experiment(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    let (one, id) = (KnSymbol::one(lv[0].spec)?, ChangeOfVariables::identity(cfg.grid.dim)?);
    let err = per_member(&lv[0], |f| Ok(crate::operators::fio_compose(&one, &id, f)?.max_abs_diff(f) / f.max_abs()))?;
    rec.at_most(None, "identity:error", "corpus", err.iter().copied().fold(0.0, f64::max), cfg.threshold("identity_error_max"));
    let symbols = [fio_symbol(lv[0].spec)?, fio_symbol(lv[1].spec)?];
    let cuts = [cutoffs(lv[0].spec)?, cutoffs(lv[1].spec)?];
    for eps in [0.05, 0.1, 0.2] {
        let psi = ChangeOfVariables::arctan_perturbation(cfg.grid.dim, eps)?;
        let mut qs: Vec<Exponent> = cfg.exponents.iter().map(|x| x.1).collect();
        qs.dedup();
        for q in qs {
            let vals: Vec<Vec<f64>> = (0..2)
                .map(|i| per_member(&lv[i], |f| localized_fio_ratio(&symbols[i], &psi, f, &cuts[i].0, &cuts[i].1, q)))
                .collect::<Result<_>>()?;
            bounded(rec, cfg, Some((q, q)), &format!("FL^q ratio eps={eps}"), &ids, &vals[0], &vals[1], false);
        }
    }
    Ok(())
}

fn hom_reflection(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    // Orthant decomposition in the plane against direct application, off the axes.
    let plane = GridSpec::new(2, 12.0, 64)?;
    let planar = Corpus::build(cfg.corpus.family, 2, cfg.corpus.size.min(4), cfg.corpus.seed)?.sample(plane)?;
    let r = HomogeneousReflection::new(Matrix::new(&[&[1.0, 0.5], &[0.0, 0.0]])?, Matrix::new(&[&[0.0, 0.0], &[0.3, 1.0]])?)?;
    let mut worst = 0.0_f64;
    for f in &planar {
        let direct = r.apply(f)?;
        let pieces = r.decompose(f)?;
        for i in 0..plane.len() {
            let x = plane.point(i);
            if x.contains(&0.0) {
                continue;
            }
            let sum: Complex64 = pieces.iter().map(|(_, g)| g.values()[i]).sum();
            worst = worst.max((sum - direct.values()[i]).norm() / f.max_abs());
        }
    }
    rec.at_most(None, "decomposition:error", "plane", worst, cfg.threshold("decomposition_error_max"));

    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    let even: Vec<Member> = corpus
        .members()
        .iter()
        .map(|m| {
            let m = m.clone();
            Member::new(format!("{}-even", m.id()), 1, None, move |x| m.eval(x) + m.eval(&[-x[0]]))
        })
        .collect();
    let even_fields: Vec<SampledField> = even.iter().map(|m| m.sample(lv[0].spec)).collect::<Result<_>>()?;
    for &(p, q) in &cfg.exponents {
        let pq = Some((p, q));
        let dev = even_fields
            .par_iter()
            .map(|f| Ok((half_line_multiplier_wiener_test(f, &lv[0].window, p, q)? - 1.0).abs()))
            .collect::<Result<Vec<f64>>>()?;
        rec.at_most(pq, "even:|ratio-1|", "corpus", dev.iter().copied().fold(0.0, f64::max), cfg.threshold("even_ratio_error_max"));
        let vals: Vec<Vec<f64>> = (0..2)
            .map(|i| per_member(&lv[i], |f| half_line_multiplier_wiener_test(f, &lv[i].window, p, q)))
            .collect::<Result<_>>()?;
        bounded(rec, cfg, pq, "|f(|.|)|/|f|", &ids, &vals[0], &vals[1], false);
    }
    Ok(())
}

fn gabor_bounds(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let specs = [cfg.grid.spec()?, cfg.grid.refined()?];
    let systems = [
        GaborSystem::with_default_lattice(Window::gaussian(specs[0]), 3)?,
        GaborSystem::with_default_lattice(Window::gaussian(specs[1]), 3)?,
    ];
    if (systems[0].alpha() - systems[1].alpha()).abs() > 1e-12 {
        return Err(Error::Config("the translation lattice must be on both grids; pick L with 1/h integral".into()));
    }
    let windows = [cfg.window_on(specs[0])?, cfg.window_on(specs[1])?];
    let ids: Vec<String> = (0..cfg.corpus.size).map(|i| format!("coefficients-{i}")).collect();
    for &(p, q) in &cfg.exponents {
        let vals: Vec<Vec<f64>> = (0..2)
            .map(|l| {
                (0..cfg.corpus.size)
                    .into_par_iter()
                    .map(|i| gabor_bound_ratio(&systems[l], &systems[l].random_coefficients(cfg.corpus.seed + i as u64), &windows[l], p, q))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        bounded(rec, cfg, Some((p, q)), "synthesis/(coeff*atom)", &ids, &vals[0], &vals[1], false);
    }
    Ok(())
}

fn step_multiplier(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let m = StepMultiplier::alternating(cfg.grid.dim)?;
    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    let sup = m.validate(&lv[0].spec, 1.0)?;
    for &(p, q) in &cfg.exponents {
        let vals: Vec<Vec<f64>> = (0..2).map(|i| per_member(&lv[i], |f| step_multiplier_ratio(&m, f, &lv[i].window, p, q))).collect::<Result<_>>()?;
        if p == Exponent::TWO && q == Exponent::TWO {
            let excess = vals[0].iter().map(|r| r - sup).fold(f64::NEG_INFINITY, f64::max).max(0.0);
            rec.at_most(Some((p, q)), "ratio-sup|c|", "corpus", excess, cfg.threshold("l2_excess_max"));
        }
        bounded(rec, cfg, Some((p, q)), "|m f|/|f|", &ids, &vals[0], &vals[1], false);
    }
    Ok(())
}

fn hilbert_identities(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let spec = cfg.grid.spec()?;
    if spec.dim() != 1 {
        return Err(Error::Config("the Hilbert transform acts on the line".into()));
    }
    if GridSpec::is_multiple(spec.half_width(), PI).is_none() {
        return Err(Error::Config("H cos = sin needs L to be a multiple of pi".into()));
    }
    let corpus = Corpus::build(cfg.corpus.family, 1, cfg.corpus.size, cfg.corpus.seed)?;
    let tol = cfg.threshold("identity_error_max");
    let mut worst = [0.0_f64; 4];
    for raw in corpus.sample(spec)? {
        let f = fourier_multiplier(|xi| Complex64::new(if xi[0] == 0.0 { 0.0 } else { 1.0 }, 0.0), &raw)?;
        let s = f.max_abs();
        let (neg, pos) = (half_line_projector(HalfLine::Negative, &f)?, half_line_projector(HalfLine::Positive, &f)?);
        worst[0] = worst[0].max(neg.add(&pos)?.max_abs_diff(&f) / s);
        worst[1] = worst[1].max(hilbert_transform(&hilbert_transform(&f)?)?.max_abs_diff(&f.scale(Complex64::new(-1.0, 0.0))) / s);
        worst[2] = worst[2].max(half_line_projector(HalfLine::Positive, &pos)?.max_abs_diff(&pos) / s);
        worst[3] = worst[3].max(half_line_projector(HalfLine::Negative, &pos)?.max_abs() / s);
    }
    let cos = SampledField::from_real_fn(spec, |p| p[0].cos())?;
    let sin = SampledField::from_real_fn(spec, |p| p[0].sin())?;
    rec.at_most(None, "P- + P+ - I", "corpus", worst[0], tol);
    rec.at_most(None, "H^2 + I", "corpus", worst[1], tol);
    rec.at_most(None, "P+ P+ - P+", "corpus", worst[2], tol);
    rec.at_most(None, "P- P+", "corpus", worst[3], tol);
    rec.at_most(None, "H cos - sin", "cos", hilbert_transform(&cos)?.max_abs_diff(&sin), tol);
    Ok(())
}

fn duality(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let corpus = Corpus::build(cfg.corpus.family, cfg.grid.dim, cfg.corpus.size, cfg.corpus.seed)?;
    let lv = level(cfg, &corpus, cfg.grid.spec()?)?;
    let ids = ids(&corpus);
    let symbol = |t: &[f64]| Complex64::from_polar(1.5 + t[0].tanh(), t.iter().map(|v| v.sin()).sum());
    let dual_window = lv.window.inverse_fourier_image();
    let expected = (2.0 * PI).powi(cfg.grid.dim as i32);
    for &(p, q) in &cfg.exponents {
        let pq = Some((p, q));
        let ratios = per_member(&lv, |g| {
            let mg = g.mul_fn(|t| symbol(t));
            let lhs = modulation_norm(&mg, &lv.window, p, q, None)?;
            let rhs = wiener_norm(&fourier_multiplier(symbol, &inverse_fourier(g))?, &dual_window, q, p, None)?;
            Ok(lhs / rhs)
        })?;
        for (id, r) in ids.iter().zip(&ratios) {
            rec.value(pq, "M(m g)/W(m(D) F^-1 g)", id, *r);
        }
        let offset = ratios.iter().map(|r| (r / expected - 1.0).abs()).fold(0.0, f64::max);
        rec.value(pq, "|ratio/(2pi)^n - 1|", "corpus", offset);
        rec.at_most(pq, "ratio:cv", "corpus", coefficient_of_variation(&ratios), cfg.threshold("cv_max"));
    }
    Ok(())
}

fn propagator_local(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    for alpha in [1.0, 2.0] {
        localized_sweep(cfg, rec, &format!("alpha={alpha} t=1"), |l, f, c1, c2, p, q| {
            localized_ratio(f, c1, c2, &l.window, p, q, |g| propagator(alpha, 1.0, g))
        })?;
    }
    Ok(())
}

fn torus_isometry(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let dim = 2;
    let families = [
        LatticeBijection::negation(dim),
        LatticeBijection::sign_flip(dim, 0b01),
        LatticeBijection::swap(),
        LatticeBijection::shear(3),
        LatticeBijection::translation(vec![5, -2]),
    ];
    let sets: Vec<TorusCoefficients> =
        (0..cfg.corpus.size).map(|i| TorusCoefficients::random(dim, 40, 8, cfg.corpus.seed + i as u64)).collect::<Result<_>>()?;
    let mut qs: Vec<Exponent> = cfg.exponents.iter().map(|x| x.1).collect();
    qs.dedup();
    let tol = cfg.threshold("deviation_max");
    let dev = |a: f64, b: f64| (a - b).abs() / b;
    for q in &qs {
        let pq = Some((Exponent::ONE, *q));
        for psi in &families {
            let mut worst = 0.0_f64;
            for f in &sets {
                let g = torus_canonical_transform(psi, f)?;
                worst = worst.max(dev(torus_norm(&g, *q), torus_norm(f, *q)));
            }
            rec.at_most(pq, &format!("bijection {}", psi.name()), "sets", worst, tol);
        }
        for (alpha, t) in [(1.0, 0.5), (2.0, 3.0), (-1.0, 1.0)] {
            let mut worst = 0.0_f64;
            for f in &sets {
                let g = torus_propagator(alpha, t, f)?;
                worst = worst.max(dev(torus_norm(&g, *q), torus_norm(f, *q)));
            }
            rec.at_most(pq, &format!("propagator alpha={alpha} t={t}"), "sets", worst, tol);
        }
    }
    Ok(())
}

fn weighted_embeddings(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let (corpus, lv) = levels(cfg)?;
    let ids = ids(&corpus);
    let mut fixed: Vec<Exponent> = cfg.exponents.iter().map(|x| x.0).collect();
    fixed.dedup();
    for &p in &fixed {
        let ex = ChainExponents::sharp(p);
        let pq = Some((p, ex.inner));
        for s in [-1.0, 0.0, 1.0] {
            let w0 = Weight::bracket_power(s);
            for line in ChainLine::ALL {
                let tables = [
                    weighted_embedding_chain_test(&lv[0].fields, &lv[0].window, line, ex, &w0)?,
                    weighted_embedding_chain_test(&lv[1].fields, &lv[1].window, line, ex, &w0)?,
                ];
                let left = |t: usize| tables[t].rows.iter().map(|r| r.left_ratio()).collect::<Vec<_>>();
                let right = |t: usize| tables[t].rows.iter().map(|r| r.right_ratio()).collect::<Vec<_>>();
                bounded(rec, cfg, pq, &format!("{line:?} s={s} left"), &ids, &left(0), &left(1), false);
                bounded(rec, cfg, pq, &format!("{line:?} s={s} right"), &ids, &right(0), &right(1), false);
            }
        }
        // The unit weight must reproduce the unweighted norms.
        let one = Weight::one();
        let l0 = &lv[0];
        let mut worst = 0.0_f64;
        for line in ChainLine::ALL {
            let t = weighted_embedding_chain_test(&l0.fields, &l0.window, line, ex, &one)?;
            for (row, f) in t.rows.iter().zip(&l0.fields) {
                let (small, middle, large) = match line {
                    ChainLine::ModulationLebesgue => (modulation_norm(f, &l0.window, p, ex.inner, None)?, lp_norm(f, p), modulation_norm(f, &l0.window, p, ex.outer, None)?),
                    ChainLine::WienerLebesgue => (wiener_norm(f, &l0.window, p, ex.inner, None)?, lp_norm(f, p), wiener_norm(f, &l0.window, p, ex.outer, None)?),
                    ChainLine::ModulationFourierLebesgue => (
                        modulation_norm(f, &l0.window, ex.inner, p, None)?,
                        crate::spaces::fourier_lebesgue_norm(f, p, None)?,
                        modulation_norm(f, &l0.window, ex.outer, p, None)?,
                    ),
                    ChainLine::WienerFourierLebesgue => (
                        wiener_norm(f, &l0.window, ex.inner, p, None)?,
                        crate::spaces::fourier_lebesgue_norm(f, p, None)?,
                        wiener_norm(f, &l0.window, ex.outer, p, None)?,
                    ),
                };
                for (a, b) in [(row.small, small), (row.middle, middle), (row.large, large)] {
                    worst = worst.max((a - b).abs() / b);
                }
            }
        }
        rec.at_most(pq, "unit weight vs unweighted", "corpus", worst, cfg.threshold("unit_weight_error_max"));
        debug_assert!(lp_norm_weighted(&l0.fields[0], p, Some(&one))? == lp_norm(&l0.fields[0], p));
    }
    // Weighted Fourier reflection: W_(w)(f; g) against M_(w0)(F f; F g) with w0(xi, -x) = w(x, xi).
    let w = Weight::separable(Weight::bracket_power(1.0), Weight::bracket_power(-0.5));
    let w0 = w.clone().swapped();
    let l0 = &lv[0];
    let fw = l0.window.fourier_image();
    for &(p, q) in &cfg.exponents {
        let ratios = per_member(l0, |f| {
            Ok(wiener_norm(f, &l0.window, p, q, Some(&w))? / modulation_norm(&crate::grid::forward_fourier(f), &fw, q, p, Some(&w0))?)
        })?;
        for (id, r) in ids.iter().zip(&ratios) {
            rec.value(Some((p, q)), "W_w(f)/M_w0(Ff)", id, *r);
        }
        rec.at_most(Some((p, q)), "W_w(f)/M_w0(Ff):cv", "corpus", coefficient_of_variation(&ratios), cfg.threshold("cv_max"));
    }
    Ok(())
}

fn product_bounds(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let (corpus, lv) = levels(cfg)?;
    let n = corpus.len();
    if n < 2 {
        return Err(Error::Config("product-bounds needs at least two corpus members".into()));
    }
    let ids: Vec<String> = (0..n).map(|i| format!("{}*{}", corpus.members()[i].id(), corpus.members()[(i + 1) % n].id())).collect();
    let inf = Exponent::INFINITY;
    let freq = Weight::frequency(Weight::bracket_power(1.0));
    let space = Weight::spatial(Weight::bracket_power(1.0));
    let dim = cfg.grid.dim;
    rec.value(None, "compatibility(product, <xi>)", "sampled", weight_compatibility(&freq, &freq, &freq, dim, false, 2000, 20.0, cfg.corpus.seed)?);
    rec.value(None, "compatibility(convolution, <x>)", "sampled", weight_compatibility(&space, &space, &space, dim, true, 2000, 20.0, cfg.corpus.seed)?);
    type Case<'a> = (&'a str, bool, [(Exponent, Exponent); 3], Option<&'a Weight>);
    let cases: [Case<'_>; 5] = [
        ("product", false, [(inf, Exponent::ONE), (e(3.0), e(1.5)), (e(3.0), e(1.5))], None),
        ("product", false, [(e(2.0), Exponent::ONE), (e(2.0), Exponent::ONE), (Exponent::ONE, Exponent::ONE)], None),
        ("product <xi>", false, [(e(2.0), Exponent::ONE), (e(2.0), Exponent::ONE), (Exponent::ONE, Exponent::ONE)], Some(&freq)),
        ("convolution", true, [(Exponent::ONE, e(2.0)), (Exponent::ONE, e(2.0)), (Exponent::ONE, Exponent::ONE)], None),
        ("convolution <x>", true, [(Exponent::ONE, e(3.0)), (e(2.0), e(1.5)), (e(2.0), Exponent::ONE)], Some(&space)),
    ];
    for family in [Family::Modulation, Family::Wiener] {
        for (name, conv, [a, b, t], weight) in cases {
            let vals: Vec<Vec<f64>> = (0..2)
                .map(|l| {
                    let fs = &lv[l].fields;
                    (0..n)
                        .into_par_iter()
                        .map(|i| {
                            let fa = Factor { field: &fs[i], p: a.0, q: a.1, weight };
                            let fb = Factor { field: &fs[(i + 1) % n], p: b.0, q: b.1, weight };
                            if conv {
                                convolution_bound_test(family, &lv[l].window, &fa, &fb, t, weight)
                            } else {
                                product_bound_test(family, &lv[l].window, &fa, &fb, t, weight)
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            bounded(rec, cfg, Some(t), &format!("{family:?} {name}"), &ids, &vals[0], &vals[1], false);
        }
    }
    Ok(())
}

fn pert_linear(cfg: &ExperimentConfig, rec: &mut Recorder) -> Result<()> {
    let dim = cfg.grid.dim;
    let a = Matrix::diagonal(&vec![1.2; dim]);
    let delta = Perturbation::sine(dim, 0.05);
    let spec = cfg.grid.spec()?;
    rec.value(None, "|D delta|", "dual grid", delta.derivative_bound(&spec.dual()));
    // With delta = 0 the substitution formula must agree with the linear canonical transform.
    let lin = ChangeOfVariables::affine(Matrix::diagonal(&vec![1.0 / 1.2; dim]), &vec![0.0; dim])?;
    let probe = Corpus::build(cfg.corpus.family, dim, 1, cfg.corpus.seed)?.sample(spec)?.remove(0);
    let direct = canonical_transform(&lin, &probe)?;
    let subst = crate::operators::perturbed_canonical_transform(&a, &Perturbation::zero(dim), &probe)?;
    rec.value(None, "delta=0 vs linear", "probe", subst.max_abs_diff(&direct) / direct.max_abs());
    localized_sweep(cfg, rec, "|chi1 I_psi chi2 f|/|chi2 f|", |l, f, c1, c2, p, q| perturbed_linear_test(&a, &delta, f, c1, c2, &l.window, p, q))
}
