//! Analytic characterization of the downlink SINR in a K-tier network.
//!
//! The K-tier planar scenario is mapped to an equivalent non-homogeneous
//! Poisson process on the half-line whose cumulative intensity is
//! `Lambda([0, r]) = sum_l a_l r^(m_l)` with
//! `a_l = lambda_l * pi * (P_l B_l)^(2/eps_l) * E[Psi_l^(2/eps_l)]` and
//! `m_l = 2/eps_l`. Everything downstream - nearest-point laws, the tier
//! that serves the receiver, the serving-distance density and the coverage
//! probability - is expressed in terms of those coefficients.
//!
//! Coverage is a double integral: an inner damped-phase integral over the
//! mapped serving distance and an outer characteristic-function inversion
//! over `omega`, with per-tier factors `pi^(1-eps_k/eps_l) *
//! 1F1(-2/eps_l; 1-2/eps_l; i omega)`. The outer integrand decays only
//! like `omega^(-1-2/eps)`, so the region beyond the numeric window is
//! added in closed form from the large-argument asymptotics of the
//! hypergeometric factor rather than truncated away.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::NetworkModel;
use crate::quad::{adaptive_complex, adaptive_real};
use crate::special::{gamma_fn, kummer_1f1_special};

use core::f64::consts::PI;

/// One power-law term of the equivalent cumulative intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulativeTerm {
    /// `a_l > 0`.
    pub scale: f64,
    /// `m_l = 2/eps_l` in (0, 1).
    pub exponent: f64,
}

/// Cumulative intensity of the equivalent 1-D process, one term per tier.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentDensity {
    pub terms: Vec<CumulativeTerm>,
}

impl EquivalentDensity {
    /// Mean number of points in [0, r].
    pub fn cumulative(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.scale * r.powf(t.exponent))
            .sum()
    }

    /// Intensity (density of points) at distance r > 0.
    pub fn intensity(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.scale * t.exponent * r.powf(t.exponent - 1.0))
            .sum()
    }

    /// Smallest r with `cumulative(r) >= target` (bisection; the cumulative
    /// is strictly increasing).
    pub fn inverse_cumulative(&self, target: f64) -> f64 {
        debug_assert!(target > 0.0);
        let mut hi = 1.0f64;
        let mut n = 0;
        while self.cumulative(hi) < target {
            hi *= 2.0;
            n += 1;
            debug_assert!(n < 4000);
        }
        let mut lo = 0.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cumulative(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Mean residual interference `sum 1/r` beyond `r`, the integral of
    /// `r^(-1)` against the intensity over `(r, inf)`.
    pub fn interference_tail(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.scale * t.exponent * r.powf(t.exponent - 1.0) / (1.0 - t.exponent))
            .sum()
    }
}

/// Probability that the serving BS belongs to each tier.
#[derive(Debug, Clone, PartialEq)]
pub struct TierProbabilities {
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverageMethod {
    /// General double-integral evaluation.
    AnalyticGeneral,
    /// Interference-limited, equal-exponent reduction.
    AnalyticClosedForm,
    /// Empirical estimate from a simulator.
    MonteCarlo,
}

impl CoverageMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverageMethod::AnalyticGeneral => "analytic",
            CoverageMethod::AnalyticClosedForm => "closed-form",
            CoverageMethod::MonteCarlo => "monte-carlo",
        }
    }
}

/// Coverage probability with provenance and an absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub value: f64,
    pub method: CoverageMethod,
    /// Absolute error bound (quadrature + truncation) or a standard error
    /// for Monte-Carlo estimates.
    pub error_estimate: f64,
    /// Per-tier contributions `P(I = k, SINR > beta_k)`; they sum to
    /// `value`.
    pub per_tier: Option<Vec<f64>>,
}

/// Numerical knobs of the analytic engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageConfig {
    /// Absolute tolerance for probabilities.
    pub abs_tol: f64,
    /// Relative tolerance budget for the special-function factors and the
    /// outer quadrature.
    pub special_rel_tol: f64,
    /// Initial extent of the numeric window of the outer integral.
    pub omega_start: f64,
    /// The window is doubled (up to this cap) while the analytic-tail
    /// residual estimate exceeds `abs_tol / 2`.
    pub omega_cap: f64,
    /// Evaluate the general double integral even when the closed form
    /// applies.
    pub force_general: bool,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        CoverageConfig {
            abs_tol: 1e-6,
            special_rel_tol: 1e-6,
            omega_start: 200.0,
            omega_cap: 1600.0,
            force_general: false,
        }
    }
}

/// Map the model onto the cumulative coefficients of the equivalent 1-D
/// process.
pub fn equivalent_density(model: &NetworkModel) -> Result<EquivalentDensity> {
    model.validated()?;
    let mut terms = Vec::with_capacity(model.tiers.len());
    for tier in &model.tiers {
        let m = tier.moment_exponent();
        let moment = tier.fractional_moment()?;
        let scale = tier.density * PI * (tier.power * tier.bias).powf(m) * moment;
        terms.push(CumulativeTerm {
            scale,
            exponent: m,
        });
    }
    Ok(EquivalentDensity { terms })
}

/// Tail probability that the nearest tier-`k` point of the equivalent
/// process lies beyond `r`: `exp(-a_k r^(m_k))`.
pub fn nearest_tier_distance_tail(model: &NetworkModel, k: usize, r: f64) -> Result<f64> {
    model.validated()?;
    if k >= model.tiers.len() {
        return Err(Error::TierIndex {
            index: k,
            count: model.tiers.len(),
        });
    }
    if !(r >= 0.0) {
        return Err(Error::Domain {
            name: "nearest_tier_distance_tail",
            reason: format!("distance must be >= 0, got {r}"),
        });
    }
    let eq = equivalent_density(model)?;
    let t = eq.terms[k];
    Ok((-t.scale * r.powf(t.exponent)).exp())
}

/// Probability that the serving BS belongs to each tier. Equal exponents
/// reduce to the coefficient ratio; otherwise each tier needs a
/// one-dimensional integral.
pub fn tier_probabilities(model: &NetworkModel) -> Result<TierProbabilities> {
    model.validated()?;
    if model.equal_exponents() {
        let eq = equivalent_density(model)?;
        let total: f64 = eq.terms.iter().map(|t| t.scale).sum();
        return Ok(TierProbabilities {
            probs: eq.terms.iter().map(|t| t.scale / total).collect(),
        });
    }
    tier_probabilities_quadrature(model)
}

/// The general-integral evaluation of the tier-association law, usable for
/// any exponent combination (the equal-exponent ratio is its special case).
///
/// Substituting `v = r^(m_k)` and then `v = w^(m_k / min_l m_l)` turns the
/// per-tier integral into
/// `a_k q int w^(q-1) exp(-sum_l a_l w^(m_l/m_min)) dw` with every exponent
/// at least one, which adaptive quadrature handles without endpoint care.
pub fn tier_probabilities_quadrature(model: &NetworkModel) -> Result<TierProbabilities> {
    model.validated()?;
    let eq = equivalent_density(model)?;
    let m_min = eq
        .terms
        .iter()
        .map(|t| t.exponent)
        .fold(f64::INFINITY, f64::min);
    let mut probs = Vec::with_capacity(eq.terms.len());
    for term in &eq.terms {
        let q = term.exponent / m_min;
        let exps: Vec<f64> = eq.terms.iter().map(|t| t.exponent / m_min).collect();
        let scales: Vec<f64> = eq.terms.iter().map(|t| t.scale).collect();
        let decay = |w: f64| -> f64 {
            scales
                .iter()
                .zip(&exps)
                .map(|(a, p)| a * w.powf(*p))
                .sum()
        };
        let mut hi = 1.0f64;
        while decay(hi) < 50.0 {
            hi *= 2.0;
        }
        while decay(hi) > 50.0 && hi > 1e-280 {
            hi *= 0.5;
        }
        hi *= 2.0;
        let mut f = |w: f64| -> f64 {
            if w <= 0.0 {
                return if q == 1.0 { term.scale } else { 0.0 };
            }
            let e = decay(w);
            if e > 700.0 {
                return 0.0;
            }
            term.scale * q * w.powf(q - 1.0) * (-e).exp()
        };
        let breaks = [0.0, hi / 64.0, hi / 16.0, hi / 4.0, hi];
        let (value, err, converged) =
            adaptive_real(&mut f, &breaks, 1e-9, 1e-10, 2000, "tier_probabilities")?;
        if !converged && err > 1e-8 {
            return Err(Error::Numeric {
                context: "tier_probabilities",
                reason: format!("quadrature error {err:.2e} above tolerance"),
            });
        }
        probs.push(value);
    }
    Ok(TierProbabilities { probs })
}

/// Density of the equivalent serving distance given the serving tier:
/// `a_k m_k r^(m_k - 1) exp(-Lambda(r)) / P(I = k)`.
pub fn serving_distance_pdf(model: &NetworkModel, k: usize, r: f64) -> Result<f64> {
    let probs = tier_probabilities(model)?;
    serving_distance_pdf_given(model, k, r, &probs)
}

/// Same as [`serving_distance_pdf`] with the tier probabilities already
/// computed (useful when evaluating the density on a grid).
pub fn serving_distance_pdf_given(
    model: &NetworkModel,
    k: usize,
    r: f64,
    probs: &TierProbabilities,
) -> Result<f64> {
    model.validated()?;
    if k >= model.tiers.len() {
        return Err(Error::TierIndex {
            index: k,
            count: model.tiers.len(),
        });
    }
    if !(r >= 0.0) {
        return Err(Error::Domain {
            name: "serving_distance_pdf",
            reason: format!("distance must be >= 0, got {r}"),
        });
    }
    let p_k = probs.probs[k];
    if !(p_k > 1e-300) {
        return Err(Error::Numeric {
            context: "serving_distance_pdf",
            reason: format!("tier probability underflow for tier {k}: {p_k}"),
        });
    }
    let eq = equivalent_density(model)?;
    let t = eq.terms[k];
    let lam = eq.cumulative(r);
    Ok(t.scale * t.exponent * r.powf(t.exponent - 1.0) * (-lam).exp() / p_k)
}

/// Coverage probability with default configuration. Dispatches to the
/// interference-limited closed form when it applies.
pub fn coverage_probability(model: &NetworkModel) -> Result<CoverageResult> {
    coverage_probability_with(model, &CoverageConfig::default())
}

pub fn coverage_probability_with(
    model: &NetworkModel,
    cfg: &CoverageConfig,
) -> Result<CoverageResult> {
    model.validated()?;
    if !cfg.force_general {
        if let Some(result) = coverage_closed_form_with(model, cfg)? {
            return Ok(result);
        }
    }
    coverage_general(model, cfg)
}

/// Interference-limited (`eta = 0`), equal-exponent coverage: the weighted
/// mixture of single-tier factors `gamma_k`. Returns `None` when the
/// preconditions fail.
pub fn coverage_closed_form(model: &NetworkModel) -> Result<Option<CoverageResult>> {
    coverage_closed_form_with(model, &CoverageConfig::default())
}

pub fn coverage_closed_form_with(
    model: &NetworkModel,
    cfg: &CoverageConfig,
) -> Result<Option<CoverageResult>> {
    model.validated()?;
    if model.noise != 0.0 || !model.equal_exponents() {
        return Ok(None);
    }
    let eps = model.tiers[0].pathloss_exponent;
    let eq = equivalent_density(model)?;
    let total: f64 = eq.terms.iter().map(|t| t.scale).sum();
    let mut per_tier = Vec::with_capacity(model.tiers.len());
    let mut err = 0.0;
    for (k, tier) in model.tiers.iter().enumerate() {
        let weight = eq.terms[k].scale / total;
        let (gamma, gerr) = gamma_tier_factor(eps, tier.sinr_threshold, cfg)?;
        per_tier.push(weight * gamma);
        err += weight * gerr;
    }
    let result = finish_result(per_tier, err, CoverageMethod::AnalyticClosedForm, cfg)?;
    Ok(Some(result))
}

/// Single-tier coverage factor of the equal-exponent case: closed form for
/// `beta >= 1`, one-dimensional quadrature otherwise.
fn gamma_tier_factor(eps: f64, beta: f64, cfg: &CoverageConfig) -> Result<(f64, f64)> {
    let s = 2.0 / eps;
    if beta >= 1.0 {
        return Ok(((PI * s).sin() / (PI * s) * beta.powf(-s), 1e-14));
    }
    // gamma_k = int (1 - e^{-i w/beta}) / (2 pi i w 1F1(-s; 1-s; i w)) dw.
    let kappa = Complex64::from_polar(1.0, PI / eps) / gamma_fn(1.0 - s)?;
    let omega_hi = choose_omega(kappa.norm(), s, cfg);
    let mut f = |omega: f64| -> Complex64 {
        let h = kummer_1f1_special(eps, omega).expect("validated eps");
        kernel(omega, beta) / h
    };
    let breaks = omega_breakpoints(beta, omega_hi);
    let out = adaptive_complex(
        &mut f,
        &breaks,
        0.25 * cfg.abs_tol,
        cfg.special_rel_tol,
        20_000,
        "gamma_tier_factor",
    )?;
    let (jf, jerr) = j_factor(s, beta, omega_hi)?;
    let tail = (Complex64::new(0.0, -1.0) * kappa * jf).re / PI;
    let err = 2.0 * out.abs_error
        + kappa.norm() * jerr / PI
        + subleading_tail_bound(kappa.norm(), s, omega_hi);
    Ok((2.0 * out.value.re + tail, err))
}

/// General Theorem-style evaluation: sum over tiers of the outer
/// characteristic-function inversion with the inner mapped-distance
/// integral, plus the analytic tail of the outer integral.
fn coverage_general(model: &NetworkModel, cfg: &CoverageConfig) -> Result<CoverageResult> {
    let moments: Vec<f64> = model
        .tiers
        .iter()
        .map(|t| t.fractional_moment())
        .collect::<Result<_>>()?;
    let parts: Vec<Result<(f64, f64)>> = (0..model.tiers.len())
        .into_par_iter()
        .map(|k| general_tier(model, &moments, k, cfg))
        .collect();
    let mut per_tier = Vec::with_capacity(parts.len());
    let mut err = 0.0;
    for part in parts {
        let (v, e) = part?;
        per_tier.push(v);
        err += e;
    }
    finish_result(per_tier, err, CoverageMethod::AnalyticGeneral, cfg)
}

/// Contribution `P(I = k, SINR > beta_k)` of one tier.
fn general_tier(
    model: &NetworkModel,
    moments: &[f64],
    k: usize,
    cfg: &CoverageConfig,
) -> Result<(f64, f64)> {
    let tier_k = &model.tiers[k];
    let eps_k = tier_k.pathloss_exponent;
    let beta = tier_k.sinr_threshold;
    let pb_k = tier_k.power * tier_k.bias;
    let eta = model.noise;
    let s = 2.0 / eps_k;

    // Per-interferer-tier constants: exponents p_l = eps_k/eps_l of the inner
    // variable, and the omega-independent prefactor of the hypergeometric
    // factor.
    let p: Vec<f64> = model
        .tiers
        .iter()
        .map(|t| eps_k / t.pathloss_exponent)
        .collect();
    let pref: Vec<f64> = model
        .tiers
        .iter()
        .enumerate()
        .map(|(l, t)| {
            let ml = t.moment_exponent();
            t.density
                * moments[l]
                * ((t.power * t.bias) / pb_k).powf(ml)
                * PI.powf(1.0 - eps_k / t.pathloss_exponent)
        })
        .collect();
    let noise_coef = eta * PI.powf(-eps_k / 2.0) / pb_k;

    // Tail constant: with every hypergeometric factor replaced by its
    // large-omega asymptote, the inner integral becomes kappa * w^(-s).
    let g_tail: Vec<Complex64> = model
        .tiers
        .iter()
        .enumerate()
        .map(|(l, t)| {
            let ml = t.moment_exponent();
            Ok(Complex64::from_polar(
                pref[l] * gamma_fn(1.0 - ml)?,
                -PI / t.pathloss_exponent,
            ))
        })
        .collect::<Result<_>>()?;
    let kappa = damped_phase_integral(&g_tail, &p, noise_coef, eps_k / 2.0, "coverage_tail")?;
    let omega_hi = choose_omega(kappa.norm(), s, cfg);

    let scale = tier_k.density * moments[k];
    let outer_tol = 0.25 * cfg.abs_tol / (scale * model.tiers.len() as f64);
    let mut guard_hit: Option<f64> = None;
    let mut f = |omega: f64| -> Complex64 {
        let mut g = Vec::with_capacity(model.tiers.len());
        for (l, t) in model.tiers.iter().enumerate() {
            let h = kummer_1f1_special(t.pathloss_exponent, omega).expect("validated eps");
            let gl = h * pref[l];
            if gl.re < 0.0 && guard_hit.is_none() {
                guard_hit = Some(omega);
            }
            g.push(gl);
        }
        let inner = damped_phase_integral(&g, &p, omega * noise_coef, eps_k / 2.0, "coverage_inner")
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        inner * kernel(omega, beta)
    };
    let breaks = omega_breakpoints(beta, omega_hi);
    let out = adaptive_complex(
        &mut f,
        &breaks,
        outer_tol,
        cfg.special_rel_tol,
        20_000,
        "coverage_outer",
    )?;
    if let Some(omega) = guard_hit {
        return Err(Error::Numeric {
            context: "coverage_outer",
            reason: format!(
                "exponent coefficient developed a negative real part at omega={omega} (tier {k})"
            ),
        });
    }
    let (jf, jerr) = j_factor(s, beta, omega_hi)?;
    let tail = (Complex64::new(0.0, -1.0) * kappa * jf).re / PI;
    let value = scale * (2.0 * out.value.re + tail);
    let err = scale
        * (2.0 * out.abs_error
            + kappa.norm() * jerr / PI
            + subleading_tail_bound(kappa.norm(), s, omega_hi));
    Ok((value, err))
}

/// Inversion kernel `(1 - e^{-i w / beta}) / (2 pi i w)` in the
/// cancellation-free product form, with its analytic `w -> 0` limit
/// substituted inside a small window.
fn kernel(omega: f64, beta: f64) -> Complex64 {
    if omega.abs() < 1e-6 {
        return Complex64::new(1.0 / (2.0 * PI * beta), 0.0);
    }
    let x = omega / (2.0 * beta);
    Complex64::from_polar(x.sin() / (PI * omega), -x)
}

/// `int_0^inf exp(i c t^(h)) exp(-sum_l G_l t^(p_l)) dt` for coefficients
/// with positive real part. The domain is truncated where the real part of
/// the exponent reaches 50 and substituted so every power is at least one.
fn damped_phase_integral(
    g: &[Complex64],
    p: &[f64],
    phase_coef: f64,
    phase_exp: f64,
    context: &'static str,
) -> Result<Complex64> {
    for gl in g {
        if !(gl.re > 0.0) {
            return Err(Error::Numeric {
                context,
                reason: format!("non-positive damping coefficient {gl}"),
            });
        }
    }
    let decay = |t: f64| -> f64 { g.iter().zip(p).map(|(gl, pl)| gl.re * t.powf(*pl)).sum() };
    let mut hi = 1.0f64;
    let mut n = 0;
    while decay(hi) < 50.0 {
        hi *= 2.0;
        n += 1;
        if n > 2100 {
            return Err(Error::Numeric {
                context,
                reason: "damping too weak to truncate".into(),
            });
        }
    }
    while decay(hi) > 50.0 && hi > 1e-280 {
        hi *= 0.5;
    }
    hi *= 2.0;
    let p_min = p.iter().copied().fold(f64::INFINITY, f64::min);
    let q = if p_min < 1.0 { 1.0 / p_min } else { 1.0 };
    let u_max = hi.powf(1.0 / q);
    let mut f = |u: f64| -> Complex64 {
        if u <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let t = if q == 1.0 { u } else { u.powf(q) };
        let mut ex = Complex64::new(0.0, 0.0);
        for (gl, pl) in g.iter().zip(p) {
            ex -= gl * t.powf(*pl);
        }
        if phase_coef != 0.0 {
            ex += Complex64::new(0.0, phase_coef * t.powf(phase_exp));
        }
        if ex.re < -700.0 {
            return Complex64::new(0.0, 0.0);
        }
        let jac = if q == 1.0 { 1.0 } else { q * u.powf(q - 1.0) };
        ex.exp() * jac
    };
    let breaks = [0.0, u_max / 64.0, u_max / 16.0, u_max / 4.0, u_max];
    let out = adaptive_complex(&mut f, &breaks, 0.0, 1e-9, 400, context)?;
    Ok(out.value)
}

/// Extent of the numeric window: doubled from the configured start while
/// the residual (subleading) tail estimate exceeds half the tolerance.
fn choose_omega(kappa_norm: f64, s: f64, cfg: &CoverageConfig) -> f64 {
    let mut omega = cfg.omega_start;
    while omega < cfg.omega_cap && subleading_tail_bound(kappa_norm, s, omega) > 0.5 * cfg.abs_tol {
        omega *= 2.0;
    }
    omega
}

/// Residual of the analytic tail correction: the neglected corrections to
/// the hypergeometric asymptote contribute O(Omega^(-2-s)). The constant is
/// an empirical bound with a 4x margin over measured errors.
fn subleading_tail_bound(kappa_norm: f64, s: f64, omega: f64) -> f64 {
    4.0 * kappa_norm / PI * omega.powf(-2.0 - s)
}

/// `int_Omega^inf w^(-1-s) (1 - e^{-i w / beta}) dw` with an error bound.
///
/// For `Omega/beta <= 25` the exact series around the complete integral
/// `-Gamma(-s) (i)^s` is used; beyond that, two integrations by parts of
/// the oscillatory piece.
fn j_factor(s: f64, beta: f64, omega: f64) -> Result<(Complex64, f64)> {
    let y = omega / beta;
    if y <= 25.0 {
        let gamma_neg_s = gamma_fn(2.0 - s)? / (s * (s - 1.0));
        let mut total =
            -gamma_neg_s * Complex64::from_polar(1.0, 0.5 * PI * s);
        let y_pow = y.powf(-s);
        let mut c = Complex64::new(1.0, 0.0); // (-i y)^n / n!
        for n in 1..=400 {
            c *= Complex64::new(0.0, -y) / n as f64;
            let term = c * (y_pow / (n as f64 - s));
            total += term;
            if term.norm() < 1e-18 * total.norm() && n as f64 > y {
                break;
            }
        }
        Ok((total * beta.powf(-s), 1e-15 * beta.powf(-s)))
    } else {
        let pp = 1.0 + s;
        let j1 = omega.powf(-s) / s;
        let osc = Complex64::from_polar(1.0, -omega / beta);
        let j2 = osc
            * (Complex64::new(0.0, -beta) * omega.powf(-pp)
                + Complex64::new(pp * beta * beta * omega.powf(-pp - 1.0), 0.0));
        let err = 2.0 * pp * (pp + 1.0) * beta.powi(3) * omega.powf(-pp - 2.0);
        Ok((Complex64::new(j1, 0.0) - j2, err))
    }
}

/// Panel seeds for the outer integral: arithmetic steps of half the kernel
/// oscillation period near the origin, then geometric growth.
fn omega_breakpoints(beta: f64, omega_hi: f64) -> Vec<f64> {
    let period = (2.0 * PI * beta).min(2.0 * PI);
    let w0 = 0.5 * period;
    let mut breaks = vec![0.0];
    let mut x = 0.0;
    let arith_end = (16.0 * w0).min(omega_hi);
    while x < arith_end {
        x += w0;
        breaks.push(x.min(omega_hi));
    }
    while *breaks.last().unwrap() < omega_hi {
        let next = (breaks.last().unwrap() * 1.4).min(omega_hi);
        breaks.push(next);
    }
    breaks.dedup();
    breaks
}

/// Clamp tiny out-of-range excursions, reflect them in the error bound, and
/// reject anything beyond tolerance.
fn finish_result(
    mut per_tier: Vec<f64>,
    mut err: f64,
    method: CoverageMethod,
    cfg: &CoverageConfig,
) -> Result<CoverageResult> {
    let out_tol = (100.0 * cfg.abs_tol).max(4.0 * err);
    for v in &per_tier {
        if *v < -out_tol {
            return Err(Error::Numeric {
                context: "coverage_probability",
                reason: format!("per-tier contribution {v} below zero beyond tolerance"),
            });
        }
    }
    for v in per_tier.iter_mut() {
        if *v < 0.0 {
            err = err.max(-*v);
            *v = 0.0;
        }
    }
    let mut value: f64 = per_tier.iter().sum();
    if value > 1.0 + out_tol {
        return Err(Error::Numeric {
            context: "coverage_probability",
            reason: format!("coverage {value} above one beyond tolerance"),
        });
    }
    if value > 1.0 {
        err = err.max(value - 1.0);
        let scale = 1.0 / value;
        for v in per_tier.iter_mut() {
            *v *= scale;
        }
        value = 1.0;
    }
    Ok(CoverageResult {
        value,
        method,
        error_estimate: err,
        per_tier: Some(per_tier),
    })
}
