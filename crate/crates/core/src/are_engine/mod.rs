//! Pitman ARE of T relative to S: numeric engine, MICD closed forms, the
//! three-condition equivalence check and the nondegeneracy diagnostics.

pub mod closed_form;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{association_means, mu_s, mu_t, sigma2_s_estimate, sigma2_t_estimate};
use crate::error::{Error, Result};
use crate::model_core::{kolmogorov_distance, variation_distance, DependenceModel, Integrand};
use crate::model_zoo::MicdVariant;
use crate::numdiff::{derivative, Stencil};
use crate::quadrature::extrapolate_to_zero;
use crate::scalar::Real;

pub use closed_form::Extended;

/// |μ'| below this counts as a vanishing derivative.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;
/// Richardson levels for the derivative-ratio path.
pub const RICHARDSON_LEVELS: usize = 2;
/// Tolerance of the "ratio (II) tends to 1" verdict.
pub const VERDICT_TOL: f64 = 1e-3;

const SECANT_LEVELS: usize = 8;
// Secants with |Δμ_T| below this carry too much roundoff to extrapolate.
const SECANT_NOISE: f64 = 1e-8;
const SECANT_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    #[default]
    TwoSided,
}

impl Side {
    fn stencil(self) -> Stencil {
        match self {
            Side::Left => Stencil::Backward,
            Side::Right => Stencil::Forward,
            Side::TwoSided => Stencil::Central,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::TwoSided => "two-sided",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "two-sided" => Ok(Side::TwoSided),
            _ => Err(Error::Config(format!("unknown side '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreMethod {
    ClosedForm,
    DerivativeRatio,
    LimitRatio,
}

impl AreMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AreMethod::ClosedForm => "closed-form",
            AreMethod::DerivativeRatio => "derivative-ratio",
            AreMethod::LimitRatio => "limit-ratio",
        }
    }
}

/// Quantities behind an ARE value. Closed-form results leave them empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AreDiagnostics<R> {
    pub dmu_t: Option<R>,
    pub dmu_s: Option<R>,
    pub sigma2_t: Option<R>,
    pub sigma2_s: Option<R>,
    pub step: Option<R>,
    pub residual: Option<R>,
    /// (h, Δμ_S/Δμ_T) along the shrinking secant sequence.
    pub secants: Vec<(R, R)>,
    /// Limit-ratio path: lower and upper value over the last three secants.
    pub bracket: Option<(R, R)>,
}

impl<R> Default for AreDiagnostics<R> {
    fn default() -> Self {
        AreDiagnostics {
            dmu_t: None,
            dmu_s: None,
            sigma2_t: None,
            sigma2_s: None,
            step: None,
            residual: None,
            secants: Vec::new(),
            bracket: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreResult<R> {
    pub model: String,
    pub theta0: R,
    pub side: Side,
    /// ARE value; `R::infinity()` for an infinite efficiency.
    pub value: R,
    pub method: AreMethod,
    pub diagnostics: AreDiagnostics<R>,
}

/// Finite-difference base step at θ₀.
pub fn default_step<R: Real>(theta0: R) -> R {
    R::lit(1e-4).max(R::lit(1e-3) * theta0.abs())
}

/// ARE from (σ²_S/σ²_T)·(μ'_T/μ'_S)², with a secant-limit fallback when the
/// derivatives vanish.
pub fn are_numeric<R: Real>(model: &dyn DependenceModel<R>, theta0: R, side: Side) -> Result<AreResult<R>> {
    let (room, st, ss) = base_point(model, theta0, side)?;
    let h = default_step(theta0);
    if room <= h {
        return Err(Error::domain(
            format!("{} ARE base point (step {})", model.name(), h.as_f64()),
            theta0.as_f64(),
            format!("at least one step inside {}", model.theta_domain()),
        ));
    }
    let mut ft = |t: R| mu_t(model, t);
    let dt = derivative(&mut ft, theta0, h, side.stencil(), RICHARDSON_LEVELS)?;
    let mut fs = |t: R| mu_s(model, t);
    let ds = derivative(&mut fs, theta0, h, side.stencil(), RICHARDSON_LEVELS)?;
    let thr = R::lit(DEGENERACY_THRESHOLD);
    let mut diagnostics = AreDiagnostics {
        dmu_t: Some(dt.value),
        dmu_s: Some(ds.value),
        sigma2_t: Some(st),
        sigma2_s: Some(ss),
        step: Some(h),
        residual: Some(dt.residual.max(ds.residual)),
        ..Default::default()
    };
    if dt.value.abs() >= thr && ds.value.abs() >= thr {
        let r = dt.value / ds.value;
        return Ok(AreResult {
            model: model.name().to_string(),
            theta0,
            side,
            value: ss / st * r * r,
            method: AreMethod::DerivativeRatio,
            diagnostics,
        });
    }
    let value = limit_ratio(model, theta0, side, room, st, ss, &mut diagnostics)?;
    Ok(AreResult {
        model: model.name().to_string(),
        theta0,
        side,
        value,
        method: AreMethod::LimitRatio,
        diagnostics,
    })
}

/// Domain checks shared by both ARE routes; returns the room to the domain
/// boundary on the requested side and the two null variances.
fn base_point<R: Real>(model: &dyn DependenceModel<R>, theta0: R, side: Side) -> Result<(R, R, R)> {
    model.check_theta(theta0)?;
    let dom = model.theta_domain();
    if !dom.contains_interior(theta0) {
        return Err(Error::domain(
            format!("{} ARE base point", model.name()),
            theta0.as_f64(),
            format!("interior of {dom}"),
        ));
    }
    let room = match side {
        Side::TwoSided => (theta0 - dom.lo).min(dom.hi - theta0),
        Side::Right => dom.hi - theta0,
        Side::Left => theta0 - dom.lo,
    };
    let st = sigma2_t_estimate(model, theta0)?.value;
    let ss = sigma2_s_estimate(model, theta0)?.value;
    Ok((room, st, ss))
}

/// ARE from the secant form alone, whatever the derivatives at θ₀.
pub fn are_limit_ratio<R: Real>(model: &dyn DependenceModel<R>, theta0: R, side: Side) -> Result<AreResult<R>> {
    let (room, st, ss) = base_point(model, theta0, side)?;
    let mut diagnostics = AreDiagnostics {
        sigma2_t: Some(st),
        sigma2_s: Some(ss),
        ..Default::default()
    };
    let value = limit_ratio(model, theta0, side, room, st, ss, &mut diagnostics)?;
    Ok(AreResult {
        model: model.name().to_string(),
        theta0,
        side,
        value,
        method: AreMethod::LimitRatio,
        diagnostics,
    })
}

/// Secant form: (σ²_S/σ²_T)·lim (Δμ_T/Δμ_S)², extrapolated in h from a
/// halving sequence of steps. The extrapolated quantity is Δμ_S/Δμ_T so that
/// an infinite efficiency shows up as a zero limit.
fn limit_ratio<R: Real>(
    model: &dyn DependenceModel<R>,
    theta0: R,
    side: Side,
    room: R,
    st: R,
    ss: R,
    diagnostics: &mut AreDiagnostics<R>,
) -> Result<R> {
    let base_t = mu_t(model, theta0)?;
    let base_s = mu_s(model, theta0)?;
    let mut h = R::lit(0.2).min(room * R::lit(0.25));
    let noise = R::lit(SECANT_NOISE);
    let (mut hs, mut rs) = (Vec::new(), Vec::new());
    for _ in 0..SECANT_LEVELS {
        let (dt, ds) = match side {
            Side::TwoSided => (
                mu_t(model, theta0 + h)? - mu_t(model, theta0 - h)?,
                mu_s(model, theta0 + h)? - mu_s(model, theta0 - h)?,
            ),
            Side::Right => (mu_t(model, theta0 + h)? - base_t, mu_s(model, theta0 + h)? - base_s),
            Side::Left => (base_t - mu_t(model, theta0 - h)?, base_s - mu_s(model, theta0 - h)?),
        };
        if dt.abs() > noise {
            hs.push(h);
            rs.push(ds / dt);
        }
        h = h * R::half();
    }
    diagnostics.secants = hs.iter().copied().zip(rs.iter().copied()).collect();
    if hs.len() < 3 {
        return Err(Error::Inconclusive(format!(
            "{}: μ_T does not move away from θ₀ = {} at resolvable steps",
            model.name(),
            theta0.as_f64()
        )));
    }
    let n = hs.len();
    let full = extrapolate_to_zero(&hs[n - 4.min(n)..], &rs[n - 4.min(n)..]);
    let short = extrapolate_to_zero(&hs[n - 3..], &rs[n - 3..]);
    let scale = rs.iter().fold(R::zero(), |m, r| m.max(r.abs()));
    let to_value = |r: R| {
        if r == R::zero() {
            R::infinity()
        } else {
            ss / st / (r * r)
        }
    };
    let tail: Vec<R> = rs[n - 3..].iter().map(|&r| to_value(r)).collect();
    let lo = tail.iter().fold(R::infinity(), |m, &v| m.min(v));
    let hi = tail.iter().fold(R::zero(), |m, &v| m.max(v));
    diagnostics.bracket = Some((lo, hi));
    // a limit of Δμ_S/Δμ_T that is zero at the resolution of the data
    if full.abs() <= R::lit(SECANT_REL_TOL) * scale && short.abs() <= R::lit(SECANT_REL_TOL) * scale {
        return Ok(R::infinity());
    }
    if (full - short).abs() > R::lit(SECANT_REL_TOL) * full.abs() {
        return Err(Error::Inconclusive(format!(
            "{}: secant ratio at θ₀ = {} does not stabilise ({} vs {})",
            model.name(),
            theta0.as_f64(),
            full.as_f64(),
            short.as_f64()
        )));
    }
    Ok(to_value(full))
}

/// The paper's MICD closed form at |θ|, θ ∈ (−1, 1).
pub fn are_closed_micd<R: Real>(variant: MicdVariant, theta: R) -> Result<R> {
    if !(theta.abs() < R::one()) {
        return Err(Error::domain(
            format!("{} closed-form ARE", variant.registry_name()),
            theta.as_f64(),
            "(-1, 1)",
        ));
    }
    Ok(match closed_form::are(variant, &theta.abs()) {
        Extended::Finite(v) => v,
        Extended::Infinite => R::infinity(),
    })
}

/// Closed-form result record for a MICD model.
pub fn are_closed_result<R: Real>(variant: MicdVariant, theta0: R) -> Result<AreResult<R>> {
    Ok(AreResult {
        model: variant.registry_name().to_string(),
        theta0,
        side: Side::TwoSided,
        value: are_closed_micd(variant, theta0)?,
        method: AreMethod::ClosedForm,
        diagnostics: AreDiagnostics::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AreIsOne,
    AreNotOne,
    Inconclusive,
}

/// Ratios (II) and (III) of the equivalence theorem along a θ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck<R> {
    pub model: String,
    pub theta: Vec<R>,
    pub e_theta_a: Vec<R>,
    pub e_null_a: Vec<R>,
    /// E_θ a_θ / E_0 a_θ.
    pub ratio_ii: Vec<R>,
    /// ∫a_θ d(F_θ − F_0) / ∫a_θ dF_0.
    pub ratio_iii: Vec<R>,
    /// Extrapolation of ratio (II) to θ = 0.
    pub limit: Option<R>,
    pub verdict: Verdict,
    pub tolerance: R,
    pub notes: Vec<String>,
}

/// Evaluates both ratios on a decreasing positive grid and decides whether
/// ratio (II) tends to 1.
pub fn theorem_check<R: Real>(model: &dyn DependenceModel<R>, theta_grid: &[R]) -> Result<TheoremCheck<R>> {
    if theta_grid.is_empty() {
        return Err(Error::Config("empty θ grid".into()));
    }
    if theta_grid.iter().any(|&t| t <= R::zero()) || theta_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("θ grid must be positive and strictly decreasing".into()));
    }
    let floor = R::lit(1e-14);
    let mut out = TheoremCheck {
        model: model.name().to_string(),
        theta: Vec::new(),
        e_theta_a: Vec::new(),
        e_null_a: Vec::new(),
        ratio_ii: Vec::new(),
        ratio_iii: Vec::new(),
        limit: None,
        verdict: Verdict::Inconclusive,
        tolerance: R::lit(VERDICT_TOL),
        notes: vec!["the equivalence assumes μ_T(θ) and μ_S(θ) have the sign of θ near 0".into()],
    };
    for &th in theta_grid {
        let (et, e0) = association_means(model, th)?;
        let a = |u: R, v: R| model.copula(th, u, v) - u * v;
        let k = model.kinks(th);
        let g = Integrand::new(&a).with_breaks(k.clone(), k);
        let signed = model.signed_expect(th, &g)?;
        out.theta.push(th);
        out.e_theta_a.push(et.value);
        out.e_null_a.push(e0.value);
        if e0.value.abs() > floor {
            out.ratio_ii.push(et.value / e0.value);
            out.ratio_iii.push(signed.value / e0.value);
        } else {
            out.ratio_ii.push(R::nan());
            out.ratio_iii.push(R::nan());
        }
    }
    let usable: Vec<(R, R)> = out
        .theta
        .iter()
        .zip(&out.ratio_ii)
        .filter(|(_, r)| r.is_finite())
        .map(|(&t, &r)| (t, r))
        .collect();
    if usable.is_empty() {
        out.notes.push("E_0 a_θ vanishes on the whole grid: nondegeneracy fails".into());
        return Ok(out);
    }
    let tail = &usable[usable.len().saturating_sub(4)..];
    let xs: Vec<R> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<R> = tail.iter().map(|p| p.1).collect();
    let full = extrapolate_to_zero(&xs, &ys);
    let short = if xs.len() > 1 {
        extrapolate_to_zero(&xs[1..], &ys[1..])
    } else {
        full
    };
    out.limit = Some(full);
    let tol = out.tolerance;
    let near = |v: R| (v - R::one()).abs() <= tol;
    out.verdict = match (near(full), near(short)) {
        (true, true) => Verdict::AreIsOne,
        (false, false) => Verdict::AreNotOne,
        _ => Verdict::Inconclusive,
    };
    Ok(out)
}

/// Numerical counterparts of the sufficient nondegeneracy conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SndDiagnostics<R> {
    pub theta: R,
    /// (1/θ)∫(F_θ − F_0)dF_0.
    pub slope: R,
    /// ∫(∂F_θ/∂θ at 0)dF_0, by differences of ∫(F_h − F_0)dF_0.
    pub deriv_integral: R,
    /// Variation distance d(θ).
    pub d: R,
    /// Kolmogorov distance ρ(θ).
    pub rho: R,
    /// d(θ)ρ(θ)/|θ|.
    pub product_over_theta: R,
}

/// Grid resolution used for d and ρ in [`snd_diagnostics`].
pub const SND_RESOLUTION: usize = 256;

pub fn snd_diagnostics<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<SndDiagnostics<R>> {
    model.check_theta(theta)?;
    if theta == R::zero() {
        return Err(Error::domain("nondegeneracy diagnostics", 0.0, "θ ≠ 0"));
    }
    let (_, e0) = association_means(model, theta)?;
    let mut null_mean = |t: R| -> Result<R> {
        if t == R::zero() {
            Ok(R::zero())
        } else {
            Ok(association_means(model, t)?.1.value)
        }
    };
    let dom = model.theta_domain();
    let h = R::lit(1e-3).min((dom.hi.min(-dom.lo)) * R::lit(0.25));
    let deriv = derivative(&mut null_mean, R::zero(), h, Stencil::Central, RICHARDSON_LEVELS)?;
    let d = variation_distance(model, theta, SND_RESOLUTION)?.value;
    let rho = kolmogorov_distance(model, theta, SND_RESOLUTION)?;
    Ok(SndDiagnostics {
        theta,
        slope: e0.value / theta,
        deriv_integral: deriv.value,
        d,
        rho,
        product_over_theta: d * rho / theta.abs(),
    })
}
