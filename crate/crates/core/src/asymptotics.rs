//! Asymptotic means and variances of Tₙ and Sₙ under F_θ.
//!
//! With (U, V) = (G(X), H(Y)) and C_θ the copula:
//! μ_T = 4E C_θ(U,V) − 1, μ_S = 12E[UV] − 3,
//! σ²_T = 16 Var(2C_θ(U,V) − U − V),
//! σ²_S = 144 Var((1−U)(1−V) + ∫C_θ(U,v)dv + ∫C_θ(u,V)du).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model_core::{DependenceModel, Integrand};
use crate::quadrature::Estimate;
use crate::scalar::Real;

/// Variances below this are reported as degenerate.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    ExactDecomposition,
    Quadrature,
    MonteCarlo,
}

/// (μ_T, σ²_T, μ_S, σ²_S) at θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMoments<R> {
    pub theta: R,
    pub mu_t: R,
    pub sigma2_t: R,
    pub mu_s: R,
    pub sigma2_s: R,
    pub method: MomentMethod,
    /// Sum of the quadrature error estimates of the four functionals.
    pub est_error: R,
}

fn method_of<R: Real>(model: &dyn DependenceModel<R>) -> MomentMethod {
    if model.is_exact() {
        MomentMethod::ExactDecomposition
    } else {
        MomentMethod::Quadrature
    }
}

fn kinks<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Vec<R> {
    model.kinks(theta)
}

fn expect_with_kinks<R: Real>(
    model: &dyn DependenceModel<R>,
    theta: R,
    f: &dyn Fn(R, R) -> R,
) -> Result<Estimate<R>> {
    let k = kinks(model, theta);
    let g = Integrand::new(f).with_breaks(k.clone(), k);
    model.expect(theta, &g)
}

/// 4E_θ C_θ(U,V) − 1 with its quadrature error.
pub fn mu_t_estimate<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<Estimate<R>> {
    model.check_theta(theta)?;
    let four = R::lit(4.0);
    let c = |u: R, v: R| model.copula(theta, u, v);
    let e = expect_with_kinks(model, theta, &c)?;
    Ok(Estimate {
        value: four * e.value - R::one(),
        error: four * e.error,
    })
}

/// 12E_θ[UV] − 3 with its quadrature error.
pub fn mu_s_estimate<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<Estimate<R>> {
    model.check_theta(theta)?;
    let twelve = R::lit(12.0);
    let uv = |u: R, v: R| u * v;
    let e = expect_with_kinks(model, theta, &uv)?;
    Ok(Estimate {
        value: twelve * e.value - R::lit(3.0),
        error: twelve * e.error,
    })
}

/// Var_θ W in the centred two-pass form E[(W − EW)²].
fn variance<R: Real>(model: &dyn DependenceModel<R>, theta: R, w: &dyn Fn(R, R) -> R) -> Result<Estimate<R>> {
    let m = expect_with_kinks(model, theta, w)?;
    let sq = |u: R, v: R| {
        let d = w(u, v) - m.value;
        d * d
    };
    let var = expect_with_kinks(model, theta, &sq)?;
    Ok(var)
}

fn check_floor<R: Real>(what: &str, v: R) -> Result<R> {
    if v < R::lit(VARIANCE_FLOOR) {
        Err(Error::Degeneracy {
            what: what.to_string(),
            value: v.as_f64(),
            threshold: VARIANCE_FLOOR,
        })
    } else {
        Ok(v)
    }
}

/// 16 Var_θ(2C_θ(U,V) − U − V) with its quadrature error.
pub fn sigma2_t_estimate<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<Estimate<R>> {
    model.check_theta(theta)?;
    let w = |u: R, v: R| R::two() * model.copula(theta, u, v) - u - v;
    let var = variance(model, theta, &w)?;
    let k = R::lit(16.0);
    Ok(Estimate {
        value: check_floor("sigma2_T", k * var.value)?,
        error: k * var.error,
    })
}

/// 144 Var_θ((1−U)(1−V) + ∫C_θ(U,v)dv + ∫C_θ(u,V)du) with its quadrature error.
pub fn sigma2_s_estimate<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<Estimate<R>> {
    model.check_theta(theta)?;
    let w = |u: R, v: R| {
        (R::one() - u) * (R::one() - v) + model.copula_mean_over_v(theta, u) + model.copula_mean_over_u(theta, v)
    };
    let var = variance(model, theta, &w)?;
    let k = R::lit(144.0);
    Ok(Estimate {
        value: check_floor("sigma2_S", k * var.value)?,
        error: k * var.error,
    })
}

pub fn mu_t<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<R> {
    Ok(mu_t_estimate(model, theta)?.value)
}

pub fn mu_s<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<R> {
    Ok(mu_s_estimate(model, theta)?.value)
}

pub fn sigma2_t<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<R> {
    Ok(sigma2_t_estimate(model, theta)?.value)
}

pub fn sigma2_s<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<R> {
    Ok(sigma2_s_estimate(model, theta)?.value)
}

/// All four functionals at θ.
pub fn moments<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<AsymptoticMoments<R>> {
    let mt = mu_t_estimate(model, theta)?;
    let ms = mu_s_estimate(model, theta)?;
    let st = sigma2_t_estimate(model, theta)?;
    let ss = sigma2_s_estimate(model, theta)?;
    Ok(AsymptoticMoments {
        theta,
        mu_t: mt.value,
        sigma2_t: st.value,
        mu_s: ms.value,
        sigma2_s: ss.value,
        method: method_of(model),
        est_error: mt.error + ms.error + st.error + ss.error,
    })
}

/// E_θ a_θ(U,V) and E_0 a_θ(U,V) for the association a_θ = C_θ − uv.
pub fn association_means<R: Real>(model: &dyn DependenceModel<R>, theta: R) -> Result<(Estimate<R>, Estimate<R>)> {
    model.check_theta(theta)?;
    let a = |u: R, v: R| model.copula(theta, u, v) - u * v;
    let under_theta = expect_with_kinks(model, theta, &a)?;
    let k = kinks(model, theta);
    let g = Integrand::new(&a).with_breaks(k.clone(), k);
    let under_null = model.expect(R::zero(), &g)?;
    Ok((under_theta, under_null))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_zoo::model_by_name;

    #[test]
    fn null_constants_for_micd() {
        for name in ["micd-as", "micd-ol"] {
            let m = model_by_name::<f64>(name).unwrap();
            let mo = moments(m.as_ref(), 0.0).unwrap();
            assert!(mo.mu_t.abs() < 1e-14 && mo.mu_s.abs() < 1e-14, "{mo:?}");
            assert!((mo.sigma2_t - 4.0 / 9.0).abs() < 1e-13);
            assert!((mo.sigma2_s - 1.0).abs() < 1e-13);
            assert_eq!(mo.method, MomentMethod::ExactDecomposition);
        }
    }

    #[test]
    fn fgm_mu_s_is_linear() {
        let m = model_by_name::<f64>("fgm").unwrap();
        for th in [-0.6, 0.3, 0.9] {
            assert!((mu_s(m.as_ref(), th).unwrap() - th / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn al_identities() {
        let m = model_by_name::<f64>("micd-al").unwrap();
        for th in [0.2, 0.5] {
            let (et, e0) = association_means(m.as_ref(), th).unwrap();
            assert!((et.value - (3.0 - th) * th * th / 12.0).abs() < 1e-13);
            assert!((e0.value - th * th * th / 12.0).abs() < 1e-13);
            let mt = mu_t(m.as_ref(), th).unwrap();
            let ms = mu_s(m.as_ref(), th).unwrap();
            assert!((3.0 * mt - ms - 12.0 * et.value).abs() < 1e-12);
            assert!((ms - 12.0 * e0.value).abs() < 1e-12);
        }
    }
}
