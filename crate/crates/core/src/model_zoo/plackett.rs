use crate::error::{Error, Result};
use crate::model_core::ThetaDomain;
use crate::scalar::Real;

use super::smooth::CopulaFamily;

/// Plackett's constant-odds-ratio copula; θ = odds ratio − 1 > −1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Plackett;

/// Root of F − uv = θ(u − F)(v − F) inside the Fréchet bounds, in the
/// cancellation-free form.
pub fn plackett_cdf<R: Real>(theta: R, u: R, v: R) -> Result<R> {
    if !(theta > -R::one()) {
        return Err(Error::domain("Plackett parameter", theta.as_f64(), "(-1, inf)"));
    }
    Ok(plackett_raw(theta, u, v))
}

fn plackett_raw<R: Real>(theta: R, u: R, v: R) -> R {
    let two = R::two();
    let disc = plackett_disc(theta, u, v);
    two * (theta + R::one()) * u * v / (R::one() + theta * (u + v) + disc.sqrt())
}

fn plackett_disc<R: Real>(theta: R, u: R, v: R) -> R {
    let d = u - v;
    (R::one() + R::two() * theta * (u + v - R::two() * u * v) + theta * theta * d * d).max(R::zero())
}

impl<R: Real> CopulaFamily<R> for Plackett {
    fn name(&self) -> &str {
        "plackett"
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        ThetaDomain::open(-R::one(), R::infinity())
    }

    fn cdf(&self, theta: R, u: R, v: R) -> R {
        plackett_raw(theta, u, v)
    }

    fn density(&self, theta: R, u: R, v: R) -> R {
        let d = plackett_disc(theta, u, v);
        (theta + R::one()) * (R::one() + theta * (u + v - R::two() * u * v)) / (d * d.sqrt())
    }

    fn conditional(&self, theta: R, u: R, v: R) -> R {
        let s = R::one() + theta * (u + v);
        let d = plackett_disc(theta, u, v);
        R::half() - (s - R::two() * v * (theta + R::one())) / (R::two() * d.sqrt())
    }
}
