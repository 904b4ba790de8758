//! Absolutely continuous copula families integrated with tensor Gauss–Legendre.

use crate::error::Result;
use crate::model_core::{
    density_grid_variation, uniform_cdf, DependenceModel, Distance, Evaluation, Integrand,
    PairedSample, Support, ThetaDomain,
};
use crate::quadrature::{Estimate, GaussLegendre};
use crate::scalar::{clamp, Real};

use super::inversion::{invert_increasing, open01, sample_with};

/// A one-parameter copula with a density and a conditional cdf ∂C/∂u.
pub trait CopulaFamily<R: Real>: Clone + Send + Sync + 'static {
    fn name(&self) -> &str;
    fn theta_domain(&self) -> ThetaDomain<R>;
    fn cdf(&self, theta: R, u: R, v: R) -> R;
    fn density(&self, theta: R, u: R, v: R) -> R;
    /// ∂C/∂u, the conditional cdf of V given U = u.
    fn conditional(&self, theta: R, u: R, v: R) -> R;
}

/// Dependence model on [0,1]² with uniform marginals backed by a [`CopulaFamily`].
#[derive(Clone)]
pub struct SmoothCopula<R: Real, F> {
    family: F,
    rule: GaussLegendre<R>,
    check: GaussLegendre<R>,
}

impl<R: Real, F: CopulaFamily<R>> SmoothCopula<R, F> {
    pub fn new(family: F, order: usize) -> Self {
        SmoothCopula {
            family,
            rule: GaussLegendre::new(order),
            check: GaussLegendre::new((order / 2).max(1)),
        }
    }

    pub fn family(&self) -> &F {
        &self.family
    }

    fn tensor(&self, rule: &GaussLegendre<R>, g: &Integrand<'_, R>, weight: &dyn Fn(R, R) -> R) -> R {
        let pu = partition(&g.breaks_u);
        let pv = partition(&g.breaks_v);
        let mut total = R::zero();
        for iu in pu.windows(2) {
            for iv in pv.windows(2) {
                total = total + rule.integrate_2d(iu[0], iu[1], iv[0], iv[1], |u, v| g.eval(u, v) * weight(u, v));
            }
        }
        total
    }
}

/// Sorted cut points of [0,1] including the interior hints.
pub(crate) fn partition<R: Real>(hints: &[R]) -> Vec<R> {
    let mut p = vec![R::zero(), R::one()];
    p.extend(hints.iter().copied().filter(|&b| b > R::zero() && b < R::one()));
    p.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    p.dedup();
    p
}

impl<R: Real, F: CopulaFamily<R>> DependenceModel<R> for SmoothCopula<R, F> {
    fn name(&self) -> &str {
        self.family.name()
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        self.family.theta_domain()
    }

    fn support(&self) -> Support<R> {
        Support {
            x: (R::zero(), R::one()),
            y: (R::zero(), R::one()),
        }
    }

    fn marginal_x(&self, x: R) -> R {
        uniform_cdf(x, R::zero(), R::one())
    }

    fn marginal_y(&self, y: R) -> R {
        uniform_cdf(y, R::zero(), R::one())
    }

    fn quantile_x(&self, u: R) -> R {
        u
    }

    fn quantile_y(&self, v: R) -> R {
        v
    }

    fn copula(&self, theta: R, u: R, v: R) -> R {
        let (u, v) = (clamp(u, R::zero(), R::one()), clamp(v, R::zero(), R::one()));
        self.family.cdf(theta, u, v)
    }

    fn copula_mean_over_v(&self, theta: R, u: R) -> R {
        self.rule.integrate(R::zero(), R::one(), |v| self.family.cdf(theta, u, v))
    }

    fn copula_mean_over_u(&self, theta: R, v: R) -> R {
        self.rule.integrate(R::zero(), R::one(), |u| self.family.cdf(theta, u, v))
    }

    fn expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let w = |u: R, v: R| self.family.density(theta, u, v);
        let value = self.tensor(&self.rule, g, &w);
        let coarse = self.tensor(&self.check, g, &w);
        Ok(Estimate {
            value,
            error: (value - coarse).abs(),
        })
    }

    fn signed_expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let w = |u: R, v: R| self.family.density(theta, u, v) - R::one();
        let value = self.tensor(&self.rule, g, &w);
        let coarse = self.tensor(&self.check, g, &w);
        Ok(Estimate {
            value,
            error: (value - coarse).abs(),
        })
    }

    fn variation_distance(&self, theta: R, resolution: usize) -> Result<Distance<R>> {
        Ok(Distance {
            value: density_grid_variation(|u, v| self.family.density(theta, u, v), resolution),
            evaluation: Evaluation::Density,
        })
    }

    fn sample(&self, theta: R, n: usize, seed: u64) -> Result<PairedSample<R>> {
        self.check_theta(theta)?;
        let tol = R::lit(1e-12);
        sample_with(n, theta, seed, |rng| {
            let u: R = open01(rng);
            let w: R = open01(rng);
            let v = invert_increasing(
                |v| self.family.conditional(theta, u, v),
                |v| self.family.density(theta, u, v),
                w,
                R::zero(),
                R::one(),
                tol,
            )?;
            Ok((u, v))
        })
    }

    fn refined(&self) -> Box<dyn DependenceModel<R>> {
        Box::new(SmoothCopula::new(self.family.clone(), 2 * self.rule.order()))
    }
}
