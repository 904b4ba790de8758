//! Linear models F_θ = F_0 + θΔ on the unit square.

use crate::model_core::ThetaDomain;
use crate::scalar::Real;

use super::smooth::CopulaFamily;

/// A perturbation Δ vanishing on the boundary of [0,1]², given with ∂Δ/∂u
/// and ∂²Δ/∂u∂v.
#[derive(Clone, Copy)]
pub struct LinearModelSpec<R> {
    pub name: &'static str,
    pub delta: fn(R, R) -> R,
    pub delta_du: fn(R, R) -> R,
    pub delta_density: fn(R, R) -> R,
    pub theta_domain: ThetaDomain<R>,
}

impl<R: Real> LinearModelSpec<R> {
    /// Builds the spec and derives the θ-range keeping 1 + θ·∂²Δ/∂u∂v ≥ 0 on
    /// a 401×401 grid. The range is not claimed to be sharp.
    pub fn new(
        name: &'static str,
        delta: fn(R, R) -> R,
        delta_du: fn(R, R) -> R,
        delta_density: fn(R, R) -> R,
    ) -> Self {
        let n = 400;
        let (mut lo, mut hi) = (R::zero(), R::zero());
        for i in 0..=n {
            for j in 0..=n {
                let d = delta_density(R::count(i) / R::count(n), R::count(j) / R::count(n));
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        let upper = if lo < R::zero() { -lo.recip() } else { R::infinity() };
        let lower = if hi > R::zero() { -hi.recip() } else { R::neg_infinity() };
        LinearModelSpec {
            name,
            delta,
            delta_du,
            delta_density,
            theta_domain: ThetaDomain::open(lower, upper),
        }
    }

    /// Farlie–Gumbel–Morgenstern: Δ = uv(1−u)(1−v).
    pub fn fgm() -> Self {
        fn delta<R: Real>(u: R, v: R) -> R {
            u * v * (R::one() - u) * (R::one() - v)
        }
        fn delta_du<R: Real>(u: R, v: R) -> R {
            (R::one() - R::two() * u) * v * (R::one() - v)
        }
        fn delta_density<R: Real>(u: R, v: R) -> R {
            (R::one() - R::two() * u) * (R::one() - R::two() * v)
        }
        Self::new("fgm", delta::<R>, delta_du::<R>, delta_density::<R>)
    }
}

impl<R: Real> CopulaFamily<R> for LinearModelSpec<R> {
    fn name(&self) -> &str {
        self.name
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        self.theta_domain
    }

    fn cdf(&self, theta: R, u: R, v: R) -> R {
        u * v + theta * (self.delta)(u, v)
    }

    fn density(&self, theta: R, u: R, v: R) -> R {
        R::one() + theta * (self.delta_density)(u, v)
    }

    fn conditional(&self, theta: R, u: R, v: R) -> R {
        v + theta * (self.delta_du)(u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fgm_domain_is_unit_interval() {
        let spec = LinearModelSpec::<f64>::fgm();
        assert!((spec.theta_domain.lo + 1.0).abs() < 1e-12);
        assert!((spec.theta_domain.hi - 1.0).abs() < 1e-12);
        assert!(!spec.theta_domain.closed);
    }

    #[test]
    fn fgm_vanishes_on_boundary() {
        let spec = LinearModelSpec::<f64>::fgm();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert_eq!((spec.delta)(t, 1.0), 0.0);
            assert_eq!((spec.delta)(1.0, t), 0.0);
            assert_eq!((spec.delta)(0.0, t), 0.0);
        }
    }
}
