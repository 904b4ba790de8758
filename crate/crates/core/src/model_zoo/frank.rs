use crate::model_core::ThetaDomain;
use crate::scalar::Real;

use super::smooth::CopulaFamily;

/// Below this |θ| the Frank copula is evaluated from its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Frank's copula, extended to θ = 0 by continuity.
#[derive(Debug, Clone, Copy, Default)]
pub struct Frank;

/// −(1/θ)·ln(1 − (1−e^{−θu})(1−e^{−θv})/(1−e^{−θ})), with C_0 = uv.
pub fn frank_cdf<R: Real>(theta: R, u: R, v: R) -> R {
    if theta.abs() < R::lit(SERIES_THRESHOLD) {
        return frank_series(theta, u, v);
    }
    let a = -(-theta).exp_m1();
    let au = -(-theta * u).exp_m1();
    let av = -(-theta * v).exp_m1();
    -(-(au * av / a)).ln_1p() / theta
}

/// Taylor polynomial of the Frank copula in θ through θ³.
fn frank_series<R: Real>(theta: R, u: R, v: R) -> R {
    let (uu, vv) = (u * (R::one() - u), v * (R::one() - v));
    let (su, sv) = (R::one() - R::two() * u, R::one() - R::two() * v);
    let c1 = uu * vv * R::half();
    let c2 = uu * vv * su * sv / R::lit(12.0);
    let six = R::lit(6.0);
    let q = six * u * u * v * v - six * u * u * v + u * u - six * u * v * v + six * u * v - u + v * v - v;
    let c3 = uu * vv * q / R::lit(24.0);
    u * v + theta * (c1 + theta * (c2 + theta * c3))
}

impl<R: Real> CopulaFamily<R> for Frank {
    fn name(&self) -> &str {
        "frank"
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        ThetaDomain::open(R::neg_infinity(), R::infinity())
    }

    fn cdf(&self, theta: R, u: R, v: R) -> R {
        frank_cdf(theta, u, v)
    }

    fn density(&self, theta: R, u: R, v: R) -> R {
        if theta.abs() < R::lit(SERIES_THRESHOLD) {
            return R::one() + theta * R::half() * (R::one() - R::two() * u) * (R::one() - R::two() * v);
        }
        let a = -(-theta).exp_m1();
        let au = -(-theta * u).exp_m1();
        let av = -(-theta * v).exp_m1();
        let den = a - au * av;
        theta * a * (-theta * (u + v)).exp() / (den * den)
    }

    fn conditional(&self, theta: R, u: R, v: R) -> R {
        if theta.abs() < R::lit(SERIES_THRESHOLD) {
            return v + theta * R::half() * v * (R::one() - v) * (R::one() - R::two() * u);
        }
        let a = -(-theta).exp_m1();
        let au = -(-theta * u).exp_m1();
        let av = -(-theta * v).exp_m1();
        (-theta * u).exp() * av / (a - au * av)
    }
}
