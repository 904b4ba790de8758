use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model_core::{
    density_grid_variation, DependenceModel, Distance, Evaluation, Integrand, PairedSample, Support,
    ThetaDomain,
};
use crate::quadrature::{Estimate, GaussLegendre};
use crate::scalar::{clamp, Real};
use crate::special::{bvn_cdf as bvnd, norm_cdf, norm_pdf, norm_ppf};

use super::inversion::sample_with;
use super::smooth::partition;

/// Normal-space integrals are truncated at ±Z_MAX, where the tail mass is below 1e-18.
const Z_MAX: f64 = 9.0;

/// Standard bivariate normal cdf with correlation `rho`.
pub fn bvn_cdf<R: Real>(rho: R, x: R, y: R) -> Result<R> {
    if !(rho.abs() < R::one()) {
        return Err(Error::domain("BVN correlation", rho.as_f64(), "(-1, 1)"));
    }
    Ok(bvnd(x, y, rho))
}

/// Bivariate normal with standard normal marginals; θ is the correlation.
///
/// Expectations run in normal space: U = Φ(Z₁), V = Φ(ρZ₁ + √(1−ρ²)Z₂) with
/// Z₁, Z₂ independent standard normals, which keeps the integrand smooth at the
/// edges of the copula square.
#[derive(Debug, Clone)]
pub struct Bvn<R> {
    rule: GaussLegendre<R>,
    check: GaussLegendre<R>,
}

impl<R: Real> Bvn<R> {
    pub fn new(order: usize) -> Self {
        Bvn {
            rule: GaussLegendre::new(order),
            check: GaussLegendre::new((order / 2).max(1)),
        }
    }

    /// Break points in normal space: `breaks` mapped through Φ⁻¹, inside ±Z_MAX.
    fn z_partition(breaks: &[R]) -> Vec<R> {
        let z = R::lit(Z_MAX);
        let mut p = vec![-z, R::zero(), z];
        p.extend(
            partition(breaks)
                .into_iter()
                .filter(|&b| b > R::zero() && b < R::one())
                .map(norm_ppf)
                .filter(|&b| b.abs() < z),
        );
        p.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        p.dedup();
        p
    }

    /// ∫ f(z) φ(z) dz over the truncated line.
    fn gauss_line<F: FnMut(R) -> R>(rule: &GaussLegendre<R>, mut f: F) -> R {
        let z = R::lit(Z_MAX);
        rule.integrate(-z, R::zero(), |t| f(t) * norm_pdf(t)) + rule.integrate(R::zero(), z, |t| f(t) * norm_pdf(t))
    }

    fn tensor(&self, rule: &GaussLegendre<R>, theta: R, g: &Integrand<'_, R>) -> R {
        let s = (R::one() - theta * theta).sqrt();
        let pz = Self::z_partition(&g.breaks_u);
        let mut total = R::zero();
        for iz in pz.windows(2) {
            total = total
                + rule.integrate(iz[0], iz[1], |z1| {
                    let u = norm_cdf(z1);
                    norm_pdf(z1) * Self::gauss_line(rule, |z2| g.eval(u, norm_cdf(theta * z1 + s * z2)))
                });
        }
        total
    }

    fn density(rho: R, u: R, v: R) -> R {
        let (x, y) = (norm_ppf(u), norm_ppf(v));
        let q = R::one() - rho * rho;
        let e = -(rho * rho * (x * x + y * y) - R::two() * rho * x * y) / (R::two() * q);
        e.exp() / q.sqrt()
    }
}

impl<R: Real> DependenceModel<R> for Bvn<R> {
    fn name(&self) -> &str {
        "bvn"
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        ThetaDomain::open(-R::one(), R::one())
    }

    fn support(&self) -> Support<R> {
        let inf = R::infinity();
        Support {
            x: (-inf, inf),
            y: (-inf, inf),
        }
    }

    fn marginal_x(&self, x: R) -> R {
        norm_cdf(x)
    }

    fn marginal_y(&self, y: R) -> R {
        norm_cdf(y)
    }

    fn quantile_x(&self, u: R) -> R {
        norm_ppf(u)
    }

    fn quantile_y(&self, v: R) -> R {
        norm_ppf(v)
    }

    fn copula(&self, theta: R, u: R, v: R) -> R {
        let (u, v) = (clamp(u, R::zero(), R::one()), clamp(v, R::zero(), R::one()));
        if u == R::zero() || v == R::zero() {
            return R::zero();
        }
        if u == R::one() {
            return v;
        }
        if v == R::one() {
            return u;
        }
        bvnd(norm_ppf(u), norm_ppf(v), theta)
    }

    // ∫C(u,v)dv = P(X ≤ Φ⁻¹(u), Y − Z ≤ 0) with Z an independent normal,
    // and corr(X, Y − Z) = ρ/√2.
    fn copula_mean_over_v(&self, theta: R, u: R) -> R {
        let u = clamp(u, R::zero(), R::one());
        if u == R::zero() {
            return R::zero();
        }
        if u == R::one() {
            return R::lit(0.5);
        }
        bvnd(norm_ppf(u), R::zero(), theta / R::two().sqrt())
    }

    fn copula_mean_over_u(&self, theta: R, v: R) -> R {
        self.copula_mean_over_v(theta, v)
    }

    fn expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let value = self.tensor(&self.rule, theta, g);
        let coarse = self.tensor(&self.check, theta, g);
        Ok(Estimate {
            value,
            error: (value - coarse).abs(),
        })
    }

    fn signed_expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let a = self.expect(theta, g)?;
        let b = self.expect(R::zero(), g)?;
        Ok(Estimate {
            value: a.value - b.value,
            error: a.error + b.error,
        })
    }

    fn variation_distance(&self, theta: R, resolution: usize) -> Result<Distance<R>> {
        Ok(Distance {
            value: density_grid_variation(|u, v| Self::density(theta, u, v), resolution),
            evaluation: Evaluation::Density,
        })
    }

    fn sample(&self, theta: R, n: usize, seed: u64) -> Result<PairedSample<R>> {
        self.check_theta(theta)?;
        let s = (R::one() - theta * theta).sqrt();
        sample_with(n, theta, seed, |rng| {
            let z1: f64 = StandardNormal.sample(rng);
            let z2: f64 = StandardNormal.sample(rng);
            let (z1, z2) = (R::lit(z1), R::lit(z2));
            Ok((z1, theta * z1 + s * z2))
        })
    }

    fn refined(&self) -> Box<dyn DependenceModel<R>> {
        Box::new(Bvn::new(2 * self.rule.order()))
    }
}
