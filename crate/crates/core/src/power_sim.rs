//! Monte Carlo size, power and required sample size of the right-sided
//! asymptotic z-tests based on Tₙ and Sₙ.
//!
//! Replicate r of every run draws its sample from seed ⊕ splitmix64(r), so
//! the samples at different n share their prefixes (common random numbers)
//! and results do not depend on thread scheduling.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{moments, mu_s, mu_t, AsymptoticMoments};
use crate::error::{Error, Result};
use crate::model_core::DependenceModel;
use crate::model_zoo::model_by_name;
use crate::rank_stats::{kendall_t, spearman_s};
use crate::scalar::Real;
use crate::special::{norm_pdf, norm_ppf};

/// Largest sample size `required_n` will try.
pub const N_CAP: usize = 10_000_000;
/// Smallest sample size both statistics are defined for.
pub const N_MIN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "S")]
    S,
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::T => "T",
            Statistic::S => "S",
        })
    }
}

/// Estimated rejection probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub se: f64,
    pub n: usize,
}

impl Rate {
    fn from_count(rejections: usize, reps: usize, n: usize) -> Self {
        let p = rejections as f64 / reps as f64;
        Rate {
            value: p,
            se: (p * (1.0 - p) / reps as f64).sqrt(),
            n,
        }
    }
}

/// SplitMix64 finaliser, used to spread replicate indices over seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn replicate_seed(seed: u64, r: usize) -> u64 {
    seed ^ splitmix64(r as u64)
}

/// (value − μ)/(σ/√n) for the chosen statistic's asymptotic moments.
pub fn z_statistic<R: Real>(which: Statistic, value: R, moments: &AsymptoticMoments<R>, n: usize) -> Result<R> {
    let (mu, s2) = match which {
        Statistic::T => (moments.mu_t, moments.sigma2_t),
        Statistic::S => (moments.mu_s, moments.sigma2_s),
    };
    if !(s2 > R::zero()) {
        return Err(Error::Degeneracy {
            what: format!("sigma2_{which}"),
            value: s2.as_f64(),
            threshold: 0.0,
        });
    }
    if n == 0 {
        return Err(Error::SampleSize {
            what: "z statistic",
            min: 1,
            got: 0,
        });
    }
    Ok((value - mu) * R::count(n).sqrt() / s2.sqrt())
}

/// A size/power experiment for H₀: θ = θ₀ against θ = θ_alt > θ₀.
#[derive(Clone)]
pub struct PowerExperiment<R: Real> {
    pub model: String,
    pub theta0: R,
    pub theta_alt: R,
    pub alpha: R,
    pub beta: R,
    pub replications: usize,
    pub seed: u64,
    /// Slack subtracted from 1 − β in the required-n search.
    pub power_tolerance: R,
    dist: Arc<dyn DependenceModel<R>>,
    null: AsymptoticMoments<R>,
    mu_alt: (R, R),
}

impl<R: Real> fmt::Debug for PowerExperiment<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerExperiment")
            .field("model", &self.model)
            .field("theta0", &self.theta0)
            .field("theta_alt", &self.theta_alt)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("replications", &self.replications)
            .field("seed", &self.seed)
            .finish()
    }
}

impl<R: Real> PowerExperiment<R> {
    pub fn new(model: &str, theta0: R, theta_alt: R, alpha: R, beta: R, replications: usize, seed: u64) -> Result<Self> {
        let dist: Arc<dyn DependenceModel<R>> = Arc::from(model_by_name::<R>(model)?);
        Self::with_model(dist, theta0, theta_alt, alpha, beta, replications, seed)
    }

    pub fn with_model(
        dist: Arc<dyn DependenceModel<R>>,
        theta0: R,
        theta_alt: R,
        alpha: R,
        beta: R,
        replications: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(alpha > R::zero() && alpha < R::one()) {
            return Err(Error::Config(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        if !(beta > R::zero() && beta < R::one() - alpha) {
            return Err(Error::Config(format!(
                "beta = {beta} must lie in (0, 1 - alpha) so that alpha + beta < 1"
            )));
        }
        if replications == 0 {
            return Err(Error::Config("replications must be positive".into()));
        }
        if theta_alt < theta0 {
            return Err(Error::Config("the right-sided tests need theta >= theta0".into()));
        }
        dist.check_theta(theta_alt)?;
        let null = moments(dist.as_ref(), theta0)?;
        let mu_alt = if theta_alt == theta0 {
            (null.mu_t, null.mu_s)
        } else {
            (mu_t(dist.as_ref(), theta_alt)?, mu_s(dist.as_ref(), theta_alt)?)
        };
        Ok(PowerExperiment {
            model: dist.name().to_string(),
            theta0,
            theta_alt,
            alpha,
            beta,
            replications,
            seed,
            power_tolerance: R::zero(),
            dist,
            null,
            mu_alt,
        })
    }

    /// Same experiment with another (α, β); reuses the computed moments.
    pub fn with_levels(&self, alpha: R, beta: R) -> Result<Self> {
        if !(alpha > R::zero() && alpha < R::one() && beta > R::zero() && beta < R::one() - alpha) {
            return Err(Error::Config(format!(
                "need 0 < alpha < 1 and 0 < beta < 1 - alpha, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(PowerExperiment {
            alpha,
            beta,
            ..self.clone()
        })
    }

    pub fn null_moments(&self) -> &AsymptoticMoments<R> {
        &self.null
    }

    /// Upper α-quantile z_α of N(0, 1).
    pub fn critical_value(&self) -> R {
        norm_ppf(R::one() - self.alpha)
    }

    /// n from √n = (z_α + z_β)σ(θ₀)/(μ(θ) − μ(θ₀)), not rounded.
    pub fn analytic_n(&self, which: Statistic) -> Result<R> {
        let (delta, s2) = match which {
            Statistic::T => (self.mu_alt.0 - self.null.mu_t, self.null.sigma2_t),
            Statistic::S => (self.mu_alt.1 - self.null.mu_s, self.null.sigma2_s),
        };
        if !(delta > R::zero()) {
            return Err(Error::Config(format!(
                "mu_{which} does not increase from theta0 = {} to theta = {}",
                self.theta0, self.theta_alt
            )));
        }
        let z = self.critical_value() + norm_ppf(R::one() - self.beta);
        let root = z * s2.sqrt() / delta;
        Ok(root * root)
    }

    fn rejections(&self, which: Statistic, theta: R, n: usize) -> Result<usize> {
        if n < N_MIN {
            return Err(Error::SampleSize {
                what: "power simulation",
                min: N_MIN,
                got: n,
            });
        }
        let crit = self.critical_value();
        (0..self.replications)
            .into_par_iter()
            .map(|r| -> Result<usize> {
                let sample = self.dist.sample(theta, n, replicate_seed(self.seed, r))?;
                let value = match which {
                    Statistic::T => kendall_t(&sample)?,
                    Statistic::S => spearman_s(&sample)?,
                };
                Ok(usize::from(z_statistic(which, value, &self.null, n)? > crit))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
}

/// Rejection rate at θ_alt and sample size n.
pub fn estimate_power<R: Real>(exp: &PowerExperiment<R>, which: Statistic, n: usize) -> Result<Rate> {
    let k = exp.rejections(which, exp.theta_alt, n)?;
    Ok(Rate::from_count(k, exp.replications, n))
}

/// Rejection rate at θ₀ and sample size n.
pub fn estimate_size<R: Real>(exp: &PowerExperiment<R>, which: Statistic, n: usize) -> Result<Rate> {
    let k = exp.rejections(which, exp.theta0, n)?;
    Ok(Rate::from_count(k, exp.replications, n))
}

/// Smallest n whose simulated power reaches 1 − β − tolerance, found by a
/// doubling search from the analytic n followed by bisection.
pub fn required_n<R: Real>(exp: &PowerExperiment<R>, which: Statistic) -> Result<usize> {
    let target = (R::one() - exp.beta - exp.power_tolerance).as_f64();
    let start = exp.analytic_n(which)?.as_f64().ceil();
    let start = if start.is_finite() {
        (start as usize).clamp(N_MIN, N_CAP)
    } else {
        N_CAP
    };
    let passes = |n: usize| -> Result<bool> { Ok(estimate_power(exp, which, n)?.value >= target) };
    // (lo, hi): lo fails or is below N_MIN, hi passes
    let (mut lo, mut hi);
    if passes(start)? {
        hi = start;
        lo = start / 2;
        while lo >= N_MIN && passes(lo)? {
            hi = lo;
            lo /= 2;
        }
        if lo < N_MIN {
            if passes(N_MIN)? {
                return Ok(N_MIN);
            }
            lo = N_MIN;
        }
    } else {
        lo = start;
        hi = start.saturating_mul(2).min(N_CAP);
        loop {
            if passes(hi)? {
                break;
            }
            if hi == N_CAP {
                return Err(Error::SearchCap { cap: N_CAP });
            }
            lo = hi;
            hi = hi.saturating_mul(2).min(N_CAP);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Per-statistic outcome of a power experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticReport {
    pub statistic: Statistic,
    pub n_required: usize,
    /// Standard error of n_required from the slope of the normal power curve.
    pub n_se: f64,
    pub n_analytic: f64,
    /// Rejection rate under θ₀ at n_required.
    pub size: Rate,
    /// Rejection rate under θ_alt at n_required.
    pub power: Rate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub model: String,
    pub theta0: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub replications: usize,
    pub seed: u64,
    pub t: StatisticReport,
    pub s: StatisticReport,
    /// n_S/n_T, the finite-sample efficiency of T relative to S.
    pub ratio: f64,
    pub ratio_se: f64,
}

fn statistic_report<R: Real>(exp: &PowerExperiment<R>, which: Statistic) -> Result<StatisticReport> {
    let n = required_n(exp, which)?;
    let za = exp.critical_value().as_f64();
    let zb = norm_ppf(1.0 - exp.beta.as_f64());
    let se_p = (exp.beta.as_f64() * (1.0 - exp.beta.as_f64()) / exp.replications as f64).sqrt();
    // P(n) ≈ Φ(√(n/n*)(z_α + z_β) − z_α), so dP/dn = φ(z_β)(z_α + z_β)/(2n)
    let slope = norm_pdf(zb) * (za + zb) / (2.0 * n as f64);
    Ok(StatisticReport {
        statistic: which,
        n_required: n,
        n_se: se_p / slope,
        n_analytic: exp.analytic_n(which)?.as_f64(),
        size: estimate_size(exp, which, n)?,
        power: estimate_power(exp, which, n)?,
    })
}

/// Runs the full experiment: required n, size and power for both statistics.
pub fn run_experiment<R: Real>(exp: &PowerExperiment<R>) -> Result<PowerReport> {
    let t = statistic_report(exp, Statistic::T)?;
    let s = statistic_report(exp, Statistic::S)?;
    let ratio = s.n_required as f64 / t.n_required as f64;
    // delta method, treating the two searches as independent
    let rel = ((t.n_se / t.n_required as f64).powi(2) + (s.n_se / s.n_required as f64).powi(2)).sqrt();
    Ok(PowerReport {
        model: exp.model.clone(),
        theta0: exp.theta0.as_f64(),
        theta: exp.theta_alt.as_f64(),
        alpha: exp.alpha.as_f64(),
        beta: exp.beta.as_f64(),
        replications: exp.replications,
        seed: exp.seed,
        t,
        s,
        ratio,
        ratio_se: ratio * rel,
    })
}

/// n_S/n_T with its standard error.
pub fn efficiency_ratio<R: Real>(exp: &PowerExperiment<R>) -> Result<(f64, f64)> {
    let r = run_experiment(exp)?;
    Ok((r.ratio, r.ratio_se))
}
