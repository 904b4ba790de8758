//! The dependence-model contract and model-agnostic diagnostics.
//!
//! Every model has θ-free marginals `G`, `H` and reduces to independence at
//! θ = 0. Internally all integrals run on the copula scale `(u, v) = (G(x), H(y))`,
//! which leaves Kendall's and Spearman's statistics unchanged.

use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::Estimate;
use crate::scalar::{clamp, Real};

/// Parameter space Θ: an interval containing 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaDomain<R> {
    pub lo: R,
    pub hi: R,
    /// Whether finite endpoints belong to the domain.
    pub closed: bool,
}

impl<R: Real> ThetaDomain<R> {
    pub fn open(lo: R, hi: R) -> Self {
        ThetaDomain {
            lo,
            hi,
            closed: false,
        }
    }

    pub fn closed(lo: R, hi: R) -> Self {
        ThetaDomain {
            lo,
            hi,
            closed: true,
        }
    }

    pub fn contains(&self, theta: R) -> bool {
        if theta.is_nan() {
            return false;
        }
        if self.closed {
            theta >= self.lo && theta <= self.hi
        } else {
            theta > self.lo && theta < self.hi
        }
    }

    /// Whether `theta` lies strictly inside (away from both endpoints).
    pub fn contains_interior(&self, theta: R) -> bool {
        theta > self.lo && theta < self.hi
    }
}

impl<R: Real> fmt::Display for ThetaDomain<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = if self.closed { ('[', ']') } else { ('(', ')') };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// Axis-aligned rectangle carrying all the mass; may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<R> {
    pub x: (R, R),
    pub y: (R, R),
}

/// How a distance or expectation was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    /// Closed-form measure decomposition, integrated exactly per piece.
    Exact,
    /// Density integrated by quadrature or a fine grid.
    Density,
    /// CDF increments on a grid; a lower approximation.
    ApproximateGrid,
}

/// Result of a distance computation.
#[derive(Debug, Clone, Copy)]
pub struct Distance<R> {
    pub value: R,
    pub evaluation: Evaluation,
}

/// n observation pairs with pairwise-distinct coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample<R> {
    pairs: Vec<(R, R)>,
    theta_used: Option<R>,
    seed: Option<u64>,
}

impl<R: Real> PairedSample<R> {
    /// Builds a sample, rejecting ties or non-finite values.
    pub fn new(pairs: Vec<(R, R)>, theta_used: Option<R>, seed: Option<u64>) -> Result<Self> {
        if let Some(col) = first_tied_column(&pairs) {
            return Err(Error::Tie {
                column: col.to_string(),
            });
        }
        Ok(PairedSample {
            pairs,
            theta_used,
            seed,
        })
    }

    pub fn from_pairs(pairs: Vec<(R, R)>) -> Result<Self> {
        Self::new(pairs, None, None)
    }

    pub fn pairs(&self) -> &[(R, R)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn theta_used(&self) -> Option<R> {
        self.theta_used
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn into_pairs(self) -> Vec<(R, R)> {
        self.pairs
    }
}

/// `"x"` or `"y"` if that coordinate has a tie (or a NaN), else `None`.
pub fn first_tied_column<R: Real>(pairs: &[(R, R)]) -> Option<&'static str> {
    let has_tie = |mut v: Vec<R>| {
        if v.iter().any(|z| !z.is_finite()) {
            return true;
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        v.windows(2).any(|w| w[0] == w[1])
    };
    if has_tie(pairs.iter().map(|p| p.0).collect()) {
        Some("x")
    } else if has_tie(pairs.iter().map(|p| p.1).collect()) {
        Some("y")
    } else {
        None
    }
}

/// Integrand on the copula square with optional hints where it is not smooth.
pub struct Integrand<'a, R> {
    pub f: &'a (dyn Fn(R, R) -> R + 'a),
    /// u-values where `f` has kinks or jumps.
    pub breaks_u: Vec<R>,
    /// v-values where `f` has kinks or jumps.
    pub breaks_v: Vec<R>,
}

impl<'a, R: Real> Integrand<'a, R> {
    pub fn new(f: &'a (dyn Fn(R, R) -> R + 'a)) -> Self {
        Integrand {
            f,
            breaks_u: Vec::new(),
            breaks_v: Vec::new(),
        }
    }

    pub fn with_breaks(mut self, u: impl IntoIterator<Item = R>, v: impl IntoIterator<Item = R>) -> Self {
        self.breaks_u.extend(u);
        self.breaks_v.extend(v);
        self
    }

    pub fn eval(&self, u: R, v: R) -> R {
        (self.f)(u, v)
    }
}

/// A parametric family {F_θ} with fixed marginals and F_0 = G·H.
///
/// Methods taking `theta` on the copula scale expect it to be validated
/// with [`DependenceModel::check_theta`] by the caller.
pub trait DependenceModel<R: Real>: Send + Sync {
    /// Registry name.
    fn name(&self) -> &str;

    fn theta_domain(&self) -> ThetaDomain<R>;

    fn support(&self) -> Support<R>;

    /// Marginal cdf G of X.
    fn marginal_x(&self, x: R) -> R;

    /// Marginal cdf H of Y.
    fn marginal_y(&self, y: R) -> R;

    /// G⁻¹.
    fn quantile_x(&self, u: R) -> R;

    /// H⁻¹.
    fn quantile_y(&self, v: R) -> R;

    /// Copula C_θ(u, v) for (u, v) ∈ [0,1]².
    fn copula(&self, theta: R, u: R, v: R) -> R;

    /// ∫₀¹ C_θ(u, v) dv.
    fn copula_mean_over_v(&self, theta: R, u: R) -> R;

    /// ∫₀¹ C_θ(u, v) du.
    fn copula_mean_over_u(&self, theta: R, v: R) -> R;

    /// E_θ g(U, V) with (U, V) = (G(X), H(Y)).
    fn expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>>;

    /// ∫ g d(C_θ − C_0), evaluated from the signed measure directly.
    fn signed_expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>>;

    /// Lines u = b and v = b (copula scale) where C_θ is not smooth.
    fn kinks(&self, _theta: R) -> Vec<R> {
        Vec::new()
    }

    /// Total variation ∫|d(F_θ − F_0)|; `resolution` controls grid-based routes.
    fn variation_distance(&self, theta: R, resolution: usize) -> Result<Distance<R>> {
        cdf_grid_variation(self, theta, resolution)
    }

    /// n i.i.d. draws in native coordinates, deterministic in `seed`.
    fn sample(&self, theta: R, n: usize, seed: u64) -> Result<PairedSample<R>>;

    /// Same model with a doubled quadrature order, for error estimates.
    fn refined(&self) -> Box<dyn DependenceModel<R>>;

    /// Whether expectations come from an exact piecewise decomposition.
    fn is_exact(&self) -> bool {
        false
    }

    fn check_theta(&self, theta: R) -> Result<()> {
        let dom = self.theta_domain();
        if dom.contains(theta) {
            Ok(())
        } else {
            Err(Error::domain(
                format!("{} parameter", self.name()),
                theta.as_f64(),
                dom.to_string(),
            ))
        }
    }

    /// Joint cdf F_θ(x, y) in native coordinates.
    fn cdf(&self, theta: R, x: R, y: R) -> Result<R> {
        self.check_theta(theta)?;
        Ok(self.copula(theta, self.marginal_x(x), self.marginal_y(y)))
    }
}

impl<R: Real> fmt::Debug for dyn DependenceModel<R> + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DependenceModel({})", self.name())
    }
}

/// Association a_θ(x, y) = F_θ(x, y) − G(x)H(y).
pub fn association<R: Real>(model: &dyn DependenceModel<R>, theta: R, x: R, y: R) -> Result<R> {
    model.check_theta(theta)?;
    if theta == R::zero() {
        return Ok(R::zero());
    }
    let (u, v) = (model.marginal_x(x), model.marginal_y(y));
    Ok(model.copula(theta, u, v) - u * v)
}

/// E_θ g(X, Y) for an integrand in native coordinates; `breaks_x`/`breaks_y`
/// mark discontinuities of `g`.
pub fn expectation<R: Real>(
    model: &dyn DependenceModel<R>,
    theta: R,
    g: &dyn Fn(R, R) -> R,
    breaks_x: &[R],
    breaks_y: &[R],
) -> Result<Estimate<R>> {
    model.check_theta(theta)?;
    let h = |u: R, v: R| g(model.quantile_x(u), model.quantile_y(v));
    let integrand = Integrand::new(&h).with_breaks(
        breaks_x.iter().map(|&x| model.marginal_x(x)),
        breaks_y.iter().map(|&y| model.marginal_y(y)),
    );
    model.expect(theta, &integrand)
}

/// Total variation distance ‖F_θ − F_0‖.
pub fn variation_distance<R: Real>(
    model: &dyn DependenceModel<R>,
    theta: R,
    resolution: usize,
) -> Result<Distance<R>> {
    model.check_theta(theta)?;
    if resolution == 0 {
        return Err(Error::Config("resolution must be positive".into()));
    }
    if theta == R::zero() {
        return Ok(Distance {
            value: R::zero(),
            evaluation: Evaluation::Exact,
        });
    }
    model.variation_distance(theta, resolution)
}

/// Kolmogorov distance sup |F_θ − F_0| over a (resolution+1)² grid.
pub fn kolmogorov_distance<R: Real>(
    model: &dyn DependenceModel<R>,
    theta: R,
    resolution: usize,
) -> Result<R> {
    model.check_theta(theta)?;
    if resolution == 0 {
        return Err(Error::Config("resolution must be positive".into()));
    }
    if theta == R::zero() {
        return Ok(R::zero());
    }
    let n = R::count(resolution);
    let mut best = R::zero();
    for i in 0..=resolution {
        let u = R::count(i) / n;
        for j in 0..=resolution {
            let v = R::count(j) / n;
            let d = (model.copula(theta, u, v) - u * v).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Σ over grid cells of |rectangle increment of C_θ − C_0|, checked for
/// stability under refinement.
pub(crate) fn cdf_grid_variation<R: Real, M: DependenceModel<R> + ?Sized>(
    model: &M,
    theta: R,
    resolution: usize,
) -> Result<Distance<R>> {
    let at = |res: usize| {
        let n = R::count(res);
        let grid: Vec<R> = (0..=res).map(|i| R::count(i) / n).collect();
        let mut prev: Vec<R> = grid.iter().map(|&u| model.copula(theta, u, R::zero())).collect();
        let mut total = R::zero();
        for j in 1..=res {
            let row: Vec<R> = grid.iter().map(|&u| model.copula(theta, u, grid[j])).collect();
            for i in 1..=res {
                let inc = row[i] - row[i - 1] - prev[i] + prev[i - 1];
                let base = (grid[i] - grid[i - 1]) * (grid[j] - grid[j - 1]);
                total = total + (inc - base).abs();
            }
            prev = row;
        }
        total
    };
    let fine = at(resolution);
    let coarse = at(resolution.div_ceil(2).max(1));
    if (fine - coarse).abs() > R::lit(1e-2) * fine.abs().max(R::lit(1e-12)) {
        return Err(Error::Convergence {
            what: "grid variation distance".into(),
            estimate: fine.as_f64(),
            error: (fine - coarse).abs().as_f64(),
        });
    }
    Ok(Distance {
        value: fine,
        evaluation: Evaluation::ApproximateGrid,
    })
}

/// Midpoint-grid ∫∫|c_θ − 1| for models with a density.
pub(crate) fn density_grid_variation<R: Real>(density: impl Fn(R, R) -> R, resolution: usize) -> R {
    let n = R::count(resolution);
    let mut total = R::zero();
    for i in 0..resolution {
        let u = (R::count(i) + R::half()) / n;
        for j in 0..resolution {
            let v = (R::count(j) + R::half()) / n;
            total = total + (density(u, v) - R::one()).abs();
        }
    }
    total / (n * n)
}

/// Copula-scale clamp helper for marginals of uniform type.
pub(crate) fn uniform_cdf<R: Real>(x: R, lo: R, hi: R) -> R {
    clamp((x - lo) / (hi - lo), R::zero(), R::one())
}
