//! Gauss–Legendre rules, fixed tensor products and adaptive subdivision.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default tensor order for smooth copula integrals.
pub const DEFAULT_ORDER: usize = 96;

/// Environment variable overriding [`DEFAULT_ORDER`].
pub const ORDER_ENV: &str = "ARE_LAB_QUAD_ORDER";

/// Quadrature order from `ARE_LAB_QUAD_ORDER`, falling back to the default.
pub fn order_from_env() -> usize {
    std::env::var(ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| (2..=4096).contains(&n))
        .unwrap_or(DEFAULT_ORDER)
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<R> {
    pub value: R,
    pub error: R,
}

impl<R: Real> Estimate<R> {
    pub fn exact(value: R) -> Self {
        Estimate {
            value,
            error: R::zero(),
        }
    }
}

/// n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> GaussLegendre<R> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre order must be positive");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Newton on P_n from the Tricomi-style initial guess.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(R::lit).collect(),
            weights: weights.into_iter().map(R::lit).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn points(&self, a: R, b: R) -> impl Iterator<Item = (R, R)> + '_ {
        let half = (b - a) * R::half();
        let mid = (a + b) * R::half();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// ∫_a^b f.
    pub fn integrate<F: FnMut(R) -> R>(&self, a: R, b: R, mut f: F) -> R {
        self.points(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// ∫∫ f over [a,b]×[c,d] with the tensor rule.
    pub fn integrate_2d<F: FnMut(R, R) -> R>(&self, a: R, b: R, c: R, d: R, mut f: F) -> R {
        let ys: Vec<(R, R)> = self.points(c, d).collect();
        self.points(a, b)
            .map(|(x, wx)| wx * ys.iter().map(|&(y, wy)| wy * f(x, y)).sum::<R>())
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pair of nested rules (n and 2n points) driving adaptive subdivision.
#[derive(Debug, Clone)]
pub struct AdaptiveRule<R> {
    pub coarse: GaussLegendre<R>,
    pub fine: GaussLegendre<R>,
    /// Absolute tolerance for a whole unit-measure domain.
    pub tol: R,
    /// Maximum bisection depth.
    pub max_depth: u32,
}

impl<R: Real> AdaptiveRule<R> {
    pub fn new(order: usize, tol: R, max_depth: u32) -> Self {
        AdaptiveRule {
            coarse: GaussLegendre::new(order),
            fine: GaussLegendre::new(2 * order),
            tol,
            max_depth,
        }
    }

    /// Adaptive ∫_a^b f to the rule's absolute tolerance.
    pub fn integrate_1d(&self, a: R, b: R, f: &dyn Fn(R) -> R) -> Result<Estimate<R>> {
        let mut acc = Accumulator::default();
        acc.add_budget(self.tol);
        self.rec_1d(a, b, f, self.tol, 0, &mut acc);
        acc.finish("adaptive 1-D quadrature")
    }

    fn rec_1d(&self, a: R, b: R, f: &dyn Fn(R) -> R, tol: R, depth: u32, acc: &mut Accumulator<R>) {
        if b <= a {
            return;
        }
        let q1 = self.coarse.integrate(a, b, f);
        let q2 = self.fine.integrate(a, b, f);
        let err = (q2 - q1).abs();
        if err <= tol || depth >= self.max_depth {
            acc.push(q2, err, err > tol);
            return;
        }
        let mid = (a + b) * R::half();
        let t = tol * R::half();
        self.rec_1d(a, mid, f, t, depth + 1, acc);
        self.rec_1d(mid, b, f, t, depth + 1, acc);
    }

    /// Adaptive integral of `f(u, v)` over the image of the unit square under
    /// `map: (p, q) ↦ (u, v, jacobian)`; `tol` is this piece's error budget.
    pub fn integrate_mapped(
        &self,
        map: &dyn Fn(R, R) -> (R, R, R),
        f: &dyn Fn(R, R) -> R,
        tol: R,
        acc: &mut Accumulator<R>,
    ) {
        acc.add_budget(tol);
        self.rec_2d(map, f, (R::zero(), R::one(), R::zero(), R::one()), tol, 0, acc);
    }

    fn rec_2d(
        &self,
        map: &dyn Fn(R, R) -> (R, R, R),
        f: &dyn Fn(R, R) -> R,
        (p0, p1, q0, q1): (R, R, R, R),
        tol: R,
        depth: u32,
        acc: &mut Accumulator<R>,
    ) {
        let g = |p: R, q: R| {
            let (u, v, jac) = map(p, q);
            if jac == R::zero() {
                R::zero()
            } else {
                jac * f(u, v)
            }
        };
        let c = self.coarse.integrate_2d(p0, p1, q0, q1, g);
        let fq = self.fine.integrate_2d(p0, p1, q0, q1, g);
        let err = (fq - c).abs();
        if err <= tol || depth >= self.max_depth {
            acc.push(fq, err, err > tol);
            return;
        }
        let pm = (p0 + p1) * R::half();
        let qm = (q0 + q1) * R::half();
        let t = tol * R::lit(0.25);
        for cell in [(p0, pm, q0, qm), (pm, p1, q0, qm), (p0, pm, qm, q1), (pm, p1, qm, q1)] {
            self.rec_2d(map, f, cell, t, depth + 1, acc);
        }
    }
}

/// Running sum of piece estimates. Pieces that hit the depth limit only
/// count as a failure if the summed error also exceeds the summed budget.
#[derive(Debug, Clone)]
pub struct Accumulator<R> {
    value: R,
    error: R,
    budget: R,
    failed: bool,
}

impl<R: Real> Default for Accumulator<R> {
    fn default() -> Self {
        Accumulator {
            value: R::zero(),
            error: R::zero(),
            budget: R::zero(),
            failed: false,
        }
    }
}

impl<R: Real> Accumulator<R> {
    pub fn push(&mut self, value: R, error: R, failed: bool) {
        self.value = self.value + value;
        self.error = self.error + error;
        self.failed |= failed;
    }

    pub fn add_budget(&mut self, tol: R) {
        self.budget = self.budget + tol;
    }

    pub fn add_exact(&mut self, value: R) {
        self.value = self.value + value;
    }

    pub fn finish(self, what: &str) -> Result<Estimate<R>> {
        if self.failed && self.error > self.budget {
            Err(Error::Convergence {
                what: what.to_string(),
                estimate: self.value.as_f64(),
                error: self.error.as_f64(),
            })
        } else {
            Ok(Estimate {
                value: self.value,
                error: self.error,
            })
        }
    }
}

/// Neville extrapolation to x = 0 of the polynomial through `(xs[i], ys[i])`.
pub fn extrapolate_to_zero<R: Real>(xs: &[R], ys: &[R]) -> R {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut p = ys.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}
