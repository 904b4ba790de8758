//! Mixtures of a uniform law on a union of rectangles A with a uniform law on
//! diagonal segments B (the AS, AL, OS and OL models).
//!
//! Native coordinates live on [−½,½]²; everything below works on the copula
//! square u = x + ½, v = y + ½. For θ < 0 the segments lie on the
//! anti-diagonal, handled by the reflection v ↦ 1 − v.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model_core::{
    DependenceModel, Distance, Evaluation, Integrand, PairedSample, Support, ThetaDomain,
};
use crate::quadrature::{Accumulator, AdaptiveRule, Estimate};
use crate::scalar::{clamp, Real};

use super::inversion::{open01, sample_with};
use super::smooth::partition;

const PIECE_ORDER: usize = 6;
const PIECE_TOL: f64 = 1e-13;
const PIECE_DEPTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MicdVariant {
    As,
    Al,
    Os,
    Ol,
}

impl MicdVariant {
    pub const ALL: [MicdVariant; 4] = [MicdVariant::As, MicdVariant::Al, MicdVariant::Os, MicdVariant::Ol];

    /// Mixing weight of the segment part.
    pub fn weight<R: Real>(self, theta: R) -> R {
        match self {
            MicdVariant::As | MicdVariant::Al => theta.abs(),
            MicdVariant::Os | MicdVariant::Ol => theta * theta,
        }
    }

    fn is_small(self) -> bool {
        matches!(self, MicdVariant::As | MicdVariant::Os)
    }

    pub fn label(self) -> &'static str {
        match self {
            MicdVariant::As => "AS",
            MicdVariant::Al => "AL",
            MicdVariant::Os => "OS",
            MicdVariant::Ol => "OL",
        }
    }

    pub fn registry_name(self) -> &'static str {
        match self {
            MicdVariant::As => "micd-as",
            MicdVariant::Al => "micd-al",
            MicdVariant::Os => "micd-os",
            MicdVariant::Ol => "micd-ol",
        }
    }
}

impl fmt::Display for MicdVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MicdVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("micd-").unwrap_or(&t);
        match t {
            "as" => Ok(MicdVariant::As),
            "al" => Ok(MicdVariant::Al),
            "os" => Ok(MicdVariant::Os),
            "ol" => Ok(MicdVariant::Ol),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

/// Variant plus its weight rule; the model itself.
#[derive(Debug, Clone)]
pub struct MicdSpec<R> {
    pub variant: MicdVariant,
    rule: AdaptiveRule<R>,
}

impl<R: Real> MicdSpec<R> {
    pub fn new(variant: MicdVariant) -> Self {
        MicdSpec {
            variant,
            rule: AdaptiveRule::new(PIECE_ORDER, R::lit(PIECE_TOL), PIECE_DEPTH),
        }
    }

    pub fn weight(&self, theta: R) -> R {
        self.variant.weight(theta)
    }

    fn layout(&self, theta: R) -> Layout<R> {
        Layout::new(self.variant, theta.abs())
    }
}

/// Geometry for θ ≥ 0: cut points {0, ½−c, ½+c, 1}, the cells of A, the
/// diagonal segments and the two densities.
#[derive(Debug, Clone)]
struct Layout<R> {
    cuts: [R; 4],
    in_a: [[bool; 3]; 3],
    segments: Vec<(R, R)>,
    a_density: R,
    seg_density: R,
    weight: R,
}

impl<R: Real> Layout<R> {
    fn new(variant: MicdVariant, t: R) -> Self {
        let half = R::half();
        let c = if variant.is_small() { (R::one() - t) * half } else { t * half };
        let cuts = [R::zero(), half - c, half + c, R::one()];
        let mut in_a = [[false; 3]; 3];
        for (i, row) in in_a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let (mi, mj) = (i == 1, j == 1);
                *cell = match variant {
                    MicdVariant::As => mi && mj,
                    MicdVariant::Os => mi || mj,
                    MicdVariant::Al => !mi && !mj,
                    MicdVariant::Ol => !mi || !mj,
                };
            }
        }
        let segments = if variant.is_small() {
            vec![(cuts[0], cuts[1]), (cuts[2], cuts[3])]
        } else {
            vec![(cuts[1], cuts[2])]
        };
        let weight = variant.weight(t);
        let len = |k: usize| cuts[k + 1] - cuts[k];
        let mut area = R::zero();
        for (i, row) in in_a.iter().enumerate() {
            for (j, &inside) in row.iter().enumerate() {
                if inside {
                    area = area + len(i) * len(j);
                }
            }
        }
        let a_density = if area > R::zero() { (R::one() - weight) / area } else { R::zero() };
        let seg_density = if t > R::zero() { weight / t } else { R::zero() };
        Layout {
            cuts,
            in_a,
            segments,
            a_density,
            seg_density,
            weight,
        }
    }

    fn len(&self, k: usize) -> R {
        self.cuts[k + 1] - self.cuts[k]
    }

    /// Length of [0, u] ∩ cell k.
    fn clen(&self, k: usize, u: R) -> R {
        clamp(u - self.cuts[k], R::zero(), self.len(k))
    }

    /// Density of the A part at a point of layout cell (i, j).
    fn density_in(&self, i: usize, j: usize) -> R {
        if self.in_a[i][j] {
            self.a_density
        } else {
            R::zero()
        }
    }

    fn cell_of(&self, u: R) -> usize {
        if u < self.cuts[1] {
            0
        } else if u < self.cuts[2] {
            1
        } else {
            2
        }
    }

    fn cdf(&self, u: R, v: R) -> R {
        let mut a = R::zero();
        for i in 0..3 {
            let li = self.clen(i, u);
            if li == R::zero() {
                continue;
            }
            for j in 0..3 {
                if self.in_a[i][j] {
                    a = a + li * self.clen(j, v);
                }
            }
        }
        let m = u.min(v);
        let s: R = self.segments.iter().map(|&(s0, s1)| clamp(m - s0, R::zero(), s1 - s0)).sum();
        self.a_density * a + self.seg_density * s
    }

    /// ∫₀¹ C(u, v) dv.
    fn mean_over_v(&self, u: R) -> R {
        let mut a = R::zero();
        for i in 0..3 {
            let li = self.clen(i, u);
            for j in 0..3 {
                if self.in_a[i][j] {
                    let lj = self.len(j);
                    a = a + li * (lj * (R::one() - self.cuts[j + 1]) + lj * lj * R::half());
                }
            }
        }
        let s: R = self
            .segments
            .iter()
            .map(|&(s0, s1)| ramp_integral(u, s0, s1) + (R::one() - u) * clamp(u - s0, R::zero(), s1 - s0))
            .sum();
        self.a_density * a + self.seg_density * s
    }

    fn variation(&self) -> R {
        let mut total = self.weight;
        for i in 0..3 {
            for j in 0..3 {
                total = total + (self.density_in(i, j) - R::one()).abs() * self.len(i) * self.len(j);
            }
        }
        total
    }
}

/// ∫₀^z clamp(t − t0, 0, t1 − t0) dt.
fn ramp_integral<R: Real>(z: R, t0: R, t1: R) -> R {
    if z <= t0 {
        R::zero()
    } else if z <= t1 {
        (z - t0) * (z - t0) * R::half()
    } else {
        let l = t1 - t0;
        l * l * R::half() + l * (z - t1)
    }
}

/// MICD joint cdf in native coordinates on [−½,½]².
pub fn micd_cdf<R: Real>(spec: &MicdSpec<R>, theta: R, x: R, y: R) -> Result<R> {
    spec.check_theta(theta)?;
    Ok(spec.copula(theta, x + R::half(), y + R::half()))
}

/// E_θ g over the native square, from the exact decomposition.
pub fn micd_expectation<R: Real>(
    spec: &MicdSpec<R>,
    theta: R,
    g: &dyn Fn(R, R) -> R,
    breaks_x: &[R],
    breaks_y: &[R],
) -> Result<Estimate<R>> {
    crate::model_core::expectation(spec, theta, g, breaks_x, breaks_y)
}

impl<R: Real> MicdSpec<R> {
    /// Σ over cells of ∫∫ g·(density − shift) plus the line part; θ ≥ 0
    /// geometry, `g` already reflected.
    fn integrate(&self, lay: &Layout<R>, g: &Integrand<'_, R>, shift: R, what: &str) -> Result<Estimate<R>> {
        let mut hints: Vec<R> = lay.cuts.to_vec();
        hints.extend(g.breaks_u.iter().copied());
        hints.extend(g.breaks_v.iter().copied());
        let p = partition(&hints);
        let f = |u: R, v: R| g.eval(u, v);
        let mut acc = Accumulator::default();
        for iu in p.windows(2) {
            let (a, b) = (iu[0], iu[1]);
            let ci = lay.cell_of((a + b) * R::half());
            for iv in p.windows(2) {
                let (c, d) = (iv[0], iv[1]);
                let cj = lay.cell_of((c + d) * R::half());
                let dens = lay.density_in(ci, cj) - shift;
                if dens == R::zero() {
                    continue;
                }
                let area = (b - a) * (d - c);
                let tol = R::lit(PIECE_TOL) * area;
                let h = |u: R, v: R| f(u, v) * dens;
                if a == c && b == d {
                    // split along the diagonal, where C_θ has a kink
                    let w = b - a;
                    let lower = |s: R, q: R| (a + w * s, a + w * s * q, w * w * s);
                    let upper = |s: R, q: R| (a + w * s * q, a + w * s, w * w * s);
                    self.rule.integrate_mapped(&lower, &h, tol * R::half(), &mut acc);
                    self.rule.integrate_mapped(&upper, &h, tol * R::half(), &mut acc);
                } else {
                    let rect = |s: R, q: R| (a + (b - a) * s, c + (d - c) * q, area);
                    self.rule.integrate_mapped(&rect, &h, tol, &mut acc);
                }
            }
        }
        if lay.seg_density > R::zero() {
            for &(s0, s1) in &lay.segments {
                let mut pts = vec![s0, s1];
                pts.extend(p.iter().copied().filter(|&t| t > s0 && t < s1));
                pts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
                for w in pts.windows(2) {
                    let line = |t: R| f(t, t) * lay.seg_density;
                    let est = self.rule.integrate_1d(w[0], w[1], &line)?;
                    acc.push(est.value, est.error, false);
                }
            }
        }
        acc.finish(what)
    }

    fn reflected<'a>(&self, theta: R, g: &'a Integrand<'a, R>, store: &'a dyn Fn(R, R) -> R) -> Integrand<'a, R> {
        if theta < R::zero() {
            Integrand::new(store).with_breaks(
                g.breaks_u.iter().copied(),
                g.breaks_v.iter().map(|&v| R::one() - v),
            )
        } else {
            Integrand::new(g.f).with_breaks(g.breaks_u.iter().copied(), g.breaks_v.iter().copied())
        }
    }
}

impl<R: Real> DependenceModel<R> for MicdSpec<R> {
    fn name(&self) -> &str {
        self.variant.registry_name()
    }

    fn theta_domain(&self) -> ThetaDomain<R> {
        ThetaDomain::closed(-R::one(), R::one())
    }

    fn support(&self) -> Support<R> {
        let h = R::half();
        Support { x: (-h, h), y: (-h, h) }
    }

    fn marginal_x(&self, x: R) -> R {
        clamp(x + R::half(), R::zero(), R::one())
    }

    fn marginal_y(&self, y: R) -> R {
        clamp(y + R::half(), R::zero(), R::one())
    }

    fn quantile_x(&self, u: R) -> R {
        u - R::half()
    }

    fn quantile_y(&self, v: R) -> R {
        v - R::half()
    }

    fn copula(&self, theta: R, u: R, v: R) -> R {
        let (u, v) = (clamp(u, R::zero(), R::one()), clamp(v, R::zero(), R::one()));
        let lay = self.layout(theta);
        if theta < R::zero() {
            u - lay.cdf(u, R::one() - v)
        } else {
            lay.cdf(u, v)
        }
    }

    fn copula_mean_over_v(&self, theta: R, u: R) -> R {
        let lay = self.layout(theta);
        if theta < R::zero() {
            u - lay.mean_over_v(u)
        } else {
            lay.mean_over_v(u)
        }
    }

    fn copula_mean_over_u(&self, theta: R, v: R) -> R {
        // C_θ is symmetric for θ ≥ 0
        let lay = self.layout(theta);
        if theta < R::zero() {
            R::half() - lay.mean_over_v(R::one() - v)
        } else {
            lay.mean_over_v(v)
        }
    }

    fn expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let lay = self.layout(theta);
        let flip = |u: R, v: R| g.eval(u, R::one() - v);
        let h = self.reflected(theta, g, &flip);
        self.integrate(&lay, &h, R::zero(), "MICD expectation")
    }

    fn signed_expect(&self, theta: R, g: &Integrand<'_, R>) -> Result<Estimate<R>> {
        let lay = self.layout(theta);
        let flip = |u: R, v: R| g.eval(u, R::one() - v);
        let h = self.reflected(theta, g, &flip);
        // ∫ g dC_0 is invariant under the reflection, so subtracting 1 after
        // reflecting is still ∫ g d(C_θ − C_0)
        self.integrate(&lay, &h, R::one(), "MICD signed expectation")
    }

    fn kinks(&self, theta: R) -> Vec<R> {
        let lay = self.layout(theta);
        vec![lay.cuts[1], lay.cuts[2]]
    }

    fn variation_distance(&self, theta: R, _resolution: usize) -> Result<Distance<R>> {
        Ok(Distance {
            value: self.layout(theta).variation(),
            evaluation: Evaluation::Exact,
        })
    }

    fn sample(&self, theta: R, n: usize, seed: u64) -> Result<PairedSample<R>> {
        self.check_theta(theta)?;
        let lay = self.layout(theta);
        let seg_total: R = lay.segments.iter().map(|&(a, b)| b - a).sum();
        let mut cells = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let area = lay.len(i) * lay.len(j);
                if lay.in_a[i][j] && area > R::zero() {
                    cells.push((i, j, area));
                }
            }
        }
        let a_total: R = cells.iter().map(|c| c.2).sum();
        let neg = theta < R::zero();
        let h = R::half();
        sample_with(n, theta, seed, |rng| {
            let pick: f64 = rng.random();
            let (u, v) = if (R::lit(pick) < lay.weight && seg_total > R::zero()) || a_total == R::zero() {
                let mut t = open01::<R>(rng) * seg_total;
                let mut pt = lay.segments[0].0 + t;
                for &(a, b) in &lay.segments {
                    if t <= b - a {
                        pt = a + t;
                        break;
                    }
                    t = t - (b - a);
                }
                (pt, pt)
            } else {
                let mut t = open01::<R>(rng) * a_total;
                let mut chosen = cells[cells.len() - 1];
                for &cell in &cells {
                    if t <= cell.2 {
                        chosen = cell;
                        break;
                    }
                    t = t - cell.2;
                }
                let (i, j, _) = chosen;
                let u = lay.cuts[i] + lay.len(i) * open01::<R>(rng);
                let v = lay.cuts[j] + lay.len(j) * open01::<R>(rng);
                (u, v)
            };
            let v = if neg { R::one() - v } else { v };
            Ok((u - h, v - h))
        })
    }

    fn refined(&self) -> Box<dyn DependenceModel<R>> {
        let mut m = self.clone();
        m.rule = AdaptiveRule::new(2 * PIECE_ORDER, R::lit(PIECE_TOL), PIECE_DEPTH + 2);
        Box::new(m)
    }

    fn is_exact(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_core::{association, kolmogorov_distance, variation_distance};

    fn spec(v: MicdVariant) -> MicdSpec<f64> {
        MicdSpec::new(v)
    }

    #[test]
    fn independence_at_zero() {
        for v in MicdVariant::ALL {
            for &(x, y) in &[(-0.3, 0.1), (0.0, 0.0), (0.45, -0.45)] {
                let got = micd_cdf(&spec(v), 0.0, x, y).unwrap();
                assert!((got - (x + 0.5) * (y + 0.5)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ol_association_at_centre() {
        let s = spec(MicdVariant::Ol);
        let f = micd_cdf(&s, 0.2, 0.0, 0.0).unwrap();
        assert!((f - 0.26).abs() < 1e-15);
        let a = association(&s, 0.2, 0.0, 0.0).unwrap();
        assert!((a - 0.01).abs() < 1e-15);
        let rho = kolmogorov_distance(&s, 0.2, 512).unwrap();
        assert!((rho - 0.01).abs() < 1e-15);
    }

    #[test]
    fn full_mass_and_margins() {
        for v in MicdVariant::ALL {
            let s = spec(v);
            for th in [-1.0, -0.7, -0.2, 0.3, 0.9, 1.0] {
                assert!((micd_cdf(&s, th, 0.5, 0.5).unwrap() - 1.0).abs() < 1e-14);
                for k in 0..=20 {
                    let t = -0.5 + k as f64 / 20.0;
                    assert!((micd_cdf(&s, th, t, 0.5).unwrap() - (t + 0.5)).abs() < 1e-14, "{v} {th} {t}");
                    assert!((micd_cdf(&s, th, 0.5, t).unwrap() - (t + 0.5)).abs() < 1e-14, "{v} {th} {t}");
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_theta() {
        assert!(micd_cdf(&spec(MicdVariant::As), 1.2, 0.0, 0.0).is_err());
    }

    #[test]
    fn as_variation_distance_is_exact() {
        // continuous deficit on the centre square plus the singular mass, by hand
        let th: f64 = 0.3;
        let side = 1.0 - th;
        let want = (1.0 / (1.0 - th) - 1.0) * side * side + (1.0 - side * side) + th;
        let d = variation_distance(&spec(MicdVariant::As), th, 1).unwrap();
        assert_eq!(d.evaluation, Evaluation::Exact);
        assert!((d.value - want).abs() < 1e-14);
        assert!((want - (4.0 * th - 2.0 * th * th)).abs() < 1e-14);
    }

    #[test]
    fn mean_over_v_matches_quadrature() {
        let gl = crate::quadrature::GaussLegendre::<f64>::new(12);
        for v in MicdVariant::ALL {
            let s = spec(v);
            for th in [-0.6, -0.1, 0.25, 0.8] {
                for u in [0.05, 0.3, 0.5, 0.71, 0.99] {
                    let lay = s.layout(th);
                    // C_θ(u, ·) kinks at v = u, or at v = 1 − u after reflection
                    let mut pts = [0.0, lay.cuts[1], lay.cuts[2], u, 1.0 - u, 1.0];
                    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let num: f64 = pts.windows(2).map(|w| gl.integrate(w[0], w[1], |z| s.copula(th, u, z))).sum();
                    assert!((s.copula_mean_over_v(th, u) - num).abs() < 1e-14, "{v} {th} {u}");
                    let num_u: f64 = pts.windows(2).map(|w| gl.integrate(w[0], w[1], |z| s.copula(th, z, u))).sum();
                    assert!((s.copula_mean_over_u(th, u) - num_u).abs() < 1e-14, "{v} {th} {u}");
                }
            }
        }
    }

    #[test]
    fn expectation_reproduces_cdf() {
        for v in MicdVariant::ALL {
            let s = spec(v);
            for th in [-0.55, 0.35] {
                let (x, y) = (0.12, -0.21);
                let g = |u: f64, w: f64| if u <= x && w <= y { 1.0 } else { 0.0 };
                let e = micd_expectation(&s, th, &g, &[x], &[y]).unwrap();
                assert!((e.value - micd_cdf(&s, th, x, y).unwrap()).abs() < 1e-12, "{v} {th}");
            }
        }
    }

    #[test]
    fn al_mean_association() {
        let s = spec(MicdVariant::Al);
        for th in [0.1, 0.4, 0.7] {
            let a = |u: f64, v: f64| s.copula(th, u, v) - u * v;
            let g = Integrand::new(&a).with_breaks(s.kinks(th), s.kinks(th));
            let e = s.expect(th, &g).unwrap().value;
            assert!((e - (3.0 - th) * th * th / 12.0).abs() < 1e-13);
        }
    }

    #[test]
    fn composition_sampler_hits_the_diagonal() {
        let s = spec(MicdVariant::Al);
        let smp = s.sample(1.0, 50, 3).unwrap();
        assert!(smp.pairs().iter().all(|&(x, y)| x == y));
        let neg = s.sample(-1.0, 50, 3).unwrap();
        assert!(neg.pairs().iter().all(|&(x, y)| (x + y).abs() < 1e-15));
    }
}
