use std::f64::consts::PI;

use are_lab::asymptotics::{moments, mu_s, mu_t};
use are_lab::{model_by_name, Model, MODEL_NAMES};

/// Interior parameter values to exercise per model.
fn thetas(name: &str) -> Vec<f64> {
    match name {
        "plackett" => vec![-0.7, 0.5, 4.0],
        "frank" => vec![-3.0, 0.8, 6.0],
        "bvn" => vec![-0.6, 0.3, 0.85],
        _ => vec![-0.6, 0.2, 0.7],
    }
}

fn model(name: &str) -> Model {
    model_by_name::<f64>(name).unwrap()
}

#[test]
fn copulas_have_uniform_margins_and_respect_frechet_bounds() {
    for name in MODEL_NAMES {
        let m = model(name);
        for th in thetas(name) {
            for i in 0..=20 {
                let u = i as f64 / 20.0;
                assert!((m.copula(th, u, 1.0) - u).abs() < 1e-12, "{name} {th} {u}");
                assert!((m.copula(th, 1.0, u) - u).abs() < 1e-12, "{name} {th} {u}");
                assert!(m.copula(th, u, 0.0).abs() < 1e-12);
                for j in 0..=20 {
                    let v = j as f64 / 20.0;
                    let c = m.copula(th, u, v);
                    assert!(c >= (u + v - 1.0).max(0.0) - 1e-12 && c <= u.min(v) + 1e-12, "{name} {th} {u} {v} {c}");
                }
            }
        }
    }
}

#[test]
fn rectangle_masses_are_nonnegative() {
    for name in MODEL_NAMES {
        let m = model(name);
        for th in thetas(name) {
            let k = 16;
            for i in 0..k {
                for j in 0..k {
                    let (u0, u1) = (i as f64 / k as f64, (i + 1) as f64 / k as f64);
                    let (v0, v1) = (j as f64 / k as f64, (j + 1) as f64 / k as f64);
                    let mass = m.copula(th, u1, v1) - m.copula(th, u0, v1) - m.copula(th, u1, v0) + m.copula(th, u0, v0);
                    assert!(mass >= -1e-12, "{name} {th} cell ({i},{j}) {mass}");
                }
            }
        }
    }
}

/// (1/θ)∫₀^θ tᵏ/(eᵗ − 1) dt · k/θᵏ⁻¹, the Debye function, by composite Simpson.
fn debye(k: i32, theta: f64) -> f64 {
    let n = 20_000;
    let h = theta / n as f64;
    let f = |t: f64| if t == 0.0 { if k == 1 { 1.0 } else { 0.0 } } else { t.powi(k) / t.exp_m1() };
    let mut s = f(0.0) + f(theta);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    k as f64 / theta.powi(k) * s * h / 3.0
}

#[test]
fn population_measures_match_known_closed_forms() {
    let cases: Vec<(&str, f64, f64, f64)> = vec![
        ("fgm", 0.6, 2.0 * 0.6 / 9.0, 0.6 / 3.0),
        ("bvn", 0.5, 2.0 / PI * 0.5f64.asin(), 6.0 / PI * 0.25f64.asin()),
        ("bvn", -0.8, 2.0 / PI * (-0.8f64).asin(), 6.0 / PI * (-0.4f64).asin()),
        ("frank", 4.0, 1.0 - 4.0 / 4.0 * (1.0 - debye(1, 4.0)), 1.0 - 12.0 / 4.0 * (debye(1, 4.0) - debye(2, 4.0))),
        ("micd-al", 0.4, 0.4f64.powi(2), 0.4f64.powi(3)),
    ];
    for (name, th, tau, rho) in cases {
        let m = model(name);
        let (t, s) = (mu_t(m.as_ref(), th).unwrap(), mu_s(m.as_ref(), th).unwrap());
        assert!((t - tau).abs() < 1e-9, "{name} {th}: tau {t} vs {tau}");
        assert!((s - rho).abs() < 1e-9, "{name} {th}: rho {s} vs {rho}");
    }
    // Plackett with odds ratio ψ = θ + 1
    for th in [-0.5, 2.0, 9.0] {
        let psi: f64 = th + 1.0;
        let rho = (psi + 1.0) / (psi - 1.0) - 2.0 * psi * psi.ln() / (psi - 1.0).powi(2);
        let s = mu_s(model("plackett").as_ref(), th).unwrap();
        assert!((s - rho).abs() < 1e-9, "plackett {th}: {s} vs {rho}");
    }
}

/// Sample mean and standard error of the mean of `w`.
fn mean_se(w: &[f64]) -> (f64, f64) {
    let n = w.len() as f64;
    let m = w.iter().sum::<f64>() / n;
    let v = w.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn monte_carlo_moments_agree_with_quadrature() {
    let n = 100_000;
    for name in MODEL_NAMES {
        let m = model(name);
        let th = thetas(name)[1];
        let mo = moments(m.as_ref(), th).unwrap();
        let s = m.sample(th, n, 99).unwrap();
        let uv: Vec<(f64, f64)> = s.pairs().iter().map(|&(x, y)| (m.marginal_x(x), m.marginal_y(y))).collect();
        let wt: Vec<f64> = uv.iter().map(|&(u, v)| 2.0 * m.copula(th, u, v) - u - v).collect();
        let ws: Vec<f64> = uv
            .iter()
            .map(|&(u, v)| (1.0 - u) * (1.0 - v) + m.copula_mean_over_v(th, u) + m.copula_mean_over_u(th, v))
            .collect();
        let c: Vec<f64> = uv.iter().map(|&(u, v)| m.copula(th, u, v)).collect();
        let (ec, se) = mean_se(&c);
        assert!((4.0 * ec - 1.0 - mo.mu_t).abs() < 5.0 * 4.0 * se, "{name} mu_T");
        for (w, k, want, label) in [(&wt, 16.0, mo.sigma2_t, "sigma2_T"), (&ws, 144.0, mo.sigma2_s, "sigma2_S")] {
            let (mw, _) = mean_se(w);
            let sq: Vec<f64> = w.iter().map(|x| (x - mw).powi(2)).collect();
            let (var, se) = mean_se(&sq);
            assert!((k * var - want).abs() < 5.0 * k * se + 1e-9, "{name} {label}: {} vs {want}", k * var);
        }
    }
}

#[test]
fn samplers_reproduce_the_copula() {
    let n = 40_000;
    for name in MODEL_NAMES {
        let m = model(name);
        for th in thetas(name) {
            let s = m.sample(th, n, 5).unwrap();
            assert_eq!(s.len(), n);
            let uv: Vec<(f64, f64)> = s.pairs().iter().map(|&(x, y)| (m.marginal_x(x), m.marginal_y(y))).collect();
            // Kolmogorov-Smirnov on each margin at the 0.1% level
            for col in 0..2 {
                let mut v: Vec<f64> = uv.iter().map(|p| if col == 0 { p.0 } else { p.1 }).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let d = v
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).abs().max((x - i as f64 / n as f64).abs()))
                    .fold(0.0, f64::max);
                assert!(d < 1.95 / (n as f64).sqrt(), "{name} {th} margin {col}: D = {d}");
            }
            for &(u, v) in &[(0.25, 0.25), (0.5, 0.5), (0.3, 0.8), (0.75, 0.4)] {
                let want = m.copula(th, u, v);
                let got = uv.iter().filter(|p| p.0 <= u && p.1 <= v).count() as f64 / n as f64;
                let se = (want * (1.0 - want) / n as f64).sqrt();
                assert!((got - want).abs() <= 4.5 * se + 1e-12, "{name} {th} at ({u},{v}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn samples_are_seed_deterministic() {
    for name in MODEL_NAMES {
        let m = model(name);
        let th = thetas(name)[2];
        let a = m.sample(th, 300, 11).unwrap();
        let b = m.sample(th, 300, 11).unwrap();
        let c = m.sample(th, 100, 11).unwrap();
        assert_eq!(a.pairs(), b.pairs());
        assert_eq!(&a.pairs()[..100], c.pairs(), "{name}: prefixes differ");
        assert_ne!(a.pairs(), m.sample(th, 300, 12).unwrap().pairs());
    }
}

#[test]
fn refined_models_agree() {
    for name in ["plackett", "frank", "bvn"] {
        let m = model(name);
        let r = m.refined();
        let th = thetas(name)[2];
        let a = moments(m.as_ref(), th).unwrap();
        let b = moments(r.as_ref(), th).unwrap();
        assert!((a.sigma2_t - b.sigma2_t).abs() < 1e-9, "{name}");
        assert!((a.sigma2_s - b.sigma2_s).abs() < 1e-9, "{name}");
        assert!((a.mu_t - b.mu_t).abs() < 1e-10, "{name}");
    }
}

#[test]
fn out_of_domain_parameters_are_rejected() {
    assert!(model("bvn").check_theta(1.0).is_err());
    assert!(model("plackett").check_theta(-1.0).is_err());
    assert!(model("fgm").check_theta(1.0).is_err());
    assert!(model("micd-os").check_theta(1.0).is_ok());
    assert!(model("micd-os").check_theta(1.01).is_err());
    assert!(mu_t(model("fgm").as_ref(), 2.0).is_err());
    assert!(model_by_name::<f64>("clayton").is_err());
}
