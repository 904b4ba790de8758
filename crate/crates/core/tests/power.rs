use are_lab::asymptotics::moments;
use are_lab::power_sim::{
    efficiency_ratio, estimate_power, estimate_size, required_n, run_experiment, z_statistic, Statistic,
};
use are_lab::{model_by_name, Error, PowerExperiment};

#[test]
fn z_statistic_scales_with_root_n() {
    let m = model_by_name::<f64>("fgm").unwrap();
    let null = moments(m.as_ref(), 0.0).unwrap();
    let z = z_statistic(Statistic::T, 0.1, &null, 400).unwrap();
    assert!((z - 3.0).abs() < 1e-12, "{z}");
    let z2 = z_statistic(Statistic::T, 0.1, &null, 800).unwrap();
    assert!((z2 / z - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(z_statistic(Statistic::S, null.mu_s, &null, 50).unwrap(), 0.0);
}

#[test]
fn null_rejection_rate_is_alpha() {
    let exp = PowerExperiment::new("bvn", 0.0, 0.15, 0.05, 0.1, 4000, 3).unwrap();
    let band = 3.0 * (0.05f64 * 0.95 / 4000.0).sqrt();
    for which in [Statistic::T, Statistic::S] {
        let r = estimate_size(&exp, which, 500).unwrap();
        assert!((r.value - 0.05).abs() <= band, "{which}: {}", r.value);
    }
}

#[test]
fn power_at_the_analytic_n_is_near_target() {
    let exp = PowerExperiment::new("bvn", 0.0, 0.15, 0.05, 0.1, 4000, 8).unwrap();
    let n = exp.analytic_n(Statistic::T).unwrap().ceil() as usize;
    let p = estimate_power(&exp, Statistic::T, n).unwrap();
    assert!((p.value - 0.9).abs() < 0.03, "n = {n}, power {}", p.value);
}

#[test]
fn power_grows_with_n_and_reaches_one() {
    let exp = PowerExperiment::new("fgm", 0.0, 0.3, 0.05, 0.1, 2000, 17).unwrap();
    for which in [Statistic::T, Statistic::S] {
        let powers: Vec<f64> = [50, 100, 200, 400, 800]
            .iter()
            .map(|&n| estimate_power(&exp, which, n).unwrap().value)
            .collect();
        assert!(powers.windows(2).all(|w| w[1] >= w[0]), "{which}: {powers:?}");
    }
    let strong = PowerExperiment::new("bvn", 0.0, 0.9, 0.05, 0.1, 500, 1).unwrap();
    assert_eq!(estimate_power(&strong, Statistic::S, 200).unwrap().value, 1.0);
}

#[test]
fn experiments_are_bit_reproducible() {
    let exp = PowerExperiment::new("fgm", 0.0, 0.6, 0.05, 0.2, 300, 77).unwrap();
    let a = serde_json::to_string(&run_experiment(&exp).unwrap()).unwrap();
    let b = serde_json::to_string(&run_experiment(&exp).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = PowerExperiment::new("fgm", 0.0, 0.6, 0.05, 0.2, 300, 78).unwrap();
    assert_ne!(a, serde_json::to_string(&run_experiment(&other).unwrap()).unwrap());
}

#[test]
fn required_n_shrinks_as_beta_grows() {
    let tight = PowerExperiment::new("fgm", 0.0, 0.5, 0.05, 0.1, 1000, 5).unwrap();
    let loose = tight.with_levels(0.05, 0.3).unwrap();
    for which in [Statistic::T, Statistic::S] {
        let a = required_n(&tight, which).unwrap();
        let b = required_n(&loose, which).unwrap();
        assert!(b < a, "{which}: {b} vs {a}");
    }
}

#[test]
fn searched_n_is_close_to_the_analytic_n() {
    let exp = PowerExperiment::new("bvn", 0.0, 0.15, 0.05, 0.1, 2000, 12).unwrap();
    let searched = required_n(&exp, Statistic::T).unwrap() as f64;
    let analytic = exp.analytic_n(Statistic::T).unwrap();
    assert!((searched / analytic - 1.0).abs() < 0.15, "{searched} vs {analytic}");
}

#[test]
fn constant_are_model_gives_unit_ratio() {
    let exp = PowerExperiment::new("micd-as", 0.0, 0.25, 0.05, 0.1, 1000, 31).unwrap();
    let (ratio, se) = efficiency_ratio(&exp).unwrap();
    assert!((0.85..=1.15).contains(&ratio), "{ratio} ± {se}");
}

#[test]
fn ol_model_favours_kendall() {
    // at θ = 0.3 the required n runs to the tens of thousands
    let exp = PowerExperiment::new("micd-ol", 0.0, 0.5, 0.05, 0.1, 1000, 4).unwrap();
    let (ratio, se) = efficiency_ratio(&exp).unwrap();
    assert!(ratio - 2.0 * se > 1.0, "{ratio} ± {se}");
}

#[test]
fn invalid_levels_are_config_errors() {
    let e = PowerExperiment::new("bvn", 0.0, 0.15, 0.6, 0.5, 100, 1).unwrap_err();
    assert!(matches!(e, Error::Config(_)), "{e}");
    assert_eq!(e.exit_code(), 2);
    assert!(PowerExperiment::new("bvn", 0.0, 0.15, 0.05, 0.0, 100, 1).is_err());
    assert!(PowerExperiment::new("bvn", 0.0, 0.15, 0.05, 0.1, 0, 1).is_err());
    assert!(PowerExperiment::new("bvn", 0.0, 1.5, 0.05, 0.1, 100, 1).is_err());
}
