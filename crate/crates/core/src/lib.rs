//! Kendall's and Spearman's rank statistics, the Pitman efficiency of one
//! relative to the other under a range of dependence models, and Monte Carlo
//! checks of the finite-sample picture.
//!
//! Numeric code is generic over [`scalar::Real`]; the aliases below fix `f64`.

// `!(x < y)` is used on purpose so that NaN fails domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod are_engine;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod model_core;
pub mod model_zoo;
pub mod numdiff;
pub mod power_sim;
pub mod quadrature;
pub mod rank_stats;
pub mod scalar;
pub mod special;

pub use are_engine::{
    are_closed_micd, are_numeric, snd_diagnostics, theorem_check, AreMethod, Side, Verdict,
};
pub use asymptotics::{moments, MomentMethod};
pub use error::{Error, Result};
pub use model_core::DependenceModel;
pub use model_zoo::{model_by_name, MicdVariant, MODEL_NAMES};
pub use power_sim::{efficiency_ratio, estimate_power, required_n, Statistic};
pub use rank_stats::{kendall_t, ranks, spearman_s, spearman_u_tilde, RankVector};
pub use scalar::Real;

pub type AreResult = are_engine::AreResult<f64>;
pub type AreDiagnostics = are_engine::AreDiagnostics<f64>;
pub type TheoremCheck = are_engine::TheoremCheck<f64>;
pub type SndDiagnostics = are_engine::SndDiagnostics<f64>;
pub type AsymptoticMoments = asymptotics::AsymptoticMoments<f64>;
pub type PairedSample = model_core::PairedSample<f64>;
pub type ThetaDomain = model_core::ThetaDomain<f64>;
pub type PowerExperiment = power_sim::PowerExperiment<f64>;
pub type Model = Box<dyn DependenceModel<f64>>;
