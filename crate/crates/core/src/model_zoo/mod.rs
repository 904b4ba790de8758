//! Concrete dependence models and the name registry.

mod bvn;
mod frank;
pub mod inversion;
mod linear;
mod micd;
mod plackett;
mod smooth;

pub use bvn::{bvn_cdf, Bvn};
pub use frank::{frank_cdf, Frank};
pub use linear::LinearModelSpec;
pub use micd::{micd_cdf, micd_expectation, MicdSpec, MicdVariant};
pub use plackett::{plackett_cdf, Plackett};
pub use smooth::{CopulaFamily, SmoothCopula};

use crate::error::{Error, Result};
use crate::model_core::DependenceModel;
use crate::quadrature::order_from_env;
use crate::scalar::Real;

/// Registered model names.
pub const MODEL_NAMES: [&str; 8] = [
    "fgm", "bvn", "plackett", "frank", "micd-as", "micd-al", "micd-os", "micd-ol",
];

/// Looks up a model, using the quadrature order from the environment.
pub fn model_by_name<R: Real>(name: &str) -> Result<Box<dyn DependenceModel<R>>> {
    model_with_order(name, order_from_env())
}

/// Looks up a model with an explicit tensor quadrature order (ignored by the
/// exact MICD models).
pub fn model_with_order<R: Real>(name: &str, order: usize) -> Result<Box<dyn DependenceModel<R>>> {
    let model: Box<dyn DependenceModel<R>> = match name.trim().to_ascii_lowercase().as_str() {
        "fgm" => Box::new(SmoothCopula::new(LinearModelSpec::fgm(), order)),
        "bvn" => Box::new(Bvn::new(order)),
        "plackett" => Box::new(SmoothCopula::new(Plackett, order)),
        "frank" => Box::new(SmoothCopula::new(Frank, order)),
        other => {
            let variant: MicdVariant = other
                .parse()
                .map_err(|_| Error::UnknownModel(name.to_string()))?;
            Box::new(MicdSpec::new(variant))
        }
    };
    Ok(model)
}
