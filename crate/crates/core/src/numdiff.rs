//! Finite differences with Richardson extrapolation.

use crate::error::Result;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Extrapolated derivative with the base step and the difference between the
/// last two extrapolation levels.
#[derive(Debug, Clone, Copy)]
pub struct Derivative<R> {
    pub value: R,
    pub step: R,
    pub residual: R,
}

/// Derivative of `f` at `x0` from differences at steps h, h/2, …, h/2^levels,
/// combined by `levels` rounds of Richardson extrapolation.
pub fn derivative<R: Real>(
    f: &mut dyn FnMut(R) -> Result<R>,
    x0: R,
    h: R,
    stencil: Stencil,
    levels: usize,
) -> Result<Derivative<R>> {
    let f0 = match stencil {
        Stencil::Central => R::zero(),
        _ => f(x0)?,
    };
    let mut table: Vec<R> = Vec::with_capacity(levels + 1);
    let mut step = h;
    for _ in 0..=levels {
        let d = match stencil {
            Stencil::Central => (f(x0 + step)? - f(x0 - step)?) / (R::two() * step),
            Stencil::Forward => (f(x0 + step)? - f0) / step,
            Stencil::Backward => (f0 - f(x0 - step)?) / step,
        };
        table.push(d);
        step = step * R::half();
    }
    // Error expansion: even powers for the central stencil, all powers otherwise.
    let mut residual = R::zero();
    for level in 1..=levels {
        let order = match stencil {
            Stencil::Central => 2 * level as i32,
            _ => level as i32,
        };
        let factor = R::two().powi(order);
        let prev = table.clone();
        table.clear();
        for w in prev.windows(2) {
            table.push((factor * w[1] - w[0]) / (factor - R::one()));
        }
        if level == levels {
            residual = (table[table.len() - 1] - prev[prev.len() - 1]).abs();
        }
    }
    Ok(Derivative {
        value: table[table.len() - 1],
        step: h,
        residual,
    })
}
