//! Safeguarded Newton inversion of monotone functions and seeded sampling helpers.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model_core::PairedSample;
use crate::scalar::Real;

pub(crate) const MAX_INVERSION_ITERS: usize = 200;

/// Solves `f(x) = target` for nondecreasing `f` on `[lo, hi]` by bisection
/// refined with Newton steps using `df`.
pub fn invert_increasing<R: Real>(
    f: impl Fn(R) -> R,
    df: impl Fn(R) -> R,
    target: R,
    lo: R,
    hi: R,
    tol: R,
) -> Result<R> {
    let (mut a, mut b) = (lo, hi);
    let mut x = (a + b) * R::half();
    for _ in 0..MAX_INVERSION_ITERS {
        let fx = f(x) - target;
        if fx == R::zero() {
            return Ok(x);
        }
        if fx > R::zero() {
            b = x;
        } else {
            a = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d > R::zero() && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            (a + b) * R::half()
        };
        if (next - x).abs() <= tol || (b - a) <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Numeric(format!(
        "inversion for target {} did not converge in {MAX_INVERSION_ITERS} steps (bracket [{}, {}])",
        target.as_f64(),
        a.as_f64(),
        b.as_f64()
    )))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open01<R: Real>(rng: &mut ChaCha8Rng) -> R {
    R::lit(rng.sample::<f64, _>(Open01))
}

/// Draws `n` points with `draw`, then redraws any point whose x or y
/// coordinate collides with an earlier one.
pub(crate) fn sample_with<R: Real>(
    n: usize,
    theta: R,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<(R, R)>,
) -> Result<PairedSample<R>> {
    let mut rng = rng_from_seed(seed);
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        pairs.push(draw(&mut rng)?);
    }
    for _round in 0..64 {
        let tied = tied_indices(&pairs);
        if tied.is_empty() {
            return PairedSample::new(pairs, Some(theta), Some(seed));
        }
        for i in tied {
            pairs[i] = draw(&mut rng)?;
        }
    }
    Err(Error::Numeric("could not resolve ties in generated sample".into()))
}

fn tied_indices<R: Real>(pairs: &[(R, R)]) -> Vec<usize> {
    let mut out = Vec::new();
    for coord in [0usize, 1] {
        let key = |i: usize| if coord == 0 { pairs[i].0 } else { pairs[i].1 };
        let mut idx: Vec<usize> = (0..pairs.len()).collect();
        idx.sort_by(|&i, &j| key(i).partial_cmp(&key(j)).unwrap_or(std::cmp::Ordering::Equal));
        for w in idx.windows(2) {
            if key(w[0]) == key(w[1]) {
                out.push(w[0].max(w[1]));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
