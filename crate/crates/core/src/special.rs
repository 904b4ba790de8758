//! Normal distribution functions: univariate cdf and quantile, and the
//! standard bivariate normal cdf.
#![allow(clippy::excessive_precision)]

use crate::scalar::Real;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

// Cody's rational approximations (as used by R's pnorm).
const CODY_A: [f64; 5] = [
    2.2352520354606839287,
    161.02823106855587881,
    1067.6894854603709582,
    18154.981253343561249,
    0.065682337918207449113,
];
const CODY_B: [f64; 4] = [
    47.20258190468824187,
    976.09855173777669322,
    10260.932208618978205,
    45507.789335026729956,
];
const CODY_C: [f64; 9] = [
    0.39894151208813466764,
    8.8831497943883759412,
    93.506656132177855979,
    597.27027639480026226,
    2494.5375852903726711,
    6848.1904505362823326,
    11602.651437647350124,
    9842.7148383839780218,
    1.0765576773720192317e-8,
];
const CODY_D: [f64; 8] = [
    22.266688044328115691,
    235.38790178262499861,
    1519.377599407554805,
    6485.558298266760755,
    18615.571640885098091,
    34900.952721145977266,
    38912.003286093271411,
    19685.429676859990727,
];
const CODY_P: [f64; 6] = [
    0.21589853405795699,
    0.1274011611602473639,
    0.022235277870649807,
    0.001421619193227893466,
    2.9112874951168792e-5,
    0.02307344176494017303,
];
const CODY_Q: [f64; 5] = [
    1.28426009614491121,
    0.468238212480865118,
    0.0659881378689285515,
    0.00378239633202758244,
    7.29751555083966205e-5,
];

/// Standard normal cdf Φ(x), accurate to full double precision in both tails.
pub fn norm_cdf<R: Real>(x: R) -> R {
    let (lower, upper) = norm_both(x);
    let _ = upper;
    lower
}

/// Upper tail 1 − Φ(x) without cancellation.
pub fn norm_sf<R: Real>(x: R) -> R {
    norm_both(x).1
}

fn norm_both<R: Real>(x: R) -> (R, R) {
    if x.is_nan() {
        return (x, x);
    }
    let l = R::lit;
    let y = x.abs();
    let half = R::half();
    if y <= l(0.67448975) {
        let (mut xnum, mut xden) = (R::zero(), R::zero());
        if y > l(1.0e-300).max(R::min_positive_value()) {
            let xsq = x * x;
            xnum = l(CODY_A[4]) * xsq;
            xden = xsq;
            for i in 0..3 {
                xnum = (xnum + l(CODY_A[i])) * xsq;
                xden = (xden + l(CODY_B[i])) * xsq;
            }
        }
        let temp = x * (xnum + l(CODY_A[3])) / (xden + l(CODY_B[3]));
        return (half + temp, half - temp);
    }
    let tail = if y <= l(32f64.sqrt()) {
        let mut xnum = l(CODY_C[8]) * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + l(CODY_C[i])) * y;
            xden = (xden + l(CODY_D[i])) * y;
        }
        let temp = (xnum + l(CODY_C[7])) / (xden + l(CODY_D[7]));
        split_exp(y) * temp
    } else if y < l(40.0) {
        let xsq = (x * x).recip();
        let mut xnum = l(CODY_P[5]) * xsq;
        let mut xden = xsq;
        for i in 0..4 {
            xnum = (xnum + l(CODY_P[i])) * xsq;
            xden = (xden + l(CODY_Q[i])) * xsq;
        }
        let mut temp = xsq * (xnum + l(CODY_P[4])) / (xden + l(CODY_Q[4]));
        temp = (l(FRAC_1_SQRT_2PI) - temp) / y;
        split_exp(y) * temp
    } else {
        R::zero()
    };
    if x > R::zero() {
        (R::one() - tail, tail)
    } else {
        (tail, R::one() - tail)
    }
}

// exp(-y²/2) evaluated in two pieces to keep the leading part exact.
fn split_exp<R: Real>(y: R) -> R {
    let sixteen = R::lit(16.0);
    let xsq = (y * sixteen).trunc() / sixteen;
    let del = (y - xsq) * (y + xsq);
    (-xsq * xsq * R::half()).exp() * (-del * R::half()).exp()
}

/// Standard normal density.
pub fn norm_pdf<R: Real>(x: R) -> R {
    R::lit(FRAC_1_SQRT_2PI) * (-x * x * R::half()).exp()
}

/// Standard normal quantile Φ⁻¹(p), p ∈ (0,1); ±∞ at the endpoints.
///
/// Rational starting approximation followed by a Halley correction
/// against [`norm_cdf`].
pub fn norm_ppf<R: Real>(p: R) -> R {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    if p.is_nan() || p < R::zero() || p > R::one() {
        return R::nan();
    }
    if p == R::zero() {
        return R::neg_infinity();
    }
    if p == R::one() {
        return R::infinity();
    }
    let l = R::lit;
    let p_low = l(0.02425);
    let x = if p < p_low {
        let q = (-R::two() * p.ln()).sqrt();
        (((((l(C[0]) * q + l(C[1])) * q + l(C[2])) * q + l(C[3])) * q + l(C[4])) * q + l(C[5]))
            / ((((l(D[0]) * q + l(D[1])) * q + l(D[2])) * q + l(D[3])) * q + R::one())
    } else if p <= R::one() - p_low {
        let q = p - R::half();
        let r = q * q;
        (((((l(A[0]) * r + l(A[1])) * r + l(A[2])) * r + l(A[3])) * r + l(A[4])) * r + l(A[5]))
            * q
            / (((((l(B[0]) * r + l(B[1])) * r + l(B[2])) * r + l(B[3])) * r + l(B[4])) * r
                + R::one())
    } else {
        let q = (-R::two() * (R::one() - p).ln()).sqrt();
        -(((((l(C[0]) * q + l(C[1])) * q + l(C[2])) * q + l(C[3])) * q + l(C[4])) * q + l(C[5]))
            / ((((l(D[0]) * q + l(D[1])) * q + l(D[2])) * q + l(D[3])) * q + R::one())
    };
    // Halley step; work in whichever tail keeps the residual well conditioned.
    let e = if p > R::half() {
        (R::one() - p) - norm_sf(x)
    } else {
        norm_cdf(x) - p
    };
    let u = e / norm_pdf(x);
    x - u / (R::one() + x * u * R::half())
}

// Gauss–Legendre half-rules (weight, negative abscissa) used by the
// Drezner–Wesolowsky / Genz bivariate normal algorithm.
const GL6: [(f64, f64); 3] = [
    (0.1713244923791705e+00, -0.9324695142031522e+00),
    (0.3607615730481384e+00, -0.6612093864662647e+00),
    (0.4679139345726904e+00, -0.2386191860831970e+00),
];
const GL12: [(f64, f64); 6] = [
    (0.4717533638651177e-01, -0.9815606342467191e+00),
    (0.1069393259953183e+00, -0.9041172563704750e+00),
    (0.1600783285433464e+00, -0.7699026741943050e+00),
    (0.2031674267230659e+00, -0.5873179542866171e+00),
    (0.2334925365383547e+00, -0.3678314989981802e+00),
    (0.2491470458134029e+00, -0.1252334085114692e+00),
];
const GL20: [(f64, f64); 10] = [
    (0.1761400713915212e-01, -0.9931285991850949e+00),
    (0.4060142980038694e-01, -0.9639719272779138e+00),
    (0.6267204833410906e-01, -0.9122344282513259e+00),
    (0.8327674157670475e-01, -0.8391169718222188e+00),
    (0.1019301198172404e+00, -0.7463319064601508e+00),
    (0.1181945319615184e+00, -0.6360536807265150e+00),
    (0.1316886384491766e+00, -0.5108670019508271e+00),
    (0.1420961093183821e+00, -0.3737060887154196e+00),
    (0.1491729864726037e+00, -0.2277858511416451e+00),
    (0.1527533871307259e+00, -0.7652652113349733e-01),
];

/// Standard bivariate normal cdf P(X ≤ x, Y ≤ y) with correlation `rho`.
///
/// Caller guarantees |rho| < 1.
pub fn bvn_cdf<R: Real>(x: R, y: R, rho: R) -> R {
    if x == R::neg_infinity() || y == R::neg_infinity() {
        return R::zero();
    }
    if x == R::infinity() {
        return norm_cdf(y);
    }
    if y == R::infinity() {
        return norm_cdf(x);
    }
    if rho == R::zero() {
        return norm_cdf(x) * norm_cdf(y);
    }
    bvn_upper(-x, -y, rho)
}

// P(X > h, Y > k); port of Genz's BVND.
fn bvn_upper<R: Real>(h: R, k: R, r: R) -> R {
    let l = R::lit;
    let two_pi = R::TAU();
    let quad: &[(f64, f64)] = if r.abs() < l(0.3) {
        &GL6
    } else if r.abs() < l(0.75) {
        &GL12
    } else {
        &GL20
    };
    let mut k = k;
    let mut hk = h * k;
    let mut bvn = R::zero();
    if r.abs() < l(0.925) {
        let hs = (h * h + k * k) * R::half();
        let asr = r.asin();
        for &(w, x) in quad {
            for is in [-1.0, 1.0] {
                let sn = (asr * (l(is) * l(x) + R::one()) * R::half()).sin();
                bvn = bvn + l(w) * ((sn * hk - hs) / (R::one() - sn * sn)).exp();
            }
        }
        bvn = bvn * asr / (R::two() * two_pi);
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }
    if r < R::zero() {
        k = -k;
        hk = -hk;
    }
    if r.abs() < R::one() {
        let a_s = (R::one() - r) * (R::one() + r);
        let mut a = a_s.sqrt();
        let b_s = (h - k) * (h - k);
        let c = (l(4.0) - hk) / l(8.0);
        let d = (l(12.0) - hk) / l(16.0);
        bvn = a
            * (-(b_s / a_s + hk) * R::half()).exp()
            * (R::one() - c * (b_s - a_s) * (R::one() - d * b_s / l(5.0)) / l(3.0)
                + c * d * a_s * a_s / l(5.0));
        if hk > l(-160.0) {
            let b = b_s.sqrt();
            bvn = bvn
                - (-hk * R::half()).exp()
                    * two_pi.sqrt()
                    * norm_cdf(-b / a)
                    * b
                    * (R::one() - c * b_s * (R::one() - d * b_s / l(5.0)) / l(3.0));
        }
        a = a * R::half();
        for &(w, x) in quad {
            for is in [-1.0, 1.0] {
                let xs = (a * (l(is) * l(x) + R::one())).powi(2);
                let rs = (R::one() - xs).sqrt();
                bvn = bvn
                    + a * l(w)
                        * ((-b_s / (R::two() * xs) - hk / (R::one() + rs)).exp() / rs
                            - (-(b_s / xs + hk) * R::half()).exp()
                                * (R::one() + c * xs * (R::one() + d * xs)));
            }
        }
        bvn = -bvn / two_pi;
    }
    if r > R::zero() {
        bvn + norm_cdf(-h.max(k))
    } else {
        let mut out = -bvn;
        if k > h {
            out = if h < R::zero() {
                out + norm_cdf(k) - norm_cdf(h)
            } else {
                out + norm_cdf(-h) - norm_cdf(-k)
            };
        }
        out
    }
}
