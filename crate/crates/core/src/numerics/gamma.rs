use std::f64::consts::PI;

use super::{is_nonpositive_integer, NumericsError, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Gamma function for real arguments, via Lanczos with reflection below 1/2.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(NumericsError::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(NumericsError::GammaPole(x));
    }
    // Exact for small positive integers.
    if x == x.round() && x <= 20.0 {
        let mut f = 1.0;
        for k in 2..(x as u32) {
            f *= k as f64;
        }
        return Ok(f);
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        Ok(PI / (s * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// 1/Γ(x), which is entire: zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        gamma_fn(x).map(|g| 1.0 / g).unwrap_or(f64::NAN)
    }
}
