use super::gamma::{gamma_fn, recip_gamma};
use super::{is_nonpositive_integer, NumericsError, Result};

const MAX_TERMS: usize = 10_000;
const SERIES_EPS: f64 = 1e-16;

/// Gauss hypergeometric ₂F₁(a, b; c; z) for real z < 1.
///
/// The series is summed directly on (-1/2, 1). On [-2, -1/2] the Pfaff
/// transformation maps z to z/(z-1) ∈ [1/3, 2/3]. Below -2 the 1/z connection
/// formula is used when a - b is not an integer, otherwise Pfaff again.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(NumericsError::Domain(format!(
            "2F1 is undefined for c = {c} (non-positive integer)"
        )));
    }
    if !(z < 1.0) || z.is_nan() {
        return Err(NumericsError::Domain(format!("2F1 needs z < 1 (got {z})")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    // Terminating series are polynomials and safe to sum anywhere.
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(a, b, c, z);
    }
    if z > -0.5 {
        return series(a, b, c, z);
    }
    if z >= -2.0 || (a - b) == (a - b).round() {
        return pfaff(a, b, c, z);
    }
    reciprocal(a, b, c, z)
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(NumericsError::NonConvergence {
        terms: MAX_TERMS,
        partial: sum,
    })
}

// ₂F₁(a,b;c;z) = (1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))
fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let w = z / (z - 1.0);
    Ok((1.0 - z).powf(-a) * series(a, c - b, c, w)?)
}

// Connection formula around z = ∞ for z < -1, valid when a - b is not an integer:
// ₂F₁ = Γ(c)Γ(b-a)/(Γ(b)Γ(c-a)) (-z)^{-a} ₂F₁(a, a-c+1; a-b+1; 1/z)
//     + Γ(c)Γ(a-b)/(Γ(a)Γ(c-b)) (-z)^{-b} ₂F₁(b, b-c+1; b-a+1; 1/z)
fn reciprocal(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let gc = gamma_fn(c)?;
    let w = 1.0 / z;
    let mz = -z;
    let first = gc * gamma_fn(b - a)? * recip_gamma(b) * recip_gamma(c - a);
    let second = gc * gamma_fn(a - b)? * recip_gamma(a) * recip_gamma(c - b);
    let mut total = 0.0;
    if first != 0.0 {
        total += first * mz.powf(-a) * series(a, a - c + 1.0, a - b + 1.0, w)?;
    }
    if second != 0.0 {
        total += second * mz.powf(-b) * series(b, b - c + 1.0, b - a + 1.0, w)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_argument() {
        assert_eq!(gauss_2f1(1.3, -0.2, 2.5, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn arctan_identity_at_one() {
        // ₂F₁(1, 1/2; 3/2; -z²) = arctan(z)/z
        let v = gauss_2f1(1.0, 0.5, 1.5, -1.0).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn arctan_identity_far_branch() {
        let v = gauss_2f1(1.0, 0.5, 1.5, -100.0).unwrap();
        assert!((v - 10f64.atan() / 10.0).abs() < 1e-12);
        assert!((v - 0.147_112_767_4).abs() < 1e-10);
    }

    #[test]
    fn arctan_identity_grid() {
        let mut z = 0.1;
        while z <= 10.0 {
            let v = gauss_2f1(1.0, 0.5, 1.5, -z * z).unwrap() * z;
            assert!((v - z.atan()).abs() <= 1e-10, "z = {z}");
            z += 0.05;
        }
    }

    #[test]
    fn log_identity_positive_side() {
        // ₂F₁(1, 1; 2; z) = -ln(1-z)/z
        for z in [0.1, 0.4, 0.7, -0.3, -1.5, -3.0] {
            let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            let exact = -(1.0 - z).ln() / z;
            assert!(((v - exact) / exact).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn polynomial_case() {
        // ₂F₁(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, -7.0);
        let exact = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        let v = gauss_2f1(-2.0, b, c, z).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            gauss_2f1(1.0, 1.0, -2.0, 0.3),
            Err(NumericsError::Domain(_))
        ));
        assert!(matches!(
            gauss_2f1(1.0, 1.0, 2.0, 1.0),
            Err(NumericsError::Domain(_))
        ));
    }

    #[test]
    fn slow_series_hits_term_cap() {
        // z close to 1 with c - a - b < 0 converges far too slowly
        assert!(matches!(
            gauss_2f1(1.0, 1.0, 1.5, 0.9999),
            Err(NumericsError::NonConvergence { .. })
        ));
    }
}
