//! The interference factor ρ(T, α) = T^{2/α} ∫_{T^{-2/α}}^∞ (1 + u^{α/2})^{-1} du.

use super::{gauss_2f1, integrate, integrate_semi_infinite, NumericsError, QuadratureSpec, Result};

fn check(t: f64, alpha: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(NumericsError::Domain(format!("rho needs T > 0 (got {t})")));
    }
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(NumericsError::Domain(format!(
            "rho needs alpha > 2 (got {alpha})"
        )));
    }
    Ok(())
}

fn tight_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-300, 1e-12, 4000).expect("static spec is valid")
}

/// ρ(T, α) by quadrature, the defining form.
pub fn rho(t: f64, alpha: f64) -> Result<f64> {
    rho_with(t, alpha, &tight_spec())
}

/// ρ(T, α) by quadrature under a caller-supplied tolerance.
///
/// Substituting u = T^{-2/α} e^y collapses the integral to
/// ∫_0^∞ T e^{y(1-α/2)} / (1 + T e^{-yα/2}) dy, whose integrand decays
/// exponentially even where the original tail is only u^{-α/2}.
/// For large T the integrand peaks near y0 = ln(T)/(α/2), so the range is
/// split there to keep the peak at a panel edge.
pub fn rho_with(t: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check(t, alpha)?;
    let half = 0.5 * alpha;
    let f = |y: f64| t * (y * (1.0 - half)).exp() / (1.0 + t * (-y * half).exp());
    let y0 = t.ln() / half;
    if y0 <= 0.0 {
        return integrate_semi_infinite(f, spec);
    }
    Ok(integrate(f, 0.0, y0, spec)? + integrate_semi_infinite(|s| f(y0 + s), spec)?)
}

/// ρ(T, α) = 2T/(α-2) · ₂F₁(1, 1-2/α; 2-2/α; -T).
pub fn rho_hypergeometric(t: f64, alpha: f64) -> Result<f64> {
    check(t, alpha)?;
    let delta = 2.0 / alpha;
    Ok(2.0 * t / (alpha - 2.0) * gauss_2f1(1.0, 1.0 - delta, 2.0 - delta, -t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn alpha4_closed(t: f64) -> f64 {
        t.sqrt() * (PI / 2.0 - (1.0 / t.sqrt()).atan())
    }

    fn log_grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64))
    }

    #[test]
    fn unit_threshold_alpha4() {
        assert!((rho(1.0, 4.0).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!((rho_hypergeometric(1.0, 4.0).unwrap() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn ten_alpha4() {
        let v = rho(10.0, 4.0).unwrap();
        assert!((v - alpha4_closed(10.0)).abs() < 1e-10);
        assert!((v - 3.998_760_050_56).abs() < 1e-9);
    }

    #[test]
    fn vanishes_at_small_threshold() {
        assert!(rho(1e-9, 4.0).unwrap() < 1e-4);
    }

    #[test]
    fn alpha4_closed_form_on_grid() {
        for t in log_grid(61) {
            let v = rho(t, 4.0).unwrap();
            assert!(
                ((v - alpha4_closed(t)) / alpha4_closed(t)).abs() <= 1e-10,
                "T = {t}"
            );
        }
    }

    #[test]
    fn two_forms_agree() {
        for alpha in [2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
            for t in log_grid(41) {
                let q = rho(t, alpha).unwrap();
                let h = rho_hypergeometric(t, alpha).unwrap();
                assert!(
                    ((q - h) / q).abs() <= 1e-9,
                    "alpha = {alpha}, T = {t}: {q} vs {h}"
                );
            }
        }
    }

    #[test]
    fn increasing_in_threshold() {
        for alpha in [2.5, 3.0, 4.0, 5.0] {
            let vals: Vec<f64> = log_grid(50).map(|t| rho(t, alpha).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]), "alpha = {alpha}");
        }
    }

    #[test]
    fn huge_threshold_alpha4() {
        for t in [1e6, 1e12, 1e40, 1e200] {
            let v = rho(t, 4.0).unwrap();
            assert!(
                ((v - alpha4_closed(t)) / alpha4_closed(t)).abs() <= 1e-10,
                "T = {t}: {v}"
            );
        }
    }

    #[test]
    fn domain() {
        assert!(rho(0.0, 4.0).is_err());
        assert!(rho(1.0, 2.0).is_err());
        assert!(rho_hypergeometric(-1.0, 4.0).is_err());
    }
}
