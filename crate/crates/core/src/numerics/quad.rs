use std::collections::BinaryHeap;
use std::convert::Infallible;

use super::{NumericsError, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
}

impl QuadratureSpec {
    pub const MIN_SUBDIVISIONS: usize = 16;

    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(NumericsError::InvalidSpec(format!(
                "tolerances must be positive (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        if max_subdivisions < Self::MIN_SUBDIVISIONS {
            return Err(NumericsError::InvalidSpec(format!(
                "max_subdivisions must be at least {} (got {max_subdivisions})",
                Self::MIN_SUBDIVISIONS
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 1000,
        }
    }
}

// 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F, E>(f: &mut F, lo: f64, hi: f64) -> std::result::Result<Panel, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Globally adaptive Gauss-Kronrod on a finite interval with a fallible integrand.
fn adaptive<F, E>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> std::result::Result<f64, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<NumericsError>,
{
    if lo == hi {
        return Ok(0.0);
    }
    let first = kronrod15(&mut f, lo, hi)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut panels = 1;
    while total_err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        if !total.is_finite() {
            return Err(
                NumericsError::Domain("integrand produced a non-finite value".into()).into(),
            );
        }
        if panels >= spec.max_subdivisions {
            return Err(NumericsError::ToleranceNotReached {
                estimate: total,
                error_bound: total_err,
            }
            .into());
        }
        let worst = heap.pop().expect("heap holds every live panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // panel cannot be split further in floating point
            return Err(NumericsError::ToleranceNotReached {
                estimate: total,
                error_bound: total_err,
            }
            .into());
        }
        let left = kronrod15(&mut f, worst.lo, mid)?;
        let right = kronrod15(&mut f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
        // Resum occasionally so that cancellation in the running totals does not drift.
        if panels % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    if !total.is_finite() {
        return Err(NumericsError::Domain("integrand produced a non-finite value".into()).into());
    }
    Ok(total)
}

/// ∫_lo^hi f(t) dt on a finite interval.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    adaptive(|t| Ok::<f64, NumericsError>(f(t)), lo, hi, spec)
}

/// ∫_0^∞ f(t) dt through t = u/(1-u), then adaptive subdivision of (0, 1).
pub fn integrate_semi_infinite<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|t| Ok::<f64, Infallible>(f(t)), spec).map_err(|e| match e {
        SemiInfiniteError::Numerics(e) => e,
        SemiInfiniteError::Integrand(never) => match never {},
    })
}

/// Variant of [`integrate_semi_infinite`] whose integrand may fail; the first
/// integrand error aborts the integration and is returned unchanged.
pub fn try_integrate_semi_infinite<F, E>(
    mut f: F,
    spec: &QuadratureSpec,
) -> std::result::Result<f64, SemiInfiniteError<E>>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    adaptive(
        |u: f64| {
            let w = 1.0 - u;
            let t = u / w;
            let v = f(t).map_err(SemiInfiniteError::Integrand)?;
            if v == 0.0 {
                Ok(0.0)
            } else {
                Ok(v / (w * w))
            }
        },
        0.0,
        1.0,
        spec,
    )
}

#[derive(Debug)]
pub enum SemiInfiniteError<E> {
    Numerics(NumericsError),
    Integrand(E),
}

impl<E> From<NumericsError> for SemiInfiniteError<E> {
    fn from(e: NumericsError) -> Self {
        SemiInfiniteError::Numerics(e)
    }
}
