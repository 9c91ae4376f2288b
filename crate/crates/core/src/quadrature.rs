//! Adaptive Gauss–Kronrod quadrature: a 7-15 panel rule plus two drivers —
//! a finite-interval bisection refiner and a semi-infinite driver that
//! first walks fixed-width panels down the tail until contributions become
//! negligible, then refines worst-error-first. The fixed tail walk matters
//! for the oscillatory characteristic-function integrands: the panel width
//! is chosen near one oscillation period so panel values track the decay
//! envelope rather than cancelling internally into premature "convergence".

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Positive Kronrod abscissae (descending), last entry the center.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// 7-point Gauss weights (for the odd-indexed abscissae above).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15-point Kronrod weights.
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

/// Function evaluations consumed by one panel.
pub const EVALS_PER_PANEL: usize = 15;

/// Hard cap on fixed-width tail panels before refinement starts.
const TAIL_PANEL_CAP: usize = 100_000;

/// Tolerances and budgets steering the adaptive drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the total error estimate.
    pub abs_tol: f64,
    /// Relative tolerance (against |value|); the effective target is
    /// `max(abs_tol, rel_tol * |value|)`.
    pub rel_tol: f64,
    /// Maximum number of worst-panel bisections (tail walking excluded).
    pub max_subdivisions: usize,
    /// Width of the fixed panels appended while walking a semi-infinite
    /// tail. Near one oscillation period of the integrand is ideal.
    pub tail_panel_width: f64,
    /// Tail walking stops after two consecutive panel values fall below
    /// this magnitude.
    pub tail_stop_threshold: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
            tail_panel_width: 2.0 * std::f64::consts::PI,
            tail_stop_threshold: 1e-13,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Estimate of the integral.
    pub value: f64,
    /// Rigorous-in-practice bound on the absolute error of `value`.
    pub error_estimate: f64,
    /// Total integrand evaluations (always 15 per panel).
    pub evaluations: usize,
    /// Number of bisections performed.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Max-heap ordering on the error estimate.
#[derive(Debug, Clone, Copy)]
struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .partial_cmp(&other.0.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// QUADPACK-style error rescaling: trust |K15 - G7| when the panel looks
/// smooth, inflate it toward the total variation when it does not, and
/// never report below the roundoff floor eps * resabs.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / f64::EPSILON {
        let min_err = f64::EPSILON * resabs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let abs_half_len = half_len.abs();

    let mut fv1 = [0.0_f64; 8];
    let mut fv2 = [0.0_f64; 8];
    for (j, &x) in XGK.iter().enumerate() {
        let dx = half_len * x;
        fv1[j] = f(center + dx);
        fv2[j] = f(center - dx);
        if !fv1[j].is_finite() {
            return Err(Error::NonFiniteIntegrand { x: center + dx });
        }
        if !fv2[j].is_finite() {
            return Err(Error::NonFiniteIntegrand { x: center - dx });
        }
    }
    let f_center = fv1[7];

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = f_center.abs() * WGK[7];
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let fsum = fv1[jtw] + fv2[jtw];
        res_gauss += WG[j] * fsum;
        res_kronrod += WGK[jtw] * fsum;
        res_abs += WGK[jtw] * (fv1[jtw].abs() + fv2[jtw].abs());
    }
    res_gauss += WG[3] * f_center;
    for j in 0..4 {
        let jtwm1 = 2 * j;
        res_kronrod += WGK[jtwm1] * (fv1[jtwm1] + fv2[jtwm1]);
        res_abs += WGK[jtwm1] * (fv1[jtwm1].abs() + fv2[jtwm1].abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half_len;
    let value = res_kronrod * half_len;
    let error = rescale_error(err, res_abs * abs_half_len, res_asc * abs_half_len);
    Ok(Panel { a, b, value, error })
}

/// Single 15-point Gauss–Kronrod panel over [a, b]: `(value, error_estimate)`.
pub fn gk_panel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> (f64, f64) {
    match eval_panel(&f, a, b) {
        Ok(p) => (p.value, p.error),
        Err(_) => (f64::NAN, f64::INFINITY),
    }
}

fn heap_totals(heap: &BinaryHeap<ByError>) -> (f64, f64) {
    let mut value = 0.0;
    let mut error = 0.0;
    for p in heap.iter() {
        value += p.0.value;
        error += p.0.error;
    }
    (value, error)
}

/// Worst-first refinement of whatever panels are already on the heap.
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    mut heap: BinaryHeap<ByError>,
    spec: &QuadratureSpec,
    mut evaluations: usize,
) -> Result<QuadratureResult> {
    let mut subdivisions = 0usize;
    let (mut value, mut error) = heap_totals(&heap);
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            let (value, error_estimate) = heap_totals(&heap);
            return Err(Error::QuadratureBudget {
                value,
                error_estimate,
                evaluations,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("refine called with an empty heap").0;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer bisectable in f64: further work cannot help.
            let (value, error_estimate) = heap_totals(&heap);
            return Err(Error::QuadratureBudget {
                value: value + worst.value,
                error_estimate: error_estimate + worst.error,
                evaluations,
                subdivisions,
            });
        }
        let left = eval_panel(f, worst.a, mid)?;
        let right = eval_panel(f, mid, worst.b)?;
        evaluations += 2 * EVALS_PER_PANEL;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
    }
    // Re-accumulate once at the end: the incremental running totals can
    // drift after many updates.
    let (value, error_estimate) = heap_totals(&heap);
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
        subdivisions,
    })
}

/// Adaptive integration over the finite interval [a, b].
pub fn adaptive_finite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain {
            routine: "adaptive_finite",
            message: format!("need finite a < b, got [{a}, {b}]"),
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(ByError(eval_panel(f, a, b)?));
    refine(f, heap, spec, EVALS_PER_PANEL)
}

/// Panels to walk before giving up on an integrand that never rises above
/// the tail-stop threshold (treated as negligibly small everywhere).
const UNARMED_QUIET_LIMIT: u32 = 64;

/// Adaptive integration over [a, ∞): walk fixed-width panels until the
/// integrand has been seen (a panel above `tail_stop_threshold`) and has
/// then gone quiet for two consecutive panels, then refine the accumulated
/// panels worst-error-first.
///
/// The stop detector arms only after the first loud panel so that
/// integrands whose support starts away from `a` (a leading dead zone) are
/// walked through rather than mistaken for a decayed tail. An integrand
/// that never rises above the threshold is accepted as negligible after
/// [`UNARMED_QUIET_LIMIT`] panels.
pub fn adaptive_semi_infinite<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    if !a.is_finite() {
        return Err(Error::Domain {
            routine: "adaptive_semi_infinite",
            message: format!("lower limit must be finite, got {a}"),
        });
    }
    if !(spec.tail_panel_width.is_finite() && spec.tail_panel_width > 0.0) {
        return Err(Error::Domain {
            routine: "adaptive_semi_infinite",
            message: format!(
                "tail_panel_width must be finite and positive, got {}",
                spec.tail_panel_width
            ),
        });
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    let mut quiet_streak = 0u32;
    let mut armed = false;
    let mut k = 0usize;
    loop {
        if k >= TAIL_PANEL_CAP {
            let (value, error_estimate) = heap_totals(&heap);
            return Err(Error::QuadratureBudget {
                value,
                error_estimate,
                evaluations,
                subdivisions: 0,
            });
        }
        let pa = a + k as f64 * spec.tail_panel_width;
        let pb = a + (k + 1) as f64 * spec.tail_panel_width;
        let panel = eval_panel(f, pa, pb)?;
        evaluations += EVALS_PER_PANEL;
        if panel.value.abs() < spec.tail_stop_threshold {
            quiet_streak += 1;
        } else {
            quiet_streak = 0;
            armed = true;
        }
        heap.push(ByError(panel));
        k += 1;
        if (armed && quiet_streak >= 2) || (!armed && quiet_streak >= UNARMED_QUIET_LIMIT) {
            break;
        }
    }
    refine(f, heap, spec, evaluations)
}
