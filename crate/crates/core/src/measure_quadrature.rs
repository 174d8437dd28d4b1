//! Adaptive Gauss–Legendre quadrature for radial integrals on `H^N` and
//! for half-line integrals of volume profiles.
//!
//! The engine is a 15-point Gauss–Legendre rule driven by global adaptive
//! bisection: every segment carries the error estimate
//! `|GL15(whole) − GL15(left) − GL15(right)|`, and the segment with the
//! largest estimate is split until the summed estimate meets the
//! tolerance. Base segments never straddle a breakpoint of the integrand,
//! so piecewise-analytic functions converge at the full Gauss rate.
//!
//! Integrals over unbounded domains are truncated at a multiplicative
//! horizon and, when [`TailEstimateMode::PowerLawExtrapolate`] is selected,
//! corrected by a `c/t²` fit over the last decade — the exact decay law of
//! the profiles produced by the inverse-Laplacian iteration.

use crate::radial_calculus::RadialJetFunction;
use crate::{hypgeom, Error, Result};
use std::sync::OnceLock;

/// Tolerances and budgets for the adaptive quadrature.
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Relative tolerance on the summed error estimate.
    pub rel_tol: f64,
    /// Absolute tolerance floor (guards integrals whose value is zero).
    pub abs_tol: f64,
    /// Maximum number of segment splits before giving up.
    pub max_subdivisions: usize,
    /// Multiplicative tail window: an unbounded integral from `T` is
    /// truncated at `max(T, 1) · tail_horizon` before extrapolation.
    pub tail_horizon: f64,
    /// What to do with the mass beyond the truncation point.
    pub tail_mode: TailEstimateMode,
}

/// Handling of the integral beyond the truncation horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailEstimateMode {
    /// Drop it (safe when the integrand decays faster than any power).
    Truncate,
    /// Fit `c/t²` over the last decade before the horizon and add `c/H`.
    PowerLawExtrapolate,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            max_subdivisions: 4000,
            tail_horizon: 1e4,
            tail_mode: TailEstimateMode::PowerLawExtrapolate,
        }
    }
}

/// Measure against which a weighted integral is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Radial hyperbolic volume: `dv = |S^{n−1}| sinh^{n−1}(r) dr`.
    Hyperbolic { n: u32 },
    /// Plain Lebesgue measure on the half-line (volume variable).
    Lebesgue1d,
}

/// A weighted integral `∫ f(x) · x^{−power} dμ`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedIntegralSpec {
    /// Exponent `p` of the singular weight `x^{−p}` (may be negative).
    pub power: i32,
    pub measure: MeasureKind,
}

/// 15-point Gauss–Legendre nodes and weights on `[−1, 1]`, generated once
/// by Newton iteration on the Legendre recurrence (no transcribed tables).
fn gl15() -> &'static ([f64; 15], [f64; 15]) {
    static RULE: OnceLock<([f64; 15], [f64; 15])> = OnceLock::new();
    RULE.get_or_init(|| {
        const M: usize = 15;
        let mut nodes = [0.0; M];
        let mut weights = [0.0; M];
        for i in 0..M {
            // Standard initial guess for the i-th root of P_15.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (M as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Evaluate P_15 and P'_15 by the three-term recurrence.
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=M {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = M as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=M {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = M as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// GL15 applied to one segment.
fn gl15_segment(eval: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * eval(mid + half * x);
    }
    acc * half
}

struct Segment {
    a: f64,
    b: f64,
    value: f64, // refined two-half estimate
    err: f64,   // |whole − two-half|
}

fn make_segment(eval: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<Segment> {
    let whole = gl15_segment(eval, a, b);
    let mid = 0.5 * (a + b);
    let left = gl15_segment(eval, a, mid);
    let right = gl15_segment(eval, mid, b);
    let value = left + right;
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    Ok(Segment {
        a,
        b,
        value,
        err: (whole - value).abs(),
    })
}

/// Adaptive integral of `eval` over the union of `[points[i], points[i+1]]`.
///
/// `points` must be sorted; it should include every breakpoint of the
/// integrand. Globally adaptive: always refines the segment with the
/// largest error estimate.
pub fn integrate_segments(
    eval: &dyn Fn(f64) -> f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if points.len() < 2 {
        return Ok(0.0);
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("integration points must be sorted".into()));
    }
    let mut segs = Vec::with_capacity(points.len() * 2);
    for w in points.windows(2) {
        if w[1] > w[0] {
            segs.push(make_segment(eval, w[0], w[1])?);
        }
    }
    if segs.is_empty() {
        return Ok(0.0);
    }
    for _ in 0..cfg.max_subdivisions {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        // Deterministic argmax: first segment attaining the maximum error.
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|(i, x), (j, y)| x.err.total_cmp(&y.err).then(j.cmp(i)))
            .expect("non-empty segment list");
        let seg = segs.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval at f64 resolution: accept its value as exact.
            segs.push(Segment { err: 0.0, ..seg });
            continue;
        }
        segs.push(make_segment(eval, seg.a, mid)?);
        segs.push(make_segment(eval, mid, seg.b)?);
    }
    let total: f64 = segs.iter().map(|s| s.value).sum();
    let err: f64 = segs.iter().map(|s| s.err).sum();
    if err <= 1e3 * cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        // Within a graceful factor of the target; the estimate is
        // conservative, so accept rather than fail hard.
        return Ok(total);
    }
    Err(Error::NonConvergence(format!(
        "quadrature did not reach tolerance after {} splits (err {err:.3e}, value {total:.6e})",
        cfg.max_subdivisions
    )))
}

/// Segment endpoints for integrating `f` over `[lo, hi]`: the support
/// clipped to the window, cut at every breakpoint.
pub fn radial_segments(f: &dyn RadialJetFunction, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = f.support();
    let lo = lo.max(a);
    let hi = hi.min(b);
    if !(hi > lo) {
        return Vec::new();
    }
    let mut pts = vec![lo];
    for bp in f.breakpoints() {
        if bp > lo && bp < hi {
            pts.push(bp);
        }
    }
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Result of an integral with an extrapolated tail.
#[derive(Debug, Clone, Copy)]
pub struct TailResult {
    /// Full estimate (truncated part plus correction).
    pub value: f64,
    /// Where the quadrature was truncated.
    pub truncated_at: f64,
    /// Extrapolated mass beyond the truncation point.
    pub correction: f64,
}

/// Integral of `eval` over `[from, ∞)`.
///
/// Quadrature runs on geometrically growing panels up to
/// `H = max(from, 1) · tail_horizon`; the remainder is handled per
/// [`TailEstimateMode`].
pub fn integrate_tail(
    eval: &dyn Fn(f64) -> f64,
    from: f64,
    cfg: &QuadratureConfig,
) -> Result<TailResult> {
    if !(from >= 0.0) {
        return Err(Error::Domain(format!(
            "tail integral needs from >= 0, got {from}"
        )));
    }
    let base = from.max(1.0);
    let horizon = base * cfg.tail_horizon;
    // Geometric panel boundaries control the panel count over many decades.
    let mut pts = vec![from];
    let mut t = base.max(from * 2.0).max(1e-6);
    while t < horizon {
        if t > from {
            pts.push(t);
        }
        t *= 4.0;
    }
    pts.push(horizon);
    let truncated = integrate_segments(eval, &pts, cfg)?;
    let correction = match cfg.tail_mode {
        TailEstimateMode::Truncate => 0.0,
        TailEstimateMode::PowerLawExtrapolate => {
            // Fit c/t²: average t²·eval(t) over the last decade.
            let mut c_acc = 0.0;
            let samples = 8;
            for i in 0..samples {
                let ti = horizon * 0.1f64.powf(1.0 - (i as f64 + 0.5) / samples as f64);
                c_acc += ti * ti * eval(ti);
            }
            let c = c_acc / samples as f64;
            c / horizon
        }
    };
    Ok(TailResult {
        value: truncated + correction,
        truncated_at: horizon,
        correction,
    })
}

/// Weighted integral `∫ f(x) · x^{−p} dμ` over the support of `f`.
///
/// For the hyperbolic measure, `f` must have bounded support unless it
/// carries a volume profile (then the `p = 0` integral is evaluated in
/// volume coordinates, where the substitution is exact). Positive powers
/// `p` require the support to stay away from the origin.
pub fn integrate_weighted(
    f: &dyn RadialJetFunction,
    spec: &WeightedIntegralSpec,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (a, b) = f.support();
    let p = spec.power;
    if p > 0 && a <= 0.0 {
        return Err(Error::Domain(format!(
            "weight x^(-{p}) is singular at 0 but the support reaches 0"
        )));
    }
    match spec.measure {
        MeasureKind::Hyperbolic { n } => {
            if n < hypgeom::MIN_DIMENSION {
                return Err(Error::Domain(format!(
                    "hyperbolic measure needs n >= {}, got {n}",
                    hypgeom::MIN_DIMENSION
                )));
            }
            if b.is_infinite() {
                if p == 0 {
                    if let Some((profile, _)) = f.volume_profile() {
                        return integrate_halfline(profile.as_ref(), cfg);
                    }
                }
                return Err(Error::Domain(
                    "hyperbolic integral over unbounded support without a volume profile".into(),
                ));
            }
            let surface = hypgeom::sphere_measure(n)?;
            let sinh_pow = n as i32 - 1;
            let eval = |r: f64| f.value(r) * r.powi(-p) * surface * r.sinh().powi(sinh_pow);
            let pts = radial_segments(f, 0.0, b);
            integrate_segments(&eval, &pts, cfg)
        }
        MeasureKind::Lebesgue1d => {
            if b.is_infinite() {
                let eval = |t: f64| f.value(t) * t.powi(-p);
                let last_bp = f.breakpoints().last().copied().unwrap_or(a.max(1.0));
                let pts = radial_segments(f, 0.0, last_bp);
                let head = integrate_segments(&eval, &pts, cfg)?;
                let tail = integrate_tail(&eval, last_bp, cfg)?;
                Ok(head + tail.value)
            } else {
                let eval = |t: f64| f.value(t) * t.powi(-p);
                let pts = radial_segments(f, 0.0, b);
                integrate_segments(&eval, &pts, cfg)
            }
        }
    }
}

/// `∫ f(r) · r^{−power} dv` over `H^n` (radial hyperbolic volume measure).
pub fn integrate_hn_radial(
    f: &dyn RadialJetFunction,
    n: u32,
    power: i32,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_weighted(
        f,
        &WeightedIntegralSpec {
            power,
            measure: MeasureKind::Hyperbolic { n },
        },
        cfg,
    )
}

/// Plain `∫ f(t) dt` over the half-line (volume-variable profiles),
/// including the extrapolated tail when the support is unbounded.
pub fn integrate_halfline(f: &dyn RadialJetFunction, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_weighted(
        f,
        &WeightedIntegralSpec {
            power: 0,
            measure: MeasureKind::Lebesgue1d,
        },
        cfg,
    )
}
