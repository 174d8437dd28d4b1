//! The almost-extremising sequences that pin down the sharp constants.
//!
//! Everything happens in two coordinate systems:
//!
//! * the **volume variable** `t = G(r)` (measure of the geodesic ball of
//!   radius `r`), where the extremal profile has a closed piecewise form
//!   and the inverse-Laplacian iteration is a pair of one-dimensional
//!   integral operators, and
//! * the **geodesic radius** `r`, reached through [`lift_to_hn`], where the
//!   Rayleigh quotients of the inequalities are evaluated honestly by
//!   quadrature against the hyperbolic volume measure.
//!
//! The central objects:
//!
//! * [`profile_f_r`] — the profile `f(t)` equal to `R0^{−1/2}` on
//!   `[0, R0)`, `t^{−1/2}` on `[R0, R)`, affine down to zero on `[R, 2R)`.
//!   Its squared norm is `ln(R/R0) + 4/3` and its gradient energy
//!   `∫ f'(t)² t² dt = (ln(R/R0) + 28/3)/4` ([`profile_l2_squared`],
//!   [`profile_gradient_energy`]).
//! * [`v_iteration`] — the sequence `v_0 = f`, and
//!   `v_{i+1}(t) = ∫_t^∞ J_i(s)/D(s)² ds` with `J_i(t) = ∫_0^t v_i` and
//!   `D(t) = G'(F(t))`; each step inverts the radial Laplacian:
//!   `−Δ_r [v_{i+1}∘G] = v_i∘G`. The running averages `g_{i+1} = J_i/t`
//!   are exposed alongside.
//! * [`rayleigh_quotient`] / [`sharpness_sweep`] — quotient evaluation and
//!   sweeps over growing `R` with certified upper bounds; the quotients
//!   approach the sharp constant from above as `R → ∞`.
//!
//! Numerical representation: the iterated functions `v_i` and their
//! cumulatives `J_i` are cached on a geometric lattice (16 nodes per
//! octave) by exact sequential panel quadrature — node *derivatives* are
//! closed-form, so cubic Hermite interpolation in `log t` is accurate to
//! about `1e−9` relative. Derivative jets never touch the interpolant:
//! they chain through the closed forms, so Laplacian residuals stay at
//! rounding level.

use crate::measure_quadrature::{integrate_hn_radial, integrate_segments, QuadratureConfig};
use crate::radial_calculus::jet::{coth_jet, sinh_jet, Jet};
use crate::radial_calculus::library::{Piece, Piecewise};
use crate::radial_calculus::{nabla_r_k, ProductFn, RadialFn, RadialJetFunction};
use crate::{coefficients, hypgeom, Error, Result};
use num_traits::ToPrimitive;
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Spacing of the caching lattice in `ln t`: 16 nodes per octave.
const LOG_STEP: f64 = std::f64::consts::LN_2 / 16.0;

/// Parameters of one member of the extremising sequence.
#[derive(Debug, Clone, Copy)]
pub struct SequenceParams {
    /// Inner plateau end `R0` (volume units); the profile is constant
    /// below it.
    pub r0: f64,
    /// Outer scale `R`; the profile is cut off affinely on `[R, 2R)`.
    pub r_big: f64,
    /// Growth-ratio slack `ε > 0` entering the certified bounds (they
    /// require `R0 ≥ threshold_r0(ε)`).
    pub eps: f64,
    /// Number of inverse-Laplacian steps to apply.
    pub iter: u32,
}

impl SequenceParams {
    /// Validated constructor: needs `0 < R0 < R` and `ε > 0`.
    pub fn new(r0: f64, r_big: f64, eps: f64, iter: u32) -> Result<Self> {
        if !(r0 > 0.0 && r_big > r0) {
            return Err(Error::Domain(format!(
                "sequence params need 0 < R0 < R, got R0 = {r0}, R = {r_big}"
            )));
        }
        if !(eps > 0.0) {
            return Err(Error::Domain(format!(
                "sequence params need eps > 0, got {eps}"
            )));
        }
        Ok(SequenceParams {
            r0,
            r_big,
            eps,
            iter,
        })
    }

    /// Certified construction: `R0 = threshold_r0(ε, n)` and
    /// `R = R0 · e^{ln_ratio}`.
    pub fn from_ratio(n: u32, eps: f64, ln_ratio: f64, iter: u32) -> Result<Self> {
        if !(ln_ratio > 0.0) {
            return Err(Error::Domain(format!(
                "ln(R/R0) must be positive, got {ln_ratio}"
            )));
        }
        let r0 = hypgeom::threshold_r0(eps, n)?;
        SequenceParams::new(r0, r0 * ln_ratio.exp(), eps, iter)
    }

    /// `ln(R/R0)`, the quantity the norms grow with.
    pub fn ln_ratio(&self) -> f64 {
        (self.r_big / self.r0).ln()
    }

    /// End of the profile support in volume units (`2R`).
    pub fn support_end(&self) -> f64 {
        2.0 * self.r_big
    }

    /// Whether the plateau is large enough for the certified bounds at
    /// dimension `n`: `R0 ≥ threshold_r0(ε, n)`.
    pub fn is_certified(&self, n: u32) -> Result<bool> {
        Ok(self.r0 >= hypgeom::threshold_r0(self.eps, n)?)
    }

    /// Bottom of the caching lattice (12 decades below the plateau; below
    /// it all iterated functions are first-order Taylor extensions, which
    /// carries relative weight `~1e−12` in any integral).
    fn t_micro(&self) -> f64 {
        self.r0 * 1e-12
    }

    /// Top of the caching lattice (8 decades beyond the support), beyond
    /// every tail horizon the norm integrals use.
    fn t_top(&self) -> f64 {
        self.support_end() * 1e8
    }
}

/// `∫_0^∞ f(t)² dt = ln(R/R0) + 4/3`, exactly.
pub fn profile_l2_squared(p: &SequenceParams) -> f64 {
    p.ln_ratio() + 4.0 / 3.0
}

/// `∫_0^∞ f'(t)² t² dt = (ln(R/R0) + 28/3)/4`, exactly.
pub fn profile_gradient_energy(p: &SequenceParams) -> f64 {
    0.25 * (p.ln_ratio() + 28.0 / 3.0)
}

/// The piecewise profile in the volume variable: `R0^{−1/2}` on `[0, R0)`,
/// `t^{−1/2}` on `[R0, R)`, affine `R^{−1/2}(2 − t/R)` on `[R, 2R)`, zero
/// beyond. Continuous, piecewise smooth, nonincreasing.
pub fn profile_f_r(p: &SequenceParams) -> Result<RadialFn> {
    let pw = Piecewise::new(
        vec![
            (0.0, Piece::Const(1.0 / p.r0.sqrt())),
            (p.r0, Piece::Monomial { c: 1.0, p: -0.5 }),
            (
                p.r_big,
                Piece::Affine {
                    c0: 2.0 / p.r_big.sqrt(),
                    c1: -1.0 / (p.r_big * p.r_big.sqrt()),
                },
            ),
        ],
        p.support_end(),
    )?;
    Ok(Arc::new(pw))
}

/// `D(t)² = G'(F(t))²`, with errors surfaced as NaN so the adaptive
/// quadrature reports them instead of panicking.
fn d_squared(t: f64, n: u32) -> f64 {
    match hypgeom::ball_radius(t, n).and_then(|r| hypgeom::ball_volume_deriv(r, n)) {
        Ok(d) => d * d,
        Err(_) => f64::NAN,
    }
}

/// Jets of `F = G^{−1}` and `D = G'∘F` at `t > 0`, to the given order.
///
/// Built by the exact recurrences `F' = 1/D` and `D'(t) = (n−1)·coth(F(t))`
/// from the scalar values at `t`, so the only error is the inversion
/// tolerance of [`hypgeom::ball_radius`].
pub fn volume_jets(t: f64, n: u32, order: usize) -> Result<(Jet, Jet)> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("volume jets need t > 0, got {t}")));
    }
    let r0 = hypgeom::ball_radius(t, n)?;
    let mut fc = vec![r0];
    let mut dc = vec![hypgeom::ball_volume_deriv(r0, n)?];
    for j in 0..order {
        let recip = Jet::from_coeffs(dc.clone()).recip();
        fc.push(recip.coeff(j) / (j as f64 + 1.0));
        let comp = Jet::compose(&coth_jet(r0, j), &Jet::from_coeffs(fc.clone()));
        dc.push((n as f64 - 1.0) * comp.coeff(j) / (j as f64 + 1.0));
    }
    Ok((Jet::from_coeffs(fc), Jet::from_coeffs(dc)))
}

// ---------------------------------------------------------------------------
// Cumulative of the closed-form profile: J_0(t) = ∫_0^t f.
// ---------------------------------------------------------------------------

/// `J_0(t) = ∫_0^t f(s) ds` in closed form, with jets chaining through the
/// profile itself (`J_0' = f`).
struct FrCumulative {
    f: RadialFn,
    r0: f64,
    r_big: f64,
    /// `J_0(∞) = (5/2)√R − √R0` (the profile integrates to a constant).
    j_inf: f64,
}

impl FrCumulative {
    fn new(p: &SequenceParams, f: RadialFn) -> Self {
        FrCumulative {
            f,
            r0: p.r0,
            r_big: p.r_big,
            j_inf: 2.5 * p.r_big.sqrt() - p.r0.sqrt(),
        }
    }

    fn value_closed(&self, t: f64) -> f64 {
        let (r0, rb) = (self.r0, self.r_big);
        if t <= 0.0 {
            0.0
        } else if t < r0 {
            t / r0.sqrt()
        } else if t < rb {
            2.0 * t.sqrt() - r0.sqrt()
        } else if t < 2.0 * rb {
            2.0 * rb.sqrt() - r0.sqrt()
                + (2.0 * (t - rb) - (t * t - rb * rb) / (2.0 * rb)) / rb.sqrt()
        } else {
            self.j_inf
        }
    }
}

impl RadialJetFunction for FrCumulative {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = self.value_closed(t);
        if order >= 1 && t > 0.0 {
            let fj = self.f.taylor(t, order - 1);
            for k in 0..order {
                coeffs[k + 1] = fj.coeff(k) / (k as f64 + 1.0);
            }
        }
        Jet::from_coeffs(coeffs)
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.r0, self.r_big, 2.0 * self.r_big]
    }
}

// ---------------------------------------------------------------------------
// Geometric caching lattice shared by the iterated functions.
// ---------------------------------------------------------------------------

/// Node positions `t_j = t_micro · e^{j·LOG_STEP}` covering
/// `[t_micro, t_top]`.
fn log_lattice(t_micro: f64, t_top: f64) -> Vec<f64> {
    let steps = ((t_top / t_micro).ln() / LOG_STEP).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|j| t_micro * (LOG_STEP * j as f64).exp())
        .collect()
}

/// Cached node values and log-derivatives of one iterated function.
struct LatticeData {
    nodes: Vec<f64>,
    vals: Vec<f64>,
    /// `dy/d(ln t)` at the nodes (exact, from the defining integrand).
    slopes: Vec<f64>,
    /// Power-law coefficient of the continuation beyond the top node.
    tail_c: f64,
}

impl LatticeData {
    /// Cubic Hermite interpolation in `x = ln t`; `t` must lie within the
    /// node range.
    fn hermite(&self, t: f64) -> f64 {
        let x = (t / self.nodes[0]).ln() / LOG_STEP;
        let last = self.nodes.len() - 1;
        let j = (x.floor() as isize).clamp(0, last as isize - 1) as usize;
        let s = (x - j as f64).clamp(0.0, 1.0);
        let (y0, y1) = (self.vals[j], self.vals[j + 1]);
        let (m0, m1) = (self.slopes[j] * LOG_STEP, self.slopes[j + 1] * LOG_STEP);
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2)
    }

    fn bottom(&self) -> f64 {
        self.nodes[0]
    }
    fn top(&self) -> f64 {
        *self.nodes.last().unwrap()
    }
}

/// Panel points for `[a, b]` including any interior breakpoints of the
/// integrand, so panels never straddle a kink.
fn panel_points(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    for &bp in breaks {
        if bp > a && bp < b {
            pts.push(bp);
        }
    }
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Average of `w(s)·eval(s)` over eight log-spaced samples in the decade
/// below `top` — the power-law fit used for the continuation beyond the
/// lattice.
fn decade_fit(eval: &dyn Fn(f64) -> f64, w: &dyn Fn(f64) -> f64, top: f64) -> f64 {
    let samples = 8;
    let mut acc = 0.0;
    for i in 0..samples {
        let s = top * 0.1f64.powf(1.0 - (i as f64 + 0.5) / samples as f64);
        acc += w(s) * eval(s);
    }
    acc / samples as f64
}

// ---------------------------------------------------------------------------
// One inverse-Laplacian step: v(t) = ∫_t^∞ J(s)/D(s)² ds.
// ---------------------------------------------------------------------------

/// The tail integral `v(t) = ∫_t^∞ J(s)/D(s)² ds` of the previous level's
/// cumulative, cached on the lattice.
///
/// Node values are built top-down by adaptive panel quadrature, seeded at
/// the top node by the exact asymptotic law `J/D² ≈ c/s²` (the growth
/// ratio tends to 1, so `D(s) → (n−1)s`); node slopes are the closed
/// integrand. Below the bottom node the first-order Taylor extension is
/// used; beyond the top node, `c/t`.
struct TailIntegralFn {
    n: u32,
    /// The cumulative `J` of the previous level.
    lower: RadialFn,
    lat: LatticeData,
    breaks: Vec<f64>,
}

impl TailIntegralFn {
    fn integrand(&self, s: f64) -> f64 {
        self.lower.value(s) / d_squared(s, self.n)
    }

    fn build(n: u32, lower: RadialFn, grid: &[f64], quad: &QuadratureConfig) -> Result<Self> {
        let breaks = lower.breakpoints();
        let eval = |s: f64| lower.value(s) / d_squared(s, n);
        let m = grid.len();
        let top = grid[m - 1];
        // v(t) ~ tail_c/t beyond the lattice: fit s²·J(s)/D(s)² over the
        // top decade.
        let tail_c = decade_fit(&eval, &|s| s * s, top);
        let mut vals = vec![0.0; m];
        vals[m - 1] = tail_c / top;
        for j in (0..m - 1).rev() {
            let pts = panel_points(grid[j], grid[j + 1], &breaks);
            vals[j] = vals[j + 1] + integrate_segments(&eval, &pts, quad)?;
        }
        let slopes: Vec<f64> = grid.iter().map(|&t| -t * eval(t)).collect();
        Ok(TailIntegralFn {
            n,
            lower,
            lat: LatticeData {
                nodes: grid.to_vec(),
                vals,
                slopes,
                tail_c,
            },
            breaks,
        })
    }

    fn value_at(&self, t: f64) -> f64 {
        let bottom = self.lat.bottom();
        if t <= bottom {
            // First-order Taylor extension; v' is integrable at 0, and the
            // interval carries ~1e−12 of the mass of any integral.
            self.lat.vals[0] + (bottom - t.max(0.0)) * self.integrand(bottom)
        } else if t <= self.lat.top() {
            self.lat.hermite(t)
        } else {
            self.lat.tail_c / t
        }
    }
}

impl RadialJetFunction for TailIntegralFn {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        if t < 0.0 {
            return Jet::zero(order);
        }
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = self.value_at(t);
        if order >= 1 && t > 0.0 {
            // v' = −J/D²; chain through the closed jets of J and D.
            let lj = self.lower.taylor(t, order - 1);
            let (_, dj) =
                volume_jets(t, self.n, order - 1).expect("volume jets exist for every t > 0");
            let deriv = lj.div(&dj.mul(&dj)).scale(-1.0);
            for k in 0..order {
                coeffs[k + 1] = deriv.coeff(k) / (k as f64 + 1.0);
            }
        }
        Jet::from_coeffs(coeffs)
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

// ---------------------------------------------------------------------------
// Lattice-cached cumulative J_i(t) = ∫_0^t v_i for iterated levels.
// ---------------------------------------------------------------------------

/// `J(t) = ∫_0^t v(s) ds` for an iterated (lattice-backed) level, cached
/// on the same lattice; `J' = v` gives exact node slopes and jets.
struct LatticeCumulative {
    source: RadialFn,
    lat: LatticeData,
    breaks: Vec<f64>,
}

impl LatticeCumulative {
    fn build(source: RadialFn, grid: &[f64], quad: &QuadratureConfig) -> Result<Self> {
        let breaks = source.breakpoints();
        let eval = |s: f64| source.value(s);
        let m = grid.len();
        let mut vals = vec![0.0; m];
        // Head: ∫_0^{bottom} v ds — v is continuous at 0, the panel is 12
        // decades below the plateau.
        vals[0] = integrate_segments(&eval, &panel_points(0.0, grid[0], &breaks), quad)?;
        for j in 0..m - 1 {
            let pts = panel_points(grid[j], grid[j + 1], &breaks);
            vals[j + 1] = vals[j] + integrate_segments(&eval, &pts, quad)?;
        }
        // J grows like tail_c·ln t beyond the lattice (v ~ c/t there).
        let tail_c = decade_fit(&eval, &|s| s, grid[m - 1]);
        let slopes: Vec<f64> = grid.iter().map(|&t| t * eval(t)).collect();
        Ok(LatticeCumulative {
            source,
            lat: LatticeData {
                nodes: grid.to_vec(),
                vals,
                slopes,
                tail_c,
            },
            breaks,
        })
    }

    fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let bottom = self.lat.bottom();
        if t < bottom {
            // J is proportional to t below the lattice (v is constant
            // there to first order).
            self.lat.vals[0] * (t / bottom)
        } else if t <= self.lat.top() {
            self.lat.hermite(t)
        } else {
            *self.lat.vals.last().unwrap() + self.lat.tail_c * (t / self.lat.top()).ln()
        }
    }
}

impl RadialJetFunction for LatticeCumulative {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = self.value_at(t);
        if order >= 1 && t > 0.0 {
            let sj = self.source.taylor(t, order - 1);
            for k in 0..order {
                coeffs[k + 1] = sj.coeff(k) / (k as f64 + 1.0);
            }
        }
        Jet::from_coeffs(coeffs)
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }
}

// ---------------------------------------------------------------------------
// The maximal (running-average) functions g = J/t.
// ---------------------------------------------------------------------------

/// `g(t) = J(t)/t = (1/t)∫_0^t v`, the running average of the previous
/// level; continuous at 0 with `g(0) = v(0)`.
struct MaximalFn {
    cum: RadialFn,
    limit0: f64,
}

impl RadialJetFunction for MaximalFn {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        if t <= 0.0 {
            return Jet::constant(self.limit0, order);
        }
        self.cum.taylor(t, order).div(&Jet::variable(t, order))
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.cum.breakpoints()
    }
}

/// One level of the inverse-Laplacian iteration: the profile `v_i` and,
/// for `i ≥ 1`, the running average `g_i = J_{i−1}/t`.
pub struct VIterationLevel {
    /// `v_i` in the volume variable (`v_0` is the profile itself).
    pub v: RadialFn,
    /// `g_i(t) = (1/t) ∫_0^t v_{i−1}`; `None` at level 0.
    pub g: Option<RadialFn>,
}

/// Run the inverse-Laplacian iteration: returns levels `0..=iter`, where
/// level 0 is the profile and each later level satisfies
/// `−Δ_r [v_{i+1}∘G] = v_i∘G`.
///
/// Every `v_i` is positive and nonincreasing; the running averages `g_i`
/// likewise. The returned functions are lattice-cached — building is
/// `O(nodes)` with exact sequential quadrature, evaluation is `O(1)`.
pub fn v_iteration(
    p: &SequenceParams,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<Vec<VIterationLevel>> {
    hypgeom::sphere_measure(n)?; // validates the dimension
    let f = profile_f_r(p)?;
    let mut levels = vec![VIterationLevel {
        v: f.clone(),
        g: None,
    }];
    if p.iter == 0 {
        return Ok(levels);
    }
    let grid = log_lattice(p.t_micro(), p.t_top());
    let mut cum: RadialFn = Arc::new(FrCumulative::new(p, f));
    for i in 1..=p.iter {
        let prev_at_zero = levels[(i - 1) as usize].v.value(0.0);
        let v: RadialFn = Arc::new(TailIntegralFn::build(n, cum.clone(), &grid, cfg)?);
        let g: RadialFn = Arc::new(MaximalFn {
            cum: cum.clone(),
            limit0: prev_at_zero,
        });
        levels.push(VIterationLevel {
            v: v.clone(),
            g: Some(g),
        });
        if i < p.iter {
            cum = Arc::new(LatticeCumulative::build(v, &grid, cfg)?);
        }
    }
    Ok(levels)
}

// ---------------------------------------------------------------------------
// Lift from the volume variable back to H^n.
// ---------------------------------------------------------------------------

/// `u(r) = p(G(r))`: a profile of the enclosed volume as a radial function
/// on `H^n`. Jets compose the profile's jets with those of `G`.
struct HnLift {
    profile: RadialFn,
    n: u32,
    surface: f64,
    r_lo: f64,
    r_hi: f64,
    mapped: Vec<f64>,
}

impl RadialJetFunction for HnLift {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        if r < 0.0 || r > self.r_hi {
            return Jet::zero(order);
        }
        if r == 0.0 {
            // Radial symmetry: the first derivative vanishes at the
            // origin; quadrature and grids never differentiate exactly
            // here.
            return Jet::constant(self.profile.value(0.0), order);
        }
        let g0 = match hypgeom::ball_volume(r, self.n) {
            Ok(v) if v.is_finite() => v,
            // So far out that the volume overflows: every profile we lift
            // has decayed to zero there.
            _ => return Jet::zero(order),
        };
        let mut gc = vec![0.0; order + 1];
        gc[0] = g0;
        if order >= 1 {
            // G' = |S^{n−1}| sinh^{n−1}; integrate its jet termwise.
            let s = sinh_jet(r, order - 1).powi(self.n - 1).scale(self.surface);
            for k in 0..order {
                gc[k + 1] = s.coeff(k) / (k as f64 + 1.0);
            }
        }
        let outer = self.profile.taylor(g0, order);
        Jet::compose(&outer, &Jet::from_coeffs(gc))
    }
    fn support(&self) -> (f64, f64) {
        (self.r_lo, self.r_hi)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.mapped.clone()
    }
    fn volume_profile(&self) -> Option<(RadialFn, u32)> {
        Some((self.profile.clone(), self.n))
    }
}

/// Lift a volume-variable profile to the radial function `p∘G` on `H^n`.
/// Breakpoints and the support end are mapped through `F = G^{−1}`.
pub fn lift_to_hn(profile: &RadialFn, n: u32) -> Result<RadialFn> {
    let surface = hypgeom::sphere_measure(n)?;
    let (a, b) = profile.support();
    if a < 0.0 {
        return Err(Error::Domain("volume profiles must live on t >= 0".into()));
    }
    let r_lo = if a > 0.0 {
        hypgeom::ball_radius(a, n)?
    } else {
        0.0
    };
    let r_hi = if b.is_finite() {
        hypgeom::ball_radius(b, n)?
    } else {
        f64::INFINITY
    };
    let mapped = profile
        .breakpoints()
        .into_iter()
        .map(|t| hypgeom::ball_radius(t, n))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Arc::new(HnLift {
        profile: profile.clone(),
        n,
        surface,
        r_lo,
        r_hi,
        mapped,
    }))
}

// ---------------------------------------------------------------------------
// Rayleigh quotients and sweeps.
// ---------------------------------------------------------------------------

/// Restriction of a function to `r ≤ hi` (used once the tail of the
/// integrand is known to vanish identically).
struct TruncatedFn {
    inner: RadialFn,
    hi: f64,
}

impl RadialJetFunction for TruncatedFn {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        if r > self.hi {
            Jet::zero(order)
        } else {
            self.inner.taylor(r, order)
        }
    }
    fn support(&self) -> (f64, f64) {
        let (a, b) = self.inner.support();
        (a, b.min(self.hi))
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner
            .breakpoints()
            .into_iter()
            .filter(|&bp| bp < self.hi)
            .collect()
    }
}

fn squared(f: &RadialFn) -> RadialFn {
    Arc::new(ProductFn {
        a: f.clone(),
        b: f.clone(),
    })
}

/// Rayleigh quotient `∫|∇_r^k u|² dv / ∫|∇_r^l u|² dv` on `H^n`.
///
/// Returns `(numerator, denominator, quotient)`. For admissible `u` the
/// quotient is bounded below by the sharp constant
/// `((n−1)/2)^{2(k−l)}` up to quadrature error (`~1e−8` relative), and it
/// is exactly invariant under scaling `u ↦ c·u`.
///
/// Functions of unbounded support are admitted when `l = 0` and they carry
/// a volume profile (then the denominator is evaluated in volume
/// coordinates, where the substitution is exact); their numerator is
/// truncated at the last breakpoint, beyond which `∇_r^k u` must vanish
/// identically — this is checked by sampling and is an error otherwise.
pub fn rayleigh_quotient(
    u: &RadialFn,
    n: u32,
    k: u32,
    l: u32,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64, f64)> {
    if l >= k {
        return Err(Error::Hypothesis(format!(
            "rayleigh quotient needs k > l, got k = {k}, l = {l}"
        )));
    }
    let num_fn = nabla_r_k(u, k, n)?;
    let den_fn = nabla_r_k(u, l, n)?;
    let (_, b) = u.support();
    let (num, den);
    if b.is_finite() {
        num = integrate_hn_radial(squared(&num_fn).as_ref(), n, 0, cfg)?;
        den = integrate_hn_radial(squared(&den_fn).as_ref(), n, 0, cfg)?;
    } else {
        if l != 0 {
            return Err(Error::Domain(
                "unbounded support needs l = 0 (the denominator is then a volume-profile integral)"
                    .into(),
            ));
        }
        den = integrate_hn_radial(squared(u).as_ref(), n, 0, cfg)?;
        // The k-th derivative must vanish identically beyond the last
        // breakpoint for the truncated numerator to be exact.
        let cut = u.breakpoints().last().copied().ok_or_else(|| {
            Error::Domain(
                "unbounded support without breakpoints: cannot truncate the numerator".into(),
            )
        })?;
        let mut scale: f64 = 0.0;
        for i in 1..=8 {
            let r = cut * i as f64 / 9.0;
            scale = scale.max(num_fn.value(r).abs());
        }
        for factor in [1.02, 1.3, 2.0] {
            let val = num_fn.value(cut * factor).abs();
            if val > 1e-6 * scale.max(1e-300) {
                return Err(Error::Domain(format!(
                    "order-{k} derivative does not vanish beyond the support cut \
                     (|value| = {val:.3e} at r = {:.6} vs scale {scale:.3e})",
                    cut * factor
                )));
            }
        }
        let truncated: RadialFn = Arc::new(TruncatedFn {
            inner: num_fn,
            hi: cut,
        });
        num = integrate_hn_radial(squared(&truncated).as_ref(), n, 0, cfg)?;
    }
    Ok((num, den, num / den))
}

fn sharp_f64(n: u32, k: u32, l: u32) -> Result<f64> {
    coefficients::sharp_constant(n, k, l)?
        .to_f64()
        .ok_or_else(|| Error::Domain("sharp constant overflows f64".into()))
}

/// Certified upper bound for the quotient of the explicit sequence at
/// `ln(R/R0) = ln_ratio`, valid when `R0 ≥ threshold_r0(ε, n)`.
///
/// * `k = 1`: the finite-`R` bound
///   `sharp · (1+ε)² · (ln_ratio + 28/3)/(ln_ratio + 4/3)` — a true upper
///   bound for every admissible `R`.
/// * even `k`: the asymptotic certification target
///   `sharp · (1+ε)^{2k}`, which the quotients approach from above as
///   `R → ∞` (not a per-`R` bound).
pub fn certified_upper_bound(n: u32, k: u32, eps: f64, ln_ratio: f64) -> Result<f64> {
    if !(eps > 0.0 && ln_ratio > 0.0) {
        return Err(Error::Domain(format!(
            "certified bound needs eps > 0 and ln_ratio > 0, got {eps}, {ln_ratio}"
        )));
    }
    let sharp = sharp_f64(n, k, 0)?;
    match k {
        0 => Err(Error::Hypothesis("k = 0 has no quotient".into())),
        1 => Ok(sharp * (1.0 + eps).powi(2) * (ln_ratio + 28.0 / 3.0) / (ln_ratio + 4.0 / 3.0)),
        _ if k % 2 == 0 => Ok(sharp * (1.0 + eps).powi(2 * k as i32)),
        _ => Err(Error::Hypothesis(format!(
            "no explicit-sequence bound for odd k = {k} > 1 (those orders are \
             reached by interpolation between neighbouring even orders)"
        ))),
    }
}

/// One row of a quotient sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// `ln(R/R0)` for this row.
    pub ln_ratio: f64,
    /// Outer scale `R` (volume units).
    pub r_big: f64,
    /// `∫ |∇_r^k u|² dv`.
    pub numerator: f64,
    /// `∫ |∇_r^l u|² dv`.
    pub denominator: f64,
    /// Their ratio.
    pub quotient: f64,
    /// Certified upper bound (see [`certified_upper_bound`]).
    pub certified_bound: f64,
    /// For iterated levels: max relative residual of
    /// `Δ_r^m u = (−1)^m f∘G` on a 64-point grid; `None` for `k = 1`.
    pub identity_residual: Option<f64>,
}

/// A sweep of Rayleigh quotients over growing `R` at fixed `(n, k, l)`.
#[derive(Debug, Clone)]
pub struct QuotientSweep {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub eps: f64,
    /// Certified plateau `R0 = threshold_r0(eps, n)` shared by all rows.
    pub r0: f64,
    /// The sharp constant `((n−1)/2)^{2(k−l)}` the quotients approach.
    pub sharp: f64,
    pub rows: Vec<SweepRow>,
}

impl QuotientSweep {
    /// Whether the quotients are nonincreasing along the rows (expected
    /// when the ratios are increasing), up to an absolute slack `tol`.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].quotient <= w[0].quotient + tol)
    }

    /// Whether every quotient stays above `sharp · (1 − slack)` — the
    /// defining lower bound of the inequality.
    pub fn respects_sharp_floor(&self, slack: f64) -> bool {
        self.rows
            .iter()
            .all(|row| row.quotient >= self.sharp * (1.0 - slack))
    }
}

/// Sweep the Rayleigh quotient of the explicit almost-extremising sequence
/// over the given values of `ln(R/R0)`, with `R0 = threshold_r0(eps, n)`.
///
/// Supported quotients: `l = 0` with `k = 1` (the profile itself) or even
/// `k` (the `k/2`-fold inverse-Laplacian iterate, whose identity residual
/// is verified per row). Odd `k ≥ 3` has no explicit sequence — those
/// sharpness statements follow by interpolation — and is rejected.
/// `iter` can pin the iteration depth; it must equal `k/2`.
pub fn sharpness_sweep(
    n: u32,
    k: u32,
    l: u32,
    eps: f64,
    ln_ratios: &[f64],
    iter: Option<u32>,
    cfg: &QuadratureConfig,
) -> Result<QuotientSweep> {
    if l != 0 {
        return Err(Error::Hypothesis(format!(
            "the explicit sequence certifies quotients against the plain L² norm \
             (l = 0 only), got l = {l}"
        )));
    }
    if k == 0 {
        return Err(Error::Hypothesis("k = 0 has no quotient".into()));
    }
    if k % 2 == 1 && k > 1 {
        return Err(Error::Hypothesis(format!(
            "odd derivative orders above one (k = {k}) have no explicit \
             almost-extremising sequence; their sharpness follows by \
             interpolation between even orders"
        )));
    }
    if ln_ratios.is_empty() {
        return Err(Error::Domain("sweep needs at least one ratio".into()));
    }
    let required_iter = if k == 1 { 0 } else { k / 2 };
    if let Some(i) = iter {
        if i != required_iter {
            return Err(Error::Domain(format!(
                "k = {k} requires iter = {required_iter}, got {i}"
            )));
        }
    }
    let r0 = hypgeom::threshold_r0(eps, n)?;
    let sharp = sharp_f64(n, k, 0)?;

    let row = |&ln_ratio: &f64| -> Result<SweepRow> {
        let p = SequenceParams::from_ratio(n, eps, ln_ratio, required_iter)?;
        let (u, residual): (RadialFn, Option<f64>) = if k == 1 {
            (lift_to_hn(&profile_f_r(&p)?, n)?, None)
        } else {
            let levels = v_iteration(&p, n, cfg)?;
            let res = identity_residual_on_grid(&p, n, &levels, 64, cfg)?;
            (lift_to_hn(&levels[required_iter as usize].v, n)?, Some(res))
        };
        let (numerator, denominator, quotient) = rayleigh_quotient(&u, n, k, 0, cfg)?;
        Ok(SweepRow {
            ln_ratio,
            r_big: p.r_big,
            numerator,
            denominator,
            quotient,
            certified_bound: certified_upper_bound(n, k, eps, ln_ratio)?,
            identity_residual: residual,
        })
    };

    #[cfg(feature = "parallel")]
    let rows = ln_ratios.par_iter().map(row).collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let rows = ln_ratios.iter().map(row).collect::<Result<Vec<_>>>()?;

    Ok(QuotientSweep {
        n,
        k,
        l,
        eps,
        r0,
        sharp,
        rows,
    })
}

fn identity_residual_on_grid(
    p: &SequenceParams,
    n: u32,
    levels: &[VIterationLevel],
    samples: usize,
    _cfg: &QuadratureConfig,
) -> Result<f64> {
    let m = p.iter;
    if m == 0 || levels.len() <= m as usize {
        return Err(Error::Domain(
            "identity residual needs at least one iteration level".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::Domain("residual grid needs >= 2 samples".into()));
    }
    let u = lift_to_hn(&levels[m as usize].v, n)?;
    let f0 = lift_to_hn(&levels[0].v, n)?;
    let op = nabla_r_k(&u, 2 * m, n)?;
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    let sup = 1.0 / p.r0.sqrt();
    let r_end = hypgeom::ball_radius(p.support_end(), n)?;
    let (lo, hi) = (r_end * 1e-3, r_end * 0.999);
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let r = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let residual = (op.value(r) - sign * f0.value(r)).abs() / sup;
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// Max relative residual of the defining identity
/// `Δ_r^m [v_m∘G] = (−1)^m f∘G` (with `m = iter`) over a uniform radial
/// grid spanning the lifted support, normalized by `sup f = R0^{−1/2}`.
pub fn construction_identity_residual(
    p: &SequenceParams,
    n: u32,
    samples: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let levels = v_iteration(p, n, cfg)?;
    identity_residual_on_grid(p, n, &levels, samples, cfg)
}

/// Integrated lower-bound check on the first iterate: returns
/// `(‖v_1‖₂, target, gap)` where
/// `target = (2/(n−1))² (1+ε)^{−2} ‖f‖₂` and `gap = max(0, target − ‖v_1‖₂)`.
///
/// The gap stays bounded as `R → ∞` (it plays the role of the additive
/// constant in the norm comparison), which is what makes the iterated
/// quotients approach `sharp · (1+ε)^{±2}` targets.
pub fn sandwich_gap(p: &SequenceParams, n: u32, cfg: &QuadratureConfig) -> Result<(f64, f64, f64)> {
    if p.iter == 0 {
        return Err(Error::Domain("the sandwich check needs iter >= 1".into()));
    }
    let levels = v_iteration(p, n, cfg)?;
    let v1 = &levels[1].v;
    let v1_sq = crate::measure_quadrature::integrate_halfline(squared(v1).as_ref(), cfg)?;
    let v1_norm = v1_sq.sqrt();
    let scale = (2.0 / (n as f64 - 1.0)).powi(2) / (1.0 + p.eps).powi(2);
    let target = scale * profile_l2_squared(p).sqrt();
    Ok((v1_norm, target, (target - v1_norm).max(0.0)))
}
