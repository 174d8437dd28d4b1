//! Scalar special functions of the radial geometry of `H^N`.
//!
//! Everything here is a plain `f64 → f64` map:
//!
//! * [`sphere_measure`] — surface measure of the unit sphere `S^{N−1}`.
//! * [`ball_volume`] (`G`) — volume of the geodesic ball of radius `r`,
//!   `G(r) = |S^{N−1}| ∫_0^r sinh^{N−1} s ds`, with derivative
//!   [`ball_volume_deriv`] (`G' = |S^{N−1}| sinh^{N−1} r`).
//! * [`ball_radius`] (`F = G^{−1}`) — geodesic radius enclosing a given
//!   volume, by safeguarded Newton iteration.
//! * [`g_weight`] — the bounded weight `(r·coth r − 1)/r² ∈ (0, 1/3]`.
//! * [`coth_minus_inv`] — `coth r − 1/r`, computed without cancellation.
//! * [`sinh_growth_ratio`] — `G'(F(t)) / ((N−1)·t)`, the volume-to-surface
//!   growth ratio; it is `> 1` everywhere and tends to `1` as `t → ∞`.
//! * [`growth_ratio_at_radius`] — the same ratio parameterized by geodesic
//!   radius instead of enclosed volume, stable for huge radii.
//! * [`threshold_r0`] — smallest volume beyond which the growth ratio stays
//!   within `1 + eps`.
//!
//! `G` uses two branches: for `r < 2` a Taylor series of `sinh^{N−1}` with
//! strictly positive coefficients (no cancellation), for `r ≥ 2` the exact
//! finite exponential expansion of `sinh^{N−1}` integrated termwise (the
//! leading exponential dominates there, so the alternating signs are
//! harmless).

use crate::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Minimum supported dimension. The inequalities all assume `N ≥ 3`.
pub const MIN_DIMENSION: u32 = 3;

fn check_dimension(n: u32) -> Result<()> {
    if n < MIN_DIMENSION {
        return Err(Error::Domain(format!(
            "dimension n = {n} is not supported (need n >= {MIN_DIMENSION})"
        )));
    }
    Ok(())
}

/// Surface measure of the unit sphere `S^{n−1}` in `R^n`:
/// `|S^{n−1}| = 2 π^{n/2} / Γ(n/2)`.
pub fn sphere_measure(n: u32) -> Result<f64> {
    check_dimension(n)?;
    Ok(2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n))
}

/// `Γ(m/2)` for integer `m ≥ 1`, by the recurrence from `Γ(1/2) = √π`,
/// `Γ(1) = 1`. Exact to rounding for the dimensions in play.
fn gamma_half(m: u32) -> f64 {
    let mut x = m as f64 / 2.0;
    let mut acc = 1.0;
    while x > 1.0 {
        x -= 1.0;
        acc *= x;
    }
    // x is now 1/2 (m odd) or 1 (m even)
    if (x - 0.5).abs() < 1e-12 {
        acc * PI.sqrt()
    } else {
        acc
    }
}

/// Taylor coefficients of `sinh^m(s)` in powers of `s` (index = degree),
/// cached per power `m`. All coefficients are nonnegative, so evaluation
/// for `s < 2` is cancellation-free. The degree is chosen so the neglected
/// tail at `s = 2` is below 1e-18 relative.
fn sinh_power_series(m: u32) -> std::sync::Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, std::sync::Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }

    // Degree bound: coefficients of sinh^m are dominated by those of
    // (s·e^{s²/6})^m; at s = 2 the dominating series needs roughly
    // 2m/3 + 45 extra even powers for a 1e-18 relative tail.
    let extra = (2 * m) / 3 + 48;
    let deg = (m + 2 * extra) as usize;

    // sinh(s) = Σ s^{2i+1}/(2i+1)!
    let mut sinh = vec![0.0; deg + 1];
    let mut c = 1.0;
    let mut j = 1usize;
    while j <= deg {
        sinh[j] = c;
        c /= ((j + 1) * (j + 2)) as f64;
        j += 2;
    }

    // Binary exponentiation of the truncated series.
    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; deg + 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (k, &bk) in b.iter().take(deg + 1 - i).enumerate() {
                out[i + k] += ai * bk;
            }
        }
        out
    };
    let mut result = vec![0.0; deg + 1];
    result[0] = 1.0;
    let mut base = sinh;
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = mul(&base, &base);
    }

    let arc = std::sync::Arc::new(result);
    cache.lock().unwrap().insert(m, arc.clone());
    arc
}

/// `∫_0^r sinh^{m}(s) ds` for integer `m ≥ 2`, `r ≥ 0`.
fn sinh_power_integral(r: f64, m: u32) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if r < 2.0 {
        // Termwise integral of the positive series.
        let series = sinh_power_series(m);
        let mut acc = 0.0;
        // Horner from the top in powers of r, folding in the 1/(deg+1)
        // antiderivative factors; all terms positive.
        for (deg, &c) in series.iter().enumerate().rev() {
            acc = acc * r + c / (deg as f64 + 1.0);
        }
        acc * r
    } else {
        // sinh^m s = 2^{−m} Σ_{j=0}^{m} C(m,j) (−1)^j e^{(m−2j)s};
        // integrate termwise from 0 to r.
        let mf = m as i64;
        let mut acc = 0.0;
        let mut binom = 1.0; // C(m, j)
        for j in 0..=mf {
            if j > 0 {
                binom *= (mf - j + 1) as f64 / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let e = (mf - 2 * j) as f64;
            let term = if e == 0.0 {
                r
            } else {
                ((e * r).exp() - 1.0) / e
            };
            acc += sign * binom * term;
        }
        acc * 0.5f64.powi(m as i32)
    }
}

/// Volume of the geodesic ball of radius `r` in `H^n`:
/// `G(r) = |S^{n−1}| ∫_0^r sinh^{n−1} s ds`. Errors on `r < 0`.
pub fn ball_volume(r: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("ball_volume needs r >= 0, got {r}")));
    }
    Ok(sphere_measure(n)? * sinh_power_integral(r, n - 1))
}

/// Surface area of the geodesic sphere: `G'(r) = |S^{n−1}| sinh^{n−1} r`.
pub fn ball_volume_deriv(r: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "ball_volume_deriv needs r >= 0, got {r}"
        )));
    }
    Ok(sphere_measure(n)? * r.sinh().powi(n as i32 - 1))
}

/// Relative tolerance for the inverse volume solve. `G` is convex through
/// the origin, so `G/G' <= r` and the Newton-step noise floor stays below
/// `eps * r`; iterating to a few ulps is therefore safe and keeps
/// finite differences of `ball_radius` clean.
const INVERSE_REL_TOL: f64 = 4.0 * f64::EPSILON;
const INVERSE_MAX_ITER: usize = 200;

/// Geodesic radius of the ball of volume `t`: `F = G^{−1}`.
///
/// Safeguarded Newton iteration: full Newton steps where they stay inside
/// the current bracket, bisection otherwise. Converges to a few ulps.
pub fn ball_radius(t: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("ball_radius needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let s = sphere_measure(n)?;
    let nf = n as f64;

    // Initial guess from the two asymptotic regimes.
    let small = (t * nf / s).powf(1.0 / nf); // G ≈ |S| r^n / n
    let guess = if small < 1.0 {
        small
    } else {
        // G ≈ |S| e^{(n−1)r} / ((n−1) 2^{n−1})
        ((t * (nf - 1.0) * 2f64.powi(n as i32 - 1) / s).ln() / (nf - 1.0)).max(small.min(2.0))
    };

    // Bracket the root.
    let mut lo = 0.0;
    let mut hi = guess.max(1e-8);
    let mut g_hi = ball_volume(hi, n)?;
    let mut grow = 0;
    while g_hi < t {
        lo = hi;
        hi *= 2.0;
        g_hi = ball_volume(hi, n)?;
        grow += 1;
        if grow > 200 {
            return Err(Error::NonConvergence(format!(
                "ball_radius: failed to bracket volume t = {t} in n = {n}"
            )));
        }
    }

    let mut x = hi.min(guess.max(lo));
    if x <= lo || x >= hi {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..INVERSE_MAX_ITER {
        let g = ball_volume(x, n)? - t;
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let dg = ball_volume_deriv(x, n)?;
        let mut step_ok = false;
        let mut x_new = x;
        if dg > 0.0 {
            x_new = x - g / dg;
            step_ok = x_new > lo && x_new < hi;
        }
        if !step_ok {
            x_new = 0.5 * (lo + hi);
        }
        let dx = (x_new - x).abs();
        x = x_new;
        if dx <= INVERSE_REL_TOL * x.max(1e-300) {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence(format!(
        "ball_radius: Newton/bisection did not converge for t = {t}, n = {n}"
    )))
}

/// Switch point below which the series expansions of `g_weight` and
/// `coth_minus_inv` are used.
const SMALL_R: f64 = 1e-2;

/// The bounded Hardy weight `g(r) = (r·coth r − 1)/r²`.
///
/// Strictly decreasing from `g(0+) = 1/3` to `0` at infinity; the series
/// branch below `r = 1e-2` avoids the `0/0` cancellation.
pub fn g_weight(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("g_weight needs r > 0, got {r}")));
    }
    if r < SMALL_R {
        let r2 = r * r;
        // 1/3 − r²/45 + 2r⁴/945 − r⁶/4725
        Ok(1.0 / 3.0 + r2 * (-1.0 / 45.0 + r2 * (2.0 / 945.0 - r2 / 4725.0)))
    } else {
        Ok((r / r.tanh() - 1.0) / (r * r))
    }
}

/// `coth r − 1/r`, positive and increasing on `(0, ∞)`, → 1 at infinity.
///
/// Equal to `r · g_weight(r)`; bounded below by `r / (3 sinh 1)` on `(0, 1]`.
pub fn coth_minus_inv(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "coth_minus_inv needs r > 0, got {r}"
        )));
    }
    if r < SMALL_R {
        let r2 = r * r;
        Ok(r * (1.0 / 3.0 + r2 * (-1.0 / 45.0 + r2 * (2.0 / 945.0))))
    } else {
        Ok(1.0 / r.tanh() - 1.0 / r)
    }
}

/// `coth r` for `r > 0`, stable near zero (it diverges like `1/r`).
pub fn coth(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("coth needs r > 0, got {r}")));
    }
    if r < SMALL_R {
        Ok(1.0 / r + coth_minus_inv(r)?)
    } else {
        Ok(1.0 / r.tanh())
    }
}

/// Volume-to-surface growth ratio at enclosed volume `t > 0`:
/// `ratio(t) = G'(F(t)) / ((n−1) t)`.
///
/// Strictly greater than 1, strictly decreasing, → 1 as `t → ∞`.
pub fn sinh_growth_ratio(t: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "sinh_growth_ratio needs t > 0, got {t}"
        )));
    }
    let rho = ball_radius(t, n)?;
    Ok(ball_volume_deriv(rho, n)? / ((n as f64 - 1.0) * t))
}

/// Volume-to-surface growth ratio parameterized by geodesic radius `r > 0`:
/// `ratio(r) = G'(r) / ((n−1) G(r))`.
///
/// Same quantity as [`sinh_growth_ratio`] at `t = G(r)`, but safe for huge
/// radii where `G(r)` itself overflows: for `r ≥ 2` the numerator and
/// denominator are both rescaled by `e^{−(n−1)r}`, giving
/// `(1 − e^{−2r})^m / (m·S)` with `m = n−1` and `S` the rescaled finite
/// exponential expansion of `∫_0^r sinh^m`. At `r = 1e4` this evaluates to
/// exactly 1.0 in floating point, as the true value does to 60+ digits.
pub fn growth_ratio_at_radius(r: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "growth_ratio_at_radius needs r > 0, got {r}"
        )));
    }
    if r < 2.0 {
        // Far from overflow: use the direct volume forms.
        return Ok(ball_volume_deriv(r, n)? / ((n as f64 - 1.0) * ball_volume(r, n)?));
    }
    let m = n - 1;
    let mf = m as f64;
    let em = (-mf * r).exp();
    // S = Σ_{j: m−2j≠0} (−1)^j C(m,j) (e^{−2jr} − e^{−mr})/(m−2j)
    //     + [m even] (−1)^{m/2} C(m, m/2) · r · e^{−mr}
    // For r ≥ 2 the j = 0 term dominates up to a bounded alternating
    // correction (adjacent term ratio ≤ (n−1)e^{−4} < 1.2), so at most a
    // couple of bits cancel.
    let mut s = 0.0;
    let mut binom = 1.0; // C(m, j), updated multiplicatively
    for j in 0..=m {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let power = mf - 2.0 * j as f64;
        if power == 0.0 {
            s += sign * binom * r * em;
        } else {
            s += sign * binom * ((-2.0 * j as f64 * r).exp() - em) / power;
        }
        binom *= (m - j) as f64 / (j + 1) as f64;
    }
    let numer = (1.0 - (-2.0 * r).exp()).powi(m as i32);
    Ok(numer / (mf * s))
}

/// Default lower end of the threshold scan grid (volume units).
pub const THRESHOLD_SCAN_MIN: f64 = 1e-3;
/// Default upper horizon of the threshold scan grid (volume units).
pub const THRESHOLD_SCAN_HORIZON: f64 = 1e6;
/// Geometric step of the threshold scan grid.
pub const THRESHOLD_SCAN_STEP: f64 = 1.05;

/// Smallest grid volume `t0` such that `sinh_growth_ratio(t) ≤ 1 + eps`
/// for every scanned `t ≥ t0` up to the horizon.
///
/// Scans the geometric grid `t_j = THRESHOLD_SCAN_MIN · 1.05^j` up to
/// `THRESHOLD_SCAN_HORIZON`. Errors if even the horizon fails the bound.
/// Monotone in `eps`: smaller `eps` gives larger thresholds.
pub fn threshold_r0(eps: f64, n: u32) -> Result<f64> {
    check_dimension(n)?;
    if !(eps > 0.0) {
        return Err(Error::Domain(format!(
            "threshold_r0 needs eps > 0, got {eps}"
        )));
    }
    let bound = 1.0 + eps;
    let mut t = THRESHOLD_SCAN_MIN;
    let mut grid = Vec::new();
    while t <= THRESHOLD_SCAN_HORIZON {
        grid.push(t);
        t *= THRESHOLD_SCAN_STEP;
    }
    // Highest failing grid point decides; everything after must pass.
    let mut last_fail: Option<usize> = None;
    for (j, &tj) in grid.iter().enumerate() {
        if sinh_growth_ratio(tj, n)? > bound {
            last_fail = Some(j);
        }
    }
    match last_fail {
        None => Ok(grid[0]),
        Some(j) if j + 1 < grid.len() => Ok(grid[j + 1]),
        Some(_) => Err(Error::NonConvergence(format!(
            "threshold_r0: growth ratio still above 1 + {eps} at the scan \
             horizon {THRESHOLD_SCAN_HORIZON} (n = {n})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn sphere_measures_match_closed_forms() {
        // |S^2| = 4π, |S^3| = 2π², |S^4| = 8π²/3
        assert!(close(sphere_measure(3).unwrap(), 4.0 * PI, 1e-15));
        assert!(close(sphere_measure(4).unwrap(), 2.0 * PI * PI, 1e-15));
        assert!(close(
            sphere_measure(5).unwrap(),
            8.0 * PI * PI / 3.0,
            1e-15
        ));
    }

    #[test]
    fn ball_volume_closed_form_n3() {
        // n = 3: G(r) = 4π ∫ sinh² = π (sinh 2r − 2r)
        for &r in &[0.1f64, 0.5, 1.0, 2.0, 3.5, 10.0] {
            let expect = PI * ((2.0 * r).sinh() - 2.0 * r);
            assert!(
                close(ball_volume(r, 3).unwrap(), expect, 1e-13),
                "r = {r}: {} vs {expect}",
                ball_volume(r, 3).unwrap()
            );
        }
    }

    #[test]
    fn ball_volume_closed_form_n5() {
        // n = 5: ∫ sinh⁴ = (sinh(4r) − 8 sinh(2r) + 12 r)/32... check by
        // termwise exponential formula instead: sinh⁴ = (cosh4r − 4cosh2r + 3)/8
        // ⇒ ∫ = (sinh4r/4 − 2 sinh2r + 3r)/8.
        for &r in &[0.3f64, 1.0, 1.9, 2.0, 2.1, 6.0] {
            let expect = sphere_measure(5).unwrap()
                * ((4.0 * r).sinh() / 4.0 - 2.0 * (2.0 * r).sinh() + 3.0 * r)
                / 8.0;
            assert!(close(ball_volume(r, 5).unwrap(), expect, 1e-12), "r = {r}");
        }
    }

    #[test]
    fn series_and_closed_form_branches_agree() {
        // Straddle the r = 2 branch switch for several dimensions.
        for n in [3u32, 4, 6, 9, 12, 20] {
            for &r in &[1.99, 2.0, 2.01] {
                let series = sphere_measure(n).unwrap() * {
                    let s = sinh_power_series(n - 1);
                    let mut acc = 0.0;
                    for (deg, &c) in s.iter().enumerate().rev() {
                        acc = acc * r + c / (deg as f64 + 1.0);
                    }
                    acc * r
                };
                let v = ball_volume(r, n).unwrap();
                assert!(close(v, series, 1e-12), "n = {n}, r = {r}: {v} vs {series}");
            }
        }
    }

    #[test]
    fn volume_derivative_is_consistent() {
        // (G(r+h) − G(r−h))/2h vs G'(r)
        let h = 1e-5;
        for n in [3u32, 5, 8] {
            for &r in &[0.4, 1.5, 2.5] {
                let fd =
                    (ball_volume(r + h, n).unwrap() - ball_volume(r - h, n).unwrap()) / (2.0 * h);
                assert!(
                    close(fd, ball_volume_deriv(r, n).unwrap(), 1e-6),
                    "n = {n}, r = {r}"
                );
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for n in 3u32..=12 {
            for &r in &[1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
                let t = ball_volume(r, n).unwrap();
                let back = ball_radius(t, n).unwrap();
                assert!(
                    (back - r).abs() <= 1e-9 * r.max(1.0),
                    "n = {n}, r = {r}, back = {back}"
                );
            }
        }
    }

    #[test]
    fn g_weight_range_and_series_branch() {
        // g ∈ (0, 1/3], decreasing; series and direct agree at the switch.
        let mut prev = 1.0 / 3.0 + 1e-15;
        for i in 0..60 {
            let r = 1e-3 * 1.3f64.powi(i);
            let g = g_weight(r).unwrap();
            assert!(g > 0.0 && g <= 1.0 / 3.0 + 1e-15, "r = {r}, g = {g}");
            assert!(g <= prev + 1e-12, "not decreasing at r = {r}");
            prev = g;
        }
        let r = SMALL_R * 1.0000001;
        let direct = (r / r.tanh() - 1.0) / (r * r);
        let series = g_weight(r * 0.9999999).unwrap();
        assert!(close(direct, series, 1e-10));
    }

    #[test]
    fn coth_minus_inv_lower_bound() {
        // coth r − 1/r ≥ r/(3 sinh 1) on (0, 1]
        let bound = 1.0 / (3.0 * 1f64.sinh());
        for i in 0..50 {
            let r = 1e-6 * 2f64.powi(i).min(1e6);
            if r > 1.0 {
                break;
            }
            let v = coth_minus_inv(r).unwrap();
            assert!(v >= bound * r - 1e-15, "r = {r}: {v} < {}", bound * r);
        }
    }

    #[test]
    fn growth_ratio_monotone_to_one() {
        for n in [3u32, 4, 7] {
            let mut prev = f64::INFINITY;
            for j in 0..40 {
                let t = 1e-2 * 2f64.powi(j);
                let ratio = sinh_growth_ratio(t, n).unwrap();
                assert!(ratio >= 1.0, "ratio below 1 at t = {t}, n = {n}");
                assert!(ratio <= prev * (1.0 + 1e-11), "not decreasing at t = {t}");
                prev = ratio;
            }
        }
    }

    #[test]
    fn growth_ratio_radius_form_matches_volume_form() {
        // Across the r = 2 branch switch both parameterizations must agree:
        // ratio_at_radius(r) = sinh_growth_ratio(G(r)).
        for n in [3u32, 4, 5, 8, 15] {
            for &r in &[0.5, 1.0, 1.99, 2.0, 2.01, 3.0, 5.0] {
                let by_radius = growth_ratio_at_radius(r, n).unwrap();
                let by_volume = sinh_growth_ratio(ball_volume(r, n).unwrap(), n).unwrap();
                assert!(
                    close(by_radius, by_volume, 1e-10),
                    "n = {n}, r = {r}: {by_radius} vs {by_volume}"
                );
            }
        }
    }

    #[test]
    fn growth_ratio_radius_limit_and_monotonicity() {
        for n in [3u32, 4, 7, 12] {
            let mut prev = f64::INFINITY;
            for j in 0..60 {
                let r = 1e-2 * 1.6f64.powi(j);
                let ratio = growth_ratio_at_radius(r, n).unwrap();
                assert!(ratio >= 1.0, "ratio below 1 at r = {r}, n = {n}");
                assert!(ratio <= prev * (1.0 + 1e-11), "not decreasing at r = {r}");
                prev = ratio;
            }
            // Huge radius: exactly 1 in floating point.
            let far = growth_ratio_at_radius(1e4, n).unwrap();
            assert!((far - 1.0).abs() < 1e-12, "n = {n}: {far}");
        }
    }

    #[test]
    fn threshold_monotone_in_eps() {
        let t_small = threshold_r0(0.01, 4).unwrap();
        let t_large = threshold_r0(0.1, 4).unwrap();
        assert!(t_small >= t_large);
        // Spot check the defining property at the returned point.
        assert!(sinh_growth_ratio(t_small, 4).unwrap() <= 1.01);
        assert!(sinh_growth_ratio(0.5 * t_small, 4).unwrap() > 1.01);
    }
}
