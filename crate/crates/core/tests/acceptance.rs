//! Acceptance gate: one test per numbered criterion, each printing one
//! `criterion N: PASS/FAIL — detail` line (visible with `--nocapture`;
//! the test names mirror the same numbering in the default output).
//!
//! Criterion 2 is split: the trend/floor clauses (2a) hold, while the
//! "within 8% of the sharp constant at ln(R/R0) = 40" clause (2b) is not
//! attainable by the explicit profile family — its Rayleigh quotient is
//! measured at 98% of its own certified envelope, which still sits 19%
//! above the sharp constant at that R (8% would need ln(R/R0) ≈ 135).
//! Test 2b states the measurement and fails honestly.

use hypradial::coefficients::{c_table, d_table, xi_table, zeta_table, CoeffTable};
use hypradial::harness::{run_suite, RunConfig};
use hypradial::hypgeom::{ball_radius, ball_volume, g_weight, growth_ratio_at_radius};
use hypradial::measure_quadrature::{
    integrate_hn_radial, integrate_weighted, MeasureKind, QuadratureConfig, WeightedIntegralSpec,
};
use hypradial::radial_calculus::jet::Jet;
use hypradial::radial_calculus::library::{default_library, smooth_bump, Piecewise};
use hypradial::radial_calculus::{grad_r, scale_fn, square_identity_check, ProductFn, RadialFn};
use hypradial::sharpness::{
    construction_identity_residual, lift_to_hn, profile_f_r, rayleigh_quotient, sharpness_sweep,
    SequenceParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn squared(f: &RadialFn) -> RadialFn {
    Arc::new(ProductFn {
        a: f.clone(),
        b: f.clone(),
    })
}

fn rel_err(got: f64, expect: f64) -> f64 {
    (got - expect).abs() / expect.abs().max(1e-300)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// 1. Closed-form integrals of the almost-extremising profile: the lifted
/// L² mass equals ln(R/R0) + 4/3 (1e-6 relative) and the 1-D gradient
/// energy equals (ln(R/R0) + 28/3)/4 (1e-8 relative). The values are
/// independent of R0; R0 = 1 is used.
#[test]
fn criterion_1_profile_integrals() {
    let mut worst_l2 = 0.0f64;
    let mut worst_grad = 0.0f64;
    for n in [3u32, 4, 5] {
        for ln_ratio in [1.0f64, 5.0, 20.0] {
            let p = SequenceParams::new(1.0, ln_ratio.exp(), 0.1, 0).unwrap();
            let f = profile_f_r(&p).unwrap();
            let u = lift_to_hn(&f, n).unwrap();
            let l2 = integrate_hn_radial(squared(&u).as_ref(), n, 0, &quad()).unwrap();
            worst_l2 = worst_l2.max(rel_err(l2, ln_ratio + 4.0 / 3.0));

            let df = grad_r(&f);
            let energy = integrate_weighted(
                squared(&df).as_ref(),
                &WeightedIntegralSpec {
                    power: -2,
                    measure: MeasureKind::Lebesgue1d,
                },
                &quad(),
            )
            .unwrap();
            worst_grad = worst_grad.max(rel_err(energy, 0.25 * (ln_ratio + 28.0 / 3.0)));
        }
    }
    let pass = worst_l2 <= 1e-6 && worst_grad <= 1e-8;
    report(
        "1",
        pass,
        &format!(
            "lifted L2 mass vs ln(R/R0)+4/3 worst rel err {worst_l2:.2e} (tol 1e-6); \
             1-D gradient energy vs (ln(R/R0)+28/3)/4 worst rel err {worst_grad:.2e} (tol 1e-8)"
        ),
    );
    assert!(
        pass,
        "worst rel errs: L2 {worst_l2:.3e}, grad {worst_grad:.3e}"
    );
}

/// 2a. Sharpness trend at n = 4, (k, l) = (1, 0), eps = 0.01: the Rayleigh
/// quotient is nonincreasing over ln(R/R0) in {5, 10, 20, 40} and never
/// drops below 2.25·(1 − 1e-8).
#[test]
fn criterion_2a_sharpness_trend_and_floor() {
    let sweep = sharpness_sweep(4, 1, 0, 0.01, &[5.0, 10.0, 20.0, 40.0], None, &quad()).unwrap();
    let quotients: Vec<f64> = sweep.rows.iter().map(|r| r.quotient).collect();
    let monotone = sweep.is_nonincreasing(1e-9);
    let floored = sweep.respects_sharp_floor(1e-8);
    let pass = monotone && floored && (sweep.sharp - 2.25).abs() < 1e-15;
    report(
        "2a",
        pass,
        &format!(
            "quotients {quotients:.6?} nonincreasing={monotone}, \
             above 2.25*(1-1e-8)={floored}"
        ),
    );
    assert!(pass, "quotients {quotients:?}");
}

/// 2b. The same sweep's quotient at ln(R/R0) = 40 is required to lie
/// within 8% of the sharp constant 2.25. Measured: 2.6872, i.e. 19.4%
/// above — yet only 1.9% under the construction's certified envelope
/// 2.25·(1+eps)²·(ln+28/3)/(ln+4/3) = 2.7395, so the profile itself is
/// near-optimal: the excess is the finite-R term. The hard pointwise
/// bound D(t) ≥ (n−1)t forces quotient ≥ 2.25·(ln+28/3)/(ln+4/3) = 2.686
/// at ln = 40, already above the 2.43 target; 8% is unreachable before
/// ln ≈ 99 and certain only by ln ≈ 135 (envelope crossing). This
/// criterion fails honestly; the trend toward 2.25 is criterion 2a.
#[test]
fn criterion_2b_sharpness_within_8_percent() {
    let sweep = sharpness_sweep(4, 1, 0, 0.01, &[5.0, 10.0, 20.0, 40.0], None, &quad()).unwrap();
    let last = sweep.rows.last().unwrap();
    let overshoot = last.quotient / 2.25 - 1.0;
    let envelope_gap = 1.0 - last.quotient / last.certified_bound;
    let pass = overshoot <= 0.08;
    report(
        "2b",
        pass,
        &format!(
            "quotient at ln(R/R0)=40 is {:.6} = 2.25·(1+{:.4}); required within 8%; \
             certified envelope {:.6} (quotient {:.2}% under it); with this profile \
             family 8% is unreachable before ln(R/R0) ≈ 99 (hard floor \
             2.25·(ln+28/3)/(ln+4/3)) and certain only by ln ≈ 135",
            last.quotient,
            overshoot,
            last.certified_bound,
            100.0 * envelope_gap
        ),
    );
    assert!(
        pass,
        "quotient {:.6} exceeds 2.25 by {:.2}% (> 8%); it is {:.2}% under its certified \
         envelope {:.6}, so the excess is the finite-R term (ln+28/3)/(ln+4/3) of the \
         construction itself, not an implementation gap; the hard floor \
         2.25·(ln+28/3)/(ln+4/3) = 2.686 at ln = 40 already exceeds the 2.43 target, \
         and stays above it until ln(R/R0) ≈ 99",
        last.quotient,
        100.0 * overshoot,
        100.0 * envelope_gap,
        last.certified_bound
    );
}

/// 3. Second-order construction identity: the level-1 iterate satisfies
/// Δ_r(lift(v_1)) + lift(f) = 0 with max relative residual ≤ 1e-5 on a
/// 512-point grid, n in {4, 6} (eps = 0.01, ln(R/R0) = 10).
#[test]
fn criterion_3_second_order_construction_identity() {
    let mut worst = 0.0f64;
    for n in [4u32, 6] {
        let p = SequenceParams::from_ratio(n, 0.01, 10.0, 1).unwrap();
        let res = construction_identity_residual(&p, n, 512, &quad()).unwrap();
        worst = worst.max(res);
    }
    let pass = worst <= 1e-5;
    report(
        "3",
        pass,
        &format!("max relative residual {worst:.2e} over 512-point grids at n = 4, 6 (tol 1e-5)"),
    );
    assert!(pass, "residual {worst:.3e}");
}

fn assert_table_endpoints(table: &CoeffTable, noted: &mut Vec<String>) {
    for check in &table.checks {
        if check.matches {
            continue;
        }
        let entry = format!(
            "{:?} n={} params={:?} {}: recursion={} printed={} [{}]",
            table.family,
            table.n,
            table.params,
            check.name,
            check.recursion,
            check.printed,
            check.note.as_deref().unwrap_or("UNDOCUMENTED")
        );
        assert!(
            check.note.is_some(),
            "undocumented endpoint mismatch: {entry}"
        );
        noted.push(entry);
    }
}

/// 4. Exact rational equality of recursion endpoints with the printed
/// closed forms for every admissible table with n ≤ 41 and order ≤ 8
/// (iterated tables: 2β ≤ 8). Documented discrepancies (the odd-odd
/// printed top entry of the D family) are reported with both values.
#[test]
fn criterion_4_exact_endpoint_equalities() {
    let mut tables = 0usize;
    let mut noted = Vec::new();
    for n in 3u32..=41 {
        let m = n as i64;
        for beta in 1i64..=4 {
            for alpha in 0..(m - 4 * beta).max(0) {
                if let Ok(t) = xi_table(n, alpha, beta) {
                    assert_table_endpoints(&t, &mut noted);
                    tables += 1;
                }
                if let Ok(t) = zeta_table(n, alpha, beta) {
                    assert_table_endpoints(&t, &mut noted);
                    tables += 1;
                }
            }
        }
        for k in 1u32..=8 {
            for l in 0..k {
                if let Ok(t) = c_table(n, k, l) {
                    assert_table_endpoints(&t, &mut noted);
                    tables += 1;
                }
                if let Ok(t) = d_table(n, k, l) {
                    assert_table_endpoints(&t, &mut noted);
                    tables += 1;
                }
            }
        }
    }
    assert!(tables > 2000, "only {tables} tables enumerated");
    report(
        "4",
        true,
        &format!(
            "{tables} tables (n ≤ 41, order ≤ 8) endpoint-checked exactly; \
             {} documented discrepancies (odd-odd D top entries, recursion kept)",
            noted.len()
        ),
    );
    for line in noted.iter().take(3) {
        println!("  noted: {line}");
    }
}

/// 5. The full inequality suite at n = 9 over the 12-function library:
/// every admissible spec passes with min relative deficit ≥ −1e-9.
#[test]
fn criterion_5_inequality_suite_n9() {
    let cfg = RunConfig::default();
    let suite = run_suite("all", 9, &cfg).unwrap();
    let min = suite.min_rel_deficit();
    let pass = suite.verdict == hypradial::harness::Verdict::Pass && min >= -1e-9;
    report(
        "5",
        pass,
        &format!(
            "suite 'all' at n = 9: {} specs, verdict {}, min rel deficit {min:.3e} (tol -1e-9)",
            suite.reports.len(),
            suite.verdict.as_str()
        ),
    );
    assert!(
        pass,
        "verdict {:?}, min rel deficit {min:.3e}",
        suite.verdict
    );
}

/// 6. Property suites: the product-rule identity
/// Δ_r(u²) = 2uΔ_r u + 2|∇_r u|² at 100 random samples (rel ≤ 1e-10);
/// g(r) = (r coth r − 1)/r² in (0, 1/3]; the surface growth ratio ≥ 1
/// with limit 1 (within 1e-3 at r = 1e4); F∘G round trip ≤ 1e-9;
/// exact scale invariance of Rayleigh quotients.
#[test]
fn criterion_6_property_suites() {
    // Product-rule identity on random (function, radius) samples.
    let funcs = default_library(7);
    let mut rng = ChaCha8Rng::seed_from_u64(20260815);
    let mut worst_sq = 0.0f64;
    for i in 0..100 {
        let nf = &funcs[i % funcs.len()];
        let (lo, hi) = nf.f.support();
        let r = lo + rng.gen::<f64>() * (hi - lo);
        if r <= 0.0 {
            continue;
        }
        let n = [3u32, 5, 9][i % 3];
        let (residual, scale) = square_identity_check(&nf.f, n, r).unwrap();
        worst_sq = worst_sq.max(residual.abs() / scale.max(1.0));
    }

    // g-weight range over a wide logarithmic sweep.
    let mut g_ok = true;
    let mut t = 1e-6f64;
    while t <= 1e3 {
        let g = g_weight(t).unwrap();
        g_ok &= g > 0.0 && g <= 1.0 / 3.0;
        t *= 1.37;
    }

    // Surface growth ratio: ≥ 1 everywhere sampled, → 1 at large radius.
    let mut ratio_ok = true;
    let mut worst_limit = 0.0f64;
    for n in [3u32, 4, 5, 9] {
        for r in [0.5f64, 2.0, 10.0] {
            ratio_ok &= growth_ratio_at_radius(r, n).unwrap() >= 1.0;
        }
        let at_far = growth_ratio_at_radius(1e4, n).unwrap();
        ratio_ok &= at_far >= 1.0;
        worst_limit = worst_limit.max((at_far - 1.0).abs());
    }

    // Inverse volume round trip.
    let mut worst_rt = 0.0f64;
    for n in [3u32, 5, 9] {
        for r in [0.25f64, 1.0, 5.0, 12.0] {
            let back = ball_radius(ball_volume(r, n).unwrap(), n).unwrap();
            worst_rt = worst_rt.max((back - r).abs() / r.max(1.0));
        }
    }

    // Exact scale invariance: quotient(4u) bit-identical to quotient(u).
    let p = SequenceParams::new(1.0, 4f64.exp(), 0.1, 0).unwrap();
    let u = lift_to_hn(&profile_f_r(&p).unwrap(), 4).unwrap();
    let (_, _, q1) = rayleigh_quotient(&u, 4, 1, 0, &quad()).unwrap();
    let (_, _, q4) = rayleigh_quotient(&scale_fn(&u, 4.0), 4, 1, 0, &quad()).unwrap();
    let scale_exact = q1.to_bits() == q4.to_bits();

    let pass = worst_sq <= 1e-10
        && g_ok
        && ratio_ok
        && worst_limit <= 1e-3
        && worst_rt <= 1e-9
        && scale_exact;
    report(
        "6",
        pass,
        &format!(
            "square identity worst rel {worst_sq:.2e} (tol 1e-10); g in (0,1/3]: {g_ok}; \
             growth ratio ≥ 1 with |ratio(1e4)-1| ≤ {worst_limit:.2e} (tol 1e-3); \
             F∘G worst {worst_rt:.2e} (tol 1e-9); scale invariance bit-exact: {scale_exact}"
        ),
    );
    assert!(pass);
}

/// 7. Oracle cross-checks: hyperbolic integration against the closed ball
/// volume π(sinh 2r − 2r) at n = 3 (1e-10 relative), and O(h²)
/// convergence of central finite differences toward the jet derivative
/// over h in {1e-2, 1e-3, 1e-4}.
#[test]
fn criterion_7_oracle_cross_checks() {
    // Ball volumes through the quadrature pipeline.
    let mut worst_vol = 0.0f64;
    for r in [0.5f64, 1.0, 2.0] {
        let indicator = Piecewise::constant_on(1.0, 0.0, r).unwrap();
        let got = integrate_hn_radial(&indicator, 3, 0, &quad()).unwrap();
        let expect = PI * ((2.0 * r).sinh() - 2.0 * r);
        worst_vol = worst_vol.max(rel_err(got, expect));
    }

    // O(h²) convergence of the first-derivative stencil toward the jet.
    // Each tenfold step in h must shrink the error ~100×; require ≥ 25×.
    let f = smooth_bump(1.0, 3.0).unwrap();
    let mut min_gain = f64::INFINITY;
    for r in [1.4f64, 1.9, 2.3] {
        let exact = f.taylor(r, 1).derivative(1);
        let errs: Vec<f64> = [1e-2f64, 1e-3, 1e-4]
            .iter()
            .map(|&h| {
                let fd = (f.taylor(r + h, 0).value() - f.taylor(r - h, 0).value()) / (2.0 * h);
                (fd - exact).abs()
            })
            .collect();
        for w in errs.windows(2) {
            if w[0] > 1e-12 {
                min_gain = min_gain.min(w[0] / w[1].max(1e-300));
            }
        }
        // Second derivative: the h = 1e-3 stencil must agree to its
        // truncation level.
        let h = 1e-3;
        let fd2 = (f.taylor(r + h, 0).value() - 2.0 * f.taylor(r, 0).value()
            + f.taylor(r - h, 0).value())
            / (h * h);
        let exact2 = f.taylor(r, 2).derivative(2);
        assert!(
            (fd2 - exact2).abs() <= 1e-4 * exact2.abs().max(1.0),
            "second derivative at r = {r}: {fd2} vs {exact2}"
        );
    }
    let pass = worst_vol <= 1e-10 && min_gain >= 25.0;
    report(
        "7",
        pass,
        &format!(
            "n=3 ball volume vs π(sinh 2r − 2r) worst rel err {worst_vol:.2e} (tol 1e-10); \
             FD error gain per tenfold h-step ≥ {min_gain:.0} (O(h²) ⇒ ~100, require ≥ 25)"
        ),
    );
    assert!(pass, "vol {worst_vol:.3e}, gain {min_gain:.1}");
}

/// The Jet type is part of the public surface the criteria exercise; keep
/// a direct sanity anchor here so the acceptance file fails loudly if the
/// convention (normalized Taylor coefficients) ever drifts.
#[test]
fn jet_convention_anchor() {
    let j = Jet::from_coeffs(vec![2.0, 3.0, 5.0]);
    assert_eq!(j.value(), 2.0);
    assert_eq!(j.derivative(1), 3.0);
    assert_eq!(j.derivative(2), 10.0);
}
