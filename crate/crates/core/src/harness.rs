//! Inequality-check orchestration and report generation.
//!
//! Every displayed inequality is identified by an [`InequalityId`] and
//! compiled by [`build_plan`] into a term-by-term evaluation plan: each
//! side is a signed combination of weighted integrals
//! `∫ |∇_r^k u|² r^{−p} dv`, `∫ g(r) u² r^{−p} dv`, or the completed
//! square `∫ (Δ_r u + c·u/r²)² r^{−p} dv`, with coefficients taken
//! verbatim (as exact rationals, converted once) from [`coefficients`].
//! [`check_inequality`] runs a plan over a list of test functions and
//! reports the deficit `lhs − rhs` per function; [`run_suite`] does this
//! for a named family of admissible parameter choices over the default
//! twelve-function library.
//!
//! Conventions:
//! * `deficit = lhs − rhs` and
//!   `rel_deficit = deficit / max(|lhs|, |rhs|)` (zero when both sides
//!   vanish); a check passes when every `rel_deficit ≥ −tolerance`.
//! * Hypothesis violations (inadmissible `n`, `α`, `k`, `l`, `β`) yield
//!   verdict `spec_error`, never `fail`.
//! * Reports are deterministic: rows follow the library order, suites
//!   follow a fixed spec enumeration, and parallel execution only
//!   distributes independent (spec, function) evaluations.

use crate::coefficients::{self, Q};
use crate::measure_quadrature::{
    integrate_weighted, MeasureKind, QuadratureConfig, WeightedIntegralSpec,
};
use crate::radial_calculus::jet::{coth_jet, monomial_jet, Jet};
use crate::radial_calculus::library::{default_library, NamedFunction};
use crate::radial_calculus::{laplace_r, nabla_r_k, ProductFn, RadialFn, RadialJetFunction};
use crate::{Error, Result};
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Version tag of the coefficient tables / report schema, recorded in
/// every report's metadata.
pub const REPORT_VERSION: &str = "1.0";

// ---------------------------------------------------------------------------
// Run configuration.
// ---------------------------------------------------------------------------

/// Runtime configuration of a verification run: quadrature settings, the
/// seed of the randomized members of the function library, and the pass
/// tolerance on relative deficits.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub quad: QuadratureConfig,
    pub library_seed: u64,
    /// A check passes when every `rel_deficit ≥ −check_tolerance`.
    pub check_tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quad: QuadratureConfig::default(),
            library_seed: 7,
            check_tolerance: 1e-9,
        }
    }
}

impl RunConfig {
    /// Apply one `key=value` override. Recognized keys: `quad_rel_tol`,
    /// `quad_abs_tol`, `quad_max_subdivisions`, `quad_tail_horizon`,
    /// `library_seed`, `check_tolerance`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| {
            Error::Domain(format!(
                "config key {key}: cannot parse {value:?} as {what}"
            ))
        };
        match key {
            "quad_rel_tol" => self.quad.rel_tol = value.parse().map_err(|_| bad("a float"))?,
            "quad_abs_tol" => self.quad.abs_tol = value.parse().map_err(|_| bad("a float"))?,
            "quad_max_subdivisions" => {
                self.quad.max_subdivisions = value.parse().map_err(|_| bad("an integer"))?
            }
            "quad_tail_horizon" => {
                self.quad.tail_horizon = value.parse().map_err(|_| bad("a float"))?
            }
            "library_seed" => self.library_seed = value.parse().map_err(|_| bad("an integer"))?,
            "check_tolerance" => {
                self.check_tolerance = value.parse().map_err(|_| bad("a float"))?
            }
            _ => return Err(Error::Domain(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parse a plain-text `key=value` config file (one pair per line; `#`
    /// starts a comment) on top of the current values.
    pub fn apply_file(&mut self, path: &str) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Domain(format!(
                    "{path}:{}: expected key=value, got {raw:?}",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// FNV-1a fingerprint of the effective configuration, recorded in
    /// reports so that runs are comparable.
    pub fn fingerprint(&self) -> String {
        let canon = format!(
            "quad_rel_tol={:e};quad_abs_tol={:e};quad_max_subdivisions={};\
             quad_tail_horizon={:e};library_seed={};check_tolerance={:e}",
            self.quad.rel_tol,
            self.quad.abs_tol,
            self.quad.max_subdivisions,
            self.quad.tail_horizon,
            self.library_seed,
            self.check_tolerance,
        );
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in canon.bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

// ---------------------------------------------------------------------------
// Inequality identifiers and specs.
// ---------------------------------------------------------------------------

/// Identifier of one displayed inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum InequalityId {
    /// `∫|∇_r^k u|² ≥ ((n−1)/2)^{2(k−l)} ∫|∇_r^l u|²`.
    main_poincare,
    /// Weighted Hardy with the `g`-weighted remainder (three terms).
    th1,
    /// Weighted Hardy, two-term version.
    cor1,
    /// Weighted Rellich with the `g`-weighted remainder.
    th2,
    /// Weighted Rellich, two-term version.
    cor2,
    /// Critical Hardy: `4∫r^{2−n}|∇_r u|² ≥ ∫r^{2−n}u²`.
    lemma3,
    /// Sharpened critical Hardy: ratio bounded below by `(n−1)/4`.
    mu_bound,
    /// Weighted Hardy with constant `(n−1)/4` and weaker hypothesis.
    th3,
    /// Weighted Rellich derived from `th3`.
    cor3,
    /// Completed-square comparison bounding `∫r^{−α}(Δ_r u + c u/r²)²`.
    lemma5,
    /// Fourth-order Rellich triple.
    th4,
    /// Fourth-order Rellich triple with larger constants.
    cor4,
    /// Iterated table `Ξ_{α,β}`: `∫(Δ_r^β u)²/r^α ≥ Σ_j Ξ^j ∫u²/r^{…}`.
    lemma6,
    /// Iterated table `ζ_{α,β}` (larger seed, stronger hypothesis).
    lemma7,
    /// `∫(Δ_r u)² − ((n−1)/2)²∫|∇_r u|² ≥ remainder` (n ≥ 5).
    r21,
    /// `∫(Δ_r u)² − ((n−1)/2)⁴∫u² ≥ remainder` (n ≥ 5).
    r20,
    /// Variant of `r21` with a larger `r^{−2}` constant (n ≥ 7).
    dr21,
    /// Variant of `r20` with a larger `r^{−2}` constant (n ≥ 7).
    dr20,
    /// Higher-order Poincaré with the full `C_{k,l}` remainder table.
    C_family,
    /// Higher-order Poincaré with the `D_{k,l}` table (n ≥ 4k−1).
    D_family,
}

impl InequalityId {
    pub const ALL: [InequalityId; 20] = [
        InequalityId::main_poincare,
        InequalityId::th1,
        InequalityId::cor1,
        InequalityId::th2,
        InequalityId::cor2,
        InequalityId::lemma3,
        InequalityId::mu_bound,
        InequalityId::th3,
        InequalityId::cor3,
        InequalityId::lemma5,
        InequalityId::th4,
        InequalityId::cor4,
        InequalityId::lemma6,
        InequalityId::lemma7,
        InequalityId::r21,
        InequalityId::r20,
        InequalityId::dr21,
        InequalityId::dr20,
        InequalityId::C_family,
        InequalityId::D_family,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::main_poincare => "main_poincare",
            InequalityId::th1 => "th1",
            InequalityId::cor1 => "cor1",
            InequalityId::th2 => "th2",
            InequalityId::cor2 => "cor2",
            InequalityId::lemma3 => "lemma3",
            InequalityId::mu_bound => "mu_bound",
            InequalityId::th3 => "th3",
            InequalityId::cor3 => "cor3",
            InequalityId::lemma5 => "lemma5",
            InequalityId::th4 => "th4",
            InequalityId::cor4 => "cor4",
            InequalityId::lemma6 => "lemma6",
            InequalityId::lemma7 => "lemma7",
            InequalityId::r21 => "r21",
            InequalityId::r20 => "r20",
            InequalityId::dr21 => "dr21",
            InequalityId::dr20 => "dr20",
            InequalityId::C_family => "C_family",
            InequalityId::D_family => "D_family",
        }
    }

    pub fn parse(s: &str) -> Result<InequalityId> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown inequality id {s:?}; known ids: {}",
                    InequalityId::ALL
                        .iter()
                        .map(|id| id.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }
}

/// One inequality check request: the id plus whatever parameters the
/// underlying statement takes (`α`, `(k, l)`, or `(α, β)`).
#[derive(Debug, Clone, Copy)]
pub struct InequalitySpec {
    pub id: InequalityId,
    pub n: u32,
    pub alpha: Option<i64>,
    pub beta: Option<i64>,
    pub k: Option<u32>,
    pub l: Option<u32>,
    /// Per-spec override of the run-level pass tolerance.
    pub tolerance: Option<f64>,
}

impl InequalitySpec {
    pub fn new(id: InequalityId, n: u32) -> Self {
        InequalitySpec {
            id,
            n,
            alpha: None,
            beta: None,
            k: None,
            l: None,
            tolerance: None,
        }
    }

    pub fn with_alpha(mut self, alpha: i64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_beta(mut self, beta: i64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_kl(mut self, k: u32, l: u32) -> Self {
        self.k = Some(k);
        self.l = Some(l);
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    fn need_alpha(&self) -> Result<i64> {
        self.alpha
            .ok_or_else(|| Error::Hypothesis(format!("{} needs --alpha", self.id.as_str())))
    }

    fn need_kl(&self) -> Result<(u32, u32)> {
        match (self.k, self.l) {
            (Some(k), Some(l)) => Ok((k, l)),
            _ => Err(Error::Hypothesis(format!(
                "{} needs --k and --l",
                self.id.as_str()
            ))),
        }
    }

    /// Compact parameter echo, e.g. `th1(n=9,alpha=2)`.
    pub fn label(&self) -> String {
        let mut s = format!("{}(n={}", self.id.as_str(), self.n);
        if let Some(a) = self.alpha {
            let _ = write!(s, ",alpha={a}");
        }
        if let Some(b) = self.beta {
            let _ = write!(s, ",beta={b}");
        }
        if let Some(k) = self.k {
            let _ = write!(s, ",k={k}");
        }
        if let Some(l) = self.l {
            let _ = write!(s, ",l={l}");
        }
        s.push(')');
        s
    }
}

// ---------------------------------------------------------------------------
// Evaluation plans: each side as a signed sum of weighted integrals.
// ---------------------------------------------------------------------------

/// The integrand of one plan term (before the `r^{−power}` weight).
#[derive(Debug, Clone, Copy)]
enum Integrand {
    /// `|∇_r^k u|²` (with `k = 0` meaning `u²`).
    NablaSq { k: u32 },
    /// `g(r)·u²` with `g(r) = (r coth r − 1)/r²`.
    GWeightedSq,
    /// `(Δ_r u + shift·u/r²)²`.
    ShiftedLaplSq { shift: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: f64,
    integrand: Integrand,
    /// Exponent `p` of the weight `r^{−p}`.
    power: i64,
}

/// A compiled inequality check: evaluate both sides on a test function and
/// compare. Construction validates every hypothesis of the underlying
/// statement.
pub struct CheckPlan {
    spec: InequalitySpec,
    lhs: Vec<Term>,
    rhs: Vec<Term>,
    /// Human-readable provenance: id, parameters, and the exact rational
    /// coefficients that produced the right-hand side.
    describe: String,
}

fn qf(q: &Q) -> Result<f64> {
    q.to_f64()
        .ok_or_else(|| Error::Domain("coefficient overflows f64".into()))
}

fn coeff_list(qs: &[Q]) -> String {
    let parts: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn usq(coeff: f64, power: i64) -> Term {
    Term {
        coeff,
        integrand: Integrand::NablaSq { k: 0 },
        power,
    }
}

fn nsq(coeff: f64, k: u32, power: i64) -> Term {
    Term {
        coeff,
        integrand: Integrand::NablaSq { k },
        power,
    }
}

/// Compile a spec into an evaluation plan, validating all hypotheses
/// through the coefficients module. `Err(Hypothesis)`/`Err(Domain)` here
/// means the spec itself is inadmissible.
pub fn build_plan(spec: &InequalitySpec) -> Result<CheckPlan> {
    use InequalityId as Id;
    let n = spec.n;
    let (lhs, rhs, coeffs): (Vec<Term>, Vec<Term>, String) = match spec.id {
        Id::main_poincare => {
            let (k, l) = spec.need_kl()?;
            let sharp = coefficients::sharp_constant(n, k, l)?;
            (
                vec![nsq(1.0, k, 0)],
                vec![nsq(qf(&sharp)?, l, 0)],
                coeff_list(&[sharp]),
            )
        }
        Id::th1 => {
            let a = spec.need_alpha()?;
            let c = coefficients::hardy_th1(n, a)?;
            (
                vec![nsq(1.0, 1, a)],
                vec![
                    usq(qf(&c[0])?, a + 2),
                    usq(qf(&c[1])?, a),
                    Term {
                        coeff: qf(&c[2])?,
                        integrand: Integrand::GWeightedSq,
                        power: a,
                    },
                ],
                coeff_list(&c),
            )
        }
        Id::cor1 => {
            let a = spec.need_alpha()?;
            let c = coefficients::hardy_cor1(n, a)?;
            (
                vec![nsq(1.0, 1, a)],
                vec![usq(qf(&c[0])?, a + 2), usq(qf(&c[1])?, a)],
                coeff_list(&c),
            )
        }
        Id::th2 => {
            let a = spec.need_alpha()?;
            let c = coefficients::rellich_th2(n, a)?;
            (
                vec![nsq(1.0, 2, a - 2)],
                vec![
                    usq(qf(&c[0])?, a + 2),
                    usq(qf(&c[1])?, a),
                    Term {
                        coeff: qf(&c[2])?,
                        integrand: Integrand::GWeightedSq,
                        power: a,
                    },
                ],
                coeff_list(&c),
            )
        }
        Id::cor2 => {
            let a = spec.need_alpha()?;
            let c = coefficients::rellich_cor2(n, a)?;
            (
                vec![nsq(1.0, 2, a - 2)],
                vec![usq(qf(&c[0])?, a + 2), usq(qf(&c[1])?, a)],
                coeff_list(&c),
            )
        }
        Id::lemma3 => {
            crate::hypgeom::sphere_measure(n)?;
            let four = coefficients::critical_hardy_constant();
            let p = n as i64 - 2;
            (
                vec![nsq(qf(&four)?, 1, p)],
                vec![usq(1.0, p)],
                coeff_list(&[four]),
            )
        }
        Id::mu_bound => {
            let mu = coefficients::mu_lower_bound(n)?;
            let p = n as i64 - 2;
            (
                vec![nsq(1.0, 1, p)],
                vec![usq(qf(&mu)?, p)],
                coeff_list(&[mu]),
            )
        }
        Id::th3 => {
            let a = spec.need_alpha()?;
            let c = coefficients::hardy_th3(n, a)?;
            (
                vec![nsq(1.0, 1, a)],
                vec![usq(qf(&c[0])?, a + 2), usq(qf(&c[1])?, a)],
                coeff_list(&c),
            )
        }
        Id::cor3 => {
            let a = spec.need_alpha()?;
            let c = coefficients::rellich_cor3(n, a)?;
            (
                vec![nsq(1.0, 2, a - 2)],
                vec![usq(qf(&c[0])?, a + 2), usq(qf(&c[1])?, a)],
                coeff_list(&c),
            )
        }
        Id::lemma5 => {
            let a = spec.need_alpha()?;
            let c = coefficients::lemma5_coeffs(n, a)?;
            let shift = qf(&c.shift)?;
            (
                vec![
                    nsq(1.0, 2, a),
                    nsq(-qf(&c.grad)?, 1, a + 2),
                    usq(qf(&c.zeroth)?, a + 4),
                ],
                vec![Term {
                    coeff: 1.0,
                    integrand: Integrand::ShiftedLaplSq { shift },
                    power: a,
                }],
                coeff_list(&[c.shift.clone(), c.grad.clone(), c.zeroth.clone()]),
            )
        }
        Id::th4 => {
            let a = spec.need_alpha()?;
            let c = coefficients::rellich_th4(n, a)?;
            (
                vec![nsq(1.0, 2, a)],
                vec![
                    usq(qf(&c[0])?, a + 4),
                    usq(qf(&c[1])?, a + 2),
                    usq(qf(&c[2])?, a),
                ],
                coeff_list(&c),
            )
        }
        Id::cor4 => {
            let a = spec.need_alpha()?;
            let c = coefficients::rellich_cor4(n, a)?;
            (
                vec![nsq(1.0, 2, a)],
                vec![
                    usq(qf(&c[0])?, a + 4),
                    usq(qf(&c[1])?, a + 2),
                    usq(qf(&c[2])?, a),
                ],
                coeff_list(&c),
            )
        }
        Id::lemma6 | Id::lemma7 => {
            let a = spec.need_alpha()?;
            let b = spec.beta.ok_or_else(|| {
                Error::Hypothesis(format!("{} needs beta >= 1", spec.id.as_str()))
            })?;
            let table = if spec.id == Id::lemma6 {
                coefficients::xi_table(n, a, b)?
            } else {
                coefficients::zeta_table(n, a, b)?
            };
            let order = 2 * u32::try_from(b)
                .map_err(|_| Error::Hypothesis(format!("beta must be >= 0, got {b}")))?;
            let mut rhs = Vec::new();
            for (idx, q) in table.entries.iter().enumerate() {
                rhs.push(usq(qf(q)?, table.weight_exponent(idx)));
            }
            (vec![nsq(1.0, order, a)], rhs, coeff_list(&table.entries))
        }
        Id::r21 | Id::dr21 => {
            let c = if spec.id == Id::r21 {
                coefficients::poincare_r21(n)?
            } else {
                coefficients::poincare_dr21(n)?
            };
            let sharp = coefficients::sharp_constant(n, 2, 1)?;
            (
                vec![nsq(1.0, 2, 0)],
                vec![
                    nsq(qf(&sharp)?, 1, 0),
                    usq(qf(&c[0])?, 4),
                    usq(qf(&c[1])?, 2),
                ],
                coeff_list(&[sharp, c[0].clone(), c[1].clone()]),
            )
        }
        Id::r20 | Id::dr20 => {
            let c = if spec.id == Id::r20 {
                coefficients::poincare_r20(n)?
            } else {
                coefficients::poincare_dr20(n)?
            };
            let sharp = coefficients::sharp_constant(n, 2, 0)?;
            (
                vec![nsq(1.0, 2, 0)],
                vec![usq(qf(&sharp)?, 0), usq(qf(&c[0])?, 4), usq(qf(&c[1])?, 2)],
                coeff_list(&[sharp, c[0].clone(), c[1].clone()]),
            )
        }
        Id::C_family | Id::D_family => {
            let (k, l) = spec.need_kl()?;
            let table = if spec.id == Id::C_family {
                coefficients::c_table(n, k, l)?
            } else {
                coefficients::d_table(n, k, l)?
            };
            let sharp = coefficients::sharp_constant(n, k, l)?;
            let mut rhs = vec![nsq(qf(&sharp)?, l, 0)];
            for (idx, q) in table.entries.iter().enumerate() {
                rhs.push(usq(qf(q)?, table.weight_exponent(idx)));
            }
            let mut provenance = vec![sharp];
            provenance.extend(table.entries.iter().cloned());
            (vec![nsq(1.0, k, 0)], rhs, coeff_list(&provenance))
        }
    };
    let describe = format!("{} coeffs={}", spec.label(), coeffs);
    Ok(CheckPlan {
        spec: *spec,
        lhs,
        rhs,
        describe,
    })
}

// ---------------------------------------------------------------------------
// Integrand wrappers used by plan terms.
// ---------------------------------------------------------------------------

/// `g(r)·u(r)²` with full jets (`g(r) = (r coth r − 1)/r²`, extended by
/// its limit `1/3` at the origin).
struct GWeightedSquare {
    u: RadialFn,
}

impl RadialJetFunction for GWeightedSquare {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let uj = self.u.taylor(r, order);
        let usq = uj.mul(&uj);
        if r <= 0.0 {
            return usq.scale(1.0 / 3.0);
        }
        let x = Jet::variable(r, order);
        let g = x
            .mul(&coth_jet(r, order))
            .sub(&Jet::constant(1.0, order))
            .div(&x.mul(&x));
        g.mul(&usq)
    }
    fn support(&self) -> (f64, f64) {
        self.u.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.u.breakpoints()
    }
}

/// `(Δ_r u + shift·u/r²)²` with full jets.
struct ShiftedLaplSquare {
    lap: RadialFn,
    u: RadialFn,
    shift: f64,
}

impl RadialJetFunction for ShiftedLaplSquare {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let mut s = self.lap.taylor(r, order);
        if r > 0.0 {
            s = s.add(
                &self
                    .u
                    .taylor(r, order)
                    .mul(&monomial_jet(self.shift, -2.0, r, order)),
            );
        }
        s.mul(&s)
    }
    fn support(&self) -> (f64, f64) {
        self.u.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.u.breakpoints()
    }
}

fn term_value(term: &Term, u: &RadialFn, n: u32, quad: &QuadratureConfig) -> Result<f64> {
    let f: RadialFn = match term.integrand {
        Integrand::NablaSq { k } => {
            let d = nabla_r_k(u, k, n)?;
            Arc::new(ProductFn { a: d.clone(), b: d })
        }
        Integrand::GWeightedSq => Arc::new(GWeightedSquare { u: u.clone() }),
        Integrand::ShiftedLaplSq { shift } => Arc::new(ShiftedLaplSquare {
            lap: laplace_r(u, n)?,
            u: u.clone(),
            shift,
        }),
    };
    let power = i32::try_from(term.power)
        .map_err(|_| Error::Domain(format!("weight exponent {} out of range", term.power)))?;
    let value = integrate_weighted(
        f.as_ref(),
        &WeightedIntegralSpec {
            power,
            measure: MeasureKind::Hyperbolic { n },
        },
        quad,
    )?;
    Ok(term.coeff * value)
}

fn side_value(terms: &[Term], u: &RadialFn, n: u32, quad: &QuadratureConfig) -> Result<f64> {
    let mut acc = 0.0;
    for term in terms {
        acc += term_value(term, u, n, quad)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

/// Per-function outcome of one inequality check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub func: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; nonnegative (up to tolerance) when the inequality
    /// holds.
    pub deficit: f64,
    /// `deficit / max(|lhs|, |rhs|)`, zero when both sides vanish.
    pub rel_deficit: f64,
}

impl CheckRow {
    fn new(func: &str, lhs: f64, rhs: f64) -> Self {
        let deficit = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        let rel_deficit = if scale > 0.0 { deficit / scale } else { 0.0 };
        CheckRow {
            func: func.to_string(),
            lhs,
            rhs,
            deficit,
            rel_deficit,
        }
    }
}

/// Outcome classification of a check or suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The spec violates the hypotheses of the underlying statement; no
    /// verdict about the inequality itself.
    SpecError,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::SpecError => "spec_error",
        }
    }

    /// CLI exit code: 0 pass, 1 fail, 2 spec error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::SpecError => 2,
        }
    }
}

/// Result of checking one inequality over a function list.
#[derive(Debug, Clone)]
pub struct CheckReport {
    /// Spec echo with parameters and exact coefficient provenance.
    pub spec: String,
    pub n: u32,
    /// Effective pass tolerance on relative deficits.
    pub tolerance: f64,
    pub rows: Vec<CheckRow>,
    pub verdict: Verdict,
    pub config_hash: String,
}

impl CheckReport {
    /// Smallest relative deficit across rows (`+∞` when empty).
    pub fn min_rel_deficit(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.rel_deficit)
            .fold(f64::INFINITY, f64::min)
    }
}

fn spec_error_report(label: String, n: u32, tol: f64, msg: &str, hash: String) -> CheckReport {
    CheckReport {
        spec: format!("{label} spec_error: {msg}"),
        n,
        tolerance: tol,
        rows: Vec::new(),
        verdict: Verdict::SpecError,
        config_hash: hash,
    }
}

/// Check one inequality over the given functions.
///
/// Hypothesis violations (including missing parameters) produce a
/// `spec_error` report; hard numerical failures propagate as errors.
pub fn check_inequality(
    spec: &InequalitySpec,
    funcs: &[NamedFunction],
    cfg: &RunConfig,
) -> Result<CheckReport> {
    let tol = spec.tolerance.unwrap_or(cfg.check_tolerance);
    let hash = cfg.fingerprint();
    if funcs.is_empty() {
        return Ok(spec_error_report(
            spec.label(),
            spec.n,
            tol,
            "empty test-function list",
            hash,
        ));
    }
    let plan = match build_plan(spec) {
        Ok(p) => p,
        Err(Error::Hypothesis(msg)) | Err(Error::Domain(msg)) => {
            return Ok(spec_error_report(spec.label(), spec.n, tol, &msg, hash));
        }
        Err(e) => return Err(e),
    };
    let eval = |nf: &NamedFunction| -> Result<CheckRow> {
        let lhs = side_value(&plan.lhs, &nf.f, spec.n, &cfg.quad)?;
        let rhs = side_value(&plan.rhs, &nf.f, spec.n, &cfg.quad)?;
        Ok(CheckRow::new(&nf.name, lhs, rhs))
    };
    #[cfg(feature = "parallel")]
    let rows = funcs.par_iter().map(eval).collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let rows = funcs.iter().map(eval).collect::<Result<Vec<_>>>()?;
    let verdict = if rows.iter().all(|r| r.rel_deficit >= -tol) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        spec: format!("{} tol={tol:e}", plan.describe),
        n: spec.n,
        tolerance: tol,
        rows,
        verdict,
        config_hash: hash,
    })
}

// ---------------------------------------------------------------------------
// Suites.
// ---------------------------------------------------------------------------

/// Aggregate of many checks (one per admissible spec of a named family).
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub n: u32,
    pub reports: Vec<CheckReport>,
    pub verdict: Verdict,
    pub config_hash: String,
}

impl SuiteReport {
    /// Smallest relative deficit across all member reports.
    pub fn min_rel_deficit(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.min_rel_deficit())
            .fold(f64::INFINITY, f64::min)
    }

    /// Flatten into a single report (rows prefixed by their spec label)
    /// for emission in the standard schema.
    pub fn flattened(&self) -> CheckReport {
        let mut rows = Vec::new();
        for report in &self.reports {
            let label = report
                .spec
                .split_whitespace()
                .next()
                .unwrap_or("?")
                .to_string();
            for row in &report.rows {
                let mut r = row.clone();
                r.func = format!("{label}::{}", row.func);
                rows.push(r);
            }
        }
        CheckReport {
            spec: format!("suite:{} specs={}", self.name, self.reports.len()),
            n: self.n,
            tolerance: self
                .reports
                .iter()
                .map(|r| r.tolerance)
                .fold(f64::INFINITY, f64::min),
            rows,
            verdict: self.verdict,
            config_hash: self.config_hash.clone(),
        }
    }
}

/// The named suites understood by [`run_suite`] and the CLI.
pub const SUITE_NAMES: [&str; 5] = ["hardy", "rellich", "poincare", "all", "all_section3"];

fn suite_ids(name: &str) -> Result<Vec<InequalityId>> {
    use InequalityId as Id;
    Ok(match name {
        "hardy" => vec![Id::th1, Id::cor1, Id::th3, Id::lemma3, Id::mu_bound],
        "rellich" => vec![
            Id::th2,
            Id::cor2,
            Id::cor3,
            Id::lemma5,
            Id::th4,
            Id::cor4,
            Id::lemma6,
            Id::lemma7,
        ],
        "poincare" => vec![
            Id::main_poincare,
            Id::r21,
            Id::r20,
            Id::dr21,
            Id::dr20,
            Id::C_family,
            Id::D_family,
        ],
        "all_section3" => vec![
            Id::th1,
            Id::cor1,
            Id::th2,
            Id::cor2,
            Id::lemma3,
            Id::mu_bound,
            Id::th3,
            Id::cor3,
            Id::lemma5,
            Id::th4,
            Id::cor4,
        ],
        "all" => InequalityId::ALL.to_vec(),
        _ => {
            return Err(Error::Domain(format!(
                "unknown suite {name:?}; known suites: {}",
                SUITE_NAMES.join(", ")
            )))
        }
    })
}

/// Enumerate every admissible spec of the given ids at dimension `n` (the
/// candidate parameter grid is filtered through the hypothesis checks of
/// the coefficients module). Derivative orders are capped at 4.
fn admissible_specs(ids: &[InequalityId], n: u32) -> Vec<InequalitySpec> {
    use InequalityId as Id;
    let m = n as i64;
    let mut out = Vec::new();
    let mut push = |spec: InequalitySpec| {
        if build_plan(&spec).is_ok() {
            out.push(spec);
        }
    };
    for &id in ids {
        match id {
            Id::main_poincare | Id::C_family | Id::D_family => {
                for k in 1..=4u32 {
                    for l in 0..k {
                        push(InequalitySpec::new(id, n).with_kl(k, l));
                    }
                }
            }
            Id::th1
            | Id::cor1
            | Id::th2
            | Id::cor2
            | Id::th3
            | Id::cor3
            | Id::th4
            | Id::cor4
            | Id::lemma5 => {
                for alpha in -2..=(m + 3) / 2 {
                    push(InequalitySpec::new(id, n).with_alpha(alpha));
                }
            }
            Id::lemma6 | Id::lemma7 => {
                for beta in 1..=(m / 4).max(0) {
                    for alpha in 0..(m - 4 * beta).max(0) {
                        push(InequalitySpec::new(id, n).with_alpha(alpha).with_beta(beta));
                    }
                }
            }
            Id::lemma3 | Id::mu_bound | Id::r21 | Id::r20 | Id::dr21 | Id::dr20 => {
                push(InequalitySpec::new(id, n));
            }
        }
    }
    out
}

/// Run a named suite at dimension `n` over the default function library.
///
/// Individual spec errors become `spec_error` member reports without
/// aborting the rest; the aggregate verdict is `fail` if any member
/// fails, else `spec_error` if any member is a spec error, else `pass`.
pub fn run_suite(name: &str, n: u32, cfg: &RunConfig) -> Result<SuiteReport> {
    let ids = suite_ids(name)?;
    let specs = admissible_specs(&ids, n);
    if specs.is_empty() {
        return Err(Error::Hypothesis(format!(
            "suite {name:?} has no admissible specs at n = {n}"
        )));
    }
    let funcs = default_library(cfg.library_seed);
    let reports = run_specs(&specs, &funcs, cfg)?;
    let verdict = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::SpecError) {
        Verdict::SpecError
    } else {
        Verdict::Pass
    };
    Ok(SuiteReport {
        name: name.to_string(),
        n,
        reports,
        verdict,
        config_hash: cfg.fingerprint(),
    })
}

/// Evaluation strategy for batch checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Data-parallel across (spec, function) jobs when the `parallel`
    /// feature is compiled in; sequential otherwise.
    Auto,
    /// Force single-threaded evaluation regardless of features.
    Sequential,
}

/// Check a list of specs over a shared function list, parallelizing over
/// (spec, function) pairs; report assembly preserves order.
pub fn run_specs(
    specs: &[InequalitySpec],
    funcs: &[NamedFunction],
    cfg: &RunConfig,
) -> Result<Vec<CheckReport>> {
    run_specs_with(specs, funcs, cfg, Parallelism::Auto)
}

/// [`run_specs`] with an explicit evaluation strategy (used by the
/// parallel-versus-sequential benchmarks).
pub fn run_specs_with(
    specs: &[InequalitySpec],
    funcs: &[NamedFunction],
    cfg: &RunConfig,
    mode: Parallelism,
) -> Result<Vec<CheckReport>> {
    let hash = cfg.fingerprint();
    // Compile plans up front; hypothesis violations become spec_error
    // placeholders evaluated over zero jobs.
    let mut plans: Vec<std::result::Result<CheckPlan, String>> = Vec::new();
    for spec in specs {
        match build_plan(spec) {
            Ok(p) => plans.push(Ok(p)),
            Err(Error::Hypothesis(msg)) | Err(Error::Domain(msg)) => plans.push(Err(msg)),
            Err(e) => return Err(e),
        }
    }
    let mut jobs = Vec::new();
    for (si, plan) in plans.iter().enumerate() {
        if plan.is_ok() {
            for fi in 0..funcs.len() {
                jobs.push((si, fi));
            }
        }
    }
    let eval = |&(si, fi): &(usize, usize)| -> Result<(usize, CheckRow)> {
        let plan = plans[si].as_ref().expect("jobs only reference built plans");
        let f = &funcs[fi];
        let lhs = side_value(&plan.lhs, &f.f, plan.spec.n, &cfg.quad)?;
        let rhs = side_value(&plan.rhs, &f.f, plan.spec.n, &cfg.quad)?;
        Ok((si, CheckRow::new(&f.name, lhs, rhs)))
    };
    let evaluated = match mode {
        #[cfg(feature = "parallel")]
        Parallelism::Auto => jobs.par_iter().map(eval).collect::<Result<Vec<_>>>()?,
        #[cfg(not(feature = "parallel"))]
        Parallelism::Auto => jobs.iter().map(eval).collect::<Result<Vec<_>>>()?,
        Parallelism::Sequential => jobs.iter().map(eval).collect::<Result<Vec<_>>>()?,
    };

    let mut grouped: Vec<Vec<CheckRow>> = vec![Vec::new(); specs.len()];
    for (si, row) in evaluated {
        grouped[si].push(row);
    }
    let mut reports = Vec::new();
    for ((spec, plan), rows) in specs.iter().zip(plans).zip(grouped) {
        let tol = spec.tolerance.unwrap_or(cfg.check_tolerance);
        match plan {
            Err(msg) => {
                reports.push(spec_error_report(
                    spec.label(),
                    spec.n,
                    tol,
                    &msg,
                    hash.clone(),
                ));
            }
            Ok(plan) => {
                let verdict = if funcs.is_empty() {
                    Verdict::SpecError
                } else if rows.iter().all(|r| r.rel_deficit >= -tol) {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                reports.push(CheckReport {
                    spec: format!("{} tol={tol:e}", plan.describe),
                    n: spec.n,
                    tolerance: tol,
                    rows,
                    verdict,
                    config_hash: hash.clone(),
                });
            }
        }
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Emission: JSON and CSV with pinned schemas.
// ---------------------------------------------------------------------------

/// Report output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<ReportFormat> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Domain(format!(
                "unknown format {s:?}; expected json or csv"
            ))),
        }
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// 17-significant-digit decimal form (round-trips every f64).
fn num17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a report as a JSON object with the pinned schema
/// `{meta:{version,n,spec,config_hash}, rows:[{func,lhs,rhs,deficit,rel_deficit}], verdict}`.
pub fn render_json(report: &CheckReport) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"meta\":{{\"version\":\"{}\",\"n\":{},\"spec\":\"{}\",\"config_hash\":\"{}\"}},\"rows\":[",
        json_escape(REPORT_VERSION),
        report.n,
        json_escape(&report.spec),
        json_escape(&report.config_hash),
    );
    for (i, row) in report.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"func\":\"{}\",\"lhs\":{},\"rhs\":{},\"deficit\":{},\"rel_deficit\":{}}}",
            json_escape(&row.func),
            num17(row.lhs),
            num17(row.rhs),
            num17(row.deficit),
            num17(row.rel_deficit),
        );
    }
    let _ = write!(out, "],\"verdict\":\"{}\"}}", report.verdict.as_str());
    out.push('\n');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render a report as CSV with header exactly
/// `func,lhs,rhs,deficit,rel_deficit`.
pub fn render_csv(report: &CheckReport) -> String {
    let mut out = String::from("func,lhs,rhs,deficit,rel_deficit\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&row.func),
            num17(row.lhs),
            num17(row.rhs),
            num17(row.deficit),
            num17(row.rel_deficit),
        );
    }
    out
}

/// Write a report to `path` in the chosen format.
pub fn emit_report(report: &CheckReport, format: ReportFormat, path: &str) -> Result<()> {
    let text = match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_csv(report),
    };
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_calculus::library::smooth_bump;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn one_bump() -> Vec<NamedFunction> {
        vec![NamedFunction {
            name: "smooth_bump[1,3]".into(),
            f: smooth_bump(1.0, 3.0).unwrap(),
        }]
    }

    #[test]
    fn main_poincare_deficit_positive() {
        let spec = InequalitySpec::new(InequalityId::main_poincare, 4).with_kl(1, 0);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.rows.len(), 1);
        assert!(report.rows[0].deficit > 0.0, "{:?}", report.rows[0]);
    }

    #[test]
    fn th1_at_n3_alpha0_reduces_to_quarter_hardy() {
        // Third coefficient vanishes: lhs − rhs = ∫|∇u|² − ∫u² − (1/4)∫u²/r².
        let spec = InequalitySpec::new(InequalityId::th1, 3).with_alpha(0);
        let plan = build_plan(&spec).unwrap();
        assert_eq!(plan.rhs.len(), 3);
        assert_eq!(plan.rhs[2].coeff, 0.0);
        assert_eq!(plan.rhs[1].coeff, 1.0);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.rows[0].deficit > 0.0);
    }

    #[test]
    fn zero_function_passes_with_zero_deficits() {
        let zero = vec![NamedFunction {
            name: "zero".into(),
            f: Arc::new(
                crate::radial_calculus::library::Piecewise::constant_on(0.0, 1.0, 2.0).unwrap(),
            ),
        }];
        let spec = InequalitySpec::new(InequalityId::th3, 5).with_alpha(1);
        let report = check_inequality(&spec, &zero, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.rows[0].deficit, 0.0);
        assert_eq!(report.rows[0].rel_deficit, 0.0);
    }

    #[test]
    fn hypothesis_violation_is_spec_error() {
        // th4 needs alpha < n − 4.
        let spec = InequalitySpec::new(InequalityId::th4, 9).with_alpha(5);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::SpecError);
        assert!(report.rows.is_empty());
        assert!(report.spec.contains("spec_error"), "{}", report.spec);
        // Missing parameters are spec errors too.
        let spec = InequalitySpec::new(InequalityId::th1, 9);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::SpecError);
        // Empty function list.
        let spec = InequalitySpec::new(InequalityId::lemma3, 5);
        let report = check_inequality(&spec, &[], &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::SpecError);
    }

    #[test]
    fn suite_isolates_spec_errors() {
        let specs = vec![
            InequalitySpec::new(InequalityId::th4, 9).with_alpha(5), // inadmissible
            InequalitySpec::new(InequalityId::mu_bound, 9),
        ];
        let reports = run_specs(&specs, &one_bump(), &cfg()).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].verdict, Verdict::SpecError);
        assert_eq!(reports[1].verdict, Verdict::Pass);
    }

    #[test]
    fn lemma5_sides_match_closed_square_expansion() {
        // The two sides differ exactly by the partial-integration
        // inequality, so the deficit must be nonnegative and finite.
        let spec = InequalitySpec::new(InequalityId::lemma5, 9).with_alpha(2);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.rows[0].lhs.is_finite() && report.rows[0].rhs > 0.0);
    }

    #[test]
    fn admissible_enumeration_matches_hypotheses_at_n9() {
        let specs = admissible_specs(&[InequalityId::th1], 9);
        let alphas: Vec<i64> = specs.iter().map(|s| s.alpha.unwrap()).collect();
        assert_eq!(alphas, vec![0, 1, 2, 3, 4, 5]); // 2α < 12
        let specs = admissible_specs(&[InequalityId::lemma5], 9);
        let alphas: Vec<i64> = specs.iter().map(|s| s.alpha.unwrap()).collect();
        assert_eq!(alphas, vec![-2, -1, 0, 1, 2, 3, 4]); // −2 ≤ α < 5
        let specs = admissible_specs(&[InequalityId::lemma6], 9);
        let params: Vec<(i64, i64)> = specs
            .iter()
            .map(|s| (s.alpha.unwrap(), s.beta.unwrap()))
            .collect();
        assert_eq!(params, vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (0, 2)]);
        let specs = admissible_specs(&[InequalityId::D_family], 9);
        let kl: Vec<(u32, u32)> = specs.iter().map(|s| (s.k.unwrap(), s.l.unwrap())).collect();
        assert_eq!(kl, vec![(1, 0), (2, 0), (2, 1)]); // n ≥ 4k−1
    }

    #[test]
    fn json_report_round_trips() {
        let spec = InequalitySpec::new(InequalityId::mu_bound, 4);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        let text = render_json(&report);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["meta"]["version"], REPORT_VERSION);
        assert_eq!(parsed["meta"]["n"], 4);
        assert_eq!(parsed["meta"]["spec"], report.spec);
        assert_eq!(parsed["meta"]["config_hash"], report.config_hash);
        assert_eq!(parsed["verdict"], "pass");
        let rows = parsed["rows"].as_array().unwrap();
        assert_eq!(rows.len(), report.rows.len());
        for (json_row, row) in rows.iter().zip(&report.rows) {
            assert_eq!(json_row["func"], row.func);
            assert_eq!(json_row["lhs"].as_f64().unwrap(), row.lhs);
            assert_eq!(json_row["rhs"].as_f64().unwrap(), row.rhs);
            assert_eq!(json_row["deficit"].as_f64().unwrap(), row.deficit);
            assert_eq!(json_row["rel_deficit"].as_f64().unwrap(), row.rel_deficit);
        }
    }

    #[test]
    fn csv_schema_is_pinned() {
        let spec = InequalitySpec::new(InequalityId::mu_bound, 4);
        let report = check_inequality(&spec, &one_bump(), &cfg()).unwrap();
        let text = render_csv(&report);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("func,lhs,rhs,deficit,rel_deficit"));
        let first = lines.next().unwrap();
        // A func name containing a comma must be quoted.
        assert!(first.starts_with("\"smooth_bump[1,3]\","), "{first}");
        let tail: Vec<&str> = first.rsplit(',').take(4).collect();
        for field in tail {
            let v: f64 = field.parse().unwrap();
            assert!(v.is_finite());
        }
    }

    #[test]
    fn config_overrides_and_fingerprint() {
        let mut a = cfg();
        let b = cfg();
        assert_eq!(a.fingerprint(), b.fingerprint());
        a.set("quad_rel_tol", "1e-9").unwrap();
        a.set("library_seed", "11").unwrap();
        assert_eq!(a.quad.rel_tol, 1e-9);
        assert_eq!(a.library_seed, 11);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert!(a.set("no_such_key", "1").is_err());
        assert!(a.set("quad_abs_tol", "abc").is_err());
    }

    #[test]
    fn determinism_identical_runs_bit_identical() {
        let spec = InequalitySpec::new(InequalityId::cor1, 5).with_alpha(1);
        let lib = default_library(7);
        let r1 = check_inequality(&spec, &lib, &cfg()).unwrap();
        let r2 = check_inequality(&spec, &lib, &cfg()).unwrap();
        assert_eq!(render_json(&r1), render_json(&r2));
        for (a, b) in r1.rows.iter().zip(&r2.rows) {
            assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
            assert_eq!(a.rhs.to_bits(), b.rhs.to_bits());
        }
    }
}
