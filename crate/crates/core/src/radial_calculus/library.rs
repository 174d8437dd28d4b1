//! Admissible test functions: compactly supported radial profiles with
//! jet evaluation, plus a piecewise combinator used by the extremising
//! sequences.

use super::jet::{monomial_jet, Jet};
use super::{RadialFn, RadialJetFunction};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Below this value of `(r−a)(b−r)` a smooth bump is numerically zero
/// (`exp(−1/q)` underflows long before); returning an exact zero jet
/// avoids inf·0 in the series recurrences.
const BUMP_Q_FLOOR: f64 = 1e-30;

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "need 0 <= a < b, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Jet of the downward parabola `q(r) = (r−a)(b−r)` at `r`.
fn parabola_jet(a: f64, b: f64, r: f64, order: usize) -> Jet {
    let mut coeffs = vec![0.0; order + 1];
    coeffs[0] = (r - a) * (b - r);
    if order >= 1 {
        coeffs[1] = a + b - 2.0 * r;
    }
    if order >= 2 {
        coeffs[2] = -1.0;
    }
    Jet::from_coeffs(coeffs)
}

/// `exp(4/(b−a)² − 1/((r−a)(b−r)))` on `(a, b)`, zero outside; peak value 1.
struct SmoothBump {
    a: f64,
    b: f64,
}

impl RadialJetFunction for SmoothBump {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let q = parabola_jet(self.a, self.b, r, order);
        if q.value() < BUMP_Q_FLOOR {
            return Jet::zero(order);
        }
        let c = 4.0 / ((self.b - self.a) * (self.b - self.a));
        Jet::constant(c, order).sub(&q.recip()).exp()
    }
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// `[(r−a)(b−r) / ((b−a)/2)²]^d` on `(a, b)`, zero outside; `C^{d−1}`.
struct PolyBump {
    degree: u32,
    a: f64,
    b: f64,
}

impl RadialJetFunction for PolyBump {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let q = parabola_jet(self.a, self.b, r, order);
        if q.value() <= 0.0 {
            return Jet::zero(order);
        }
        let half = 0.5 * (self.b - self.a);
        q.scale(1.0 / (half * half)).powi(self.degree)
    }
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// `exp(−((r−center)/width)²)` multiplied by the smooth bump on `(a, b)`.
struct GaussianWindow {
    center: f64,
    width: f64,
    a: f64,
    b: f64,
}

impl RadialJetFunction for GaussianWindow {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let q = parabola_jet(self.a, self.b, r, order);
        if q.value() < BUMP_Q_FLOOR {
            return Jet::zero(order);
        }
        let c = 4.0 / ((self.b - self.a) * (self.b - self.a));
        let bump = Jet::constant(c, order).sub(&q.recip()).exp();
        // Gaussian exponent −((r−center)/width)² as an order-2 polynomial jet.
        let w2 = self.width * self.width;
        let d = r - self.center;
        let mut e = vec![0.0; order + 1];
        e[0] = -d * d / w2;
        if order >= 1 {
            e[1] = -2.0 * d / w2;
        }
        if order >= 2 {
            e[2] = -1.0 / w2;
        }
        Jet::from_coeffs(e).exp().mul(&bump)
    }
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Smooth bump modulated by a random Chebyshev polynomial
/// `1 + Σ_{i=1}^{4} c_i T_i(x)`, `x` the affine map of `(a,b)` to `(−1,1)`.
struct OscillatingBump {
    a: f64,
    b: f64,
    cheb: [f64; 4],
}

impl RadialJetFunction for OscillatingBump {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let q = parabola_jet(self.a, self.b, r, order);
        if q.value() < BUMP_Q_FLOOR {
            return Jet::zero(order);
        }
        let c = 4.0 / ((self.b - self.a) * (self.b - self.a));
        let bump = Jet::constant(c, order).sub(&q.recip()).exp();
        // x(r) = (2r − a − b)/(b − a)
        let scale = 2.0 / (self.b - self.a);
        let mut xc = vec![0.0; order + 1];
        xc[0] = (2.0 * r - self.a - self.b) / (self.b - self.a);
        if order >= 1 {
            xc[1] = scale;
        }
        let x = Jet::from_coeffs(xc);
        // Chebyshev recurrence on jets.
        let mut poly = Jet::constant(1.0, order);
        let mut t_prev = Jet::constant(1.0, order);
        let mut t_cur = x.clone();
        for &ci in &self.cheb {
            poly = poly.add(&t_cur.scale(ci));
            let t_next = x.mul(&t_cur).scale(2.0).sub(&t_prev);
            t_prev = t_cur;
            t_cur = t_next;
        }
        poly.mul(&bump)
    }
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// One analytic piece of a [`Piecewise`] function.
#[derive(Debug, Clone)]
pub enum Piece {
    /// Identically zero.
    Zero,
    /// Constant value.
    Const(f64),
    /// `c · t^p` (real exponent; the piece must live on `t > 0`).
    Monomial { c: f64, p: f64 },
    /// `c0 + c1 · t`.
    Affine { c0: f64, c1: f64 },
}

impl Piece {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        match *self {
            Piece::Zero => Jet::zero(order),
            Piece::Const(c) => Jet::constant(c, order),
            Piece::Monomial { c, p } => monomial_jet(c, p, t, order),
            Piece::Affine { c0, c1 } => {
                let mut coeffs = vec![0.0; order + 1];
                coeffs[0] = c0 + c1 * t;
                if order >= 1 {
                    coeffs[1] = c1;
                }
                Jet::from_coeffs(coeffs)
            }
        }
    }
}

/// Piecewise-analytic function: piece `i` applies on
/// `[starts[i], starts[i+1])`, the last piece up to `end`; zero outside
/// `[starts[0], end)`. Evaluation exactly at a breakpoint uses the
/// right-hand piece.
pub struct Piecewise {
    starts: Vec<f64>,
    pieces: Vec<Piece>,
    end: f64,
}

impl Piecewise {
    pub fn new(segments: Vec<(f64, Piece)>, end: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("piecewise needs at least one piece".into()));
        }
        let starts: Vec<f64> = segments.iter().map(|s| s.0).collect();
        if !starts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain(
                "piecewise breakpoints must be strictly increasing".into(),
            ));
        }
        if end <= *starts.last().unwrap() {
            return Err(Error::Domain(
                "piecewise end must exceed the last breakpoint".into(),
            ));
        }
        Ok(Piecewise {
            starts,
            pieces: segments.into_iter().map(|s| s.1).collect(),
            end,
        })
    }

    /// Constant `c` on `[a, b)`, zero elsewhere.
    pub fn constant_on(c: f64, a: f64, b: f64) -> Result<Self> {
        check_interval(a, b)?;
        Piecewise::new(vec![(a, Piece::Const(c))], b)
    }
}

impl RadialJetFunction for Piecewise {
    fn taylor(&self, t: f64, order: usize) -> Jet {
        if t < self.starts[0] || t >= self.end {
            return Jet::zero(order);
        }
        let idx = self.starts.partition_point(|&s| s <= t) - 1;
        self.pieces[idx].taylor(t, order)
    }
    fn support(&self) -> (f64, f64) {
        (self.starts[0], self.end)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.starts[1..].to_vec()
    }
}

/// Smooth bump with unit peak on `(a, b)`.
pub fn smooth_bump(a: f64, b: f64) -> Result<RadialFn> {
    check_interval(a, b)?;
    Ok(Arc::new(SmoothBump { a, b }))
}

/// Polynomial bump `[q/q_max]^degree` on `(a, b)`; `degree ≥ 5` keeps it
/// `C^4`, enough for the fourth-order operators.
pub fn poly_bump(degree: u32, a: f64, b: f64) -> Result<RadialFn> {
    check_interval(a, b)?;
    if degree < 1 {
        return Err(Error::Domain("poly_bump needs degree >= 1".into()));
    }
    Ok(Arc::new(PolyBump { degree, a, b }))
}

/// Gaussian of the given center/width, cut off smoothly to `(a, b)`.
pub fn gaussian_window(center: f64, width: f64, a: f64, b: f64) -> Result<RadialFn> {
    check_interval(a, b)?;
    if !(width > 0.0) {
        return Err(Error::Domain("gaussian_window needs width > 0".into()));
    }
    Ok(Arc::new(GaussianWindow {
        center,
        width,
        a,
        b,
    }))
}

/// Sign-indefinite oscillating bump with seeded Chebyshev modulation.
pub fn oscillating_bump(a: f64, b: f64, seed: u64) -> Result<RadialFn> {
    check_interval(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cheb = [0.0; 4];
    for c in &mut cheb {
        *c = rng.gen_range(-0.9..0.9);
    }
    Ok(Arc::new(OscillatingBump { a, b, cheb }))
}

/// A named test function.
pub struct NamedFunction {
    pub name: String,
    pub f: RadialFn,
}

/// The default verification library: twelve admissible radial functions on
/// three scales (near the origin, unit scale, far field), mixing infinitely
/// smooth, finitely smooth, concentrated, and sign-indefinite profiles.
pub fn default_library(seed: u64) -> Vec<NamedFunction> {
    let spans = [(0.1, 1.0), (1.0, 4.0), (5.0, 10.0)];
    let mut out = Vec::new();
    for &(a, b) in &spans {
        out.push(NamedFunction {
            name: format!("smooth_bump[{a},{b}]"),
            f: smooth_bump(a, b).expect("valid interval"),
        });
    }
    for (i, &(a, b)) in spans.iter().enumerate() {
        let degree = [5u32, 6, 8][i];
        out.push(NamedFunction {
            name: format!("poly_bump{degree}[{a},{b}]"),
            f: poly_bump(degree, a, b).expect("valid interval"),
        });
    }
    let centers = [(0.5, 0.15), (2.5, 0.8), (7.0, 1.5)];
    for (&(a, b), &(c, w)) in spans.iter().zip(&centers) {
        out.push(NamedFunction {
            name: format!("gauss[{c},{w}]x[{a},{b}]"),
            f: gaussian_window(c, w, a, b).expect("valid parameters"),
        });
    }
    for (i, &(a, b)) in spans.iter().enumerate() {
        out.push(NamedFunction {
            name: format!("osc{i}[{a},{b}]"),
            f: oscillating_bump(a, b, seed.wrapping_add(i as u64)).expect("valid interval"),
        });
    }
    out
}
