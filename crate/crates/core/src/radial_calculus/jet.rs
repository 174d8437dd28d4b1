//! Truncated Taylor-series ("jet") arithmetic at a point.
//!
//! A [`Jet`] stores the normalized Taylor coefficients
//! `c_k = f^(k)(r) / k!` of a function about some base point, up to a fixed
//! truncation order. Arithmetic on jets implements the usual operations on
//! truncated power series, which is exactly differentiation through the
//! chain/product rules to arbitrary order without symbolic manipulation or
//! finite-difference noise.
//!
//! All derivative computations in the crate (radial gradients, Laplacians,
//! lifts through the volume change of variables) reduce to jet arithmetic.

/// Truncated Taylor expansion `f(x0 + h) = Σ_k coeffs[k] · h^k + O(h^{m+1})`.
///
/// `coeffs.len() == order + 1`; `coeffs[k]` is the *normalized* coefficient
/// `f^(k)(x0)/k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    /// Jet of the constant function `c`.
    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// Jet of the identity map `x ↦ x` expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs }
    }

    /// Jet with explicitly given normalized coefficients.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the value slot");
        Jet { coeffs }
    }

    /// Identically-zero jet.
    pub fn zero(order: usize) -> Self {
        Jet {
            coeffs: vec![0.0; order + 1],
        }
    }

    /// Truncation order (highest represented derivative).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Normalized coefficient `f^(k)/k!` (zero beyond the truncation order).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Un-normalized derivative `f^(k)(x0) = k! · c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k)
    }

    /// All derivatives `[f, f', …, f^(order)]` at the base point.
    pub fn derivatives(&self) -> Vec<f64> {
        (0..=self.order()).map(|k| self.derivative(k)).collect()
    }

    /// Copy truncated (or zero-extended) to the given order.
    pub fn resized(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        coeffs.truncate(order + 1);
        Jet { coeffs }
    }

    /// Jet of the derivative `f'`, one order lower (order 0 maps to order 0).
    pub fn derivative_jet(&self) -> Jet {
        let m = self.order();
        if m == 0 {
            return Jet::zero(0);
        }
        let coeffs = (1..=m).map(|k| k as f64 * self.coeffs[k]).collect();
        Jet { coeffs }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Jet) -> Jet {
        let order = self.order().max(other.order());
        let coeffs = (0..=order)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        Jet { coeffs }
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Jet) -> Jet {
        let order = self.order().max(other.order());
        let coeffs = (0..=order)
            .map(|k| self.coeff(k) - other.coeff(k))
            .collect();
        Jet { coeffs }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Truncated Cauchy product (product rule to all orders).
    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        let mut coeffs = vec![0.0; order + 1];
        for k in 0..=order {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.coeff(j) * other.coeff(k - j);
            }
            coeffs[k] = acc;
        }
        Jet { coeffs }
    }

    /// Reciprocal series `1/f`; requires `f(x0) != 0`.
    pub fn recip(&self) -> Jet {
        let m = self.order();
        let f0 = self.coeffs[0];
        assert!(f0 != 0.0, "reciprocal of a jet with zero value");
        let mut g = vec![0.0; m + 1];
        g[0] = 1.0 / f0;
        for k in 1..=m {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.coeffs[j] * g[k - j];
            }
            g[k] = -acc / f0;
        }
        Jet { coeffs: g }
    }

    /// Quotient `self / other`; requires `other(x0) != 0`.
    pub fn div(&self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        let b0 = other.coeff(0);
        assert!(b0 != 0.0, "division by a jet with zero value");
        let mut c = vec![0.0; order + 1];
        for k in 0..=order {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                acc -= other.coeff(j) * c[k - j];
            }
            c[k] = acc / b0;
        }
        Jet { coeffs: c }
    }

    /// Exponential `exp(f)` via the standard convolution recurrence
    /// `g' = f'·g  ⇒  k·g_k = Σ_{j=1..k} j·f_j·g_{k−j}`.
    pub fn exp(&self) -> Jet {
        let m = self.order();
        let mut g = vec![0.0; m + 1];
        g[0] = self.coeffs[0].exp();
        for k in 1..=m {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * g[k - j];
            }
            g[k] = acc / k as f64;
        }
        Jet { coeffs: g }
    }

    /// Integer power by repeated multiplication (`n ≥ 0`).
    pub fn powi(&self, n: u32) -> Jet {
        let mut result = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = n;
        loop {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result
    }

    /// Real power `f^p`; requires `f(x0) > 0`.
    ///
    /// Uses `g = f^p ⇒ f·g' = p·f'·g`, i.e.
    /// `k·f_0·g_k = Σ_{j=1..k} (p·j − (k−j))·f_j·g_{k−j}`.
    pub fn powf(&self, p: f64) -> Jet {
        let m = self.order();
        let f0 = self.coeffs[0];
        assert!(f0 > 0.0, "real power of a jet with non-positive value");
        let mut g = vec![0.0; m + 1];
        g[0] = f0.powf(p);
        for k in 1..=m {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * self.coeffs[j] * g[k - j];
            }
            g[k] = acc / (k as f64 * f0);
        }
        Jet { coeffs: g }
    }

    /// Composition `outer ∘ inner`, where `outer` is expanded at
    /// `inner.value()`. Evaluated by Horner's scheme in the deviation
    /// `inner − inner(x0)` (whose constant term vanishes).
    pub fn compose(outer: &Jet, inner: &Jet) -> Jet {
        let order = inner.order().min(outer.order());
        let mut dev = inner.resized(order);
        dev.coeffs[0] = 0.0;
        let mut result = Jet::constant(outer.coeff(order), order);
        for k in (0..order).rev() {
            result = result.mul(&dev);
            result.coeffs[0] += outer.coeff(k);
        }
        result
    }
}

/// `sinh` expanded at `x`, to the given order.
pub fn sinh_jet(x: f64, order: usize) -> Jet {
    let (s, c) = (x.sinh(), x.cosh());
    cycle_jet(s, c, order)
}

/// `cosh` expanded at `x`, to the given order.
pub fn cosh_jet(x: f64, order: usize) -> Jet {
    let (s, c) = (x.sinh(), x.cosh());
    cycle_jet(c, s, order)
}

/// Series with derivative cycle `v, w, v, w, …`: covers sinh/cosh.
fn cycle_jet(v: f64, w: f64, order: usize) -> Jet {
    let mut coeffs = vec![0.0; order + 1];
    let mut fact = 1.0;
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *c = if k % 2 == 0 { v } else { w } / fact;
    }
    Jet::from_coeffs(coeffs)
}

/// `coth` expanded at `x > 0`, to the given order.
pub fn coth_jet(x: f64, order: usize) -> Jet {
    assert!(x > 0.0, "coth jet needs a strictly positive base point");
    if x > 20.0 {
        // cosh/sinh agree to machine precision; coth ≡ 1 + O(e^{−2x})
        // with derivatives below the f64 noise floor of the quotient.
        let mut j = Jet::zero(order);
        j.coeffs[0] = 1.0 / x.tanh();
        return j;
    }
    cosh_jet(x, order).div(&sinh_jet(x, order))
}

/// Jet of the monomial `c · x^p` (real exponent) at `x0 > 0`:
/// `c_k = c · binom(p, k) · x0^{p−k}`.
pub fn monomial_jet(c: f64, p: f64, x0: f64, order: usize) -> Jet {
    assert!(x0 > 0.0, "monomial jet needs a positive base point");
    let mut coeffs = vec![0.0; order + 1];
    let mut binom = 1.0; // binom(p, k), updated multiplicatively
    for (k, out) in coeffs.iter_mut().enumerate() {
        if k > 0 {
            binom *= (p - (k as f64 - 1.0)) / k as f64;
        }
        *out = c * binom * x0.powf(p - k as f64);
    }
    Jet::from_coeffs(coeffs)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER: usize = 8;

    /// Central finite difference of order `k` for the oracle checks.
    fn central_diff(f: impl Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
        match k {
            0 => f(x),
            1 => (f(x + h) - f(x - h)) / (2.0 * h),
            2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            3 => {
                (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h))
                    / (2.0 * h * h * h)
            }
            _ => panic!("oracle supports k <= 3"),
        }
    }

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        let scale = a.abs().max(b.abs()).max(1.0);
        assert!(
            (a - b).abs() <= tol * scale,
            "{what}: {a} vs {b} (tol {tol})"
        );
    }

    #[test]
    fn arithmetic_against_finite_differences() {
        // f(x) = exp(sin-free smooth combo): (x^2 + 1) * exp(x) / cosh(x)
        let f = |x: f64| (x * x + 1.0) * x.exp() / x.cosh();
        let x0 = 0.7;
        let jx = Jet::variable(x0, ORDER);
        let jet = jx
            .mul(&jx)
            .add(&Jet::constant(1.0, ORDER))
            .mul(&jx.exp())
            .div(&cosh_jet(x0, ORDER));
        // Step sizes balance the O(h²) truncation against the f64
        // roundoff of the stencil, which grows like eps/h^k.
        for (k, h, tol) in [
            (0, 1e-5, 1e-14),
            (1, 1e-5, 1e-9),
            (2, 1e-4, 1e-6),
            (3, 1e-3, 1e-5),
        ] {
            let fd = central_diff(f, x0, k, h);
            assert_close(jet.derivative(k), fd, tol, &format!("derivative {k}"));
        }
    }

    #[test]
    fn reciprocal_and_division_are_consistent() {
        let j = sinh_jet(1.3, ORDER).add(&Jet::constant(2.0, ORDER));
        let one = j.mul(&j.recip());
        for k in 0..=ORDER {
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert_close(one.coeff(k), expect, 1e-14, "f * (1/f)");
        }
        let q = sinh_jet(1.3, ORDER).div(&j);
        let q2 = sinh_jet(1.3, ORDER).mul(&j.recip());
        for k in 0..=ORDER {
            assert_close(q.coeff(k), q2.coeff(k), 1e-13, "div vs mul-recip");
        }
    }

    #[test]
    fn powf_matches_powi_and_sqrt() {
        let j = cosh_jet(0.9, ORDER); // positive value
        let a = j.powf(3.0);
        let b = j.powi(3);
        for k in 0..=ORDER {
            assert_close(a.coeff(k), b.coeff(k), 1e-12, "powf(3) vs powi(3)");
        }
        let s = j.powf(0.5);
        let back = s.mul(&s);
        for k in 0..=ORDER {
            assert_close(back.coeff(k), j.coeff(k), 1e-12, "sqrt squared");
        }
    }

    #[test]
    fn composition_chain_rule() {
        // h(x) = exp(sinh(x)); compose exp-jet with sinh-jet.
        let x0 = 0.4;
        let inner = sinh_jet(x0, ORDER);
        let outer = {
            // exp expanded at inner.value()
            let v = inner.value();
            let mut coeffs = vec![0.0; ORDER + 1];
            let mut fact = 1.0;
            for (k, c) in coeffs.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                *c = v.exp() / fact;
            }
            Jet::from_coeffs(coeffs)
        };
        let composed = Jet::compose(&outer, &inner);
        let direct = inner.exp();
        for k in 0..=ORDER {
            assert_close(composed.coeff(k), direct.coeff(k), 1e-12, "compose");
        }
    }

    #[test]
    fn coth_jet_matches_quotient_definition() {
        let x0 = 2.1;
        let j = coth_jet(x0, ORDER);
        assert_close(j.value(), 1.0 / x0.tanh(), 1e-15, "coth value");
        // d/dx coth = 1 - coth^2
        let expect = 1.0 - j.value() * j.value();
        assert_close(j.derivative(1), expect, 1e-12, "coth derivative");
    }

    #[test]
    fn monomial_jet_matches_closed_form() {
        let j = monomial_jet(3.0, -0.5, 4.0, 4);
        // 3 x^{-1/2} at x=4: value 1.5, f' = -3/2 x^{-3/2} = -0.1875
        assert_close(j.value(), 1.5, 1e-15, "monomial value");
        assert_close(j.derivative(1), -0.1875, 1e-15, "monomial d1");
        assert_close(
            j.derivative(2),
            3.0 * 0.75 * 4.0f64.powf(-2.5),
            1e-14,
            "monomial d2",
        );
    }

    #[test]
    fn derivative_jet_shifts_coefficients() {
        let j = sinh_jet(0.8, ORDER);
        let dj = j.derivative_jet();
        let cj = cosh_jet(0.8, ORDER - 1);
        for k in 0..=ORDER - 1 {
            assert_close(dj.coeff(k), cj.coeff(k), 1e-13, "d(sinh) = cosh");
        }
    }
}
