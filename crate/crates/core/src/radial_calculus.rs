//! Radial functions on `H^N` as jet-evaluable objects, and the radial
//! differential operators built on them.
//!
//! A [`RadialJetFunction`] can report its Taylor expansion at any point of
//! its domain. Operators (radial gradient, radial Laplacian, iterated
//! gradients) wrap a function and are themselves jet-evaluable, so they
//! compose. The [`library`] submodule provides admissible test functions.

pub mod jet;
pub mod library;

use crate::hypgeom;
use crate::{Error, Result};
use jet::{coth_jet, Jet};
use std::sync::Arc;

/// Shared handle to a radial function.
pub type RadialFn = Arc<dyn RadialJetFunction>;

/// A radial function evaluable together with its derivatives.
///
/// Implementations must return *zero jets* outside the closure of their
/// support, and must list every point where smoothness can fail in
/// [`breakpoints`](RadialJetFunction::breakpoints) so that quadrature never
/// integrates across a kink.
pub trait RadialJetFunction: Send + Sync {
    /// Taylor expansion (normalized coefficients) at `r`, truncated at
    /// `order`. For piecewise functions evaluated exactly at a breakpoint,
    /// the expansion of the right-hand piece is returned.
    fn taylor(&self, r: f64, order: usize) -> Jet;

    /// Closed support interval `[a, b]` (with `b = ∞` allowed). The
    /// function vanishes identically outside it.
    fn support(&self) -> (f64, f64);

    /// Sorted interior points where the function changes analytic piece.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// For functions of the form `r ↦ p(G(r))` (a profile of the enclosed
    /// volume lifted to `H^n`), the underlying profile and the dimension.
    /// Lets volume-space integrators avoid the change of variables.
    fn volume_profile(&self) -> Option<(RadialFn, u32)> {
        None
    }

    /// Derivatives `[u(r), u'(r), …, u^(order)(r)]`.
    fn eval_jet(&self, r: f64, order: usize) -> Vec<f64> {
        self.taylor(r, order).derivatives()
    }

    /// Plain value.
    fn value(&self, r: f64) -> f64 {
        self.taylor(r, 0).value()
    }
}

/// `true` if `r` lies strictly outside the support of `f`.
pub fn outside_support(f: &dyn RadialJetFunction, r: f64) -> bool {
    let (a, b) = f.support();
    r < a || r > b
}

/// Radial gradient `|∇_r u| = u'` as a function (signed derivative).
struct GradR {
    inner: RadialFn,
}

impl RadialJetFunction for GradR {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        self.inner
            .taylor(r, order + 1)
            .derivative_jet()
            .resized(order)
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// Radial Laplacian `Δ_r u = u'' + (n−1) coth(r) · u'`.
struct LaplaceR {
    inner: RadialFn,
    n: u32,
}

impl RadialJetFunction for LaplaceR {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        let u = self.inner.taylor(r, order + 2);
        let du = u.derivative_jet(); // order + 1
        let d2u = du.derivative_jet(); // order
        let coth = coth_jet(r, order);
        d2u.resized(order)
            .add(&coth.mul(&du.resized(order)).scale(self.n as f64 - 1.0))
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

/// Pointwise product of two radial functions (jets multiply).
pub struct ProductFn {
    pub a: RadialFn,
    pub b: RadialFn,
}

impl RadialJetFunction for ProductFn {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        self.a.taylor(r, order).mul(&self.b.taylor(r, order))
    }
    fn support(&self) -> (f64, f64) {
        // Support of the product is contained in the intersection.
        let (a1, b1) = self.a.support();
        let (a2, b2) = self.b.support();
        (a1.max(a2), b1.min(b2))
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.a.breakpoints();
        pts.extend(self.b.breakpoints());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
    fn volume_profile(&self) -> Option<(RadialFn, u32)> {
        // A product of two lifts of profiles is the lift of the product.
        let (pa, na) = self.a.volume_profile()?;
        let (pb, nb) = self.b.volume_profile()?;
        if na != nb {
            return None;
        }
        Some((Arc::new(ProductFn { a: pa, b: pb }) as RadialFn, na))
    }
}

/// `c · f` as a jet-evaluable function. Scaling by an exact power of two
/// leaves every quadrature decision unchanged, so Rayleigh quotients of
/// `c·f` and `f` agree bit for bit.
struct ScaledFn {
    inner: RadialFn,
    c: f64,
}

impl RadialJetFunction for ScaledFn {
    fn taylor(&self, r: f64, order: usize) -> Jet {
        self.inner.taylor(r, order).scale(self.c)
    }
    fn support(&self) -> (f64, f64) {
        self.inner.support()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
    fn volume_profile(&self) -> Option<(RadialFn, u32)> {
        let (p, n) = self.inner.volume_profile()?;
        Some((
            Arc::new(ScaledFn {
                inner: p,
                c: self.c,
            }) as RadialFn,
            n,
        ))
    }
}

/// Constant multiple `c · f`.
pub fn scale_fn(f: &RadialFn, c: f64) -> RadialFn {
    Arc::new(ScaledFn {
        inner: f.clone(),
        c,
    })
}

/// Radial gradient as a jet-evaluable function.
pub fn grad_r(u: &RadialFn) -> RadialFn {
    Arc::new(GradR { inner: u.clone() })
}

/// Radial Laplacian `Δ_r u = u'' + (n−1) coth(r) u'` as a jet-evaluable
/// function.
pub fn laplace_r(u: &RadialFn, n: u32) -> Result<RadialFn> {
    if n < hypgeom::MIN_DIMENSION {
        return Err(Error::Domain(format!(
            "laplace_r needs n >= {}, got {n}",
            hypgeom::MIN_DIMENSION
        )));
    }
    Ok(Arc::new(LaplaceR {
        inner: u.clone(),
        n,
    }))
}

/// Iterated radial gradient `∇_r^k`:
/// identity for `k = 0`, `Δ_r^{k/2}` for even `k`, and `∇_r Δ_r^{(k−1)/2}`
/// for odd `k`.
pub fn nabla_r_k(u: &RadialFn, k: u32, n: u32) -> Result<RadialFn> {
    if n < hypgeom::MIN_DIMENSION {
        return Err(Error::Domain(format!(
            "nabla_r_k needs n >= {}, got {n}",
            hypgeom::MIN_DIMENSION
        )));
    }
    let mut f = u.clone();
    for _ in 0..k / 2 {
        f = laplace_r(&f, n)?;
    }
    if k % 2 == 1 {
        f = grad_r(&f);
    }
    Ok(f)
}

/// Residual of the pointwise identity
/// `Δ_r(u²) = 2 u Δ_r u + 2 |∇_r u|²` at radius `r`.
///
/// The left side is computed through the generic operator pipeline applied
/// to the product function `u²`; the right side directly from the jet of
/// `u`. Returns `(residual, scale)` where `scale` bounds the magnitudes of
/// the combined terms; the identity holds when
/// `|residual| ≤ tol · max(1, scale)`.
pub fn square_identity_check(u: &RadialFn, n: u32, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "square_identity_check needs r > 0, got {r}"
        )));
    }
    let u2: RadialFn = Arc::new(ProductFn {
        a: u.clone(),
        b: u.clone(),
    });
    let lhs = laplace_r(&u2, n)?.value(r);
    let jet = u.taylor(r, 2);
    let (v, d1, d2) = (jet.derivative(0), jet.derivative(1), jet.derivative(2));
    let lap_u = d2 + (n as f64 - 1.0) * hypgeom::coth(r)? * d1;
    let rhs = 2.0 * v * lap_u + 2.0 * d1 * d1;
    let scale = lhs
        .abs()
        .max((2.0 * v * lap_u).abs())
        .max((2.0 * d1 * d1).abs());
    Ok((lhs - rhs, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use jet::cosh_jet;

    /// cosh(r) as a RadialJetFunction on (0, ∞) — eigenfunction sanity
    /// cases for the Laplacian (not admissible for integrals).
    struct CoshFn;
    impl RadialJetFunction for CoshFn {
        fn taylor(&self, r: f64, order: usize) -> Jet {
            cosh_jet(r, order)
        }
        fn support(&self) -> (f64, f64) {
            (0.0, f64::INFINITY)
        }
    }

    /// r² as a RadialJetFunction.
    struct RSquared;
    impl RadialJetFunction for RSquared {
        fn taylor(&self, r: f64, order: usize) -> Jet {
            let x = Jet::variable(r, order);
            x.mul(&x)
        }
        fn support(&self) -> (f64, f64) {
            (0.0, f64::INFINITY)
        }
    }

    #[test]
    fn laplacian_of_cosh_is_n_cosh() {
        // Δ_r cosh = cosh + (n−1) coth · sinh = n cosh (since coth·sinh = cosh)
        let u: RadialFn = Arc::new(CoshFn);
        for n in [3u32, 5, 9] {
            let lap = laplace_r(&u, n).unwrap();
            for &r in &[0.3f64, 1.0, 2.7] {
                let expect = n as f64 * r.cosh();
                let got = lap.value(r);
                assert!(
                    (got - expect).abs() <= 1e-12 * expect.abs(),
                    "n = {n}, r = {r}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn laplacian_of_r_squared() {
        // Δ_r r² = 2 + 2(n−1) r coth r
        let u: RadialFn = Arc::new(RSquared);
        let lap = laplace_r(&u, 4).unwrap();
        for &r in &[0.2f64, 1.0, 3.0] {
            let expect = 2.0 + 2.0 * 3.0 * r / r.tanh();
            let got = lap.value(r);
            assert!(
                (got - expect).abs() <= 1e-12 * expect.abs(),
                "r = {r}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn nabla_k_parities() {
        let u: RadialFn = Arc::new(CoshFn);
        // k = 0 is the identity
        let id = nabla_r_k(&u, 0, 5).unwrap();
        assert!((id.value(1.1) - 1.1f64.cosh()).abs() < 1e-14);
        // k = 1 is the gradient: sinh
        let g = nabla_r_k(&u, 1, 5).unwrap();
        assert!((g.value(1.1) - 1.1f64.sinh()).abs() < 1e-13);
        // k = 2 is the Laplacian: n cosh
        let l = nabla_r_k(&u, 2, 5).unwrap();
        assert!((l.value(1.1) - 5.0 * 1.1f64.cosh()).abs() < 1e-12);
        // k = 3: ∇ Δ = (n cosh)' = n sinh
        let l3 = nabla_r_k(&u, 3, 5).unwrap();
        assert!((l3.value(1.1) - 5.0 * 1.1f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn square_identity_holds() {
        let u: RadialFn = Arc::new(CoshFn);
        for &r in &[0.5, 1.0, 2.0] {
            let (res, scale) = square_identity_check(&u, 6, r).unwrap();
            assert!(
                res.abs() <= 1e-10 * scale.max(1.0),
                "r = {r}: residual {res}, scale {scale}"
            );
        }
    }
}
