//! First-order differential operators `a·∂ + b` in momentum representation.
//!
//! The position operator is realized as `X_k = i ∂/∂p_k` acting on scalar
//! momentum-space functions. Operators are compared by evaluating all four
//! coefficient functions at sampled momenta.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{Axis, EvalContext, Expr};
use crate::report::IdentityRecord;
use crate::sampling::{stream_rng, SampleDomain};

/// Default tolerance for sampled operator equality.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `a_1 ∂_1 + a_2 ∂_2 + a_3 ∂_3 + b`.
#[derive(Debug, Clone)]
pub struct FirstOrderOp {
    pub a: [Expr; 3],
    pub b: Expr,
}

/// Coefficients of an operator at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpValue {
    pub a: [Complex64; 3],
    pub b: Complex64,
}

impl OpValue {
    /// Largest coefficient modulus of `self - other`.
    pub fn max_diff(&self, other: &OpValue) -> f64 {
        let mut m = (self.b - other.b).norm();
        for k in 0..3 {
            m = m.max((self.a[k] - other.a[k]).norm());
        }
        m
    }
}

impl FirstOrderOp {
    pub fn new(a: [Expr; 3], b: Expr) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::multiplication(Expr::zero())
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: Expr) -> Self {
        Self {
            a: [Expr::zero(), Expr::zero(), Expr::zero()],
            b: f,
        }
    }

    pub fn identity() -> Self {
        Self::multiplication(Expr::one())
    }

    /// `∂/∂p_axis`.
    pub fn partial(axis: Axis) -> Self {
        let mut a = [Expr::zero(), Expr::zero(), Expr::zero()];
        a[axis.index()] = Expr::one();
        Self { a, b: Expr::zero() }
    }

    /// Canonical position `X_k = i ∂/∂p_k`.
    pub fn position(axis: Axis) -> Self {
        Self::partial(axis).scale(Complex64::i())
    }

    /// Multiplication by `p_k`.
    pub fn momentum(axis: Axis) -> Self {
        Self::multiplication(Expr::p(axis))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.left_mul(&Expr::constant(c))
    }

    /// `f ∘ A`: multiply the result of `A` by `f`.
    pub fn left_mul(&self, f: &Expr) -> Self {
        Self {
            a: [f * &self.a[0], f * &self.a[1], f * &self.a[2]],
            b: f * &self.b,
        }
    }

    /// `A ∘ f`: apply `A` after multiplying by `f`.
    pub fn right_mul(&self, f: &Expr) -> Self {
        let mut b = vec![&self.b * f];
        for axis in Axis::ALL {
            b.push(&self.a[axis.index()] * f.differentiate(axis));
        }
        Self {
            a: [f * &self.a[0], f * &self.a[1], f * &self.a[2]],
            b: Expr::sum(b),
        }
    }

    /// `[A, B] = AB - BA`. Always first order again.
    pub fn commutator(&self, other: &FirstOrderOp) -> FirstOrderOp {
        let (a, b) = (&self.a, &self.b);
        let (c, d) = (&other.a, &other.b);
        let apply = |coef: &[Expr; 3], f: &Expr| -> Vec<Expr> {
            Axis::ALL
                .iter()
                .map(|&l| &coef[l.index()] * f.differentiate(l))
                .collect()
        };
        let deriv = |k: usize| {
            let mut terms = apply(a, &c[k]);
            terms.extend(apply(c, &a[k]).into_iter().map(|t| -t));
            Expr::sum(terms)
        };
        let mut scalar = apply(a, d);
        scalar.extend(apply(c, b).into_iter().map(|t| -t));
        FirstOrderOp {
            a: [deriv(0), deriv(1), deriv(2)],
            b: Expr::sum(scalar),
        }
    }

    /// Formal adjoint with respect to the flat measure `d³p`:
    /// derivative parts `-conj(a_k)`, scalar part `conj(b) - Σ ∂_k conj(a_k)`.
    pub fn formal_adjoint(&self) -> FirstOrderOp {
        let abar: Vec<Expr> = self.a.iter().map(Expr::conj).collect();
        let mut scalar = vec![self.b.conj()];
        for axis in Axis::ALL {
            scalar.push(-abar[axis.index()].differentiate(axis));
        }
        FirstOrderOp {
            a: [-&abar[0], -&abar[1], -&abar[2]],
            b: Expr::sum(scalar),
        }
    }

    pub fn evaluate(&self, ctx: &EvalContext) -> crate::Result<OpValue> {
        Ok(OpValue {
            a: [
                self.a[0].evaluate(ctx)?,
                self.a[1].evaluate(ctx)?,
                self.a[2].evaluate(ctx)?,
            ],
            b: self.b.evaluate(ctx)?,
        })
    }
}

impl Add for FirstOrderOp {
    type Output = FirstOrderOp;
    fn add(self, rhs: FirstOrderOp) -> FirstOrderOp {
        &self + &rhs
    }
}

impl Add for &FirstOrderOp {
    type Output = FirstOrderOp;
    fn add(self, rhs: &FirstOrderOp) -> FirstOrderOp {
        FirstOrderOp {
            a: [
                &self.a[0] + &rhs.a[0],
                &self.a[1] + &rhs.a[1],
                &self.a[2] + &rhs.a[2],
            ],
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for FirstOrderOp {
    type Output = FirstOrderOp;
    fn sub(self, rhs: FirstOrderOp) -> FirstOrderOp {
        &self - &rhs
    }
}

impl Sub for &FirstOrderOp {
    type Output = FirstOrderOp;
    fn sub(self, rhs: &FirstOrderOp) -> FirstOrderOp {
        self + &(-rhs)
    }
}

impl Neg for &FirstOrderOp {
    type Output = FirstOrderOp;
    fn neg(self) -> FirstOrderOp {
        FirstOrderOp {
            a: [-&self.a[0], -&self.a[1], -&self.a[2]],
            b: -&self.b,
        }
    }
}

impl Neg for FirstOrderOp {
    type Output = FirstOrderOp;
    fn neg(self) -> FirstOrderOp {
        -&self
    }
}

/// Free-function form of [`FirstOrderOp::commutator`].
pub fn commutator(a: &FirstOrderOp, b: &FirstOrderOp) -> FirstOrderOp {
    a.commutator(b)
}

/// Free-function form of [`FirstOrderOp::formal_adjoint`].
pub fn formal_adjoint(a: &FirstOrderOp) -> FirstOrderOp {
    a.formal_adjoint()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpEqualityReport {
    pub max_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub tolerance: f64,
}

/// Largest coefficient difference over `points`. A point where either
/// operator cannot be evaluated counts as an infinite residual.
pub fn max_residual_at(
    a: &FirstOrderOp,
    b: &FirstOrderOp,
    points: &[[f64; 3]],
    lambda: f64,
    guard: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for p in points {
        let r = EvalContext::with_guard(*p, lambda, guard).and_then(|ctx| {
            let va = a.evaluate(&ctx)?;
            let vb = b.evaluate(&ctx)?;
            Ok(va.max_diff(&vb))
        });
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    worst
}

/// Sampled equality on the default domain.
pub fn ops_equal(
    a: &FirstOrderOp,
    b: &FirstOrderOp,
    samples: usize,
    seed: u64,
    tol: f64,
) -> OpEqualityReport {
    let domain = SampleDomain::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = domain.sample_n(samples.max(1), &mut rng);
    let max_residual = max_residual_at(a, b, &points, 0.0, domain.guard);
    OpEqualityReport {
        max_residual,
        samples: points.len(),
        seed,
        passed: max_residual < tol,
        tolerance: tol,
    }
}

/// Sampling parameters shared by the identity checks of a suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpChecker {
    pub domain: SampleDomain,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Binding for `Expr::lambda()` nodes, if any appear.
    pub lambda: f64,
}

impl Default for OpChecker {
    fn default() -> Self {
        Self {
            domain: SampleDomain::default(),
            samples: 100,
            seed: 42,
            tol: DEFAULT_TOL,
            lambda: 0.0,
        }
    }
}

impl OpChecker {
    pub fn new(samples: usize, seed: u64, tol: f64) -> Self {
        Self {
            samples,
            seed,
            tol,
            ..Self::default()
        }
    }

    pub fn with_domain(mut self, domain: SampleDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Sample points for the identity named `label`.
    pub fn points(&self, label: &str) -> Vec<[f64; 3]> {
        let mut rng = stream_rng(self.seed, label);
        self.domain.sample_n(self.samples.max(1), &mut rng)
    }

    pub fn residual(&self, label: &str, a: &FirstOrderOp, b: &FirstOrderOp) -> f64 {
        max_residual_at(a, b, &self.points(label), self.lambda, self.domain.guard)
    }

    /// Checks `a == b` at this identity's sample points.
    pub fn check(&self, label: &str, a: &FirstOrderOp, b: &FirstOrderOp) -> IdentityRecord {
        let r = self.residual(label, a, b);
        IdentityRecord::holds(label, r, self.samples.max(1), self.tol)
    }

    /// Checks that `op` has vanishing derivative parts.
    pub fn check_multiplication(&self, label: &str, op: &FirstOrderOp) -> IdentityRecord {
        let stripped = FirstOrderOp::multiplication(op.b.clone());
        self.check(label, op, &stripped)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Axis::*;

    fn i() -> Complex64 {
        Complex64::i()
    }

    #[test]
    fn canonical_commutator() {
        let c = FirstOrderOp::position(P1).commutator(&FirstOrderOp::momentum(P1));
        let expected = FirstOrderOp::multiplication(Expr::i());
        let r = ops_equal(&c, &expected, 20, 1, 1e-14);
        assert!(r.passed, "{r:?}");
        let c = FirstOrderOp::position(P1).commutator(&FirstOrderOp::momentum(P2));
        assert!(ops_equal(&c, &FirstOrderOp::zero(), 20, 1, 1e-14).passed);
    }

    #[test]
    fn self_commutator_vanishes() {
        let a = FirstOrderOp::position(P2)
            .left_mul(&Expr::norm())
            .add(FirstOrderOp::multiplication(Expr::kappa(P1)));
        let c = a.commutator(&a);
        let r = ops_equal(&c, &FirstOrderOp::zero(), 50, 3, 1e-12);
        assert!(r.passed);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn position_is_self_adjoint() {
        let x = FirstOrderOp::position(P1);
        assert!(ops_equal(&x.formal_adjoint(), &x, 10, 0, 1e-14).passed);
    }

    #[test]
    fn symmetrized_boost_is_self_adjoint() {
        // K1 = i|p| ∂1 + (i/2) p1/|p|
        let k1 = FirstOrderOp::partial(P1)
            .left_mul(&(Expr::i() * Expr::norm()))
            .add(FirstOrderOp::multiplication(
                Expr::constant(0.5 * i()) * Expr::kappa(P1),
            ));
        let r = ops_equal(&k1.formal_adjoint(), &k1, 100, 5, 1e-12);
        assert!(r.passed, "{r:?}");
        // without the symmetrizing term it is not
        let bare = FirstOrderOp::partial(P1).left_mul(&(Expr::i() * Expr::norm()));
        assert!(!ops_equal(&bare.formal_adjoint(), &bare, 100, 5, 1e-3).passed);
    }

    #[test]
    fn dilation_adjoint() {
        // (p1 ∂1)† = -p1 ∂1 - 1
        let d = FirstOrderOp::partial(P1).left_mul(&Expr::p(P1));
        let expected = (-&d) - FirstOrderOp::identity();
        assert!(ops_equal(&d.formal_adjoint(), &expected, 20, 2, 1e-14).passed);
        let r = ops_equal(&d.formal_adjoint(), &d, 20, 2, 1e-9);
        assert!(!r.passed);
    }

    #[test]
    fn right_multiplication_adds_derivative_of_function() {
        // ∂1 ∘ p1 = p1 ∂1 + 1
        let op = FirstOrderOp::partial(P1).right_mul(&Expr::p(P1));
        let expected = FirstOrderOp::partial(P1).left_mul(&Expr::p(P1)) + FirstOrderOp::identity();
        assert!(ops_equal(&op, &expected, 10, 0, 1e-14).passed);
    }

    #[test]
    fn unevaluable_points_count_as_failures() {
        let bad = FirstOrderOp::multiplication((Expr::p(P1) - Expr::p(P1)).recip());
        let r = max_residual_at(&bad, &bad, &[[1.0, 0.0, 0.0]], 0.0, 1e-6);
        assert!(r.is_infinite());
    }

    #[test]
    fn checker_streams_are_stable() {
        let c = OpChecker::new(4, 9, 1e-9);
        assert_eq!(c.points("a"), c.points("a"));
        assert_ne!(c.points("a"), c.points("b"));
    }
}
