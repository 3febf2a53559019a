//! Momentum-dependent unitary changes of representation.
//!
//! Conjugating by a multiplication operator `U(p)` leaves `p_k` and `H`
//! alone and shifts every derivative part: `U A U⁻¹ = a·∂ + b - Σ a_k ∂_kU/U`.
//! The particular `U` below takes the angular momentum to the Lomont–Moses
//! form, in which the helicity correction is referred to the first axis.

use num_complex::Complex64;

use crate::diffop::{FirstOrderOp, OpChecker};
use crate::error::{Error, Result};
use crate::expr::{levi_civita, Axis, EvalContext, Expr};
use crate::poincare::{build_generators, HelicityParams};
use crate::pryce::{build_pryce, noncommutativity_rhs, PhiChoice};
use crate::report::{IdentityRecord, VerificationReport};
use crate::sampling::{stream_rng, SampleDomain};

/// `U(p) = base(p)^power` with `|base| = 1` away from `κ₁ = ±1`, `κ₃ = -1`.
#[derive(Debug, Clone)]
pub struct GaugeFunction {
    pub base: Expr,
    pub power: i32,
}

/// The unimodular bracket whose integer powers relate the two forms of `J`:
///
/// `κ₂²(κ₁+κ₃)/((1-κ₁²)(1+κ₃)) + κ₃²/(1-κ₁²) + i κ₂(1+κ₃-κ₁(κ₁+κ₃))/((1-κ₁²)(1+κ₃))`
pub fn lomont_moses_base() -> Expr {
    let k1 = Expr::kappa(Axis::P1);
    let k2 = Expr::kappa(Axis::P2);
    let k3 = Expr::kappa(Axis::P3);
    let one_m_k1sq = 1.0 - k1.powi(2);
    let one_p_k3 = 1.0 + &k3;
    let k1_p_k3 = &k1 + &k3;
    let re = k2.powi(2) * &k1_p_k3 / (&one_m_k1sq * &one_p_k3) + k3.powi(2) / &one_m_k1sq;
    let im = &k2 * (&one_p_k3 - &k1 * &k1_p_k3) / (&one_m_k1sq * &one_p_k3);
    re + Expr::i() * im
}

/// Gauge function producing the Lomont–Moses angular momentum from the
/// standard one under [`conjugate`]: the bracket raised to `λ`.
pub fn lomont_moses_gauge(params: HelicityParams) -> Result<GaugeFunction> {
    if !params.is_integer() {
        return Err(Error::NonIntegerHelicity(params.lambda));
    }
    Ok(GaugeFunction {
        base: lomont_moses_base(),
        power: params.lambda as i32,
    })
}

impl GaugeFunction {
    /// The factor `w` and exponent `m >= 0` with `U = w^m`. Negative powers
    /// use the conjugate of the (unimodular) base.
    fn factor(&self) -> (Expr, i32) {
        if self.power >= 0 {
            (self.base.clone(), self.power)
        } else {
            (self.base.conj(), -self.power)
        }
    }

    pub fn expr(&self) -> Expr {
        let (w, m) = self.factor();
        w.powi(m)
    }

    /// `∂_k U / U`.
    pub fn log_derivative(&self, axis: Axis) -> Expr {
        let (w, m) = self.factor();
        if m == 0 {
            return Expr::zero();
        }
        Expr::real(m as f64) * w.differentiate(axis) / w
    }

    /// Value of `U`, refusing points with `1 - κ₁² <= guard`.
    pub fn evaluate(&self, ctx: &EvalContext) -> Result<Complex64> {
        let k1 = ctx.kappa()[0];
        let margin = 1.0 - k1 * k1;
        if !(margin > ctx.guard()) {
            return Err(Error::GuardedSingularity {
                what: "1 - kappa1^2",
                value: margin,
                guard: ctx.guard(),
            });
        }
        self.expr().evaluate(ctx)
    }
}

/// `U A U⁻¹`.
pub fn conjugate(a: &FirstOrderOp, u: &GaugeFunction) -> FirstOrderOp {
    let mut b = vec![a.b.clone()];
    for axis in Axis::ALL {
        let ak = &a.a[axis.index()];
        if !ak.is_zero() {
            b.push(-(ak * u.log_derivative(axis)));
        }
    }
    FirstOrderOp::new(a.a.clone(), Expr::sum(b))
}

/// `J̃₁ = L₁ + λ`, `J̃₂ = L₂ + λp₂/(|p|+p₁)`, `J̃₃ = L₃ + λp₃/(|p|+p₁)`.
pub fn lomont_moses_angular_momentum(params: HelicityParams) -> [FirstOrderOp; 3] {
    let gs = build_generators(HelicityParams::new(0.0));
    let lam = Expr::real(params.lambda);
    let den = Expr::norm() + Expr::p(Axis::P1);
    [
        &gs.l[0] + &FirstOrderOp::multiplication(lam.clone()),
        &gs.l[1] + &FirstOrderOp::multiplication(&lam * Expr::p(Axis::P2) / &den),
        &gs.l[2] + &FirstOrderOp::multiplication(&lam * Expr::p(Axis::P3) / &den),
    ]
}

/// Largest `||U| - 1|` over `samples` doubly guarded points.
pub fn unit_modulus_deviation(u: &GaugeFunction, samples: usize, seed: u64, guard: f64) -> f64 {
    let domain = SampleDomain::doubly_guarded().with_guard(guard);
    let mut rng = stream_rng(seed, "gauge |U| = 1");
    let mut worst = 0.0f64;
    for p in domain.sample_n(samples, &mut rng) {
        let dev = EvalContext::with_guard(p, 0.0, guard)
            .and_then(|ctx| u.evaluate(&ctx))
            .map(|v| (v.norm() - 1.0).abs())
            .unwrap_or(f64::INFINITY);
        worst = worst.max(dev);
    }
    worst
}

/// Number of points used for the unit-modulus check.
pub const UNIT_MODULUS_SAMPLES: usize = 1000;

/// Unit modulus is checked to this absolute tolerance.
pub const UNIT_MODULUS_TOL: f64 = 1e-10;

/// Lomont–Moses form, the rotation subalgebra, the vector law and the
/// noncommutativity of the transformed position operator, all on the
/// doubly guarded domain.
pub fn verify_gauge_invariance(params: HelicityParams, checker: &OpChecker) -> Result<VerificationReport> {
    let u = lomont_moses_gauge(params)?;
    let checker = checker.with_domain(SampleDomain::doubly_guarded().with_guard(checker.domain.guard));
    let i = Complex64::i();
    let gs = build_generators(params);
    let ps = build_pryce(params, PhiChoice::Zero);
    let jt = gs.j.clone().map(|j| conjugate(&j, &u));
    let yt = ps.y.clone().map(|y| conjugate(&y, &u));
    let lm = lomont_moses_angular_momentum(params);

    let mut report = VerificationReport::new("gauge");
    let dev = unit_modulus_deviation(&u, UNIT_MODULUS_SAMPLES, checker.seed, checker.domain.guard);
    report.push(IdentityRecord::holds("|U| = 1", dev, UNIT_MODULUS_SAMPLES, UNIT_MODULUS_TOL));

    for k in 0..3 {
        report.push(checker.check(&format!("J~{} = Lomont-Moses form", k + 1), &jt[k], &lm[k]));
    }
    let eps_sum = |ops: &[FirstOrderOp; 3], a: usize, b: usize| {
        let mut acc = FirstOrderOp::zero();
        for m in 0..3 {
            let e = levi_civita(a, b, m);
            if e != 0.0 {
                acc = acc + ops[m].scale(i * e);
            }
        }
        acc
    };
    for a in 0..3 {
        for b in 0..3 {
            let (s, t) = (a + 1, b + 1);
            report.push(checker.check(
                &format!("[J~{s},J~{t}] = i eps J~"),
                &jt[a].commutator(&jt[b]),
                &eps_sum(&jt, a, b),
            ));
            report.push(checker.check(
                &format!("[J~{s},Y~{t}] = i eps Y~"),
                &jt[a].commutator(&yt[b]),
                &eps_sum(&yt, a, b),
            ));
            report.push(checker.check(
                &format!("[Y~{s},Y~{t}] = -(i lambda/|p|^3) eps p"),
                &yt[a].commutator(&yt[b]),
                &noncommutativity_rhs(params.lambda, a, b),
            ));
        }
    }
    for (k, p) in gs.p.iter().enumerate() {
        report.push(checker.check(&format!("U p{} U^-1 = p{}", k + 1, k + 1), &conjugate(p, &u), p));
    }
    report.push(checker.check("U H U^-1 = H", &conjugate(&gs.h, &u), &gs.h));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::ops_equal;

    fn ctx(p: [f64; 3]) -> EvalContext {
        EvalContext::new(p, 0.0).unwrap()
    }

    #[test]
    fn base_is_one_on_the_third_axis() {
        let v = lomont_moses_base().evaluate(&ctx([0.0, 0.0, 1.0])).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn multiplication_operators_are_fixed() {
        let u = lomont_moses_gauge(HelicityParams::new(1.0)).unwrap();
        let p1 = FirstOrderOp::momentum(Axis::P1);
        assert!(ops_equal(&conjugate(&p1, &u), &p1, 20, 0, 1e-15).passed);
    }

    #[test]
    fn rejects_half_integer_helicity() {
        let err = lomont_moses_gauge(HelicityParams::new(0.5)).unwrap_err();
        assert_eq!(err, Error::NonIntegerHelicity(0.5));
        let checker = OpChecker::default();
        assert!(verify_gauge_invariance(HelicityParams::new(-1.5), &checker).is_err());
    }

    #[test]
    fn singular_set_is_guarded() {
        let u = lomont_moses_gauge(HelicityParams::new(1.0)).unwrap();
        let err = u.evaluate(&ctx([1.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::GuardedSingularity { what: "1 - kappa1^2", .. }));
    }

    #[test]
    fn lomont_moses_first_component() {
        let params = HelicityParams::new(1.0);
        let u = lomont_moses_gauge(params).unwrap();
        let gs = build_generators(params);
        let lm = lomont_moses_angular_momentum(params);
        let checker = OpChecker::new(100, 17, 1e-9).with_domain(SampleDomain::doubly_guarded());
        let rec = checker.check("J~1", &conjugate(&gs.j[0], &u), &lm[0]);
        assert!(rec.passed, "{rec:?}");
    }

    #[test]
    fn inverse_gauge_does_not_give_lomont_moses() {
        // U^-1 J U is not the Lomont-Moses form
        let params = HelicityParams::new(1.0);
        let u = GaugeFunction {
            base: lomont_moses_base(),
            power: -1,
        };
        let gs = build_generators(params);
        let lm = lomont_moses_angular_momentum(params);
        let checker = OpChecker::new(50, 17, 1e-3).with_domain(SampleDomain::doubly_guarded());
        assert!(!checker.check("J~1", &conjugate(&gs.j[0], &u), &lm[0]).passed);
    }

    #[test]
    fn second_component_spot_value() {
        let params = HelicityParams::new(2.0);
        let u = lomont_moses_gauge(params).unwrap();
        let gs = build_generators(params);
        let d = &conjugate(&gs.j[1], &u) - &gs.l[1];
        let v = d.evaluate(&ctx([0.0, 1.0, 0.0])).unwrap();
        assert!((v.b - 2.0).norm() < 1e-12, "{v:?}");
        assert!(v.a.iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn zero_helicity_is_trivial() {
        let params = HelicityParams::new(0.0);
        let u = lomont_moses_gauge(params).unwrap();
        let gs = build_generators(params);
        for j in &gs.j {
            assert!(ops_equal(&conjugate(j, &u), j, 20, 1, 1e-15).passed);
        }
    }

    #[test]
    fn conjugation_preserves_brackets() {
        let params = HelicityParams::new(2.0);
        let u = lomont_moses_gauge(params).unwrap();
        let gs = build_generators(params);
        let checker = OpChecker::new(60, 3, 1e-9).with_domain(SampleDomain::doubly_guarded());
        let pairs = [(&gs.j[0], &gs.n[1]), (&gs.x[2], &gs.j[1]), (&gs.k[0], &gs.x[0])];
        for (a, b) in pairs {
            let lhs = conjugate(a, &u).commutator(&conjugate(b, &u));
            let rhs = conjugate(&a.commutator(b), &u);
            let rec = checker.check("bracket", &lhs, &rhs);
            assert!(rec.passed, "{rec:?}");
        }
    }

    #[test]
    fn unit_modulus() {
        for lam in [-2.0, 1.0, 3.0] {
            let u = lomont_moses_gauge(HelicityParams::new(lam)).unwrap();
            assert!(unit_modulus_deviation(&u, 1000, 5, 1e-6) < 1e-10);
        }
    }

    #[test]
    fn invariance_suite_passes() {
        let checker = OpChecker::new(30, 21, 1e-9);
        for lam in [1.0, 2.0] {
            let r = verify_gauge_invariance(HelicityParams::new(lam), &checker).unwrap();
            assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
