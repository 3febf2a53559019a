//! Massless helicity-λ representation of the Poincaré algebra built on a
//! position operator with commuting components.
//!
//! Rotations act on `X_k` nonlinearly: `[J_k, X_l] = iε_{klm} X_m + R_kl`,
//! where the residuals `R_kl` are multiplication operators that vanish for
//! `λ = 0`.

use num_complex::Complex64;

use crate::diffop::{FirstOrderOp, OpChecker};
use crate::expr::{levi_civita, Axis, Expr};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityParams {
    pub lambda: f64,
}

impl HelicityParams {
    pub fn new(lambda: f64) -> Self {
        Self { lambda }
    }

    /// Whether λ is an integer (required by the gauge construction).
    pub fn is_integer(&self) -> bool {
        self.lambda.fract() == 0.0 && self.lambda.is_finite()
    }
}

/// The generators `H, p, J, N, L, K, X` for one helicity.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub params: HelicityParams,
    pub h: FirstOrderOp,
    pub p: [FirstOrderOp; 3],
    pub j: [FirstOrderOp; 3],
    pub n: [FirstOrderOp; 3],
    pub l: [FirstOrderOp; 3],
    pub k: [FirstOrderOp; 3],
    pub x: [FirstOrderOp; 3],
}

/// `|p| + p_3`, the denominator of every helicity correction.
pub(crate) fn north_denominator() -> Expr {
    Expr::norm() + Expr::p(Axis::P3)
}

fn array3<T>(f: impl Fn(Axis) -> T) -> [T; 3] {
    [f(Axis::P1), f(Axis::P2), f(Axis::P3)]
}

pub fn build_generators(params: HelicityParams) -> GeneratorSet {
    use Axis::*;
    let lam = Expr::real(params.lambda);
    let x = array3(FirstOrderOp::position);
    let p = array3(FirstOrderOp::momentum);
    let h = FirstOrderOp::multiplication(Expr::norm());

    // L_k = ε_klm X_l p_m as an operator product
    let l = array3(|k| {
        let mut acc = FirstOrderOp::zero();
        for li in 0..3 {
            for mi in 0..3 {
                let e = levi_civita(k.index(), li, mi);
                if e != 0.0 {
                    let term = x[li].right_mul(&Expr::p(Axis::from_index(mi)));
                    acc = acc + term.scale(Complex64::new(e, 0.0));
                }
            }
        }
        acc
    });

    // K_l = |p| X_l + (i/2) p_l/|p|
    let k = array3(|a| {
        x[a.index()].left_mul(&Expr::norm())
            + FirstOrderOp::multiplication(Expr::constant(Complex64::new(0.0, 0.5)) * Expr::kappa(a))
    });

    let corr = |num: Expr| FirstOrderOp::multiplication(&lam * num / north_denominator());
    let j = [
        &l[0] + &corr(Expr::p(P1)),
        &l[1] + &corr(Expr::p(P2)),
        &l[2] + &FirstOrderOp::multiplication(lam.clone()),
    ];
    let n = [
        &k[0] + &corr(Expr::p(P2)),
        &k[1] + &corr(-Expr::p(P1)),
        k[2].clone(),
    ];

    GeneratorSet {
        params,
        h,
        p,
        j,
        n,
        l,
        k,
        x,
    }
}

fn eps_combination(ops: &[FirstOrderOp; 3], i: usize, j: usize, factor: Complex64) -> FirstOrderOp {
    let mut acc = FirstOrderOp::zero();
    for m in 0..3 {
        let e = levi_civita(i, j, m);
        if e != 0.0 {
            acc = acc + ops[m].scale(factor * e);
        }
    }
    acc
}

/// All commutator families of the Poincaré algebra, one record per
/// index pair.
pub fn verify_poincare_table(gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let i = Complex64::i();
    let mut report = VerificationReport::new("poincare");
    let zero = FirstOrderOp::zero();

    for a in 0..3 {
        for b in 0..3 {
            let (s, t) = (a + 1, b + 1);
            report.push(checker.check(
                &format!("[J{s},J{t}] = i eps J"),
                &gs.j[a].commutator(&gs.j[b]),
                &eps_combination(&gs.j, a, b, i),
            ));
            report.push(checker.check(
                &format!("[J{s},p{t}] = i eps p"),
                &gs.j[a].commutator(&gs.p[b]),
                &eps_combination(&gs.p, a, b, i),
            ));
            report.push(checker.check(
                &format!("[J{s},N{t}] = i eps N"),
                &gs.j[a].commutator(&gs.n[b]),
                &eps_combination(&gs.n, a, b, i),
            ));
            report.push(checker.check(
                &format!("[N{s},N{t}] = -i eps J"),
                &gs.n[a].commutator(&gs.n[b]),
                &eps_combination(&gs.j, a, b, -i),
            ));
            let rhs = if a == b {
                gs.h.scale(i)
            } else {
                zero.clone()
            };
            report.push(checker.check(
                &format!("[N{s},p{t}] = i delta H"),
                &gs.n[a].commutator(&gs.p[b]),
                &rhs,
            ));
            report.push(checker.check(
                &format!("[p{s},p{t}] = 0"),
                &gs.p[a].commutator(&gs.p[b]),
                &zero,
            ));
        }
        let s = a + 1;
        report.push(checker.check(
            &format!("[N{s},H] = i p{s}"),
            &gs.n[a].commutator(&gs.h),
            &gs.p[a].scale(i),
        ));
        report.push(checker.check(
            &format!("[J{s},H] = 0"),
            &gs.j[a].commutator(&gs.h),
            &zero,
        ));
        report.push(checker.check(
            &format!("[p{s},H] = 0"),
            &gs.p[a].commutator(&gs.h),
            &zero,
        ));
    }
    report
}

/// Residuals `R_kl` of the nonlinear rotation law, written out from their
/// closed forms (not computed from the commutator).
#[derive(Debug, Clone)]
pub struct ResidualTable {
    pub r: [[FirstOrderOp; 3]; 3],
}

impl ResidualTable {
    pub fn get(&self, k: Axis, l: Axis) -> &FirstOrderOp {
        &self.r[k.index()][l.index()]
    }

    /// Full right-hand side `iε_{klm}X_m + R_kl` of `[J_k, X_l]`.
    pub fn rhs(&self, gs: &GeneratorSet, k: Axis, l: Axis) -> FirstOrderOp {
        &eps_combination(&gs.x, k.index(), l.index(), Complex64::i()) + self.get(k, l)
    }
}

pub fn residual_table(gs: &GeneratorSet) -> ResidualTable {
    use Axis::*;
    let lam = Expr::real(gs.params.lambda);
    let i = Expr::i();
    let k1 = Expr::kappa(P1);
    let k2 = Expr::kappa(P2);
    let k3 = Expr::kappa(P3);
    let one_k3 = 1.0 + &k3;
    let sq = Expr::norm() * one_k3.powi(2);
    let lin = Expr::norm() * &one_k3;

    let r11 = -(&i * &lam * (1.0 - k1.powi(2) + &k3) / &sq);
    let r22 = -(&i * &lam * (1.0 - k2.powi(2) + &k3) / &sq);
    let r12 = &i * &lam * &k1 * &k2 / &sq;
    let r21 = r12.clone();
    let r13 = &i * &lam * &k1 / &lin;
    let r23 = &i * &lam * &k2 / &lin;

    let m = FirstOrderOp::multiplication;
    ResidualTable {
        r: [
            [m(r11), m(r12), m(r13)],
            [m(r21), m(r22), m(r23)],
            [FirstOrderOp::zero(), FirstOrderOp::zero(), FirstOrderOp::zero()],
        ],
    }
}

/// `[J_k, X_l] = iε_{klm}X_m + R_kl` for all nine pairs, and that each
/// residual is a multiplication operator.
pub fn verify_residuals(gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let table = residual_table(gs);
    let mut report = VerificationReport::new("residuals");
    for k in Axis::ALL {
        for l in Axis::ALL {
            let (s, t) = (k.label(), l.label());
            report.push(checker.check(
                &format!("[J{s},X{t}] = i eps X + R{s}{t}"),
                &gs.j[k.index()].commutator(&gs.x[l.index()]),
                &table.rhs(gs, k, l),
            ));
            let residual = &gs.j[k.index()].commutator(&gs.x[l.index()])
                - &eps_combination(&gs.x, k.index(), l.index(), Complex64::i());
            report.push(checker.check_multiplication(&format!("R{s}{t} is multiplicative"), &residual));
        }
    }
    report
}

/// `Σ_k J_k p_k = λ|p|`.
pub fn helicity_operator(gs: &GeneratorSet) -> FirstOrderOp {
    let mut acc = FirstOrderOp::zero();
    for axis in Axis::ALL {
        acc = acc + gs.j[axis.index()].right_mul(&Expr::p(axis));
    }
    acc
}

pub fn helicity_identity(gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("helicity");
    let target = FirstOrderOp::multiplication(Expr::real(gs.params.lambda) * Expr::norm());
    report.push(checker.check("J.p = lambda |p|", &helicity_operator(gs), &target));
    let mut lp = FirstOrderOp::zero();
    for axis in Axis::ALL {
        lp = lp + gs.l[axis.index()].right_mul(&Expr::p(axis));
    }
    report.push(checker.check("L.p = 0", &lp, &FirstOrderOp::zero()));
    report
}

/// Formal self-adjointness of every generator.
pub fn verify_hermiticity(gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("hermiticity");
    report.push(checker.check("H", &gs.h.formal_adjoint(), &gs.h));
    let families: [(&str, &[FirstOrderOp; 3]); 6] = [
        ("p", &gs.p),
        ("J", &gs.j),
        ("N", &gs.n),
        ("K", &gs.k),
        ("L", &gs.l),
        ("X", &gs.x),
    ];
    for (name, ops) in families {
        for (idx, op) in ops.iter().enumerate() {
            report.push(checker.check(&format!("{name}{}", idx + 1), &op.formal_adjoint(), op));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::ops_equal;
    use crate::expr::EvalContext;

    fn scalar_at(op: &FirstOrderOp, p: [f64; 3]) -> Complex64 {
        op.evaluate(&EvalContext::new(p, 0.0).unwrap()).unwrap().b
    }

    #[test]
    fn zero_helicity_reduces_to_orbital_part() {
        let gs = build_generators(HelicityParams::new(0.0));
        for a in 0..3 {
            assert!(ops_equal(&gs.j[a], &gs.l[a], 30, 1, 1e-14).passed);
            assert!(ops_equal(&gs.n[a], &gs.k[a], 30, 1, 1e-14).passed);
        }
    }

    #[test]
    fn spin_part_of_j3_is_lambda() {
        let gs = build_generators(HelicityParams::new(1.5));
        let d = &gs.j[2] - &gs.l[2];
        let v = d.evaluate(&EvalContext::new([1.0, 0.0, 0.0], 0.0).unwrap()).unwrap();
        assert_eq!(v.b, Complex64::new(1.5, 0.0));
        assert!(v.a.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn boost_correction_value() {
        let gs = build_generators(HelicityParams::new(1.0));
        let d = &gs.n[0] - &gs.k[0];
        assert!((scalar_at(&d, [0.0, 1.0, 0.0]) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn table_entry_examples() {
        let gs = build_generators(HelicityParams::new(1.0));
        let c = OpChecker::new(100, 3, 1e-9);
        assert!(c.check("JH", &gs.j[0].commutator(&gs.h), &FirstOrderOp::zero()).passed);
        assert!(c
            .check("N1p1", &gs.n[0].commutator(&gs.p[0]), &gs.h.scale(Complex64::i()))
            .passed);
        // [N1,N2] = -i J3
        assert!(c
            .check(
                "N1N2",
                &gs.n[0].commutator(&gs.n[1]),
                &gs.j[2].scale(-Complex64::i())
            )
            .passed);
    }

    #[test]
    fn table_counts_and_passes() {
        let c = OpChecker::new(20, 11, 1e-9);
        let r = verify_poincare_table(&build_generators(HelicityParams::new(2.0)), &c);
        assert_eq!(r.records.len(), 63);
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn residual_spot_values() {
        let gs = build_generators(HelicityParams::new(1.0));
        let t = residual_table(&gs);
        let v = scalar_at(t.get(Axis::P1, Axis::P1), [0.0, 0.0, 1.0]);
        assert!((v - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        for l in Axis::ALL {
            assert!(t.get(Axis::P3, l).b.is_zero());
        }
        let t0 = residual_table(&build_generators(HelicityParams::new(0.0)));
        for row in &t0.r {
            for op in row {
                assert!(op.b.is_zero());
            }
        }
    }

    #[test]
    fn residuals_are_linear_in_lambda() {
        let t1 = residual_table(&build_generators(HelicityParams::new(1.0)));
        let t2 = residual_table(&build_generators(HelicityParams::new(2.0)));
        for k in 0..3 {
            for l in 0..3 {
                let doubled = t1.r[k][l].scale(Complex64::new(2.0, 0.0));
                let r = ops_equal(&t2.r[k][l], &doubled, 50, 8, 1e-10);
                assert!(r.passed);
            }
        }
    }

    #[test]
    fn helicity_spot_value() {
        let gs = build_generators(HelicityParams::new(2.0));
        let v = scalar_at(&helicity_operator(&gs), [0.0, 0.0, 1.0]);
        assert!((v - 2.0).norm() < 1e-14);
    }

    #[test]
    fn integer_flag() {
        assert!(HelicityParams::new(-2.0).is_integer());
        assert!(!HelicityParams::new(0.5).is_integer());
    }
}
