//! Linearization of the rotation action: `Y_k = X_k + f_k(p) + φ(|p|) p_k`
//! transforms as a three-vector under `J` but has non-commuting components.

use num_complex::Complex64;

use crate::diffop::{FirstOrderOp, OpChecker};
use crate::expr::{delta, levi_civita, Axis, Expr};
use crate::poincare::{residual_table, GeneratorSet, HelicityParams};
use crate::report::{IdentityRecord, VerificationReport};

/// Representative of the homogeneous solution family `φ(|p|) p_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiChoice {
    Zero,
    /// `φ = c / |p|`.
    InverseNorm(f64),
}

impl PhiChoice {
    pub fn expr(&self) -> Expr {
        match *self {
            PhiChoice::Zero => Expr::zero(),
            PhiChoice::InverseNorm(c) => Expr::real(c) / Expr::norm(),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            PhiChoice::Zero => "phi=0".to_string(),
            PhiChoice::InverseNorm(c) => format!("phi={c}/|p|"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PryceSet {
    pub params: HelicityParams,
    pub phi: PhiChoice,
    /// The special solution, without the `φ p_k` part.
    pub f: [Expr; 3],
    pub y: [FirstOrderOp; 3],
}

/// `f = (λκ₂, -λκ₁, 0) / (|p|(1+κ₃))`.
pub fn special_solution(params: HelicityParams) -> [Expr; 3] {
    let lam = Expr::real(params.lambda);
    let den = Expr::norm() * (1.0 + Expr::kappa(Axis::P3));
    [
        &lam * Expr::kappa(Axis::P2) / &den,
        -(&lam * Expr::kappa(Axis::P1) / &den),
        Expr::zero(),
    ]
}

pub fn build_pryce(params: HelicityParams, phi: PhiChoice) -> PryceSet {
    let f = special_solution(params);
    let phi_e = phi.expr();
    let y = [Axis::P1, Axis::P2, Axis::P3].map(|a| {
        let shift = &f[a.index()] + &phi_e * Expr::p(a);
        &FirstOrderOp::position(a) + &FirstOrderOp::multiplication(shift)
    });
    PryceSet {
        params,
        phi,
        f,
        y,
    }
}

/// Left-hand side of the linear system for the shifts `f`:
/// `∂f_l/∂p_m ε_{kmn} p_n - ε_{klm} f_m`.
pub fn linearization_operator(f: &[Expr; 3], k: usize, l: usize) -> Expr {
    let mut terms = Vec::new();
    for m in 0..3 {
        for n in 0..3 {
            let e = levi_civita(k, m, n);
            if e != 0.0 {
                terms.push(e * f[l].differentiate(Axis::from_index(m)) * Expr::p(Axis::from_index(n)));
            }
        }
        let e = levi_civita(k, l, m);
        if e != 0.0 {
            terms.push(-e * f[m].clone());
        }
    }
    Expr::sum(terms)
}

fn max_over_table(checker: &OpChecker, label: &str, entry: impl Fn(usize, usize) -> Expr) -> f64 {
    let zero = FirstOrderOp::zero();
    let mut worst = 0.0f64;
    for k in 0..3 {
        for l in 0..3 {
            let op = FirstOrderOp::multiplication(entry(k, l));
            worst = worst.max(checker.residual(label, &op, &zero));
        }
    }
    worst
}

/// `[J_k, Y_l] = iε_{klm} Y_m` for all nine pairs.
pub fn verify_vector_law(ps: &PryceSet, gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("vector-law");
    let i = Complex64::i();
    for k in 0..3 {
        for l in 0..3 {
            let mut rhs = FirstOrderOp::zero();
            for m in 0..3 {
                let e = levi_civita(k, l, m);
                if e != 0.0 {
                    rhs = rhs + ps.y[m].scale(i * e);
                }
            }
            report.push(checker.check(
                &format!("{} [J{},Y{}] = i eps Y", ps.phi.label(), k + 1, l + 1),
                &gs.j[k].commutator(&ps.y[l]),
                &rhs,
            ));
        }
    }
    report
}

/// `-(iλ/|p|³) ε_{ijk} p_k`.
pub fn noncommutativity_rhs(lambda: f64, i: usize, j: usize) -> FirstOrderOp {
    let mut terms = Vec::new();
    for k in 0..3 {
        let e = levi_civita(i, j, k);
        if e != 0.0 {
            terms.push(e * Expr::p(Axis::from_index(k)));
        }
    }
    let coeff = Expr::constant(Complex64::new(0.0, -lambda)) / Expr::norm().powi(3);
    FirstOrderOp::multiplication(coeff * Expr::sum(terms))
}

pub fn verify_noncommutativity(ps: &PryceSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("noncommutativity");
    for i in 0..3 {
        for j in 0..3 {
            report.push(checker.check(
                &format!("{} [Y{},Y{}] = -(i lambda/|p|^3) eps p", ps.phi.label(), i + 1, j + 1),
                &ps.y[i].commutator(&ps.y[j]),
                &noncommutativity_rhs(ps.params.lambda, i, j),
            ));
        }
    }
    report
}

/// `[Y_k, p_l] = iδ_kl`.
pub fn verify_canonicality(ps: &PryceSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("canonicality");
    for k in 0..3 {
        for l in 0..3 {
            let rhs = FirstOrderOp::multiplication(Expr::constant(Complex64::new(0.0, delta(k, l))));
            report.push(checker.check(
                &format!("{} [Y{},p{}] = i delta", ps.phi.label(), k + 1, l + 1),
                &ps.y[k].commutator(&FirstOrderOp::momentum(Axis::from_index(l))),
                &rhs,
            ));
        }
    }
    report
}

/// The special solution satisfies the inhomogeneous system with source
/// `i R_kl`.
pub fn verify_special_solution(params: HelicityParams, gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("special-solution");
    let f = special_solution(params);
    let table = residual_table(gs);
    let label = "special solution solves the inhomogeneous system";
    let r = max_over_table(checker, label, |k, l| {
        linearization_operator(&f, k, l) - Expr::i() * &table.r[k][l].b
    });
    report.push(IdentityRecord::holds(label, r, checker.samples, checker.tol));
    report
}

/// `φ p_k` solves the homogeneous system for `φ ∈ {1, 1/|p|, |p|²}`;
/// `f = (p₂, 0, 0)` must not.
pub fn verify_homogeneous_family(checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("homogeneous-family");
    let candidates = [
        ("phi=1", Expr::one()),
        ("phi=1/|p|", Expr::norm().recip()),
        ("phi=|p|^2", Expr::norm().powi(2)),
    ];
    for (name, phi) in candidates {
        let f = Axis::ALL.map(|a| &phi * Expr::p(a));
        let label = format!("homogeneous {name}");
        let r = max_over_table(checker, &label, |k, l| linearization_operator(&f, k, l));
        report.push(IdentityRecord::holds(label, r, checker.samples, checker.tol));
    }
    let f = [Expr::p(Axis::P2), Expr::zero(), Expr::zero()];
    let label = "counterexample f=(p2,0,0) rejected";
    let r = max_over_table(checker, label, |k, l| linearization_operator(&f, k, l));
    report.push(IdentityRecord::violated(label, r, checker.samples, 0.1));
    report
}

/// `½(|p|⁻¹ N_k + N_k |p|⁻¹) + φ p_k`.
pub fn n_form(ps: &PryceSet, gs: &GeneratorSet, k: Axis) -> FirstOrderOp {
    let inv = Expr::norm().recip();
    let n = &gs.n[k.index()];
    let sym = (n.left_mul(&inv) + n.right_mul(&inv)).scale(Complex64::new(0.5, 0.0));
    sym + FirstOrderOp::multiplication(ps.phi.expr() * Expr::p(k))
}

pub fn verify_n_form(ps: &PryceSet, gs: &GeneratorSet, checker: &OpChecker) -> VerificationReport {
    let mut report = VerificationReport::new("n-form");
    for k in Axis::ALL {
        report.push(checker.check(
            &format!("{} Y{} = sym(N{}/|p|) + phi p", ps.phi.label(), k.label(), k.label()),
            &ps.y[k.index()],
            &n_form(ps, gs, k),
        ));
    }
    report
}
