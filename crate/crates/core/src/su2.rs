//! SU(2) arithmetic for the coset construction over the stability subgroup
//! U(1) of the third axis.
//!
//! Generators are `A₁ = -(i/2)σ₁`, `A₂ = -(i/2)σ₂`, `V = -(i/2)σ₃`. Every
//! element near the identity factors uniquely as `e^{ξ·A} e^{uV}` with
//! `|ξ| < π`; `ξ` parametrizes the momentum direction through
//! `p·σ = e^{ξ·A} |p| σ₃ (e^{ξ·A})†`.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::DEFAULT_GUARD;
use crate::report::{IdentityRecord, VerificationReport};
use crate::sampling::stream_rng;

/// `[[a, b], [-conj(b), conj(a)]]` with `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    pub a: Complex64,
    pub b: Complex64,
}

/// Generator basis of su(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A1,
    A2,
    V,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A1, Generator::A2, Generator::V];

    pub fn name(self) -> &'static str {
        match self {
            Generator::A1 => "A1",
            Generator::A2 => "A2",
            Generator::V => "V",
        }
    }
}

impl Su2Element {
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// From a quaternion `q0 𝟙 - i(q1σ₁ + q2σ₂ + q3σ₃)`; normalized.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        Self {
            a: Complex64::new(q[0], -q[3]),
            b: Complex64::new(-q[2], -q[1]),
        }
        .renormalized()
    }

    pub fn quaternion(&self) -> [f64; 4] {
        [self.a.re, -self.b.im, -self.b.re, -self.a.im]
    }

    /// `exp(c₁A₁ + c₂A₂ + c₃V)`.
    pub fn exp(c: [f64; 3]) -> Self {
        let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        let half = 0.5 * r;
        let s = if r < 1e-8 { 0.5 } else { half.sin() / r };
        Self::from_quaternion_raw([half.cos(), s * c[0], s * c[1], s * c[2]])
    }

    fn from_quaternion_raw(q: [f64; 4]) -> Self {
        Self {
            a: Complex64::new(q[0], -q[3]),
            b: Complex64::new(-q[2], -q[1]),
        }
    }

    /// `e^{uV} = diag(e^{-iu/2}, e^{iu/2})`.
    pub fn exp_v(u: f64) -> Self {
        Self::exp([0.0, 0.0, u])
    }

    /// `𝟙 + τ G`, projected back onto SU(2).
    pub fn infinitesimal(generator: Generator, tau: f64) -> Self {
        let mut q = [1.0, 0.0, 0.0, 0.0];
        q[match generator {
            Generator::A1 => 1,
            Generator::A2 => 2,
            Generator::V => 3,
        }] = 0.5 * tau;
        Self::from_quaternion(q)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [-self.b.conj(), self.a.conj()]]
    }

    pub fn dagger(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn det(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn renormalized(&self) -> Self {
        let n = self.det().sqrt();
        if n == 0.0 {
            return Self::identity();
        }
        Self {
            a: self.a / n,
            b: self.b / n,
        }
    }

    /// Frobenius distance between the 2×2 matrices.
    pub fn distance(&self, other: &Su2Element) -> f64 {
        (2.0 * ((self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr())).sqrt()
    }

    /// Largest deviation of `g g†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.det() - 1.0).abs()
    }

    /// Adjoint action on 3-vectors: `g (v·σ) g† = v'·σ`.
    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let vs = pauli_combination(v);
        let prod = mat_mul(&mat_mul(&self.matrix(), &vs), &self.dagger().matrix());
        pauli_components(&prod)
    }
}

impl Mul for Su2Element {
    type Output = Su2Element;
    fn mul(self, rhs: Su2Element) -> Su2Element {
        Su2Element {
            a: self.a * rhs.a - self.b * rhs.b.conj(),
            b: self.a * rhs.b + self.b * rhs.a.conj(),
        }
    }
}

type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `v₁σ₁ + v₂σ₂ + v₃σ₃`.
pub fn pauli_combination(v: [f64; 3]) -> Mat2 {
    let c = |re, im| Complex64::new(re, im);
    [[c(v[2], 0.0), c(v[0], -v[1])], [c(v[0], v[1]), c(-v[2], 0.0)]]
}

/// Inverse of [`pauli_combination`] on Hermitian traceless input.
pub fn pauli_components(m: &Mat2) -> [f64; 3] {
    [
        0.5 * (m[0][1].re + m[1][0].re),
        0.5 * (m[1][0].im - m[0][1].im),
        0.5 * (m[0][0].re - m[1][1].re),
    ]
}

/// Coset coordinates `ξ` on the momentum sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiCoords {
    pub xi1: f64,
    pub xi2: f64,
}

impl XiCoords {
    pub fn new(xi1: f64, xi2: f64) -> Self {
        Self { xi1, xi2 }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.xi1.hypot(self.xi2)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::new(t * self.xi1, t * self.xi2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    pub xi_prime: XiCoords,
    /// In `(-2π, 2π]`.
    pub u_prime: f64,
}

impl CosetDecomposition {
    pub fn recompose(&self) -> Su2Element {
        exp_coset(self.xi_prime) * Su2Element::exp_v(self.u_prime)
    }
}

/// `e^{ξ₁A₁ + ξ₂A₂} = cos(|ξ|/2) 𝟙 - i sin(|ξ|/2)/|ξ| (ξ₁σ₁ + ξ₂σ₂)`.
pub fn exp_coset(xi: XiCoords) -> Su2Element {
    Su2Element::exp([xi.xi1, xi.xi2, 0.0])
}

/// `sin x / x`, continuous at zero.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Direction `κ` of the momentum with coset coordinates `ξ`:
/// `κ₁ = sinc|ξ| ξ₂`, `κ₂ = -sinc|ξ| ξ₁`, `κ₃ = cos|ξ|`.
pub fn xi_to_kappa(xi: XiCoords) -> Result<[f64; 3]> {
    let r = xi.norm();
    if !(r < PI) {
        return Err(Error::ChartDomain(format!("|xi| = {r} is not below pi")));
    }
    let s = sinc(r);
    Ok([s * xi.xi2, -s * xi.xi1, r.cos()])
}

/// Inverse of [`xi_to_kappa`] with the default guard. The input is
/// normalized first.
pub fn kappa_to_xi(kappa: [f64; 3]) -> Result<XiCoords> {
    kappa_to_xi_guarded(kappa, DEFAULT_GUARD)
}

pub fn kappa_to_xi_guarded(kappa: [f64; 3], guard: f64) -> Result<XiCoords> {
    let n = crate::expr::norm3(&kappa);
    if !(n > 0.0) {
        return Err(Error::DegenerateMomentum { norm: n });
    }
    let k = [kappa[0] / n, kappa[1] / n, kappa[2] / n];
    if !(1.0 + k[2] > guard) {
        return Err(Error::ChartDomain(format!(
            "kappa3 = {} is within the guard of the south pole",
            k[2]
        )));
    }
    let rho = k[0].hypot(k[1]);
    let r = rho.atan2(k[2]);
    let factor = 1.0 / sinc(r);
    Ok(XiCoords::new(-factor * k[1], factor * k[0]))
}

/// Factor `g₀ e^{ξ·A} = e^{ξ'·A} e^{u'V}`.
pub fn decompose(g0: &Su2Element, xi: XiCoords) -> Result<CosetDecomposition> {
    decompose_guarded(g0, xi, DEFAULT_GUARD)
}

pub fn decompose_guarded(g0: &Su2Element, xi: XiCoords, guard: f64) -> Result<CosetDecomposition> {
    let m = *g0 * exp_coset(xi);
    decompose_element(&m, guard)
}

/// Coset factorization of a single element `m = e^{ξ·A} e^{uV}`.
pub fn decompose_element(m: &Su2Element, guard: f64) -> Result<CosetDecomposition> {
    let abs_a = m.a.norm();
    let abs_b = m.b.norm();
    // κ₃' = cos|ξ'| = 2|a|² - 1 after normalization
    let kappa3 = (abs_a * abs_a - abs_b * abs_b) / (abs_a * abs_a + abs_b * abs_b);
    if !(1.0 + kappa3 > guard) {
        return Err(Error::DecompositionSingular { kappa3 });
    }
    let r = 2.0 * abs_b.atan2(abs_a);
    let mut u = -2.0 * m.a.arg();
    if u <= -2.0 * PI {
        u += 4.0 * PI;
    }
    // b = -i (sin(r/2)/r) (ξ₁ - iξ₂) e^{iu/2}
    let r_over_s = if r < 1e-6 { 2.0 } else { r / (0.5 * r).sin() };
    let w = Complex64::i() * m.b * Complex64::from_polar(1.0, -0.5 * u) * r_over_s;
    Ok(CosetDecomposition {
        xi_prime: XiCoords::new(w.re, -w.im),
        u_prime: u,
    })
}

/// Rates `(dξ₁, dξ₂, du)` of the coset rule under `𝟙 + τG`, in closed form.
/// Used as the reference that central differences of [`decompose`] are
/// compared against.
pub fn infinitesimal_rule(generator: Generator, xi: XiCoords) -> [f64; 3] {
    let (x1, x2) = (xi.xi1, xi.xi2);
    let r = xi.norm();
    let r2 = r * r;
    match generator {
        Generator::A1 => {
            let rc = r / r.tan();
            [
                (x1 * x1 + x2 * x2 * rc) / r2,
                x1 * x2 * (1.0 - rc) / r2,
                x2 / r * (0.5 * r).tan(),
            ]
        }
        Generator::A2 => {
            let rc = r / r.tan();
            [
                x1 * x2 * (1.0 - rc) / r2,
                (x2 * x2 + x1 * x1 * rc) / r2,
                -x1 / r * (0.5 * r).tan(),
            ]
        }
        Generator::V => [-x2, x1, 1.0],
    }
}

/// Central-difference rates of [`decompose`] at step `tau`.
pub fn decompose_rates(generator: Generator, xi: XiCoords, tau: f64) -> Result<[f64; 3]> {
    let plus = decompose(&Su2Element::infinitesimal(generator, tau), xi)?;
    let minus = decompose(&Su2Element::infinitesimal(generator, -tau), xi)?;
    let h = 2.0 * tau;
    Ok([
        (plus.xi_prime.xi1 - minus.xi_prime.xi1) / h,
        (plus.xi_prime.xi2 - minus.xi_prime.xi2) / h,
        (plus.u_prime - minus.u_prime) / h,
    ])
}

/// Wraps an angle difference into `(-2π, 2π]`.
pub fn wrap_4pi(u: f64) -> f64 {
    let mut v = u.rem_euclid(4.0 * PI);
    if v > 2.0 * PI {
        v -= 4.0 * PI;
    }
    v
}

/// Random element, uniform on the 3-sphere of unit quaternions.
pub fn random_element<R: Rng>(rng: &mut R) -> Su2Element {
    loop {
        let q = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = q.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return Su2Element::from_quaternion(q);
        }
    }
}

/// Random `ξ` with `|ξ|` uniform in `[min, max)` and uniform direction.
pub fn random_xi<R: Rng>(rng: &mut R, min: f64, max: f64) -> XiCoords {
    let r = rng.random_range(min..max);
    let phi = rng.random_range(-PI..PI);
    XiCoords::new(r * phi.cos(), r * phi.sin())
}

/// Largest margin to the chart cut used when sampling `ξ`.
pub const CHART_MARGIN: f64 = 0.1;
/// Step of the central differences checking the infinitesimal rules.
pub const RULE_STEP: f64 = 1e-6;
/// Tolerance for those differences.
pub const RULE_TOL: f64 = 1e-5;

/// Group arithmetic, chart dictionary and coset decomposition.
pub fn verify_su2(samples: usize, seed: u64, guard: f64) -> VerificationReport {
    let mut report = VerificationReport::new("su2");
    let n = samples.max(1);
    let max_r = PI - CHART_MARGIN;

    let label = "e^{xi A} has unit determinant";
    let mut rng = stream_rng(seed, label);
    let worst = (0..n)
        .map(|_| exp_coset(random_xi(&mut rng, 0.0, 10.0)).unitarity_defect())
        .fold(0.0, f64::max);
    report.push(IdentityRecord::holds(label, worst, n, 1e-14));

    let label = "xi -> kappa -> xi round trip";
    let mut rng = stream_rng(seed, label);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let xi = random_xi(&mut rng, 0.0, max_r);
        let d = xi_to_kappa(xi)
            .and_then(|k| kappa_to_xi_guarded(k, guard))
            .map(|back| (back.xi1 - xi.xi1).abs().max((back.xi2 - xi.xi2).abs()));
        worst = worst.max(d.unwrap_or(f64::INFINITY));
    }
    report.push(IdentityRecord::holds(label, worst, n, 1e-12));

    let label = "p.sigma = e^{xi A} |p| sigma3 (e^{xi A})^dagger";
    let mut rng = stream_rng(seed, label);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let xi = random_xi(&mut rng, 0.0, max_r);
        let pn = rng.random_range(0.5..2.0);
        let d = xi_to_kappa(xi).map(|k| {
            let g = exp_coset(xi).matrix();
            let gd = exp_coset(xi).dagger().matrix();
            let lhs = pauli_combination(k.map(|c| pn * c));
            let rhs = mat_mul(&mat_mul(&g, &pauli_combination([0.0, 0.0, pn])), &gd);
            let mut d = 0.0f64;
            for i in 0..2 {
                for j in 0..2 {
                    d = d.max((lhs[i][j] - rhs[i][j]).norm());
                }
            }
            d
        });
        worst = worst.max(d.unwrap_or(f64::INFINITY));
    }
    report.push(IdentityRecord::holds(label, worst, n, 1e-10));

    let label = "g0 e^{xi A} = e^{xi' A} e^{u' V}";
    let mut rng = stream_rng(seed, label);
    let (mut worst, mut worst_eq) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < n {
        let g0 = random_element(&mut rng);
        let xi = random_xi(&mut rng, 0.0, max_r);
        let Ok(dec) = decompose_guarded(&g0, xi, guard) else {
            continue;
        };
        done += 1;
        worst = worst.max(dec.recompose().distance(&(g0 * exp_coset(xi))));
        if let (Ok(k), Ok(kp)) = (xi_to_kappa(xi), xi_to_kappa(dec.xi_prime)) {
            let rk = g0.rotate(k);
            worst_eq = worst_eq.max((0..3).map(|i| (rk[i] - kp[i]).abs()).fold(0.0, f64::max));
        } else {
            worst_eq = f64::INFINITY;
        }
    }
    report.push(IdentityRecord::holds(label, worst, n, 1e-10));
    report.push(IdentityRecord::holds("kappa(xi') = g0 rotates kappa(xi)", worst_eq, n, 1e-10));

    for generator in Generator::ALL {
        let label = format!("infinitesimal rule under 1 + tau {}", generator.name());
        let mut rng = stream_rng(seed, &label);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let xi = random_xi(&mut rng, CHART_MARGIN, max_r);
            let d = decompose_rates(generator, xi, RULE_STEP).map(|rates| {
                let exact = infinitesimal_rule(generator, xi);
                (0..3).map(|i| (rates[i] - exact[i]).abs()).fold(0.0, f64::max)
            });
            worst = worst.max(d.unwrap_or(f64::INFINITY));
        }
        report.push(IdentityRecord::holds(label, worst, n, RULE_TOL));
    }
    report
}
