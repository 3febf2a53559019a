//! Complex-valued expression trees over the momentum components.
//!
//! Every coefficient function that appears in the generators (|p|, the
//! direction cosines `kappa_i = p_i/|p|`, the helicity corrections) is an
//! [`Expr`]. Trees are immutable and reference counted, so derivatives can
//! share the subtrees of the expression they came from.
//!
//! There is no simplifier beyond constant folding in the smart
//! constructors. Two expressions are compared by evaluating them at
//! sampled momenta (see [`crate::diffop::ops_equal`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default guard on `1 + kappa3`.
pub const DEFAULT_GUARD: f64 = 1e-6;

/// One of the three momentum axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    P1,
    P2,
    P3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::P1, Axis::P2, Axis::P3];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Axis::P1 => 0,
            Axis::P2 => 1,
            Axis::P3 => 2,
        }
    }

    /// Builds an axis from a zero-based index.
    ///
    /// Panics if `i > 2`.
    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    /// One-based label used in identity names.
    pub fn label(self) -> usize {
        self.index() + 1
    }
}

/// Levi-Civita symbol on zero-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Kronecker delta on zero-based indices.
pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Point at which expressions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext {
    p: [f64; 3],
    norm: f64,
    lambda: f64,
    guard: f64,
}

impl EvalContext {
    /// Context with the default guard.
    pub fn new(p: [f64; 3], lambda: f64) -> Result<Self> {
        Self::with_guard(p, lambda, DEFAULT_GUARD)
    }

    /// Fails with `DegenerateMomentum` for `|p| = 0` and with
    /// `GuardedSingularity` when `1 + kappa3 <= guard`.
    pub fn with_guard(p: [f64; 3], lambda: f64, guard: f64) -> Result<Self> {
        let norm = norm3(&p);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateMomentum { norm });
        }
        let margin = 1.0 + p[2] / norm;
        if !(margin > guard) {
            return Err(Error::GuardedSingularity {
                what: "1 + kappa3",
                value: margin,
                guard,
            });
        }
        Ok(Self {
            p,
            norm,
            lambda,
            guard,
        })
    }

    pub fn p(&self) -> [f64; 3] {
        self.p
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn kappa(&self) -> [f64; 3] {
        [
            self.p[0] / self.norm,
            self.p[1] / self.norm,
            self.p[2] / self.norm,
        ]
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[derive(Debug)]
enum Node {
    Const(Complex64),
    Var(Axis),
    Lambda,
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Expr),
    Pow(Expr, i32),
    Recip(Expr),
    /// Only ever wraps `p1^2 + p2^2 + p3^2`; see [`Expr::norm`].
    Sqrt(Expr),
}

/// Immutable complex expression in `p1, p2, p3` and the helicity parameter.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::constant(Complex64::i())
    }

    /// Momentum component `p_k`.
    pub fn p(axis: Axis) -> Self {
        Self::node(Node::Var(axis))
    }

    /// The helicity parameter, bound at evaluation time from the context.
    pub fn lambda() -> Self {
        Self::node(Node::Lambda)
    }

    /// `|p| = sqrt(p1^2 + p2^2 + p3^2)`.
    pub fn norm() -> Self {
        let sq = Self::sum(Axis::ALL.iter().map(|&a| Self::p(a).powi(2)).collect());
        Self::node(Node::Sqrt(sq))
    }

    /// Direction cosine `kappa_k = p_k / |p|`.
    pub fn kappa(axis: Axis) -> Self {
        Self::p(axis) * Self::norm().recip()
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    /// Sum with zero dropping and constant folding.
    pub fn sum(terms: Vec<Expr>) -> Self {
        let mut constant = Complex64::new(0.0, 0.0);
        let mut rest = Vec::with_capacity(terms.len());
        for t in terms {
            match &*t.0 {
                Node::Const(c) => constant += c,
                Node::Sum(inner) => {
                    for u in inner {
                        match u.as_const() {
                            Some(c) => constant += c,
                            None => rest.push(u.clone()),
                        }
                    }
                }
                _ => rest.push(t),
            }
        }
        if constant != Complex64::new(0.0, 0.0) {
            rest.push(Self::constant(constant));
        }
        match rest.len() {
            0 => Self::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Sum(rest)),
        }
    }

    /// Product with constant folding; any zero factor collapses the product.
    pub fn product(factors: Vec<Expr>) -> Self {
        let mut constant = Complex64::new(1.0, 0.0);
        let mut rest = Vec::with_capacity(factors.len());
        for f in factors {
            match &*f.0 {
                Node::Const(c) => constant *= c,
                Node::Product(inner) => {
                    for u in inner {
                        match u.as_const() {
                            Some(c) => constant *= c,
                            None => rest.push(u.clone()),
                        }
                    }
                }
                _ => rest.push(f),
            }
        }
        if constant == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        if constant != Complex64::new(1.0, 0.0) {
            rest.insert(0, Self::constant(constant));
        }
        match rest.len() {
            0 => Self::one(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Product(rest)),
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        match n {
            0 => Self::one(),
            1 => self.clone(),
            _ => match self.as_const() {
                Some(c) => Self::constant(c.powi(n)),
                None => Self::node(Node::Pow(self.clone(), n)),
            },
        }
    }

    pub fn recip(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(c.inv()),
            None => Self::node(Node::Recip(self.clone())),
        }
    }

    /// Complex conjugate. Variables and the helicity parameter are real.
    pub fn conj(&self) -> Self {
        match &*self.0 {
            Node::Const(c) => Self::constant(c.conj()),
            Node::Var(_) | Node::Lambda => self.clone(),
            Node::Sum(ts) => Self::sum(ts.iter().map(Expr::conj).collect()),
            Node::Product(fs) => Self::product(fs.iter().map(Expr::conj).collect()),
            Node::Neg(e) => -e.conj(),
            Node::Pow(e, n) => e.conj().powi(*n),
            Node::Recip(e) => e.conj().recip(),
            // argument is p.p, real and positive
            Node::Sqrt(_) => self.clone(),
        }
    }

    /// Exact partial derivative with respect to `p_axis`.
    pub fn differentiate(&self, axis: Axis) -> Expr {
        match &*self.0 {
            Node::Const(_) | Node::Lambda => Self::zero(),
            Node::Var(a) => {
                if *a == axis {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Node::Sum(ts) => Self::sum(ts.iter().map(|t| t.differentiate(axis)).collect()),
            Node::Product(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for (i, fi) in fs.iter().enumerate() {
                    let d = fi.differentiate(axis);
                    if d.is_zero() {
                        continue;
                    }
                    let mut factors = Vec::with_capacity(fs.len());
                    factors.push(d);
                    factors.extend(
                        fs.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != i)
                            .map(|(_, f)| f.clone()),
                    );
                    terms.push(Self::product(factors));
                }
                Self::sum(terms)
            }
            Node::Neg(e) => -e.differentiate(axis),
            Node::Pow(e, n) => {
                let d = e.differentiate(axis);
                Self::product(vec![Self::real(*n as f64), e.powi(n - 1), d])
            }
            Node::Recip(e) => {
                let d = e.differentiate(axis);
                -Self::product(vec![d, e.recip().powi(2)])
            }
            Node::Sqrt(s) => {
                let d = s.differentiate(axis);
                Self::product(vec![Self::real(0.5), d, self.recip()])
            }
        }
    }

    /// Numerical value at `ctx`.
    pub fn evaluate(&self, ctx: &EvalContext) -> Result<Complex64> {
        let v = self.eval_inner(ctx)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::GuardedSingularity {
                what: "expression value",
                value: f64::INFINITY,
                guard: ctx.guard,
            });
        }
        Ok(v)
    }

    fn eval_inner(&self, ctx: &EvalContext) -> Result<Complex64> {
        Ok(match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(a) => Complex64::new(ctx.p[a.index()], 0.0),
            Node::Lambda => Complex64::new(ctx.lambda, 0.0),
            Node::Sum(ts) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in ts {
                    acc += t.eval_inner(ctx)?;
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= f.eval_inner(ctx)?;
                }
                acc
            }
            Node::Neg(e) => -e.eval_inner(ctx)?,
            Node::Pow(e, n) => e.eval_inner(ctx)?.powi(*n),
            Node::Recip(e) => {
                let d = e.eval_inner(ctx)?;
                if d.norm() == 0.0 {
                    return Err(Error::GuardedSingularity {
                        what: "denominator",
                        value: 0.0,
                        guard: ctx.guard,
                    });
                }
                d.inv()
            }
            Node::Sqrt(s) => {
                let v = s.eval_inner(ctx)?;
                Complex64::new(v.re.sqrt(), 0.0)
            }
        })
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn size(&self) -> usize {
        1 + match &*self.0 {
            Node::Const(_) | Node::Var(_) | Node::Lambda => 0,
            Node::Sum(v) | Node::Product(v) => v.iter().map(Expr::size).sum(),
            Node::Neg(e) | Node::Pow(e, _) | Node::Recip(e) | Node::Sqrt(e) => e.size(),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) if c.im == 0.0 => write!(f, "{}", c.re),
            Node::Const(c) => write!(f, "({}{:+}i)", c.re, c.im),
            Node::Var(a) => write!(f, "p{}", a.label()),
            Node::Lambda => write!(f, "lambda"),
            Node::Sum(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Product(fs) => {
                for (i, t) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Node::Neg(e) => write!(f, "-({e})"),
            Node::Pow(e, n) => write!(f, "({e})^{n}"),
            Node::Recip(e) => write!(f, "1/({e})"),
            Node::Sqrt(e) => write!(f, "sqrt{e}"),
        }
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Self {
        Expr::real(x)
    }
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Self {
        Expr::constant(c)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match &*self.0 {
            Node::Const(c) => Expr::constant(-c),
            Node::Neg(e) => e.clone(),
            _ => Expr::node(Node::Neg(self)),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let ($a, $b) = (self, rhs.clone());
                $body
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let ($a, $b) = (self.clone(), rhs);
                $body
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let ($a, $b) = (self.clone(), rhs.clone());
                $body
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                let ($a, $b) = (self, Expr::real(rhs));
                $body
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let ($a, $b) = (Expr::real(self), rhs);
                $body
            }
        }
        impl $tr<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let ($a, $b) = (Expr::real(self), rhs.clone());
                $body
            }
        }
        impl $tr<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                let ($a, $b) = (self.clone(), Expr::real(rhs));
                $body
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum(vec![a, b]));
binop!(Sub, sub, |a, b| Expr::sum(vec![a, -b]));
binop!(Mul, mul, |a, b| Expr::product(vec![a, b]));
binop!(Div, div, |a, b| {
    if b.is_one() {
        a
    } else {
        Expr::product(vec![a, b.recip()])
    }
});
