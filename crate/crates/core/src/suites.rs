//! Named verification suites, as driven by the command-line harness.
//!
//! Operator identities use `cfg.tol`. Numerical suites (`su2`, `ccwz`) carry
//! their own tolerances, fixed by the integrator and difference steps.

use std::fmt;
use std::str::FromStr;

use crate::ccwz::{verify_ccwz, verify_field_components};
use crate::diffop::OpChecker;
use crate::error::{Error, Result};
use crate::gauge::verify_gauge_invariance;
use crate::poincare::{
    build_generators, helicity_identity, verify_hermiticity, verify_poincare_table, verify_residuals, HelicityParams,
};
use crate::pryce::{
    build_pryce, verify_canonicality, verify_homogeneous_family, verify_n_form, verify_noncommutativity,
    verify_special_solution, verify_vector_law, PhiChoice,
};
use crate::report::{RunConfig, VerificationReport};
use crate::sampling::SampleDomain;
use crate::su2::verify_su2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Poincare,
    Residuals,
    Pryce,
    Gauge,
    Su2,
    Ccwz,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["poincare", "residuals", "pryce", "gauge", "su2", "ccwz", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Poincare => "poincare",
            Suite::Residuals => "residuals",
            Suite::Pryce => "pryce",
            Suite::Gauge => "gauge",
            Suite::Su2 => "su2",
            Suite::Ccwz => "ccwz",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "poincare" => Suite::Poincare,
            "residuals" => Suite::Residuals,
            "pryce" => Suite::Pryce,
            "gauge" => Suite::Gauge,
            "su2" => Suite::Su2,
            "ccwz" => Suite::Ccwz,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown suite `{other}` (expected one of {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

fn checker(cfg: &RunConfig) -> OpChecker {
    let mut c = OpChecker::new(cfg.samples, cfg.seed, cfg.tol).with_domain(SampleDomain::default().with_guard(cfg.guard));
    c.lambda = cfg.lambda;
    c
}

fn poincare(cfg: &RunConfig) -> VerificationReport {
    let gs = build_generators(HelicityParams::new(cfg.lambda));
    let c = checker(cfg);
    let mut report = verify_poincare_table(&gs, &c);
    report.absorb(helicity_identity(&gs, &c));
    report.absorb(verify_hermiticity(&gs, &c));
    report
}

fn residuals(cfg: &RunConfig) -> VerificationReport {
    let gs = build_generators(HelicityParams::new(cfg.lambda));
    verify_residuals(&gs, &checker(cfg))
}

fn pryce(cfg: &RunConfig) -> VerificationReport {
    let params = HelicityParams::new(cfg.lambda);
    let gs = build_generators(params);
    let c = checker(cfg);
    let mut report = VerificationReport::new("pryce");
    report.absorb(verify_special_solution(params, &gs, &c));
    for phi in [PhiChoice::Zero, PhiChoice::InverseNorm(1.0)] {
        let ps = build_pryce(params, phi);
        report.absorb(verify_vector_law(&ps, &gs, &c));
        report.absorb(verify_noncommutativity(&ps, &c));
        report.absorb(verify_canonicality(&ps, &c));
        report.absorb(verify_n_form(&ps, &gs, &c));
    }
    report.absorb(verify_homogeneous_family(&c));
    report
}

fn gauge(cfg: &RunConfig) -> Result<VerificationReport> {
    verify_gauge_invariance(HelicityParams::new(cfg.lambda), &checker(cfg))
}

fn su2(cfg: &RunConfig) -> VerificationReport {
    verify_su2(cfg.samples, cfg.seed, cfg.guard)
}

fn ccwz(cfg: &RunConfig) -> VerificationReport {
    let mut report = verify_ccwz(cfg.lambda, cfg.samples, cfg.seed, cfg.steps, cfg.guard);
    report.absorb(verify_field_components(cfg.lambda, &checker(cfg)));
    report
}

/// Runs `suite` under `cfg`. The result echoes the configuration.
///
/// `gauge` requires integer λ; `all` skips it with a note otherwise.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut report = match suite {
        Suite::Poincare => poincare(cfg),
        Suite::Residuals => residuals(cfg),
        Suite::Pryce => pryce(cfg),
        Suite::Gauge => gauge(cfg)?,
        Suite::Su2 => su2(cfg),
        Suite::Ccwz => ccwz(cfg),
        Suite::All => {
            let mut all = VerificationReport::new("all");
            all.absorb(poincare(cfg));
            all.absorb(residuals(cfg));
            all.absorb(pryce(cfg));
            match gauge(cfg) {
                Ok(r) => all.absorb(r),
                Err(Error::NonIntegerHelicity(l)) => {
                    all.note(format!("gauge suite skipped: lambda = {l} is not an integer"));
                }
                Err(e) => return Err(e),
            }
            all.absorb(su2(cfg));
            all.absorb(ccwz(cfg));
            all
        }
    };
    report.suite = suite.name().to_string();
    report.config = Some(cfg.clone());
    Ok(report)
}

pub fn run_suite_by_name(name: &str, cfg: &RunConfig) -> Result<VerificationReport> {
    run_suite(name.parse()?, cfg)
}
