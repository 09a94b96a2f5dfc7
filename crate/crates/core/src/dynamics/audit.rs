use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::checks::{lyapunov_check, LyapunovReport};
use super::field::{ClosedOneFormFlat, TorusVectorField};
use super::graph::{
    build_box_digraph, chain_recurrent_set, homoclinic_cycle_detect, zero_isolation_check,
    GridParams, HomoclinicCycle, Isolation, IsolationVerdict,
};
use super::DynError;
use crate::cat::{report, CatBoundReport, ReportOptions};
use crate::complex::fixtures;

/// Hypotheses the audit records without checking.
pub const ASSUMED_HYPOTHESES: [&str; 2] = [
    "the set of points whose trajectories keep epsilon away from the zeros is a Euclidean neighbourhood retract (not checked)",
    "near each zero the field is compared with the gradient of the local primitive for the flat metric only",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditParams {
    pub grid: GridParams,
    /// Radius of the balls excluded from the Lyapunov sampling; defaults
    /// to `min(2 delta, separation / 2)`.
    pub epsilon: Option<f64>,
}

impl Default for AuditParams {
    fn default() -> Self {
        Self {
            grid: GridParams::default(),
            epsilon: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "hypothesis", rename_all = "snake_case")]
pub enum FailedHypothesis {
    Lyapunov {
        margin: Option<f64>,
        gradient_failures: Vec<usize>,
    },
    NotIsolated {
        zero: usize,
    },
    Homoclinic {
        cycles: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    HypothesisFailure,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRecord {
    pub dim: usize,
    pub zero_count: usize,
    pub zeros: Vec<Vec<f64>>,
    /// The class of the form, as `p/q` strings.
    pub class: Vec<String>,
    pub cat_lower: usize,
    pub cat_upper: usize,
    pub cat_exact: Option<usize>,
    pub params: AuditParams,
    /// Box side actually used.
    pub resolution: f64,
    pub boxes: usize,
    pub chain_recurrent_boxes: usize,
    pub lyapunov: LyapunovReport,
    pub isolation: Vec<IsolationVerdict>,
    pub homoclinic: Vec<HomoclinicCycle>,
    pub assumptions: Vec<String>,
    pub failed_hypotheses: Vec<FailedHypothesis>,
    pub verdict: Verdict,
    /// Suggested box side for a rerun after an INCONSISTENT verdict.
    pub refine_to: Option<f64>,
}

impl AuditRecord {
    /// Structural consistency of the record: PASS only when the zero count
    /// reaches the lower bound, and any other verdict matches the named
    /// failures.
    pub fn check(&self) -> Result<(), String> {
        if self.zero_count != self.zeros.len() {
            return Err(format!(
                "zero count {} but {} zeros listed",
                self.zero_count,
                self.zeros.len()
            ));
        }
        let short = self.zero_count < self.cat_lower;
        match self.verdict {
            Verdict::Pass if short => Err(format!(
                "PASS with {} zeros below the lower bound {}",
                self.zero_count, self.cat_lower
            )),
            Verdict::HypothesisFailure if !short || self.failed_hypotheses.is_empty() => {
                Err("HYPOTHESIS-FAILURE needs a shortfall and a named hypothesis".into())
            }
            Verdict::Inconsistent
                if !short || !self.failed_hypotheses.is_empty() || self.refine_to.is_none() =>
            {
                Err("INCONSISTENT needs a shortfall, no named hypothesis and a refinement".into())
            }
            _ => {
                let named = self
                    .failed_hypotheses
                    .iter()
                    .filter_map(|h| match h {
                        FailedHypothesis::NotIsolated { zero } => Some(*zero),
                        _ => None,
                    })
                    .collect::<Vec<_>>();
                let flagged = self
                    .isolation
                    .iter()
                    .filter(|i| i.status == Isolation::NotIsolated)
                    .map(|i| i.zero)
                    .collect::<Vec<_>>();
                if named != flagged {
                    return Err(
                        "named isolation failures differ from the isolation verdicts".into(),
                    );
                }
                Ok(())
            }
        }
    }

    /// Plain-text summary table.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let cat = match self.cat_exact {
            Some(e) => format!("{e} (exact)"),
            None => format!("[{}, {}]", self.cat_lower, self.cat_upper),
        };
        let margin = self
            .lyapunov
            .margin
            .map_or("n/a".into(), |m| format!("{m:.6}"));
        let _ = writeln!(s, "{:<24}{}", "zeros", self.zero_count);
        let _ = writeln!(s, "{:<24}{}", "Cat bound", cat);
        let _ = writeln!(s, "{:<24}{}", "resolution", self.resolution);
        let _ = writeln!(
            s,
            "{:<24}{} of {}",
            "chain-recurrent boxes", self.chain_recurrent_boxes, self.boxes
        );
        let _ = writeln!(
            s,
            "{:<24}{} (margin {margin})",
            "lyapunov",
            if self.lyapunov.pass { "PASS" } else { "FAIL" }
        );
        for i in &self.isolation {
            let status = match i.status {
                Isolation::Isolated => "ISOLATED",
                Isolation::NotIsolated => "NOT-ISOLATED",
            };
            let _ = writeln!(
                s,
                "{:<24}{status}({})",
                format!("zero #{} {:?}", i.zero, i.position),
                i.resolution
            );
        }
        let _ = writeln!(
            s,
            "{:<24}{}",
            "homoclinic candidates",
            self.homoclinic.len()
        );
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::HypothesisFailure => "HYPOTHESIS-FAILURE",
            Verdict::Inconsistent => "INCONSISTENT",
        };
        let _ = writeln!(s, "{:<24}{verdict}", "verdict");
        if let Some(d) = self.refine_to {
            let _ = writeln!(s, "{:<24}rerun with delta = {d}", "suggestion");
        }
        s
    }
}

/// Cat bounds for `(T^n, [omega])` on the 3-per-axis triangulated torus,
/// with the rational class cleared of denominators.
pub fn torus_cat_report(
    class: &[BigRational],
    opts: &ReportOptions,
) -> Result<CatBoundReport, DynError> {
    let n = class.len();
    if !(2..=3).contains(&n) {
        return Err(DynError::UnsupportedDimension(n));
    }
    let lcm = class
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = class
        .iter()
        .map(|c| (c.numer() * (&lcm / c.denom())).to_i64())
        .collect::<Option<Vec<i64>>>()
        .ok_or_else(|| DynError::InvalidParameter("class entries too large".into()))?;
    let k = fixtures::torus(n, 3);
    let xi = fixtures::torus_class(n, 3, &ints);
    Ok(report(&k, &xi, opts)?)
}

/// Compares the zero count of `v` with the lower bound of `cat_report`,
/// naming every failed hypothesis found by the Lyapunov, isolation and
/// homoclinic checks.
pub fn audit(
    v: &TorusVectorField,
    omega: &ClosedOneFormFlat,
    params: &AuditParams,
    cat_report: &CatBoundReport,
) -> Result<AuditRecord, DynError> {
    let g = build_box_digraph(v, &params.grid)?;
    let zeros = v.zeros().to_vec();
    let isolation = zero_isolation_check(&g, &zeros)?;
    let homoclinic = homoclinic_cycle_detect(&g, &zeros);
    let separation = v.zero_separation();
    let epsilon = params
        .epsilon
        .unwrap_or((2.0 * g.delta()).min(separation / 2.0));
    let lyapunov = lyapunov_check(v, omega, epsilon)?;

    let mut failed = Vec::new();
    if !lyapunov.pass {
        failed.push(FailedHypothesis::Lyapunov {
            margin: lyapunov.margin,
            gradient_failures: lyapunov
                .gradient
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.zero)
                .collect(),
        });
    }
    for i in &isolation {
        if i.status == Isolation::NotIsolated {
            failed.push(FailedHypothesis::NotIsolated { zero: i.zero });
        }
    }
    if !homoclinic.is_empty() {
        failed.push(FailedHypothesis::Homoclinic {
            cycles: homoclinic.len(),
        });
    }

    let k = zeros.len();
    let (verdict, refine_to) = if k >= cat_report.lower {
        (Verdict::Pass, None)
    } else if !failed.is_empty() {
        (Verdict::HypothesisFailure, None)
    } else {
        (Verdict::Inconsistent, Some(g.delta() / 2.0))
    };
    let record = AuditRecord {
        dim: v.dim(),
        zero_count: k,
        zeros,
        class: omega.class().iter().map(ToString::to_string).collect(),
        cat_lower: cat_report.lower,
        cat_upper: cat_report.upper,
        cat_exact: cat_report.exact,
        params: AuditParams {
            grid: params.grid.clone(),
            epsilon: Some(epsilon),
        },
        resolution: g.delta(),
        boxes: g.node_count(),
        chain_recurrent_boxes: chain_recurrent_set(&g).len(),
        lyapunov,
        isolation,
        homoclinic,
        assumptions: ASSUMED_HYPOTHESES.iter().map(|s| s.to_string()).collect(),
        failed_hypotheses: failed,
        verdict,
        refine_to,
    };
    debug_assert!(record.check().is_ok());
    Ok(record)
}
