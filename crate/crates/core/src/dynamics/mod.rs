//! Flows on the flat tori `T^2` and `T^3`: RK4 integration, box digraphs
//! approximating chain recurrence from outside, Lyapunov 1-form checks,
//! zero isolation, homoclinic cycle candidates and the zero-count audit.

mod audit;
mod checks;
mod expr;
mod field;
pub mod fixtures;
mod graph;

use thiserror::Error;

pub use audit::{
    audit, torus_cat_report, AuditParams, AuditRecord, FailedHypothesis, Verdict,
    ASSUMED_HYPOTHESES,
};
pub use checks::{
    convexity_probe, lyapunov_check, ConvexityVerdict, GradientCheck, LyapunovReport, ANGLE_TOL,
};
pub use expr::Expr;
pub use field::{flow_map, torus_dist, wrap, ClosedOneFormFlat, TorusVectorField, STEP, ZERO_TOL};
pub use graph::{
    build_box_digraph, chain_recurrent_set, homoclinic_cycle_detect, zero_isolation_check,
    BoxDigraph, GridParams, HomoclinicCycle, Isolation, IsolationVerdict,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable or function {0:?}")]
    UnknownVariable(String),
    #[error("non-finite field value at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("expression is not 1-periodic in x{axis}")]
    NotPeriodic { axis: usize },
    #[error("declared zero #{0} is not a zero of the field")]
    ZeroNotVerified(usize),
    #[error("field nearly vanishes at undeclared point {0:?}")]
    UndeclaredZero(Vec<f64>),
    #[error("only T^2 and T^3 are supported, got dimension {0}")]
    UnsupportedDimension(usize),
    #[error("box size {0} outside (0, 0.5]")]
    DeltaOutOfRange(f64),
    #[error("flow time must be positive and finite, got {0}")]
    TimeNotPositive(f64),
    #[error("integration budget exceeded: {required} steps needed, cap {cap}")]
    BudgetExceeded { required: u64, cap: u64 },
    #[error("epsilon {epsilon} exceeds half the zero separation {separation}")]
    EpsilonTooLarge { epsilon: f64, separation: f64 },
    #[error("zeros #{0} and #{1} are closer than 8 box sizes; refine the grid")]
    ZerosTooClose(usize, usize),
    #[error("ball of radius {radius} around zero #{zero} meets zero #{other}")]
    BallOverlap {
        zero: usize,
        other: usize,
        radius: f64,
    },
    #[error("index {0} is not a declared zero")]
    NoSuchZero(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Cat(#[from] crate::cat::CatError),
}
