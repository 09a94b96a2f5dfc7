use std::path::{Path, PathBuf};

use catxi::algebra::rational::parse_rational;
use catxi::algebra::BigRational;
use catxi::cat::{default_pool, report, ReportOptions};
use catxi::complex::{parse_cocycle, parse_complex};
use catxi::dynamics::{
    audit, torus_cat_report, AuditParams, ClosedOneFormFlat, Expr, GridParams, TorusVectorField,
    Verdict,
};
use clap::Args;
use serde::Deserialize;
use serde_json::json;

use crate::commands::cat_failure;
use crate::{
    emit, input_error, parse_pool, read, Failure, Output, HYPOTHESIS_FAILURE, INCONSISTENT,
};

#[derive(Args)]
pub struct FlowArgs {
    /// TOML flow description.
    spec: PathBuf,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    time: Option<f64>,
    /// Samples per box and axis.
    #[arg(long)]
    samples: Option<usize>,
    /// Radius of the balls around zeros left out of the Lyapunov check.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Multiple of delta added to every image when building edges.
    #[arg(long)]
    fattening: Option<f64>,
    #[arg(long)]
    pool: Option<String>,
    #[arg(long)]
    user_cat: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowSpec {
    dim: usize,
    field: Vec<String>,
    #[serde(default)]
    zeros: Vec<Vec<f64>>,
    form: FormSpec,
    #[serde(default)]
    grid: GridSpec,
    cat: Option<CatSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormSpec {
    /// Cohomology class as rationals `"p/q"`, one per axis.
    class: Vec<String>,
    /// Periodic primitive of the exact part.
    #[serde(default = "zero_expr")]
    exact: String,
}

fn zero_expr() -> String {
    "0".into()
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    delta: Option<f64>,
    time: Option<f64>,
    samples: Option<usize>,
    epsilon: Option<f64>,
    fattening: Option<f64>,
}

/// Complex and class to take the category bound from, instead of the
/// standard triangulated torus.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatSpec {
    complex: Option<PathBuf>,
    cocycle: Option<PathBuf>,
    user_cat: Option<usize>,
    pool: Option<Vec<String>>,
}

fn rational(s: &str) -> Result<BigRational, Failure> {
    parse_rational(s.trim()).ok_or_else(|| input_error(format!("bad rational {s:?}")))
}

fn relative(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

pub fn flow_audit(args: &FlowArgs) -> Result<(), Failure> {
    let text = read(&args.spec)?;
    let spec: FlowSpec =
        toml::from_str(&text).map_err(|e| input_error(format!("{}: {e}", args.spec.display())))?;
    if spec.field.len() != spec.dim {
        return Err(input_error(format!(
            "field has {} components for dimension {}",
            spec.field.len(),
            spec.dim
        )));
    }
    if spec.form.class.len() != spec.dim {
        return Err(input_error(format!(
            "form class has {} entries for dimension {}",
            spec.form.class.len(),
            spec.dim
        )));
    }
    let components: Vec<&str> = spec.field.iter().map(String::as_str).collect();
    let v = TorusVectorField::parse(&components, spec.zeros.clone()).map_err(input_error)?;
    let class = spec
        .form
        .class
        .iter()
        .map(|c| rational(c))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = Expr::parse(&spec.form.exact, spec.dim).map_err(input_error)?;
    let omega = ClosedOneFormFlat::new(class.clone(), exact).map_err(input_error)?;

    let defaults = GridParams::default();
    let grid = GridParams {
        delta: args.delta.or(spec.grid.delta).unwrap_or(defaults.delta),
        time: args.time.or(spec.grid.time).unwrap_or(defaults.time),
        samples_per_box: args
            .samples
            .or(spec.grid.samples)
            .unwrap_or(defaults.samples_per_box),
        fattening: args
            .fattening
            .or(spec.grid.fattening)
            .unwrap_or(defaults.fattening),
        step_budget: defaults.step_budget,
    };
    let params = AuditParams {
        grid,
        epsilon: args.epsilon.or(spec.grid.epsilon),
    };

    let cat_spec = spec.cat.as_ref();
    let pool = match (&args.pool, cat_spec.and_then(|c| c.pool.as_ref())) {
        (Some(s), _) => parse_pool(s)?,
        (None, Some(p)) => p.iter().map(|x| rational(x)).collect::<Result<_, _>>()?,
        (None, None) => default_pool(),
    };
    let opts = ReportOptions {
        pool,
        max_r: None,
        user_cat: args.user_cat.or(cat_spec.and_then(|c| c.user_cat)),
        cat_y: None,
    };
    let cat_report = match cat_spec.map(|c| (&c.complex, &c.cocycle)) {
        Some((Some(cx), Some(cc))) => {
            let (cx, cc) = (relative(&args.spec, cx), relative(&args.spec, cc));
            let k = parse_complex(&read(&cx)?)
                .map_err(|e| input_error(format!("{}: {e}", cx.display())))?;
            let xi = parse_cocycle(&read(&cc)?)
                .map_err(|e| input_error(format!("{}: {e}", cc.display())))?;
            report(&k, &xi, &opts).map_err(cat_failure)?
        }
        Some((None, None)) | None => torus_cat_report(&class, &opts).map_err(|e| match e {
            catxi::dynamics::DynError::Cat(c) => cat_failure(c),
            other => input_error(other),
        })?,
        Some(_) => return Err(input_error("[cat] needs both complex and cocycle")),
    };

    let record = audit(&v, &omega, &params, &cat_report).map_err(input_error)?;
    record.check().map_err(|e| Failure {
        code: INCONSISTENT,
        message: format!("audit record is malformed: {e}"),
    })?;
    emit(&json!(record), Some(&record.summary()), &args.out)?;
    match record.verdict {
        Verdict::Pass => Ok(()),
        Verdict::HypothesisFailure => Err(Failure {
            code: HYPOTHESIS_FAILURE,
            message: String::new(),
        }),
        Verdict::Inconsistent => Err(Failure {
            code: INCONSISTENT,
            message: String::new(),
        }),
    }
}
