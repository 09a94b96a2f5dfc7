use std::path::{Path, PathBuf};

use catxi::cat::{default_pool, report, CatError, ReportOptions};
use catxi::complex::{
    fundamental_loops, parse_cocycle, parse_complex, IntegerOneCocycle, SimplicialComplex,
};
use catxi::cover::{
    build_laurent_complex, homology_module, integer_chain, loop_chain, movability_verdict,
    move_cycle_witness, CoverError, End, LaurentChain, Movability, MoveWitness,
};
use clap::Args;
use serde_json::{json, Value};

use crate::{emit, input_error, parse_pool, read, Failure, Output, INCONSISTENT, INPUT_ERROR};

fn load_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    parse_complex(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_cocycle(path: &Path, k: &SimplicialComplex) -> Result<IntegerOneCocycle, Failure> {
    let xi =
        parse_cocycle(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    xi.check(k)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(xi)
}

/// Loads a complex and refuses one that fails validation.
fn load_valid(path: &Path) -> Result<SimplicialComplex, Failure> {
    let k = load_complex(path)?;
    k.ensure_valid()
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(k)
}

pub fn complex(path: &Path, cocycle: Option<&Path>, out: &Output) -> Result<(), Failure> {
    let k = load_complex(path)?;
    let validation = k.validate();
    let mut report = json!({ "validation": validation });
    if !validation.ok {
        emit(&report, None, out)?;
        return Err(Failure {
            code: INPUT_ERROR,
            message: format!("{}: complex failed validation", path.display()),
        });
    }
    let betti = k.betti_numbers();
    report["betti"] = json!(betti);
    report["connected"] = json!(k.is_connected());
    let mut summary = format!("betti numbers: {betti:?}\n");
    if let Some(c) = cocycle {
        let xi = load_cocycle(c, &k)?;
        let loops: Vec<Value> = fundamental_loops(&k)
            .iter()
            .map(|p| {
                let period = xi.period(&k, p).map_err(input_error)?;
                Ok(json!({ "loop": p.vertices(), "period": period }))
            })
            .collect::<Result<_, Failure>>()?;
        let gcd = xi.period_gcd(&k);
        summary.push_str(&format!(
            "{} fundamental loops, period gcd {gcd}\n",
            loops.len()
        ));
        report["periods"] = json!(loops);
        report["period_gcd"] = json!(gcd);
    }
    emit(&report, Some(&summary), out)
}

#[derive(Args)]
pub struct MovabilityArgs {
    complex: PathBuf,
    cocycle: PathBuf,
    /// Restrict the module report to this degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Closed edge path `v0,v1,...,v0` whose lift is the 1-cycle to move.
    #[arg(long = "loop", value_name = "VERTICES")]
    cycle_loop: Option<String>,
    /// Vertex whose lift is the 0-cycle to move; the default target.
    #[arg(long)]
    vertex: Option<usize>,
    /// Height the moved cycle must clear.
    #[arg(long, default_value_t = 3)]
    threshold: i64,
    #[command(flatten)]
    out: Output,
}

fn chain_json(c: &LaurentChain) -> Value {
    Value::Object(
        c.iter()
            .map(|(i, p)| (i.to_string(), json!(p.to_string())))
            .collect(),
    )
}

fn witness_json(w: &MoveWitness, verified: bool) -> Value {
    json!({
        "end": w.end,
        "threshold": w.threshold,
        "multiplier": w.multiplier.to_string(),
        "polynomial": w.polynomial.to_string(),
        "exponent": w.exponent,
        "b": w.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "cycle": chain_json(&w.cycle),
        "moved": chain_json(&w.moved),
        "bounding": chain_json(&w.bounding),
        "window": [w.window.0, w.window.1],
        "verified": verified,
    })
}

fn parse_loop(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| input_error(format!("bad vertex in loop: {v:?}")))
        })
        .collect()
}

pub fn movability(args: &MovabilityArgs) -> Result<(), Failure> {
    if args.threshold < 1 {
        return Err(input_error("threshold must be at least 1"));
    }
    let k = load_valid(&args.complex)?;
    let xi = load_cocycle(&args.cocycle, &k)?;
    let l = build_laurent_complex(&k, &xi).map_err(input_error)?;
    if xi.period_gcd(&k) == 0 {
        return Err(input_error(CoverError::ZeroClass));
    }
    let dim = l.dim();
    let degrees: Vec<usize> = match args.degree {
        Some(q) if q > dim => {
            return Err(input_error(format!("degree {q} exceeds dimension {dim}")))
        }
        Some(q) => vec![q],
        None => (0..=dim).collect(),
    };
    let modules = degrees
        .iter()
        .map(|&q| homology_module(&l, q).map(|m| json!(m)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_error)?;

    let (q, z, label) = match (&args.cycle_loop, args.vertex) {
        (Some(_), Some(_)) => return Err(input_error("give either --loop or --vertex, not both")),
        (Some(s), None) => {
            let vs = parse_loop(s)?;
            if vs.len() < 2 || vs.first() != vs.last() {
                return Err(input_error("loop must start and end at the same vertex"));
            }
            (
                1,
                loop_chain(&l, &vs).map_err(input_error)?,
                json!({ "loop": vs }),
            )
        }
        (None, v) => {
            let v = v.unwrap_or(0);
            if v >= k.vertex_count() {
                return Err(input_error(format!("vertex {v} not in the complex")));
            }
            (0, integer_chain(&[(v, 1)]), json!({ "vertex": v }))
        }
    };
    let verdict = movability_verdict(&l, q, &z).map_err(input_error)?;
    let mut witnesses = Vec::new();
    let mut summary = format!(
        "degree {q} target: minus end {:?}, plus end {:?}\n",
        verdict.minus_end, verdict.plus_end
    );
    for end in [End::Minus, End::Plus] {
        if verdict.at(end) == Movability::No {
            continue;
        }
        let w = move_cycle_witness(&l, q, &z, end, args.threshold).map_err(|e| Failure {
            code: INCONSISTENT,
            message: format!("verdict grants the {end} end but no witness was found: {e}"),
        })?;
        let ok = w.verify(&l);
        if !ok {
            return Err(Failure {
                code: INCONSISTENT,
                message: format!("witness for the {end} end failed verification"),
            });
        }
        summary.push_str(&format!(
            "{end} end witness verified, multiplier {}\n",
            w.multiplier
        ));
        witnesses.push(witness_json(&w, ok));
    }
    let report = json!({
        "modules": modules,
        "target": { "degree": q, "source": label, "chain": chain_json(&z) },
        "verdict": verdict,
        "witnesses": witnesses,
    });
    emit(&report, Some(&summary), &args.out)
}

#[derive(Args)]
pub struct CatboundsArgs {
    complex: PathBuf,
    cocycle: PathBuf,
    /// Monodromies for the certificate search, e.g. `2,1/2,3`.
    #[arg(long)]
    pool: Option<String>,
    /// Known category of the complex.
    #[arg(long)]
    user_cat: Option<usize>,
    /// Known category of `Y` when the complex is a wedge `Y v S^1`.
    #[arg(long)]
    cat_y: Option<usize>,
    /// Largest product length tried by the certificate search.
    #[arg(long)]
    max_r: Option<usize>,
    #[command(flatten)]
    out: Output,
}

pub fn cat_failure(e: CatError) -> Failure {
    match e {
        CatError::Inconsistent { .. } | CatError::InvalidCertificate(_) => Failure {
            code: INCONSISTENT,
            message: e.to_string(),
        },
        other => input_error(other),
    }
}

pub fn catbounds(args: &CatboundsArgs) -> Result<(), Failure> {
    let k = load_valid(&args.complex)?;
    let xi = load_cocycle(&args.cocycle, &k)?;
    let pool = match &args.pool {
        Some(s) => parse_pool(s)?,
        None => default_pool(),
    };
    let opts = ReportOptions {
        pool,
        max_r: args.max_r,
        user_cat: args.user_cat,
        cat_y: args.cat_y,
    };
    let r = report(&k, &xi, &opts).map_err(cat_failure)?;
    let exact = r
        .exact
        .map_or_else(|| "unknown".to_string(), |e| e.to_string());
    let summary = format!("Cat in [{}, {}], exact {exact}\n", r.lower, r.upper);
    emit(&json!(r), Some(&summary), &args.out)
}
