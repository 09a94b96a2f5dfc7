//! Reference flows on `T^2` together with a candidate Lyapunov form.

use super::expr::Expr;
use super::field::{ClosedOneFormFlat, TorusVectorField};
use crate::algebra::rational::int;

fn build(
    components: &[&str],
    zeros: Vec<Vec<f64>>,
    c: [i64; 2],
    f: &str,
) -> (TorusVectorField, ClosedOneFormFlat) {
    let v = TorusVectorField::parse(components, zeros).expect("fixture field is valid");
    let omega = ClosedOneFormFlat::new(
        c.iter().map(|&x| int(x)).collect(),
        Expr::parse(f, 2).expect("fixture form"),
    )
    .expect("fixture form is periodic");
    (v, omega)
}

fn quarter_grid(step: f64, offset: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count * count)
        .map(|i| {
            vec![
                offset + (i % count) as f64 * step,
                offset + (i / count) as f64 * step,
            ]
        })
        .collect()
}

/// `v = grad f` for `f = cos 2 pi x1 + cos 2 pi x2`, with `omega = df`.
/// Zeros: maximum, two saddles, minimum.
pub fn morse_gradient() -> (TorusVectorField, ClosedOneFormFlat) {
    build(
        &["-2*pi*sin(2*pi*x1)", "-2*pi*sin(2*pi*x2)"],
        quarter_grid(0.5, 0.0, 2),
        [0, 0],
        "cos(2*pi*x1) + cos(2*pi*x2)",
    )
}

/// Constant flow of slope `(sqrt 5 - 1) / 2` with `omega = dx1`.
pub fn irrational_flow() -> (TorusVectorField, ClosedOneFormFlat) {
    build(&["1", "0.6180339887498949"], vec![], [1, 0], "0")
}

/// `v = (1 - cos 2 pi x1, -sin 2 pi x2)`: two degenerate zeros, the circle
/// `x2 = 0` a homoclinic loop of `(0, 0)`. The form `d(cos 2 pi x2) / 2 pi`
/// is nonnegative on `v` but vanishes on both invariant circles.
pub fn saddle_loop() -> (TorusVectorField, ClosedOneFormFlat) {
    build(
        &["1 - cos(2*pi*x1)", "-sin(2*pi*x2)"],
        vec![vec![0.0, 0.0], vec![0.0, 0.5]],
        [0, 0],
        "cos(2*pi*x2) / (2*pi)",
    )
}

/// Hamiltonian flow of `H = sin 2 pi x1 sin 2 pi x2`: four saddles joined
/// in a heteroclinic cycle around four centers.
pub fn double_heteroclinic() -> (TorusVectorField, ClosedOneFormFlat) {
    let mut zeros = quarter_grid(0.5, 0.0, 2);
    zeros.extend(quarter_grid(0.5, 0.25, 2));
    build(
        &[
            "2*pi*sin(2*pi*x1)*cos(2*pi*x2)",
            "-2*pi*cos(2*pi*x1)*sin(2*pi*x2)",
        ],
        zeros,
        [0, 0],
        "0",
    )
}

/// `v = (sin 2 pi x1, -sin 2 pi x2)`, hyperbolic saddles at `(0, 0)` and
/// `(1/2, 1/2)`, a source and a sink at the other two half-periods.
pub fn linear_saddle() -> (TorusVectorField, ClosedOneFormFlat) {
    build(
        &["sin(2*pi*x1)", "-sin(2*pi*x2)"],
        quarter_grid(0.5, 0.0, 2),
        [0, 0],
        "0",
    )
}
