use serde::Serialize;

use super::field::{flow_map, torus_dist, ClosedOneFormFlat, TorusVectorField, STEP};
use super::DynError;

/// Largest accepted angle, in radians, between `v` and the flat gradient of
/// the local primitive near a zero.
pub const ANGLE_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradientCheck {
    pub zero: usize,
    pub max_angle: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovReport {
    pub pass: bool,
    /// Smallest sampled `omega(v)` outside the epsilon-balls; absent when
    /// no sample survives.
    pub margin: Option<f64>,
    pub worst_point: Option<Vec<f64>>,
    pub samples: usize,
    pub epsilon: f64,
    pub angle_tol: f64,
    pub gradient: Vec<GradientCheck>,
}

fn grid(n: usize) -> impl Iterator<Item = Vec<f64>> {
    let m: usize = if n == 2 { 256 } else { 48 };
    (0..m.pow(n as u32)).map(move |idx| {
        (0..n)
            .map(|k| ((idx / m.pow(k as u32)) % m) as f64 / m as f64)
            .collect()
    })
}

/// Unit directions: 16 in the plane, the 26 grid neighbours in space.
fn directions(n: usize) -> Vec<Vec<f64>> {
    if n == 2 {
        return (0..16)
            .map(|i| {
                let a = i as f64 * std::f64::consts::PI / 8.0;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let mut out = Vec::new();
    for i in 0..27 {
        let d: Vec<f64> = [i % 3, (i / 3) % 3, i / 9]
            .iter()
            .map(|&c| c as f64 - 1.0)
            .collect();
        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.0 {
            out.push(d.into_iter().map(|x| x / len).collect());
        }
    }
    out
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (len > 1e-300).then(|| v.iter().map(|x| x / len).collect())
}

/// Angle between two nonzero vectors, stable for nearly parallel input.
fn angle(a: &[f64], b: &[f64]) -> Option<f64> {
    let (a, b) = (unit(a)?, unit(b)?);
    let diff = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let sum = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x + y).powi(2))
        .sum::<f64>()
        .sqrt();
    Some(2.0 * diff.atan2(sum))
}

/// Samples `omega(v)` on a regular grid outside the `epsilon`-balls around
/// the zeros and compares `v` with the flat gradient of the primitive on
/// spheres of radius `epsilon / 2` and `epsilon / 4` around each zero.
pub fn lyapunov_check(
    v: &TorusVectorField,
    omega: &ClosedOneFormFlat,
    epsilon: f64,
) -> Result<LyapunovReport, DynError> {
    let n = v.dim();
    if omega.class().len() != n {
        return Err(DynError::InvalidParameter(format!(
            "form on T^{} for a field on T^{n}",
            omega.class().len()
        )));
    }
    if !v.zeros().is_empty() && !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(DynError::InvalidParameter(
            "epsilon must be positive when the field has zeros".into(),
        ));
    }
    let separation = v.zero_separation();
    if epsilon > separation / 2.0 {
        return Err(DynError::EpsilonTooLarge {
            epsilon,
            separation,
        });
    }
    let mut margin: Option<(f64, Vec<f64>)> = None;
    let mut samples = 0;
    for x in grid(n) {
        if v.zeros().iter().any(|z| torus_dist(z, &x) < epsilon) {
            continue;
        }
        samples += 1;
        let w = omega.apply(&x, &v.eval(&x)?);
        if margin.as_ref().map_or(true, |(m, _)| w < *m) {
            margin = Some((w, x));
        }
    }
    let dirs = directions(n);
    let mut gradient = Vec::with_capacity(v.zeros().len());
    for (i, z) in v.zeros().iter().enumerate() {
        let mut max_angle: f64 = 0.0;
        for r in [epsilon / 2.0, epsilon / 4.0] {
            for d in &dirs {
                let x: Vec<f64> = z.iter().zip(d).map(|(a, b)| a + r * b).collect();
                if let Some(a) = angle(&v.eval(&x)?, &omega.dual_vector(&x)) {
                    max_angle = max_angle.max(a);
                }
            }
        }
        gradient.push(GradientCheck {
            zero: i,
            max_angle,
            pass: max_angle < ANGLE_TOL,
        });
    }
    let pass = margin.as_ref().map_or(true, |(m, _)| *m > 0.0) && gradient.iter().all(|g| g.pass);
    let (margin, worst_point) = margin.map_or((None, None), |(m, x)| (Some(m), Some(x)));
    Ok(LyapunovReport {
        pass,
        margin,
        worst_point,
        samples,
        epsilon,
        angle_tol: ANGLE_TOL,
        gradient,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConvexityVerdict {
    NoViolationFound {
        seeds: usize,
        exited: usize,
    },
    /// A trajectory from the sphere left the ball and came back.
    Violation {
        seed: Vec<f64>,
        exit_time: f64,
        reentry_time: f64,
        witness: Vec<Vec<f64>>,
    },
    /// No seeded trajectory left the ball within the budget.
    Inconclusive {
        seeds: usize,
    },
}

fn sphere_seeds(p: &[f64], r: f64) -> Vec<Vec<f64>> {
    let dirs: Vec<Vec<f64>> = if p.len() == 2 {
        (0..64)
            .map(|i| {
                let a = i as f64 * std::f64::consts::PI / 32.0;
                vec![a.cos(), a.sin()]
            })
            .collect()
    } else {
        let count = 200;
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let s = (1.0 - z * z).sqrt();
                let a = golden * i as f64;
                vec![s * a.cos(), s * a.sin(), z]
            })
            .collect()
    };
    dirs.into_iter()
        .map(|d| p.iter().zip(&d).map(|(a, b)| a + r * b).collect())
        .collect()
}

/// Traces trajectories from the sphere of radius `r` about zero `zero` for
/// time `budget`, looking for one that leaves the ball (distance above
/// `1.05 r`) and later re-enters it (distance below `0.95 r`).
pub fn convexity_probe(
    v: &TorusVectorField,
    zero: usize,
    r: f64,
    budget: f64,
) -> Result<ConvexityVerdict, DynError> {
    let p = v.zeros().get(zero).ok_or(DynError::NoSuchZero(zero))?;
    if !(r > 0.0 && r < 0.25) {
        return Err(DynError::InvalidParameter(format!(
            "probe radius {r} outside (0, 0.25)"
        )));
    }
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(DynError::TimeNotPositive(budget));
    }
    if let Some(other) =
        (0..v.zeros().len()).find(|&j| j != zero && torus_dist(p, &v.zeros()[j]) < 2.0 * r)
    {
        return Err(DynError::BallOverlap {
            zero,
            other,
            radius: r,
        });
    }
    let seeds = sphere_seeds(p, r);
    let steps = (budget / STEP).ceil() as usize;
    let mut exited = 0;
    for seed in &seeds {
        let mut x = seed.clone();
        let mut witness = vec![x.clone()];
        let mut exit_time = None;
        for s in 1..=steps {
            x = flow_map(v, &x, STEP)?;
            if s % 5 == 0 {
                witness.push(x.clone());
            }
            let d = torus_dist(p, &x);
            let t = s as f64 * STEP;
            match exit_time {
                None if d > 1.05 * r => exit_time = Some(t),
                Some(exit_time) if d < 0.95 * r => {
                    witness.push(x.clone());
                    return Ok(ConvexityVerdict::Violation {
                        seed: seed.clone(),
                        exit_time,
                        reentry_time: t,
                        witness,
                    });
                }
                _ => {}
            }
        }
        exited += usize::from(exit_time.is_some());
    }
    Ok(if exited == 0 {
        ConvexityVerdict::Inconclusive { seeds: seeds.len() }
    } else {
        ConvexityVerdict::NoViolationFound {
            seeds: seeds.len(),
            exited,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::dynamics::Expr;

    fn form(c: [i64; 2], f: &str) -> ClosedOneFormFlat {
        ClosedOneFormFlat::new(
            c.iter().map(|&x| int(x)).collect(),
            Expr::parse(f, 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_flow_margins() {
        let v = TorusVectorField::parse(&["1", "0"], vec![]).unwrap();
        let r = lyapunov_check(&v, &form([1, 0], "0"), 0.1).unwrap();
        assert!(r.pass);
        assert_eq!(r.margin, Some(1.0));
        let back = TorusVectorField::parse(&["-1", "0"], vec![]).unwrap();
        let r = lyapunov_check(&back, &form([1, 0], "0"), 0.1).unwrap();
        assert!(!r.pass);
        assert_eq!(r.margin, Some(-1.0));
    }

    #[test]
    fn stable_angle() {
        assert!(angle(&[1.0, 0.0], &[1.0, 1e-6]).unwrap() < 2e-6);
        assert!(
            (angle(&[1.0, 0.0], &[0.0, 2.0]).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12
        );
        assert!(angle(&[0.0, 0.0], &[1.0, 0.0]).is_none());
    }

    #[test]
    fn probe_preconditions() {
        let zeros = (0..8)
            .map(|i| vec![(i % 4) as f64 * 0.25, (i / 4) as f64 * 0.5])
            .collect();
        let v = TorusVectorField::parse(&["sin(4*pi*x1)", "-sin(2*pi*x2)"], zeros).unwrap();
        assert!(matches!(
            convexity_probe(&v, 0, 0.15, 1.0),
            Err(DynError::BallOverlap { other: 1, .. })
        ));
        assert!(matches!(
            convexity_probe(&v, 9, 0.1, 1.0),
            Err(DynError::NoSuchZero(9))
        ));
        assert!(matches!(
            lyapunov_check(&v, &form([0, 0], "0"), 0.2),
            Err(DynError::EpsilonTooLarge { .. })
        ));
    }
}
