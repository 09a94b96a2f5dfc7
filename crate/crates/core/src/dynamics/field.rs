use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::Expr;
use super::DynError;

pub const ZERO_TOL: f64 = 1e-9;
pub const STEP: f64 = 0.01;

/// Euclidean distance on the flat torus `R^n / Z^n`.
pub fn torus_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(1.0);
            d.min(1.0 - d).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn wrap(x: &mut [f64]) {
    for c in x.iter_mut() {
        *c = c.rem_euclid(1.0);
        if *c >= 1.0 {
            *c = 0.0;
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A vector field on the flat torus `T^n`, `n` in `{2, 3}`, with its
/// declared zeros.
#[derive(Clone, Debug)]
pub struct TorusVectorField {
    n: usize,
    components: Vec<Expr>,
    zeros: Vec<Vec<f64>>,
}

impl TorusVectorField {
    /// Checks periodicity on random points, the declared zeros, and the
    /// absence of other zeros on a sample grid.
    pub fn new(components: Vec<Expr>, zeros: Vec<Vec<f64>>) -> Result<Self, DynError> {
        let n = components.len();
        if !(2..=3).contains(&n) {
            return Err(DynError::UnsupportedDimension(n));
        }
        if components.iter().any(|c| c.arity() > n) || zeros.iter().any(|z| z.len() != n) {
            return Err(DynError::UnsupportedDimension(n));
        }
        let mut zeros = zeros;
        for z in &mut zeros {
            wrap(z);
        }
        let v = Self {
            n,
            components,
            zeros,
        };
        v.check_periodic()?;
        for (i, z) in v.zeros.iter().enumerate() {
            if norm(&v.eval(z)?) >= ZERO_TOL {
                return Err(DynError::ZeroNotVerified(i));
            }
        }
        v.check_no_hidden_zeros()?;
        Ok(v)
    }

    pub fn parse(components: &[&str], zeros: Vec<Vec<f64>>) -> Result<Self, DynError> {
        let n = components.len();
        let exprs = components
            .iter()
            .map(|s| Expr::parse(s, n))
            .collect::<Result<_, _>>()?;
        Self::new(exprs, zeros)
    }

    fn check_periodic(&self) -> Result<(), DynError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7091);
        for _ in 0..32 {
            let x: Vec<f64> = (0..self.n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let vx = self.eval_raw(&x);
            for i in 0..self.n {
                let mut y = x.clone();
                y[i] += 1.0;
                let vy = self.eval_raw(&y);
                if vx.iter().zip(&vy).any(|(a, b)| (a - b).abs() >= 1e-9) {
                    return Err(DynError::NotPeriodic { axis: i + 1 });
                }
            }
        }
        Ok(())
    }

    /// Grid points where `|v|` is tiny relative to its scale and which are
    /// not next to a declared zero.
    fn check_no_hidden_zeros(&self) -> Result<(), DynError> {
        let m: usize = if self.n == 2 { 64 } else { 20 };
        let h = 1.0 / m as f64;
        let total = m.pow(self.n as u32);
        for idx in 0..total {
            let x: Vec<f64> = (0..self.n)
                .map(|k| ((idx / m.pow(k as u32)) % m) as f64 * h)
                .collect();
            if norm(&self.eval(&x)?) < 1e-7 && self.zeros.iter().all(|z| torus_dist(z, &x) > h) {
                return Err(DynError::UndeclaredZero(x));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn zeros(&self) -> &[Vec<f64>] {
        &self.zeros
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    fn eval_raw(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, DynError> {
        let v = self.eval_raw(x);
        if v.iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(DynError::NonFinite(x.to_vec()))
        }
    }

    /// Smallest distance between two declared zeros, infinite if fewer
    /// than two.
    pub fn zero_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.zeros.iter().enumerate() {
            for b in &self.zeros[i + 1..] {
                best = best.min(torus_dist(a, b));
            }
        }
        best
    }
}

/// Fixed-step RK4 for time `t` (negative allowed) with
/// `ceil(|t| / 0.01)` steps, wrapping onto `[0, 1)^n` after every step.
pub fn flow_map(v: &TorusVectorField, x: &[f64], t: f64) -> Result<Vec<f64>, DynError> {
    if !t.is_finite() {
        return Err(DynError::NonFinite(x.to_vec()));
    }
    let mut y = x.to_vec();
    wrap(&mut y);
    let steps = (t.abs() / STEP).ceil() as usize;
    if steps == 0 {
        return Ok(y);
    }
    let h = t / steps as f64;
    let n = y.len();
    let mut tmp = vec![0.0; n];
    for _ in 0..steps {
        let k1 = v.eval(&y)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = v.eval(&tmp)?;
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = v.eval(&tmp)?;
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        let k4 = v.eval(&tmp)?;
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        wrap(&mut y);
    }
    Ok(y)
}

/// `omega = c . dx + df` on the flat torus.
#[derive(Clone, Debug)]
pub struct ClosedOneFormFlat {
    c: Vec<BigRational>,
    c_f64: Vec<f64>,
    f: Expr,
    grad: Vec<Expr>,
}

impl ClosedOneFormFlat {
    pub fn new(c: Vec<BigRational>, f: Expr) -> Result<Self, DynError> {
        let n = c.len();
        if !(2..=3).contains(&n) || f.arity() > n {
            return Err(DynError::UnsupportedDimension(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x3e6a);
        for _ in 0..32 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            for i in 0..n {
                let mut y = x.clone();
                y[i] += 1.0;
                if (f.eval(&x) - f.eval(&y)).abs() >= 1e-9 {
                    return Err(DynError::NotPeriodic { axis: i + 1 });
                }
            }
        }
        let c_f64 = c.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        let grad = f.gradient(n);
        Ok(Self { c, c_f64, f, grad })
    }

    /// The class `[omega] = c`.
    pub fn class(&self) -> &[BigRational] {
        &self.c
    }

    pub fn primitive(&self) -> &Expr {
        &self.f
    }

    /// Gradient of the local primitive `c . x + f`.
    pub fn dual_vector(&self, x: &[f64]) -> Vec<f64> {
        self.c_f64
            .iter()
            .zip(&self.grad)
            .map(|(c, g)| c + g.eval(x))
            .collect()
    }

    /// `omega_x(w)`.
    pub fn apply(&self, x: &[f64], w: &[f64]) -> f64 {
        self.dual_vector(x).iter().zip(w).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_translates() {
        let v = TorusVectorField::parse(&["1", "0"], vec![]).unwrap();
        let y = flow_map(&v, &[0.0, 0.0], 0.5).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-12 && y[1].abs() < 1e-12);
        assert_eq!(flow_map(&v, &[0.25, 0.75], 0.0).unwrap(), vec![0.25, 0.75]);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            TorusVectorField::parse(&["x1", "0"], vec![]),
            Err(DynError::NotPeriodic { axis: 1 })
        ));
        assert!(matches!(
            TorusVectorField::parse(&["sin(2*pi*x1)", "1"], vec![vec![0.0, 0.0]]),
            Err(DynError::ZeroNotVerified(0))
        ));
        assert!(matches!(
            TorusVectorField::parse(&["sin(2*pi*x1)", "sin(2*pi*x2)"], vec![vec![0.0, 0.0]]),
            Err(DynError::UndeclaredZero(_))
        ));
        assert!(matches!(
            TorusVectorField::parse(&["1"], vec![]),
            Err(DynError::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_dist(&[0.95, 0.0], &[0.05, 0.0]) - 0.1).abs() < 1e-12);
    }
}
