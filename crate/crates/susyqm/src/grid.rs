//! Uniform grids, Simpson quadrature and cached cumulative integrals.

use crate::{Error, Real, Result};
use serde::{Deserialize, Serialize};

/// Uniform evaluation grid `[x_min, x_max]` with `n_points` nodes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub x_min: Real,
    pub x_max: Real,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: Real, x_max: Real, n_points: usize) -> Result<Self> {
        if !(x_min < x_max) || n_points < 2 {
            return Err(Error::Config(format!(
                "bad grid: [{x_min}, {x_max}] with {n_points} points"
            )));
        }
        Ok(GridSpec { x_min, x_max, n_points })
    }

    /// Default working box used by node scans and normalization quadratures.
    pub fn working() -> Self {
        GridSpec { x_min: -10.0, x_max: 10.0, n_points: 2001 }
    }

    pub fn step(&self) -> Real {
        (self.x_max - self.x_min) / (self.n_points - 1) as Real
    }

    pub fn points(&self) -> Vec<Real> {
        let h = self.step();
        (0..self.n_points).map(|i| self.x_min + h * i as Real).collect()
    }

    pub fn contains(&self, x: Real) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

/// Composite Simpson rule over `n` panels (function evaluated at `2n+1` nodes).
pub fn simpson<F: Fn(Real) -> Real>(f: F, a: Real, b: Real, panels: usize) -> Real {
    let n = panels.max(1);
    let h = (b - a) / (2 * n) as Real;
    let mut acc = f(a) + f(b);
    for i in 1..2 * n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as Real);
    }
    acc * h / 3.0
}

fn simpson_panel<F: Fn(Real) -> Real>(f: &F, a: Real, fa: Real, b: Real, fb: Real) -> (Real, Real) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
}

fn adaptive_rec<F: Fn(Real) -> Real>(
    f: &F,
    a: Real,
    fa: Real,
    b: Real,
    fb: Real,
    whole: Real,
    fm: Real,
    tol: Real,
    depth: usize,
) -> Result<Real> {
    let m = 0.5 * (a + b);
    let (left, flm) = simpson_panel(f, a, fa, m, fm);
    let (right, frm) = simpson_panel(f, m, fm, b, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand near [{a}, {b}]")));
    }
    if delta.abs() <= 15.0 * tol || depth == 0 {
        return Ok(left + right + delta / 15.0);
    }
    Ok(adaptive_rec(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1)?
        + adaptive_rec(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1)?)
}

/// Adaptive Simpson with absolute tolerance (signed, `a` may exceed `b`).
pub fn adaptive_simpson<F: Fn(Real) -> Real>(f: F, a: Real, b: Real, tol: Real) -> Result<Real> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Ok(-adaptive_simpson(f, b, a, tol)?);
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, fm) = simpson_panel(&f, a, fa, b, fb);
    adaptive_rec(&f, a, fa, b, fb, whole, fm, tol, 48)
}

/// Prefix integrals of a smooth integrand, cached at the nodes of a grid and
/// refined adaptively for off-node queries. `value(x) = ∫_anchor^x f`.
pub struct CumulativeIntegral {
    xs: Vec<Real>,
    prefix: Vec<Real>,
    anchor_offset: Real,
    f: Box<dyn Fn(Real) -> Real + Send + Sync>,
    tol: Real,
}

impl CumulativeIntegral {
    pub fn build<F>(f: F, grid: GridSpec, anchor: Real, tol: Real) -> Result<Self>
    where
        F: Fn(Real) -> Real + Send + Sync + 'static,
    {
        let xs = grid.points();
        let mut prefix = vec![0.0; xs.len()];
        for i in 1..xs.len() {
            let piece = adaptive_simpson(&f, xs[i - 1], xs[i], tol)?;
            prefix[i] = prefix[i - 1] + piece;
        }
        let mut cum = CumulativeIntegral {
            xs,
            prefix,
            anchor_offset: 0.0,
            f: Box::new(f),
            tol,
        };
        cum.anchor_offset = cum.raw(anchor)?;
        Ok(cum)
    }

    fn raw(&self, x: Real) -> Result<Real> {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return Ok(self.prefix[0] + adaptive_simpson(&self.f, self.xs[0], x, self.tol)?);
        }
        if x >= self.xs[n - 1] {
            return Ok(self.prefix[n - 1] + adaptive_simpson(&self.f, self.xs[n - 1], x, self.tol)?);
        }
        let h = self.xs[1] - self.xs[0];
        let i = (((x - self.xs[0]) / h).floor() as usize).min(n - 2);
        Ok(self.prefix[i] + adaptive_simpson(&self.f, self.xs[i], x, self.tol)?)
    }

    pub fn value(&self, x: Real) -> Result<Real> {
        Ok(self.raw(x)? - self.anchor_offset)
    }
}

/// Max-norm of `f` sampled on the grid.
pub fn grid_max<F: Fn(Real) -> Real>(f: F, grid: &GridSpec) -> Real {
    grid.points().into_iter().map(f).fold(0.0, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn simpson_exact_on_cubics() {
        let val = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert_abs_diff_eq!(val, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn adaptive_gaussian_integral() {
        let v = adaptive_simpson(|t| (-t * t).exp(), -8.0, 8.0, 1e-12).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI.sqrt(), max_relative = 1e-11);
    }

    #[test]
    fn adaptive_signed_orientation() {
        let fwd = adaptive_simpson(|t| t.cos(), 0.0, 1.3, 1e-12).unwrap();
        let bwd = adaptive_simpson(|t| t.cos(), 1.3, 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(fwd, -bwd, epsilon = 1e-14);
        assert_relative_eq!(fwd, 1.3_f64.sin(), max_relative = 1e-12);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let grid = GridSpec::new(-3.0, 3.0, 61).unwrap();
        let cum = CumulativeIntegral::build(|t| t.exp(), grid, -1.0, 1e-12).unwrap();
        for &x in &[-2.7, -1.0, 0.0, 0.33, 2.9] {
            let expect = (x as Real).exp() - (-1.0_f64).exp();
            assert_relative_eq!(cum.value(x).unwrap(), expect, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_points_are_uniform() {
        let g = GridSpec::new(0.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(GridSpec::new(1.0, 0.0, 5).is_err());
    }
}
