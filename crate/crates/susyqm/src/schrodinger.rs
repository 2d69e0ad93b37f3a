//! Potentials, wavefunctions with analytic derivative chains, node counting
//! and the independent finite-difference spectral oracle.
//!
//! Convention: `H = -convention_factor · d²/dx² + V(x)` in dimensionless
//! units, with `convention_factor = 1/2` for the oscillator sections and `1`
//! for the graphene reduction. A wavefunction at energy `E` therefore obeys
//! `u'' = (V - E)/convention_factor · u`, which is how higher derivatives are
//! completed from `(u, u')`.

use crate::error::Error;
use crate::grid::{simpson, GridSpec};
use crate::jet::{gauss_jet, jet_det, ode_complete, poly_jet, Jet};
use crate::linalg::{eigenvector, lowest_eigenvalues};
use crate::specfun::{gamma, hermite_coeffs, is_gamma_pole, kummer_series_ext};
use crate::{Real, Result};
use serde::Serialize;
use std::sync::Arc;

/// Richardson gate for the FD oracle: doubling the grid must move every
/// reported level by less than this.
pub const RICHARDSON_GATE: Real = 1e-3;

type JetFn = Arc<dyn Fn(Real, usize) -> Jet + Send + Sync>;

/// Whether a wavefunction has been L²-normalized or is a formal
/// (generally non-normalizable) solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormStatus {
    Normalized,
    Formal,
}

/// Evaluable potential with derivative chain, name, domain and the
/// kinetic-term convention factor.
#[derive(Clone)]
pub struct Potential {
    jet_fn: JetFn,
    pub name: String,
    pub domain: (Real, Real),
    pub convention_factor: Real,
}

impl Potential {
    pub fn from_jet_fn<F>(f: F, name: &str, domain: (Real, Real), convention_factor: Real) -> Self
    where
        F: Fn(Real, usize) -> Jet + Send + Sync + 'static,
    {
        Potential { jet_fn: Arc::new(f), name: name.into(), domain, convention_factor }
    }

    /// The harmonic oscillator `V = x²/2`.
    pub fn harmonic() -> Self {
        Potential::from_jet_fn(
            |x, n| poly_jet(&[0.0, 0.0, 0.5], x, n),
            "harmonic-oscillator",
            (-12.0, 12.0),
            0.5,
        )
    }

    pub fn value(&self, x: Real) -> Real {
        (self.jet_fn)(x, 0).value()
    }

    pub fn jet(&self, x: Real, order: usize) -> Jet {
        (self.jet_fn)(x, order)
    }

    /// Potential shifted by an additive constant.
    pub fn shifted(&self, c: Real) -> Potential {
        let inner = self.jet_fn.clone();
        Potential {
            jet_fn: Arc::new(move |x, n| inner(x, n).add(&Jet::constant(c, n))),
            name: format!("{}{:+}", self.name, c),
            domain: self.domain,
            convention_factor: self.convention_factor,
        }
    }

    /// Scan the working grid for non-finite values.
    pub fn finite_on(&self, grid: &GridSpec) -> bool {
        grid.points().iter().all(|&x| self.value(x).is_finite())
    }
}

/// Wavefunction backed by an analytic derivative chain.
#[derive(Clone)]
pub struct WaveFunction {
    jet_fn: JetFn,
    pub energy: Option<Real>,
    pub name: String,
    pub norm_status: NormStatus,
}

impl WaveFunction {
    pub fn from_jet_fn<F>(f: F, energy: Option<Real>, name: &str) -> Self
    where
        F: Fn(Real, usize) -> Jet + Send + Sync + 'static,
    {
        WaveFunction { jet_fn: Arc::new(f), energy, name: name.into(), norm_status: NormStatus::Formal }
    }

    /// `e^{s·x²/2}` times a polynomial — the closed form every special-value
    /// oscillator solution reduces to.
    pub fn poly_gauss(s: Real, coeffs: Vec<Real>, energy: Option<Real>, name: &str) -> Self {
        WaveFunction::from_jet_fn(
            move |x, n| gauss_jet(s, x, n).mul(&poly_jet(&coeffs, x, n)),
            energy,
            name,
        )
    }

    /// Completes jets from `(value, slope)` closures through the governing
    /// equation `u'' = (V - E)/c · u`.
    pub fn ode_backed<V, D>(value: V, slope: D, potential: Potential, energy: Real, name: &str) -> Self
    where
        V: Fn(Real) -> Real + Send + Sync + 'static,
        D: Fn(Real) -> Real + Send + Sync + 'static,
    {
        let c = potential.convention_factor;
        WaveFunction::from_jet_fn(
            move |x, n| {
                let q = potential
                    .jet(x, n.saturating_sub(2))
                    .sub(&Jet::constant(energy, n.saturating_sub(2)))
                    .scale(1.0 / c);
                ode_complete(value(x), slope(x), &q, None, n)
            },
            Some(energy),
            name,
        )
    }

    pub fn value(&self, x: Real) -> Real {
        (self.jet_fn)(x, 0).value()
    }

    /// `u^(order)(x)` from the analytic chain.
    pub fn derivative(&self, order: usize, x: Real) -> Real {
        (self.jet_fn)(x, order).deriv(order)
    }

    pub fn jet(&self, x: Real, order: usize) -> Jet {
        (self.jet_fn)(x, order)
    }

    pub fn scale(&self, c: Real) -> WaveFunction {
        let inner = self.jet_fn.clone();
        WaveFunction {
            jet_fn: Arc::new(move |x, n| inner(x, n).scale(c)),
            energy: self.energy,
            name: self.name.clone(),
            norm_status: self.norm_status,
        }
    }

    /// L² norm over the box by composite Simpson.
    pub fn l2_norm(&self, grid: &GridSpec) -> Real {
        let f = |x: Real| self.value(x).powi(2);
        simpson(f, grid.x_min, grid.x_max, (grid.n_points - 1) / 2).sqrt()
    }

    /// Grid normalization with the sign convention that the rightmost
    /// appreciable sample is positive.
    pub fn normalized_on(&self, grid: &GridSpec) -> WaveFunction {
        let norm = self.l2_norm(grid);
        let pts = grid.points();
        let max = pts.iter().map(|&x| self.value(x).abs()).fold(0.0, Real::max);
        let mut sign = 1.0;
        for &x in pts.iter().rev() {
            let v = self.value(x);
            if v.abs() > 1e-3 * max {
                sign = v.signum();
                break;
            }
        }
        let mut out = self.scale(sign / norm);
        out.norm_status = NormStatus::Normalized;
        out
    }
}

/// Mixing of the even and odd oscillator solutions at fixed factorization
/// energy. `Nu(ν)` is the weighted combination (ν = tan θ projectively);
/// `PureOdd` is the ν → ∞ limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mix {
    Nu(Real),
    PureOdd,
}

fn nonneg_int(v: Real) -> Option<usize> {
    if v >= -1e-9 && (v - v.round()).abs() < 1e-9 {
        Some(v.round() as usize)
    } else {
        None
    }
}

/// Coefficients of the terminating series Σ_{m≤j} (-j)_m/((b)_m m!) (σx²)^m
/// as a polynomial in x.
fn terminating_poly(j: usize, b: Real, sigma: Real) -> Vec<Real> {
    let mut coeffs = vec![0.0; 2 * j + 1];
    let mut p = 1.0; // (-j)_m
    let mut c = 1.0; // σ^m / ((b)_m m!)
    coeffs[0] = 1.0;
    for m in 0..j {
        let mf = m as Real;
        p *= -(j as Real) + mf;
        c *= sigma / ((b + mf) * (mf + 1.0));
        coeffs[2 * (m + 1)] = p * c;
    }
    coeffs
}

/// Ratio `2 Γ((3-2ε)/4) / Γ((1-2ε)/4)` weighting the odd part of the general
/// solution. Errors at the Γ poles of the numerator (the ratio is taken to be
/// exactly zero when only the denominator is singular).
pub fn odd_weight_ratio(eps: Real) -> Result<Real> {
    let num_arg = (3.0 - 2.0 * eps) / 4.0;
    let den_arg = (1.0 - 2.0 * eps) / 4.0;
    if is_gamma_pole(num_arg, 1e-10) {
        return Err(Error::InvalidParameter(format!(
            "Γ((3-2ε)/4) pole at ε = {eps}; the odd-weight ratio is undefined"
        )));
    }
    if is_gamma_pole(den_arg, 1e-10) {
        return Ok(0.0);
    }
    Ok(2.0 * gamma(num_arg) / gamma(den_arg))
}

fn series_solution(eps: Real, c_even: Real, c_odd: Real, name: &str) -> WaveFunction {
    let a = (1.0 - 2.0 * eps) / 4.0;
    let value_slope = move |x: Real| -> (Real, Real) {
        let t = x * x;
        let g = (-t / 2.0).exp();
        let mut v = 0.0;
        let mut d = 0.0;
        if c_even != 0.0 {
            let se = kummer_series_ext(a, 0.5, t).expect("even series");
            v += c_even * g * se.s;
            d += c_even * g * (-x * se.s + 2.0 * x * se.s_t);
        }
        if c_odd != 0.0 {
            let so = kummer_series_ext(a + 0.5, 1.5, t).expect("odd series");
            v += c_odd * g * x * so.s;
            d += c_odd * g * (so.s - t * so.s + 2.0 * t * so.s_t);
        }
        (v, d)
    };
    WaveFunction::ode_backed(
        move |x| value_slope(x).0,
        move |x| value_slope(x).1,
        Potential::harmonic(),
        eps,
        name,
    )
}

/// General solution of the stationary oscillator equation at factorization
/// energy ε, as the ν-weighted combination of the even and odd branches.
/// Special ε reduce to `exp(±x²/2)` times a polynomial, which is used
/// directly (exact everywhere, immune to large-x overflow of the series).
pub fn oscillator_general_solution(eps: Real, mix: Mix) -> Result<WaveFunction> {
    let name = format!("u(ε={eps}, {mix:?})");
    match mix {
        Mix::Nu(nu) => {
            if nu == 0.0 {
                if let Some(j) = nonneg_int(-(1.0 - 2.0 * eps) / 4.0) {
                    return Ok(WaveFunction::poly_gauss(-1.0, terminating_poly(j, 0.5, 1.0), Some(eps), &name));
                }
                if let Some(j) = nonneg_int(-(1.0 + 2.0 * eps) / 4.0) {
                    return Ok(WaveFunction::poly_gauss(1.0, terminating_poly(j, 0.5, -1.0), Some(eps), &name));
                }
                return Ok(series_solution(eps, 1.0, 0.0, &name));
            }
            let k = odd_weight_ratio(eps)?;
            Ok(series_solution(eps, 1.0, nu * k, &name))
        }
        Mix::PureOdd => {
            // the odd branch carries a leading x, so the even-power
            // coefficients shift up by one
            if let Some(j) = nonneg_int(-(3.0 - 2.0 * eps) / 4.0) {
                let mut coeffs = vec![0.0];
                coeffs.extend(terminating_poly(j, 1.5, 1.0));
                return Ok(WaveFunction::poly_gauss(-1.0, coeffs, Some(eps), &name));
            }
            if let Some(j) = nonneg_int(-(3.0 + 2.0 * eps) / 4.0) {
                let mut coeffs = vec![0.0];
                coeffs.extend(terminating_poly(j, 1.5, -1.0));
                return Ok(WaveFunction::poly_gauss(1.0, coeffs, Some(eps), &name));
            }
            Ok(series_solution(eps, 0.0, 1.0, &name))
        }
    }
}

/// ∂u/∂ε of the pure even/odd oscillator solution families; satisfies the
/// inhomogeneous equation `(H - ε) ∂u/∂ε = u` used by the confluent
/// differential method.
pub fn oscillator_eps_derivative(eps: Real, mix: Mix) -> Result<WaveFunction> {
    let (odd, base) = match mix {
        Mix::Nu(nu) if nu == 0.0 => (false, oscillator_general_solution(eps, mix)?),
        Mix::PureOdd => (true, oscillator_general_solution(eps, mix)?),
        _ => {
            return Err(Error::InvalidParameter(
                "ε-derivative is implemented for the pure even (ν=0) and pure odd branches".into(),
            ))
        }
    };
    let a = (1.0 - 2.0 * eps) / 4.0 + if odd { 0.5 } else { 0.0 };
    let b = if odd { 1.5 } else { 0.5 };
    let value_slope = move |x: Real| -> (Real, Real) {
        let t = x * x;
        let g = (-t / 2.0).exp();
        let se = kummer_series_ext(a, b, t).expect("series");
        // ∂a/∂ε = -1/2
        if odd {
            (-0.5 * g * x * se.s_a, -0.5 * g * (se.s_a - t * se.s_a + 2.0 * t * se.s_at))
        } else {
            (-0.5 * g * se.s_a, -0.5 * g * (-x * se.s_a + 2.0 * x * se.s_at))
        }
    };
    let name = format!("∂u/∂ε(ε={eps})");
    let u_jets = base.jet_fn.clone();
    let potential = Potential::harmonic();
    Ok(WaveFunction::from_jet_fn(
        move |x, n| {
            let m = n.saturating_sub(2);
            let q = potential.jet(x, m).sub(&Jet::constant(eps, m)).scale(2.0);
            let source = u_jets(x, m).scale(-2.0);
            let (v, d) = value_slope(x);
            ode_complete(v, d, &q, Some(&source), n)
        },
        Some(eps),
        &name,
    ))
}

/// Normalized oscillator eigenfunction `ψ_n = c_n H_n(x) e^{-x²/2}` with
/// energy label `n + 1/2`.
pub fn oscillator_eigenfunction(n: usize) -> WaveFunction {
    let norm = 1.0
        / ((2.0_f64.powi(n as i32)) * (1..=n).map(|k| k as Real).product::<Real>().max(1.0)
            * std::f64::consts::PI.sqrt())
        .sqrt();
    let coeffs: Vec<Real> = hermite_coeffs(n).iter().map(|c| c * norm).collect();
    let mut wf = WaveFunction::poly_gauss(-1.0, coeffs, Some(n as Real + 0.5), &format!("ψ_{n}"));
    wf.norm_status = NormStatus::Normalized;
    wf
}

/// Count strict sign changes of `f` on the interval, with refinement passes
/// to reject grazing near-zeros and detect under-resolution.
pub fn count_nodes(f: &WaveFunction, interval: (Real, Real), grid_points: usize) -> Result<usize> {
    fn count_on(f: &WaveFunction, interval: (Real, Real), n: usize) -> Result<usize> {
        let grid = GridSpec::new(interval.0, interval.1, n).map_err(|_| {
            Error::InvalidParameter("degenerate node-count interval".into())
        })?;
        let mut last_sign = 0i8;
        let mut count = 0usize;
        for x in grid.points() {
            let v = f.value(x);
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite value at x = {x}")));
            }
            let s = if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            };
            if s != 0 {
                if last_sign != 0 && s != last_sign {
                    count += 1;
                }
                last_sign = s;
            }
        }
        Ok(count)
    }
    let coarse = count_on(f, interval, grid_points)?;
    let fine = count_on(f, interval, 4 * grid_points)?;
    if coarse == fine {
        return Ok(fine);
    }
    let finer = count_on(f, interval, 16 * grid_points)?;
    if fine == finer {
        Ok(finer)
    } else {
        Err(Error::Resolution(format!(
            "node count did not stabilize: {coarse}/{fine}/{finer} at increasing resolution"
        )))
    }
}

/// Spectral report of the finite-difference oracle.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<Real>,
    pub grid: (Real, Real, usize),
    pub method: String,
}

fn fd_levels(v: &Potential, interval: (Real, Real), n_points: usize, n_levels: usize) -> Vec<Real> {
    let h = (interval.1 - interval.0) / (n_points + 1) as Real;
    let c = v.convention_factor;
    let diag: Vec<Real> = (1..=n_points)
        .map(|i| 2.0 * c / (h * h) + v.value(interval.0 + h * i as Real))
        .collect();
    let off = vec![-c / (h * h); n_points - 1];
    lowest_eigenvalues(&diag, &off, n_levels)
}

/// Lowest eigenvalues of the three-point discretization of
/// `-c·d²/dx² + V` with Dirichlet ends, gated by a Richardson check
/// (doubling the grid must not move any level by more than
/// [`RICHARDSON_GATE`]).
pub fn solve_spectrum_fd(
    v: &Potential,
    interval: (Real, Real),
    n_points: usize,
    n_levels: usize,
) -> Result<SpectralReport> {
    if n_points < 200 {
        return Err(Error::InvalidParameter(format!("n_points = {n_points} < 200")));
    }
    let coarse = fd_levels(v, interval, n_points, n_levels);
    let fine = fd_levels(v, interval, 2 * n_points, n_levels);
    for (i, (a, b)) in coarse.iter().zip(fine.iter()).enumerate() {
        if (a - b).abs() > RICHARDSON_GATE {
            return Err(Error::Convergence(format!(
                "level {i}: |{a} - {b}| = {:.3e} over the Richardson gate",
                (a - b).abs()
            )));
        }
    }
    // h² truncation is smooth in h, so the doubled grid admits fourth-order
    // Richardson extrapolation of each level
    let eigenvalues: Vec<Real> = coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    for w in eigenvalues.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Convergence("eigenvalues not strictly increasing".into()));
        }
    }
    Ok(SpectralReport {
        eigenvalues,
        grid: (interval.0, interval.1, n_points),
        method: "fd3/sturm-bisection/richardson".into(),
    })
}

/// Eigenvalue and grid eigenvector (interior points) of the FD
/// discretization, for callers needing the state itself.
pub fn fd_eigenpair(
    v: &Potential,
    interval: (Real, Real),
    n_points: usize,
    index: usize,
) -> Result<(Real, Vec<Real>, Vec<Real>)> {
    let h = (interval.1 - interval.0) / (n_points + 1) as Real;
    let c = v.convention_factor;
    let xs: Vec<Real> = (1..=n_points).map(|i| interval.0 + h * i as Real).collect();
    let diag: Vec<Real> = xs.iter().map(|&x| 2.0 * c / (h * h) + v.value(x)).collect();
    let off = vec![-c / (h * h); n_points - 1];
    let lam = *lowest_eigenvalues(&diag, &off, index + 1)
        .last()
        .ok_or_else(|| Error::Convergence("no eigenvalue".into()))?;
    let vec = eigenvector(&diag, &off, lam);
    // normalize as a function: ∫ψ² ≈ h Σ ψ_i²
    let norm = (vec.iter().map(|v| v * v).sum::<Real>() * h).sqrt();
    Ok((lam, xs, vec.into_iter().map(|v| v / norm).collect()))
}

/// Max over the grid of `|-c ψ'' + (V - E) ψ| / (1 + |ψ|)`.
pub fn schrodinger_residual(v: &Potential, psi: &WaveFunction, energy: Real, grid: &GridSpec) -> Real {
    let c = v.convention_factor;
    let mut worst: Real = 0.0;
    for x in grid.points() {
        let j = psi.jet(x, 2);
        let r = (-c * j.deriv(2) + (v.value(x) - energy) * j.value()).abs() / (1.0 + j.value().abs());
        if r.is_finite() {
            worst = worst.max(r);
        } else {
            return Real::INFINITY;
        }
    }
    worst
}

/// Wronskian of a family of wavefunctions and its first derivatives as a jet.
pub fn wronskian_jet(funcs: &[&WaveFunction], x: Real, order: usize) -> Jet {
    let k = funcs.len();
    assert!(k >= 1);
    let rows: Vec<Vec<Jet>> = (0..k)
        .map(|i| {
            funcs
                .iter()
                .map(|f| {
                    let mut j = f.jet(x, order + i);
                    for _ in 0..i {
                        j = j.shift();
                    }
                    j.truncate(order)
                })
                .collect()
        })
        .collect();
    jet_det(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn working() -> GridSpec {
        GridSpec::working()
    }

    #[test]
    fn general_solution_reduces_to_ground_state_at_half() {
        // ε = 1/2 truncates the even series: u ∝ e^{-x²/2}
        let u = oscillator_general_solution(0.5, Mix::Nu(0.0)).unwrap();
        for &x in &[0.0, 0.7, 2.0, 5.0] {
            assert_relative_eq!(u.value(x), (-x * x / 2.0_f64).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn general_solution_polynomial_seed_at_minus_five_halves() {
        let u = oscillator_general_solution(-2.5, Mix::Nu(0.0)).unwrap();
        for &x in &[0.0_f64, 1.0, 2.0] {
            let expect = (x * x / 2.0).exp() * (1.0 + 2.0 * x * x);
            assert_relative_eq!(u.value(x), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn general_solution_nodeless_inside_unit_nu() {
        let u = oscillator_general_solution(-0.5, Mix::Nu(0.5)).unwrap();
        assert_eq!(count_nodes(&u, (-10.0, 10.0), 2001).unwrap(), 0);
        // and the erf closed form: u = e^{x²/2} (1 + ν erf x)
        for &x in &[-3.0, -0.4, 0.9, 2.5] {
            let expect = (x * x / 2.0_f64).exp() * (1.0 + 0.5 * crate::specfun::erf(x));
            assert_relative_eq!(u.value(x), expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn general_solution_one_node_outside_unit_nu() {
        let u = oscillator_general_solution(-0.5, Mix::Nu(2.0)).unwrap();
        assert_eq!(count_nodes(&u, (-10.0, 10.0), 2001).unwrap(), 1);
    }

    #[test]
    fn general_solution_satisfies_equation() {
        let v = Potential::harmonic();
        let g = GridSpec::new(-6.0, 6.0, 301).unwrap();
        for (eps, mix) in [
            (-2.5, Mix::Nu(0.0)),
            (-0.5, Mix::Nu(0.5)),
            (-3.5, Mix::PureOdd),
            (0.9, Mix::Nu(-0.3)),
            (1.5, Mix::PureOdd),
        ] {
            let u = oscillator_general_solution(eps, mix).unwrap();
            let r = schrodinger_residual(&v, &u, eps, &g);
            assert!(r < 1e-8, "residual {r} at ε={eps} {mix:?}");
        }
    }

    #[test]
    fn general_solution_parity() {
        let even = oscillator_general_solution(-1.3, Mix::Nu(0.0)).unwrap();
        let odd = oscillator_general_solution(-1.3, Mix::PureOdd).unwrap();
        for &x in &[0.3, 1.1, 2.6] {
            assert_relative_eq!(even.value(-x), even.value(x), max_relative = 1e-11);
            assert_relative_eq!(odd.value(-x), -odd.value(x), max_relative = 1e-11);
        }
    }

    #[test]
    fn gamma_ratio_poles_reported() {
        // ε = 3/2 puts Γ((3-2ε)/4) = Γ(0) on a pole
        assert!(oscillator_general_solution(1.5, Mix::Nu(0.7)).is_err());
        // ε = 1/2 only has the denominator pole: ratio is 0, solution fine
        assert!(oscillator_general_solution(0.5, Mix::Nu(0.7)).is_ok());
    }

    #[test]
    fn eigenfunction_normalization_and_values() {
        let g = working();
        let psi0 = oscillator_eigenfunction(0);
        assert_relative_eq!(psi0.value(0.0), 0.7511255444649425, max_relative = 1e-10);
        assert_abs_diff_eq!(psi0.l2_norm(&g), 1.0, epsilon = 1e-8);
        let psi1 = oscillator_eigenfunction(1);
        assert_abs_diff_eq!(psi1.value(0.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(psi1.l2_norm(&g), 1.0, epsilon = 1e-8);
        let psi2 = oscillator_eigenfunction(2);
        assert_eq!(count_nodes(&psi2, (-10.0, 10.0), 2001).unwrap(), 2);
        let psi3 = oscillator_eigenfunction(3);
        assert_eq!(count_nodes(&psi3, (-10.0, 10.0), 2001).unwrap(), 3);
    }

    #[test]
    fn eigenfunctions_satisfy_equation() {
        let v = Potential::harmonic();
        let g = GridSpec::new(-8.0, 8.0, 401).unwrap();
        for n in 0..6 {
            let psi = oscillator_eigenfunction(n);
            let r = schrodinger_residual(&v, &psi, n as Real + 0.5, &g);
            assert!(r < 1e-9, "n={n}: residual {r}");
        }
    }

    #[test]
    fn residual_detects_wrong_energy() {
        let v = Potential::harmonic();
        let g = GridSpec::new(-6.0, 6.0, 301).unwrap();
        let psi0 = oscillator_eigenfunction(0);
        assert!(schrodinger_residual(&v, &psi0, 0.5, &g) < 1e-9);
        assert!(schrodinger_residual(&v, &psi0, 0.6, &g) > 1e-2);
    }

    #[test]
    fn fd_oracle_oscillator_spectrum() {
        let v = Potential::harmonic();
        let rep = solve_spectrum_fd(&v, (-8.0, 8.0), 2000, 5).unwrap();
        for (n, &e) in rep.eigenvalues.iter().enumerate() {
            assert_abs_diff_eq!(e, n as Real + 0.5, epsilon = 1e-4);
        }
    }

    #[test]
    fn fd_oracle_oscillator_ten_levels_wider_box() {
        let v = Potential::harmonic();
        let rep = solve_spectrum_fd(&v, (-10.0, 10.0), 2000, 11).unwrap();
        for (n, &e) in rep.eigenvalues.iter().enumerate() {
            assert_abs_diff_eq!(e, n as Real + 0.5, epsilon = 1e-4);
        }
    }

    #[test]
    fn fd_oracle_rejects_small_grid() {
        let v = Potential::harmonic();
        assert!(solve_spectrum_fd(&v, (-8.0, 8.0), 100, 3).is_err());
    }

    #[test]
    fn eps_derivative_satisfies_inhomogeneous_equation() {
        // (H - ε) ∂u/∂ε = u, checked as a residual on the grid
        for (eps, mix) in [(-0.5, Mix::Nu(0.0)), (1.5, Mix::PureOdd), (-2.5, Mix::Nu(0.0))] {
            let u = oscillator_general_solution(eps, mix).unwrap();
            let p = oscillator_eps_derivative(eps, mix).unwrap();
            let g = GridSpec::new(-6.0, 6.0, 241).unwrap();
            let mut worst: Real = 0.0;
            for x in g.points() {
                let pj = p.jet(x, 2);
                let r = (-0.5 * pj.deriv(2) + (x * x / 2.0 - eps) * pj.value() - u.value(x)).abs()
                    / (1.0 + u.value(x).abs());
                worst = worst.max(r);
            }
            assert!(worst < 1e-6, "ε={eps}: inhomogeneous residual {worst}");
        }
    }

    #[test]
    fn node_count_grazing_not_counted() {
        // x² + small offset touches but does not cross
        let f = WaveFunction::from_jet_fn(|x, n| poly_jet(&[1e-9, 0.0, 1.0], x, n), None, "graze");
        assert_eq!(count_nodes(&f, (-1.0, 1.0), 101).unwrap(), 0);
    }

    #[test]
    fn wronskian_jet_first_derivative_consistency() {
        let psi0 = oscillator_eigenfunction(0);
        let psi1 = oscillator_eigenfunction(1);
        // W(ψ0, ψ1) ∝ e^{-x²}: log-derivative is -2x
        for &x in &[0.5, 1.0] {
            let w = wronskian_jet(&[&psi0, &psi1], x, 1);
            assert_relative_eq!(w.deriv(1) / w.value(), -2.0 * x, max_relative = 1e-10);
        }
    }
}
