//! Confluent (equal-energy) second and higher order transformations built
//! from Jordan chains `(H - ε)u_j = u_{j-1}`.
//!
//! Two constructions of the chain are implemented: the integral method
//! (`u_j = -2 u₁ v_j` with nested quadratures `w_j' = u₁ u_{j-1}`,
//! `v_j' = w_j/u₁²`) and the differential method
//! (`u₂ = c₂ u₁ + d₂ u₁ ∫dy/u₁² + ∂u₁/∂ε`). For k = 2 the key function is
//! `w₂` with `W(u₁,u₂) = -2 w₂`, so the partner reduces to
//! `Ṽ = V - (u₁²/w₂)'`.
//!
//! When the seed has interior nodes the `v`-quadrature has an apparent
//! double pole; it is integrated by parts against `d(-1/u₁)` inside a window
//! around each node, which leaves a regular integrand plus boundary terms and
//! keeps `u₂ = -2u₁v₂` evaluable through the node.

use crate::error::Error;
use crate::grid::{adaptive_simpson, CumulativeIntegral, GridSpec};
use crate::jet::{integral_jet, Jet};
use crate::schrodinger::{wronskian_jet, NormStatus, Potential, WaveFunction};
use crate::susy::{erf_jet, NonSingularityReport, Verdict};
use crate::{Real, Result};
use std::sync::Arc;

const QUAD_TOL: Real = 1e-10;
const NODE_WINDOW: Real = 0.35;

/// How a Jordan chain was generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMethod {
    Integral,
    Differential,
}

/// Jordan chain of generalized eigenfunctions at a single factorization
/// energy: `(H-ε)u₁ = 0`, `(H-ε)u_j = u_{j-1}`.
pub struct JordanChain {
    pub epsilon: Real,
    pub method: ChainMethod,
    pub x0: Real,
    pub base: Potential,
    /// Estimated mass of the seed integrand beyond the grid edge when the
    /// anchor stands in for ±∞.
    pub tail_estimate: Real,
    links: Vec<WaveFunction>,
    key_w2: Option<Arc<dyn Fn(Real) -> Real + Send + Sync>>,
}

impl JordanChain {
    pub fn order(&self) -> usize {
        self.links.len()
    }

    /// `u_j`, 1-indexed.
    pub fn link(&self, j: usize) -> &WaveFunction {
        &self.links[j - 1]
    }

    pub fn links(&self) -> &[WaveFunction] {
        &self.links
    }

    /// Key function `w₂ = -W(u₁,u₂)/2` of a second-order chain.
    pub fn key_w2(&self, x: Real) -> Option<Real> {
        self.key_w2.as_ref().map(|f| f(x))
    }

    /// Residual of the defining relation for link j: `(H-ε)u₁` for j = 1,
    /// `(H-ε)u_j - u_{j-1}` beyond, measured relative to `1 + |u_j|`.
    pub fn link_residual(&self, j: usize, grid: &GridSpec) -> Real {
        let u = &self.links[j - 1];
        let c = self.base.convention_factor;
        let mut worst: Real = 0.0;
        for x in grid.points() {
            let uj = u.jet(x, 2);
            let mut r = -c * uj.deriv(2) + (self.base.value(x) - self.epsilon) * uj.value();
            if j > 1 {
                r -= self.links[j - 2].value(x);
            }
            worst = worst.max(r.abs() / (1.0 + uj.value().abs()));
        }
        worst
    }
}

fn interior_nodes(u: &WaveFunction, grid: &GridSpec) -> Vec<Real> {
    let pts = grid.points();
    let mut nodes = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (u.value(a), u.value(b));
        if fa == 0.0 {
            continue;
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if u.value(lo) * u.value(m) <= 0.0 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            nodes.push(0.5 * (lo + hi));
        }
    }
    nodes
}

fn gaussian_tail_estimate(f: &dyn Fn(Real) -> Real, edge: Real) -> Real {
    // mass beyond a Gaussian-decaying edge is bounded by |f(edge)|/(2|edge|)
    (f(edge)).abs() / (2.0 * edge.abs().max(1.0))
}

/// The `v`-quadrature of one chain link, integrating `w/u₁²` with
/// integration-by-parts windows around the seed's interior nodes.
struct VQuadrature {
    u1: WaveFunction,
    u_prev: WaveFunction,
    w: Arc<dyn Fn(Real) -> Real + Send + Sync>,
    base: Potential,
    epsilon: Real,
    nodes: Vec<Real>,
    grid_xs: Vec<Real>,
    grid_vals: Vec<Real>,
    v0_offset: Real,
}

impl VQuadrature {
    fn window_start(&self, x: Real) -> Option<Real> {
        self.nodes.iter().find(|&&n| (x - n).abs() < NODE_WINDOW).map(|&n| n - NODE_WINDOW)
    }

    /// Regular integrand left after integrating by parts:
    /// `u_prev/u₁' - (V-ε) w / (c u₁'²)`.
    fn reg(&self, y: Real) -> Real {
        let du = self.u1.derivative(1, y);
        let c = self.base.convention_factor;
        self.u_prev.value(y) / du - (self.base.value(y) - self.epsilon) * (self.w)(y) / (c * du * du)
    }

    fn reg_jet(&self, x: Real, n: usize) -> Jet {
        let du = self.u1.jet(x, n + 1).shift();
        let c = self.base.convention_factor;
        let w_jet = self.w_jet(x, n);
        let pot = self.base.jet(x, n).sub(&Jet::constant(self.epsilon, n));
        self.u_prev.jet(x, n).div(&du).sub(&pot.mul(&w_jet).div(&du.mul(&du).scale(c)))
    }

    fn w_jet(&self, x: Real, n: usize) -> Jet {
        if n == 0 {
            return Jet::constant((self.w)(x), 0);
        }
        let integrand = self.u1.jet(x, n - 1).mul(&self.u_prev.jet(x, n - 1));
        integral_jet((self.w)(x), &integrand)
    }

    /// Boundary term `-w/(u₁ u₁')` of the integration by parts.
    fn boundary(&self, y: Real) -> Real {
        -(self.w)(y) / (self.u1.value(y) * self.u1.derivative(1, y))
    }

    /// Signed increment of `∫ w/u₁²` over one segment, routed through the
    /// parts formula when the segment touches a node window.
    fn segment(&self, a: Real, b: Real) -> Result<Real> {
        let touches = self
            .nodes
            .iter()
            .any(|&n| (a - n).abs() < NODE_WINDOW || (b - n).abs() < NODE_WINDOW || (a < n && n < b));
        if touches {
            let reg = adaptive_simpson(|y| self.reg(y), a, b, QUAD_TOL)?;
            Ok(self.boundary(b) - self.boundary(a) + reg)
        } else {
            adaptive_simpson(|y| (self.w)(y) / self.u1.value(y).powi(2), a, b, QUAD_TOL)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        u1: WaveFunction,
        u_prev: WaveFunction,
        w: Arc<dyn Fn(Real) -> Real + Send + Sync>,
        base: Potential,
        epsilon: Real,
        nodes: Vec<Real>,
        grid: &GridSpec,
        x0: Real,
        v0: Real,
    ) -> Result<Self> {
        let mut q = VQuadrature {
            u1,
            u_prev,
            w,
            base,
            epsilon,
            nodes,
            grid_xs: grid.points(),
            grid_vals: Vec::new(),
            v0_offset: 0.0,
        };
        let mut vals = vec![0.0; q.grid_xs.len()];
        for i in 1..q.grid_xs.len() {
            let inc = q.segment(q.grid_xs[i - 1], q.grid_xs[i])?;
            vals[i] = vals[i - 1] + inc;
        }
        q.grid_vals = vals;
        let at_x0 = q.raw_value(x0)?;
        q.v0_offset = v0 - at_x0;
        Ok(q)
    }

    fn raw_value(&self, x: Real) -> Result<Real> {
        let n = self.grid_xs.len();
        if x <= self.grid_xs[0] {
            return Ok(self.grid_vals[0] - self.segment(x, self.grid_xs[0])?);
        }
        if x >= self.grid_xs[n - 1] {
            return Ok(self.grid_vals[n - 1] + self.segment(self.grid_xs[n - 1], x)?);
        }
        let h = self.grid_xs[1] - self.grid_xs[0];
        let i = (((x - self.grid_xs[0]) / h).floor() as usize).min(n - 2);
        Ok(self.grid_vals[i] + self.segment(self.grid_xs[i], x)?)
    }

    fn value(&self, x: Real) -> Real {
        self.v0_offset + self.raw_value(x).unwrap_or(Real::NAN)
    }
}

/// Jet of one chain link `u_j = -2 u₁ v_j`, switching to the parts form
/// inside node windows (where `v_j` itself blows up but `u_j` stays smooth).
fn link_jet(q: &Arc<VQuadrature>, x: Real, n: usize) -> Jet {
    if let Some(a) = q.window_start(x) {
        // u_j(x) = -2 u₁(x) [C + R(x)] + 2 w(x)/u₁'(x),
        // C = v(a) - boundary(a), R = ∫_a^x reg
        let c = q.value(a) - q.boundary(a);
        let r_val = adaptive_simpson(|y| q.reg(y), a, x, QUAD_TOL).unwrap_or(Real::NAN);
        let r_jet = if n == 0 {
            Jet::constant(r_val, 0)
        } else {
            integral_jet(r_val, &q.reg_jet(x, n - 1))
        };
        let u1 = q.u1.jet(x, n);
        let du1 = q.u1.jet(x, n + 1).shift();
        let w = q.w_jet(x, n);
        u1.mul(&r_jet.add(&Jet::constant(c, n))).scale(-2.0).add(&w.div(&du1).scale(2.0))
    } else {
        let u1 = q.u1.jet(x, n);
        let v = if n == 0 {
            Jet::constant(q.value(x), 0)
        } else {
            let w = q.w_jet(x, n - 1);
            let u1sq = q.u1.jet(x, n - 1);
            integral_jet(q.value(x), &w.div(&u1sq.mul(&u1sq)))
        };
        u1.mul(&v).scale(-2.0)
    }
}

/// Integral-method Jordan chain: `constants[j-2] = (v_j(x₀), w_j(x₀))` for
/// each link beyond the seed. An anchor at the grid edge stands in for ±∞
/// (the tail estimate is reported on the chain).
pub fn chain_integral(
    u1: &WaveFunction,
    k: usize,
    x0: Real,
    constants: &[(Real, Real)],
) -> Result<JordanChain> {
    if k < 2 {
        return Err(Error::InvalidParameter("confluent chains start at k = 2".into()));
    }
    if constants.len() != k - 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} (v_j(x₀), w_j(x₀)) pairs, got {}",
            k - 1,
            constants.len()
        )));
    }
    let epsilon = u1
        .energy
        .ok_or_else(|| Error::InvalidParameter("seed must carry its factorization energy label".into()))?;
    let base = Potential::harmonic();
    let grid = GridSpec::new(-12.0, 12.0, 2401)?;
    let nodes = interior_nodes(u1, &grid);
    if !nodes.is_empty() && k > 2 {
        return Err(Error::Quadrature(format!(
            "seed has interior nodes at {nodes:?}; chains beyond k = 2 need a nodeless seed"
        )));
    }
    let u1_for_tail = u1.clone();
    let tail_estimate = gaussian_tail_estimate(&|y| u1_for_tail.value(y).powi(2), x0);

    let mut links = vec![u1.clone()];
    let mut key_w2: Option<Arc<dyn Fn(Real) -> Real + Send + Sync>> = None;
    for j in 2..=k {
        let (v0, w0) = constants[j - 2];
        let u_prev = links[j - 2].clone();
        let u1c = u1.clone();
        let prev = u_prev.clone();
        let w_cum =
            CumulativeIntegral::build(move |y| u1c.value(y) * prev.value(y), grid, x0, QUAD_TOL)?;
        let w_fn: Arc<dyn Fn(Real) -> Real + Send + Sync> =
            Arc::new(move |x| w0 + w_cum.value(x).unwrap_or(Real::NAN));
        if j == 2 {
            key_w2 = Some(w_fn.clone());
        }
        let q = Arc::new(VQuadrature::build(
            u1.clone(),
            u_prev,
            w_fn,
            base.clone(),
            epsilon,
            nodes.clone(),
            &grid,
            x0,
            v0,
        )?);
        if !q.grid_vals.iter().all(|v| v.is_finite()) {
            return Err(Error::Quadrature(
                "v-quadrature overflowed; the seed diverges too fast for the chosen x₀ side".into(),
            ));
        }
        let qj = q.clone();
        let name = format!("u_{j}[confluent ε = {epsilon}]");
        links.push(WaveFunction::from_jet_fn(move |x, n| link_jet(&qj, x, n), Some(epsilon), &name));
    }
    Ok(JordanChain {
        epsilon,
        method: ChainMethod::Integral,
        x0,
        base,
        tail_estimate,
        links,
        key_w2,
    })
}

/// Differential-method chain (k = 2): `u₂ = c₂ u₁ + d₂ u₁ ∫dy/u₁² + ∂u₁/∂ε`.
/// The ε-derivative of the seed is supplied by the caller; the key function
/// is `w₂ = -(d₂ + W(u₁, ∂u₁/∂ε))/2`, no quadrature involved.
pub fn chain_differential(
    u1: &WaveFunction,
    du1_deps: &WaveFunction,
    c2: Real,
    d2: Real,
    x0: Real,
) -> Result<JordanChain> {
    let epsilon = u1
        .energy
        .ok_or_else(|| Error::InvalidParameter("seed must carry its factorization energy label".into()))?;
    let base = Potential::harmonic();
    let grid = GridSpec::new(-12.0, 12.0, 2401)?;
    // (H-ε)∂u₁/∂ε = u₁ must hold for the supplied derivative
    let check = GridSpec::new(-5.0, 5.0, 101)?;
    let mut worst: Real = 0.0;
    for x in check.points() {
        let pj = du1_deps.jet(x, 2);
        let c = base.convention_factor;
        let r = (-c * pj.deriv(2) + (base.value(x) - epsilon) * pj.value() - u1.value(x)).abs()
            / (1.0 + u1.value(x).abs());
        worst = worst.max(r);
    }
    if worst > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "∂u₁/∂ε does not solve the inhomogeneous equation (residual {worst:.2e})"
        )));
    }
    let nodes = interior_nodes(u1, &grid);
    let u2 = if d2 == 0.0 {
        let (u1c, pc) = (u1.clone(), du1_deps.clone());
        WaveFunction::from_jet_fn(
            move |x, n| u1c.jet(x, n).scale(c2).add(&pc.jet(x, n)),
            Some(epsilon),
            "u_2[confluent, differential]",
        )
    } else {
        if !nodes.is_empty() {
            return Err(Error::Quadrature(format!(
                "1/u₁² is non-integrable across the seed nodes at {nodes:?}; such seeds are invalid here"
            )));
        }
        let u1c = u1.clone();
        let inv = CumulativeIntegral::build(move |y| u1c.value(y).powi(-2), grid, x0, QUAD_TOL)?;
        let (u1c, pc) = (u1.clone(), du1_deps.clone());
        WaveFunction::from_jet_fn(
            move |x, n| {
                let u1j = u1c.jet(x, n);
                let i_jet = if n == 0 {
                    Jet::constant(inv.value(x).unwrap_or(Real::NAN), 0)
                } else {
                    let u1sq = u1c.jet(x, n - 1);
                    integral_jet(
                        inv.value(x).unwrap_or(Real::NAN),
                        &Jet::constant(1.0, n - 1).div(&u1sq.mul(&u1sq)),
                    )
                };
                u1j.scale(c2).add(&u1j.mul(&i_jet).scale(d2)).add(&pc.jet(x, n))
            },
            Some(epsilon),
            "u_2[confluent, differential]",
        )
    };
    let (u1c, pc) = (u1.clone(), du1_deps.clone());
    let key: Arc<dyn Fn(Real) -> Real + Send + Sync> =
        Arc::new(move |x| -(d2 + wronskian_jet(&[&u1c, &pc], x, 0).value()) / 2.0);
    Ok(JordanChain {
        epsilon,
        method: ChainMethod::Differential,
        x0,
        base,
        tail_estimate: 0.0,
        links: vec![u1.clone(), u2],
        key_w2: Some(key),
    })
}

fn scan_sign_constant<F: Fn(Real) -> Real>(f: F, grid: &GridSpec, what: &str) -> Result<()> {
    let mut last_sign = 0i8;
    for x in grid.points() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::SingularTransformation(format!("non-finite {what} at x = {x}")));
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
                return Err(Error::SingularTransformation(format!("{what} vanishes near x = {x}")));
            }
            last_sign = s;
        }
    }
    Ok(())
}

/// Partner potential of the chain. For k = 2 this is the analytic
/// simplification `Ṽ = V - (u₁²/w₂)'` (since `w₂' = u₁²`); higher chains go
/// through the general Wronskian of the links.
pub fn confluent_partner(chain: &JordanChain) -> Result<Potential> {
    let scan = GridSpec::working();
    if chain.order() == 2 {
        let w2 = chain.key_w2.clone().expect("k = 2 chain carries its key function");
        scan_sign_constant(|x| w2(x), &scan, "w₂")?;
        let u1 = chain.link(1).clone();
        let base = chain.base.clone();
        let (domain, conv) = (base.domain, base.convention_factor);
        let name = format!("confluent-partner[ε = {}]", chain.epsilon);
        return Ok(Potential::from_jet_fn(
            move |x, n| {
                let u1j = u1.jet(x, n + 1);
                let w2j = integral_jet(w2(x), &u1j.mul(&u1j));
                base.jet(x, n).sub(&u1j.mul(&u1j).div(&w2j).shift())
            },
            &name,
            domain,
            conv,
        ));
    }
    let links = chain.links.clone();
    let base = chain.base.clone();
    let (domain, conv) = (base.domain, base.convention_factor);
    {
        let refs: Vec<&WaveFunction> = links.iter().collect();
        scan_sign_constant(|x| wronskian_jet(&refs, x, 0).value(), &scan, "chain Wronskian")?;
    }
    let name = format!("confluent-partner[k = {}, ε = {}]", chain.order(), chain.epsilon);
    Ok(Potential::from_jet_fn(
        move |x, n| {
            let refs: Vec<&WaveFunction> = links.iter().collect();
            let w = wronskian_jet(&refs, x, n + 2);
            base.jet(x, n).sub(&w.shift().div(&w.truncate(n + 1)).shift())
        },
        &name,
        domain,
        conv,
    ))
}

/// Seed-selection rules of the confluent algorithm: the seed must vanish at
/// (at least) one edge; the admissible `b₂` range keeping `w₂` nodeless then
/// follows from the monotonicity `w₂' = u₁² ≥ 0`.
pub fn validate_confluent_seed(u1: &WaveFunction, b2: Real) -> NonSingularityReport {
    let grid = GridSpec::working();
    let pts = grid.points();
    let vals: Vec<Real> = pts.iter().map(|&x| u1.value(x)).collect();
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, Real::max);
    let vanish_l = vals.first().unwrap().abs() < 1e-8 * scale;
    let vanish_r = vals.last().unwrap().abs() < 1e-8 * scale;
    let tol = 1e-12;
    if !vanish_l && !vanish_r {
        return NonSingularityReport {
            verdict: Verdict::Singular,
            rule_applied: "seed vanishes at neither edge: w₂ crosses zero for every b₂".into(),
            node_counts: vec![],
            created_levels: vec![],
            deleted_levels: vec![],
        };
    }
    let deleted = |lvl: Option<Real>| lvl.map(|e| vec![e]).unwrap_or_default();
    if vanish_l && vanish_r {
        // eigenfunction-like seed: w₂ spans [b₂, b₂ + M]
        let mass = crate::grid::simpson(
            |x| u1.value(x).powi(2),
            grid.x_min,
            grid.x_max,
            (grid.n_points - 1) / 2,
        );
        let rule =
            format!("eigenfunction seed: nodeless w₂ for b₂ > 0 or b₂ ≤ -M, M = ∫u₁² ≈ {mass:.6}");
        if b2 > tol || b2 < -mass - tol {
            return NonSingularityReport {
                verdict: Verdict::Nonsingular,
                rule_applied: format!("{rule}; isospectral member"),
                node_counts: vec![],
                created_levels: vec![],
                deleted_levels: vec![],
            };
        }
        if b2.abs() <= tol || (b2 + mass).abs() <= tol {
            return NonSingularityReport {
                verdict: Verdict::Nonsingular,
                rule_applied: format!(
                    "{rule}; w₂ vanishes at one edge: the eigenvalue leaves the spectrum"
                ),
                node_counts: vec![],
                created_levels: vec![],
                deleted_levels: deleted(u1.energy),
            };
        }
        return NonSingularityReport {
            verdict: Verdict::Singular,
            rule_applied: format!("{rule}; b₂ = {b2} puts a node in w₂"),
            node_counts: vec![],
            created_levels: vec![],
            deleted_levels: vec![],
        };
    }
    // one-edge-vanishing seed, anchored at the vanishing side
    if b2 > tol {
        NonSingularityReport {
            verdict: Verdict::Nonsingular,
            rule_applied: "one-edge-vanishing seed with b₂ > 0: isospectral".into(),
            node_counts: vec![],
            created_levels: vec![],
            deleted_levels: vec![],
        }
    } else if b2.abs() <= tol {
        NonSingularityReport {
            verdict: Verdict::Nonsingular,
            rule_applied: "one-edge-vanishing seed with b₂ = 0: w₂ vanishes at the edge".into(),
            node_counts: vec![],
            created_levels: vec![],
            deleted_levels: vec![],
        }
    } else {
        NonSingularityReport {
            verdict: Verdict::Singular,
            rule_applied: format!("b₂ = {b2} < 0 puts a node in the monotone w₂"),
            node_counts: vec![],
            created_levels: vec![],
            deleted_levels: vec![],
        }
    }
}

/// Matches the differential-method constants `(c₂, d₂)` to an integral-method
/// chain by collocation: `d₂` from the Wronskian identity
/// `W(u₁,u₂) = d₂ + W(u₁,∂u₁/∂ε) = -2w₂` at `x_ref`, then `c₂` from the value
/// of `u₂` at `x_ref`.
pub fn match_differential_constants(
    chain: &JordanChain,
    du1_deps: &WaveFunction,
    x_ref: Real,
    x0: Real,
) -> Result<(Real, Real)> {
    if chain.order() != 2 || chain.method != ChainMethod::Integral {
        return Err(Error::InvalidParameter("matching needs a k = 2 integral chain".into()));
    }
    let u1 = chain.link(1);
    let w2_ref = chain.key_w2(x_ref).ok_or_else(|| Error::InvalidParameter("missing w₂".into()))?;
    let d2 = -2.0 * w2_ref - wronskian_jet(&[u1, du1_deps], x_ref, 0).value();
    let nodes = interior_nodes(u1, &GridSpec::new(-12.0, 12.0, 2401)?);
    let crosses = nodes.iter().any(|&n| (x0 - n) * (x_ref - n) < 0.0);
    if crosses {
        return Err(Error::Quadrature(
            "collocation points straddle a seed node; pick x₀ and x_ref on one side".into(),
        ));
    }
    let i_ref = adaptive_simpson(|y| u1.value(y).powi(-2), x0, x_ref, QUAD_TOL)?;
    let u2_ref = chain.link(2).value(x_ref);
    let c2 = (u2_ref - du1_deps.value(x_ref) - d2 * u1.value(x_ref) * i_ref) / u1.value(x_ref);
    Ok((c2, d2))
}

/// Closed-form one-parameter family generated by the first-excited-state
/// seed: `Ṽ = x²/2 - [4x²/(√π(2b₂+1)e^{x²} + √π e^{x²} erf x - 2x)]'`.
pub fn first_excited_family_potential(b2: Real) -> Potential {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    Potential::from_jet_fn(
        move |x, n| {
            let m = n + 1;
            let e2 = crate::jet::gauss_jet(2.0, x, m);
            let num = crate::jet::poly_jet(&[0.0, 0.0, 4.0], x, m);
            let den = e2
                .scale(sqrt_pi * (2.0 * b2 + 1.0))
                .add(&e2.mul(&erf_jet(x, m)).scale(sqrt_pi))
                .sub(&crate::jet::poly_jet(&[0.0, 2.0], x, m));
            crate::jet::poly_jet(&[0.0, 0.0, 0.5], x, n).sub(&num.div(&den).shift())
        },
        &format!("first-excited confluent family (b₂ = {b2})"),
        (-12.0, 12.0),
        0.5,
    )
}

/// Normalized first excited state with its ε-derivative scaled consistently,
/// the standard inputs of the worked confluent examples.
pub fn first_excited_seed_pair() -> Result<(WaveFunction, WaveFunction)> {
    let mut u1 = crate::schrodinger::oscillator_eigenfunction(1);
    u1.norm_status = NormStatus::Normalized;
    // ψ₁ = N·x e^{-x²/2} with N = √2 π^{-1/4}; the pure odd branch at ε = 3/2
    // is exactly x e^{-x²/2}, so the ε-family through ψ₁ is N times it
    let n = 2.0_f64.sqrt() / std::f64::consts::PI.powf(0.25);
    let p =
        crate::schrodinger::oscillator_eps_derivative(1.5, crate::schrodinger::Mix::PureOdd)?.scale(n);
    Ok((u1, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::{
        oscillator_eigenfunction, oscillator_eps_derivative, oscillator_general_solution,
        solve_spectrum_fd, Mix,
    };
    use crate::susy::compare_aligned;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn w2_monotone_for_first_excited_seed() {
        let (u1, _) = first_excited_seed_pair().unwrap();
        let chain = chain_integral(&u1, 2, -10.0, &[(0.0, 1.0)]).unwrap();
        assert!(chain.tail_estimate < 1e-40);
        let mut prev = Real::NEG_INFINITY;
        for x in GridSpec::new(-6.0, 6.0, 121).unwrap().points() {
            let w = chain.key_w2(x).unwrap();
            assert!(w >= prev - 1e-12, "w₂ not monotone at {x}");
            prev = w;
        }
        // w₂(+∞) = b₂ + 1 for the normalized seed
        assert_abs_diff_eq!(chain.key_w2(10.0).unwrap(), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn first_excited_family_matches_closed_form() {
        let (u1, _) = first_excited_seed_pair().unwrap();
        for &b2 in &[1.0, 0.25] {
            let chain = chain_integral(&u1, 2, -10.0, &[(0.0, b2)]).unwrap();
            let v = confluent_partner(&chain).unwrap();
            let gold = first_excited_family_potential(b2);
            let grid = GridSpec::new(-5.0, 5.0, 401).unwrap();
            let (c, sup) = compare_aligned(&v, &gold, &grid);
            assert!(sup < 1e-8, "b₂ = {b2}: sup {sup}");
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn big_b2_returns_to_the_oscillator() {
        let (u1, _) = first_excited_seed_pair().unwrap();
        let chain = chain_integral(&u1, 2, -10.0, &[(0.0, 1e6)]).unwrap();
        let v = confluent_partner(&chain).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 201).unwrap();
        let sup =
            grid.points().iter().map(|&x| (v.value(x) - x * x / 2.0).abs()).fold(0.0, Real::max);
        assert!(sup < 1e-4, "sup {sup}");
    }

    #[test]
    fn chain_links_through_the_seed_node() {
        // the u₂ built from the ψ₁ seed stays smooth through the node at 0
        let (u1, _) = first_excited_seed_pair().unwrap();
        let chain = chain_integral(&u1, 2, -10.0, &[(0.0, 1.0)]).unwrap();
        let u2 = chain.link(2);
        assert!(u2.value(0.0).is_finite());
        let grid = GridSpec::new(-4.0, 4.0, 161).unwrap();
        let mut worst: Real = 0.0;
        for x in grid.points() {
            let uj = u2.jet(x, 2);
            let r = (-0.5 * uj.deriv(2) + (x * x / 2.0 - 1.5) * uj.value() - u1.value(x)).abs()
                / (1.0 + uj.value().abs());
            worst = worst.max(r);
        }
        assert!(worst < 1e-6, "link residual {worst}");
    }

    #[test]
    fn ground_state_seed_reproduces_erf_family() {
        // ψ₀-seeded confluent family equals the first-order erf family with
        // ν = 1/(2b₂+1), shifted by +1
        let u1 = oscillator_eigenfunction(0);
        let b2 = 0.75;
        let chain = chain_integral(&u1, 2, -10.0, &[(0.0, b2)]).unwrap();
        let v = confluent_partner(&chain).unwrap();
        let nu = 1.0 / (2.0 * b2 + 1.0);
        let gold = crate::susy::closed_form_catalogue(crate::susy::CatalogueId::S1M12 { nu });
        let grid = GridSpec::new(-5.0, 5.0, 401).unwrap();
        let (c, sup) = compare_aligned(&v, &gold, &grid);
        assert!(sup < 1e-8, "sup {sup}");
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn chain_k3_linkage_residuals() {
        let u1 = oscillator_eigenfunction(0);
        let chain = chain_integral(&u1, 3, 0.0, &[(0.1, 0.4), (-0.2, 0.3)]).unwrap();
        let grid = GridSpec::new(-3.0, 3.0, 61).unwrap();
        assert!(chain.link_residual(1, &grid) < 1e-8);
        assert!(chain.link_residual(2, &grid) < 1e-6, "{}", chain.link_residual(2, &grid));
        assert!(chain.link_residual(3, &grid) < 1e-6, "{}", chain.link_residual(3, &grid));
    }

    #[test]
    fn differential_wronskian_identity_and_c2_independence() {
        let eps = -0.5;
        let u1 = oscillator_general_solution(eps, Mix::Nu(0.0)).unwrap();
        let p = oscillator_eps_derivative(eps, Mix::Nu(0.0)).unwrap();
        for &c2 in &[0.0, 2.3] {
            let chain = chain_differential(&u1, &p, c2, 0.0, 0.0).unwrap();
            // d₂ = 0 ⇒ W(u₁,u₂) = W(u₁,∂u₁/∂ε) independent of c₂
            for &x in &[-1.0, 0.4, 2.0] {
                let w = wronskian_jet(&[&u1, chain.link(2)], x, 0).value();
                let wp = wronskian_jet(&[&u1, &p], x, 0).value();
                assert_relative_eq!(w, wp, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
        // general d₂: W(u₁,u₂) = d₂ + W(u₁,∂u₁/∂ε)
        let chain = chain_differential(&u1, &p, 0.7, 1.3, 0.0).unwrap();
        for &x in &[-0.8, 1.1] {
            let w = wronskian_jet(&[&u1, chain.link(2)], x, 0).value();
            let wp = wronskian_jet(&[&u1, &p], x, 0).value();
            assert_relative_eq!(w, 1.3 + wp, max_relative = 1e-8);
        }
    }

    #[test]
    fn differential_rejects_noded_seed_with_d2() {
        let (u1, p) = first_excited_seed_pair().unwrap();
        assert!(chain_differential(&u1, &p, 0.0, 1.0, -10.0).is_err());
        assert!(chain_differential(&u1, &p, 0.0, 0.0, -10.0).is_ok());
    }

    #[test]
    fn integral_and_differential_methods_agree_nodeless_seed() {
        // ψ₀ seed: both u₂ constructions and both potentials after matching
        let u1 = oscillator_eigenfunction(0);
        let p = oscillator_eps_derivative(0.5, Mix::Nu(0.0))
            .unwrap()
            .scale(1.0 / std::f64::consts::PI.powf(0.25));
        let x0 = 0.25;
        let chain_i = chain_integral(&u1, 2, x0, &[(0.3, 0.9)]).unwrap();
        let (c2, d2) = match_differential_constants(&chain_i, &p, 1.4, x0).unwrap();
        let chain_d = chain_differential(&u1, &p, c2, d2, x0).unwrap();
        for &x in &[-2.0, -0.5, 0.8, 2.2] {
            assert_relative_eq!(
                chain_i.link(2).value(x),
                chain_d.link(2).value(x),
                max_relative = 1e-7,
                epsilon = 1e-9
            );
        }
        let vi = confluent_partner(&chain_i).unwrap();
        let vd = confluent_partner(&chain_d).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 201).unwrap();
        let sup = grid
            .points()
            .iter()
            .map(|&x| (vi.value(x) - vd.value(x)).abs())
            .fold(0.0, Real::max);
        assert!(sup < 1e-6, "sup {sup}");
    }

    #[test]
    fn integral_and_differential_potentials_agree_noded_seed() {
        let (u1, p) = first_excited_seed_pair().unwrap();
        let chain_i = chain_integral(&u1, 2, -10.0, &[(0.0, 0.6)]).unwrap();
        // d₂ from the Wronskian identity at a reference point, then build the
        // differential-method partner straight from its key function
        let x_ref = 1.0;
        let d2 =
            -2.0 * chain_i.key_w2(x_ref).unwrap() - wronskian_jet(&[&u1, &p], x_ref, 0).value();
        let vd = {
            let (u1c, pc) = (u1.clone(), p.clone());
            let key: Arc<dyn Fn(Real) -> Real + Send + Sync> =
                Arc::new(move |x| -(d2 + wronskian_jet(&[&u1c, &pc], x, 0).value()) / 2.0);
            let u1c = u1.clone();
            Potential::from_jet_fn(
                move |x, n| {
                    let u1j = u1c.jet(x, n + 1);
                    let w2j = integral_jet(key(x), &u1j.mul(&u1j));
                    crate::jet::poly_jet(&[0.0, 0.0, 0.5], x, n)
                        .sub(&u1j.mul(&u1j).div(&w2j).shift())
                },
                "differential partner",
                (-12.0, 12.0),
                0.5,
            )
        };
        let vi = confluent_partner(&chain_i).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 201).unwrap();
        let sup = grid
            .points()
            .iter()
            .map(|&x| (vi.value(x) - vd.value(x)).abs())
            .fold(0.0, Real::max);
        assert!(sup < 1e-6, "sup {sup}");
    }

    #[test]
    fn isospectral_and_deletion_spectra() {
        let (u1, _) = first_excited_seed_pair().unwrap();
        let chain = chain_integral(&u1, 2, -10.0, &[(0.0, 1.0)]).unwrap();
        let v = confluent_partner(&chain).unwrap();
        let rep = solve_spectrum_fd(&v, (-8.0, 8.0), 2000, 7).unwrap();
        for (n, &e) in rep.eigenvalues.iter().enumerate() {
            assert_abs_diff_eq!(e, n as Real + 0.5, epsilon = 1e-3);
        }
        let chain0 = chain_integral(&u1, 2, -10.0, &[(0.0, 0.0)]).unwrap();
        let v0 = confluent_partner(&chain0).unwrap();
        let rep0 = solve_spectrum_fd(&v0, (-8.0, 8.0), 2000, 6).unwrap();
        let expect = [0.5, 2.5, 3.5, 4.5, 5.5, 6.5];
        for (e, x) in rep0.eigenvalues.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(e, x, epsilon = 1e-3);
        }
    }

    #[test]
    fn seed_validation_rules() {
        let (psi1, _) = first_excited_seed_pair().unwrap();
        let rep = validate_confluent_seed(&psi1, 1.0);
        assert_eq!(rep.verdict, Verdict::Nonsingular);
        assert!(rep.deleted_levels.is_empty());
        let rep = validate_confluent_seed(&psi1, 0.0);
        assert_eq!(rep.verdict, Verdict::Nonsingular);
        assert_eq!(rep.deleted_levels, vec![1.5]);
        let rep = validate_confluent_seed(&psi1, -0.3);
        assert_eq!(rep.verdict, Verdict::Singular);
        // nodeless but diverging at both edges: rejected
        let u = oscillator_general_solution(-0.5, Mix::Nu(0.0)).unwrap();
        let rep = validate_confluent_seed(&u, 1.0);
        assert_eq!(rep.verdict, Verdict::Singular);
    }
}
