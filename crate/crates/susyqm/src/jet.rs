//! Truncated derivative chains ("jets").
//!
//! A [`Jet`] holds the values `f(x), f'(x), ..., f^(n)(x)` of a function at a
//! single point. Ring operations implement the Leibniz rule, so Wronskians,
//! log-derivatives and quotients of wavefunctions propagate exact analytic
//! derivatives instead of finite differences. Orders stay small (≤ 8 or so),
//! determinants stay ≤ 5×5, so the O(n²) products are never a concern.

use crate::Real;

/// Derivative chain of a function at one point: `d[i] = f^(i)(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    d: Vec<Real>,
}

impl Jet {
    pub fn constant(c: Real, order: usize) -> Self {
        let mut d = vec![0.0; order + 1];
        d[0] = c;
        Jet { d }
    }

    /// The identity function `x ↦ x` at the point `x`.
    pub fn variable(x: Real, order: usize) -> Self {
        let mut d = vec![0.0; order + 1];
        d[0] = x;
        if order >= 1 {
            d[1] = 1.0;
        }
        Jet { d }
    }

    pub fn from_derivatives(d: Vec<Real>) -> Self {
        assert!(!d.is_empty());
        Jet { d }
    }

    /// Truncation order (highest derivative carried).
    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> Real {
        self.d[0]
    }

    /// `f^(k)(x)`; zero beyond the carried order is a logic error.
    pub fn deriv(&self, k: usize) -> Real {
        self.d[k]
    }

    pub fn derivatives(&self) -> &[Real] {
        &self.d
    }

    /// Jet of `f'` to order `n-1`.
    pub fn shift(&self) -> Jet {
        assert!(self.d.len() >= 2, "cannot differentiate an order-0 jet");
        Jet { d: self.d[1..].to_vec() }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order < self.d.len());
        Jet { d: self.d[..=order].to_vec() }
    }

    pub fn scale(&self, c: Real) -> Jet {
        Jet { d: self.d.iter().map(|v| c * v).collect() }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let n = self.d.len().min(other.d.len());
        Jet { d: (0..n).map(|i| self.d[i] + other.d[i]).collect() }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let n = self.d.len().min(other.d.len());
        Jet { d: (0..n).map(|i| self.d[i] - other.d[i]).collect() }
    }

    /// Leibniz product.
    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.d.len().min(other.d.len());
        let mut d = vec![0.0; n];
        for m in 0..n {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..=m {
                acc += binom * self.d[k] * other.d[m - k];
                binom = binom * (m - k) as Real / (k + 1) as Real;
            }
            d[m] = acc;
        }
        Jet { d }
    }

    /// Quotient `f/g`; solves the Leibniz relation for the quotient chain.
    /// `g(x)` must be nonzero.
    pub fn div(&self, other: &Jet) -> Jet {
        let n = self.d.len().min(other.d.len());
        let g0 = other.d[0];
        let mut d = vec![0.0; n];
        for m in 0..n {
            // f^(m) = sum_k C(m,k) q^(k) g^(m-k)  with q = f/g; solve for q^(m).
            let mut acc = self.d[m];
            let mut binom = 1.0;
            for k in 0..m {
                acc -= binom * d[k] * other.d[m - k];
                binom = binom * (m - k) as Real / (k + 1) as Real;
            }
            d[m] = acc / g0;
        }
        Jet { d }
    }

    /// `(log f)'' = f''/f - (f'/f)²` — the deformation entering every partner
    /// potential. Requires order ≥ 2.
    pub fn log_second_derivative(&self) -> Real {
        let f = self.d[0];
        self.d[2] / f - (self.d[1] / f).powi(2)
    }

    /// Jet of `exp(f)` (composition through the exponential).
    pub fn exp(&self) -> Jet {
        let n = self.d.len();
        let mut d = vec![0.0; n];
        d[0] = self.d[0].exp();
        // (e^f)^(m+1) = sum_k C(m,k) f^(k+1) (e^f)^(m-k)
        for m in 0..n - 1 {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..=m {
                acc += binom * self.d[k + 1] * d[m - k];
                binom = binom * (m - k) as Real / (k + 1) as Real;
            }
            d[m + 1] = acc;
        }
        Jet { d }
    }
}

/// Jet of an antiderivative: `F(x) = value` with the chain of `F' = integrand`.
pub fn integral_jet(value: Real, integrand: &Jet) -> Jet {
    let mut d = Vec::with_capacity(integrand.order() + 2);
    d.push(value);
    d.extend_from_slice(integrand.derivatives());
    Jet::from_derivatives(d)
}

/// Jet of the Gaussian factor `exp(s·x²/2)` at `x`.
pub fn gauss_jet(s: Real, x: Real, order: usize) -> Jet {
    let mut d = vec![0.0; order + 1];
    d[0] = (s * x * x / 2.0).exp();
    // g' = s·x·g  ⇒  g^(m+1) = s (x g^(m) + m g^(m-1))
    for m in 0..order {
        let prev = if m == 0 { 0.0 } else { d[m - 1] };
        d[m + 1] = s * (x * d[m] + m as Real * prev);
    }
    Jet::from_derivatives(d)
}

/// Jet of a polynomial with coefficients `c[i]` on `x^i`.
pub fn poly_jet(coeffs: &[Real], x: Real, order: usize) -> Jet {
    let mut d = vec![0.0; order + 1];
    let mut c: Vec<Real> = coeffs.to_vec();
    for item in d.iter_mut() {
        *item = c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
        // differentiate the coefficient vector in place
        for i in 1..c.len() {
            c[i - 1] = i as Real * c[i];
        }
        if !c.is_empty() {
            let last = c.len() - 1;
            c[last] = 0.0;
        }
    }
    Jet::from_derivatives(d)
}

/// Completes a jet from `(f, f')` using the linear ODE `f'' = q·f + s`
/// (source jet `s` may be `None` for the homogeneous case).
///
/// `q` must carry order ≥ n-2 and `s` order ≥ n-2 for a target order n.
pub fn ode_complete(f0: Real, f1: Real, q: &Jet, source: Option<&Jet>, order: usize) -> Jet {
    let mut d = vec![0.0; order + 1];
    d[0] = f0;
    if order >= 1 {
        d[1] = f1;
    }
    for m in 0..order.saturating_sub(1) {
        // f^(m+2) = sum_k C(m,k) q^(k) f^(m-k) + s^(m)
        let mut acc = 0.0;
        let mut binom = 1.0;
        for k in 0..=m {
            acc += binom * q.deriv(k) * d[m - k];
            binom = binom * (m - k) as Real / (k + 1) as Real;
        }
        if let Some(s) = source {
            acc += s.deriv(m);
        }
        d[m + 2] = acc;
    }
    Jet::from_derivatives(d)
}

/// Determinant of a square matrix of jets by cofactor expansion (n ≤ 5 in
/// practice; exact in the ring of jets, no pivoting required).
pub fn jet_det(m: &[Vec<Jet>]) -> Jet {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    match n {
        0 => panic!("empty determinant"),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let order = m[0][0].order();
            let mut acc = Jet::constant(0.0, order);
            for j in 0..n {
                let minor: Vec<Vec<Jet>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&jet_det(&minor));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_matches_polynomial_algebra() {
        // f = x² + 1, g = 3x - 2 at x = 1.7
        let x = 1.7;
        let f = poly_jet(&[1.0, 0.0, 1.0], x, 4);
        let g = poly_jet(&[-2.0, 3.0], x, 4);
        let fg = f.mul(&g);
        let direct = poly_jet(&[-2.0, 3.0, -2.0, 3.0], x, 4);
        for k in 0..=4 {
            assert_relative_eq!(fg.deriv(k), direct.deriv(k), max_relative = 1e-14);
        }
    }

    #[test]
    fn quotient_inverts_product() {
        let x = 0.6;
        let f = poly_jet(&[0.3, -1.0, 2.0], x, 5);
        let g = poly_jet(&[1.5, 0.7], x, 5);
        let q = f.div(&g);
        let back = q.mul(&g);
        for k in 0..=5 {
            assert_relative_eq!(back.deriv(k), f.deriv(k), max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn gaussian_jet_satisfies_its_ode() {
        // g = e^{-x²/2}: g'' = (x² - 1) g
        let x = 1.3;
        let g = gauss_jet(-1.0, x, 6);
        for m in 0..=4 {
            // check g^(m+2) via Leibniz on (x²-1)·g
            let q = poly_jet(&[-1.0, 0.0, 1.0], x, 4);
            let rhs = q.mul(&g.truncate(4));
            assert_relative_eq!(g.deriv(m + 2), rhs.deriv(m), max_relative = 1e-12);
        }
    }

    #[test]
    fn exp_of_jet_matches_gauss_jet() {
        let x = 0.9;
        let half_sq = poly_jet(&[0.0, 0.0, 0.5], x, 5);
        let e = half_sq.exp();
        let g = gauss_jet(1.0, x, 5);
        for k in 0..=5 {
            assert_relative_eq!(e.deriv(k), g.deriv(k), max_relative = 1e-13);
        }
    }

    #[test]
    fn ode_completion_reproduces_gaussian() {
        let x = 0.4;
        let q = poly_jet(&[-1.0, 0.0, 1.0], x, 4);
        let g = gauss_jet(-1.0, x, 6);
        let completed = ode_complete(g.value(), g.deriv(1), &q, None, 6);
        for k in 0..=6 {
            assert_relative_eq!(completed.deriv(k), g.deriv(k), max_relative = 1e-12);
        }
    }

    #[test]
    fn wronskian_determinant_antisymmetry() {
        let x = 0.8;
        let f = gauss_jet(-1.0, x, 3);
        let g = poly_jet(&[0.0, 1.0, 0.0, 2.0], x, 3);
        let w_fg = jet_det(&[
            vec![f.truncate(2), g.truncate(2)],
            vec![f.shift().truncate(2), g.shift().truncate(2)],
        ]);
        let w_gf = jet_det(&[
            vec![g.truncate(2), f.truncate(2)],
            vec![g.shift().truncate(2), f.shift().truncate(2)],
        ]);
        for k in 0..=2 {
            assert_relative_eq!(w_fg.deriv(k), -w_gf.deriv(k), max_relative = 1e-13);
        }
    }

    #[test]
    fn three_by_three_det_against_hand_expansion() {
        let x = 1.1;
        let a = poly_jet(&[1.0, 2.0], x, 2);
        let b = poly_jet(&[0.0, 0.0, 1.0], x, 2);
        let c = poly_jet(&[3.0, 0.0, 0.0, 1.0], x, 2);
        let rows: Vec<Vec<Jet>> = vec![
            vec![a.clone(), b.clone(), c.clone()],
            vec![b.clone(), c.clone(), a.clone()],
            vec![c.clone(), a.clone(), b.clone()],
        ];
        let det = jet_det(&rows);
        let hand = a
            .mul(&c.mul(&b).sub(&a.mul(&a)))
            .sub(&b.mul(&b.mul(&b).sub(&a.mul(&c))))
            .add(&c.mul(&b.mul(&a).sub(&c.mul(&c))));
        assert_relative_eq!(det.value(), hand.value(), max_relative = 1e-13);
        assert_relative_eq!(det.deriv(1), hand.deriv(1), max_relative = 1e-13);
    }
}
