//! Special-function kernel: confluent and generalized hypergeometric series,
//! Hermite polynomials, Pochhammer symbols, gamma and the error function.
//!
//! Series are summed until `|term| < ε·|partial sum|` (machine epsilon of the
//! scalar) with a hard cap of 10⁵ terms; all series used here are entire, so
//! the factorial denominators always win. Negative arguments of ₁F₁ are
//! routed through the Kummer reflection `₁F₁(a,b;x) = eˣ ₁F₁(b-a,b;-x)` so
//! that the summed series always has a non-negative argument.

use crate::error::Error;
use num_traits::{Float, FromPrimitive};

/// Scalar the kernel is generic over; `f32` works for exploratory use, every
/// tolerance in the validation suites assumes `f64` (the crate-root [`crate::Real`]).
pub trait Scalar: Float + FromPrimitive + std::fmt::Debug {
    fn cst(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("constant conversion")
    }
    fn of_usize(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("index conversion")
    }
}
impl Scalar for f32 {}
impl Scalar for f64 {}

const MAX_TERMS: usize = 100_000;

/// Lanczos coefficients (g = 10.900511), good to ~16 digits in f64.
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const LANCZOS_R: f64 = 10.900511;

/// Gamma function via the Lanczos approximation, with reflection for x < 1/2.
/// Returns ±∞ at the poles (non-positive integers).
pub fn gamma<F: Scalar>(x: F) -> F {
    let two = F::cst(2.0);
    let pi = F::cst(std::f64::consts::PI);
    if x < F::cst(0.5) {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx); poles at the non-positive integers
        if x == x.round() {
            return F::infinity();
        }
        let s = (pi * x).sin();
        return pi / (s * gamma(F::one() - x));
    }
    let _ = two;
    let mut sum = F::cst(LANCZOS_DK[0]);
    for (i, &c) in LANCZOS_DK.iter().enumerate().skip(1) {
        sum = sum + F::cst(c) / (x - F::one() + F::of_usize(i));
    }
    let base = x - F::cst(0.5) + F::cst(LANCZOS_R);
    let ln_two_sqrt_e_pi = F::cst(0.6207822376352452223455184457816); // ln(2 sqrt(e/π))
    (ln_two_sqrt_e_pi + (x - F::cst(0.5)) * (base.ln() - F::one())).exp() * sum
}

/// True when `x` sits (within `tol`) on a gamma pole, i.e. is a non-positive integer.
pub fn is_gamma_pole<F: Scalar>(x: F, tol: F) -> bool {
    x <= tol && (x - x.round()).abs() < tol
}

/// Pochhammer symbol `(c)_m = c (c+1) ... (c+m-1)`, with `(c)_0 = 1`.
pub fn pochhammer<F: Scalar>(c: F, m: usize) -> F {
    let mut acc = F::one();
    for j in 0..m {
        acc = acc * (c + F::of_usize(j));
    }
    acc
}

/// Physicists' Hermite polynomial H_n(x) by the three-term recursion
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite<F: Scalar>(n: usize, x: F) -> F {
    let two = F::cst(2.0);
    let mut h_prev = F::one();
    if n == 0 {
        return h_prev;
    }
    let mut h = two * x;
    for k in 1..n {
        let next = two * x * h - two * F::of_usize(k) * h_prev;
        h_prev = h;
        h = next;
    }
    h
}

/// Coefficient vector of H_n (index i multiplies x^i). Exact in f64 for the
/// polynomial degrees used here.
pub fn hermite_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn check_denominator<F: Scalar>(b: F) -> Result<(), Error> {
    if is_gamma_pole(b, F::cst(1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "denominator parameter {:?} is zero or a negative integer",
            b
        )));
    }
    Ok(())
}

/// True when `a` makes the ₁F₁ series terminate (a non-positive integer).
fn terminates<F: Scalar>(a: F) -> Option<usize> {
    if a <= F::cst(1e-12) && (a - a.round()).abs() < F::cst(1e-12) {
        Some((-a.round().to_f64().unwrap()) as usize)
    } else {
        None
    }
}

/// Raw Kummer series Σ (a)_m /((b)_m m!) xᵐ, no reflection. Used internally
/// and by the terminating branch; callers wanting stability at x<0 should go
/// through [`kummer_1f1`].
pub fn kummer_series<F: Scalar>(a: F, b: F, x: F) -> Result<F, Error> {
    check_denominator(b)?;
    let cap = terminates(a).map(|m| m + 1).unwrap_or(MAX_TERMS);
    let mut term = F::one();
    let mut sum = F::one();
    let eps = F::epsilon();
    for m in 0..MAX_TERMS {
        if m + 1 > cap {
            return Ok(sum);
        }
        let mf = F::of_usize(m);
        term = term * (a + mf) / ((b + mf) * (mf + F::one())) * x;
        sum = sum + term;
        if term.abs() < eps * sum.abs().max(F::min_positive_value()) && m > 2 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "1F1({:?},{:?};{:?}) exceeded {} terms",
        a, b, x, MAX_TERMS
    )))
}

/// Confluent hypergeometric function ₁F₁(a, b; x).
///
/// Terminating cases are summed exactly; for x < 0 the Kummer reflection is
/// applied so the summed series has non-negative argument (no alternating
/// cancellation).
pub fn kummer_1f1<F: Scalar>(a: F, b: F, x: F) -> Result<F, Error> {
    check_denominator(b)?;
    if terminates(a).is_some() || x >= F::zero() {
        kummer_series(a, b, x)
    } else {
        Ok(x.exp() * kummer_series(b - a, b, -x)?)
    }
}

/// Derivative d/dx ₁F₁(a,b;x) = (a/b) ₁F₁(a+1, b+1; x).
pub fn kummer_1f1_dx<F: Scalar>(a: F, b: F, x: F) -> Result<F, Error> {
    Ok(a / b * kummer_1f1(a + F::one(), b + F::one(), x)?)
}

/// Generalized hypergeometric ₀F_q(b₁,...,b_q; x) = Σ xᵐ/(∏ (b_i)_m · m!).
pub fn hyper_0fq<F: Scalar>(denoms: &[F], x: F) -> Result<F, Error> {
    for &b in denoms {
        check_denominator(b)?;
    }
    let mut term = F::one();
    let mut sum = F::one();
    let eps = F::epsilon();
    for m in 0..MAX_TERMS {
        let mf = F::of_usize(m);
        let mut ratio = x / (mf + F::one());
        for &b in denoms {
            ratio = ratio / (b + mf);
        }
        term = term * ratio;
        sum = sum + term;
        if term.abs() < eps * sum.abs().max(F::min_positive_value()) && m > 2 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "0F{}(...;{:?}) exceeded {} terms",
        denoms.len(),
        x,
        MAX_TERMS
    )))
}

/// Generalized hypergeometric series with explicit parameter lists
/// (empty numerator list gives ₀F_q).
#[derive(Clone, Debug)]
pub struct HyperParams<F: Scalar = crate::Real> {
    pub numerator_params: Vec<F>,
    pub denominator_params: Vec<F>,
    pub argument: F,
}

impl<F: Scalar> HyperParams<F> {
    pub fn validate(&self) -> Result<(), Error> {
        for &b in &self.denominator_params {
            check_denominator(b)?;
        }
        if !self.argument.is_finite() {
            return Err(Error::InvalidParameter("non-finite argument".into()));
        }
        Ok(())
    }

    /// Partial-sum evaluation of the series.
    pub fn evaluate(&self) -> Result<F, Error> {
        self.validate()?;
        let mut term = F::one();
        let mut sum = F::one();
        let eps = F::epsilon();
        let terminating = self
            .numerator_params
            .iter()
            .filter_map(|&a| terminates(a))
            .min();
        for m in 0..MAX_TERMS {
            if let Some(cap) = terminating {
                if m >= cap {
                    return Ok(sum);
                }
            }
            let mf = F::of_usize(m);
            let mut ratio = self.argument / (mf + F::one());
            for &a in &self.numerator_params {
                ratio = ratio * (a + mf);
            }
            for &b in &self.denominator_params {
                ratio = ratio / (b + mf);
            }
            term = term * ratio;
            sum = sum + term;
            if term.abs() < eps * sum.abs().max(F::min_positive_value()) && m > 2 {
                return Ok(sum);
            }
        }
        Err(Error::NonConvergence("pFq series exceeded term cap".into()))
    }
}

/// Error function, ≥ 1e-12 absolute accuracy on the whole real line.
///
/// Maclaurin series for |x| ≤ 4 (cancellation amplifies rounding by at most
/// ~10² there), asymptotic erfc expansion beyond.
pub fn erf<F: Scalar>(x: F) -> F {
    if x < F::zero() {
        return -erf(-x);
    }
    let two_over_sqrt_pi = F::cst(1.1283791670955125738961589031);
    if x <= F::cst(4.0) {
        // erf x = 2/√π Σ (-1)^m x^{2m+1} / (m! (2m+1))
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for m in 0..200 {
            let mf = F::of_usize(m);
            term = term * (-x2) / (mf + F::one());
            let inc = term / (F::cst(2.0) * mf + F::cst(3.0));
            sum = sum + inc;
            if inc.abs() < F::epsilon() * sum.abs() {
                break;
            }
        }
        two_over_sqrt_pi * sum
    } else {
        // erfc x = e^{-x²}/(x√π) Σ (-1)^k (2k-1)!!/(2x²)^k, truncated at the
        // smallest term; relative accuracy better than 1e-8 for x > 4, which
        // is far below 1e-12 absolute after the e^{-x²} factor.
        let x2 = x * x;
        let mut term = F::one();
        let mut sum = F::one();
        let mut k = 1usize;
        loop {
            let next = -term * (F::of_usize(2 * k) - F::one()) / (F::cst(2.0) * x2);
            if next.abs() >= term.abs() || k > 60 {
                break;
            }
            sum = sum + next;
            term = next;
            k += 1;
            if term.abs() < F::epsilon() {
                break;
            }
        }
        let erfc = (-x2).exp() / (x * F::cst(1.7724538509055160273)) * sum;
        F::one() - erfc
    }
}

/// Kummer series together with its parameter derivative: returns
/// `(S, ∂S/∂t, ∂S/∂a, ∂²S/∂a∂t)` for `S(a,b;t) = Σ (a)_m/((b)_m m!) tᵐ`.
///
/// The a-derivative uses the pole-free recursion `Q_{m+1} = P_m + (a+m) Q_m`
/// for `Q_m = d(a)_m/da`, so it stays valid at terminating parameter values.
pub fn kummer_series_ext(a: f64, b: f64, t: f64) -> Result<KummerExt, Error> {
    check_denominator(b)?;
    // track the summed terms directly — the factors (a)_m and t^m/((b)_m m!)
    // overflow/underflow separately long before their product does
    let mut ts = 1.0; // (a)_m t^m / ((b)_m m!)
    let mut ta = 0.0; // Q_m t^m / ((b)_m m!),  Q_m = d(a)_m/da
    let mut tt = 0.0; // (a)_m t^{m-1} / ((b)_m (m-1)!)
    let mut tat = 0.0; // Q_m t^{m-1} / ((b)_m (m-1)!)
    let mut out = KummerExt { s: 1.0, s_t: 0.0, s_a: 0.0, s_at: 0.0 };
    let mut converged = 0usize;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        let r_u = t / ((b + mf) * (mf + 1.0));
        let (ts_n, ta_n) = (ts * (a + mf) * r_u, (ts + (a + mf) * ta) * r_u);
        let (tt_n, tat_n) = if m == 0 {
            (a / b, 1.0 / b)
        } else {
            let r_v = t / ((b + mf) * mf);
            ((a + mf) * tt * r_v, (tt + (a + mf) * tat) * r_v)
        };
        ts = ts_n;
        ta = ta_n;
        tt = tt_n;
        tat = tat_n;
        out.s += ts;
        out.s_a += ta;
        out.s_t += tt;
        out.s_at += tat;
        let scale = out.s.abs().max(out.s_a.abs()).max(out.s_t.abs()).max(out.s_at.abs()).max(1e-300);
        if ts.abs().max(ta.abs()).max(tt.abs()).max(tat.abs()) < 1e-17 * scale {
            converged += 1;
            if converged >= 2 {
                return Ok(out);
            }
        } else {
            converged = 0;
        }
    }
    Err(Error::NonConvergence("extended Kummer series exceeded term cap".into()))
}

/// Value bundle returned by [`kummer_series_ext`].
#[derive(Clone, Copy, Debug)]
pub struct KummerExt {
    pub s: f64,
    pub s_t: f64,
    pub s_a: f64,
    pub s_at: f64,
}
