//! Riemann zeta function and its logarithmic derivatives by Euler–Maclaurin
//! summation, with Laurent branches near the pole at s = 1.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Largest admissible |Im s|.
pub const MAX_IMAG: f64 = 1.0e4;
/// Smallest admissible Re s.
pub const MIN_REAL: f64 = -1.0;
/// Number of B_2k / (2k)! coefficients kept in the static table.
const BERNOULLI_TABLE: usize = 30;

/// Truncation parameters for Euler–Maclaurin evaluation.
///
/// The direct sum runs over `n < ceil(|Im s|) + cutoff_terms`, followed by
/// `bernoulli_depth` correction terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurinParams {
    pub cutoff_terms: usize,
    pub bernoulli_depth: usize,
    /// Radius around s = 1 inside which the logarithmic derivatives use
    /// their Laurent expansions.
    pub switch_radius: f64,
}

impl Default for EulerMaclaurinParams {
    fn default() -> Self {
        EulerMaclaurinParams {
            cutoff_terms: 20,
            bernoulli_depth: 12,
            switch_radius: 1e-3,
        }
    }
}

impl EulerMaclaurinParams {
    pub fn new(cutoff_terms: usize, bernoulli_depth: usize, switch_radius: f64) -> Result<Self> {
        let p = EulerMaclaurinParams {
            cutoff_terms,
            bernoulli_depth,
            switch_radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff_terms < 10 {
            return Err(Error::Domain(format!(
                "cutoff_terms = {} (need at least 10)",
                self.cutoff_terms
            )));
        }
        if !(2..=BERNOULLI_TABLE).contains(&self.bernoulli_depth) {
            return Err(Error::Domain(format!(
                "bernoulli_depth = {} (need 2..=30)",
                self.bernoulli_depth
            )));
        }
        if !(self.switch_radius > 0.0 && self.switch_radius < 0.1) {
            return Err(Error::Domain(format!(
                "switch_radius = {} (need 0 < r < 0.1)",
                self.switch_radius
            )));
        }
        Ok(())
    }

    /// Same parameters with both truncation lengths doubled (capped at the table size).
    pub fn doubled(&self) -> Self {
        EulerMaclaurinParams {
            cutoff_terms: 2 * self.cutoff_terms,
            bernoulli_depth: (2 * self.bernoulli_depth).min(BERNOULLI_TABLE),
            switch_radius: self.switch_radius,
        }
    }
}

/// B_2k / (2k)! for k = 1..=30, from B_2k/(2k)! = (-1)^(k+1) 2 zeta(2k) / (2 pi)^(2k).
fn bernoulli_ratios() -> &'static [f64; BERNOULLI_TABLE] {
    static TABLE: OnceLock<[f64; BERNOULLI_TABLE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; BERNOULLI_TABLE];
        let two_pi = 2.0 * std::f64::consts::PI;
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let s = (2 * k) as f64;
            let z = if k == 1 {
                std::f64::consts::PI.powi(2) / 6.0
            } else {
                // even zeta values by direct sum plus a short tail expansion
                let m = 1000.0_f64;
                let mut acc = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s / 12.0 * m.powf(-s - 1.0);
                for n in (1..1000).rev() {
                    acc += (n as f64).powf(-s);
                }
                acc
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * z / two_pi.powi(2 * k as i32);
        }
        out
    })
}

/// Stieltjes constants gamma_0 .. gamma_3.
///
/// Evaluated from the limit definition
/// gamma_n = lim [sum_{k<=m} log^n k / k - log^(n+1) m / (n+1)],
/// with the tail beyond m = 10 replaced by its Euler–Maclaurin expansion.
pub fn stieltjes() -> &'static [f64; 4] {
    static CONSTS: OnceLock<[f64; 4]> = OnceLock::new();
    CONSTS.get_or_init(|| {
        let mut out = [0.0; 4];
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = stieltjes_limit(n, 10, 14);
        }
        out
    })
}

fn stieltjes_limit(n: usize, m: usize, depth: usize) -> f64 {
    let b = bernoulli_ratios();
    let mf = m as f64;
    let lm = mf.ln();
    let mut acc = KahanSum::<f64>::default();
    for k in 1..m {
        let kf = k as f64;
        acc.add(kf.ln().powi(n as i32) / kf);
    }
    acc.add(-lm.powi(n as i32 + 1) / (n as f64 + 1.0));
    acc.add(0.5 * lm.powi(n as i32) / mf);
    // f^(r)(x) = x^(-1-r) * sum_i c[i] L^i for f(x) = L^n / x
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut r = 0usize;
    for j in 1..=depth {
        // advance to derivative order 2j - 1
        while r < 2 * j - 1 {
            let mut next = vec![0.0; n + 1];
            for i in 0..=n {
                let up = if i < n { (i + 1) as f64 * c[i + 1] } else { 0.0 };
                next[i] = -((r + 1) as f64) * c[i] + up;
            }
            c = next;
            r += 1;
        }
        let poly: f64 = c.iter().enumerate().map(|(i, ci)| ci * lm.powi(i as i32)).sum();
        let deriv = mf.powi(-(r as i32) - 1) * poly;
        acc.add(-b[j - 1] * deriv);
    }
    acc.value()
}

fn check_domain(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("s = {s} is not finite")));
    }
    if s.re < MIN_REAL || s.im.abs() > MAX_IMAG {
        return Err(Error::Domain(format!(
            "s = {s} (need Re s >= {MIN_REAL}, |Im s| <= {MAX_IMAG})"
        )));
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::PoleAtOne(format!("{s}")));
    }
    Ok(())
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Returns (zeta(s), zeta'(s), zeta''(s)), all from the term-wise
/// differentiated Euler–Maclaurin expansion.
pub fn zeta_with_derivatives(s: Complex64, params: &EulerMaclaurinParams) -> Result<[Complex64; 3]> {
    check_domain(s)?;
    let n_cut = s.im.abs().ceil() as usize + params.cutoff_terms;
    let mut z0 = KahanSum::<Complex64>::default();
    let mut z1 = KahanSum::<Complex64>::default();
    let mut z2 = KahanSum::<Complex64>::default();
    for n in (1..n_cut).rev() {
        let ln = (n as f64).ln();
        let t = (-s * ln).exp();
        z0.add(t);
        z1.add(-ln * t);
        z2.add(ln * ln * t);
    }

    let a = (n_cut as f64).ln();
    let u = s - 1.0;
    let e_pole = (-u * a).exp();
    z0.add(e_pole / u);
    z1.add(e_pole * (-a / u - 1.0 / (u * u)));
    z2.add(e_pole * (a * a / u + 2.0 * a / (u * u) + 2.0 / (u * u * u)));

    let e_half = (-s * a).exp();
    z0.add(0.5 * e_half);
    z1.add(-0.5 * a * e_half);
    z2.add(0.5 * a * a * e_half);

    let b = bernoulli_ratios();
    // P_k(s) = s (s+1) ... (s+2k-2) with its first two derivatives
    let mut p = s;
    let mut p1 = Complex64::new(1.0, 0.0);
    let mut p2 = Complex64::new(0.0, 0.0);
    let inv_n2 = 1.0 / (n_cut as f64 * n_cut as f64);
    let mut e = e_half / n_cut as f64;
    for k in 1..=params.bernoulli_depth {
        if k > 1 {
            for j in [2 * k - 3, 2 * k - 2] {
                let f = s + j as f64;
                p2 = p2 * f + 2.0 * p1;
                p1 = p1 * f + p;
                p *= f;
            }
            e *= inv_n2;
        }
        let c = b[k - 1];
        z0.add(c * p * e);
        z1.add(c * (p1 - a * p) * e);
        z2.add(c * (p2 - 2.0 * a * p1 + a * a * p) * e);
    }
    Ok([
        finite(z0.value(), "zeta")?,
        finite(z1.value(), "zeta'")?,
        finite(z2.value(), "zeta''")?,
    ])
}

/// zeta(s) for Re s >= -1, |Im s| <= 1e4, s != 1.
pub fn zeta(s: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    zeta_with_derivatives(s, params).map(|z| z[0])
}

/// Laurent data at s = 1 + x: g(x) = x zeta(1 + x) and its first two derivatives.
fn laurent_g(x: Complex64) -> [Complex64; 3] {
    let g = stieltjes();
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    [
        1.0 + g[0] * x - g[1] * x2 + 0.5 * g[2] * x3 - g[3] / 6.0 * x4,
        g[0] - 2.0 * g[1] * x + 1.5 * g[2] * x2 - 2.0 / 3.0 * g[3] * x3,
        -2.0 * g[1] + 3.0 * g[2] * x - 2.0 * g[3] * x2,
    ]
}

fn nonzero(z: Complex64, s: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        Err(Error::Domain(format!("zeta vanishes at s = {s}")))
    } else {
        Ok(z)
    }
}

/// zeta'(s) / zeta(s).
pub fn zeta_log_deriv(s: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    check_domain(s)?;
    let x = s - 1.0;
    if x.norm() < params.switch_radius {
        return Ok(zeta_log_deriv_laurent(x));
    }
    let [z0, z1, _] = zeta_with_derivatives(s, params)?;
    finite(z1 / nonzero(z0, s)?, "zeta'/zeta")
}

/// (zeta'/zeta)(1 + x) with x passed exactly, so that small x near the pole
/// does not lose digits to the rounding of 1 + x.
pub fn zeta_log_deriv_at_one_plus(x: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    if x.norm() < params.switch_radius {
        check_domain(1.0 + x)?;
        return Ok(zeta_log_deriv_laurent(x));
    }
    zeta_log_deriv(1.0 + x, params)
}

/// (zeta'/zeta)'(1 + x) with x passed exactly.
pub fn zeta_log_deriv_prime_at_one_plus(x: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    if x.norm() < params.switch_radius {
        check_domain(1.0 + x)?;
        return Ok(zeta_log_deriv_prime_laurent(x));
    }
    zeta_log_deriv_prime(1.0 + x, params)
}

/// (zeta'/zeta)'(s) = zeta''/zeta - (zeta'/zeta)^2.
pub fn zeta_log_deriv_prime(s: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    check_domain(s)?;
    let x = s - 1.0;
    if x.norm() < params.switch_radius {
        return Ok(zeta_log_deriv_prime_laurent(x));
    }
    let [z0, z1, z2] = zeta_with_derivatives(s, params)?;
    let z0 = nonzero(z0, s)?;
    let r = z1 / z0;
    finite(z2 / z0 - r * r, "(zeta'/zeta)'")
}

/// Laurent branch of zeta'/zeta at s = 1 + x.
pub fn zeta_log_deriv_laurent(x: Complex64) -> Complex64 {
    let [g0, g1, _] = laurent_g(x);
    g1 / g0 - 1.0 / x
}

/// Laurent branch of (zeta'/zeta)' at s = 1 + x.
pub fn zeta_log_deriv_prime_laurent(x: Complex64) -> Complex64 {
    let [g0, g1, g2] = laurent_g(x);
    let r = g1 / g0;
    g2 / g0 - r * r + 1.0 / (x * x)
}

/// Leading asymptotic of chi'/chi(1/2 + it): -log(t / 2 pi).
pub fn chi_log_deriv_asymptotic(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} (need t > 0)")));
    }
    Ok(-(t / (2.0 * std::f64::consts::PI)).ln())
}
