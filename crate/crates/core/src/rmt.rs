//! The unitary-group side: z(x), the 2/2 and 3/3 ratios averages over
//! U(N), the moments J of logarithmic derivatives, the T3 integrand and the
//! sine-kernel determinant it reduces to.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cmath::expm1;
use crate::error::{Error, Result};

/// Distance from a point 2 pi i k below which z(x) is treated as a pole.
const POLE_EPS: f64 = 1e-12;
/// Below this |x - 2 pi i k| the Laurent expansions are used.
const LAURENT_RADIUS: f64 = 1e-4;
/// Below this |a1 - a2| `j3` switches to its equal-argument branch.
pub const J3_SWITCH: f64 = 1e-6;
/// `t3_integrand` refuses angles closer than this (mod 2 pi).
pub const T3_COINCIDENCE: f64 = 1e-4;

/// Matrix size of U(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RmtParams {
    n: usize,
}

impl RmtParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N = 0 (need N >= 1)".into()));
        }
        Ok(RmtParams { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// x - 2 pi i k for the nearest k; z and its log-derivatives are 2 pi i periodic.
fn reduce(x: Complex64) -> Result<Complex64> {
    if !(x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain(format!("x = {x}")));
    }
    let k = (x.im / (2.0 * PI)).round();
    let y = Complex64::new(x.re, x.im - 2.0 * PI * k);
    if y.norm() < POLE_EPS {
        return Err(Error::PoleAtLatticePoint(format!("x = {x}")));
    }
    Ok(y)
}

/// z(x) = 1 / (1 - e^(-x)).
pub fn z_func(x: Complex64) -> Result<Complex64> {
    let y = reduce(x)?;
    if y.norm() < LAURENT_RADIUS {
        return Ok(1.0 / y + 0.5 + y / 12.0 - y.powi(3) / 720.0);
    }
    Ok(-1.0 / expm1(-y))
}

/// (z'/z)(x) = -1 / (e^x - 1).
pub fn z_log_deriv(x: Complex64) -> Result<Complex64> {
    let y = reduce(x)?;
    if y.norm() < LAURENT_RADIUS {
        return Ok(-1.0 / y + 0.5 - y / 12.0 + y.powi(3) / 720.0);
    }
    Ok(-1.0 / expm1(y))
}

/// (z'/z)'(x) = e^x / (e^x - 1)^2.
pub fn z_log_deriv_prime(x: Complex64) -> Result<Complex64> {
    let y = reduce(x)?;
    if y.norm() < LAURENT_RADIUS {
        return Ok(1.0 / (y * y) - 1.0 / 12.0 + y * y / 240.0);
    }
    let e = expm1(y);
    Ok((1.0 + e) / (e * e))
}

fn require_right_half(v: Complex64, name: &str) -> Result<()> {
    if !(v.re > 0.0) {
        return Err(Error::Domain(format!("{name} = {v} (need Re > 0)")));
    }
    Ok(())
}

/// 1 / z(x) = 1 - e^(-x), entire.
fn inv_z(x: Complex64) -> Complex64 {
    -expm1(-x)
}

/// Average over U(N) of
/// Lambda_X(e^-a) Lambda_X*(e^-b) / (Lambda_X(e^-g) Lambda_X*(e^-d)).
pub fn ratios_22(a: Complex64, b: Complex64, g: Complex64, d: Complex64, p: RmtParams) -> Result<Complex64> {
    require_right_half(g, "gamma")?;
    require_right_half(d, "delta")?;
    let z = z_func;
    let first = z(a + b)? * z(g + d)? * inv_z(a + d) * inv_z(b + g);
    let second = (-p.nf() * (a + b)).exp() * z(-b - a)? * z(g + d)? * inv_z(-b + d) * inv_z(-a + g);
    Ok(first + second)
}

/// Average over U(N) of
/// Lambda_X(e^-a1) Lambda_X(e^-a2) Lambda_X*(e^-b) / (Lambda_X(e^-g1) Lambda_X(e^-g2) Lambda_X*(e^-d)).
#[allow(clippy::too_many_arguments)]
pub fn ratios_33(
    a1: Complex64,
    a2: Complex64,
    b: Complex64,
    g1: Complex64,
    g2: Complex64,
    d: Complex64,
    p: RmtParams,
) -> Result<Complex64> {
    require_right_half(g1, "gamma1")?;
    require_right_half(g2, "gamma2")?;
    require_right_half(d, "delta")?;
    let z = z_func;
    let n = p.nf();
    let common = z(g1 + d)? * z(g2 + d)?;
    let t0 = z(a1 + b)? * z(a2 + b)? * common * inv_z(a1 + d) * inv_z(a2 + d) * inv_z(b + g1) * inv_z(b + g2);
    let t1 = (-n * (a1 + b)).exp()
        * z(-b - a1)?
        * z(a2 - a1)?
        * common
        * inv_z(-b + d)
        * inv_z(a2 + d)
        * inv_z(-a1 + g1)
        * inv_z(-a1 + g2);
    let t2 = (-n * (a2 + b)).exp()
        * z(-b - a2)?
        * z(a1 - a2)?
        * common
        * inv_z(-b + d)
        * inv_z(a1 + d)
        * inv_z(-a2 + g1)
        * inv_z(-a2 + g2);
    Ok(t0 + t1 + t2)
}

/// J(a; b) = (z'/z)'(a + b) + e^(-N(a+b)) z(a + b) z(-a - b).
///
/// Since z(x) z(-x) = -(z'/z)'(x) this is -(z'/z)'(x) expm1(-N x), which
/// keeps only a simple pole at x = 0.
pub fn j2(a: Complex64, b: Complex64, p: RmtParams) -> Result<Complex64> {
    let x = reduce(a + b)?;
    Ok(-z_log_deriv_prime(x)? * expm1(-p.nf() * x))
}

/// sum_{k<N} e^(k d) = expm1(N d) / expm1(d), 2 pi i periodic in d.
fn geometric(d: Complex64, p: RmtParams) -> Complex64 {
    let k = (d.im / (2.0 * PI)).round();
    let d = Complex64::new(d.re, d.im - 2.0 * PI * k);
    let n = p.nf();
    if d.norm() < J3_SWITCH {
        let s1 = n * (n - 1.0) / 2.0;
        let s2 = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
        return n + d * (s1 + d * (s2 / 2.0 + d * s1 * s1 / 6.0));
    }
    expm1(n * d) / expm1(d)
}

/// J(a1, a2; b) =
///   e^(-N x1) z(x1) z(-x1) (z'/z(a2 - a1) - z'/z(x2))
/// + e^(-N x2) z(x2) z(-x2) (z'/z(a1 - a2) - z'/z(x1)),   x_k = a_k + b.
///
/// Combining the blocks gives
/// e^((1-N) x2) (sum_{k<N} e^(k (a2 - a1))) / (expm1(x1) expm1(x2)),
/// which is how it is evaluated: analytic across a1 = a2 and free of the
/// double poles of the separate blocks.
pub fn j3(a1: Complex64, a2: Complex64, b: Complex64, p: RmtParams) -> Result<Complex64> {
    let x1 = reduce(a1 + b)?;
    let x2 = reduce(a2 + b)?;
    let d = a2 - a1;
    // x2 was shifted by 2 pi i k; e^((1-N) x2) is invariant under that shift
    Ok(((1.0 - p.nf()) * x2).exp() * geometric(d, p) / (expm1(x1) * expm1(x2)))
}

/// S_N(theta) = sin(N theta / 2) / sin(theta / 2), with the limit
/// N (-1)^(k(N-1)) at theta = 2 pi k.
pub fn s_n(theta: f64, p: RmtParams) -> f64 {
    let n = p.nf();
    let k = (theta / (2.0 * PI)).round();
    let phi = theta - 2.0 * PI * k;
    let sign = if (k as i64).rem_euclid(2) == 1 && p.n.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    };
    let core = if phi.abs() < 1e-6 {
        n * (1.0 - (n * n - 1.0) * phi * phi / 24.0)
    } else {
        (n * phi / 2.0).sin() / (phi / 2.0).sin()
    };
    sign * core
}

/// det of the 3x3 matrix S_N(theta_k - theta_j).
pub fn gaudin_det(t1: f64, t2: f64, t3: f64, p: RmtParams) -> f64 {
    let n = p.nf();
    let s12 = s_n(t2 - t1, p);
    let s13 = s_n(t3 - t1, p);
    let s23 = s_n(t3 - t2, p);
    n * n * n - n * (s12 * s12 + s13 * s13 + s23 * s23) + 2.0 * s12 * s13 * s23
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// The T3 bracket: six three-fold J, N times six two-fold J, and N^3,
/// summed as complex numbers.
pub fn t3_integrand_complex(t1: f64, t2: f64, t3: f64, p: RmtParams) -> Result<Complex64> {
    for (a, b) in [(t1, t2), (t1, t3), (t2, t3)] {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain("non-finite angle".into()));
        }
        if angle_gap(a, b) < T3_COINCIDENCE {
            return Err(Error::SingularInput(format!(
                "angles {a} and {b} are within {T3_COINCIDENCE} of each other; use gaudin_det"
            )));
        }
    }
    let i = |t: f64| Complex64::new(0.0, t);
    let n = p.nf();
    let mut sum = j3(i(t1), i(t2), i(-t3), p)?;
    sum += j3(i(t1), i(t3), i(-t2), p)?;
    sum += j3(i(t2), i(t3), i(-t1), p)?;
    sum += j3(i(-t1), i(-t2), i(t3), p)?;
    sum += j3(i(-t1), i(-t3), i(t2), p)?;
    sum += j3(i(-t2), i(-t3), i(t1), p)?;
    let mut pairs = j2(i(-t1), i(t3), p)?;
    pairs += j2(i(-t2), i(t3), p)?;
    pairs += j2(i(-t1), i(t2), p)?;
    pairs += j2(i(-t3), i(t2), p)?;
    pairs += j2(i(-t2), i(t1), p)?;
    pairs += j2(i(-t3), i(t1), p)?;
    Ok(sum + n * pairs + n * n * n)
}

/// Real part of [`t3_integrand_complex`]; it equals [`gaudin_det`].
pub fn t3_integrand(t1: f64, t2: f64, t3: f64, p: RmtParams) -> Result<f64> {
    let v = t3_integrand_complex(t1, t2, t3, p)?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite("T3 integrand".into()));
    }
    Ok(v.re)
}

/// A 2 pi periodic function sampled at -pi + 2 pi k / m, k = 0..m, in each
/// of three variables; row-major with the first variable slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSample {
    m: usize,
    values: Vec<f64>,
}

impl PeriodicSample {
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || values.len() != m * m * m {
            return Err(Error::GridMismatch(format!("{} values for m = {m}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("test function sample".into()));
        }
        Ok(PeriodicSample { m, values })
    }

    pub fn from_fn<F: Fn(f64, f64, f64) -> f64>(m: usize, f: F) -> Result<Self> {
        let ax = Self::axis(m);
        let mut values = Vec::with_capacity(m * m * m);
        for &a in &ax {
            for &b in &ax {
                for &c in &ax {
                    values.push(f(a, b, c));
                }
            }
        }
        PeriodicSample::new(m, values)
    }

    pub fn axis(m: usize) -> Vec<f64> {
        (0..m).map(|k| -PI + 2.0 * PI * k as f64 / m as f64).collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// (2 pi)^-3 times the periodic trapezoidal integral of f times the
/// determinant, i.e. the expected sum of f over distinct eigenvalue triples.
pub fn t3_against_test(f: &PeriodicSample, p: RmtParams) -> f64 {
    let m = f.m;
    let ax = PeriodicSample::axis(m);
    let mut sum = 0.0;
    let mut k = 0;
    for &a in &ax {
        for &b in &ax {
            for &c in &ax {
                let w = f.values[k];
                if w != 0.0 {
                    sum += w * gaudin_det(a, b, c, p);
                }
                k += 1;
            }
        }
    }
    sum / (m * m * m) as f64
}
