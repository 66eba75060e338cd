//! Moments of products of logarithmic derivatives of zeta, integrated in
//! closed form over 0 < t < T.
//!
//! With U = T / 2 pi every t-integral reduces to
//! int_0^T (t/2pi)^(-z) dt = 2 pi U^(1-z) / (1-z) or its log-weighted
//! companion, so no quadrature is needed here.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::{self, PrimeTable};
use crate::zeta::{self, EulerMaclaurinParams};

/// Arguments closer than this to a singular line are rejected.
pub const SINGULAR_EPS: f64 = 1e-9;
/// Below this |a1 - a2| the removable singularity of `i3` is bridged by
/// symmetric averaging.
const REMOVABLE_EPS: f64 = 1e-7;
const REMOVABLE_STEP: f64 = 1e-5;

/// Shared read-only inputs for every evaluation: the prime table and the
/// zeta truncation parameters.
#[derive(Debug, Clone)]
pub struct Deps {
    pub primes: PrimeTable,
    pub zeta: EulerMaclaurinParams,
}

impl Deps {
    pub fn new(prime_limit: u64, zeta: EulerMaclaurinParams) -> Result<Self> {
        zeta.validate()?;
        Ok(Deps {
            primes: PrimeTable::build(prime_limit)?,
            zeta,
        })
    }
}

/// A t-integrated moment together with the height it was integrated to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: Complex64,
    pub t_upper: f64,
}

fn check_height(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("T = {t} (need T > 0)")));
    }
    Ok(())
}

/// int_0^T (t/2pi)^(-z) dt = 2 pi (T/2pi)^(1-z) / (1-z).
///
/// For Re z >= 1 this is the analytic continuation of the integral.
pub fn t_power_integral(z: Complex64, t: f64) -> Result<Complex64> {
    check_height(t)?;
    let w = 1.0 - z;
    if w.norm() < 1e-12 {
        return Err(Error::PoleAtOne(format!("z = {z}")));
    }
    let lu = (t / (2.0 * PI)).ln();
    Ok(2.0 * PI * (w * lu).exp() / w)
}

/// int_0^T log(t/2pi) (t/2pi)^(-z) dt = 2 pi U^w (log U / w - 1 / w^2), w = 1 - z.
pub fn log_t_power_integral(z: Complex64, t: f64) -> Result<Complex64> {
    check_height(t)?;
    let w = 1.0 - z;
    if w.norm() < 1e-12 {
        return Err(Error::PoleAtOne(format!("z = {z}")));
    }
    let lu = (t / (2.0 * PI)).ln();
    Ok(2.0 * PI * (w * lu).exp() * (lu / w - 1.0 / (w * w)))
}

/// int_0^T log^k(t/2pi) dt for k = 0..=3.
pub fn log_power_integral(k: u32, t: f64) -> Result<f64> {
    check_height(t)?;
    if k > 3 {
        return Err(Error::Domain(format!("k = {k} (need 0..=3)")));
    }
    let u = t / (2.0 * PI);
    let l = u.ln();
    // u * sum_j (-1)^(k-j) k!/j! l^j
    let mut sum = 0.0;
    let mut coef = 1.0; // k!/j! for j = k downwards
    for j in (0..=k).rev() {
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += sign * coef * l.powi(j as i32);
        coef *= j.max(1) as f64;
    }
    Ok(2.0 * PI * u * sum)
}

/// The zero count (T/2pi) log(T/2pi) - T/2pi.
pub fn one_point_count(t: f64) -> Result<f64> {
    if !(t > 2.0 * PI) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} (need T > 2 pi)")));
    }
    let u = t / (2.0 * PI);
    Ok(u * u.ln() - u)
}

fn singular(v: Complex64, what: &str) -> Result<()> {
    if v.norm() < SINGULAR_EPS {
        return Err(Error::SingularInput(format!("{what} = 0 (value {v})")));
    }
    Ok(())
}

/// Prime-side inputs of one three-fold moment, with x1 = a1 + b and x2 = a2 + b.
#[derive(Debug, Clone, Copy)]
pub(crate) struct I3Primes {
    pub q: Complex64,
    pub a_x1: Complex64,
    pub a_x2: Complex64,
    pub p12: Complex64,
    pub p21: Complex64,
}

impl I3Primes {
    pub(crate) fn compute(x1: Complex64, x2: Complex64, a_x1: Complex64, a_x2: Complex64, table: &PrimeTable) -> Self {
        Self::from_pair(primes::pair_sums(x1, x2, table, true), a_x1, a_x2)
    }

    pub(crate) fn from_pair(pair: primes::PairSums, a_x1: Complex64, a_x2: Complex64) -> Self {
        I3Primes {
            q: pair.q,
            a_x1,
            a_x2,
            p12: a_x1 * pair.s_xy,
            p21: a_x2 * pair.s_yx,
        }
    }
}

/// Closed-form I(a1, a2; b) given its prime-side inputs.
pub(crate) fn i3_with(
    a1: Complex64,
    a2: Complex64,
    b: Complex64,
    t: f64,
    pr: &I3Primes,
    zp: &EulerMaclaurinParams,
) -> Result<Complex64> {
    let x1 = a1 + b;
    let x2 = a2 + b;
    let d = a2 - a1;
    let dl = |s: Complex64| zeta::zeta_log_deriv_at_one_plus(s, zp);
    let block = |x: Complex64, ax: Complex64, pxy: Complex64, diff: Complex64, other: Complex64| -> Result<Complex64> {
        let zz = zeta::zeta(1.0 - x, zp)? * zeta::zeta(1.0 + x, zp)?;
        let inner = ax * (dl(diff)? - dl(other)?) + pxy;
        Ok(t_power_integral(x, t)? * zz * inner)
    };
    let v = pr.q * t + block(x1, pr.a_x1, pr.p12, d, x2)? + block(x2, pr.a_x2, pr.p21, -d, x1)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("I(a1, a2; b)".into()))
    }
}

fn i3_checks(a1: Complex64, a2: Complex64, b: Complex64) -> Result<()> {
    singular(a1 + b, "a1 + b")?;
    singular(a2 + b, "a2 + b")?;
    for (v, name) in [(a1 + b, "a1 + b"), (a2 + b, "a2 + b")] {
        if !(v.re > -0.5) {
            return Err(Error::Domain(format!("{name} = {v} (need Re > -1/2)")));
        }
    }
    Ok(())
}

/// I(a1, a2; b): the t-integral of (zeta'/zeta)(1/2+it+a1) (zeta'/zeta)(1/2+it+a2)
/// (zeta'/zeta)(1/2-it+b) as predicted by the ratios conjecture, in closed form.
///
/// Singular when a1 + b = 0 or a2 + b = 0. The apparent singularity at
/// a1 = a2 is removable and is bridged numerically.
pub fn i3(a1: Complex64, a2: Complex64, b: Complex64, t: f64, deps: &Deps) -> Result<MomentResult> {
    check_height(t)?;
    i3_checks(a1, a2, b)?;
    let eval = |a2: Complex64| -> Result<Complex64> {
        let x1 = a1 + b;
        let x2 = a2 + b;
        let ax1 = primes::a_term(x1, &deps.primes)?.value;
        let ax2 = primes::a_term(x2, &deps.primes)?.value;
        primes::check_s_convergence(x1, x2)?;
        primes::check_s_convergence(x2, x1)?;
        let pr = I3Primes::compute(x1, x2, ax1, ax2, &deps.primes);
        i3_with(a1, a2, b, t, &pr, &deps.zeta)
    };
    let value = if (a2 - a1).norm() < REMOVABLE_EPS {
        let h = REMOVABLE_STEP;
        // the four-point average cancels the second-order term as well
        let mut acc = Complex64::new(0.0, 0.0);
        for step in [
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, -h),
        ] {
            acc += eval(a2 + step)?;
        }
        0.25 * acc
    } else {
        eval(a2)?
    };
    Ok(MomentResult { value, t_upper: t })
}

/// Closed-form I_1(a; b) given A(x) and B(x) at x = a + b.
pub(crate) fn i1_with(
    x: Complex64,
    t: f64,
    a_x: Complex64,
    b_x: Complex64,
    zp: &EulerMaclaurinParams,
) -> Result<Complex64> {
    let lp1 = log_power_integral(1, t)?;
    let d2 = zeta::zeta_log_deriv_prime_at_one_plus(x, zp)?;
    let zz = zeta::zeta(1.0 + x, zp)? * zeta::zeta(1.0 - x, zp)?;
    let v = lp1 * (d2 - b_x) + log_t_power_integral(x, t)? * zz * a_x;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("I_1(a; b)".into()))
    }
}

/// I_1(a; b): the log(t/2pi)-weighted t-integral of
/// (zeta'/zeta)(1/2+it+a) (zeta'/zeta)(1/2-it+b). Depends on a + b only.
pub fn i1(a: Complex64, b: Complex64, t: f64, deps: &Deps) -> Result<MomentResult> {
    check_height(t)?;
    let x = a + b;
    singular(x, "a + b")?;
    let ax = primes::a_term(x, &deps.primes)?.value;
    let bx = primes::b_term(x, &deps.primes)?.value;
    Ok(MomentResult {
        value: i1_with(x, t, ax, bx, &deps.zeta)?,
        t_upper: t,
    })
}

pub(crate) fn s_with(x: f64, t: f64, a_ix: Complex64, b_ix: Complex64, zp: &EulerMaclaurinParams) -> Result<Complex64> {
    let ix = Complex64::new(0.0, x);
    let d2 = zeta::zeta_log_deriv_prime_at_one_plus(ix, zp)?;
    let zz = zeta::zeta(1.0 + ix, zp)? * zeta::zeta(1.0 - ix, zp)?;
    Ok(0.5 * log_power_integral(2, t)? + t * (d2 - b_ix) + t_power_integral(ix, t)? * zz * a_ix)
}

/// s(x): the pair-correlation block
/// int_0^T [log^2(t/2pi)/2 + (zeta'/zeta)'(1+ix) + (t/2pi)^(-ix) zeta(1+ix) zeta(1-ix) A(ix) - B(ix)] dt.
pub fn s_term(x: f64, t: f64, deps: &Deps) -> Result<Complex64> {
    check_height(t)?;
    if !x.is_finite() || x.abs() < SINGULAR_EPS {
        return Err(Error::SingularInput(format!("x = {x}")));
    }
    let ix = Complex64::new(0.0, x);
    let ax = primes::a_term(ix, &deps.primes)?.value;
    let bx = primes::b_term(ix, &deps.primes)?.value;
    s_with(x, t, ax, bx, &deps.zeta)
}

/// Bracket of the two-point density, s(r) + s(-r), which is real.
pub fn two_point_bracket(r: f64, t: f64, deps: &Deps) -> Result<f64> {
    let v = s_term(r, t, deps)? + s_term(-r, t, deps)?;
    Ok(v.re)
}
