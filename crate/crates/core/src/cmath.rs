//! Cancellation-safe complex elementary functions.

use num_complex::Complex64;

/// e^z - 1, accurate for small |z|.
#[inline]
pub fn expm1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half = (0.5 * b).sin();
    let em = a.exp_m1();
    Complex64::new(em * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// log(1 + u), accurate for small |u|.
#[inline]
pub fn ln_1p(u: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    let im = u.im.atan2(1.0 + u.re);
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
