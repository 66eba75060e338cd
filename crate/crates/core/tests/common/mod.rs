//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricorr::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    r.random_range(lo..hi)
}

/// Relative deviation with a floor of 1 on the reference magnitude.
pub fn scaled_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// Central first derivative, second order.
pub fn d1<F: Fn(Complex64) -> Complex64>(f: F, x: Complex64, h: f64) -> Complex64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

const W4: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// Fourth-order tensor stencil for the mixed derivative d^n / dx_1 ... dx_n.
pub fn mixed<F: Fn(&[f64]) -> Complex64>(f: F, n: usize, h: f64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; n];
    loop {
        let mut w = 1.0;
        let mut off = vec![0.0; n];
        for (k, &i) in idx.iter().enumerate() {
            w *= W4[i].1;
            off[k] = W4[i].0 * h;
        }
        total += w * f(&off);
        let mut k = 0;
        loop {
            if k == n {
                return total / (12.0 * h).powi(n as i32);
            }
            idx[k] += 1;
            if idx[k] < 4 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let m = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(m);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = r * XGK[j];
        let s = f(m - x) + f(m + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * r, ((k - g) * r).norm())
}

/// Globally adaptive Gauss-Kronrod quadrature of a complex integrand:
/// the panel with the largest error estimate is bisected until the summed
/// estimate drops below `rel_tol` times the integral.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel_tol: f64) -> Complex64 {
    // start from a uniform split so oscillatory integrands are resolved
    let pieces = 256;
    let mut panels: Vec<(f64, f64, Complex64, f64)> = (0..pieces)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / pieces as f64;
            let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();
    for _ in 0..200_000 {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.norm() {
            break;
        }
        let (k, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(k);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    panels.iter().map(|p| p.2).sum()
}

pub mod moments {
    //! Moment integrands rebuilt from the public zeta and prime primitives,
    //! integrated numerically over t in (0, T] after t = 2 pi e^u.

    use super::integrate;
    use std::f64::consts::PI;
    use tricorr::primes::{a_term, b_term, p_term, q_term};
    use tricorr::ratios::Deps;
    use tricorr::zeta::{zeta, zeta_log_deriv, zeta_log_deriv_prime};
    use tricorr::Complex64;

    const TOL: f64 = 1e-12;
    /// Lower cut in u = log(t / 2 pi) below the upper end.
    const DEPTH: f64 = 90.0;

    /// int_0^T g(log(t/2pi)) dt with g given in terms of u.
    pub fn t_integral<F: Fn(f64) -> Complex64>(g: F, t: f64) -> Complex64 {
        let lu = (t / (2.0 * PI)).ln();
        integrate(|u| 2.0 * PI * u.exp() * g(u), lu - DEPTH, lu, TOL)
    }

    pub fn i3(a1: Complex64, a2: Complex64, b: Complex64, t: f64, deps: &Deps) -> Complex64 {
        let zp = &deps.zeta;
        let tab = &deps.primes;
        let (x1, x2) = (a1 + b, a2 + b);
        let q = q_term(x1, x2, tab).unwrap().value;
        let coef = |x: Complex64, other: Complex64, diff: Complex64| {
            let zz = zeta(1.0 - x, zp).unwrap() * zeta(1.0 + x, zp).unwrap();
            let a = a_term(x, tab).unwrap().value;
            let p = p_term(x, other, tab).unwrap().value;
            let dl = zeta_log_deriv(1.0 + diff, zp).unwrap() - zeta_log_deriv(1.0 + other, zp).unwrap();
            zz * (a * dl + p)
        };
        let c1 = coef(x1, x2, a2 - a1);
        let c2 = coef(x2, x1, a1 - a2);
        t_integral(|u| q + (-x1 * u).exp() * c1 + (-x2 * u).exp() * c2, t)
    }

    pub fn i1(a: Complex64, b: Complex64, t: f64, deps: &Deps) -> Complex64 {
        let zp = &deps.zeta;
        let x = a + b;
        let d2 = zeta_log_deriv_prime(1.0 + x, zp).unwrap();
        let bb = b_term(x, &deps.primes).unwrap().value;
        let c = zeta(1.0 + x, zp).unwrap() * zeta(1.0 - x, zp).unwrap() * a_term(x, &deps.primes).unwrap().value;
        t_integral(|u| u * (d2 + (-x * u).exp() * c - bb), t)
    }

    pub fn s(x: f64, t: f64, deps: &Deps) -> Complex64 {
        let zp = &deps.zeta;
        let ix = Complex64::new(0.0, x);
        let d2 = zeta_log_deriv_prime(1.0 + ix, zp).unwrap();
        let bb = b_term(ix, &deps.primes).unwrap().value;
        let c = zeta(1.0 + ix, zp).unwrap() * zeta(1.0 - ix, zp).unwrap() * a_term(ix, &deps.primes).unwrap().value;
        t_integral(|u| 0.5 * u * u + d2 + (-ix * u).exp() * c - bb, t)
    }
}

/// (1 / 2 pi i) times the integral of f over the circle |w - centre| = radius,
/// by the trapezoidal rule (spectrally accurate for analytic integrands).
pub fn contour_residue<F: Fn(Complex64) -> Complex64>(f: F, centre: Complex64, radius: f64, m: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        let u = Complex64::from_polar(radius, phi);
        // dw = i u dphi, and the 1/(2 pi i) cancels i and 2 pi
        sum += f(centre + u) * u;
    }
    sum / m as f64
}

pub mod weyl {
    //! Expectations over U(1) and U(2) from the explicit eigenvalue density.

    use std::f64::consts::PI;
    use tricorr::Complex64;

    /// Lambda_X(s) restricted to one eigenvalue e^(i theta).
    pub fn lam(s: Complex64, theta: f64) -> Complex64 {
        1.0 - s * Complex64::from_polar(1.0, -theta)
    }

    /// Lambda_X*(s) for one eigenvalue.
    pub fn lam_star(s: Complex64, theta: f64) -> Complex64 {
        1.0 - s * Complex64::from_polar(1.0, theta)
    }

    /// E over U(1) of g(theta), m-point periodic trapezoid.
    pub fn u1<F: Fn(f64) -> Complex64>(g: F, m: usize) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..m {
            s += g(2.0 * PI * k as f64 / m as f64);
        }
        s / m as f64
    }

    /// E over U(2) of g(theta1, theta2) with density |e^(i t1) - e^(i t2)|^2 / 2.
    pub fn u2<F: Fn(f64, f64) -> Complex64>(g: F, m: usize) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for a in 0..m {
            let t1 = 2.0 * PI * a as f64 / m as f64;
            for b in 0..m {
                let t2 = 2.0 * PI * b as f64 / m as f64;
                let vd = (Complex64::from_polar(1.0, t1) - Complex64::from_polar(1.0, t2)).norm_sqr();
                s += 0.5 * vd * g(t1, t2);
            }
        }
        s / (m * m) as f64
    }

    /// E over U(3) of a real g(t1, t2, t3) with density |Vandermonde|^2 / 6.
    pub fn u3<F: Fn(f64, f64, f64) -> f64>(g: F, m: usize) -> f64 {
        let e = |t: f64| Complex64::from_polar(1.0, t);
        let mut s = 0.0;
        for a in 0..m {
            let t1 = 2.0 * PI * a as f64 / m as f64;
            for b in 0..m {
                let t2 = 2.0 * PI * b as f64 / m as f64;
                for c in 0..m {
                    let t3 = 2.0 * PI * c as f64 / m as f64;
                    let vd = ((e(t1) - e(t2)) * (e(t1) - e(t3)) * (e(t2) - e(t3))).norm_sqr();
                    s += vd / 6.0 * g(t1, t2, t3);
                }
            }
        }
        s / (m * m * m) as f64
    }
}
