//! The triple-correlation bracket, its normalized grids, test-function
//! integration and the sine-kernel limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{in_mask_band, CorrelationGrid, Normalization};
use crate::primes::{self, SingleSums};
use crate::ratios::{self, i3_with, I3Primes};
use crate::ratios::{i1, i1_with, i3, log_power_integral, two_point_bracket, Deps};
use crate::zeta::EulerMaclaurinParams;

/// Closest approach to a singular line at which the bracket is evaluated.
pub const MIN_SEPARATION: f64 = 1e-6;

fn check_height(t: f64) -> Result<()> {
    if !(t > 2.0 * PI) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} (need T > 2 pi)")));
    }
    Ok(())
}

fn check_off_lines(v1: f64, v2: f64) -> Result<()> {
    if !v1.is_finite() || !v2.is_finite() {
        return Err(Error::Domain(format!("({v1}, {v2}) is not finite")));
    }
    if v1.abs() < MIN_SEPARATION || v2.abs() < MIN_SEPARATION || (v1 - v2).abs() < MIN_SEPARATION {
        return Err(Error::SingularInput(format!(
            "({v1}, {v2}) lies on v1 = 0, v2 = 0 or v1 = v2"
        )));
    }
    Ok(())
}

/// L = log(T / 2 pi).
pub fn log_height(t: f64) -> f64 {
    (t / (2.0 * PI)).ln()
}

/// T L^3, the divisor that turns the bracket into a density of order one.
pub fn normalization_constant(t: f64) -> f64 {
    t * log_height(t).powi(3)
}

/// All thirteen bracket terms summed as complex numbers, each moment
/// evaluated independently. The imaginary part is rounding residue.
pub fn bracket_complex(v1: f64, v2: f64, t: f64, deps: &Deps) -> Result<Complex64> {
    check_height(t)?;
    check_off_lines(v1, v2)?;
    let z = Complex64::new(0.0, 0.0);
    let i = |v: f64| Complex64::new(0.0, v);
    let m3 = |a1, a2, b| i3(a1, a2, b, t, deps).map(|m| m.value);
    let m1 = |a, b| i1(a, b, t, deps).map(|m| m.value);
    let mut sum = Complex64::new(log_power_integral(3, t)?, 0.0);
    sum += m3(i(v1), i(v2), z)?;
    sum += m3(z, i(v1), i(-v2))?;
    sum += m3(z, i(v2), i(-v1))?;
    sum += m3(i(-v1), i(-v2), z)?;
    sum += m3(z, i(-v2), i(v1))?;
    sum += m3(z, i(-v1), i(v2))?;
    sum += m1(z, i(v2))?;
    sum += m1(z, i(v1))?;
    sum += m1(i(-v2), i(v1))?;
    sum += m1(i(-v2), z)?;
    sum += m1(i(-v1), i(v2))?;
    sum += m1(i(-v1), z)?;
    Ok(sum)
}

/// A(iv) and B(iv) for one ordinate v.
#[derive(Debug, Clone, Copy)]
struct Single {
    a: Complex64,
    b: Complex64,
}

impl Single {
    fn at(v: f64, deps: &Deps) -> Self {
        let SingleSums { a, b } = primes::single_sums(Complex64::new(0.0, v), &deps.primes);
        Single { a: a.value, b: b.value }
    }

    fn conj(self) -> Self {
        Single {
            a: self.a.conj(),
            b: self.b.conj(),
        }
    }
}

/// The bracket from three of the six moments and three of the six
/// one-fold moments: the others are their complex conjugates.
fn bracket_fast(v1: f64, v2: f64, t: f64, deps: &Deps, s1: Single, s2: Single, sd: Single) -> Result<f64> {
    let tab = &deps.primes;
    let i = |v: f64| Complex64::new(0.0, v);
    let d = v1 - v2;
    // I(iv1, iv2; 0), I(0, iv1; -iv2), I(0, iv2; -iv1)
    let pr = [
        I3Primes::compute(i(v1), i(v2), s1.a, s2.a, tab),
        I3Primes::compute(i(-v2), i(d), s2.a.conj(), sd.a, tab),
        I3Primes::compute(i(-v1), i(-d), s1.a.conj(), sd.a.conj(), tab),
    ];
    bracket_with(v1, v2, t, &deps.zeta, [s1, s2, sd], &pr)
}

fn bracket_with(
    v1: f64,
    v2: f64,
    t: f64,
    zp: &EulerMaclaurinParams,
    s: [Single; 3],
    pr: &[I3Primes; 3],
) -> Result<f64> {
    let i = |v: f64| Complex64::new(0.0, v);
    let z = Complex64::new(0.0, 0.0);
    let d = v1 - v2;
    let [s1, s2, sd] = s;
    let mut half = i3_with(i(v1), i(v2), z, t, &pr[0], zp)?;
    half += i3_with(z, i(v1), i(-v2), t, &pr[1], zp)?;
    half += i3_with(z, i(v2), i(-v1), t, &pr[2], zp)?;
    half += i1_with(i(v1), t, s1.a, s1.b, zp)?;
    half += i1_with(i(v2), t, s2.a, s2.b, zp)?;
    half += i1_with(i(d), t, sd.a, sd.b, zp)?;
    Ok(log_power_integral(3, t)? + 2.0 * half.re)
}

/// The bracket of the triple correlation at (v1, v2): the log^3 integral
/// plus six three-fold and six one-fold moments. Real by conjugate pairing.
pub fn bracket(v1: f64, v2: f64, t: f64, deps: &Deps) -> Result<f64> {
    check_height(t)?;
    check_off_lines(v1, v2)?;
    let s1 = Single::at(v1, deps);
    let s2 = Single::at(v2, deps);
    let sd = Single::at(v1 - v2, deps);
    bracket_fast(v1, v2, t, deps, s1, s2, sd)
}

/// bracket / (T L^3).
pub fn normalized_bracket(v1: f64, v2: f64, t: f64, deps: &Deps) -> Result<f64> {
    Ok(bracket(v1, v2, t, deps)? / normalization_constant(t))
}

/// The normalized bracket on cell centres of [0, window]^2. Cells within
/// `mask_band` of a singular line are masked and not evaluated.
pub fn theory_grid(window: f64, step: f64, t: f64, mask_band: f64, deps: &Deps) -> Result<CorrelationGrid> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::Domain(format!("window = {window} (need > 0)")));
    }
    if !(step > 0.0 && step < window) {
        return Err(Error::Domain(format!("step = {step} (need 0 < step < window)")));
    }
    if !(mask_band > 0.0 && mask_band.is_finite()) {
        return Err(Error::Domain(format!("mask_band = {mask_band} (need > 0)")));
    }
    check_height(t)?;
    let axis = CorrelationGrid::centred_axis(window, step);
    let n = axis.len();
    let norm = normalization_constant(t);

    // A and B at every centre and at every lattice difference k * step
    let singles: Vec<Single> = axis.par_iter().map(|&v| Single::at(v, deps)).collect();
    let diffs: Vec<Single> = (0..n)
        .into_par_iter()
        .map(|k| Single::at(k as f64 * step, deps))
        .collect();

    let mask: Vec<bool> = (0..n * n)
        .map(|k| in_mask_band(axis[k / n], axis[k % n], mask_band))
        .collect();
    log::info!(
        "theory grid: {n}x{n}, {} unmasked cells",
        mask.iter().filter(|m| !**m).count()
    );
    // bracket is symmetric, so only j >= i is evaluated; along a row every
    // prime-side argument moves by a fixed multiple of i * step
    let rows: Vec<Result<Vec<(usize, f64)>>> = (0..n)
        .into_par_iter()
        .map(|i| theory_row(i, &axis, step, t, deps, &singles, &diffs, &mask))
        .collect();
    let mut values = vec![0.0; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row? {
            values[i * n + j] = v / norm;
            values[j * n + i] = v / norm;
        }
    }
    let grid = CorrelationGrid {
        v1_axis: axis.clone(),
        v2_axis: axis,
        values,
        mask,
        normalization: Normalization::PerTL3,
        t,
        step,
        mask_band,
        prime_limit: Some(deps.primes.limit()),
    };
    grid.validate()?;
    Ok(grid)
}

#[allow(clippy::too_many_arguments)]
fn theory_row(
    i: usize,
    axis: &[f64],
    step: f64,
    t: f64,
    deps: &Deps,
    singles: &[Single],
    diffs: &[Single],
    mask: &[bool],
) -> Result<Vec<(usize, f64)>> {
    let n = axis.len();
    if (i..n).all(|j| mask[i * n + j]) {
        return Ok(Vec::new());
    }
    let c = |v: f64| Complex64::new(0.0, v);
    let z = c(0.0);
    let (v1, h, len) = (axis[i], step, n - i);
    let tab = &deps.primes;
    let line1 = primes::pair_sums_line(c(v1), z, c(v1), c(h), len, tab);
    let line2 = primes::pair_sums_line(c(-v1), c(-h), z, c(-h), len, tab);
    let line3 = primes::pair_sums_line(c(-v1), z, z, c(h), len, tab);
    let mut out = Vec::new();
    for j in i..n {
        if mask[i * n + j] {
            continue;
        }
        let k = j - i;
        // d = v1 - v2 = -k step
        let (s1, s2, sd) = (singles[i], singles[j], diffs[k].conj());
        let pr = [
            I3Primes::from_pair(line1[k], s1.a, s2.a),
            I3Primes::from_pair(line2[k], s2.a.conj(), sd.a),
            I3Primes::from_pair(line3[k], s1.a.conj(), sd.a.conj()),
        ];
        out.push((j, bracket_with(v1, axis[j], t, &deps.zeta, [s1, s2, sd], &pr)?));
    }
    Ok(out)
}

/// sin(pi x) / (pi x) with S(0) = 1.
pub fn sine_kernel(x: f64) -> f64 {
    let y = PI * x;
    if y.abs() < 1e-4 {
        1.0 - y * y / 6.0 + y.powi(4) / 120.0
    } else {
        y.sin() / y
    }
}

/// det of the 3x3 sine-kernel matrix at points 0, v1, v2.
pub fn sine_kernel_det(v1: f64, v2: f64) -> f64 {
    let s1 = sine_kernel(v1);
    let s2 = sine_kernel(v2);
    let s12 = sine_kernel(v1 - v2);
    1.0 - s12 * s12 - s1 * s1 - s2 * s2 + 2.0 * s1 * s2 * s12
}

/// One height of a limit check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub t: f64,
    pub scaled_value: f64,
    pub limit_value: f64,
    pub abs_error: f64,
}

/// The normalized bracket at (2 pi v1 / L, 2 pi v2 / L) against the
/// sine-kernel determinant at (v1, v2), for each height in `t_list`.
pub fn limit_check(v1: f64, v2: f64, t_list: &[f64], deps: &Deps) -> Result<Vec<LimitRow>> {
    check_off_lines(v1, v2)?;
    if t_list.is_empty() {
        return Err(Error::Domain("empty T list".into()));
    }
    for w in t_list.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain("T list must be strictly ascending".into()));
        }
    }
    if !(t_list[0] >= 1e3) {
        return Err(Error::Domain(format!("T = {} (need >= 1e3)", t_list[0])));
    }
    let limit_value = sine_kernel_det(v1, v2);
    t_list
        .iter()
        .map(|&t| {
            let l = log_height(t);
            let scaled_value = normalized_bracket(2.0 * PI * v1 / l, 2.0 * PI * v2 / l, t, deps)?;
            Ok(LimitRow {
                t,
                scaled_value,
                limit_value,
                abs_error: (scaled_value - limit_value).abs(),
            })
        })
        .collect()
}

/// A test function sampled on the centred lattice (k + 1/2) h, k = -n .. n-1,
/// in both variables. `values` is row-major with v1 as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTest {
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledTest {
    pub fn new(axis: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = axis.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::GridMismatch(format!(
                "axis has {n} points (need an even count >= 2)"
            )));
        }
        if values.len() != n * n {
            return Err(Error::GridMismatch(format!(
                "{} values for a {n}x{n} lattice",
                values.len()
            )));
        }
        let h = axis[1] - axis[0];
        let tol = 1e-9 * h;
        for (k, &x) in axis.iter().enumerate() {
            let want = (k as f64 - n as f64 / 2.0 + 0.5) * h;
            if !(h > 0.0) || (x - want).abs() > tol {
                return Err(Error::GridMismatch(
                    "axis must be (k + 1/2) h, symmetric about 0".into(),
                ));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("test function sample".into()));
        }
        Ok(SampledTest { axis, values })
    }

    /// Samples `f` on the centred lattice covering [-half_width, half_width]^2.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(half_width: f64, step: f64, f: F) -> Result<Self> {
        if !(step > 0.0 && half_width >= step) {
            return Err(Error::Domain(format!("half_width = {half_width}, step = {step}")));
        }
        let n = (half_width / step + 1e-9).floor() as i64;
        let axis: Vec<f64> = (-n..n).map(|k| (k as f64 + 0.5) * step).collect();
        let values = axis
            .iter()
            .flat_map(|&a| axis.iter().map(move |&b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        SampledTest::new(axis, values)
    }

    pub fn step(&self) -> f64 {
        self.axis[1] - self.axis[0]
    }

    fn n(&self) -> usize {
        self.axis.len()
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }
}

/// (1/(2 pi)^3) * sum f * bracket * h^2 over the lattice. Lines v1 = 0 and
/// v2 = 0 fall midway between samples; on the diagonal the bracket is taken
/// as the mean over the mirrored pair (v +- h/4, v -+ h/4). Cells where f is
/// exactly zero are skipped.
pub fn integrate_against_test(f: &SampledTest, t: f64, deps: &Deps) -> Result<f64> {
    check_height(t)?;
    let h = f.step();
    let n = f.n();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| f.at(i, j) != 0.0)
        .collect();
    let terms: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (v1, v2) = (f.axis[i], f.axis[j]);
            let b = if i == j {
                let e = 0.25 * h;
                0.5 * (bracket(v1 + e, v2 - e, t, deps)? + bracket(v1 - e, v2 + e, t, deps)?)
            } else {
                bracket(v1, v2, t, deps)?
            };
            Ok(f.at(i, j) * b)
        })
        .collect();
    let mut sum = 0.0;
    for v in terms {
        sum += v?;
    }
    Ok(sum * h * h / (2.0 * PI).powi(3))
}

/// The full triple sum split as in the coincidence decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSum {
    pub distinct_triple: f64,
    pub pair_terms: f64,
    pub single_term: f64,
}

impl FullSum {
    pub fn total(&self) -> f64 {
        self.distinct_triple + self.pair_terms + self.single_term
    }
}

/// Splits the sum over all (not necessarily distinct) triples into the
/// distinct-triple integral, the pair terms along v1 = 0, v2 = 0, v1 = v2
/// weighted by s(v) + s(-v), and the single term f(0,0) int log(t/2pi).
/// Values on v = 0 are midpoint averages of the adjacent samples.
pub fn full_sum_decomposition(f: &SampledTest, t: f64, deps: &Deps) -> Result<FullSum> {
    let distinct_triple = integrate_against_test(f, t, deps)?;
    let n = f.n();
    let h = f.step();
    let (lo, hi) = (n / 2 - 1, n / 2);
    // f(0, v_k), f(v_k, 0), f(v_k, v_k)
    let line_sum = |k: usize| 0.5 * (f.at(lo, k) + f.at(hi, k)) + 0.5 * (f.at(k, lo) + f.at(k, hi)) + f.at(k, k);
    let terms: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let w = line_sum(k);
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * two_point_bracket(f.axis[k], t, deps)?)
        })
        .collect();
    let mut pair = 0.0;
    for v in terms {
        pair += v?;
    }
    let f00 = 0.25 * (f.at(lo, lo) + f.at(lo, hi) + f.at(hi, lo) + f.at(hi, hi));
    Ok(FullSum {
        distinct_triple,
        pair_terms: pair * h / (2.0 * PI).powi(2),
        single_term: f00 * ratios::log_power_integral(1, t)? / (2.0 * PI),
    })
}
