//! Prime sieve and the arithmetic factors A, B, P, Q of the triple
//! correlation formula, plus the full 3/3 and 2/2 ratio Euler products.
//!
//! Products are accumulated as sums of `log(1 + u)` with `u` formed
//! directly, so that factors close to 1 keep their relative accuracy.
//! Every result carries a bound on the contribution of primes above the
//! sieve limit, from comparison with the prime density 1/log t.

use num_complex::Complex64;

use crate::cmath::{expm1, is_finite, ln_1p};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Largest sieve bound accepted by [`PrimeTable::build`].
pub const MAX_LIMIT: u64 = 100_000_000;
/// Local factors of the ratio products below this modulus are rejected.
pub const FACTOR_FLOOR: f64 = 1e-8;
/// Multiplier applied to the integral tail estimates.
const TAIL_SAFETY: f64 = 4.0;

/// The primes up to `limit`, with cached logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    logs: Vec<f64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes over the odd numbers.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("prime limit {limit} (need at least 2)")));
        }
        if limit > MAX_LIMIT {
            return Err(Error::Resource(format!(
                "prime limit {limit} exceeds the sieve budget {MAX_LIMIT}"
            )));
        }
        // index i stands for 2i + 1
        let half = ((limit - 1) / 2 + 1) as usize;
        let mut composite = vec![false; half];
        composite[0] = true;
        let mut i = 1usize;
        while (2 * i + 1) * (2 * i + 1) <= limit as usize {
            if !composite[i] {
                let p = 2 * i + 1;
                let mut j = p * p / 2;
                while j < half {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        let mut primes = vec![2u64];
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, c)| !**c)
                .map(|(i, _)| 2 * i as u64 + 1),
        );
        let logs = primes.iter().map(|&p| (p as f64).ln()).collect();
        Ok(PrimeTable { limit, primes, logs })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Effective start of the neglected tail (the first integer past the sieve).
    fn tail_start(&self) -> f64 {
        (self.limit as f64 + 1.0).max(3.0)
    }
}

/// A truncated prime sum or product and a bound on what the truncation dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Upper estimate for sum over primes p > P of log^k p * p^(-1-a),
/// i.e. the integral of log^(k-1) t * t^(-1-a) from P to infinity.
fn prime_tail(p0: f64, a: f64, k: i32) -> f64 {
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let l = p0.ln();
    let pa = p0.powf(-a);
    let integral = match k {
        0 => pa / (a * l),
        1 => pa / a,
        2 => pa * (l / a + 1.0 / (a * a)),
        3 => pa * (l * l / a + 2.0 * l / (a * a) + 2.0 / (a * a * a)),
        _ => unreachable!("prime_tail only used for k <= 3"),
    };
    TAIL_SAFETY * integral
}

fn require_re_above(x: Complex64, bound: f64, what: &str) -> Result<()> {
    if !is_finite(x) || !(x.re > bound) {
        return Err(Error::Domain(format!("{what} = {x} (need Re > {bound})")));
    }
    Ok(())
}

#[inline]
fn pow_neg(logp: f64, x: Complex64) -> Complex64 {
    (-x * logp).exp()
}

/// Turns a log-space product with a bound on the dropped log mass into a
/// value plus absolute tail bound.
fn from_log(log_sum: Complex64, log_tail: f64) -> TailEstimate {
    let value = log_sum.exp();
    TailEstimate {
        value,
        tail_bound: value.norm() * log_tail.exp_m1(),
    }
}

/// Log of A(x) summed over the table, with the log-space tail bound.
fn a_log(x: Complex64, table: &PrimeTable) -> (Complex64, f64) {
    let mut acc = KahanSum::<Complex64>::default();
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        // local factor 1 - w^2 with w = (p^-x - 1)/(p - 1)
        let w = expm1(-x * lp) / (p as f64 - 1.0);
        acc.add(ln_1p(-w * w));
    }
    // |w|^2 <= (1 + p^-Re x)^2 / (p-1)^2
    let sig = (-x.re).max(0.0);
    let tail = prime_tail(table.tail_start(), 1.0 - 2.0 * sig, 0);
    (acc.value(), tail)
}

/// A(x) = prod_p (1 - p^(-1-x))(1 - 2/p + p^(-1-x)) / (1 - 1/p)^2, for Re x > -1/2.
pub fn a_term(x: Complex64, table: &PrimeTable) -> Result<TailEstimate> {
    require_re_above(x, -0.5, "x")?;
    let (l, tail) = a_log(x, table);
    let out = from_log(l, tail);
    finite_estimate(out, "A")
}

/// B(x) = sum_p (log p / (p^(1+x) - 1))^2, for Re x > -1/2.
pub fn b_term(x: Complex64, table: &PrimeTable) -> Result<TailEstimate> {
    require_re_above(x, -0.5, "x")?;
    let mut acc = KahanSum::<Complex64>::default();
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let e = pow_neg(lp, x) / p as f64;
        // log p / (p^(1+x) - 1) = log p * e / (1 - e) with e = p^(-1-x)
        let t = lp * e / (1.0 - e);
        acc.add(t * t);
    }
    let a = 1.0 + 2.0 * x.re;
    let out = TailEstimate {
        value: acc.value(),
        tail_bound: prime_tail(table.tail_start(), a, 3),
    };
    finite_estimate(out, "B")
}

/// Q(x, y) = -sum_p log^3 p / (p^(2+x+y) (1 - p^(-1-x)) (1 - p^(-1-y))).
pub fn q_term(x: Complex64, y: Complex64, table: &PrimeTable) -> Result<TailEstimate> {
    require_re_above(x, -0.5, "x")?;
    require_re_above(y, -0.5, "y")?;
    let pair = pair_sums(x, y, table, false);
    finite_estimate(
        TailEstimate {
            value: pair.q,
            tail_bound: pair.q_tail,
        },
        "Q",
    )
}

/// P(x, y) = A(x) * S(x, y) with
/// S(x, y) = -sum_p log p * p^(-2+x-y) (1 - p^-x)(1 - p^-x - p^-y + p^(-1-y))
///           / ((1 - 2/p + p^(-1-x)) (1 - p^(-1-y)) (1 - p^(-1+x-y))).
///
/// This is the derivative in the second slot of
/// A_zeta(-beta, a2, -a1; a1, g2, beta) at g2 = a2, with x = a1 + beta and
/// y = a2 + beta. For small x it behaves like x * sum_p log^2 p / (p^(1+y) - 1)^2.
pub fn p_term(x: Complex64, y: Complex64, table: &PrimeTable) -> Result<TailEstimate> {
    require_re_above(x, -0.5, "x")?;
    require_re_above(y, -0.5, "y")?;
    check_s_convergence(x, y)?;
    let (la, la_tail) = a_log(x, table);
    let a = from_log(la, la_tail);
    let pair = pair_sums(x, y, table, false);
    let out = TailEstimate {
        value: a.value * pair.s_xy,
        tail_bound: a.value.norm() * pair.s_xy_tail + a.tail_bound * (pair.s_xy.norm() + pair.s_xy_tail),
    };
    finite_estimate(out, "P")
}

fn s_exponent(x: Complex64, y: Complex64) -> f64 {
    // term size ~ log p * p^(-2 + Re x - Re y) * p^max(0,-Re x) * p^max(0,-Re x,-Re y)
    let m1 = (-x.re).max(0.0);
    let m2 = (-x.re).max(-y.re).max(0.0);
    1.0 - x.re + y.re - m1 - m2
}

pub(crate) fn check_s_convergence(x: Complex64, y: Complex64) -> Result<()> {
    if s_exponent(x, y) <= 0.0 {
        return Err(Error::Domain(format!(
            "P({x}, {y}): the prime sum does not converge absolutely"
        )));
    }
    Ok(())
}

/// Joint evaluation of Q(x,y), S(x,y) and optionally S(y,x) in one pass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairSums {
    pub q: Complex64,
    pub q_tail: f64,
    pub s_xy: Complex64,
    pub s_xy_tail: f64,
    pub s_yx: Complex64,
}

/// Per-prime summands of Q(x,y), S(x,y) and S(y,x) from ex = p^-x, ey = p^-y,
/// omx = 1 - p^-x and omy = 1 - p^-y.
#[inline]
fn pair_summands(
    lp: f64,
    r: f64,
    ex: Complex64,
    ey: Complex64,
    omx: Complex64,
    omy: Complex64,
    both: bool,
) -> [Complex64; 3] {
    let dx = 1.0 - r * ex;
    let dy = 1.0 - r * ey;
    let q = -(lp * lp * lp) * r * r * ex * ey / (dx * dy);

    let ratio = ey / ex;
    let num = omx * (omx - ey * (1.0 - r));
    let den = (1.0 - 2.0 * r + r * ex) * dy * (1.0 - r * ratio);
    let sxy = -lp * r * r * ratio * num / den;
    let syx = if both {
        let ratio = ex / ey;
        let num = omy * (omy - ex * (1.0 - r));
        let den = (1.0 - 2.0 * r + r * ey) * dx * (1.0 - r * ratio);
        -lp * r * r * ratio * num / den
    } else {
        Complex64::new(0.0, 0.0)
    };
    [q, sxy, syx]
}

fn finish_pair(x: Complex64, y: Complex64, p0: f64, acc: &[KahanSum<Complex64>; 3]) -> PairSums {
    PairSums {
        q: acc[0].value(),
        q_tail: prime_tail(p0, 1.0 + x.re + y.re, 3),
        s_xy: acc[1].value(),
        s_xy_tail: prime_tail(p0, s_exponent(x, y), 1),
        s_yx: acc[2].value(),
    }
}

pub(crate) fn pair_sums(x: Complex64, y: Complex64, table: &PrimeTable, both: bool) -> PairSums {
    let mut acc = [KahanSum::<Complex64>::default(); 3];
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let r = 1.0 / p as f64;
        let ex = pow_neg(lp, x);
        let ey = pow_neg(lp, y);
        let omx = -expm1(-x * lp);
        let omy = -expm1(-y * lp);
        let terms = pair_summands(lp, r, ex, ey, omx, omy, both);
        for (a, t) in acc.iter_mut().zip(terms) {
            a.add(t);
        }
    }
    finish_pair(x, y, table.tail_start(), &acc)
}

/// Phasors are recomputed exactly this often along a line.
const REFRESH: usize = 32;

/// `pair_sums(x0 + k dx, y0 + k dy, table, true)` for k = 0 .. count, with the
/// prime powers advanced by multiplication instead of fresh exponentials.
pub(crate) fn pair_sums_line(
    x0: Complex64,
    dx: Complex64,
    y0: Complex64,
    dy: Complex64,
    count: usize,
    table: &PrimeTable,
) -> Vec<PairSums> {
    let mut acc = vec![[KahanSum::<Complex64>::default(); 3]; count];
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let r = 1.0 / p as f64;
        let (wx, wy) = (pow_neg(lp, dx), pow_neg(lp, dy));
        let (mut ex, mut ey) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        for (k, a) in acc.iter_mut().enumerate() {
            let (omx, omy);
            if k % REFRESH == 0 {
                let x = x0 + k as f64 * dx;
                let y = y0 + k as f64 * dy;
                omx = -expm1(-x * lp);
                omy = -expm1(-y * lp);
                ex = 1.0 - omx;
                ey = 1.0 - omy;
            } else {
                ex *= wx;
                ey *= wy;
                omx = 1.0 - ex;
                omy = 1.0 - ey;
            }
            let terms = pair_summands(lp, r, ex, ey, omx, omy, true);
            for (s, t) in a.iter_mut().zip(terms) {
                s.add(t);
            }
        }
    }
    let p0 = table.tail_start();
    acc.iter()
        .enumerate()
        .map(|(k, a)| finish_pair(x0 + k as f64 * dx, y0 + k as f64 * dy, p0, a))
        .collect()
}

/// Joint evaluation of A(x) and B(x) in one pass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SingleSums {
    pub a: TailEstimate,
    pub b: TailEstimate,
}

pub(crate) fn single_sums(x: Complex64, table: &PrimeTable) -> SingleSums {
    let mut la = KahanSum::<Complex64>::default();
    let mut b = KahanSum::<Complex64>::default();
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let em = expm1(-x * lp);
        let w = em / (p as f64 - 1.0);
        la.add(ln_1p(-w * w));
        let e = (1.0 + em) / p as f64;
        let t = lp * e / (1.0 - e);
        b.add(t * t);
    }
    let p0 = table.tail_start();
    let sig = (-x.re).max(0.0);
    SingleSums {
        a: from_log(la.value(), prime_tail(p0, 1.0 - 2.0 * sig, 0)),
        b: TailEstimate {
            value: b.value(),
            tail_bound: prime_tail(p0, 1.0 + 2.0 * x.re, 3),
        },
    }
}

fn finite_estimate(t: TailEstimate, what: &str) -> Result<TailEstimate> {
    if is_finite(t.value) && !t.tail_bound.is_nan() {
        Ok(t)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Shorthand for p^(-1-s) given log p.
#[inline]
fn m1(lp: f64, r: f64, s: Complex64) -> Complex64 {
    r * pow_neg(lp, s)
}

/// The 3/3 ratio Euler product A_zeta(a1, a2, b; g1, g2, d).
///
/// Each local factor is
/// (1 - [g1 d])(1 - [g2 d]) / ((1 - [a1 d])(1 - [a2 d])(1 - [g1 b])(1 - [g2 b])) * (1 + u),
/// where [X Y] = p^(-1-X-Y) and u collects the eight-term bracket with
/// p^(b-d) multiplied through, so no factor grows with p.
#[allow(clippy::too_many_arguments)]
pub fn a_zeta_33(
    a1: Complex64,
    a2: Complex64,
    b: Complex64,
    g1: Complex64,
    g2: Complex64,
    d: Complex64,
    table: &PrimeTable,
) -> Result<TailEstimate> {
    let firsts = [
        ("g1+d", g1 + d),
        ("g2+d", g2 + d),
        ("a1+d", a1 + d),
        ("a2+d", a2 + d),
        ("g1+b", g1 + b),
        ("g2+b", g2 + b),
    ];
    for (name, v) in firsts {
        require_re_above(v, -0.5, name)?;
    }
    let seconds = [
        ("g1+g2+2b", g1 + g2 + 2.0 * b),
        ("g1+g2+b+d", g1 + g2 + b + d),
        ("a1+a2+b+d", a1 + a2 + b + d),
    ];
    for (name, v) in seconds {
        require_re_above(v, -1.0, name)?;
    }

    let mut acc = KahanSum::<Complex64>::default();
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let r = 1.0 / p as f64;
        let g1d = m1(lp, r, g1 + d);
        let g2d = m1(lp, r, g2 + d);
        let a1d = m1(lp, r, a1 + d);
        let a2d = m1(lp, r, a2 + d);
        let g1b = m1(lp, r, g1 + b);
        let g2b = m1(lp, r, g2 + b);
        let u = -g1b + g1d - g2b + g2d - a1d - a2d + r * m1(lp, r, g1 + g2 + 2.0 * b) - r * m1(lp, r, g1 + g2 + b + d)
            + r * m1(lp, r, a1 + a2 + b + d);
        let logf = ln_1p(-g1d) + ln_1p(-g2d) - ln_1p(-a1d) - ln_1p(-a2d) - ln_1p(-g1b) - ln_1p(-g2b) + ln_1p(u);
        let modulus = logf.re.exp();
        if !(modulus >= FACTOR_FLOOR) {
            return Err(Error::FactorNearZero { prime: p, modulus });
        }
        acc.add(logf);
    }
    let worst_first = firsts.iter().map(|(_, v)| v.re).fold(f64::INFINITY, f64::min);
    let worst_second = seconds.iter().map(|(_, v)| v.re).fold(f64::INFINITY, f64::min);
    let a = (1.0 + 2.0 * worst_first).min(1.0 + worst_second);
    // roughly 6^2 second-order cross terms per prime
    let tail = 9.0 * prime_tail(table.tail_start(), a, 0);
    finite_estimate(from_log(acc.value(), tail), "A_zeta (3/3)")
}

/// The 2/2 ratio Euler product A_zeta(a, b; g, d) with local factor
/// (1 - [g d])(1 - [b g] - [a d] + [g d]) / ((1 - [b g])(1 - [a d])).
pub fn a_zeta_22(a: Complex64, b: Complex64, g: Complex64, d: Complex64, table: &PrimeTable) -> Result<TailEstimate> {
    let firsts = [("g+d", g + d), ("b+g", b + g), ("a+d", a + d)];
    for (name, v) in firsts {
        require_re_above(v, -0.5, name)?;
    }
    let mut acc = KahanSum::<Complex64>::default();
    for (&p, &lp) in table.primes.iter().zip(&table.logs) {
        let r = 1.0 / p as f64;
        let gd = m1(lp, r, g + d);
        let bg = m1(lp, r, b + g);
        let ad = m1(lp, r, a + d);
        let logf = ln_1p(-gd) + ln_1p(gd - bg - ad) - ln_1p(-bg) - ln_1p(-ad);
        let modulus = logf.re.exp();
        if !(modulus >= FACTOR_FLOOR) {
            return Err(Error::FactorNearZero { prime: p, modulus });
        }
        acc.add(logf);
    }
    let worst = firsts.iter().map(|(_, v)| v.re).fold(f64::INFINITY, f64::min);
    let tail = 4.0 * prime_tail(table.tail_start(), 1.0 + 2.0 * worst, 0);
    finite_estimate(from_log(acc.value(), tail), "A_zeta (2/2)")
}
