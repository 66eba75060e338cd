use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricorr::primes::PrimeTable;
use tricorr::rmt::RmtParams;
use tricorr::triple::{bracket, sine_kernel_det};
use tricorr::zeros::empirical_triple;
use tricorr::zeta::zeta;
use tricorr::{Complex64, EngineConfig, ZeroDataset};

use crate::commands::{limit_converges, limit_rows, rmt_scan};
use crate::failure::Failure;

type Check = Result<String, String>;
type Named<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn zeta_values(config: &EngineConfig) -> Check {
    let zp = config.zeta_params().map_err(|e| e.to_string())?;
    let at = |re: f64, im: f64| zeta(Complex64::new(re, im), &zp).map_err(|e| e.to_string());
    let e2 = (at(2.0, 0.0)? - PI * PI / 6.0).norm();
    let em1 = (at(-1.0, 0.0)? + 1.0 / 12.0).norm();
    let z1 = at(0.5, 14.134725141734693)?.norm();
    let detail = format!("zeta(2) {e2:.1e}, zeta(-1) {em1:.1e}, |zeta(rho_1)| {z1:.1e}");
    if e2 < 1e-12 && em1 < 1e-10 && z1 < 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn prime_counts() -> Check {
    let mut got = vec![];
    for (limit, want) in [(100, 25), (10_000, 1229), (100_000, 9592)] {
        let n = PrimeTable::build(limit).map_err(|e| e.to_string())?.len();
        if n != want {
            return Err(format!("pi({limit}) = {n}, expected {want}"));
        }
        got.push(format!("pi({limit}) = {n}"));
    }
    Ok(got.join(", "))
}

fn rmt_identity() -> Check {
    let mut worst: f64 = 0.0;
    for n in [3, 5, 10] {
        let p = RmtParams::new(n).map_err(|e| e.to_string())?;
        let r = rmt_scan(p, 100, 42, 1e-8).map_err(|e| format!("N = {n}: {e}"))?;
        worst = worst.max(r.worst);
    }
    Ok(format!("max relative deviation {worst:.1e} over N = 3, 5, 10"))
}

fn bracket_symmetry(config: &EngineConfig) -> Check {
    let deps = config.deps().map_err(|e| e.to_string())?;
    let (v1, v2) = (0.37, 1.13);
    let b = |x: f64, y: f64| bracket(x, y, config.t, &deps).map_err(|e| e.to_string());
    let base = b(v1, v2)?;
    let swap = (b(v2, v1)? - base).abs() / base.abs();
    let neg = (b(-v1, -v2)? - base).abs() / base.abs();
    let detail = format!("swap {swap:.1e}, negation {neg:.1e}");
    if swap < 1e-10 && neg < 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sine_kernel_coincidence() -> Check {
    let worst = [0.3, 1.7, 4.2]
        .iter()
        .map(|&v| sine_kernel_det(v, v).abs().max(sine_kernel_det(v, 0.0).abs()))
        .fold(0.0, f64::max);
    if worst < 1e-14 {
        Ok(format!("determinant on coinciding points {worst:.1e}"))
    } else {
        Err(format!("determinant on coinciding points {worst:e}"))
    }
}

fn limit_trend(config: &EngineConfig) -> Check {
    let rows = limit_rows(config, 1.3, 2.7, &[1e4, 1e6, 1e9]).map_err(|e| e.to_string())?;
    let errs: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.abs_error)).collect();
    limit_converges(&rows)?;
    if rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error) {
        Ok(format!("abs error {}", errs.join(" -> ")))
    } else {
        Err(format!("abs error not strictly decreasing: {}", errs.join(" -> ")))
    }
}

fn histogram_counts() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts: Vec<f64> = (0..150).map(|_| rng.random_range(100.0..400.0)).collect();
    let ds = ZeroDataset::new(pts).map_err(|e| e.to_string())?;
    let (window, bin) = (10.0, 0.5);
    let h = empirical_triple(&ds, window, bin).map_err(|e| e.to_string())?;
    let nb = h.edges1.len() - 1;
    let slot = |d: f64| (0..nb).find(|&k| h.edges1[k] < d && d <= h.edges1[k + 1]);
    let g = ds.ordinates();
    let mut want = vec![0u64; nb * nb];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            for (k, c) in g.iter().enumerate() {
                if i == j || i == k || j == k {
                    continue;
                }
                if let (Some(p), Some(q)) = (slot(a - b), slot(a - c)) {
                    want[p * nb + q] += 1;
                }
            }
        }
    }
    if h.counts == want {
        Ok(format!("{} triples on 150 points match the triple loop", h.total()))
    } else {
        Err("triple histogram differs from the triple loop".into())
    }
}

pub fn run(config: &EngineConfig) -> Result<(), Failure> {
    let checks: [Named; 7] = [
        ("zeta-values", Box::new(|| zeta_values(config))),
        ("prime-counts", Box::new(prime_counts)),
        ("rmt-identity", Box::new(rmt_identity)),
        ("bracket-symmetry", Box::new(|| bracket_symmetry(config))),
        ("sine-kernel", Box::new(sine_kernel_coincidence)),
        ("limit-trend", Box::new(|| limit_trend(config))),
        ("histogram-counts", Box::new(histogram_counts)),
    ];
    let mut first_failure = None;
    for (name, check) in &checks {
        match check() {
            Ok(detail) => println!("selftest {name} PASS: {detail}"),
            Err(detail) => {
                println!("selftest {name} FAIL: {detail}");
                first_failure.get_or_insert(format!("{name}: {detail}"));
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some(msg) => Err(Failure::Check(msg)),
    }
}
