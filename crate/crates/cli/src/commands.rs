use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricorr::rmt::{gaudin_det, t3_integrand, RmtParams};
use tricorr::triple::{limit_check, theory_grid, LimitRow};
use tricorr::zeros::{diff_stats, empirical_triple, empirical_two_point, load_zeros};
use tricorr::{CorrelationGrid, EngineConfig, Error, Histogram1D};

use crate::failure::Failure;

/// Opens `out` for writing, or stdout when absent.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_grid(grid: &CorrelationGrid, source: &str, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    grid.write_csv(&mut w, source).map_err(Failure::from_data)?;
    w.flush().map_err(Failure::io)
}

pub fn theory(config: &EngineConfig, out: Option<&Path>) -> Result<(), Failure> {
    let deps = config.deps().map_err(Failure::config)?;
    info!(
        "theory grid: window {} step {} T {}",
        config.window, config.step, config.t
    );
    let grid = theory_grid(config.window, config.step, config.t, config.mask_band, &deps).map_err(Failure::config)?;
    write_grid(&grid, "theory", out)
}

pub fn empirical(config: &EngineConfig, zeros: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let ds = load_zeros(zeros).map_err(Failure::from_data)?;
    info!("{} zeros up to {}", ds.count(), ds.t());
    let grid = empirical_triple(&ds, config.window, config.bin)
        .and_then(|h| h.to_grid(config.mask_band))
        .map_err(Failure::from_data)?;
    write_grid(&grid, "empirical", out)
}

fn write_histogram<W: Write>(w: &mut W, h: &Histogram1D, t: f64, bin: f64) -> io::Result<()> {
    writeln!(w, "# tricorr pair histogram")?;
    writeln!(w, "# T={t}")?;
    writeln!(w, "# bin={bin}")?;
    writeln!(w, "# normalization={}", h.normalization)?;
    writeln!(w, "# norm_constant={}", h.norm_constant)?;
    writeln!(w, "lo,hi,count,value")?;
    for (k, (c, v)) in h.counts.iter().zip(&h.values).enumerate() {
        writeln!(w, "{},{},{c},{v}", h.edges[k], h.edges[k + 1])?;
    }
    let n = h.values.len() as f64;
    let max = h.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = h.values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = h.values.iter().sum::<f64>() / n;
    writeln!(w, "# stats max={max}, min={min}, mean={mean}, pairs={}", h.total())
}

pub fn two_point(config: &EngineConfig, zeros: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let ds = load_zeros(zeros).map_err(Failure::from_data)?;
    let h = empirical_two_point(&ds, config.window, config.bin).map_err(Failure::from_data)?;
    let mut w = sink(out)?;
    write_histogram(&mut w, &h, ds.t(), config.bin).map_err(Failure::io)?;
    w.flush().map_err(Failure::io)
}

fn read_grid(path: &Path) -> Result<CorrelationGrid, Failure> {
    let f = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    CorrelationGrid::read_csv(BufReader::new(f)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn diff(a: &Path, b: &Path) -> Result<(), Failure> {
    let (ga, gb) = (read_grid(a)?, read_grid(b)?);
    let s = diff_stats(&ga, &gb).map_err(Failure::from_data)?;
    println!("cells={}", s.cells);
    println!("mean={}", s.mean);
    println!("std={}", s.std);
    println!("mean_abs={}", s.mean_abs);
    println!("max_abs={}", s.max_abs);
    Ok(())
}

/// Angle triples closer than this are redrawn; the contour form refuses them.
const MIN_GAP: f64 = 1e-3;

fn too_close(th: &[f64; 3]) -> bool {
    let gap = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    };
    gap(th[0], th[1]) < MIN_GAP || gap(th[0], th[2]) < MIN_GAP || gap(th[1], th[2]) < MIN_GAP
}

pub struct RmtReport {
    pub worst: f64,
    pub redrawn: usize,
}

/// Draws `samples` angle triples from `seed` and compares the contour form
/// with the determinant. Returns the first triple off by more than `tol`.
pub fn rmt_scan(p: RmtParams, samples: usize, seed: u64, tol: f64) -> Result<RmtReport, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RmtReport { worst: 0.0, redrawn: 0 };
    for k in 0..samples {
        let th = loop {
            let th: [f64; 3] = std::array::from_fn(|_| rng.random_range(-PI..PI));
            if !too_close(&th) {
                break th;
            }
            report.redrawn += 1;
        };
        let g = gaudin_det(th[0], th[1], th[2], p);
        let v = t3_integrand(th[0], th[1], th[2], p).map_err(|e| format!("sample {k} at {th:?}: {e}"))?;
        let rel = (v - g).abs() / g.abs();
        if !(rel <= tol) {
            return Err(format!(
                "sample {k}: theta = ({}, {}, {}), integrand {v}, determinant {g}, relative deviation {rel:e}",
                th[0], th[1], th[2]
            ));
        }
        report.worst = report.worst.max(rel);
    }
    Ok(report)
}

pub fn rmt_verify(n: usize, samples: usize, seed: u64, tol: f64) -> Result<(), Failure> {
    let p = RmtParams::new(n).map_err(Failure::config)?;
    if samples == 0 {
        return Err(Failure::Config("--samples must be at least 1".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Config(format!("--tol {tol} (need a positive number)")));
    }
    match rmt_scan(p, samples, seed, tol) {
        Ok(r) => {
            println!(
                "PASS N={n} samples={samples} seed={seed} max_relative_deviation={:e} redrawn={}",
                r.worst, r.redrawn
            );
            Ok(())
        }
        Err(msg) => {
            println!("FAIL N={n} samples={samples} seed={seed}");
            Err(Failure::Check(msg))
        }
    }
}

/// Each error may exceed its predecessor by at most this fraction, and the
/// last must be below the first.
const LIMIT_SLACK: f64 = 0.2;

pub fn limit_rows(config: &EngineConfig, v1: f64, v2: f64, t_list: &[f64]) -> Result<Vec<LimitRow>, Failure> {
    let deps = config.deps().map_err(Failure::config)?;
    limit_check(v1, v2, t_list, &deps).map_err(|e| match e {
        Error::NonFinite(_) | Error::FactorNearZero { .. } => Failure::Check(e.to_string()),
        other => Failure::Config(other.to_string()),
    })
}

pub fn limit_converges(rows: &[LimitRow]) -> Result<(), String> {
    for w in rows.windows(2) {
        if w[1].abs_error > (1.0 + LIMIT_SLACK) * w[0].abs_error {
            return Err(format!(
                "error grows from {} at T = {} to {} at T = {}",
                w[0].abs_error, w[0].t, w[1].abs_error, w[1].t
            ));
        }
    }
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    if rows.len() > 1 && !(last.abs_error < first.abs_error) {
        return Err(format!(
            "error at T = {} is not below the error at T = {}",
            last.t, first.t
        ));
    }
    Ok(())
}

pub fn limit(config: &EngineConfig, v1: f64, v2: f64, t_list: &[f64]) -> Result<(), Failure> {
    let rows = limit_rows(config, v1, v2, t_list)?;
    let mut w = BufWriter::new(io::stdout().lock());
    let mut table = || -> io::Result<()> {
        writeln!(w, "# v1={v1} v2={v2} prime_limit={}", config.prime_limit)?;
        writeln!(w, "T,scaled_value,limit_value,abs_error")?;
        for r in &rows {
            writeln!(w, "{},{},{},{}", r.t, r.scaled_value, r.limit_value, r.abs_error)?;
        }
        w.flush()
    };
    table().map_err(Failure::io)?;
    limit_converges(&rows).map_err(Failure::Check)
}
