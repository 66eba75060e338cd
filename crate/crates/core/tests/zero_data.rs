mod common;

use std::io::Write;

use rand::seq::SliceRandom;
use tricorr::triple::theory_grid;
use tricorr::zeros::*;
use tricorr::{CorrelationGrid, Deps, Error, EulerMaclaurinParams};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/zeros_1k.txt");

fn fixture() -> ZeroDataset {
    load_zeros(FIXTURE).unwrap()
}

fn edges(window: f64, bin: f64) -> Vec<f64> {
    let n = (window / bin + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * bin).collect()
}

/// Bin by linear scan over the edges.
fn slow_bin(d: f64, e: &[f64]) -> Option<usize> {
    (0..e.len() - 1).find(|&k| e[k] < d && d <= e[k + 1])
}

#[test]
fn fixture_starts_with_the_known_zeros() {
    let ds = fixture();
    assert_eq!(ds.count(), 1000);
    let g = ds.ordinates();
    for (got, want) in g.iter().zip([14.134725, 21.022040, 25.010858]) {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
    assert_eq!(ds.t(), g[999]);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn bad_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let write = |name: &str, body: &str| {
        let p = dir.join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    };
    let p = write("neg.txt", "# zeros\n14.13\n-21.02\n");
    assert!(matches!(load_zeros(&p), Err(Error::Parse { line: 3, .. })));
    let p = write("empty.txt", "# nothing here\n\n");
    assert_eq!(load_zeros(&p), Err(Error::EmptyFile));
    let p = write("dup.txt", "14.13\n25.01\n21.02\n14.13\n");
    assert!(matches!(load_zeros(&p), Err(Error::Parse { line: 4, .. })));
    let p = write("unsorted.txt", "25.01\n14.13\n21.02\n");
    assert_eq!(load_zeros(&p).unwrap().ordinates(), &[14.13, 21.02, 25.01]);
    assert!(matches!(load_zeros(dir.join("missing.txt")), Err(Error::Io(_))));
}

#[test]
fn pair_counts_match_double_loop() {
    let ds = fixture();
    let g = ds.ordinates();
    for (window, bin) in [(30.0, 0.2), (30.0, 0.25), (7.0, 0.3)] {
        let h = empirical_two_point(&ds, window, bin).unwrap();
        let e = edges(window, bin);
        let mut want = vec![0u64; e.len() - 1];
        for a in g {
            for b in g {
                if let Some(k) = slow_bin(a - b, &e) {
                    want[k] += 1;
                }
            }
        }
        assert_eq!(h.counts, want, "window {window}, bin {bin}");
        assert_eq!(h.edges, e);
    }
}

#[test]
fn triple_counts_match_triple_loop() {
    let ds = fixture().prefix(300).unwrap();
    let g = ds.ordinates();
    let (window, bin) = (30.0, 0.25);
    let h = empirical_triple(&ds, window, bin).unwrap();
    let e = edges(window, bin);
    let n = e.len() - 1;
    let mut want = vec![0u64; n * n];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            for (k, c) in g.iter().enumerate() {
                if i == j || j == k || i == k {
                    continue;
                }
                if let (Some(p), Some(q)) = (slow_bin(a - b, &e), slow_bin(a - c, &e)) {
                    want[p * n + q] += 1;
                }
            }
        }
    }
    assert_eq!(h.counts, want);
    assert!(h.total() > 0);
}

#[test]
fn counts_ignore_input_order() {
    let base = fixture();
    let mut shuffled = base.ordinates().to_vec();
    shuffled.shuffle(&mut common::rng(7));
    let ds = ZeroDataset::new(shuffled).unwrap();
    assert_eq!(ds, base);
    assert_eq!(
        empirical_two_point(&ds, 30.0, 0.2).unwrap().counts,
        empirical_two_point(&base, 30.0, 0.2).unwrap().counts
    );
    let small = ds.prefix(200).unwrap();
    let mut rev = small.ordinates().to_vec();
    rev.reverse();
    assert_eq!(
        empirical_triple(&ZeroDataset::new(rev).unwrap(), 20.0, 0.5)
            .unwrap()
            .counts,
        empirical_triple(&small, 20.0, 0.5).unwrap().counts
    );
}

#[test]
fn normalization_constants() {
    let ds = fixture();
    let t = ds.t();
    let rho = (t / (2.0 * std::f64::consts::PI)).ln() / (2.0 * std::f64::consts::PI);
    let h = empirical_two_point(&ds, 30.0, 0.2).unwrap();
    assert!((h.norm_constant - t * rho * rho).abs() < 1e-12 * h.norm_constant);
    for (c, v) in h.counts.iter().zip(&h.values) {
        assert_eq!(*v, *c as f64 / (0.2 * h.norm_constant));
    }
    let h3 = empirical_triple(&ds.prefix(300).unwrap(), 10.0, 0.5).unwrap();
    let t3 = h3.t;
    let rho3 = (t3 / (2.0 * std::f64::consts::PI)).ln() / (2.0 * std::f64::consts::PI);
    assert!((h3.norm_constant - t3 * rho3.powi(3)).abs() < 1e-12 * h3.norm_constant);
}

#[test]
fn pair_density_dips_at_the_first_zero() {
    let h = empirical_two_point(&fixture(), 30.0, 0.5).unwrap();
    let c = h.centres();
    let k = c.iter().position(|&x| (x - 14.134725).abs() <= 0.25).unwrap();
    let around = (h.values[k - 2] + h.values[k - 1] + h.values[k + 1] + h.values[k + 2]) / 4.0;
    assert!(h.values[k] < around, "{} vs {around}", h.values[k]);
}

#[test]
fn pair_density_envelope_at_large_separation() {
    let h = empirical_two_point(&fixture(), 30.0, 0.2).unwrap();
    let far: Vec<f64> = h
        .values
        .iter()
        .zip(h.centres())
        .filter(|(_, x)| *x > 5.0)
        .map(|(v, _)| *v)
        .collect();
    for block in far.chunks_exact(20) {
        let m = block.iter().sum::<f64>() / 20.0;
        assert!((0.5..=1.5).contains(&m), "{m}");
    }
}

#[test]
fn window_below_the_smallest_gap_counts_nothing() {
    let ds = fixture();
    let gap = ds
        .ordinates()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let w = 0.9 * gap;
    assert_eq!(empirical_two_point(&ds, w, w).unwrap().total(), 0);
    assert_eq!(empirical_triple(&ds, w, w).unwrap().total(), 0);
}

#[test]
fn diagonal_is_depressed() {
    let h = empirical_triple(&fixture(), 10.0, 0.25).unwrap();
    let n = h.edges1.len() - 1;
    let (mut diag, mut off) = (vec![], vec![]);
    for i in 0..n {
        for j in 0..n {
            let v = h.values[i * n + j];
            if i == j {
                diag.push(v);
            } else if i.abs_diff(j) > 4 && i > 4 && j > 4 {
                off.push(v);
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean(&diag) < 0.2 * mean(&off), "{} vs {}", mean(&diag), mean(&off));
}

#[test]
fn domain_errors() {
    let ds = fixture();
    assert!(matches!(empirical_two_point(&ds, 30.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(empirical_two_point(&ds, 0.1, 0.2), Err(Error::Domain(_))));
    assert!(matches!(empirical_triple(&ds, 1e6, 0.2), Err(Error::Domain(_))));
    assert!(matches!(ZeroDataset::new(vec![]), Err(Error::EmptyFile)));
    assert!(matches!(ZeroDataset::new(vec![3.0, 1.0, 3.0]), Err(Error::Domain(_))));
}

#[test]
fn histogram_grid_lines_up_with_theory_grid() {
    let ds = fixture();
    let deps = Deps::new(1000, EulerMaclaurinParams::default()).unwrap();
    let e = empirical_triple(&ds, 6.0, 0.5).unwrap().to_grid(0.5).unwrap();
    let t = theory_grid(6.0, 0.5, ds.t(), 0.5, &deps).unwrap();
    assert_eq!(e.v1_axis, t.v1_axis);
    assert_eq!(e.mask, t.mask);
    let s = diff_stats(&e, &t).unwrap();
    let r = diff_stats(&t, &e).unwrap();
    assert_eq!(s.mean, -r.mean);
    assert_eq!((s.std, s.mean_abs, s.max_abs), (r.std, r.mean_abs, r.max_abs));
    assert!(s.std > 0.0);
}

#[test]
fn identical_grids_have_zero_difference() {
    let e = empirical_triple(&fixture(), 8.0, 0.25).unwrap().to_grid(0.5).unwrap();
    let s = diff_stats(&e, &e.clone()).unwrap();
    assert_eq!((s.mean, s.std, s.mean_abs, s.max_abs), (0.0, 0.0, 0.0, 0.0));
    assert_eq!(s.cells, e.mask.iter().filter(|m| !**m).count());
}

#[test]
fn mismatched_grids_refused() {
    let ds = fixture();
    let a = empirical_triple(&ds, 8.0, 0.25).unwrap().to_grid(0.5).unwrap();
    let b = empirical_triple(&ds, 8.0, 0.5).unwrap().to_grid(0.5).unwrap();
    let c = empirical_triple(&ds, 8.0, 0.25).unwrap().to_grid(1.0).unwrap();
    assert!(matches!(diff_stats(&a, &b), Err(Error::GridMismatch(_))));
    assert!(matches!(diff_stats(&a, &c), Err(Error::GridMismatch(_))));
}

#[test]
fn grid_survives_csv_round_trip() {
    let g = empirical_triple(&fixture(), 5.0, 0.25).unwrap().to_grid(0.5).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf, "empirical").unwrap();
    let back = CorrelationGrid::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, g);
}
