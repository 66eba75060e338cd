//! Zero tables and the empirical pair and triple histograms built from them.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{in_mask_band, CorrelationGrid, Normalization};

/// Ascending, strictly increasing positive ordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDataset {
    ordinates: Vec<f64>,
}

impl ZeroDataset {
    /// Sorts the input and rejects non-positive, non-finite and repeated values.
    pub fn new(mut ordinates: Vec<f64>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::EmptyFile);
        }
        if let Some(&bad) = ordinates.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::Domain(format!("ordinate {bad} is not a positive finite number")));
        }
        ordinates.sort_by(f64::total_cmp);
        if let Some(w) = ordinates.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate ordinate {}", w[0])));
        }
        Ok(ZeroDataset { ordinates })
    }

    pub fn from_reader<R: BufRead>(input: R) -> Result<Self> {
        let mut rows: Vec<(f64, usize)> = Vec::new();
        for (k, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = k + 1;
            let s = line.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let g: f64 = s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("'{s}' is not a number"),
            })?;
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("ordinate {s} is not a positive finite number"),
                });
            }
            rows.push((g, lineno));
        }
        if rows.is_empty() {
            return Err(Error::EmptyFile);
        }
        if rows.windows(2).any(|w| w[1].0 < w[0].0) {
            log::warn!("zero table is not sorted; sorting {} ordinates", rows.len());
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse {
                line: w[0].1.max(w[1].1),
                msg: format!("duplicate ordinate {} (also on line {})", w[0].0, w[0].1.min(w[1].1)),
            });
        }
        Ok(ZeroDataset {
            ordinates: rows.into_iter().map(|r| r.0).collect(),
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    /// The largest ordinate.
    pub fn t(&self) -> f64 {
        *self.ordinates.last().expect("dataset is never empty")
    }

    /// The first `n` ordinates.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyFile);
        }
        Ok(ZeroDataset {
            ordinates: self.ordinates[..n.min(self.count())].to_vec(),
        })
    }

    /// Mean zero density log(T / 2 pi) / 2 pi at the top of the table.
    fn density(&self) -> Result<f64> {
        let t = self.t();
        if t <= 2.0 * PI {
            return Err(Error::Domain(format!("T = {t} (need T > 2 pi to normalize)")));
        }
        Ok((t / (2.0 * PI)).ln() / (2.0 * PI))
    }
}

/// Reads a zero table: one ordinate per line, '#' comments and blank lines ignored.
pub fn load_zeros<P: AsRef<Path>>(path: P) -> Result<ZeroDataset> {
    let f = File::open(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    ZeroDataset::from_reader(BufReader::new(f))
}

/// Bins (edges[k], edges[k+1]] for k = 0 .. nbins, edges[k] = k * bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram1D {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// counts / (bin * norm_constant)
    pub values: Vec<f64>,
    pub norm_constant: f64,
    pub normalization: String,
}

impl Histogram1D {
    pub fn centres(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Row-major over (v1, v2) bins with v1 = gamma1 - gamma2 as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram2D {
    pub edges1: Vec<f64>,
    pub edges2: Vec<f64>,
    pub counts: Vec<u64>,
    /// counts / (bin^2 * norm_constant)
    pub values: Vec<f64>,
    pub norm_constant: f64,
    pub normalization: String,
    pub t: f64,
}

impl Histogram2D {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The histogram as a grid on bin centres with the given mask band. Masked
    /// cells are zeroed.
    pub fn to_grid(&self, mask_band: f64) -> Result<CorrelationGrid> {
        if !(mask_band > 0.0 && mask_band.is_finite()) {
            return Err(Error::Domain(format!("mask_band = {mask_band} (need > 0)")));
        }
        // same expression as the theory lattice so masks agree bit for bit
        let centres = |e: &[f64]| (0..e.len() - 1).map(|k| (k as f64 + 0.5) * e[1]).collect::<Vec<_>>();
        let a1 = centres(&self.edges1);
        let a2 = centres(&self.edges2);
        let n2 = a2.len();
        let mask: Vec<bool> = (0..a1.len() * n2)
            .map(|k| in_mask_band(a1[k / n2], a2[k % n2], mask_band))
            .collect();
        let values = self
            .values
            .iter()
            .zip(&mask)
            .map(|(&v, &m)| if m { 0.0 } else { v })
            .collect();
        let grid = CorrelationGrid {
            step: self.edges1[1] - self.edges1[0],
            v1_axis: a1,
            v2_axis: a2,
            values,
            mask,
            normalization: Normalization::PerTL3,
            t: self.t,
            mask_band,
            prime_limit: None,
        };
        grid.validate()?;
        Ok(grid)
    }
}

fn bin_edges(window: f64, bin: f64, t: f64) -> Result<Vec<f64>> {
    if !(bin > 0.0 && bin.is_finite()) {
        return Err(Error::Domain(format!("bin = {bin} (need > 0)")));
    }
    if !(window >= bin && window <= t) {
        return Err(Error::Domain(format!(
            "window = {window} (need bin <= window <= T = {t})"
        )));
    }
    let n = (window / bin + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * bin).collect())
}

/// Index k with edges[k] < d <= edges[k+1], if any.
fn locate(d: f64, edges: &[f64]) -> Option<usize> {
    let n = edges.len() - 1;
    if !(d > 0.0 && d <= edges[n]) {
        return None;
    }
    let bin = edges[1];
    let mut k = ((d / bin).ceil() as usize).saturating_sub(1).min(n - 1);
    while k > 0 && d <= edges[k] {
        k -= 1;
    }
    while k + 1 < n && d > edges[k + 1] {
        k += 1;
    }
    Some(k)
}

/// Ordered pairs gamma1 > gamma2 binned by gamma1 - gamma2 over (0, window],
/// divided by bin * T (L / 2 pi)^2.
pub fn empirical_two_point(ds: &ZeroDataset, window: f64, bin: f64) -> Result<Histogram1D> {
    let edges = bin_edges(window, bin, ds.t())?;
    let nb = edges.len() - 1;
    let top = edges[nb];
    let g = ds.ordinates();
    let counts = (0..g.len())
        .into_par_iter()
        .fold(
            || vec![0u64; nb],
            |mut c, i| {
                for j in (0..i).rev() {
                    let d = g[i] - g[j];
                    if d > top {
                        break;
                    }
                    if let Some(k) = locate(d, &edges) {
                        c[k] += 1;
                    }
                }
                c
            },
        )
        .reduce(|| vec![0u64; nb], add_counts);
    let rho = ds.density()?;
    let norm_constant = ds.t() * rho * rho;
    let values = counts.iter().map(|&c| c as f64 / (bin * norm_constant)).collect();
    Ok(Histogram1D {
        edges,
        counts,
        values,
        norm_constant,
        normalization: "count / (bin * T (L/2pi)^2)".into(),
    })
}

/// Ordered distinct triples with gamma1 - gamma2 and gamma1 - gamma3 both in
/// (0, window], binned on a square lattice and divided by bin^2 T (L / 2 pi)^3.
pub fn empirical_triple(ds: &ZeroDataset, window: f64, bin: f64) -> Result<Histogram2D> {
    let edges = bin_edges(window, bin, ds.t())?;
    let nb = edges.len() - 1;
    let top = edges[nb];
    let g = ds.ordinates();
    let counts = (0..g.len())
        .into_par_iter()
        .fold(
            || vec![0u64; nb * nb],
            |mut c, i| {
                // bins of every zero below gamma_i inside the window
                let below: Vec<usize> = (0..i)
                    .rev()
                    .map(|j| g[i] - g[j])
                    .take_while(|&d| d <= top)
                    .filter_map(|d| locate(d, &edges))
                    .collect();
                for (a, &k2) in below.iter().enumerate() {
                    for (b, &k3) in below.iter().enumerate() {
                        if a != b {
                            c[k2 * nb + k3] += 1;
                        }
                    }
                }
                c
            },
        )
        .reduce(|| vec![0u64; nb * nb], add_counts);
    let rho = ds.density()?;
    let norm_constant = ds.t() * rho.powi(3);
    let values = counts.iter().map(|&c| c as f64 / (bin * bin * norm_constant)).collect();
    Ok(Histogram2D {
        edges1: edges.clone(),
        edges2: edges,
        counts,
        values,
        norm_constant,
        normalization: "count / (bin^2 * T (L/2pi)^3)".into(),
        t: ds.t(),
    })
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Statistics of empirical - theory over unmasked cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub mean_abs: f64,
    pub max_abs: f64,
    pub cells: usize,
}

pub fn diff_stats(empirical: &CorrelationGrid, theory: &CorrelationGrid) -> Result<DiffStats> {
    empirical.check_compatible(theory)?;
    let d: Vec<f64> = empirical
        .values
        .iter()
        .zip(&theory.values)
        .zip(&empirical.mask)
        .filter(|(_, &m)| !m)
        .map(|((a, b), _)| a - b)
        .collect();
    if d.is_empty() {
        return Err(Error::GridMismatch("every cell is masked".into()));
    }
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(DiffStats {
        mean,
        std: var.sqrt(),
        mean_abs: d.iter().map(|x| x.abs()).sum::<f64>() / n,
        max_abs: d.iter().fold(0.0, |m, x| m.max(x.abs())),
        cells: d.len(),
    })
}
