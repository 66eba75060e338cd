//! Sampled two-dimensional densities over (v1, v2) and their CSV form.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

/// How the stored values relate to the raw bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    /// Divided by T log^3(T / 2 pi).
    PerTL3,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::PerTL3 => "divided-by-TL3",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "divided-by-TL3" => Ok(Normalization::PerTL3),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown normalization '{other}'"),
            }),
        }
    }
}

/// Max, min and mean over unmasked cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridStats {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub cells: usize,
}

/// Whether (v1, v2) lies within `band` of one of v1 = 0, v2 = 0, v1 = v2.
/// Distances are coordinate differences.
pub fn in_mask_band(v1: f64, v2: f64, band: f64) -> bool {
    v1.abs() < band || v2.abs() < band || (v1 - v2).abs() < band
}

/// A density sampled on a uniform (v1, v2) lattice. `values` is row-major
/// with v1 as the slow index. Masked cells hold 0 and are never evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGrid {
    pub v1_axis: Vec<f64>,
    pub v2_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
    pub normalization: Normalization,
    pub t: f64,
    pub step: f64,
    pub mask_band: f64,
    /// Prime cutoff used by the theory side, if any.
    pub prime_limit: Option<u64>,
}

const AXIS_TOL: f64 = 1e-9;

fn check_axis(axis: &[f64], name: &str) -> Result<f64> {
    if axis.len() < 2 {
        return Ok(0.0);
    }
    let step = axis[1] - axis[0];
    for w in axis.windows(2) {
        let d = w[1] - w[0];
        if !(d > 0.0) || (d - step).abs() > AXIS_TOL * step.abs().max(1.0) {
            return Err(Error::GridMismatch(format!(
                "{name} axis is not strictly increasing with uniform step"
            )));
        }
    }
    Ok(step)
}

impl CorrelationGrid {
    /// Cell centres (k + 1/2) step for k = 0 .. floor(window / step).
    pub fn centred_axis(window: f64, step: f64) -> Vec<f64> {
        let n = (window / step + 1e-9).floor() as usize;
        (0..n).map(|k| (k as f64 + 0.5) * step).collect()
    }

    pub fn n1(&self) -> usize {
        self.v1_axis.len()
    }

    pub fn n2(&self) -> usize {
        self.v2_axis.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2() + j
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.index(i, j)]
    }

    pub fn masked(&self, i: usize, j: usize) -> bool {
        self.mask[self.index(i, j)]
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        check_axis(&self.v1_axis, "v1")?;
        check_axis(&self.v2_axis, "v2")?;
        let n = self.n1() * self.n2();
        if self.values.len() != n || self.mask.len() != n {
            return Err(Error::GridMismatch(format!(
                "{} values and {} mask cells for a {}x{} grid",
                self.values.len(),
                self.mask.len(),
                self.n1(),
                self.n2()
            )));
        }
        for (k, (&v, &m)) in self.values.iter().zip(&self.mask).enumerate() {
            if !m && !v.is_finite() {
                return Err(Error::NonFinite(format!("grid cell {k}")));
            }
        }
        Ok(())
    }

    /// Statistics over unmasked cells; None if every cell is masked.
    pub fn stats(&self) -> Option<GridStats> {
        let mut it = self.values.iter().zip(&self.mask).filter(|(_, &m)| !m).map(|(&v, _)| v);
        let first = it.next()?;
        let (mut max, mut min, mut sum, mut cells) = (first, first, first, 1usize);
        for v in it {
            max = max.max(v);
            min = min.min(v);
            sum += v;
            cells += 1;
        }
        Some(GridStats {
            max,
            min,
            mean: sum / cells as f64,
            cells,
        })
    }

    /// Mean over the unmasked cells of each v1 column; None where a column is fully masked.
    pub fn column_profile(&self) -> Vec<Option<f64>> {
        (0..self.n1())
            .map(|i| {
                let vals: Vec<f64> = (0..self.n2())
                    .filter(|&j| !self.masked(i, j))
                    .map(|j| self.value(i, j))
                    .collect();
                (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
            })
            .collect()
    }

    /// Errors unless both grids share axes, mask and normalization.
    pub fn check_compatible(&self, other: &CorrelationGrid) -> Result<()> {
        let same_axis = |a: &[f64], b: &[f64]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| (x - y).abs() <= AXIS_TOL * x.abs().max(1.0))
        };
        if !same_axis(&self.v1_axis, &other.v1_axis) || !same_axis(&self.v2_axis, &other.v2_axis) {
            return Err(Error::GridMismatch("axes differ".into()));
        }
        if self.mask != other.mask {
            return Err(Error::GridMismatch("masks differ".into()));
        }
        if self.normalization != other.normalization {
            return Err(Error::GridMismatch(format!(
                "normalizations differ ({} vs {})",
                self.normalization, other.normalization
            )));
        }
        Ok(())
    }

    /// Writes the grid as CSV with '#' header lines and a '# stats' trailer.
    pub fn write_csv<W: Write>(&self, out: &mut W, source: &str) -> Result<()> {
        writeln!(out, "# tricorr correlation grid")?;
        writeln!(out, "# source={source}")?;
        writeln!(out, "# T={}", self.t)?;
        writeln!(out, "# step={}", self.step)?;
        writeln!(out, "# mask_band={}", self.mask_band)?;
        writeln!(out, "# normalization={}", self.normalization)?;
        match self.prime_limit {
            Some(p) => writeln!(out, "# prime_limit={p}")?,
            None => writeln!(out, "# prime_limit=none")?,
        }
        writeln!(out, "# n1={} n2={}", self.n1(), self.n2())?;
        writeln!(out, "v1,v2,value,mask")?;
        for (i, &v1) in self.v1_axis.iter().enumerate() {
            for (j, &v2) in self.v2_axis.iter().enumerate() {
                let k = self.index(i, j);
                writeln!(out, "{v1},{v2},{},{}", self.values[k], self.mask[k] as u8)?;
            }
        }
        match self.stats() {
            Some(s) => writeln!(out, "# stats max={}, min={}, mean={}", s.max, s.min, s.mean)?,
            None => writeln!(out, "# stats max=nan, min=nan, mean=nan")?,
        }
        Ok(())
    }

    /// Reads a grid written by [`CorrelationGrid::write_csv`].
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut t = None;
        let mut step = None;
        let mut band = None;
        let mut norm = None;
        let mut prime_limit = None;
        let mut rows: Vec<(f64, f64, f64, bool)> = Vec::new();
        for (k, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = k + 1;
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let s = line.trim();
            if s.is_empty() || s == "v1,v2,value,mask" {
                continue;
            }
            if let Some(h) = s.strip_prefix('#') {
                let h = h.trim();
                if let Some((key, val)) = h.split_once('=') {
                    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| perr(format!("{key}: {e}")));
                    match key.trim() {
                        "T" => t = Some(num(val)?),
                        "step" => step = Some(num(val)?),
                        "mask_band" => band = Some(num(val)?),
                        "normalization" => {
                            norm = Some(
                                val.trim()
                                    .parse::<Normalization>()
                                    .map_err(|_| perr(format!("normalization '{val}'")))?,
                            )
                        }
                        "prime_limit" => {
                            prime_limit = match val.trim() {
                                "none" => None,
                                v => Some(v.parse::<u64>().map_err(|e| perr(format!("prime_limit: {e}")))?),
                            }
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let f: Vec<&str> = s.split(',').collect();
            if f.len() != 4 {
                return Err(perr(format!("expected 4 fields, found {}", f.len())));
            }
            let num = |v: &str| v.trim().parse::<f64>().map_err(|e| perr(format!("'{v}': {e}")));
            let mask = match f[3].trim() {
                "0" => false,
                "1" => true,
                m => return Err(perr(format!("mask '{m}'"))),
            };
            rows.push((num(f[0])?, num(f[1])?, num(f[2])?, mask));
        }
        if rows.is_empty() {
            return Err(Error::EmptyFile);
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            msg: format!("missing '# {what}=' header"),
        };
        let n2 = rows.iter().take_while(|r| r.0 == rows[0].0).count();
        if !rows.len().is_multiple_of(n2) {
            return Err(Error::GridMismatch("rows do not form a rectangle".into()));
        }
        let v2_axis: Vec<f64> = rows[..n2].iter().map(|r| r.1).collect();
        let v1_axis: Vec<f64> = rows.iter().step_by(n2).map(|r| r.0).collect();
        for (k, r) in rows.iter().enumerate() {
            if r.0 != v1_axis[k / n2] || r.1 != v2_axis[k % n2] {
                return Err(Error::GridMismatch(format!("row {k} is out of lattice order")));
            }
        }
        let grid = CorrelationGrid {
            v1_axis,
            v2_axis,
            values: rows.iter().map(|r| r.2).collect(),
            mask: rows.iter().map(|r| r.3).collect(),
            normalization: norm.ok_or_else(|| missing("normalization"))?,
            t: t.ok_or_else(|| missing("T"))?,
            step: step.ok_or_else(|| missing("step"))?,
            mask_band: band.ok_or_else(|| missing("mask_band"))?,
            prime_limit,
        };
        grid.validate()?;
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CorrelationGrid {
        let axis = CorrelationGrid::centred_axis(1.0, 0.25);
        let n = axis.len();
        let mut mask = Vec::new();
        let mut values = Vec::new();
        for &a in &axis {
            for &b in &axis {
                let m = in_mask_band(a, b, 0.3);
                mask.push(m);
                values.push(if m { 0.0 } else { a * 10.0 + b + 0.1 });
            }
        }
        assert_eq!(n, 4);
        CorrelationGrid {
            v1_axis: axis.clone(),
            v2_axis: axis,
            values,
            mask,
            normalization: Normalization::PerTL3,
            t: 75000.0,
            step: 0.25,
            mask_band: 0.3,
            prime_limit: Some(100_000),
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = small();
        let mut buf = Vec::new();
        g.write_csv(&mut buf, "test").unwrap();
        let back = CorrelationGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, g);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().last().unwrap().starts_with("# stats max="));
    }

    #[test]
    fn stats_skip_masked() {
        let g = small();
        let s = g.stats().unwrap();
        assert!(s.min > 0.0);
        assert_eq!(s.cells, g.mask.iter().filter(|m| !**m).count());
    }

    #[test]
    fn centred_axis_counts() {
        assert_eq!(CorrelationGrid::centred_axis(30.0, 0.25).len(), 120);
        assert_eq!(CorrelationGrid::centred_axis(30.0, 0.5).len(), 60);
    }

    #[test]
    fn mismatch_detected() {
        let g = small();
        let mut h = g.clone();
        h.normalization = Normalization::Raw;
        assert!(matches!(g.check_compatible(&h), Err(Error::GridMismatch(_))));
        let mut h = g.clone();
        h.mask[5] = !h.mask[5];
        assert!(g.check_compatible(&h).is_err());
    }

    #[test]
    fn bad_rows_rejected() {
        let text = "# normalization=raw\n# T=1\n# step=1\n# mask_band=0\n1,2,x,0\n";
        assert!(matches!(
            CorrelationGrid::read_csv(text.as_bytes()),
            Err(Error::Parse { line: 5, .. })
        ));
        assert_eq!(CorrelationGrid::read_csv("# only\n".as_bytes()), Err(Error::EmptyFile));
    }
}
