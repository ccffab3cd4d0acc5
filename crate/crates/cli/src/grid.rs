//! Two-dimensional membership slices.
//!
//! Cell `(row, col)` evaluates the base point with the x axis set to
//! `x.min + col * (x.max - x.min) / (x.steps - 1)` and the y axis likewise by
//! `row`. Rows are written in increasing y, columns in increasing x. Cell
//! values are region codes: 0 outside, 1 interior, 2 boundary,
//! 3 distinguished boundary, 4 tolerance band.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use symdisc::{in_gamma_recursive, Complex64, Region, SymPoint, ToleranceConfig};

/// Largest dimension accepted for grids.
pub const MAX_GRID_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    /// `s_j`, one-based.
    S(usize),
    P,
}

/// One real coordinate of a point: `s1.re`, `s2.im`, `p.re`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selector {
    pub coord: Coord,
    pub part: Part,
}

impl FromStr for Selector {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, part) = s
            .split_once('.')
            .with_context(|| format!("selector {s:?} needs a .re or .im suffix"))?;
        let part = match part {
            "re" => Part::Re,
            "im" => Part::Im,
            other => bail!("unknown part {other:?} in selector {s:?}"),
        };
        let coord = if name == "p" {
            Coord::P
        } else {
            name.strip_prefix('s')
                .and_then(|d| d.parse().ok())
                .filter(|&j| j >= 1)
                .map(Coord::S)
                .with_context(|| format!("selector {s:?} must name s<j> (j >= 1) or p"))?
        };
        Ok(Self { coord, part })
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = match self.part {
            Part::Re => "re",
            Part::Im => "im",
        };
        match self.coord {
            Coord::S(j) => write!(f, "s{j}.{part}"),
            Coord::P => write!(f, "p.{part}"),
        }
    }
}

impl Selector {
    /// Zero-based coordinate index in a point of dimension `n`.
    fn index(&self, n: usize) -> usize {
        match self.coord {
            Coord::S(j) => j - 1,
            Coord::P => n - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub selector: Selector,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl FromStr for Axis {
    type Err = anyhow::Error;

    /// `selector:min:max:steps`, e.g. `s1.re:-3:3:601`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        ensure!(parts.len() == 4, "axis {s:?} must look like s1.re:-3:3:601");
        Ok(Self {
            selector: parts[0].parse()?,
            min: parts[1].parse().with_context(|| format!("axis {s:?}: bad min"))?,
            max: parts[2].parse().with_context(|| format!("axis {s:?}: bad max"))?,
            steps: parts[3].parse().with_context(|| format!("axis {s:?}: bad steps"))?,
        })
    }
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        self.min + i as f64 * (self.max - self.min) / (self.steps - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub x: Axis,
    pub y: Axis,
    /// Values of all `n` coordinates; the two free axes overwrite theirs.
    pub fixed: Vec<[f64; 2]>,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            (1..=MAX_GRID_DIM).contains(&self.n),
            "grid dimension must be 1..={MAX_GRID_DIM}, got {}",
            self.n
        );
        ensure!(
            self.fixed.len() == self.n,
            "fixed values: expected {} coordinates, got {}",
            self.n,
            self.fixed.len()
        );
        ensure!(
            self.fixed.iter().flatten().all(|v| v.is_finite()),
            "fixed values must be finite"
        );
        for (name, axis) in [("x", &self.x), ("y", &self.y)] {
            ensure!(axis.steps >= 2, "{name} axis needs at least 2 steps");
            ensure!(
                axis.min.is_finite() && axis.max.is_finite(),
                "{name} axis range must be finite"
            );
            ensure!(
                matches!(axis.selector.coord, Coord::P) || axis.selector.index(self.n) + 1 < self.n,
                "{name} axis selector {} does not exist for n = {}",
                axis.selector,
                self.n
            );
        }
        ensure!(
            (self.x.selector.index(self.n), self.x.selector.part)
                != (self.y.selector.index(self.n), self.y.selector.part),
            "x and y axes must select different coordinates"
        );
        Ok(())
    }

    pub fn point(&self, row: usize, col: usize) -> Result<SymPoint> {
        let mut coords: Vec<Complex64> = self.fixed.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        for (axis, i) in [(&self.x, col), (&self.y, row)] {
            let c = &mut coords[axis.selector.index(self.n)];
            match axis.selector.part {
                Part::Re => c.re = axis.value(i),
                Part::Im => c.im = axis.value(i),
            }
        }
        Ok(SymPoint::new(coords)?)
    }
}

/// Region codes, `y.steps` rows of `x.steps` cells. Cells whose evaluation
/// fails are reported as tolerance band; the failure count is returned
/// alongside.
pub fn rasterize(spec: &GridSpec, tol: &ToleranceConfig) -> Result<(Vec<Vec<u8>>, usize)> {
    spec.validate()?;
    let rows: Vec<Result<(Vec<u8>, usize)>> = (0..spec.y.steps)
        .into_par_iter()
        .map(|row| {
            let mut failures = 0;
            let mut cells = Vec::with_capacity(spec.x.steps);
            for col in 0..spec.x.steps {
                let code = match in_gamma_recursive(&spec.point(row, col)?, tol) {
                    Ok(v) => v.region.code(),
                    Err(_) => {
                        failures += 1;
                        Region::ToleranceBand.code()
                    }
                };
                cells.push(code);
            }
            Ok((cells, failures))
        })
        .collect();
    let mut grid = Vec::with_capacity(rows.len());
    let mut failures = 0;
    for r in rows {
        let (cells, f) = r?;
        grid.push(cells);
        failures += f;
    }
    Ok((grid, failures))
}

pub fn write_csv(out: &mut impl Write, grid: &[Vec<u8>]) -> Result<()> {
    for row in grid {
        let line: Vec<String> = row.iter().map(u8::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Gray level per region code.
pub fn gray_level(code: u8) -> u8 {
    match code {
        0 => 255,
        1 => 128,
        2 => 64,
        3 => 0,
        _ => 192,
    }
}

/// Binary portable graymap (P5), one byte per cell, rows in grid order.
pub fn write_pgm(out: &mut impl Write, grid: &[Vec<u8>]) -> Result<()> {
    let height = grid.len();
    let width = grid.first().map_or(0, Vec::len);
    write!(out, "P5\n{width} {height}\n255\n")?;
    for row in grid {
        let bytes: Vec<u8> = row.iter().map(|&c| gray_level(c)).collect();
        out.write_all(&bytes)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(x: &str, y: &str, n: usize) -> GridSpec {
        GridSpec {
            n,
            x: x.parse().unwrap(),
            y: y.parse().unwrap(),
            fixed: vec![[0.0, 0.0]; n],
        }
    }

    #[test]
    fn selectors_parse() {
        let s: Selector = "s2.im".parse().unwrap();
        assert_eq!((s.coord, s.part), (Coord::S(2), Part::Im));
        assert_eq!(s.to_string(), "s2.im");
        let p: Selector = "p.re".parse().unwrap();
        assert_eq!(p.coord, Coord::P);
        assert!("s0.re".parse::<Selector>().is_err());
        assert!("q.re".parse::<Selector>().is_err());
        assert!("s1".parse::<Selector>().is_err());
    }

    #[test]
    fn validation() {
        assert!(spec("s1.re:-1:1:3", "p.re:-1:1:3", 2).validate().is_ok());
        assert!(spec("s1.re:-1:1:1", "p.re:-1:1:3", 2).validate().is_err());
        assert!(spec("s1.re:-1:1:3", "s1.re:-1:1:3", 2).validate().is_err());
        assert!(spec("s2.re:-1:1:3", "p.re:-1:1:3", 2).validate().is_err());
        assert!(spec("s1.re:-1:1:3", "p.re:-1:1:3", 5).validate().is_err());
        assert!(spec("s1.re:-1:inf:3", "p.re:-1:1:3", 2).validate().is_err());
        // For n = 1, p is the only coordinate; p.re and p.im are distinct axes.
        assert!(spec("p.re:-1:1:3", "p.im:-1:1:3", 1).validate().is_ok());
    }

    #[test]
    fn degenerate_two_by_two() {
        let (grid, failures) =
            rasterize(&spec("s1.re:-3:3:2", "p.re:0:0.5:2", 2), &ToleranceConfig::default()).unwrap();
        assert_eq!(failures, 0);
        assert_eq!(grid.len(), 2);
        assert!(grid.iter().all(|r| r.len() == 2 && r.iter().all(|&c| c <= 4)));
    }

    #[test]
    fn pgm_header_and_levels() {
        let mut buf = Vec::new();
        write_pgm(&mut buf, &[vec![0, 1, 2], vec![3, 4, 0]]).unwrap();
        assert!(buf.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(&buf[buf.len() - 6..], &[255, 128, 64, 0, 192, 255]);
    }
}
