//! Uniform periodic grids standing in for ℝ^N, and real grid functions.
//!
//! A [`GridSpec`] describes a centered box `[-L/2, L/2)^N` sampled with `n`
//! points per axis. Site `j` on an axis sits at `x_j = -L/2 + j h` with
//! `h = L/n`, so index `n/2` is the origin. Sites are stored row-major: in
//! two dimensions the flat index is `i1 * n + i2` with `x1 = x_{i1}`.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fraction of the half-width beyond which a site counts as "near the edge".
pub const EDGE_BAND_START: f64 = 0.4;

/// Edge-mass fraction above which truncation of ℝ^N to the box is flagged.
pub const EDGE_MASS_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridSpec {
    dim: usize,
    n: usize,
    box_length: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dim: usize,
    n: usize,
    box_length: f64,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;
    fn try_from(raw: RawGrid) -> Result<Self> {
        GridSpec::new(raw.dim, raw.n, raw.box_length)
    }
}

impl From<GridSpec> for RawGrid {
    fn from(g: GridSpec) -> Self {
        RawGrid { dim: g.dim, n: g.n, box_length: g.box_length }
    }
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 16")));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length {box_length} must be positive")));
        }
        Ok(Self { dim, n, box_length })
    }

    pub fn line(n: usize, box_length: f64) -> Result<Self> {
        Self::new(1, n, box_length)
    }

    pub fn square(n: usize, box_length: f64) -> Result<Self> {
        Self::new(2, n, box_length)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// h^N, the quadrature weight of one site.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// L^N.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dim as i32)
    }

    /// Number of sites, n^N.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of the origin.
    pub fn origin(&self) -> usize {
        let c = self.n / 2;
        if self.dim == 1 {
            c
        } else {
            c * self.n + c
        }
    }

    /// Coordinate of axis index `j`.
    pub fn axis_coord(&self, j: usize) -> f64 {
        -0.5 * self.box_length + j as f64 * self.spacing()
    }

    /// Signed integer offset of axis index `j` from the origin.
    pub fn axis_offset(&self, j: usize) -> i64 {
        j as i64 - (self.n / 2) as i64
    }

    /// Axis indices of a flat site index. The second entry is 0 when N = 1.
    pub fn axis_indices(&self, site: usize) -> [usize; 2] {
        if self.dim == 1 {
            [site, 0]
        } else {
            [site / self.n, site % self.n]
        }
    }

    /// Position of a site; only the first `dim` entries are meaningful.
    pub fn position(&self, site: usize) -> [f64; 2] {
        let [a, b] = self.axis_indices(site);
        if self.dim == 1 {
            [self.axis_coord(a), 0.0]
        } else {
            [self.axis_coord(a), self.axis_coord(b)]
        }
    }

    /// Squared distance to the origin in units of h², exact in integers.
    pub fn radius_sq_units(&self, site: usize) -> i64 {
        let [a, b] = self.axis_indices(site);
        let da = self.axis_offset(a);
        if self.dim == 1 {
            da * da
        } else {
            let db = self.axis_offset(b);
            da * da + db * db
        }
    }

    pub fn radius(&self, site: usize) -> f64 {
        (self.radius_sq_units(site) as f64).sqrt() * self.spacing()
    }

    /// Wavenumber of FFT bin `j` on one axis: (2π/L)·m with m ∈ {-n/2, …, n/2-1}.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let m = if j < self.n / 2 { j as i64 } else { j as i64 - self.n as i64 };
        2.0 * PI / self.box_length * m as f64
    }

    /// |k|² for every flat FFT bin, in the same row-major layout as sites.
    pub fn wavenumber_sq(&self) -> Vec<f64> {
        let k: Vec<f64> = (0..self.n).map(|j| self.wavenumber(j)).collect();
        if self.dim == 1 {
            k.iter().map(|x| x * x).collect()
        } else {
            let mut out = Vec::with_capacity(self.len());
            for a in &k {
                for b in &k {
                    out.push(a * a + b * b);
                }
            }
            out
        }
    }

    /// True for sites in the outer band `max_i |x_i| > 0.4 L`.
    pub fn in_edge_band(&self, site: usize) -> bool {
        let p = self.position(site);
        let lim = EDGE_BAND_START * self.box_length;
        p[..self.dim].iter().any(|x| x.abs() > lim)
    }

    pub fn with_resolution(&self, n: usize, box_length: f64) -> Result<Self> {
        Self::new(self.dim, n, box_length)
    }
}

/// A finite real value at every site of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: values.len() });
        }
        if let Some(site) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { site });
        }
        Ok(Self { grid, values })
    }

    /// Build without validation; callers guarantee length and finiteness.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    /// Samples `f` at every site; `f` receives the coordinates (length N).
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|site| {
                let p = grid.position(site);
                f(&p[..grid.dim()])
            })
            .collect();
        Self::new(grid, values)
    }

    /// Samples a radial profile `g(|x|)`.
    pub fn radial(grid: GridSpec, mut g: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|site| g(grid.radius(site))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> Field {
        Field::from_parts(self.grid, self.values.iter().map(|v| v.abs()).collect())
    }

    pub fn scaled(&self, factor: f64) -> Field {
        Field::from_parts(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Field) -> Result<Field> {
        self.same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + alpha * b).collect();
        Field::new(self.grid, values)
    }

    /// Discrete L² inner product h^N Σ u_j v_j.
    pub fn dot(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn norm_l2(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Fraction of the mass carried by the edge band (0 for the zero field).
    pub fn edge_mass_fraction(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v * v).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 =
            self.values.iter().enumerate().filter(|(site, _)| self.grid.in_edge_band(*site)).map(|(_, v)| v * v).sum();
        edge / total
    }

    pub fn truncation_suspect(&self) -> bool {
        self.edge_mass_fraction() > EDGE_MASS_LIMIT
    }

    /// Circular shift by whole sites along each axis.
    pub fn shifted(&self, shift: [i64; 2]) -> Field {
        let n = self.grid.n() as i64;
        let mut out = vec![0.0; self.len()];
        for (site, &v) in self.values.iter().enumerate() {
            let [a, b] = self.grid.axis_indices(site);
            let a2 = (a as i64 + shift[0]).rem_euclid(n) as usize;
            let dst = if self.grid.dim() == 1 {
                a2
            } else {
                a2 * self.grid.n() + (b as i64 + shift[1]).rem_euclid(n) as usize
            };
            out[dst] = v;
        }
        Field::from_parts(self.grid, out)
    }

    /// Site index of the largest value (first one on ties).
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub(crate) fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Writes the snapshot CSV: header `x,u` or `x1,x2,u`, one row per site.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        if self.grid.dim() == 1 {
            writeln!(w, "x,u")?;
        } else {
            writeln!(w, "x1,x2,u")?;
        }
        for (site, v) in self.values.iter().enumerate() {
            let p = self.grid.position(site);
            if self.grid.dim() == 1 {
                writeln!(w, "{:.17e},{:.17e}", p[0], v)?;
            } else {
                writeln!(w, "{:.17e},{:.17e},{:.17e}", p[0], p[1], v)?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// Reads a snapshot CSV back onto `grid`. Coordinates must match the grid.
    pub fn read_csv<R: BufRead>(grid: GridSpec, r: R) -> Result<Field> {
        let mut lines = r.lines();
        let header =
            lines.next().ok_or_else(|| Error::Csv("empty input".into()))?.map_err(|e| Error::Csv(e.to_string()))?;
        let expected = if grid.dim() == 1 { "x,u" } else { "x1,x2,u" };
        if header.trim() != expected {
            return Err(Error::Csv(format!("header `{header}`, expected `{expected}`")));
        }
        let tol = 1e-9 * grid.spacing();
        let mut values = Vec::with_capacity(grid.len());
        for (site, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Csv(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Csv(format!("row {}: {e}", site + 1)))?;
            if cols.len() != grid.dim() + 1 {
                return Err(Error::Csv(format!("row {} has {} columns", site + 1, cols.len())));
            }
            if site >= grid.len() {
                return Err(Error::LengthMismatch { expected: grid.len(), found: site + 1 });
            }
            let p = grid.position(site);
            if (0..grid.dim()).any(|d| (cols[d] - p[d]).abs() > tol) {
                return Err(Error::Csv(format!("row {} coordinates do not match the grid", site + 1)));
            }
            values.push(cols[grid.dim()]);
        }
        Field::new(grid, values)
    }
}
