//! Synthetic terrain and elevation-grid import.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Regular elevation grid. `elevations[row][col]` is the height in meters at
/// `(origin.0 + col*cell_size, origin.1 + row*cell_size)`.
#[derive(Debug, Clone)]
pub struct TerrainGrid {
    pub cell_size_m: f64,
    pub elevations: Vec<Vec<f64>>,
    pub origin: (f64, f64),
}

impl TerrainGrid {
    pub fn new(cell_size_m: f64, elevations: Vec<Vec<f64>>, origin: (f64, f64)) -> Result<Self> {
        if cell_size_m <= 0.0 {
            return Err(Error::InvalidParameter("cell_size must be positive".into()));
        }
        if elevations.is_empty() || elevations[0].is_empty() {
            return Err(Error::InvalidParameter("terrain grid is empty".into()));
        }
        let ncols = elevations[0].len();
        if elevations.iter().any(|row| row.len() != ncols) {
            return Err(Error::InvalidParameter("ragged terrain grid".into()));
        }
        if elevations.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter("non-finite elevation".into()));
        }
        Ok(Self {
            cell_size_m,
            elevations,
            origin,
        })
    }

    pub fn nrows(&self) -> usize {
        self.elevations.len()
    }

    pub fn ncols(&self) -> usize {
        self.elevations[0].len()
    }

    pub fn width_m(&self) -> f64 {
        (self.ncols() - 1) as f64 * self.cell_size_m
    }

    pub fn height_m(&self) -> f64 {
        (self.nrows() - 1) as f64 * self.cell_size_m
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (x0, y0) = self.origin;
        x >= x0 && y >= y0 && x <= x0 + self.width_m() && y <= y0 + self.height_m()
    }

    /// Bilinearly interpolated elevation at a point inside the grid.
    pub fn elevation_at(&self, x: f64, y: f64) -> Result<f64> {
        if !self.contains(x, y) {
            return Err(Error::OutOfBounds { x, y });
        }
        let fx = (x - self.origin.0) / self.cell_size_m;
        let fy = (y - self.origin.1) / self.cell_size_m;
        let c0 = (fx.floor() as usize).min(self.ncols() - 2);
        let r0 = (fy.floor() as usize).min(self.nrows() - 2);
        let tx = fx - c0 as f64;
        let ty = fy - r0 as f64;
        let z00 = self.elevations[r0][c0];
        let z01 = self.elevations[r0][c0 + 1];
        let z10 = self.elevations[r0 + 1][c0];
        let z11 = self.elevations[r0 + 1][c0 + 1];
        Ok(z00 * (1.0 - tx) * (1.0 - ty)
            + z01 * tx * (1.0 - ty)
            + z10 * (1.0 - tx) * ty
            + z11 * tx * ty)
    }

    pub fn sample_std(&self) -> f64 {
        let n = (self.nrows() * self.ncols()) as f64;
        let mean: f64 = self.elevations.iter().flatten().sum::<f64>() / n;
        let var: f64 = self
            .elevations
            .iter()
            .flatten()
            .map(|z| (z - mean) * (z - mean))
            .sum::<f64>()
            / n;
        var.sqrt()
    }

    /// Plain-text grid format: `ncols`, `nrows`, `cellsize`, `origin` header
    /// lines, then row-major elevations in meters.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "ncols {}", self.ncols()).unwrap();
        writeln!(out, "nrows {}", self.nrows()).unwrap();
        writeln!(out, "cellsize {}", self.cell_size_m).unwrap();
        writeln!(out, "origin {} {}", self.origin.0, self.origin.1).unwrap();
        for row in &self.elevations {
            let line: Vec<String> = row.iter().map(|z| format!("{z}")).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut header = |name: &str| -> Result<Vec<f64>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing header '{name}'")))?;
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or("");
            if key != name {
                return Err(Error::Parse(format!("expected header '{name}', got '{key}'")));
            }
            parts
                .map(|p| {
                    p.parse()
                        .map_err(|_| Error::Parse(format!("bad number '{p}' in header '{name}'")))
                })
                .collect()
        };
        let ncols = header("ncols")?[0] as usize;
        let nrows = header("nrows")?[0] as usize;
        let cellsize = header("cellsize")?[0];
        let origin_vals = header("origin")?;
        if origin_vals.len() != 2 {
            return Err(Error::Parse("origin header needs two values".into()));
        }
        let mut values: Vec<f64> = Vec::with_capacity(nrows * ncols);
        for line in lines {
            for p in line.split_whitespace() {
                values.push(
                    p.parse()
                        .map_err(|_| Error::Parse(format!("bad elevation '{p}'")))?,
                );
            }
        }
        if values.len() != nrows * ncols {
            return Err(Error::Parse(format!(
                "expected {} elevations, got {}",
                nrows * ncols,
                values.len()
            )));
        }
        let elevations = values.chunks(ncols).map(|c| c.to_vec()).collect();
        Self::new(cellsize, elevations, (origin_vals[0], origin_vals[1]))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

/// Base relief amplitude in meters at roughness 1.0.
const RELIEF_AT_FULL_ROUGHNESS_M: f64 = 18.0;

/// Diamond-square fractal terrain. Deterministic for a fixed seed, with
/// mean-removed elevations whose spread grows with `roughness`.
pub fn generate_terrain(
    roughness: f64,
    extent_m: f64,
    cell_size_m: f64,
    seed: u64,
) -> Result<TerrainGrid> {
    if !(0.0..=1.0).contains(&roughness) {
        return Err(Error::InvalidParameter(format!(
            "roughness {roughness} outside [0, 1]"
        )));
    }
    if cell_size_m <= 0.0 || extent_m < 2.0 * cell_size_m {
        return Err(Error::InvalidParameter(format!(
            "extent {extent_m} m must be at least two cells of {cell_size_m} m"
        )));
    }

    let cells = (extent_m / cell_size_m).ceil() as usize;
    let mut levels = 0usize;
    while (1usize << levels) < cells {
        levels += 1;
    }
    let n = (1usize << levels) + 1;

    let mut grid = vec![vec![0.0f64; n]; n];
    if roughness > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amp = roughness * RELIEF_AT_FULL_ROUGHNESS_M;
        for corner in [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)] {
            grid[corner.0][corner.1] = rng.gen_range(-amp..amp);
        }
        let mut step = n - 1;
        while step > 1 {
            let half = step / 2;
            // Diamond step: center of each square.
            for r in (half..n).step_by(step) {
                for c in (half..n).step_by(step) {
                    let avg = (grid[r - half][c - half]
                        + grid[r - half][c + half]
                        + grid[r + half][c - half]
                        + grid[r + half][c + half])
                        / 4.0;
                    grid[r][c] = avg + rng.gen_range(-amp..amp);
                }
            }
            // Square step: edge midpoints.
            for r in (0..n).step_by(half) {
                let c_start = if (r / half) % 2 == 0 { half } else { 0 };
                for c in (c_start..n).step_by(step) {
                    let mut sum = 0.0;
                    let mut cnt = 0.0;
                    if r >= half {
                        sum += grid[r - half][c];
                        cnt += 1.0;
                    }
                    if r + half < n {
                        sum += grid[r + half][c];
                        cnt += 1.0;
                    }
                    if c >= half {
                        sum += grid[r][c - half];
                        cnt += 1.0;
                    }
                    if c + half < n {
                        sum += grid[r][c + half];
                        cnt += 1.0;
                    }
                    grid[r][c] = sum / cnt + rng.gen_range(-amp..amp);
                }
            }
            amp *= 0.55;
            step = half;
        }
        let total: f64 = grid.iter().flatten().sum();
        let mean = total / (n * n) as f64;
        for row in grid.iter_mut() {
            for z in row.iter_mut() {
                *z -= mean;
            }
        }
    }

    // Crop to the requested extent.
    let keep = cells + 1;
    grid.truncate(keep.min(n));
    for row in grid.iter_mut() {
        row.truncate(keep.min(n));
    }
    TerrainGrid::new(cell_size_m, grid, (0.0, 0.0))
}
