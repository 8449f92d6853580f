//! Time sets `E` in `[0, 1]` of known dimension, held at finite dyadic
//! resolution.

use crate::boxdim::PointCloud;
use crate::error::{Error, Result};
use crate::paths::SamplePath;
use serde::{Deserialize, Serialize};

/// Cap on the number of cells a set construction may produce.
pub const DEFAULT_CELL_CAP: usize = 1 << 24;

/// A union of closed dyadic cells `[j 2^-level, (j+1) 2^-level]` in
/// `[0, 1]`, with the analytic dimension attached when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicTimeSet {
    pub level: u32,
    /// Sorted, strictly increasing cell indices in `[0, 2^level)`.
    pub cells: Vec<u64>,
    pub analytic_dim: Option<f64>,
}

impl DyadicTimeSet {
    pub fn new(level: u32, mut cells: Vec<u64>, analytic_dim: Option<f64>) -> Result<Self> {
        if level > 62 {
            return Err(Error::invalid("dyadic level too deep"));
        }
        cells.sort_unstable();
        cells.dedup();
        if cells.iter().any(|&j| j >= (1u64 << level)) {
            return Err(Error::invalid("cell index outside [0, 2^level)"));
        }
        if let Some(d) = analytic_dim {
            if !(0.0..=1.0).contains(&d) {
                return Err(Error::invalid("analytic dimension must lie in [0, 1]"));
            }
        }
        Ok(Self { level, cells, analytic_dim })
    }

    /// The full interval `[0, 1]`.
    pub fn full_interval() -> Self {
        Self { level: 0, cells: vec![0], analytic_dim: Some(1.0) }
    }

    pub fn cell_width(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    /// Whether `t` (in `[0, 1]`) lies in the closed cell union.
    pub fn contains(&self, t: f64) -> bool {
        if !(0.0..=1.0).contains(&t) {
            return false;
        }
        let w = self.cell_width();
        // t may sit on the shared boundary of cells j-1 and j
        let j = ((t / w).floor() as u64).min((1u64 << self.level) - 1);
        if self.cells.binary_search(&j).is_ok() {
            return true;
        }
        if j > 0 && t == j as f64 * w {
            return self.cells.binary_search(&(j - 1)).is_ok();
        }
        false
    }

    /// Check that every cell of `self` lies inside a cell of `coarser`.
    pub fn is_refinement_of(&self, coarser: &DyadicTimeSet) -> bool {
        if self.level < coarser.level {
            return false;
        }
        let shift = self.level - coarser.level;
        self.cells
            .iter()
            .all(|&j| coarser.cells.binary_search(&(j >> shift)).is_ok())
    }
}

/// Generalized Cantor construction: keep a digit subset at every level of
/// a base-`b` expansion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CantorSpec {
    pub base: u32,
    pub kept_digits: Vec<u32>,
    pub depth: u32,
}

impl CantorSpec {
    pub fn middle_thirds(depth: u32) -> Self {
        Self { base: 3, kept_digits: vec![0, 2], depth }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base < 2 {
            return Err(Error::invalid("Cantor base must be >= 2"));
        }
        if self.depth == 0 {
            return Err(Error::invalid("Cantor depth must be >= 1"));
        }
        let mut digits = self.kept_digits.clone();
        digits.sort_unstable();
        digits.dedup();
        if digits.len() != self.kept_digits.len() {
            return Err(Error::invalid("kept digits must be distinct"));
        }
        if digits.is_empty() || digits.iter().any(|&d| d >= self.base) {
            return Err(Error::invalid("kept digits must be a nonempty subset of 0..base"));
        }
        Ok(())
    }

    /// Self-similarity dimension `log m / log b`.
    pub fn analytic_dim(&self) -> f64 {
        (self.kept_digits.len() as f64).ln() / (self.base as f64).ln()
    }
}

/// Build the depth-`k` Cantor set and re-express it at the finest dyadic
/// level whose resolution is at least `base^-depth` (i.e. level
/// `floor(depth * log2 base)`), covering each base-`b` cell by the dyadic
/// cells it intersects. For power-of-two bases the representation is
/// exact and the cell count is exactly `m^depth`; otherwise the cover
/// merges or splits boundary cells by at most a factor of two.
pub fn build_cantor_set(spec: &CantorSpec) -> Result<DyadicTimeSet> {
    spec.validate()?;
    let m = spec.kept_digits.len() as f64;
    let count = m.powi(spec.depth as i32);
    if count > DEFAULT_CELL_CAP as f64 {
        return Err(Error::precondition(format!(
            "construction would produce {count:.3e} cells; cap is {DEFAULT_CELL_CAP}"
        )));
    }
    let level = (spec.depth as f64 * (spec.base as f64).log2()).floor() as u32;
    let level = level.min(62);

    let mut digits = spec.kept_digits.clone();
    digits.sort_unstable();

    // kept base-b cell indices at depth k, built digit by digit
    let mut kept: Vec<u64> = vec![0];
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(kept.len() * digits.len());
        for &j in &kept {
            for &d in &digits {
                next.push(j * spec.base as u64 + d as u64);
            }
        }
        kept = next;
    }

    let b_pow = (spec.base as f64).powi(spec.depth as i32);
    let scale = (1u64 << level) as f64;
    let mut cells = Vec::with_capacity(kept.len());
    if (spec.base & (spec.base - 1)) == 0 {
        // power-of-two base: exact re-indexing
        let b_bits = spec.base.trailing_zeros();
        let total_bits = b_bits * spec.depth;
        debug_assert_eq!(level, total_bits);
        cells = kept;
        let _ = total_bits;
    } else {
        for &j in &kept {
            let lo = j as f64 / b_pow;
            let hi = (j + 1) as f64 / b_pow;
            let first = (lo * scale).floor() as u64;
            // cells whose interior intersects (lo, hi)
            let last = ((hi * scale).ceil() as u64).saturating_sub(1).max(first);
            for c in first..=last {
                cells.push(c.min((1u64 << level) - 1));
            }
        }
    }
    DyadicTimeSet::new(level, cells, Some(spec.analytic_dim()))
}

/// Indices `i` of the uniform grid `t_i = i dt` on `[0, T]` whose scaled
/// time `t_i / T` lies in the cell union.
pub fn restrict_to_grid(set: &DyadicTimeSet, dt: f64, t_horizon: f64) -> Result<Vec<usize>> {
    if !(dt > 0.0 && t_horizon > 0.0) {
        return Err(Error::precondition("need dt > 0 and T > 0"));
    }
    let scaled_cell_width = set.cell_width() * t_horizon;
    if dt > scaled_cell_width * (1.0 + 1e-12) {
        return Err(Error::precondition(format!(
            "grid step {dt} undersamples cells of width {scaled_cell_width}"
        )));
    }
    let n = (t_horizon / dt).round() as usize;
    let mut out = Vec::new();
    for i in 0..=n {
        let frac = i as f64 * dt / t_horizon;
        if set.contains(frac.min(1.0)) {
            out.push(i);
        }
    }
    Ok(out)
}

/// The image multiset `{X(t_i) : i in indices}` as a point cloud.
pub fn image_points(path: &SamplePath, indices: &[usize]) -> Result<PointCloud> {
    let mut coords = Vec::with_capacity(indices.len() * path.dim);
    for &i in indices {
        if i >= path.len() {
            return Err(Error::precondition(format!(
                "index {i} outside the path range 0..{}",
                path.len()
            )));
        }
        coords.extend_from_slice(path.point(i));
    }
    Ok(PointCloud::new(path.dim, coords))
}
