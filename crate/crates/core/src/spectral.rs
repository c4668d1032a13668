//! Fourier-space derivatives on a [`Grid2D`].
//!
//! Forward transforms are unnormalized; inverse transforms carry 1/N. The
//! two-dimensional transform is separable, so derivatives along x are taken
//! with row transforms and derivatives along y with row transforms of the
//! transposed field.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{ensure_same, Grid2D, WaveField};
use crate::error::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Per-caller transform plans and scratch buffers for one grid.
pub struct Spectral {
    grid: Arc<Grid2D>,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    pub(crate) rows: Vec<Complex64>,
    pub(crate) cols: Vec<Complex64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("nx", &self.grid.nx)
            .field("ny", &self.grid.ny)
            .finish()
    }
}

pub(crate) fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

impl Spectral {
    pub fn new(grid: &Arc<Grid2D>) -> Self {
        let mut planner = FftPlanner::new();
        let fwd_x = planner.plan_fft_forward(grid.nx);
        let inv_x = planner.plan_fft_inverse(grid.nx);
        let fwd_y = planner.plan_fft_forward(grid.ny);
        let inv_y = planner.plan_fft_inverse(grid.ny);
        let scratch_len = [&fwd_x, &inv_x, &fwd_y, &inv_y]
            .iter()
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Self {
            grid: Arc::clone(grid),
            fwd_x,
            inv_x,
            fwd_y,
            inv_y,
            scratch: vec![Complex64::default(); scratch_len],
            rows: vec![Complex64::default(); grid.len()],
            cols: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    /// Unnormalized 2D forward DFT in place.
    pub fn forward_2d(&mut self, data: &mut [Complex64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        self.fwd_x.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.cols, ny, nx);
        self.fwd_y.process_with_scratch(&mut self.cols, &mut self.scratch);
        transpose(&self.cols, data, nx, ny);
    }

    /// 2D inverse DFT in place, including the 1/(nx·ny) factor.
    pub fn inverse_2d(&mut self, data: &mut [Complex64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        self.inv_x.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.cols, ny, nx);
        self.inv_y.process_with_scratch(&mut self.cols, &mut self.scratch);
        transpose(&self.cols, data, nx, ny);
        let scale = 1.0 / (nx * ny) as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// Applies a Fourier multiplier along x to every row. `mult(j, kx)` may
    /// depend on the row index j (that is, on y). Result lands in `self.rows`.
    pub(crate) fn filter_x<M: Fn(usize, f64) -> Complex64>(&mut self, psi: &[Complex64], mult: M) {
        let nx = self.grid.nx;
        let scale = 1.0 / nx as f64;
        self.rows.copy_from_slice(psi);
        self.fwd_x.process_with_scratch(&mut self.rows, &mut self.scratch);
        for (j, row) in self.rows.chunks_exact_mut(nx).enumerate() {
            for (v, &k) in row.iter_mut().zip(&self.grid.kx) {
                *v *= mult(j, k) * scale;
            }
        }
        self.inv_x.process_with_scratch(&mut self.rows, &mut self.scratch);
    }

    /// Applies a Fourier multiplier along y to every column. `mult(i, ky)` may
    /// depend on the column index i (that is, on x). The result stays in
    /// transposed layout in `self.cols`: entry (i, j) at `i * ny + j`.
    pub(crate) fn filter_y_transposed<M: Fn(usize, f64) -> Complex64>(
        &mut self,
        psi: &[Complex64],
        mult: M,
    ) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let scale = 1.0 / ny as f64;
        transpose(psi, &mut self.cols, ny, nx);
        self.fwd_y.process_with_scratch(&mut self.cols, &mut self.scratch);
        for (i, col) in self.cols.chunks_exact_mut(ny).enumerate() {
            for (v, &k) in col.iter_mut().zip(&self.grid.ky) {
                *v *= mult(i, k) * scale;
            }
        }
        self.inv_y.process_with_scratch(&mut self.cols, &mut self.scratch);
    }

    /// Spectral gradient (∂xΨ, ∂yΨ), both in storage order.
    pub fn gradient(&mut self, psi: &WaveField) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        ensure_same(&self.grid, &psi.grid)?;
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        self.filter_x(&psi.values, |_, k| I * k);
        let dx = self.rows.clone();
        self.filter_y_transposed(&psi.values, |_, k| I * k);
        let mut dy = vec![Complex64::default(); psi.values.len()];
        transpose(&self.cols, &mut dy, nx, ny);
        Ok((dx, dy))
    }
}
