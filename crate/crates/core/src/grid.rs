//! Natural-unit parameters, the periodic simulation grid and quadrature.
//!
//! Units throughout the kernel are ħ = m = |e| = 1 with the electron charge
//! e = −1. A positive `b_field` points along +z and gives ω_c = −eB/m = B.

use std::f64::consts::PI;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HBAR: f64 = 1.0;
pub const MASS: f64 = 1.0;
/// Electron charge in natural units.
pub const CHARGE: f64 = -1.0;

/// Signed field strength and the scales derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsParams {
    pub b_field: f64,
    /// Gaussian width of the Landau envelope, sqrt(4ħ/|eB|).
    pub rho_b: f64,
    /// Cyclotron angular velocity −eB/m.
    pub omega_c: f64,
    /// Larmor angular velocity ω_c/2.
    pub omega_l: f64,
}

impl PhysicsParams {
    pub fn new(b_field: f64) -> Result<Self> {
        if b_field == 0.0 {
            return Err(Error::ZeroField);
        }
        if !b_field.is_finite() {
            return Err(Error::NonFinite("b_field"));
        }
        let omega_c = -CHARGE * b_field / MASS;
        Ok(Self {
            b_field,
            rho_b: (4.0 * HBAR / (CHARGE * b_field).abs()).sqrt(),
            omega_c,
            omega_l: omega_c / 2.0,
        })
    }

    pub fn charge(&self) -> f64 {
        CHARGE
    }

    /// One cyclotron period 2π/|ω_c|.
    pub fn cyclotron_period(&self) -> f64 {
        2.0 * PI / self.omega_c.abs()
    }

    /// Symmetric-gauge vector potential A = (−B y/2, B x/2).
    #[inline]
    pub fn vector_potential(&self, x: f64, y: f64) -> (f64, f64) {
        (-0.5 * self.b_field * y, 0.5 * self.b_field * x)
    }
}

pub fn make_params(b_field: f64) -> Result<PhysicsParams> {
    PhysicsParams::new(b_field)
}

/// Periodic uniform grid centred on the origin.
///
/// Storage is row-major with y varying slowest: sample (i, j) lives at
/// `j * nx + i`. Wavenumbers follow the DFT layout with the Nyquist entry
/// on the negative side, `k[N/2] = -π N / L`.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dx: f64,
    pub dy: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
}

impl PartialEq for Grid2D {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

fn axis(n: usize, l: f64) -> (f64, Vec<f64>, Vec<f64>) {
    let d = l / n as f64;
    let coords = (0..n).map(|i| -0.5 * l + i as f64 * d).collect();
    let half = n / 2;
    let wavenumbers = (0..n)
        .map(|i| {
            let idx = if i < half { i as f64 } else { i as f64 - n as f64 };
            2.0 * PI * idx / l
        })
        .collect();
    (d, coords, wavenumbers)
}

impl Grid2D {
    pub const MIN_POINTS: usize = 16;

    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::with_min_points(nx, ny, lx, ly, Self::MIN_POINTS)
    }

    // Unit tests use tiny grids to check the DFT layout.
    pub(crate) fn with_min_points(
        nx: usize,
        ny: usize,
        lx: f64,
        ly: f64,
        min_points: usize,
    ) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n % 2 != 0 || n < min_points {
                return Err(Error::BadGrid(format!(
                    "{name} = {n} must be even and at least {min_points}"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::BadGrid(format!("{name} = {l} must be positive")));
            }
        }
        let (dx, x, kx) = axis(nx, lx);
        let (dy, y, ky) = axis(ny, ly);
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            dx,
            dy,
            x,
            y,
            kx,
            ky,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Largest representable wavenumbers, π N / L.
    pub fn k_max(&self) -> (f64, f64) {
        (
            PI * self.nx as f64 / self.lx,
            PI * self.ny as f64 / self.ly,
        )
    }

    /// Iterates `(flat index, x, y)` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.y.iter().enumerate().flat_map(move |(j, &y)| {
            self.x
                .iter()
                .enumerate()
                .map(move |(i, &x)| (j * self.nx + i, x, y))
        })
    }

    /// Samples `f(x, y)` on every grid point.
    pub fn sample<F: FnMut(f64, f64) -> f64>(self: &Arc<Self>, mut f: F) -> ScalarField {
        let values = self.points().map(|(_, x, y)| f(x, y)).collect();
        ScalarField {
            grid: Arc::clone(self),
            values,
        }
    }
}

pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Grid2D>> {
    Grid2D::new(nx, ny, lx, ly).map(Arc::new)
}

fn check_same(a: &Grid2D, b: &Grid2D) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Real samples on a grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Arc<Grid2D>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid2D>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for ScalarField {
    type Output = f64;
    fn index(&self, idx: usize) -> &f64 {
        &self.values[idx]
    }
}

/// Two real components per grid point (currents, gradients).
#[derive(Debug, Clone)]
pub struct VectorField2 {
    pub grid: Arc<Grid2D>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl VectorField2 {
    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

/// Complex wavefunction samples Ψ on a grid.
#[derive(Debug, Clone)]
pub struct WaveField {
    pub grid: Arc<Grid2D>,
    pub values: Vec<Complex64>,
}

impl WaveField {
    pub fn zeros(grid: &Arc<Grid2D>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: &Arc<Grid2D>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let field = Self {
            grid: Arc::clone(grid),
            values,
        };
        if !field.is_finite() {
            return Err(Error::NonFinite("wave field"));
        }
        Ok(field)
    }

    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(grid: &Arc<Grid2D>, mut f: F) -> Self {
        let values = grid.points().map(|(_, x, y)| f(x, y)).collect();
        Self {
            grid: Arc::clone(grid),
            values,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Σ|Ψ|² dx dy.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm and returns the norm it had before.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonFinite("normalize"));
        }
        let inv = 1.0 / norm;
        self.values.iter_mut().for_each(|v| *v *= inv);
        Ok(norm)
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// L2 distance sqrt(Σ|a − b|² dx dy).
    pub fn l2_distance(&self, other: &WaveField) -> Result<f64> {
        check_same(&self.grid, &other.grid)?;
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.grid.cell_area()).sqrt())
    }

    /// Largest |Ψ| on the outermost `width` rings of cells, relative to max |Ψ|.
    pub fn edge_ratio(&self, width: usize) -> f64 {
        let g = &self.grid;
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge: f64 = 0.0;
        for j in 0..g.ny {
            let y_edge = j < width || j >= g.ny - width;
            for i in 0..g.nx {
                if y_edge || i < width || i >= g.nx - width {
                    edge = edge.max(self.values[g.index(i, j)].norm());
                }
            }
        }
        edge / peak
    }
}

impl Index<usize> for WaveField {
    type Output = Complex64;
    fn index(&self, idx: usize) -> &Complex64 {
        &self.values[idx]
    }
}

impl IndexMut<usize> for WaveField {
    fn index_mut(&mut self, idx: usize) -> &mut Complex64 {
        &mut self.values[idx]
    }
}

/// Σ f dx dy. On a periodic uniform grid the trapezoid rule is this plain sum.
pub fn integrate(f: &ScalarField) -> Result<f64> {
    let sum = f.values.iter().sum::<f64>() * f.grid.cell_area();
    if sum.is_finite() {
        Ok(sum)
    } else {
        Err(Error::NonFinite("integrate"))
    }
}

/// Σ conj(a) b dx dy.
pub fn inner_product(a: &WaveField, b: &WaveField) -> Result<Complex64> {
    check_same(&a.grid, &b.grid)?;
    let sum: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| u.conj() * v)
        .sum();
    Ok(sum * a.grid.cell_area())
}

pub(crate) fn ensure_same(a: &Grid2D, b: &Grid2D) -> Result<()> {
    check_same(a, b)
}
