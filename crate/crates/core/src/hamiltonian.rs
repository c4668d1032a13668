//! Grid Hamiltonian
//!
//! ```text
//! H = s2 (∂x² + ∂y²) + i s1x ∂x + i s1y ∂y + s0
//! ```
//!
//! with s2 = −ħ²/2m, s1x = −ħeBy/2m, s1y = ħeBx/2m and s0 = e²B²ρ²/8m, which
//! is (p − eA)²/2m in the symmetric gauge. Derivatives are taken in Fourier
//! space.
//!
//! Because s1x depends on y only and s1y on x only, the x-derivative terms of
//! every grid row share one Fourier multiplier −s2 kx² − s1x(y) kx, and
//! likewise for columns. [`apply_h`] exploits this to get away with one
//! forward and one inverse transform per axis.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ensure_same, Grid2D, PhysicsParams, ScalarField, WaveField, CHARGE, HBAR, MASS};
use crate::spectral::Spectral;

/// Coefficient fields of the grid Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianFields {
    pub s2: f64,
    pub s1x: ScalarField,
    pub s1y: ScalarField,
    pub s0: ScalarField,
}

pub fn coefficient_fields(grid: &Arc<Grid2D>, params: &PhysicsParams) -> HamiltonianFields {
    let (e, b, m) = (CHARGE, params.b_field, MASS);
    HamiltonianFields {
        s2: -HBAR * HBAR / (2.0 * m),
        s1x: grid.sample(|_, y| -HBAR * e * b * y / (2.0 * m)),
        s1y: grid.sample(|x, _| HBAR * e * b * x / (2.0 * m)),
        s0: grid.sample(|x, y| e * e * b * b * (x * x + y * y) / (8.0 * m)),
    }
}

impl HamiltonianFields {
    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.s0.grid
    }
}

/// Bounds on the spectrum representable on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub e_max: f64,
    pub e_min: f64,
    /// Half width (e_max − e_min)/2.
    pub a: f64,
    /// Centre (e_max + e_min)/2.
    pub b: f64,
}

impl SpectralBounds {
    pub fn from_range(e_min: f64, e_max: f64) -> Result<Self> {
        if !(e_max > e_min) || !e_max.is_finite() || !e_min.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "spectral range [{e_min}, {e_max}] is empty"
            )));
        }
        Ok(Self {
            e_max,
            e_min,
            a: 0.5 * (e_max - e_min),
            b: 0.5 * (e_max + e_min),
        })
    }
}

/// E_max and E_min of the grid operator. The first-derivative coefficients
/// take both signs, so their magnitudes enter the bound.
pub fn spectral_bounds(fields: &HamiltonianFields, grid: &Grid2D) -> Result<SpectralBounds> {
    let (kx, ky) = grid.k_max();
    let drift = fields.s1x.max_abs() * kx + fields.s1y.max_abs() * ky;
    let e_max = -fields.s2 * (kx * kx + ky * ky) + drift + fields.s0.max();
    let e_min = -drift + fields.s0.min();
    SpectralBounds::from_range(e_min, e_max)
}

/// The compiled operator: coefficient fields, their one-dimensional drift
/// profiles and spectral bounds.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub fields: HamiltonianFields,
    pub bounds: SpectralBounds,
    s1x_rows: Vec<f64>,
    s1y_cols: Vec<f64>,
}

impl Hamiltonian {
    /// Fails if s1x varies along x or s1y varies along y.
    pub fn new(fields: HamiltonianFields) -> Result<Self> {
        let grid = Arc::clone(fields.grid());
        ensure_same(&grid, &fields.s1x.grid)?;
        ensure_same(&grid, &fields.s1y.grid)?;
        let (nx, ny) = (grid.nx, grid.ny);
        let s1x_rows: Vec<f64> = (0..ny).map(|j| fields.s1x.values[j * nx]).collect();
        let s1y_cols: Vec<f64> = fields.s1y.values[..nx].to_vec();
        for j in 0..ny {
            for i in 0..nx {
                let idx = j * nx + i;
                if fields.s1x.values[idx] != s1x_rows[j] || fields.s1y.values[idx] != s1y_cols[i] {
                    return Err(Error::InvalidArgument(
                        "s1x must depend on y only and s1y on x only".into(),
                    ));
                }
            }
        }
        if !(fields.s2.is_finite() && fields.s0.is_finite()) {
            return Err(Error::NonFinite("hamiltonian fields"));
        }
        let bounds = spectral_bounds(&fields, &grid)?;
        Ok(Self {
            fields,
            bounds,
            s1x_rows,
            s1y_cols,
        })
    }

    pub fn for_params(grid: &Arc<Grid2D>, params: &PhysicsParams) -> Result<Self> {
        Self::new(coefficient_fields(grid, params))
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.fields.grid()
    }

    /// Computes HΨ and hands each sample to `sink(index, value)`.
    pub(crate) fn apply_with<F: FnMut(usize, Complex64)>(
        &self,
        psi: &[Complex64],
        ws: &mut Spectral,
        mut sink: F,
    ) {
        let s2 = self.fields.s2;
        let rows = &self.s1x_rows;
        let cols = &self.s1y_cols;
        // s2·(ik)² + i·s1·(ik) = −s2 k² − s1 k
        ws.filter_x(psi, |j, k| Complex64::new(-s2 * k * k - rows[j] * k, 0.0));
        ws.filter_y_transposed(psi, |i, k| Complex64::new(-s2 * k * k - cols[i] * k, 0.0));
        let grid = self.grid();
        let (nx, ny) = (grid.nx, grid.ny);
        let s0 = &self.fields.s0.values;
        for j in 0..ny {
            let base = j * nx;
            for i in 0..nx {
                let idx = base + i;
                sink(idx, ws.rows[idx] + ws.cols[i * ny + j] + s0[idx] * psi[idx]);
            }
        }
    }
}

/// HΨ.
pub fn apply_h(psi: &WaveField, ham: &Hamiltonian, ws: &mut Spectral) -> Result<WaveField> {
    ensure_same(&psi.grid, ham.grid())?;
    ensure_same(&psi.grid, ws.grid())?;
    let mut out = WaveField::zeros(&psi.grid);
    let mut finite = true;
    ham.apply_with(&psi.values, ws, |idx, v| {
        finite &= v.re.is_finite() && v.im.is_finite();
        out.values[idx] = v;
    });
    if !finite {
        return Err(Error::NonFinite("apply_h"));
    }
    Ok(out)
}

/// (HΨ − bΨ)/a, whose spectrum on the grid lies in [−1, 1].
pub fn apply_h_scaled(
    psi: &WaveField,
    ham: &Hamiltonian,
    bounds: &SpectralBounds,
    ws: &mut Spectral,
) -> Result<WaveField> {
    let mut out = apply_h(psi, ham, ws)?;
    let inv_a = 1.0 / bounds.a;
    for (o, p) in out.values.iter_mut().zip(&psi.values) {
        *o = (*o - bounds.b * p) * inv_a;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner_product, make_grid, make_params};
    use std::f64::consts::PI;

    #[test]
    fn coefficient_examples() {
        let g = make_grid(16, 16, 16.0, 16.0).unwrap();
        let f = coefficient_fields(&g, &make_params(1.0).unwrap());
        let origin = g.index(8, 8);
        assert_eq!((f.s1x[origin], f.s1y[origin], f.s0[origin]), (0.0, 0.0, 0.0));
        let at = g.index(10, 8); // (2, 0)
        assert_eq!((f.s1y[at], f.s0[at]), (-1.0, 0.5));
        let f = coefficient_fields(&g, &make_params(-1.0).unwrap());
        assert_eq!(f.s1x[g.index(8, 11)], -1.5); // (0, 3)
        assert_eq!(f.s2, -0.5);
    }

    #[test]
    fn free_particle_bounds() {
        let g = make_grid(256, 256, 32.0, 32.0).unwrap();
        let mut f = coefficient_fields(&g, &make_params(1.0).unwrap());
        f.s1x.values.fill(0.0);
        f.s1y.values.fill(0.0);
        f.s0.values.fill(0.0);
        let b = spectral_bounds(&f, &g).unwrap();
        assert!((b.e_max - 64.0 * PI * PI).abs() < 1e-9);
        assert_eq!(b.e_min, 0.0);
    }

    #[test]
    fn constant_field_annihilated_without_field() {
        let g = make_grid(32, 32, 8.0, 8.0).unwrap();
        let mut f = coefficient_fields(&g, &make_params(1.0).unwrap());
        f.s1x.values.fill(0.0);
        f.s1y.values.fill(0.0);
        f.s0.values.fill(0.0);
        let h = Hamiltonian::new(f).unwrap();
        let psi = WaveField::from_fn(&g, |_, _| Complex64::new(0.7, -0.2));
        let mut ws = Spectral::new(&g);
        let out = apply_h(&psi, &h, &mut ws).unwrap();
        assert!(out.max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_separable_drift() {
        let g = make_grid(16, 16, 8.0, 8.0).unwrap();
        let mut f = coefficient_fields(&g, &make_params(1.0).unwrap());
        f.s1x.values[3] += 1.0;
        assert!(matches!(Hamiltonian::new(f), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn scaled_operator_is_linear() {
        let g = make_grid(32, 32, 16.0, 16.0).unwrap();
        let h = Hamiltonian::for_params(&g, &make_params(0.8).unwrap()).unwrap();
        let mut ws = Spectral::new(&g);
        let psi = WaveField::from_fn(&g, |x, y| {
            Complex64::new((-(x * x + y * y) / 3.0).exp(), 0.1 * x * (-(x * x) / 2.0).exp())
        });
        let alpha = Complex64::new(0.3, -1.7);
        let mut scaled = psi.clone();
        scaled.scale(alpha);
        let lhs = apply_h_scaled(&scaled, &h, &h.bounds, &mut ws).unwrap();
        let mut rhs = apply_h_scaled(&psi, &h, &h.bounds, &mut ws).unwrap();
        rhs.scale(alpha);
        assert!(lhs.l2_distance(&rhs).unwrap() < 1e-13);
        let e = inner_product(&psi, &apply_h(&psi, &h, &mut ws).unwrap()).unwrap();
        assert!(e.im.abs() < 1e-12);
    }
}
