#![allow(dead_code)]

use std::sync::Arc;

use cyclovortex::{
    build_component, make_grid, make_params, superpose, BuildOptions, Complex64, Grid2D,
    LandauSpec, PhysicsParams, Spectral, WaveField,
};

/// 128² on a 32 × 32 box: dx = ρ_B/8 at |B| = 1, wide enough for one orbit.
pub fn small_grid() -> Arc<Grid2D> {
    make_grid(128, 128, 32.0, 32.0).unwrap()
}

pub fn params(b: f64) -> PhysicsParams {
    make_params(b).unwrap()
}

pub fn component(grid: &Arc<Grid2D>, p: &PhysicsParams, n: u32, ell: i32, pc: f64) -> WaveField {
    build_component(&LandauSpec::new(n, ell, pc), grid, p, BuildOptions::default()).unwrap()
}

pub fn superposition(grid: &Arc<Grid2D>, p: &PhysicsParams, parts: &[(u32, i32, f64)]) -> WaveField {
    let specs: Vec<_> = parts
        .iter()
        .map(|&(n, l, pc)| LandauSpec::new(n, l, pc).with_weight(Complex64::new(0.5f64.sqrt(), 0.0)))
        .collect();
    superpose(&specs, grid, p, BuildOptions::default()).unwrap()
}

/// L_zΨ = −i(x∂y − y∂x)Ψ.
pub fn apply_lz(psi: &WaveField) -> WaveField {
    let mut ws = Spectral::new(&psi.grid);
    let (dx, dy) = ws.gradient(psi).unwrap();
    let mut out = WaveField::zeros(&psi.grid);
    for (idx, x, y) in psi.grid.points() {
        out.values[idx] = Complex64::new(0.0, -1.0) * (x * dy[idx] - y * dx[idx]);
    }
    out
}

/// Band-limited field: a few low Fourier modes under a Gaussian window.
pub fn band_limited(grid: &Arc<Grid2D>, coeffs: &[(i32, i32, f64, f64)], width: f64) -> WaveField {
    let (lx, ly) = (grid.lx, grid.ly);
    let mut psi = WaveField::from_fn(grid, |x, y| {
        let envelope = (-(x * x + y * y) / (2.0 * width * width)).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        for &(mx, my, re, im) in coeffs {
            let phase = 2.0 * std::f64::consts::PI * (mx as f64 * x / lx + my as f64 * y / ly);
            sum += Complex64::new(re, im) * Complex64::from_polar(1.0, phase);
        }
        envelope * sum
    });
    psi.normalize().unwrap();
    psi
}
