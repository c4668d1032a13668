//! Initial wavefunctions: Landau radial envelopes carrying a vortex phase
//! e^{iℓφ} and a transverse plane-wave factor e^{i p_c x / ħ}, and weighted
//! superpositions of them.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid2D, PhysicsParams, WaveField, HBAR};
use crate::specfun::{laguerre, log_factorial};

/// Largest tolerated deviation of the sampled norm from 1 before renormalizing.
pub const NORM_TOLERANCE: f64 = 1e-3;

/// One vortex component: radial index n, topological charge ℓ, transverse
/// momentum p_c along +x and a complex weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauSpec {
    pub n: u32,
    pub ell: i32,
    pub p_c: f64,
    pub weight: Complex64,
}

impl LandauSpec {
    pub fn new(n: u32, ell: i32, p_c: f64) -> Self {
        Self {
            n,
            ell,
            p_c,
            weight: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_weight(mut self, weight: Complex64) -> Self {
        self.weight = weight;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Skip the grid-resolution precondition.
    pub force: bool,
}

/// Landau radial profile u_{n,|ℓ|}(ρ), unit-normalized over the plane.
pub fn landau_radial(n: u32, ell_abs: u32, rho: f64, params: &PhysicsParams) -> f64 {
    let rho_b = params.rho_b;
    let log_norm = 0.5
        * (2f64.ln() + log_factorial(n as u64) - PI.ln() - log_factorial((n + ell_abs) as u64));
    let s = 2.0 * rho * rho / (rho_b * rho_b);
    let power = if ell_abs == 0 {
        1.0
    } else {
        (rho * 2f64.sqrt() / rho_b).powi(ell_abs as i32)
    };
    log_norm.exp() / rho_b * power * (-rho * rho / (rho_b * rho_b)).exp() * laguerre(n, ell_abs, s)
}

fn check_resolution(spec: &LandauSpec, grid: &Grid2D, params: &PhysicsParams) -> Result<()> {
    let limit = params.rho_b / 8.0;
    if grid.dx > limit || grid.dy > limit {
        return Err(Error::UnderResolved(format!(
            "spacing ({}, {}) exceeds rho_B/8 = {limit}",
            grid.dx, grid.dy
        )));
    }
    if spec.p_c != 0.0 {
        let wave = PI * HBAR / (4.0 * spec.p_c.abs());
        if grid.dx > wave {
            return Err(Error::UnderResolved(format!(
                "dx = {} exceeds a quarter wavelength pi/(4|p_c|) = {wave}",
                grid.dx
            )));
        }
    }
    Ok(())
}

fn sample_component(spec: &LandauSpec, grid: &Arc<Grid2D>, params: &PhysicsParams) -> WaveField {
    let ell_abs = spec.ell.unsigned_abs();
    let k = spec.p_c / HBAR;
    WaveField::from_fn(grid, |x, y| {
        let rho = x.hypot(y);
        let u = landau_radial(spec.n, ell_abs, rho, params);
        // The envelope vanishes at the core whenever ℓ ≠ 0.
        let vortex_phase = if rho == 0.0 { 0.0 } else { spec.ell as f64 * y.atan2(x) };
        Complex64::from_polar(u, vortex_phase + k * x)
    })
}

/// Samples one component on the grid and renormalizes it to unit norm.
/// The component's weight is not applied.
pub fn build_component(
    spec: &LandauSpec,
    grid: &Arc<Grid2D>,
    params: &PhysicsParams,
    opts: BuildOptions,
) -> Result<WaveField> {
    if !spec.p_c.is_finite() {
        return Err(Error::NonFinite("p_c"));
    }
    if !opts.force {
        check_resolution(spec, grid, params)?;
    }
    let mut psi = sample_component(spec, grid, params);
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::TruncatedState { norm });
    }
    psi.normalize()?;
    Ok(psi)
}

/// Weighted sum of built components, renormalized to unit norm.
pub fn superpose(
    components: &[LandauSpec],
    grid: &Arc<Grid2D>,
    params: &PhysicsParams,
    opts: BuildOptions,
) -> Result<WaveField> {
    if components.is_empty() {
        return Err(Error::EmptySuperposition);
    }
    if components
        .iter()
        .any(|c| !(c.weight.re.is_finite() && c.weight.im.is_finite()))
    {
        return Err(Error::NonFinite("component weight"));
    }
    if components.iter().all(|c| c.weight.norm_sqr() == 0.0) {
        return Err(Error::EmptySuperposition);
    }
    let mut total = WaveField::zeros(grid);
    for spec in components {
        let psi = build_component(spec, grid, params, opts)?;
        for (acc, v) in total.values.iter_mut().zip(&psi.values) {
            *acc += spec.weight * v;
        }
    }
    total.normalize()?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner_product, make_grid, make_params};

    fn radial_norm(n: u32, l: u32, params: &PhysicsParams) -> f64 {
        // Composite Simpson on [0, 40].
        let (a, b, m) = (0.0, 40.0, 20000);
        let h = (b - a) / m as f64;
        let f = |r: f64| {
            let u = landau_radial(n, l, r, params);
            u * u * 2.0 * PI * r
        };
        let mut s = f(a) + f(b);
        for i in 1..m {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn radial_values_and_normalization() {
        let p = make_params(1.0).unwrap();
        assert!((landau_radial(0, 0, 0.0, &p) - (2.0 / PI).sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(landau_radial(0, 1, 0.0, &p), 0.0);
        for (n, l) in [(0, 0), (0, 1), (1, 2), (3, 5)] {
            assert!((radial_norm(n, l, &p) - 1.0).abs() < 1e-8, "n={n} l={l}");
        }
    }

    #[test]
    fn orthogonal_vortex_sectors() {
        let g = make_grid(128, 128, 32.0, 32.0).unwrap();
        let p = make_params(1.0).unwrap();
        let a = build_component(&LandauSpec::new(0, 1, 0.0), &g, &p, BuildOptions::default()).unwrap();
        let b = build_component(&LandauSpec::new(0, 2, 0.0), &g, &p, BuildOptions::default()).unwrap();
        assert!(inner_product(&a, &b).unwrap().norm() < 1e-10);
    }

    #[test]
    fn resolution_and_truncation_errors() {
        let p = make_params(1.0).unwrap();
        let coarse = make_grid(64, 64, 32.0, 32.0).unwrap();
        let spec = LandauSpec::new(0, 1, 0.0);
        assert!(matches!(
            build_component(&spec, &coarse, &p, BuildOptions::default()),
            Err(Error::UnderResolved(_))
        ));
        let g = make_grid(128, 128, 32.0, 32.0).unwrap();
        assert!(matches!(
            build_component(&LandauSpec::new(0, 0, 20.0), &g, &p, BuildOptions::default()),
            Err(Error::UnderResolved(_))
        ));
        let tiny = make_grid(64, 64, 4.0, 4.0).unwrap();
        assert!(matches!(
            build_component(&spec, &tiny, &p, BuildOptions::default()),
            Err(Error::TruncatedState { .. })
        ));
        // Forcing bypasses only the resolution check.
        assert!(build_component(&spec, &coarse, &p, BuildOptions { force: true }).is_ok());
    }

    #[test]
    fn empty_superpositions_rejected() {
        let g = make_grid(128, 128, 32.0, 32.0).unwrap();
        let p = make_params(1.0).unwrap();
        let o = BuildOptions::default();
        assert_eq!(superpose(&[], &g, &p, o).unwrap_err(), Error::EmptySuperposition);
        let zero = LandauSpec::new(0, 0, 0.0).with_weight(Complex64::new(0.0, 0.0));
        assert_eq!(superpose(&[zero], &g, &p, o).unwrap_err(), Error::EmptySuperposition);
    }

    #[test]
    fn single_superposition_equals_component() {
        let g = make_grid(128, 128, 32.0, 32.0).unwrap();
        let p = make_params(1.0).unwrap();
        let spec = LandauSpec::new(1, -2, 0.5);
        let o = BuildOptions::default();
        let a = build_component(&spec, &g, &p, o).unwrap();
        let b = superpose(&[spec], &g, &p, o).unwrap();
        assert!(a.l2_distance(&b).unwrap() < 1e-14);
    }

    #[test]
    fn plane_wave_factor_is_pointwise() {
        let g = make_grid(128, 128, 32.0, 32.0).unwrap();
        let p = make_params(1.0).unwrap();
        let o = BuildOptions::default();
        let base = build_component(&LandauSpec::new(0, 1, 0.0), &g, &p, o).unwrap();
        let kicked = build_component(&LandauSpec::new(0, 1, 1.3), &g, &p, o).unwrap();
        for (idx, x, _) in g.points() {
            let want = base[idx] * Complex64::from_polar(1.0, 1.3 * x);
            assert!((kicked[idx] - want).norm() < 1e-15);
        }
    }
}
