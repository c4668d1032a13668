//! Measured quantities: density, current, centroid, moments of inertia and
//! the angular-momentum ledger
//!
//! ```text
//! ⟨L_z^kin⟩ = ⟨L_z^can⟩ + L_z^cyclo + L_z^dia
//! L_z^cyclo = m ω_L ρ0²      L_z^dia = I′ ω_L      I = m ρ0² + I′
//! ```
//!
//! plus the closed-form classical orbit and Landau-level values used as
//! oracles. Expectation values are normalized by the current ‖Ψ‖², and all
//! derivatives are spectral.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid2D, PhysicsParams, ScalarField, VectorField2, WaveField, CHARGE, MASS};
use crate::propagator::LEAK_RING;
use crate::spectral::Spectral;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One time sample of the angular-momentum ledger, in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    /// Σ|Ψ|² dx dy.
    pub norm: f64,
    pub centroid: (f64, f64),
    /// |centroid|.
    pub rho0: f64,
    pub l_can: f64,
    pub l_kin: f64,
    /// m⟨ρ²⟩ about the grid origin.
    pub i_total: f64,
    /// m⟨ρ′²⟩ about the centroid.
    pub i_prime: f64,
    pub l_dia: f64,
    pub l_cyclo: f64,
    pub mu_dia: f64,
    pub orbit_centre: (f64, f64),
    /// |I − mρ0² − I′| / I.
    pub res_parallel_axis: f64,
    /// |L_kin − L_can − L_cyclo − L_dia| relative to the largest term.
    pub res_ledger: f64,
    /// Largest |Ψ| on the two outer cell rings relative to max |Ψ|.
    pub boundary_leak: f64,
}

pub fn density(psi: &WaveField) -> ScalarField {
    ScalarField {
        grid: Arc::clone(&psi.grid),
        values: psi.values.iter().map(|v| v.norm_sqr()).collect(),
    }
}

fn nonfinite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// j = Re(Ψ* (−iħ∇ − eA)Ψ)/m.
pub fn current_density(psi: &WaveField, params: &PhysicsParams) -> Result<VectorField2> {
    let mut ws = Spectral::new(&psi.grid);
    current_density_with(psi, params, &mut ws)
}

pub fn current_density_with(
    psi: &WaveField,
    params: &PhysicsParams,
    ws: &mut Spectral,
) -> Result<VectorField2> {
    let (dx, dy) = ws.gradient(psi)?;
    let g = &psi.grid;
    let mut jx = Vec::with_capacity(g.len());
    let mut jy = Vec::with_capacity(g.len());
    for (idx, x, y) in g.points() {
        let v = psi.values[idx];
        let (ax, ay) = params.vector_potential(x, y);
        let px = -I * dx[idx] - CHARGE * ax * v;
        let py = -I * dy[idx] - CHARGE * ay * v;
        jx.push((v.conj() * px).re / MASS);
        jy.push((v.conj() * py).re / MASS);
    }
    let field = VectorField2 {
        grid: Arc::clone(g),
        x: jx,
        y: jy,
    };
    if field.is_finite() {
        Ok(field)
    } else {
        Err(Error::NonFinite("current density"))
    }
}

/// (⟨x⟩, ⟨y⟩).
pub fn centroid(psi: &WaveField) -> (f64, f64) {
    let (mut n, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (idx, x, y) in psi.grid.points() {
        let d = psi.values[idx].norm_sqr();
        n += d;
        sx += x * d;
        sy += y * d;
    }
    (sx / n, sy / n)
}

/// ⟨x p_y − y p_x⟩ with canonical momenta, in units of ħ.
pub fn canonical_lz(psi: &WaveField) -> Result<f64> {
    let mut ws = Spectral::new(&psi.grid);
    let (dx, dy) = ws.gradient(psi)?;
    let (mut n, mut l) = (0.0, 0.0);
    for (idx, x, y) in psi.grid.points() {
        let v = psi.values[idx];
        n += v.norm_sqr();
        l += (v.conj() * (-I) * (x * dy[idx] - y * dx[idx])).re;
    }
    nonfinite(l / n, "canonical_lz")
}

/// ⟨x π_y − y π_x⟩ with kinetic momenta π = p − eA, in units of ħ. Equal to
/// ⟨L_z^can⟩ − (eB/2)⟨ρ²⟩.
pub fn kinetic_lz(psi: &WaveField, params: &PhysicsParams) -> Result<f64> {
    Ok(ledger(psi, params, 0.0)?.l_kin)
}

pub fn ledger(psi: &WaveField, params: &PhysicsParams, t: f64) -> Result<ObservableRecord> {
    let mut ws = Spectral::new(&psi.grid);
    ledger_with(psi, params, t, &mut ws)
}

pub fn ledger_with(
    psi: &WaveField,
    params: &PhysicsParams,
    t: f64,
    ws: &mut Spectral,
) -> Result<ObservableRecord> {
    let (dx, dy) = ws.gradient(psi)?;
    let g = &psi.grid;

    let (mut mass, mut sx, mut sy, mut srho2) = (0.0, 0.0, 0.0, 0.0);
    let (mut lcan, mut lkin, mut pix, mut piy) = (0.0, 0.0, 0.0, 0.0);
    for (idx, x, y) in g.points() {
        let v = psi.values[idx];
        let d = v.norm_sqr();
        let (ax, ay) = params.vector_potential(x, y);
        let px = -I * dx[idx];
        let py = -I * dy[idx];
        let kx = px - CHARGE * ax * v;
        let ky = py - CHARGE * ay * v;
        let c = v.conj();
        mass += d;
        sx += x * d;
        sy += y * d;
        srho2 += (x * x + y * y) * d;
        lcan += (c * (x * py - y * px)).re;
        lkin += (c * (x * ky - y * kx)).re;
        pix += (c * kx).re;
        piy += (c * ky).re;
    }
    let (cx, cy) = (sx / mass, sy / mass);
    let mut sprime = 0.0;
    for (idx, x, y) in g.points() {
        let (rx, ry) = (x - cx, y - cy);
        sprime += (rx * rx + ry * ry) * psi.values[idx].norm_sqr();
    }

    let norm = mass * g.cell_area();
    let rho0_sq = cx * cx + cy * cy;
    let i_total = MASS * srho2 / mass;
    let i_prime = MASS * sprime / mass;
    let l_can = lcan / mass;
    let l_kin = lkin / mass;
    let omega_l = params.omega_l;
    let l_dia = i_prime * omega_l;
    let l_cyclo = MASS * omega_l * rho0_sq;
    let eb = CHARGE * params.b_field;
    let orbit_centre = (cx + (piy / mass) / eb, cy - (pix / mass) / eb);

    let res_parallel_axis = if i_total > 0.0 {
        (i_total - MASS * rho0_sq - i_prime).abs() / i_total
    } else {
        0.0
    };
    let scale = l_kin.abs().max(l_can.abs() + l_cyclo.abs() + l_dia.abs());
    let res_ledger = if scale > 0.0 {
        (l_kin - l_can - l_cyclo - l_dia).abs() / scale
    } else {
        0.0
    };

    let record = ObservableRecord {
        t,
        norm,
        centroid: (cx, cy),
        rho0: rho0_sq.sqrt(),
        l_can,
        l_kin,
        i_total,
        i_prime,
        l_dia,
        l_cyclo,
        mu_dia: CHARGE * l_dia / (2.0 * MASS),
        orbit_centre,
        res_parallel_axis,
        res_ledger,
        boundary_leak: psi.edge_ratio(LEAK_RING),
    };
    let all = [
        norm, cx, cy, l_can, l_kin, i_total, i_prime, orbit_centre.0, orbit_centre.1,
    ];
    if all.iter().all(|v| v.is_finite()) {
        Ok(record)
    } else {
        Err(Error::NonFinite("ledger"))
    }
}

/// Closed-form centre-of-mass orbit of a packet launched from the origin with
/// momentum p_c along +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOrbit {
    /// Orbit radius |p_c/(eB)|.
    pub sigma: f64,
    /// p_c/(|e|B); the orbit centre sits at (0, y0).
    pub y0: f64,
    pub omega_c: f64,
    /// m ω_c σ², the cyclotron angular momentum about the orbit centre.
    pub l_cyclo_centred: f64,
}

impl ClassicalOrbit {
    /// y0 (sin ω_c t, 1 − cos ω_c t).
    pub fn position(&self, t: f64) -> (f64, f64) {
        let phase = self.omega_c * t;
        (self.y0 * phase.sin(), self.y0 * (1.0 - phase.cos()))
    }

    pub fn velocity(&self, t: f64) -> (f64, f64) {
        let phase = self.omega_c * t;
        (
            self.y0 * self.omega_c * phase.cos(),
            self.y0 * self.omega_c * phase.sin(),
        )
    }

    /// sqrt(2(1 − cos ω_c t)) σ.
    pub fn rho0_analytic(&self, t: f64) -> f64 {
        (2.0 * (1.0 - (self.omega_c * t).cos())).max(0.0).sqrt() * self.sigma
    }

    /// m ω_L ρ0², the cyclotron angular momentum about the lab z axis.
    pub fn l_cyclo_lab(&self, t: f64) -> f64 {
        let rho0 = self.rho0_analytic(t);
        MASS * 0.5 * self.omega_c * rho0 * rho0
    }
}

pub fn classical_orbit(p_c: f64, params: &PhysicsParams) -> Result<ClassicalOrbit> {
    let b = params.b_field;
    if b == 0.0 {
        return Err(Error::ZeroField);
    }
    let sigma = (p_c / (CHARGE * b)).abs();
    Ok(ClassicalOrbit {
        sigma,
        y0: p_c / (CHARGE.abs() * b),
        omega_c: params.omega_c,
        l_cyclo_centred: MASS * params.omega_c * sigma * sigma,
    })
}

/// Closed-form Landau values (⟨ρ′²⟩, L_z^dia/ħ) = ((2n+|ℓ|+1)ρ_B²/2, sign(B)(2n+|ℓ|+1)).
pub fn landau_expectations(n: u32, ell: i32, params: &PhysicsParams) -> (f64, f64) {
    let level = (2 * n + ell.unsigned_abs() + 1) as f64;
    (
        level * params.rho_b * params.rho_b / 2.0,
        params.b_field.signum() * level,
    )
}

fn bilinear(field: &ScalarField, x: f64, y: f64) -> f64 {
    let g: &Grid2D = &field.grid;
    let u = (x + 0.5 * g.lx) / g.dx;
    let v = (y + 0.5 * g.ly) / g.dy;
    let (fu, fv) = (u.floor(), v.floor());
    let (tu, tv) = (u - fu, v - fv);
    let wrap = |k: f64, n: usize| (k as i64).rem_euclid(n as i64) as usize;
    let (i0, j0) = (wrap(fu, g.nx), wrap(fv, g.ny));
    let (i1, j1) = ((i0 + 1) % g.nx, (j0 + 1) % g.ny);
    let f = |i, j| field.values[g.index(i, j)];
    (1.0 - tu) * (1.0 - tv) * f(i0, j0)
        + tu * (1.0 - tv) * f(i1, j0)
        + (1.0 - tu) * tv * f(i0, j1)
        + tu * tv * f(i1, j1)
}

/// Resamples `field` rotated counter-clockwise by `angle` about `from` and
/// moved so that `from` lands on `to`, using periodic bilinear interpolation.
pub fn rotate_translate(field: &ScalarField, angle: f64, from: (f64, f64), to: (f64, f64)) -> ScalarField {
    let (s, c) = angle.sin_cos();
    let grid = Arc::clone(&field.grid);
    grid.sample(|x, y| {
        let (rx, ry) = (x - to.0, y - to.1);
        // inverse rotation maps the target point back into the source frame
        let (sx, sy) = (c * rx + s * ry, -s * rx + c * ry);
        bilinear(field, sx + from.0, sy + from.1)
    })
}

/// ‖a − b‖₂ / ‖b‖₂ over the grid.
pub fn relative_l2(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let (num, den) = a
        .values
        .iter()
        .zip(&b.values)
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - y) * (x - y), d + y * y));
    Ok((num / den).sqrt())
}

/// Angle swept by the Larmor rotation in time t.
pub fn larmor_angle(params: &PhysicsParams, t: f64) -> f64 {
    (params.omega_l * t).rem_euclid(2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{integrate, make_grid, make_params};
    use crate::states::{build_component, superpose, BuildOptions, LandauSpec};

    fn fixture() -> (Arc<Grid2D>, PhysicsParams) {
        (make_grid(128, 128, 32.0, 32.0).unwrap(), make_params(1.0).unwrap())
    }

    fn state(n: u32, ell: i32, pc: f64) -> WaveField {
        let (g, p) = fixture();
        build_component(&LandauSpec::new(n, ell, pc), &g, &p, BuildOptions::default()).unwrap()
    }

    #[test]
    fn density_properties() {
        let (g, _) = fixture();
        let psi = state(0, 1, 0.0);
        assert!((integrate(&density(&psi)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(density(&psi)[g.index(64, 64)], 0.0);
    }

    #[test]
    fn canonical_values() {
        assert!((canonical_lz(&state(0, 2, 0.0)).unwrap() - 2.0).abs() < 1e-8);
        assert!((canonical_lz(&state(0, 1, 0.0)).unwrap() - 1.0).abs() < 1e-8);
        assert!((canonical_lz(&state(0, 1, 1.0)).unwrap() - 1.0).abs() < 1e-6);
        assert!((canonical_lz(&state(2, -3, 0.7)).unwrap() + 3.0).abs() < 1e-6);
    }

    #[test]
    fn kinetic_values() {
        let (_, p) = fixture();
        assert!((kinetic_lz(&state(0, 0, 0.0), &p).unwrap() - 1.0).abs() < 1e-8);
        assert!((kinetic_lz(&state(0, 1, 0.0), &p).unwrap() - 3.0).abs() < 1e-8);
        let (g, _) = fixture();
        let flipped = make_params(-1.0).unwrap();
        let psi = build_component(&LandauSpec::new(0, 0, 0.0), &g, &flipped, BuildOptions::default()).unwrap();
        assert!((kinetic_lz(&psi, &flipped).unwrap() + 1.0).abs() < 1e-8);
    }

    #[test]
    fn centroid_of_components() {
        for (n, l, pc) in [(0, 0, 0.0), (0, 1, 1.0), (1, -2, 1.5)] {
            let (x, y) = centroid(&state(n, l, pc));
            assert!(x.abs() < 1e-10 && y.abs() < 1e-10);
        }
    }

    #[test]
    fn real_gaussian_current_is_diamagnetic() {
        let (g, p) = fixture();
        let psi = state(0, 0, 0.0);
        let j = current_density(&psi, &p).unwrap();
        for (idx, x, y) in g.points() {
            let (ax, ay) = p.vector_potential(x, y);
            let d = psi.values[idx].norm_sqr();
            assert!((j.x[idx] - ax * d).abs() < 1e-12);
            assert!((j.y[idx] - ay * d).abs() < 1e-12);
        }
        let origin = g.index(64, 64);
        assert!(j.x[origin].abs() < 1e-15 && j.y[origin].abs() < 1e-15);
    }

    #[test]
    fn vortex_current_circulation() {
        // With the magnetic terms switched off the azimuthal current of an
        // ℓ = 1 state integrates to ⟨L_z⟩ = ∫ (x j_y − y j_x).
        let (g, _) = fixture();
        let p = make_params(1e-300).unwrap();
        let psi = state(0, 1, 0.0);
        let j = current_density(&psi, &p).unwrap();
        let circulation: f64 = g
            .points()
            .map(|(idx, x, y)| x * j.y[idx] - y * j.x[idx])
            .sum::<f64>()
            * g.cell_area();
        assert!((circulation - 1.0).abs() < 1e-10);
        // pure azimuthal flow
        for (idx, x, y) in g.points() {
            assert!((x * j.x[idx] + y * j.y[idx]).abs() < 1e-12);
        }
    }

    #[test]
    fn landau_closed_forms() {
        let p = make_params(1.0).unwrap();
        assert_eq!(landau_expectations(0, 0, &p), (2.0, 1.0));
        assert_eq!(landau_expectations(0, 1, &p), (4.0, 2.0));
        let m = make_params(-1.0).unwrap();
        assert_eq!(landau_expectations(1, -2, &m), (10.0, -5.0));
    }

    #[test]
    fn measured_landau_moments() {
        let (_, p) = fixture();
        for (n, l) in [(0u32, 0i32), (0, 1), (1, 2), (0, -1)] {
            for pc in [0.0, 0.8] {
                let r = ledger(&state(n, l, pc), &p, 0.0).unwrap();
                let (rho2, dia) = landau_expectations(n, l, &p);
                assert!((r.i_prime - rho2).abs() / rho2 < 1e-3);
                assert!((r.l_dia - dia).abs() / dia.abs() < 1e-3);
            }
        }
    }

    #[test]
    fn ledger_at_origin() {
        let (_, p) = fixture();
        let r = ledger(&state(0, 1, 1.0), &p, 0.0).unwrap();
        assert!(r.rho0 < 1e-10 && r.l_cyclo < 1e-20);
        assert!((r.l_kin - r.l_can - r.l_dia).abs() < 1e-9);
        assert!(r.res_parallel_axis < 1e-12 && r.res_ledger < 1e-12);
        // orbit centre (0, y0) with y0 = p_c/B
        assert!(r.orbit_centre.0.abs() < 1e-9 && (r.orbit_centre.1 - 1.0).abs() < 1e-9);
        assert_eq!(r.mu_dia, -r.l_dia / 2.0);
    }

    #[test]
    fn two_lobed_superposition() {
        let (g, p) = fixture();
        let psi = superpose(
            &[LandauSpec::new(0, 1, 1.0), LandauSpec::new(0, -1, 1.0)],
            &g,
            &p,
            BuildOptions::default(),
        )
        .unwrap();
        assert!(canonical_lz(&psi).unwrap().abs() < 1e-8);
        // |e^{iφ} + e^{−iφ}|² ∝ cos²φ vanishes on x = 0
        let d = density(&psi);
        let peak = d.max();
        for j in 0..g.ny {
            assert!(d[g.index(64, j)] < 1e-14 * peak);
        }
        let (cx, cy) = centroid(&psi);
        assert!(cx.abs() < 1e-10 && cy.abs() < 1e-10);
    }

    #[test]
    fn orbit_closed_forms() {
        let p = make_params(1.0).unwrap();
        let o = classical_orbit(0.0, &p).unwrap();
        assert_eq!(o.sigma, 0.0);
        assert_eq!(o.position(1.3), (0.0, 0.0));
        let o = classical_orbit(1.0, &p).unwrap();
        assert_eq!(o.sigma, 1.0);
        let (x, y) = o.position(PI);
        assert!(x.abs() < 1e-15 && (y - 2.0).abs() < 1e-15);
        assert_eq!(o.l_cyclo_centred, 1.0);
        assert_eq!(o.velocity(0.0), (1.0, 0.0));
        assert!((o.l_cyclo_lab(PI) - 2.0 * o.l_cyclo_centred).abs() < 1e-15);
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let (x, y) = o.position(t);
            assert!(x.hypot(y) <= 2.0 * o.sigma + 1e-15);
            assert!((x.hypot(y) - o.rho0_analytic(t)).abs() < 1e-12);
        }
        // B < 0 reverses the sense but keeps the launch velocity
        let o = classical_orbit(1.0, &make_params(-1.0).unwrap()).unwrap();
        assert_eq!(o.velocity(0.0), (1.0, 0.0));
        assert!(o.position(0.5).1 < 0.0);
    }

    #[test]
    fn rotate_translate_identity_and_quarter_turn() {
        let (g, _) = fixture();
        let f = g.sample(|x, y| (-(x - 1.0).powi(2) - y * y).exp());
        let same = rotate_translate(&f, 0.0, (0.0, 0.0), (0.0, 0.0));
        assert!(relative_l2(&same, &f).unwrap() < 1e-14);
        let turned = rotate_translate(&f, PI / 2.0, (0.0, 0.0), (0.0, 0.0));
        let want = g.sample(|x, y| (-x * x - (y - 1.0).powi(2)).exp());
        assert!(relative_l2(&turned, &want).unwrap() < 1e-12);
        let moved = rotate_translate(&f, 0.0, (0.0, 0.0), (0.5, -0.25));
        let want = g.sample(|x, y| (-(x - 1.5).powi(2) - (y + 0.25).powi(2)).exp());
        assert!(relative_l2(&moved, &want).unwrap() < 1e-12);
    }
}
