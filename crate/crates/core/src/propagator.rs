//! Chebyshev expansion of exp(−iHΔt/ħ).
//!
//! With H̃ = (H − b)/a the one-step propagator is
//! `exp(−ibΔt/ħ) Σ_q α_q T_q(H̃)` where `α_0 = J_0(aΔt/ħ)` and
//! `α_q = 2(−i)^q J_q(aΔt/ħ)`. The T_q(H̃)Ψ come from the three-term
//! recurrence `T_q = 2H̃T_{q−1} − T_{q−2}`.

use std::f64::consts::E;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ensure_same, PhysicsParams, WaveField, HBAR};
use crate::hamiltonian::{Hamiltonian, SpectralBounds};
use crate::observables::{self, ObservableRecord};
use crate::spectral::Spectral;
use crate::specfun::bessel_j_sequence;

/// Initial safety margin added to e·aΔt/(2ħ).
pub const ORDER_MARGIN: usize = 40;
/// Increment used when the tail is not yet negligible.
pub const ORDER_STEP: usize = 8;
/// Largest acceptable |α_M| and |α_{M−1}|.
pub const TAIL_TOLERANCE: f64 = 1e-15;

/// Boundary ring width (cells) watched during evolution.
pub const LEAK_RING: usize = 2;
/// Largest tolerated edge amplitude relative to max |Ψ|.
pub const LEAK_LIMIT: f64 = 1e-6;
/// Largest tolerated |‖Ψ‖² − 1|.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevPlan {
    pub dt: f64,
    pub bounds: SpectralBounds,
    pub m_order: usize,
    pub alphas: Vec<Complex64>,
    /// exp(−ibΔt/ħ).
    pub phase: Complex64,
}

impl ChebyshevPlan {
    /// |α_M|, the truncation-error estimate.
    pub fn tail(&self) -> f64 {
        self.alphas[self.m_order].norm()
    }
}

fn coefficients(order: usize, arg: f64) -> Vec<Complex64> {
    let bessel = bessel_j_sequence(order, arg);
    let mut minus_i_pow = Complex64::new(1.0, 0.0);
    bessel
        .values
        .iter()
        .enumerate()
        .map(|(q, &j)| {
            let c = if q == 0 { 1.0 } else { 2.0 } * j * minus_i_pow;
            minus_i_pow *= Complex64::new(0.0, -1.0);
            c
        })
        .collect()
}

/// Chooses the truncation order and expansion coefficients for one step.
pub fn plan_step(bounds: SpectralBounds, dt: f64) -> Result<ChebyshevPlan> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    let arg = bounds.a * dt / HBAR;
    let initial = (E * arg / 2.0).ceil() as usize + ORDER_MARGIN;
    let cap = 10 * initial;
    let mut order = initial;
    loop {
        let alphas = coefficients(order, arg);
        let tail = alphas[order].norm();
        if tail < TAIL_TOLERANCE && alphas[order - 1].norm() < TAIL_TOLERANCE {
            return Ok(ChebyshevPlan {
                dt,
                bounds,
                m_order: order,
                alphas,
                phase: Complex64::from_polar(1.0, -bounds.b * dt / HBAR),
            });
        }
        if order + ORDER_STEP > cap {
            return Err(Error::OrderCapExceeded { cap, tail });
        }
        order += ORDER_STEP;
    }
}

/// Advances Ψ by one planned step. Holds T_{q−2}, T_{q−1} and the running
/// sum; the input is left untouched.
pub fn step(
    psi: &WaveField,
    plan: &ChebyshevPlan,
    ham: &Hamiltonian,
    ws: &mut Spectral,
) -> Result<WaveField> {
    ensure_same(&psi.grid, ham.grid())?;
    ensure_same(&psi.grid, ws.grid())?;
    let (a, b) = (plan.bounds.a, plan.bounds.b);
    let inv_a = 1.0 / a;

    let mut older = psi.values.clone();
    let mut acc: Vec<Complex64> = older.iter().map(|v| plan.alphas[0] * v).collect();
    let mut newer = vec![Complex64::default(); older.len()];

    // T_1 = H̃ T_0
    let alpha = plan.alphas[1];
    ham.apply_with(&older, ws, |idx, h| {
        let t = (h - b * older[idx]) * inv_a;
        newer[idx] = t;
        acc[idx] += alpha * t;
    });

    for q in 2..=plan.m_order {
        let alpha = plan.alphas[q];
        let mut finite = true;
        // T_q = 2 H̃ T_{q−1} − T_{q−2}, written over T_{q−2}.
        ham.apply_with(&newer, ws, |idx, h| {
            let t = 2.0 * (h - b * newer[idx]) * inv_a - older[idx];
            finite &= t.re.is_finite() && t.im.is_finite();
            older[idx] = t;
            acc[idx] += alpha * t;
        });
        if !finite {
            return Err(Error::NonFinite("chebyshev recurrence"));
        }
        std::mem::swap(&mut older, &mut newer);
    }

    acc.iter_mut().for_each(|v| *v *= plan.phase);
    Ok(WaveField {
        grid: psi.grid.clone(),
        values: acc,
    })
}

/// Outcome of [`evolve`]: the recorded ledger plus health maxima.
#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub records: Vec<ObservableRecord>,
    pub boundary_leak_max: f64,
    pub norm_drift_max: f64,
    pub plan: ChebyshevPlan,
    pub final_state: WaveField,
}

/// Receives every observation made during [`evolve_with`]. Returning an error
/// aborts the evolution.
pub trait Observer {
    fn observe(&mut self, step: usize, record: &ObservableRecord, psi: &WaveField) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(usize, &ObservableRecord, &WaveField) -> Result<()>,
{
    fn observe(&mut self, step: usize, record: &ObservableRecord, psi: &WaveField) -> Result<()> {
        self(step, record, psi)
    }
}

struct Silent;

impl Observer for Silent {
    fn observe(&mut self, _: usize, _: &ObservableRecord, _: &WaveField) -> Result<()> {
        Ok(())
    }
}

/// Evolves `psi0` for `n_steps` steps of length `dt`.
///
/// A record is taken at step 0, at every multiple of `observe_every` and at
/// the final step. Each observation checks the boundary ring and the norm and
/// aborts with [`Error::BoundaryLeak`] or [`Error::NormDrift`].
pub fn evolve(
    psi0: &WaveField,
    ham: &Hamiltonian,
    params: &PhysicsParams,
    dt: f64,
    n_steps: usize,
    observe_every: usize,
) -> Result<EvolutionReport> {
    evolve_with(psi0, ham, params, dt, n_steps, observe_every, &mut Silent)
}

pub fn evolve_with<O: Observer + ?Sized>(
    psi0: &WaveField,
    ham: &Hamiltonian,
    params: &PhysicsParams,
    dt: f64,
    n_steps: usize,
    observe_every: usize,
    observer: &mut O,
) -> Result<EvolutionReport> {
    if n_steps == 0 || observe_every == 0 {
        return Err(Error::InvalidArgument(
            "n_steps and observe_every must be at least 1".into(),
        ));
    }
    let plan = plan_step(ham.bounds, dt)?;
    let mut ws = Spectral::new(&psi0.grid);
    let mut psi = psi0.clone();
    let mut records = Vec::new();
    let mut leak_max: f64 = 0.0;
    let mut drift_max: f64 = 0.0;

    for n in 0..=n_steps {
        if n > 0 {
            psi = step(&psi, &plan, ham, &mut ws)?;
        }
        if n % observe_every == 0 || n == n_steps {
            let t = n as f64 * dt;
            let record = observables::ledger_with(&psi, params, t, &mut ws)?;
            leak_max = leak_max.max(record.boundary_leak);
            let drift = (record.norm - 1.0).abs();
            drift_max = drift_max.max(drift);
            observer.observe(n, &record, &psi)?;
            records.push(record);
            if record.boundary_leak > LEAK_LIMIT {
                return Err(Error::BoundaryLeak {
                    step: n,
                    t,
                    ratio: record.boundary_leak,
                    limit: LEAK_LIMIT,
                });
            }
            if drift > NORM_DRIFT_LIMIT {
                return Err(Error::NormDrift {
                    step: n,
                    t,
                    drift,
                    limit: NORM_DRIFT_LIMIT,
                });
            }
        }
    }

    Ok(EvolutionReport {
        records,
        boundary_leak_max: leak_max,
        norm_drift_max: drift_max,
        plan,
        final_state: psi,
    })
}
