//! Spectral simulation of a non-relativistic electron in a uniform magnetic
//! field.
//!
//! Initial states are Landau-envelope vortices with a transverse momentum
//! kick ([`states`]); they are propagated with a Chebyshev expansion of the
//! time-evolution operator ([`propagator`]) of the symmetric-gauge grid
//! Hamiltonian ([`hamiltonian`]), and measured with the angular-momentum
//! ledger in [`observables`]. Everything is in natural units ħ = m = |e| = 1.

pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod observables;
pub mod propagator;
pub mod spectral;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use grid::{
    inner_product, integrate, make_grid, make_params, Grid2D, PhysicsParams, ScalarField,
    VectorField2, WaveField,
};
pub use hamiltonian::{
    apply_h, apply_h_scaled, coefficient_fields, spectral_bounds, Hamiltonian, HamiltonianFields,
    SpectralBounds,
};
pub use observables::{
    canonical_lz, centroid, classical_orbit, current_density, density, kinetic_lz,
    landau_expectations, ledger, ClassicalOrbit, ObservableRecord,
};
pub use propagator::{evolve, evolve_with, plan_step, step, ChebyshevPlan, EvolutionReport, Observer};
pub use spectral::Spectral;
pub use states::{build_component, landau_radial, superpose, BuildOptions, LandauSpec};

pub use num_complex::Complex64;
