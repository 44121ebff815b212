//! Two interacting spins in external fields.
//!
//! The state is a complex 4-vector in the product basis `↑↑, ↑↓, ↓↑, ↓↓`
//! and evolves under
//!
//! ```text
//! i dΨ/dt = [(ρ·G) + (Σ·F) + (J/2)(Σ·ρ)] Ψ
//! ```
//!
//! with `ρᵢ = σᵢ⊗I` acting on the first spin and `Σᵢ = I⊗σᵢ` on the second.
//! The crate provides closed-form propagators for the exactly solvable
//! configurations, the stationary spectrum for constant inputs, reductions to
//! the one-spin equation, resonance analysis for a common Rabi drive, and an
//! RK4 reference integrator used to check all of them.
//!
//! Everything is generic over the real scalar (`f64` or `f32`); the aliases
//! below fix it to `f64`.
//!
//! ```
//! use twospin::{propagate, FieldSpec, IntegratorConfig, Mode, Problem, RabiParams, ScalarProfile};
//!
//! let rabi = RabiParams::new(0.25, 1.0, 2.0).unwrap();
//! let p = Problem::new(FieldSpec::Rabi(rabi), FieldSpec::Rabi(rabi), ScalarProfile::Constant(0.5));
//! let r = propagate(&p, 0.0, 3.0, Mode::Auto, &IntegratorConfig::default()).unwrap();
//! assert_eq!(r.method.label(), "equal_rabi_composition");
//! assert!(r.unitarity_defect() < 1e-12);
//! ```

pub mod error;
pub mod hamiltonian;
pub mod model;
pub mod numlin;
pub mod oracle;
pub mod propagators;
pub mod reductions;
pub mod resonance;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{FieldSpec, Interp, RabiParams, SampledProfile, ScalarProfile, TwoSpinProblem};
pub use numlin::{CMat, CVec};
pub use oracle::IntegratorConfig;
pub use propagators::{propagate, Method, Mode};
pub use scalar::{Real, C};

/// `f64` complex scalar.
pub type Complex64 = C<f64>;
pub type Vec2 = numlin::CVec2<f64>;
pub type Vec4 = numlin::CVec4<f64>;
pub type Mat2 = numlin::CMat2<f64>;
pub type Mat4 = numlin::CMat4<f64>;
pub type Problem = TwoSpinProblem<f64>;
pub type Propagator = propagators::Propagator<f64>;
pub type SpectralResult = spectrum::SpectralResult<f64>;
pub type ScanResult = resonance::ScanResult<f64>;
