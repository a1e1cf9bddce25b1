//! Unitary evolution of a d-level quantum system under time-dependent
//! Hamiltonians, expressed in the generalized Gell-Mann (Bloch-like)
//! coordinates.
//!
//! The crate is organised bottom-up:
//!
//! * [`gellmann`] builds the SU(d) generators and their structure constants
//!   and converts operators to and from Bloch coordinates.
//! * [`su_exp`] evaluates the characteristic function `K_d`, its gradient and
//!   the exponential map `exp{-i sqrt(d/2) r.Λ}` (closed form for d = 2, 3,
//!   spectral otherwise).
//! * [`qubit`] holds everything specific to d = 2: the quaternion ODE, the
//!   `n(t)` flow, the commuting and constant-`J` closed forms.
//! * [`qudit`] integrates the general-d Bloch ODE and monitors its first
//!   integrals.
//! * [`oracle`] is the brute-force stepwise-exponential reference propagator.

pub mod error;
pub mod gellmann;
pub mod hamiltonian;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod qubit;
pub mod qudit;
pub mod spline;
pub mod su_exp;
pub mod timefn;
pub mod trajectory;

pub use error::{QevoError, Result};
pub use gellmann::{BlochDecomposition, GellMannBasis, StructureConstants};
pub use hamiltonian::{BlochHamiltonian, HamiltonianSpec, QuditHamiltonianSpec};
pub use linalg::CMatrix;
pub use oracle::{OracleResult, UnitaryDistance};
pub use qubit::{ClassCertificate, ClassKind, QuaternionState, SphericalTrack};
pub use qudit::{FirstIntegralResiduals, QuditPropagatorCoords};
pub use timefn::TimeFn;
pub use trajectory::Trajectory;

pub use num_complex::Complex64;
