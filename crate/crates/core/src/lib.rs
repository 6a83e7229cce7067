//! Decay of a repeatedly measured excited atomic level coupled to the
//! radiation reservoir of a hydrogen-like multipole transition.
//!
//! - [`reservoir`]: coupling spectra `R(ω)` and transition parameters.
//! - [`profile`]: the measurement-broadened line `F_τ`.
//! - [`decay`]: `Γ/Γ0` by quadrature and in closed form.
//! - [`oracle`]: the same ratio from discretised-mode dynamics.
//! - [`experiment`]: trapped-ion feasibility numbers.

pub mod decay;
pub mod experiment;
pub mod oracle;
pub mod profile;
pub mod quad;
pub mod reservoir;
pub mod specfun;
