//! Critical stretch for surface and interface instability of a magnetoelastic layer bonded to
//! a magnetoelastic half-space, under plane-strain compression or tension and a magnetic
//! induction normal to the free surface.
//!
//! Modules, bottom-up: [`kinematics`], [`constitutive`], [`moduli`], [`modes`],
//! [`dispersion`], [`cli`].

pub mod checks;
pub mod cli;
pub mod constitutive;
pub mod dispersion;
pub mod error;
pub mod kinematics;
pub mod moduli;
pub mod modes;

pub use error::{Error, Result};
