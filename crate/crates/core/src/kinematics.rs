//! Dimensionless parameters, plane-strain kinematics and invariants of the base state.
//!
//! Units: substrate shear modulus, vacuum permeability and upper-layer thickness are all 1.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thickness of the upper layer; every length is measured in units of it.
pub const THICKNESS: f64 = 1.0;

/// Mooney-Rivlin magnetoelastic constants of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub mu: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl MaterialParams {
    pub fn new(mu: f64, gamma: f64, alpha: f64, beta: f64) -> Result<Self> {
        let p = MaterialParams { mu, gamma, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// Vacuum-like magnetic response, `(alpha, beta) = (0, 1)`.
    pub fn non_magnetizable(mu: f64) -> Self {
        MaterialParams { mu, gamma: 1.0, alpha: 0.0, beta: 1.0 }
    }

    pub fn magnetoelastic(mu: f64, alpha: f64, beta: f64) -> Self {
        MaterialParams { mu, gamma: 1.0, alpha, beta }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::Domain(format!("shear modulus must be positive, got {}", self.mu)));
        }
        if !(-1.0..=1.0).contains(&self.gamma) {
            return Err(Error::Domain(format!("gamma must lie in [-1, 1], got {}", self.gamma)));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::Domain("non-finite magnetoelastic coupling".into()));
        }
        Ok(())
    }

    /// Conditions for real mode roots at stretch `lambda` and `I4`.
    pub fn check_admissible(&self, lambda: f64, i4: f64) -> Result<()> {
        let l2 = lambda * lambda;
        let num = self.alpha * l2 + self.beta;
        let den = self.alpha + self.alpha * self.beta * i4 + self.beta * l2;
        if num > 0.0 && den > 0.0 {
            Ok(())
        } else {
            Err(Error::AdmissibilityViolated(format!(
                "alpha*lambda^2 + beta = {num:.6e}, alpha + alpha*beta*I4 + beta*lambda^2 = {den:.6e} at lambda = {lambda}"
            )))
        }
    }
}

/// Substrate half-space with a bonded upper layer of unit thickness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    pub substrate: MaterialParams,
    pub upper: MaterialParams,
}

impl LayerStack {
    pub fn new(substrate: MaterialParams, upper: MaterialParams) -> Result<Self> {
        substrate.validate()?;
        upper.validate()?;
        Ok(LayerStack { substrate, upper })
    }

    /// Same constants in both layers.
    pub fn uniform(params: MaterialParams) -> Self {
        LayerStack { substrate: params, upper: params }
    }

    pub fn mu_ratio(&self) -> f64 {
        self.upper.mu / self.substrate.mu
    }

    pub fn thickness(&self) -> f64 {
        THICKNESS
    }
}

/// Which wavenumber is held fixed while the stretch varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WavenumberConvention {
    /// `k` is held, `K = lambda k`.
    #[default]
    #[serde(alias = "eulerian-fixed")]
    Eulerian,
    /// `K = k` is held.
    #[serde(alias = "lagrangian-fixed")]
    Lagrangian,
}

impl std::str::FromStr for WavenumberConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eulerian" | "eulerian-fixed" => Ok(WavenumberConvention::Eulerian),
            "lagrangian" | "lagrangian-fixed" => Ok(WavenumberConvention::Lagrangian),
            _ => Err(Error::Config(format!("unknown wavenumber convention '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadingPoint {
    pub lambda: f64,
    pub b_bar: f64,
    pub k: f64,
    pub convention: WavenumberConvention,
}

impl LoadingPoint {
    pub fn new(lambda: f64, b_bar: f64, k: f64) -> Result<Self> {
        let pt = LoadingPoint { lambda, b_bar, k, convention: WavenumberConvention::Eulerian };
        pt.validate()?;
        Ok(pt)
    }

    pub fn with_convention(mut self, convention: WavenumberConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::Domain(format!("stretch must be positive, got {}", self.lambda)));
        }
        if !(self.b_bar >= 0.0) || !self.b_bar.is_finite() {
            return Err(Error::Domain(format!("induction must be non-negative, got {}", self.b_bar)));
        }
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::Domain(format!("wavenumber must be positive, got {}", self.k)));
        }
        Ok(())
    }

    /// Wavenumber in reference coordinates.
    pub fn lagrangian_k(&self) -> f64 {
        match self.convention {
            WavenumberConvention::Eulerian => self.lambda * self.k,
            WavenumberConvention::Lagrangian => self.k,
        }
    }

    pub fn i4(&self) -> f64 {
        self.b_bar * self.b_bar
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub lambda: f64,
    pub f: Matrix3<f64>,
    pub c: Matrix3<f64>,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

pub fn deformation_gradient(lambda: f64) -> Result<KinematicState> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("stretch must be positive, got {lambda}")));
    }
    let f = Matrix3::from_diagonal(&nalgebra::Vector3::new(lambda, 1.0 / lambda, 1.0));
    let c = f.transpose() * f;
    let i1 = c.trace();
    let i2 = 0.5 * (i1 * i1 - (c * c).trace());
    let i3 = c.determinant();
    Ok(KinematicState { lambda, f, c, i1, i2, i3 })
}

/// `(I4, I5, I6)` for the induction `(0, b_bar, 0)`.
pub fn magnetic_invariants(state: &KinematicState, b_bar: f64) -> (f64, f64, f64) {
    let i4 = b_bar * b_bar;
    let c22 = state.c[(1, 1)];
    (i4, c22 * i4, c22 * c22 * i4)
}
