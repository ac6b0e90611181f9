//! Mooney-Rivlin magnetoelastic energy, base-state stresses and the exterior Maxwell stress.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::kinematics::{deformation_gradient, LayerStack, LoadingPoint, MaterialParams};

/// Total energy per unit reference volume as a function of `F` and the Lagrangian induction.
pub trait EnergyModel: Sync {
    /// Unconstrained value; `F` need not be unimodular.
    fn value(&self, f: &Matrix3<f64>, b_l: &Vector3<f64>) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MooneyRivlin {
    pub params: MaterialParams,
}

impl MooneyRivlin {
    pub fn new(params: MaterialParams) -> Self {
        MooneyRivlin { params }
    }
}

impl EnergyModel for MooneyRivlin {
    fn value(&self, f: &Matrix3<f64>, b_l: &Vector3<f64>) -> f64 {
        let MaterialParams { mu, gamma, alpha, beta } = self.params;
        let c = f.transpose() * f;
        let i1 = c.trace();
        let i2 = 0.5 * (i1 * i1 - (c * c).trace());
        let i4 = b_l.dot(b_l);
        let i5 = b_l.dot(&(c * b_l));
        0.25 * mu * ((1.0 + gamma) * (i1 - 3.0) + (1.0 - gamma) * (i2 - 3.0))
            + 0.5 * (alpha * i4 + beta * i5)
    }
}

pub fn energy_value(params: &MaterialParams, f: &Matrix3<f64>, b_l: &Vector3<f64>) -> Result<f64> {
    let det = f.determinant();
    if (det - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("deformation gradient is not unimodular (det = {det})")));
    }
    Ok(MooneyRivlin::new(*params).value(f, b_l))
}

/// Hydrostatic multiplier that makes the top surface and the interface traction free
/// in the base state.
pub fn lagrange_multiplier(params: &MaterialParams, lambda: f64, b_bar: f64) -> f64 {
    let l2 = lambda * lambda;
    0.5 * params.mu * (1.0 - params.gamma + 2.0 / l2) + 0.5 * b_bar * b_bar * (2.0 * params.beta - 1.0) / l2
}

/// `(p_substrate, p_upper)`.
pub fn lagrange_multipliers(stack: &LayerStack, point: &LoadingPoint) -> (f64, f64) {
    (
        lagrange_multiplier(&stack.substrate, point.lambda, point.b_bar),
        lagrange_multiplier(&stack.upper, point.lambda, point.b_bar),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseState {
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
    pub p: f64,
    pub h_l2: f64,
    pub tau_star_11: f64,
    pub tau_star_22: f64,
    pub tau_star_33: f64,
    pub t_star_11: f64,
    pub t_star_22: f64,
    pub t_star_33: f64,
}

fn layer_state(params: &MaterialParams, lambda: f64, b_bar: f64) -> BaseState {
    let MaterialParams { mu, gamma, alpha, beta } = *params;
    let li = 1.0 / lambda;
    let i1 = lambda * lambda + li * li + 1.0;
    let p = lagrange_multiplier(params, lambda, b_bar);
    // dOmega/dF = mu/2 [(1+g) F + (1-g)(I1 F - F C)] + beta (F B) x B
    let dw = |fa: f64, b_a: f64| {
        0.5 * mu * ((1.0 + gamma) * fa + (1.0 - gamma) * (i1 * fa - fa * fa * fa)) + beta * fa * b_a * b_a
    };
    let t11 = dw(lambda, 0.0) - p * li;
    let t22 = dw(li, b_bar) - p * lambda;
    let t33 = dw(1.0, 0.0) - p;

    // exterior Eulerian induction (0, b/lambda, 0)
    let b2 = b_bar * li;
    let tau22 = 0.5 * b2 * b2;
    let tau11 = -tau22;
    BaseState {
        t11,
        t22,
        t33,
        p,
        h_l2: (alpha + beta * li * li) * b_bar,
        tau_star_11: tau11,
        tau_star_22: tau22,
        tau_star_33: tau11,
        t_star_11: li * tau11,
        t_star_22: lambda * tau22,
        t_star_33: tau11,
    }
}

/// Base state of `(substrate, upper)`.
pub fn base_state(stack: &LayerStack, point: &LoadingPoint) -> Result<(BaseState, BaseState)> {
    deformation_gradient(point.lambda)?;
    Ok((
        layer_state(&stack.substrate, point.lambda, point.b_bar),
        layer_state(&stack.upper, point.lambda, point.b_bar),
    ))
}
