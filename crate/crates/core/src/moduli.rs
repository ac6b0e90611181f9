//! Incremental moduli `A = d2W/dFdF`, `Gamma = d2W/dFdB`, `K = d2W/dBdB` at the base state,
//! with a finite-difference oracle.
//!
//! Index convention: `A[a][i][b][j] = d2W / dF_ia dF_jb`, `Gamma[a][i][b] = d2W / dF_ia dB_b`,
//! all zero-based.

use nalgebra::{Matrix3, Vector3};

use crate::constitutive::EnergyModel;
use crate::error::{Error, Result};
use crate::kinematics::{deformation_gradient, LoadingPoint, MaterialParams};

pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// The in-plane components that survive at the plane-strain base state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModuliSet {
    pub a1111: f64,
    pub a2222: f64,
    pub a1122: f64,
    pub a2211: f64,
    pub a1212: f64,
    pub a2121: f64,
    pub a2112: f64,
    pub a1221: f64,
    pub g112: f64,
    pub g222: f64,
    pub g211: f64,
    pub g121: f64,
    pub k11: f64,
    pub k22: f64,
}

impl ModuliSet {
    pub fn as_array(&self) -> [f64; 14] {
        [
            self.a1111, self.a2222, self.a1122, self.a2211, self.a1212, self.a2121, self.a2112,
            self.a1221, self.g112, self.g222, self.g211, self.g121, self.k11, self.k22,
        ]
    }

    pub const NAMES: [&'static str; 14] = [
        "A1111", "A2222", "A1122", "A2211", "A1212", "A2121", "A2112", "A1221", "G112", "G222",
        "G211", "G121", "K11", "K22",
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullModuli {
    pub a: [[[[f64; 3]; 3]; 3]; 3],
    pub gamma: [[[f64; 3]; 3]; 3],
    pub kappa: [[f64; 3]; 3],
}

const A_PATTERN: [[usize; 4]; 8] = [
    [0, 0, 0, 0],
    [1, 1, 1, 1],
    [0, 0, 1, 1],
    [1, 1, 0, 0],
    [0, 1, 0, 1],
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
];
const G_PATTERN: [[usize; 3]; 4] = [[0, 0, 1], [1, 1, 1], [1, 0, 0], [0, 1, 0]];

impl FullModuli {
    pub fn zeros() -> Self {
        FullModuli { a: [[[[0.0; 3]; 3]; 3]; 3], gamma: [[[0.0; 3]; 3]; 3], kappa: [[0.0; 3]; 3] }
    }

    pub fn reduce(&self) -> ModuliSet {
        let a = &self.a;
        let g = &self.gamma;
        ModuliSet {
            a1111: a[0][0][0][0],
            a2222: a[1][1][1][1],
            a1122: a[0][0][1][1],
            a2211: a[1][1][0][0],
            a1212: a[0][1][0][1],
            a2121: a[1][0][1][0],
            a2112: a[1][0][0][1],
            a1221: a[0][1][1][0],
            g112: g[0][0][1],
            g222: g[1][1][1],
            g211: g[1][0][0],
            g121: g[0][1][0],
            k11: self.kappa[0][0],
            k22: self.kappa[1][1],
        }
    }

    /// Largest in-plane component outside the base-state pattern.
    pub fn off_pattern_max(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for i in 0..2 {
                for b in 0..2 {
                    for j in 0..2 {
                        if !A_PATTERN.contains(&[a, i, b, j]) {
                            worst = worst.max(self.a[a][i][b][j].abs());
                        }
                    }
                    if !G_PATTERN.contains(&[a, i, b]) {
                        worst = worst.max(self.gamma[a][i][b].abs());
                    }
                }
            }
            for b in 0..2 {
                if a != b {
                    worst = worst.max(self.kappa[a][b].abs());
                }
            }
        }
        worst
    }

    pub fn major_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for i in 0..3 {
                for b in 0..3 {
                    for j in 0..3 {
                        worst = worst.max((self.a[a][i][b][j] - self.a[b][j][a][i]).abs());
                    }
                }
            }
        }
        worst
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Closed-form second derivatives of the Mooney-Rivlin energy at arbitrary `(F, B_L)`.
pub fn analytic_full(params: &MaterialParams, f: &Matrix3<f64>, b_l: &Vector3<f64>) -> FullModuli {
    let MaterialParams { mu, gamma, alpha, beta } = *params;
    let c = f.transpose() * f;
    let left = f * f.transpose();
    let i1 = c.trace();
    let c1 = 0.25 * mu * (1.0 + gamma);
    let c2 = 0.25 * mu * (1.0 - gamma);
    let fb = f * b_l;
    let mut m = FullModuli::zeros();
    for a in 0..3 {
        for i in 0..3 {
            for b in 0..3 {
                for j in 0..3 {
                    let d2i1 = 2.0 * delta(i, j) * delta(a, b);
                    let d2i2 = 2.0
                        * (2.0 * f[(i, a)] * f[(j, b)] + i1 * delta(i, j) * delta(a, b)
                            - delta(i, j) * c[(a, b)]
                            - f[(i, b)] * f[(j, a)]
                            - left[(i, j)] * delta(a, b));
                    m.a[a][i][b][j] = c1 * d2i1 + c2 * d2i2 + beta * delta(i, j) * b_l[a] * b_l[b];
                }
                m.gamma[a][i][b] = beta * (delta(a, b) * fb[i] + b_l[a] * f[(i, b)]);
            }
        }
    }
    for a in 0..3 {
        for b in 0..3 {
            m.kappa[a][b] = alpha * delta(a, b) + beta * c[(a, b)];
        }
    }
    m
}

pub fn analytic_moduli(params: &MaterialParams, point: &LoadingPoint) -> ModuliSet {
    let state = deformation_gradient(point.lambda).expect("validated stretch");
    analytic_full(params, &state.f, &Vector3::new(0.0, point.b_bar, 0.0)).reduce()
}

// fourth-order central first-derivative stencil
const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const WEIGHTS: [f64; 4] = [1.0, -8.0, 8.0, -1.0];

/// Finite-difference Hessian of `energy` with respect to `(F, B_L)`.
///
/// Variables 0..9 are `F_ia` (row-major in `i`), 9..12 are `B_a`; the step for each is
/// `step * max(1, |x|)`.
pub fn fd_full(energy: &dyn EnergyModel, f: &Matrix3<f64>, b_l: &Vector3<f64>, step: f64) -> Result<FullModuli> {
    if !(1e-6..=1e-3).contains(&step) {
        return Err(Error::Domain(format!("finite-difference step {step} outside [1e-6, 1e-3]")));
    }
    let mut x = [0.0; 12];
    for i in 0..3 {
        for a in 0..3 {
            x[3 * i + a] = f[(i, a)];
        }
        x[9 + i] = b_l[i];
    }
    let eval = |x: &[f64; 12]| {
        let f = Matrix3::from_fn(|i, a| x[3 * i + a]);
        energy.value(&f, &Vector3::new(x[9], x[10], x[11]))
    };
    let h: Vec<f64> = x.iter().map(|v| step * v.abs().max(1.0)).collect();
    let f0 = eval(&x);
    let mut hess = [[0.0; 12]; 12];
    for p in 0..12 {
        let shifted = |s: f64| {
            let mut y = x;
            y[p] += s * h[p];
            eval(&y)
        };
        hess[p][p] = (-shifted(2.0) + 16.0 * shifted(1.0) - 30.0 * f0 + 16.0 * shifted(-1.0) - shifted(-2.0))
            / (12.0 * h[p] * h[p]);
        for q in 0..p {
            let mut acc = 0.0;
            for (sp, wp) in OFFSETS.iter().zip(WEIGHTS) {
                for (sq, wq) in OFFSETS.iter().zip(WEIGHTS) {
                    let mut y = x;
                    y[p] += sp * h[p];
                    y[q] += sq * h[q];
                    acc += wp * wq * eval(&y);
                }
            }
            let v = acc / (144.0 * h[p] * h[q]);
            hess[p][q] = v;
            hess[q][p] = v;
        }
    }
    let mut m = FullModuli::zeros();
    for a in 0..3 {
        for i in 0..3 {
            for b in 0..3 {
                for j in 0..3 {
                    m.a[a][i][b][j] = hess[3 * i + a][3 * j + b];
                }
                m.gamma[a][i][b] = hess[3 * i + a][9 + b];
            }
            m.kappa[a][i] = hess[9 + a][9 + i];
        }
    }
    Ok(m)
}

pub fn fd_moduli(energy: &dyn EnergyModel, point: &LoadingPoint, step: f64) -> Result<ModuliSet> {
    let state = deformation_gradient(point.lambda)?;
    Ok(fd_full(energy, &state.f, &Vector3::new(0.0, point.b_bar, 0.0), step)?.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::MooneyRivlin;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    struct Constant;
    impl EnergyModel for Constant {
        fn value(&self, _: &Matrix3<f64>, _: &Vector3<f64>) -> f64 {
            3.5
        }
    }

    struct HalfNorm;
    impl EnergyModel for HalfNorm {
        fn value(&self, f: &Matrix3<f64>, _: &Vector3<f64>) -> f64 {
            0.5 * f.norm_squared()
        }
    }

    fn pt(lambda: f64, b: f64) -> LoadingPoint {
        LoadingPoint::new(lambda, b, 1.0).unwrap()
    }

    #[test]
    fn kappa_closed_form() {
        let p = MaterialParams::magnetoelastic(1.0, 0.5, 0.5);
        let m = analytic_moduli(&p, &pt(1.0, 0.3));
        assert_relative_eq!(m.k11, 1.0);
        assert_relative_eq!(m.k22, 1.0);
        let m = analytic_moduli(&p, &pt(2.0, 0.3));
        assert_relative_eq!(m.k11, 0.5 + 0.5 * 4.0);
        assert_relative_eq!(m.k22, 0.5 + 0.5 / 4.0);
    }

    #[test]
    fn coupling_vanishes_without_field() {
        let p = MaterialParams::magnetoelastic(1.0, 0.5, 2.0);
        let m = analytic_moduli(&p, &pt(0.7, 0.0));
        assert_eq!([m.g112, m.g222, m.g211, m.g121], [0.0; 4]);
    }

    #[test]
    fn ground_state_shear_modulus() {
        let energy = MooneyRivlin::new(MaterialParams::non_magnetizable(1.0));
        let m = fd_moduli(&energy, &pt(1.0, 0.0), DEFAULT_FD_STEP).unwrap();
        assert_relative_eq!(m.a1212, 1.0, epsilon = 1e-8);
        assert_relative_eq!(m.a2121, 1.0, epsilon = 1e-8);
        let a = analytic_moduli(&MaterialParams::non_magnetizable(1.0), &pt(1.0, 0.0));
        assert_eq!(a.a1212, 1.0);
    }

    #[test]
    fn sample_point_values() {
        // hand-expanded values at mu=1, gamma=0.3, alpha=0.5, beta=2, lambda=1.3, B=0.7
        let p = MaterialParams { mu: 1.0, gamma: 0.3, alpha: 0.5, beta: 2.0 };
        let m = analytic_moduli(&p, &pt(1.3, 0.7));
        let l: f64 = 1.3;
        assert_relative_eq!(m.a1212, 1.0, epsilon = 1e-12);
        assert_relative_eq!(m.a2121, 1.98, epsilon = 1e-4);
        assert_relative_eq!(m.a1111, 1.2071, epsilon = 1e-4);
        assert_relative_eq!(m.a2222, 2.5715, epsilon = 1e-4);
        assert_relative_eq!(m.a1122, 0.7, epsilon = 1e-12);
        assert_relative_eq!(m.a2112, -0.35, epsilon = 1e-12);
        assert_relative_eq!(m.g222, 2.0 * 2.0 * 0.7 / l, epsilon = 1e-12);
        assert_relative_eq!(m.g211, 2.0 * 0.7 * l, epsilon = 1e-12);
        assert_relative_eq!(m.g121, 2.0 * 0.7 / l, epsilon = 1e-12);
        assert_eq!(m.g112, 0.0);
    }

    #[test]
    fn trivial_energies() {
        let f = deformation_gradient(1.4).unwrap().f;
        let b = Vector3::new(0.0, 0.8, 0.0);
        let m = fd_full(&Constant, &f, &b, DEFAULT_FD_STEP).unwrap();
        assert!(m.a.iter().flatten().flatten().flatten().all(|v| v.abs() < 1e-9));
        let m = fd_full(&HalfNorm, &f, &b, DEFAULT_FD_STEP).unwrap();
        for a in 0..3 {
            for i in 0..3 {
                for bb in 0..3 {
                    for j in 0..3 {
                        let want = delta(i, j) * delta(a, bb);
                        assert!((m.a[a][i][bb][j] - want).abs() < 1e-8);
                    }
                    assert!(m.gamma[a][i][bb].abs() < 1e-8);
                }
                assert!(m.kappa[a][i].abs() < 1e-8);
            }
        }
    }

    #[test]
    fn step_range_enforced() {
        let e = MooneyRivlin::new(MaterialParams::non_magnetizable(1.0));
        assert!(fd_moduli(&e, &pt(1.2, 0.0), 1e-2).is_err());
        assert!(fd_moduli(&e, &pt(1.2, 0.0), 1e-7).is_err());
    }

    #[test]
    fn analytic_matches_oracle_on_sample() {
        let p = MaterialParams { mu: 1.0, gamma: 1.0, alpha: 0.5, beta: 2.0 };
        let point = pt(1.3, 0.7);
        let a = analytic_moduli(&p, &point).as_array();
        let f = fd_moduli(&MooneyRivlin::new(p), &point, DEFAULT_FD_STEP).unwrap().as_array();
        for (x, y) in a.iter().zip(f.iter()) {
            assert!((x - y).abs() / x.abs().max(1.0) < 1e-6, "{x} vs {y}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn parity_in_field(lambda in 0.3f64..2.5, b in 0.0f64..4.0, beta in 0.0f64..3.0) {
            let p = MaterialParams::magnetoelastic(1.0, 0.5, beta);
            let f = deformation_gradient(lambda).unwrap().f;
            let plus = analytic_full(&p, &f, &Vector3::new(0.0, b, 0.0));
            let minus = analytic_full(&p, &f, &Vector3::new(0.0, -b, 0.0));
            let pm = plus.reduce();
            let mm = minus.reduce();
            for (x, y) in pm.as_array()[..8].iter().zip(mm.as_array()[..8].iter()) {
                prop_assert_eq!(x, y);
            }
            for (x, y) in pm.as_array()[8..12].iter().zip(mm.as_array()[8..12].iter()) {
                prop_assert_eq!(*x, -*y);
            }
            prop_assert!(plus.major_symmetry_defect() == 0.0);
        }
    }
}
