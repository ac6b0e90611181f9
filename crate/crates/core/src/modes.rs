//! Characteristic equation, mode exponents, per-mode amplitudes and the exterior field mode.
//!
//! A layer mode is `u1 = F e^{rKX2} sin KX1`, `u2 = G e^{rKX2} cos KX1`, with the Lagrangian
//! induction increment `(psi_2, -psi_1)` from the flux `psi = V e^{rKX2} sin KX1` and a pressure
//! increment of amplitude `P`.
//! All per-mode quantities below are quoted per unit `K` with the common exponential and
//! trigonometric factors stripped.

use nalgebra::{Matrix3, Matrix4, Vector4};
use num_complex::Complex64;

use crate::constitutive::lagrange_multiplier;
use crate::error::{Error, Result};
use crate::kinematics::{LoadingPoint, MaterialParams};
use crate::moduli::{analytic_moduli, ModuliSet};

type C = Complex64;

/// Coincidence threshold for mode exponents.
pub const COINCIDENCE_TOL: f64 = 1e-8;

/// Coefficients of `c6 s^3 + c4 s^2 + c2 s + c0` in `s = r^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bicubic {
    pub c6: f64,
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
}

impl Bicubic {
    pub fn eval(&self, s: C) -> C {
        ((s * self.c6 + self.c4) * s + self.c2) * s + self.c0
    }

    pub fn eval_r(&self, r: C) -> C {
        self.eval(r * r)
    }

    pub fn max_abs(&self) -> f64 {
        [self.c6, self.c4, self.c2, self.c0].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Coefficients divided by `c6`.
    pub fn normalized(&self) -> [f64; 4] {
        [1.0, self.c4 / self.c6, self.c2 / self.c6, self.c0 / self.c6]
    }
}

/// General characteristic equation from the in-plane moduli. The multiplier does not enter.
pub fn bicubic_coefficients(m: &ModuliSet, _p: f64, lambda: f64) -> Bicubic {
    let l2 = lambda * lambda;
    let l4 = l2 * l2;
    let c6 = (m.a2121 * m.k11 - m.g211 * m.g211) * l4;
    let c4 = -(m.a2222 * m.k11
        - 2.0 * (m.a2211 * m.k11 + m.a2112 * m.k11 + m.g211 * m.g222 - m.g121 * m.g211) * l2
        + (m.a1111 * m.k11 + m.a2121 * m.k22 + 2.0 * m.g112 * m.g211) * l4);
    let c2 = m.a1212 * m.k11 + m.a2222 * m.k22 - m.g121 * m.g121 + 2.0 * m.g121 * m.g222
        - m.g222 * m.g222
        - 2.0 * (m.a2112 * m.k22 + m.a2211 * m.k22 + m.g112 * m.g121 - m.g112 * m.g222) * l2
        + (m.a1111 * m.k22 - m.g112 * m.g112) * l4;
    let c0 = -m.a1212 * m.k22;
    Bicubic { c6, c4, c2, c0 }
}

/// Expanded `(s - 1)(s lambda^4 - 1)(s D lambda^2 - alpha lambda^2 - beta)` for Mooney-Rivlin,
/// `D = alpha + alpha beta I4 + beta lambda^2`, up to an overall factor.
///
/// `I4` is measured with the layer's own shear modulus, `I4 = b_bar^2 / mu`.
pub fn mooney_rivlin_factored(params: &MaterialParams, lambda: f64, b_bar: f64) -> Bicubic {
    let l2 = lambda * lambda;
    let l4 = l2 * l2;
    let (a, b) = (params.alpha, params.beta);
    let d = a + a * b * layer_i4(params, b_bar) + b * l2;
    // (s - 1)(l4 s - 1) = l4 s^2 - (l4 + 1) s + 1
    let q = [l4, -(l4 + 1.0), 1.0];
    let lin = [d * l2, -(a * l2 + b)];
    Bicubic {
        c6: q[0] * lin[0],
        c4: q[0] * lin[1] + q[1] * lin[0],
        c2: q[1] * lin[1] + q[2] * lin[0],
        c0: q[2] * lin[1],
    }
}

/// `B_L2^2` in units of the layer's shear modulus.
pub fn layer_i4(params: &MaterialParams, b_bar: f64) -> f64 {
    b_bar * b_bar / params.mu
}

/// Closed-form Mooney-Rivlin exponents `(1, lambda^-2, r3)`.
pub fn mooney_rivlin_roots(params: &MaterialParams, lambda: f64, b_bar: f64) -> [f64; 3] {
    let l2 = lambda * lambda;
    let (a, b) = (params.alpha, params.beta);
    let d = a + a * b * layer_i4(params, b_bar) + b * l2;
    [1.0, 1.0 / l2, ((a * l2 + b) / (d * l2)).sqrt()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    Shear,
    Pressure,
    Magnetic,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRoot {
    pub r: C,
    pub kind: RootKind,
    /// `Re r > 0`: the mode vanishes as `X2 -> -inf`.
    pub decaying: bool,
}

/// The three roots in `s = r^2`, polished by Newton steps.
pub fn cubic_roots(coeffs: &Bicubic) -> Result<[C; 3]> {
    if coeffs.c6 == 0.0 || !coeffs.c6.is_finite() {
        return Err(Error::NumericalInconsistency("vanishing leading coefficient".into()));
    }
    let [_, a2, a1, a0] = coeffs.normalized();
    let companion = Matrix3::new(-a2, -a1, -a0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let eig = companion.complex_eigenvalues();
    let mut s = [eig[0], eig[1], eig[2]];
    for si in s.iter_mut() {
        for _ in 0..3 {
            let f = coeffs.eval(*si);
            let df = (*si * (3.0 * coeffs.c6) + 2.0 * coeffs.c4) * *si + coeffs.c2;
            if df.norm() == 0.0 {
                break;
            }
            let next = *si - f / df;
            if coeffs.eval(next).norm() < f.norm() {
                *si = next;
            } else {
                break;
            }
        }
    }
    merge_clusters(coeffs, &mut s);
    Ok(s)
}

/// Replace a numerically split double (or triple) root by the nearby stationary (or
/// inflection) point when that point satisfies the cubic at least as well.
fn merge_clusters(c: &Bicubic, s: &mut [C; 3]) {
    let close = |a: C, b: C| (a - b).norm() <= 1e-5 * a.norm().max(1.0);
    let fit = |z: C| c.eval(z).norm();
    // rounding level of the Horner evaluation
    let noise = |z: C| {
        let a = z.norm();
        64.0 * f64::EPSILON * (((c.c6.abs() * a + c.c4.abs()) * a + c.c2.abs()) * a + c.c0.abs())
    };
    if close(s[0], s[1]) && close(s[1], s[2]) {
        let t = C::new(-c.c4 / (3.0 * c.c6), 0.0);
        if fit(t) <= 10.0 * s.iter().map(|z| fit(*z)).fold(0.0, f64::max) + noise(t) {
            *s = [t; 3];
        }
        return;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !close(s[i], s[j]) {
            continue;
        }
        let mut t = (s[i] + s[j]) * 0.5;
        for _ in 0..8 {
            let d1 = (t * (3.0 * c.c6) + 2.0 * c.c4) * t + c.c2;
            let d2 = t * (6.0 * c.c6) + 2.0 * c.c4;
            if d2.norm() == 0.0 {
                break;
            }
            t -= d1 / d2;
        }
        if t.im.abs() <= 1e-8 * t.norm() {
            t = C::new(t.re, 0.0);
        }
        if fit(t) <= 10.0 * fit(s[i]).max(fit(s[j])) + noise(t) {
            s[i] = t;
            s[j] = t;
        }
        return;
    }
}

fn classify(s: &[C; 3], lambda: f64) -> [RootKind; 3] {
    let targets = [(1.0, RootKind::Shear), (lambda.powi(-4), RootKind::Pressure)];
    let mut kinds = [RootKind::Generic; 3];
    for (target, kind) in targets {
        let best = (0..3)
            .filter(|&i| kinds[i] == RootKind::Generic)
            .min_by(|&i, &j| (s[i] - target).norm().total_cmp(&(s[j] - target).norm()));
        if let Some(i) = best {
            if (s[i] - target).norm() <= 1e-8 * target.max(1.0) {
                kinds[i] = kind;
            }
        }
    }
    let known = kinds.iter().filter(|k| **k != RootKind::Generic).count();
    if known == 2 {
        for k in kinds.iter_mut() {
            if *k == RootKind::Generic {
                *k = RootKind::Magnetic;
            }
        }
    }
    kinds
}

/// All six exponents sorted by descending real part, without the coincidence check.
pub fn sorted_roots(coeffs: &Bicubic, lambda: f64) -> Result<Vec<ModeRoot>> {
    let s = cubic_roots(coeffs)?;
    for si in &s {
        if si.im.abs() > 1e-10 * si.norm().max(1.0) || si.re <= 0.0 {
            return Err(Error::AdmissibilityViolated(format!(
                "non-real or non-decaying mode exponent (r^2 = {si}) at lambda = {lambda}"
            )));
        }
    }
    let kinds = classify(&s, lambda);
    let mut out = Vec::with_capacity(6);
    for (si, kind) in s.iter().zip(kinds) {
        let r = C::new(si.re.sqrt(), 0.0);
        out.push(ModeRoot { r, kind, decaying: true });
        out.push(ModeRoot { r: -r, kind, decaying: false });
    }
    out.sort_by(|a, b| b.r.re.total_cmp(&a.r.re));
    Ok(out)
}

/// Six mode exponents; coincident exponents are an error.
pub fn solve_roots(coeffs: &Bicubic, lambda: f64) -> Result<Vec<ModeRoot>> {
    let roots = sorted_roots(coeffs, lambda)?;
    for w in roots.windows(2) {
        if (w[0].r - w[1].r).norm() < COINCIDENCE_TOL {
            return Err(Error::RootCoincidence { lambda });
        }
    }
    Ok(roots)
}

/// Boundary-relevant values of one mode at unit exponential factor, per unit `K`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeTrace {
    pub u1: C,
    pub u2: C,
    pub t21: C,
    pub t22: C,
    pub bl2: C,
    pub hl1: C,
    /// `u2,1 / K`
    pub u21: C,
    /// `u2,2 / K`
    pub u22: C,
}

/// Field equations of the mode ansatz at exponent `r`.
#[derive(Debug, Clone, Copy)]
pub struct ModeSystem {
    pub m: ModuliSet,
    pub p: f64,
    pub lambda: f64,
    pub r: C,
}

/// Order of the amplitude vector.
pub const AMPLITUDE_LABELS: [&str; 4] = ["F", "G", "V", "P"];

impl ModeSystem {
    pub fn new(m: ModuliSet, p: f64, lambda: f64, r: C) -> Self {
        ModeSystem { m, p, lambda, r }
    }

    /// Residuals `[incompressibility, curl H, equilibrium 1, equilibrium 2]` and the
    /// boundary trace of the amplitude vector `(F, G, V, P)`.
    pub fn evaluate(&self, v: &Vector4<C>) -> ([C; 4], ModeTrace) {
        let ModeSystem { m, p, lambda, r } = *self;
        let (f, g, vv, pp) = (v[0], v[1], v[2], v[3]);
        let l2 = lambda * lambda;
        let t11 = f * m.a1111 + r * g * m.a1122 - vv * m.g112 - pp / l2 + f * (p / l2);
        let t12 = -g * m.a1212 + r * f * m.a1221 + r * vv * m.g121 + r * f * p;
        let t21 = r * f * m.a2121 - g * m.a2112 + r * vv * m.g211 - g * p;
        let t22 = f * m.a2211 + r * g * m.a2222 - vv * m.g222 - pp + r * g * (p * l2);
        let h1 = r * f * m.g211 - g * m.g121 + r * vv * m.k11;
        let h2 = f * m.g112 + r * g * m.g222 - vv * m.k22;
        let eqs = [f + r * g * l2, r * h1 + h2, -t11 + r * t21, t12 + r * t22];
        let trace = ModeTrace { u1: f, u2: g, t21, t22, bl2: -vv, hl1: h1, u21: -g, u22: r * g };
        (eqs, trace)
    }

    pub fn matrix(&self) -> Matrix4<C> {
        let mut out = Matrix4::zeros();
        for c in 0..4 {
            let mut e = Vector4::zeros();
            e[c] = C::new(1.0, 0.0);
            let (eqs, _) = self.evaluate(&e);
            for r in 0..4 {
                out[(r, c)] = eqs[r];
            }
        }
        out
    }

    pub fn trace(&self, v: &Vector4<C>) -> ModeTrace {
        self.evaluate(v).1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAmplitudes {
    pub f: C,
    pub g: C,
    pub v: C,
    pub p: C,
    /// `|incompressibility|, |curl|, |equilibrium 1|, |equilibrium 2|`, relative to the
    /// mode-matrix norm.
    pub residuals: [f64; 4],
}

impl ModeAmplitudes {
    pub fn vector(&self) -> Vector4<C> {
        Vector4::new(self.f, self.g, self.v, self.p)
    }
}

/// Null space of the 4x4 mode matrix of dimension `mult`, or `None` when the matrix has a
/// smaller nullity.
fn null_space(a: &Matrix4<C>, mult: usize) -> Option<Vec<Vector4<C>>> {
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let top = svd.singular_values[idx[0]].max(f64::MIN_POSITIVE);
    let last_kept = svd.singular_values[idx[4 - mult]];
    if last_kept > 1e-9 * top {
        return None;
    }
    Some(idx[4 - mult..].iter().map(|&k| vt.row(k).adjoint()).collect())
}

/// Canonical basis of a null space: greedy pivots in `order`, each basis vector is 1 on its
/// own pivot and 0 on the others.
fn canonical_basis(basis: &[Vector4<C>], order: &[usize; 4], single_tol: f64) -> Option<Vec<Vector4<C>>> {
    let m = basis.len();
    let scale = basis.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let tol = if m == 1 { single_tol } else { 1e-8 };
    let mut piv: Vec<usize> = Vec::new();
    for &c in order {
        if piv.len() == m {
            break;
        }
        let mut trial = piv.clone();
        trial.push(c);
        let sub = nalgebra::DMatrix::from_fn(trial.len(), m, |i, j| basis[j][trial[i]]);
        let sv = sub.singular_values();
        let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if smallest > tol * scale {
            piv = trial;
        }
    }
    if piv.len() < m {
        return None;
    }
    let n = nalgebra::DMatrix::from_fn(4, m, |i, j| basis[j][i]);
    let sub = nalgebra::DMatrix::from_fn(m, m, |i, j| basis[j][piv[i]]);
    let inv = sub.try_inverse()?;
    let x = n * inv;
    Some((0..m).map(|j| Vector4::new(x[(0, j)], x[(1, j)], x[(2, j)], x[(3, j)])).collect())
}

fn pivot_order(kind: RootKind) -> [usize; 4] {
    match kind {
        RootKind::Magnetic => [2, 0, 1, 3],
        _ => [0, 2, 1, 3],
    }
}

fn residuals(sys: &ModeSystem, v: &Vector4<C>) -> [f64; 4] {
    let scale = sys.matrix().norm() * v.norm();
    let (eqs, _) = sys.evaluate(v);
    eqs.map(|e| e.norm() / scale.max(f64::MIN_POSITIVE))
}

/// Amplitudes of a simple root; `F = 1` for mechanical roots, `V = 1` for the magnetic one,
/// falling back to the largest entry when that pivot is below `1e-12`.
pub fn amplitude_eliminate(m: &ModuliSet, p: f64, point: &LoadingPoint, root: &ModeRoot) -> Result<ModeAmplitudes> {
    let sys = ModeSystem::new(*m, p, point.lambda, root.r);
    let mat = sys.matrix();
    if mat.norm() == 0.0 {
        return Err(Error::DegenerateMode { r: root.r.re });
    }
    let basis = null_space(&mat, 1).ok_or(Error::NumericalInconsistency(format!(
        "mode matrix is not singular at r = {}",
        root.r
    )))?;
    let mut v = basis[0];
    let preferred = pivot_order(root.kind)[0];
    if v[preferred].norm() > 1e-12 * v.norm() {
        v /= v[preferred];
    } else {
        let imax = (0..4).max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm())).unwrap_or(0);
        v /= v[imax];
    }
    Ok(ModeAmplitudes { f: v[0], g: v[1], v: v[2], p: v[3], residuals: residuals(&sys, &v) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub root: ModeRoot,
    pub amplitudes: ModeAmplitudes,
    pub trace: ModeTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerModes {
    pub moduli: ModuliSet,
    pub p: f64,
    pub coefficients: Bicubic,
    pub modes: Vec<Mode>,
}

/// Modes of one layer: the three decaying ones (`decaying_only`) or all six, ordered by
/// descending `Re r`.
///
/// Coincident exponents are accepted when the mode matrix has a null space of full
/// multiplicity; the basis is then fixed by pivoting on `F` before `V`. A defective
/// coincidence raises `RootCoincidence`.
pub fn layer_modes(params: &MaterialParams, point: &LoadingPoint, decaying_only: bool) -> Result<LayerModes> {
    params.check_admissible(point.lambda, layer_i4(params, point.b_bar))?;
    let moduli = analytic_moduli(params, point);
    let p = lagrange_multiplier(params, point.lambda, point.b_bar);
    let coefficients = bicubic_coefficients(&moduli, p, point.lambda);
    let mut roots = sorted_roots(&coefficients, point.lambda)?;
    if decaying_only {
        roots.retain(|r| r.decaying);
    }
    let mut modes = Vec::with_capacity(roots.len());
    let mut i = 0;
    while i < roots.len() {
        let mut j = i;
        while j + 1 < roots.len() && (roots[j + 1].r - roots[i].r).norm() < COINCIDENCE_TOL {
            j += 1;
        }
        let group = &roots[i..=j];
        if group.len() == 1 {
            let amp = amplitude_eliminate(&moduli, p, point, &group[0])?;
            let sys = ModeSystem::new(moduli, p, point.lambda, group[0].r);
            modes.push(Mode { root: group[0], amplitudes: amp, trace: sys.trace(&amp.vector()) });
        } else {
            let r = group.iter().map(|g| g.r).sum::<C>() / group.len() as f64;
            let sys = ModeSystem::new(moduli, p, point.lambda, r);
            let basis = null_space(&sys.matrix(), group.len())
                .ok_or(Error::RootCoincidence { lambda: point.lambda })?;
            let canon = canonical_basis(&basis, &[0, 2, 1, 3], 1e-12)
                .ok_or(Error::RootCoincidence { lambda: point.lambda })?;
            // mechanical kinds take the F-pivot vectors first
            let mut kinds: Vec<RootKind> = group.iter().map(|g| g.kind).collect();
            kinds.sort_by_key(|k| matches!(k, RootKind::Magnetic));
            for (v, kind) in canon.iter().zip(kinds) {
                let amp = ModeAmplitudes { f: v[0], g: v[1], v: v[2], p: v[3], residuals: residuals(&sys, v) };
                let root = ModeRoot { r, kind, decaying: r.re > 0.0 };
                modes.push(Mode { root, amplitudes: amp, trace: sys.trace(v) });
            }
        }
        i = j + 1;
    }
    Ok(LayerModes { moduli, p, coefficients, modes })
}

/// Smallest gap between adjacent exponents of a layer whose mode matrix at the midpoint has
/// a one-dimensional null space, i.e. a defective near-coincidence. Semisimple pairs are skipped.
pub fn defective_gap(params: &MaterialParams, point: &LoadingPoint, decaying_only: bool) -> Result<f64> {
    let moduli = analytic_moduli(params, point);
    let p = lagrange_multiplier(params, point.lambda, point.b_bar);
    let mut roots = sorted_roots(&bicubic_coefficients(&moduli, p, point.lambda), point.lambda)?;
    if decaying_only {
        roots.retain(|r| r.decaying);
    }
    let mut gap = f64::INFINITY;
    for w in roots.windows(2) {
        let d = (w[0].r - w[1].r).norm();
        if d >= 1e-3 || d >= gap {
            continue;
        }
        let sys = ModeSystem::new(moduli, p, point.lambda, (w[0].r + w[1].r) * 0.5);
        if null_space(&sys.matrix(), 2).is_none() {
            gap = d;
        }
    }
    Ok(gap)
}

/// Linear form `c_F F* + c_G G* + c_V V*` in the exterior amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearForm(pub [f64; 3]);

impl LinearForm {
    pub const F: LinearForm = LinearForm([1.0, 0.0, 0.0]);
    pub const G: LinearForm = LinearForm([0.0, 1.0, 0.0]);
    pub const V: LinearForm = LinearForm([0.0, 0.0, 1.0]);

    pub fn eval(&self, f: f64, g: f64, v: f64) -> f64 {
        self.0[0] * f + self.0[1] * g + self.0[2] * v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }
}

impl std::ops::Add for LinearForm {
    type Output = LinearForm;
    fn add(self, o: LinearForm) -> LinearForm {
        LinearForm([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl std::ops::Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, o: LinearForm) -> LinearForm {
        self + o * -1.0
    }
}

impl std::ops::Mul<f64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, s: f64) -> LinearForm {
        LinearForm(self.0.map(|c| c * s))
    }
}

/// Field-free exterior region `X2 > H`, decaying as `e^{r* K X2}` with `r* = -lambda^-2`.
///
/// Every entry is a linear form in `(F*, G*, V*)` per unit `K` at `X2 = H`, with the
/// exponential absorbed into the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExteriorMode {
    pub lambda: f64,
    pub b_bar: f64,
    pub r_star: f64,
    /// Fictitious displacement gradient of the exterior map.
    pub u11: LinearForm,
    pub u12: LinearForm,
    pub u21: LinearForm,
    pub u22: LinearForm,
    /// Lagrangian induction increment.
    pub bl1: LinearForm,
    pub bl2: LinearForm,
    /// Lagrangian field increment.
    pub hl1: LinearForm,
    pub hl2: LinearForm,
    /// Eulerian induction (equal to the field in vacuum) increment.
    pub b1: LinearForm,
    pub b2: LinearForm,
    /// Maxwell stress increment, Eulerian and nominal.
    pub tau11: LinearForm,
    pub tau22: LinearForm,
    pub tau12: LinearForm,
    pub tau33: LinearForm,
    pub t11: LinearForm,
    pub t12: LinearForm,
    pub t21: LinearForm,
    pub t22: LinearForm,
    pub t33: LinearForm,
}

pub fn exterior_mode(point: &LoadingPoint) -> ExteriorMode {
    let lambda = point.lambda;
    let b = point.b_bar;
    let li = 1.0 / lambda;
    let rs = -li * li;
    let (f, g, v) = (LinearForm::F, LinearForm::G, LinearForm::V);

    let u11 = f;
    let u12 = f * rs;
    let u21 = g * -1.0;
    let u22 = g * rs;
    // flux function for the Lagrangian induction
    let bl1 = v * rs;
    let bl2 = v * -1.0;
    // Eulerian induction: b = F B_L' + F' B_L
    let b1 = bl1 * lambda + u12 * b;
    let b2 = bl2 * li + u22 * b;
    // H_L' = F^T h'  + F'^T h with h = b in vacuum and base field (0, b/lambda, 0)
    let hl1 = b1 * lambda + u21 * (b * li);
    let hl2 = b2 * li + u22 * (b * li);

    // tau' = b' x B + B x b' - (B . b') I with B = (0, b/lambda, 0)
    let bb = b * li;
    let tau11 = b2 * -bb;
    let tau22 = b2 * bb;
    let tau12 = b1 * bb;
    let tau33 = b2 * -bb;
    // T' = F^-1 tau' - F^-1 F' F^-1 tau at diagonal F
    let tau0 = [-0.5 * bb * bb, 0.5 * bb * bb, -0.5 * bb * bb];
    let finv = [li, lambda, 1.0];
    let t11 = (tau11 - u11 * (finv[0] * tau0[0])) * finv[0];
    let t12 = (tau12 - u12 * (finv[1] * tau0[1])) * finv[0];
    let t21 = (tau12 - u21 * (finv[0] * tau0[0])) * finv[1];
    let t22 = (tau22 - u22 * (finv[1] * tau0[1])) * finv[1];
    let t33 = tau33;
    ExteriorMode {
        lambda,
        b_bar: b,
        r_star: rs,
        u11,
        u12,
        u21,
        u22,
        bl1,
        bl2,
        hl1,
        hl2,
        b1,
        b2,
        tau11,
        tau22,
        tau12,
        tau33,
        t11,
        t12,
        t21,
        t22,
        t33,
    }
}

impl ExteriorMode {
    /// Residual of the exponent equation `r*^2 lambda^4 - 1`.
    pub fn exponent_residual(&self) -> f64 {
        self.r_star * self.r_star * self.lambda.powi(4) - 1.0
    }

    /// `Curl H*_L'`, as a linear form: `b (G* - F*)` times a positive factor.
    pub fn curl_form(&self) -> LinearForm {
        // (Curl H)_3 = H_L2,1 - H_L1,2 -> (-hl2 - r* hl1) per unit K
        self.hl2 * -1.0 - self.hl1 * self.r_star
    }

    /// Divergence of the Eulerian exterior induction, per unit wavenumber.
    pub fn divergence_form(&self) -> LinearForm {
        // b1 ~ sin, b2 ~ cos in X1; Eulerian derivatives: d/dx1 = lambda^-1 d/dX1, d/dx2 = lambda d/dX2
        self.b1 * (1.0 / self.lambda) + self.b2 * (self.lambda * self.r_star)
    }

    /// Both components of `Div T*'`, which must vanish in vacuum.
    pub fn equilibrium_forms(&self) -> [LinearForm; 2] {
        [self.t11 * -1.0 + self.t21 * self.r_star, self.t12 + self.t22 * self.r_star]
    }
}
