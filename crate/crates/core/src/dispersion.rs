//! Boundary-condition matrix, scaled determinant and the critical-stretch search.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{LayerStack, LoadingPoint, WavenumberConvention};
use crate::modes::{defective_gap, exterior_mode, layer_modes, ExteriorMode, LayerModes, LinearForm};

type C = Complex64;

/// How the exterior (vacuum) amplitudes enter the boundary system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExteriorReduction {
    /// Independent `F*, G*, V*`; surface kinematics from the exterior map; 12 x 12.
    #[serde(rename = "paper-12")]
    Paper12,
    /// Divergence-free exterior field (`F* = G*`); surface kinematics from the material side;
    /// the tangential continuity row is dropped; 11 x 11.
    #[default]
    Reduced,
}

impl ExteriorReduction {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExteriorReduction::Paper12 => "paper-12",
            ExteriorReduction::Reduced => "reduced",
        }
    }
}

impl std::str::FromStr for ExteriorReduction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-12" | "paper12" => Ok(ExteriorReduction::Paper12),
            "reduced" => Ok(ExteriorReduction::Reduced),
            _ => Err(Error::Config(format!("unknown exterior reduction '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySystem {
    pub matrix: DMatrix<C>,
    /// Positive exponential pre-scaling applied to each column.
    pub column_scales: Vec<f64>,
    pub row_labels: Vec<String>,
    pub unknown_labels: Vec<String>,
    pub all_roots_real: bool,
}

const TRACE_ROWS: [&str; 6] = ["T21", "T22", "BL2", "HL1", "u1", "u2"];

/// Assemble the interface (`X2 = 0`) and surface (`X2 = H`) conditions.
///
/// Interface rows are upper minus substrate. Upper-layer columns carry the factor
/// `e^{-max(Re r, 0) K}`; exterior amplitudes are defined at the surface.
pub fn assemble(
    point: &LoadingPoint,
    substrate: &LayerModes,
    upper: &LayerModes,
    exterior: &ExteriorMode,
    reduction: ExteriorReduction,
) -> Result<BoundarySystem> {
    if (point.lambda - 1.0).abs() < 1e-6 {
        return Err(Error::RootCoincidence { lambda: point.lambda });
    }
    if substrate.modes.len() != 3 || upper.modes.len() != 6 {
        return Err(Error::NumericalInconsistency(format!(
            "expected 3 substrate and 6 upper modes, got {} and {}",
            substrate.modes.len(),
            upper.modes.len()
        )));
    }
    let lambda = point.lambda;
    let b = point.b_bar;
    let kk = point.lagrangian_k() * crate::kinematics::THICKNESS;
    let paper = reduction == ExteriorReduction::Paper12;
    let n_rows = if paper { 12 } else { 11 };
    let n_cols = n_rows;
    let mut m = DMatrix::<C>::zeros(n_rows, n_cols);
    let mut scales = vec![1.0; n_cols];
    let mut unknown_labels = Vec::with_capacity(n_cols);
    let mut all_real = true;

    for (c, mode) in substrate.modes.iter().enumerate() {
        let t = &mode.trace;
        for (row, v) in [t.t21, t.t22, t.bl2, t.hl1, t.u1, t.u2].into_iter().enumerate() {
            m[(row, c)] = -v;
        }
        all_real &= mode.root.r.im == 0.0;
        unknown_labels.push(format!("Fs{}", c + 1));
    }

    let s_t21 = 6;
    let s_t22 = 7;
    let s_bl2 = 8;
    let s_hl1 = 9;
    let s_u2 = 10;
    let s_u1 = 11;
    let kin21 = -0.5 * b * b / (lambda * lambda);
    let kin22 = 0.5 * b * b;
    let bl2_kin = lambda * b;
    let hl1_kin = -b / lambda;

    for (i, mode) in upper.modes.iter().enumerate() {
        let c = 3 + i;
        let r = mode.root.r;
        let shift = r.re.max(0.0) * kk;
        scales[c] = (-shift).exp();
        let at_surface = (r * kk - shift).exp();
        let t = &mode.trace;
        for (row, v) in [t.t21, t.t22, t.bl2, t.hl1, t.u1, t.u2].into_iter().enumerate() {
            m[(row, c)] = v * scales[c];
        }
        m[(s_t21, c)] = t.t21 * at_surface;
        m[(s_t22, c)] = t.t22 * at_surface;
        m[(s_bl2, c)] = t.bl2 * at_surface;
        m[(s_hl1, c)] = t.hl1 * at_surface;
        m[(s_u2, c)] = t.u2 * at_surface;
        if paper {
            m[(s_u1, c)] = t.u1 * at_surface;
        } else {
            let u21 = t.u21 * at_surface;
            let u22 = t.u22 * at_surface;
            m[(s_t21, c)] += u21 * kin21;
            m[(s_t22, c)] += u22 * kin22;
            m[(s_bl2, c)] += u22 * bl2_kin;
            m[(s_hl1, c)] += u21 * hl1_kin;
        }
        all_real &= r.im == 0.0;
        unknown_labels.push(format!("Fu{}", i + 1));
    }

    let e = exterior;
    let mut rows: Vec<(usize, LinearForm)> = vec![
        (s_t21, e.b1 * -b),
        (s_t22, e.b2 * -b),
        (s_bl2, e.b2 * -lambda),
        (s_hl1, e.b1 * -lambda),
        (s_u2, LinearForm::G * -1.0),
    ];
    if paper {
        rows[0].1 = rows[0].1 + e.u21 * kin21;
        rows[1].1 = rows[1].1 + e.u22 * kin22;
        rows[2].1 = rows[2].1 + e.u22 * bl2_kin;
        rows[3].1 = rows[3].1 + e.u21 * hl1_kin;
        rows.push((s_u1, LinearForm::F * -1.0));
        for (row, form) in rows {
            for k in 0..3 {
                m[(row, 9 + k)] = C::new(form.0[k], 0.0);
            }
        }
        unknown_labels.extend(["F*", "G*", "V*"].map(String::from));
    } else {
        for (row, form) in rows {
            m[(row, 9)] = C::new(form.0[0] + form.0[1], 0.0);
            m[(row, 10)] = C::new(form.0[2], 0.0);
        }
        unknown_labels.extend(["F*=G*", "V*"].map(String::from));
    }

    let mut row_labels: Vec<String> = TRACE_ROWS.iter().map(|r| format!("interface:{r}")).collect();
    row_labels.extend(["T21", "T22", "BL2", "HL1", "u2"].iter().map(|r| format!("surface:{r}")));
    if paper {
        row_labels.push("surface:u1".into());
    }
    Ok(BoundarySystem { matrix: m, column_scales: scales, row_labels, unknown_labels, all_roots_real: all_real })
}

/// Modes of both layers, the exterior mode and the assembled system at one loading point.
pub fn build_system(stack: &LayerStack, point: &LoadingPoint, reduction: ExteriorReduction) -> Result<BoundarySystem> {
    if (point.lambda - 1.0).abs() < 1e-6 {
        return Err(Error::RootCoincidence { lambda: point.lambda });
    }
    let sub = layer_modes(&stack.substrate, point, true)?;
    let up = layer_modes(&stack.upper, point, false)?;
    assemble(point, &sub, &up, &exterior_mode(point), reduction)
}

/// Matrix with every column scaled to unit 2-norm.
pub fn normalized_columns(m: &DMatrix<C>) -> DMatrix<C> {
    let mut out = m.clone();
    for mut col in out.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= C::new(n, 0.0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDeterminant {
    pub value: f64,
    pub sign: f64,
}

pub fn scaled_determinant_of(m: &DMatrix<C>, expect_real: bool) -> Result<ScaledDeterminant> {
    let det = normalized_columns(m).lu().determinant();
    if !det.re.is_finite() || !det.im.is_finite() {
        return Err(Error::NumericalInconsistency("non-finite determinant".into()));
    }
    if expect_real && det.im.abs() > 1e-8 * (det.norm() + 1e-300) {
        return Err(Error::NumericalInconsistency(format!("determinant has imaginary part {det}")));
    }
    let sign = if det.re < 0.0 { -1.0 } else { 1.0 };
    Ok(ScaledDeterminant { value: det.re, sign })
}

pub fn scaled_determinant(sys: &BoundarySystem) -> Result<ScaledDeterminant> {
    scaled_determinant_of(&sys.matrix, sys.all_roots_real)
}

/// `sigma_min / sigma_max` of the column-normalized matrix and the corresponding right
/// singular vector, expressed in the unscaled column amplitudes.
pub fn null_vector(sys: &BoundarySystem) -> (f64, Vec<C>) {
    let n = normalized_columns(&sys.matrix);
    let svd = n.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let (imin, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, s)| (i, *s))
        .expect("non-empty");
    let smax = svd.singular_values.max();
    let v: Vec<C> = vt.row(imin).iter().map(|z| z.conj()).collect();
    (smin / smax.max(f64::MIN_POSITIVE), v)
}

/// Largest row residual of `M v` relative to `|M|`, for a vector in normalized columns.
pub fn null_residual(sys: &BoundarySystem) -> f64 {
    let n = normalized_columns(&sys.matrix);
    let (_, v) = null_vector(sys);
    let v = nalgebra::DVector::from_vec(v);
    let res = &n * v;
    res.iter().map(|z| z.norm()).fold(0.0, f64::max) / n.norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub scan_step: f64,
    pub bisection_tol: f64,
    pub coincidence_tol: f64,
    pub exterior_reduction: ExteriorReduction,
    /// Stop each side at its first crossing instead of listing all of them.
    pub first_only: bool,
    /// Keep every scan sample in the diagnostics.
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            lambda_min: 0.2,
            lambda_max: 3.0,
            scan_step: 2e-3,
            bisection_tol: 1e-8,
            coincidence_tol: crate::modes::COINCIDENCE_TOL,
            exterior_reduction: ExteriorReduction::default(),
            first_only: false,
            record_trace: false,
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.lambda_min > 0.0
            && self.lambda_min < 1.0 - 1e-6
            && self.lambda_max > 1.0 + 1e-6
            && self.lambda_max.is_finite()
            && self.bisection_tol > 0.0
            && self.scan_step > self.bisection_tol
            && self.coincidence_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid search options {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    pub lambda: f64,
    pub det: f64,
    pub null_residual: f64,
}

/// Sign change that did not converge to a zero (pole or branch switch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub lo: f64,
    pub hi: f64,
    pub det: f64,
}

/// `|det|` dip without a sign change; a candidate even-multiplicity zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuspectedEvenRoot {
    pub lambda: f64,
    pub fitted_det: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub trace: Vec<(f64, f64)>,
    pub perturbations: Vec<f64>,
    pub jumps: Vec<Jump>,
    pub suspected_even: Vec<SuspectedEvenRoot>,
    /// Zeros caused by two exponents of a layer meeting defectively, where the mode columns
    /// become parallel; not bifurcations.
    pub mode_crossings: Vec<f64>,
    pub failures: Vec<(f64, Error)>,
    pub det_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    NoCrossing,
    AdmissibilityViolated,
    NumericalInconsistency,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NoCrossing => "no-crossing",
            Status::AdmissibilityViolated => "admissibility-violated",
            Status::NumericalInconsistency => "numerical-inconsistency",
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::AdmissibilityViolated(_) => Status::AdmissibilityViolated,
            _ => Status::NumericalInconsistency,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Status::AdmissibilityViolated | Status::NumericalInconsistency)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalResult {
    pub lambda_cr_compression: Option<f64>,
    pub lambda_cr_tension: Option<f64>,
    pub crossings: Vec<Crossing>,
    pub diagnostics: Diagnostics,
    pub status: Status,
}

/// Determinant as a function of stretch for a fixed stack, wavenumber and field.
#[derive(Debug, Clone, Copy)]
pub struct DeterminantFn {
    pub stack: LayerStack,
    pub k: f64,
    pub b_bar: f64,
    pub convention: WavenumberConvention,
    pub reduction: ExteriorReduction,
}

impl DeterminantFn {
    pub fn point(&self, lambda: f64) -> Result<LoadingPoint> {
        Ok(LoadingPoint::new(lambda, self.b_bar, self.k)?.with_convention(self.convention))
    }

    pub fn system(&self, lambda: f64) -> Result<BoundarySystem> {
        build_system(&self.stack, &self.point(lambda)?, self.reduction)
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        Ok(scaled_determinant(&self.system(lambda)?)?.value)
    }
}

const PERTURBATIONS: [f64; 4] = [1e-7, 1e-6, 1e-5, 1e-4];

struct Scanner<'a> {
    f: &'a DeterminantFn,
    diag: Diagnostics,
    record: bool,
}

impl Scanner<'_> {
    /// Determinant at `lambda`; on a root coincidence retried at `lambda + 1e-7`, then at
    /// growing offsets up to `1e-4`, each retry logged.
    fn eval(&mut self, lambda: f64) -> Result<f64> {
        self.diag.det_evals += 1;
        let mut res = self.f.eval(lambda);
        for delta in PERTURBATIONS {
            if !matches!(res, Err(Error::RootCoincidence { .. })) {
                break;
            }
            self.diag.perturbations.push(lambda + delta);
            self.diag.det_evals += 1;
            res = self.f.eval(lambda + delta);
        }
        let v = res?;
        if self.record {
            self.diag.trace.push((lambda, v));
        }
        Ok(v)
    }

    fn bisect(&mut self, mut lo: f64, mut flo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
        while (hi - lo).abs() > tol {
            let mid = 0.5 * (lo + hi);
            let fm = self.eval(mid)?;
            if fm == 0.0 {
                return Ok((mid, 0.0));
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        Ok((mid, self.eval(mid)?))
    }

    /// Walk from `start` towards `end`; returns the crossings in walk order and the first
    /// failure, if any.
    fn side(&mut self, start: f64, end: f64, opts: &SearchOptions) -> (Vec<Crossing>, Option<Error>) {
        let dir = if end > start { 1.0 } else { -1.0 };
        let n = ((end - start).abs() / opts.scan_step).floor() as usize;
        let mut grid: Vec<f64> = (0..=n).map(|i| start + dir * i as f64 * opts.scan_step).collect();
        if (grid[grid.len() - 1] - end).abs() > 1e-12 {
            grid.push(end);
        }
        let mut found = Vec::new();
        let mut hist: Vec<(f64, f64)> = Vec::with_capacity(3);
        for &lam in &grid {
            let d = match self.eval(lam) {
                Ok(d) => d,
                Err(e) => {
                    self.diag.failures.push((lam, e.clone()));
                    return (found, Some(e));
                }
            };
            if let Some(&(lp, dp)) = hist.last() {
                if d == 0.0 || (d < 0.0) != (dp < 0.0) {
                    let (lo, hi) = if dir > 0.0 { (lp, lam) } else { (lam, lp) };
                    let flo = if dir > 0.0 { dp } else { d };
                    match self.bisect(lo, flo, hi, opts.bisection_tol) {
                        Ok((root, _)) if self.is_mode_crossing(lo, root, hi) => {
                            self.diag.mode_crossings.push(root);
                        }
                        Err(Error::RootCoincidence { lambda }) => {
                            self.diag.mode_crossings.push(lambda);
                        }
                        Ok((root, droot)) => {
                            let small = droot.abs() < 1e-6 && droot.abs() <= 1e-3 * dp.abs().max(d.abs());
                            if small || d == 0.0 {
                                let null_residual = self
                                    .f
                                    .system(root)
                                    .map(|s| null_residual(&s))
                                    .unwrap_or(f64::NAN);
                                found.push(Crossing { lo, hi, lambda: root, det: droot, null_residual });
                                if opts.first_only {
                                    return (found, None);
                                }
                            } else {
                                self.diag.jumps.push(Jump { lo, hi, det: droot });
                            }
                        }
                        Err(e) => {
                            self.diag.failures.push((lam, e.clone()));
                            return (found, Some(e));
                        }
                    }
                    hist.clear();
                } else if hist.len() == 2 {
                    self.check_dip(hist[0], hist[1], (lam, d));
                }
            }
            if hist.len() == 2 {
                hist.remove(0);
            }
            hist.push((lam, d));
        }
        (found, None)
    }

    fn gap(&self, lambda: f64) -> f64 {
        let Ok(pt) = self.f.point(lambda) else { return f64::INFINITY };
        let sub = defective_gap(&self.f.stack.substrate, &pt, true).unwrap_or(f64::INFINITY);
        let up = defective_gap(&self.f.stack.upper, &pt, false).unwrap_or(f64::INFINITY);
        sub.min(up)
    }

    /// The zero sits where two exponents meet, and they separate again within the bracket.
    fn is_mode_crossing(&self, lo: f64, root: f64, hi: f64) -> bool {
        let g = self.gap(root);
        g < 1e-5 && self.gap(lo).max(self.gap(hi)) > 100.0 * g
    }

    fn check_dip(&mut self, a: (f64, f64), b: (f64, f64), c: (f64, f64)) {
        if !(b.1.abs() < a.1.abs() && b.1.abs() < c.1.abs()) {
            return;
        }
        // parabola through the three samples
        let (x0, x1, x2) = (a.0, b.0, c.0);
        let d01 = (b.1 - a.1) / (x1 - x0);
        let d12 = (c.1 - b.1) / (x2 - x1);
        let curv = (d12 - d01) / (x2 - x0);
        if curv == 0.0 {
            return;
        }
        let xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
        let yv = a.1 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
        if !yv.is_finite() {
            return;
        }
        if (yv < 0.0) != (b.1 < 0.0) || yv.abs() < 1e-9 {
            self.diag.suspected_even.push(SuspectedEvenRoot { lambda: xv, fitted_det: yv });
        }
    }
}

/// Scan both sides of `lambda = 1` for sign changes of the scaled determinant and refine them.
pub fn find_critical(
    stack: &LayerStack,
    k: f64,
    b_bar: f64,
    convention: WavenumberConvention,
    opts: &SearchOptions,
) -> Result<CriticalResult> {
    opts.validate()?;
    stack.substrate.validate()?;
    stack.upper.validate()?;
    LoadingPoint::new(1.0, b_bar, k)?;
    let f = DeterminantFn { stack: *stack, k, b_bar, convention, reduction: opts.exterior_reduction };
    let mut sc = Scanner { f: &f, diag: Diagnostics::default(), record: opts.record_trace };
    let (comp, comp_err) = sc.side(1.0 - 1e-3, opts.lambda_min, opts);
    let (tens, tens_err) = sc.side(1.0 + 1e-3, opts.lambda_max, opts);
    let lambda_cr_compression = comp.first().map(|c| c.lambda);
    let lambda_cr_tension = tens.first().map(|c| c.lambda);
    let blocking = [(comp.is_empty(), comp_err), (tens.is_empty(), tens_err)]
        .into_iter()
        .filter_map(|(empty, e)| if empty { e } else { None })
        .next();
    let status = match blocking {
        Some(e) => Status::from_error(&e),
        None if lambda_cr_compression.is_some() || lambda_cr_tension.is_some() => Status::Ok,
        None => Status::NoCrossing,
    };
    let mut crossings = comp;
    crossings.extend(tens);
    Ok(CriticalResult { lambda_cr_compression, lambda_cr_tension, crossings, diagnostics: sc.diag, status })
}

/// `(lambda, scaled det, sign)` samples; failed evaluations are skipped.
pub fn det_trace(f: &DeterminantFn, lambdas: &[f64]) -> Vec<(f64, Result<ScaledDeterminant>)> {
    lambdas.iter().map(|&l| (l, f.system(l).and_then(|s| scaled_determinant(&s)))).collect()
}

/// One point of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasePoint {
    pub stack: LayerStack,
    pub k: f64,
    pub b_bar: f64,
    pub convention: WavenumberConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    K,
    BBar,
    MuRatio,
    /// Upper-layer beta.
    Beta,
    /// Beta of both layers.
    BetaBoth,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(SweepParam::K),
            "b-bar" | "b_bar" => Ok(SweepParam::BBar),
            "mu-ratio" | "mu_ratio" => Ok(SweepParam::MuRatio),
            "beta" => Ok(SweepParam::Beta),
            "beta-both" => Ok(SweepParam::BetaBoth),
            _ => Err(Error::Config(format!("unknown sweep parameter '{s}'"))),
        }
    }
}

pub fn grid_points(template: &CasePoint, param: SweepParam, values: &[f64]) -> Vec<CasePoint> {
    values
        .iter()
        .map(|&v| {
            let mut p = *template;
            match param {
                SweepParam::K => p.k = v,
                SweepParam::BBar => p.b_bar = v,
                SweepParam::MuRatio => p.stack.upper.mu = v * p.stack.substrate.mu,
                SweepParam::Beta => p.stack.upper.beta = v,
                SweepParam::BetaBoth => {
                    p.stack.upper.beta = v;
                    p.stack.substrate.beta = v;
                }
            }
            p
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: CasePoint,
    pub result: Result<CriticalResult>,
}

impl SweepRow {
    pub fn status(&self) -> Status {
        match &self.result {
            Ok(r) => r.status,
            Err(e) => Status::from_error(e),
        }
    }
}

/// Independent critical-stretch searches, evaluated in parallel, returned in input order.
pub fn sweep(points: &[CasePoint], opts: &SearchOptions) -> Vec<SweepRow> {
    points
        .par_iter()
        .map(|p| SweepRow { point: *p, result: find_critical(&p.stack, p.k, p.b_bar, p.convention, opts) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::MaterialParams;
    use approx::assert_relative_eq;

    fn biot_stack() -> LayerStack {
        LayerStack::uniform(MaterialParams::non_magnetizable(1.0))
    }

    #[test]
    fn dimensions_and_labels() {
        let pt = LoadingPoint::new(0.7, 0.5, 1.0).unwrap();
        let s = build_system(&biot_stack(), &pt, ExteriorReduction::Paper12).unwrap();
        assert_eq!(s.matrix.shape(), (12, 12));
        assert_eq!(s.row_labels.len(), 12);
        assert_eq!(s.unknown_labels[9..], ["F*", "G*", "V*"]);
        assert_eq!(s.row_labels.iter().filter(|l| l.starts_with("interface")).count(), 6);
        let s = build_system(&biot_stack(), &pt, ExteriorReduction::Reduced).unwrap();
        assert_eq!(s.matrix.shape(), (11, 11));
        assert!(s.column_scales.iter().all(|c| *c > 0.0 && *c <= 1.0));
    }

    #[test]
    fn refuses_unit_stretch() {
        let pt = LoadingPoint::new(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            build_system(&biot_stack(), &pt, ExteriorReduction::Reduced),
            Err(Error::RootCoincidence { .. })
        ));
    }

    #[test]
    fn identity_and_scaling() {
        let id = DMatrix::<C>::identity(5, 5);
        let d = scaled_determinant_of(&id, true).unwrap();
        assert_eq!((d.value, d.sign), (1.0, 1.0));
        let pt = LoadingPoint::new(0.6, 0.4, 2.0).unwrap();
        let s = build_system(&LayerStack::uniform(MaterialParams::magnetoelastic(1.0, 0.5, 1.0)), &pt, ExteriorReduction::Paper12)
            .unwrap();
        let base = scaled_determinant(&s).unwrap().value;
        let mut m = s.matrix.clone();
        m.column_mut(4).scale_mut(10.0);
        let scaled = scaled_determinant_of(&m, true).unwrap().value;
        assert_relative_eq!(base, scaled, max_relative = 1e-12);
    }

    #[test]
    fn biot_sign_change_and_null_vector() {
        let f = DeterminantFn {
            stack: biot_stack(),
            k: 1.0,
            b_bar: 0.0,
            convention: WavenumberConvention::Eulerian,
            reduction: ExteriorReduction::Reduced,
        };
        let a = f.eval(0.54).unwrap();
        let b = f.eval(0.55).unwrap();
        assert!(a * b < 0.0);
        let s = f.system(0.543689).unwrap();
        let (ratio, _) = null_vector(&s);
        assert!(ratio < 1e-5, "{ratio}");
    }

    #[test]
    fn grid_and_empty_sweep() {
        let t = CasePoint { stack: biot_stack(), k: 1.0, b_bar: 0.0, convention: WavenumberConvention::Eulerian };
        let g = grid_points(&t, SweepParam::MuRatio, &[0.5, 2.0]);
        assert_eq!(g[1].stack.upper.mu, 2.0);
        assert_eq!(g[1].stack.substrate.mu, 1.0);
        assert!(sweep(&[], &SearchOptions::default()).is_empty());
    }

    #[test]
    fn options_validation() {
        let mut o = SearchOptions::default();
        assert!(o.validate().is_ok());
        o.lambda_min = 1.0;
        assert!(o.validate().is_err());
        let o = SearchOptions { scan_step: 1e-9, ..SearchOptions::default() };
        assert!(o.validate().is_err());
    }
}
