//! Direct evaluation of `f`, vertical min-modulus scans, and the auxiliary
//! phase function
//!
//! ```text
//! F_f(σ, x, p) = Σ a_j e^{λ_j σ} e^{i⟨r_j, x + 2π p_j⟩}
//! ```
//!
//! where `r_j` are the coordinates of `λ_j` over a natural basis. A point σ
//! has a zero projection when `F_f(σ, ·)` vanishes somewhere on the torus.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{BasisRepresentationByLabel, ExponentialSum, IndependenceStatus, Tolerances};
use crate::rset::inf_modulus;

/// Membership threshold for torus residuals, relative to `Σ m_j`.
pub const MEMBERSHIP_REL_TOL: f64 = 1e-8;

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn compensated_sum(values: impl Iterator<Item = Complex64>, sigma: f64) -> Result<Complex64> {
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for v in values {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow { sigma });
        }
        re.add(v.re);
        im.add(v.im);
    }
    Ok(Complex64::new(re.total(), im.total()))
}

/// `Σ a_j e^{λ_j s}` with compensated summation in term order.
pub fn eval_f(f: &ExponentialSum, s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite("s".into()));
    }
    compensated_sum(f.terms().iter().map(|t| t.value_at(s)), s.re)
}

/// `f'(s) = Σ a_j λ_j e^{λ_j s}`.
pub fn eval_derivative(f: &ExponentialSum, s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite("s".into()));
    }
    compensated_sum(f.terms().iter().map(|t| t.value_at(s) * t.exponent()), s.re)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanResult {
    pub min_value: f64,
    pub argmin_t: f64,
    pub samples: usize,
}

const MAX_SCAN_SAMPLES: f64 = 4e6;
const REFINED_MINIMA: usize = 24;

/// Minimum of `|f(σ + it)|` over `t ∈ [0, t_max]`.
///
/// The grid step resolves the fastest oscillation `e^{i(λ_max - λ_min)t}`
/// with about 16 samples per period unless `tol.scan_step` fixes it; the
/// deepest grid minima are then refined by golden-section search.
pub fn min_modulus_scan(f: &ExponentialSum, sigma: f64, t_max: f64, tol: &Tolerances) -> Result<ScanResult> {
    tol.validate()?;
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::NonFinite(format!("t_max = {t_max}")));
    }
    let at = |t: f64| eval_f(f, Complex64::new(sigma, t)).map(|z| z.norm());
    let exps = f.exponents();
    let spread = match (exps.first(), exps.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    if spread == 0.0 {
        return Ok(ScanResult {
            min_value: at(0.0)?,
            argmin_t: 0.0,
            samples: 1,
        });
    }
    let mut step = tol.scan_step.unwrap_or(PI / (8.0 * spread));
    if t_max / step > MAX_SCAN_SAMPLES {
        step = t_max / MAX_SCAN_SAMPLES;
    }
    let n = (t_max / step).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|k| (k as f64 * step).min(t_max)).collect();
    let vals = ts.iter().map(|&t| at(t)).collect::<Result<Vec<f64>>>()?;

    let mut minima: Vec<usize> = (0..vals.len())
        .filter(|&k| {
            let left = k == 0 || vals[k - 1] >= vals[k];
            let right = k + 1 == vals.len() || vals[k + 1] >= vals[k];
            left && right
        })
        .collect();
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    minima.truncate(REFINED_MINIMA);

    let mut best = (vals[minima[0]], ts[minima[0]]);
    let mut samples = vals.len();
    for &k in &minima {
        let lo = if k == 0 { 0.0 } else { ts[k - 1] };
        let hi = if k + 1 == ts.len() { t_max } else { ts[k + 1] };
        let (t, v, used) = golden_section(lo, hi, |t| at(t).unwrap_or(f64::INFINITY));
        samples += used;
        if v < best.0 || (v == best.0 && t < best.1) {
            best = (v, t);
        }
    }
    Ok(ScanResult {
        min_value: best.0,
        argmin_t: best.1,
        samples,
    })
}

fn golden_section(mut a: f64, mut b: f64, g: impl Fn(f64) -> f64) -> (f64, f64, usize) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut used = 2;
    while (b - a) > 1e-13 * (1.0 + a.abs()) && used < 200 {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
        used += 1;
    }
    if gc <= gd {
        (c, gc, used)
    } else {
        (d, gd, used)
    }
}

/// A point of the phase torus: `x_k ∈ [0, 2π)` per basis element and an
/// integer offset vector `p_j` per term (empty when unused).
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseAssignment {
    pub x: Vec<f64>,
    pub p: Vec<Vec<i64>>,
}

impl PhaseAssignment {
    pub fn zeros(dim: usize) -> Self {
        PhaseAssignment {
            x: vec![0.0; dim],
            p: vec![],
        }
    }

    pub fn new(x: Vec<f64>) -> Self {
        PhaseAssignment { x, p: vec![] }.normalized()
    }

    /// Reduces every `x_k` into `[0, 2π)`.
    pub fn normalized(mut self) -> Self {
        for v in &mut self.x {
            *v = v.rem_euclid(TAU);
            if *v >= TAU {
                *v = 0.0;
            }
        }
        self
    }
}

/// Per-term data for fast repeated evaluation of `F_f`.
struct Aux {
    /// `a_j e^{λ_j σ} / S`
    w: Vec<Complex64>,
    rows: Vec<Vec<f64>>,
    /// Denominator of each row's non-integral entries, per coordinate.
    dens: Vec<Vec<i64>>,
    scale: f64,
}

impl Aux {
    fn new(f: &ExponentialSum, sigma: f64, rep: &BasisRepresentationByLabel) -> Result<Self> {
        if f.len() != rep.rep.len() {
            return Err(Error::DimensionMismatch {
                expected: f.len(),
                found: rep.rep.len(),
            });
        }
        let log_s = f.log_total_at(sigma);
        let mut w = Vec::with_capacity(f.len());
        let mut rows = Vec::with_capacity(f.len());
        let mut dens = Vec::with_capacity(f.len());
        for t in f.terms() {
            let row = rep.row_for(t);
            if row.dim() != rep.dim() {
                return Err(Error::DimensionMismatch {
                    expected: rep.dim(),
                    found: row.dim(),
                });
            }
            let unit = t.coeff() / t.coeff().norm();
            w.push(unit * (t.log_modulus_at(sigma) - log_s).exp());
            rows.push(row.to_f64());
            dens.push(
                row.entries()
                    .iter()
                    .map(|q| i64::try_from(q.denom()).unwrap_or(i64::MAX))
                    .collect(),
            );
        }
        Ok(Aux {
            w,
            rows,
            dens,
            scale: if log_s.is_finite() { log_s.exp() } else { 0.0 },
        })
    }

    fn dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    fn phase(&self, j: usize, x: &[f64], p: &[Vec<i64>]) -> f64 {
        let pj = p.get(j);
        self.rows[j]
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let off = pj.map_or(0.0, |v| v[k] as f64 * TAU);
                r * (x[k] + off)
            })
            .sum()
    }

    fn term(&self, j: usize, x: &[f64], p: &[Vec<i64>]) -> Complex64 {
        self.w[j] * Complex64::from_polar(1.0, self.phase(j, x, p))
    }

    /// `F_f / S`
    fn value(&self, x: &[f64], p: &[Vec<i64>]) -> Complex64 {
        (0..self.w.len()).map(|j| self.term(j, x, p)).sum()
    }

    fn integral(&self) -> bool {
        self.dens.iter().flatten().all(|&d| d == 1)
    }
}

/// `F_f(σ, x, p)` over the given basis representation.
pub fn eval_aux(
    f: &ExponentialSum,
    sigma: f64,
    phases: &PhaseAssignment,
    rep: &BasisRepresentationByLabel,
) -> Result<Complex64> {
    let aux = Aux::new(f, sigma, rep)?;
    check_phases(&aux, phases, f.len())?;
    // Evaluate with the true moduli rather than the normalised weights.
    compensated_sum(
        f.terms().iter().enumerate().map(|(j, t)| {
            t.value_at(Complex64::new(sigma, 0.0)) * Complex64::from_polar(1.0, aux.phase(j, &phases.x, &phases.p))
        }),
        sigma,
    )
}

fn check_phases(aux: &Aux, phases: &PhaseAssignment, n: usize) -> Result<()> {
    if phases.x.len() != aux.dim() {
        return Err(Error::DimensionMismatch {
            expected: aux.dim(),
            found: phases.x.len(),
        });
    }
    if !phases.p.is_empty() {
        if phases.p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phases.p.len(),
            });
        }
        if let Some(bad) = phases.p.iter().find(|v| v.len() != aux.dim()) {
            return Err(Error::DimensionMismatch {
                expected: aux.dim(),
                found: bad.len(),
            });
        }
    }
    Ok(())
}

/// Values of `F_f(σ, ·)` at `count` quasi-random torus points (the first is
/// the origin), for plotting the image set.
pub fn sample_image(
    f: &ExponentialSum,
    sigma: f64,
    rep: &BasisRepresentationByLabel,
    count: usize,
) -> Result<Vec<Complex64>> {
    let aux = Aux::new(f, sigma, rep)?;
    let seq = Kronecker::new(aux.dim());
    Ok((0..count).map(|k| aux.value(&seq.point(k), &[]) * aux.scale).collect())
}

/// Additive recurrence with the generalised golden ratio: the `k`-th point
/// is `frac(k α)` with `α_i = φ_d^{-(i+1)}` and `φ_d^{d+1} = φ_d + 1`.
struct Kronecker {
    alpha: Vec<f64>,
}

impl Kronecker {
    fn new(dim: usize) -> Self {
        let d = dim.max(1) as i32;
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi -= (phi.powi(d + 1) - phi - 1.0) / ((d + 1) as f64 * phi.powi(d) - 1.0);
        }
        Kronecker {
            alpha: (1..=dim as i32).map(|i| phi.powi(-i)).collect(),
        }
    }

    fn point(&self, k: usize) -> Vec<f64> {
        self.alpha.iter().map(|a| ((k as f64 * a).fract()) * TAU).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusResult {
    pub member: bool,
    /// Smallest `|F_f|` found (or the closed-form infimum, see below).
    pub residual: f64,
    pub best: PhaseAssignment,
    /// Best residual reached by the search itself.
    pub search_residual: f64,
    /// Verified independence: the polygon closed form, which decides.
    pub closed_form: Option<f64>,
    /// Dependent or unverified exponents: a miss does not prove exclusion.
    pub heuristic: bool,
}

const LINE_GRID: usize = 64;
const PHASE_OFFSET_CAP: i64 = 12;

/// Searches the torus for phases that make `F_f(σ, ·)` vanish.
///
/// Multistart coordinate descent: a coordinate feeding a single term with an
/// integer coefficient is set in closed form (that term is turned against the
/// rest), other coordinates are minimised along a grid followed by
/// golden-section refinement. Non-integral representations also descend over
/// the integer offsets `p_j`. The best point is finished by minimum-norm
/// Gauss-Newton steps on `(Re F, Im F)`.
pub fn torus_membership(
    f: &ExponentialSum,
    sigma: f64,
    rep: &BasisRepresentationByLabel,
    restarts: usize,
    iters: usize,
) -> Result<TorusResult> {
    let aux = Aux::new(f, sigma, rep)?;
    let d = aux.dim();
    let seq = Kronecker::new(d);
    let integral = aux.integral();
    let target = MEMBERSHIP_REL_TOL;

    let mut best_x = vec![0.0; d];
    let mut best_p: Vec<Vec<i64>> = vec![];
    let mut best_v = aux.value(&best_x, &[]).norm();
    for r in 0..restarts.max(1) {
        if best_v <= target {
            break;
        }
        let mut x = seq.point(r);
        let mut p: Vec<Vec<i64>> = if integral { vec![] } else { vec![vec![0; d]; f.len()] };
        let mut v = aux.value(&x, &p).norm();
        for _ in 0..iters {
            let before = v;
            for k in 0..d {
                v = descend_coordinate(&aux, &mut x, &p, k);
            }
            if !integral {
                v = descend_offsets(&aux, &x, &mut p);
            }
            if v <= target || before - v <= 1e-15 * before {
                break;
            }
        }
        v = gauss_newton(&aux, &mut x, &p, v);
        if v < best_v {
            best_v = v;
            best_x = x;
            best_p = p;
        }
    }

    let scale = aux.scale;
    let search_residual = best_v * scale;
    let best = PhaseAssignment { x: best_x, p: best_p }.normalized();
    let (residual, member, closed_form, heuristic) = match f.independence() {
        IndependenceStatus::Verified => {
            let closed = inf_modulus(f, sigma).value;
            let member = closed <= target * scale;
            (closed, member, Some(closed), false)
        }
        _ => (search_residual, best_v <= target, None, true),
    };
    Ok(TorusResult {
        member,
        residual,
        best,
        search_residual,
        closed_form,
        heuristic,
    })
}

/// Terms whose phase depends on coordinate `k`.
fn involved(aux: &Aux, k: usize) -> Vec<usize> {
    (0..aux.rows.len()).filter(|&j| aux.rows[j][k] != 0.0).collect()
}

fn descend_coordinate(aux: &Aux, x: &mut [f64], p: &[Vec<i64>], k: usize) -> f64 {
    let js = involved(aux, k);
    let full = aux.value(x, p);
    if js.is_empty() {
        return full.norm();
    }
    let moving: Complex64 = js.iter().map(|&j| aux.term(j, x, p)).sum();
    let rest = full - moving;
    if let [j] = js[..] {
        let r = aux.rows[j][k];
        if r.fract() == 0.0 {
            // Point the single moving term opposite to the rest.
            let current = aux.term(j, x, p);
            let want = (-rest).arg();
            let delta = want - current.arg();
            x[k] = (x[k] + delta / r).rem_euclid(TAU);
            return aux.value(x, p).norm();
        }
    }
    let g = |t: f64| {
        let mut y = x.to_vec();
        y[k] = t;
        aux.value(&y, p).norm()
    };
    let h = TAU / LINE_GRID as f64;
    let (mut bt, mut bv) = (x[k], full.norm());
    for i in 0..LINE_GRID {
        let t = i as f64 * h;
        let v = g(t);
        if v < bv {
            bt = t;
            bv = v;
        }
    }
    let (t, v, _) = golden_section(bt - h, bt + h, g);
    if v < bv {
        bt = t;
        bv = v;
    }
    x[k] = bt.rem_euclid(TAU);
    bv
}

fn descend_offsets(aux: &Aux, x: &[f64], p: &mut [Vec<i64>]) -> f64 {
    let mut v = aux.value(x, p).norm();
    for j in 0..p.len() {
        for k in 0..aux.dim() {
            let den = aux.dens[j][k];
            if den == 1 {
                continue;
            }
            let keep = p[j][k];
            let mut best = (v, keep);
            for c in 0..den.min(PHASE_OFFSET_CAP) {
                p[j][k] = c;
                let w = aux.value(x, p).norm();
                if w < best.0 {
                    best = (w, c);
                }
            }
            p[j][k] = best.1;
            v = best.0;
        }
    }
    v
}

fn gauss_newton(aux: &Aux, x: &mut [f64], p: &[Vec<i64>], mut v: f64) -> f64 {
    let d = x.len();
    if d == 0 {
        return v;
    }
    for _ in 0..30 {
        let terms: Vec<Complex64> = (0..aux.w.len()).map(|j| aux.term(j, x, p)).collect();
        let val: Complex64 = terms.iter().sum();
        // dF/dx_k = i Σ_j r_jk term_j
        let jac: Vec<Complex64> = (0..d)
            .map(|k| terms.iter().zip(&aux.rows).map(|(t, r)| t * r[k]).sum::<Complex64>() * Complex64::i())
            .collect();
        // Rows (Re, Im) of J; minimum-norm step δ = -Jᵀ (J Jᵀ)⁻¹ F.
        let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
        for c in &jac {
            a11 += c.re * c.re;
            a12 += c.re * c.im;
            a22 += c.im * c.im;
        }
        let trace = a11 + a22;
        if trace == 0.0 {
            break;
        }
        // Small ridge keeps the 2x2 solve stable near rank one.
        let mu = 1e-12 * trace;
        let (a11, a22) = (a11 + mu, a22 + mu);
        let det = a11 * a22 - a12 * a12;
        let y1 = (a22 * val.re - a12 * val.im) / det;
        let y2 = (a11 * val.im - a12 * val.re) / det;
        let step: Vec<f64> = jac.iter().map(|c| -(c.re * y1 + c.im * y2)).collect();
        let mut damping = 1.0;
        let mut improved = false;
        for _ in 0..20 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + damping * s).collect();
            let w = aux.value(&trial, p).norm();
            if w < v {
                x.copy_from_slice(&trial);
                v = w;
                improved = true;
                break;
            }
            damping /= 2.0;
        }
        if !improved || v == 0.0 {
            break;
        }
    }
    v
}
