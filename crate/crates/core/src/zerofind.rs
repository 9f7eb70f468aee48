//! Zeros of a finite exponential sum in a rectangle, by the argument
//! principle. Used as an independent check on the real-part set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ExponentialSum, Tolerances, VerticalStrip};
use crate::probe::{eval_derivative, eval_f};
use crate::rset::{compute_rset, RSetResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Rectangle {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        let all_finite = [sigma_lo, sigma_hi, t_lo, t_hi].iter().all(|v| v.is_finite());
        if !all_finite || sigma_lo >= sigma_hi || t_lo >= t_hi {
            return Err(Error::InvalidRectangle(format!(
                "[{sigma_lo}, {sigma_hi}] x [{t_lo}, {t_hi}]"
            )));
        }
        Ok(Rectangle {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        })
    }

    /// Square of side `w` centred at `z`.
    pub fn around(z: Complex64, w: f64) -> Self {
        Rectangle {
            sigma_lo: z.re - w / 2.0,
            sigma_hi: z.re + w / 2.0,
            t_lo: z.im - w / 2.0,
            t_hi: z.im + w / 2.0,
        }
    }

    pub fn width(&self) -> f64 {
        (self.sigma_hi - self.sigma_lo).max(self.t_hi - self.t_lo)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.sigma_lo <= z.re && z.re <= self.sigma_hi && self.t_lo <= z.im && z.im <= self.t_hi
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            self.sigma_lo + (self.sigma_hi - self.sigma_lo) / 2.0,
            self.t_lo + (self.t_hi - self.t_lo) / 2.0,
        )
    }

    fn grow(&self, d: f64) -> Self {
        Rectangle {
            sigma_lo: self.sigma_lo - d,
            sigma_hi: self.sigma_hi + d,
            t_lo: self.t_lo - d,
            t_hi: self.t_hi + d,
        }
    }

    /// Four children split at the given fractions of each side.
    fn split(&self, fs: f64, ft: f64) -> [Rectangle; 4] {
        let sm = self.sigma_lo + fs * (self.sigma_hi - self.sigma_lo);
        let tm = self.t_lo + ft * (self.t_hi - self.t_lo);
        [
            Rectangle {
                sigma_hi: sm,
                t_hi: tm,
                ..*self
            },
            Rectangle {
                sigma_lo: sm,
                t_hi: tm,
                ..*self
            },
            Rectangle {
                sigma_hi: sm,
                t_lo: tm,
                ..*self
            },
            Rectangle {
                sigma_lo: sm,
                t_lo: tm,
                ..*self
            },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub multiplicity: u32,
    /// `|f|` at `location`.
    pub residual: f64,
    /// Side of the box in which the winding number was confirmed.
    pub box_width: f64,
}

/// Clearance threshold relative to `Σ m_j`.
pub const CLEARANCE_REL: f64 = 1e-13;
const RETRY_SCHEDULE: [f64; 3] = [3.0, 7.0, 13.0];
const MAX_EDGE_STEPS: usize = 4_000_000;

/// Upper bounds over `σ ∈ [lo, hi]`, term by term: `ln Σ m_j`,
/// `ln Σ |λ_j| m_j ≥ ln |f'|` and `ln Σ λ_j² m_j ≥ ln |f''|`.
fn log_bounds(f: &ExponentialSum, lo: f64, hi: f64) -> [f64; 3] {
    let mut out = [f64::NEG_INFINITY; 3];
    for t in f.terms() {
        let m = t.log_modulus_at(lo).max(t.log_modulus_at(hi));
        out[0] = log_add(out[0], m);
        if t.exponent() != 0.0 {
            let la = t.exponent().abs().ln();
            out[1] = log_add(out[1], m + la);
            out[2] = log_add(out[2], m + 2.0 * la);
        }
    }
    out
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Argument change along the segment `a → b`.
///
/// A step δ is taken only when `|f(z + δ) - f(z)| ≤ |f(z)| / 2` is
/// guaranteed, either by `δ L1 ≤ |f|/2` with `L1 ≥ |f'|` or by
/// `δ |f'(z)| + δ² L2 / 2 ≤ |f|/2` with `L2 ≥ |f''|` on the segment. Each
/// sampled increment of the argument is then below π/6, so the unwrapped
/// total is exact.
fn edge_arg(
    f: &ExponentialSum,
    a: Complex64,
    b: Complex64,
    bounds: (f64, f64),
    clearance: f64,
    budget: &mut usize,
) -> Option<f64> {
    let (l1, l2) = bounds;
    let len = (b - a).norm();
    let dir = (b - a) / len;
    let mut u = 0.0;
    let mut z = a;
    let mut fz = eval_f(f, a).ok()?;
    let mut total = 0.0;
    while *budget > 0 {
        *budget -= 1;
        let r = fz.norm();
        // NaN fails clearance too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(r > clearance) {
            return None;
        }
        let step = if l1 > 0.0 {
            let d1 = eval_derivative(f, z).ok()?.norm();
            let quad = r / (d1 + (d1 * d1 + l2 * r).sqrt());
            (0.5 * r / l1).max(quad)
        } else {
            len
        };
        let (nu, nz) = if u + step >= len {
            (len, b)
        } else {
            (u + step, a + dir * (u + step))
        };
        let fn_ = eval_f(f, nz).ok()?;
        total += (fn_ / fz).arg();
        u = nu;
        z = nz;
        fz = fn_;
        if u >= len {
            return (fz.norm() > clearance).then_some(total);
        }
    }
    None
}

/// Winding number of `f` around `rect` without any perturbation; `None`
/// when `|f|` drops below the clearance somewhere on the boundary.
fn winding_exact(f: &ExponentialSum, rect: &Rectangle) -> Option<i64> {
    winding_budgeted(f, rect, MAX_EDGE_STEPS)
}

fn winding_budgeted(f: &ExponentialSum, rect: &Rectangle, mut budget: usize) -> Option<i64> {
    let [log_s, log_l1, log_l2] = log_bounds(f, rect.sigma_lo, rect.sigma_hi);
    let clearance = CLEARANCE_REL * log_s.exp();
    let corners = [
        Complex64::new(rect.sigma_lo, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_lo),
        Complex64::new(rect.sigma_hi, rect.t_hi),
        Complex64::new(rect.sigma_lo, rect.t_hi),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        // Vertical edges sit at a single σ, so the bound there is sharper.
        let bounds = if a.re == b.re {
            let [_, l1, l2] = log_bounds(f, a.re, a.re);
            (l1.exp(), l2.exp())
        } else {
            (log_l1.exp(), log_l2.exp())
        };
        total += edge_arg(f, a, b, bounds, clearance, &mut budget)?;
    }
    let w = total / std::f64::consts::TAU;
    let n = w.round();
    ((w - n).abs() < 0.25).then_some(n as i64)
}

/// Number of zeros inside `rect`, counted with multiplicity.
///
/// If `|f|` comes too close to zero on the boundary the rectangle is grown
/// by 3, 7 and then 13 times `root_tol` before giving up.
pub fn winding_number(f: &ExponentialSum, rect: &Rectangle, tol: &Tolerances) -> Result<i64> {
    winding_with_retries(f, rect, tol).map(|(w, _)| w)
}

fn winding_with_retries(f: &ExponentialSum, rect: &Rectangle, tol: &Tolerances) -> Result<(i64, Rectangle)> {
    tol.validate()?;
    Rectangle::new(rect.sigma_lo, rect.sigma_hi, rect.t_lo, rect.t_hi)?;
    if f.is_empty() {
        return Err(Error::EmptySum);
    }
    if let Some(w) = winding_exact(f, rect) {
        return Ok((w, *rect));
    }
    for k in RETRY_SCHEDULE {
        let r = rect.grow(k * tol.root_tol);
        if let Some(w) = winding_exact(f, &r) {
            return Ok((w, r));
        }
    }
    Err(Error::ClearanceFailed)
}

/// Damped Newton iteration, halving the step while the residual grows.
pub fn newton_polish(f: &ExponentialSum, z0: Complex64) -> Option<(Complex64, f64)> {
    let mut z = z0;
    let mut r = eval_f(f, z).ok()?.norm();
    for _ in 0..40 {
        if r == 0.0 {
            break;
        }
        let fz = eval_f(f, z).ok()?;
        let d = eval_derivative(f, z).ok()?;
        if d.norm() == 0.0 {
            break;
        }
        let step = fz / d;
        let mut damping = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let nz = z - step * damping;
            let nr = eval_f(f, nz).ok()?.norm();
            if nr < r {
                z = nz;
                r = nr;
                moved = true;
                break;
            }
            damping /= 2.0;
        }
        if !moved || step.norm() * damping <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    Some((z, r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSearch {
    /// Sorted by `t`, then by `σ`.
    pub zeros: Vec<ZeroRecord>,
    /// False when the box budget ran out or a box could not be resolved.
    pub complete: bool,
    /// The rectangle actually searched (grown if its boundary touched a zero).
    pub searched: Rectangle,
}

const MAX_BOXES: usize = 400_000;
/// Boxes with several zeros stop splitting below this relative width.
const CLUSTER_WIDTH: f64 = 1e-4;
const CLUSTER_STEPS: usize = 200_000;
const SPLIT_OFFSETS: [f64; 5] = [0.5, 0.4375, 0.5625, 0.375, 0.625];

/// All zeros in `rect`, by quadrisection on the winding number.
///
/// A box with winding one is first tried with Newton from its centre; a
/// root that stays inside the box and has winding one in a box of side
/// `root_tol` around it is accepted. Boxes narrower than `root_tol` with
/// a higher winding are reported as a cluster of that multiplicity.
pub fn locate_zeros(f: &ExponentialSum, rect: &Rectangle, tol: &Tolerances) -> Result<ZeroSearch> {
    let (w0, root) = winding_with_retries(f, rect, tol)?;
    let mut zeros = Vec::new();
    let mut complete = true;
    let mut stack = vec![(root, w0)];
    let mut boxes = 0usize;
    while let Some((b, w)) = stack.pop() {
        if w <= 0 {
            if w < 0 {
                complete = false;
            }
            continue;
        }
        boxes += 1;
        if boxes > MAX_BOXES {
            complete = false;
            break;
        }
        if w == 1 {
            if let Some(z) = confirm_simple(f, &b, tol) {
                zeros.push(z);
                continue;
            }
        }
        if w >= 2 && b.width() <= CLUSTER_WIDTH * (1.0 + b.center().norm()) {
            zeros.push(confirm_cluster(f, &b, w, tol));
            continue;
        }
        if b.width() <= tol.root_tol {
            let c = b.center();
            zeros.push(ZeroRecord {
                location: c,
                multiplicity: w as u32,
                residual: eval_f(f, c).map(|v| v.norm()).unwrap_or(f64::NAN),
                box_width: b.width(),
            });
            continue;
        }
        match split_box(f, &b) {
            Some(children) if children.iter().map(|c| c.1).sum::<i64>() == w => {
                stack.extend(children.into_iter().rev());
            }
            Some(_) => complete = false,
            None => {
                // No split clears the zeros; report the box as a cluster.
                let c = b.center();
                zeros.push(ZeroRecord {
                    location: c,
                    multiplicity: w as u32,
                    residual: eval_f(f, c).map(|v| v.norm()).unwrap_or(f64::NAN),
                    box_width: b.width(),
                });
            }
        }
    }
    zeros.sort_by(|a, b| {
        a.location
            .im
            .total_cmp(&b.location.im)
            .then(a.location.re.total_cmp(&b.location.re))
    });
    Ok(ZeroSearch {
        zeros,
        complete,
        searched: root,
    })
}

fn split_box(f: &ExponentialSum, b: &Rectangle) -> Option<Vec<(Rectangle, i64)>> {
    let ws = b.sigma_hi - b.sigma_lo;
    let wt = b.t_hi - b.t_lo;
    for &fs in &SPLIT_OFFSETS {
        for &ft in &SPLIT_OFFSETS {
            // Only halve the long side of a thin box.
            let (fs, ft) = if ws > 4.0 * wt {
                (fs, 1.0)
            } else if wt > 4.0 * ws {
                (1.0, ft)
            } else {
                (fs, ft)
            };
            let kids: Vec<Rectangle> = b
                .split(fs, ft)
                .into_iter()
                .filter(|r| r.sigma_lo < r.sigma_hi && r.t_lo < r.t_hi)
                .collect();
            let counts: Option<Vec<i64>> = kids.iter().map(|r| winding_exact(f, r)).collect();
            if let Some(c) = counts {
                return Some(kids.into_iter().zip(c).collect());
            }
        }
    }
    None
}

/// Polishes a cluster of `w` zeros with multiplicity-`w` Newton steps and
/// shrinks a square around the result for as long as it keeps winding `w`.
fn confirm_cluster(f: &ExponentialSum, b: &Rectangle, w: i64, tol: &Tolerances) -> ZeroRecord {
    let mut z = b.center();
    for _ in 0..40 {
        let (Ok(fz), Ok(d)) = (eval_f(f, z), eval_derivative(f, z)) else {
            break;
        };
        if d.norm() == 0.0 || fz.norm() == 0.0 {
            break;
        }
        let nz = z - fz / d * w as f64;
        if !b.contains(nz) || (nz - z).norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
        z = nz;
    }
    let mut record = ZeroRecord {
        location: b.center(),
        multiplicity: w as u32,
        residual: eval_f(f, b.center()).map(|v| v.norm()).unwrap_or(f64::NAN),
        box_width: b.width(),
    };
    let mut r = b.width() / 2.0;
    while r >= tol.root_tol {
        match winding_budgeted(f, &Rectangle::around(z, r), CLUSTER_STEPS) {
            Some(n) if n == w => {
                record.location = z;
                record.residual = eval_f(f, z).map(|v| v.norm()).unwrap_or(f64::NAN);
                record.box_width = r;
            }
            _ => break,
        }
        r /= 4.0;
    }
    record
}

fn confirm_simple(f: &ExponentialSum, b: &Rectangle, tol: &Tolerances) -> Option<ZeroRecord> {
    let (z, r) = newton_polish(f, b.center())?;
    if !b.contains(z) {
        return None;
    }
    let tiny = Rectangle::around(z, tol.root_tol);
    (winding_exact(f, &tiny)? == 1).then_some(ZeroRecord {
        location: z,
        multiplicity: 1,
        residual: r,
        box_width: tol.root_tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensitySample {
    pub sigma: f64,
    /// Distance to the nearest real part of a located zero.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrosscheckReport {
    pub rset: RSetResult,
    pub searched: Rectangle,
    pub zeros: Vec<ZeroRecord>,
    pub complete: bool,
    /// Real parts of located zeros farther than `root_tol` from the set.
    pub violations: Vec<f64>,
    pub max_violation: f64,
    pub density: Vec<DensitySample>,
    pub max_density_distance: f64,
    /// Counts of zero real parts in 20 equal bins over the searched width.
    pub histogram: Vec<usize>,
}

impl CrosscheckReport {
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }
}

const HISTOGRAM_BINS: usize = 20;
const DENSITY_POINTS: usize = 9;

/// Locates zeros in `strip × [0, t_max]` and compares their real parts with
/// the computed set. Infinite strip edges are replaced by the hull of the
/// set widened by 2.
pub fn crosscheck_rset(
    f: &ExponentialSum,
    strip: VerticalStrip,
    t_max: f64,
    tol: &Tolerances,
) -> Result<CrosscheckReport> {
    let rset = compute_rset(f, strip, tol)?;
    let centre = rset.a_f.map_or(0.0, |a| a + (rset.b_f.unwrap_or(a) - a) / 2.0);
    let lo = if strip.alpha().is_finite() {
        strip.alpha()
    } else {
        rset.a_f.unwrap_or(centre) - 2.0
    };
    let hi = if strip.beta().is_finite() {
        strip.beta()
    } else {
        rset.b_f.unwrap_or(centre) + 2.0
    };
    let rect = Rectangle::new(lo, hi, 0.0, t_max)?;
    let search = locate_zeros(f, &rect, tol)?;

    let zeros: Vec<ZeroRecord> = search
        .zeros
        .into_iter()
        .filter(|z| strip.contains(z.location.re))
        .collect();
    let mut violations = Vec::new();
    let mut max_violation = 0.0f64;
    for z in &zeros {
        let d = rset.distance_to(z.location.re);
        if d > tol.root_tol {
            violations.push(z.location.re);
        }
        max_violation = max_violation.max(d);
    }

    let mut density = Vec::new();
    for i in &rset.intervals {
        let n = if i.is_degenerate() { 1 } else { DENSITY_POINTS };
        for k in 0..n {
            let sigma = if n == 1 {
                i.lo
            } else {
                i.lo + (i.hi - i.lo) * (k as f64 + 0.5) / n as f64
            };
            let distance = zeros
                .iter()
                .map(|z| (z.location.re - sigma).abs())
                .fold(f64::INFINITY, f64::min);
            density.push(DensitySample { sigma, distance });
        }
    }
    let max_density_distance = density.iter().map(|d| d.distance).fold(0.0, f64::max);

    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    for z in &zeros {
        let u = (z.location.re - lo) / (hi - lo);
        let k = ((u * HISTOGRAM_BINS as f64).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1);
        histogram[k] += 1;
    }

    Ok(CrosscheckReport {
        rset,
        searched: search.searched,
        zeros,
        complete: search.complete,
        violations,
        max_violation,
        density,
        max_density_distance,
        histogram,
    })
}
