//! Sublevel sets of `h(σ) = ln Σ_i e^{c_i + μ_i σ}`.
//!
//! Every `B_j` of the polygon condition can be written as `e^{h(σ)} - 1`
//! with `c_i = ln(|a_i|/|a_j|)` and `μ_i = λ_i - λ_j`, so `B_j < 0` exactly
//! where `h < 0`. A log-sum-exp of affine functions is convex, its slope is
//! the softmax-weighted mean of the `μ_i` (monotone in σ), and it never
//! overflows, which is why the root isolation runs on `h` instead of `B_j`.

use crate::model::{log_sum_exp, Tolerances};

const MAX_EXPANSIONS: usize = 1100;
const MAX_BISECTIONS: usize = 4000;

#[derive(Clone, Debug, Default)]
pub(crate) struct LogExpSum {
    terms: Vec<(f64, f64)>,
}

impl LogExpSum {
    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        LogExpSum { terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self, sigma: f64) -> f64 {
        if sigma.is_infinite() {
            return self.limit(sigma);
        }
        log_sum_exp(self.terms.iter().map(|&(c, mu)| c + mu * sigma))
    }

    /// `h'(σ)`, the softmax-weighted mean slope.
    pub fn slope(&self, sigma: f64) -> f64 {
        let xs: Vec<f64> = self.terms.iter().map(|&(c, mu)| c + mu * sigma).collect();
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (mut num, mut den) = (0.0, 0.0);
        for (x, &(_, mu)) in xs.iter().zip(&self.terms) {
            let w = (x - max).exp();
            num += w * mu;
            den += w;
        }
        num / den
    }

    fn slope_range(&self) -> (f64, f64) {
        self.terms
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, mu)| {
                (lo.min(mu), hi.max(mu))
            })
    }

    /// Limit of `h` at `σ = ±∞`, decided by the extreme slopes.
    pub fn limit(&self, edge: f64) -> f64 {
        if self.terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let (lo, hi) = self.slope_range();
        let extreme = if edge < 0.0 { lo } else { hi };
        let toward = if edge < 0.0 { -extreme } else { extreme };
        if toward > 0.0 {
            f64::INFINITY
        } else if toward < 0.0 {
            f64::NEG_INFINITY
        } else {
            log_sum_exp(self.terms.iter().filter(|t| t.1 == extreme).map(|t| t.0))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    /// Bisected to floating point resolution.
    pub estimate: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// The bracket ends carry opposite signs with magnitude at least the
    /// certification margin.
    pub certified: bool,
}

/// One end of a sublevel interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum End {
    Edge(f64),
    Root(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Sublevel {
    pub argmin: f64,
    pub min_value: f64,
    pub roots: Vec<Root>,
    /// `{h < 0}` as an open interval.
    pub negative: Option<(End, End)>,
    /// Minimum within the margin of zero: sign structure not certified.
    pub tangent: bool,
}

impl Sublevel {
    pub fn end_value(&self, end: End) -> f64 {
        match end {
            End::Edge(x) => x,
            End::Root(k) => self.roots[k].estimate,
        }
    }

    pub fn negative_span(&self) -> Option<(f64, f64)> {
        self.negative.map(|(a, b)| (self.end_value(a), self.end_value(b)))
    }

    pub fn certified(&self) -> bool {
        !self.tangent && self.roots.iter().all(|r| r.certified)
    }
}

fn expand(from: f64, dir: f64, mut done: impl FnMut(f64) -> bool) -> Option<f64> {
    let mut step = 1.0f64.max(from.abs());
    for _ in 0..MAX_EXPANSIONS {
        let x = from + dir * step;
        if done(x) {
            return Some(x);
        }
        step *= 2.0;
        if !step.is_finite() {
            break;
        }
    }
    None
}

/// Bisects a predicate that is false at `a` and true at `b` down to
/// adjacent floats; returns the final `(a, b)`.
fn bisect(mut a: f64, mut b: f64, mut pred: impl FnMut(f64) -> bool) -> (f64, f64) {
    for _ in 0..MAX_BISECTIONS {
        let m = a + (b - a) / 2.0;
        if m == a || m == b || !m.is_finite() {
            break;
        }
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}

fn interior_start(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => lo + (hi - lo) / 2.0,
        (true, false) => lo + 1.0f64.max(lo.abs()),
        (false, true) => hi - 1.0f64.max(hi.abs()),
        (false, false) => 0.0,
    }
}

fn find_argmin(h: &LogExpSum, lo: f64, hi: f64) -> f64 {
    let (smin, smax) = h.slope_range();
    if smin >= 0.0 {
        return lo;
    }
    if smax <= 0.0 {
        return hi;
    }
    if lo.is_finite() && h.slope(lo) >= 0.0 {
        return lo;
    }
    if hi.is_finite() && h.slope(hi) <= 0.0 {
        return hi;
    }
    let start = interior_start(lo, hi);
    let a = if lo.is_finite() {
        lo
    } else if h.slope(start) < 0.0 {
        start
    } else {
        expand(start, -1.0, |x| h.slope(x) < 0.0).unwrap_or(f64::MIN)
    };
    let b = if hi.is_finite() {
        hi
    } else if h.slope(start) > 0.0 && start > a {
        start
    } else {
        expand(start.max(a), 1.0, |x| h.slope(x) > 0.0).unwrap_or(f64::MAX)
    };
    let (a, b) = bisect(a, b, |x| h.slope(x) > 0.0);
    if h.value(a) <= h.value(b) {
        a
    } else {
        b
    }
}

/// Locates the sign change of `h` on a monotone side `[a, b]` and certifies
/// a bracket of width at most `root_tol` around it.
fn isolate(h: &LogExpSum, a: f64, b: f64, decreasing: bool, tol: &Tolerances) -> Root {
    // `pred` is true on the side closer to b.
    let positive_at_a = decreasing;
    let pred = |x: f64| (h.value(x) > 0.0) != positive_at_a;
    let (ra, rb) = bisect(a, b, pred);
    let estimate = if h.value(ra).abs() <= h.value(rb).abs() { ra } else { rb };

    // Slightly under half so rounding keeps the width within root_tol.
    let w = tol.root_tol * 0.499;
    let lo = (estimate - w).max(a);
    let hi = (estimate + w).min(b);
    let (va, vb) = (h.value(lo), h.value(hi));
    let margin = tol.cert_margin;
    let certified = if decreasing {
        va >= margin && vb <= -margin
    } else {
        va <= -margin && vb >= margin
    };
    Root {
        estimate,
        bracket_lo: lo,
        bracket_hi: hi,
        certified,
    }
}

/// A finite point with `h < 0`: the minimiser itself, or, when the infimum
/// sits at an infinite edge, the first such point found walking towards it.
fn finite_negative(h: &LogExpSum, argmin: f64, lo: f64, hi: f64) -> Option<f64> {
    if argmin.is_finite() {
        return Some(argmin);
    }
    let start = interior_start(lo, hi);
    if h.value(start) < 0.0 {
        return Some(start);
    }
    expand(start, argmin.signum(), |x| h.value(x) < 0.0)
}

/// Analyses `{h < 0}` on the open interval `(lo, hi)`, using convexity: the
/// minimiser is found by bisection on the monotone slope, then each monotone
/// side holds at most one sign change.
pub(crate) fn sublevel(h: &LogExpSum, lo: f64, hi: f64, tol: &Tolerances) -> Sublevel {
    if h.is_empty() {
        return Sublevel {
            argmin: lo,
            min_value: f64::NEG_INFINITY,
            roots: vec![],
            negative: Some((End::Edge(lo), End::Edge(hi))),
            tangent: false,
        };
    }
    let argmin = find_argmin(h, lo, hi);
    let min_value = h.value(argmin);
    let margin = tol.cert_margin;
    let mut out = Sublevel {
        argmin,
        min_value,
        roots: vec![],
        negative: None,
        tangent: min_value.abs() <= margin,
    };
    if min_value > 0.0 {
        return out;
    }
    if min_value == 0.0 {
        // Touches zero without crossing.
        out.roots.push(Root {
            estimate: argmin,
            bracket_lo: argmin,
            bracket_hi: argmin,
            certified: false,
        });
        return out;
    }

    let left = if argmin <= lo || h.value(lo) <= 0.0 {
        End::Edge(lo)
    } else {
        let anchor = finite_negative(h, argmin, lo, hi);
        let a = if lo.is_finite() {
            Some(lo)
        } else {
            anchor.and_then(|x| expand(x, -1.0, |y| h.value(y) > 0.0))
        };
        match (a, anchor) {
            (Some(a), Some(anchor)) => {
                out.roots.push(isolate(h, a, anchor, true, tol));
                End::Root(out.roots.len() - 1)
            }
            _ => End::Edge(lo),
        }
    };
    let right = if argmin >= hi || h.value(hi) <= 0.0 {
        End::Edge(hi)
    } else {
        let anchor = finite_negative(h, argmin, lo, hi);
        let b = if hi.is_finite() {
            Some(hi)
        } else {
            anchor.and_then(|x| expand(x, 1.0, |y| h.value(y) > 0.0))
        };
        match (b, anchor) {
            (Some(b), Some(anchor)) => {
                out.roots.push(isolate(h, anchor, b, false, tol));
                End::Root(out.roots.len() - 1)
            }
            _ => End::Edge(hi),
        }
    };
    out.negative = Some((left, right));
    out
}
