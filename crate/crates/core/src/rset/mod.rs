//! The closure `R_f` of the real parts of the zeros of `f` in a strip.
//!
//! With moduli `m_j(σ) = |a_j| e^{λ_j σ}`, a point σ of the strip belongs to
//! `R_f` exactly when every `m_j` is at most the sum of the others (the
//! polygon with those side lengths closes), provided there are at least three
//! rationally independent exponents. Writing
//!
//! ```text
//! B_j(σ) = Σ_{i≠j} m_i(σ) / m_j(σ) - 1
//! ```
//!
//! `R_f` is the strip minus the union of the sets `{B_j < 0}`. Each `B_j` is
//! convex, so each of those sets is an open interval bounded by at most two
//! roots; they are pairwise disjoint, and every gap of `R_f` is one of them.
//!
//! For dependent exponents the same set is still an outer bound: every zero
//! satisfies all the inequalities by the triangle inequality.

mod convex;

use num_complex::Complex64;

pub use convex::Root;
use convex::{sublevel, LogExpSum, Sublevel};

use crate::error::{Error, Result};
use crate::model::{log_sum_exp, ExponentialSum, IndependenceStatus, Tolerances, VerticalStrip};

/// Moduli `m_j = |a_j| e^{λ_j σ}` at a fixed σ.
#[derive(Clone, Debug, PartialEq)]
pub struct TermModuli {
    pub sigma: f64,
    pub m: Vec<f64>,
    /// `ln m_j`, always finite; `m_j` itself may underflow to zero.
    pub log_m: Vec<f64>,
    pub total: f64,
    /// Tail bound at σ: `0` without a tail, `+∞` outside its validity strip.
    pub tail_epsilon: f64,
}

pub fn term_moduli(f: &ExponentialSum, sigma: f64) -> Result<TermModuli> {
    if !sigma.is_finite() {
        return Err(Error::NonFinite("sigma".into()));
    }
    let log_m: Vec<f64> = f.terms().iter().map(|t| t.log_modulus_at(sigma)).collect();
    let m: Vec<f64> = log_m.iter().map(|l| l.exp()).collect();
    let total: f64 = m.iter().sum();
    if m.iter().any(|x| x.is_infinite()) || total.is_infinite() {
        return Err(Error::Overflow { sigma });
    }
    Ok(TermModuli {
        sigma,
        m,
        log_m,
        total,
        tail_epsilon: tail_epsilon_at(f, sigma),
    })
}

fn tail_epsilon_at(f: &ExponentialSum, sigma: f64) -> f64 {
    match f.tail() {
        None => 0.0,
        Some(t) => t.epsilon_at(sigma).unwrap_or(f64::INFINITY),
    }
}

/// `ln(B_j + 1)` as a log-sum-exp; with `tail_eps` the omitted terms are
/// added at their bound, giving the upper end of the enclosure.
fn b_log_function(f: &ExponentialSum, j: usize, tail_eps: f64) -> LogExpSum {
    let terms = f.terms();
    let tj = &terms[j];
    let (lj, mu_j) = (tj.log_abs_coeff(), tj.exponent());
    let mut parts: Vec<(f64, f64)> = terms
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, t)| (t.log_abs_coeff() - lj, t.exponent() - mu_j))
        .collect();
    if tail_eps > 0.0 {
        parts.push((tail_eps.ln() - lj, -mu_j));
    }
    LogExpSum::new(parts)
}

/// Enclosure of `B_j(σ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BValue {
    pub j: usize,
    pub lo: f64,
    pub hi: f64,
}

/// `B_j(σ) = Σ_{i≠j} m_i/m_j - 1`, widened by `ε/m_j` for a tail.
pub fn b_value(f: &ExponentialSum, j: usize, sigma: f64) -> Result<BValue> {
    f.term(j)?;
    if !sigma.is_finite() {
        return Err(Error::NonFinite("sigma".into()));
    }
    let lo = b_log_function(f, j, 0.0).value(sigma).exp_m1();
    let eps = tail_epsilon_at(f, sigma);
    let hi = if eps == 0.0 {
        lo
    } else if eps.is_infinite() {
        f64::INFINITY
    } else {
        b_log_function(f, j, eps).value(sigma).exp_m1()
    };
    if lo.is_nan() || hi.is_nan() {
        return Err(Error::NonFinite(format!("B_{j} at sigma = {sigma}")));
    }
    Ok(BValue { j, lo, hi })
}

/// Roots of `B_j` in a strip and the open interval where it is negative.
#[derive(Clone, Debug, PartialEq)]
pub struct BRoots {
    pub j: usize,
    /// At most two, in increasing order.
    pub roots: Vec<Root>,
    pub negative_interval: Option<(f64, f64)>,
    pub minimizer: f64,
    /// `B_j` at the minimiser (or its limit at an infinite strip edge).
    pub min_value: f64,
    pub certified: bool,
}

impl BRoots {
    fn from_sublevel(j: usize, s: &Sublevel) -> Self {
        BRoots {
            j,
            roots: s.roots.clone(),
            negative_interval: s.negative_span(),
            minimizer: s.argmin,
            min_value: s.min_value.exp_m1(),
            certified: s.certified(),
        }
    }
}

/// Root isolation for `B_j` on `strip` using the finite terms only.
pub fn b_roots(f: &ExponentialSum, j: usize, strip: VerticalStrip, tol: &Tolerances) -> Result<BRoots> {
    f.term(j)?;
    tol.validate()?;
    let s = sublevel(&b_log_function(f, j, 0.0), strip.alpha(), strip.beta(), tol);
    Ok(BRoots::from_sublevel(j, &s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointKind {
    /// A root of some `B_j`; the point belongs to `R_f`.
    ClosedBoundary,
    /// An edge of the open strip, not itself part of `R_f`.
    StripEdge,
    /// Borders a region whose status the tail bound leaves open.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_kind: EndpointKind,
    pub hi_kind: EndpointKind,
    /// Index of the term whose equation `B_j = 0` produces the endpoint.
    pub lo_attribution: Option<usize>,
    pub hi_attribution: Option<usize>,
}

impl Interval {
    fn plain(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_kind: EndpointKind::Undetermined,
            hi_kind: EndpointKind::Undetermined,
            lo_attribution: None,
            hi_attribution: None,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, sigma: f64) -> bool {
        self.lo <= sigma && sigma <= self.hi
    }

    pub fn distance_to(&self, sigma: f64) -> f64 {
        if sigma < self.lo {
            self.lo - sigma
        } else if sigma > self.hi {
            sigma - self.hi
        } else {
            0.0
        }
    }
}

/// The open set `{B_j < 0}` removed from the strip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativeInterval {
    pub j: usize,
    pub lo: f64,
    pub hi: f64,
    pub roots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RSetResult {
    pub strip: VerticalStrip,
    /// Sorted, pairwise disjoint members of `R_f`.
    pub intervals: Vec<Interval>,
    /// Hull of `intervals`; `None` when the set is empty.
    pub a_f: Option<f64>,
    pub b_f: Option<f64>,
    pub certified: bool,
    pub uncertified_regions: Vec<Interval>,
    pub caveats: Vec<String>,
    pub negative_intervals: Vec<NegativeInterval>,
    /// Root isolation of each `B_j` (finite terms), by term index.
    pub b_roots: Vec<BRoots>,
}

impl RSetResult {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, sigma: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(sigma))
    }

    /// Distance from σ to the reported set, counting uncertified regions as
    /// possible members.
    pub fn distance_to(&self, sigma: f64) -> f64 {
        self.intervals
            .iter()
            .chain(&self.uncertified_regions)
            .map(|i| i.distance_to(sigma))
            .fold(f64::INFINITY, f64::min)
    }

    /// Maximal gaps strictly inside the strip, as `(lo, hi)` pairs of
    /// neighbouring interval ends.
    pub fn internal_gaps(&self) -> Vec<(Interval, Interval)> {
        self.intervals.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Member,
    Excluded,
    Uncertain,
}

fn representative(x: f64, y: f64) -> f64 {
    match (x.is_finite(), y.is_finite()) {
        (true, true) => x + (y - x) / 2.0,
        (false, true) => y - 1.0f64.max(y.abs()),
        (true, false) => x + 1.0f64.max(x.abs()),
        (false, false) => 0.0,
    }
}

fn inside(span: Option<(f64, f64)>, p: f64) -> bool {
    span.is_some_and(|(a, b)| a < p && p < b)
}

fn merge_regions(mut regions: Vec<Interval>) -> Vec<Interval> {
    regions.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::new();
    for r in regions {
        match out.last_mut() {
            Some(last) if r.lo <= last.hi => last.hi = last.hi.max(r.hi),
            _ => out.push(r),
        }
    }
    out
}

fn margin_regions(s: &Sublevel, tol: &Tolerances, out: &mut Vec<Interval>) {
    for r in s.roots.iter().filter(|r| !r.certified) {
        out.push(Interval::plain(r.bracket_lo, r.bracket_hi));
    }
    if s.tangent && s.argmin.is_finite() {
        out.push(Interval::plain(s.argmin - tol.root_tol, s.argmin + tol.root_tol));
    }
}

/// Computes `R_f ∩ (α, β)` as a union of closed intervals.
///
/// Without a tail every sign is decided on the finite sum and the result is
/// certified when all root brackets clear `cert_margin` and the exponents are
/// verified independent. With a tail, σ is a certified member when the
/// finite `B_j` are all nonnegative and certified excluded when some `B_j`
/// stays negative after adding `ε/m_j`; what lies between is reported in
/// `uncertified_regions`, as is the part of the strip outside the tail's
/// validity strip.
pub fn compute_rset(f: &ExponentialSum, strip: VerticalStrip, tol: &Tolerances) -> Result<RSetResult> {
    tol.validate()?;
    let n = f.len();
    if n == 0 {
        return Err(Error::EmptySum);
    }
    let (domain, eps) = match f.tail() {
        Some(t) => {
            if !strip.contains_strip(&t.valid_on()) {
                return Err(Error::InvalidTail(
                    "tail validity strip must lie inside the working strip".into(),
                ));
            }
            (t.valid_on(), t.epsilon())
        }
        None => (strip, 0.0),
    };
    let (lo, hi) = (domain.alpha(), domain.beta());

    let lower: Vec<Sublevel> = (0..n)
        .map(|j| sublevel(&b_log_function(f, j, 0.0), lo, hi, tol))
        .collect();
    let upper: Vec<Sublevel> = if eps > 0.0 {
        (0..n)
            .map(|j| sublevel(&b_log_function(f, j, eps), lo, hi, tol))
            .collect()
    } else {
        lower.clone()
    };
    // Where the finite part is smaller than the tail, an omitted term could
    // dominate everything.
    let dominance = (eps > 0.0).then(|| {
        let g = LogExpSum::new(
            f.terms()
                .iter()
                .map(|t| (t.log_abs_coeff() - eps.ln(), t.exponent()))
                .collect(),
        );
        sublevel(&g, lo, hi, tol)
    });

    let mut negative_intervals: Vec<NegativeInterval> = lower
        .iter()
        .enumerate()
        .filter_map(|(j, s)| {
            s.negative_span().map(|(a, b)| NegativeInterval {
                j,
                lo: a,
                hi: b,
                roots: s.roots.len(),
            })
        })
        .collect();
    negative_intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    // Disjoint open sets whose ends meet within root_tol: the member
    // component between them is narrower than we can resolve.
    let mut unresolved: Vec<(f64, f64)> = Vec::new();
    if n >= 3 {
        for w in negative_intervals.windows(2) {
            if w[0].hi - w[1].lo > tol.root_tol {
                return Err(Error::InvariantViolated(format!(
                    "negative sets of B_{} and B_{} overlap",
                    w[0].j, w[1].j
                )));
            }
            if w[1].lo - w[0].hi < tol.root_tol {
                let half = tol.root_tol / 2.0;
                let (a, b) = (w[0].hi.min(w[1].lo) - half, w[0].hi.max(w[1].lo) + half);
                unresolved.push((a.max(lo), b.min(hi)));
            }
        }
    }

    let mut uncertified: Vec<Interval> = Vec::new();
    if lo > strip.alpha() {
        uncertified.push(Interval::plain(strip.alpha(), lo));
    }
    if hi < strip.beta() {
        uncertified.push(Interval::plain(hi, strip.beta()));
    }
    for &(a, b) in &unresolved {
        uncertified.push(Interval::plain(a, b));
    }
    for s in lower.iter().chain(if eps > 0.0 { upper.iter() } else { [].iter() }) {
        margin_regions(s, tol, &mut uncertified);
    }
    if let Some(d) = &dominance {
        margin_regions(d, tol, &mut uncertified);
    }

    let intervals = if n == 2 && eps == 0.0 {
        two_term_point(f, domain)
    } else {
        let mut points = vec![lo, hi];
        for s in lower.iter().chain(&upper).chain(dominance.iter()) {
            if let Some((a, b)) = s.negative_span() {
                points.extend([a, b]);
            }
        }
        points.retain(|&x| lo <= x && x <= hi);
        points.sort_by(f64::total_cmp);
        points.dedup();

        let mut segments: Vec<(f64, f64, Status)> = Vec::new();
        for w in points.windows(2) {
            let p = representative(w[0], w[1]);
            let status = if upper.iter().any(|s| inside(s.negative_span(), p)) {
                Status::Excluded
            } else if lower.iter().any(|s| inside(s.negative_span(), p))
                || dominance.as_ref().is_some_and(|d| inside(d.negative_span(), p))
                || unresolved.iter().any(|&(a, b)| a <= p && p <= b)
            {
                Status::Uncertain
            } else {
                Status::Member
            };
            match segments.last_mut() {
                Some(last) if last.2 == status && last.1 == w[0] => last.1 = w[1],
                _ => segments.push((w[0], w[1], status)),
            }
        }
        for seg in segments.iter().filter(|s| s.2 == Status::Uncertain) {
            uncertified.push(Interval::plain(seg.0, seg.1));
        }
        segments
            .iter()
            .filter(|s| s.2 == Status::Member)
            .map(|&(a, b, _)| {
                let (lo_kind, lo_attr) = endpoint_meta(&lower, a, strip, true);
                let (hi_kind, hi_attr) = endpoint_meta(&lower, b, strip, false);
                Interval {
                    lo: a,
                    hi: b,
                    lo_kind,
                    hi_kind,
                    lo_attribution: lo_attr,
                    hi_attribution: hi_attr,
                }
            })
            .collect::<Vec<_>>()
    };

    let independence = f.independence();
    if n >= 3 && independence == &IndependenceStatus::Verified {
        if let Some(bad) = intervals.iter().find(|i| i.lo >= i.hi) {
            return Err(Error::InvariantViolated(format!(
                "isolated point {} with independent exponents",
                bad.lo
            )));
        }
    }

    let uncertified_regions = merge_regions(uncertified);
    let mut caveats = Vec::new();
    if n >= 3 {
        match independence {
            IndependenceStatus::Verified => {}
            IndependenceStatus::DeclaredUnverified => caveats.push("independence declared, unverified".to_string()),
            IndependenceStatus::Dependent { certificate } => caveats.push(format!(
                "exponents rationally dependent ({certificate}): the set is an outer bound for the zero projections"
            )),
            IndependenceStatus::Unknown => caveats
                .push("independence not established: the set is an outer bound for the zero projections".to_string()),
        }
    }
    if f.tail().is_some() {
        caveats.push(format!(
            "tail bound {eps} valid on ({}, {}); regions it cannot decide are uncertified",
            lo, hi
        ));
    }
    if !unresolved.is_empty() {
        caveats.push(format!(
            "{} component(s) narrower than root_tol, reported as uncertified",
            unresolved.len()
        ));
    }
    if !uncertified_regions.is_empty() {
        caveats.push(format!("{} uncertified region(s)", uncertified_regions.len()));
    }
    let certified = uncertified_regions.is_empty() && (n <= 2 || independence == &IndependenceStatus::Verified);

    Ok(RSetResult {
        strip,
        a_f: intervals.first().map(|i| i.lo),
        b_f: intervals.last().map(|i| i.hi),
        intervals,
        certified,
        uncertified_regions,
        caveats,
        negative_intervals,
        b_roots: lower
            .iter()
            .enumerate()
            .map(|(j, s)| BRoots::from_sublevel(j, s))
            .collect(),
    })
}

fn endpoint_meta(lower: &[Sublevel], x: f64, strip: VerticalStrip, is_lo: bool) -> (EndpointKind, Option<usize>) {
    for (j, s) in lower.iter().enumerate() {
        let Some((l, r)) = s.negative_span() else { continue };
        let hit = if is_lo { r == x } else { l == x };
        let is_root = s
            .negative
            .map(|(a, b)| matches!(if is_lo { b } else { a }, convex::End::Root(_)))
            .unwrap_or(false);
        if hit && is_root {
            return (EndpointKind::ClosedBoundary, Some(j));
        }
    }
    if x == strip.alpha() || x == strip.beta() {
        (EndpointKind::StripEdge, None)
    } else {
        (EndpointKind::Undetermined, None)
    }
}

/// With two terms the zeros lie on the vertical line where `m_1 = m_2`.
fn two_term_point(f: &ExponentialSum, domain: VerticalStrip) -> Vec<Interval> {
    let t = f.terms();
    let sigma = (t[0].log_abs_coeff() - t[1].log_abs_coeff()) / (t[1].exponent() - t[0].exponent());
    if !domain.contains(sigma) {
        return vec![];
    }
    // The smaller exponent dominates to the left.
    vec![Interval {
        lo: sigma,
        hi: sigma,
        lo_kind: EndpointKind::ClosedBoundary,
        hi_kind: EndpointKind::ClosedBoundary,
        lo_attribution: Some(0),
        hi_attribution: Some(1),
    }]
}

/// A single term dominating the rest, tail included, on a closed interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmptyCertificate {
    pub j: usize,
    pub lo: f64,
    pub hi: f64,
    /// Largest value of `ln(1 + B_j)` (upper enclosure) at the two ends.
    pub worst: f64,
}

/// Certifies `R_f ∩ [lo, hi] = ∅` by finding `j` with the tail-widened
/// `ln(1 + B_j) < -cert_margin` at both ends; convexity carries the sign
/// across the whole interval. Returns `None` for infinite ends or when no
/// single term dominates.
pub fn certify_empty(f: &ExponentialSum, lo: f64, hi: f64, tol: &Tolerances) -> Option<EmptyCertificate> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return None;
    }
    (0..f.len())
        .filter_map(|j| {
            let a = b_value(f, j, lo).ok()?.hi.ln_1p();
            let b = b_value(f, j, hi).ok()?.hi.ln_1p();
            let worst = a.max(b);
            (worst < -tol.cert_margin).then_some(EmptyCertificate { j, lo, hi, worst })
        })
        .min_by(|x, y| x.worst.total_cmp(&y.worst))
}

/// Infimum over `t` of `|f(σ + it)|` for independent exponents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfModulus {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// The enclosure contains both zero and positive values.
    pub straddles_zero: bool,
}

/// `max(0, 2 max_j m_j - Σ m_j)`: the polygon with sides `m_j` closes iff
/// no side exceeds the sum of the others, and otherwise the best it can do
/// is align every other side against the longest.
pub fn inf_modulus(f: &ExponentialSum, sigma: f64) -> InfModulus {
    let log_m: Vec<f64> = f.terms().iter().map(|t| t.log_modulus_at(sigma)).collect();
    let top = log_m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let signed = if top == f64::NEG_INFINITY {
        0.0
    } else {
        let rel: f64 = log_m.iter().map(|l| (l - top).exp()).sum();
        top.exp() * (2.0 - rel)
    };
    let eps = tail_epsilon_at(f, sigma);
    let lo = (signed - eps).max(0.0);
    let hi = (signed + eps).max(0.0);
    InfModulus {
        value: if eps == 0.0 { hi } else { lo + (hi - lo) / 2.0 },
        lo,
        hi,
        straddles_zero: lo == 0.0 && hi > 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Boundary,
    Interior,
    Exterior,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryClass {
    pub kind: BoundaryKind,
    pub equality_index: Option<usize>,
    pub b_values: Vec<BValue>,
}

/// Classifies σ against the polygon inequalities. The equality window is
/// `cert_margin` applied to `ln(1 + B_j)`, a relative measure that agrees
/// with `B_j` to first order. At a boundary point exactly one inequality may
/// be an equality; two near-equalities are reported as an error.
pub fn classify_boundary(f: &ExponentialSum, sigma: f64, tol: &Tolerances) -> Result<BoundaryClass> {
    let margin = tol.cert_margin;
    let b_values = (0..f.len()).map(|j| b_value(f, j, sigma)).collect::<Result<Vec<_>>>()?;
    if b_values.iter().any(|b| b.hi.ln_1p() < -margin) {
        return Ok(BoundaryClass {
            kind: BoundaryKind::Exterior,
            equality_index: None,
            b_values,
        });
    }
    let near: Vec<usize> = b_values
        .iter()
        .filter(|b| b.lo.ln_1p() <= margin)
        .map(|b| b.j)
        .collect();
    match near.as_slice() {
        [] => Ok(BoundaryClass {
            kind: BoundaryKind::Interior,
            equality_index: None,
            b_values,
        }),
        [j] => Ok(BoundaryClass {
            kind: BoundaryKind::Boundary,
            equality_index: Some(*j),
            b_values,
        }),
        _ => Err(Error::AmbiguousBoundary { sigma, indices: near }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonemptyCheck {
    /// Whole plane, finite sum, at least three verified independent exponents.
    pub guaranteed: bool,
    pub witness: Option<f64>,
}

/// Looks for a point of `R_f` on the real line, widening the search strip
/// until one is found.
pub fn check_nonempty_entire(f: &ExponentialSum) -> NonemptyCheck {
    let guaranteed = f.tail().is_none() && f.len() >= 3 && f.independence() == &IndependenceStatus::Verified;
    let tol = Tolerances::default();
    let all_nonneg = |s: f64| (0..f.len()).all(|j| b_value(f, j, s).is_ok_and(|b| b.lo >= 0.0));
    if !f.is_empty() && all_nonneg(0.0) {
        return NonemptyCheck {
            guaranteed,
            witness: Some(0.0),
        };
    }
    let mut half_width = 1.0f64;
    for _ in 0..64 {
        let Ok(strip) = VerticalStrip::new(-half_width, half_width) else {
            break;
        };
        if let Ok(r) = compute_rset(f, strip, &tol) {
            let nearest = r
                .intervals
                .iter()
                .min_by(|a, b| a.distance_to(0.0).total_cmp(&b.distance_to(0.0)));
            if let Some(i) = nearest {
                return NonemptyCheck {
                    guaranteed,
                    witness: Some(i.lo + (i.hi - i.lo) / 2.0),
                };
            }
        }
        half_width *= 2.0;
    }
    NonemptyCheck {
        guaranteed,
        witness: None,
    }
}

/// Comparison of `lim Σ m_i` with `2 sup m_i` at one strip edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCondition {
    /// False for an infinite edge.
    pub applicable: bool,
    /// `Σ m_i` over the finite terms at the edge.
    pub lhs: f64,
    /// `2 sup m_i`, counting the tail bound as a possible term where it
    /// applies.
    pub rhs: f64,
    /// Strict inequality established; ties and unknown tails give false.
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeConditions {
    pub cond_a: EdgeCondition,
    pub cond_b: EdgeCondition,
    /// Sufficient only.
    pub implies_nonempty: bool,
}

const TIE_REL: f64 = 1e-12;

fn edge_condition(f: &ExponentialSum, x: f64) -> EdgeCondition {
    if !x.is_finite() || f.is_empty() {
        return EdgeCondition {
            applicable: false,
            lhs: f64::NAN,
            rhs: f64::NAN,
            holds: false,
        };
    }
    let log_m: Vec<f64> = f.terms().iter().map(|t| t.log_modulus_at(x)).collect();
    let log_sum = log_sum_exp(log_m.iter().copied());
    let eps = tail_epsilon_at(f, x);
    let mut log_sup = log_m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if eps.is_finite() {
        log_sup = log_sup.max(eps.ln());
    }
    let log_rhs = std::f64::consts::LN_2 + log_sup;
    EdgeCondition {
        applicable: true,
        lhs: log_sum.exp(),
        rhs: log_rhs.exp(),
        holds: eps.is_finite() && log_sum - log_rhs > TIE_REL,
    }
}

/// Edge conditions under which a strip of almost periodicity must contain
/// real projections of zeros: the moduli sum at an edge exceeds twice the
/// largest modulus there.
pub fn check_edge_conditions(f: &ExponentialSum, strip: VerticalStrip) -> EdgeConditions {
    let cond_a = edge_condition(f, strip.alpha());
    let cond_b = edge_condition(f, strip.beta());
    EdgeConditions {
        cond_a,
        cond_b,
        implies_nonempty: cond_a.holds || cond_b.holds,
    }
}

/// `|a_j| e^{λ_j σ}` as complex phase-free magnitudes, for callers that want
/// the polygon sides directly.
pub fn polygon_sides(f: &ExponentialSum, sigma: f64) -> Vec<f64> {
    f.terms().iter().map(|t| t.log_modulus_at(sigma).exp()).collect()
}

/// Direct value of the polygon with sides `m` and turning angles `theta`
/// (first side fixed at angle zero); used by brute-force checks.
pub fn polygon_closure(m: &[f64], theta: &[f64]) -> f64 {
    let mut z = Complex64::new(m.first().copied().unwrap_or(0.0), 0.0);
    for (mj, th) in m.iter().skip(1).zip(theta) {
        z += Complex64::from_polar(*mj, *th);
    }
    z.norm()
}
