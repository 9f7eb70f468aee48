//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p apzeros --test acceptance`.

mod common;

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use apzeros::cli::{verify, SumSpecFile};
use apzeros::rset::{
    b_roots, b_value, certify_empty, check_nonempty_entire, classify_boundary, compute_rset, inf_modulus,
    polygon_sides, EndpointKind, RSetResult,
};
use apzeros::zerofind::{crosscheck_rset, locate_zeros, winding_number, Rectangle};
use apzeros::{ExponentialSum, Tolerances, VerticalStrip};
use num_complex::Complex64;

/// Root of `2^{-σ} + 3^{-σ} = 1` from a 40-digit bisection done outside
/// this crate: 0.78788491102586978362855591729843...
const ZETA3_RIGHT_END: f64 = 0.7878849110258698;

/// `π / ln 2`, the first zero of `1 + 2^{-s}` above the real axis.
const TWO_TERM_ZERO: f64 = 4.532360141827194;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn whole(f: &ExponentialSum) -> RSetResult {
    compute_rset(f, VerticalStrip::whole_plane(), &Tolerances::default()).expect("rset")
}

fn zeta3() -> ExponentialSum {
    ExponentialSum::zeta_partial_sum(3).unwrap()
}

fn label(f: &ExponentialSum, j: usize) -> usize {
    f.terms()[j].label() + 1
}

fn zeta3_interval() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let r = compute_rset(&zeta3(), VerticalStrip::new(-3.0, 3.0).unwrap(), &tol).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.intervals.len() == 1, || format!("{} intervals", r.intervals.len()))?;
    let iv = r.intervals[0];
    ensure((iv.lo + 1.0).abs() <= 1e-12, || format!("left end {}", iv.lo))?;
    ensure((iv.hi - ZETA3_RIGHT_END).abs() <= 1e-9, || {
        format!("right end {}", iv.hi)
    })?;
    within(elapsed, 1.0)?;
    Ok(format!(
        "[{}, {}] in {:.1} ms",
        iv.lo,
        iv.hi,
        elapsed.as_secs_f64() * 1e3
    ))
}

/// Indices `j` with `|B_j(σ)| ≤ 1e-9`.
fn small_b(f: &ExponentialSum, sigma: f64) -> Vec<usize> {
    (0..f.len())
        .filter(|&j| b_value(f, j, sigma).map(|b| b.lo.abs() <= 1e-9).unwrap_or(false))
        .collect()
}

fn boundary_uniqueness(corpus: &[ExponentialSum]) -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let f = zeta3();
    let r = compute_rset(&f, VerticalStrip::new(-3.0, 3.0).unwrap(), &tol).unwrap();
    let iv = r.intervals[0];
    for (sigma, want) in [(iv.lo, 3), (iv.hi, 1)] {
        let class = classify_boundary(&f, sigma, &tol).map_err(|e| e.to_string())?;
        let got = class.equality_index.map(|j| label(&f, j));
        ensure(got == Some(want), || {
            format!("at {sigma}: equality index {got:?}, want {want}")
        })?;
        let small = small_b(&f, sigma);
        ensure(small.len() == 1, || format!("at {sigma}: {} small B_j", small.len()))?;
    }
    let mut endpoints = 0usize;
    for (k, f) in corpus.iter().enumerate() {
        let r = whole(f);
        for iv in &r.intervals {
            for (sigma, kind) in [(iv.lo, iv.lo_kind), (iv.hi, iv.hi_kind)] {
                if kind != EndpointKind::ClosedBoundary {
                    continue;
                }
                endpoints += 1;
                let small = small_b(f, sigma);
                ensure(small.len() == 1, || {
                    format!("sum {k} at σ = {sigma}: {} indices with |B_j| ≤ 1e-9", small.len())
                })?;
            }
        }
    }
    within(start.elapsed(), 30.0)?;
    Ok(format!("{endpoints} corpus endpoints, each with a single equality"))
}

fn at_most_two_roots(corpus: &[ExponentialSum]) -> Outcome {
    let tol = Tolerances::default();
    let strip = VerticalStrip::new(-3.0, 3.0).unwrap();
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for (k, f) in corpus.iter().enumerate() {
        for j in 0..f.len() {
            let br = b_roots(f, j, strip, &tol).map_err(|e| e.to_string())?;
            ensure(br.roots.len() <= 2, || {
                format!("sum {k}, B_{j}: {} roots", br.roots.len())
            })?;
            let h = 6.0 / 1001.0;
            let b = |s: f64| b_value(f, j, s).unwrap().lo;
            for i in 0..1000 {
                let s = -3.0 + h * (i as f64 + 1.0);
                let d2 = b(s - h) - 2.0 * b(s) + b(s + h);
                worst = worst.min(d2);
                checked += 1;
                ensure(d2 >= -1e-7, || {
                    format!("sum {k}, B_{j} at {s}: second difference {d2:e}")
                })?;
            }
        }
    }
    Ok(format!("{checked} second differences, most negative {worst:e}"))
}

fn no_isolated_points(corpus: &[ExponentialSum]) -> Outcome {
    let tol = Tolerances::default();
    let mut count = 0usize;
    let mut narrowest = f64::INFINITY;
    let mut unresolved = 0usize;
    for (k, f) in corpus.iter().enumerate() {
        let r = whole(f);
        unresolved += r
            .caveats
            .iter()
            .filter(|c| c.contains("narrower than root_tol"))
            .count();
        for iv in &r.intervals {
            count += 1;
            narrowest = narrowest.min(iv.width());
            ensure(iv.width() > 10.0 * tol.root_tol, || {
                format!("sum {k}: interval [{}, {}]", iv.lo, iv.hi)
            })?;
        }
    }
    Ok(format!(
        "{count} intervals, narrowest {narrowest:.3e}; \
         {unresolved} sum(s) with components below root_tol left uncertified"
    ))
}

fn gap_attribution(corpus: &[ExponentialSum]) -> Outcome {
    let tol = Tolerances::default();
    let (mut gaps, mut unresolved) = (0usize, 0usize);
    for (k, f) in corpus.iter().enumerate() {
        let r = whole(f);
        for (left, right) in r.internal_gaps() {
            gaps += 1;
            let (a, b) = (left.hi, right.lo);
            let j = left.hi_attribution;
            ensure(j.is_some() && j == right.lo_attribution, || {
                format!(
                    "sum {k}: gap ({a}, {b}) attributed {:?} / {:?}",
                    j, right.lo_attribution
                )
            })?;
            let j = j.unwrap();
            let br = b_roots(f, j, r.strip, &tol).map_err(|e| e.to_string())?;
            ensure(br.roots.len() == 2, || {
                format!("sum {k}: B_{j} has {} roots", br.roots.len())
            })?;
            let (r0, r1) = (br.roots[0].estimate, br.roots[1].estimate);
            ensure((r0 - a).abs() <= tol.root_tol && (r1 - b).abs() <= tol.root_tol, || {
                format!("sum {k}: gap ({a}, {b}) vs roots ({r0}, {r1})")
            })?;
            let owners = (0..f.len())
                .filter(|&i| b_value(f, i, (a + b) / 2.0).unwrap().hi < 0.0)
                .count();
            ensure(owners == 1, || {
                format!("sum {k}: {owners} negative B_j at the gap centre")
            })?;
        }
        let mut neg = r.negative_intervals.clone();
        neg.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        // ends are roots known to root_tol; closer than that the order is unresolved
        for w in neg.windows(2) {
            ensure(w[0].hi <= w[1].lo + tol.root_tol, || {
                format!("sum {k}: negative intervals of B_{} and B_{} overlap", w[0].j, w[1].j)
            })?;
            if w[1].lo - w[0].hi < tol.root_tol {
                unresolved += 1;
            }
        }
    }
    Ok(format!(
        "{gaps} internal gaps, each from one equation with two roots; \
         {unresolved} pair(s) of negative sets meeting within root_tol"
    ))
}

fn nonempty_entire(corpus: &[ExponentialSum]) -> Outcome {
    for (k, f) in corpus.iter().enumerate() {
        let check = check_nonempty_entire(f);
        let sigma = check.witness.ok_or_else(|| format!("sum {k}: no witness"))?;
        ensure((0..f.len()).all(|j| b_value(f, j, sigma).unwrap().lo >= 0.0), || {
            format!("sum {k}: witness {sigma} has a negative B_j")
        })?;
    }
    Ok(format!("{} witnesses", corpus.len()))
}

fn truncated_series() -> Outcome {
    let start = Instant::now();
    let spec = SumSpecFile::parse(include_str!("../examples/truncated-series.json")).and_then(|s| s.load())?;
    let report = verify(&spec, 50.0, 64);
    let elapsed = start.elapsed();
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    ensure(failed.is_empty(), || format!("failed checks {failed:?}"))?;
    ensure(report.empty_certificate == Some((-0.99, -0.01)), || {
        format!("empty certificate {:?}", report.empty_certificate)
    })?;
    let cert = certify_empty(&spec.sum, -0.99, -0.01, &spec.tol).ok_or("no certificate")?;
    let t = &spec.sum.terms()[cert.j];
    ensure(t.exponent() == 1.0 && t.label() == 0, || {
        format!("certified by term {}", t.label() + 1)
    })?;
    ensure(-cert.worst > spec.tol.cert_margin, || format!("margin {}", -cert.worst))?;
    within(elapsed, 5.0)?;
    Ok(format!(
        "empty on [-0.99, -0.01] by the e^s term, log-margin {:.3}, {:.0} ms",
        -cert.worst,
        elapsed.as_secs_f64() * 1e3
    ))
}

fn zero_projections() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut sums = vec![(zeta3(), VerticalStrip::new(-3.0, 3.0).unwrap())];
    sums.extend(
        common::small_sums(8, 10)
            .into_iter()
            .map(|f| (f, VerticalStrip::whole_plane())),
    );
    let mut zeros = 0usize;
    for (k, (f, strip)) in sums.iter().enumerate() {
        let rep = crosscheck_rset(f, *strip, 200.0, &tol).map_err(|e| e.to_string())?;
        ensure(rep.complete, || format!("sum {k}: search incomplete"))?;
        ensure(rep.sound(), || {
            format!("sum {k}: real parts {:?} off the set", rep.violations)
        })?;
        zeros += rep.zeros.len();
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "{zeros} zeros in {} sums, none off the set, {:.1} s",
        sums.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn polygon_brute_force(corpus: &[ExponentialSum]) -> Outcome {
    let mut worst = 0.0f64;
    let mut samples = 0usize;
    for (k, f) in corpus.iter().enumerate().filter(|(_, f)| f.len() == 3) {
        let r = whole(f);
        let (a, b) = match (r.a_f, r.b_f) {
            (Some(a), Some(b)) => (a - 1.0, b + 1.0),
            _ => (-3.0, 3.0),
        };
        for i in 0..20 {
            let sigma = a + (b - a) * i as f64 / 19.0;
            let m = polygon_sides(f, sigma);
            let brute = common::brute_force_polygon([m[0], m[1], m[2]], 2000);
            let closed = inf_modulus(f, sigma).value;
            let diff = (brute - closed).abs();
            worst = worst.max(diff);
            samples += 1;
            ensure(diff <= 1e-3, || {
                format!("sum {k} at {sigma}: closed {closed}, brute {brute}")
            })?;
        }
    }
    Ok(format!("{samples} samples, largest difference {worst:.2e}"))
}

fn shifted(f: &ExponentialSum, mu: f64) -> ExponentialSum {
    // coordinates describe the unshifted exponents, so they are dropped
    let mut raw = f.to_raw();
    raw.independent = f.independence().assumed();
    raw.basis_symbols = None;
    for t in &mut raw.terms {
        t.exponent += mu;
        t.coords = None;
    }
    apzeros::model::validate_sum(&raw).unwrap()
}

fn rotated(f: &ExponentialSum, c: Complex64, single: Option<(usize, f64)>) -> ExponentialSum {
    let mut raw = f.to_raw();
    for (i, t) in raw.terms.iter_mut().enumerate() {
        t.coeff *= c;
        if let Some((k, phi)) = single {
            if i == k {
                t.coeff *= Complex64::from_polar(1.0, phi);
            }
        }
    }
    apzeros::model::validate_sum(&raw).unwrap()
}

fn same_endpoints(a: &RSetResult, b: &RSetResult) -> Result<f64, String> {
    ensure(a.intervals.len() == b.intervals.len(), || {
        format!("{} vs {} intervals", a.intervals.len(), b.intervals.len())
    })?;
    let mut worst = 0.0f64;
    for (x, y) in a.intervals.iter().zip(&b.intervals) {
        for (p, q) in [(x.lo, y.lo), (x.hi, y.hi)] {
            if p.is_infinite() || q.is_infinite() {
                ensure(p == q, || format!("{p} vs {q}"))?;
            } else {
                worst = worst.max((p - q).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("endpoints differ by {worst:e}"))?;
    Ok(worst)
}

fn invariances(corpus: &[ExponentialSum]) -> Outcome {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut sums: Vec<ExponentialSum> = vec![zeta3()];
    sums.extend(corpus.iter().take(20).cloned());
    for (k, f) in sums.iter().enumerate() {
        let base = whole(f);
        for _ in 0..10 {
            let mu = rng.gen_range(-2.0..2.0);
            let d = same_endpoints(&base, &whole(&shifted(f, mu))).map_err(|e| format!("sum {k}, shift {mu}: {e}"))?;
            worst = worst.max(d);
        }
        let c = Complex64::from_polar(rng.gen_range(0.1..10.0), rng.gen_range(0.0..2.0 * PI));
        let single = (rng.gen_range(0..f.len()), rng.gen_range(0.0..2.0 * PI));
        for g in [rotated(f, c, None), rotated(f, Complex64::new(1.0, 0.0), Some(single))] {
            worst = worst.max(same_endpoints(&base, &whole(&g)).map_err(|e| format!("sum {k}, rotation: {e}"))?);
        }
    }
    let mut windings = 0usize;
    let f = zeta3();
    let rects = [
        Rectangle::new(-1.0, 1.0, 0.0, 30.0).unwrap(),
        Rectangle::new(-0.5, 0.9, 10.0, 50.0).unwrap(),
        Rectangle::new(1.0, 2.0, 0.0, 10.0).unwrap(),
    ];
    for rect in &rects {
        let base = winding_number(&f, rect, &tol).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let mu = rng.gen_range(-2.0..2.0);
            let w = winding_number(&shifted(&f, mu), rect, &tol).map_err(|e| e.to_string())?;
            ensure(w == base, || format!("winding {base} became {w} under e^({mu}s)"))?;
            windings += 1;
        }
    }
    Ok(format!(
        "{} sums shifted and rotated, endpoint drift {worst:.1e}; {windings} windings unchanged",
        sums.len()
    ))
}

fn winding_sanity() -> Outcome {
    let tol = Tolerances::default();
    let f = ExponentialSum::real([(1.0, 1.0), (-1.0, 0.0)]).unwrap();
    let w = |r: Rectangle| winding_number(&f, &r, &tol).map_err(|e| e.to_string());
    let cases = [
        (Rectangle::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 1),
        (Rectangle::new(1.0, 2.0, 1.0, 2.0).unwrap(), 0),
        (Rectangle::around(Complex64::new(0.0, 2.0 * PI), 0.5), 1),
    ];
    for (rect, want) in cases {
        let got = w(rect)?;
        ensure(got == want, || format!("{rect:?}: winding {got}, want {want}"))?;
    }
    let g = ExponentialSum::real([(1.0, 0.0), (1.0, -LN_2)]).unwrap();
    let search = locate_zeros(&g, &Rectangle::new(-1.0, 1.0, 0.5, 6.0).unwrap(), &tol).map_err(|e| e.to_string())?;
    ensure(search.zeros.len() == 1, || format!("{} zeros", search.zeros.len()))?;
    let z = search.zeros[0].location;
    ensure(z.re.abs() <= 1e-9 && (z.im - TWO_TERM_ZERO).abs() <= 1e-9, || {
        format!("zero at {z}")
    })?;
    Ok(format!("windings 1, 0, 1; zero of 1 + 2^-s at {z}"))
}

fn main() {
    let corpus = common::corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 three-term zeta interval", Box::new(zeta3_interval)),
        ("2 one equality per endpoint", Box::new(|| boundary_uniqueness(&corpus))),
        (
            "3 at most two roots, convex B_j",
            Box::new(|| at_most_two_roots(&corpus)),
        ),
        ("4 no isolated points", Box::new(|| no_isolated_points(&corpus))),
        ("5 gaps from single equations", Box::new(|| gap_attribution(&corpus))),
        ("6 nonempty on the whole plane", Box::new(|| nonempty_entire(&corpus))),
        ("7 dominant term, empty set", Box::new(truncated_series)),
        ("8 zero real parts inside the set", Box::new(zero_projections)),
        (
            "9 polygon closed form vs brute force",
            Box::new(|| polygon_brute_force(&corpus)),
        ),
        (
            "10 shift, scale and phase invariance",
            Box::new(|| invariances(&corpus)),
        ),
        ("11 winding sanity", Box::new(winding_sanity)),
    ];
    let mut failures = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
