//! Seeded random sums shared by the integration tests.

#![allow(dead_code)]

use apzeros::model::{validate_sum, RawSum, RawTerm};
use apzeros::ExponentialSum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_2024;
pub const CORPUS_SIZE: usize = 200;

/// Exponents closer than this are redrawn; closer pairs push `R_f` out to
/// |σ| of order ln(100)/gap and add nothing but rounding.
const MIN_GAP: f64 = 0.01;

/// A sum with `n` terms: moduli log-uniform in [0.1, 10], uniform phases,
/// distinct exponents in [-3, 3], independence declared.
pub fn random_sum(rng: &mut ChaCha8Rng, n: usize) -> ExponentialSum {
    let exponents = loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..=3.0)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[1] - w[0] >= MIN_GAP) {
            break xs;
        }
    };
    let terms = exponents
        .into_iter()
        .map(|l| {
            let modulus = 10f64.powf(rng.gen_range(-1.0..=1.0));
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            RawTerm::new(Complex64::from_polar(modulus, phase), l)
        })
        .collect();
    let raw = RawSum {
        independent: true,
        ..RawSum::new(terms)
    };
    validate_sum(&raw).expect("random sum is valid")
}

/// The fixed 200-sum corpus with 3 to 8 terms each.
pub fn corpus() -> Vec<ExponentialSum> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let n = rng.gen_range(3..=8);
            random_sum(&mut rng, n)
        })
        .collect()
}

/// `count` sums with 3 to 5 terms from a separate stream.
pub fn small_sums(seed: u64, count: usize) -> Vec<ExponentialSum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=5);
            random_sum(&mut rng, n)
        })
        .collect()
}

/// Brute-force `min |m_0 + m_1 e^{iθ_1} + m_2 e^{iθ_2}|` over a `grid × grid`
/// phase grid, refined by shrinking pattern search around the best cell.
pub fn brute_force_polygon(m: [f64; 3], grid: usize) -> f64 {
    let step = std::f64::consts::TAU / grid as f64;
    let table: Vec<(f64, f64)> = (0..grid).map(|k| (k as f64 * step).sin_cos()).collect();
    let (mut best, mut bi, mut bj) = (f64::INFINITY, 0usize, 0usize);
    for (i, &(s1, c1)) in table.iter().enumerate() {
        let (re1, im1) = (m[0] + m[1] * c1, m[1] * s1);
        for (j, &(s2, c2)) in table.iter().enumerate() {
            let re = re1 + m[2] * c2;
            let im = im1 + m[2] * s2;
            let v = re * re + im * im;
            if v < best {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    let value = |a: f64, b: f64| {
        let re = m[0] + m[1] * a.cos() + m[2] * b.cos();
        let im = m[1] * a.sin() + m[2] * b.sin();
        re.hypot(im)
    };
    let (mut a, mut b) = (bi as f64 * step, bj as f64 * step);
    let mut v = value(a, b);
    let mut h = step;
    while h > 1e-14 {
        let mut moved = false;
        for (da, db) in [
            (h, 0.0),
            (-h, 0.0),
            (0.0, h),
            (0.0, -h),
            (h, h),
            (-h, -h),
            (h, -h),
            (-h, h),
        ] {
            let w = value(a + da, b + db);
            if w < v {
                v = w;
                a += da;
                b += db;
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    v
}
