mod common;

use apzeros::basis::{check_rational_independence, natural_basis, RationalVector};
use apzeros::model::{validate_sum, RawSum, RawTerm};
use apzeros::probe::{eval_aux, eval_f, min_modulus_scan, torus_membership, PhaseAssignment};
use apzeros::rset::{b_value, compute_rset, inf_modulus, RSetResult};
use apzeros::zerofind::{winding_number, Rectangle};
use apzeros::{ExponentialSum, Tolerances, VerticalStrip};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn raw_terms() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    (3usize..=6).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, 0.0f64..std::f64::consts::TAU, -3.0f64..3.0), n).prop_filter(
            "exponents at least 0.05 apart",
            |v| {
                let mut l: Vec<f64> = v.iter().map(|t| t.2).collect();
                l.sort_by(f64::total_cmp);
                l.windows(2).all(|w| w[1] - w[0] >= 0.05)
            },
        )
    })
}

fn build(terms: &[(f64, f64, f64)]) -> ExponentialSum {
    let raw = RawSum {
        independent: true,
        ..RawSum::new(
            terms
                .iter()
                .map(|&(lg, ph, l)| RawTerm::new(Complex64::from_polar(10f64.powf(lg), ph), l))
                .collect(),
        )
    };
    validate_sum(&raw).unwrap()
}

fn sums() -> impl Strategy<Value = ExponentialSum> {
    raw_terms().prop_map(|t| build(&t))
}

fn whole(f: &ExponentialSum) -> RSetResult {
    compute_rset(f, VerticalStrip::whole_plane(), &Tolerances::default()).unwrap()
}

fn endpoints(r: &RSetResult) -> Vec<f64> {
    r.intervals.iter().flat_map(|i| [i.lo, i.hi]).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x == y || (x - y).abs() <= tol * x.abs().max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn validation_is_idempotent(f in sums()) {
        prop_assert_eq!(validate_sum(&f.to_raw()).unwrap(), f);
    }

    #[test]
    fn term_order_does_not_matter(t in raw_terms(), rot in 0usize..6) {
        let mut u = t.clone();
        let k = rot % u.len();
        u.rotate_left(k);
        let last = u.len() - 1;
        u.swap(0, last);
        prop_assert_eq!(endpoints(&whole(&build(&t))), endpoints(&whole(&build(&u))));
    }

    #[test]
    fn exponent_shift_keeps_endpoints(t in raw_terms(), mu in -2.0f64..2.0) {
        let s: Vec<_> = t.iter().map(|&(a, p, l)| (a, p, l + mu)).collect();
        let (a, b) = (whole(&build(&t)), whole(&build(&s)));
        prop_assert!(close(&endpoints(&a), &endpoints(&b), 1e-12), "{:?} vs {:?}", endpoints(&a), endpoints(&b));
    }

    #[test]
    fn moduli_alone_decide_the_set(t in raw_terms(), lg in -1.0f64..1.0, ph in 0.0f64..std::f64::consts::TAU, k in 0usize..6) {
        let k = k % t.len();
        let scaled: Vec<_> = t.iter().map(|&(a, p, l)| (a + lg, p + ph, l)).collect();
        let mut turned = t.clone();
        turned[k].1 += ph;
        let base = endpoints(&whole(&build(&t)));
        prop_assert!(close(&base, &endpoints(&whole(&build(&scaled))), 1e-12));
        // |r e^{iφ}| is recomputed from cos and sin, so allow rounding
        prop_assert!(close(&base, &endpoints(&whole(&build(&turned))), 1e-12));
    }

    #[test]
    fn negative_sets_are_disjoint(f in sums()) {
        let r = whole(&f);
        let mut neg = r.negative_intervals.clone();
        neg.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for w in neg.windows(2) {
            prop_assert!(w[0].hi <= w[1].lo + Tolerances::default().root_tol);
        }
    }

    #[test]
    fn zero_infimum_iff_polygon_closes(f in sums(), sigma in -4.0f64..4.0) {
        let inf = inf_modulus(&f, sigma);
        let total: f64 = (0..f.len()).map(|j| b_value(&f, j, sigma).unwrap().lo).fold(f64::INFINITY, f64::min);
        // skip σ within rounding of a boundary
        prop_assume!(total.abs() > 1e-9);
        prop_assert_eq!(inf.value == 0.0, total >= 0.0, "inf {} min B {}", inf.value, total);
    }

    #[test]
    fn b_is_convex(f in sums(), j in 0usize..6, sigma in -3.0f64..3.0, h in 1e-3f64..0.5) {
        let j = j % f.len();
        let b = |s: f64| b_value(&f, j, s).unwrap().lo;
        let d2 = b(sigma - h) - 2.0 * b(sigma) + b(sigma + h);
        prop_assert!(d2 >= -1e-9 * b(sigma).abs().max(1.0), "second difference {}", d2);
    }

    #[test]
    fn aux_at_zero_phases_is_f_at_real_point(f in sums(), sigma in -3.0f64..3.0) {
        let rep = f.basis_representation().unwrap();
        let aux = eval_aux(&f, sigma, &PhaseAssignment::zeros(rep.dim()), &rep).unwrap();
        let direct = eval_f(&f, Complex64::new(sigma, 0.0)).unwrap();
        let scale: f64 = f.terms().iter().map(|t| t.log_modulus_at(sigma).exp()).sum();
        prop_assert!((aux - direct).norm() <= 1e-13 * scale);
    }

    #[test]
    fn scan_never_beats_the_infimum(f in sums(), sigma in -2.0f64..2.0) {
        let tol = Tolerances { scan_step: Some(0.05), ..Tolerances::default() };
        let scan = min_modulus_scan(&f, sigma, 20.0, &tol).unwrap();
        let scale: f64 = f.terms().iter().map(|t| t.log_modulus_at(sigma).exp()).sum();
        prop_assert!(scan.min_value >= inf_modulus(&f, sigma).value - 1e-12 * scale);
    }

    #[test]
    fn torus_residual_ignores_coefficient_phases(t in raw_terms(), ph in 0.0f64..std::f64::consts::TAU, k in 0usize..6, sigma in -1.0f64..1.0) {
        let k = k % t.len();
        let mut turned = t.clone();
        turned[k].1 += ph;
        let (f, g) = (build(&t), build(&turned));
        let a = torus_membership(&f, sigma, &f.basis_representation().unwrap(), 8, 100).unwrap();
        let b = torus_membership(&g, sigma, &g.basis_representation().unwrap(), 8, 100).unwrap();
        let scale: f64 = f.terms().iter().map(|t| t.log_modulus_at(sigma).exp()).sum();
        prop_assert!((a.residual - b.residual).abs() <= 1e-9 * scale);
        prop_assert_eq!(a.member, b.member);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn torus_search_reaches_the_infimum(terms in raw_terms().prop_filter("at most five", |t| t.len() <= 5), sigma in -1.5f64..1.5) {
        let f = build(&terms);
        let res = torus_membership(&f, sigma, &f.basis_representation().unwrap(), 32, 200).unwrap();
        let inf = inf_modulus(&f, sigma).value;
        prop_assert!(res.search_residual >= inf - 1e-9);
        prop_assert!(res.search_residual - inf <= 1e-3, "search {} vs {}", res.search_residual, inf);
    }

    #[test]
    fn winding_is_additive(f in sums(), s0 in -2.0f64..0.0, t0 in 0.0f64..20.0, cut in 0.2f64..0.8) {
        let tol = Tolerances::default();
        let (s1, t1) = (s0 + 2.0, t0 + 8.0);
        let mid = t0 + cut * (t1 - t0);
        let whole = winding_number(&f, &Rectangle::new(s0, s1, t0, t1).unwrap(), &tol);
        let lower = winding_number(&f, &Rectangle::new(s0, s1, t0, mid).unwrap(), &tol);
        let upper = winding_number(&f, &Rectangle::new(s0, s1, mid, t1).unwrap(), &tol);
        if let (Ok(w), Ok(a), Ok(b)) = (whole, lower, upper) {
            prop_assert_eq!(w, a + b);
        }
    }

    #[test]
    fn zero_count_survives_exponential_factor(t in raw_terms(), mu in -2.0f64..2.0, t0 in 0.0f64..20.0) {
        let tol = Tolerances::default();
        let shifted: Vec<_> = t.iter().map(|&(a, p, l)| (a, p, l + mu)).collect();
        let rect = Rectangle::new(-1.5, 1.5, t0, t0 + 10.0).unwrap();
        let a = winding_number(&build(&t), &rect, &tol);
        let b = winding_number(&build(&shifted), &rect, &tol);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }
}

const SYMBOLS: [f64; 4] = [1.0, std::f64::consts::SQRT_2, 1.7320508075688772, 2.23606797749979];

fn coord_rows() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(-3i64..=3, d), 1..=6))
}

fn to_rational(rows: &[Vec<i64>]) -> Vec<RationalVector> {
    rows.iter().map(|r| RationalVector::from_integers(r)).collect()
}

fn exponent(row: &[i64]) -> f64 {
    row.iter().zip(SYMBOLS).map(|(&c, g)| c as f64 * g).sum()
}

proptest! {
    #[test]
    fn natural_basis_reconstructs_every_row(rows in coord_rows()) {
        let coords = to_rational(&rows);
        let exps: Vec<f64> = rows.iter().map(|r| exponent(r)).collect();
        let rep = natural_basis(&coords, &exps).unwrap();
        let dim = coords[0].dim();
        for (j, c) in coords.iter().enumerate() {
            let mut acc = vec![BigRational::zero(); dim];
            for (k, &b) in rep.basis_indices.iter().enumerate() {
                let q = &rep.row(j).entries()[k];
                for (slot, x) in acc.iter_mut().zip(coords[b].entries()) {
                    *slot += q * x;
                }
            }
            prop_assert_eq!(&acc[..], c.entries());
        }
        let chosen: Vec<RationalVector> = rep.basis_indices.iter().map(|&b| coords[b].clone()).collect();
        if !chosen.is_empty() {
            prop_assert!(check_rational_independence(&chosen).unwrap().independent);
        }
    }

    #[test]
    fn dependence_certificates_sum_to_zero(rows in coord_rows()) {
        let coords = to_rational(&rows);
        let check = check_rational_independence(&coords).unwrap();
        prop_assert_eq!(check.certificate.is_some(), !check.independent);
        if let Some(q) = check.certificate {
            prop_assert!(!q.is_zero());
            let dim = coords[0].dim();
            let mut acc = vec![BigRational::zero(); dim];
            for (qj, c) in q.entries().iter().zip(&coords) {
                for (slot, x) in acc.iter_mut().zip(c.entries()) {
                    *slot += qj * x;
                }
            }
            prop_assert!(acc.iter().all(|x| x.is_zero()));
        }
    }
}
