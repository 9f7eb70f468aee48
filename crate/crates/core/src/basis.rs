//! Exact rational linear algebra over declared exponent coordinates.
//!
//! Exponents are real numbers, so their rational independence cannot be
//! decided from floating point values. Instead each exponent may carry an
//! exact coordinate vector over a list of named symbols (for instance
//! `ln 2`, `ln 3`), and everything in this module works on those vectors
//! with arbitrary precision rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        RationalVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RationalVector(vec![BigRational::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = BigRational::one();
        v
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RationalVector(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    /// Parses `"p/q"` (or bare integer `"p"`) strings.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    /// Floating point inner product with a vector of symbol values.
    pub fn dot_f64(&self, values: &[f64]) -> f64 {
        self.0.iter().zip(values).map(|(q, v)| rational_to_f64(q) * v).sum()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// Parses a canonical rational: `"p/q"` with `q > 0` and `gcd(p, q) = 1`,
/// or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a canonical rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if !q.is_positive() || !p.gcd(&q).is_one() {
                return Err(bad());
            }
            Ok(BigRational::new_raw(p, q))
        }
    }
}

/// Formats as `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Result of an exact independence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCheck {
    pub independent: bool,
    pub rank: usize,
    /// Nonzero `q` with `Σ q_j coords_j = 0`, present iff dependent.
    pub certificate: Option<RationalVector>,
}

/// Row-echelon state built one vector at a time.
///
/// Each stored row has a unit pivot and no entries in the pivot columns of
/// earlier rows. `combo` writes the row as a combination of the accepted
/// input vectors, so a vector that reduces to zero comes with its relation.
struct Echelon {
    rows: Vec<EchelonRow>,
}

struct EchelonRow {
    pivot: usize,
    vec: Vec<BigRational>,
    combo: Vec<BigRational>,
}

enum Reduced {
    /// `c = Σ combo_k accepted_k`
    InSpan(Vec<BigRational>),
    Independent,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn accepted(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `c`; if it is independent it is accepted as a new row.
    fn push(&mut self, c: &RationalVector) -> Reduced {
        let n = self.accepted();
        let mut v = c.0.clone();
        let mut combo = vec![BigRational::zero(); n];
        for row in &self.rows {
            let a = v[row.pivot].clone();
            if a.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(&row.vec) {
                if !r.is_zero() {
                    *x -= &a * r;
                }
            }
            for (x, r) in combo.iter_mut().zip(&row.combo) {
                if !r.is_zero() {
                    *x += &a * r;
                }
            }
        }
        // Pivot on the first nonzero entry.
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return Reduced::InSpan(combo);
        };
        let p = v[pivot].clone();
        for x in v.iter_mut() {
            *x /= &p;
        }
        // v_new = (c - Σ combo_k accepted_k) / p
        let mut new_combo: Vec<BigRational> = combo.into_iter().map(|x| -x / &p).collect();
        new_combo.push(BigRational::one() / &p);
        for row in &mut self.rows {
            row.combo.push(BigRational::zero());
        }
        self.rows.push(EchelonRow {
            pivot,
            vec: v,
            combo: new_combo,
        });
        Reduced::Independent
    }

    /// Expresses `c` over the accepted vectors without modifying the state.
    fn express(&self, c: &RationalVector) -> Option<Vec<BigRational>> {
        let mut v = c.0.clone();
        let mut combo = vec![BigRational::zero(); self.accepted()];
        for row in &self.rows {
            let a = v[row.pivot].clone();
            if a.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(&row.vec) {
                if !r.is_zero() {
                    *x -= &a * r;
                }
            }
            for (x, r) in combo.iter_mut().zip(&row.combo) {
                if !r.is_zero() {
                    *x += &a * r;
                }
            }
        }
        v.iter().all(Zero::is_zero).then_some(combo)
    }
}

fn check_dims(coords: &[RationalVector]) -> Result<usize> {
    let dim = coords.first().map_or(0, RationalVector::dim);
    for c in coords {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.dim(),
            });
        }
    }
    Ok(dim)
}

/// Scales `q` to coprime integers with a positive leading entry.
fn normalize_relation(q: Vec<BigRational>) -> Vec<BigRational> {
    let lcm = q
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = q.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    let gcd = if gcd.is_zero() { BigInt::one() } else { gcd };
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &gcd * &sign))
        .collect()
}

fn combination_is_zero(q: &[BigRational], coords: &[RationalVector], dim: usize) -> bool {
    (0..dim).all(|k| {
        q.iter()
            .zip(coords)
            .fold(BigRational::zero(), |acc, (qj, c)| acc + qj * &c.0[k])
            .is_zero()
    })
}

/// Exact rank test of a list of coordinate vectors.
///
/// When the vectors are dependent the first relation found is returned as a
/// certificate, scaled to coprime integers with a positive first entry, and
/// checked to combine to the exact zero vector.
pub fn check_rational_independence(coords: &[RationalVector]) -> Result<IndependenceCheck> {
    let dim = check_dims(coords)?;
    let mut ech = Echelon::new();
    let mut accepted_idx = Vec::new();
    for (j, c) in coords.iter().enumerate() {
        match ech.push(c) {
            Reduced::Independent => accepted_idx.push(j),
            Reduced::InSpan(combo) => {
                let mut q = vec![BigRational::zero(); coords.len()];
                q[j] = BigRational::one();
                for (a, coef) in combo.into_iter().enumerate() {
                    q[accepted_idx[a]] = -coef;
                }
                let q = normalize_relation(q);
                if !combination_is_zero(&q, coords, dim) {
                    return Err(Error::InvariantViolated(
                        "dependence certificate does not vanish".into(),
                    ));
                }
                let rank = rank_of(coords);
                return Ok(IndependenceCheck {
                    independent: false,
                    rank,
                    certificate: Some(RationalVector(q)),
                });
            }
        }
    }
    Ok(IndependenceCheck {
        independent: true,
        rank: coords.len(),
        certificate: None,
    })
}

fn rank_of(coords: &[RationalVector]) -> usize {
    let mut ech = Echelon::new();
    for c in coords {
        ech.push(c);
    }
    ech.accepted()
}

/// The natural basis of a list of exponents together with the exact
/// coordinates of every exponent over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisRepresentation {
    /// Positions (in input order) of the exponents chosen as basis elements.
    pub basis_indices: Vec<usize>,
    /// Row `j` holds `r_j` with `λ_j = Σ_k r_{j,k} g_k`.
    pub matrix: Vec<RationalVector>,
    pub integral: bool,
}

impl BasisRepresentation {
    pub fn dim(&self) -> usize {
        self.basis_indices.len()
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn row(&self, j: usize) -> &RationalVector {
        &self.matrix[j]
    }

    /// Representation used when independence is only declared: every
    /// nonzero exponent is its own basis element and a zero exponent gets
    /// the zero row.
    pub fn declared_independent(exponents: &[f64]) -> Self {
        let basis_indices: Vec<usize> = exponents
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0.0)
            .map(|(j, _)| j)
            .collect();
        let dim = basis_indices.len();
        let mut k = 0;
        let matrix = exponents
            .iter()
            .map(|&l| {
                if l == 0.0 {
                    RationalVector::zeros(dim)
                } else {
                    k += 1;
                    RationalVector::unit(dim, k - 1)
                }
            })
            .collect();
        BasisRepresentation {
            basis_indices,
            matrix,
            integral: true,
        }
    }
}

/// Greedy natural basis: scanning in order, an exponent joins the basis iff
/// it is nonzero and independent of the elements already chosen.
pub fn natural_basis(coords: &[RationalVector], exponents: &[f64]) -> Result<BasisRepresentation> {
    if coords.len() != exponents.len() {
        return Err(Error::DimensionMismatch {
            expected: exponents.len(),
            found: coords.len(),
        });
    }
    check_dims(coords)?;
    let mut ech = Echelon::new();
    let mut basis_indices = Vec::new();
    for (j, (c, &lambda)) in coords.iter().zip(exponents).enumerate() {
        if c.is_zero() {
            if lambda != 0.0 {
                return Err(Error::ZeroVectorForNonzeroExponent { index: j });
            }
            continue;
        }
        if lambda == 0.0 {
            return Err(Error::CoordsInconsistent { label: j + 1 });
        }
        if let Reduced::Independent = ech.push(c) {
            basis_indices.push(j);
        }
    }
    let matrix = coords
        .iter()
        .map(|c| {
            ech.express(c)
                .map(RationalVector)
                .ok_or_else(|| Error::InvariantViolated("exponent outside the span of its natural basis".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = BasisRepresentation {
        basis_indices,
        matrix,
        integral: false,
    };
    rep.integral = is_integral(&rep);
    Ok(rep)
}

/// True iff every coordinate is an integer.
pub fn is_integral(rep: &BasisRepresentation) -> bool {
    rep.matrix
        .iter()
        .flat_map(|row| row.0.iter())
        .all(|q| q.denom().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> RationalVector {
        RationalVector::from_integers(v)
    }

    #[test]
    fn unit_vectors_are_independent() {
        let chk = check_rational_independence(&[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        assert!(chk.independent);
        assert_eq!(chk.rank, 2);
        assert!(chk.certificate.is_none());
    }

    #[test]
    fn explicit_relation_certificate() {
        let chk = check_rational_independence(&[rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])]).unwrap();
        assert!(!chk.independent);
        assert_eq!(chk.certificate.unwrap(), rv(&[1, 1, -1]));
    }

    #[test]
    fn collinear_certificate() {
        let chk = check_rational_independence(&[rv(&[2, 0]), rv(&[3, 0])]).unwrap();
        assert!(!chk.independent);
        assert_eq!(chk.rank, 1);
        assert_eq!(chk.certificate.unwrap(), rv(&[3, -2]));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = check_rational_independence(&[rv(&[1, 0]), rv(&[1])]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn natural_basis_greedy() {
        let rep = natural_basis(&[rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(rep.basis_indices, vec![0, 1]);
        assert_eq!(rep.matrix[2], rv(&[1, 1]));
        assert!(rep.integral);
    }

    #[test]
    fn natural_basis_skips_zero_exponent() {
        let rep = natural_basis(&[rv(&[0, 0]), rv(&[1, 0])], &[0.0, 0.7]).unwrap();
        assert_eq!(rep.basis_indices, vec![1]);
        assert_eq!(rep.matrix[0], rv(&[0]));
        assert_eq!(rep.matrix[1], rv(&[1]));
    }

    #[test]
    fn natural_basis_singleton() {
        let rep = natural_basis(&[rv(&[5, 0])], &[5.0]).unwrap();
        assert_eq!(rep.basis_indices, vec![0]);
        assert_eq!(rep.matrix[0], rv(&[1]));
    }

    #[test]
    fn zero_vector_with_nonzero_exponent() {
        let err = natural_basis(&[rv(&[0, 0])], &[1.5]).unwrap_err();
        assert_eq!(err, Error::ZeroVectorForNonzeroExponent { index: 0 });
    }

    #[test]
    fn integrality() {
        let half = RationalVector::parse(&["1/2", "0"]).unwrap();
        let rep = BasisRepresentation {
            basis_indices: vec![0],
            matrix: vec![rv(&[1, 0]), half],
            integral: false,
        };
        assert!(!is_integral(&rep));
        let rep = BasisRepresentation {
            basis_indices: vec![0, 1],
            matrix: vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])],
            integral: true,
        };
        assert!(is_integral(&rep));
        let empty = BasisRepresentation {
            basis_indices: vec![],
            matrix: vec![],
            integral: true,
        };
        assert!(is_integral(&empty));
    }

    #[test]
    fn non_integral_when_basis_element_is_a_multiple() {
        // 4 = 2^2 met before 2: ln 2 = (1/2) ln 4
        let rep = natural_basis(&[rv(&[2]), rv(&[1])], &[1.386, 0.693]).unwrap();
        assert_eq!(rep.basis_indices, vec![0]);
        assert_eq!(rep.matrix[1].to_strings(), vec!["1/2"]);
        assert!(!rep.integral);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(format_rational(&parse_rational("-3/4").unwrap()), "-3/4");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7/1");
        assert!(parse_rational("2/4").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
