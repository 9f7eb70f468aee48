//! Value types shared by every other module.
//!
//! An [`ExponentialSum`] is the finite object `f(s) = Σ a_j e^{λ_j s}`,
//! optionally accompanied by a bound on the moduli of omitted terms when it
//! is the truncation of an absolutely convergent series. Everything here is
//! immutable once validated.

use num_complex::Complex64;

use crate::basis::{self, RationalVector};
use crate::error::{Error, Result};

/// Complex numbers are plain `num_complex` doubles.
pub type ComplexValue = Complex64;

/// One term `a e^{λ s}`.
///
/// The coefficient is stored as `coeff · e^{log_scale}` so that moduli far
/// outside the range of doubles (like `e^{-2500}`) stay representable.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    coeff: Complex64,
    log_scale: f64,
    exponent: f64,
    coords: Option<RationalVector>,
    label: usize,
}

impl Term {
    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn coords(&self) -> Option<&RationalVector> {
        self.coords.as_ref()
    }

    /// Zero-based position of the term in the description it came from.
    pub fn label(&self) -> usize {
        self.label
    }

    /// `ln |a|`
    pub fn log_abs_coeff(&self) -> f64 {
        self.coeff.norm().ln() + self.log_scale
    }

    /// `ln (|a| e^{λσ})`
    pub fn log_modulus_at(&self, sigma: f64) -> f64 {
        self.log_abs_coeff() + self.exponent * sigma
    }

    /// `a e^{λ s}`, evaluated without forming `|a|` on its own.
    pub fn value_at(&self, s: Complex64) -> Complex64 {
        let z = s * self.exponent + self.log_scale;
        self.coeff * z.exp()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisSymbol {
    pub name: String,
    pub value: f64,
}

/// The open strip `α < Re s < β`, with infinite ends allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerticalStrip {
    alpha: f64,
    beta: f64,
}

impl VerticalStrip {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_nan() || beta.is_nan() || alpha >= beta || alpha == f64::INFINITY || beta == f64::NEG_INFINITY {
            return Err(Error::InvalidStrip { alpha, beta });
        }
        Ok(VerticalStrip { alpha, beta })
    }

    pub fn whole_plane() -> Self {
        VerticalStrip {
            alpha: f64::NEG_INFINITY,
            beta: f64::INFINITY,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_whole_plane(&self) -> bool {
        self.alpha == f64::NEG_INFINITY && self.beta == f64::INFINITY
    }

    /// Membership in the open strip.
    pub fn contains(&self, sigma: f64) -> bool {
        self.alpha < sigma && sigma < self.beta
    }

    pub fn contains_strip(&self, other: &VerticalStrip) -> bool {
        self.alpha <= other.alpha && other.beta <= self.beta
    }

    pub fn intersect(&self, other: &VerticalStrip) -> Option<VerticalStrip> {
        VerticalStrip::new(self.alpha.max(other.alpha), self.beta.min(other.beta)).ok()
    }
}

/// Certified bound `Σ_{omitted} |a_j| e^{λ_j σ} ≤ epsilon` for `σ` in `valid_on`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    epsilon: f64,
    valid_on: VerticalStrip,
}

impl TailBound {
    pub fn new(epsilon: f64, valid_on: VerticalStrip) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::InvalidTail(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        Ok(TailBound { epsilon, valid_on })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn valid_on(&self) -> VerticalStrip {
        self.valid_on
    }

    /// The bound at `sigma`, or `None` where nothing is known about the tail.
    /// The closed strip is used, since the bound extends by continuity.
    pub fn epsilon_at(&self, sigma: f64) -> Option<f64> {
        (self.valid_on.alpha <= sigma && sigma <= self.valid_on.beta).then_some(self.epsilon)
    }
}

/// What is known about the rational independence of the exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceStatus {
    /// Exact coordinates prove the nonzero exponents independent over the
    /// declared symbols (a single zero exponent is allowed, by the shift
    /// `f ↦ f e^{μs}`).
    Verified,
    /// Coordinates exhibit an exact relation among the nonzero exponents.
    Dependent { certificate: RationalVector },
    /// Independence was asserted without coordinates.
    DeclaredUnverified,
    /// Neither asserted nor derivable.
    Unknown,
}

impl IndependenceStatus {
    /// Whether results that assume independence may be relied on, with or
    /// without proof.
    pub fn assumed(&self) -> bool {
        matches!(
            self,
            IndependenceStatus::Verified | IndependenceStatus::DeclaredUnverified
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IndependenceStatus::Verified => "verified",
            IndependenceStatus::Dependent { .. } => "dependent",
            IndependenceStatus::DeclaredUnverified => "declared-only",
            IndependenceStatus::Unknown => "unknown",
        }
    }
}

/// Unvalidated term description.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTerm {
    pub coeff: Complex64,
    pub log_scale: f64,
    pub exponent: f64,
    pub coords: Option<RationalVector>,
}

impl RawTerm {
    pub fn new(coeff: Complex64, exponent: f64) -> Self {
        RawTerm {
            coeff,
            log_scale: 0.0,
            exponent,
            coords: None,
        }
    }

    pub fn real(coeff: f64, exponent: f64) -> Self {
        Self::new(Complex64::new(coeff, 0.0), exponent)
    }

    pub fn with_coords(mut self, coords: RationalVector) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn with_log_scale(mut self, log_scale: f64) -> Self {
        self.log_scale = log_scale;
        self
    }
}

/// Unvalidated sum description, in the order the user wrote it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawSum {
    pub terms: Vec<RawTerm>,
    pub basis_symbols: Option<Vec<BasisSymbol>>,
    pub independent: bool,
    pub tail: Option<TailBound>,
}

impl RawSum {
    pub fn new(terms: Vec<RawTerm>) -> Self {
        RawSum {
            terms,
            ..Default::default()
        }
    }
}

/// A validated finite exponential sum with strictly increasing exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentialSum {
    terms: Vec<Term>,
    basis_symbols: Option<Vec<BasisSymbol>>,
    independence_declared: bool,
    independence: IndependenceStatus,
    tail: Option<TailBound>,
}

const COORD_REL_TOL: f64 = 1e-9;

/// Validates a raw description and sorts its terms by exponent.
pub fn validate_sum(raw: &RawSum) -> Result<ExponentialSum> {
    let with_coords = raw.terms.iter().filter(|t| t.coords.is_some()).count();
    if with_coords != 0 && with_coords != raw.terms.len() {
        return Err(Error::DimensionMismatch {
            expected: raw.terms.len(),
            found: with_coords,
        });
    }
    let n_symbols = raw.basis_symbols.as_ref().map(Vec::len);
    if with_coords > 0 && n_symbols.is_none() {
        return Err(Error::Parse("coordinates given without basis symbols".into()));
    }
    if let Some(symbols) = &raw.basis_symbols {
        if let Some(s) = symbols.iter().find(|s| !s.value.is_finite()) {
            return Err(Error::NonFinite(format!("basis symbol {}", s.name)));
        }
    }

    let mut terms = Vec::with_capacity(raw.terms.len());
    for (label, t) in raw.terms.iter().enumerate() {
        if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient of term {}", label + 1)));
        }
        if !t.exponent.is_finite() {
            return Err(Error::NonFinite(format!("exponent of term {}", label + 1)));
        }
        if !t.log_scale.is_finite() {
            return Err(Error::NonFinite(format!("log scale of term {}", label + 1)));
        }
        if t.coeff.re == 0.0 && t.coeff.im == 0.0 {
            return Err(Error::ZeroCoefficient { label: label + 1 });
        }
        if let (Some(c), Some(symbols)) = (&t.coords, &raw.basis_symbols) {
            if c.dim() != symbols.len() {
                return Err(Error::DimensionMismatch {
                    expected: symbols.len(),
                    found: c.dim(),
                });
            }
            let values: Vec<f64> = symbols.iter().map(|s| s.value).collect();
            let implied = c.dot_f64(&values);
            let scale: f64 = c.to_f64().iter().zip(&values).map(|(q, v)| (q * v).abs()).sum();
            let consistent = if t.exponent == 0.0 {
                c.is_zero()
            } else {
                (implied - t.exponent).abs() <= COORD_REL_TOL * (1.0 + scale)
            };
            if !consistent {
                return Err(Error::CoordsInconsistent { label: label + 1 });
            }
        }
        terms.push(Term {
            coeff: t.coeff,
            log_scale: t.log_scale,
            exponent: t.exponent,
            coords: t.coords.clone(),
            label,
        });
    }

    terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
    for w in terms.windows(2) {
        if w[0].exponent == w[1].exponent {
            return Err(Error::DuplicateExponent(w[0].exponent));
        }
    }

    let independence = if with_coords > 0 {
        // Zero exponents are excluded: with distinct exponents there is at
        // most one, and it is removed by the shift f ↦ f e^{μs}. The check
        // runs in input order so a certificate reads against the input.
        let nonzero: Vec<usize> = (0..raw.terms.len()).filter(|&k| raw.terms[k].exponent != 0.0).collect();
        let coords: Vec<RationalVector> = nonzero.iter().filter_map(|&k| raw.terms[k].coords.clone()).collect();
        let check = basis::check_rational_independence(&coords)?;
        let check = basis::IndependenceCheck {
            certificate: check.certificate.map(|q| {
                let mut full = vec![num_rational::BigRational::from_integer(0.into()); raw.terms.len()];
                for (&k, v) in nonzero.iter().zip(q.entries()) {
                    full[k] = v.clone();
                }
                RationalVector::new(full)
            }),
            ..check
        };
        match check.certificate {
            None => IndependenceStatus::Verified,
            Some(certificate) => {
                if raw.independent {
                    return Err(Error::IndependenceContradicted {
                        certificate: certificate.to_strings(),
                    });
                }
                IndependenceStatus::Dependent { certificate }
            }
        }
    } else if raw.independent {
        IndependenceStatus::DeclaredUnverified
    } else {
        IndependenceStatus::Unknown
    };

    Ok(ExponentialSum {
        terms,
        basis_symbols: raw.basis_symbols.clone(),
        independence_declared: raw.independent,
        independence,
        tail: raw.tail,
    })
}

impl ExponentialSum {
    /// Builds a sum from `(coefficient, exponent)` pairs.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, f64)>,
    {
        validate_sum(&RawSum::new(
            pairs.into_iter().map(|(a, l)| RawTerm::new(a, l)).collect(),
        ))
    }

    /// Builds a sum with real coefficients.
    pub fn real<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::new(pairs.into_iter().map(|(a, l)| (Complex64::new(a, 0.0), l)))
    }

    /// The partial sum `1 + 2^{-s} + … + n^{-s}` of the Riemann zeta
    /// function, with exact coordinates over `ln p` for the primes `p ≤ n`.
    pub fn zeta_partial_sum(n: usize) -> Result<Self> {
        let primes: Vec<u64> = (2..=n as u64)
            .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
            .collect();
        let symbols = primes
            .iter()
            .map(|&p| BasisSymbol {
                name: format!("ln{p}"),
                value: (p as f64).ln(),
            })
            .collect();
        let terms = (1..=n as u64)
            .map(|k| {
                let mut rest = k;
                let exps: Vec<i64> = primes
                    .iter()
                    .map(|&p| {
                        let mut e = 0;
                        while rest % p == 0 {
                            rest /= p;
                            e -= 1;
                        }
                        e
                    })
                    .collect();
                RawTerm::real(1.0, -(k as f64).ln()).with_coords(RationalVector::from_integers(&exps))
            })
            .collect();
        validate_sum(&RawSum {
            terms,
            basis_symbols: Some(symbols),
            independent: false,
            tail: None,
        })
    }

    /// Same sum with a tail bound attached.
    pub fn with_tail(&self, tail: TailBound) -> Self {
        let mut out = self.clone();
        out.tail = Some(tail);
        out
    }

    /// Same sum with independence asserted; fails if coordinates refute it.
    pub fn declare_independent(&self) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.independent = true;
        validate_sum(&raw)
    }

    /// The description this sum was validated from, in original order.
    pub fn to_raw(&self) -> RawSum {
        let mut terms: Vec<&Term> = self.terms.iter().collect();
        terms.sort_by_key(|t| t.label);
        RawSum {
            terms: terms
                .into_iter()
                .map(|t| RawTerm {
                    coeff: t.coeff,
                    log_scale: t.log_scale,
                    exponent: t.exponent,
                    coords: t.coords.clone(),
                })
                .collect(),
            basis_symbols: self.basis_symbols.clone(),
            independent: self.independence_declared,
            tail: self.tail,
        }
    }

    /// Terms sorted by increasing exponent.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, j: usize) -> Result<&Term> {
        self.terms.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.terms.len(),
        })
    }

    /// Index (in sorted order) of the term with the given original label.
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    pub fn basis_symbols(&self) -> Option<&[BasisSymbol]> {
        self.basis_symbols.as_deref()
    }

    pub fn independence_declared(&self) -> bool {
        self.independence_declared
    }

    pub fn independence(&self) -> &IndependenceStatus {
        &self.independence
    }

    pub fn tail(&self) -> Option<&TailBound> {
        self.tail.as_ref()
    }

    pub fn has_coords(&self) -> bool {
        self.terms.first().is_some_and(|t| t.coords.is_some())
    }

    /// Natural basis over the coordinates, scanning terms in their original
    /// order. Without coordinates, falls back to one basis element per
    /// nonzero exponent when independence is declared.
    pub fn basis_representation(&self) -> Result<BasisRepresentationByLabel> {
        let order = self.label_order();
        let exps: Vec<f64> = order.iter().map(|&j| self.terms[j].exponent).collect();
        let rep = if self.has_coords() {
            let coords: Vec<RationalVector> = order
                .iter()
                .map(|&j| self.terms[j].coords.clone().unwrap_or_else(|| RationalVector::zeros(0)))
                .collect();
            basis::natural_basis(&coords, &exps)?
        } else {
            basis::BasisRepresentation::declared_independent(&exps)
        };
        Ok(BasisRepresentationByLabel { rep })
    }

    /// Sorted indices listed in label order.
    pub fn label_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.terms.len()).collect();
        order.sort_by_key(|&j| self.terms[j].label);
        order
    }

    /// `Σ |a_j| e^{λ_j σ}` over the finite terms, in log form.
    pub fn log_total_at(&self, sigma: f64) -> f64 {
        log_sum_exp(self.terms.iter().map(|t| t.log_modulus_at(sigma)))
    }
}

/// A basis representation whose rows are indexed by term label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisRepresentationByLabel {
    pub rep: basis::BasisRepresentation,
}

impl BasisRepresentationByLabel {
    pub fn row_for(&self, term: &Term) -> &RationalVector {
        self.rep.row(term.label())
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}

/// Numerical settings for root isolation, certification and scans.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Maximum bracket width of a reported root.
    pub root_tol: f64,
    /// Minimum sign margin, measured on `ln(Σ_{i≠j} m_i / m_j)`, i.e.
    /// relative to the modulus of the compared term.
    pub cert_margin: f64,
    pub phase_grid: usize,
    /// Fixed step for min-modulus scans; `None` picks one from the exponents.
    pub scan_step: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_tol: 1e-9,
            cert_margin: 1e-12,
            phase_grid: 512,
            scan_step: None,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.root_tol.is_finite() && self.root_tol > 0.0) {
            return Err(Error::InvalidTolerances(format!("root_tol = {}", self.root_tol)));
        }
        if !(self.cert_margin.is_finite() && self.cert_margin >= 0.0) {
            return Err(Error::InvalidTolerances(format!("cert_margin = {}", self.cert_margin)));
        }
        if self.phase_grid == 0 {
            return Err(Error::InvalidTolerances("phase_grid = 0".into()));
        }
        if let Some(step) = self.scan_step {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::InvalidTolerances(format!("scan_step = {step}")));
            }
        }
        Ok(())
    }
}

/// `ln Σ e^{x_i}`, `-∞` for an empty input.
pub(crate) fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
