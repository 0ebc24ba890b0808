//! Exact isolation of the largest negative root `ζ_G(B)` of a clique
//! polynomial: square-free reduction, a Sturm chain over the integers and
//! dyadic bisection that always keeps the rightmost sub-interval holding a
//! root.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cpoly::cpoly_direct;
use crate::graph::{Graph, VertexSet};
use crate::poly::{parse_rational, IntPolynomial, Rational};

pub const DEFAULT_PRECISION_BITS: u32 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("{0} is not clique-shaped (constant term 1, nonnegative coefficients)")]
    NotCliqueShaped(IntPolynomial),
    #[error("empty interval: lo must be below hi")]
    EmptyInterval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// `ζ = −∞`.
    NoNegativeRoot,
    Exact(Rational),
    /// The root lies in `(lo, hi]`.
    Bracket {
        lo: Rational,
        hi: Rational,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootResult {
    kind: RootKind,
    float_value: Option<f64>,
    multiplicity: Option<u32>,
}

impl RootResult {
    pub fn none() -> Self {
        RootResult {
            kind: RootKind::NoNegativeRoot,
            float_value: None,
            multiplicity: None,
        }
    }

    fn exact(r: Rational, multiplicity: u32) -> Self {
        RootResult {
            float_value: r.to_f64(),
            kind: RootKind::Exact(r),
            multiplicity: Some(multiplicity),
        }
    }

    fn bracket(lo: Rational, hi: Rational) -> Self {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        RootResult {
            float_value: mid.to_f64(),
            kind: RootKind::Bracket { lo, hi },
            multiplicity: None,
        }
    }

    pub fn kind(&self) -> &RootKind {
        &self.kind
    }

    pub fn has_root(&self) -> bool {
        !matches!(self.kind, RootKind::NoNegativeRoot)
    }

    /// Double-precision convenience value; `None` for `−∞`.
    pub fn float_value(&self) -> Option<f64> {
        self.float_value
    }

    pub fn multiplicity(&self) -> Option<u32> {
        self.multiplicity
    }

    /// Lower end of the enclosure (`None` for `−∞`).
    pub fn lower(&self) -> Option<&Rational> {
        match &self.kind {
            RootKind::NoNegativeRoot => None,
            RootKind::Exact(r) => Some(r),
            RootKind::Bracket { lo, .. } => Some(lo),
        }
    }

    /// Upper end of the enclosure (`None` for `−∞`).
    pub fn upper(&self) -> Option<&Rational> {
        match &self.kind {
            RootKind::NoNegativeRoot => None,
            RootKind::Exact(r) => Some(r),
            RootKind::Bracket { hi, .. } => Some(hi),
        }
    }

    /// True when `self` is provably below `other` by more than `sep`:
    /// `upper(self) + sep < lower(other)`. `−∞` is below every root.
    pub fn definitely_below(&self, other: &RootResult, sep: &Rational) -> bool {
        match (self.upper(), other.lower()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(b)) => &(a + sep) < b,
        }
    }

    /// Whether the enclosure lies within `[lo, hi)`.
    pub fn within(&self, lo: &Rational, hi: &Rational) -> bool {
        match (&self.kind, self.lower(), self.upper()) {
            (RootKind::Exact(r), _, _) => lo <= r && r < hi,
            (_, Some(a), Some(b)) => lo <= a && b < hi,
            _ => false,
        }
    }
}

/// `2^-bits` as a rational.
pub fn dyadic_tolerance(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// `p / gcd(p, p')`, primitive with positive leading coefficient.
pub fn square_free_part(p: &IntPolynomial) -> Result<IntPolynomial, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let g = p.gcd(&p.derivative());
    Ok(p.primitive_part()
        .exact_div(&g)
        .expect("gcd divides p")
        .primitive_part())
}

/// The Sturm sequence `p, p', -rem(p, p'), ...`, each member scaled by a
/// positive factor to stay primitive in `Z[x]`.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut seq = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let last = seq.last().unwrap();
            let rem = last.positive_pseudo_remainder(&next);
            seq.push(next);
            next = negated_primitive(&rem);
        }
        SturmChain { seq }
    }

    pub fn polynomials(&self) -> &[IntPolynomial] {
        &self.seq
    }

    /// Sign changes along the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut changes = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// `-p / content(p)`; the content is positive, so signs are preserved.
fn negated_primitive(p: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return IntPolynomial::zero();
    }
    let c = -p.content();
    IntPolynomial::new(p.coeffs().iter().map(|a| a / &c).collect())
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &IntPolynomial, lo: &Rational, hi: &Rational) -> Result<usize, RootError> {
    if lo >= hi {
        return Err(RootError::EmptyInterval);
    }
    let q = square_free_part(p)?;
    Ok(SturmChain::new(&q).count(lo, hi))
}

fn check_clique_shape(p: &IntPolynomial) -> Result<(), RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if !p.constant_term().is_one() || p.coeffs().iter().any(Signed::is_negative) {
        return Err(RootError::NotCliqueShaped(p.clone()));
    }
    Ok(())
}

/// Smallest power of two that is at least `1 + max|c_i| / |c_deg|`.
fn dyadic_cauchy_bound(p: &IntPolynomial) -> Rational {
    let lead = p.leading().unwrap().abs();
    let deg = p.degree().unwrap();
    let max = p.coeffs()[..deg].iter().map(Signed::abs).max().unwrap_or_default();
    let bound = Rational::one() + Rational::new(max, lead);
    let mut m = Rational::one();
    while m < bound {
        m *= Rational::from_integer(2.into());
    }
    m
}

/// Multiplicity of the rational root `r` in `p`.
fn root_multiplicity(p: &IntPolynomial, r: &Rational) -> u32 {
    let linear = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
    let mut rest = p.clone();
    let mut k = 0;
    while let Some(q) = rest.exact_div(&linear) {
        rest = q;
        k += 1;
    }
    k
}

/// `ζ` at the default `2^-60` bracket width.
pub fn zeta(p: &IntPolynomial) -> Result<RootResult, RootError> {
    zeta_with_precision(p, DEFAULT_PRECISION_BITS)
}

/// The largest negative real root of a clique-shaped polynomial, isolated in
/// `[−M, 0)` where `M` is a power of two above the Cauchy bound. Bisection
/// keeps the right half whenever it holds a root; a midpoint that is itself
/// the rightmost root is reported exactly.
pub fn zeta_with_precision(p: &IntPolynomial, bits: u32) -> Result<RootResult, RootError> {
    check_clique_shape(p)?;
    if p.degree() == Some(0) {
        return Ok(RootResult::none());
    }
    let q = square_free_part(p)?;
    if q.degree() == Some(1) {
        let r = Rational::new(-q.coeff(0), q.coeff(1));
        return Ok(RootResult::exact(r.clone(), root_multiplicity(p, &r)));
    }
    let chain = SturmChain::new(&q);
    let tol = dyadic_tolerance(bits);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut lo = -dyadic_cauchy_bound(&q);
    let mut hi = Rational::zero();
    let mut inside = chain.count(&lo, &hi);
    if inside == 0 {
        return Ok(RootResult::none());
    }
    while inside > 1 || &hi - &lo > tol {
        let mid = (&lo + &hi) * &half;
        let right = chain.count(&mid, &hi);
        if right > 0 {
            lo = mid;
            inside = right;
        } else if q.sign_at(&mid) == Ordering::Equal {
            let m = root_multiplicity(p, &mid);
            return Ok(RootResult::exact(mid, m));
        } else {
            hi = mid;
        }
    }
    Ok(RootResult::bracket(lo, hi))
}

/// `ζ_G(B)`.
pub fn zeta_of(g: &Graph, b: &VertexSet) -> RootResult {
    zeta_of_with_precision(g, b, DEFAULT_PRECISION_BITS)
}

pub fn zeta_of_with_precision(g: &Graph, b: &VertexSet, bits: u32) -> RootResult {
    zeta_with_precision(&cpoly_direct(g, b), bits).expect("clique polynomials are clique-shaped")
}

/// Memoises `ζ` by polynomial; small corpora repeat the same few polynomials
/// many times.
#[derive(Default)]
pub struct ZetaCache {
    bits: u32,
    map: HashMap<IntPolynomial, RootResult>,
}

impl ZetaCache {
    pub fn new(bits: u32) -> Self {
        ZetaCache {
            bits,
            map: HashMap::new(),
        }
    }

    pub fn get(&mut self, p: &IntPolynomial) -> Result<RootResult, RootError> {
        if let Some(r) = self.map.get(p) {
            return Ok(r.clone());
        }
        let r = zeta_with_precision(p, self.bits)?;
        self.map.insert(p.clone(), r.clone());
        Ok(r)
    }

    pub fn of(&mut self, g: &Graph, b: &VertexSet) -> RootResult {
        self.get(&cpoly_direct(g, b))
            .expect("clique polynomials are clique-shaped")
    }
}

#[derive(Serialize, Deserialize)]
struct RootWire {
    kind: String,
    lo: Option<String>,
    hi: Option<String>,
    exact: Option<String>,
    float: Option<f64>,
    multiplicity: Option<u32>,
}

impl Serialize for RootResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (kind, lo, hi, exact) = match &self.kind {
            RootKind::NoNegativeRoot => ("no_negative_root", None, None, None),
            RootKind::Exact(r) => ("exact", None, None, Some(r.to_string())),
            RootKind::Bracket { lo, hi } => ("bracket", Some(lo.to_string()), Some(hi.to_string()), None),
        };
        RootWire {
            kind: kind.to_string(),
            lo,
            hi,
            exact,
            float: self.float_value,
            multiplicity: self.multiplicity,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = RootWire::deserialize(d)?;
        let rat = |s: Option<String>, field: &str| {
            s.as_deref()
                .and_then(parse_rational)
                .ok_or_else(|| D::Error::custom(format!("missing or invalid '{field}'")))
        };
        let kind = match w.kind.as_str() {
            "no_negative_root" => RootKind::NoNegativeRoot,
            "exact" => RootKind::Exact(rat(w.exact, "exact")?),
            "bracket" => RootKind::Bracket {
                lo: rat(w.lo, "lo")?,
                hi: rat(w.hi, "hi")?,
            },
            other => return Err(D::Error::custom(format!("unknown kind '{other}'"))),
        };
        Ok(RootResult {
            kind,
            float_value: w.float,
            multiplicity: w.multiplicity,
        })
    }
}
