//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rationals, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `Σ coeffs[i] x^i`, kept without trailing zeros; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `1 + x`.
    pub fn one_plus_x() -> Self {
        Self::from_i64s(&[1, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// The coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// `x^k · p`.
    pub fn multiply_by_x_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// `p + c`.
    pub fn add_constant(&self, c: &BigInt) -> Self {
        self + &Self::constant(c.clone())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Horner evaluation in exact arithmetic.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let (num, den) = (x.numer(), x.denom());
        let scaled = self.homogeneous_eval(num, den);
        let d = self.degree().unwrap_or(0) as u32;
        Rational::new(scaled, num_traits::pow(den.clone(), d as usize))
    }

    /// The sign of `p(x)` without forming a rational.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.homogeneous_eval(x.numer(), x.denom()).cmp(&BigInt::zero())
    }

    /// `den^deg · p(num/den)`, computed as `Σ c_i num^i den^(deg-i)`.
    fn homogeneous_eval(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `p / content(p)` with a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// A positive multiple of the remainder of `self` divided by `divisor`,
    /// computed without leaving the integers.
    pub fn positive_pseudo_remainder(&self, divisor: &IntPolynomial) -> Self {
        let db = divisor.degree().expect("division by the zero polynomial");
        let lb = divisor.leading().unwrap();
        let scale = lb.abs();
        let sign = lb.signum();
        let mut r = self.clone();
        while let Some(dr) = r.degree().filter(|&dr| dr >= db) {
            let lr = r.leading().unwrap().clone();
            let shifted = divisor.multiply_by_x_power(dr - db).scale(&(&lr * &sign));
            r = &r.scale(&scale) - &shifted;
        }
        r
    }

    /// Exact quotient over the integers, or `None` when `divisor` does not
    /// divide `self` in `Z[x]`.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Option<Self> {
        let db = divisor.degree()?;
        let lb = divisor.leading().unwrap();
        let mut r = self.clone();
        let Some(dr) = r.degree() else {
            return Some(Self::zero());
        };
        if dr < db {
            return None;
        }
        let mut q = vec![BigInt::zero(); dr - db + 1];
        while let Some(dr) = r.degree().filter(|&dr| dr >= db) {
            let (t, rem) = r.leading().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &divisor.multiply_by_x_power(dr - db).scale(&t);
            q[dr - db] = t;
        }
        r.is_zero().then(|| Self::new(q))
    }

    /// Primitive greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.positive_pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Renders as `c0 + c1*x + c2*x^2 + ...`, omitting zero terms and unit
/// coefficients on powers of `x`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sep = match (first, c.is_negative()) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            first = false;
            let mag = c.abs();
            let power = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{sep}{mag}")?;
            } else if mag.is_one() {
                write!(f, "{sep}{power}")?;
            } else {
                write!(f, "{sep}{mag}*{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// JSON form: an array of decimal coefficient strings, constant term first.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

/// Renders a rational as `num/den`, or just `num` when it is an integer.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        assert_eq!(&p(&[3, 0, 2]) + &IntPolynomial::zero(), p(&[3, 0, 2]));
        assert_eq!(IntPolynomial::one_plus_x().pow(3), p(&[1, 3, 3, 1]));
        let cube = &(&p(&[1, 1]) * &p(&[1, 1])) * &p(&[1, 1]);
        assert_eq!(cube, p(&[1, 3, 3, 1]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPolynomial::zero());
        assert_eq!(p(&[0, 0, 0]), IntPolynomial::zero());
    }

    #[test]
    fn shifts_and_constants() {
        assert_eq!(p(&[1, 1]).multiply_by_x_power(1), p(&[0, 1, 1]));
        assert_eq!(p(&[1, 1]).multiply_by_x_power(0), p(&[1, 1]));
        assert_eq!(IntPolynomial::zero().add_constant(&BigInt::from(-1)), p(&[-1]));
    }

    #[test]
    fn evaluation() {
        assert_eq!(p(&[1, 2, 1]).eval_rational(&q(-1, 1)), q(0, 1));
        assert_eq!(p(&[1, 5, 5]).eval_rational(&q(-1, 1)), q(1, 1));
        assert_eq!(p(&[1, 7, 9, 2]).eval_rational(&q(0, 1)), q(1, 1));
        assert_eq!(p(&[1, 5, 5]).eval_rational(&q(-1, 2)), q(4 - 10 + 5, 4));
        assert_eq!(p(&[1, 3, 2]).sign_at(&q(-1, 2)), Ordering::Equal);
        assert_eq!(p(&[1, 3, 2]).sign_at(&q(-3, 4)), Ordering::Less);
        assert!((p(&[1, 5, 5]).eval_f64(-0.5) + 0.25).abs() < 1e-15);
        assert_eq!(IntPolynomial::zero().eval_rational(&q(3, 7)), q(0, 1));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p(&[1, 2, 1]).derivative(), p(&[2, 2]));
        assert_eq!(p(&[1]).derivative(), IntPolynomial::zero());
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[1, 1]).pow(3) * &p(&[1, 2]);
        assert_eq!(a.exact_div(&p(&[1, 2])), Some(p(&[1, 1]).pow(3)));
        assert_eq!(p(&[1, 5, 5]).exact_div(&p(&[1, 1])), None);
        assert_eq!(a.gcd(&a.derivative()), p(&[1, 1]).pow(2));
        assert_eq!(p(&[-2, -4]).primitive_part(), p(&[1, 2]));
        assert_eq!(p(&[1, 5, 5]).gcd(&p(&[5, 10])), p(&[1]));
        // remainder of x^2 + 1 by 2x + 1 is 5/4; any positive multiple is fine
        let r = p(&[1, 0, 1]).positive_pseudo_remainder(&p(&[1, 2]));
        assert_eq!(r.degree(), Some(0));
        assert!(r.coeff(0).is_positive());
        let r = p(&[1, 0, 1]).positive_pseudo_remainder(&p(&[1, -2]));
        assert!(r.coeff(0).is_positive());
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[1, 2, 1]).to_string(), "1 + 2*x + x^2");
        assert_eq!(p(&[1]).to_string(), "1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(p(&[0, 1, 1]).to_string(), "x + x^2");
        assert_eq!(p(&[-1, 0, -3]).to_string(), "-1 - 3*x^2");
        assert_eq!(serde_json::to_string(&p(&[1, -5, 5])).unwrap(), r#"["1","-5","5"]"#);
        let back: IntPolynomial = serde_json::from_str(r#"["1","2","0"]"#).unwrap();
        assert_eq!(back, p(&[1, 2]));
    }

    #[test]
    fn rationals() {
        assert_eq!(rational_to_string(&q(-2, 4)), "-1/2");
        assert_eq!(rational_to_string(&q(-1, 1)), "-1");
        assert_eq!(parse_rational("-1/2"), Some(q(-1, 2)));
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    fn small_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-20i64..20, 0..5).prop_map(|c| IntPolynomial::from_i64s(&c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_poly(), b in small_poly(), n in -30i64..30, d in 1i64..10) {
            let x = q(n, d);
            prop_assert_eq!((&a * &b).eval_rational(&x), a.eval_rational(&x) * b.eval_rational(&x));
            prop_assert_eq!(a.sign_at(&x), a.eval_rational(&x).cmp(&Rational::zero()));
        }

        #[test]
        fn exact_division_inverts_multiplication(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b), Some(a));
        }
    }
}
