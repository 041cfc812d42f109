//! Exact arithmetic in the Gaussian rationals `Q(i)`.
//!
//! Every construction in this crate is linear in its input data, so an exact
//! subfield of the complex numbers that is closed under conjugation is enough
//! to stand in for `C`. Equality is decidable and nothing is ever rounded.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A rational with machine-word numerator and positive denominator, in
/// lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Q64 {
    n: i64,
    d: i64,
}

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Q64 {
    const ZERO: Q64 = Q64 { n: 0, d: 1 };
    const ONE: Q64 = Q64 { n: 1, d: 1 };

    fn reduce(n: i128, d: i128) -> Option<Q64> {
        if n == 0 {
            return Some(Q64::ZERO);
        }
        let g = gcd128(n, d) * d.signum();
        Some(Q64 { n: i64::try_from(n / g).ok()?, d: i64::try_from(d / g).ok()? })
    }

    fn add(self, o: Q64) -> Option<Q64> {
        if self.d == o.d {
            return Q64::reduce(self.n as i128 + o.n as i128, self.d as i128);
        }
        let n = (self.n as i128).checked_mul(o.d as i128)?.checked_add((o.n as i128).checked_mul(self.d as i128)?)?;
        Q64::reduce(n, self.d as i128 * o.d as i128)
    }

    fn mul(self, o: Q64) -> Option<Q64> {
        if self.n == 0 || o.n == 0 {
            return Some(Q64::ZERO);
        }
        Q64::reduce(self.n as i128 * o.n as i128, self.d as i128 * o.d as i128)
    }

    fn neg(self) -> Option<Q64> {
        Some(Q64 { n: self.n.checked_neg()?, d: self.d })
    }

    fn big(self) -> BigRational {
        BigRational::new_raw(self.n.into(), self.d.into())
    }

    fn from_big(q: &BigRational) -> Option<Q64> {
        Some(Q64 { n: i64::try_from(q.numer()).ok()?, d: i64::try_from(q.denom()).ok()? })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Q64, Q64),
    /// Only used when some part does not fit the small form.
    Big(BigRational, BigRational),
}

/// An element `re + im*i` of `Q(i)`.
///
/// Small values are kept in machine words and promoted on overflow, so the
/// representation is canonical and the derived equality is exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        match (Q64::from_big(&re), Q64::from_big(&im)) {
            (Some(a), Some(b)) => Scalar(Repr::Small(a, b)),
            _ => Scalar(Repr::Big(re, im)),
        }
    }

    fn small(re: Q64, im: Q64) -> Self {
        Scalar(Repr::Small(re, im))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Scalar::small(Q64 { n: re, d: 1 }, Q64 { n: im, d: 1 })
    }

    pub fn int(n: i64) -> Self {
        Scalar::from_ints(n, 0)
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Scalar::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar::new(q, BigRational::zero())
    }

    pub fn i() -> Self {
        Scalar::from_ints(0, 1)
    }

    pub fn zero() -> Self {
        Scalar::small(Q64::ZERO, Q64::ZERO)
    }

    pub fn one() -> Self {
        Scalar::small(Q64::ONE, Q64::ZERO)
    }

    fn parts(&self) -> (BigRational, BigRational) {
        match &self.0 {
            Repr::Small(a, b) => (a.big(), b.big()),
            Repr::Big(a, b) => (a.clone(), b.clone()),
        }
    }

    pub fn re(&self) -> BigRational {
        self.parts().0
    }

    pub fn im(&self) -> BigRational {
        self.parts().1
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(Q64::ZERO, Q64::ZERO))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(Q64::ONE, Q64::ZERO))
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b) => b.n == 0,
            Repr::Big(_, b) => b.is_zero(),
        }
    }

    /// True when the element lies in `Z`.
    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(a, b) => b.n == 0 && a.d == 1,
            Repr::Big(a, b) => b.is_zero() && a.is_integer(),
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.re().to_integer())
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Small(a, b) => match b.neg() {
                Some(nb) => Scalar::small(*a, nb),
                None => Scalar::new(a.big(), -b.big()),
            },
            Repr::Big(a, b) => Scalar::new(a.clone(), -b.clone()),
        }
    }

    /// `|z|^2 = z * conj(z)`, a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        let (re, im) = self.parts();
        &re * &re + &im * &im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Repr::Small(a, b) = self.0 {
            if b.n == 0 {
                let n = a.n.signum() * a.d;
                if let Some(d) = a.n.checked_abs() {
                    return Some(Scalar::small(Q64 { n, d }, Q64::ZERO));
                }
            }
        }
        let (re, im) = self.parts();
        let n = &re * &re + &im * &im;
        Some(Scalar::new(&re / &n, -(&im / &n)))
    }

    fn add_small(a: (Q64, Q64), b: (Q64, Q64)) -> Option<Scalar> {
        Some(Scalar::small(a.0.add(b.0)?, a.1.add(b.1)?))
    }

    fn mul_small(a: (Q64, Q64), b: (Q64, Q64)) -> Option<Scalar> {
        if a.1.n == 0 && b.1.n == 0 {
            return Some(Scalar::small(a.0.mul(b.0)?, Q64::ZERO));
        }
        let re = a.0.mul(b.0)?.add(a.1.mul(b.1)?.neg()?)?;
        let im = a.0.mul(b.1)?.add(a.1.mul(b.0)?)?;
        Some(Scalar::small(re, im))
    }

    fn pair(&self) -> Option<(Q64, Q64)> {
        match self.0 {
            Repr::Small(a, b) => Some((a, b)),
            Repr::Big(..) => None,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    if let Some(z) = a.pair().zip(b.pair()).and_then(|(x, y)| Scalar::add_small(x, y)) {
        return z;
    }
    let ((ar, ai), (br, bi)) = (a.parts(), b.parts());
    Scalar::new(ar + br, ai + bi)
});
forward_binop!(Sub, sub, |a, b| a + &(-b));
forward_binop!(Mul, mul, |a, b| {
    if let Some(z) = a.pair().zip(b.pair()).and_then(|(x, y)| Scalar::mul_small(x, y)) {
        return z;
    }
    let ((ar, ai), (br, bi)) = (a.parts(), b.parts());
    Scalar::new(&ar * &br - &ai * &bi, &ar * &bi + &ai * &br)
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero in Q(i)");
    a * &inv
});

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        if let Some((a, b)) = self.pair() {
            if let (Some(x), Some(y)) = (a.neg(), b.neg()) {
                return Scalar::small(x, y);
            }
        }
        let (re, im) = self.parts();
        Scalar::new(-re, -im)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Canonical text form: `"a/b"` for rationals, `"a/b+c/d*i"` otherwise,
/// always in lowest terms with an explicit denominator.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.parts();
        if im.is_zero() {
            return write!(f, "{}", fmt_rational(&re));
        }
        let sign = if im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*i", fmt_rational(&re), sign, fmt_rational(&im.abs()))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed scalar literal {0:?}")]
pub struct ParseScalarError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Accepts the canonical form plus the shorthands `"3"`, `"-i"`, `"1/2*i"`.
impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t = s.trim();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(t).map(Scalar::from_rational).ok_or_else(err);
        };
        // find the sign separating real and imaginary parts (not at position 0)
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im_part = im_part.strip_suffix('*').unwrap_or(im_part);
        let im = match im_part.trim() {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other)).ok_or_else(err)?,
        };
        let re = parse_rational(re_part).ok_or_else(err)?;
        Ok(Scalar::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_round_trip() {
        for (text, canon) in [
            ("3", "3/1"),
            ("-2/4", "-1/2"),
            ("i", "0/1+1/1*i"),
            ("-i", "0/1-1/1*i"),
            ("1/2+3/4*i", "1/2+3/4*i"),
            ("1/2-3/4*i", "1/2-3/4*i"),
            ("-1/3*i", "0/1-1/3*i"),
        ] {
            let x: Scalar = text.parse().unwrap();
            assert_eq!(x.to_string(), canon);
            assert_eq!(canon.parse::<Scalar>().unwrap(), x);
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn field_arithmetic() {
        let a = Scalar::from_ints(1, 2);
        let b = Scalar::from_ints(3, -1);
        assert_eq!(&a * &b, Scalar::from_ints(5, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::int(-1));
        assert!(Scalar::zero().inv().is_none());
    }
}
