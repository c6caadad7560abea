//! Integer polynomials `P(x) = c_0 + c_1 x + .. + c_d x^d` and the
//! admissibility condition on `(P, t, n)`:
//!
//! ```text
//! c_0 = (-t)^n   and   x^d P((-t)^{n-1} / x) = C * P(x),  C != 0
//! ```
//!
//! Comparing coefficients, the second half reads `c_i s^i = C c_{d-i}` for
//! every `i`, with `s = (-t)^{n-1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::continuants::Sign;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Coefficients constant term first. Degree must be at least 1 and the
    /// leading coefficient nonzero.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(
                "polynomial must have degree at least 1".into(),
            ));
        }
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "leading coefficient must be nonzero".into(),
            ));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `P(-x) = P(x)`.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// `P(-x) = -P(x)`.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Zero::is_zero)
    }
}

/// Text format `"c_0,c_1,..,c_d"`.
impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {part:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IntPolynomial::new(coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// `C`, present iff `holds`.
    #[serde(serialize_with = "opt_decimal")]
    pub constant: Option<BigInt>,
    /// The condition holds for every even `n` (with this `t`).
    pub even_n: bool,
    /// The condition holds for every odd `n` (with this `t`).
    pub odd_n: bool,
}

fn opt_decimal<S: serde::Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(c) => s.collect_str(c),
        None => s.serialize_none(),
    }
}

/// The constant `C` if `(P, t, n)` is admissible.
fn admissible_constant(p: &IntPolynomial, t: Sign, n: usize) -> Option<BigInt> {
    let c = &p.coeffs;
    let d = p.degree();
    let minus_t = t.neg();
    if c[0] != BigInt::from(minus_t.pow(n)) {
        return None;
    }
    let s = minus_t.pow(n.saturating_sub(1));
    let s_pow = |i: usize| if s == -1 && i % 2 == 1 { -1 } else { 1 };
    // c_0 = ±1, so C = c_d s^d / c_0 is an integer.
    let constant = &c[d] * s_pow(d) * &c[0];
    let ok = (0..=d).all(|i| &c[i] * s_pow(i) == &constant * &c[d - i]);
    ok.then_some(constant)
}

/// Checks admissibility of `(P, t, n)` and reports the parities of `n` that
/// are admissible for this `(P, t)`. The condition depends on `n` only
/// through its parity.
pub fn check_condition(p: &IntPolynomial, t: Sign, n: usize) -> ConditionReport {
    let constant = admissible_constant(p, t, n);
    let even_n = admissible_constant(p, t, 2).is_some();
    let odd_n = admissible_constant(p, t, 3).is_some();
    debug_assert!(constant.as_ref().is_none_or(|c| !c.is_zero()));
    ConditionReport {
        holds: constant.is_some(),
        constant,
        even_n,
        odd_n,
    }
}

/// `a | b`, with `0 | b` only for `b = 0`.
pub(crate) fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a.abs()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn x4p1() -> IntPolynomial {
        "1,0,0,0,1".parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p = x4p1();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.to_string(), "1,0,0,0,1");
        assert!("1".parse::<IntPolynomial>().is_err());
        assert!("1,2,0".parse::<IntPolynomial>().is_err());
        assert!(matches!(
            "1,a".parse::<IntPolynomial>(),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn horner() {
        let p = x4p1();
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(82));
        assert_eq!(p.eval(&BigInt::from(0)), BigInt::from(1));
        assert_eq!(
            p.eval(&BigInt::from(30)),
            BigInt::from(30i64 * 30 * 30 * 30 + 1)
        );
        let q = IntPolynomial::from_i64s(&[-5, 0, 2, -1]).unwrap();
        assert_eq!(q.eval(&BigInt::from(-2)), BigInt::from(-5 + 2 * 4 + 8));
    }

    #[test]
    fn condition_examples() {
        let r = check_condition(&x4p1(), Sign::Plus, 2);
        assert!(r.holds);
        assert_eq!(r.constant, Some(BigInt::from(1)));
        assert!(r.even_n && !r.odd_n);

        let r = check_condition(&x4p1(), Sign::Plus, 3);
        assert!(!r.holds);
        assert_eq!(r.constant, None);

        let q = IntPolynomial::from_i64s(&[1, 3, 1]).unwrap();
        let r = check_condition(&q, Sign::Minus, 5);
        assert!(r.holds);
        assert_eq!(r.constant, Some(BigInt::from(1)));
        assert!(r.even_n && r.odd_n);
    }

    #[test]
    fn antisymmetric_and_sign_twisted() {
        // x^2 - 1: c_0 = -1 needs t = 1 and odd n; C = -1.
        let p = IntPolynomial::from_i64s(&[-1, 0, 1]).unwrap();
        let r = check_condition(&p, Sign::Plus, 3);
        assert!(r.holds);
        assert_eq!(r.constant, Some(BigInt::from(-1)));
        assert!(!r.even_n && r.odd_n);
        // x^2 + 3x + 1 with t = 1, n even: s = -1 flips the middle sign.
        let q = IntPolynomial::from_i64s(&[1, 3, 1]).unwrap();
        assert!(!check_condition(&q, Sign::Plus, 2).holds);
        let q = IntPolynomial::from_i64s(&[1, -3, 1]).unwrap();
        assert!(!check_condition(&q, Sign::Plus, 2).holds);
        let q = IntPolynomial::from_i64s(&[1, 3, 0, 1]).unwrap();
        assert!(!check_condition(&q, Sign::Minus, 2).holds);
    }

    #[test]
    fn even_odd() {
        assert!(x4p1().is_even());
        assert!(!x4p1().is_odd());
        assert!(IntPolynomial::from_i64s(&[0, 1, 0, 1]).unwrap().is_odd());
    }

    #[test]
    fn divides_handles_zero() {
        let b = |x: i64| BigInt::from(x);
        assert!(divides(&b(0), &b(0)));
        assert!(!divides(&b(0), &b(3)));
        assert!(divides(&b(-3), &b(9)));
        assert!(!divides(&b(4), &b(9)));
    }

    fn symmetric_monic() -> impl Strategy<Value = IntPolynomial> {
        (1usize..=6, prop::collection::vec(-20i64..=20, 6)).prop_map(|(d, mid)| {
            let mut c = vec![0i64; d + 1];
            c[0] = 1;
            c[d] = 1;
            for i in 1..d {
                let j = d - i;
                c[i] = mid[i.min(j)];
            }
            IntPolynomial::from_i64s(&c).unwrap()
        })
    }

    fn small_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-2i64..=2, 2..=6)
            .prop_filter("nonzero leading", |c| *c.last().unwrap() != 0)
            .prop_map(|c| IntPolynomial::from_i64s(&c).unwrap())
    }

    proptest! {
        #[test]
        fn symmetric_monic_admissible_for_minus_one(p in symmetric_monic(), n in 2usize..12) {
            prop_assert!(check_condition(&p, Sign::Minus, n).holds);
        }

        #[test]
        fn parity_invariance(p in small_poly(), n in 2usize..12, t in prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]) {
            let a = check_condition(&p, t, n);
            let b = check_condition(&p, t, n + 2);
            prop_assert_eq!(a.holds, b.holds);
            if a.holds {
                // c_i s^i = C c_{d-i}
                let d = p.degree();
                let s = t.neg().pow(n - 1);
                let c = a.constant.clone().unwrap();
                prop_assert!(!c.is_zero());
                for i in 0..=d {
                    let si = if s == -1 && i % 2 == 1 { -1 } else { 1 };
                    prop_assert_eq!(&p.coeffs()[i] * si, &c * &p.coeffs()[d - i]);
                }
            }
        }

        #[test]
        fn coprime_values_for_t_one(p in small_poly(), n in 2usize..6) {
            if check_condition(&p, Sign::Plus, n).holds {
                for m in -100i64..=100 {
                    let m = BigInt::from(m);
                    let g = m.gcd(&p.eval(&m));
                    prop_assert_eq!(g, BigInt::from(1));
                }
            }
        }
    }
}
