//! Generalized continuants `K_n^(t)`.
//!
//! `K_0() = 1`, `K_1(x_1) = x_1` and
//! `K_{k+1}(x_1..x_{k+1}) = x_{k+1} K_k(x_1..x_k) + t K_{k-1}(x_1..x_{k-1})`.
//!
//! Evaluation carries the two most recent values, so a length-`n` tuple
//! costs `n` multiplications. Windows `x_a..x_b` are plain slices.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The continuant parameter restricted to `t = 1` or `t = -1`.
///
/// Chains, maps and the bridge only make sense for these two values; plain
/// evaluation through [`continuant`] accepts any nonzero `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.value())
    }

    /// `K_n^(t)(xs)` for this `t`.
    pub fn continuant(self, xs: &[BigInt]) -> BigInt {
        eval(self.value(), xs)
    }

    /// `s^k` for `s = ±1`.
    pub(crate) fn pow(self, k: usize) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus if k.is_multiple_of(2) => 1,
            Sign::Minus => -1,
        }
    }

    pub(crate) fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;

    fn try_from(t: i64) -> Result<Sign> {
        match t {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameter(format!(
                "t must be 1 or -1, got {t}"
            ))),
        }
    }
}

impl From<Sign> for i64 {
    fn from(s: Sign) -> i64 {
        s.value()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn eval(t: i64, xs: &[BigInt]) -> BigInt {
    let t = BigInt::from(t);
    // (K_{k-1}, K_k), starting from K_{-1} = 0, K_0 = 1.
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for x in xs {
        let next = x * &cur + &t * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn check_t(t: i64) -> Result<()> {
    if t == 0 {
        Err(Error::InvalidParameter("t must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// `K_n^(t)(xs)` with `n = xs.len()`; the empty tuple gives 1.
pub fn continuant(t: i64, xs: &[BigInt]) -> Result<BigInt> {
    check_t(t)?;
    Ok(eval(t, xs))
}

/// Row-major 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// `[[0, t], [1, x]]`.
    pub fn step(t: &BigInt, x: &BigInt) -> Self {
        Matrix2 {
            a: BigInt::zero(),
            b: t.clone(),
            c: BigInt::one(),
            d: x.clone(),
        }
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

/// Product of the matrices `[[0, t], [1, x_i]]` over `xs`, which equals
/// `[[t K_{n-2}(x_2..x_{n-1}), t K_{n-1}(x_2..x_n)], [K_{n-1}(x_1..x_{n-1}), K_n(x_1..x_n)]]`.
///
/// Kept as an independent route for testing the scalar recurrence.
pub fn continuant_matrix(t: i64, xs: &[BigInt]) -> Result<Matrix2> {
    check_t(t)?;
    let t = BigInt::from(t);
    Ok(xs
        .iter()
        .fold(Matrix2::identity(), |acc, x| &acc * &Matrix2::step(&t, x)))
}
