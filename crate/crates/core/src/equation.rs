//! The central equation
//!
//! ```text
//! P(K_{n-1}(x_1..x_{n-1})) = K_n(x_0..x_{n-1}) * K_n(x_1..x_n)
//! ```
//!
//! for an admissible `(P, t, n)` with `t = ±1`. A verified solution extends
//! one step to either side: the new element is
//!
//! ```text
//! x_{n+1} = (P(K_{n-1}(x_2..x_n)) - t K_{n-2}(x_2..x_{n-1}) K_n(x_1..x_n))
//!           / (K_{n-1}(x_2..x_n) K_n(x_1..x_n))
//! ```
//!
//! and a length-`n` prefix lifts to a solution by the same formula shifted
//! one index left, provided `K_n(prefix)` divides `P(K_{n-1}(x_1..x_{n-1}))`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::continuants::Sign;
use crate::error::{Error, Result};
use crate::polynomial::{check_condition, divides, IntPolynomial};
use crate::tuple::IntTuple;

/// An admissible `(P, t, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationInstance {
    poly: IntPolynomial,
    t: Sign,
    n: usize,
}

impl EquationInstance {
    pub fn new(poly: IntPolynomial, t: Sign, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if !check_condition(&poly, t, n).holds {
            return Err(Error::Inadmissible(format!(
                "P = [{poly}] fails the admissibility condition for t = {t}, n = {n}"
            )));
        }
        Ok(EquationInstance { poly, t, n })
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn t(&self) -> Sign {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same `(P, t)`, different `n`.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        EquationInstance::new(self.poly.clone(), self.t, n)
    }

    pub(crate) fn k(&self, xs: &[BigInt]) -> BigInt {
        self.t.continuant(xs)
    }

    /// Both sides on an `(n+1)`-window, no length check.
    pub(crate) fn holds_on(&self, w: &[BigInt]) -> bool {
        let n = self.n;
        self.poly.eval(&self.k(&w[1..n])) == self.k(&w[..n]) * self.k(&w[1..])
    }

    fn check_len(&self, xs: &[BigInt], expected: usize, what: &str) -> Result<()> {
        if xs.len() == expected {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{what} must have length {expected} for n = {}, got {}",
                self.n,
                xs.len()
            )))
        }
    }
}

impl fmt::Display for EquationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P=[{}], t={}, n={}", self.poly, self.t, self.n)
    }
}

/// A verified `(n+1)`-tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    instance: Arc<EquationInstance>,
    xs: IntTuple,
}

impl Solution {
    /// Verifies `xs` against the instance.
    pub fn new(instance: Arc<EquationInstance>, xs: IntTuple) -> Result<Self> {
        if verify_solution(&instance, &xs)? {
            Ok(Solution { instance, xs })
        } else {
            Err(Error::InvalidInput(format!(
                "{xs} is not a solution for {instance}"
            )))
        }
    }

    pub fn instance(&self) -> &Arc<EquationInstance> {
        &self.instance
    }

    pub fn xs(&self) -> &IntTuple {
        &self.xs
    }

    pub fn into_tuple(self) -> IntTuple {
        self.xs
    }

    /// The reversed tuple, also a solution.
    pub fn reversed(&self) -> Solution {
        Solution {
            instance: Arc::clone(&self.instance),
            xs: self.xs.reversed(),
        }
    }

    /// `K_{n-1}(x_1..x_{n-1})`.
    pub fn m_value(&self) -> BigInt {
        let n = self.instance.n;
        self.instance.k(&self.xs[1..n])
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.xs.fmt(f)
    }
}

/// Exact check of the central equation. `xs` must have length `n + 1`.
pub fn verify_solution(inst: &EquationInstance, xs: &[BigInt]) -> Result<bool> {
    inst.check_len(xs, inst.n + 1, "solution")?;
    Ok(inst.holds_on(xs))
}

/// Outcome of completing a length-`n` prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftResult {
    /// The unique last element.
    Unique(BigInt),
    /// Every integer completes the prefix.
    Free,
    /// `K_n(prefix)` does not divide `P(K_{n-1}(x_1..x_{n-1}))`.
    NotLiftable,
}

/// One step of the recurrence on the last `n` elements.
pub(crate) enum Step {
    Unique(BigInt),
    /// Inner continuant vanishes; any next element works.
    Free,
    /// Outer continuant vanishes.
    OuterZero,
    NotDivisible,
}

/// For `tail = (y_0..y_{n-1})`, finds `y_n` with
/// `P(K_{n-1}(y_1..y_{n-1})) = K_n(y_0..y_{n-1}) K_n(y_1..y_n)`.
pub(crate) fn next_term(inst: &EquationInstance, tail: &[BigInt]) -> Result<Step> {
    let n = tail.len();
    debug_assert_eq!(n, inst.n);
    let outer = inst.k(tail);
    if outer.is_zero() {
        return Ok(Step::OuterZero);
    }
    let inner = inst.k(&tail[1..]);
    let value = inst.poly.eval(&inner);
    if !divides(&outer, &value) {
        return Ok(Step::NotDivisible);
    }
    if inner.is_zero() {
        return Ok(Step::Free);
    }
    let middle = inst.k(&tail[1..n - 1]);
    let numerator = value - inst.t.as_bigint() * middle * &outer;
    let denominator = inner * outer;
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "inexact division completing {} for {inst}",
            IntTuple::from(tail)
        )));
    }
    Ok(Step::Unique(q))
}

/// Completes a length-`n` prefix `(x_0..x_{n-1})` to a solution.
pub fn lift(inst: &EquationInstance, prefix: &[BigInt]) -> Result<LiftResult> {
    inst.check_len(prefix, inst.n, "prefix")?;
    Ok(match next_term(inst, prefix)? {
        Step::Unique(x) => LiftResult::Unique(x),
        Step::Free => LiftResult::Free,
        Step::NotDivisible => LiftResult::NotLiftable,
        // 0 | P(..) only when P(..) = 0, and then the right-hand side is 0
        // for every completion.
        Step::OuterZero => {
            if inst.poly.eval(&inst.k(&prefix[1..])).is_zero() {
                LiftResult::Free
            } else {
                LiftResult::NotLiftable
            }
        }
    })
}

/// Outcome of extending a solution by one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendResult {
    /// The shifted window with its uniquely determined new element.
    Unique(Solution),
    /// `K_{n-1}` of the boundary window vanishes: any integer continues.
    Branch,
    /// `K_n` of the boundary window vanishes; continued by
    /// `-t K_{n-2} / K_{n-1}`.
    Forced(Solution),
    /// The forced quotient is not an integer.
    Dead,
}

/// Computes the next element to the right of a window, without building a
/// [`Solution`].
pub(crate) fn next_right(inst: &EquationInstance, w: &[BigInt]) -> Result<RawStep> {
    let n = inst.n;
    let tail = &w[1..];
    match next_term(inst, tail)? {
        Step::Unique(x) => Ok(RawStep::Unique(x)),
        Step::Free => Ok(RawStep::Branch),
        Step::NotDivisible => Err(Error::Internal(format!(
            "{} satisfies the equation but its right boundary is not divisible",
            IntTuple::from(w)
        ))),
        Step::OuterZero => {
            let inner = inst.k(&w[2..]);
            if inner.is_zero() {
                return Err(Error::Internal(format!(
                    "both boundary continuants of {} vanish",
                    IntTuple::from(w)
                )));
            }
            let numerator = -(inst.t.as_bigint() * inst.k(&w[2..n]));
            let (q, r) = numerator.div_rem(&inner);
            if r.is_zero() {
                Ok(RawStep::Forced(q))
            } else {
                Ok(RawStep::Dead)
            }
        }
    }
}

pub(crate) enum RawStep {
    Unique(BigInt),
    Branch,
    Forced(BigInt),
    Dead,
}

fn shifted(sol: &Solution, x: BigInt) -> Result<Solution> {
    let mut v = sol.xs[1..].to_vec();
    v.push(x);
    let xs = IntTuple::new(v);
    if !sol.instance.holds_on(&xs) {
        return Err(Error::Internal(format!(
            "extension {xs} of {sol} fails verification"
        )));
    }
    Ok(Solution {
        instance: Arc::clone(&sol.instance),
        xs,
    })
}

/// `x_{1..n+1}` from `x_{0..n}`.
pub fn extend_right(sol: &Solution) -> Result<ExtendResult> {
    Ok(match next_right(&sol.instance, &sol.xs)? {
        RawStep::Unique(x) => ExtendResult::Unique(shifted(sol, x)?),
        RawStep::Forced(x) => ExtendResult::Forced(shifted(sol, x)?),
        RawStep::Branch => ExtendResult::Branch,
        RawStep::Dead => ExtendResult::Dead,
    })
}

/// `x_{-1..n-1}` from `x_{0..n}`, by extending the reversed tuple.
pub fn extend_left(sol: &Solution) -> Result<ExtendResult> {
    Ok(match extend_right(&sol.reversed())? {
        ExtendResult::Unique(s) => ExtendResult::Unique(s.reversed()),
        ExtendResult::Forced(s) => ExtendResult::Forced(s.reversed()),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize) -> Arc<EquationInstance> {
        Arc::new(EquationInstance::new("1,0,0,0,1".parse().unwrap(), Sign::Plus, n).unwrap())
    }

    fn sol(n: usize, xs: &[i64]) -> Solution {
        Solution::new(inst(n), IntTuple::from(xs)).unwrap()
    }

    fn t(xs: &[i64]) -> IntTuple {
        IntTuple::from(xs)
    }

    #[test]
    fn instance_validation() {
        let p: IntPolynomial = "1,0,0,0,1".parse().unwrap();
        assert!(matches!(
            EquationInstance::new(p.clone(), Sign::Plus, 3),
            Err(Error::Inadmissible(_))
        ));
        assert!(matches!(
            EquationInstance::new(p, Sign::Plus, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_solution(&inst(2), &t(&[0, 2, 8])).unwrap());
        assert!(verify_solution(&inst(4), &t(&[3, 1, 3, 2, 21])).unwrap());
        assert!(verify_solution(&inst(2), &t(&[5, 0, -7])).unwrap());
        // P(2) = 17, K_2(1,2) K_2(2,3) = 3 * 7 = 21
        assert!(!verify_solution(&inst(2), &t(&[1, 2, 3])).unwrap());
        assert!(matches!(
            verify_solution(&inst(2), &t(&[0, 2])),
            Err(Error::InvalidInput(_))
        ));
        assert!(Solution::new(inst(2), t(&[1, 2, 3])).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(
            lift(&inst(4), &t(&[0, 1, 1, 1])).unwrap(),
            LiftResult::Unique(13.into())
        );
        assert_eq!(
            lift(&inst(4), &t(&[3, 1, 3, 2])).unwrap(),
            LiftResult::Unique(21.into())
        );
        assert_eq!(
            lift(&inst(2), &t(&[0, 5])).unwrap(),
            LiftResult::Unique(125.into())
        );
        // K_2(1,2) = 3 does not divide P(2) = 17
        assert_eq!(
            lift(&inst(2), &t(&[1, 2])).unwrap(),
            LiftResult::NotLiftable
        );
        assert_eq!(lift(&inst(2), &t(&[7, 0])).unwrap(), LiftResult::Free);
        assert!(lift(&inst(2), &t(&[1, 2, 3])).is_err());
    }

    #[test]
    fn lift_with_vanishing_outer_continuant() {
        // x^2 - 1 is admissible for t = 1 and odd n.
        let p = IntPolynomial::from_i64s(&[-1, 0, 1]).unwrap();
        let odd = EquationInstance::new(p, Sign::Plus, 3).unwrap();
        // K_3(1,0,-1) = 0 and P(K_2(0,-1)) = P(1) = 0
        assert_eq!(lift(&odd, &t(&[1, 0, -1])).unwrap(), LiftResult::Free);
        // K_2(1,-1) = 0 but P(K_1(-1)) = 2
        assert_eq!(
            lift(&inst(2), &t(&[1, -1])).unwrap(),
            LiftResult::NotLiftable
        );
    }

    #[test]
    fn extend_examples() {
        let s = sol(2, &[0, 2, 8]);
        let ExtendResult::Unique(r) = extend_right(&s).unwrap() else {
            panic!()
        };
        assert_eq!(r.xs(), &t(&[2, 8, 30]));
        let ExtendResult::Unique(r) = extend_right(&r).unwrap() else {
            panic!()
        };
        assert_eq!(r.xs(), &t(&[8, 30, 112]));

        let s = sol(4, &[0, 1, 1, 1, 13]);
        let ExtendResult::Unique(r) = extend_right(&s).unwrap() else {
            panic!()
        };
        assert_eq!(r.xs(), &t(&[1, 1, 1, 13, 480]));
        assert_eq!(r.m_value(), BigInt::from(27));

        assert_eq!(
            extend_right(&sol(2, &[8, 2, 0])).unwrap(),
            ExtendResult::Branch
        );
        assert_eq!(
            extend_right(&sol(2, &[-3, 0, 0])).unwrap(),
            ExtendResult::Branch
        );
    }

    #[test]
    fn extend_left_examples() {
        let ExtendResult::Unique(l) = extend_left(&sol(4, &[0, 1, 1, 1, 13])).unwrap() else {
            panic!()
        };
        assert_eq!(l.xs(), &t(&[-1, 0, 1, 1, 1]));
        let ExtendResult::Unique(l) = extend_left(&sol(2, &[2, 8, 30])).unwrap() else {
            panic!()
        };
        assert_eq!(l.xs(), &t(&[0, 2, 8]));
        let ExtendResult::Unique(l) = extend_left(&sol(4, &[1, 1, 7, 1, 42])).unwrap() else {
            panic!()
        };
        assert_eq!(l.xs(), &t(&[198, 1, 1, 7, 1]));
        assert!(verify_solution(&inst(4), l.xs()).unwrap());
    }

    #[test]
    fn forced_extension() {
        // x^2 - 1, t = 1, n = 3. (x0,1,0,-1) solves it for every x0 since
        // P(K_2(1,0)) = 0 = K_3(1,0,-1).
        let p = IntPolynomial::from_i64s(&[-1, 0, 1]).unwrap();
        let inst = Arc::new(EquationInstance::new(p, Sign::Plus, 3).unwrap());
        let s = Solution::new(Arc::clone(&inst), t(&[5, 1, 0, -1])).unwrap();
        match extend_right(&s).unwrap() {
            ExtendResult::Forced(next) => {
                assert_eq!(next.xs(), &t(&[1, 0, -1, 0]));
                assert!(inst.k(&next.xs()[1..]).is_zero());
            }
            other => panic!("expected Forced, got {other:?}"),
        }
    }
}
