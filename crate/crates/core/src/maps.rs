//! Solution-generating maps.
//!
//! The maps act on divisor prefixes `(x_0..x_n)` with
//! `K_{n+1}(x_0..x_n) | P(K_n(x_1..x_n))`; a prefix of length `n+1`
//! completes to a solution of the length-`n+1` equation (see
//! [`complete`]).
//!
//! - `f_a(x) = (0, a, x_0..x_n)`: outer continuant unchanged (up to sign for
//!   `t = -1`), inner becomes `a K_{n+1}(x) + t K_n(x_1..x_n)`.
//! - `f*_{a,b}(x) = (0, a, x_0..x_n, b)` when the inner continuant is zero.
//! - `g(x) = (1, x_0 - t, x_1..x_n)`, `h(x) = (x_0..x_{n-1}, x_n - t, 1)`:
//!   both keep the outer continuant and flip the parity of the length, so
//!   for `t = 1` they are used in pairs.
//!
//! Divisibility is re-checked after every map; for `t = -1`, and for `g`,
//! `h` in general, it needs `P` even or odd.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::continuants::Sign;
use crate::equation::{lift, EquationInstance, LiftResult, Solution};
use crate::error::{Error, Result};
use crate::polynomial::{divides, IntPolynomial};
use crate::tuple::IntTuple;

/// A tuple `(x_0..x_n)`, `n >= 1`, whose outer continuant divides `P` of
/// its inner continuant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPrefix {
    poly: Arc<IntPolynomial>,
    t: Sign,
    xs: IntTuple,
}

impl DivisorPrefix {
    pub fn new(poly: Arc<IntPolynomial>, t: Sign, xs: IntTuple) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::InvalidInput(
                "divisor prefix needs at least two elements".into(),
            ));
        }
        let p = DivisorPrefix { poly, t, xs };
        if !p.divisibility_holds() {
            return Err(Error::InvalidInput(format!(
                "K({}) does not divide P(K({}))",
                p.xs,
                IntTuple::from(&p.xs[1..])
            )));
        }
        Ok(p)
    }

    pub fn xs(&self) -> &IntTuple {
        &self.xs
    }

    pub fn t(&self) -> Sign {
        self.t
    }

    pub fn poly(&self) -> &Arc<IntPolynomial> {
        &self.poly
    }

    /// `K_{n+1}(x_0..x_n)`.
    pub fn outer(&self) -> BigInt {
        self.t.continuant(&self.xs)
    }

    /// `K_n(x_1..x_n)`.
    pub fn inner(&self) -> BigInt {
        self.t.continuant(&self.xs[1..])
    }

    fn divisibility_holds(&self) -> bool {
        divides(&self.outer(), &self.poly.eval(&self.inner()))
    }

    /// Builds the image, re-checking divisibility.
    fn image(&self, xs: IntTuple, map: &str) -> Result<DivisorPrefix> {
        let p = DivisorPrefix {
            poly: Arc::clone(&self.poly),
            t: self.t,
            xs,
        };
        if p.divisibility_holds() {
            Ok(p)
        } else {
            Err(Error::InvalidInput(format!(
                "{map} of {} breaks divisibility (P must be even or odd here)",
                self.xs
            )))
        }
    }

    fn instance(&self) -> Result<Arc<EquationInstance>> {
        EquationInstance::new((*self.poly).clone(), self.t, self.xs.len()).map(Arc::new)
    }
}

impl fmt::Display for DivisorPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.xs.fmt(f)
    }
}

/// Drops the last coordinate of a solution.
pub fn prefix_of(sol: &Solution) -> DivisorPrefix {
    let inst = sol.instance();
    let xs = IntTuple::from(&sol.xs()[..inst.n()]);
    DivisorPrefix {
        poly: Arc::new(inst.poly().clone()),
        t: inst.t(),
        xs,
    }
}

/// A completed prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    Solution(Solution),
    /// Any last element completes the prefix.
    Free(DivisorPrefix),
}

/// Completes a prefix of length `n` to a solution of the `n` equation.
pub fn complete(prefix: &DivisorPrefix) -> Result<Completion> {
    let inst = prefix.instance()?;
    match lift(&inst, &prefix.xs)? {
        LiftResult::Unique(x) => {
            let sol = Solution::new(inst, prefix.xs.concat(&[x]))
                .map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Completion::Solution(sol))
        }
        LiftResult::Free => Ok(Completion::Free(prefix.clone())),
        LiftResult::NotLiftable => Err(Error::Internal(format!(
            "divisor prefix {} failed to lift",
            prefix.xs
        ))),
    }
}

/// `f_a`: `(0, a) ++ x`. Requires a nonzero inner continuant.
pub fn map_f(a: &BigInt, prefix: &DivisorPrefix) -> Result<DivisorPrefix> {
    if prefix.inner().is_zero() {
        return Err(Error::InvalidInput(format!(
            "inner continuant of {} is zero; use fstar",
            prefix.xs
        )));
    }
    let xs = IntTuple::from(vec![BigInt::zero(), a.clone()]).concat(&prefix.xs);
    prefix.image(xs, "f")
}

/// `f*_{a,b}`: `(0, a) ++ x ++ (b)`, verified as a solution. Requires a zero
/// inner continuant.
pub fn map_f_star(a: &BigInt, b: &BigInt, prefix: &DivisorPrefix) -> Result<Solution> {
    if !prefix.inner().is_zero() {
        return Err(Error::InvalidInput(format!(
            "inner continuant of {} is nonzero; use f",
            prefix.xs
        )));
    }
    let xs = IntTuple::from(vec![BigInt::zero(), a.clone()])
        .concat(&prefix.xs)
        .concat(std::slice::from_ref(b));
    let inst = EquationInstance::new((*prefix.poly).clone(), prefix.t, xs.len() - 1)?;
    Solution::new(Arc::new(inst), xs)
}

/// `g`: `(1, x_0 - t, x_1..x_n)`.
pub fn map_g(prefix: &DivisorPrefix) -> Result<DivisorPrefix> {
    let mut v = vec![BigInt::one(), &prefix.xs[0] - prefix.t.as_bigint()];
    v.extend_from_slice(&prefix.xs[1..]);
    prefix.image(IntTuple::new(v), "g")
}

/// `h`: `(x_0..x_{n-1}, x_n - t, 1)`.
pub fn map_h(prefix: &DivisorPrefix) -> Result<DivisorPrefix> {
    let n = prefix.xs.len() - 1;
    let mut v = prefix.xs[..n].to_vec();
    v.push(&prefix.xs[n] - prefix.t.as_bigint());
    v.push(BigInt::one());
    prefix.image(IntTuple::new(v), "h")
}

/// Inverse of [`map_g`]; needs `x_0 = 1`.
pub fn map_g_inv(prefix: &DivisorPrefix) -> Result<DivisorPrefix> {
    if !prefix.xs[0].is_one() || prefix.xs.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "g^-1 needs x_0 = 1 and length >= 3, got {}",
            prefix.xs
        )));
    }
    let mut v = vec![&prefix.xs[1] + prefix.t.as_bigint()];
    v.extend_from_slice(&prefix.xs[2..]);
    prefix.image(IntTuple::new(v), "g^-1")
}

/// Inverse of [`map_h`]; needs `x_n = 1`.
pub fn map_h_inv(prefix: &DivisorPrefix) -> Result<DivisorPrefix> {
    let len = prefix.xs.len();
    if !prefix.xs[len - 1].is_one() || len < 3 {
        return Err(Error::InvalidInput(format!(
            "h^-1 needs x_n = 1 and length >= 3, got {}",
            prefix.xs
        )));
    }
    let mut v = prefix.xs[..len - 2].to_vec();
    v.push(&prefix.xs[len - 2] + prefix.t.as_bigint());
    prefix.image(IntTuple::new(v), "h^-1")
}

/// One map in an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapOp {
    F(BigInt),
    FStar(BigInt, BigInt),
    G,
    H,
    GInv,
    HInv,
}

impl fmt::Display for MapOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapOp::F(a) => write!(f, "f:{a}"),
            MapOp::FStar(a, b) => write!(f, "fstar:{a},{b}"),
            MapOp::G => write!(f, "g"),
            MapOp::H => write!(f, "h"),
            MapOp::GInv => write!(f, "ginv"),
            MapOp::HInv => write!(f, "hinv"),
        }
    }
}

impl FromStr for MapOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<MapOp> {
        let int = |v: &str| {
            v.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("bad map parameter {v:?}: {e}")))
        };
        match s.trim().split_once(':') {
            Some(("f", a)) => Ok(MapOp::F(int(a)?)),
            Some(("fstar", ab)) => {
                let (a, b) = ab
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("fstar needs a,b: {s:?}")))?;
                Ok(MapOp::FStar(int(a)?, int(b)?))
            }
            Some(_) => Err(Error::Parse(format!("unknown map {s:?}"))),
            None => match s.trim() {
                "g" => Ok(MapOp::G),
                "h" => Ok(MapOp::H),
                "ginv" => Ok(MapOp::GInv),
                "hinv" => Ok(MapOp::HInv),
                other => Err(Error::Parse(format!("unknown map {other:?}"))),
            },
        }
    }
}

/// Result of applying a map expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapOutcome {
    Prefix(DivisorPrefix),
    /// `fstar` yields a full solution.
    Solution(Solution),
}

/// A composition such as `"g.h"`, written left to right and applied right
/// to left. `fstar` may only appear leftmost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapExpr(Vec<MapOp>);

impl MapExpr {
    pub fn ops(&self) -> &[MapOp] {
        &self.0
    }

    pub fn apply(&self, prefix: &DivisorPrefix) -> Result<MapOutcome> {
        let mut current = prefix.clone();
        let last = self.0.len() - 1;
        for (i, op) in self.0.iter().rev().enumerate() {
            current = match op {
                MapOp::F(a) => map_f(a, &current)?,
                MapOp::G => map_g(&current)?,
                MapOp::H => map_h(&current)?,
                MapOp::GInv => map_g_inv(&current)?,
                MapOp::HInv => map_h_inv(&current)?,
                MapOp::FStar(a, b) if i == last => {
                    return map_f_star(a, b, &current).map(MapOutcome::Solution)
                }
                MapOp::FStar(..) => {
                    return Err(Error::InvalidInput(
                        "fstar yields a solution and must be applied last".into(),
                    ))
                }
            };
        }
        Ok(MapOutcome::Prefix(current))
    }
}

impl FromStr for MapExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<MapExpr> {
        let ops = s
            .split('.')
            .map(str::parse)
            .collect::<Result<Vec<MapOp>>>()?;
        if ops.is_empty() {
            return Err(Error::Parse("empty map expression".into()));
        }
        Ok(MapExpr(ops))
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Side condition under which a composition is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    None,
    InnerNonzero,
    InnerZero,
    FirstIsOne,
    LastIsOne,
    FirstAndLastAreOne,
}

impl Requirement {
    pub fn holds(self, prefix: &DivisorPrefix) -> bool {
        let xs = prefix.xs();
        match self {
            Requirement::None => true,
            Requirement::InnerNonzero => !prefix.inner().is_zero(),
            Requirement::InnerZero => prefix.inner().is_zero(),
            Requirement::FirstIsOne => xs[0].is_one(),
            Requirement::LastIsOne => xs[xs.len() - 1].is_one(),
            Requirement::FirstAndLastAreOne => xs[0].is_one() && xs[xs.len() - 1].is_one(),
        }
    }
}

/// A map expression that keeps solutions inside the solution set for its
/// `t`, with the condition it needs. `f` and `fstar` are listed with
/// placeholder parameters `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionRule {
    pub expr: &'static str,
    pub requires: Requirement,
}

impl CompositionRule {
    /// The expression with `a`, `b` substituted.
    pub fn instantiate(&self, a: &BigInt, b: &BigInt) -> MapExpr {
        self.expr
            .replace("fstar:a,b", &format!("fstar:{a},{b}"))
            .replace("f:a", &format!("f:{a}"))
            .parse()
            .expect("composition table entries parse")
    }
}

/// The admissible compositions for `t`. For `t = 1`, `g` and `h` change the
/// parity of `n` and only appear paired.
pub fn valid_compositions(t: Sign) -> Vec<CompositionRule> {
    let rule = |expr, requires| CompositionRule { expr, requires };
    match t {
        Sign::Plus => vec![
            rule("f:a", Requirement::InnerNonzero),
            rule("fstar:a,b", Requirement::InnerZero),
            rule("g.h", Requirement::None),
            rule("g.hinv", Requirement::LastIsOne),
            rule("ginv.h", Requirement::FirstIsOne),
            rule("ginv.hinv", Requirement::FirstAndLastAreOne),
        ],
        Sign::Minus => vec![
            rule("f:a", Requirement::InnerNonzero),
            rule("fstar:a,b", Requirement::InnerZero),
            rule("g", Requirement::None),
            rule("h", Requirement::None),
            rule("ginv", Requirement::FirstIsOne),
            rule("hinv", Requirement::LastIsOne),
        ],
    }
}
