//! Starting solutions.
//!
//! Any tuple with continuant `±1` lifts to a solution, because `±1` divides
//! everything. This module enumerates such unit tuples by brute force,
//! generates the known parametric families for small `n`, pads unit tuples
//! to longer ones, and classifies the solutions of
//! `x1^4 + 1 = (x0 x1 + 1)(x1 x2 + 1)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{Chain, EndState, Side};
use crate::continuants::Sign;
use crate::equation::{lift, EquationInstance, LiftResult, Solution};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;
use crate::tuple::IntTuple;

/// All tuples of length `n` with entries in `[-bound, bound]` and
/// `K_n^(t) = target`, sorted lexicographically.
pub fn enumerate_unit_tuples(t: Sign, n: usize, bound: u64, target: i64) -> Vec<IntTuple> {
    let b = bound as i64;
    let target = BigInt::from(target);
    let tb = t.as_bigint();
    if n == 0 {
        return if target.is_one() {
            vec![IntTuple::empty()]
        } else {
            Vec::new()
        };
    }
    let mut found: Vec<IntTuple> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut prefix = vec![BigInt::from(first)];
            // (K_{k-1}, K_k) after the first element
            let state = (BigInt::one(), BigInt::from(first));
            search(n, b, &tb, &target, &mut prefix, state, &mut out);
            out
        })
        .collect();
    found.sort();
    found
}

fn search(
    n: usize,
    b: i64,
    t: &BigInt,
    target: &BigInt,
    prefix: &mut Vec<BigInt>,
    (prev, cur): (BigInt, BigInt),
    out: &mut Vec<IntTuple>,
) {
    if prefix.len() == n {
        if &cur == target {
            out.push(IntTuple::from(prefix.as_slice()));
        }
        return;
    }
    for x in -b..=b {
        let x = BigInt::from(x);
        let next = &x * &cur + t * &prev;
        prefix.push(x);
        search(n, b, t, target, prefix, (cur.clone(), next), out);
        prefix.pop();
    }
}

/// One entry `c + ka * a + kb * b` of a parametric family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    c: i64,
    ka: i64,
    kb: i64,
}

impl Slot {
    /// Parses `"0"`, `"a"`, `"-a"`, `"1-a"`, `"-1-a"`, `"b"`, ...
    fn parse(s: &str) -> Slot {
        let mut slot = Slot { c: 0, ka: 0, kb: 0 };
        let mut rest = s;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body[1..].find(['+', '-']).map_or(body.len(), |i| i + 1);
            match &body[..end] {
                "a" => slot.ka += sign,
                "b" => slot.kb += sign,
                num => slot.c += sign * num.parse::<i64>().expect("family slot literal"),
            }
            rest = &body[end..];
        }
        slot
    }

    fn eval(self, a: i64, b: i64) -> i64 {
        self.c + self.ka * a + self.kb * b
    }
}

/// A parametric family of unit tuples (free integer parameters `a`, `b`),
/// or an isolated tuple when no slot mentions a parameter.
///
/// The generator and the membership test both read the same slot data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitFamily {
    t: Sign,
    slots: Vec<Slot>,
    label: String,
}

impl UnitFamily {
    fn new(t: Sign, pattern: &[&str]) -> Self {
        UnitFamily {
            t,
            slots: pattern.iter().map(|s| Slot::parse(s)).collect(),
            label: format!("({})", pattern.join(",")),
        }
    }

    fn isolated(t: Sign, xs: &[i64]) -> Self {
        let pattern: Vec<String> = xs.iter().map(ToString::to_string).collect();
        let refs: Vec<&str> = pattern.iter().map(String::as_str).collect();
        UnitFamily::new(t, &refs)
    }

    pub fn t(&self) -> Sign {
        self.t
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// E.g. `"(a,0,1-a)"`.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parameter_count(&self) -> usize {
        let uses_a = self.slots.iter().any(|s| s.ka != 0);
        let uses_b = self.slots.iter().any(|s| s.kb != 0);
        usize::from(uses_a) + usize::from(uses_b)
    }

    fn reversed(&self) -> Self {
        let mut slots = self.slots.clone();
        slots.reverse();
        UnitFamily {
            t: self.t,
            slots,
            label: format!("reverse{}", self.label),
        }
    }

    /// Members with every entry in `[-bound, bound]`.
    pub fn generate(&self, bound: u64) -> BTreeSet<IntTuple> {
        let b = bound as i64;
        let span = |used: bool| if used { -(b + 2)..=(b + 2) } else { 0..=0 };
        let uses_a = self.slots.iter().any(|s| s.ka != 0);
        let uses_b = self.slots.iter().any(|s| s.kb != 0);
        let mut out = BTreeSet::new();
        for a in span(uses_a) {
            for pb in span(uses_b) {
                let v: Vec<i64> = self.slots.iter().map(|s| s.eval(a, pb)).collect();
                if v.iter().all(|x| x.abs() <= b) {
                    out.insert(IntTuple::from(v.as_slice()));
                }
            }
        }
        out
    }

    /// Whether `xs` is an instance of this family for some integers `a`, `b`.
    pub fn contains(&self, xs: &[BigInt]) -> bool {
        if xs.len() != self.slots.len() {
            return false;
        }
        let solve = |pick: fn(&Slot) -> i64| -> Option<BigInt> {
            // slots mention one parameter each, with coefficient ±1
            self.slots.iter().zip(xs).find_map(|(s, x)| {
                let k = pick(s);
                (k != 0 && s.ka * s.kb == 0).then(|| (x - s.c) * k)
            })
        };
        let a = solve(|s| s.ka).unwrap_or_default();
        let b = solve(|s| s.kb).unwrap_or_default();
        self.slots
            .iter()
            .zip(xs)
            .all(|(s, x)| &(BigInt::from(s.c) + &a * s.ka + &b * s.kb) == x)
    }
}

/// The complete list of families (with reversals) of solutions of
/// `K_n^(t) = 1` for the supported `(t, n)`.
pub fn unit_families(t: Sign, n: usize) -> Result<Vec<UnitFamily>> {
    let params: &[&[&str]];
    let isolated: &[&[i64]];
    match (t, n) {
        (Sign::Plus, 2) => {
            params = &[&["0", "a"]];
            isolated = &[];
        }
        (Sign::Plus, 3) => {
            params = &[&["0", "a", "1"], &["a", "0", "1-a"], &["1", "-1", "a"]];
            isolated = &[&[-3, 1, -2], &[-1, 3, -1], &[-2, 2, -1]];
        }
        (Sign::Plus, 4) => {
            params = &[
                &["0", "a", "b", "0"],
                &["0", "a", "0", "b"],
                &["a", "0", "-a", "b"],
                &["1", "a", "-1", "1"],
                &["-1", "a", "1", "-1"],
                &["a", "-1", "1", "a"],
            ];
            isolated = &[
                &[-4, 1, -2, 2],
                &[-3, 1, -3, 1],
                &[-3, 1, -2, 3],
                &[-3, 2, -1, 3],
                &[-2, 1, -4, 1],
                &[-2, 1, -3, 2],
                &[-2, 2, -2, 1],
                &[-2, 2, -1, 4],
                &[-2, 3, -1, 2],
                &[-1, 2, -3, 1],
                &[-1, 2, -2, 2],
                &[-1, 3, -2, 1],
                &[-1, 3, -1, 3],
                &[-1, 4, -1, 2],
            ];
        }
        (Sign::Minus, 2) => {
            params = &[];
            isolated = &[&[1, 2], &[-2, -1]];
        }
        (Sign::Minus, 3) => {
            params = &[&["0", "a", "-1"], &["a", "0", "-1-a"], &["-1", "-1", "a"]];
            isolated = &[&[1, 2, 2], &[1, 3, 1], &[2, 1, 3]];
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no unit-tuple classification for t = {t}, n = {n}"
            )))
        }
    }
    let base = params
        .iter()
        .map(|p| UnitFamily::new(t, p))
        .chain(isolated.iter().map(|xs| UnitFamily::isolated(t, xs)));
    Ok(base.flat_map(|f| [f.reversed(), f]).collect())
}

/// Union of all families for `(t, n)`, entries clipped to `[-bound, bound]`,
/// deduplicated and sorted.
pub fn family_tuples(t: Sign, n: usize, bound: u64) -> Result<Vec<IntTuple>> {
    let set: BTreeSet<IntTuple> = unit_families(t, n)?
        .iter()
        .flat_map(|f| f.generate(bound))
        .collect();
    Ok(set.into_iter().collect())
}

/// `xs ++ (a, 0)`, whose continuant is `t` times that of `xs`.
pub fn pad_unit_tuple(xs: &[BigInt], a: BigInt) -> IntTuple {
    IntTuple::from(xs).concat(&[a, BigInt::zero()])
}

/// Result of [`seed_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    Solution(Solution),
    /// The inner continuant vanishes and no completion value was supplied.
    Free,
}

/// Lifts a length-`n` unit tuple (`K_n = ±1`) to a solution. When every
/// completion works, `free_choice` is used if given.
pub fn seed_solution(
    inst: &Arc<EquationInstance>,
    xs: &[BigInt],
    free_choice: Option<BigInt>,
) -> Result<Seed> {
    if xs.len() != inst.n() {
        return Err(Error::InvalidInput(format!(
            "unit tuple must have length {}, got {}",
            inst.n(),
            xs.len()
        )));
    }
    if !inst.k(xs).abs().is_one() {
        return Err(Error::InvalidInput(format!(
            "K_{}({}) is not ±1",
            inst.n(),
            IntTuple::from(xs)
        )));
    }
    let last = match lift(inst, xs)? {
        LiftResult::Unique(x) => x,
        LiftResult::Free => match free_choice {
            Some(x) => x,
            None => return Ok(Seed::Free),
        },
        LiftResult::NotLiftable => {
            return Err(Error::Internal(format!(
                "unit tuple {} failed to lift",
                IntTuple::from(xs)
            )))
        }
    };
    let sol = Solution::new(Arc::clone(inst), IntTuple::from(xs).concat(&[last]))
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(Seed::Solution(sol))
}

/// Where a solution of `x1^4 + 1 = (x0 x1 + 1)(x1 x2 + 1)` sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "category", rename_all = "snake_case")]
pub enum N2Category {
    /// In the chain through `(0, a, a^3)`.
    ChainOfZeroA {
        #[serde(serialize_with = "decimal")]
        a: BigInt,
    },
    /// In the chain through `(a^3, a, 0)`.
    ReversedChainOfZeroA {
        #[serde(serialize_with = "decimal")]
        a: BigInt,
    },
    /// `x1 = 0`; every such triple is a solution.
    MiddleZero,
    /// In one of the alternating-sign chains through `(2,-1,3)`, `(3,-1,2)`
    /// or their negatives.
    AlternatingSpecial {
        core: IntTuple,
    },
    NotASolution,
}

fn decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The windows of the alternating chains where `|x1|` is a local minimum.
const ALTERNATING_CORES: [[i64; 3]; 4] = [[2, -1, 3], [3, -1, 2], [-2, 1, -3], [-3, 1, -2]];

const CLASSIFY_MAX_STEPS: usize = 256;

fn x4_plus_1_n2() -> Arc<EquationInstance> {
    let p = IntPolynomial::from_i64s(&[1, 0, 0, 0, 1]).expect("x^4+1");
    Arc::new(EquationInstance::new(p, Sign::Plus, 2).expect("x^4+1 is admissible for even n"))
}

/// Classifies an integer triple against `x1^4 + 1 = (x0 x1 + 1)(x1 x2 + 1)`.
///
/// The category is found constructively: the chain is walked in each
/// direction while its elements stay within the seed window's magnitude,
/// looking for a window `(0, a, _)`, `(_, a, 0)` or an alternating core.
pub fn classify_n2_solution(x0: &BigInt, x1: &BigInt, x2: &BigInt) -> Result<N2Category> {
    let inst = x4_plus_1_n2();
    let xs = IntTuple::from(vec![x0.clone(), x1.clone(), x2.clone()]);
    if !inst.holds_on(&xs) {
        return Ok(N2Category::NotASolution);
    }
    if x1.is_zero() {
        return Ok(N2Category::MiddleZero);
    }
    let seed = Solution::new(Arc::clone(&inst), xs.clone())?;
    let limit = xs.iter().map(|x| x.abs()).max().unwrap_or_default();
    let mut chain = Chain::new(&seed);
    for side in [Side::Left, Side::Right] {
        for _ in 0..CLASSIFY_MAX_STEPS {
            if chain.extend(side, 1)? == 0 || chain.end(side) == EndState::Branch {
                break;
            }
            let newest = match side {
                Side::Left => chain.elements().first(),
                Side::Right => chain.elements().last(),
            };
            if newest.is_some_and(|x| x.abs() > limit) {
                break;
            }
        }
    }
    let windows: Vec<&[BigInt]> = chain.windows().collect();
    if let Some(w) = windows.iter().find(|w| w[0].is_zero() && !w[1].is_zero()) {
        return Ok(N2Category::ChainOfZeroA { a: w[1].clone() });
    }
    if let Some(w) = windows.iter().find(|w| w[2].is_zero() && !w[1].is_zero()) {
        return Ok(N2Category::ReversedChainOfZeroA { a: w[1].clone() });
    }
    for core in ALTERNATING_CORES {
        let core = IntTuple::from(core);
        if windows.iter().any(|w| *w == core.as_slice()) {
            return Ok(N2Category::AlternatingSpecial { core });
        }
    }
    Err(Error::Internal(format!(
        "solution {xs} fits no category within {CLASSIFY_MAX_STEPS} steps"
    )))
}
