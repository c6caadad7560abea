//! Factorizations `P(m) = d1 * d2` and solutions, for `t = 1`.
//!
//! Write `d1 / m = [a_0; a_1, .., a_{n-1}]` with the length `n` of the
//! parity for which `P` is admissible. Then `m = K_{n-1}(a_1..a_{n-1})`,
//! `d1 = K_n(a_0..a_{n-1})`, and lifting the expansion gives a unique `a_n`
//! with `K_n(a_1..a_n) = d2`. Conversely any solution with
//! `a_1, .., a_{n-1} >= 1` reads back a factorization. The two directions
//! are mutually inverse.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{chain_window, Chain};
use crate::continuants::Sign;
use crate::equation::{lift, EquationInstance, LiftResult, Solution};
use crate::error::{Error, Result};
use crate::maps::{complete, map_f, map_g, map_h, prefix_of, Completion};
use crate::polynomial::{check_condition, IntPolynomial};
use crate::seeds::{family_tuples, seed_solution, Seed};
use crate::tuple::IntTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Smallest admissible `n >= 2` of this parity.
    fn representative(self) -> usize {
        match self {
            Parity::Even => 2,
            Parity::Odd => 3,
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Parity> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Parse(format!(
                "parity must be even or odd, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Partial quotients `[a_0; a_1, .., a_{n-1}]` with `a_i >= 1` for `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    quotients: Vec<BigInt>,
}

impl CfExpansion {
    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// `K_n(a_0..a_{n-1})`.
    pub fn numerator(&self) -> BigInt {
        Sign::Plus.continuant(&self.quotients)
    }

    /// `K_{n-1}(a_1..a_{n-1})`.
    pub fn denominator(&self) -> BigInt {
        Sign::Plus.continuant(&self.quotients[1..])
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.quotients[0])?;
        for (i, a) in self.quotients[1..].iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { "; " } else { ", " })?;
        }
        write!(f, "]")
    }
}

/// Continued fraction of `p / q` whose length has the requested parity.
///
/// Euclid's expansion is adjusted at its tail when the parity is wrong: a
/// last quotient `a_k >= 2` becomes `a_k - 1, 1`; a last quotient `1` (with
/// `k >= 1`) is merged into `a_{k-1} + 1`; a lone `[p]` becomes `[p - 1; 1]`.
pub fn cf_expand(p: &BigInt, q: &BigInt, parity: Parity) -> Result<CfExpansion> {
    if q < &BigInt::one() {
        return Err(Error::InvalidInput(format!(
            "denominator must be >= 1, got {q}"
        )));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::InvalidInput(format!("{p} and {q} are not coprime")));
    }
    let mut quotients = Vec::new();
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (d, r) = a.div_mod_floor(&b);
        quotients.push(d);
        a = std::mem::replace(&mut b, r);
    }
    if Parity::of(quotients.len()) != parity {
        let k = quotients.len() - 1;
        if k == 0 {
            quotients[0] -= 1;
            quotients.push(BigInt::one());
        } else if quotients[k] >= BigInt::from(2) {
            quotients[k] -= 1;
            quotients.push(BigInt::one());
        } else {
            quotients.pop();
            quotients[k - 1] += 1;
        }
    }
    Ok(CfExpansion { quotients })
}

/// `m >= 1` with `d1 * d2 = P(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FactorizationTriple {
    #[serde(serialize_with = "decimal")]
    pub m: BigInt,
    #[serde(serialize_with = "decimal")]
    pub d1: BigInt,
    #[serde(serialize_with = "decimal")]
    pub d2: BigInt,
}

fn decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl FactorizationTriple {
    pub fn new(poly: &IntPolynomial, m: BigInt, d1: BigInt, d2: BigInt) -> Result<Self> {
        if m < BigInt::one() {
            return Err(Error::Unsupported(format!("m must be positive, got {m}")));
        }
        if &d1 * &d2 != poly.eval(&m) {
            return Err(Error::InvalidInput(format!("{d1} * {d2} != P({m})")));
        }
        Ok(FactorizationTriple { m, d1, d2 })
    }

    /// The factorization with the given first factor.
    pub fn with_d1(poly: &IntPolynomial, m: BigInt, d1: BigInt) -> Result<Self> {
        let value = poly.eval(&m);
        if d1.is_zero() || !(&value % &d1).is_zero() {
            return Err(Error::InvalidInput(format!(
                "{d1} does not divide P({m}) = {value}"
            )));
        }
        let d2 = value / &d1;
        FactorizationTriple::new(poly, m, d1, d2)
    }
}

impl fmt::Display for FactorizationTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}) = {} * {}", self.m, self.d1, self.d2)
    }
}

fn admissible_plus(poly: &IntPolynomial, parity: Parity) -> Result<()> {
    if check_condition(poly, Sign::Plus, parity.representative()).holds {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!(
            "P = [{poly}] is not admissible for t = 1 and {parity} n"
        )))
    }
}

/// The solution `(a_0..a_n)` attached to a factorization.
pub fn factorization_to_solution(
    poly: &IntPolynomial,
    parity: Parity,
    f: &FactorizationTriple,
) -> Result<Solution> {
    if !f.d1.is_positive() || !f.d2.is_positive() {
        return Err(Error::Unsupported(
            "only positive factors are bridged".into(),
        ));
    }
    admissible_plus(poly, parity)?;
    let cf = cf_expand(&f.d1, &f.m, parity)?;
    let n = cf.len();
    if n < 2 {
        return Err(Error::Unsupported(format!(
            "{} / {} has no expansion of {parity} length >= 2",
            f.d1, f.m
        )));
    }
    let inst = Arc::new(EquationInstance::new(poly.clone(), Sign::Plus, n)?);
    let last = match lift(&inst, cf.quotients())? {
        LiftResult::Unique(x) => x,
        other => {
            return Err(Error::Internal(format!(
                "expansion {cf} of {f} lifted to {other:?}"
            )))
        }
    };
    let sol = Solution::new(inst, IntTuple::from(cf.quotients()).concat(&[last]))
        .map_err(|e| Error::Internal(e.to_string()))?;
    if sol.instance().k(&sol.xs()[1..]) != f.d2 {
        return Err(Error::Internal(format!(
            "{sol} does not reproduce d2 = {}",
            f.d2
        )));
    }
    Ok(sol)
}

/// Reads `(m, d1, d2)` off a solution with positive interior entries.
pub fn solution_to_factorization(sol: &Solution) -> Result<FactorizationTriple> {
    let inst = sol.instance();
    if inst.t() != Sign::Plus {
        return Err(Error::Unsupported("the bridge is defined for t = 1".into()));
    }
    let n = inst.n();
    let xs = sol.xs();
    if xs[1..n].iter().any(|a| !a.is_positive()) {
        return Err(Error::InvalidInput(format!(
            "interior entries of {xs} must be positive"
        )));
    }
    let m = inst.k(&xs[1..n]);
    let d1 = inst.k(&xs[..n]);
    let d2 = inst.k(&xs[1..]);
    FactorizationTriple::new(inst.poly(), m, d1, d2)
}

/// All `(d1, d2)` with `1 <= d1 <= d2` and `d1 * d2 = P(m)`, by trial
/// division.
pub fn enumerate_factorizations(poly: &IntPolynomial, m: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let value = poly.eval(m);
    if !value.is_positive() {
        return Err(Error::Unsupported(format!(
            "P({m}) = {value} is not positive"
        )));
    }
    let root = value.sqrt();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while d <= root {
        let (q, r) = value.div_rem(&d);
        if r.is_zero() {
            out.push((d.clone(), q));
        }
        d += 1;
    }
    Ok(out)
}

/// Bounds for [`provenance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProvenanceSearch {
    /// Entry bound for unit seed tuples.
    pub unit_bound: u64,
    /// `|a|` bound for `f_a`.
    pub param_bound: i64,
    /// Chain steps explored around each candidate.
    pub shift: usize,
}

impl Default for ProvenanceSearch {
    fn default() -> Self {
        ProvenanceSearch {
            unit_bound: 10,
            param_bound: 10,
            shift: 3,
        }
    }
}

/// Windows of the unit-seeded chains of the instance, within `shift` steps.
fn unit_chain_windows(
    inst: &Arc<EquationInstance>,
    search: &ProvenanceSearch,
) -> Result<Vec<(IntTuple, Solution)>> {
    let Ok(units) = family_tuples(inst.t(), inst.n(), search.unit_bound) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for u in units {
        let Seed::Solution(seed) = seed_solution(inst, &u, None)? else {
            continue;
        };
        let chain = chain_window(&seed, search.shift, search.shift)?;
        for w in chain.windows() {
            out.push((
                u.clone(),
                Solution::new(Arc::clone(inst), IntTuple::from(w))?,
            ));
        }
    }
    Ok(out)
}

/// Looks for a way to reach `sol`'s chain from unit seeds: first through
/// `f_a` or `g.h` applied to a unit-seeded solution two sizes down, then
/// through a unit seed of the same size. Returns a description such as
/// `"f_1(1,1,0)"`, `"g.h(2,8,30)"` or `"L(0,2)"`, or `None` when nothing
/// was found within the bounds.
pub fn provenance(sol: &Solution, search: &ProvenanceSearch) -> Result<Option<String>> {
    let inst = sol.instance();
    let around = chain_window(sol, search.shift, search.shift)?;
    let targets: HashSet<&[BigInt]> = around.windows().collect();

    if inst.n() >= 4 {
        if let Ok(lower) = inst.with_n(inst.n() - 2) {
            let lower = Arc::new(lower);
            for (_, source) in unit_chain_windows(&lower, search)? {
                let prefix = prefix_of(&source);
                let hit = |p| -> Result<bool> {
                    Ok(match complete(&p)? {
                        Completion::Solution(s) => targets.contains(s.xs().as_slice()),
                        Completion::Free(_) => false,
                    })
                };
                if !prefix.inner().is_zero() {
                    for a in -search.param_bound..=search.param_bound {
                        if hit(map_f(&BigInt::from(a), &prefix)?)? {
                            return Ok(Some(format!("f_{a}{source}")));
                        }
                    }
                }
                if let Ok(gh) = map_h(&prefix).and_then(|h| map_g(&h)) {
                    if hit(gh)? {
                        return Ok(Some(format!("g.h{source}")));
                    }
                }
            }
        }
    }
    for (unit, w) in unit_chain_windows(inst, search)? {
        if targets.contains(w.xs().as_slice()) {
            return Ok(Some(format!("L{unit}")));
        }
    }
    Ok(None)
}

/// One factorization with its solution and surrounding chain.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub factorization: FactorizationTriple,
    pub solution: Solution,
    pub chain: Chain,
    pub provenance: Option<String>,
}

impl TableRow {
    /// `"-1,(0,1,1,1,13),480,23422307"`.
    pub fn chain_snippet(&self) -> String {
        let width = self.solution.xs().len();
        let els = self.chain.elements();
        let start = self.chain.base_offset();
        let left: Vec<String> = els[..start].iter().map(ToString::to_string).collect();
        let right: Vec<String> = els[start + width..]
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut parts = left;
        parts.push(self.solution.xs().to_string());
        parts.extend(right);
        parts.join(",")
    }
}

/// Every factorization of `P(m)`, `1 <= m <= m_max`, bridged to a solution,
/// with a chain window of `radius` steps each way and an optional bounded
/// provenance search. Rows are ordered by `(m, d1)`; values of `m` with
/// `P(m) <= 0` contribute no rows.
pub fn factorization_table(
    poly: &IntPolynomial,
    parity: Parity,
    m_max: u64,
    radius: usize,
    search: Option<ProvenanceSearch>,
) -> Result<Vec<TableRow>> {
    admissible_plus(poly, parity)?;
    let rows: Vec<Result<Vec<TableRow>>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let m = BigInt::from(m);
            let mut rows = Vec::new();
            if !poly.eval(&m).is_positive() {
                return Ok(rows);
            }
            for (d1, d2) in enumerate_factorizations(poly, &m)? {
                let f = FactorizationTriple::new(poly, m.clone(), d1, d2)?;
                let solution = factorization_to_solution(poly, parity, &f)?;
                let chain = chain_window(&solution, radius, radius)?;
                let provenance = match &search {
                    Some(s) => provenance(&solution, s)?,
                    None => None,
                };
                rows.push(TableRow {
                    factorization: f,
                    solution,
                    chain,
                    provenance,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}
