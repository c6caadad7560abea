//! Chains: two-sided integer sequences in which every `n + 1` consecutive
//! elements solve the central equation.
//!
//! A [`Chain`] is anchored at its seed window and grows on demand. Each side
//! ends either `Open` (not yet extended further) or at a `Branch`, where the
//! boundary `K_{n-1}` vanishes and any integer continues the sequence; going
//! past a branch takes an explicit value via [`Chain::continue_branch`].
//!
//! A chain is single-writer: extension takes `&mut self`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::continuants::Sign;
use crate::equation::{next_right, EquationInstance, RawStep, Solution};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;
use crate::tuple::IntTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndState {
    Open,
    Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    instance: Arc<EquationInstance>,
    elements: Vec<BigInt>,
    /// Index of the seed's `x_0` in `elements`.
    base_offset: usize,
    left_end: EndState,
    right_end: EndState,
}

impl Chain {
    pub fn new(seed: &Solution) -> Self {
        Chain {
            instance: Arc::clone(seed.instance()),
            elements: seed.xs().to_vec(),
            base_offset: 0,
            left_end: EndState::Open,
            right_end: EndState::Open,
        }
    }

    pub fn instance(&self) -> &Arc<EquationInstance> {
        &self.instance
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn base_offset(&self) -> usize {
        self.base_offset
    }

    pub fn left_end(&self) -> EndState {
        self.left_end
    }

    pub fn right_end(&self) -> EndState {
        self.right_end
    }

    fn width(&self) -> usize {
        self.instance.n() + 1
    }

    /// Position (relative to the seed's `x_0`) of the first element.
    pub fn first_position(&self) -> isize {
        -(self.base_offset as isize)
    }

    /// Position of the last element.
    pub fn last_position(&self) -> isize {
        (self.elements.len() - self.base_offset) as isize - 1
    }

    /// Number of elements left of the seed window.
    pub fn left_len(&self) -> usize {
        self.base_offset
    }

    /// Number of elements right of the seed window.
    pub fn right_len(&self) -> usize {
        self.elements.len() - self.base_offset - self.width()
    }

    /// Element `x_pos`, with the seed at positions `0..=n`.
    pub fn get(&self, pos: isize) -> Option<&BigInt> {
        let idx = pos + self.base_offset as isize;
        usize::try_from(idx).ok().and_then(|i| self.elements.get(i))
    }

    /// Every `(n+1)`-window, left to right.
    pub fn windows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.elements.windows(self.width())
    }

    /// The window starting at `x_pos`.
    pub fn window(&self, pos: isize) -> Option<Solution> {
        let start = usize::try_from(pos + self.base_offset as isize).ok()?;
        let w = self.elements.get(start..start + self.width())?;
        Some(
            Solution::new(Arc::clone(&self.instance), IntTuple::from(w))
                .expect("chain windows are verified"),
        )
    }

    /// Start position of the first window equal to `xs`.
    pub fn find_window(&self, xs: &[BigInt]) -> Option<isize> {
        if xs.len() != self.width() {
            return None;
        }
        self.windows()
            .position(|w| w == xs)
            .map(|i| i as isize - self.base_offset as isize)
    }

    fn step(&mut self, side: Side) -> Result<bool> {
        let w = self.width();
        let boundary: Vec<BigInt> = match side {
            Side::Right => self.elements[self.elements.len() - w..].to_vec(),
            Side::Left => self.elements[..w].iter().rev().cloned().collect(),
        };
        let next = match next_right(&self.instance, &boundary)? {
            RawStep::Unique(x) | RawStep::Forced(x) => x,
            RawStep::Branch => {
                *self.end_mut(side) = EndState::Branch;
                return Ok(false);
            }
            RawStep::Dead => {
                return Err(Error::Internal(format!(
                    "chain reached a dead end at {}",
                    IntTuple::from(boundary)
                )))
            }
        };
        self.push(side, next);
        Ok(true)
    }

    fn end_mut(&mut self, side: Side) -> &mut EndState {
        match side {
            Side::Left => &mut self.left_end,
            Side::Right => &mut self.right_end,
        }
    }

    fn push(&mut self, side: Side, x: BigInt) {
        match side {
            Side::Right => self.elements.push(x),
            Side::Left => {
                self.elements.insert(0, x);
                self.base_offset += 1;
            }
        }
    }

    /// Extends by up to `steps` elements on `side`, stopping at a branch
    /// point. Returns how many were added.
    pub fn extend(&mut self, side: Side, steps: usize) -> Result<usize> {
        let mut added = 0;
        while added < steps && self.end(side) == EndState::Open {
            if !self.step(side)? {
                break;
            }
            added += 1;
        }
        Ok(added)
    }

    pub fn end(&self, side: Side) -> EndState {
        match side {
            Side::Left => self.left_end,
            Side::Right => self.right_end,
        }
    }

    /// Grows until `left` elements precede and `right` follow the seed
    /// window, or a branch point is hit. Already computed elements are
    /// reused.
    pub fn ensure(&mut self, left: usize, right: usize) -> Result<()> {
        let need_left = left.saturating_sub(self.left_len());
        self.extend(Side::Left, need_left)?;
        let need_right = right.saturating_sub(self.right_len());
        self.extend(Side::Right, need_right)?;
        Ok(())
    }

    /// Continues past a branch point with a chosen element. The new window is
    /// verified.
    pub fn continue_branch(&mut self, side: Side, value: BigInt) -> Result<()> {
        if self.end(side) != EndState::Branch {
            return Err(Error::InvalidInput(format!(
                "{side:?} end is not a branch point"
            )));
        }
        let w = self.width();
        let window: Vec<BigInt> = match side {
            Side::Right => {
                let mut v = self.elements[self.elements.len() - w + 1..].to_vec();
                v.push(value.clone());
                v
            }
            Side::Left => {
                let mut v = vec![value.clone()];
                v.extend_from_slice(&self.elements[..w - 1]);
                v
            }
        };
        if !self.instance.holds_on(&window) {
            return Err(Error::Internal(format!(
                "branch continuation {} fails verification",
                IntTuple::from(window)
            )));
        }
        self.push(side, value);
        *self.end_mut(side) = EndState::Open;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChainFile::from(self)).expect("chain serializes")
    }

    /// Loads a serialized chain, re-verifying every window.
    pub fn from_json(s: &str) -> Result<Chain> {
        let file: ChainFile =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("chain JSON: {e}")))?;
        Chain::try_from(file)
    }
}

/// On-disk shape of a chain. Integers are decimal strings.
#[derive(Debug, Serialize, Deserialize)]
struct ChainFile {
    t: i64,
    poly: String,
    n: usize,
    elements: IntTuple,
    base_offset: usize,
    left_end: EndState,
    right_end: EndState,
}

impl From<&Chain> for ChainFile {
    fn from(c: &Chain) -> Self {
        ChainFile {
            t: c.instance.t().value(),
            poly: c.instance.poly().to_string(),
            n: c.instance.n(),
            elements: IntTuple::from(c.elements.as_slice()),
            base_offset: c.base_offset,
            left_end: c.left_end,
            right_end: c.right_end,
        }
    }
}

impl TryFrom<ChainFile> for Chain {
    type Error = Error;

    fn try_from(f: ChainFile) -> Result<Chain> {
        let poly: IntPolynomial = f.poly.parse()?;
        let instance = Arc::new(EquationInstance::new(poly, Sign::try_from(f.t)?, f.n)?);
        let elements = f.elements.into_vec();
        if elements.len() < f.n + 1 || f.base_offset + f.n + 1 > elements.len() {
            return Err(Error::InvalidInput(
                "chain elements do not cover the seed window".into(),
            ));
        }
        if let Some(bad) = elements.windows(f.n + 1).find(|w| !instance.holds_on(w)) {
            return Err(Error::InvalidInput(format!(
                "chain window {} is not a solution",
                IntTuple::from(bad)
            )));
        }
        Ok(Chain {
            instance,
            elements,
            base_offset: f.base_offset,
            left_end: f.left_end,
            right_end: f.right_end,
        })
    }
}

/// The chain of `seed`, grown `left` and `right` steps or until branch
/// points.
pub fn chain_window(seed: &Solution, left: usize, right: usize) -> Result<Chain> {
    let mut chain = Chain::new(seed);
    chain.ensure(left, right)?;
    Ok(chain)
}

/// Whether `b` appears in the chain of `a` (or `a` in the chain of `b`)
/// within `max_shift` steps each way. `false` only means "not found within
/// the bound".
pub fn chains_equivalent(a: &Solution, b: &Solution, max_shift: usize) -> Result<bool> {
    if a.instance() != b.instance() {
        return Err(Error::InvalidInput(
            "solutions belong to different equations".into(),
        ));
    }
    // Breadth-first: alternate one step per side until the bound.
    let mut ca = Chain::new(a);
    let mut cb = Chain::new(b);
    for shift in 0..=max_shift {
        ca.ensure(shift, shift)?;
        cb.ensure(shift, shift)?;
        if ca.find_window(b.xs()).is_some() || cb.find_window(a.xs()).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Bounded nonstandard-chain certificate: no `n` consecutive elements within
/// `radius` steps of the seed (stopping at branch points) have continuant
/// `±1`.
pub fn is_nonstandard_window(seed: &Solution, radius: usize) -> Result<bool> {
    let chain = chain_window(seed, radius, radius)?;
    let n = chain.instance.n();
    Ok(chain
        .elements
        .windows(n)
        .all(|w| !chain.instance.k(w).abs().is_one()))
}
