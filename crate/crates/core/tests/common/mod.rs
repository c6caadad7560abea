//! Independent fixed-width oracles. Continuants are expanded from the
//! front here (the library recurses from the back), and chain steps are
//! solved directly from the equation.
#![allow(dead_code)]

use continuant::IntTuple;
use num_bigint::BigInt;

/// `K_n^(t)` by front expansion `K(x_1..) = x_1 K(x_2..) + t K(x_3..)`.
/// `None` on overflow.
pub fn k(t: i128, xs: &[i128]) -> Option<i128> {
    let (mut next, mut after) = (1i128, 0i128);
    for &x in xs.iter().rev() {
        let cur = x.checked_mul(next)?.checked_add(t.checked_mul(after)?)?;
        after = next;
        next = cur;
    }
    Some(next)
}

pub fn poly(coeffs: &[i128], x: i128) -> Option<i128> {
    let mut acc = 0i128;
    let mut pow = 1i128;
    for (i, &c) in coeffs.iter().enumerate() {
        if i > 0 {
            pow = pow.checked_mul(x)?;
        }
        acc = acc.checked_add(c.checked_mul(pow)?)?;
    }
    Some(acc)
}

/// Does `(x_0..x_n)` satisfy `P(K_{n-1}(x_1..x_{n-1})) = K_n(x_0..x_{n-1}) K_n(x_1..x_n)`?
pub fn is_solution(coeffs: &[i128], t: i128, xs: &[i128]) -> Option<bool> {
    let n = xs.len() - 1;
    let lhs = poly(coeffs, k(t, &xs[1..n])?)?;
    let rhs = k(t, &xs[..n])?.checked_mul(k(t, &xs[1..])?)?;
    Some(lhs == rhs)
}

/// The `x` making `(w_1..w_n, x)` a solution. The right side is
/// `K_n(w_1..w_n) K_n(w_2..w_n, x)` and the second factor is linear in `x`,
/// so the value is read off that line. `None` when the slope is zero, the
/// value is not integral, or on overflow.
pub fn step_right(coeffs: &[i128], t: i128, w: &[i128]) -> Option<i128> {
    let tail = &w[1..];
    let inner = &tail[1..];
    let outer = k(t, tail)?;
    let pm = poly(coeffs, k(t, inner)?)?;
    if outer == 0 || pm % outer != 0 {
        return None;
    }
    let target = pm / outer;
    let at0 = k(t, &[inner, &[0]].concat())?;
    let slope = k(t, &[inner, &[1]].concat())?.checked_sub(at0)?;
    if slope == 0 || (target - at0) % slope != 0 {
        return None;
    }
    let x = (target - at0) / slope;
    let full = [tail, &[x]].concat();
    assert!(is_solution(coeffs, t, &full).unwrap_or(true));
    Some(x)
}

/// Up to `steps` right continuations of `seed`, stopping at a branch or
/// overflow.
pub fn walk_right(coeffs: &[i128], t: i128, seed: &[i128], steps: usize) -> Vec<i128> {
    let mut xs = seed.to_vec();
    let width = seed.len();
    for _ in 0..steps {
        match step_right(coeffs, t, &xs[xs.len() - width..]) {
            Some(x) => xs.push(x),
            None => break,
        }
    }
    xs[width..].to_vec()
}

pub fn walk_left(coeffs: &[i128], t: i128, seed: &[i128], steps: usize) -> Vec<i128> {
    let rev: Vec<i128> = seed.iter().rev().copied().collect();
    walk_right(coeffs, t, &rev, steps)
}

/// All tuples in `[-bound, bound]^n` with `K_n = target`, by nested loops.
pub fn unit_tuples(t: i128, n: usize, bound: i128, target: i128) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut xs = vec![-bound; n];
    loop {
        if k(t, &xs) == Some(target) {
            out.push(xs.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if xs[i] < bound {
                xs[i] += 1;
                break;
            }
            xs[i] = -bound;
        }
    }
}

pub fn big(xs: &[i128]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn tuple(xs: &[i128]) -> IntTuple {
    IntTuple::new(big(xs))
}

pub fn small(xs: &[BigInt]) -> Vec<i128> {
    xs.iter()
        .map(|x| i128::try_from(x).expect("fits in i128"))
        .collect()
}
