//! Indefinite binary quadratic forms `ax² + bxy + cy²` of positive non-square
//! discriminant `D = b² − 4ac`.
//!
//! Class numbers come from reduction cycles: every proper equivalence class
//! of primitive forms contains exactly one cycle of reduced forms under
//! [`rho_step`]. The wide (ideal) class number is the narrow one, halved when
//! the fundamental unit has norm `+1`. All comparisons against `√D` are done
//! by squaring.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{divisors, is_square, isqrt, prime_factorization};
use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Fundamental solution of `x² − D·y² = 4·norm_sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub norm_sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    /// Changes of variable of determinant `+1`.
    Proper,
    /// Determinant `±1`; matches isometry of the associated lattices.
    Gl2,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = BinaryQuadraticForm { a, b, c };
        let d = f.disc_i128();
        let reason = if a == 0 {
            Some("a must be nonzero")
        } else if d <= 0 {
            Some("discriminant must be positive")
        } else if d > i64::MAX as i128 {
            Some("discriminant overflows")
        } else if is_square(d as u64) {
            Some("discriminant is a perfect square")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidBinaryForm { a, b, c, reason }),
            None => Ok(f),
        }
    }

    fn disc_i128(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    pub fn disc(&self) -> i64 {
        self.disc_i128() as i64
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// `f(αx + βy, γx + δy)`.
    pub fn transform(&self, alpha: i64, beta: i64, gamma: i64, delta: i64) -> (i128, i128, i128) {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (al, be, ga, de) = (alpha as i128, beta as i128, gamma as i128, delta as i128);
        let na = a * al * al + b * al * ga + c * ga * ga;
        let nb = 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de;
        let nc = a * be * be + b * be * de + c * de * de;
        (na, nb, nc)
    }
}

/// `|√D − 2|a|| < b < √D`, evaluated with integer comparisons.
pub fn is_reduced(f: &BinaryQuadraticForm) -> Result<bool> {
    let f = BinaryQuadraticForm::new(f.a, f.b, f.c)?;
    let d = f.disc_i128();
    let b = f.b as i128;
    let two_a = 2 * (f.a as i128).abs();
    if b <= 0 || b * b >= d {
        return Ok(false);
    }
    // √D < 2|a| + b  and  2|a| − b < √D
    let upper = d < (two_a + b) * (two_a + b);
    let lower = two_a - b <= 0 || (two_a - b) * (two_a - b) < d;
    Ok(upper && lower)
}

/// The neighbor `(c, b', c')` with `b' ≡ −b mod 2c`; for `|c| < √D` the
/// largest such `b' < √D`, otherwise the one in `(−|c|, |c|]`.
pub fn rho_step(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let f = BinaryQuadraticForm::new(f.a, f.b, f.c)?;
    let d = f.disc_i128();
    if f.c == 0 {
        return Err(Error::InvalidBinaryForm {
            a: f.a,
            b: f.b,
            c: f.c,
            reason: "c = 0",
        });
    }
    let c = f.c as i128;
    let two_c = 2 * c.abs();
    let minus_b = -(f.b as i128);
    let b_new = if c * c < d {
        let root = isqrt(d as u64) as i128;
        // largest value ≤ root congruent to −b mod 2|c|
        root - (root - minus_b).rem_euclid(two_c)
    } else {
        // value in (−|c|, |c|]
        let r = (minus_b + c.abs() - 1).rem_euclid(two_c);
        r - c.abs() + 1
    };
    let c_new = (b_new * b_new - d) / (4 * c);
    let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("rho step"));
    BinaryQuadraticForm::new(f.c, narrow(b_new)?, narrow(c_new)?)
}

/// Applies [`rho_step`] until the form is reduced; returns the reduced form
/// and the number of steps taken.
pub fn reduce(f: &BinaryQuadraticForm) -> Result<(BinaryQuadraticForm, usize)> {
    let limit = 64 * (64 + bit_length(f.a) + bit_length(f.c) + bit_length(f.b));
    let mut g = *f;
    for steps in 0..=limit {
        if is_reduced(&g)? {
            return Ok((g, steps));
        }
        g = rho_step(&g)?;
    }
    Err(Error::Overflow("reduction did not terminate"))
}

fn bit_length(v: i64) -> usize {
    64 - v.unsigned_abs().leading_zeros() as usize
}

/// The reduction cycle through `f`, rotated to start at its
/// lexicographically least member.
pub fn cycle(f: &BinaryQuadraticForm) -> Result<Vec<BinaryQuadraticForm>> {
    let (start, _) = reduce(f)?;
    let mut out = vec![start];
    let mut g = rho_step(&start)?;
    while g != start {
        out.push(g);
        g = rho_step(&g)?;
    }
    let min_pos = out
        .iter()
        .enumerate()
        .min_by_key(|(_, g)| **g)
        .map(|(i, _)| i)
        .unwrap_or(0);
    out.rotate_left(min_pos);
    Ok(out)
}

fn check_discriminant(d: i64) -> Result<()> {
    if d <= 0 {
        return Err(Error::InvalidDiscriminant(d, "must be positive"));
    }
    if is_square(d as u64) {
        return Err(Error::InvalidDiscriminant(
            d,
            "must not be a perfect square",
        ));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d, "must be 0 or 1 mod 4"));
    }
    Ok(())
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if check_discriminant(d).is_err() {
        return false;
    }
    let squarefree = |m: u64| {
        prime_factorization(m)
            .map(|f| f.iter().all(|&(_, e)| e == 1))
            .unwrap_or(false)
    };
    match d.rem_euclid(4) {
        1 => squarefree(d as u64),
        _ => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m as u64)
        }
    }
}

/// Every reduced primitive form of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<BinaryQuadraticForm>> {
    check_discriminant(d)?;
    let root = isqrt(d as u64) as i64;
    let mut out = Vec::new();
    for b in 1..=root {
        if (b - d).rem_euclid(2) != 0 {
            continue;
        }
        let ac = (d - b * b) / 4; // = −a·c > 0
        for a_abs in divisors(ac as u64) {
            let a_abs = a_abs as i64;
            for a in [a_abs, -a_abs] {
                let c = -ac / a;
                let f = BinaryQuadraticForm { a, b, c };
                if f.is_primitive() && is_reduced(&f)? {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Reduced forms partitioned into cycles, each cycle starting at its least
/// member and the cycles ordered by that member.
pub fn cycles(d: i64) -> Result<Vec<Vec<BinaryQuadraticForm>>> {
    let mut remaining: BTreeSet<BinaryQuadraticForm> = reduced_forms(d)?.into_iter().collect();
    let mut out = Vec::new();
    while let Some(&f) = remaining.iter().next() {
        let cyc = cycle(&f)?;
        for g in &cyc {
            remaining.remove(g);
        }
        out.push(cyc);
    }
    Ok(out)
}

/// Number of proper equivalence classes of primitive forms of discriminant `d`.
pub fn narrow_class_number(d: i64) -> Result<u64> {
    Ok(cycles(d)?.len() as u64)
}

/// Minimal `y > 0` with `x² − d·y² = ±4`, from the continued fraction of
/// `ω = (δ + √d)/2`, `δ = d mod 2`: the fundamental unit `p − qω` of the
/// order of discriminant `d` appears among the convergents `p/q`.
pub fn pell_fundamental(d: i64) -> Result<PellSolution> {
    check_discriminant(d)?;
    let delta = d.rem_euclid(2);
    let root = BigInt::from(isqrt(d as u64));
    let dd = BigInt::from(d);
    let big_delta = BigInt::from(delta);
    let norm_c = BigInt::from((d - delta) / 4);

    let (mut p_k, mut q_k) = (big_delta.clone(), BigInt::from(2));
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut g_prev, mut g) = (BigInt::one(), BigInt::zero());
    let limit = 64 + 8 * d as usize;
    for _ in 0..limit {
        let a = (&p_k + &root).div_floor(&q_k);
        let h_next = &a * &h + &h_prev;
        let g_next = &a * &g + &g_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        g_prev = std::mem::replace(&mut g, g_next);

        // N(h − gω) = h² − δhg − ((d − δ)/4)g²
        let norm = &h * &h - &big_delta * &h * &g - &norm_c * &g * &g;
        if norm.abs().is_one() {
            let x = (BigInt::from(2) * &h - &big_delta * &g).abs();
            return Ok(PellSolution {
                x,
                y: g,
                norm_sign: if norm.is_positive() { 1 } else { -1 },
            });
        }
        let p_next = &a * &q_k - &p_k;
        let q_next = (&dd - &p_next * &p_next) / &q_k;
        p_k = p_next;
        q_k = q_next;
    }
    Err(Error::Overflow("continued fraction did not reach a unit"))
}

/// Class number of the real quadratic field of fundamental discriminant `d`.
pub fn wide_class_number(d: i64) -> Result<u64> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::InvalidDiscriminant(
            d,
            "not a fundamental discriminant",
        ));
    }
    let narrow = narrow_class_number(d)?;
    if pell_fundamental(d)?.norm_sign == -1 {
        return Ok(narrow);
    }
    if narrow % 2 != 0 {
        return Err(Error::InvalidDiscriminant(
            d,
            "odd narrow class number with norm +1 unit",
        ));
    }
    Ok(narrow / 2)
}

/// Gram `[[2a, b], [b, 2c]]`, an even lattice of determinant `−D`.
pub fn form_to_lattice(f: &BinaryQuadraticForm) -> Result<IntegerLattice> {
    IntegerLattice::from_i64(&[[2 * f.a, f.b], [f.b, 2 * f.c]])
}

/// Searches all changes of variable with entries in `[−bound, bound]` for one
/// carrying `f` to `g`. Independent of the reduction machinery; used to
/// cross-check class numbers.
pub fn brute_equiv_oracle(
    f: &BinaryQuadraticForm,
    g: &BinaryQuadraticForm,
    bound: i64,
    mode: Equivalence,
) -> bool {
    if f.disc_i128() != g.disc_i128() {
        return false;
    }
    let range = -bound..=bound;
    for alpha in range.clone() {
        for gamma in range.clone() {
            if f.eval(alpha, gamma) != g.a as i128 {
                continue;
            }
            for beta in range.clone() {
                for delta in range.clone() {
                    let det = alpha as i128 * delta as i128 - beta as i128 * gamma as i128;
                    let det_ok = match mode {
                        Equivalence::Proper => det == 1,
                        Equivalence::Gl2 => det == 1 || det == -1,
                    };
                    if det_ok
                        && f.transform(alpha, beta, gamma, delta)
                            == (g.a as i128, g.b as i128, g.c as i128)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}
