//! Fourier–Mukai partners of a K3 surface with `NS(X) = Z·H`, `(H²) = 2n`.
//!
//! Partners are the moduli spaces `M_H((r, H, s))` with `rs = n`,
//! `gcd(r, s) = 1`, `r ≥ s`. The functions below construct those labels and
//! the arithmetic around them inside the extended Néron–Severi lattice
//! `U ⊕ ⟨2n⟩` with basis `(e, H, f)`:
//!
//! * a vector `u` with `⟨u, u⟩ = 0`, `⟨u, v⟩ = 1` completing `v = (r, 1, s)`
//!   to a hyperbolic plane,
//! * the generator of the orthogonal complement of that plane,
//! * the sign relating the residues `rm − ls mod 2n` of two such planes, and
//! * an exhaustive search confirming that equal (resp. opposite) residues
//!   force `r' = r` (resp. `r' = s`).
//!
//! For Picard number one the transcendental lattice has rank 21, an odd
//! rank, so the only Hodge isometries are `±id`.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{distinct_prime_count, divisors};
use crate::error::{Error, Result};

/// Transcendental rank of a K3 surface of Picard number 1.
pub const TRANSCENDENTAL_RANK_PICARD_ONE: u64 = 21;

/// `a·e + c·H + b·f` in `U ⊕ ⟨2n⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendedNSVector {
    pub a: i64,
    pub c: i64,
    pub b: i64,
    pub n: i64,
}

impl ExtendedNSVector {
    pub fn new(a: i64, c: i64, b: i64, n: i64) -> Self {
        ExtendedNSVector { a, c, b, n }
    }

    /// `2n·c·c' − a·b' − b·a'`.
    pub fn pairing(&self, other: &ExtendedNSVector) -> i128 {
        2 * self.n as i128 * self.c as i128 * other.c as i128
            - self.a as i128 * other.b as i128
            - self.b as i128 * other.a as i128
    }

    pub fn square(&self) -> i128 {
        self.pairing(self)
    }

    pub fn coords(&self) -> [i64; 3] {
        [self.a, self.c, self.b]
    }
}

/// Label `(r, s)` of the partner `M_H((r, H, s))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PartnerDescriptor {
    pub r: u64,
    pub s: u64,
    pub n: u64,
}

impl PartnerDescriptor {
    pub fn new(r: u64, s: u64, n: u64) -> Result<Self> {
        if r.checked_mul(s) != Some(n) || r.gcd(&s) != 1 || r < s || s == 0 {
            return Err(Error::InvalidParameter(format!(
                "({r}, {s}) is not a coprime factorization r·s = {n} with r ≥ s"
            )));
        }
        Ok(PartnerDescriptor { r, s, n })
    }

    pub fn mukai_vector(&self) -> ExtendedNSVector {
        ExtendedNSVector::new(self.r as i64, 1, self.s as i64, self.n as i64)
    }
}

/// All coprime factorizations `rs = n` with `r ≥ s`, by descending `r`.
pub fn enumerate_partners(n: u64) -> Result<Vec<PartnerDescriptor>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    Ok(divisors(n)
        .into_iter()
        .rev()
        .filter_map(|r| PartnerDescriptor::new(r, n / r, n).ok())
        .collect())
}

/// `2^(τ(n) − 1)`, taken as 1 for `n = 1`.
pub fn expected_partner_count(n: u64) -> Result<u64> {
    let tau = distinct_prime_count(n)?;
    Ok(1u64 << tau.max(1).saturating_sub(1))
}

/// `(rk, c_1, c_1²/2 − c_2 + rk)` for a sheaf with `c_1 = c·H`, `(H²) = 2n`.
pub fn mukai_vector(rk: i64, c: i64, c2: i64, n: i64) -> Result<ExtendedNSVector> {
    if rk <= 0 {
        return Err(Error::InvalidParameter(format!(
            "rank must be positive, got {rk}"
        )));
    }
    if n <= 0 {
        return Err(Error::InvalidParameter(format!(
            "n must be positive, got {n}"
        )));
    }
    let third = c
        .checked_mul(c)
        .and_then(|v| v.checked_mul(n))
        .and_then(|v| v.checked_sub(c2))
        .and_then(|v| v.checked_add(rk))
        .ok_or(Error::Overflow("mukai vector"))?;
    Ok(ExtendedNSVector::new(rk, c, third, n))
}

/// `(r, H, s)` with `r > 0`, `gcd(r, s) = 1` and `rs = n`.
pub fn is_special(v: &ExtendedNSVector) -> bool {
    v.c == 1 && v.a > 0 && v.a.gcd(&v.b) == 1 && (v.a as i128) * (v.b as i128) == v.n as i128
}

/// A tuple `(r, s, l, k, m)` with `rs = n`, `lm = nk²`, `2nk − ls − mr = 1`,
/// i.e. `u = (l, k, m)` and `v = (r, 1, s)` span a hyperbolic plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HyperbolicPair {
    pub r: i64,
    pub s: i64,
    pub l: i64,
    pub k: i64,
    pub m: i64,
}

impl HyperbolicPair {
    pub fn new(r: i64, s: i64, l: i64, k: i64, m: i64) -> Self {
        HyperbolicPair { r, s, l, k, m }
    }

    pub fn check(&self, n: i64) -> Result<()> {
        let (r, s, l, k, m, n) = (
            self.r as i128,
            self.s as i128,
            self.l as i128,
            self.k as i128,
            self.m as i128,
            n as i128,
        );
        if r * s != n {
            return Err(Error::MalformedTuple(format!("{self:?}: rs != {n}")));
        }
        if l * m != n * k * k {
            return Err(Error::MalformedTuple(format!("{self:?}: lm != nk^2")));
        }
        if 2 * n * k - l * s - m * r != 1 {
            return Err(Error::MalformedTuple(format!(
                "{self:?}: 2nk - ls - mr != 1"
            )));
        }
        Ok(())
    }

    pub fn v(&self, n: i64) -> ExtendedNSVector {
        ExtendedNSVector::new(self.r, 1, self.s, n)
    }

    pub fn u(&self, n: i64) -> ExtendedNSVector {
        ExtendedNSVector::new(self.l, self.k, self.m, n)
    }

    /// `rm − ls`, the H-coefficient of the orthogonal generator.
    pub fn residue(&self) -> i128 {
        self.r as i128 * self.m as i128 - self.l as i128 * self.s as i128
    }
}

/// `k = 0, −1, 1, −2, 2, ...` up to `|k| ≤ bound`.
fn k_scan(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [-k, k]))
}

/// All `(l, m)` with `lm = nk²` and `2nk − ls − mr = 1` for fixed `k`,
/// sorted by `(m, l)`.
fn solutions_for_k(n: i64, r: i64, s: i64, k: i64) -> Vec<(i64, i64)> {
    let target = 2 * n as i128 * k as i128 - 1;
    let mut out = Vec::new();
    if k == 0 {
        // lm = 0: either l = 0 and −mr = 1, or m = 0 and −ls = 1.
        if r == 1 {
            out.push((0, -1));
        }
        if s == 1 {
            out.push((-1, 0));
        }
    } else {
        let prod = n as u64 * (k.unsigned_abs() * k.unsigned_abs());
        for d in divisors(prod) {
            let (d, e) = (d as i64, (prod / d) as i64);
            for (l, m) in [(d, e), (-d, -e)] {
                if l as i128 * s as i128 + m as i128 * r as i128 == target {
                    out.push((l, m));
                }
            }
        }
    }
    out.sort_by_key(|&(l, m)| (m, l));
    out.dedup();
    out
}

/// First hyperbolic partner `u = (l, k, m)` of `v = (r, 1, s)` in the scan
/// order `k = 0, −1, 1, −2, 2, ...`, smallest `m` first within each `k`.
pub fn solve_hyperbolic_partner(n: i64, r: i64, s: i64, k_bound: i64) -> Result<HyperbolicPair> {
    if n < 1 || r < 1 || s < 1 || r.checked_mul(s) != Some(n) || r.gcd(&s) != 1 {
        return Err(Error::InvalidParameter(format!(
            "({r}, {s}) is not a coprime factorization of {n}"
        )));
    }
    if k_bound < 0 {
        return Err(Error::InvalidParameter(
            "k_bound must be nonnegative".into(),
        ));
    }
    for k in k_scan(k_bound) {
        if let Some(&(l, m)) = solutions_for_k(n, r, s, k).first() {
            return Ok(HyperbolicPair::new(r, s, l, k, m));
        }
    }
    Err(Error::NotFound { bound: k_bound })
}

/// Generator `2n(rk − l)·e + (rm − ls)·H + 2n(m − sk)·f` of the orthogonal
/// complement of `⟨u, v⟩`; it has square `2n`.
pub fn orthogonal_generator(n: i64, pair: &HyperbolicPair) -> Result<ExtendedNSVector> {
    pair.check(n)?;
    let two_n = 2 * n as i128;
    let a = two_n * (pair.r as i128 * pair.k as i128 - pair.l as i128);
    let b = two_n * (pair.m as i128 - pair.s as i128 * pair.k as i128);
    let c = pair.residue();
    let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("orthogonal generator"));
    Ok(ExtendedNSVector::new(narrow(a)?, narrow(c)?, narrow(b)?, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CongruenceSign {
    Plus,
    Minus,
    Violation,
}

/// Compares `r'm' − l's'` with `±(rm − ls)` modulo `2n`. When both signs
/// match, `Plus` is returned.
pub fn congruence_sign(
    n: i64,
    first: &HyperbolicPair,
    second: &HyperbolicPair,
) -> Result<CongruenceSign> {
    first.check(n)?;
    second.check(n)?;
    let modulus = 2 * n as i128;
    let x = first.residue();
    let y = second.residue();
    Ok(if (y - x).rem_euclid(modulus) == 0 {
        CongruenceSign::Plus
    } else if (y + x).rem_euclid(modulus) == 0 {
        CongruenceSign::Minus
    } else {
        CongruenceSign::Violation
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchDomain {
    /// `k, l, m ≥ 0`.
    Natural,
    /// `|k| ≤ bound`, any signs for `l, m`.
    Signed,
}

/// Every `(r, s, l, k, m)` solving the hyperbolic equations with `|k| ≤ bound`
/// and `|l|, |m| ≤ n·bound²`. Only `rs = n` is imposed on `(r, s)`.
pub fn hyperbolic_solutions(
    n: i64,
    bound: i64,
    domain: SearchDomain,
) -> Result<Vec<HyperbolicPair>> {
    if n < 1 || bound < 1 {
        return Err(Error::InvalidParameter(
            "n and bound must be positive".into(),
        ));
    }
    let box_limit = n as i128 * bound as i128 * bound as i128;
    let mut out = Vec::new();
    for r in divisors(n as u64) {
        let (r, s) = (r as i64, n / r as i64);
        let ks: Vec<i64> = match domain {
            SearchDomain::Natural => (0..=bound).collect(),
            SearchDomain::Signed => (-bound..=bound).collect(),
        };
        for k in ks {
            for (l, m) in solutions_for_k(n, r, s, k) {
                if (l as i128).abs() > box_limit || (m as i128).abs() > box_limit {
                    continue;
                }
                if domain == SearchDomain::Natural && (l < 0 || m < 0) {
                    continue;
                }
                out.push(HyperbolicPair::new(r, s, l, k, m));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Which residue relation the pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidueCase {
    /// `r'm' − l's' ≡ rm − ls`, which should force `r' = r`.
    Same,
    /// `r'm' − l's' ≡ −(rm − ls)`, which should force `r' = s`.
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RigidityViolation {
    pub case: ResidueCase,
    pub first: HyperbolicPair,
    pub second: HyperbolicPair,
}

/// Exhaustive check over ordered pairs of solutions: equal residues mod `2n`
/// must give `r' = r`, opposite residues must give `r' = s`.
pub fn residue_rigidity_violations(
    n: i64,
    bound: i64,
    domain: SearchDomain,
) -> Result<Vec<RigidityViolation>> {
    let sols = hyperbolic_solutions(n, bound, domain)?;
    let modulus = 2 * n as i128;
    let mut out = Vec::new();
    for first in &sols {
        let x = first.residue();
        for second in &sols {
            let y = second.residue();
            if (y - x).rem_euclid(modulus) == 0 && second.r != first.r {
                out.push(RigidityViolation {
                    case: ResidueCase::Same,
                    first: *first,
                    second: *second,
                });
            }
            if (y + x).rem_euclid(modulus) == 0 && second.r != first.s {
                out.push(RigidityViolation {
                    case: ResidueCase::Opposite,
                    first: *first,
                    second: *second,
                });
            }
        }
    }
    Ok(out)
}

/// The search over natural numbers.
pub fn search_rigidity_counterexamples(n: i64, bound: i64) -> Result<Vec<RigidityViolation>> {
    residue_rigidity_violations(n, bound, SearchDomain::Natural)
}
