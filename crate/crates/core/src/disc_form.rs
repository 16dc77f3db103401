//! Finite quadratic forms `(A, q)` with `q: A → Q/2Z`.
//!
//! A form is presented by cyclic orders `d_1 | d_2 | ... | d_k` and a
//! symmetric matrix whose diagonal holds `q(g_i)` mod 2 and whose off-diagonal
//! holds `b(g_i, g_j)` mod 1. Elements are residue tuples `x` with
//! `0 ≤ x_i < d_i`.
//!
//! Isometry groups and isomorphisms are found by exhaustive search over
//! generator images, so every search takes a bound on the group order.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{reduce_mod, IntegerLattice};

/// Default brute-force limit on `|A|`.
pub const DEFAULT_ISOMETRY_BOUND: u64 = 10_000;

/// Environment variable overriding [`DEFAULT_ISOMETRY_BOUND`] in the CLI.
pub const ISOMETRY_BOUND_ENV: &str = "FM_ISOM_BOUND";

pub fn isometry_bound_from_env() -> Result<u64> {
    match std::env::var(ISOMETRY_BOUND_ENV) {
        Ok(v) => v.trim().parse::<u64>().map_err(|_| {
            Error::InvalidParameter(format!(
                "{ISOMETRY_BOUND_ENV}={v} is not a positive integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_ISOMETRY_BOUND),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    q_gram: Vec<Vec<BigRational>>,
}

/// A homomorphism between presented groups: column `j` is the image of the
/// `j`-th source generator, row `i` is reduced modulo the `i`-th target order.
///
/// Within a single form this is an element of `O(A)`; [`is_isomorphic`]
/// returns the same type as a witness between two forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscIsometry {
    matrix: Vec<Vec<u64>>,
}

/// An explicit subgroup of `O(A)`, stored sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscSubgroup {
    elements: Vec<DiscIsometry>,
}

pub fn fraction_string(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("`{s}` is not a fraction"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl FiniteQuadraticForm {
    /// Canonicalizes the entries (diagonal into `[0, 2)`, off-diagonal into
    /// `[0, 1)`) and checks that `q` is well defined on the presented group.
    pub fn new(orders: Vec<u64>, q_gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = orders.len();
        if q_gram.len() != k || q_gram.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidForm(format!(
                "q_gram must be {k}x{k} to match {k} generator orders"
            )));
        }
        for (i, &d) in orders.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidForm(format!(
                    "order d_{i} = {d} must exceed 1"
                )));
            }
            if d >= 1 << 61 {
                return Err(Error::Overflow("generator order too large"));
            }
            if i > 0 && d % orders[i - 1] != 0 {
                return Err(Error::InvalidForm(format!(
                    "orders must form a divisibility chain: {} does not divide {d}",
                    orders[i - 1]
                )));
            }
        }
        let two = rat(2, 1);
        let one = BigRational::one();
        let mut canon = q_gram.clone();
        for i in 0..k {
            for j in 0..k {
                if j > i && q_gram[i][j] != q_gram[j][i] {
                    let diff = &q_gram[i][j] - &q_gram[j][i];
                    if !diff.is_integer() {
                        return Err(Error::InvalidForm(format!(
                            "q_gram not symmetric at ({i}, {j})"
                        )));
                    }
                }
                canon[i][j] = reduce_mod(&q_gram[i][j], if i == j { &two } else { &one });
            }
        }
        for i in 0..k {
            let d = BigRational::from_integer(orders[i].into());
            for j in 0..k {
                if !(&d * &canon[i][j]).is_integer() {
                    return Err(Error::InvalidForm(format!(
                        "d_{i} * b(g_{i}, g_{j}) is not integral"
                    )));
                }
            }
            let dq = &d * &d * &canon[i][i];
            if !dq.is_integer() || dq.to_integer().is_odd() {
                return Err(Error::InvalidForm(format!(
                    "q(d_{i} * g_{i}) = {} is not 0 mod 2",
                    fraction_string(&dq)
                )));
            }
        }
        Ok(FiniteQuadraticForm {
            orders,
            q_gram: canon,
        })
    }

    pub(crate) fn from_big_rationals(
        orders: Vec<u64>,
        q_gram: &[Vec<BigRational>],
    ) -> Result<Self> {
        Self::new(orders, q_gram.to_vec())
    }

    /// `(Z/d, q(g) = q)`.
    pub fn cyclic(order: u64, q: BigRational) -> Result<Self> {
        Self::new(vec![order], vec![vec![q]])
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: Vec::new(),
            q_gram: Vec::new(),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn q_gram(&self) -> &[Vec<BigRational>] {
        &self.q_gram
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    /// `|A| = ∏ d_i`, saturating.
    pub fn group_order(&self) -> u128 {
        self.orders
            .iter()
            .fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn q_value_of_generator(&self, i: usize) -> BigRational {
        self.q_gram[i][i].clone()
    }

    /// `q(x) = Σ x_i² q(g_i) + 2 Σ_{i<j} x_i x_j b(g_i, g_j)` in `[0, 2)`.
    pub fn q_value(&self, x: &[i64]) -> Result<BigRational> {
        self.check_len(x.len())?;
        let mut acc = BigRational::zero();
        for i in 0..x.len() {
            let xi = BigInt::from(x[i]);
            acc += BigRational::from_integer(&xi * &xi) * &self.q_gram[i][i];
            for j in i + 1..x.len() {
                let c = BigInt::from(2) * &xi * BigInt::from(x[j]);
                acc += BigRational::from_integer(c) * &self.q_gram[i][j];
            }
        }
        Ok(reduce_mod(&acc, &rat(2, 1)))
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Result<BigRational> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut acc = BigRational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                let c = BigInt::from(x[i]) * BigInt::from(y[j]);
                acc += BigRational::from_integer(c) * &self.q_gram[i][j];
            }
        }
        Ok(reduce_mod(&acc, &BigRational::one()))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.orders.len() {
            return Err(Error::DimensionMismatch {
                expected: self.orders.len(),
                found: len,
            });
        }
        Ok(())
    }

    /// `(A, −q)`.
    pub fn negate(&self) -> Self {
        let q_gram = self
            .q_gram
            .iter()
            .map(|r| r.iter().map(|v| -v).collect())
            .collect();
        Self::new(self.orders.clone(), q_gram).expect("negation preserves validity")
    }

    /// All elements as residue tuples in mixed-radix order (last index fastest).
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn check_bound(&self, bound: u64) -> Result<()> {
        let order = self.group_order();
        if order > bound as u128 {
            return Err(Error::BoundExceeded { order, bound });
        }
        Ok(())
    }

    fn tables(&self) -> Tables {
        Tables::new(self)
    }

    pub fn to_repr(&self) -> FormRepr {
        FormRepr {
            orders: self.orders.clone(),
            q_gram: self
                .q_gram
                .iter()
                .map(|r| r.iter().map(fraction_string).collect())
                .collect(),
        }
    }

    pub fn from_repr(repr: &FormRepr) -> Result<Self> {
        let q_gram = repr
            .q_gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_fraction(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(repr.orders.clone(), q_gram)
    }
}

/// JSON shape of a form: orders plus `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRepr {
    pub orders: Vec<u64>,
    pub q_gram: Vec<Vec<String>>,
}

/// Integer tables for the search kernels. All values are scaled by `2e`
/// where `e = d_k` is the exponent: `q` lives in `Z/4e`, `b` in `Z/2e`.
struct Tables {
    orders: Vec<u64>,
    q_mod: u128,
    b_mod: u128,
    t: Vec<Vec<u128>>,
}

impl Tables {
    fn new(form: &FiniteQuadraticForm) -> Self {
        let exp = form.orders.last().copied().unwrap_or(1) as u128;
        let scale = BigRational::from_integer(BigInt::from(2 * exp));
        let k = form.orders.len();
        let mut t = vec![vec![0u128; k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = (&form.q_gram[i][j] * &scale).to_integer();
                t[i][j] = v.to_u128().expect("canonical entries are nonnegative");
            }
        }
        Tables {
            orders: form.orders.clone(),
            q_mod: 4 * exp,
            b_mod: 2 * exp,
            t,
        }
    }

    fn q(&self, x: &[u64]) -> u128 {
        let m = self.q_mod;
        let mut acc = 0u128;
        for i in 0..x.len() {
            let xi = x[i] as u128;
            acc = (acc + (xi * xi % m) * self.t[i][i]) % m;
            for j in i + 1..x.len() {
                let c = 2 * xi % m * (x[j] as u128) % m;
                acc = (acc + c * (self.t[i][j] % m)) % m;
            }
        }
        acc
    }

    fn b(&self, x: &[u64], y: &[u64]) -> u128 {
        let m = self.b_mod;
        let mut acc = 0u128;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                acc = (acc + (xi as u128 * yj as u128 % m) * (self.t[i][j] % m)) % m;
            }
        }
        acc
    }

    fn annihilated_by(&self, x: &[u64], d: u64) -> bool {
        x.iter()
            .zip(&self.orders)
            .all(|(&xi, &di)| (xi as u128 * d as u128).is_multiple_of(di as u128))
    }
}

impl DiscIsometry {
    pub fn from_matrix(matrix: Vec<Vec<u64>>) -> Self {
        DiscIsometry { matrix }
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Builds the map sending generator `j` to `images[j]`.
    pub fn from_images(images: &[Vec<u64>], target_rank: usize) -> Self {
        let matrix = (0..target_rank)
            .map(|i| images.iter().map(|col| col[i]).collect())
            .collect();
        DiscIsometry { matrix }
    }

    pub fn identity(form: &FiniteQuadraticForm) -> Self {
        Self::scalar(form, 1)
    }

    /// `x ↦ a·x`.
    pub fn scalar(form: &FiniteQuadraticForm, a: i64) -> Self {
        let k = form.num_generators();
        let matrix = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            a.rem_euclid(form.orders[i] as i64) as u64
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        DiscIsometry { matrix }
    }

    /// `−id`.
    pub fn negation(form: &FiniteQuadraticForm) -> Self {
        Self::scalar(form, -1)
    }

    /// Image of a residue tuple; `target_orders` are the orders of the codomain.
    pub fn apply(&self, target_orders: &[u64], x: &[u64]) -> Vec<u64> {
        self.matrix
            .iter()
            .zip(target_orders)
            .map(|(row, &d)| {
                let d = d as u128;
                row.iter()
                    .zip(x)
                    .fold(0u128, |acc, (&m, &xj)| (acc + m as u128 * xj as u128) % d)
                    as u64
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiscIsometry, target_orders: &[u64]) -> DiscIsometry {
        let cols = other.matrix.first().map_or(0, Vec::len);
        let images: Vec<Vec<u64>> = (0..cols)
            .map(|j| {
                let col: Vec<u64> = other.matrix.iter().map(|r| r[j]).collect();
                self.apply(target_orders, &col)
            })
            .collect();
        if images.is_empty() {
            return DiscIsometry {
                matrix: vec![Vec::new(); target_orders.len()],
            };
        }
        Self::from_images(&images, target_orders.len())
    }

    /// Inverse of an isomorphism `source → target`, found by table lookup
    /// over the elements of `source`.
    pub fn inverse(
        &self,
        source: &FiniteQuadraticForm,
        target: &FiniteQuadraticForm,
    ) -> Result<DiscIsometry> {
        let k = target.num_generators();
        let mut images = vec![None; k];
        for x in source.elements() {
            let y = self.apply(&target.orders, &x);
            if let Some(j) = unit_index(&y) {
                images[j].get_or_insert(x);
            }
        }
        let images = images
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotIsometry("map is not surjective".into()))?;
        if images.is_empty() {
            return Ok(DiscIsometry {
                matrix: vec![Vec::new(); source.num_generators()],
            });
        }
        Ok(Self::from_images(&images, source.num_generators()))
    }

    /// Checks that this is a well-defined automorphism of `form` preserving `q`.
    pub fn validate(&self, form: &FiniteQuadraticForm) -> Result<()> {
        validate_map(self, form, form)
    }

    pub fn is_isometry_of(&self, form: &FiniteQuadraticForm) -> bool {
        self.validate(form).is_ok()
    }
}

/// Index `j` if `y` is the `j`-th unit tuple.
fn unit_index(y: &[u64]) -> Option<usize> {
    let mut idx = None;
    for (i, &v) in y.iter().enumerate() {
        match v {
            0 => {}
            1 if idx.is_none() => idx = Some(i),
            _ => return None,
        }
    }
    idx
}

fn validate_map(
    map: &DiscIsometry,
    source: &FiniteQuadraticForm,
    target: &FiniteQuadraticForm,
) -> Result<()> {
    let ks = source.num_generators();
    let kt = target.num_generators();
    if map.matrix.len() != kt || map.matrix.iter().any(|r| r.len() != ks) {
        return Err(Error::NotIsometry(format!("matrix must be {kt}x{ks}")));
    }
    for (i, row) in map.matrix.iter().enumerate() {
        if let Some(v) = row.iter().find(|&&v| v >= target.orders[i]) {
            return Err(Error::NotIsometry(format!(
                "entry {v} in row {i} is not reduced mod {}",
                target.orders[i]
            )));
        }
    }
    if source.orders != target.orders {
        return Err(Error::NotIsometry("groups have different orders".into()));
    }
    let ts = source.tables();
    let tt = target.tables();
    let images: Vec<Vec<u64>> = (0..ks)
        .map(|j| map.matrix.iter().map(|r| r[j]).collect())
        .collect();
    for (j, img) in images.iter().enumerate() {
        if !tt.annihilated_by(img, source.orders[j]) {
            return Err(Error::NotIsometry(format!(
                "image of g_{j} does not have order dividing {}",
                source.orders[j]
            )));
        }
        if tt.q(img) != ts.t[j][j] {
            return Err(Error::NotIsometry(format!("q(g_{j}) not preserved")));
        }
        for i in 0..j {
            if tt.b(&images[i], img) != ts.t[i][j] % ts.b_mod {
                return Err(Error::NotIsometry(format!("b(g_{i}, g_{j}) not preserved")));
            }
        }
    }
    if !injective(&images, source, &target.orders) {
        return Err(Error::NotIsometry("map is not injective".into()));
    }
    Ok(())
}

fn injective(images: &[Vec<u64>], source: &FiniteQuadraticForm, target_orders: &[u64]) -> bool {
    let map = DiscIsometry::from_images(images, target_orders.len());
    let mut seen = BTreeSet::new();
    source
        .elements()
        .into_iter()
        .all(|x| seen.insert(map.apply(target_orders, &x)))
}

/// Backtracking search for isometries `source → target`. Stops after the
/// first hit when `first_only` is set.
fn search_isometries(
    source: &FiniteQuadraticForm,
    target: &FiniteQuadraticForm,
    bound: u64,
    first_only: bool,
) -> Result<Vec<DiscIsometry>> {
    source.check_bound(bound)?;
    target.check_bound(bound)?;
    if source.orders != target.orders {
        return Ok(Vec::new());
    }
    let k = source.num_generators();
    if k == 0 {
        return Ok(vec![DiscIsometry { matrix: Vec::new() }]);
    }
    let ts = source.tables();
    let tt = target.tables();
    let elements = target.elements();
    let candidates: Vec<Vec<&Vec<u64>>> = (0..k)
        .map(|j| {
            elements
                .iter()
                .filter(|y| tt.annihilated_by(y, source.orders[j]) && tt.q(y) == ts.t[j][j])
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut chosen: Vec<&Vec<u64>> = Vec::with_capacity(k);
    let mut cursor = vec![0usize; k];
    let mut depth = 0usize;
    loop {
        if cursor[depth] >= candidates[depth].len() {
            if depth == 0 {
                break;
            }
            cursor[depth] = 0;
            depth -= 1;
            chosen.pop();
            cursor[depth] += 1;
            continue;
        }
        let y = candidates[depth][cursor[depth]];
        let fits = (0..depth).all(|i| tt.b(chosen[i], y) == ts.t[i][depth] % ts.b_mod);
        if !fits {
            cursor[depth] += 1;
            continue;
        }
        chosen.push(y);
        if depth + 1 == k {
            let images: Vec<Vec<u64>> = chosen.iter().map(|v| (*v).clone()).collect();
            if injective(&images, source, &target.orders) {
                found.push(DiscIsometry::from_images(&images, k));
                if first_only {
                    break;
                }
            }
            chosen.pop();
            cursor[depth] += 1;
        } else {
            depth += 1;
        }
    }
    found.sort();
    Ok(found)
}

/// The full isometry group `O(A)`, sorted.
pub fn enumerate_isometries(form: &FiniteQuadraticForm, bound: u64) -> Result<DiscSubgroup> {
    Ok(DiscSubgroup {
        elements: search_isometries(form, form, bound, false)?,
    })
}

/// An isomorphism `f1 → f2` carrying `q_1` to `q_2`, if one exists.
pub fn is_isomorphic(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    bound: u64,
) -> Result<Option<DiscIsometry>> {
    Ok(search_isometries(f1, f2, bound, true)?.into_iter().next())
}

/// Closure of `gens` under composition.
pub fn subgroup_from_generators(
    form: &FiniteQuadraticForm,
    gens: &[DiscIsometry],
) -> Result<DiscSubgroup> {
    for g in gens {
        g.validate(form)?;
    }
    let id = DiscIsometry::identity(form);
    let mut seen: BTreeSet<DiscIsometry> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in gens {
            let next = g.compose(&h, &form.orders);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(DiscSubgroup {
        elements: seen.into_iter().collect(),
    })
}

impl DiscSubgroup {
    /// Wraps an explicit element list after checking the subgroup axioms.
    pub fn from_elements(form: &FiniteQuadraticForm, elements: Vec<DiscIsometry>) -> Result<Self> {
        let set: BTreeSet<DiscIsometry> = elements.into_iter().collect();
        for e in &set {
            e.validate(form)?;
        }
        if !set.contains(&DiscIsometry::identity(form)) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.compose(b, &form.orders)) {
                    return Err(Error::NotSubgroup("not closed under composition".into()));
                }
            }
        }
        Ok(DiscSubgroup {
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial(form: &FiniteQuadraticForm) -> Self {
        DiscSubgroup {
            elements: vec![DiscIsometry::identity(form)],
        }
    }

    /// `{id, −id}` (a single element when `−id = id`).
    pub fn plus_minus(form: &FiniteQuadraticForm) -> Self {
        let set: BTreeSet<_> = [DiscIsometry::identity(form), DiscIsometry::negation(form)]
            .into_iter()
            .collect();
        DiscSubgroup {
            elements: set.into_iter().collect(),
        }
    }

    pub fn elements(&self) -> &[DiscIsometry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &DiscIsometry) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// `c·H·c⁻¹`.
    pub fn conjugate(&self, form: &FiniteQuadraticForm, c: &DiscIsometry) -> Result<DiscSubgroup> {
        let c_inv = c.inverse(form, form)?;
        let mut elements: Vec<DiscIsometry> = self
            .elements
            .iter()
            .map(|h| c.compose(&h.compose(&c_inv, &form.orders), &form.orders))
            .collect();
        elements.sort();
        elements.dedup();
        Ok(DiscSubgroup { elements })
    }

    /// Transports a subgroup of `O(source)` along an isomorphism
    /// `iso: source → target`.
    pub fn transport(
        &self,
        source: &FiniteQuadraticForm,
        target: &FiniteQuadraticForm,
        iso: &DiscIsometry,
    ) -> Result<DiscSubgroup> {
        let inv = iso.inverse(source, target)?;
        let mut elements: Vec<DiscIsometry> = self
            .elements
            .iter()
            .map(|h| iso.compose(&h.compose(&inv, &source.orders), &target.orders))
            .collect();
        elements.sort();
        elements.dedup();
        Ok(DiscSubgroup { elements })
    }
}

/// Isomorphism of discriminant forms between two lattices of equal signature;
/// `None` when the lattices lie in different genera.
pub fn genus_witness(
    l1: &IntegerLattice,
    l2: &IntegerLattice,
    bound: u64,
) -> Result<Option<DiscIsometry>> {
    if l1.signature() != l2.signature() {
        return Ok(None);
    }
    let f1 = l1.discriminant_form()?;
    let f2 = l2.discriminant_form()?;
    is_isomorphic(&f1, &f2, bound)
}

/// Equal signatures and isomorphic discriminant forms.
pub fn same_genus(l1: &IntegerLattice, l2: &IntegerLattice, bound: u64) -> Result<bool> {
    Ok(genus_witness(l1, l2, bound)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::standard_lattice;

    const B: u64 = DEFAULT_ISOMETRY_BOUND;

    fn cyclic(d: u64, n: i64, den: i64) -> FiniteQuadraticForm {
        FiniteQuadraticForm::cyclic(d, rat(n, den)).unwrap()
    }

    fn scalars(form: &FiniteQuadraticForm, group: &DiscSubgroup) -> Vec<u64> {
        let _ = form;
        group.elements().iter().map(|g| g.matrix()[0][0]).collect()
    }

    #[test]
    fn q_values() {
        let f = cyclic(12, 1, 12);
        assert_eq!(f.q_value(&[1]).unwrap(), rat(1, 12));
        assert_eq!(f.q_value(&[0]).unwrap(), rat(0, 1));
        assert_eq!(f.q_value(&[5]).unwrap(), rat(1, 12));
        assert!(matches!(
            f.q_value(&[1, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn negation() {
        assert_eq!(
            FiniteQuadraticForm::trivial().negate(),
            FiniteQuadraticForm::trivial()
        );
        let f = cyclic(12, 1, 12);
        assert_eq!(f.negate().q_value_of_generator(0), rat(23, 12));
        let g = standard_lattice("extended_NS", Some(6))
            .unwrap()
            .discriminant_form()
            .unwrap();
        assert_eq!(g.negate().negate(), g);
    }

    #[test]
    fn invalid_forms_rejected() {
        assert!(FiniteQuadraticForm::cyclic(3, rat(1, 3)).is_err());
        assert!(FiniteQuadraticForm::cyclic(3, rat(2, 3)).is_ok());
        assert!(FiniteQuadraticForm::cyclic(1, rat(0, 1)).is_err());
        assert!(FiniteQuadraticForm::cyclic(4, rat(1, 3)).is_err());
        assert!(FiniteQuadraticForm::new(vec![3, 2], vec![vec![rat(0, 1); 2]; 2]).is_err());
    }

    #[test]
    fn isometry_groups_of_cyclic_forms() {
        let f = cyclic(12, 1, 12);
        let o = enumerate_isometries(&f, B).unwrap();
        assert_eq!(scalars(&f, &o), vec![1, 5, 7, 11]);
        assert_eq!(
            enumerate_isometries(&cyclic(2, 1, 2), B).unwrap().order(),
            1
        );
        let f4 = cyclic(4, 1, 4);
        assert_eq!(
            scalars(&f4, &enumerate_isometries(&f4, B).unwrap()),
            vec![1, 3]
        );
    }

    #[test]
    fn bound_is_enforced() {
        let f = cyclic(12, 1, 12);
        assert!(matches!(
            enumerate_isometries(&f, 10),
            Err(Error::BoundExceeded {
                order: 12,
                bound: 10
            })
        ));
    }

    #[test]
    fn isomorphism_examples() {
        let f = standard_lattice("rank1", Some(12))
            .unwrap()
            .discriminant_form()
            .unwrap();
        assert_eq!(
            is_isomorphic(&f, &f, B).unwrap(),
            Some(DiscIsometry::identity(&f))
        );
        let g = standard_lattice("extended_NS", Some(6))
            .unwrap()
            .discriminant_form()
            .unwrap();
        assert!(is_isomorphic(&f, &g, B).unwrap().is_some());
        assert!(is_isomorphic(&cyclic(12, 1, 12), &cyclic(12, 23, 12), B)
            .unwrap()
            .is_none());
    }

    #[test]
    fn generated_subgroups() {
        let f = cyclic(12, 1, 12);
        assert_eq!(subgroup_from_generators(&f, &[]).unwrap().order(), 1);
        let pm = subgroup_from_generators(&f, &[DiscIsometry::negation(&f)]).unwrap();
        assert_eq!(scalars(&f, &pm), vec![1, 11]);
        let full = subgroup_from_generators(
            &f,
            &[DiscIsometry::scalar(&f, 5), DiscIsometry::scalar(&f, 7)],
        )
        .unwrap();
        assert_eq!(full, enumerate_isometries(&f, B).unwrap());
        assert!(matches!(
            subgroup_from_generators(&f, &[DiscIsometry::scalar(&f, 2)]),
            Err(Error::NotIsometry(_))
        ));
        assert!(matches!(
            subgroup_from_generators(&f, &[DiscIsometry::scalar(&f, 3)]),
            Err(Error::NotIsometry(_))
        ));
    }

    #[test]
    fn explicit_subgroups_are_checked() {
        let f = cyclic(12, 1, 12);
        let five = DiscIsometry::scalar(&f, 5);
        assert!(DiscSubgroup::from_elements(&f, vec![five.clone()]).is_err());
        let ok = DiscSubgroup::from_elements(&f, vec![five, DiscIsometry::identity(&f)]).unwrap();
        assert_eq!(ok.order(), 2);
    }

    #[test]
    fn genus_examples() {
        let u = standard_lattice("U", None).unwrap();
        let r = standard_lattice("rank1", Some(12)).unwrap();
        let a = crate::lattice::direct_sum(&[u.clone(), r.clone()]).unwrap();
        let b = IntegerLattice::from_i64(&[[12, 0, 0], [0, 0, -1], [0, -1, 0]]).unwrap();
        assert!(same_genus(&a, &b, B).unwrap());

        let p = IntegerLattice::from_i64(&[[2, 15], [15, -2]]).unwrap();
        let q = IntegerLattice::from_i64(&[[6, 13], [13, -10]]).unwrap();
        assert!(same_genus(&p, &q, B).unwrap());

        let hyp = IntegerLattice::from_i64(&[[2, 0], [0, -2]]).unwrap();
        assert!(!same_genus(&u, &hyp, B).unwrap());
        assert!(!same_genus(&u, &r, B).unwrap());
    }

    #[test]
    fn fraction_strings() {
        assert_eq!(fraction_string(&rat(23, 12)), "23/12");
        assert_eq!(fraction_string(&rat(0, 5)), "0/1");
        assert_eq!(parse_fraction(" 3 / 6").unwrap(), rat(1, 2));
        assert_eq!(parse_fraction("2").unwrap(), rat(2, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
        let f = cyclic(12, 1, 12);
        assert_eq!(FiniteQuadraticForm::from_repr(&f.to_repr()).unwrap(), f);
    }
}
