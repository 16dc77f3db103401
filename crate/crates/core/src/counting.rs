//! Partner counting as a sum of double-coset counts
//! `Σ_i |O(S_i) \ O(A_{S_i}) / O_Hodge|` over genus representatives.
//!
//! Each representative is supplied as its discriminant form together with the
//! image of `O(S_i)` in `O(A_{S_i})`. The Hodge group is supplied as its image
//! in `O(A_S)` for the first representative and transported to the others
//! along a form isomorphism. The genus itself is an input: nothing here
//! enumerates lattice classes.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{distinct_prime_count, euler_phi, is_prime};
use crate::bqf::wide_class_number;
use crate::disc_form::{
    enumerate_isometries, is_isomorphic, subgroup_from_generators, DiscIsometry, DiscSubgroup,
    FiniteQuadraticForm, FormRepr,
};
use crate::error::{Error, Result};
use crate::lattice::StandardLattice;

/// `|L \ O(A) / R|` by orbit closure over the explicit element list of `O(A)`.
pub fn double_coset_count(
    form: &FiniteQuadraticForm,
    left: &DiscSubgroup,
    right: &DiscSubgroup,
    bound: u64,
) -> Result<u64> {
    let group = enumerate_isometries(form, bound)?;
    for (side, sub) in [("left", left), ("right", right)] {
        if let Some(g) = sub.elements().iter().find(|g| !group.contains(g)) {
            return Err(Error::NotSubgroup(format!(
                "{side} element {:?} is not an isometry",
                g.matrix()
            )));
        }
        let set: BTreeSet<&DiscIsometry> = sub.elements().iter().collect();
        if !set.contains(&DiscIsometry::identity(form)) {
            return Err(Error::NotSubgroup(format!(
                "{side} side lacks the identity"
            )));
        }
        for a in sub.elements() {
            for b in sub.elements() {
                if !set.contains(&a.compose(b, form.orders())) {
                    return Err(Error::NotSubgroup(format!("{side} side is not closed")));
                }
            }
        }
    }
    let index: BTreeMap<&DiscIsometry, usize> = group
        .elements()
        .iter()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    let mut seen = vec![false; group.order()];
    let mut count = 0u64;
    for (i, g) in group.elements().iter().enumerate() {
        if seen[i] {
            continue;
        }
        count += 1;
        for l in left.elements() {
            let lg = l.compose(g, form.orders());
            for r in right.elements() {
                let lgr = lg.compose(r, form.orders());
                seen[index[&lgr]] = true;
            }
        }
    }
    Ok(count)
}

/// One genus representative: `(A_{S_i}, image of O(S_i))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusClass {
    pub label: Option<String>,
    pub form: FiniteQuadraticForm,
    pub isometry_image: DiscSubgroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingInput {
    pub genus_reps: Vec<GenusClass>,
    /// Image of the Hodge isometries in `O(A)` of `genus_reps[0].form`.
    pub hodge_image: DiscSubgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub label: Option<String>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FmCount {
    pub total: u64,
    pub per_class: Vec<ClassCount>,
}

/// Sums the double-coset counts, one summand per genus representative.
pub fn fm_count(input: &CountingInput, bound: u64) -> Result<FmCount> {
    let Some(reference) = input.genus_reps.first() else {
        return Err(Error::InvalidParameter(
            "at least one genus representative is required".into(),
        ));
    };
    let mut per_class = Vec::with_capacity(input.genus_reps.len());
    for class in &input.genus_reps {
        let iso = is_isomorphic(&reference.form, &class.form, bound)?.ok_or_else(|| {
            Error::InvalidParameter(format!(
                "genus representative {} has a discriminant form not isomorphic to the first",
                class.label.as_deref().unwrap_or("?")
            ))
        })?;
        let hodge = input
            .hodge_image
            .transport(&reference.form, &class.form, &iso)?;
        let count = double_coset_count(&class.form, &class.isometry_image, &hodge, bound)?;
        per_class.push(ClassCount {
            label: class.label.clone(),
            count,
        });
    }
    Ok(FmCount {
        total: per_class.iter().map(|c| c.count).sum(),
        per_class,
    })
}

/// Partner count for `NS(X) = ⟨2n⟩`: a single genus class with
/// `O(⟨2n⟩) = {±1}` and Hodge image `{±id}`.
pub fn rank1_fm_count(n: u64, bound: u64) -> Result<u64> {
    let input = rank1_counting_input(n)?;
    Ok(fm_count(&input, bound)?.total)
}

pub fn rank1_counting_input(n: u64) -> Result<CountingInput> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "rank-1 count needs n >= 2, got {n}"
        )));
    }
    let d = i64::try_from(2 * n).map_err(|_| Error::Overflow("2n"))?;
    let form = StandardLattice::Rank1(d).build()?.discriminant_form()?;
    let pm = DiscSubgroup::plus_minus(&form);
    Ok(CountingInput {
        genus_reps: vec![GenusClass {
            label: Some(format!("<{d}>")),
            form,
            isometry_image: pm.clone(),
        }],
        hodge_image: pm,
    })
}

/// `|O(A_{Λ_n})| / |{±id}|`, where `Λ_n = ⟨−2n⟩ ⊕ U² ⊕ E8(−1)²`. Assumes
/// `O(Λ_n) → O(A_{Λ_n})` is onto.
pub fn lambda_quotient_order(n: u64, bound: u64) -> Result<u64> {
    Ok(lambda_isometry_order(n, bound)? / 2)
}

/// `|O(A_{Λ_n})|`.
pub fn lambda_isometry_order(n: u64, bound: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("needs n >= 2, got {n}")));
    }
    let n = i64::try_from(n).map_err(|_| Error::Overflow("n"))?;
    let form = StandardLattice::LambdaN(n).build()?.discriminant_form()?;
    Ok(enumerate_isometries(&form, bound)?.order() as u64)
}

/// `φ(2I) | rk T`, the constraint on a cyclic Hodge group of order `2I`.
pub fn hodge_order_admissible(two_i: u64, rank_t: u64) -> Result<bool> {
    if two_i == 0 || !two_i.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "Hodge group order must be even and positive, got {two_i}"
        )));
    }
    Ok(rank_t.is_multiple_of(euler_phi(two_i)?))
}

/// `(h(p) + 1) / 2` for `det NS(X) = −p`, `p ≡ 1 mod 4` prime.
pub fn rank2_fm_count(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if p % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "{p} is not 1 mod 4, so no even rank-2 lattice has determinant -{p}"
        )));
    }
    let d = i64::try_from(p).map_err(|_| Error::Overflow("p"))?;
    let h = wide_class_number(d)?;
    if h % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "class number {h} of discriminant {p} is even; (h+1)/2 is not integral"
        )));
    }
    Ok(h.div_ceil(2))
}

/// `2^(τ(n) − 1)` for `n ≥ 2`.
pub fn rank1_formula(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("needs n >= 2, got {n}")));
    }
    Ok(1 << (distinct_prime_count(n)? - 1))
}

/// JSON shape of a [`CountingInput`]; subgroups are given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingFile {
    pub genus_reps: Vec<GenusClassFile>,
    pub hodge_image: SubgroupFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusClassFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub form: FormRepr,
    pub isometry_image: SubgroupFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupFile {
    pub generators: Vec<DiscIsometry>,
}

impl CountingInput {
    pub fn from_file(file: &CountingFile) -> Result<Self> {
        let genus_reps = file
            .genus_reps
            .iter()
            .map(|c| {
                let form = FiniteQuadraticForm::from_repr(&c.form)?;
                let isometry_image = subgroup_from_generators(&form, &c.isometry_image.generators)?;
                Ok(GenusClass {
                    label: c.label.clone(),
                    form,
                    isometry_image,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let Some(first) = genus_reps.first() else {
            return Err(Error::InvalidParameter("genus_reps is empty".into()));
        };
        let hodge_image = subgroup_from_generators(&first.form, &file.hodge_image.generators)?;
        Ok(CountingInput {
            genus_reps,
            hodge_image,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CountingFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("counting input: {e}")))?;
        Self::from_file(&file)
    }

    /// Serializes with every subgroup element listed as a generator.
    pub fn to_file(&self) -> CountingFile {
        let sub = |s: &DiscSubgroup| SubgroupFile {
            generators: s.elements().to_vec(),
        };
        CountingFile {
            genus_reps: self
                .genus_reps
                .iter()
                .map(|c| GenusClassFile {
                    label: c.label.clone(),
                    form: c.form.to_repr(),
                    isometry_image: sub(&c.isometry_image),
                })
                .collect(),
            hodge_image: sub(&self.hodge_image),
        }
    }
}

/// `q(x) = x²/(2n)` on `Z/2n`, the discriminant form of `⟨2n⟩`.
pub fn rank1_form(n: u64) -> Result<FiniteQuadraticForm> {
    let d = i64::try_from(2 * n).map_err(|_| Error::Overflow("2n"))?;
    FiniteQuadraticForm::cyclic(2 * n, BigRational::new(1.into(), d.into()))
}
