mod common;

use common::*;
use k3fm::counting::{double_coset_count, fm_count, rank1_counting_input};
use k3fm::disc_form::{
    enumerate_isometries, is_isomorphic, subgroup_from_generators, DiscIsometry, DiscSubgroup,
    FiniteQuadraticForm,
};
use proptest::prelude::*;

const CASES: u32 = 256;

#[test]
fn snf_round_trip_and_divisibility() {
    snf_roundtrip(CASES).unwrap();
}

#[test]
fn pairing_is_symmetric_and_bilinear() {
    pairing_symmetry(CASES).unwrap();
}

#[test]
fn discriminant_form_ignores_lift_choice() {
    lift_perturbation(CASES).unwrap();
}

#[test]
fn isometries_form_a_group() {
    isometry_group_axioms(CASES).unwrap();
}

#[test]
fn double_coset_trivial_and_full_subgroups() {
    double_coset_degenerate(CASES).unwrap();
}

#[test]
fn rho_preserves_discriminant_and_cycles_partition() {
    rho_and_cycles(CASES).unwrap();
}

#[test]
fn negation_is_an_involution_with_same_group_order() {
    runner(CASES)
        .run(&small_form_strategy(), |f| {
            let g = f.negate();
            prop_assert_eq!(g.negate(), f.clone());
            prop_assert_eq!(
                enumerate_isometries(&f, BOUND).unwrap().order(),
                enumerate_isometries(&g, BOUND).unwrap().order()
            );
            Ok(())
        })
        .unwrap();
}

#[test]
fn isomorphism_is_an_equivalence_relation() {
    let strat = (small_form_strategy(), small_form_strategy());
    runner(CASES)
        .run(&strat, |(f, g)| {
            prop_assert!(is_isomorphic(&f, &f, BOUND).unwrap().is_some());
            let fg = is_isomorphic(&f, &g, BOUND).unwrap();
            let gf = is_isomorphic(&g, &f, BOUND).unwrap();
            prop_assert_eq!(fg.is_some(), gf.is_some());
            if let Some(phi) = fg {
                // transitivity through the witness: f → g → f is an automorphism of f
                let back = gf.unwrap();
                let round = back.compose(&phi, f.orders());
                prop_assert!(round.is_isometry_of(&f));
            }
            Ok(())
        })
        .unwrap();
}

/// Random subgroup generated by up to two isometries.
fn subgroup_of(form: &FiniteQuadraticForm, picks: &[prop::sample::Index]) -> DiscSubgroup {
    let group = enumerate_isometries(form, BOUND).unwrap();
    let gens: Vec<DiscIsometry> = picks
        .iter()
        .map(|i| i.get(group.elements()).clone())
        .collect();
    subgroup_from_generators(form, &gens).unwrap()
}

#[test]
fn double_coset_count_is_conjugation_invariant() {
    let strat = (
        small_form_strategy(),
        prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
        prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
        any::<prop::sample::Index>(),
    );
    runner(CASES)
        .run(&strat, |(f, l, r, c)| {
            let left = subgroup_of(&f, &l);
            let right = subgroup_of(&f, &r);
            let group = enumerate_isometries(&f, BOUND).unwrap();
            let c = c.get(group.elements());
            let base = double_coset_count(&f, &left, &right, BOUND).unwrap();
            let l2 = left.conjugate(&f, c).unwrap();
            let r2 = right.conjugate(&f, c).unwrap();
            prop_assert_eq!(double_coset_count(&f, &l2, &r2, BOUND).unwrap(), base);
            // |L \ G / R| ≥ |G| / (|L||R|)
            prop_assert!(base * (left.order() * right.order()) as u64 >= group.order() as u64);
            Ok(())
        })
        .unwrap();
}

#[test]
fn rank1_counting_input_round_trips_through_json() {
    for n in [2u64, 6, 12, 30] {
        let input = rank1_counting_input(n).unwrap();
        let text = serde_json::to_string(&input.to_file()).unwrap();
        let back = k3fm::counting::CountingInput::from_json(&text).unwrap();
        assert_eq!(
            fm_count(&back, BOUND).unwrap(),
            fm_count(&input, BOUND).unwrap()
        );
    }
}
