#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use k3fm::bqf::{
    cycles, is_fundamental_discriminant, is_reduced, reduce, reduced_forms, rho_step,
    BinaryQuadraticForm,
};
use k3fm::counting::double_coset_count;
use k3fm::disc_form::{enumerate_isometries, DiscIsometry, DiscSubgroup, FiniteQuadraticForm};
use k3fm::lattice::{
    int_determinant as determinant, mat_mul, smith_normal_form, IntMatrix, IntegerLattice,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const BOUND: u64 = 10_000;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        max_global_rejects: 100_000,
        failure_persistence: None,
        ..Config::default()
    })
}

fn big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

pub fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
}

/// Even symmetric Gram matrices of rank 1 to 4 with nonzero determinant.
pub fn gram_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-4i64..=4, n),
                prop::collection::vec(-6i64..=6, n * (n - 1) / 2),
            )
                .prop_map(move |(diag, off)| {
                    let mut g = vec![vec![0i64; n]; n];
                    let mut it = off.into_iter();
                    for i in 0..n {
                        g[i][i] = 2 * diag[i];
                        for j in i + 1..n {
                            let v = it.next().unwrap();
                            g[i][j] = v;
                            g[j][i] = v;
                        }
                    }
                    g
                })
        })
        .prop_filter("nondegenerate", |g| !determinant(&big(g)).is_zero())
}

/// Discriminant forms of lattices with small discriminant groups.
pub fn small_form_strategy() -> impl Strategy<Value = FiniteQuadraticForm> {
    gram_strategy()
        .prop_filter("small group", |g| {
            determinant(&big(g)).abs() <= BigInt::from(240)
        })
        .prop_map(|g| {
            IntegerLattice::from_i64(&g)
                .unwrap()
                .discriminant_form()
                .unwrap()
        })
}

fn is_diagonal_chain(d: &IntMatrix) -> bool {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    for i in 0..rows {
        for j in 0..cols {
            if i != j && !d[i][j].is_zero() {
                return false;
            }
        }
    }
    let k = rows.min(cols);
    for i in 0..k {
        if d[i][i].is_negative() {
            return false;
        }
        if i + 1 < k {
            let (a, b) = (&d[i][i], &d[i + 1][i + 1]);
            let divides = if a.is_zero() {
                b.is_zero()
            } else {
                (b % a).is_zero()
            };
            if !divides {
                return false;
            }
        }
    }
    true
}

pub fn snf_roundtrip(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&matrix_strategy(), |m| {
            let m = big(&m);
            let s = smith_normal_form(&m);
            prop_assert_eq!(mat_mul(&mat_mul(&s.left, &m), &s.right), s.diag.clone());
            prop_assert!(is_diagonal_chain(&s.diag));
            prop_assert!(determinant(&s.left).abs().is_one());
            prop_assert!(determinant(&s.right).abs().is_one());
            prop_assert_eq!(s.left.len(), m.len());
            prop_assert_eq!(s.right.len(), m[0].len());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn pairing_symmetry(cases: u32) -> Result<(), String> {
    let strat = gram_strategy().prop_flat_map(|g| {
        let n = g.len();
        (
            Just(g),
            prop::collection::vec(-50i64..=50, n),
            prop::collection::vec(-50i64..=50, n),
            prop::collection::vec(-50i64..=50, n),
        )
    });
    runner(cases)
        .run(&strat, |(g, x, y, z)| {
            let l = IntegerLattice::from_i64(&g).unwrap();
            let xy = l.pairing_i64(&x, &y).unwrap();
            prop_assert_eq!(&xy, &l.pairing_i64(&y, &x).unwrap());
            let yz: Vec<i64> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
            prop_assert_eq!(
                l.pairing_i64(&x, &yz).unwrap(),
                xy + l.pairing_i64(&x, &z).unwrap()
            );
            prop_assert!(l.pairing_i64(&x, &x).unwrap().is_even());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn lift_perturbation(cases: u32) -> Result<(), String> {
    let strat = gram_strategy().prop_flat_map(|g| {
        let n = g.len();
        (
            Just(g),
            prop::collection::vec(prop::collection::vec(-30i64..=30, n), 2),
        )
    });
    runner(cases)
        .run(&strat, |(g, shifts)| {
            let l = IntegerLattice::from_i64(&g).unwrap();
            let dg = l.discriminant_group().unwrap();
            let form = &dg.form;
            let order: BigInt = form.orders().iter().map(|&d| BigInt::from(d)).product();
            prop_assert_eq!(order, l.determinant().abs());
            let two = BigRational::from_integer(2.into());
            let n = g.len();
            for (i, lift) in dg.lifts.iter().enumerate() {
                // lift ∈ L*: pairing with every basis vector is integral
                for b in 0..n {
                    let e: Vec<BigRational> = (0..n)
                        .map(|k| BigRational::from_integer(BigInt::from((k == b) as i64)))
                        .collect();
                    prop_assert!(l.pairing_rational(lift, &e).unwrap().is_integer());
                }
                let moved: Vec<BigRational> = lift
                    .iter()
                    .zip(&shifts[0])
                    .map(|(a, &w)| a + BigRational::from_integer(w.into()))
                    .collect();
                let q0 = l.pairing_rational(lift, lift).unwrap();
                let q1 = l.pairing_rational(&moved, &moved).unwrap();
                prop_assert!(((q1 - &q0) / &two).is_integer());
                prop_assert!(((q0 - form.q_value_of_generator(i)) / &two).is_integer());
                for (j, other) in dg.lifts.iter().enumerate() {
                    let moved_j: Vec<BigRational> = other
                        .iter()
                        .zip(&shifts[1])
                        .map(|(a, &w)| a + BigRational::from_integer(w.into()))
                        .collect();
                    let b0 = l.pairing_rational(lift, other).unwrap();
                    let b1 = l.pairing_rational(&moved, &moved_j).unwrap();
                    prop_assert!((b1 - &b0).is_integer());
                    if i != j {
                        prop_assert!((b0 - &form.q_gram()[i][j]).is_integer());
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn isometry_group_axioms(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&small_form_strategy(), |form| {
            let group = enumerate_isometries(&form, BOUND).unwrap();
            let set: BTreeSet<&DiscIsometry> = group.elements().iter().collect();
            prop_assert!(set.contains(&DiscIsometry::identity(&form)));
            prop_assert!(set.contains(&DiscIsometry::negation(&form)));
            for a in group.elements() {
                prop_assert!(a.is_isometry_of(&form));
                let inv = a.inverse(&form, &form).unwrap();
                prop_assert!(set.contains(&inv));
                prop_assert_eq!(
                    a.compose(&inv, form.orders()),
                    DiscIsometry::identity(&form)
                );
                for b in group.elements().iter().take(8) {
                    prop_assert!(set.contains(&a.compose(b, form.orders())));
                }
            }
            // the isometries preserve q on every element
            let elems = form.elements();
            for a in group.elements().iter().take(4) {
                for x in &elems {
                    let xi: Vec<i64> = x.iter().map(|&v| v as i64).collect();
                    let y: Vec<i64> = a
                        .apply(form.orders(), x)
                        .iter()
                        .map(|&v| v as i64)
                        .collect();
                    prop_assert_eq!(form.q_value(&xi).unwrap(), form.q_value(&y).unwrap());
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn double_coset_degenerate(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&small_form_strategy(), |form| {
            let full = enumerate_isometries(&form, BOUND).unwrap();
            let triv = DiscSubgroup::trivial(&form);
            let pm = DiscSubgroup::plus_minus(&form);
            let o = full.order() as u64;
            prop_assert_eq!(double_coset_count(&form, &triv, &triv, BOUND).unwrap(), o);
            prop_assert_eq!(double_coset_count(&form, &full, &triv, BOUND).unwrap(), 1);
            prop_assert_eq!(double_coset_count(&form, &triv, &full, BOUND).unwrap(), 1);
            prop_assert_eq!(double_coset_count(&form, &full, &full, BOUND).unwrap(), 1);
            prop_assert_eq!(
                double_coset_count(&form, &triv, &pm, BOUND).unwrap(),
                o / pm.order() as u64
            );
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi)
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}

/// Forms `(a, b, c)` of a fundamental discriminant in `[5, 500]`.
pub fn bqf_strategy() -> impl Strategy<Value = BinaryQuadraticForm> {
    let ds = fundamental_discriminants(5, 500);
    (
        prop::sample::select(ds),
        -200i64..=200,
        any::<prop::sample::Index>(),
        any::<bool>(),
    )
        .prop_filter_map("needs b ≡ D mod 2", |(d, b, idx, neg)| {
            if (b - d).rem_euclid(2) != 0 {
                return None;
            }
            let ac = (b * b - d) / 4;
            let divs: Vec<i64> = (1..=ac.abs()).filter(|x| ac % x == 0).collect();
            let a = *idx.get(&divs) * if neg { -1 } else { 1 };
            BinaryQuadraticForm::new(a, b, ac / a).ok()
        })
}

pub fn rho_and_cycles(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&bqf_strategy(), |f| {
            let d = f.disc();
            let g = rho_step(&f).unwrap();
            prop_assert_eq!(g.disc(), d);
            let (r, _) = reduce(&f).unwrap();
            prop_assert!(is_reduced(&r).unwrap());
            prop_assert_eq!(r.disc(), d);
            // cycles partition the reduced forms
            let all: BTreeSet<_> = reduced_forms(d).unwrap().into_iter().collect();
            let mut seen = BTreeSet::new();
            for cyc in cycles(d).unwrap() {
                for h in &cyc {
                    prop_assert!(all.contains(h));
                    prop_assert!(seen.insert(*h));
                }
                prop_assert_eq!(rho_step(cyc.last().unwrap()).unwrap(), cyc[0]);
            }
            prop_assert_eq!(seen, all);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Suite = fn(u32) -> Result<(), String>;

pub const AC7_SUITES: [(&str, Suite); 6] = [
    ("snf_roundtrip_divisibility", snf_roundtrip),
    ("pairing_symmetry", pairing_symmetry),
    ("lift_perturbation", lift_perturbation),
    ("isometry_group_axioms", isometry_group_axioms),
    ("double_coset_degenerate", double_coset_degenerate),
    ("rho_discriminant_and_cycle_partition", rho_and_cycles),
];
