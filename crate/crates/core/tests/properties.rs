use std::sync::OnceLock;

use coxeter_census::combinatorics::{derive_incidence, polytope_by_label};
use coxeter_census::diagrams::{canonical_form, classify};
use coxeter_census::invariants::{euler_characteristic, exact_canonical};
use coxeter_census::pasting::enumerate_selcper;
use coxeter_census::{CoxeterVector, LibrarySet, PasteConfig, Weight};
use proptest::prelude::*;

fn libraries() -> &'static LibrarySet {
    static LIBS: OnceLock<LibrarySet> = OnceLock::new();
    LIBS.get_or_init(|| LibrarySet::generate(7).unwrap())
}

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        1 => Just(Weight::Parallel),
        4 => Just(Weight::Angle(2)),
        4 => (3u32..=8).prop_map(Weight::Angle),
    ]
}

/// A vector on `m` nodes together with a relabeling of them.
fn relabeled() -> impl Strategy<Value = (CoxeterVector, Vec<usize>)> {
    (3usize..=6).prop_flat_map(|m| {
        (
            proptest::collection::vec(weight(), m * (m - 1) / 2),
            Just((0..m).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(e, p)| (CoxeterVector::new(m, e).unwrap(), p))
    })
}

/// A small polytope label and a block order over its brackets.
fn paste_order() -> impl Strategy<Value = (u32, Vec<usize>)> {
    prop::sample::select(vec![2u32, 4, 11]).prop_flat_map(|label| {
        let n = polytope_by_label(label).unwrap().brackets.len();
        (Just(label), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_form_is_an_orbit_invariant((v, perm) in relabeled()) {
        let c = canonical_form(&v);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert_eq!(canonical_form(&v.permuted(&perm)), c);
    }

    #[test]
    fn classification_ignores_labels((v, perm) in relabeled()) {
        prop_assert_eq!(classify(&v.permuted(&perm)), classify(&v));
    }

    #[test]
    fn euler_characteristic_ignores_labels((v, perm) in relabeled()) {
        prop_assert_eq!(euler_characteristic(&v.permuted(&perm)), euler_characteristic(&v));
    }

    #[test]
    fn exact_canonical_is_an_orbit_invariant((v, perm) in relabeled()) {
        let c = exact_canonical(&v);
        prop_assert_eq!(exact_canonical(&c), c.clone());
        prop_assert_eq!(exact_canonical(&v.permuted(&perm)), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn pasting_order_does_not_change_the_result((label, order) in paste_order()) {
        let p = polytope_by_label(label).unwrap();
        let inc = derive_incidence(&p).unwrap();
        let base = enumerate_selcper(&p, &inc, libraries(), &PasteConfig::default()).unwrap();
        let cfg = PasteConfig { order: Some(order), ..Default::default() };
        let shuffled = enumerate_selcper(&p, &inc, libraries(), &cfg).unwrap();
        prop_assert_eq!(shuffled.vectors, base.vectors);
    }
}
