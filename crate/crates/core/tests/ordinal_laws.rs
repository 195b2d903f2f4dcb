use ordtree_core::{CofClass, Ordinal};
use proptest::prelude::*;

const EXPONENTS: [&str; 9] = ["w2", "w1 + 1", "w1", "w + 1", "w", "3", "2", "1", "0"];

/// Ordinals in normal form built from decreasing exponents.
fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::btree_map(0..EXPONENTS.len(), 1u64..6, 0..4).prop_map(|terms| {
        terms.into_iter().fold(Ordinal::zero(), |acc, (i, c)| {
            let e = Ordinal::parse(EXPONENTS[i]).unwrap();
            &acc + &Ordinal::omega_pow(e).checked_mul_nat(c).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn display_parse_round_trip(a in ordinal()) {
        prop_assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn addition_is_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn addition_is_strictly_monotone_on_the_right(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!((&a + &b).cmp(&(&a + &c)), b.cmp(&c));
        prop_assert!(&a + &b >= b);
    }

    #[test]
    fn left_subtraction_inverts_addition(a in ordinal(), b in ordinal()) {
        prop_assert_eq!(a.left_sub(&(&a + &b)).unwrap(), b);
    }

    #[test]
    fn successor_and_predecessor(a in ordinal()) {
        let s = a.successor();
        prop_assert!(s > a);
        prop_assert!(s.is_successor());
        prop_assert_eq!(s.predecessor(), Some(a));
    }

    #[test]
    fn cofinality_is_read_off_the_last_summand(a in ordinal(), b in ordinal()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a + &b).cofinality(), b.cofinality());
    }

    #[test]
    fn fundamental_sequences_increase_below_the_limit(a in ordinal(), n in 0u64..20) {
        prop_assume!(a.cofinality() == CofClass::Omega);
        let x = a.fundamental_sequence(n).unwrap();
        let y = a.fundamental_sequence(n + 1).unwrap();
        prop_assert!(x < y && y < a);
    }

    #[test]
    fn fundamental_sequences_are_cofinal(a in ordinal(), b in ordinal()) {
        prop_assume!(a.cofinality() == CofClass::Omega && b < a);
        prop_assert!((0..64).any(|n| a.fundamental_sequence(n).unwrap() > b));
    }
}

#[test]
fn uncountable_cofinality_has_no_fundamental_sequence() {
    for s in ["w1", "w2", "w1*3", "w2 + w1"] {
        assert!(Ordinal::parse(s).unwrap().fundamental_sequence(1).is_err(), "{s}");
    }
}
