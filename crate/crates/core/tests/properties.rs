//! Property tests over random inverse subsemigroups of I3 and their
//! Wagner-Preston actions.

use proptest::prelude::*;

use partact::cli::format;
use partact::cli::generate::generate_restricted_action;
use partact::dynamics::{
    check_action_axioms, check_lemma_e_unitary, check_lemma_one_direction, check_semigroup_axioms,
};
use partact::expand::{oracle_gate, Expansion};
use partact::germ::{check_germ_groupoid, GermGroupoid};
use partact::isg::{from_partial_bijections, wagner_preston_action};
use partact::sets::battery;
use partact::{Congruence, InverseSemigroup, PartialBijection};

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// A partial bijection on three points: a permutation restricted by a mask.
fn partial_bijection() -> impl Strategy<Value = PartialBijection> {
    (0..6usize, 0..8u8).prop_map(|(p, mask)| {
        let map = (0..3).map(|i| (mask >> i & 1 == 1).then_some(PERMS[p][i])).collect();
        PartialBijection::from_map(map).unwrap()
    })
}

fn subsemigroup() -> impl Strategy<Value = InverseSemigroup> {
    prop::collection::vec(partial_bijection(), 1..=3).prop_map(|gens| from_partial_bijections(&gens).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_subsemigroups_are_inverse(s in subsemigroup()) {
        prop_assert!(check_semigroup_axioms(&s).passed());
        let all: Vec<usize> = s.elements().collect();
        prop_assert_eq!(s.generated_by(&all).len(), s.len());
    }

    #[test]
    fn natural_order_is_a_partial_order(s in subsemigroup()) {
        for a in s.elements() {
            prop_assert!(s.leq(a, a));
            prop_assert_eq!(s.leq(a, a), s.leq_by_left_idempotent(a, a));
            for b in s.elements() {
                prop_assert_eq!(s.leq(a, b), s.leq_by_left_idempotent(a, b));
                prop_assert_eq!(s.leq(a, b), s.leq_by_right_idempotent(a, b));
                if a != b && s.leq(a, b) {
                    prop_assert!(!s.leq(b, a));
                }
                for c in s.elements() {
                    if s.leq(a, b) && s.leq(b, c) {
                        prop_assert!(s.leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn min_group_quotient_is_a_group(s in subsemigroup()) {
        let c = Congruence::min_group(&s).unwrap();
        let (q, map) = c.quotient(&s).unwrap();
        prop_assert!(q.is_group());
        for a in s.elements() {
            for b in s.elements() {
                prop_assert_eq!(map[s.mul(a, b)], q.mul(map[a], map[b]));
            }
        }
        prop_assert_eq!(s.is_e_unitary(), c.is_idempotent_pure(&s));
    }

    #[test]
    fn restricted_actions_satisfy_the_lemmas(s in subsemigroup(), seed in 0..1000u64) {
        let a = generate_restricted_action(&wagner_preston_action(&s), seed).unwrap();
        prop_assert!(check_action_axioms(&a).passed());
        prop_assert!(check_lemma_one_direction(&a).passed());
        if s.is_e_unitary() {
            prop_assert!(check_lemma_e_unitary(&a).unwrap().passed());
        }
        let gg = GermGroupoid::new(&a).unwrap();
        prop_assert!(check_germ_groupoid(&gg).passed());
    }

    #[test]
    fn recurrence_classes_project_the_naive_set(s in subsemigroup(), seed in 0..1000u64) {
        let a = generate_restricted_action(&wagner_preston_action(&s), seed).unwrap();
        for sigma in a.space().points() {
            let table = a.germ_classes(sigma);
            for n in battery(a.space().len(), seed) {
                let m = [sigma].into_iter().collect();
                let naive = a.naive_recurrence(&m, &n);
                prop_assert_eq!(table.project(&naive), a.recurrence(sigma, &n));
            }
        }
    }

    #[test]
    fn format_round_trip(s in subsemigroup(), seed in 0..1000u64) {
        let a = generate_restricted_action(&wagner_preston_action(&s), seed).unwrap();
        let inst = format::Instance::named("x")
            .with_action(a)
            .with_congruence(Congruence::min_group(&s).unwrap());
        let text = format::print(&inst);
        let back = format::parse(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(format::print(&back[0]), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn small_expansions_match_the_oracle(s in subsemigroup()) {
        prop_assume!(s.len() <= 4);
        let exp = Expansion::new(&s).unwrap();
        let gate = oracle_gate(&exp).unwrap();
        prop_assert!(gate.report.passed(), "{}", gate.report);
    }
}
