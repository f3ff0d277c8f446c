mod common;

use std::collections::{BTreeSet, VecDeque};

use prefixselect_core::frontend::{build_cfa, cfa_to_dot, parse, parse_cfa, Loc};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 400,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn print_then_parse_is_identity(program in common::any_program()) {
        let text = program.to_string();
        let reparsed = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&reparsed, &program);
        prop_assert_eq!(reparsed.to_string(), text);
    }

    #[test]
    fn automaton_is_deterministic(program in common::any_program()) {
        let text = program.to_string();
        let a = parse_cfa(&text).unwrap();
        let b = parse_cfa(&text).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &build_cfa(&program));
        prop_assert_eq!(cfa_to_dot(&a), cfa_to_dot(&b));
    }

    #[test]
    fn automaton_shape(program in common::any_program()) {
        let cfa = build_cfa(&program);
        let locs: BTreeSet<Loc> = cfa.locations().collect();
        prop_assert!(locs.contains(&cfa.initial()));
        for edge in cfa.edges() {
            prop_assert!(locs.contains(&edge.source) && locs.contains(&edge.target));
            prop_assert_ne!(edge.target, cfa.initial());
        }
        if let Some(error) = cfa.error() {
            prop_assert!(locs.contains(&error));
        }
        let mut seen = BTreeSet::from([cfa.initial()]);
        let mut queue = VecDeque::from([cfa.initial()]);
        while let Some(loc) = queue.pop_front() {
            for edge in cfa.outgoing(loc) {
                if seen.insert(edge.target) {
                    queue.push_back(edge.target);
                }
            }
        }
        prop_assert_eq!(seen, locs);
    }
}
