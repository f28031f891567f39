mod common;

use std::collections::BTreeSet;

use cfgkit::decide::{
    enumerate, enumerate_capped, is_empty, is_finite, member, oracle_infinite, oracle_nonempty,
    parse_tree, CykTable,
};
use cfgkit::exec::Strategy;
use cfgkit::grammar::{parse_grammar, Grammar, Symbol, Word};
use cfgkit::to_cnf;
use cfgkit::trees::{check_tree, leftmost_derivation, yield_of};
use common::{corpus, load};
use proptest::prelude::*;

/// Every word over `alphabet` of length at most `k`.
fn all_words(alphabet: &BTreeSet<Symbol>, k: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..k {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet
                    .iter()
                    .map(move |a| w.concat(&Word::new(vec![a.clone()]).unwrap()))
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn tiny_grammars() -> Vec<(String, Grammar)> {
    let mut out = corpus();
    for (name, text) in [
        ("right_recursive", "start: S\nS -> A S | a\nA -> a"),
        ("pair", "start: S\nS -> A B\nA -> a\nB -> b"),
        ("dead_branch", "start: S\nS -> A B | c\nA -> a\nB -> B B"),
        ("loop_only", "start: S\nS -> A S\nA -> a"),
    ] {
        out.push((name.to_string(), parse_grammar(text).unwrap()));
    }
    out
}

#[test]
fn member_agrees_with_enumeration() {
    for (name, grammar) in corpus() {
        let language = enumerate(&grammar, 8).unwrap();
        let Ok(cnf) = to_cnf(&grammar) else {
            assert!(language.is_empty(), "{name}");
            continue;
        };
        let k = if grammar.terminals.len() > 3 { 6 } else { 8 };
        for w in all_words(&grammar.terminals, k) {
            assert_eq!(member(&cnf, &w).unwrap(), language.contains(&w), "{name}: {w}");
        }
    }
}

#[test]
fn witness_derivations_have_two_k_minus_one_steps() {
    for (name, grammar) in corpus() {
        let Ok(cnf) = to_cnf(&grammar) else { continue };
        for w in enumerate(&grammar, 8).unwrap() {
            let Some(tree) = parse_tree(&cnf, &w).unwrap() else {
                assert!(w.is_empty());
                continue;
            };
            assert!(check_tree(&tree, &cnf.grammar));
            assert_eq!(yield_of(&tree).unwrap(), w);
            let steps = leftmost_derivation(&tree, &cnf.grammar).unwrap();
            assert_eq!(steps.len(), 2 * w.len() - 1, "{name}: {w}");
        }
    }
}

#[test]
fn emptiness_matches_enumeration_up_to_two_to_the_n() {
    for (name, grammar) in tiny_grammars() {
        match to_cnf(&grammar) {
            Ok(cnf) if cnf.variable_count() <= 3 => {
                let bound = 1 << cnf.variable_count();
                let words = enumerate(&grammar, bound).unwrap();
                assert_eq!(is_empty(&grammar), words.is_empty(), "{name}");
            }
            Ok(_) => {}
            Err(_) => {
                assert!(is_empty(&grammar), "{name}");
                assert!(enumerate(&grammar, 8).unwrap().is_empty(), "{name}");
            }
        }
    }
}

#[test]
fn polynomial_decisions_agree_with_bound_oracles() {
    let mut compared = 0;
    for (name, grammar) in tiny_grammars() {
        let Ok(cnf) = to_cnf(&grammar) else {
            assert!(is_empty(&grammar) && is_finite(&grammar), "{name}");
            continue;
        };
        if cnf.variable_count() > 3 {
            continue;
        }
        assert_eq!(!is_empty(&grammar), oracle_nonempty(&cnf).unwrap(), "{name}");
        assert_eq!(!is_finite(&grammar), oracle_infinite(&cnf).unwrap(), "{name}");
        compared += 1;
    }
    assert!(compared >= 6, "only {compared} grammars compared");
}

#[test]
fn finiteness_matches_growth_of_enumeration() {
    for (name, grammar) in tiny_grammars() {
        let words = enumerate_capped(&grammar, 14, 14).unwrap();
        let long = words.iter().any(|w| w.len() > 7);
        // every finite corpus language is short
        assert_eq!(!is_finite(&grammar), long, "{name}");
    }
}

#[test]
fn every_cyk_cell_entry_has_a_valid_tree() {
    for name in ["equal_ab", "l1", "palindromes", "dyck", "paren_words"] {
        let grammar = load(name);
        let cnf = to_cnf(&grammar).unwrap();
        let alphabet = &grammar.terminals;
        for w in all_words(alphabet, 5).into_iter().filter(|w| !w.is_empty()) {
            let table = CykTable::build(&cnf, &w).unwrap();
            for len in 1..=w.len() {
                for start in 0..=w.len() - len {
                    for v in table.cell(start, len) {
                        let tree = table.tree(&cnf, &v, start, len).unwrap();
                        let rooted = Grammar {
                            axiom: v.clone(),
                            ..cnf.grammar.clone()
                        };
                        assert!(check_tree(&tree, &rooted), "{name}: {v} over {w}");
                        assert_eq!(yield_of(&tree).unwrap(), w.slice(start, len));
                    }
                }
            }
        }
    }
}

#[test]
fn strategies_fill_identical_tables() {
    let grammar = load("equal_ab");
    let cnf = to_cnf(&grammar).unwrap();
    for w in ["abab", "aabbba", "bbaaabab", "abababababbbaa"] {
        let w = Word::from_chars(w);
        let tables: Vec<CykTable> = Strategy::available()
            .into_iter()
            .map(|s| CykTable::build_with(&cnf, &w, s).unwrap())
            .collect();
        assert!(tables.windows(2).all(|p| p[0] == p[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cyk_recognizes_equal_counts(bits in prop::collection::vec(any::<bool>(), 1..16)) {
        let cnf = to_cnf(&load("equal_ab")).unwrap();
        let text: String = bits.iter().map(|&b| if b { 'a' } else { 'b' }).collect();
        let a = bits.iter().filter(|&&b| b).count();
        let expected = 2 * a == bits.len();
        prop_assert_eq!(member(&cnf, &Word::from_chars(&text)).unwrap(), expected);
    }
}
