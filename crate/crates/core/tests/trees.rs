mod common;

use cfgkit::decide::{enumerate, parse_tree};
use cfgkit::grammar::{parse_grammar, Symbol};
use cfgkit::to_cnf;
use cfgkit::trees::{
    check_tree, leftmost_derivation, longest_path_length, random_cnf_tree, tree_from_derivation,
    yield_of, DerivationStep, DerivationTree, TreePath,
};
use common::{corpus, load};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cyk_witnesses_replay_through_leftmost_derivations() {
    for (name, grammar) in corpus() {
        let Ok(cnf) = to_cnf(&grammar) else { continue };
        for w in enumerate(&grammar, 7).unwrap() {
            let Some(tree) = parse_tree(&cnf, &w).unwrap() else {
                assert!(w.is_empty(), "{name}: no tree for {w}");
                continue;
            };
            assert!(check_tree(&tree, &cnf.grammar), "{name}: {w}");
            let steps = leftmost_derivation(&tree, &cnf.grammar).unwrap();
            let rebuilt = tree_from_derivation(&cnf.grammar, &steps).unwrap();
            assert_eq!(rebuilt, tree, "{name}: {w}");
            assert_eq!(yield_of(&rebuilt).unwrap(), w, "{name}");
        }
    }
}

#[test]
fn leftmost_replay_on_grammars_with_epsilon() {
    let g = load("nullable_pair");
    // S -> A B, A -> eps, B -> b
    let index = |head: &str, body: &[&str]| {
        g.productions
            .iter()
            .position(|p| p.head.name() == head && p.body.iter().map(Symbol::name).eq(body.iter().copied()))
            .unwrap()
    };
    let steps = vec![
        DerivationStep::new(TreePath::root(), index("S", &["A", "B"])),
        DerivationStep::new(TreePath(vec![0]), index("A", &[])),
        DerivationStep::new(TreePath(vec![1]), index("B", &["b"])),
    ];
    let tree = tree_from_derivation(&g, &steps).unwrap();
    assert!(check_tree(&tree, &g));
    assert_eq!(yield_of(&tree).unwrap().to_string(), "b");
    assert_eq!(leftmost_derivation(&tree, &g).unwrap(), steps);
}

/// Random CNF trees over the corpus: the yield never exceeds
/// `2^(path length - 1)`.
#[test]
fn yield_is_bounded_by_longest_path() {
    let cnfs: Vec<_> = corpus()
        .into_iter()
        .filter_map(|(_, g)| to_cnf(&g).ok())
        .filter(|c| !c.grammar.productions.is_empty())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 1200 {
        let cnf = cnfs.choose(&mut rng).unwrap();
        let depth = rand::Rng::gen_range(&mut rng, 1..=8);
        let Some(tree) = random_cnf_tree(cnf, depth, &mut rng) else { continue };
        assert!(check_tree(&tree, &cnf.grammar));
        let len = longest_path_length(&tree);
        assert!(len <= depth);
        assert!(yield_of(&tree).unwrap().len() <= 1 << (len - 1));
        checked += 1;
    }
}

/// Every binary tree shape with `leaves` leaves, as a CNF tree of
/// `S -> S S | a`.
fn all_shapes(leaves: usize) -> Vec<DerivationTree> {
    let s = Symbol::var("S");
    if leaves == 1 {
        return vec![DerivationTree::node(s, vec![DerivationTree::leaf(Symbol::term("a"))])];
    }
    let mut out = Vec::new();
    for left in 1..leaves {
        for l in all_shapes(left) {
            for r in all_shapes(leaves - left) {
                out.push(DerivationTree::node(s.clone(), vec![l.clone(), r]));
            }
        }
    }
    out
}

#[test]
fn every_cnf_tree_with_eight_leaves_is_deep() {
    let g = parse_grammar("start: S\nS -> S S | a").unwrap();
    let shapes = all_shapes(8);
    // Catalan(7)
    assert_eq!(shapes.len(), 429);
    for t in &shapes {
        assert!(check_tree(t, &g));
        assert_eq!(yield_of(t).unwrap().len(), 8);
        assert!(longest_path_length(t) >= 4);
    }
    assert!(shapes.iter().any(|t| longest_path_length(t) == 4));
}

/// Reorders a derivation keeping each expansion after the one that created
/// its leaf.
fn shuffled(steps: &[DerivationStep], seed: u64) -> Vec<DerivationStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending: Vec<DerivationStep> = steps.to_vec();
    let mut done: Vec<DerivationStep> = Vec::new();
    while !pending.is_empty() {
        let ready: Vec<usize> = (0..pending.len())
            .filter(|&i| {
                let path = &pending[i].path.0;
                path.is_empty() || done.iter().any(|d| d.path.0[..] == path[..path.len() - 1])
            })
            .collect();
        let pick = *ready.choose(&mut rng).unwrap();
        done.push(pending.remove(pick));
    }
    done
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_order_does_not_change_the_tree(seed in any::<u64>(), depth in 2usize..7) {
        let cnf = to_cnf(&load("palindromes")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(tree) = random_cnf_tree(&cnf, depth, &mut rng) {
            let steps = leftmost_derivation(&tree, &cnf.grammar).unwrap();
            let other = shuffled(&steps, seed ^ 0x9e37);
            prop_assert_eq!(tree_from_derivation(&cnf.grammar, &other).unwrap(), tree);
        }
    }
}
