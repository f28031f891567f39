//! Shared test support: the grammar corpus and language oracles that do not
//! go through the library's own constructions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

use cfgkit::{parse_grammar, Grammar, Symbol, Word};

pub fn corpus_dir() -> PathBuf {
    // shared with the cli crate's tests
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus")
}

/// Every corpus grammar, sorted by file name (without extension).
pub fn corpus() -> Vec<(String, Grammar)> {
    let mut out: Vec<(String, Grammar)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cfg"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p).unwrap();
            let g = parse_grammar(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, g)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn load(name: &str) -> Grammar {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.cfg"))).unwrap();
    parse_grammar(&text).unwrap()
}

pub fn words(list: &[&str]) -> BTreeSet<Word> {
    list.iter().map(|w| Word::from_chars(w)).collect()
}

/// Brute-force bounded language: depth-first search over leftmost
/// derivations of an ε-free grammar. Every pending symbol yields at least
/// one terminal, so a sentential form longer than `k` is dead.
pub fn derive_words(g: &Grammar, k: usize) -> BTreeSet<Word> {
    assert!(!has_epsilon_rules(g), "derive_words needs an ε-free grammar");
    let mut rules: BTreeMap<&Symbol, Vec<&Vec<Symbol>>> = BTreeMap::new();
    for p in &g.productions {
        rules.entry(&p.head).or_default().push(&p.body);
    }

    let mut out = BTreeSet::new();
    let start = (Vec::<Symbol>::new(), vec![g.axiom.clone()]);
    let mut seen: HashSet<(Vec<Symbol>, Vec<Symbol>)> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some((mut prefix, pending)) = frontier.pop() {
        let mut rest: &[Symbol] = &pending;
        while let Some((first, tail)) = rest.split_first() {
            if first.is_variable() {
                break;
            }
            prefix.push(first.clone());
            rest = tail;
        }
        if prefix.len() + rest.len() > k {
            continue;
        }
        let Some((leftmost, tail)) = rest.split_first() else {
            out.insert(Word::new(prefix).unwrap());
            continue;
        };
        for body in rules.get(leftmost).into_iter().flatten() {
            let mut next: Vec<Symbol> = (*body).clone();
            next.extend_from_slice(tail);
            let state = (prefix.clone(), next);
            if seen.insert(state.clone()) {
                frontier.push(state);
            }
        }
    }
    out
}

pub fn has_epsilon_rules(g: &Grammar) -> bool {
    g.productions.iter().any(|p| p.body.is_empty())
}

pub fn concat_words(a: &BTreeSet<Word>, b: &BTreeSet<Word>, k: usize) -> BTreeSet<Word> {
    let mut by_len: Vec<Vec<&Word>> = vec![Vec::new(); k + 1];
    for v in b.iter().filter(|v| v.len() <= k) {
        by_len[v.len()].push(v);
    }
    let mut out = BTreeSet::new();
    for u in a.iter().filter(|u| u.len() <= k) {
        for bucket in &by_len[..=k - u.len()] {
            out.extend(bucket.iter().map(|v| u.concat(v)));
        }
    }
    out
}

/// Union of `L^i` over all `i`, truncated at length `k`.
pub fn star_words(l: &BTreeSet<Word>, k: usize) -> BTreeSet<Word> {
    let mut acc: BTreeSet<Word> = [Word::empty()].into();
    loop {
        let next: BTreeSet<Word> = acc.union(&concat_words(&acc, l, k)).cloned().collect();
        if next == acc {
            return acc;
        }
        acc = next;
    }
}

/// Word-wise image of a language under a substitution: each word `x` maps
/// to `f(x_1) ... f(x_n)`, truncated at length `k`. Every image language
/// must be ε-free so that words of `l` longer than `k` cannot contribute.
pub fn substitute_words(
    l: &BTreeSet<Word>,
    images: &BTreeMap<Symbol, BTreeSet<Word>>,
    k: usize,
) -> BTreeSet<Word> {
    // images of prefixes, shared between words
    let mut memo: HashMap<Vec<Symbol>, BTreeSet<Word>> = HashMap::new();
    memo.insert(Vec::new(), [Word::empty()].into());
    let mut out = BTreeSet::new();
    for x in l.iter().filter(|x| x.len() <= k) {
        let symbols = x.symbols();
        for end in 1..=symbols.len() {
            if memo.contains_key(&symbols[..end]) {
                continue;
            }
            let prev = &memo[&symbols[..end - 1]];
            let next = concat_words(prev, &images[&symbols[end - 1]], k);
            memo.insert(symbols[..end].to_vec(), next);
        }
        out.extend(memo[symbols].iter().cloned());
    }
    out
}
