//! Grammar constructions for union, concatenation, Kleene star,
//! substitution and homomorphism.
//!
//! Operand grammars are renamed apart before they are combined: when
//! variable names clash, every variable of an operand gets a suffix (`_1`,
//! `_2` for binary operations, `_<terminal>` for substitution images).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::decide::{enumerate_capped, DecideError};
use crate::grammar::{dedup, Grammar, Production, Symbol, Word, EPSILON_TOKEN};
use crate::transform::FreshNames;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("substitution has no image for terminal `{0}`")]
    MissingImage(String),
}

fn variable_names(g: &Grammar) -> BTreeSet<String> {
    g.variables.iter().map(|v| v.name().to_string()).collect()
}

/// Renames every variable of `g` to `<name><suffix>` (made fresh if needed).
fn with_suffix(g: &Grammar, suffix: &str, fresh: &mut FreshNames) -> Grammar {
    let map: BTreeMap<&Symbol, Symbol> = g
        .variables
        .iter()
        .map(|v| (v, fresh.variable(&format!("{}{suffix}", v.name()))))
        .collect();
    let rename = |s: &Symbol| map.get(s).cloned().unwrap_or_else(|| s.clone());
    Grammar {
        variables: map.values().cloned().collect(),
        terminals: g.terminals.clone(),
        productions: g
            .productions
            .iter()
            .map(|p| Production::new(rename(&p.head), p.body.iter().map(rename).collect()))
            .collect(),
        axiom: rename(&g.axiom),
    }
}

/// Renames both operands when any variable name of one is used in the other.
fn apart(g1: &Grammar, g2: &Grammar) -> (Grammar, Grammar, FreshNames) {
    let names1 = g1.names();
    let names2 = g2.names();
    let mut fresh = FreshNames::new(names1.union(&names2).cloned().collect());
    let clash = !variable_names(g1).is_disjoint(&names2) || !variable_names(g2).is_disjoint(&names1);
    if clash {
        let a = with_suffix(g1, "_1", &mut fresh);
        let b = with_suffix(g2, "_2", &mut fresh);
        (a, b, fresh)
    } else {
        (g1.clone(), g2.clone(), fresh)
    }
}

fn combine(axiom: Symbol, parts: &[&Grammar], extra: Vec<Production>) -> Grammar {
    let mut variables = BTreeSet::from([axiom.clone()]);
    let mut terminals = BTreeSet::new();
    let mut productions = Vec::new();
    for g in parts {
        variables.extend(g.variables.iter().cloned());
        terminals.extend(g.terminals.iter().cloned());
        productions.extend(g.productions.iter().cloned());
    }
    productions.extend(extra);
    Grammar {
        variables,
        terminals,
        productions: dedup(productions),
        axiom,
    }
}

/// `L(g1) ∪ L(g2)`: new axiom `S3 -> S1 | S2`.
pub fn union(g1: &Grammar, g2: &Grammar) -> Grammar {
    let (a, b, mut fresh) = apart(g1, g2);
    let axiom = fresh.variable("S3");
    let extra = vec![
        Production::new(axiom.clone(), vec![a.axiom.clone()]),
        Production::new(axiom.clone(), vec![b.axiom.clone()]),
    ];
    combine(axiom, &[&a, &b], extra)
}

/// `L(g1) L(g2)`: new axiom `S4 -> S1 S2`.
pub fn concat(g1: &Grammar, g2: &Grammar) -> Grammar {
    let (a, b, mut fresh) = apart(g1, g2);
    let axiom = fresh.variable("S4");
    let extra = vec![Production::new(
        axiom.clone(),
        vec![a.axiom.clone(), b.axiom.clone()],
    )];
    combine(axiom, &[&a, &b], extra)
}

/// `L(g)*`: new axiom `S5 -> S1 S5 | eps`.
pub fn star(g: &Grammar) -> Grammar {
    let mut fresh = FreshNames::new(g.names());
    let axiom = fresh.variable("S5");
    let extra = vec![
        Production::new(axiom.clone(), vec![g.axiom.clone(), axiom.clone()]),
        Production::new(axiom.clone(), vec![]),
    ];
    combine(axiom, &[g], extra)
}

/// Maps terminals to languages, each given by a grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<Symbol, Grammar>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn insert(&mut self, terminal: Symbol, image: Grammar) {
        self.images.insert(terminal, image);
    }

    pub fn with(mut self, terminal: &str, image: Grammar) -> Substitution {
        self.insert(Symbol::term(terminal), image);
        self
    }

    pub fn image(&self, terminal: &Symbol) -> Option<&Grammar> {
        self.images.get(terminal)
    }
}

impl FromIterator<(Symbol, Grammar)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Symbol, Grammar)>>(iter: I) -> Self {
        Substitution {
            images: iter.into_iter().collect(),
        }
    }
}

/// `f(L(g))`: every terminal `a` in the productions of `g` is replaced by the
/// axiom of the image grammar for `a`, whose productions are added. The
/// terminals of the result are those of the images.
pub fn substitute(g: &Grammar, f: &Substitution) -> Result<Grammar, ClosureError> {
    let mut images: Vec<(&Symbol, Grammar)> = Vec::new();
    for a in &g.terminals {
        let image = f
            .image(a)
            .ok_or_else(|| ClosureError::MissingImage(a.name().to_string()))?;
        images.push((a, image.clone()));
    }

    let mut all_names = g.names();
    for (_, image) in &images {
        all_names.extend(image.names());
    }
    let mut fresh = FreshNames::new(all_names);

    let image_terminals: BTreeSet<String> = images
        .iter()
        .flat_map(|(_, im)| im.terminals.iter().map(|t| t.name().to_string()))
        .collect();
    let main = if variable_names(g).is_disjoint(&image_terminals) {
        g.clone()
    } else {
        with_suffix(g, "_0", &mut fresh)
    };

    for k in 0..images.len() {
        let mut others: BTreeSet<String> = variable_names(&main);
        others.extend(image_terminals.iter().cloned());
        for (j, (_, im)) in images.iter().enumerate() {
            if j != k {
                others.extend(im.names());
            }
        }
        if !variable_names(&images[k].1).is_disjoint(&others) {
            let suffix = format!("_{}", images[k].0.name());
            images[k].1 = with_suffix(&images[k].1, &suffix, &mut fresh);
        }
    }

    let axioms: BTreeMap<&Symbol, Symbol> = images
        .iter()
        .map(|(a, im)| (*a, im.axiom.clone()))
        .collect();
    let rewritten: Vec<Production> = main
        .productions
        .iter()
        .map(|p| {
            let body = p
                .body
                .iter()
                .map(|s| axioms.get(s).cloned().unwrap_or_else(|| s.clone()))
                .collect();
            Production::new(p.head.clone(), body)
        })
        .collect();

    let mut variables = main.variables.clone();
    let mut terminals = BTreeSet::new();
    let mut productions = rewritten;
    for (_, im) in &images {
        variables.extend(im.variables.iter().cloned());
        terminals.extend(im.terminals.iter().cloned());
        productions.extend(im.productions.iter().cloned());
    }
    Ok(Grammar {
        variables,
        terminals,
        productions: dedup(productions),
        axiom: main.axiom.clone(),
    })
}

/// The one-word language `{w}` as a grammar `S -> w`.
pub fn singleton(w: &Word) -> Grammar {
    let axiom = Symbol::var("S");
    let mut g = Grammar::assemble(
        axiom.clone(),
        vec![Production::new(axiom, w.symbols().to_vec())],
    );
    // a terminal literally named `S` would clash with the axiom
    if g.terminals.iter().any(|t| t.name() == "S") {
        let mut fresh = FreshNames::new(g.names());
        g = with_suffix(&g, "_h", &mut fresh);
    }
    g
}

/// `h(L(g))` for a homomorphism `h`: a substitution whose images are
/// singleton languages.
pub fn homomorphism(g: &Grammar, h: &BTreeMap<Symbol, Word>) -> Result<Grammar, ClosureError> {
    let f: Substitution = h.iter().map(|(a, w)| (a.clone(), singleton(w))).collect();
    substitute(g, &f)
}

/// Words of length at most `k` common to both languages. Intersection is
/// not a closure operation; this is a bounded demonstration only.
pub fn bounded_intersection(
    g1: &Grammar,
    g2: &Grammar,
    k: usize,
) -> Result<BTreeSet<Word>, DecideError> {
    let cap = k.max(crate::decide::DEFAULT_ENUMERATION_CAP);
    let l1 = enumerate_capped(g1, k, cap)?;
    let l2 = enumerate_capped(g2, k, cap)?;
    Ok(l1.intersection(&l2).cloned().collect())
}

/// Parses a homomorphism image such as `xy` or `eps`.
pub fn parse_image_word(text: &str) -> Word {
    if text == EPSILON_TOKEN || text.is_empty() {
        Word::empty()
    } else if text.contains(char::is_whitespace) {
        Word::from_names(&text.split_whitespace().collect::<Vec<_>>())
    } else {
        Word::from_chars(text)
    }
}
