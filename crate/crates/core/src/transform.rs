//! Language-preserving grammar rewrites: useless-symbol removal, ε- and
//! unit-production elimination, and conversion to Chomsky normal form.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::grammar::{dedup, Grammar, Production, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("the grammar generates the empty language")]
    EmptyLanguage,
    #[error("production `{0}` is not in Chomsky normal form")]
    NotCnf(String),
    #[error("{0}")]
    Grammar(#[from] crate::grammar::GrammarError),
}

/// What [`remove_useless`] (or a full reduction) threw away.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub removed_nongenerating: BTreeSet<Symbol>,
    pub removed_unreachable: BTreeSet<Symbol>,
    pub removed_epsilon_rules: usize,
    pub removed_unit_rules: usize,
}

impl ReductionReport {
    pub fn is_empty(&self) -> bool {
        self == &ReductionReport::default()
    }
}

/// Variables that derive at least one terminal word (least fixpoint).
pub fn generating_variables(g: &Grammar) -> BTreeSet<Symbol> {
    let mut generating = BTreeSet::new();
    loop {
        let before = generating.len();
        for p in &g.productions {
            if !generating.contains(&p.head)
                && p.body
                    .iter()
                    .all(|s| s.is_terminal() || generating.contains(s))
            {
                generating.insert(p.head.clone());
            }
        }
        if generating.len() == before {
            return generating;
        }
    }
}

/// Symbols (variables and terminals) that occur in some sentential form.
pub fn reachable_symbols(g: &Grammar) -> BTreeSet<Symbol> {
    let mut reached = BTreeSet::from([g.axiom.clone()]);
    let mut queue = VecDeque::from([g.axiom.clone()]);
    while let Some(v) = queue.pop_front() {
        for p in g.productions_of(&v) {
            for s in &p.body {
                if reached.insert(s.clone()) && s.is_variable() {
                    queue.push_back(s.clone());
                }
            }
        }
    }
    reached
}

/// Removes non-generating symbols first and unreachable ones second. The
/// order matters: the other way round can leave useless symbols behind.
pub fn remove_useless(g: &Grammar) -> Result<(Grammar, ReductionReport), TransformError> {
    let generating = generating_variables(g);
    if !generating.contains(&g.axiom) {
        return Err(TransformError::EmptyLanguage);
    }
    let mut report = ReductionReport::default();

    let productive = Grammar {
        variables: g.variables.intersection(&generating).cloned().collect(),
        terminals: g.terminals.clone(),
        productions: g
            .productions
            .iter()
            .filter(|p| {
                generating.contains(&p.head)
                    && p.body.iter().all(|s| s.is_terminal() || generating.contains(s))
            })
            .cloned()
            .collect(),
        axiom: g.axiom.clone(),
    };
    report.removed_nongenerating = g.variables.difference(&generating).cloned().collect();

    let reachable = reachable_symbols(&productive);
    let reduced = Grammar {
        variables: productive.variables.intersection(&reachable).cloned().collect(),
        terminals: productive.terminals.intersection(&reachable).cloned().collect(),
        productions: productive
            .productions
            .iter()
            .filter(|p| reachable.contains(&p.head))
            .cloned()
            .collect(),
        axiom: g.axiom.clone(),
    };
    report.removed_unreachable = productive
        .variables
        .iter()
        .chain(&productive.terminals)
        .filter(|s| !reachable.contains(*s))
        .cloned()
        .collect();
    Ok((reduced, report))
}

/// Variables that derive ε.
pub fn nullable_variables(g: &Grammar) -> BTreeSet<Symbol> {
    let mut nullable = BTreeSet::new();
    loop {
        let before = nullable.len();
        for p in &g.productions {
            if p.body.iter().all(|s| nullable.contains(s)) {
                nullable.insert(p.head.clone());
            }
        }
        if nullable.len() == before {
            return nullable;
        }
    }
}

/// Eliminates ε-productions. Every production is replaced by all variants
/// that omit some subset of its nullable occurrences (empty variants are
/// dropped). The flag reports whether ε belonged to the language.
pub fn remove_epsilon(g: &Grammar) -> (Grammar, bool) {
    let nullable = nullable_variables(g);
    let mut productions = Vec::new();
    for p in &g.productions {
        let optional: Vec<usize> = (0..p.body.len())
            .filter(|&i| nullable.contains(&p.body[i]))
            .collect();
        for mask in 0u64..(1u64 << optional.len()) {
            let omitted: BTreeSet<usize> = optional
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &pos)| pos)
                .collect();
            let body: Vec<Symbol> = p
                .body
                .iter()
                .enumerate()
                .filter(|(i, _)| !omitted.contains(i))
                .map(|(_, s)| s.clone())
                .collect();
            if !body.is_empty() {
                productions.push(Production::new(p.head.clone(), body));
            }
        }
    }
    let out = Grammar {
        variables: g.variables.clone(),
        terminals: g.terminals.clone(),
        productions: dedup(productions),
        axiom: g.axiom.clone(),
    };
    (out, nullable.contains(&g.axiom))
}

/// For each variable, the variables reachable through unit productions
/// (itself included).
fn unit_closure(g: &Grammar) -> BTreeMap<Symbol, BTreeSet<Symbol>> {
    let mut edges: BTreeMap<&Symbol, Vec<&Symbol>> = BTreeMap::new();
    for p in g.productions.iter().filter(|p| p.is_unit()) {
        edges.entry(&p.head).or_default().push(&p.body[0]);
    }
    g.variables
        .iter()
        .map(|v| {
            let mut seen = BTreeSet::from([v.clone()]);
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                for &next in edges.get(u).into_iter().flatten() {
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
            (v.clone(), seen)
        })
        .collect()
}

/// Eliminates unit productions `A -> B`: every `A` inherits the non-unit
/// productions of each `B` it reaches through unit rules.
pub fn remove_unit(g: &Grammar) -> Grammar {
    let closure = unit_closure(g);
    let mut productions = Vec::new();
    for p in g.productions.iter().filter(|p| !p.is_unit()) {
        productions.push(p.clone());
        for (a, reach) in &closure {
            if a != &p.head && reach.contains(&p.head) {
                productions.push(Production::new(a.clone(), p.body.clone()));
            }
        }
    }
    Grammar {
        variables: g.variables.clone(),
        terminals: g.terminals.clone(),
        productions: dedup(productions),
        axiom: g.axiom.clone(),
    }
}

/// A grammar whose productions are all `A -> B C` or `A -> a`. Whether ε
/// belongs to the language is tracked separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfGrammar {
    pub grammar: Grammar,
    pub generates_epsilon: bool,
}

/// True when `p` has the shape `A -> B C` or `A -> a`.
pub fn is_cnf_production(p: &Production) -> bool {
    match p.body.as_slice() {
        [b, c] => b.is_variable() && c.is_variable(),
        [a] => a.is_terminal(),
        _ => false,
    }
}

impl CnfGrammar {
    /// Wraps a grammar that is already in Chomsky normal form.
    pub fn new(grammar: Grammar, generates_epsilon: bool) -> Result<CnfGrammar, TransformError> {
        if let Some(v) = crate::grammar::validate(&grammar).into_iter().next() {
            return Err(crate::grammar::GrammarError::Invalid(vec![v]).into());
        }
        if let Some(p) = grammar.productions.iter().find(|p| !is_cnf_production(p)) {
            return Err(TransformError::NotCnf(p.to_string()));
        }
        Ok(CnfGrammar {
            grammar,
            generates_epsilon,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.grammar.variables.len()
    }
}

/// Hands out identifiers that are not yet taken, appending `'` on collision.
pub(crate) struct FreshNames {
    used: BTreeSet<String>,
}

impl FreshNames {
    pub(crate) fn new(used: BTreeSet<String>) -> FreshNames {
        FreshNames { used }
    }

    pub(crate) fn name(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        while self.used.contains(&name) {
            name.push('\'');
        }
        self.used.insert(name.clone());
        name
    }

    pub(crate) fn variable(&mut self, base: &str) -> Symbol {
        Symbol::var(&self.name(base))
    }
}

/// Converts to Chomsky normal form: ε-removal, unit removal, useless-symbol
/// removal, then terminal lifting (`_T_<a> -> a`) and body splitting
/// (`_B<k>` chains).
pub fn to_cnf(g: &Grammar) -> Result<CnfGrammar, TransformError> {
    let (no_eps, generates_epsilon) = remove_epsilon(g);
    let no_unit = remove_unit(&no_eps);
    let reduced = match remove_useless(&no_unit) {
        Ok((reduced, _)) => reduced,
        Err(TransformError::EmptyLanguage) if generates_epsilon => {
            // L = {ε}: the core is empty.
            return Ok(CnfGrammar {
                grammar: Grammar::assemble(g.axiom.clone(), Vec::new()),
                generates_epsilon,
            });
        }
        Err(e) => return Err(e),
    };

    let mut fresh = FreshNames::new(reduced.names());

    let mut lifted: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    let mut stage = Vec::new();
    for p in &reduced.productions {
        if p.body.len() < 2 {
            stage.push(p.clone());
            continue;
        }
        let mut new_rules = Vec::new();
        let body = p
            .body
            .iter()
            .map(|s| {
                if s.is_variable() {
                    return s.clone();
                }
                lifted
                    .entry(s.clone())
                    .or_insert_with(|| {
                        let v = fresh.variable(&format!("_T_{}", s.name()));
                        new_rules.push(Production::new(v.clone(), vec![s.clone()]));
                        v
                    })
                    .clone()
            })
            .collect();
        stage.push(Production::new(p.head.clone(), body));
        stage.extend(new_rules);
    }

    let mut split_count = 0usize;
    let mut productions = Vec::new();
    for p in stage {
        if p.body.len() <= 2 {
            productions.push(p);
            continue;
        }
        let mut head = p.head.clone();
        let k = p.body.len();
        for (i, s) in p.body[..k - 2].iter().enumerate() {
            split_count += 1;
            let link = fresh.variable(&format!("_B{split_count}"));
            productions.push(Production::new(head, vec![s.clone(), link.clone()]));
            head = link;
            if i == k - 3 {
                productions.push(Production::new(
                    head.clone(),
                    vec![p.body[k - 2].clone(), p.body[k - 1].clone()],
                ));
            }
        }
    }

    let grammar = Grammar::assemble(reduced.axiom.clone(), productions);
    debug_assert!(grammar.productions.iter().all(is_cnf_production));
    Ok(CnfGrammar {
        grammar,
        generates_epsilon,
    })
}

/// Full reduction with counts: ε-removal, unit removal, then useless-symbol
/// removal.
pub fn reduce(g: &Grammar) -> Result<(Grammar, bool, ReductionReport), TransformError> {
    let (no_eps, generates_epsilon) = remove_epsilon(g);
    let epsilon_rules = g.productions.iter().filter(|p| p.is_epsilon()).count();
    let no_unit = remove_unit(&no_eps);
    let unit_rules = no_eps.productions.iter().filter(|p| p.is_unit()).count();
    let (reduced, mut report) = remove_useless(&no_unit)?;
    report.removed_epsilon_rules = epsilon_rules;
    report.removed_unit_rules = unit_rules;
    Ok((reduced, generates_epsilon, report))
}
