//! Membership, emptiness and finiteness.
//!
//! The working algorithms are the polynomial ones (CYK, generating-set
//! fixpoint, cycle detection on the variable graph). Next to them sit the
//! bound-based searches over derivations, kept as cross-check oracles, and
//! [`enumerate`], a length-bounded language enumerator that works on any
//! grammar without normalizing it.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::exec::Strategy;
use crate::grammar::{Grammar, Symbol, Word};
use crate::transform::{generating_variables, to_cnf, CnfGrammar, TransformError};
use crate::trees::DerivationTree;

/// Default cap on `max_len` for [`enumerate`].
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("terminal `{0}` is not in the grammar's alphabet")]
    ForeignTerminal(String),
    #[error("bound {requested} exceeds the configured cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },
    #[error("{0}")]
    Transform(#[from] TransformError),
}

/// CYK recognition table for one word. Cell `(start, len)` holds the
/// variables deriving the subword of length `len` at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CykTable {
    word: Word,
    variables: Vec<Symbol>,
    // rows[len - 1][start][variable index]
    rows: Vec<Vec<Vec<bool>>>,
}

struct Rules {
    index: BTreeMap<Symbol, usize>,
    terminal: Vec<(usize, Symbol)>,
    binary: Vec<(usize, usize, usize)>,
}

impl Rules {
    fn new(g: &Grammar) -> Rules {
        let index: BTreeMap<Symbol, usize> = g
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut terminal = Vec::new();
        let mut binary = Vec::new();
        for p in &g.productions {
            match p.body.as_slice() {
                [a] => terminal.push((index[&p.head], a.clone())),
                [b, c] => binary.push((index[&p.head], index[b], index[c])),
                _ => unreachable!("CNF grammar"),
            }
        }
        Rules {
            index,
            terminal,
            binary,
        }
    }
}

fn check_alphabet(g: &CnfGrammar, w: &Word) -> Result<(), DecideError> {
    match w.symbols().iter().find(|s| !g.grammar.terminals.contains(*s)) {
        Some(s) => Err(DecideError::ForeignTerminal(s.name().to_string())),
        None => Ok(()),
    }
}

impl CykTable {
    pub fn build(g: &CnfGrammar, w: &Word) -> Result<CykTable, DecideError> {
        CykTable::build_with(g, w, Strategy::default())
    }

    /// Fills the table. Cells of equal length are independent and may be
    /// computed concurrently; the table is identical for every strategy.
    pub fn build_with(g: &CnfGrammar, w: &Word, strategy: Strategy) -> Result<CykTable, DecideError> {
        check_alphabet(g, w)?;
        let rules = Rules::new(&g.grammar);
        let nvars = rules.index.len();
        let n = w.len();
        let mut rows: Vec<Vec<Vec<bool>>> = Vec::with_capacity(n);
        if n > 0 {
            let first = w
                .symbols()
                .iter()
                .map(|s| {
                    let mut cell = vec![false; nvars];
                    for (head, a) in &rules.terminal {
                        if a == s {
                            cell[*head] = true;
                        }
                    }
                    cell
                })
                .collect();
            rows.push(first);
        }
        for len in 2..=n {
            let starts: Vec<usize> = (0..=n - len).collect();
            let done = &rows;
            let row = strategy.map(starts, |start| {
                let mut cell = vec![false; nvars];
                for k in 1..len {
                    let left = &done[k - 1][start];
                    let right = &done[len - k - 1][start + k];
                    for &(head, b, c) in &rules.binary {
                        if left[b] && right[c] {
                            cell[head] = true;
                        }
                    }
                }
                cell
            });
            rows.push(row);
        }
        Ok(CykTable {
            word: w.clone(),
            variables: rules.index.into_keys().collect(),
            rows,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn cell(&self, start: usize, len: usize) -> BTreeSet<Symbol> {
        self.rows[len - 1][start]
            .iter()
            .zip(&self.variables)
            .filter(|(hit, _)| **hit)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn derives(&self, v: &Symbol, start: usize, len: usize) -> bool {
        match self.variables.binary_search(v) {
            Ok(i) => len >= 1 && self.rows[len - 1][start][i],
            Err(_) => false,
        }
    }

    /// A derivation tree for the subword at `(start, len)` rooted at `v`,
    /// if `v` derives it. Picks the first production in grammar order and
    /// the smallest split point.
    pub fn tree(&self, g: &CnfGrammar, v: &Symbol, start: usize, len: usize) -> Option<DerivationTree> {
        if !self.derives(v, start, len) {
            return None;
        }
        let target = &self.word.symbols()[start];
        if len == 1 {
            return g
                .grammar
                .productions_of(v)
                .find(|p| p.body.len() == 1 && &p.body[0] == target)
                .map(|p| DerivationTree::node(v.clone(), vec![DerivationTree::leaf(p.body[0].clone())]));
        }
        for k in 1..len {
            for p in g.grammar.productions_of(v).filter(|p| p.body.len() == 2) {
                let (b, c) = (&p.body[0], &p.body[1]);
                if self.derives(b, start, k) && self.derives(c, start + k, len - k) {
                    let left = self.tree(g, b, start, k)?;
                    let right = self.tree(g, c, start + k, len - k)?;
                    return Some(DerivationTree::node(v.clone(), vec![left, right]));
                }
            }
        }
        None
    }
}

/// Membership test by CYK. ε is decided by the `generates_epsilon` flag.
pub fn member(g: &CnfGrammar, w: &Word) -> Result<bool, DecideError> {
    check_alphabet(g, w)?;
    if w.is_empty() {
        return Ok(g.generates_epsilon);
    }
    let table = CykTable::build_with(g, w, Strategy::Sequential)?;
    Ok(table.derives(&g.grammar.axiom, 0, w.len()))
}

/// Like [`member`] but returns a derivation tree for `w`. The empty word has
/// no tree in a CNF core, so ε yields `None` even when it is in the language.
pub fn parse_tree(g: &CnfGrammar, w: &Word) -> Result<Option<DerivationTree>, DecideError> {
    check_alphabet(g, w)?;
    if w.is_empty() {
        return Ok(None);
    }
    let table = CykTable::build_with(g, w, Strategy::Sequential)?;
    Ok(table.tree(g, &g.grammar.axiom, 0, w.len()))
}

/// All words of length at most `max_len` in `L(g)`, with the default cap.
pub fn enumerate(g: &Grammar, max_len: usize) -> Result<BTreeSet<Word>, DecideError> {
    enumerate_capped(g, max_len, DEFAULT_ENUMERATION_CAP)
}

type ByLength = Vec<BTreeSet<Word>>;

fn concat_bounded(left: &ByLength, right: &ByLength, max_len: usize) -> ByLength {
    let mut out = vec![BTreeSet::new(); max_len + 1];
    for (l1, words1) in left.iter().enumerate() {
        for (l2, words2) in right.iter().enumerate().take(max_len + 1 - l1) {
            for u in words1 {
                for v in words2 {
                    out[l1 + l2].insert(u.concat(v));
                }
            }
        }
    }
    out
}

/// Bounded enumeration with an explicit cap. Computes, per variable, the
/// derivable words bucketed by length, iterating the productions to a least
/// fixpoint. Handles ε- and unit productions directly.
pub fn enumerate_capped(g: &Grammar, max_len: usize, cap: usize) -> Result<BTreeSet<Word>, DecideError> {
    if max_len > cap {
        return Err(DecideError::CapExceeded {
            requested: max_len as u64,
            cap: cap as u64,
        });
    }
    let empty: ByLength = vec![BTreeSet::new(); max_len + 1];
    let mut langs: BTreeMap<&Symbol, ByLength> =
        g.variables.iter().map(|v| (v, empty.clone())).collect();
    let mut epsilon_only = empty.clone();
    epsilon_only[0].insert(Word::empty());

    loop {
        let mut changed = false;
        for p in &g.productions {
            let mut acc = epsilon_only.clone();
            for s in &p.body {
                let single;
                let part = if s.is_terminal() {
                    let mut t = empty.clone();
                    if max_len >= 1 {
                        t[1].insert(Word::new(vec![s.clone()]).expect("terminal"));
                    }
                    single = t;
                    &single
                } else {
                    &langs[s]
                };
                acc = concat_bounded(&acc, part, max_len);
                if acc.iter().all(BTreeSet::is_empty) {
                    break;
                }
            }
            let target = langs.get_mut(&p.head).expect("head is a variable");
            for (len, words) in acc.into_iter().enumerate() {
                for w in words {
                    changed |= target[len].insert(w);
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(langs
        .remove(&g.axiom)
        .unwrap_or_default()
        .into_iter()
        .flatten()
        .collect())
}

/// `L(g) = ∅`.
pub fn is_empty(g: &Grammar) -> bool {
    !generating_variables(g).contains(&g.axiom)
}

/// Directed edges `A -> B` and `A -> C` for each `A -> B C`.
fn has_variable_cycle(g: &Grammar) -> bool {
    let mut edges: BTreeMap<&Symbol, BTreeSet<&Symbol>> = BTreeMap::new();
    for p in g.productions.iter().filter(|p| p.body.len() == 2) {
        edges.entry(&p.head).or_default().extend(p.body.iter());
    }
    // Kahn: a cycle exists iff some node is never freed.
    let mut indegree: BTreeMap<&Symbol, usize> = g.variables.iter().map(|v| (v, 0)).collect();
    for targets in edges.values() {
        for t in targets {
            *indegree.get_mut(t).expect("variable") += 1;
        }
    }
    let mut ready: Vec<&Symbol> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| *v)
        .collect();
    let mut freed = 0;
    while let Some(v) = ready.pop() {
        freed += 1;
        for t in edges.get(v).into_iter().flatten() {
            let d = indegree.get_mut(t).expect("variable");
            *d -= 1;
            if *d == 0 {
                ready.push(t);
            }
        }
    }
    freed < g.variables.len()
}

/// `L(g)` is finite. The empty language counts as finite. Works on the
/// useless-free CNF core: the language is infinite iff the variable graph
/// has a cycle.
pub fn is_finite(g: &Grammar) -> bool {
    match to_cnf(g) {
        Ok(cnf) => !has_variable_cycle(&cnf.grammar),
        Err(_) => true,
    }
}

/// Limits for the derivation-search oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest admissible derivation-length bound.
    pub max_steps: u64,
    /// Largest number of distinct sentential forms to visit.
    pub max_states: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_steps: 1 << 12,
            max_states: 2_000_000,
        }
    }
}

/// Exhaustive search over leftmost derivations of a CNF grammar that are at
/// most `max_steps` long and whose sentential forms never exceed `max_len`
/// symbols. A leftmost sentential form is a terminal prefix followed by
/// pending variables; only the prefix length matters for the questions
/// asked here, so the search state is `(prefix length, pending variables)`.
/// Returns whether some complete derivation ends in a word whose length
/// satisfies `accept`.
fn search_derivations(
    g: &Grammar,
    max_steps: u64,
    max_len: usize,
    max_states: usize,
    accept: impl Fn(usize) -> bool,
) -> Result<bool, DecideError> {
    let rules = Rules::new(g);
    let mut by_head: Vec<(bool, Vec<(usize, usize)>)> = vec![(false, Vec::new()); rules.index.len()];
    for (head, _) in &rules.terminal {
        by_head[*head].0 = true;
    }
    for &(head, b, c) in &rules.binary {
        by_head[head].1.push((b, c));
    }
    let axiom = rules.index[&g.axiom];

    // pending is stored reversed: the leftmost variable is the last element
    let start = (0usize, vec![axiom]);
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some((prefix, pending)) = stack.pop() {
        let Some(&leftmost) = pending.last() else {
            if accept(prefix) {
                return Ok(true);
            }
            continue;
        };
        // steps taken so far: one per terminal plus one per binary rule
        let steps = (2 * prefix + pending.len() - 1) as u64;
        if steps >= max_steps {
            continue;
        }
        let mut next = Vec::new();
        if by_head[leftmost].0 {
            let mut rest = pending.clone();
            rest.pop();
            next.push((prefix + 1, rest));
        }
        if prefix + pending.len() < max_len {
            for &(b, c) in &by_head[leftmost].1 {
                let mut rest = pending.clone();
                rest.pop();
                rest.push(c);
                rest.push(b);
                next.push((prefix, rest));
            }
        }
        for state in next {
            if seen.insert(state.clone()) {
                if seen.len() > max_states {
                    return Err(DecideError::CapExceeded {
                        requested: seen.len() as u64,
                        cap: max_states as u64,
                    });
                }
                stack.push(state);
            }
        }
    }
    Ok(false)
}

fn pow2(exp: u32) -> Option<u64> {
    1u64.checked_shl(exp)
}

/// Non-emptiness by exhaustive derivation search: looks for a word of length
/// at most `2^N` (N = number of variables) among derivations of at most
/// `2^(N+1) - 1` steps.
pub fn oracle_nonempty(g: &CnfGrammar) -> Result<bool, DecideError> {
    oracle_nonempty_with(g, OracleLimits::default())
}

pub fn oracle_nonempty_with(g: &CnfGrammar, limits: OracleLimits) -> Result<bool, DecideError> {
    let n = g.variable_count() as u32;
    let bound = pow2(n + 1).filter(|&b| b <= limits.max_steps).ok_or(DecideError::CapExceeded {
        requested: pow2(n + 1).unwrap_or(u64::MAX),
        cap: limits.max_steps,
    })?;
    if g.generates_epsilon {
        return Ok(true);
    }
    let max_len = pow2(n).expect("smaller than bound") as usize;
    search_derivations(&g.grammar, bound - 1, max_len, limits.max_states, |len| {
        len >= 1 && len <= max_len
    })
}

/// Infiniteness by exhaustive derivation search: looks for a word `z` with
/// `2^N < |z| <= 2^(2N)` among derivations of at most `2^(2(N+1)) - 1` steps.
pub fn oracle_infinite(g: &CnfGrammar) -> Result<bool, DecideError> {
    oracle_infinite_with(g, OracleLimits::default())
}

pub fn oracle_infinite_with(g: &CnfGrammar, limits: OracleLimits) -> Result<bool, DecideError> {
    let n = g.variable_count() as u32;
    let bound = pow2(2 * (n + 1)).filter(|&b| b <= limits.max_steps).ok_or(DecideError::CapExceeded {
        requested: pow2(2 * (n + 1)).unwrap_or(u64::MAX),
        cap: limits.max_steps,
    })?;
    let low = pow2(n).expect("smaller than bound") as usize;
    let high = pow2(2 * n).expect("smaller than bound") as usize;
    search_derivations(&g.grammar, bound - 1, high, limits.max_states, |len| {
        len > low && len <= high
    })
}
