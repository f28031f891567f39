//! Grammar data types and the line-oriented `.cfg` text format.
//!
//! ```text
//! # a^n b^n, n >= 1
//! start: S
//! S -> a S b | a b
//! ```
//!
//! Identifiers that appear on a left-hand side are variables, every other
//! identifier is a terminal. The reserved token `eps` denotes the empty body.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Token used for the empty body in grammar files and for the empty word.
pub const EPSILON_TOKEN: &str = "eps";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Variable,
    Terminal,
}

/// A grammar symbol. Two symbols are equal iff kind and name both match.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    kind: SymbolKind,
    name: String,
}

/// Returns true if `name` is usable as a symbol name.
pub fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name != EPSILON_TOKEN
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Symbol {
    pub fn new(kind: SymbolKind, name: impl Into<String>) -> Result<Symbol, GrammarError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Symbol { kind, name })
        } else {
            Err(GrammarError::InvalidIdentifier(name))
        }
    }

    /// Variable symbol. Panics on an invalid identifier.
    pub fn var(name: &str) -> Symbol {
        Symbol::new(SymbolKind::Variable, name).expect("invalid variable name")
    }

    /// Terminal symbol. Panics on an invalid identifier.
    pub fn term(name: &str) -> Symbol {
        Symbol::new(SymbolKind::Terminal, name).expect("invalid terminal name")
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_variable(&self) -> bool {
        self.kind == SymbolKind::Variable
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == SymbolKind::Terminal
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A rewrite rule `head -> body`. An empty body is an ε-production.
///
/// The head is a single symbol, so rules with context on the left-hand side
/// cannot be expressed at all.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub head: Symbol,
    pub body: Vec<Symbol>,
}

impl Production {
    pub fn new(head: Symbol, body: Vec<Symbol>) -> Production {
        Production { head, body }
    }

    pub fn is_epsilon(&self) -> bool {
        self.body.is_empty()
    }

    /// `A -> B` with `B` a variable.
    pub fn is_unit(&self) -> bool {
        self.body.len() == 1 && self.body[0].is_variable()
    }

    fn body_names(&self) -> Vec<&str> {
        self.body.iter().map(Symbol::name).collect()
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[Symbol]) -> fmt::Result {
    if body.is_empty() {
        return f.write_str(EPSILON_TOKEN);
    }
    for (i, s) in body.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        f.write_str(s.name())?;
    }
    Ok(())
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> ", self.head)?;
        write_body(f, &self.body)
    }
}

/// A word over terminal symbols. The empty word is ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Word, GrammarError> {
        if let Some(s) = symbols.iter().find(|s| !s.is_terminal()) {
            return Err(GrammarError::NonTerminalInWord(s.name.clone()));
        }
        Ok(Word(symbols))
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// One terminal per character, e.g. `Word::from_chars("aabb")`.
    pub fn from_chars(text: &str) -> Word {
        Word(text.chars().map(|c| Symbol::term(&c.to_string())).collect())
    }

    pub fn from_names(names: &[&str]) -> Word {
        Word(names.iter().map(|n| Symbol::term(n)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(std::iter::repeat_n(self.0.iter().cloned(), times).flatten().collect())
    }

    /// Subword `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn count(&self, terminal: &str) -> usize {
        self.0.iter().filter(|s| s.name() == terminal).count()
    }

    pub(crate) fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }
}

impl fmt::Display for Word {
    /// Single-character terminals are written back to back; longer names are
    /// separated by spaces. The empty word prints as `eps`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EPSILON_TOKEN);
        }
        let compact = self.0.iter().all(|s| s.name.chars().count() == 1);
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(" ")?;
            }
            f.write_str(&s.name)?;
        }
        Ok(())
    }
}

/// A context-free grammar `(V, T, P, S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub variables: BTreeSet<Symbol>,
    pub terminals: BTreeSet<Symbol>,
    pub productions: Vec<Production>,
    pub axiom: Symbol,
}

impl Grammar {
    /// Builds a grammar and checks every invariant.
    pub fn new(
        variables: BTreeSet<Symbol>,
        terminals: BTreeSet<Symbol>,
        productions: Vec<Production>,
        axiom: Symbol,
    ) -> Result<Grammar, GrammarError> {
        let g = Grammar {
            variables,
            terminals,
            productions,
            axiom,
        };
        let violations = validate(&g);
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(GrammarError::Invalid(violations))
        }
    }

    /// Builds a grammar whose symbol sets are read off the productions. The
    /// axiom is always a variable, even when it has no rules.
    pub fn from_productions(
        axiom: Symbol,
        productions: Vec<Production>,
    ) -> Result<Grammar, GrammarError> {
        let (variables, terminals) = collect_symbols(&axiom, &productions);
        Grammar::new(variables, terminals, productions, axiom)
    }

    /// Same as [`Grammar::from_productions`] without validation, dropping
    /// duplicate productions. For constructions that are correct by design.
    pub(crate) fn assemble(axiom: Symbol, productions: Vec<Production>) -> Grammar {
        let (variables, terminals) = collect_symbols(&axiom, &productions);
        Grammar {
            variables,
            terminals,
            productions: dedup(productions),
            axiom,
        }
    }

    pub fn productions_of<'a>(&'a self, head: &'a Symbol) -> impl Iterator<Item = &'a Production> {
        self.productions.iter().filter(move |p| &p.head == head)
    }

    /// Every symbol name in use, variables and terminals alike.
    pub fn names(&self) -> BTreeSet<String> {
        self.variables
            .iter()
            .chain(&self.terminals)
            .map(|s| s.name.clone())
            .collect()
    }

    pub fn max_body_len(&self) -> usize {
        self.productions.iter().map(|p| p.body.len()).max().unwrap_or(0)
    }

    /// Equality with production order ignored.
    pub fn same_up_to_order(&self, other: &Grammar) -> bool {
        let a: BTreeSet<_> = self.productions.iter().collect();
        let b: BTreeSet<_> = other.productions.iter().collect();
        self.axiom == other.axiom
            && self.variables == other.variables
            && self.terminals == other.terminals
            && a == b
            && self.productions.len() == other.productions.len()
    }

    /// Variables that head at least one production.
    pub fn variables_with_rules(&self) -> BTreeSet<Symbol> {
        self.productions.iter().map(|p| p.head.clone()).collect()
    }

    /// Drops every production that mentions a variable without rules of its
    /// own and forgets those variables; if the axiom ends up without rules,
    /// all productions go. Such productions never take part in a terminal
    /// derivation, so the language is unchanged, and the result is
    /// representable in the text format.
    pub fn prune_ruleless(&self) -> Grammar {
        let mut live = self.variables_with_rules();
        loop {
            let keep: Vec<Production> = self
                .productions
                .iter()
                .filter(|p| {
                    live.contains(&p.head)
                        && p.body.iter().all(|s| s.is_terminal() || live.contains(s))
                })
                .cloned()
                .collect();
            let next: BTreeSet<Symbol> = keep.iter().map(|p| p.head.clone()).collect();
            if next == live {
                if !live.contains(&self.axiom) {
                    return Grammar::assemble(self.axiom.clone(), Vec::new());
                }
                return Grammar::assemble(self.axiom.clone(), keep);
            }
            live = next;
        }
    }
}

fn collect_symbols(
    axiom: &Symbol,
    productions: &[Production],
) -> (BTreeSet<Symbol>, BTreeSet<Symbol>) {
    let mut variables = BTreeSet::from([axiom.clone()]);
    let mut terminals = BTreeSet::new();
    for p in productions {
        for s in std::iter::once(&p.head).chain(&p.body) {
            if s.is_variable() {
                variables.insert(s.clone());
            } else {
                terminals.insert(s.clone());
            }
        }
    }
    (variables, terminals)
}

pub(crate) fn dedup(productions: Vec<Production>) -> Vec<Production> {
    let mut seen = BTreeSet::new();
    productions
        .into_iter()
        .filter(|p| seen.insert(p.clone()))
        .collect()
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}

/// One broken grammar invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    AxiomNotVariable(String),
    AxiomNotDeclared(String),
    MisfiledSymbol(String),
    SharedName(String),
    TerminalHead(String),
    UndeclaredSymbol { production: String, symbol: String },
    DuplicateProduction(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AxiomNotVariable(s) => write!(f, "axiom `{s}` is not a variable"),
            Violation::AxiomNotDeclared(s) => write!(f, "axiom `{s}` is not in the variable set"),
            Violation::MisfiledSymbol(s) => {
                write!(f, "symbol `{s}` is filed under the wrong kind")
            }
            Violation::SharedName(s) => {
                write!(f, "`{s}` is both a variable and a terminal")
            }
            Violation::TerminalHead(p) => write!(f, "production `{p}` has a terminal head"),
            Violation::UndeclaredSymbol { production, symbol } => {
                write!(f, "production `{production}` uses undeclared symbol `{symbol}`")
            }
            Violation::DuplicateProduction(p) => write!(f, "duplicate production `{p}`"),
        }
    }
}

/// Lists every broken invariant; empty means the grammar is well formed.
pub fn validate(g: &Grammar) -> Vec<Violation> {
    let mut out = Vec::new();
    if !g.axiom.is_variable() {
        out.push(Violation::AxiomNotVariable(g.axiom.name.clone()));
    } else if !g.variables.contains(&g.axiom) {
        out.push(Violation::AxiomNotDeclared(g.axiom.name.clone()));
    }
    for v in &g.variables {
        if !v.is_variable() {
            out.push(Violation::MisfiledSymbol(v.name.clone()));
        }
    }
    for t in &g.terminals {
        if !t.is_terminal() {
            out.push(Violation::MisfiledSymbol(t.name.clone()));
        }
    }
    let var_names: BTreeSet<&str> = g.variables.iter().map(Symbol::name).collect();
    for t in &g.terminals {
        if var_names.contains(t.name()) {
            out.push(Violation::SharedName(t.name.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for p in &g.productions {
        if !p.head.is_variable() {
            out.push(Violation::TerminalHead(p.to_string()));
        }
        for s in std::iter::once(&p.head).chain(&p.body) {
            if !g.variables.contains(s) && !g.terminals.contains(s) {
                out.push(Violation::UndeclaredSymbol {
                    production: p.to_string(),
                    symbol: s.name.clone(),
                });
            }
        }
        if !seen.insert(p) {
            out.push(Violation::DuplicateProduction(p.to_string()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("axiom `{0}` is not the left-hand side of any production")]
    AxiomWithoutRules(String),
    #[error("line {line}: duplicate production `{production}`")]
    DuplicateProduction { line: usize, production: String },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("`{0}` is not a terminal and cannot appear in a word")]
    NonTerminalInWord(String),
    #[error("invalid grammar: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Arrow,
    Bar,
    Colon,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits one line (comment already stripped) into tokens with 1-based columns.
fn tokenize(line_no: usize, line: &str) -> Result<Vec<(Token<'_>, usize)>, GrammarError> {
    let is_ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '\'';
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let column = line[..i].chars().count() + 1;
        if c.is_whitespace() {
            chars.next();
        } else if c == '|' {
            chars.next();
            out.push((Token::Bar, column));
        } else if c == ':' {
            chars.next();
            out.push((Token::Colon, column));
        } else if c == '-' {
            chars.next();
            match chars.next() {
                Some((_, '>')) => out.push((Token::Arrow, column)),
                _ => return Err(syntax(line_no, column, "expected `->`")),
            }
        } else if is_ident_char(c) {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !is_ident_char(d) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push((Token::Ident(&line[i..end]), column));
        } else {
            return Err(syntax(line_no, column, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Parses the `.cfg` text format.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut axiom_name: Option<String> = None;
    // (head, alternatives, line) in file order
    let mut rules: Vec<(String, Vec<Vec<String>>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(line_no, line)?;
        if tokens.is_empty() {
            continue;
        }
        if axiom_name.is_none() {
            match tokens.as_slice() {
                [(Token::Ident("start"), _), (Token::Colon, _), (Token::Ident(name), col)] => {
                    if *name == EPSILON_TOKEN {
                        return Err(syntax(line_no, *col, "`eps` cannot be the axiom"));
                    }
                    axiom_name = Some(name.to_string());
                }
                [(_, col), ..] => {
                    return Err(syntax(line_no, *col, "expected `start: <ident>`"));
                }
                [] => unreachable!(),
            }
            continue;
        }
        let (head, head_col) = match tokens.first() {
            Some((Token::Ident(h), c)) => (*h, *c),
            Some((_, c)) => return Err(syntax(line_no, *c, "expected a rule head")),
            None => unreachable!(),
        };
        if head == EPSILON_TOKEN {
            return Err(syntax(line_no, head_col, "`eps` cannot head a rule"));
        }
        match tokens.get(1) {
            Some((Token::Arrow, _)) => {}
            Some((_, c)) => return Err(syntax(line_no, *c, "expected `->`")),
            None => {
                let col = head_col + head.chars().count();
                return Err(syntax(line_no, col, "expected `->`"));
            }
        }
        let mut alternatives = Vec::new();
        let mut current: Vec<(&str, usize)> = Vec::new();
        let mut last_col = head_col;
        let mut finish = |current: &mut Vec<(&str, usize)>, col: usize| {
            if current.is_empty() {
                return Err(syntax(line_no, col, "empty alternative (write `eps`)"));
            }
            let has_eps = current.iter().any(|(t, _)| *t == EPSILON_TOKEN);
            if has_eps && current.len() > 1 {
                let (_, c) = current.iter().find(|(t, _)| *t == EPSILON_TOKEN).unwrap();
                return Err(syntax(line_no, *c, "`eps` must stand alone in an alternative"));
            }
            let alt = if has_eps {
                Vec::new()
            } else {
                current.iter().map(|(t, _)| t.to_string()).collect()
            };
            current.clear();
            alternatives.push(alt);
            Ok(())
        };
        for (tok, col) in &tokens[2..] {
            last_col = *col;
            match tok {
                Token::Ident(name) => current.push((name, *col)),
                Token::Bar => finish(&mut current, *col)?,
                Token::Arrow | Token::Colon => {
                    return Err(syntax(line_no, *col, "unexpected token"));
                }
            }
        }
        finish(&mut current, last_col + 1)?;
        rules.push((head.to_string(), alternatives, line_no));
    }

    let axiom_name = axiom_name.ok_or_else(|| syntax(1, 1, "missing `start: <ident>` line"))?;
    let heads: BTreeSet<&str> = rules.iter().map(|(h, _, _)| h.as_str()).collect();
    if !rules.is_empty() && !heads.contains(axiom_name.as_str()) {
        return Err(GrammarError::AxiomWithoutRules(axiom_name));
    }
    let to_symbol = |name: &str| {
        if heads.contains(name) || name == axiom_name {
            Symbol::var(name)
        } else {
            Symbol::term(name)
        }
    };

    let mut productions = Vec::new();
    let mut seen = BTreeSet::new();
    for (head, alternatives, line) in &rules {
        for alt in alternatives {
            let p = Production::new(
                to_symbol(head),
                alt.iter().map(|n| to_symbol(n)).collect(),
            );
            if !seen.insert(p.clone()) {
                return Err(GrammarError::DuplicateProduction {
                    line: *line,
                    production: p.to_string(),
                });
            }
            productions.push(p);
        }
    }
    Grammar::from_productions(to_symbol(&axiom_name), productions)
}

/// Canonical text form: `start:` line, then one line per head sorted by
/// name with its alternatives sorted.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut by_head: BTreeMap<&str, Vec<&Production>> = BTreeMap::new();
    for p in &g.productions {
        by_head.entry(p.head.name()).or_default().push(p);
    }
    let mut out = format!("start: {}\n", g.axiom.name());
    for (head, mut prods) in by_head {
        prods.sort_by(|a, b| a.body_names().cmp(&b.body_names()));
        let alts: Vec<String> = prods
            .iter()
            .map(|p| {
                if p.body.is_empty() {
                    EPSILON_TOKEN.to_string()
                } else {
                    p.body_names().join(" ")
                }
            })
            .collect();
        out.push_str(&format!("{head} -> {}\n", alts.join(" | ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ANBN: &str = "start: S\nS -> a S b | a b\n";

    #[test]
    fn parses_anbn() {
        let g = parse_grammar(ANBN).unwrap();
        assert_eq!(g.variables, BTreeSet::from([Symbol::var("S")]));
        assert_eq!(g.terminals, BTreeSet::from([Symbol::term("a"), Symbol::term("b")]));
        assert_eq!(g.productions.len(), 2);
        assert_eq!(g.axiom, Symbol::var("S"));
    }

    #[test]
    fn parses_epsilon_rule() {
        let g = parse_grammar("start: S\nS -> eps").unwrap();
        assert_eq!(g.productions, vec![Production::new(Symbol::var("S"), vec![])]);
        assert!(g.terminals.is_empty());
    }

    #[test]
    fn parses_example_32() {
        let text = "start: S\n\
                    S -> b A | a B\n\
                    A -> b A A | a S | a\n\
                    B -> a B B | b S | b\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.variables.len(), 3);
        assert_eq!(g.terminals.len(), 2);
        assert_eq!(g.productions.len(), 8);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n  start: S # trailing\n\nS -> a # rule\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.productions.len(), 1);
    }

    #[test]
    fn repeated_head_lines_merge() {
        let g = parse_grammar("start: S\nS -> a\nS -> b\n").unwrap();
        assert_eq!(g.productions.len(), 2);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_grammar("start: S\nS => a") {
            Err(GrammarError::Syntax { line, column, .. }) => {
                assert_eq!((line, column), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_grammar("S -> a") {
            Err(GrammarError::Syntax { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_grammar("start: S\nS -> a | | b") {
            Err(GrammarError::Syntax { line: 2, column: 10, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_grammar("start: S\nS -> a eps"),
            Err(GrammarError::Syntax { line: 2, column: 8, .. })
        ));
        assert!(matches!(
            parse_grammar("start: S\nS -> a $"),
            Err(GrammarError::Syntax { line: 2, column: 8, .. })
        ));
        assert!(parse_grammar("").is_err());
    }

    #[test]
    fn axiom_must_head_a_rule() {
        assert_eq!(
            parse_grammar("start: S\nA -> a"),
            Err(GrammarError::AxiomWithoutRules("S".into()))
        );
    }

    #[test]
    fn duplicate_productions_rejected() {
        assert!(matches!(
            parse_grammar("start: S\nS -> a | a"),
            Err(GrammarError::DuplicateProduction { line: 2, .. })
        ));
    }

    #[test]
    fn serializes_canonically() {
        let g = parse_grammar(ANBN).unwrap();
        assert_eq!(serialize_grammar(&g), "start: S\nS -> a S b | a b\n");

        let ex31 = Grammar::from_productions(
            Symbol::var("S"),
            vec![
                Production::new(Symbol::var("S"), vec![Symbol::var("A"), Symbol::var("B")]),
                Production::new(Symbol::var("S"), vec![Symbol::term("a")]),
                Production::new(Symbol::var("A"), vec![Symbol::term("a")]),
            ],
        )
        .unwrap();
        assert_eq!(serialize_grammar(&ex31), "start: S\nA -> a\nS -> A B | a\n");
    }

    #[test]
    fn zero_productions_round_trip() {
        let g = Grammar::from_productions(Symbol::var("S"), vec![]).unwrap();
        assert_eq!(serialize_grammar(&g), "start: S\n");
        assert_eq!(parse_grammar("start: S\n").unwrap(), g);
    }

    #[test]
    fn validate_reports_violations() {
        let g = parse_grammar(ANBN).unwrap();
        assert!(validate(&g).is_empty());

        let mut bad = g.clone();
        bad.axiom = Symbol::var("Z");
        let v = validate(&bad);
        assert_eq!(v, vec![Violation::AxiomNotDeclared("Z".into())]);

        let mut bad = g.clone();
        bad.productions.push(bad.productions[0].clone());
        assert_eq!(validate(&bad).len(), 1);

        let mut bad = g.clone();
        bad.productions.push(Production::new(Symbol::var("S"), vec![Symbol::term("c")]));
        assert!(matches!(validate(&bad)[0], Violation::UndeclaredSymbol { .. }));

        let mut bad = g;
        bad.terminals.insert(Symbol::term("S"));
        assert_eq!(validate(&bad), vec![Violation::SharedName("S".into())]);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("A'"));
        assert!(is_identifier("_T_a"));
        assert!(!is_identifier("eps"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
        assert!(Symbol::new(SymbolKind::Variable, "x y").is_err());
    }

    #[test]
    fn word_display() {
        assert_eq!(Word::from_chars("aabb").to_string(), "aabb");
        assert_eq!(Word::empty().to_string(), "eps");
        assert_eq!(Word::from_names(&["if", "x"]).to_string(), "if x");
        assert!(Word::new(vec![Symbol::var("S")]).is_err());
    }

    #[test]
    fn prune_ruleless_keeps_language_shape() {
        let g = Grammar::from_productions(
            Symbol::var("S"),
            vec![
                Production::new(Symbol::var("S"), vec![Symbol::var("A"), Symbol::var("B")]),
                Production::new(Symbol::var("S"), vec![Symbol::term("a")]),
                Production::new(Symbol::var("A"), vec![Symbol::term("a")]),
            ],
        )
        .unwrap();
        let p = g.prune_ruleless();
        assert!(!p.variables.contains(&Symbol::var("B")));
        assert_eq!(p.productions.len(), 2);
        let text = serialize_grammar(&p);
        assert!(parse_grammar(&text).unwrap().same_up_to_order(&p));
    }
}
