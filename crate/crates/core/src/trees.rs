//! Derivation trees: validity against a grammar, yields, and the
//! correspondence with derivations.
//!
//! A tree may be partial (some leaves are variables) so that it can stand
//! for an unfinished derivation; [`yield_of`] is only defined for complete
//! trees, while [`frontier`] reads the sentential form of any tree.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::grammar::{Grammar, Production, Symbol, Word, EPSILON_TOKEN};
use crate::transform::CnfGrammar;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Symbol(Symbol),
    Epsilon,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Symbol(s) => write!(f, "{s}"),
            Label::Epsilon => f.write_str(EPSILON_TOKEN),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationTree {
    pub label: Label,
    pub children: Vec<DerivationTree>,
}

/// Child indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreePath(pub Vec<usize>);

impl TreePath {
    pub fn root() -> TreePath {
        TreePath(Vec::new())
    }

    pub fn child(&self, index: usize) -> TreePath {
        let mut v = self.0.clone();
        v.push(index);
        TreePath(v)
    }
}

/// One expansion: the variable leaf at `path` is rewritten with production
/// number `production` of the grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub path: TreePath,
    pub production: usize,
}

impl DerivationStep {
    pub fn new(path: TreePath, production: usize) -> DerivationStep {
        DerivationStep { path, production }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree is partial; variable leaves: {}", .0.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "))]
    Partial(Vec<Symbol>),
    #[error("no node at path {0:?}")]
    InvalidPath(Vec<usize>),
    #[error("node at path {0:?} is not a variable leaf")]
    NotAVariableLeaf(Vec<usize>),
    #[error("production {index} rewrites `{head}`, but the leaf is `{leaf}`")]
    HeadMismatch {
        index: usize,
        head: String,
        leaf: String,
    },
    #[error("no production number {0}")]
    NoSuchProduction(usize),
    #[error("node `{0}` does not match any production")]
    UnknownProduction(String),
}

impl DerivationTree {
    pub fn leaf(symbol: Symbol) -> DerivationTree {
        DerivationTree {
            label: Label::Symbol(symbol),
            children: Vec::new(),
        }
    }

    pub fn epsilon() -> DerivationTree {
        DerivationTree {
            label: Label::Epsilon,
            children: Vec::new(),
        }
    }

    pub fn node(symbol: Symbol, children: Vec<DerivationTree>) -> DerivationTree {
        DerivationTree {
            label: Label::Symbol(symbol),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match &self.label {
            Label::Symbol(s) => Some(s),
            Label::Epsilon => None,
        }
    }

    pub fn get(&self, path: &TreePath) -> Option<&DerivationTree> {
        path.0
            .iter()
            .try_fold(self, |node, &i| node.children.get(i))
    }

    fn get_mut(&mut self, path: &[usize]) -> Option<&mut DerivationTree> {
        let mut node = self;
        for &i in path {
            node = node.children.get_mut(i)?;
        }
        Some(node)
    }

    /// The body this node's children spell out (ε children contribute nothing).
    fn child_body(&self) -> Vec<Symbol> {
        self.children.iter().filter_map(|c| c.symbol().cloned()).collect()
    }

    pub fn is_complete(&self) -> bool {
        variable_leaves(self).is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::node_count).sum::<usize>()
    }
}

fn variable_leaves(t: &DerivationTree) -> Vec<Symbol> {
    let mut out = Vec::new();
    fn walk(t: &DerivationTree, out: &mut Vec<Symbol>) {
        if t.is_leaf() {
            if let Label::Symbol(s) = &t.label {
                if s.is_variable() {
                    out.push(s.clone());
                }
            }
        }
        for c in &t.children {
            walk(c, out);
        }
    }
    walk(t, &mut out);
    out
}

fn check_node(t: &DerivationTree, g: &Grammar) -> bool {
    if t.is_leaf() {
        return match &t.label {
            Label::Epsilon => true,
            Label::Symbol(s) => g.variables.contains(s) || g.terminals.contains(s),
        };
    }
    let head = match &t.label {
        Label::Symbol(s) if s.is_variable() && g.variables.contains(s) => s,
        _ => return false,
    };
    let has_epsilon = t.children.iter().any(|c| c.label == Label::Epsilon);
    if has_epsilon && (t.children.len() != 1 || !t.children[0].is_leaf()) {
        return false;
    }
    let body = t.child_body();
    g.productions.iter().any(|p| &p.head == head && p.body == body)
        && t.children.iter().all(|c| check_node(c, g))
}

/// True iff `t` is a derivation tree of `g` rooted at the axiom. Partial
/// trees (variable leaves) are accepted.
pub fn check_tree(t: &DerivationTree, g: &Grammar) -> bool {
    t.label == Label::Symbol(g.axiom.clone()) && check_node(t, g)
}

/// Leaf labels left to right, ε leaves dropped. Variable leaves included.
pub fn frontier(t: &DerivationTree) -> Vec<Symbol> {
    let mut out = Vec::new();
    fn walk(t: &DerivationTree, out: &mut Vec<Symbol>) {
        if t.is_leaf() {
            if let Label::Symbol(s) = &t.label {
                out.push(s.clone());
            }
        }
        for c in &t.children {
            walk(c, out);
        }
    }
    walk(t, &mut out);
    out
}

/// The terminal word of a complete tree.
pub fn yield_of(t: &DerivationTree) -> Result<Word, TreeError> {
    let partial = variable_leaves(t);
    if !partial.is_empty() {
        return Err(TreeError::Partial(partial));
    }
    Ok(Word::new(frontier(t)).expect("complete tree has only terminal leaves"))
}

/// Number of edges on the longest root-to-leaf path.
pub fn longest_path_length(t: &DerivationTree) -> usize {
    t.children
        .iter()
        .map(|c| 1 + longest_path_length(c))
        .max()
        .unwrap_or(0)
}

fn expand(p: &Production) -> Vec<DerivationTree> {
    if p.body.is_empty() {
        vec![DerivationTree::epsilon()]
    } else {
        p.body.iter().cloned().map(DerivationTree::leaf).collect()
    }
}

/// Replays a derivation from the axiom, growing the tree one expansion at a
/// time.
pub fn tree_from_derivation(
    g: &Grammar,
    steps: &[DerivationStep],
) -> Result<DerivationTree, TreeError> {
    let mut tree = DerivationTree::leaf(g.axiom.clone());
    for step in steps {
        let p = g
            .productions
            .get(step.production)
            .ok_or(TreeError::NoSuchProduction(step.production))?;
        let node = tree
            .get_mut(&step.path.0)
            .ok_or_else(|| TreeError::InvalidPath(step.path.0.clone()))?;
        let leaf = match (&node.label, node.is_leaf()) {
            (Label::Symbol(s), true) if s.is_variable() => s.clone(),
            _ => return Err(TreeError::NotAVariableLeaf(step.path.0.clone())),
        };
        if leaf != p.head {
            return Err(TreeError::HeadMismatch {
                index: step.production,
                head: p.head.name().to_string(),
                leaf: leaf.name().to_string(),
            });
        }
        node.children = expand(p);
    }
    Ok(tree)
}

/// The leftmost derivation encoded by `t`: internal nodes in preorder, each
/// paired with the index of the production it applies.
pub fn leftmost_derivation(
    t: &DerivationTree,
    g: &Grammar,
) -> Result<Vec<DerivationStep>, TreeError> {
    let index: BTreeMap<(&Symbol, &[Symbol]), usize> = g
        .productions
        .iter()
        .enumerate()
        .map(|(i, p)| ((&p.head, p.body.as_slice()), i))
        .collect();
    let mut steps = Vec::new();
    let mut stack = vec![(t, TreePath::root())];
    while let Some((node, path)) = stack.pop() {
        if node.is_leaf() {
            continue;
        }
        let head = node
            .symbol()
            .ok_or_else(|| TreeError::UnknownProduction(EPSILON_TOKEN.into()))?;
        let body = node.child_body();
        let production = *index
            .get(&(head, body.as_slice()))
            .ok_or_else(|| TreeError::UnknownProduction(head.name().to_string()))?;
        steps.push(DerivationStep::new(path.clone(), production));
        for (i, c) in node.children.iter().enumerate().rev() {
            stack.push((c, path.child(i)));
        }
    }
    Ok(steps)
}

/// Indented text, one node per line, two spaces per level.
pub fn render(t: &DerivationTree) -> String {
    let mut out = String::new();
    fn walk(t: &DerivationTree, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&t.label.to_string());
        out.push('\n');
        for c in &t.children {
            walk(c, depth + 1, out);
        }
    }
    walk(t, 0, &mut out);
    out
}

/// Smallest possible longest-path length of a complete tree rooted at each
/// variable of a CNF grammar. Variables that cannot finish are absent.
fn min_heights(g: &Grammar) -> BTreeMap<Symbol, usize> {
    let mut heights: BTreeMap<Symbol, usize> = BTreeMap::new();
    loop {
        let mut changed = false;
        for p in &g.productions {
            let h = match p.body.as_slice() {
                [a] if a.is_terminal() => Some(1),
                [b, c] => match (heights.get(b), heights.get(c)) {
                    (Some(&hb), Some(&hc)) => Some(1 + hb.max(hc)),
                    _ => None,
                },
                _ => None,
            };
            if let Some(h) = h {
                let entry = heights.entry(p.head.clone()).or_insert(usize::MAX);
                if h < *entry {
                    *entry = h;
                    changed = true;
                }
            }
        }
        if !changed {
            return heights;
        }
    }
}

/// Samples a complete derivation tree of a CNF grammar, rooted at the axiom,
/// with longest path at most `max_depth` edges. At each node the production
/// is drawn uniformly among those that can still finish within the
/// remaining depth. Returns `None` if no such tree exists.
pub fn random_cnf_tree<R: Rng + ?Sized>(
    g: &CnfGrammar,
    max_depth: usize,
    rng: &mut R,
) -> Option<DerivationTree> {
    let heights = min_heights(&g.grammar);
    let mut by_head: BTreeMap<&Symbol, Vec<&Production>> = BTreeMap::new();
    for p in &g.grammar.productions {
        by_head.entry(&p.head).or_default().push(p);
    }

    fn grow<R: Rng + ?Sized>(
        v: &Symbol,
        budget: usize,
        by_head: &BTreeMap<&Symbol, Vec<&Production>>,
        heights: &BTreeMap<Symbol, usize>,
        rng: &mut R,
    ) -> DerivationTree {
        let fits = |s: &Symbol| heights.get(s).is_some_and(|&h| h < budget);
        let options: Vec<&&Production> = by_head[v]
            .iter()
            .filter(|p| match p.body.as_slice() {
                [a] => a.is_terminal(),
                [b, c] => fits(b) && fits(c),
                _ => false,
            })
            .collect();
        let p = options.choose(rng).expect("budget admits a production");
        let children = p
            .body
            .iter()
            .map(|s| {
                if s.is_terminal() {
                    DerivationTree::leaf(s.clone())
                } else {
                    grow(s, budget - 1, by_head, heights, rng)
                }
            })
            .collect();
        DerivationTree::node(v.clone(), children)
    }

    match heights.get(&g.grammar.axiom) {
        Some(&h) if h <= max_depth => {
            Some(grow(&g.grammar.axiom, max_depth, &by_head, &heights, rng))
        }
        _ => None,
    }
}
