//! The pumping lemma, executable.
//!
//! [`decompose`] extracts `z = uvwxy` from a parse tree by finding a
//! repeated variable on a longest path; [`refute_cfl`] runs the contrapositive
//! by brute force over every admissible split of a witness word.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::decide::{member, parse_tree};
use crate::exec::Strategy;
use crate::grammar::{Symbol, Word};
use crate::transform::CnfGrammar;
use crate::trees::{longest_path_length, DerivationTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PumpError {
    #[error("word `{0}` is not in the language")]
    NotAMember(String),
    #[error("word of length {len} is shorter than the pumping constant {constant}")]
    WordTooShort { len: usize, constant: u64 },
    #[error("witness `{word}` is not in language `{language}`")]
    WitnessNotInLanguage { language: String, word: String },
    #[error("unknown language `{0}` (known: anbncn, a2n, anbn)")]
    UnknownLanguage(String),
}

/// `z = u v w x y` together with the constant it was checked against.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PumpDecomposition {
    pub u: Word,
    pub v: Word,
    pub w: Word,
    pub x: Word,
    pub y: Word,
    pub constant_n: u64,
}

impl PumpDecomposition {
    /// `u v w x y`.
    pub fn word(&self) -> Word {
        pump(self, 1)
    }

    /// `|vx| >= 1` and `|vwx| <= N`.
    pub fn is_admissible(&self) -> bool {
        self.v.len() + self.x.len() >= 1
            && (self.v.len() + self.w.len() + self.x.len()) as u64 <= self.constant_n
    }

    /// `(|u|, |v|, |w|, |x|)`, the enumeration key.
    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.u.len(), self.v.len(), self.w.len(), self.x.len())
    }

    /// The split of `z` with the given part lengths.
    pub fn from_lengths(z: &Word, (lu, lv, lw, lx): (usize, usize, usize, usize), n: u64) -> PumpDecomposition {
        PumpDecomposition {
            u: z.slice(0, lu),
            v: z.slice(lu, lv),
            w: z.slice(lu + lv, lw),
            x: z.slice(lu + lv + lw, lx),
            y: z.slice(lu + lv + lw + lx, z.len() - lu - lv - lw - lx),
            constant_n: n,
        }
    }
}

impl fmt::Display for PumpDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u={} v={} w={} x={} y={}",
            self.u, self.v, self.w, self.x, self.y
        )
    }
}

/// `2^m` for a CNF grammar with `m` variables (saturating).
pub fn pumping_constant(g: &CnfGrammar) -> u64 {
    1u64.checked_shl(g.variable_count() as u32).unwrap_or(u64::MAX)
}

fn leaf_count(t: &DerivationTree) -> usize {
    if t.is_leaf() {
        usize::from(t.symbol().is_some())
    } else {
        t.children.iter().map(leaf_count).sum()
    }
}

/// Nodes on the leftmost longest root-to-leaf path, each with the offset of
/// its yield in the whole word and its yield length.
fn longest_path(t: &DerivationTree) -> Vec<(&DerivationTree, usize, usize)> {
    let mut out = Vec::new();
    let mut node = t;
    let mut offset = 0;
    loop {
        out.push((node, offset, leaf_count(node)));
        if node.is_leaf() {
            return out;
        }
        let depth = longest_path_length(node);
        let mut next = None;
        for c in &node.children {
            if next.is_none() && 1 + longest_path_length(c) == depth {
                next = Some(c);
                break;
            }
            offset += leaf_count(c);
        }
        node = next.expect("some child realizes the depth");
    }
}

/// Splits `z` by the repeated-variable argument. A parse tree for `z` is
/// recovered by CYK; on a longest path the lowest `m + 1` variable nodes
/// contain a repeated variable `A_i = A_j` (scanning bottom-up, `A_i` above).
/// Then `w` is the yield of the subtree at `A_j`, `v` and `x` are what the
/// subtree at `A_i` adds to its left and right, and `u`, `y` the rest of `z`.
/// Choosing the pair within the lowest `m + 1` variables bounds `|vwx|` by
/// `2^m`.
pub fn decompose(g: &CnfGrammar, z: &Word) -> Result<PumpDecomposition, PumpError> {
    let n = pumping_constant(g);
    if (z.len() as u64) < n {
        return Err(PumpError::WordTooShort {
            len: z.len(),
            constant: n,
        });
    }
    let tree = parse_tree(g, z)
        .ok()
        .flatten()
        .ok_or_else(|| PumpError::NotAMember(z.to_string()))?;

    let path = longest_path(&tree);
    let variables = &path[..path.len() - 1];
    let m = g.variable_count();
    let window_start = variables.len().saturating_sub(m + 1);

    let mut seen: Vec<(&Symbol, usize)> = Vec::new();
    let mut pair = None;
    for idx in (window_start..variables.len()).rev() {
        let label = variables[idx].0.symbol().expect("variable node");
        if let Some(&(_, below)) = seen.iter().find(|(s, _)| *s == label) {
            pair = Some((idx, below));
            break;
        }
        seen.push((label, idx));
    }
    let (upper, lower) = pair.expect("pigeonhole: m + 1 variable nodes over m variables");
    let (_, start_i, len_i) = variables[upper];
    let (_, start_j, len_j) = variables[lower];

    let d = PumpDecomposition {
        u: z.slice(0, start_i),
        v: z.slice(start_i, start_j - start_i),
        w: z.slice(start_j, len_j),
        x: z.slice(start_j + len_j, start_i + len_i - start_j - len_j),
        y: z.slice(start_i + len_i, z.len() - start_i - len_i),
        constant_n: n,
    };
    debug_assert_eq!(&d.word(), z);
    debug_assert!(d.is_admissible());
    Ok(d)
}

/// `u v^i w x^i y`.
pub fn pump(d: &PumpDecomposition, i: usize) -> Word {
    let mut out = d.u.clone();
    for _ in 0..i {
        out.extend(&d.v);
    }
    out.extend(&d.w);
    for _ in 0..i {
        out.extend(&d.x);
    }
    out.extend(&d.y);
    out
}

/// True iff every `pump(d, i)` with `0 <= i <= max_i` is in `L(g)`.
pub fn pump_check(g: &CnfGrammar, d: &PumpDecomposition, max_i: usize) -> bool {
    (0..=max_i).all(|i| member(g, &pump(d, i)).unwrap_or(false))
}

/// A decidable language given by a membership function.
#[derive(Clone)]
pub struct LanguagePredicate {
    pub name: String,
    pub alphabet: BTreeSet<Symbol>,
    membership: Arc<dyn Fn(&Word) -> bool + Send + Sync>,
}

impl fmt::Debug for LanguagePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguagePredicate")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet)
            .finish_non_exhaustive()
    }
}

/// Names of the built-in languages.
pub const BUILTIN_LANGUAGES: [&str; 3] = ["anbncn", "a2n", "anbn"];

/// `a^k b^k ... ` over the given letters, `k >= 1`.
fn equal_blocks(w: &Word, letters: &[&str]) -> bool {
    let k = w.len() / letters.len();
    if k == 0 || k * letters.len() != w.len() {
        return false;
    }
    w.symbols()
        .iter()
        .enumerate()
        .all(|(i, s)| s.name() == letters[i / k])
}

impl LanguagePredicate {
    pub fn new(
        name: &str,
        alphabet: BTreeSet<Symbol>,
        membership: impl Fn(&Word) -> bool + Send + Sync + 'static,
    ) -> LanguagePredicate {
        LanguagePredicate {
            name: name.to_string(),
            alphabet,
            membership: Arc::new(membership),
        }
    }

    /// Words with symbols outside the alphabet are never members.
    pub fn contains(&self, w: &Word) -> bool {
        w.symbols().iter().all(|s| self.alphabet.contains(s)) && (self.membership)(w)
    }

    /// `anbncn` = a^k b^k c^k, `a2n` = a^(2^n) with n >= 1, `anbn` = a^k b^k;
    /// k >= 1 throughout.
    pub fn builtin(name: &str) -> Result<LanguagePredicate, PumpError> {
        let alphabet = |letters: &[&str]| letters.iter().map(|l| Symbol::term(l)).collect();
        match name {
            "anbncn" => Ok(LanguagePredicate::new(name, alphabet(&["a", "b", "c"]), |w| {
                equal_blocks(w, &["a", "b", "c"])
            })),
            "anbn" => Ok(LanguagePredicate::new(name, alphabet(&["a", "b"]), |w| {
                equal_blocks(w, &["a", "b"])
            })),
            "a2n" => Ok(LanguagePredicate::new(name, alphabet(&["a"]), |w| {
                w.len() >= 2 && w.len().is_power_of_two() && w.count("a") == w.len()
            })),
            other => Err(PumpError::UnknownLanguage(other.to_string())),
        }
    }
}

/// Default witness for a built-in language and constant `n`:
/// `a^n b^n c^n`, `a^(2^n)`, and `a^⌈n/2⌉ b^⌈n/2⌉` respectively.
pub fn builtin_witness(name: &str, n: usize) -> Result<Word, PumpError> {
    let block = |letter: &str, k: usize| Word::from_names(&[letter]).repeat(k);
    match name {
        "anbncn" => Ok(block("a", n).concat(&block("b", n)).concat(&block("c", n))),
        "a2n" => Ok(block("a", 1usize << n)),
        "anbn" => {
            let k = n.div_ceil(2).max(1);
            Ok(block("a", k).concat(&block("b", k)))
        }
        other => Err(PumpError::UnknownLanguage(other.to_string())),
    }
}

/// One admissible split together with an exponent that pumps it out of the
/// language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFailure {
    pub split: PumpDecomposition,
    pub fails_at_i: usize,
}

/// Every admissible split of the witness fails for some `i <= max_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub language: String,
    pub constant_n: usize,
    pub witness: Word,
    pub max_i: usize,
    pub failures: Vec<SplitFailure>,
}

/// Splits that survived every `i <= max_i`; this choice of `(n, z, max_i)`
/// refutes nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpabilityReport {
    pub language: String,
    pub constant_n: usize,
    pub witness: Word,
    pub max_i: usize,
    pub pumpable: Vec<PumpDecomposition>,
    pub split_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefutationOutcome {
    Refuted(RefutationCertificate),
    Pumpable(PumpabilityReport),
}

/// Admissible splits of a word of length `len` for constant `n`, in
/// lexicographic `(|u|, |v|, |w|, |x|)` order.
pub fn admissible_shapes(len: usize, n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for lu in 0..=len {
        for lv in 0..=(len - lu).min(n) {
            for lw in 0..=(len - lu - lv).min(n - lv) {
                for lx in 0..=(len - lu - lv - lw).min(n - lv - lw) {
                    if lv + lx >= 1 {
                        out.push((lu, lv, lw, lx));
                    }
                }
            }
        }
    }
    out
}

/// Tries to refute context-freeness of `p` with constant `n` and witness
/// `witness_builder(n)`. Every split `z = uvwxy` with `|vwx| <= n` and
/// `|vx| >= 1` is searched for the smallest `i <= max_i` that pumps it out
/// of `p`.
pub fn refute_cfl(
    p: &LanguagePredicate,
    n: usize,
    witness_builder: impl Fn(usize) -> Word,
    max_i: usize,
) -> Result<RefutationOutcome, PumpError> {
    refute_cfl_with(p, n, witness_builder, max_i, Strategy::default())
}

pub fn refute_cfl_with(
    p: &LanguagePredicate,
    n: usize,
    witness_builder: impl Fn(usize) -> Word,
    max_i: usize,
    strategy: Strategy,
) -> Result<RefutationOutcome, PumpError> {
    let z = witness_builder(n);
    if !p.contains(&z) {
        return Err(PumpError::WitnessNotInLanguage {
            language: p.name.clone(),
            word: z.to_string(),
        });
    }
    if z.len() < n {
        return Err(PumpError::WordTooShort {
            len: z.len(),
            constant: n as u64,
        });
    }
    let shapes = admissible_shapes(z.len(), n);
    let split_count = shapes.len();
    let results = strategy.map(shapes, |shape| {
        let split = PumpDecomposition::from_lengths(&z, shape, n as u64);
        let fails_at = (0..=max_i).find(|&i| !p.contains(&pump(&split, i)));
        (split, fails_at)
    });

    let pumpable: Vec<PumpDecomposition> = results
        .iter()
        .filter(|(_, f)| f.is_none())
        .map(|(s, _)| s.clone())
        .collect();
    if pumpable.is_empty() {
        Ok(RefutationOutcome::Refuted(RefutationCertificate {
            language: p.name.clone(),
            constant_n: n,
            witness: z,
            max_i,
            failures: results
                .into_iter()
                .map(|(split, f)| SplitFailure {
                    split,
                    fails_at_i: f.expect("all fail"),
                })
                .collect(),
        }))
    } else {
        Ok(RefutationOutcome::Pumpable(PumpabilityReport {
            language: p.name.clone(),
            constant_n: n,
            witness: z,
            max_i,
            pumpable,
            split_count,
        }))
    }
}

impl RefutationCertificate {
    /// Re-checks completeness and every recorded exponent.
    pub fn verify(&self, p: &LanguagePredicate) -> bool {
        let shapes = admissible_shapes(self.witness.len(), self.constant_n);
        shapes.len() == self.failures.len()
            && shapes.iter().zip(&self.failures).all(|(shape, f)| {
                f.split.shape() == *shape
                    && f.split.word() == self.witness
                    && f.fails_at_i <= self.max_i
                    && !p.contains(&pump(&f.split, f.fails_at_i))
            })
    }
}

impl fmt::Display for RefutationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# refuted language={} n={} witness={} max_i={} splits={}",
            self.language,
            self.constant_n,
            self.witness,
            self.max_i,
            self.failures.len()
        )?;
        for fail in &self.failures {
            writeln!(f, "{} fails_at_i={}", fail.split, fail.fails_at_i)?;
        }
        Ok(())
    }
}

impl fmt::Display for PumpabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# not refuted language={} n={} witness={} max_i={} splits={} pumpable={}",
            self.language,
            self.constant_n,
            self.witness,
            self.max_i,
            self.split_count,
            self.pumpable.len()
        )?;
        for split in &self.pumpable {
            writeln!(f, "{split} pumps_through_i={}", self.max_i)?;
        }
        Ok(())
    }
}
