//! The `cfg` command line.
//!
//! [`run`] takes the full argument vector and two output streams and returns
//! the process exit code: 0 for success or a true answer, 1 for a false
//! answer, 2 for errors and bad usage.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use cfgkit::closure::{self, parse_image_word, Substitution};
use cfgkit::decide::{self, DecideError, DEFAULT_ENUMERATION_CAP};
use cfgkit::pumping::{self, LanguagePredicate, RefutationOutcome};
use cfgkit::transform::{self, TransformError};
use cfgkit::trees::{self, DerivationTree};
use cfgkit::{parse_grammar, serialize_grammar, to_cnf, CnfGrammar, Grammar, Symbol, Word};
use clap::{Parser, Subcommand};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cfg", version, about = "Context-free grammar toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a grammar file
    Check { grammar: PathBuf },
    /// Remove ε-rules, unit rules and useless symbols
    Reduce { grammar: PathBuf },
    /// Convert to Chomsky normal form
    Cnf { grammar: PathBuf },
    /// Decide membership of a word (exit 0 if member, 1 if not)
    Member { grammar: PathBuf, word: String },
    /// Decide emptiness (exit 0 if empty)
    Empty { grammar: PathBuf },
    /// Decide finiteness (exit 0 if finite)
    Finite { grammar: PathBuf },
    /// List every word up to a length
    Enumerate {
        grammar: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Decompose a word as u v w x y and pump it
    Pump {
        grammar: PathBuf,
        word: String,
        /// Comma-separated exponents
        #[arg(long = "i", value_delimiter = ',', default_value = "0,1,2,3")]
        exponents: Vec<usize>,
    },
    /// Try to refute context-freeness of a built-in language
    Refute {
        /// One of anbncn, a2n, anbn
        #[arg(long)]
        language: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_i: usize,
    },
    /// Grammar for the union of two languages
    Union { first: PathBuf, second: PathBuf },
    /// Grammar for the concatenation of two languages
    Concat { first: PathBuf, second: PathBuf },
    /// Grammar for the Kleene star of a language
    Star { grammar: PathBuf },
    /// Substitute a language for each terminal (`--map t=file.cfg`)
    Subst {
        grammar: PathBuf,
        #[arg(long = "map", required = true)]
        maps: Vec<String>,
    },
    /// Apply a homomorphism (`--map t=word`, `eps` for the empty word)
    Hom {
        grammar: PathBuf,
        #[arg(long = "map", required = true)]
        maps: Vec<String>,
    },
    /// Print a derivation tree for a word
    Tree { grammar: PathBuf, word: String },
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

/// Standard output and exit code.
type Outcome = Result<(String, i32), Failure>;

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut note = None;
    match execute(cli.command, &mut note) {
        Ok((out, code)) => {
            let _ = stdout.write_all(out.as_bytes());
            if let Some(note) = note {
                let _ = writeln!(stderr, "cfg: {note}");
            }
            code
        }
        Err(Failure(message)) => {
            let _ = writeln!(stderr, "cfg: {message}");
            EXIT_ERROR
        }
    }
}

fn load(path: &Path) -> Result<Grammar, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_grammar(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(g: &Grammar) -> String {
    serialize_grammar(&g.prune_ruleless())
}

/// CNF of `g`; an empty language becomes a CNF grammar without productions.
fn cnf_of(g: &Grammar) -> Result<CnfGrammar, Failure> {
    match to_cnf(g) {
        Ok(c) => Ok(c),
        Err(TransformError::EmptyLanguage) => {
            Ok(CnfGrammar::new(Grammar::from_productions(g.axiom.clone(), Vec::new())?, false)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// Splits a word argument into terminals. With single-character terminals
/// the argument is read character by character, otherwise it is split on
/// whitespace. `eps` and the empty string are the empty word. Unknown
/// symbols are kept as terminals so that membership simply fails.
pub fn parse_word(g: &Grammar, text: &str) -> Word {
    let text = text.trim();
    if text.is_empty() || text == "eps" {
        return Word::empty();
    }
    let compact = g.terminals.iter().all(|t| t.name().chars().count() == 1);
    if compact && !text.contains(char::is_whitespace) {
        Word::from_chars(text)
    } else {
        Word::from_names(&text.split_whitespace().collect::<Vec<_>>())
    }
}

fn truth(answer: bool) -> (String, i32) {
    if answer {
        ("true\n".into(), EXIT_TRUE)
    } else {
        ("false\n".into(), EXIT_FALSE)
    }
}

fn is_member(g: &Grammar, w: &Word) -> Result<bool, Failure> {
    if !w.symbols().iter().all(|s| g.terminals.contains(s)) {
        return Ok(false);
    }
    let cnf = cnf_of(g)?;
    if w.is_empty() {
        return Ok(cnf.generates_epsilon);
    }
    match decide::member(&cnf, w) {
        Ok(b) => Ok(b),
        // the terminal was removed as useless
        Err(DecideError::ForeignTerminal(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn parse_maps(maps: &[String]) -> Result<Vec<(Symbol, String)>, Failure> {
    maps.iter()
        .map(|m| {
            let (t, rhs) = m
                .split_once('=')
                .ok_or_else(|| Failure(format!("--map expects t=value, got `{m}`")))?;
            let t = Symbol::new(cfgkit::SymbolKind::Terminal, t.trim())?;
            Ok((t, rhs.trim().to_string()))
        })
        .collect()
}

/// Runs a parsed command; `note` receives a diagnostic for standard error
/// that accompanies a normal answer.
fn execute(command: Command, note: &mut Option<String>) -> Outcome {
    match command {
        Command::Check { grammar } => {
            let g = load(&grammar)?;
            Ok((
                format!(
                    "ok: {} variables, {} terminals, {} productions\n",
                    g.variables.len(),
                    g.terminals.len(),
                    g.productions.len()
                ),
                EXIT_TRUE,
            ))
        }
        Command::Reduce { grammar } => {
            let g = load(&grammar)?;
            let mut out = String::new();
            match transform::reduce(&g) {
                Ok((reduced, generates_epsilon, report)) => {
                    if generates_epsilon {
                        out.push_str("# generates_epsilon\n");
                    }
                    let names = |set: &std::collections::BTreeSet<Symbol>| {
                        set.iter().map(|s| s.name().to_string()).collect::<Vec<_>>().join(" ")
                    };
                    if !report.removed_nongenerating.is_empty() {
                        out.push_str(&format!(
                            "# removed non-generating: {}\n",
                            names(&report.removed_nongenerating)
                        ));
                    }
                    if !report.removed_unreachable.is_empty() {
                        out.push_str(&format!(
                            "# removed unreachable: {}\n",
                            names(&report.removed_unreachable)
                        ));
                    }
                    out.push_str(&emit(&reduced));
                }
                Err(TransformError::EmptyLanguage) => {
                    if decide::enumerate(&g, 0)?.contains(&Word::empty()) {
                        out.push_str("# generates_epsilon\n");
                    } else {
                        out.push_str("# empty language\n");
                    }
                    out.push_str(&emit(&Grammar::from_productions(g.axiom.clone(), Vec::new())?));
                }
                Err(e) => return Err(e.into()),
            }
            Ok((out, EXIT_TRUE))
        }
        Command::Cnf { grammar } => {
            let cnf = cnf_of(&load(&grammar)?)?;
            let mut out = String::new();
            if cnf.generates_epsilon {
                out.push_str("# generates_epsilon\n");
            }
            out.push_str(&emit(&cnf.grammar));
            Ok((out, EXIT_TRUE))
        }
        Command::Member { grammar, word } => {
            let g = load(&grammar)?;
            let w = parse_word(&g, &word);
            Ok(truth(is_member(&g, &w)?))
        }
        Command::Empty { grammar } => Ok(truth(decide::is_empty(&load(&grammar)?))),
        Command::Finite { grammar } => Ok(truth(decide::is_finite(&load(&grammar)?))),
        Command::Enumerate { grammar, max_len } => {
            if max_len > DEFAULT_ENUMERATION_CAP {
                return Err(Failure(format!(
                    "--max-len {max_len} exceeds the cap {DEFAULT_ENUMERATION_CAP}"
                )));
            }
            let mut words: Vec<Word> = decide::enumerate(&load(&grammar)?, max_len)?
                .into_iter()
                .collect();
            words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let out: String = words.iter().map(|w| format!("{w}\n")).collect();
            Ok((out, EXIT_TRUE))
        }
        Command::Pump {
            grammar,
            word,
            exponents,
        } => {
            let g = load(&grammar)?;
            let z = parse_word(&g, &word);
            if !is_member(&g, &z)? {
                return Err(Failure(format!("word `{z}` is not in the language")));
            }
            let cnf = cnf_of(&g)?;
            let d = pumping::decompose(&cnf, &z)?;
            let mut out = format!("{d} n={}\n", d.constant_n);
            let mut all = true;
            for i in exponents {
                let pumped = pumping::pump(&d, i);
                let ok = decide::member(&cnf, &pumped)?;
                all &= ok;
                out.push_str(&format!("i={i} {pumped} member={ok}\n"));
            }
            Ok((out, if all { EXIT_TRUE } else { EXIT_FALSE }))
        }
        Command::Refute { language, n, max_i } => {
            let p = LanguagePredicate::builtin(&language)?;
            let witness = |n| pumping::builtin_witness(&language, n).expect("known language");
            match pumping::refute_cfl(&p, n, witness, max_i)? {
                RefutationOutcome::Refuted(cert) => Ok((cert.to_string(), EXIT_TRUE)),
                RefutationOutcome::Pumpable(report) => Ok((report.to_string(), EXIT_FALSE)),
            }
        }
        Command::Union { first, second } => {
            Ok((emit(&closure::union(&load(&first)?, &load(&second)?)), EXIT_TRUE))
        }
        Command::Concat { first, second } => {
            Ok((emit(&closure::concat(&load(&first)?, &load(&second)?)), EXIT_TRUE))
        }
        Command::Star { grammar } => Ok((emit(&closure::star(&load(&grammar)?)), EXIT_TRUE)),
        Command::Subst { grammar, maps } => {
            let g = load(&grammar)?;
            let mut f = Substitution::new();
            for (t, file) in parse_maps(&maps)? {
                f.insert(t, load(Path::new(&file))?);
            }
            Ok((emit(&closure::substitute(&g, &f)?), EXIT_TRUE))
        }
        Command::Hom { grammar, maps } => {
            let g = load(&grammar)?;
            let h: BTreeMap<Symbol, Word> = parse_maps(&maps)?
                .into_iter()
                .map(|(t, w)| (t, parse_image_word(&w)))
                .collect();
            Ok((emit(&closure::homomorphism(&g, &h)?), EXIT_TRUE))
        }
        Command::Tree { grammar, word } => {
            let g = load(&grammar)?;
            let w = parse_word(&g, &word);
            if !is_member(&g, &w)? {
                *note = Some(format!("word `{w}` is not in the language"));
                return Ok((String::new(), EXIT_FALSE));
            }
            let cnf = cnf_of(&g)?;
            let tree = match decide::parse_tree(&cnf, &w)? {
                Some(t) => t,
                None => DerivationTree::node(cnf.grammar.axiom.clone(), vec![DerivationTree::epsilon()]),
            };
            Ok((trees::render(&tree), EXIT_TRUE))
        }
    }
}
