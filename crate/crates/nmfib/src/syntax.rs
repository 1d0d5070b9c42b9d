//! Signatures, formulas, substitutions and translations.
//!
//! Formulas print in prefix form, `or(p,neg(q))`. Bare identifiers that the
//! signature declares 0-ary are constants; every other bare identifier is a
//! variable. Skeleton variables print as `x[φ]` and cannot be parsed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("connective `{name}` has arity {expected}, applied to {found} arguments")]
    Arity { name: String, expected: usize, found: usize },
    #[error("connective `{0}` is not in the translation's domain")]
    Untranslated(String),
    #[error("translation body for `{name}` uses variable `{var}` outside p1..p{arity}")]
    BadBody { name: String, var: String, arity: usize },
    #[error("connective `{name}` declared with arities {first} and {second}")]
    Clash { name: String, first: usize, second: usize },
}

/// A finite set of connective names with arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut sig = Signature::new();
        for (name, arity) in pairs {
            sig.insert(name, arity)?;
        }
        Ok(sig)
    }

    pub fn insert(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        match self.arities.get(name) {
            Some(&a) if a != arity => Err(SyntaxError::Clash { name: name.to_string(), first: a, second: arity }),
            _ => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arities.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    /// Connectives in canonical (name) order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn union(&self, other: &Signature) -> Result<Signature, SyntaxError> {
        let mut out = self.clone();
        for (n, a) in other.iter() {
            out.insert(n, a)?;
        }
        Ok(out)
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.arities.keys().all(|k| !other.contains(k))
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.iter().all(|(n, a)| other.arity(n) == Some(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// The skeleton variable standing for a formula.
    Skel(Formula),
    App(String, Vec<Formula>),
}

struct Node {
    term: Term,
    text: String,
    depth: usize,
}

/// An immutable, cheaply clonable formula.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    fn make(term: Term) -> Formula {
        let (text, depth) = match &term {
            Term::Var(n) => (n.clone(), 0),
            Term::Skel(f) => (format!("x[{}]", f.0.text), 0),
            Term::App(n, args) if args.is_empty() => (n.clone(), 0),
            Term::App(n, args) => {
                let mut s = String::with_capacity(n.len() + 2 + args.len() * 4);
                s.push_str(n);
                s.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(&a.0.text);
                }
                s.push(')');
                let d = 1 + args.iter().map(|a| a.0.depth).max().unwrap_or(0);
                (s, d)
            }
        };
        Formula(Arc::new(Node { term, text, depth }))
    }

    pub fn var(name: &str) -> Formula {
        Formula::make(Term::Var(name.to_string()))
    }

    pub fn app(name: &str, args: Vec<Formula>) -> Formula {
        Formula::make(Term::App(name.to_string(), args))
    }

    pub fn constant(name: &str) -> Formula {
        Formula::app(name, Vec::new())
    }

    pub fn skel(of: &Formula) -> Formula {
        Formula::make(Term::Skel(of.clone()))
    }

    pub fn term(&self) -> &Term {
        &self.0.term
    }

    pub fn text(&self) -> &str {
        &self.0.text
    }

    /// Nesting depth of connectives; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.0.term, Term::Var(_) | Term::Skel(_))
    }

    pub fn head(&self) -> Option<&str> {
        match &self.0.term {
            Term::App(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Formula] {
        match &self.0.term {
            Term::App(_, a) => a,
            _ => &[],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Formula::size).sum::<usize>()
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for a in self.args() {
                a.collect_subformulas(out);
            }
        }
    }

    /// Variables, including skeleton variables.
    pub fn atoms(&self) -> BTreeSet<Formula> {
        self.subformulas().into_iter().filter(Formula::is_atomic).collect()
    }

    /// Connectives occurring in the formula.
    pub fn connectives(&self) -> BTreeSet<(String, usize)> {
        self.subformulas().iter().filter_map(|f| f.head().map(|h| (h.to_string(), f.args().len()))).collect()
    }

    pub fn check(&self, sig: &Signature) -> Result<(), SyntaxError> {
        for (name, n) in self.connectives() {
            match sig.arity(&name) {
                None => return Err(SyntaxError::UnknownConnective(name)),
                Some(a) if a != n => return Err(SyntaxError::Arity { name, expected: a, found: n }),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        if self.is_atomic() {
            return s.get(self).cloned().unwrap_or_else(|| self.clone());
        }
        let args: Vec<Formula> = self.args().iter().map(|a| a.substitute(s)).collect();
        Formula::app(self.head().unwrap(), args)
    }

    /// Applies `t`; every connective of `self` must be in its domain.
    pub fn translate(&self, t: &Translation) -> Result<Formula, SyntaxError> {
        let Some(h) = self.head() else {
            return Ok(self.clone());
        };
        let args = self.args().iter().map(|a| a.translate(t)).collect::<Result<Vec<_>, _>>()?;
        let body = t.body(h).ok_or_else(|| SyntaxError::Untranslated(h.to_string()))?;
        let s = Substitution::from_iter(
            args.into_iter().enumerate().map(|(i, a)| (Formula::var(&format!("p{}", i + 1)), a)),
        );
        Ok(body.substitute(&s))
    }

    /// `op` applied `n` times to `self`.
    pub fn nest(&self, op: &str, n: usize) -> Formula {
        (0..n).fold(self.clone(), |f, _| Formula::app(op, vec![f]))
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
        parse(text, sig)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.text == other.0.text && self.0.term == other.0.term)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.text.hash(state);
    }
}

fn tag(t: &Term) -> u8 {
    match t {
        Term::Var(_) => 0,
        Term::Skel(_) => 1,
        Term::App(..) => 2,
    }
}

impl Ord for Formula {
    /// Lexicographic on the printed form.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.text.cmp(&other.0.text).then_with(|| tag(&self.0.term).cmp(&tag(&other.0.term)))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.text)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.0.text)
    }
}

/// Sorts children before parents; ties broken canonically.
pub fn topological_order<'a, I>(fs: I) -> Vec<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut v: Vec<Formula> = fs.into_iter().cloned().collect();
    v.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
    v.dedup();
    v
}

pub fn subformula_closure<'a, I>(fs: I) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_subformulas(&mut out);
    }
    out
}

pub fn is_subformula_closed(fs: &BTreeSet<Formula>) -> bool {
    fs.iter().all(|f| f.args().iter().all(|a| fs.contains(a)))
}

/// Replaces maximal alien-headed subformulas by skeleton variables.
pub fn skeleton(f: &Formula, sig: &Signature) -> Formula {
    match f.head() {
        None => f.clone(),
        Some(h) if sig.arity(h) == Some(f.args().len()) => {
            Formula::app(h, f.args().iter().map(|a| skeleton(a, sig)).collect())
        }
        Some(_) => Formula::skel(f),
    }
}

/// Right-nested application of a binary connective; `None` when empty.
pub fn fold_right(op: &str, items: &[Formula]) -> Option<Formula> {
    let (last, init) = items.split_last()?;
    Some(init.iter().rev().fold(last.clone(), |acc, x| Formula::app(op, vec![x.clone(), acc])))
}

/// A map from atoms to formulas; unmapped atoms stay fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Formula, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: Formula, image: Formula) {
        debug_assert!(atom.is_atomic());
        self.map.insert(atom, image);
    }

    pub fn get(&self, atom: &Formula) -> Option<&Formula> {
        self.map.get(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &Formula)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl FromIterator<(Formula, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Formula, Formula)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (a, b) in iter {
            s.insert(a, b);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} := {v}")?;
        }
        f.write_str("}")
    }
}

/// Homophonic translation: each connective `c` of arity k maps to a formula
/// over the variables `p1..pk`.
#[derive(Debug, Clone, Default)]
pub struct Translation {
    map: BTreeMap<String, Formula>,
}

impl Translation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, body: Formula) {
        self.map.insert(name.to_string(), body);
    }

    pub fn with(mut self, name: &str, body: Formula) -> Self {
        self.insert(name, body);
        self
    }

    /// Maps every connective `c` of `sig` to `c(p1,..,pk)`.
    pub fn identity(sig: &Signature) -> Self {
        let mut t = Translation::new();
        for (n, a) in sig.iter() {
            t.insert(n, Formula::app(n, pvars(a)));
        }
        t
    }

    /// Checks that each body only uses `p1..pk` for the arity `k` in `source`.
    pub fn check(&self, source: &Signature) -> Result<(), SyntaxError> {
        for (n, a) in source.iter() {
            let body = self.body(n).ok_or_else(|| SyntaxError::Untranslated(n.to_string()))?;
            let allowed = pvars(a);
            for v in body.atoms() {
                if !allowed.contains(&v) {
                    return Err(SyntaxError::BadBody { name: n.to_string(), var: v.to_string(), arity: a });
                }
            }
        }
        Ok(())
    }

    pub fn body(&self, name: &str) -> Option<&Formula> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// The variables `p1..pk`.
pub fn pvars(k: usize) -> Vec<Formula> {
    (1..=k).map(|i| Formula::var(&format!("p{i}"))).collect()
}

/// A random formula over `sig` and `atoms` of depth at most `depth`.
pub fn random_formula<R: rand::Rng + ?Sized>(rng: &mut R, sig: &Signature, atoms: &[Formula], depth: usize) -> Formula {
    let conns: Vec<(&str, usize)> = sig.iter().filter(|&(_, a)| a > 0 || depth > 0).collect();
    let leaf = |rng: &mut R| atoms[rng.gen_range(0..atoms.len())].clone();
    let constants: Vec<&str> = sig.iter().filter(|&(_, a)| a == 0).map(|(n, _)| n).collect();
    if depth == 0 || conns.is_empty() || rng.gen_bool(0.3) {
        if !constants.is_empty() && rng.gen_bool(0.2) {
            return Formula::constant(constants[rng.gen_range(0..constants.len())]);
        }
        return leaf(rng);
    }
    let (name, arity) = conns[rng.gen_range(0..conns.len())];
    let args = (0..arity).map(|_| random_formula(rng, sig, atoms, depth - 1)).collect();
    Formula::app(name, args)
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            Some(c) => return self.err(format!("unexpected `{}`", c as char)),
            None => return self.err("unexpected end of input"),
        }
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let start = self.pos;
        let name = self.ident()?;
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() == Some(b')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.formula()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected `,` or `)`"),
                    }
                }
            }
            return match self.sig.arity(&name) {
                None => Err(SyntaxError::UnknownConnective(name)),
                Some(a) if a != args.len() => Err(SyntaxError::Arity { name, expected: a, found: args.len() }),
                Some(_) => Ok(Formula::app(&name, args)),
            };
        }
        match self.sig.arity(&name) {
            Some(0) => Ok(Formula::constant(&name)),
            Some(a) => {
                self.pos = start;
                Err(SyntaxError::Arity { name, expected: a, found: 0 })
            }
            None => Ok(Formula::var(&name)),
        }
    }
}

pub fn parse(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, sig };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a comma-separated list of formulas; the empty string gives none.
pub fn parse_list(text: &str, sig: &Signature) -> Result<Vec<Formula>, SyntaxError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, sig };
    let mut out = Vec::new();
    p.skip_ws();
    if p.pos == p.src.len() {
        return Ok(out);
    }
    loop {
        out.push(p.formula()?);
        p.skip_ws();
        match p.peek() {
            Some(b',') => p.pos += 1,
            None => return Ok(out),
            _ => return p.err("expected `,`"),
        }
    }
}
