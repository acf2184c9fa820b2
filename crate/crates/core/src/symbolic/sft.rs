use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::word::Word;
use crate::error::{Error, Result};

/// Index of a symbol inside an [`Alphabet`].
pub type Sym = u32;

/// Blocks beyond this count are never materialized by enumeration helpers.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// An ordered finite set of opaque symbol names.
///
/// Symbols are addressed by their position in declaration order, and every
/// order-dependent output in the crate (enumerations, tie-breaks) uses that
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid symbol name `{name}`")));
            }
            if index.insert(name.clone(), i as Sym).is_some() {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Alphabet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn index_of(&self, name: &str) -> Result<Sym> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word.
    ///
    /// Whitespace-separated tokens are symbol names, optionally with a
    /// repetition suffix `sym^k`. Without whitespace, and when every symbol
    /// is a single character, the text is split into characters.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if !text.contains(char::is_whitespace) {
            if let Ok(s) = self.index_of(text) {
                return Ok(vec![s]);
            }
            if self.single_char() && !text.contains('^') {
                return text
                    .chars()
                    .map(|c| self.index_of(c.encode_utf8(&mut [0; 4])))
                    .collect();
            }
        }
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            if let Ok(s) = self.index_of(token) {
                out.push(s);
                continue;
            }
            match token.rsplit_once('^') {
                Some((name, reps)) => {
                    let s = self.index_of(name)?;
                    let reps: usize = reps
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad repetition count in `{token}`")))?;
                    out.extend(std::iter::repeat_n(s, reps));
                }
                None => return Err(Error::UnknownSymbol(token.to_string())),
            }
        }
        Ok(out)
    }

    /// Renders a word: concatenated for single-character alphabets,
    /// space-separated otherwise.
    pub fn render(&self, word: &[Sym]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// A one-step shift of finite type given by an allowed-transition relation
/// on a finite alphabet. Always trimmed: every symbol has a predecessor and
/// a successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    allowed: Vec<bool>,
    succ: Vec<Vec<Sym>>,
    pred: Vec<Vec<Sym>>,
    trimmed: Vec<String>,
}

impl Sft {
    /// Builds the system from symbol names and name pairs, trimming
    /// inessential symbols recursively.
    pub fn new<S: AsRef<str>>(alphabet: &[S], edges: &[(S, S)]) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet.iter().map(|s| s.as_ref().to_string()))?;
        let mut idx = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            idx.push((alphabet.index_of(u.as_ref())?, alphabet.index_of(v.as_ref())?));
        }
        Self::from_indices(alphabet, idx)
    }

    pub fn from_indices<I>(alphabet: Alphabet, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Sym, Sym)>,
    {
        let n = alphabet.len();
        let mut allowed = vec![false; n * n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range")));
            }
            allowed[u as usize * n + v as usize] = true;
        }

        // Remove symbols without a predecessor or successor, round by round.
        let mut alive = vec![true; n];
        let mut trimmed = Vec::new();
        loop {
            let dead: Vec<usize> = (0..n)
                .filter(|&a| alive[a])
                .filter(|&a| {
                    let has_out = (0..n).any(|b| alive[b] && allowed[a * n + b]);
                    let has_in = (0..n).any(|b| alive[b] && allowed[b * n + a]);
                    !(has_out && has_in)
                })
                .collect();
            if dead.is_empty() {
                break;
            }
            for a in dead {
                alive[a] = false;
                trimmed.push(alphabet.name(a as Sym).to_string());
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&a| alive[a]).collect();
        if keep.is_empty() {
            return Err(Error::Degenerate);
        }

        let new_alpha = Alphabet::new(keep.iter().map(|&a| alphabet.name(a as Sym).to_string()))?;
        let m = keep.len();
        let mut new_allowed = vec![false; m * m];
        let mut succ = vec![Vec::new(); m];
        let mut pred = vec![Vec::new(); m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if allowed[a * n + b] {
                    new_allowed[i * m + j] = true;
                    succ[i].push(j as Sym);
                    pred[j].push(i as Sym);
                }
            }
        }
        Ok(Sft {
            alphabet: new_alpha,
            allowed: new_allowed,
            succ,
            pred,
            trimmed,
        })
    }

    /// The full shift on the given symbols.
    pub fn full(alphabet: Alphabet) -> Self {
        let n = alphabet.len() as Sym;
        let edges: Vec<_> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        Self::from_indices(alphabet, edges).expect("full shift is never degenerate")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Names of symbols removed while trimming, in removal order.
    pub fn trimmed_symbols(&self) -> &[String] {
        &self.trimmed
    }

    #[inline]
    pub fn allows(&self, a: Sym, b: Sym) -> bool {
        self.allowed[a as usize * self.len() + b as usize]
    }

    pub fn successors(&self, a: Sym) -> &[Sym] {
        &self.succ[a as usize]
    }

    pub fn predecessors(&self, a: Sym) -> &[Sym] {
        &self.pred[a as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Sym, Sym)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a as Sym, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_allowed_word(&self, word: &[Sym]) -> bool {
        self.check_word(word).is_ok()
    }

    pub fn check_word(&self, word: &[Sym]) -> Result<()> {
        if let Some(&s) = word.iter().find(|&&s| s as usize >= self.len()) {
            return Err(Error::InvalidArgument(format!("symbol index {s} out of range")));
        }
        match word.windows(2).position(|p| !self.allows(p[0], p[1])) {
            Some(position) => Err(Error::ForbiddenTransition { position }),
            None => Ok(()),
        }
    }

    fn reach(&self, start: Sym, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(a) = queue.pop_front() {
            let next = if forward { self.successors(a) } else { self.predecessors(a) };
            for &b in next {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// True iff every ordered pair of symbols is joined by an allowed word.
    pub fn is_irreducible(&self) -> bool {
        self.reach(0, true).iter().all(|&r| r) && self.reach(0, false).iter().all(|&r| r)
    }

    /// |B_n(X)| by the transfer recurrence.
    pub fn block_count(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::from(1u32);
        }
        let mut counts = vec![BigUint::from(1u32); self.len()];
        for _ in 1..n {
            let mut next = vec![BigUint::zero(); self.len()];
            for (a, c) in counts.iter().enumerate() {
                for &b in self.successors(a as Sym) {
                    next[b as usize] += c;
                }
            }
            counts = next;
        }
        counts.into_iter().sum()
    }

    /// All allowed words of length `n` in lexicographic (declared) order.
    pub fn blocks(&self, n: usize, cap: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::InvalidArgument("block length must be at least 1".into()));
        }
        let count = self.block_count(n);
        if count.to_usize().is_none_or(|c| c > cap) {
            return Err(Error::EnumerationCap {
                count: count.to_string(),
                cap,
            });
        }
        let mut out = Vec::new();
        let mut stack: Vec<Sym> = Vec::with_capacity(n);
        fn rec(sft: &Sft, n: usize, stack: &mut Vec<Sym>, out: &mut Vec<Word>) {
            if stack.len() == n {
                out.push(Word::new(stack.clone()));
                return;
            }
            let choices: Vec<Sym> = match stack.last() {
                None => (0..sft.len() as Sym).collect(),
                Some(&a) => sft.successors(a).to_vec(),
            };
            for b in choices {
                stack.push(b);
                rec(sft, n, stack, out);
                stack.pop();
            }
        }
        rec(self, n, &mut stack, &mut out);
        Ok(out)
    }
}
