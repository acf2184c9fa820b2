use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::sft::{Alphabet, Sft, Sym};
use super::word::{EventuallyPeriodicPoint, Word};
use crate::error::{Error, Result};

/// A one-block factor code `pi: X -> Y`.
///
/// `Y` is carried as its image presentation: the one-step relation
/// `{(pi(u), pi(v)) : u -> v allowed in X}` on the image alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCode {
    domain: Sft,
    map: Vec<Sym>,
    image: Alphabet,
    image_allowed: Vec<bool>,
    fibers: Vec<Vec<Sym>>,
}

impl FactorCode {
    /// Builds the code from a symbol-name map. The map must cover the
    /// declared domain alphabet, including symbols later trimmed away.
    pub fn new(domain: Sft, map: &HashMap<String, String>, declared: &[String]) -> Result<Self> {
        for key in map.keys() {
            if !declared.contains(key) {
                return Err(Error::UnknownSymbol(key.clone()));
            }
        }
        if let Some(missing) = declared.iter().find(|s| !map.contains_key(*s)) {
            return Err(Error::InvalidArgument(format!("code has no image for `{missing}`")));
        }
        let mut image_names: Vec<String> = Vec::new();
        let mut indices = Vec::with_capacity(domain.len());
        for name in domain.alphabet().names() {
            let target = &map[name];
            let idx = match image_names.iter().position(|n| n == target) {
                Some(i) => i,
                None => {
                    image_names.push(target.clone());
                    image_names.len() - 1
                }
            };
            indices.push(idx as Sym);
        }
        Self::from_indices(domain, Alphabet::new(image_names)?, indices)
    }

    /// Builds the code from `(domain symbol, image symbol)` pairs covering the
    /// domain alphabet.
    pub fn from_pairs(domain: Sft, pairs: &[(&str, &str)]) -> Result<Self> {
        let map: HashMap<String, String> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let declared: Vec<String> = map.keys().cloned().collect();
        Self::new(domain, &map, &declared)
    }

    pub fn from_indices(domain: Sft, image: Alphabet, map: Vec<Sym>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::InvalidArgument("code map must be total on the domain".into()));
        }
        let ny = image.len();
        if map.iter().any(|&c| c as usize >= ny) {
            return Err(Error::InvalidArgument("code maps outside the image alphabet".into()));
        }
        let mut fibers = vec![Vec::new(); ny];
        for (a, &c) in map.iter().enumerate() {
            fibers[c as usize].push(a as Sym);
        }
        if let Some(c) = fibers.iter().position(Vec::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "image symbol `{}` has no preimage",
                image.name(c as Sym)
            )));
        }
        let mut image_allowed = vec![false; ny * ny];
        for (a, b) in domain.edges() {
            image_allowed[map[a as usize] as usize * ny + map[b as usize] as usize] = true;
        }
        Ok(FactorCode {
            domain,
            map,
            image,
            image_allowed,
            fibers,
        })
    }

    pub fn identity(domain: Sft) -> Self {
        let image = domain.alphabet().clone();
        let map = (0..domain.len() as Sym).collect();
        Self::from_indices(domain, image, map).expect("identity code is valid")
    }

    pub fn domain(&self) -> &Sft {
        &self.domain
    }

    pub fn image_alphabet(&self) -> &Alphabet {
        &self.image
    }

    #[inline]
    pub fn apply(&self, a: Sym) -> Sym {
        self.map[a as usize]
    }

    pub fn apply_word(&self, word: &[Sym]) -> Vec<Sym> {
        word.iter().map(|&a| self.apply(a)).collect()
    }

    /// Domain symbols mapping to image symbol `c`, in declared order.
    pub fn fiber(&self, c: Sym) -> &[Sym] {
        &self.fibers[c as usize]
    }

    #[inline]
    pub fn image_allows(&self, c: Sym, d: Sym) -> bool {
        self.image_allowed[c as usize * self.image.len() + d as usize]
    }

    pub fn check_image_word(&self, v: &[Sym]) -> Result<()> {
        if let Some(&s) = v.iter().find(|&&s| s as usize >= self.image.len()) {
            return Err(Error::InvalidArgument(format!("image symbol index {s} out of range")));
        }
        match v.windows(2).position(|p| !self.image_allows(p[0], p[1])) {
            Some(position) => Err(Error::ForbiddenTransition { position }),
            None => Ok(()),
        }
    }

    pub fn check_point(&self, y: &EventuallyPeriodicPoint) -> Result<()> {
        let ny = self.image.len() as Sym;
        let syms = y.left_tail().iter().chain(y.center()).chain(y.right_tail());
        if syms.into_iter().any(|&s| s >= ny) {
            return Err(Error::InvalidPoint("symbol outside the image alphabet".into()));
        }
        y.validate(|a, b| self.image_allows(a, b))
    }

    /// True iff `w w` is allowed in the image presentation.
    pub fn is_image_cycle(&self, w: &[Sym]) -> bool {
        !w.is_empty()
            && self.check_image_word(w).is_ok()
            && self.image_allows(w[w.len() - 1], w[0])
    }

    /// Backward-viable symbols: `viable[i]` holds the symbols at position `i`
    /// that start a path projecting to `v[i..]`.
    fn viable_suffixes(&self, v: &[Sym]) -> Vec<Vec<bool>> {
        let n = self.domain.len();
        let mut viable = vec![vec![false; n]; v.len()];
        for i in (0..v.len()).rev() {
            for &a in self.fiber(v[i]) {
                viable[i][a as usize] = i + 1 == v.len()
                    || self
                        .domain
                        .successors(a)
                        .iter()
                        .any(|&b| viable[i + 1][b as usize]);
            }
        }
        viable
    }

    /// Number of X-blocks projecting to `v`, saturating at `u128::MAX`.
    pub fn preimage_count_saturating(&self, v: &[Sym]) -> u128 {
        if v.is_empty() {
            return 1;
        }
        let n = self.domain.len();
        let mut counts = vec![0u128; n];
        for &a in self.fiber(v[0]) {
            counts[a as usize] = 1;
        }
        for &c in &v[1..] {
            let mut next = vec![0u128; n];
            for &b in self.fiber(c) {
                next[b as usize] = self
                    .domain
                    .predecessors(b)
                    .iter()
                    .fold(0u128, |acc, &a| acc.saturating_add(counts[a as usize]));
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// All X-blocks `B` with `pi(B) = v`, in lexicographic order.
    pub fn preimage_blocks(&self, v: &[Sym], cap: usize) -> Result<Vec<Word>> {
        self.check_image_word(v)?;
        if v.is_empty() {
            return Ok(vec![Word::new(Vec::new())]);
        }
        let count = self.preimage_count_saturating(v);
        if count > cap as u128 {
            return Err(Error::EnumerationCap {
                count: if count == u128::MAX { ">= 2^128".into() } else { count.to_string() },
                cap,
            });
        }
        let viable = self.viable_suffixes(v);
        let mut out = Vec::with_capacity(count as usize);
        let mut stack = Vec::with_capacity(v.len());
        self.extend_preimages(v, &viable, &mut stack, &mut out);
        Ok(out)
    }

    fn extend_preimages(&self, v: &[Sym], viable: &[Vec<bool>], stack: &mut Vec<Sym>, out: &mut Vec<Word>) {
        let i = stack.len();
        if i == v.len() {
            out.push(Word::new(stack.clone()));
            return;
        }
        for &b in self.fiber(v[i]) {
            if !viable[i][b as usize] {
                continue;
            }
            if let Some(&a) = stack.last() {
                if !self.domain.allows(a, b) {
                    continue;
                }
            }
            stack.push(b);
            self.extend_preimages(v, viable, stack, out);
            stack.pop();
        }
    }

    /// Whether every word of the image presentation has a preimage, i.e. the
    /// image presentation equals `pi(X)`. Decided on the subset automaton
    /// tracking the possible current X-symbols.
    pub fn is_onto_image_presentation(&self) -> bool {
        let ny = self.image.len();
        let mut seen: HashSet<(Sym, BTreeSet<Sym>)> = HashSet::new();
        let mut queue = VecDeque::new();
        for c in 0..ny as Sym {
            let start: BTreeSet<Sym> = self.fiber(c).iter().copied().collect();
            if seen.insert((c, start.clone())) {
                queue.push_back((c, start));
            }
        }
        while let Some((c, set)) = queue.pop_front() {
            for d in 0..ny as Sym {
                if !self.image_allows(c, d) {
                    continue;
                }
                let next: BTreeSet<Sym> = set
                    .iter()
                    .flat_map(|&a| self.domain.successors(a).iter().copied())
                    .filter(|&b| self.apply(b) == d)
                    .collect();
                if next.is_empty() {
                    return false;
                }
                if seen.insert((d, next.clone())) {
                    queue.push_back((d, next));
                }
            }
        }
        true
    }

    /// Shortest word `c` with `from c to` allowed in the image presentation;
    /// ties broken lexicographically. Empty when `from -> to` is allowed.
    pub fn shortest_image_connector(&self, from: Sym, to: Sym) -> Option<Vec<Sym>> {
        let ny = self.image.len();
        // Breadth-first search backwards from `to` gives distances; then walk
        // forward greedily choosing the least symbol that stays on a shortest path.
        let mut dist = vec![usize::MAX; ny];
        let mut queue = VecDeque::new();
        for c in 0..ny as Sym {
            if self.image_allows(c, to) {
                dist[c as usize] = 0;
                queue.push_back(c);
            }
        }
        while let Some(d) = queue.pop_front() {
            for c in 0..ny as Sym {
                if self.image_allows(c, d) && dist[c as usize] == usize::MAX {
                    dist[c as usize] = dist[d as usize] + 1;
                    queue.push_back(c);
                }
            }
        }
        if dist[from as usize] == usize::MAX {
            return None;
        }
        let mut out = Vec::with_capacity(dist[from as usize]);
        let mut cur = from;
        while dist[cur as usize] > 0 {
            let want = dist[cur as usize] - 1;
            cur = (0..ny as Sym)
                .find(|&c| self.image_allows(cur, c) && dist[c as usize] == want)
                .expect("a shortest path continues");
            out.push(cur);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn collapse(domain: Sft) -> FactorCode {
        let declared = domain.alphabet().names().to_vec();
        let map = declared.iter().map(|s| (s.clone(), "*".to_string())).collect();
        FactorCode::new(domain, &map, &declared).unwrap()
    }

    #[test]
    fn identity_preimages_are_singletons() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let id = FactorCode::identity(g);
        let v = vec![0, 1, 0, 0];
        let pre = id.preimage_blocks(&v, 10).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(pre[0].symbols(), &v[..]);
        assert!(id.is_onto_image_presentation());
    }

    #[test]
    fn collapse_to_point_counts_blocks() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let c = collapse(g);
        assert_eq!(c.image_alphabet().len(), 1);
        assert_eq!(c.preimage_blocks(&[0; 4], 100).unwrap().len(), 8);
        assert_eq!(c.preimage_count_saturating(&[0; 4]), 8);
    }

    #[test]
    fn code_must_be_total() {
        let g = Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap();
        let map = [("1".to_string(), "a".to_string())].into_iter().collect();
        assert!(FactorCode::new(g, &map, &names(&["1", "2"])).is_err());
    }

    #[test]
    fn not_onto_image_presentation() {
        // a -> b -> c -> a with a, c -> 0 and b -> 1: the image presentation
        // allows 0 -> 0 -> 0 but X never produces `000`.
        let x = Sft::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let map = [("a", "0"), ("b", "1"), ("c", "0")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let code = FactorCode::new(x, &map, &names(&["a", "b", "c"])).unwrap();
        assert!(code.image_allows(0, 0));
        assert!(!code.is_onto_image_presentation());
        assert_eq!(code.preimage_count_saturating(&[0, 0, 0]), 0);
    }

    #[test]
    fn connector_is_shortest_and_least() {
        let x = Sft::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let id = FactorCode::identity(x);
        assert_eq!(id.shortest_image_connector(0, 1), Some(vec![]));
        assert_eq!(id.shortest_image_connector(0, 0), Some(vec![1, 2]));
        assert_eq!(id.shortest_image_connector(2, 2), Some(vec![0, 1]));
    }
}
