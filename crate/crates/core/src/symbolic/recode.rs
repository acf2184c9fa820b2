use std::collections::{BTreeSet, HashMap};

use super::code::FactorCode;
use super::sft::{Alphabet, Sft, Sym, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

/// The `k`-block presentation of a factor code.
///
/// Symbols of the recoded domain are the allowed `k`-blocks of `X`, with an
/// edge `u -> v` iff the blocks overlap in `k - 1` symbols. The recoded image
/// alphabet consists of the `k`-blocks `pi(u)`, so the recoded code is again
/// one-block and a word of length `n >= k` corresponds to the recoded word of
/// its `n - k + 1` sliding blocks, on both sides of the code.
#[derive(Debug, Clone)]
pub struct Recoding {
    k: usize,
    code: FactorCode,
    blocks: Vec<Vec<Sym>>,
    block_index: HashMap<Vec<Sym>, Sym>,
    image_blocks: Vec<Vec<Sym>>,
    image_index: HashMap<Vec<Sym>, Sym>,
}

fn join_names(alpha: &Alphabet, word: &[Sym]) -> String {
    if alpha.names().iter().all(|n| n.chars().count() == 1) {
        alpha.render(word)
    } else {
        word.iter().map(|&s| alpha.name(s)).collect::<Vec<_>>().join("_")
    }
}

impl Recoding {
    pub fn new(code: &FactorCode, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("recoding window must be at least 1".into()));
        }
        let x = code.domain();
        let blocks: Vec<Vec<Sym>> = x
            .blocks(k, DEFAULT_ENUMERATION_CAP)?
            .into_iter()
            .map(|w| w.into_symbols())
            .collect();
        let block_index: HashMap<Vec<Sym>, Sym> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i as Sym))
            .collect();

        let image_set: BTreeSet<Vec<Sym>> = blocks.iter().map(|b| code.apply_word(b)).collect();
        let image_blocks: Vec<Vec<Sym>> = image_set.into_iter().collect();
        let image_index: HashMap<Vec<Sym>, Sym> = image_blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i as Sym))
            .collect();

        let mut edges = Vec::new();
        for (i, u) in blocks.iter().enumerate() {
            for &b in x.successors(u[k - 1]) {
                let mut v = u[1..].to_vec();
                v.push(b);
                edges.push((i as Sym, block_index[&v]));
            }
        }
        let alpha = Alphabet::new(blocks.iter().map(|b| join_names(x.alphabet(), b)))?;
        let image_alpha =
            Alphabet::new(image_blocks.iter().map(|b| join_names(code.image_alphabet(), b)))?;
        let sft = Sft::from_indices(alpha, edges)?;
        debug_assert!(sft.trimmed_symbols().is_empty());
        let map = blocks
            .iter()
            .map(|b| image_index[&code.apply_word(b)])
            .collect();
        let recoded = FactorCode::from_indices(sft, image_alpha, map)?;
        Ok(Recoding {
            k,
            code: recoded,
            blocks,
            block_index,
            image_blocks,
            image_index,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn code(&self) -> &FactorCode {
        &self.code
    }

    pub fn sft(&self) -> &Sft {
        self.code.domain()
    }

    /// Original `k`-block behind a recoded domain symbol.
    pub fn block(&self, s: Sym) -> &[Sym] {
        &self.blocks[s as usize]
    }

    pub fn image_block(&self, s: Sym) -> &[Sym] {
        &self.image_blocks[s as usize]
    }

    fn slide(word: &[Sym], k: usize, index: &HashMap<Vec<Sym>, Sym>) -> Option<Vec<Sym>> {
        if word.len() < k {
            return None;
        }
        word.windows(k).map(|w| index.get(w).copied()).collect()
    }

    /// Original X-word (length at least `k`) to its recoded word.
    pub fn encode(&self, word: &[Sym]) -> Option<Vec<Sym>> {
        Self::slide(word, self.k, &self.block_index)
    }

    /// Original image word to the recoded image word; `None` if some
    /// `k`-block of it has no preimage.
    pub fn encode_image(&self, v: &[Sym]) -> Option<Vec<Sym>> {
        Self::slide(v, self.k, &self.image_index)
    }

    /// A cycle word `w` of the image to the recoded cycle word of the same
    /// length, reading the blocks of `w w w ...` starting at each phase.
    pub fn encode_image_cycle(&self, w: &[Sym]) -> Option<Vec<Sym>> {
        if w.is_empty() {
            return None;
        }
        let q = w.len();
        (0..q)
            .map(|i| {
                let block: Vec<Sym> = (0..self.k).map(|j| w[(i + j) % q]).collect();
                self.image_index.get(&block).copied()
            })
            .collect()
    }

    fn unslide(word: &[Sym], blocks: &[Vec<Sym>]) -> Vec<Sym> {
        let mut out = Vec::with_capacity(word.len() + blocks.first().map_or(0, Vec::len));
        if let Some(&first) = word.first() {
            out.extend_from_slice(&blocks[first as usize]);
            for &s in &word[1..] {
                out.push(*blocks[s as usize].last().unwrap());
            }
        }
        out
    }

    pub fn decode(&self, word: &[Sym]) -> Vec<Sym> {
        Self::unslide(word, &self.blocks)
    }

    pub fn decode_image(&self, word: &[Sym]) -> Vec<Sym> {
        Self::unslide(word, &self.image_blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> FactorCode {
        FactorCode::identity(Sft::new(&["1", "2"], &[("1", "1"), ("1", "2"), ("2", "1")]).unwrap())
    }

    #[test]
    fn k1_is_identity_recoding() {
        let g = golden();
        let r = Recoding::new(&g, 1).unwrap();
        assert_eq!(r.sft().len(), 2);
        assert_eq!(r.sft().edge_count(), 3);
        assert_eq!(r.encode(&[0, 1, 0]).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn golden_two_block() {
        let r = Recoding::new(&golden(), 2).unwrap();
        assert_eq!(r.sft().alphabet().names(), &["11", "12", "21"]);
        // Overlap oracle: count pairs (u, v) of 2-blocks with u[1] == v[0].
        let blocks = [[0, 0], [0, 1], [1, 0]];
        let oracle = blocks
            .iter()
            .flat_map(|u| blocks.iter().map(move |v| (u, v)))
            .filter(|(u, v)| u[1] == v[0])
            .count();
        assert_eq!(oracle, 5);
        assert_eq!(r.sft().edge_count(), oracle);
    }

    #[test]
    fn round_trip() {
        let r = Recoding::new(&golden(), 3).unwrap();
        let w = vec![0, 0, 1, 0, 1, 0, 0];
        let enc = r.encode(&w).unwrap();
        assert_eq!(enc.len(), w.len() - 2);
        assert_eq!(r.decode(&enc), w);
        assert!(r.encode(&[1, 1, 0]).is_none());
    }
}
