//! Words in the free group `F_n` and substitutions by endomorphisms.

use std::fmt;

use thiserror::Error;

/// A generator or its inverse: `+i` is `a_i`, `-i` is `a_i^{-1}` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(signed_index: i32) -> Self {
        assert!(signed_index != 0, "letter index must be nonzero");
        Letter(signed_index)
    }

    pub fn gen(index: usize) -> Self {
        Letter(index as i32)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("letter index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("automorphism pair fails on generator {generator}: {direction}")]
    NotInverse { generator: usize, direction: &'static str },
}

/// A freely reduced word in the free group of rank `rank`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= rank);
        Word { rank, letters: vec![Letter::gen(index)] }
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters<I>(rank: usize, letters: I) -> Result<Self, FreeGroupError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index() > rank {
                return Err(FreeGroupError::IndexOutOfRange { index: l.index(), rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Product `self * other`, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word { rank: self.rank, letters: out }
    }

    pub fn pow(&self, k: u32) -> Word {
        let mut acc = Word::identity(self.rank);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.mul(self).mul(&u.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator * core * conjugator^{-1}`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut i = 0;
        while i < n / 2 && self.letters[i] == self.letters[n - 1 - i].inverse() {
            i += 1;
        }
        let core = Word { rank: self.rank, letters: self.letters[i..n - i].to_vec() };
        let conj = Word { rank: self.rank, letters: self.letters[..i].to_vec() };
        (core, conj)
    }

    pub fn cyclic_length(&self) -> usize {
        self.cyclic_reduce().0.len()
    }

    /// All cyclic rotations of the word (as letter sequences, not re-reduced).
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.letters.len();
        (0..n.max(1))
            .map(|k| {
                let mut v = self.letters[k.min(n)..].to_vec();
                v.extend_from_slice(&self.letters[..k.min(n)]);
                Word { rank: self.rank, letters: v }
            })
            .collect()
    }

    /// Whether the two words are conjugate in `F_n`.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let (a, _) = self.cyclic_reduce();
        let (b, _) = other.cyclic_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        a.rotations().iter().any(|r| r.letters == b.letters)
    }

    /// Substitutes `images[i-1]` for each letter `a_i` (inverted for `a_i^{-1}`).
    pub fn apply_endomorphism(&self, images: &[Word]) -> Result<Word, FreeGroupError> {
        if images.len() != self.rank {
            return Err(FreeGroupError::RankMismatch { expected: self.rank, found: images.len() });
        }
        let target_rank = images.first().map(|w| w.rank).unwrap_or(self.rank);
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.letters {
            let img = &images[l.index() - 1];
            if img.rank != target_rank {
                return Err(FreeGroupError::RankMismatch { expected: target_rank, found: img.rank });
            }
            if l.is_inverse() {
                for &m in img.letters.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &img.letters {
                    push_reduced(&mut out, m);
                }
            }
        }
        Ok(Word { rank: target_rank, letters: out })
    }
}

fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Reduces raw signed indices (`+i` generator, `-i` inverse).
pub fn free_reduce(raw: &[i32], rank: usize) -> Result<Word, FreeGroupError> {
    if let Some(&bad) = raw.iter().find(|&&x| x == 0) {
        return Err(FreeGroupError::IndexOutOfRange { index: bad as usize, rank });
    }
    Word::from_letters(rank, raw.iter().map(|&x| Letter::new(x)))
}

pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    w.cyclic_reduce()
}

pub fn apply_endomorphism(w: &Word, images: &[Word]) -> Result<Word, FreeGroupError> {
    w.apply_endomorphism(images)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::cli::syntax::format_word(self))
    }
}

/// An automorphism given together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismPair {
    pub forward: Vec<Word>,
    pub inverse: Vec<Word>,
}

impl AutomorphismPair {
    pub fn new(forward: Vec<Word>, inverse: Vec<Word>) -> Self {
        AutomorphismPair { forward, inverse }
    }

    pub fn identity(rank: usize) -> Self {
        let ids: Vec<Word> = (1..=rank).map(|i| Word::generator(rank, i)).collect();
        AutomorphismPair { forward: ids.clone(), inverse: ids }
    }

    pub fn rank(&self) -> usize {
        self.forward.len()
    }

    /// Checks that both compositions fix every generator.
    pub fn validate(&self) -> Result<(), FreeGroupError> {
        let n = self.rank();
        if self.inverse.len() != n {
            return Err(FreeGroupError::RankMismatch { expected: n, found: self.inverse.len() });
        }
        for w in self.forward.iter().chain(&self.inverse) {
            if w.rank != n {
                return Err(FreeGroupError::RankMismatch { expected: n, found: w.rank });
            }
        }
        for i in 1..=n {
            let g = Word::generator(n, i);
            // inverse applied after forward: inverse(forward(a_i))
            if self.forward[i - 1].apply_endomorphism(&self.inverse)? != g {
                return Err(FreeGroupError::NotInverse { generator: i, direction: "inverse after forward" });
            }
            if self.inverse[i - 1].apply_endomorphism(&self.forward)? != g {
                return Err(FreeGroupError::NotInverse { generator: i, direction: "forward after inverse" });
            }
        }
        Ok(())
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.apply_endomorphism(&self.forward).expect("rank checked at construction")
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        w.apply_endomorphism(&self.inverse).expect("rank checked at construction")
    }

    pub fn inverted(&self) -> Self {
        AutomorphismPair { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AutomorphismPair) -> Self {
        let forward = other.forward.iter().map(|w| self.apply(w)).collect();
        let inverse = self.inverse.iter().map(|w| other.apply_inverse(w)).collect();
        AutomorphismPair { forward, inverse }
    }

    /// `φ^h`, with negative powers taken through the recorded inverse.
    pub fn power(&self, h: i32) -> Self {
        let base = if h < 0 { self.inverted() } else { self.clone() };
        let mut acc = AutomorphismPair::identity(self.rank());
        for _ in 0..h.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    /// Elementary Nielsen move `a_i ↦ a_i a_j^{s}` (or `a_j^{s} a_i` when `left`),
    /// with its inverse. Requires `i != j`.
    pub fn nielsen_transvection(rank: usize, i: usize, j: usize, sign: i32, left: bool) -> Self {
        assert!(i != j && i >= 1 && j >= 1 && i <= rank && j <= rank);
        let gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k)).collect();
        let aj = Word::from_letters(rank, [Letter::new(sign * j as i32)]).unwrap();
        let mut fwd = gens.clone();
        let mut inv = gens;
        if left {
            fwd[i - 1] = aj.mul(&fwd[i - 1]);
            inv[i - 1] = aj.inverse().mul(&inv[i - 1]);
        } else {
            fwd[i - 1] = fwd[i - 1].mul(&aj);
            inv[i - 1] = inv[i - 1].mul(&aj.inverse());
        }
        AutomorphismPair { forward: fwd, inverse: inv }
    }

    /// `a_i ↦ a_i^{-1}`, an involution.
    pub fn nielsen_inversion(rank: usize, i: usize) -> Self {
        let mut gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k)).collect();
        gens[i - 1] = gens[i - 1].inverse();
        AutomorphismPair { forward: gens.clone(), inverse: gens }
    }

    /// Swap of two generators.
    pub fn nielsen_swap(rank: usize, i: usize, j: usize) -> Self {
        let mut gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k)).collect();
        gens.swap(i - 1, j - 1);
        AutomorphismPair { forward: gens.clone(), inverse: gens }
    }

    /// Product of `moves` random elementary Nielsen moves.
    pub fn random<R: rand::Rng + ?Sized>(rank: usize, moves: usize, rng: &mut R) -> Self {
        let mut acc = AutomorphismPair::identity(rank);
        for _ in 0..moves {
            let m = if rank < 2 {
                AutomorphismPair::nielsen_inversion(rank, 1)
            } else {
                let i = rng.gen_range(1..=rank);
                let mut j = rng.gen_range(1..rank);
                if j >= i {
                    j += 1;
                }
                match rng.gen_range(0..6) {
                    0 => AutomorphismPair::nielsen_inversion(rank, i),
                    1 => AutomorphismPair::nielsen_swap(rank, i, j),
                    k => AutomorphismPair::nielsen_transvection(
                        rank,
                        i,
                        j,
                        if k % 2 == 0 { 1 } else { -1 },
                        k >= 4,
                    ),
                }
            };
            acc = m.compose(&acc);
        }
        acc
    }
}
