//! Fixed-length bitstrings with cyclic positions, rotation, Dyck recognition,
//! and the alignment that identifies middle-levels vertices with (Dyck word,
//! offset) pairs.
//!
//! Positions are 0-indexed at the API level (`idx`); everything printed or
//! recorded in a flip sequence is 1-indexed.

use crate::Error;
use std::fmt;

/// A binary word of fixed length. Equality, ordering and hashing are
/// representation-independent; words of length <= 128 are packed into a
/// single machine word, longer ones into 64-bit limbs (most significant
/// position first in both cases). Ordering is lexicographic on the bit
/// sequence, with a proper prefix sorting first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstring {
    len: u32,
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    // Low `len` bits used; index 0 is the most significant of those.
    Small(u128),
    // Packed limbs; index 0 is the top bit of limb 0. Unused tail bits are 0.
    Wide(Vec<u64>),
}

impl Ord for Bitstring {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.len == other.len {
            if let (Repr::Small(a), Repr::Small(b)) = (&self.repr, &other.repr) {
                return a.cmp(b);
            }
        }
        let common = self.len().min(other.len());
        for i in 0..common {
            match self.get(i).cmp(&other.get(i)) {
                std::cmp::Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Bitstring {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Bitstring {
    /// The all-zero word. Length 0 is allowed and stands for the empty
    /// Dyck word that shows up in u0v1-style decompositions.
    pub fn zeros(len: usize) -> Self {
        let repr = if len <= 128 {
            Repr::Small(0)
        } else {
            Repr::Wide(vec![0; (len + 63) / 64])
        };
        Bitstring { len: len as u32, repr }
    }

    pub fn empty() -> Self {
        Self::zeros(0)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            debug_assert!(b <= 1);
            if b == 1 {
                s.set(i, true);
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut s = Self::zeros(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => s.set(i, true),
                _ => return Err(Error::BadCharacter(ch)),
            }
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, idx: usize) -> u8 {
        debug_assert!(idx < self.len());
        match &self.repr {
            Repr::Small(v) => ((v >> (self.len - 1 - idx as u32)) & 1) as u8,
            Repr::Wide(limbs) => ((limbs[idx / 64] >> (63 - (idx % 64))) & 1) as u8,
        }
    }

    #[inline]
    pub fn set(&mut self, idx: usize, one: bool) {
        debug_assert!(idx < self.len());
        match &mut self.repr {
            Repr::Small(v) => {
                let bit = 1u128 << (self.len - 1 - idx as u32);
                if one {
                    *v |= bit;
                } else {
                    *v &= !bit;
                }
            }
            Repr::Wide(limbs) => {
                let bit = 1u64 << (63 - (idx % 64));
                if one {
                    limbs[idx / 64] |= bit;
                } else {
                    limbs[idx / 64] &= !bit;
                }
            }
        }
    }

    #[inline]
    pub fn flip(&mut self, idx: usize) {
        let cur = self.get(idx);
        self.set(idx, cur == 0);
    }

    pub fn flipped(&self, idx: usize) -> Self {
        let mut c = self.clone();
        c.flip(idx);
        c
    }

    pub fn weight(&self) -> usize {
        match &self.repr {
            Repr::Small(v) => v.count_ones() as usize,
            Repr::Wide(limbs) => limbs.iter().map(|l| l.count_ones() as usize).sum(),
        }
    }

    /// Number of 0s minus number of 1s.
    pub fn deficiency(&self) -> i64 {
        self.len() as i64 - 2 * self.weight() as i64
    }

    /// Cyclic right-rotation by `i` positions: the bit at index j moves to
    /// index j + i (mod len). Negative `i` rotates left.
    pub fn rotate(&self, i: i64) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let m = self.len() as i64;
        let r = i.rem_euclid(m) as usize;
        if r == 0 {
            return self.clone();
        }
        let mut out = Self::zeros(self.len());
        for j in 0..self.len() {
            if self.get(j) == 1 {
                out.set((j + r) % self.len(), true);
            }
        }
        out
    }

    /// All distinct cyclic rotations, sorted.
    pub fn necklace(&self) -> Vec<Bitstring> {
        let mut set: Vec<Bitstring> = (0..self.len() as i64).map(|i| self.rotate(i)).collect();
        set.sort();
        set.dedup();
        set
    }

    /// Lexicographically least rotation (canonical necklace representative).
    pub fn least_rotation(&self) -> Bitstring {
        let syms: Vec<u8> = self.iter_bits().collect();
        let k = booth_least_rotation(&syms);
        self.rotate(-(k as i64))
    }

    /// True iff the word is balanced and every prefix has at least as many
    /// 0s as 1s.
    pub fn is_dyck(&self) -> bool {
        let mut depth: i64 = 0;
        for i in 0..self.len() {
            depth += if self.get(i) == 0 { 1 } else { -1 };
            if depth < 0 {
                return false;
            }
        }
        depth == 0
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Concatenation helper used by the word surgery in trees and gluing.
    pub fn concat(parts: &[&Bitstring]) -> Bitstring {
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut out = Bitstring::zeros(total);
        let mut at = 0;
        for p in parts {
            for i in 0..p.len() {
                if p.get(i) == 1 {
                    out.set(at + i, true);
                }
            }
            at += p.len();
        }
        out
    }

    /// Slice copy of indices `[from, to)`.
    pub fn slice(&self, from: usize, to: usize) -> Bitstring {
        assert!(from <= to && to <= self.len());
        let mut out = Bitstring::zeros(to - from);
        for i in from..to {
            if self.get(i) == 1 {
                out.set(i - from, true);
            }
        }
        out
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Booth's least-rotation algorithm over an arbitrary symbol slice.
/// Returns the start index of the lexicographically least rotation
/// (smallest index among ties).
pub fn booth_least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k
}

/// Which of the two middle levels a vertex belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    /// Weight n (one more 0 than 1).
    A,
    /// Weight n + 1.
    B,
}

/// A vertex of the middle-levels graph identified with its unique
/// (Dyck word, rotation offset) pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MiddleVertex {
    pub word: Bitstring,
    pub side: Side,
    /// The unique offset with `rotate(word, ell)` in aligned form.
    pub ell: usize,
    /// The length-2n Dyck word obtained by dropping the framing bit of the
    /// aligned rotation.
    pub dyck: Bitstring,
}

/// Start offset (0-indexed) of the aligned rotation: `rotate(x, ell)` starts
/// reading `x` cyclically at index `s0`, with `ell = (m - s0) % m`.
pub(crate) fn align_start(x: &Bitstring) -> Result<(Side, usize), Error> {
    let m = x.len();
    if m % 2 == 0 || m < 3 {
        return Err(Error::BadLength(m));
    }
    let n = (m - 1) / 2;
    let w = x.weight();
    let side = if w == n {
        Side::A
    } else if w == n + 1 {
        Side::B
    } else {
        return Err(Error::BadWeight { len: m, weight: w });
    };
    // Cycle lemma on the prefix-deficiency walk. Side A (total +1): start
    // after the last minimum; side B (total -1): start after the first.
    let mut depth: i64 = 0;
    let mut best: i64 = i64::MAX;
    let mut best_idx: usize = 0;
    for i in 0..m {
        depth += if x.get(i) == 0 { 1 } else { -1 };
        let better = match side {
            Side::A => depth <= best,
            Side::B => depth < best,
        };
        if better {
            best = depth;
            best_idx = i;
        }
    }
    Ok((side, (best_idx + 1) % m))
}

/// The unique alignment of a middle-levels vertex: for side A, the rotation
/// `sigma^ell(x)` is `0 . dyck`; for side B it is `dyck . 1`.
pub fn dyck_align(x: &Bitstring) -> Result<MiddleVertex, Error> {
    let m = x.len();
    let (side, s0) = align_start(x)?;
    let ell = (m - s0) % m;
    let aligned = x.rotate(ell as i64);
    let dyck = match side {
        Side::A => aligned.slice(1, m),
        Side::B => aligned.slice(0, m - 1),
    };
    debug_assert!(dyck.is_dyck(), "alignment produced a non-Dyck core for {}", x);
    Ok(MiddleVertex { word: x.clone(), side, ell, dyck })
}

/// Splits a nonempty Dyck word as u·0·v·1 with u, v Dyck (the 0/1 pair being
/// the last top-level block).
pub fn decompose_u0v1(w: &Bitstring) -> Result<(Bitstring, Bitstring), Error> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_dyck() {
        return Err(Error::NotDyck(w.to_string()));
    }
    let i0 = last_block_open(w);
    let u = w.slice(0, i0);
    let v = w.slice(i0 + 1, w.len() - 1);
    Ok((u, v))
}

/// Index of the `0` opening the last top-level block of a Dyck word.
pub(crate) fn last_block_open(w: &Bitstring) -> usize {
    let mut depth = 0i64;
    let mut last = 0usize;
    for i in 0..w.len() {
        if w.get(i) == 0 {
            if depth == 0 {
                last = i;
            }
            depth += 1;
        } else {
            depth -= 1;
        }
    }
    last
}

/// Length of the first top-level block (index of its closing `1` plus one).
pub(crate) fn first_block_end(w: &Bitstring) -> usize {
    let mut depth = 0i64;
    for i in 0..w.len() {
        depth += if w.get(i) == 0 { 1 } else { -1 };
        if depth == 0 {
            return i + 1;
        }
    }
    unreachable!("not a Dyck word")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        Bitstring::parse(s).unwrap()
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(bs("11000").rotate(1), bs("01100"));
        assert_eq!(bs("11000").rotate(0), bs("11000"));
        assert_eq!(bs("11000").rotate(5), bs("11000"));
        assert_eq!(bs("11000").rotate(-1), bs("10001"));
    }

    #[test]
    fn necklace_examples() {
        let orbit = bs("11000").necklace();
        let expect: Vec<Bitstring> =
            ["00011", "00110", "01100", "10001", "11000"].iter().map(|s| bs(s)).collect();
        assert_eq!(orbit, expect);
        assert_eq!(bs("01100").necklace(), expect);
        assert_eq!(bs("00000").necklace(), vec![bs("00000")]);
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(bs("01").deficiency(), 0);
        assert_eq!(bs("0").deficiency(), 1);
        assert_eq!(bs("111").deficiency(), -3);
    }

    #[test]
    fn dyck_examples() {
        assert!(bs("01").is_dyck());
        assert!(bs("001011").is_dyck());
        assert!(!bs("10").is_dyck());
        assert!(!bs("0110").is_dyck());
    }

    #[test]
    fn align_examples() {
        let v = dyck_align(&bs("00011")).unwrap();
        assert_eq!((v.side, v.ell), (Side::A, 0));
        assert_eq!(v.dyck, bs("0011"));

        let v = dyck_align(&bs("11000")).unwrap();
        assert_eq!((v.side, v.ell), (Side::A, 3));
        assert_eq!(v.dyck, bs("0011"));

        let v = dyck_align(&bs("01011")).unwrap();
        assert_eq!((v.side, v.ell), (Side::B, 0));
        assert_eq!(v.dyck, bs("0101"));
    }

    #[test]
    fn align_rejects_bad_input() {
        assert!(dyck_align(&bs("0011")).is_err());
        assert!(dyck_align(&bs("11111")).is_err());
    }

    #[test]
    fn align_is_unique_exhaustively() {
        use crate::verifier::weight_words;
        // Independent oracle: scan all rotations and demand exactly one hit.
        for n in 1..=6usize {
            let m = 2 * n + 1;
            for x in weight_words(m, n).into_iter().chain(weight_words(m, n + 1)) {
                let mut hits = vec![];
                for ell in 0..m {
                    let r = x.rotate(ell as i64);
                    let ok = if x.weight() == n {
                        r.get(0) == 0 && r.slice(1, m).is_dyck()
                    } else {
                        r.get(m - 1) == 1 && r.slice(0, m - 1).is_dyck()
                    };
                    if ok {
                        hits.push(ell);
                    }
                }
                assert_eq!(hits.len(), 1, "word {}", x);
                let v = dyck_align(&x).unwrap();
                assert_eq!(v.ell, hits[0], "word {}", x);
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let (u, v) = decompose_u0v1(&bs("01")).unwrap();
        assert_eq!((u.len(), v.len()), (0, 0));
        let (u, v) = decompose_u0v1(&bs("0011")).unwrap();
        assert_eq!(u.len(), 0);
        assert_eq!(v, bs("01"));
        let (u, v) = decompose_u0v1(&bs("0101")).unwrap();
        assert_eq!(u, bs("01"));
        assert_eq!(v.len(), 0);
        assert!(decompose_u0v1(&bs("10")).is_err());
    }

    #[test]
    fn dyck_grammar_closure() {
        let words = crate::verifier::dyck_words_up_to(6);
        for u in &words {
            for v in &words {
                if u.len() + v.len() + 2 > 14 {
                    continue;
                }
                let zero = bs("0");
                let one = bs("1");
                let w = Bitstring::concat(&[u, &zero, v, &one]);
                assert!(w.is_dyck());
            }
        }
    }

    #[test]
    fn booth_matches_naive() {
        for n in 1..=5usize {
            for val in 0u32..(1 << (2 * n + 1)) {
                let bits: Vec<u8> = (0..2 * n + 1).map(|i| ((val >> i) & 1) as u8).collect();
                let w = Bitstring::from_bits(&bits);
                let naive = w.necklace().into_iter().next().unwrap();
                assert_eq!(w.least_rotation(), naive, "word {}", w);
            }
        }
    }

    #[test]
    fn necklace_size_divides_length() {
        for len in 1..=12usize {
            for val in 0u32..(1u32 << len) {
                let bits: Vec<u8> = (0..len).map(|i| ((val >> i) & 1) as u8).collect();
                let w = Bitstring::from_bits(&bits);
                assert_eq!(len % w.necklace().len(), 0, "word {}", w);
            }
        }
    }

    #[test]
    fn wide_representation_round_trip() {
        let text: String = (0..200).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let w = bs(&text);
        assert_eq!(w.to_string(), text);
        assert_eq!(w.rotate(7).rotate(-7), w);
        assert_eq!(w.rotate(200), w);
        assert_eq!(w.weight(), 67);
    }

    #[test]
    fn dyck_enumeration_counts_are_catalan() {
        let all = crate::verifier::dyck_words_up_to(7);
        let counts: Vec<usize> =
            (1..=7).map(|n| all.iter().filter(|w| w.len() == 2 * n).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42, 132, 429]);
    }

    proptest! {
        #[test]
        fn rotation_group_action(bits in proptest::collection::vec(0u8..2, 1..40),
                                 i in -100i64..100, j in -100i64..100) {
            let w = Bitstring::from_bits(&bits);
            prop_assert_eq!(w.rotate(i + j), w.rotate(j).rotate(i));
            prop_assert_eq!(w.rotate(i).rotate(-i), w.clone());
        }

        #[test]
        fn least_rotation_is_invariant(bits in proptest::collection::vec(0u8..2, 1..40),
                                       i in 0i64..40) {
            let w = Bitstring::from_bits(&bits);
            prop_assert_eq!(w.least_rotation(), w.rotate(i).least_rotation());
        }
    }
}
