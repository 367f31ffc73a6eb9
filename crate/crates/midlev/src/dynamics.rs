//! The flip bijection on middle-levels vertices, its periodic paths, the
//! flip-sequence algebra (reverse / move / add), and the cycle factor of the
//! necklace graph.

use crate::bitstring::{align_start, dyck_align, last_block_open, Bitstring, Side};
use crate::tree::{canonical_word, lambda_of};
use crate::Error;

/// One application of the flip bijection. Returns the successor and the
/// 0-based index of the flipped position.
pub fn f_step(x: &Bitstring) -> (Bitstring, usize) {
    let m = x.len();
    let (side, s0) = align_start(x).expect("f needs a middle-levels vertex");
    let idx = match side {
        Side::A => {
            let ell = (m - s0) % m;
            let t = x.rotate(ell as i64).slice(1, m);
            (s0 + 1 + last_block_open(&t)) % m
        }
        Side::B => (s0 + m - 1) % m,
    };
    (x.flipped(idx), idx)
}

/// One application of the inverse bijection, with the flipped index.
pub fn f_inv_step(x: &Bitstring) -> (Bitstring, usize) {
    let m = x.len();
    let (side, s0) = align_start(x).expect("f_inv needs a middle-levels vertex");
    let idx = match side {
        Side::A => s0,
        Side::B => {
            let ell = (m - s0) % m;
            let t = x.rotate(ell as i64).slice(0, m - 1);
            let u_len = crate::bitstring::first_block_end(&t) - 2;
            (s0 + u_len + 1) % m
        }
    };
    (x.flipped(idx), idx)
}

pub fn f(x: &Bitstring) -> Bitstring {
    f_step(x).0
}

pub fn f_inv(x: &Bitstring) -> Bitstring {
    f_inv_step(x).0
}

/// Period of the flip bijection at `x`: the number of applications before
/// the walk returns to the starting necklace. Equals twice the rotation
/// period of the aligned Dyck word.
pub fn kappa(x: &Bitstring) -> usize {
    let v = dyck_align(x).expect("kappa needs a middle-levels vertex");
    2 * lambda_of(&v.dyck)
}

/// An integer sequence of flip positions (1-indexed) driving a periodic
/// path, together with its shift: the rotation that maps the vertex after
/// the last flip back onto the first vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlipSequence {
    pub entries: Vec<u32>,
    pub modulus: u32,
    /// x_1 = rotate(x_{k+1}, shift).
    pub shift: u32,
}

fn norm(v: i64, m: u32) -> u32 {
    let r = v.rem_euclid(m as i64) as u32;
    if r == 0 {
        m
    } else {
        r
    }
}

impl FlipSequence {
    pub fn new(entries: Vec<u32>, modulus: u32, shift: i64) -> Self {
        let shift = shift.rem_euclid(modulus as i64) as u32;
        FlipSequence { entries, modulus, shift }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reversal: traverse the path backwards. Entries are reversed and
    /// shifted; the shift changes sign.
    pub fn rev(&self) -> FlipSequence {
        let m = self.modulus;
        let entries =
            self.entries.iter().rev().map(|&a| norm(a as i64 + self.shift as i64, m)).collect();
        FlipSequence { entries, modulus: m, shift: (m - self.shift) % m }
    }

    /// Rotate the starting vertex one step along the path; the shift is
    /// unchanged.
    pub fn mov(&self) -> FlipSequence {
        let m = self.modulus;
        let mut entries: Vec<u32> = self.entries[1..].to_vec();
        entries.push(norm(self.entries[0] as i64 - self.shift as i64, m));
        FlipSequence { entries, modulus: m, shift: self.shift }
    }

    /// Element-wise addition; drives the rotated copy of the path.
    pub fn add(&self, i: i64) -> FlipSequence {
        let m = self.modulus;
        let entries = self.entries.iter().map(|&a| norm(a as i64 + i, m)).collect();
        FlipSequence { entries, modulus: m, shift: self.shift }
    }

    /// Replay from `start`, returning all visited vertices plus the vertex
    /// reached by the final flip.
    pub fn replay(&self, start: &Bitstring) -> Vec<Bitstring> {
        let mut out = Vec::with_capacity(self.entries.len() + 1);
        let mut cur = start.clone();
        out.push(cur.clone());
        for &a in &self.entries {
            cur = cur.flipped((a - 1) as usize);
            out.push(cur.clone());
        }
        out
    }
}

/// The rotation with `start == rotate(end, shift)`. Middle-levels words are
/// aperiodic, so the value is unique.
pub fn measure_shift(start: &Bitstring, end: &Bitstring) -> Option<u32> {
    let m = start.len() as i64;
    (0..m).find(|&s| &end.rotate(s) == start).map(|s| s as u32)
}

/// A periodic path: the walk of the flip bijection until it returns to the
/// starting necklace.
#[derive(Clone, Debug)]
pub struct PeriodicPath {
    pub vertices: Vec<Bitstring>,
    pub flips: FlipSequence,
}

impl PeriodicPath {
    pub fn kappa(&self) -> usize {
        self.vertices.len()
    }
}

/// Materializes the periodic path at `x` with its flip sequence.
pub fn periodic_path(x: &Bitstring) -> PeriodicPath {
    let m = x.len() as u32;
    let k = kappa(x);
    let mut vertices = Vec::with_capacity(k);
    let mut entries = Vec::with_capacity(k);
    let mut cur = x.clone();
    for _ in 0..k {
        vertices.push(cur.clone());
        let (next, idx) = f_step(&cur);
        entries.push(idx as u32 + 1);
        cur = next;
    }
    let shift = measure_shift(x, &cur).expect("periodic path must close on the necklace");
    PeriodicPath { vertices, flips: FlipSequence::new(entries, m, shift as i64) }
}

/// The flip sequence of the periodic path at `x`.
pub fn flip_seq(x: &Bitstring) -> FlipSequence {
    periodic_path(x).flips
}

/// One cycle of the factor, keyed by its plane tree.
#[derive(Clone, Debug)]
pub struct FactorCycle {
    pub plane: Bitstring,
    pub lambda: usize,
    /// Canonical representatives of the necklaces on the cycle, in path
    /// order.
    pub necklaces: Vec<Bitstring>,
}

/// The cycle factor of the necklace graph: one cycle per plane tree with n
/// edges, each of length twice the tree's rotation period.
pub fn cycle_factor(n: usize) -> Vec<FactorCycle> {
    let mut classes: Vec<Bitstring> = crate::verifier::dyck_words(n)
        .into_iter()
        .map(|w| canonical_word(&w))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    classes.sort();
    crate::exec::map_collect(&classes, |plane| {
        let zero = Bitstring::parse("0").unwrap();
        let x0 = Bitstring::concat(&[&zero, plane]);
        let path = periodic_path(&x0);
        let necklaces: Vec<Bitstring> =
            path.vertices.iter().map(|v| v.least_rotation()).collect();
        FactorCycle { plane: plane.clone(), lambda: lambda_of(plane), necklaces }
    })
}

/// Checks a flip-sequence/path pair for the defining property of a periodic
/// path: single-bit steps that close up on the starting necklace.
pub fn is_periodic_path(vertices: &[Bitstring], flips: &FlipSequence) -> Result<(), Error> {
    if vertices.len() != flips.entries.len() {
        return Err(Error::PatternMismatch {
            word: format!("{} vertices, {} flips", vertices.len(), flips.entries.len()),
            pattern: "one flip per vertex",
        });
    }
    let replayed = flips.replay(&vertices[0]);
    for (i, v) in vertices.iter().enumerate() {
        if &replayed[i] != v {
            return Err(Error::PatternMismatch {
                word: format!("step {}", i),
                pattern: "replay matches path",
            });
        }
    }
    let end = replayed.last().unwrap();
    match measure_shift(&vertices[0], end) {
        Some(s) if s == flips.shift => Ok(()),
        _ => Err(Error::PatternMismatch {
            word: end.to_string(),
            pattern: "closes on the starting necklace with the declared shift",
        }),
    }
}
