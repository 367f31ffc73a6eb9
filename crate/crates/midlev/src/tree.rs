//! Rooted trees as Dyck words with right-to-left child order, plane trees as
//! rotation classes, centroids and potentials, and the pull/push leaf moves.
//!
//! A Dyck word is read as a preorder walk: `0` descends to a new child, `1`
//! returns. The last top-level block of the word encodes the rightmost child
//! of the root, and the rotation rho re-roots the tree there.

use crate::bitstring::{decompose_u0v1, first_block_end, last_block_open, Bitstring};
use crate::Error;

/// Rotation rho: u0v1 -> 0u1v (re-root at the rightmost child).
pub fn rho(w: &Bitstring) -> Result<Bitstring, Error> {
    let (u, v) = decompose_u0v1(w)?;
    let zero = Bitstring::parse("0").unwrap();
    let one = Bitstring::parse("1").unwrap();
    Ok(Bitstring::concat(&[&zero, &u, &one, &v]))
}

/// Inverse rotation: 0u1v -> u0v1 (the first top-level block becomes the
/// rightmost child).
pub fn rho_inv(w: &Bitstring) -> Result<Bitstring, Error> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_dyck() {
        return Err(Error::NotDyck(w.to_string()));
    }
    let j = first_block_end(w);
    let u = w.slice(1, j - 1);
    let v = w.slice(j, w.len());
    let zero = Bitstring::parse("0").unwrap();
    let one = Bitstring::parse("1").unwrap();
    Ok(Bitstring::concat(&[&u, &zero, &v, &one]))
}

/// Least period of rho on `w`; divides 2n.
pub fn lambda_of(w: &Bitstring) -> usize {
    let mut cur = rho(w).expect("lambda_of needs a nonempty Dyck word");
    let mut k = 1;
    while &cur != w {
        cur = rho(&cur).unwrap();
        k += 1;
    }
    k
}

/// A plane tree: a rho-rotation class held by its lexicographically least
/// representative, with cached period, centroids and potential.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneTree {
    pub canonical: Bitstring,
    pub lambda: usize,
    /// Vertex ids of the centroid(s) in the parse of `canonical`.
    pub centroids: Vec<usize>,
    pub potential: u64,
}

/// Canonical representative: lexicographic minimum over the rho-orbit.
pub fn canonical_word(w: &Bitstring) -> Bitstring {
    let mut best = w.clone();
    let mut cur = rho(w).expect("canonical_word needs a nonempty Dyck word");
    while &cur != w {
        if cur < best {
            best = cur.clone();
        }
        cur = rho(&cur).unwrap();
    }
    best
}

pub fn canonical_plane(w: &Bitstring) -> PlaneTree {
    let canonical = canonical_word(w);
    let lambda = lambda_of(&canonical);
    let tr = Tr::parse(&canonical);
    let (centroids, potential) = tr.centroids_and_potential();
    PlaneTree { canonical, lambda, centroids, potential }
}

/// Parsed tree with explicit cyclic neighbor orders. The neighbor list of
/// the parse root is its children in word order; for every other vertex the
/// parent comes first, then the children in word order. These lists are the
/// plane embedding: they only rotate when the word is re-rooted.
#[derive(Clone, Debug)]
pub(crate) struct Tr {
    pub n_edges: usize,
    pub nbr: Vec<Vec<usize>>,
}

impl Tr {
    pub fn parse(w: &Bitstring) -> Tr {
        debug_assert!(w.is_dyck());
        let n = w.len() / 2;
        let mut nbr: Vec<Vec<usize>> = vec![vec![]; n + 1];
        let mut stack = vec![0usize];
        let mut next = 1usize;
        for i in 0..w.len() {
            if w.get(i) == 0 {
                let parent = *stack.last().unwrap();
                let child = next;
                next += 1;
                nbr[parent].push(child);
                nbr[child].push(parent);
                stack.push(child);
            } else {
                stack.pop();
            }
        }
        debug_assert_eq!(stack, vec![0]);
        Tr { n_edges: n, nbr }
    }

    pub fn vertex_count(&self) -> usize {
        self.n_edges + 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbr[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nbr[v].len() == 1
    }

    /// Parent array and depths for the tree rooted at `c` (BFS order).
    pub fn root_at(&self, c: usize) -> (Vec<usize>, Vec<usize>) {
        let nv = self.vertex_count();
        let mut parent = vec![usize::MAX; nv];
        let mut depth = vec![0usize; nv];
        let mut queue = std::collections::VecDeque::new();
        parent[c] = c;
        queue.push_back(c);
        while let Some(v) = queue.pop_front() {
            for &w in &self.nbr[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        (parent, depth)
    }

    /// Subtree sizes for the `c`-rooting.
    pub fn sizes_at(&self, c: usize, parent: &[usize]) -> Vec<usize> {
        let nv = self.vertex_count();
        let mut order = Vec::with_capacity(nv);
        let mut stack = vec![c];
        let mut seen = vec![false; nv];
        seen[c] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &self.nbr[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let mut size = vec![1usize; nv];
        for &v in order.iter().rev() {
            if v != c {
                size[parent[v]] += size[v];
            }
        }
        size
    }

    /// All vertex potentials (sum of distances) plus the minimizers.
    pub fn centroids_and_potential(&self) -> (Vec<usize>, u64) {
        let nv = self.vertex_count();
        let (parent, depth) = self.root_at(0);
        let size = self.sizes_at(0, &parent);
        let mut phi = vec![0u64; nv];
        phi[0] = depth.iter().map(|&d| d as u64).sum();
        // Preorder rewalk: phi(child) = phi(parent) + N - 2*size(child).
        let mut stack = vec![0usize];
        let mut seen = vec![false; nv];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.nbr[v] {
                if !seen[w] {
                    seen[w] = true;
                    phi[w] = phi[v] + nv as u64 - 2 * size[w] as u64;
                    stack.push(w);
                }
            }
        }
        let best = *phi.iter().min().unwrap();
        let centroids: Vec<usize> = (0..nv).filter(|&v| phi[v] == best).collect();
        debug_assert!(centroids.len() <= 2);
        if centroids.len() == 2 {
            debug_assert!(self.nbr[centroids[0]].contains(&centroids[1]));
        }
        if self.n_edges % 2 == 0 {
            debug_assert_eq!(centroids.len(), 1);
        }
        (centroids, best)
    }

    /// Position of `x` in the cyclic neighbor list of `v`.
    fn nbr_index(&self, v: usize, x: usize) -> usize {
        self.nbr[v].iter().position(|&w| w == x).expect("not a neighbor")
    }

    pub fn cyc_succ(&self, v: usize, x: usize) -> usize {
        let k = self.nbr[v].len();
        let i = self.nbr_index(v, x);
        self.nbr[v][(i + 1) % k]
    }

    pub fn cyc_pred(&self, v: usize, x: usize) -> usize {
        let k = self.nbr[v].len();
        let i = self.nbr_index(v, x);
        self.nbr[v][(i + k - 1) % k]
    }

    /// Neighbors of `v` in cyclic order starting just after `after`,
    /// excluding `after` itself.
    pub fn neighbors_after(&self, v: usize, after: usize) -> Vec<usize> {
        let k = self.nbr[v].len();
        let i = self.nbr_index(v, after);
        (1..k).map(|d| self.nbr[v][(i + d) % k]).collect()
    }

    /// Serializes the tree rooted at `root` with `last` as the rightmost
    /// child (`last` must be a neighbor of `root`).
    pub fn serialize(&self, root: usize, last: usize) -> Bitstring {
        let mut bits: Vec<u8> = Vec::with_capacity(2 * self.n_edges);
        let mut order = self.neighbors_after(root, last);
        order.push(last);
        for c in order {
            self.write_block(c, root, &mut bits);
        }
        Bitstring::from_bits(&bits)
    }

    fn write_block(&self, v: usize, parent: usize, bits: &mut Vec<u8>) {
        bits.push(0);
        for c in self.neighbors_after(v, parent) {
            self.write_block(c, v, bits);
        }
        bits.push(1);
    }

    /// The `c`-subtree block hanging at neighbor `b` of `c`, as a Dyck word
    /// `0 .. 1`.
    pub fn subtree_block(&self, c: usize, b: usize) -> Bitstring {
        let mut bits = Vec::new();
        self.write_block(b, c, &mut bits);
        Bitstring::from_bits(&bits)
    }

    /// Descend to the rightmost leaf of the `c`-subtree rooted at `b`
    /// (last child at every level).
    pub fn rightmost_leaf(&self, c: usize, b: usize) -> usize {
        let mut parent = c;
        let mut v = b;
        loop {
            let kids = self.neighbors_after(v, parent);
            match kids.last() {
                None => return v,
                Some(&k) => {
                    parent = v;
                    v = k;
                }
            }
        }
    }

    /// Descend to the leftmost leaf (first child at every level).
    pub fn leftmost_leaf(&self, c: usize, b: usize) -> usize {
        let mut parent = c;
        let mut v = b;
        loop {
            let kids = self.neighbors_after(v, parent);
            match kids.first() {
                None => return v,
                Some(&k) => {
                    parent = v;
                    v = k;
                }
            }
        }
    }

    /// Leaves of the `c`-subtree at `b`, in word order.
    pub fn leaves_in_order(&self, c: usize, b: usize) -> Vec<usize> {
        let mut out = vec![];
        fn rec(tr: &Tr, v: usize, parent: usize, out: &mut Vec<usize>) {
            let kids = tr.neighbors_after(v, parent);
            if kids.is_empty() {
                out.push(v);
            }
            for k in kids {
                rec(tr, k, v, out);
            }
        }
        rec(self, b, c, &mut out);
        out
    }
}

/// Thin/thick and four pull/push flags of a leaf relative to a target
/// vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeafFlags {
    pub thin: bool,
    pub pullable_to: bool,
    pub pushable_to: bool,
    pub pullable_from: bool,
    pub pushable_from: bool,
}

pub(crate) fn leaf_flags_in(tr: &Tr, c: usize, a: usize) -> Result<LeafFlags, Error> {
    if !tr.is_leaf(a) || a == c {
        return Err(Error::PatternMismatch {
            word: format!("vertex {}", a),
            pattern: "leaf distinct from target",
        });
    }
    let (parent, depth) = tr.root_at(c);
    let d = depth[a];
    let p1 = parent[a];
    let thin = tr.degree(p1) <= 2;
    let c_not_leaf = !tr.is_leaf(c);
    if d == 1 {
        return Ok(LeafFlags {
            thin,
            pullable_to: false,
            pushable_to: false,
            pullable_from: c_not_leaf,
            pushable_from: c_not_leaf,
        });
    }
    let p2 = parent[p1];
    // Clockwise around p1, a leaf is pullable iff nothing sits between p2
    // and a, which pins a as the rightmost child of p1 toward c.
    let pullable_to = tr.cyc_pred(p1, p2) == a;
    let pushable_to = tr.cyc_succ(p1, p2) == a;
    Ok(LeafFlags {
        thin,
        pullable_to,
        pushable_to,
        pullable_from: !pullable_to,
        pushable_from: !pushable_to,
    })
}

/// `leaf_flags` on a tree given by any rooted representative: vertex ids
/// refer to the parse of `w`.
pub fn leaf_flags(w: &Bitstring, c: usize, a: usize) -> Result<LeafFlags, Error> {
    let tr = Tr::parse(w);
    leaf_flags_in(&tr, c, a)
}

/// The ordered `c`-subtrees (clockwise blocks) of the tree parsed from `w`.
pub fn subtrees_at(w: &Bitstring, c: usize) -> Vec<Bitstring> {
    let tr = Tr::parse(w);
    tr.nbr[c].iter().map(|&b| tr.subtree_block(c, b)).collect()
}

/// pull: u0v011 -> u0v101 (detach the rightmost grandchild leaf of the root
/// and re-attach it as the root's rightmost child).
pub fn pull(x: &Bitstring) -> Result<Bitstring, Error> {
    let mismatch = || Error::PatternMismatch { word: x.to_string(), pattern: "u0v011" };
    if x.len() < 4 || !x.is_dyck() {
        return Err(mismatch());
    }
    let i0 = last_block_open(x);
    let w_len = x.len() - i0 - 2;
    if w_len < 2 || x.get(x.len() - 3) != 0 {
        return Err(mismatch());
    }
    let u = x.slice(0, i0);
    let v = x.slice(i0 + 1, x.len() - 3);
    let zero = Bitstring::parse("0").unwrap();
    let tail = Bitstring::parse("101").unwrap();
    Ok(Bitstring::concat(&[&u, &zero, &v, &tail]))
}

/// push: u0v101 -> u0v011 (inverse of pull).
pub fn push(y: &Bitstring) -> Result<Bitstring, Error> {
    let mismatch = || Error::PatternMismatch { word: y.to_string(), pattern: "u0v101" };
    if y.len() < 4 || !y.is_dyck() {
        return Err(mismatch());
    }
    let j0 = last_block_open(y);
    if j0 != y.len() - 2 || j0 < 2 {
        return Err(mismatch());
    }
    let prev = y.slice(0, j0);
    let i1 = last_block_open(&prev);
    let u = prev.slice(0, i1);
    let v = prev.slice(i1 + 1, prev.len() - 1);
    let zero = Bitstring::parse("0").unwrap();
    let tail = Bitstring::parse("011").unwrap();
    Ok(Bitstring::concat(&[&u, &zero, &v, &tail]))
}

pub fn is_pullable(x: &Bitstring) -> bool {
    pull(x).is_ok()
}

pub fn is_pushable(y: &Bitstring) -> bool {
    push(y).is_ok()
}

/// Re-roots `w` for a pull at leaf `a` toward `c`: the tree rooted at
/// p2(a, c) with rightmost child p1(a, c). Checks the hypotheses and that
/// the result matches the pullable pattern.
pub fn root_for_pull(w: &Bitstring, c: usize, a: usize) -> Result<Bitstring, Error> {
    let tr = Tr::parse(w);
    let flags = leaf_flags_in(&tr, c, a)?;
    if !flags.pullable_to {
        return Err(Error::PatternMismatch { word: w.to_string(), pattern: "leaf pullable to c" });
    }
    let (parent, _) = tr.root_at(c);
    let p1 = parent[a];
    let p2 = parent[p1];
    let x = tr.serialize(p2, p1);
    if !is_pullable(&x) {
        return Err(Error::PatternMismatch { word: x.to_string(), pattern: "u0v011" });
    }
    Ok(x)
}

/// Re-roots `w` for a push at leaf `a` toward `c`: the tree rooted at
/// p1(a, c) with rightmost child `a`.
pub fn root_for_push(w: &Bitstring, c: usize, a: usize) -> Result<Bitstring, Error> {
    let tr = Tr::parse(w);
    let flags = leaf_flags_in(&tr, c, a)?;
    if !flags.pushable_to {
        return Err(Error::PatternMismatch { word: w.to_string(), pattern: "leaf pushable to c" });
    }
    let (parent, _) = tr.root_at(c);
    let p1 = parent[a];
    let y = tr.serialize(p1, a);
    if !is_pushable(&y) {
        return Err(Error::PatternMismatch { word: y.to_string(), pattern: "u0v101" });
    }
    Ok(y)
}

fn repeat01(k: usize) -> Vec<u8> {
    let mut v = Vec::with_capacity(2 * k);
    for _ in 0..k {
        v.push(0);
        v.push(1);
    }
    v
}

/// The star with n edges, rooted at a leaf: 0(01)^{n-1}1.
pub fn star(n: usize) -> Result<Bitstring, Error> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let mut bits = vec![0u8];
    bits.extend(repeat01(n - 1));
    bits.push(1);
    Ok(Bitstring::from_bits(&bits))
}

/// The footed star: a star with one subdivided edge, written 01 s_{n-1}.
pub fn footed_star(n: usize) -> Result<Bitstring, Error> {
    if n < 4 {
        return Err(Error::UnsupportedN(n));
    }
    let s = star(n - 1)?;
    let head = Bitstring::parse("01").unwrap();
    Ok(Bitstring::concat(&[&head, &s]))
}

/// The dumbbell for odd n >= 5: (01)^{(n-1)/2} 0 (01)^{(n-1)/2} 1.
pub fn dumbbell(n: usize) -> Result<Bitstring, Error> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::UnsupportedN(n));
    }
    let k = (n - 1) / 2;
    let mut bits = repeat01(k);
    bits.push(0);
    bits.extend(repeat01(k));
    bits.push(1);
    Ok(Bitstring::from_bits(&bits))
}

/// The pushable rooted dumbbell (the rotation of d_n whose word ends with a
/// detachable 01 block); this is the form the dumbbell rule produces.
pub fn dumbbell_pushed(n: usize) -> Result<Bitstring, Error> {
    let d = dumbbell(n)?;
    rho_inv(&rho_inv(&d)?)
}

/// The ten distinguished subtree shapes driving the leaf-selection rules.
pub fn q_tree(j: usize) -> Bitstring {
    let s = match j {
        0 => "01",
        1 => "0011",
        2 => "001011",
        3 => "00100111",
        4 => "00101011",
        5 => "0010010111",
        6 => "0010100111",
        7 => "0001100111",
        8 => "0001101011",
        9 => "0010101011",
        _ => panic!("q_tree index out of range"),
    };
    Bitstring::parse(s).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        Bitstring::parse(s).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&bs("0011")).unwrap(), bs("0101"));
        assert_eq!(rho(&bs("01")).unwrap(), bs("01"));
        assert_eq!(rho_inv(&bs("0101")).unwrap(), bs("0011"));
        assert_eq!(rho(&bs("001011")).unwrap(), bs("010101"));
        assert!(rho(&Bitstring::empty()).is_err());
    }

    #[test]
    fn rho_round_trip_exhaustive() {
        for w in crate::verifier::dyck_words_up_to(7) {
            let r = rho(&w).unwrap();
            assert!(r.is_dyck());
            assert_eq!(rho_inv(&r).unwrap(), w);
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of(&bs("01")), 1);
        assert_eq!(lambda_of(&bs("0011")), 2);
        assert_eq!(lambda_of(&bs("001011")), 2);
        assert_eq!(lambda_of(&bs("000111")), 3);
        assert_eq!(lambda_of(&bs("00110011")), 4);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_word(&bs("0101")), bs("0011"));
        assert_eq!(canonical_word(&bs("01")), bs("01"));
        let w = bs("001011");
        let mut r = w.clone();
        for _ in 0..3 {
            r = rho(&r).unwrap();
        }
        assert_eq!(canonical_word(&r), canonical_word(&w));
    }

    #[test]
    fn period_divides_and_parity_law() {
        // lambda | 2n; unique centroid => lambda even; two centroids =>
        // lambda = 2n for even n, lambda in {n, 2n} for odd n.
        for w in crate::verifier::dyck_words_up_to(8) {
            let n = w.len() / 2;
            let lam = lambda_of(&w);
            assert_eq!(2 * n % lam, 0, "word {}", w);
            let pt = canonical_plane(&w);
            assert_eq!(pt.lambda, lam);
            if pt.centroids.len() == 1 {
                assert_eq!(lam % 2, 0, "word {}", w);
            } else if n % 2 == 0 {
                assert_eq!(lam, 2 * n, "word {}", w);
            } else {
                assert!(lam == n || lam == 2 * n, "word {}", w);
            }
        }
    }

    #[test]
    fn all_even_divisors_realized() {
        for n in 4..=8usize {
            let mut seen = std::collections::BTreeSet::new();
            for w in crate::verifier::dyck_words_up_to(n) {
                if w.len() == 2 * n {
                    seen.insert(lambda_of(&w));
                }
            }
            for k in 1..=2 * n {
                let expect = (2 * n) % k == 0 && (k % 2 == 0 || k == n);
                if expect {
                    assert!(seen.contains(&k), "n={} k={}", n, k);
                }
            }
        }
    }

    #[test]
    fn serialize_round_trip() {
        for w in crate::verifier::dyck_words_up_to(8) {
            let tr = Tr::parse(&w);
            let kids = tr.nbr[0].clone();
            if let Some(&last) = kids.last() {
                assert_eq!(tr.serialize(0, last), w, "word {}", w);
            }
        }
    }

    #[test]
    fn centroid_examples() {
        let pt = canonical_plane(&bs("0011"));
        assert_eq!(pt.centroids.len(), 1);
        assert_eq!(pt.potential, 2);

        let pt = canonical_plane(&bs("01"));
        assert_eq!(pt.centroids.len(), 2);
        assert_eq!(pt.potential, 1);

        let pt = canonical_plane(&bs("00101011"));
        assert_eq!(pt.centroids.len(), 1);
        assert_eq!(pt.potential, 4);

        let pt = canonical_plane(&bs("00001111"));
        assert_eq!(pt.potential, 6);

        let pt = canonical_plane(&dumbbell(5).unwrap());
        assert_eq!(pt.centroids.len(), 2);
        assert_eq!(pt.potential, 7);
    }

    #[test]
    fn subtrees_examples() {
        // Star s3 seen from its center: three single edges.
        let s3 = star(3).unwrap();
        let tr = Tr::parse(&s3);
        let (centroids, _) = tr.centroids_and_potential();
        let subs = subtrees_at(&s3, centroids[0]);
        assert_eq!(subs, vec![bs("01"), bs("01"), bs("01")]);

        // Dumbbell d5 from either centroid: one s3 block plus two single
        // edges.
        let d5 = dumbbell(5).unwrap();
        let tr = Tr::parse(&d5);
        let (centroids, _) = tr.centroids_and_potential();
        for &c in &centroids {
            let mut subs = subtrees_at(&d5, c);
            subs.sort();
            assert_eq!(subs, vec![bs("001011"), bs("01"), bs("01")]);
        }
    }

    #[test]
    fn pull_push_examples() {
        assert_eq!(pull(&bs("001011")).unwrap(), bs("001101"));
        assert_eq!(pull(&bs("010011")).unwrap(), bs("010101"));
        assert_eq!(pull(&bs("00110011")).unwrap(), bs("00110101"));
        assert!(pull(&bs("01")).is_err());
        assert!(push(&bs("0011")).is_err());
        for w in crate::verifier::dyck_words_up_to(6) {
            if let Ok(y) = pull(&w) {
                assert!(y.is_dyck());
                assert_eq!(push(&y).unwrap(), w, "word {}", w);
            }
        }
    }

    #[test]
    fn pull_drops_potential_when_centroid_sits_left() {
        // If x has a centroid inside its left part u, pulling drops the
        // plane-tree potential by one; if y has a centroid inside v, the
        // pull raised it by one. Parsing u0v011 assigns the root id 0, the
        // u vertices ids 1..=|u|/2, the bridge vertex the next id, and the
        // v vertices the following |v|/2 ids.
        let mut u_hits = 0usize;
        let mut v_hits = 0usize;
        for x in crate::verifier::dyck_words_up_to(7) {
            let y = match pull(&x) {
                Ok(y) => y,
                Err(_) => continue,
            };
            let phi_x = canonical_plane(&x).potential;
            let phi_y = canonical_plane(&y).potential;
            let i0 = last_block_open(&x);
            let zu = i0 / 2;
            let zv = (x.len() - i0 - 4) / 2;
            let u_range = 1..=zu;
            let v_range = (zu + 2)..=(zu + 1 + zv);

            let tr = Tr::parse(&x);
            let (cents_x, _) = tr.centroids_and_potential();
            if cents_x.iter().any(|c| u_range.contains(c)) {
                assert_eq!(phi_y + 1, phi_x, "word {}", x);
                u_hits += 1;
            }
            let tr_y = Tr::parse(&y);
            let (cents_y, _) = tr_y.centroids_and_potential();
            if cents_y.iter().any(|c| v_range.contains(c)) {
                assert_eq!(phi_y, phi_x + 1, "word {}", x);
                v_hits += 1;
            }
        }
        assert!(u_hits > 10 && v_hits > 10, "both clauses must fire: {} {}", u_hits, v_hits);
    }

    #[test]
    fn leaf_flag_examples() {
        // Rightmost leaf of any non-single-edge subtree is pullable toward
        // the root of the block, exhaustively at small n.
        for w in crate::verifier::dyck_words_up_to(6) {
            let tr = Tr::parse(&w);
            let (cents, _) = tr.centroids_and_potential();
            let c = cents[0];
            for &b in &tr.nbr[c] {
                if tr.subtree_block(c, b).len() >= 4 {
                    let a = tr.rightmost_leaf(c, b);
                    let flags = leaf_flags_in(&tr, c, a).unwrap();
                    assert!(flags.pullable_to, "word {} leaf {}", w, a);
                }
            }
        }
        // A leaf at distance 1 from a non-leaf c is pullable and pushable
        // from c.
        let s3 = star(3).unwrap();
        let tr = Tr::parse(&s3);
        let (cents, _) = tr.centroids_and_potential();
        let c = cents[0];
        let leaf = *tr.nbr[c].iter().find(|&&b| tr.is_leaf(b)).unwrap();
        let flags = leaf_flags_in(&tr, c, leaf).unwrap();
        assert!(flags.pullable_from && flags.pushable_from);
        // Thin means the unique neighbor has degree <= 2.
        let path = bs("000111");
        let tr = Tr::parse(&path);
        let flags = leaf_flags_in(&tr, 1, 3).unwrap();
        assert!(flags.thin);
    }

    #[test]
    fn rerooting_for_pull_matches_pattern() {
        for w in crate::verifier::dyck_words_up_to(7) {
            let tr = Tr::parse(&w);
            let (cents, _) = tr.centroids_and_potential();
            let c = cents[0];
            for a in 0..tr.vertex_count() {
                if !tr.is_leaf(a) || a == c {
                    continue;
                }
                let flags = leaf_flags_in(&tr, c, a).unwrap();
                let (_, depth) = tr.root_at(c);
                if depth[a] >= 2 {
                    if flags.pullable_to {
                        let x = root_for_pull(&w, c, a).unwrap();
                        assert!(is_pullable(&x));
                        let y = pull(&x).unwrap();
                        let d = canonical_plane(&x).potential as i64
                            - canonical_plane(&y).potential as i64;
                        assert_eq!(d.abs(), 1);
                    }
                    if flags.pushable_to {
                        let y = root_for_push(&w, c, a).unwrap();
                        assert!(is_pushable(&y));
                    }
                }
            }
        }
    }

    #[test]
    fn moved_leaf_flags_after_pull() {
        // After re-rooting for a pull, the pulled leaf becomes the root's
        // rightmost child of y = pull(x). Exhaustively, that leaf is both
        // pullable and pushable from the centroid (it hangs next to the
        // centroid-bearing branch), never pullable or pushable to it.
        let mut checked = 0usize;
        for w in crate::verifier::dyck_words_up_to(7) {
            let tr = Tr::parse(&w);
            let (cents, _) = tr.centroids_and_potential();
            let c = cents[0];
            for a in 0..tr.vertex_count() {
                if !tr.is_leaf(a) || a == c {
                    continue;
                }
                let Ok(x) = root_for_pull(&w, c, a) else { continue };
                let y = pull(&x).unwrap();
                // In y's parse the moved leaf is the last vertex created.
                let ty = Tr::parse(&y);
                let moved = ty.vertex_count() - 1;
                debug_assert!(ty.is_leaf(moved));
                let (cents_y, _) = ty.centroids_and_potential();
                for &cy in &cents_y {
                    if cy == moved {
                        continue;
                    }
                    let flags = leaf_flags_in(&ty, cy, moved).unwrap();
                    assert!(
                        flags.pullable_from && flags.pushable_from,
                        "tree {} leaf {}",
                        y,
                        moved
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn star_has_no_pullable_leaf_toward_center() {
        let s4 = star(4).unwrap();
        let tr = Tr::parse(&s4);
        let (cents, _) = tr.centroids_and_potential();
        let c = cents[0];
        for a in 0..tr.vertex_count() {
            if tr.is_leaf(a) && a != c {
                assert!(root_for_pull(&s4, c, a).is_err());
            }
        }
    }

    #[test]
    fn special_trees() {
        assert_eq!(star(4).unwrap(), bs("00101011"));
        assert_eq!(star(4).unwrap(), q_tree(4));
        assert_eq!(footed_star(4).unwrap(), bs("01001011"));
        assert_eq!(dumbbell(5).unwrap(), bs("0101001011"));
        assert_eq!(q_tree(9), bs("0010101011"));
        assert!(star(2).is_err());
        assert!(dumbbell(6).is_err());
        // The pushed dumbbell really is pushable and stays in the class.
        for n in [5usize, 7, 9] {
            let d = dumbbell(n).unwrap();
            let dp = dumbbell_pushed(n).unwrap();
            assert!(is_pushable(&dp), "n={}", n);
            assert_eq!(canonical_word(&dp), canonical_word(&d));
        }
        assert_eq!(dumbbell_pushed(5).unwrap(), bs("0100101101"));
        // The footed star is the pull image of the star as a plane tree.
        for n in [4usize, 5, 6] {
            let y = pull(&star(n).unwrap()).unwrap();
            assert_eq!(canonical_word(&y), canonical_word(&footed_star(n).unwrap()));
        }
        // Every q shape is a Dyck word.
        for j in 0..=9 {
            assert!(q_tree(j).is_dyck(), "q{}", j);
        }
    }

    #[test]
    fn pull_chain_through_q_shapes() {
        // Pulling the rightmost leaf of a q7-shaped subtree turns it into
        // the q8 shape; pulling the leftmost (thin) leaf of q8 yields q9.
        // These transitions pin the corrected q8 word: the whole tree after
        // the pull must be plane-equal to the same anchor with the expected
        // block swapped in.
        let anchored = |inner: &Bitstring| {
            let zero = bs("0");
            let one = bs("1");
            let block = Bitstring::concat(&[&zero, inner, &one]);
            let extra: Vec<Bitstring> = (0..6).map(|_| bs("01")).collect();
            let mut parts: Vec<&Bitstring> = extra.iter().collect();
            parts.push(&block);
            Bitstring::concat(&parts)
        };
        let check = |from: usize, leaf_pick: fn(&Tr, usize, usize) -> usize, to: usize| {
            let w = anchored(&q_tree(from));
            let tr = Tr::parse(&w);
            let (cents, _) = tr.centroids_and_potential();
            assert_eq!(cents, vec![0], "anchor root must be the centroid");
            let b = *tr.nbr[0].last().unwrap();
            let a = leaf_pick(&tr, 0, b);
            let x = root_for_pull(&w, 0, a).unwrap();
            let y = pull(&x).unwrap();
            let expect = anchored(&q_tree(to));
            assert_eq!(
                canonical_word(&y),
                canonical_word(&expect),
                "pulling inside q{} should produce the q{} block",
                from,
                to
            );
        };
        check(7, |tr, c, b| tr.rightmost_leaf(c, b), 8);
        check(8, |tr, c, b| tr.leftmost_leaf(c, b), 9);
    }
}
