//! The arc-labeled gluing multigraph on plane trees and the deterministic
//! spanning selection that picks one gluing pair per non-star tree.
//!
//! The selection re-derives everything locally from any rooted
//! representative: centroid, clockwise subtree ordering (lexicographically
//! minimal via Booth's algorithm on a separator-joined string), a
//! distinguished subtree, and a leaf to pull or push. Determinism across
//! representatives is what lets the generator reconstruct the same spanning
//! tree one vertex at a time.

use crate::bitstring::{booth_least_rotation, Bitstring};
use crate::gluing::{all_gluing_pairs, GluingPair};
use crate::tree::{
    canonical_word, dumbbell, is_pullable, is_pushable, leaf_flags_in, pull, push, q_tree, star,
    Tr,
};
use crate::Error;

/// Which selection rule produced a gluing pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    Dumbbell,
    Q137,
    Q24,
    Q5,
    Q8,
    Even,
    OddThin,
    OddThick,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Dumbbell => "D",
            Rule::Q137 => "q137",
            Rule::Q24 => "q24",
            Rule::Q5 => "q5",
            Rule::Q8 => "q8",
            Rule::Even => "e",
            Rule::OddThin => "o1",
            Rule::OddThick => "o2",
        }
    }

    pub fn is_pull(&self) -> bool {
        matches!(self, Rule::Q137 | Rule::Q8 | Rule::Even | Rule::OddThin)
    }
}

/// The deterministic outcome of the selection rules on one plane tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Selection {
    pub x: Bitstring,
    pub y: Bitstring,
    pub rule: Rule,
    /// The ordered subtree words the rules examined (anchored active list
    /// for two centroids, all subtrees in minimal rotation otherwise).
    pub subtree_words: Vec<Bitstring>,
    /// Index of the distinguished subtree in `subtree_words`.
    pub chosen: usize,
    pub two_centroids: bool,
}

fn separator_string(blocks: &[Bitstring]) -> Vec<u8> {
    let mut z = Vec::with_capacity(blocks.iter().map(|b| b.len() + 1).sum());
    for b in blocks {
        z.push(0u8);
        z.extend(b.iter_bits().map(|bit| bit + 1));
    }
    z
}

/// Index of the subtree at which the lexicographically least rotation of
/// the separator-joined cyclic block string starts.
fn booth_block_start(blocks: &[Bitstring]) -> usize {
    let z = separator_string(blocks);
    let k0 = booth_least_rotation(&z);
    debug_assert_eq!(z[k0], 0, "least rotation must start at a separator");
    z[..k0].iter().filter(|&&s| s == 0).count()
}

fn rotate_vec<T: Clone>(v: &[T], r: usize) -> Vec<T> {
    (0..v.len()).map(|i| v[(i + r) % v.len()].clone()).collect()
}

/// Runs the selection rules on the plane tree of `w`. Rejects the star
/// (which has no selection) and trees with fewer than four edges.
pub fn select_gluing_pair(w: &Bitstring) -> Result<Selection, Error> {
    select_impl(w, false)
}

/// Deliberately broken variant for mutation testing: the distinguished
/// subtree is taken as the last rather than the first match, which is the
/// kind of slip the verification suite must catch.
#[doc(hidden)]
pub fn select_gluing_pair_mutated(w: &Bitstring) -> Result<Selection, Error> {
    select_impl(w, true)
}

fn select_impl(w: &Bitstring, mutate_scan: bool) -> Result<Selection, Error> {
    let n = w.len() / 2;
    if n < 4 {
        return Err(Error::UnsupportedN(n));
    }
    let tr = Tr::parse(w);
    let (cents, phi) = tr.centroids_and_potential();

    let q0 = q_tree(0);
    // Star detection: a single vertex carries every edge.
    if (0..tr.vertex_count()).any(|v| tr.degree(v) == n) {
        return Err(Error::StarTree);
    }

    // Dumbbell rule: two centroids whose active subtrees are all single
    // edges. Push the leftmost leaf of the subtree holding the other
    // centroid.
    if cents.len() == 2 {
        let all_single = |c: usize, other: usize| {
            tr.neighbors_after(c, other).iter().all(|&b| tr.subtree_block(c, b) == q0)
        };
        if all_single(cents[0], cents[1]) && all_single(cents[1], cents[0]) {
            debug_assert!(n % 2 == 1);
            debug_assert_eq!(canonical_word(w), canonical_word(&dumbbell(n)?));
            let c = cents[0];
            let other = cents[1];
            let a = tr.leftmost_leaf(c, other);
            let flags = leaf_flags_in(&tr, c, a)?;
            debug_assert!(!flags.thin && flags.pushable_to);
            let (parent, _) = tr.root_at(c);
            let p1 = parent[a];
            let y = tr.serialize(p1, a);
            let x = push(&y)?;
            return Ok(Selection {
                x,
                y,
                rule: Rule::Dumbbell,
                subtree_words: vec![],
                chosen: 0,
                two_centroids: true,
            });
        }
    }

    // (T1) centroid and clockwise subtree ordering. The clockwise winding
    // around a vertex is the reverse of the parse order of its neighbor
    // list (the same orientation that makes rightmost leaves pullable).
    let (c, ordered_nbrs, ts, two_centroids) = if cents.len() == 2 {
        let candidate = |c: usize, other: usize| {
            let mut nbrs = tr.neighbors_after(c, other);
            nbrs.reverse();
            let blocks: Vec<Bitstring> = nbrs.iter().map(|&b| tr.subtree_block(c, b)).collect();
            let qualifies = blocks.iter().any(|b| *b != q0);
            (nbrs, blocks, qualifies)
        };
        let (n0, b0, ok0) = candidate(cents[0], cents[1]);
        let (n1, b1, ok1) = candidate(cents[1], cents[0]);
        let pick_first = match (ok0, ok1) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => separator_string(&b0) <= separator_string(&b1),
            (false, false) => unreachable!("dumbbell handled above"),
        };
        if pick_first {
            (cents[0], n0, b0, true)
        } else {
            (cents[1], n1, b1, true)
        }
    } else {
        let c = cents[0];
        let mut nbrs = tr.nbr[c].clone();
        nbrs.reverse();
        let blocks: Vec<Bitstring> = nbrs.iter().map(|&b| tr.subtree_block(c, b)).collect();
        let r = booth_block_start(&blocks);
        (c, rotate_vec(&nbrs, r), rotate_vec(&blocks, r), false)
    };

    // (T2) distinguished subtree.
    let k = ts.len();
    let q1 = q_tree(1);
    let q2 = q_tree(2);
    let q4 = q_tree(4);
    let chosen = if mutate_scan {
        (0..k).rev().find(|&i| ts[i] != q0).expect("a non-star tree has a non-edge subtree")
    } else if two_centroids {
        ts.iter().position(|t| *t != q0).expect("dumbbell handled above")
    } else {
        let cond1 = (0..k).find(|&i| ts[i] == q1 && ts[(i + k - 1) % k] == q0);
        let cond2 = || {
            (0..k).find(|&i| {
                (ts[i] == q2 || ts[i] == q4) && [&q0, &q1, &q2].contains(&&ts[(i + 1) % k])
            })
        };
        let cond3 = || (0..k).find(|&i| ![&q0, &q1, &q2, &q4].contains(&&ts[i]));
        let cond4 = || (0..k).find(|&i| ts[i] != q0);
        cond1
            .or_else(cond2)
            .or_else(cond3)
            .or_else(cond4)
            .expect("a non-star tree has a subtree that is not a single edge")
    };
    let b = ordered_nbrs[chosen];
    let t = &ts[chosen];

    // (T3) leaf choice.
    let q_match = |t: &Bitstring| -> Option<usize> {
        for j in [1usize, 2, 3, 4, 5, 7, 8] {
            let q = q_tree(j);
            if t.len() >= q.len() && (t.len() - q.len()) % 2 == 0 {
                let l = (t.len() - q.len()) / 2;
                let mut bits = vec![0u8; l];
                bits.extend(q.iter_bits());
                bits.extend(std::iter::repeat(1u8).take(l));
                if *t == Bitstring::from_bits(&bits) {
                    return Some(j);
                }
            }
        }
        None
    };

    let (rule, a) = match q_match(t) {
        Some(j) if j == 1 || j == 3 || j == 7 => (Rule::Q137, tr.rightmost_leaf(c, b)),
        Some(j) if j == 2 || j == 4 => (Rule::Q24, tr.leftmost_leaf(c, b)),
        Some(5) => {
            let leaves = tr.leaves_in_order(c, b);
            debug_assert_eq!(leaves.len(), 3, "a q5-shaped subtree has three leaves");
            (Rule::Q5, leaves[1])
        }
        Some(8) => (Rule::Q8, tr.leftmost_leaf(c, b)),
        Some(_) => unreachable!(),
        None => {
            if phi % 2 == 0 {
                (Rule::Even, tr.rightmost_leaf(c, b))
            } else {
                let a = tr.leftmost_leaf(c, b);
                let flags = leaf_flags_in(&tr, c, a)?;
                if flags.thin {
                    (Rule::OddThin, a)
                } else {
                    (Rule::OddThick, a)
                }
            }
        }
    };

    let flags = leaf_flags_in(&tr, c, a)?;
    let (parent, _) = tr.root_at(c);
    let p1 = parent[a];
    let (x, y) = if rule.is_pull() {
        debug_assert!(flags.pullable_to, "pull rules pick pullable leaves");
        let p2 = parent[p1];
        let x = tr.serialize(p2, p1);
        debug_assert!(is_pullable(&x));
        let y = pull(&x)?;
        (x, y)
    } else {
        debug_assert!(flags.pushable_to && !flags.thin, "push rules pick thick pushable leaves");
        let y = tr.serialize(p1, a);
        debug_assert!(is_pushable(&y));
        let x = push(&y)?;
        (x, y)
    };
    debug_assert_ne!(x, star(n)?, "selection never emits the excluded pair");
    Ok(Selection { x, y, rule, subtree_words: ts, chosen, two_centroids })
}

/// An arc of the gluing multigraph.
#[derive(Clone, Debug)]
pub struct Arc {
    pub from: Bitstring,
    pub to: Bitstring,
    pub pair: GluingPair,
}

/// The directed arc-labeled multigraph on plane trees with one arc per
/// gluing pair.
#[derive(Clone, Debug)]
pub struct GluingGraph {
    pub n: usize,
    pub nodes: Vec<Bitstring>,
    pub arcs: Vec<Arc>,
}

pub fn build_h(n: usize) -> Result<GluingGraph, Error> {
    if !(4..=9).contains(&n) {
        return Err(Error::UnsupportedN(n));
    }
    let nodes: Vec<Bitstring> = crate::verifier::dyck_words(n)
        .iter()
        .map(canonical_word)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let pairs = all_gluing_pairs(n);
    let arcs = crate::exec::map_collect(&pairs, |p| Arc {
        from: canonical_word(&p.x),
        to: canonical_word(&p.y),
        pair: p.clone(),
    });
    Ok(GluingGraph { n, nodes, arcs })
}

/// One selected arc per non-star plane tree.
#[derive(Clone, Debug)]
pub struct SpanningSelection {
    pub n: usize,
    /// (canonical tree, its selection), sorted by tree word.
    pub entries: Vec<(Bitstring, Selection)>,
}

impl SpanningSelection {
    /// The selected arcs as gluing pairs.
    pub fn pairs(&self) -> Vec<GluingPair> {
        self.entries
            .iter()
            .map(|(_, s)| {
                crate::gluing::make_gluing_pair(&s.x).expect("selected pairs are valid")
            })
            .collect()
    }

    pub fn arcs(&self) -> Vec<(Bitstring, Bitstring)> {
        self.entries.iter().map(|(_, s)| (canonical_word(&s.x), canonical_word(&s.y))).collect()
    }
}

pub fn build_t(n: usize) -> Result<SpanningSelection, Error> {
    if !(4..=9).contains(&n) {
        return Err(Error::UnsupportedN(n));
    }
    let star_class = canonical_word(&star(n)?);
    let nodes: Vec<Bitstring> = crate::verifier::dyck_words(n)
        .iter()
        .map(canonical_word)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .filter(|w| *w != star_class)
        .collect();
    let entries: Vec<(Bitstring, Selection)> = crate::exec::map_collect(&nodes, |w| {
        let sel = select_gluing_pair(w).expect("every non-star tree has a selection");
        (w.clone(), sel)
    });
    Ok(SpanningSelection { n, entries })
}

/// Single-tree form of the selection-consistency conditions: when the
/// distinguished subtree is q1, its predecessor is a single edge or every
/// subtree is q1; when it is q2 or q4, its successor is small or every
/// subtree is q4.
pub fn selection_conditions_ok(ts: &[Bitstring], chosen: usize) -> bool {
    let k = ts.len();
    let q0 = q_tree(0);
    let q1 = q_tree(1);
    let q2 = q_tree(2);
    let q4 = q_tree(4);
    let t = &ts[chosen];
    if *t == q1 {
        let pred_ok = ts[(chosen + k - 1) % k] == q0;
        let all_q1 = ts.iter().all(|s| *s == q1);
        if !pred_ok && !all_q1 {
            return false;
        }
    }
    if *t == q2 || *t == q4 {
        let succ = &ts[(chosen + 1) % k];
        let succ_ok = *succ == q0 || *succ == q1 || *succ == q2;
        let all_q4 = ts.iter().all(|s| *s == q4);
        if !succ_ok && !all_q4 {
            return false;
        }
    }
    true
}

/// Audits the selection-consistency conditions across a spanning
/// selection; returns human-readable violations (expected empty).
pub fn audit_selection_conditions(sel: &SpanningSelection) -> Vec<String> {
    let mut out = vec![];
    for (node, s) in &sel.entries {
        if s.rule == Rule::Dumbbell || s.two_centroids {
            continue;
        }
        if !selection_conditions_ok(&s.subtree_words, s.chosen) {
            out.push(format!("tree {} violates the subtree-context conditions", node));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::{gluing_cycle, relation};
    use crate::tree::{canonical_plane, dumbbell_pushed};

    fn bs(s: &str) -> Bitstring {
        Bitstring::parse(s).unwrap()
    }

    #[test]
    fn h_graph_shape() {
        let h = build_h(4).unwrap();
        assert_eq!(h.nodes.len(), 3);
        // The documented loop arc: both endpoints are the chair class.
        let chair = canonical_word(&bs("01001011"));
        assert!(h
            .arcs
            .iter()
            .any(|a| a.from == chair && a.to == chair && a.pair.y == bs("01001101")));
        // Node counts match the orbit counts of the Dyck words.
        for n in 4..=7 {
            let h = build_h(n).unwrap();
            let orbits: std::collections::BTreeSet<Bitstring> =
                crate::verifier::dyck_words(n).iter().map(canonical_word).collect();
            assert_eq!(h.nodes.len(), orbits.len());
        }
        // Parallel arcs with equal orientation exist at n = 5.
        let h5 = build_h(5).unwrap();
        let mut seen = std::collections::HashMap::new();
        let mut has_parallel = false;
        for a in &h5.arcs {
            let key = (a.from.clone(), a.to.clone());
            has_parallel |= seen.insert(key, ()).is_some();
        }
        assert!(has_parallel);
    }

    #[test]
    fn selection_is_representative_independent() {
        use crate::tree::rho;
        for n in 4..=6 {
            for w in crate::verifier::dyck_words(n) {
                let expect = select_gluing_pair(&w);
                let mut r = w.clone();
                loop {
                    r = rho(&r).unwrap();
                    if r == w {
                        break;
                    }
                    let got = select_gluing_pair(&r);
                    match (&expect, &got) {
                        (Ok(a), Ok(b)) => {
                            assert_eq!((&a.x, &a.y), (&b.x, &b.y), "representative {}", r)
                        }
                        (Err(_), Err(_)) => {}
                        _ => panic!("selection differs across representatives of {}", w),
                    }
                }
            }
        }
    }

    #[test]
    fn frozen_selections_at_n4() {
        // Path: both subtrees are chains, the fallback condition fires,
        // pull the rightmost leaf.
        let path = canonical_word(&bs("00001111"));
        let sel = select_gluing_pair(&path).unwrap();
        assert_eq!(sel.x, bs("00110011"));
        assert_eq!(sel.y, bs("00110101"));
        assert_eq!(sel.rule, Rule::Q137);
        // Chair: the q1 subtree preceded by a single edge, pull onto the
        // star.
        let chair = canonical_word(&bs("01001011"));
        let sel = select_gluing_pair(&chair).unwrap();
        assert_eq!(sel.x, bs("01010011"));
        assert_eq!(sel.y, bs("01010101"));
        assert_eq!(canonical_plane(&sel.y).canonical, canonical_word(&star(4).unwrap()));
        // Star refuses.
        assert_eq!(select_gluing_pair(&star(4).unwrap()), Err(Error::StarTree));
    }

    #[test]
    fn dumbbell_rule_produces_the_pushed_dumbbell() {
        for n in [5usize, 7] {
            let d = dumbbell(n).unwrap();
            let sel = select_gluing_pair(&d).unwrap();
            assert_eq!(sel.rule, Rule::Dumbbell);
            assert_eq!(sel.y, dumbbell_pushed(n).unwrap(), "n={}", n);
            assert_eq!(sel.x, push(&sel.y).unwrap());
            assert_eq!(canonical_word(&sel.y), canonical_word(&d));
        }
    }

    #[test]
    fn spanning_tree_certification() {
        for n in 4..=7 {
            let t = build_t(n).unwrap();
            let h = build_h(n).unwrap();
            assert_eq!(t.entries.len(), h.nodes.len() - 1, "n={}", n);
            // Every selected arc is an arc of the multigraph.
            for (_, s) in &t.entries {
                assert!(h.arcs.iter().any(|a| a.pair.x == s.x && a.pair.y == s.y));
            }
            // Undirected spanning tree: connected and acyclic via union-find.
            let index: std::collections::HashMap<&Bitstring, usize> =
                h.nodes.iter().zip(0..).collect();
            let mut parent: Vec<usize> = (0..h.nodes.len()).collect();
            fn find(p: &mut Vec<usize>, mut v: usize) -> usize {
                while p[v] != v {
                    p[v] = p[p[v]];
                    v = p[v];
                }
                v
            }
            for (from, to) in t.arcs() {
                let a = find(&mut parent, index[&from]);
                let b = find(&mut parent, index[&to]);
                assert_ne!(a, b, "selected arcs form a cycle at n={}", n);
                parent[a] = b;
            }
            let root = find(&mut parent, 0);
            assert!(
                (1..h.nodes.len()).all(|v| find(&mut parent, v) == root),
                "selected arcs do not span at n={}",
                n
            );
            // Every arc moves the potential by exactly one, and the
            // selected neighbor always descends.
            for (node, s) in &t.entries {
                let phi_x = canonical_plane(&s.x).potential as i64;
                let phi_y = canonical_plane(&s.y).potential as i64;
                assert_eq!((phi_x - phi_y).abs(), 1, "n={} node {}", n, node);
                let phi_node = canonical_plane(node).potential as i64;
                let other = if canonical_word(&s.x) == *node { phi_y } else { phi_x };
                assert_eq!(other, phi_node - 1, "selected neighbor must descend, {}", node);
            }
        }
    }

    #[test]
    fn spanning_selection_is_nesting_and_interleaving_free() {
        for n in 4..=6 {
            let t = build_t(n).unwrap();
            let pairs = t.pairs();
            let m = 2 * n + 1;
            for (pi, p) in pairs.iter().enumerate() {
                for q in pairs.iter().skip(pi + 1) {
                    for i in 0..m {
                        for j in 0..m {
                            let ci = gluing_cycle(p, i);
                            let cj = gluing_cycle(q, j);
                            let rel = relation(&ci, &cj);
                            assert!(rel.compatible, "n={} {} {}", n, p.x, q.x);
                            assert!(!rel.nested, "n={} {}@{} nests {}@{}", n, p.x, i, q.x, j);
                            assert!(
                                !rel.interleaved,
                                "n={} {}@{} interleaves {}@{}",
                                n, p.x, i, q.x, j
                            );
                            let rel2 = relation(&cj, &ci);
                            assert!(!rel2.nested && !rel2.interleaved);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn selection_conditions_hold_and_detector_fires() {
        for n in 4..=6 {
            let t = build_t(n).unwrap();
            assert!(audit_selection_conditions(&t).is_empty(), "n={}", n);
        }
        // Synthetic violation: q1 chosen with a non-q0 predecessor and
        // mixed subtrees.
        let ts = vec![q_tree(1), q_tree(0), q_tree(2)];
        assert!(!selection_conditions_ok(&ts, 0));
        let ts = vec![q_tree(4), q_tree(3)];
        assert!(!selection_conditions_ok(&ts, 0));
        let ts = vec![q_tree(0), q_tree(1)];
        assert!(selection_conditions_ok(&ts, 1));
    }

    #[test]
    fn selection_is_deterministic() {
        for n in 4..=6 {
            let a = build_t(n).unwrap();
            let b = build_t(n).unwrap();
            let fmt = |t: &SpanningSelection| {
                t.entries
                    .iter()
                    .map(|(w, s)| format!("{} {} {} {}", w, s.x, s.y, s.rule.tag()))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            assert_eq!(fmt(&a), fmt(&b));
        }
    }
}
