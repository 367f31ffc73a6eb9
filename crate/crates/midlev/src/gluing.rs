//! Gluing pairs, their six-vertex gluing cycles, grafting of periodic
//! paths, and the compatibility/nesting/interleaving relations between
//! rotated gluing cycles.

use crate::bitstring::Bitstring;
use crate::dynamics::{measure_shift, periodic_path, FlipSequence, PeriodicPath};
use crate::tree::{canonical_word, is_pullable, pull, rho, rho_inv, star};
use crate::Error;

/// A pullable/pushable pair of rooted trees x = u0v011, y = u0v101.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluingPair {
    pub x: Bitstring,
    pub y: Bitstring,
    pub u: Bitstring,
    pub v: Bitstring,
}

impl GluingPair {
    pub fn n(&self) -> usize {
        self.x.len() / 2
    }
}

/// Builds the gluing pair on a pullable tree, rejecting the excluded
/// star/footed-star pair (the degenerate case whose x-side period is only
/// 4, defined for n >= 4).
pub fn make_gluing_pair(x: &Bitstring) -> Result<GluingPair, Error> {
    let y = pull(x)?;
    let n = x.len() / 2;
    if n >= 4 && *x == star(n)? {
        return Err(Error::ExcludedStarPair);
    }
    // Recover the split: x = u 0 v 011.
    let i0 = crate::bitstring::last_block_open(x);
    let u = x.slice(0, i0);
    let v = x.slice(i0 + 1, x.len() - 3);
    Ok(GluingPair { x: x.clone(), y, u, v })
}

/// The six-cycle gluing two periodic paths, with its flip labels. The
/// vertices are listed in traversal order x0, y1, y0, x5, x6, x1.
#[derive(Clone, Debug)]
pub struct GluingCycle {
    pub vertices: [Bitstring; 6],
    /// 1-indexed flip labels along the cycle edges, last label closing the
    /// hexagon.
    pub labels: [u32; 6],
    pub rotation: usize,
}

/// Role names for the hexagon corners, in the traversal order used by
/// `GluingCycle::vertices`.
pub const HEX_ROLES: [&str; 6] = ["x0", "y1", "y0", "x5", "x6", "x1"];

fn build_word(parts: &[&str], u: &Bitstring, v: &Bitstring) -> Bitstring {
    let mut bits: Vec<u8> = vec![];
    for p in parts {
        match *p {
            "u" => bits.extend(u.iter_bits()),
            "v" => bits.extend(v.iter_bits()),
            lit => bits.extend(lit.bytes().map(|b| b - b'0')),
        }
    }
    Bitstring::from_bits(&bits)
}

/// Base-frame hexagon corner words for a pair (x, y) = (u0v011, u0v101).
pub(crate) fn hexagon_words(u: &Bitstring, v: &Bitstring) -> [Bitstring; 6] {
    [
        build_word(&["0", "u", "0", "v", "011"], u, v), // x0
        build_word(&["0", "u", "0", "v", "111"], u, v), // y1
        build_word(&["0", "u", "0", "v", "101"], u, v), // y0
        build_word(&["0", "u", "1", "v", "101"], u, v), // x5
        build_word(&["0", "u", "1", "v", "001"], u, v), // x6
        build_word(&["0", "u", "1", "v", "011"], u, v), // x1
    ]
}

/// The hexagon of a gluing pair rotated by `i` positions.
pub fn gluing_cycle(p: &GluingPair, i: usize) -> GluingCycle {
    let m = (2 * p.n() + 1) as i64;
    let base = hexagon_words(&p.u, &p.v);
    let vertices: Vec<Bitstring> = base.iter().map(|w| w.rotate(i as i64)).collect();
    let lu = p.u.len() as i64;
    let lv = p.v.len() as i64;
    let lab = |val: i64| -> u32 {
        let r = (val + i as i64).rem_euclid(m);
        (if r == 0 { m } else { r }) as u32
    };
    let labels = [
        lab(lu + lv + 3),
        lab(lu + lv + 4),
        lab(lu + 2),
        lab(lu + lv + 3),
        lab(lu + lv + 4),
        lab(lu + 2),
    ];
    GluingCycle {
        vertices: vertices.try_into().expect("six corners"),
        labels,
        rotation: i,
    }
}

impl GluingCycle {
    /// The three edges removed from the periodic paths when gluing, as
    /// unordered pairs: (x0, x1), (x5, x6), (y0, y1).
    pub fn f_edges(&self) -> [(Bitstring, Bitstring); 3] {
        let v = &self.vertices;
        [
            (v[0].clone(), v[5].clone()),
            (v[3].clone(), v[4].clone()),
            (v[2].clone(), v[1].clone()),
        ]
    }

    /// The three edges the hexagon adds: (x0, y1), (y0, x5), (x6, x1).
    pub fn added_edges(&self) -> [(Bitstring, Bitstring); 3] {
        let v = &self.vertices;
        [
            (v[0].clone(), v[1].clone()),
            (v[2].clone(), v[3].clone()),
            (v[4].clone(), v[5].clone()),
        ]
    }

    /// The subpath of the x-side periodic path reversed by this hexagon:
    /// x1, x2, x3, x4, x5.
    pub fn reversed_subpath(&self) -> Vec<Bitstring> {
        let mut out = vec![self.vertices[5].clone()];
        let mut cur = self.vertices[5].clone();
        for _ in 0..4 {
            cur = crate::dynamics::f(&cur);
            out.push(cur.clone());
        }
        debug_assert_eq!(out[4], self.vertices[3], "x5 must close the reversed run");
        out
    }
}

/// Grafts the periodic path of the y-side into the x-side path of a gluing
/// pair, producing the longer periodic path that covers both necklace
/// cycles.
pub fn graft(p: &GluingPair) -> Result<PeriodicPath, Error> {
    if canonical_word(&p.x) == canonical_word(&p.y) {
        return Err(Error::PatternMismatch {
            word: p.x.to_string(),
            pattern: "gluing pair with distinct plane trees",
        });
    }
    let hex = gluing_cycle(p, 0);
    let zero = Bitstring::parse("0").unwrap();
    let x0 = Bitstring::concat(&[&zero, &p.x]);
    let y0 = Bitstring::concat(&[&zero, &p.y]);
    debug_assert_eq!(hex.vertices[0], x0);
    debug_assert_eq!(hex.vertices[2], y0);
    let px = periodic_path(&x0);
    let py = periodic_path(&y0);
    // The hexagon corners x5, x6 must actually sit on the x-side path.
    if px.kappa() < 6 || px.vertices[5] != hex.vertices[3] {
        return Err(Error::PatternMismatch {
            word: p.x.to_string(),
            pattern: "x-side period long enough to carry the hexagon",
        });
    }
    let lam_y = py.kappa() / 2;

    let mut vertices: Vec<Bitstring> = Vec::with_capacity(px.kappa() + py.kappa());
    vertices.push(x0.clone());
    // Forward along the y-path from y1.
    for v in py.vertices.iter().skip(1) {
        vertices.push(v.clone());
    }
    // The y-path closes onto the rotated copy of y0; continue there.
    let twist = -(lam_y as i64);
    vertices.push(y0.rotate(twist));
    // Reversed x-run x5 .. x1 in the same rotated frame.
    for i in [5usize, 4, 3, 2, 1] {
        vertices.push(px.vertices[i].rotate(twist));
    }
    // Forward along the x-path from x6 to its end.
    for v in px.vertices.iter().skip(6) {
        vertices.push(v.rotate(twist));
    }

    // Flips recovered by pairwise comparison; the final flip closes onto
    // the doubly rotated start.
    let m = x0.len() as u32;
    let mut entries = Vec::with_capacity(vertices.len());
    for i in 0..vertices.len() {
        let a = &vertices[i];
        let b = if i + 1 < vertices.len() {
            vertices[i + 1].clone()
        } else {
            let lam_x = px.kappa() / 2;
            x0.rotate(-((lam_x + lam_y) as i64))
        };
        let mut diff = None;
        for idx in 0..a.len() {
            if a.get(idx) != b.get(idx) {
                if diff.is_some() {
                    return Err(Error::PatternMismatch {
                        word: format!("{} -> {}", a, b),
                        pattern: "single-bit step",
                    });
                }
                diff = Some(idx);
            }
        }
        let idx = diff.ok_or(Error::PatternMismatch {
            word: a.to_string(),
            pattern: "consecutive grafted vertices differ",
        })?;
        entries.push(idx as u32 + 1);
    }
    let end = {
        let lam_x = px.kappa() / 2;
        x0.rotate(-((lam_x + lam_y) as i64))
    };
    let shift = measure_shift(&x0, &end).expect("grafted path must close");
    Ok(PeriodicPath { vertices, flips: FlipSequence::new(entries, m, shift as i64) })
}

/// How two rotated gluing cycles sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub compatible: bool,
    pub nested: bool,
    pub interleaved: bool,
}

fn edge_eq(a: &(Bitstring, Bitstring), b: &(Bitstring, Bitstring)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

/// Geometric relation between rotated hexagons: compatibility by f-edge
/// disjointness, nesting/interleaving by membership of specific edges in
/// the reversed runs. The algebraic rotation criteria are cross-checked in
/// tests against this definition.
pub fn relation(ci: &GluingCycle, cj: &GluingCycle) -> Relation {
    let fi = ci.f_edges();
    let fj = cj.f_edges();
    let compatible = fi.iter().all(|a| fj.iter().all(|b| !edge_eq(a, b)));

    let reversed_i = ci.reversed_subpath();
    let reversed_j = cj.reversed_subpath();
    let run_edges = |run: &[Bitstring]| -> Vec<(Bitstring, Bitstring)> {
        run.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
    };
    // Nested: the (y0, y1) edge of ci lies on the run reversed by cj.
    let y_edge = (ci.vertices[2].clone(), ci.vertices[1].clone());
    let nested = run_edges(&reversed_j).iter().any(|e| edge_eq(e, &y_edge));
    // Interleaved: the (x0, x1) f-edge of cj lies on the run reversed by ci.
    let x_edge = (cj.vertices[0].clone(), cj.vertices[5].clone());
    let interleaved = run_edges(&reversed_i).iter().any(|e| edge_eq(e, &x_edge));
    Relation { compatible, nested, interleaved }
}

/// Algebraic form of the relation criteria for two pairs rotated by i, j.
pub fn relation_algebraic(
    p: &GluingPair,
    i: usize,
    q: &GluingPair,
    j: usize,
) -> Relation {
    let m = 2 * p.n() + 1;
    let rot_eq = |a: usize, b: usize, d: usize| (a % m) == ((b + d) % m);
    // Interleaving: i = j + 2 and x' = rho^2(x); nesting: i = j - 1 and
    // x' = rho^{-1}(y). Here (p, i) plays the unprimed role.
    let rho2 = rho(&rho(&p.x).unwrap()).unwrap();
    let interleaved = rot_eq(i, j, 2) && q.x == rho2;
    let rho_inv_y = rho_inv(&p.y).unwrap();
    let nested = rot_eq(j, i, 1) && q.x == rho_inv_y;
    Relation { compatible: true, nested, interleaved }
}

/// Enumerates every gluing pair with n edges (each pullable non-star root).
pub fn all_gluing_pairs(n: usize) -> Vec<GluingPair> {
    crate::verifier::dyck_words(n)
        .into_iter()
        .filter(|x| is_pullable(x))
        .filter_map(|x| make_gluing_pair(&x).ok())
        .collect()
}
