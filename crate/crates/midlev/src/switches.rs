//! Switches: vertex triples that reroute one edge of a Hamilton cycle
//! through a rotated sibling, shifting the whole flip sequence by a chosen
//! amount without disturbing the necklace itinerary. Includes the three
//! switch families, the validator, flip-sequence application, usability
//! checks against gluing hexagons, and the number-theoretic planner that
//! fixes non-coprime shifts.

use crate::bitstring::Bitstring;
use crate::dynamics::{f, measure_shift, FlipSequence};
use crate::gluing::{gluing_cycle, GluingPair};
use crate::Error;

/// Which conformality clause the switch's f-edge satisfies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Conformality {
    /// y = f(x) or x = f(y'): the edge lies forward on a periodic path.
    F,
    /// x = f(y) or y' = f(x): the inverted switch is conformal.
    FInv,
}

/// A validated switch (x, y, y') with its shift and f-edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Switch {
    pub x: Bitstring,
    pub y: Bitstring,
    pub y_alt: Bitstring,
    /// y = rotate(y_alt, shift).
    pub shift: u32,
    pub conformality: Option<Conformality>,
    /// The f-edge (p, q) with q = f(p), when conformal.
    pub f_edge: Option<(Bitstring, Bitstring)>,
}

/// Precomputed edge surgery for the generator: the removed f-edge orbit
/// {(p, q)} and the partners of p- and q-copies on the added orbit.
#[derive(Clone, Debug)]
pub struct SwitchSurgery {
    pub p: Bitstring,
    pub q: Bitstring,
    /// Partner of rotate(p, j) is rotate(p_partner, j).
    pub p_partner: Bitstring,
    /// Partner of rotate(q, j) is rotate(q_partner, j).
    pub q_partner: Bitstring,
}

impl Switch {
    pub fn inverse(&self) -> Switch {
        let m = self.x.len() as u32;
        Switch {
            x: self.x.clone(),
            y: self.y_alt.clone(),
            y_alt: self.y.clone(),
            shift: (m - self.shift) % m,
            // Conformality of the inverse is re-derived on demand.
            conformality: None,
            f_edge: None,
        }
    }

    /// The edge surgery realized by applying this switch as constructed.
    pub fn surgery(&self) -> Result<SwitchSurgery, Error> {
        let (p, q) = self
            .f_edge
            .clone()
            .ok_or_else(|| Error::SwitchAxiom("switch is not conformal".into()))?;
        let lam = self.shift as i64;
        let (p_partner, q_partner) = match self.conformality.unwrap() {
            Conformality::F => {
                if p == self.x {
                    // Edge (x, y): reroute x to y'.
                    (self.y_alt.clone(), p.rotate(lam))
                } else {
                    // Edge (y', x): reroute y' to the rotated x.
                    (q.rotate(-lam), self.y.clone())
                }
            }
            Conformality::FInv => {
                if p == self.y {
                    // Edge (y, x): reroute through y'.
                    (q.rotate(lam), self.y_alt.clone())
                } else {
                    // Edge (x, y'): reroute x to y.
                    (self.y.clone(), p.rotate(-lam))
                }
            }
        };
        Ok(SwitchSurgery { p, q, p_partner, q_partner })
    }
}

fn single_diff(a: &Bitstring, b: &Bitstring) -> Option<usize> {
    let mut found = None;
    for i in 0..a.len() {
        if a.get(i) != b.get(i) {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// Checks the switch axioms and computes the shift and conformality.
pub fn validate_switch(x: &Bitstring, y: &Bitstring, y_alt: &Bitstring) -> Result<Switch, Error> {
    let m = x.len();
    if m % 2 == 0 || m < 3 || y.len() != m || y_alt.len() != m {
        return Err(Error::SwitchAxiom("words must share an odd length".into()));
    }
    let n = (m - 1) / 2;
    if x.weight() != n {
        return Err(Error::SwitchAxiom(format!("x has weight {}, want {}", x.weight(), n)));
    }
    if y.weight() != n + 1 || y_alt.weight() != n + 1 {
        return Err(Error::SwitchAxiom("y and y' must sit on the heavy side".into()));
    }
    if y == y_alt {
        return Err(Error::SwitchAxiom("y and y' must differ".into()));
    }
    if single_diff(x, y).is_none() {
        return Err(Error::SwitchAxiom("x and y must differ in one bit".into()));
    }
    if single_diff(x, y_alt).is_none() {
        return Err(Error::SwitchAxiom("x and y' must differ in one bit".into()));
    }
    let Some(shift) = measure_shift(y, y_alt) else {
        return Err(Error::SwitchAxiom("y and y' must share a necklace".into()));
    };
    // Aperiodicity of middle-levels words makes the shift unique.
    let (conformality, f_edge) = if f(x) == *y {
        (Some(Conformality::F), Some((x.clone(), y.clone())))
    } else if f(y_alt) == *x {
        (Some(Conformality::F), Some((y_alt.clone(), x.clone())))
    } else if f(y) == *x {
        (Some(Conformality::FInv), Some((y.clone(), x.clone())))
    } else if f(x) == *y_alt {
        (Some(Conformality::FInv), Some((x.clone(), y_alt.clone())))
    } else {
        (None, None)
    };
    Ok(Switch {
        x: x.clone(),
        y: y.clone(),
        y_alt: y_alt.clone(),
        shift,
        conformality,
        f_edge,
    })
}

fn bits_of(len: usize, f: impl Fn(usize) -> u8) -> Bitstring {
    Bitstring::from_bits(&(0..len).map(f).collect::<Vec<_>>())
}

/// The unit switch 0^{n+1}1^n with both marked zeros: shift 1, inverse
/// conformal.
pub fn tau_1(n: usize) -> Result<Switch, Error> {
    if n < 1 {
        return Err(Error::UnsupportedN(n));
    }
    let m = 2 * n + 1;
    let x = bits_of(m, |i| if i <= n { 0 } else { 1 });
    let y = x.flipped(0);
    let y_alt = x.flipped(n);
    let sw = validate_switch(&x, &y, &y_alt)?;
    if sw.shift != 1 || sw.conformality != Some(Conformality::FInv) {
        return Err(Error::SwitchAxiom("unit switch failed its contract".into()));
    }
    Ok(sw)
}

/// The shift-2 switch 001(01)^{n-1} with zeros marked at positions 2 and 1:
/// forward conformal.
pub fn tau_2(n: usize) -> Result<Switch, Error> {
    if n < 4 {
        return Err(Error::UnsupportedN(n));
    }
    let m = 2 * n + 1;
    let x = bits_of(m, |i| match i {
        0 | 1 => 0,
        2 => 1,
        _ => if i % 2 == 1 { 0 } else { 1 },
    });
    let y = x.flipped(1);
    let y_alt = x.flipped(0);
    let sw = validate_switch(&x, &y, &y_alt)?;
    if sw.shift != 2 || sw.conformality != Some(Conformality::F) {
        return Err(Error::SwitchAxiom("shift-2 switch failed its contract".into()));
    }
    Ok(sw)
}

/// The orbit of s under repeated addition of d modulo 2n+1, as 1-indexed
/// positions, stopping before the first repeat.
pub fn orbit(s: usize, d: usize, n: usize) -> Vec<u32> {
    let m = 2 * n + 1;
    let len = m / gcd(m as u64, d as u64) as usize;
    (0..len)
        .map(|i| {
            let v = (s + i * d - 1) % m + 1;
            v as u32
        })
        .collect()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The divisor-orbit switch: the (1,d)-orbit carries the unit-switch
/// template of length c = (2n+1)/d, every other orbit is filled with a
/// constant bit of z. Defaults to z = 0^{(d-1)/2} 1^{(d-1)/2}.
pub fn tau_dz(n: usize, d: usize, z: Option<&Bitstring>) -> Result<Switch, Error> {
    let m = 2 * n + 1;
    if d < 3 || d > n || m % d != 0 {
        return Err(Error::UnsupportedN(d));
    }
    let c = m / d;
    if c < 3 {
        return Err(Error::UnsupportedN(d));
    }
    let default_z = bits_of(d - 1, |i| if i < (d - 1) / 2 { 0 } else { 1 });
    let z = z.unwrap_or(&default_z);
    if z.len() != d - 1 || z.weight() != (d - 1) / 2 {
        return Err(Error::SwitchAxiom(format!(
            "orbit fill must have length {} and weight {}",
            d - 1,
            (d - 1) / 2
        )));
    }
    // Template: unit switch of half-size (c-1)/2, i.e. 0^{(c+1)/2} 1^{(c-1)/2}.
    let template = |k: usize| if k < (c + 1) / 2 { 0u8 } else { 1u8 };
    let mut bits = vec![0u8; m];
    for (k, pos) in orbit(1, d, n).iter().enumerate() {
        bits[(*pos - 1) as usize] = template(k);
    }
    for j in 2..=d {
        let fill = z.get(j - 2);
        for pos in orbit(j, d, n) {
            bits[(pos - 1) as usize] = fill;
        }
    }
    let x = Bitstring::from_bits(&bits);
    // Marked zeros: template indices 0 and (c+1)/2 - 1 on the (1,d)-orbit.
    let under = 0usize;
    let over = (1 + ((c + 1) / 2 - 1) * d) - 1;
    let y = x.flipped(under);
    let y_alt = x.flipped(over);
    let sw = validate_switch(&x, &y, &y_alt)?;
    if sw.shift as usize != d || sw.conformality != Some(Conformality::FInv) {
        return Err(Error::SwitchAxiom(format!(
            "divisor switch failed its contract (shift {}, want {})",
            sw.shift, d
        )));
    }
    Ok(sw)
}

/// Applies a switch to a flip sequence at the site where the path uses one
/// of its edges; the tail is rotated so the necklace itinerary is
/// untouched, and the shift moves by plus or minus the switch shift.
pub fn apply_switch(
    alpha: &FlipSequence,
    path: &[Bitstring],
    sw: &Switch,
) -> Result<FlipSequence, Error> {
    let m = alpha.modulus as i64;
    let lam = sw.shift as i64;
    for i in 0..path.len() {
        let a = &path[i];
        let b_owned;
        let b = if i + 1 < path.len() {
            &path[i + 1]
        } else {
            b_owned = path[0].rotate(-(alpha.shift as i64));
            &b_owned
        };
        // (delta, replacement) per edge orientation.
        let hit = if (a, b) == (&sw.x, &sw.y) {
            Some((lam, sw.y_alt.clone()))
        } else if (a, b) == (&sw.y_alt, &sw.x) {
            Some((lam, sw.x.rotate(-lam)))
        } else if (a, b) == (&sw.y, &sw.x) {
            Some((-lam, sw.x.rotate(lam)))
        } else if (a, b) == (&sw.x, &sw.y_alt) {
            Some((-lam, sw.y.clone()))
        } else {
            None
        };
        if let Some((delta, replacement)) = hit {
            let pos = single_diff(a, &replacement).ok_or_else(|| {
                Error::SwitchAxiom("replacement edge is not a single flip".into())
            })?;
            let mut entries = alpha.entries[..i].to_vec();
            entries.push(pos as u32 + 1);
            for &e in &alpha.entries[i + 1..] {
                let v = (e as i64 - delta).rem_euclid(m);
                entries.push(if v == 0 { m as u32 } else { v as u32 });
            }
            return Ok(FlipSequence::new(entries, alpha.modulus, alpha.shift as i64 + delta));
        }
    }
    Err(Error::SwitchAxiom("no edge of the switch occurs on the path".into()))
}

/// Whether the switch's f-edge avoids all rotated hexagon f-edges of the
/// given pairs (usable), and whether it lies on a reversed run (reversed).
pub fn usable_and_reversed(sw: &Switch, pairs: &[GluingPair]) -> Result<(bool, bool), Error> {
    let (p, q) = sw
        .f_edge
        .clone()
        .ok_or_else(|| Error::SwitchAxiom("usability needs a conformal switch".into()))?;
    let m = p.len() as i64;
    let edge_hits = |e0: &Bitstring, e1: &Bitstring| -> bool {
        // Does (p, q) equal sigma^j(e0, e1) for some j, in either order?
        for j in 0..m {
            let r0 = e0.rotate(j);
            if r0 == p && e1.rotate(j) == q {
                return true;
            }
            if r0 == q && e1.rotate(j) == p {
                return true;
            }
        }
        false
    };
    let mut usable = true;
    let mut reversed = false;
    for pair in pairs {
        let hex = gluing_cycle(pair, 0);
        for (e0, e1) in hex.f_edges() {
            if edge_hits(&e0, &e1) {
                usable = false;
            }
        }
        let run = hex.reversed_subpath();
        for w in run.windows(2) {
            if edge_hits(&w[0], &w[1]) {
                reversed = true;
            }
        }
    }
    Ok((usable, reversed))
}

pub fn prime_set(mut m: u64) -> std::collections::BTreeSet<u64> {
    let mut out = std::collections::BTreeSet::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.insert(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.insert(m);
    }
    out
}

/// Prime factors of m not dividing s; empty for s = 0.
pub fn relative_prime_set(m: u64, s: u64) -> std::collections::BTreeSet<u64> {
    if s == 0 {
        return std::collections::BTreeSet::new();
    }
    prime_set(m).difference(&prime_set(s)).copied().collect()
}

/// One planned switch application with its effective contribution to the
/// shift (the sign already accounts for conformality and reversedness).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SwitchKind {
    Tau1,
    Tau2,
    TauDz { d: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PlannedStep {
    pub kind: SwitchKind,
    /// Effective signed contribution to the shift.
    pub contribution: i64,
}

/// How a non-coprime base shift gets fixed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftPlan {
    pub n: usize,
    pub base: u32,
    pub steps: Vec<PlannedStep>,
    pub final_shift: u32,
}

impl ShiftPlan {
    pub fn explain(&self) -> String {
        let m = 2 * self.n + 1;
        let mut out = format!(
            "base shift {} (mod {}), gcd {}\n",
            self.base,
            m,
            gcd(self.base as u64, m as u64)
        );
        if self.steps.is_empty() {
            out.push_str("coprime already; no switches needed\n");
        }
        let mut s = self.base as i64;
        for step in &self.steps {
            let name = match step.kind {
                SwitchKind::Tau1 => "unit switch".to_string(),
                SwitchKind::Tau2 => "shift-2 switch".to_string(),
                SwitchKind::TauDz { d } => format!("divisor switch d = {}", d),
            };
            s = (s + step.contribution).rem_euclid(m as i64);
            out.push_str(&format!("apply {} ({:+}) -> shift {}\n", name, step.contribution, s));
        }
        out.push_str(&format!("final shift {} coprime to {}\n", self.final_shift, m));
        out
    }
}

/// Plans switch applications turning shift `s` into one coprime to 2n+1.
/// The effective contributions are +1 for the unit switch, +2 for the
/// shift-2 switch, and -d for the divisor switch.
pub fn plan_shift_fix(n: usize, s: i64) -> Result<ShiftPlan, Error> {
    let m = (2 * n + 1) as i64;
    let base = s.rem_euclid(m) as u32;
    let mk = |steps: Vec<PlannedStep>| -> Result<ShiftPlan, Error> {
        let mut cur = base as i64;
        for st in &steps {
            cur = (cur + st.contribution).rem_euclid(m);
        }
        let final_shift = cur as u32;
        if gcd(final_shift as u64, m as u64) != 1 {
            return Err(Error::NonCoprimeShift { shift: final_shift as i64, modulus: m as u64 });
        }
        Ok(ShiftPlan { n, base, steps, final_shift })
    };
    if gcd(base as u64, m as u64) == 1 {
        return mk(vec![]);
    }
    let is_prime_power = prime_set(m as u64).len() == 1;
    if n <= 10 || is_prime_power {
        // Small n: search the fixed-sign combinations +1, +2, +3. For a
        // prime-power modulus, adding one always works.
        let combos: &[(u32, u32)] = if is_prime_power { &[(1, 0)] } else { &[(1, 0), (0, 1), (1, 1)] };
        for &(c1, c2) in combos {
            let cand = (base as i64 + c1 as i64 + 2 * c2 as i64).rem_euclid(m);
            if gcd(cand as u64, m as u64) == 1 {
                let mut steps = vec![];
                if c1 == 1 {
                    steps.push(PlannedStep { kind: SwitchKind::Tau1, contribution: 1 });
                }
                if c2 == 1 {
                    steps.push(PlannedStep { kind: SwitchKind::Tau2, contribution: 2 });
                }
                return mk(steps);
            }
        }
        return Err(Error::NonCoprimeShift { shift: base as i64, modulus: m as u64 });
    }
    // Composite modulus, n >= 11: divisor switches.
    let rel = relative_prime_set(m as u64, base as u64);
    if !rel.is_empty() {
        let d: u64 = rel.iter().product();
        return mk(vec![PlannedStep {
            kind: SwitchKind::TauDz { d: d as u32 },
            contribution: -(d as i64),
        }]);
    }
    // The shift shares every prime of the modulus: use the smallest prime
    // first, then the product of the remaining ones.
    let d1 = *prime_set(m as u64).iter().next().unwrap();
    let s1 = (base as i64 - d1 as i64).rem_euclid(m) as u64;
    let rel2 = relative_prime_set(m as u64, s1);
    let d2: u64 = rel2.iter().product();
    debug_assert!(d2 != d1 && d2 >= 3);
    mk(vec![
        PlannedStep { kind: SwitchKind::TauDz { d: d1 as u32 }, contribution: -(d1 as i64) },
        PlannedStep { kind: SwitchKind::TauDz { d: d2 as u32 }, contribution: -(d2 as i64) },
    ])
}

/// Builds the switches a plan calls for.
pub fn realize_plan(plan: &ShiftPlan) -> Result<Vec<Switch>, Error> {
    plan.steps
        .iter()
        .map(|st| match st.kind {
            SwitchKind::Tau1 => tau_1(plan.n),
            SwitchKind::Tau2 => tau_2(plan.n),
            SwitchKind::TauDz { d } => tau_dz(plan.n, d as usize, None),
        })
        .collect()
}
