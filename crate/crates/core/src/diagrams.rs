//! Jacobi diagrams over `n` upward strands with linearly ordered `{x, y}`
//! labels, their relation quotients in a fixed degree, the map
//! `u_n : U t_{1,n} -> A(↑^n)` and the normalizing rewriters.
//!
//! A diagram is a uni-trivalent graph. Its ends ("ports") are the on-strand
//! slots (ordered along each strand, strands left to right), the labeled
//! legs (in the global label order, lowest first) and three corners per
//! trivalent vertex, listed in the cyclic orientation of the vertex. The
//! degree is `#trivalent + #slots`. All diagrams are pattern-connected and
//! have no struts.
//!
//! Sign conventions, fixed once here and used by every relation:
//!
//! * STU: a trivalent vertex with corners `(r, a, b)` whose corner `r` is
//!   attached to a slot equals (`a` below `b` on the strand) minus (`b` below
//!   `a`). This makes `u([a, b]) = u(a)u(b) - u(b)u(a)` with later factors
//!   stacked higher.
//! * STU-like: `(v above w) - (w above v) = <v, w> · (v, w legs contracted)`
//!   with `<y, x> = 1`.
//! * IHX follows the Jacobi identity under the same reading of vertices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::algebra::{AlgebraElement, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::lie::{bernoulli_over_factorial, bernoulli_table};
use crate::linalg::{add_term, axpy, Echelon, SparseVec};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    X,
    Y,
}

impl Label {
    pub fn as_char(self) -> char {
        match self {
            Label::X => 'x',
            Label::Y => 'y',
        }
    }

    pub fn from_char(c: char) -> Option<Label> {
        match c {
            'x' => Some(Label::X),
            'y' => Some(Label::Y),
            _ => None,
        }
    }
}

/// The intersection form `<v, w>` with `<y, x> = 1`.
pub fn pairing(v: Label, w: Label) -> i64 {
    match (v, w) {
        (Label::Y, Label::X) => 1,
        (Label::X, Label::Y) => -1,
        _ => 0,
    }
}

/// A diagram in canonical form; equal diagrams compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    strand_slots: Vec<u8>,
    labels: Vec<Label>,
    tri: u8,
    mate: Vec<u16>,
}

/// Editable form: edges are arbitrary ids, each used exactly twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramParts {
    /// Edge ids per strand, bottom to top.
    pub slots: Vec<Vec<u32>>,
    /// Trivalent vertices, edge ids in cyclic order.
    pub trivalent: Vec<[u32; 3]>,
    /// Labeled legs in the global order, lowest first.
    pub legs: Vec<(Label, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Slot(usize),
    Leg(usize),
    Corner(usize, usize),
}

impl Diagram {
    pub fn strands(&self) -> usize {
        self.strand_slots.len()
    }

    pub fn num_slots(&self) -> usize {
        self.strand_slots.iter().map(|&c| c as usize).sum()
    }

    pub fn num_legs(&self) -> usize {
        self.labels.len()
    }

    pub fn num_trivalent(&self) -> usize {
        self.tri as usize
    }

    pub fn degree(&self) -> usize {
        self.num_trivalent() + self.num_slots()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn slots_on(&self, strand: usize) -> usize {
        self.strand_slots[strand] as usize
    }

    fn port(&self, p: usize) -> Port {
        let k = self.num_slots();
        let l = self.num_legs();
        if p < k {
            Port::Slot(p)
        } else if p < k + l {
            Port::Leg(p - k)
        } else {
            let c = p - k - l;
            Port::Corner(c / 3, c % 3)
        }
    }

    fn slot_port(&self, strand: usize, pos: usize) -> usize {
        self.strand_slots[..strand].iter().map(|&c| c as usize).sum::<usize>() + pos
    }

    /// Strand of a global slot index.
    fn strand_of_slot(&self, mut s: usize) -> usize {
        for (i, &c) in self.strand_slots.iter().enumerate() {
            if s < c as usize {
                return i;
            }
            s -= c as usize;
        }
        unreachable!("slot index out of range")
    }

    fn leg_port(&self, j: usize) -> usize {
        self.num_slots() + j
    }

    pub fn to_parts(&self) -> DiagramParts {
        let edge = |p: usize| -> u32 { p.min(self.mate[p] as usize) as u32 };
        let mut slots = Vec::new();
        let mut p = 0;
        for &c in &self.strand_slots {
            slots.push((p..p + c as usize).map(edge).collect());
            p += c as usize;
        }
        let legs = self.labels.iter().enumerate().map(|(j, &lab)| (lab, edge(self.leg_port(j)))).collect();
        let base = self.num_slots() + self.num_legs();
        let trivalent = (0..self.num_trivalent())
            .map(|v| [edge(base + 3 * v), edge(base + 3 * v + 1), edge(base + 3 * v + 2)])
            .collect();
        DiagramParts { slots, trivalent, legs }
    }

    /// Every slot attached to a chord with both ends on one strand.
    pub fn in_h(&self) -> bool {
        let k = self.num_slots();
        (0..k).any(|s| {
            let m = self.mate[s] as usize;
            m < k && self.strand_of_slot(s) == self.strand_of_slot(m)
        })
    }

    /// Labeled edges on the same strand appear in the label order in the
    /// same order as their slots.
    pub fn is_ordered(&self) -> bool {
        let feet = self.leg_feet();
        for i in 0..feet.len() {
            for j in i + 1..feet.len() {
                if let (Some((si, pi)), Some((sj, pj))) = (feet[i], feet[j]) {
                    if si == sj && pi > pj {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// For each leg, `(strand, position)` of the slot at the other end of
    /// its edge, if that end is a slot.
    fn leg_feet(&self) -> Vec<Option<(usize, usize)>> {
        (0..self.num_legs())
            .map(|j| match self.port(self.mate[self.leg_port(j)] as usize) {
                Port::Slot(s) => {
                    let st = self.strand_of_slot(s);
                    Some((st, s - self.slot_port(st, 0)))
                }
                _ => None,
            })
            .collect()
    }

    /// Chords as `(strand, pos, strand, pos)`, lower port first.
    fn chords(&self) -> Vec<(usize, usize, usize, usize)> {
        let k = self.num_slots();
        let mut out = Vec::new();
        for s in 0..k {
            let m = self.mate[s] as usize;
            if m < k && s < m {
                let (a, b) = (self.strand_of_slot(s), self.strand_of_slot(m));
                out.push((a, s - self.slot_port(a, 0), b, m - self.slot_port(b, 0)));
            }
        }
        out
    }
}

/// Parts to canonical form. `None` if the diagram vanishes by AS.
/// Otherwise `(sign, diagram)` with `parts = sign * diagram`.
pub fn canonicalize(parts: &DiagramParts) -> Result<Option<(i64, Diagram)>> {
    let strand_slots: Vec<u8> = parts.slots.iter().map(|s| s.len() as u8).collect();
    let k: usize = parts.slots.iter().map(|s| s.len()).sum();
    let l = parts.legs.len();
    let t = parts.trivalent.len();
    let total = k + l + 3 * t;
    let mut ends: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut p = 0;
    for s in &parts.slots {
        for &e in s {
            ends.entry(e).or_default().push(p);
            p += 1;
        }
    }
    for &(_, e) in &parts.legs {
        ends.entry(e).or_default().push(p);
        p += 1;
    }
    for tri in &parts.trivalent {
        for &e in tri {
            ends.entry(e).or_default().push(p);
            p += 1;
        }
    }
    let mut mate = vec![0u16; total];
    for (e, ps) in &ends {
        if ps.len() != 2 {
            return Err(Error::invalid(format!("edge {e} has {} ends", ps.len())));
        }
        mate[ps[0]] = ps[1] as u16;
        mate[ps[1]] = ps[0] as u16;
    }
    for (a, b) in (0..total).map(|a| (a, mate[a] as usize)) {
        let leg = |x: usize| x >= k && x < k + l;
        if leg(a) && leg(b) {
            return Err(Error::invalid("diagram has a strut"));
        }
    }
    if !pattern_connected(k, l, t, &mate) {
        return Err(Error::invalid("diagram is not pattern-connected"));
    }
    Ok(canonical_mate(k, l, t, &mate)?.map(|(sign, mate)| {
        (sign, Diagram { strand_slots, labels: parts.legs.iter().map(|&(lab, _)| lab).collect(), tri: t as u8, mate })
    }))
}

/// Minimizes the port matching over all orientation flips, traversing from
/// the rigid ports (slots, then legs) and numbering trivalent vertices in
/// discovery order.
fn canonical_mate(k: usize, l: usize, t: usize, mate: &[u16]) -> Result<Option<(i64, Vec<u16>)>> {
    let base = k + l;
    let mut best: Option<Vec<u16>> = None;
    let mut best_signs: u8 = 0; // bit 0: +1 seen, bit 1: -1 seen
    for mask in 0u32..(1u32 << t) {
        let mut id = vec![usize::MAX; t];
        let mut rot = vec![[0usize; 3]; t]; // rot[v][r] = original corner at new position r
        let mut next = 0;
        let mut stack: Vec<usize> = Vec::new();
        for start in 0..base {
            stack.push(start);
            while let Some(q) = stack.pop() {
                let r = mate[q] as usize;
                if r < base {
                    continue;
                }
                let (v, c) = ((r - base) / 3, (r - base) % 3);
                if id[v] != usize::MAX {
                    continue;
                }
                id[v] = next;
                next += 1;
                let order =
                    if mask >> v & 1 == 1 { [c, (c + 2) % 3, (c + 1) % 3] } else { [c, (c + 1) % 3, (c + 2) % 3] };
                rot[v] = order;
                // explore corner 1 before corner 2
                stack.push(base + 3 * v + order[2]);
                stack.push(base + 3 * v + order[1]);
            }
        }
        if next != t {
            return Err(Error::invalid("diagram is not pattern-connected"));
        }
        let relabel = |p: usize| -> usize {
            if p < base {
                p
            } else {
                let (v, c) = ((p - base) / 3, (p - base) % 3);
                let r = rot[v].iter().position(|&x| x == c).expect("corner");
                base + 3 * id[v] + r
            }
        };
        let mut new = vec![0u16; mate.len()];
        for (p, &m) in mate.iter().enumerate() {
            new[relabel(p)] = relabel(m as usize) as u16;
        }
        let sign_bit = if mask.count_ones() % 2 == 0 { 1 } else { 2 };
        match &best {
            Some(b) if new > *b => {}
            Some(b) if new == *b => best_signs |= sign_bit,
            _ => {
                best = Some(new);
                best_signs = sign_bit;
            }
        }
    }
    Ok(match best_signs {
        3 => None,
        1 => Some((1, best.expect("set"))),
        _ => Some((-1, best.expect("set"))),
    })
}

/// Linear combination of canonical diagrams.
pub type DiagramElement = BTreeMap<Diagram, Rational>;

/// `acc += c * parts`, canonicalizing.
pub fn add_parts(acc: &mut DiagramElement, parts: &DiagramParts, c: &Rational) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    if let Some((sign, d)) = canonicalize(parts)? {
        add_term(acc, d, c * &Rational::from_int(sign));
    }
    Ok(())
}

pub fn element_of(d: &Diagram) -> DiagramElement {
    DiagramElement::from([(d.clone(), Rational::one())])
}

pub fn element_add(a: &DiagramElement, b: &DiagramElement, c: &Rational) -> DiagramElement {
    let mut out = a.clone();
    axpy(&mut out, c, b);
    out
}

/// Diagram classes of the restriction tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagramClass {
    /// Pattern-connected diagrams; STU, STU-like, IHX (AS built in).
    Full,
    /// No slots on the rightmost strand; STU and STU-like.
    R,
    /// R without trivalent vertices; STU-like and 4T.
    SR,
    /// SR modulo `H_n`.
    SRmodH,
    /// Ordered SR diagrams, as a subspace of SR/H_n.
    OSR,
    /// Fully ordered SR diagrams on three strands, as a subspace of SR/H_3.
    FOSR,
}

impl DiagramClass {
    pub fn name(self) -> &'static str {
        match self {
            DiagramClass::Full => "full",
            DiagramClass::R => "R",
            DiagramClass::SR => "SR",
            DiagramClass::SRmodH => "SRmodH",
            DiagramClass::OSR => "OSR",
            DiagramClass::FOSR => "FOSR",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let all = [
            DiagramClass::Full,
            DiagramClass::R,
            DiagramClass::SR,
            DiagramClass::SRmodH,
            DiagramClass::OSR,
            DiagramClass::FOSR,
        ];
        all.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpaceSpec {
    pub class: DiagramClass,
    pub strands: usize,
    pub degree: usize,
}

impl SpaceSpec {
    pub fn new(class: DiagramClass, strands: usize, degree: usize) -> Self {
        SpaceSpec { class, strands, degree }
    }

    pub fn contains(&self, d: &Diagram) -> bool {
        if d.strands() != self.strands || d.degree() != self.degree {
            return false;
        }
        let restricted = d.slots_on(self.strands - 1) == 0;
        match self.class {
            DiagramClass::Full => true,
            DiagramClass::R => restricted,
            DiagramClass::SR | DiagramClass::SRmodH => restricted && d.tri == 0,
            DiagramClass::OSR => restricted && d.tri == 0 && d.is_ordered(),
            DiagramClass::FOSR => restricted && d.tri == 0 && d.is_ordered() && (d.in_h() || is_fully_ordered(d)),
        }
    }
}

/// On three strands: every label on strand 1 is below every label on
/// strand 2, and on strand 1 the labeled slots are below the slots of
/// chords joining strands 1 and 2.
pub fn is_fully_ordered(d: &Diagram) -> bool {
    let feet = d.leg_feet();
    let on = |s: usize| feet.iter().enumerate().filter(move |(_, f)| matches!(f, Some((st, _)) if *st == s));
    let max1 = on(0).map(|(j, _)| j).max();
    let min2 = on(1).map(|(j, _)| j).min();
    if let (Some(a), Some(b)) = (max1, min2) {
        if a > b {
            return false;
        }
    }
    let top_label_slot = on(0).filter_map(|(_, f)| f.map(|(_, p)| p)).max();
    let low_chord_slot = d
        .chords()
        .into_iter()
        .filter_map(|(a, pa, b, pb)| match (a, b) {
            (0, 1) => Some(pa),
            (1, 0) => Some(pb),
            _ => None,
        })
        .min();
    match (top_label_slot, low_chord_slot) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    }
}

/// Canonical shapes with `k` slots, `l` legs and `t` trivalent vertices,
/// ignoring strand division and labels (neither affects the canonical
/// matching).
fn shapes(k: usize, l: usize, t: usize) -> Result<Vec<(Vec<u16>, bool)>> {
    let total = k + l + 3 * t;
    let mut out: BTreeSet<Vec<u16>> = BTreeSet::new();
    if total % 2 == 1 {
        return Ok(Vec::new());
    }
    let base = k + l;
    let mut mate = vec![u16::MAX; total];
    let mut found: Vec<Vec<u16>> = Vec::new();
    fn rec(mate: &mut Vec<u16>, k: usize, l: usize, base: usize, found: &mut Vec<Vec<u16>>) {
        let Some(p) = mate.iter().position(|&m| m == u16::MAX) else {
            found.push(mate.clone());
            return;
        };
        let is_leg = |x: usize| x >= k && x < k + l;
        for q in p + 1..mate.len() {
            if mate[q] != u16::MAX {
                continue;
            }
            if is_leg(p) && is_leg(q) {
                continue;
            }
            if p >= base && q >= base && (p - base) / 3 == (q - base) / 3 {
                continue;
            }
            mate[p] = q as u16;
            mate[q] = p as u16;
            rec(mate, k, l, base, found);
            mate[p] = u16::MAX;
            mate[q] = u16::MAX;
        }
    }
    rec(&mut mate, k, l, base, &mut found);
    for m in found {
        if !pattern_connected(k, l, t, &m) {
            continue;
        }
        if let Some((_, c)) = canonical_mate(k, l, t, &m)? {
            out.insert(c);
        }
    }
    Ok(out.into_iter().map(|m| (m, true)).collect())
}

fn pattern_connected(k: usize, l: usize, t: usize, mate: &[u16]) -> bool {
    let total = mate.len();
    let base = k + l;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let nx = parent[y];
            parent[y] = r;
            y = nx;
        }
        r
    }
    let union = |a: usize, b: usize, parent: &mut Vec<usize>| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for p in 0..total {
        union(p, mate[p] as usize, &mut parent);
    }
    for v in 0..t {
        union(base + 3 * v, base + 3 * v + 1, &mut parent);
        union(base + 3 * v, base + 3 * v + 2, &mut parent);
    }
    let with_slot: BTreeSet<usize> = (0..k).map(|s| find(&mut parent, s)).collect();
    (0..total).all(|p| with_slot.contains(&find(&mut parent, p)))
}

fn compositions(k: usize, parts: usize, out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>) {
    if cur.len() + 1 == parts {
        cur.push(k as u8);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for first in 0..=k {
        cur.push(first as u8);
        compositions(k - first, parts, out, cur);
        cur.pop();
    }
}

/// All canonical diagrams of the class and degree, sorted with the
/// diagrams that should be eliminated first (more trivalent vertices, then
/// more legs) at the front.
pub fn enumerate(spec: &SpaceSpec) -> Result<Vec<Diagram>> {
    enumerate_with_trivalent(spec, None)
}

fn enumerate_with_trivalent(spec: &SpaceSpec, only_tri: Option<usize>) -> Result<Vec<Diagram>> {
    if spec.strands < 1 {
        return Err(Error::invalid("need at least one strand"));
    }
    if spec.class == DiagramClass::FOSR && spec.strands != 3 {
        return Err(Error::invalid("FOSR is defined on three strands"));
    }
    let n = spec.strands;
    let d = spec.degree;
    let mut out = Vec::new();
    let max_tri = match spec.class {
        DiagramClass::Full | DiagramClass::R => d,
        _ => 0,
    };
    for t in 0..=max_tri.min(d) {
        if only_tri.is_some_and(|x| x != t) {
            continue;
        }
        let k = d - t;
        if k == 0 && d > 0 {
            continue;
        }
        for l in 0..=d {
            if (3 * t + k + l) % 2 == 1 {
                continue;
            }
            let sh = shapes(k, l, t)?;
            if sh.is_empty() {
                continue;
            }
            let mut comps = Vec::new();
            compositions(k, n, &mut comps, &mut Vec::new());
            for (mate, _) in &sh {
                for comp in &comps {
                    for lab in 0u32..(1 << l) {
                        let labels = (0..l).map(|j| if lab >> j & 1 == 0 { Label::X } else { Label::Y }).collect();
                        let dia = Diagram { strand_slots: comp.clone(), labels, tri: t as u8, mate: mate.clone() };
                        if spec.contains(&dia) {
                            out.push(dia);
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| column_key(a).cmp(&column_key(b)));
    Ok(out)
}

fn column_key(d: &Diagram) -> (Reverse<u8>, Reverse<usize>, &Diagram) {
    (Reverse(d.tri), Reverse(d.num_legs()), d)
}

fn next_edge_id(parts: &DiagramParts) -> u32 {
    let mut m = 0;
    for s in &parts.slots {
        for &e in s {
            m = m.max(e + 1);
        }
    }
    for &(_, e) in &parts.legs {
        m = m.max(e + 1);
    }
    for tri in &parts.trivalent {
        for &e in tri {
            m = m.max(e + 1);
        }
    }
    m
}

/// Renames the occurrences of edge `from` to `to`.
fn rename_edge(parts: &mut DiagramParts, from: u32, to: u32) {
    for s in parts.slots.iter_mut() {
        for e in s.iter_mut() {
            if *e == from {
                *e = to;
            }
        }
    }
    for (_, e) in parts.legs.iter_mut() {
        if *e == from {
            *e = to;
        }
    }
    for tri in parts.trivalent.iter_mut() {
        for e in tri.iter_mut() {
            if *e == from {
                *e = to;
            }
        }
    }
}

/// Swaps the labels at positions `j` and `j + 1` of the global order.
pub fn swap_labels(d: &Diagram, j: usize) -> DiagramParts {
    let mut p = d.to_parts();
    p.legs.swap(j, j + 1);
    p
}

/// Removes the legs at positions `j` and `j + 1` and joins their edges.
pub fn contract_labels(d: &Diagram, j: usize) -> DiagramParts {
    let mut p = d.to_parts();
    let (_, e1) = p.legs[j];
    let (_, e2) = p.legs[j + 1];
    p.legs.drain(j..j + 2);
    rename_edge(&mut p, e2, e1);
    p
}

/// STU-like at label positions `(j, j + 1)`:
/// `D - swap(D) - <v, w> contract(D)`, `v` the upper label.
pub fn stu_like_relation(d: &Diagram, j: usize) -> Result<DiagramElement> {
    let v = d.labels[j + 1];
    let w = d.labels[j];
    let mut rel = element_of(d);
    add_parts(&mut rel, &swap_labels(d, j), &-Rational::one())?;
    add_parts(&mut rel, &contract_labels(d, j), &Rational::from_int(-pairing(v, w)))?;
    Ok(rel)
}

/// The two resolutions `(T, U)` of the trivalent vertex adjacent to slot
/// `pos` of `strand`, with `S = T - U`. `None` if that slot's edge does not
/// reach a trivalent vertex.
pub fn stu_resolution(d: &Diagram, strand: usize, pos: usize) -> Option<(DiagramParts, DiagramParts)> {
    let s = d.slot_port(strand, pos);
    let Port::Corner(v, c) = d.port(d.mate[s] as usize) else {
        return None;
    };
    let mut p = d.to_parts();
    let tri = p.trivalent.remove(v);
    let (a, b) = (tri[(c + 1) % 3], tri[(c + 2) % 3]);
    let mut t = p.clone();
    t.slots[strand].splice(pos..pos + 1, [a, b]);
    let mut u = p;
    u.slots[strand].splice(pos..pos + 1, [b, a]);
    Some((t, u))
}

/// STU at a slot: `S - T + U`.
pub fn stu_relation(d: &Diagram, strand: usize, pos: usize) -> Result<Option<DiagramElement>> {
    let Some((t, u)) = stu_resolution(d, strand, pos) else {
        return Ok(None);
    };
    let mut rel = element_of(d);
    add_parts(&mut rel, &t, &-Rational::one())?;
    add_parts(&mut rel, &u, &Rational::one())?;
    Ok(Some(rel))
}

/// IHX at the edge joining corner `c` of vertex `p` to a corner of another
/// vertex `q`: with `p = (r, e, d)` and `q = (e, a, b)` the relation is
/// `I - H + X` where `H` has `p = (r, a, e)`, `q = (e, b, d)` and `X` has
/// `p = (r, b, e)`, `q = (e, a, d)` (the Jacobi identity
/// `[[a,b],d] = [a,[b,d]] - [b,[a,d]]`).
pub fn ihx_relation(d: &Diagram, pv: usize, pc: usize) -> Result<Option<DiagramElement>> {
    let base = d.num_slots() + d.num_legs();
    let port = base + 3 * pv + pc;
    let Port::Corner(qv, qc) = d.port(d.mate[port] as usize) else {
        return Ok(None);
    };
    if qv == pv {
        return Ok(None);
    }
    let parts = d.to_parts();
    let p = parts.trivalent[pv];
    let q = parts.trivalent[qv];
    let e = p[pc];
    let r = p[(pc + 2) % 3];
    let dd = p[(pc + 1) % 3];
    let a = q[(qc + 1) % 3];
    let b = q[(qc + 2) % 3];
    let with = |np: [u32; 3], nq: [u32; 3]| {
        let mut x = parts.clone();
        x.trivalent[pv] = np;
        x.trivalent[qv] = nq;
        x
    };
    let mut rel = element_of(d);
    add_parts(&mut rel, &with([r, a, e], [e, b, dd]), &-Rational::one())?;
    add_parts(&mut rel, &with([r, b, e], [e, a, dd]), &Rational::one())?;
    Ok(Some(rel))
}

/// 4T relations obtained from a diagram with exactly one trivalent vertex
/// and at least two of its corners on slots: the difference of the STU
/// resolutions at two such slots.
pub fn four_t_relations(s: &Diagram) -> Result<Vec<DiagramElement>> {
    if s.tri != 1 {
        return Ok(Vec::new());
    }
    let mut res = Vec::new();
    for strand in 0..s.strands() {
        for pos in 0..s.slots_on(strand) {
            if let Some((t, u)) = stu_resolution(s, strand, pos) {
                let mut e = DiagramElement::new();
                add_parts(&mut e, &t, &Rational::one())?;
                add_parts(&mut e, &u, &-Rational::one())?;
                res.push(e);
            }
        }
    }
    let mut out = Vec::new();
    for i in 1..res.len() {
        out.push(element_add(&res[0], &res[i], &-Rational::one()));
    }
    Ok(out)
}

/// Relation elements of the class whose terms all lie in the class.
pub fn relation_elements(spec: &SpaceSpec) -> Result<Vec<DiagramElement>> {
    let diagrams = enumerate(spec)?;
    let inside = |e: &DiagramElement| e.keys().all(|d| spec.contains(d));
    let mut out = Vec::new();
    let sr_like =
        matches!(spec.class, DiagramClass::SR | DiagramClass::SRmodH | DiagramClass::OSR | DiagramClass::FOSR);
    for d in &diagrams {
        for j in 0..d.num_legs().saturating_sub(1) {
            let r = stu_like_relation(d, j)?;
            if !r.is_empty() && inside(&r) {
                out.push(r);
            }
        }
        if !sr_like {
            for strand in 0..d.strands() {
                for pos in 0..d.slots_on(strand) {
                    if let Some(r) = stu_relation(d, strand, pos)? {
                        if !r.is_empty() && inside(&r) {
                            out.push(r);
                        }
                    }
                }
            }
        }
        if spec.class == DiagramClass::Full {
            for v in 0..d.num_trivalent() {
                for c in 0..3 {
                    if let Some(r) = ihx_relation(d, v, c)? {
                        if !r.is_empty() {
                            out.push(r);
                        }
                    }
                }
            }
        }
    }
    if sr_like {
        let rspec = SpaceSpec::new(DiagramClass::R, spec.strands, spec.degree);
        for s in &enumerate_with_trivalent(&rspec, Some(1))? {
            for r in four_t_relations(s)? {
                if !r.is_empty() && r.keys().all(|d| rspec.contains(d) && d.tri == 0) {
                    out.push(r);
                }
            }
        }
        if spec.class != DiagramClass::SR {
            for d in &diagrams {
                if d.in_h() {
                    out.push(element_of(d));
                }
            }
        }
    }
    Ok(out)
}

/// A degree slice of a diagram space: enumerated diagrams (columns) and the
/// reduced echelon form of the relation span.
#[derive(Clone, Debug)]
pub struct SpaceSlice {
    spec: SpaceSpec,
    columns: Vec<Diagram>,
    index: BTreeMap<Diagram, usize>,
    relations: Echelon<usize>,
    basis: Vec<usize>,
}

impl SpaceSlice {
    /// For OSR and FOSR the columns and relations are those of SR/H_n and
    /// the basis is a maximal independent set of (fully) ordered diagrams.
    pub fn build(spec: SpaceSpec) -> Result<Self> {
        let ambient_class = match spec.class {
            DiagramClass::OSR | DiagramClass::FOSR => DiagramClass::SRmodH,
            c => c,
        };
        if spec.class == DiagramClass::FOSR && spec.strands != 3 {
            return Err(Error::invalid("FOSR is defined on three strands"));
        }
        let amb = SpaceSpec { class: ambient_class, ..spec };
        let columns = enumerate(&amb)?;
        let index: BTreeMap<Diagram, usize> = columns.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let mut relations = Echelon::new();
        for r in relation_elements(&amb)? {
            let v: SparseVec<usize> = r
                .into_iter()
                .map(|(d, c)| {
                    index.get(&d).copied().map(|i| (i, c)).ok_or_else(|| Error::internal("relation leaves its slice"))
                })
                .collect::<Result<_>>()?;
            relations.insert(v);
        }
        relations.fully_reduce();
        let basis = if ambient_class == spec.class {
            (0..columns.len()).filter(|i| !relations.is_pivot(i)).collect()
        } else {
            let mut span = Echelon::new();
            let mut chosen = Vec::new();
            for (i, d) in columns.iter().enumerate() {
                if spec.contains(d) {
                    let v = relations.reduce(SparseVec::from([(i, Rational::one())]));
                    if span.insert(v) {
                        chosen.push(i);
                    }
                }
            }
            chosen
        };
        Ok(SpaceSlice { spec, columns, index, relations, basis })
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the ambient quotient (differs from `dim` only for the
    /// ordered classes).
    pub fn ambient_dim(&self) -> usize {
        self.columns.len() - self.relations.rank()
    }

    pub fn basis(&self) -> Vec<&Diagram> {
        self.basis.iter().map(|&i| &self.columns[i]).collect()
    }

    pub fn columns(&self) -> &[Diagram] {
        &self.columns
    }

    /// Reduced coordinates (keys are column indices of non-pivot diagrams).
    pub fn coordinates(&self, e: &DiagramElement) -> Result<SparseVec<usize>> {
        let mut v = SparseVec::new();
        for (d, c) in e {
            if d.degree() != self.spec.degree {
                continue;
            }
            let i = self.index.get(d).ok_or_else(|| {
                Error::invalid(format!(
                    "diagram outside slice {} n={} d={}",
                    self.spec.class.name(),
                    self.spec.strands,
                    self.spec.degree
                ))
            })?;
            add_term(&mut v, *i, c.clone());
        }
        Ok(self.relations.reduce(v))
    }

    pub fn is_zero(&self, e: &DiagramElement) -> Result<bool> {
        Ok(self.coordinates(e)?.is_empty())
    }
}

/// Slices for degrees `0..=max_degree`.
#[derive(Clone, Debug)]
pub struct SliceTower {
    slices: Vec<SpaceSlice>,
}

impl SliceTower {
    pub fn build(class: DiagramClass, strands: usize, max_degree: usize) -> Result<Self> {
        let slices =
            (0..=max_degree).map(|d| SpaceSlice::build(SpaceSpec::new(class, strands, d))).collect::<Result<_>>()?;
        Ok(SliceTower { slices })
    }

    pub fn slice(&self, d: usize) -> &SpaceSlice {
        &self.slices[d]
    }

    pub fn max_degree(&self) -> usize {
        self.slices.len() - 1
    }

    /// Per-degree reduced coordinates, ignoring degrees above the tower.
    pub fn coordinates(&self, e: &DiagramElement) -> Result<Vec<SparseVec<usize>>> {
        let mut by_degree: Vec<DiagramElement> = vec![DiagramElement::new(); self.slices.len()];
        for (d, c) in e {
            if d.degree() < self.slices.len() {
                by_degree[d.degree()].insert(d.clone(), c.clone());
            }
        }
        by_degree.iter().zip(&self.slices).map(|(e, s)| s.coordinates(e)).collect()
    }

    pub fn is_zero(&self, e: &DiagramElement) -> Result<bool> {
        Ok(self.coordinates(e)?.iter().all(|v| v.is_empty()))
    }
}

/// Generator images: `x_i`, `y_i` (labeled edge on strand `i`) or `t_ij`
/// (chord between strands `i` and `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Edge(Label, usize),
    Chord(usize, usize),
}

pub fn parse_letter(name: &str, n: usize) -> Result<Letter> {
    let bad = || Error::invalid(format!("generator {name} has no diagram image on {n} strands"));
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(bad)?;
    let digits: Vec<usize> =
        chars.map(|c| c.to_digit(10).map(|x| x as usize)).collect::<Option<_>>().ok_or_else(bad)?;
    let ok = |i: usize| i >= 1 && i <= n;
    match (head, digits.as_slice()) {
        ('x' | 'y', [i]) if ok(*i) => Ok(Letter::Edge(Label::from_char(head).expect("x or y"), *i - 1)),
        ('t', [i, j]) if ok(*i) && ok(*j) && i != j => Ok(Letter::Chord(*i - 1, *j - 1)),
        _ => Err(bad()),
    }
}

/// Diagram of a word, later letters stacked higher.
pub fn word_diagram(letters: &[Letter], n: usize) -> DiagramParts {
    let mut p = DiagramParts { slots: vec![Vec::new(); n], trivalent: Vec::new(), legs: Vec::new() };
    for (e, l) in letters.iter().enumerate() {
        let e = e as u32;
        match *l {
            Letter::Edge(lab, i) => {
                p.slots[i].push(e);
                p.legs.push((lab, e));
            }
            Letter::Chord(i, j) => {
                p.slots[i].push(e);
                p.slots[j].push(e);
            }
        }
    }
    p
}

/// `u_n` applied to an element of an algebra whose generators are named
/// `x_i`, `y_i`, `t_ij` (for example `U t_{1,n}` or a free algebra on some
/// of these letters), word by word.
pub fn u_map(alg: &TruncatedAlgebra, a: &AlgebraElement, n: usize) -> Result<DiagramElement> {
    let letters: Vec<Letter> =
        alg.alphabet().letters().iter().map(|l| parse_letter(&l.name, n)).collect::<Result<_>>()?;
    let mut out = DiagramElement::new();
    for (_, w, c) in a.iter() {
        let word: Vec<Letter> = w.iter().map(|&i| letters[i as usize]).collect();
        add_parts(&mut out, &word_diagram(&word, n), c)?;
    }
    Ok(out)
}

/// `b` stacked on top of `a`; labels of `b` are above those of `a`.
pub fn compose(a: &DiagramElement, b: &DiagramElement) -> Result<DiagramElement> {
    let mut out = DiagramElement::new();
    for (da, ca) in a {
        for (db, cb) in b {
            if da.strands() != db.strands() {
                return Err(Error::invalid("strand count mismatch"));
            }
            let mut p = da.to_parts();
            let q = db.to_parts();
            let shift = next_edge_id(&p);
            for (s, qs) in p.slots.iter_mut().zip(&q.slots) {
                s.extend(qs.iter().map(|e| e + shift));
            }
            p.legs.extend(q.legs.iter().map(|&(l, e)| (l, e + shift)));
            p.trivalent.extend(q.trivalent.iter().map(|t| [t[0] + shift, t[1] + shift, t[2] + shift]));
            add_parts(&mut out, &p, &(ca * cb))?;
        }
    }
    Ok(out)
}

/// The empty diagram on `n` strands.
pub fn unit(n: usize) -> DiagramElement {
    let p = DiagramParts { slots: vec![Vec::new(); n], trivalent: Vec::new(), legs: Vec::new() };
    let mut e = DiagramElement::new();
    add_parts(&mut e, &p, &Rational::one()).expect("empty diagram");
    e
}

/// Drops the terms in `H_n`. Trivalent input is rejected: resolve it with
/// [`gamma_normalize`] first.
pub fn mod_h(e: &DiagramElement) -> Result<DiagramElement> {
    if e.keys().any(|d| d.tri > 0) {
        return Err(Error::invalid("mod_h needs diagrams without trivalent vertices; apply gamma_normalize first"));
    }
    Ok(e.iter().filter(|(d, _)| !d.in_h()).map(|(d, c)| (d.clone(), c.clone())).collect())
}

/// Rewrites each diagram until `step` returns `None`; `step` must express a
/// diagram as a combination of diagrams closer to the target.
fn rewrite(
    e: &DiagramElement,
    limit: usize,
    mut step: impl FnMut(&Diagram) -> Result<Option<DiagramElement>>,
) -> Result<DiagramElement> {
    let mut done = DiagramElement::new();
    let mut todo = e.clone();
    let mut rounds = 0;
    while !todo.is_empty() {
        rounds += 1;
        if rounds > limit {
            return Err(Error::internal("normalizer did not terminate"));
        }
        let mut next = DiagramElement::new();
        for (d, c) in todo {
            match step(&d)? {
                None => add_term(&mut done, d, c),
                Some(img) => axpy(&mut next, &c, &img),
            }
        }
        todo = next;
    }
    Ok(done)
}

/// `D(v above w) = D(w above v) + <v, w> C` at label positions `(j, j+1)`.
fn swap_step(d: &Diagram, j: usize) -> Result<DiagramElement> {
    let v = d.labels[j + 1];
    let w = d.labels[j];
    let mut out = DiagramElement::new();
    add_parts(&mut out, &swap_labels(d, j), &Rational::one())?;
    add_parts(&mut out, &contract_labels(d, j), &Rational::from_int(pairing(v, w)))?;
    Ok(out)
}

/// Inverse of `k`: moves every `x` label below every `y` label using
/// STU-like at the highest consecutive `y < x` pair.
pub fn phi_normalize(e: &DiagramElement) -> Result<DiagramElement> {
    rewrite(e, 10_000, |d| {
        let l = d.labels();
        match (0..l.len().saturating_sub(1)).rev().find(|&j| l[j] == Label::Y && l[j + 1] == Label::X) {
            None => Ok(None),
            Some(j) => swap_step(d, j).map(Some),
        }
    })
}

/// Removes trivalent vertices: STU at the highest slot, on the leftmost
/// strand carrying one, whose edge reaches a trivalent vertex.
pub fn gamma_normalize(e: &DiagramElement) -> Result<DiagramElement> {
    rewrite(e, 10_000, |d| {
        if d.tri == 0 {
            return Ok(None);
        }
        for strand in 0..d.strands() {
            for pos in (0..d.slots_on(strand)).rev() {
                if let Some((t, u)) = stu_resolution(d, strand, pos) {
                    let mut out = DiagramElement::new();
                    add_parts(&mut out, &t, &Rational::one())?;
                    add_parts(&mut out, &u, &-Rational::one())?;
                    return Ok(Some(out));
                }
            }
        }
        Err(Error::internal("trivalent vertex not reachable from a slot"))
    })
}

/// Among same-strand labeled edges whose label order disagrees with their
/// slot order, the pair closest in the label order (highest on ties), as
/// label positions `(i, j)`, `i < j`.
fn closest_unordered(d: &Diagram, strands: impl Fn(usize) -> bool) -> Option<(usize, usize)> {
    let feet = d.leg_feet();
    let mut best: Option<(usize, usize)> = None;
    for j in 0..feet.len() {
        for i in (0..j).rev() {
            if let (Some((si, pi)), Some((sj, pj))) = (feet[i], feet[j]) {
                if si == sj && strands(si) && pi > pj {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => j - i < bj - bi || (j - i == bj - bi && i > bi),
                    };
                    if better {
                        best = Some((i, j));
                    }
                    break;
                }
            }
        }
    }
    best
}

/// Moves the label at position `j` down to position `i` one swap at a
/// time: `D = D' + Σ contraction terms`.
fn move_label_down(d: &Diagram, i: usize, j: usize) -> Result<DiagramElement> {
    let mut out = DiagramElement::new();
    let mut cur = element_of(d);
    for pos in (i..j).rev() {
        let mut next = DiagramElement::new();
        for (dd, c) in &cur {
            let v = dd.labels[pos + 1];
            let w = dd.labels[pos];
            add_parts(&mut next, &swap_labels(dd, pos), c)?;
            add_parts(&mut out, &contract_labels(dd, pos), &(c * &Rational::from_int(pairing(v, w))))?;
        }
        cur = next;
    }
    axpy(&mut out, &Rational::one(), &cur);
    Ok(out)
}

/// Orders labels of same-strand labeled edges along their strand (SR
/// input). Exact modulo STU-like.
pub fn beta_normalize(e: &DiagramElement) -> Result<DiagramElement> {
    if e.keys().any(|d| d.tri > 0) {
        return Err(Error::invalid("beta_normalize needs diagrams without trivalent vertices"));
    }
    rewrite(e, 10_000, |d| match closest_unordered(d, |_| true) {
        None => Ok(None),
        Some((i, j)) => move_label_down(d, i, j).map(Some),
    })
}

/// Full ordering on three strands (OSR input): 1-labeled edges get labels
/// below 2-labeled edges (case A, STU-like) and slots below the strand-1
/// ends of 1-2 chords (case B, 4T followed by re-ordering).
pub fn alpha_normalize(e: &DiagramElement) -> Result<DiagramElement> {
    if let Some(d) = e.keys().next() {
        if d.strands() != 3 {
            return Err(Error::invalid("alpha_normalize is defined on three strands"));
        }
    }
    if e.keys().any(|d| d.tri > 0) {
        return Err(Error::invalid("alpha_normalize needs diagrams without trivalent vertices"));
    }
    rewrite(e, 100_000, |d| {
        if d.in_h() {
            return Ok(None);
        }
        if let Some((i, j)) = closest_unordered(d, |_| true) {
            return move_label_down(d, i, j).map(Some);
        }
        let feet = d.leg_feet();
        // case A: highest 1-labeled edge whose label sits right above a 2-labeled edge's label
        for j in (1..feet.len()).rev() {
            if matches!(feet[j], Some((0, _))) && matches!(feet[j - 1], Some((1, _))) {
                return swap_step(d, j - 1).map(Some);
            }
        }
        // case B: highest 1-labeled edge whose slot sits right above a strand-1 end of a 1-2 chord
        let k1 = d.slots_on(0);
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for (j, f) in feet.iter().enumerate() {
            if let Some((0, p)) = *f {
                if p > 0 {
                    let below = d.mate[d.slot_port(0, p - 1)] as usize;
                    if below < d.num_slots() && below >= k1 && d.strand_of_slot(below) == 1 {
                        cands.push((j, p));
                    }
                }
            }
        }
        if let Some(&(_, p)) = cands.iter().max() {
            return four_t_slide(d, p).map(Some);
        }
        Ok(None)
    })
}

/// Slides the labeled edge at slot `p` of strand 1 below the chord end at
/// slot `p - 1` using the 4T relation through the diagram where both meet
/// in one trivalent vertex.
fn four_t_slide(d: &Diagram, p: usize) -> Result<DiagramElement> {
    let parts = d.to_parts();
    let e = parts.slots[0][p];
    let f = parts.slots[0][p - 1];
    let fresh = next_edge_id(&parts);
    // S: one vertex (r, f, e) with r on strand 1 at position p-1.
    let mut s = parts.clone();
    s.slots[0].splice(p - 1..p + 1, [fresh]);
    s.trivalent.push([fresh, f, e]);
    // canonical form keeps slot positions; the vertex orientation may flip,
    // which changes both sides alike
    let Some((_, sd)) = canonicalize(&s)? else {
        return Err(Error::internal("4T vertex vanished"));
    };
    let (t1, u1) = stu_resolution(&sd, 0, p - 1).ok_or_else(|| Error::internal("4T strand-1 resolution"))?;
    let f_pos2 = parts.slots[1].iter().position(|&x| x == f).ok_or_else(|| Error::internal("chord end"))?;
    let (t2, u2) = stu_resolution(&sd, 1, f_pos2).ok_or_else(|| Error::internal("4T strand-2 resolution"))?;
    let mut side1 = DiagramElement::new();
    add_parts(&mut side1, &t1, &Rational::one())?;
    add_parts(&mut side1, &u1, &-Rational::one())?;
    let mut side2 = DiagramElement::new();
    add_parts(&mut side2, &t2, &Rational::one())?;
    add_parts(&mut side2, &u2, &-Rational::one())?;
    // side1 = ±(D - D_swapped); solve for D
    let c = side1.get(d).cloned().ok_or_else(|| Error::internal("4T does not contain the diagram"))?;
    let mut rhs = element_add(&side2, &side1, &-Rational::one());
    axpy(&mut rhs, &c, &element_of(d));
    Ok(crate::linalg::scale(&rhs, &c.recip()))
}

/// Comb tree `[y, [y, ... [y, x]]]` with `i` trivalent vertices attached to
/// strand 1 (0-based strand 0) of `n` strands, labels in the order
/// `y, ..., y, x` from the root outwards, lowest first.
pub fn comb_diagram(i: usize, n: usize) -> Result<DiagramElement> {
    // edges: 0 root; vertex k has corners (in_k, y_k, out_k)
    let mut p = DiagramParts { slots: vec![Vec::new(); n], trivalent: Vec::new(), legs: Vec::new() };
    p.slots[0].push(0);
    let mut next = 1u32;
    let mut inner = 0u32;
    for _ in 0..i {
        let y = next;
        let out = next + 1;
        next += 2;
        p.trivalent.push([inner, y, out]);
        p.legs.push((Label::Y, y));
        inner = out;
    }
    p.legs.push((Label::X, inner));
    let mut e = DiagramElement::new();
    add_parts(&mut e, &p, &Rational::one())?;
    Ok(e)
}

/// Result of the rank comparison of `ũ_s` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoDegree {
    pub degree: usize,
    /// `dim RU t_{1,n}` in this degree.
    pub source_dim: usize,
    /// `dim SR/H_n` in this degree.
    pub target_dim: usize,
    /// Rank of words -> `SR/H_n`, i.e. of the image of `ũ_s`.
    pub image_rank: usize,
    /// Rank of words -> (`U t_{1,n}`, `SR/H_n`) jointly.
    pub joint_rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Compares `ũ_s : RU t_{1,n} -> SR/H_n` degree by degree. The words in
/// `x_i, y_i` (`i < n`) span both sides; `ũ_s` is well defined and
/// injective iff the two coordinate maps on words have the same kernel,
/// i.e. `rank(A) = rank(B) = rank(A, B)`.
pub fn restricted_iso_report(n: usize, max_degree: usize) -> Result<Vec<IsoDegree>> {
    if !(2..=3).contains(&n) {
        return Err(Error::invalid("the restricted map is compared for n = 2, 3 only"));
    }
    let alg = TruncatedAlgebra::t1n_with_form(n, max_degree, crate::algebra::IntersectionForm::CENTRAL)?;
    let gens: Vec<u8> = (1..n)
        .flat_map(|i| [format!("x{i}"), format!("y{i}")])
        .map(|s| alg.generator_index(&s).expect("generator"))
        .collect();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let slice = SpaceSlice::build(SpaceSpec::new(DiagramClass::SRmodH, n, d))?;
        let mut a = Echelon::new();
        let mut b = Echelon::new();
        let mut ab: Echelon<JointKey> = Echelon::new();
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..d {
            words = words
                .into_iter()
                .flat_map(|w| {
                    gens.iter().map(move |&g| {
                        let mut v = w.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        for w in &words {
            let e = alg.word(w);
            let va = e.degree_part(d).clone();
            let vb = slice.coordinates(&u_map(&alg, &e_raw(&alg, w), n)?)?;
            let mut joint: SparseVec<JointKey> =
                va.iter().map(|(k, c)| (JointKey::Source(k.clone()), c.clone())).collect();
            joint.extend(vb.iter().map(|(k, c)| (JointKey::Target(*k), c.clone())));
            a.insert(va);
            b.insert(vb);
            ab.insert(joint);
        }
        let source_dim = a.rank();
        let image_rank = b.rank();
        out.push(IsoDegree {
            degree: d,
            source_dim,
            target_dim: slice.dim(),
            image_rank,
            joint_rank: ab.rank(),
            injective: source_dim == image_rank && image_rank == ab.rank(),
            surjective: image_rank == slice.dim(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum JointKey {
    Source(Vec<u8>),
    Target(usize),
}

/// A raw (unreduced) word as an element, so that `u_map` sees the word
/// itself rather than its normal form.
fn e_raw(alg: &TruncatedAlgebra, w: &[u8]) -> AlgebraElement {
    let free = TruncatedAlgebra::free(alg.alphabet(), alg.truncation());
    free.word(w)
}

/// Per degree, whether `mod_h(u_2(x̃_1)) = Σ_i c_i γ(D_i)` in SR/H_2, where
/// `D_i` is the comb with `i` trivalent vertices and `c_i` the coefficient of
/// `(ad y_1)^i (x_1)` in `x̃_1`. With `literal_bernoulli` the coefficients
/// are `B_i` instead of `B_i / i!`.
pub fn chain_expansion_check(max_degree: usize, literal_bernoulli: bool) -> Result<Vec<(usize, usize)>> {
    use crate::lie::{ad_series, Alphabet, LieSeries};
    let ab = Alphabet::uniform(&["x1", "y1"])?;
    let x = LieSeries::generator(&ab, "x1", max_degree)?;
    let y = LieSeries::generator(&ab, "y1", max_degree)?;
    let coeffs = if literal_bernoulli { bernoulli_table(max_degree) } else { bernoulli_over_factorial(max_degree) };
    let xt = ad_series(&y, &x, &bernoulli_over_factorial(max_degree), max_degree)?;
    let free = TruncatedAlgebra::free(&ab, max_degree);
    let lhs = mod_h(&u_map(&free, &free.from_lie(&xt)?, 2)?)?;
    let mut rhs = DiagramElement::new();
    for (i, c) in coeffs.iter().enumerate().take(max_degree) {
        axpy(&mut rhs, c, &gamma_normalize(&comb_diagram(i, 2)?)?);
    }
    let rhs = mod_h(&rhs)?;
    let tower = SliceTower::build(DiagramClass::SRmodH, 2, max_degree)?;
    let diff = element_add(&lhs, &rhs, &-Rational::one());
    Ok(tower.coordinates(&diff)?.into_iter().enumerate().skip(1).map(|(d, v)| (d, v.len())).collect())
}

/// Human-readable summary such as `slots [[0,1],[2]] legs x:0 y:1`.
pub fn describe(d: &Diagram) -> String {
    let p = d.to_parts();
    let legs: Vec<String> = p.legs.iter().map(|(l, e)| format!("{}:{}", l.as_char(), e)).collect();
    let tris: Vec<String> = p.trivalent.iter().map(|t| format!("({},{},{})", t[0], t[1], t[2])).collect();
    format!("slots {:?} tri [{}] legs [{}]", p.slots, tris.join(" "), legs.join(" "))
}
