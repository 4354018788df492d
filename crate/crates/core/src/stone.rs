//! Finite Stone duality.
//!
//! Points of `Stone(B)` are the prime filters of `B`; for a finite algebra
//! each is principal on an atom, so point `i` is the filter above atom `i`
//! and the space is discrete. Going back, `Bool(X)` is the algebra of
//! clopen subsets of a finite space `X`, whose atoms are the minimal nonempty
//! clopens.

use crate::lindenbaum::{BoolHom, Element, FiniteBooleanAlgebra, HomViolation};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Point subsets are bitmasks over point indices.
pub type PointSet = u64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
enum Opens {
    Discrete,
    Family(BTreeSet<PointSet>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("open family must contain the empty set and the whole space")]
    MissingBounds,
    #[error("open family is not closed under {0}")]
    NotClosed(&'static str),
    #[error("open set {0:#b} mentions points outside the space")]
    OutOfRange(PointSet),
    #[error("a space has at most 62 points")]
    TooLarge,
}

/// A finite topological space on points `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSpace {
    points: usize,
    opens: Opens,
}

impl FiniteSpace {
    pub fn discrete(points: usize) -> Self {
        assert!(points <= 62);
        FiniteSpace { points, opens: Opens::Discrete }
    }

    /// A space with an explicit open family, checked to be a topology.
    pub fn new(points: usize, opens: impl IntoIterator<Item = PointSet>) -> Result<Self, SpaceError> {
        if points > 62 {
            return Err(SpaceError::TooLarge);
        }
        let full = full_set(points);
        let family: BTreeSet<PointSet> = opens.into_iter().collect();
        if let Some(&bad) = family.iter().find(|&&o| o & !full != 0) {
            return Err(SpaceError::OutOfRange(bad));
        }
        if !family.contains(&0) || !family.contains(&full) {
            return Err(SpaceError::MissingBounds);
        }
        for &a in &family {
            for &b in &family {
                if !family.contains(&(a | b)) {
                    return Err(SpaceError::NotClosed("union"));
                }
                if !family.contains(&(a & b)) {
                    return Err(SpaceError::NotClosed("intersection"));
                }
            }
        }
        Ok(FiniteSpace { points, opens: Opens::Family(family) })
    }

    /// Two points `a = 0`, `b = 1` with opens `∅, {a}, {a, b}`.
    pub fn sierpinski() -> Self {
        FiniteSpace::new(2, [0b00, 0b01, 0b11]).expect("valid topology")
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> PointSet {
        full_set(self.points)
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        match &self.opens {
            Opens::Discrete => s & !self.full() == 0,
            Opens::Family(f) => f.contains(&s),
        }
    }

    pub fn is_clopen(&self, s: PointSet) -> bool {
        self.is_open(s) && self.is_open(!s & self.full())
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.points).all(|p| self.is_open(1 << p))
    }

    pub fn opens(&self) -> Vec<PointSet> {
        match &self.opens {
            Opens::Discrete => (0..=self.full()).collect(),
            Opens::Family(f) => f.iter().copied().collect(),
        }
    }

    pub fn clopens(&self) -> Vec<PointSet> {
        self.opens().into_iter().filter(|&s| self.is_clopen(s)).collect()
    }
}

fn full_set(points: usize) -> PointSet {
    if points == 0 {
        0
    } else {
        u64::MAX >> (64 - points)
    }
}

/// A prime filter of a finite Boolean algebra, recorded by its atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StonePoint {
    pub atom: usize,
}

impl StonePoint {
    /// The filter's members: every element above the atom.
    pub fn filter(&self, b: &FiniteBooleanAlgebra) -> Vec<Element> {
        b.elements().filter(|e| self.contains(*e)).collect()
    }

    pub fn contains(&self, e: Element) -> bool {
        e.contains_atom(self.atom)
    }
}

/// Checks by definition that `set` is a prime filter of `b`: proper,
/// upward closed, closed under meets, and containing one of `x`, `y`
/// whenever it contains `x ∨ y`.
pub fn is_prime_filter(b: &FiniteBooleanAlgebra, set: &BTreeSet<Element>) -> bool {
    if set.is_empty() || set.contains(&b.bottom()) {
        return false;
    }
    for &x in set {
        for y in b.elements() {
            if b.le(x, y) && !set.contains(&y) {
                return false;
            }
            if set.contains(&y) && !set.contains(&b.meet(x, y)) {
                return false;
            }
        }
    }
    for x in b.elements() {
        for y in b.elements() {
            if set.contains(&b.join(x, y)) && !set.contains(&x) && !set.contains(&y) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuousMap {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub map: Vec<usize>,
}

impl ContinuousMap {
    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn preimage(&self, s: PointSet) -> PointSet {
        self.map.iter().enumerate().filter(|(_, &q)| s >> q & 1 == 1).fold(0, |acc, (p, _)| acc | 1 << p)
    }

    /// Every open of the target pulls back to an open of the source. For a
    /// discrete target the singletons generate every open under union.
    pub fn is_continuous(&self) -> bool {
        if self.map.len() != self.source.point_count() || self.map.iter().any(|&q| q >= self.target.point_count()) {
            return false;
        }
        let generators = match self.target.opens {
            Opens::Discrete => (0..self.target.point_count()).map(|q| 1 << q).collect(),
            Opens::Family(ref f) => f.iter().copied().collect::<Vec<_>>(),
        };
        generators.into_iter().all(|o| self.source.is_open(self.preimage(o)))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.point_count()];
        self.map.len() == self.target.point_count() && self.map.iter().all(|&q| !std::mem::replace(&mut seen[q], true))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ContinuousMap) -> ContinuousMap {
        ContinuousMap { source: self.source.clone(), target: other.target.clone(), map: self.map.iter().map(|&q| other.map[q]).collect() }
    }
}

/// `Stone(B)`: one point per atom, discrete.
pub fn stone_space(b: &FiniteBooleanAlgebra) -> FiniteSpace {
    FiniteSpace::discrete(b.atom_count())
}

pub fn stone_points(b: &FiniteBooleanAlgebra) -> Vec<StonePoint> {
    (0..b.atom_count()).map(|atom| StonePoint { atom }).collect()
}

/// `Bool(X)` together with the point set behind each of its atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClopenAlgebra {
    pub algebra: FiniteBooleanAlgebra,
    /// Minimal nonempty clopens, ordered by their least point.
    pub blocks: Vec<PointSet>,
}

impl ClopenAlgebra {
    pub fn clopen_of(&self, e: Element) -> PointSet {
        e.atom_indices().fold(0, |acc, i| acc | self.blocks[i])
    }

    /// The element whose clopen is `s`, if `s` is a union of blocks.
    pub fn element_of(&self, s: PointSet) -> Option<Element> {
        let mut e = 0u64;
        let mut covered = 0;
        for (i, &b) in self.blocks.iter().enumerate() {
            if b & s == b {
                e |= 1 << i;
                covered |= b;
            }
        }
        (covered == s).then_some(Element(e))
    }

    /// The block containing point `p`.
    pub fn block_of(&self, p: usize) -> usize {
        self.blocks.iter().position(|b| b >> p & 1 == 1).expect("blocks partition the space")
    }
}

/// The clopen algebra of `x`, with pointwise operations.
pub fn bool_of_space(x: &FiniteSpace) -> ClopenAlgebra {
    if x.opens == Opens::Discrete {
        let blocks = (0..x.point_count()).map(|p| 1 << p).collect();
        return ClopenAlgebra { algebra: FiniteBooleanAlgebra::new(x.point_count()), blocks };
    }
    let clopens = x.clopens();
    // A point's block is the intersection of the clopens containing it.
    let mut blocks: Vec<PointSet> = Vec::new();
    for p in 0..x.point_count() {
        let block = clopens.iter().filter(|&&c| c >> p & 1 == 1).fold(x.full(), |acc, &c| acc & c);
        if !blocks.contains(&block) {
            blocks.push(block);
        }
    }
    ClopenAlgebra { algebra: FiniteBooleanAlgebra::new(blocks.len()), blocks }
}

/// Result of checking that `b ↦ {p ∈ Stone(B) : b ∈ p}` is an isomorphism
/// `B ≅ Bool(Stone(B))`.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleDual {
    pub hom: BoolHom,
    pub bijective: bool,
    pub preserves_operations: bool,
    pub agrees_with_filters: bool,
    pub violation: Option<HomViolation>,
}

impl DoubleDual {
    pub fn verified(&self) -> bool {
        self.bijective && self.preserves_operations && self.agrees_with_filters
    }
}

pub fn double_dual_iso(b: &FiniteBooleanAlgebra) -> DoubleDual {
    let space = stone_space(b);
    let clopen = bool_of_space(&space);
    let points = stone_points(b);
    // b ↦ set of prime filters containing b, read as an element of Bool(Stone(B)).
    let eta = |e: Element| -> Element {
        let s = points.iter().enumerate().filter(|(_, p)| p.contains(e)).fold(0, |acc, (i, _)| acc | 1u64 << i);
        clopen.element_of(s).expect("every subset of a discrete space is clopen")
    };
    // Dual atom map: atom c of Bool(Stone(B)) lies under eta(b) for exactly one atom b.
    let atom_map: Vec<usize> =
        (0..clopen.algebra.atom_count()).map(|c| (0..b.atom_count()).find(|&a| eta(b.atom(a)).contains_atom(c)).unwrap_or(0)).collect();
    let hom = BoolHom::from_atom_map(b, &clopen.algebra, atom_map).expect("atom map in range");
    let mut images = BTreeSet::new();
    let mut agrees = true;
    for e in b.elements() {
        let v = eta(e);
        agrees &= hom.apply(e) == v;
        images.insert(v);
    }
    let bijective = images.len() as u64 == b.size() && clopen.algebra.size() == b.size();
    let violation = hom.verify().err();
    DoubleDual { preserves_operations: violation.is_none(), bijective, agrees_with_filters: agrees, violation, hom }
}

/// `X -> Stone(Bool(X))`: each point goes to the prime filter of clopens
/// containing it, i.e. to its block.
pub fn unit_map(x: &FiniteSpace) -> ContinuousMap {
    let clopen = bool_of_space(x);
    let map = (0..x.point_count()).map(|p| clopen.block_of(p)).collect();
    ContinuousMap { source: x.clone(), target: stone_space(&clopen.algebra), map }
}

/// `Stone(h) : Stone(C) -> Stone(B)` for `h : B -> C`, sending a prime
/// filter to its preimage under `h`.
pub fn stone_dual_of_hom(h: &BoolHom) -> ContinuousMap {
    let (b, c) = (h.source(), h.target());
    let map = (0..c.atom_count())
        .map(|q| {
            // The preimage filter is principal; its generator is the unique
            // atom of B whose image lies in the filter at q.
            (0..b.atom_count()).find(|&a| h.apply(b.atom(a)).contains_atom(q)).expect("homs send atoms to a partition")
        })
        .collect();
    ContinuousMap { source: stone_space(&c), target: stone_space(&b), map }
}

impl fmt::Display for StonePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑a{}", self.atom)
    }
}
