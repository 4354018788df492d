//! Finite Boolean algebras, Lindenbaum–Tarski algebras of propositional
//! theories, and homomorphisms between finite algebras.
//!
//! A finite Boolean algebra is stored as the powerset of its atoms: an
//! element is a bitmask over atom indices, join is union, meet is
//! intersection. For a propositional theory the atoms are its satisfying
//! truth assignments, so the Lindenbaum algebra `F(V)/A` is the powerset of
//! the model set and a formula's class is its truth set.
//!
//! Homomorphisms are kept in dual form. A hom `B -> C` is a function from the
//! atoms of `C` to the atoms of `B`; the element map sends `e` to the set of
//! target atoms whose image lies under `e`.

use crate::error::{Error, Result};
use crate::theory::{Formula, Fragment, Theory};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Elements are `u64` bitmasks, so no algebra may have more atoms than this.
pub const MAX_REPRESENTABLE_ATOMS: usize = 62;

/// Exponential-blowup guards shared by the enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Capacity {
    pub max_atoms: usize,
    pub max_homs: u128,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity { max_atoms: DEFAULT_MAX_ATOMS, max_homs: 1 << 20 }
    }
}

impl Capacity {
    pub fn with_max_atoms(max_atoms: usize) -> Self {
        Capacity { max_atoms: max_atoms.min(MAX_REPRESENTABLE_ATOMS), ..Capacity::default() }
    }
}

/// A set of atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Element(pub u64);

impl Element {
    pub fn contains_atom(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn atom_indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 >> i & 1 == 1)
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atom_indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", atoms.join(","))
    }
}

/// Values of the propositional letters, keyed by letter name. The derived
/// order is lexicographic on the letters' bits in name order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TruthAssignment(pub BTreeMap<String, bool>);

impl TruthAssignment {
    pub fn get(&self, letter: &str) -> Option<bool> {
        self.0.get(letter).copied()
    }
}

impl fmt::Display for TruthAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={}", u8::from(*v))).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The powerset algebra on `atom_count` atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteBooleanAlgebra {
    atom_count: usize,
    labels: Option<Vec<TruthAssignment>>,
}

impl FiniteBooleanAlgebra {
    /// # Panics
    /// If `atom_count` exceeds [`MAX_REPRESENTABLE_ATOMS`].
    pub fn new(atom_count: usize) -> Self {
        assert!(atom_count <= MAX_REPRESENTABLE_ATOMS, "algebra with {atom_count} atoms is not representable");
        FiniteBooleanAlgebra { atom_count, labels: None }
    }

    pub fn try_new(atom_count: usize, cap: &Capacity) -> Result<Self> {
        if atom_count > cap.max_atoms {
            return Err(Error::capacity("algebra atoms", atom_count as u128, cap.max_atoms as u128));
        }
        Ok(FiniteBooleanAlgebra::new(atom_count))
    }

    pub fn labeled(labels: Vec<TruthAssignment>) -> Self {
        let mut b = FiniteBooleanAlgebra::new(labels.len());
        b.labels = Some(labels);
        b
    }

    /// The two-element algebra `{⊥, ⊤}`.
    pub fn two() -> Self {
        FiniteBooleanAlgebra::new(1)
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn labels(&self) -> Option<&[TruthAssignment]> {
        self.labels.as_deref()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.atom_count
    }

    /// True for the one-element algebra, where `⊤ = ⊥`.
    pub fn is_degenerate(&self) -> bool {
        self.atom_count == 0
    }

    pub fn top(&self) -> Element {
        Element(self.size() - 1)
    }

    pub fn bottom(&self) -> Element {
        Element(0)
    }

    pub fn join(&self, a: Element, b: Element) -> Element {
        Element(a.0 | b.0)
    }

    pub fn meet(&self, a: Element, b: Element) -> Element {
        Element(a.0 & b.0)
    }

    pub fn complement(&self, a: Element) -> Element {
        Element(!a.0 & self.top().0)
    }

    pub fn implies(&self, a: Element, b: Element) -> Element {
        self.join(self.complement(a), b)
    }

    pub fn le(&self, a: Element, b: Element) -> bool {
        a.0 & !b.0 == 0
    }

    pub fn contains(&self, a: Element) -> bool {
        a.0 & !self.top().0 == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size()).map(Element)
    }

    pub fn atom(&self, i: usize) -> Element {
        debug_assert!(i < self.atom_count);
        Element(1 << i)
    }

    pub fn atoms(&self) -> impl Iterator<Item = Element> {
        (0..self.atom_count).map(|i| Element(1 << i))
    }

    /// The index of `a` if it is an atom.
    pub fn atom_index(&self, a: Element) -> Option<usize> {
        (self.contains(a) && a.count() == 1).then(|| a.0.trailing_zeros() as usize)
    }
}

/// A homomorphism of finite Boolean algebras in dual form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoolHom {
    source_atoms: usize,
    target_atoms: usize,
    /// `atom_map[c]` is the source atom lying under the preimage of target atom `c`.
    atom_map: Vec<usize>,
}

/// A failed preservation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomViolation {
    pub operation: &'static str,
    pub arguments: Vec<Element>,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.arguments.iter().map(|e| e.to_string()).collect();
        write!(f, "{} not preserved at ({})", self.operation, args.join(", "))
    }
}

impl BoolHom {
    pub fn from_atom_map(source: &FiniteBooleanAlgebra, target: &FiniteBooleanAlgebra, atom_map: Vec<usize>) -> Result<Self> {
        BoolHom::from_atom_map_counts(source.atom_count(), target.atom_count(), atom_map)
    }

    pub fn from_atom_map_counts(source_atoms: usize, target_atoms: usize, atom_map: Vec<usize>) -> Result<Self> {
        if atom_map.len() != target_atoms {
            return Err(Error::InvalidHom(format!("atom map has {} entries, target has {target_atoms} atoms", atom_map.len())));
        }
        if let Some(bad) = atom_map.iter().find(|&&a| a >= source_atoms) {
            return Err(Error::InvalidHom(format!("atom {bad} out of range for source with {source_atoms} atoms")));
        }
        Ok(BoolHom { source_atoms, target_atoms, atom_map })
    }

    /// Builds a hom from an explicit element table (`table[e]` is the image
    /// of the element with bitmask `e`). The table is checked to preserve
    /// every operation before the dual atom map is extracted.
    pub fn from_element_table(source: &FiniteBooleanAlgebra, target: &FiniteBooleanAlgebra, table: &[u64]) -> Result<Self> {
        if table.len() as u64 != source.size() {
            return Err(Error::InvalidHom(format!("table has {} entries, source has {} elements", table.len(), source.size())));
        }
        if let Some(bad) = table.iter().find(|&&v| !target.contains(Element(v))) {
            return Err(Error::InvalidHom(format!("image {bad} is not an element of the target")));
        }
        let f = |e: Element| Element(table[e.0 as usize]);
        if let Some(v) = check_preservation(source, target, f) {
            return Err(Error::InvalidHom(v.to_string()));
        }
        let mut atom_map = Vec::with_capacity(target.atom_count());
        for c in 0..target.atom_count() {
            let under: Vec<usize> = (0..source.atom_count()).filter(|&b| f(source.atom(b)).contains_atom(c)).collect();
            match under[..] {
                [b] => atom_map.push(b),
                _ => return Err(Error::InvalidHom(format!("target atom {c} is covered {} times", under.len()))),
            }
        }
        BoolHom::from_atom_map(source, target, atom_map)
    }

    pub fn identity(algebra: &FiniteBooleanAlgebra) -> Self {
        let n = algebra.atom_count();
        BoolHom { source_atoms: n, target_atoms: n, atom_map: (0..n).collect() }
    }

    pub fn source(&self) -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra::new(self.source_atoms)
    }

    pub fn target(&self) -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra::new(self.target_atoms)
    }

    pub fn source_atoms(&self) -> usize {
        self.source_atoms
    }

    pub fn target_atoms(&self) -> usize {
        self.target_atoms
    }

    pub fn atom_map(&self) -> &[usize] {
        &self.atom_map
    }

    pub fn apply(&self, e: Element) -> Element {
        let mut out = 0u64;
        for (c, &b) in self.atom_map.iter().enumerate() {
            if e.contains_atom(b) {
                out |= 1 << c;
            }
        }
        Element(out)
    }

    /// `self ∘ first`. Atom maps compose contravariantly.
    pub fn compose(&self, first: &BoolHom) -> Result<BoolHom> {
        if first.target_atoms != self.source_atoms {
            return Err(Error::InvalidHom(format!("cannot compose: {} atoms vs {} atoms", first.target_atoms, self.source_atoms)));
        }
        let atom_map = self.atom_map.iter().map(|&b| first.atom_map[b]).collect();
        Ok(BoolHom { source_atoms: first.source_atoms, target_atoms: self.target_atoms, atom_map })
    }

    pub fn is_isomorphism(&self) -> bool {
        if self.source_atoms != self.target_atoms {
            return false;
        }
        let mut seen = vec![false; self.source_atoms];
        self.atom_map.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    pub fn inverse(&self) -> Option<BoolHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut inv = vec![0; self.source_atoms];
        for (c, &b) in self.atom_map.iter().enumerate() {
            inv[b] = c;
        }
        Some(BoolHom { source_atoms: self.target_atoms, target_atoms: self.source_atoms, atom_map: inv })
    }

    /// Checks that the element map preserves ⊤, ⊥, ¬, ∧ and ∨.
    pub fn verify(&self) -> Result<(), HomViolation> {
        match check_preservation(&self.source(), &self.target(), |e| self.apply(e)) {
            None => Ok(()),
            Some(v) => Err(v),
        }
    }
}

impl fmt::Display for BoolHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {:?}", self.source_atoms, self.target_atoms, self.atom_map)
    }
}

/// Exhaustive on all element pairs for algebras with at most 2^10 elements;
/// above that the binary operations are checked against ⊤, ⊥, atoms and
/// coatoms, which generate the algebra under ∨ and ∧.
pub fn check_preservation(
    source: &FiniteBooleanAlgebra,
    target: &FiniteBooleanAlgebra,
    f: impl Fn(Element) -> Element,
) -> Option<HomViolation> {
    let fail = |operation, arguments| Some(HomViolation { operation, arguments });
    if f(source.top()) != target.top() {
        return fail("top", vec![]);
    }
    if f(source.bottom()) != target.bottom() {
        return fail("bottom", vec![]);
    }
    for a in source.elements() {
        if f(source.complement(a)) != target.complement(f(a)) {
            return fail("not", vec![a]);
        }
    }
    let partners: Vec<Element> = if source.size() <= 1 << 10 {
        source.elements().collect()
    } else {
        let mut v = vec![source.top(), source.bottom()];
        v.extend(source.atoms());
        v.extend(source.atoms().map(|a| source.complement(a)));
        v
    };
    for a in source.elements() {
        let fa = f(a);
        for &b in &partners {
            if f(source.meet(a, b)) != target.meet(fa, f(b)) {
                return fail("and", vec![a, b]);
            }
            if f(source.join(a, b)) != target.join(fa, f(b)) {
                return fail("or", vec![a, b]);
            }
        }
    }
    None
}

/// Number of homs `b -> c`: `|atoms(b)|^|atoms(c)|`.
pub fn hom_count(b: &FiniteBooleanAlgebra, c: &FiniteBooleanAlgebra) -> u128 {
    (b.atom_count() as u128).checked_pow(c.atom_count() as u32).unwrap_or(u128::MAX)
}

/// All homomorphisms `b -> c`, one per function `atoms(c) -> atoms(b)`, in
/// lexicographic order of atom maps. Each is verified before it is returned.
pub fn enumerate_homs(b: &FiniteBooleanAlgebra, c: &FiniteBooleanAlgebra, cap: &Capacity) -> Result<Vec<BoolHom>> {
    let count = hom_count(b, c);
    if count > cap.max_homs {
        return Err(Error::capacity("homomorphisms", count, cap.max_homs));
    }
    let (m, n) = (b.atom_count(), c.atom_count());
    let mut out = Vec::with_capacity(count as usize);
    if count == 0 {
        return Ok(out);
    }
    let mut map = vec![0usize; n];
    loop {
        let h = BoolHom { source_atoms: m, target_atoms: n, atom_map: map.clone() };
        if let Err(v) = h.verify() {
            return Err(Error::InvalidHom(format!("{h}: {v}")));
        }
        out.push(h);
        // odometer, last position fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Propositional formula compiled against a fixed letter order.
#[derive(Clone, Debug)]
enum Compiled {
    Const(bool),
    Letter(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(f: &Formula, index: &HashMap<&str, usize>) -> Result<Compiled> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Atom { rel, args } if args.is_empty() => {
                Compiled::Letter(*index.get(rel.as_str()).ok_or_else(|| Error::UnknownSymbol(rel.clone()))?)
            }
            Formula::Atom { rel, .. } => return Err(Error::FragmentViolation(format!("`{rel}` is not a letter"))),
            Formula::Eq(..) => return Err(Error::FragmentViolation("equations are not propositional".into())),
            Formula::Not(a) => Compiled::Not(Box::new(Compiled::new(a, index)?)),
            Formula::And(a, b) => Compiled::And(Box::new(Compiled::new(a, index)?), Box::new(Compiled::new(b, index)?)),
            Formula::Or(a, b) => Compiled::Or(Box::new(Compiled::new(a, index)?), Box::new(Compiled::new(b, index)?)),
            Formula::Implies(a, b) => Compiled::Implies(Box::new(Compiled::new(a, index)?), Box::new(Compiled::new(b, index)?)),
        })
    }

    /// Kleene three-valued evaluation; `None` is "not yet determined".
    fn eval(&self, vals: &[Option<bool>]) -> Option<bool> {
        match self {
            Compiled::Const(b) => Some(*b),
            Compiled::Letter(i) => vals[*i],
            Compiled::Not(a) => a.eval(vals).map(|v| !v),
            Compiled::And(a, b) => match (a.eval(vals), b.eval(vals)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Compiled::Or(a, b) => match (a.eval(vals), b.eval(vals)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Compiled::Implies(a, b) => match (a.eval(vals), b.eval(vals)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }
}

fn require_prop(t: &Theory) -> Result<()> {
    if t.fragment != Fragment::Prop {
        return Err(Error::FragmentViolation(format!("`{}` is not a propositional theory", t.name)));
    }
    Ok(())
}

/// The truth assignments satisfying every axiom, in lexicographic order
/// (letters by name, `0` before `1`).
///
/// The search assigns letters in order and prunes a branch as soon as some
/// axiom is already false under three-valued evaluation, so theories whose
/// axioms pin most letters stay cheap even with many letters.
pub fn satisfying_assignments(t: &Theory) -> Result<Vec<TruthAssignment>> {
    satisfying_assignments_with(t, &Capacity::default())
}

pub fn satisfying_assignments_with(t: &Theory, cap: &Capacity) -> Result<Vec<TruthAssignment>> {
    require_prop(t)?;
    let letters = t.letters();
    let index: HashMap<&str, usize> = letters.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let axioms = t.axioms.iter().map(|a| Compiled::new(a, &index)).collect::<Result<Vec<_>>>()?;
    let mut vals = vec![None; letters.len()];
    let mut found: Vec<Vec<bool>> = Vec::new();
    search(0, &mut vals, &axioms, &mut found, cap.max_atoms)?;
    Ok(found.into_iter().map(|bits| TruthAssignment(letters.iter().cloned().zip(bits).collect())).collect())
}

fn search(k: usize, vals: &mut Vec<Option<bool>>, axioms: &[Compiled], found: &mut Vec<Vec<bool>>, max: usize) -> Result<()> {
    if axioms.iter().any(|a| a.eval(vals) == Some(false)) {
        return Ok(());
    }
    if k == vals.len() {
        found.push(vals.iter().map(|v| v.unwrap_or(false)).collect());
        if found.len() > max {
            return Err(Error::capacity("satisfying assignments", found.len() as u128, max as u128));
        }
        return Ok(());
    }
    for b in [false, true] {
        vals[k] = Some(b);
        search(k + 1, vals, axioms, found, max)?;
    }
    vals[k] = None;
    Ok(())
}

/// `F(V)/A` for a propositional theory, realised on its satisfying assignments.
#[derive(Clone, Debug, Serialize)]
pub struct LindenbaumAlgebra {
    pub algebra: FiniteBooleanAlgebra,
    letters: Vec<String>,
}

impl LindenbaumAlgebra {
    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn assignments(&self) -> &[TruthAssignment] {
        self.algebra.labels().unwrap_or(&[])
    }

    /// The class of `phi`: the set of atoms (assignments) making it true.
    pub fn quotient(&self, phi: &Formula) -> Result<Element> {
        let index: HashMap<&str, usize> = self.letters.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let c = Compiled::new(phi, &index)?;
        let mut out = 0u64;
        for (i, a) in self.assignments().iter().enumerate() {
            let vals: Vec<Option<bool>> = a.0.values().map(|&b| Some(b)).collect();
            if c.eval(&vals) == Some(true) {
                out |= 1 << i;
            }
        }
        Ok(Element(out))
    }
}

pub fn lindenbaum_algebra(t: &Theory) -> Result<LindenbaumAlgebra> {
    lindenbaum_algebra_with(t, &Capacity::default())
}

pub fn lindenbaum_algebra_with(t: &Theory, cap: &Capacity) -> Result<LindenbaumAlgebra> {
    let assignments = satisfying_assignments_with(t, cap)?;
    Ok(LindenbaumAlgebra { algebra: FiniteBooleanAlgebra::labeled(assignments), letters: t.letters() })
}

/// `F(V)`: the Lindenbaum algebra of the axiomless theory on `letters`.
pub fn free_boolean_algebra<S: AsRef<str>>(letters: &[S], cap: &Capacity) -> Result<LindenbaumAlgebra> {
    let atoms = 1u128.checked_shl(letters.len() as u32).unwrap_or(u128::MAX);
    if atoms > cap.max_atoms as u128 {
        return Err(Error::capacity("free algebra atoms", atoms, cap.max_atoms as u128));
    }
    let t = Theory::propositional("FREE", letters.iter().map(|s| s.as_ref().to_string()), vec![]);
    lindenbaum_algebra_with(&t, cap)
}

/// `t ⊢ phi`, decided by truth sets.
pub fn entails(t: &Theory, phi: &Formula) -> Result<bool> {
    let l = lindenbaum_algebra(t)?;
    Ok(l.quotient(phi)? == l.algebra.top())
}
