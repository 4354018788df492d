use super::Category;
use crate::error::{Error, Result};
use crate::lindenbaum::{lindenbaum_algebra, Element, LindenbaumAlgebra};
use crate::theory::{Formula, Theory};

/// The unique arrow `from → to` when `from ⊢ to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosetArrow {
    pub from: Element,
    pub to: Element,
}

/// The syntactic category of a propositional theory, as the poset of
/// equivalence classes of formulas.
#[derive(Clone, Debug)]
pub struct PropSyn {
    pub lindenbaum: LindenbaumAlgebra,
}

impl PropSyn {
    pub fn new(t: &Theory) -> Result<Self> {
        Ok(PropSyn { lindenbaum: lindenbaum_algebra(t)? })
    }

    pub fn class_of(&self, phi: &Formula) -> Result<Element> {
        self.lindenbaum.quotient(phi)
    }

    pub fn object_count(&self) -> u64 {
        self.lindenbaum.algebra.size()
    }

    pub fn morphism_count(&self) -> u64 {
        let b = &self.lindenbaum.algebra;
        b.elements().map(|a| 1u64 << (b.atom_count() as u32 - a.count())).sum()
    }
}

impl Category for PropSyn {
    type Object = Element;
    type Morphism = PosetArrow;

    fn objects(&self) -> Vec<Element> {
        self.lindenbaum.algebra.elements().collect()
    }

    fn hom(&self, a: &Element, b: &Element) -> Result<Vec<PosetArrow>> {
        Ok(if self.lindenbaum.algebra.le(*a, *b) { vec![PosetArrow { from: *a, to: *b }] } else { vec![] })
    }

    fn identity(&self, a: &Element) -> PosetArrow {
        PosetArrow { from: *a, to: *a }
    }

    fn compose(&self, g: &PosetArrow, f: &PosetArrow) -> Result<PosetArrow> {
        if f.to != g.from {
            return Err(Error::InvalidHom(format!("cannot compose {g:?} after {f:?}")));
        }
        Ok(PosetArrow { from: f.from, to: g.to })
    }

    fn same(&self, f: &PosetArrow, g: &PosetArrow) -> bool {
        f == g
    }
}
