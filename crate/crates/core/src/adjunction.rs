//! The correspondence between finite Boolean algebras and propositional
//! theories: `Lang` sends an algebra to its diagram theory, `Syn` sends a
//! theory to its Lindenbaum algebra, and theory morphisms `Lang(B) → T`
//! correspond bijectively to Boolean homs `B → Syn(T)`.

use crate::error::{Error, Result};
use crate::lindenbaum::{check_preservation, enumerate_homs, lindenbaum_algebra, BoolHom, Capacity, Element, FiniteBooleanAlgebra};
use crate::theory::{Formula, Theory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Largest algebra `lang` accepts, by atom count: the diagram theory has
/// one letter per element.
pub const LANG_MAX_ATOMS: usize = 4;

pub const CONVENTION: &str = "lang is covariant: lang(b: B' -> B) = iso_B . b . iso_B'^-1 : Syn(lang B') -> Syn(lang B); \
transpose(f: lang B -> T) = f . iso_B; homs compose right to left";

/// Letter naming element `e` of an algebra with `atoms` atoms; the binary
/// digits are zero-padded so that name order is element order.
pub fn element_letter(e: Element, atoms: usize) -> String {
    format!("p{:0width$b}", e.0, width = atoms.max(1))
}

/// The diagram theory of `b`.
pub fn lang(b: &FiniteBooleanAlgebra) -> Result<Theory> {
    let n = b.atom_count();
    if n > LANG_MAX_ATOMS {
        return Err(Error::capacity("lang atoms", n as u128, LANG_MAX_ATOMS as u128));
    }
    let p = |e: Element| Formula::letter(element_letter(e, n));
    let elements: Vec<Element> = b.elements().collect();
    let mut axioms = vec![p(b.top()), Formula::not(p(b.bottom()))];
    for (i, &x) in elements.iter().enumerate() {
        for &y in &elements[i..] {
            axioms.push(Formula::iff(Formula::and(p(x), p(y)), p(b.meet(x, y))));
            axioms.push(Formula::iff(Formula::or(p(x), p(y)), p(b.join(x, y))));
        }
    }
    for &x in &elements {
        axioms.push(Formula::iff(Formula::not(p(x)), p(b.complement(x))));
    }
    Ok(Theory::propositional(format!("LANG{n}"), elements.iter().map(|&e| element_letter(e, n)), axioms))
}

pub fn syn(t: &Theory) -> Result<FiniteBooleanAlgebra> {
    Ok(lindenbaum_algebra(t)?.algebra)
}

/// A theory morphism, given by its underlying hom `Syn(source) → Syn(target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoryMorphism {
    pub source: String,
    pub target: String,
    pub hom: BoolHom,
}

impl fmt::Display for TheoryMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} via {}", self.source, self.target, self.hom)
    }
}

impl TheoryMorphism {
    /// `self ∘ first`.
    pub fn compose(&self, first: &TheoryMorphism) -> Result<TheoryMorphism> {
        Ok(TheoryMorphism { source: first.source.clone(), target: self.target.clone(), hom: self.hom.compose(&first.hom)? })
    }
}

pub fn theory_morphisms(t1: &Theory, t2: &Theory) -> Result<Vec<TheoryMorphism>> {
    let (a, b) = (syn(t1)?, syn(t2)?);
    Ok(enumerate_homs(&a, &b, &Capacity::default())?
        .into_iter()
        .map(|hom| TheoryMorphism { source: t1.name.clone(), target: t2.name.clone(), hom })
        .collect())
}

/// `B` together with its diagram theory and the canonical iso `B ≅ Syn(lang B)`.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub algebra: FiniteBooleanAlgebra,
    pub lang: Theory,
    pub iso: BoolHom,
    pub iso_inv: BoolHom,
}

/// Builds `lang(b)` and verifies that `e ↦ [p_e]` is a Boolean isomorphism.
pub fn comparison(b: &FiniteBooleanAlgebra) -> Result<Comparison> {
    let lang = lang(b)?;
    let l = lindenbaum_algebra(&lang)?;
    let table =
        b.elements().map(|e| l.quotient(&Formula::letter(element_letter(e, b.atom_count()))).map(|c| c.0)).collect::<Result<Vec<_>>>()?;
    let iso = BoolHom::from_element_table(b, &l.algebra, &table)?;
    let iso_inv = iso.inverse().ok_or_else(|| Error::InvalidHom(format!("{iso} is not an isomorphism")))?;
    Ok(Comparison { algebra: b.clone(), lang, iso, iso_inv })
}

/// The two directions of the hom-set bijection.
pub trait Transposition {
    fn transpose(&self, cmp: &Comparison, f: &TheoryMorphism) -> Result<BoolHom>;
    fn untranspose(&self, cmp: &Comparison, t: &Theory, g: &BoolHom) -> Result<TheoryMorphism>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalTransposition;

impl Transposition for CanonicalTransposition {
    fn transpose(&self, cmp: &Comparison, f: &TheoryMorphism) -> Result<BoolHom> {
        f.hom.compose(&cmp.iso)
    }

    fn untranspose(&self, cmp: &Comparison, t: &Theory, g: &BoolHom) -> Result<TheoryMorphism> {
        Ok(TheoryMorphism { source: cmp.lang.name.clone(), target: t.name.clone(), hom: g.compose(&cmp.iso_inv)? })
    }
}

/// Transposes through the rotation automorphism of `B`, a deliberately
/// broken transposition used as a negative control. It agrees with the
/// canonical one when `B` has fewer than two atoms.
#[derive(Clone, Copy, Debug, Default)]
pub struct TwistedTransposition;

impl Transposition for TwistedTransposition {
    fn transpose(&self, cmp: &Comparison, f: &TheoryMorphism) -> Result<BoolHom> {
        let n = cmp.algebra.atom_count();
        let rotate = BoolHom::from_atom_map(&cmp.algebra, &cmp.algebra, (0..n).map(|i| (i + 1) % n).collect())?;
        f.hom.compose(&cmp.iso)?.compose(&rotate)
    }
    fn untranspose(&self, cmp: &Comparison, t: &Theory, g: &BoolHom) -> Result<TheoryMorphism> {
        CanonicalTransposition.untranspose(cmp, t, g)
    }
}

pub fn transpose(cmp: &Comparison, f: &TheoryMorphism) -> Result<BoolHom> {
    CanonicalTransposition.transpose(cmp, f)
}

pub fn untranspose(cmp: &Comparison, t: &Theory, g: &BoolHom) -> Result<TheoryMorphism> {
    CanonicalTransposition.untranspose(cmp, t, g)
}

/// `lang` on a hom `b: B' → B`, as a theory morphism `lang(B') → lang(B)`.
pub fn lang_hom(source: &Comparison, target: &Comparison, b: &BoolHom) -> Result<TheoryMorphism> {
    let hom = target.iso.compose(b)?.compose(&source.iso_inv)?;
    Ok(TheoryMorphism { source: source.lang.name.clone(), target: target.lang.name.clone(), hom })
}

/// Homs `B → C` enumerated as ordered partitions of the atoms of `C` into
/// one block per atom of `B`: the image of atom `i` is block `i`.
pub fn homs_by_partition(b: &FiniteBooleanAlgebra, c: &FiniteBooleanAlgebra) -> Result<Vec<BoolHom>> {
    let count = crate::lindenbaum::hom_count(b, c);
    let cap = Capacity::default();
    if count > cap.max_homs {
        return Err(Error::capacity("hom-set size", count, cap.max_homs));
    }
    let mut out = Vec::new();
    for blocks in partitions(c.top().0, b.atom_count()) {
        let table: Vec<u64> = b.elements().map(|e| e.atom_indices().fold(0, |acc, i| acc | blocks[i])).collect();
        if check_preservation(b, c, |e| Element(table[e.0 as usize])).is_none() {
            out.push(BoolHom::from_element_table(b, c, &table)?);
        }
    }
    Ok(out)
}

fn partitions(remaining: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return if remaining == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut s = remaining;
    loop {
        for mut rest in partitions(remaining & !s, k - 1) {
            rest.insert(0, s);
            out.push(rest);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & remaining;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NaturalityFailure {
    pub b_prime_atoms: usize,
    pub b: BoolHom,
    pub t_prime: String,
    pub t: BoolHom,
    pub f: BoolHom,
    pub left: BoolHom,
    pub right: BoolHom,
}

#[derive(Clone, Debug, Serialize)]
pub struct NaturalityReport {
    pub triples: u64,
    pub checked: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub failures: Vec<NaturalityFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub convention: String,
    pub algebra_atoms: usize,
    pub theory: String,
    pub theory_side: usize,
    pub algebra_side: usize,
    /// `(f, transpose f)` for every theory morphism `f`.
    pub pairs: Vec<(String, String)>,
    pub injective: bool,
    pub surjective: bool,
    pub round_trip: bool,
    pub naturality: NaturalityReport,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.theory_side == self.algebra_side && self.injective && self.surjective && self.round_trip && self.naturality.failures.is_empty()
    }
}

const EXHAUSTIVE_TRIPLES: u64 = 10_000;
const SAMPLED_TRIPLES: usize = 500;

/// The test theories `T'` for naturality in the theory argument.
pub fn naturality_theories(t: &Theory) -> Vec<Theory> {
    let x = || Formula::letter("x");
    let y = || Formula::letter("y");
    vec![
        t.clone(),
        Theory::propositional("EMPTY", Vec::<String>::new(), vec![]),
        Theory::propositional("FREE1", ["x"], vec![]),
        Theory::propositional("XOR", ["x", "y"], vec![Formula::or(x(), y()), Formula::not(Formula::and(x(), y()))]),
    ]
}

pub fn check_adjunction(b: &FiniteBooleanAlgebra, t: &Theory, seed: u64) -> Result<AdjunctionReport> {
    check_adjunction_with(b, t, seed, &CanonicalTransposition)
}

pub fn check_adjunction_with(b: &FiniteBooleanAlgebra, t: &Theory, seed: u64, tr: &dyn Transposition) -> Result<AdjunctionReport> {
    let cmp = comparison(b)?;
    let syn_t = syn(t)?;
    let left = theory_morphisms(&cmp.lang, t)?;
    let right = homs_by_partition(b, &syn_t)?;

    let images = left.iter().map(|f| tr.transpose(&cmp, f)).collect::<Result<Vec<_>>>()?;
    let image_set: BTreeSet<Vec<usize>> = images.iter().map(|g| g.atom_map().to_vec()).collect();
    let right_set: BTreeSet<Vec<usize>> = right.iter().map(|g| g.atom_map().to_vec()).collect();
    let injective = image_set.len() == images.len();
    let surjective = image_set == right_set && images.iter().all(|g| g.source_atoms() == b.atom_count());
    let mut round_trip = true;
    for (f, g) in left.iter().zip(&images) {
        round_trip &= tr.untranspose(&cmp, t, g)? == *f;
    }
    for g in &right {
        round_trip &= tr.transpose(&cmp, &tr.untranspose(&cmp, t, g)?)? == *g;
    }

    let naturality = check_naturality(&cmp, t, &left, seed, tr)?;
    Ok(AdjunctionReport {
        convention: CONVENTION.into(),
        algebra_atoms: b.atom_count(),
        theory: t.name.clone(),
        theory_side: left.len(),
        algebra_side: right.len(),
        pairs: left.iter().zip(&images).map(|(f, g)| (f.hom.to_string(), g.to_string())).collect(),
        injective,
        surjective,
        round_trip,
        naturality,
    })
}

/// `transpose(t ∘ f ∘ lang(b)) = syn(t) ∘ transpose(f) ∘ b` over
/// `b: B' → B` for `B'` with 0 to 3 atoms and `t: T → T'`.
fn check_naturality(cmp: &Comparison, t: &Theory, left: &[TheoryMorphism], seed: u64, tr: &dyn Transposition) -> Result<NaturalityReport> {
    let cap = Capacity::default();
    let mut sides = Vec::new();
    for k in 0..=3 {
        let bp = comparison(&FiniteBooleanAlgebra::new(k))?;
        let bs = enumerate_homs(&bp.algebra, &cmp.algebra, &cap)?;
        sides.push((bp, bs));
    }
    let syn_t = syn(t)?;
    let mut targets = Vec::new();
    for tp in naturality_theories(t) {
        let syn_tp = syn(&tp)?;
        let count = crate::lindenbaum::hom_count(&syn_t, &syn_tp);
        targets.push((tp, syn_tp, count));
    }
    let triples: u128 =
        sides.iter().map(|s| s.1.len() as u128).sum::<u128>() * targets.iter().map(|x| x.2).sum::<u128>() * left.len() as u128;
    let morphism = |tp: &Theory, hom: BoolHom| TheoryMorphism { source: t.name.clone(), target: tp.name.clone(), hom };

    let check = |bp: &Comparison, b: &BoolHom, tp: &Theory, th: &TheoryMorphism, f: &TheoryMorphism| -> Result<Option<NaturalityFailure>> {
        let moved = th.compose(f)?.compose(&lang_hom(bp, cmp, b)?)?;
        let lhs = tr.transpose(bp, &moved)?;
        let rhs = th.hom.compose(&tr.transpose(cmp, f)?)?.compose(b)?;
        Ok((lhs != rhs).then(|| NaturalityFailure {
            b_prime_atoms: bp.algebra.atom_count(),
            b: b.clone(),
            t_prime: tp.name.clone(),
            t: th.hom.clone(),
            f: f.hom.clone(),
            left: lhs,
            right: rhs,
        }))
    };

    let exhaustive = triples <= EXHAUSTIVE_TRIPLES as u128;
    let mut report = NaturalityReport { triples: triples.min(u64::MAX as u128) as u64, checked: 0, exhaustive, seed, failures: vec![] };
    if exhaustive && triples > 0 {
        for (bp, bs) in &sides {
            for b in bs {
                for (tp, syn_tp, _) in &targets {
                    for th in enumerate_homs(&syn_t, syn_tp, &cap)? {
                        let th = morphism(tp, th);
                        for f in left {
                            report.checked += 1;
                            report.failures.extend(check(bp, b, tp, &th, f)?);
                        }
                    }
                }
            }
        }
    } else if triples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bs: Vec<(&Comparison, &BoolHom)> = sides.iter().flat_map(|(bp, bs)| bs.iter().map(move |b| (bp, b))).collect();
        let total: u128 = targets.iter().map(|x| x.2).sum();
        for _ in 0..SAMPLED_TRIPLES {
            let (bp, b) = bs[rng.gen_range(0..bs.len())];
            // A uniformly random hom T → T', over all T' together.
            let mut pick = rng.gen_range(0..total);
            let (tp, syn_tp, _) = targets
                .iter()
                .find(|x| {
                    let hit = pick < x.2;
                    if !hit {
                        pick -= x.2;
                    }
                    hit
                })
                .expect("pick is below the total");
            let atom_map = (0..syn_tp.atom_count()).map(|_| rng.gen_range(0..syn_t.atom_count())).collect();
            let th = morphism(tp, BoolHom::from_atom_map(&syn_t, syn_tp, atom_map)?);
            let f = &left[rng.gen_range(0..left.len())];
            report.checked += 1;
            report.failures.extend(check(bp, b, tp, &th, f)?);
        }
    }
    report.failures.truncate(10);
    Ok(report)
}
