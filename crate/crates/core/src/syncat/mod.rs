//! Syntactic categories of theories.
//!
//! For a propositional theory the category is the preorder of formulas
//! under entailment, which collapses to the Lindenbaum poset. For an
//! equational theory objects are variable contexts and a morphism
//! `Γ → Δ` is a tuple of terms in context `Γ`, one per variable of `Δ`,
//! taken up to provable equality (decided by a normalizer).

mod eq;
mod normalize;
mod prop;

pub use eq::{Context, EqSyn, SynMorphism};
pub use normalize::{
    enumerate_terms, group_signature, normalize, normalizer_for, FreeGroupNormalizer, Letter, Normalizer, RewriteNormalizer,
};
pub use prop::{PosetArrow, PropSyn};

use crate::error::Result;
use crate::theory::{Fragment, Theory};
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Debug;

/// A small category presented by explicit hom-sets.
pub trait Category {
    type Object: Clone + Debug + PartialEq;
    type Morphism: Clone + Debug;

    fn objects(&self) -> Vec<Self::Object>;
    fn hom(&self, a: &Self::Object, b: &Self::Object) -> Result<Vec<Self::Morphism>>;
    fn identity(&self, a: &Self::Object) -> Self::Morphism;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism>;
    fn same(&self, f: &Self::Morphism, g: &Self::Morphism) -> bool;
}

pub fn syn_prop(t: &Theory) -> Result<PropSyn> {
    PropSyn::new(t)
}

pub fn syn_eq(t: &Theory, depth_bound: usize) -> Result<EqSyn> {
    EqSyn::new(t, depth_bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub law: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LawReport {
    pub objects: usize,
    pub morphisms: usize,
    pub identity_checks: usize,
    pub associativity_checks: usize,
    pub violations: Vec<LawViolation>,
    pub seed: u64,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_REPORTED: usize = 10;

/// Checks the unit laws on every morphism and associativity on `sample`
/// seeded random composable triples.
pub fn check_category_laws<C: Category>(c: &C, sample: usize, seed: u64) -> Result<LawReport> {
    let objects = c.objects();
    let mut report = LawReport { objects: objects.len(), seed, ..Default::default() };
    let mut homs = Vec::with_capacity(objects.len() * objects.len());
    for a in &objects {
        for b in &objects {
            homs.push(c.hom(a, b)?);
        }
    }
    let n = objects.len();
    let hom = |i: usize, j: usize| &homs[i * n + j];
    let violate = |report: &mut LawReport, law: &str, detail: String| {
        if report.violations.len() < MAX_REPORTED {
            report.violations.push(LawViolation { law: law.into(), detail });
        }
    };

    for (i, a) in objects.iter().enumerate() {
        let id_a = c.identity(a);
        for (j, b) in objects.iter().enumerate() {
            let id_b = c.identity(b);
            for f in hom(i, j) {
                report.morphisms += 1;
                report.identity_checks += 1;
                if !c.same(&c.compose(f, &id_a)?, f) {
                    violate(&mut report, "right identity", format!("{f:?} ∘ id ≠ {f:?}"));
                }
                if !c.same(&c.compose(&id_b, f)?, f) {
                    violate(&mut report, "left identity", format!("id ∘ {f:?} ≠ {f:?}"));
                }
            }
        }
    }

    if n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx: Vec<usize> = (0..n).collect();
        let mut attempts = 0;
        while report.associativity_checks < sample && attempts < sample * 50 {
            attempts += 1;
            let [a, b, cc, d] = [0; 4].map(|_| *idx.choose(&mut rng).unwrap());
            let (Some(f), Some(g), Some(h)) = (hom(a, b).choose(&mut rng), hom(b, cc).choose(&mut rng), hom(cc, d).choose(&mut rng)) else {
                continue;
            };
            report.associativity_checks += 1;
            let left = c.compose(h, &c.compose(g, f)?)?;
            let right = c.compose(&c.compose(h, g)?, f)?;
            if !c.same(&left, &right) {
                violate(&mut report, "associativity", format!("h={h:?}, g={g:?}, f={f:?}: {left:?} ≠ {right:?}"));
            }
        }
    }
    Ok(report)
}

/// Summary of a syntactic category for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SynSummary {
    pub theory: String,
    pub fragment: String,
    pub objects: usize,
    pub morphisms: usize,
    pub normalizer: Option<String>,
    pub laws: LawReport,
}

pub fn summarize(t: &Theory, depth_bound: usize, sample: usize, seed: u64) -> Result<SynSummary> {
    let (laws, normalizer) = match t.fragment {
        Fragment::Prop => (check_category_laws(&syn_prop(t)?, sample, seed)?, None),
        Fragment::Eq => {
            let c = syn_eq(t, depth_bound)?;
            let d = c.normalizer().describe();
            (check_category_laws(&c, sample, seed)?, Some(d))
        }
    };
    Ok(SynSummary {
        theory: t.name.clone(),
        fragment: t.fragment.to_string(),
        objects: laws.objects,
        morphisms: laws.morphisms,
        normalizer,
        laws,
    })
}
