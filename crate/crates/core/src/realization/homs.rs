use super::{check_signature, enumerate_models, tuples, FiniteModel};
use crate::error::{Error, Result};
use crate::syncat::Category;
use crate::theory::{Fragment, Theory};
use serde::Serialize;
use std::fmt;

/// One function per sort, commuting with every operation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ModelHomomorphism {
    pub components: Vec<Vec<usize>>,
}

impl fmt::Debug for ModelHomomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.components)
    }
}

impl ModelHomomorphism {
    pub fn identity(m: &FiniteModel) -> Self {
        ModelHomomorphism { components: m.sizes.iter().map(|&n| (0..n).collect()).collect() }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModelHomomorphism) -> Self {
        let components = first.components.iter().zip(&self.components).map(|(f, g)| f.iter().map(|&x| g[x]).collect()).collect();
        ModelHomomorphism { components }
    }

    pub fn is_homomorphism(&self, m: &FiniteModel, n: &FiniteModel) -> bool {
        if m.sorts.is_empty() {
            return self.components.is_empty() && m.letters == n.letters;
        }
        let shape_ok = self.components.len() == m.sizes.len()
            && self.components.iter().zip(&m.sizes).all(|(c, &s)| c.len() == s)
            && self.components.iter().zip(&n.sizes).all(|(c, &s)| c.iter().all(|&v| v < s));
        let h: Vec<Vec<Option<usize>>> = self.components.iter().map(|c| c.iter().map(|&v| Some(v)).collect()).collect();
        shape_ok && violations(&h, m, n) == 0
    }
}

/// Number of operation instances, with every image known, that fail to commute.
fn violations(h: &[Vec<Option<usize>>], m: &FiniteModel, n: &FiniteModel) -> usize {
    let mut bad = 0;
    for (op_m, op_n) in m.ops.iter().zip(&n.ops) {
        let sizes: Vec<usize> = op_m.domain.iter().map(|&s| m.sizes[s]).collect();
        for args in tuples(&sizes) {
            let Some(images) = args.iter().zip(&op_m.domain).map(|(&a, &s)| h[s][a]).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let Some(out) = h[op_m.codomain][m.apply(op_m, &args)] else { continue };
            if n.apply(op_n, &images) != out {
                bad += 1;
            }
        }
    }
    bad
}

/// Every homomorphism `m → n`, in lexicographic order of components.
pub fn enumerate_homs(m: &FiniteModel, n: &FiniteModel) -> Result<Vec<ModelHomomorphism>> {
    if m.theory != n.theory || m.sorts != n.sorts || m.ops.len() != n.ops.len() || m.letters.keys().ne(n.letters.keys()) {
        return Err(Error::SignatureMismatch(format!("models of `{}` and `{}`", m.theory, n.theory)));
    }
    if m.sorts.is_empty() {
        // Propositional models form a discrete category.
        return Ok(if m.letters == n.letters { vec![ModelHomomorphism { components: vec![] }] } else { vec![] });
    }
    let slots: Vec<(usize, usize)> = m.sizes.iter().enumerate().flat_map(|(s, &k)| (0..k).map(move |i| (s, i))).collect();
    let mut h: Vec<Vec<Option<usize>>> = m.sizes.iter().map(|&k| vec![None; k]).collect();
    let mut out = Vec::new();
    extend(&slots, 0, &mut h, m, n, &mut out);
    Ok(out)
}

fn extend(
    slots: &[(usize, usize)],
    k: usize,
    h: &mut Vec<Vec<Option<usize>>>,
    m: &FiniteModel,
    n: &FiniteModel,
    out: &mut Vec<ModelHomomorphism>,
) {
    if k == slots.len() {
        out.push(ModelHomomorphism { components: h.iter().map(|c| c.iter().map(|v| v.unwrap()).collect()).collect() });
        return;
    }
    let (s, i) = slots[k];
    for v in 0..n.sizes[s] {
        h[s][i] = Some(v);
        if violations(h, m, n) == 0 {
            extend(slots, k + 1, h, m, n, out);
        }
    }
    h[s][i] = None;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealMorphism {
    pub source: usize,
    pub target: usize,
    pub map: ModelHomomorphism,
}

/// The category of models of a theory on carriers of size `1..=max_size`
/// and their homomorphisms.
#[derive(Clone, Debug, Serialize)]
pub struct RealCategory {
    pub theory: String,
    pub max_size: usize,
    pub models: Vec<FiniteModel>,
    homs: Vec<Vec<ModelHomomorphism>>,
}

impl RealCategory {
    pub fn hom_count(&self, a: usize, b: usize) -> usize {
        self.homs[a * self.models.len() + b].len()
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().map(Vec::len).sum()
    }
}

pub fn real_category(t: &Theory, max_size: usize) -> Result<RealCategory> {
    let mut models = Vec::new();
    match t.fragment {
        Fragment::Prop if max_size > 0 => models = enumerate_models(t, 0)?,
        Fragment::Prop => {}
        Fragment::Eq => {
            for size in 1..=max_size {
                models.extend(enumerate_models(t, size)?);
            }
        }
    }
    for m in &models {
        check_signature(t, m)?;
    }
    let mut homs = Vec::with_capacity(models.len() * models.len());
    for a in &models {
        for b in &models {
            homs.push(enumerate_homs(a, b)?);
        }
    }
    Ok(RealCategory { theory: t.name.clone(), max_size, models, homs })
}

impl Category for RealCategory {
    type Object = usize;
    type Morphism = RealMorphism;

    fn objects(&self) -> Vec<usize> {
        (0..self.models.len()).collect()
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<RealMorphism>> {
        Ok(self.homs[a * self.models.len() + b].iter().map(|h| RealMorphism { source: *a, target: *b, map: h.clone() }).collect())
    }

    fn identity(&self, a: &usize) -> RealMorphism {
        RealMorphism { source: *a, target: *a, map: ModelHomomorphism::identity(&self.models[*a]) }
    }

    fn compose(&self, g: &RealMorphism, f: &RealMorphism) -> Result<RealMorphism> {
        if f.target != g.source {
            return Err(Error::InvalidHom(format!("cannot compose {g:?} after {f:?}")));
        }
        Ok(RealMorphism { source: f.source, target: g.target, map: g.map.compose(&f.map) })
    }

    fn same(&self, f: &RealMorphism, g: &RealMorphism) -> bool {
        f == g
    }
}
