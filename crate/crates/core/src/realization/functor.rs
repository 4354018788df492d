use super::{cell_index, check_signature, enumerate_homs, tuples, FiniteModel, ModelHomomorphism};
use crate::error::{Error, Result};
use crate::lindenbaum::Element;
use crate::syncat::{Category, Context, EqSyn, PropSyn, SynMorphism};
use crate::theory::{Theory, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

/// A model seen as a product-preserving functor from the syntactic
/// category into finite sets. A context goes to the product of carriers,
/// encoded row-major, and a morphism to its evaluation table.
pub struct FunctorPresentation<'a> {
    pub model: &'a FiniteModel,
    pub category: &'a EqSyn,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FunctorialityReport {
    pub identities_checked: usize,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<String>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn model_as_functor<'a>(m: &'a FiniteModel, c: &'a EqSyn) -> Result<FunctorPresentation<'a>> {
    if m.theory != c.theory().name {
        return Err(Error::SignatureMismatch(format!("model of `{}` for category of `{}`", m.theory, c.theory().name)));
    }
    check_signature(c.theory(), m)?;
    Ok(FunctorPresentation { model: m, category: c })
}

impl FunctorPresentation<'_> {
    fn sizes(&self, ctx: &Context) -> Result<Vec<usize>> {
        ctx.vars.iter().map(|v| self.model.size_of(&v.sort)).collect()
    }

    /// The tuples of the product assigned to `ctx`, in index order.
    pub fn object(&self, ctx: &Context) -> Result<Vec<Vec<usize>>> {
        Ok(tuples(&self.sizes(ctx)?))
    }

    pub fn object_size(&self, ctx: &Context) -> Result<usize> {
        Ok(self.sizes(ctx)?.iter().product())
    }

    /// The evaluation table of `f`: entry `i` is the index of the image of
    /// the `i`-th source tuple.
    pub fn morphism(&self, f: &SynMorphism) -> Result<Vec<usize>> {
        let target_sizes = self.sizes(&f.target)?;
        let positions: Vec<usize> = (0..target_sizes.len()).collect();
        self.object(&f.source)?
            .into_iter()
            .map(|x| {
                let env = |v: &Variable| f.source.vars.iter().position(|w| w == v).map(|i| x[i]);
                let image = f.terms.iter().map(|t| self.model.eval(t, &env)).collect::<Result<Vec<_>>>()?;
                Ok(cell_index(&target_sizes, &positions, &image))
            })
            .collect()
    }

    /// Checks `F(id) = id` on every object and `F(g∘f) = F(g)∘F(f)` on
    /// composable pairs: all of them when there are at most `budget`,
    /// otherwise `budget` seeded random ones.
    pub fn check_functoriality(&self, budget: usize, seed: u64) -> Result<FunctorialityReport> {
        let c = self.category;
        let objects = c.objects();
        let mut report = FunctorialityReport::default();
        for a in &objects {
            report.identities_checked += 1;
            let id = self.morphism(&c.identity(a))?;
            if id.iter().enumerate().any(|(i, &j)| i != j) {
                report.violations.push(format!("F(id {a}) is not the identity"));
            }
        }
        let n = objects.len();
        let mut homs = Vec::with_capacity(n * n);
        for a in &objects {
            for b in &objects {
                homs.push(c.hom(a, b)?);
            }
        }
        let total: usize = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |cc| (a, b, cc))))
            .map(|(a, b, cc)| homs[a * n + b].len() * homs[b * n + cc].len())
            .sum();
        let check = |f: &SynMorphism, g: &SynMorphism, report: &mut FunctorialityReport| -> Result<()> {
            report.pairs_checked += 1;
            let gf = self.morphism(&c.compose(g, f)?)?;
            let (ff, fg) = (self.morphism(f)?, self.morphism(g)?);
            if ff.iter().map(|&i| fg[i]).ne(gf.iter().copied()) && report.violations.len() < 10 {
                report.violations.push(format!("F({g} ∘ {f}) ≠ F({g}) ∘ F({f})"));
            }
            Ok(())
        };
        if total <= budget {
            report.exhaustive = true;
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        for f in &homs[a * n + b] {
                            for g in &homs[b * n + cc] {
                                check(f, g, &mut report)?;
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while report.pairs_checked < budget {
                let (a, b, cc) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                let (fs, gs) = (&homs[a * n + b], &homs[b * n + cc]);
                if fs.is_empty() || gs.is_empty() {
                    continue;
                }
                check(&fs[rng.gen_range(0..fs.len())], &gs[rng.gen_range(0..gs.len())], &mut report)?;
            }
        }
        Ok(report)
    }
}

/// A propositional model as a monotone map from the Lindenbaum poset to
/// the two-element chain.
#[derive(Clone, Debug, Serialize)]
pub struct PosetFunctor {
    pub values: Vec<(Element, bool)>,
    pub monotone: bool,
}

pub fn model_as_poset_functor(m: &FiniteModel, c: &PropSyn) -> Result<PosetFunctor> {
    let atom = c
        .lindenbaum
        .assignments()
        .iter()
        .position(|a| a.0 == m.letters)
        .ok_or_else(|| Error::SignatureMismatch(format!("{m} is not a model of the theory")))?;
    let values: Vec<(Element, bool)> = c.objects().into_iter().map(|e| (e, e.contains_atom(atom))).collect();
    let monotone = values.iter().all(|&(a, va)| values.iter().all(|&(b, vb)| !c.lindenbaum.algebra.le(a, b) || !va || vb));
    Ok(PosetFunctor { values, monotone })
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub depth: usize,
    pub contexts: usize,
    pub morphisms_checked: usize,
    pub homomorphisms: usize,
    pub natural_families: usize,
    pub bijection: bool,
    pub unmatched: Vec<String>,
    pub note: String,
}

/// Compares homomorphisms `m → n` with natural transformations between
/// the corresponding functors, with naturality checked on every morphism
/// of the truncated hom-sets between contexts of at most two variables.
pub fn homs_equal_nat_trans(t: &Theory, m: &FiniteModel, n: &FiniteModel, depth: usize) -> Result<CorrespondenceReport> {
    let c = EqSyn::new(t, depth)?;
    let (fm, fn_) = (model_as_functor(m, &c)?, model_as_functor(n, &c)?);
    if m.sizes.len() != n.sizes.len() {
        return Err(Error::SignatureMismatch("models have different sorts".into()));
    }
    let objects = c.objects();
    let mut squares = Vec::new();
    for a in &objects {
        for b in &objects {
            for f in c.hom(a, b)? {
                squares.push(Square::new(&fm, &fn_, &f)?);
            }
        }
    }
    let natural = |alpha: &[Vec<usize>]| squares.iter().all(|s| s.commutes(alpha));

    let homs = enumerate_homs(m, n)?;
    let from_homs: BTreeSet<Vec<Vec<usize>>> = homs.iter().map(|h| h.components.clone()).collect();
    let mut unmatched: Vec<String> =
        homs.iter().filter(|h| !natural(&h.components)).map(|h| format!("homomorphism {h:?} is not natural")).collect();

    // Every family of component functions, one per sort.
    let per_sort: Vec<Vec<Vec<usize>>> = m.sizes.iter().zip(&n.sizes).map(|(&a, &b)| tuples(&vec![b; a])).collect();
    let choice_sizes: Vec<usize> = per_sort.iter().map(Vec::len).collect();
    let mut families = BTreeSet::new();
    for pick in tuples(&choice_sizes) {
        let alpha: Vec<Vec<usize>> = pick.iter().enumerate().map(|(s, &i)| per_sort[s][i].clone()).collect();
        if natural(&alpha) {
            let as_hom = ModelHomomorphism { components: alpha.clone() };
            if !as_hom.is_homomorphism(m, n) {
                unmatched.push(format!("natural family {alpha:?} is not a homomorphism"));
            }
            families.insert(alpha);
        }
    }
    Ok(CorrespondenceReport {
        depth,
        contexts: objects.len(),
        morphisms_checked: squares.len(),
        homomorphisms: from_homs.len(),
        natural_families: families.len(),
        bijection: unmatched.is_empty() && from_homs == families,
        unmatched,
        note: "naturality checked on all morphisms up to the depth bound; composites of natural squares commute".into(),
    })
}

/// The data of one naturality square: both evaluation tables and the sort
/// of each source and target position.
struct Square {
    source_sorts: Vec<usize>,
    target_sorts: Vec<usize>,
    source_tuples_m: Vec<Vec<usize>>,
    target_sizes_n: Vec<usize>,
    target_sizes_m: Vec<usize>,
    m_table: Vec<usize>,
    n_table: Vec<usize>,
    source_sizes_n: Vec<usize>,
}

impl Square {
    fn new(fm: &FunctorPresentation, fn_: &FunctorPresentation, f: &SynMorphism) -> Result<Self> {
        let sort_of = |v: &Variable| fm.model.sort_index(&v.sort).ok_or_else(|| Error::UnknownSymbol(v.sort.to_string()));
        Ok(Square {
            source_sorts: f.source.vars.iter().map(sort_of).collect::<Result<_>>()?,
            target_sorts: f.target.vars.iter().map(sort_of).collect::<Result<_>>()?,
            source_tuples_m: fm.object(&f.source)?,
            target_sizes_n: fn_.sizes(&f.target)?,
            target_sizes_m: fm.sizes(&f.target)?,
            source_sizes_n: fn_.sizes(&f.source)?,
            m_table: fm.morphism(f)?,
            n_table: fn_.morphism(f)?,
        })
    }

    /// `α_Δ ∘ M(f) = N(f) ∘ α_Γ`, with `α` applied componentwise.
    fn commutes(&self, alpha: &[Vec<usize>]) -> bool {
        let tpos: Vec<usize> = (0..self.target_sorts.len()).collect();
        let spos: Vec<usize> = (0..self.source_sorts.len()).collect();
        self.source_tuples_m.iter().enumerate().all(|(i, x)| {
            let mut y = decode(self.m_table[i], &self.target_sizes_m);
            for (k, s) in self.target_sorts.iter().enumerate() {
                y[k] = alpha[*s][y[k]];
            }
            let ax: Vec<usize> = x.iter().zip(&self.source_sorts).map(|(&v, &s)| alpha[s][v]).collect();
            let via_n = self.n_table[cell_index(&self.source_sizes_n, &spos, &ax)];
            via_n == cell_index(&self.target_sizes_n, &tpos, &y)
        })
    }
}

fn decode(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = index % sizes[k];
        index /= sizes[k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::cyclic;
    use super::*;
    use crate::dsl::parse_theories;
    use crate::realization::enumerate_models;
    use crate::syncat::syn_prop;
    use crate::theory::{group_theory, Sort, Term};

    #[test]
    fn evaluation_examples() {
        let g = group_theory();
        let c = EqSyn::new(&g, 2).unwrap();
        let z2 = cyclic(2);
        let f = model_as_functor(&z2, &c).unwrap();
        let x = Sort::new("X");
        assert_eq!(f.object_size(&c.context(std::slice::from_ref(&x))).unwrap(), 2);
        assert_eq!(f.object_size(&c.context(&[])).unwrap(), 1);
        let xy = c.context(&[x.clone(), x.clone()]);
        let z = Context::new(vec![Variable::new("z", x.clone())]);
        let mul = c.morphism(&xy, &z, vec![Term::app("mul", vec![Term::var("x", &x), Term::var("y", &x)])]).unwrap();
        assert_eq!(f.morphism(&mul).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn functoriality_is_exhaustive_at_depth_two() {
        let g = group_theory();
        let c = EqSyn::new(&g, 2).unwrap();
        for m in [cyclic(1), cyclic(2), cyclic(3)] {
            let r = model_as_functor(&m, &c).unwrap().check_functoriality(usize::MAX, 0).unwrap();
            assert!(r.passed() && r.exhaustive, "{:?}", r.violations);
        }
        let c3 = EqSyn::new(&g, 3).unwrap();
        let r = model_as_functor(&cyclic(3), &c3).unwrap().check_functoriality(500, 1).unwrap();
        assert!(r.passed() && !r.exhaustive);
        assert_eq!(r.pairs_checked, 500);
    }

    #[test]
    fn non_model_breaks_functoriality() {
        let g = group_theory();
        let c = EqSyn::new(&g, 2).unwrap();
        let mut bad = cyclic(3);
        bad.ops[0].table[1] = 0;
        let r = model_as_functor(&bad, &c).unwrap().check_functoriality(usize::MAX, 0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn correspondence() {
        let g = group_theory();
        for (m, n, size) in [(2, 2, 2), (2, 3, 1), (1, 2, 1), (3, 3, 3), (4, 2, 2)] {
            let r = homs_equal_nat_trans(&g, &cyclic(m), &cyclic(n), 3).unwrap();
            assert!(r.bijection, "{r:?}");
            assert_eq!(r.homomorphisms, size);
            assert_eq!(r.natural_families, size);
        }
        let klein = enumerate_models(&g, 4).unwrap().into_iter().find(|m| (0..4).all(|x| m.op("inv").unwrap().table[x] == x)).unwrap();
        let r = homs_equal_nat_trans(&g, &klein, &cyclic(2), 2).unwrap();
        assert!(r.bijection);
        assert_eq!(r.homomorphisms, 4);
    }

    #[test]
    fn soundness_of_normal_forms() {
        // Terms with equal normal forms agree in every group of size ≤ 3.
        let g = group_theory();
        let x = Sort::new("X");
        let vars = [Variable::new("x", x.clone()), Variable::new("y", x.clone())];
        let n = crate::syncat::normalizer_for(&g).unwrap();
        let terms = crate::syncat::enumerate_terms(&g, &vars, 2).remove(&x).unwrap();
        let models: Vec<FiniteModel> = (1..=3).flat_map(|k| enumerate_models(&g, k).unwrap()).collect();
        let nfs: Vec<Term> = terms.iter().map(|t| n.normalize(t).unwrap()).collect();
        for m in &models {
            let envs = m.environments(&vars).unwrap();
            for (t, nf) in terms.iter().zip(&nfs) {
                for e in &envs {
                    let env = |v: &Variable| vars.iter().position(|w| w == v).map(|i| e[i]);
                    assert_eq!(m.eval(t, &env).unwrap(), m.eval(nf, &env).unwrap(), "{t}");
                }
            }
        }
    }

    #[test]
    fn propositional_model_as_poset_map() {
        let ts = parse_theories(include_str!("../../fixtures/props.theory")).unwrap();
        let c = syn_prop(&ts[0]).unwrap();
        for m in enumerate_models(&ts[0], 0).unwrap() {
            let f = model_as_poset_functor(&m, &c).unwrap();
            assert!(f.monotone);
            assert_eq!(f.values.iter().filter(|v| v.1).count(), 2);
        }
    }
}
