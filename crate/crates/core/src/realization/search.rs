use super::{table_len, FiniteModel, OpTable};
use crate::error::{Error, Result};
use crate::lindenbaum::satisfying_assignments;
use crate::theory::{Formula, Fragment, Substitutable, Term, Theory, Variable};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Backtracking over table cells with equation-driven propagation.
    #[default]
    Pruned,
    /// Every total table assignment, checked afterwards.
    BruteForce,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub max_table_space: u128,
    pub max_nodes: u64,
    /// Axiom-instance evaluations allowed during pruned search.
    pub max_work: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_table_space: 1_000_000_000, max_nodes: 10_000_000, max_work: 200_000_000 }
    }
}

/// All models of `t` on the carrier `{0..size}` (every sort), in canonical
/// order. For propositional theories `size` is ignored.
pub fn enumerate_models(t: &Theory, size: usize) -> Result<Vec<FiniteModel>> {
    enumerate_models_with(t, size, Strategy::default(), &SearchLimits::default())
}

pub fn enumerate_models_with(t: &Theory, size: usize, strategy: Strategy, limits: &SearchLimits) -> Result<Vec<FiniteModel>> {
    if t.fragment == Fragment::Prop {
        return Ok(satisfying_assignments(t)?.into_iter().map(|a| FiniteModel::assignment(t, a.0)).collect());
    }
    let problem = Problem::new(t, size)?;
    let mut found = match strategy {
        Strategy::Pruned => problem.pruned(limits)?,
        Strategy::BruteForce => problem.brute_force(limits)?,
    };
    found.sort();
    found.dedup();
    Ok(found.into_iter().map(|cells| problem.model(&cells)).collect())
}

enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

enum Ev {
    Val(usize),
    /// Every argument is known but this cell of the outermost table is not.
    Missing(usize),
    Unknown,
}

struct Problem {
    template: FiniteModel,
    offsets: Vec<usize>,
    /// Codomain size of each cell.
    ranges: Vec<usize>,
    axioms: Vec<(CTerm, CTerm)>,
    instances: Vec<(usize, Vec<usize>)>,
    /// Cells in branching order: constants first, then by arity.
    order: Vec<usize>,
}

impl Problem {
    fn new(t: &Theory, size: usize) -> Result<Self> {
        let sizes = vec![size; t.sorts.len()];
        let mut template =
            FiniteModel { theory: t.name.clone(), sorts: t.sorts.clone(), sizes: sizes.clone(), ops: vec![], letters: Default::default() };
        for f in &t.functions {
            let sort = |s| t.sort_index(s).ok_or_else(|| Error::UnknownSymbol(s.to_string()));
            let domain = f.domain.iter().map(sort).collect::<Result<Vec<_>>>()?;
            template.ops.push(OpTable { name: f.name.clone(), domain, codomain: sort(&f.codomain)?, table: vec![] });
        }
        let mut offsets = Vec::new();
        let mut ranges = Vec::new();
        for op in &template.ops {
            offsets.push(ranges.len());
            ranges.extend(std::iter::repeat_n(sizes[op.codomain], table_len(&sizes, &op.domain)));
        }
        let mut ops_by_arity: Vec<usize> = (0..template.ops.len()).collect();
        ops_by_arity.sort_by_key(|&i| template.ops[i].domain.len());
        let order = ops_by_arity.iter().flat_map(|&i| offsets[i]..offsets[i] + table_len(&sizes, &template.ops[i].domain)).collect();

        let mut axioms = Vec::new();
        let mut instances = Vec::new();
        for ax in &t.axioms {
            let Formula::Eq(l, r) = ax else {
                return Err(Error::FragmentViolation(format!("axiom `{ax}` is not an equation")));
            };
            let vars: Vec<Variable> = ax.free_vars().into_iter().collect();
            let compile = |term: &Term| compile(&template, &vars, term);
            axioms.push((compile(l)?, compile(r)?));
            for env in template.environments(&vars)? {
                instances.push((axioms.len() - 1, env));
            }
        }
        Ok(Problem { template, offsets, ranges, axioms, instances, order })
    }

    fn eval(&self, t: &CTerm, env: &[usize], cells: &[Option<usize>]) -> Ev {
        match t {
            CTerm::Var(i) => Ev::Val(env[*i]),
            CTerm::App(op, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval(a, env, cells) {
                        Ev::Val(v) => vals.push(v),
                        _ => return Ev::Unknown,
                    }
                }
                let o = &self.template.ops[*op];
                let cell = self.offsets[*op] + super::cell_index(&self.template.sizes, &o.domain, &vals);
                match cells[cell] {
                    Some(v) => Ev::Val(v),
                    None => Ev::Missing(cell),
                }
            }
        }
    }

    /// Fills cells forced by axiom instances; false on contradiction.
    fn propagate(&self, cells: &mut [Option<usize>], work: &mut u64, limits: &SearchLimits) -> Result<bool> {
        loop {
            *work += self.instances.len() as u64;
            if *work > limits.max_work {
                return Err(Error::capacity("model search work", *work as u128, limits.max_work as u128));
            }
            let mut changed = false;
            for (ax, env) in &self.instances {
                let (l, r) = &self.axioms[*ax];
                match (self.eval(l, env, cells), self.eval(r, env, cells)) {
                    (Ev::Val(a), Ev::Val(b)) if a != b => return Ok(false),
                    (Ev::Val(a), Ev::Missing(c)) | (Ev::Missing(c), Ev::Val(a)) => {
                        cells[c] = Some(a);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(true);
            }
        }
    }

    fn pruned(&self, limits: &SearchLimits) -> Result<Vec<Vec<usize>>> {
        let mut cells = vec![None; self.ranges.len()];
        let mut out = Vec::new();
        let mut nodes = 0u64;
        let mut work = 0u64;
        if self.propagate(&mut cells, &mut work, limits)? {
            self.branch(cells, &mut out, &mut nodes, &mut work, limits)?;
        }
        Ok(out)
    }

    fn branch(
        &self,
        cells: Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        work: &mut u64,
        limits: &SearchLimits,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > limits.max_nodes {
            return Err(Error::capacity("model search nodes", *nodes as u128, limits.max_nodes as u128));
        }
        let Some(&cell) = self.order.iter().find(|&&c| cells[c].is_none()) else {
            out.push(cells.into_iter().map(|c| c.unwrap()).collect());
            return Ok(());
        };
        for v in 0..self.ranges[cell] {
            let mut next = cells.clone();
            next[cell] = Some(v);
            if self.propagate(&mut next, work, limits)? {
                self.branch(next, out, nodes, work, limits)?;
            }
        }
        Ok(())
    }

    fn brute_force(&self, limits: &SearchLimits) -> Result<Vec<Vec<usize>>> {
        let space = self.ranges.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128)).unwrap_or(u128::MAX);
        if space > limits.max_table_space {
            return Err(Error::capacity("operation-table space", space, limits.max_table_space));
        }
        let mut out = Vec::new();
        if space == 0 {
            return Ok(out);
        }
        let mut cells = vec![0usize; self.ranges.len()];
        loop {
            let filled: Vec<Option<usize>> = cells.iter().copied().map(Some).collect();
            let ok = self.instances.iter().all(|(ax, env)| {
                let (l, r) = &self.axioms[*ax];
                matches!((self.eval(l, env, &filled), self.eval(r, env, &filled)), (Ev::Val(a), Ev::Val(b)) if a == b)
            });
            if ok {
                out.push(cells.clone());
            }
            let mut i = cells.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cells[i] += 1;
                if cells[i] < self.ranges[i] {
                    break;
                }
                cells[i] = 0;
            }
        }
    }

    fn model(&self, cells: &[usize]) -> FiniteModel {
        let mut m = self.template.clone();
        for (i, op) in m.ops.iter_mut().enumerate() {
            let start = self.offsets[i];
            op.table = cells[start..start + table_len(&self.template.sizes, &op.domain)].to_vec();
        }
        m
    }
}

fn compile(m: &FiniteModel, vars: &[Variable], t: &Term) -> Result<CTerm> {
    Ok(match t {
        Term::Var(v) => CTerm::Var(vars.iter().position(|w| w == v).ok_or_else(|| Error::UnknownSymbol(v.name.clone()))?),
        Term::App { op, args } => CTerm::App(
            m.ops.iter().position(|o| &o.name == op).ok_or_else(|| Error::UnknownSymbol(op.clone()))?,
            args.iter().map(|a| compile(m, vars, a)).collect::<Result<_>>()?,
        ),
    })
}
