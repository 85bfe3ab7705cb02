//! The modules `Ã(m,n)` and `Ĩ(m,n)`, degree-d generation of the ideal of
//! relations, and the combinatorial conditions (i) and (ii).
//!
//! Every hom-module is a permutation module, so the iterated tensor product
//! `Ã(m,n)` is free on the classes of composable chains `(ξ_{n-1}, …, ξ_m)`
//! under the balancing moves `(ξ γ, η) ~ (ξ, γ η)`, `γ ∈ End(k)`. The classes
//! are computed stage by stage with a union-find.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use censtab_linalg::{invariant_factors, submodule_equal, ModuleMap, PresentedModule, RingSpec, SparseVec};
use serde::Serialize;

use crate::category::{Category, CategorySpec, Degree, Morphism};
use crate::error::{Error, Result};

pub fn counterexample_category() -> CategorySpec {
    CategorySpec::Counterexample
}

/// A morphism in a report: its index in the hom-set, a readable name and the
/// canonical payload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismRef {
    pub index: usize,
    pub name: String,
    pub morphism: Morphism,
}

fn morphism_ref(cat: &Category, m: Degree, n: Degree, index: usize) -> Result<MorphismRef> {
    let morphism = cat.hom(m, n)?.get(index).clone();
    Ok(MorphismRef { index, name: cat.describe(&morphism), morphism })
}

/// Greedy generating set of the monoid `End(k)`, in enumeration order.
fn monoid_generators(cat: &Category, k: Degree) -> Result<Vec<usize>> {
    let size = cat.hom_size(k, k)?;
    let table = cat.composition_table(k, k, k)?;
    let id = cat.identity_index(k)?;
    let mut reached = vec![false; size];
    reached[id] = true;
    let mut members = vec![id];
    let mut gens = Vec::new();
    for e in 0..size {
        if reached[e] {
            continue;
        }
        gens.push(e);
        // Close the submonoid under right multiplication by the generators.
        let mut queue: Vec<usize> = members.clone();
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = table.get(x, g);
                if !reached[y] {
                    reached[y] = true;
                    members.push(y);
                    queue.push(y);
                }
            }
        }
    }
    Ok(gens)
}

/// A step of a chain: `(source, target, index)` with target = source or source + 1.
type Step = (Degree, Degree, usize);

/// `Ã(m,n)` as a free module on chain classes.
#[derive(Debug)]
pub struct ATilde {
    pub m: Degree,
    pub n: Degree,
    /// Representative chain of each class, first-applied step first. For
    /// `m = n` each class is a single endomorphism.
    pub reps: Vec<Vec<usize>>,
    /// Index in `hom(m,n)` of the composite of each class.
    pub composite: Vec<usize>,
    // stages[j][g · size(j) + y] is the class of (g, y) in stage m+2+j.
    stages: Vec<Vec<u32>>,
    sizes: Vec<usize>,
}

impl ATilde {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    fn class_of_chain(&self, chain: &[usize]) -> usize {
        if self.m == self.n {
            return chain[0];
        }
        let mut c = chain[0];
        for (j, &g) in chain[1..].iter().enumerate() {
            c = self.stages[j][g * self.sizes[j] + c] as usize;
        }
        c
    }

    fn sequence(&self, c: usize) -> Vec<Step> {
        if self.m == self.n {
            return vec![(self.m, self.m, self.reps[c][0])];
        }
        self.reps[c].iter().enumerate().map(|(i, &g)| (self.m + i, self.m + i + 1, g)).collect()
    }

    /// Class of an arbitrary composable sequence of steps and endomorphisms
    /// from `m` to `n`. Endomorphisms are absorbed into a neighbouring step,
    /// which is legitimate by the balancing relations.
    fn class_of_sequence(&self, cat: &Category, seq: &[Step]) -> Result<usize> {
        let mut chain: Vec<usize> = Vec::with_capacity(self.n - self.m);
        let mut pending: Option<usize> = None;
        for &(s, t, x) in seq {
            if s == t {
                if let Some(&last) = chain.last() {
                    let v = cat.composition_table(s - 1, s, s)?.get(x, last);
                    *chain.last_mut().unwrap() = v;
                } else {
                    pending = Some(match pending {
                        Some(e) => cat.composition_table(s, s, s)?.get(x, e),
                        None => x,
                    });
                }
            } else {
                let step = match pending.take() {
                    Some(e) => cat.composition_table(s, s, t)?.get(x, e),
                    None => x,
                };
                chain.push(step);
            }
        }
        if chain.is_empty() {
            let e = match pending {
                Some(e) => e,
                None => cat.identity_index(self.m)?,
            };
            return Ok(self.class_of_chain(&[e]));
        }
        Ok(self.class_of_chain(&chain))
    }

    /// `γ · c` for `γ ∈ End(n)`.
    fn act_left(&self, cat: &Category, gamma: usize, c: usize) -> Result<usize> {
        let mut seq = self.sequence(c);
        seq.push((self.n, self.n, gamma));
        self.class_of_sequence(cat, &seq)
    }

    /// `c · δ` for `δ ∈ End(m)`.
    fn act_right(&self, cat: &Category, delta: usize, c: usize) -> Result<usize> {
        let mut seq = vec![(self.m, self.m, delta)];
        seq.extend(self.sequence(c));
        self.class_of_sequence(cat, &seq)
    }

    pub fn ambient(&self, ring: RingSpec, cat: &Category) -> PresentedModule {
        let labels = (0..self.rank())
            .map(|c| {
                self.sequence(c)
                    .iter()
                    .rev()
                    .map(|&(s, t, x)| cat.hom(s, t).map(|h| cat.describe(h.get(x))).unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join("⊗")
            })
            .collect();
        PresentedModule::free(ring, labels)
    }
}

fn build_base(cat: &Category, m: Degree, n: Degree) -> Result<ATilde> {
    let size = cat.hom_size(m, n)?;
    Ok(ATilde {
        m,
        n,
        reps: (0..size).map(|x| vec![x]).collect(),
        composite: (0..size).collect(),
        stages: Vec::new(),
        sizes: Vec::new(),
    })
}

fn extend(cat: &Category, prev: &ATilde) -> Result<ATilde> {
    let (m, k) = (prev.m, prev.n);
    debug_assert!(k > m);
    let steps = cat.hom_size(k, k + 1)?;
    let ny = prev.rank();
    let pairs = steps.checked_mul(ny).filter(|&p| p <= cat.cap() * 16).ok_or(Error::ResourceLimit { m, n: k + 1, cap: cat.cap() })?;
    let gens = monoid_generators(cat, k)?;
    let right = cat.composition_table(k, k, k + 1)?;
    let mut parent: Vec<u32> = (0..pairs as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[parent[x as usize] as usize];
            parent[x as usize] = p;
            x = p;
        }
        x
    }
    for &gamma in &gens {
        let moved: Vec<usize> = (0..ny).map(|y| prev.act_left(cat, gamma, y)).collect::<Result<_>>()?;
        for g in 0..steps {
            let g2 = right.get(g, gamma);
            for y in 0..ny {
                let a = find(&mut parent, (g2 * ny + y) as u32);
                let b = find(&mut parent, (g * ny + moved[y]) as u32);
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
    }
    let comp = cat.composition_table(m, k, k + 1)?;
    let mut class_of_root: HashMap<u32, u32> = HashMap::new();
    let mut table = Vec::with_capacity(pairs);
    let mut reps = Vec::new();
    let mut composite = Vec::new();
    for i in 0..pairs as u32 {
        let root = find(&mut parent, i);
        let c = *class_of_root.entry(root).or_insert_with(|| {
            let (g, y) = (root as usize / ny, root as usize % ny);
            let mut chain = prev.reps[y].clone();
            chain.push(g);
            reps.push(chain);
            composite.push(comp.get(g, prev.composite[y]));
            (reps.len() - 1) as u32
        });
        table.push(c);
    }
    let mut stages = prev.stages.clone();
    stages.push(table);
    let mut sizes = prev.sizes.clone();
    sizes.push(ny);
    Ok(ATilde { m, n: k + 1, reps, composite, stages, sizes })
}

/// Orbit representatives covering all classes under a monoid action.
fn orbit_cover(size: usize, gens: &[usize], act: impl Fn(usize, usize) -> Result<usize>) -> Result<Vec<usize>> {
    let mut covered = vec![false; size];
    let mut reps = Vec::new();
    for c in 0..size {
        if covered[c] {
            continue;
        }
        reps.push(c);
        covered[c] = true;
        let mut queue = vec![c];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = act(g, x)?;
                if !covered[y] {
                    covered[y] = true;
                    queue.push(y);
                }
            }
        }
    }
    Ok(reps)
}

/// Memoizes `Ã` and `Ĩ` for one category.
pub struct RelationsAnalyzer {
    cat: Arc<Category>,
    a_tilde: Mutex<HashMap<(Degree, Degree), Arc<ATilde>>>,
    i_tilde: Mutex<HashMap<(RingSpec, Degree, Degree), Arc<Vec<SparseVec>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationVerdict {
    pub m: Degree,
    pub n: Degree,
    pub d: usize,
    pub ring: String,
    /// Whether `Ã(m,n) → Hom(m,n)` is onto.
    pub surjective: bool,
    pub a_tilde_rank: usize,
    pub lhs_generators: usize,
    pub rhs_generators: usize,
    pub lhs_zero: bool,
    pub rhs_zero: bool,
    /// The right-hand side always lies in `Ĩ(m,n)`; recorded as a sanity check.
    pub rhs_contained: bool,
    pub equal: bool,
    /// Over ℤ only: equality after saturating the right-hand side in `Ã(m,n)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturated_equal: Option<bool>,
    pub passed: bool,
}

impl RelationsAnalyzer {
    pub fn new(cat: Arc<Category>) -> Self {
        RelationsAnalyzer { cat, a_tilde: Mutex::default(), i_tilde: Mutex::default() }
    }

    pub fn category(&self) -> &Arc<Category> {
        &self.cat
    }

    pub fn a_tilde(&self, m: Degree, n: Degree) -> Result<Arc<ATilde>> {
        if n < m {
            return Err(Error::Precondition(format!("Ã(m,n) needs n ≥ m, got ({m},{n})")));
        }
        if let Some(a) = self.a_tilde.lock().unwrap().get(&(m, n)) {
            return Ok(a.clone());
        }
        let a = if n <= m + 1 { build_base(&self.cat, m, n)? } else { extend(&self.cat, &*self.a_tilde(m, n - 1)?)? };
        let a = Arc::new(a);
        self.a_tilde.lock().unwrap().insert((m, n), a.clone());
        Ok(a)
    }

    /// `π: Ã(m,n) → R[Hom(m,n)]`, composing chains.
    pub fn projection(&self, ring: RingSpec, m: Degree, n: Degree) -> Result<ModuleMap> {
        let a = self.a_tilde(m, n)?;
        let target = self.cat.hom(m, n)?;
        let labels = target.morphisms().iter().map(|f| self.cat.describe(f)).collect();
        let columns = a.composite.iter().map(|&x| SparseVec::unit(x)).collect();
        Ok(ModuleMap::new(
            Arc::new(a.ambient(ring, &self.cat)),
            Arc::new(PresentedModule::free(ring, labels)),
            columns,
        )?)
    }

    /// Generators of `Ĩ(m,n) = ker π`.
    pub fn i_tilde(&self, ring: RingSpec, m: Degree, n: Degree) -> Result<Arc<Vec<SparseVec>>> {
        if let Some(v) = self.i_tilde.lock().unwrap().get(&(ring, m, n)) {
            return Ok(v.clone());
        }
        let gens = Arc::new(self.projection(ring, m, n)?.kernel_generators()?);
        self.i_tilde.lock().unwrap().insert((ring, m, n), gens.clone());
        Ok(gens)
    }

    /// Spanning set of `Σ_r Ã(r+d,n) ⊗ Ĩ(r,r+d) ⊗ Ã(m,r)` inside `Ã(m,n)`.
    pub fn rhs_generators(&self, ring: RingSpec, d: usize, m: Degree, n: Degree) -> Result<Vec<SparseVec>> {
        let cat = &self.cat;
        let target = self.a_tilde(m, n)?;
        let mut out: HashSet<SparseVec> = HashSet::new();
        for r in m..=(n - d) {
            let ideal = self.i_tilde(ring, r, r + d)?;
            if ideal.is_empty() {
                continue;
            }
            let middle = self.a_tilde(r, r + d)?;
            let top = self.a_tilde(r + d, n)?;
            let bottom = self.a_tilde(m, r)?;
            // Right End(r+d)-module generators of the top factor, left End(r)-module
            // generators of the bottom factor; the ideal absorbs the rest.
            let top_gens = orbit_cover(top.rank(), &monoid_generators(cat, r + d)?, |g, c| top.act_right(cat, g, c))?;
            let bottom_gens = orbit_cover(bottom.rank(), &monoid_generators(cat, r)?, |g, c| bottom.act_left(cat, g, c))?;
            for &u in &top_gens {
                let useq = top.sequence(u);
                for &w in &bottom_gens {
                    let wseq = bottom.sequence(w);
                    let mut image: HashMap<usize, usize> = HashMap::new();
                    for v in ideal.iter() {
                        let mut terms = Vec::with_capacity(v.len());
                        for (j, c) in v.entries() {
                            let cls = *match image.get(j) {
                                Some(x) => x,
                                None => {
                                    let mut seq = wseq.clone();
                                    seq.extend(middle.sequence(*j));
                                    seq.extend(useq.iter().copied());
                                    let x = target.class_of_sequence(cat, &seq)?;
                                    image.insert(*j, x);
                                    image.get(j).unwrap()
                                }
                            };
                            terms.push((cls, c.clone()));
                        }
                        let col = SparseVec::from_entries(ring, terms);
                        if !col.is_zero() {
                            out.insert(col);
                        }
                    }
                }
            }
        }
        let mut cols: Vec<SparseVec> = out.into_iter().collect();
        cols.sort_by(|a, b| a.entries().cmp(b.entries()));
        Ok(cols)
    }

    pub fn check_degree_generation(&self, ring: RingSpec, d: usize, m: Degree, n: Degree) -> Result<GenerationVerdict> {
        if d == 0 || n < m + d {
            return Err(Error::Precondition(format!("degree-{d} generation check needs n ≥ m + d, got ({m},{n})")));
        }
        let pi = self.projection(ring, m, n)?;
        let surjective = pi.cokernel()?.is_zero_module();
        let a = self.a_tilde(m, n)?;
        let ambient = a.ambient(ring, &self.cat);
        let lhs = self.i_tilde(ring, m, n)?;
        let rhs = self.rhs_generators(ring, d, m, n)?;
        let union: Vec<SparseVec> = lhs.iter().chain(rhs.iter()).cloned().collect();
        let rhs_contained = submodule_equal(&lhs, &union, &ambient)?;
        let equal = submodule_equal(&lhs, &rhs, &ambient)?;
        // Ĩ is a kernel, hence saturated; with RHS ⊆ Ĩ the saturations agree iff the ranks do.
        let saturated_equal = if ring == RingSpec::Integers {
            let free_rank = |gens: &[SparseVec]| -> Result<usize> {
                Ok(invariant_factors(&ambient.with_relations(gens.to_vec())?).iter().filter(|x| x.is_zero()).count())
            };
            Some(rhs_contained && free_rank(&lhs)? == free_rank(&rhs)?)
        } else {
            None
        };
        Ok(GenerationVerdict {
            m,
            n,
            d,
            ring: ring.to_string(),
            surjective,
            a_tilde_rank: a.rank(),
            lhs_generators: lhs.len(),
            rhs_generators: rhs.len(),
            lhs_zero: lhs.iter().all(|v| v.is_zero()),
            rhs_zero: rhs.is_empty(),
            rhs_contained,
            equal,
            saturated_equal,
            passed: surjective && equal,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIFailure {
    pub m: Degree,
    pub l: Degree,
    pub n: Degree,
    pub unhit: MorphismRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIReport {
    pub m_max: Degree,
    pub n_max: Degree,
    pub triples_checked: usize,
    pub failures: Vec<ConditionIFailure>,
    pub passed: bool,
}

/// Surjectivity of `Hom(l,n) × Hom(m,l) → Hom(m,n)` for all `m < l < n ≤ n_max`, `m ≤ m_max`.
pub fn check_condition_i(cat: &Category, m_max: Degree, n_max: Degree) -> Result<ConditionIReport> {
    let mut failures = Vec::new();
    let mut triples = 0;
    for n in 0..=n_max {
        for m in 0..n.min(m_max + 1) {
            for l in (m + 1)..n {
                triples += 1;
                let table = cat.composition_table(m, l, n)?;
                let mut hit = vec![false; cat.hom_size(m, n)?];
                for g in 0..cat.hom_size(l, n)? {
                    for f in 0..cat.hom_size(m, l)? {
                        hit[table.get(g, f)] = true;
                    }
                }
                if let Some(x) = hit.iter().position(|h| !h) {
                    failures.push(ConditionIFailure { m, l, n, unhit: morphism_ref(cat, m, n, x)? });
                }
            }
        }
    }
    Ok(ConditionIReport { m_max, n_max, triples_checked: triples, passed: failures.is_empty(), failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIIWitness {
    pub alpha1: MorphismRef,
    pub alpha2: MorphismRef,
    pub beta1: MorphismRef,
    pub beta2: MorphismRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionIIVerdict {
    pub d: usize,
    pub m: Degree,
    pub n: Degree,
    /// Quadruples `(α₁, α₂, β₁, β₂)` with `α₁β₁ = α₂β₂` examined.
    pub quadruples_checked: usize,
    /// True when `n ≤ m + d`, so the condition asks nothing.
    pub vacuous: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ConditionIIWitness>,
}

/// Exhaustive search for condition (ii) at `(m, n)`. Quadruples are visited in
/// lexicographic order of `(α₁, α₂, β₁, β₂)` and factorizations in order of
/// `(γ, δ₁, δ₂)`; the first quadruple without a factorization is the witness.
pub fn check_condition_ii(cat: &Category, d: usize, m: Degree, n: Degree) -> Result<ConditionIIVerdict> {
    if d < 2 {
        return Err(Error::Precondition("condition (ii) is stated for d ≥ 2".into()));
    }
    if n <= m + d {
        return Ok(ConditionIIVerdict { d, m, n, quadruples_checked: 0, vacuous: true, passed: true, witness: None });
    }
    let (na, nb) = (cat.hom_size(m + 1, n)?, cat.hom_size(m, m + 1)?);
    let ab = cat.composition_table(m, m + 1, n)?;
    let gd = cat.composition_table(m + 1, m + d, n)?;
    let db = cat.composition_table(m, m + 1, m + d)?;
    // Factorizations α = γ δ, sorted by (γ, δ).
    let mut fac: Vec<Vec<(usize, usize)>> = vec![Vec::new(); na];
    for g in 0..cat.hom_size(m + d, n)? {
        for dl in 0..cat.hom_size(m + 1, m + d)? {
            fac[gd.get(g, dl)].push((g, dl));
        }
    }
    // For each composite, the pairs (α, β) producing it.
    let mut by_composite: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for a in 0..na {
        for b in 0..nb {
            by_composite.entry(ab.get(a, b)).or_default().push((a, b));
        }
    }
    let solvable = |a1: usize, a2: usize, b1: usize, b2: usize| -> bool {
        let (f1, f2) = (&fac[a1], &fac[a2]);
        let (mut i, mut j) = (0, 0);
        while i < f1.len() && j < f2.len() {
            let (g1, g2) = (f1[i].0, f2[j].0);
            if g1 < g2 {
                i += 1;
            } else if g2 < g1 {
                j += 1;
            } else {
                let i_end = i + f1[i..].iter().take_while(|x| x.0 == g1).count();
                let j_end = j + f2[j..].iter().take_while(|x| x.0 == g1).count();
                for &(_, d1) in &f1[i..i_end] {
                    for &(_, d2) in &f2[j..j_end] {
                        if db.get(d1, b1) == db.get(d2, b2) {
                            return true;
                        }
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
        false
    };
    let mut checked = 0;
    for a1 in 0..na {
        for a2 in 0..na {
            for b1 in 0..nb {
                let c = ab.get(a1, b1);
                for &(a, b2) in &by_composite[&c] {
                    if a != a2 {
                        continue;
                    }
                    checked += 1;
                    if !solvable(a1, a2, b1, b2) {
                        let witness = ConditionIIWitness {
                            alpha1: morphism_ref(cat, m + 1, n, a1)?,
                            alpha2: morphism_ref(cat, m + 1, n, a2)?,
                            beta1: morphism_ref(cat, m, m + 1, b1)?,
                            beta2: morphism_ref(cat, m, m + 1, b2)?,
                        };
                        return Ok(ConditionIIVerdict {
                            d,
                            m,
                            n,
                            quadruples_checked: checked,
                            vacuous: false,
                            passed: false,
                            witness: Some(witness),
                        });
                    }
                }
            }
        }
    }
    Ok(ConditionIIVerdict { d, m, n, quadruples_checked: checked, vacuous: false, passed: true, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationsReport {
    pub category: String,
    pub rings: Vec<String>,
    pub d: usize,
    pub m_range: (Degree, Degree),
    pub n_max: Degree,
    /// Degree-d generation verdicts, ordered by (m, n) and then ring.
    pub generation: Vec<GenerationVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_i: Option<ConditionIReport>,
    pub condition_ii: Vec<ConditionIIVerdict>,
    /// Pairs on which the rings disagree.
    pub ring_discrepancies: Vec<(Degree, Degree)>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_by: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct RelationsRequest {
    pub d: usize,
    pub m_min: Degree,
    pub m_max: Degree,
    pub n_min: Degree,
    pub n_max: Degree,
    pub generation: bool,
    pub conditions: bool,
}

/// Runs the requested checks over every `(m, n)` in range, in lexicographic
/// order. A resource cap ends the run early with `complete = false`.
pub fn relations_report(cat: Arc<Category>, rings: &[RingSpec], req: RelationsRequest) -> Result<RelationsReport> {
    if req.d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let analyzer = RelationsAnalyzer::new(cat.clone());
    let mut report = RelationsReport {
        category: cat.id(),
        rings: rings.iter().map(|r| r.to_string()).collect(),
        d: req.d,
        m_range: (req.m_min, req.m_max),
        n_max: req.n_max,
        generation: Vec::new(),
        condition_i: None,
        condition_ii: Vec::new(),
        ring_discrepancies: Vec::new(),
        complete: true,
        stopped_by: None,
        passed: true,
    };
    let run = |report: &mut RelationsReport| -> Result<()> {
        if req.conditions {
            report.condition_i = Some(check_condition_i(&cat, req.m_max, req.n_max)?);
        }
        for m in req.m_min..=req.m_max {
            for n in (m + req.d).max(req.n_min)..=req.n_max {
                if req.generation {
                    let verdicts: Vec<GenerationVerdict> =
                        rings.iter().map(|&r| analyzer.check_degree_generation(r, req.d, m, n)).collect::<Result<_>>()?;
                    if verdicts.iter().any(|v| v.passed != verdicts[0].passed) {
                        report.ring_discrepancies.push((m, n));
                    }
                    report.generation.extend(verdicts);
                }
                if req.conditions && req.d >= 2 && n > m + req.d {
                    report.condition_ii.push(check_condition_ii(&cat, req.d, m, n)?);
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut report) {
        if !e.is_resource_limit() {
            return Err(e);
        }
        report.complete = false;
        report.stopped_by = Some(e.to_string());
    }
    report.passed = report.complete
        && report.generation.iter().all(|v| v.passed)
        && report.condition_i.as_ref().is_none_or(|c| c.passed)
        && report.condition_ii.iter().all(|v| v.passed);
    Ok(report)
}
