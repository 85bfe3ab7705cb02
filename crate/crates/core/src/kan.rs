//! The value `(Lan_{M,N} Res_{M,N} V)_n`, as a comma-category colimit and as
//! the truncated tensor product `e_n A e ⊗_{eAe} eV`.
//!
//! Both constructions present their value on the same ambient basis: one block
//! of `V_s` for every `α ∈ hom(s, n)`, `M ≤ s ≤ N`, ordered by `s` then `α`.

use std::sync::Arc;

use censtab_linalg::{ModuleMap, PresentedModule, SparseVec};
use serde::Serialize;

use crate::category::Degree;
use crate::error::{Error, Result};
use crate::presentation::{generator_of, ModulePresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommaObject {
    pub s: Degree,
    /// Index in `hom(s, n)`.
    pub alpha: usize,
}

/// `φ: source → target` with `α_target ∘ φ = α_source`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommaArrow {
    pub source: usize,
    pub target: usize,
    /// Index in `hom(s_source, s_target)`.
    pub phi: usize,
}

#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub lo: Degree,
    pub hi: Degree,
    pub n: Degree,
    pub objects: Vec<CommaObject>,
    pub arrows: Vec<CommaArrow>,
    first: Vec<usize>,
}

impl CommaCategory {
    pub fn object_index(&self, s: Degree, alpha: usize) -> usize {
        self.first[s - self.lo] + alpha
    }
}

fn check_range(lo: Degree, hi: Degree) -> Result<()> {
    if lo > hi {
        return Err(Error::Precondition(format!("truncation range needs M ≤ N, got M = {lo}, N = {hi}")));
    }
    Ok(())
}

pub fn comma_category(p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree) -> Result<CommaCategory> {
    check_range(lo, hi)?;
    let cat = &p.category;
    let mut objects = Vec::new();
    let mut first = Vec::new();
    for s in lo..=hi {
        first.push(objects.len());
        for alpha in 0..cat.hom_size(s, n)? {
            objects.push(CommaObject { s, alpha });
        }
    }
    let mut comma = CommaCategory { lo, hi, n, objects, arrows: Vec::new(), first };
    let mut arrows = Vec::new();
    for (t, target) in comma.objects.iter().enumerate() {
        for s in lo..=target.s {
            let table = cat.composition_table(s, target.s, n)?;
            for phi in 0..cat.hom_size(s, target.s)? {
                let source = comma.object_index(s, table.get(target.alpha, phi));
                arrows.push(CommaArrow { source, target: t, phi });
            }
        }
    }
    comma.arrows = arrows;
    Ok(comma)
}

/// A value presented on the shared `(s, α, x)` ambient basis.
#[derive(Debug)]
pub struct KanValue {
    pub lo: Degree,
    pub hi: Degree,
    pub n: Degree,
    pub module: Arc<PresentedModule>,
    /// Start of the `(s, α)` block is `block[s - lo] + α · rank(V_s)`.
    block: Vec<usize>,
    ranks: Vec<usize>,
}

impl KanValue {
    pub fn offset(&self, s: Degree, alpha: usize) -> usize {
        self.block[s - self.lo] + alpha * self.ranks[s - self.lo]
    }
}

struct Layout {
    block: Vec<usize>,
    ranks: Vec<usize>,
    labels: Vec<String>,
}

fn layout(p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree) -> Result<Layout> {
    let mut block = Vec::new();
    let mut ranks = Vec::new();
    let mut total = 0usize;
    for s in lo..=hi {
        let r = p.evaluate_degree(s)?.rank();
        block.push(total);
        ranks.push(r);
        total += p.category.hom_size(s, n)? * r;
    }
    if total > p.category.cap() * 16 {
        return Err(Error::ResourceLimit { m: lo, n, cap: p.category.cap() });
    }
    let mut labels = Vec::with_capacity(total);
    for s in lo..=hi {
        let r = ranks[s - lo];
        for alpha in 0..p.category.hom_size(s, n)? {
            for x in 0..r {
                labels.push(format!("{s}:{alpha}:{x}"));
            }
        }
    }
    Ok(Layout { block, ranks, labels })
}

/// Relations of `V_s` copied into the block at `base`.
fn node_relations(p: &ModulePresentation, s: Degree, base: usize, out: &mut Vec<SparseVec>) -> Result<()> {
    let vs = p.evaluate_degree(s)?;
    for r in vs.module.relations() {
        out.push(r.remap(p.ring, |i| Some(base + i)));
    }
    Ok(())
}

/// Colimit over the comma category, as the cokernel of the total difference map.
pub fn kan_value_colimit(p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree) -> Result<(KanValue, CommaCategory)> {
    let comma = comma_category(p, lo, hi, n)?;
    let Layout { block, ranks, labels } = layout(p, lo, hi, n)?;
    let start = |o: &CommaObject| block[o.s - lo] + o.alpha * ranks[o.s - lo];
    let mut rels = Vec::new();
    for o in &comma.objects {
        node_relations(p, o.s, start(o), &mut rels)?;
    }
    let minus_one = p.ring.neg(&censtab_linalg::Int::ONE);
    for a in &comma.arrows {
        let (src, tgt) = (comma.objects[a.source], comma.objects[a.target]);
        if a.source == a.target {
            continue;
        }
        for x in 0..ranks[src.s - lo] {
            let y = p.act(src.s, tgt.s, a.phi, x)?;
            rels.push(SparseVec::from_entries(
                p.ring,
                [(start(&tgt) + y, censtab_linalg::Int::ONE), (start(&src) + x, minus_one.clone())],
            ));
        }
    }
    let module = Arc::new(PresentedModule::new(p.ring, labels, rels)?);
    Ok((KanValue { lo, hi, n, module, block, ranks }, comma))
}

/// `e_n A e ⊗_{eAe} eV` with `e = e_{lo,hi}`, as the coequalizer of the two
/// actions of `eAe`.
pub fn kan_value_tensor(p: &ModulePresentation, lo: Degree, hi: Degree, n: Degree) -> Result<KanValue> {
    check_range(lo, hi)?;
    let cat = &p.category;
    let Layout { block, ranks, labels } = layout(p, lo, hi, n)?;
    let start = |s: Degree, alpha: usize| block[s - lo] + alpha * ranks[s - lo];
    let mut rels = Vec::new();
    for s in lo..=hi {
        for alpha in 0..cat.hom_size(s, n)? {
            node_relations(p, s, start(s, alpha), &mut rels)?;
        }
    }
    let minus_one = p.ring.neg(&censtab_linalg::Int::ONE);
    // (α·γ) ⊗ x − α ⊗ (γ·x) for γ ∈ hom(s', s), x ∈ V_{s'}.
    for s in lo..=hi {
        let alphas = cat.hom_size(s, n)?;
        for s2 in lo..=s {
            let table = cat.composition_table(s2, s, n)?;
            let id = if s2 == s { Some(cat.identity_index(s)?) } else { None };
            for gamma in 0..cat.hom_size(s2, s)? {
                if Some(gamma) == id {
                    continue;
                }
                let moved: Vec<usize> =
                    (0..ranks[s2 - lo]).map(|x| p.act(s2, s, gamma, x)).collect::<Result<_>>()?;
                for alpha in 0..alphas {
                    let left = start(s2, table.get(alpha, gamma));
                    let right = start(s, alpha);
                    for (x, &y) in moved.iter().enumerate() {
                        rels.push(SparseVec::from_entries(
                            p.ring,
                            [(left + x, censtab_linalg::Int::ONE), (right + y, minus_one.clone())],
                        ));
                    }
                }
            }
        }
    }
    let module = Arc::new(PresentedModule::new(p.ring, labels, rels)?);
    Ok(KanValue { lo, hi, n, module, block, ranks })
}

/// `(s, α, x) ↦ α · x` from a value on the shared basis to `V_n`.
pub fn canonical_map(p: &ModulePresentation, value: &KanValue) -> Result<ModuleMap> {
    let cat = &p.category;
    let vn = p.evaluate_degree(value.n)?;
    let mut columns = Vec::with_capacity(value.module.rank());
    for s in value.lo..=value.hi {
        let vs = p.evaluate_degree(s)?;
        let tables = p
            .generators
            .iter()
            .map(|&a| cat.composition_table(a, s, value.n))
            .collect::<Result<Vec<_>>>()?;
        for alpha in 0..cat.hom_size(s, value.n)? {
            for x in 0..vs.rank() {
                let i = generator_of(&vs.offsets, x);
                columns.push(SparseVec::unit(vn.offsets[i] + tables[i].get(alpha, x - vs.offsets[i])));
            }
        }
    }
    Ok(ModuleMap::new(value.module.clone(), vn.module.clone(), columns)?)
}

/// The quotient injection of the node `(s, α)`: `V_s → value`.
pub fn cocone(p: &ModulePresentation, value: &KanValue, s: Degree, alpha: usize) -> Result<ModuleMap> {
    let vs = p.evaluate_degree(s)?;
    let base = value.offset(s, alpha);
    let columns = (0..vs.rank()).map(|x| SparseVec::unit(base + x)).collect();
    Ok(ModuleMap::new(vs.module.clone(), value.module.clone(), columns)?)
}

/// Natural map between two values on the same range and degree: the identity on
/// the shared ambient basis.
pub fn comparison_map(from: &KanValue, to: &KanValue) -> Result<ModuleMap> {
    if (from.lo, from.hi, from.n) != (to.lo, to.hi, to.n) || from.module.rank() != to.module.rank() {
        return Err(Error::Precondition("comparison needs values on the same truncation range and degree".into()));
    }
    let columns = (0..from.module.rank()).map(SparseVec::unit).collect();
    Ok(ModuleMap::new(from.module.clone(), to.module.clone(), columns)?)
}

/// `e_n A f ⊗_{fAf} fV → e_n A e ⊗_{eAe} eV` for `f = e_{lo+1,hi}`, `e = e_{lo,hi}`.
pub fn restriction_map(small: &KanValue, big: &KanValue) -> Result<ModuleMap> {
    if small.lo != big.lo + 1 || small.hi != big.hi || small.n != big.n {
        return Err(Error::Precondition("restriction needs ranges [m+1, N] and [m, N]".into()));
    }
    let shift = big.block[1];
    let columns = (0..small.module.rank()).map(|i| SparseVec::unit(i + shift)).collect();
    Ok(ModuleMap::new(small.module.clone(), big.module.clone(), columns)?)
}

/// Colimit of `V(|S|)` over subsets `S ⊆ [n]` with `|S| ≤ N`, for FI-modules.
#[derive(Debug)]
pub struct SubsetColimit {
    pub module: Arc<PresentedModule>,
    /// Subsets in order of size, then lexicographic.
    pub subsets: Vec<Vec<u8>>,
    offsets: Vec<usize>,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<u8>> {
    let cat = crate::category::Category::new(crate::category::CategorySpec::OiA { a: 1 }).expect("OI_1");
    // Increasing injections [k] → [n] are exactly the k-subsets, in lexicographic order.
    cat.hom(k, n)
        .map(|h| {
            h.morphisms()
                .iter()
                .map(|f| match &f.payload {
                    crate::category::Payload::Colored { images, .. } => images.clone(),
                    _ => unreachable!(),
                })
                .collect()
        })
        .unwrap_or_default()
}

pub fn fi_subset_colimit_oracle(p: &ModulePresentation, hi: Degree, n: Degree) -> Result<SubsetColimit> {
    if !p.category.is_fi() {
        return Err(Error::Precondition("the subset colimit is defined for FI-modules only".into()));
    }
    let cat = &p.category;
    let subsets: Vec<Vec<u8>> = (0..=hi.min(n)).flat_map(|k| subsets_of_size(n, k)).collect();
    let mut offsets = Vec::with_capacity(subsets.len());
    let mut labels = Vec::new();
    let mut rels = Vec::new();
    for s in &subsets {
        let vs = p.evaluate_degree(s.len())?;
        offsets.push(labels.len());
        node_relations(p, s.len(), labels.len(), &mut rels)?;
        labels.extend((0..vs.rank()).map(|x| format!("{s:?}:{x}")));
    }
    let minus_one = p.ring.neg(&censtab_linalg::Int::ONE);
    for (a, s) in subsets.iter().enumerate() {
        for (b, t) in subsets.iter().enumerate() {
            if t.len() <= s.len() || !s.iter().all(|x| t.contains(x)) {
                continue;
            }
            // Order-preserving identification [|S|] ≅ S followed by S ⊆ T ≅ [|T|].
            let images: Vec<u8> = s.iter().map(|x| t.iter().position(|y| y == x).unwrap() as u8).collect();
            let iota = crate::category::Morphism {
                source: s.len(),
                target: t.len(),
                payload: crate::category::Payload::Injection { images },
            };
            let phi = cat.index_of(&iota)?;
            for x in 0..p.evaluate_degree(s.len())?.rank() {
                let y = p.act(s.len(), t.len(), phi, x)?;
                rels.push(SparseVec::from_entries(
                    p.ring,
                    [(offsets[b] + y, censtab_linalg::Int::ONE), (offsets[a] + x, minus_one.clone())],
                ));
            }
        }
    }
    let module = Arc::new(PresentedModule::new(p.ring, labels, rels)?);
    Ok(SubsetColimit { module, subsets, offsets })
}

/// `S, x ↦ (|S|, ι_S), x` from the subset colimit to the comma-category colimit.
pub fn subset_comparison(p: &ModulePresentation, oracle: &SubsetColimit, colimit: &KanValue) -> Result<ModuleMap> {
    if colimit.lo != 0 {
        return Err(Error::Precondition("the subset oracle compares against the range [0, N]".into()));
    }
    let cat = &p.category;
    let mut columns = Vec::with_capacity(oracle.module.rank());
    for s in &oracle.subsets {
        let iota = crate::category::Morphism {
            source: s.len(),
            target: colimit.n,
            payload: crate::category::Payload::Injection { images: s.clone() },
        };
        let alpha = cat.index_of(&iota)?;
        let base = colimit.offset(s.len(), alpha);
        for x in 0..p.evaluate_degree(s.len())?.rank() {
            columns.push(SparseVec::unit(base + x));
        }
    }
    debug_assert_eq!(columns.len(), oracle.offsets.last().map_or(0, |_| oracle.module.rank()));
    Ok(ModuleMap::new(oracle.module.clone(), colimit.module.clone(), columns)?)
}
