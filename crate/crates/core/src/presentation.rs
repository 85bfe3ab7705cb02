//! Graded modules presented in finite degrees, evaluated one degree at a time.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use censtab_linalg::{Int, ModuleMap, PresentedModule, RingSpec, SparseVec};
use serde::{Deserialize, Serialize};

use crate::category::{Category, CategorySpec, Degree, Morphism, DEFAULT_HOM_CAP};
use crate::error::{Error, Result};

/// `coeff · (generator gen, morphism hom_index ∈ hom(a_gen, b))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub gen: usize,
    pub hom_index: usize,
    pub coeff: Int,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub degree: Degree,
    pub terms: Vec<Term>,
}

/// A module value in one degree: `offsets[i]` is where the block
/// `hom(a_i, n)` starts in the ambient basis.
#[derive(Debug)]
pub struct DegreeModule {
    pub degree: Degree,
    pub module: Arc<PresentedModule>,
    pub offsets: Vec<usize>,
}

impl DegreeModule {
    pub fn rank(&self) -> usize {
        self.module.rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub problems: Vec<String>,
    pub max_generator_degree: Option<Degree>,
    pub max_relation_degree: Option<Degree>,
    /// Upper bound for the presentation degree read off the presentation.
    pub prd_bound: Degree,
}

impl Diagnostics {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Debug)]
pub struct ModulePresentation {
    pub category: Arc<Category>,
    pub ring: RingSpec,
    pub generators: Vec<Degree>,
    pub relations: Vec<Relation>,
    cache: RwLock<HashMap<Degree, Arc<DegreeModule>>>,
}

impl Clone for ModulePresentation {
    fn clone(&self) -> Self {
        ModulePresentation::new(self.category.clone(), self.ring, self.generators.clone(), self.relations.clone())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleFile {
    category: serde_json::Value,
    ring: RingSpec,
    generators: Vec<Degree>,
    #[serde(default)]
    relations: Vec<Relation>,
}

/// `M(k) = Ae_k`: one generator of degree `k`, no relations.
pub fn free_module(category: Arc<Category>, ring: RingSpec, k: Degree) -> ModulePresentation {
    ModulePresentation::new(category, ring, vec![k], Vec::new())
}

impl ModulePresentation {
    pub fn new(category: Arc<Category>, ring: RingSpec, generators: Vec<Degree>, relations: Vec<Relation>) -> Self {
        let relations = relations
            .into_iter()
            .map(|r| Relation {
                degree: r.degree,
                terms: r.terms.into_iter().map(|t| Term { coeff: ring.reduce(&t.coeff), ..t }).collect(),
            })
            .collect();
        ModulePresentation { category, ring, generators, relations, cache: RwLock::default() }
    }

    /// Parses a module document and rejects presentations with diagnostics.
    pub fn from_json(text: &str, hom_cap: usize) -> Result<Self> {
        let file: ModuleFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("module file: {e}")))?;
        let spec = CategorySpec::from_json(&file.category)?;
        let category = Arc::new(Category::with_cap(spec, hom_cap)?);
        let p = ModulePresentation::new(category, file.ring, file.generators, file.relations);
        let diag = p.validate();
        if !diag.is_clean() {
            return Err(Error::InvalidPresentation(diag.problems.join("; ")));
        }
        Ok(p)
    }

    pub fn from_json_default_cap(text: &str) -> Result<Self> {
        ModulePresentation::from_json(text, DEFAULT_HOM_CAP)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "category": self.category.spec(),
            "ring": self.ring,
            "generators": self.generators,
            "relations": self.relations,
        })
    }

    pub fn validate(&self) -> Diagnostics {
        let mut problems = Vec::new();
        let max_generator_degree = self.generators.iter().copied().max();
        let max_relation_degree = self.relations.iter().map(|r| r.degree).max();
        if let Some(top) = self.category.objects_max() {
            for (i, &a) in self.generators.iter().enumerate() {
                if a > top {
                    problems.push(format!("generator {i}: degree {a} exceeds objects_max {top}"));
                }
            }
        }
        for (j, r) in self.relations.iter().enumerate() {
            for (t, term) in r.terms.iter().enumerate() {
                let at = format!("relation {j}, term {t}");
                let Some(&a) = self.generators.get(term.gen) else {
                    problems.push(format!("{at}: generator {} does not exist", term.gen));
                    continue;
                };
                if a > r.degree {
                    problems.push(format!("{at}: generator degree {a} exceeds relation degree {}", r.degree));
                    continue;
                }
                match self.category.hom_size(a, r.degree) {
                    Ok(size) if term.hom_index >= size => problems.push(format!(
                        "{at}: hom_index {} out of range, hom({a},{}) has {size} morphisms",
                        term.hom_index, r.degree
                    )),
                    Ok(_) => {}
                    Err(e) => problems.push(format!("{at}: {e}")),
                }
            }
        }
        Diagnostics {
            problems,
            max_generator_degree,
            max_relation_degree,
            prd_bound: max_generator_degree.unwrap_or(0).max(max_relation_degree.unwrap_or(0)),
        }
    }

    /// Largest generator or relation degree.
    pub fn max_degree(&self) -> Degree {
        self.validate().prd_bound
    }

    /// `V_n` presented on the basis `⊔_i hom(a_i, n)`.
    pub fn evaluate_degree(&self, n: Degree) -> Result<Arc<DegreeModule>> {
        if let Some(v) = self.cache.read().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let cat = &self.category;
        let mut offsets = Vec::with_capacity(self.generators.len());
        let mut labels = Vec::new();
        for (i, &a) in self.generators.iter().enumerate() {
            offsets.push(labels.len());
            for f in cat.hom(a, n)?.morphisms() {
                labels.push(format!("g{i}:{}", cat.describe(f)));
            }
        }
        let mut rels = Vec::new();
        for r in &self.relations {
            if r.degree > n {
                continue;
            }
            let betas = cat.hom_size(r.degree, n)?;
            let tables = r
                .terms
                .iter()
                .map(|t| cat.composition_table(self.generators[t.gen], r.degree, n))
                .collect::<Result<Vec<_>>>()?;
            for beta in 0..betas {
                rels.push(SparseVec::from_entries(
                    self.ring,
                    r.terms.iter().zip(&tables).map(|(t, table)| (offsets[t.gen] + table.get(beta, t.hom_index), t.coeff.clone())),
                ));
            }
        }
        let module = Arc::new(PresentedModule::new(self.ring, labels, rels)?);
        let v = Arc::new(DegreeModule { degree: n, module, offsets });
        Ok(self.cache.write().unwrap().entry(n).or_insert(v).clone())
    }

    /// Image of the ambient basis vector `x` of `V_s` under `φ ∈ hom(s,t)` given by index.
    pub fn act(&self, s: Degree, t: Degree, phi: usize, x: usize) -> Result<usize> {
        let vs = self.evaluate_degree(s)?;
        let vt = self.evaluate_degree(t)?;
        let i = generator_of(&vs.offsets, x);
        let table = self.category.composition_table(self.generators[i], s, t)?;
        Ok(vt.offsets[i] + table.get(phi, x - vs.offsets[i]))
    }

    /// The map `V_s → V_t` induced by the morphism with index `phi` in `hom(s,t)`.
    pub fn induced_map_index(&self, s: Degree, t: Degree, phi: usize) -> Result<ModuleMap> {
        let vs = self.evaluate_degree(s)?;
        let vt = self.evaluate_degree(t)?;
        let mut columns = Vec::with_capacity(vs.rank());
        for (i, &a) in self.generators.iter().enumerate() {
            let table = self.category.composition_table(a, s, t)?;
            for alpha in 0..self.category.hom_size(a, s)? {
                columns.push(SparseVec::unit(vt.offsets[i] + table.get(phi, alpha)));
            }
        }
        Ok(ModuleMap::new(vs.module.clone(), vt.module.clone(), columns)?)
    }

    pub fn induced_map(&self, phi: &Morphism) -> Result<ModuleMap> {
        let idx = self.category.index_of(phi)?;
        self.induced_map_index(phi.source, phi.target, idx)
    }
}

/// Generator slot owning ambient index `x`.
pub(crate) fn generator_of(offsets: &[usize], x: usize) -> usize {
    offsets.partition_point(|&o| o <= x) - 1
}
