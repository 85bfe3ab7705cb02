//! Finitely presented categories with generators between consecutive degrees
//! and length-preserving relations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::Degree;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDef {
    pub name: String,
    pub source: Degree,
    pub target: Degree,
}

/// Words are lists of generator names composed right to left: `[g, f]` is `g ∘ f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedCategory {
    pub objects_max: Degree,
    pub generators: Vec<GeneratorDef>,
    pub relations: Vec<(Vec<String>, Vec<String>)>,
}

impl PresentedCategory {
    /// Generators β₁,β₂,β₃: 0→1, β′₁..β′₄: 1→2, β″₁,β″₂: 2→3 with
    /// β′₁β₁ = β′₃β₃, β′₂β₂ = β′₄β₃, β″₁β′₃ = β″₂β′₄.
    pub fn counterexample() -> Self {
        let gen = |name: &str, source| GeneratorDef { name: name.to_string(), source, target: source + 1 };
        let word = |w: &[&str]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        PresentedCategory {
            objects_max: 3,
            generators: vec![
                gen("b1", 0),
                gen("b2", 0),
                gen("b3", 0),
                gen("b1'", 1),
                gen("b2'", 1),
                gen("b3'", 1),
                gen("b4'", 1),
                gen("b1''", 2),
                gen("b2''", 2),
            ],
            relations: vec![
                (word(&["b1'", "b1"]), word(&["b3'", "b3"])),
                (word(&["b2'", "b2"]), word(&["b4'", "b3"])),
                (word(&["b1''", "b3'"]), word(&["b2''", "b4'"])),
            ],
        }
    }

    /// The plactic monoid on `alphabet` as a presented category: one generator
    /// `x@k: k → k+1` per letter and degree, Knuth relations in every position.
    pub fn plactic(alphabet: &[u8], objects_max: Degree) -> Self {
        let name = |x: u8, k: Degree| format!("{x}@{k}");
        let mut generators = Vec::new();
        for k in 0..objects_max {
            for &x in alphabet {
                generators.push(GeneratorDef { name: name(x, k), source: k, target: k + 1 });
            }
        }
        let mut relations = Vec::new();
        for k in 0..(objects_max.saturating_sub(2)) {
            let w = |a: u8, b: u8, c: u8| vec![name(a, k + 2), name(b, k + 1), name(c, k)];
            for &x in alphabet {
                for &y in alphabet {
                    for &z in alphabet {
                        if x <= y && y < z {
                            relations.push((w(x, z, y), w(z, x, y)));
                        }
                        if x < y && y <= z {
                            relations.push((w(y, x, z), w(y, z, x)));
                        }
                    }
                }
            }
        }
        PresentedCategory { objects_max, generators, relations }
    }
}

#[derive(Debug)]
pub(crate) struct Presentation {
    pub objects_max: Degree,
    pub names: Vec<String>,
    pub sources: Vec<Degree>,
    by_source: Vec<Vec<u8>>,
    relations: Vec<(Vec<u8>, Vec<u8>)>,
}

/// Congruence classes of the words `m → n`: lexicographically sorted least
/// representatives, and the class index of every composable word.
pub(crate) struct Classes {
    pub reps: Vec<Vec<u8>>,
    pub aliases: HashMap<Vec<u8>, usize>,
}

impl Presentation {
    pub fn compile(def: &PresentedCategory) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if def.generators.len() > u8::MAX as usize {
            return bad(format!("at most {} generators are supported", u8::MAX));
        }
        let mut lookup = HashMap::new();
        let mut by_source = vec![Vec::new(); def.objects_max];
        for (i, g) in def.generators.iter().enumerate() {
            if g.target != g.source + 1 {
                return bad(format!("generator `{}` must go from k to k+1", g.name));
            }
            if g.target > def.objects_max {
                return bad(format!("generator `{}` exceeds objects_max {}", g.name, def.objects_max));
            }
            if lookup.insert(g.name.clone(), i as u8).is_some() {
                return bad(format!("duplicate generator name `{}`", g.name));
            }
            by_source[g.source].push(i as u8);
        }
        let p = Presentation {
            objects_max: def.objects_max,
            names: def.generators.iter().map(|g| g.name.clone()).collect(),
            sources: def.generators.iter().map(|g| g.source).collect(),
            by_source,
            relations: Vec::new(),
        };
        let mut relations = Vec::new();
        for (k, (lhs, rhs)) in def.relations.iter().enumerate() {
            let resolve = |w: &Vec<String>| -> Result<Vec<u8>> {
                w.iter()
                    .map(|s| {
                        lookup.get(s).copied().ok_or_else(|| Error::InvalidParams(format!("relation {k}: unknown generator `{s}`")))
                    })
                    .collect()
            };
            let (l, r) = (resolve(lhs)?, resolve(rhs)?);
            if l.is_empty() || l.len() != r.len() {
                return bad(format!("relation {k} must relate nonempty words of equal length"));
            }
            let el = p.endpoints(&l).map_err(|e| Error::InvalidParams(format!("relation {k}: {e}")))?;
            let er = p.endpoints(&r).map_err(|e| Error::InvalidParams(format!("relation {k}: {e}")))?;
            if el != er {
                return bad(format!("relation {k} relates words with different endpoints"));
            }
            relations.push((l, r));
        }
        Ok(Presentation { relations, ..p })
    }

    /// `(source, target)` of a nonempty composable word.
    pub fn endpoints(&self, w: &[u8]) -> Result<(Degree, Degree)> {
        let (Some(&first), Some(&last)) = (w.first(), w.last()) else {
            return Err(Error::NotComposable("empty word has no endpoints".into()));
        };
        if let Some(&g) = w.iter().find(|&&g| g as usize >= self.names.len()) {
            return Err(Error::NotComposable(format!("unknown generator index {g}")));
        }
        for pair in w.windows(2) {
            if self.sources[pair[0] as usize] != self.sources[pair[1] as usize] + 1 {
                return Err(Error::NotComposable(format!(
                    "`{}` cannot follow `{}`",
                    self.names[pair[0] as usize], self.names[pair[1] as usize]
                )));
            }
        }
        Ok((self.sources[last as usize], self.sources[first as usize] + 1))
    }

    pub fn render(&self, w: &[u8]) -> String {
        if w.is_empty() {
            return "id".into();
        }
        w.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("·")
    }

    pub fn classes(&self, m: Degree, n: Degree, cap: usize) -> Result<Classes> {
        if n > self.objects_max {
            return Err(Error::BeyondObjects { n, objects_max: self.objects_max });
        }
        // Build words from the right (first applied) end.
        let mut rev: Vec<Vec<u8>> = vec![Vec::new()];
        for k in m..n {
            let mut next = Vec::new();
            for w in &rev {
                for &g in &self.by_source[k] {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            if next.len() > cap {
                return Err(Error::ResourceLimit { m, n, cap });
            }
            rev = next;
        }
        let mut words: Vec<Vec<u8>> = rev.into_iter().map(|mut w| {
            w.reverse();
            w
        }).collect();
        words.sort();
        let index: HashMap<Vec<u8>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut parent: Vec<usize> = (0..words.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, w) in words.iter().enumerate() {
            for (l, r) in &self.relations {
                if l.len() > w.len() {
                    continue;
                }
                for p in 0..=(w.len() - l.len()) {
                    if &w[p..p + l.len()] == l.as_slice() {
                        let mut v = w.clone();
                        v[p..p + l.len()].copy_from_slice(r);
                        let j = index[&v];
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        // Keep the smaller index as root so roots are least words.
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut class_of_root = HashMap::new();
        let mut reps = Vec::new();
        let mut aliases = HashMap::with_capacity(words.len());
        for i in 0..words.len() {
            let root = find(&mut parent, i);
            let c = *class_of_root.entry(root).or_insert_with(|| {
                reps.push(words[root].clone());
                reps.len() - 1
            });
            aliases.insert(words[i].clone(), c);
        }
        Ok(Classes { reps, aliases })
    }
}
