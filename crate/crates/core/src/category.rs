//! Combinatorial categories on the objects 0, 1, 2, … with finite hom-sets.
//!
//! Hom-sets are enumerated once, in lexicographic order of the canonical
//! payload, and memoized together with composition tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plactic::{rsk_normal_form, words};
use crate::presented::{Presentation, PresentedCategory};

pub type Degree = usize;

pub const DEFAULT_HOM_CAP: usize = 100_000;

/// Canonical encoding of a morphism. All indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// `images[i] = f(i)`.
    Injection { images: Vec<u8> },
    /// Injection plus a color in `[a]` for each point outside the image, listed
    /// in increasing order of the point.
    Colored { images: Vec<u8>, colors: Vec<u8> },
    /// An `FS^op` morphism `m → n` is a surjection `[n] → [m]`.
    Surjection { values: Vec<u8> },
    /// `n × m` matrix over 𝔽_q, column-major.
    Matrix { entries: Vec<u8> },
    /// Word in normal form; `g ∘ f` has the letters of `g` first.
    Word { letters: Vec<u8> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Morphism {
    pub source: Degree,
    pub target: Degree,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CategorySpec {
    Fi,
    FiA { a: u8 },
    OiA { a: u8 },
    FsOp,
    Vi { q: u8 },
    Plactic { alphabet: Vec<u8> },
    Counterexample,
    Presented(PresentedCategory),
}

/// Parameters for [`builtin_category`]; only those relevant to the family are read.
#[derive(Clone, Debug, Default)]
pub struct BuiltinParams {
    pub a: Option<u8>,
    pub q: Option<u8>,
    pub alphabet: Option<Vec<u8>>,
}

impl CategorySpec {
    pub fn builtin(id: &str, params: &BuiltinParams) -> Result<Self> {
        let need = |v: Option<u8>, what: &str| v.ok_or_else(|| Error::InvalidParams(format!("family `{id}` needs {what}")));
        Ok(match id {
            "fi" => CategorySpec::Fi,
            "fi_a" => CategorySpec::FiA { a: need(params.a, "a")? },
            "oi_a" => CategorySpec::OiA { a: need(params.a, "a")? },
            "fs_op" => CategorySpec::FsOp,
            "vi" => CategorySpec::Vi { q: need(params.q, "q")? },
            "plactic" => CategorySpec::Plactic {
                alphabet: params.alphabet.clone().ok_or_else(|| Error::InvalidParams("plactic needs an alphabet".into()))?,
            },
            "counterexample" => CategorySpec::Counterexample,
            other => return Err(Error::UnknownFamily(other.to_string())),
        })
    }

    /// Accepts a tagged family object or a bare presented-category document.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        if let Some(s) = value.as_str() {
            return CategorySpec::builtin(s, &BuiltinParams::default());
        }
        if value.get("family").is_none() && value.get("generators").is_some() {
            let p: PresentedCategory = serde_json::from_value(value.clone()).map_err(|e| Error::Input(e.to_string()))?;
            return Ok(CategorySpec::Presented(p));
        }
        if let Some(f) = value.get("family").and_then(|f| f.as_str()) {
            const KNOWN: [&str; 8] = ["fi", "fi_a", "oi_a", "fs_op", "vi", "plactic", "counterexample", "presented"];
            if !KNOWN.contains(&f) {
                return Err(Error::UnknownFamily(f.to_string()));
            }
        }
        serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("category: {e}")))
    }

    pub fn id(&self) -> String {
        match self {
            CategorySpec::Fi => "fi".into(),
            CategorySpec::FiA { a } => format!("fi_a(a={a})"),
            CategorySpec::OiA { a } => format!("oi_a(a={a})"),
            CategorySpec::FsOp => "fs_op".into(),
            CategorySpec::Vi { q } => format!("vi(q={q})"),
            CategorySpec::Plactic { alphabet } => format!("plactic({alphabet:?})"),
            CategorySpec::Counterexample => "counterexample".into(),
            CategorySpec::Presented(p) => format!("presented({} generators)", p.generators.len()),
        }
    }
}

/// Finite field with at most four elements; 𝔽₄ = {0, 1, a, a+1} encoded as 0..4.
#[derive(Clone, Debug)]
struct SmallField {
    q: u8,
}

impl SmallField {
    fn add(&self, x: u8, y: u8) -> u8 {
        if self.q == 4 {
            x ^ y
        } else {
            (x + y) % self.q
        }
    }

    fn mul(&self, x: u8, y: u8) -> u8 {
        if self.q == 4 {
            const T: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
            T[x as usize][y as usize]
        } else {
            (x * y) % self.q
        }
    }

    /// Vectors of length `n` in lexicographic order.
    fn vectors(&self, n: usize) -> Vec<Vec<u8>> {
        words(&(0..self.q).collect::<Vec<_>>(), n)
    }
}

#[derive(Debug)]
enum Kind {
    Fi,
    FiA(u8),
    OiA(u8),
    FsOp,
    Vi(SmallField),
    Plactic(Vec<u8>),
    Presented(Presentation),
}

/// The morphisms `m → n` in canonical order.
#[derive(Debug)]
pub struct HomSet {
    pub source: Degree,
    pub target: Degree,
    morphisms: Vec<Morphism>,
    index: HashMap<Payload, usize>,
    // Presented categories: class index of every composable word.
    aliases: HashMap<Vec<u8>, usize>,
}

impl HomSet {
    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn get(&self, i: usize) -> &Morphism {
        &self.morphisms[i]
    }

    pub fn position(&self, f: &Morphism) -> Option<usize> {
        if f.source != self.source || f.target != self.target {
            return None;
        }
        self.index.get(&f.payload).copied()
    }
}

/// `table[g · |hom(m,n)| + f]` is the index of `g ∘ f` in `hom(m,p)`.
#[derive(Debug)]
pub struct CompositionTable {
    inner: usize,
    data: Vec<u32>,
}

impl CompositionTable {
    #[inline]
    pub fn get(&self, g: usize, f: usize) -> usize {
        self.data[g * self.inner + f] as usize
    }
}

#[derive(Debug)]
pub struct Category {
    spec: CategorySpec,
    kind: Kind,
    cap: usize,
    homs: RwLock<HashMap<(Degree, Degree), Arc<HomSet>>>,
    tables: RwLock<HashMap<(Degree, Degree, Degree), Arc<CompositionTable>>>,
}

pub fn builtin_category(id: &str, params: &BuiltinParams) -> Result<Category> {
    Category::new(CategorySpec::builtin(id, params)?)
}

impl Category {
    pub fn new(spec: CategorySpec) -> Result<Self> {
        Category::with_cap(spec, DEFAULT_HOM_CAP)
    }

    pub fn with_cap(spec: CategorySpec, cap: usize) -> Result<Self> {
        let kind = match &spec {
            CategorySpec::Fi => Kind::Fi,
            CategorySpec::FiA { a } | CategorySpec::OiA { a } => {
                if *a == 0 {
                    return Err(Error::InvalidParams("a must be at least 1".into()));
                }
                if matches!(spec, CategorySpec::FiA { .. }) {
                    Kind::FiA(*a)
                } else {
                    Kind::OiA(*a)
                }
            }
            CategorySpec::FsOp => Kind::FsOp,
            CategorySpec::Vi { q } => {
                if !matches!(q, 2..=4) {
                    return Err(Error::InvalidParams(format!("VI supports q in {{2, 3, 4}}, got {q}")));
                }
                Kind::Vi(SmallField { q: *q })
            }
            CategorySpec::Plactic { alphabet } => {
                let mut sorted = alphabet.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.is_empty() || sorted.len() != alphabet.len() {
                    return Err(Error::InvalidParams("plactic alphabet must be nonempty without repeats".into()));
                }
                Kind::Plactic(sorted)
            }
            CategorySpec::Counterexample => Kind::Presented(Presentation::compile(&PresentedCategory::counterexample())?),
            CategorySpec::Presented(p) => Kind::Presented(Presentation::compile(p)?),
        };
        Ok(Category { spec, kind, cap, homs: RwLock::default(), tables: RwLock::default() })
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    pub fn id(&self) -> String {
        self.spec.id()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_fi(&self) -> bool {
        matches!(self.kind, Kind::Fi)
    }

    /// Largest object of a presented category.
    pub fn objects_max(&self) -> Option<Degree> {
        match &self.kind {
            Kind::Presented(p) => Some(p.objects_max),
            _ => None,
        }
    }

    pub fn hom(&self, m: Degree, n: Degree) -> Result<Arc<HomSet>> {
        if let Some(h) = self.homs.read().unwrap().get(&(m, n)) {
            return Ok(h.clone());
        }
        let h = Arc::new(self.build_hom(m, n)?);
        Ok(self.homs.write().unwrap().entry((m, n)).or_insert(h).clone())
    }

    pub fn hom_size(&self, m: Degree, n: Degree) -> Result<usize> {
        Ok(self.hom(m, n)?.len())
    }

    pub fn identity(&self, n: Degree) -> Morphism {
        let id: Vec<u8> = (0..n as u8).collect();
        let payload = match &self.kind {
            Kind::Fi => Payload::Injection { images: id },
            Kind::FiA(_) | Kind::OiA(_) => Payload::Colored { images: id, colors: vec![] },
            Kind::FsOp => Payload::Surjection { values: id },
            Kind::Vi(_) => {
                let mut entries = vec![0; n * n];
                for i in 0..n {
                    entries[i * n + i] = 1;
                }
                Payload::Matrix { entries }
            }
            Kind::Plactic(_) | Kind::Presented(_) => Payload::Word { letters: vec![] },
        };
        Morphism { source: n, target: n, payload }
    }

    pub fn identity_index(&self, n: Degree) -> Result<usize> {
        let id = self.identity(n);
        self.index_of(&id)
    }

    pub fn index_of(&self, f: &Morphism) -> Result<usize> {
        self.hom(f.source, f.target)?
            .position(f)
            .ok_or_else(|| Error::ForeignMorphism(self.describe(f)))
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if f.target != g.source {
            return Err(Error::EndpointMismatch { inner_target: f.target, outer_source: g.source });
        }
        let (m, n, p) = (f.source, f.target, g.target);
        let payload = match (&self.kind, &g.payload, &f.payload) {
            (Kind::Fi, Payload::Injection { images: gi }, Payload::Injection { images: fi }) => {
                Payload::Injection { images: fi.iter().map(|&x| gi[x as usize]).collect() }
            }
            (
                Kind::FiA(_) | Kind::OiA(_),
                Payload::Colored { images: gi, colors: gc },
                Payload::Colored { images: fi, colors: fc },
            ) => {
                let images: Vec<u8> = fi.iter().map(|&x| gi[x as usize]).collect();
                // Color of each point of [n] outside Im f, and of [p] outside Im g.
                let mut inner = vec![None; n];
                complement(fi, n).zip(fc).for_each(|(j, &c)| inner[j] = Some(c));
                let mut outer = vec![None; p];
                complement(gi, p).zip(gc).for_each(|(i, &c)| outer[i] = Some(c));
                let mut preimage = vec![None; p];
                for (j, &i) in gi.iter().enumerate() {
                    preimage[i as usize] = Some(j);
                }
                let colors = complement(&images, p)
                    .map(|i| match preimage[i] {
                        Some(j) => inner[j].expect("point outside Im f has a color"),
                        None => outer[i].expect("point outside Im g has a color"),
                    })
                    .collect();
                Payload::Colored { images, colors }
            }
            (Kind::FsOp, Payload::Surjection { values: gv }, Payload::Surjection { values: fv }) => {
                Payload::Surjection { values: gv.iter().map(|&i| fv[i as usize]).collect() }
            }
            (Kind::Vi(field), Payload::Matrix { entries: ge }, Payload::Matrix { entries: fe }) => {
                let mut entries = vec![0u8; p * m];
                for j in 0..m {
                    for k in 0..n {
                        let x = fe[j * n + k];
                        if x == 0 {
                            continue;
                        }
                        for r in 0..p {
                            let v = field.mul(ge[k * p + r], x);
                            entries[j * p + r] = field.add(entries[j * p + r], v);
                        }
                    }
                }
                Payload::Matrix { entries }
            }
            (Kind::Plactic(_), Payload::Word { letters: gl }, Payload::Word { letters: fl }) => {
                Payload::Word { letters: rsk_normal_form(&[gl.as_slice(), fl.as_slice()].concat()) }
            }
            (Kind::Presented(_), Payload::Word { letters: gl }, Payload::Word { letters: fl }) => {
                let w = [gl.as_slice(), fl.as_slice()].concat();
                if w.is_empty() {
                    return Ok(self.identity(m));
                }
                let h = self.hom(m, p)?;
                let c = *h.aliases.get(&w).ok_or_else(|| Error::ForeignMorphism(self.describe(g)))?;
                return Ok(h.morphisms[c].clone());
            }
            _ => return Err(Error::ForeignMorphism(format!("{} or {}", self.describe(g), self.describe(f)))),
        };
        Ok(Morphism { source: m, target: p, payload })
    }

    /// Composition table for `hom(n,p) × hom(m,n) → hom(m,p)`.
    pub fn composition_table(&self, m: Degree, n: Degree, p: Degree) -> Result<Arc<CompositionTable>> {
        if let Some(t) = self.tables.read().unwrap().get(&(m, n, p)) {
            return Ok(t.clone());
        }
        let (hf, hg, hc) = (self.hom(m, n)?, self.hom(n, p)?, self.hom(m, p)?);
        let mut data = Vec::with_capacity(hf.len() * hg.len());
        for g in hg.morphisms() {
            for f in hf.morphisms() {
                let c = self.compose(g, f)?;
                let i = hc.position(&c).ok_or_else(|| Error::ForeignMorphism(self.describe(&c)))?;
                data.push(i as u32);
            }
        }
        let t = Arc::new(CompositionTable { inner: hf.len(), data });
        Ok(self.tables.write().unwrap().entry((m, n, p)).or_insert(t).clone())
    }

    /// Normal form of a word of generator indices (presented categories) or
    /// letters (plactic).
    pub fn normalize_word(&self, w: &[u8]) -> Result<Vec<u8>> {
        match &self.kind {
            Kind::Plactic(alphabet) => crate::plactic::rsk_checked(alphabet, w),
            Kind::Presented(p) => {
                if w.is_empty() {
                    return Ok(Vec::new());
                }
                let (m, n) = p.endpoints(w)?;
                let h = self.hom(m, n)?;
                Ok(match &h.morphisms[h.aliases[w]].payload {
                    Payload::Word { letters } => letters.clone(),
                    _ => unreachable!(),
                })
            }
            _ => Err(Error::ForeignMorphism("only word categories have word normal forms".into())),
        }
    }

    /// Generator indices of a presented category by name.
    pub fn generator_index(&self, name: &str) -> Option<u8> {
        match &self.kind {
            Kind::Presented(p) => p.names.iter().position(|s| s == name).map(|i| i as u8),
            _ => None,
        }
    }

    /// The morphism named by a word of generator names (presented categories).
    pub fn word_morphism(&self, names: &[&str]) -> Result<Morphism> {
        let Kind::Presented(p) = &self.kind else {
            return Err(Error::ForeignMorphism("not a presented category".into()));
        };
        let w: Vec<u8> = names
            .iter()
            .map(|s| self.generator_index(s).ok_or_else(|| Error::NotComposable(format!("unknown generator `{s}`"))))
            .collect::<Result<_>>()?;
        let (m, n) = p.endpoints(&w)?;
        let letters = self.normalize_word(&w)?;
        Ok(Morphism { source: m, target: n, payload: Payload::Word { letters } })
    }

    pub fn describe(&self, f: &Morphism) -> String {
        let list = |v: &[u8]| format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        match (&self.kind, &f.payload) {
            (_, Payload::Injection { images }) => list(images),
            (_, Payload::Colored { images, colors }) => format!("{}|c={}", list(images), list(colors)),
            (_, Payload::Surjection { values }) => format!("s{}", list(values)),
            (_, Payload::Matrix { entries }) => {
                let mut s = String::new();
                for col in entries.chunks(f.target.max(1)).take(f.source) {
                    let _ = write!(s, "({})", col.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                }
                if s.is_empty() {
                    s.push_str("()");
                }
                s
            }
            (Kind::Presented(p), Payload::Word { letters }) => p.render(letters),
            (_, Payload::Word { letters }) if letters.is_empty() => "id".into(),
            (_, Payload::Word { letters }) => {
                if letters.iter().all(|&x| x < 10) {
                    letters.iter().map(|x| x.to_string()).collect()
                } else {
                    list(letters)
                }
            }
        }
    }

    fn build_hom(&self, m: Degree, n: Degree) -> Result<HomSet> {
        if n > u8::MAX as usize {
            return Err(Error::ResourceLimit { m, n, cap: self.cap });
        }
        let cap = self.cap;
        let over = || Error::ResourceLimit { m, n, cap };
        let mut aliases = HashMap::new();
        let payloads: Vec<Payload> = if m > n {
            if let Kind::Presented(p) = &self.kind {
                if m > p.objects_max {
                    return Err(Error::BeyondObjects { n: m, objects_max: p.objects_max });
                }
            }
            Vec::new()
        } else {
            match &self.kind {
                Kind::Fi => injections(m, n, false, cap).ok_or_else(over)?.into_iter().map(|images| Payload::Injection { images }).collect(),
                Kind::FiA(a) | Kind::OiA(a) => {
                    let increasing = matches!(self.kind, Kind::OiA(_));
                    let colorings = words(&(0..*a).collect::<Vec<_>>(), n - m);
                    let maps = injections(m, n, increasing, cap).ok_or_else(over)?;
                    if maps.len().saturating_mul(colorings.len()) > cap {
                        return Err(over());
                    }
                    maps.into_iter()
                        .flat_map(|images| {
                            colorings.iter().map(move |c| Payload::Colored { images: images.clone(), colors: c.clone() })
                        })
                        .collect()
                }
                Kind::FsOp => surjections(n, m, cap).ok_or_else(over)?.into_iter().map(|values| Payload::Surjection { values }).collect(),
                Kind::Vi(field) => {
                    let size = (0..m).try_fold(1usize, |acc, i| {
                        acc.checked_mul((field.q as usize).checked_pow(n as u32)? - (field.q as usize).pow(i as u32))
                    });
                    if size.is_none_or(|s| s > cap) {
                        return Err(over());
                    }
                    injective_matrices(field, m, n).into_iter().map(|entries| Payload::Matrix { entries }).collect()
                }
                Kind::Plactic(alphabet) => {
                    if (alphabet.len() as f64).powi((n - m) as i32) > cap as f64 {
                        return Err(over());
                    }
                    let mut forms: Vec<Vec<u8>> = words(alphabet, n - m).iter().map(|w| rsk_normal_form(w)).collect();
                    forms.sort();
                    forms.dedup();
                    forms.into_iter().map(|letters| Payload::Word { letters }).collect()
                }
                Kind::Presented(p) => {
                    if m == n {
                        if n > p.objects_max {
                            return Err(Error::BeyondObjects { n, objects_max: p.objects_max });
                        }
                        vec![Payload::Word { letters: vec![] }]
                    } else {
                        let classes = p.classes(m, n, cap)?;
                        aliases = classes.aliases;
                        classes.reps.into_iter().map(|letters| Payload::Word { letters }).collect()
                    }
                }
            }
        };
        if payloads.len() > cap {
            return Err(over());
        }
        let index = payloads.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let morphisms = payloads.into_iter().map(|payload| Morphism { source: m, target: n, payload }).collect();
        Ok(HomSet { source: m, target: n, morphisms, index, aliases })
    }
}

/// Points of `[n]` not in `image`, increasing.
fn complement(image: &[u8], n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..n).filter(move |&i| !image.contains(&(i as u8)))
}

fn injections(m: usize, n: usize, increasing: bool, cap: usize) -> Option<Vec<Vec<u8>>> {
    fn go(m: usize, n: usize, increasing: bool, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>, cap: usize) -> bool {
        if cur.len() == m {
            out.push(cur.clone());
            return out.len() <= cap;
        }
        let start = if increasing { cur.last().map_or(0, |&x| x as usize + 1) } else { 0 };
        for v in start..n {
            if used[v] {
                continue;
            }
            used[v] = true;
            cur.push(v as u8);
            let ok = go(m, n, increasing, cur, used, out, cap);
            cur.pop();
            used[v] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    go(m, n, increasing, &mut Vec::new(), &mut vec![false; n], &mut out, cap).then_some(out)
}

/// Surjections `[n] → [m]` as value lists, lexicographic.
fn surjections(n: usize, m: usize, cap: usize) -> Option<Vec<Vec<u8>>> {
    fn go(n: usize, m: usize, cur: &mut Vec<u8>, hits: &mut [usize], missing: usize, out: &mut Vec<Vec<u8>>, cap: usize) -> bool {
        if cur.len() == n {
            if missing == 0 {
                out.push(cur.clone());
            }
            return out.len() <= cap;
        }
        if n - cur.len() < missing {
            return true;
        }
        for v in 0..m {
            let fresh = hits[v] == 0;
            hits[v] += 1;
            cur.push(v as u8);
            let ok = go(n, m, cur, hits, missing - fresh as usize, out, cap);
            cur.pop();
            hits[v] -= 1;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    go(n, m, &mut Vec::new(), &mut vec![0; m], m, &mut out, cap).then_some(out)
}

/// Full-column-rank `n × m` matrices, column-major, lexicographic.
fn injective_matrices(field: &SmallField, m: usize, n: usize) -> Vec<Vec<u8>> {
    fn go(field: &SmallField, vectors: &[Vec<u8>], left: usize, span: &[Vec<u8>], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in vectors {
            if span.contains(v) {
                continue;
            }
            let mut next = Vec::with_capacity(span.len() * field.q as usize);
            for s in span {
                for c in 0..field.q {
                    next.push(s.iter().zip(v).map(|(&x, &y)| field.add(x, field.mul(c, y))).collect());
                }
            }
            cur.extend_from_slice(v);
            go(field, vectors, left - 1, &next, cur, out);
            cur.truncate(cur.len() - v.len());
        }
    }
    let mut out = Vec::new();
    go(field, &field.vectors(n), m, &[vec![0; n]], &mut Vec::new(), &mut out);
    out
}
