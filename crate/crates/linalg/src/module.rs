//! Finitely presented modules as cokernels, and maps between them.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::int::Int;
use crate::matrix::{hermite_in_place, in_column_span, reduce_by_echelon, smith, Matrix, SmithForm};
use crate::ring::RingSpec;
use crate::sparse::{combine, dense_from_columns, eliminate, SparseVec};
use crate::LinalgError;

/// `R^{labels} / ⟨relations⟩`, relations given as columns over the ambient basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentedModule {
    ring: RingSpec,
    labels: Vec<String>,
    relations: Vec<SparseVec>,
}

impl PresentedModule {
    pub fn new(ring: RingSpec, labels: Vec<String>, relations: Vec<SparseVec>) -> Result<Self, LinalgError> {
        let rank = labels.len();
        let mut rels = Vec::with_capacity(relations.len());
        for r in relations {
            if let Some(i) = r.max_index() {
                if i >= rank {
                    return Err(LinalgError::IndexOutOfRange { index: i, rank });
                }
            }
            let r = r.remap(ring, Some);
            if !r.is_zero() {
                rels.push(r);
            }
        }
        Ok(PresentedModule { ring, labels, relations: rels })
    }

    pub fn free(ring: RingSpec, labels: Vec<String>) -> Self {
        PresentedModule { ring, labels, relations: Vec::new() }
    }

    /// Ambient basis labelled `e0, e1, …`.
    pub fn unlabeled(ring: RingSpec, rank: usize, relations: Vec<SparseVec>) -> Result<Self, LinalgError> {
        PresentedModule::new(ring, (0..rank).map(|i| format!("e{i}")).collect(), relations)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// Rank of the ambient free module.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> Matrix {
        dense_from_columns(self.ring, self.rank(), &self.relations)
    }

    pub fn with_relations(&self, extra: impl IntoIterator<Item = SparseVec>) -> Result<Self, LinalgError> {
        let mut rels = self.relations.clone();
        rels.extend(extra);
        PresentedModule::new(self.ring, self.labels.clone(), rels)
    }

    pub fn reduce(&self) -> Reduction {
        Reduction::compute(self)
    }

    /// Over ℤ: the invariant factors `d_1 | d_2 | …` that are not units, followed
    /// by one `0` per free summand. Over 𝔽_p: one `0` per dimension.
    pub fn invariant_factors(&self) -> Vec<Int> {
        block_invariants(self.reduce().residual())
    }

    pub fn is_zero_module(&self) -> bool {
        self.invariant_factors().is_empty()
    }

    /// Whether `v` is zero in the module.
    pub fn is_zero_element(&self, v: &SparseVec) -> bool {
        let red = self.reduce();
        red.is_relation(&red.project(v))
    }

    fn check_element(&self, v: &SparseVec) -> Result<(), LinalgError> {
        match v.max_index() {
            Some(i) if i >= self.rank() => Err(LinalgError::IndexOutOfRange { index: i, rank: self.rank() }),
            _ => Ok(()),
        }
    }
}

/// A presentation with every unit-coefficient relation eliminated.
///
/// The surviving ambient generators `survivors` present the same module with
/// the relations in `residual`; `project` rewrites any ambient vector in
/// terms of the survivors.
#[derive(Debug)]
pub struct Reduction {
    ring: RingSpec,
    survivors: Vec<usize>,
    images: Vec<SparseVec>,
    residual: Matrix,
    smith: OnceLock<SmithForm>,
}

impl Reduction {
    fn compute(m: &PresentedModule) -> Self {
        let ring = m.ring;
        let n = m.rank();
        let e = eliminate(ring, n, m.relations.clone(), false);
        let (residual, survivors) = e.residual_block(ring);
        let mut images = vec![SparseVec::new(); n];
        for (k, &i) in survivors.iter().enumerate() {
            images[i] = SparseVec::unit(k);
        }
        // A pivot column only involves rows pivoted later or surviving rows.
        for p in e.pivots.iter().rev() {
            let col = &e.columns[p.col];
            let f = ring.neg(&ring.inv_unit(&p.unit));
            let rest = SparseVec::from_entries(
                ring,
                col.entries().iter().filter(|(h, _)| *h != p.row).map(|(h, c)| (*h, ring.mul(&f, c))),
            );
            images[p.row] = combine(ring, &rest, |h| &images[h]);
        }
        Reduction { ring, survivors, images, residual, smith: OnceLock::new() }
    }

    pub fn generators(&self) -> usize {
        self.survivors.len()
    }

    /// Old ambient index of each surviving generator.
    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }

    pub fn residual(&self) -> &Matrix {
        &self.residual
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        combine(self.ring, v, |i| &self.images[i])
    }

    /// Image of the ambient basis vector `i`.
    pub fn image_of_basis(&self, i: usize) -> &SparseVec {
        &self.images[i]
    }

    /// Inclusion of the survivors back into the original ambient basis.
    pub fn lift(&self, x: &SparseVec) -> SparseVec {
        x.remap(self.ring, |k| Some(self.survivors[k]))
    }

    fn smith(&self) -> &SmithForm {
        self.smith.get_or_init(|| smith(&self.residual, true, false))
    }

    /// Whether a vector in reduced coordinates lies in the residual relation span.
    pub fn is_relation(&self, x: &SparseVec) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.residual.cols() == 0 {
            return false;
        }
        in_column_span(self.smith(), &x.to_dense(self.generators()))
    }

    fn residual_columns(&self) -> Vec<SparseVec> {
        (0..self.residual.cols())
            .map(|j| SparseVec::from_dense(self.ring, &self.residual.column(j)))
            .collect()
    }
}

fn block_invariants(m: &Matrix) -> Vec<Int> {
    let ring = m.ring();
    let s = smith(m, false, false);
    let mut out: Vec<Int> = s.diagonal().into_iter().filter(|d| !ring.is_unit(d)).collect();
    out.extend(std::iter::repeat_n(Int::ZERO, m.rows() - s.rank));
    out
}

/// Kernel of the column block `cols` (on `nrows` rows) restricted to the first
/// `keep` coordinates, plus the invariant factors of `R^{nrows} / ⟨cols⟩`.
fn kernel_and_cokernel(ring: RingSpec, nrows: usize, cols: Vec<SparseVec>, keep: usize) -> (Vec<SparseVec>, Vec<Int>) {
    let e = eliminate(ring, nrows, cols, true);
    let mut kernel: Vec<SparseVec> =
        e.zero_cols.iter().map(|&j| e.tracks[j].truncate(keep)).filter(|v| !v.is_zero()).collect();
    let (block, _) = e.residual_block(ring);
    if !e.residual.is_empty() {
        let s = smith(&block, false, true);
        for c in s.rank..block.cols() {
            let mut acc = SparseVec::new();
            for (t, y) in s.v.column(c).iter().enumerate() {
                if !y.is_zero() {
                    acc = acc.axpy(ring, y, &e.tracks[e.residual[t]]);
                }
            }
            let v = acc.truncate(keep);
            if !v.is_zero() {
                kernel.push(v);
            }
        }
    }
    (kernel, block_invariants(&block))
}

/// Homomorphism between presented modules given on ambient bases:
/// `columns[j]` is the image of the domain basis vector `j`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    domain: Arc<PresentedModule>,
    codomain: Arc<PresentedModule>,
    columns: Vec<SparseVec>,
}

/// Verdict of an isomorphism test; failures carry the invariant factors of the
/// kernel and the cokernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsoVerdict {
    Iso,
    NotIso { kernel: Vec<Int>, cokernel: Vec<Int> },
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso)
    }
}

struct Analysis {
    dom: Reduction,
    cod: Reduction,
    // Images of the domain survivors, in reduced codomain coordinates.
    reduced: Vec<SparseVec>,
}

impl ModuleMap {
    pub fn new(
        domain: Arc<PresentedModule>,
        codomain: Arc<PresentedModule>,
        columns: Vec<SparseVec>,
    ) -> Result<Self, LinalgError> {
        if domain.ring != codomain.ring {
            return Err(LinalgError::RingMismatch);
        }
        if columns.len() != domain.rank() {
            return Err(LinalgError::DimensionMismatch { expected: domain.rank(), found: columns.len() });
        }
        let ring = domain.ring;
        let mut cols = Vec::with_capacity(columns.len());
        for c in columns {
            codomain.check_element(&c)?;
            cols.push(c.remap(ring, Some));
        }
        Ok(ModuleMap { domain, codomain, columns: cols })
    }

    pub fn identity(m: Arc<PresentedModule>) -> Self {
        let columns = (0..m.rank()).map(SparseVec::unit).collect();
        ModuleMap { domain: m.clone(), codomain: m, columns }
    }

    pub fn zero(domain: Arc<PresentedModule>, codomain: Arc<PresentedModule>) -> Result<Self, LinalgError> {
        let columns = vec![SparseVec::new(); domain.rank()];
        ModuleMap::new(domain, codomain, columns)
    }

    pub fn domain(&self) -> &Arc<PresentedModule> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<PresentedModule> {
        &self.codomain
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn ring(&self) -> RingSpec {
        self.domain.ring
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        combine(self.ring(), v, |i| &self.columns[i])
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap, LinalgError> {
        if first.codomain.rank() != self.domain.rank() || first.ring() != self.ring() {
            return Err(LinalgError::DimensionMismatch { expected: self.domain.rank(), found: first.codomain.rank() });
        }
        let columns = first.columns.iter().map(|c| self.apply(c)).collect();
        Ok(ModuleMap { domain: first.domain.clone(), codomain: self.codomain.clone(), columns })
    }

    /// Dense matrix on the ambient bases (codomain rank × domain rank).
    pub fn matrix(&self) -> Matrix {
        dense_from_columns(self.ring(), self.codomain.rank(), &self.columns)
    }

    /// Checks that domain relations land in the codomain relation span.
    pub fn check_well_defined(&self) -> Result<(), LinalgError> {
        self.analyze().map(|_| ())
    }

    fn analyze(&self) -> Result<Analysis, LinalgError> {
        let dom = self.domain.reduce();
        let cod = self.codomain.reduce();
        let ring = self.ring();
        let projected: Vec<SparseVec> = self.columns.iter().map(|c| cod.project(c)).collect();
        for (idx, r) in self.domain.relations.iter().enumerate() {
            let w = combine(ring, r, |i| &projected[i]);
            if !cod.is_relation(&w) {
                return Err(LinalgError::IllDefined { relation: idx });
            }
        }
        let reduced = dom.survivors.iter().map(|&g| projected[g].clone()).collect();
        Ok(Analysis { dom, cod, reduced })
    }

    /// Generators of the kernel, as elements of the domain ambient module.
    pub fn kernel_generators(&self) -> Result<Vec<SparseVec>, LinalgError> {
        let a = self.analyze()?;
        let (kernel, _) = reduced_kernel(&a, self.ring());
        Ok(kernel.iter().map(|k| a.dom.lift(k)).collect())
    }

    pub fn cokernel(&self) -> Result<PresentedModule, LinalgError> {
        self.check_well_defined()?;
        self.codomain.with_relations(self.columns.iter().cloned())
    }

    pub fn is_isomorphism(&self) -> Result<IsoVerdict, LinalgError> {
        let ring = self.ring();
        let a = self.analyze()?;
        let (kernel, cokernel) = reduced_kernel(&a, ring);
        let injective = kernel.iter().all(|k| a.dom.is_relation(k));
        if injective && cokernel.is_empty() {
            return Ok(IsoVerdict::Iso);
        }
        // Kernel module = ⟨kernel⟩ / ⟨domain relations⟩, presented on the kernel generators.
        let t = kernel.len();
        let mut cols = kernel;
        cols.extend(a.dom.residual_columns());
        let (syzygies, _) = kernel_and_cokernel(ring, a.dom.generators(), cols, t);
        let kernel_module = PresentedModule::unlabeled(ring, t, syzygies)?;
        Ok(IsoVerdict::NotIso { kernel: kernel_module.invariant_factors(), cokernel })
    }
}

fn reduced_kernel(a: &Analysis, ring: RingSpec) -> (Vec<SparseVec>, Vec<Int>) {
    let mut cols = a.reduced.clone();
    cols.extend(a.cod.residual_columns());
    kernel_and_cokernel(ring, a.cod.generators(), cols, a.dom.generators())
}

/// Whether `⟨a⟩ = ⟨b⟩` as submodules of `ambient`.
pub fn submodule_equal(a: &[SparseVec], b: &[SparseVec], ambient: &PresentedModule) -> Result<bool, LinalgError> {
    for v in a.iter().chain(b) {
        ambient.check_element(v).map_err(|_| LinalgError::DimensionMismatch {
            expected: ambient.rank(),
            found: v.max_index().unwrap_or(0) + 1,
        })?;
    }
    Ok(contained_in(a, b, ambient)? && contained_in(b, a, ambient)?)
}

/// `⟨a⟩ ⊆ ⟨b⟩` in `ambient`: every element of `a` vanishes in `ambient / ⟨b⟩`.
/// Unit relations are eliminated first; membership in what remains is decided
/// by an echelon form (HNF over ℤ, RREF over 𝔽_p) of the residual relations.
fn contained_in(a: &[SparseVec], b: &[SparseVec], ambient: &PresentedModule) -> Result<bool, LinalgError> {
    let q = ambient.with_relations(b.iter().cloned())?;
    let red = q.reduce();
    let mut echelon = red.residual().transpose();
    hermite_in_place(&mut echelon);
    for v in a {
        let p = red.project(v);
        if p.is_zero() {
            continue;
        }
        let mut d = p.to_dense(red.generators());
        reduce_by_echelon(&echelon, &mut d);
        if d.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: RingSpec = RingSpec::Integers;

    fn sv(items: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(Z, items.iter().map(|(i, x)| (*i, Int::from(*x))))
    }

    fn ints(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    fn module(rank: usize, rels: &[&[(usize, i64)]]) -> Arc<PresentedModule> {
        Arc::new(PresentedModule::unlabeled(Z, rank, rels.iter().map(|r| sv(r)).collect()).unwrap())
    }

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(module(1, &[]).invariant_factors(), ints(&[0]));
        assert_eq!(module(1, &[&[(0, 2)]]).invariant_factors(), ints(&[2]));
        assert_eq!(module(2, &[&[(0, 2)], &[(1, 2)]]).invariant_factors(), ints(&[2, 2]));
        // ℤ/2 ⊕ ℤ/3 ≅ ℤ/6
        assert_eq!(module(2, &[&[(0, 2)], &[(1, 3)]]).invariant_factors(), ints(&[6]));
        let f2 = PresentedModule::unlabeled(RingSpec::PrimeField(2), 3, vec![sv(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(f2.invariant_factors(), ints(&[0, 0]));
    }

    #[test]
    fn reduction_projects_consistently() {
        // e0 = 2 e1, e2 = e1 - e0: module is ℤ (generated by e1).
        let m = module(3, &[&[(0, 1), (1, -2)], &[(2, 1), (1, -1), (0, 1)]]);
        let red = m.reduce();
        assert_eq!(red.generators(), 1);
        assert_eq!(red.project(&SparseVec::unit(0)), sv(&[(0, 2)]));
        assert_eq!(red.project(&SparseVec::unit(2)), sv(&[(0, -1)]));
        assert_eq!(m.invariant_factors(), ints(&[0]));
    }

    #[test]
    fn kernel_examples() {
        let p = module(2, &[]);
        let zero = ModuleMap::zero(p.clone(), module(1, &[])).unwrap();
        let k = zero.kernel_generators().unwrap();
        assert!(submodule_equal(&k, &[SparseVec::unit(0), SparseVec::unit(1)], &p).unwrap());

        let id = ModuleMap::identity(p.clone());
        assert!(id.kernel_generators().unwrap().iter().all(|v| p.is_zero_element(v)));

        // ℤ --·2--> ℤ/4: kernel 2ℤ.
        let z = module(1, &[]);
        let m = ModuleMap::new(z.clone(), module(1, &[&[(0, 4)]]), vec![sv(&[(0, 2)])]).unwrap();
        let k = m.kernel_generators().unwrap();
        assert!(submodule_equal(&k, &[sv(&[(0, 2)])], &z).unwrap());
    }

    #[test]
    fn cokernel_examples() {
        let z2 = module(2, &[]);
        let f = ModuleMap::new(z2.clone(), z2.clone(), vec![sv(&[(0, 2)]), sv(&[(1, 3)])]).unwrap();
        assert_eq!(f.cokernel().unwrap().invariant_factors(), ints(&[6]));
        let zero = ModuleMap::zero(z2.clone(), z2.clone()).unwrap();
        assert_eq!(zero.cokernel().unwrap().invariant_factors(), ints(&[0, 0]));
        assert!(ModuleMap::identity(z2).cokernel().unwrap().is_zero_module());
    }

    #[test]
    fn isomorphism_examples() {
        let z = module(1, &[]);
        assert!(ModuleMap::identity(z.clone()).is_isomorphism().unwrap().is_iso());
        let two = ModuleMap::new(z.clone(), z.clone(), vec![sv(&[(0, 2)])]).unwrap();
        assert_eq!(
            two.is_isomorphism().unwrap(),
            IsoVerdict::NotIso { kernel: vec![], cokernel: ints(&[2]) }
        );
        let z6 = module(1, &[&[(0, 6)]]);
        let five = ModuleMap::new(z6.clone(), z6.clone(), vec![sv(&[(0, 5)])]).unwrap();
        assert!(five.is_isomorphism().unwrap().is_iso());
        // ℤ/4 --·2--> ℤ/4 has kernel ℤ/2 and cokernel ℤ/2.
        let z4 = module(1, &[&[(0, 4)]]);
        let f = ModuleMap::new(z4.clone(), z4.clone(), vec![sv(&[(0, 2)])]).unwrap();
        assert_eq!(
            f.is_isomorphism().unwrap(),
            IsoVerdict::NotIso { kernel: ints(&[2]), cokernel: ints(&[2]) }
        );
    }

    #[test]
    fn ill_defined_maps_are_rejected() {
        // ℤ/2 -> ℤ sending the generator to 1 is not a homomorphism.
        let f = ModuleMap::new(module(1, &[&[(0, 2)]]), module(1, &[]), vec![sv(&[(0, 1)])]).unwrap();
        assert!(matches!(f.is_isomorphism(), Err(LinalgError::IllDefined { relation: 0 })));
        assert!(f.kernel_generators().is_err());
        assert!(f.cokernel().is_err());
    }

    #[test]
    fn submodule_examples() {
        let z2 = module(2, &[]);
        let a = vec![sv(&[(0, 1), (1, 1)]), sv(&[(1, 1)])];
        let b = vec![sv(&[(0, 1)]), sv(&[(1, 1)])];
        assert!(submodule_equal(&a, &a, &z2).unwrap());
        assert!(!submodule_equal(&[sv(&[(0, 2)])], &[sv(&[(0, 1)])], &z2).unwrap());
        assert!(submodule_equal(&a, &b, &z2).unwrap());
        // Equal modulo the ambient relations.
        let quot = module(2, &[&[(1, 1)]]);
        assert!(submodule_equal(&[sv(&[(0, 1), (1, 5)])], &[sv(&[(0, 1)])], &quot).unwrap());
        assert!(submodule_equal(&[sv(&[(4, 1)])], &[], &z2).is_err());
    }
}
