use std::sync::Arc;

use censtab_linalg::{
    hermite_normal_form, rank, rref, smith_normal_form, submodule_equal, IsoVerdict, Int, Matrix, ModuleMap,
    PresentedModule, RingSpec, SparseVec,
};
use proptest::prelude::*;

const Z: RingSpec = RingSpec::Integers;

fn i64s(m: &Matrix) -> Vec<Vec<i64>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    // Cofactor expansion; only used on tiny matrices.
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors of coker(M) via determinantal divisors: d_k = gcd of k×k minors.
fn oracle_invariants(m: &[Vec<i64>], rows: usize, cols: usize) -> Vec<i64> {
    let mut divisors = vec![1i64];
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det_i64(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let r = divisors.len() - 1;
    let mut out: Vec<i64> = (1..=r).map(|k| divisors[k] / divisors[k - 1]).filter(|&d| d != 1).collect();
    out.extend(std::iter::repeat_n(0, rows - r));
    out
}

fn columns_of(m: &Matrix) -> Vec<SparseVec> {
    (0..m.cols()).map(|j| SparseVec::from_dense(m.ring(), &m.column(j))).collect()
}

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| Matrix::from_rows(Z, &rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_contract(m in matrix_strategy(8, 9)) {
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.determinant().unwrap().is_pm_one());
        prop_assert!(s.v.determinant().unwrap().is_pm_one());
        let d = s.diagonal();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            prop_assert!(w[1].is_divisible_by(&w[0]));
        }
    }

    #[test]
    fn invariant_factors_match_determinantal_divisors(m in matrix_strategy(4, 6)) {
        let p = PresentedModule::unlabeled(Z, m.rows(), columns_of(&m)).unwrap();
        let got: Vec<i64> = p.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
        prop_assert_eq!(got, oracle_invariants(&i64s(&m), m.rows(), m.cols()));
    }

    #[test]
    fn hermite_preserves_row_lattice(m in matrix_strategy(5, 9)) {
        let h = hermite_normal_form(&m).unwrap();
        let ambient = PresentedModule::unlabeled(Z, m.cols(), vec![]).unwrap();
        let rows = |x: &Matrix| (0..x.rows()).map(|i| SparseVec::from_dense(Z, x.row(i))).collect::<Vec<_>>();
        prop_assert!(submodule_equal(&rows(&m), &rows(&h), &ambient).unwrap());
        prop_assert_eq!(hermite_normal_form(&h).unwrap(), h);
    }

    #[test]
    fn relation_order_does_not_matter(m in matrix_strategy(5, 5), seed in any::<u64>()) {
        let mut cols = columns_of(&m);
        let a = PresentedModule::unlabeled(Z, m.rows(), cols.clone()).unwrap().invariant_factors();
        let k = cols.len();
        cols.rotate_left((seed as usize) % k);
        cols.reverse();
        prop_assert_eq!(PresentedModule::unlabeled(Z, m.rows(), cols).unwrap().invariant_factors(), a);
    }

    #[test]
    fn redundant_relation_leaves_module_unchanged(m in matrix_strategy(5, 5), a in -3i64..=3, b in -3i64..=3) {
        let cols = columns_of(&m);
        let p = PresentedModule::unlabeled(Z, m.rows(), cols.clone()).unwrap();
        let extra = cols[0].scale(Z, &Int::from(a)).axpy(Z, &Int::from(b), cols.last().unwrap());
        prop_assert_eq!(p.with_relations([extra]).unwrap().invariant_factors(), p.invariant_factors());
    }

    #[test]
    fn iso_verdict_agrees_with_kernel_and_cokernel(
        dom in matrix_strategy(3, 4),
        entries in prop::collection::vec(-3i64..=3, 9),
    ) {
        // Endomorphism of a free module of rank r, then of its quotient when well defined.
        let r = dom.rows();
        let free = Arc::new(PresentedModule::unlabeled(Z, r, vec![]).unwrap());
        let cols: Vec<SparseVec> = (0..r)
            .map(|j| SparseVec::from_entries(Z, (0..r).map(|i| (i, Int::from(entries[i * 3 + j])))))
            .collect();
        for module in [free.clone(), Arc::new(PresentedModule::unlabeled(Z, r, columns_of(&dom)).unwrap())] {
            let f = ModuleMap::new(module.clone(), module.clone(), cols.clone()).unwrap();
            let Ok(verdict) = f.is_isomorphism() else { continue };
            let kernel_trivial = f.kernel_generators().unwrap().iter().all(|v| module.is_zero_element(v));
            let coker_zero = f.cokernel().unwrap().is_zero_module();
            prop_assert_eq!(verdict.is_iso(), kernel_trivial && coker_zero);
            if let IsoVerdict::NotIso { cokernel, .. } = &verdict {
                prop_assert_eq!(cokernel, &f.cokernel().unwrap().invariant_factors());
            }
        }
    }
}

#[test]
fn two_presentations_of_z2_plus_z4() {
    let a = PresentedModule::unlabeled(Z, 2, columns_of(&Matrix::from_rows(Z, &[vec![2, 0], vec![0, 4]]).unwrap())).unwrap();
    // Same module after a unimodular change of basis and an extra redundant relation.
    let b = PresentedModule::unlabeled(
        Z,
        2,
        columns_of(&Matrix::from_rows(Z, &[vec![2, 4, 6], vec![2, 8, 14]]).unwrap()),
    )
    .unwrap();
    let expected = vec![Int::from(2), Int::from(4)];
    assert_eq!(a.invariant_factors(), expected);
    assert_eq!(b.invariant_factors(), expected);
}

#[test]
fn smith_trivial_cases() {
    let id = Matrix::identity(Z, 4);
    assert_eq!(smith_normal_form(&id).unwrap().d, id);
    let zero = Matrix::zeros(Z, 3, 2);
    assert!(smith_normal_form(&zero).unwrap().d.is_zero());
    let m = Matrix::from_rows(Z, &[vec![2, 4], vec![6, 8]]).unwrap();
    assert_eq!(smith_normal_form(&m).unwrap().diagonal(), vec![Int::from(2), Int::from(4)]);
}

#[test]
fn hermite_and_rref_examples() {
    let m = Matrix::from_rows(Z, &[vec![2, 0], vec![0, 3]]).unwrap();
    assert_eq!(hermite_normal_form(&m).unwrap(), m);
    let m = Matrix::from_rows(Z, &[vec![1, 1], vec![1, -1]]).unwrap();
    assert_eq!(i64s(&hermite_normal_form(&m).unwrap()), vec![vec![1, 1], vec![0, 2]]);
    let f2 = RingSpec::PrimeField(2);
    let m = Matrix::from_rows(f2, &[vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(i64s(&rref(&m).unwrap()), vec![vec![1, 1], vec![0, 0]]);
    let f3 = RingSpec::PrimeField(3);
    assert_eq!(i64s(&rref(&Matrix::from_rows(f3, &[vec![2]]).unwrap()).unwrap()), vec![vec![1]]);
    assert_eq!(rank(&Matrix::from_rows(f2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()), 2);
    assert!(rref(&Matrix::identity(Z, 2)).is_err());
    assert!(smith_normal_form(&Matrix::identity(f2, 2)).is_err());
}

#[test]
fn big_entries_do_not_overflow() {
    let big = i64::MAX / 3;
    let m = Matrix::from_rows(Z, &[vec![big, big - 1], vec![big - 7, big + 5]]).unwrap();
    let s = smith_normal_form(&m).unwrap();
    assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    assert!(s.u.determinant().unwrap().is_pm_one());
}

#[test]
fn ring_mismatch_is_an_error() {
    let a = Arc::new(PresentedModule::unlabeled(Z, 1, vec![]).unwrap());
    let b = Arc::new(PresentedModule::unlabeled(RingSpec::PrimeField(2), 1, vec![]).unwrap());
    assert!(ModuleMap::new(a, b, vec![SparseVec::unit(0)]).is_err());
}
