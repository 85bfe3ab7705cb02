#![allow(dead_code)]

use std::sync::Arc;

use censtab_core::presentation::{ModulePresentation, Relation, Term};
use censtab_core::{Category, CategorySpec};
use censtab_linalg::{Int, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fi() -> Arc<Category> {
    Arc::new(Category::new(CategorySpec::Fi).unwrap())
}

/// One generator in degree 0 with `2·x = 0` imposed in degree 1.
pub fn z2_example(cat: Arc<Category>) -> ModulePresentation {
    let rel = Relation { degree: 1, terms: vec![Term { gen: 0, hom_index: 0, coeff: Int::from(2) }] };
    ModulePresentation::new(cat, RingSpec::Integers, vec![0], vec![rel])
}

/// At most 3 generators of degree ≤ 2 and at most 3 relations of degree ≤ 3,
/// coefficients in [-2, 2], over ℤ.
pub fn random_fi_presentation(cat: Arc<Category>, rng: &mut ChaCha8Rng) -> ModulePresentation {
    let gens: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..=2)).collect();
    let low = *gens.iter().min().unwrap();
    let mut relations = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let degree = rng.gen_range(low..=3);
        let usable: Vec<usize> = (0..gens.len()).filter(|&g| gens[g] <= degree).collect();
        let terms = (0..rng.gen_range(1..=3))
            .map(|_| {
                let gen = usable[rng.gen_range(0..usable.len())];
                let size = cat.hom_size(gens[gen], degree).unwrap();
                let mut coeff = 0;
                while coeff == 0 {
                    coeff = rng.gen_range(-2i64..=2);
                }
                Term { gen, hom_index: rng.gen_range(0..size), coeff: Int::from(coeff) }
            })
            .collect();
        relations.push(Relation { degree, terms });
    }
    ModulePresentation::new(cat, RingSpec::Integers, gens, relations)
}

pub fn random_suite(seed: u64, count: usize) -> Vec<ModulePresentation> {
    let cat = fi();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_fi_presentation(cat.clone(), &mut rng)).collect()
}
