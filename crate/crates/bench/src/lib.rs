//! Fixtures shared by the benchmarks.

use superset_core::{generate, Dataset, ModelPosterior, ModelSpace, SynthConfig};

/// Synthetic quadratic design with `distractors` extra columns, so `p = distractors + 2`.
pub fn synth_dataset(distractors: usize) -> Dataset {
    let cfg = SynthConfig { distractors, ..SynthConfig::default() };
    generate(&cfg).expect("default synth config is valid")
}

pub fn full_space(ds: &Dataset) -> ModelSpace {
    ModelSpace::all(ds.p(), true).expect("p within enumeration width")
}

/// Deterministic pseudo-posterior over all `2^p` subsets, for the scan benchmark.
pub fn spread_posterior(h: superset_core::Hypothesis, p: usize, salt: u64) -> ModelPosterior {
    let space = ModelSpace::all(p, true).expect("p within enumeration width");
    let weights = space
        .masks()
        .iter()
        .map(|m| {
            let x = m.bits().wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
        })
        .collect();
    ModelPosterior::from_log_weights(h, space.masks().to_vec(), weights).expect("finite weights")
}
