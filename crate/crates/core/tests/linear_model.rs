mod oracles;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use superset_core::{
    h1_posterior, r_squared, score_subset, Dataset, HyperGPrior, ModelSpace, SubsetMask,
};

fn two_covariate(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Uniform::new(-1.0, 1.0).unwrap();
    let noise = Normal::new(0.0, 0.1).unwrap();
    let x1: Vec<f64> = (0..n).map(|_| u.sample(&mut rng)).collect();
    let x2: Vec<f64> = (0..n).map(|_| u.sample(&mut rng)).collect();
    let y = x1.iter().map(|v| 1.0 + 2.0 * v + noise.sample(&mut rng)).collect();
    Dataset::new(y, vec![x1, x2], vec!["x1".into(), "x2".into()]).unwrap()
}

#[test]
fn true_covariate_is_modal() {
    let ds = two_covariate(200, 11);
    let space = ModelSpace::all(2, true).unwrap();
    let post = h1_posterior(&ds, &space, HyperGPrior::default()).unwrap();
    let (mode, p) = post.mode();
    assert_eq!(mode, SubsetMask::from_indices(2, &[0]).unwrap());
    assert!(p > 0.5);

    for &m in space.masks() {
        let s = score_subset(&ds, m, HyperGPrior::default()).unwrap();
        let want = oracles::hyperg_log_bf(200, m.k(), s.r2, 3.0);
        assert!((s.log_bf - want).abs() < 1e-8 * want.abs().max(1.0), "{m}: {} vs {want}", s.log_bf);
    }
}

#[test]
fn affine_rescaling_leaves_r2_unchanged() {
    let ds = oracles::diabetes();
    let m = SubsetMask::from_indices(10, &[0, 2, 3, 8]).unwrap();
    let base = r_squared(&ds, m).unwrap();
    let scaled = ds.with_affine_column(2, 1000.0, -37.0).unwrap();
    assert!((r_squared(&scaled, m).unwrap() - base).abs() < 1e-12);
    let flipped = ds.with_affine_column(0, -0.01, 5.0).unwrap();
    assert!((r_squared(&flipped, m).unwrap() - base).abs() < 1e-12);
}

#[test]
fn nested_subsets_do_not_lose_fit() {
    let ds = oracles::diabetes();
    for bits in 1u64..1024 {
        let m = SubsetMask::new(10, bits).unwrap();
        let r = r_squared(&ds, m).unwrap();
        for j in 0..10 {
            if !m.contains(j) {
                let bigger = SubsetMask::new(10, bits | (1 << j)).unwrap();
                assert!(r_squared(&ds, bigger).unwrap() >= r - 1e-12);
            }
        }
    }
}

#[test]
fn pure_noise_column_is_not_preferred() {
    let base = two_covariate(200, 5);
    let space = ModelSpace::from_masks(vec![
        SubsetMask::from_indices(2, &[0]).unwrap(),
        SubsetMask::from_indices(2, &[0, 1]).unwrap(),
    ])
    .unwrap();
    let post = h1_posterior(&base, &space, HyperGPrior::default()).unwrap();
    assert!(post.probabilities()[0] > post.probabilities()[1]);
}

#[test]
fn diabetes_posterior_is_normalized() {
    let ds = oracles::diabetes();
    let space = ModelSpace::all(10, true).unwrap();
    let post = h1_posterior(&ds, &space, HyperGPrior::default()).unwrap();
    assert!((post.total() - 1.0).abs() < 1e-12);
    assert_eq!(post.masks().len(), 1024);
    let bmi = ds.column_index("BMI").unwrap();
    let s5 = ds.column_index("S5").unwrap();
    assert!(post.mode().0.contains(bmi) && post.mode().0.contains(s5));
}
