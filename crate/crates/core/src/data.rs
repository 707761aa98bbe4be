//! Dataset representation, covariate subsets, cross-validation folds,
//! per-fold standardization and exact-match grouping of test points.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the generator behind [`make_folds`], recorded in reports.
pub const FOLD_PRNG: &str = "chacha8/fisher-yates/round-robin";

/// Response vector and raw covariates, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(y: Vec<f64>, columns: Vec<Vec<f64>>, names: Vec<String>) -> Result<Self> {
        let n = y.len();
        if n < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 observations, got {n}")));
        }
        if columns.is_empty() {
            return Err(Error::InvalidDataset("need at least one covariate".into()));
        }
        if columns.len() > SubsetMask::MAX_WIDTH {
            return Err(Error::InvalidDataset(format!(
                "at most {} covariates are supported, got {}",
                SubsetMask::MAX_WIDTH,
                columns.len()
            )));
        }
        if names.len() != columns.len() {
            return Err(Error::InvalidDataset(format!(
                "{} column names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!("response at row {i} is not finite")));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "column '{}' has {} rows, response has {n}",
                    names[j],
                    col.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "column '{}' row {i} is not finite",
                    names[j]
                )));
            }
        }
        Ok(Self { y, columns, names })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|c| c == name)
    }

    /// Keeps the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let y = rows.iter().map(|&i| self.y[i]).collect();
        let columns = self
            .columns
            .iter()
            .map(|col| rows.iter().map(|&i| col[i]).collect())
            .collect();
        Self::new(y, columns, self.names.clone())
    }

    /// Replaces column `j` with `scale * x + shift`.
    pub fn with_affine_column(&self, j: usize, scale: f64, shift: f64) -> Result<Self> {
        let mut columns = self.columns.clone();
        for v in &mut columns[j] {
            *v = scale * *v + shift;
        }
        Self::new(self.y.clone(), columns, self.names.clone())
    }

    /// Human-readable label such as `{BMI,BP}`.
    pub fn subset_label(&self, subset: SubsetMask) -> String {
        subset.label(&self.names)
    }
}

/// A set of selected covariates, as a bitmask over at most 64 columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u64,
    width: u8,
}

impl SubsetMask {
    pub const MAX_WIDTH: usize = 64;

    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::InvalidArgument(format!("mask width {width} out of range")));
        }
        if width < 64 && bits >> width != 0 {
            return Err(Error::InvalidArgument(format!(
                "bits {bits:#b} exceed mask width {width}"
            )));
        }
        Ok(Self { bits, width: width as u8 })
    }

    pub fn empty(width: usize) -> Self {
        Self::new(width, 0).expect("valid width")
    }

    pub fn from_indices(width: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &j in indices {
            if j >= width {
                return Err(Error::InvalidArgument(format!(
                    "column index {j} out of range for width {width}"
                )));
            }
            bits |= 1 << j;
        }
        Self::new(width, bits)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    /// Number of selected covariates.
    pub fn k(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, j: usize) -> bool {
        j < self.width() && self.bits >> j & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..self.width()).filter(move |&j| self.bits >> j & 1 == 1)
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn label(self, names: &[String]) -> String {
        let parts: Vec<&str> = self.indices().map(|j| names[j].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Seeded partition of observation indices into `m` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    m: usize,
    seed: u64,
    assignment: Vec<usize>,
}

impl FoldPlan {
    /// Builds a plan from an explicit assignment (fold ids `0..m`).
    pub fn from_assignment(m: usize, seed: u64, assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        if m < 2 || m > n {
            return Err(Error::InvalidFoldCount { m, n });
        }
        let mut sizes = vec![0usize; m];
        for &f in &assignment {
            if f >= m {
                return Err(Error::InvalidArgument(format!("fold id {f} >= m = {m}")));
            }
            sizes[f] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument("every fold must be nonempty".into()));
        }
        Ok(Self { m, seed, assignment })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fold id (0-based) of every observation.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.m];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// Returns `(train_ids, test_ids)` for one fold, each ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::with_capacity(self.n());
        let mut test = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}

fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    // Rejection sampling keeps the draw unbiased.
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

/// Shuffles `0..n` with Fisher-Yates driven by ChaCha8 seeded from `seed`,
/// then deals the shuffled indices round-robin into `m` folds.
pub fn make_folds(n: usize, m: usize, seed: u64) -> Result<FoldPlan> {
    if m < 2 || m > n {
        return Err(Error::InvalidFoldCount { m, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = uniform_below(&mut rng, i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut assignment = vec![0; n];
    for (pos, &obs) in perm.iter().enumerate() {
        assignment[obs] = pos % m;
    }
    Ok(FoldPlan { m, seed, assignment })
}

/// Covariates of one fold standardized by training-set statistics.
#[derive(Debug, Clone)]
pub struct StandardizedFold {
    pub fold: usize,
    pub subset: SubsetMask,
    pub train_ids: Vec<usize>,
    pub test_ids: Vec<usize>,
    pub train_mean: Vec<f64>,
    pub train_sd: Vec<f64>,
    /// `|D0| x k`
    pub z_train: DMatrix<f64>,
    /// `|D1| x k`
    pub z_test: DMatrix<f64>,
}

impl StandardizedFold {
    pub fn k(&self) -> usize {
        self.subset.k()
    }
}

/// Mean and sample standard deviation (denominator `len - 1`).
pub(crate) fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut count = 0usize;
    let mut sum = 0.0;
    for v in values.clone() {
        sum += v;
        count += 1;
    }
    let mean = sum / count as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    let sd = if count > 1 { (ss / (count - 1) as f64).sqrt() } else { 0.0 };
    (mean, sd)
}

pub fn standardize_fold(
    ds: &Dataset,
    subset: SubsetMask,
    plan: &FoldPlan,
    fold: usize,
) -> Result<StandardizedFold> {
    if subset.width() != ds.p() {
        return Err(Error::InvalidArgument(format!(
            "subset width {} does not match p = {}",
            subset.width(),
            ds.p()
        )));
    }
    if plan.n() != ds.n() {
        return Err(Error::InvalidArgument(format!(
            "fold plan covers {} observations, dataset has {}",
            plan.n(),
            ds.n()
        )));
    }
    if fold >= plan.m() {
        return Err(Error::InvalidArgument(format!("fold {fold} >= m = {}", plan.m())));
    }
    let (train_ids, test_ids) = plan.split(fold);
    let cols: Vec<usize> = subset.indices().collect();
    let k = cols.len();
    let mut train_mean = Vec::with_capacity(k);
    let mut train_sd = Vec::with_capacity(k);
    let mut z_train = DMatrix::zeros(train_ids.len(), k);
    let mut z_test = DMatrix::zeros(test_ids.len(), k);
    for (c, &j) in cols.iter().enumerate() {
        let col = ds.column(j);
        let (mean, sd) = mean_sd(train_ids.iter().map(|&i| col[i]));
        if !(sd > 0.0) {
            return Err(Error::DegenerateColumn {
                column: ds.names()[j].clone(),
                subset: ds.subset_label(subset),
            });
        }
        for (r, &i) in train_ids.iter().enumerate() {
            z_train[(r, c)] = (col[i] - mean) / sd;
        }
        for (r, &i) in test_ids.iter().enumerate() {
            z_test[(r, c)] = (col[i] - mean) / sd;
        }
        train_mean.push(mean);
        train_sd.push(sd);
    }
    Ok(StandardizedFold { fold, subset, train_ids, test_ids, train_mean, train_sd, z_train, z_test })
}

/// Test observations sharing one distinct covariate value.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGroup {
    pub x_raw: Vec<f64>,
    pub x_std: Vec<f64>,
    pub member_ids: Vec<usize>,
    pub n_x: usize,
    pub ybar_x: f64,
    /// `(1/n_x) * sum (y - ybar)^2`; exactly zero iff all responses agree.
    pub s2_y: f64,
}

impl LocalGroup {
    pub fn new(x_raw: Vec<f64>, x_std: Vec<f64>, member_ids: Vec<usize>, ys: &[f64]) -> Self {
        assert!(!ys.is_empty(), "a local group needs at least one member");
        assert_eq!(member_ids.len(), ys.len());
        let n = ys.len();
        let (ybar_x, s2_y) = if ys.iter().all(|&v| v == ys[0]) {
            (ys[0], 0.0)
        } else {
            let mean = ys.iter().sum::<f64>() / n as f64;
            let ss: f64 = ys.iter().map(|v| (v - mean) * (v - mean)).sum();
            (mean, ss / n as f64)
        };
        Self { x_raw, x_std, member_ids, n_x: n, ybar_x, s2_y }
    }

    /// Group with no covariate information, built directly from responses.
    pub fn from_responses(ys: &[f64]) -> Self {
        Self::new(Vec::new(), Vec::new(), (0..ys.len()).collect(), ys)
    }
}

fn value_key(v: f64) -> u64 {
    // +0.0 folds -0.0 onto 0.0 so they group together.
    (v + 0.0).to_bits()
}

/// Groups the test rows of a fold by exact equality of their raw values on
/// the selected columns. Groups appear in order of first occurrence.
pub fn group_distinct(fold: &StandardizedFold, ds: &Dataset) -> Vec<LocalGroup> {
    let cols: Vec<usize> = fold.subset.indices().collect();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut first_row: Vec<usize> = Vec::new();
    for (r, &i) in fold.test_ids.iter().enumerate() {
        let key: Vec<u64> = cols.iter().map(|&j| value_key(ds.column(j)[i])).collect();
        let g = *index.entry(key).or_insert_with(|| {
            members.push(Vec::new());
            first_row.push(r);
            members.len() - 1
        });
        members[g].push(i);
    }
    let y = ds.y();
    members
        .into_iter()
        .zip(first_row)
        .map(|(ids, r)| {
            let i = ids[0];
            let x_raw = cols.iter().map(|&j| ds.column(j)[i]).collect();
            let x_std = fold.z_test.row(r).iter().copied().collect();
            let ys: Vec<f64> = ids.iter().map(|&i| y[i]).collect();
            LocalGroup::new(x_raw, x_std, ids, &ys)
        })
        .collect()
}

/// Tolerance for deciding that a recorded value is a whole number.
pub const INTEGRAL_TOLERANCE: f64 = 1e-9;

/// Row indices of the fine and coarse partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionPartition {
    pub fine: Vec<usize>,
    pub coarse: Vec<usize>,
}

/// An observation is coarse when every precision column holds a whole number.
pub fn precision_partition(ds: &Dataset, precision_columns: &[String]) -> Result<PrecisionPartition> {
    if precision_columns.is_empty() {
        return Err(Error::Config("at least one precision column is required".into()));
    }
    let cols = precision_columns
        .iter()
        .map(|name| {
            ds.column_index(name)
                .ok_or_else(|| Error::Config(format!("unknown precision column '{name}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fine = Vec::new();
    let mut coarse = Vec::new();
    for i in 0..ds.n() {
        let integral = cols.iter().all(|&j| {
            let v = ds.column(j)[i];
            (v - v.round()).abs() < INTEGRAL_TOLERANCE
        });
        if integral {
            coarse.push(i);
        } else {
            fine.push(i);
        }
    }
    Ok(PrecisionPartition { fine, coarse })
}

/// Splits a dataset into `(fine, coarse)` by recording precision. Either side
/// is `None` when it would hold fewer than two rows.
pub fn precision_split(
    ds: &Dataset,
    precision_columns: &[String],
) -> Result<(Option<Dataset>, Option<Dataset>)> {
    let part = precision_partition(ds, precision_columns)?;
    let build = |rows: &[usize]| -> Result<Option<Dataset>> {
        if rows.len() < 2 {
            Ok(None)
        } else {
            ds.select_rows(rows).map(Some)
        }
    };
    Ok((build(&part.fine)?, build(&part.coarse)?))
}
