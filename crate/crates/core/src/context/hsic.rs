//! Empirical Hilbert-Schmidt independence criterion and the greedy
//! HSIC-guided training-sample selector.
//!
//! The estimator is `trace(K H L H) / (n-1)^2` with Gaussian Gram
//! matrices `K`, `L` and the centering projector `H = I - (1/n) 11^T`,
//! computed here as the elementwise product of the two double-centered
//! Gram matrices.

use crate::error::{Error, Result};

/// Row-major block of samples: one row per sample, `dims` features each.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    data: Vec<f64>,
    count: usize,
    dims: usize,
}

impl Samples {
    pub fn new(count: usize, dims: usize, data: Vec<f64>) -> Result<Self> {
        if count == 0 || dims == 0 {
            return Err(Error::arg(format!("empty sample block {count}x{dims}")));
        }
        if data.len() != count * dims {
            return Err(Error::dims(format!(
                "sample data length {} != {count}x{dims}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Samples { data, count, dims })
    }

    /// Single-feature block from a value column.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Samples::new(values.len(), 1, values.to_vec())
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.dims
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dims..(i + 1) * self.dims]
    }

    /// New block holding the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Samples> {
        let mut data = Vec::with_capacity(indices.len() * self.dims);
        for &i in indices {
            if i >= self.count {
                return Err(Error::arg(format!("sample index {i} out of range")));
            }
            data.extend_from_slice(self.row(i));
        }
        Samples::new(indices.len(), self.dims, data)
    }

    fn sq_dist(&self, i: usize, j: usize) -> f64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Median pairwise distance over all sample pairs; the customary
/// Gaussian-bandwidth heuristic. Falls back to 1.0 when every pair
/// coincides (the kernel is then constant regardless of bandwidth).
pub fn median_bandwidth(x: &Samples) -> f64 {
    let n = x.count();
    let mut dists: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            dists.push(x.sq_dist(i, j).sqrt());
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 1 {
        dists[mid]
    } else {
        0.5 * (dists[mid - 1] + dists[mid])
    };
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

/// Double-centered Gaussian Gram matrix, row-major n x n.
fn centered_gram(x: &Samples, sigma: f64) -> Vec<f64> {
    let n = x.count();
    let inv = -1.0 / (2.0 * sigma * sigma);
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        g[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = (x.sq_dist(i, j) * inv).exp();
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    }

    let mut row_mean = vec![0.0; n];
    for i in 0..n {
        row_mean[i] = g[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64;
    }
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] += grand - row_mean[i] - row_mean[j];
        }
    }
    g
}

/// Empirical HSIC between two equally sized sample blocks under Gaussian
/// kernels of the given bandwidths. Non-negative up to rounding and
/// exactly symmetric in its arguments.
pub fn hsic(x: &Samples, y: &Samples, sigma_x: f64, sigma_y: f64) -> Result<f64> {
    if x.count() != y.count() {
        return Err(Error::dims(format!(
            "sample counts differ: {} vs {}",
            x.count(),
            y.count()
        )));
    }
    let n = x.count();
    if n < 2 {
        return Err(Error::arg("HSIC needs at least 2 samples"));
    }
    for (name, s) in [("sigma_x", sigma_x), ("sigma_y", sigma_y)] {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::arg(format!("{name} = {s} must be > 0")));
        }
    }

    let kc = centered_gram(x, sigma_x);
    let lc = centered_gram(y, sigma_y);
    let dot: f64 = kc.iter().zip(&lc).map(|(a, b)| a * b).sum();
    let denom = (n - 1) as f64;
    Ok(dot / (denom * denom))
}

/// Feature rows plus one response value per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub features: Samples,
    pub labels: Vec<f64>,
}

impl SampleSet {
    pub fn new(features: Samples, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != features.count() {
            return Err(Error::dims(format!(
                "{} labels for {} samples",
                labels.len(),
                features.count()
            )));
        }
        if features.count() < 2 {
            return Err(Error::arg("sample set needs at least 2 samples"));
        }
        if let Some(bad) = labels.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(SampleSet { features, labels })
    }

    pub fn len(&self) -> usize {
        self.features.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// HSIC between features and labels restricted to `indices`.
    fn subset_objective(&self, indices: &[usize], sigma: f64) -> Result<f64> {
        let fx = self.features.subset(indices)?;
        let labels: Vec<f64> = indices.iter().map(|&i| self.labels[i]).collect();
        let fy = Samples::from_column(&labels)?;
        hsic(&fx, &fy, sigma, sigma)
    }
}

/// Greedy forward selection of `k` samples maximizing the subset
/// feature-label HSIC: seeded with the best pair, then grown one sample
/// at a time. Ties resolve to the lowest index; the result is sorted.
pub fn select_samples(set: &SampleSet, k: usize, sigma: f64) -> Result<Vec<usize>> {
    let n = set.len();
    if !(2..=n).contains(&k) {
        return Err(Error::arg(format!("k = {k} outside 2..={n}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::arg(format!("sigma = {sigma} must be > 0")));
    }
    if k == n {
        return Ok((0..n).collect());
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let obj = set.subset_objective(&[i, j], sigma)?;
            if obj > best {
                best = obj;
                chosen = vec![i, j];
            }
        }
    }

    while chosen.len() < k {
        let mut best_add = usize::MAX;
        let mut best_obj = f64::NEG_INFINITY;
        let mut candidate = Vec::with_capacity(chosen.len() + 1);
        for cand in 0..n {
            if chosen.contains(&cand) {
                continue;
            }
            candidate.clear();
            candidate.extend_from_slice(&chosen);
            candidate.push(cand);
            let obj = set.subset_objective(&candidate, sigma)?;
            if obj > best_obj {
                best_obj = obj;
                best_add = cand;
            }
        }
        chosen.push(best_add);
    }
    chosen.sort_unstable();
    Ok(chosen)
}
