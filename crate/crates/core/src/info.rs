//! Information-theoretic kernels over finite alphabets.
//!
//! All logarithms are base 2, so every quantity here is in bits (per channel
//! use, where a rate is meant). `0 log 0` is taken as `0`.

use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability vector.
pub const PMF_TOL: f64 = 1e-12;

/// Negative mutual-information values above this are treated as rounding noise.
pub const MI_SLACK: f64 = 1e-10;

/// Gaussian capacity function `½ log₂(1 + x)`.
pub fn capacity_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("capacity_fn requires finite x >= 0, got {x}")));
    }
    Ok(cap(x))
}

/// Unchecked `½ log₂(1 + x)` for internal callers that already hold `x >= 0`.
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

fn check_mass(probabilities: &[f64]) -> Result<()> {
    if probabilities.is_empty() {
        return Err(Error::Validation("empty probability vector".into()));
    }
    if let Some(bad) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::Validation(format!("probability entry {bad} is not a finite non-negative number")));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > PMF_TOL {
        return Err(Error::Validation(format!("probabilities sum to {total}, expected 1")));
    }
    Ok(())
}

fn plogp_sum(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    -probabilities.into_iter().filter(|&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

/// Probability mass function over a finite alphabet `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probabilities: Vec<f64>,
}

impl Pmf {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        check_mass(&probabilities)?;
        Ok(Self { probabilities })
    }

    /// Uniform distribution on `n` symbols.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("uniform pmf needs at least one symbol".into()));
        }
        Ok(Self { probabilities: vec![1.0 / n as f64; n] })
    }

    /// Point mass on `symbol`.
    pub fn point(n: usize, symbol: usize) -> Result<Self> {
        if symbol >= n {
            return Err(Error::Validation(format!("symbol {symbol} outside alphabet of size {n}")));
        }
        let mut probabilities = vec![0.0; n];
        probabilities[symbol] = 1.0;
        Ok(Self { probabilities })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, symbol: usize) -> f64 {
        self.probabilities[symbol]
    }
}

/// Shannon entropy in bits.
pub fn entropy(p: &Pmf) -> f64 {
    plogp_sum(p.probabilities.iter().copied())
}

/// Binary entropy function `h₂(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    plogp_sum([p, 1.0 - p])
}

/// Dense joint pmf over the product of a handful of finite alphabets.
///
/// Entries are stored row-major: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    shape: Vec<usize>,
    probabilities: Vec<f64>,
}

impl JointPmf {
    pub fn new(shape: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Validation(format!("invalid joint shape {shape:?}")));
        }
        let size: usize = shape.iter().product();
        if size != probabilities.len() {
            return Err(Error::Validation(format!(
                "joint shape {shape:?} needs {size} entries, got {}",
                probabilities.len()
            )));
        }
        check_mass(&probabilities)?;
        Ok(Self { shape, probabilities })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn num_axes(&self) -> usize {
        self.shape.len()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.shape.len()];
        for k in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.shape[k + 1];
        }
        strides
    }

    /// Marginal over `axes`, kept in the order given.
    pub fn marginal(&self, axes: &[usize]) -> Result<JointPmf> {
        self.check_axes(axes)?;
        if axes.is_empty() {
            return JointPmf::new(vec![1], vec![1.0]);
        }
        let shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let probabilities = self.marginal_raw(axes);
        Ok(JointPmf { shape, probabilities })
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        for (i, &a) in axes.iter().enumerate() {
            if a >= self.shape.len() {
                return Err(Error::Usage(format!("axis {a} out of range for {}-axis joint", self.shape.len())));
            }
            if axes[..i].contains(&a) {
                return Err(Error::Usage(format!("axis {a} listed twice")));
            }
        }
        Ok(())
    }

    fn marginal_raw(&self, axes: &[usize]) -> Vec<f64> {
        let strides = self.strides();
        let out_size: usize = axes.iter().map(|&a| self.shape[a]).product();
        let mut out = vec![0.0; out_size];
        for (flat, &p) in self.probabilities.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut idx = 0;
            for &a in axes {
                idx = idx * self.shape[a] + (flat / strides[a]) % self.shape[a];
            }
            out[idx] += p;
        }
        out
    }

    /// Joint entropy `H(X_axes)` in bits.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        self.check_axes(axes)?;
        Ok(plogp_sum(self.marginal_raw(axes)))
    }
}

/// Conditional mutual information `I(A; B | C)` in bits.
///
/// Computed as `H(A,C) + H(B,C) - H(A,B,C) - H(C)` and clamped at zero.
pub fn mutual_information(joint: &JointPmf, a: &[usize], b: &[usize], cond: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Usage("mutual information needs non-empty axis groups".into()));
    }
    let groups = [a, b, cond];
    for (i, g) in groups.iter().enumerate() {
        for h in &groups[i + 1..] {
            if let Some(x) = g.iter().find(|x| h.contains(x)) {
                return Err(Error::Usage(format!("axis {x} appears in more than one group")));
            }
        }
    }
    let ac: Vec<usize> = a.iter().chain(cond).copied().collect();
    let bc: Vec<usize> = b.iter().chain(cond).copied().collect();
    let abc: Vec<usize> = a.iter().chain(b).chain(cond).copied().collect();
    let value = joint.entropy_of(&ac)? + joint.entropy_of(&bc)? - joint.entropy_of(&abc)? - joint.entropy_of(cond)?;
    Ok(value.max(0.0))
}

/// Memoized marginal entropies of one joint, keyed by axis bitmask.
///
/// The region evaluators ask for many overlapping mutual informations of the
/// same joint; each distinct marginal is summed once.
pub(crate) struct EntropyCache<'a> {
    joint: &'a JointPmf,
    cache: Vec<f64>,
    buf: Vec<f64>,
}

impl<'a> EntropyCache<'a> {
    pub(crate) fn new(joint: &'a JointPmf) -> Self {
        let n = joint.num_axes();
        assert!(n <= 16, "entropy cache supports at most 16 axes");
        Self { joint, cache: vec![f64::NAN; 1 << n], buf: Vec::new() }
    }

    fn mask(axes: &[usize]) -> usize {
        axes.iter().fold(0, |m, &a| m | (1 << a))
    }

    fn entropy_mask(&mut self, mask: usize) -> f64 {
        let cached = self.cache[mask];
        if !cached.is_nan() {
            return cached;
        }
        let shape = &self.joint.shape;
        let n = shape.len();
        // Marginal strides for masked axes (row-major over the kept axes), zero otherwise.
        let mut mstride = vec![0usize; n];
        let mut size = 1;
        for k in (0..n).rev() {
            if mask & (1 << k) != 0 {
                mstride[k] = size;
                size *= shape[k];
            }
        }
        self.buf.clear();
        self.buf.resize(size, 0.0);
        let mut coord = vec![0usize; n];
        let mut idx = 0usize;
        for &p in &self.joint.probabilities {
            self.buf[idx] += p;
            // Odometer step over the full shape, tracking the marginal index.
            for k in (0..n).rev() {
                coord[k] += 1;
                idx += mstride[k];
                if coord[k] < shape[k] {
                    break;
                }
                idx -= mstride[k] * shape[k];
                coord[k] = 0;
            }
        }
        let h = plogp_sum(self.buf.iter().copied());
        self.cache[mask] = h;
        h
    }

    /// `I(A; B | C)` for disjoint axis groups, clamped at zero.
    pub(crate) fn mutual_information(&mut self, a: &[usize], b: &[usize], cond: &[usize]) -> f64 {
        let (ma, mb, mc) = (Self::mask(a), Self::mask(b), Self::mask(cond));
        debug_assert!(ma & mb == 0 && ma & mc == 0 && mb & mc == 0, "axis groups overlap");
        let value = self.entropy_mask(ma | mc) + self.entropy_mask(mb | mc)
            - self.entropy_mask(ma | mb | mc)
            - self.entropy_mask(mc);
        value.max(0.0)
    }
}
