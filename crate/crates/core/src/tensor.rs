//! Piezoelectric-type tensors, their symmetric fourth-order lifting, and the
//! contractions both need.
//!
//! Storage is dense row-major: `a[(i * n + j) * n + k]` for order three and
//! the analogous four-index layout for order four.

use crate::error::{Error, Result};
use crate::linalg;

/// How [`PiezoTensor::new`] treats entries that break `a_ijk = a_ikj`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetryMode {
    /// Reject the input unless it is already symmetric in its last two
    /// indices.
    Strict,
    /// Replace each pair by its average, `(raw_ijk + raw_ikj) / 2`.
    #[default]
    AutoSymmetrize,
}

/// Real order-3 tensor with `a_ijk = a_ikj` for all indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PiezoTensor {
    n: usize,
    data: Vec<f64>,
}

impl PiezoTensor {
    pub fn new(n: usize, raw: &[f64], mode: SymmetryMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = n * n * n;
        if raw.len() != expected {
            return Err(Error::BadLength {
                expected,
                got: raw.len(),
            });
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mut data = raw.to_vec();
        for i in 0..n {
            for j in 0..n {
                for k in (j + 1)..n {
                    let p = (i * n + j) * n + k;
                    let q = (i * n + k) * n + j;
                    match mode {
                        SymmetryMode::Strict => {
                            if raw[p] != raw[q] {
                                return Err(Error::SymmetryViolation {
                                    i: i + 1,
                                    j: j + 1,
                                    k: k + 1,
                                });
                            }
                        }
                        SymmetryMode::AutoSymmetrize => {
                            let avg = (raw[p] + raw[q]) / 2.0;
                            data[p] = avg;
                            data[q] = avg;
                        }
                    }
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            n,
            data: vec![0.0; n * n * n],
        })
    }

    /// Builds a tensor from 0-based `((i, j, k), value)` pairs, writing each
    /// value to both `(i, j, k)` and `(i, k, j)`.
    pub fn from_entries(n: usize, entries: &[((usize, usize, usize), f64)]) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for &((i, j, k), v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidInput(format!(
                    "index ({i},{j},{k}) out of range for n = {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: (i * n + j) * n + k,
                });
            }
            t.data[(i * n + j) * n + k] = v;
            t.data[(i * n + k) * n + j] = v;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * t).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::norm2(&self.data)
    }

    /// The horizontal slice `A(i, :, :)` as a row-major symmetric matrix.
    pub fn slice(&self, i: usize) -> &[f64] {
        let nn = self.n * self.n;
        &self.data[i * nn..(i + 1) * nn]
    }

    /// `(A y y)_i = Σ_jk a_ijk y_j y_k`.
    pub fn apply_yy(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(y)?;
        Ok(self.apply_yy_unchecked(y))
    }

    /// `(x A y)_i = Σ_jk a_jki x_j y_k`.
    pub fn apply_xay(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(self.apply_xay_unchecked(x, y))
    }

    /// `x A y y = Σ_ijk a_ijk x_i y_j y_k`.
    pub fn form_xayy(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(linalg::dot(x, &self.apply_yy_unchecked(y)))
    }

    /// `M(y)_ij = Σ_k a_ijk y_k`, so that `A y y = M(y) y` and
    /// `x A y = M(y)ᵀ x`.
    pub fn contract_last(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let row = &self.data[(i * n + j) * n..(i * n + j + 1) * n];
                m[i * n + j] = linalg::dot(row, y);
            }
        }
        m
    }

    /// `N(x)_jk = Σ_i a_ijk x_i`, a symmetric matrix with `yᵀ N(x) y = x A y y`.
    pub fn contract_first(&self, x: &[f64]) -> Vec<f64> {
        let nn = self.n * self.n;
        let mut m = vec![0.0; nn];
        for (i, xi) in x.iter().enumerate() {
            for (dst, src) in m.iter_mut().zip(&self.data[i * nn..(i + 1) * nn]) {
                *dst += xi * src;
            }
        }
        m
    }

    pub(crate) fn apply_yy_unchecked(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    let row = &self.data[(i * n + j) * n..(i * n + j + 1) * n];
                    acc += y[j] * linalg::dot(row, y);
                }
                acc
            })
            .collect()
    }

    pub(crate) fn apply_xay_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for j in 0..n {
            for k in 0..n {
                let w = x[j] * y[k];
                if w == 0.0 {
                    continue;
                }
                let row = &self.data[(j * n + k) * n..(j * n + k + 1) * n];
                for (o, a) in out.iter_mut().zip(row) {
                    *o += w * a;
                }
            }
        }
        out
    }

    /// The symmetric fourth-order tensor `S_A`.
    ///
    /// First `b_pqrs = Σ_i a_ipq a_irs`, then
    /// `b̄_pqrs = (b_pqrs + b_prqs + b_psqr) / 3`. Each entry is computed once
    /// at its sorted index and copied to all permutations, which makes the
    /// result exactly symmetric.
    pub fn lift(&self) -> SymTensor4 {
        let n = self.n;
        let b = |p: usize, q: usize, r: usize, s: usize| -> f64 {
            (0..n).map(|i| self.get(i, p, q) * self.get(i, r, s)).sum()
        };
        SymTensor4::from_canonical(n, |p, q, r, s| {
            (b(p, q, r, s) + b(p, r, q, s) + b(p, s, q, r)) / 3.0
        })
    }

    /// Largest singular value of the `n × n²` unfolding
    /// `[A(1,:,:), …, A(n,:,:)]`.
    ///
    /// Computed from the `n × n` Gram matrix `G_pq = Σ_jk a_pjk a_qjk`, which
    /// does not depend on whether the slices are stacked side by side or on
    /// top of each other.
    pub fn unfold_spectral_norm(&self) -> f64 {
        let n = self.n;
        let mut g = vec![0.0; n * n];
        for p in 0..n {
            for q in p..n {
                let v = linalg::dot(self.slice(p), self.slice(q));
                g[p * n + q] = v;
                g[q * n + p] = v;
            }
        }
        let top = *linalg::sym_eigen(&g, n, 1e-12).values.last().unwrap();
        top.max(0.0).sqrt()
    }

    fn check_vec(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        if let Some(index) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }
}

/// Fully symmetric real order-4 tensor. All `n⁴` entries are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor4 {
    n: usize,
    data: Vec<f64>,
}

impl SymTensor4 {
    /// Validates that `raw` is invariant under all index permutations.
    pub fn new(n: usize, raw: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = n.pow(4);
        if raw.len() != expected {
            return Err(Error::BadLength {
                expected,
                got: raw.len(),
            });
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let t = Self {
            n,
            data: raw.to_vec(),
        };
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = t.get(p, q, r, s);
                        let [a, b, c, d] = sorted4(p, q, r, s);
                        if t.get(a, b, c, d) != v {
                            return Err(Error::NotFullySymmetric {
                                index: t.flat(p, q, r, s),
                            });
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    /// Averages `raw` over all 24 index permutations.
    pub fn symmetrize(n: usize, raw: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if raw.len() != n.pow(4) {
            return Err(Error::BadLength {
                expected: n.pow(4),
                got: raw.len(),
            });
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let at = |p: usize, q: usize, r: usize, s: usize| raw[((p * n + q) * n + r) * n + s];
        Ok(Self::from_canonical(n, |p, q, r, s| {
            let idx = [p, q, r, s];
            PERMUTATIONS_4
                .iter()
                .map(|pm| at(idx[pm[0]], idx[pm[1]], idx[pm[2]], idx[pm[3]]))
                .sum::<f64>()
                / 24.0
        }))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            n,
            data: vec![0.0; n.pow(4)],
        })
    }

    /// Evaluates `value` once per sorted index `p ≤ q ≤ r ≤ s` and scatters
    /// it to every permutation.
    fn from_canonical(n: usize, value: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n.pow(4)];
        for p in 0..n {
            for q in p..n {
                for r in q..n {
                    for s in r..n {
                        let v = value(p, q, r, s);
                        let idx = [p, q, r, s];
                        for pm in PERMUTATIONS_4.iter() {
                            let (a, b, c, d) = (idx[pm[0]], idx[pm[1]], idx[pm[2]], idx[pm[3]]);
                            data[((a * n + b) * n + c) * n + d] = v;
                        }
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.flat(p, q, r, s)]
    }

    fn flat(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    /// Exact check of the 24-permutation invariance.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        (0..n).all(|p| {
            (0..n).all(|q| {
                (0..n).all(|r| {
                    (0..n).all(|s| {
                        let v = self.get(p, q, r, s);
                        PERMUTATIONS_4.iter().all(|pm| {
                            let idx = [p, q, r, s];
                            self.get(idx[pm[0]], idx[pm[1]], idx[pm[2]], idx[pm[3]]) == v
                        })
                    })
                })
            })
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn abs_sum(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    /// `T y⁴` by full quadruple summation.
    pub fn eval_quartic(&self, y: &[f64]) -> Result<f64> {
        self.check_vec(y)?;
        Ok(self.eval_quartic_unchecked(y))
    }

    /// `(T y³)_i = Σ_jkl t_ijkl y_j y_k y_l`.
    pub fn apply_cubic(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_vec(y)?;
        Ok(self.apply_cubic_unchecked(y))
    }

    pub(crate) fn eval_quartic_unchecked(&self, y: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let w = y[p] * y[q] * y[r];
                    let row = &self.data[((p * n + q) * n + r) * n..((p * n + q) * n + r + 1) * n];
                    acc += w * linalg::dot(row, y);
                }
            }
        }
        acc
    }

    pub(crate) fn apply_cubic_unchecked(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let m = self.apply_square_unchecked(y);
        (0..n).map(|i| linalg::dot(&m[i * n..(i + 1) * n], y)).collect()
    }

    /// `(T y²)_ij = Σ_kl t_ijkl y_k y_l`, a symmetric `n × n` matrix.
    pub(crate) fn apply_square_unchecked(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let nn = n * n;
        let mut m = vec![0.0; nn];
        for (ij, out) in m.iter_mut().enumerate() {
            let block = &self.data[ij * nn..(ij + 1) * nn];
            let mut acc = 0.0;
            for k in 0..n {
                acc += y[k] * linalg::dot(&block[k * n..(k + 1) * n], y);
            }
            *out = acc;
        }
        m
    }

    fn check_vec(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        if let Some(index) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }
}

fn sorted4(p: usize, q: usize, r: usize, s: usize) -> [usize; 4] {
    let mut idx = [p, q, r, s];
    idx.sort_unstable();
    idx
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];
