//! Extreme Z-eigenpairs of symmetric fourth-order tensors and the largest
//! C-eigenpair of piezoelectric-type tensors.
//!
//! The Z-solver is a multi-start shifted symmetric higher-order power
//! iteration: `y ← normalize(T y³ + α y)`. With `α` large enough to make the
//! shifted form convex the quartic `T y⁴` is nondecreasing along the
//! iterates. Each converged start is finished with a few Newton steps on the
//! eigen-equations so the residual reaches the `1e-8` contract even when the
//! linear convergence of the power map is slow.
//!
//! Two independent routes produce C-eigenpairs: [`c_max_via_lift`] maximizes
//! the lifted quartic and recovers `x = A y y / λ`, while
//! [`c_max_alternating`] runs block ascent directly on `x A y y`. The sphere
//! grid oracles at the bottom are brute force and share no code with either.

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::Gaussian;
use crate::tensor::{PiezoTensor, SymTensor4};

/// Largest residual a returned eigenpair may carry.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Below this a C-eigenvalue is treated as zero and `x` comes from the null
/// space of `x ↦ x A y`.
pub const ZERO_LAMBDA: f64 = 1e-10;
/// Negative lifted eigenvalues within this band are rounding noise.
pub const NEGATIVE_CLAMP: f64 = 1e-8;

const POLISH_STEPS: usize = 8;

/// How the power-iteration shift is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shift {
    /// Per-iterate shift from the smallest eigenvalue of the local Hessian,
    /// `α = max(0, (τ − 12 λ_min(T y²)) / 4)`.
    #[default]
    Adaptive,
    /// Fixed `α = 3 Σ |t_ijkl|`, which bounds the Hessian everywhere on the
    /// sphere. Slow but needs no eigen-solve per step.
    Static,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Seeded random starts; the `n` basis vectors are always added.
    pub starts: usize,
    /// Stopping threshold on the per-step change of the objective, relative
    /// to the Frobenius norm of the tensor.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub shift: Shift,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            tol: 1e-12,
            max_iters: 5000,
            seed: 0,
            shift: Shift::Adaptive,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::InvalidConfig("starts must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters < 10 {
            return Err(Error::InvalidConfig("max_iters must be at least 10".into()));
        }
        Ok(())
    }

    /// Seeded unit vectors followed by the canonical basis.
    pub fn start_vectors(&self, n: usize, starts: usize) -> Vec<Vec<f64>> {
        let mut g = Gaussian::new(self.seed);
        let mut out: Vec<Vec<f64>> = (0..starts).map(|_| g.unit_vector(n)).collect();
        out.extend((0..n).map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        }));
        out
    }
}

/// `T y³ = λ y` with `‖y‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZEigenpair {
    pub lambda: f64,
    pub y: Vec<f64>,
    /// `‖T y³ − λ y‖₂` at return.
    pub residual: f64,
}

/// `A y y = λ x`, `x A y = λ y`, `‖x‖ = ‖y‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CEigenpair {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl CEigenpair {
    /// `(‖A y y − λ x‖₂, ‖x A y − λ y‖₂)`.
    pub fn residuals(&self, a: &PiezoTensor) -> Result<(f64, f64)> {
        let ayy = a.apply_yy(&self.y)?;
        let xay = a.apply_xay(&self.x, &self.y)?;
        Ok((
            linalg::residual(&ayy, self.lambda, &self.x),
            linalg::residual(&xay, self.lambda, &self.y),
        ))
    }
}

/// Largest Z-eigenvalue of `t` with its eigenvector.
pub fn z_max(t: &SymTensor4, cfg: &SolverConfig) -> Result<ZEigenpair> {
    cfg.validate()?;
    match search_z(t, cfg, cfg.starts) {
        Ok(best) => Ok(best),
        // One retry with twice the random starts before giving up.
        Err(_) => search_z(t, cfg, 2 * cfg.starts)
            .map_err(|best_residual| Error::NoConvergence { best_residual }),
    }
}

/// Smallest Z-eigenvalue, as `−z_max(−t)`.
pub fn z_min(t: &SymTensor4, cfg: &SolverConfig) -> Result<ZEigenpair> {
    let mut pair = z_max(&t.neg(), cfg)?;
    pair.lambda = -pair.lambda;
    Ok(pair)
}

fn search_z(t: &SymTensor4, cfg: &SolverConfig, starts: usize) -> std::result::Result<ZEigenpair, f64> {
    let n = t.n();
    let scale = linalg::frobenius(t.entries());
    let static_alpha = 3.0 * t.abs_sum();
    let mut best: Option<ZEigenpair> = None;
    let mut best_residual = f64::INFINITY;

    for y0 in cfg.start_vectors(n, starts) {
        let (y, lambda) = power_ascent(t, y0, cfg, scale, static_alpha);
        let (y, lambda, residual) = polish_z(t, y, lambda, scale);
        best_residual = best_residual.min(residual);
        if residual > RESIDUAL_TOL {
            continue;
        }
        if best.as_ref().is_none_or(|b| lambda > b.lambda) {
            best = Some(ZEigenpair { lambda, y, residual });
        }
    }
    best.ok_or(best_residual)
}

fn power_ascent(
    t: &SymTensor4,
    mut y: Vec<f64>,
    cfg: &SolverConfig,
    scale: f64,
    static_alpha: f64,
) -> (Vec<f64>, f64) {
    let n = t.n();
    let mut lambda = t.eval_quartic_unchecked(&y);
    let stop = cfg.tol * scale;
    for _ in 0..cfg.max_iters {
        let alpha = match cfg.shift {
            Shift::Static => static_alpha,
            Shift::Adaptive => adaptive_shift(t, &y, scale),
        };
        let g = t.apply_cubic_unchecked(&y);
        let mut next: Vec<f64> = (0..n).map(|i| g[i] + alpha * y[i]).collect();
        if linalg::normalize(&mut next) == 0.0 {
            break;
        }
        let value = t.eval_quartic_unchecked(&next);
        let step = (value - lambda).abs();
        y = next;
        lambda = value;
        if step <= stop {
            break;
        }
    }
    (y, lambda)
}

fn adaptive_shift(t: &SymTensor4, y: &[f64], scale: f64) -> f64 {
    let n = t.n();
    let h = t.apply_square_unchecked(y);
    let lmin = linalg::sym_eigen(&h, n, 1e-10).values[0];
    let tau = 1e-6 * scale;
    ((tau - 12.0 * lmin) / 4.0).max(0.0)
}

/// Newton on `F(y, λ) = (T y³ − λ y, (1 − yᵀy)/2)`; a step is kept only if
/// it lowers the residual.
fn polish_z(t: &SymTensor4, mut y: Vec<f64>, mut lambda: f64, scale: f64) -> (Vec<f64>, f64, f64) {
    let n = t.n();
    let mut residual = linalg::residual(&t.apply_cubic_unchecked(&y), lambda, &y);
    for _ in 0..POLISH_STEPS {
        if residual <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        let h = t.apply_square_unchecked(&y);
        let g = t.apply_cubic_unchecked(&y);
        let m = n + 1;
        let mut jac = vec![0.0; m * m];
        let mut rhs = vec![0.0; m];
        for i in 0..n {
            for j in 0..n {
                jac[i * m + j] = 3.0 * h[i * n + j] - if i == j { lambda } else { 0.0 };
            }
            jac[i * m + n] = -y[i];
            jac[n * m + i] = -y[i];
            rhs[i] = -(g[i] - lambda * y[i]);
        }
        rhs[n] = -(1.0 - linalg::dot(&y, &y)) / 2.0;
        let Some(d) = linalg::solve(&jac, &rhs) else {
            break;
        };
        let mut cand: Vec<f64> = (0..n).map(|i| y[i] + d[i]).collect();
        if linalg::normalize(&mut cand) == 0.0 {
            break;
        }
        let cand_lambda = t.eval_quartic_unchecked(&cand);
        let cand_res = linalg::residual(&t.apply_cubic_unchecked(&cand), cand_lambda, &cand);
        if cand_res >= residual {
            break;
        }
        y = cand;
        lambda = cand_lambda;
        residual = cand_res;
    }
    (y, lambda, residual)
}

/// Largest C-eigenpair through the lifted tensor: `(μ, y) = z_max(S_A)`,
/// `λ = √μ`, `x = A y y / λ`.
pub fn c_max_via_lift(a: &PiezoTensor, cfg: &SolverConfig) -> Result<CEigenpair> {
    let z = z_max(&a.lift(), cfg)?;
    let mu = if z.lambda < 0.0 {
        if z.lambda < -NEGATIVE_CLAMP {
            return Err(Error::NegativeLiftedEigenvalue { value: z.lambda });
        }
        0.0
    } else {
        z.lambda
    };
    let lambda = mu.sqrt();
    let y = z.y;
    let x = if lambda > ZERO_LAMBDA {
        a.apply_yy_unchecked(&y).iter().map(|v| v / lambda).collect()
    } else {
        left_null_vector(a, &y)
    };
    finish_c(a, CEigenpair { lambda, x, y })
}

/// Unit `x` minimizing `‖x A y‖`, i.e. a left-null vector of `M(y)` when one
/// exists. Taken from the smallest eigenvalue of `M(y) M(y)ᵀ`.
pub fn left_null_vector(a: &PiezoTensor, y: &[f64]) -> Vec<f64> {
    let n = a.n();
    let m = a.contract_last(y);
    let mut g = vec![0.0; n * n];
    for p in 0..n {
        for q in p..n {
            let v = linalg::dot(&m[p * n..(p + 1) * n], &m[q * n..(q + 1) * n]);
            g[p * n + q] = v;
            g[q * n + p] = v;
        }
    }
    linalg::sym_eigen(&g, n, 1e-14).vectors.swap_remove(0)
}

fn finish_c(a: &PiezoTensor, pair: CEigenpair) -> Result<CEigenpair> {
    let (r1, r2) = pair.residuals(a)?;
    let worst = r1.max(r2);
    if worst > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            best_residual: worst,
        });
    }
    Ok(pair)
}

/// Largest C-eigenpair by multi-start block ascent on `x A y y`.
///
/// For fixed `y` the best `x` is `A y y / ‖A y y‖`; for fixed `x` one
/// shifted power step on `N(x) + ‖N(x)‖_F I` raises `yᵀ N(x) y`. The
/// objective is therefore nondecreasing.
pub fn c_max_alternating(a: &PiezoTensor, cfg: &SolverConfig) -> Result<CEigenpair> {
    cfg.validate()?;
    match search_c(a, cfg, cfg.starts) {
        Ok(best) => Ok(best),
        Err(_) => search_c(a, cfg, 2 * cfg.starts)
            .map_err(|best_residual| Error::NoConvergence { best_residual }),
    }
}

fn search_c(a: &PiezoTensor, cfg: &SolverConfig, starts: usize) -> std::result::Result<CEigenpair, f64> {
    let n = a.n();
    let scale = a.frobenius_norm();
    let stop = cfg.tol * scale;
    let mut best: Option<CEigenpair> = None;
    let mut best_residual = f64::INFINITY;

    for mut y in cfg.start_vectors(n, starts) {
        let mut obj = linalg::norm2(&a.apply_yy_unchecked(&y));
        let mut x = best_left(a, &y);
        for _ in 0..cfg.max_iters {
            let nx = a.contract_first(&x);
            let shift = linalg::frobenius(&nx);
            if shift == 0.0 {
                break;
            }
            let mut next: Vec<f64> = (0..n)
                .map(|j| linalg::dot(&nx[j * n..(j + 1) * n], &y) + shift * y[j])
                .collect();
            if linalg::normalize(&mut next) == 0.0 {
                break;
            }
            y = next;
            x = best_left(a, &y);
            let value = linalg::norm2(&a.apply_yy_unchecked(&y));
            let gain = value - obj;
            obj = value;
            if gain <= stop {
                break;
            }
        }
        let y = polish_c(a, y);
        let pair = c_pair_from_right(a, y);
        let Ok((r1, r2)) = pair.residuals(a) else {
            continue;
        };
        let residual = r1.max(r2);
        best_residual = best_residual.min(residual);
        if residual > RESIDUAL_TOL {
            continue;
        }
        if best.as_ref().is_none_or(|b| pair.lambda > b.lambda) {
            best = Some(pair);
        }
    }
    best.ok_or(best_residual)
}

fn best_left(a: &PiezoTensor, y: &[f64]) -> Vec<f64> {
    let mut x = a.apply_yy_unchecked(y);
    if linalg::normalize(&mut x) <= ZERO_LAMBDA {
        return left_null_vector(a, y);
    }
    x
}

fn c_pair_from_right(a: &PiezoTensor, y: Vec<f64>) -> CEigenpair {
    let ayy = a.apply_yy_unchecked(&y);
    let lambda = linalg::norm2(&ayy);
    let x = if lambda > ZERO_LAMBDA {
        ayy.iter().map(|v| v / lambda).collect()
    } else {
        left_null_vector(a, &y)
    };
    CEigenpair { lambda, x, y }
}

/// Gauss–Newton on the full C-system in `(x, y, λ)`, keeping a step only if
/// it lowers `‖x A y − λ y‖` for the induced `x = A y y / ‖A y y‖`.
fn polish_c(a: &PiezoTensor, mut y: Vec<f64>) -> Vec<f64> {
    let n = a.n();
    let scale = a.frobenius_norm();
    let right_residual = |y: &[f64]| {
        let p = c_pair_from_right(a, y.to_vec());
        linalg::residual(&a.apply_xay_unchecked(&p.x, &p.y), p.lambda, &p.y)
    };
    let mut residual = right_residual(&y);
    let cols = 2 * n + 1;
    let rows = 2 * n + 2;
    for _ in 0..POLISH_STEPS {
        if residual <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        let p = c_pair_from_right(a, y.clone());
        if p.lambda <= ZERO_LAMBDA {
            break;
        }
        let (x, lambda) = (&p.x, p.lambda);
        let m = a.contract_last(&y);
        let nx = a.contract_first(x);
        let ayy = a.apply_yy_unchecked(&y);
        let xay = a.apply_xay_unchecked(x, &y);

        let mut jac = vec![0.0; rows * cols];
        let mut f = vec![0.0; rows];
        for i in 0..n {
            let r = i;
            jac[r * cols + i] = -lambda;
            for j in 0..n {
                jac[r * cols + n + j] = 2.0 * m[i * n + j];
            }
            jac[r * cols + 2 * n] = -x[i];
            f[r] = ayy[i] - lambda * x[i];

            let r = n + i;
            for j in 0..n {
                jac[r * cols + j] = m[j * n + i];
                jac[r * cols + n + j] = nx[i * n + j] - if i == j { lambda } else { 0.0 };
            }
            jac[r * cols + 2 * n] = -y[i];
            f[r] = xay[i] - lambda * y[i];
        }
        for j in 0..n {
            jac[(2 * n) * cols + j] = x[j];
            jac[(2 * n + 1) * cols + n + j] = y[j];
        }
        f[2 * n] = (linalg::dot(x, x) - 1.0) / 2.0;
        f[2 * n + 1] = (linalg::dot(&y, &y) - 1.0) / 2.0;
        let neg_f: Vec<f64> = f.iter().map(|v| -v).collect();
        let Some(d) = linalg::least_squares(&jac, rows, cols, &neg_f) else {
            break;
        };
        let mut cand: Vec<f64> = (0..n).map(|j| y[j] + d[n + j]).collect();
        if linalg::normalize(&mut cand) == 0.0 {
            break;
        }
        let cand_res = right_residual(&cand);
        if cand_res >= residual {
            break;
        }
        y = cand;
        residual = cand_res;
    }
    y
}

/// Nodes of the `2R × R` azimuth-by-polar grid, polar angles at cell
/// centers so neither pole is sampled.
fn sphere_grid(resolution: usize) -> impl Iterator<Item = [f64; 3]> {
    let r = resolution as f64;
    (0..2 * resolution).flat_map(move |a| {
        let phi = std::f64::consts::PI * a as f64 / r;
        let (sp, cp) = phi.sin_cos();
        (0..resolution).map(move |b| {
            let theta = std::f64::consts::PI * (b as f64 + 0.5) / r;
            let (st, ct) = theta.sin_cos();
            [st * cp, st * sp, ct]
        })
    })
}

fn check_oracle_args(n: usize, resolution: usize) -> Result<()> {
    if n != 3 {
        return Err(Error::UnsupportedDimension { n });
    }
    if resolution < 100 {
        return Err(Error::InvalidConfig(format!(
            "grid resolution must be at least 100, got {resolution}"
        )));
    }
    Ok(())
}

/// Brute-force `(min, max)` of `T y⁴` over the sphere grid (n = 3).
///
/// The quartic is expanded into its 15 distinct monomials with multinomial
/// weights rather than summed over all 81 entries.
pub fn grid_oracle_z(t: &SymTensor4, resolution: usize) -> Result<(f64, f64)> {
    check_oracle_args(t.n(), resolution)?;
    let mut terms = Vec::with_capacity(15);
    for p in 0..3 {
        for q in p..3 {
            for r in q..3 {
                for s in r..3 {
                    let idx = [p, q, r, s];
                    let mut counts = [0u32; 3];
                    idx.iter().for_each(|&i| counts[i] += 1);
                    let fact = |k: u32| (1..=k).product::<u32>() as f64;
                    let weight = 24.0 / counts.iter().map(|&c| fact(c)).product::<f64>();
                    terms.push((weight * t.get(p, q, r, s), counts));
                }
            }
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in sphere_grid(resolution) {
        let v: f64 = terms
            .iter()
            .map(|(w, c)| w * y[0].powi(c[0] as i32) * y[1].powi(c[1] as i32) * y[2].powi(c[2] as i32))
            .sum();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Brute-force `max ‖A y y‖₂` over the sphere grid (n = 3); for fixed `y`
/// the optimal `x` is `A y y / ‖A y y‖`, so this is the largest C-eigenvalue
/// up to grid resolution.
pub fn grid_oracle_c(a: &PiezoTensor, resolution: usize) -> Result<f64> {
    check_oracle_args(a.n(), resolution)?;
    let mut hi = 0.0f64;
    for y in sphere_grid(resolution) {
        let mut sq = 0.0;
        for i in 0..3 {
            let mut v = 0.0;
            for j in 0..3 {
                for k in 0..3 {
                    v += a.get(i, j, k) * y[j] * y[k];
                }
            }
            sq += v * v;
        }
        hi = hi.max(sq.sqrt());
    }
    Ok(hi)
}
