//! Semidefinite-relaxation upper bound on the centralized sum-rate.
//!
//! The sum of received signal powers is a Hermitian quadratic form in the
//! unit-modulus reflection coefficients. Homogenizing with one extra
//! variable and dropping the rank constraint leaves the classic
//! diagonally-constrained SDP, solved here by ADMM with eigenvalue-clipping
//! projections. The reported bound never relies on solver convergence: a
//! dual certificate built from the final iterate is shifted until it is
//! provably feasible, so the returned value is a valid upper bound even when
//! the iteration stops early.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::channel::{ChannelRealization, PowerConfig};
use crate::distributed::rate;
use crate::{Error, Result};

/// Homogenized quadratic form for the sum of received powers:
/// `s(v) = x^H Q x + constant` with `x = [v; 1]`, `v` the vector of
/// reflection coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SdrProblem {
    /// Hermitian matrix of size `(m + 1) x (m + 1)`, row-major.
    pub q: Vec<Complex64>,
    /// Side length `m + 1`.
    pub n: usize,
    /// Power collected over the direct links alone.
    pub constant: f64,
    /// Noise power, kept for the rate conversion.
    pub noise: f64,
}

impl SdrProblem {
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.q[i * self.n + j]
    }

    /// Evaluates `s(v)` for explicit reflection coefficients.
    pub fn evaluate(&self, v: &[Complex64]) -> Result<f64> {
        if v.len() + 1 != self.n {
            return Err(Error::Config("coefficient count does not match the form"));
        }
        let mut x: Vec<Complex64> = v.to_vec();
        x.push(Complex64::ONE);
        let mut acc = Complex64::ZERO;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += x[i].conj() * self.at(i, j) * x[j];
            }
        }
        Ok(acc.re + self.constant)
    }
}

/// Builds the homogenized form from a channel realization and transmit
/// powers (centralized deployment).
pub fn build_sdr(ch: &ChannelRealization, powers: &PowerConfig) -> Result<SdrProblem> {
    ch.validate()?;
    let m = ch.sizes.m;
    let n = m + 1;
    let mut q = vec![Complex64::ZERO; n * n];
    let mut constant = 0.0;
    for k in 0..2 {
        let p = [powers.p1, powers.p2][k];
        let hbar = ch.direct[k];
        constant += p * hbar.norm_sqr();
        // qk[i] so that the reflected part of the channel is qk^H v.
        let qk: Vec<Complex64> = (0..m)
            .map(|i| (ch.cent_irs_to_ap[i] * ch.cent_user_to_irs[k][i]).conj())
            .collect();
        for i in 0..m {
            for j in 0..m {
                q[i * n + j] += p * qk[i] * qk[j].conj();
            }
            let cross = p * hbar * qk[i];
            q[i * n + m] += cross;
            q[m * n + i] += cross.conj();
        }
    }
    Ok(SdrProblem {
        q,
        n,
        constant,
        noise: powers.noise,
    })
}

/// Outcome of the relaxation solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SdrSolution {
    /// Certified upper bound on the maximal sum of received powers.
    pub s_star: f64,
    /// Relaxed Gram matrix (`(m + 1)^2` entries, row-major), positive
    /// semidefinite with unit diagonal up to round-off.
    pub w: Vec<Complex64>,
    /// Relative duality gap between the certificate and the iterate's
    /// primal value; a convergence diagnostic, not a validity condition.
    pub gap: f64,
    pub iterations: usize,
}

/// Real symmetric embedding of a complex Hermitian matrix given row-major.
fn embed(q: &[Complex64], n: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = q[i * n + j];
            x[(i, j)] = z.re;
            x[(i, j + n)] = -z.im;
            x[(i + n, j)] = z.im;
            x[(i + n, j + n)] = z.re;
        }
    }
    x
}

fn project_psd(a: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut out = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam > 0.0 {
            let v = eig.eigenvectors.column(k);
            out += v * v.transpose() * lam;
        }
    }
    out
}

fn lambda_max_hermitian(q: &[Complex64], n: usize) -> f64 {
    let x = embed(q, n);
    let eig = SymmetricEigen::new(x);
    eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Solves the relaxation. Returns `Err(Error::SdrNotConverged)` carrying the
/// (still valid) certified bound when the relative gap exceeds `tol`.
pub fn solve_sdr(prob: &SdrProblem, tol: f64) -> Result<SdrSolution> {
    if !(tol > 0.0) {
        return Err(Error::Config("gap tolerance must be positive"));
    }
    let n = prob.n;
    let d = 2 * n;
    let c_embed = embed(&prob.q, n) * 0.5;
    let scale = {
        let f = c_embed.norm();
        if f > 0.0 {
            f
        } else {
            1.0
        }
    };
    let c_scaled = &c_embed / scale;

    // ADMM on: maximize tr(C S) subject to diag(S) = 1, S PSD.
    let mut s = DMatrix::<f64>::identity(d, d);
    let mut z = s.clone();
    let mut u = DMatrix::<f64>::zeros(d, d);
    let mut iterations = 0;
    let max_iters = 600;
    for it in 0..max_iters {
        iterations = it + 1;
        let mut s_new = &z - &u + &c_scaled;
        for i in 0..d {
            s_new[(i, i)] = 1.0;
        }
        let z_new = project_psd(&(&s_new + &u));
        let primal_res = (&s_new - &z_new).norm();
        let dual_res = (&z_new - &z).norm();
        s = s_new;
        z = z_new;
        u += &s - &z;
        if primal_res < 1e-8 * d as f64 && dual_res < 1e-8 * d as f64 {
            break;
        }
    }

    // De-embed the PSD iterate into a complex Gram matrix and symmetrize.
    let mut w = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let re = 0.5 * (z[(i, j)] + z[(i + n, j + n)]);
            let im = 0.5 * (z[(i + n, j)] - z[(i, j + n)]);
            w[i * n + j] = Complex64::new(re, im);
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (w[i * n + j] + w[j * n + i].conj());
            w[i * n + j] = avg;
            w[j * n + i] = avg.conj();
        }
        w[i * n + i] = Complex64::new(w[i * n + i].re, 0.0);
    }

    // Primal value of the iterate (diagnostic only).
    let mut primal = 0.0;
    for i in 0..n {
        for j in 0..n {
            primal += (prob.at(i, j) * w[j * n + i]).re;
        }
    }

    // Dual certificate: y_i = Re((Q W)_ii), then shift until
    // Diag(y) - Q is PSD. The shifted certificate is feasible for the dual
    // regardless of how well the ADMM iterate converged.
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut acc = Complex64::ZERO;
        for j in 0..n {
            acc += prob.at(i, j) * w[j * n + i];
        }
        y[i] = acc.re;
    }
    let mut shifted: Vec<Complex64> = prob.q.clone();
    for i in 0..n {
        shifted[i * n + i] -= Complex64::new(y[i], 0.0);
    }
    let shift = lambda_max_hermitian(&shifted, n).max(0.0);
    let bound_tr = y.iter().sum::<f64>() + shift * n as f64;
    let s_star = prob.constant + bound_tr.max(0.0);
    let gap = (bound_tr - primal).abs() / (1.0 + bound_tr.abs());

    if gap > tol {
        return Err(Error::SdrNotConverged { bound: s_star, gap });
    }
    Ok(SdrSolution {
        s_star,
        w,
        gap,
        iterations,
    })
}

/// Certified upper bound on the centralized two-user sum-rate, in bits/s/Hz.
/// Uses the certified bound even when the solver reports a large residual
/// gap, since the certificate is valid either way.
pub fn sum_rate_upper_bound(
    ch: &ChannelRealization,
    powers: &PowerConfig,
    tol: f64,
) -> Result<f64> {
    let prob = build_sdr(ch, powers)?;
    let s = match solve_sdr(&prob, tol) {
        Ok(sol) => sol.s_star,
        Err(Error::SdrNotConverged { bound, .. }) => bound,
        Err(e) => return Err(e),
    };
    Ok(rate(s / powers.noise))
}
