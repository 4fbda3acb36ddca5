//! Galerkin solver for the linear tempered boundary value problem
//! 𝔻_{b−}(𝔻_{a+}u) + u = f with u(a) = u(b) = 0.
//!
//! The weak form is posed on the interior hat basis; since every hat
//! vanishes at t = a, its left RL derivative coincides with the Caputo one
//! and the bilinear form is the space inner product itself: fractional
//! stiffness plus mass. The forward map manufactures a forcing term from a
//! chosen solution on a finer grid, so solver error stays measurable.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use crate::fnspace::{BasisSet, SpaceElement};
use crate::grid::{trapezoid_weights, GridFunction, TemperedParams};
use crate::tempered_ops::{left_caputo_derivative, right_rl_derivative};
use crate::{Error, Result};

/// Assembled Galerkin system A c = rhs over the interior hat basis.
pub struct BilinearSystem {
    pub params: TemperedParams,
    pub n: usize,
    /// (n−1) × (n−1), symmetric positive definite.
    pub a_mat: DMatrix<f64>,
    pub rhs: DVector<f64>,
    basis: BasisSet,
    chol: Cholesky<f64, Dyn>,
}

/// Assemble the weak form: A_ij = ∫ ᶜ𝔻φ_i ᶜ𝔻φ_j + ∫ φ_i φ_j,
/// rhs_i = ∫ f φ_i, all with trapezoidal quadrature.
pub fn assemble(params: TemperedParams, n: usize, f: &GridFunction) -> Result<BilinearSystem> {
    if f.n() != n || f.params != params {
        return Err(Error::GridMismatch("forcing term does not live on the target grid".into()));
    }
    let basis = BasisSet::new(params, n)?;
    // The hat basis vanishes at a, so the RL derivative in the form equals
    // the Caputo derivative and the system matrix is exactly the Gram
    // matrix of the space inner product.
    let mut a_mat = basis.gram.clone();
    // enforce exact symmetry against roundoff
    for i in 0..n - 1 {
        for j in 0..i {
            let s = 0.5 * (a_mat[(i, j)] + a_mat[(j, i)]);
            a_mat[(i, j)] = s;
            a_mat[(j, i)] = s;
        }
    }
    let h = params.width() / n as f64;
    let w = trapezoid_weights(h, n + 1);
    let mut rhs = DVector::zeros(n - 1);
    for j in 0..n - 1 {
        // hat φ_{j+1} is 1 at node j+1 and 0 elsewhere, so the trapezoidal
        // pairing collapses to a single weighted node value
        rhs[j] = w[j + 1] * f.values[j + 1];
    }
    let chol = Cholesky::new(a_mat.clone()).ok_or_else(|| {
        Error::LinearSolve("stiffness-plus-mass matrix lost positive definiteness".into())
    })?;
    Ok(BilinearSystem { params, n, a_mat, rhs, basis, chol })
}

/// Solve the assembled system by dense Cholesky.
pub fn solve(system: &BilinearSystem) -> Result<SpaceElement> {
    let c = system.chol.solve(&system.rhs);
    system.basis.element(c.as_slice())
}

/// Max residual of Galerkin orthogonality, max_i |a(u_h, φ_i) − φ(φ_i)|.
pub fn galerkin_orthogonality(system: &BilinearSystem, u: &SpaceElement) -> Result<f64> {
    let c = DVector::from_column_slice(&system.basis.coefficients(u)?);
    let res = &system.a_mat * c - &system.rhs;
    Ok(res.amax())
}

/// Energy identity gap |a(u_h, u_h) − φ(u_h)|.
pub fn energy_identity_gap(system: &BilinearSystem, u: &SpaceElement) -> Result<f64> {
    let c = DVector::from_column_slice(&system.basis.coefficients(u)?);
    let a_uu = (&system.a_mat * &c).dot(&c);
    let phi_u = system.rhs.dot(&c);
    Ok((a_uu - phi_u).abs())
}

/// Manufacture the forcing f = 𝔻_{b−}(𝔻_{a+}u*) (+ u* when
/// `include_zero_order`) for an analytically given u* with u*(a) = 0.
///
/// Computed on a fine grid of `n_fine` intervals (a multiple of `n`, at
/// least 8n) and restricted to the coarse grid; the value at t = b, where
/// the right RL derivative is singular, is replaced by linear
/// extrapolation from the two preceding coarse nodes.
pub fn forward_map(
    params: TemperedParams,
    u_star: impl Fn(f64) -> f64,
    n: usize,
    n_fine: usize,
    include_zero_order: bool,
) -> Result<GridFunction> {
    if n_fine < 8 * n || n_fine % n != 0 {
        return Err(Error::Domain(format!(
            "fine grid must be a multiple of n with n_fine >= 8n, got n={n}, n_fine={n_fine}"
        )));
    }
    let u_fine = GridFunction::from_fn(params, n_fine, &u_star);
    if u_fine.values[0].abs() > 1e-12 {
        return Err(Error::Domain("manufactured solution must vanish at t = a".into()));
    }
    // u*(a) = 0, so the left RL derivative is the Caputo one
    let du = left_caputo_derivative(&u_fine)?;
    let w = right_rl_derivative(&du)?;
    let stride = n_fine / n;
    let mut values: Vec<f64> = (0..=n).map(|i| w.values[i * stride]).collect();
    for (i, v) in values.iter_mut().enumerate() {
        if include_zero_order {
            *v += u_star(params.a + i as f64 * params.width() / n as f64);
        }
    }
    if !values[n].is_finite() {
        values[n] = 2.0 * values[n - 1] - values[n - 2];
    }
    GridFunction::new(params, values)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2_error: f64,
    /// error(previous n) / error(this n); 1.0 for the first row
    pub ratio: f64,
}

/// Manufactured-solution convergence study over a list of grid sizes.
pub fn convergence_study(
    params: TemperedParams,
    u_star: impl Fn(f64) -> f64 + Copy,
    ns: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in ns {
        let f = forward_map(params, u_star, n, 8 * n, true)?;
        let u_h = solve(&assemble(params, n, &f)?)?;
        let exact = GridFunction::from_fn(params, n, u_star);
        let l2_error = u_h.u.sub(&exact)?.l2_norm();
        let ratio = rows.last().map_or(1.0, |prev: &ConvergenceRow| prev.l2_error / l2_error);
        rows.push(ConvergenceRow { n, l2_error, ratio });
    }
    Ok(rows)
}
