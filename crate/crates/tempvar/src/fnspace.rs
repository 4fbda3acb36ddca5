//! Discrete realization of the zero-boundary tempered Sobolev-type space:
//! elements with vanishing endpoint values, the norm combining the L² norms
//! of the function and of its left tempered Caputo derivative, embedding
//! and Poincaré diagnostics, and an interior hat-function Galerkin basis.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::Serialize;

use crate::grid::{l2_inner, GridFunction, TemperedParams};
use crate::specfun::{gamma_fn, lower_incomplete_gamma};
use crate::tempered_ops::left_caputo_derivative;
use crate::{Error, Result};

/// A grid function with u(a) = u(b) = 0, together with its cached left
/// tempered Caputo derivative (reused by every functional evaluation).
#[derive(Debug, Clone)]
pub struct SpaceElement {
    pub u: GridFunction,
    pub caputo: GridFunction,
}

fn check_space_params(params: &TemperedParams) -> Result<()> {
    if !(params.alpha > 0.5 && params.alpha < 1.0) {
        return Err(Error::Domain(format!(
            "space elements require alpha in (1/2, 1), got {}",
            params.alpha
        )));
    }
    if params.sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "space elements require sigma > 0, got {}",
            params.sigma
        )));
    }
    Ok(())
}

impl SpaceElement {
    pub fn new(u: GridFunction) -> Result<Self> {
        check_space_params(&u.params)?;
        let n = u.n();
        if u.values[0] != 0.0 || u.values[n] != 0.0 {
            return Err(Error::Domain(format!(
                "boundary values must vanish exactly, got u(a)={}, u(b)={}",
                u.values[0], u.values[n]
            )));
        }
        let caputo = left_caputo_derivative(&u)?;
        Ok(Self { u, caputo })
    }

    pub fn zeros(params: TemperedParams, n: usize) -> Result<Self> {
        Self::new(GridFunction::zeros(params, n))
    }

    /// Build from interior nodal values (boundary nodes are zero).
    pub fn from_interior(params: TemperedParams, interior: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(interior.len() + 2);
        values.push(0.0);
        values.extend_from_slice(interior);
        values.push(0.0);
        Self::new(GridFunction::new(params, values)?)
    }

    /// Sample a function at the nodes; it must vanish at both endpoints to
    /// within roundoff, and the endpoint nodes are clamped to exactly zero.
    pub fn from_fn(params: TemperedParams, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut u = GridFunction::from_fn(params, n, f);
        if u.values[0].abs() > 1e-12 || u.values[n].abs() > 1e-12 {
            return Err(Error::Domain("function does not vanish at the endpoints".into()));
        }
        u.values[0] = 0.0;
        u.values[n] = 0.0;
        Self::new(u)
    }

    pub fn params(&self) -> TemperedParams {
        self.u.params
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn interior(&self) -> &[f64] {
        &self.u.values[1..self.u.n()]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { u: self.u.scaled(c), caputo: self.caputo.scaled(c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { u: self.u.add(&other.u)?, caputo: self.caputo.add(&other.caputo)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { u: self.u.sub(&other.u)?, caputo: self.caputo.sub(&other.caputo)? })
    }
}

/// Space norm (‖u‖²_{L²} + ‖ᶜ𝔻u‖²_{L²})^{1/2} with trapezoidal quadrature.
pub fn norm(u: &SpaceElement) -> f64 {
    inner_product_unchecked(u, u).sqrt()
}

/// Space inner product ⟨u,v⟩_{L²} + ⟨ᶜ𝔻u, ᶜ𝔻v⟩_{L²}.
pub fn inner_product(u: &SpaceElement, v: &SpaceElement) -> Result<f64> {
    u.u.check_same_grid(&v.u)?;
    Ok(inner_product_unchecked(u, v))
}

fn inner_product_unchecked(u: &SpaceElement, v: &SpaceElement) -> f64 {
    let h = u.u.h();
    l2_inner(h, &u.u.values, &v.u.values) + l2_inner(h, &u.caputo.values, &v.caputo.values)
}

/// The continuous-embedding constant
/// √(γ(2α−1, 2σ(b−a))) / ((2σ)^{α−1/2} Γ(α)), requiring α ∈ (1/2, 1).
pub fn embedding_constant(params: TemperedParams) -> Result<f64> {
    check_space_params(&params)?;
    let alpha = params.alpha;
    let sigma = params.sigma;
    let g = lower_incomplete_gamma(2.0 * alpha - 1.0, 2.0 * sigma * params.width())?;
    Ok(g.sqrt() / ((2.0 * sigma).powf(alpha - 0.5) * gamma_fn(alpha)?))
}

/// One inequality check, JSON-serializable.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub check: String,
    pub params: TemperedParams,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Check ‖u‖_∞ ≤ C·‖u‖ with 2% discretization slack.
pub fn check_embedding(u: &SpaceElement) -> Result<Diagnostic> {
    let c = embedding_constant(u.params())?;
    let lhs = u.u.max_norm();
    let rhs = c * norm(u);
    Ok(Diagnostic {
        check: "embedding".into(),
        params: u.params(),
        lhs,
        rhs,
        pass: lhs <= rhs * 1.02,
    })
}

/// The measured Poincaré ratio ‖u‖_{L²} / ‖ᶜ𝔻u‖_{L²}. No closed-form
/// constant is asserted; the suite only tracks boundedness and stability
/// of this ratio under refinement.
#[derive(Debug, Clone, Serialize)]
pub struct PoincareDiagnostic {
    pub check: String,
    pub params: TemperedParams,
    pub ratio: f64,
}

pub fn check_poincare(u: &SpaceElement) -> Result<PoincareDiagnostic> {
    let num = u.u.l2_norm();
    let den = u.caputo.l2_norm();
    if num == 0.0 && den == 0.0 {
        return Err(Error::Domain("poincare ratio undefined for the zero element".into()));
    }
    Ok(PoincareDiagnostic { check: "poincare".into(), params: u.params(), ratio: num / den })
}

/// Interior hat-function Galerkin basis on an n-interval grid: n−1 basis
/// functions, their cached Caputo derivatives (as matrix columns), and the
/// Cholesky-factored Gram matrix of the space inner product.
pub struct BasisSet {
    pub params: TemperedParams,
    pub n: usize,
    /// (n+1) × (n−1): column j holds the nodal values of hat φ_{j+1}.
    pub values: DMatrix<f64>,
    /// (n+1) × (n−1): column j holds ᶜ𝔻 φ_{j+1} at the nodes.
    pub derivative_matrix: DMatrix<f64>,
    pub gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl BasisSet {
    pub fn new(params: TemperedParams, n: usize) -> Result<Self> {
        check_space_params(&params)?;
        if n < 4 {
            return Err(Error::Domain("basis needs n >= 4".into()));
        }
        let m = n - 1;
        let mut values = DMatrix::<f64>::zeros(n + 1, m);
        let mut derivative_matrix = DMatrix::<f64>::zeros(n + 1, m);
        for j in 0..m {
            let mut phi = GridFunction::zeros(params, n);
            phi.values[j + 1] = 1.0;
            let d = left_caputo_derivative(&phi)?;
            for i in 0..=n {
                values[(i, j)] = phi.values[i];
                derivative_matrix[(i, j)] = d.values[i];
            }
        }
        let h = params.width() / n as f64;
        let mut gram = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let vi: Vec<f64> = values.column(i).iter().copied().collect();
                let vj: Vec<f64> = values.column(j).iter().copied().collect();
                let di: Vec<f64> = derivative_matrix.column(i).iter().copied().collect();
                let dj: Vec<f64> = derivative_matrix.column(j).iter().copied().collect();
                let g = l2_inner(h, &vi, &vj) + l2_inner(h, &di, &dj);
                gram[(i, j)] = g;
                gram[(j, i)] = g;
            }
        }
        let chol = Cholesky::new(gram.clone())
            .ok_or_else(|| Error::LinearSolve("gram matrix not positive definite".into()))?;
        Ok(Self { params, n, values, derivative_matrix, gram, chol })
    }

    /// Hat interpolation: coefficients of an element are its interior
    /// nodal values.
    pub fn coefficients(&self, u: &SpaceElement) -> Result<Vec<f64>> {
        if u.n() != self.n || u.params() != self.params {
            return Err(Error::GridMismatch("element does not live on the basis grid".into()));
        }
        Ok(u.interior().to_vec())
    }

    pub fn element(&self, coeffs: &[f64]) -> Result<SpaceElement> {
        if coeffs.len() != self.n - 1 {
            return Err(Error::GridMismatch(format!(
                "expected {} coefficients, got {}",
                self.n - 1,
                coeffs.len()
            )));
        }
        SpaceElement::from_interior(self.params, coeffs)
    }

    /// Solve Gram · c = rhs (the Riesz-representation system).
    pub fn gram_solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n - 1 {
            return Err(Error::GridMismatch("rhs length mismatch".into()));
        }
        let x = self.chol.solve(&DVector::from_column_slice(rhs));
        Ok(x.as_slice().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> TemperedParams {
        TemperedParams::new(0.75, 1.0, 0.0, 1.0).unwrap()
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    /// Random smooth zero-boundary element: low-frequency sine combination
    /// with LCG coefficients, so the same seed gives the same function on
    /// every grid.
    fn random_smooth(p: TemperedParams, n: usize, state: &mut u64) -> SpaceElement {
        let c: Vec<f64> = (0..6).map(|_| lcg(state)).collect();
        SpaceElement::from_fn(p, n, |t| {
            let s = (t - p.a) / p.width();
            c.iter()
                .enumerate()
                .map(|(k, ck)| ck * ((k + 1) as f64 * std::f64::consts::PI * s).sin())
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn rejects_bad_params_and_boundaries() {
        let p_low = TemperedParams::new(0.4, 1.0, 0.0, 1.0).unwrap();
        assert!(SpaceElement::zeros(p_low, 16).is_err());
        let p_nosigma = TemperedParams::new(0.75, 0.0, 0.0, 1.0).unwrap();
        assert!(SpaceElement::zeros(p_nosigma, 16).is_err());
        let bad = GridFunction::from_fn(params(), 16, |_| 1.0);
        assert!(SpaceElement::new(bad).is_err());
    }

    #[test]
    fn norm_of_zero_and_homogeneity() {
        let z = SpaceElement::zeros(params(), 64).unwrap();
        assert_eq!(norm(&z), 0.0);
        let mut state = 7u64;
        let u = random_smooth(params(), 64, &mut state);
        let c = -2.75;
        assert!((norm(&u.scaled(c)) - c.abs() * norm(&u)).abs() < 1e-12);
    }

    #[test]
    fn norm_squared_equals_self_inner_product() {
        let mut state = 3u64;
        let u = random_smooth(params(), 128, &mut state);
        let ip = inner_product(&u, &u).unwrap();
        assert!((ip - norm(&u) * norm(&u)).abs() < 1e-12 * ip.abs().max(1.0));
    }

    #[test]
    fn midpoint_hat_norm_fine_grid_oracle() {
        // Tent peaked at the midpoint, evaluated on n = 256 and n = 4096
        // (nodes align); the fine grid is the oracle.
        let p = params();
        let hat = move |t: f64| (1.0 - 2.0 * (t - 0.5).abs()).max(0.0);
        let coarse = SpaceElement::from_fn(p, 256, hat).unwrap();
        let fine = SpaceElement::from_fn(p, 4096, hat).unwrap();
        let (nc, nf) = (norm(&coarse), norm(&fine));
        let rel = (nc - nf).abs() / nf;
        assert!(rel < 1e-3, "coarse {nc} vs fine {nf}, rel {rel}");
    }

    #[test]
    fn inner_product_zero_symmetry_cauchy_schwarz() {
        let p = params();
        let z = SpaceElement::zeros(p, 64).unwrap();
        let mut state = 11u64;
        for _ in 0..100 {
            let u = random_smooth(p, 64, &mut state);
            let v = random_smooth(p, 64, &mut state);
            assert_eq!(inner_product(&u, &z).unwrap(), 0.0);
            let uv = inner_product(&u, &v).unwrap();
            let vu = inner_product(&v, &u).unwrap();
            assert_eq!(uv, vu, "inner product must be exactly symmetric");
            assert!(uv.abs() <= norm(&u) * norm(&v) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn embedding_constant_values() {
        // (α,σ,a,b) = (0.75,1,0,1): √(γ(0.5,2)) / (2^{0.25} Γ(0.75))
        let c = embedding_constant(params()).unwrap();
        let expect = lower_incomplete_gamma(0.5, 2.0).unwrap().sqrt()
            / (2.0f64.powf(0.25) * gamma_fn(0.75).unwrap());
        assert!((c - expect).abs() < 1e-14);
        // monotone in b−a
        let wide = TemperedParams::new(0.75, 1.0, 0.0, 2.0).unwrap();
        assert!(embedding_constant(wide).unwrap() >= c);
        // α → 1⁻ limit: √((1−e^{−2σ(b−a)})/(2σ))
        let near1 = TemperedParams::new(1.0 - 1e-9, 1.0, 0.0, 1.0).unwrap();
        let lim = ((1.0 - (-2.0f64).exp()) / 2.0).sqrt();
        assert!((embedding_constant(near1).unwrap() - lim).abs() < 1e-6);
        // domain error below 1/2
        let bad = TemperedParams::new(0.5, 1.0, 0.0, 1.0).unwrap();
        assert!(embedding_constant(bad).is_err());
    }

    #[test]
    fn embedding_zero_element_passes() {
        let d = check_embedding(&SpaceElement::zeros(params(), 32).unwrap()).unwrap();
        assert!(d.pass);
        assert_eq!(d.lhs, 0.0);
    }

    #[test]
    fn embedding_random_jacobi_smoothed() {
        // 100 random interior vectors, one Jacobi smoothing sweep each.
        let p = params();
        let n = 256;
        let mut state = 42u64;
        for _ in 0..100 {
            let mut interior: Vec<f64> = (0..n - 1).map(|_| lcg(&mut state)).collect();
            let padded: Vec<f64> = std::iter::once(0.0)
                .chain(interior.iter().copied())
                .chain(std::iter::once(0.0))
                .collect();
            for i in 0..n - 1 {
                interior[i] = 0.5 * padded[i] + 0.5 * padded[i + 2];
            }
            let u = SpaceElement::from_interior(p, &interior).unwrap();
            let d = check_embedding(&u).unwrap();
            assert!(d.pass, "embedding violated: lhs {} rhs {}", d.lhs, d.rhs);
        }
    }

    #[test]
    fn embedding_midpoint_hat() {
        let p = params();
        let u = SpaceElement::from_fn(p, 256, |t| (1.0 - (t - 0.5).abs() * 256.0).max(0.0))
            .unwrap();
        assert!(check_embedding(&u).unwrap().pass);
    }

    #[test]
    fn poincare_hat_and_scaling_invariance() {
        let p = params();
        let u = SpaceElement::from_fn(p, 256, |t| (1.0 - (t - 0.5).abs() * 2.0).max(0.0) )
            .unwrap();
        let r = check_poincare(&u).unwrap().ratio;
        assert!(r.is_finite() && r > 0.0);
        // power-of-two scale: exact floating-point homogeneity
        let r2 = check_poincare(&u.scaled(4.0)).unwrap().ratio;
        assert_eq!(r, r2);
        assert!(check_poincare(&SpaceElement::zeros(p, 16).unwrap()).is_err());
    }

    #[test]
    fn poincare_sample_max_stable_under_refinement() {
        let p = params();
        let max_at = |n: usize| {
            let mut state = 1234u64;
            (0..200)
                .map(|_| check_poincare(&random_smooth(p, n, &mut state)).unwrap().ratio)
                .fold(0.0f64, f64::max)
        };
        let (m256, m512) = (max_at(256), max_at(512));
        assert!(
            (m256 - m512).abs() / m512 < 0.10,
            "poincare sample max drifted: {m256} vs {m512}"
        );
    }

    #[test]
    fn basis_interpolation_identity() {
        let p = params();
        let basis = BasisSet::new(p, 32).unwrap();
        let mut state = 5u64;
        let u = random_smooth(p, 32, &mut state);
        let coeffs = basis.coefficients(&u).unwrap();
        let back = basis.element(&coeffs).unwrap();
        assert_eq!(back.u.values, u.u.values);
    }

    #[test]
    fn gram_solve_inverts_gram() {
        let p = params();
        let basis = BasisSet::new(p, 24).unwrap();
        let mut state = 9u64;
        let rhs: Vec<f64> = (0..23).map(|_| lcg(&mut state)).collect();
        let c = basis.gram_solve(&rhs).unwrap();
        let back = &basis.gram * DVector::from_column_slice(&c);
        for i in 0..23 {
            assert!((back[i] - rhs[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn diagnostics_serialize() {
        let d = check_embedding(&SpaceElement::zeros(params(), 16).unwrap()).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"check\":\"embedding\""));
        assert!(json.contains("\"pass\":true"));
    }
}
