//! Lagrangian functional machinery: evaluation of the action integral, its
//! Gâteaux derivative, the Riesz gradient in the space inner product, the
//! Euler-Lagrange residual, growth-hypothesis falsifiers, a coercivity
//! bound, and a projected-gradient direct minimizer.

use std::sync::Arc;

use serde::Serialize;

use crate::fnspace::{inner_product, norm, BasisSet, SpaceElement};
use crate::grid::{trapezoid, trapezoid_weights, GridFunction, TemperedParams};
use crate::tempered_ops::{integral_l2_bound, right_rl_derivative};
use crate::{Error, Result};

/// A scalar field of (x, y, t) where x is the trajectory value and y its
/// left tempered Caputo derivative.
pub type ScalarMap = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Growth/coercivity metadata declared by the caller. The `r_i`/`s_i`
/// constants are box sup-norms of the corresponding coefficient functions
/// over the sampling box, not global bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthMeta {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub r1: f64,
    pub s1: f64,
    pub r2: f64,
    pub s2: f64,
    pub r3: f64,
    pub s3: f64,
    /// lower bound of the |y|² coefficient in the coercivity condition
    pub zeta: f64,
    /// signed constant bounding the |x|^{d4} coefficient from below
    pub c2: f64,
    /// signed constant bounding the free term from below
    pub c3: f64,
    /// homogeneity exponent of the mountain-pass condition Lx·x + Ly·y ≤ μ·L
    pub mu_l: f64,
    /// constant of the quadratic lower bound L ≥ Λ|y|²
    pub lambda: f64,
}

/// A C¹ Lagrangian with its partial derivatives and optional growth
/// metadata. Construction cross-checks `lx`/`ly` against central finite
/// differences of `l` at fixed sample points.
#[derive(Clone)]
pub struct LagrangianSpec {
    pub name: String,
    pub l: ScalarMap,
    pub lx: ScalarMap,
    pub ly: ScalarMap,
    pub growth: Option<GrowthMeta>,
}

impl LagrangianSpec {
    pub fn new(
        name: impl Into<String>,
        l: ScalarMap,
        lx: ScalarMap,
        ly: ScalarMap,
        growth: Option<GrowthMeta>,
    ) -> Result<Self> {
        let spec = Self { name: name.into(), l, lx, ly, growth };
        spec.check_partials()?;
        Ok(spec)
    }

    /// Central-difference consistency check of the declared partials.
    fn check_partials(&self) -> Result<()> {
        let pts = [-1.3, 0.4, 2.1];
        let ts = [0.15, 0.5, 0.85];
        let h = 1e-5;
        for &x in &pts {
            for &y in &pts {
                for &t in &ts {
                    let fd_x = ((self.l)(x + h, y, t) - (self.l)(x - h, y, t)) / (2.0 * h);
                    let fd_y = ((self.l)(x, y + h, t) - (self.l)(x, y - h, t)) / (2.0 * h);
                    let gx = (self.lx)(x, y, t);
                    let gy = (self.ly)(x, y, t);
                    let tol = |g: f64| 1e-5 * g.abs().max(1.0);
                    if (fd_x - gx).abs() > tol(gx) || (fd_y - gy).abs() > tol(gy) {
                        return Err(Error::Domain(format!(
                            "partials of `{}` disagree with finite differences at ({x},{y},{t})",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Trajectory samples (u_i, ᶜ𝔻u_i, t_i) mapped through a field.
    fn along(&self, field: &ScalarMap, u: &SpaceElement) -> Vec<f64> {
        (0..=u.n())
            .map(|i| field(u.u.values[i], u.caputo.values[i], u.u.node(i)))
            .collect()
    }
}

/// Built-in Lagrangians addressable by name. `forcing` is required by
/// "linear-forced" (interpolated in t); `power` is the exponent of
/// "power".
pub fn catalog(
    name: &str,
    forcing: Option<GridFunction>,
    power: f64,
) -> Result<LagrangianSpec> {
    match name {
        "dirichlet" => LagrangianSpec::new(
            "dirichlet",
            Arc::new(|_x, y, _t| 0.5 * y * y),
            Arc::new(|_x, _y, _t| 0.0),
            Arc::new(|_x, y, _t| y),
            Some(GrowthMeta {
                d1: 2.0,
                d2: 1.0,
                d3: 1.0,
                d4: 1.0,
                r1: 0.5,
                s1: 0.0,
                r2: 0.0,
                s2: 0.0,
                r3: 1.0,
                s3: 0.0,
                zeta: 0.5,
                c2: 0.0,
                c3: 0.0,
                mu_l: 1.5,
                lambda: 0.5,
            }),
        ),
        "linear-forced" => {
            let f = forcing.ok_or_else(|| {
                Error::Domain("linear-forced needs a forcing grid function".into())
            })?;
            let f_sup = f.max_norm();
            let (f1, f2) = (f.clone(), f);
            LagrangianSpec::new(
                "linear-forced",
                Arc::new(move |x, y, t| 0.5 * y * y + 0.5 * x * x - f1.interp(t) * x),
                Arc::new(move |x, _y, t| x - f2.interp(t)),
                Arc::new(|_x, y, _t| y),
                Some(GrowthMeta {
                    d1: 2.0,
                    d2: 1.0,
                    d3: 1.0,
                    d4: 1.0,
                    r1: 0.5,
                    s1: 0.0,
                    r2: 0.0,
                    s2: 5.0 + f_sup,
                    r3: 1.0,
                    s3: 0.0,
                    zeta: 0.5,
                    c2: -f_sup,
                    c3: 0.0,
                    mu_l: 1.5,
                    lambda: 0.5,
                }),
            )
        }
        "double-well" => LagrangianSpec::new(
            "double-well",
            Arc::new(|x, y, _t| 0.5 * y * y + 0.25 * (x * x - 1.0) * (x * x - 1.0)),
            Arc::new(|x, _y, _t| (x * x - 1.0) * x),
            Arc::new(|_x, y, _t| y),
            Some(GrowthMeta {
                d1: 2.0,
                d2: 1.0,
                d3: 1.0,
                d4: 1.0,
                r1: 0.5,
                s1: 0.0,
                r2: 0.0,
                s2: 160.0,
                r3: 1.0,
                s3: 0.0,
                zeta: 0.5,
                c2: 0.0,
                c3: 0.0,
                mu_l: 1.5,
                lambda: 0.5,
            }),
        ),
        "power" => {
            if !(power > 2.0 && power.is_finite()) {
                return Err(Error::Domain(format!(
                    "power Lagrangian needs exponent > 2, got {power}"
                )));
            }
            let p = power;
            LagrangianSpec::new(
                "power",
                Arc::new(move |x, y, _t| 0.5 * y * y - x.abs().powf(p) / p),
                Arc::new(move |x, _y, _t| -x.abs().powf(p - 1.0) * x.signum()),
                Arc::new(|_x, y, _t| y),
                Some(GrowthMeta {
                    d1: 2.0,
                    d2: 1.0,
                    d3: 1.0,
                    d4: 1.0,
                    r1: 0.5,
                    s1: 5.0f64.powf(p) / p,
                    r2: 0.0,
                    s2: 5.0f64.powf(p - 1.0),
                    r3: 1.0,
                    s3: 0.0,
                    zeta: 0.5,
                    c2: 0.0,
                    c3: 0.0,
                    mu_l: p,
                    lambda: 0.5,
                }),
            )
        }
        other => Err(Error::Domain(format!("unknown Lagrangian `{other}`"))),
    }
}

/// The action 𝒥(u) = ∫ L(u, ᶜ𝔻u, t) dt by trapezoidal quadrature.
pub fn evaluate(spec: &LagrangianSpec, u: &SpaceElement) -> Result<f64> {
    let samples = spec.along(&spec.l, u);
    if !samples.iter().all(|v| v.is_finite()) {
        return Err(Error::Computation(format!(
            "Lagrangian `{}` produced a non-finite value",
            spec.name
        )));
    }
    Ok(trapezoid(u.u.h(), &samples))
}

/// D𝒥(u)v = ∫ [Lx·v + Ly·ᶜ𝔻v] dt.
pub fn gateaux_derivative(
    spec: &LagrangianSpec,
    u: &SpaceElement,
    v: &SpaceElement,
) -> Result<f64> {
    u.u.check_same_grid(&v.u)?;
    let lx = spec.along(&spec.lx, u);
    let ly = spec.along(&spec.ly, u);
    if !lx.iter().chain(&ly).all(|v| v.is_finite()) {
        return Err(Error::Computation(format!(
            "partials of `{}` produced a non-finite value",
            spec.name
        )));
    }
    let h = u.u.h();
    Ok(crate::grid::l2_inner(h, &lx, &v.u.values)
        + crate::grid::l2_inner(h, &ly, &v.caputo.values))
}

/// Riesz representative of D𝒥(u) in the space inner product: solves the
/// hat-basis Gram system for g with ⟨g, φ_i⟩ = D𝒥(u)φ_i.
pub fn gradient(spec: &LagrangianSpec, u: &SpaceElement, basis: &BasisSet) -> Result<SpaceElement> {
    if u.n() != basis.n || u.params() != basis.params {
        return Err(Error::GridMismatch("element does not live on the basis grid".into()));
    }
    let lx = spec.along(&spec.lx, u);
    let ly = spec.along(&spec.ly, u);
    if !lx.iter().chain(&ly).all(|v| v.is_finite()) {
        return Err(Error::Computation(format!(
            "partials of `{}` produced a non-finite value",
            spec.name
        )));
    }
    let h = u.u.h();
    let w = trapezoid_weights(h, u.n() + 1);
    let m = basis.n - 1;
    let mut rhs = vec![0.0; m];
    for j in 0..m {
        let mut acc = 0.0;
        for i in 0..=u.n() {
            acc += w[i] * (lx[i] * basis.values[(i, j)] + ly[i] * basis.derivative_matrix[(i, j)]);
        }
        rhs[j] = acc;
    }
    basis.element(&basis.gram_solve(&rhs)?)
}

/// Discrete L² norm of the Euler-Lagrange residual
/// Lx(u, ᶜ𝔻u, t) + 𝔻_{b−}[Ly(u, ᶜ𝔻u, t)] over interior nodes.
///
/// Nodes within 5% of either endpoint (at least two) are excluded: the
/// right RL derivative is singular at b when Ly does not vanish there, and
/// inside a boundary layer of a few grid cells the weakly singular
/// quadrature does not converge pointwise, so including those nodes would
/// mask the interior convergence of the residual.
pub fn el_residual(spec: &LagrangianSpec, u: &SpaceElement) -> Result<f64> {
    let n = u.n();
    if n < 6 {
        return Err(Error::Domain("el_residual needs n >= 6".into()));
    }
    let lx = spec.along(&spec.lx, u);
    let ly = spec.along(&spec.ly, u);
    let ly_grid = GridFunction { params: u.params(), values: ly };
    let dly = right_rl_derivative(&ly_grid)?;
    let h = u.u.h();
    let margin = ((n as f64 * 0.05).ceil() as usize).max(2);
    let mut acc = 0.0;
    for i in margin..=n - margin {
        let r = lx[i] + dly.values[i];
        if r.is_finite() {
            acc += h * r * r;
        }
    }
    Ok(acc.sqrt())
}

/// One sampled growth/convexity condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub checked: usize,
    pub violations: usize,
    pub witness: Option<(f64, f64, f64)>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub lagrangian: String,
    pub conditions: Vec<ConditionReport>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.violations == 0)
    }
}

/// Deterministic low-discrepancy sample of the box [−5,5]² × [a,b]
/// (Kronecker sequence with square-root irrationals).
pub fn default_sample(params: TemperedParams, count: usize) -> Vec<(f64, f64, f64)> {
    let g1 = 2f64.sqrt().fract();
    let g2 = 3f64.sqrt().fract();
    let g3 = 5f64.sqrt().fract();
    (1..=count)
        .map(|i| {
            let i = i as f64;
            (
                -5.0 + 10.0 * (i * g1).fract(),
                -5.0 + 10.0 * (i * g2).fract(),
                params.a + params.width() * (i * g3).fract(),
            )
        })
        .collect()
}

/// Sampling falsifier for the growth and convexity conditions that back
/// the direct method.
/// A clean report means "no violation found on the sample", not a proof.
pub fn validate_hypotheses(
    spec: &LagrangianSpec,
    sample: &[(f64, f64, f64)],
) -> Result<HypothesisReport> {
    let g = spec
        .growth
        .ok_or_else(|| Error::Domain(format!("`{}` has no growth metadata", spec.name)))?;
    let mut conditions = Vec::new();
    let tol = 1e-9;

    let mut check = |name: &str, note: Option<String>, f: &dyn Fn(f64, f64, f64) -> bool| {
        let mut violations = 0;
        let mut witness = None;
        for &(x, y, t) in sample {
            if !f(x, y, t) {
                violations += 1;
                if witness.is_none() {
                    witness = Some((x, y, t));
                }
            }
        }
        conditions.push(ConditionReport {
            condition: name.into(),
            checked: sample.len(),
            violations,
            witness,
            note,
        });
    };

    // Growth of L in y (reading the bound's |·|^{d1} as a bound in y; the
    // alternative reading in t is degenerate and flagged here).
    let l = spec.l.clone();
    check(
        "L1",
        Some("bound interpreted in |y|^{d1}; the literal |t|^{d1} reading is degenerate".into()),
        &|x, y, t| {
            (l(x, y, t) - l(x, 0.0, t)).abs() <= g.r1 * y.abs().powf(g.d1) + g.s1 + tol
        },
    );
    let lx = spec.lx.clone();
    check("L2", None, &|x, y, t| {
        lx(x, y, t).abs() <= g.r2 * y.abs().powf(g.d2) + g.s2 + tol
    });
    let ly = spec.ly.clone();
    check("L3", None, &|x, y, t| {
        ly(x, y, t).abs() <= g.r3 * y.abs().powf(g.d3) + g.s3 + tol
    });
    let l4 = spec.l.clone();
    check("L4", None, &|x, y, t| {
        l4(x, y, t) >= g.zeta * y * y + g.c2 * x.abs().powf(g.d4) + g.c3 - tol
    });
    // Midpoint convexity in (x, y), pairing consecutive sample points.
    {
        let l5 = spec.l.clone();
        let mut violations = 0;
        let mut witness = None;
        let mut checked = 0;
        for pair in sample.chunks_exact(2) {
            let (x1, y1, t) = pair[0];
            let (x2, y2, _) = pair[1];
            checked += 1;
            let mid = l5(0.5 * (x1 + x2), 0.5 * (y1 + y2), t);
            if mid > 0.5 * (l5(x1, y1, t) + l5(x2, y2, t)) + tol {
                violations += 1;
                if witness.is_none() {
                    witness = Some((x1, y1, t));
                }
            }
        }
        conditions.push(ConditionReport {
            condition: "L5".into(),
            checked,
            violations,
            witness,
            note: Some("midpoint convexity in (x, y)".into()),
        });
    }
    Ok(HypothesisReport { lagrangian: spec.name.clone(), conditions })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoercivityBound {
    pub lower: f64,
    pub actual: f64,
}

/// Coercivity lower bound
/// ζ_eff‖u‖² − |c₂|(b−a)^{1−d₄/2} K^{d₄} ‖u‖^{d₄} − (b−a)|c₃| with
/// K = γ(α,σ(b−a))/(σ^α Γ(α)). The |y|² term controls only the seminorm
/// ‖ᶜ𝔻u‖_{L²}; ζ_eff = ζ/(1+K²) converts it to a full-norm bound via
/// ‖u‖_{L²} ≤ K‖ᶜ𝔻u‖_{L²}.
pub fn coercivity_bound(spec: &LagrangianSpec, u: &SpaceElement) -> Result<CoercivityBound> {
    let g = spec
        .growth
        .ok_or_else(|| Error::Domain(format!("`{}` has no growth metadata", spec.name)))?;
    let p = u.params();
    let k = integral_l2_bound(p)?;
    let zeta_eff = g.zeta / (1.0 + k * k);
    let nu = norm(u);
    let lower = zeta_eff * nu * nu
        - g.c2.abs() * p.width().powf(1.0 - g.d4 / 2.0) * k.powf(g.d4) * nu.powf(g.d4)
        - p.width() * g.c3.abs();
    let actual = evaluate(spec, u)?;
    Ok(CoercivityBound { lower, actual })
}

#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub value: f64,
    pub grad_norm: f64,
}

/// Direct-minimizer (or mountain-pass) output.
#[derive(Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub extremal: SpaceElement,
    pub value: f64,
    pub grad_norm: f64,
    pub el_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TracePoint>,
}

/// Gradient descent on the discretized action over the zero-boundary
/// subspace, with Armijo backtracking (factor ½, slope fraction 1e-4,
/// initial step 1). Terminates when the Riesz-gradient norm drops below
/// `tol`.
pub fn minimize_direct(
    spec: &LagrangianSpec,
    u0: &SpaceElement,
    basis: &BasisSet,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    let mut u = u0.clone();
    let mut value = evaluate(spec, &u)?;
    let mut grad = gradient(spec, &u, basis)?;
    let mut grad_norm = norm(&grad);
    let mut trace = vec![TracePoint { iteration: 0, value, grad_norm }];
    let mut iterations = 0;
    while grad_norm > tol && iterations < max_iter {
        let slope = inner_product(&grad, &grad)?;
        let mut step = 1.0;
        let mut accepted = false;
        while step > 1e-16 {
            let trial = u.sub(&grad.scaled(step))?;
            if let Ok(trial_value) = evaluate(spec, &trial) {
                if trial_value <= value - 1e-4 * step * slope {
                    u = trial;
                    value = trial_value;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break; // line search stalled: return best-so-far
        }
        grad = gradient(spec, &u, basis)?;
        grad_norm = norm(&grad);
        iterations += 1;
        trace.push(TracePoint { iteration: iterations, value, grad_norm });
    }
    let el = el_residual(spec, &u)?;
    Ok(SolveReport {
        extremal: u,
        value,
        grad_norm,
        el_residual: el,
        iterations,
        converged: grad_norm <= tol,
        trace,
    })
}
