//! The Euler and Rogers dilogarithms, the Lagrangian of the signed
//! mutations, the action integral and dilogarithm-identity residuals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::canonical::{
    derive, flow_trajectory, guarded_exp, hamiltonian, m0_deviation, project_m0, signed_trace, tau_canonical,
    CanonicalContext, PhasePoint,
};
use crate::error::{Error, Result};
use crate::matrix::{matrix_trace, ExchangeMatrix, Sign};
use crate::quadrature::{adaptive_simpson, simpson_samples};
use crate::seed::mutate_y;
use crate::semifield::PositiveReals;
use crate::tropical::tropical_sign_sequence;

const PI2_6: f64 = PI * PI / 6.0;

/// Deviation from the small phase space accepted by [`lagrangian_on_m0`].
pub const M0_TOL: f64 = 1e-9;

fn li2_core(x: f64) -> f64 {
    // |x| ≤ ½: the power series converges at least like 2⁻ⁿ
    let (mut sum, mut pow) = (0.0, x);
    for n in 1..200 {
        let term = pow / (n * n) as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        pow *= x;
    }
    sum
}

/// The Euler dilogarithm `Li₂(x)` for real `x ≤ 1`.
pub fn li2(x: f64) -> Result<f64> {
    if x.is_nan() || x > 1.0 {
        return Err(Error::Domain { function: "li2", value: x });
    }
    Ok(if x == 1.0 {
        PI2_6
    } else if x > 0.5 {
        PI2_6 - x.ln() * (-x).ln_1p() - li2_core(1.0 - x)
    } else if x >= -0.5 {
        li2_core(x)
    } else if x >= -1.0 {
        0.5 * li2(x * x)? - li2(-x)?
    } else {
        let l = (-x).ln();
        -PI2_6 - 0.5 * l * l - li2(1.0 / x)?
    })
}

/// The Rogers dilogarithm `L(x) = Li₂(x) + ½ log x log(1−x)` on `[0, 1]`.
pub fn rogers_l(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { function: "rogers_l", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(PI2_6);
    }
    Ok(li2(x)? + 0.5 * x.ln() * (-x).ln_1p())
}

/// `L̃(x) = −Li₂(−x) − ½ log x log(1+x) = L(x/(1+x))` for `x ≥ 0`.
pub fn rogers_ltilde(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 || x.is_infinite() {
        return Err(Error::Domain { function: "rogers_ltilde", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(-li2(-x)? - 0.5 * x.ln() * x.ln_1p())
}

/// Settings for the slow reference evaluations used to validate [`li2`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilogConfig {
    pub series_cutoff: usize,
    pub quad_tol: f64,
}

impl Default for DilogConfig {
    fn default() -> Self {
        DilogConfig { series_cutoff: 10_000, quad_tol: 1e-13 }
    }
}

impl DilogConfig {
    pub fn new(series_cutoff: usize, quad_tol: f64) -> Result<Self> {
        if series_cutoff < 100 {
            return Err(Error::InvalidInput(format!("series cutoff must be at least 100, got {series_cutoff}")));
        }
        if !(quad_tol > 0.0) {
            return Err(Error::InvalidInput(format!("quadrature tolerance must be positive, got {quad_tol}")));
        }
        Ok(DilogConfig { series_cutoff, quad_tol })
    }

    /// Partial sum `Σ_{n≤N} xⁿ/n²` for `|x| ≤ 1`. At `x = ±1` the tail is
    /// added in closed asymptotic form so the result is usable as a reference.
    pub fn li2_series(&self, x: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(Error::Domain { function: "li2_series", value: x });
        }
        let n_max = self.series_cutoff;
        let (mut sum, mut c, mut pow) = (0.0f64, 0.0f64, 1.0f64);
        for n in 1..=n_max {
            pow *= x;
            // Kahan summation
            let t = pow / (n as f64 * n as f64) - c;
            let s = sum + t;
            c = (s - sum) - t;
            sum = s;
        }
        let nf = n_max as f64;
        if x == 1.0 {
            sum += 1.0 / nf - 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf);
        } else if x == -1.0 {
            // alternating tail: half the next term, to leading order
            let sign = if n_max % 2 == 0 { -1.0 } else { 1.0 };
            sum += sign * 0.5 / ((nf + 0.5) * (nf + 0.5));
        }
        Ok(sum)
    }

    /// `Li₂(x) = ∫₀^{−log(1−x)} s/(eˢ−1) ds`, by adaptive Simpson.
    pub fn li2_quadrature(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x > 1.0 {
            return Err(Error::Domain { function: "li2_quadrature", value: x });
        }
        let f = |s: f64| if s.abs() < 1e-8 { 1.0 - s / 2.0 } else { s / s.exp_m1() };
        if x == 1.0 {
            // the tail beyond 80 is below 1e−32
            return adaptive_simpson(f, 0.0, 80.0, self.quad_tol);
        }
        adaptive_simpson(f, 0.0, -(-x).ln_1p(), self.quad_tol)
    }

    /// `L̃(x) = ½∫₀^x (log(1+t)/t − log t/(1+t)) dt` with `t = s⁴` to tame the
    /// endpoint singularity.
    pub fn ltilde_quadrature(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain { function: "ltilde_quadrature", value: x });
        }
        let f = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            let t = s.powi(4);
            4.0 * t.ln_1p() / s - 16.0 * s.powi(3) * s.ln() / (1.0 + t)
        };
        Ok(0.5 * adaptive_simpson(f, 0.0, x.powf(0.25), self.quad_tol)?)
    }
}

/// `𝓛 = −½ log(1+y_k^ε) p_k − ε/(2d_k) Li₂(−y_k^ε)` at an arbitrary point.
pub fn lagrangian_general(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<f64> {
    let h = hamiltonian(ctx, k, eps, pt)?;
    let l = ctx.log_one_plus_y(pt, k, eps)?;
    Ok(-0.5 * l * pt.p[k] - h)
}

/// `𝓛 = ε/(2d_k) L̃(y_k^ε)` on the small phase space.
pub fn lagrangian_on_m0(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<f64> {
    let dev = m0_deviation(ctx, pt)?;
    if dev > M0_TOL {
        return Err(Error::NotOnM0 { deviation: dev });
    }
    if k >= ctx.n() {
        return Err(Error::IndexOutOfRange { index: k, n: ctx.n() });
    }
    let y = guarded_exp(eps.as_f64() * ctx.log_y(pt, k))?;
    Ok(eps.as_f64() / (2.0 * ctx.d.get(k) as f64) * rogers_ltilde(y)?)
}

/// `S = Σ_s 𝓛[s]`, each term evaluated at the start of its span.
pub fn action_integral(ctx: &CanonicalContext, seq: &[usize], signs: &[Sign], pt0: &PhasePoint) -> Result<f64> {
    let tr = signed_trace(ctx, seq, signs, pt0)?;
    let mut s = 0.0;
    for (i, (&k, &eps)) in seq.iter().zip(signs).enumerate() {
        s += lagrangian_general(&tr.contexts[i], k, eps, &tr.points[i])?;
    }
    Ok(s)
}

/// `S` by composite Simpson quadrature of `𝓛` along RK4 trajectories.
/// Spans are chained through the integrated end points.
pub fn action_quadrature(ctx: &CanonicalContext, seq: &[usize], signs: &[Sign], pt0: &PhasePoint, step: f64) -> Result<f64> {
    Ok(flow_trace(ctx, seq, signs, pt0, step)?.action)
}

/// One sample of a piecewise Hamiltonian flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub t: f64,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub samples: Vec<FlowSample>,
    /// Simpson estimate of the action along the sampled flow.
    pub action: f64,
    /// The final point after the last tropical transformation.
    pub end: PhasePoint,
}

/// Integrates the flow span by span. Within span `s` the samples are in the
/// `s`-th chart; the global time is `s + t`.
pub fn flow_trace(ctx: &CanonicalContext, seq: &[usize], signs: &[Sign], pt0: &PhasePoint, step: f64) -> Result<FlowTrace> {
    if seq.len() != signs.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: signs.len() });
    }
    if !(step > 0.0) || step > 0.5 {
        return Err(Error::InvalidInput(format!("integration step must lie in (0, 0.5], got {step}")));
    }
    // an even number of RK4 steps per span, for Simpson
    let steps = 2 * (0.5 / step).ceil() as usize;
    let h = 1.0 / steps as f64;
    let mut cur_ctx = ctx.clone();
    let mut cur = pt0.clone();
    let mut samples = Vec::new();
    let mut action = 0.0;
    for (s, (&k, &eps)) in seq.iter().zip(signs).enumerate() {
        let traj = flow_trajectory(&cur_ctx, k, eps, &cur, 1.0, h)?;
        let mut ls = Vec::with_capacity(traj.len());
        for (t, q) in &traj {
            let l = lagrangian_general(&cur_ctx, k, eps, q)?;
            let hv = hamiltonian(&cur_ctx, k, eps, q)?;
            ls.push(l);
            samples.push(FlowSample { t: s as f64 + t, u: q.u.clone(), p: q.p.clone(), h: hv, l });
        }
        action += simpson_samples(&ls, h)?;
        let end = &traj.last().expect("nonempty").1;
        let (next, next_ctx) = tau_canonical(&cur_ctx, k, eps, end)?;
        cur = next;
        cur_ctx = next_ctx;
    }
    Ok(FlowTrace { samples, action, end: cur })
}

/// `Σ_s (ε_s/d_{k_s}) L̃(y_{k_s}[s]^{ε_s})` with `y` mutated in ℝ₊ from `y0`
/// and `ε_s` the tropical sign sequence. `D` is the minimal
/// skew-symmetrizer of `b`.
pub fn identity_residual(b: &ExchangeMatrix, seq: &[usize], y0: &[f64]) -> Result<f64> {
    let n = b.n();
    if y0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y0.len() });
    }
    if let Some(&bad) = y0.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain { function: "identity_residual", value: bad });
    }
    let d = b.skew_symmetrizer()?;
    let signs = tropical_sign_sequence(b, seq)?;
    let bs = matrix_trace(b, seq)?;
    let mut y = y0.to_vec();
    let mut total = 0.0;
    for (s, (&k, &eps)) in seq.iter().zip(&signs).enumerate() {
        let v = if eps == Sign::Plus { y[k] } else { 1.0 / y[k] };
        total += eps.as_f64() / d.get(k) as f64 * rogers_ltilde(v)?;
        y = mutate_y(&PositiveReals, &bs[s], &y, k, eps)?;
    }
    Ok(total)
}

/// The same sum with `ŷ_{k_s}[s] = e^{2w_{k_s}[s]}` read off the signed
/// mutation trace started at the point of the small phase space over `u0`.
pub fn yhat_identity_residual(b: &ExchangeMatrix, seq: &[usize], u0: &[f64]) -> Result<f64> {
    let ctx = CanonicalContext::new(b.clone())?;
    let signs = tropical_sign_sequence(b, seq)?;
    let pt = project_m0(&ctx, u0)?;
    let tr = signed_trace(&ctx, seq, &signs, &pt)?;
    let mut total = 0.0;
    for (s, (&k, &eps)) in seq.iter().zip(&signs).enumerate() {
        let yhat = derive(&tr.contexts[s], &tr.points[s])?.yhat[k];
        let v = if eps == Sign::Plus { yhat } else { 1.0 / yhat };
        total += eps.as_f64() / ctx.d.get(k) as f64 * rogers_ltilde(v)?;
    }
    Ok(total)
}
