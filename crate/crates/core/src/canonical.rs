//! Canonical coordinates `(u, p)` on ℝ²ⁿ, Hamiltonian flows and signed
//! mutations.
//!
//! Derived variables:
//! `w_i = Σ_j b_ji u_j`, `x_i = e^{2u_i}`, `y_i = e^{d_i p_i + w_i}`,
//! `ŷ_i = e^{2w_i}`.

use serde::{Deserialize, Serialize};

use crate::dilog::li2;
use crate::error::{Error, Result};
use crate::matrix::{positive_part, ExchangeMatrix, IntMatrix, Sign, SkewSymmetrizer};
use crate::permutation::Permutation;

/// Largest `|z|` accepted before computing `e^z`.
pub const EXP_GUARD: f64 = 700.0;

pub(crate) fn guarded_exp(z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > EXP_GUARD {
        return Err(Error::ExponentOverflow(z));
    }
    Ok(z.exp())
}

/// `log(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(u: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if u.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: u.len(), found: p.len() });
        }
        if let Some(&bad) = u.iter().chain(&p).find(|v| !v.is_finite()) {
            return Err(Error::Domain { function: "PhasePoint", value: bad });
        }
        Ok(PhasePoint { u, p })
    }

    pub fn zeros(n: usize) -> Self {
        PhasePoint { u: vec![0.0; n], p: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    /// `Σ u_i p_i`.
    pub fn pairing(&self) -> f64 {
        self.u.iter().zip(&self.p).map(|(a, b)| a * b).sum()
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &PhasePoint) -> f64 {
        self.u
            .iter()
            .zip(&other.u)
            .chain(self.p.iter().zip(&other.p))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn axpy(&self, h: f64, d: &PhasePoint) -> PhasePoint {
        PhasePoint {
            u: self.u.iter().zip(&d.u).map(|(a, b)| a + h * b).collect(),
            p: self.p.iter().zip(&d.p).map(|(a, b)| a + h * b).collect(),
        }
    }
}

/// An exchange matrix together with the skew-symmetrizer used for the
/// realization. The symmetrizer stays fixed along mutation sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalContext {
    pub b: ExchangeMatrix,
    pub d: SkewSymmetrizer,
}

impl CanonicalContext {
    /// Uses the minimal skew-symmetrizer of `b`.
    pub fn new(b: ExchangeMatrix) -> Result<Self> {
        let d = b.skew_symmetrizer()?;
        Ok(CanonicalContext { b, d })
    }

    pub fn with_symmetrizer(b: ExchangeMatrix, d: Vec<i64>) -> Result<Self> {
        let d = SkewSymmetrizer::new(d, &b)?;
        Ok(CanonicalContext { b, d })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    /// The context after mutation at `k`, keeping `D`.
    pub fn mutated(&self, k: usize, eps: Sign) -> Result<Self> {
        Ok(CanonicalContext { b: self.b.mutate(k, eps)?, d: self.d.clone() })
    }

    fn check(&self, pt: &PhasePoint) -> Result<()> {
        if pt.n() != self.n() || pt.p.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: pt.n() });
        }
        Ok(())
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::IndexOutOfRange { index: k, n: self.n() });
        }
        Ok(())
    }

    /// `w_i = Σ_j b_ji u_j`.
    pub fn w(&self, u: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.b.get(j, i) as f64 * u[j]).sum()).collect()
    }

    /// `log y_k = d_k p_k + w_k`.
    pub fn log_y(&self, pt: &PhasePoint, k: usize) -> f64 {
        let w: f64 = (0..self.n()).map(|j| self.b.get(j, k) as f64 * pt.u[j]).sum();
        self.d.get(k) as f64 * pt.p[k] + w
    }

    /// `log(1 + y_k^ε)`, guarded against exponents past [`EXP_GUARD`].
    pub fn log_one_plus_y(&self, pt: &PhasePoint, k: usize, eps: Sign) -> Result<f64> {
        let z = self.log_y(pt, k);
        if !z.is_finite() || z.abs() > EXP_GUARD {
            return Err(Error::ExponentOverflow(z));
        }
        Ok(softplus(eps.as_f64() * z))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedVars {
    pub w: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub yhat: Vec<f64>,
}

pub fn derive(ctx: &CanonicalContext, pt: &PhasePoint) -> Result<DerivedVars> {
    ctx.check(pt)?;
    let w = ctx.w(&pt.u);
    let x = pt.u.iter().map(|&u| guarded_exp(2.0 * u)).collect::<Result<_>>()?;
    let y = (0..ctx.n()).map(|i| guarded_exp(ctx.d.get(i) as f64 * pt.p[i] + w[i])).collect::<Result<_>>()?;
    let yhat = w.iter().map(|&v| guarded_exp(2.0 * v)).collect::<Result<_>>()?;
    Ok(DerivedVars { w, x, y, yhat })
}

/// `H = ε/(2d_k) · Li₂(−y_k^ε)`.
pub fn hamiltonian(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<f64> {
    ctx.check(pt)?;
    ctx.check_k(k)?;
    let yk = guarded_exp(eps.as_f64() * ctx.log_y(pt, k))?;
    Ok(eps.as_f64() / (2.0 * ctx.d.get(k) as f64) * li2(-yk)?)
}

/// The velocity field `(u̇, ṗ)` of `H^B_{k,ε}`.
pub fn vector_field(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<PhasePoint> {
    let l = ctx.log_one_plus_y(pt, k, eps)?;
    let n = ctx.n();
    let mut du = vec![0.0; n];
    du[k] = -0.5 * l;
    let dp = (0..n).map(|i| -(ctx.b.get(k, i) as f64) * l / (2.0 * ctx.d.get(i) as f64)).collect();
    Ok(PhasePoint { u: du, p: dp })
}

/// The closed-form time-one flow of `H^B_{k,ε}`.
pub fn flow_time_one(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<PhasePoint> {
    flow_closed_form(ctx, k, eps, pt, 1.0)
}

/// The closed-form flow for time `t`; the motion is affine in `t`.
pub fn flow_closed_form(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint, t: f64) -> Result<PhasePoint> {
    ctx.check(pt)?;
    ctx.check_k(k)?;
    let v = vector_field(ctx, k, eps, pt)?;
    Ok(pt.axpy(t, &v))
}

/// Fixed-step RK4 integration of the flow up to `t_end`. The step is
/// shrunk so that an integer number of steps lands on `t_end`.
pub fn flow_ode(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint, t_end: f64, step: f64) -> Result<PhasePoint> {
    Ok(flow_trajectory(ctx, k, eps, pt, t_end, step)?.pop().expect("nonempty").1)
}

/// As [`flow_ode`], returning every intermediate `(t, point)`.
pub fn flow_trajectory(
    ctx: &CanonicalContext,
    k: usize,
    eps: Sign,
    pt: &PhasePoint,
    t_end: f64,
    step: f64,
) -> Result<Vec<(f64, PhasePoint)>> {
    ctx.check(pt)?;
    ctx.check_k(k)?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("integration step must be positive, got {step}")));
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidInput(format!("end time must be nonnegative, got {t_end}")));
    }
    let steps = (t_end / step).ceil() as usize;
    if steps > 100_000_000 {
        return Err(Error::ResourceLimit(format!("{steps} integration steps")));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, pt.clone()));
    if steps == 0 {
        return Ok(out);
    }
    let h = t_end / steps as f64;
    let mut cur = pt.clone();
    for s in 0..steps {
        let k1 = vector_field(ctx, k, eps, &cur)?;
        let k2 = vector_field(ctx, k, eps, &cur.axpy(h / 2.0, &k1))?;
        let k3 = vector_field(ctx, k, eps, &cur.axpy(h / 2.0, &k2))?;
        let k4 = vector_field(ctx, k, eps, &cur.axpy(h, &k3))?;
        cur = cur.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
        out.push(((s + 1) as f64 * h, cur.clone()));
    }
    Ok(out)
}

/// The matrices `(M, N)` of the tropical transformation, `u' = M u`,
/// `p' = N p`. They satisfy `Nᵀ M = I`.
pub fn tau_matrices(b: &ExchangeMatrix, k: usize, eps: Sign) -> Result<(IntMatrix, IntMatrix)> {
    let n = b.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let mut m = IntMatrix::identity(n);
    let mut nn = IntMatrix::identity(n);
    for j in 0..n {
        m.set(k, j, positive_part(-eps.value() * b.get(j, k)));
        nn.set(j, k, positive_part(-eps.value() * b.get(j, k)));
    }
    m.set(k, k, -1);
    nn.set(k, k, -1);
    Ok((m, nn))
}

/// The tropical transformation `τ^B_{k,ε}` and the mutated context.
pub fn tau_canonical(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<(PhasePoint, CanonicalContext)> {
    ctx.check(pt)?;
    ctx.check_k(k)?;
    let n = ctx.n();
    let mut u = pt.u.clone();
    let mut p = pt.p.clone();
    u[k] = -pt.u[k] + (0..n).map(|j| positive_part(-eps.value() * ctx.b.get(j, k)) as f64 * pt.u[j]).sum::<f64>();
    for i in 0..n {
        if i != k {
            p[i] = pt.p[i] + positive_part(-eps.value() * ctx.b.get(i, k)) as f64 * pt.p[k];
        }
    }
    p[k] = -pt.p[k];
    Ok((PhasePoint { u, p }, ctx.mutated(k, eps)?))
}

/// The signed mutation `μ^B_{k,ε} = τ^B_{k,ε} ∘ (time-one flow)`.
pub fn signed_mutation(ctx: &CanonicalContext, k: usize, eps: Sign, pt: &PhasePoint) -> Result<(PhasePoint, CanonicalContext)> {
    let f = flow_time_one(ctx, k, eps, pt)?;
    tau_canonical(ctx, k, eps, &f)
}

/// `max_i |d_i p_i − w_i|`.
pub fn m0_deviation(ctx: &CanonicalContext, pt: &PhasePoint) -> Result<f64> {
    ctx.check(pt)?;
    let w = ctx.w(&pt.u);
    Ok((0..ctx.n()).map(|i| (ctx.d.get(i) as f64 * pt.p[i] - w[i]).abs()).fold(0.0, f64::max))
}

pub fn is_on_m0(ctx: &CanonicalContext, pt: &PhasePoint, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    Ok(m0_deviation(ctx, pt)? <= tol)
}

/// The point of the small phase space over `u`: `p_i = w_i / d_i`.
pub fn project_m0(ctx: &CanonicalContext, u: &[f64]) -> Result<PhasePoint> {
    if u.len() != ctx.n() {
        return Err(Error::DimensionMismatch { expected: ctx.n(), found: u.len() });
    }
    let w = ctx.w(u);
    let p = (0..ctx.n()).map(|i| w[i] / ctx.d.get(i) as f64).collect();
    PhasePoint::new(u.to_vec(), p)
}

/// Relabels coordinates: `u'_i = u_{σ⁻¹(i)}`, `p'_i = p_{σ⁻¹(i)}`.
pub fn sigma_act(sigma: &Permutation, pt: &PhasePoint) -> Result<PhasePoint> {
    Ok(PhasePoint { u: sigma.act(&pt.u)?, p: sigma.act(&pt.p)? })
}

/// Points and contexts along a sequence of signed mutations.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalTrace {
    pub contexts: Vec<CanonicalContext>,
    pub points: Vec<PhasePoint>,
}

/// Applies `μ_{k_s, ε_s}` for each step; `contexts[s]` and `points[s]` are
/// the chart and point at the start of span `s`.
pub fn signed_trace(ctx: &CanonicalContext, seq: &[usize], signs: &[Sign], pt: &PhasePoint) -> Result<CanonicalTrace> {
    if seq.len() != signs.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: signs.len() });
    }
    let mut contexts = vec![ctx.clone()];
    let mut points = vec![pt.clone()];
    for (&k, &eps) in seq.iter().zip(signs) {
        let (q, c) = signed_mutation(contexts.last().expect("nonempty"), k, eps, points.last().expect("nonempty"))?;
        contexts.push(c);
        points.push(q);
    }
    Ok(CanonicalTrace { contexts, points })
}
