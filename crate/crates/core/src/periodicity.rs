//! σ-periodicity of mutation sequences, checked four ways:
//!
//! 1. seeds `(B, x, y)` over ℚ₊(y), exactly;
//! 2. c- and g-matrices (tropical periodicity);
//! 3. signed mutations on sampled phase-space points;
//! 4. the composed integer matrices of the tropical transformations.
//!
//! The four verdicts agree for every sequence; [`periodicity_report`] runs
//! them all and treats a disagreement as an internal error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::canonical::{sigma_act, signed_trace, tau_matrices, CanonicalContext, PhasePoint};
use crate::dirac::is_nonzero_det;
use crate::error::{Error, Result};
use crate::matrix::{matrix_trace, ExchangeMatrix, IntMatrix, Sign, SkewSymmetrizer};
use crate::permutation::Permutation;
use crate::seed::Seed;
use crate::semifield::{Universal, DEFAULT_TERM_LIMIT};
use crate::tropical::{c_matrix_trace, g_matrix_trace_with_signs, tropical_sign_sequence};

/// An initial matrix, a mutation sequence and the expected relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationPlan {
    pub b: ExchangeMatrix,
    /// 0-based directions.
    pub seq: Vec<usize>,
    pub sigma: Permutation,
}

impl MutationPlan {
    pub fn new(b: ExchangeMatrix, seq: Vec<usize>, sigma: Permutation) -> Result<Self> {
        let n = b.n();
        if sigma.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sigma.len() });
        }
        if let Some(&k) = seq.iter().find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        Ok(MutationPlan { b, seq, sigma })
    }

    /// From 1-based directions and an optional 1-based σ (identity if absent).
    pub fn from_one_based(b: ExchangeMatrix, seq: &[usize], sigma: Option<&[usize]>) -> Result<Self> {
        let n = b.n();
        let seq = seq
            .iter()
            .map(|&k| if k == 0 || k > n { Err(Error::IndexOutOfRange { index: k, n }) } else { Ok(k - 1) })
            .collect::<Result<_>>()?;
        let sigma = match sigma {
            Some(s) => Permutation::from_one_based(s)?,
            None => Permutation::identity(n),
        };
        Self::new(b, seq, sigma)
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq_one_based(&self) -> Vec<usize> {
        self.seq.iter().map(|k| k + 1).collect()
    }

    pub fn with_sigma(&self, sigma: Permutation) -> Result<Self> {
        Self::new(self.b.clone(), self.seq.clone(), sigma)
    }

    /// The same sequence on the invertible extension of `B`, with σ fixing
    /// the new indices.
    pub fn extend(&self) -> Result<Self> {
        let d = self.b.skew_symmetrizer()?;
        let big = invertible_extension(&self.b, &d)?;
        Self::new(big, self.seq.clone(), self.sigma.extend_identity(2 * self.n()))
    }
}

#[derive(Serialize, Deserialize)]
struct PlanRepr {
    #[serde(rename = "B")]
    b: ExchangeMatrix,
    seq: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<Vec<usize>>,
}

impl Serialize for MutationPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlanRepr { b: self.b.clone(), seq: self.seq_one_based(), sigma: Some(self.sigma.one_based()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MutationPlan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PlanRepr::deserialize(d)?;
        MutationPlan::from_one_based(r.b, &r.seq, r.sigma.as_deref()).map_err(serde::de::Error::custom)
    }
}

/// Caps on the exact symbolic check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub max_rank: usize,
    pub max_length: usize,
    pub term_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rank: 5, max_length: 30, term_limit: DEFAULT_TERM_LIMIT }
    }
}

/// Where a periodicity check first failed. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub component: String,
    pub index: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub periodic: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict { periodic: true, witness: None }
    }

    fn no(check: &str, component: &str, index: Option<(usize, usize)>, detail: String) -> Self {
        Verdict {
            periodic: false,
            witness: Some(Witness { check: check.into(), component: component.into(), index, detail }),
        }
    }
}

fn compare_matrices(check: &str, component: &str, got: &IntMatrix, want: &IntMatrix) -> Verdict {
    for i in 0..got.n() {
        for j in 0..got.n() {
            if got.get(i, j) != want.get(i, j) {
                return Verdict::no(
                    check,
                    component,
                    Some((i + 1, j + 1)),
                    format!("entry is {}, expected {}", got.get(i, j), want.get(i, j)),
                );
            }
        }
    }
    Verdict::yes()
}

/// `b_{σ⁻¹(i)σ⁻¹(j)}[T] = b_ij[0]`.
pub fn check_b_periodicity(plan: &MutationPlan) -> Result<Verdict> {
    let bs = matrix_trace(&plan.b, &plan.seq)?;
    let end = bs.last().expect("nonempty").permuted(&plan.sigma)?;
    Ok(compare_matrices("B", "B", end.as_int_matrix(), plan.b.as_int_matrix()))
}

/// Exact check of `(B, x, y)` returning under σ, with coefficients in ℚ₊(y).
pub fn check_seed_periodicity(plan: &MutationPlan, limits: &Limits) -> Result<Verdict> {
    if plan.n() > limits.max_rank {
        return Err(Error::ResourceLimit(format!("rank {} exceeds the symbolic limit {}", plan.n(), limits.max_rank)));
    }
    if plan.len() > limits.max_length {
        return Err(Error::ResourceLimit(format!("length {} exceeds the symbolic limit {}", plan.len(), limits.max_length)));
    }
    let b = check_b_periodicity(plan)?;
    if !b.periodic {
        return Ok(relabel(b, "seed"));
    }
    let coefficients = Universal::with_term_limit(plan.n(), limits.term_limit);
    let start = Seed::initial_with_limit(plan.b.clone(), coefficients, limits.term_limit)?;
    let mut cur = start.clone();
    for &k in &plan.seq {
        cur = cur.mutate(k, Sign::Plus)?;
    }
    let x = plan.sigma.act(cur.x())?;
    let y = plan.sigma.act(cur.y())?;
    let names = start.default_labels();
    for i in 0..plan.n() {
        if !x[i].semifield_eq(&start.x()[i])? {
            return Ok(Verdict::no("seed", "x", Some((i + 1, 0)), format!("x_σ⁻¹({}) [T] = {}", i + 1, x[i].render(&names))));
        }
    }
    for i in 0..plan.n() {
        if !y[i].semifield_eq(&start.y()[i])? {
            return Ok(Verdict::no("seed", "y", Some((i + 1, 0)), format!("y_σ⁻¹({}) [T] = {}", i + 1, y[i])));
        }
    }
    Ok(Verdict::yes())
}

fn relabel(mut v: Verdict, check: &str) -> Verdict {
    if let Some(w) = v.witness.as_mut() {
        w.check = check.into();
    }
    v
}

/// `C[T]` and `G[T]` both equal the permutation matrix of σ.
pub fn check_tropical_periodicity(plan: &MutationPlan) -> Result<Verdict> {
    let cs = c_matrix_trace(&plan.b, &plan.seq)?;
    let signs = signs_from_c(&cs, &plan.seq)?;
    let gs = g_matrix_trace_with_signs(&plan.b, &plan.seq, &signs)?;
    let p = plan.sigma.matrix();
    let c = compare_matrices("tropical", "C", cs.last().expect("nonempty"), &p);
    if !c.periodic {
        return Ok(c);
    }
    Ok(compare_matrices("tropical", "G", gs.last().expect("nonempty"), &p))
}

fn signs_from_c(cs: &[IntMatrix], seq: &[usize]) -> Result<Vec<Sign>> {
    seq.iter().enumerate().map(|(s, &k)| crate::tropical::tropical_sign(&cs[s].column(k))).collect()
}

/// Sampling settings for the phase-space check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedOptions {
    pub samples: usize,
    pub rng_seed: u64,
    pub tol: f64,
    /// Coordinates are drawn uniformly from `[−radius, radius]`.
    pub radius: f64,
}

impl Default for SignedOptions {
    fn default() -> Self {
        SignedOptions { samples: 100, rng_seed: 20_240_501, tol: 1e-9, radius: 1.0 }
    }
}

/// Signed mutations with the tropical sign sequence and the minimal
/// skew-symmetrizer of the initial `B`, at random points.
pub fn check_signed_periodicity(plan: &MutationPlan, opts: &SignedOptions) -> Result<Verdict> {
    let signs = tropical_sign_sequence(&plan.b, &plan.seq)?;
    check_signed_periodicity_with_signs(plan, &signs, opts)
}

/// As [`check_signed_periodicity`] with caller-chosen signs.
pub fn check_signed_periodicity_with_signs(plan: &MutationPlan, signs: &[Sign], opts: &SignedOptions) -> Result<Verdict> {
    if opts.samples == 0 {
        return Err(Error::InvalidInput("at least one sample point is required".into()));
    }
    let b = check_b_periodicity(plan)?;
    if !b.periodic {
        return Ok(relabel(b, "signed"));
    }
    let ctx = CanonicalContext::new(plan.b.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let n = plan.n();
    for sample in 0..opts.samples {
        let mut draw = || (0..n).map(|_| rng.random_range(-opts.radius..=opts.radius)).collect::<Vec<f64>>();
        let pt = PhasePoint::new(draw(), draw())?;
        let tr = signed_trace(&ctx, &plan.seq, signs, &pt)?;
        let back = sigma_act(&plan.sigma, tr.points.last().expect("nonempty"))?;
        for (name, got, want) in [("u", &back.u, &pt.u), ("p", &back.p, &pt.p)] {
            for i in 0..n {
                if (got[i] - want[i]).abs() > opts.tol * (1.0 + want[i].abs()) {
                    return Ok(Verdict::no(
                        "signed",
                        name,
                        Some((i + 1, 0)),
                        format!("sample {}: {name}_σ⁻¹({})[T] = {}, initial {}", sample + 1, i + 1, got[i], want[i]),
                    ));
                }
            }
        }
    }
    Ok(Verdict::yes())
}

/// The products `(M, N)` of the tropical transformation matrices along the
/// plan, so that `u[T] = M u[0]` and `p[T] = N p[0]`.
pub fn composed_tau_matrices(b: &ExchangeMatrix, seq: &[usize], signs: &[Sign]) -> Result<(IntMatrix, IntMatrix)> {
    if seq.len() != signs.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: signs.len() });
    }
    let bs = matrix_trace(b, seq)?;
    let mut m = IntMatrix::identity(b.n());
    let mut nn = IntMatrix::identity(b.n());
    for (s, (&k, &eps)) in seq.iter().zip(signs).enumerate() {
        let (ms, ns) = tau_matrices(&bs[s], k, eps)?;
        m = ms.mul(&m)?;
        nn = ns.mul(&nn)?;
    }
    Ok((m, nn))
}

/// `σ ∘ τ_{T−1} ∘ ⋯ ∘ τ_0 = id` on ℝ²ⁿ, exactly over the integers.
pub fn check_canonical_tropical_periodicity(plan: &MutationPlan) -> Result<Verdict> {
    let signs = tropical_sign_sequence(&plan.b, &plan.seq)?;
    let (m, nn) = composed_tau_matrices(&plan.b, &plan.seq, &signs)?;
    let p = plan.sigma.matrix();
    let id = IntMatrix::identity(plan.n());
    let u = compare_matrices("canonical-tropical", "u", &p.mul(&m)?, &id);
    if !u.periodic {
        return Ok(u);
    }
    Ok(compare_matrices("canonical-tropical", "p", &p.mul(&nn)?, &id))
}

/// A σ for which the plan is tropically periodic, if any. The candidate is
/// read off `C[T]` (which must be a permutation matrix) and then verified.
pub fn find_sigma(b: &ExchangeMatrix, seq: &[usize]) -> Result<Option<Permutation>> {
    let cs = c_matrix_trace(b, seq)?;
    let c = cs.last().expect("nonempty");
    let n = b.n();
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let col = c.column(j);
        let ones: Vec<usize> = (0..n).filter(|&i| col[i] == 1).collect();
        if ones.len() != 1 || col.iter().filter(|&&v| v != 0).count() != 1 {
            return Ok(None);
        }
        images.push(ones[0]);
    }
    let Ok(sigma) = Permutation::new(images) else {
        return Ok(None);
    };
    let plan = MutationPlan::new(b.clone(), seq.to_vec(), sigma.clone())?;
    Ok(check_tropical_periodicity(&plan)?.periodic.then_some(sigma))
}

/// `B̃ = [[B, −I], [D, 0]]`, an invertible exchange matrix of size `2n`
/// containing `B` as its leading principal block.
pub fn invertible_extension(b: &ExchangeMatrix, d: &SkewSymmetrizer) -> Result<ExchangeMatrix> {
    if !d.symmetrizes(b) {
        return Err(Error::BadSymmetrizer { d: d.entries().to_vec() });
    }
    let n = b.n();
    let mut rows = vec![vec![0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = b.get(i, j);
        }
        rows[i][n + i] = -1;
        rows[n + i][i] = d.get(i);
    }
    let big = ExchangeMatrix::new(&rows)?;
    if !is_nonzero_det(big.as_int_matrix()) {
        return Err(Error::Invariant("invertible extension has zero determinant".into()));
    }
    Ok(big)
}

/// Options for [`periodicity_report`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub limits: Limits,
    pub signed: SignedOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub plan: MutationPlan,
    pub signs: Vec<Sign>,
    pub symmetrizer: Vec<i64>,
    pub b_periodic: bool,
    /// `None` when the symbolic check exceeded its resource limits.
    pub seed_periodic: Option<bool>,
    pub seed_skipped: Option<String>,
    pub tropical_periodic: bool,
    pub signed_periodic: bool,
    pub canonical_tropical_periodic: bool,
    pub periodic: bool,
    pub witnesses: Vec<Witness>,
}

/// Runs all four checks. Any disagreement is reported as
/// [`Error::PeriodicityDisagreement`]; a periodic verdict with
/// `d_{σ(i)} ≠ d_i` is an [`Error::Invariant`].
pub fn periodicity_report(plan: &MutationPlan, opts: &ReportOptions) -> Result<PeriodicityReport> {
    let signs = tropical_sign_sequence(&plan.b, &plan.seq)?;
    let d = plan.b.skew_symmetrizer()?;
    let b = check_b_periodicity(plan)?;
    let (seed, seed_skipped) = match check_seed_periodicity(plan, &opts.limits) {
        Ok(v) => (Some(v), None),
        Err(e @ (Error::ResourceLimit(_) | Error::TermLimit { .. })) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let trop = check_tropical_periodicity(plan)?;
    let signed = check_signed_periodicity(plan, &opts.signed)?;
    let canon = check_canonical_tropical_periodicity(plan)?;

    let mut verdicts = vec![("tropical", trop.periodic), ("signed", signed.periodic), ("canonical-tropical", canon.periodic)];
    if let Some(s) = &seed {
        verdicts.insert(0, ("seed", s.periodic));
    }
    let periodic = verdicts[0].1;
    if verdicts.iter().any(|(_, v)| *v != periodic) {
        let summary: Vec<String> = verdicts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        return Err(Error::PeriodicityDisagreement(format!(
            "{} for seq {:?} with σ = {}",
            summary.join(", "),
            plan.seq_one_based(),
            plan.sigma
        )));
    }
    if periodic {
        if let Some(i) = (0..plan.n()).find(|&i| d.get(plan.sigma.apply(i)) != d.get(i)) {
            return Err(Error::Invariant(format!("periodic plan with d_σ({0}) ≠ d_{0}", i + 1)));
        }
    }
    let witnesses = [seed.as_ref(), Some(&trop), Some(&signed), Some(&canon)]
        .into_iter()
        .flatten()
        .filter_map(|v| v.witness.clone())
        .collect();
    Ok(PeriodicityReport {
        plan: plan.clone(),
        signs,
        symmetrizer: d.entries().to_vec(),
        b_periodic: b.periodic,
        seed_periodic: seed.map(|v| v.periodic),
        seed_skipped,
        tropical_periodic: trop.periodic,
        signed_periodic: signed.periodic,
        canonical_tropical_periodic: canon.periodic,
        periodic,
        witnesses,
    })
}
