//! The subcommands. Each returns a JSON value, a human-readable rendering
//! and an exit code.

use std::fmt::Write as _;
use std::path::Path;

use cluster_mech::canonical::{project_m0, CanonicalContext, PhasePoint};
use cluster_mech::dilog::{action_integral, flow_trace, identity_residual};
use cluster_mech::periodicity::{check_tropical_periodicity, find_sigma, periodicity_report, MutationPlan, ReportOptions, SignedOptions};
use cluster_mech::seed::{AnySeed, CoefficientKind, Seed, SeedView};
use cluster_mech::semifield::{Trivial, Universal};
use cluster_mech::tropical::tropical_sign_sequence;
use cluster_mech::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::plan::PlanFile;
use crate::Failure;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 10;
pub const DEFAULT_STEP: f64 = 0.01;
const MAX_GRID_POINTS: usize = 1_000_000;

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

/// Command-line overrides of plan settings.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub rng_seed: Option<u64>,
}

impl Overrides {
    fn rng_seed(&self) -> u64 {
        self.rng_seed.unwrap_or(SignedOptions::default().rng_seed)
    }

    fn tol(&self, plan: &PlanFile) -> f64 {
        self.tol.or(plan.tol).unwrap_or(DEFAULT_TOL)
    }
}

fn signs_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn render_view(out: &mut String, v: &SeedView) {
    let _ = writeln!(out, "  B = {:?}", v.b);
    let _ = writeln!(out, "  x = [{}]", v.x.join(", "));
    let _ = writeln!(out, "  y = [{}]", v.y.join(", "));
}

#[derive(Serialize)]
struct Step {
    step: usize,
    k: Option<usize>,
    seed: SeedView,
}

/// The seed after each of the first `steps` mutations of the plan.
pub fn mutate(plan: &PlanFile, steps: Option<usize>) -> Result<Outcome, Failure> {
    let steps = steps.unwrap_or(plan.seq.len());
    if steps > plan.seq.len() {
        return Err(Failure::Input(format!("--steps {steps} exceeds the sequence length {}", plan.seq.len())));
    }
    let n = plan.b.n();
    let limit = plan.limits.term_limit;
    let mut seed = match plan.coefficients {
        CoefficientKind::Universal => AnySeed::Universal(Seed::initial_with_limit(plan.b.clone(), Universal::with_term_limit(n, limit), limit)?),
        CoefficientKind::Trivial => AnySeed::Trivial(Seed::initial_with_limit(plan.b.clone(), Trivial, limit)?),
    };
    let labels = plan.labels.as_deref();
    let mut trace = vec![Step { step: 0, k: None, seed: seed.render(labels)? }];
    let mut text = String::from("step 0: initial seed\n");
    render_view(&mut text, &trace[0].seed);
    for (s, &k) in plan.seq.iter().take(steps).enumerate() {
        seed = seed.mutate(k - 1, Sign::Plus)?;
        let view = seed.render(labels)?;
        let _ = writeln!(text, "step {}: mutation at {k}", s + 1);
        render_view(&mut text, &view);
        trace.push(Step { step: s + 1, k: Some(k), seed: view });
    }
    Ok(Outcome { json: json!({ "trace": trace }), text, code: 0 })
}

/// σ from the plan, else from the c-matrices. `None` when no σ exists.
fn resolve_sigma(plan: &PlanFile) -> Result<(MutationPlan, &'static str), Failure> {
    let base = plan.mutation_plan()?;
    if plan.sigma.is_some() {
        return Ok((base, "plan"));
    }
    match find_sigma(&base.b, &base.seq)? {
        Some(sigma) => Ok((base.with_sigma(sigma)?, "search")),
        None => Ok((base, "none")),
    }
}

/// All four periodicity checks.
pub fn check_period(plan: &PlanFile, ov: &Overrides) -> Result<Outcome, Failure> {
    let (mp, source) = resolve_sigma(plan)?;
    let opts = ReportOptions {
        limits: plan.limits,
        signed: SignedOptions {
            samples: ov.samples.or(plan.samples).unwrap_or(SignedOptions::default().samples),
            rng_seed: ov.rng_seed(),
            tol: ov.tol(plan),
            ..SignedOptions::default()
        },
    };
    let report = periodicity_report(&mp, &opts)?;
    let mut json = serde_json::to_value(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    json["sigma_source"] = json!(source);
    json["rng_seed"] = json!(opts.signed.rng_seed);

    let mut text = String::new();
    let _ = writeln!(text, "periodic: {}", report.periodic);
    match source {
        "none" => {
            let _ = writeln!(text, "sigma: none found (checked against the identity)");
        }
        _ => {
            let _ = writeln!(text, "sigma: {:?} ({source})", mp.sigma.one_based());
        }
    }
    let _ = writeln!(text, "tropical signs: {}", signs_string(&report.signs));
    let seed = match (report.seed_periodic, &report.seed_skipped) {
        (Some(v), _) => v.to_string(),
        (None, Some(why)) => format!("skipped ({why})"),
        (None, None) => "skipped".into(),
    };
    let _ = writeln!(
        text,
        "checks: seed={seed} tropical={} signed={} canonical-tropical={}",
        report.tropical_periodic, report.signed_periodic, report.canonical_tropical_periodic
    );
    let _ = writeln!(text, "signed check: {} samples, rng seed {}", opts.signed.samples, opts.signed.rng_seed);
    for w in &report.witnesses {
        let at = w.index.map(|(i, j)| if j == 0 { format!(" at {i}") } else { format!(" at ({i},{j})") }).unwrap_or_default();
        let _ = writeln!(text, "witness [{}] {}{at}: {}", w.check, w.component, w.detail);
    }
    Ok(Outcome { json, text, code: if report.periodic { 0 } else { 1 } })
}

fn log_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    match n {
        1 => vec![1.0],
        _ => (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect(),
    }
}

/// The dilogarithm identity of a periodic plan over a grid of `y₀`.
pub fn verify_identity(plan: &PlanFile, grid: Option<usize>, ov: &Overrides) -> Result<Outcome, Failure> {
    let (mp, source) = resolve_sigma(plan)?;
    if source == "none" || !check_tropical_periodicity(&mp)?.periodic {
        let msg = format!("plan is not periodic (σ {}); refusing to evaluate the identity", if source == "none" { "not found".to_string() } else { format!("{:?}", mp.sigma.one_based()) });
        return Ok(Outcome { json: json!({ "periodic": false, "message": msg }), text: format!("{msg}\n"), code: 1 });
    }
    let n = mp.n();
    let g = grid.unwrap_or(DEFAULT_GRID);
    if g == 0 {
        return Err(Failure::Input("--grid must be at least 1".into()));
    }
    let total = u32::try_from(n).ok().and_then(|e| g.checked_pow(e)).filter(|&t| t <= MAX_GRID_POINTS);
    let Some(total) = total else {
        return Err(Failure::Resource(format!("a {g}^{n} grid exceeds {MAX_GRID_POINTS} points")));
    };
    let axis = log_grid(g);
    let mut points: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let v = axis[idx % g];
                    idx /= g;
                    v
                })
                .collect()
        })
        .collect();
    let samples = ov.samples.or(plan.samples).unwrap_or(0);
    let rng_seed = ov.rng_seed();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..samples {
        points.push((0..n).map(|_| rng.random_range(0.1f64.ln()..10f64.ln()).exp()).collect());
    }
    if let Some(y) = &plan.y0 {
        points.push(y.clone());
    }
    let mut worst = (0.0f64, points[0].clone());
    for y in &points {
        let r = identity_residual(&mp.b, &mp.seq, y)?.abs();
        if r > worst.0 {
            worst = (r, y.clone());
        }
    }
    let tol = ov.tol(plan);
    let pass = worst.0 < tol;
    let json = json!({
        "periodic": true,
        "sigma": mp.sigma.one_based(),
        "points": points.len(),
        "grid": g,
        "samples": samples,
        "rng_seed": rng_seed,
        "max_residual": worst.0,
        "worst_point": worst.1,
        "tol": tol,
        "pass": pass,
    });
    let text = format!(
        "sigma: {:?}\npoints: {} ({g}^{n} grid, {samples} random, rng seed {rng_seed})\nmax |residual|: {:e} at y0 = {:?}\n{} (tolerance {tol:e})\n",
        mp.sigma.one_based(),
        points.len(),
        worst.0,
        worst.1,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(Outcome { json, text, code: if pass { 0 } else { 1 } })
}

/// The piecewise Hamiltonian flow along the plan, with its action.
pub fn flow(plan: &PlanFile, step: Option<f64>, dump: Option<&Path>) -> Result<Outcome, Failure> {
    let mp = plan.mutation_plan()?;
    let n = mp.n();
    let ctx = CanonicalContext::new(mp.b.clone())?;
    let pt = match &plan.point {
        Some(spec) => match &spec.p {
            Some(p) => PhasePoint::new(spec.u.clone(), p.clone())?,
            None => project_m0(&ctx, &spec.u)?,
        },
        None => project_m0(&ctx, &vec![0.0; n])?,
    };
    let step = step.or(plan.step).unwrap_or(DEFAULT_STEP);
    let signs = tropical_sign_sequence(&mp.b, &mp.seq)?;
    let trace = flow_trace(&ctx, &mp.seq, &signs, &pt, step)?;
    let action = action_integral(&ctx, &mp.seq, &signs, &pt)?;
    let (periodic_plan, _) = resolve_sigma(plan)?;
    let periodic = !mp.seq.is_empty() && check_tropical_periodicity(&periodic_plan)?.periodic;
    let sigma = if periodic { Some(periodic_plan.sigma.one_based()) } else { None };

    if let Some(path) = dump {
        let body = json!({ "samples": trace.samples, "action": action, "action_quadrature": trace.action });
        let text = serde_json::to_string_pretty(&body).map_err(|e| Failure::Internal(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let json = json!({
        "start": pt,
        "end": trace.end,
        "signs": signs,
        "step": step,
        "samples": trace.samples.len(),
        "action": action,
        "action_quadrature": trace.action,
        "periodic": periodic,
        "sigma": sigma,
        "trajectory": dump.map(|p| p.display().to_string()),
    });
    let mut text = format!(
        "start: u = {:?}, p = {:?}\nend:   u = {:?}, p = {:?}\nsigns: {}\naction S = {:e} (quadrature {:e}, {} samples)\n",
        pt.u,
        pt.p,
        trace.end.u,
        trace.end.p,
        signs_string(&signs),
        action,
        trace.action,
        trace.samples.len()
    );
    if let Some(p) = dump {
        let _ = writeln!(text, "trajectory written to {}", p.display());
    }
    if periodic {
        let _ = writeln!(text, "plan is periodic with sigma {:?}", sigma.as_deref().unwrap_or_default());
        if action.abs() >= DEFAULT_TOL {
            return Err(Failure::Internal(format!("periodic plan has action {action:e}, expected 0")));
        }
    }
    Ok(Outcome { json, text, code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cluster_mech::Permutation;

    fn pentagon() -> PlanFile {
        PlanFile::parse(r#"{"B": [[0,1],[-1,0]], "seq": [1,2,1,2,1]}"#).unwrap()
    }

    #[test]
    fn sigma_resolution() {
        let (mp, source) = resolve_sigma(&pentagon()).unwrap();
        assert_eq!((mp.sigma.one_based(), source), (vec![2, 1], "search"));
        let p = PlanFile::parse(r#"{"B": [[0,1],[-1,0]], "seq": [1,2,1]}"#).unwrap();
        let (mp, source) = resolve_sigma(&p).unwrap();
        assert_eq!((mp.sigma, source), (Permutation::identity(2), "none"));
    }

    #[test]
    fn grids() {
        assert_eq!(log_grid(1), vec![1.0]);
        let g = log_grid(3);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[1] - 1.0).abs() < 1e-15 && (g[2] - 10.0).abs() < 1e-13);
        let out = verify_identity(&pentagon(), Some(4), &Overrides::default()).unwrap();
        assert_eq!(out.json["points"], 16);
        let big = verify_identity(&pentagon(), Some(1001), &Overrides::default());
        assert!(matches!(big, Err(Failure::Resource(_))));
    }

    #[test]
    fn flow_summary() {
        let out = flow(&pentagon(), Some(0.25), None).unwrap();
        assert_eq!(out.json["periodic"], true);
        assert_eq!(out.json["samples"], 25);
        assert!(out.json["action"].as_f64().unwrap().abs() < 1e-12);
    }
}
