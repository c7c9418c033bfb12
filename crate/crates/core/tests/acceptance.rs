//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Every tolerance is pinned as a constant below.

use std::process::ExitCode;
use std::time::Instant;

use cqed_feedback::scenario::{self, Scenario, ScenarioConfig};
use cqed_feedback::{
    integrate_abs2_residues, transfer_c, transfer_d, FeedbackEngine, Factor, MirrorCavity,
    Quadrature, SpectralFunction, SystemParams,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const UNITARITY_DRAWS: usize = 1000;
const UNITARITY_TOL: f64 = 1e-12;
const NORMALIZATION_SETS: usize = 50;
const NORMALIZATION_TOL: f64 = 1e-8;
const STRONG_COUPLING_TOL_25: f64 = 0.01;
const STRONG_COUPLING_TOL_250: f64 = 0.001;
const ORACLE_REL_TOL: f64 = 1e-10;
/// Quadrature tolerance requested relative to the oracle value.
const ORACLE_QUAD_REL_TOL: f64 = 1e-12;
const TELESCOPING_TOL: f64 = 1e-7;
const SATURATION_GAIN_MAX: f64 = 0.05;
const SATURATION_GAP_MIN: f64 = 0.01;
const LEFT_EDGE_KAPPA_IN: f64 = 1e-3;
const LEFT_EDGE_MIN: f64 = 0.99;
const POINTWISE_TOL: f64 = 1e-14;
const FIT_RESIDUAL_MAX: f64 = 0.02;
const WIDTH_REL_TOL: f64 = 0.05;
const DETERMINISM_FIG4_ROUNDS: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_params(rng: &mut StdRng) -> SystemParams {
    let kappa = 10f64.powf(rng.gen_range(-1.0..1.0));
    SystemParams::new(
        kappa,
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-3.0..3.0) * kappa,
        rng.gen_range(0.0..5.0) * kappa,
        rng.gen_range(0.0..5.0) * kappa,
    )
    .expect("valid draw")
}

fn optimal(lambda_l: f64) -> SystemParams {
    SystemParams::optimal(1.0, lambda_l).expect("valid optimal params")
}

fn unitarity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst = 0.0f64;
    for _ in 0..UNITARITY_DRAWS {
        let p = random_params(&mut rng);
        let k = p.k_c + rng.gen_range(-20.0..20.0) * p.kappa;
        let (cl, cr) = transfer_c(k, &p).map_err(|e| e.to_string())?;
        worst = worst.max((cl.norm_sqr() + cr.norm_sqr() - 1.0).abs());
    }
    let msg = format!("max ||C_L|^2+|C_R|^2-1| = {worst:.2e} over {UNITARITY_DRAWS} draws (tol {UNITARITY_TOL:e})");
    if worst < UNITARITY_TOL { Ok(msg) } else { Err(msg) }
}

fn first_round_normalization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut worst = 0.0f64;
    for _ in 0..NORMALIZATION_SETS {
        let p = random_params(&mut rng);
        let (r, l) = FeedbackEngine::new(p)
            .and_then(|e| e.first_round_prob())
            .map_err(|e| e.to_string())?;
        worst = worst.max((r + l - 1.0).abs());
    }
    let msg = format!("max |p1R+p1L-1| = {worst:.2e} over {NORMALIZATION_SETS} sets (tol {NORMALIZATION_TOL:e})");
    if worst < NORMALIZATION_TOL { Ok(msg) } else { Err(msg) }
}

fn strong_coupling() -> Outcome {
    let mut p = Vec::new();
    for l in [2.5, 25.0, 250.0] {
        let (r, _) = FeedbackEngine::new(optimal(l))
            .and_then(|e| e.first_round_prob())
            .map_err(|e| e.to_string())?;
        p.push(r);
    }
    let d: Vec<f64> = p.iter().map(|x| (x - 0.5).abs()).collect();
    let monotone = d[0] > d[1] && d[1] > d[2];
    let msg = format!(
        "p1R = {:.7} / {:.7} / {:.7}; |p-0.5| at 25: {:.2e} (tol {STRONG_COUPLING_TOL_25}), at 250: {:.2e} (tol {STRONG_COUPLING_TOL_250}), monotone {monotone}",
        p[0], p[1], p[2], d[1], d[2]
    );
    if monotone && d[1] < STRONG_COUPLING_TOL_25 && d[2] < STRONG_COUPLING_TOL_250 { Ok(msg) } else { Err(msg) }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut sets = vec![optimal(2.5), optimal(0.3), optimal(25.0)];
    sets.extend((0..5).map(|_| random_params(&mut rng)));
    let mut worst = 0.0f64;
    let mut checked = 0;
    for p in sets {
        let fc = vec![Factor::CavityLorentzian];
        let fin = vec![Factor::InputLorentzian { kappa_in: 0.7 * p.kappa }];
        let mut integrands = vec![
            vec![Factor::CavityLorentzian, Factor::DR],
            vec![Factor::CavityLorentzian, Factor::DL],
            [fin.clone(), vec![Factor::CR]].concat(),
            [fin.clone(), vec![Factor::CL]].concat(),
        ];
        for n in 2..=4u32 {
            let mut f = [fc.clone(), vec![Factor::DL, Factor::CR]].concat();
            if n > 2 {
                f.push(Factor::CLPower(n - 2));
            }
            integrands.push(f);
        }
        for factors in integrands {
            let s = SpectralFunction::new(p, factors).map_err(|e| e.to_string())?;
            if s.pole_count() > 12 {
                continue;
            }
            let exact = s
                .to_rational()
                .and_then(|r| integrate_abs2_residues(&r))
                .map_err(|e| e.to_string())?;
            let q = Quadrature::new((ORACLE_QUAD_REL_TOL * exact).max(1e-300))
                .integrate_abs2(&s).map_err(|e| e.to_string())?.value;
            if exact.abs() < 1e-300 {
                worst = worst.max(q.abs());
            } else {
                worst = worst.max(((q - exact) / exact).abs());
            }
            checked += 1;
        }
    }
    let msg = format!("max relative diff {worst:.2e} over {checked} integrands (tol {ORACLE_REL_TOL:e})");
    if worst < ORACLE_REL_TOL { Ok(msg) } else { Err(msg) }
}

fn telescoping() -> Outcome {
    let e = FeedbackEngine::new(optimal(2.5)).map_err(|e| e.to_string())?;
    let trace = e.trace(100).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut running = 0.0;
    let mut sums = Vec::new();
    for r in &trace.rounds {
        running += r.p_r;
        sums.push(running);
    }
    for n in [2usize, 5, 10, 50, 100] {
        let closed = 1.0 - e.left_survival(n).map_err(|e| e.to_string())?;
        worst = worst.max((sums[n - 1] - closed).abs());
    }
    let msg = format!("max |sum p_n - (1 - L_N)| = {worst:.2e} for N in {{2,5,10,50,100}} (tol {TELESCOPING_TOL:e})");
    if worst < TELESCOPING_TOL { Ok(msg) } else { Err(msg) }
}

fn saturation() -> Outcome {
    let trace = FeedbackEngine::new(optimal(2.5))
        .and_then(|e| e.trace(100))
        .map_err(|e| e.to_string())?;
    let p = trace.cumulative();
    let gain = p[99] - p[9];
    let gap = 1.0 - p[99];
    let below = (2..=100).all(|n| p[n - 1] < 1.0 - 0.5f64.powi(n as i32));
    let msg = format!(
        "P10 = {:.5}, P100 = {:.5}; P100-P10 = {gain:.4} (< {SATURATION_GAIN_MAX}), 1-P100 = {gap:.4} (> {SATURATION_GAP_MIN}), below 1-2^-N: {below}",
        p[9], p[99]
    );
    if gain < SATURATION_GAIN_MAX && gap > SATURATION_GAP_MIN && below { Ok(msg) } else { Err(msg) }
}

fn linewidth_left_edge() -> Outcome {
    let mut values = Vec::new();
    for l in [0.1, 0.5, 2.5] {
        let p = FeedbackEngine::new(optimal(l))
            .and_then(|e| e.single_trial_prob(LEFT_EDGE_KAPPA_IN))
            .map_err(|e| e.to_string())?;
        values.push(p);
    }
    let msg = format!(
        "P1 at kappa_in = {LEFT_EDGE_KAPPA_IN:e} kappa: {:.5} / {:.5} / {:.5} (> {LEFT_EDGE_MIN})",
        values[0], values[1], values[2]
    );
    if values.iter().all(|&v| v > LEFT_EDGE_MIN) { Ok(msg) } else { Err(msg) }
}

fn optimal_pointwise() -> Outcome {
    let mut worst_c = 0.0f64;
    for (kappa, k_c, l) in [(1.0, 0.0, 2.5), (0.3, 4.0, 0.1), (2.0, -1.5, 40.0)] {
        let p = SystemParams::new(kappa, k_c, 0.0, l, std::f64::consts::SQRT_2 * l).map_err(|e| e.to_string())?;
        let (cl, cr) = transfer_c(k_c, &p).map_err(|e| e.to_string())?;
        worst_c = worst_c.max(cl.norm()).max((cr - 1.0).norm());
    }
    let (dl, dr) = transfer_d(0.0, &optimal(2.5)).map_err(|e| e.to_string())?;
    let worst_d = (dl - 0.5).norm().max((dr + 0.5).norm());
    let msg = format!(
        "C_L(k_c)=0, C_R(k_c)=1 max err {worst_c:.1e}; D_L(k_c)={dl:.3}, D_R(k_c)={dr:.3} err {worst_d:.1e} (tol {POINTWISE_TOL:e})"
    );
    if worst_c < POINTWISE_TOL && worst_d < POINTWISE_TOL { Ok(msg) } else { Err(msg) }
}

fn quasimode() -> Outcome {
    let cavity = MirrorCavity::lossless(0.99, 1.0).map_err(|e| e.to_string())?;
    let q = cavity
        .find_quasimode(std::f64::consts::FRAC_PI_2)
        .map_err(|e| e.to_string())?;
    let width_err = (q.kappa_fit - q.half_max_width).abs() / q.half_max_width;
    let msg = format!(
        "k_c = {:.6}, kappa_fit = {:.6}, half-max width = {:.6}; residual {:.2e} (< {FIT_RESIDUAL_MAX}), width mismatch {width_err:.2e} (< {WIDTH_REL_TOL})",
        q.k_c, q.kappa_fit, q.half_max_width, q.fit_residual
    );
    if q.fit_residual < FIT_RESIDUAL_MAX && width_err < WIDTH_REL_TOL { Ok(msg) } else { Err(msg) }
}

fn run_scenario(s: Scenario, dir: &std::path::Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut config = ScenarioConfig::default();
    if s == Scenario::Fig4 {
        config.rounds = Some(DETERMINISM_FIG4_ROUNDS);
    }
    let resolved = config.resolve(s).map_err(|e| e.to_string())?;
    let series = scenario::run(&resolved).map_err(|e| e.to_string())?;
    scenario::write_all(&series, dir, resolved.format).map_err(|e| e.to_string())?;
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let path = e.expect("dir entry").path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&path).expect("readable output"))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let all = [Scenario::Fig2, Scenario::Fig3, Scenario::Fig4, Scenario::Fig5, Scenario::Sweep, Scenario::Modes];
    let mut files = 0;
    for s in all {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        let first = run_scenario(s, a.path())?;
        let second = run_scenario(s, b.path())?;
        if first.is_empty() || first != second {
            return Err(format!("scenario {s}: outputs differ between runs"));
        }
        files += first.len();
    }
    Ok(format!("{files} files byte-identical across two runs of all 6 scenarios (fig4 at {DETERMINISM_FIG4_ROUNDS} rounds)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("unitarity", unitarity),
        ("first-round normalization", first_round_normalization),
        ("strong-coupling limit", strong_coupling),
        ("oracle equivalence", oracle_equivalence),
        ("telescoping identity", telescoping),
        ("saturation", saturation),
        ("linewidth left edge", linewidth_left_edge),
        ("optimal pointwise values", optimal_pointwise),
        ("quasi-mode fit", quasimode),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{elapsed:.2}s]", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} [{elapsed:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
