//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weakbound::families::{build_spec, build_star_spec};
use weakbound::functionals::{asymptotic_restricted, gill_bound, oracle_ratio, w, w_star};
use weakbound::operators::{superlevel_measure, OperatorKind};
use weakbound::optimize::{
    auxiliary_suprema, duality_map, maximize_w, push_check, x_infinity, UniformBoundConstants, DEFAULT_GRID,
    DEFAULT_REFINE_TOL,
};
use weakbound::verify::{
    duality_samples, random_spec, random_star_spec, run_suite, VerifyOptions, GILL_DIGITS, TABLE1,
};

const SEED: u64 = 20240917;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    summary: String,
}

fn outcome(ok: bool, summary: String) -> Outcome {
    Outcome { ok, summary }
}

fn table1() -> Outcome {
    let start = Instant::now();
    let mut worst_w: f64 = 0.0;
    let mut worst_loc: f64 = 0.0;
    for &(m, b, d, _, value) in &TABLE1 {
        match maximize_w(m, DEFAULT_GRID, DEFAULT_REFINE_TOL) {
            Ok(r) => {
                worst_w = worst_w.max((r.value - value).abs());
                worst_loc = worst_loc.max((r.b - b).abs()).max((r.d - d).abs());
            }
            Err(e) => return outcome(false, format!("m={m}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_w <= 2e-3 && worst_loc <= 0.05 && secs < 10.0,
        format!("max |W - table| = {worst_w:.2e}, max (b,d) offset = {worst_loc:.2e}, {secs:.3} s"),
    )
}

fn gill() -> Outcome {
    let values: Vec<f64> = (1..=4).map(|m| gill_bound(m as f64)).collect();
    let ok = values.iter().zip(GILL_DIGITS).all(|(v, g)| ((v * 1000.0).floor() / 1000.0 - g).abs() < 1e-12);
    outcome(ok, format!("values {values:.6?}"))
}

fn adjoint_m1() -> Outcome {
    match w_star(0.649, 0.150, 1) {
        Ok(v) => outcome(v >= 1.383, format!("W*(0.649, 0.150, 1) = {v:.6}")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn asymptotic_root() -> Outcome {
    match (x_infinity(1e-10), asymptotic_restricted(0.548, 1.164)) {
        (Ok(x), Ok(v)) => outcome(
            (x - 0.54807758).abs() <= 1e-7 && v >= 1.37,
            format!("x_inf = {x:.10}, value(0.548, 1.164) = {v:.8}"),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

fn oracle(adjoint: bool) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + adjoint as u64);
    let mut worst: f64 = 0.0;
    let mut bad_intervals = 0;
    for i in 0..300 {
        let m = 1 + (i % 8) as u32;
        let (op, f, closed, expected) = if adjoint {
            let p = random_star_spec(&mut rng, m);
            (OperatorKind::lambda_star(m), build_star_spec(&p), w_star(p.b_star, p.d_star, m), (p.d_star, 1.0))
        } else {
            let p = random_spec(&mut rng, m);
            (OperatorKind::lambda(m), build_spec(&p), w(p.b, p.d, m), (1.0, p.d))
        };
        let res = (|| {
            let (op, f) = (op?, f?);
            let level = superlevel_measure(op, &f, 1.0)?;
            Ok::<_, weakbound::Error>((closed?, oracle_ratio(op, &f)?.ratio, level.intervals))
        })();
        match res {
            Ok((c, o, intervals)) => {
                worst = worst.max((c - o).abs());
                let single = matches!(intervals.as_slice(), [(a, b)]
                    if (a - expected.0).abs() <= 1e-9 * expected.0 && (b - expected.1).abs() <= 1e-9 * expected.1);
                bad_intervals += usize::from(!single);
            }
            Err(e) => return outcome(false, format!("case {i}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-7 && bad_intervals == 0 && secs < 60.0,
        format!("300 cases, max |W - oracle| = {worst:.2e}, interval mismatches = {bad_intervals}, {secs:.3} s"),
    )
}

fn duality() -> Outcome {
    let mut worst = [0.0f64; 3];
    for m in 1..=10 {
        for b in duality_samples(m, 50) {
            match duality_map(b, m) {
                Ok(r) => {
                    worst[0] = worst[0].max(r.t0_residual);
                    worst[1] = worst[1].max(r.d_opt_residual);
                    worst[2] = worst[2].max(r.w_residual);
                }
                Err(e) => return outcome(false, format!("m={m} b={b}: {e}")),
            }
        }
    }
    outcome(
        worst.iter().all(|&r| r <= 1e-8),
        format!("max residuals t0* {:.2e}, d*_opt {:.2e}, W = W* {:.2e}", worst[0], worst[1], worst[2]),
    )
}

fn uniform_bound() -> Outcome {
    let c = UniformBoundConstants::new();
    let pair_min = (5..=200u32)
        .map(|m| w((1.0 / m as f64).exp(), (3.0 / m as f64).exp(), m).unwrap_or(f64::NAN))
        .fold(f64::INFINITY, f64::min);
    let rational_min = (25..=10_000u32).map(|m| c.rational_bound(m as f64)).fold(f64::INFINITY, f64::min);
    let u0 = c.u0(25.0);
    let p_min = [0.0, 3.3]
        .iter()
        .flat_map(|&big_m| (1..=10_000u32).map(move |m| c.p(m as f64, big_m)))
        .fold(f64::INFINITY, f64::min);
    outcome(
        pair_min >= 1.34 && rational_min >= 1.34 && u0 <= 1.79 && p_min > 0.0,
        format!("min pair W = {pair_min:.6}, min rational = {rational_min:.6}, u0(25) = {u0:.6}, min P = {p_min:.3e}"),
    )
}

fn eigen() -> Outcome {
    match run_suite(&["eigen"], SEED, &VerifyOptions::default()) {
        Ok(r) => outcome(r[0].passed(), format!("max deviation {:.2e}", r[0].worst_residual)),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn consistency() -> Outcome {
    let (x, y, m) = (0.548, 1.164, 10_000u32);
    let mf = m as f64;
    let res = (|| {
        let target = asymptotic_restricted(x, y)?;
        let direct = w((2.0 * x / mf).exp(), (2.0 * (x + y) / mf).exp(), m)?;
        let adjoint = w_star((-2.0 * x / (2.0 + mf)).exp(), (-2.0 * (x + y) / (2.0 + mf)).exp(), m)?;
        Ok::<_, weakbound::Error>(((direct - target).abs(), (adjoint - target).abs()))
    })();
    match res {
        Ok((a, b)) => outcome(a <= 2e-3 && b <= 2e-3, format!("|W - limit| = {a:.2e}, |W* - limit| = {b:.2e}")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn suprema() -> Outcome {
    let records = auxiliary_suprema();
    let exact = 1.5f64.ln() / (0.75 - 1.5f64.ln());
    let mut ok = records.iter().all(|r| r.holds());
    let mut parts = Vec::new();
    for r in &records {
        if r.bound == 1.18 {
            ok &= (r.value - exact).abs() <= 1e-12 && (r.argmax - r.hi).abs() <= 1e-12;
        }
        parts.push(format!("{:.5}<={}", r.value, r.bound));
    }
    outcome(ok && records.len() == 5, parts.join(", "))
}

fn push() -> Outcome {
    match push_check(128) {
        Ok(r) => outcome(
            r.violation <= 1e-6,
            format!(
                "{} points, sup {:.7}, best {:.7}, violation {:.1e}",
                r.grid_points, r.curve_supremum, r.best_value, r.violation
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("table reproduction for m = 1..4", table1),
        ("conjectured constants to 3 decimals", gill),
        ("adjoint value at m = 1", adjoint_m1),
        ("asymptotic root and sample value", asymptotic_root),
        ("oracle equivalence", || oracle(false)),
        ("adjoint oracle equivalence", || oracle(true)),
        ("duality residuals", duality),
        ("uniform 1.34 bound", uniform_bound),
        ("eigenfunctions", eigen),
        ("asymptotic consistency at m = 1e4", consistency),
        ("auxiliary suprema", suprema),
        ("push property", push),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.ok);
        println!("{} {:>2} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.summary);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
