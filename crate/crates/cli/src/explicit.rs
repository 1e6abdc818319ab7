use std::path::PathBuf;

use adelic_core::explicit::{
    convergence_table, default_calibration_reference, doubling_ns, fubini_terms, load_zeros, sharp, theta_mellin,
    theta_scale, weil_pairing, Calibration, FormulaContext, PairingMode, SchwartzProfile, TestFunction,
    ThetaMellinMethod,
};
use adelic_core::number::DEFAULT_SIEVE_BOUND;
use clap::Args;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{csv_text, emit, emit_json, num};
use crate::{CmdResult, Failure, Format, OutputArgs};

const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Args, Debug)]
pub struct ExplicitArgs {
    /// Zeros file: one ordinate per line, '#' comments allowed.
    #[arg(long)]
    pub zeros: PathBuf,
    /// Number of zeros to sum (default: the whole table).
    #[arg(long)]
    pub num_zeros: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SIEVE_BOUND)]
    pub prime_cutoff: u64,
    /// Support [a, b] of the bump, as a,b.
    #[arg(long, value_delimiter = ',', num_args = 1..=2, default_values_t = [2.0, 8.0])]
    pub support: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Solve for c_∞ on the reference bump around 1 and store it next to the zeros file.
    #[arg(long)]
    pub calibrate: bool,
    /// Convergence table (N, discrepancy) over doubling N.
    #[arg(long)]
    pub sweep: bool,
    /// Weil pairing ⟨f, f^♯⟩ in both modes for the bump and random bumps.
    #[arg(long)]
    pub positivity: bool,
    /// Number of random bumps drawn for --positivity.
    #[arg(long, default_value_t = 3)]
    pub random: usize,
    /// The theta-series Fubini demonstration.
    #[arg(long)]
    pub fubini: bool,
    /// Exit 1 if the discrepancy exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
    /// csv emits the --sweep table only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn random_bump(rng: &mut ChaCha8Rng) -> Result<TestFunction, Failure> {
    let lo: f64 = rng.gen_range(1.2..6.0);
    let hi = lo * rng.gen_range(1.3..2.5);
    Ok(TestFunction::bump_on(lo, hi, rng.gen_range(0.2..2.0))?)
}

fn fubini_demo(ctx: &FormulaContext) -> Result<Value, Failure> {
    let eta = SchwartzProfile::eta0();
    let terms = fubini_terms(&eta, 10)?;
    let one = Complex64::new(1.0, 0.0);
    let quad = theta_mellin(&eta, one, ThetaMellinMethod::Quadrature)?;
    let closed = theta_mellin(&eta, one, ThetaMellinMethod::ClosedForm)?;
    let scale = theta_scale(&eta)?;
    let at_zeros: Result<Vec<f64>, Failure> = ctx
        .gammas()
        .iter()
        .take(10)
        .map(|&g| Ok(theta_mellin(&eta, Complex64::new(0.5, g), ThetaMellinMethod::ClosedForm)?.norm() / scale))
        .collect();
    Ok(json!({
        "per_term_integrals": terms,
        "sum_of_terms": terms.iter().sum::<f64>(),
        "theta_mellin_at_1": { "quadrature": quad.re, "closed_form": closed.re },
        "relative_values_at_zeros": at_zeros?,
    }))
}

pub fn run(a: &ExplicitArgs, seed: u64) -> CmdResult {
    if a.support.len() != 2 {
        return Err(Failure::Usage("--support needs two values a,b".into()));
    }
    let zeros = load_zeros(&a.zeros)?;
    let n = a.num_zeros.unwrap_or(zeros.len());
    let mut ctx = FormulaContext::new(zeros, n, a.prime_cutoff)?;
    let cal_path = Calibration::path_for(&a.zeros);
    if a.calibrate {
        let cal = ctx.calibrate(&default_calibration_reference(), "bump on [e^-0.6, e^0.6]")?;
        cal.save(&cal_path)?;
    } else if cal_path.exists() {
        ctx.calibration = Some(Calibration::load(&cal_path)?);
    }
    let h = TestFunction::bump_on(a.support[0], a.support[1], a.amplitude)?;
    let report = ctx.report(&h)?;

    let mut out = serde_json::Map::new();
    out.insert("zeros_file".into(), json!(a.zeros.display().to_string()));
    out.insert("num_zeros".into(), json!(n));
    out.insert("prime_cutoff".into(), json!(a.prime_cutoff));
    out.insert("support".into(), json!(a.support));
    out.insert("calibration".into(), serde_json::to_value(&ctx.calibration).unwrap_or(Value::Null));
    out.insert("report".into(), serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?);

    let mut sweep_rows = Vec::new();
    if a.sweep {
        let table = convergence_table(&h, &ctx, &doubling_ns(100, n))?;
        out.insert("convergence".into(), json!(table.iter().map(|(k, d)| json!([k, d])).collect::<Vec<_>>()));
        sweep_rows = table.iter().map(|(k, d)| vec![k.to_string(), num(*d)]).collect();
    }

    let mut failures = Vec::new();
    if a.positivity {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fs = vec![h.clone()];
        for _ in 0..a.random {
            fs.push(random_bump(&mut rng)?);
        }
        let mut rows = Vec::new();
        for f in &fs {
            let fs_ = sharp(f);
            let spectral = weil_pairing(f, &fs_, PairingMode::Spectral, &ctx)?;
            let geometric = weil_pairing(f, &fs_, PairingMode::Geometric, &ctx)?;
            let (lo, hi) = f.support();
            if spectral < -POSITIVITY_TOL {
                failures.push(format!("⟨f, f^♯⟩ = {spectral:e} < 0 for the bump on [{lo}, {hi}]"));
            }
            rows.push(json!({
                "support": [lo, hi],
                "spectral": spectral,
                "geometric": geometric,
                "difference": (spectral - geometric).abs(),
            }));
        }
        out.insert("positivity".into(), json!(rows));
    }
    if a.fubini {
        out.insert("fubini".into(), fubini_demo(&ctx)?);
    }

    match a.format {
        Format::Csv if a.sweep => emit(&a.out, &csv_text(&["N", "discrepancy"], &sweep_rows)?)?,
        Format::Csv => return Err(Failure::Usage("csv output is the --sweep table; add --sweep".into())),
        Format::Json => emit_json(&a.out, &Value::Object(out))?,
    }
    if let Some(tol) = a.tol {
        if report.discrepancy() > tol {
            failures.push(format!("discrepancy {:e} exceeds {tol:e}", report.discrepancy()));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Inconsistent(failures.join("; ")))
    }
}
