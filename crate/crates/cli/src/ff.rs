use std::fs;
use std::path::PathBuf;

use adelic_core::ff::{
    count_points, frobenius_eigenvalues, numerator_polynomial, psd_check, recover_counts, rh_check, zeta_series,
    CurveCountData, PlaneCurve,
};
use clap::Args;
use serde_json::{json, Value};

use crate::output::emit_json;
use crate::{CmdResult, Failure, OutputArgs};

const RH_TOL: f64 = 1e-10;

#[derive(Args, Debug)]
pub struct FfArgs {
    /// JSON file: either {"q", "g", "counts"} or a plane curve
    /// {"p", "k", "modulus", "monomials", optional "genus", "max_n"}.
    pub spec: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_curve(v: &Value) -> Result<PlaneCurve, Failure> {
    let c: PlaneCurve = serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("curve spec: {e}")))?;
    c.validate()?;
    Ok(c)
}

/// Counts over F_{q^n}, n = 1..=max_n, from a curve spec.
fn curve_counts(v: &Value) -> Result<(CurveCountData, Vec<u64>), Failure> {
    let curve = parse_curve(v)?;
    let d = curve.degree() as usize;
    let default_genus = if d >= 1 { (d - 1) * d.saturating_sub(2) / 2 } else { 0 };
    let g = v.get("genus").and_then(Value::as_u64).map(|g| g as usize).unwrap_or(default_genus);
    let max_n = v.get("max_n").and_then(Value::as_u64).unwrap_or(4).max(g as u64) as usize;
    let q = curve.p.pow(curve.ext_degree as u32);
    let counts: Result<Vec<u64>, Failure> = (1..=max_n).map(|n| Ok(count_points(&curve, n, None)?)).collect();
    let counts = counts?;
    let data = CurveCountData::new(q, g, counts.iter().map(|&c| c as i64).collect())?;
    Ok((data, counts))
}

pub fn run(a: &FfArgs) -> CmdResult {
    let v = read_json(&a.spec)?;
    let data = if v.get("counts").is_some() {
        let d: CurveCountData =
            serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("counts spec: {e}")))?;
        CurveCountData::new(d.q, d.g, d.counts)?
    } else if v.get("monomials").is_some() {
        curve_counts(&v)?.0
    } else {
        return Err(Failure::Usage("spec needs either \"counts\" or \"monomials\"".into()));
    };
    let series = zeta_series(&data, data.counts.len())?;
    let p = numerator_polynomial(&data)?;
    let eig = frobenius_eigenvalues(&p)?;
    let (rh_holds, dev) = rh_check(&p, RH_TOL)?;
    let recovered: Result<Vec<i64>, Failure> =
        (1..=data.counts.len() as u32).map(|n| Ok(recover_counts(&p, n)?)).collect();
    let recovered = recovered?;
    let psd = data.counts.first().filter(|_| data.g >= 1).map(|&n1| psd_check(data.g as u64, data.q, n1 as u64));
    let report = json!({
        "q": data.q,
        "g": data.g,
        "counts": data.counts,
        "zeta_series": series.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "P": p.coeffs,
        "functional_equation": p.functional_equation_holds(),
        "eigenvalues": eig.iter().map(|l| [l.re, l.im]).collect::<Vec<_>>(),
        "rh_deviation": dev,
        "rh_holds": rh_holds,
        "psd": psd,
        "recovered_counts": recovered,
    });
    emit_json(&a.out, &report)?;
    if !rh_holds {
        return Err(Failure::Inconsistent(format!("eigenvalues miss |λ| = √q by {dev:e}")));
    }
    if recovered != data.counts {
        return Err(Failure::Inconsistent("recovered counts differ from the input".into()));
    }
    if psd == Some(false) {
        return Err(Failure::Inconsistent("trace form is not positive semidefinite".into()));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    /// Plane curve JSON file.
    pub curve: PathBuf,
    /// Extension degree n: count over F_{(p^k)^n}.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Modulus of degree n·k for the extension, coefficients lowest first, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn run_points(a: &PointsArgs) -> CmdResult {
    let v = read_json(&a.curve)?;
    let curve = parse_curve(&v)?;
    let count = count_points(&curve, a.n, a.modulus.as_deref())?;
    let q = curve.p.pow((curve.ext_degree * a.n) as u32);
    emit_json(&a.out, &json!({ "field_size": q, "n": a.n, "count": count }))
}
