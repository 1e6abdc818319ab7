use adelic_core::number::Rational;
use adelic_core::thermo::{digits, periodic_digits, zp, zp_brute_force, DEFAULT_TRUNCATION};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use crate::output::{csv_text, emit, emit_json, num};
use crate::{CmdResult, Failure, Format, OutputArgs};

const ORACLE_ENUMERATION: u64 = 1 << 16;

#[derive(Args, Debug)]
pub struct ThermoArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub beta: f64,
    /// λ_j = 1 + j(p−1)/N for j = 1..N.
    #[arg(long, conflicts_with = "lambda")]
    pub grid: Option<u64>,
    /// A single λ, as n/d or an integer.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Digit truncation K.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub k: usize,
    /// Add the orbit-enumeration value as a column.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.trim().parse::<Rational>().map_err(|_| Failure::Usage(format!("cannot parse '{s}' as a rational")))
}

pub fn run(a: &ThermoArgs) -> CmdResult {
    let lambdas: Vec<Rational> = match (&a.grid, &a.lambda) {
        (Some(0), _) => return Err(Failure::Usage("--grid must be positive".into())),
        (Some(n), None) => (1..=*n)
            .map(|j| Rational::from_integer(1.into()) + Rational::new(((a.p - 1) * j).into(), (*n).into()))
            .collect(),
        (None, Some(l)) => vec![parse_rational(l)?],
        _ => return Err(Failure::Usage("give one of --grid or --lambda".into())),
    };
    let rows: Result<Vec<Vec<String>>, Failure> = lambdas
        .par_iter()
        .map(|l| {
            let z = zp(l, a.p, a.beta, a.k)?;
            let lf = adelic_core::number::rational_to_f64(l);
            let mut row = vec![
                l.numer().to_string(),
                l.denom().to_string(),
                num(a.beta),
                num(z.value),
                num(z.tail_bound),
                num(lf.powf(-a.beta) * z.value),
            ];
            if a.oracle {
                row.push(num(zp_brute_force(l, a.p, a.beta, ORACLE_ENUMERATION)?));
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let mut header = vec!["lambda_num", "lambda_den", "beta", "Zp", "tail_bound", "zeta_p"];
    if a.oracle {
        header.push("oracle");
    }
    match a.format {
        Format::Csv => emit(&a.out, &csv_text(&header, &rows)?),
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut m = serde_json::Map::new();
                    for (h, v) in header.iter().zip(r) {
                        let val = match h {
                            &"lambda_num" | &"lambda_den" => json!(v),
                            _ => json!(v.parse::<f64>().unwrap_or(f64::NAN)),
                        };
                        m.insert(h.to_string(), val);
                    }
                    serde_json::Value::Object(m)
                })
                .collect();
            emit_json(&a.out, &json!({ "p": a.p, "rows": items }))
        }
    }
}

#[derive(Args, Debug)]
pub struct DigitsArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn run_digits(a: &DigitsArgs) -> CmdResult {
    let l = parse_rational(&a.lambda)?;
    let d = digits(&l, a.p, a.k)?;
    let per = periodic_digits(&l, a.p)?;
    emit_json(
        &a.out,
        &json!({
            "p": a.p,
            "lambda": l.to_string(),
            "K": a.k,
            "digits": d.coeffs,
            "preperiod": per.preperiod,
            "period": per.period,
        }),
    )
}
