use adelic_core::bc::{galois_act, galois_orbit, gr_mul, rho_n, GaloisElement, GroupRingElement, QLatticePoint};
use adelic_core::groupoid::{
    holonomy_identity, padic_real_fiber, padic_real_reduce, quad_fiber, quad_reduce, PadicRealPoint, QuadPoint,
};
use adelic_core::number::{Rational, Valuation};
use clap::{Args, ValueEnum};
use serde_json::json;

use crate::output::emit_json;
use crate::thermo::parse_rational;
use crate::{CmdResult, Failure, OutputArgs};

#[derive(Args, Debug)]
pub struct BcArgs {
    #[arg(long, default_value_t = 2)]
    pub n: u64,
    /// Level M: the basis e_{j/M}, j = 0..M−1, is pushed through ρ_n.
    #[arg(long, default_value_t = 4)]
    pub level: u64,
    /// Galois element u, a unit mod M·n (default: the least unit > 1).
    #[arg(long)]
    pub u: Option<i64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn run_bc(a: &BcArgs) -> CmdResult {
    if a.n == 0 || a.level == 0 {
        return Err(Failure::Usage("--n and --level must be positive".into()));
    }
    let big = a.level * a.n;
    let u = match a.u {
        Some(u) => u,
        None => (2..=big.max(2)).find(|&u| gcd(u, big) == 1).unwrap_or(1) as i64,
    };
    let sigma = GaloisElement::new(big, u)?;
    let mut images = Vec::new();
    let mut commutes = true;
    for j in 0..a.level {
        let r = Rational::new(j.into(), a.level.into());
        let e = GroupRingElement::basis(&r);
        let img = rho_n(&e, a.n)?;
        let lhs = galois_act(&sigma, &img)?;
        let rhs = rho_n(&galois_act(&GaloisElement::new(big, u)?, &e)?, a.n)?;
        commutes &= lhs == rhs;
        images.push(json!({ "basis": r.to_string(), "image": img }));
    }
    let e = rho_n(&GroupRingElement::one(), a.n)?;
    let idempotent = gr_mul(&e, &e) == e;
    let pt = QLatticePoint::new(1, 1.0)?;
    let orbit = galois_orbit(&Rational::new(1.into(), a.level.into()), &pt);
    let report = json!({
        "n": a.n,
        "level": a.level,
        "rho_images": images,
        "idempotent": { "element": e, "squares_to_itself": idempotent },
        "galois": { "u": u, "modulus": big, "commutes_with_rho": commutes },
        "psi_orbit": orbit,
    });
    emit_json(&a.out, &report)?;
    if !idempotent || !commutes || !orbit.rational {
        return Err(Failure::Inconsistent("group ring identities failed".into()));
    }
    Ok(())
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// ℝ² modulo the units of ℤ[√2].
    Quad,
    /// ℚ_p × ℝ modulo ±p^ℤ.
    Padic,
}

#[derive(Args, Debug)]
pub struct SemilocalArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// x y for --mode quad.
    #[arg(long, num_args = 2, allow_negative_numbers = true)]
    pub point: Option<Vec<f64>>,
    #[arg(long)]
    pub p: Option<u64>,
    /// v_p(x) as an integer, or +inf for x = 0.
    #[arg(long, allow_hyphen_values = true)]
    pub xval: Option<String>,
    /// p-adic unit part of x, as n/d.
    #[arg(long, allow_hyphen_values = true)]
    pub xunit: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn run_semilocal(a: &SemilocalArgs) -> CmdResult {
    match a.mode {
        Mode::Quad => {
            let pt = a.point.as_ref().ok_or_else(|| Failure::Usage("--point x y is required".into()))?;
            let p = QuadPoint { x: pt[0], y: pt[1] };
            let fiber = quad_fiber(p);
            let reduced = match quad_reduce(p) {
                Ok((r, n, s)) => json!({ "point": r, "n": n, "sign": s }),
                Err(e) => json!({ "undefined": e.to_string() }),
            };
            emit_json(&a.out, &json!({ "mode": "quad", "input": p, "reduced": reduced, "fiber": fiber }))
        }
        Mode::Padic => {
            let p = a.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
            let y = a.y.ok_or_else(|| Failure::Usage("--y is required".into()))?;
            let xval = match a.xval.as_deref() {
                None => return Err(Failure::Usage("--xval is required".into())),
                Some("+inf") | Some("inf") => Valuation::Infinity,
                Some(s) => Valuation::Finite(
                    s.parse::<i64>().map_err(|_| Failure::Usage(format!("--xval '{s}' is not an integer")))?,
                ),
            };
            let xunit = match (&xval, &a.xunit) {
                (Valuation::Infinity, _) => None,
                (_, Some(u)) => Some(parse_rational(u)?),
                (_, None) => Some(Rational::from_integer(1.into())),
            };
            let pt = PadicRealPoint::new(xval, xunit, y, p)?;
            let fiber = padic_real_fiber(&pt, p);
            let reduced = padic_real_reduce(&pt, p).map(|r| json!(r)).unwrap_or_else(|e| json!({ "undefined": e.to_string() }));
            let holonomy = holonomy_identity(&pt, p);
            let report = json!({
                "mode": "padic",
                "p": p,
                "input": pt,
                "invariant": pt.invariant(p),
                "reduced": reduced,
                "fiber": fiber,
                "holonomy": holonomy.as_ref().map(|h| json!(h)).unwrap_or_else(|e| json!({ "undefined": e.to_string() })),
            });
            emit_json(&a.out, &report)?;
            match holonomy {
                Ok(h) if !h.holds => Err(Failure::Inconsistent("holonomy identity failed".into())),
                _ => Ok(()),
            }
        }
    }
}
