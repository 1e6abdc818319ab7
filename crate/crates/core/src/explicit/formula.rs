//! Both sides of the explicit formula for the trivial character over ℚ.
//!
//! Spectral: Σ_γ [ĥ(1/2+iγ) + ĥ(1/2−iγ)].
//! Geometric: ĥ(0) + ĥ(1) − discLog·h(1) − Σ_p L_p(h) − W_∞(h).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::mellin::{mellin, MellinPlan};
use super::quadrature::{integrate, smooth_trapezoid};
use super::test_function::TestFunction;
use super::zeros::ZeroTable;
use crate::error::{Error, Result};
use crate::number::PrimeTable;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest imaginary part tolerated in the value of a real formula side.
pub const REALITY_TOL: f64 = 1e-10;

/// Neumaier-compensated sum in the given order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn compensated_sum_c(values: &[Complex64]) -> Complex64 {
    Complex64::new(compensated_sum(values.iter().map(|v| v.re)), compensated_sum(values.iter().map(|v| v.im)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSide {
    pub value: f64,
    pub imag: f64,
    pub tail_estimate: f64,
    pub num_zeros: usize,
}

/// Per-zero contributions ĥ(1/2+iγ_j) + ĥ(1/2−iγ_j), ascending in γ.
pub fn zero_terms(h: &TestFunction, gammas: &[f64]) -> Result<Vec<Complex64>> {
    let Some(&gmax) = gammas.last() else {
        return Ok(vec![]);
    };
    let plan = MellinPlan::new(h, gmax + 1.0)?;
    let real = h.is_real();
    let terms: Vec<Complex64> = gammas
        .par_iter()
        .map(|&g| {
            let up = plan.critical(g);
            // for real h the two values are conjugate
            let down = if real { up.conj() } else { plan.critical(-g) };
            up + down
        })
        .collect();
    if terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
        return Err(Error::NumericalFailure("non-finite Mellin value on the critical line".into()));
    }
    Ok(terms)
}

pub fn spectral_side(h: &TestFunction, zeros: &ZeroTable, n: usize) -> Result<SpectralSide> {
    let gammas = zeros.first(n)?;
    let terms = zero_terms(h, gammas)?;
    spectral_from_terms(h.is_real(), gammas, &terms)
}

pub(crate) fn spectral_from_terms(real: bool, gammas: &[f64], terms: &[Complex64]) -> Result<SpectralSide> {
    let total = compensated_sum_c(terms);
    if real && total.im.abs() > REALITY_TOL {
        return Err(Error::NumericalFailure(format!("spectral side of a real function has imaginary part {:e}", total.im)));
    }
    Ok(SpectralSide {
        value: total.re,
        imag: total.im,
        tail_estimate: tail_estimate(gammas, terms),
        num_zeros: gammas.len(),
    })
}

/// Fits log|term| ≈ α + βγ over the last decade of ordinates and integrates
/// the fitted decay against the zero density log(γ/2π)/2π beyond γ_N.
fn tail_estimate(gammas: &[f64], terms: &[Complex64]) -> f64 {
    let n = gammas.len();
    if n == 0 {
        return 0.0;
    }
    let gn = gammas[n - 1];
    let start = gammas.partition_point(|&g| g < gn / 10.0).min(n - 1);
    let pts: Vec<(f64, f64)> =
        (start..n).map(|j| (gammas[j], terms[j].norm().max(1e-300).ln())).collect();
    let last_max = terms[start..].iter().map(|t| t.norm()).fold(0.0, f64::max);
    let density = (gn / (2.0 * std::f64::consts::PI)).ln().max(1.0) / (2.0 * std::f64::consts::PI);
    if pts.len() < 3 {
        return last_max * density * gn;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let slope = sxy / sxx;
    if !(slope < -1e-12) {
        // no measurable decay: bound by the largest recent term per unit length
        return last_max * density * gn;
    }
    let at_end = (my + slope * (gn - mx)).exp();
    density * at_end / (-slope)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSide {
    pub h_hat0: Complex64,
    pub h_hat1: Complex64,
    pub h_at_one: Complex64,
    pub disc_log: f64,
    /// L_p(h) for every prime with a nonzero contribution
    pub per_prime: BTreeMap<u64, Complex64>,
    pub archimedean: Complex64,
}

impl GeometricSide {
    pub fn discriminant_term(&self) -> Complex64 {
        self.h_at_one * self.disc_log
    }

    pub fn prime_total(&self) -> Complex64 {
        let v: Vec<Complex64> = self.per_prime.values().copied().collect();
        compensated_sum_c(&v)
    }

    /// Σ_v of the local terms: finite places plus W_∞.
    pub fn local_total(&self) -> Complex64 {
        self.prime_total() + self.archimedean
    }

    pub fn value(&self) -> Complex64 {
        self.h_hat0 + self.h_hat1 - self.discriminant_term() - self.local_total()
    }
}

/// True when the log-support of `h` straddles 0, i.e. 1 ∈ supp h.
pub fn touches_one(h: &TestFunction) -> bool {
    let (lo, hi) = h.log_support();
    lo < 0.0 && hi > 0.0
}

pub fn geometric_side(h: &TestFunction, primes: &PrimeTable, disc_log: f64, c_inf: Option<f64>) -> Result<GeometricSide> {
    let (lo, hi) = h.log_support();
    let bound = primes.bound() as f64;
    if lo < hi && (hi >= bound.ln() || lo <= -bound.ln()) {
        return Err(Error::PreconditionViolation(format!(
            "support [{}, {}] must lie inside (1/{bound}, {bound})",
            lo.exp(),
            hi.exp()
        )));
    }
    let h_hat0 = mellin(h, ZERO)?;
    let h_hat1 = mellin(h, Complex64::new(1.0, 0.0))?;
    let h_at_one = if lo < hi { h.eval_log(0.0) } else { ZERO };

    let mut per_prime: BTreeMap<u64, Complex64> = BTreeMap::new();
    if lo < hi {
        let reach = hi.max(-lo).exp();
        for (p, k, _) in primes.prime_powers(reach) {
            let x = k as f64 * (p as f64).ln();
            let mut term = ZERO;
            if x < hi && x > lo {
                term += h.eval_log(x);
            }
            if -x > lo && -x < hi {
                term += h.eval_log(-x) * (-x).exp();
            }
            if term != ZERO {
                *per_prime.entry(p).or_insert(ZERO) += term * (p as f64).ln();
            }
        }
    }
    let archimedean = archimedean_term(h, c_inf)?;
    Ok(GeometricSide { h_hat0, h_hat1, h_at_one, disc_log, per_prime, archimedean })
}

/// W_∞(h) = ½ ∫_0^∞ h(1/t)(1/|1−t| + 1/(1+t)) dt/t, regularised when
/// 1 ∈ supp h and completed by c_∞·h(1).
pub fn archimedean_term(h: &TestFunction, c_inf: Option<f64>) -> Result<Complex64> {
    let (lo, hi) = h.log_support();
    if !(lo < hi) {
        return Ok(ZERO);
    }
    if !touches_one(h) {
        // in x = log u = −log t the weight is 1/|1−e^{−x}| + 1/(1+e^{−x})
        let weight = |x: f64| 1.0 / (1.0 - (-x).exp()).abs() + 1.0 / (1.0 + (-x).exp());
        let integrand = |x: f64| h.eval_log(x) * weight(x);
        let q = if h.is_smooth() {
            smooth_trapezoid(integrand, lo, hi, 128, 1e-15)?
        } else {
            integrate(integrand, lo, hi, &h.kinks(), 1e-14, 1e-14)?
        };
        return Ok(q.value * 0.5);
    }
    let c = c_inf.ok_or(Error::NeedsCalibration)?;
    let h1 = h.eval_log(0.0);
    let (t_lo, t_hi) = ((-hi).exp(), (-lo).exp());
    // g(t) = [h(1/t)/t − h(1)·1_{t<2}] / |1−t|
    let g = |t: f64| {
        let ind = if t < 2.0 { h1 } else { ZERO };
        (h.eval(1.0 / t) / t - ind) / (1.0 - t).abs()
    };
    let mut breaks = vec![1.0, 2.0];
    breaks.extend(h.kinks().into_iter().map(|k| (-k).exp()));
    let inner = integrate(g, t_lo, t_hi, &breaks, 1e-14, 1e-14)?.value;
    // outside [t_lo, t_hi] only the counterterm survives
    let mut outer = h1 * (1.0 - t_lo).ln();
    if t_hi < 2.0 {
        outer += h1 * (t_hi - 1.0).ln();
    }
    let second = integrate(|t| h.eval(1.0 / t) / (t * (1.0 + t)), t_lo, t_hi, &breaks, 1e-14, 1e-14)?.value;
    Ok(0.5 * (inner + outer + second) + h1 * c)
}

/// Regularisation constant for the archimedean term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub c_inf: f64,
    pub reference: String,
    pub num_zeros: usize,
}

impl Calibration {
    /// File holding the calibration next to a zeros file.
    pub fn path_for(zeros_path: &Path) -> PathBuf {
        let mut name = zeros_path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(".calibration.json");
        zeros_path.with_file_name(name)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Input { line: e.line(), message: e.to_string() })
    }
}

/// Everything needed to evaluate both sides of the formula.
#[derive(Debug, Clone)]
pub struct FormulaContext {
    pub zeros: ZeroTable,
    pub num_zeros: usize,
    pub primes: PrimeTable,
    pub disc_log: f64,
    pub calibration: Option<Calibration>,
}

impl FormulaContext {
    pub fn new(zeros: ZeroTable, num_zeros: usize, prime_cutoff: u64) -> Result<Self> {
        if num_zeros > zeros.len() {
            return Err(Error::InvalidArgument(format!(
                "requested {num_zeros} zeros but the table holds {}",
                zeros.len()
            )));
        }
        if prime_cutoff < 2 {
            return Err(Error::InvalidArgument("prime cutoff must be at least 2".into()));
        }
        Ok(FormulaContext { zeros, num_zeros, primes: PrimeTable::new(prime_cutoff), disc_log: 0.0, calibration: None })
    }

    pub fn c_inf(&self) -> Option<f64> {
        self.calibration.as_ref().map(|c| c.c_inf)
    }

    pub fn gammas(&self) -> &[f64] {
        &self.zeros.gammas[..self.num_zeros]
    }

    pub fn geometric(&self, h: &TestFunction) -> Result<GeometricSide> {
        geometric_side(h, &self.primes, self.disc_log, self.c_inf())
    }

    pub fn report(&self, h: &TestFunction) -> Result<FormulaReport> {
        explicit_formula_report(h, &self.zeros, self.num_zeros, &self.primes, self.disc_log, self.c_inf())
    }

    /// Solves spectral = geometric for c_∞ on a reference function whose
    /// support contains 1, and stores the result in the context.
    pub fn calibrate(&mut self, reference: &TestFunction, label: &str) -> Result<Calibration> {
        if !touches_one(reference) {
            return Err(Error::InvalidArgument("calibration reference must have 1 in its support".into()));
        }
        let h1 = reference.eval_log(0.0).re;
        if h1.abs() < 1e-6 {
            return Err(Error::InvalidArgument("calibration reference has h(1) ≈ 0".into()));
        }
        let spectral = spectral_side(reference, &self.zeros, self.num_zeros)?;
        let bare = geometric_side(reference, &self.primes, self.disc_log, Some(0.0))?;
        // geometric(c) = bare − c·h(1)
        let c_inf = (bare.value().re - spectral.value) / h1;
        let cal = Calibration { c_inf, reference: label.to_string(), num_zeros: self.num_zeros };
        self.calibration = Some(cal.clone());
        Ok(cal)
    }
}

/// Reference used when no other calibration function is given: a bump on
/// [e^{−0.6}, e^{0.6}].
pub fn default_calibration_reference() -> TestFunction {
    TestFunction::bump(0.0, 0.6, 1.0).expect("valid bump")
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaReport {
    pub spectral_side: f64,
    pub spectral_tail: f64,
    pub num_zeros: usize,
    pub geom_archimedean: f64,
    pub geom_per_prime: BTreeMap<u64, f64>,
    pub h_hat0: f64,
    pub h_hat1: f64,
    pub discriminant_term: f64,
}

impl FormulaReport {
    pub fn geometric_side(&self) -> f64 {
        let primes = compensated_sum(self.geom_per_prime.values().copied());
        self.h_hat0 + self.h_hat1 - self.discriminant_term - primes - self.geom_archimedean
    }

    pub fn discrepancy(&self) -> f64 {
        (self.spectral_side - self.geometric_side()).abs()
    }
}

impl Serialize for FormulaReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let per_prime: BTreeMap<String, f64> = self.geom_per_prime.iter().map(|(p, v)| (p.to_string(), *v)).collect();
        let mut st = serializer.serialize_struct("FormulaReport", 10)?;
        st.serialize_field("spectral_side", &self.spectral_side)?;
        st.serialize_field("spectral_tail", &self.spectral_tail)?;
        st.serialize_field("num_zeros", &self.num_zeros)?;
        st.serialize_field("h_hat0", &self.h_hat0)?;
        st.serialize_field("h_hat1", &self.h_hat1)?;
        st.serialize_field("discriminant_term", &self.discriminant_term)?;
        st.serialize_field("geom_per_prime", &per_prime)?;
        st.serialize_field("geom_archimedean", &self.geom_archimedean)?;
        st.serialize_field("geometric_side", &self.geometric_side())?;
        st.serialize_field("discrepancy", &self.discrepancy())?;
        st.end()
    }
}

fn real_part(v: Complex64, what: &str) -> Result<f64> {
    if v.im.abs() > REALITY_TOL * (1.0 + v.re.abs()) {
        return Err(Error::NumericalFailure(format!("{what} has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

pub fn report_from_parts(spectral: &SpectralSide, geo: &GeometricSide) -> Result<FormulaReport> {
    let mut per_prime = BTreeMap::new();
    for (p, v) in &geo.per_prime {
        per_prime.insert(*p, real_part(*v, "prime term")?);
    }
    Ok(FormulaReport {
        spectral_side: spectral.value,
        spectral_tail: spectral.tail_estimate,
        num_zeros: spectral.num_zeros,
        geom_archimedean: real_part(geo.archimedean, "archimedean term")?,
        geom_per_prime: per_prime,
        h_hat0: real_part(geo.h_hat0, "ĥ(0)")?,
        h_hat1: real_part(geo.h_hat1, "ĥ(1)")?,
        discriminant_term: real_part(geo.discriminant_term(), "discriminant term")?,
    })
}

pub fn explicit_formula_report(
    h: &TestFunction,
    zeros: &ZeroTable,
    n: usize,
    primes: &PrimeTable,
    disc_log: f64,
    c_inf: Option<f64>,
) -> Result<FormulaReport> {
    if !h.is_real() {
        return Err(Error::PreconditionViolation("formula report needs a real-valued test function".into()));
    }
    let geo = geometric_side(h, primes, disc_log, c_inf)?;
    let spectral = spectral_side(h, zeros, n)?;
    report_from_parts(&spectral, &geo)
}

/// (N, discrepancy) for each N in `ns`, sharing one set of Mellin values.
pub fn convergence_table(h: &TestFunction, ctx: &FormulaContext, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    let nmax = ns.iter().copied().max().unwrap_or(0);
    let gammas = ctx.zeros.first(nmax)?;
    let terms = zero_terms(h, gammas)?;
    let geo = ctx.geometric(h)?.value().re;
    ns.iter()
        .map(|&n| {
            let s = compensated_sum(terms[..n].iter().map(|t| t.re));
            Ok((n, (s - geo).abs()))
        })
        .collect()
}

/// Doubling sequence 100, 200, … capped by `nmax`, always ending at `nmax`.
pub fn doubling_ns(start: usize, nmax: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = start.max(1);
    while n < nmax {
        out.push(n);
        n *= 2;
    }
    out.push(nmax);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_table() -> ZeroTable {
        // first ten ordinates
        ZeroTable::parse(
            "14.134725141734693\n21.022039638771555\n25.010857580145688\n30.424876125859513\n32.935061587739189\n\
             37.586178158825671\n40.918719012147495\n43.327073280914999\n48.005150881167159\n49.773832477672302\n",
        )
        .unwrap()
    }

    #[test]
    fn no_zeros_give_zero() {
        let h = TestFunction::bump(1.0, 0.3, 1.0).unwrap();
        let s = spectral_side(&h, &small_table(), 0).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.tail_estimate, 0.0);
    }

    #[test]
    fn spectral_side_of_real_function_is_real() {
        let h = TestFunction::bump(1.3, 0.5, 2.0).unwrap();
        let s = spectral_side(&h, &small_table(), 10).unwrap();
        assert!(s.imag.abs() <= REALITY_TOL);
    }

    #[test]
    fn support_in_two_to_ten_touches_only_small_primes() {
        let h = TestFunction::bump_on(2.0, 10.0, 1.0).unwrap();
        let geo = geometric_side(&h, &PrimeTable::new(1000), 0.0, None).unwrap();
        let primes: Vec<u64> = geo.per_prime.keys().copied().collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
        // p = 2 collects h(4) and h(8) but not h(2)=0 or the reciprocal side
        let expected = 2f64.ln() * (h.eval_re(4.0) + h.eval_re(8.0));
        assert!((geo.per_prime[&2].re - expected).abs() < 1e-15);
        assert_eq!(geo.h_at_one, ZERO);
    }

    #[test]
    fn prime_terms_match_von_mangoldt_form() {
        // h(u) = u^{-1/2} F(log u) gives Σ Λ(n) n^{-1/2} (F(log n) + F(−log n))
        let f = TestFunction::bump(0.1, 2.4, 1.0).unwrap();
        let h = crate::explicit::test_function::delta_power(&f, Complex64::new(-0.5, 0.0));
        let geo = geometric_side(&h, &PrimeTable::new(1000), 0.0, Some(0.0)).unwrap();
        let mut classical = 0.0;
        for n in 2..20u64 {
            let l = crate::number::mangoldt(n);
            let x = (n as f64).ln();
            classical += l / (n as f64).sqrt() * (f.eval_log(x).re + f.eval_log(-x).re);
        }
        assert!((geo.prime_total().re - classical).abs() < 1e-13);
    }

    #[test]
    fn zero_function_has_zero_sides() {
        let h = TestFunction::bump(1.0, 0.3, 0.0).unwrap();
        let geo = geometric_side(&h, &PrimeTable::new(100), 0.0, None).unwrap();
        assert_eq!(geo.value(), ZERO);
    }

    #[test]
    fn support_reaching_one_needs_calibration() {
        let h = TestFunction::bump(0.0, 0.5, 1.0).unwrap();
        assert_eq!(geometric_side(&h, &PrimeTable::new(100), 0.0, None).unwrap_err(), Error::NeedsCalibration);
    }

    #[test]
    fn support_beyond_cutoff_is_rejected() {
        let h = TestFunction::bump_on(50.0, 200.0, 1.0).unwrap();
        assert!(matches!(geometric_side(&h, &PrimeTable::new(100), 0.0, None), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn regularised_term_is_continuous_in_support_position() {
        // a bump that barely misses 1 versus the regularised path with
        // h(1) = 0 forced by a tiny shift: both must agree as the support
        // crosses 1 (the c_∞ term multiplies h(1) ≈ 0)
        let below = TestFunction::bump(0.60001, 0.6, 1.0).unwrap();
        let across = TestFunction::bump(0.59999, 0.6, 1.0).unwrap();
        let a = archimedean_term(&below, None).unwrap();
        let b = archimedean_term(&across, Some(2.4)).unwrap();
        assert!((a - b).norm() < 1e-4, "{a} vs {b}");
    }

    #[test]
    fn report_scales_linearly() {
        let h = TestFunction::bump(1.4, 0.4, 1.0).unwrap();
        let h3 = TestFunction::bump(1.4, 0.4, 3.0).unwrap();
        let p = PrimeTable::new(100);
        let r1 = explicit_formula_report(&h, &small_table(), 10, &p, 0.0, None).unwrap();
        let r3 = explicit_formula_report(&h3, &small_table(), 10, &p, 0.0, None).unwrap();
        assert!((r3.spectral_side - 3.0 * r1.spectral_side).abs() < 1e-12);
        assert!((r3.geometric_side() - 3.0 * r1.geometric_side()).abs() < 1e-12);
    }

    #[test]
    fn report_json_carries_fresh_discrepancy() {
        let h = TestFunction::bump(1.4, 0.4, 1.0).unwrap();
        let mut r = explicit_formula_report(&h, &small_table(), 10, &PrimeTable::new(100), 0.0, None).unwrap();
        r.spectral_side += 1.0;
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert!((v["discrepancy"].as_f64().unwrap() - r.discrepancy()).abs() < 1e-15);
    }

    #[test]
    fn calibration_round_trips_through_json() {
        let dir = tempfile::tempdir().unwrap();
        let zeros = dir.path().join("zeros.txt");
        let path = Calibration::path_for(&zeros);
        assert!(path.to_string_lossy().ends_with("zeros.txt.calibration.json"));
        let c = Calibration { c_inf: 2.5, reference: "bump".into(), num_zeros: 10 };
        c.save(&path).unwrap();
        assert_eq!(Calibration::load(&path).unwrap(), c);
    }

    #[test]
    fn doubling_sequence() {
        assert_eq!(doubling_ns(100, 1000), vec![100, 200, 400, 800, 1000]);
        assert_eq!(doubling_ns(100, 100), vec![100]);
    }
}
