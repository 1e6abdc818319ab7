//! Test functions on the positive reals, handled in the log coordinate
//! x = log u. A function h(u) is stored through F(x) = h(e^x).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::profile::SchwartzProfile;
use super::quadrature::{integrate, smooth_trapezoid};
use crate::error::{Error, Result};

/// ∫_{-1}^{1} exp(-1/(1-t²)) dt.
pub const BUMP_SHAPE_MASS: f64 = 0.443_993_816_168_079_4;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative cutoff for the effective support of a theta series.
const THETA_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    /// centre μ in log coordinates
    pub center: f64,
    pub halfwidth: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: f64, halfwidth: f64, amplitude: f64) -> Result<Self> {
        if !(halfwidth > 0.0 && halfwidth.is_finite() && center.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump needs finite centre/amplitude and positive halfwidth, got ({center}, {halfwidth}, {amplitude})"
            )));
        }
        Ok(Bump { center, halfwidth, amplitude })
    }

    /// Bump with total mass 1 under d*u.
    pub fn unit_mass(center: f64, halfwidth: f64) -> Result<Self> {
        Bump::new(center, halfwidth, 1.0 / (halfwidth * BUMP_SHAPE_MASS))
    }

    pub fn eval_log(&self, x: f64) -> f64 {
        let t = (x - self.center) / self.halfwidth;
        if t.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / (1.0 - t * t)).exp()
        }
    }
}

/// Samples F(x0 + j dx), j = 0..n, interpolated by local cubics and zero
/// outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(x0: f64, dx: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) || values.len() < 2 {
            return Err(Error::InvalidArgument("grid needs dx > 0 and at least two samples".into()));
        }
        Ok(GridFunction { x0, dx, values })
    }

    /// Samples `f` on `n + 1` equispaced points of `[a, b]`.
    pub fn sample(f: &TestFunction, a: f64, b: f64, n: usize) -> Result<Self> {
        let dx = (b - a) / n as f64;
        let values = (0..=n).map(|j| f.eval_log(a + dx * j as f64)).collect();
        GridFunction::new(a, dx, values)
    }

    pub fn x_end(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    pub fn eval_log(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let pos = (x - self.x0) / self.dx;
        if !(pos >= 0.0 && pos <= (n - 1) as f64) {
            return ZERO;
        }
        let i = (pos.floor() as usize).min(n - 2);
        let start = i.saturating_sub(1).min(n.saturating_sub(4));
        let stop = (start + 4).min(n);
        let mut acc = ZERO;
        for a in start..stop {
            let mut w = 1.0;
            for b in start..stop {
                if a != b {
                    w *= (pos - b as f64) / (a as f64 - b as f64);
                }
            }
            acc += self.values[a] * w;
        }
        acc
    }

    fn same_spacing(&self, other: &GridFunction) -> bool {
        (self.dx - other.dx).abs() <= 1e-12 * self.dx
    }
}

/// θ(λ) = Σ_{n≥1} η(nλ) for a profile η with vanishing moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSeries {
    pub profile: SchwartzProfile,
    log_lo: f64,
    log_hi: f64,
}

impl ThetaSeries {
    pub fn new(profile: SchwartzProfile) -> Result<Self> {
        profile.validate()?;
        let hi = profile.decay_radius(THETA_CUTOFF);
        // below 1 the Poisson dual form is used; its leading term is η̂(1/λ)/λ
        let scale = profile.coeffs.iter().map(|c| c.abs()).sum::<f64>().max(1e-300);
        let mut lo: f64 = 1.0;
        loop {
            let next = lo * 0.98;
            let dual = (profile.fourier(1.0 / next) / next).abs().max(envelope_dual(&profile, 1.0 / next) / next);
            if dual < THETA_CUTOFF * scale {
                break;
            }
            lo = next;
        }
        Ok(ThetaSeries { profile, log_lo: lo.ln(), log_hi: hi.ln() })
    }

    pub fn log_support(&self) -> (f64, f64) {
        (self.log_lo, self.log_hi)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        if !(lambda > 0.0) {
            return 0.0;
        }
        let eta = &self.profile;
        if lambda >= 1.0 {
            let mut sum = 0.0;
            let mut n = 1.0;
            loop {
                let term = eta.eval(n * lambda);
                sum += term;
                if n * lambda > 1.0 && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
                    break;
                }
                if term == 0.0 && n * lambda > 1.0 {
                    break;
                }
                n += 1.0;
            }
            sum
        } else {
            // Poisson summation: Σ_{n∈ℤ} η(nλ) = λ⁻¹ Σ_{k∈ℤ} η̂(k/λ)
            let mut sum = 0.0;
            let mut k = 1.0;
            loop {
                let term = eta.fourier(k / lambda);
                sum += term;
                if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
                    break;
                }
                k += 1.0;
            }
            (sum + 0.5 * eta.fourier(0.0)) / lambda - 0.5 * eta.eval(0.0)
        }
    }
}

// crude majorant for |η̂(ξ)|, guarding the support search against
// accidental zeros of η̂
fn envelope_dual(profile: &SchwartzProfile, xi: f64) -> f64 {
    let a = profile.rate;
    let u = (PI * xi / a).powi(2) + 1.0 / a;
    let poly: f64 = profile.coeffs.iter().enumerate().map(|(j, c)| c.abs() * u.powi(j as i32) * (1 + 2 * j) as f64).sum();
    (PI / a).sqrt() * (-PI * PI * xi * xi / a).exp() * poly
}

/// A test function h on (0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Bump(Bump),
    /// characteristic function of [a, b] (in u, not log u)
    Indicator { a: f64, b: f64 },
    Grid(GridFunction),
    Theta(Box<ThetaSeries>),
    Combination(Vec<(Complex64, TestFunction)>),
    /// multiplicative convolution ∫ f(v) g(u/v) d*v
    Convolution(Arc<TestFunction>, Arc<TestFunction>),
    /// f*(u) = conj f(1/u)
    Star(Arc<TestFunction>),
    /// f^♯(u) = u⁻¹ conj f(1/u)
    Sharp(Arc<TestFunction>),
    /// (Δ^z f)(u) = u^z f(u)
    DeltaPower(Arc<TestFunction>, Complex64),
}

impl TestFunction {
    pub fn bump(center: f64, halfwidth: f64, amplitude: f64) -> Result<Self> {
        Bump::new(center, halfwidth, amplitude).map(TestFunction::Bump)
    }

    /// Bump supported exactly on `[a, b]` with peak value e^{-1}·`amplitude`.
    pub fn bump_on(a: f64, b: f64, amplitude: f64) -> Result<Self> {
        if !(a > 0.0 && b > a) {
            return Err(Error::InvalidArgument(format!("bump support [{a}, {b}] must satisfy 0 < a < b")));
        }
        let (la, lb) = (a.ln(), b.ln());
        Self::bump(0.5 * (la + lb), 0.5 * (lb - la), amplitude)
    }

    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::InvalidArgument(format!("indicator needs 0 < a < b, got [{a}, {b}]")));
        }
        Ok(TestFunction::Indicator { a, b })
    }

    pub fn theta(profile: SchwartzProfile) -> Result<Self> {
        Ok(TestFunction::Theta(Box::new(ThetaSeries::new(profile)?)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        TestFunction::Combination(vec![(c, self.clone())])
    }

    pub fn plus(&self, other: &TestFunction) -> Self {
        let one = Complex64::new(1.0, 0.0);
        TestFunction::Combination(vec![(one, self.clone()), (one, other.clone())])
    }

    /// Log-coordinate interval outside which F vanishes (effectively, for
    /// theta series).
    pub fn log_support(&self) -> (f64, f64) {
        match self {
            TestFunction::Bump(b) => (b.center - b.halfwidth, b.center + b.halfwidth),
            TestFunction::Indicator { a, b } => (a.ln(), b.ln()),
            TestFunction::Grid(g) => (g.x0, g.x_end()),
            TestFunction::Theta(t) => t.log_support(),
            TestFunction::Combination(terms) => terms
                .iter()
                .map(|(_, f)| f.log_support())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b))),
            TestFunction::Convolution(f, g) => {
                let (fa, fb) = f.log_support();
                let (ga, gb) = g.log_support();
                (fa + ga, fb + gb)
            }
            TestFunction::Star(f) | TestFunction::Sharp(f) => {
                let (a, b) = f.log_support();
                (-b, -a)
            }
            TestFunction::DeltaPower(f, _) => f.log_support(),
        }
    }

    /// Support interval in u.
    pub fn support(&self) -> (f64, f64) {
        let (a, b) = self.log_support();
        (a.exp(), b.exp())
    }

    /// Whether F is C∞ (so that trapezoid rules converge spectrally).
    pub fn is_smooth(&self) -> bool {
        match self {
            TestFunction::Bump(_) | TestFunction::Theta(_) => true,
            TestFunction::Indicator { .. } | TestFunction::Grid(_) => false,
            TestFunction::Combination(terms) => terms.iter().all(|(_, f)| f.is_smooth()),
            TestFunction::Convolution(f, g) => f.is_smooth() || g.is_smooth(),
            TestFunction::Star(f) | TestFunction::Sharp(f) | TestFunction::DeltaPower(f, _) => f.is_smooth(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            TestFunction::Bump(_) | TestFunction::Indicator { .. } | TestFunction::Theta(_) => true,
            TestFunction::Grid(g) => g.values.iter().all(|v| v.im == 0.0),
            TestFunction::Combination(terms) => terms.iter().all(|(c, f)| c.im == 0.0 && f.is_real()),
            TestFunction::Convolution(f, g) => f.is_real() && g.is_real(),
            TestFunction::Star(f) | TestFunction::Sharp(f) => f.is_real(),
            TestFunction::DeltaPower(f, z) => z.im == 0.0 && f.is_real(),
        }
    }

    /// Log-coordinate points where F may fail to be smooth.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = match self {
            TestFunction::Bump(_) | TestFunction::Theta(_) => vec![],
            TestFunction::Indicator { a, b } => vec![a.ln(), b.ln()],
            TestFunction::Grid(g) => {
                // interpolation is only piecewise smooth; cap the list for long grids
                if g.values.len() <= 256 {
                    (0..g.values.len()).map(|j| g.x0 + g.dx * j as f64).collect()
                } else {
                    vec![g.x0, g.x_end()]
                }
            }
            TestFunction::Combination(terms) => terms.iter().flat_map(|(_, f)| f.kinks()).collect(),
            TestFunction::Convolution(f, g) => {
                if f.is_smooth() || g.is_smooth() {
                    vec![]
                } else {
                    let gk = g.kinks();
                    f.kinks().iter().flat_map(|a| gk.iter().map(move |b| a + b)).collect()
                }
            }
            TestFunction::Star(f) | TestFunction::Sharp(f) => f.kinks().into_iter().map(|x| -x).collect(),
            TestFunction::DeltaPower(f, _) => f.kinks(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// F(x) = h(e^x).
    pub fn eval_log(&self, x: f64) -> Complex64 {
        match self {
            TestFunction::Bump(b) => Complex64::new(b.eval_log(x), 0.0),
            TestFunction::Indicator { a, b } => {
                let u = x.exp();
                if u >= *a && u <= *b {
                    Complex64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            }
            TestFunction::Grid(g) => g.eval_log(x),
            TestFunction::Theta(t) => {
                let (lo, hi) = t.log_support();
                if x <= lo || x >= hi {
                    ZERO
                } else {
                    Complex64::new(t.eval(x.exp()), 0.0)
                }
            }
            TestFunction::Combination(terms) => terms.iter().map(|(c, f)| c * f.eval_log(x)).sum(),
            TestFunction::Convolution(f, g) => convolution_at(f, g, x),
            TestFunction::Star(f) => f.eval_log(-x).conj(),
            TestFunction::Sharp(f) => f.eval_log(-x).conj() * (-x).exp(),
            TestFunction::DeltaPower(f, z) => f.eval_log(x) * (z * x).exp(),
        }
    }

    /// h(u); zero for u ≤ 0.
    pub fn eval(&self, u: f64) -> Complex64 {
        if u > 0.0 {
            self.eval_log(u.ln())
        } else {
            ZERO
        }
    }

    /// Real part of h(u), for real-valued functions.
    pub fn eval_re(&self, u: f64) -> f64 {
        self.eval(u).re
    }
}

fn convolution_at(f: &TestFunction, g: &TestFunction, x: f64) -> Complex64 {
    let (fa, fb) = f.log_support();
    let (ga, gb) = g.log_support();
    let lo = fa.max(x - gb);
    let hi = fb.min(x - ga);
    if lo >= hi {
        return ZERO;
    }
    let integrand = |y: f64| f.eval_log(y) * g.eval_log(x - y);
    if f.is_smooth() && g.is_smooth() {
        // both factors vanish to all orders at the ends of the overlap
        if let Ok(q) = smooth_trapezoid(integrand, lo, hi, 32, 1e-15) {
            return q.value;
        }
    }
    let mut breaks = f.kinks();
    breaks.extend(g.kinks().into_iter().map(|k| x - k));
    integrate(integrand, lo, hi, &breaks, 1e-14, 1e-13).map(|q| q.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// f ⋆ g. Two grids with equal spacing are convolved discretely into a
/// grid; grids with different spacing must be resampled first.
pub fn convolve_mult(f: &TestFunction, g: &TestFunction) -> Result<TestFunction> {
    if let (TestFunction::Grid(a), TestFunction::Grid(b)) = (f, g) {
        if !a.same_spacing(b) {
            return Err(Error::RegridRequired(format!("grid spacings {} and {} differ", a.dx, b.dx)));
        }
        let n = a.values.len() + b.values.len() - 1;
        let mut values = vec![ZERO; n];
        for (i, va) in a.values.iter().enumerate() {
            for (j, vb) in b.values.iter().enumerate() {
                values[i + j] += va * vb;
            }
        }
        for v in values.iter_mut() {
            *v *= a.dx;
        }
        return GridFunction::new(a.x0 + b.x0, a.dx, values).map(TestFunction::Grid);
    }
    Ok(TestFunction::Convolution(Arc::new(f.clone()), Arc::new(g.clone())))
}

pub fn star(f: &TestFunction) -> TestFunction {
    match f {
        TestFunction::Grid(g) => {
            let values = g.values.iter().rev().map(|v| v.conj()).collect();
            TestFunction::Grid(GridFunction { x0: -g.x_end(), dx: g.dx, values })
        }
        _ => TestFunction::Star(Arc::new(f.clone())),
    }
}

pub fn sharp(f: &TestFunction) -> TestFunction {
    match f {
        TestFunction::Grid(g) => {
            let x0 = -g.x_end();
            let values = g
                .values
                .iter()
                .rev()
                .enumerate()
                .map(|(j, v)| v.conj() * (-(x0 + g.dx * j as f64)).exp())
                .collect();
            TestFunction::Grid(GridFunction { x0, dx: g.dx, values })
        }
        _ => TestFunction::Sharp(Arc::new(f.clone())),
    }
}

pub fn delta_power(f: &TestFunction, z: Complex64) -> TestFunction {
    match f {
        TestFunction::Grid(g) => {
            let values = g.values.iter().enumerate().map(|(j, v)| v * (z * (g.x0 + g.dx * j as f64)).exp()).collect();
            TestFunction::Grid(GridFunction { x0: g.x0, dx: g.dx, values })
        }
        _ => TestFunction::DeltaPower(Arc::new(f.clone()), z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bump_support_is_exact() {
        let h = TestFunction::bump((4f64).ln(), (2f64).ln(), 1.0).unwrap();
        let (a, b) = h.support();
        assert!((a - 2.0).abs() < 1e-14 && (b - 8.0).abs() < 1e-14);
        assert_eq!(h.eval_re(2.0), 0.0);
        assert_eq!(h.eval_re(8.0), 0.0);
        assert!((h.eval_re(4.0) - (-1f64).exp()).abs() < 1e-15);
        assert!(h.eval_re(2.01) > 0.0);
    }

    #[test]
    fn invalid_constructors_are_rejected() {
        assert!(TestFunction::bump(0.0, -1.0, 1.0).is_err());
        assert!(TestFunction::indicator(3.0, 2.0).is_err());
        assert!(TestFunction::indicator(0.0, 2.0).is_err());
    }

    #[test]
    fn involutions_pointwise() {
        let f = TestFunction::bump(0.4, 0.3, 1.0).unwrap().scaled(Complex64::new(1.0, 2.0));
        let fs = star(&f);
        let fh = sharp(&f);
        let fd = delta_power(&f, Complex64::new(0.5, 1.0));
        for u in [0.55, 0.7, 1.3, 1.6] {
            assert!((fs.eval(u) - f.eval(1.0 / u).conj()).norm() < 1e-15);
            assert!((fh.eval(u) - f.eval(1.0 / u).conj() / u).norm() < 1e-15);
            let uz = Complex64::new(u, 0.0).powc(Complex64::new(0.5, 1.0));
            assert!((fd.eval(u) - uz * f.eval(u)).norm() < 1e-14);
        }
        // sharp is an involution
        let back = sharp(&fh);
        for u in [1.2, 1.5] {
            assert!((back.eval(u) - f.eval(u)).norm() < 1e-14);
        }
    }

    #[test]
    fn convolution_support_adds() {
        let f = TestFunction::bump(0.5, 0.2, 1.0).unwrap();
        let g = TestFunction::bump(1.0, 0.3, 1.0).unwrap();
        let h = convolve_mult(&f, &g).unwrap();
        let (a, b) = h.log_support();
        assert!((a - 1.0).abs() < 1e-15 && (b - 2.0).abs() < 1e-15);
        assert_eq!(h.eval_log(0.99), c(0.0));
        assert!(h.eval_log(1.5).re > 0.0);
    }

    #[test]
    fn indicator_convolution_is_a_tent() {
        // 1_[1,e] ⋆ 1_[1,e] in log coordinates is the tent min(x, 2-x) on [0,2]
        let f = TestFunction::indicator(1.0, 1f64.exp()).unwrap();
        let h = convolve_mult(&f, &f).unwrap();
        for x in [0.25f64, 0.8, 1.0, 1.6] {
            let tent = x.min(2.0 - x);
            assert!((h.eval_log(x).re - tent).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn grids_with_different_spacing_need_regrid() {
        let a = TestFunction::Grid(GridFunction::new(0.0, 0.1, vec![c(1.0); 5]).unwrap());
        let b = TestFunction::Grid(GridFunction::new(0.0, 0.2, vec![c(1.0); 5]).unwrap());
        assert!(matches!(convolve_mult(&a, &b), Err(Error::RegridRequired(_))));
        assert!(convolve_mult(&a, &a).is_ok());
    }

    #[test]
    fn grid_interpolation_reproduces_cubics() {
        let cubic = |x: f64| 1.0 - x + 0.5 * x * x * x;
        let g = GridFunction::new(0.0, 0.25, (0..=8).map(|j| c(cubic(0.25 * j as f64))).collect()).unwrap();
        for x in [0.1, 0.33, 1.02, 1.9] {
            assert!((g.eval_log(x).re - cubic(x)).abs() < 1e-13);
        }
        assert_eq!(g.eval_log(-0.01), c(0.0));
    }

    #[test]
    fn grid_involutions_match_lazy_ones() {
        let f = TestFunction::bump(0.2, 0.5, 1.0).unwrap();
        let g = TestFunction::Grid(GridFunction::sample(&f, -0.4, 0.8, 1200).unwrap());
        for u in [0.5, 0.8, 1.1] {
            assert!((sharp(&g).eval(u) - sharp(&f).eval(u)).norm() < 1e-9);
            assert!((star(&g).eval(u) - star(&f).eval(u)).norm() < 1e-9);
        }
    }

    #[test]
    fn theta_dual_and_direct_forms_agree_near_one() {
        let t = ThetaSeries::new(SchwartzProfile::eta0()).unwrap();
        // evaluate the direct sum below 1 by hand and compare with the dual form
        for lambda in [0.6, 0.8, 0.95] {
            let direct: f64 = (1..200).map(|n| t.profile.eval(n as f64 * lambda)).sum();
            assert!((t.eval(lambda) - direct).abs() < 1e-14, "{lambda}");
        }
        let (lo, hi) = t.log_support();
        assert!(lo.exp() > 0.1 && lo.exp() < 0.4, "lo = {}", lo.exp());
        assert!(hi.exp() > 3.0 && hi.exp() < 8.0, "hi = {}", hi.exp());
    }

    #[test]
    fn theta_of_invalid_profile_is_rejected() {
        let bad = SchwartzProfile::new(PI, vec![1.0]).unwrap();
        assert!(matches!(TestFunction::theta(bad), Err(Error::PreconditionViolation(_))));
    }
}
