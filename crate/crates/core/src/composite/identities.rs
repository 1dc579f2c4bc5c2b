//! Residuals of the convolution identities on the auxiliary groups.
//!
//! On Λ = N × A × A (n = 2) the extension is f̃(n, a, b) = f(a n a⁻¹, ab); on
//! H₊ = ℝ² × GL₊(2) × GL₊(2) it is f̃(A, X, Y) = f(XA, XY). Each side of an
//! identity is computed by its own pipeline (different slices, charts and
//! interpolation grids), so the residual measures how well the two agree.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::convolve::{
    apply2, convolve_at, glplus2_matrix, inv2, mul2, Affine2, ChartGroup, Euclidean, GridAxis, LazyGrid, Solvable2,
};
use super::level::{AxisGrid, Level};
use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::quadrature::Axis1d;
use crate::spectra::{nyquist_frequencies, Axis, SampledFunction};

/// A function of chart coordinates.
pub type ChartFn<'a> = &'a (dyn Fn(&[f64]) -> Complex64 + Sync);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvolutionIdentity {
    /// g∗f̃ = g∗_c f̃ on Λ.
    Lemma31a,
    /// ν-integrated spectrum of g∗f̃ against the product of spectra on S.
    Lemma31b,
    /// g∗f̃ = f̃∗_c g on H₊.
    Lemma51,
    /// Y-integrated spectrum of g∗f̃ against the product of spectra on GA₊.
    Cor51,
}

impl ConvolutionIdentity {
    pub const ALL: [ConvolutionIdentity; 4] =
        [ConvolutionIdentity::Lemma31a, ConvolutionIdentity::Lemma31b, ConvolutionIdentity::Lemma51, ConvolutionIdentity::Cor51];

    pub fn level(self) -> Level {
        match self {
            ConvolutionIdentity::Lemma31a | ConvolutionIdentity::Lemma31b => Level::S,
            _ => Level::GAPlus,
        }
    }
}

impl fmt::Display for ConvolutionIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvolutionIdentity::Lemma31a => "Lemma3.1a",
            ConvolutionIdentity::Lemma31b => "Lemma3.1b",
            ConvolutionIdentity::Lemma51 => "Lemma5.1",
            ConvolutionIdentity::Cor51 => "Cor5.1",
        })
    }
}

impl FromStr for ConvolutionIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvolutionIdentity::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown convolution identity `{s}`")))
    }
}

/// Grids of one identity evaluation. `field_*` grids carry the function being
/// convolved (interpolation grids, or transform grids for the spectral
/// identities); `kernel_*` grids are the quadrature of g.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionGrids {
    pub field_linear: AxisGrid,
    pub field_log: AxisGrid,
    pub field_angle: usize,
    pub kernel_linear: AxisGrid,
    pub kernel_log: AxisGrid,
    pub kernel_angle: usize,
    /// Number of evaluation points (spatial or spectral).
    pub points: usize,
    pub seed: u64,
}

impl ConvolutionGrids {
    /// Coarse grids sized for the default test functions of each identity.
    pub fn coarse(which: ConvolutionIdentity, seed: u64) -> Self {
        let g = AxisGrid::new;
        match which {
            ConvolutionIdentity::Lemma31a => ConvolutionGrids {
                field_linear: g(49, -8.0, 8.0),
                field_log: g(49, -4.0, 4.0),
                field_angle: 0,
                kernel_linear: g(9, -2.0, 2.0),
                kernel_log: g(9, -1.0, 1.0),
                kernel_angle: 0,
                points: 10,
                seed,
            },
            ConvolutionIdentity::Lemma31b => ConvolutionGrids {
                field_linear: g(97, -24.0, 24.0),
                field_log: g(33, -2.0, 2.0),
                field_angle: 0,
                kernel_linear: g(7, -2.0, 2.0),
                kernel_log: g(7, -0.5, 0.5),
                kernel_angle: 0,
                points: 10,
                seed,
            },
            ConvolutionIdentity::Lemma51 => ConvolutionGrids {
                field_linear: g(49, -4.0, 4.0),
                field_log: g(37, -3.0, 3.0),
                field_angle: 48,
                kernel_linear: g(3, -0.8, 0.8),
                kernel_log: g(3, -0.8, 0.8),
                kernel_angle: 4,
                points: 10,
                seed,
            },
            ConvolutionIdentity::Cor51 => ConvolutionGrids {
                field_linear: g(9, -4.0, 4.0),
                field_log: g(9, -4.0, 4.0),
                field_angle: 8,
                kernel_linear: g(3, -1.0, 1.0),
                kernel_log: g(3, -1.0, 1.0),
                kernel_angle: 4,
                points: 10,
                seed,
            },
        }
    }

    /// Every grid twice as dense.
    pub fn refined(&self) -> Self {
        self.refined_by(2)
    }

    /// Every grid `factor` times as dense.
    pub fn refined_by(&self, factor: usize) -> Self {
        ConvolutionGrids {
            field_linear: self.field_linear.refined_by(factor),
            field_log: self.field_log.refined_by(factor),
            field_angle: factor * self.field_angle,
            kernel_linear: self.kernel_linear.refined_by(factor),
            kernel_log: self.kernel_log.refined_by(factor),
            kernel_angle: factor * self.kernel_angle,
            ..*self
        }
    }

    pub fn describe(&self) -> String {
        let g = |a: &AxisGrid| format!("{}@[{},{}]", a.count, a.lo, a.hi);
        format!(
            "field lin {} log {} K {}; kernel lin {} log {} K {}; points {}",
            g(&self.field_linear),
            g(&self.field_log),
            self.field_angle,
            g(&self.kernel_linear),
            g(&self.kernel_log),
            self.kernel_angle,
            self.points
        )
    }
}

/// f(A, Z) = c·G(A)·φ(Z) on GA₊(2), G a Gaussian of width `sigma` about
/// `center`, φ a function of the GL₊(2) chart (x, u, θ, s).
pub struct AffineGaussian<'a> {
    pub amplitude: f64,
    pub sigma: f64,
    pub center: [f64; 2],
    pub phi: ChartFn<'a>,
}

impl AffineGaussian<'_> {
    pub fn eval_parts(&self, a: [f64; 2], z: &[f64]) -> Complex64 {
        let r2 = (a[0] - self.center[0]).powi(2) + (a[1] - self.center[1]).powi(2);
        (self.phi)(z) * (self.amplitude * (-r2 / (2.0 * self.sigma * self.sigma)).exp())
    }

    /// Value at a GA₊(2) chart point (A₁, A₂, x, u, θ, s).
    pub fn eval(&self, c: &[f64]) -> Complex64 {
        self.eval_parts([c[0], c[1]], &c[2..6])
    }

    /// ∫ c·G(A) e^{−i⟨ν, A⟩} dA.
    pub fn gaussian_ft(&self, nu: [f64; 2]) -> Complex64 {
        let s2 = self.sigma * self.sigma;
        let phase = -(nu[0] * self.center[0] + nu[1] * self.center[1]);
        Complex64::from_polar(self.amplitude * 2.0 * PI * s2 * (-(nu[0] * nu[0] + nu[1] * nu[1]) * s2 / 2.0).exp(), phase)
    }
}

fn linear_axis(label: &str, g: &AxisGrid) -> Axis {
    Axis::linear(label, Axis1d::trapezoid(g.count, g.lo, g.hi))
}

fn log_axis(label: &str, g: &AxisGrid) -> Axis {
    Axis::log(label, Axis1d::trapezoid(g.count, g.lo, g.hi))
}

fn lazy_axis(g: &AxisGrid) -> GridAxis {
    GridAxis::uniform(g.count, g.lo, g.hi)
}

fn angle_axis(count: usize) -> Result<GridAxis> {
    GridAxis::from_rule(&Axis1d::periodic(count))
}

/// f̃(x, u_a, u_b) = f(e^{2u_a} x, u_a + u_b) for f on S(2) in the chart (x, u).
fn tilde_s(f: ChartFn<'_>, x: f64, ua: f64, ub: f64) -> Complex64 {
    f(&[(2.0 * ua).exp() * x, ua + ub])
}

fn check_grids(grids: &ConvolutionGrids, compact: bool) -> Result<()> {
    let mut bad = Vec::new();
    for (name, g) in [
        ("field_linear", grids.field_linear),
        ("field_log", grids.field_log),
        ("kernel_linear", grids.kernel_linear),
        ("kernel_log", grids.kernel_log),
    ] {
        if g.count < 2 || !(g.lo < g.hi) {
            bad.push(format!("{name}: need at least 2 nodes on a non-empty interval"));
        }
    }
    if compact && (grids.field_angle < 2 || grids.kernel_angle < 1) {
        bad.push("angle grids need at least 2 (field) and 1 (kernel) nodes".into());
    }
    if grids.points == 0 {
        bad.push("points: at least one evaluation point".into());
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(bad))
    }
}

/// `Lemma3.1a` on Λ: the S-convolution in (n, b) against the commutative
/// convolution in (n, a), at `grids.points` random points of Λ.
pub fn lemma31a_residual(f: ChartFn<'_>, g: ChartFn<'_>, grids: &ConvolutionGrids) -> Result<IdentityReport> {
    check_grids(grids, false)?;
    let start = Instant::now();
    let gs = SampledFunction::from_fn(vec![linear_axis("m", &grids.kernel_linear), log_axis("c", &grids.kernel_log)], g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(grids.seed);
    let points: Vec<[f64; 3]> = (0..grids.points)
        .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)])
        .collect();
    let (lin, log) = (lazy_axis(&grids.field_linear), lazy_axis(&grids.field_log));
    let mut pairs = Vec::with_capacity(points.len());
    for p in &points {
        let [x, ua, ub] = *p;
        let left_field = LazyGrid::new(vec![lin, log], |q: &[f64]| tilde_s(f, q[0], ua, q[1]))?;
        let right_field = LazyGrid::new(vec![lin, log], |q: &[f64]| tilde_s(f, q[0], q[1], ub))?;
        let l = convolve_at(&left_field, &gs, &Solvable2, &[vec![x, ub]])?[0];
        let r = convolve_at(&right_field, &gs, &Euclidean { dim: 2 }, &[vec![x, ua]])?[0];
        pairs.push((l, r));
    }
    Ok(IdentityReport::worst_of("Lemma3.1a", Level::S, 2, &pairs, grids.describe())
        .with_seconds(start.elapsed().as_secs_f64()))
}

/// `Lemma3.1b`, the spectral form: ∫ F(g∗f̃)(λ, μ, ν) dν against F f̃(λ, μ, b = I)·F g(λ, μ).
/// The ν integral is a quadrature over the Nyquist grid dual to u_b, with the
/// (2π)⁻¹ of the inverse transform.
pub fn lemma31b_residual(f: ChartFn<'_>, g: ChartFn<'_>, grids: &ConvolutionGrids) -> Result<IdentityReport> {
    check_grids(grids, false)?;
    let start = Instant::now();
    let gs = SampledFunction::from_fn(vec![linear_axis("m", &grids.kernel_linear), log_axis("c", &grids.kernel_log)], g)?;
    let xr = Axis1d::trapezoid(grids.field_linear.count, grids.field_linear.lo, grids.field_linear.hi);
    let ur = Axis1d::trapezoid(grids.field_log.count, grids.field_log.lo, grids.field_log.hi);
    let nu = nyquist_frequencies(&ur);

    // K_j = w_j Σ_ν W_ν e^{−iν u_j}
    let kernel: Vec<Complex64> = ur
        .nodes
        .iter()
        .zip(&ur.weights)
        .map(|(u, w)| {
            nu.nodes
                .iter()
                .zip(&nu.weights)
                .map(|(v, wv)| Complex64::from_polar(wv / (2.0 * PI), -v * u))
                .sum::<Complex64>()
                * *w
        })
        .collect();

    // H0(x, u_a) = Σ_j K_j (g∗f̃)(x, u_a, u_j), the S-convolution in (n, b).
    let (nx, nu_a) = (xr.len(), ur.len());
    let mut h0 = vec![Complex64::new(0.0, 0.0); nx * nu_a];
    for (ia, &ua) in ur.nodes.iter().enumerate() {
        let field = super::convolve::Analytic { dim: 2, f: |q: &[f64]| tilde_s(f, q[0], ua, q[1]) };
        let pts: Vec<Vec<f64>> = xr.nodes.iter().flat_map(|&x| ur.nodes.iter().map(move |&ub| vec![x, ub])).collect();
        let vals = convolve_at(&field, &gs, &Solvable2, &pts)?;
        for ix in 0..nx {
            let row = &vals[ix * ur.len()..(ix + 1) * ur.len()];
            h0[ix * nu_a + ia] = row.iter().zip(&kernel).map(|(v, k)| v * k).sum();
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(grids.seed);
    let freqs: Vec<[f64; 2]> = (0..grids.points)
        .map(|_| [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)])
        .collect();
    let mut pairs = Vec::with_capacity(freqs.len());
    for [lam, mu] in freqs {
        let mut left = Complex64::new(0.0, 0.0);
        let mut ft = Complex64::new(0.0, 0.0);
        for ix in 0..nx {
            for ia in 0..nu_a {
                let (x, ua) = (xr.nodes[ix], ur.nodes[ia]);
                let e = Complex64::from_polar(xr.weights[ix] * ur.weights[ia], -lam * x - mu * ua);
                left += e * h0[ix * nu_a + ia];
                ft += e * tilde_s(f, x, ua, 0.0);
            }
        }
        let mut gt = Complex64::new(0.0, 0.0);
        for i in 0..gs.len() {
            let mi = gs.multi_index(i);
            let (m, c) = (gs.axes()[0].point(mi[0])[0], gs.axes()[1].point(mi[1])[0]);
            gt += gs.values()[i] * gs.weight(i) * Complex64::from_polar(1.0, -lam * m - mu * c);
        }
        pairs.push((left, ft * gt));
    }
    Ok(IdentityReport::worst_of("Lemma3.1b", Level::S, 2, &pairs, grids.describe())
        .with_seconds(start.elapsed().as_secs_f64()))
}

fn affine_axes(lin: &AxisGrid, log: &AxisGrid, angle: usize) -> Vec<Axis> {
    vec![
        linear_axis("B1", lin),
        linear_axis("B2", lin),
        linear_axis("x", lin),
        log_axis("u", log),
        Axis::angle("theta", angle),
        log_axis("s", log),
    ]
}

/// ℝ² × GL₊(2)ᵒᵖ: (B, Q)·(A, X) = (A + B, X·Q), so (B, Q)⁻¹(A, X) = (A − B, X Q⁻¹).
struct DirectOpposite2;

impl ChartGroup for DirectOpposite2 {
    fn dim(&self) -> usize {
        6
    }

    fn multiply(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out[0] = x[0] + y[0];
        out[1] = x[1] + y[1];
        let m = mul2(&glplus2_matrix(&y[2..6]), &glplus2_matrix(&x[2..6]));
        out[2..6].copy_from_slice(&super::convolve::glplus2_coords(&m));
    }

    fn inverse(&self, x: &[f64], out: &mut [f64]) {
        out[0] = -x[0];
        out[1] = -x[1];
        out[2..6].copy_from_slice(&super::convolve::glplus2_coords(&inv2(&glplus2_matrix(&x[2..6]))));
    }

    fn haar_density(&self, x: &[f64]) -> f64 {
        (-2.0 * x[3]).exp()
    }
}

fn random_glplus(rng: &mut ChaCha8Rng, spread: f64) -> [f64; 4] {
    [
        rng.random_range(-spread..spread),
        rng.random_range(-spread..spread),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(-spread..spread),
    ]
}

/// f̃(A, X, Y) = f(XA, XY) with X, Y given in the GL₊(2) chart.
fn tilde_h(f: &AffineGaussian<'_>, a: [f64; 2], xm: &[f64; 4], y: &[f64]) -> Complex64 {
    let xa = apply2(xm, a);
    let xy = mul2(xm, &glplus2_matrix(y));
    f.eval_parts(xa, &super::convolve::glplus2_coords(&xy))
}

/// `Lemma5.1` on H₊: the GA₊ convolution in (A, Y) against the L₊ convolution
/// in (A, X), at `grids.points` random points of H₊.
pub fn lemma51_residual(f: &AffineGaussian<'_>, g: &AffineGaussian<'_>, grids: &ConvolutionGrids) -> Result<IdentityReport> {
    check_grids(grids, true)?;
    let start = Instant::now();
    let gs = SampledFunction::from_fn(affine_axes(&grids.kernel_linear, &grids.kernel_log, grids.kernel_angle), |c| g.eval(c))?;
    let (lin, log, ang) = (lazy_axis(&grids.field_linear), lazy_axis(&grids.field_log), angle_axis(grids.field_angle)?);
    let axes = vec![lin, lin, lin, log, ang, log];
    let mut rng = ChaCha8Rng::seed_from_u64(grids.seed);
    let mut pairs = Vec::with_capacity(grids.points);
    for _ in 0..grids.points {
        let a = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
        let (xc, yc) = (random_glplus(&mut rng, 0.3), random_glplus(&mut rng, 0.3));
        let xm = glplus2_matrix(&xc);
        let left_field = LazyGrid::new(axes.clone(), |q: &[f64]| tilde_h(f, [q[0], q[1]], &xm, &q[2..6]))?;
        let right_field = LazyGrid::new(axes.clone(), |q: &[f64]| {
            tilde_h(f, [q[0], q[1]], &glplus2_matrix(&q[2..6]), &yc)
        })?;
        let lp = [a[0], a[1], yc[0], yc[1], yc[2], yc[3]].to_vec();
        let rp = [a[0], a[1], xc[0], xc[1], xc[2], xc[3]].to_vec();
        let l = convolve_at(&left_field, &gs, &Affine2, &[lp])?[0];
        let r = convolve_at(&right_field, &gs, &DirectOpposite2, &[rp])?[0];
        pairs.push((l, r));
    }
    Ok(IdentityReport::worst_of("Lemma5.1", Level::GAPlus, 2, &pairs, grids.describe())
        .with_seconds(start.elapsed().as_secs_f64()))
}

/// Corollary 5.1 at n = 2: F_{A,X}[(g∗f̃)(·, ·, I)](μ, ω) against
/// F_{A,X}[f̃(·, ·, I)](μ, ω)·F g(μ, ω) at `grids.points` spectral points,
/// ω = (ξ, λ, m, η) dual to the GL₊ chart (x, u, θ, s).
///
/// The A-integrals are closed form: with Φ_μ(Z) = det(Z)⁻¹ Ĝ_f(Z⁻ᵀμ) φ_f(Z),
/// the left side is F_X[Σ_Q w_Q ρ(Q) Ĝ_g(μ) φ_g(Q) Φ_μ(XQ⁻¹)] and the right
/// side F_X[Φ_μ]·Ĝ_g(μ) F_Q[φ_g].
pub fn cor51_residual(f: &AffineGaussian<'_>, g: &AffineGaussian<'_>, grids: &ConvolutionGrids) -> Result<IdentityReport> {
    check_grids(grids, true)?;
    let start = Instant::now();
    let chart_axes = |lin: &AxisGrid, log: &AxisGrid, k: usize| {
        vec![linear_axis("x", lin), log_axis("u", log), Axis::angle("theta", k), log_axis("s", log)]
    };
    let xs = SampledFunction::zeros(chart_axes(&grids.field_linear, &grids.field_log, grids.field_angle))?;
    let qs = SampledFunction::from_fn(chart_axes(&grids.kernel_linear, &grids.kernel_log, grids.kernel_angle), |c| (g.phi)(c))?;
    let nodes = |s: &SampledFunction| -> Vec<([f64; 4], f64)> {
        (0..s.len())
            .map(|i| {
                let mi = s.multi_index(i);
                let p: Vec<f64> = mi.iter().zip(s.axes()).map(|(&j, a)| a.point(j)[0]).collect();
                ([p[0], p[1], p[2], p[3]], s.weight(i))
            })
            .collect()
    };
    let xn = nodes(&xs);
    let qn = nodes(&qs);
    let q_inv: Vec<super::convolve::Mat2> = qn.iter().map(|(q, _)| inv2(&glplus2_matrix(q))).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(grids.seed);
    let mus: Vec<[f64; 2]> = (0..2).map(|_| [rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6)]).collect();
    let per_mu = grids.points.div_ceil(2);
    let omegas: Vec<[f64; 4]> = (0..per_mu)
        .map(|_| {
            [
                rng.random_range(-0.6..0.6),
                rng.random_range(-0.6..0.6),
                rng.random_range(-1..=1) as f64,
                rng.random_range(-0.6..0.6),
            ]
        })
        .collect();
    let kern = |w: &[f64; 4], c: &[f64; 4]| Complex64::from_polar(1.0, -(w[0] * c[0] + w[1] * c[1] + w[2] * c[2] + w[3] * c[3]));

    // Φ_μ(Z) for every μ from one chart evaluation of Z.
    let phi_all = |z: &super::convolve::Mat2| -> [Complex64; 2] {
        let det = z[0] * z[3] - z[1] * z[2];
        let zit = [z[3] / det, -z[2] / det, -z[1] / det, z[0] / det];
        let base = (f.phi)(&super::convolve::glplus2_coords(z)) / det;
        [f.gaussian_ft(apply2(&zit, mus[0])) * base, f.gaussian_ft(apply2(&zit, mus[1])) * base]
    };
    let conv = crate::par::map_indexed(xn.len(), |i| {
        let xm = glplus2_matrix(&xn[i].0);
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        for (j, (q, w)) in qn.iter().enumerate() {
            let c = qs.values()[j] * (w * (-2.0 * q[1]).exp());
            let v = phi_all(&mul2(&xm, &q_inv[j]));
            acc[0] += c * v[0];
            acc[1] += c * v[1];
        }
        acc
    });
    let plain = crate::par::map_indexed(xn.len(), |i| phi_all(&glplus2_matrix(&xn[i].0)));

    let mut pairs = Vec::with_capacity(grids.points);
    for (k, mu) in mus.iter().enumerate() {
        let ghat = g.gaussian_ft(*mu);
        for om in &omegas {
            let mut left = Complex64::new(0.0, 0.0);
            let mut fx = Complex64::new(0.0, 0.0);
            for (i, (c, w)) in xn.iter().enumerate() {
                let e = kern(om, c) * w;
                left += e * conv[i][k];
                fx += e * plain[i][k];
            }
            let mut gq = Complex64::new(0.0, 0.0);
            for (j, (c, w)) in qn.iter().enumerate() {
                gq += kern(om, c) * w * qs.values()[j];
            }
            pairs.push((left * ghat, fx * gq * ghat));
        }
    }
    pairs.truncate(grids.points);
    Ok(IdentityReport::worst_of("Cor5.1", Level::GAPlus, 2, &pairs, grids.describe())
        .with_seconds(start.elapsed().as_secs_f64()))
}

/// Default test functions of the identities.
pub mod defaults {
    use super::*;

    pub fn s_f(c: &[f64]) -> Complex64 {
        Complex64::new((-(c[0] * c[0]) / 2.0 - (c[1] - 0.1).powi(2) / (2.0 * 0.125 * 0.125)).exp(), 0.0)
    }

    pub fn lambda_f(c: &[f64]) -> Complex64 {
        Complex64::new((-(c[0] * c[0]) / 2.0 - (c[1] - 0.1).powi(2) / (2.0 * 0.5 * 0.5)).exp(), 0.0)
    }

    pub fn s_g(c: &[f64]) -> Complex64 {
        Complex64::new((-(c[0] - 0.2).powi(2) / (2.0 * 0.5 * 0.5) - c[1] * c[1] / (2.0 * 0.2 * 0.2)).exp(), 0.0)
    }

    pub fn glplus_f(c: &[f64]) -> Complex64 {
        let r2 = c[0] * c[0] + c[1] * c[1] + c[3] * c[3];
        Complex64::new((-r2 / (2.0 * 0.7 * 0.7)).exp() * (1.0 + 0.3 * c[2].cos()), 0.0)
    }

    pub fn glplus_g(c: &[f64]) -> Complex64 {
        let r2 = (c[0] - 0.1).powi(2) + c[1] * c[1] + c[3] * c[3];
        Complex64::new((-r2 / (2.0 * 0.5 * 0.5)).exp(), 0.2 * (2.0 * c[2]).sin())
    }

    pub fn affine_f() -> AffineGaussian<'static> {
        AffineGaussian { amplitude: 1.0, sigma: 1.0, center: [0.0, 0.0], phi: &glplus_f }
    }

    pub fn affine_g() -> AffineGaussian<'static> {
        AffineGaussian { amplitude: 1.0, sigma: 0.5, center: [0.2, -0.1], phi: &glplus_g }
    }
}

/// Residual of `which` with the default test functions, scaled by `g_scale`
/// (0 gives the zero kernel).
pub fn convolution_identity_residual(which: ConvolutionIdentity, grids: &ConvolutionGrids, g_scale: f64) -> Result<IdentityReport> {
    let sg = move |c: &[f64]| defaults::s_g(c) * g_scale;
    let mut ag = defaults::affine_g();
    ag.amplitude *= g_scale;
    match which {
        ConvolutionIdentity::Lemma31a => lemma31a_residual(&defaults::lambda_f, &sg, grids),
        ConvolutionIdentity::Lemma31b => lemma31b_residual(&defaults::s_f, &sg, grids),
        ConvolutionIdentity::Lemma51 => lemma51_residual(&defaults::affine_f(), &ag, grids),
        ConvolutionIdentity::Cor51 => cor51_residual(&defaults::affine_f(), &ag, grids),
    }
}
