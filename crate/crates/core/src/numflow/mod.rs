//! Numerical cross-check: integrate the source equation and the system for
//! a concrete polynomial `q`, push solutions through the one-parameter
//! groups of the generators and measure how far the images are from
//! solving the system.
//!
//! Transformed solutions are differentiated in Taylor mode: the graph of a
//! base solution near `x = s` is carried as truncated power series in
//! `s`, moved along the group parameter, and re-parameterized by the new
//! independent variable through series reversion. This never touches the
//! symbolic prolongation formulas.

pub mod dopri;
pub mod series;

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffring::{DiffRing, Symbol, XPoly};
use crate::equations::normal_form;
use crate::error::{Error, Result};
use crate::generators::{self, GeneratorLabel};
use crate::jetfield::{JetPoly, VectorField};

pub use dopri::{integrate, StepMode, Trajectory};
pub use series::Series;

/// Degree of the Taylor expansions stored at integration nodes.
const NODE_DEGREE: usize = 28;

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Taylor coefficients of a polynomial about `x`.
fn recenter(p: &[f64], x: f64) -> Vec<f64> {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1] * x;
            c[j] += t;
        }
    }
    c
}

/// `(p+1)(p+2)...(p+k)`.
fn rising(p: usize, k: usize) -> f64 {
    (p + 1..=p + k).map(|v| v as f64).product()
}

/// A scalar linear ODE `y^(r) + Σ_{k<r} p_k(x) y^(k) = 0` with polynomial
/// coefficients.
#[derive(Clone, Debug)]
pub struct LinearOde {
    pub order: usize,
    /// `coeffs[k]` are the monomial coefficients of `p_k`.
    pub coeffs: Vec<Vec<f64>>,
}

impl LinearOde {
    pub fn source(q: &XPoly) -> Self {
        LinearOde { order: 2, coeffs: vec![q.coeffs_f64(), vec![]] }
    }

    /// The scalar operator of `normal_form(n, ·)` with `q` substituted.
    pub fn normal_form(q: &XPoly, n: usize) -> Result<Self> {
        let ring = DiffRing::polynomial_q(q.clone());
        let sys = normal_form(&DiffRing::abstract_q(), n, 1)?.specialize(&ring);
        let mut coeffs = vec![vec![]; n];
        for j in 2..=n {
            let p = XPoly::from_coeff_poly(sys.a(j))
                .ok_or_else(|| Error::Integration(format!("A[{j}] is not a polynomial in x")))?;
            coeffs[n - j] = p.coeffs_f64();
        }
        Ok(LinearOde { order: n, coeffs })
    }

    /// `y^(r)` from the lower derivatives.
    pub fn top(&self, x: f64, state: &[f64]) -> f64 {
        -self.coeffs.iter().zip(state).map(|(p, y)| horner(p, x) * y).sum::<f64>()
    }

    /// Taylor coefficients about `x` of the solution with
    /// `state = (y, y', ..., y^(r-1))` at `x`.
    pub fn taylor(&self, x: f64, state: &[f64], degree: usize) -> Vec<f64> {
        let r = self.order;
        let mut c = vec![0.0; degree.max(r - 1) + 1];
        let mut fact = 1.0;
        for k in 0..r {
            if k > 0 {
                fact *= k as f64;
            }
            c[k] = state[k] / fact;
        }
        let shifted: Vec<Vec<f64>> = self.coeffs.iter().map(|p| recenter(p, x)).collect();
        for t in 0..=degree.saturating_sub(r) {
            let mut sum = 0.0;
            for (k, pk) in shifted.iter().enumerate() {
                for (s, a) in pk.iter().enumerate().take(t + 1) {
                    let p = t - s;
                    sum += a * rising(p, k) * c[p + k];
                }
            }
            c[t + r] = -sum / rising(t, r);
        }
        c.truncate(degree + 1);
        c
    }
}

/// Shifts Taylor coefficients about `a` to coefficients about `a + d`,
/// keeping `degree + 1` of them.
fn shift(c: &[f64], d: f64, degree: usize) -> Vec<f64> {
    (0..=degree)
        .map(|r| {
            let mut acc = 0.0;
            let mut binom = 1.0;
            let mut pw = 1.0;
            for (p, cp) in c.iter().enumerate().skip(r) {
                if p > r {
                    binom = binom * p as f64 / (p - r) as f64;
                    pw *= d;
                }
                acc += binom * cp * pw;
            }
            acc
        })
        .collect()
}

/// Solution data stored at one accepted integration step.
#[derive(Clone, Debug)]
struct Node {
    x: f64,
    /// One Taylor expansion per scalar solution.
    series: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
struct Nodes(Vec<Node>);

impl Nodes {
    fn build(ode: &LinearOde, fwd: &Trajectory, bwd: &Trajectory, blocks: usize) -> Self {
        let r = ode.order;
        let mut nodes: Vec<Node> = bwd
            .xs
            .iter()
            .zip(&bwd.ys)
            .skip(1)
            .rev()
            .chain(fwd.xs.iter().zip(&fwd.ys))
            .map(|(&x, y)| Node {
                x,
                series: (0..blocks).map(|b| ode.taylor(x, &y[b * r..(b + 1) * r], NODE_DEGREE)).collect(),
            })
            .collect();
        nodes.dedup_by(|a, b| a.x == b.x);
        Nodes(nodes)
    }

    fn nearest(&self, x: f64) -> &Node {
        let i = self.0.partition_point(|n| n.x < x);
        match (i.checked_sub(1).map(|j| &self.0[j]), self.0.get(i)) {
            (Some(a), Some(b)) => {
                if x - a.x <= b.x - x {
                    a
                } else {
                    b
                }
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("integration stores at least one node"),
        }
    }

    fn taylor(&self, x: f64, block: usize, degree: usize) -> Vec<f64> {
        let node = self.nearest(x);
        shift(&node.series[block], x - node.x, degree)
    }
}

/// A concrete potential, integration interval and step control.
#[derive(Clone, Debug)]
pub struct NumericInstance {
    pub q: XPoly,
    pub x0: f64,
    pub x1: f64,
    pub mode: StepMode,
}

impl NumericInstance {
    pub fn new(q: XPoly) -> Self {
        NumericInstance { q, x0: 0.0, x1: 1.0, mode: StepMode::adaptive(1e-10) }
    }

    pub fn with_interval(mut self, x0: f64, x1: f64) -> Self {
        self.x0 = x0;
        self.x1 = x1;
        self
    }

    pub fn with_mode(mut self, mode: StepMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Dense solutions `u, v` of `y'' + q y = 0` and of the `m`-component
/// system on `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct SolutionBundle {
    pub n: usize,
    pub m: usize,
    pub q: XPoly,
    pub x0: f64,
    pub lo: f64,
    pub hi: f64,
    system: LinearOde,
    q_coeffs: Vec<f64>,
    source_nodes: Nodes,
    system_nodes: Nodes,
    /// `max |u v' - u' v - 1|` over the integration nodes.
    pub wronskian_drift: f64,
    pub max_error_estimate: f64,
    pub steps: usize,
}

/// Initial data `y_j^(r)(x0) = 1/(1+j+r)` for the system solution.
pub fn default_initial_data(n: usize, m: usize) -> Vec<f64> {
    (1..=m).flat_map(|j| (0..n).map(move |r| 1.0 / (1 + j + r) as f64)).collect()
}

/// Integrates `u` (`u(x0)=1, u'(x0)=0`), `v` (`v(x0)=0, v'(x0)=1`) and the
/// system from `x0` to both ends of `[lo, hi]`.
pub fn integrate_instance(inst: &NumericInstance, n: usize, m: usize, lo: f64, hi: f64) -> Result<SolutionBundle> {
    let ordered = inst.x1 > inst.x0 && lo <= inst.x0 && inst.x0 <= hi;
    if !ordered {
        return Err(Error::Integration(format!("invalid interval [{lo}, {hi}] around {}", inst.x0)));
    }
    let source = LinearOde::source(&inst.q);
    let system = LinearOde::normal_form(&inst.q, n)?;
    let src_rhs = |x: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        for b in 0..2 {
            d[2 * b] = y[2 * b + 1];
            d[2 * b + 1] = source.top(x, &y[2 * b..2 * b + 2]);
        }
        Ok(())
    };
    let sys_rhs = |x: f64, y: &[f64], d: &mut [f64]| -> Result<()> {
        for b in 0..m {
            let blk = &y[b * n..(b + 1) * n];
            d[b * n..(b + 1) * n - 1].copy_from_slice(&blk[1..]);
            d[(b + 1) * n - 1] = system.top(x, blk);
        }
        Ok(())
    };
    let src0 = [1.0, 0.0, 0.0, 1.0];
    let sys0 = default_initial_data(n, m);
    let sf = integrate(src_rhs, inst.x0, &src0, hi, inst.mode)?;
    let sb = integrate(src_rhs, inst.x0, &src0, lo, inst.mode)?;
    let yf = integrate(sys_rhs, inst.x0, &sys0, hi, inst.mode)?;
    let yb = integrate(sys_rhs, inst.x0, &sys0, lo, inst.mode)?;
    let wronskian_drift =
        sf.ys.iter().chain(&sb.ys).map(|s| (s[0] * s[3] - s[1] * s[2] - 1.0).abs()).fold(0.0, f64::max);
    let max_error_estimate = [&sf, &sb, &yf, &yb].iter().map(|t| t.max_error_estimate).fold(0.0, f64::max);
    let steps = [&sf, &sb, &yf, &yb].iter().map(|t| t.xs.len() - 1).sum();
    Ok(SolutionBundle {
        n,
        m,
        q: inst.q.clone(),
        x0: inst.x0,
        lo,
        hi,
        source_nodes: Nodes::build(&source, &sf, &sb, 2),
        system_nodes: Nodes::build(&system, &yf, &yb, m),
        q_coeffs: inst.q.coeffs_f64(),
        system,
        wronskian_drift,
        max_error_estimate,
        steps,
    })
}

impl SolutionBundle {
    fn check_range(&self, x: f64) -> Result<()> {
        let slack = 1e-12 * (self.hi - self.lo).max(1.0);
        if x.is_finite() && x >= self.lo - slack && x <= self.hi + slack {
            Ok(())
        } else {
            Err(Error::FlowOutOfRange(x))
        }
    }

    /// Taylor coefficients of `u` and `v` about `x`.
    pub fn source_taylor(&self, x: f64, degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_range(x)?;
        Ok((self.source_nodes.taylor(x, 0, degree), self.source_nodes.taylor(x, 1, degree)))
    }

    /// Taylor coefficients of each system component about `x`.
    pub fn system_taylor(&self, x: f64, degree: usize) -> Result<Vec<Vec<f64>>> {
        self.check_range(x)?;
        Ok((0..self.m).map(|b| self.system_nodes.taylor(x, b, degree)).collect())
    }

    /// `(u, u', v, v')` at `x`.
    pub fn source_at(&self, x: f64) -> Result<[f64; 4]> {
        let (u, v) = self.source_taylor(x, 1)?;
        Ok([u[0], u[1], v[0], v[1]])
    }

    /// `A[j](x)` for `j = 2..=n` (index `j`).
    pub fn coefficient_at(&self, j: usize, x: f64) -> f64 {
        horner(&self.system.coeffs[self.n - j], x)
    }

    /// `y^(n) + Σ A[j] y^(n-j)` from derivatives `d[0..=n]`.
    pub fn operator_residual(&self, x: f64, d: &[f64]) -> f64 {
        let mut r = d[self.n];
        for j in 2..=self.n {
            r += self.coefficient_at(j, x) * d[self.n - j];
        }
        r
    }

    fn symbols(&self, x: &Series, max_q: usize) -> Result<Symbols> {
        let deg = x.degree();
        let (u, v) = self.source_taylor(x.value(), deg + 1)?;
        let du: Vec<f64> = (1..u.len()).map(|k| k as f64 * u[k]).collect();
        let dv: Vec<f64> = (1..v.len()).map(|k| k as f64 * v[k]).collect();
        let mut q = Vec::new();
        let mut p = self.q_coeffs.clone();
        for _ in 0..=max_q {
            q.push(x.compose_taylor(&recenter(&p, x.value())));
            p = (1..p.len()).map(|k| k as f64 * p[k]).collect();
        }
        Ok(Symbols {
            x: x.clone(),
            u: x.compose_taylor(&u),
            v: x.compose_taylor(&v),
            du: x.compose_taylor(&du),
            dv: x.compose_taylor(&dv),
            q,
        })
    }
}

/// Series values of the coefficient-ring symbols along a moving `x`.
struct Symbols {
    x: Series,
    u: Series,
    v: Series,
    du: Series,
    dv: Series,
    q: Vec<Series>,
}

impl Symbols {
    fn get(&self, s: Symbol) -> &Series {
        match s {
            Symbol::X => &self.x,
            Symbol::U => &self.u,
            Symbol::V => &self.v,
            Symbol::DU => &self.du,
            Symbol::DV => &self.dv,
            Symbol::Q(k) => &self.q[k as usize],
            Symbol::D2U | Symbol::D2V => unreachable!("canonical coefficients never contain u'' or v''"),
        }
    }
}

fn eval_jet(p: &JetPoly, syms: &Symbols, y: &[Series]) -> Result<Series> {
    let deg = syms.x.degree();
    let mut out = Series::zero(deg);
    for (jm, c) in p.terms() {
        let mut coef = Series::zero(deg);
        for (mono, r) in c.terms() {
            let mut t = Series::constant(deg, num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN));
            for (s, e) in mono.symbols() {
                t = &t * &syms.get(s).powi(e);
            }
            coef = &coef + &t;
        }
        for (var, e) in jm.vars() {
            if var.order != 0 {
                return Err(Error::NotPointField(format!("component depends on {var}")));
            }
            coef = &coef * &y[var.comp as usize].powi(e);
        }
        out = &out + &coef;
    }
    Ok(out)
}

fn max_q_order(v: &VectorField) -> usize {
    v.components().flat_map(|p| p.terms().filter_map(|(_, c)| c.max_q_order()).collect::<Vec<_>>()).max().unwrap_or(0)
}

/// A field together with the knowledge needed to pick its flow.
#[derive(Clone, Debug)]
pub struct FlowGenerator {
    pub name: String,
    pub label: Option<GeneratorLabel>,
    pub field: VectorField,
    pub n: usize,
}

impl FlowGenerator {
    pub fn from_label(label: GeneratorLabel, n: usize, m: usize) -> Result<Self> {
        Ok(FlowGenerator { name: label.to_string(), label: Some(label), field: generators::make(label, n, m)?, n })
    }

    pub fn custom(field: VectorField, n: usize) -> Self {
        FlowGenerator { name: field.label.clone(), label: None, field, n }
    }

    /// `x y_1 ∂_{y_1}`, which is not a symmetry.
    pub fn negative_control(n: usize, m: usize) -> Self {
        let mut phi = vec![JetPoly::zero(m); m];
        phi[0] = JetPoly::var(m, 0, 0).scale(&crate::diffring::CoeffPoly::x());
        let field = VectorField::new_unchecked("x*y1*d/dy1", JetPoly::zero(m), phi);
        Self::custom(field, n)
    }
}

/// Tolerances for flows integrated along the group parameter.
const FLOW_RTOL: f64 = 1e-12;

/// Moves a series-valued point `(x, y)` along the flow of `g` for time `t`.
pub fn flow_series(
    bundle: &SolutionBundle,
    g: &FlowGenerator,
    t: f64,
    x: &Series,
    y: &[Series],
) -> Result<(Series, Vec<Series>)> {
    let m = y.len();
    if m != g.field.dim() {
        return Err(Error::DimensionMismatch(g.field.dim(), m));
    }
    let deg = x.degree();
    match g.label {
        Some(GeneratorLabel::H(i, j)) => {
            let mut w = y.to_vec();
            if i == j {
                w[j - 1] = y[j - 1].scale(t.exp());
            } else {
                w[j - 1] = &y[j - 1] + &y[i - 1].scale(t);
            }
            Ok((x.clone(), w))
        }
        Some(GeneratorLabel::S(k, j)) => {
            let (u, v) = bundle.source_taylor(x.value(), deg)?;
            let (us, vs) = (x.compose_taylor(&u), x.compose_taylor(&v));
            let s = &us.powi((g.n - 1 - k) as u32) * &vs.powi(k as u32);
            let mut w = y.to_vec();
            w[j - 1] = &y[j - 1] + &s.scale(t);
            Ok((x.clone(), w))
        }
        _ => {
            let len = deg + 1;
            let max_q = max_q_order(&g.field);
            let rhs = |_: f64, state: &[f64], d: &mut [f64]| -> Result<()> {
                let xs = Series::from_coeffs(deg, &state[..len]);
                let ys: Vec<Series> =
                    (0..m).map(|b| Series::from_coeffs(deg, &state[(b + 1) * len..(b + 2) * len])).collect();
                let syms = bundle.symbols(&xs, max_q)?;
                let xi = eval_jet(&g.field.xi, &syms, &ys)?;
                d[..len].copy_from_slice(&xi.c);
                for b in 0..m {
                    let phi = eval_jet(&g.field.phi[b], &syms, &ys)?;
                    d[(b + 1) * len..(b + 2) * len].copy_from_slice(&phi.c);
                }
                Ok(())
            };
            let state0: Vec<f64> = std::iter::once(x).chain(y).flat_map(|s| s.c.iter().copied()).collect();
            let traj = integrate(rhs, 0.0, &state0, t, StepMode::Adaptive { rtol: FLOW_RTOL, atol: FLOW_RTOL * 1e-2 })?;
            let end = traj.last();
            let xs = Series::from_coeffs(deg, &end[..len]);
            bundle.check_range(xs.value())?;
            let ys = (0..m).map(|b| Series::from_coeffs(deg, &end[(b + 1) * len..(b + 2) * len])).collect();
            Ok((xs, ys))
        }
    }
}

/// Image of the point `(x, y)` under the group element `exp(t g)`.
pub fn flow_map(bundle: &SolutionBundle, g: &FlowGenerator, t: f64, x: f64, y: &[f64]) -> Result<(f64, Vec<f64>)> {
    let xs = Series::constant(0, x);
    let ys: Vec<Series> = y.iter().map(|&v| Series::constant(0, v)).collect();
    let (xn, yn) = flow_series(bundle, g, t, &xs, &ys)?;
    Ok((xn.value(), yn.iter().map(Series::value).collect()))
}

/// Sample points `x0 + (x1-x0) i/(grid-1)`.
pub fn grid_points(x0: f64, x1: f64, grid: usize) -> Vec<f64> {
    if grid <= 1 {
        return vec![x0];
    }
    (0..grid).map(|i| x0 + (x1 - x0) * i as f64 / (grid - 1) as f64).collect()
}

/// Transforms the stored system solution by `exp(t g)` and returns the
/// largest system residual of the image over the sample points.
pub fn residual_after_flow(bundle: &SolutionBundle, g: &FlowGenerator, t: f64, points: &[f64]) -> Result<f64> {
    let n = bundle.n;
    let mut worst: f64 = 0.0;
    for &s in points {
        let x = Series::variable(n, s);
        let y: Vec<Series> = bundle.system_taylor(s, n)?.iter().map(|c| Series::from_coeffs(n, c)).collect();
        let (xt, yt) = flow_series(bundle, g, t, &x, &y)?;
        let back = xt
            .revert()
            .ok_or_else(|| Error::Integration(format!("flow of {} is not invertible at x = {s}", g.name)))?;
        let xstar = xt.value();
        for comp in &yt {
            let mut shifted = comp.clone();
            shifted.c[0] = 0.0;
            let mut img = shifted.compose(&back);
            img.c[0] = comp.value();
            let r = bundle.operator_residual(xstar, &img.derivatives());
            if !r.is_finite() {
                return Err(Error::Integration(format!("non-finite residual for {} at x = {s}", g.name)));
            }
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Configuration of a batch numeric check.
#[derive(Clone, Debug)]
pub struct NumcheckConfig {
    pub n: usize,
    pub m: usize,
    pub qs: Vec<XPoly>,
    pub ts: Vec<f64>,
    /// Acceptance threshold on the residual.
    pub tol: f64,
    /// Threshold the negative control must exceed.
    pub control_tol: f64,
    pub rtol: f64,
    pub grid: usize,
    pub x0: f64,
    pub x1: f64,
    /// Bound on the Wronskian drift.
    pub drift_tol: f64,
}

impl NumcheckConfig {
    pub fn new(n: usize, m: usize, qs: Vec<XPoly>) -> Self {
        NumcheckConfig {
            n,
            m,
            qs,
            ts: vec![-0.5, -0.1, 0.1, 0.5],
            tol: 1e-6,
            control_tol: 1e-2,
            rtol: 1e-10,
            grid: 11,
            x0: 0.0,
            x1: 1.0,
            drift_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumcheckRow {
    pub q: String,
    pub generator: String,
    pub t: f64,
    pub residual: Option<f64>,
    pub negative_control: bool,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftRow {
    pub q: String,
    pub wronskian_drift: f64,
    pub enlarged: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumcheckReport {
    pub n: usize,
    pub m: usize,
    pub tol: f64,
    pub rows: Vec<NumcheckRow>,
    pub drift: Vec<DriftRow>,
    pub max_symmetry_residual: f64,
    pub min_control_residual: f64,
    pub pass: bool,
}

/// Integration on `[x0, x1]`, enlarged once to `[x0 - 2L, x1 + 2L]` when a
/// flow leaves the interval.
struct BundlePair {
    base: SolutionBundle,
    wide: OnceLock<std::result::Result<SolutionBundle, String>>,
    inst: NumericInstance,
    n: usize,
    m: usize,
}

impl BundlePair {
    fn residual(&self, g: &FlowGenerator, t: f64, points: &[f64]) -> Result<f64> {
        match residual_after_flow(&self.base, g, t, points) {
            Err(Error::FlowOutOfRange(_)) => {
                let l = self.inst.x1 - self.inst.x0;
                let wide = self
                    .wide
                    .get_or_init(|| {
                        integrate_instance(&self.inst, self.n, self.m, self.inst.x0 - 2.0 * l, self.inst.x1 + 2.0 * l)
                            .map_err(|e| e.to_string())
                    })
                    .as_ref()
                    .map_err(|e| Error::Integration(e.clone()))?;
                residual_after_flow(wide, g, t, points)
            }
            other => other,
        }
    }
}

/// Residuals for every basis generator and the negative control over the
/// grid of potentials and group parameters.
pub fn numcheck(cfg: &NumcheckConfig) -> Result<NumcheckReport> {
    let (n, m) = (cfg.n, cfg.m);
    let mut gens: Vec<FlowGenerator> = generators::basis_labels(n, m)?
        .into_iter()
        .map(|l| FlowGenerator::from_label(l, n, m))
        .collect::<Result<_>>()?;
    gens.push(FlowGenerator::negative_control(n, m));
    let pairs: Vec<BundlePair> = cfg
        .qs
        .par_iter()
        .map(|q| {
            let inst =
                NumericInstance::new(q.clone()).with_interval(cfg.x0, cfg.x1).with_mode(StepMode::adaptive(cfg.rtol));
            Ok(BundlePair { base: integrate_instance(&inst, n, m, cfg.x0, cfg.x1)?, wide: OnceLock::new(), inst, n, m })
        })
        .collect::<Result<_>>()?;
    let points = grid_points(cfg.x0, cfg.x1, cfg.grid);
    let jobs: Vec<(usize, usize, f64)> = (0..pairs.len())
        .flat_map(|qi| (0..gens.len()).flat_map(move |gi| cfg.ts.iter().map(move |&t| (qi, gi, t))))
        .collect();
    let rows: Vec<NumcheckRow> = jobs
        .par_iter()
        .map(|&(qi, gi, t)| {
            let g = &gens[gi];
            let control = g.label.is_none();
            let res = pairs[qi].residual(g, t, &points);
            let (residual, error) = match res {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let pass = match residual {
                Some(r) if control => r > cfg.control_tol,
                Some(r) => r < cfg.tol,
                None => false,
            };
            NumcheckRow {
                q: cfg.qs[qi].to_string(),
                generator: g.name.clone(),
                t,
                residual,
                negative_control: control,
                pass,
                error,
            }
        })
        .collect();
    let drift: Vec<DriftRow> = pairs
        .iter()
        .map(|p| {
            let wide = p.wide.get().and_then(|w| w.as_ref().ok());
            let d = wide.map_or(p.base.wronskian_drift, |w| w.wronskian_drift.max(p.base.wronskian_drift));
            DriftRow { q: p.inst.q.to_string(), wronskian_drift: d, enlarged: wide.is_some(), pass: d < cfg.drift_tol }
        })
        .collect();
    let max_symmetry_residual =
        rows.iter().filter(|r| !r.negative_control).map(|r| r.residual.unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    let min_control_residual =
        rows.iter().filter(|r| r.negative_control).map(|r| r.residual.unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
    let pass = rows.iter().all(|r| r.pass) && drift.iter().all(|d| d.pass);
    Ok(NumcheckReport { n, m, tol: cfg.tol, rows, drift, max_symmetry_residual, min_control_residual, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    /// Residual of the transported solution.
    pub residual: f64,
    /// Largest deviation of the transported points `(x*, y*)` from those
    /// of a tight-tolerance reference integration.
    pub image_error: f64,
}

fn transported_points(bundle: &SolutionBundle, g: &FlowGenerator, t: f64, points: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for &s in points {
        let y: Vec<f64> = bundle.system_taylor(s, 0)?.iter().map(|c| c[0]).collect();
        let (x, w) = flow_map(bundle, g, t, s, &y)?;
        out.push(x);
        out.extend(w);
    }
    Ok(out)
}

/// Fixed-step integrations at each step size against an adaptive
/// reference at `rtol = 1e-13`.
pub fn convergence_study(
    q: &XPoly,
    n: usize,
    m: usize,
    g: &FlowGenerator,
    t: f64,
    steps: &[f64],
    grid: usize,
) -> Result<Vec<ConvergenceRow>> {
    let run = |mode: StepMode| {
        let inst = NumericInstance::new(q.clone()).with_mode(mode);
        let l = inst.x1 - inst.x0;
        integrate_instance(&inst, n, m, inst.x0 - 2.0 * l, inst.x1 + 2.0 * l)
    };
    let points = grid_points(0.0, 1.0, grid);
    let reference = transported_points(&run(StepMode::adaptive(1e-13))?, g, t, &points)?;
    steps
        .iter()
        .map(|&h| {
            let bundle = run(StepMode::Fixed { h })?;
            let residual = residual_after_flow(&bundle, g, t, &points)?;
            let image = transported_points(&bundle, g, t, &points)?;
            let image_error = image.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(ConvergenceRow { h, residual, image_error })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle(q: &str, n: usize, m: usize) -> SolutionBundle {
        let inst = NumericInstance::new(XPoly::parse(q).unwrap());
        integrate_instance(&inst, n, m, -2.0, 3.0).unwrap()
    }

    #[test]
    fn closed_form_sources() {
        let b = bundle("0", 3, 1);
        for x in [-1.5, 0.3, 2.7] {
            let [u, du, v, dv] = b.source_at(x).unwrap();
            assert!((u - 1.0).abs() < 1e-13 && du.abs() < 1e-13);
            assert!((v - x).abs() < 1e-13 && (dv - 1.0).abs() < 1e-13);
        }
        let b = bundle("1", 3, 1);
        for x in [-1.9, 0.45, 2.2] {
            let [u, du, v, dv] = b.source_at(x).unwrap();
            assert!((u - x.cos()).abs() < 1e-9 && (du + x.sin()).abs() < 1e-9);
            assert!((v - x.sin()).abs() < 1e-9 && (dv - x.cos()).abs() < 1e-9);
        }
        assert!(b.wronskian_drift < 1e-9);
    }

    #[test]
    fn airy_wronskian_drift() {
        let inst = NumericInstance::new(XPoly::parse("x").unwrap());
        let b = integrate_instance(&inst, 3, 2, 0.0, 1.0).unwrap();
        assert!(b.wronskian_drift < 1e-9, "{}", b.wronskian_drift);
        assert!(b.max_error_estimate <= 1.0);
    }

    #[test]
    fn taylor_matches_exponential() {
        // y'' - y = 0 through (1, 1) is e^x
        let ode = LinearOde { order: 2, coeffs: vec![vec![-1.0], vec![]] };
        let c = ode.taylor(0.0, &[1.0, 1.0], 8);
        let mut f = 1.0;
        for (k, ck) in c.iter().enumerate() {
            if k > 0 {
                f *= k as f64;
            }
            assert!((ck - 1.0 / f).abs() < 1e-15);
        }
    }

    #[test]
    fn affine_and_identity_flows() {
        let b = bundle("x", 3, 2);
        let y = [0.7, -0.2];
        let h12 = FlowGenerator::from_label(GeneratorLabel::H(1, 2), 3, 2).unwrap();
        let (x, w) = flow_map(&b, &h12, 0.5, 0.4, &y).unwrap();
        assert_eq!(x, 0.4);
        assert!((w[1] - (0.5 * 0.7 - 0.2)).abs() < 1e-15 && w[0] == 0.7);
        let s01 = FlowGenerator::from_label(GeneratorLabel::S(0, 1), 3, 2).unwrap();
        let (_, w) = flow_map(&b, &s01, 0.5, 0.4, &y).unwrap();
        let u = b.source_at(0.4).unwrap()[0];
        assert!((w[0] - (0.7 + 0.5 * u * u)).abs() < 1e-14);
        for label in generators::basis_labels(3, 2).unwrap() {
            let g = FlowGenerator::from_label(label, 3, 2).unwrap();
            let (x, w) = flow_map(&b, &g, 0.0, 0.4, &y).unwrap();
            assert_eq!((x, w), (0.4, y.to_vec()), "{label}");
        }
    }

    #[test]
    fn flows_compose() {
        let b = bundle("1", 3, 1);
        let fz = FlowGenerator::from_label(GeneratorLabel::Fz, 3, 1).unwrap();
        let (x1, y1) = flow_map(&b, &fz, 0.2, 0.5, &[0.3]).unwrap();
        let (x2, y2) = flow_map(&b, &fz, 0.3, x1, &y1).unwrap();
        let (x3, y3) = flow_map(&b, &fz, 0.5, 0.5, &[0.3]).unwrap();
        assert!((x2 - x3).abs() < 1e-10 && (y2[0] - y3[0]).abs() < 1e-10);
    }

    #[test]
    fn residuals_separate_symmetries_from_control() {
        let b = bundle("1", 3, 2);
        let pts = grid_points(0.0, 1.0, 5);
        let fz = FlowGenerator::from_label(GeneratorLabel::Fz, 3, 2).unwrap();
        assert!(residual_after_flow(&b, &fz, 0.1, &pts).unwrap() < 1e-6);
        let ctl = FlowGenerator::negative_control(3, 2);
        assert!(residual_after_flow(&b, &ctl, 0.5, &pts).unwrap() > 1e-2);
    }

    #[test]
    fn leaving_the_interval_is_an_error() {
        let inst = NumericInstance::new(XPoly::parse("0").unwrap());
        let b = integrate_instance(&inst, 3, 1, 0.0, 1.0).unwrap();
        let fz = FlowGenerator::from_label(GeneratorLabel::Fz, 3, 1).unwrap();
        assert!(matches!(flow_map(&b, &fz, 0.5, 0.9, &[1.0]), Err(Error::FlowOutOfRange(_))));
    }
}
