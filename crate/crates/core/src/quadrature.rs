//! Singular integrals over the complex plane `∫ d²w f(w)`, `d²w = dx dy`.
//!
//! The plane is cut into smooth bump patches around each singular point (polar
//! coordinates with `r = ρ t^κ` so the local power is absorbed), a polar core
//! carrying the complement of the bumps, and a far disc reached through
//! `w → 1/w`. Integrands that oscillate as `e^{i(kw + k̄w̄)}` are instead
//! multiplied by a Gaussian window whose widths are combined by Richardson
//! extrapolation, and the far disc is dropped.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;

use crate::diagram::{Diagram, VId, VKind};
use crate::powexpr::{Base, BoundExpr, Var};
use crate::rng::Rng;
use crate::symbolic::Binding;
use crate::{c, Error, Result, C64, PI};

/// How a result was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Adaptive first, Monte Carlo once the cell budget runs out.
    Auto,
    Adaptive,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Adaptive => "adaptive",
            Method::MonteCarlo => "montecarlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadConfig {
    /// Relative tolerance.
    pub tol: f64,
    pub abs_tol: f64,
    pub seed: u64,
    /// Adaptive cells (225 nodes each) before giving up or falling back.
    pub max_cells: usize,
    pub mc_samples: usize,
    /// Patch radius as a fraction of the distance to the nearest other singular point.
    pub patch_factor: f64,
    pub method: Method,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: 1e-7,
            abs_tol: 1e-14,
            seed: 0,
            max_cells: 40_000,
            mc_samples: 20_000_000,
            patch_factor: 0.3,
            method: Method::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub method: Method,
    /// Adaptive cells or Monte Carlo samples.
    pub samples: usize,
    pub seed: u64,
}

/// A function of one complex variable with its singular structure.
pub struct Integrand<'a> {
    /// `(center, offset) ↦ f(center + offset)`, exact in the offset.
    f: Box<dyn Fn(C64, C64) -> C64 + 'a>,
    /// `(point, p)` with `|f| ~ |w − point|^p` nearby.
    pub singular: Vec<(C64, f64)>,
    /// `|f| ~ |w|^{−decay}` at infinity.
    pub decay: f64,
    /// `|k|` of a common plane wave `e^{i(kw + k̄w̄)}`, if every term carries one.
    pub momentum: Option<f64>,
}

impl<'a> Integrand<'a> {
    pub fn new(f: impl Fn(C64) -> C64 + 'a, singular: Vec<(C64, f64)>, decay: f64) -> Self {
        Integrand { f: Box::new(move |a, d| f(a + d)), singular, decay, momentum: None }
    }

    /// Like `new`, for a function that resolves `center + offset` itself.
    pub fn new_local(f: impl Fn(C64, C64) -> C64 + 'a, singular: Vec<(C64, f64)>, decay: f64) -> Self {
        Integrand { f: Box::new(f), singular, decay, momentum: None }
    }

    pub fn oscillating(mut self, k: f64) -> Self {
        self.momentum = Some(k);
        self
    }

    pub fn eval(&self, w: C64) -> C64 {
        (self.f)(c(0.0, 0.0), w)
    }

    pub fn eval_near(&self, center: C64, offset: C64) -> C64 {
        (self.f)(center, offset)
    }

    /// Integrability gate. Oscillating integrands only need local integrability: any
    /// power growth is tamed by the window and the limit is the distributional one.
    pub fn classify(&self) -> Result<()> {
        for (a, p) in &self.singular {
            if !(*p > -2.0) {
                return Err(Error::NonIntegrable(format!("local exponent {p} at {a}")));
            }
        }
        match self.momentum {
            Some(k) if !(k > 0.0) => Err(Error::NonIntegrable(format!("wave momentum {k}"))),
            None if !(self.decay > 2.0) => Err(Error::NonIntegrable(format!("decay exponent {} <= 2", self.decay))),
            _ => Ok(()),
        }
    }

    /// `expr` as a function of `z_var`, the other coordinates fixed at `pts`.
    pub fn from_bound(expr: &'a BoundExpr, var: Var, pts: &[C64]) -> Result<Self> {
        let info = singular_info(expr, var, pts)?;
        let base = pts.to_vec();
        let buf = RefCell::new(pts.to_vec());
        let f = move |a: C64, d: C64| {
            let mut p = buf.borrow_mut();
            for (q, z) in p.iter_mut().zip(&base) {
                *q = z - a;
            }
            p[var as usize] = d;
            expr.eval_from(&p, -a)
        };
        let mut out = Integrand::new_local(f, info.singular, info.decay);
        out.momentum = info.momentum;
        Ok(out)
    }
}

struct SingularInfo {
    singular: Vec<(C64, f64)>,
    decay: f64,
    momentum: Option<f64>,
}

fn push_singular(list: &mut Vec<(C64, f64)>, a: C64, p: f64) {
    let scale = 1.0 + a.norm();
    if let Some(e) = list.iter_mut().find(|e| (e.0 - a).norm() < 1e-12 * scale) {
        e.1 = e.1.min(p);
    } else {
        list.push((a, p));
    }
}

fn singular_info(expr: &BoundExpr, var: Var, pts: &[C64]) -> Result<SingularInfo> {
    let mut singular = Vec::new();
    let mut growth = f64::NEG_INFINITY;
    let mut momentum: Option<f64> = None;
    let mut all_oscillate = !expr.terms.is_empty();
    for t in &expr.terms {
        let mut local: Vec<(C64, f64)> = Vec::new();
        let mut g = 0.0;
        for (b, p) in &t.factors {
            if !b.involves(var) {
                continue;
            }
            let e = (p.alpha * 2.0).re - p.m as f64;
            let at = match *b {
                Base::Single(_) | Base::Neg(_) => c(0.0, 0.0),
                Base::Diff(x, y) => pts[if x == var { y } else { x } as usize],
            };
            match local.iter_mut().find(|l| (l.0 - at).norm() < 1e-12 * (1.0 + at.norm())) {
                Some(l) => l.1 += e,
                None => local.push((at, e)),
            }
            g += e;
        }
        let mut k_here = c(0.0, 0.0);
        let mut oscillates = false;
        for (key, k, kb) in &t.waves {
            if key.var != var {
                continue;
            }
            if (kb - k.conj()).norm() > 1e-12 * (1.0 + k.norm()) {
                return Err(Error::NonIntegrable("wave with non-conjugate momenta".into()));
            }
            if key.inverted {
                if !local.iter().any(|l| l.0.norm() == 0.0) {
                    local.push((c(0.0, 0.0), 0.0));
                }
            } else {
                k_here += k;
                oscillates = true;
            }
        }
        let kn = k_here.norm();
        if oscillates && kn > 0.0 {
            momentum = Some(momentum.map_or(kn, |m: f64| m.min(kn)));
        } else {
            all_oscillate = false;
        }
        for (a, p) in local {
            push_singular(&mut singular, a, p.min(0.0));
        }
        growth = growth.max(g);
    }
    if growth == f64::NEG_INFINITY {
        growth = 0.0;
    }
    Ok(SingularInfo { singular, decay: -growth, momentum: if all_oscillate { momentum } else { None } })
}

// ---- cubature rule -------------------------------------------------------

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15 nodes on `[−1, 1]` with Kronrod and embedded Gauss weights.
fn rule() -> ([f64; 15], [f64; 15], [f64; 15]) {
    let mut x = [0.0; 15];
    let mut wk = [0.0; 15];
    let mut wg = [0.0; 15];
    for i in 0..7 {
        x[i] = -XGK[i];
        x[14 - i] = XGK[i];
        wk[i] = WGK[i];
        wk[14 - i] = WGK[i];
        if i % 2 == 1 {
            wg[i] = WG[i / 2];
            wg[14 - i] = WG[i / 2];
        }
    }
    x[7] = 0.0;
    wk[7] = WGK[7];
    wg[7] = WG[3];
    (x, wk, wg)
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    piece: usize,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: C64,
    err: f64,
    split_x: bool,
}

struct Ranked(f64, usize);

impl PartialEq for Ranked {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Ranked {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

// ---- plan ----------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
enum Piece {
    /// Bumped disc around a singular point, coordinates `(t, θ)`.
    Patch { a: C64, rho: f64, kappa: f64 },
    /// Disc `|w − c| < r` times the bump complement, coordinates `(r, θ)`.
    Core { r: f64 },
    /// `|w − c| > r` through `u = 1/(w − c)`, coordinates `(t, θ)`.
    Far { r: f64, kappa: f64 },
}

const WINDOW_LEVELS: [f64; 6] = [1.0 / 24.0, 1.0 / 28.0, 1.0 / 32.0, 1.0 / 40.0, 1.0 / 52.0, 1.0 / 72.0];

struct Plan {
    c: C64,
    pieces: Vec<(Piece, usize, usize, f64)>,
    bumps: Vec<(C64, f64)>,
    /// `(ε_j, λ_j)`: window `Σ λ_j e^{−ε_j |w−c|²}`.
    window: Option<Vec<(f64, f64)>>,
}

/// Smooth step: 1 on `[0, 1/2]`, 0 on `[1, ∞)`.
fn bump(x: f64) -> f64 {
    if x <= 0.5 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let y = 2.0 * (1.0 - x);
    let a = libm::exp(-1.0 / y);
    let b = libm::exp(-1.0 / (1.0 - y));
    a / (a + b)
}

fn kappa_for(p: f64) -> f64 {
    1.0 / (p + 2.0)
}

impl Plan {
    fn new(f: &Integrand, cfg: &QuadConfig) -> Plan {
        let pts = &f.singular;
        let c = if pts.is_empty() {
            c(0.0, 0.0)
        } else {
            pts.iter().fold(c(0.0, 0.0), |s, p| s + p.0) / pts.len() as f64
        };
        let mut bumps = Vec::new();
        let mut pieces = Vec::new();
        let mut reach: f64 = 0.0;
        for (i, (a, p)) in pts.iter().enumerate() {
            let d = pts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, b)| (b.0 - *a).norm())
                .fold(f64::INFINITY, f64::min);
            let rho = if d.is_finite() { cfg.patch_factor * d } else { 1.0 };
            bumps.push((*a, rho));
            pieces.push((Piece::Patch { a: *a, rho, kappa: kappa_for(*p) }, 2, 4, 1.0));
            reach = reach.max((*a - c).norm() + rho);
        }
        let mut r_core = if pts.is_empty() { 1.0 } else { 1.5 * reach + 0.5 };
        let window = f.momentum.map(|k| {
            let eps: Vec<f64> = WINDOW_LEVELS.iter().map(|e| e * k * k).collect();
            let lam: Vec<f64> = (0..eps.len())
                .map(|j| {
                    (0..eps.len()).filter(|m| *m != j).map(|m| eps[m] / (eps[m] - eps[j])).product()
                })
                .collect();
            r_core = r_core.max(libm::sqrt(40.0 / eps[eps.len() - 1]) + reach);
            eps.into_iter().zip(lam).collect::<Vec<_>>()
        });
        let (nr, nth) = match f.momentum {
            Some(k) => {
                let wl = PI / k;
                (libm::ceil(r_core / wl).max(4.0) as usize, libm::ceil(2.0 * PI * r_core / wl).max(8.0) as usize)
            }
            None => (4, 8),
        };
        pieces.push((Piece::Core { r: r_core }, nr, nth, 1.0));
        if window.is_none() {
            pieces.push((Piece::Far { r: r_core, kappa: kappa_for(f.decay - 4.0) }, 2, 4, 1.0));
        }
        Plan { c, pieces, bumps, window }
    }

    fn domain(&self, i: usize) -> (f64, f64) {
        match self.pieces[i].0 {
            Piece::Core { r } => (0.0, r),
            _ => (0.0, 1.0),
        }
    }

    fn window_at(&self, w: C64) -> f64 {
        match &self.window {
            None => 1.0,
            Some(levels) => {
                let r2 = (w - self.c).norm_sqr();
                levels.iter().map(|(e, l)| l * libm::exp(-e * r2)).sum()
            }
        }
    }

    /// Integrand in piece coordinates, Jacobian included.
    fn value(&self, f: &Integrand, i: usize, x: f64, th: f64) -> C64 {
        let dir = c(libm::cos(th), libm::sin(th));
        match self.pieces[i].0 {
            Piece::Patch { a, rho, kappa } => {
                if x <= 0.0 {
                    return c(0.0, 0.0);
                }
                let r = rho * libm::pow(x, kappa);
                let chi = bump(r / rho);
                if chi == 0.0 || r == 0.0 {
                    return c(0.0, 0.0);
                }
                let w = a + dir * r;
                let jac = r * rho * kappa * libm::pow(x, kappa - 1.0);
                f.eval_near(a, dir * r) * (chi * jac * self.window_at(w))
            }
            Piece::Core { .. } => {
                let w = self.c + dir * x;
                if x == 0.0 {
                    return c(0.0, 0.0);
                }
                let cover: f64 = self.bumps.iter().map(|(a, rho)| bump((w - a).norm() / rho)).sum();
                let wt = 1.0 - cover;
                if wt <= 0.0 {
                    return c(0.0, 0.0);
                }
                f.eval_near(self.c, dir * x) * (wt * x * self.window_at(w))
            }
            Piece::Far { r, kappa } => {
                if x <= 0.0 {
                    return c(0.0, 0.0);
                }
                let ru = libm::pow(x, kappa) / r;
                let jac = ru * kappa * libm::pow(x, kappa - 1.0) / r / (ru * ru * ru * ru);
                f.eval_near(self.c, dir.conj() / ru) * jac
            }
        }
    }

    fn cell(&self, f: &Integrand, piece: usize, x0: f64, x1: f64, y0: f64, y1: f64) -> Cell {
        let (nodes, wk, wg) = rule();
        let hx = 0.5 * (x1 - x0);
        let hy = 0.5 * (y1 - y0);
        let mut kk = c(0.0, 0.0);
        let mut gg = c(0.0, 0.0);
        let mut gk = c(0.0, 0.0);
        let mut kg = c(0.0, 0.0);
        for (i, xi) in nodes.iter().enumerate() {
            let x = x0 + hx * (xi + 1.0);
            let mut row_k = c(0.0, 0.0);
            let mut row_g = c(0.0, 0.0);
            for (j, yj) in nodes.iter().enumerate() {
                let y = y0 + hy * (yj + 1.0);
                let v = self.value(f, piece, x, y);
                row_k += v * wk[j];
                row_g += v * wg[j];
            }
            kk += row_k * wk[i];
            gk += row_k * wg[i];
            kg += row_g * wk[i];
            gg += row_g * wg[i];
        }
        let s = hx * hy;
        let ex = ((kk - gk) * s).norm();
        let ey = ((kk - kg) * s).norm();
        let err = ((kk - gg) * s).norm().max(ex).max(ey);
        Cell { piece, x0, x1, y0, y1, value: kk * s, err, split_x: ex >= ey }
    }
}

// ---- drivers -------------------------------------------------------------

fn adaptive(f: &Integrand, plan: &Plan, cfg: &QuadConfig) -> Result<QuadratureResult> {
    let mut cells: Vec<Cell> = Vec::new();
    for (i, (_, nx, ny, _)) in plan.pieces.iter().enumerate() {
        let (a, b) = plan.domain(i);
        for p in 0..*nx {
            for q in 0..*ny {
                let x0 = a + (b - a) * p as f64 / *nx as f64;
                let x1 = a + (b - a) * (p + 1) as f64 / *nx as f64;
                let y0 = 2.0 * PI * q as f64 / *ny as f64;
                let y1 = 2.0 * PI * (q + 1) as f64 / *ny as f64;
                cells.push(plan.cell(f, i, x0, x1, y0, y1));
            }
        }
    }
    let mut live: Vec<bool> = alloc::vec![true; cells.len()];
    let mut heap: BinaryHeap<Ranked> = cells.iter().enumerate().map(|(i, c)| Ranked(c.err, i)).collect();
    let mut total = cells.iter().fold(c(0.0, 0.0), |s, c| s + c.value);
    let mut err: f64 = cells.iter().map(|c| c.err).sum();
    let mut count = cells.len();
    let mut refresh = 0usize;
    loop {
        let target = (cfg.tol * total.norm()).max(cfg.abs_tol);
        if err <= target {
            break;
        }
        if count >= cfg.max_cells {
            return Err(Error::BudgetExceeded(format!("{count} cells, error {err:.3e} above {target:.3e}")));
        }
        let Some(Ranked(_, i)) = heap.pop() else { break };
        let cell = cells[i];
        live[i] = false;
        let kids = if cell.split_x {
            let m = 0.5 * (cell.x0 + cell.x1);
            [
                plan.cell(f, cell.piece, cell.x0, m, cell.y0, cell.y1),
                plan.cell(f, cell.piece, m, cell.x1, cell.y0, cell.y1),
            ]
        } else {
            let m = 0.5 * (cell.y0 + cell.y1);
            [
                plan.cell(f, cell.piece, cell.x0, cell.x1, cell.y0, m),
                plan.cell(f, cell.piece, cell.x0, cell.x1, m, cell.y1),
            ]
        };
        total -= cell.value;
        err -= cell.err;
        for k in kids {
            total += k.value;
            err += k.err;
            heap.push(Ranked(k.err, cells.len()));
            cells.push(k);
            live.push(true);
        }
        count += 1;
        refresh += 1;
        if refresh == 256 {
            refresh = 0;
            total = live_sum(&cells, &live).0;
            err = live_sum(&cells, &live).1;
        }
    }
    let (value, err) = live_sum(&cells, &live);
    Ok(QuadratureResult { value, error_estimate: err, method: Method::Adaptive, samples: count, seed: cfg.seed })
}

fn live_sum(cells: &[Cell], live: &[bool]) -> (C64, f64) {
    cells
        .iter()
        .zip(live)
        .filter(|(_, l)| **l)
        .fold((c(0.0, 0.0), 0.0), |(v, e), (c, _)| (v + c.value, e + c.err))
}

/// Stratified Monte Carlo over the same pieces; the error is three standard errors.
fn monte_carlo(f: &Integrand, plan: &Plan, cfg: &QuadConfig) -> Result<QuadratureResult> {
    let mut rng = Rng::new(cfg.seed);
    let per_piece = cfg.mc_samples / plan.pieces.len();
    let g = libm::floor(libm::sqrt((per_piece / 2) as f64)).max(1.0) as usize;
    let mut value = c(0.0, 0.0);
    let mut var = 0.0;
    let mut samples = 0;
    for i in 0..plan.pieces.len() {
        let (a, b) = plan.domain(i);
        let hx = (b - a) / g as f64;
        let hy = 2.0 * PI / g as f64;
        let area = hx * hy;
        for p in 0..g {
            for q in 0..g {
                let mut s = [c(0.0, 0.0); 2];
                for v in &mut s {
                    let x = a + hx * (p as f64 + rng.unit());
                    let y = hy * (q as f64 + rng.unit());
                    *v = plan.value(f, i, x, y);
                }
                value += (s[0] + s[1]) * (0.5 * area);
                var += 0.25 * area * area * (s[0] - s[1]).norm_sqr();
                samples += 2;
            }
        }
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonIntegrable("Monte Carlo estimate is not finite".into()));
    }
    Ok(QuadratureResult {
        value,
        error_estimate: 3.0 * libm::sqrt(var),
        method: Method::MonteCarlo,
        samples,
        seed: cfg.seed,
    })
}

/// `∫ d²w f(w)`.
pub fn integrate2d(f: &Integrand, cfg: &QuadConfig) -> Result<QuadratureResult> {
    f.classify()?;
    let plan = Plan::new(f, cfg);
    match cfg.method {
        Method::Adaptive => adaptive(f, &plan, cfg),
        Method::MonteCarlo => monte_carlo(f, &plan, cfg),
        Method::Auto => match adaptive(f, &plan, cfg) {
            Err(Error::BudgetExceeded(_)) => monte_carlo(f, &plan, cfg),
            r => r,
        },
    }
}

// ---- diagrams ------------------------------------------------------------

/// Integrate `expr` over `vars` in order (outermost first), the rest fixed at `pts`.
pub fn integrate_vars(expr: &BoundExpr, pts: &[C64], vars: &[Var], cfg: &QuadConfig) -> Result<QuadratureResult> {
    let Some((&v, rest)) = vars.split_first() else {
        return Ok(QuadratureResult {
            value: expr.eval_checked(pts)?,
            error_estimate: 0.0,
            method: Method::Adaptive,
            samples: 0,
            seed: cfg.seed,
        });
    };
    if rest.is_empty() {
        return integrate2d(&Integrand::from_bound(expr, v, pts)?, cfg);
    }
    let inner_cfg = QuadConfig { tol: cfg.tol * 0.1, ..cfg.clone() };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |w: C64| {
        let mut p = pts.to_vec();
        p[v as usize] = w;
        match integrate_vars(expr, &p, rest, &inner_cfg) {
            Ok(r) => r.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                c(0.0, 0.0)
            }
        }
    };
    let info = nested_info(expr, v, rest, pts)?;
    let mut f = Integrand::new(inner, info.singular, info.decay);
    f.momentum = info.momentum;
    let r = integrate2d(&f, cfg);
    drop(f);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// Power counting for `z_v` once `rest` has been integrated out.
fn nested_info(expr: &BoundExpr, v: Var, rest: &[Var], pts: &[C64]) -> Result<SingularInfo> {
    let mut singular = Vec::new();
    let mut growth = f64::NEG_INFINITY;
    let mut momentum: Option<f64> = None;
    let exp_of = |p: &crate::specialfn::ZIndex| (p.alpha * 2.0).re - p.m as f64;
    for t in &expr.terms {
        let mut g = 0.0;
        for (b, p) in &t.factors {
            if !b.involves(v) {
                continue;
            }
            let e = exp_of(p);
            let other = match *b {
                Base::Diff(x, y) => Some(if x == v { y } else { x }),
                _ => None,
            };
            match other {
                Some(u) if rest.contains(&u) => {
                    let mut q = 0.0;
                    for (b2, p2) in &t.factors {
                        if b2.involves(u) && !b2.involves(v) {
                            let e2 = exp_of(p2);
                            q += e2;
                            let far = match *b2 {
                                Base::Diff(x, y) => Some(if x == u { y } else { x }),
                                _ => None,
                            };
                            let at = match far {
                                Some(z) if !rest.contains(&z) => pts[z as usize],
                                Some(_) => continue,
                                None => c(0.0, 0.0),
                            };
                            push_singular(&mut singular, at, (e + e2 + 2.0).min(0.0));
                        }
                    }
                    g += e + (q + 2.0).max(0.0);
                }
                Some(u) => {
                    push_singular(&mut singular, pts[u as usize], e.min(0.0));
                    g += e;
                }
                None => {
                    push_singular(&mut singular, c(0.0, 0.0), e.min(0.0));
                    g += e;
                }
            }
        }
        for (key, k, _) in &t.waves {
            if !key.inverted && (key.var == v || rest.contains(&key.var)) && k.norm() > 0.0 {
                momentum = Some(momentum.map_or(k.norm(), |m: f64| m.min(k.norm())));
            }
        }
        growth = growth.max(g);
    }
    if growth == f64::NEG_INFINITY {
        growth = 0.0;
    }
    Ok(SingularInfo { singular, decay: -growth, momentum })
}

/// Value of a diagram at the given external points: its regular coefficient times the
/// integral over internal vertices, eliminated in increasing id order.
pub fn eval_diagram(d: &Diagram, externals: &[(VId, C64)], b: &Binding, cfg: &QuadConfig) -> Result<QuadratureResult> {
    let internal: Vec<VId> = d.vertices.iter().filter(|(_, v)| v.kind == VKind::Internal).map(|(id, _)| *id).collect();
    if internal.len() > 3 {
        return Err(Error::PreconditionFailed(format!("{} internal vertices", internal.len())));
    }
    let mut pts = alloc::vec![c(0.0, 0.0); d.max_id() as usize + 1];
    for (v, z) in externals {
        pts[*v as usize] = *z;
    }
    for (id, v) in &d.vertices {
        if v.kind == VKind::External && !externals.iter().any(|e| e.0 == *id) {
            return Err(Error::UnboundVariable(format!("vertex {}", v.label)));
        }
    }
    let plain = !d.vertices.values().any(|v| v.kind.is_momentum());
    if internal.is_empty() && plain {
        let value = d.to_powexpr()?.evaluate(&pts, b)? * d.coeff.eval_regular(b)?;
        return Ok(QuadratureResult { value, error_estimate: 0.0, method: Method::Adaptive, samples: 0, seed: cfg.seed });
    }
    let expr = d.bind(b)?;
    integrate_vars(&expr, &pts, &internal, cfg)
}

/// Sampling region per variable for `inner_product`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `[−l, l]²`
    Box(f64),
    /// `r0 < |z| < r1`, sampled uniformly in `ln |z|`.
    LogAnnulus(f64, f64),
}

impl Region {
    /// Point and its weight (inverse density).
    fn sample(&self, rng: &mut Rng) -> (C64, f64) {
        match *self {
            Region::Box(l) => (c(rng.uniform(-l, l), rng.uniform(-l, l)), 4.0 * l * l),
            Region::LogAnnulus(r0, r1) => {
                let (l0, l1) = (libm::log(r0), libm::log(r1));
                let r = libm::exp(rng.uniform(l0, l1));
                let th = rng.uniform(0.0, 2.0 * PI);
                (c(r * libm::cos(th), r * libm::sin(th)), 2.0 * PI * r * r * (l1 - l0))
            }
        }
    }
}

/// Monte Carlo `∫ ∏ d²z_k conj(f) g` over external vertices `vars`, all sampled from `region`.
pub fn inner_product(
    f: &Diagram,
    g: &Diagram,
    vars: &[VId],
    region: Region,
    b: &Binding,
    cfg: &QuadConfig,
) -> Result<QuadratureResult> {
    for d in [f, g] {
        if d.vertices.values().any(|v| v.kind == VKind::Internal) {
            return Err(Error::PreconditionFailed("inner product needs fully external diagrams".into()));
        }
    }
    let fe = f.bind(b)?;
    let ge = g.bind(b)?;
    let n = (f.max_id().max(g.max_id())) as usize + 1;
    let mut rng = Rng::new(cfg.seed);
    let mut pts = alloc::vec![c(0.0, 0.0); n];
    let mut sum = c(0.0, 0.0);
    let mut sq = 0.0;
    for _ in 0..cfg.mc_samples {
        let mut wt = 1.0;
        for v in vars {
            let (z, w) = region.sample(&mut rng);
            pts[*v as usize] = z;
            wt *= w;
        }
        let val = fe.eval(&pts).conj() * ge.eval(&pts) * wt;
        sum += val;
        sq += val.norm_sqr();
    }
    let n = cfg.mc_samples as f64;
    let mean = sum / n;
    let var = (sq / n - mean.norm_sqr()).max(0.0);
    if !mean.re.is_finite() || !mean.im.is_finite() {
        return Err(Error::NonIntegrable("inner product estimate is not finite".into()));
    }
    Ok(QuadratureResult {
        value: mean,
        error_estimate: 3.0 * libm::sqrt(var / n),
        method: Method::MonteCarlo,
        samples: cfg.mc_samples,
        seed: cfg.seed,
    })
}
