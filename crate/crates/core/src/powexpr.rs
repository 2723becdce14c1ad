//! Closed-form kernel expressions: sums of coefficient × single-valued powers ×
//! plane waves, with exact differentiation and pointwise evaluation.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::rng::Rng;
use crate::specialfn::{a_of, i_pow, ZIndex};
use crate::symbolic::{Affine, Binding, CRat, Poly, Sym, SymIndex};
use crate::weyl::{Sector, WeylElement};
use crate::{c, Error, Result, C64};

/// Coordinate variable id.
pub type Var = u8;

/// Base of a power factor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Base {
    /// `[z_v]`
    Single(Var),
    /// `[−z_v]`
    Neg(Var),
    /// `[z_i − z_j]`
    Diff(Var, Var),
}

impl Base {
    pub fn vars(&self) -> (Var, Option<Var>) {
        match *self {
            Base::Single(v) | Base::Neg(v) => (v, None),
            Base::Diff(a, b) => (a, Some(b)),
        }
    }

    pub fn involves(&self, v: Var) -> bool {
        let (a, b) = self.vars();
        a == v || b == Some(v)
    }

    /// `∂(base)/∂z_v`: `+1`, `−1` or `0`.
    fn dsign(&self, v: Var) -> i128 {
        match *self {
            Base::Single(a) if a == v => 1,
            Base::Neg(a) if a == v => -1,
            Base::Diff(a, _) if a == v => 1,
            Base::Diff(_, b) if b == v => -1,
            _ => 0,
        }
    }

    pub fn value(&self, pts: &[C64]) -> C64 {
        self.value_from(pts, C64::new(0.0, 0.0))
    }

    /// Value when `pts` are measured from `origin`.
    pub fn value_from(&self, pts: &[C64], origin: C64) -> C64 {
        match *self {
            Base::Single(v) => pts[v as usize] - origin,
            Base::Neg(v) => origin - pts[v as usize],
            Base::Diff(a, b) => pts[a as usize] - pts[b as usize],
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Single(v) => write!(f, "[z{v}]"),
            Base::Neg(v) => write!(f, "[-z{v}]"),
            Base::Diff(a, b) => write!(f, "[z{a}-z{b}]"),
        }
    }
}

/// Key of a plane wave: variable and whether the argument is inverted (`1/z`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WaveKey {
    pub var: Var,
    pub inverted: bool,
}

/// Non-coefficient part of a term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Shape {
    /// `[base]^{power}`
    pub factors: BTreeMap<Base, SymIndex>,
    /// `e^{i(k w + k̄ w̄)}` with `w = z` or `1/z`; stores holomorphic `k`.
    pub waves: BTreeMap<WaveKey, Affine>,
}

impl Shape {
    pub fn mul_power(&mut self, b: Base, p: SymIndex) {
        match self.factors.entry(b) {
            Entry::Vacant(v) => {
                if !p.is_zero() {
                    v.insert(p);
                }
            }
            Entry::Occupied(mut o) => {
                let n = o.get().clone() + p;
                if n.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    pub fn mul_wave(&mut self, k: WaveKey, m: Affine) {
        match self.waves.entry(k) {
            Entry::Vacant(v) => {
                if !m.is_zero() {
                    v.insert(m);
                }
            }
            Entry::Occupied(mut o) => {
                let n = o.get().clone() + m;
                if n.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    fn mul(&self, o: &Shape) -> Shape {
        let mut out = self.clone();
        for (b, p) in &o.factors {
            out.mul_power(*b, p.clone());
        }
        for (k, m) in &o.waves {
            out.mul_wave(*k, m.clone());
        }
        out
    }
}

/// Sum of `coeff × shape` terms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PowExpr {
    pub terms: BTreeMap<Shape, Poly>,
}

impl PowExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(p: Poly) -> Self {
        let mut e = Self::zero();
        e.add_term(Shape::default(), p);
        e
    }

    pub fn one() -> Self {
        Self::scalar(Poly::one())
    }

    /// `[base]^{p}`.
    pub fn power(b: Base, p: SymIndex) -> Self {
        let mut s = Shape::default();
        s.mul_power(b, p);
        let mut e = Self::zero();
        e.add_term(s, Poly::one());
        e
    }

    /// `e^{i(k z_v + k̄ z̄_v)}` with `k̄` the barred momentum.
    pub fn wave(v: Var, k: Affine) -> Self {
        let mut s = Shape::default();
        s.mul_wave(WaveKey { var: v, inverted: false }, k);
        let mut e = Self::zero();
        e.add_term(s, Poly::one());
        e
    }

    pub fn add_term(&mut self, s: Shape, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                let n = core::mem::take(o.get_mut()) + p;
                if n.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = n;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, p: &Poly) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * p);
        }
        out
    }

    pub fn mul(&self, o: &PowExpr) -> PowExpr {
        let mut out = PowExpr::zero();
        for (s1, c1) in &self.terms {
            for (s2, c2) in &o.terms {
                out.add_term(s1.mul(s2), c1 * c2);
            }
        }
        out
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = Vec::new();
        for s in self.terms.keys() {
            for b in s.factors.keys() {
                let (a, o) = b.vars();
                v.push(a);
                v.extend(o);
            }
            v.extend(s.waves.keys().map(|k| k.var));
        }
        v.sort();
        v.dedup();
        v
    }

    /// Exact `∂/∂z_v` or `∂/∂z̄_v`.
    pub fn diff(&self, v: Var, sector: Sector) -> PowExpr {
        let mut out = PowExpr::zero();
        let unit = CRat::one();
        for (s, cf) in &self.terms {
            for (b, p) in &s.factors {
                let sg = b.dsign(v);
                if sg == 0 {
                    continue;
                }
                let (exp, lower) = match sector {
                    Sector::Holo => (&p.holo, SymIndex::new(Affine::constant(-unit), Affine::zero())),
                    Sector::Anti => (&p.anti, SymIndex::new(Affine::zero(), Affine::constant(-unit))),
                };
                let mut ns = s.clone();
                ns.mul_power(*b, lower);
                let k = Poly::from(&exp.scale(CRat::int(sg)));
                out.add_term(ns, cf * &k);
            }
            for (wk, m) in &s.waves {
                if wk.var != v {
                    continue;
                }
                let mom = match sector {
                    Sector::Holo => m.clone(),
                    Sector::Anti => m.bar(),
                };
                if wk.inverted {
                    // ∂ e^{ik/z} = −ik z^{−2} e^{ik/z}
                    let mut ns = s.clone();
                    let two = Affine::int(-2);
                    let p = match sector {
                        Sector::Holo => SymIndex::new(two, Affine::zero()),
                        Sector::Anti => SymIndex::new(Affine::zero(), two),
                    };
                    ns.mul_power(Base::Single(v), p);
                    out.add_term(ns, cf * &Poly::from(&mom.scale(-CRat::i())));
                } else {
                    out.add_term(s.clone(), cf * &Poly::from(&mom.scale(CRat::i())));
                }
            }
        }
        out
    }

    /// Apply a Weyl-algebra operator whose site `k` acts on variable `map(k)`.
    pub fn apply_weyl(&self, op: &WeylElement, map: impl Fn(u8) -> Var) -> PowExpr {
        let mut out = PowExpr::zero();
        for (m, cf) in &op.terms {
            let mut t = self.clone();
            for (site, _, b) in m.sites() {
                for _ in 0..b {
                    t = t.diff(map(site.k), site.sector);
                }
            }
            for (site, a, _) in m.sites() {
                if a == 0 {
                    continue;
                }
                let ai = Affine::int(a as i128);
                let p = match site.sector {
                    Sector::Holo => SymIndex::new(ai, Affine::zero()),
                    Sector::Anti => SymIndex::new(Affine::zero(), ai),
                };
                t = t.mul(&PowExpr::power(Base::Single(map(site.k)), p));
            }
            out = out + t.scale(cf);
        }
        out
    }

    /// Substitute a formal scalar everywhere (indices, momenta, coefficients).
    pub fn subst(&self, s: Sym, v: &Affine) -> PowExpr {
        let pv = Poly::from(v);
        let mut out = PowExpr::zero();
        for (sh, cf) in &self.terms {
            let mut ns = Shape::default();
            for (b, p) in &sh.factors {
                ns.mul_power(*b, p.subst(s, v));
            }
            for (k, m) in &sh.waves {
                ns.mul_wave(*k, m.subst(s, v));
            }
            out.add_term(ns, cf.subst(s, &pv));
        }
        out
    }

    /// `J φ = ∏_k [z_k]^{(−2s,−2s̄)} φ(1/z)` over the listed variables.
    pub fn inversion_j(&self, vars: &[Var]) -> Result<PowExpr> {
        let inv = |v: Var| vars.contains(&v);
        let mut out = PowExpr::zero();
        for (sh, cf) in &self.terms {
            let mut ns = Shape::default();
            for (b, p) in &sh.factors {
                match *b {
                    Base::Single(v) | Base::Neg(v) if inv(v) => ns.mul_power(*b, -p.clone()),
                    Base::Diff(i, j) if inv(i) && inv(j) => {
                        ns.mul_power(Base::Diff(j, i), p.clone());
                        ns.mul_power(Base::Single(i), -p.clone());
                        ns.mul_power(Base::Single(j), -p.clone());
                    }
                    Base::Diff(i, j) if inv(i) || inv(j) => {
                        return Err(Error::OutOfClass(format!("{b} mixes inverted and fixed variables")));
                    }
                    _ => ns.mul_power(*b, p.clone()),
                }
            }
            for (k, m) in &sh.waves {
                let nk = if inv(k.var) { WaveKey { var: k.var, inverted: !k.inverted } } else { *k };
                ns.mul_wave(nk, m.clone());
            }
            for v in vars {
                ns.mul_power(Base::Single(*v), SymIndex::from_holo(Affine::term(CRat::int(-2), Sym::S)));
            }
            out.add_term(ns, cf.clone());
        }
        Ok(out)
    }

    /// Numeric instantiation of all coefficients, indices and momenta.
    pub fn bind(&self, b: &Binding) -> Result<BoundExpr> {
        let mut out = BoundExpr::default();
        for (sh, cf) in &self.terms {
            let mut t = BoundTerm { coeff: cf.eval(b)?, factors: Vec::new(), waves: Vec::new() };
            for (base, p) in &sh.factors {
                t.mul_power(*base, p.eval(b)?);
            }
            for (k, m) in &sh.waves {
                t.waves.push((*k, m.eval(b)?, m.bar().eval(b)?));
            }
            out.terms.push(t);
        }
        Ok(out)
    }

    pub fn evaluate(&self, pts: &[C64], b: &Binding) -> Result<C64> {
        self.bind(b)?.eval_checked(pts)
    }
}

impl Add for PowExpr {
    type Output = PowExpr;
    fn add(mut self, o: PowExpr) -> PowExpr {
        for (s, c) in o.terms {
            self.add_term(s, c);
        }
        self
    }
}

impl Sub for PowExpr {
    type Output = PowExpr;
    fn sub(self, o: PowExpr) -> PowExpr {
        self + (-o)
    }
}

impl Neg for PowExpr {
    type Output = PowExpr;
    fn neg(self) -> PowExpr {
        self.scale(&Poly::int(-1))
    }
}

impl Mul for &PowExpr {
    type Output = PowExpr;
    fn mul(self, o: &PowExpr) -> PowExpr {
        PowExpr::mul(self, o)
    }
}

impl fmt::Display for PowExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (s, cf) in &self.terms {
            if !first {
                f.write_str("\n + ")?;
            }
            first = false;
            write!(f, "({cf})")?;
            for (b, p) in &s.factors {
                write!(f, " {b}^({p})")?;
            }
            for (k, m) in &s.waves {
                let arg = if k.inverted { format!("1/z{}", k.var) } else { format!("z{}", k.var) };
                write!(f, " exp(i[({m})*{arg}])")?;
            }
        }
        Ok(())
    }
}

/// `[w]^{(α, ᾱ)} = exp((α+ᾱ) ln|w|) · exp(i m arg w)`.
pub fn pow_pair(w: C64, idx: ZIndex) -> C64 {
    let r = w.norm();
    let th = libm::atan2(w.im, w.re);
    let e = (idx.alpha * 2.0 - idx.m as f64) * libm::log(r) + c(0.0, idx.m as f64 * th);
    e.exp()
}

/// Term with numeric data.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTerm {
    pub coeff: C64,
    pub factors: Vec<(Base, ZIndex)>,
    /// `(key, k, k̄)`
    pub waves: Vec<(WaveKey, C64, C64)>,
}

impl BoundTerm {
    pub fn mul_power(&mut self, b: Base, p: ZIndex) {
        if let Some(f) = self.factors.iter_mut().find(|f| f.0 == b) {
            f.1 = f.1.add(&p);
        } else {
            self.factors.push((b, p));
        }
    }

    fn eval(&self, pts: &[C64], origin: C64, guard: f64) -> Result<C64> {
        let mut acc = self.coeff;
        for (b, p) in &self.factors {
            if p.alpha == c(0.0, 0.0) && p.m == 0 {
                continue;
            }
            let w = b.value_from(pts, origin);
            if w.norm() < guard {
                return Err(Error::SingularPoint(format!("{b} vanishes")));
            }
            acc *= pow_pair(w, *p);
        }
        for (k, m, mb) in &self.waves {
            let mut z = pts[k.var as usize] - origin;
            if k.inverted {
                if z.norm() < guard {
                    return Err(Error::SingularPoint(format!("inverted wave at z{}", k.var)));
                }
                z = 1.0 / z;
            }
            acc *= (c(0.0, 1.0) * (m * z + mb * z.conj())).exp();
        }
        Ok(acc)
    }
}

/// Numeric expression: coefficients and exponents instantiated.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundExpr {
    pub terms: Vec<BoundTerm>,
}

/// Singularity guard of `evaluate`.
pub const SINGULAR_GUARD: f64 = 1e-9;

impl BoundExpr {
    pub fn scalar(v: C64) -> Self {
        BoundExpr { terms: alloc::vec![BoundTerm { coeff: v, factors: Vec::new(), waves: Vec::new() }] }
    }

    pub fn power(b: Base, p: ZIndex) -> Self {
        let mut e = Self::scalar(c(1.0, 0.0));
        e.terms[0].factors.push((b, p));
        e
    }

    /// Plane wave `e^{i(p z + p̄ z̄)}` with `p̄ = conj(p)`.
    pub fn wave(v: Var, p: C64) -> Self {
        let mut e = Self::scalar(c(1.0, 0.0));
        e.terms[0].waves.push((WaveKey { var: v, inverted: false }, p, p.conj()));
        e
    }

    pub fn eval_checked(&self, pts: &[C64]) -> Result<C64> {
        self.terms.iter().try_fold(c(0.0, 0.0), |acc, t| Ok(acc + t.eval(pts, c(0.0, 0.0), SINGULAR_GUARD)?))
    }

    /// Evaluation without the singularity guard (quadrature nodes never hit the locus exactly).
    pub fn eval(&self, pts: &[C64]) -> C64 {
        self.eval_from(pts, c(0.0, 0.0))
    }

    /// `eval` with every coordinate given relative to `origin`, so that differences
    /// near a coincidence keep their digits.
    pub fn eval_from(&self, pts: &[C64], origin: C64) -> C64 {
        self.terms.iter().fold(c(0.0, 0.0), |acc, t| acc + t.eval(pts, origin, 0.0).unwrap_or(c(0.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= k;
        }
        out
    }

    pub fn add(&self, o: &BoundExpr) -> Self {
        let mut out = self.clone();
        out.terms.extend(o.terms.iter().cloned());
        out
    }

    pub fn mul_power(&self, b: Base, p: ZIndex) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.mul_power(b, p);
        }
        out
    }

    /// `[i∂_v]^γ` on terms whose dependence on `z_v` is a single power `[z_v]^b`
    /// or a plane wave `e^{i(p z_v + p̄ z̄_v)}`.
    pub fn frac_deriv(&self, v: Var, gamma: ZIndex) -> Result<BoundExpr> {
        let mut out = self.clone();
        for t in &mut out.terms {
            let powers: Vec<usize> = (0..t.factors.len()).filter(|&i| t.factors[i].0.involves(v)).collect();
            let waves: Vec<usize> = (0..t.waves.len()).filter(|&i| t.waves[i].0.var == v).collect();
            match (powers.as_slice(), waves.as_slice()) {
                ([], []) => {
                    if !(gamma.alpha == c(0.0, 0.0) && gamma.m == 0) {
                        // [p]^γ δ(p): only γ = 0 keeps constants
                        t.coeff = c(0.0, 0.0);
                    }
                }
                ([i], []) if t.factors[*i].0 == Base::Single(v) => {
                    let b = t.factors[*i].1;
                    t.coeff *= frac_coeff(gamma, b)?;
                    t.factors[*i].1 = b.sub(&gamma);
                }
                ([], [j]) if !t.waves[*j].0.inverted => {
                    let (_, p, _) = t.waves[*j];
                    t.coeff *= pow_pair(p, gamma);
                }
                _ => return Err(Error::OutOfClass(format!("[i∂]^γ on a non-monomial dependence on z{v}"))),
            }
        }
        Ok(out)
    }
}

/// `[i∂]^γ [z]^b = C(γ, b) [z]^{b−γ}` with
/// `C = (−1)^{m_b−m_γ} i^{m_γ} a(−b) a(1−γ+b)`.
pub fn frac_coeff(gamma: ZIndex, b: ZIndex) -> Result<C64> {
    if gamma.alpha == c(0.0, 0.0) && gamma.m == 0 {
        return Ok(c(1.0, 0.0));
    }
    let sign = if (b.m - gamma.m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let one_plus = ZIndex::new(1.0 - gamma.alpha + b.alpha, b.m - gamma.m);
    Ok(i_pow(gamma.m) * sign * a_of(b.neg())? * a_of(one_plus)?)
}

/// Random admissible points: `|z| ∈ [r0, r1]`, pairwise distance `≥ min_dist`.
pub fn sample_points(rng: &mut Rng, nvars: usize, r0: f64, r1: f64, min_dist: f64) -> Vec<C64> {
    let mut pts: Vec<C64> = Vec::with_capacity(nvars);
    while pts.len() < nvars {
        let z = rng.annulus(r0, r1);
        if pts.iter().all(|w| (*w - z).norm() >= min_dist) {
            pts.push(z);
        }
    }
    pts
}

/// Sampling configuration for pointwise identity checks.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    pub r0: f64,
    pub r1: f64,
    pub min_dist: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { samples: 100, seed: 42, r0: 0.2, r1: 5.0, min_dist: 0.1 }
    }
}

/// `max |lhs − rhs| / (|lhs| + |rhs| + 1e−300)` over random admissible points.
pub fn kernel_identity_residual(lhs: &PowExpr, rhs: &PowExpr, b: &Binding, cfg: &SampleConfig) -> Result<f64> {
    let l = lhs.bind(b)?;
    let r = rhs.bind(b)?;
    let mut vars = lhs.vars();
    vars.extend(rhs.vars());
    let nv = vars.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut rng = Rng::new(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let mut tries = 0;
        loop {
            let pts = sample_points(&mut rng, nv, cfg.r0, cfg.r1, cfg.min_dist);
            match (l.eval_checked(&pts), r.eval_checked(&pts)) {
                (Ok(x), Ok(y)) => {
                    worst = worst.max((x - y).norm() / (x.norm() + y.norm() + 1e-300));
                    break;
                }
                (Err(e), _) | (_, Err(e)) => {
                    tries += 1;
                    if tries >= 10 {
                        return Err(e);
                    }
                }
            }
        }
    }
    Ok(worst)
}
