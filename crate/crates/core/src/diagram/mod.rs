//! Two-dimensional Feynman diagrams: vertices, directed power-law edges, plane
//! waves and an exact coefficient.
//!
//! An edge `(tail, head, α)` stands for `[z_head − z_tail]^{−α}`. The anchor is the
//! fixed point `0`. Operators carry ordered `outputs` (their arguments) and
//! `inputs` (the variables the function acted on is evaluated at).

mod build;
mod coeff;
mod rules;
mod scripts;
mod text;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use build::*;
pub use coeff::{Atom, CoeffProduct, Delta};
pub use rules::*;
pub use scripts::*;
pub use text::{from_text, to_text, FORMAT_VERSION};

use crate::powexpr::{pow_pair, Base, BoundExpr, BoundTerm, PowExpr, Shape, WaveKey};
use crate::symbolic::{Affine, Binding, CRat, Poly, Sym, SymIndex};
use crate::{c, Error, Result, C64};

pub type VId = u8;

/// Id of the anchor point `0`.
pub const ANCHOR: VId = 0;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VKind {
    Anchor,
    /// Free coordinate.
    External,
    /// Integrated coordinate.
    Internal,
    /// Integrated momentum.
    MomInternal,
    /// Free momentum bound to the symbol `p{k}`.
    MomExternal(u8),
}

impl VKind {
    pub fn is_momentum(&self) -> bool {
        matches!(self, VKind::MomInternal | VKind::MomExternal(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vertex {
    pub kind: VKind,
    pub label: String,
}

/// `[z_head − z_tail]^{−index}`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub tail: VId,
    pub head: VId,
    pub index: SymIndex,
}

impl Edge {
    pub fn new(tail: VId, head: VId, index: SymIndex) -> Self {
        Edge { tail, head, index }
    }

    pub fn touches(&self, v: VId) -> bool {
        self.tail == v || self.head == v
    }

    pub fn other(&self, v: VId) -> VId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// `e^{i(k z + k̄ z̄)}` at a coordinate vertex with `k = Σ c_v p_v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wave {
    pub at: VId,
    pub momentum: BTreeMap<VId, i32>,
    pub inverted: bool,
}

impl Wave {
    pub fn new(at: VId, momentum: &[(VId, i32)]) -> Self {
        let mut m = BTreeMap::new();
        for &(v, k) in momentum {
            *m.entry(v).or_insert(0) += k;
        }
        m.retain(|_, k| *k != 0);
        Wave { at, momentum: m, inverted: false }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub vertices: BTreeMap<VId, Vertex>,
    pub edges: Vec<Edge>,
    pub waves: Vec<Wave>,
    pub coeff: CoeffProduct,
    pub outputs: Vec<VId>,
    pub inputs: Vec<VId>,
}

impl Default for Diagram {
    fn default() -> Self {
        Self::new()
    }
}

impl Diagram {
    pub fn new() -> Self {
        let mut vertices = BTreeMap::new();
        vertices.insert(ANCHOR, Vertex { kind: VKind::Anchor, label: "0".into() });
        Diagram {
            vertices,
            edges: Vec::new(),
            waves: Vec::new(),
            coeff: CoeffProduct::one(),
            outputs: Vec::new(),
            inputs: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, kind: VKind, label: &str) -> VId {
        let id = self.vertices.keys().next_back().map_or(0, |k| k + 1);
        self.vertices.insert(id, Vertex { kind, label: label.into() });
        id
    }

    /// Adds `[z_head − z_tail]^{−index}`.
    pub fn edge(&mut self, tail: VId, head: VId, index: SymIndex) -> &mut Self {
        self.edges.push(Edge::new(tail, head, index));
        self
    }

    pub fn wave(&mut self, w: Wave) -> &mut Self {
        self.waves.push(w);
        self
    }

    pub fn kind(&self, v: VId) -> Result<&VKind> {
        self.vertices
            .get(&v)
            .map(|x| &x.kind)
            .ok_or_else(|| Error::PreconditionFailed(format!("no vertex {v}")))
    }

    pub fn label(&self, v: VId) -> &str {
        self.vertices.get(&v).map_or("?", |x| x.label.as_str())
    }

    pub fn by_label(&self, l: &str) -> Result<VId> {
        self.vertices
            .iter()
            .find(|(_, x)| x.label == l)
            .map(|(k, _)| *k)
            .ok_or_else(|| Error::PreconditionFailed(format!("no vertex labelled `{l}`")))
    }

    pub fn internal(&self) -> Vec<VId> {
        self.ids_of(|k| matches!(k, VKind::Internal))
    }

    pub fn external(&self) -> Vec<VId> {
        self.ids_of(|k| matches!(k, VKind::External))
    }

    pub fn ids_of(&self, f: impl Fn(&VKind) -> bool) -> Vec<VId> {
        self.vertices.iter().filter(|(_, x)| f(&x.kind)).map(|(k, _)| *k).collect()
    }

    pub fn edges_at(&self, v: VId) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    pub fn waves_at(&self, v: VId) -> Vec<usize> {
        (0..self.waves.len()).filter(|&i| self.waves[i].at == v).collect()
    }

    pub fn mul_coeff(&mut self, c: &CoeffProduct) {
        self.coeff = self.coeff.mul(c);
    }

    /// Substitute a symbol in every index and coefficient atom.
    pub fn subst(&self, s: Sym, v: &Affine) -> Diagram {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.index = e.index.subst(s, v);
        }
        out.coeff = out.coeff.subst(s, v);
        out
    }

    /// Rename a holomorphic symbol and its partner.
    pub fn rename(&self, from: Sym, to: Sym) -> Diagram {
        let mut out = self.subst(from, &Affine::sym(to)).subst(from.bar(), &Affine::sym(to.bar()));
        out.coeff = self.coeff.rename(from, to);
        out
    }

    /// Product of two diagrams on disjoint vertex sets, anchors shared.
    /// Returns the id map applied to `o`.
    pub fn disjoint_union(&self, o: &Diagram) -> (Diagram, BTreeMap<VId, VId>) {
        let mut out = self.clone();
        let mut map = BTreeMap::new();
        map.insert(ANCHOR, ANCHOR);
        for (id, v) in &o.vertices {
            if *id == ANCHOR {
                continue;
            }
            let mut label = v.label.clone();
            while out.vertices.values().any(|x| x.label == label) {
                label.push('\'');
            }
            let n = out.add_vertex(v.kind.clone(), &label);
            map.insert(*id, n);
        }
        let f = |v: VId| map[&v];
        for e in &o.edges {
            out.edges.push(Edge::new(f(e.tail), f(e.head), e.index.clone()));
        }
        for w in &o.waves {
            out.waves.push(Wave {
                at: f(w.at),
                momentum: w.momentum.iter().map(|(k, c)| (f(*k), *c)).collect(),
                inverted: w.inverted,
            });
        }
        out.coeff = out.coeff.mul(&o.coeff.relabel(f));
        (out, map)
    }

    /// Identify vertex `from` with `to`, dropping `from`.
    pub fn merge_vertex(&mut self, from: VId, to: VId) {
        for e in &mut self.edges {
            if e.tail == from {
                e.tail = to;
            }
            if e.head == from {
                e.head = to;
            }
        }
        for w in &mut self.waves {
            if w.at == from {
                w.at = to;
            }
            if let Some(k) = w.momentum.remove(&from) {
                *w.momentum.entry(to).or_insert(0) += k;
                w.momentum.retain(|_, c| *c != 0);
            }
        }
        self.coeff = self.coeff.relabel(|v| if v == from { to } else { v });
        for x in self.outputs.iter_mut().chain(self.inputs.iter_mut()) {
            if *x == from {
                *x = to;
            }
        }
        self.vertices.remove(&from);
    }

    /// Operator product `self ∘ o`: the outputs of `o` are fed into the inputs of `self`.
    pub fn compose(&self, o: &Diagram) -> Result<Diagram> {
        if self.inputs.len() != o.outputs.len() {
            return Err(Error::Arity(format!(
                "composition needs {} outputs, got {}",
                self.inputs.len(),
                o.outputs.len()
            )));
        }
        let (mut out, map) = self.disjoint_union(o);
        let inputs: Vec<VId> = o.inputs.iter().map(|v| map[v]).collect();
        for (k, &slot) in self.inputs.iter().enumerate() {
            let from = map[&o.outputs[k]];
            out.merge_vertex(from, slot);
        }
        out.inputs = inputs;
        Ok(out)
    }

    /// Hermitian adjoint: conjugated kernel with inputs and outputs exchanged.
    pub fn adjoint(&self) -> Result<Diagram> {
        let mut out = self.clone();
        for &v in &self.inputs {
            if self.outputs.contains(&v) {
                continue;
            }
            if !matches!(self.kind(v)?, VKind::Internal) {
                return Err(Error::PreconditionFailed(format!("input {} is not integrated", self.label(v))));
            }
            out.vertices.get_mut(&v).unwrap().kind = VKind::External;
        }
        for &v in &self.outputs {
            if !self.inputs.contains(&v) {
                out.vertices.get_mut(&v).unwrap().kind = VKind::Internal;
            }
        }
        for e in &mut out.edges {
            e.index = e.index.adjoint();
        }
        for w in &mut out.waves {
            for c in w.momentum.values_mut() {
                *c = -*c;
            }
        }
        out.coeff = self.coeff.conj();
        core::mem::swap(&mut out.outputs, &mut out.inputs);
        Ok(out)
    }

    /// Kernel of an operator: integrated inputs become free, identity legs become deltas.
    pub fn kernel_form(&self) -> Result<Diagram> {
        let mut out = self.clone();
        for &v in &self.inputs {
            match self.kind(v)? {
                VKind::Internal => out.vertices.get_mut(&v).unwrap().kind = VKind::External,
                _ => {
                    let lab = format!("{}_in", self.label(v));
                    let n = out.add_vertex(VKind::External, &lab);
                    out.coeff.push(Atom::Delta(Delta::Point(v, n)));
                }
            }
        }
        out.inputs.clear();
        Ok(out)
    }

    /// `z → 1/z` at every coordinate vertex, with Jacobians for integrated ones and
    /// `[z]^{−2s}` for free ones.
    pub fn invert(&self) -> Result<Diagram> {
        let mut out = self.clone();
        out.edges.clear();
        for e in &self.edges {
            if self.kind(e.tail)?.is_momentum() || self.kind(e.head)?.is_momentum() {
                out.edges.push(e.clone());
                continue;
            }
            let a = e.index.clone();
            match (e.tail, e.head) {
                (ANCHOR, h) => {
                    out.edges.push(Edge::new(ANCHOR, h, -a));
                }
                (t, ANCHOR) => {
                    out.edges.push(Edge::new(t, ANCHOR, -a));
                }
                (t, h) => {
                    out.edges.push(Edge::new(h, t, a.clone()));
                    out.edges.push(Edge::new(ANCHOR, h, -a.clone()));
                    out.edges.push(Edge::new(ANCHOR, t, -a));
                }
            }
        }
        for (id, v) in &self.vertices {
            match v.kind {
                VKind::Internal => {
                    out.edges.push(Edge::new(ANCHOR, *id, SymIndex::int(2)));
                }
                VKind::External => {
                    out.edges.push(Edge::new(ANCHOR, *id, SymIndex::from_holo(Affine::term(CRat::int(2), Sym::S))));
                }
                _ => {}
            }
        }
        for w in &mut out.waves {
            if matches!(self.kind(w.at)?, VKind::Internal) {
                return Err(Error::OutOfClass("inverting a wave at an integrated vertex".into()));
            }
            w.inverted = !w.inverted;
        }
        Ok(out)
    }

    fn momentum_affine(&self, m: &BTreeMap<VId, i32>) -> Result<Affine> {
        let mut k = Affine::zero();
        for (v, c) in m {
            match self.kind(*v)? {
                VKind::MomExternal(j) => k.add_term(Sym::P(*j), CRat::int(*c as i128)),
                _ => return Err(Error::OutOfClass(format!("wave momentum uses integrated {}", self.label(*v)))),
            }
        }
        Ok(k)
    }

    fn base_of(e: &Edge) -> Result<Base> {
        Ok(match (e.tail, e.head) {
            (ANCHOR, ANCHOR) => return Err(Error::OutOfClass("edge from the anchor to itself".into())),
            (ANCHOR, h) => Base::Single(h),
            (t, ANCHOR) => Base::Neg(t),
            (t, h) => Base::Diff(h, t),
        })
    }

    /// Symbolic kernel of a diagram with no integrated vertices, coefficient omitted.
    /// Coordinate vertex `v` becomes variable `v`.
    pub fn to_powexpr(&self) -> Result<PowExpr> {
        if self.vertices.values().any(|v| matches!(v.kind, VKind::Internal | VKind::MomInternal)) {
            return Err(Error::PreconditionFailed("diagram has integrated vertices".into()));
        }
        let mut shape = Shape::default();
        for e in &self.edges {
            if self.kind(e.tail)?.is_momentum() || self.kind(e.head)?.is_momentum() {
                return Err(Error::OutOfClass("momentum edge in a coordinate kernel".into()));
            }
            shape.mul_power(Self::base_of(e)?, -e.index.clone());
        }
        for w in &self.waves {
            let k = self.momentum_affine(&w.momentum)?;
            shape.mul_wave(WaveKey { var: w.at, inverted: w.inverted }, k);
        }
        let mut out = PowExpr::zero();
        out.add_term(shape, Poly::one());
        Ok(out)
    }

    /// Numeric integrand over all coordinate vertices (free and integrated), including
    /// the coefficient without its deltas and every momentum edge.
    pub fn bind(&self, b: &Binding) -> Result<BoundExpr> {
        if self.vertices.values().any(|v| matches!(v.kind, VKind::MomInternal)) {
            return Err(Error::PreconditionFailed("diagram has integrated momenta".into()));
        }
        let mom = |v: VId| -> Result<(C64, C64)> {
            match self.kind(v)? {
                VKind::Anchor => Ok((c(0.0, 0.0), c(0.0, 0.0))),
                VKind::MomExternal(j) => {
                    let p = b.get(Sym::P(*j))?;
                    let pb = if b.contains(Sym::PBar(*j)) { b.get(Sym::PBar(*j))? } else { p.conj() };
                    Ok((p, pb))
                }
                _ => Err(Error::OutOfClass("mixed momentum edge".into())),
            }
        };
        let mut t = BoundTerm { coeff: self.coeff.eval_regular(b)?, factors: Vec::new(), waves: Vec::new() };
        for e in &self.edges {
            let idx = (-e.index.clone()).eval(b)?;
            let mt = self.kind(e.tail)?.is_momentum() || self.kind(e.head)?.is_momentum();
            if mt {
                let (ph, _) = mom(e.head)?;
                let (pt, _) = mom(e.tail)?;
                t.coeff *= pow_pair(ph - pt, idx);
            } else {
                t.mul_power(Self::base_of(e)?, idx);
            }
        }
        for w in &self.waves {
            let mut k = c(0.0, 0.0);
            let mut kb = c(0.0, 0.0);
            for (v, cf) in &w.momentum {
                let (p, pb) = mom(*v)?;
                k += p * (*cf as f64);
                kb += pb * (*cf as f64);
            }
            t.waves.push((WaveKey { var: w.at, inverted: w.inverted }, k, kb));
        }
        Ok(BoundExpr { terms: alloc::vec![t] })
    }

    /// Sum plane waves sharing a vertex; drop those with zero momentum.
    pub fn combine_waves(&mut self) {
        let mut acc: BTreeMap<(VId, bool), BTreeMap<VId, i32>> = BTreeMap::new();
        for w in &self.waves {
            let m = acc.entry((w.at, w.inverted)).or_default();
            for (v, c) in &w.momentum {
                *m.entry(*v).or_insert(0) += c;
            }
        }
        self.waves = acc
            .into_iter()
            .filter_map(|((at, inverted), mut momentum)| {
                momentum.retain(|_, c| *c != 0);
                (!momentum.is_empty()).then_some(Wave { at, momentum, inverted })
            })
            .collect();
    }

    /// Largest vertex id, for sizing point arrays.
    pub fn max_id(&self) -> VId {
        self.vertices.keys().next_back().copied().unwrap_or(0)
    }
}
