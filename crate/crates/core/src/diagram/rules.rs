//! Integration rules acting on a single vertex.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Atom, CoeffProduct, Delta, Diagram, Edge, VId, VKind, Wave, ANCHOR};
use crate::symbolic::{Affine, CRat, Sym, SymIndex};
use crate::{Error, Result};

fn pre(msg: String) -> Error {
    Error::PreconditionFailed(msg)
}

fn is_zero_pair(i: &SymIndex) -> bool {
    i.holo.is_zero() && i.anti.is_zero()
}

/// Reorient edge `i` to run `tail → head`, paying `(−1)^{α−ᾱ}`.
pub fn orient(d: &mut Diagram, i: usize, tail: VId, head: VId) -> Result<()> {
    let e = &d.edges[i];
    if e.tail == tail && e.head == head {
        return Ok(());
    }
    if e.tail == head && e.head == tail {
        let s = CoeffProduct::sign_of(&e.index)?;
        d.coeff.push(s);
        let e = &mut d.edges[i];
        core::mem::swap(&mut e.tail, &mut e.head);
        return Ok(());
    }
    Err(pre(format!("edge {i} does not join {tail} and {head}")))
}

/// Reverse edge `i`.
pub fn flip_edge(d: &Diagram, i: usize) -> Result<Diagram> {
    let mut out = d.clone();
    let e = out.edges.get(i).ok_or_else(|| pre(format!("no edge {i}")))?.clone();
    orient(&mut out, i, e.head, e.tail)?;
    Ok(out)
}

/// Combine all edges between `a` and `b` into one `a → b` edge, dropped when trivial.
pub fn merge_parallel(d: &Diagram, a: VId, b: VId) -> Result<Diagram> {
    if a == b {
        return Err(pre("merging a vertex with itself".into()));
    }
    let mut out = d.clone();
    let ids: Vec<usize> =
        (0..out.edges.len()).filter(|&i| out.edges[i].touches(a) && out.edges[i].touches(b)).collect();
    if ids.is_empty() {
        return Err(pre(format!("no edges between {} and {}", d.label(a), d.label(b))));
    }
    let mut sum: Option<SymIndex> = None;
    for &i in &ids {
        orient(&mut out, i, a, b)?;
        let x = out.edges[i].index.clone();
        sum = Some(match sum {
            None => x,
            Some(s) => s + x,
        });
    }
    let sum = sum.unwrap();
    let mut k = 0;
    out.edges.retain(|_| {
        let keep = !ids.contains(&k);
        k += 1;
        keep
    });
    if !is_zero_pair(&sum) {
        out.edges.push(Edge::new(a, b, sum));
    }
    Ok(out)
}

fn require_integrated(d: &Diagram, w: VId) -> Result<()> {
    match d.kind(w)? {
        VKind::Internal | VKind::MomInternal => Ok(()),
        _ => Err(pre(format!("{} is not integrated", d.label(w)))),
    }
}

fn require_no_waves(d: &Diagram, w: VId) -> Result<()> {
    if d.waves_at(w).is_empty() && d.waves.iter().all(|x| !x.momentum.contains_key(&w)) {
        Ok(())
    } else {
        Err(pre(format!("{} carries plane waves", d.label(w))))
    }
}

fn remove_edges(d: &mut Diagram, ids: &[usize]) {
    let mut k = 0;
    d.edges.retain(|_| {
        let keep = !ids.contains(&k);
        k += 1;
        keep
    });
}

fn two_neighbours(d: &Diagram, w: VId) -> Result<(usize, usize)> {
    let es = d.edges_at(w);
    if es.len() != 2 {
        return Err(pre(format!("{} has degree {}, not 2", d.label(w), es.len())));
    }
    if d.edges[es[0]].other(w) == d.edges[es[1]].other(w) {
        return Err(pre(format!("parallel edges at {}", d.label(w))));
    }
    Ok((es[0], es[1]))
}

/// `∫d²w [z₁−w]^{−a}[w−z₂]^{−b} = π(−1)^{γ−γ̄} a(a,b,γ) [z₁−z₂]^{−(a+b−1)}`, `γ = 2−a−b`.
pub fn chain(d: &Diagram, w: VId) -> Result<Diagram> {
    require_integrated(d, w)?;
    require_no_waves(d, w)?;
    let (e1, e2) = two_neighbours(d, w)?;
    let mut out = d.clone();
    let z1 = out.edges[e1].other(w);
    let z2 = out.edges[e2].other(w);
    orient(&mut out, e1, w, z1)?;
    orient(&mut out, e2, z2, w)?;
    let a = out.edges[e1].index.clone();
    let b = out.edges[e2].index.clone();
    let g = SymIndex::int(2) - a.clone() - b.clone();
    if is_zero_pair(&g) {
        return Err(pre("a+b = 2: use the delta form".into()));
    }
    remove_edges(&mut out, &[e1, e2]);
    out.vertices.remove(&w);
    out.coeff.push(Atom::Pi(1));
    out.coeff.push(CoeffProduct::sign_of(&g)?);
    out.coeff.push(Atom::A(a.clone()));
    out.coeff.push(Atom::A(b.clone()));
    out.coeff.push(Atom::A(g));
    let e = a + b - SymIndex::int(1);
    if !is_zero_pair(&e) {
        out.edges.push(Edge::new(z2, z1, e));
    }
    Ok(out)
}

/// `∫d²w [z₁−w]^{−(2−a)}[w−z₂]^{−a} = π² a(a, 2−a) δ²(z₁−z₂)`.
pub fn delta_reduce(d: &Diagram, w: VId) -> Result<Diagram> {
    require_integrated(d, w)?;
    require_no_waves(d, w)?;
    let (e1, e2) = two_neighbours(d, w)?;
    let mut out = d.clone();
    let z1 = out.edges[e1].other(w);
    let z2 = out.edges[e2].other(w);
    orient(&mut out, e1, w, z1)?;
    orient(&mut out, e2, z2, w)?;
    let a = out.edges[e1].index.clone();
    let b = out.edges[e2].index.clone();
    let g = SymIndex::int(2) - a.clone() - b.clone();
    if !is_zero_pair(&g) {
        return Err(pre(format!("indices sum to 2 − ({g}), not 2")));
    }
    remove_edges(&mut out, &[e1, e2]);
    out.vertices.remove(&w);
    out.coeff.push(Atom::Pi(2));
    out.coeff.push(Atom::A(a));
    out.coeff.push(Atom::A(b));
    out.coeff.push(Atom::Delta(Delta::Point(z1, z2)));
    Ok(out)
}

/// Star → triangle for an integrated vertex of degree 3 with indices summing to 2.
pub fn star_triangle(d: &Diagram, w: VId) -> Result<Diagram> {
    require_integrated(d, w)?;
    require_no_waves(d, w)?;
    let es = d.edges_at(w);
    if es.len() != 3 {
        return Err(pre(format!("{} has degree {}, not 3", d.label(w), es.len())));
    }
    let mut out = d.clone();
    let z: Vec<VId> = es.iter().map(|&i| out.edges[i].other(w)).collect();
    if z[0] == z[1] || z[1] == z[2] || z[0] == z[2] {
        return Err(pre(format!("parallel edges at {}", d.label(w))));
    }
    for k in 0..3 {
        orient(&mut out, es[k], w, z[k])?;
    }
    let (al, be, ga) = (out.edges[es[0]].index.clone(), out.edges[es[1]].index.clone(), out.edges[es[2]].index.clone());
    let rest = SymIndex::int(2) - al.clone() - be.clone() - ga.clone();
    if !is_zero_pair(&rest) {
        return Err(pre(format!("star indices miss 2 by {rest}")));
    }
    remove_edges(&mut out, &es);
    out.vertices.remove(&w);
    let one = SymIndex::int(1);
    out.edges.push(Edge::new(z[0], z[1], one.clone() - ga.clone()));
    out.edges.push(Edge::new(z[2], z[0], one.clone() - be.clone()));
    out.edges.push(Edge::new(z[1], z[2], one - al.clone()));
    out.coeff.push(Atom::Pi(1));
    out.coeff.push(Atom::A(al));
    out.coeff.push(Atom::A(be));
    out.coeff.push(Atom::A(ga));
    Ok(out)
}

/// Cross relation at a degree-4 vertex whose neighbours are given in the order `z₁..z₄`.
pub fn cross(d: &Diagram, w: VId, z: [VId; 4]) -> Result<Diagram> {
    require_integrated(d, w)?;
    require_no_waves(d, w)?;
    let es = d.edges_at(w);
    if es.len() != 4 {
        return Err(pre(format!("{} has degree {}, not 4", d.label(w), es.len())));
    }
    let mut out = d.clone();
    let mut at = [0usize; 4];
    for k in 0..4 {
        at[k] = *es
            .iter()
            .find(|&&i| out.edges[i].other(w) == z[k])
            .ok_or_else(|| pre(format!("{} is not a neighbour of {}", d.label(z[k]), d.label(w))))?;
        orient(&mut out, at[k], z[k], w)?;
    }
    let one = SymIndex::int(1);
    let al = out.edges[at[0]].index.clone();
    let alp = one.clone() - out.edges[at[1]].index.clone();
    let be = out.edges[at[2]].index.clone();
    let bep = one.clone() - out.edges[at[3]].index.clone();
    let bal = al.clone() + be.clone() - alp.clone() - bep.clone();
    if !is_zero_pair(&bal) {
        return Err(pre(format!("cross pattern unbalanced by {bal}")));
    }
    out.edges[at[0]].index = alp.clone();
    out.edges[at[1]].index = one.clone() - al.clone();
    out.edges[at[2]].index = bep.clone();
    out.edges[at[3]].index = one - be.clone();
    let e12 = al.clone() - alp.clone();
    if !is_zero_pair(&e12) {
        out.edges.push(Edge::new(z[1], z[0], e12));
    }
    let e34 = be.clone() - bep.clone();
    if !is_zero_pair(&e34) {
        out.edges.push(Edge::new(z[3], z[2], e34));
    }
    out.coeff.push(Atom::A(al));
    out.coeff.push(Atom::A(be.swapped()));
    out.coeff.push(Atom::A(alp.one_minus_bar()));
    out.coeff.push(Atom::A(bep.swapped().one_minus_bar()));
    Ok(out)
}

/// Momentum combination as an edge `(tail, head)` with `[head − tail]`.
fn combo_edge(m: &BTreeMap<VId, i32>) -> Result<(VId, VId)> {
    let v: Vec<(VId, i32)> = m.iter().filter(|(_, c)| **c != 0).map(|(a, b)| (*a, *b)).collect();
    match v.as_slice() {
        [(h, 1)] => Ok((ANCHOR, *h)),
        [(t, -1)] => Ok((*t, ANCHOR)),
        [(a, 1), (b, -1)] => Ok((*b, *a)),
        [(a, -1), (b, 1)] => Ok((*a, *b)),
        _ => Err(Error::OutOfClass("momentum is not a difference of two momenta".into())),
    }
}

fn total_momentum(d: &Diagram, w: VId) -> Result<(Vec<usize>, BTreeMap<VId, i32>)> {
    let ws = d.waves_at(w);
    let mut k: BTreeMap<VId, i32> = BTreeMap::new();
    for &i in &ws {
        if d.waves[i].inverted {
            return Err(Error::OutOfClass(format!("inverted wave at {}", d.label(w))));
        }
        for (v, c) in &d.waves[i].momentum {
            *k.entry(*v).or_insert(0) += c;
        }
    }
    k.retain(|_, c| *c != 0);
    Ok((ws, k))
}

fn remove_waves(d: &mut Diagram, ids: &[usize]) {
    let mut k = 0;
    d.waves.retain(|_| {
        let keep = !ids.contains(&k);
        k += 1;
        keep
    });
}

/// `∫d²w e^{i(kw+k̄w̄)}[w−z]^{−α} = π i^{α−ᾱ} a(α) [k]^{α−1} e^{i(kz+k̄z̄)}`.
pub fn fourier(d: &Diagram, w: VId) -> Result<Diagram> {
    if !matches!(d.kind(w)?, VKind::Internal) {
        return Err(pre(format!("{} is not an integrated coordinate", d.label(w))));
    }
    let es = d.edges_at(w);
    if es.len() != 1 {
        return Err(pre(format!("{} has degree {}, not 1", d.label(w), es.len())));
    }
    let (ws, k) = total_momentum(d, w)?;
    if ws.is_empty() || k.is_empty() {
        return Err(pre(format!("no momentum flows into {}", d.label(w))));
    }
    let mut out = d.clone();
    let z = out.edges[es[0]].other(w);
    orient(&mut out, es[0], z, w)?;
    let a = out.edges[es[0]].index.clone();
    remove_edges(&mut out, &es);
    remove_waves(&mut out, &ws);
    out.vertices.remove(&w);
    if z != ANCHOR {
        out.waves.push(Wave { at: z, momentum: k.clone(), inverted: false });
    }
    let (t, h) = combo_edge(&k)?;
    let p = SymIndex::int(1) - a.clone();
    if !is_zero_pair(&p) {
        out.edges.push(Edge::new(t, h, p));
    }
    out.coeff.push(Atom::Pi(1));
    out.coeff.push(CoeffProduct::ipow_of(&a, 1)?);
    out.coeff.push(Atom::A(a));
    Ok(out)
}

/// `[h−t]^{−α} = π^{−1} i^{α−ᾱ} a(α) ∫d²q [q]^{α−1} e^{−i(qh+q̄h̄)} e^{i(qt+q̄t̄)}`.
pub fn fourier_expand(d: &Diagram, i: usize, label: &str) -> Result<Diagram> {
    let e = d.edges.get(i).ok_or_else(|| pre(format!("no edge {i}")))?.clone();
    if d.kind(e.tail)?.is_momentum() || d.kind(e.head)?.is_momentum() {
        return Err(pre("edge is already in momentum space".into()));
    }
    let mut out = d.clone();
    remove_edges(&mut out, &[i]);
    let q = out.add_vertex(VKind::MomInternal, label);
    let p = SymIndex::int(1) - e.index.clone();
    if !is_zero_pair(&p) {
        out.edges.push(Edge::new(ANCHOR, q, p));
    }
    if e.head != ANCHOR {
        out.waves.push(Wave::new(e.head, &[(q, -1)]));
    }
    if e.tail != ANCHOR {
        out.waves.push(Wave::new(e.tail, &[(q, 1)]));
    }
    out.coeff.push(Atom::Pi(-1));
    out.coeff.push(CoeffProduct::ipow_of(&e.index, 1)?);
    out.coeff.push(Atom::A(e.index));
    Ok(out)
}

/// Replace momentum vertex `q` by the combination `r` everywhere.
fn subst_momentum(d: &mut Diagram, q: VId, r: &BTreeMap<VId, i32>) -> Result<()> {
    let combo = |v: VId| -> BTreeMap<VId, i32> {
        if v == q {
            r.clone()
        } else if v == ANCHOR {
            BTreeMap::new()
        } else {
            let mut m = BTreeMap::new();
            m.insert(v, 1);
            m
        }
    };
    let mut edges = Vec::new();
    for e in &d.edges {
        if !e.touches(q) {
            edges.push(e.clone());
            continue;
        }
        let mut m = combo(e.head);
        for (v, c) in combo(e.tail) {
            *m.entry(v).or_insert(0) -= c;
        }
        m.retain(|_, c| *c != 0);
        if m.is_empty() {
            return Err(pre("momentum edge collapses to [0]".into()));
        }
        let (t, h) = combo_edge(&m)?;
        edges.push(Edge::new(t, h, e.index.clone()));
    }
    d.edges = edges;
    for w in &mut d.waves {
        if let Some(c) = w.momentum.remove(&q) {
            for (v, k) in r {
                *w.momentum.entry(*v).or_insert(0) += c * k;
            }
            w.momentum.retain(|_, k| *k != 0);
        }
    }
    d.vertices.remove(&q);
    Ok(())
}

/// `∫d²z e^{i(Kz+K̄z̄)} = π² δ²(K)`, the delta then removing the momentum `eliminate`
/// (default: the last integrated momentum in `K`).
pub fn integrate_waves(d: &Diagram, z: VId, eliminate: Option<VId>) -> Result<Diagram> {
    if !matches!(d.kind(z)?, VKind::Internal) {
        return Err(pre(format!("{} is not an integrated coordinate", d.label(z))));
    }
    if !d.edges_at(z).is_empty() {
        return Err(pre(format!("{} still has edges", d.label(z))));
    }
    let (ws, k) = total_momentum(d, z)?;
    let mut out = d.clone();
    remove_waves(&mut out, &ws);
    out.vertices.remove(&z);
    out.coeff.push(Atom::Pi(2));
    let q = match eliminate {
        Some(q) => Some(q),
        None => k.keys().rev().copied().find(|v| matches!(d.kind(*v), Ok(VKind::MomInternal))),
    };
    match q {
        Some(q) => {
            let c = *k.get(&q).ok_or_else(|| pre(format!("{} not in the momentum sum", d.label(q))))?;
            if c.abs() != 1 {
                return Err(pre("eliminated momentum must enter with coefficient ±1".into()));
            }
            let r: BTreeMap<VId, i32> = k.iter().filter(|(v, _)| **v != q).map(|(v, x)| (*v, -x * c)).collect();
            subst_momentum(&mut out, q, &r)?;
        }
        None => {
            let (t, h) = combo_edge(&k)?;
            out.coeff.push(Atom::Delta(Delta::Point(t, h)));
        }
    }
    Ok(out)
}

/// Integrate a vertex pinned by a point delta.
pub fn integrate_delta(d: &Diagram, v: VId) -> Result<Diagram> {
    require_integrated(d, v)?;
    let pos = d
        .coeff
        .atoms
        .iter()
        .position(|a| matches!(a, Atom::Delta(Delta::Point(x, y)) if *x == v || *y == v))
        .ok_or_else(|| pre(format!("no delta pins {}", d.label(v))))?;
    let mut out = d.clone();
    let Atom::Delta(Delta::Point(x, y)) = out.coeff.atoms.remove(pos) else { unreachable!() };
    let to = if x == v { y } else { x };
    out.merge_vertex(v, to);
    Ok(out)
}

/// `(j, k)` when `idx − 1 = c (x_j − x_k)` in both sectors with `c = ±i`.
fn marginal(idx: &SymIndex) -> Option<(u8, u8)> {
    let z = idx.clone() - SymIndex::int(1);
    if !z.holo.c0.is_zero() || !z.anti.c0.is_zero() || z.holo.terms.len() != 2 || z.anti.terms.len() != 2 {
        return None;
    }
    let mut pos = None;
    let mut neg = None;
    for (s, c) in &z.holo.terms {
        let Sym::X(j) = s else { return None };
        if *c == CRat::i() || *c == -CRat::i() {
            if pos.is_none() {
                pos = Some((*j, *c));
            } else {
                neg = Some((*j, *c));
            }
        } else {
            return None;
        }
    }
    let ((j, cj), (k, ck)) = (pos?, neg?);
    if cj != -ck {
        return None;
    }
    if z.anti.coeff(Sym::XBar(j)) != cj || z.anti.coeff(Sym::XBar(k)) != ck {
        return None;
    }
    Some((j.min(k), j.max(k)))
}

fn canonical_key(d: &Diagram) -> Result<(Vec<(VId, VId, String)>, CoeffProduct)> {
    let t = d.tidy();
    let mut es: Vec<(VId, VId, String)> = Vec::new();
    let mut norm = t.clone();
    for i in 0..norm.edges.len() {
        let e = norm.edges[i].clone();
        if e.tail > e.head {
            orient(&mut norm, i, e.head, e.tail)?;
        }
    }
    for e in &norm.edges {
        es.push((e.tail, e.head, format!("{}", e.index)));
    }
    es.sort();
    Ok((es, norm.coeff.simplify()))
}

/// Mellin-type delta: every endpoint (a neighbour or infinity) where the integrand
/// behaves as `[w]^{−1∓i(x_j−x_k)}` contributes `π² δ(x_j−x_k)`. All contributions
/// must coincide once `x_k → x_j`.
pub fn mellin_delta(d: &Diagram, v: VId) -> Result<Diagram> {
    require_integrated(d, v)?;
    let mut d = d.clone();
    d.combine_waves();
    let d = &d;
    require_no_waves(d, v)?;
    let mut base = d.clone();
    let nbrs: Vec<VId> = {
        let mut n: Vec<VId> = d.edges_at(v).iter().map(|&i| d.edges[i].other(v)).collect();
        n.sort();
        n.dedup();
        n
    };
    if nbrs.is_empty() {
        return Err(pre(format!("{} has no edges", d.label(v))));
    }
    for &q in &nbrs {
        base = merge_parallel(&base, q, v)?;
    }
    let at: Vec<(VId, SymIndex)> =
        base.edges.iter().filter(|e| e.head == v).map(|e| (e.tail, e.index.clone())).collect();
    let total = at.iter().fold(SymIndex::int(0), |acc, (_, i)| acc + i.clone());
    let ids = base.edges_at(v);
    let mut stripped = base.clone();
    remove_edges(&mut stripped, &ids);
    stripped.vertices.remove(&v);

    let mut contributions: Vec<(Diagram, (u8, u8))> = Vec::new();
    for (q, idx) in &at {
        if let Some(jk) = marginal(idx) {
            let mut c = stripped.clone();
            for (r, ri) in &at {
                if r != q {
                    c.edges.push(Edge::new(*r, *q, ri.clone()));
                }
            }
            contributions.push((c, jk));
        }
    }
    if let Some(jk) = marginal(&total) {
        contributions.push((stripped.clone(), jk));
    }
    if contributions.is_empty() {
        return Err(pre(format!("no marginal endpoint at {}", d.label(v))));
    }
    let mut keyed = Vec::new();
    for (c, (j, k)) in &contributions {
        let mut r = c.rename(Sym::X(*k), Sym::X(*j));
        r.coeff.push(Atom::Pi(2));
        r.coeff.push(Atom::Delta(Delta::Spectral(*j, *k)));
        keyed.push((canonical_key(&r)?, r));
    }
    let first = keyed[0].0.clone();
    if keyed.iter().any(|(k, _)| *k != first) {
        return Err(pre("endpoint contributions differ".into()));
    }
    let mut out = keyed.swap_remove(0).1;
    out.coeff.push(Atom::Num(CRat::int(contributions.len() as i128)));
    Ok(out.tidy())
}

/// Limit `z₁ → z₂` of `[z₂−w]^{−a}[w−z₁]^{−b}[z₂−z₁]^{−c}` with `a+b+c = 1`:
/// the chain constant times `δ²(w−z₂)`.
pub fn coincident_limit(d: &Diagram, w: VId, z1: VId, z2: VId) -> Result<Diagram> {
    let mut out = d.clone();
    out = merge_parallel(&out, z1, z2).unwrap_or(out);
    let es = out.edges_at(w);
    if es.len() != 2 {
        return Err(pre(format!("{} has degree {}, not 2", d.label(w), es.len())));
    }
    let ea = *es.iter().find(|&&i| out.edges[i].other(w) == z2).ok_or_else(|| pre("no edge to z₂".into()))?;
    let eb = *es.iter().find(|&&i| out.edges[i].other(w) == z1).ok_or_else(|| pre("no edge to z₁".into()))?;
    orient(&mut out, ea, w, z2)?;
    orient(&mut out, eb, z1, w)?;
    let a = out.edges[ea].index.clone();
    let b = out.edges[eb].index.clone();
    let ez = out.edges.iter().position(|e| e.touches(z1) && e.touches(z2));
    let c = match ez {
        Some(i) => {
            orient(&mut out, i, z1, z2)?;
            out.edges[i].index.clone()
        }
        None => SymIndex::int(0),
    };
    let bal = a.clone() + b.clone() + c - SymIndex::int(1);
    if !is_zero_pair(&bal) {
        return Err(pre(format!("limit is not scale invariant: a+b+c−1 = {bal}")));
    }
    let mut drop = alloc::vec![ea, eb];
    if let Some(i) = ez {
        drop.push(i);
    }
    remove_edges(&mut out, &drop);
    let g = SymIndex::int(2) - a.clone() - b.clone();
    out.coeff.push(Atom::Pi(1));
    out.coeff.push(CoeffProduct::sign_of(&g)?);
    out.coeff.push(Atom::A(a));
    out.coeff.push(Atom::A(b));
    out.coeff.push(Atom::A(g));
    out.coeff.push(Atom::Delta(Delta::Point(w, z2)));
    out.merge_vertex(z1, z2);
    Ok(out)
}

impl Diagram {
    /// Edge index by endpoint labels, in either orientation.
    pub fn find_edge(&self, a: &str, b: &str) -> Result<usize> {
        let (x, y) = (self.by_label(a)?, self.by_label(b)?);
        self.edges
            .iter()
            .position(|e| e.touches(x) && e.touches(y) && x != y)
            .ok_or_else(|| pre(format!("no edge between {a} and {b}")))
    }

    /// Affine momentum of a wave in terms of the bound momenta.
    pub fn wave_momentum(&self, w: &Wave) -> Affine {
        let mut k = Affine::zero();
        for (v, c) in &w.momentum {
            if let Ok(VKind::MomExternal(j)) = self.kind(*v) {
                k.add_term(Sym::P(*j), CRat::int(*c as i128));
            }
        }
        k
    }
}
