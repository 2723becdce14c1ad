//! Versioned plain-text form of a diagram.
//!
//! ```text
//! sl2c-diagram 1
//! vertex 1 external z1
//! vertex 3 momext p 0
//! edge 1 2 1 - s - 1*i*x1 | 1 - sb - 1*i*xb1
//! wave 1 0 3:1
//! atom pi 2
//! outputs 1
//! inputs 2
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Atom, Delta, Diagram, Edge, VId, VKind, Vertex, Wave};
use crate::symbolic::{Affine, CRat, IntForm, SymIndex};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

fn q_text(q: &crate::symbolic::Q) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn ids(v: &[VId]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn to_text(d: &Diagram) -> String {
    let mut out = format!("sl2c-diagram {FORMAT_VERSION}\n");
    for (id, v) in &d.vertices {
        let kind = match v.kind {
            VKind::Anchor => "anchor".to_string(),
            VKind::External => "external".to_string(),
            VKind::Internal => "internal".to_string(),
            VKind::MomInternal => "momint".to_string(),
            VKind::MomExternal(k) => format!("momext {k}"),
        };
        let (k, rest) = kind.split_once(' ').map_or((kind.as_str(), ""), |(a, b)| (a, b));
        if rest.is_empty() {
            out += &format!("vertex {id} {k} {}\n", v.label);
        } else {
            out += &format!("vertex {id} {k} {} {rest}\n", v.label);
        }
    }
    let mut edges: Vec<String> =
        d.edges.iter().map(|e| format!("edge {} {} {}\n", e.tail, e.head, e.index)).collect();
    edges.sort();
    for e in edges {
        out += &e;
    }
    for w in &d.waves {
        let m: Vec<String> = w.momentum.iter().map(|(v, c)| format!("{v}:{c}")).collect();
        out += &format!("wave {} {} {}\n", w.at, u8::from(w.inverted), m.join(" "));
    }
    for a in &d.coeff.atoms {
        let body = match a {
            Atom::Pi(k) => format!("pi {k}"),
            Atom::IPow(e) => format!("ipow {e}"),
            Atom::A(i) => format!("a {i}"),
            Atom::Linear(l, k) => format!("lin {k} {l}"),
            Atom::Delta(Delta::Point(x, y)) => format!("dpoint {x} {y}"),
            Atom::Delta(Delta::Spectral(x, y)) => format!("dspec {x} {y}"),
            Atom::Num(c) => format!("num {} {}", q_text(&c.re), q_text(&c.im)),
        };
        out += &format!("atom {body}\n");
    }
    out += &format!("outputs {}\n", ids(&d.outputs));
    out += &format!("inputs {}\n", ids(&d.inputs));
    out
}

fn bad(line: usize, why: &str) -> Error {
    Error::PreconditionFailed(format!("diagram text line {}: {why}", line + 1))
}

fn num<T: core::str::FromStr>(s: Option<&str>, line: usize) -> Result<T> {
    s.and_then(|x| x.parse().ok()).ok_or_else(|| bad(line, "expected a number"))
}

pub fn from_text(text: &str) -> Result<Diagram> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, l)) if l.trim() == format!("sl2c-diagram {FORMAT_VERSION}") => {}
        Some((i, _)) => return Err(bad(i, "unsupported header")),
        None => return Err(bad(0, "empty input")),
    }
    let mut d = Diagram::new();
    d.vertices.clear();
    for (i, l) in lines {
        let (tag, rest) = l.split_once(' ').unwrap_or((l, ""));
        let mut tok = rest.split_whitespace();
        match tag {
            "vertex" => {
                let id: VId = num(tok.next(), i)?;
                let kind = tok.next().ok_or_else(|| bad(i, "missing kind"))?;
                let label = tok.next().ok_or_else(|| bad(i, "missing label"))?.to_string();
                let kind = match kind {
                    "anchor" => VKind::Anchor,
                    "external" => VKind::External,
                    "internal" => VKind::Internal,
                    "momint" => VKind::MomInternal,
                    "momext" => VKind::MomExternal(num(tok.next(), i)?),
                    _ => return Err(bad(i, "unknown vertex kind")),
                };
                d.vertices.insert(id, Vertex { kind, label });
            }
            "edge" => {
                let t: VId = num(tok.next(), i)?;
                let h: VId = num(tok.next(), i)?;
                let idx_text: String = rest.splitn(3, ' ').nth(2).unwrap_or("").to_string();
                d.edges.push(Edge::new(t, h, SymIndex::parse(&idx_text)?));
            }
            "wave" => {
                let at: VId = num(tok.next(), i)?;
                let inv: u8 = num(tok.next(), i)?;
                let mut m = Vec::new();
                for p in tok {
                    let (v, c) = p.split_once(':').ok_or_else(|| bad(i, "bad momentum term"))?;
                    m.push((num(Some(v), i)?, num(Some(c), i)?));
                }
                let mut w = Wave::new(at, &m);
                w.inverted = inv == 1;
                d.waves.push(w);
            }
            "atom" => {
                let (kind, body) = rest.split_once(' ').unwrap_or((rest, ""));
                let mut bt = body.split_whitespace();
                let a = match kind {
                    "pi" => Atom::Pi(num(bt.next(), i)?),
                    "ipow" => Atom::IPow(IntForm::parse(body)?),
                    "a" => Atom::A(SymIndex::parse(body)?),
                    "lin" => {
                        let k: i32 = num(bt.next(), i)?;
                        let aff = body.split_once(' ').map(|x| x.1).unwrap_or("");
                        Atom::Linear(Affine::parse(aff)?, k)
                    }
                    "dpoint" => Atom::Delta(Delta::Point(num(bt.next(), i)?, num(bt.next(), i)?)),
                    "dspec" => Atom::Delta(Delta::Spectral(num(bt.next(), i)?, num(bt.next(), i)?)),
                    "num" => {
                        let re = Affine::parse(bt.next().ok_or_else(|| bad(i, "missing real part"))?)?.c0;
                        let im = Affine::parse(bt.next().ok_or_else(|| bad(i, "missing imaginary part"))?)?.c0;
                        Atom::Num(re + im * CRat::i())
                    }
                    _ => return Err(bad(i, "unknown atom")),
                };
                d.coeff.atoms.push(a);
            }
            "outputs" => d.outputs = tok.map(|x| num(Some(x), i)).collect::<Result<_>>()?,
            "inputs" => d.inputs = tok.map(|x| num(Some(x), i)).collect::<Result<_>>()?,
            _ => return Err(bad(i, "unknown record")),
        }
    }
    if !matches!(d.vertices.get(&super::ANCHOR).map(|v| &v.kind), Some(VKind::Anchor)) {
        return Err(Error::PreconditionFailed("diagram text lacks the anchor vertex".into()));
    }
    Ok(d)
}
