//! Scripted derivations with their traces, checked against the closed forms.

use sl2c_core::checks::a1_chain_value;
use sl2c_core::diagram::*;
use sl2c_core::specialfn::{SepPoint, Spin};
use sl2c_core::symbolic::{Affine, Binding, CRat, Sym, SymIndex};
use sl2c_core::{C64, PI};

use crate::report::{Check, Report};
use crate::WbError;

pub const SCRIPTS: [&str; 4] = ["lambda1", "exchange2", "ll2", "appendixB_2Ra"];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn sample_binding() -> Binding {
    Binding::new()
        .with_spin(&Spin::new(1, 0.27))
        .with_sep(1, &SepPoint::new(-1, 0.41))
        .with_sep(2, &SepPoint::new(3, -0.2))
        .with_pair(Sym::P(0), c(0.8, -0.35), c(0.8, 0.35))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn delta_norm(pi: i32) -> CoeffProduct {
    CoeffProduct::one().with(Atom::Pi(pi)).with(Atom::Num(CRat::int(2))).with(Atom::Delta(Delta::Spectral(1, 2)))
}

fn has_edge(d: &Diagram, tail: &str, head: &str, idx: &SymIndex) -> bool {
    let (Ok(t), Ok(h)) = (d.by_label(tail), d.by_label(head)) else {
        return false;
    };
    d.edges.iter().any(|e| e.tail == t && e.head == h && &e.index == idx)
}

pub fn run(name: &str) -> Result<Report, WbError> {
    let (input, script) = match name {
        "lambda1" => (lambda1_input()?, lambda1_script()),
        "exchange2" => (exchange2_input()?, exchange2_script()),
        "ll2" => (ll2_input()?, ll2_script()),
        "appendixB_2Ra" => (r1_input()?, r1_projection_script()),
        _ => return Err(WbError::Config(format!("unknown script {name:?}; expected one of {}", SCRIPTS.join(", ")))),
    };
    let out = run_script(&input, &script)?;
    let co = &out.diagram.coeff;
    let mut r = Report::new(format!("derive {name}"));
    r.param("script", name);
    for (k, step) in out.trace.iter().enumerate() {
        r.note(format!("step {}: {step}", k + 1));
    }
    r.note(format!("coefficient: {co}"));
    let b = sample_binding();
    match name {
        "lambda1" => {
            r.push(Check::exact("closed-form", "2 pi^2 delta(x1 - x2)", co.same_as(&delta_norm(2))));
            let v = co.eval_regular(&b)?;
            r.push(Check::new("numeric", "regular part", rel(v, c(2.0 * PI * PI, 0.0)), 1e-12));
        }
        "exchange2" => {
            let dx = Affine::sym(Sym::X(1)) - Affine::sym(Sym::X(2));
            let dxb = Affine::sym(Sym::XBar(1)) - Affine::sym(Sym::XBar(2));
            let want = CoeffProduct::one().with(Atom::Pi(2)).with(Atom::Linear(dx, -1)).with(Atom::Linear(dxb, -1));
            r.push(Check::exact("closed-form", "pi^2 / ((x1 - x2)(xb1 - xb2))", co.same_as(&want)));
            let x = |s| b.get(s);
            let direct = PI * PI / ((x(Sym::X(1))? - x(Sym::X(2))?) * (x(Sym::XBar(1))? - x(Sym::XBar(2))?));
            r.push(Check::new("numeric", "x1=(-1,0.41) x2=(3,-0.2)", rel(co.eval_regular(&b)?, direct), 1e-12));
        }
        "ll2" => {
            r.push(Check::exact("closed-form", "2 pi^4 delta(x1 - x2)", co.same_as(&delta_norm(4))));
            let d = &out.diagram;
            let left = has_edge(d, "0", "p", &SymIndex::int(1)) && d.waves.len() == 1;
            r.push(Check::exact("remaining-factor", "|p|^-2 and one plane wave", left));
            r.push(Check::new("numeric", "regular part", rel(co.eval_regular(&b)?, c(2.0 * PI.powi(4), 0.0)), 1e-12));
        }
        _ => {
            let chain_form = sl2c_core::diagram::a1_chain_form()?;
            r.push(Check::exact("closed-form", "printed form times (-1)^(gamma - gamma_bar)", co.same_as(&chain_form)));
            let (a, v) = ((c(0.23, -0.8), c(0.23, 0.2)), (c(-0.12, 0.15), c(-0.12, 0.15)));
            let bind = Binding::new().with_spin(&Spin::new(0, 0.13)).with_pair(Sym::U, a.0, a.1).with_pair(Sym::V, v.0, v.1);
            let direct = a1_chain_value(a, v)?;
            r.push(Check::new("numeric", "u=(0.23-0.8i, 0.23+0.2i) v=-0.12+0.15i", rel(co.eval_regular(&bind)?, direct), 1e-12));
            let printed = a1_closed_form()?;
            r.note(format!("scripted / printed = {}", co.mul(&printed.inverse()?).simplify()));
        }
    }
    Ok(r)
}
