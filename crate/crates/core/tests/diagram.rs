use proptest::prelude::*;
use sl2c_core::diagram::*;
use sl2c_core::specialfn::{a_of, SepPoint, Spin, ZIndex};
use sl2c_core::symbolic::{Affine, Binding, CRat, Sym, SymIndex};
use sl2c_core::{C64, PI};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn binding() -> Binding {
    Binding::new()
        .with_spin(&Spin::new(1, 0.27))
        .with_sep(1, &SepPoint::new(-1, 0.41))
        .with_sep(2, &SepPoint::new(3, -0.2))
        .with_pair(Sym::U, c(0.17, 0.05), c(0.17, -0.05))
        .with_pair(Sym::P(0), c(0.8, -0.35), c(0.8, 0.35))
}

fn num(k: i128, d: i128) -> SymIndex {
    SymIndex::numeric(CRat::frac(k, d), 0)
}

fn has_edge(d: &Diagram, tail: &str, head: &str, idx: &SymIndex) -> bool {
    let (t, h) = (d.by_label(tail).unwrap(), d.by_label(head).unwrap());
    d.edges.iter().any(|e| e.tail == t && e.head == h && &e.index == idx)
}

#[test]
fn single_tilde_layer_is_one_power() {
    let d = build_lambda(1, LambdaFamily::Tilde, 1).unwrap();
    assert!(d.internal().is_empty());
    assert_eq!(d.edges.len(), 1);
    let want = SymIndex::from_holo(Affine::sym(Sym::S) - Affine::isym(Sym::X(1)));
    assert!(has_edge(&d, "0", "z1", &want));
    assert!(d.coeff.atoms.is_empty());
}

#[test]
fn two_site_layer_structure() {
    let d = build_lambda(2, LambdaFamily::Plain, 1).unwrap();
    assert_eq!(d.internal().len(), 1);
    assert!(has_edge(&d, "z1", "w1", &alpha_of(1)));
    assert!(has_edge(&d, "z2", "w1", &beta_of(1)));
    assert!(has_edge(&d, "z2", "z1", &gamma_s()));
    assert_eq!(d.coeff.atoms.len(), 2);
}

#[test]
fn three_site_layer_has_six_edges() {
    let d = build_lambda(3, LambdaFamily::Plain, 1).unwrap();
    assert_eq!(d.internal().len(), 2);
    assert_eq!(d.edges.len(), 6);
    assert_eq!(d.coeff.atoms.len(), 4);
}

#[test]
fn psi_builders() {
    let b1 = build_psi(Family::B, 1, &[]).unwrap();
    assert!(b1.edges.is_empty() && b1.waves.len() == 1 && b1.coeff.atoms.is_empty());

    let a2 = build_psi(Family::A, 2, &[1, 2]).unwrap();
    assert_eq!(a2.internal().len(), 1);
    assert_eq!(a2.external().len(), 2);

    let d2 = build_psi(Family::D, 2, &[1, 2]).unwrap();
    let delta = |k: u8| SymIndex::from_holo(Affine::sym(Sym::S) + Affine::isym(Sym::X(k)));
    assert!(has_edge(&d2, "0", "z1", &delta(1)));
    assert!(has_edge(&d2, "0", "w1", &delta(2)));

    assert!(build_psi(Family::A, 2, &[1]).is_err());
    assert!(build_psi(Family::B, 3, &[1, 2, 3]).is_err());
}

#[test]
fn baxter_builders() {
    let minus = SymIndex::from_holo(Affine::sym(Sym::S) + Affine::isym(Sym::U));
    let plus = SymIndex::from_holo(Affine::sym(Sym::S) - Affine::isym(Sym::U));
    let line = SymIndex::from_holo(Affine::int(1) - Affine::term(CRat::int(2), Sym::S));

    let d = build_baxter(Family::D, 1).unwrap();
    assert_eq!(d.edges.len(), 3);
    assert!(has_edge(&d, "0", "z1", &minus));
    assert!(has_edge(&d, "w1", "z1", &plus));
    assert!(has_edge(&d, "0", "w1", &line));

    let b = build_baxter(Family::B, 1).unwrap();
    assert_eq!(b.edges.len(), 1);
    assert!(has_edge(&b, "w1", "z1", &plus));

    let cc = build_baxter(Family::C, 1).unwrap();
    assert_eq!(cc.edges.len(), 4);
    let tail = SymIndex::from_holo(Affine::int(1) - Affine::sym(Sym::S) + Affine::isym(Sym::U));
    assert!(has_edge(&cc, "w1", "0", &tail));
    assert!(d.internal().is_empty() && cc.internal().is_empty());
}

#[test]
fn factorized_r_structure() {
    let r1 = build_factorized_r(1, &Affine::sym(Sym::U), &Affine::sym(Sym::V)).unwrap();
    assert_eq!(r1.internal().len(), 1);
    assert_eq!(r1.edges.len(), 3);
    assert!(build_factorized_r(3, &Affine::sym(Sym::U), &Affine::sym(Sym::V)).is_err());
}

fn two_edge_chain(a: SymIndex, b: SymIndex) -> (Diagram, VId) {
    let mut d = Diagram::new();
    let z1 = d.add_vertex(VKind::External, "z1");
    let z2 = d.add_vertex(VKind::External, "z2");
    let w = d.add_vertex(VKind::Internal, "w");
    d.edge(w, z1, a);
    d.edge(z2, w, b);
    (d, w)
}

#[test]
fn chain_rule_example() {
    let (a, b) = (num(3, 4), num(1, 2));
    let (d, w) = two_edge_chain(a.clone(), b.clone());
    let out = chain(&d, w).unwrap();
    assert!(out.internal().is_empty());
    assert_eq!(out.edges.len(), 1);
    assert!(has_edge(&out, "z2", "z1", &num(1, 4)));
    let g = ZIndex::real(0.75, 0);
    let want = PI * a_of(ZIndex::real(0.75, 0)).unwrap() * a_of(ZIndex::real(0.5, 0)).unwrap() * a_of(g).unwrap();
    let got = out.coeff.eval_regular(&Binding::new()).unwrap();
    assert!((got - want).norm() < 1e-14 * want.norm());
}

#[test]
fn chain_to_delta() {
    let a = SymIndex::numeric(CRat::new(sl2c_core::symbolic::Q::new(3, 5), sl2c_core::symbolic::Q::new(1, 10)), 1);
    let b = SymIndex::int(2) - a.clone();
    let (d, w) = two_edge_chain(a.clone(), b.clone());
    assert!(chain(&d, w).is_err());
    let out = delta_reduce(&d, w).unwrap();
    assert!(out.edges.is_empty());
    assert_eq!(out.coeff.deltas().count(), 1);
    let bind = Binding::new();
    let want = PI * PI * a_of(a.eval(&bind).unwrap()).unwrap() * a_of(b.eval(&bind).unwrap()).unwrap();
    assert!((out.coeff.eval_regular(&bind).unwrap() - want).norm() < 1e-13 * want.norm());
    let (d, w) = two_edge_chain(num(1, 2), num(1, 2));
    assert!(delta_reduce(&d, w).is_err());
}

#[test]
fn star_triangle_example() {
    let mut d = Diagram::new();
    let z: Vec<VId> = (1..=3).map(|k| d.add_vertex(VKind::External, &format!("z{k}"))).collect();
    let w = d.add_vertex(VKind::Internal, "w");
    let (al, be, ga) = (num(1, 2), num(2, 3), num(5, 6));
    d.edge(w, z[0], al.clone());
    d.edge(w, z[1], be.clone());
    d.edge(w, z[2], ga.clone());
    let out = star_triangle(&d, w).unwrap();
    assert_eq!(out.edges.len(), 3);
    assert!(has_edge(&out, "z1", "z2", &(SymIndex::int(1) - ga)));
    assert!(has_edge(&out, "z3", "z1", &(SymIndex::int(1) - be)));
    assert!(has_edge(&out, "z2", "z3", &(SymIndex::int(1) - al)));
    assert_eq!(out.coeff.atoms.iter().filter(|a| matches!(a, Atom::A(_))).count(), 3);

    let mut bad = Diagram::new();
    let z: Vec<VId> = (1..=3).map(|k| bad.add_vertex(VKind::External, &format!("z{k}"))).collect();
    let w = bad.add_vertex(VKind::Internal, "w");
    for zk in z {
        bad.edge(w, zk, num(1, 2));
    }
    assert!(star_triangle(&bad, w).is_err());
}

#[test]
fn rule_preconditions() {
    let (d, _) = two_edge_chain(num(1, 2), num(1, 3));
    let z1 = d.by_label("z1").unwrap();
    assert!(chain(&d, z1).is_err());
}

#[test]
fn lambda1_script_gives_two_pi_squared_delta() {
    let run = run_script(&lambda1_input().unwrap(), &lambda1_script()).unwrap();
    let co = &run.diagram.coeff;
    assert_eq!(co.deltas().cloned().collect::<Vec<_>>(), vec![Delta::Spectral(1, 2)]);
    let v = co.eval_regular(&Binding::new()).unwrap();
    assert!((v - c(2.0 * PI * PI, 0.0)).norm() < 1e-12);
    assert_eq!(run.trace.len(), 2);
}

#[test]
fn exchange2_script_gives_alpha() {
    let run = run_script(&exchange2_input().unwrap(), &exchange2_script()).unwrap();
    let co = &run.diagram.coeff;
    let x1 = Affine::sym(Sym::X(1)) - Affine::sym(Sym::X(2));
    let x1b = Affine::sym(Sym::XBar(1)) - Affine::sym(Sym::XBar(2));
    let want = CoeffProduct::one().with(Atom::Pi(2)).with(Atom::Linear(x1, -1)).with(Atom::Linear(x1b, -1));
    assert!(co.same_as(&want), "{co:?}");
    let b = binding();
    let (x1, x2) = (b.get(Sym::X(1)).unwrap(), b.get(Sym::X(2)).unwrap());
    let (y1, y2) = (b.get(Sym::XBar(1)).unwrap(), b.get(Sym::XBar(2)).unwrap());
    let v = co.eval_regular(&b).unwrap();
    let w = PI * PI / ((x1 - x2) * (y1 - y2));
    assert!((v - w).norm() < 1e-12 * w.norm());
}

#[test]
fn ll2_script_gives_plane_wave_norm() {
    let run = run_script(&ll2_input().unwrap(), &ll2_script()).unwrap();
    let d = &run.diagram;
    assert_eq!(d.coeff.deltas().cloned().collect::<Vec<_>>(), vec![Delta::Spectral(1, 2)]);
    assert!((d.coeff.eval_regular(&Binding::new()).unwrap() - c(2.0 * PI.powi(4), 0.0)).norm() < 1e-10);
    assert_eq!(d.waves.len(), 1);
    let p = d.by_label("p").unwrap();
    assert!(has_edge(d, "0", "p", &SymIndex::int(1)));
    assert!(d.edges.iter().all(|e| e.touches(p)));
}

#[test]
fn script_failure_reports_step() {
    let mut s = exchange2_script();
    s.steps.insert(0, Step::Chain("nowhere".into()));
    match run_script(&exchange2_input().unwrap(), &s) {
        Err(sl2c_core::Error::StepFailed { index, .. }) => assert_eq!(index, 0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn measure_assembly_examples() {
    let a1 = measure_from_exchange(1, MeasureFamily::A).unwrap();
    assert!((a1.eval_regular(&Binding::new()).unwrap() - c(2.0 * PI * PI, 0.0)).norm() < 1e-12);
    let b2 = measure_from_exchange(2, MeasureFamily::B).unwrap();
    assert!((b2.eval_regular(&Binding::new()).unwrap() - c(2.0 * PI.powi(6), 0.0)).norm() < 1e-9);
    assert!(measure_from_exchange(5, MeasureFamily::A).is_err());
}

#[test]
fn text_round_trip() {
    let ds = [
        build_lambda(3, LambdaFamily::Bar, 2).unwrap(),
        build_psi(Family::B, 3, &[1, 2]).unwrap(),
        build_psi(Family::D, 2, &[1, 2]).unwrap(),
        build_baxter(Family::C, 2).unwrap(),
        run_script(&ll2_input().unwrap(), &ll2_script()).unwrap().diagram,
    ];
    for d in ds {
        let t = to_text(&d);
        assert!(t.starts_with(&format!("sl2c-diagram {FORMAT_VERSION}\n")));
        let back = from_text(&t).unwrap();
        assert_eq!(to_text(&back), t);
        assert!(back.coeff.same_as(&d.coeff));
        assert_eq!(back.edges.len(), d.edges.len());
    }
    assert!(from_text("sl2c-diagram 99\n").is_err());
}

fn index() -> impl Strategy<Value = SymIndex> {
    (-9i128..=9, 1i128..=4, -2i128..=2, -3i128..=3).prop_map(|(n, d, ks, im)| {
        let h = Affine::constant(CRat::new(sl2c_core::symbolic::Q::new(n, d), sl2c_core::symbolic::Q::new(im, 7)))
            + Affine::term(CRat::int(ks), Sym::S)
            + Affine::isym(Sym::X(1));
        SymIndex::from_holo(h)
    })
}

fn atom_from(idx: &SymIndex, pick: u8) -> Atom {
    match pick % 6 {
        0 => Atom::A(idx.clone()),
        1 => Atom::A(idx.one_minus()),
        2 => Atom::A(idx.one_minus_bar()),
        3 => Atom::A(idx.swapped()),
        4 => CoeffProduct::sign_of(idx).unwrap(),
        _ => Atom::Pi(pick as i32 % 3 - 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn simplifier_preserves_value(
        parts in proptest::collection::vec((index(), proptest::collection::vec(any::<u8>(), 1..4)), 1..4),
        ns in -2i64..=2, nu in -0.5f64..0.5, n1 in -2i64..=2, nu1 in -1.0f64..1.0,
    ) {
        let mut co = CoeffProduct::one();
        for (idx, picks) in &parts {
            for p in picks {
                co.push(atom_from(idx, *p));
            }
        }
        let b = Binding::new().with_spin(&Spin::new(ns, nu)).with_sep(1, &SepPoint::new(2 * n1 + ns.rem_euclid(2), nu1));
        if let (Ok(v), Ok(w)) = (co.eval_regular(&b), co.simplify().eval_regular(&b)) {
            if v.is_finite() && w.is_finite() {
                prop_assert!((v - w).norm() <= 1e-10 * (1.0 + v.norm()), "{} vs {}", v, w);
            }
        }
    }
}
