use sl2c_core::diagram::MeasureFamily;
use sl2c_workbench::report::{Check, Format, Report};
use sl2c_workbench::tables::{compute, Grid, Quantity, TableSpec};
use sl2c_workbench::WbError;

fn spec(what: Quantity, n: usize, ns: f64, grid: &str) -> TableSpec {
    let mut s = TableSpec::new(what);
    s.n = n;
    s.ns = ns;
    s.grid = grid.parse().unwrap();
    s.grid_text = grid.into();
    s
}

#[test]
fn grid_parsing() {
    let g: Grid = "nu=-2:2:0.1,n=-2:2".parse().unwrap();
    assert_eq!(g.nu.len(), 41);
    assert_eq!(g.n, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    assert!(g.nu.contains(&0.0));
    assert!((g.nu[40] - 2.0).abs() < 1e-12);
    let one: Grid = "nu=0.3".parse().unwrap();
    assert_eq!((one.n, one.nu), (vec![0.0], vec![0.3]));
    for bad in ["nu", "x=1", "nu=2:1", "nu=0:1:0", "nu=a"] {
        assert!(matches!(bad.parse::<Grid>(), Err(WbError::Config(_))), "{bad}");
    }
}

#[test]
fn energy_profile_vanishes_at_origin() {
    let t = compute(&spec(Quantity::Energy, 1, -1.0, "nu=-2:2:0.1,n=-2:2")).unwrap();
    assert_eq!(t.rows.len(), 205);
    let zero = t.rows.iter().find(|r| r.n == [0.0] && r.nu == [0.0]).unwrap();
    assert_eq!(zero.status, "ok");
    assert!(zero.value.unwrap().norm() < 1e-10);
    // ψ(½+(n+1)/2+iν) at n = −2 passes through the pole at ν = 0
    let pole = t.rows.iter().find(|r| r.n == [-2.0] && r.nu == [0.0]).unwrap();
    assert_eq!((pole.status, pole.value), ("pole", None));
}

#[test]
fn parity_rows_are_marked() {
    let t = compute(&spec(Quantity::Energy, 1, 0.5, "n=0:1")).unwrap();
    assert!(t.rows.iter().all(|r| r.status == "parity"));
    let csv = t.render(Format::Csv).unwrap();
    assert!(csv.lines().any(|l| l == "0,0,,parity"));
}

#[test]
fn measure_over_two_sites() {
    let mut s = spec(Quantity::Measure, 2, 0.0, "n=0:2:2,nu=0");
    s.family = MeasureFamily::A;
    let t = compute(&s).unwrap();
    assert_eq!(t.rows.len(), 4);
    let v = t.rows[1].value.unwrap().re;
    let want = (2.0 * std::f64::consts::PI).powi(-2) * std::f64::consts::PI.powi(-4);
    assert!((v - want).abs() < 1e-15 * want, "{v} vs {want}");
    assert_eq!(t.rows[0].value.unwrap().re, 0.0);
    let csv = t.render(Format::Csv).unwrap();
    assert!(csv.contains("\nn_1,n_2,nu_1,nu_2,value,status\n"));
    assert!(csv.starts_with("# sl2c compute measure\n"));
}

#[test]
fn qd_has_complex_columns() {
    let mut s = spec(Quantity::QD, 1, 0.0, "n=0,nu=0.2");
    s.nus = 0.3;
    s.u_nu = 0.45;
    let t = compute(&s).unwrap();
    let v = t.rows[0].value.unwrap();
    assert!((v - sl2c_core::C64::new(7.919_039_433_971_742, 9.757_176_069_982_044)).norm() < 1e-10);
    let csv = t.render(Format::Csv).unwrap();
    assert!(csv.contains("n_1,nu_1,value_re,value_im,status"));
    let json = t.render(Format::Json).unwrap();
    let rec: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
    assert_eq!(rec["id"], "qD[0]");
    assert_eq!(rec["pass"], true);
    assert_eq!(rec["value"].as_array().unwrap().len(), 2);
}

#[test]
fn report_renderings() {
    let mut r = Report::new("demo");
    r.param("seed", 42);
    r.push(Check::new("a", "x=1", 1e-12, 1e-10));
    r.push(Check::new("b", "x=\"2\", y", 1e-3, 1e-4));
    r.note("resolved");
    assert!(!r.passed());
    assert_eq!(r.failures(), 1);
    let text = r.render(Format::Text).unwrap();
    assert!(text.contains("FAIL b"));
    assert!(text.ends_with("2 checks, 1 failed\n"));
    let csv = r.render(Format::Csv).unwrap();
    let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "id,inputs,residual,tol,pass");
    assert_eq!(body[2], "b,\"x=\"\"2\"\", y\",1e-3,1e-4,false");
    let json = r.render(Format::Json).unwrap();
    let lines: Vec<serde_json::Value> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["pass"], true);
    assert_eq!(lines[2]["note"], "resolved");
}
