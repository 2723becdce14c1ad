use std::path::PathBuf;
use std::process::{Command, Output};

fn sl2c(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2c")).args(args).output().expect("spawn sl2c")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sl2c-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_primitives_passes() {
    let o = sl2c(&["verify", "primitives"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn impossible_tolerance_fails_with_one() {
    let o = sl2c(&["verify", "primitives", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(sl2c(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(sl2c(&["compute", "energy", "--grid", "nu=1:0"]).status.code(), Some(2));
    assert_eq!(sl2c(&["compute", "energy", "--ns", "0.3"]).status.code(), Some(2));
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(sl2c(&["verify", "primitives", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn derive_prints_trace_and_coefficient() {
    let o = sl2c(&["derive", "exchange2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("step 2: chain z1"));
    assert!(s.contains("coefficient: pi^2 * (x1 - x2)^-1 * (xb1 - xb2)^-1"));
}

#[test]
fn config_file_sits_below_flags() {
    let cfg = scratch("energy.cfg");
    std::fs::write(&cfg, "# defaults\nns = -1\ngrid = n=0,nu=0\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&sl2c(&["compute", "energy", "--config", c]));
    assert_eq!(from_file.lines().count(), 1);
    assert!(from_file.contains("\"status\":\"ok\""));
    let flagged = stdout(&sl2c(&["compute", "energy", "--config", c, "--format", "csv"]));
    assert!(flagged.contains("# ns = -1"));
    assert!(flagged.contains("n_1,nu_1,value,status"));
}

#[test]
fn out_file_is_written() {
    let out = scratch("table.csv");
    let o = sl2c(&["compute", "pairwise", "--grid", "n=0,nu=0:0.2:0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("n_1,nu_1,value_re,value_im,status"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}
