//! Tabulation of spectral quantities over `(n, ν)` grids.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use sl2c_core::diagram::MeasureFamily;
use sl2c_core::specialfn::{SepPoint, Spin};
use sl2c_core::spectral::{baxter_eigenvalue_d, energy, measure, pairwise_energy, ConformalSpinPair, EnergyVariant, SpectrumPoint};
use sl2c_core::{Error, C64};

use crate::report::Format;
use crate::WbError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    Measure,
    #[value(name = "qD")]
    QD,
    Energy,
    Pairwise,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Measure => "measure",
            Quantity::QD => "qD",
            Quantity::Energy => "energy",
            Quantity::Pairwise => "pairwise",
        }
    }

    fn complex(self) -> bool {
        matches!(self, Quantity::QD | Quantity::Pairwise)
    }
}

/// Values of `n` and `ν` for one site; the table runs over their product on every site.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub n: Vec<f64>,
    pub nu: Vec<f64>,
}

fn parse_range(key: &str, text: &str) -> Result<Vec<f64>, WbError> {
    let bad = || WbError::Config(format!("bad range for {key}: {text:?} (expected v or lo:hi[:step])"));
    let parts: Vec<f64> = text.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [lo, hi] | [lo, hi, _] => {
            let step = parts.get(2).copied().unwrap_or(1.0);
            if !(step > 0.0) || hi < lo {
                return Err(bad());
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            if count > 100_000 {
                return Err(bad());
            }
            Ok((0..count).map(|k| lo + k as f64 * step).map(|v| if v.abs() < 1e-12 { 0.0 } else { v }).collect())
        }
        _ => Err(bad()),
    }
}

impl FromStr for Grid {
    type Err = WbError;

    /// `nu=-2:2:0.1,n=-2:2`; a missing key keeps a single value 0.
    fn from_str(s: &str) -> Result<Self, WbError> {
        let mut g = Grid { n: vec![0.0], nu: vec![0.0] };
        for item in s.split(',').filter(|x| !x.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| WbError::Config(format!("grid entry {item:?} has no '='")))?;
            match k.trim() {
                "n" => g.n = parse_range("n", v)?,
                "nu" => g.nu = parse_range("nu", v)?,
                other => return Err(WbError::Config(format!("unknown grid key {other:?}"))),
            }
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableSpec {
    pub what: Quantity,
    /// Number of sites.
    pub n: usize,
    pub ns: f64,
    pub nus: f64,
    pub grid: Grid,
    pub grid_text: String,
    pub family: MeasureFamily,
    pub variant: EnergyVariant,
    /// Spectral parameter `u = ν_u − i n_u/2`, `ū = ν_u + i n_u/2`; `n_u` defaults to `n_s`.
    pub u_nu: f64,
    pub u_n: Option<f64>,
}

impl TableSpec {
    pub fn new(what: Quantity) -> Self {
        TableSpec {
            what,
            n: 1,
            ns: 0.0,
            nus: 0.0,
            grid: Grid { n: vec![0.0], nu: vec![0.0] },
            grid_text: String::new(),
            family: MeasureFamily::A,
            variant: EnergyVariant::S,
            u_nu: 0.17,
            u_n: None,
        }
    }

    fn spin(&self) -> Spin {
        Spin::new(half_units(self.ns), self.nus)
    }

    /// Number of separated variables per row.
    fn width(&self) -> usize {
        match (self.what, self.family) {
            (Quantity::Pairwise, _) => 1,
            (Quantity::Measure, MeasureFamily::B) => self.n.saturating_sub(1),
            _ => self.n,
        }
    }
}

fn half_units(x: f64) -> i64 {
    (2.0 * x).round() as i64
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub n: Vec<f64>,
    pub nu: Vec<f64>,
    pub value: Option<C64>,
    pub status: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub spec: TableSpec,
    pub rows: Vec<Row>,
}

fn classify(e: Error) -> Result<&'static str, WbError> {
    match e {
        Error::Pole { .. } | Error::SkippedNearPole(_) | Error::SingularPoint(_) => Ok("pole"),
        Error::Parity(_) => Ok("parity"),
        other => Err(other.into()),
    }
}

fn value_at(spec: &TableSpec, seps: &[SepPoint]) -> sl2c_core::Result<C64> {
    let spin = spec.spin();
    let pt = SpectrumPoint::new(seps.to_vec(), spin);
    if spec.what != Quantity::Pairwise {
        pt.check_parity()?;
    }
    match spec.what {
        Quantity::Measure => measure(spec.family, &pt).map(|v| C64::new(v, 0.0)),
        Quantity::Energy => energy(spec.variant, &pt).map(|v| C64::new(v, 0.0)),
        Quantity::QD => {
            let nu = spec.u_n.unwrap_or(spec.ns);
            let u = (C64::new(spec.u_nu, -nu / 2.0), C64::new(spec.u_nu, nu / 2.0));
            baxter_eigenvalue_d(u, &pt)
        }
        Quantity::Pairwise => {
            let x = seps[0];
            let j = C64::new((1.0 + x.n()) / 2.0, x.nu);
            let jb = C64::new((1.0 - x.n()) / 2.0, x.nu);
            pairwise_energy(ConformalSpinPair::new(j, jb))
        }
    }
}

/// Evaluates the quantity at every grid point, sites varying slowest-first.
pub fn compute(spec: &TableSpec) -> Result<Table, WbError> {
    if spec.n == 0 {
        return Err(WbError::Config("--n must be at least 1".into()));
    }
    let per_site: Vec<(f64, f64)> = spec.grid.n.iter().flat_map(|&n| spec.grid.nu.iter().map(move |&nu| (n, nu))).collect();
    let width = spec.width();
    let total = per_site.len().checked_pow(width as u32).filter(|&t| t <= 2_000_000);
    let total = total.ok_or_else(|| WbError::Config("grid too large for this many sites".into()))?;
    let mut rows = Vec::with_capacity(total);
    let mut digits = vec![0usize; width];
    for _ in 0..total {
        let pts: Vec<(f64, f64)> = digits.iter().map(|&d| per_site[d]).collect();
        let seps: Vec<SepPoint> = pts.iter().map(|&(n, nu)| SepPoint::new(half_units(n), nu)).collect();
        let (value, status) = match value_at(spec, &seps) {
            Ok(v) => (Some(v), "ok"),
            Err(e) => (None, classify(e)?),
        };
        rows.push(Row { n: pts.iter().map(|p| p.0).collect(), nu: pts.iter().map(|p| p.1).collect(), value, status });
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < per_site.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(Table { spec: spec.clone(), rows })
}

#[derive(Serialize)]
struct Record<'a> {
    id: String,
    inputs: String,
    value: Option<Vec<f64>>,
    status: &'a str,
    pass: bool,
}

impl Table {
    fn header(&self, out: &mut String) {
        let s = &self.spec;
        let _ = writeln!(out, "# sl2c compute {}", s.what.name());
        let _ = writeln!(out, "# n = {}", s.n);
        let _ = writeln!(out, "# ns = {}", s.ns);
        let _ = writeln!(out, "# nus = {}", s.nus);
        let _ = writeln!(out, "# grid = {}", s.grid_text);
        match s.what {
            Quantity::Measure => {
                let _ = writeln!(out, "# family = {:?}", s.family);
            }
            Quantity::Energy => {
                let _ = writeln!(out, "# variant = {}", s.variant.name());
            }
            Quantity::QD => {
                let _ = writeln!(out, "# u-nu = {}", s.u_nu);
                let _ = writeln!(out, "# u-n = {}", s.u_n.unwrap_or(s.ns));
            }
            Quantity::Pairwise => {
                let _ = writeln!(out, "# J = (1+n)/2 + i nu, Jbar = (1-n)/2 + i nu");
            }
        }
        let _ = writeln!(out, "# rows = {}", self.rows.len());
    }

    fn columns(&self) -> Vec<String> {
        let w = self.spec.width();
        let mut cols: Vec<String> = (1..=w).map(|k| format!("n_{k}")).chain((1..=w).map(|k| format!("nu_{k}"))).collect();
        if self.spec.what.complex() {
            cols.extend(["value_re".into(), "value_im".into()]);
        } else {
            cols.push("value".into());
        }
        cols.push("status".into());
        cols
    }

    fn cells(&self, r: &Row) -> Vec<String> {
        let mut cells: Vec<String> = r.n.iter().chain(&r.nu).map(|v| format!("{v}")).collect();
        let parts = if self.spec.what.complex() { 2 } else { 1 };
        match r.value {
            Some(v) => {
                cells.push(format!("{:e}", v.re));
                if parts == 2 {
                    cells.push(format!("{:e}", v.im));
                }
            }
            None => cells.extend(std::iter::repeat(String::new()).take(parts)),
        }
        cells.push(r.status.into());
        cells
    }

    pub fn render(&self, fmt: Format) -> Result<String, WbError> {
        let mut out = String::new();
        match fmt {
            Format::Csv => {
                self.header(&mut out);
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.columns())?;
                for r in &self.rows {
                    w.write_record(self.cells(r))?;
                }
                let bytes = w.into_inner().map_err(|e| WbError::Io(e.into_error()))?;
                out.push_str(&String::from_utf8_lossy(&bytes));
            }
            Format::Text => {
                self.header(&mut out);
                let _ = writeln!(out, "{}", self.columns().join("\t"));
                for r in &self.rows {
                    let _ = writeln!(out, "{}", self.cells(r).join("\t"));
                }
            }
            Format::Json => {
                for (k, r) in self.rows.iter().enumerate() {
                    let rec = Record {
                        id: format!("{}[{k}]", self.spec.what.name()),
                        inputs: format!("n={:?} nu={:?}", r.n, r.nu),
                        value: r.value.map(|v| if self.spec.what.complex() { vec![v.re, v.im] } else { vec![v.re] }),
                        status: r.status,
                        pass: r.status == "ok",
                    };
                    out.push_str(&serde_json::to_string(&rec)?);
                    out.push('\n');
                }
            }
        }
        Ok(out)
    }
}
