//! Pointwise identities between differential operators and integral kernels:
//! intertwining of the layer operators and the Baxter difference equations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diagram::{build_baxter, build_lambda, Diagram, Family, LambdaFamily, VId, VKind};
use crate::powexpr::{kernel_identity_residual, PowExpr, SampleConfig};
use crate::specialfn::{SepPoint, Spin};
use crate::symbolic::{Affine, Binding, CRat, Poly, Sym};
use crate::weyl::{monodromy, Sector, WeylElement};
use crate::{c, Result};

/// Threshold on the pointwise relative residual.
pub const KERNEL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelCheck {
    pub name: String,
    pub n: usize,
    pub sector: Sector,
    pub residual: f64,
}

impl KernelCheck {
    pub fn passed(&self) -> bool {
        self.residual <= KERNEL_TOL
    }
}

/// Kernel of a diagram as a function of all its coordinate vertices.
pub fn kernel_of(d: &Diagram) -> Result<PowExpr> {
    let mut k = d.clone();
    for v in k.vertices.values_mut() {
        if v.kind == VKind::Internal {
            v.kind = VKind::External;
        }
    }
    k.to_powexpr()
}

/// Spin, separated variable and spectral parameter used by the kernel checks.
/// Half-integer `n_s` exercises the sign conventions hardest.
pub fn kernel_binding() -> Binding {
    let spin = Spin::new(1, 0.27);
    let x = SepPoint::new(-1, 0.41);
    Binding::new().with_spin(&spin).with_sep(1, &x).with_pair(Sym::U, c(0.31, -0.25), c(0.31, 0.25))
}

fn sym(s: Sym, sector: Sector) -> Sym {
    match sector {
        Sector::Holo => s.holo(),
        Sector::Anti => s.holo().bar(),
    }
}

fn entry(n: usize, sector: Sector, e: (usize, usize)) -> Result<WeylElement> {
    Ok(monodromy(n as u8, sector, Sym::U)?.get(e.0, e.1).clone())
}

fn labels(d: &Diagram, p: &str, n: usize) -> Result<Vec<VId>> {
    (1..=n).map(|k| d.by_label(&format!("{p}{k}"))).collect()
}

/// `X_N(u) Λ_N = (u − x) Λ_N X_{N−1}(u)` on the kernel, with `X = B` for the plain
/// layer and `X = A` for the tilde layer.
pub fn intertwining(family: LambdaFamily, n: usize, sector: Sector, cfg: &SampleConfig) -> Result<KernelCheck> {
    let (e, name) = match family {
        LambdaFamily::Tilde => ((0, 0), "A-intertwining"),
        _ => ((0, 1), "B-intertwining"),
    };
    let d = build_lambda(n, family, 1)?;
    let k = kernel_of(&d)?;
    let z = labels(&d, "z", n)?;
    let w = labels(&d, "w", n - 1)?;
    let lhs = k.apply_weyl(&entry(n, sector, e)?, |s| z[s as usize - 1]);
    let factor = Poly::sym(sym(Sym::U, sector)) - Poly::sym(sym(Sym::X(1), sector));
    let inner = entry(n - 1, sector, e)?.transpose();
    let rhs = k.apply_weyl(&inner, |s| w[s as usize - 1]).scale(&factor);
    let residual = kernel_identity_residual(&lhs, &rhs, &kernel_binding(), cfg)?;
    Ok(KernelCheck { name: name.into(), n, sector, residual })
}

/// Monodromy entry, sign of the shift and target kernel of each family's difference
/// equation `X_N(u) Q(u) = (u ± is)^N Q'(u ± i)`.
fn difference_data(family: Family) -> ((usize, usize), i128, Family) {
    match family {
        Family::A => ((0, 0), -1, Family::A),
        Family::B => ((0, 1), 1, Family::B),
        Family::C => ((1, 0), 1, Family::C),
        Family::D => ((1, 1), 1, Family::D),
    }
}

/// Residual of `X_N(u) Q_family(u) = (u ± is)^N Q_target(u ± i)` in one sector.
pub fn baxter_difference(family: Family, target: Family, n: usize, sector: Sector, cfg: &SampleConfig) -> Result<KernelCheck> {
    let (e, sg, _) = difference_data(family);
    let q = kernel_of(&build_baxter(family, n)?)?;
    let d = build_baxter(family, n)?;
    let z = labels(&d, "z", n)?;
    let lhs = q.apply_weyl(&entry(n, sector, e)?, |s| z[s as usize - 1]);
    let u = sym(Sym::U, sector);
    let shift = CRat::imag(sg);
    let qt = kernel_of(&build_baxter(target, n)?)?.subst(u, &(Affine::sym(u) + Affine::constant(shift)));
    let base = Poly::sym(u) + Poly::sym(sym(Sym::S, sector)).scale(shift);
    let rhs = qt.scale(&base.pow(n as u32));
    let residual = kernel_identity_residual(&lhs, &rhs, &kernel_binding(), cfg)?;
    let name = if target == family {
        format!("Q_{} difference", family.name())
    } else {
        format!("Q_{} difference with Q_{} on the right", family.name(), target.name())
    };
    Ok(KernelCheck { name, n, sector, residual })
}

/// Difference equation of a family with its natural right-hand side.
pub fn baxter_natural(family: Family, n: usize, sector: Sector, cfg: &SampleConfig) -> Result<KernelCheck> {
    baxter_difference(family, difference_data(family).2, n, sector, cfg)
}
