use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::specialfn::{SepPoint, Spin};
use crate::{Error, Result, C64};

/// Formal scalar symbols. Each holomorphic symbol has a barred partner.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    S,
    SBar,
    X(u8),
    XBar(u8),
    U,
    UBar,
    V,
    VBar,
    Eps,
    EpsBar,
    P(u8),
    PBar(u8),
    Param(u8),
    ParamBar(u8),
}

impl Sym {
    /// Partner symbol: `s ↔ s̄`, `x_k ↔ x̄_k`, ...
    pub fn bar(self) -> Sym {
        use Sym::*;
        match self {
            S => SBar,
            SBar => S,
            X(k) => XBar(k),
            XBar(k) => X(k),
            U => UBar,
            UBar => U,
            V => VBar,
            VBar => V,
            Eps => EpsBar,
            EpsBar => Eps,
            P(k) => PBar(k),
            PBar(k) => P(k),
            Param(k) => ParamBar(k),
            ParamBar(k) => Param(k),
        }
    }

    pub fn is_holo(self) -> bool {
        use Sym::*;
        matches!(self, S | X(_) | U | V | Eps | P(_) | Param(_))
    }

    /// Holomorphic member of the pair.
    pub fn holo(self) -> Sym {
        if self.is_holo() {
            self
        } else {
            self.bar()
        }
    }

    pub fn name(self) -> String {
        use Sym::*;
        match self {
            S => "s".into(),
            SBar => "sb".into(),
            X(k) => format!("x{k}"),
            XBar(k) => format!("xb{k}"),
            U => "u".into(),
            UBar => "ub".into(),
            V => "v".into(),
            VBar => "vb".into(),
            Eps => "e".into(),
            EpsBar => "eb".into(),
            P(k) => format!("p{k}"),
            PBar(k) => format!("pb{k}"),
            Param(k) => format!("t{k}"),
            ParamBar(k) => format!("tb{k}"),
        }
    }

    pub fn parse(s: &str) -> Option<Sym> {
        use Sym::*;
        let idx = |p: &str| s.strip_prefix(p).and_then(|r| r.parse::<u8>().ok());
        Some(match s {
            "s" => S,
            "sb" => SBar,
            "u" => U,
            "ub" => UBar,
            "v" => V,
            "vb" => VBar,
            "e" => Eps,
            "eb" => EpsBar,
            _ => {
                if let Some(k) = idx("xb") {
                    XBar(k)
                } else if let Some(k) = idx("x") {
                    X(k)
                } else if let Some(k) = idx("pb") {
                    PBar(k)
                } else if let Some(k) = idx("p") {
                    P(k)
                } else if let Some(k) = idx("tb") {
                    ParamBar(k)
                } else if let Some(k) = idx("t") {
                    Param(k)
                } else {
                    return None;
                }
            }
        })
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Numeric values for formal symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Binding {
    vals: BTreeMap<Sym, C64>,
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, s: Sym, v: C64) -> &mut Self {
        self.vals.insert(s, v);
        self
    }

    pub fn with(mut self, s: Sym, v: C64) -> Self {
        self.vals.insert(s, v);
        self
    }

    /// Sets both members of a pair.
    pub fn with_pair(self, s: Sym, v: C64, v_bar: C64) -> Self {
        self.with(s.holo(), v).with(s.holo().bar(), v_bar)
    }

    pub fn with_spin(self, sp: &Spin) -> Self {
        self.with_pair(Sym::S, sp.s(), sp.s_bar())
    }

    pub fn with_sep(self, k: u8, x: &SepPoint) -> Self {
        self.with_pair(Sym::X(k), x.x(), x.x_bar())
    }

    pub fn get(&self, s: Sym) -> Result<C64> {
        self.vals.get(&s).copied().ok_or_else(|| Error::UnboundVariable(s.name()))
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.vals.contains_key(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &C64)> {
        self.vals.iter()
    }
}
