use sl2c_core::symbolic::{CRat, Poly, Sym};
use sl2c_core::weyl::*;

fn holo(k: u8) -> Site {
    Site::holo(k)
}

fn i() -> Poly {
    Poly::constant(CRat::i())
}

#[test]
fn sl2_relations_per_site_and_total() {
    for sector in [Sector::Holo, Sector::Anti] {
        let s = Site { k: 1, sector };
        assert_eq!(s_plus(s).commutator(&s_minus(s)), s0(s).scale(&Poly::int(2)));
        assert_eq!(s0(s).commutator(&s_plus(s)), s_plus(s));
        assert_eq!(s0(s).commutator(&s_minus(s)), -s_minus(s));
        for n in 2..=4u8 {
            let (p, m, z) = (total(n, sector, s_plus), total(n, sector, s_minus), total(n, sector, s0));
            assert_eq!(p.commutator(&m), z.scale(&Poly::int(2)));
            assert_eq!(z.commutator(&p), p);
            assert_eq!(z.commutator(&m), -m);
        }
    }
}

#[test]
fn sectors_commute() {
    let a = s_plus(Site::anti(1));
    assert!(s_minus(holo(1)).commutator(&a).is_zero());
}

#[test]
fn lax_entries() {
    let l = lax(holo(1), Sym::U);
    assert_eq!(l.get(0, 1), &s_minus(holo(1)).scale(&i()));
    assert_eq!(l.get(0, 1), &WeylElement::d(holo(1)).scale(&(-i())));
    assert_eq!(l.get(0, 0), &(WeylElement::sym(Sym::U) + s0(holo(1)).scale(&i())));
    let tr = l.get(0, 0).clone() + l.get(1, 1).clone();
    assert_eq!(tr, WeylElement::sym(Sym::U).scale(&Poly::int(2)));
}

#[test]
fn monodromy_examples() {
    let t1 = monodromy(1, Sector::Holo, Sym::U).unwrap();
    assert_eq!(t1, lax(holo(1), Sym::U));
    let t2 = monodromy(2, Sector::Holo, Sym::U).unwrap();
    let b1 = t2.get(0, 1).coeff_of(Sym::U, 1);
    assert_eq!(b1, total(2, Sector::Holo, s_minus).scale(&i()));
    assert_eq!(t2.get(0, 0).coeff_of(Sym::U, 2), WeylElement::one());
    // A_N = u^N + i u^{N-1} S_0 + …
    assert_eq!(t2.get(0, 0).coeff_of(Sym::U, 1), total(2, Sector::Holo, s0).scale(&i()));
    // B_2(u) = iu(S₋¹+S₋²) − S₀¹S₋² + S₋¹S₀²
    let b = t2.get(0, 1).coeff_of(Sym::U, 0);
    let expect = s_minus(holo(1)).mul(&s0(holo(2))) - s0(holo(1)).mul(&s_minus(holo(2)));
    assert_eq!(b, expect);
}

#[test]
fn fcr_vanishes() {
    for n in 1..=3u8 {
        for sector in [Sector::Holo, Sector::Anti] {
            let r = fcr_residual(n, sector).unwrap();
            assert!(r.iter().flatten().all(|w| w.is_zero()), "N={n}");
        }
    }
}

#[test]
fn same_entry_commutes() {
    for n in 1..=3u8 {
        let tu = monodromy(n, Sector::Holo, Sym::U).unwrap();
        let tv = monodromy(n, Sector::Holo, Sym::V).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(tu.get(i, j).commutator(tv.get(i, j)).is_zero(), "N={n} {}", entry_name(i, j));
            }
        }
    }
}

#[test]
fn a_coefficients_commute_with_total_s0() {
    for n in 1..=3u8 {
        let t = monodromy(n, Sector::Holo, Sym::U).unwrap();
        let z = total(n, Sector::Holo, s0);
        for k in 0..=n as u32 {
            let ak = t.get(0, 0).coeff_of(Sym::U, k);
            assert!(z.commutator(&ak).is_zero(), "N={n} k={k}");
        }
    }
}

#[test]
fn transpose_is_involution_and_antihomomorphism() {
    let a = s_plus(holo(1)).mul(&s0(holo(2)));
    let b = s_minus(holo(1)) + s0(holo(1));
    assert_eq!(a.transpose().transpose(), a);
    assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    assert_eq!(WeylElement::d(holo(1)).transpose(), -WeylElement::d(holo(1)));
}

#[test]
fn term_cap_is_enforced() {
    assert!(matches!(monodromy_capped(3, Sector::Holo, Sym::U, 10), Err(sl2c_core::Error::TermCap(_))));
}
