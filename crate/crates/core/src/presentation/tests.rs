use super::*;
use crate::ground::{qf, GroundTag};

fn b() -> DerivationBudget {
    DerivationBudget::default()
}

fn nonlocal() -> Presentation {
    Presentation::new(GroundTag::Bool, &["T"]).rel("T + 1 == T").unwrap().rel("T == T^2").unwrap()
}

#[test]
fn reflexivity() {
    let p = Presentation::new(GroundTag::F1, &["x"]);
    let r = p.parse_relation("x <= x").unwrap();
    assert!(derives(&p, &r, b()).is_proved());
}

#[test]
fn boolean_idempotency_is_implicit() {
    let p = Presentation::new(GroundTag::Bool, &[]);
    let r = p.parse_relation("1 + 1 + 1 == 1").unwrap();
    assert!(derives(&p, &r, b()).is_proved());
}

#[test]
fn integers_are_trivially_ordered() {
    let p = Presentation::new(GroundTag::Int, &[]);
    let r = p.parse_relation("1 <= 1 + 1").unwrap();
    assert!(derives(&p, &r, b()).is_disproved());
}

#[test]
fn nonlocal_underlying_set() {
    let p = nonlocal();
    let t = p.var("T");
    assert!(equal_in_quotient(&p, &t, &Monomial::power(GroundTag::Bool, "T", 2), b()).is_proved());
    assert!(equal_in_quotient(&p, &t, &p.one(), b()).is_disproved());
    assert!(equal_in_quotient(&p, &t, &t, b()).is_proved());
}

#[test]
fn normal_forms() {
    let p = Presentation::new(GroundTag::F1, &["x"]).mon("x^2 = x^3").unwrap();
    assert_eq!(normalize_monomial(&p, &Monomial::power(GroundTag::F1, "x", 4)).unwrap(), Monomial::power(GroundTag::F1, "x", 2));
    assert!(normalize_monomial(&p, &p.zero()).unwrap().is_zero());
    let r = Presentation::new(GroundTag::Rat, &["x", "y"]).mon("3*x = y").unwrap();
    let m = r.parse_monomial("2/3*x").unwrap();
    let n = normalize_monomial(&r, &m).unwrap();
    assert_eq!(n, r.parse_monomial("2/9*y").unwrap());
    let again = normalize_monomial(&r, &n).unwrap();
    assert_eq!(again, n);
}

#[test]
fn congruence_equivalence_examples() {
    let p = nonlocal();
    assert!(congruence_equiv(&p, &p, b()).unwrap().is_proved());
    let n1 = Presentation::new(GroundTag::Nat, &[]).rel("1 + 1 == 1").unwrap();
    let n0 = Presentation::new(GroundTag::Nat, &[]);
    assert!(congruence_equiv(&n1, &n0, b()).unwrap().is_disproved());
    let other = Presentation::new(GroundTag::Bool, &["S"]);
    assert!(matches!(congruence_equiv(&p, &other, b()), Err(Error::GeneratorMismatch(_))));
}

#[test]
fn ring_membership() {
    let p = Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x + y + 1 == 0").unwrap();
    let r = p.parse_relation("x^2 + x*y + x == 0").unwrap();
    assert!(derives(&p, &r, b()).is_proved());
    let r = p.parse_relation("x == 0").unwrap();
    assert!(derives(&p, &r, b()).is_disproved());
    let z = Presentation::new(GroundTag::Int, &["x"]).rel("2*x == 0").unwrap();
    assert!(derives(&z, &z.parse_relation("4*x == 0").unwrap(), b()).is_proved());
    // x lies in the rational ideal but not in the integral one
    assert!(!derives(&z, &z.parse_relation("x == 0").unwrap(), b()).is_proved());
}

#[test]
fn tropical_search_with_coefficients() {
    let p = Presentation::new(GroundTag::Trop, &["x"]).rel("x <= 1").unwrap();
    let r = p.parse_relation("1/2*x^2 <= 1/2").unwrap();
    assert!(derives(&p, &r, b()).is_proved());
    let r = p.parse_relation("2*x <= 1").unwrap();
    let v = derives(&p, &r, b());
    assert!(v.is_disproved(), "{v:?}");
}

#[test]
fn json_round_trip() {
    let p = nonlocal();
    let q = Presentation::from_json_str(&p.to_json_string()).unwrap();
    assert_eq!(p, q);
    assert!(Presentation::from_json_str(r#"{"ground":"BOOL","generators":[],"extra":1}"#).is_err());
}

#[test]
fn prover_is_deterministic_across_threads() {
    let p = nonlocal();
    let pr = Prover::new(&p, b()).unwrap();
    let r = p.parse_relation("T^3 + 1 == T").unwrap();
    let first = pr.derives(&r);
    std::thread::scope(|s| {
        let hs: Vec<_> = (0..4).map(|_| s.spawn(|| pr.derives(&r))).collect();
        for h in hs {
            assert_eq!(h.join().unwrap(), first);
        }
    });
    assert!(first.is_proved());
}

#[test]
fn scalar_parse() {
    let p = Presentation::new(GroundTag::Rat, &["x"]);
    let m = p.parse_monomial("(-3/2)*x").unwrap();
    assert_eq!(m.coeff.to_rational().unwrap(), qf(-3, 2));
}
