use super::*;
use crate::ground::{qf, Q};
use crate::presentation::derives;

fn b() -> DerivationBudget {
    DerivationBudget::default()
}

fn tv(n: i64, d: i64) -> GroundValue {
    GroundValue::rational(GroundTag::Trop, qf(n, d)).unwrap()
}

fn at(x: GroundValue, y: GroundValue) -> BTreeMap<String, GroundValue> {
    [("x".to_string(), x), ("y".to_string(), y)].into()
}

fn line() -> Presentation {
    Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x + y + 1 == 0").unwrap()
}

fn conic() -> Presentation {
    Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x^2 + y^2 + 1 == 0").unwrap()
}

fn triv() -> BaseValuation {
    BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop).unwrap()
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn bend_of_the_line() {
    let bp = bend(&line(), &triv(), GroundTag::Trop).unwrap();
    assert_eq!(bp.underlying.subaddition.len(), 3);
    assert!(bp.complete);
    assert!(point_in_trop(&bp, &at(tv(1, 1), tv(1, 1))).unwrap());
    assert!(point_in_trop(&bp, &at(tv(4, 1), tv(4, 1))).unwrap());
    assert!(!point_in_trop(&bp, &at(tv(2, 1), tv(1, 1))).unwrap());
    assert!(matches!(bend(&line(), &triv(), GroundTag::Rat), Err(Error::NotIdempotentTarget(_))));
}

#[test]
fn bend_agrees_with_positive_tropicalization() {
    for p in [line(), conic()] {
        let v = bend_matches_tropicalization(&p, &triv(), GroundTag::Trop, b()).unwrap();
        assert!(v.is_proved(), "{v:?}");
    }
    let (tp, complete) = trop_tp(&line(), &triv(), GroundTag::Trop).unwrap();
    assert!(complete);
    assert!(derives(&tp, &tp.parse_relation("0 <= x").unwrap(), b()).is_proved());
}

#[test]
fn giansiracusa_circuits() {
    let f = line().subaddition[0].lhs.clone();
    let c = ideal_circuits(&vars(&["x", "y"]), std::slice::from_ref(&f), GroundTag::Rat, 1).unwrap();
    assert_eq!(c.len(), 1);
    let gg = gg_congruence(&vars(&["x", "y"]), std::slice::from_ref(&f), &triv(), GroundTag::Trop, 1).unwrap();
    let bp = bend(&line(), &triv(), GroundTag::Trop).unwrap();
    assert!(congruence_equiv(&gg, &bp.underlying, b()).unwrap().is_proved());
    assert!(matches!(
        gg_congruence(&vars(&["x", "y"]), &[conic().subaddition[0].lhs.clone()], &triv(), GroundTag::Trop, 1),
        Err(Error::DegreeBoundTooSmall(_))
    ));
    // every circuit at degree 2 lies in the ideal
    let c2 = ideal_circuits(&vars(&["x", "y"]), &[f], GroundTag::Rat, 2).unwrap();
    assert!(c2.len() > 1);
    for g in c2 {
        assert!(derives(&line(), &Relation::eq(g, FormalSum::zero()), b()).is_proved());
    }
}

#[test]
fn tropical_line_and_conic() {
    let x = tropical_hypersurface(&line().subaddition[0].lhs, &vars(&["x", "y"]), &triv()).unwrap();
    assert_eq!(x.vertices, vec![vec![Q::from_integer(0.into()); 2]]);
    assert_eq!(x.cells.len(), 3);
    assert!(x.cells.iter().all(|c| c.weight == 1 && c.rays.len() == 1));
    assert!(x.is_balanced());
    let c = tropical_hypersurface(&conic().subaddition[0].lhs, &vars(&["x", "y"]), &triv()).unwrap();
    assert_eq!(c.cells.len(), 3);
    assert!(c.cells.iter().all(|c| c.weight == 2));
    assert!(c.is_balanced());
    let svg = render_svg(&c).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"viewBox="0 0 600 600""#));
}

#[test]
fn two_adic_line_has_its_vertex_at_minus_one() {
    let p = Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x + y + 2 == 0").unwrap();
    let v = BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop).unwrap();
    let x = tropical_hypersurface(&p.subaddition[0].lhs, &vars(&["x", "y"]), &v).unwrap();
    assert_eq!(x.vertices, vec![vec![qf(-1, 1), qf(-1, 1)]]);
}

#[test]
fn surfaces_and_points() {
    let p = Presentation::new(GroundTag::Rat, &["x", "y", "z"]);
    let f = p.parse_sum("x + y + z + 1").unwrap();
    let s = tropical_hypersurface(&f, &vars(&["x", "y", "z"]), &triv()).unwrap();
    assert_eq!(s.cells.len(), 6);
    assert!(s.is_balanced(), "{:?}", s.balancing_defects());
    let f = p.parse_sum("x^2 + y^2 + 2*z + x*y*z").unwrap();
    let s = tropical_hypersurface(&f, &vars(&["x", "y", "z"]), &triv()).unwrap();
    assert!(s.is_balanced(), "{:?}", s.balancing_defects());
    let q = Presentation::new(GroundTag::Rat, &["x"]);
    let f = q.parse_sum("x^2 + 3*x + 2").unwrap();
    let v = BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop).unwrap();
    let s = tropical_hypersurface(&f, &vars(&["x"]), &v).unwrap();
    assert_eq!(s.cells.iter().map(|c| c.weight).sum::<u64>(), 2);
    assert!(matches!(tropical_hypersurface(&q.parse_sum("x").unwrap(), &vars(&["x"]), &v), Err(Error::TooFewTerms)));
}

#[test]
fn initial_forms() {
    let p = Presentation::new(GroundTag::Trop, &["x", "y"]);
    let f = p.parse_sum("x + y + 1").unwrap();
    let i = mr_initial_form(&f, &at(tv(2, 1), tv(2, 1))).unwrap();
    assert_eq!(i.len(), 2);
    let i = mr_initial_form(&f, &at(tv(1, 1), tv(1, 1))).unwrap();
    assert_eq!(i.len(), 3);
}

#[test]
fn weights_on_line_and_conic() {
    let bl = bend(&line(), &triv(), GroundTag::Trop).unwrap();
    let bc = bend(&conic(), &triv(), GroundTag::Trop).unwrap();
    for w in [at(tv(2, 1), tv(2, 1)), at(tv(1, 4), tv(1, 1)), at(tv(1, 1), tv(1, 8))] {
        assert_eq!(mr_weight(&bl, &w, 4).unwrap(), 1);
        assert_eq!(mr_weight(&bc, &w, 4).unwrap(), 2);
    }
    assert!(matches!(mr_weight(&bl, &at(tv(2, 1), tv(1, 1)), 4), Err(Error::NotInTrop)));
    assert!(matches!(mr_weight(&bl, &at(tv(1, 1), tv(1, 1)), 4), Err(Error::NotStabilized(_))));
}

#[test]
fn macpherson_fragments() {
    let f1 = Presentation::new(GroundTag::F1, &["x"]);
    let frag = macpherson_an(&f1, &KDesignation::Ground, 4, 2, b()).unwrap();
    let x = Span { generators: vec![f1.var("x")] };
    let x2 = Span { generators: vec![Monomial::power(GroundTag::F1, "x", 2)] };
    let (i, j) = (frag.index_of(&x).unwrap(), frag.index_of(&x2).unwrap());
    assert_eq!(frag.join[i][j].generators.len(), 2);
    assert_eq!(frag.product[i][i], x2);
    let v = spans_embed_tropically(&frag, &KDesignation::Ground).unwrap();
    assert!(v.is_proved(), "{v:?}");

    let q = Presentation::new(GroundTag::Rat, &[]);
    let frag = macpherson_an(&q, &KDesignation::Ground, 4, 2, b()).unwrap();
    assert_eq!(frag.spans.len(), 2);

    let qx = Presentation::new(GroundTag::Rat, &["x"]);
    let k = KDesignation::Valued(BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop).unwrap());
    let frag = macpherson_an(&qx, &k, 4, 2, b()).unwrap();
    assert_eq!(frag.spans.len(), 1 + 15 + 90);
    assert!(spans_embed_tropically(&frag, &k).unwrap().is_proved());
}
