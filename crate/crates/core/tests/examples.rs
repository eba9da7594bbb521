//! Worked examples through the public API.

use samuel_core::equivalence::{make_irredundant, projectively_equivalent, recover_valuations, Equivalence, PairsOracle};
use samuel_core::exactnum::ceil_mul;
use samuel_core::filtration::mono;
use samuel_core::multiplicity::{colength, filtration_value, multiplicity_estimate, multiplicity_exact, saturation_check};
use samuel_core::samuel::{nubar, nubar_estimate, rees_graded_integral_1var, NubarKind};
use samuel_core::wire::parse_filtration;
use samuel_core::{ExactReal, Extended, Filtration, MonomialIdeal, MonomialValuation, Order, SupportPoly};

fn q(s: &str) -> ExactReal {
    s.parse().unwrap()
}

fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
    MonomialIdeal::new(n, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
}

fn val(w: &[u64]) -> MonomialValuation {
    MonomialValuation::new(w.to_vec()).unwrap()
}

fn dv(ps: &[(&[u64], &str)]) -> Filtration {
    Filtration::discrete_valued(ps.iter().map(|(w, a)| (val(w), q(a))).collect()).unwrap()
}

fn pairs(ps: &[(&[u64], &str)]) -> Vec<(MonomialValuation, ExactReal)> {
    ps.iter().map(|(w, a)| (val(w), q(a))).collect()
}

#[test]
fn exact_numbers() {
    let s2 = q("(0+1*sqrt(2))/1");
    assert_eq!(ceil_mul(&q("3/2"), 3).unwrap(), 5);
    assert_eq!(ceil_mul(&s2, 2).unwrap(), 3);
    assert_eq!(ceil_mul(&s2, 3).unwrap(), 5);
    assert!(q("7/5") < s2);
    assert!(q("3/2") > s2);
    assert_eq!(s2, q("(0+1*sqrt(2))/1"));
    assert!(q("(0+1*sqrt(3))/1").try_cmp(&s2).is_err());
}

#[test]
fn ideals() {
    let i = ideal(2, &[&[2, 0], &[0, 3]]);
    assert!(i.contains_monomial(&[2, 1]));
    assert!(!i.contains_monomial(&[1, 2]));
    assert!(MonomialIdeal::unit(2).contains_monomial(&[0, 0]));
    assert_eq!(ideal(2, &[&[1, 0], &[0, 1]]).power(2), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    assert_eq!(i.power(2), ideal(2, &[&[4, 0], &[2, 3], &[0, 6]]));
    assert_eq!(ideal(2, &[&[2, 0], &[0, 2]]).integral_closure().unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    assert_eq!(
        ideal(2, &[&[3, 0], &[0, 3]]).integral_closure().unwrap(),
        ideal(2, &[&[3, 0], &[2, 1], &[1, 2], &[0, 3]])
    );
    assert_eq!(i.np_value(&[1, 1]).unwrap(), q("5/6"));
    assert_eq!(i.np_value(&[2, 0]).unwrap(), q("1"));
    assert_eq!(ideal(1, &[&[1]]).np_value(&[4]).unwrap(), q("4"));
}

#[test]
fn valuations() {
    let two = SupportPoly::new(2, [vec![1, 0], vec![0, 3]]).unwrap();
    assert_eq!(val(&[1, 2]).value(&mono(&[1, 1])).unwrap(), Extended::Finite(3));
    assert_eq!(val(&[2, 1]).value(&two).unwrap(), Extended::Finite(2));
    assert_eq!(val(&[2, 1]).value(&SupportPoly::zero(2)).unwrap(), Extended::Infinity);
    assert_eq!(val(&[1, 1]).valuation_ideal(&q("2")).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    assert_eq!(val(&[1, 2]).valuation_ideal(&q("2")).unwrap(), ideal(2, &[&[2, 0], &[0, 1]]));
    assert_eq!(val(&[1, 2]).valuation_ideal(&q("(0+1*sqrt(2))/1")).unwrap(), ideal(2, &[&[2, 0], &[0, 1]]));
    let i = ideal(2, &[&[2, 0], &[0, 3]]);
    assert_eq!(val(&[1, 1]).value_of_ideal(&i).unwrap(), 2);
    assert_eq!(val(&[3, 1]).value_of_ideal(&i).unwrap(), 3);
    assert_eq!(val(&[1, 1]).value_of_ideal(&MonomialIdeal::unit(2)).unwrap(), 0);
}

#[test]
fn filtrations() {
    let two = dv(&[(&[1, 2], "1"), (&[2, 1], "1")]);
    assert_eq!(Filtration::adic(ideal(2, &[&[1, 0], &[0, 1]])).level(2).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    assert_eq!(two.level(2).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    let stair = Filtration::stair_one_var(q("(0+1*sqrt(2))/1"), 1).unwrap();
    assert_eq!(stair.level(2).unwrap(), ideal(1, &[&[4]]));
    assert_eq!(two.order(&mono(&[1, 0])).unwrap(), Order::Finite(1));
    assert_eq!(dv(&[(&[1, 2], "2"), (&[2, 1], "1")]).order(&mono(&[1, 0])).unwrap(), Order::Finite(0));
    let b = dv(&[(&[1, 1], "1")]).bracket_twist(&q("2")).unwrap();
    assert_eq!(b, dv(&[(&[1, 1], "2")]));
    assert_eq!(b.level(1).unwrap(), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]));
    assert_eq!(two.bracket_twist(&q("1")).unwrap(), two);
}

#[test]
fn samuel_function() {
    let two = dv(&[(&[1, 2], "1"), (&[2, 1], "1")]);
    let r = nubar(&two, &mono(&[1, 1])).unwrap();
    assert_eq!(r.to_string(), "3/1 (exact)");
    let adic = Filtration::adic(ideal(2, &[&[2, 0], &[0, 3]]));
    assert_eq!(nubar(&adic, &mono(&[1, 1])).unwrap().value, Extended::Finite(q("5/6")));
    let stair = Filtration::stair_one_var(q("1"), 2).unwrap();
    let est = nubar_estimate(&stair, &mono(&[1]), 10).unwrap();
    assert_eq!((est.kind, est.witness_n), (NubarKind::LowerBound, Some(10)));
    assert_eq!(est.to_string(), ">= 4/5 (witness n=10)");
    let one = nubar_estimate(&two, &mono(&[1, 0]), 1).unwrap();
    assert_eq!(one.value, Extended::Finite(q("1")));
    let principal = Filtration::adic(ideal(1, &[&[1]]));
    assert_eq!(nubar_estimate(&principal, &mono(&[2]), 3).unwrap().value, Extended::Finite(q("2")));
}

#[test]
fn rees_lab() {
    for (p, r) in [(1u64, 1u64), (1, 2), (2, 3)] {
        assert!(!rees_graded_integral_1var(&ExactReal::ratio(p, r).unwrap(), 1, p, r).unwrap().integral);
    }
    let r = rees_graded_integral_1var(&q("(0+1*sqrt(2))/1"), 1, 2, 1).unwrap();
    assert!(r.integral);
    let r = rees_graded_integral_1var(&q("3/2"), 0, 5, 3).unwrap();
    assert_eq!((r.integral, r.witness_d), (true, Some(1)));
}

#[test]
fn equivalence_and_recovery() {
    assert_eq!(make_irredundant(pairs(&[(&[1, 1], "1"), (&[1, 2], "1")])).unwrap().pairs(), &pairs(&[(&[1, 1], "1")])[..]);
    assert_eq!(make_irredundant(pairs(&[(&[1, 2], "1"), (&[2, 1], "1")])).unwrap().pairs().len(), 2);
    assert_eq!(make_irredundant(pairs(&[(&[2, 2], "2")])).unwrap().pairs(), &pairs(&[(&[1, 1], "1")])[..]);

    let eq = projectively_equivalent(&dv(&[(&[1, 1], "1")]), &dv(&[(&[1, 1], "3")])).unwrap();
    assert_eq!(eq.to_string(), "equivalent, alpha = 3/1");
    let s2 = "(0+1*sqrt(2))/1";
    let eq = projectively_equivalent(&dv(&[(&[1, 2], "1"), (&[2, 1], "1")]), &dv(&[(&[1, 2], s2), (&[2, 1], s2)])).unwrap();
    assert_eq!(eq, Equivalence::Equivalent { alpha: q(s2) });
    let ne = projectively_equivalent(&dv(&[(&[1, 2], "1")]), &dv(&[(&[2, 1], "1")])).unwrap();
    assert!(matches!(ne, Equivalence::NotEquivalent { counterexample: Some(_), .. }));

    let hidden = pairs(&[(&[1, 2], "1"), (&[2, 1], "1")]);
    let rep = recover_valuations(&PairsOracle::new(hidden.clone()).unwrap(), 6).unwrap();
    assert_eq!(rep.pairs(), &hidden[..]);
    let rep = recover_valuations(&PairsOracle::new(pairs(&[(&[1, 1], "1"), (&[1, 2], "1")])).unwrap(), 4).unwrap();
    assert_eq!(rep.pairs(), &pairs(&[(&[1, 1], "1")])[..]);
}

#[test]
fn multiplicities() {
    assert_eq!(colength(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap(), 4);
    assert_eq!(colength(&ideal(2, &[&[1, 0], &[0, 1]])).unwrap(), 1);
    assert_eq!(colength(&dv(&[(&[1, 2], "1")]).level(4).unwrap()).unwrap(), 6);
    assert_eq!(multiplicity_exact(&dv(&[(&[1, 1], "1")])).unwrap(), q("1"));
    assert_eq!(multiplicity_exact(&dv(&[(&[1, 2], "1")])).unwrap(), q("1/2"));
    let est = multiplicity_estimate(&Filtration::adic(ideal(2, &[&[1, 0], &[0, 1]])), 50).unwrap();
    assert_eq!(ExactReal::from_rational(est.estimate), q("51/50"));
    let v = val(&[1, 1]);
    assert_eq!(filtration_value(&v, &dv(&[(&[1, 1], "1")]), 10).unwrap().exact, Some(q("1")));
    assert_eq!(filtration_value(&v, &dv(&[(&[1, 2], "1")]), 10).unwrap().exact, Some(q("1/2")));
    let rep = saturation_check(&dv(&[(&[1, 1], "1")]), &[val(&[1, 2]), val(&[2, 1])], 20).unwrap();
    assert!(rep.all_equal());
}

#[test]
fn wire_format() {
    let f = parse_filtration(r#"{"type":"dv","pairs":[{"w":[1,2],"a":"1"},{"w":[2,1],"a":"1"}]}"#).unwrap();
    assert_eq!(f, dv(&[(&[1, 2], "1"), (&[2, 1], "1")]));
    let err = parse_filtration("{").unwrap_err();
    assert_eq!(err.kind(), samuel_core::ErrorKind::Parse);
}
