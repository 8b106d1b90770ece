use proptest::prelude::*;

use super::*;
use crate::blowup::{BlowupSequence, Step};
use crate::germdyn::{EigenKind, GermNormalForm};
use crate::numerics::{int, rat};
use crate::valuation::MonomialWeights;

fn a_of(d: &KatoDatum, n: &str) -> Rational {
    d.modification().curve(n).unwrap().log_discrepancy.clone()
}

#[test]
fn family_k2_structure() {
    let d = quotient_family_datum(2).unwrap();
    assert_eq!(d.step_count(), 3);
    assert_eq!(d.base(), KatoBase::Quotient { p: 7, q: 3 });
    assert_eq!(d.correspondence()[0], ("E1".to_string(), "E2".to_string()));
    assert_eq!(d.marked_type(), Some((7, 3)));
    assert_eq!(a_of(&d, "E1"), rat(4, 7));
    assert_eq!(a_of(&d, "E2"), rat(5, 7));
    assert_eq!(d.jacobian_gap("E1").unwrap(), rat(1, 7));
}

#[test]
fn family_k3_base_chain() {
    let d = quotient_family_datum(3).unwrap();
    let KatoBase::Quotient { p, q } = d.base() else { panic!("quotient base") };
    assert_eq!((p, q), (12, 5));
    let base = d.modification().truncate(0).unwrap();
    let selfs: Vec<i64> = base.curves().iter().map(|c| c.self_intersection).collect();
    assert_eq!(selfs, vec![-3, -2, -3]);
    assert_eq!(d.jacobian_gap("E1").unwrap(), int(0));
}

#[test]
fn family_k4_and_k5() {
    assert_eq!(quotient_family_datum(4).unwrap().jacobian_gap("E1").unwrap(), rat(-1, 17));
    let d = quotient_family_datum(5).unwrap();
    let ds: Vec<String> = d.modification().exceptional_names().into_iter().filter(|n| n.starts_with('D')).collect();
    assert_eq!(ds, vec!["D1'", "D2'", "D3'", "D4'"]);
}

#[test]
fn family_rejects_small_k() {
    assert_eq!(quotient_family_datum(1), Err(KatoError::BadFamilyParameter(1)));
    assert!(jacobian_divisor_coeffs(0).is_err());
}

#[test]
fn gap_formula_for_all_k() {
    for k in 2..=50i64 {
        let d = quotient_family_datum(k).unwrap();
        assert_eq!(d.jacobian_gap("E1").unwrap(), rat(-(k - 3), 5 * k - 3), "k = {k}");
    }
}

#[test]
fn gap_outside_correspondence_is_an_error() {
    let d = quotient_family_datum(2).unwrap();
    assert_eq!(d.jacobian_gap("D1'"), Err(KatoError::NoCorrespondence("D1'".into())));
}

#[test]
fn jacobian_coefficients_examples() {
    assert_eq!(jacobian_divisor_coeffs(2).unwrap(), (rat(-3, 7), rat(-1, 7), rat(19, 7)));
    assert_eq!(jacobian_divisor_coeffs(3).unwrap(), (rat(-1, 2), rat(-1, 2), rat(5, 2)));
    assert_eq!(jacobian_divisor_coeffs(10).unwrap(), (rat(-27, 47), rat(-41, 47), rat(107, 47)));
}

#[test]
fn jacobian_coefficients_match_log_discrepancy_formulas() {
    for k in 2..=30 {
        let d = quotient_family_datum(k).unwrap();
        let (b1, b3, b) = jacobian_divisor_coeffs(k).unwrap();
        assert_eq!(b1, a_of(&d, "E1") - int(1));
        assert_eq!(b3, a_of(&d, "E3") - int(1));
        assert_eq!(b, a_of(&d, "E2") + int(2));
        for j in 1..k {
            assert_eq!(d.jacobian_curve_coefficient(&format!("D{j}")).unwrap(), b);
        }
    }
}

#[test]
fn family_surface_curves_k2() {
    let c = quotient_family_datum(2).unwrap().surface_curves().unwrap();
    let summary: Vec<(&str, i64, u32)> = c.curves.iter().map(|x| (x.id.as_str(), x.self_intersection, x.nodes)).collect();
    assert_eq!(summary, vec![("C1", -1, 1), ("C3", -2, 0), ("D1", -1, 0)]);
    assert_eq!(c.intersection_count("C1", "C3"), 1);
    assert_eq!(c.intersection_count("C3", "D1"), 1);
    assert_eq!(c.intersections.len(), 2);
}

#[test]
fn family_surface_curves_general_k() {
    for k in 2..=9i64 {
        let c = quotient_family_datum(k).unwrap().surface_curves().unwrap();
        assert_eq!(c.curves.len() as i64, k + 1);
        assert_eq!(c.curve("C3").unwrap().self_intersection, -k);
        for j in 1..k {
            assert_eq!(c.intersection_count("C3", &format!("D{j}")), 1);
            assert_eq!(c.curve(&format!("D{j}")).unwrap().self_intersection, -1);
        }
    }
}

#[test]
fn family_minimal_model_is_nodal_zero_curve() {
    for k in [2, 3, 5] {
        let c = quotient_family_datum(k).unwrap().surface_curves().unwrap();
        let m = minimal_model(&c);
        assert_eq!(m.curves.len(), 1);
        assert_eq!(m.curves[0].id, "C1");
        assert_eq!((m.curves[0].self_intersection, m.curves[0].nodes), (0, 1));
        assert!(m.intersections.is_empty());
    }
}

#[test]
fn family_classifies_as_enoki_consistently() {
    for k in 2..=12 {
        let c = quotient_family_datum(k).unwrap().surface_curves().unwrap();
        let class = classify_configuration(&c).unwrap();
        assert_eq!(class, SurfaceClass::Enoki);
        assert_eq!(class.eigen_kind(), EigenKind::Curve);
    }
}

#[test]
fn partial_gluing_is_rejected() {
    let full = quotient_family_datum(3).unwrap();
    let gluing: Vec<Glue> = full.gluing().iter().filter(|g| g.tag != "D2").cloned().collect();
    let d = KatoDatum::new(full.base(), full.modification().clone(), full.marked().clone(), gluing).unwrap();
    assert_eq!(d.surface_curves(), Err(KatoError::PartialGluing(vec!["D2'".into()])));
}

#[test]
fn empty_gluing_single_prime() {
    let seq = BlowupSequence::smooth().apply_step(Step::Initial).unwrap();
    let d = KatoDatum::new(KatoBase::Smooth, seq, MarkedRegion::FreePoint("E1".into()), Vec::new()).unwrap();
    let c = d.surface_curves().unwrap();
    assert_eq!(c, CurveConfig::rational(&[("E1", -1, 0)], &[]));
}

#[test]
fn minimal_model_rules() {
    let none = CurveConfig::rational(&[("A", -2, 0), ("B", -3, 0)], &[("A", "B")]);
    assert_eq!(minimal_model(&none), none);
    let chain = CurveConfig::rational(&[("A", -1, 0), ("B", -2, 0)], &[("A", "B")]);
    assert_eq!(minimal_model(&chain), CurveConfig::rational(&[("B", -1, 0)], &[]));
    // a curve meeting the (-1)-curve twice gains 4 and a node
    let double = CurveConfig::rational(&[("A", -1, 0), ("B", -4, 0)], &[("A", "B"), ("A", "B")]);
    assert_eq!(minimal_model(&double), CurveConfig::rational(&[("B", 0, 1)], &[]));
    // two neighbours become adjacent
    let fork = CurveConfig::rational(&[("A", -1, 0), ("B", -3, 0), ("C", -3, 0)], &[("A", "B"), ("A", "C")]);
    assert_eq!(minimal_model(&fork), CurveConfig::rational(&[("B", -2, 0), ("C", -2, 0)], &[("B", "C")]));
    // a lone (-1)-curve stays
    let lone = CurveConfig::rational(&[("A", -1, 0)], &[]);
    assert_eq!(minimal_model(&lone), lone);
}

#[test]
fn configuration_classes() {
    let enoki = CurveConfig::rational(&[("C", 0, 1)], &[]);
    assert_eq!(classify_configuration(&enoki), Some(SurfaceClass::Enoki));
    let half = CurveConfig::rational(&[("A", -3, 0), ("B", -2, 0)], &[("A", "B"), ("A", "B")]);
    assert_eq!(classify_configuration(&half), Some(SurfaceClass::HalfInoue));
    let hyper = CurveConfig::rational(&[("A", -3, 1), ("B", -2, 1)], &[]);
    assert_eq!(classify_configuration(&hyper), Some(SurfaceClass::HyperbolicInoue));
    let inter = CurveConfig::rational(&[("A", -1, 1), ("B", -2, 0)], &[("A", "B")]);
    assert_eq!(classify_configuration(&inter), Some(SurfaceClass::Intermediate));
    let tree = CurveConfig::rational(&[("A", -2, 0), ("B", -2, 0)], &[("A", "B")]);
    assert_eq!(classify_configuration(&tree), None);
}

#[test]
fn classify_from_eigenvaluations() {
    let class = |g: GermNormalForm| classify_surface(&g.eigenvaluation().unwrap()).unwrap();
    assert_eq!(class(GermNormalForm::class6(1, 1, 1, 2)), SurfaceClass::HyperbolicInoue);
    assert_eq!(class(GermNormalForm::class6(0, 1, 1, 1)), SurfaceClass::HalfInoue);
    assert_eq!(class(GermNormalForm::class2(2, &[1])), SurfaceClass::Enoki);
    assert_eq!(class(GermNormalForm::class4(2, 1, &[1], false, false)), SurfaceClass::Intermediate);
}

fn kept_weights(d: &KatoDatum) -> Vec<[u64; 2]> {
    let names = match d.marked() {
        MarkedRegion::Point(e, f) => vec![e.clone(), f.clone()],
        MarkedRegion::FreePoint(e) => vec![e.clone()],
        _ => panic!("class 6 marks a point"),
    };
    names.iter().map(|n| d.modification().curve(n).unwrap().weight.unwrap()).collect()
}

#[test]
fn class6_examples() {
    let d = datum_from_class6([[1, 1], [1, 2]]).unwrap();
    assert_eq!(kept_weights(&d), vec![[1, 1], [1, 2]]);
    assert!(d.contracted().is_empty());
    assert_eq!(d.marked_index(), 1);
    assert_eq!(d.modification().exceptional().count(), 2);

    let d = datum_from_class6([[2, 1], [1, 1]]).unwrap();
    assert_eq!(kept_weights(&d), vec![[2, 1], [1, 1]]);
    assert!(d.contracted().is_empty());

    let d = datum_from_class6([[1, 1], [2, 3]]).unwrap();
    assert_eq!(kept_weights(&d), vec![[1, 2], [1, 3]]);

    assert!(matches!(datum_from_class6([[1, 0], [0, 1]]), Err(KatoError::Germ(_))));
    assert!(matches!(datum_from_class6([[1, 2], [2, 1]]), Err(KatoError::Germ(_))));
}

#[test]
fn class6_contracts_the_extra_toric_primes() {
    // rays (2,3) and (1,2) pass through (1,1), which becomes a 1/3(1,1) point
    let d = datum_from_class6([[2, 1], [3, 2]]).unwrap();
    assert_eq!(kept_weights(&d), vec![[2, 3], [1, 2]]);
    let c = &d.contracted()[0];
    assert_eq!((c.primes.clone(), c.p, c.q, c.lattice_index), (vec!["E1".to_string()], 3, 1, 3));
    assert_eq!(d.outside_primes().len(), 2);
}

#[test]
fn class6_half_inoue_has_one_prime() {
    let d = datum_from_class6([[0, 1], [1, 1]]).unwrap();
    assert_eq!(d.marked(), &MarkedRegion::FreePoint("E1".into()));
    assert_eq!(kept_weights(&d), vec![[1, 1]]);
}

fn valid_class6(max: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for d in 0..=max {
                    if GermNormalForm::class6(a, b, c, d).validate().is_ok() {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn class6_kept_primes_are_pushforward_images() {
    for m in valid_class6(5) {
        let germ = GermNormalForm::class6(m[0][0], m[0][1], m[1][0], m[1][1]);
        let d = datum_from_class6(m).unwrap();
        let mut expect: Vec<MonomialWeights> = germ.contracted_curves().into_iter().map(|(_, w)| w).collect();
        expect.sort_by_key(|w| w.to_string());
        let mut got: Vec<MonomialWeights> = kept_weights(&d)
            .iter()
            .map(|w| MonomialWeights::from_ints(w[0] as i64, w[1] as i64).unwrap())
            .collect();
        got.sort_by_key(|w| w.to_string());
        assert_eq!(got, expect, "{m:?}");
        for c in d.contracted() {
            assert_eq!(c.p, c.lattice_index);
        }
    }
}

#[test]
fn compose_with_trivial_is_identity() {
    let smooth = KatoDatum::trivial(KatoBase::Smooth).unwrap();
    let d = datum_from_class6([[2, 1], [3, 2]]).unwrap();
    assert_eq!(compose(&smooth, &d).unwrap(), d);
    assert_eq!(compose(&d, &smooth).unwrap(), d);
    let f = quotient_family_datum(3).unwrap();
    let triv = KatoDatum::trivial(f.base()).unwrap();
    assert_eq!(compose(&triv, &f).unwrap(), f);
    assert_eq!(compose(&f, &triv).unwrap(), f);
}

#[test]
fn compose_family_twice() {
    for k in 2..=6 {
        let f = quotient_family_datum(k).unwrap();
        let ff = compose(&f, &f).unwrap();
        assert_eq!(ff.step_count() as i64, 2 * (k + 1));
        assert_eq!(ff.marked_type(), f.marked_type());
        // E1 -> E2 -> E3', so the composite gap is the sum of two gaps
        let gap = ff.jacobian_gap("E1").unwrap();
        assert_eq!(gap, f.jacobian_gap("E1").unwrap() + f.jacobian_gap("E2").unwrap());
    }
}

#[test]
fn compose_rejects_base_mismatch() {
    let f = quotient_family_datum(2).unwrap();
    let g = quotient_family_datum(3).unwrap();
    assert!(matches!(compose(&f, &g), Err(KatoError::BaseMismatch(..))));
    let s = KatoDatum::trivial(KatoBase::Smooth).unwrap();
    assert!(matches!(compose(&s, &f), Err(KatoError::BaseMismatch(..))));
}

#[test]
fn datum_text_round_trip() {
    for k in [2, 4] {
        let d = quotient_family_datum(k).unwrap();
        assert_eq!(KatoDatum::parse(&d.to_text()).unwrap(), d);
    }
    let d = datum_from_class6([[1, 1], [1, 2]]).unwrap();
    assert_eq!(KatoDatum::parse(&d.to_text()).unwrap().modification(), d.modification());
}

#[test]
fn datum_file_example() {
    let text = "\
# the k = 2 family
base quotient 7 3
free E2 as E3'
free E3' as E4'
free E4' as D1'
mark E2, E3', E4'
glue C1: E1 -> E1
glue C3: E3 -> E1@free
glue D1: D1' -> E3
";
    assert_eq!(KatoDatum::parse(text).unwrap(), quotient_family_datum(2).unwrap());
}

#[test]
fn datum_parse_errors() {
    let err = |t: &str| KatoDatum::parse(t).unwrap_err();
    assert!(matches!(err("init\n"), KatoError::Parse { line: 1, .. }));
    assert!(matches!(err("base smooth\ninit\nfree E9\nmark E1\n"), KatoError::Parse { line: 3, .. }));
    assert!(matches!(err("base cone\n"), KatoError::Parse { line: 1, .. }));
    assert!(matches!(err("base smooth\ninit\nmark E1\nglue E1 => E1\n"), KatoError::Parse { line: 4, .. }));
    assert!(matches!(err("base smooth\ninit\nmark E1\nglue E1 -> E1@edge\n"), KatoError::Parse { line: 4, .. }));
    assert!(matches!(err("base smooth\ninit\n"), KatoError::Parse { .. }));
    assert!(matches!(err("base smooth\ninit\nmark E7\n"), KatoError::BadMark(_)));
    assert!(matches!(err("base smooth\nmark origin\nglue E1 -> E1\n"), KatoError::BadGluing(_)));
    assert!(matches!(err("base quotient 7 3\nmark E1,E2\n"), KatoError::BadMark(_)));
}

#[test]
fn marked_chain_must_match_the_base() {
    let f = quotient_family_datum(2).unwrap();
    let wrong = MarkedRegion::Chain(vec!["E1".into(), "E2".into(), "E3".into()]);
    assert!(matches!(
        KatoDatum::new(f.base(), f.modification().clone(), wrong, Vec::new()),
        Err(KatoError::BadMark(_))
    ));
}

/// A small smooth-base datum from proptest choices.
fn random_datum(steps: &[(bool, usize)], mark: (bool, usize)) -> KatoDatum {
    let mut seq = BlowupSequence::smooth().apply_step(Step::Initial).unwrap();
    for &(free, pick) in steps {
        let step = if free {
            let ex = seq.exceptional_names();
            Step::Free(ex[pick % ex.len()].clone())
        } else {
            let pairs = meeting_pairs(&seq, false);
            let (e, f) = pairs[pick % pairs.len()].clone();
            Step::Satellite(e, f)
        };
        seq = seq.apply_step(step).unwrap();
    }
    let pairs = meeting_pairs(&seq, true);
    let marked = if mark.0 && !pairs.is_empty() {
        let (e, f) = pairs[mark.1 % pairs.len()].clone();
        MarkedRegion::Point(e, f)
    } else {
        let ex = seq.exceptional_names();
        MarkedRegion::FreePoint(ex[mark.1 % ex.len()].clone())
    };
    KatoDatum::new(KatoBase::Smooth, seq, marked, Vec::new()).unwrap()
}

/// Meeting pairs with at least one (or, if `both`, two) exceptional curves.
fn meeting_pairs(seq: &BlowupSequence, both: bool) -> Vec<(String, String)> {
    let curves = seq.curves();
    let mut out = Vec::new();
    for (i, x) in curves.iter().enumerate() {
        for y in &curves[i + 1..] {
            let ok = if both {
                x.is_exceptional() && y.is_exceptional()
            } else {
                x.is_exceptional() || y.is_exceptional()
            };
            if ok && seq.meeting_count(&x.name, &y.name) > 0 {
                out.push((x.name.clone(), y.name.clone()));
            }
        }
    }
    out
}

fn datum_strategy() -> impl Strategy<Value = KatoDatum> {
    (prop::collection::vec((any::<bool>(), 0usize..8), 0..3), (any::<bool>(), 0usize..8))
        .prop_map(|(steps, mark)| random_datum(&steps, mark))
}

proptest! {
    #[test]
    fn compose_is_associative(a in datum_strategy(), b in datum_strategy(), c in datum_strategy()) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.step_tree(), right.step_tree());
        prop_assert_eq!(left.canonical_mark(), right.canonical_mark());
    }

    #[test]
    fn compose_adds_steps_and_respects_identity(a in datum_strategy(), b in datum_strategy()) {
        let ab = compose(&a, &b).unwrap();
        prop_assert_eq!(ab.step_count(), a.step_count() + b.step_count());
        prop_assert_eq!(ab.modification().exceptional().count(), a.modification().exceptional().count() + b.modification().exceptional().count());
        let id = KatoDatum::trivial(KatoBase::Smooth).unwrap();
        prop_assert_eq!(&compose(&id, &a).unwrap(), &a);
        prop_assert_eq!(&compose(&a, &id).unwrap(), &a);
    }

    #[test]
    fn composite_log_discrepancies_shift_by_the_marked_point(a in datum_strategy(), b in datum_strategy()) {
        // A new prime of `b` at weights (r, s) over the marked point lands at
        // r·A(E) + s·A(F) there, so A grows by the A of the marked point's curves.
        let ab = compose(&a, &b).unwrap();
        let b_new: Vec<Rational> = b.modification().exceptional().map(|c| c.log_discrepancy.clone()).collect();
        let ab_new: Vec<Rational> = ab.modification().curves()[a.modification().curves().len()..]
            .iter()
            .map(|c| c.log_discrepancy.clone())
            .collect();
        prop_assert_eq!(b_new.len(), ab_new.len());
        for (x, y) in b_new.iter().zip(&ab_new) {
            prop_assert!(y >= x);
        }
    }

    #[test]
    fn minimal_model_leaves_no_contractible_curve(
        selfs in prop::collection::vec(-4i64..=-1, 1..7),
        extra in prop::collection::vec((0usize..7, 0usize..7), 0..6),
        nodes in prop::collection::vec(0u32..2, 7),
    ) {
        let ids: Vec<String> = (0..selfs.len()).map(|i| format!("X{i}")).collect();
        let curves: Vec<(&str, i64, u32)> = ids.iter().zip(&selfs).zip(&nodes).map(|((id, &s), &n)| (id.as_str(), s, n)).collect();
        let mut meets: Vec<(&str, &str)> = (1..ids.len()).map(|i| (ids[i - 1].as_str(), ids[i].as_str())).collect();
        for &(i, j) in &extra {
            if i != j && i < ids.len() && j < ids.len() {
                meets.push((ids[i].as_str(), ids[j].as_str()));
            }
        }
        let config = CurveConfig::rational(&curves, &meets);
        let min = minimal_model(&config);
        prop_assert!(min.curves.len() <= config.curves.len());
        prop_assert!(!min.curves.is_empty());
        if min.curves.len() > 1 {
            prop_assert!(!min.curves.iter().any(|c| c.genus == 0 && c.nodes == 0 && c.self_intersection == -1));
        }
    }
}

