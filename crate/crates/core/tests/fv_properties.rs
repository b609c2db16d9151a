mod common;

use adelic_core::fv::*;
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring(s: &str) -> RingFormula {
    parse_ring_formula(s).unwrap()
}

fn boole(s: &str) -> BooleFormula {
    parse_boole_formula(s).unwrap()
}

// ---- worked examples --------------------------------------------------------

fn z235() -> FiniteFamily {
    FiniteFamily::from_json(
        r#"{"index": ["a", "b", "c"],
            "stalks": {"a": {"kind": "Zmod", "m": 2}, "b": {"kind": "Zmod", "m": 3}, "c": {"kind": "Zmod", "m": 5}}}"#,
    )
    .unwrap()
}

#[test]
fn worked_examples_reproduce() {
    let fam = z235();
    let f = [vec![1, 1, 1]];
    let g = |psi: &str, theta: &str| GeneralizedSentence::new(boole(psi), vec![ring(theta)], 1).unwrap();
    assert!(gen_product_eval(&g("v0 = 1", "w0 = w0"), &fam, &f).unwrap());
    assert!(!gen_product_eval(&g("v0 = 0", "w0 = w0"), &fam, &f).unwrap());
    assert!(gen_product_eval(&g("not (v0 = 1)", "w0 + w0 = 0"), &fam, &f).unwrap());

    let squares = theta_set(&ring("exists y (y*y = w0)"), &fam, &[vec![1, 2, 4]]).unwrap();
    assert_eq!(fam.labels(squares), ["a", "c"]);
    // squares mod 7 by enumeration
    let z7 = Stalk::zmod(7).unwrap();
    let sq: Vec<usize> = (0..7).filter(|&x| (0..7).any(|y| y * y % 7 == x)).collect();
    assert_eq!(sq, [0, 1, 2, 4]);
    for x in 0..7 {
        assert_eq!(eval_ring_formula(&ring("exists y (y*y = w0)"), &z7, &[x]).unwrap(), sq.contains(&x));
    }
}

// ---- theta_set is a Boolean homomorphism --------------------------------------

#[test]
fn theta_set_is_a_boolean_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (fam, _) = random_family(&mut rng);
        let k = rng.gen_range(0..=2);
        let t1 = random_formula(&mut rng, &mut free_w(k), 3, 2);
        let t2 = random_formula(&mut rng, &mut free_w(k), 3, 2);
        let tuple: Vec<_> = (0..k).map(|_| random_element(&mut rng, &fam)).collect();
        let s1 = theta_set(&t1, &fam, &tuple).unwrap();
        let s2 = theta_set(&t2, &fam, &tuple).unwrap();
        let full = fam.full();
        assert_eq!(theta_set(&Formula::not(t1.clone()), &fam, &tuple).unwrap(), full & !s1);
        assert_eq!(theta_set(&Formula::and(t1.clone(), t2.clone()), &fam, &tuple).unwrap(), s1 & s2);
        assert_eq!(theta_set(&Formula::or(t1.clone(), t2.clone()), &fam, &tuple).unwrap(), s1 | s2);
        let imp = Formula::Implies(Box::new(t1), Box::new(t2));
        assert_eq!(theta_set(&imp, &fam, &tuple).unwrap(), (full & !s1) | s2);
    }
}

// ---- Ψ ≡ (v0 = 1) against satisfaction in an explicit product ring -----------

fn product_stalk(fam: &FiniteFamily) -> (Stalk, Vec<Vec<usize>>) {
    let orders: Vec<usize> = fam.stalks().iter().map(|s| s.order()).collect();
    let n: usize = orders.iter().product();
    let decode = |mut x: usize| {
        orders
            .iter()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect::<Vec<_>>()
    };
    let encode = |v: &[usize]| v.iter().zip(&orders).rev().fold(0, |acc, (&d, &o)| acc * o + d);
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let table = |op: &dyn Fn(&Stalk, usize, usize) -> usize| -> Vec<Vec<usize>> {
        coords
            .iter()
            .map(|a| {
                coords
                    .iter()
                    .map(|b| {
                        let c: Vec<usize> = fam.stalks().iter().enumerate().map(|(i, s)| op(s, a[i], b[i])).collect();
                        encode(&c)
                    })
                    .collect()
            })
            .collect()
    };
    let s = Stalk::table(&table(&|s, x, y| s.add(x, y)), &table(&|s, x, y| s.mul(x, y))).unwrap();
    (s, coords)
}

#[test]
fn full_set_sentences_agree_with_the_product_on_atomic_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let psi = boole("v0 = 1");
    let mut trials = 0;
    while trials < 100 {
        let n = rng.gen_range(1..=3);
        let specs: Vec<StalkSpec> = (0..n).map(|_| StalkSpec::Zmod { m: rng.gen_range(1..=6) }).collect();
        let fam = family_from(&specs);
        if fam.stalks().iter().map(|s| s.order()).product::<usize>() > 64 {
            continue;
        }
        trials += 1;
        let (prod, coords) = product_stalk(&fam);
        let k = rng.gen_range(0..=2);
        let atom = Formula::Atom(RingAtom(random_term(&mut rng, &free_w(k), 3), random_term(&mut rng, &free_w(k), 3)));
        let idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..prod.order())).collect();
        let tuple: Vec<GlobalElement> = idx.iter().map(|&x| coords[x].clone()).collect();
        let g = GeneralizedSentence::new(psi.clone(), vec![atom.clone()], k).unwrap();
        assert_eq!(
            gen_product_eval(&g, &fam, &tuple).unwrap(),
            eval_ring_formula(&atom, &prod, &idx).unwrap(),
            "{atom}"
        );
    }
}

// ---- preservation under stalkwise isomorphism --------------------------------

#[test]
fn preservation_holds_on_random_isomorphic_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let (fam, specs) = random_family(&mut rng);
        let copy = family_from(&relabelled(&mut rng, &specs));
        let checks: Vec<_> = (0..3)
            .map(|_| {
                let k = rng.gen_range(0..=2);
                let tuple = (0..k).map(|_| random_element(&mut rng, &fam)).collect();
                (random_sentence(&mut rng, k), tuple)
            })
            .collect();
        match preservation_check(&fam, &copy, &checks, None).unwrap() {
            PreservationReport::Checked { disagreements, agreed, .. } => {
                assert!(disagreements.is_empty(), "trial {trial}");
                assert_eq!(agreed, checks.len());
            }
            other => panic!("trial {trial}: {other:?}"),
        }
    }
}

#[test]
fn preservation_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let z4 = vec![StalkSpec::Zmod { m: 4 }];
    let fam = family_from(&z4);
    let checks: Vec<_> = (0..50)
        .map(|_| {
            let k = rng.gen_range(0..=1);
            let tuple = (0..k).map(|_| random_element(&mut rng, &fam)).collect();
            (random_sentence(&mut rng, k), tuple)
        })
        .collect();
    let same = preservation_check(&fam, &fam, &checks, None).unwrap();
    assert!(matches!(same, PreservationReport::Checked { agreed: 50, .. }));
    let copy = family_from(&relabelled(&mut rng, &z4));
    let moved = preservation_check(&fam, &copy, &checks, None).unwrap();
    assert!(matches!(moved, PreservationReport::Checked { agreed: 50, .. }));
    let dual = family_from(&[StalkSpec::Residue { p: 2, e: 2, f: 1, s: 2, eisenstein: vec![-2, 0, 1] }]);
    assert_eq!(
        preservation_check(&fam, &dual, &checks, None).unwrap(),
        PreservationReport::PreconditionFailed { index: "i0".into() }
    );
    // a supplied witness that is not an isomorphism is rejected
    let identity: Vec<Vec<usize>> = vec![(0..4).collect()];
    let identity_ok = fam.stalks()[0].is_isomorphism(&copy.stalks()[0], &identity[0]);
    let report = preservation_check(&fam, &copy, &checks, Some(&identity)).unwrap();
    assert_eq!(matches!(report, PreservationReport::PreconditionFailed { .. }), !identity_ok);
}

#[test]
fn family_json_errors() {
    assert!(FiniteFamily::from_json(r#"{"index": ["a"], "stalks": {}}"#).is_err());
    assert!(FiniteFamily::from_json(r#"{"index": ["a"], "stalks": {"a": {"kind": "Zmod", "m": 5000}}}"#).is_err());
    assert!(FiniteFamily::from_json(r#"{"index": ["a"], "stalks": {"a": {"kind": "Nope"}}}"#).is_err());
    let many: Vec<String> = (0..17).map(|i| format!("\"i{i}\"")).collect();
    let stalks: Vec<String> = (0..17).map(|i| format!("\"i{i}\": {{\"kind\": \"Zmod\", \"m\": 2}}")).collect();
    let text = format!("{{\"index\": [{}], \"stalks\": {{{}}}}}", many.join(","), stalks.join(","));
    assert!(matches!(FiniteFamily::from_json(&text), Err(FvError::IndexTooLarge { .. })));
}

// ---- syntax round trip ----------------------------------------------------------

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::One),
        (0usize..4).prop_map(|i| Term::Var(format!("w{i}"))),
        prop_oneof![Just("y"), Just("z")].prop_map(|v| Term::Var(v.to_string())),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        (inner.clone(), inner, 0..3).prop_map(|(a, b, op)| match op {
            0 => Term::Add(Box::new(a), Box::new(b)),
            1 => Term::Sub(Box::new(a), Box::new(b)),
            _ => Term::Mul(Box::new(a), Box::new(b)),
        })
    })
}

fn arb_ring_formula() -> impl Strategy<Value = RingFormula> {
    let atom = (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Atom(RingAtom(a, b)));
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (prop_oneof![Just("y"), Just("z"), Just("w1")], inner.clone(), any::<bool>()).prop_map(|(v, b, e)| {
                if e { Formula::Exists(v.into(), Box::new(b)) } else { Formula::Forall(v.into(), Box::new(b)) }
            }),
        ]
    })
}

fn arb_bool_term() -> impl Strategy<Value = BoolTerm> {
    let leaf = prop_oneof![
        Just(BoolTerm::Zero),
        Just(BoolTerm::One),
        (0usize..4).prop_map(|i| BoolTerm::Var(format!("v{i}"))),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolTerm::Join(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolTerm::Meet(Box::new(a), Box::new(b))),
            inner.prop_map(|a| BoolTerm::Compl(Box::new(a))),
        ]
    })
}

fn arb_boole_formula() -> impl Strategy<Value = BooleFormula> {
    let atom = prop_oneof![
        (arb_bool_term(), arb_bool_term()).prop_map(|(a, b)| Formula::Atom(BooleAtom::Eq(a, b))),
        (arb_bool_term(), arb_bool_term()).prop_map(|(a, b)| Formula::Atom(BooleAtom::Sub(a, b))),
        arb_bool_term().prop_map(|a| Formula::Atom(BooleAtom::Fin(a))),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (0usize..6, inner.clone()).prop_map(|(i, b)| Formula::Forall(format!("v{i}"), Box::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_formulas_round_trip(f in arb_ring_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_ring_formula(&text).unwrap(), f);
    }

    #[test]
    fn boole_formulas_round_trip(f in arb_boole_formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_boole_formula(&text).unwrap(), f);
    }
}
