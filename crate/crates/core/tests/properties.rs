mod common;

use common::*;
use hms::document::SystemDocument;
use hms::hmsrep::{self, Outcome, RepresentationDoc, VerifyOptions};
use hms::measure::{MeasureClass, OutcomeSet, ProbabilityMeasure};
use hms::msys::{self, EquivOptions, Measurement, MeasurementSystem, OutcomeLabel};
use hms::order::{self, FiniteLambdaSearch, SearchBudget};
use hms::quantum::{self, BornOptions, ComplexVector, MeasurementBasis};
use hms::rational::{int, ratio};
use hms::{build, classify, HiddenRepresentation};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn shuffled_copy(ms: &MeasurementSystem, seed: u64) -> MeasurementSystem {
    let mut r = rng(seed);
    let mut state_order: Vec<usize> = (0..ms.states().len()).collect();
    let mut meas_order: Vec<usize> = (0..ms.measurements().len()).collect();
    state_order.shuffle(&mut r);
    meas_order.shuffle(&mut r);
    let measurements: Vec<Measurement> = meas_order
        .iter()
        .map(|&e| {
            let m = &ms.measurements()[e];
            let mut outcomes: Vec<OutcomeLabel> = m
                .outcomes
                .iter()
                .map(|o| OutcomeLabel {
                    name: format!("{}'", o.name),
                    value: o.value.clone(),
                })
                .collect();
            outcomes.shuffle(&mut r);
            Measurement {
                name: format!("{}'", m.name),
                outcomes,
                continuous: None,
            }
        })
        .collect();
    let table = state_order
        .iter()
        .map(|&p| {
            meas_order
                .iter()
                .map(|&e| {
                    let src = ms.measure(p, e);
                    ProbabilityMeasure::atomic(src.atoms().map(|(l, w)| (format!("{l}'"), w.clone()))).unwrap()
                })
                .collect()
        })
        .collect();
    MeasurementSystem::from_parts(
        state_order.iter().map(|&p| format!("{}'", ms.states()[p])).collect(),
        measurements,
        table,
    )
    .unwrap()
}

fn random_basis(seed: u64, n: usize) -> (MeasurementBasis, Vec<ComplexVector>) {
    let mut r = rng(seed);
    let mut c = || Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
    let raw = (0..n).map(|_| (0..n).map(|_| c()).collect()).collect();
    let vectors = quantum::gram_schmidt(raw).unwrap();
    let states = (0..3)
        .map(|_| ComplexVector::normalized((0..n).map(|_| c()).collect()).unwrap())
        .collect();
    let basis = MeasurementBasis::new(
        "b",
        (0..n).map(|i| format!("o{i}")).collect(),
        vectors,
        (0..n).map(|i| int(i as i64)).collect(),
    )
    .unwrap();
    (basis, states)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn phi_and_delta_lambda_agree(seed in any::<u64>(), k in 0i64..997) {
        let ms = random_system(&mut rng(seed), 3, 3, 5, 100, true);
        let rep = build(&ms);
        let lambda = ratio(k, 997);
        for (p, state) in ms.states().iter().enumerate() {
            for (e, m) in ms.measurements().iter().enumerate() {
                let got = rep.phi(state, &m.name, &lambda).unwrap();
                for o in &m.outcomes {
                    let inside = rep.map(p, e).preimage(&OutcomeSet::labels([o.name.as_str()])).contains(&lambda).unwrap();
                    prop_assert_eq!(inside, got == Outcome::Label(o.name.clone()));
                }
                if let Outcome::Continuous(u) = got {
                    prop_assert!(m.continuous.is_some());
                    let whole = OutcomeSet::range(hms::IntervalSet::unit());
                    prop_assert!(rep.map(p, e).preimage(&whole).contains(&lambda).unwrap());
                    prop_assert!(u >= int(0) && u <= int(1));
                }
            }
        }
    }

    #[test]
    fn leq_matches_partition_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_system(&mut r, 1, 1, 5, 12, false);
        let t = random_system(&mut r, 1, 1, 7, 12, false);
        let (cs, ct) = (classify(s.measure(0, 0)), classify(t.measure(0, 0)));
        let w = order::leq(&cs, &ct, SearchBudget::default()).unwrap();
        prop_assert_eq!(w.is_some(), partition_oracle(&cs.atom_masses(), &ct.atom_masses()));
        if let Some(w) = w {
            prop_assert!(w.is_consistent(&cs, &ct));
        }
        prop_assert!(order::leq(&cs, &cs, SearchBudget::default()).unwrap().is_some());
        prop_assert!(order::leq(&cs, &MeasureClass::Continuum, SearchBudget::default()).unwrap().is_some());
    }

    #[test]
    fn leq_is_transitive_along_refinements(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = classify(random_system(&mut r, 1, 1, 3, 12, false).measure(0, 0));
        let refine = |c: &MeasureClass, r: &mut rand_chacha::ChaCha8Rng| {
            let mut out = Vec::new();
            for m in c.atom_masses() {
                if out.len() < 6 && r.gen_bool(0.5) {
                    out.push(&m * ratio(1, 3));
                    out.push(&m * ratio(2, 3));
                } else {
                    out.push(m);
                }
            }
            let labels: Vec<String> = (0..out.len()).map(|i| format!("x{i}")).collect();
            classify(&ProbabilityMeasure::atomic(labels.into_iter().zip(out)).unwrap())
        };
        let b = refine(&a, &mut r);
        let c = refine(&b, &mut r);
        let budget = SearchBudget::default();
        prop_assert!(order::leq(&a, &b, budget).unwrap().is_some());
        prop_assert!(order::leq(&b, &c, budget).unwrap().is_some());
        prop_assert!(order::leq(&a, &c, budget).unwrap().is_some());
    }

    #[test]
    fn finite_context_measures_dominate_every_class(seed in any::<u64>(), n in 1usize..6) {
        let ms = random_system(&mut rng(seed), 3, 1, 3, 12, false);
        let classes = order::delta_m(&ms);
        match order::exists_mu_for_finite_lambda(&classes, n).unwrap() {
            FiniteLambdaSearch::Found { mu, .. } => {
                let target = classify(&mu);
                prop_assert!(target.atom_count() <= n);
                for c in classes.classes() {
                    prop_assert!(order::leq(c, &target, SearchBudget::default()).unwrap().is_some());
                }
            }
            FiniteLambdaSearch::NotFound => {
                // a single class is its own dominating measure
                if classes.len() == 1 {
                    prop_assert!(classes.classes()[0].atom_count() > n);
                }
            }
            FiniteLambdaSearch::Unknown => {}
        }
    }

    #[test]
    fn relabelled_systems_are_equivalent(seed in any::<u64>()) {
        let ms = random_system(&mut rng(seed), 3, 3, 3, 6, false);
        let other = shuffled_copy(&ms, seed ^ 0xabc);
        let pruned = msys::math_equiv(&ms, &other, EquivOptions::default()).unwrap();
        let plain = msys::math_equiv(&ms, &other, EquivOptions { prune: false, ..EquivOptions::default() }).unwrap();
        let w = pruned.expect("a relabelling is an equivalence");
        prop_assert!(w.verify(&ms, &other));
        prop_assert!(w.inverse().verify(&other, &ms));
        prop_assert!(plain.is_some());
    }

    #[test]
    fn pruning_never_changes_the_answer(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_system(&mut rng(s1), 2, 2, 3, 4, false);
        let b = random_system(&mut rng(s2), 2, 2, 3, 4, false);
        let pruned = msys::math_equiv(&a, &b, EquivOptions::default()).unwrap();
        let plain = msys::math_equiv(&a, &b, EquivOptions { prune: false, ..EquivOptions::default() }).unwrap();
        prop_assert_eq!(pruned.is_some(), plain.is_some());
        if let Some(w) = plain {
            prop_assert!(w.verify(&a, &b));
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let ms = random_system(&mut rng(seed), 3, 2, 4, 50, true);
        let doc: SystemDocument = serde_json::from_str(&serde_json::to_string(&SystemDocument::from_system(&ms)).unwrap()).unwrap();
        prop_assert_eq!(&doc.to_system().unwrap(), &ms);
        let rep = build(&ms);
        let text = serde_json::to_string(&RepresentationDoc::from(&rep)).unwrap();
        let back = HiddenRepresentation::try_from(serde_json::from_str::<RepresentationDoc>(&text).unwrap()).unwrap();
        prop_assert_eq!(back, rep);
    }

    #[test]
    fn sampling_is_shard_invariant(seed in any::<u64>(), draws in 1u64..3000, shards in 1usize..9) {
        let ms = random_system(&mut rng(seed), 2, 2, 4, 30, true);
        let rep = build(&ms);
        let (p, e) = (&ms.states()[0], &ms.measurements()[0].name);
        let one = hms::sim::sample(&rep, p, e, draws, seed, 1).unwrap();
        let many = hms::sim::sample(&rep, p, e, draws, seed, shards).unwrap();
        prop_assert_eq!(&one.rows, &many.rows);
        prop_assert_eq!(one.rows.iter().map(|r| r.count).sum::<u64>(), draws);
        for r in &one.rows {
            if r.expected == int(0) {
                prop_assert_eq!(r.count, 0);
            }
        }
    }

    #[test]
    fn born_rows_are_exact_and_phase_free(seed in any::<u64>(), n in 2usize..5, alpha in 0.0f64..6.3) {
        let (basis, states) = random_basis(seed, n);
        let phase = Complex64::from_polar(1.0, alpha);
        let named: Vec<(String, ComplexVector)> = states.iter().enumerate().map(|(i, s)| (format!("s{i}"), s.clone())).collect();
        let ms = quantum::born_system(&named, std::slice::from_ref(&basis), BornOptions::default()).unwrap();
        for (p, s) in states.iter().enumerate() {
            let total = ms.measure(p, 0).atoms().fold(int(0), |acc, (_, w)| acc + w);
            prop_assert_eq!(total, int(1));
            let a = quantum::born_probabilities(s, &basis).unwrap();
            let b = quantum::born_probabilities(&s.scale(phase), &basis).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
        let rep = build(&ms);
        prop_assert!(hmsrep::verify(&rep, &ms, VerifyOptions::default()).all_exact());
    }
}
