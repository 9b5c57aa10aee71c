use proptest::prelude::*;
use tfu_core::ctp::{
    and_op, build_state_vector, conditional, cos2, negation_op, or_op, probability, projector_for,
    ClassicalDistribution, Direction,
};
use tfu_core::logic::{CompleteState, Formula, PropositionId};

const EPS: f64 = 1e-12;

/// Brute-force: sum the probabilities of the complete states where the
/// formula holds, evaluating polarity straight from the index bits.
fn summation_oracle(probs: &[f64], n: usize, formula: &Formula) -> f64 {
    (0..1usize << n).filter(|&i| formula.holds_in(CompleteState::new(n, i))).map(|i| probs[i]).sum()
}

fn formula_strategy(n: usize) -> impl Strategy<Value = Formula> {
    let leaf =
        prop_oneof![(0..n).prop_map(|k| Formula::var(PropositionId(k))), any::<bool>().prop_map(Formula::Const),];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn distribution_strategy() -> impl Strategy<Value = ClassicalDistribution> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], 1 << n)))
        .prop_filter_map("zero mass", |(n, w)| ClassicalDistribution::from_weights(n, &w).ok())
}

fn problem() -> impl Strategy<Value = (ClassicalDistribution, Formula, Formula)> {
    distribution_strategy().prop_flat_map(|d| {
        let n = d.propositions();
        (Just(d), formula_strategy(n), formula_strategy(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn operator_probability_matches_summation((d, f, g) in problem()) {
        let n = d.propositions();
        let s = build_state_vector(&d);
        for formula in [f.clone(), g.clone(), Formula::and(f.clone(), g.clone()), Formula::or(f, g)] {
            let via_operator = probability(&projector_for(&formula, n).unwrap(), &s).unwrap();
            let oracle = summation_oracle(d.probabilities(), n, &formula);
            prop_assert!((via_operator - oracle).abs() < EPS, "{via_operator} vs {oracle}");
        }
    }

    #[test]
    fn operator_algebra_matches_formula_algebra((d, f, g) in problem()) {
        let n = d.propositions();
        let p = projector_for(&f, n).unwrap();
        let q = projector_for(&g, n).unwrap();
        prop_assert_eq!(negation_op(&p), projector_for(&Formula::not(f.clone()), n).unwrap());
        prop_assert_eq!(and_op(&p, &q).unwrap(), projector_for(&Formula::and(f.clone(), g.clone()), n).unwrap());
        prop_assert_eq!(or_op(&p, &q).unwrap(), projector_for(&Formula::or(f, g), n).unwrap());
        prop_assert_eq!(and_op(&p, &q).unwrap(), and_op(&q, &p).unwrap());
        prop_assert_eq!(and_op(&p, &p).unwrap(), p);
    }

    #[test]
    fn probability_rules((d, f, g) in problem()) {
        let n = d.propositions();
        let s = build_state_vector(&d);
        let p = projector_for(&f, n).unwrap();
        let q = projector_for(&g, n).unwrap();
        let prob = |op| probability(op, &s).unwrap();
        let pq = and_op(&p, &q).unwrap();
        let p_not_q = and_op(&p, &negation_op(&q)).unwrap();
        let not_p = negation_op(&p);

        prop_assert!((prob(&p) - (prob(&pq) + prob(&p_not_q))).abs() < EPS);
        prop_assert!((prob(&not_p) - (1.0 - prob(&p))).abs() < EPS);

        if let Ok(q_given_p) = conditional(&q, &p, &s) {
            prop_assert!((prob(&p) * q_given_p - prob(&pq)).abs() < EPS);
            if let Ok(p_given_q) = conditional(&p, &q, &s) {
                prop_assert!((prob(&p) * q_given_p - prob(&q) * p_given_q).abs() < EPS);
            }
        } else {
            prop_assert!(prob(&p) <= EPS);
        }
    }

    #[test]
    fn cosine_identities((d, f, g) in problem()) {
        let n = d.propositions();
        let s = build_state_vector(&d);
        let p = projector_for(&f, n).unwrap();
        let q = projector_for(&g, n).unwrap();
        let pq = and_op(&p, &q).unwrap();
        let prob = |op| probability(op, &s).unwrap();
        let (dir_p, dir_q, dir_pq) = (Direction::projected(&p, &s), Direction::projected(&q, &s), Direction::projected(&pq, &s));
        if let Ok(dir_p) = &dir_p {
            prop_assert!((cos2(&s.as_direction(), dir_p).unwrap() - prob(&p)).abs() < EPS);
            if let (Ok(dir_pq), Ok(q_given_p)) = (&dir_pq, conditional(&q, &p, &s)) {
                prop_assert!((cos2(dir_p, dir_pq).unwrap() - q_given_p).abs() < EPS);
            }
            if let (Ok(dir_q), Ok(q_p), Ok(p_q)) = (&dir_q, conditional(&q, &p, &s), conditional(&p, &q, &s)) {
                let product = q_p * p_q;
                prop_assert!((cos2(dir_p, dir_q).unwrap() - product).abs() < EPS);
            }
        }
    }
}

#[test]
fn state_vector_is_unit_and_nonnegative() {
    let d = ClassicalDistribution::from_weights(3, &[1.0, 0.0, 2.0, 3.0, 0.5, 0.25, 0.0, 4.0]).unwrap();
    let s = build_state_vector(&d);
    let norm: f64 = s.components().iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() < EPS);
    assert!(s.components().iter().all(|x| *x >= 0.0));
}

#[test]
fn conditioned_direction_is_certain() {
    let d = ClassicalDistribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let s = build_state_vector(&d);
    let p = projector_for(&Formula::var(PropositionId(0)), 2).unwrap();
    // ⟨p̂|P|p̂⟩ = 1
    let unit = Direction::projected(&p, &s).unwrap();
    let conditioned: f64 = unit.unit().iter().zip(p.mask()).filter(|(_, k)| **k).map(|(x, _)| x * x).sum();
    assert!((conditioned - 1.0).abs() < EPS);
}
