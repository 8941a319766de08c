use extender_core::entropy::{
    binary_entropy, exceedance_probability, kl_divergence, l1_distance, mixture, pinsker_gap, shannon_entropy,
    ExactLaw, FloatLaw,
};
use extender_core::fraction::big_to_f64;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn exact_law() -> impl Strategy<Value = ExactLaw> {
    prop::collection::vec((0usize..12, 1u64..20), 1..8).prop_map(|atoms| {
        let total: u64 = atoms.iter().map(|a| a.1).sum();
        ExactLaw::new(
            atoms.into_iter().map(|(k, w)| (k, BigRational::new(BigInt::from(w), BigInt::from(total)))).collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn exceedance_both_ways_plus_ties_is_one(a in exact_law(), b in exact_law()) {
        let ties: BigRational = a.atoms().iter().map(|(k, p)| p * b.mass(*k)).sum();
        let total = exceedance_probability(&a, &b) + exceedance_probability(&b, &a) + ties;
        prop_assert_eq!(total, BigRational::from_integer(1.into()));
    }

    #[test]
    fn gap_is_nonnegative_and_bounds_exceedance(a in exact_law(), b in exact_law()) {
        let g = pinsker_gap(&a, &b);
        prop_assert!(g.gap >= -1e-12);
        prop_assert!(big_to_f64(&exceedance_probability(&a, &b)) <= g.bound + 1e-9);
    }

    #[test]
    fn kl_identity(a in exact_law(), b in exact_law()) {
        let (a, b) = (a.to_float(), b.to_float());
        let gamma = mixture(&a, &b);
        let kl = kl_divergence(&a, &gamma).unwrap() + kl_divergence(&b, &gamma).unwrap();
        prop_assert!((kl - pinsker_gap(&a, &b).gap).abs() < 1e-10);
    }

    #[test]
    fn exact_and_float_entropies_agree(a in exact_law()) {
        prop_assert!((shannon_entropy(&a) - shannon_entropy(&a.to_float())).abs() < 1e-12);
        prop_assert!(shannon_entropy(&a) <= (a.atoms().len() as f64).log2() + 1e-12);
    }

    #[test]
    fn l1_is_symmetric_and_at_most_two(a in exact_law(), b in exact_law()) {
        let d = l1_distance(&a, &b);
        prop_assert_eq!(d.clone(), l1_distance(&b, &a));
        prop_assert!(d <= BigRational::from_integer(2.into()));
    }
}

#[test]
fn frozen_values() {
    // H(1/4) = 2 − (3/4)·log₂3.
    let h = binary_entropy(0.25).unwrap();
    assert!((h - 0.811_278_124_459_132_9).abs() < 1e-15);
    let u = FloatLaw::uniform(8).unwrap();
    assert!((shannon_entropy(&u) - 3.0).abs() < 1e-15);
    let a = FloatLaw::point_mass(1);
    let b = FloatLaw::point_mass(0);
    assert_eq!(exceedance_probability(&a, &b), 1.0);
    assert!((pinsker_gap(&a, &b).gap - 2.0).abs() < 1e-15);
    assert!(kl_divergence(&a, &b).is_err());
}

#[test]
fn unnormalised_law_is_rejected() {
    assert!(FloatLaw::new(vec![(0, 0.5), (1, 0.4)]).is_err());
    assert!(FloatLaw::new(vec![(0, -0.5), (1, 1.5)]).is_err());
}
