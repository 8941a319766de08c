use std::collections::BTreeMap;

use extender_core::fraction::big_to_f64;
use extender_core::random_graphs::{
    cleanup_to_hn, generate_gnd, iota_pmf, is_proper_edge_law, sample_jn, sample_jn_prime, trial_rng, CleanupConfig,
    GndConfig, IotaParams, DEFAULT_IOTA_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every atom of the empirical law lies within 4 binomial σ of ι_n.
fn check_sampler(n: usize, draws: usize, prime: bool) {
    let p = IotaParams::new(n).unwrap();
    let pmf = iota_pmf(&p, DEFAULT_IOTA_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 + prime as u64);
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for _ in 0..draws {
        let e = if prime { sample_jn_prime(&p, &mut rng) } else { sample_jn(&p, &mut rng) };
        *counts.entry(e).or_default() += 1;
    }
    for e in counts.keys() {
        assert!(pmf.probability(e) > num_rational::BigRational::from_integer(0.into()), "{e:?} outside support");
    }
    for (e, q) in pmf.iter() {
        let q = big_to_f64(q);
        let sigma = (q * (1.0 - q) / draws as f64).sqrt();
        let freq = *counts.get(e).unwrap_or(&0) as f64 / draws as f64;
        assert!((freq - q).abs() <= 4.0 * sigma + 1e-12, "{e:?}: {freq} vs {q}");
    }
}

#[test]
fn jn_frequencies_match_iota() {
    for n in [2, 5, 8, 12] {
        check_sampler(n, 200_000, false);
    }
}

#[test]
fn jn_prime_frequencies_match_iota() {
    for n in [3, 8, 16] {
        check_sampler(n, 200_000, true);
    }
}

#[test]
fn pmf_is_a_proper_edge_law() {
    for n in 2..=40 {
        let p = IotaParams::new(n).unwrap();
        assert!(is_proper_edge_law(&iota_pmf(&p, DEFAULT_IOTA_CAP).unwrap()), "n={n}");
    }
}

#[test]
fn generation_is_seed_deterministic() {
    let c = GndConfig::new(64, 3, 9).unwrap();
    let a = generate_gnd(&c);
    let b = generate_gnd(&c);
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.draws, b.draws);
    assert_eq!(a.draws.len(), 192);
    use rand::Rng;
    let x: u64 = trial_rng(1, 2).random();
    let y: u64 = trial_rng(1, 3).random();
    assert_ne!(x, y);
}

#[test]
fn cleanup_output_is_increasing_and_bounded() {
    for seed in 0..20 {
        let raw = generate_gnd(&GndConfig::new(256, 4, seed).unwrap());
        let c = cleanup_to_hn(&raw.graph, &CleanupConfig::new(3).unwrap()).unwrap();
        assert!(c.graph.edges().iter().all(|&(x, y)| x < y));
        assert!(c.graph.vertices().all(|v| c.graph.degree(v) < 6));
        assert_eq!(c.kept.len() + c.removed.len(), 256);
        assert!(c.kept.windows(2).all(|w| w[0] < w[1]));
    }
}
