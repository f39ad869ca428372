use rand::Rng;

use crate::model::{Assignment, BayesianNetwork};

/// Draws an index from a discrete distribution by inverse CDF. Trailing
/// rounding mass falls on the last positive entry.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    last_positive
}

/// One sample from the network prior, drawn in topological order.
pub fn forward_sample<R: Rng + ?Sized>(net: &BayesianNetwork, rng: &mut R) -> Assignment {
    let mut states = vec![0usize; net.len()];
    for &v in net.topological_order() {
        let row = net.cpt_row(v, net.parents(v).iter().map(|&p| states[p]));
        states[v] = sample_index(row, rng);
    }
    states.into_iter().enumerate().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Cpt, Variable};
    use crate::synth::deterministic_chain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_chain_always_copies() {
        let net = deterministic_chain(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // root is (1, 0): state 0 always
        for _ in 0..100 {
            let a = forward_sample(&net, &mut rng);
            assert!(a.iter().all(|(_, s)| s == 0));
        }
    }

    #[test]
    fn root_frequency_matches_prior() {
        let net = BayesianNetwork::new(
            "one",
            vec![Variable {
                id: 0,
                name: "A".into(),
                states: vec!["a".into(), "b".into()],
            }],
            vec![Cpt::new(0, vec![], vec![0.8, 0.2])],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 10_000;
        let zeros = (0..n)
            .filter(|_| forward_sample(&net, &mut rng).get(0) == Some(0))
            .count();
        let freq = zeros as f64 / n as f64;
        // 5 sigma is 0.02 at n = 10^4
        assert!((freq - 0.8).abs() <= 0.02, "{freq}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let net = crate::synth::sprinkler();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| forward_sample(&net, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
    }

    #[test]
    fn zero_entries_are_never_drawn() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert_eq!(sample_index(&[0.0, 1.0, 0.0], &mut rng), 1);
        }
    }
}
