use amap_core::io::{
    parse_network, parse_problem, read_report, serialize_network, serialize_problem, write_report, ReportRow,
};
use amap_core::synth::{random_network, sprinkler, RandomNetworkSpec, SPRINKLER_BNET};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn network_round_trip(seed in any::<u64>(), big in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomNetworkSpec {
            min_vars: if big { 50 } else { 1 },
            max_vars: if big { 50 } else { 12 },
            min_states: 1,
            max_states: 4,
            max_parents: 3,
            zero_prob: 0.1,
        };
        let net = random_network(&mut rng, &spec);
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(serialize_network(&back), text);
    }

    #[test]
    fn parser_is_total_on_arbitrary_text(text in "\\PC{0,200}") {
        let _ = parse_network(&text);
        let _ = parse_problem(&text, &sprinkler());
        let _ = read_report(&text);
    }

    #[test]
    fn parser_is_total_on_grammar_soup(
        words in proptest::collection::vec(
            prop_oneof![
                Just("network"), Just("var"), Just("cpt"), Just("{"), Just("}"), Just(","),
                Just(";"), Just("|"), Just("A"), Just("B"), Just("t"), Just("f"), Just("0.5"),
                Just("1"), Just("0"), Just("\n"), Just("#"), Just("map"), Just("evidence"),
                Just("="), Just("Rain"), Just("WetGrass"), Just("1e999"),
            ],
            0..60,
        )
    ) {
        let text = words.join(" ");
        if let Ok(net) = parse_network(&text) {
            prop_assert_eq!(parse_network(&serialize_network(&net)).unwrap(), net);
        }
        let _ = parse_problem(&text, &sprinkler());
    }

    #[test]
    fn report_round_trip(prob in 0.0f64..=1.0, seed in any::<u64>(), blank in any::<bool>()) {
        let row = ReportRow {
            network: "net, \"quoted\"".into(),
            case_id: 7,
            algorithm: "anneal".into(),
            seed,
            log10_prob: Some(prob.log10()),
            prob: Some(prob),
            sweeps: 40,
            restarts_used: 5,
            best_found_sweep: 12,
            reheats: 2,
            wall_ms: if blank { None } else { Some(3) },
            matches_oracle: if blank { None } else { Some(prob > 0.5) },
        };
        prop_assert_eq!(read_report(&write_report(std::slice::from_ref(&row))).unwrap(), vec![row]);
    }
}

#[test]
fn sprinkler_problem_round_trip() {
    let net = parse_network(SPRINKLER_BNET).unwrap();
    let p = parse_problem("map Sprinkler Rain\nevidence WetGrass=t", &net).unwrap();
    let text = serialize_problem(&p, &net);
    assert_eq!(text, "map Sprinkler Rain\nevidence WetGrass=t\n");
    assert_eq!(parse_problem(&text, &net).unwrap(), p);
}

#[test]
fn serialized_sprinkler_is_stable() {
    let text = serialize_network(&sprinkler());
    let expect = "\
network sprinkler

var Rain { t, f }
var Sprinkler { t, f }
var WetGrass { t, f }

cpt Rain { 0.2 0.8 }
cpt Sprinkler | Rain {
  0.01 0.99;
  0.4 0.6
}
cpt WetGrass | Sprinkler Rain {
  0.99 0.01;
  0.9 0.1;
  0.8 0.2;
  0.0 1.0
}
";
    assert_eq!(text, expect);
}
