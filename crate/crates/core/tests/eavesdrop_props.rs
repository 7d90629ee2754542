use fnpriv::eavesdrop::{
    brute_force_noninteractive, example1_base, example1_instance, frontier_protocol, leakage,
    EXAMPLE1_MAX_N,
};
use fnpriv::model::SubRect;
use fnpriv::protocol::ProtocolTree;
use fnpriv::Limits;

#[test]
fn zero_flag_matches_float_on_fixtures() {
    let limits = Limits::default();
    let base = example1_base();
    for n in 1..=EXAMPLE1_MAX_N {
        let e = example1_instance(n, &limits).unwrap();
        for tree in [&e.interactive, &e.full_revelation] {
            let r = leakage(tree, &base, n, &limits).unwrap();
            assert_eq!(r.exact_zero, r.total_bits < 1e-12);
        }
    }
    let empty = ProtocolTree::constant(SubRect::full(2, 4), "1");
    let r = leakage(&empty, &base, 1, &limits).unwrap();
    assert!(r.exact_zero && r.total_bits < 1e-12);
}

#[test]
fn frontier_is_monotone_and_replayable() {
    let limits = Limits::default();
    let base = example1_base();
    for (m1, m2) in [(1, 2), (2, 2), (2, 3), (2, 4)] {
        let r = brute_force_noninteractive(&base, m1, m2, &limits).unwrap();
        for w in r.frontier.windows(2) {
            assert!(w[0].error < w[1].error);
            assert!(w[0].leakage_bits > w[1].leakage_bits);
        }
        for p in &r.frontier {
            let replay = leakage(&frontier_protocol(&base, p).unwrap(), &base, 1, &limits).unwrap();
            assert_eq!(replay.error_prob, p.error);
            assert!((replay.total_bits - p.leakage_bits).abs() < 1e-12);
        }
    }
}

#[test]
fn encoder_cap_is_enforced() {
    let limits = Limits {
        max_encoder_pairs: 100,
        ..Limits::default()
    };
    assert!(brute_force_noninteractive(&example1_base(), 2, 4, &limits).is_err());
}
