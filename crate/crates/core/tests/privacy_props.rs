mod common;

use fnpriv::characterize::{decide, Decision};
use fnpriv::fixtures;
use fnpriv::info::{conditional_entropy, conditional_mutual_information, exact_cond_independent};
use fnpriv::model::{FunctionTriple, JointDistribution};
use fnpriv::privacy::{
    self, augmented_joint, claim1_audit, claim1_suite, reveal_x_protocol, VAR_F, VAR_G, VAR_M,
    VAR_X,
};
use fnpriv::protocol::{Party, ProtocolTree};
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn synthesized(t: &FunctionTriple) -> Option<ProtocolTree> {
    match decide(t) {
        Decision::Computable(tree) => Some(tree),
        Decision::NotComputable(_) => None,
    }
}

#[test]
fn claim1_agrees_with_transcript_checks_on_all_binary_2x2() {
    for t in common::all_binary_2x2() {
        if let Some(tree) = synthesized(&t) {
            let s = claim1_suite(&tree, &t, 2, 7).unwrap();
            assert!(s.all_zero && s.consistent());
        }
        let s = claim1_suite(&reveal_x_protocol(&t), &t, 2, 7).unwrap();
        assert!(s.consistent());
    }
}

#[test]
fn transcript_violations_show_up_on_their_pair() {
    let t = fixtures::mixed_3x3();
    let tree = reveal_x_protocol(&t);
    let r = privacy::check_transcript_privacy(&tree, &t, Party::Bob).unwrap();
    let v = r
        .violation()
        .expect("revealing x breaks privacy against Bob");
    let d =
        JointDistribution::uniform_on(t.x_alphabet().clone(), t.y_alphabet().clone(), &v.inputs)
            .unwrap();
    let (zero, cmi) = claim1_audit(&tree, &t, &d).unwrap().cmi(Party::Bob);
    assert!(!zero && cmi > 0.0);
}

fn fixture_audits() -> Vec<(ProtocolTree, FunctionTriple, JointDistribution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = Vec::new();
    for t in [
        fixtures::mixed_3x3(),
        fixtures::masked_and(),
        fixtures::and_standard(),
        fixtures::mixed_3x3_standard(),
    ] {
        let mut trees = vec![reveal_x_protocol(&t)];
        trees.extend(synthesized(&t));
        for tree in trees {
            for _ in 0..4 {
                let d = privacy::random_full_support(t.x_alphabet(), t.y_alphabet(), &mut rng);
                out.push((tree.clone(), t.clone(), d));
            }
        }
    }
    out
}

#[test]
fn exact_and_float_paths_agree() {
    for (tree, t, d) in fixture_audits() {
        let r = claim1_audit(&tree, &t, &d).unwrap();
        for side in [Party::Alice, Party::Bob] {
            let (zero, cmi) = r.cmi(side);
            assert_eq!(zero, cmi < 1e-9, "{side:?} {cmi}");
        }
    }
}

#[test]
fn cmi_matches_entropy_difference() {
    for (tree, t, d) in fixture_audits() {
        let j = augmented_joint(&tree, &t, &d).unwrap();
        assert!(j.total().is_one());
        let (m, g, fx) = (
            j.group(&[VAR_M]),
            j.group(&[VAR_G]),
            j.group(&[VAR_F, VAR_X]),
        );
        let mfx = j.group(&[VAR_M, VAR_F, VAR_X]);
        let cmi = conditional_mutual_information(&j, &m, &g, &fx);
        let diff = conditional_entropy(&j, &g, &fx) - conditional_entropy(&j, &g, &mfx);
        assert!((cmi - diff).abs() < 1e-9, "{cmi} vs {diff}");
        assert_eq!(exact_cond_independent(&j, &m, &g, &fx), cmi < 1e-9);
    }
}

#[test]
fn transcript_laws_sum_to_one() {
    for t in common::all_binary_2x2().step_by(17) {
        for tree in [reveal_x_protocol(&t)].into_iter().chain(synthesized(&t)) {
            for x in 0..2 {
                for y in 0..2 {
                    let total: fnpriv::model::Rational =
                        tree.transcript_pmf(x, y).unwrap().values().sum();
                    assert!(total.is_one());
                }
            }
        }
    }
}
