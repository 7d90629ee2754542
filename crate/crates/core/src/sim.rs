//! Monte Carlo execution of a protocol by two separate endpoints that only
//! see their own input and the messages on a shared link.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::info::{self, Joint};
use crate::model::rational;
use crate::model::{JointDistribution, ValueTable};
use crate::protocol::eval::sample_child;
use crate::protocol::{Leaf, Node, Party, ProtocolTree, Transcript};

const INPUT_STREAM: u64 = 0;

/// `(seed, trial, purpose)` determines the random stream, so results do not
/// depend on how trials are scheduled.
fn trial_rng(seed: u64, trial: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial * 3 + purpose);
    rng
}

/// One party's view of an execution.
pub struct PartyEndpoint<'a> {
    role: Party,
    input: usize,
    node: &'a Node,
    rng: ChaCha8Rng,
    input_reads: usize,
}

impl<'a> PartyEndpoint<'a> {
    pub fn new(role: Party, input: usize, tree: &'a ProtocolTree, rng: ChaCha8Rng) -> Self {
        Self {
            role,
            input,
            node: tree.root(),
            rng,
            input_reads: 0,
        }
    }

    pub fn role(&self) -> Party {
        self.role
    }

    /// Times the endpoint consulted its own input.
    pub fn input_reads(&self) -> usize {
        self.input_reads
    }

    fn read_input(&mut self) -> usize {
        self.input_reads += 1;
        self.input
    }

    /// The message to send if it is this party's turn.
    pub fn speak(&mut self) -> Option<usize> {
        let Node::Internal(n) = self.node else {
            return None;
        };
        if n.speaker != self.role {
            return None;
        }
        let input = self.read_input();
        let pmf = n
            .branch_for(input)
            .expect("input lies in the node rectangle");
        Some(sample_child(pmf, &mut self.rng))
    }

    pub fn receive(&mut self, message: usize) {
        if let Node::Internal(n) = self.node {
            self.node = &n.children[message];
        }
    }

    /// The public announcement at a leaf, if any.
    pub fn announcement(&self) -> Option<&'a str> {
        match self.node {
            Node::Leaf(Leaf::Announce(v)) => Some(v),
            _ => None,
        }
    }

    pub fn output(&mut self) -> Option<String> {
        let node = self.node;
        match node {
            Node::Leaf(Leaf::Announce(v)) => Some(v.clone()),
            Node::Leaf(Leaf::Local { alice, bob }) => {
                let map = match self.role {
                    Party::Alice => alice,
                    Party::Bob => bob,
                };
                let input = self.read_input();
                map.get(&input).cloned()
            }
            Node::Internal(_) => None,
        }
    }
}

/// Ordered lossless link; the tap records everything sent.
#[derive(Debug, Default)]
pub struct Link {
    tap: Vec<usize>,
}

impl Link {
    pub fn send(&mut self, message: usize, from: &mut PartyEndpoint, to: &mut PartyEndpoint) {
        self.tap.push(message);
        from.receive(message);
        to.receive(message);
    }

    pub fn tapped(&self) -> &[usize] {
        &self.tap
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub x: usize,
    pub y: usize,
    pub transcript: Transcript,
    pub alice_output: Option<String>,
    pub bob_output: Option<String>,
    pub alice_input_reads: usize,
    pub bob_input_reads: usize,
}

/// Runs one execution on `(x, y)` with party randomness from `seed`/`trial`.
pub fn run_once(tree: &ProtocolTree, x: usize, y: usize, seed: u64, trial: u64) -> TrialRecord {
    let mut alice = PartyEndpoint::new(Party::Alice, x, tree, trial_rng(seed, trial, 1));
    let mut bob = PartyEndpoint::new(Party::Bob, y, tree, trial_rng(seed, trial, 2));
    let mut link = Link::default();
    loop {
        if let Some(m) = alice.speak() {
            link.send(m, &mut alice, &mut bob);
        } else if let Some(m) = bob.speak() {
            link.send(m, &mut bob, &mut alice);
        } else {
            break;
        }
    }
    let announced = alice.announcement().map(str::to_string);
    TrialRecord {
        x,
        y,
        transcript: Transcript {
            messages: link.tapped().to_vec(),
            output: announced,
        },
        alice_output: alice.output(),
        bob_output: bob.output(),
        alice_input_reads: alice.input_reads(),
        bob_input_reads: bob.input_reads(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalStats {
    pub seed: u64,
    pub trials: u64,
    pub x_labels: Vec<String>,
    pub y_labels: Vec<String>,
    /// Transcript counts per sampled input pair.
    pub transcripts: BTreeMap<(usize, usize), BTreeMap<Transcript, u64>>,
    /// Counts of `(alice_output, bob_output)`; a missing output is `"?"`.
    pub outputs: BTreeMap<(String, String), u64>,
}

impl EmpiricalStats {
    pub fn to_json(&self) -> Value {
        let per_input: Vec<Value> = self
            .transcripts
            .iter()
            .map(|((x, y), ts)| {
                let counts: serde_json::Map<String, Value> =
                    ts.iter().map(|(t, c)| (t.render(), json!(c))).collect();
                json!({ "x": self.x_labels[*x], "y": self.y_labels[*y], "transcripts": counts })
            })
            .collect();
        let outputs: Vec<Value> = self
            .outputs
            .iter()
            .map(|((a, b), c)| json!({ "alice": a, "bob": b, "count": c }))
            .collect();
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "per_input": per_input,
            "outputs": outputs,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "y", "transcript", "count"])
            .expect("in-memory write");
        for ((x, y), ts) in &self.transcripts {
            for (t, c) in ts {
                w.write_record([
                    &self.x_labels[*x],
                    &self.y_labels[*y],
                    &t.render(),
                    &c.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Samples `trials` inputs from `dist` and runs the protocol on each.
pub fn run_trials(
    tree: &ProtocolTree,
    dist: &JointDistribution,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let support: Vec<(usize, usize)> = dist.support().map(|(x, y, _)| (x, y)).collect();
    for &(x, y) in &support {
        if !tree.domain().contains(x, y) {
            return Err(Error::OutOfRange {
                what: "distribution support outside the protocol domain",
                index: x * dist.y_len() + y,
            });
        }
    }
    let weights: Vec<f64> = dist
        .support()
        .map(|(_, _, p)| rational::to_f64(p))
        .collect();
    let sampler = WeightedIndex::new(&weights).expect("a distribution has positive mass");

    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (x, y) = support[sampler.sample(&mut trial_rng(seed, trial, INPUT_STREAM))];
            run_once(tree, x, y, seed, trial)
        })
        .collect();

    let mut transcripts: BTreeMap<(usize, usize), BTreeMap<Transcript, u64>> = BTreeMap::new();
    let mut outputs: BTreeMap<(String, String), u64> = BTreeMap::new();
    for r in records {
        *transcripts
            .entry((r.x, r.y))
            .or_default()
            .entry(r.transcript)
            .or_insert(0) += 1;
        let missing = || "?".to_string();
        let key = (
            r.alice_output.unwrap_or_else(missing),
            r.bob_output.unwrap_or_else(missing),
        );
        *outputs.entry(key).or_insert(0) += 1;
    }
    Ok(EmpiricalStats {
        seed,
        trials,
        x_labels: dist.x_alphabet().symbols().to_vec(),
        y_labels: dist.y_alphabet().symbols().to_vec(),
        transcripts,
        outputs,
    })
}

/// Total variation between the empirical law of `(x, y, transcript)` and the
/// exact one.
pub fn tv_distance(
    stats: &EmpiricalStats,
    tree: &ProtocolTree,
    dist: &JointDistribution,
) -> Result<f64> {
    let n = stats.trials as f64;
    let mut exact: BTreeMap<(usize, usize, Transcript), f64> = BTreeMap::new();
    for (x, y, p) in dist.support() {
        for (t, q) in tree.transcript_pmf(x, y)? {
            exact.insert((x, y, t), rational::to_f64(&(p * q)));
        }
    }
    let mut total = 0.0;
    for (&(x, y), ts) in &stats.transcripts {
        for (t, &c) in ts {
            let e = exact.remove(&(x, y, t.clone())).unwrap_or(0.0);
            total += (c as f64 / n - e).abs();
        }
    }
    total += exact.values().sum::<f64>();
    Ok(total / 2.0)
}

/// Plug-in estimate of `I(M; G)` from the recorded transcripts.
pub fn empirical_leakage(stats: &EmpiricalStats, g: &ValueTable) -> f64 {
    let mut ids: BTreeMap<&Transcript, u32> = BTreeMap::new();
    let mut joint = Joint::new(&["M", "G"]);
    for (&(x, y), ts) in &stats.transcripts {
        for (t, &c) in ts {
            let next = ids.len() as u32;
            let m = *ids.entry(t).or_insert(next);
            joint.add(
                vec![m, g.get(x, y)],
                rational::ratio(c as i64, stats.trials as i64),
            );
        }
    }
    info::mutual_information(&joint, &[0], &[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::{decide, Decision};
    use crate::eavesdrop::example1_instance;
    use crate::fixtures;
    use crate::Limits;

    fn table1_tree() -> ProtocolTree {
        match decide(&fixtures::mixed_3x3()) {
            Decision::Computable(t) => t,
            Decision::NotComputable(_) => panic!("the mixed 3x3 triple is computable"),
        }
    }

    fn uniform3() -> JointDistribution {
        let t = fixtures::mixed_3x3();
        JointDistribution::uniform(t.x_alphabet().clone(), t.y_alphabet().clone())
    }

    #[test]
    fn deterministic_runs_match_evaluate() {
        let tree = table1_tree();
        let stats = run_trials(&tree, &uniform3(), 1000, 7).unwrap();
        let mut total = 0;
        for (&(x, y), ts) in &stats.transcripts {
            assert_eq!(ts.len(), 1);
            let (t, c) = ts.iter().next().unwrap();
            assert_eq!(*t, tree.evaluate_deterministic(x, y).unwrap());
            total += c;
        }
        assert_eq!(total, 1000);
    }

    #[test]
    fn endpoints_only_read_their_own_input_when_speaking() {
        let tree = table1_tree();
        for x in 0..3 {
            for y in 0..3 {
                let r = run_once(&tree, x, y, 1, 0);
                let mut node = tree.root();
                let (mut a, mut b) = (0, 0);
                for &m in &r.transcript.messages {
                    let Node::Internal(n) = node else {
                        unreachable!()
                    };
                    match n.speaker {
                        Party::Alice => a += 1,
                        Party::Bob => b += 1,
                    }
                    node = &n.children[m];
                }
                assert_eq!((r.alice_input_reads, r.bob_input_reads), (a, b));
            }
        }
    }

    #[test]
    fn point_mass_gives_one_transcript_and_zero_tv() {
        let tree = table1_tree();
        let t = fixtures::mixed_3x3();
        let d = JointDistribution::point_mass(t.x_alphabet().clone(), t.y_alphabet().clone(), 0, 0);
        let stats = run_trials(&tree, &d, 1, 3).unwrap();
        assert_eq!(stats.transcripts.len(), 1);
        assert_eq!(tv_distance(&stats, &tree, &d).unwrap(), 0.0);
        let stats = run_trials(&tree, &d, 50, 3).unwrap();
        assert_eq!(stats.transcripts[&(0, 0)].len(), 1);
    }

    #[test]
    fn reproducible_and_concentrated() {
        let tree = table1_tree();
        let d = uniform3();
        let a = run_trials(&tree, &d, 2000, 7).unwrap();
        let b = run_trials(&tree, &d, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_ne!(a, run_trials(&tree, &d, 2000, 8).unwrap());
    }

    #[test]
    fn deterministic_tree_tv_is_input_tv() {
        let tree = table1_tree();
        let d = uniform3();
        let stats = run_trials(&tree, &d, 500, 11).unwrap();
        let mut input_tv = 0.0;
        for x in 0..3 {
            for y in 0..3 {
                let c = stats
                    .transcripts
                    .get(&(x, y))
                    .map_or(0, |ts| ts.values().sum::<u64>());
                input_tv += (c as f64 / 500.0 - 1.0 / 9.0).abs();
            }
        }
        let tv = tv_distance(&stats, &tree, &d).unwrap();
        assert!((tv - input_tv / 2.0).abs() < 1e-12);
    }

    #[test]
    fn randomized_branches_follow_their_pmf() {
        let json = r#"{"domain":{"rows":[0],"cols":[0]},
            "root":{"speaker":"A","rect":{"rows":[0],"cols":[0]},
                    "branch":{"0":[[0,"1/4"],[1,"3/4"]]},
                    "children":[{"leaf":"a"},{"leaf":"b"}]}}"#;
        let tree = crate::protocol::parse_protocol(json).unwrap();
        let one = crate::model::Alphabet::new(["x"]).unwrap();
        let d = JointDistribution::uniform(one.clone(), one);
        let stats = run_trials(&tree, &d, 20_000, 5).unwrap();
        assert!(tv_distance(&stats, &tree, &d).unwrap() < 0.02);
    }

    #[test]
    fn support_outside_domain_is_rejected() {
        let tree =
            ProtocolTree::constant(crate::model::SubRect::new(vec![0], vec![0]).unwrap(), "v");
        assert!(run_trials(&tree, &uniform3(), 10, 1).is_err());
        assert!(run_trials(&tree, &uniform3(), 0, 1).is_err());
    }

    #[test]
    fn example1_empirical_leakage_is_small() {
        let e = example1_instance(1, &Limits::default()).unwrap();
        let stats = run_trials(&e.interactive, e.block.dist(), 20_000, 7).unwrap();
        assert!(empirical_leakage(&stats, e.block.g()) < 0.01);
        let full = run_trials(&e.full_revelation, e.block.dist(), 20_000, 7).unwrap();
        assert!(empirical_leakage(&full, e.block.g()) > 0.9);
    }
}
