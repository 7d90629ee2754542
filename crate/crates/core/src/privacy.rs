//! Correctness and privacy checks for protocol trees.
//!
//! Transcript privacy against Alice with respect to `g`: for each `x` and
//! each pair `y1, y2` with equal `f` but different `g`, the transcript laws
//! on `(x, y1)` and `(x, y2)` coincide exactly. Against Bob it is the mirror
//! statement with `h`. The same property is audited information-
//! theoretically as `I(M; G | F, X) = 0` and `I(M; H | F, Y) = 0` on
//! concrete input distributions.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::info::{self, Joint};
use crate::model::rational::{self, Rational};
use crate::model::{Alphabet, FunctionTriple, JointDistribution};
use crate::protocol::{Party, ProtocolTree, Transcript};

/// Default number of sampled full-support distributions in a privacy audit.
pub const DEFAULT_SAMPLES: usize = 32;
pub const DEFAULT_SEED: u64 = 7;

/// Rounds to 10 significant digits so reports are stable across platforms.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessReport {
    /// `errors[x][y]` is the exact probability that some party's output
    /// differs from `f(x, y)`.
    pub errors: Vec<Vec<Rational>>,
    pub max_error: Rational,
}

impl CorrectnessReport {
    pub fn is_perfect(&self) -> bool {
        self.max_error.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .errors
            .iter()
            .map(|r| r.iter().map(rational::format).collect())
            .collect();
        json!({ "errors": rows, "max_error": rational::format(&self.max_error) })
    }
}

pub fn check_correct(tree: &ProtocolTree, triple: &FunctionTriple) -> Result<CorrectnessReport> {
    tree.check_covers(triple.x_len(), triple.y_len())?;
    let mut errors = Vec::with_capacity(triple.x_len());
    let mut max_error = Rational::zero();
    for x in 0..triple.x_len() {
        let mut row = Vec::with_capacity(triple.y_len());
        for y in 0..triple.y_len() {
            let want = triple.f().label(x, y);
            let mut err = Rational::zero();
            for (t, p) in tree.transcript_pmf(x, y)? {
                let (za, zb) = tree.outputs(&t, x, y).expect("transcripts end at leaves");
                if za != want || zb != want {
                    err += p;
                }
            }
            if err > max_error {
                max_error = err.clone();
            }
            row.push(err);
        }
        errors.push(row);
    }
    Ok(CorrectnessReport { errors, max_error })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The two inputs; they share `x` (Alice side) or `y` (Bob side).
    pub inputs: [(usize, usize); 2],
    pub transcript: Transcript,
    #[serde(with = "rational::serde_str")]
    pub p_first: Rational,
    #[serde(with = "rational::serde_str")]
    pub p_second: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PrivacyStatus {
    Ok,
    Violation(Box<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrivacyReport {
    pub side: Party,
    #[serde(flatten)]
    pub status: PrivacyStatus,
}

impl PrivacyReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.status, PrivacyStatus::Ok)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.status {
            PrivacyStatus::Ok => None,
            PrivacyStatus::Violation(v) => Some(v),
        }
    }
}

/// Input pairs whose transcripts must agree for privacy against `side`, in
/// deterministic order.
pub fn qualifying_pairs(triple: &FunctionTriple, side: Party) -> Vec<[(usize, usize); 2]> {
    let (f, g, h) = (triple.f(), triple.g(), triple.h());
    let mut out = Vec::new();
    match side {
        Party::Alice => {
            for x in 0..triple.x_len() {
                for y1 in 0..triple.y_len() {
                    for y2 in y1 + 1..triple.y_len() {
                        if f.get(x, y1) == f.get(x, y2) && g.get(x, y1) != g.get(x, y2) {
                            out.push([(x, y1), (x, y2)]);
                        }
                    }
                }
            }
        }
        Party::Bob => {
            for y in 0..triple.y_len() {
                for x1 in 0..triple.x_len() {
                    for x2 in x1 + 1..triple.x_len() {
                        if f.get(x1, y) == f.get(x2, y) && h.get(x1, y) != h.get(x2, y) {
                            out.push([(x1, y), (x2, y)]);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn check_transcript_privacy(
    tree: &ProtocolTree,
    triple: &FunctionTriple,
    side: Party,
) -> Result<PrivacyReport> {
    tree.check_covers(triple.x_len(), triple.y_len())?;
    let mut cache: BTreeMap<(usize, usize), BTreeMap<Transcript, Rational>> = BTreeMap::new();
    for pair in qualifying_pairs(triple, side) {
        for &(x, y) in &pair {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry((x, y)) {
                e.insert(tree.transcript_pmf(x, y)?);
            }
        }
        let (a, b) = (&cache[&pair[0]], &cache[&pair[1]]);
        if a != b {
            let zero = Rational::zero();
            let t = a
                .keys()
                .chain(b.keys())
                .filter(|t| a.get(*t).unwrap_or(&zero) != b.get(*t).unwrap_or(&zero))
                .min()
                .expect("unequal maps differ somewhere")
                .clone();
            return Ok(PrivacyReport {
                side,
                status: PrivacyStatus::Violation(Box::new(Violation {
                    inputs: pair,
                    p_first: a.get(&t).cloned().unwrap_or_default(),
                    p_second: b.get(&t).cloned().unwrap_or_default(),
                    transcript: t,
                })),
            });
        }
    }
    Ok(PrivacyReport {
        side,
        status: PrivacyStatus::Ok,
    })
}

pub const VAR_X: &str = "X";
pub const VAR_Y: &str = "Y";
pub const VAR_F: &str = "F";
pub const VAR_G: &str = "G";
pub const VAR_H: &str = "H";
pub const VAR_M: &str = "M";

/// Joint law of `(X, Y, F, G, H, M)` induced by `dist`, the triple and the
/// protocol, where `M` is the full public transcript.
pub fn augmented_joint(
    tree: &ProtocolTree,
    triple: &FunctionTriple,
    dist: &JointDistribution,
) -> Result<Joint> {
    tree.check_covers(triple.x_len(), triple.y_len())?;
    check_dist(triple, dist)?;
    let mut transcripts: BTreeMap<Transcript, u32> = BTreeMap::new();
    let mut joint = Joint::new(&[VAR_X, VAR_Y, VAR_F, VAR_G, VAR_H, VAR_M]);
    for (x, y, pxy) in dist.support() {
        for (t, pm) in tree.transcript_pmf(x, y)? {
            let next = transcripts.len() as u32;
            let m = *transcripts.entry(t).or_insert(next);
            joint.add(
                vec![
                    x as u32,
                    y as u32,
                    triple.f().get(x, y),
                    triple.g().get(x, y),
                    triple.h().get(x, y),
                    m,
                ],
                pxy * pm,
            );
        }
    }
    Ok(joint)
}

pub(crate) fn check_dist(triple: &FunctionTriple, dist: &JointDistribution) -> Result<()> {
    if dist.x_len() != triple.x_len() || dist.y_len() != triple.y_len() {
        return Err(crate::Error::AlphabetMismatch(format!(
            "distribution is {}x{}, triple is {}x{}",
            dist.x_len(),
            dist.y_len(),
            triple.x_len(),
            triple.y_len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim1Report {
    /// `I(M; G | F, X) = 0` exactly.
    pub alice_cmi_zero: bool,
    /// `I(M; H | F, Y) = 0` exactly.
    pub bob_cmi_zero: bool,
    pub alice_cmi: f64,
    pub bob_cmi: f64,
}

impl Claim1Report {
    pub fn both_zero(&self) -> bool {
        self.alice_cmi_zero && self.bob_cmi_zero
    }

    pub fn cmi(&self, side: Party) -> (bool, f64) {
        match side {
            Party::Alice => (self.alice_cmi_zero, self.alice_cmi),
            Party::Bob => (self.bob_cmi_zero, self.bob_cmi),
        }
    }
}

/// Exact audit of the two conditional mutual informations on one input
/// distribution.
pub fn claim1_audit(
    tree: &ProtocolTree,
    triple: &FunctionTriple,
    dist: &JointDistribution,
) -> Result<Claim1Report> {
    let joint = augmented_joint(tree, triple, dist)?;
    let m = joint.group(&[VAR_M]);
    let (g, fx) = (joint.group(&[VAR_G]), joint.group(&[VAR_F, VAR_X]));
    let (h, fy) = (joint.group(&[VAR_H]), joint.group(&[VAR_F, VAR_Y]));
    Ok(Claim1Report {
        alice_cmi_zero: info::exact_cond_independent(&joint, &m, &g, &fx),
        bob_cmi_zero: info::exact_cond_independent(&joint, &m, &h, &fy),
        alice_cmi: round_sig(info::conditional_mutual_information(&joint, &m, &g, &fx)),
        bob_cmi: round_sig(info::conditional_mutual_information(&joint, &m, &h, &fy)),
    })
}

/// A full-support distribution with integer weights in `1..=64`, normalised
/// exactly.
pub fn random_full_support<R: Rng + ?Sized>(
    xa: &Alphabet,
    ya: &Alphabet,
    rng: &mut R,
) -> JointDistribution {
    let weights: Vec<Vec<u32>> = (0..xa.len())
        .map(|_| (0..ya.len()).map(|_| rng.gen_range(1..=64)).collect())
        .collect();
    let total: u64 = weights.iter().flatten().map(|&w| u64::from(w)).sum();
    let rows = weights
        .iter()
        .map(|r| {
            r.iter()
                .map(|&w| Rational::new(w.into(), total.into()))
                .collect()
        })
        .collect();
    JointDistribution::new(xa.clone(), ya.clone(), rows).expect("weights normalise to one")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPointAudit {
    pub side: Party,
    pub inputs: [(usize, usize); 2],
    pub report: Claim1Report,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim1Suite {
    pub seed: u64,
    pub samples: usize,
    pub two_point: Vec<TwoPointAudit>,
    pub sampled: Vec<Claim1Report>,
    pub transcript_privacy: [PrivacyReport; 2],
    /// Every audited distribution gave exactly zero on both sides.
    pub all_zero: bool,
    /// Each transcript violation is detected by a strictly positive CMI on
    /// its side under the two-point distribution of the violating pair.
    pub violations_detected: bool,
}

impl Claim1Suite {
    /// The information-theoretic verdict agrees with the transcript checks.
    pub fn consistent(&self) -> bool {
        let transcript_private = self.transcript_privacy.iter().all(PrivacyReport::is_ok);
        if transcript_private {
            self.all_zero
        } else {
            self.violations_detected
        }
    }
}

/// Audits every two-point distribution on a qualifying pair plus `samples`
/// seeded full-support distributions, and cross-checks each transcript
/// violation on the two-point distribution of the violating pair.
pub fn claim1_suite(
    tree: &ProtocolTree,
    triple: &FunctionTriple,
    samples: usize,
    seed: u64,
) -> Result<Claim1Suite> {
    let (xa, ya) = (triple.x_alphabet(), triple.y_alphabet());
    let mut two_point = Vec::new();
    for side in [Party::Alice, Party::Bob] {
        for pair in qualifying_pairs(triple, side) {
            let dist = JointDistribution::uniform_on(xa.clone(), ya.clone(), &pair)?;
            two_point.push(TwoPointAudit {
                side,
                inputs: pair,
                report: claim1_audit(tree, triple, &dist)?,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = Vec::with_capacity(samples);
    for _ in 0..samples {
        let dist = random_full_support(xa, ya, &mut rng);
        sampled.push(claim1_audit(tree, triple, &dist)?);
    }
    let transcript_privacy = [
        check_transcript_privacy(tree, triple, Party::Alice)?,
        check_transcript_privacy(tree, triple, Party::Bob)?,
    ];
    let mut violations_detected = true;
    for report in &transcript_privacy {
        if let Some(v) = report.violation() {
            let dist = JointDistribution::uniform_on(xa.clone(), ya.clone(), &v.inputs)?;
            let (zero, value) = claim1_audit(tree, triple, &dist)?.cmi(report.side);
            violations_detected &= !zero && value > 0.0;
        }
    }
    let all_zero = two_point.iter().all(|a| a.report.both_zero())
        && sampled.iter().all(Claim1Report::both_zero);
    Ok(Claim1Suite {
        seed,
        samples,
        two_point,
        sampled,
        transcript_privacy,
        all_zero,
        violations_detected,
    })
}

/// Alice sends `x`; Bob then announces `f(x, y)`. Correct, and private only
/// when the hidden functions reveal nothing beyond `f`.
pub fn reveal_x_protocol(triple: &FunctionTriple) -> ProtocolTree {
    use crate::model::SubRect;
    use crate::protocol::Node;

    let full = SubRect::full(triple.x_len(), triple.y_len());
    let singletons: Vec<Vec<usize>> = (0..triple.x_len()).map(|x| vec![x]).collect();
    let children = (0..triple.x_len())
        .map(|x| {
            let rect = full.with_rows(vec![x]).expect("nonempty");
            let mut by_value: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for y in 0..triple.y_len() {
                by_value.entry(triple.f().get(x, y)).or_default().push(y);
            }
            let mut blocks: Vec<Vec<usize>> = by_value.into_values().collect();
            blocks.sort();
            let leaves = blocks
                .iter()
                .map(|b| Node::announce(triple.f().label(x, b[0])))
                .collect();
            Node::split(Party::Bob, rect, &blocks, leaves)
        })
        .collect();
    let root = Node::split(Party::Alice, full.clone(), &singletons, children);
    ProtocolTree::new(full, root).expect("reveal protocol is well formed")
}
