//! Leakage to a passive eavesdropper who sees every public message.
//!
//! An instance `(p_XY, f1, f2, g)` asks Alice to output `f1` and Bob `f2`
//! while the transcript reveals nothing about `g`. Everything here is exact
//! except the reported mutual information, which is a float computed from
//! exact ratios.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::info::{self, Joint};
use crate::limits::Limits;
use crate::model::json as j;
use crate::model::rational::{self, Rational};
use crate::model::{block_cells, Alphabet, JointDistribution, SubRect, ValueTable};
use crate::privacy::round_sig;
use crate::protocol::{Leaf, Node, Party, ProtocolTree, Transcript};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EavesdropInstance {
    dist: JointDistribution,
    f1: ValueTable,
    f2: ValueTable,
    g: ValueTable,
}

impl EavesdropInstance {
    pub fn new(
        dist: JointDistribution,
        f1: ValueTable,
        f2: ValueTable,
        g: ValueTable,
    ) -> Result<Self> {
        for (name, t) in [("f1", &f1), ("f2", &f2), ("g", &g)] {
            if t.rows() != dist.x_len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/{name}"),
                    expected: dist.x_len(),
                    found: t.rows(),
                });
            }
            if t.cols() != dist.y_len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/{name}/0"),
                    expected: dist.y_len(),
                    found: t.cols(),
                });
            }
        }
        Ok(Self { dist, f1, f2, g })
    }

    pub fn dist(&self) -> &JointDistribution {
        &self.dist
    }

    pub fn f1(&self) -> &ValueTable {
        &self.f1
    }

    pub fn f2(&self) -> &ValueTable {
        &self.f2
    }

    pub fn g(&self) -> &ValueTable {
        &self.g
    }

    /// The instance over `n`-blocks. `n = 1` returns the instance unchanged
    /// so that labels stay unwrapped.
    pub fn extend(&self, n: usize, limits: &Limits) -> Result<Self> {
        if n == 1 {
            return Ok(self.clone());
        }
        let dist = self.dist.iid_extend(n, limits)?;
        Ok(Self {
            dist,
            f1: self.f1.iid_extend(n),
            f2: self.f2.iid_extend(n),
            g: self.g.iid_extend(n),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dist = JointDistribution::from_json(value)?;
        let obj = j::object(value, "")?;
        let (r, c) = (dist.x_len(), dist.y_len());
        let table =
            |name: &str| ValueTable::from_json(j::field(obj, name, "")?, r, c, &format!("/{name}"));
        let (f1, f2, g) = (table("f1")?, table("f2")?, table("g")?);
        Self::new(dist, f1, f2, g)
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.dist.to_json();
        let obj = v
            .as_object_mut()
            .expect("distribution serializes to an object");
        obj.insert("f1".into(), self.f1.to_json());
        obj.insert("f2".into(), self.f2.to_json());
        obj.insert("g".into(), self.g.to_json());
        v
    }
}

pub fn parse_instance(document: &str) -> Result<EavesdropInstance> {
    EavesdropInstance::from_json(&j::parse_document(document)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub n: usize,
    /// `I(M; G^n)` in bits, `M` the full public transcript.
    pub total_bits: f64,
    pub per_symbol_bits: f64,
    pub exact_zero: bool,
    /// `P((Z1^n, Z2^n) != (F1^n, F2^n))`.
    #[serde(with = "rational::serde_str")]
    pub error_prob: Rational,
}

/// Exact leakage and error of `tree`, which runs on `n`-blocks of the
/// instance.
pub fn leakage(
    tree: &ProtocolTree,
    instance: &EavesdropInstance,
    n: usize,
    limits: &Limits,
) -> Result<LeakageReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    let block = instance.extend(n, limits)?;
    tree.check_covers(block.dist.x_len(), block.dist.y_len())?;

    let mut ids: BTreeMap<Transcript, u32> = BTreeMap::new();
    let mut joint = Joint::new(&["M", "G"]);
    let mut error = Rational::zero();
    for (x, y, pxy) in block.dist.support() {
        for (t, pt) in tree.transcript_pmf(x, y)? {
            let p = pxy * &pt;
            let correct = tree
                .outputs(&t, x, y)
                .is_some_and(|(a, b)| a == block.f1.label(x, y) && b == block.f2.label(x, y));
            if !correct {
                error += &p;
            }
            let next = ids.len() as u32;
            let m = *ids.entry(t).or_insert(next);
            joint.add(vec![m, block.g.get(x, y)], p);
        }
    }
    let total = round_sig(info::mutual_information(&joint, &[0], &[1]));
    Ok(LeakageReport {
        n,
        total_bits: total,
        per_symbol_bits: round_sig(total / n as f64),
        exact_zero: info::exact_cond_independent(&joint, &[0], &[1], &[]),
        error_prob: error,
    })
}

pub const EXAMPLE1_MAX_N: usize = 3;

/// The selected-bit example at block length `n`.
#[derive(Debug, Clone)]
pub struct Example1 {
    pub base: EavesdropInstance,
    pub block: EavesdropInstance,
    /// Alice sends `x^n`, Bob answers with the selected bits `y_x^n`.
    pub interactive: ProtocolTree,
    /// Alice sends `x^n`, Bob sends `y^n`.
    pub full_revelation: ProtocolTree,
}

/// `X` a uniform bit, `Y = (Y0, Y1)` two independent uniform bits (labels
/// `"y0y1"`), `f1 = f2 = y_x`, `g = y_{1-x}`.
pub fn example1_base() -> EavesdropInstance {
    let xa = Alphabet::new(["0", "1"]).expect("valid");
    let ya = Alphabet::new(["00", "01", "10", "11"]).expect("valid");
    let bit = |x: usize, y: usize| ya.label(y)[x..x + 1].to_string();
    let f = ValueTable::from_fn(2, 4, bit);
    let g = ValueTable::from_fn(2, 4, |x, y| bit(1 - x, y));
    let dist = JointDistribution::uniform(xa.clone(), ya.clone());
    EavesdropInstance::new(dist, f.clone(), f, g).expect("consistent")
}

pub fn example1_instance(n: usize, limits: &Limits) -> Result<Example1> {
    if n == 0 || n > EXAMPLE1_MAX_N {
        return Err(Error::SizeCap {
            what: "example block length",
            needed: n as u128,
            cap: EXAMPLE1_MAX_N as u128,
        });
    }
    let base = example1_base();
    let block = base.extend(n, limits)?;
    let (rows, cols) = (block.dist.x_len(), block.dist.y_len());
    let domain = SubRect::full(rows, cols);
    let singletons: Vec<Vec<usize>> = (0..rows).map(|x| vec![x]).collect();

    let reply = |x: usize, key: &dyn Fn(usize) -> String| -> Node {
        let rect = SubRect::new(vec![x], (0..cols).collect()).expect("nonempty");
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        for y in 0..cols {
            let k = key(y);
            match groups.iter_mut().find(|(g, _)| *g == k) {
                Some((_, members)) => members.push(y),
                None => groups.push((k, vec![y])),
            }
        }
        let blocks: Vec<Vec<usize>> = groups.iter().map(|(_, m)| m.clone()).collect();
        let leaves = groups
            .iter()
            .map(|(_, m)| Node::announce(block.f1.label(x, m[0])))
            .collect();
        Node::split(Party::Bob, rect, &blocks, leaves)
    };

    let interactive_children = (0..rows)
        .map(|x| reply(x, &|y| block.f1.label(x, y).to_string()))
        .collect();
    let interactive = ProtocolTree::new(
        domain.clone(),
        Node::split(
            Party::Alice,
            domain.clone(),
            &singletons,
            interactive_children,
        ),
    )?;
    let full_children = (0..rows).map(|x| reply(x, &|y| y.to_string())).collect();
    let full_revelation = ProtocolTree::new(
        domain.clone(),
        Node::split(Party::Alice, domain, &singletons, full_children),
    )?;
    Ok(Example1 {
        base,
        block,
        interactive,
        full_revelation,
    })
}

/// One deterministic non-interactive protocol: `m1 = phi(x)`, `m2 = psi(y)`,
/// each party decoding from both messages and its own input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierPoint {
    #[serde(with = "rational::serde_str")]
    pub error: Rational,
    pub leakage_bits: f64,
    pub exact_zero_leakage: bool,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

impl FrontierPoint {
    pub fn encoder_description(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        format!("phi=[{}] psi=[{}]", join(&self.phi), join(&self.psi))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierReport {
    pub m1_size: usize,
    pub m2_size: usize,
    pub encoder_pairs: u128,
    /// Pareto-optimal `(error, leakage)` points, by increasing error.
    pub frontier: Vec<FrontierPoint>,
    /// `None` when no protocol in the family has zero error.
    pub min_zero_error_leakage: Option<f64>,
    /// Only deterministic encoders at block length one are covered.
    pub scope: &'static str,
}

impl FrontierReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["error", "leakage_bits", "encoder"])
            .expect("in-memory write");
        for p in &self.frontier {
            w.write_record([
                rational::format(&p.error),
                p.leakage_bits.to_string(),
                p.encoder_description(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn digits(mut index: u128, base: usize, len: usize) -> Vec<usize> {
    // least significant first: phi[0] varies fastest
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((index % base as u128) as usize);
        index /= base as u128;
    }
    out
}

/// Maximum-a-posteriori value of `table` for each key, ties to the smallest
/// value id. `mass` yields `(key, value id, probability)`.
fn map_decoder<K: Ord>(mass: impl Iterator<Item = (K, u32, Rational)>) -> BTreeMap<K, u32> {
    let mut post: BTreeMap<K, BTreeMap<u32, Rational>> = BTreeMap::new();
    for (k, v, p) in mass {
        *post
            .entry(k)
            .or_default()
            .entry(v)
            .or_insert_with(rational::zero) += p;
    }
    post.into_iter()
        .map(|(k, by_v)| {
            let mut best: Option<(u32, Rational)> = None;
            for (v, p) in by_v {
                if best.as_ref().is_none_or(|(_, bp)| p > *bp) {
                    best = Some((v, p));
                }
            }
            (k, best.expect("nonempty posterior").0)
        })
        .collect()
}

struct Decoders {
    alice: BTreeMap<(usize, usize, usize), u32>,
    bob: BTreeMap<(usize, usize, usize), u32>,
}

fn decoders(instance: &EavesdropInstance, phi: &[usize], psi: &[usize]) -> Decoders {
    let d = &instance.dist;
    Decoders {
        alice: map_decoder(
            d.support()
                .map(|(x, y, p)| ((x, phi[x], psi[y]), instance.f1.get(x, y), p.clone())),
        ),
        bob: map_decoder(
            d.support()
                .map(|(x, y, p)| ((y, phi[x], psi[y]), instance.f2.get(x, y), p.clone())),
        ),
    }
}

fn evaluate_pair(instance: &EavesdropInstance, phi: &[usize], psi: &[usize]) -> FrontierPoint {
    let dec = decoders(instance, phi, psi);
    let mut joint = Joint::new(&["M1", "M2", "G"]);
    let mut error = Rational::zero();
    for (x, y, p) in instance.dist.support() {
        let (m1, m2) = (phi[x], psi[y]);
        let z1 = dec.alice[&(x, m1, m2)];
        let z2 = dec.bob[&(y, m1, m2)];
        if z1 != instance.f1.get(x, y) || z2 != instance.f2.get(x, y) {
            error += p;
        }
        joint.add(vec![m1 as u32, m2 as u32, instance.g.get(x, y)], p.clone());
    }
    FrontierPoint {
        error,
        leakage_bits: round_sig(info::mutual_information(&joint, &[0, 1], &[2])),
        exact_zero_leakage: info::exact_cond_independent(&joint, &[0, 1], &[2], &[]),
        phi: phi.to_vec(),
        psi: psi.to_vec(),
    }
}

/// Exhaustive search over deterministic non-interactive protocols with
/// message alphabets of the given sizes. Decoders are per-party maximum a
/// posteriori given both messages and the party's own input.
pub fn brute_force_noninteractive(
    instance: &EavesdropInstance,
    m1_size: usize,
    m2_size: usize,
    limits: &Limits,
) -> Result<FrontierReport> {
    if m1_size == 0 || m2_size == 0 {
        return Err(Error::InvalidArgument(
            "message alphabets must be nonempty".into(),
        ));
    }
    let (nx, ny) = (instance.dist.x_len(), instance.dist.y_len());
    let pairs = block_cells(m1_size, 1, nx).saturating_mul(block_cells(m2_size, 1, ny));
    if pairs > limits.max_encoder_pairs {
        return Err(Error::SizeCap {
            what: "encoder pairs",
            needed: pairs,
            cap: limits.max_encoder_pairs,
        });
    }
    let psi_count = block_cells(m2_size, 1, ny);
    let points: Vec<FrontierPoint> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let phi = digits(i / psi_count, m1_size, nx);
            let psi = digits(i % psi_count, m2_size, ny);
            evaluate_pair(instance, &phi, &psi)
        })
        .collect();

    let min_zero_error_leakage = points
        .iter()
        .filter(|p| p.error.is_zero())
        .map(|p| p.leakage_bits)
        .min_by(f64::total_cmp);

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .error
            .cmp(&points[b].error)
            .then(points[a].leakage_bits.total_cmp(&points[b].leakage_bits))
            .then(a.cmp(&b))
    });
    let mut frontier: Vec<FrontierPoint> = Vec::new();
    for i in order {
        let p = &points[i];
        if frontier
            .last()
            .is_none_or(|q| p.leakage_bits < q.leakage_bits)
        {
            frontier.push(p.clone());
        }
    }
    Ok(FrontierReport {
        m1_size,
        m2_size,
        encoder_pairs: pairs,
        frontier,
        min_zero_error_leakage,
        scope: "deterministic non-interactive protocols, block length 1",
    })
}

/// The protocol of a frontier point as a tree: Alice sends `phi(x)`, Bob
/// sends `psi(y)`, and both decode locally. Unused message values are
/// dropped, so children are renumbered in increasing message order.
pub fn frontier_protocol(
    instance: &EavesdropInstance,
    point: &FrontierPoint,
) -> Result<ProtocolTree> {
    let (nx, ny) = (instance.dist.x_len(), instance.dist.y_len());
    if point.phi.len() != nx || point.psi.len() != ny {
        return Err(Error::InvalidArgument(
            "encoders do not match the instance".into(),
        ));
    }
    let dec = decoders(instance, &point.phi, &point.psi);
    let group = |enc: &[usize]| -> Vec<(usize, Vec<usize>)> {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &m) in enc.iter().enumerate() {
            by.entry(m).or_default().push(i);
        }
        by.into_iter().collect()
    };
    let (alice_groups, bob_groups) = (group(&point.phi), group(&point.psi));
    let all_cols: Vec<usize> = (0..ny).collect();
    // inputs never observed with these messages get the first f label
    let fallback = |t: &ValueTable| t.label_of(0).to_string();

    let mut alice_children = Vec::new();
    for (m1, rows) in &alice_groups {
        let rect = SubRect::new(rows.clone(), all_cols.clone())?;
        let mut leaves = Vec::new();
        for (m2, cols) in &bob_groups {
            let alice = rows
                .iter()
                .map(|&x| {
                    let label = dec.alice.get(&(x, *m1, *m2)).map_or_else(
                        || fallback(&instance.f1),
                        |&v| instance.f1.label_of(v).to_string(),
                    );
                    (x, label)
                })
                .collect();
            let bob = cols
                .iter()
                .map(|&y| {
                    let label = dec.bob.get(&(y, *m1, *m2)).map_or_else(
                        || fallback(&instance.f2),
                        |&v| instance.f2.label_of(v).to_string(),
                    );
                    (y, label)
                })
                .collect();
            leaves.push(Node::Leaf(Leaf::Local { alice, bob }));
        }
        let blocks: Vec<Vec<usize>> = bob_groups.iter().map(|(_, c)| c.clone()).collect();
        alice_children.push(Node::split(Party::Bob, rect, &blocks, leaves));
    }
    let domain = SubRect::full(nx, ny);
    let blocks: Vec<Vec<usize>> = alice_groups.iter().map(|(_, r)| r.clone()).collect();
    ProtocolTree::new(
        domain.clone(),
        Node::split(Party::Alice, domain, &blocks, alice_children),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmniscienceReport {
    pub feasible: bool,
    pub h_g: f64,
    pub i_xy: f64,
}

pub const OMNISCIENCE_TOLERANCE: f64 = 1e-9;

/// Compares `H(g(X,Y))` against `I(X;Y)`; feasible when the first is
/// smaller by more than the tolerance.
pub fn omniscience_feasible(dist: &JointDistribution, g: &ValueTable) -> Result<OmniscienceReport> {
    if g.rows() != dist.x_len() || g.cols() != dist.y_len() {
        return Err(Error::DimensionMismatch {
            path: "/g".into(),
            expected: dist.x_len() * dist.y_len(),
            found: g.rows() * g.cols(),
        });
    }
    let mut joint = Joint::new(&["X", "Y", "G"]);
    for (x, y, p) in dist.support() {
        joint.add(vec![x as u32, y as u32, g.get(x, y)], p.clone());
    }
    let h_g = round_sig(info::joint_entropy(&joint, &[2]));
    let i_xy = round_sig(info::mutual_information(&joint, &[0], &[1]));
    Ok(OmniscienceReport {
        feasible: h_g < i_xy - OMNISCIENCE_TOLERANCE,
        h_g,
        i_xy,
    })
}
