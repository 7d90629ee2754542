//! One-message secure computation with privacy against the receiver.
//!
//! The sender (rows, `X`) emits `U ~ p(u|x)`; the receiver (columns, `Y`)
//! must recover `F = f(X, Y)` from `(U, Y)` while learning nothing about
//! `G = g(X, Y)` beyond `F` and `Y`. The triple is perfectly securely
//! computable under `p_XY` when some channel satisfies `H(F|U,Y) = 0` and
//! `I(U; G | F, Y) = 0`; generating `U` from `X` alone makes `U - X - Y`
//! hold automatically. `h` plays no part here.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::info::{self, Joint};
use crate::limits::Limits;
use crate::model::json as j;
use crate::model::rational::{self, Rational};
use crate::model::{rational_rows, Alphabet, FunctionTriple, JointDistribution};
use crate::privacy::{check_dist, round_sig};

/// A stochastic matrix `p(u|x)` with rows indexed by the sender's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    u_alphabet: Alphabet,
    rows: Vec<Vec<Rational>>,
}

impl Channel {
    pub fn new(u_alphabet: Alphabet, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for (x, row) in rows.iter().enumerate() {
            if row.len() != u_alphabet.len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/rows/{x}"),
                    expected: u_alphabet.len(),
                    found: row.len(),
                });
            }
            if let Some(u) = row.iter().position(rational::is_negative) {
                return Err(Error::NegativeEntry {
                    path: format!("/rows/{x}/{u}"),
                    value: rational::format(&row[u]),
                });
            }
            let sum: Rational = row.iter().sum();
            if sum != rational::one() {
                return Err(Error::NotNormalized {
                    path: format!("/rows/{x}"),
                    sum: rational::format(&sum),
                });
            }
        }
        Ok(Self { u_alphabet, rows })
    }

    /// `u(x) = ` index of the block containing `x`.
    pub fn deterministic(blocks: &[Vec<usize>], x_len: usize) -> Result<Self> {
        let mut rows = vec![vec![rational::zero(); blocks.len()]; x_len];
        let mut seen = vec![false; x_len];
        for (u, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= x_len || seen[x] {
                    return Err(Error::InvalidArgument(format!(
                        "blocks do not partition 0..{x_len}"
                    )));
                }
                seen[x] = true;
                rows[x][u] = rational::one();
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "blocks do not cover 0..{x_len}"
            )));
        }
        Self::new(Alphabet::numbered(blocks.len()), rows)
    }

    pub fn u_alphabet(&self) -> &Alphabet {
        &self.u_alphabet
    }

    pub fn x_len(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self, x: usize, u: usize) -> &Rational {
        &self.rows[x][u]
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = j::object(value, "")?;
        let ua = j::alphabet(obj, "u_alphabet", "")?;
        let rows = rational_rows(j::field(obj, "rows", "")?, "/rows")?;
        Self::new(ua, rows)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(rational::format).collect())
            .collect();
        json!({ "u_alphabet": self.u_alphabet.symbols(), "rows": rows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ViolatingCell {
    /// `f` is not determined by `(u, y)`.
    ZeroConditionalEntropy { u: String, y: String },
    /// `U` and `G` are dependent given `(F, Y) = (f, y)`.
    Privacy {
        u: String,
        g: String,
        f: String,
        y: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerfectSecurityReport {
    /// `U - X - Y`; holds by construction since the channel reads only `x`.
    pub markov_ok: bool,
    pub zero_cond_entropy_ok: bool,
    pub privacy_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_cell: Option<ViolatingCell>,
}

impl PerfectSecurityReport {
    pub fn passes(&self) -> bool {
        self.markov_ok && self.zero_cond_entropy_ok && self.privacy_ok
    }
}

fn check_channel(channel: &Channel, triple: &FunctionTriple) -> Result<()> {
    if channel.x_len() != triple.x_len() {
        return Err(Error::DimensionMismatch {
            path: "/rows".into(),
            expected: triple.x_len(),
            found: channel.x_len(),
        });
    }
    Ok(())
}

const Y: usize = 1;
const U: usize = 2;
const F: usize = 3;
const G: usize = 4;

fn joint_xyufg(channel: &Channel, dist: &JointDistribution, triple: &FunctionTriple) -> Joint {
    let mut joint = Joint::new(&["X", "Y", "U", "F", "G"]);
    for (x, y, pxy) in dist.support() {
        for u in 0..channel.u_alphabet.len() {
            let pu = channel.p(x, u);
            if pu.is_zero() {
                continue;
            }
            joint.add(
                vec![
                    x as u32,
                    y as u32,
                    u as u32,
                    triple.f().get(x, y),
                    triple.g().get(x, y),
                ],
                pxy * pu,
            );
        }
    }
    joint
}

/// Exact check of the perfect-security conditions for one channel.
pub fn check_perfect(
    channel: &Channel,
    dist: &JointDistribution,
    triple: &FunctionTriple,
) -> Result<PerfectSecurityReport> {
    check_channel(channel, triple)?;
    check_dist(triple, dist)?;
    let joint = joint_xyufg(channel, dist, triple);

    // H(F|U,Y) = 0 iff f is constant on the support of every (u, y).
    let mut seen: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut entropy_violation = None;
    for (k, _) in joint.cells() {
        let prev = *seen.entry((k[U], k[Y])).or_insert(k[F]);
        if prev != k[F] {
            entropy_violation = Some(ViolatingCell::ZeroConditionalEntropy {
                u: channel.u_alphabet.label(k[U] as usize).to_string(),
                y: triple.y_alphabet().label(k[Y] as usize).to_string(),
            });
            break;
        }
    }

    let dep = info::find_dependence(&joint, &[U], &[G], &[F, Y]);
    let privacy_violation = dep.as_ref().map(|d| ViolatingCell::Privacy {
        u: channel.u_alphabet.label(d.a[0] as usize).to_string(),
        g: triple.g().label_of(d.b[0]).to_string(),
        f: triple.f().label_of(d.c[0]).to_string(),
        y: triple.y_alphabet().label(d.c[1] as usize).to_string(),
    });

    Ok(PerfectSecurityReport {
        markov_ok: true,
        zero_cond_entropy_ok: entropy_violation.is_none(),
        privacy_ok: dep.is_none(),
        violating_cell: entropy_violation.or(privacy_violation),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneShotReport {
    /// `P(Z != F)` with the receiver's maximum-a-posteriori decoder.
    #[serde(with = "rational::serde_str")]
    pub error: Rational,
    /// `I(M; G | Z, Y) = 0` exactly, with `M = U`.
    pub leakage_zero: bool,
    pub leakage_bits: f64,
}

/// Runs the single-use protocol induced by a channel: the sender draws `U`
/// and sends it, the receiver outputs the most likely `f` given `(u, y)`.
pub fn one_shot(
    channel: &Channel,
    dist: &JointDistribution,
    triple: &FunctionTriple,
) -> Result<OneShotReport> {
    check_channel(channel, triple)?;
    check_dist(triple, dist)?;
    let base = joint_xyufg(channel, dist, triple);

    let mut posterior: BTreeMap<(u32, u32), BTreeMap<u32, Rational>> = BTreeMap::new();
    for (k, p) in base.cells() {
        *posterior
            .entry((k[U], k[Y]))
            .or_default()
            .entry(k[F])
            .or_insert_with(rational::zero) += p;
    }
    let decoder: BTreeMap<(u32, u32), u32> = posterior
        .into_iter()
        .map(|(key, by_f)| {
            let best = by_f
                .iter()
                .fold(None::<(&u32, &Rational)>, |acc, (f, p)| match acc {
                    Some((_, bp)) if bp >= p => acc,
                    _ => Some((f, p)),
                })
                .map(|(f, _)| *f)
                .expect("nonempty posterior");
            (key, best)
        })
        .collect();

    let mut joint = Joint::new(&["Y", "U", "Z", "G"]);
    let mut error = Rational::zero();
    for (k, p) in base.cells() {
        let z = decoder[&(k[U], k[Y])];
        if z != k[F] {
            error += p;
        }
        joint.add(vec![k[Y], k[U], z, k[G]], p.clone());
    }
    let (m, g, zy) = (
        joint.group(&["U"]),
        joint.group(&["G"]),
        joint.group(&["Z", "Y"]),
    );
    Ok(OneShotReport {
        error,
        leakage_zero: info::exact_cond_independent(&joint, &m, &g, &zy),
        leakage_bits: round_sig(info::conditional_mutual_information(&joint, &m, &g, &zy)),
    })
}

/// Set partitions of `0..n` as restricted growth strings, in lexicographic
/// order (the coarsest partition first).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    loop {
        out.push(a.clone());
        // rightmost position that may still grow
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_prefix = *a[..i].iter().max().expect("nonempty prefix");
            if a[i] <= max_prefix {
                a[i] += 1;
                for v in &mut a[i + 1..] {
                    *v = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (x, &b) in rgs.iter().enumerate() {
        blocks[b].push(x);
    }
    blocks
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSearch {
    /// First passing partition in canonical order, as blocks of sender
    /// indices.
    pub witness: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_labels: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PerfectSecurityReport>,
    /// Partitions checked up to and including the witness (all of them when
    /// none passes).
    pub examined: usize,
    pub total: usize,
    /// Only deterministic channels are searched: a missing witness does not
    /// rule out a randomized one.
    pub deterministic_only: bool,
}

/// Searches deterministic channels `u(x) = block(x)` over every set
/// partition of the sender's alphabet.
pub fn search_deterministic_u(
    dist: &JointDistribution,
    triple: &FunctionTriple,
    limits: &Limits,
) -> Result<PartitionSearch> {
    check_dist(triple, dist)?;
    let n = triple.x_len();
    if n > limits.max_partition_inputs {
        return Err(Error::SizeCap {
            what: "partition search inputs",
            needed: n as u128,
            cap: limits.max_partition_inputs as u128,
        });
    }
    let candidates = set_partitions(n);
    let total = candidates.len();
    let hit = candidates.par_iter().position_first(|rgs| {
        let channel = Channel::deterministic(&blocks_of(rgs), n).expect("valid partition");
        check_perfect(&channel, dist, triple).is_ok_and(|r| r.passes())
    });
    Ok(match hit {
        Some(i) => {
            let blocks = blocks_of(&candidates[i]);
            let channel = Channel::deterministic(&blocks, n)?;
            let labels = blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&x| triple.x_alphabet().label(x).to_string())
                        .collect()
                })
                .collect();
            PartitionSearch {
                report: Some(check_perfect(&channel, dist, triple)?),
                witness: Some(blocks),
                witness_labels: Some(labels),
                examined: i + 1,
                total,
                deterministic_only: true,
            }
        }
        None => PartitionSearch {
            witness: None,
            witness_labels: None,
            report: None,
            examined: total,
            total,
            deterministic_only: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::ValueTable;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
        assert_eq!(set_partitions(3)[0], vec![0, 0, 0]);
        assert_eq!(set_partitions(3)[4], vec![0, 1, 2]);
    }

    #[test]
    fn identity_channel_on_f_equals_x() {
        let xa = Alphabet::new(["a", "b", "c"]).unwrap();
        let ya = Alphabet::new(["0", "1"]).unwrap();
        let f = ValueTable::from_fn(3, 2, |x, _| ["a", "b", "c"][x]);
        let g = ValueTable::from_fn(3, 2, |x, y| format!("{x}{y}"));
        let t = FunctionTriple::new(xa.clone(), ya.clone(), f, g.clone(), g).unwrap();
        let ch = Channel::deterministic(&[vec![0], vec![1], vec![2]], 3).unwrap();
        let mut rng = rand::rngs::mock::StepRng::new(11, 7);
        for dist in [
            JointDistribution::uniform(xa.clone(), ya.clone()),
            crate::privacy::random_full_support(&xa, &ya, &mut rng),
        ] {
            assert!(check_perfect(&ch, &dist, &t).unwrap().passes());
        }
    }

    #[test]
    fn masked_and_uniform_passes_with_first_bit() {
        let t = fixtures::masked_and_swapped();
        let d = fixtures::masked_and_swapped_uniform();
        let ch = Channel::deterministic(&[vec![0, 1], vec![2, 3]], 4).unwrap();
        let r = check_perfect(&ch, &d, &t).unwrap();
        assert!(r.passes(), "{r:?}");
        let s = search_deterministic_u(&d, &t, &Limits::default()).unwrap();
        assert_eq!(s.witness, Some(vec![vec![0, 1], vec![2, 3]]));
        assert_eq!(s.total, 15);
    }

    #[test]
    fn masked_and_correlated_fails_everywhere() {
        let t = fixtures::masked_and_swapped();
        let d = fixtures::masked_and_swapped_correlated();
        let ch = Channel::deterministic(&[vec![0, 1], vec![2, 3]], 4).unwrap();
        let r = check_perfect(&ch, &d, &t).unwrap();
        assert!(r.zero_cond_entropy_ok);
        assert!(!r.privacy_ok);
        assert!(matches!(
            r.violating_cell,
            Some(ViolatingCell::Privacy { ref f, ref y, .. }) if f == "0" && y == "0"
        ));
        let s = search_deterministic_u(&d, &t, &Limits::default()).unwrap();
        assert_eq!(s.witness, None);
        assert_eq!((s.examined, s.total), (15, 15));
        assert!(s.deterministic_only);
    }

    #[test]
    fn constant_f_takes_the_coarsest_partition() {
        let t = FunctionTriple::new(
            Alphabet::numbered(3),
            Alphabet::numbered(2),
            ValueTable::from_fn(3, 2, |_, _| "c"),
            ValueTable::from_fn(3, 2, |x, y| format!("{x}{y}")),
            ValueTable::from_fn(3, 2, |_, _| "c"),
        )
        .unwrap();
        let d = JointDistribution::uniform(Alphabet::numbered(3), Alphabet::numbered(2));
        let s = search_deterministic_u(&d, &t, &Limits::default()).unwrap();
        assert_eq!(s.witness, Some(vec![vec![0, 1, 2]]));
        assert_eq!(s.examined, 1);
    }

    #[test]
    fn passing_channel_gives_error_free_private_one_shot() {
        let t = fixtures::masked_and_swapped();
        let d = fixtures::masked_and_swapped_uniform();
        let ch = Channel::deterministic(&[vec![0, 1], vec![2, 3]], 4).unwrap();
        let r = one_shot(&ch, &d, &t).unwrap();
        assert!(r.error.is_zero());
        assert!(r.leakage_zero);
        assert_eq!(r.leakage_bits, 0.0);
    }

    #[test]
    fn cap_and_shape_errors() {
        let t = fixtures::masked_and_swapped();
        let d = fixtures::masked_and_swapped_uniform();
        let limits = Limits {
            max_partition_inputs: 3,
            ..Limits::default()
        };
        assert!(matches!(
            search_deterministic_u(&d, &t, &limits),
            Err(Error::SizeCap { .. })
        ));
        let ch = Channel::deterministic(&[vec![0, 1]], 2).unwrap();
        assert!(check_perfect(&ch, &d, &t).is_err());
        assert!(Channel::new(
            Alphabet::numbered(2),
            vec![vec![rational::one(), rational::one()]]
        )
        .is_err());
    }

    #[test]
    fn channel_json_round_trip() {
        let ch = Channel::new(
            Alphabet::new(["u0", "u1"]).unwrap(),
            vec![
                vec![rational::ratio(1, 3), rational::ratio(2, 3)],
                vec![rational::one(), rational::zero()],
            ],
        )
        .unwrap();
        assert_eq!(Channel::from_json(&ch.to_json()).unwrap(), ch);
    }
}
