use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BranchPmf, Internal, Leaf, Node, Party, ProtocolTree};
use crate::error::{Error, Result};
use crate::model::rational::{self, Rational};

/// The public view of one execution: the child index chosen at every
/// internal node, followed by the announced value when the leaf announces
/// one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<String>,
}

impl Transcript {
    /// Compact form such as `0.1|v`, used as a label in reports.
    pub fn render(&self) -> String {
        let msgs: Vec<String> = self.messages.iter().map(usize::to_string).collect();
        match &self.output {
            Some(v) => format!("{}|{v}", msgs.join(".")),
            None => msgs.join("."),
        }
    }
}

/// Draws a child from a branch pmf. Single-entry pmfs consume no randomness.
pub(crate) fn sample_child<R: Rng + ?Sized>(pmf: &BranchPmf, rng: &mut R) -> usize {
    if pmf.len() == 1 {
        return pmf[0].0;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (child, p) in pmf {
        acc += rational::to_f64(p);
        if u < acc {
            return *child;
        }
    }
    pmf[pmf.len() - 1].0
}

impl ProtocolTree {
    fn check_input(&self, x: usize, y: usize) -> Result<()> {
        if !self.domain.contains_row(x) {
            return Err(Error::OutOfRange {
                what: "protocol rows",
                index: x,
            });
        }
        if !self.domain.contains_col(y) {
            return Err(Error::OutOfRange {
                what: "protocol columns",
                index: y,
            });
        }
        Ok(())
    }

    /// Runs the protocol on `(x, y)`, drawing randomized branches from `rng`.
    pub fn evaluate<R: Rng + ?Sized>(&self, x: usize, y: usize, rng: &mut R) -> Result<Transcript> {
        self.walk(x, y, |pmf| Ok(sample_child(pmf, rng)))
    }

    /// Runs a protocol whose branches on this input are all deterministic.
    pub fn evaluate_deterministic(&self, x: usize, y: usize) -> Result<Transcript> {
        self.walk(x, y, |pmf| match pmf.as_slice() {
            [(c, _)] => Ok(*c),
            _ => Err(Error::NeedsSampler),
        })
    }

    fn walk<F>(&self, x: usize, y: usize, mut choose: F) -> Result<Transcript>
    where
        F: FnMut(&BranchPmf) -> Result<usize>,
    {
        self.check_input(x, y)?;
        let mut node = &self.root;
        let mut messages = Vec::new();
        loop {
            match node {
                Node::Leaf(leaf) => {
                    return Ok(Transcript {
                        messages,
                        output: announced(leaf),
                    })
                }
                Node::Internal(n) => {
                    let c = choose(speaker_branch(n, x, y))?;
                    messages.push(c);
                    node = &n.children[c];
                }
            }
        }
    }

    /// Exact conditional law of the transcript given `(x, y)`.
    pub fn transcript_pmf(&self, x: usize, y: usize) -> Result<BTreeMap<Transcript, Rational>> {
        self.check_input(x, y)?;
        let mut out = BTreeMap::new();
        let mut stack: Vec<(&Node, Vec<usize>, Rational)> =
            vec![(&self.root, Vec::new(), Rational::one())];
        while let Some((node, messages, p)) = stack.pop() {
            match node {
                Node::Leaf(leaf) => {
                    let t = Transcript {
                        messages,
                        output: announced(leaf),
                    };
                    *out.entry(t).or_insert_with(rational::zero) += p;
                }
                Node::Internal(n) => {
                    for (c, q) in speaker_branch(n, x, y) {
                        let mut m = messages.clone();
                        m.push(*c);
                        stack.push((&n.children[*c], m, &p * q));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The leaf reached by following `messages` from the root.
    pub fn leaf_at(&self, messages: &[usize]) -> Option<&Leaf> {
        let mut node = &self.root;
        for &m in messages {
            match node {
                Node::Internal(n) => node = n.children.get(m)?,
                Node::Leaf(_) => return None,
            }
        }
        match node {
            Node::Leaf(l) => Some(l),
            Node::Internal(_) => None,
        }
    }

    /// `(alice_output, bob_output)` after the execution producing `t` on
    /// input `(x, y)`.
    pub fn outputs(&self, t: &Transcript, x: usize, y: usize) -> Option<(&str, &str)> {
        match self.leaf_at(&t.messages)? {
            Leaf::Announce(v) => Some((v, v)),
            Leaf::Local { alice, bob } => Some((alice.get(&x)?, bob.get(&y)?)),
        }
    }
}

fn announced(leaf: &Leaf) -> Option<String> {
    match leaf {
        Leaf::Announce(v) => Some(v.clone()),
        Leaf::Local { .. } => None,
    }
}

fn speaker_branch(n: &Internal, x: usize, y: usize) -> &BranchPmf {
    let input = match n.speaker {
        Party::Alice => x,
        Party::Bob => y,
    };
    // validation guarantees every input reaching the node has a branch
    n.branch_for(input)
        .expect("input reaches node outside its rectangle")
}
