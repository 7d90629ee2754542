//! Protocol trees: alternating-speaker message trees with per-input
//! (possibly randomized) branching, plus exact transcript distributions.
//!
//! A node owned by a speaker maps each of the speaker's inputs that can reach
//! the node to a pmf over its children. The rectangle of a child is the
//! parent rectangle restricted, on the speaker's axis, to the inputs that
//! pick that child with positive probability. Because every branch depends
//! only on the speaker's own input and the path so far, the transcript law
//! factors as `p(m1|x) p(m2|y,m1) ...` by construction.

mod dot;
pub(crate) mod eval;
mod json;
pub use json::parse_protocol;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Alphabet, FunctionTriple, Rational, SubRect};

pub use eval::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

impl Party {
    pub fn other(self) -> Self {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        }
    }
}

/// Pmf over child indices, sorted by child, zero entries omitted.
pub type BranchPmf = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leaf {
    /// The value is sent as the final message; both parties output it.
    Announce(String),
    /// Each party outputs a value computed from its own input; nothing more
    /// is sent. Keys cover the leaf rectangle's rows (Alice) and columns (Bob).
    Local {
        alice: BTreeMap<usize, String>,
        bob: BTreeMap<usize, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Internal {
    pub speaker: Party,
    pub rect: SubRect,
    pub branch: BTreeMap<usize, BranchPmf>,
    pub children: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(Leaf),
    Internal(Internal),
}

impl Node {
    pub fn announce(value: impl Into<String>) -> Self {
        Node::Leaf(Leaf::Announce(value.into()))
    }

    /// Deterministic node: the speaker sends the index of the block holding
    /// its input. `blocks` must partition the speaker's axis of `rect`.
    pub fn split(
        speaker: Party,
        rect: SubRect,
        blocks: &[Vec<usize>],
        children: Vec<Node>,
    ) -> Self {
        let mut branch = BTreeMap::new();
        for (child, block) in blocks.iter().enumerate() {
            for &i in block {
                branch.insert(i, vec![(child, Rational::one())]);
            }
        }
        Node::Internal(Internal {
            speaker,
            rect,
            branch,
            children,
        })
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Internal(n) => 1 + n.children.iter().map(Node::depth).max().unwrap_or(0),
        }
    }

    fn count(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Internal(n) => 1 + n.children.iter().map(Node::count).sum::<usize>(),
        }
    }
}

impl Internal {
    pub fn axis_indices(&self) -> &[usize] {
        match self.speaker {
            Party::Alice => self.rect.rows(),
            Party::Bob => self.rect.cols(),
        }
    }

    pub fn branch_for(&self, input: usize) -> Option<&BranchPmf> {
        self.branch.get(&input)
    }

    /// Rectangle reached by `child`.
    pub fn child_rect(&self, child: usize) -> Result<SubRect> {
        let support: Vec<usize> = self
            .branch
            .iter()
            .filter(|(_, pmf)| pmf.iter().any(|(c, _)| *c == child))
            .map(|(&i, _)| i)
            .collect();
        match self.speaker {
            Party::Alice => self.rect.with_rows(support),
            Party::Bob => self.rect.with_cols(support),
        }
    }

    fn is_deterministic(&self) -> bool {
        self.branch.values().all(|pmf| pmf.len() == 1)
    }
}

/// A validated protocol over the input rectangle `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolTree {
    domain: SubRect,
    root: Node,
}

impl ProtocolTree {
    pub fn new(domain: SubRect, root: Node) -> Result<Self> {
        validate(&root, &domain, &mut Vec::new())?;
        Ok(Self { domain, root })
    }

    /// A protocol with no messages whose leaf announces `value`.
    pub fn constant(domain: SubRect, value: impl Into<String>) -> Self {
        Self {
            domain,
            root: Node::announce(value),
        }
    }

    pub fn domain(&self) -> &SubRect {
        &self.domain
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    pub fn is_deterministic(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Leaf(_) => true,
                Node::Internal(i) => i.is_deterministic() && i.children.iter().all(walk),
            }
        }
        walk(&self.root)
    }

    /// True when every announcing leaf's rectangle is monochromatic in `f`
    /// with the announced value, i.e. the tree is correct on every input.
    pub fn leaves_match(&self, triple: &FunctionTriple) -> bool {
        fn walk(n: &Node, rect: &SubRect, t: &FunctionTriple) -> bool {
            match n {
                Node::Leaf(Leaf::Announce(v)) => rect.cells().all(|(x, y)| t.f().label(x, y) == v),
                Node::Leaf(Leaf::Local { alice, bob }) => rect
                    .cells()
                    .all(|(x, y)| alice[&x] == t.f().label(x, y) && bob[&y] == t.f().label(x, y)),
                Node::Internal(i) => i
                    .children
                    .iter()
                    .enumerate()
                    .all(|(c, child)| i.child_rect(c).is_ok_and(|r| walk(child, &r, t))),
            }
        }
        walk(&self.root, &self.domain, triple)
    }

    pub fn check_covers(&self, x_len: usize, y_len: usize) -> Result<()> {
        if self.domain != SubRect::full(x_len, y_len) {
            return Err(Error::AlphabetMismatch(format!(
                "protocol domain is {}x{} rectangle, inputs are {x_len}x{y_len}",
                self.domain.rows().len(),
                self.domain.cols().len()
            )));
        }
        Ok(())
    }

    pub fn to_dot(&self, names: Option<(&Alphabet, &Alphabet)>) -> String {
        dot::render(self, names)
    }
}

fn validate(node: &Node, rect: &SubRect, path: &mut Vec<usize>) -> Result<()> {
    let here = |msg: String| Error::InvalidProtocol(format!("node {path:?}: {msg}"));
    match node {
        Node::Leaf(Leaf::Announce(_)) => Ok(()),
        Node::Leaf(Leaf::Local { alice, bob }) => {
            if !alice.keys().copied().eq(rect.rows().iter().copied()) {
                return Err(here(
                    "local alice outputs must cover exactly the leaf rows".into(),
                ));
            }
            if !bob.keys().copied().eq(rect.cols().iter().copied()) {
                return Err(here(
                    "local bob outputs must cover exactly the leaf columns".into(),
                ));
            }
            Ok(())
        }
        Node::Internal(n) => {
            if &n.rect != rect {
                return Err(here(format!(
                    "rect {:?}x{:?} does not match the inputs reaching it {:?}x{:?}",
                    n.rect.rows(),
                    n.rect.cols(),
                    rect.rows(),
                    rect.cols()
                )));
            }
            if n.children.is_empty() {
                return Err(here("internal node without children".into()));
            }
            if !n
                .branch
                .keys()
                .copied()
                .eq(n.axis_indices().iter().copied())
            {
                return Err(here(
                    "branch must be defined for exactly the speaker's inputs in rect".into(),
                ));
            }
            let mut reached = vec![false; n.children.len()];
            for (input, pmf) in &n.branch {
                let mut sum = Rational::zero();
                let mut last: Option<usize> = None;
                for (child, p) in pmf {
                    if *child >= n.children.len() {
                        return Err(here(format!(
                            "input {input} branches to missing child {child}"
                        )));
                    }
                    if last.is_some_and(|l| l >= *child) {
                        return Err(here(format!(
                            "branch of input {input} must list children in increasing order"
                        )));
                    }
                    if !p.is_positive() {
                        return Err(here(format!(
                            "branch of input {input} has non-positive probability"
                        )));
                    }
                    last = Some(*child);
                    reached[*child] = true;
                    sum += p;
                }
                if !sum.is_one() {
                    return Err(here(format!("branch of input {input} sums to {sum}")));
                }
            }
            if let Some(c) = reached.iter().position(|r| !r) {
                return Err(here(format!("child {c} is unreachable")));
            }
            for (c, child) in n.children.iter().enumerate() {
                let child_rect = n.child_rect(c)?;
                path.push(c);
                validate(child, &child_rect, path)?;
                path.pop();
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational::ratio;

    fn coin_tree() -> ProtocolTree {
        let rect = SubRect::full(2, 2);
        let branch = (0..2)
            .map(|x| (x, vec![(0, ratio(1, 2)), (1, ratio(1, 2))]))
            .collect();
        let root = Node::Internal(Internal {
            speaker: Party::Alice,
            rect: rect.clone(),
            branch,
            children: vec![Node::announce("0"), Node::announce("1")],
        });
        ProtocolTree::new(rect, root).unwrap()
    }

    #[test]
    fn accepts_randomized_root() {
        let t = coin_tree();
        assert!(!t.is_deterministic());
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn rejects_bad_pmf() {
        let rect = SubRect::full(2, 1);
        let branch = (0..2).map(|x| (x, vec![(0, ratio(1, 2))])).collect();
        let root = Node::Internal(Internal {
            speaker: Party::Alice,
            rect: rect.clone(),
            branch,
            children: vec![Node::announce("0")],
        });
        assert!(matches!(
            ProtocolTree::new(rect, root),
            Err(Error::InvalidProtocol(_))
        ));
    }

    #[test]
    fn rejects_child_rect_mismatch() {
        let rect = SubRect::full(2, 2);
        let inner = Node::split(
            Party::Bob,
            SubRect::full(2, 2),
            &[vec![0], vec![1]],
            vec![Node::announce("a"), Node::announce("b")],
        );
        let root = Node::split(
            Party::Alice,
            rect.clone(),
            &[vec![0], vec![1]],
            vec![inner, Node::announce("c")],
        );
        assert!(ProtocolTree::new(rect, root).is_err());
    }

    #[test]
    fn rejects_unreachable_child() {
        let rect = SubRect::full(2, 1);
        let root = Node::split(
            Party::Alice,
            rect.clone(),
            &[vec![0, 1]],
            vec![Node::announce("a"), Node::announce("b")],
        );
        assert!(ProtocolTree::new(rect, root).is_err());
    }
}
