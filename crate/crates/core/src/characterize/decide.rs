use std::collections::VecDeque;

use serde::Serialize;
use serde_json::{json, Value};

use super::relation::{equivalence_partition, is_monochromatic, Axis, Partition, RelationEdge};
use crate::model::{FunctionTriple, SubRect};
use crate::protocol::{Node, Party, ProtocolTree};

/// Position of an index in an ordering certificate: every element after the
/// first is related to some earlier element, witnessed by `via`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via: Option<usize>,
}

/// A forbidden sub-rectangle: not monochromatic, and each axis collapses to
/// a single equivalence class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForbiddenWitness {
    pub rect: SubRect,
    pub distinct_values: [(usize, usize); 2],
    pub row_chain: Vec<ChainLink>,
    pub col_chain: Vec<ChainLink>,
}

impl ForbiddenWitness {
    /// Checks the certificate directly against the relation definitions,
    /// without recomputing partitions.
    pub fn certify(&self, triple: &FunctionTriple) -> bool {
        let [(x1, y1), (x2, y2)] = self.distinct_values;
        if !self.rect.contains(x1, y1) || !self.rect.contains(x2, y2) {
            return false;
        }
        if triple.f().get(x1, y1) == triple.f().get(x2, y2) {
            return false;
        }
        chain_ok(triple, &self.rect, Axis::Row, &self.row_chain)
            && chain_ok(triple, &self.rect, Axis::Col, &self.col_chain)
    }
}

fn chain_ok(triple: &FunctionTriple, rect: &SubRect, axis: Axis, chain: &[ChainLink]) -> bool {
    let expected = match axis {
        Axis::Row => rect.rows(),
        Axis::Col => rect.cols(),
    };
    let mut seen: Vec<usize> = chain.iter().map(|l| l.index).collect();
    seen.sort_unstable();
    if seen != expected {
        return false;
    }
    chain
        .iter()
        .enumerate()
        .all(|(pos, link)| match (pos, link.parent, link.via) {
            (0, None, None) => true,
            (0, _, _) => false,
            (_, Some(p), Some(via)) => {
                let earlier = chain[..pos].iter().any(|l| l.index == p);
                let pair_ok = match axis {
                    Axis::Row => {
                        rect.contains_col(via)
                            && triple.f().get(link.index, via) == triple.f().get(p, via)
                            && triple.h().get(link.index, via) != triple.h().get(p, via)
                    }
                    Axis::Col => {
                        rect.contains_row(via)
                            && triple.f().get(via, link.index) == triple.f().get(via, p)
                            && triple.g().get(via, link.index) != triple.g().get(via, p)
                    }
                };
                earlier && pair_ok
            }
            _ => false,
        })
}

/// Breadth-first order over the spanning edges, rooted at the smallest index.
fn chain_from(block: &[usize], edges: &[RelationEdge]) -> Vec<ChainLink> {
    let mut chain = vec![ChainLink {
        index: block[0],
        parent: None,
        via: None,
    }];
    let mut placed = vec![block[0]];
    let mut queue = VecDeque::from([block[0]]);
    while let Some(u) = queue.pop_front() {
        for e in edges {
            let v = if e.a == u {
                e.b
            } else if e.b == u {
                e.a
            } else {
                continue;
            };
            if !placed.contains(&v) {
                placed.push(v);
                chain.push(ChainLink {
                    index: v,
                    parent: Some(u),
                    via: Some(e.via),
                });
                queue.push_back(v);
            }
        }
    }
    chain
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Computable(ProtocolTree),
    NotComputable(ForbiddenWitness),
}

impl Decision {
    pub fn is_computable(&self) -> bool {
        matches!(self, Decision::Computable(_))
    }

    pub fn protocol(&self) -> Option<&ProtocolTree> {
        match self {
            Decision::Computable(t) => Some(t),
            Decision::NotComputable(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&ForbiddenWitness> {
        match self {
            Decision::Computable(_) => None,
            Decision::NotComputable(w) => Some(w),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Decision::Computable(tree) => json!({
                "verdict": "computable",
                "protocol": tree.to_json(),
            }),
            Decision::NotComputable(w) => json!({
                "verdict": "forbidden",
                "rect": w.rect,
                "distinct_values": w.distinct_values,
                "chains": { "rows": w.row_chain, "cols": w.col_chain },
            }),
        }
    }
}

/// Decides secure computability of the triple and, when computable,
/// synthesizes a deterministic protocol.
///
/// On every non-monochromatic rectangle Alice speaks if her rows split into
/// two or more classes, otherwise Bob if his columns do; a rectangle where
/// neither axis splits is forbidden and is returned as the witness.
pub fn decide(triple: &FunctionTriple) -> Decision {
    let full = SubRect::full(triple.x_len(), triple.y_len());
    match synthesize(triple, &full) {
        Ok(root) => Decision::Computable(
            ProtocolTree::new(full, root).expect("synthesized protocols are structurally valid"),
        ),
        Err(w) => Decision::NotComputable(*w),
    }
}

fn synthesize(triple: &FunctionTriple, rect: &SubRect) -> Result<Node, Box<ForbiddenWitness>> {
    if is_monochromatic(triple, rect) {
        let (x, y) = rect.cells().next().expect("rectangles are nonempty");
        return Ok(Node::announce(triple.f().label(x, y)));
    }
    let rows = equivalence_partition(triple, rect, Axis::Row);
    if !rows.is_trivial() {
        return split(triple, rect, Party::Alice, &rows);
    }
    let cols = equivalence_partition(triple, rect, Axis::Col);
    if !cols.is_trivial() {
        return split(triple, rect, Party::Bob, &cols);
    }
    Err(Box::new(witness(triple, rect, &rows, &cols)))
}

fn split(
    triple: &FunctionTriple,
    rect: &SubRect,
    speaker: Party,
    p: &Partition,
) -> Result<Node, Box<ForbiddenWitness>> {
    let children = p
        .blocks
        .iter()
        .map(|block| {
            let sub = match speaker {
                Party::Alice => rect.with_rows(block.clone()),
                Party::Bob => rect.with_cols(block.clone()),
            }
            .expect("blocks are nonempty");
            synthesize(triple, &sub)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Node::split(speaker, rect.clone(), &p.blocks, children))
}

fn witness(
    triple: &FunctionTriple,
    rect: &SubRect,
    rows: &Partition,
    cols: &Partition,
) -> ForbiddenWitness {
    let first = rect.cells().next().expect("rectangles are nonempty");
    let v = triple.f().get(first.0, first.1);
    let other = rect
        .cells()
        .find(|&(x, y)| triple.f().get(x, y) != v)
        .expect("witness rectangles are not monochromatic");
    ForbiddenWitness {
        rect: rect.clone(),
        distinct_values: [first, other],
        row_chain: chain_from(&rows.blocks[0], &rows.witness_edges),
        col_chain: chain_from(&cols.blocks[0], &cols.witness_edges),
    }
}

/// True iff `rect` is forbidden: not monochromatic, with a single row class
/// and a single column class under the relations restricted to `rect`.
pub fn verify_witness(triple: &FunctionTriple, rect: &SubRect) -> bool {
    rect.validate(triple.x_len(), triple.y_len()).is_ok()
        && !is_monochromatic(triple, rect)
        && equivalence_partition(triple, rect, Axis::Row).len() == 1
        && equivalence_partition(triple, rect, Axis::Col).len() == 1
}
