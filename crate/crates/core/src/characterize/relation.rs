use serde::Serialize;

use super::union_find::DisjointSet;
use crate::error::{Error, Result};
use crate::model::{FunctionTriple, SubRect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Col,
}

/// One related pair and the opposite-axis index that relates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationEdge {
    pub a: usize,
    pub b: usize,
    pub via: usize,
}

/// Equivalence classes of one axis of a rectangle, with a spanning set of
/// witnessed edges for every non-singleton class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
    pub witness_edges: Vec<RelationEdge>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() <= 1
    }
}

/// The opposite-axis index witnessing `i ~ j` inside `rect`, if any.
///
/// Rows are related when some column of the rectangle gives them equal `f`
/// but different `h` (the value hidden from Bob); columns when some row gives
/// equal `f` but different `g` (hidden from Alice).
pub fn relation_witness(
    triple: &FunctionTriple,
    rect: &SubRect,
    axis: Axis,
    i: usize,
    j: usize,
) -> Option<usize> {
    let (f, g, h) = (triple.f(), triple.g(), triple.h());
    match axis {
        Axis::Row => rect
            .cols()
            .iter()
            .copied()
            .find(|&y| f.get(i, y) == f.get(j, y) && h.get(i, y) != h.get(j, y)),
        Axis::Col => rect
            .rows()
            .iter()
            .copied()
            .find(|&x| f.get(x, i) == f.get(x, j) && g.get(x, i) != g.get(x, j)),
    }
}

fn axis_indices(rect: &SubRect, axis: Axis) -> &[usize] {
    match axis {
        Axis::Row => rect.rows(),
        Axis::Col => rect.cols(),
    }
}

pub fn related(
    triple: &FunctionTriple,
    rect: &SubRect,
    axis: Axis,
    i: usize,
    j: usize,
) -> Result<bool> {
    let idx = axis_indices(rect, axis);
    for k in [i, j] {
        if idx.binary_search(&k).is_err() {
            return Err(Error::OutOfRange {
                what: "rectangle axis",
                index: k,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument(
            "relation is only defined on distinct indices".into(),
        ));
    }
    Ok(relation_witness(triple, rect, axis, i, j).is_some())
}

/// Connected components of the relation on one axis of `rect`. Blocks are
/// sorted internally and ordered by their smallest member.
pub fn equivalence_partition(triple: &FunctionTriple, rect: &SubRect, axis: Axis) -> Partition {
    let idx = axis_indices(rect, axis);
    let mut ds = DisjointSet::new(idx.len());
    let mut witness_edges = Vec::new();
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if ds.find(a) == ds.find(b) {
                continue;
            }
            if let Some(via) = relation_witness(triple, rect, axis, idx[a], idx[b]) {
                ds.union(a, b);
                witness_edges.push(RelationEdge {
                    a: idx[a],
                    b: idx[b],
                    via,
                });
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block = vec![usize::MAX; idx.len()];
    for (pos, &i) in idx.iter().enumerate() {
        let root = ds.find(pos);
        if root_block[root] == usize::MAX {
            root_block[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_block[root]].push(i);
    }
    Partition {
        blocks,
        witness_edges,
    }
}

pub fn is_monochromatic(triple: &FunctionTriple, rect: &SubRect) -> bool {
    let mut cells = rect.cells();
    let Some((x0, y0)) = cells.next() else {
        return true;
    };
    let v = triple.f().get(x0, y0);
    cells.all(|(x, y)| triple.f().get(x, y) == v)
}
