//! Secure-computability decision for function triples.
//!
//! Rows `x1 ~ x2` are related inside a rectangle when some column gives them
//! the same `f` value but different `h` values: a private protocol can never
//! let Alice's messages tell them apart. Columns are related symmetrically
//! through `g`. A triple is securely computable exactly when recursively
//! splitting rectangles along the equivalence classes of these relations
//! always reaches monochromatic rectangles; the splitting itself is the
//! protocol.

mod decide;
mod relation;
mod union_find;

pub use decide::{decide, verify_witness, ChainLink, Decision, ForbiddenWitness};
pub use relation::{
    equivalence_partition, is_monochromatic, related, relation_witness, Axis, Partition,
    RelationEdge,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{FunctionTriple, SubRect, ValueTable};

    fn full(t: &FunctionTriple) -> SubRect {
        SubRect::full(t.x_len(), t.y_len())
    }

    #[test]
    fn mixed_3x3_relations() {
        let t = fixtures::mixed_3x3();
        let r = full(&t);
        assert!(related(&t, &r, Axis::Row, 1, 2).unwrap());
        assert_eq!(relation_witness(&t, &r, Axis::Row, 1, 2), Some(1));
        assert!(!related(&t, &r, Axis::Row, 0, 1).unwrap());
        assert!(!related(&t, &r, Axis::Row, 0, 2).unwrap());
        assert!(related(&t, &r, Axis::Col, 0, 1).unwrap());
        assert_eq!(relation_witness(&t, &r, Axis::Col, 0, 1), Some(0));
    }

    #[test]
    fn related_rejects_outside_or_equal_indices() {
        let t = fixtures::mixed_3x3();
        let r = SubRect::new(vec![0, 1], vec![0]).unwrap();
        assert!(related(&t, &r, Axis::Row, 0, 2).is_err());
        assert!(related(&t, &r, Axis::Row, 1, 1).is_err());
    }

    #[test]
    fn constant_hidden_functions_relate_nothing() {
        let base = fixtures::mixed_3x3();
        let c = ValueTable::from_fn(3, 3, |_, _| "c");
        let t = FunctionTriple::new(
            base.x_alphabet().clone(),
            base.y_alphabet().clone(),
            base.f().clone(),
            c.clone(),
            c,
        )
        .unwrap();
        for axis in [Axis::Row, Axis::Col] {
            let p = equivalence_partition(&t, &full(&t), axis);
            assert_eq!(p.blocks, vec![vec![0], vec![1], vec![2]]);
            assert!(p.witness_edges.is_empty());
        }
        assert!(decide(&t).is_computable());
    }

    #[test]
    fn mixed_3x3_partitions() {
        let t = fixtures::mixed_3x3();
        let rows = equivalence_partition(&t, &full(&t), Axis::Row);
        assert_eq!(rows.blocks, vec![vec![0], vec![1, 2]]);
        assert_eq!(
            rows.witness_edges,
            vec![RelationEdge { a: 1, b: 2, via: 1 }]
        );
        let cols = equivalence_partition(&t, &full(&t), Axis::Col);
        assert_eq!(cols.blocks, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn monochromatic_cases() {
        let t = fixtures::mixed_3x3();
        assert!(is_monochromatic(
            &t,
            &SubRect::new(vec![1, 2], vec![1]).unwrap()
        ));
        assert!(!is_monochromatic(&t, &full(&t)));
        assert!(is_monochromatic(
            &t,
            &SubRect::new(vec![2], vec![0]).unwrap()
        ));
    }

    #[test]
    fn mixed_3x3_is_computable_and_correct() {
        let t = fixtures::mixed_3x3();
        let d = decide(&t);
        let tree = d.protocol().expect("computable");
        assert!(tree.leaves_match(&t));
        assert_eq!(
            tree.evaluate_deterministic(0, 2).unwrap().output.as_deref(),
            Some("1")
        );
        assert_eq!(
            tree.evaluate_deterministic(2, 0).unwrap().output.as_deref(),
            Some("2")
        );
        assert_eq!(
            tree.transcript_pmf(1, 1).unwrap(),
            tree.transcript_pmf(2, 1).unwrap()
        );
        assert!(!verify_witness(&t, &full(&t)));
    }

    #[test]
    fn classic_privacy_negatives() {
        for t in [
            fixtures::mixed_3x3_standard(),
            fixtures::and_standard(),
            fixtures::masked_and(),
        ] {
            let d = decide(&t);
            let w = d.witness().expect("not computable");
            assert_eq!(w.rect, full(&t));
            assert!(verify_witness(&t, &w.rect));
            assert!(w.certify(&t));
        }
    }

    #[test]
    fn monochromatic_rect_is_never_a_witness() {
        let t = fixtures::and_standard();
        assert!(!verify_witness(
            &t,
            &SubRect::new(vec![0], vec![0, 1]).unwrap()
        ));
    }

    #[test]
    fn tampered_certificate_fails() {
        let t = fixtures::mixed_3x3_standard();
        let mut w = decide(&t).witness().unwrap().clone();
        w.distinct_values[1] = w.distinct_values[0];
        assert!(!w.certify(&t));
        let mut w = decide(&t).witness().unwrap().clone();
        w.row_chain.pop();
        assert!(!w.certify(&t));
    }

    #[test]
    fn decision_json_shapes() {
        let yes = decide(&fixtures::mixed_3x3()).to_json();
        assert_eq!(yes["verdict"], "computable");
        assert!(yes["protocol"]["root"]["speaker"].is_string());
        let no = decide(&fixtures::and_standard()).to_json();
        assert_eq!(no["verdict"], "forbidden");
        assert_eq!(no["rect"]["rows"], serde_json::json!([0, 1]));
        assert!(no["chains"]["rows"].is_array());
    }
}
