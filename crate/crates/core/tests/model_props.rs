use fnpriv::model::rational::{self, Rational};
use fnpriv::model::{parse_triple, Alphabet, FunctionTriple, JointDistribution, ValueTable};
use fnpriv::Limits;
use num_bigint::BigInt;
use proptest::prelude::*;

fn table(rows: usize, cols: usize, cells: &[u8]) -> ValueTable {
    ValueTable::from_fn(rows, cols, |x, y| format!("v{}", cells[x * cols + y]))
}

fn triple_strategy() -> impl Strategy<Value = FunctionTriple> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        let cells = proptest::collection::vec(0u8..4, r * c);
        (Just(r), Just(c), cells.clone(), cells.clone(), cells).prop_map(|(r, c, f, g, h)| {
            FunctionTriple::new(
                Alphabet::new((0..r).map(|i| format!("x{i}"))).unwrap(),
                Alphabet::new((0..c).map(|i| format!("y{i}"))).unwrap(),
                table(r, c, &f),
                table(r, c, &g),
                table(r, c, &h),
            )
            .unwrap()
        })
    })
}

fn dist_strategy() -> impl Strategy<Value = JointDistribution> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(0u32..5, r * c)
            .prop_filter("some mass", |w| w.iter().any(|&v| v > 0))
            .prop_map(move |w| {
                let total: u32 = w.iter().sum();
                let rows = (0..r)
                    .map(|x| {
                        (0..c)
                            .map(|y| Rational::new(BigInt::from(w[x * c + y]), BigInt::from(total)))
                            .collect()
                    })
                    .collect();
                JointDistribution::new(Alphabet::numbered(r), Alphabet::numbered(c), rows).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn triple_json_round_trips(t in triple_strategy()) {
        let text = serde_json::to_string(&t.to_json()).unwrap();
        prop_assert_eq!(parse_triple(&text).unwrap(), t);
    }

    #[test]
    fn iid_coordinates_recover_the_base(d in dist_strategy(), n in 1usize..4) {
        let block = d.iid_extend(n, &Limits::default()).unwrap();
        let total: Rational = block.support().map(|(_, _, p)| p.clone()).sum();
        prop_assert_eq!(total, rational::one());
        let base: Vec<Vec<Rational>> = (0..d.x_len())
            .map(|x| (0..d.y_len()).map(|y| d.p(x, y).clone()).collect())
            .collect();
        for i in 0..n {
            prop_assert_eq!(block.coordinate_marginal(d.x_len(), d.y_len(), n, i), base.clone());
        }
    }

    #[test]
    fn distribution_json_round_trips(d in dist_strategy()) {
        prop_assert_eq!(JointDistribution::from_json(&d.to_json()).unwrap(), d);
    }
}
