//! Exact joint distributions over small discrete tuples and the information
//! measures computed from them.
//!
//! Independence questions are answered with rational arithmetic. Entropies are
//! reported as `f64` bits; conditional mutual information is evaluated from
//! the exact likelihood ratio of every cell, so an exactly factorising joint
//! yields exactly `0.0`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::model::rational::{self, Rational};

/// Outcome of one variable, interned by the caller.
pub type Symbol = u32;

/// A pmf over tuples of named variables. Only positive-probability outcomes
/// are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint {
    vars: Vec<String>,
    cells: BTreeMap<Vec<Symbol>, Rational>,
}

impl Joint {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Self {
        Self {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            cells: BTreeMap::new(),
        }
    }

    /// Adds `p` to `outcome`. Zero masses are ignored.
    pub fn add(&mut self, outcome: Vec<Symbol>, p: Rational) {
        assert_eq!(outcome.len(), self.vars.len(), "outcome arity");
        if p.is_zero() {
            return;
        }
        *self.cells.entry(outcome).or_insert_with(rational::zero) += p;
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Index of variable `name`. Panics on unknown names, which are
    /// programming errors.
    pub fn var(&self, name: &str) -> usize {
        self.vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"))
    }

    pub fn group(&self, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| self.var(n)).collect()
    }

    pub fn total(&self) -> Rational {
        self.cells.values().sum()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<Symbol>, &Rational)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn marginal(&self, idx: &[usize]) -> HashMap<Vec<Symbol>, Rational> {
        let mut out: HashMap<Vec<Symbol>, Rational> = HashMap::new();
        for (k, p) in &self.cells {
            *out.entry(project(k, idx)).or_insert_with(rational::zero) += p;
        }
        out
    }
}

fn project(outcome: &[Symbol], idx: &[usize]) -> Vec<Symbol> {
    idx.iter().map(|&i| outcome[i]).collect()
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// A cell where `p(a,b,c) p(c) != p(a,c) p(b,c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dependence {
    pub a: Vec<Symbol>,
    pub b: Vec<Symbol>,
    pub c: Vec<Symbol>,
    #[serde(with = "rational::serde_str")]
    pub p_abc_times_p_c: Rational,
    #[serde(with = "rational::serde_str")]
    pub p_ac_times_p_bc: Rational,
}

/// First cell (in deterministic order) violating `A ⊥ B | C`, if any.
///
/// Only conditioning values with `p(c) > 0` are examined, and within them
/// only `a`, `b` with positive conditional marginals: any other cell has both
/// sides zero.
pub fn find_dependence(joint: &Joint, a: &[usize], b: &[usize], c: &[usize]) -> Option<Dependence> {
    let abc = joint.marginal(&concat(&concat(a, b), c));
    let ac = joint.marginal(&concat(a, c));
    let bc = joint.marginal(&concat(b, c));
    let pc = joint.marginal(c);

    let mut a_given: BTreeMap<Vec<Symbol>, Vec<Vec<Symbol>>> = BTreeMap::new();
    for k in ac.keys() {
        a_given
            .entry(k[a.len()..].to_vec())
            .or_default()
            .push(k[..a.len()].to_vec());
    }
    let mut b_given: BTreeMap<Vec<Symbol>, Vec<Vec<Symbol>>> = BTreeMap::new();
    for k in bc.keys() {
        b_given
            .entry(k[b.len()..].to_vec())
            .or_default()
            .push(k[..b.len()].to_vec());
    }
    let zero = rational::zero();
    for (cv, avs) in a_given.iter_mut() {
        avs.sort();
        let bvs = b_given.get_mut(cv).expect("same conditioning support");
        bvs.sort();
        let p_c = &pc[cv];
        for av in avs.iter() {
            let p_ac = &ac[&[av.as_slice(), cv].concat()];
            for bv in bvs.iter() {
                let key = [av.as_slice(), bv, cv].concat();
                let p_abc = abc.get(&key).unwrap_or(&zero);
                let p_bc = &bc[&[bv.as_slice(), cv].concat()];
                let lhs = p_abc * p_c;
                let rhs = p_ac * p_bc;
                if lhs != rhs {
                    return Some(Dependence {
                        a: av.clone(),
                        b: bv.clone(),
                        c: cv.clone(),
                        p_abc_times_p_c: lhs,
                        p_ac_times_p_bc: rhs,
                    });
                }
            }
        }
    }
    None
}

/// Exact test of `A ⊥ B | C`; an empty `c` tests plain independence.
pub fn exact_cond_independent(joint: &Joint, a: &[usize], b: &[usize], c: &[usize]) -> bool {
    find_dependence(joint, a, b, c).is_none()
}

/// Shannon entropy in bits of a (not necessarily normalised) collection of
/// masses; zero masses contribute nothing.
pub fn entropy<'a, I>(pmf: I) -> f64
where
    I: IntoIterator<Item = &'a Rational>,
{
    pmf.into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let q = rational::to_f64(p);
            -q * q.log2()
        })
        .sum()
}

pub fn joint_entropy(joint: &Joint, idx: &[usize]) -> f64 {
    entropy(joint.marginal(idx).values())
}

/// `H(A | C) = H(A, C) - H(C)`.
pub fn conditional_entropy(joint: &Joint, a: &[usize], c: &[usize]) -> f64 {
    joint_entropy(joint, &concat(a, c)) - joint_entropy(joint, c)
}

pub fn mutual_information(joint: &Joint, a: &[usize], b: &[usize]) -> f64 {
    conditional_mutual_information(joint, a, b, &[])
}

/// `I(A; B | C)` in bits, as `sum p(abc) log2(p(abc) p(c) / (p(ac) p(bc)))`
/// with each ratio formed exactly.
pub fn conditional_mutual_information(joint: &Joint, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let abc_idx = concat(&concat(a, b), c);
    let ac = joint.marginal(&concat(a, c));
    let bc = joint.marginal(&concat(b, c));
    let pc = joint.marginal(c);
    let abc = joint.marginal(&abc_idx);
    let (na, nb) = (a.len(), b.len());
    let mut cells: Vec<(&Vec<Symbol>, &Rational)> = abc.iter().collect();
    cells.sort();
    let mut total = 0.0;
    for (k, p_abc) in cells {
        let (av, rest) = k.split_at(na);
        let (bv, cv) = rest.split_at(nb);
        let num = p_abc * &pc[cv];
        let den = &ac[&[av, cv].concat()] * &bc[&[bv, cv].concat()];
        let ratio = num / den;
        if ratio.is_one() {
            continue;
        }
        total += rational::to_f64(p_abc) * rational::to_f64(&ratio).log2();
    }
    if total < 0.0 && total > -1e-12 {
        0.0
    } else {
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational::ratio;

    fn bits2(cells: &[((u32, u32), Rational)]) -> Joint {
        let mut j = Joint::new(&["A", "B"]);
        for ((a, b), p) in cells {
            j.add(vec![*a, *b], p.clone());
        }
        j
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[ratio(1, 2), ratio(1, 2)]), 1.0);
        assert_eq!(entropy(&vec![ratio(1, 4); 4]), 2.0);
        assert!((entropy(&[ratio(1, 4), ratio(3, 4)]) - 0.811_278_124_5).abs() < 1e-9);
        assert_eq!(entropy(&[ratio(1, 1), ratio(0, 1)]), 0.0);
    }

    #[test]
    fn product_is_independent() {
        let j = bits2(&[
            ((0, 0), ratio(1, 6)),
            ((0, 1), ratio(1, 3)),
            ((1, 0), ratio(1, 6)),
            ((1, 1), ratio(1, 3)),
        ]);
        assert!(exact_cond_independent(&j, &[0], &[1], &[]));
        assert_eq!(mutual_information(&j, &[0], &[1]), 0.0);
    }

    #[test]
    fn equal_bits_are_dependent() {
        let j = bits2(&[((0, 0), ratio(1, 2)), ((1, 1), ratio(1, 2))]);
        let dep = find_dependence(&j, &[0], &[1], &[]).unwrap();
        assert_ne!(dep.p_abc_times_p_c, dep.p_ac_times_p_bc);
        assert!((mutual_information(&j, &[0], &[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xor_is_dependent_given_the_mask() {
        let mut j = Joint::new(&["A", "B", "C"]);
        for b in 0..2u32 {
            for c in 0..2u32 {
                j.add(vec![b ^ c, b, c], ratio(1, 4));
            }
        }
        // pairwise independent but not given the mask
        assert!(exact_cond_independent(&j, &[0], &[1], &[]));
        assert!(!exact_cond_independent(&j, &[0], &[1], &[2]));
        assert!((conditional_mutual_information(&j, &[0], &[1], &[2]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cmi_matches_entropy_chain() {
        let mut j = Joint::new(&["A", "B", "C"]);
        let masses = [3, 1, 4, 1, 5, 9, 2, 6];
        let total: i64 = masses.iter().sum();
        for (i, m) in masses.iter().enumerate() {
            let i = i as u32;
            j.add(vec![i & 1, (i >> 1) & 1, i >> 2], ratio(*m, total));
        }
        let direct = conditional_mutual_information(&j, &[0], &[1], &[2]);
        let chain = conditional_entropy(&j, &[0], &[2]) - conditional_entropy(&j, &[0], &[1, 2]);
        assert!((direct - chain).abs() < 1e-9);
        assert!(direct > 0.0);
    }
}
