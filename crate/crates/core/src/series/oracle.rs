use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;

use super::formula::check_index;
use super::{Engine, MAX_PARTITION_SIZE};
use crate::combinatorics::{factorial, multiset_partitions, OrderedMultiset};
use crate::error::{Error, Result};
use crate::symbolic::Rational;

/// Recursive solver for `d(phi, I)` from the implicitly differentiated
/// equation `f(phi(a); a) = 0`, independent of the closed form.
///
/// Values are keyed by the multiplicity vector of `I`; a session caches
/// them for one perturbation and one engine.
pub struct Oracle<'a, E: Engine> {
    eng: &'a E,
    gammas: Vec<E::Arg>,
    memo: Option<RwLock<HashMap<Vec<u32>, E::Value>>>,
}

impl<'a, E: Engine> Oracle<'a, E> {
    pub fn new(eng: &'a E, gammas: Vec<E::Arg>) -> Self {
        Self {
            eng,
            gammas,
            memo: Some(RwLock::new(HashMap::new())),
        }
    }

    /// Oracle that recomputes every sub-multiset.
    pub fn unmemoized(eng: &'a E, gammas: Vec<E::Arg>) -> Self {
        Self {
            eng,
            gammas,
            memo: None,
        }
    }

    /// `d(phi, I)` for the multiset with multiplicities `mult`.
    pub fn coeff(&self, mult: &[u32]) -> Result<E::Value> {
        let n = check_index(mult, self.gammas.len())? as usize;
        if n > MAX_PARTITION_SIZE {
            return Err(Error::PartitionCap(n));
        }
        self.eng.require_order(n)?;
        self.solve(mult)
    }

    fn solve(&self, mult: &[u32]) -> Result<E::Value> {
        if let Some(memo) = &self.memo {
            if let Some(v) = memo.read().expect("memo lock").get(mult) {
                return Ok(v.clone());
            }
        }
        let v = self.compute(mult)?;
        if let Some(memo) = &self.memo {
            memo.write()
                .expect("memo lock")
                .entry(mult.to_vec())
                .or_insert_with(|| v.clone());
        }
        Ok(v)
    }

    fn compute(&self, mult: &[u32]) -> Result<E::Value> {
        let eng = self.eng;
        let n: u32 = mult.iter().sum();
        let inv_c1 = eng.term(&-Rational::one(), 0, -1, &[]);

        if n == 1 {
            let i = mult.iter().position(|&m| m == 1).expect("one entry");
            return Ok(eng.mul(&eng.alpha_pow(&self.gammas[i]), &inv_c1));
        }

        let mut sum = eng.zero();
        // terms where the k-th derivative falls on a^gamma z^gamma
        for (j, &mj) in mult.iter().enumerate() {
            if mj == 0 {
                continue;
            }
            let mut rest = mult.to_vec();
            rest[j] -= 1;
            let rest_set = OrderedMultiset::from_multiplicities(&rest);
            let g = &self.gammas[j];
            let power = eng.alpha_pow(g);
            for k in 1..n {
                let inner = self.parts_sum(&rest_set, k as usize)?;
                if eng.is_zero(&inner) {
                    continue;
                }
                let shift = eng.term(&Rational::one(), -(k as i64), 0, &[]);
                let coef = eng.mul(&eng.mul(&eng.falling(g, k), &power), &shift);
                let t = eng.mul(&coef, &inner);
                sum = eng.add(&sum, &eng.scale(&t, &Rational::from_integer(mj.into())));
            }
        }
        // terms from the higher derivatives of g
        let set = OrderedMultiset::from_multiplicities(mult);
        for k in 2..=n {
            let ck = eng.c(k as usize);
            if eng.is_zero(&ck) {
                continue;
            }
            let inner = self.parts_sum(&set, k as usize)?;
            let t = eng.mul(&ck, &inner);
            sum = eng.add(&sum, &eng.scale(&t, &Rational::from_integer(factorial(k))));
        }
        Ok(eng.mul(&sum, &inv_c1))
    }

    /// `sum_{J in Parts(I, k)} prod_i d(phi, J_i)`, one product per
    /// equivalence class.
    fn parts_sum(&self, set: &OrderedMultiset, k: usize) -> Result<E::Value> {
        let mut classes: BTreeMap<Vec<Vec<u32>>, u64> = BTreeMap::new();
        for p in multiset_partitions(set, k) {
            *classes.entry(p.class_key()).or_insert(0) += 1;
        }
        let eng = self.eng;
        let mut sum = eng.zero();
        for (key, count) in classes {
            let mut prod: Option<E::Value> = None;
            for part in &key {
                let v = self.solve(part)?;
                prod = Some(match prod {
                    None => v,
                    Some(p) => eng.mul(&p, &v),
                });
            }
            let prod = prod.expect("partitions have nonempty parts");
            sum = eng.add(
                &sum,
                &eng.scale(&prod, &Rational::from_integer(BigInt::from(count))),
            );
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{phi_coeff_with, ExactEngine};

    #[test]
    fn base_case() {
        let e = ExactEngine::new(1, 0);
        let o = Oracle::new(&e, vec![e.arg_int(3)]);
        let v = o.coeff(&[1]).unwrap().collapse();
        assert_eq!(v.poly().to_string(), "-1*alpha^3*c1^-1");
    }

    #[test]
    fn second_order_with_symbolic_gamma() {
        // 2 gamma alpha^(2 gamma - 1) / c1^2 - 2 c2 alpha^(2 gamma) / c1^3
        let e = ExactEngine::new(2, 1);
        let g = e.indeterminate(1).unwrap();
        let o = Oracle::new(&e, vec![g.clone()]);
        let v = o.coeff(&[2]).unwrap();
        assert_eq!(v.alpha_exponent().to_string(), "2*x1");
        assert_eq!(v.poly().to_string(), "2*alpha^-1*c1^-2*x1 + -2*c1^-3*c2");
        assert_eq!(v, phi_coeff_with(&e, &[2], &[g]).unwrap());
    }

    #[test]
    fn cap_and_order_errors() {
        let e = ExactEngine::new(12, 0);
        let o = Oracle::new(&e, vec![e.arg_int(0)]);
        assert_eq!(o.coeff(&[11]).unwrap_err(), Error::PartitionCap(11));
        let small = ExactEngine::new(2, 0);
        let o = Oracle::new(&small, vec![small.arg_int(0)]);
        assert!(matches!(o.coeff(&[3]), Err(Error::OrderTooLarge { .. })));
    }
}
