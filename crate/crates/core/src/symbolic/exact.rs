use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{
    int, rational_text, rational_to_f64, LaurentPoly, Monomial, Rational, Symbol, SymbolTable,
};
use crate::branch::{branch_pow, BranchPoint};
use crate::combinatorics::gen_binomial;
use crate::error::{Error, Result};

/// `alpha^e * p` where `e` is an affine exponent (a rational constant, or a
/// linear form in the pure indeterminates) and `p` a Laurent polynomial with
/// integer powers of `alpha`.
///
/// Every Taylor coefficient of the perturbed zero for a multiset `I` carries
/// the factor `alpha^(sum of gamma over I)`; keeping it apart lets the
/// remaining factor stay a Laurent polynomial even when the exponents are
/// not integers.
#[derive(Clone)]
pub struct ExactCoeff {
    alpha_exponent: LaurentPoly,
    poly: LaurentPoly,
}

impl ExactCoeff {
    pub fn new(alpha_exponent: LaurentPoly, poly: LaurentPoly) -> Result<Self> {
        if !alpha_exponent.same_table(&poly) {
            return Err(Error::SymbolTableMismatch);
        }
        Ok(Self {
            alpha_exponent,
            poly,
        })
    }

    pub fn from_poly(poly: LaurentPoly) -> Self {
        Self {
            alpha_exponent: LaurentPoly::zero(poly.table()),
            poly,
        }
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(LaurentPoly::zero(table))
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(LaurentPoly::one(table))
    }

    /// `alpha^x`.
    pub fn alpha_power(x: &LaurentPoly) -> Self {
        Self {
            alpha_exponent: x.clone(),
            poly: LaurentPoly::one(x.table()),
        }
    }

    pub fn alpha_exponent(&self) -> &LaurentPoly {
        &self.alpha_exponent
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.poly.table()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.alpha_exponent == other.alpha_exponent {
            return Ok(Self {
                alpha_exponent: self.alpha_exponent.clone(),
                poly: self.poly.checked_add(&other.poly)?,
            });
        }
        // alpha^(e + k) p = alpha^e (alpha^k p) for an integer k
        let diff = other.alpha_exponent.checked_sub(&self.alpha_exponent)?;
        match diff.constant_value() {
            Some(k) if k.is_integer() => {
                let k = i32::try_from(k.to_integer())
                    .map_err(|_| Error::PrefactorMismatch("integer shift out of range".into()))?;
                Ok(Self {
                    alpha_exponent: self.alpha_exponent.clone(),
                    poly: self
                        .poly
                        .checked_add(&other.poly.shift(Symbol::Alpha, k)?)?,
                })
            }
            _ => Err(Error::PrefactorMismatch(format!(
                "alpha^({}) and alpha^({})",
                self.alpha_exponent, other.alpha_exponent
            ))),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            alpha_exponent: self.alpha_exponent.checked_add(&other.alpha_exponent)?,
            poly: self.poly.checked_mul(&other.poly)?,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            alpha_exponent: self.alpha_exponent.clone(),
            poly: self.poly.scale(q),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Multiplies by `alpha^e` for a rational `e`.
    pub fn times_alpha_power(&self, e: &Rational) -> Self {
        let shift = LaurentPoly::constant(self.table(), e.clone());
        Self {
            alpha_exponent: &self.alpha_exponent + &shift,
            poly: self.poly.clone(),
        }
    }

    /// Folds the integer part of a constant exponent into the polynomial
    /// part, leaving a prefactor `alpha^f` with `0 <= f < 1`.
    pub fn collapse(&self) -> Self {
        let Some(e) = self.alpha_exponent.constant_value() else {
            return self.clone();
        };
        let whole = e.floor();
        if whole.is_zero() {
            return self.clone();
        }
        let k = i32::try_from(whole.to_integer()).expect("exponent fits i32");
        Self {
            alpha_exponent: LaurentPoly::constant(self.table(), e - whole),
            poly: self
                .poly
                .shift(Symbol::Alpha, k)
                .expect("alpha is in every series table"),
        }
    }

    /// Terms keyed by the total (rational) power of alpha and the remaining
    /// monomial. Only defined for a constant exponent.
    pub fn normalized(&self) -> Option<BTreeMap<(Rational, Monomial), Rational>> {
        let base = self.alpha_exponent.constant_value()?;
        let pos = self.table().position(Symbol::Alpha);
        let mut out = BTreeMap::new();
        for (m, q) in self.poly.terms() {
            let mut m = m.clone();
            let e = match pos {
                Some(p) => std::mem::take(&mut m[p]),
                None => 0,
            };
            out.insert((&base + int(e as i64), m), q.clone());
        }
        Some(out)
    }

    /// Rewrites the coefficient in terms of `alpha' = alpha^(1/s)`, i.e.
    /// replaces every power `alpha^e` by `alpha'^(e * s)`. Requires all terms
    /// to share one power of alpha.
    pub fn rescale_alpha(&self, s: &Rational) -> Result<Self> {
        let base = self.alpha_exponent.constant_value().ok_or_else(|| {
            Error::PrefactorMismatch("cannot rescale a non-constant exponent".into())
        })?;
        let table = self.table();
        let pos = table.position(Symbol::Alpha);
        let mut power = None;
        let mut terms = Vec::new();
        for (m, q) in self.poly.terms() {
            let mut m = m.clone();
            let e = pos.map_or(0, |p| std::mem::take(&mut m[p]));
            match power {
                None => power = Some(e),
                Some(p) if p != e => {
                    return Err(Error::PrefactorMismatch(
                        "terms carry different powers of alpha".into(),
                    ))
                }
                _ => {}
            }
            terms.push((m, q.clone()));
        }
        let total = (base + int(power.unwrap_or(0) as i64)) * s;
        Ok(Self {
            alpha_exponent: LaurentPoly::constant(table, total),
            poly: LaurentPoly::from_terms(table, terms)?,
        })
    }

    /// Specializes to the two-term base `1 + b z^beta`, whose expansion
    /// coefficients at its zero are `c_k = b C(beta, k) alpha^(beta - k)`.
    ///
    /// Each `c_k` contributes one factor `alpha^beta`; the number of such
    /// factors must be the same in every term, and that common count is
    /// moved into the exponent.
    pub fn substitute_twoterm(&self, b: &Rational, beta: &Rational) -> Result<Self> {
        if b.is_zero() || beta.is_zero() {
            return Err(Error::InvalidInput(
                "two-term base needs b != 0 and beta != 0".into(),
            ));
        }
        let table = self.table();
        let alpha_pos = table.position(Symbol::Alpha);
        let mut beta_count: Option<i64> = None;
        let mut terms = Vec::new();
        for (m, q) in self.poly.terms() {
            let mut m = m.clone();
            let mut coeff = q.clone();
            let mut alpha_shift = 0i64;
            let mut count = 0i64;
            for (pos, s) in table.symbols().iter().enumerate() {
                if let Symbol::C(k) = *s {
                    let e = std::mem::take(&mut m[pos]) as i64;
                    if e == 0 {
                        continue;
                    }
                    let ck = b * gen_binomial(beta, k as i64);
                    if ck.is_zero() {
                        if e < 0 {
                            return Err(Error::ZeroNegativeExponent(s.to_string()));
                        }
                        coeff = Rational::zero();
                    } else {
                        coeff *= pow_int(&ck, e);
                    }
                    alpha_shift -= k as i64 * e;
                    count += e;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            match beta_count {
                None => beta_count = Some(count),
                Some(c) if c != count => {
                    return Err(Error::PrefactorMismatch(
                        "terms are not homogeneous in the expansion coefficients".into(),
                    ))
                }
                _ => {}
            }
            if let Some(p) = alpha_pos {
                m[p] += i32::try_from(alpha_shift).expect("alpha power fits i32");
            }
            terms.push((m, coeff));
        }
        let shift = LaurentPoly::constant(table, beta * int(beta_count.unwrap_or(0)));
        Ok(Self {
            alpha_exponent: &self.alpha_exponent + &shift,
            poly: LaurentPoly::from_terms(table, terms)?,
        })
    }

    /// Replaces `c_k` by the given exact values (`values[k - 1]`).
    pub fn substitute_coeffs(&self, values: &[Rational]) -> Result<Self> {
        let table = self.table();
        let mut terms = Vec::new();
        for (m, q) in self.poly.terms() {
            let mut m = m.clone();
            let mut coeff = q.clone();
            for (pos, s) in table.symbols().iter().enumerate() {
                if let Symbol::C(k) = *s {
                    let e = std::mem::take(&mut m[pos]) as i64;
                    if e == 0 {
                        continue;
                    }
                    let v = values
                        .get(k as usize - 1)
                        .cloned()
                        .unwrap_or_else(Rational::zero);
                    if v.is_zero() {
                        if e < 0 {
                            return Err(Error::ZeroLeadingCoefficient);
                        }
                        coeff = Rational::zero();
                    } else {
                        coeff *= pow_int(&v, e);
                    }
                }
            }
            terms.push((m, coeff));
        }
        Ok(Self {
            alpha_exponent: self.alpha_exponent.clone(),
            poly: LaurentPoly::from_terms(table, terms)?,
        })
    }

    /// Numeric value: `alpha` is taken from the branch point (so that the
    /// prefactor uses the right branch), the other symbols from `bindings`.
    pub fn eval(
        &self,
        alpha: &BranchPoint,
        bindings: &HashMap<Symbol, Complex64>,
    ) -> Result<Complex64> {
        let mut b = bindings.clone();
        b.insert(Symbol::Alpha, alpha.value());
        let poly = self.poly.eval(&b)?;
        let exponent = match self.alpha_exponent.constant_value() {
            Some(e) => Complex64::new(rational_to_f64(&e), 0.0),
            None => self.alpha_exponent.eval(&b)?,
        };
        Ok(branch_pow(alpha, exponent) * poly)
    }
}

fn pow_int(q: &Rational, e: i64) -> Rational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

impl PartialEq for ExactCoeff {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.alpha_exponent == other.alpha_exponent {
            return self.poly == other.poly;
        }
        match (self.normalized(), other.normalized()) {
            (Some(a), Some(b)) => self.poly.same_table(&other.poly) && a == b,
            _ => false,
        }
    }
}

impl fmt::Debug for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactCoeff({self})")
    }
}

impl fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha_exponent.is_zero() {
            return write!(f, "{}", self.poly);
        }
        match self.alpha_exponent.constant_value() {
            Some(e) => write!(f, "alpha^({}) * ({})", rational_text(&e), self.poly),
            None => write!(f, "alpha^({}) * ({})", self.alpha_exponent, self.poly),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn adding_with_integer_offset_folds_into_alpha() {
        let t = SymbolTable::for_series(2, 0);
        let a = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(1, 2)));
        let b = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(3, 2)));
        let sum = a.checked_add(&b).unwrap();
        assert_eq!(sum.to_string(), "alpha^(1/2) * (1 + 1*alpha)");
        let c = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(1, 3)));
        assert!(matches!(
            a.checked_add(&c),
            Err(Error::PrefactorMismatch(_))
        ));
    }

    #[test]
    fn equality_compares_total_alpha_power() {
        let t = SymbolTable::for_series(1, 0);
        let a = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(5, 2)));
        let b = ExactCoeff::new(
            LaurentPoly::constant(&t, q(1, 2)),
            LaurentPoly::monomial(&t, q(1, 1), &[(Symbol::Alpha, 2)]).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.collapse(), a);
        let three = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(3, 1))).collapse();
        assert!(three.alpha_exponent().is_zero());
        let c = a.collapse();
        assert_eq!(c.to_string(), "alpha^(1/2) * (1*alpha^2)");
        let neg = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(-3, 2))).collapse();
        assert_eq!(neg.to_string(), "alpha^(1/2) * (1*alpha^-2)");
        assert_eq!(three.poly().to_string(), "1*alpha^3");
    }

    #[test]
    fn twoterm_substitution_of_linear_coefficient() {
        // -alpha^g / c1 with c1 = b beta alpha^(beta - 1)
        let t = SymbolTable::for_series(2, 0);
        let v = ExactCoeff::new(
            LaurentPoly::constant(&t, q(1, 3)),
            LaurentPoly::monomial(&t, q(-1, 1), &[(Symbol::C(1), -1)]).unwrap(),
        )
        .unwrap();
        let s = v.substitute_twoterm(&q(-1, 1), &q(2, 1)).unwrap();
        // -(1/(-2)) alpha^(1/3 - 2 + 1)
        let expect = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(-2, 3))).scale(&q(1, 2));
        assert_eq!(s, expect);
    }

    #[test]
    fn rescale_alpha_moves_power_into_exponent() {
        let t = SymbolTable::for_series(1, 0);
        let v = ExactCoeff::new(
            LaurentPoly::constant(&t, q(1, 2)),
            LaurentPoly::monomial(&t, q(7, 1), &[(Symbol::Alpha, 1)]).unwrap(),
        )
        .unwrap();
        let r = v.rescale_alpha(&q(2, 1)).unwrap();
        assert_eq!(r.alpha_exponent().constant_value(), Some(q(3, 1)));
        assert_eq!(r.poly().constant_value(), Some(q(7, 1)));
    }

    #[test]
    fn eval_uses_branch_of_alpha() {
        let t = SymbolTable::for_series(1, 0);
        let v = ExactCoeff::alpha_power(&LaurentPoly::constant(&t, q(1, 2)));
        let b0 = BranchPoint::new(4.0, 0.0, 0).unwrap();
        let b1 = BranchPoint::new(4.0, 0.0, 1).unwrap();
        let z0 = v.eval(&b0, &HashMap::new()).unwrap();
        let z1 = v.eval(&b1, &HashMap::new()).unwrap();
        assert!((z0 - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!((z1 + Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn substitute_coeffs_rejects_zero_c1() {
        let t = SymbolTable::for_series(2, 0);
        let v = ExactCoeff::from_poly(
            LaurentPoly::monomial(&t, q(1, 1), &[(Symbol::C(1), -1)]).unwrap(),
        );
        assert_eq!(
            v.substitute_coeffs(&[q(0, 1)]),
            Err(Error::ZeroLeadingCoefficient)
        );
        let w = v.substitute_coeffs(&[q(2, 1)]).unwrap();
        assert_eq!(w.poly().constant_value(), Some(q(1, 2)));
    }
}
