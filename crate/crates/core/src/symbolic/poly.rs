use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{parse_rational, rational_text, rational_to_f64, Rational};
use crate::combinatorics::factorial;
use crate::error::{Error, Result};

/// A ring generator. `Alpha` is the zero of the base function, `C(k)` its
/// k-th expansion coefficient, `X(i)` and `Nu` pure indeterminates and `T`
/// the variable of univariate test rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Alpha,
    C(u32),
    X(u32),
    Nu,
    T,
}

impl Symbol {
    /// Only `alpha` and `c1` may be inverted.
    pub fn allows_negative(self) -> bool {
        matches!(self, Symbol::Alpha | Symbol::C(1))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Alpha => write!(f, "alpha"),
            Symbol::C(k) => write!(f, "c{k}"),
            Symbol::X(i) => write!(f, "x{i}"),
            Symbol::Nu => write!(f, "nu"),
            Symbol::T => write!(f, "t"),
        }
    }
}

impl std::str::FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown symbol `{s}`"));
        match s {
            "alpha" => Ok(Symbol::Alpha),
            "nu" => Ok(Symbol::Nu),
            "t" => Ok(Symbol::T),
            _ => {
                let (head, idx) = s.split_at(1);
                let idx: u32 = idx.parse().map_err(|_| bad())?;
                match head {
                    "c" if idx >= 1 => Ok(Symbol::C(idx)),
                    "x" if idx >= 1 => Ok(Symbol::X(idx)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Ordered list of the symbols a polynomial may mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl SymbolTable {
    pub fn new(symbols: Vec<Symbol>) -> Result<Arc<Self>> {
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, &s) in symbols.iter().enumerate() {
            if index.insert(s, i).is_some() {
                return Err(Error::InvalidInput(format!("symbol {s} listed twice")));
            }
        }
        Ok(Arc::new(Self { symbols, index }))
    }

    /// `alpha, c1, ..., c_order, x1, ..., x_indeterminates`.
    pub fn for_series(order: usize, indeterminates: usize) -> Arc<Self> {
        let mut symbols = vec![Symbol::Alpha];
        symbols.extend((1..=order as u32).map(Symbol::C));
        symbols.extend((1..=indeterminates as u32).map(Symbol::X));
        Self::new(symbols).expect("distinct symbols")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, s: Symbol) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Largest `k` with `c_k` in the table.
    pub fn c_order(&self) -> usize {
        self.symbols
            .iter()
            .filter_map(|s| match s {
                Symbol::C(k) => Some(*k as usize),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Exponent vector over a symbol table.
pub type Monomial = Vec<i32>;

/// Multivariate Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a sorted map with zero coefficients pruned, which makes
/// equality structural and the text form canonical.
#[derive(Clone)]
pub struct LaurentPoly {
    table: Arc<SymbolTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Self {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<SymbolTable>, q: Rational) -> Self {
        let mut p = Self::zero(table);
        if !q.is_zero() {
            p.terms.insert(vec![0; table.len()], q);
        }
        p
    }

    pub fn symbol(table: &Arc<SymbolTable>, s: Symbol) -> Result<Self> {
        Self::monomial(table, Rational::one(), &[(s, 1)])
    }

    /// `q * prod s^e`.
    pub fn monomial(
        table: &Arc<SymbolTable>,
        q: Rational,
        powers: &[(Symbol, i32)],
    ) -> Result<Self> {
        let mut mono = vec![0i32; table.len()];
        for &(s, e) in powers {
            let pos = table
                .position(s)
                .ok_or_else(|| Error::InvalidInput(format!("symbol {s} is not in the table")))?;
            mono[pos] += e;
        }
        Self::from_terms(table, [(mono, q)])
    }

    /// Builds a polynomial from raw terms, merging duplicates and pruning
    /// zeros.
    pub fn from_terms(
        table: &Arc<SymbolTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(table);
        for (mono, q) in terms {
            if mono.len() != table.len() {
                return Err(Error::SymbolTableMismatch);
            }
            for (e, s) in mono.iter().zip(table.symbols()) {
                if *e < 0 && !s.allows_negative() {
                    return Err(Error::NegativeExponent(s.to_string()));
                }
            }
            p.accumulate(mono, q);
        }
        Ok(p)
    }

    fn accumulate(&mut self, mono: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial has no non-constant terms.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, q) = self.terms.iter().next()?;
                m.iter().all(|&e| e == 0).then(|| q.clone())
            }
            _ => None,
        }
    }

    pub fn same_table(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table == other.table
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if self.same_table(other) {
            Ok(())
        } else {
            Err(Error::SymbolTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.accumulate(m.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.accumulate(m, qa * qb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.table);
        }
        Self {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Multiplies by the monomial `alpha^e` (no-op on the zero polynomial).
    pub fn shift(&self, s: Symbol, e: i32) -> Result<Self> {
        let pos = self
            .table
            .position(s)
            .ok_or_else(|| Error::InvalidInput(format!("symbol {s} is not in the table")))?;
        let terms = self.terms.iter().map(|(m, q)| {
            let mut m = m.clone();
            m[pos] += e;
            (m, q.clone())
        });
        Self::from_terms(&self.table, terms)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `(p)_k = p (p - 1) ... (p - k + 1)`.
    pub fn falling(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for i in 0..k {
            let shifted = self - &Self::constant(&self.table, super::int(i as i64));
            acc = &acc * &shifted;
        }
        acc
    }

    /// `(p)_m / m!`, zero for negative `m`.
    pub fn binomial(&self, m: i64) -> Self {
        if m < 0 {
            return Self::zero(&self.table);
        }
        let m = m as u32;
        self.falling(m)
            .scale(&Rational::from_integer(factorial(m)).recip())
    }

    /// True iff every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|q| q.is_integer())
    }

    pub fn exponent(&self, mono: &Monomial, s: Symbol) -> i32 {
        self.table.position(s).map_or(0, |p| mono[p])
    }

    /// Formal partial derivative.
    pub fn derivative(&self, s: Symbol) -> Result<Self> {
        let pos = self
            .table
            .position(s)
            .ok_or_else(|| Error::InvalidInput(format!("symbol {s} is not in the table")))?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[pos] != 0)
            .map(|(m, q)| {
                let mut m = m.clone();
                let e = m[pos];
                m[pos] -= 1;
                (m, q * super::int(e as i64))
            });
        Self::from_terms(&self.table, terms)
    }

    /// Numeric value under the given substitution.
    pub fn eval(&self, bindings: &HashMap<Symbol, Complex64>) -> Result<Complex64> {
        let mut values = Vec::with_capacity(self.table.len());
        for (pos, s) in self.table.symbols().iter().enumerate() {
            let used = self.terms.keys().any(|m| m[pos] != 0);
            if !used {
                values.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let v = *bindings
                .get(s)
                .ok_or_else(|| Error::UnboundSymbol(s.to_string()))?;
            let negative = self.terms.keys().any(|m| m[pos] < 0);
            if negative && v == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroNegativeExponent(s.to_string()));
            }
            values.push(v);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, q) in &self.terms {
            let mut term = Complex64::new(rational_to_f64(q), 0.0);
            for (e, v) in m.iter().zip(&values) {
                if *e != 0 {
                    term *= v.powi(*e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Parses the canonical text form produced by `Display`.
    pub fn parse(text: &str, table: &Arc<SymbolTable>) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero(table));
        }
        let mut terms = Vec::new();
        for term in text.split(" + ") {
            let mut factors = term.split('*');
            let q = parse_rational(factors.next().unwrap_or(""))?;
            let mut mono = vec![0i32; table.len()];
            for f in factors {
                let (name, e) = match f.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<i32>()
                            .map_err(|_| Error::InvalidInput(format!("bad exponent in `{f}`")))?,
                    ),
                    None => (f, 1),
                };
                let s: Symbol = name.parse()?;
                let pos = table.position(s).ok_or_else(|| {
                    Error::InvalidInput(format!("symbol {s} is not in the table"))
                })?;
                mono[pos] += e;
            }
            terms.push((mono, q));
        }
        Self::from_terms(table, terms)
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_table(other) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Canonical text: terms in ascending exponent-vector order joined by
/// `" + "`, each written `coeff*sym^e*...` with exponent 1 left implicit.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", rational_text(q))?;
            for (e, s) in m.iter().zip(self.table.symbols()) {
                match e {
                    0 => {}
                    1 => write!(f, "*{s}")?,
                    _ => write!(f, "*{s}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
        }
    }
}

// The operator forms panic on a table mismatch; use the `checked_*` methods
// where the tables are not known to agree.
impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("symbol table mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("symbol table mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("symbol table mismatch")
    }
}
