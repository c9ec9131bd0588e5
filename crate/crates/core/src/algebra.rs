//! Quotients `F2[X1..Xn]/I` for the two ideal families, with dense
//! bit-packed elements and a precomputed multiplication table.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Elements are packed into one `u64`, so no algebra may exceed this.
pub const MAX_DIM: usize = 64;
pub const DEFAULT_DIM_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealKind {
    MaximalPower,
    FieldIdeal,
}

/// Which ideal to factor by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealSpec {
    /// `m^{r+1}` where `m = (X1, .., Xn)`.
    MaximalPower { n: usize, r: usize },
    /// `(X1^2 + X1, .., Xn^2 + Xn)`.
    FieldIdeal { n: usize },
}

impl IdealSpec {
    pub fn maximal_power(n: usize, r: usize) -> Self {
        IdealSpec::MaximalPower { n, r }
    }

    pub fn field_ideal(n: usize) -> Self {
        IdealSpec::FieldIdeal { n }
    }

    pub fn n(&self) -> usize {
        match *self {
            IdealSpec::MaximalPower { n, .. } | IdealSpec::FieldIdeal { n } => n,
        }
    }

    pub fn r(&self) -> Option<usize> {
        match *self {
            IdealSpec::MaximalPower { r, .. } => Some(r),
            IdealSpec::FieldIdeal { .. } => None,
        }
    }

    pub fn kind(&self) -> IdealKind {
        match self {
            IdealSpec::MaximalPower { .. } => IdealKind::MaximalPower,
            IdealSpec::FieldIdeal { .. } => IdealKind::FieldIdeal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n() < 1 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if let Some(r) = self.r() {
            if r < 1 {
                return Err(Error::InvalidSpec("r must be at least 1".into()));
            }
        }
        Ok(())
    }

    /// Dimension of the quotient, or `None` if it does not fit in a `u128`.
    pub fn dim(&self) -> Option<u128> {
        match *self {
            IdealSpec::MaximalPower { n, r } => binomial((n + r) as u128, n.min(r) as u128),
            IdealSpec::FieldIdeal { n } => 1u128.checked_shl(u32::try_from(n).ok()?),
        }
    }
}

impl fmt::Display for IdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IdealSpec::MaximalPower { n, r } => write!(f, "F2[X1..X{n}]/m^{}", r + 1),
            IdealSpec::FieldIdeal { n } => write!(f, "F2[X1..X{n}]/(Xi^2+Xi)"),
        }
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Identifies the algebra an element lives in. Derived from the ideal spec,
/// so two constructions of the same quotient interoperate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraId(IdealSpec);

/// An element as a coefficient bitvector over the basis of its algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    bits: u64,
    algebra: AlgebraId,
}

impl Element {
    pub(crate) fn from_parts(bits: u64, algebra: AlgebraId) -> Self {
        Element { bits, algebra }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Coefficient of basis monomial `i`.
    pub fn coeff(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }
}

/// The factor algebra together with its ordered monomial basis and
/// structure constants.
#[derive(Debug, Clone)]
pub struct Algebra {
    spec: IdealSpec,
    basis: Vec<Monomial>,
    index: HashMap<Vec<u32>, usize>,
    mul_table: Vec<u64>,
    // mul_chunks[(i * chunks + c) * 256 + byte] = b_i * (byte placed at chunk c)
    mul_chunks: Vec<u64>,
    chunks: usize,
    // basis[i] = X_var * basis[parent] for every i > 0
    factors: Vec<(usize, usize)>,
    relations: Vec<Relation>,
}

/// A defining relation of the ideal, phrased so it can be checked on
/// generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Relation {
    /// `X_var * basis[parent] = 0`; together these cover every monomial of
    /// degree `r + 1`.
    Vanishing { var: usize, parent: usize, monomial: Monomial },
    /// `X_var^2 = X_var`.
    Idempotent { var: usize },
}

impl Relation {
    pub(crate) fn describe(&self, n: usize) -> String {
        match self {
            Relation::Vanishing { monomial, .. } => format!("{} = 0", monomial.render()),
            Relation::Idempotent { var } => {
                let x = Monomial::var(n, *var).render();
                format!("{x}^2 = {x}")
            }
        }
    }
}

impl Algebra {
    /// Builds the quotient with the default dimension cap.
    pub fn build(spec: IdealSpec) -> Result<Self> {
        Self::build_with_cap(spec, DEFAULT_DIM_CAP)
    }

    pub fn build_with_cap(spec: IdealSpec, cap: usize) -> Result<Self> {
        spec.validate()?;
        if cap > MAX_DIM {
            return Err(Error::InvalidSpec(format!(
                "dimension cap {cap} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        let dim = spec.dim().unwrap_or(u128::MAX);
        if dim > cap as u128 {
            return Err(Error::DimensionCapExceeded { dim, cap });
        }
        let n = spec.n();
        let mut basis = Vec::with_capacity(dim as usize);
        match spec {
            IdealSpec::MaximalPower { r, .. } => {
                for d in 0..=r as u32 {
                    basis.extend(Monomial::all_of_degree(n, d));
                }
            }
            IdealSpec::FieldIdeal { .. } => {
                for d in 0..=n as u32 {
                    basis.extend(
                        Monomial::all_of_degree(n, d)
                            .into_iter()
                            .filter(Monomial::is_squarefree),
                    );
                }
            }
        }
        debug_assert_eq!(basis.len() as u128, dim);
        let dim = basis.len();
        let index: HashMap<Vec<u32>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents().to_vec(), i))
            .collect();

        let mut algebra = Algebra {
            spec,
            basis,
            index,
            mul_table: Vec::new(),
            mul_chunks: Vec::new(),
            chunks: dim.div_ceil(8),
            factors: Vec::new(),
            relations: Vec::new(),
        };

        let mut table = vec![0u64; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let product = algebra.basis[i].mul(&algebra.basis[j]);
                table[i * dim + j] = algebra.reduce_bits(&product);
            }
        }
        algebra.mul_table = table;
        algebra.mul_chunks = build_chunks(&algebra.mul_table, dim, algebra.chunks);
        algebra.factors = algebra.basis_factors();
        algebra.relations = algebra.defining_relations();
        Ok(algebra)
    }

    fn basis_factors(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        self.basis
            .iter()
            .map(|m| {
                let Some(var) = m.exponents().iter().position(|&e| e > 0) else {
                    return (0, 0);
                };
                let mut parent = m.exponents().to_vec();
                parent[var] -= 1;
                debug_assert_eq!(parent.len(), n);
                (var, self.index[&parent])
            })
            .collect()
    }

    fn defining_relations(&self) -> Vec<Relation> {
        let n = self.n();
        match self.spec {
            IdealSpec::MaximalPower { r, .. } => Monomial::all_of_degree(n, r as u32 + 1)
                .into_iter()
                .map(|monomial| {
                    let var = monomial.exponents().iter().position(|&e| e > 0).unwrap();
                    let mut parent = monomial.exponents().to_vec();
                    parent[var] -= 1;
                    Relation::Vanishing { var, parent: self.index[&parent], monomial }
                })
                .collect(),
            IdealSpec::FieldIdeal { .. } => (0..n).map(|var| Relation::Idempotent { var }).collect(),
        }
    }

    pub fn spec(&self) -> IdealSpec {
        self.spec
    }

    pub fn id(&self) -> AlgebraId {
        AlgebraId(self.spec)
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Index of a residue monomial in the basis.
    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.exponents()).copied()
    }

    /// Product of basis monomials `i` and `j`, reduced.
    pub fn table_entry(&self, i: usize, j: usize) -> Element {
        self.wrap(self.mul_table[i * self.dim() + j])
    }

    pub(crate) fn wrap(&self, bits: u64) -> Element {
        Element { bits, algebra: self.id() }
    }

    /// Mask with one bit per basis monomial.
    pub fn full_mask(&self) -> u64 {
        if self.dim() == 64 {
            u64::MAX
        } else {
            (1u64 << self.dim()) - 1
        }
    }

    pub fn element(&self, bits: u64) -> Result<Element> {
        if bits & !self.full_mask() != 0 {
            return Err(Error::IndexError(format!(
                "bit pattern {bits:#x} has bits beyond dimension {}",
                self.dim()
            )));
        }
        Ok(self.wrap(bits))
    }

    pub fn zero(&self) -> Element {
        self.wrap(0)
    }

    pub fn one(&self) -> Element {
        self.wrap(1)
    }

    pub fn basis_element(&self, i: usize) -> Element {
        assert!(i < self.dim(), "basis index {i} out of range");
        self.wrap(1 << i)
    }

    /// The indeterminate `X_{var+1}` (zero-based).
    pub fn var(&self, var: usize) -> Element {
        assert!(var < self.n(), "variable index {var} out of range");
        let m = Monomial::var(self.n(), var);
        self.wrap(self.reduce_bits(&m))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..=self.full_mask()).map(move |bits| self.wrap(bits))
    }

    fn reduce_bits(&self, m: &Monomial) -> u64 {
        match self.spec {
            IdealSpec::MaximalPower { r, .. } => {
                if m.degree() as usize > r {
                    0
                } else {
                    1 << self.index[m.exponents()]
                }
            }
            IdealSpec::FieldIdeal { .. } => {
                let squarefree: Vec<u32> = m.exponents().iter().map(|&e| e.min(1)).collect();
                1 << self.index[&squarefree]
            }
        }
    }

    /// Normal form of an arbitrary monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Result<Element> {
        if m.n() != self.n() {
            return Err(Error::IndexError(format!(
                "monomial has {} exponents, algebra has {} indeterminates",
                m.n(),
                self.n()
            )));
        }
        Ok(self.wrap(self.reduce_bits(m)))
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.algebra == self.id() {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.wrap(a.bits ^ b.bits))
    }

    pub fn mul(&self, a: Element, b: Element) -> Result<Element> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.wrap(self.mul_bits(a.bits, b.bits)))
    }

    #[inline]
    pub(crate) fn mul_bits(&self, a: u64, b: u64) -> u64 {
        let (mut a, b) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
        let mut acc = 0;
        while a != 0 {
            let i = a.trailing_zeros() as usize;
            a &= a - 1;
            let base = i * self.chunks * 256;
            for c in 0..self.chunks {
                let byte = ((b >> (8 * c)) & 0xff) as usize;
                acc ^= self.mul_chunks[base + c * 256 + byte];
            }
        }
        acc
    }

    pub(crate) fn pow_bits(&self, a: u64, k: u64) -> u64 {
        let mut acc = 1;
        for _ in 0..k {
            acc = self.mul_bits(acc, a);
            if acc == 0 {
                break;
            }
        }
        acc
    }

    pub fn pow(&self, a: Element, k: u64) -> Result<Element> {
        self.check(&a)?;
        Ok(self.wrap(self.pow_bits(a.bits, k)))
    }

    /// Evaluates `p(images[0], .., images[n-1])`: every basis monomial of `p`
    /// is replaced by the corresponding product of image powers.
    pub fn substitute(&self, p: Element, images: &[Element]) -> Result<Element> {
        self.check(&p)?;
        if images.len() != self.n() {
            return Err(Error::IndexError(format!(
                "expected {} images, got {}",
                self.n(),
                images.len()
            )));
        }
        for img in images {
            self.check(img)?;
        }
        let image_bits: Vec<u64> = images.iter().map(|e| e.bits).collect();
        Ok(self.wrap(self.substitute_bits(p.bits, &image_bits)))
    }

    pub(crate) fn substitute_bits(&self, p: u64, images: &[u64]) -> u64 {
        // powers[k][e] = images[k]^e, extended on demand
        let mut powers: Vec<Vec<u64>> = images.iter().map(|_| vec![1]).collect();
        let mut acc = 0;
        let mut rest = p;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut term = 1u64;
            for (k, &e) in self.basis[i].exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[k];
                while table.len() <= e as usize {
                    let last = *table.last().unwrap();
                    let next = if last == 0 { 0 } else { self.mul_bits(last, images[k]) };
                    table.push(next);
                }
                term = self.mul_bits(term, table[e as usize]);
                if term == 0 {
                    break;
                }
            }
            acc ^= term;
        }
        acc
    }

    /// Images of every basis monomial under the endomorphism `X_k -> images[k]`,
    /// one word per basis index.
    pub(crate) fn columns_into(&self, images: &[u64], columns: &mut [u64]) {
        columns[0] = 1;
        for i in 1..self.dim() {
            let (var, parent) = self.factors[i];
            columns[i] = self.mul_bits(images[var], columns[parent]);
        }
    }

    /// First defining relation violated by the images, if any. `columns` must
    /// come from [`Algebra::columns_into`] on the same images.
    pub(crate) fn violated_relation(&self, images: &[u64], columns: &[u64]) -> Option<&Relation> {
        self.relations.iter().find(|rel| match **rel {
            Relation::Vanishing { var, parent, .. } => {
                self.mul_bits(images[var], columns[parent]) != 0
            }
            Relation::Idempotent { var } => self.mul_bits(images[var], images[var]) != images[var],
        })
    }

    /// Polynomial notation in basis order, e.g. `1+X1+X1*X2`; `0` for zero.
    pub fn render(&self, a: &Element) -> String {
        self.render_bits(a.bits)
    }

    pub fn render_bits(&self, bits: u64) -> String {
        if bits == 0 {
            return "0".to_string();
        }
        (0..self.dim())
            .filter(|i| (bits >> i) & 1 == 1)
            .map(|i| self.basis[i].render())
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Parses polynomial notation as produced by [`Algebra::render`]; terms
    /// need not be reduced (`X^3`, `X1*X1` are accepted).
    pub fn parse(&self, text: &str) -> Result<Element> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "0" {
            return Ok(self.zero());
        }
        let mut acc = 0u64;
        for term in text.split('+') {
            let mut exps = vec![0u32; self.n()];
            if term != "1" {
                for factor in term.split('*') {
                    let (name, power) = match factor.split_once('^') {
                        Some((name, p)) => (name, p.parse::<u32>().map_err(|_| bad_term(term))?),
                        None => (factor, 1),
                    };
                    let var = parse_var(name, self.n()).ok_or_else(|| bad_term(term))?;
                    exps[var] += power;
                }
            }
            acc ^= self.reduce_bits(&Monomial::new(exps));
        }
        Ok(self.wrap(acc))
    }
}

fn bad_term(term: &str) -> Error {
    Error::InvalidSpec(format!("cannot parse term `{term}`"))
}

fn parse_var(name: &str, n: usize) -> Option<usize> {
    let rest = name.strip_prefix('X')?;
    if rest.is_empty() {
        return (n == 1).then_some(0);
    }
    let k: usize = rest.parse().ok()?;
    (1..=n).contains(&k).then(|| k - 1)
}

fn build_chunks(table: &[u64], dim: usize, chunks: usize) -> Vec<u64> {
    let mut out = vec![0u64; dim * chunks * 256];
    for i in 0..dim {
        for c in 0..chunks {
            let base = (i * chunks + c) * 256;
            for byte in 1..256usize {
                let low = byte.trailing_zeros() as usize;
                let j = 8 * c + low;
                let entry = if j < dim { table[i * dim + j] } else { 0 };
                out[base + byte] = out[base + (byte & (byte - 1))] ^ entry;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> Algebra {
        Algebra::build(IdealSpec::maximal_power(1, 1)).unwrap()
    }

    #[test]
    fn dual_numbers_basis() {
        let a = d2();
        assert_eq!(a.dim(), 2);
        let names: Vec<_> = a.basis().iter().map(Monomial::render).collect();
        assert_eq!(names, ["1", "X"]);
    }

    #[test]
    fn two_variable_basis_orders() {
        let a = Algebra::build(IdealSpec::maximal_power(2, 1)).unwrap();
        let names: Vec<_> = a.basis().iter().map(Monomial::render).collect();
        assert_eq!(names, ["1", "X1", "X2"]);
        let b = Algebra::build(IdealSpec::maximal_power(2, 2)).unwrap();
        let names: Vec<_> = b.basis().iter().map(Monomial::render).collect();
        assert_eq!(names, ["1", "X1", "X2", "X1^2", "X1*X2", "X2^2"]);
    }

    #[test]
    fn field_ideal_basis_is_squarefree() {
        let a = Algebra::build(IdealSpec::field_ideal(1)).unwrap();
        assert_eq!(a.dim(), 2);
        let x = a.var(0);
        assert_eq!(a.mul(x, x).unwrap(), x);
        let b = Algebra::build(IdealSpec::field_ideal(3)).unwrap();
        assert_eq!(b.dim(), 8);
        assert!(b.basis().iter().all(Monomial::is_squarefree));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(
            Algebra::build(IdealSpec::maximal_power(0, 1)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            Algebra::build(IdealSpec::maximal_power(1, 0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            Algebra::build(IdealSpec::field_ideal(0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            Algebra::build_with_cap(IdealSpec::maximal_power(1, 1), 65),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn dimension_cap_enforced() {
        // C(7,3) = 35 > 24
        assert_eq!(
            Algebra::build(IdealSpec::maximal_power(3, 4)).unwrap_err(),
            Error::DimensionCapExceeded { dim: 35, cap: 24 }
        );
        assert!(Algebra::build_with_cap(IdealSpec::maximal_power(3, 4), 40).is_ok());
        assert_eq!(
            Algebra::build(IdealSpec::field_ideal(5)).unwrap_err(),
            Error::DimensionCapExceeded { dim: 32, cap: 24 }
        );
        assert!(matches!(
            Algebra::build(IdealSpec::maximal_power(200, 200)),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }

    #[test]
    fn reduce_monomial_examples() {
        let a = Algebra::build(IdealSpec::maximal_power(1, 2)).unwrap();
        assert!(a.reduce_monomial(&Monomial::new(vec![3])).unwrap().is_zero());
        assert_eq!(a.reduce_monomial(&Monomial::new(vec![2])).unwrap(), a.basis_element(2));

        let b = Algebra::build(IdealSpec::maximal_power(2, 1)).unwrap();
        assert!(b.reduce_monomial(&Monomial::new(vec![1, 1])).unwrap().is_zero());

        let f = Algebra::build(IdealSpec::field_ideal(1)).unwrap();
        assert_eq!(f.reduce_monomial(&Monomial::new(vec![3])).unwrap(), f.var(0));

        assert!(matches!(
            a.reduce_monomial(&Monomial::new(vec![1, 0])),
            Err(Error::IndexError(_))
        ));
    }

    #[test]
    fn dual_number_arithmetic() {
        let a = d2();
        let one = a.one();
        let x = a.var(0);
        let one_x = a.add(one, x).unwrap();
        assert!(a.add(one, one).unwrap().is_zero());
        assert_eq!(a.add(x, one_x).unwrap(), one);
        assert_eq!(a.add(x, a.zero()).unwrap(), x);
        assert!(a.mul(x, x).unwrap().is_zero());
        assert_eq!(a.mul(one_x, one_x).unwrap(), one);
    }

    #[test]
    fn generators_annihilate_each_other_at_r1() {
        let a = Algebra::build(IdealSpec::maximal_power(2, 1)).unwrap();
        assert!(a.mul(a.var(0), a.var(1)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = d2();
        let b = Algebra::build(IdealSpec::maximal_power(1, 2)).unwrap();
        assert_eq!(a.add(a.one(), b.one()), Err(Error::AlgebraMismatch));
        assert_eq!(a.mul(b.one(), a.one()), Err(Error::AlgebraMismatch));
        assert_eq!(a.substitute(a.var(0), &[b.var(0)]), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn substitution_examples() {
        let a = Algebra::build(IdealSpec::maximal_power(1, 2)).unwrap();
        let x = a.var(0);
        let x2 = a.parse("X^2").unwrap();
        let img = a.parse("X+X^2").unwrap();
        assert_eq!(a.substitute(x2, &[img]).unwrap(), x2);
        assert_eq!(a.substitute(x, &[x]).unwrap(), x);
        let one_x = a.parse("1+X").unwrap();
        // (1+X)^2 = 1 + X^2 here; in D2 it collapses to 1
        assert_eq!(a.substitute(x2, &[one_x]).unwrap(), a.parse("1+X^2").unwrap());
        let d = d2();
        let p = d.parse("X*X").unwrap();
        assert!(p.is_zero());
        let sq = d.pow(d.parse("1+X").unwrap(), 2).unwrap();
        assert_eq!(sq, d.one());
    }

    #[test]
    fn powers() {
        let a = Algebra::build(IdealSpec::maximal_power(1, 3)).unwrap();
        let x = a.var(0);
        assert!(a.pow(x, 4).unwrap().is_zero());
        assert_eq!(a.pow(x, 3).unwrap(), a.basis_element(3));
        assert_eq!(a.pow(x, 0).unwrap(), a.one());
        assert!(d2().pow(d2().var(0), 2).unwrap().is_zero());
    }

    #[test]
    fn render_and_parse_agree() {
        let a = Algebra::build(IdealSpec::maximal_power(2, 2)).unwrap();
        for e in a.elements() {
            assert_eq!(a.parse(&a.render(&e)).unwrap(), e);
        }
        assert_eq!(a.render(&a.parse("1+X1+X1*X2").unwrap()), "1+X1+X1*X2");
        assert!(a.parse("X3").is_err());
        assert!(a.parse("Y").is_err());
    }

    #[test]
    fn columns_match_substitution() {
        let a = Algebra::build(IdealSpec::maximal_power(2, 3)).unwrap();
        let images = [a.parse("X1+X2^2").unwrap().bits(), a.parse("X1+X2+X1*X2").unwrap().bits()];
        let mut cols = vec![0; a.dim()];
        a.columns_into(&images, &mut cols);
        for (i, &col) in cols.iter().enumerate() {
            assert_eq!(col, a.substitute_bits(1 << i, &images));
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Algebra::build(IdealSpec::maximal_power(3, 2)).unwrap();
        let b = Algebra::build(IdealSpec::maximal_power(3, 2)).unwrap();
        assert_eq!(a.basis(), b.basis());
        assert_eq!(a.mul_table, b.mul_table);
    }
}
