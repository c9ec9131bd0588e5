//! Endomorphisms given by generator images, and exhaustive enumeration of
//! the automorphism group.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraId, Element, IdealSpec};
use crate::error::{Error, Result};
use crate::invariants::gl_order;
use crate::linalg::{rank_of_words, BitMatrix};

pub const DEFAULT_BRUTE_FORCE_BUDGET: u64 = 1 << 24;
pub const DEFAULT_STRUCTURED_BUDGET: u64 = 1 << 28;

/// An algebra endomorphism `X_k -> images[k]`, with the induced linear map
/// on the basis stored column by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    algebra: AlgebraId,
    images: Vec<u64>,
    // columns[i] = image of basis monomial i
    columns: Vec<u64>,
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Endomorphism")
            .field("images", &format_args!("{:x?}", self.images))
            .finish()
    }
}

impl Endomorphism {
    fn from_columns(algebra: AlgebraId, n: usize, columns: Vec<u64>) -> Self {
        // X_k sits at basis index k + 1 in both ideal families
        let images = columns[1..=n].to_vec();
        Endomorphism { algebra, images, columns }
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn images(&self) -> Vec<Element> {
        self.images.iter().map(|&b| Element::from_parts(b, self.algebra)).collect()
    }

    pub fn image_bits(&self) -> &[u64] {
        &self.images
    }

    /// Images of the basis monomials; doubles as the identity key of the map.
    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// The induced `dim x dim` matrix; column `i` is the image of basis monomial `i`.
    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_col_words(self.dim(), &self.columns)
    }

    /// Degree-one coefficients of the generator images as an `n x n` matrix;
    /// column `k` holds the coefficients of `X1..Xn` in the image of `X_k`.
    pub fn linear_part(&self) -> BitMatrix {
        let n = self.images.len();
        let cols: Vec<u64> = self.images.iter().map(|&img| (img >> 1) & low_mask(n)).collect();
        BitMatrix::from_col_words(n, &cols)
    }

    pub(crate) fn apply_bits(&self, a: u64) -> u64 {
        apply_columns(&self.columns, a)
    }

    pub fn apply(&self, a: Element) -> Result<Element> {
        if a.algebra_id() != self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element::from_parts(self.apply_bits(a.bits()), self.algebra))
    }

    pub fn is_bijective(&self) -> bool {
        rank_of_words(&self.columns) == self.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(i, &c)| c == 1 << i)
    }

    /// `self ∘ other` by multiplying the induced matrices.
    pub(crate) fn then_apply_to(&self, other: &Endomorphism) -> Endomorphism {
        let columns = other.columns.iter().map(|&c| self.apply_bits(c)).collect();
        Endomorphism::from_columns(self.algebra, self.images.len(), columns)
    }
}

#[inline]
pub(crate) fn apply_columns(columns: &[u64], mut a: u64) -> u64 {
    let mut acc = 0;
    while a != 0 {
        acc ^= columns[a.trailing_zeros() as usize];
        a &= a - 1;
    }
    acc
}

fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1 << bits) - 1
    }
}

/// Checks that the images respect every defining relation of the ideal and
/// returns the induced endomorphism.
pub fn make_endomorphism(algebra: &Algebra, images: &[Element]) -> Result<Endomorphism> {
    if images.len() != algebra.n() {
        return Err(Error::IndexError(format!(
            "expected {} generator images, got {}",
            algebra.n(),
            images.len()
        )));
    }
    if images.iter().any(|e| e.algebra_id() != algebra.id()) {
        return Err(Error::AlgebraMismatch);
    }
    let image_bits: Vec<u64> = images.iter().map(Element::bits).collect();
    let mut columns = vec![0; algebra.dim()];
    algebra.columns_into(&image_bits, &mut columns);
    if let Some(rel) = algebra.violated_relation(&image_bits, &columns) {
        return Err(Error::IllDefined { relation: rel.describe(algebra.n()) });
    }
    Ok(Endomorphism { algebra: algebra.id(), images: image_bits, columns })
}

pub fn identity(algebra: &Algebra) -> Endomorphism {
    let images: Vec<Element> = (0..algebra.n()).map(|k| algebra.var(k)).collect();
    make_endomorphism(algebra, &images).expect("identity respects every relation")
}

/// `f ∘ g`, computed by substituting the images of `f` into those of `g`.
pub fn compose(algebra: &Algebra, f: &Endomorphism, g: &Endomorphism) -> Result<Endomorphism> {
    if f.algebra != algebra.id() || g.algebra != algebra.id() {
        return Err(Error::AlgebraMismatch);
    }
    let f_images = f.images();
    let images = g
        .images()
        .into_iter()
        .map(|img| algebra.substitute(img, &f_images))
        .collect::<Result<Vec<_>>>()?;
    make_endomorphism(algebra, &images)
}

/// The transvection `X_i -> X_i + X_j` fixing every other generator.
/// Indices are zero-based.
pub fn transvection(algebra: &Algebra, i: usize, j: usize) -> Result<Endomorphism> {
    let n = algebra.n();
    if n < 2 {
        return Err(Error::IndexError("transvections need at least two indeterminates".into()));
    }
    if i >= n || j >= n || i == j {
        return Err(Error::IndexError(format!("invalid transvection indices ({i}, {j}) for n = {n}")));
    }
    let mut images: Vec<Element> = (0..n).map(|k| algebra.var(k)).collect();
    images[i] = algebra.add(algebra.var(i), algebra.var(j))?;
    let e = make_endomorphism(algebra, &images)?;
    if !e.is_bijective() {
        return Err(Error::IllDefined { relation: "transvection is not bijective".into() });
    }
    Ok(e)
}

/// The automorphism permuting the generators: `X_k -> X_{perm[k]}`.
pub fn permutation(algebra: &Algebra, perm: &[usize]) -> Result<Endomorphism> {
    let n = algebra.n();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::IndexError(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let images: Vec<Element> = perm.iter().map(|&p| algebra.var(p)).collect();
    make_endomorphism(algebra, &images)
}

/// The linear endomorphism whose degree-one part is `m` (same convention as
/// [`Endomorphism::linear_part`]).
pub fn linear_map(algebra: &Algebra, m: &BitMatrix) -> Result<Endomorphism> {
    let n = algebra.n();
    if m.rows() != n || m.cols() != n {
        return Err(Error::AmbientMismatch { left: m.cols(), right: n });
    }
    let images = (0..n)
        .map(|k| {
            let col = m.col_word(k);
            algebra.element(col << 1)
        })
        .collect::<Result<Vec<_>>>()?;
    make_endomorphism(algebra, &images)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BruteForce,
    Structured,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BruteForce => "brute_force",
            Method::Structured => "structured",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub brute_force: u64,
    pub structured: u64,
    /// Largest candidate count for which a group is held in memory; bigger
    /// searches are streamed.
    pub materialize: u64,
    pub dim_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            brute_force: DEFAULT_BRUTE_FORCE_BUDGET,
            structured: DEFAULT_STRUCTURED_BUDGET,
            materialize: 1 << 20,
            dim_cap: crate::algebra::DEFAULT_DIM_CAP,
        }
    }
}

/// Number of image tuples tried by brute force: `(2^dim)^n`.
pub fn brute_force_candidates(algebra: &Algebra) -> u128 {
    pow2_saturating(algebra.dim() * algebra.n())
}

/// `|GL(n,2)| * 2^(n * (dim - 1 - n))`: invertible linear parts times
/// arbitrary higher-degree parts.
pub fn structured_candidates(algebra: &Algebra) -> Result<u128> {
    let IdealSpec::MaximalPower { n, .. } = algebra.spec() else {
        return Err(Error::Unsupported(
            "structured enumeration needs a power of the maximal ideal".into(),
        ));
    };
    let free = n * (algebra.dim() - 1 - n);
    Ok(match gl_order(n) {
        Ok(g) => (g as u128).saturating_mul(pow2_saturating(free)),
        Err(_) => u128::MAX,
    })
}

/// Picks structured search when it fits its budget, brute force otherwise,
/// and returns the method with its candidate count.
pub fn choose_method(algebra: &Algebra, budgets: &Budgets) -> Result<(Method, u128)> {
    let brute = brute_force_candidates(algebra);
    let structured = structured_candidates(algebra).ok();
    match structured {
        Some(s) if s <= budgets.structured as u128 => Ok((Method::Structured, s)),
        _ if brute <= budgets.brute_force as u128 => Ok((Method::BruteForce, brute)),
        Some(s) if s < brute => Err(Error::BudgetExceeded { needed: s, budget: budgets.structured }),
        _ => Err(Error::BudgetExceeded { needed: brute, budget: budgets.brute_force }),
    }
}

fn pow2_saturating(bits: usize) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// The automorphism group, held as its elements sorted by induced matrix.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    algebra: AlgebraId,
    elements: Vec<Endomorphism>,
    method: Method,
}

impl AutomorphismGroup {
    fn from_elements(algebra: AlgebraId, mut elements: Vec<Endomorphism>, method: Method) -> Self {
        elements.sort_by(|a, b| a.columns.cmp(&b.columns));
        elements.dedup_by(|a, b| a.columns == b.columns);
        AutomorphismGroup { algebra, elements, method }
    }

    pub fn algebra_id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Endomorphism] {
        &self.elements
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn contains(&self, e: &Endomorphism) -> bool {
        e.algebra == self.algebra
            && self.elements.binary_search_by(|x| x.columns.cmp(&e.columns)).is_ok()
    }

    /// Same elements, regardless of how they were found.
    pub fn same_elements(&self, other: &AutomorphismGroup) -> bool {
        self.algebra == other.algebra
            && self.elements.len() == other.elements.len()
            && self.elements.iter().zip(&other.elements).all(|(a, b)| a.columns == b.columns)
    }

    /// A generating set chosen greedily in element order. Building it closes
    /// the set under composition, so this doubles as the group-axiom check:
    /// a product falling outside the set, or a missing identity, yields
    /// `NotAGroup`.
    pub fn generators(&self) -> Result<Vec<Endomorphism>> {
        let Some(id) = self.elements.iter().find(|e| e.is_identity()) else {
            return Err(Error::NotAGroup("identity missing".into()));
        };
        let mut generators: Vec<Endomorphism> = Vec::new();
        let mut reached: HashSet<Vec<u64>> = HashSet::from([id.columns.clone()]);
        let mut members: Vec<Endomorphism> = vec![id.clone()];
        for candidate in &self.elements {
            if reached.contains(&candidate.columns) {
                continue;
            }
            generators.push(candidate.clone());
            // Right-multiplying everything reached so far by every generator
            // until nothing new appears yields the generated subgroup.
            let mut frontier: Vec<Endomorphism> = members.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for x in &frontier {
                    for g in &generators {
                        let y = x.then_apply_to(g);
                        if reached.contains(&y.columns) {
                            continue;
                        }
                        if !self.contains(&y) {
                            return Err(Error::NotAGroup(format!(
                                "product with images {:x?} is not in the set",
                                y.images
                            )));
                        }
                        reached.insert(y.columns.clone());
                        members.push(y.clone());
                        next.push(y);
                    }
                }
                frontier = next;
            }
        }
        debug_assert_eq!(reached.len(), self.elements.len());
        Ok(generators)
    }

    /// Pairwise closure check, quadratic in the order.
    pub fn check_closure_exhaustive(&self) -> Result<()> {
        if !self.elements.iter().any(Endomorphism::is_identity) {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        for f in &self.elements {
            for g in &self.elements {
                if !self.contains(&f.then_apply_to(g)) {
                    return Err(Error::NotAGroup(format!(
                        "{:x?} composed with {:x?} leaves the set",
                        f.images, g.images
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Runs a search, calling `visit` on every automorphism found (generator
/// images, then basis columns). Partitions are evaluated in parallel and
/// combined with `merge`; callers get a deterministic result as long as
/// `merge` is insensitive to partition order.
pub fn search<S, I, F, M>(
    algebra: &Algebra,
    method: Method,
    budgets: &Budgets,
    init: I,
    visit: F,
    merge: M,
) -> Result<S>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[u64], &[u64]) + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    let n = algebra.n();
    let dim = algebra.dim();
    match method {
        Method::BruteForce => {
            let needed = brute_force_candidates(algebra);
            if needed > budgets.brute_force as u128 {
                return Err(Error::BudgetExceeded { needed, budget: budgets.brute_force });
            }
            let mask = algebra.full_mask();
            Ok((0..=mask)
                .into_par_iter()
                .fold(&init, |mut state, first| {
                    let mut images = vec![0u64; n];
                    images[0] = first;
                    let mut columns = vec![0u64; dim];
                    loop {
                        try_candidate(algebra, &images, &mut columns, &mut state, &visit);
                        if !odometer(&mut images[1..], mask) {
                            break;
                        }
                    }
                    state
                })
                .reduce(&init, &merge))
        }
        Method::Structured => {
            let needed = structured_candidates(algebra)?;
            if needed > budgets.structured as u128 {
                return Err(Error::BudgetExceeded { needed, budget: budgets.structured });
            }
            let high_bits = dim - 1 - n;
            let high_mask = low_mask(high_bits);
            Ok((1u64..1 << n)
                .into_par_iter()
                .fold(&init, |mut state, first| {
                    let mut linear = vec![first];
                    let mut images = vec![0u64; n];
                    let mut columns = vec![0u64; dim];
                    let mut high = vec![0u64; n];
                    for_each_independent_extension(n, &mut linear, &mut |linear| {
                        high.iter_mut().for_each(|h| *h = 0);
                        loop {
                            for k in 0..n {
                                images[k] = (linear[k] << 1) | (high[k] << (n + 1));
                            }
                            try_candidate(algebra, &images, &mut columns, &mut state, &visit);
                            if high_bits == 0 || !odometer(&mut high, high_mask) {
                                break;
                            }
                        }
                    });
                    state
                })
                .reduce(&init, &merge))
        }
    }
}

#[inline]
fn try_candidate<S, F>(algebra: &Algebra, images: &[u64], columns: &mut [u64], state: &mut S, visit: &F)
where
    F: Fn(&mut S, &[u64], &[u64]),
{
    algebra.columns_into(images, columns);
    if algebra.violated_relation(images, columns).is_some() {
        return;
    }
    if rank_of_words(columns) != columns.len() {
        return;
    }
    visit(state, images, columns);
}

/// Advances the digits (last digit fastest, each in `0..=max`); false once
/// every combination has been produced.
fn odometer(digits: &mut [u64], max: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Calls `f` on every completion of `prefix` to `n` linearly independent
/// vectors of `F2^n`, in lexicographic order.
fn for_each_independent_extension(n: usize, prefix: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if prefix.len() == n {
        f(prefix);
        return;
    }
    let rank = prefix.len();
    for v in 1u64..1 << n {
        prefix.push(v);
        if rank_of_words(prefix) == rank + 1 {
            for_each_independent_extension(n, prefix, f);
        }
        prefix.pop();
    }
}

/// Materializes every automorphism found by `method`.
pub fn enumerate(algebra: &Algebra, method: Method, budgets: &Budgets) -> Result<AutomorphismGroup> {
    let id = algebra.id();
    let n = algebra.n();
    let found = search(
        algebra,
        method,
        budgets,
        Vec::new,
        |acc: &mut Vec<Endomorphism>, _images, columns| {
            acc.push(Endomorphism::from_columns(id, n, columns.to_vec()));
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    Ok(AutomorphismGroup::from_elements(id, found, method))
}

/// Tries every tuple of generator images and keeps the well-defined
/// bijective ones. The result is checked to be closed under composition.
pub fn enumerate_automorphisms_bruteforce(algebra: &Algebra, budget: u64) -> Result<AutomorphismGroup> {
    let budgets = Budgets { brute_force: budget, ..Budgets::default() };
    let group = enumerate(algebra, Method::BruteForce, &budgets)?;
    group.generators()?;
    Ok(group)
}

/// Searches only images with zero constant term and invertible linear part,
/// with arbitrary higher-degree terms.
pub fn enumerate_automorphisms_structured(algebra: &Algebra, budget: u64) -> Result<AutomorphismGroup> {
    let budgets = Budgets { structured: budget, ..Budgets::default() };
    let group = enumerate(algebra, Method::Structured, &budgets)?;
    group.generators()?;
    Ok(group)
}

/// Number of automorphisms, without holding them in memory.
pub fn count_automorphisms(algebra: &Algebra, method: Method, budgets: &Budgets) -> Result<u64> {
    search(algebra, method, budgets, || 0u64, |c, _, _| *c += 1, |a, b| a + b)
}
