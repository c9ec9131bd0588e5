//! Nilradical, socle and fixed-point subalgebra, and the checks that tie
//! them to the automorphism group.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{binomial, Algebra, AlgebraId, Element, IdealSpec};
use crate::error::{Error, Result};
use crate::linalg::{intersect, kernel_basis, solve_homogeneous, BitMatrix, Subspace};
use crate::morphisms::{
    apply_columns, brute_force_candidates, choose_method, enumerate, search, AutomorphismGroup, Budgets, Endomorphism, Method,
};

/// `|GL(n,2)| = prod_{i<n} (2^n - 2^i)`.
pub fn gl_order(n: usize) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let overflow = || Error::Overflow(format!("|GL({n},2)| does not fit in 64 bits"));
    let top = 1u64.checked_shl(n as u32).filter(|_| n < 64).ok_or_else(overflow)?;
    (0..n).try_fold(1u64, |acc, i| acc.checked_mul(top - (1 << i)).ok_or_else(overflow))
}

/// The matrix of `a -> u * a`; column `j` is `u * b_j`.
pub fn multiplication_matrix(algebra: &Algebra, u: u64) -> BitMatrix {
    let cols: Vec<u64> = (0..algebra.dim()).map(|j| algebra.mul_bits(u, 1 << j)).collect();
    BitMatrix::from_col_words(algebra.dim(), &cols)
}

/// The ideal of nilpotent elements.
///
/// For powers of the maximal ideal this is the span of all non-constant
/// basis monomials. Field-ideal quotients are scanned element by element,
/// which costs `2^dim` power computations and is bounded by `budget`.
pub fn nilradical(algebra: &Algebra, budget: u64) -> Result<Subspace> {
    let dim = algebra.dim();
    match algebra.spec() {
        IdealSpec::MaximalPower { .. } => {
            let gens: Vec<u64> = (1..dim).map(|i| 1 << i).collect();
            Ok(Subspace::span_words(dim, &gens))
        }
        IdealSpec::FieldIdeal { .. } => {
            let needed = 1u128 << dim;
            if needed > budget as u128 {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            let nilpotent: Vec<u64> = (1..=algebra.full_mask())
                .filter(|&a| algebra.pow_bits(a, dim as u64) == 0)
                .collect();
            Ok(Subspace::span_words(dim, &nilpotent))
        }
    }
}

/// Elements killed by every nilpotent element.
pub fn socle(algebra: &Algebra, budget: u64) -> Result<Subspace> {
    let nil = nilradical(algebra, budget)?;
    if nil.dim() == 0 {
        return Ok(Subspace::full(algebra.dim()));
    }
    let systems: Vec<BitMatrix> = nil
        .basis_words()
        .into_iter()
        .map(|u| multiplication_matrix(algebra, u))
        .collect();
    solve_homogeneous(&systems)
}

/// Fixed vectors of one linear map given by its columns: `ker(M + I)`.
pub fn fixed_space_of_columns(columns: &[u64]) -> Subspace {
    let dim = columns.len();
    let shifted: Vec<u64> = columns.iter().enumerate().map(|(i, &c)| c ^ (1 << i)).collect();
    kernel_basis(&BitMatrix::from_col_words(dim, &shifted))
}

pub fn fixed_space(e: &Endomorphism) -> Subspace {
    fixed_space_of_columns(e.columns())
}

/// Running intersection of fixed spaces. Maps that already fix the current
/// space are absorbed with a handful of matrix-vector products.
#[derive(Debug, Clone)]
pub struct FixedSpaceAccumulator {
    space: Subspace,
    basis: Vec<u64>,
}

impl FixedSpaceAccumulator {
    pub fn new(dim: usize) -> Self {
        let space = Subspace::full(dim);
        let basis = space.basis_words();
        FixedSpaceAccumulator { space, basis }
    }

    pub fn absorb(&mut self, columns: &[u64]) {
        if self.basis.iter().all(|&v| apply_columns(columns, v) == v) {
            return;
        }
        self.space = intersect(&self.space, &fixed_space_of_columns(columns))
            .expect("fixed spaces share the ambient dimension");
        self.basis = self.space.basis_words();
    }

    pub fn merge(mut self, other: FixedSpaceAccumulator) -> Self {
        if self.space != other.space {
            self.space = intersect(&self.space, &other.space).expect("same ambient dimension");
            self.basis = self.space.basis_words();
        }
        self
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn into_space(self) -> Subspace {
        self.space
    }
}

/// The subalgebra of elements fixed by every automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSubalgebra {
    pub algebra: AlgebraId,
    pub space: Subspace,
    pub trivial: bool,
}

impl FixedSubalgebra {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// SA computed without holding the group in memory: automorphisms are
/// streamed out of the search straight into the running intersection.
/// Returns the subalgebra, the group order and the method used.
pub fn fixed_subalgebra_streamed(algebra: &Algebra, budgets: &Budgets) -> Result<(FixedSubalgebra, u64, Method)> {
    let (method, _) = choose_method(algebra, budgets)?;
    let dim = algebra.dim();
    let (order, acc) = search(
        algebra,
        method,
        budgets,
        || (0u64, FixedSpaceAccumulator::new(dim)),
        |(count, acc), _, columns| {
            *count += 1;
            acc.absorb(columns);
        },
        |(c1, a1), (c2, a2)| (c1 + c2, a1.merge(a2)),
    )?;
    let space = acc.into_space();
    if let Some(defect) = subalgebra_defect(algebra, &space) {
        return Err(Error::NotAGroup(format!("fixed points are not a subalgebra: {defect}")));
    }
    let trivial = space.dim() == 1;
    Ok((FixedSubalgebra { algebra: algebra.id(), space, trivial }, order, method))
}

/// Returns the first reason `space` fails to be a unital subalgebra.
pub fn subalgebra_defect(algebra: &Algebra, space: &Subspace) -> Option<String> {
    if !space.contains_word(1) {
        return Some("1 is not in the subspace".into());
    }
    let basis = space.basis_words();
    for (i, &a) in basis.iter().enumerate() {
        for &b in &basis[i..] {
            let p = algebra.mul_bits(a, b);
            if !space.contains_word(p) {
                return Some(format!(
                    "({})*({}) = {} leaves the subspace",
                    algebra.render_bits(a),
                    algebra.render_bits(b),
                    algebra.render_bits(p)
                ));
            }
        }
    }
    None
}

/// Intersects the fixed spaces of every element of `group`. The group axioms
/// and the subalgebra property of the result are checked first.
pub fn fixed_subalgebra(algebra: &Algebra, group: &AutomorphismGroup) -> Result<FixedSubalgebra> {
    if group.algebra_id() != algebra.id() {
        return Err(Error::AlgebraMismatch);
    }
    group.generators()?;
    let mut acc = FixedSpaceAccumulator::new(algebra.dim());
    for e in group.elements() {
        acc.absorb(e.columns());
    }
    let space = acc.into_space();
    if let Some(defect) = subalgebra_defect(algebra, &space) {
        return Err(Error::NotAGroup(format!("fixed points are not a subalgebra: {defect}")));
    }
    let trivial = space.dim() == 1;
    Ok(FixedSubalgebra { algebra: algebra.id(), space, trivial })
}

/// Where the expectation behind a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckBasis {
    /// A published claim about these algebras.
    Stated,
    /// A consequence worked out from the stated normal form of automorphisms.
    Derived,
    /// Internal agreement between independent computations.
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub basis: CheckBasis,
    pub passed: bool,
    pub expected: String,
    pub observed: String,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(name: &str, basis: CheckBasis, expected: impl ToString, observed: impl ToString) -> Self {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        Check { name: name.into(), basis, passed: expected == observed, expected, observed, counterexample: None }
    }

    fn with_counterexample(mut self, c: Option<String>) -> Self {
        if !self.passed {
            self.counterexample = c;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub spec: IdealSpec,
    pub dim: usize,
    pub aut_order: u64,
    pub sa_dim: usize,
    pub sa_trivial: bool,
    pub sa_basis: Vec<String>,
    pub socle_dim: usize,
    pub socle_basis: Vec<String>,
    pub socle_in_sa: bool,
    pub method: Method,
    /// Whether a second enumeration method ran and was compared.
    pub cross_checked: bool,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Per-search tallies gathered while visiting automorphisms.
struct Survey {
    order: u64,
    fixed: FixedSpaceAccumulator,
    // smallest offending image tuples
    moves_augmentation: Option<Vec<u64>>,
    not_unipotent: Option<Vec<u64>>,
}

impl Survey {
    fn new(dim: usize) -> Self {
        Survey { order: 0, fixed: FixedSpaceAccumulator::new(dim), moves_augmentation: None, not_unipotent: None }
    }

    fn visit(&mut self, local: bool, images: &[u64], columns: &[u64]) {
        self.order += 1;
        self.fixed.absorb(columns);
        if local && columns[1..].iter().any(|&c| c & 1 == 1) {
            keep_min(&mut self.moves_augmentation, images);
        }
        if local && images.len() == 1 && images[0] & 0b11 != 0b10 {
            keep_min(&mut self.not_unipotent, images);
        }
    }

    fn merge(self, other: Survey) -> Survey {
        Survey {
            order: self.order + other.order,
            fixed: self.fixed.merge(other.fixed),
            moves_augmentation: min_opt(self.moves_augmentation, other.moves_augmentation),
            not_unipotent: min_opt(self.not_unipotent, other.not_unipotent),
        }
    }
}

fn keep_min(slot: &mut Option<Vec<u64>>, images: &[u64]) {
    if slot.as_deref().is_none_or(|cur| images < cur) {
        *slot = Some(images.to_vec());
    }
}

fn min_opt(a: Option<Vec<u64>>, b: Option<Vec<u64>>) -> Option<Vec<u64>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn render_images(algebra: &Algebra, images: &[u64]) -> String {
    let parts: Vec<String> = images
        .iter()
        .enumerate()
        .map(|(k, &img)| format!("{} -> {}", algebra.render(&algebra.var(k)), algebra.render_bits(img)))
        .collect();
    parts.join(", ")
}

/// Builds the algebra, enumerates its automorphisms (cross-checking the two
/// methods when both fit the budgets), computes SA and the socle, and
/// evaluates the expected structural facts. Failed expectations are recorded
/// in the report, not returned as errors.
pub fn verify_instance(spec: IdealSpec, budgets: &Budgets) -> Result<VerificationReport> {
    let start = Instant::now();
    let algebra = Algebra::build_with_cap(spec, budgets.dim_cap)?;
    let n = algebra.n();
    let dim = algebra.dim();
    let local = matches!(spec, IdealSpec::MaximalPower { .. });

    let (method, needed) = choose_method(&algebra, budgets)?;
    let brute_needed = brute_force_candidates(&algebra);
    let brute_ok = brute_needed <= budgets.brute_force as u128;
    let structured_ok = method == Method::Structured;

    let mut checks = Vec::new();
    let mut cross_checked = false;
    let survey = if needed <= budgets.materialize as u128 {
        let group = enumerate(&algebra, method, budgets)?;
        let closure = group.generators();
        checks.push(
            Check::new("group_closed_under_composition", CheckBasis::Consistency, true, closure.is_ok())
                .with_counterexample(closure.err().map(|e| e.to_string())),
        );
        if structured_ok && brute_ok && brute_needed <= budgets.materialize as u128 {
            let other = enumerate(&algebra, Method::BruteForce, budgets)?;
            cross_checked = true;
            let witness = group
                .elements()
                .iter()
                .find(|e| !other.contains(e))
                .or_else(|| other.elements().iter().find(|e| !group.contains(e)))
                .map(|e| render_images(&algebra, e.image_bits()));
            checks.push(
                Check::new("structured_matches_brute_force", CheckBasis::Consistency, true, group.same_elements(&other))
                    .with_counterexample(witness),
            );
        }
        let mut survey = Survey::new(dim);
        for e in group.elements() {
            survey.visit(local, e.image_bits(), e.columns());
        }
        survey
    } else {
        search(
            &algebra,
            method,
            budgets,
            || Survey::new(dim),
            |s, images, columns| s.visit(local, images, columns),
            Survey::merge,
        )?
    };

    let sa = survey.fixed.space().clone();
    let defect = subalgebra_defect(&algebra, &sa);
    checks.push(
        Check::new("fixed_points_form_subalgebra", CheckBasis::Consistency, true, defect.is_none())
            .with_counterexample(defect),
    );
    let sa_trivial = sa.dim() == 1;
    let soc = socle(&algebra, budgets.brute_force)?;
    let socle_in_sa = soc.is_subspace_of(&sa);
    let render_space = |s: &Subspace| -> Vec<String> {
        s.basis_words().iter().map(|&v| algebra.render_bits(v)).collect()
    };

    if let IdealSpec::MaximalPower { r, .. } = spec {
        let witness = if n > 1 {
            sa.basis_words().into_iter().find(|&v| v != 1).map(|v| algebra.render_bits(v))
        } else {
            Some("fixed points reduce to the constants".into())
        };
        checks.push(
            Check::new("fixed_subalgebra_trivial_iff_n_gt_1", CheckBasis::Stated, n > 1, sa_trivial)
                .with_counterexample(witness),
        );
        checks.push(
            Check::new("augmentation_preserved", CheckBasis::Consistency, true, survey.moves_augmentation.is_none())
                .with_counterexample(survey.moves_augmentation.map(|i| render_images(&algebra, &i))),
        );
        if n == 1 {
            let witness = soc
                .basis_words()
                .into_iter()
                .find(|&v| !sa.contains_word(v))
                .map(|v| algebra.render_bits(v));
            checks.push(
                Check::new("socle_contained_in_fixed_subalgebra", CheckBasis::Stated, true, socle_in_sa)
                    .with_counterexample(witness),
            );
            checks.push(
                Check::new("unipotent_normal_form", CheckBasis::Stated, true, survey.not_unipotent.is_none())
                    .with_counterexample(survey.not_unipotent.map(|i| render_images(&algebra, &i))),
            );
            checks.push(Check::new(
                "order_equals_two_pow_r_minus_one",
                CheckBasis::Derived,
                1u64 << (r - 1),
                survey.order,
            ));
        }
        if r == 1 {
            checks.push(Check::new("order_equals_gl_order", CheckBasis::Stated, gl_order(n)?, survey.order));
        }
    }

    Ok(VerificationReport {
        spec,
        dim,
        aut_order: survey.order,
        sa_dim: sa.dim(),
        sa_trivial,
        sa_basis: render_space(&sa),
        socle_dim: soc.dim(),
        socle_basis: render_space(&soc),
        socle_in_sa,
        method,
        cross_checked,
        checks,
        elapsed: start.elapsed(),
    })
}

/// An instance the grid left out, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedInstance {
    pub spec: IdealSpec,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct GridReport {
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<SkippedInstance>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }
}

/// Every `m^{r+1}` quotient with `dim <= max_dim`, ordered by `(n, r)`.
pub fn grid_instances(max_dim: usize) -> Vec<IdealSpec> {
    let mut out = Vec::new();
    let dim = |n: usize, r: usize| binomial((n + r) as u128, n.min(r) as u128).unwrap_or(u128::MAX);
    let mut n = 1;
    while dim(n, 1) <= max_dim as u128 {
        let mut r = 1;
        while dim(n, r) <= max_dim as u128 {
            out.push(IdealSpec::maximal_power(n, r));
            r += 1;
        }
        n += 1;
    }
    out
}

/// Runs [`verify_instance`] over [`grid_instances`]; instances that exceed a
/// budget or the dimension cap are listed as skipped.
pub fn verify_grid(max_dim: usize, budgets: &Budgets) -> Result<GridReport> {
    let outcomes: Vec<(IdealSpec, Result<VerificationReport>)> = grid_instances(max_dim)
        .into_par_iter()
        .map(|spec| (spec, verify_instance(spec, budgets)))
        .collect();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (spec, outcome) in outcomes {
        match outcome {
            Ok(report) => reports.push(report),
            Err(e @ (Error::BudgetExceeded { .. } | Error::DimensionCapExceeded { .. })) => {
                skipped.push(SkippedInstance { spec, reason: e.to_string() })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GridReport { reports, skipped })
}

/// Elements fixed by every listed automorphism, found by trying all `2^dim`
/// elements. Independent of the kernel computation; used as an oracle.
pub fn fixed_elements_by_scan(algebra: &Algebra, automorphisms: &[Endomorphism]) -> Vec<Element> {
    algebra
        .elements()
        .filter(|a| automorphisms.iter().all(|e| e.apply(*a).unwrap() == *a))
        .collect()
}
