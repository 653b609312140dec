//! Simultaneous triangularization by recursive chopping.

use crate::error::{Error, Result};
use crate::invariant::{find_invariant_subspace_with, Certificate, InvariantConfig, ReducibilityVerdict, Stage};
use crate::linalg::{extend_basis, verify_flag, Flag, Matrix, Subspace};
use crate::scalar::{FieldDescriptor, Scalar};
use crate::semigroup::closure;
use crate::spectrum::{singleton_spectrum, SpectrumReport};

/// Common dimension and field of a nonempty list of square matrices.
pub fn validate_generators<S: Scalar>(gens: &[Matrix<S>]) -> Result<(usize, FieldDescriptor)> {
    let first = gens.first().ok_or(Error::NoGenerators)?;
    let (n, field) = (first.rows(), first.field());
    for g in gens {
        if !g.is_square() || g.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", g.rows(), g.cols()),
            });
        }
        if g.field() != field {
            return Err(Error::FieldMismatch(field, g.field()));
        }
    }
    Ok((n, field))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelOutcome {
    /// A proper invariant subspace of this dimension was split off.
    Split {
        subspace_dim: usize,
    },
    /// One-dimensional block, nothing to do.
    Leaf,
    Irreducible(Certificate),
    Unknown,
}

/// One block visited by the recursion. `offset` is the position of the block
/// on the diagonal of the final triangular form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelDiagnostic {
    pub depth: usize,
    pub offset: usize,
    pub dim: usize,
    pub stage: Option<Stage>,
    pub outcome: LevelOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangularizationOutcome<S: Scalar> {
    Flag(Flag<S>),
    IrreducibleBlock { level: usize, offset: usize, dim: usize, certificate: Certificate },
    Unknown { level: usize, offset: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularizationResult<S: Scalar> {
    pub outcome: TriangularizationOutcome<S>,
    /// Blocks in visiting order (parent before restriction before quotient).
    pub diagnostics: Vec<LevelDiagnostic>,
}

impl<S: Scalar> TriangularizationResult<S> {
    pub fn flag(&self) -> Option<&Flag<S>> {
        match &self.outcome {
            TriangularizationOutcome::Flag(f) => Some(f),
            _ => None,
        }
    }

    pub fn used_stage(&self, stage: Stage) -> bool {
        self.diagnostics.iter().any(|d| d.stage == Some(stage) && matches!(d.outcome, LevelOutcome::Split { .. }))
    }
}

struct Recursion<'a> {
    field: FieldDescriptor,
    config: &'a InvariantConfig,
    diagnostics: Vec<LevelDiagnostic>,
    failure: Option<(usize, usize, usize, Option<Certificate>)>,
}

impl Recursion<'_> {
    /// Local change of basis triangularizing `gens`, or `None` if some block
    /// below could not be split.
    fn solve<S: Scalar>(&mut self, gens: &[Matrix<S>], n: usize, depth: usize, offset: usize) -> Option<Matrix<S>> {
        let mut record = |stage, outcome| {
            self.diagnostics.push(LevelDiagnostic { depth, offset, dim: n, stage, outcome });
        };
        if n == 1 {
            record(None, LevelOutcome::Leaf);
            return Some(Matrix::identity(1, &self.field));
        }
        let subspace = match find_invariant_subspace_with(n, &self.field, gens, self.config) {
            ReducibilityVerdict::Reducible { subspace, stage } => {
                record(Some(stage), LevelOutcome::Split { subspace_dim: subspace.dim() });
                subspace
            }
            ReducibilityVerdict::Irreducible(certificate) => {
                let stage = match certificate {
                    Certificate::FullAlgebra { .. } => Stage::FullAlgebra,
                    Certificate::ExhaustiveSearch => Stage::ExhaustiveSearch,
                };
                record(Some(stage), LevelOutcome::Irreducible(certificate));
                self.failure.get_or_insert((depth, offset, n, Some(certificate)));
                return None;
            }
            ReducibilityVerdict::Unknown => {
                record(None, LevelOutcome::Unknown);
                self.failure.get_or_insert((depth, offset, n, None));
                return None;
            }
        };
        let d = subspace.dim();
        let t0 = extend_basis(&subspace);
        let t0_inv = t0.inverse().expect("extended basis is invertible");
        let conjugated: Vec<Matrix<S>> = gens.iter().map(|g| t0_inv.mul(g).mul(&t0)).collect();
        let top: Vec<Matrix<S>> = conjugated.iter().map(|c| c.block(0, 0, d, d)).collect();
        let bottom: Vec<Matrix<S>> = conjugated.iter().map(|c| c.block(d, d, n - d, n - d)).collect();
        let t_top = self.solve(&top, d, depth + 1, offset);
        let t_bottom = self.solve(&bottom, n - d, depth + 1, offset + d);
        Some(t0.mul(&Matrix::block_diagonal(&t_top?, &t_bottom?)))
    }
}

pub fn triangularize<S: Scalar>(gens: &[Matrix<S>]) -> Result<TriangularizationResult<S>> {
    triangularize_with(gens, &InvariantConfig::default())
}

pub fn triangularize_with<S: Scalar>(
    gens: &[Matrix<S>],
    config: &InvariantConfig,
) -> Result<TriangularizationResult<S>> {
    let (n, field) = validate_generators(gens)?;
    let mut rec = Recursion { field, config, diagnostics: Vec::new(), failure: None };
    let basis = rec.solve(gens, n, 0, 0);
    let outcome = match (basis, rec.failure) {
        (Some(t), _) => {
            let flag = Flag::new(t)?;
            if !verify_flag(gens, &flag) {
                return Err(Error::NoFlag("assembled flag failed verification".into()));
            }
            TriangularizationOutcome::Flag(flag)
        }
        (None, Some((level, offset, dim, Some(certificate)))) => {
            TriangularizationOutcome::IrreducibleBlock { level, offset, dim, certificate }
        }
        (None, Some((level, offset, dim, None))) => TriangularizationOutcome::Unknown { level, offset, dim },
        (None, None) => unreachable!("failed recursion records its block"),
    };
    Ok(TriangularizationResult { outcome, diagnostics: rec.diagnostics })
}

/// Descending chain `W_0 = F^n`, `W_{k+1} = Σ_S S W_k`, which reaches zero
/// when the generated algebra is nilpotent.
pub fn levitzki_chain<S: Scalar>(gens: &[Matrix<S>], n: usize, field: &FieldDescriptor) -> Vec<Subspace<S>> {
    let mut chain = vec![Subspace::full(n, field)];
    loop {
        let last = chain.last().expect("nonempty chain");
        if last.is_zero() {
            return chain;
        }
        let next =
            Subspace::from_vectors(n, field, gens.iter().flat_map(|g| last.basis().iter().map(move |w| g.mul_vec(w))));
        if next == *last {
            return chain;
        }
        chain.push(next);
    }
}

pub fn levitzki_triangularize<S: Scalar>(gens: &[Matrix<S>]) -> Result<Flag<S>> {
    let (n, field) = validate_generators(gens)?;
    if let Some(index) = gens.iter().position(|g| !g.is_nilpotent()) {
        return Err(Error::NotNilpotent { index });
    }
    let chain = levitzki_chain(gens, n, &field);
    if !chain.last().is_some_and(Subspace::is_zero) {
        return match triangularize(gens)?.outcome {
            TriangularizationOutcome::Flag(flag) => Ok(flag),
            _ => Err(Error::NoFlag("descending chain stagnated".into())),
        };
    }
    let mut span = Subspace::zero(n, &field);
    let mut columns = Vec::with_capacity(n);
    for member in chain.iter().rev() {
        for v in member.basis() {
            if span.insert(v.clone()) {
                columns.push(v.clone());
            }
        }
    }
    let flag = Flag::new(Matrix::from_columns(&field, n, &columns))?;
    if !verify_flag(gens, &flag) {
        return Err(Error::NoFlag("chain flag failed verification".into()));
    }
    Ok(flag)
}

pub const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport<S: Scalar> {
    pub checked_elements: usize,
    pub all_singleton: bool,
    pub witnesses: Vec<(Matrix<S>, SpectrumReport<S>)>,
    /// When set the hypothesis is only confirmed on the enumerated sample.
    pub closure_truncated: bool,
}

/// Runs the singleton-spectrum test on every element of the closure.
pub fn check_kaplansky_hypothesis<S: Scalar>(gens: &[Matrix<S>], cap: usize) -> HypothesisReport<S> {
    let c = closure(gens, cap);
    let mut witnesses = Vec::new();
    let mut all_singleton = true;
    for m in c.elements() {
        let report = singleton_spectrum(m);
        if !report.singleton {
            all_singleton = false;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push((m.clone(), report));
            }
        }
    }
    HypothesisReport { checked_elements: c.len(), all_singleton, witnesses, closure_truncated: c.truncated() }
}

/// Diagonal of `T^-1 S T` for every generator.
pub fn diagonal_of<S: Scalar>(gens: &[Matrix<S>], flag: &Flag<S>) -> Result<Vec<Vec<S>>> {
    if !verify_flag(gens, flag) {
        return Err(Error::FlagInvalid);
    }
    Ok(gens.iter().map(|g| flag.apply(g).diagonal()).collect())
}
