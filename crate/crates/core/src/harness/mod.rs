//! Seeded generators of hypothesis-satisfying families and brute-force oracles.
//!
//! Every exact family is built in a triangular frame and then conjugated by a
//! single shared matrix `P`. Using one `P` for all generators is what keeps the
//! family simultaneously triangularizable.

pub mod suites;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariant::{
    brute_force_invariant_subspaces, find_invariant_subspace, ReducibilityVerdict, BRUTE_FORCE_BUDGET,
};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{FieldDescriptor, Scalar};
use crate::semigroup::closure;
use crate::spectrum::{is_unipotent, singleton_spectrum};
use crate::triangularize::{triangularize, validate_generators, TriangularizationOutcome};
use crate::unitarize::{normalized_closure, NumericMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Levitzki,
    Kolchin,
    Kaplansky,
    BlockScalar,
    Diagonalizable,
    UnitaryBlocks,
    OpenQuestion,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Levitzki,
        Family::Kolchin,
        Family::Kaplansky,
        Family::BlockScalar,
        Family::Diagonalizable,
        Family::UnitaryBlocks,
        Family::OpenQuestion,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Levitzki => "levitzki",
            Family::Kolchin => "kolchin",
            Family::Kaplansky => "kaplansky",
            Family::BlockScalar => "block_scalar",
            Family::Diagonalizable => "diagonalizable",
            Family::UnitaryBlocks => "unitary_blocks",
            Family::OpenQuestion => "open_question",
        }
    }

    pub fn parse(text: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(text))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    /// Ignored by the numeric family.
    pub field: FieldDescriptor,
    pub generator_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance<S: Scalar> {
    pub spec: InstanceSpec,
    /// `P M P^-1` for each frame matrix `M`.
    pub generators: Vec<Matrix<S>>,
    pub conjugator: Matrix<S>,
    pub frame: Vec<Matrix<S>>,
    /// Diagonal block partition of the frame; `[n]` outside BlockScalar/Diagonalizable.
    pub block_sizes: Vec<usize>,
    /// Per generator, the scalar on each block (empty where not applicable).
    pub block_scalars: Vec<Vec<S>>,
}

impl<S: Scalar> Instance<S> {
    /// Some generator carries two different block scalars.
    pub fn distinct_block_scalars(&self) -> bool {
        self.block_scalars.iter().any(|s| s.iter().any(|c| *c != s[0]))
    }
}

/// Small deterministic mixer for deriving per-instance seeds.
pub fn mix_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) struct Sampler {
    rng: ChaCha8Rng,
    field: FieldDescriptor,
}

impl Sampler {
    pub(crate) fn new(seed: u64, field: FieldDescriptor) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), field }
    }

    fn residue<S: Scalar>(&mut self, p: u64, low: u64) -> S {
        let v = self.rng.gen_range(low..p.min(i64::MAX as u64));
        S::from_i64(v as i64, &self.field)
    }

    /// Entry with numerator and denominator at most 9 in absolute value.
    pub(crate) fn entry<S: Scalar>(&mut self) -> S {
        match self.field {
            FieldDescriptor::Rational => {
                if self.rng.gen_ratio(1, 5) {
                    let num = self.rng.gen_range(-9..=9);
                    let den = self.rng.gen_range(2..=9);
                    S::from_ratio(num, den, &self.field).expect("nonzero denominator")
                } else {
                    S::from_i64(self.rng.gen_range(-3..=3), &self.field)
                }
            }
            FieldDescriptor::Prime(p) => self.residue(p, 0),
        }
    }

    pub(crate) fn uniform<S: Scalar>(&mut self) -> S {
        match self.field {
            FieldDescriptor::Rational => self.entry(),
            FieldDescriptor::Prime(p) => self.residue(p, 0),
        }
    }

    fn nonzero<S: Scalar>(&mut self) -> S {
        match self.field {
            FieldDescriptor::Rational => {
                const POOL: [(i64, i64); 10] =
                    [(1, 1), (2, 1), (3, 1), (-1, 1), (-2, 1), (1, 2), (-1, 2), (1, 3), (3, 2), (-3, 1)];
                let (a, b) = *POOL.choose(&mut self.rng).expect("nonempty pool");
                S::from_ratio(a, b, &self.field).expect("nonzero denominator")
            }
            FieldDescriptor::Prime(p) => self.residue(p, 1),
        }
    }

    fn distinct_nonzero<S: Scalar>(&mut self, k: usize) -> Vec<S> {
        let mut out: Vec<S> = Vec::with_capacity(k);
        while out.len() < k {
            let c = self.nonzero();
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    fn strict_upper<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(n, n, &self.field);
        for i in 0..n {
            for j in i + 1..n {
                if self.rng.gen_bool(0.6) {
                    m.set(i, j, self.entry());
                }
            }
        }
        m
    }

    fn mild<S: Scalar>(&mut self) -> S {
        match self.field {
            FieldDescriptor::Rational => S::from_i64(self.rng.gen_range(-2..=2), &self.field),
            FieldDescriptor::Prime(p) => self.residue(p, 0),
        }
    }

    /// Unit lower times unit upper: determinant one, so always invertible.
    fn conjugator<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        let mut lower = Matrix::identity(n, &self.field);
        let mut upper = Matrix::identity(n, &self.field);
        for i in 0..n {
            for j in 0..i {
                lower.set(i, j, self.mild());
                upper.set(j, i, self.mild());
            }
        }
        lower.mul(&upper)
    }

    /// Random composition of `n` into `k` positive parts.
    fn partition(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut cuts: Vec<usize> = (1..n).collect();
        cuts.shuffle(&mut self.rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(k);
        let mut prev = 0;
        for c in cuts.into_iter().chain([n]) {
            parts.push(c - prev);
            prev = c;
        }
        parts
    }
}

fn jordan_power<S: Scalar>(m: usize, power: usize, field: &FieldDescriptor) -> Matrix<S> {
    let mut j = Matrix::zeros(m, m, field);
    for i in 0..m.saturating_sub(power) {
        j.set(i, i + power, S::one(field));
    }
    j
}

fn place_block<S: Scalar>(target: &mut Matrix<S>, block: &Matrix<S>, offset: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(offset + i, offset + j, block.get(i, j).clone());
        }
    }
}

pub fn generate<S: Scalar>(spec: &InstanceSpec) -> Result<Vec<Matrix<S>>> {
    generate_instance(spec).map(|i| i.generators)
}

pub fn generate_instance<S: Scalar>(spec: &InstanceSpec) -> Result<Instance<S>> {
    let n = spec.n;
    let field = spec.field;
    if n < 2 {
        return Err(Error::BadSpec(format!("n = {n}, need at least 2")));
    }
    if spec.generator_count == 0 {
        return Err(Error::BadSpec("generator_count must be positive".into()));
    }
    if spec.family == Family::UnitaryBlocks {
        return Err(Error::BadSpec("unitary_blocks is a numeric family".into()));
    }
    if !S::accepts(&field) {
        return Err(Error::BadSpec(format!("scalar type cannot hold {field}")));
    }
    let mut s = Sampler::new(spec.seed, field);
    let mut block_sizes = vec![n];
    let mut block_scalars: Vec<Vec<S>> = Vec::new();
    let mut frame = Vec::with_capacity(spec.generator_count);

    match spec.family {
        Family::Levitzki => {
            for _ in 0..spec.generator_count {
                frame.push(s.strict_upper(n));
            }
        }
        Family::Kolchin | Family::Kaplansky => {
            for _ in 0..spec.generator_count {
                let c = if spec.family == Family::Kolchin { S::one(&field) } else { s.nonzero() };
                frame.push(s.strict_upper(n).add(&Matrix::scalar(n, &c)));
                block_scalars.push(vec![c]);
            }
        }
        Family::BlockScalar | Family::Diagonalizable => {
            let available = match field {
                FieldDescriptor::Rational => usize::MAX,
                FieldDescriptor::Prime(p) => (p - 1) as usize,
            };
            let max_blocks = n.min(3).min(available);
            let k = if max_blocks >= 2 { s.rng.gen_range(2..=max_blocks) } else { 1 };
            block_sizes = s.partition(n, k);
            for _ in 0..spec.generator_count {
                let scalars: Vec<S> = s.distinct_nonzero(k);
                let mut m = Matrix::zeros(n, n, &field);
                let mut offset = 0;
                for (b, &size) in block_sizes.iter().enumerate() {
                    let nil = if spec.family == Family::BlockScalar {
                        (1..size).fold(Matrix::zeros(size, size, &field), |acc, power| {
                            acc.add(&jordan_power(size, power, &field).scale(&s.entry()))
                        })
                    } else {
                        s.strict_upper(size)
                    };
                    place_block(&mut m, &nil.add(&Matrix::scalar(size, &scalars[b])), offset);
                    offset += size;
                }
                frame.push(m);
                block_scalars.push(scalars);
            }
        }
        Family::OpenQuestion => {
            // T upper triangular with T_11 = T_nn commutes with E_1n.
            for _ in 0..spec.generator_count {
                let mut t: Matrix<S> = s.strict_upper(n);
                for i in 0..n {
                    t.set(i, i, s.entry());
                }
                t.set(n - 1, n - 1, t.get(0, 0).clone());
                let corner: S = s.entry();
                t.set(0, n - 1, t.get(0, n - 1).add(&corner));
                frame.push(t);
            }
        }
        Family::UnitaryBlocks => unreachable!("rejected above"),
    }

    let conjugator = s.conjugator(n);
    let inverse = conjugator.inverse().expect("unit triangular product is invertible");
    let generators = frame.iter().map(|m| conjugator.mul(m).mul(&inverse)).collect();
    Ok(Instance { spec: *spec, generators, conjugator, frame, block_sizes, block_scalars })
}

fn is_block_scalar_plus_strict<S: Scalar>(m: &Matrix<S>, sizes: &[usize], scalars: &[S]) -> bool {
    let n = m.rows();
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let v = m.get(i, j);
            if block_of[i] != block_of[j] || i > j {
                v.is_zero()
            } else if i == j {
                *v == scalars[block_of[i]]
            } else {
                true
            }
        })
    })
}

/// Checks the family hypothesis on a generated instance, including that the
/// generators really are the conjugated frame.
pub fn hypothesis_holds<S: Scalar>(instance: &Instance<S>) -> bool {
    let Ok(inverse) = instance.conjugator.inverse() else {
        return false;
    };
    let conjugated_ok =
        instance.frame.iter().zip(&instance.generators).all(|(m, g)| instance.conjugator.mul(m).mul(&inverse) == *g);
    if !conjugated_ok || instance.generators.len() != instance.spec.generator_count {
        return false;
    }
    let gens = &instance.generators;
    let n = instance.spec.n;
    match instance.spec.family {
        Family::Levitzki => gens.iter().all(Matrix::is_nilpotent),
        Family::Kolchin => gens.iter().all(is_unipotent),
        Family::Kaplansky => {
            gens.iter().all(|g| singleton_spectrum(g).singleton)
                && instance
                    .frame
                    .iter()
                    .all(|m| m.is_upper_triangular() && m.diagonal().iter().all(|d| *d == m.diagonal()[0]))
        }
        Family::BlockScalar | Family::Diagonalizable => {
            let shapes = instance
                .frame
                .iter()
                .zip(&instance.block_scalars)
                .all(|(m, scalars)| is_block_scalar_plus_strict(m, &instance.block_sizes, scalars));
            let distinct =
                instance.block_scalars.iter().all(|s| s.iter().enumerate().all(|(i, a)| s[..i].iter().all(|b| b != a)));
            if instance.spec.family == Family::Diagonalizable {
                return shapes && distinct;
            }
            // Nilpotent parts must commute with each other as well.
            let field = instance.spec.field;
            let nil: Vec<Matrix<S>> = instance
                .frame
                .iter()
                .zip(&instance.block_scalars)
                .map(|(m, scalars)| {
                    let mut d = Matrix::zeros(n, n, &field);
                    let mut offset = 0;
                    for (b, &size) in instance.block_sizes.iter().enumerate() {
                        place_block(&mut d, &Matrix::scalar(size, &scalars[b]), offset);
                        offset += size;
                    }
                    m.sub(&d)
                })
                .collect();
            shapes && distinct && nil.iter().all(|a| nil.iter().all(|b| a.mul(b) == b.mul(a)))
        }
        Family::OpenQuestion => {
            instance.frame.iter().all(|m| m.is_upper_triangular() && m.get(0, 0) == m.get(n - 1, n - 1))
        }
        Family::UnitaryBlocks => false,
    }
}

/// Whether some generator over ℚ provably has infinite multiplicative order,
/// which makes the closure infinite. Never true over finite fields.
pub fn has_infinite_order_generator<S: Scalar>(gens: &[Matrix<S>]) -> bool {
    let Some(first) = gens.first() else { return false };
    let field = first.field();
    if field != FieldDescriptor::Rational {
        return false;
    }
    let one = S::one(&field);
    let minus_one = one.neg();
    gens.iter().any(|g| {
        let report = singleton_spectrum(g);
        if let Some(c) = report.eigenvalue {
            // cI + N with N != 0 has infinite order in characteristic 0
            return !c.is_zero() && (g.as_scalar().is_none() || (c != one && c != minus_one));
        }
        g.charpoly().roots_with_multiplicity().iter().any(|(c, _)| !c.is_zero() && *c != one && *c != minus_one)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// `None` when the pipeline answered Unknown.
    pub pipeline_reducible: Option<bool>,
    /// `None` when exhaustive search is unavailable.
    pub oracle_reducible: Option<bool>,
    /// `None` when triangularization stopped at an Unknown block.
    pub triangularized: Option<bool>,
    pub oracle_triangularizable: Option<bool>,
    /// Size of the closure when it completed within 200 elements.
    pub closure_size: Option<usize>,
    pub closure_all_singleton: Option<bool>,
    pub agreement: bool,
}

pub const ORACLE_CLOSURE_CAP: usize = 200;

/// Whether a complete chain `0 < W_1 < ... < W_{n-1} < F^n` can be chosen from
/// the given invariant subspaces.
pub fn chain_exists<S: Scalar>(n: usize, invariant: &[Subspace<S>]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut reachable: Vec<&Subspace<S>> = invariant.iter().filter(|w| w.dim() == 1).collect();
    for d in 2..n {
        reachable =
            invariant.iter().filter(|w| w.dim() == d && reachable.iter().any(|v| w.contains_subspace(v))).collect();
    }
    !reachable.is_empty()
}

/// Cross-checks the pipeline and the triangularizer against exhaustive search
/// and against the singleton test on a small complete closure.
pub fn oracle_compare<S: Scalar>(gens: &[Matrix<S>]) -> Result<OracleReport> {
    let (n, field) = validate_generators(gens)?;
    let pipeline_reducible = match find_invariant_subspace(n, &field, gens) {
        ReducibilityVerdict::Reducible { .. } => Some(true),
        ReducibilityVerdict::Irreducible(_) => Some(false),
        ReducibilityVerdict::Unknown => None,
    };
    let exhaustive = brute_force_invariant_subspaces(n, &field, gens, BRUTE_FORCE_BUDGET).ok();
    let oracle_reducible = exhaustive.as_ref().map(|list| !list.is_empty());
    let oracle_triangularizable = exhaustive.as_ref().map(|list| chain_exists(n, list));
    let triangularized = match triangularize(gens)?.outcome {
        TriangularizationOutcome::Flag(_) => Some(true),
        TriangularizationOutcome::IrreducibleBlock { .. } => Some(false),
        TriangularizationOutcome::Unknown { .. } => None,
    };
    let c = closure(gens, ORACLE_CLOSURE_CAP);
    let (closure_size, closure_all_singleton) = if c.truncated() {
        (None, None)
    } else {
        (Some(c.len()), Some(c.elements().iter().all(|m| singleton_spectrum(m).singleton)))
    };

    let mut agreement = true;
    if oracle_reducible.is_some() {
        agreement &= pipeline_reducible == oracle_reducible;
    }
    if oracle_triangularizable.is_some() {
        agreement &= triangularized == oracle_triangularizable;
    }
    if closure_all_singleton == Some(true) {
        agreement &= triangularized == Some(true);
    }
    Ok(OracleReport {
        pipeline_reducible,
        oracle_reducible,
        triangularized,
        oracle_triangularizable,
        closure_size,
        closure_all_singleton,
        agreement,
    })
}

pub const MAX_GROUP_ORDER: usize = 48;
pub const MAX_CONDITION: f64 = 1e3;
const NUMERIC_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct NumericInstance {
    pub spec: InstanceSpec,
    pub generators: Vec<NumericMatrix>,
    pub conjugator: NumericMatrix,
    pub block_sizes: Vec<usize>,
    /// `|c|` for each generator `c P U P^-1`.
    pub scales: Vec<f64>,
    pub group_order: usize,
    pub conjugator_condition: f64,
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two generators of a small irreducible unitary group in dimension 2.
fn unitary_pair(kind: usize) -> [NumericMatrix; 2] {
    let m = |a: [Complex64; 4]| NumericMatrix::from_row_slice(2, 2, &a);
    let reflection = m([cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)]);
    match kind {
        // dihedral of order 8
        0 => [m([cx(0.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]), reflection],
        // dihedral of order 6
        1 => {
            let (c, s) = ((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
            [m([cx(c, 0.0), cx(-s, 0.0), cx(s, 0.0), cx(c, 0.0)]), reflection]
        }
        // quaternion group
        _ => [
            m([cx(0.0, 1.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, -1.0)]),
            m([cx(0.0, 0.0), cx(1.0, 0.0), cx(-1.0, 0.0), cx(0.0, 0.0)]),
        ],
    }
}

fn condition_number(m: &NumericMatrix) -> f64 {
    // squared singular values as eigenvalues of the Gram matrix
    let gram = m.adjoint() * m;
    let ev = nalgebra::SymmetricEigen::new(gram).eigenvalues;
    let max = ev.iter().copied().fold(0.0, f64::max);
    let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        (max / min).sqrt()
    }
}

/// Conjugated finite unitary block families `c P U P^-1` (nilpotent part zero).
pub fn generate_numeric(spec: &InstanceSpec) -> Result<NumericInstance> {
    let n = spec.n;
    if spec.family != Family::UnitaryBlocks {
        return Err(Error::BadSpec(format!("{} is an exact family", spec.family.name())));
    }
    if !(2..=6).contains(&n) || spec.generator_count == 0 {
        return Err(Error::BadSpec(format!("numeric family needs 2 <= n <= 6 and generators, got n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..NUMERIC_ATTEMPTS {
        let mut block_sizes = Vec::new();
        let mut left = n;
        while left > 0 {
            let size = if left >= 2 && rng.gen_bool(0.6) { 2 } else { 1 };
            block_sizes.push(size);
            left -= size;
        }
        let kinds: Vec<usize> = block_sizes.iter().map(|_| rng.gen_range(0..3)).collect();

        let mut q = NumericMatrix::identity(n, n);
        for z in q.iter_mut() {
            *z += cx(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
        }
        let condition = condition_number(&q);
        let Some(q_inv) = q.clone().try_inverse() else { continue };
        if condition > MAX_CONDITION {
            continue;
        }

        let mut generators = Vec::with_capacity(spec.generator_count);
        let mut scales = Vec::with_capacity(spec.generator_count);
        for _ in 0..spec.generator_count {
            let mut u = NumericMatrix::zeros(n, n);
            let mut offset = 0;
            for (&size, &kind) in block_sizes.iter().zip(&kinds) {
                if size == 1 {
                    u[(offset, offset)] = Complex64::i().powu(rng.gen_range(0..4));
                } else {
                    let pair = unitary_pair(kind);
                    let len = rng.gen_range(1..=2);
                    let mut w = NumericMatrix::identity(2, 2);
                    for _ in 0..len {
                        w = &w * &pair[rng.gen_range(0..2)];
                    }
                    u.view_mut((offset, offset), (2, 2)).copy_from(&w);
                }
                offset += size;
            }
            let r = *[0.5, 1.0, 2.0].choose(&mut rng).expect("nonempty");
            let c = Complex64::i().powu(rng.gen_range(0..4)) * r;
            generators.push(&q * u * c * &q_inv);
            scales.push(r);
        }
        let Ok(group) = normalized_closure(&generators, MAX_GROUP_ORDER) else { continue };
        return Ok(NumericInstance {
            spec: *spec,
            generators,
            conjugator: q,
            block_sizes,
            scales,
            group_order: group.len(),
            conjugator_condition: condition,
        });
    }
    Err(Error::BadSpec("no instance within the group order and conditioning limits".into()))
}

/// Conjugated scalar family `{c_i I}`; conjugation leaves it unchanged.
pub fn numeric_scalar_family(n: usize, count: usize, seed: u64) -> Vec<NumericMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            NumericMatrix::identity(n, n) * if c.norm() < 0.1 { cx(1.0, 0.0) } else { c }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};
    use crate::semigroup::closure;

    fn spec(family: Family, n: usize, field: FieldDescriptor, generator_count: usize, seed: u64) -> InstanceSpec {
        InstanceSpec { family, n, field, generator_count, seed }
    }

    #[test]
    fn kolchin_generators_are_unipotent() {
        let inst = generate_instance::<Rational>(&spec(Family::Kolchin, 3, FieldDescriptor::Rational, 2, 7)).unwrap();
        assert!(inst.generators.iter().all(is_unipotent));
        assert!(hypothesis_holds(&inst));
    }

    #[test]
    fn kaplansky_over_gf2_is_all_singleton() {
        let gf2 = FieldDescriptor::Prime(2);
        let gens = generate::<Fp>(&spec(Family::Kaplansky, 2, gf2, 2, 1)).unwrap();
        let c = closure(&gens, 10_000);
        assert!(!c.truncated());
        assert!(c.elements().iter().all(|m| singleton_spectrum(m).singleton));
    }

    #[test]
    fn levitzki_generators_are_nilpotent() {
        let gens = generate::<Rational>(&spec(Family::Levitzki, 4, FieldDescriptor::Rational, 3, 3)).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens.iter().all(Matrix::is_nilpotent));
    }

    #[test]
    fn generation_is_deterministic() {
        for family in [
            Family::Levitzki,
            Family::Kolchin,
            Family::Kaplansky,
            Family::BlockScalar,
            Family::Diagonalizable,
            Family::OpenQuestion,
        ] {
            let s = spec(family, 4, FieldDescriptor::Prime(7), 3, 11);
            let a = generate_instance::<Fp>(&s).unwrap();
            assert_eq!(a, generate_instance::<Fp>(&s).unwrap());
            assert!(hypothesis_holds(&a), "{family:?}");
            let text = |i: &Instance<Fp>| i.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";");
            assert_eq!(text(&a), text(&generate_instance::<Fp>(&s).unwrap()));
        }
    }

    #[test]
    fn bad_specs() {
        let q = FieldDescriptor::Rational;
        assert!(matches!(generate::<Rational>(&spec(Family::Kaplansky, 1, q, 2, 0)), Err(Error::BadSpec(_))));
        assert!(matches!(generate::<Rational>(&spec(Family::Kaplansky, 3, q, 0, 0)), Err(Error::BadSpec(_))));
        assert!(matches!(generate::<Fp>(&spec(Family::Kaplansky, 3, q, 2, 0)), Err(Error::BadSpec(_))));
        assert!(matches!(generate::<Rational>(&spec(Family::UnitaryBlocks, 3, q, 2, 0)), Err(Error::BadSpec(_))));
    }

    #[test]
    fn oracle_examples() {
        let gf2 = FieldDescriptor::Prime(2);
        let gens = generate::<Fp>(&spec(Family::Levitzki, 3, gf2, 2, 5)).unwrap();
        assert!(oracle_compare(&gens).unwrap().agreement);

        let pair = [Matrix::<Fp>::from_i64(&gf2, &[&[0, 1], &[1, 0]]), Matrix::from_i64(&gf2, &[&[0, 1], &[1, 1]])];
        let report = oracle_compare(&pair).unwrap();
        assert_eq!(report.pipeline_reducible, Some(false));
        assert_eq!(report.oracle_reducible, Some(false));
        assert!(report.agreement);

        let gf3 = FieldDescriptor::Prime(3);
        let gens = generate::<Fp>(&spec(Family::Kaplansky, 3, gf3, 2, 9)).unwrap();
        let report = oracle_compare(&gens).unwrap();
        assert!(report.agreement);
        assert_eq!(report.oracle_triangularizable, Some(true));
    }

    #[test]
    fn infinite_order_detection() {
        let q = FieldDescriptor::Rational;
        assert!(has_infinite_order_generator(&[Matrix::<Rational>::from_i64(&q, &[&[1, 1], &[0, 1]])]));
        assert!(has_infinite_order_generator(&[Matrix::<Rational>::from_i64(&q, &[&[2, 0], &[0, 1]])]));
        assert!(!has_infinite_order_generator(&[Matrix::<Rational>::from_i64(&q, &[&[0, -1], &[1, 0]])]));
        assert!(!has_infinite_order_generator(&[Matrix::<Rational>::from_i64(&q, &[&[0, 1], &[0, 0]])]));
    }

    #[test]
    fn numeric_instances_respect_limits() {
        for seed in 0..5 {
            let inst = generate_numeric(&spec(Family::UnitaryBlocks, 4, FieldDescriptor::Rational, 2, seed)).unwrap();
            assert!(inst.group_order <= MAX_GROUP_ORDER);
            assert!(inst.conjugator_condition <= MAX_CONDITION);
            assert_eq!(inst.block_sizes.iter().sum::<usize>(), 4);
        }
    }
}
