//! Acceptance suites shared by the `selftest` command and the test suite.

use std::fmt;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    generate_instance, generate_numeric, has_infinite_order_generator, hypothesis_holds, mix_seed,
    numeric_scalar_family, Family, InstanceSpec, Sampler, MAX_CONDITION, MAX_GROUP_ORDER,
};
use crate::invariant::{
    brute_force_invariant_subspaces, find_invariant_subspace, ReducibilityVerdict, Stage, BRUTE_FORCE_BUDGET,
};
use crate::linalg::{verify_flag, Matrix};
use crate::scalar::{FieldDescriptor, Fp, Rational, Scalar};
use crate::semigroup::{closure, ideal_violations, nilpotent_ideal, DEFAULT_CAP};
use crate::spectrum::{is_unipotent, singleton_spectrum};
use crate::triangularize::{diagonal_of, levitzki_triangularize, triangularize};
use crate::unitarize::{block_unitarize, BlockKind, DEFAULT_TOL};

pub const DEFAULT_SUITE_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub criterion: u32,
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    pub detail: String,
    pub millis: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total && self.total > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] criterion {} {}: {}/{} ({})",
            self.criterion, self.name, self.passed, self.total, self.detail
        )
    }
}

struct Tally {
    criterion: u32,
    name: &'static str,
    passed: usize,
    total: usize,
    failures: Vec<String>,
    started: Instant,
}

impl Tally {
    fn new(criterion: u32, name: &'static str) -> Self {
        Tally { criterion, name, passed: 0, total: 0, failures: Vec::new(), started: Instant::now() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn finish(self, detail: String) -> SuiteReport {
        SuiteReport {
            criterion: self.criterion,
            name: self.name,
            passed: self.passed,
            total: self.total,
            failures: self.failures,
            detail,
            millis: self.started.elapsed().as_millis(),
        }
    }
}

macro_rules! dispatch {
    ($field:expr, $f:ident ( $($arg:expr),* )) => {
        match $field {
            FieldDescriptor::Rational => $f::<Rational>($($arg),*),
            FieldDescriptor::Prime(_) => $f::<Fp>($($arg),*),
        }
    };
}

const Q: FieldDescriptor = FieldDescriptor::Rational;

fn gf(p: u64) -> FieldDescriptor {
    FieldDescriptor::Prime(p)
}

fn cycle_specs(
    family_at: impl Fn(usize) -> Family,
    combos: &[(FieldDescriptor, usize)],
    count: usize,
    seed: u64,
    stream: u64,
) -> Vec<InstanceSpec> {
    (0..count)
        .map(|i| {
            let (field, n) = combos[i % combos.len()];
            InstanceSpec {
                family: family_at(i),
                n,
                field,
                generator_count: 2 + i % 2,
                seed: mix_seed(seed, stream, i as u64),
            }
        })
        .collect()
}

pub fn kaplansky_specs(seed: u64) -> Vec<InstanceSpec> {
    let mut combos: Vec<(FieldDescriptor, usize)> = (2..=6).map(|n| (Q, n)).collect();
    combos.extend([(gf(2), 2), (gf(2), 4), (gf(3), 3), (gf(3), 6)]);
    combos.extend((2..=5).map(|n| (gf(5), n)));
    cycle_specs(|_| Family::Kaplansky, &combos, 200, seed, 1)
}

fn small_combos() -> Vec<(FieldDescriptor, usize)> {
    let mut combos: Vec<(FieldDescriptor, usize)> = (2..=5).map(|n| (Q, n)).collect();
    combos.extend((2..=4).map(|n| (gf(2), n)));
    combos.extend((2..=4).map(|n| (gf(3), n)));
    combos.extend((2..=5).map(|n| (gf(5), n)));
    combos
}

pub fn kolchin_specs(seed: u64) -> Vec<InstanceSpec> {
    cycle_specs(|_| Family::Kolchin, &small_combos(), 100, seed, 2)
}

pub fn levitzki_specs(seed: u64) -> Vec<InstanceSpec> {
    let mut combos = small_combos();
    combos.push((Q, 6));
    cycle_specs(|_| Family::Levitzki, &combos, 100, seed, 3)
}

pub fn block_scalar_specs(seed: u64) -> Vec<InstanceSpec> {
    let combos: Vec<(FieldDescriptor, usize)> =
        [Q, gf(5), gf(7)].into_iter().flat_map(|f| (3..=6).map(move |n| (f, n))).collect();
    cycle_specs(|i| if i % 2 == 0 { Family::BlockScalar } else { Family::Diagonalizable }, &combos, 100, seed, 4)
}

fn label(spec: &InstanceSpec) -> String {
    format!("{} n={} {} gens={} seed={}", spec.family.name(), spec.n, spec.field, spec.generator_count, spec.seed)
}

fn constant(diagonal: &[impl PartialEq]) -> bool {
    diagonal.iter().all(|d| *d == diagonal[0])
}

fn kaplansky_case<S: Scalar>(spec: &InstanceSpec) -> Result<(), String> {
    let inst = generate_instance::<S>(spec).map_err(|e| e.to_string())?;
    if !hypothesis_holds(&inst) {
        return Err("hypothesis self-check failed".into());
    }
    let result = triangularize(&inst.generators).map_err(|e| e.to_string())?;
    let flag = result.flag().ok_or_else(|| format!("{:?}", result.outcome))?;
    if !verify_flag(&inst.generators, flag) {
        return Err("flag does not verify".into());
    }
    let mut elements = inst.generators.clone();
    for a in &inst.generators {
        for b in &inst.generators {
            elements.push(a.mul(b));
        }
    }
    let diagonals = diagonal_of(&elements, flag).map_err(|e| e.to_string())?;
    if !diagonals.iter().all(|d| constant(d)) {
        return Err("non-constant diagonal".into());
    }
    Ok(())
}

pub fn kaplansky_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(1, "kaplansky");
    for spec in kaplansky_specs(seed) {
        let outcome = dispatch!(spec.field, kaplansky_case(&spec));
        tally.record(outcome.is_ok(), || format!("{}: {}", label(&spec), outcome.unwrap_err()));
    }
    tally.finish("flags verified, constant diagonals on generators and pairwise products".into())
}

fn kolchin_case<S: Scalar>(spec: &InstanceSpec) -> Result<(), String> {
    let inst = generate_instance::<S>(spec).map_err(|e| e.to_string())?;
    if !hypothesis_holds(&inst) {
        return Err("hypothesis self-check failed".into());
    }
    let result = triangularize(&inst.generators).map_err(|e| e.to_string())?;
    let flag = result.flag().ok_or_else(|| format!("{:?}", result.outcome))?;
    let diagonals = diagonal_of(&inst.generators, flag).map_err(|e| e.to_string())?;
    if !diagonals.iter().flatten().all(S::is_one) {
        return Err("diagonal entry other than one".into());
    }
    Ok(())
}

pub fn kolchin_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(2, "kolchin");
    for spec in kolchin_specs(seed) {
        let outcome = dispatch!(spec.field, kolchin_case(&spec));
        tally.record(outcome.is_ok(), || format!("{}: {}", label(&spec), outcome.unwrap_err()));
    }
    tally.finish("flags verified, all diagonals exactly one".into())
}

fn levitzki_case<S: Scalar>(spec: &InstanceSpec) -> Result<(), String> {
    let inst = generate_instance::<S>(spec).map_err(|e| e.to_string())?;
    if !hypothesis_holds(&inst) {
        return Err("hypothesis self-check failed".into());
    }
    let chain_flag = levitzki_triangularize(&inst.generators).map_err(|e| e.to_string())?;
    let result = triangularize(&inst.generators).map_err(|e| e.to_string())?;
    let general = result.flag().ok_or_else(|| format!("{:?}", result.outcome))?;
    for flag in [&chain_flag, general] {
        if !verify_flag(&inst.generators, flag) {
            return Err("flag does not verify".into());
        }
        let diagonals = diagonal_of(&inst.generators, flag).map_err(|e| e.to_string())?;
        if !diagonals.iter().flatten().all(S::is_zero) {
            return Err("nonzero diagonal entry".into());
        }
    }
    Ok(())
}

pub fn levitzki_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(3, "levitzki");
    for spec in levitzki_specs(seed) {
        let outcome = dispatch!(spec.field, levitzki_case(&spec));
        tally.record(outcome.is_ok(), || format!("{}: {}", label(&spec), outcome.unwrap_err()));
    }
    tally.finish("chain and general flags both verified, all diagonals zero".into())
}

/// Returns whether the instance had two distinct block scalars somewhere.
fn block_scalar_case<S: Scalar>(spec: &InstanceSpec) -> Result<bool, String> {
    let inst = generate_instance::<S>(spec).map_err(|e| e.to_string())?;
    if !hypothesis_holds(&inst) {
        return Err("hypothesis self-check failed".into());
    }
    let result = triangularize(&inst.generators).map_err(|e| e.to_string())?;
    result.flag().ok_or_else(|| format!("{:?}", result.outcome))?;
    let split = inst.distinct_block_scalars();
    if split && !result.used_stage(Stage::SpectralSplit) {
        return Err("no spectral-split level in diagnostics".into());
    }
    Ok(split)
}

pub fn block_scalar_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(4, "block_scalar");
    let mut split = 0;
    for spec in block_scalar_specs(seed) {
        let outcome = dispatch!(spec.field, block_scalar_case(&spec));
        split += usize::from(outcome == Ok(true));
        tally.record(outcome.is_ok(), || format!("{}: {}", label(&spec), outcome.unwrap_err()));
    }
    tally.finish(format!("{split} instances with distinct block scalars, each split spectrally"))
}

fn random_matrix(sampler: &mut Sampler, n: usize, field: FieldDescriptor) -> Matrix<Fp> {
    let rows = (0..n).map(|_| (0..n).map(|_| sampler.uniform()).collect()).collect();
    Matrix::from_rows(&field, rows).expect("square rows")
}

pub fn oracle_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(5, "irreducibility_oracle");
    let combos = [(gf(2), 2), (gf(2), 3), (gf(3), 2), (gf(3), 3)];
    let mut irreducible = 0;
    for i in 0..500 {
        let (field, n) = combos[i % combos.len()];
        let mut sampler = Sampler::new(mix_seed(seed, 5, i as u64), field);
        let gens = [random_matrix(&mut sampler, n, field), random_matrix(&mut sampler, n, field)];
        let verdict = find_invariant_subspace(n, &field, &gens);
        let oracle = brute_force_invariant_subspaces(n, &field, &gens, BRUTE_FORCE_BUDGET).expect("tiny instance");
        let agree = match &verdict {
            ReducibilityVerdict::Reducible { .. } => !oracle.is_empty(),
            ReducibilityVerdict::Irreducible(_) => oracle.is_empty(),
            ReducibilityVerdict::Unknown => false,
        };
        irreducible += usize::from(oracle.is_empty());
        tally.record(agree, || {
            format!("{field} n={n} pair {i}: pipeline {verdict:?}, oracle {} subspaces", oracle.len())
        });
    }
    tally.finish(format!("{irreducible} irreducible pairs; Unknown counts as disagreement"))
}

/// `(checked, skipped_infinite, skipped_truncated, violations)`
fn ideal_case<S: Scalar>(spec: &InstanceSpec) -> Result<(bool, bool, usize), String> {
    let inst = generate_instance::<S>(spec).map_err(|e| e.to_string())?;
    if has_infinite_order_generator(&inst.generators) {
        return Ok((false, true, 0));
    }
    let c = closure(&inst.generators, DEFAULT_CAP);
    if c.truncated() {
        return Ok((false, false, 0));
    }
    let ideal = nilpotent_ideal(&c).map_err(|e| e.to_string())?;
    Ok((true, false, ideal_violations(&c, &ideal)))
}

pub fn ideal_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(6, "nilpotent_ideal");
    let (mut infinite, mut truncated) = (0, 0);
    let specs = [kaplansky_specs(seed), kolchin_specs(seed), levitzki_specs(seed), block_scalar_specs(seed)].concat();
    for spec in specs {
        match dispatch!(spec.field, ideal_case(&spec)) {
            Ok((true, _, violations)) => {
                tally.record(violations == 0, || format!("{}: {violations} violations", label(&spec)))
            }
            Ok((false, true, _)) => infinite += 1,
            Ok(_) => truncated += 1,
            Err(e) => tally.record(false, || format!("{}: {e}", label(&spec))),
        }
    }
    tally.finish(format!(
        "complete closures checked exhaustively; skipped {infinite} with an infinite-order generator over Q, {truncated} truncated at cap {DEFAULT_CAP}"
    ))
}

pub const UNIPOTENT_SAMPLE_CAP: usize = 300;

pub fn unipotent_product_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(7, "unipotent_products");
    let mut pairs = 0usize;
    for i in 0..50 {
        let spec = InstanceSpec {
            family: Family::Kaplansky,
            n: 2 + i % 3,
            field: Q,
            generator_count: 2 + i % 2,
            seed: mix_seed(seed, 7, i as u64),
        };
        let inst = match generate_instance::<Rational>(&spec) {
            Ok(inst) => inst,
            Err(e) => {
                tally.record(false, || format!("{}: {e}", label(&spec)));
                continue;
            }
        };
        let c = closure(&inst.generators, UNIPOTENT_SAMPLE_CAP);
        let hypothesis = c.elements().iter().all(|m| singleton_spectrum(m).singleton && !m.is_nilpotent());
        let unipotent: Vec<&Matrix<Rational>> = c.elements().iter().filter(|m| is_unipotent(m)).collect();
        let mut violations = 0;
        for a in &unipotent {
            for b in &unipotent {
                pairs += 1;
                violations += usize::from(!is_unipotent(&a.mul(b)));
            }
        }
        tally.record(hypothesis && violations == 0, || {
            format!("{}: hypothesis {hypothesis}, {violations} non-unipotent products", label(&spec))
        });
    }
    tally.finish(format!(
        "{pairs} unipotent pairs over closure samples of {UNIPOTENT_SAMPLE_CAP}; finite complete closures of this class over Q lie in {{I, -I}}"
    ))
}

fn to_f64(m: &Matrix<Rational>) -> Vec<Vec<f64>> {
    m.to_rows().iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn mat_pow(a: &[Vec<f64>], mut exp: u64) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut acc: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut base = a.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        exp >>= 1;
    }
    acc
}

fn binomial(m: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `‖(I+N)^m / C(m,k) - N^k‖_∞` in floating point.
pub fn limit_residual(n_matrix: &Matrix<Rational>, k: usize, m: u64) -> f64 {
    let size = n_matrix.rows();
    let field = n_matrix.field();
    let shifted = to_f64(&n_matrix.add(&Matrix::identity(size, &field)));
    let power = mat_pow(&shifted, m);
    let target = to_f64(&n_matrix.pow(k as u64));
    let scale = binomial(m, k as u64);
    (0..size).map(|i| (0..size).map(|j| (power[i][j] / scale - target[i][j]).abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn random_small_nilpotent(seed: u64, n: usize) -> Matrix<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut strict = Matrix::zeros(n, n, &Q);
        let mut lower = Matrix::identity(n, &Q);
        for i in 0..n {
            for j in i + 1..n {
                strict.set(i, j, Rational::from_integer(rng.gen_range(-1..=1)));
                lower.set(j, i, Rational::from_integer(rng.gen_range(0..=1)));
            }
        }
        if strict.is_zero() {
            continue;
        }
        let inverse = lower.inverse().expect("unit lower triangular");
        return lower.mul(&strict).mul(&inverse);
    }
}

pub fn nil_index(m: &Matrix<Rational>) -> usize {
    let mut power = m.clone();
    let mut k = 1;
    while !power.is_zero() {
        power = power.mul(m);
        k += 1;
    }
    k
}

pub fn limit_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(8, "limit_formula");
    let mut worst = 0.0f64;
    for i in 0..10 {
        let n = 2 + i % 3;
        let nil = random_small_nilpotent(mix_seed(seed, 8, i as u64), n);
        let k = nil_index(&nil) - 1;
        let residuals: Vec<f64> = [100u64, 1_000, 10_000].iter().map(|&m| limit_residual(&nil, k, m)).collect();
        worst = worst.max(residuals[2]);
        let ok = residuals[2] <= 1e-2
            && residuals[2] < residuals[0]
            && residuals[1] < residuals[0]
            && residuals[2] < residuals[1];
        tally.record(ok, || format!("n={n} k={k}: residuals {residuals:?}"));
    }
    tally.finish(format!("worst residual at m=10^4: {:.3e}", worst.to_f64().unwrap_or(f64::NAN)))
}

pub fn numeric_suite(seed: u64) -> SuiteReport {
    let mut tally = Tally::new(9, "block_unitarize");
    let mut worst = 0.0f64;
    for i in 0..50 {
        let spec = InstanceSpec {
            family: Family::UnitaryBlocks,
            n: 2 + i % 3,
            field: Q,
            generator_count: 2,
            seed: mix_seed(seed, 9, i as u64),
        };
        let outcome = generate_numeric(&spec).and_then(|inst| {
            let within = inst.group_order <= MAX_GROUP_ORDER && inst.conjugator_condition <= MAX_CONDITION;
            block_unitarize(&inst.generators, DEFAULT_CAP, DEFAULT_TOL).map(|r| (within, r))
        });
        match outcome {
            Ok((within, result)) => {
                let residual = result
                    .kinds
                    .iter()
                    .zip(&result.residuals)
                    .filter(|(k, _)| **k == BlockKind::ScaledUnitary)
                    .map(|(_, r)| *r)
                    .fold(0.0, f64::max);
                worst = worst.max(residual);
                tally.record(within && residual <= DEFAULT_TOL, || {
                    format!("n={} seed={}: residual {residual:.3e}, within limits {within}", spec.n, spec.seed)
                });
            }
            Err(e) => tally.record(false, || format!("n={} seed={}: {e}", spec.n, spec.seed)),
        }
    }
    for i in 0..10 {
        let n = 2 + i % 3;
        let gens = numeric_scalar_family(n, 2, mix_seed(seed, 90, i as u64));
        let outcome = block_unitarize(&gens, DEFAULT_CAP, DEFAULT_TOL);
        let ok = outcome
            .as_ref()
            .is_ok_and(|r| r.kinds.iter().all(|k| *k == BlockKind::Scalar1x1) && r.block_dims.len() == n);
        tally.record(ok, || format!("scalar family n={n}: {outcome:?}"));
    }
    tally.finish(format!(
        "50 conjugated unitary-block families and 10 scalar families; worst scaled-unitary residual {worst:.3e}"
    ))
}

/// Criteria with a dedicated suite.
pub const SUITE_CRITERIA: std::ops::RangeInclusive<u32> = 1..=9;

/// The suite for one criterion, `None` outside [`SUITE_CRITERIA`].
pub fn run_criterion(criterion: u32, seed: u64) -> Option<SuiteReport> {
    let suite: fn(u64) -> SuiteReport = match criterion {
        1 => kaplansky_suite,
        2 => kolchin_suite,
        3 => levitzki_suite,
        4 => block_scalar_suite,
        5 => oracle_suite,
        6 => ideal_suite,
        7 => unipotent_product_suite,
        8 => limit_suite,
        9 => numeric_suite,
        _ => return None,
    };
    Some(suite(seed))
}

/// Criteria 1 through 9 in order.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITE_CRITERIA.filter_map(|c| run_criterion(c, seed)).collect()
}
