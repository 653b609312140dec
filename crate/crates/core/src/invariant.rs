//! Common invariant subspaces of a generator set.
//!
//! [`find_invariant_subspace`] runs a fixed sequence of stages and stops at the
//! first one that produces a nonzero proper subspace invariant under every
//! generator. Every candidate is checked exactly before it is accepted, so a
//! `Reducible` verdict never depends on the reasoning that produced it.
//!
//! The stages that matter for triangularizable families:
//!
//! * nilpotent families have a nonzero common kernel;
//! * if `A` has singleton spectrum `{c}` and the generated algebra is
//!   triangularizable, `A - cI` lies in its radical, so the spin of the
//!   columns of `A - cI` is a proper invariant subspace;
//! * for `A + N` with `N` nilpotent and commuting with `A`, the generalized
//!   eigenspaces of `A + N` are those of `A`, which the spectral split finds.
//!
//! Over ℚ irreducibility is only certified through the full-algebra test;
//! over small prime fields exhaustive enumeration settles every case.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Polynomial, Subspace};
use crate::scalar::{FieldDescriptor, Scalar};
use crate::spectrum::singleton_spectrum;

pub const DEFAULT_WORD_LENGTH: usize = 4;
pub const BRUTE_FORCE_BUDGET: u128 = 1 << 16;
pub const DEFAULT_SEED: u64 = 0x7269_676f_6e61;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantConfig {
    pub seed: u64,
    /// Longest generator word tried by the chop stages.
    pub max_word_len: usize,
    /// Hard limit on distinct words kept.
    pub max_words: usize,
    /// Random algebra elements tried by the Norton stage.
    pub random_trials: usize,
    pub brute_force_budget: u128,
}

impl Default for InvariantConfig {
    fn default() -> Self {
        InvariantConfig {
            seed: DEFAULT_SEED,
            max_word_len: DEFAULT_WORD_LENGTH,
            max_words: 256,
            random_trials: 12,
            brute_force_budget: BRUTE_FORCE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    CommonKernel,
    ScalarFamily,
    NilpotentWord,
    SpectralSplit,
    SingletonKernel,
    NortonChop,
    FullAlgebra,
    ExhaustiveSearch,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::CommonKernel => "common_kernel",
            Stage::ScalarFamily => "scalar_family",
            Stage::NilpotentWord => "nilpotent_word",
            Stage::SpectralSplit => "spectral_split",
            Stage::SingletonKernel => "singleton_kernel",
            Stage::NortonChop => "norton_chop",
            Stage::FullAlgebra => "full_algebra",
            Stage::ExhaustiveSearch => "exhaustive_search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// The unital algebra spanned by the generators has dimension `n²`.
    FullAlgebra { dim: usize },
    /// Every subspace was enumerated and none is invariant.
    ExhaustiveSearch,
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::FullAlgebra { .. } => "full_algebra",
            Certificate::ExhaustiveSearch => "exhaustive_search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducibilityVerdict<S> {
    Reducible { subspace: Subspace<S>, stage: Stage },
    Irreducible(Certificate),
    Unknown,
}

impl<S> ReducibilityVerdict<S> {
    pub fn is_reducible(&self) -> bool {
        matches!(self, ReducibilityVerdict::Reducible { .. })
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, ReducibilityVerdict::Irreducible(_))
    }
}

/// One absorbed vector of a spin: `vector = G[word[k-1]] ... G[word[0]] v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinStep<S> {
    pub word: Vec<usize>,
    pub vector: Vec<S>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinTrace<S> {
    pub subspace: Subspace<S>,
    /// The absorbed vectors; they form a basis of `subspace`.
    pub steps: Vec<SpinStep<S>>,
}

/// Smallest subspace containing `v` and invariant under every generator.
pub fn spin<S: Scalar>(v: &[S], gens: &[Matrix<S>]) -> Result<Subspace<S>> {
    spin_with_trace(v, gens).map(|t| t.subspace)
}

pub fn spin_with_trace<S: Scalar>(v: &[S], gens: &[Matrix<S>]) -> Result<SpinTrace<S>> {
    if v.iter().all(S::is_zero) {
        return Err(Error::ZeroVector);
    }
    let field = v[0].field();
    let mut subspace = Subspace::zero(v.len(), &field);
    subspace.insert(v.to_vec());
    let mut steps = vec![SpinStep { word: Vec::new(), vector: v.to_vec() }];
    let mut next = 0;
    while next < steps.len() && !subspace.is_full() {
        let current = steps[next].clone();
        for (gi, g) in gens.iter().enumerate() {
            let image = g.mul_vec(&current.vector);
            if subspace.insert(image.clone()) {
                let mut word = current.word.clone();
                word.push(gi);
                steps.push(SpinStep { word, vector: image });
            }
        }
        next += 1;
    }
    Ok(SpinTrace { subspace, steps })
}

/// Smallest invariant subspace containing all of `vectors` (zero if none is
/// nonzero).
pub fn spin_vectors<S: Scalar>(
    ambient: usize,
    field: &FieldDescriptor,
    vectors: &[Vec<S>],
    gens: &[Matrix<S>],
) -> Subspace<S> {
    let mut subspace = Subspace::zero(ambient, field);
    let mut queue: Vec<Vec<S>> = Vec::new();
    for v in vectors {
        if subspace.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    let mut next = 0;
    while next < queue.len() && !subspace.is_full() {
        let current = queue[next].clone();
        for g in gens {
            let image = g.mul_vec(&current);
            if subspace.insert(image.clone()) {
                queue.push(image);
            }
        }
        next += 1;
    }
    subspace
}

fn flatten<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

/// Dimension of the unital algebra spanned by all words in the generators.
pub fn burnside_dimension<S: Scalar>(n: usize, field: &FieldDescriptor, gens: &[Matrix<S>]) -> usize {
    let id = Matrix::identity(n, field);
    let mut span = Subspace::zero(n * n, field);
    span.insert(flatten(&id));
    let mut basis = vec![id];
    let mut next = 0;
    while next < basis.len() && !span.is_full() {
        let current = basis[next].clone();
        for g in gens {
            let product = g.mul(&current);
            if span.insert(flatten(&product)) {
                basis.push(product);
            }
        }
        next += 1;
    }
    span.dim()
}

/// Decomposition of `F^n` into `B`-invariant summands: one generalized
/// eigenspace `ker (B - cI)^n` per base-field eigenvalue, plus `ker h(B)` for
/// the part `h` of the characteristic polynomial without base-field roots.
pub fn spectral_split<S: Scalar>(b: &Matrix<S>) -> Vec<Subspace<S>> {
    let n = b.n();
    let field = b.field();
    let chi = b.charpoly();
    let roots = chi.roots_with_multiplicity();
    if roots.is_empty() || (roots.len() == 1 && roots[0].1 == n) {
        return vec![Subspace::full(n, &field)];
    }
    let mut out = Vec::with_capacity(roots.len() + 1);
    let mut rest = chi;
    for (c, m) in &roots {
        out.push(b.shift(c).pow(n as u64).kernel());
        rest = rest.div_rem(&Polynomial::power_of_linear(c, *m)).0;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest.eval_matrix(b).kernel());
    }
    out
}

/// Number of `d`-dimensional subspaces of `GF(q)^n`, saturating.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        let a = q.saturating_pow((n - i) as u32).saturating_sub(1);
        let b = q.saturating_pow((i + 1) as u32).saturating_sub(1);
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX {
            return u128::MAX;
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of nonzero proper subspaces of `GF(q)^n`, saturating.
pub fn proper_subspace_count(n: usize, q: u64) -> u128 {
    (1..n).fold(0u128, |acc, d| acc.saturating_add(gaussian_binomial(n, d, q)))
}

/// Every nonzero proper subspace of `GF(p)^n` invariant under all generators,
/// ordered by dimension and then by enumeration order of echelon forms.
pub fn brute_force_invariant_subspaces<S: Scalar>(
    n: usize,
    field: &FieldDescriptor,
    gens: &[Matrix<S>],
    budget: u128,
) -> Result<Vec<Subspace<S>>> {
    let FieldDescriptor::Prime(p) = *field else {
        return Err(Error::BadSpec("exhaustive search needs a prime field".into()));
    };
    let needed = proper_subspace_count(n, p);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let elements: Vec<S> = (0..p).map(|k| S::from_i64(k as i64, field)).collect();
    let mut out = Vec::new();
    for d in 1..n {
        for pivots in combinations(n, d) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut digits = vec![0usize; free.len()];
            loop {
                let mut rows: Vec<Vec<S>> = vec![vec![elements[0].clone(); n]; d];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = elements[1].clone();
                }
                for (&(r, c), &k) in free.iter().zip(&digits) {
                    rows[r][c] = elements[k].clone();
                }
                let w = Subspace::from_vectors(n, field, rows);
                if w.is_invariant_under_all(gens) {
                    out.push(w);
                }
                if !advance(&mut digits, p as usize) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Distinct words in the generators, shortest first, built on demand.
struct Words<'a, S: Scalar> {
    gens: &'a [Matrix<S>],
    words: Vec<Matrix<S>>,
    seen: HashSet<Matrix<S>>,
    /// Words of the current longest length occupy `words[frontier..]`.
    frontier: usize,
    length: usize,
    limit: usize,
}

impl<'a, S: Scalar> Words<'a, S> {
    fn new(gens: &'a [Matrix<S>], limit: usize) -> Self {
        Words { gens, words: Vec::new(), seen: HashSet::new(), frontier: 0, length: 0, limit }
    }

    fn up_to(&mut self, length: usize) -> &[Matrix<S>] {
        while self.length < length && self.words.len() < self.limit {
            let fresh: Vec<Matrix<S>> = if self.length == 0 {
                self.gens.to_vec()
            } else {
                let mut fresh = Vec::new();
                for w in &self.words[self.frontier..] {
                    for g in self.gens {
                        fresh.push(w.mul(g));
                    }
                }
                fresh
            };
            let start = self.words.len();
            for m in fresh {
                if self.words.len() == self.limit {
                    break;
                }
                if self.seen.insert(m.clone()) {
                    self.words.push(m);
                }
            }
            self.frontier = start;
            self.length += 1;
            if self.words.len() == start {
                break;
            }
        }
        &self.words
    }
}

struct Search<'a, S: Scalar> {
    n: usize,
    field: FieldDescriptor,
    gens: &'a [Matrix<S>],
    transposed: Vec<Matrix<S>>,
    config: InvariantConfig,
}

impl<'a, S: Scalar> Search<'a, S> {
    fn accept(&self, w: Subspace<S>) -> Option<Subspace<S>> {
        (w.is_proper() && w.is_invariant_under_all(self.gens)).then_some(w)
    }

    fn spin_columns(&self, z: &Matrix<S>) -> Option<Subspace<S>> {
        self.accept(spin_vectors(self.n, &self.field, &z.columns(), self.gens))
    }

    /// Dual of [`Self::spin_columns`]: the annihilator of the spin of the rows
    /// of `z` under the transposed generators.
    fn spin_rows_dual(&self, z: &Matrix<S>) -> Option<Subspace<S>> {
        let w = spin_vectors(self.n, &self.field, &z.to_rows(), &self.transposed);
        if !w.is_proper() {
            return None;
        }
        self.accept(w.annihilator())
    }

    fn common_kernel(&self) -> Option<Subspace<S>> {
        let mut k = Subspace::full(self.n, &self.field);
        for g in self.gens {
            k = k.intersection(&g.kernel());
            if k.is_zero() {
                return None;
            }
        }
        self.accept(k)
    }

    fn scalar_family(&self) -> Option<Subspace<S>> {
        if self.gens.iter().all(|g| g.as_scalar().is_some()) {
            return self.accept(Subspace::from_vectors(self.n, &self.field, [unit_vector(self.n, 0, &self.field)]));
        }
        None
    }

    fn nilpotent_words(&self, words: &mut Words<S>) -> Option<Subspace<S>> {
        if self.gens.iter().all(|g| !g.det().is_zero()) {
            return None;
        }
        let candidates: Vec<Matrix<S>> = words
            .up_to(self.config.max_word_len)
            .iter()
            .filter(|w| !w.is_zero() && w.is_nilpotent())
            .cloned()
            .collect();
        for z in &candidates {
            if let Some(w) = self.spin_columns(z).or_else(|| self.spin_rows_dual(z)) {
                return Some(w);
            }
        }
        None
    }

    fn spectral(&self, words: &mut Words<S>) -> Option<Subspace<S>> {
        let candidates = words.up_to(2.min(self.config.max_word_len)).to_vec();
        for b in &candidates {
            let parts = spectral_split(b);
            if parts.len() < 2 {
                continue;
            }
            for part in parts {
                if let Some(w) = self.accept(part) {
                    return Some(w);
                }
            }
        }
        None
    }

    fn singleton_kernel(&self, words: &mut Words<S>) -> Option<Subspace<S>> {
        let candidates = words.up_to(self.config.max_word_len).to_vec();
        for a in &candidates {
            if a.as_scalar().is_some() {
                continue;
            }
            let report = singleton_spectrum(a);
            let Some(c) = report.eigenvalue else { continue };
            let z = a.shift(&c);
            let found = self.accept(z.kernel()).or_else(|| self.spin_columns(&z)).or_else(|| self.spin_rows_dual(&z));
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn random_scalar(&self, rng: &mut ChaCha8Rng) -> S {
        match self.field {
            FieldDescriptor::Rational => S::from_i64(rng.gen_range(-9..=9), &self.field),
            FieldDescriptor::Prime(p) => S::from_i64(rng.gen_range(0..p.min(1 << 62)) as i64, &self.field),
        }
    }

    fn norton_candidate(&self, z: &Matrix<S>) -> Option<Subspace<S>> {
        for (c, _) in z.charpoly().roots_with_multiplicity() {
            let shifted = z.shift(&c);
            for v in shifted.kernel().basis().iter().take(3) {
                if let Some(w) = self.accept(spin_vectors(self.n, &self.field, std::slice::from_ref(v), self.gens)) {
                    return Some(w);
                }
            }
            let dual = shifted.transpose().kernel();
            for v in dual.basis().iter().take(3) {
                let w = spin_vectors(self.n, &self.field, std::slice::from_ref(v), &self.transposed);
                if w.is_proper() {
                    if let Some(w) = self.accept(w.annihilator()) {
                        return Some(w);
                    }
                }
            }
        }
        None
    }

    fn norton(&self, words: &mut Words<S>) -> Option<Subspace<S>> {
        let candidates = words.up_to(self.config.max_word_len).to_vec();
        for z in &candidates {
            if let Some(w) = self.norton_candidate(z) {
                return Some(w);
            }
        }
        let short = words.up_to(2.min(self.config.max_word_len)).to_vec();
        if short.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        for _ in 0..self.config.random_trials {
            let mut z = Matrix::scalar(self.n, &self.random_scalar(&mut rng));
            for w in &short {
                z = z.add(&w.scale(&self.random_scalar(&mut rng)));
            }
            if let Some(w) = self.norton_candidate(&z) {
                return Some(w);
            }
        }
        None
    }
}

/// Decides reducibility of the family `gens` acting on `F^n`.
pub fn find_invariant_subspace<S: Scalar>(
    n: usize,
    field: &FieldDescriptor,
    gens: &[Matrix<S>],
) -> ReducibilityVerdict<S> {
    find_invariant_subspace_with(n, field, gens, &InvariantConfig::default())
}

pub fn find_invariant_subspace_with<S: Scalar>(
    n: usize,
    field: &FieldDescriptor,
    gens: &[Matrix<S>],
    config: &InvariantConfig,
) -> ReducibilityVerdict<S> {
    let search =
        Search { n, field: *field, gens, transposed: gens.iter().map(Matrix::transpose).collect(), config: *config };
    let mut words = Words::new(gens, config.max_words);
    let reducible =
        |stage: Stage, w: Option<Subspace<S>>| w.map(|subspace| ReducibilityVerdict::Reducible { subspace, stage });

    if n >= 2 {
        let found = reducible(Stage::CommonKernel, search.common_kernel())
            .or_else(|| reducible(Stage::ScalarFamily, search.scalar_family()))
            .or_else(|| reducible(Stage::NilpotentWord, search.nilpotent_words(&mut words)))
            .or_else(|| reducible(Stage::SpectralSplit, search.spectral(&mut words)))
            .or_else(|| reducible(Stage::SingletonKernel, search.singleton_kernel(&mut words)))
            .or_else(|| reducible(Stage::NortonChop, search.norton(&mut words)));
        if let Some(verdict) = found {
            return verdict;
        }
    }

    let dim = burnside_dimension(n, field, gens);
    if dim == n * n {
        return ReducibilityVerdict::Irreducible(Certificate::FullAlgebra { dim });
    }
    if let FieldDescriptor::Prime(p) = *field {
        let small = (p as u128).checked_pow(n as u32).is_some_and(|size| size <= BRUTE_FORCE_BUDGET);
        if small {
            if let Ok(found) = brute_force_invariant_subspaces(n, field, gens, config.brute_force_budget) {
                return match found.into_iter().next() {
                    Some(subspace) => ReducibilityVerdict::Reducible { subspace, stage: Stage::ExhaustiveSearch },
                    None => ReducibilityVerdict::Irreducible(Certificate::ExhaustiveSearch),
                };
            }
        }
    }
    ReducibilityVerdict::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Rational};

    const Q: FieldDescriptor = FieldDescriptor::Rational;
    const GF2: FieldDescriptor = FieldDescriptor::Prime(2);

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64(&Q, rows)
    }

    fn gf2(rows: &[&[i64]]) -> Matrix<Fp> {
        Matrix::from_i64(&GF2, rows)
    }

    fn qv(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    fn fv(xs: &[u64]) -> Vec<Fp> {
        xs.iter().map(|&x| Fp::new(x, 2)).collect()
    }

    #[test]
    fn spin_examples() {
        let n = q(&[&[0, 1], &[0, 0]]);
        assert_eq!(spin(&qv(&[1, 0]), std::slice::from_ref(&n)).unwrap(), Subspace::coordinate(2, &Q, &[0]));
        assert!(spin(&qv(&[0, 1]), std::slice::from_ref(&n)).unwrap().is_full());
        let cycle = q(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let w = spin(&qv(&[1, 1, 1]), &[cycle]).unwrap();
        assert_eq!(w, Subspace::from_vectors(3, &Q, [qv(&[1, 1, 1])]));
        assert_eq!(spin(&qv(&[0, 0]), &[n]), Err(Error::ZeroVector));
    }

    #[test]
    fn spin_trace_replays() {
        let a = q(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let b = q(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let gens = [a, b];
        let v = qv(&[1, 0, 0]);
        let trace = spin_with_trace(&v, &gens).unwrap();
        assert!(trace.subspace.is_full());
        for step in &trace.steps {
            let replay = step.word.iter().fold(v.clone(), |x, &g| gens[g].mul_vec(&x));
            assert_eq!(replay, step.vector);
        }
        assert_eq!(Subspace::from_vectors(3, &Q, trace.steps.iter().map(|s| s.vector.clone())), trace.subspace);
        assert_eq!(trace.steps.len(), trace.subspace.dim());
    }

    #[test]
    fn burnside_examples() {
        assert_eq!(burnside_dimension(2, &Q, &[q(&[&[1, 0], &[0, 1]])]), 1);
        let pair = [gf2(&[&[0, 1], &[1, 0]]), gf2(&[&[0, 1], &[1, 1]])];
        assert_eq!(burnside_dimension(2, &GF2, &pair), 4);
        assert_eq!(burnside_dimension(2, &Q, &[q(&[&[1, 0], &[0, 2]])]), 2);
    }

    #[test]
    fn burnside_pair_by_word_saturation() {
        // words of length <= 3 together with I, row-reduced as vectors in F^4
        let pair = [gf2(&[&[0, 1], &[1, 0]]), gf2(&[&[0, 1], &[1, 1]])];
        let mut span = Subspace::zero(4, &GF2);
        let mut layer = vec![Matrix::identity(2, &GF2)];
        for _ in 0..=3 {
            for m in &layer {
                span.insert(flatten(m));
            }
            layer = layer.iter().flat_map(|m| pair.iter().map(move |g| m.mul(g))).collect();
        }
        assert_eq!(span.dim(), 4);
    }

    #[test]
    fn verdict_examples() {
        let j3 = q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(
            find_invariant_subspace(3, &Q, &[j3]),
            ReducibilityVerdict::Reducible { subspace: Subspace::coordinate(3, &Q, &[0]), stage: Stage::CommonKernel }
        );

        let pair = [gf2(&[&[0, 1], &[1, 0]]), gf2(&[&[0, 1], &[1, 1]])];
        // each of the three lines of GF(2)^2 is moved by one of the generators
        for line in [fv(&[1, 0]), fv(&[0, 1]), fv(&[1, 1])] {
            let w = Subspace::from_vectors(2, &GF2, [line]);
            assert!(!w.is_invariant_under_all(&pair));
        }
        assert_eq!(
            find_invariant_subspace(2, &GF2, &pair),
            ReducibilityVerdict::Irreducible(Certificate::FullAlgebra { dim: 4 })
        );

        let a = q(&[&[0, 1], &[-1, 2]]);
        let verdict = find_invariant_subspace(2, &Q, &[a]);
        let ReducibilityVerdict::Reducible { subspace, .. } = verdict else { panic!("{verdict:?}") };
        assert_eq!(subspace, Subspace::from_vectors(2, &Q, [qv(&[1, 1])]));
    }

    #[test]
    fn rational_rotation_is_unknown() {
        let r = q(&[&[0, -1], &[1, 0]]);
        assert_eq!(burnside_dimension(2, &Q, std::slice::from_ref(&r)), 2);
        assert_eq!(find_invariant_subspace(2, &Q, &[r]), ReducibilityVerdict::Unknown);
    }

    #[test]
    fn spectral_split_examples() {
        let d = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert_eq!(spectral_split(&d), vec![Subspace::coordinate(3, &Q, &[0, 1]), Subspace::coordinate(3, &Q, &[2])]);
        let j3 = q(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(spectral_split(&j3), vec![Subspace::full(3, &Q)]);
        let r = q(&[&[0, -1], &[1, 0]]);
        assert_eq!(spectral_split(&r), vec![Subspace::full(2, &Q)]);
        // eigenvalue 1 plus an irreducible quadratic
        let m = q(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, 0]]);
        assert_eq!(spectral_split(&m), vec![Subspace::coordinate(3, &Q, &[0]), Subspace::coordinate(3, &Q, &[1, 2])]);
    }

    #[test]
    fn brute_force_examples() {
        let j2 = gf2(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            brute_force_invariant_subspaces(2, &GF2, &[j2], 100).unwrap(),
            vec![Subspace::coordinate(2, &GF2, &[0])]
        );
        let swap = gf2(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            brute_force_invariant_subspaces(2, &GF2, &[swap], 100).unwrap(),
            vec![Subspace::from_vectors(2, &GF2, [fv(&[1, 1])])]
        );
        let companion = gf2(&[&[0, 1], &[1, 1]]);
        assert!(brute_force_invariant_subspaces(2, &GF2, &[companion], 100).unwrap().is_empty());
        assert!(matches!(
            brute_force_invariant_subspaces::<Fp>(4, &GF2, &[], 10),
            Err(Error::BudgetExceeded { needed: 65, budget: 10 })
        ));
    }

    #[test]
    fn subspace_counts() {
        // lines and planes of GF(2)^3 are 7 each; GF(2)^4 has 15 + 35 + 15
        assert_eq!(proper_subspace_count(3, 2), 14);
        assert_eq!(proper_subspace_count(4, 2), 65);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        let all = brute_force_invariant_subspaces::<Fp>(3, &FieldDescriptor::Prime(3), &[], 1000).unwrap();
        assert_eq!(all.len() as u128, proper_subspace_count(3, 3));
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn exhaustive_stage_settles_proper_algebras() {
        // x^2 + x + 1 is irreducible over GF(2): the algebra is GF(4), dimension 2
        let companion = gf2(&[&[0, 1], &[1, 1]]);
        assert_eq!(
            find_invariant_subspace(2, &GF2, &[companion]),
            ReducibilityVerdict::Irreducible(Certificate::ExhaustiveSearch)
        );
    }

    #[test]
    fn stage_selection() {
        let shear = q(&[&[1, 1], &[0, 1]]);
        let stage = |v: ReducibilityVerdict<Rational>| match v {
            ReducibilityVerdict::Reducible { stage, .. } => stage,
            other => panic!("{other:?}"),
        };
        assert_eq!(stage(find_invariant_subspace(2, &Q, &[shear])), Stage::SingletonKernel);
        let scalars = [q(&[&[2, 0], &[0, 2]]), q(&[&[3, 0], &[0, 3]])];
        assert_eq!(stage(find_invariant_subspace(2, &Q, &scalars)), Stage::ScalarFamily);
        let split = [q(&[&[1, 0, 0], &[0, 2, 1], &[0, 0, 2]])];
        assert_eq!(stage(find_invariant_subspace(3, &Q, &split)), Stage::SpectralSplit);
    }
}
