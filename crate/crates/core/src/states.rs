//! Sparse pure states of heterogeneous multiparty systems and the exact
//! checks on them: partial traces, k-uniformity, support accounting,
//! projective reduction, coarse-graining, party-wise tensoring, and
//! generalized Pauli orbits.
//!
//! Party dimensions are kept sorted descending; constructors apply and
//! record the sorting permutation. Amplitudes live in a `BTreeMap` keyed by
//! index tuple, so iteration (and every serialized artifact) is
//! deterministic.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::arrays::MixedArray;
use crate::error::{Error, Result};
use crate::par;

/// Tolerance for squared-norm validation of states.
pub const NORM_TOL: f64 = 1e-10;
/// Default tolerance for uniformity (partial-trace) checks.
pub const UNIFORMITY_TOL: f64 = 1e-9;
/// Amplitudes at or below this modulus do not count toward the support.
pub const SUPPORT_EPS: f64 = 1e-12;
/// Tolerance for pairwise orthogonality of state families.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Hard cap on the side of any dense matrix this module will allocate.
pub const DENSE_CAP: usize = 4096;

/// A pure state with sparse amplitudes over heterogeneous local dimensions.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: Vec<u32>,
    amps: BTreeMap<Vec<u32>, Complex64>,
    party_perm: Vec<usize>,
}

impl PureState {
    /// Build a state, re-sorting parties so dimensions run descending. The
    /// applied permutation is recorded (`party_permutation()[new] = old`).
    /// Requires unit norm within [`NORM_TOL`].
    pub fn new(
        dims: Vec<u32>,
        amplitudes: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self> {
        let n = dims.len();
        if n == 0 {
            return Err(Error::invalid("state needs at least one party"));
        }
        if dims.iter().any(|&d| d < 1) {
            return Err(Error::invalid("party dimensions must be at least 1"));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| dims[b].cmp(&dims[a]).then(a.cmp(&b)));
        let sorted_dims: Vec<u32> = perm.iter().map(|&p| dims[p]).collect();

        let mut amps = BTreeMap::new();
        let mut norm_sq = 0.0;
        for (tuple, amp) in amplitudes {
            if tuple.len() != n {
                return Err(Error::invalid(format!(
                    "index tuple {tuple:?} has {} entries, expected {n}",
                    tuple.len()
                )));
            }
            let permuted: Vec<u32> = perm.iter().map(|&p| tuple[p]).collect();
            for (j, (&x, &d)) in permuted.iter().zip(&sorted_dims).enumerate() {
                if x >= d {
                    return Err(Error::invalid(format!(
                        "index {x} out of range for dimension {d} at party {j}"
                    )));
                }
            }
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            norm_sq += amp.norm_sqr();
            if amps.insert(permuted, amp).is_some() {
                return Err(Error::invalid(format!("duplicate basis tuple {tuple:?}")));
            }
        }
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(PureState {
            dims: sorted_dims,
            amps,
            party_perm: perm,
        })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    /// Permutation applied at construction: party `new` holds what the
    /// caller supplied at position `party_permutation()[new]`.
    pub fn party_permutation(&self) -> &[usize] {
        &self.party_perm
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, tuple: &[u32]) -> Complex64 {
        self.amps
            .get(tuple)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Number of amplitudes with modulus above [`SUPPORT_EPS`].
    pub fn support(&self) -> usize {
        self.amps
            .values()
            .filter(|a| a.norm() > SUPPORT_EPS)
            .count()
    }

    /// The support of a k-uniform state is at least the product of the `k`
    /// largest dimensions; this tests for equality.
    pub fn is_minimum_support(&self, k: u32) -> bool {
        let k = k as usize;
        if k > self.dims.len() {
            return false;
        }
        let bound: usize = self.dims[..k].iter().map(|&d| d as usize).product();
        self.support() == bound
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &PureState) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (tuple, amp) in &self.amps {
            acc += amp.conj() * other.amplitude(tuple);
        }
        acc
    }

    /// Reduced density matrix on the given party subset.
    pub fn partial_trace(&self, subset: &[usize]) -> Result<DensityMatrix> {
        let n = self.party_count();
        let mut parties = subset.to_vec();
        parties.sort_unstable();
        parties.dedup();
        if parties.len() != subset.len() {
            return Err(Error::invalid("subset contains repeated parties"));
        }
        if parties.is_empty() || parties.len() >= n {
            return Err(Error::invalid(
                "subset must be nonempty and proper".to_string(),
            ));
        }
        if parties.iter().any(|&p| p >= n) {
            return Err(Error::invalid("party index out of range"));
        }
        let sub_dims: Vec<u32> = parties.iter().map(|&p| self.dims[p]).collect();
        let side: usize = sub_dims.iter().map(|&d| d as usize).product();
        if side > DENSE_CAP {
            return Err(Error::DenseCapExceeded {
                side,
                cap: DENSE_CAP,
            });
        }
        let complement: Vec<usize> = (0..n).filter(|p| !parties.contains(p)).collect();

        let mut groups: BTreeMap<Vec<u32>, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (tuple, &amp) in &self.amps {
            let rest: Vec<u32> = complement.iter().map(|&p| tuple[p]).collect();
            let mut idx = 0usize;
            for (&p, &d) in parties.iter().zip(&sub_dims) {
                idx = idx * d as usize + tuple[p] as usize;
            }
            groups.entry(rest).or_default().push((idx, amp));
        }

        let mut mat = DMatrix::<Complex64>::zeros(side, side);
        for members in groups.values() {
            for &(ia, aa) in members {
                for &(ib, ab) in members {
                    mat[(ia, ib)] += aa * ab.conj();
                }
            }
        }
        Ok(DensityMatrix {
            parties,
            dims: sub_dims,
            mat,
        })
    }

    /// Exhaustive k-uniformity check at the default tolerance.
    pub fn verify_k_uniform(&self, k: u32) -> Result<UniformityCheck> {
        self.verify_k_uniform_with(k, UNIFORMITY_TOL)
    }

    /// For every `k`-party subset, compare the reduction against the
    /// maximally mixed state in max norm. `k` beyond `floor(N/2)` is a
    /// usage error (no state can pass), not a failed verdict.
    pub fn verify_k_uniform_with(&self, k: u32, tol: f64) -> Result<UniformityCheck> {
        let n = self.party_count();
        if k < 1 {
            return Err(Error::invalid("uniformity index k must be at least 1"));
        }
        if k as usize > n / 2 {
            return Err(Error::SchmidtBound {
                k,
                bound: (n / 2) as u32,
                parties: n,
            });
        }
        let subsets: Vec<Vec<usize>> =
            itertools::Itertools::combinations(0..n, k as usize).collect();
        let checked = subsets.len();
        let deviations: Vec<(Vec<usize>, f64)> = par::map_collect(subsets, |subset| {
            let dev = self
                .partial_trace(&subset)
                .map(|rho| rho.max_deviation_from_maximally_mixed())
                .unwrap_or(f64::INFINITY);
            (subset, dev)
        });
        let mut worst_subset = Vec::new();
        let mut first_failing = None;
        let mut max_deviation = f64::NEG_INFINITY;
        for (subset, dev) in deviations {
            if first_failing.is_none() && dev > tol {
                first_failing = Some(subset.clone());
            }
            if dev > max_deviation {
                max_deviation = dev;
                worst_subset = subset;
            }
        }
        Ok(UniformityCheck {
            pass: max_deviation <= tol,
            tolerance: tol,
            max_deviation,
            worst_subset,
            first_failing,
            subsets_checked: checked,
        })
    }

    /// Measure `party` in the computational basis and keep `outcome`:
    /// returns the renormalized post-measurement state on the remaining
    /// parties together with the outcome probability.
    pub fn project_reduce(&self, party: usize, outcome: u32) -> Result<(PureState, f64)> {
        let n = self.party_count();
        if party >= n {
            return Err(Error::invalid("party index out of range"));
        }
        if n < 2 {
            return Err(Error::invalid("cannot reduce a single-party state"));
        }
        if outcome >= self.dims[party] {
            return Err(Error::invalid(format!(
                "outcome {outcome} out of range for dimension {}",
                self.dims[party]
            )));
        }
        let mut probability = 0.0;
        let mut kept: Vec<(Vec<u32>, Complex64)> = Vec::new();
        for (tuple, &amp) in &self.amps {
            if tuple[party] == outcome {
                probability += amp.norm_sqr();
                let reduced: Vec<u32> = tuple
                    .iter()
                    .enumerate()
                    .filter_map(|(p, &x)| (p != party).then_some(x))
                    .collect();
                kept.push((reduced, amp));
            }
        }
        if probability < 1e-12 {
            return Err(Error::ZeroProbabilityOutcome {
                party,
                outcome,
                probability,
            });
        }
        let scale = probability.sqrt();
        let dims: Vec<u32> = self
            .dims
            .iter()
            .enumerate()
            .filter_map(|(p, &d)| (p != party).then_some(d))
            .collect();
        let state = PureState::new(
            dims,
            kept.into_iter().map(|(t, a)| (t, a / scale)),
        )?;
        Ok((state, probability))
    }

    /// Merge parties `i` and `j` into one party of dimension `d_i · d_j`,
    /// encoding symbols `(a, b)` as `d_j·a + b`. Dimensions are re-sorted
    /// descending afterwards, with the permutation recorded on the result.
    pub fn coarse_grain(&self, i: usize, j: usize) -> Result<PureState> {
        let n = self.party_count();
        if i == j {
            return Err(Error::invalid("cannot merge a party with itself"));
        }
        if i >= n || j >= n {
            return Err(Error::invalid("party index out of range"));
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let merged_dim = self.dims[i] * self.dims[j];
        let dj = self.dims[j];
        let mut dims = Vec::with_capacity(n - 1);
        for (p, &d) in self.dims.iter().enumerate() {
            if p == lo {
                dims.push(merged_dim);
            } else if p != hi {
                dims.push(d);
            }
        }
        let amps = self.amps.iter().map(|(tuple, &amp)| {
            let merged = dj * tuple[i] + tuple[j];
            let mut t = Vec::with_capacity(n - 1);
            for (p, &x) in tuple.iter().enumerate() {
                if p == lo {
                    t.push(merged);
                } else if p != hi {
                    t.push(x);
                }
            }
            (t, amp)
        });
        PureState::new(dims, amps.collect::<Vec<_>>())
    }

    /// Party-wise tensor product of two states on the same party count:
    /// party `i` of the result has dimension `d_i · s_i` with index
    /// `s_i·a + b` for indices `a` of `self` and `b` of `other`.
    pub fn tensor_parties(&self, other: &PureState) -> Result<PureState> {
        let n = self.party_count();
        if other.party_count() != n {
            return Err(Error::invalid(format!(
                "party counts differ: {n} vs {}",
                other.party_count()
            )));
        }
        let dims: Vec<u32> = self
            .dims
            .iter()
            .zip(other.dims())
            .map(|(&a, &b)| a * b)
            .collect();
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for (ta, &aa) in &self.amps {
            for (tb, &ab) in &other.amps {
                let tuple: Vec<u32> = ta
                    .iter()
                    .zip(tb)
                    .zip(other.dims())
                    .map(|((&a, &b), &sb)| sb * a + b)
                    .collect();
                amps.push((tuple, aa * ab));
            }
        }
        PureState::new(dims, amps)
    }

    /// Apply the generalized Pauli word `U(v)`: `Z^{v_p}` on parties before
    /// the split point, `X^{v_p}` after. Norm and uniformity are preserved.
    pub fn apply_pauli(&self, word: &PauliWord) -> Result<PureState> {
        let n = self.party_count();
        if word.exponents.len() != n {
            return Err(Error::invalid(format!(
                "Pauli word has {} exponents for {n} parties",
                word.exponents.len()
            )));
        }
        for (p, (&v, &d)) in word.exponents.iter().zip(&self.dims).enumerate() {
            if v >= d {
                return Err(Error::invalid(format!(
                    "exponent {v} out of range for dimension {d} at party {p}"
                )));
            }
        }
        // one root-of-unity power table per phase party
        let tables: Vec<Vec<Complex64>> = self.dims[..word.z_count]
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|t| {
                        Complex64::from_polar(
                            1.0,
                            2.0 * std::f64::consts::PI * t as f64 / d as f64,
                        )
                    })
                    .collect()
            })
            .collect();
        let amps = self.amps.iter().map(|(tuple, &amp)| {
            let mut phase = Complex64::new(1.0, 0.0);
            let mut t = tuple.clone();
            for p in 0..n {
                let v = word.exponents[p];
                if p < word.z_count {
                    let d = self.dims[p];
                    phase *= tables[p][((v as u64 * tuple[p] as u64) % d as u64) as usize];
                } else {
                    t[p] = (tuple[p] + v) % self.dims[p];
                }
            }
            (t, amp * phase)
        });
        PureState::new(self.dims.clone(), amps.collect::<Vec<_>>())
    }

    /// Orbit of this state under all Pauli words with `Z` on the first `k`
    /// parties and `X` on the rest: `Π d_i` states, pairwise orthogonal and
    /// k-uniform whenever this state is k-uniform with minimum support
    /// (which is required).
    pub fn generate_basis(&self, k: u32) -> Result<Vec<PureState>> {
        if !self.is_minimum_support(k) {
            return Err(Error::invalid(
                "basis orbit requires a state with minimum support",
            ));
        }
        let n = self.party_count();
        let total: usize = self.dims.iter().map(|&d| d as usize).product();
        if total > DENSE_CAP * 16 {
            return Err(Error::invalid(format!(
                "orbit of {total} states is beyond desk scale"
            )));
        }
        let mut words = Vec::with_capacity(total);
        let mut v = vec![0u32; n];
        loop {
            words.push(PauliWord::new(v.clone(), k as usize)?);
            // odometer increment, last party fastest
            let mut p = n;
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                v[p] += 1;
                if v[p] < self.dims[p] {
                    break;
                }
                v[p] = 0;
            }
            if v.iter().all(|&x| x == 0) {
                break;
            }
        }
        let states: Vec<Result<PureState>> =
            par::map_collect(words, |w| self.apply_pauli(&w));
        states.into_iter().collect()
    }
}

/// A generalized Pauli word `Z_1^{v_1} … Z_k^{v_k} X_{k+1}^{v_{k+1}} … X_N^{v_N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliWord {
    exponents: Vec<u32>,
    z_count: usize,
}

impl PauliWord {
    pub fn new(exponents: Vec<u32>, z_count: usize) -> Result<Self> {
        if z_count > exponents.len() {
            return Err(Error::invalid("split point beyond word length"));
        }
        Ok(PauliWord { exponents, z_count })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn z_count(&self) -> usize {
        self.z_count
    }
}

/// Verdict of a k-uniformity check.
#[derive(Debug, Clone)]
pub struct UniformityCheck {
    pub pass: bool,
    pub tolerance: f64,
    pub max_deviation: f64,
    /// Subset realizing the maximum deviation (lexicographically first on
    /// ties), also meaningful on pass.
    pub worst_subset: Vec<usize>,
    /// On failure, the lexicographically first subset over the tolerance —
    /// the witness quoted in reports.
    pub first_failing: Option<Vec<usize>>,
    pub subsets_checked: usize,
}

/// Dense reduced density matrix on a party subset.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    parties: Vec<usize>,
    dims: Vec<u32>,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Max-norm distance from `I / side`.
    pub fn max_deviation_from_maximally_mixed(&self) -> f64 {
        let side = self.side();
        let uniform = 1.0 / side as f64;
        let mut max = 0.0f64;
        for i in 0..side {
            for j in 0..side {
                let target = if i == j { uniform } else { 0.0 };
                max = max.max((self.mat[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        max
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.side() {
            for j in 0..self.side() {
                max = max.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        max
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Hermitian within 1e-10, unit trace within 1e-10, and positive
    /// semidefinite within 1e-8.
    pub fn validate(&self) -> Result<()> {
        if self.hermiticity_error() > 1e-10 {
            return Err(Error::invalid("density matrix is not Hermitian"));
        }
        if (self.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::invalid("density matrix trace is not 1"));
        }
        if self.min_eigenvalue() < -1e-8 {
            return Err(Error::invalid("density matrix is not PSD"));
        }
        Ok(())
    }
}

/// Uniform superposition over the rows of an irredundant array of verified
/// strength `k`. Inputs that are not verified, not irredundant, or that
/// violate the Schmidt bound are refused.
pub fn state_from_irmoa(array: &MixedArray, k: u32) -> Result<PureState> {
    match array.verified_strength() {
        Some(s) if s >= k => {}
        _ => {
            return Err(Error::StrengthNotVerified {
                required: k,
                claimed: array.claimed_strength(),
                verified: array.verified_strength().is_some(),
            })
        }
    }
    let n = array.column_count();
    if k as usize > n / 2 {
        return Err(Error::SchmidtBound {
            k,
            bound: (n / 2) as u32,
            parties: n,
        });
    }
    let md = array.min_hamming_distance()?;
    if md < k as usize + 1 {
        return Err(Error::NotIrredundant { k, md });
    }
    let r = array.row_count();
    let amp = Complex64::new(1.0 / (r as f64).sqrt(), 0.0);
    PureState::new(
        array.signature().levels(),
        array.rows_iter().map(|row| (row.to_vec(), amp)),
    )
}

/// Uniform superposition over the rows of any array: duplicate rows sum
/// their amplitudes and the result is renormalized. Unlike
/// [`state_from_irmoa`] this applies no irredundancy or strength gate, so
/// failing examples can be examined directly.
pub fn uniform_superposition(array: &MixedArray) -> Result<PureState> {
    let r = array.row_count() as f64;
    let mut amps: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    for row in array.rows_iter() {
        *amps.entry(row.to_vec()).or_insert(Complex64::new(0.0, 0.0)) +=
            Complex64::new(1.0 / r.sqrt(), 0.0);
    }
    let norm: f64 = amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(
        array.signature().levels(),
        amps.into_iter().map(|(t, a)| (t, a / norm)),
    )
}

/// Largest `|<i|j>|` over all pairs; 0 for fewer than two states.
pub fn max_pairwise_overlap(states: &[PureState]) -> f64 {
    if states.len() < 2 {
        return 0.0;
    }
    let pairs: Vec<(usize, usize)> = (0..states.len())
        .flat_map(|i| (i + 1..states.len()).map(move |j| (i, j)))
        .collect();
    par::fold_reduce(
        pairs,
        0.0f64,
        |acc, &(i, j)| acc.max(states[i].inner_product(&states[j]).norm()),
        f64::max,
    )
}

/// Max-norm deviation of `Σ |ψ><ψ|` from the identity on the full space.
pub fn completeness_deviation(states: &[PureState]) -> Result<f64> {
    let first = states
        .first()
        .ok_or_else(|| Error::invalid("no states given"))?;
    let dims = first.dims().to_vec();
    let total: usize = dims.iter().map(|&d| d as usize).product();
    if total > DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            side: total,
            cap: DENSE_CAP,
        });
    }
    let mut acc = DMatrix::<Complex64>::zeros(total, total);
    for s in states {
        if s.dims() != dims {
            return Err(Error::invalid("states have mismatched dimensions"));
        }
        let mut dense = vec![Complex64::new(0.0, 0.0); total];
        for (tuple, &amp) in s.amplitudes() {
            let mut idx = 0usize;
            for (&x, &d) in tuple.iter().zip(&dims) {
                idx = idx * d as usize + x as usize;
            }
            dense[idx] = amp;
        }
        for i in 0..total {
            if dense[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..total {
                acc[(i, j)] += dense[i] * dense[j].conj();
            }
        }
    }
    let mut max = 0.0f64;
    for i in 0..total {
        for j in 0..total {
            let target = if i == j { 1.0 } else { 0.0 };
            max = max.max((acc[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(max)
}
