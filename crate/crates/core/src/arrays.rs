//! Mixed orthogonal arrays: representation, exhaustive verification, and
//! elementary column surgery.
//!
//! An array is `r` rows over per-column alphabets `{0, …, d_j − 1}` together
//! with a claimed strength `k`. Strength is *metadata*: it is carried as a
//! claim and only trusted after [`MixedArray::confirm_strength`] has run the
//! exhaustive check. Transformations always hand back unverified arrays.

use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::SymbolMatrix;
use crate::par;

/// Per-level column counts, levels strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSignature {
    entries: Vec<(u32, usize)>,
}

impl LevelSignature {
    pub fn new(entries: Vec<(u32, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::BadSignature("no columns".into()));
        }
        for &(level, mult) in &entries {
            if level < 2 {
                return Err(Error::BadSignature(format!("level {level} < 2")));
            }
            if mult < 1 {
                return Err(Error::BadSignature(format!(
                    "level {level} has multiplicity 0"
                )));
            }
        }
        if !entries.windows(2).all(|w| w[0].0 > w[1].0) {
            return Err(Error::BadSignature(
                "levels must be strictly decreasing".into(),
            ));
        }
        Ok(LevelSignature { entries })
    }

    /// Signature from one level per column; levels must be nonincreasing.
    pub fn from_sorted_levels(levels: &[u32]) -> Result<Self> {
        if levels.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadSignature("levels not sorted descending".into()));
        }
        let mut entries: Vec<(u32, usize)> = Vec::new();
        for &level in levels {
            match entries.last_mut() {
                Some((l, m)) if *l == level => *m += 1,
                _ => entries.push((level, 1)),
            }
        }
        LevelSignature::new(entries)
    }

    pub fn entries(&self) -> &[(u32, usize)] {
        &self.entries
    }

    /// Total column count `N`.
    pub fn column_count(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Level of column `j` (columns in signature order).
    pub fn level(&self, j: usize) -> u32 {
        let mut seen = 0;
        for &(level, mult) in &self.entries {
            if j < seen + mult {
                return level;
            }
            seen += mult;
        }
        panic!("column index {j} out of range");
    }

    /// One level per column, in order.
    pub fn levels(&self) -> Vec<u32> {
        self.entries
            .iter()
            .flat_map(|&(level, mult)| std::iter::repeat(level).take(mult))
            .collect()
    }
}

impl fmt::Display for LevelSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(level, mult)| format!("{level}^{mult}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Verdict of an exhaustive strength check.
#[derive(Debug, Clone)]
pub enum StrengthCheck {
    /// Every column subset is balanced; `lambdas` pairs each subset with its
    /// replication index `r / Π levels`, in lexicographic subset order.
    Pass { lambdas: Vec<(Vec<usize>, usize)> },
    /// `witness` is the first unbalanced subset; `counts` maps each observed
    /// tuple on that subset to its occurrence count.
    Fail {
        witness: Vec<usize>,
        counts: HashMap<Vec<u32>, usize>,
    },
}

impl StrengthCheck {
    pub fn passed(&self) -> bool {
        matches!(self, StrengthCheck::Pass { .. })
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            StrengthCheck::Pass { .. } => None,
            StrengthCheck::Fail { witness, .. } => Some(witness),
        }
    }
}

/// Number of positions where two equal-length rows differ.
pub fn hamming_distance(a: &[u32], b: &[u32]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// A mixed orthogonal array candidate: symbols, signature, claimed strength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedArray {
    signature: LevelSignature,
    matrix: SymbolMatrix,
    strength: u32,
    verified: bool,
    /// Output column `j` came from input column `col_perm[j]` of whatever
    /// this value was constructed from.
    col_perm: Vec<usize>,
}

impl MixedArray {
    /// Build from one level per column and row-major data. Columns are
    /// stably re-sorted so levels run descending; the applied permutation is
    /// available via [`MixedArray::column_permutation`]. The strength claim
    /// starts unverified.
    pub fn new(levels: &[u32], data: Vec<u32>, claimed_strength: u32) -> Result<Self> {
        let n = levels.len();
        if n == 0 {
            return Err(Error::invalid("array needs at least one column"));
        }
        if data.is_empty() || data.len() % n != 0 {
            return Err(Error::invalid(format!(
                "data length {} is not a positive multiple of {n} columns",
                data.len()
            )));
        }
        let r = data.len() / n;
        if claimed_strength < 1 {
            return Err(Error::invalid("strength must be at least 1"));
        }
        if (claimed_strength as usize) > n {
            return Err(Error::invalid(format!(
                "claimed strength {claimed_strength} exceeds column count {n}"
            )));
        }

        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| levels[b].cmp(&levels[a]).then(a.cmp(&b)));
        let sorted_levels: Vec<u32> = perm.iter().map(|&j| levels[j]).collect();
        let signature = LevelSignature::from_sorted_levels(&sorted_levels)?;

        let mut sorted = vec![0u32; data.len()];
        for i in 0..r {
            for (jj, &j) in perm.iter().enumerate() {
                sorted[i * n + jj] = data[i * n + j];
            }
        }
        for i in 0..r {
            for j in 0..n {
                let symbol = sorted[i * n + j];
                if symbol >= sorted_levels[j] {
                    return Err(Error::SymbolOutOfRange {
                        row: i,
                        col: j,
                        symbol,
                        level: sorted_levels[j],
                    });
                }
            }
        }

        Ok(MixedArray {
            signature,
            matrix: SymbolMatrix::new(r, n, sorted)?,
            strength: claimed_strength,
            verified: false,
            col_perm: perm,
        })
    }

    /// The single-column array `(0, 1, …, d−1)ᵀ`. By the usual convention it
    /// counts as verified strength 2 even though it has only one column, so
    /// it can seed the Kronecker-sum and replacement constructions.
    pub fn trivial(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("trivial array needs level >= 2"));
        }
        Ok(MixedArray {
            signature: LevelSignature::new(vec![(d, 1)])?,
            matrix: SymbolMatrix::new(d as usize, 1, (0..d).collect())?,
            strength: 2,
            verified: true,
            col_perm: vec![0],
        })
    }

    pub fn signature(&self) -> &LevelSignature {
        &self.signature
    }

    pub fn row_count(&self) -> usize {
        self.matrix.rows()
    }

    pub fn column_count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn level(&self, col: usize) -> u32 {
        self.signature.level(col)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        self.matrix.row(i)
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.matrix.row_iter()
    }

    pub fn matrix(&self) -> &SymbolMatrix {
        &self.matrix
    }

    pub fn claimed_strength(&self) -> u32 {
        self.strength
    }

    /// `Some(k)` once `confirm_strength(k)` has passed.
    pub fn verified_strength(&self) -> Option<u32> {
        self.verified.then_some(self.strength)
    }

    pub fn column_permutation(&self) -> &[usize] {
        &self.col_perm
    }

    /// Exhaustive strength-`k` check over all `C(N, k)` column subsets.
    pub fn verify_strength(&self, k: u32) -> Result<StrengthCheck> {
        self.check_subsets(k, true)
    }

    /// Run the exhaustive check and, on pass, record `k` as the verified
    /// strength.
    pub fn confirm_strength(&mut self, k: u32) -> Result<()> {
        match self.check_subsets(k, false)? {
            StrengthCheck::Pass { .. } => {
                self.strength = k;
                self.verified = true;
                Ok(())
            }
            StrengthCheck::Fail { witness, .. } => Err(Error::StrengthFailed { k, witness }),
        }
    }

    /// Mark the claimed strength as verified without checking. Only for
    /// arrays whose strength is already established elsewhere (e.g. test
    /// fixtures); everything downstream trusts this flag.
    pub fn assume_strength(mut self, k: u32) -> Result<Self> {
        if (k as usize) > self.column_count() || k < 1 {
            return Err(Error::invalid("assumed strength out of range"));
        }
        self.strength = k;
        self.verified = true;
        Ok(self)
    }

    fn check_subsets(&self, k: u32, collect_lambdas: bool) -> Result<StrengthCheck> {
        let n = self.column_count();
        let r = self.row_count();
        if k < 1 || k as usize > n {
            return Err(Error::invalid(format!(
                "strength {k} out of range for {n} columns"
            )));
        }
        let k = k as usize;
        let levels = self.signature.levels();

        // Subsets are processed in lexicographic order, in bounded chunks so
        // the full-scale arrays do not hold every subset in memory at once.
        let mut lambdas: Vec<(Vec<usize>, usize)> = Vec::new();
        let chunk_size = 1 << 14;
        let mut combos = (0..n).combinations(k);
        loop {
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(chunk_size).collect();
            if chunk.is_empty() {
                break;
            }
            let outcomes = par::map_collect(chunk, |subset| {
                let ok = self.subset_balanced(&subset, &levels);
                (subset, ok)
            });
            for (subset, lambda) in outcomes {
                match lambda {
                    Some(l) => {
                        if collect_lambdas {
                            lambdas.push((subset, l));
                        }
                    }
                    None => {
                        let counts = self.subset_counts(&subset);
                        return Ok(StrengthCheck::Fail {
                            witness: subset,
                            counts,
                        });
                    }
                }
            }
        }
        let _ = r;
        Ok(StrengthCheck::Pass { lambdas })
    }

    /// `Some(lambda)` when every tuple on `subset` occurs exactly
    /// `r / Π levels` times.
    fn subset_balanced(&self, subset: &[usize], levels: &[u32]) -> Option<usize> {
        let r = self.row_count();
        let prod: usize = subset.iter().map(|&j| levels[j] as usize).product();
        if r % prod != 0 {
            return None;
        }
        let lambda = r / prod;
        let mut counts = vec![0usize; prod];
        for row in self.rows_iter() {
            let mut idx = 0usize;
            for &j in subset {
                idx = idx * levels[j] as usize + row[j] as usize;
            }
            counts[idx] += 1;
        }
        counts.iter().all(|&c| c == lambda).then_some(lambda)
    }

    fn subset_counts(&self, subset: &[usize]) -> HashMap<Vec<u32>, usize> {
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for row in self.rows_iter() {
            let tuple: Vec<u32> = subset.iter().map(|&j| row[j]).collect();
            *counts.entry(tuple).or_insert(0) += 1;
        }
        counts
    }

    /// Smallest Hamming distance over all row pairs.
    pub fn min_hamming_distance(&self) -> Result<usize> {
        let r = self.row_count();
        if r < 2 {
            return Err(Error::TooFewRows);
        }
        let md = par::min_over(r - 1, |i| {
            let a = self.row(i);
            (i + 1..r)
                .map(|j| a.iter().zip(self.row(j)).filter(|(x, y)| x != y).count())
                .min()
                .unwrap()
        })
        .unwrap();
        Ok(md)
    }

    /// All rows distinct, i.e. minimum Hamming distance at least 1.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.row_count());
        self.rows_iter().all(|row| seen.insert(row))
    }

    /// Irredundancy via the minimum-distance criterion: an array of verified
    /// strength `k` is irredundant exactly when its minimum Hamming distance
    /// is at least `k + 1`. Requires the strength to have been verified.
    pub fn is_irredundant(&self, k: u32) -> Result<bool> {
        if !self.verified || self.strength < k {
            return Err(Error::StrengthNotVerified {
                required: k,
                claimed: self.strength,
                verified: self.verified,
            });
        }
        if k < 1 || k as usize >= self.column_count() {
            return Err(Error::invalid(format!(
                "irredundancy needs 1 <= k < N, got k = {k}, N = {}",
                self.column_count()
            )));
        }
        Ok(self.min_hamming_distance()? >= k as usize + 1)
    }

    /// Definition-based irredundancy: after deleting any `k` columns, all
    /// rows must still be pairwise distinct. Exhaustive over all `C(N, k)`
    /// deletions; the oracle for [`MixedArray::is_irredundant`].
    pub fn is_irredundant_direct(&self, k: u32) -> Result<bool> {
        let n = self.column_count();
        if k < 1 || k as usize >= n {
            return Err(Error::invalid(format!(
                "irredundancy needs 1 <= k < N, got k = {k}, N = {n}"
            )));
        }
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k as usize).collect();
        let found = par::find_map_first(subsets, |removed| {
            let kept: Vec<usize> = (0..n).filter(|j| !removed.contains(j)).collect();
            let mut seen = HashSet::with_capacity(self.row_count());
            for row in self.rows_iter() {
                let projected: Vec<u32> = kept.iter().map(|&j| row[j]).collect();
                if !seen.insert(projected) {
                    return Some(removed);
                }
            }
            None
        });
        Ok(found.is_none())
    }

    /// Remove the given columns. The result keeps the strength claim (capped
    /// at the remaining column count) but is handed back unverified.
    pub fn delete_columns(&self, cols: &[usize]) -> Result<MixedArray> {
        let n = self.column_count();
        let mut removed = vec![false; n];
        for &c in cols {
            if c >= n {
                return Err(Error::invalid(format!("column {c} out of range")));
            }
            if removed[c] {
                return Err(Error::invalid(format!("column {c} listed twice")));
            }
            removed[c] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&j| !removed[j]).collect();
        if kept.is_empty() {
            return Err(Error::invalid("cannot remove all columns"));
        }
        let levels = self.signature.levels();
        let new_levels: Vec<u32> = kept.iter().map(|&j| levels[j]).collect();
        let mut data = Vec::with_capacity(self.row_count() * kept.len());
        for row in self.rows_iter() {
            data.extend(kept.iter().map(|&j| row[j]));
        }
        let claimed = self.strength.min(kept.len() as u32);
        let mut out = MixedArray::new(&new_levels, data, claimed)?;
        out.col_perm = kept;
        Ok(out)
    }

    /// Replace a column of composite level `d1·d2` by two columns using the
    /// fixed mixed-radix decoding `c ↦ (⌊c/d2⌋, c mod d2)`. Row count and
    /// strength claim are preserved; the minimum distance never decreases.
    pub fn split_column(&self, col: usize, d1: u32, d2: u32) -> Result<MixedArray> {
        let n = self.column_count();
        if col >= n {
            return Err(Error::invalid(format!("column {col} out of range")));
        }
        if d1 < 2 || d2 < 2 {
            return Err(Error::invalid("split factors must both be at least 2"));
        }
        let level = self.level(col);
        if d1 * d2 != level {
            return Err(Error::invalid(format!(
                "column {col} has level {level}, not {d1}x{d2}"
            )));
        }
        let levels = self.signature.levels();
        let mut new_levels = Vec::with_capacity(n + 1);
        let mut data = Vec::with_capacity(self.row_count() * (n + 1));
        for (j, &l) in levels.iter().enumerate() {
            if j == col {
                new_levels.push(d1);
                new_levels.push(d2);
            } else {
                new_levels.push(l);
            }
        }
        for row in self.rows_iter() {
            for (j, &s) in row.iter().enumerate() {
                if j == col {
                    data.push(s / d2);
                    data.push(s % d2);
                } else {
                    data.push(s);
                }
            }
        }
        MixedArray::new(&new_levels, data, self.strength)
    }
}

impl fmt::Display for MixedArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MOA({}, {}, {}{})",
            self.row_count(),
            self.signature,
            self.strength,
            if self.verified { "" } else { "?" }
        )
    }
}
