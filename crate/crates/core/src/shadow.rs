//! Exact shadow-inequality nonexistence tests for absolutely maximally
//! entangled states.
//!
//! For a putative AME state on local dimensions `d_1 ≥ … ≥ d_N`, the
//! coefficients `A'_k` (subset sums of `1/(d_{i_1}···d_{i_k})` up to the
//! middle, mirrored above it) must satisfy `S_j = Σ_k K_{N−j}(k; N) A'_k ≥ 0`
//! for every `j`. A single negative `S_j` rules the state out. All
//! arithmetic is big-rational; sign decisions carry no tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::par;

/// Multiset of local dimensions, stored descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimVector {
    dims: Vec<u32>,
}

impl DimVector {
    pub fn new(mut dims: Vec<u32>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::invalid("need at least 2 parties"));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::invalid("dimensions must be at least 2"));
        }
        dims.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DimVector { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] == w[1])
    }

    /// Compact form like `3.2^8`.
    pub fn label(&self) -> String {
        let mut parts: Vec<(u32, usize)> = Vec::new();
        for &d in &self.dims {
            match parts.last_mut() {
                Some((l, m)) if *l == d => *m += 1,
                _ => parts.push((d, 1)),
            }
        }
        parts
            .iter()
            .map(|(d, m)| {
                if *m == 1 {
                    d.to_string()
                } else {
                    format!("{d}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// The Krawtchouk coefficient `K_{N−j}(k; N) =
/// Σ_α (−1)^α C(N−k, N−j−α) C(k, α)`, exact.
pub fn krawtchouk(n: usize, j: usize, k: usize) -> Result<BigInt> {
    if j > n || k > n {
        return Err(Error::invalid(format!(
            "indices j = {j}, k = {k} out of range for N = {n}"
        )));
    }
    let mut acc = BigInt::zero();
    let lo = k.saturating_sub(j);
    let hi = k.min(n - j);
    for alpha in lo..=hi {
        let term = binomial(n - k, n - j - alpha) * binomial(k, alpha);
        if alpha % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// The coefficients `A'_0 … A'_N`.
///
/// Heterogeneous dimension vectors require an odd party count (an AME state
/// with unequal dimensions forces `N` odd); for those, `A'_k` is the subset
/// sum of reciprocal products for `k ≤ (N−1)/2` and mirrored above. All-equal
/// dimensions use the closed form `C(N, k) d^{−min(k, N−k)}` for any parity.
pub fn shadow_coefficients(dv: &DimVector) -> Result<Vec<BigRational>> {
    let n = dv.parties();
    let homogeneous = dv.is_homogeneous();
    if !homogeneous && n % 2 == 0 {
        return Err(Error::HeterogeneousEvenParties(n));
    }

    let coeffs: Vec<BigRational> = if homogeneous {
        let d = BigInt::from(dv.dims()[0]);
        (0..=n)
            .map(|k| {
                let power = d.pow(k.min(n - k) as u32);
                ratio(binomial(n, k), power)
            })
            .collect()
    } else {
        // elementary symmetric polynomials of the reciprocals, then mirror
        let half = (n - 1) / 2;
        let mut e = vec![BigRational::zero(); half + 1];
        e[0] = BigRational::one();
        for &d in dv.dims() {
            let x = ratio(BigInt::one(), BigInt::from(d));
            for k in (1..=half).rev() {
                let add = &e[k - 1] * &x;
                e[k] += add;
            }
        }
        (0..=n)
            .map(|k| {
                let idx = k.min(n - k);
                e[idx].clone()
            })
            .collect()
    };

    for k in 0..=n {
        if coeffs[k] != coeffs[n - k] {
            return Err(Error::PostconditionFailed(format!(
                "mirror symmetry violated at k = {k}"
            )));
        }
    }
    Ok(coeffs)
}

/// All Krawtchouk coefficients for `N` parties, indexed `[j][k]`.
fn krawtchouk_table(n: usize) -> Vec<Vec<BigInt>> {
    (0..=n)
        .map(|j| {
            (0..=n)
                .map(|k| krawtchouk(n, j, k).expect("indices in range"))
                .collect()
        })
        .collect()
}

fn shadow_values_with(coeffs: &[BigRational], table: &[Vec<BigInt>]) -> Vec<BigRational> {
    table
        .iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (k, a) in coeffs.iter().enumerate() {
                if !row[k].is_zero() {
                    acc += a * &row[k];
                }
            }
            acc
        })
        .collect()
}

/// The shadow values `S_0 … S_N`, `S_j = Σ_k K_{N−j}(k; N) A'_k`.
pub fn shadow_values(dv: &DimVector) -> Result<Vec<BigRational>> {
    let coeffs = shadow_coefficients(dv)?;
    Ok(shadow_values_with(&coeffs, &krawtchouk_table(dv.parties())))
}

/// Exclusion verdict for one dimension vector.
#[derive(Debug, Clone)]
pub struct ExclusionVerdict {
    pub excluded: bool,
    /// Smallest `j` with `S_j < 0`, when excluded.
    pub first_violated: Option<usize>,
    pub values: Vec<BigRational>,
}

/// `true` (with the first violated index) when some `S_j` is strictly
/// negative — an exact decision that an AME state cannot exist there.
pub fn ame_excluded(dv: &DimVector) -> Result<ExclusionVerdict> {
    let values = shadow_values(dv)?;
    let first_violated = values.iter().position(|s| s.is_negative());
    Ok(ExclusionVerdict {
        excluded: first_violated.is_some(),
        first_violated,
        values,
    })
}

/// Report from a nonexistence scan.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub parties: usize,
    pub max_dim: u32,
    /// Excluded vectors with the first violated `j`, in ascending
    /// lexicographic order of the descending dimension tuples.
    pub excluded: Vec<(DimVector, usize)>,
    pub vectors_checked: usize,
}

impl ScanReport {
    pub fn contains(&self, dims: &[u32]) -> bool {
        let mut sorted = dims.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        self.excluded.iter().any(|(dv, _)| dv.dims() == sorted)
    }
}

/// Evaluate every nonincreasing dimension vector over `{2..=max_dim}^N`
/// and collect those excluded by some shadow inequality.
pub fn scan_nonexistence(n: usize, max_dim: u32) -> Result<ScanReport> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::invalid("scan needs an odd party count of at least 3"));
    }
    if !(2..=16).contains(&max_dim) {
        return Err(Error::invalid("max dimension must lie in 2..=16"));
    }
    fn recurse(n: usize, max_dim: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let cap = prefix.last().copied().unwrap_or(max_dim);
        for d in 2..=cap {
            prefix.push(d);
            recurse(n, max_dim, prefix, out);
            prefix.pop();
        }
    }
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    recurse(n, max_dim, &mut Vec::new(), &mut vectors);
    let checked = vectors.len();

    let table = krawtchouk_table(n);
    let hits: Vec<Option<(DimVector, usize)>> = par::map_collect(vectors, |dims| {
        let dv = DimVector::new(dims).ok()?;
        let coeffs = shadow_coefficients(&dv).ok()?;
        let values = shadow_values_with(&coeffs, &table);
        values.iter().position(Signed::is_negative).map(|j| (dv, j))
    });
    let excluded = hits.into_iter().flatten().collect();
    Ok(ScanReport {
        parties: n,
        max_dim,
        excluded,
        vectors_checked: checked,
    })
}
