//! Difference schemes over `Z_d` and the built-in generators: prime
//! multiplication tables, and Hadamard matrices in 0/1 form reachable by
//! Sylvester doubling from the order-4 seed or a Paley-I base.
//!
//! A strength-2 scheme `D(s, N, d)` has every pair of columns differing in
//! each symbol equally often; strength 3 asks every column triple to hit
//! each coset of the diagonal subgroup of `Z_d^3` equally often. A square
//! `D(λd, λd, d)` is a generalized Hadamard matrix (GHM).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::{kron_sum, SymbolMatrix};
use crate::par;

/// Verdict of an exhaustive difference-scheme check.
#[derive(Debug, Clone)]
pub enum SchemeCheck {
    Pass,
    Fail { witness: Vec<usize>, detail: String },
}

impl SchemeCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SchemeCheck::Pass)
    }
}

/// An `s x N` matrix over `Z_d` with a claimed strength in `{2, 3}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceScheme {
    modulus: u32,
    matrix: SymbolMatrix,
    strength: u32,
    verified: bool,
}

impl DifferenceScheme {
    pub fn new(modulus: u32, matrix: SymbolMatrix, strength: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::invalid("scheme modulus must be at least 2"));
        }
        if !(2..=3).contains(&strength) {
            return Err(Error::invalid("scheme strength must be 2 or 3"));
        }
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::invalid("scheme must be nonempty"));
        }
        if let Some(max) = matrix.max_symbol() {
            if max >= modulus {
                return Err(Error::invalid(format!(
                    "entry {max} out of range for Z_{modulus}"
                )));
            }
        }
        Ok(DifferenceScheme {
            modulus,
            matrix,
            strength,
            verified: false,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn matrix(&self) -> &SymbolMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn is_square(&self) -> bool {
        self.matrix.rows() == self.matrix.cols()
    }

    /// Verified and square, i.e. a `D(λd, λd, d)`.
    pub fn is_ghm(&self) -> bool {
        self.verified && self.is_square()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Exhaustive check of the strength-`t` coset condition at the claimed
    /// strength: for every choice of `t` columns, each of the `d^{t-1}`
    /// cosets of the diagonal subgroup must appear exactly `s / d^{t-1}`
    /// times. For `t = 2` this is the usual pairwise-difference condition.
    pub fn verify(&self) -> SchemeCheck {
        self.verify_at(self.strength)
    }

    pub fn verify_at(&self, t: u32) -> SchemeCheck {
        let s = self.rows();
        let n = self.cols();
        let d = self.modulus as usize;
        let t = t as usize;
        if t > n {
            return SchemeCheck::Fail {
                witness: (0..n).collect(),
                detail: format!("strength {t} needs at least {t} columns, have {n}"),
            };
        }
        let cosets = d.pow(t as u32 - 1);
        if s % cosets != 0 {
            return SchemeCheck::Fail {
                witness: vec![],
                detail: format!("{s} rows not divisible by d^{} = {cosets}", t - 1),
            };
        }
        let per_coset = s / cosets;
        let combos: Vec<Vec<usize>> = (0..n).combinations(t).collect();
        let bad = par::find_map_first(combos, |cols| {
            let mut counts = vec![0usize; cosets];
            for row in self.matrix.row_iter() {
                let base = row[cols[0]];
                let mut idx = 0usize;
                for &c in &cols[1..] {
                    let diff = (row[c] + self.modulus - base) % self.modulus;
                    idx = idx * d + diff as usize;
                }
                counts[idx] += 1;
            }
            counts
                .iter()
                .position(|&c| c != per_coset)
                .map(|coset| (cols, coset, counts[coset]))
        });
        match bad {
            None => SchemeCheck::Pass,
            Some((cols, coset, got)) => SchemeCheck::Fail {
                detail: format!(
                    "coset {coset} on columns {cols:?} appears {got} times, expected {per_coset}"
                ),
                witness: cols,
            },
        }
    }

    /// Run the verifier at the claimed strength and record the outcome.
    pub fn confirm(&mut self) -> Result<()> {
        match self.verify() {
            SchemeCheck::Pass => {
                self.verified = true;
                Ok(())
            }
            SchemeCheck::Fail { detail, .. } => Err(Error::SchemeFailed(detail)),
        }
    }
}

/// Free-function form of [`DifferenceScheme::verify`].
pub fn verify_difference_scheme(scheme: &DifferenceScheme) -> SchemeCheck {
    scheme.verify()
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// The multiplication table `(i·j mod p)` of a prime field, a `D(p, p, p)`.
pub fn ghm_from_prime(p: u32) -> Result<DifferenceScheme> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let n = p as usize;
    let mut m = SymbolMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, ((i * j) % n) as u32);
        }
    }
    let mut scheme = DifferenceScheme::new(p, m, 2)?;
    scheme.confirm()?;
    Ok(scheme)
}

/// Paley-I Hadamard matrix of order `q + 1` for a prime `q ≡ 3 (mod 4)`,
/// returned in 0/1 form.
fn paley_zero_one(q: u32) -> SymbolMatrix {
    let qs = q as usize;
    let mut residue = vec![false; qs];
    for x in 1..qs {
        residue[(x * x) % qs] = true;
    }
    // chi(x): +1 on nonzero squares, -1 otherwise (chi(0) unused below)
    let n = qs + 1;
    let mut m = SymbolMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let pm: i32 = if i == j {
                1
            } else if i == 0 || j == 0 {
                // skew border: +1 along the top row, -1 down the first column
                if i == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let diff = (j + qs - i) % qs;
                if residue[diff] {
                    1
                } else {
                    -1
                }
            };
            m.set(i, j, if pm == 1 { 1 } else { 0 });
        }
    }
    m
}

const H4_SEED: [[u32; 4]; 4] = [[1, 1, 1, 1], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]];

/// Hadamard matrix of order `m` in 0/1 form. Supported orders: 1, 2, and
/// multiples of 4 reachable by Sylvester doubling from either the fixed
/// order-4 seed or a Paley-I matrix of order `q + 1`, `q ≡ 3 (mod 4)` prime.
/// Orders 4 and up come back verified as difference schemes of strength 3
/// (hence also strength 2) over `Z_2`.
pub fn hadamard(m: usize) -> Result<DifferenceScheme> {
    if m == 1 {
        let mat = SymbolMatrix::new(1, 1, vec![1])?;
        return DifferenceScheme::new(2, mat, 2);
    }
    if m == 2 {
        let mat = SymbolMatrix::new(2, 2, vec![1, 1, 1, 0])?;
        let mut scheme = DifferenceScheme::new(2, mat, 2)?;
        scheme.confirm()?;
        return Ok(scheme);
    }
    if m % 4 != 0 {
        return Err(Error::UnsupportedOrder(m));
    }

    // Walk down by halving while the order stays a multiple of 4, looking
    // for a constructible base; then double back up.
    let mut base_order = m;
    let mut doublings = 0;
    let base = loop {
        if base_order == 4 {
            let data: Vec<u32> = H4_SEED.iter().flatten().copied().collect();
            break SymbolMatrix::new(4, 4, data)?;
        }
        let q = (base_order - 1) as u32;
        if base_order % 4 == 0 && q % 4 == 3 && is_prime(q) {
            break paley_zero_one(q);
        }
        if base_order % 8 != 0 {
            return Err(Error::UnsupportedOrder(m));
        }
        base_order /= 2;
        doublings += 1;
    };

    let doubler = SymbolMatrix::new(2, 2, vec![0, 0, 0, 1])?;
    let mut mat = base;
    for _ in 0..doublings {
        mat = kron_sum(&doubler, &mat, 2);
    }
    let mut scheme = DifferenceScheme::new(2, mat, 3)?;
    scheme.confirm()?;
    if !scheme.verify_at(2).passed() {
        return Err(Error::PostconditionFailed(format!(
            "order-{m} Hadamard matrix failed the strength-2 check"
        )));
    }
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_h4_passes_both_strengths() {
        let h4 = hadamard(4).unwrap();
        assert!(h4.verify_at(2).passed());
        assert!(h4.verify_at(3).passed());
        let expected: Vec<u32> = H4_SEED.iter().flatten().copied().collect();
        assert_eq!(h4.matrix().data(), &expected[..]);
    }

    #[test]
    fn all_zero_matrix_fails() {
        let m = SymbolMatrix::zeros(2, 2);
        let scheme = DifferenceScheme::new(2, m, 2).unwrap();
        assert!(!scheme.verify().passed());
    }

    #[test]
    fn z3_multiplication_table_is_a_scheme() {
        let g = ghm_from_prime(3).unwrap();
        assert!(g.is_ghm());
        assert_eq!(g.matrix().data(), &[0, 0, 0, 0, 1, 2, 0, 2, 1]);
    }

    #[test]
    fn prime_tables_verify_for_small_primes() {
        for p in [2, 3, 5, 7, 11] {
            let g = ghm_from_prime(p).unwrap();
            assert!(g.is_verified(), "p = {p}");
        }
        assert!(ghm_from_prime(4).is_err());
        assert!(ghm_from_prime(1).is_err());
    }

    #[test]
    fn prime_two_table_is_the_binary_pattern() {
        // ((0,0),(0,1)): the order-2 pattern up to symbol relabeling
        let g = ghm_from_prime(2).unwrap();
        assert_eq!(g.matrix().data(), &[0, 0, 0, 1]);
    }

    #[test]
    fn hadamard_two_matches_sylvester_pattern() {
        let h2 = hadamard(2).unwrap();
        assert_eq!(h2.matrix().data(), &[1, 1, 1, 0]);
        let h1 = hadamard(1).unwrap();
        assert_eq!(h1.matrix().data(), &[1]);
    }

    #[test]
    fn paley_twelve_is_strength_three() {
        let h12 = hadamard(12).unwrap();
        assert_eq!(h12.rows(), 12);
        assert!(h12.verify_at(3).passed());
    }

    #[test]
    fn doubled_orders_verify() {
        for m in [8, 16, 24] {
            let h = hadamard(m).unwrap();
            assert!(h.is_ghm(), "order {m}");
        }
    }

    #[test]
    fn unsupported_orders_are_refused() {
        assert!(matches!(hadamard(36), Err(Error::UnsupportedOrder(36))));
        assert!(matches!(hadamard(6), Err(Error::UnsupportedOrder(6))));
    }
}
