//! Orthogonality-preserving local measurements.
//!
//! For a family of mutually orthogonal states and a chosen party, the POVM
//! elements `E` that keep the family orthogonal after `M ⊗ I` (with
//! `E = M†M`) form a real-linear subspace of the Hermitian operators on
//! that party, cut out by `<ψ_s| (E ⊗ I) |ψ_t> = 0` for `s ≠ t`. The
//! identity always lies in it; when nothing else does, no measurement on
//! that party can begin a discrimination protocol. Dimension 1 on every
//! party certifies local irreducibility.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::states::{PureState, ORTHOGONALITY_TOL};

/// Singular values at or below this cutoff count as zero for rank purposes.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Solution space of the orthogonality-preserving constraints on one party.
#[derive(Debug, Clone)]
pub struct OpmSolutionSpace {
    /// Real dimension of the space of admissible Hermitian operators.
    pub dimension: usize,
    /// Hermitian basis of the space (length equals `dimension`).
    pub basis: Vec<DMatrix<Complex64>>,
    /// Residual of the identity operator under the constraint map; always
    /// tiny, asserted on every call.
    pub identity_residual: f64,
}

/// Certificate from checking every party.
#[derive(Debug, Clone)]
pub struct IrreducibilityCertificate {
    pub per_party_dimension: Vec<usize>,
}

impl IrreducibilityCertificate {
    /// No party admits a nontrivial orthogonality-preserving measurement.
    pub fn passed(&self) -> bool {
        self.per_party_dimension.iter().all(|&d| d == 1)
    }
}

fn check_family(states: &[PureState]) -> Result<&[u32]> {
    let first = states
        .first()
        .ok_or_else(|| Error::invalid("no states given"))?;
    for s in states {
        if s.dims() != first.dims() {
            return Err(Error::invalid("states have mismatched dimensions"));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..states.len())
        .flat_map(|i| (i + 1..states.len()).map(move |j| (i, j)))
        .collect();
    let violation = par::find_map_first(pairs, |(i, j)| {
        let overlap = states[i].inner_product(&states[j]).norm();
        (overlap > ORTHOGONALITY_TOL).then_some((i, j, overlap))
    });
    if let Some((i, j, overlap)) = violation {
        return Err(Error::NotOrthogonal { i, j, overlap });
    }
    Ok(first.dims())
}

/// `<ψ_s| (|j><k| at party) |ψ_t>`.
fn matrix_unit_overlap(
    s: &PureState,
    t: &PureState,
    party: usize,
    j: u32,
    k: u32,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (tuple, &amp_t) in t.amplitudes() {
        if tuple[party] != k {
            continue;
        }
        let mut shifted = tuple.clone();
        shifted[party] = j;
        acc += s.amplitude(&shifted).conj() * amp_t;
    }
    acc
}

/// Solve the orthogonality-preserving-measurement constraints for `party`.
///
/// Hermitian operators are coordinatized by `d²` real parameters (diagonal
/// entries, then real and imaginary off-diagonal parts); the constraint
/// matrix is ranked by singular values with cutoff [`RANK_CUTOFF`]. The
/// returned dimension is always at least 1 because the identity solves the
/// system.
pub fn opm_solution_space(states: &[PureState], party: usize) -> Result<OpmSolutionSpace> {
    let dims = check_family(states)?;
    if party >= dims.len() {
        return Err(Error::invalid("party index out of range"));
    }
    let d = dims[party] as usize;
    let unknowns = d * d;

    // off-diagonal pair order: (0,1), (0,2), ..., (1,2), ...
    let pair_index = |j: usize, k: usize| -> (usize, usize) {
        let mut idx = 0;
        for a in 0..j {
            idx += d - 1 - a;
        }
        idx += k - j - 1;
        (d + 2 * idx, d + 2 * idx + 1)
    };

    let pairs: Vec<(usize, usize)> = (0..states.len())
        .flat_map(|s| (s + 1..states.len()).map(move |t| (s, t)))
        .collect();
    let rows: Vec<Vec<f64>> = par::map_collect(pairs, |(si, ti)| {
        let s = &states[si];
        let t = &states[ti];
        let mut unit = vec![Complex64::new(0.0, 0.0); d * d];
        for j in 0..d {
            for k in 0..d {
                unit[j * d + k] = matrix_unit_overlap(s, t, party, j as u32, k as u32);
            }
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); unknowns];
        for j in 0..d {
            coeffs[j] = unit[j * d + j];
        }
        for j in 0..d {
            for k in j + 1..d {
                let (re_col, im_col) = pair_index(j, k);
                coeffs[re_col] = unit[j * d + k] + unit[k * d + j];
                coeffs[im_col] = Complex64::i() * (unit[j * d + k] - unit[k * d + j]);
            }
        }
        let mut two_rows = Vec::with_capacity(2 * unknowns);
        two_rows.extend(coeffs.iter().map(|c| c.re));
        two_rows.extend(coeffs.iter().map(|c| c.im));
        two_rows
    });

    let eq_count = (2 * rows.len()).max(unknowns);
    let mut a = DMatrix::<f64>::zeros(eq_count, unknowns);
    for (p, pair_rows) in rows.iter().enumerate() {
        for col in 0..unknowns {
            a[(2 * p, col)] = pair_rows[col];
            a[(2 * p + 1, col)] = pair_rows[unknowns + col];
        }
    }

    // identity coordinates: all-ones diagonal block
    let mut identity_residual = 0.0f64;
    for row in 0..a.nrows() {
        let mut acc = 0.0;
        for j in 0..d {
            acc += a[(row, j)];
        }
        identity_residual = identity_residual.max(acc.abs());
    }

    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("V requested");
    let mut dimension = 0;
    let mut basis = Vec::new();
    for (i, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= RANK_CUTOFF {
            dimension += 1;
            let coords: Vec<f64> = (0..unknowns).map(|c| v_t[(i, c)]).collect();
            basis.push(hermitian_from_coords(d, &coords, &pair_index));
        }
    }

    if dimension < 1 || identity_residual > 1e-7 {
        return Err(Error::PostconditionFailed(format!(
            "identity is not inside the solution space (dimension {dimension}, residual {identity_residual:.3e})"
        )));
    }
    Ok(OpmSolutionSpace {
        dimension,
        basis,
        identity_residual,
    })
}

fn hermitian_from_coords(
    d: usize,
    coords: &[f64],
    pair_index: &dyn Fn(usize, usize) -> (usize, usize),
) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = Complex64::new(coords[j], 0.0);
    }
    for j in 0..d {
        for k in j + 1..d {
            let (re_col, im_col) = pair_index(j, k);
            m[(j, k)] = Complex64::new(coords[re_col], coords[im_col]);
            m[(k, j)] = Complex64::new(coords[re_col], -coords[im_col]);
        }
    }
    m
}

/// Check every party: passes when each solution space is exactly the span
/// of the identity. This is the sufficient criterion for local
/// irreducibility (and hence local indistinguishability).
pub fn is_locally_irreducible_certificate(
    states: &[PureState],
) -> Result<IrreducibilityCertificate> {
    let dims = check_family(states)?.to_vec();
    let mut per_party_dimension = Vec::with_capacity(dims.len());
    for party in 0..dims.len() {
        per_party_dimension.push(opm_solution_space(states, party)?.dimension);
    }
    Ok(IrreducibilityCertificate {
        per_party_dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata;
    use num_complex::Complex64;

    fn computational_basis_2x2() -> Vec<PureState> {
        let one = Complex64::new(1.0, 0.0);
        (0..2u32)
            .flat_map(|a| (0..2u32).map(move |b| (a, b)))
            .map(|(a, b)| PureState::new(vec![2, 2], [(vec![a, b], one)]).unwrap())
            .collect()
    }

    #[test]
    fn product_basis_admits_diagonal_measurements() {
        let basis = computational_basis_2x2();
        let space = opm_solution_space(&basis, 0).unwrap();
        assert_eq!(space.dimension, 2);
        let cert = is_locally_irreducible_certificate(&basis).unwrap();
        assert!(!cert.passed());
        assert_eq!(cert.per_party_dimension, vec![2, 2]);
    }

    #[test]
    fn ghz_basis_is_locally_irreducible() {
        let basis = testdata::ghz(2, 3).generate_basis(1).unwrap();
        let cert = is_locally_irreducible_certificate(&basis).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.per_party_dimension, vec![1, 1, 1]);
    }

    #[test]
    fn identity_survives_every_solve() {
        let basis = testdata::ghz(3, 3).generate_basis(1).unwrap();
        for party in 0..3 {
            let space = opm_solution_space(&basis, party).unwrap();
            assert!(space.dimension >= 1);
            assert!(space.identity_residual < 1e-10);
        }
    }

    #[test]
    fn non_orthogonal_families_are_rejected() {
        let one = Complex64::new(1.0, 0.0);
        let a = PureState::new(vec![2, 2], [(vec![0, 0], one)]).unwrap();
        let b = PureState::new(
            vec![2, 2],
            [
                (vec![0, 0], Complex64::new(0.6, 0.0)),
                (vec![1, 1], Complex64::new(0.8, 0.0)),
            ],
        )
        .unwrap();
        assert!(matches!(
            opm_solution_space(&[a, b], 0),
            Err(Error::NotOrthogonal { .. })
        ));
    }
}
