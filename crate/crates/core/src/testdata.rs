//! Reference arrays and states used across unit tests.

use num_complex::Complex64;

use crate::arrays::MixedArray;
use crate::states::PureState;

/// The irredundant MOA(8, 4^1 2^4, 2) with minimum distance 3.
pub fn moa_8() -> MixedArray {
    #[rustfmt::skip]
    let data = vec![
        0, 0, 0, 0, 0,
        0, 1, 1, 1, 1,
        1, 0, 0, 1, 1,
        1, 1, 1, 0, 0,
        2, 0, 1, 0, 1,
        2, 1, 0, 1, 0,
        3, 0, 1, 1, 0,
        3, 1, 0, 0, 1,
    ];
    MixedArray::new(&[4, 2, 2, 2, 2], data, 2).unwrap()
}

/// The simple but redundant MOA(12, 3^1 2^4, 2) with minimum distance 1.
pub fn moa_12() -> MixedArray {
    #[rustfmt::skip]
    let data = vec![
        0, 0, 0, 0, 0,
        0, 1, 0, 1, 0,
        0, 0, 1, 0, 1,
        0, 1, 1, 1, 1,
        1, 0, 1, 1, 0,
        1, 1, 1, 0, 0,
        1, 0, 0, 0, 1,
        1, 1, 0, 1, 1,
        2, 0, 1, 1, 0,
        2, 1, 0, 0, 0,
        2, 0, 0, 1, 1,
        2, 1, 1, 0, 1,
    ];
    MixedArray::new(&[3, 2, 2, 2, 2], data, 2).unwrap()
}

/// The MOA(18, 3^7 2^1, 2) with minimum distance 5.
pub fn moa_18() -> MixedArray {
    #[rustfmt::skip]
    let data = vec![
        0, 0, 0, 0, 0, 0, 0, 0,
        0, 1, 2, 2, 0, 1, 1, 0,
        0, 2, 1, 2, 1, 0, 2, 0,
        0, 1, 1, 0, 2, 2, 0, 1,
        0, 2, 0, 1, 2, 1, 1, 1,
        0, 0, 2, 1, 1, 2, 2, 1,
        1, 1, 1, 1, 1, 1, 0, 0,
        1, 2, 0, 0, 1, 2, 1, 0,
        1, 0, 2, 0, 2, 1, 2, 0,
        1, 2, 2, 1, 0, 0, 0, 1,
        1, 0, 1, 2, 0, 2, 1, 1,
        1, 1, 0, 2, 2, 0, 2, 1,
        2, 2, 2, 2, 2, 2, 0, 0,
        2, 0, 1, 1, 2, 0, 1, 0,
        2, 1, 0, 1, 0, 2, 2, 0,
        2, 0, 0, 2, 1, 1, 0, 1,
        2, 1, 2, 0, 1, 0, 1, 1,
        2, 2, 1, 0, 0, 1, 2, 1,
    ];
    MixedArray::new(&[3, 3, 3, 3, 3, 3, 3, 2], data, 2).unwrap()
}

/// The 2-uniform state in C^4 x (C^2)^4 built from `moa_8`.
pub fn state_42222() -> PureState {
    let amp = Complex64::new(1.0 / (2.0 * 2.0_f64.sqrt()), 0.0);
    let kets = [
        [0, 0, 0, 0, 0],
        [0, 1, 1, 1, 1],
        [1, 0, 0, 1, 1],
        [1, 1, 1, 0, 0],
        [2, 0, 1, 0, 1],
        [2, 1, 0, 1, 0],
        [3, 0, 1, 1, 0],
        [3, 1, 0, 0, 1],
    ];
    PureState::new(
        vec![4, 2, 2, 2, 2],
        kets.iter().map(|k| (k.to_vec(), amp)),
    )
    .unwrap()
}

/// GHZ state over `n` parties of dimension `d`.
pub fn ghz(d: u32, n: usize) -> PureState {
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    PureState::new(
        vec![d; n],
        (0..d).map(|j| (vec![j; n], amp)),
    )
    .unwrap()
}
