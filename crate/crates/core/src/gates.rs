//! Fixed operators used throughout tests and examples.

use crate::linalg::{ComplexMatrix, UnitaryOperator, C64};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

pub fn pauli_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::new(2, 2, vec![C64::new(0.0, 0.0), -i, i, C64::new(0.0, 0.0)]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[1.0, -1.0])
}

/// CNOT with the first (A) factor as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("4x4")
}

/// Exchange of two `d`-dimensional factors: `|i⟩|j⟩ ↦ |j⟩|i⟩`.
pub fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (i, j) = (col / d, col % d);
        if row == j * d + i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn cnot_unitary() -> UnitaryOperator {
    UnitaryOperator::new(cnot()).expect("CNOT is unitary")
}

pub fn swap_unitary(d: usize) -> UnitaryOperator {
    UnitaryOperator::new(swap(d)).expect("SWAP is unitary")
}

/// Matrix unit `E_ij` in dimension `d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |r, c| if r == i && c == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

/// Generalized Gell-Mann matrices (the Pauli matrices for `d = 2`), `d² − 1` of them.
pub fn gell_mann(d: usize) -> Vec<ComplexMatrix> {
    let zero = C64::new(0.0, 0.0);
    let mut out = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            out.push(ComplexMatrix::from_fn(d, d, |r, c| {
                if (r, c) == (j, k) || (r, c) == (k, j) {
                    C64::new(1.0, 0.0)
                } else {
                    zero
                }
            }));
            out.push(ComplexMatrix::from_fn(d, d, |r, c| {
                if (r, c) == (j, k) {
                    C64::new(0.0, -1.0)
                } else if (r, c) == (k, j) {
                    C64::new(0.0, 1.0)
                } else {
                    zero
                }
            }));
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|m| match m.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(ComplexMatrix::from_diagonal(&diag));
    }
    out
}
