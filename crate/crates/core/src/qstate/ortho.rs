use nalgebra::DVector;
use num_complex::Complex64;

/// Orthogonalizes `v` against an orthonormal `basis` (two passes of modified
/// Gram–Schmidt) and appends it if what remains has norm above `tol`.
/// Returns whether `v` was appended.
pub(crate) fn extend_orthonormal(
    basis: &mut Vec<DVector<Complex64>>,
    v: &DVector<Complex64>,
    tol: f64,
) -> bool {
    let scale = v.norm();
    if scale <= f64::MIN_POSITIVE {
        return false;
    }
    let mut w = v / Complex64::new(scale, 0.0);
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dotc(&w);
            w -= b * c;
        }
    }
    let n = w.norm();
    if n <= tol {
        return false;
    }
    basis.push(w / Complex64::new(n, 0.0));
    true
}

/// Completes an orthonormal set to a basis of the whole space using the
/// computational basis vectors in order.
pub(crate) fn complete_with_standard_basis(basis: &mut Vec<DVector<Complex64>>, dim: usize) {
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = DVector::zeros(dim);
        e[i] = Complex64::new(1.0, 0.0);
        extend_orthonormal(basis, &e, 1e-8);
    }
    debug_assert_eq!(basis.len(), dim);
}
