//! Small planar Gibbs families on `M_3` with characteristic convex supports.

use num_complex::Complex64;

use crate::gibbs::GibbsFamily;
use crate::operator::{CMatrix, HermitianOperator};

fn block(a: [[Complex64; 2]; 2], corner: f64) -> HermitianOperator {
    let mut m = CMatrix::zeros(3, 3);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = a[i][j];
        }
    }
    m[(2, 2)] = Complex64::new(corner, 0.0);
    HermitianOperator::new(m, 0.0).expect("blocks are Hermitian")
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sigma_x() -> [[Complex64; 2]; 2] {
    [[re(0.0), re(1.0)], [re(1.0), re(0.0)]]
}

fn sigma_y() -> [[Complex64; 2]; 2] {
    [[re(0.0), Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), re(0.0)]]
}

fn sigma_z() -> [[Complex64; 2]; 2] {
    [[re(1.0), re(0.0)], [re(0.0), re(-1.0)]]
}

/// `σ_z ⊕ 1`, `σ_z ⊕ (-1)`: commuting, convex support is the triangle with
/// vertices `(1,1)`, `(-1,-1)`, `(1,-1)`.
pub fn example1() -> GibbsFamily {
    GibbsFamily::new(vec![block(sigma_z(), 1.0), block(sigma_z(), -1.0)], "example1").expect("valid")
}

/// `σ_x ⊕ 1`, `σ_y ⊕ 0`: convex support is the unit disk.
pub fn example2() -> GibbsFamily {
    GibbsFamily::new(vec![block(sigma_x(), 1.0), block(sigma_y(), 0.0)], "example2").expect("valid")
}

/// `σ_x ⊕ 2`, `σ_y ⊕ 0`: convex hull of the unit disk and the point `(2,0)`.
pub fn example3() -> GibbsFamily {
    GibbsFamily::new(vec![block(sigma_x(), 2.0), block(sigma_y(), 0.0)], "example3").expect("valid")
}
