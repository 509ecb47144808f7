//! Exact unisolvence of the three-dimensional C^1 element of degree 9.

use latticefem::bernstein::SimplexGeometry;
use latticefem::dof::{check_unisolvence, DofError, ElementSpec, FramePolicy};

fn main() -> Result<(), DofError> {
    let spec = ElementSpec::smooth_nd(9, &[4, 2, 1, 0])?; // C^1 tetrahedron, k = 9
    let geometry = SimplexGeometry::reference(3);
    let report = check_unisolvence(&spec, &geometry, FramePolicy::Dual)?;
    assert!(report.invertible); // exact, 220×220
    println!(
        "dimension {}, exact determinant is nonzero: {}",
        report.dimension, report.invertible
    );
    Ok(())
}
