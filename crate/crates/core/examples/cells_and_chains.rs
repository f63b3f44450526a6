//! Tangent and normal elements, boundary chains and ∂∂ = 0.
use extcalc::{Cell, Signature};

fn main() -> extcalc::Result<()> {
    let m = Signature::minkowski();
    let plane = Cell::unit_box(m, &[0, 1])?;
    println!("tangent of the e0e1 square: {}", plane.tangent_element(&[0.5, 0.5])?);
    println!("normal of the e0e1 square:  {}", plane.normal_element(&[0.5, 0.5])?);
    let null = Cell::affine(m, vec![0.0; 4], vec![vec![1.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]])?;
    println!("normal of a null plane:     {:?}", null.normal_element(&[0.5, 0.5]).err());

    let cube = Cell::unit_box(m, &[1, 2, 3])?;
    let faces = cube.boundary();
    for (face, w) in faces.cells() {
        println!("  face with parameter axes pinned {:?}, weight {w:+}", face.fixed_axes());
    }
    println!("boundary of the boundary: {} cells after merging", faces.boundary().simplify().len());
    Ok(())
}
