//! The tropical hypersurface of a polynomial: cells, weights and balancing,
//! with an optional SVG drawing.
//!
//! Usage: cargo run --example hypersurface [-- out.svg]

use bluebend::ground::BaseValuation;
use bluebend::trop::{render_svg, tropical_hypersurface};
use bluebend::{GroundTag, Presentation};

fn main() -> bluebend::Result<()> {
    let p = Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x^2 + x*y + 4*y^2 + 2*x + y + 1 == 0")?;
    for v in [BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop)?, BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop)?] {
        let c = tropical_hypersurface(&p.subaddition[0].lhs, &p.generators, &v)?;
        println!("{} vertices, {} rays, {} cells, balanced: {}", c.vertices.len(), c.rays.len(), c.cells.len(), c.is_balanced());
        for cell in &c.cells {
            println!("  dim {} weight {} vertices {:?} rays {:?}", cell.dim, cell.weight, cell.vertices, cell.rays);
        }
        if let Some(path) = std::env::args().nth(1) {
            std::fs::write(&path, render_svg(&c)?).map_err(|e| bluebend::Error::Invalid(e.to_string()))?;
            println!("wrote {path}");
        }
    }
    Ok(())
}
