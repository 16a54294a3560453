//! Tropical multiplicities read off the bend: the weight at a point of the
//! tropical curve, compared with the lattice length of the dual Newton edge.

use std::collections::BTreeMap;

use bluebend::ground::{qf, BaseValuation};
use bluebend::trop::{bend, mr_weight, tropical_hypersurface};
use bluebend::{GroundTag, GroundValue, Presentation};

fn main() -> bluebend::Result<()> {
    let triv = BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop)?;
    // one point on each ray of the tropical line: (4, 4), (1/4, 1), (1, 1/4)
    let points = [(qf(4, 1), qf(4, 1)), (qf(1, 4), qf(1, 1)), (qf(1, 1), qf(1, 4))];
    for f in ["x + y + 1", "x^2 + y^2 + 1", "x^2 + x*y + y^2 + x + y + 1"] {
        let p = Presentation::new(GroundTag::Rat, &["x", "y"]).rel(&format!("{f} == 0"))?;
        let bp = bend(&p, &triv, GroundTag::Trop)?;
        let c = tropical_hypersurface(&p.subaddition[0].lhs, &p.generators, &triv)?;
        let edge: Vec<u64> = c.cells.iter().map(|cell| cell.weight).collect();
        println!("{f}: edge lattice lengths {edge:?}");
        for (x, y) in &points {
            let w: BTreeMap<String, GroundValue> = [
                ("x".to_string(), GroundValue::rational(GroundTag::Trop, x.clone())?),
                ("y".to_string(), GroundValue::rational(GroundTag::Trop, y.clone())?),
            ]
            .into();
            println!("  weight at ({x}, {y}): {}", mr_weight(&bp, &w, 4)?);
        }
    }
    Ok(())
}
