//! Base change and localization: F1[x] tensored up to Q, and the plane over
//! F1 with s inverted.

use bluebend::functors::{localize, tensor_over_ground};
use bluebend::presentation::derives;
use bluebend::{corpus, DerivationBudget, GroundTag};

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    let t = tensor_over_ground(&corpus::by_name("f1_line")?, &corpus::by_name("q")?, GroundTag::F1, b)?;
    println!("F1[x] (x) Q over F1: {t}");

    let plane = corpus::by_name("f1_plane")?;
    let s = plane.var("s");
    let loc = localize(&plane, &[s])?;
    println!("plane with s inverted: {loc}");
    for rel in ["s*s_inv == 1", "t*s_inv == 1"] {
        println!("  {rel}: {}", derives(&loc, &loc.parse_relation(rel)?, b).label());
    }
    Ok(())
}
