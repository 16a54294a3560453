//! The bend of the line x + y + 1 = 0 along the trivial valuation, and its
//! points: exactly the tropical line where the maximum of x, y, 1 is attained
//! twice.

use std::collections::BTreeMap;

use bluebend::ground::{qf, BaseValuation};
use bluebend::trop::{bend, point_in_trop, bend_matches_tropicalization};
use bluebend::{corpus, DerivationBudget, GroundTag, GroundValue};

fn main() -> bluebend::Result<()> {
    let p = corpus::by_name("line")?;
    let v = BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop)?;
    let bp = bend(&p, &v, GroundTag::Trop)?;
    println!("bend: {}", bp.underlying);
    println!("generator set complete: {}", bp.complete);

    let vals = [qf(1, 2), qf(1, 1), qf(2, 1)];
    for x in &vals {
        for y in &vals {
            let w: BTreeMap<String, GroundValue> = [
                ("x".to_string(), GroundValue::rational(GroundTag::Trop, x.clone())?),
                ("y".to_string(), GroundValue::rational(GroundTag::Trop, y.clone())?),
            ]
            .into();
            println!("(x, y) = ({x}, {y}): on the tropical line = {}", point_in_trop(&bp, &w)?);
        }
    }

    let same = bend_matches_tropicalization(&p, &v, GroundTag::Trop, DerivationBudget::default())?;
    println!("bend agrees with the core of the tropicalization: {}", same.label());
    Ok(())
}
