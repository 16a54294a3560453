//! Circuit congruences compared with the bend. At the degree of the defining
//! polynomial, the bend relations of all circuits of the ideal generate the
//! same congruence as the bend, for the trivial and the 2-adic valuation.

use bluebend::ground::BaseValuation;
use bluebend::presentation::congruence_equiv;
use bluebend::trop::{bend, gg_congruence, ideal_circuits};
use bluebend::{corpus, DerivationBudget, GroundTag};

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    for (name, d) in [("line", 1), ("conic", 2), ("line_two", 1)] {
        let p = corpus::by_name(name)?;
        let ideal: Vec<_> = p.subaddition.iter().map(|r| r.lhs.clone()).collect();
        let circuits = ideal_circuits(&p.generators, &ideal, p.ground, d)?;
        println!("{name}: {} circuits of degree at most {d}", circuits.len());
        for c in &circuits {
            println!("  {c}");
        }
        for v in [BaseValuation::trivial(p.ground, GroundTag::Trop)?, BaseValuation::p_adic(2, p.ground, GroundTag::Trop)?] {
            let gg = gg_congruence(&p.generators, &ideal, &v, GroundTag::Trop, d)?;
            let bp = bend(&p, &v, GroundTag::Trop)?;
            let same = congruence_equiv(&gg, &bp.underlying, b)?;
            println!("  {:?}: equivalent to the bend: {}", v.kind, same.label());
        }
    }
    Ok(())
}
