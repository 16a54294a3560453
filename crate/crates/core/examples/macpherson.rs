//! Spans of monomials in one variable over F1 and over Q with the 2-adic
//! unit ball, with the check that spans embed into tropical polynomials.

use bluebend::ground::BaseValuation;
use bluebend::trop::{macpherson_an, spans_embed_tropically, KDesignation};
use bluebend::{DerivationBudget, GroundTag, Presentation};

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    let cases = [
        (Presentation::new(GroundTag::F1, &["x"]), KDesignation::Ground),
        (Presentation::new(GroundTag::Rat, &["x"]), KDesignation::Valued(BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop)?)),
    ];
    for (p, k) in cases {
        let frag = macpherson_an(&p, &k, 3, 2, b)?;
        println!("{}: {} spans from {} candidate monomials", p.ground, frag.spans.len(), frag.candidates.len());
        for s in frag.spans.iter().take(8) {
            println!("  {s}");
        }
        if frag.spans.len() >= 2 {
            println!("  {} v {} = {}", frag.spans[0], frag.spans[1], frag.join[0][1]);
            println!("  {} * {} = {}", frag.spans[0], frag.spans[1], frag.product[0][1]);
        }
        println!("  embeds into tropical polynomials: {}", spans_embed_tropically(&frag, &k)?.label());
    }
    Ok(())
}
