//! Classical notions as valuations: a 2-adic absolute value gives a
//! non-archimedean seminorm, the real absolute value a seminorm, and
//! assignments that break the max-twice rule are refuted.

use std::collections::BTreeMap;

use bluebend::ground::{base_valuation, qf, BaseValuation, ValuationKind, Q};
use bluebend::valuation::{classify_valuation, is_valuation, ValuationSpec};
use bluebend::{corpus, DerivationBudget, GroundTag, GroundValue};

fn at(t: GroundTag, x: Q, y: Q) -> bluebend::Result<BTreeMap<String, GroundValue>> {
    Ok([("x".to_string(), GroundValue::rational(t, x)?), ("y".to_string(), GroundValue::rational(t, y)?)].into())
}

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    // x + y + 2 = 0 over Q
    let line = corpus::by_name("line_two")?;
    let two_adic = BaseValuation::p_adic(2, GroundTag::Rat, GroundTag::Trop)?;
    let arch = base_valuation(ValuationKind::Archimedean, GroundTag::Rat, GroundTag::RPlus)?;

    let cases = [
        ("2-adic, w = (1/2, 1/2)", two_adic.clone(), at(GroundTag::Trop, qf(1, 2), qf(1, 2))?),
        ("2-adic, w = (2, 1)", two_adic, at(GroundTag::Trop, qf(2, 1), qf(1, 1))?),
        ("archimedean, w = (1, 3)", arch.clone(), at(GroundTag::RPlus, qf(1, 1), qf(3, 1))?),
        ("archimedean, w = (1, 4)", arch, at(GroundTag::RPlus, qf(1, 1), qf(4, 1))?),
    ];
    for (label, base, w) in cases {
        let spec = ValuationSpec::new(line.clone(), base, w)?;
        let v = is_valuation(&spec, b)?;
        match classify_valuation(&spec, b) {
            Ok(class) if v.is_proved() => println!("{label}: valuation, {class:?}"),
            _ => println!("{label}: {}", v.label()),
        }
    }
    Ok(())
}
