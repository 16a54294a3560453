//! Valuations of the line x + y + 1 = 0 into TROP on a grid of values:
//! an assignment is a valuation exactly when the largest of w(x), w(y), 1 is
//! attained at least twice.

use std::collections::BTreeMap;

use bluebend::ground::{qf, BaseValuation};
use bluebend::valuation::{is_valuation, ValuationSpec};
use bluebend::{corpus, DerivationBudget, GroundTag, GroundValue};

fn main() -> bluebend::Result<()> {
    let p = corpus::by_name("line")?;
    let base = BaseValuation::trivial(GroundTag::Rat, GroundTag::Trop)?;
    let n = 8;
    println!("rows: w(y) = {n}/4 down to 0, columns: w(x) = 0 up to {n}/4; '#' marks a valuation");
    for j in (0..=n).rev() {
        let mut row = String::new();
        for i in 0..=n {
            let w: BTreeMap<String, GroundValue> = [
                ("x".to_string(), GroundValue::rational(GroundTag::Trop, qf(i, 4))?),
                ("y".to_string(), GroundValue::rational(GroundTag::Trop, qf(j, 4))?),
            ]
            .into();
            let spec = ValuationSpec::new(p.clone(), base.clone(), w)?;
            row.push(if is_valuation(&spec, DerivationBudget::default())?.is_proved() { '#' } else { '.' });
        }
        println!("{row}");
    }
    Ok(())
}
