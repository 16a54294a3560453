//! Positivity collapses rings: in pos(Z) the relation 0 = 1 is derivable,
//! while Z itself refutes it.

use bluebend::functors::{apply_functor, FunctorTag};
use bluebend::presentation::derives;
use bluebend::{corpus, DerivationBudget};

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    for name in ["z", "q", "line"] {
        let p = corpus::by_name(name)?;
        let pos = apply_functor(&p, FunctorTag::Pos)?;
        let before = derives(&p, &p.parse_relation("0 == 1")?, b);
        let after = derives(&pos, &pos.parse_relation("0 == 1")?, b);
        println!("{name:>5}: 0 == 1 is {} before and {} after pos", before.label(), after.label());
        if let bluebend::Verdict::Proved(trace) = after {
            for step in trace {
                println!("        {step}");
            }
        }
    }
    Ok(())
}
