//! The blueprint B[T]/(T + 1 = T = T^2) has a single point, yet its
//! globalization differs from it: the prime k-ideals, the closed point and
//! the global sections.

use bluebend::presentation::{congruence_equiv, equal_in_quotient};
use bluebend::spectra::{globalize, prime_k_ideals};
use bluebend::{corpus, DerivationBudget};

fn main() -> bluebend::Result<()> {
    let b = DerivationBudget::default();
    let p = corpus::by_name("nonlocal")?;
    println!("presentation: {p}");

    let spec = prime_k_ideals(&p, b)?;
    for prime in &spec.primes {
        println!("prime k-ideal: {:?}", prime.labels());
    }
    println!("tentative: {}", spec.tentative());

    let g = globalize(&p, b)?;
    println!("closed point: {:?}", g.closed_point.labels());
    println!("global sections: {}", g.sections);
    let t_is_one = equal_in_quotient(&g.sections, &g.sections.var("T"), &g.sections.one(), b);
    println!("T = 1 on global sections: {}", t_is_one.label());
    let again = globalize(&g.sections, b)?;
    let same = congruence_equiv(&g.sections, &again.sections, b)?;
    println!("globalizing again changes nothing: {}", same.label());
    Ok(())
}
