//! Kato fans of monoids, membership in extended cones, and recovery of the
//! fan from the bend of the monoid algebra.

use std::collections::BTreeMap;

use bluebend::ground::qf;
use bluebend::spectra::{extended_cone_membership, kato_fan, recover_kato_from_bend};
use bluebend::{corpus, DerivationBudget, GroundTag, GroundValue, Presentation};

fn main() -> bluebend::Result<()> {
    let cusp = Presentation::new(GroundTag::F1, &["s", "t"]).mon("s^2 = t^3")?;
    for (name, m) in [("plane", corpus::by_name("f1_plane")?), ("cusp", cusp)] {
        let fan = kato_fan(&m)?;
        println!("{name}: {} points", fan.points.len());
        for pt in &fan.points {
            println!("  prime {pt:?}");
        }
        for (h, sec) in &fan.sections {
            println!("  sections over U_{h}: {sec}");
        }
    }

    let cusp = Presentation::new(GroundTag::F1, &["s", "t"]).mon("s^2 = t^3")?;
    for (s, t) in [(qf(1, 8), qf(1, 4)), (qf(1, 2), qf(1, 2)), (qf(0, 1), qf(0, 1))] {
        let pt: BTreeMap<String, GroundValue> = [
            ("s".to_string(), GroundValue::rational(GroundTag::OTrop, s.clone())?),
            ("t".to_string(), GroundValue::rational(GroundTag::OTrop, t.clone())?),
        ]
        .into();
        println!("(s, t) = ({s}, {t}) in the extended cone of the cusp: {}", extended_cone_membership(&cusp, &pt)?);
    }

    for name in ["torus", "st_s"] {
        let (fan, same) = recover_kato_from_bend(&corpus::by_name(name)?, DerivationBudget::default())?;
        println!("{name}: recovered {} points, matches the designated monoid: {}", fan.points.len(), same.label());
    }
    Ok(())
}
