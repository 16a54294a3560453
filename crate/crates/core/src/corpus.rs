//! Named presentations used by the examples, the tests and the command line
//! (as `corpus:<name>`).

use crate::error::{Error, Result};
use crate::ground::GroundTag;
use crate::presentation::Presentation;

/// Names accepted by [`by_name`], in a fixed order.
pub const NAMES: &[&str] = &[
    "nonlocal", "f1_line", "f1_plane", "f1_monomial", "z", "q", "line", "conic", "line_two", "sqrt4", "tropical_interval",
    "bool_plane", "torus", "st_s",
];

pub fn by_name(name: &str) -> Result<Presentation> {
    let p = match name {
        // B[T]/(T + 1 = T = T^2): one point, not local as a blueprint
        "nonlocal" => Presentation::new(GroundTag::Bool, &["T"]).rel("T + 1 == T")?.rel("T == T^2")?,
        "f1_line" => Presentation::new(GroundTag::F1, &["x"]),
        "f1_plane" => Presentation::new(GroundTag::F1, &["s", "t"]),
        "f1_monomial" => Presentation::new(GroundTag::F1, &["x", "y"]).rel("x <= y + 1")?,
        "z" => Presentation::new(GroundTag::Int, &[]),
        "q" => Presentation::new(GroundTag::Rat, &[]),
        "line" => Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x + y + 1 == 0")?,
        "conic" => Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x^2 + y^2 + 1 == 0")?,
        "line_two" => Presentation::new(GroundTag::Rat, &["x", "y"]).rel("x + y + 2 == 0")?,
        "sqrt4" => Presentation::new(GroundTag::Rat, &["x"]).rel("x^2 - 4 == 0")?,
        "tropical_interval" => Presentation::new(GroundTag::Trop, &["x"]).rel("x <= 1")?,
        "bool_plane" => Presentation::new(GroundTag::Bool, &["x", "y"]).rel("x <= y + 1")?,
        "torus" => Presentation::new(GroundTag::Rat, &["t", "u"]).mon("t*u = 1")?,
        "st_s" => Presentation::new(GroundTag::Rat, &["s", "t"]).mon("s*t = s")?,
        _ => return Err(Error::Invalid(format!("no corpus presentation named {name}"))),
    };
    Ok(p)
}

/// Presentations with a trivial valuation into both BOOL and TROP.
pub fn tropicalizable() -> Vec<(&'static str, Presentation)> {
    ["line", "conic", "line_two", "sqrt4", "f1_monomial", "bool_plane", "nonlocal"]
        .into_iter()
        .map(|n| (n, by_name(n).expect("corpus entry")))
        .collect()
}
