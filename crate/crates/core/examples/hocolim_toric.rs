//! Spectral sequence of a homotopy colimit of Eilenberg-Mac Lane spaces over
//! the face poset of a toric fan.

use emlkit::hocolim::eml::DiagramSpec;
use emlkit::hocolim::srep::hocolim_ss;

fn main() -> emlkit::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fan_p2".into());
    let path = format!("{}/data/diagrams/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let spec = DiagramSpec::parse(&std::fs::read_to_string(path)?)?;
    let r = hocolim_ss(&spec.build()?, None)?;
    print!("{}", r.table());
    Ok(())
}
