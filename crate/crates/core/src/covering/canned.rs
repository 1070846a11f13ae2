//! Built-in example coverings.

use super::spec::CoveringSpec;
use crate::error::SpecError;

const SOURCES: &[(&str, &str)] = &[
    ("levy_cycle", include_str!("canned/levy_cycle.json")),
    ("swap", include_str!("canned/swap.json")),
    ("doubling", include_str!("canned/doubling.json")),
    ("two_block", include_str!("canned/two_block.json")),
    ("levy_pair", include_str!("canned/levy_pair.json")),
    ("levy_tail", include_str!("canned/levy_tail.json")),
    ("depth_chain", include_str!("canned/depth_chain.json")),
    ("misiurewicz_i", include_str!("canned/misiurewicz_i.json")),
    ("subhyp_disk", include_str!("canned/subhyp_disk.json")),
];

/// Canned examples whose full curve universe is a Thurston obstruction.
pub const OBSTRUCTED: &[&str] = &["levy_cycle", "doubling", "two_block", "levy_pair", "levy_tail", "depth_chain"];

pub fn canned_names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

pub fn canned(name: &str) -> Result<CoveringSpec, SpecError> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| SpecError::NotFound(name.to_owned()))?;
    CoveringSpec::from_json(text)
}

pub fn canned_examples() -> Vec<CoveringSpec> {
    SOURCES
        .iter()
        .map(|(_, text)| CoveringSpec::from_json(text).expect("canned spec parses"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::validate_spec;

    #[test]
    fn every_canned_spec_is_valid() {
        for spec in canned_examples() {
            assert_eq!(validate_spec(&spec), vec![], "{}", spec.name);
        }
    }

    #[test]
    fn unknown_name() {
        assert_eq!(canned("nope"), Err(SpecError::NotFound("nope".into())));
    }
}
