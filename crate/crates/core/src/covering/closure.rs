use std::collections::{BTreeSet, VecDeque};

use super::spec::{CoveringSpec, CurveId};
use crate::error::SpecError;

/// Smallest superset of `seeds` closed under non-peripheral lifts, listed
/// in universe order.
pub fn pullback_closure(spec: &CoveringSpec, seeds: &[CurveId]) -> Result<Vec<CurveId>, SpecError> {
    let mut found: BTreeSet<&CurveId> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        let c = spec.curve(s).ok_or_else(|| SpecError::UnknownCurve(s.clone()))?;
        if found.insert(&c.id) {
            queue.push_back(&c.id);
        }
    }
    while let Some(id) = queue.pop_front() {
        for lift in spec.lifts(id)? {
            let Some(c) = spec.curve(lift) else {
                return Err(SpecError::IncompleteUniverse {
                    from: id.clone(),
                    missing: lift.clone(),
                });
            };
            if found.insert(&c.id) {
                queue.push_back(&c.id);
            }
        }
    }
    Ok(spec
        .curves
        .iter()
        .filter(|c| found.contains(&c.id))
        .map(|c| c.id.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::canned;

    fn ids(names: &[&str]) -> Vec<CurveId> {
        names.iter().map(|&n| n.into()).collect()
    }

    #[test]
    fn closure_examples() {
        let levy = canned("levy_cycle").unwrap();
        assert_eq!(pullback_closure(&levy, &ids(&["gamma1"])).unwrap(), ids(&["gamma1"]));
        let swap = canned("swap").unwrap();
        assert_eq!(pullback_closure(&swap, &ids(&["gamma1"])).unwrap(), ids(&["gamma1", "gamma2"]));
        let chain = canned("depth_chain").unwrap();
        assert_eq!(pullback_closure(&chain, &ids(&["h0"])).unwrap(), ids(&["h0", "h1", "h2"]));
    }

    #[test]
    fn closure_leaving_the_universe_is_an_error() {
        let mut swap = canned("swap").unwrap();
        swap.curves.retain(|c| c.id.as_str() == "gamma1");
        assert_eq!(
            pullback_closure(&swap, &ids(&["gamma1"])),
            Err(SpecError::IncompleteUniverse {
                from: "gamma1".into(),
                missing: "gamma2".into()
            })
        );
    }
}
