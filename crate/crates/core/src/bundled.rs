//! Certificates shipped with the crate so every run works offline.

use crate::construct::{build_theorem1, gadget_order, Theorem1Instance, Theorem2Instance};
use crate::error::{invalid, Result};
use crate::gadget::BoxGadget;

const GADGET_N2_DIM2: &str = include_str!("../assets/gadget_n2_dim2.json");
const GADGET_N3_DIM2: &str = include_str!("../assets/gadget_n3_dim2.json");
const THEOREM1_D4_K2: &str = include_str!("../assets/theorem1_d4_k2.json");
const THEOREM2_D4_K2: &str = include_str!("../assets/theorem2_d4_k2.json");

/// Raw JSON of the bundled certificate for `(n, dim)`, if one ships.
pub fn gadget_json(n: usize, dim: usize) -> Option<&'static str> {
    match (n, dim) {
        (2, 2) => Some(GADGET_N2_DIM2),
        (3, 2) => Some(GADGET_N3_DIM2),
        _ => None,
    }
}

pub fn gadget(n: usize, dim: usize) -> Result<BoxGadget> {
    let raw = gadget_json(n, dim)
        .ok_or_else(|| invalid(format!("no bundled gadget for n = {n}, dim = {dim}")))?;
    serde_json::from_str(raw).map_err(|e| invalid(format!("bundled gadget is corrupt: {e}")))
}

/// The shipped `d = 4, k = 2` union instance, as stored.
pub fn theorem1_d4_k2() -> Result<Theorem1Instance> {
    serde_json::from_str(THEOREM1_D4_K2)
        .map_err(|e| invalid(format!("bundled instance is corrupt: {e}")))
}

/// The shipped dual of [`theorem1_d4_k2`].
pub fn theorem2_d4_k2() -> Result<Theorem2Instance> {
    serde_json::from_str(THEOREM2_D4_K2)
        .map_err(|e| invalid(format!("bundled instance is corrupt: {e}")))
}

/// Union instance for even `d` and `k`, built from the bundled gadget of
/// order `⌊log2 k⌋ + 1` in dimension `d/2`.
pub fn theorem1(d: usize, k: usize) -> Result<Theorem1Instance> {
    if k < 2 {
        return Err(invalid(format!("k must be at least 2, got {k}")));
    }
    build_theorem1(d, k, gadget(gadget_order(k), d / 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_theorem2;

    #[test]
    fn shipped_instances_match_a_fresh_build() {
        let fresh = theorem1(4, 2).unwrap();
        assert_eq!(theorem1_d4_k2().unwrap(), fresh);
        assert_eq!(theorem2_d4_k2().unwrap(), build_theorem2(fresh, 2).unwrap());
    }

    #[test]
    fn missing_bundles() {
        assert!(gadget(4, 2).is_err());
        assert!(theorem1(6, 2).is_err());
        assert!(theorem1(4, 1).is_err());
    }
}
