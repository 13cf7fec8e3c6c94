//! The example diagrams shipped with the library.

pub const CD1: &str = include_str!("../fixtures/cd1.cd");
pub const CD1P: &str = include_str!("../fixtures/cd1p.cd");
pub const CD2: &str = include_str!("../fixtures/cd2.cd");
pub const OD1: &str = include_str!("../fixtures/od1.od");
pub const OD2: &str = include_str!("../fixtures/od2.od");
pub const OD_EMPTY: &str = include_str!("../fixtures/empty.od");

/// Class diagram/object diagram pairs used for cross-checking the engines.
pub const PAIRS: [(&str, &str, &str); 6] = [
    ("cd1/od1", CD1, OD1),
    ("cd1p/od1", CD1P, OD1),
    ("cd2/od1", CD2, OD1),
    ("cd2/od2", CD2, OD2),
    ("cd1/empty", CD1, OD_EMPTY),
    ("cd2/empty", CD2, OD_EMPTY),
];

/// Parses and resolves one of the shipped pairs.
pub fn pair(cd: &str, od: &str) -> crate::diagram::ResolvedPair {
    let cd = crate::diagram::parse_cd(cd).expect("fixture class diagram parses");
    let od = crate::diagram::parse_od(od).expect("fixture object diagram parses");
    crate::diagram::resolve(&cd, &od).expect("fixture pair resolves")
}
