//! Bundled demo datasets and parser corpora.
//!
//! The demo set is 60 synthetic molecules in three functional-group classes
//! (alkanes, alcohols, amines; 20 each). The parser corpora pair valid
//! SMILES with hand-verified atom/bond/ring counts and malformed inputs
//! with the error each must raise.

use crate::smiles::{heavy_atom_count, parse_smiles};

/// 60 demo molecules: (SMILES, class name), 20 per class.
pub const DEMO_CLASSIFICATION: [(&str, &str); 60] = [
    ("C", "alkane"),
    ("CC", "alkane"),
    ("CCC", "alkane"),
    ("CCCC", "alkane"),
    ("CC(C)C", "alkane"),
    ("CCCCC", "alkane"),
    ("CC(C)CC", "alkane"),
    ("CC(C)(C)C", "alkane"),
    ("CCCCCC", "alkane"),
    ("CC(C)CCC", "alkane"),
    ("CCC(C)CC", "alkane"),
    ("CC(C)(C)CC", "alkane"),
    ("CCCCCCC", "alkane"),
    ("CC(C)CCCC", "alkane"),
    ("CCC(C)CCC", "alkane"),
    ("CC(C)(C)CCC", "alkane"),
    ("CCCCCCCC", "alkane"),
    ("CC(C)CCCCC", "alkane"),
    ("CCCCCCCCC", "alkane"),
    ("CCCCCCCCCC", "alkane"),
    ("CO", "alcohol"),
    ("CCO", "alcohol"),
    ("CCCO", "alcohol"),
    ("CC(C)O", "alcohol"),
    ("CCCCO", "alcohol"),
    ("CC(O)CC", "alcohol"),
    ("CC(C)CO", "alcohol"),
    ("CC(C)(C)O", "alcohol"),
    ("CCCCCO", "alcohol"),
    ("CCC(O)CC", "alcohol"),
    ("CC(C)CCO", "alcohol"),
    ("CC(C)(C)CO", "alcohol"),
    ("CCCCCCO", "alcohol"),
    ("CCCC(O)C", "alcohol"),
    ("CCCCCCCO", "alcohol"),
    ("CCCCC(O)C", "alcohol"),
    ("CCCCCCCCO", "alcohol"),
    ("CCCC(O)CC", "alcohol"),
    ("CCCCCCCCCO", "alcohol"),
    ("CC(C)C(C)O", "alcohol"),
    ("CN", "amine"),
    ("CCN", "amine"),
    ("CCCN", "amine"),
    ("CC(C)N", "amine"),
    ("CCCCN", "amine"),
    ("CC(N)CC", "amine"),
    ("CC(C)CN", "amine"),
    ("CC(C)(C)N", "amine"),
    ("CCCCCN", "amine"),
    ("CCC(N)CC", "amine"),
    ("CC(C)CCN", "amine"),
    ("CC(C)(C)CN", "amine"),
    ("CCCCCCN", "amine"),
    ("CCCC(N)C", "amine"),
    ("CCCCCCCN", "amine"),
    ("CCCCC(N)C", "amine"),
    ("CCCCCCCCN", "amine"),
    ("CCCC(N)CC", "amine"),
    ("CCCCCCCCCN", "amine"),
    ("CC(C)C(C)N", "amine"),
];

/// The demo molecules paired with a heavy-atom-count regression target.
pub fn demo_regression() -> Vec<(&'static str, f64)> {
    DEMO_CLASSIFICATION
        .iter()
        .map(|&(smiles, _)| {
            let graph = parse_smiles(smiles).expect("demo molecules always parse");
            (smiles, heavy_atom_count(&graph) as f64)
        })
        .collect()
}

/// Valid SMILES with hand-verified counts:
/// (smiles, atoms, bonds, atoms on at least one ring).
pub const PARSER_CORPUS: [(&str, usize, usize, usize); 44] = [
    ("C", 1, 0, 0),
    ("CC", 2, 1, 0),
    ("CCO", 3, 2, 0),
    ("C=C", 2, 1, 0),
    ("C#N", 2, 1, 0),
    ("O=C=O", 3, 2, 0),
    ("CC(=O)O", 4, 3, 0),
    ("CC(C)C", 4, 3, 0),
    ("CC(C)(C)C", 5, 4, 0),
    ("CCCCCCCCCC", 10, 9, 0),
    ("CC(C)CC(C)(C)C", 8, 7, 0),
    ("OCC(O)CO", 6, 5, 0),
    ("CCN", 3, 2, 0),
    ("N(C)(C)C", 4, 3, 0),
    ("CCCl", 3, 2, 0),
    ("ClCCl", 3, 2, 0),
    ("CBr", 2, 1, 0),
    ("CI", 2, 1, 0),
    ("CF", 2, 1, 0),
    ("FC(F)(F)F", 5, 4, 0),
    ("CS", 2, 1, 0),
    ("CP", 2, 1, 0),
    ("CB", 2, 1, 0),
    ("CC#CC", 4, 3, 0),
    ("C/C=C/C", 4, 3, 0),
    ("CCOC(=O)C", 6, 5, 0),
    ("CC(N)C(=O)O", 6, 5, 0),
    ("NCC(=O)O", 5, 4, 0),
    ("C[C@H](N)C(=O)O", 6, 5, 0),
    ("C[NH3+]", 2, 1, 0),
    ("[O-]C(=O)C", 4, 3, 0),
    ("[N+](C)(C)(C)C", 5, 4, 0),
    ("[13CH4]", 1, 0, 0),
    ("[NH4+]", 1, 0, 0),
    ("[CH3][CH3]", 2, 1, 0),
    ("C1CC1", 3, 3, 3),
    ("C1CCC1", 4, 4, 4),
    ("C1CCCCC1", 6, 6, 6),
    ("C1=CC=CC=C1", 6, 6, 6),
    ("C%10CCCCC%10", 6, 6, 6),
    ("S1CCCC1", 5, 5, 5),
    ("c1ccccc1", 6, 6, 6),
    ("Cc1ccccc1", 7, 7, 6),
    ("c1ccc2ccccc2c1", 10, 11, 10),
];

/// Extra valid ring systems exercising fused, bridged, and spiro layouts.
pub const RING_CORPUS: [(&str, usize, usize, usize); 6] = [
    ("c1ccncc1", 6, 6, 6),
    ("c1cc[nH]c1", 5, 5, 5),
    ("c1ccoc1", 5, 5, 5),
    ("c1ccsc1", 5, 5, 5),
    ("C1CC2CCC1CC2", 8, 9, 8),
    ("C1CC2(CC1)CC2", 7, 8, 7),
];

/// Malformed inputs and the error-variant name each must raise.
pub const MALFORMED_SMILES: [(&str, &str); 14] = [
    ("", "EmptyInput"),
    ("C$C", "InvalidCharacter"),
    ("X", "UnknownAtomSymbol"),
    ("[Zn]", "UnknownAtomSymbol"),
    ("[C", "MalformedBracketAtom"),
    ("C%1C", "MalformedRingClosure"),
    ("C(C", "UnmatchedParenthesis"),
    ("C()C", "EmptyBranch"),
    ("(CC)", "BranchBeforeAtom"),
    ("C=", "DanglingBond"),
    ("C11", "RingSelfBond"),
    ("C=1CC#1", "RingBondConflict"),
    ("C12CC12", "DuplicateBond"),
    ("C1CC", "UnclosedRingBond"),
];
