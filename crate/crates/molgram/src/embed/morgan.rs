//! Circular fingerprints: iteratively hashed atom neighborhoods.

use ndarray::Array1;

use super::fnv::fnv1a64;
use super::{FeatureKind, FeatureVector};
use crate::smiles::MolecularGraph;

/// Binary circular fingerprint of a molecular graph.
///
/// The algorithm:
///
/// 1. Every atom gets an initial 64-bit invariant: FNV-1a over the
///    little-endian serialization of `(atomic number, degree, formal charge,
///    explicit-H count or 0, aromatic flag, ring flag)`, each field 8 bytes.
/// 2. For each radius `r = 1..=radius`, an atom's new invariant hashes
///    `(r, its previous invariant, [(bond code, neighbor's previous
///    invariant)...])` with the neighbor list sorted ascending, again as
///    8-byte little-endian fields. Bond codes: single=1, double=2, triple=3,
///    aromatic=4.
/// 3. All invariants emitted at every radius are deduplicated by value, and
///    each survivor sets bit `invariant mod nbits`.
///
/// The sorted neighbor lists make the result independent of atom indexing,
/// so any two SMILES spellings of the same molecule agree bit-for-bit.
///
/// # Panics
///
/// Panics if `nbits` is 0 or the graph has no atoms (precondition
/// violations).
///
/// ```
/// use molgram::smiles::parse_smiles;
/// use molgram::embed::morgan_fingerprint;
///
/// let forward = morgan_fingerprint(&parse_smiles("CCO").unwrap(), 2, 2048);
/// let reverse = morgan_fingerprint(&parse_smiles("OCC").unwrap(), 2, 2048);
/// assert_eq!(forward, reverse);
/// ```
pub fn morgan_fingerprint(graph: &MolecularGraph, radius: usize, nbits: usize) -> FeatureVector {
    assert!(nbits >= 1, "nbits must be positive");
    assert!(!graph.atoms.is_empty(), "graph must have at least one atom");

    let adjacency = graph.adjacency();
    let mut invariants: Vec<u64> = graph
        .atoms
        .iter()
        .enumerate()
        .map(|(i, atom)| {
            let fields: [u64; 6] = [
                u64::from(atom.element.atomic_number()),
                adjacency[i].len() as u64,
                atom.formal_charge as i64 as u64,
                u64::from(atom.explicit_hydrogens.unwrap_or(0)),
                u64::from(atom.aromatic),
                u64::from(atom.ring_membership),
            ];
            hash_fields(&fields)
        })
        .collect();

    let mut emitted = invariants.clone();
    for r in 1..=radius {
        let mut next = Vec::with_capacity(invariants.len());
        for (i, &own) in invariants.iter().enumerate() {
            let mut neighborhood: Vec<(u64, u64)> = adjacency[i]
                .iter()
                .map(|&(neighbor, order)| (order.code(), invariants[neighbor]))
                .collect();
            neighborhood.sort_unstable();
            let mut fields = Vec::with_capacity(2 + 2 * neighborhood.len());
            fields.push(r as u64);
            fields.push(own);
            for (code, neighbor_invariant) in neighborhood {
                fields.push(code);
                fields.push(neighbor_invariant);
            }
            next.push(hash_fields(&fields));
        }
        emitted.extend_from_slice(&next);
        invariants = next;
    }

    emitted.sort_unstable();
    emitted.dedup();

    let mut values = Array1::zeros(nbits);
    for invariant in emitted {
        values[(invariant % nbits as u64) as usize] = 1.0;
    }
    FeatureVector {
        values,
        kind: FeatureKind::Morgan,
    }
}

fn hash_fields(fields: &[u64]) -> u64 {
    let mut bytes = Vec::with_capacity(fields.len() * 8);
    for field in fields {
        bytes.extend_from_slice(&field.to_le_bytes());
    }
    fnv1a64(&bytes)
}
