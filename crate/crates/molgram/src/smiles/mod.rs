//! SMILES parsing into molecular graphs.
//!
//! The supported grammar is the organic subset commonly exercised by
//! drug-like molecules: bare atoms `B C N O P S F Cl Br I`, aromatic
//! lowercase `b c n o p s`, bracket atoms `[isotope? symbol chirality?
//! H-count? charge?]`, bond symbols `- = # :`, branches `( ... )`, and ring
//! closures `1`–`9` and `%nn`. Stereo markers (`/`, `\`, `@`, `@@`) are
//! accepted and discarded — downstream fingerprints are connectivity-based.
//! Dots (disconnected fragments) are rejected with a distinct error.
//!
//! No kekulization or valence validation is performed: aromatic rings are
//! kept as parsed, and the fingerprint layer consumes raw graph invariants.

mod parser;
mod rings;

pub use parser::parse_smiles;

use thiserror::Error;

/// The chemical elements the grammar supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    B,
    C,
    N,
    O,
    P,
    S,
    F,
    Cl,
    Br,
    I,
}

impl Element {
    /// Proton count, used as the leading field of fingerprint invariants.
    pub fn atomic_number(self) -> u8 {
        match self {
            Element::B => 5,
            Element::C => 6,
            Element::N => 7,
            Element::O => 8,
            Element::P => 15,
            Element::S => 16,
            Element::F => 9,
            Element::Cl => 17,
            Element::Br => 35,
            Element::I => 53,
        }
    }

    /// Canonical symbol as written in SMILES.
    pub fn symbol(self) -> &'static str {
        match self {
            Element::B => "B",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::P => "P",
            Element::S => "S",
            Element::F => "F",
            Element::Cl => "Cl",
            Element::Br => "Br",
            Element::I => "I",
        }
    }

    /// Only B, C, N, O, P, S may carry the aromatic flag.
    pub fn can_be_aromatic(self) -> bool {
        matches!(
            self,
            Element::B | Element::C | Element::N | Element::O | Element::P | Element::S
        )
    }
}

/// One atom of a molecular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub element: Element,
    /// True for lowercase (aromatic) atom tokens.
    pub aromatic: bool,
    /// Formal charge in elementary charge units; 0 unless a bracket says otherwise.
    pub formal_charge: i32,
    /// Mass number, when a bracket atom specifies one.
    pub isotope: Option<u32>,
    /// Explicit hydrogen count; set only for bracket atoms.
    pub explicit_hydrogens: Option<u32>,
    /// True when the atom lies on at least one cycle (set by the parser's
    /// cycle-detection pass).
    pub ring_membership: bool,
}

/// Covalent bond order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Fixed code used when hashing neighborhoods: single=1, double=2,
    /// triple=3, aromatic=4.
    pub fn code(self) -> u64 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

/// One bond of a molecular graph. Endpoints are stored with the smaller
/// atom index first, which makes duplicate detection trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub endpoints: (usize, usize),
    pub order: BondOrder,
}

/// A parsed molecule: atoms in source order, bonds, and the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularGraph {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<Bond>,
    pub source: String,
}

impl MolecularGraph {
    /// Neighbor lists: `adjacency()[i]` holds `(neighbor index, bond order)`
    /// pairs in bond-insertion order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, BondOrder)>> {
        let mut adj = vec![Vec::new(); self.atoms.len()];
        for bond in &self.bonds {
            let (a, b) = bond.endpoints;
            adj[a].push((b, bond.order));
            adj[b].push((a, bond.order));
        }
        adj
    }
}

/// Number of atoms in the graph. Hydrogens are never explicit atoms in the
/// supported grammar subset, so this counts heavy atoms; it serves as a
/// synthetic regression target in the bundled datasets.
pub fn heavy_atom_count(graph: &MolecularGraph) -> usize {
    graph.atoms.len()
}

/// Everything that can go wrong while parsing a SMILES string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid character `{ch}` at position {position}")]
    InvalidCharacter { position: usize, ch: char },
    #[error("unknown atom symbol `{symbol}` at position {position}")]
    UnknownAtomSymbol { position: usize, symbol: String },
    #[error("malformed bracket atom at position {position}: {reason}")]
    MalformedBracketAtom { position: usize, reason: String },
    #[error("malformed ring closure at position {position}")]
    MalformedRingClosure { position: usize },
    #[error("unmatched parenthesis at position {position}")]
    UnmatchedParenthesis { position: usize },
    #[error("empty branch at position {position}")]
    EmptyBranch { position: usize },
    #[error("branch opened before any atom at position {position}")]
    BranchBeforeAtom { position: usize },
    #[error("bond or ring-closure token at position {position} has no adjacent atom")]
    DanglingBond { position: usize },
    #[error("ring closure {label} bonds an atom to itself")]
    RingSelfBond { label: u16 },
    #[error("ring closure {label} specifies conflicting bond orders at its two sites")]
    RingBondConflict { label: u16 },
    #[error("duplicate bond between atoms {a} and {b}")]
    DuplicateBond { a: usize, b: usize },
    #[error("ring-closure label {label} opened but never closed")]
    UnclosedRingBond { label: u16 },
    #[error("disconnected fragments (`.`) at position {position} are not supported")]
    DisconnectedFragment { position: usize },
}

impl SmilesError {
    /// Stable variant name, used by bundled corpora to declare which error a
    /// malformed input must raise.
    pub fn variant_name(&self) -> &'static str {
        match self {
            SmilesError::EmptyInput => "EmptyInput",
            SmilesError::InvalidCharacter { .. } => "InvalidCharacter",
            SmilesError::UnknownAtomSymbol { .. } => "UnknownAtomSymbol",
            SmilesError::MalformedBracketAtom { .. } => "MalformedBracketAtom",
            SmilesError::MalformedRingClosure { .. } => "MalformedRingClosure",
            SmilesError::UnmatchedParenthesis { .. } => "UnmatchedParenthesis",
            SmilesError::EmptyBranch { .. } => "EmptyBranch",
            SmilesError::BranchBeforeAtom { .. } => "BranchBeforeAtom",
            SmilesError::DanglingBond { .. } => "DanglingBond",
            SmilesError::RingSelfBond { .. } => "RingSelfBond",
            SmilesError::RingBondConflict { .. } => "RingBondConflict",
            SmilesError::DuplicateBond { .. } => "DuplicateBond",
            SmilesError::UnclosedRingBond { .. } => "UnclosedRingBond",
            SmilesError::DisconnectedFragment { .. } => "DisconnectedFragment",
        }
    }
}

pub(crate) use rings::mark_ring_membership;
