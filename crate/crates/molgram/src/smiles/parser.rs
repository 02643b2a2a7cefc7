//! The SMILES tokenizer / state machine.

use std::collections::HashMap;

use super::{mark_ring_membership, Atom, Bond, BondOrder, Element, MolecularGraph, SmilesError};

/// Parse a SMILES string into a [`MolecularGraph`].
///
/// Atom order follows the left-to-right order of atom tokens; ring-closure
/// labels are resolved into bonds; branches become tree edges; lowercase
/// atoms are aromatic, and a ring-closure bond between two aromatic atoms
/// defaults to aromatic order. Ring membership flags are set by a
/// cycle-detection pass over the finished graph.
///
/// Leading/trailing whitespace is trimmed; all error positions are 0-based
/// character offsets into the trimmed text.
///
/// ```
/// use molgram::smiles::{parse_smiles, BondOrder};
///
/// let g = parse_smiles("CC(=O)O").unwrap();
/// assert_eq!(g.atoms.len(), 4);
/// assert_eq!(g.bonds[1].order, BondOrder::Double);
/// ```
pub fn parse_smiles(input: &str) -> Result<MolecularGraph, SmilesError> {
    let text = input.trim();
    if text.is_empty() {
        return Err(SmilesError::EmptyInput);
    }
    let mut parser = Parser::new(text);
    parser.run()?;
    parser.finish()
}

struct RingOpen {
    atom: usize,
    order: Option<BondOrder>,
    position: usize,
}

struct Branch {
    saved_prev: usize,
    atoms_at_open: usize,
    position: usize,
}

struct Parser<'a> {
    source: &'a str,
    chars: Vec<char>,
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    prev: Option<usize>,
    pending_bond: Option<(BondOrder, usize)>,
    branches: Vec<Branch>,
    ring_open: HashMap<u16, RingOpen>,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str) -> Self {
        Parser {
            source,
            chars: source.chars().collect(),
            pos: 0,
            atoms: Vec::new(),
            bonds: Vec::new(),
            prev: None,
            pending_bond: None,
            branches: Vec::new(),
            ring_open: HashMap::new(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(ch) = self.peek() {
            let pos = self.pos;
            match ch {
                'A'..='Z' | 'a'..='z' => self.organic_atom()?,
                '[' => self.bracket_atom()?,
                '0'..='9' | '%' => self.ring_closure()?,
                '-' => self.bond(BondOrder::Single)?,
                '=' => self.bond(BondOrder::Double)?,
                '#' => self.bond(BondOrder::Triple)?,
                ':' => self.bond(BondOrder::Aromatic)?,
                // Stereo bond markers carry no connectivity information.
                '/' | '\\' => self.bond(BondOrder::Single)?,
                '(' => {
                    if let Some((_, bond_pos)) = self.pending_bond {
                        return Err(SmilesError::DanglingBond { position: bond_pos });
                    }
                    let Some(prev) = self.prev else {
                        return Err(SmilesError::BranchBeforeAtom { position: pos });
                    };
                    self.branches.push(Branch {
                        saved_prev: prev,
                        atoms_at_open: self.atoms.len(),
                        position: pos,
                    });
                    self.pos += 1;
                }
                ')' => {
                    if let Some((_, bond_pos)) = self.pending_bond {
                        return Err(SmilesError::DanglingBond { position: bond_pos });
                    }
                    let branch = self
                        .branches
                        .pop()
                        .ok_or(SmilesError::UnmatchedParenthesis { position: pos })?;
                    if self.atoms.len() == branch.atoms_at_open {
                        return Err(SmilesError::EmptyBranch {
                            position: branch.position,
                        });
                    }
                    self.prev = Some(branch.saved_prev);
                    self.pos += 1;
                }
                '.' => return Err(SmilesError::DisconnectedFragment { position: pos }),
                _ => return Err(SmilesError::InvalidCharacter { position: pos, ch }),
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<MolecularGraph, SmilesError> {
        if let Some((_, bond_pos)) = self.pending_bond {
            return Err(SmilesError::DanglingBond { position: bond_pos });
        }
        if let Some(branch) = self.branches.first() {
            return Err(SmilesError::UnmatchedParenthesis {
                position: branch.position,
            });
        }
        if !self.ring_open.is_empty() {
            // Report the earliest-opened label for a deterministic message.
            let label = *self
                .ring_open
                .iter()
                .min_by_key(|(_, open)| open.position)
                .map(|(label, _)| label)
                .expect("non-empty map");
            return Err(SmilesError::UnclosedRingBond { label });
        }
        mark_ring_membership(&mut self.atoms, &self.bonds);
        Ok(MolecularGraph {
            atoms: self.atoms,
            bonds: self.bonds,
            source: self.source.to_string(),
        })
    }

    fn bond(&mut self, order: BondOrder) -> Result<(), SmilesError> {
        let pos = self.pos;
        if self.prev.is_none() {
            return Err(SmilesError::DanglingBond { position: pos });
        }
        if let Some((_, first_pos)) = self.pending_bond {
            return Err(SmilesError::DanglingBond { position: first_pos });
        }
        self.pending_bond = Some((order, pos));
        self.pos += 1;
        Ok(())
    }

    /// A bare (non-bracket) atom token: `Cl`/`Br` or one of `B C N O P S F I`
    /// uppercase, `b c n o p s` lowercase-aromatic.
    fn organic_atom(&mut self) -> Result<(), SmilesError> {
        let pos = self.pos;
        let ch = self.chars[pos];
        let next = self.chars.get(pos + 1).copied();
        let (element, aromatic, width) = match (ch, next) {
            ('C', Some('l')) => (Element::Cl, false, 2),
            ('B', Some('r')) => (Element::Br, false, 2),
            ('B', _) => (Element::B, false, 1),
            ('C', _) => (Element::C, false, 1),
            ('N', _) => (Element::N, false, 1),
            ('O', _) => (Element::O, false, 1),
            ('P', _) => (Element::P, false, 1),
            ('S', _) => (Element::S, false, 1),
            ('F', _) => (Element::F, false, 1),
            ('I', _) => (Element::I, false, 1),
            ('b', _) => (Element::B, true, 1),
            ('c', _) => (Element::C, true, 1),
            ('n', _) => (Element::N, true, 1),
            ('o', _) => (Element::O, true, 1),
            ('p', _) => (Element::P, true, 1),
            ('s', _) => (Element::S, true, 1),
            _ => {
                return Err(SmilesError::UnknownAtomSymbol {
                    position: pos,
                    symbol: ch.to_string(),
                })
            }
        };
        self.pos += width;
        self.push_atom(Atom {
            element,
            aromatic,
            formal_charge: 0,
            isotope: None,
            explicit_hydrogens: None,
            ring_membership: false,
        })
    }

    /// `[isotope? symbol chirality? H-count? charge?]`; chirality (`@`, `@@`)
    /// is accepted and discarded.
    fn bracket_atom(&mut self) -> Result<(), SmilesError> {
        let open = self.pos;
        let malformed = |reason: &str| SmilesError::MalformedBracketAtom {
            position: open,
            reason: reason.to_string(),
        };
        self.pos += 1;

        let isotope = match self.take_digits() {
            Some(digits) => {
                let value: u32 = digits.parse().map_err(|_| malformed("isotope overflows"))?;
                if value == 0 {
                    return Err(malformed("isotope must be positive"));
                }
                Some(value)
            }
            None => None,
        };

        let sym_pos = self.pos;
        let (element, aromatic) = match (self.peek(), self.chars.get(self.pos + 1).copied()) {
            (Some('C'), Some('l')) => {
                self.pos += 2;
                (Element::Cl, false)
            }
            (Some('B'), Some('r')) => {
                self.pos += 2;
                (Element::Br, false)
            }
            (Some(c), next) if c.is_ascii_alphabetic() => {
                let element = match c {
                    'B' => Element::B,
                    'C' => Element::C,
                    'N' => Element::N,
                    'O' => Element::O,
                    'P' => Element::P,
                    'S' => Element::S,
                    'F' => Element::F,
                    'I' => Element::I,
                    'b' | 'c' | 'n' | 'o' | 'p' | 's' => {
                        self.pos += 1;
                        let element = match c {
                            'b' => Element::B,
                            'c' => Element::C,
                            'n' => Element::N,
                            'o' => Element::O,
                            'p' => Element::P,
                            _ => Element::S,
                        };
                        self.push_bracket_rest(open, sym_pos, element, true, isotope)?;
                        return Ok(());
                    }
                    _ => {
                        let mut symbol = c.to_string();
                        if let Some(n) = next.filter(|n| n.is_ascii_lowercase()) {
                            symbol.push(n);
                        }
                        return Err(SmilesError::UnknownAtomSymbol {
                            position: sym_pos,
                            symbol,
                        });
                    }
                };
                self.pos += 1;
                (element, false)
            }
            (Some(_), _) => return Err(malformed("missing element symbol")),
            (None, _) => return Err(malformed("missing closing `]`")),
        };
        self.push_bracket_rest(open, sym_pos, element, aromatic, isotope)
    }

    /// Everything after the element symbol inside a bracket atom.
    fn push_bracket_rest(
        &mut self,
        open: usize,
        _sym_pos: usize,
        element: Element,
        aromatic: bool,
        isotope: Option<u32>,
    ) -> Result<(), SmilesError> {
        let malformed = |reason: &str| SmilesError::MalformedBracketAtom {
            position: open,
            reason: reason.to_string(),
        };

        // Chirality: discarded.
        if self.peek() == Some('@') {
            self.pos += 1;
            if self.peek() == Some('@') {
                self.pos += 1;
            }
        }

        let explicit_hydrogens = if self.peek() == Some('H') {
            self.pos += 1;
            match self.take_digits() {
                Some(digits) => {
                    Some(digits.parse().map_err(|_| malformed("H-count overflows"))?)
                }
                None => Some(1),
            }
        } else {
            None
        };

        let formal_charge = match self.peek() {
            Some(sign @ ('+' | '-')) => {
                let mut repeats: i32 = 0;
                while self.peek() == Some(sign) {
                    repeats += 1;
                    self.pos += 1;
                }
                let magnitude = match self.take_digits() {
                    Some(digits) => {
                        if repeats > 1 {
                            return Err(malformed("charge mixes repetition and digits"));
                        }
                        digits.parse().map_err(|_| malformed("charge overflows"))?
                    }
                    None => repeats,
                };
                if sign == '+' {
                    magnitude
                } else {
                    -magnitude
                }
            }
            _ => 0,
        };

        match self.peek() {
            Some(']') => self.pos += 1,
            Some(_) => return Err(malformed("unexpected field before `]`")),
            None => return Err(malformed("missing closing `]`")),
        }

        self.push_atom(Atom {
            element,
            aromatic,
            formal_charge,
            isotope,
            explicit_hydrogens,
            ring_membership: false,
        })
    }

    fn take_digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn ring_closure(&mut self) -> Result<(), SmilesError> {
        let pos = self.pos;
        let label: u16 = match self.chars[pos] {
            '%' => {
                let d1 = self.chars.get(pos + 1).copied();
                let d2 = self.chars.get(pos + 2).copied();
                match (d1, d2) {
                    (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                        self.pos += 3;
                        (a.to_digit(10).unwrap() * 10 + b.to_digit(10).unwrap()) as u16
                    }
                    _ => return Err(SmilesError::MalformedRingClosure { position: pos }),
                }
            }
            c @ '1'..='9' => {
                self.pos += 1;
                c.to_digit(10).unwrap() as u16
            }
            // A bare `0` is not a valid one-digit label; `%00`..`%09` cover it.
            _ => return Err(SmilesError::MalformedRingClosure { position: pos }),
        };
        let Some(current) = self.prev else {
            return Err(SmilesError::DanglingBond { position: pos });
        };
        let explicit = self.pending_bond.take().map(|(order, _)| order);
        match self.ring_open.remove(&label) {
            Some(opened) => {
                if opened.atom == current {
                    return Err(SmilesError::RingSelfBond { label });
                }
                let order = match (opened.order, explicit) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(SmilesError::RingBondConflict { label })
                    }
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => self.default_order(opened.atom, current),
                };
                self.add_bond(opened.atom, current, order)?;
            }
            None => {
                self.ring_open.insert(
                    label,
                    RingOpen {
                        atom: current,
                        order: explicit,
                        position: pos,
                    },
                );
            }
        }
        Ok(())
    }

    /// Unspecified bonds are aromatic between two aromatic atoms, single otherwise.
    fn default_order(&self, a: usize, b: usize) -> BondOrder {
        if self.atoms[a].aromatic && self.atoms[b].aromatic {
            BondOrder::Aromatic
        } else {
            BondOrder::Single
        }
    }

    fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> Result<(), SmilesError> {
        let endpoints = (a.min(b), a.max(b));
        if self.bonds.iter().any(|bond| bond.endpoints == endpoints) {
            return Err(SmilesError::DuplicateBond {
                a: endpoints.0,
                b: endpoints.1,
            });
        }
        self.bonds.push(Bond { endpoints, order });
        Ok(())
    }

    fn push_atom(&mut self, atom: Atom) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        if let Some(prev) = self.prev {
            let order = match self.pending_bond.take() {
                Some((order, _)) => order,
                None => self.default_order(prev, idx),
            };
            self.add_bond(prev, idx, order)?;
        }
        self.prev = Some(idx);
        Ok(())
    }
}
