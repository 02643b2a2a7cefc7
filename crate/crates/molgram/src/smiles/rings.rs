//! Cycle detection: an atom is a ring member iff it touches an edge that
//! lies on some cycle, i.e. an edge that is not a bridge.

use super::{Atom, Bond};

/// Set `ring_membership` on every atom incident to a non-bridge bond.
///
/// Bridges are found with the classic discovery-time / low-link DFS, written
/// iteratively so pathological inputs cannot overflow the call stack. The
/// parser guarantees no self-loops and no parallel bonds, so skipping the
/// single parent edge by id is exact.
pub(crate) fn mark_ring_membership(atoms: &mut [Atom], bonds: &[Bond]) {
    let n = atoms.len();
    let mut adjacency = vec![Vec::new(); n];
    for (edge_id, bond) in bonds.iter().enumerate() {
        let (a, b) = bond.endpoints;
        adjacency[a].push((b, edge_id));
        adjacency[b].push((a, edge_id));
    }

    const UNVISITED: usize = usize::MAX;
    let mut discovery = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; bonds.len()];
    let mut clock = 0usize;

    struct Frame {
        node: usize,
        parent_edge: usize,
        next_neighbor: usize,
    }

    for start in 0..n {
        if discovery[start] != UNVISITED {
            continue;
        }
        discovery[start] = clock;
        low[start] = clock;
        clock += 1;
        let mut stack = vec![Frame {
            node: start,
            parent_edge: usize::MAX,
            next_neighbor: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            let node = frame.node;
            if let Some(&(neighbor, edge_id)) = adjacency[node].get(frame.next_neighbor) {
                frame.next_neighbor += 1;
                if edge_id == frame.parent_edge {
                    continue;
                }
                if discovery[neighbor] == UNVISITED {
                    discovery[neighbor] = clock;
                    low[neighbor] = clock;
                    clock += 1;
                    stack.push(Frame {
                        node: neighbor,
                        parent_edge: edge_id,
                        next_neighbor: 0,
                    });
                } else {
                    low[node] = low[node].min(discovery[neighbor]);
                }
            } else {
                let done = stack.pop().expect("frame exists");
                if let Some(parent) = stack.last() {
                    low[parent.node] = low[parent.node].min(low[done.node]);
                    if low[done.node] > discovery[parent.node] {
                        is_bridge[done.parent_edge] = true;
                    }
                }
            }
        }
    }

    for (edge_id, bond) in bonds.iter().enumerate() {
        if !is_bridge[edge_id] {
            let (a, b) = bond.endpoints;
            atoms[a].ring_membership = true;
            atoms[b].ring_membership = true;
        }
    }
}
