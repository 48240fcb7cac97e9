//! Strongly connected component analysis of tournament graphs.
//!
//! Bidirectional relations expand to two directed arcs before decomposition,
//! so a tied pair is always mutually reachable. A component is non-transitive
//! when it has more than two vertices and at least one internal pair without
//! a bidirectional relation; an all-ties component encodes a consistent
//! equivalence, not a preference cycle.

use crate::error::{Error, Result};
use crate::graph::{Pairing, TournamentGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Transitive,
    NonTransitive,
}

#[derive(Debug, Clone)]
pub struct SccComponent {
    /// Vertex indices into the graph, sorted ascending.
    pub members: Vec<usize>,
    pub is_all_ties: bool,
    pub classification: Classification,
}

impl SccComponent {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct SccDecomposition {
    /// Components ordered by their smallest member index (lexicographic by
    /// vertex name, since vertices are name-sorted).
    pub components: Vec<SccComponent>,
    /// Component index of every vertex.
    pub component_of: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_singleton(&self, component: usize) -> bool {
        self.components[component].size() == 1
    }
}

/// Iterative Tarjan over the expanded arc set.
pub fn tarjan_scc(graph: &TournamentGraph) -> SccDecomposition {
    let n = graph.n();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in graph.arcs() {
        adj[u].push(v);
    }

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut raw_components: Vec<Vec<usize>> = Vec::new();

    // explicit DFS frames: (vertex, next child position)
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            let pos = *child;
            if pos < adj[v].len() {
                *child += 1;
                let w = adj[v][pos];
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    raw_components.push(component);
                }
            }
        }
    }

    raw_components.sort_by_key(|c| c[0]);
    let mut component_of = vec![0usize; n];
    for (ci, comp) in raw_components.iter().enumerate() {
        for &v in comp {
            component_of[v] = ci;
        }
    }

    let components = raw_components
        .into_iter()
        .map(|members| classify(graph, members))
        .collect();

    SccDecomposition {
        components,
        component_of,
    }
}

fn classify(graph: &TournamentGraph, members: Vec<usize>) -> SccComponent {
    // A pair with a directed relation, or with no relation at all, counts as
    // lacking a bidirectional edge.
    let mut is_all_ties = true;
    'outer: for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if graph.pairing(i, j) != Some(Pairing::Tie) {
                is_all_ties = false;
                break 'outer;
            }
        }
    }
    let classification = if members.len() > 2 && !is_all_ties {
        Classification::NonTransitive
    } else {
        Classification::Transitive
    };
    SccComponent {
        members,
        is_all_ties,
        classification,
    }
}

/// Fraction of corpus vertices that sit inside non-transitive components.
pub fn non_transitivity_ratio(graphs: &[TournamentGraph]) -> Result<f64> {
    let mut non_transitive = 0usize;
    let mut total = 0usize;
    for g in graphs {
        total += g.n();
        let decomposition = tarjan_scc(g);
        for c in &decomposition.components {
            if c.classification == Classification::NonTransitive {
                non_transitive += c.size();
            }
        }
    }
    if total == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(non_transitive as f64 / total as f64)
}
