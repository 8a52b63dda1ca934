use crate::molio::MolecularGraph;

/// Heavy-atom adjacency lists (hydrogens removed, original indices kept).
pub(crate) fn heavy_adjacency(graph: &MolecularGraph) -> Vec<Vec<usize>> {
    (0..graph.len())
        .map(|i| {
            if graph.atoms()[i].is_heavy() {
                graph.heavy_neighbors(i).map(|(j, _)| j).collect()
            } else {
                Vec::new()
            }
        })
        .collect()
}

/// Bridges of an undirected graph, as `(min, max)` pairs, via iterative
/// low-link DFS.
pub(crate) fn bridges(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = Vec::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, parent, next neighbour slot)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent, ref mut slot)) = stack.last_mut() {
            if *slot < adj[v].len() {
                let w = adj[v][*slot];
                *slot += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Connected components of the graph restricted to `edges`, listing only
/// vertices incident to at least one edge. Sorted, ordered by first member.
pub(crate) fn edge_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut touched = vec![false; n];
    for &(a, b) in edges {
        touched[a] = true;
        touched[b] = true;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in (0..n).filter(|&v| touched[v]) {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Bonds that lie on at least one cycle of the heavy-atom graph.
pub(crate) fn ring_bonds(graph: &MolecularGraph) -> Vec<(usize, usize)> {
    let adj = heavy_adjacency(graph);
    let br = bridges(&adj);
    let mut out = Vec::new();
    for (v, ns) in adj.iter().enumerate() {
        for &w in ns {
            if v < w && br.binary_search(&(v, w)).is_err() {
                out.push((v, w));
            }
        }
    }
    out
}

/// Ring systems: connected components over ring bonds. Two rings joined only
/// by a bridge (biphenyl) form two systems; fused and spiro rings form one.
pub fn find_ring_systems(graph: &MolecularGraph) -> Vec<Vec<usize>> {
    edge_components(graph.len(), &ring_bonds(graph))
}

/// Heavy-atom connected components, largest first (ties by first index).
pub(crate) fn heavy_fragments(graph: &MolecularGraph) -> Vec<Vec<usize>> {
    let adj = heavy_adjacency(graph);
    let mut seen = vec![false; graph.len()];
    let mut out = Vec::new();
    for s in graph.heavy_indices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for &w in &adj[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bridge iff removing the edge disconnects its endpoints.
    fn brute_bridges(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (v, ns) in adj.iter().enumerate() {
            for &w in ns {
                if v > w {
                    continue;
                }
                let mut seen = vec![false; adj.len()];
                let mut stack = vec![v];
                seen[v] = true;
                while let Some(x) = stack.pop() {
                    for &y in &adj[x] {
                        if (x == v && y == w) || (x == w && y == v) || seen[y] {
                            continue;
                        }
                        seen[y] = true;
                        stack.push(y);
                    }
                }
                if !seen[w] {
                    out.push((v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    #[test]
    fn bridges_match_edge_removal_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..14);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.random_bool(0.2) {
                        edges.push((a, b));
                    }
                }
            }
            let adj = adjacency(n, &edges);
            assert_eq!(bridges(&adj), brute_bridges(&adj));
        }
    }

    #[test]
    fn components_over_edges() {
        let comps = edge_components(7, &[(0, 1), (1, 2), (4, 5)]);
        assert_eq!(comps, vec![vec![0, 1, 2], vec![4, 5]]);
    }
}
