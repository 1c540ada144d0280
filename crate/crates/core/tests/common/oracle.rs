//! Brute-force reference values for small graphs, computed by enumerating
//! every simple path and by Floyd-Warshall.

use tcnet::Graph;

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        if e.source != e.target {
            adj[e.source][e.target] = true;
            if !g.is_directed() {
                adj[e.target][e.source] = true;
            }
        }
    }
    adj
}

fn walk(adj: &[Vec<bool>], t: usize, path: &mut Vec<usize>, on: &mut [bool], found: &mut Vec<Vec<usize>>) {
    let v = *path.last().unwrap();
    if v == t {
        found.push(path.clone());
        return;
    }
    for w in 0..adj.len() {
        if adj[v][w] && !on[w] {
            on[w] = true;
            path.push(w);
            walk(adj, t, path, on, found);
            path.pop();
            on[w] = false;
        }
    }
}

/// Every simple path from `s` to `t`.
pub fn simple_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let adj = adjacency(g);
    let mut on = vec![false; adj.len()];
    on[s] = true;
    let mut found = Vec::new();
    walk(&adj, t, &mut vec![s], &mut on, &mut found);
    found
}

/// Betweenness as the fraction of shortest `s`-`t` paths through each node,
/// summed over ordered pairs and divided by `(n-1)(n-2)`.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = simple_paths(g, s, t);
            let Some(best) = paths.iter().map(Vec::len).min() else {
                continue;
            };
            let shortest: Vec<&Vec<usize>> = paths.iter().filter(|p| p.len() == best).collect();
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = shortest.iter().filter(|p| p.contains(&v)).count();
                b[v] += through as f64 / shortest.len() as f64;
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64;
    b.iter().map(|x| x / norm).collect()
}

/// All-pairs hop distances.
pub fn distances(g: &Graph) -> Vec<Vec<Option<u64>>> {
    let adj = adjacency(g);
    let n = adj.len();
    let mut d: Vec<Vec<Option<u64>>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Some(0) } else if adj[i][j] { Some(1) } else { None }).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// `(r - 1) / Σ d` over the `r` nodes reachable from each node.
pub fn closeness(g: &Graph) -> Vec<f64> {
    distances(g)
        .iter()
        .map(|row| {
            let reached: Vec<u64> = row.iter().flatten().copied().collect();
            let total: u64 = reached.iter().sum();
            if reached.len() < 2 {
                0.0
            } else {
                (reached.len() - 1) as f64 / total as f64
            }
        })
        .collect()
}
