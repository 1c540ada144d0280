#![allow(dead_code, clippy::needless_range_loop)]

pub mod oracle;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tcnet::{Graph, GraphBuilder};

/// Random connected simple undirected graph: a random spanning tree plus
/// each remaining pair with probability `p`.
pub fn random_connected(seed: u64, n: usize, p: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(false);
    b.add_node(0);
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.random_range(0..v);
        present[u][v] = true;
        b.add_edge(u, v);
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random::<f64>() < p {
                b.add_edge(u, v);
            }
        }
    }
    b.build().unwrap()
}
